import random
from itertools import product

import pytest

from minesolve.exact import (
    EXACT_VAR_LIMIT,
    GroupTooLargeError,
    InconsistentGroupError,
    enumerate_group,
)
from minesolve.grouping import Group, partition

from helpers import A, B, C, cells, con, random_connected_group, system


def naive_tally(group):
    """Oracle: test all 2^n assignments directly."""
    variables = sorted(group.vars)
    counts, cell_counts = {}, {}
    for bits in product((0, 1), repeat=len(variables)):
        assign = dict(zip(variables, bits))
        if not all(sum(assign[v] for v in c.vars) == c.rhs for c in group.constraints):
            continue
        k = sum(bits)
        counts[k] = counts.get(k, 0) + 1
        for v, bit in assign.items():
            if bit:
                cell_counts[(v, k)] = cell_counts.get((v, k), 0) + 1
    return counts, cell_counts


def group_of(*constraints) -> Group:
    groups = partition(system(*constraints))
    assert len(groups) == 1
    return groups[0]


def test_pair_group():
    tally = enumerate_group(group_of(con([A, B], 1)))
    assert tally.counts == {1: 2}
    assert tally.cell_counts[(A, 1)] == 1
    assert tally.cell_counts[(B, 1)] == 1
    assert tally.exact


def test_triple_choose_two():
    tally = enumerate_group(group_of(con([A, B, C], 2)))
    assert tally.counts == {2: 3}
    assert all(tally.cell_counts[(v, 2)] == 2 for v in (A, B, C))


ONE_TWO_ONE = (con([A, B], 1), con([A, B, C], 2), con([B, C], 1))


def test_one_two_one_group():
    expected_counts, expected_cells = naive_tally(group_of(*ONE_TWO_ONE))
    assert expected_counts == {2: 1}

    tally = enumerate_group(group_of(*ONE_TWO_ONE))
    assert tally.counts == expected_counts
    assert tally.cell_counts[(A, 2)] == 1
    assert tally.cell_counts[(C, 2)] == 1
    assert tally.cell_counts[(B, 2)] == 0
    assert {k: v for k, v in tally.cell_counts.items() if v} == {
        k: v for k, v in expected_cells.items() if v
    }


def test_one_two_one_prunes_below_eight_nodes():
    tally = enumerate_group(group_of(*ONE_TWO_ONE))
    assert tally.nodes_visited < 8


def test_matches_naive_enumeration_on_random_groups():
    rng = random.Random(41)
    for _ in range(40):
        group = random_connected_group(rng, rng.randint(3, 12), rng.randint(2, 6))
        counts, cell_counts = naive_tally(group)
        tally = enumerate_group(group)
        assert tally.counts == counts
        assert {k: v for k, v in tally.cell_counts.items() if v} == cell_counts


def test_tally_invariants():
    rng = random.Random(43)
    for _ in range(30):
        group = random_connected_group(rng, rng.randint(3, 10), rng.randint(2, 5))
        tally = enumerate_group(group)
        assert sum(tally.counts.values()) >= 1
        for k, n in tally.counts.items():
            per_cell = [tally.cell_counts[(v, k)] for v in tally.cells]
            assert all(0 <= c <= n for c in per_cell)
            assert sum(per_cell) == k * n


def test_nodes_never_exceed_two_to_the_n():
    rng = random.Random(47)
    for _ in range(30):
        n = rng.randint(3, 12)
        group = random_connected_group(rng, n, rng.randint(2, 6))
        tally = enumerate_group(group)
        assert tally.nodes_visited <= 2 ** len(group.vars)


def test_tally_independent_of_variable_order():
    rng = random.Random(53)
    group = random_connected_group(rng, 9, 4)
    base = enumerate_group(group)
    for _ in range(5):
        shuffled = list(group.vars)
        rng.shuffle(shuffled)
        permuted = Group(constraints=group.constraints, vars=tuple(shuffled))
        tally = enumerate_group(permuted)
        assert tally.counts == base.counts
        assert tally.cell_counts == base.cell_counts


def test_group_above_threshold_rejected():
    big = cells(*((0, i) for i in range(EXACT_VAR_LIMIT + 1)))
    group = group_of(con(big, 3))
    with pytest.raises(GroupTooLargeError):
        enumerate_group(group)


def test_inconsistent_group_rejected():
    # A+B=2 forces both mines, B+C=0 forces B safe
    group = Group(
        constraints=(con([A, B], 2), con([B, C], 0), con([A, C], 1)),
        vars=(A, B, C),
    )
    with pytest.raises(InconsistentGroupError):
        enumerate_group(group)
