"""Exhaustive per-group model counting, tallied by mine count and by cell.

A group's tally records N(k), the number of satisfying assignments placing
exactly k mines, and C(cell, k), the number of those in which a given cell
is the mine. Groups are small (the reduction and decomposition stages keep
them that way), so a pruned layer-by-layer search is exact and fast.
"""

from __future__ import annotations

from dataclasses import dataclass
from time import monotonic

import numpy as np

from .engine import Cell
from .grouping import Group

# Past ~22 variables exact counting stops paying for itself within the move
# budget; callers should fall back to sampling.
EXACT_VAR_LIMIT = 22

# Hard cap on simultaneously live partial assignments (memory/time guard).
MAX_FRONTIER_ROWS = 1 << 20


class GroupTooLargeError(ValueError):
    """Group exceeds the exact-enumeration threshold; sample it instead."""


class InconsistentGroupError(ValueError):
    """No assignment satisfies the group - an upstream bug."""


@dataclass
class GroupTally:
    """Satisfying-assignment counts for one group.

    counts[k] is N(k); cell_counts[(cell, k)] is C(cell, k). Exact tallies
    hold integers; sampled tallies hold importance weights (floats) that
    estimate the same quantities up to one common scale factor.
    """

    group_id: int
    cells: tuple[Cell, ...]
    counts: dict[int, float]
    cell_counts: dict[tuple[Cell, int], float]
    exact: bool
    samples_used: int = 0
    nodes_visited: int = 0
    recorded: tuple = ()

    def total(self) -> float:
        return sum(self.counts.values())

    def marginals(self) -> dict[Cell, float]:
        """Per-cell mine probability within the group, ignoring any global
        mine-budget coupling."""
        total = self.total()
        return {
            cell: sum(self.cell_counts.get((cell, k), 0) for k in self.counts) / total
            for cell in self.cells
        }

    def expected_mines(self) -> float:
        total = self.total()
        return sum(k * n for k, n in self.counts.items()) / total


def group_arrays(group: Group, order: list[Cell]) -> tuple[np.ndarray, np.ndarray]:
    """(membership matrix, rhs vector) with variables in the given order."""
    pos = {cell: i for i, cell in enumerate(order)}
    a = np.zeros((len(group.constraints), len(order)), dtype=np.int16)
    rhs = np.zeros(len(group.constraints), dtype=np.int16)
    for ci, constraint in enumerate(group.constraints):
        for cell in constraint.vars:
            a[ci, pos[cell]] = 1
        rhs[ci] = constraint.rhs
    return a, rhs


def _static_order(group: Group) -> list[Cell]:
    # most-constrained variable first; ties broken by cell order
    degree: dict[Cell, int] = {cell: 0 for cell in group.vars}
    for constraint in group.constraints:
        for cell in constraint.vars:
            degree[cell] += 1
    return sorted(group.vars, key=lambda cell: (-degree[cell], cell))


def enumerate_group(group: Group, group_id: int = 0,
                    deadline: float | None = None) -> GroupTally:
    """Count every satisfying assignment of the group exactly.

    Partial assignments advance one variable per layer; a branch survives
    only while each constraint's running sum can still reach its rhs.
    nodes_visited counts terminal states (dead ends plus solutions), which
    never exceeds 2^n. `deadline` is an optional time.monotonic() cutoff;
    exceeding it raises GroupTooLargeError so the caller can sample.
    """
    n = len(group.vars)
    if n == 0:
        raise InconsistentGroupError("empty group")
    if n > EXACT_VAR_LIMIT:
        raise GroupTooLargeError(f"{n} variables exceeds limit {EXACT_VAR_LIMIT}")

    order = _static_order(group)
    a, rhs = group_arrays(group, order)
    n_cons = a.shape[0]
    # unassigned-variable count per constraint, updated as layers advance
    remaining = a.sum(axis=1).astype(np.int16)

    assigns = np.zeros((1, n), dtype=np.uint8)
    sums = np.zeros((1, n_cons), dtype=np.int16)
    dead_ends = 0

    for step in range(n):
        member = np.flatnonzero(a[:, step])
        remaining[member] -= 1
        # value 1 needs sum+1 <= rhs; value 0 needs rhs still reachable
        sub = sums[:, member]
        feas1 = (sub < rhs[member]).all(axis=1)
        feas0 = (sub >= rhs[member] - remaining[member]).all(axis=1)
        dead_ends += int((~feas0 & ~feas1).sum())

        parts = []
        sum_parts = []
        if feas0.any():
            rows = assigns[feas0]
            parts.append(rows)
            sum_parts.append(sums[feas0])
        if feas1.any():
            rows = assigns[feas1].copy()
            rows[:, step] = 1
            parts.append(rows)
            s = sums[feas1].copy()
            s[:, member] += 1
            sum_parts.append(s)
        if not parts:
            raise InconsistentGroupError(
                f"group over {len(group.vars)} cells has no satisfying assignment"
            )
        assigns = np.concatenate(parts) if len(parts) > 1 else parts[0]
        sums = np.concatenate(sum_parts) if len(sum_parts) > 1 else sum_parts[0]
        if assigns.shape[0] > MAX_FRONTIER_ROWS:
            raise GroupTooLargeError(
                f"search frontier exceeded {MAX_FRONTIER_ROWS} rows"
            )
        if deadline is not None and monotonic() > deadline:
            raise GroupTooLargeError("exact enumeration ran past its deadline")

    # every surviving row satisfies all constraints: each constraint ends
    # with no unassigned variables and a reachable rhs, hence sum == rhs
    ks = assigns.sum(axis=1).astype(np.int64)
    counts: dict[int, float] = {}
    cell_counts: dict[tuple[Cell, int], float] = {}
    for k in np.unique(ks):
        mask = ks == k
        counts[int(k)] = int(mask.sum())
        per_cell = assigns[mask].sum(axis=0)
        for i, cell in enumerate(order):
            cell_counts[(cell, int(k))] = int(per_cell[i])
    return GroupTally(
        group_id=group_id,
        cells=tuple(sorted(group.vars)),
        counts=counts,
        cell_counts=cell_counts,
        exact=True,
        nodes_visited=dead_ends + assigns.shape[0],
    )
