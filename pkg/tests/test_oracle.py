from fractions import Fraction

import pytest

from minesolve.engine import Cell, parse_board
from minesolve.oracle import (
    NoConsistentPlacementError,
    OracleLimitError,
    exact_board_probabilities,
    exact_view_probabilities,
)

from helpers import A, B, C, ONE_TWO_ONE_TEXT, cells


def test_one_two_one_view():
    # hand check over the 8 assignments of (A, B, C) with 2 mines total:
    # only A=C=mine, B=safe matches clues 1,2,1
    probs = exact_board_probabilities(parse_board(ONE_TWO_ONE_TEXT))
    assert probs == {A: Fraction(1), B: Fraction(0), C: Fraction(1)}


def test_fully_covered_board_is_uniform():
    covered = set(cells(*((r, c) for r in range(3) for c in range(3))))
    probs = exact_view_probabilities(3, 3, {}, covered, total_mines=1)
    assert all(p == Fraction(1, 9) for p in probs.values())
    assert len(probs) == 9


def test_center_eight_forces_all_neighbors():
    covered = {Cell(r, c) for r in range(3) for c in range(3)} - {Cell(1, 1)}
    probs = exact_view_probabilities(3, 3, {Cell(1, 1): 8}, covered, total_mines=8)
    assert all(p == Fraction(1) for p in probs.values())


def test_total_probability_is_exactly_remaining_mines():
    state = parse_board("4 4 5\n*..*\n.*..\n..*.\n...*\n\n####\n####\n####\nRR##\n")
    probs = exact_board_probabilities(state)
    assert sum(probs.values()) == Fraction(5)


def test_known_cells_are_honored():
    probs = exact_board_probabilities(parse_board(ONE_TWO_ONE_TEXT), known={A: 1})
    assert probs == {B: Fraction(0), C: Fraction(1)}


def test_too_many_covered_cells_rejected():
    covered = {Cell(r, c) for r in range(6) for c in range(6)}
    with pytest.raises(OracleLimitError):
        exact_view_probabilities(6, 6, {}, covered, total_mines=3)


def test_inconsistent_view_rejected():
    covered = {Cell(0, 0), Cell(0, 1)}
    with pytest.raises(NoConsistentPlacementError):
        exact_view_probabilities(3, 1, {Cell(0, 2): 2}, covered, total_mines=1)
    with pytest.raises(NoConsistentPlacementError):
        exact_view_probabilities(3, 1, {}, covered, total_mines=5)
