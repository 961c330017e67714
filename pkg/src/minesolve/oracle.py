"""Ground-truth probabilities by brute force, for small positions.

Deliberately shares no machinery with the solving pipeline: it enumerates
every placement of the remaining mines over the covered cells, keeps the
placements consistent with all revealed clue values, and reports exact
per-cell mine frequencies as rationals. Slow on purpose; it exists to
check the pipeline, not to play.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, islice
from typing import Mapping, Optional

import numpy as np

from .engine import Cell, GameState

MAX_OPEN_CELLS = 25

_CHUNK = 4096


class OracleLimitError(ValueError):
    """Too many covered cells for brute-force enumeration."""


class NoConsistentPlacementError(ValueError):
    """No mine placement matches the revealed values."""


def exact_view_probabilities(width: int, height: int,
                             clues: Mapping[Cell, int],
                             covered: set[Cell],
                             total_mines: int,
                             known: Optional[Mapping[Cell, int]] = None,
                             ) -> dict[Cell, Fraction]:
    """Exact mine probability for every covered, unassigned cell of a view.

    clues maps each revealed cell to its displayed value. known maps cells
    to 0 (safe) or 1 (mine) and is honored in every placement.
    """
    known = dict(known) if known else {}
    open_cells = sorted(c for c in covered if c not in known)
    remaining = total_mines - sum(v for v in known.values() if v == 1)
    if len(open_cells) > MAX_OPEN_CELLS:
        raise OracleLimitError(
            f"{len(open_cells)} covered cells exceeds limit {MAX_OPEN_CELLS}"
        )
    if remaining < 0 or remaining > len(open_cells):
        raise NoConsistentPlacementError(
            f"{remaining} mines cannot be placed on {len(open_cells)} cells"
        )

    def around(cell: Cell) -> list[Cell]:
        out = []
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                if dr == 0 and dc == 0:
                    continue
                rr, cc = cell.row + dr, cell.col + dc
                if 0 <= rr < height and 0 <= cc < width:
                    out.append(Cell(rr, cc))
        return out

    pos = {cell: i for i, cell in enumerate(open_cells)}
    n = len(open_cells)
    # each clue: which open cells it touches, and how many of them must be mines
    member = []
    need = []
    for cell, value in clues.items():
        row = np.zeros(n, dtype=np.int8)
        want = value
        for nb in around(cell):
            if nb in pos:
                row[pos[nb]] = 1
            elif known.get(nb) == 1:
                want -= 1
        member.append(row)
        need.append(want)
    member_m = np.array(member, dtype=np.int8).reshape(len(member), n)
    need_v = np.array(need, dtype=np.int64)

    hits = np.zeros(n, dtype=np.int64)
    consistent = 0
    if remaining == 0:
        if bool((need_v == 0).all()):
            consistent = 1
    else:
        combo_iter = combinations(range(n), remaining)
        while True:
            block = list(islice(combo_iter, _CHUNK))
            if not block:
                break
            rows = np.array(block, dtype=np.int64)
            placements = np.zeros((rows.shape[0], n), dtype=np.int8)
            np.put_along_axis(placements, rows, np.int8(1), axis=1)
            ok = (placements @ member_m.T == need_v).all(axis=1)
            consistent += int(ok.sum())
            hits += placements[ok].sum(axis=0, dtype=np.int64)

    if consistent == 0:
        raise NoConsistentPlacementError("no placement matches the clues")
    return {cell: Fraction(int(hits[pos[cell]]), consistent) for cell in open_cells}


def exact_board_probabilities(state: GameState,
                              known: Optional[Mapping[Cell, int]] = None,
                              ) -> dict[Cell, Fraction]:
    """Exact probabilities for a live game, from its visible side only."""
    spec = state.spec
    clues: dict[Cell, int] = {}
    covered: set[Cell] = set()
    for i in range(spec.cells):
        cell = spec.cell(i)
        if state.revealed[i]:
            clues[cell] = state.values[i]
        else:
            covered.add(cell)
    return exact_view_probabilities(
        spec.width, spec.height, clues, covered, spec.mine_count, known
    )
