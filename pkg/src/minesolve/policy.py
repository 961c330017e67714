"""Move selection: run the pipeline under a per-move time budget.

Each call works from the visible board alone: extract equations, reduce
them, and reveal a forced-safe cell if one exists. Only when logic is
stuck does the probabilistic stage run - exact tallies for small groups,
sampling for oversized ones with whatever time is left - and the move is
the minimum-probability covered cell. If no probability map can be built
in time, a cheap per-constraint estimate picks the guess instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from hashlib import blake2b
from time import monotonic
from typing import Mapping, Optional, Union

from .combine import BoardContext, CombineInfeasibleError, combine
from .constraints import (
    ConstraintSystem,
    deductions,
    extract_constraints,
    reduce_system,
)
from .engine import (
    BoardSpec,
    Cell,
    GameState,
    GameStatus,
    InvalidMoveError,
    new_board,
    reveal,
)
from .exact import (
    EXACT_VAR_LIMIT,
    GroupTooLargeError,
    InconsistentGroupError,
    enumerate_group,
)
from .grouping import Group, partition
from .sampling import MAX_SAMPLES_DEFAULT, SAMPLER_MODES, SamplingStarvedError, sample_group

MODES = ("full", "exact", "logic")
PIPELINE_DEPTHS = ("logic", "exact", "sampled", "fallback")

# reserved for assembling the move out of tallies and the final argmin
_BUDGET_RESERVE_S = 0.15


class MoveKind(Enum):
    FIRST_MOVE = "first_move"
    REVEAL_SAFE = "reveal_safe"
    GUESS = "guess"


@dataclass(frozen=True)
class SolverConfig:
    budget_ms: float = 5000.0
    mode: str = "full"
    first_move: Union[str, tuple[int, int]] = "center"
    tie_break: str = "row_major"
    sea_coupling: bool = True
    sampler_mode: str = "importance"
    max_samples: int = MAX_SAMPLES_DEFAULT
    exact_var_limit: int = EXACT_VAR_LIMIT

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.sampler_mode not in SAMPLER_MODES:
            raise ValueError(f"unknown sampler_mode {self.sampler_mode!r}")
        if self.tie_break != "row_major":
            raise ValueError("only row_major tie-breaking is supported")
        if self.budget_ms <= 0:
            raise ValueError("budget_ms must be positive")


@dataclass(frozen=True)
class MoveDecision:
    kind: MoveKind
    cell: Cell
    prob: float
    elapsed_ms: float
    pipeline_depth: str


@dataclass(frozen=True)
class MoveRecord:
    cell: Cell
    kind: str
    pipeline_depth: str
    prob: float
    move_ms: float
    result: object  # revealed value, or "boom"


@dataclass
class GameRecord:
    spec: BoardSpec
    seed: int
    won: bool
    loss_on_first_move: bool
    moves: list[MoveRecord] = field(default_factory=list)

    def move_times_ms(self) -> list[float]:
        return [m.move_ms for m in self.moves]


def first_move(spec: BoardSpec) -> Cell:
    """Deterministic opening: the board center."""
    return Cell(spec.height // 2, spec.width // 2)


def derive_seed(*parts: int) -> int:
    """Stable 64-bit seed from integer parts (same on every platform)."""
    h = blake2b(digest_size=8)
    for p in parts:
        h.update(int(p).to_bytes(16, "big", signed=True))
    return int.from_bytes(h.digest(), "big")


def argmin_cell(probs: Mapping[Cell, float]) -> tuple[Cell, float]:
    """Lowest-probability cell; ties go to the lowest row-major index."""
    cell, prob = min(probs.items(), key=lambda kv: (kv[1], kv[0]))
    return cell, prob


def _opening_cell(spec: BoardSpec, config: SolverConfig) -> Cell:
    choice = config.first_move
    if choice == "center":
        return first_move(spec)
    if choice == "corner":
        return Cell(0, 0)
    if isinstance(choice, str):
        try:
            r, c = (int(x) for x in choice.split(","))
        except ValueError:
            raise ValueError(f"bad first_move {choice!r}") from None
    else:
        r, c = choice
    cell = Cell(r, c)
    if not spec.in_bounds(cell):
        raise ValueError(f"first_move {cell} out of bounds")
    return cell


def _heuristic_probs(system: ConstraintSystem, sea: list[Cell],
                     remaining_mines: int) -> dict[Cell, float]:
    """Per-cell estimate without counting: mean rhs/|vars| over the
    constraints containing the cell; sea cells get the uniform share."""
    sums: dict[Cell, float] = {}
    hits: dict[Cell, int] = {}
    for constraint in system.constraints:
        density = constraint.rhs / len(constraint.vars)
        for cell in constraint.vars:
            sums[cell] = sums.get(cell, 0.0) + density
            hits[cell] = hits.get(cell, 0) + 1
    probs = {cell: sums[cell] / hits[cell] for cell in sums}
    if sea:
        share = min(1.0, max(0.0, remaining_mines / len(sea)))
        for cell in sea:
            probs[cell] = share
    return probs


def next_move(state: GameState, budget_ms: Optional[float] = None,
              config: Optional[SolverConfig] = None) -> MoveDecision:
    """Decide one move for the current position within the time budget."""
    t0 = monotonic()
    config = config or SolverConfig()
    budget_s = (budget_ms if budget_ms is not None else config.budget_ms) / 1000.0
    if state.status is not GameStatus.IN_PROGRESS:
        raise InvalidMoveError("game is over")
    spec = state.spec

    def done(kind: MoveKind, cell: Cell, prob: float, depth: str) -> MoveDecision:
        return MoveDecision(kind, cell, prob, (monotonic() - t0) * 1000.0, depth)

    if state.revealed_count() == 0:
        cell = _opening_cell(spec, config)
        prob = 0.0 if spec.first_click_safe else spec.mine_count / spec.cells
        return done(MoveKind.FIRST_MOVE, cell, prob, "logic")

    reduced = reduce_system(extract_constraints(state))
    safe, found_mines = deductions(reduced)
    if safe:
        return done(MoveKind.REVEAL_SAFE, min(safe), 0.0, "logic")

    remaining = spec.mine_count - len(found_mines)
    covered = [c for c in state.covered_cells() if c not in reduced.known]
    group_cells = reduced.variables()
    sea = [c for c in covered if c not in group_cells]

    probs: Optional[Mapping[Cell, float]] = None
    depth = "fallback"
    if config.mode != "logic":
        probs, depth = _probability_map(
            reduced, sea, remaining, config,
            deadline=t0 + budget_s - _BUDGET_RESERVE_S,
            seed_parts=(spec.seed, len(state.moves)),
        )
    if probs is None:
        probs = _heuristic_probs(reduced, sea, remaining)
        depth = "fallback"
    cell, prob = argmin_cell(probs)
    return done(MoveKind.GUESS, cell, prob, depth)


def _probability_map(reduced: ConstraintSystem, sea: list[Cell],
                     remaining_mines: int, config: SolverConfig,
                     deadline: float, seed_parts: tuple[int, ...],
                     ) -> tuple[Optional[Mapping[Cell, float]], str]:
    """Tally every group and fuse. Returns (probs, depth) or (None, ...)
    when the budget ran out before a usable map existed."""
    groups = partition(reduced)
    tallies = []
    oversized: list[tuple[int, Group]] = []
    for idx, group in enumerate(groups):
        if len(group.vars) > config.exact_var_limit:
            oversized.append((idx, group))
            continue
        try:
            tallies.append(enumerate_group(group, idx, deadline=deadline))
        except GroupTooLargeError:
            oversized.append((idx, group))

    depth = "exact"
    heuristic_cells: list[Group] = []
    if oversized:
        if config.mode == "exact":
            heuristic_cells = [g for _, g in oversized]
        else:
            depth = "sampled"
            for n_left, (idx, group) in enumerate(oversized):
                share = (deadline - monotonic()) / (len(oversized) - n_left)
                if share <= 0:
                    return None, depth
                try:
                    tallies.append(sample_group(
                        group, config.max_samples, share,
                        derive_seed(*seed_parts, idx),
                        mode=config.sampler_mode, group_id=idx,
                    ))
                except SamplingStarvedError:
                    return None, depth

    if config.mode == "exact":
        probs: dict[Cell, float] = {}
        expected = 0.0
        for tally in tallies:
            probs.update(tally.marginals())
            expected += tally.expected_mines()
        for group in heuristic_cells:
            partial = _heuristic_probs(
                ConstraintSystem(frozenset(group.constraints), {}), [], 0
            )
            expected += sum(partial.values())
            probs.update(partial)
        if sea:
            share = min(1.0, max(0.0, (remaining_mines - expected) / len(sea)))
            for cell in sea:
                probs[cell] = share
        return probs, depth

    ctx = BoardContext(remaining_mines, frozenset(sea))
    try:
        pmap = combine(tallies, ctx, sea_coupling=config.sea_coupling)
    except (CombineInfeasibleError, InconsistentGroupError):
        return None, depth
    return pmap.probs, depth


def play_game(spec: BoardSpec, budget_ms: Optional[float] = None,
              config: Optional[SolverConfig] = None,
              seed: Optional[int] = None) -> GameRecord:
    """Play one full game; every move and its wall time are recorded."""
    config = config or SolverConfig()
    if seed is not None:
        spec = replace(spec, seed=seed)
    opening = _opening_cell(spec, config)
    state = new_board(spec, opening if spec.first_click_safe else None)
    record = GameRecord(spec=spec, seed=spec.seed, won=False,
                        loss_on_first_move=False)
    while state.status is GameStatus.IN_PROGRESS:
        t0 = monotonic()
        decision = next_move(state, budget_ms, config)
        outcome = reveal(state, decision.cell)
        record.moves.append(MoveRecord(
            cell=decision.cell,
            kind=decision.kind.value,
            pipeline_depth=decision.pipeline_depth,
            prob=decision.prob,
            move_ms=(monotonic() - t0) * 1000.0,
            result="boom" if outcome.mine else outcome.value,
        ))
    record.won = state.status is GameStatus.WON
    record.loss_on_first_move = not record.won and len(record.moves) == 1
    return record
