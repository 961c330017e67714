"""Minesweeper engine, probabilistic solver, and benchmark harness."""

from .combine import (
    BoardContext,
    CombineInfeasibleError,
    ProbabilityMap,
    combine,
    combine_by_enumeration,
)
from .constraints import (
    Constraint,
    ConstraintSystem,
    ContradictionError,
    deductions,
    extract_constraints,
    reduce_system,
    subtract,
)
from .engine import (
    BoardConfigError,
    BoardFormatError,
    BoardSpec,
    Cell,
    GameState,
    GameStatus,
    InvalidMoveError,
    RevealOutcome,
    difficulty_spec,
    neighbors,
    new_board,
    parse_board,
    render_board,
    reveal,
)
from .exact import (
    EXACT_VAR_LIMIT,
    GroupTally,
    GroupTooLargeError,
    InconsistentGroupError,
    enumerate_group,
)
from .grouping import Group, partition
from .harness import (
    AblationReport,
    BatchReport,
    run_ablation,
    run_batch,
    wilson_interval,
)
from .oracle import exact_board_probabilities, exact_view_probabilities
from .policy import (
    GameRecord,
    MoveDecision,
    MoveKind,
    SolverConfig,
    first_move,
    next_move,
    play_game,
)
from .sampling import SamplingStarvedError, sample_group

__all__ = [name for name in dir() if not name.startswith("_")]
