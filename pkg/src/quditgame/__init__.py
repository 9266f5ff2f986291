"""Qudit card game: d-level statevector engine, game rules, riddles, text
formats, HTTP service, CLI."""

from .qudit import (
    Histogram,
    Outcome,
    StateVector,
    apply_gate,
    basis_state,
    equal_up_to_global_phase,
    make_rng,
    measure_all,
    measure_subset,
    postselect,
    probabilities,
    sample,
)
from .gates import Card, CardSet, card_set, gate_kinds, gate_matrix, verify_unitary
from .engine import (
    GameConfig,
    GameState,
    Move,
    Score,
    end_round,
    legal_moves,
    new_game,
    play_card,
    replay_events,
    round_state,
    score,
)
from .riddles import (
    OutcomePredicateGoal,
    Riddle,
    TargetStateGoal,
    builtin_riddles,
    check_solution,
    hint,
    solve,
)
from .circuit_io import (
    CircuitDoc,
    deserialize_game,
    evaluate_circuit,
    format_state,
    parse_circuit,
    parse_log,
    parse_riddle,
    print_circuit,
    serialize_game,
    serialize_log,
    state_lines,
)

__version__ = "0.1.0"

__all__ = [
    "Card",
    "CardSet",
    "CircuitDoc",
    "GameConfig",
    "GameState",
    "Histogram",
    "Move",
    "Outcome",
    "OutcomePredicateGoal",
    "Riddle",
    "Score",
    "StateVector",
    "TargetStateGoal",
    "apply_gate",
    "basis_state",
    "builtin_riddles",
    "card_set",
    "check_solution",
    "deserialize_game",
    "end_round",
    "equal_up_to_global_phase",
    "evaluate_circuit",
    "format_state",
    "gate_kinds",
    "gate_matrix",
    "hint",
    "legal_moves",
    "make_rng",
    "measure_all",
    "measure_subset",
    "new_game",
    "parse_circuit",
    "parse_log",
    "parse_riddle",
    "play_card",
    "postselect",
    "print_circuit",
    "probabilities",
    "replay_events",
    "round_state",
    "sample",
    "score",
    "serialize_game",
    "serialize_log",
    "solve",
    "state_lines",
    "verify_unitary",
]
