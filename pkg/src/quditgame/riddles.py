"""Single-player riddles: built-in set, solution checking, brute-force solver.

A riddle starts from a basis state and asks for a card sequence (within an
allowed multiset and a length budget) that either reaches a target state up
to global phase, or produces measurement outcomes satisfying a named
predicate.  Predicates are decided by exact enumeration of the final state's
probabilities, never by sampling.

The solver is an iterative-deepening exhaustive search over card sequences
and target assignments, so it doubles as the oracle for solution minimality:
whatever it returns at depth L cannot be beaten below L, because all
shallower depths were exhausted first.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .engine import Move
from .errors import QuditGameError
from .gates import Card, arity, gate_matrix
from .qudit import (
    StateVector,
    apply_gate,
    basis_state,
    equal_up_to_global_phase,
    probabilities,
)

ACHIEVABLE_EPS = 1e-10
MAX_SEARCH_DEPTH = 8
GOAL_STATE_TOL = 1e-9

PREDICATES = ("all_equal", "differ_by", "qudit_is")


class RiddleError(QuditGameError):
    code = "riddle-error"


class DisallowedCardError(RiddleError):
    """Solution uses a card outside the allowed multiset (not a wrong answer)."""

    code = "disallowed-card"


class SolutionTooLongError(RiddleError):
    code = "solution-too-long"


@dataclass(frozen=True)
class TargetStateGoal:
    """Reach this state, up to global phase."""

    state: StateVector
    tol: float = GOAL_STATE_TOL


@dataclass(frozen=True)
class OutcomePredicateGoal:
    """Named condition over the achievable measurement outcomes.

    all_equal       every achievable outcome has all digits equal, and at
                    least two outcomes are achievable (correlated randomness,
                    not a fixed basis state).
    differ_by k     consecutive digits of every achievable outcome differ by
                    k mod d; again at least two achievable outcomes.
    qudit_is q v    qudit q (1-based) measures v with certainty.
    """

    predicate: str
    args: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.predicate not in PREDICATES:
            raise RiddleError(f"unknown predicate {self.predicate!r}")


Goal = TargetStateGoal | OutcomePredicateGoal


@dataclass(frozen=True)
class Riddle:
    id: int
    dim: int
    num_qudits: int
    initial: tuple[int, ...]
    cards: Mapping[Card, int]
    goal: Goal
    max_cards: int
    difficulty: str
    explanation: str


def initial_state(riddle: Riddle) -> StateVector:
    return basis_state(riddle.dim, riddle.initial)


def check_goal(goal: Goal, state: StateVector) -> bool:
    if isinstance(goal, TargetStateGoal):
        return equal_up_to_global_phase(state, goal.state, goal.tol)
    achievable = [o for o, p in probabilities(state).items() if p > ACHIEVABLE_EPS]
    if goal.predicate == "all_equal":
        return len(achievable) >= 2 and all(len(set(o)) == 1 for o in achievable)
    if goal.predicate == "differ_by":
        (k,) = goal.args
        ok = all(
            (o[i + 1] - o[i]) % state.dim == k % state.dim
            for o in achievable
            for i in range(len(o) - 1)
        )
        return len(achievable) >= 2 and ok
    (q, v) = goal.args
    return all(o[q - 1] == v for o in achievable)


def describe_goal(goal: Goal, dim: int) -> str:
    """Human-readable goal line for listings and the UI."""
    if isinstance(goal, TargetStateGoal):
        probs = probabilities(goal.state)
        if len(probs) == 1:
            digits = ",".join(str(v) for v in next(iter(probs)))
            return f"reach |{digits}> with certainty"
        return "reach the target state (up to global phase)"
    if goal.predicate == "all_equal":
        return "all qudits must always measure the same random value"
    if goal.predicate == "differ_by":
        return f"measured values must always differ by {goal.args[0]} (mod {dim})"
    q, v = goal.args
    return f"qudit {q} must always measure {v}"


def riddle_summary(riddle: Riddle) -> dict:
    """Spoiler-free JSON-ready listing entry (no explanation text)."""
    return {
        "id": riddle.id,
        "dim": riddle.dim,
        "num_qudits": riddle.num_qudits,
        "initial": list(riddle.initial),
        "cards": {c.value: k for c, k in sorted(riddle.cards.items(), key=lambda kv: kv[0].value)},
        "max_cards": riddle.max_cards,
        "difficulty": riddle.difficulty,
        "goal": describe_goal(riddle.goal, riddle.dim),
    }


def _uniform_superposition(dim: int) -> StateVector:
    return StateVector(dim, 1, np.full(dim, 1 / np.sqrt(dim), dtype=complex))


def _bell_pair() -> StateVector:
    amps = np.zeros(4, dtype=complex)
    amps[0] = amps[3] = 1 / np.sqrt(2)
    return StateVector(2, 2, amps)


def builtin_riddles() -> tuple[Riddle, ...]:
    """The six shipped riddles, ordered by increasing difficulty."""
    return (
        Riddle(
            id=1,
            dim=2,
            num_qudits=1,
            initial=(0,),
            cards={Card.H1: 2, Card.X1: 2},
            goal=TargetStateGoal(_uniform_superposition(2)),
            max_cards=2,
            difficulty="easy",
            explanation=(
                "A single H1 puts the qudit into an equal superposition of 0 and 1: "
                "both values are present at once, and a measurement picks one of them "
                "at random. Superpositions like this are the raw material every "
                "quantum computation starts from."
            ),
        ),
        Riddle(
            id=2,
            dim=2,
            num_qudits=1,
            initial=(0,),
            cards={Card.H1: 2, Card.Z: 1},
            goal=TargetStateGoal(basis_state(2, [1])),
            max_cards=3,
            difficulty="easy",
            explanation=(
                "H1 alone only creates randomness, and two H1 cards in a row cancel "
                "out. Slipping the Z card between them flips the sign of the |1> part, "
                "so the second H1 interferes the amplitudes into |1> with certainty. "
                "Steering outcomes through phases is quantum interference, the working "
                "principle behind most quantum speedups."
            ),
        ),
        Riddle(
            id=3,
            dim=2,
            num_qudits=2,
            initial=(0, 0),
            cards={Card.H1: 1, Card.CX: 1},
            goal=TargetStateGoal(_bell_pair()),
            max_cards=2,
            difficulty="medium",
            explanation=(
                "H1 on the first qudit followed by CX onto the second entangles them: "
                "each measurement result is random, yet both qudits always agree. "
                "Neither qudit has a value of its own anymore; only the pair does."
            ),
        ),
        Riddle(
            id=4,
            dim=2,
            num_qudits=2,
            initial=(0, 0),
            cards={Card.H1: 1, Card.CX: 1, Card.X1: 1},
            goal=OutcomePredicateGoal("differ_by", (1,)),
            max_cards=3,
            difficulty="medium",
            explanation=(
                "Entangle the pair first, then shift one side with X1: the outcomes "
                "stay perfectly correlated but now always disagree. Local gates can "
                "reshape a correlation without destroying it, which is how entangled "
                "states are steered in real devices."
            ),
        ),
        Riddle(
            id=5,
            dim=3,
            num_qudits=3,
            initial=(0, 0, 0),
            cards={Card.H1: 1, Card.CX: 2},
            goal=OutcomePredicateGoal("all_equal"),
            max_cards=3,
            difficulty="hard",
            explanation=(
                "One H1 creates a three-way superposition, and chaining CX cards "
                "copies its value onto the other qudits. All three players then share "
                "one random value in {0,1,2}: multi-party entanglement. States like "
                "this are what make quantum networks and error correction possible."
            ),
        ),
        Riddle(
            id=6,
            dim=3,
            num_qudits=1,
            initial=(0,),
            cards={Card.X1: 2, Card.H1: 4},
            goal=TargetStateGoal(basis_state(3, [2])),
            max_cards=4,
            difficulty="hard",
            explanation=(
                "X1 shifts the value cyclically, so playing it twice walks 0 to 2 "
                "deterministically. The H1 copies are a trap: from |0> they only shuttle "
                "between |0> and a full superposition, because two of them act as a "
                "digit reversal that leaves 0 fixed. Knowing which cards permute values "
                "and which only shuffle phases is the key to the 3d game."
            ),
        ),
    )


def _validate_solution(riddle: Riddle, moves: Sequence[Move]) -> None:
    if len(moves) > riddle.max_cards:
        raise SolutionTooLongError(
            f"{len(moves)} cards exceed the riddle budget of {riddle.max_cards}"
        )
    used = Counter(m.card for m in moves)
    for card, count in used.items():
        allowed = riddle.cards.get(card, 0)
        if count > allowed:
            raise DisallowedCardError(
                f"{card} used {count}x but allowed {allowed}x in this riddle"
            )
    for m in moves:
        k = arity(m.card)  # raises for STEAL, which is never allowed here
        if len(m.targets) != k:
            raise RiddleError(f"{m.card} takes {k} target(s), got {len(m.targets)}")
        for t in m.targets:
            if not 1 <= t <= riddle.num_qudits:
                raise RiddleError(f"qudit {t} out of range 1..{riddle.num_qudits}")
        if k == 2 and m.targets[0] == m.targets[1]:
            raise RiddleError("CX control and target must differ")


def apply_moves(riddle: Riddle, moves: Sequence[Move], start: StateVector | None = None) -> StateVector:
    psi = initial_state(riddle) if start is None else start
    for m in moves:
        psi = apply_gate(psi, gate_matrix(m.card, riddle.dim), [t - 1 for t in m.targets])
    return psi


def check_solution(riddle: Riddle, moves: Sequence[Move]) -> tuple[bool, StateVector]:
    """Validate the card budget, run the sequence, decide the goal exactly."""
    _validate_solution(riddle, moves)
    final = apply_moves(riddle, moves)
    return check_goal(riddle.goal, final), final


def _candidate_moves(riddle: Riddle) -> list[Move]:
    moves: list[Move] = []
    for card in sorted(riddle.cards, key=lambda c: c.value):
        if riddle.cards[card] <= 0:
            continue
        if arity(card) == 1:
            moves.extend(Move(card, (q,)) for q in range(1, riddle.num_qudits + 1))
        else:
            moves.extend(
                Move(card, (c, t))
                for c in range(1, riddle.num_qudits + 1)
                for t in range(1, riddle.num_qudits + 1)
                if c != t
            )
    moves.sort(key=lambda m: (m.card.value, m.targets))
    return moves


def _state_key(state: StateVector) -> bytes:
    # Rounded to 1e-9 per component; adding 0.0 collapses -0.0 into +0.0.
    return (np.round(state.amps.view(np.float64), 9) + 0.0).tobytes()


def _counts_key(counts: Counter) -> tuple:
    return tuple(sorted((c.value, k) for c, k in counts.items() if k > 0))


def solve_from(
    riddle: Riddle,
    start: StateVector,
    remaining: Counter,
    depth_cap: int,
) -> list[Move] | None:
    """Shortest completion from ``start`` using ``remaining`` cards, or None.

    Deterministic: depth-first in lexicographic (card token, targets) order,
    so the first solution found at the minimal depth is always the same one.
    """
    candidates = _candidate_moves(riddle)
    if check_goal(riddle.goal, start):
        return []
    for limit in range(1, depth_cap + 1):
        dead: set[tuple] = set()

        def dfs(state: StateVector, counts: Counter, depth_left: int) -> list[Move] | None:
            key = (_state_key(state), _counts_key(counts), depth_left)
            if key in dead:
                return None
            for move in candidates:
                if counts[move.card] <= 0:
                    continue
                nxt = apply_moves(riddle, [move], start=state)
                if depth_left == 1:
                    if check_goal(riddle.goal, nxt):
                        return [move]
                    continue
                counts[move.card] -= 1
                tail = dfs(nxt, counts, depth_left - 1)
                counts[move.card] += 1
                if tail is not None:
                    return [move] + tail
            dead.add(key)
            return None

        found = dfs(start, Counter(remaining), limit)
        if found is not None:
            return found
    return None


def solve(riddle: Riddle, max_depth: int = MAX_SEARCH_DEPTH) -> list[Move] | None:
    """Shortest solution within min(max_cards, max_depth) cards, or None."""
    if max_depth > MAX_SEARCH_DEPTH:
        raise RiddleError(f"max_depth is capped at {MAX_SEARCH_DEPTH}")
    cap = min(riddle.max_cards, max_depth)
    return solve_from(riddle, initial_state(riddle), Counter(riddle.cards), cap)


def hint(riddle: Riddle, played: Sequence[Move] = ()) -> Move | None:
    """Next card of a shortest completion after ``played``, or None if the
    played prefix cannot be completed anymore."""
    _validate_solution(riddle, played)
    remaining = Counter(riddle.cards)
    remaining.subtract(Counter(m.card for m in played))
    state = apply_moves(riddle, played)
    completion = solve_from(riddle, state, remaining, riddle.max_cards - len(played))
    if completion is None:
        return None
    if not completion:
        return None  # already solved, nothing left to hint
    return completion[0]
