"""Turn-based game state machine: setup, card plays, steals, round evaluation.

Players are numbered 1..n and player k's qudit is wire k (converted to the
0-based core indexing only when circuits are evaluated).  Any player may
target any qudit with any gate card.  A round ends when all hands are empty;
evaluation builds the round circuit on the carried-over basis values, draws a
single seeded measurement, and writes the digits back as next round's carry
values.

Determinism: the whole game consumes one PCG64 generator (shuffle, deals,
steal picks, round measurements), so identical (config, seed, move sequence)
reproduces identical games.  Hands are kept sorted so serialized snapshots
are canonical.
"""

from __future__ import annotations

import bisect
import dataclasses
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import QuditGameError
from .gates import D3_ONLY, VERSIONS, Card, CardSet, arity, card_set, gate_matrix
from .qudit import Outcome, StateVector, apply_gate, basis_state, make_rng, measure_all

PHASE_IN_ROUND = "in-round"
PHASE_BETWEEN = "between-rounds"
PHASE_FINISHED = "finished"

STYLES = ("competitive", "cooperative")

MIN_PLAYERS = 2
MAX_PLAYERS = 5


class GameError(QuditGameError):
    code = "game-error"


class ConfigError(GameError):
    code = "invalid-config"

    def __init__(self, message: str, path: str = ""):
        super().__init__(message)
        self.path = path


class WrongTurnError(GameError):
    code = "wrong-turn"


class WrongPhaseError(GameError):
    code = "wrong-phase"


class IllegalMoveError(GameError):
    code = "illegal-move"


class CardNotHeldError(GameError):
    code = "card-not-held"


class ReplayDivergenceError(GameError):
    code = "log-divergence"


@dataclass(frozen=True)
class Move:
    """One card play: 1-qudit gates carry one target, CX (control, target),
    STEAL the victim's player id."""

    card: Card
    targets: tuple[int, ...]


@dataclass(frozen=True)
class GameConfig:
    version: str
    style: str = "competitive"
    num_players: int = 2
    num_rounds: int = 3
    hand_size: int = 5
    seed: int | None = None
    deck: dict[Card, int] | None = None  # per-player copies, overrides card_set defaults
    reveal_state: bool | None = None  # None: hidden in competitive, shown in cooperative

    @property
    def dim(self) -> int:
        return VERSIONS[self.version]

    @property
    def effective_reveal(self) -> bool:
        if self.reveal_state is None:
            return self.style == "cooperative"
        return self.reveal_state

    def cards(self) -> CardSet:
        base = card_set(self.version)
        if not self.deck:
            return base
        copies = dict(base.copies)
        copies.update(self.deck)
        copies = {c: k for c, k in copies.items() if k > 0}
        return CardSet(version=self.version, dim=base.dim, copies=copies)

    def validate(self) -> None:
        if self.version not in VERSIONS:
            raise ConfigError(f"unknown version {self.version!r}", path="version")
        if self.style not in STYLES:
            raise ConfigError(f"unknown style {self.style!r}", path="style")
        if not MIN_PLAYERS <= self.num_players <= MAX_PLAYERS:
            raise ConfigError(
                f"num_players must be in [{MIN_PLAYERS}, {MAX_PLAYERS}], got {self.num_players}",
                path="num_players",
            )
        if self.num_rounds < 1:
            raise ConfigError("num_rounds must be >= 1", path="num_rounds")
        if self.hand_size < 1:
            raise ConfigError("hand_size must be >= 1", path="hand_size")
        if self.deck:
            for card, count in self.deck.items():
                if not isinstance(card, Card):
                    raise ConfigError(f"unknown card {card!r}", path="deck")
                if card in D3_ONLY and self.dim == 2:
                    raise ConfigError(f"{card} is not defined at dimension 2", path="deck")
                if count < 0:
                    raise ConfigError(f"negative count for {card}", path="deck")
        deck_size = self.cards().size_per_player() * self.num_players
        needed = self.num_players * self.hand_size * self.num_rounds
        if needed > deck_size:
            raise ConfigError(
                f"deck of {deck_size} cards cannot cover {self.num_players} players x "
                f"{self.hand_size} cards x {self.num_rounds} rounds ({needed}); "
                "reduce hand_size/num_rounds or raise deck multiplicities",
                path="hand_size",
            )


@dataclass
class PlayerState:
    id: int
    hand: list[Card] = field(default_factory=list)
    carry_value: int = 0


@dataclass(frozen=True)
class StealRecord:
    round_number: int
    player: int
    victim: int
    card: Card | None  # None: the victim had no cards to take


@dataclass
class GameState:
    config: GameConfig
    players: list[PlayerState]
    deck: list[Card]
    discards: list[Card]  # consumed cards; keeps the full multiset accounted for
    round_circuit: list[tuple[int, Move]]
    steal_log: list[StealRecord]
    phase: str
    turn: int  # player id to move; 0 outside in-round phase
    round_number: int
    rng: np.random.Generator

    def player(self, player_id: int) -> PlayerState:
        if not 1 <= player_id <= len(self.players):
            raise IllegalMoveError(f"no player {player_id}")
        return self.players[player_id - 1]

    def carries(self) -> list[int]:
        return [p.carry_value for p in self.players]


@dataclass(frozen=True)
class Score:
    style: str
    carries: dict[int, int]
    winners: tuple[int, ...] | None = None  # competitive: argmax carry, ties share
    total: int | None = None  # cooperative: sum of carries
    max_total: int | None = None  # cooperative: n * (d - 1)


def _deal(state: GameState) -> None:
    for p in state.players:
        for _ in range(state.config.hand_size):
            p.hand.append(state.deck.pop())
        p.hand.sort()


def new_game(config: GameConfig) -> GameState:
    """Build the shuffled deck, deal opening hands, seat player 1 to move."""
    config.validate()
    if config.seed is None:
        config = dataclasses.replace(config, seed=int(np.random.SeedSequence().entropy) % 2**63)
    rng = make_rng(config.seed)
    cards = config.cards()
    deck: list[Card] = []
    for card in sorted(cards.copies):
        deck.extend([card] * (cards.copies[card] * config.num_players))
    order = rng.permutation(len(deck))
    deck = [deck[i] for i in order]
    state = GameState(
        config=config,
        players=[PlayerState(id=i + 1) for i in range(config.num_players)],
        deck=deck,
        discards=[],
        round_circuit=[],
        steal_log=[],
        phase=PHASE_IN_ROUND,
        turn=1,
        round_number=1,
        rng=rng,
    )
    _deal(state)
    return state


def _gate_moves(card: Card, num_players: int) -> Iterable[Move]:
    if card is Card.STEAL:
        return
    if arity(card) == 1:
        for q in range(1, num_players + 1):
            yield Move(card, (q,))
    else:
        for c in range(1, num_players + 1):
            for t in range(1, num_players + 1):
                if c != t:
                    yield Move(card, (c, t))


def legal_moves(state: GameState, player_id: int) -> list[Move]:
    """All playable moves for the player to act; empty only on an empty hand."""
    if state.phase != PHASE_IN_ROUND:
        raise WrongPhaseError(f"no moves in phase {state.phase!r}")
    if player_id != state.turn:
        raise WrongTurnError(f"not your turn (player {state.turn} to move)")
    p = state.player(player_id)
    n = state.config.num_players
    moves: list[Move] = []
    for card in sorted(set(p.hand)):
        if card is Card.STEAL:
            # Stealing from an empty hand is allowed (and resolves to nothing)
            # so a hand is never stuck holding unplayable cards.
            moves.extend(Move(card, (v,)) for v in range(1, n + 1) if v != player_id)
        else:
            moves.extend(_gate_moves(card, n))
    moves.sort(key=lambda m: (m.card.value, m.targets))
    return moves


def _validate_move(state: GameState, player_id: int, move: Move) -> None:
    n = state.config.num_players
    if move.card is Card.STEAL:
        if len(move.targets) != 1:
            raise IllegalMoveError("STEAL takes exactly one victim")
        victim = move.targets[0]
        if not 1 <= victim <= n:
            raise IllegalMoveError(f"no player {victim}")
        if victim == player_id:
            raise IllegalMoveError("cannot steal from yourself")
        return
    k = arity(move.card)
    if move.card in {Card.X2, Card.H2} and state.config.dim == 2:
        raise IllegalMoveError(f"{move.card} is not defined at dimension 2")
    if len(move.targets) != k:
        raise IllegalMoveError(f"{move.card} takes {k} target(s), got {len(move.targets)}")
    for t in move.targets:
        if not 1 <= t <= n:
            raise IllegalMoveError(f"qudit {t} out of range 1..{n}")
    if k == 2 and move.targets[0] == move.targets[1]:
        raise IllegalMoveError("CX control and target must differ")


def _advance_turn(state: GameState) -> None:
    n = state.config.num_players
    current = state.turn
    for step in range(1, n + 1):
        candidate = (current - 1 + step) % n + 1
        if state.player(candidate).hand:
            state.turn = candidate
            return
    state.phase = PHASE_BETWEEN
    state.turn = 0


def play_card(state: GameState, player_id: int, move: Move) -> GameState:
    """Play one card.  Gate cards queue on the round circuit; STEAL resolves
    immediately by moving a uniformly random card from the victim's hand."""
    if state.phase != PHASE_IN_ROUND:
        raise WrongPhaseError(f"cannot play in phase {state.phase!r}")
    if player_id != state.turn:
        raise WrongTurnError(f"not your turn (player {state.turn} to move)")
    p = state.player(player_id)
    if move.card not in p.hand:
        raise CardNotHeldError(f"player {player_id} does not hold {move.card}")
    _validate_move(state, player_id, move)

    p.hand.remove(move.card)
    if move.card is Card.STEAL:
        state.discards.append(move.card)
        victim = state.player(move.targets[0])
        taken: Card | None = None
        if victim.hand:
            i = int(state.rng.integers(len(victim.hand)))
            taken = victim.hand.pop(i)
            bisect.insort(p.hand, taken)
        state.steal_log.append(
            StealRecord(round_number=state.round_number, player=player_id,
                        victim=victim.id, card=taken)
        )
    else:
        state.round_circuit.append((player_id, move))
    _advance_turn(state)
    return state


def round_state(state: GameState) -> StateVector:
    """Current quantum state: carried-over basis values evolved through the
    round circuit played so far."""
    psi = basis_state(state.config.dim, state.carries())
    for _, move in state.round_circuit:
        gate = gate_matrix(move.card, state.config.dim)
        psi = apply_gate(psi, gate, [t - 1 for t in move.targets])
    return psi


def end_round(state: GameState) -> tuple[StateVector, Outcome, GameState]:
    """Evaluate the finished round: one sampled outcome becomes the new carry
    values.  Returns the pre-measurement state alongside the outcome."""
    if state.phase != PHASE_BETWEEN:
        raise WrongPhaseError(
            "round can only be evaluated between rounds"
            if state.phase == PHASE_IN_ROUND
            else "game is finished"
        )
    pre = round_state(state)
    outcome, _ = measure_all(pre, state.rng)
    for p, value in zip(state.players, outcome):
        p.carry_value = value
    state.discards.extend(sorted(m.card for _, m in state.round_circuit))
    state.round_circuit = []
    if state.round_number >= state.config.num_rounds:
        state.phase = PHASE_FINISHED
        state.turn = 0
    else:
        state.round_number += 1
        _deal(state)
        state.phase = PHASE_IN_ROUND
        state.turn = 1
    return pre, outcome, state


def score(state: GameState) -> Score:
    """Final result; competitive ties are shared wins."""
    if state.phase != PHASE_FINISHED:
        raise WrongPhaseError("score is only defined for a finished game")
    carries = {p.id: p.carry_value for p in state.players}
    if state.config.style == "competitive":
        best = max(carries.values())
        winners = tuple(pid for pid, v in sorted(carries.items()) if v == best)
        return Score(style="competitive", carries=carries, winners=winners)
    total = sum(carries.values())
    max_total = state.config.num_players * (state.config.dim - 1)
    return Score(style="cooperative", carries=carries, total=total, max_total=max_total)


def replay_events(config: GameConfig, events: Sequence[dict]) -> GameState:
    """Re-run a recorded game: play events feed play_card, evaluate events feed
    end_round.  Recorded outcomes, when present, are checked against the replay."""
    if config.seed is None:
        raise ReplayDivergenceError("cannot replay a log without a seed")
    state = new_game(config)
    for i, event in enumerate(events):
        kind = event.get("type")
        if kind == "play":
            move = Move(card=Card(event["card"]), targets=tuple(event["targets"]))
            play_card(state, int(event["player"]), move)
        elif kind == "evaluate":
            _, outcome, _ = end_round(state)
            expected = event.get("outcome")
            if expected is not None and list(outcome) != list(expected):
                raise ReplayDivergenceError(
                    f"event {i}: replayed outcome {list(outcome)} != recorded {list(expected)}"
                )
        else:
            raise ReplayDivergenceError(f"event {i}: unknown type {kind!r}")
    return state
