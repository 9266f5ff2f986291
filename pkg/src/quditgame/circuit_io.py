"""Text formats: the .qcirc circuit DSL, .riddle files, state display, and
canonical game/log documents.

The circuit grammar is line-oriented; ``#`` starts a comment, blank lines are
skipped, header lines (``dim``, ``qudits``, optional ``init``) must precede
gate lines, and qudit indices are 1-based (player 1 = qudit 1).  Parse errors
carry the offending line number.

Game snapshots and event logs are canonical JSON documents: sorted keys,
compact separators, UTF-8, one trailing line feed, so equal states serialize
byte-identically across runs and restarts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Sequence

from .engine import GameConfig, GameState, Move, PlayerState, StealRecord
from .engine import PHASE_BETWEEN, PHASE_FINISHED, PHASE_IN_ROUND
from .errors import QuditGameError
from .gates import Card, D3_ONLY, arity, gate_matrix
from .qudit import StateVector, apply_gate, basis_state, rng_from_state, rng_state
from .riddles import (
    OutcomePredicateGoal,
    Riddle,
    TargetStateGoal,
    PREDICATES,
)

DISPLAY_EPS = 1e-12
GAME_FORMAT = "quditgame.game"
LOG_FORMAT = "quditgame.log"
DOC_VERSION = 1

PHASES = (PHASE_IN_ROUND, PHASE_BETWEEN, PHASE_FINISHED)
DIFFICULTIES = ("easy", "medium", "hard")


class ParseError(QuditGameError):
    code = "parse-error"

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class CircuitParseError(ParseError):
    pass


class UnknownTokenError(CircuitParseError):
    code = "unknown-token"


class IndexRangeError(CircuitParseError):
    code = "bad-index"


class DigitRangeError(CircuitParseError):
    code = "bad-digit"


class DuplicateTargetError(CircuitParseError):
    code = "duplicate-target"


class MissingHeaderError(CircuitParseError):
    code = "missing-header"


class RiddleParseError(ParseError):
    pass


class GameDocumentError(QuditGameError):
    code = "bad-document"

    def __init__(self, message: str, path: str = ""):
        self.path = path
        where = f"{path}: " if path else ""
        super().__init__(f"{where}{message}")


@dataclass(frozen=True)
class CircuitDoc:
    dim: int
    num_qudits: int
    init: tuple[int, ...]
    ops: tuple[tuple[Card, tuple[int, ...]], ...]  # 1-based targets


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _parse_int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise CircuitParseError(f"{what} must be an integer, got {token!r}", lineno) from None


def _parse_op(
    words: list[str], lineno: int, dim: int, num_qudits: int
) -> tuple[Card, tuple[int, ...]]:
    token = words[0]
    try:
        card = Card(token)
    except ValueError:
        raise UnknownTokenError(f"unknown gate token {token!r}", lineno) from None
    if card is Card.STEAL:
        raise UnknownTokenError("STEAL is not a circuit gate", lineno)
    if card in D3_ONLY and dim == 2:
        raise UnknownTokenError(f"{token} is only defined at dim 3", lineno)
    k = arity(card)
    if len(words) != 1 + k:
        raise CircuitParseError(f"{token} takes {k} qudit index(es)", lineno)
    targets = tuple(_parse_int(w, lineno, "qudit index") for w in words[1:])
    for t in targets:
        if not 1 <= t <= num_qudits:
            raise IndexRangeError(f"qudit {t} out of range 1..{num_qudits}", lineno)
    if k == 2 and targets[0] == targets[1]:
        raise DuplicateTargetError("CX control and target must differ", lineno)
    return card, targets


def parse_circuit(text: str) -> CircuitDoc:
    dim: int | None = None
    num_qudits: int | None = None
    init: tuple[int, ...] | None = None
    ops: list[tuple[Card, tuple[int, ...]]] = []
    for lineno, words in _content_lines(text):
        key = words[0]
        if key == "dim":
            if dim is not None:
                raise CircuitParseError("duplicate dim header", lineno)
            if ops or init is not None or num_qudits is not None:
                raise CircuitParseError("dim header must come first", lineno)
            if len(words) != 2:
                raise CircuitParseError("usage: dim <2|3>", lineno)
            dim = _parse_int(words[1], lineno, "dim")
            if dim not in (2, 3):
                raise CircuitParseError(f"dim must be 2 or 3, got {dim}", lineno)
        elif key == "qudits":
            if dim is None:
                raise MissingHeaderError("qudits header before dim", lineno)
            if num_qudits is not None:
                raise CircuitParseError("duplicate qudits header", lineno)
            if ops or init is not None:
                raise CircuitParseError("qudits header must precede init and gates", lineno)
            if len(words) != 2:
                raise CircuitParseError("usage: qudits <n>", lineno)
            num_qudits = _parse_int(words[1], lineno, "qudits")
            if not 1 <= num_qudits <= 8:
                raise CircuitParseError(f"qudits must be in 1..8, got {num_qudits}", lineno)
        elif key == "init":
            if dim is None or num_qudits is None:
                raise MissingHeaderError("init before dim/qudits headers", lineno)
            if init is not None:
                raise CircuitParseError("duplicate init header", lineno)
            if ops:
                raise CircuitParseError("init header after gate lines", lineno)
            digits = tuple(_parse_int(w, lineno, "init digit") for w in words[1:])
            if len(digits) != num_qudits:
                raise CircuitParseError(
                    f"init needs {num_qudits} digits, got {len(digits)}", lineno
                )
            for v in digits:
                if not 0 <= v < dim:
                    raise DigitRangeError(f"digit {v} out of range for dim {dim}", lineno)
            init = digits
        else:
            if dim is None or num_qudits is None:
                raise MissingHeaderError(
                    "gate line before dim/qudits headers", lineno
                )
            ops.append(_parse_op(words, lineno, dim, num_qudits))
    if dim is None or num_qudits is None:
        raise MissingHeaderError("missing dim/qudits headers")
    if init is None:
        init = (0,) * num_qudits
    return CircuitDoc(dim=dim, num_qudits=num_qudits, init=init, ops=tuple(ops))


def print_circuit(doc: CircuitDoc) -> str:
    lines = [
        f"dim {doc.dim}",
        f"qudits {doc.num_qudits}",
        "init " + " ".join(str(v) for v in doc.init),
    ]
    lines.extend(f"{card}" + "".join(f" {t}" for t in targets) for card, targets in doc.ops)
    return "\n".join(lines) + "\n"


def evaluate_circuit(doc: CircuitDoc) -> StateVector:
    psi = basis_state(doc.dim, doc.init)
    for card, targets in doc.ops:
        psi = apply_gate(psi, gate_matrix(card, doc.dim), [t - 1 for t in targets])
    return psi


def _fmt4(x: float) -> str:
    return f"{round(x, 4) + 0.0:.4f}"


def state_lines(state: StateVector) -> list[str]:
    """One row per nonzero amplitude, ascending basis index, 4 decimals."""
    from .qudit import digits_of

    rows = []
    for i, a in enumerate(state.amps):
        if abs(a) ** 2 <= DISPLAY_EPS:
            continue
        digits = ",".join(str(v) for v in digits_of(i, state.dim, state.num_qudits))
        rows.append(f"({_fmt4(a.real)},{_fmt4(a.imag)}) |{digits}>")
    return rows


def format_state(state: StateVector) -> str:
    return "\n".join(state_lines(state)) + "\n"


def canonical_dumps(obj: Any) -> str:
    """Byte-stable JSON: sorted keys, compact separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


# --- structured-document helpers -----------------------------------------


def _type_name(kind) -> str:
    return {int: "integer", str: "string", bool: "boolean", list: "array", dict: "object"}[kind]


def _check(value: Any, kind, path: str) -> Any:
    if kind is int and isinstance(value, bool):
        raise GameDocumentError("expected integer, got boolean", path)
    if not isinstance(value, kind):
        raise GameDocumentError(f"expected {_type_name(kind)}", path)
    return value


def _get(obj: dict, key: str, kind, path: str, optional: bool = False, default=None) -> Any:
    if key not in obj or (optional and obj[key] is None):
        if optional:
            return default
        raise GameDocumentError("missing field", f"{path}.{key}" if path else key)
    return _check(obj[key], kind, f"{path}.{key}" if path else key)


def _card(token: Any, path: str) -> Card:
    _check(token, str, path)
    try:
        return Card(token)
    except ValueError:
        raise GameDocumentError(f"unknown card token {token!r}", path) from None


def config_to_dict(config: GameConfig) -> dict:
    return {
        "version": config.version,
        "style": config.style,
        "num_players": config.num_players,
        "num_rounds": config.num_rounds,
        "hand_size": config.hand_size,
        "seed": config.seed,
        "deck": {c.value: k for c, k in config.deck.items()} if config.deck else None,
        "reveal_state": config.reveal_state,
    }


def config_from_dict(obj: Any, path: str = "config") -> GameConfig:
    _check(obj, dict, path)
    deck_raw = _get(obj, "deck", dict, path, optional=True)
    deck = None
    if deck_raw is not None:
        deck = {}
        for token, count in deck_raw.items():
            card = _card(token, f"{path}.deck")
            deck[card] = _check(count, int, f"{path}.deck.{token}")
    seed = obj.get("seed")
    if seed is not None:
        seed = _check(seed, int, f"{path}.seed")
    reveal = obj.get("reveal_state")
    if reveal is not None:
        reveal = _check(reveal, bool, f"{path}.reveal_state")
    return GameConfig(
        version=_get(obj, "version", str, path),
        style=_get(obj, "style", str, path, optional=True, default="competitive"),
        num_players=_get(obj, "num_players", int, path),
        num_rounds=_get(obj, "num_rounds", int, path, optional=True, default=3),
        hand_size=_get(obj, "hand_size", int, path, optional=True, default=5),
        seed=seed,
        deck=deck,
        reveal_state=reveal,
    )


def move_to_dict(player: int, move: Move) -> dict:
    return {"player": player, "card": move.card.value, "targets": list(move.targets)}


def move_from_dict(obj: Any, path: str) -> tuple[int, Move]:
    _check(obj, dict, path)
    player = _get(obj, "player", int, path)
    card = _card(_get(obj, "card", str, path), f"{path}.card")
    targets = _get(obj, "targets", list, path)
    for i, t in enumerate(targets):
        _check(t, int, f"{path}.targets[{i}]")
    return player, Move(card=card, targets=tuple(targets))


def serialize_game(state: GameState) -> str:
    doc = {
        "format": GAME_FORMAT,
        "doc_version": DOC_VERSION,
        "config": config_to_dict(state.config),
        "players": [
            {"id": p.id, "hand": [c.value for c in p.hand], "carry": p.carry_value}
            for p in state.players
        ],
        "deck": [c.value for c in state.deck],
        "discards": [c.value for c in state.discards],
        "round_circuit": [move_to_dict(pid, m) for pid, m in state.round_circuit],
        "steals": [
            {
                "round": s.round_number,
                "player": s.player,
                "victim": s.victim,
                "card": s.card.value if s.card else None,
            }
            for s in state.steal_log
        ],
        "phase": state.phase,
        "turn": state.turn,
        "round": state.round_number,
        "rng": rng_state(state.rng),
    }
    return canonical_dumps(doc)


def _loads(text: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise GameDocumentError(f"not valid JSON: {e.msg}", path="") from None
    if not isinstance(obj, dict):
        raise GameDocumentError("document root must be an object", path="")
    return obj


def deserialize_game(text: str) -> GameState:
    obj = _loads(text)
    if obj.get("format") != GAME_FORMAT:
        raise GameDocumentError(f"expected format {GAME_FORMAT!r}", "format")
    config = config_from_dict(_get(obj, "config", dict, ""))
    config.validate()
    dim = config.dim

    players = []
    raw_players = _get(obj, "players", list, "")
    for i, praw in enumerate(raw_players):
        path = f"players[{i}]"
        _check(praw, dict, path)
        hand = [_card(t, f"{path}.hand") for t in _get(praw, "hand", list, path)]
        carry = _get(praw, "carry", int, path)
        if not 0 <= carry < dim:
            raise GameDocumentError(f"carry {carry} out of range for dim {dim}", path)
        players.append(PlayerState(id=_get(praw, "id", int, path), hand=hand, carry_value=carry))

    deck = [_card(t, "deck") for t in _get(obj, "deck", list, "")]
    discards = [_card(t, "discards") for t in _get(obj, "discards", list, "")]

    circuit = []
    for i, mraw in enumerate(_get(obj, "round_circuit", list, "")):
        circuit.append(move_from_dict(mraw, f"round_circuit[{i}]"))

    steals = []
    for i, sraw in enumerate(_get(obj, "steals", list, "")):
        path = f"steals[{i}]"
        _check(sraw, dict, path)
        card_token = sraw.get("card")
        steals.append(
            StealRecord(
                round_number=_get(sraw, "round", int, path),
                player=_get(sraw, "player", int, path),
                victim=_get(sraw, "victim", int, path),
                card=_card(card_token, f"{path}.card") if card_token is not None else None,
            )
        )

    phase = _get(obj, "phase", str, "")
    if phase not in PHASES:
        raise GameDocumentError(f"unknown phase {phase!r}", "phase")

    rng_raw = _get(obj, "rng", dict, "")
    if rng_raw.get("bit_generator") != "PCG64":
        raise GameDocumentError("expected a PCG64 generator state", "rng.bit_generator")
    try:
        rng = rng_from_state(rng_raw)
    except (ValueError, TypeError, KeyError) as e:
        raise GameDocumentError(f"invalid generator state: {e}", "rng") from None

    state = GameState(
        config=config,
        players=players,
        deck=deck,
        discards=discards,
        round_circuit=circuit,
        steal_log=steals,
        phase=phase,
        turn=_get(obj, "turn", int, ""),
        round_number=_get(obj, "round", int, ""),
        rng=rng,
    )
    if len(players) != config.num_players:
        raise GameDocumentError(
            f"expected {config.num_players} players, got {len(players)}", "players"
        )
    return state


def serialize_log(config: GameConfig, events: Sequence[dict]) -> str:
    doc = {
        "format": LOG_FORMAT,
        "doc_version": DOC_VERSION,
        "config": config_to_dict(config),
        "events": list(events),
    }
    return canonical_dumps(doc)


def parse_log(text: str) -> tuple[GameConfig, list[dict]]:
    obj = _loads(text)
    if obj.get("format") != LOG_FORMAT:
        raise GameDocumentError(f"expected format {LOG_FORMAT!r}", "format")
    config = config_from_dict(_get(obj, "config", dict, ""))
    events = []
    for i, eraw in enumerate(_get(obj, "events", list, "")):
        path = f"events[{i}]"
        _check(eraw, dict, path)
        kind = _get(eraw, "type", str, path)
        if kind == "play":
            player, move = move_from_dict(eraw, path)
            events.append(
                {"type": "play", "player": player, "card": move.card.value,
                 "targets": list(move.targets)}
            )
        elif kind == "evaluate":
            outcome = eraw.get("outcome")
            if outcome is not None:
                outcome = [_check(v, int, f"{path}.outcome") for v in _check(outcome, list, f"{path}.outcome")]
            events.append({"type": "evaluate", "outcome": outcome})
        else:
            raise GameDocumentError(f"unknown event type {kind!r}", f"{path}.type")
    return config, events


# --- riddle files ----------------------------------------------------------


def _parse_goal(words: list[str], lineno: int, dim: int, num_qudits: int, init: tuple[int, ...]):
    if not words:
        raise RiddleParseError("empty goal", lineno)
    head, rest = words[0], words[1:]
    if head == "basis":
        digits = tuple(_parse_int(w, lineno, "goal digit") for w in rest)
        if len(digits) != num_qudits:
            raise RiddleParseError(f"goal basis needs {num_qudits} digits", lineno)
        for v in digits:
            if not 0 <= v < dim:
                raise DigitRangeError(f"digit {v} out of range for dim {dim}", lineno)
        return TargetStateGoal(basis_state(dim, digits))
    if head == "circuit":
        # Ops separated by ';', applied to the riddle's initial state.
        psi = basis_state(dim, init)
        group: list[str] = []
        groups: list[list[str]] = []
        for w in rest:
            if w == ";":
                groups.append(group)
                group = []
            else:
                group.append(w)
        groups.append(group)
        for g in groups:
            if not g:
                raise RiddleParseError("empty op in goal circuit", lineno)
            card, targets = _parse_op(g, lineno, dim, num_qudits)
            psi = apply_gate(psi, gate_matrix(card, dim), [t - 1 for t in targets])
        return TargetStateGoal(psi)
    if head == "predicate":
        if not rest:
            raise RiddleParseError("goal predicate needs a name", lineno)
        name, args = rest[0], tuple(_parse_int(w, lineno, "predicate arg") for w in rest[1:])
        if name not in PREDICATES:
            raise RiddleParseError(f"unknown predicate {name!r}", lineno)
        expected = {"all_equal": 0, "differ_by": 1, "qudit_is": 2}[name]
        if len(args) != expected:
            raise RiddleParseError(f"predicate {name} takes {expected} argument(s)", lineno)
        if name == "qudit_is":
            q, v = args
            if not 1 <= q <= num_qudits:
                raise IndexRangeError(f"qudit {q} out of range 1..{num_qudits}", lineno)
            if not 0 <= v < dim:
                raise DigitRangeError(f"digit {v} out of range for dim {dim}", lineno)
        return OutcomePredicateGoal(name, args)
    raise RiddleParseError(f"unknown goal form {head!r}", lineno)


def parse_riddle(text: str) -> Riddle:
    """Parse one riddle document.  Fields mirror the Riddle type; ``goal``
    accepts ``basis``, ``circuit`` (ops from the initial state), and
    ``predicate`` forms."""
    fields: dict[str, tuple[int, list[str]]] = {}
    raw_lines = {}
    for lineno, words in _content_lines(text):
        key = words[0]
        if key in fields:
            raise RiddleParseError(f"duplicate field {key!r}", lineno)
        fields[key] = (lineno, words[1:])
        raw_lines[key] = lineno
    for required in ("id", "dim", "qudits", "cards", "max_cards", "difficulty", "goal"):
        if required not in fields:
            raise RiddleParseError(f"missing field {required!r}")

    lineno, words = fields["dim"]
    dim = _parse_int(words[0], lineno, "dim") if words else 0
    if dim not in (2, 3):
        raise RiddleParseError("dim must be 2 or 3", lineno)
    lineno, words = fields["qudits"]
    num_qudits = _parse_int(words[0], lineno, "qudits") if words else 0
    if not 1 <= num_qudits <= 8:
        raise RiddleParseError("qudits must be in 1..8", lineno)

    if "init" in fields:
        lineno, words = fields["init"]
        init = tuple(_parse_int(w, lineno, "init digit") for w in words)
        if len(init) != num_qudits:
            raise RiddleParseError(f"init needs {num_qudits} digits", lineno)
        for v in init:
            if not 0 <= v < dim:
                raise DigitRangeError(f"digit {v} out of range for dim {dim}", lineno)
    else:
        init = (0,) * num_qudits

    lineno, words = fields["cards"]
    if not words:
        raise RiddleParseError("cards line must list at least one card", lineno)
    cards: dict[Card, int] = {}
    for token in words:
        try:
            card = Card(token)
        except ValueError:
            raise UnknownTokenError(f"unknown card token {token!r}", lineno) from None
        if card is Card.STEAL:
            raise UnknownTokenError("STEAL cannot appear in a riddle", lineno)
        if card in D3_ONLY and dim == 2:
            raise UnknownTokenError(f"{token} is only defined at dim 3", lineno)
        cards[card] = cards.get(card, 0) + 1

    lineno, words = fields["id"]
    riddle_id = _parse_int(words[0], lineno, "id") if words else 0
    lineno, words = fields["max_cards"]
    max_cards = _parse_int(words[0], lineno, "max_cards") if words else 0
    if max_cards < 1:
        raise RiddleParseError("max_cards must be >= 1", lineno)
    lineno, words = fields["difficulty"]
    difficulty = words[0] if words else ""
    if difficulty not in DIFFICULTIES:
        raise RiddleParseError(
            f"difficulty must be one of {', '.join(DIFFICULTIES)}", lineno
        )
    lineno, words = fields["goal"]
    goal = _parse_goal(words, lineno, dim, num_qudits, init)

    explanation = ""
    if "explanation" in fields:
        _, words = fields["explanation"]
        explanation = " ".join(words)

    return Riddle(
        id=riddle_id,
        dim=dim,
        num_qudits=num_qudits,
        initial=init,
        cards=cards,
        goal=goal,
        max_cards=max_cards,
        difficulty=difficulty,
        explanation=explanation,
    )
