"""Session-oriented HTTP service for games, sandbox circuits, and riddles.

All bodies are the canonical JSON encoding (sorted keys, compact separators).
Errors come back as {"error": {"code", "message", ...}} with the same stable
codes the library exceptions carry.  Per-session writes are serialized with a
lock; player views never contain another player's hand contents, and the
replayable event log (which includes the seed) is only released once the game
is finished.
"""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import dataclass, field
from typing import Any

from fastapi import FastAPI, Request, Response

from . import circuit_io, engine, riddles as riddles_mod
from .circuit_io import GameDocumentError, ParseError, canonical_dumps
from .engine import GameConfig, GameState, Move
from .errors import QuditGameError
from .gates import Card
from .qudit import StateVector, make_rng, sample

API_PREFIX = "/v1"


class AuthError(QuditGameError):
    code = "auth"


class NotFoundError(QuditGameError):
    code = "not-found"


_STATUS_BY_CODE = {
    "auth": 401,
    "not-found": 404,
    "wrong-turn": 409,
    "wrong-phase": 409,
    "log-divergence": 409,
}


@dataclass
class Session:
    game_id: str
    game: GameState
    tokens: dict[str, int]  # token -> player id
    created: float
    lock: threading.Lock = field(default_factory=threading.Lock)
    events: list[dict] = field(default_factory=list)
    last_result: dict | None = None


def _json_response(payload: Any, status: int = 200) -> Response:
    return Response(
        content=canonical_dumps(payload), status_code=status, media_type="application/json"
    )


def _error_response(exc: QuditGameError, status: int | None = None) -> Response:
    body: dict[str, Any] = {"code": exc.code, "message": str(exc)}
    if isinstance(exc, ParseError) and exc.line is not None:
        body["line"] = exc.line
    path = getattr(exc, "path", "")
    if path:
        body["path"] = path
    if status is None:
        status = _STATUS_BY_CODE.get(exc.code, 400)
    return _json_response({"error": body}, status=status)


async def _body(request: Request) -> dict:
    try:
        obj = await request.json()
    except Exception:
        raise GameDocumentError("request body must be a JSON object", "") from None
    if not isinstance(obj, dict):
        raise GameDocumentError("request body must be a JSON object", "")
    return obj


def _move_from_body(obj: Any, path: str) -> Move:
    if not isinstance(obj, dict):
        raise GameDocumentError("expected object", path)
    try:
        card = Card(obj.get("card"))
    except ValueError:
        raise GameDocumentError(f"unknown card token {obj.get('card')!r}", f"{path}.card") from None
    targets = obj.get("targets")
    if not isinstance(targets, list) or not all(
        isinstance(t, int) and not isinstance(t, bool) for t in targets
    ):
        raise GameDocumentError("targets must be an array of integers", f"{path}.targets")
    return Move(card=card, targets=tuple(targets))


def create_app(
    extra_riddles: tuple[riddles_mod.Riddle, ...] = (),
    static_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="quditgame service", docs_url=None, redoc_url=None)

    sessions: dict[str, Session] = {}
    sessions_lock = threading.Lock()

    riddle_index: dict[int, riddles_mod.Riddle] = {}
    for r in riddles_mod.builtin_riddles() + tuple(extra_riddles):
        if r.id in riddle_index:
            raise ValueError(f"duplicate riddle id {r.id}")
        riddle_index[r.id] = r

    @app.exception_handler(QuditGameError)
    async def _handle_game_error(_request: Request, exc: QuditGameError) -> Response:
        return _error_response(exc)

    def _session(game_id: str) -> Session:
        with sessions_lock:
            session = sessions.get(game_id)
        if session is None:
            raise NotFoundError(f"no game {game_id!r}")
        return session

    def _player_for(session: Session, token: str | None) -> int:
        if not token or token not in session.tokens:
            raise AuthError("unknown or missing player token")
        return session.tokens[token]

    def _player_view(session: Session, player_id: int) -> dict:
        game = session.game
        config = game.config
        view: dict[str, Any] = {
            "game_id": session.game_id,
            "player_id": player_id,
            "phase": game.phase,
            "turn": game.turn,
            "round": game.round_number,
            "config": {
                "version": config.version,
                "style": config.style,
                "dim": config.dim,
                "num_players": config.num_players,
                "num_rounds": config.num_rounds,
                "hand_size": config.hand_size,
                "reveal_state": config.effective_reveal,
            },
            "your_hand": [c.value for c in game.player(player_id).hand],
            "players": [
                {
                    "id": p.id,
                    "hand_size": len(p.hand),
                    "carry_value": p.carry_value,
                    "is_you": p.id == player_id,
                }
                for p in game.players
            ],
            "round_circuit": [circuit_io.move_to_dict(pid, m) for pid, m in game.round_circuit],
            "steals": [
                {
                    "round": s.round_number,
                    "player": s.player,
                    "victim": s.victim,
                    # The stolen card is visible only to the two involved hands.
                    **(
                        {"card": s.card.value if s.card else None}
                        if player_id in (s.player, s.victim)
                        else {}
                    ),
                }
                for s in game.steal_log
            ],
            "legal_moves": [],
            "last_result": session.last_result,
        }
        if game.phase == engine.PHASE_IN_ROUND and game.turn == player_id:
            view["legal_moves"] = [
                {"card": m.card.value, "targets": list(m.targets)}
                for m in engine.legal_moves(game, player_id)
            ]
        if config.effective_reveal and game.phase in (
            engine.PHASE_IN_ROUND,
            engine.PHASE_BETWEEN,
        ):
            lines = circuit_io.state_lines(engine.round_state(game))
            view["state_lines"] = lines
            view["state_text"] = "\n".join(lines) + "\n"
        if game.phase == engine.PHASE_FINISHED:
            result = engine.score(game)
            view["score"] = _score_dict(result)
        return view

    def _score_dict(result: engine.Score) -> dict:
        out: dict[str, Any] = {
            "style": result.style,
            "carries": {str(pid): v for pid, v in result.carries.items()},
        }
        if result.winners is not None:
            out["winners"] = list(result.winners)
        if result.total is not None:
            out["total"] = result.total
            out["max_total"] = result.max_total
        return out

    @app.post(API_PREFIX + "/games")
    async def create_game(request: Request) -> Response:
        body = await _body(request)
        config = circuit_io.config_from_dict(body, path="")
        game = engine.new_game(config)
        game_id = secrets.token_urlsafe(8)
        tokens = {secrets.token_urlsafe(16): p.id for p in game.players}
        session = Session(game_id=game_id, game=game, tokens=tokens, created=time.time())
        with sessions_lock:
            sessions[game_id] = session
        return _json_response(
            {
                "game_id": game_id,
                "tokens": {str(pid): tok for tok, pid in tokens.items()},
                "num_players": config.num_players,
            },
            status=201,
        )

    @app.get(API_PREFIX + "/games/{game_id}/state")
    def get_state(game_id: str, token: str | None = None) -> Response:
        session = _session(game_id)
        player_id = _player_for(session, token)
        with session.lock:
            return _json_response(_player_view(session, player_id))

    @app.post(API_PREFIX + "/games/{game_id}/play")
    async def play(game_id: str, request: Request) -> Response:
        session = _session(game_id)
        body = await _body(request)
        player_id = _player_for(session, body.get("token"))
        move = _move_from_body(body.get("move"), "move")
        with session.lock:
            engine.play_card(session.game, player_id, move)
            session.events.append(circuit_io.move_to_dict(player_id, move) | {"type": "play"})
            return _json_response(_player_view(session, player_id))

    @app.post(API_PREFIX + "/games/{game_id}/evaluate")
    async def evaluate_round(game_id: str, request: Request) -> Response:
        session = _session(game_id)
        body = await _body(request)
        player_id = _player_for(session, body.get("token"))
        with session.lock:
            game = session.game
            evaluated_round = game.round_number
            pre, outcome, _ = engine.end_round(game)
            lines = circuit_io.state_lines(pre)
            session.events.append({"type": "evaluate", "outcome": list(outcome)})
            session.last_result = {
                "round": evaluated_round,
                "state_lines": lines,
                "state_text": circuit_io.format_state(pre),
                "outcome": list(outcome),
                "carries": {str(p.id): p.carry_value for p in game.players},
            }
            payload = dict(session.last_result)
            payload["phase"] = game.phase
            if game.phase == engine.PHASE_FINISHED:
                payload["score"] = _score_dict(engine.score(game))
            payload["view"] = _player_view(session, player_id)
            return _json_response(payload)

    @app.get(API_PREFIX + "/games/{game_id}/log")
    def get_log(game_id: str, token: str | None = None) -> Response:
        session = _session(game_id)
        _player_for(session, token)
        with session.lock:
            if session.game.phase != engine.PHASE_FINISHED:
                # The log embeds the seed, which predicts shuffles and
                # outcomes; it is only released after the game.
                raise engine.WrongPhaseError("event log is available once the game is finished")
            text = circuit_io.serialize_log(session.game.config, session.events)
        return Response(content=text, media_type="application/json")

    @app.post(API_PREFIX + "/sandbox/evaluate")
    async def sandbox_evaluate(request: Request) -> Response:
        body = await _body(request)
        circuit_text = body.get("circuit")
        if not isinstance(circuit_text, str):
            raise GameDocumentError("expected the circuit document text", "circuit")
        doc = circuit_io.parse_circuit(circuit_text)
        state = circuit_io.evaluate_circuit(doc)
        payload: dict[str, Any] = {
            "dim": doc.dim,
            "num_qudits": doc.num_qudits,
            "state_lines": circuit_io.state_lines(state),
            "state_text": circuit_io.format_state(state),
        }
        shots = body.get("shots", 0)
        if not isinstance(shots, int) or isinstance(shots, bool) or shots < 0:
            raise GameDocumentError("shots must be a non-negative integer", "shots")
        if shots:
            seed = body.get("seed")
            if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
                raise GameDocumentError("seed must be an integer", "seed")
            hist = sample(state, shots, make_rng(seed))
            payload["shots"] = shots
            payload["histogram"] = [
                {"values": list(outcome), "count": count}
                for outcome, count in sorted(hist.counts.items())
            ]
        return _json_response(payload)

    @app.get(API_PREFIX + "/riddles")
    def list_riddles() -> Response:
        return _json_response(
            {"riddles": [riddles_mod.riddle_summary(r) for _, r in sorted(riddle_index.items())]}
        )

    def _riddle(riddle_id: int) -> riddles_mod.Riddle:
        riddle = riddle_index.get(riddle_id)
        if riddle is None:
            raise NotFoundError(f"no riddle {riddle_id}")
        return riddle

    @app.post(API_PREFIX + "/riddles/{riddle_id}/attempt")
    async def attempt_riddle(riddle_id: int, request: Request) -> Response:
        riddle = _riddle(riddle_id)
        body = await _body(request)
        moves_raw = body.get("moves")
        if not isinstance(moves_raw, list):
            raise GameDocumentError("moves must be an array", "moves")
        moves = [_move_from_body(m, f"moves[{i}]") for i, m in enumerate(moves_raw)]
        solved, final = riddles_mod.check_solution(riddle, moves)
        payload: dict[str, Any] = {
            "riddle_id": riddle.id,
            "solved": solved,
            "state_lines": circuit_io.state_lines(final),
            "state_text": circuit_io.format_state(final),
        }
        if solved:
            payload["explanation"] = riddle.explanation
        return _json_response(payload)

    @app.post(API_PREFIX + "/riddles/{riddle_id}/hint")
    async def hint_riddle(riddle_id: int, request: Request) -> Response:
        riddle = _riddle(riddle_id)
        body = await _body(request)
        moves_raw = body.get("moves", [])
        if not isinstance(moves_raw, list):
            raise GameDocumentError("moves must be an array", "moves")
        moves = [_move_from_body(m, f"moves[{i}]") for i, m in enumerate(moves_raw)]
        state = riddles_mod.apply_moves(riddle, moves)
        solved = riddles_mod.check_goal(riddle.goal, state)
        move = None if solved else riddles_mod.hint(riddle, moves)
        return _json_response(
            {
                "riddle_id": riddle.id,
                "solved": solved,
                "move": {"card": move.card.value, "targets": list(move.targets)} if move else None,
            }
        )

    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
