"""Command-line front door.

Subcommands: ``simulate`` (evaluate a .qcirc file), ``riddle`` (list /
attempt / solve), ``replay`` (re-run an event-log document), ``serve`` (run
the HTTP service).  Exit codes are a stable scripting contract: 0 success,
1 usage error, 2 input/parse error, 3 runtime error.  ``--json`` switches
any subcommand to the canonical structured encoding.

QUDITGAME_SEED provides a default seed; explicit --seed wins.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from . import circuit_io, engine, riddles as riddles_mod
from .circuit_io import ParseError, GameDocumentError, canonical_dumps
from .engine import Move, ReplayDivergenceError
from .errors import QuditGameError
from .gates import Card, arity
from .qudit import StateVector, make_rng, measure_all, sample
from .riddles import RiddleError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_RUNTIME = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors exit 1, not argparse's 2
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="quditgame", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="evaluate a .qcirc circuit file")
    sim.add_argument("file")
    sim.add_argument("--shots", type=int, default=0, help="sample a histogram")
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--measure", action="store_true", help="draw one outcome")
    sim.add_argument("--json", action="store_true")

    rid = sub.add_parser("riddle", help="list, attempt, or solve riddles")
    rid_sub = rid.add_subparsers(dest="riddle_command", required=True)

    def riddle_leaf(name: str, help_text: str):
        leaf = rid_sub.add_parser(name, help=help_text)
        leaf.add_argument("--extra", action="append", default=[], metavar="FILE",
                          help="load an additional .riddle file (repeatable)")
        leaf.add_argument("--json", action="store_true")
        return leaf

    riddle_leaf("list", "list riddles")
    attempt = riddle_leaf("attempt", "check a card sequence")
    attempt.add_argument("id", type=int)
    attempt.add_argument("moves", nargs="*",
                         help="flat move tokens, e.g.: H1 1 Z 1 H1 1  or  CX 1 2")
    solve = riddle_leaf("solve", "print a shortest solution")
    solve.add_argument("id", type=int)

    rep = sub.add_parser("replay", help="re-run a recorded event-log document")
    rep.add_argument("file")
    rep.add_argument("--json", action="store_true")

    srv = sub.add_parser("serve", help="run the HTTP service")
    srv.add_argument("--port", type=int, default=8000)
    srv.add_argument("--bind", default="127.0.0.1")
    srv.add_argument("--static", default=None, help="directory with the browser UI build")
    srv.add_argument("--extra", action="append", default=[], metavar="FILE",
                     help="load an additional .riddle file (repeatable)")
    return parser


def _default_seed() -> int | None:
    raw = os.environ.get("QUDITGAME_SEED")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise _UsageError(f"QUDITGAME_SEED must be an integer, got {raw!r}") from None


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None


def _amplitude_rows(state: StateVector) -> list[dict]:
    from .qudit import digits_of

    rows = []
    for i, a in enumerate(state.amps):
        if abs(a) ** 2 <= circuit_io.DISPLAY_EPS:
            continue
        rows.append(
            {
                "basis": list(digits_of(i, state.dim, state.num_qudits)),
                "re": float(a.real),
                "im": float(a.imag),
            }
        )
    return rows


def _cmd_simulate(args: argparse.Namespace) -> int:
    doc = circuit_io.parse_circuit(_read(args.file))
    state = circuit_io.evaluate_circuit(doc)
    seed = args.seed if args.seed is not None else _default_seed()
    rng = make_rng(seed)
    outcome = measure_all(state, rng)[0] if args.measure else None
    hist = sample(state, args.shots, rng) if args.shots else None

    if args.json:
        payload = {
            "dim": doc.dim,
            "num_qudits": doc.num_qudits,
            "state_lines": circuit_io.state_lines(state),
            "amplitudes": _amplitude_rows(state),
        }
        if outcome is not None:
            payload["outcome"] = list(outcome)
        if hist is not None:
            payload["shots"] = hist.shots
            payload["histogram"] = [
                {"values": list(o), "count": c} for o, c in sorted(hist.counts.items())
            ]
        sys.stdout.write(canonical_dumps(payload))
        return EXIT_OK

    sys.stdout.write(circuit_io.format_state(state))
    if outcome is not None:
        digits = ",".join(str(v) for v in outcome)
        sys.stdout.write(f"outcome |{digits}>\n")
    if hist is not None:
        for o, count in sorted(hist.counts.items()):
            digits = ",".join(str(v) for v in o)
            sys.stdout.write(f"{count:6d} |{digits}>\n")
    return EXIT_OK


def _load_extra(extra_files: Sequence[str]) -> list[riddles_mod.Riddle]:
    known = {r.id for r in riddles_mod.builtin_riddles()}
    extra = []
    for path in extra_files:
        riddle = circuit_io.parse_riddle(_read(path))
        if riddle.id in known:
            raise ParseError(f"riddle id {riddle.id} from {path} already exists")
        known.add(riddle.id)
        extra.append(riddle)
    return extra


def _load_riddles(extra_files: Sequence[str]) -> list[riddles_mod.Riddle]:
    return list(riddles_mod.builtin_riddles()) + _load_extra(extra_files)


def _find_riddle(riddles: list[riddles_mod.Riddle], riddle_id: int) -> riddles_mod.Riddle:
    for r in riddles:
        if r.id == riddle_id:
            return r
    raise ParseError(f"no riddle {riddle_id}")


def _parse_move_tokens(tokens: Sequence[str]) -> list[Move]:
    """Greedy parse of a flat token list: TOKEN takes arity(TOKEN) indices."""
    moves = []
    i = 0
    while i < len(tokens):
        try:
            card = Card(tokens[i])
        except ValueError:
            raise _UsageError(f"unknown card token {tokens[i]!r}") from None
        if card is Card.STEAL:
            raise _UsageError("STEAL is not playable in riddles")
        k = arity(card)
        raw = tokens[i + 1 : i + 1 + k]
        if len(raw) < k:
            raise _UsageError(f"{card} needs {k} qudit index(es)")
        try:
            targets = tuple(int(t) for t in raw)
        except ValueError:
            raise _UsageError(f"bad qudit index after {card}") from None
        moves.append(Move(card=card, targets=targets))
        i += 1 + k
    return moves


def _format_move(move: Move) -> str:
    return f"{move.card} " + " ".join(str(t) for t in move.targets)


def _cmd_riddle(args: argparse.Namespace) -> int:
    riddles = _load_riddles(args.extra)
    if args.riddle_command == "list":
        if args.json:
            payload = {"riddles": [riddles_mod.riddle_summary(r) for r in riddles]}
            sys.stdout.write(canonical_dumps(payload))
        else:
            for r in riddles:
                goal = riddles_mod.describe_goal(r.goal, r.dim)
                sys.stdout.write(f"{r.id:>2}  {r.difficulty:<8}{goal}\n")
        return EXIT_OK

    riddle = _find_riddle(riddles, args.id)
    if args.riddle_command == "solve":
        solution = riddles_mod.solve(riddle)
        if args.json:
            payload = {
                "riddle_id": riddle.id,
                "solution": [
                    {"card": m.card.value, "targets": list(m.targets)} for m in solution
                ]
                if solution is not None
                else None,
            }
            sys.stdout.write(canonical_dumps(payload))
        elif solution is None:
            sys.stdout.write(f"no solution within {riddle.max_cards} cards\n")
        else:
            sys.stdout.write(" / ".join(_format_move(m) for m in solution) + "\n")
        return EXIT_OK

    moves = _parse_move_tokens(args.moves)
    solved, final = riddles_mod.check_solution(riddle, moves)
    if args.json:
        payload = {
            "riddle_id": riddle.id,
            "solved": solved,
            "state_lines": circuit_io.state_lines(final),
        }
        if solved:
            payload["explanation"] = riddle.explanation
        sys.stdout.write(canonical_dumps(payload))
        return EXIT_OK
    sys.stdout.write("solved\n" if solved else "not solved\n")
    sys.stdout.write(circuit_io.format_state(final))
    if solved:
        sys.stdout.write(riddle.explanation + "\n")
    return EXIT_OK


def _cmd_replay(args: argparse.Namespace) -> int:
    config, events = circuit_io.parse_log(_read(args.file))
    state = engine.replay_events(config, events)
    carries = {str(p.id): p.carry_value for p in state.players}
    result = engine.score(state) if state.phase == engine.PHASE_FINISHED else None
    if args.json:
        payload = {"phase": state.phase, "carries": carries}
        if result is not None:
            payload["score"] = {
                "style": result.style,
                "carries": {str(k): v for k, v in result.carries.items()},
            }
            if result.winners is not None:
                payload["score"]["winners"] = list(result.winners)
            if result.total is not None:
                payload["score"]["total"] = result.total
                payload["score"]["max_total"] = result.max_total
        sys.stdout.write(canonical_dumps(payload))
        return EXIT_OK
    sys.stdout.write(
        "carries: " + " ".join(f"p{pid}={v}" for pid, v in sorted(carries.items())) + "\n"
    )
    if result is not None:
        if result.winners is not None:
            names = ", ".join(f"player {w}" for w in result.winners)
            sys.stdout.write(f"winner: {names}\n")
        else:
            sys.stdout.write(f"group score: {result.total} of {result.max_total}\n")
    else:
        sys.stdout.write(f"phase: {state.phase}\n")
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(extra_riddles=tuple(_load_extra(args.extra)), static_dir=args.static)
    uvicorn.run(app, host=args.bind, port=args.port, log_level="warning")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "riddle":
            return _cmd_riddle(args)
        if args.command == "replay":
            return _cmd_replay(args)
        return _cmd_serve(args)
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, GameDocumentError, RiddleError, ReplayDivergenceError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except QuditGameError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
