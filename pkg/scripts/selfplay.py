#!/usr/bin/env python3
"""Seeded random self-play: prints the full transcript of one game and the
replay document that reproduces it."""

import argparse

import numpy as np

import quditgame as qg
from quditgame.circuit_io import serialize_log
from quditgame.engine import end_round, legal_moves, new_game, play_card, score


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--players", type=int, default=3)
    parser.add_argument("--rounds", type=int, default=2)
    parser.add_argument("--hand", type=int, default=3)
    parser.add_argument("--version", default="3d", choices=["easy", "2d", "3d"])
    parser.add_argument("--log-out", metavar="FILE", help="write the event log here")
    args = parser.parse_args()

    config = qg.GameConfig(
        version=args.version,
        num_players=args.players,
        num_rounds=args.rounds,
        hand_size=args.hand,
        seed=args.seed,
    )
    game = new_game(config)
    policy = np.random.default_rng(args.seed)
    events = []

    while game.phase != "finished":
        if game.phase == "in-round":
            moves = legal_moves(game, game.turn)
            move = moves[int(policy.integers(len(moves)))]
            events.append(
                {"type": "play", "player": game.turn, "card": move.card.value,
                 "targets": list(move.targets)}
            )
            print(f"round {game.round_number}  player {game.turn}: "
                  f"{move.card} {' '.join(map(str, move.targets))}")
            play_card(game, game.turn, move)
        else:
            pre, outcome, _ = end_round(game)
            events.append({"type": "evaluate", "outcome": list(outcome)})
            print("  pre-measurement state:")
            for line in qg.state_lines(pre):
                print("   ", line)
            print("  outcome:", ",".join(map(str, outcome)))

    result = score(game)
    print("\nfinal carries:", result.carries)
    if result.winners is not None:
        print("winner(s):", result.winners)
    else:
        print(f"group score: {result.total} / {result.max_total}")

    if args.log_out:
        with open(args.log_out, "w", encoding="utf-8") as fh:
            fh.write(serialize_log(config, events))
        print("event log written to", args.log_out)


if __name__ == "__main__":
    main()
