#!/usr/bin/env python3
"""Time the brute-force solver on every built-in riddle."""

import time

from quditgame.riddles import builtin_riddles, solve


def main():
    total = 0.0
    for riddle in builtin_riddles():
        start = time.perf_counter()
        solution = solve(riddle)
        elapsed = time.perf_counter() - start
        total += elapsed
        rendered = (
            " / ".join(f"{m.card} {' '.join(map(str, m.targets))}" for m in solution)
            if solution is not None
            else "unsolved"
        )
        print(f"riddle {riddle.id} ({riddle.difficulty:<6}) {elapsed*1000:7.2f} ms  {rendered}")
    print(f"total {total*1000:.2f} ms")


if __name__ == "__main__":
    main()
