#!/usr/bin/env python3
"""Walk through the three core effects (superposition, interference,
entanglement), printing the state after every card."""

import quditgame as qg


def play_sequence(title, dim, init, ops):
    print(f"\n== {title} (d={dim}) ==")
    state = qg.basis_state(dim, init)
    print("start".ljust(12), qg.state_lines(state))
    for kind, targets in ops:
        state = qg.apply_gate(state, qg.gate_matrix(kind, dim), targets)
        label = f"{kind} {[t + 1 for t in targets]}"
        print(label.ljust(12), qg.state_lines(state))
    return state


def main():
    play_sequence("superposition", 2, [0], [(qg.Card.H1, [0])])

    play_sequence(
        "interference: H1, Z, H1 flips the value",
        2,
        [0],
        [(qg.Card.H1, [0]), (qg.Card.Z, [0]), (qg.Card.H1, [0])],
    )

    bell = play_sequence(
        "entanglement", 2, [0, 0], [(qg.Card.H1, [0]), (qg.Card.CX, [0, 1])]
    )
    hist = qg.sample(bell, 1000, qg.make_rng(0))
    print("1000 shots:", dict(sorted(hist.counts.items())))

    play_sequence(
        "entanglement, three levels",
        3,
        [0, 0],
        [(qg.Card.H1, [0]), (qg.Card.CX, [0, 1])],
    )


if __name__ == "__main__":
    main()
