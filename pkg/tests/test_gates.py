import numpy as np
import pytest

from quditgame.gates import (
    Card,
    CardSet,
    GateError,
    arity,
    card_set,
    gate_kinds,
    gate_matrix,
    verify_unitary,
)
from quditgame.qudit import (
    apply_gate,
    basis_state,
    equal_up_to_global_phase,
    probabilities,
)


def all_gate_matrices():
    for dim in (2, 3):
        for kind in gate_kinds(dim):
            yield kind, dim, gate_matrix(kind, dim)


# --- unitarity ---------------------------------------------------------------


def test_every_gate_is_unitary_direct_product():
    # Oracle: compute G*G - I directly, independent of verify_unitary.
    for kind, dim, g in all_gate_matrices():
        delta = g.conj().T @ g - np.eye(g.shape[0])
        assert np.max(np.abs(delta)) <= 1e-10, f"{kind} at d={dim}"
        assert verify_unitary(g, tol=1e-10)


def test_verify_unitary_rejects_junk():
    assert not verify_unitary(np.zeros((3, 3)))
    with pytest.raises(GateError):
        verify_unitary(np.zeros((2, 3)))


def test_fourier_rows_orthonormal():
    f = gate_matrix(Card.H1, 3)
    gram = f @ f.conj().T
    np.testing.assert_allclose(gram, np.eye(3), atol=1e-12)


# --- canonical matrix values --------------------------------------------------


def test_hadamard_qubit_matrix_and_involution():
    h = gate_matrix(Card.H1, 2)
    np.testing.assert_allclose(h, np.array([[1, 1], [1, -1]]) / np.sqrt(2), atol=1e-15)
    np.testing.assert_allclose(h @ h, np.eye(2), atol=1e-12)


def test_hadamard_sandwich_flips_qubit():
    h, z = gate_matrix(Card.H1, 2), gate_matrix(Card.Z, 2)
    np.testing.assert_allclose(h @ z @ h @ [1, 0], [0, 1], atol=1e-12)


def test_shift_wraps_qutrit():
    s = apply_gate(basis_state(3, [2]), gate_matrix(Card.X1, 3), [0])
    np.testing.assert_allclose(s.amps, basis_state(3, [0]).amps, atol=1e-15)


def test_double_fourier_reverses_digits():
    # Oracle: build the Fourier matrix from its definition right here and
    # check F@F sends |1> to |2> before trusting the library's gate.
    w = np.exp(2j * np.pi / 3)
    f = np.array([[w ** (j * k) for k in range(3)] for j in range(3)]) / np.sqrt(3)
    np.testing.assert_allclose((f @ f)[:, 1], [0, 0, 1], atol=1e-12)

    s = basis_state(3, [1])
    for _ in range(2):
        s = apply_gate(s, gate_matrix(Card.H1, 3), [0])
    np.testing.assert_allclose(s.amps, [0, 0, 1], atol=1e-12)


def test_x2_is_double_shift():
    x1, x2 = gate_matrix(Card.X1, 3), gate_matrix(Card.X2, 3)
    np.testing.assert_allclose(x2, x1 @ x1, atol=1e-12)


def test_h2_is_cubed_fourier():
    h1, h2 = gate_matrix(Card.H1, 3), gate_matrix(Card.H2, 3)
    np.testing.assert_allclose(h2, h1 @ h1 @ h1, atol=1e-12)
    np.testing.assert_allclose(h2, h1.conj().T, atol=1e-15)


def test_qubit_y_is_standard_pauli():
    np.testing.assert_allclose(
        gate_matrix(Card.Y, 2), np.array([[0, -1j], [1j, 0]]), atol=1e-15
    )


def test_qutrit_y_is_shift_times_clock():
    np.testing.assert_allclose(
        gate_matrix(Card.Y, 3),
        gate_matrix(Card.X1, 3) @ gate_matrix(Card.Z, 3),
        atol=1e-15,
    )


def test_clock_matrix_entries():
    for dim in (2, 3):
        w = np.exp(2j * np.pi / dim)
        np.testing.assert_allclose(
            gate_matrix(Card.Z, dim), np.diag([w**k for k in range(dim)]), atol=1e-12
        )


def test_hzh_matches_x1_up_to_global_phase():
    for dim in (2,):
        h, z, x1 = (gate_matrix(k, dim) for k in (Card.H1, Card.Z, Card.X1))
        for v in range(dim):
            image = apply_gate(basis_state(dim, [v]), h, [0])
            image = apply_gate(image, z, [0])
            image = apply_gate(image, h, [0])
            shifted = apply_gate(basis_state(dim, [v]), x1, [0])
            assert equal_up_to_global_phase(image, shifted, tol=1e-9)


def test_phase_card_around_double_hadamard_keeps_zero_certain():
    h, z = gate_matrix(Card.H1, 2), gate_matrix(Card.Z, 2)
    for order in ([h, h, z], [z, h, h]):
        s = basis_state(2, [0])
        for gate in order:
            s = apply_gate(s, gate, [0])
        probs = probabilities(s)
        assert set(probs) == {(0,)}
        assert probs[(0,)] == pytest.approx(1.0, abs=1e-12)


def test_cx_is_permutation_matrix():
    for dim in (2, 3):
        cx = gate_matrix(Card.CX, dim)
        mags = np.abs(cx)
        assert np.all(np.isclose(mags, 0.0) | np.isclose(mags, 1.0))
        np.testing.assert_array_equal(np.count_nonzero(mags > 0.5, axis=0), 1)
        np.testing.assert_array_equal(np.count_nonzero(mags > 0.5, axis=1), 1)


def test_cx_adds_control_digit():
    for dim in (2, 3):
        cx = gate_matrix(Card.CX, dim)
        for c in range(dim):
            for t in range(dim):
                out = apply_gate(basis_state(dim, [c, t]), cx, [0, 1])
                expected = basis_state(dim, [c, (t + c) % dim])
                np.testing.assert_allclose(out.amps, expected.amps, atol=1e-15)


def test_entangler_gives_equal_matching_amplitudes():
    for dim in (2, 3):
        s = apply_gate(basis_state(dim, [0, 0]), gate_matrix(Card.H1, dim), [0])
        s = apply_gate(s, gate_matrix(Card.CX, dim), [0, 1])
        probs = probabilities(s)
        assert set(probs) == {(v, v) for v in range(dim)}
        nonzero = s.amps[np.abs(s.amps) > 1e-12]
        np.testing.assert_allclose(np.abs(nonzero), 1 / np.sqrt(dim), atol=1e-12)


# --- card kinds and version sets ----------------------------------------------


def test_gate_matrix_rejects_invalid_combinations():
    with pytest.raises(GateError):
        gate_matrix(Card.X2, 2)
    with pytest.raises(GateError):
        gate_matrix(Card.H2, 2)
    with pytest.raises(GateError):
        gate_matrix(Card.STEAL, 2)
    with pytest.raises(GateError):
        gate_matrix(Card.H1, 4)


def test_arity():
    assert arity(Card.CX) == 2
    assert all(arity(c) == 1 for c in (Card.X1, Card.X2, Card.Y, Card.Z, Card.H1, Card.H2))
    with pytest.raises(GateError):
        arity(Card.STEAL)


def test_gate_kinds_by_dim():
    assert Card.X2 not in gate_kinds(2)
    assert Card.H2 not in gate_kinds(2)
    assert set(gate_kinds(3)) == {Card.X1, Card.X2, Card.Y, Card.Z, Card.H1, Card.H2, Card.CX}


def test_easy_set_has_no_phase_cards():
    cs = card_set("easy")
    assert cs.dim == 2
    assert Card.Z not in cs.copies
    assert Card.Y not in cs.copies
    assert set(cs.gate_cards) == {Card.X1, Card.H1, Card.CX}
    assert cs.copies[Card.STEAL] == 1


def test_2d_set_extends_easy_with_phase_cards():
    easy, full = card_set("easy"), card_set("2d")
    assert set(easy.gate_cards) < set(full.gate_cards)
    assert {Card.Y, Card.Z} <= set(full.gate_cards)
    assert full.dim == 2


def test_3d_set_has_both_shift_gates():
    cs = card_set("3d")
    assert cs.dim == 3
    assert {Card.X1, Card.X2, Card.H1, Card.H2} <= set(cs.gate_cards)
    assert all(cs.copies[c] == 4 for c in cs.gate_cards)


def test_card_set_rejects_unknown_version():
    with pytest.raises(GateError):
        card_set("4d")


def test_card_set_size():
    assert card_set("easy").size_per_player() == 13
    assert card_set("2d").size_per_player() == 21
    assert card_set("3d").size_per_player() == 29


def test_card_tokens_are_wire_names():
    assert [str(c) for c in Card] == ["X1", "X2", "Y", "Z", "H1", "H2", "CX", "STEAL"]
    assert Card("CX") is Card.CX
