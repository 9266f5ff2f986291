"""Card tokens and the canonical unitaries behind each playable card.

The family, with w = exp(2*pi*i/d):

- X1 shifts |k> -> |k+1 mod d>; X2 (d=3 only) shifts by 2, so X2 = X1^2.
- Z is the clock matrix diag(w^0, ..., w^(d-1)).
- Y is i*X1*Z at d=2 (the standard Pauli Y) and X1*Z at d=3.
- H1 is the Fourier matrix F with F[j,k] = w^(jk)/sqrt(d); H2 (d=3 only) is
  its inverse F*, which also equals H1^3.  At d=2 the two coincide, so only
  H1 is dealt.
- CX adds the control digit onto the target: |c,t> -> |c, t+c mod d>.

Card version sets:  "easy" deals the d=2 permutation-only cards, "2d" adds
the phase cards Y and Z, "3d" deals the whole family at d=3.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

import numpy as np

from .errors import QuditGameError

UNITARY_TOL = 1e-10


class GateError(QuditGameError):
    code = "invalid-gate"


class Card(str, Enum):
    """Playable card tokens (exact, case-sensitive wire names)."""

    X1 = "X1"
    X2 = "X2"
    Y = "Y"
    Z = "Z"
    H1 = "H1"
    H2 = "H2"
    CX = "CX"
    STEAL = "STEAL"

    def __str__(self) -> str:  # "H1", not "Card.H1", also on py3.10
        return self.value


GATE_CARDS = (Card.X1, Card.X2, Card.Y, Card.Z, Card.H1, Card.H2, Card.CX)
D3_ONLY = frozenset({Card.X2, Card.H2})


def arity(card: Card) -> int:
    """Number of qudits a gate card acts on (STEAL is not a gate)."""
    if card is Card.STEAL:
        raise GateError("STEAL is an action card, not a gate")
    return 2 if card is Card.CX else 1


def gate_kinds(dim: int) -> tuple[Card, ...]:
    """Gate cards defined at this dimension."""
    return tuple(c for c in GATE_CARDS if dim == 3 or c not in D3_ONLY)


def _fourier(d: int) -> np.ndarray:
    w = np.exp(2j * np.pi / d)
    return np.array([[w ** (j * k) for k in range(d)] for j in range(d)]) / np.sqrt(d)


def _shift(d: int, step: int) -> np.ndarray:
    m = np.zeros((d, d), dtype=complex)
    for k in range(d):
        m[(k + step) % d, k] = 1.0
    return m


def _controlled_shift(d: int) -> np.ndarray:
    m = np.zeros((d * d, d * d), dtype=complex)
    for c in range(d):
        for t in range(d):
            m[c * d + (t + c) % d, c * d + t] = 1.0
    return m


@functools.lru_cache(maxsize=None)
def gate_matrix(kind: Card, dim: int) -> np.ndarray:
    """Canonical unitary for a gate card at dimension ``dim`` (read-only array)."""
    if dim not in (2, 3):
        raise GateError(f"dimension must be 2 or 3, got {dim}")
    if kind is Card.STEAL:
        raise GateError("STEAL has no matrix")
    if dim == 2 and kind in D3_ONLY:
        raise GateError(f"{kind} is only defined at dimension 3")
    if dim == 2:
        # Exact literals for the qubit case.
        mats = {
            Card.X1: np.array([[0, 1], [1, 0]], dtype=complex),
            Card.Z: np.diag([1.0, -1.0]).astype(complex),
            Card.Y: np.array([[0, -1j], [1j, 0]]),
            Card.H1: np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
            Card.CX: _controlled_shift(2),
        }
        m = mats[kind]
    else:
        if kind is Card.X1:
            m = _shift(3, 1)
        elif kind is Card.X2:
            m = _shift(3, 2)
        elif kind is Card.Z:
            w = np.exp(2j * np.pi / 3)
            m = np.diag([1.0, w, w**2])
        elif kind is Card.Y:
            w = np.exp(2j * np.pi / 3)
            m = _shift(3, 1) @ np.diag([1.0, w, w**2])
        elif kind is Card.H1:
            m = _fourier(3)
        elif kind is Card.H2:
            m = _fourier(3).conj().T
        else:
            m = _controlled_shift(3)
    m.setflags(write=False)
    return m


def verify_unitary(mat: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    """True iff max|G*G - I| <= tol."""
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise GateError(f"expected a square matrix, got shape {mat.shape}")
    delta = mat.conj().T @ mat - np.eye(mat.shape[0])
    return float(np.max(np.abs(delta))) <= tol


VERSIONS: dict[str, int] = {"easy": 2, "2d": 2, "3d": 3}

DEFAULT_GATE_COPIES = 4
DEFAULT_STEAL_COPIES = 1


@dataclass(frozen=True)
class CardSet:
    """Cards dealt in one game version; copies are per player."""

    version: str
    dim: int
    copies: Mapping[Card, int]

    @property
    def gate_cards(self) -> tuple[Card, ...]:
        return tuple(c for c in GATE_CARDS if self.copies.get(c, 0) > 0)

    @property
    def action_cards(self) -> tuple[Card, ...]:
        return (Card.STEAL,) if self.copies.get(Card.STEAL, 0) > 0 else ()

    def size_per_player(self) -> int:
        return sum(self.copies.values())


def card_set(version: str) -> CardSet:
    """Default card multiset for a game version.

    "easy" omits the phase cards (Y, Z) so beginners see permutation-like
    behavior only; "2d" adds them; "3d" is the full d=3 family.
    """
    if version not in VERSIONS:
        raise GateError(f"unknown version {version!r}, expected one of {sorted(VERSIONS)}")
    dim = VERSIONS[version]
    if version == "easy":
        kinds = (Card.X1, Card.H1, Card.CX)
    elif version == "2d":
        kinds = (Card.X1, Card.Y, Card.Z, Card.H1, Card.CX)
    else:
        kinds = gate_kinds(3)
    copies = {kind: DEFAULT_GATE_COPIES for kind in kinds}
    copies[Card.STEAL] = DEFAULT_STEAL_COPIES
    return CardSet(version=version, dim=dim, copies=copies)
