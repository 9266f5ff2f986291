"""Qudit statevector core: amplitudes, gate application, measurement, sampling.

Conventions used throughout:

- ``dim`` (d) is 2 or 3, ``num_qudits`` (n) between 1 and MAX_QUDITS.
- Amplitudes are indexed big-endian in base d: qudit 0 is the most
  significant digit, so index(v0,...,v_{n-1}) = sum(v_i * d**(n-1-i)).
- Qudit indices in this module are 0-based.  The text formats and the game
  layer number players/qudits from 1 and convert at the boundary.
- Value semantics: no operation mutates its inputs; amplitude arrays inside
  a StateVector are marked read-only.

Gates are applied by index arithmetic over the target digits (axis reshaping
on the d^n tensor); the full d^n x d^n matrix is never materialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import QuditGameError

MAX_QUDITS = 8
NORM_TOL = 1e-10
PROB_EPS = 1e-12
DEFAULT_PHASE_TOL = 1e-9

Outcome = tuple[int, ...]


class StateError(QuditGameError):
    code = "invalid-state"


def index_of(dim: int, values: Sequence[int]) -> int:
    """Basis index of the digit string (v0,...,v_{n-1}), big-endian base d."""
    idx = 0
    for v in values:
        idx = idx * dim + v
    return idx


def digits_of(index: int, dim: int, num_qudits: int) -> Outcome:
    """Inverse of index_of: digit string of a basis index."""
    digits = [0] * num_qudits
    for i in range(num_qudits - 1, -1, -1):
        index, digits[i] = divmod(index, dim)
    return tuple(digits)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Unit-norm complex amplitude vector over ``num_qudits`` d-level systems."""

    dim: int
    num_qudits: int
    amps: np.ndarray

    def __post_init__(self) -> None:
        if self.dim not in (2, 3):
            raise StateError(f"dimension must be 2 or 3, got {self.dim}")
        if not 1 <= self.num_qudits <= MAX_QUDITS:
            raise StateError(
                f"num_qudits must be in [1, {MAX_QUDITS}], got {self.num_qudits}"
            )
        amps = np.array(self.amps, dtype=complex, copy=True)
        size = self.dim**self.num_qudits
        if amps.shape != (size,):
            raise StateError(f"expected {size} amplitudes, got shape {amps.shape}")
        if not np.all(np.isfinite(amps.view(np.float64))):
            raise StateError("amplitudes must be finite")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise StateError(f"state norm {norm!r} deviates from 1 by more than {NORM_TOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)


@dataclass(frozen=True)
class Histogram:
    """Measurement counts per outcome; sum of counts equals shots."""

    counts: dict[Outcome, int]
    shots: int


def basis_state(dim: int, values: Sequence[int]) -> StateVector:
    """Product basis state |v0,...,v_{n-1}> for the given digits."""
    values = list(values)
    if not values:
        raise StateError("basis_state needs at least one digit")
    for v in values:
        if not 0 <= v < dim:
            raise StateError(f"digit {v} out of range for dimension {dim}")
    amps = np.zeros(dim ** len(values), dtype=complex)
    amps[index_of(dim, values)] = 1.0
    return StateVector(dim, len(values), amps)


def _apply_unitary(
    amps: np.ndarray, gate: np.ndarray, targets: Sequence[int], dim: int, n: int
) -> np.ndarray:
    """Apply ``gate`` to the target axes of a (possibly unnormalized) vector."""
    k = len(targets)
    tensor = amps.reshape((dim,) * n)
    front = np.moveaxis(tensor, targets, range(k))
    block = gate @ front.reshape(dim**k, -1)
    back = np.moveaxis(block.reshape((dim,) * n), range(k), targets)
    return np.ascontiguousarray(back).reshape(-1)


def apply_gate(state: StateVector, gate: np.ndarray, targets: Sequence[int]) -> StateVector:
    """Apply a d^k x d^k unitary to the listed qudits (first target = control slot)."""
    targets = list(targets)
    k = len(targets)
    if k not in (1, 2):
        raise StateError(f"gates act on 1 or 2 qudits, got {k} targets")
    if len(set(targets)) != k:
        raise StateError(f"duplicate target in {targets}")
    for t in targets:
        if not 0 <= t < state.num_qudits:
            raise StateError(f"target {t} out of range for {state.num_qudits} qudits")
    side = state.dim**k
    gate = np.asarray(gate, dtype=complex)
    if gate.shape != (side, side):
        raise StateError(f"gate shape {gate.shape} does not match {k} qudits of dim {state.dim}")
    amps = _apply_unitary(state.amps, gate, targets, state.dim, state.num_qudits)
    return StateVector(state.dim, state.num_qudits, amps)


def probabilities(state: StateVector) -> dict[Outcome, float]:
    """Born probabilities per outcome; entries below PROB_EPS are omitted."""
    probs = np.abs(state.amps) ** 2
    return {
        digits_of(i, state.dim, state.num_qudits): float(p)
        for i, p in enumerate(probs)
        if p > PROB_EPS
    }


def make_rng(seed: int | None = None) -> np.random.Generator:
    """Seedable, cross-platform-deterministic generator (PCG64)."""
    return np.random.Generator(np.random.PCG64(seed))


def rng_state(rng: np.random.Generator) -> dict:
    """JSON-serializable snapshot of a generator created by make_rng."""
    return rng.bit_generator.state


def rng_from_state(state: dict) -> np.random.Generator:
    bitgen = np.random.PCG64()
    bitgen.state = state
    return np.random.Generator(bitgen)


def measure_all(state: StateVector, rng: np.random.Generator) -> tuple[Outcome, StateVector]:
    """Draw one full outcome with Born probabilities; collapse to its basis state."""
    probs = np.abs(state.amps) ** 2
    probs /= probs.sum()
    idx = int(rng.choice(len(probs), p=probs))
    outcome = digits_of(idx, state.dim, state.num_qudits)
    return outcome, basis_state(state.dim, outcome)


def _check_subset(state: StateVector, indices: Sequence[int]) -> list[int]:
    indices = list(indices)
    if not indices:
        raise StateError("index list must not be empty")
    if len(set(indices)) != len(indices):
        raise StateError(f"duplicate index in {indices}")
    for i in indices:
        if not 0 <= i < state.num_qudits:
            raise StateError(f"index {i} out of range for {state.num_qudits} qudits")
    return indices


def postselect(
    state: StateVector, indices: Sequence[int], values: Sequence[int]
) -> tuple[float, StateVector]:
    """Project onto qudit ``indices`` having ``values``; renormalize.

    Returns (probability of that partial outcome, collapsed state).  Raises
    when the probability is numerically zero.
    """
    indices = _check_subset(state, indices)
    values = list(values)
    if len(values) != len(indices):
        raise StateError("values and indices must have equal length")
    for v in values:
        if not 0 <= v < state.dim:
            raise StateError(f"digit {v} out of range for dimension {state.dim}")
    d, n = state.dim, state.num_qudits
    all_idx = np.arange(d**n)
    mask = np.ones(d**n, dtype=bool)
    for pos, v in zip(indices, values):
        mask &= (all_idx // d ** (n - 1 - pos)) % d == v
    projected = np.where(mask, state.amps, 0.0)
    prob = float(np.sum(np.abs(projected) ** 2))
    if prob <= PROB_EPS:
        raise StateError(f"outcome {tuple(values)} on qudits {indices} has zero probability")
    return prob, StateVector(d, n, projected / np.sqrt(prob))


def measure_subset(
    state: StateVector, indices: Sequence[int], rng: np.random.Generator
) -> tuple[Outcome, StateVector]:
    """Measure only the listed qudits; collapse the rest consistently.

    Values are drawn from the marginal distribution of the listed qudits (in
    the listed order); the returned state is the renormalized projection onto
    that partial outcome.
    """
    indices = _check_subset(state, indices)
    d, n, k = state.dim, state.num_qudits, len(indices)
    ptensor = (np.abs(state.amps) ** 2).reshape((d,) * n)
    marginal = np.moveaxis(ptensor, indices, range(k)).reshape(d**k, -1).sum(axis=1)
    marginal /= marginal.sum()
    j = int(rng.choice(d**k, p=marginal))
    values = digits_of(j, d, k)
    _, collapsed = postselect(state, indices, values)
    return values, collapsed


def sample(state: StateVector, shots: int, rng: np.random.Generator) -> Histogram:
    """Histogram of ``shots`` independent full measurements (state not consumed)."""
    if shots < 1:
        raise StateError(f"shots must be >= 1, got {shots}")
    probs = np.abs(state.amps) ** 2
    probs /= probs.sum()
    draws = rng.choice(len(probs), size=shots, p=probs)
    idx, counts = np.unique(draws, return_counts=True)
    return Histogram(
        counts={
            digits_of(int(i), state.dim, state.num_qudits): int(c)
            for i, c in zip(idx, counts)
        },
        shots=shots,
    )


def equal_up_to_global_phase(
    a: StateVector, b: StateVector, tol: float = DEFAULT_PHASE_TOL
) -> bool:
    """True iff a = c*b for some unit-modulus scalar c, within ``tol``.

    The candidate phase is read off the largest-magnitude amplitude of b.
    """
    if a.dim != b.dim or a.num_qudits != b.num_qudits:
        raise StateError("states have mismatched shape")
    j = int(np.argmax(np.abs(b.amps)))
    ratio = a.amps[j] / b.amps[j]
    mag = abs(ratio)
    c = ratio / mag if mag > 0 else 1.0
    return float(np.linalg.norm(a.amps - c * b.amps)) <= tol
