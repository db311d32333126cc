"""Exact state representations for the counting qubit and the GHZ register.

Two representations are used:

* :class:`PlanarQubitState` keeps a single qubit that only ever moves on the
  Bloch equator, so its physical rotation angle is the whole state (global
  phase dropped). Overlap with the start state is ``cos^2(theta / 2)``.
* :class:`DenseRegisterState` is a plain state vector over ``n_q`` qubits.
  Qubit 0 is the most significant bit of the basis index, i.e. the
  leftmost symbol of ``|q0 q1 ... >``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, InvalidArgumentError

TWO_PI = 2.0 * math.pi
MAX_QUBITS = 12
_ANGLE_ATOL = 1e-12


def _wrap(theta: float) -> float:
    t = math.fmod(theta, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    # fmod of a tiny negative value can land exactly on 2*pi after the shift
    if t >= TWO_PI:
        t = 0.0
    return t


@dataclass(frozen=True, eq=False)
class PlanarQubitState:
    """Qubit on the Bloch equator, stored as its physical rotation angle.

    ``theta`` is reduced into ``[0, 2*pi)`` on construction. Equality is
    equality of states, so angles are compared on the circle to within
    1e-12 rad.
    """

    theta: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.theta):
            raise InvalidArgumentError(f"theta must be finite, got {self.theta}")
        object.__setattr__(self, "theta", _wrap(float(self.theta)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PlanarQubitState):
            return NotImplemented
        d = abs(self.theta - other.theta)
        return min(d, TWO_PI - d) <= _ANGLE_ATOL

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class MeasurementOutcome:
    """Result of the projector onto ``|0>``; ``x == 1`` means the projection succeeded."""

    x: int

    def __post_init__(self) -> None:
        if self.x not in (0, 1):
            raise InvalidArgumentError(f"outcome must be 0 or 1, got {self.x}")


def rotate(state: PlanarQubitState, delta: float) -> PlanarQubitState:
    """Rotate counterclockwise by ``delta`` radians of physical angle."""
    if not math.isfinite(delta):
        raise InvalidArgumentError(f"rotation angle must be finite, got {delta}")
    return PlanarQubitState(state.theta + delta)


def prob_outcome_one(state: PlanarQubitState) -> float:
    return math.cos(state.theta / 2.0) ** 2


def measure_x(state: PlanarQubitState, rng: np.random.Generator) -> MeasurementOutcome:
    """Sample the projector onto the start state. Consumes one uniform variate."""
    u = rng.random()
    return MeasurementOutcome(1 if u < prob_outcome_one(state) else 0)


# --------------------------------------------------------------------------
# dense register


@dataclass(frozen=True)
class DenseRegisterState:
    n_q: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if not 1 <= self.n_q <= MAX_QUBITS:
            raise CapacityError(f"n_q must be in [1, {MAX_QUBITS}], got {self.n_q}")
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != 1 << self.n_q:
            raise InvalidArgumentError(
                f"expected {1 << self.n_q} amplitudes for {self.n_q} qubits, got {amps.shape[0]}"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, n_q: int, bits: tuple[int, ...] | list[int] | int) -> "DenseRegisterState":
        """Computational basis state from a bit tuple (qubit 0 first) or an index."""
        if isinstance(bits, (int, np.integer)):
            index = int(bits)
        else:
            if len(bits) != n_q:
                raise InvalidArgumentError("bit tuple length must equal n_q")
            index = 0
            for b in bits:
                index = (index << 1) | int(b)
        if not 1 <= n_q <= MAX_QUBITS:
            raise CapacityError(f"n_q must be in [1, {MAX_QUBITS}], got {n_q}")
        amps = np.zeros(1 << n_q, dtype=np.complex128)
        amps[index] = 1.0
        return cls(n_q, amps)

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n_q)


def fidelity(a: DenseRegisterState, b: DenseRegisterState) -> float:
    """Overlap magnitude ``|<a|b>|``; insensitive to global phase."""
    if a.n_q != b.n_q:
        raise InvalidArgumentError("registers have different sizes")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)))


def ghz_plus(n_q: int) -> DenseRegisterState:
    """``(|0...0> + |1...1>)/sqrt(2)``."""
    return _cat(n_q, 1.0)


def ghz_minus(n_q: int) -> DenseRegisterState:
    """``(|0...0> - |1...1>)/sqrt(2)``."""
    return _cat(n_q, -1.0)


def ghz_logical(n_q: int, k: int, n: int) -> DenseRegisterState:
    """Register state holding ``k`` steps of size pi/n as a relative phase."""
    return _cat(n_q, -np.exp(-1j * math.pi * k / n))


def _cat(n_q: int, last: complex) -> DenseRegisterState:
    if not 1 <= n_q <= MAX_QUBITS:
        raise CapacityError(f"n_q must be in [1, {MAX_QUBITS}], got {n_q}")
    amps = np.zeros(1 << n_q, dtype=np.complex128)
    amps[0] = 1.0 / math.sqrt(2.0)
    amps[-1] = last / math.sqrt(2.0)
    return DenseRegisterState(n_q, amps)


def ghz_logical_init(n_q: int) -> DenseRegisterState:
    """Logical zero of the encoded register, ``(|0...0> - |1...1>)/sqrt(2)``."""
    return ghz_minus(n_q)


def _check_target(state: DenseRegisterState, target: int) -> int:
    if isinstance(target, bool) or not isinstance(target, (int, np.integer)):
        raise InvalidArgumentError(f"qubit index must be an integer, got {target!r}")
    if not 0 <= target < state.n_q:
        raise InvalidArgumentError(f"qubit index {target} out of range for {state.n_q} qubits")
    return int(target)


def _slice(n_q: int, qubit: int, value: int) -> tuple:
    idx: list = [slice(None)] * n_q
    idx[qubit] = value
    return tuple(idx)


def ghz_phase_pulse(state: DenseRegisterState, phase: float, target: int = 0) -> DenseRegisterState:
    """Evolve under ``dE |1><1|`` on ``target``: amplitudes with that bit set gain ``exp(-i*phase)``."""
    target = _check_target(state, target)
    if not math.isfinite(phase):
        raise InvalidArgumentError(f"phase must be finite, got {phase}")
    psi = state.tensor().copy()
    psi[_slice(state.n_q, target, 1)] *= np.exp(-1j * phase)
    return DenseRegisterState(state.n_q, psi)


def ghz_bit_flip(state: DenseRegisterState, target: int) -> DenseRegisterState:
    """Pauli X on ``target``."""
    target = _check_target(state, target)
    return DenseRegisterState(state.n_q, _x(state.tensor(), target))


def _x(psi: np.ndarray, q: int) -> np.ndarray:
    return np.flip(psi, axis=q).copy()


def _h(psi: np.ndarray, q: int) -> np.ndarray:
    n_q = psi.ndim
    a0 = psi[_slice(n_q, q, 0)]
    a1 = psi[_slice(n_q, q, 1)]
    out = np.empty_like(psi)
    out[_slice(n_q, q, 0)] = (a0 + a1) / math.sqrt(2.0)
    out[_slice(n_q, q, 1)] = (a0 - a1) / math.sqrt(2.0)
    return out


def _cnot_chain(psi: np.ndarray) -> np.ndarray:
    """CNOT from qubit 0 onto every other qubit (the targets commute)."""
    n_q = psi.ndim
    out = psi.copy()
    if n_q == 1:
        return out
    ctrl = _slice(n_q, 0, 1)
    sub = out[ctrl]
    out[ctrl] = np.flip(sub, axis=tuple(range(n_q - 1)))
    return out


def ghz_encode_unitary(state: DenseRegisterState, inverse: bool = False) -> DenseRegisterState:
    """Apply the encoder mapping ``|0...0> -> |->`` and ``|1...1> -> |+>``, or its inverse.

    Circuit (in time order): CNOT chain from qubit 0, X(0), H(0), CNOT chain.
    Every stage is self-inverse, so the inverse runs the same stages reversed.
    """
    psi = state.tensor()
    stages = [_cnot_chain, lambda p: _x(p, 0), lambda p: _h(p, 0), _cnot_chain]
    if inverse:
        stages.reverse()
    for stage in stages:
        psi = stage(psi)
    return DenseRegisterState(state.n_q, psi)


def bits_of(index: int, n_q: int) -> tuple[int, ...]:
    return tuple((index >> (n_q - 1 - q)) & 1 for q in range(n_q))


def measure_all(state: DenseRegisterState, rng: np.random.Generator) -> tuple[int, ...]:
    """Born-rule sample of every qubit at once. Consumes one uniform variate."""
    probs = np.abs(state.amplitudes) ** 2
    cdf = np.cumsum(probs)
    u = rng.random() * cdf[-1]
    index = int(np.searchsorted(cdf, u, side="right"))
    # guard against u landing on the final edge through rounding
    index = min(index, len(probs) - 1)
    while probs[index] == 0.0 and index > 0:
        index -= 1
    return bits_of(index, state.n_q)
