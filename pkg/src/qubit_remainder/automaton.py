"""Streaming Hamming-weight machine: the qubit run and its classical baselines.

The question the machine answers is which of ``0`` and ``n`` is *not* the
remainder of the Hamming weight modulo ``2n``. It never claims to know the
remainder itself; :class:`Answer` carries the excluded value.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError
from .noise import NoiseModel, sample_angle_errors
from .quantum_core import MeasurementOutcome, PlanarQubitState


@dataclass(frozen=True)
class ProblemSpec:
    """Modulus ``2n`` and string length ``N``."""

    n: int
    N: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise InvalidArgumentError(f"n must be >= 2, got {self.n}")
        if self.N < 1:
            raise InvalidArgumentError(f"N must be >= 1, got {self.N}")

    @property
    def modulus(self) -> int:
        return 2 * self.n

    @property
    def step(self) -> float:
        """Physical rotation per '1' character."""
        return math.pi / self.n

    def is_critical(self, remainder: int) -> bool:
        return remainder in (0, self.n)


@dataclass(frozen=True)
class BitString:
    bits: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.asarray(self.bits)
        if arr.ndim != 1:
            raise InvalidArgumentError("bit string must be one-dimensional")
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise InvalidArgumentError("bit string may only contain 0 and 1")
        arr = arr.astype(np.uint8, copy=True)
        arr.flags.writeable = False
        object.__setattr__(self, "bits", arr)

    @classmethod
    def from_text(cls, text: str) -> "BitString":
        return cls(np.array([int(c) for c in text if c in "01"], dtype=np.uint8))

    def __len__(self) -> int:
        return int(self.bits.size)

    @property
    def hamming_weight(self) -> int:
        return int(self.bits.sum(dtype=np.int64))


@dataclass(frozen=True)
class Answer:
    """The value in ``{0, n}`` asserted NOT to be the remainder."""

    value: int
    n: int

    def __post_init__(self) -> None:
        if self.value not in (0, self.n):
            raise InvalidArgumentError(f"answer must be 0 or {self.n}, got {self.value}")

    def is_correct(self, remainder: int) -> bool:
        return remainder != self.value


BitSource = BitString | Iterable[np.ndarray]


def iter_chunks(s: BitSource) -> Iterator[np.ndarray]:
    if isinstance(s, BitString):
        yield s.bits
    else:
        for chunk in s:
            yield np.asarray(chunk, dtype=np.uint8)


def true_remainder(s: BitSource, spec: ProblemSpec) -> int:
    """Hamming weight modulo ``2n``: the brute-force reference answer."""
    total = 0
    for chunk in iter_chunks(s):
        total += int(chunk.sum(dtype=np.int64))
    return total % spec.modulus


@dataclass(frozen=True)
class QubitRun:
    """Final qubit plus the bookkeeping needed to check error accumulation.

    ``drift`` is the unwrapped sum of physical-angle gate errors, so the
    Hilbert-angle deviation is ``drift / 2``.
    """

    state: PlanarQubitState
    hamming_weight: int
    drift: float

    @property
    def hilbert_deviation(self) -> float:
        return self.drift / 2.0


def trace_single_qubit(
    s: BitSource, spec: ProblemSpec, noise: NoiseModel, rng: np.random.Generator
) -> QubitRun:
    """Run the qubit over the string and keep the accumulated error.

    Each '1' rotates by ``pi/n`` plus one sampled gate error; '0' does nothing
    and draws nothing.
    """
    ones = 0
    drift = 0.0
    for chunk in iter_chunks(s):
        c = int(chunk.sum(dtype=np.int64))
        if c:
            drift += float(sample_angle_errors(noise, rng, c).sum())
        ones += c
    k = ones % spec.modulus
    return QubitRun(PlanarQubitState(k * spec.step + drift), ones, drift)


def run_single_qubit(
    s: BitSource, spec: ProblemSpec, noise: NoiseModel, rng: np.random.Generator
) -> PlanarQubitState:
    return trace_single_qubit(s, spec, noise, rng).state


def answer_from_outcome(m: MeasurementOutcome, spec: ProblemSpec) -> Answer:
    """``x == 1`` rules out ``n``; ``x == 0`` rules out ``0``."""
    return Answer(spec.n if m.x == 1 else 0, spec.n)


def counter_width(spec: ProblemSpec) -> int:
    return max(1, math.ceil(math.log2(spec.modulus)))


def run_classical_counter(s: BitSource, spec: ProblemSpec) -> tuple[int, int]:
    """Count ones in a ``ceil(log2(2n))``-bit register mod ``2n``.

    Returns ``(remainder, bit_flips)`` where ``bit_flips`` totals the register
    bits that changed over all increments.
    """
    m = spec.modulus
    step_flips = [bin(r ^ ((r + 1) % m)).count("1") for r in range(m)]
    cycle = sum(step_flips)
    r = 0
    flips = 0
    for chunk in iter_chunks(s):
        c = int(chunk.sum(dtype=np.int64))
        full, rest = divmod(c, m)
        flips += full * cycle
        for _ in range(rest):
            flips += step_flips[r]
            r = (r + 1) % m
    return r, flips


def run_classical_rotator(s: BitSource, spec: ProblemSpec, S: float) -> tuple[float, float]:
    """Noise-free large-spin rotator on the same schedule.

    Returns ``(final_angle, time_factor)``; the angle matches the ideal qubit
    and each pulse takes ``2S`` times as long at equal coupling energy.
    """
    if not S >= 0.5:
        raise InvalidArgumentError(f"spin S must be >= 1/2, got {S}")
    k = true_remainder(s, spec)
    return PlanarQubitState(k * spec.step).theta, 2.0 * S
