"""Error-corrected variants: three-qubit majority voting and the GHZ register."""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from .automaton import (
    Answer,
    BitSource,
    BitString,
    ProblemSpec,
    answer_from_outcome,
    iter_chunks,
    run_single_qubit,
)
from .errors import InvalidArgumentError
from .noise import NoiseModel, sample_angle_errors
from .quantum_core import (
    MAX_QUBITS,
    DenseRegisterState,
    MeasurementOutcome,
    ghz_bit_flip,
    ghz_encode_unitary,
    ghz_logical_init,
    ghz_phase_pulse,
    measure_all,
    measure_x,
)

PULSE_QUBIT = 0
MAX_GHZ_QUBITS = 11


@dataclass(frozen=True)
class TmrResult:
    outcomes: tuple[MeasurementOutcome, MeasurementOutcome, MeasurementOutcome]
    majority: int
    answer: Answer


@dataclass(frozen=True)
class GhzRunResult:
    decoded_bits: tuple[int, ...]
    majority_bit: int
    answer: Answer


def majority(bits: Sequence[int]) -> int:
    if len(bits) % 2 == 0:
        raise InvalidArgumentError("majority vote needs an odd number of bits")
    return 1 if 2 * sum(bits) > len(bits) else 0


def _materialize(s: BitSource) -> BitSource:
    # one-shot iterators cannot feed three branches
    if isinstance(s, Iterator):
        return [np.asarray(c, dtype=np.uint8) for c in s]
    return s


def run_tmr(
    s: BitSource,
    spec: ProblemSpec,
    noise: NoiseModel,
    rng: np.random.Generator | Sequence[np.random.Generator],
) -> TmrResult:
    """Three independent qubits on the same string, then a majority vote.

    ``rng`` is either one generator used for the branches in turn or one
    generator per branch.
    """
    rngs = [rng] * 3 if isinstance(rng, np.random.Generator) else list(rng)
    if len(rngs) != 3:
        raise InvalidArgumentError("run_tmr needs one generator or exactly three")
    s = _materialize(s)
    outcomes = tuple(measure_x(run_single_qubit(s, spec, noise, r), r) for r in rngs)
    vote = majority([m.x for m in outcomes])
    return TmrResult(outcomes, vote, answer_from_outcome(MeasurementOutcome(vote), spec))


def tmr_failure_prob(p: float) -> float:
    """Chance that at least two of three independent qubits err."""
    if not 0.0 <= p <= 1.0:
        raise InvalidArgumentError(f"p must be in [0, 1], got {p}")
    return 3.0 * p * p - 2.0 * p ** 3


def _check_nq(n_q: int) -> None:
    if not 1 <= n_q <= MAX_GHZ_QUBITS:
        raise InvalidArgumentError(f"n_q must be in [1, {MAX_GHZ_QUBITS}], got {n_q}")
    if n_q % 2 == 0:
        raise InvalidArgumentError(f"n_q must be odd so the vote cannot tie, got {n_q}")


def evolve_ghz(
    s: BitSource, spec: ProblemSpec, n_q: int, noise: NoiseModel, rng: np.random.Generator
) -> DenseRegisterState:
    """Encoded register after the whole string, before decoding.

    Per '1': phase pulse ``pi/n`` plus gate error on qubit 0, then each qubit
    flips with probability ``p_flip``. Draw order per input chunk: the chunk's
    angle errors, then (only if ``p_flip > 0``) a ``(pulses, n_q)`` block of
    uniforms deciding the flips.

    Phase pulses commute with each other, so runs of pulses between flip
    events are merged into a single pulse.
    """
    state = ghz_logical_init(n_q)
    m = spec.modulus
    steps = 0  # pending whole steps, reduced mod 2n
    extra = 0.0  # pending gate error
    for chunk in iter_chunks(s):
        c = int(chunk.sum(dtype=np.int64))
        if not c:
            continue
        eps = sample_angle_errors(noise, rng, c)
        if noise.p_flip > 0.0:
            flips = rng.random((c, n_q)) < noise.p_flip
            rows = np.flatnonzero(flips.any(axis=1))
        else:
            flips = None
            rows = np.empty(0, dtype=np.intp)
        csum = np.cumsum(eps)
        start = 0
        done = 0.0
        for j in rows.tolist():
            steps = (steps + (j + 1 - start)) % m
            extra += float(csum[j]) - done
            done = float(csum[j])
            state = ghz_phase_pulse(state, steps * spec.step + extra, PULSE_QUBIT)
            steps, extra = 0, 0.0
            for q in np.flatnonzero(flips[j]).tolist():
                state = ghz_bit_flip(state, q)
            start = j + 1
        steps = (steps + (c - start)) % m
        extra += float(csum[-1]) - done
    if steps or extra:
        state = ghz_phase_pulse(state, steps * spec.step + extra, PULSE_QUBIT)
    return state


def run_ghz(
    s: BitSource, spec: ProblemSpec, n_q: int, noise: NoiseModel, rng: np.random.Generator
) -> GhzRunResult:
    """Encoded run, decode with the inverse encoder, measure, majority-vote.

    Decoded all-zeros means remainder 0, so majority 0 excludes ``n`` and
    majority 1 excludes ``0``.
    """
    _check_nq(n_q)
    state = evolve_ghz(s, spec, n_q, noise, rng)
    bits = measure_all(ghz_encode_unitary(state, inverse=True), rng)
    vote = majority(bits)
    return GhzRunResult(bits, vote, Answer(spec.n if vote == 0 else 0, spec.n))


def ghz_switch_coupling(n: int, tau: float, h: float = 1.0, n_q: int | None = None) -> float:
    """Coupling ``h/(4 n tau)`` for one encoded step. ``n_q`` is accepted and ignored:
    the pulse acts on one qubit whatever the register size."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if not tau > 0 or not math.isfinite(tau):
        raise InvalidArgumentError(f"tau must be > 0, got {tau}")
    if n_q is not None and not 1 <= n_q <= MAX_QUBITS:
        raise InvalidArgumentError(f"n_q must be in [1, {MAX_QUBITS}]")
    return h / (4.0 * n * tau)
