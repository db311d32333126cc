"""Monte Carlo estimation of wrong-answer rates.

Trial ``i`` of a run draws everything from substreams of
``(master_seed, *prefix, i, role)``; see :mod:`qubit_remainder.rng`. Trials
are evaluated in fixed blocks and concatenated in trial order, so results do
not depend on how many worker processes were used.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from statistics import NormalDist

import numpy as np

from . import rng as rngmod
from .automaton import ProblemSpec, answer_from_outcome, trace_single_qubit
from .correction import run_ghz, run_tmr, tmr_failure_prob, _check_nq
from .errors import InvalidArgumentError
from .noise import NoiseModel, predicted_error_prob
from .quantum_core import measure_x

SINGLE_QUBIT = "single-qubit"
TMR = "tmr"
GHZ = "ghz"
SCHEMES = (SINGLE_QUBIT, TMR, GHZ)

REMAINDER_0 = "remainder-0"
REMAINDER_N = "remainder-n"
UNCONDITIONED = "unconditioned"
CONDITIONINGS = (REMAINDER_0, REMAINDER_N, UNCONDITIONED)

SWEEP_AXES = ("phi0", "N", "n", "p_flip", "n_q")

BLOCK = 1024
_Z95 = NormalDist().inv_cdf(0.975)


@dataclass(frozen=True)
class TrialConfig:
    """One Monte Carlo experiment.

    ``n1`` fixes the Hamming weight of conditioned strings; when ``None`` the
    weight closest to ``N/2`` with the required remainder is used.
    ``p_one`` is the per-character probability in unconditioned mode.
    """

    spec: ProblemSpec
    noise: NoiseModel
    scheme: str = SINGLE_QUBIT
    trials: int = 1000
    master_seed: int = 0
    conditioning: str = REMAINDER_0
    n1: int | None = None
    n_q: int = 3
    p_one: float = 0.5

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            raise InvalidArgumentError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.conditioning not in CONDITIONINGS:
            raise InvalidArgumentError(f"conditioning must be one of {CONDITIONINGS}")
        if self.trials < 1:
            raise InvalidArgumentError("trials must be >= 1")
        if not 0 <= self.master_seed < 2**64:
            raise InvalidArgumentError("master_seed must be a 64-bit unsigned integer")
        if not 0.0 <= self.p_one <= 1.0:
            raise InvalidArgumentError("p_one must be in [0, 1]")
        if self.scheme == GHZ:
            _check_nq(self.n_q)
        if self.conditioning != UNCONDITIONED:
            n1 = self.hamming_weight
            if not 0 <= n1 <= self.spec.N:
                raise InvalidArgumentError(f"n1={n1} does not fit in N={self.spec.N}")
            if n1 % self.spec.modulus != self.target_remainder:
                raise InvalidArgumentError(
                    f"n1={n1} has remainder {n1 % self.spec.modulus}, "
                    f"conditioning needs {self.target_remainder}"
                )

    @property
    def target_remainder(self) -> int:
        return 0 if self.conditioning == REMAINDER_0 else self.spec.n

    @property
    def hamming_weight(self) -> int:
        if self.n1 is not None:
            return self.n1
        return default_hamming_weight(self.spec, self.target_remainder)


def default_hamming_weight(spec: ProblemSpec, remainder: int) -> int:
    """Weight nearest ``N/2`` that leaves ``remainder`` modulo ``2n``."""
    m = spec.modulus
    j = round((spec.N / 2 - remainder) / m)
    n1 = remainder + m * j
    while n1 > spec.N:
        n1 -= m
    while n1 < 0:
        n1 += m
    if n1 > spec.N:
        raise InvalidArgumentError(f"no weight <= N={spec.N} leaves remainder {remainder}")
    return n1


@dataclass(frozen=True)
class TrialStats:
    trials: int
    wrong: int
    p_hat: float
    ci_low: float
    ci_high: float
    predicted: float | None
    critical: int

    def as_dict(self) -> dict:
        return asdict(self)

    def sigma(self) -> float:
        """Binomial standard error at the predicted rate."""
        if self.predicted is None:
            raise ValueError("no prediction available")
        return math.sqrt(self.predicted * (1.0 - self.predicted) / self.trials)

    def z_score(self) -> float:
        s = self.sigma()
        if s == 0.0:
            return 0.0 if self.p_hat == self.predicted else math.inf
        return (self.p_hat - self.predicted) / s


def wilson_interval(wrong: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion (95% by default)."""
    if trials < 1:
        raise InvalidArgumentError("trials must be >= 1")
    if not 0 <= wrong <= trials:
        raise InvalidArgumentError(f"need 0 <= wrong <= trials, got {wrong}/{trials}")
    p = wrong / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2 * trials)) / denom
    half = z / denom * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials))
    low = 0.0 if wrong == 0 else min(max(0.0, center - half), p)
    high = 1.0 if wrong == trials else max(min(1.0, center + half), p)
    return low, high


# --------------------------------------------------------------------------
# single trials


def make_string(cfg: TrialConfig, rng: np.random.Generator) -> np.ndarray:
    """Input string for one trial as a uint8 array.

    Conditioned strings have exactly ``cfg.hamming_weight`` ones at uniformly
    random positions; unconditioned ones are i.i.d. Bernoulli(``p_one``).
    """
    N = cfg.spec.N
    if cfg.conditioning == UNCONDITIONED:
        return (rng.random(N) < cfg.p_one).astype(np.uint8)
    bits = np.zeros(N, dtype=np.uint8)
    bits[rng.choice(N, size=cfg.hamming_weight, replace=False)] = 1
    return bits


def run_trial(cfg: TrialConfig, index: int, prefix: tuple[int, ...] = ()) -> tuple[int, int, int]:
    """Run trial ``index``; returns ``(wrong, critical, hamming_weight)``."""
    seed = cfg.master_seed
    bits = make_string(cfg, rngmod.substream(seed, *prefix, index, rngmod.STRING))
    source = [bits]
    n1 = int(bits.sum(dtype=np.int64))
    remainder = n1 % cfg.spec.modulus
    if cfg.scheme == SINGLE_QUBIT:
        r = rngmod.substream(seed, *prefix, index, rngmod.QUBIT)
        run = trace_single_qubit(source, cfg.spec, cfg.noise, r)
        answer = answer_from_outcome(measure_x(run.state, r), cfg.spec)
    elif cfg.scheme == TMR:
        branches = [rngmod.substream(seed, *prefix, index, rngmod.QUBIT + b) for b in range(3)]
        answer = run_tmr(source, cfg.spec, cfg.noise, branches).answer
    else:
        r = rngmod.substream(seed, *prefix, index, rngmod.QUBIT)
        answer = run_ghz(source, cfg.spec, cfg.n_q, cfg.noise, r).answer
    critical = cfg.spec.is_critical(remainder)
    wrong = critical and answer.value == remainder
    return int(wrong), int(critical), n1


def _run_block(args: tuple[TrialConfig, tuple[int, ...], int, int]) -> np.ndarray:
    cfg, prefix, start, stop = args
    return np.array([run_trial(cfg, i, prefix) for i in range(start, stop)], dtype=np.int64).reshape(-1, 3)


def run_trials(cfg: TrialConfig, prefix: tuple[int, ...] = (), workers: int = 1) -> np.ndarray:
    """Per-trial ``(wrong, critical, hamming_weight)`` rows in trial order."""
    jobs = [(cfg, prefix, s, min(s + BLOCK, cfg.trials)) for s in range(0, cfg.trials, BLOCK)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_block, jobs))
    else:
        parts = [_run_block(j) for j in jobs]
    return np.concatenate(parts, axis=0)


# --------------------------------------------------------------------------
# estimates


def single_qubit_error_prob(noise: NoiseModel, n1: int) -> float:
    """Wrong-outcome probability of one qubit in a critical case with weight ``n1``."""
    return predicted_error_prob(n1 * noise.phi0 ** 2, n1 * noise.bias)


def scheme_error_prob(cfg: TrialConfig, n1: int) -> float | None:
    p = single_qubit_error_prob(cfg.noise, n1)
    if cfg.scheme == TMR:
        return tmr_failure_prob(p)
    if cfg.scheme == GHZ and cfg.noise.p_flip > 0.0:
        return None
    return p


def predicted_rate(cfg: TrialConfig, rows: np.ndarray | None = None) -> float | None:
    """Prediction matching ``cfg``: closed form for conditioned runs, otherwise
    the average over the trials actually drawn (non-critical trials count 0)."""
    if cfg.conditioning != UNCONDITIONED:
        return scheme_error_prob(cfg, cfg.hamming_weight)
    if rows is None:
        return None
    total = 0.0
    for n1 in rows[rows[:, 1] == 1, 2].tolist():
        p = scheme_error_prob(cfg, n1)
        if p is None:
            return None
        total += p
    return total / len(rows)


def stats_from_rows(cfg: TrialConfig, rows: np.ndarray) -> TrialStats:
    trials = len(rows)
    wrong = int(rows[:, 0].sum())
    low, high = wilson_interval(wrong, trials)
    return TrialStats(
        trials=trials,
        wrong=wrong,
        p_hat=wrong / trials,
        ci_low=low,
        ci_high=high,
        predicted=predicted_rate(cfg, rows),
        critical=int(rows[:, 1].sum()),
    )


def estimate_error_rate(cfg: TrialConfig, workers: int = 1, prefix: tuple[int, ...] = ()) -> TrialStats:
    """Fraction of trials where the machine excluded the true remainder."""
    return stats_from_rows(cfg, run_trials(cfg, prefix, workers))


def hilbert_deviations(cfg: TrialConfig) -> np.ndarray:
    """Accumulated Hilbert-angle error of the single-qubit run, one value per trial.

    Uses the same strings and qubit substreams as :func:`estimate_error_rate`.
    """
    out = np.empty(cfg.trials)
    for i in range(cfg.trials):
        bits = make_string(cfg, rngmod.substream(cfg.master_seed, i, rngmod.STRING))
        r = rngmod.substream(cfg.master_seed, i, rngmod.QUBIT)
        out[i] = trace_single_qubit([bits], cfg.spec, cfg.noise, r).hilbert_deviation
    return out


# --------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepPoint:
    axis: str
    value: float
    stats: TrialStats | None
    error: str | None = None


def config_for_axis(base: TrialConfig, axis: str, value) -> TrialConfig:
    if axis == "phi0":
        return replace(base, noise=replace(base.noise, phi0=float(value)))
    if axis == "p_flip":
        return replace(base, noise=replace(base.noise, p_flip=float(value)))
    if axis == "N":
        return replace(base, spec=ProblemSpec(base.spec.n, _as_int(value)), n1=None)
    if axis == "n":
        return replace(base, spec=ProblemSpec(_as_int(value), base.spec.N))
    if axis == "n_q":
        return replace(base, n_q=_as_int(value))
    raise InvalidArgumentError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")


def _as_int(value) -> int:
    if float(value) != int(float(value)):
        raise InvalidArgumentError(f"expected an integer, got {value}")
    return int(float(value))


def sweep(
    base: TrialConfig, axis: str, values: Sequence, workers: int = 1
) -> list[SweepPoint]:
    """One estimate per value, in input order. Point ``i`` uses substream prefix ``(i,)``.

    A value that makes an invalid configuration yields a point with ``error``
    set instead of aborting the sweep.
    """
    if axis not in SWEEP_AXES:
        raise InvalidArgumentError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")
    if len(values) == 0:
        raise InvalidArgumentError("sweep needs at least one value")
    points = []
    for i, value in enumerate(values):
        try:
            cfg = config_for_axis(base, axis, value)
            stats = estimate_error_rate(cfg, workers=workers, prefix=(i,))
        except (InvalidArgumentError, ValueError) as exc:
            points.append(SweepPoint(axis, value, None, str(exc)))
            continue
        points.append(SweepPoint(axis, value, stats))
    return points
