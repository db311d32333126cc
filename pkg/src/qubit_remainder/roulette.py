"""The roulette scenario: a public random string drives a 2n-position pointer.

Bets are only accepted on 0 and n, and a bet loses when the pointer stops on
it. The player runs one of the counting schemes on the string and bets on the
value the machine excludes.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import rng as rngmod
from .automaton import Answer, BitString, ProblemSpec, answer_from_outcome, run_single_qubit, true_remainder
from .correction import _check_nq, run_ghz, run_tmr
from .errors import InvalidArgumentError
from .montecarlo import GHZ, SINGLE_QUBIT, TMR, wilson_interval, single_qubit_error_prob, scheme_error_prob, TrialConfig
from .noise import NoiseModel
from .quantum_core import measure_x

COIN = "coin"
PLAYER_SCHEMES = (SINGLE_QUBIT, TMR, GHZ, COIN)


@dataclass(frozen=True)
class GameSpec:
    n: int
    N: int
    p_one: float = 0.5
    seed: int = 0

    def __post_init__(self) -> None:
        ProblemSpec(self.n, self.N)
        if not 0.0 <= self.p_one <= 1.0:
            raise InvalidArgumentError(f"p_one must be in [0, 1], got {self.p_one}")

    @property
    def problem(self) -> ProblemSpec:
        return ProblemSpec(self.n, self.N)


@dataclass(frozen=True)
class GameResult:
    pointer: int
    bet: int
    won: bool
    critical: bool
    hamming_weight: int = 0

    def __post_init__(self) -> None:
        if self.won != (self.pointer != self.bet):
            raise InvalidArgumentError("won must equal pointer != bet")


def settle(pointer: int, bet: int, spec: GameSpec) -> GameResult:
    if bet not in (0, spec.n):
        raise InvalidArgumentError(f"bets are only taken on 0 and {spec.n}")
    return GameResult(pointer, bet, pointer != bet, pointer in (0, spec.n))


def generate_string(spec: GameSpec, rng: np.random.Generator) -> BitString:
    """``N`` i.i.d. Bernoulli(``p_one``) characters; one uniform per character."""
    return BitString((rng.random(spec.N) < spec.p_one).astype(np.uint8))


def resolve_pointer(s: BitString, spec: GameSpec) -> int:
    return true_remainder(s, spec.problem)


def choose_bet(
    s: BitString,
    spec: GameSpec,
    noise: NoiseModel,
    scheme: str,
    rng: np.random.Generator | list[np.random.Generator],
    n_q: int = 3,
) -> Answer:
    """Run the player's machine on ``s``. ``coin`` is a control player betting at random."""
    problem = spec.problem
    if scheme == SINGLE_QUBIT:
        return answer_from_outcome(measure_x(run_single_qubit(s, problem, noise, rng), rng), problem)
    if scheme == TMR:
        return run_tmr(s, problem, noise, rng).answer
    if scheme == GHZ:
        return run_ghz(s, problem, n_q, noise, rng).answer
    if scheme == COIN:
        return Answer(spec.n if rng.random() < 0.5 else 0, spec.n)
    raise InvalidArgumentError(f"scheme must be one of {PLAYER_SCHEMES}, got {scheme!r}")


def play(
    spec: GameSpec,
    noise: NoiseModel,
    scheme: str,
    rng: np.random.Generator,
    n_q: int = 3,
) -> GameResult:
    """One game drawn entirely from ``rng``: string first, then the player's run."""
    s = generate_string(spec, rng)
    bet = choose_bet(s, spec, noise, scheme, rng, n_q).value
    result = settle(resolve_pointer(s, spec), bet, spec)
    return GameResult(result.pointer, result.bet, result.won, result.critical, s.hamming_weight)


def play_game(spec: GameSpec, noise: NoiseModel, scheme: str, index: int, n_q: int = 3) -> GameResult:
    """Game ``index`` of a batch, on substreams of ``spec.seed``."""
    s = generate_string(spec, rngmod.substream(spec.seed, index, rngmod.STRING))
    if scheme == TMR:
        r = [rngmod.substream(spec.seed, index, rngmod.QUBIT + b) for b in range(3)]
    elif scheme == COIN:
        r = rngmod.substream(spec.seed, index, rngmod.BET)
    else:
        r = rngmod.substream(spec.seed, index, rngmod.QUBIT)
    bet = choose_bet(s, spec, noise, scheme, r, n_q).value
    result = settle(resolve_pointer(s, spec), bet, spec)
    return GameResult(result.pointer, result.bet, result.won, result.critical, s.hamming_weight)


@dataclass(frozen=True)
class RouletteStats:
    """Batch summary. Rates carry 95% Wilson intervals.

    ``predicted_conditional_loss`` averages the closed-form single-game error
    probability over the critical games that occurred.
    """

    games: int
    wins: int
    win_rate: float
    win_ci_low: float
    win_ci_high: float
    critical: int
    critical_losses: int
    conditional_loss_rate: float
    conditional_ci_low: float
    conditional_ci_high: float
    predicted_conditional_loss: float | None
    critical_fraction: float
    loss_rate: float

    def as_dict(self) -> dict:
        return asdict(self)


def win_rate(
    spec: GameSpec,
    noise: NoiseModel,
    scheme: str,
    trials: int,
    master_seed: int | None = None,
    n_q: int = 3,
) -> RouletteStats:
    """Play ``trials`` independent games. ``master_seed`` overrides ``spec.seed``."""
    if trials < 1:
        raise InvalidArgumentError("trials must be >= 1")
    if scheme not in PLAYER_SCHEMES:
        raise InvalidArgumentError(f"scheme must be one of {PLAYER_SCHEMES}, got {scheme!r}")
    if scheme == GHZ:
        _check_nq(n_q)
    if master_seed is not None:
        spec = GameSpec(spec.n, spec.N, spec.p_one, master_seed)
    results = [play_game(spec, noise, scheme, i, n_q) for i in range(trials)]
    wins = sum(r.won for r in results)
    critical = [r for r in results if r.critical]
    losses = sum(not r.won for r in critical)
    lo, hi = wilson_interval(wins, trials)
    if critical:
        c_rate = losses / len(critical)
        c_lo, c_hi = wilson_interval(losses, len(critical))
    else:
        c_rate, c_lo, c_hi = 0.0, 0.0, 1.0
    return RouletteStats(
        games=trials,
        wins=wins,
        win_rate=wins / trials,
        win_ci_low=lo,
        win_ci_high=hi,
        critical=len(critical),
        critical_losses=losses,
        conditional_loss_rate=c_rate,
        conditional_ci_low=c_lo,
        conditional_ci_high=c_hi,
        predicted_conditional_loss=_predicted(spec, noise, scheme, critical, n_q),
        critical_fraction=len(critical) / trials,
        loss_rate=(trials - wins) / trials,
    )


def _predicted(spec, noise, scheme, critical, n_q) -> float | None:
    if not critical:
        return None
    if scheme == COIN:
        return 0.5
    cfg = TrialConfig(spec.problem, noise, scheme=scheme, trials=1, conditioning="unconditioned", n_q=n_q)
    total = 0.0
    for r in critical:
        p = scheme_error_prob(cfg, r.hamming_weight)
        if p is None:
            return None
        total += p
    return total / len(critical)
