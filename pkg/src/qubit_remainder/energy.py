"""Time/energy bookkeeping for the counting schemes.

Pure arithmetic on the orthogonal-switch speed limit ``t >= h/(4 dE)`` and
the reduced coupling ``h/(4 n tau)`` needed for a rotation of ``pi/n``.
Nothing here looks at simulated states.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import InvalidArgumentError

PLANCK_SI = 6.62607015e-34

CLASSICAL_BITS = "classical-bits"
SINGLE_QUBIT = "single-qubit"
GHZ = "ghz"
CLASSICAL_ROTATOR = "classical-rotator"
SCHEMES = (CLASSICAL_BITS, SINGLE_QUBIT, GHZ, CLASSICAL_ROTATOR)


def _positive(name: str, value: float) -> None:
    if not (value > 0 and math.isfinite(value)):
        raise InvalidArgumentError(f"{name} must be positive and finite, got {value}")


def _spin(S: float) -> None:
    if not S >= 0.5:
        raise InvalidArgumentError(f"spin S must be >= 1/2, got {S}")


@dataclass(frozen=True)
class EnergyLedger:
    scheme: str
    delta_e: float
    tau: float
    pulse_count: int = 0
    h: float = 1.0

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            raise InvalidArgumentError(f"unknown scheme {self.scheme!r}")
        _positive("h", self.h)
        _positive("tau", self.tau)
        if self.delta_e < 0:
            raise InvalidArgumentError("delta_e must be >= 0")
        if self.pulse_count < 0:
            raise InvalidArgumentError("pulse_count must be >= 0")


def classical_min_total_time(N: int, delta_e: float, h: float = 1.0) -> float:
    """Lower bound ``N h / (4 dE)`` when every character needs an orthogonal switch."""
    _positive("delta_e", delta_e)
    return N * h / (4.0 * delta_e)


def qubit_pulse_coupling(n: int, tau: float, h: float = 1.0) -> float:
    """Coupling needed to rotate by ``pi/n`` within ``tau``."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    _positive("tau", tau)
    return h / (4.0 * n * tau)


def quantum_speedup_factor(n: int) -> int:
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    return n


def rotator_time_factor(S: float) -> float:
    _spin(S)
    return 2.0 * S


@dataclass(frozen=True)
class LedgerRow:
    scheme: str
    delta_e: float
    pulse_time: float
    total_time: float
    ratio_vs_classical: float
    slowdown_vs_qubit: float

    def as_dict(self) -> dict:
        return asdict(self)


def ledger_report(
    n: int,
    N: int,
    tau: float,
    h: float = 1.0,
    S: float = 0.5,
    measurement_cost: float = 0.0,
) -> list[LedgerRow]:
    """Compare all schemes at the coupling the qubit needs for per-character time ``tau``.

    Every scheme is charged the same ``dE``; times follow from it.
    ``ratio_vs_classical`` is the classical bound divided by the scheme's total
    time. ``measurement_cost`` is a flat time added once to every scheme.
    Characters '0' are charged the same interval as '1'.
    """
    if N < 1:
        raise InvalidArgumentError(f"N must be >= 1, got {N}")
    _positive("h", h)
    if measurement_cost < 0:
        raise InvalidArgumentError("measurement_cost must be >= 0")
    de = qubit_pulse_coupling(n, tau, h)
    classical_total = classical_min_total_time(N, de, h)
    classical_pulse = classical_total / N
    factor = rotator_time_factor(S)
    pulse_times = {
        CLASSICAL_BITS: classical_pulse,
        SINGLE_QUBIT: tau,
        GHZ: h / (4.0 * n * de),
        CLASSICAL_ROTATOR: factor * tau,
    }
    rows = []
    for scheme in SCHEMES:
        pulse = pulse_times[scheme]
        total = N * pulse + measurement_cost
        rows.append(
            LedgerRow(
                scheme=scheme,
                delta_e=de,
                pulse_time=pulse,
                total_time=total,
                ratio_vs_classical=(classical_total + measurement_cost) / total,
                slowdown_vs_qubit=pulse / tau,
            )
        )
    return rows
