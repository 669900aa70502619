"""Exact frequency-domain characterization of the linear observer.

The linear observer has channel transfer functions

    H_j(s) = s^(j-1) k3 / (s^3 eps^4 + s^2 k3 + s k2 eps^2 + k1 eps),   j = 1..3

whose eps -> 0 limits are the ideal responses s^(j-3): double integrator,
integrator, unity.  These closed forms are the oracle the sweep pipeline is
validated against.
"""

import cmath
import math
from dataclasses import dataclass

from .errors import CutoffNotFound, DomainError, SingularAtDC, SingularDenominator
from .observers import ObserverParams

CHANNELS = (1, 2, 3)


@dataclass(frozen=True)
class TransferEval:
    """One channel's exact response at a single frequency."""

    channel: int
    omega: float
    value: complex
    gain: float
    gain_db: float
    phase: float


def _denominator(p: ObserverParams, s: complex) -> complex:
    # Horner form keeps the evaluation stable when s^3 eps^4 dominates.
    return ((p.epsilon**4 * s + p.k3) * s + p.k2 * p.epsilon**2) * s + p.k1 * p.epsilon


def transfer_eval(p: ObserverParams, channel: int, omega: float) -> TransferEval:
    """Evaluate H_channel(i omega) for a linear-mode parameter set."""
    if p.mode != "linear":
        raise DomainError("transfer_eval requires linear-mode parameters")
    if channel not in CHANNELS:
        raise DomainError(f"channel must be one of {CHANNELS}, got {channel}")
    s = 1j * omega
    den = _denominator(p, s)
    if abs(den) < 1e-300:
        raise SingularDenominator(f"denominator vanished at omega={omega:g}")
    value = s ** (channel - 1) * p.k3 / den
    gain = abs(value)
    gain_db = 20.0 * math.log10(gain) if gain > 0.0 else -math.inf
    return TransferEval(channel, omega, value, gain, gain_db, cmath.phase(value))


def limit_transfer(channel: int, omega: float) -> complex:
    """Ideal response (i omega)^(channel-3): 1/s^2, 1/s or unity at s = i omega."""
    if channel not in CHANNELS:
        raise DomainError(f"channel must be one of {CHANNELS}, got {channel}")
    if channel == 3:
        return complex(1.0, 0.0)
    if omega == 0.0:
        raise SingularAtDC(f"ideal channel-{channel} response is unbounded at omega=0")
    return (1j * omega) ** (channel - 3)


def is_hurwitz_cubic(c2: float, c1: float, c0: float) -> bool:
    """Routh-Hurwitz test for the monic cubic s^3 + c2 s^2 + c1 s + c0.

    All coefficients must be strictly positive and c2*c1 > c0; marginal
    cases are rejected.
    """
    return c2 > 0.0 and c1 > 0.0 and c0 > 0.0 and c2 * c1 > c0


def cutoff_frequency(p: ObserverParams, channel: int, drop_db: float = 3.0,
                     bracket: tuple[float, float] = (1e-3, 1e5),
                     grid_points: int = 4000) -> float:
    """Bandwidth edge: largest omega where the channel stays within drop_db
    of the ideal integrator response.

    The reference level is |(i omega)^(channel-3)| rather than the channel's
    own peak: the slow resonance of the lightly damped pole pair dwarfs the
    useful passband, so a drop-from-peak rule would measure the resonance
    edge instead of the tracking bandwidth.  The crossing is located on a
    log-spaced grid and refined by bisection.

    Raises CutoffNotFound when no downward crossing lies inside the bracket.
    """
    if drop_db <= 0.0:
        raise DomainError("drop_db must be positive")
    thr = 10.0 ** (-drop_db / 20.0)

    def rel_gain(om: float) -> float:
        ideal = abs(limit_transfer(channel, om))
        return transfer_eval(p, channel, om).gain / ideal

    lo, hi = bracket
    if not 0.0 < lo < hi:
        raise DomainError("bracket must satisfy 0 < lo < hi")
    log_lo, log_hi = math.log10(lo), math.log10(hi)
    grid = [10.0 ** (log_lo + (log_hi - log_lo) * i / (grid_points - 1))
            for i in range(grid_points)]
    above = [rel_gain(om) >= thr for om in grid]
    if above[-1]:
        raise CutoffNotFound(f"gain still within {drop_db:g} dB at bracket end {hi:g} rad/s")
    last = None
    for i in range(grid_points - 1):
        if above[i] and not above[i + 1]:
            last = i
    if last is None:
        raise CutoffNotFound(f"gain never within {drop_db:g} dB of the ideal response in bracket")
    a, b = grid[last], grid[last + 1]
    for _ in range(100):
        mid = math.sqrt(a * b)
        if rel_gain(mid) >= thr:
            a = mid
        else:
            b = mid
    return math.sqrt(a * b)
