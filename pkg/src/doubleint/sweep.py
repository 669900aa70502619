"""Frequency-sweep identification: drive, fit, assemble Bode curves.

For each grid frequency the observer is driven with A_m sin(2 pi f t), each
requested output channel is fitted with a single sinusoid at the drive
frequency by least squares, and the fitted amplitude/phase become one Bode
row.  Frequencies are independent work items and may be computed in
parallel; output order is always by frequency.
"""

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import analytic
from .errors import ConfigError, DivergedState, IllConditioned, InvalidParams
from .observers import ObserverParams, ObserverState, validate_params
from .signals import SignalSpec
from .solver import SimConfig, simulate

TWO_PI = 2.0 * math.pi

INIT_KINDS = ("zero", "steady_state")


def default_grid() -> tuple[float, ...]:
    """Frequency grid 0.1, 0.6, 1.1, ... Hz: step 0.5, last value <= 100."""
    return tuple(0.1 + 0.5 * i for i in range(200))


@dataclass(frozen=True)
class SweepConfig:
    """Sweep settings; defaults reproduce the standard grid and horizons."""

    freqs_hz: tuple[float, ...] = field(default_factory=default_grid)
    amplitude: float = 1.0
    step_h: float = 0.001
    samples: int = 50000
    discard_fraction: float = 0.0
    channels: tuple[int, ...] = (1, 2, 3)
    method: str = "rk4"
    init_state: str = "zero"

    def to_dict(self) -> dict:
        return {
            "freqs_hz": list(self.freqs_hz),
            "amplitude": self.amplitude,
            "step_h": self.step_h,
            "samples": self.samples,
            "discard_fraction": self.discard_fraction,
            "channels": list(self.channels),
            "method": self.method,
            "init_state": self.init_state,
        }


@dataclass(frozen=True)
class SinusoidFit:
    """Least-squares fit y(t) ~ c1 sin(omega t) + c2 cos(omega t)."""

    c1: float
    c2: float
    amplitude: float
    phase: float
    residual_rms: float


def fit_sinusoid(times: np.ndarray, values: np.ndarray, omega: float) -> SinusoidFit:
    """Fit a single sinusoid at a known angular rate.

    Solves the 2x2 normal equations in closed form; amplitude is
    sqrt(c1^2 + c2^2) and the phase is the quadrant-correct arctangent of
    (c2, c1).  Raises IllConditioned when the normal matrix has condition
    number above 1e8 (degenerate time span) or fewer than 2 samples.
    """
    if omega <= 0.0:
        raise ConfigError("omega must be positive")
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    if t.size < 2 or t.size != y.size:
        raise IllConditioned("need at least 2 samples with matching times")
    s = np.sin(omega * t)
    c = np.cos(omega * t)
    ss = float(s @ s)
    cc = float(c @ c)
    sc = float(s @ c)
    # eigenvalues of the symmetric 2x2 normal matrix give its condition number
    mean = 0.5 * (ss + cc)
    half_gap = math.hypot(0.5 * (ss - cc), sc)
    lo_eig = mean - half_gap
    hi_eig = mean + half_gap
    if lo_eig <= 0.0 or hi_eig / lo_eig > 1e8:
        raise IllConditioned(
            f"normal matrix condition {math.inf if lo_eig <= 0 else hi_eig / lo_eig:.3g} "
            "exceeds 1e8"
        )
    det = ss * cc - sc * sc
    sy = float(s @ y)
    cy = float(c @ y)
    c1 = (cc * sy - sc * cy) / det
    c2 = (ss * cy - sc * sy) / det
    resid = y - c1 * s - c2 * c
    return SinusoidFit(
        c1,
        c2,
        math.hypot(c1, c2),
        math.atan2(c2, c1),
        math.sqrt(float(np.mean(resid**2))),
    )


@dataclass(frozen=True)
class BodeRow:
    f_hz: float
    omega: float
    channel: int
    magnitude_db: float
    phase_rad: float
    phase_unwrapped_rad: float | None
    residual_rms: float | None
    source: str
    flag: str


@dataclass(frozen=True)
class BodeCurve:
    """Bode rows sorted by (frequency, channel) plus reproducibility metadata."""

    rows: tuple[BodeRow, ...]
    params: dict
    config: dict
    source: str = "sweep"

    def channel_rows(self, channel: int) -> list[BodeRow]:
        return [r for r in self.rows if r.channel == channel]

    def channel_arrays(self, channel: int):
        """(f_hz, magnitude_db, phase, phase_unwrapped) arrays for one channel."""
        rows = self.channel_rows(channel)
        get = lambda attr: np.array(
            [math.nan if getattr(r, attr) is None else getattr(r, attr) for r in rows]
        )
        return (np.array([r.f_hz for r in rows]), get("magnitude_db"),
                get("phase_rad"), get("phase_unwrapped_rad"))

    @property
    def flagged_fraction(self) -> float:
        if not self.rows:
            return 0.0
        return sum(r.flag != "ok" for r in self.rows) / len(self.rows)


def _check_sweep_config(p: ObserverParams, cfg: SweepConfig) -> None:
    freqs = cfg.freqs_hz
    if not freqs:
        raise ConfigError("frequency grid is empty")
    if any(f <= 0.0 for f in freqs) or any(b <= a for a, b in zip(freqs, freqs[1:])):
        raise ConfigError("frequencies must be strictly increasing and positive")
    if cfg.samples < 1:
        raise ConfigError("samples must be a positive integer")
    if not 0.0 <= cfg.discard_fraction < 1.0:
        raise ConfigError("discard_fraction must lie in [0, 1)")
    if any(ch not in (1, 2, 3) for ch in cfg.channels) or not cfg.channels:
        raise ConfigError("channels must be a non-empty subset of {1, 2, 3}")
    if cfg.init_state not in INIT_KINDS:
        raise ConfigError(f"init_state must be one of {INIT_KINDS}")
    if cfg.init_state == "steady_state" and p.mode != "linear" and p.alpha3 != 1.0:
        raise ConfigError("steady_state init needs a linear observer (or alpha3=1)")
    span = cfg.samples * cfg.step_h
    period = 1.0 / freqs[0]
    if span < period:
        warnings.warn(
            f"run length {span:g} s is shorter than one period ({period:g} s) "
            f"of the lowest frequency",
            stacklevel=2,
        )


def _initial_state(p: ObserverParams, cfg: SweepConfig, omega: float) -> ObserverState:
    if cfg.init_state == "zero":
        return ObserverState(0.0, 0.0, 0.0)
    # exact forced steady state of the linear dynamics at the drive frequency;
    # the input A_m sin(omega t) is the imaginary part of A_m e^(i omega t)
    p_lin = p if p.mode == "linear" else replace_mode_linear(p)
    return ObserverState(
        *(cfg.amplitude * analytic.transfer_eval(p_lin, j, omega).value.imag for j in (1, 2, 3))
    )


def replace_mode_linear(p: ObserverParams) -> ObserverParams:
    return ObserverParams(p.k1, p.k2, p.k3, p.epsilon, 1.0, "linear")


def _run_frequency(p: ObserverParams, cfg: SweepConfig, f_hz: float) -> list[BodeRow]:
    omega = TWO_PI * f_hz
    spec = SignalSpec("sinusoid", cfg.amplitude, omega)
    sim_cfg = SimConfig(
        step_h=cfg.step_h,
        duration=cfg.samples * cfg.step_h,
        initial_state=_initial_state(p, cfg, omega),
        method=cfg.method,
        record_stride=1,
    )
    rows = []
    try:
        traj = simulate(p, spec, sim_cfg)
    except DivergedState:
        return [
            BodeRow(f_hz, omega, ch, math.nan, math.nan, None, None, "sweep", "diverged")
            for ch in cfg.channels
        ]
    lo = int(traj.times.size * cfg.discard_fraction)
    t_fit = traj.times[lo:]
    for ch in cfg.channels:
        try:
            fit = fit_sinusoid(t_fit, traj.states[lo:, ch - 1], omega)
        except IllConditioned:
            rows.append(
                BodeRow(f_hz, omega, ch, math.nan, math.nan, None, None, "sweep",
                        "ill_conditioned")
            )
            continue
        mag_db = (
            20.0 * math.log10(fit.amplitude / cfg.amplitude)
            if fit.amplitude > 0.0
            else -math.inf
        )
        rows.append(
            BodeRow(f_hz, omega, ch, mag_db, fit.phase, None, fit.residual_rms, "sweep", "ok")
        )
    return rows


def sweep_observer(p: ObserverParams, cfg: SweepConfig, workers: int = 1) -> BodeCurve:
    """Run the sweep over the whole grid and assemble the Bode curve.

    Divergence or an ill-conditioned fit at one frequency flags that row and
    the sweep continues.  With workers > 1 the frequencies are distributed
    over a process pool; results are identical to the sequential run.
    """
    report = validate_params(p)
    if not report.ok:
        raise InvalidParams(report)
    _check_sweep_config(p, cfg)
    if workers > 1 and len(cfg.freqs_hz) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_freq = list(pool.map(_worker, [(p, cfg, f) for f in cfg.freqs_hz]))
    else:
        per_freq = [_run_frequency(p, cfg, f) for f in cfg.freqs_hz]
    rows = tuple(row for rows in per_freq for row in rows)
    return phase_unwrap(
        BodeCurve(rows, params_meta(p), cfg.to_dict(), "sweep")
    )


def _worker(args) -> list[BodeRow]:
    return _run_frequency(*args)


def params_meta(p: ObserverParams) -> dict:
    return {
        "k1": p.k1, "k2": p.k2, "k3": p.k3,
        "epsilon": p.epsilon, "R": 1.0 / p.epsilon,
        "alpha3": p.alpha3, "alpha2": p.alpha2, "alpha1": p.alpha1,
        "mode": p.mode,
    }


def phase_unwrap(curve: BodeCurve) -> BodeCurve:
    """Fill the unwrapped-phase column using the minimal-jump rule.

    Per channel, in frequency order, each phase is shifted by a multiple of
    2 pi so that consecutive valid values never jump by more than pi.  The
    raw phase column is preserved untouched; flagged rows stay NaN and do
    not break the chain.
    """
    unwrapped: dict[tuple[float, int], float] = {}
    for ch in sorted({r.channel for r in curve.rows}):
        prev = None
        offset = 0.0
        for row in curve.channel_rows(ch):
            ph = row.phase_rad
            if math.isnan(ph):
                continue
            if prev is not None:
                offset -= TWO_PI * round((ph + offset - prev) / TWO_PI)
            value = ph + offset
            unwrapped[(row.f_hz, ch)] = value
            prev = value
    rows = tuple(
        replace(r, phase_unwrapped_rad=unwrapped.get((r.f_hz, r.channel)))
        for r in curve.rows
    )
    return BodeCurve(rows, curve.params, curve.config, curve.source)


def bode_from_transfer(p: ObserverParams, cfg: SweepConfig) -> BodeCurve:
    """Exact Bode curve in the sweep schema (source=analytic) for diffing."""
    rows = []
    for f_hz in cfg.freqs_hz:
        omega = TWO_PI * f_hz
        for ch in cfg.channels:
            te = analytic.transfer_eval(p, ch, omega)
            rows.append(
                BodeRow(f_hz, omega, ch, te.gain_db, te.phase, None, None, "analytic", "ok")
            )
    return phase_unwrap(
        BodeCurve(tuple(rows), params_meta(p), cfg.to_dict(), "analytic")
    )
