"""State transfer into a tunable-coupling phononic cavity.

Everything here works in the dimensionless time tau = kappa_e * t.  The
cavity master equation for an exponentially decaying input pulse of power
rate r (amplitude sqrt(r) e^{-r t / 2}) reads

    dA/dtau = -(4 cos^2(theta/2) + kappa_i/kappa_e) A / 2
              - 2 cos(theta/2) sqrt(r/kappa_e) e^{-(r/2kappa_e) tau},

where theta(tau) is the round-trip phase imposed on the cavity's rightward
output.  The closed-form optimal capture profile holds theta = 0 (maximum
coupling 4 kappa_e) until a critical time tau_c, then rolls off so the
outgoing leakage destructively interferes with the reflected input; its
asymptotic capture fidelity is the constant ``a1``.

:func:`simulate_with_delay` integrates the retarded version of the same
equation, where the mirror round trip takes a time delta_f, the mirror
phase clock may lag the input shifter by delta_m, and the cavity-detuning
clock by delta_c.  :func:`optimize_delays` grid-searches the two lags.

Integration is a fixed-step classical Runge-Kutta scheme; delayed values
come from a ring-buffer history with 4-point cubic interpolation and the
step is chosen commensurate with the delay so history lookups land on
stored nodes.  :func:`single_excitation_oracle` provides an independent
check of the transfer fidelity via a beam-splitter collision model in the
single-excitation sector.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (DomainError, InfeasibleCap, IntegrationError,
                     HistoryUnderrun, ProfileOutOfRange)

__all__ = [
    "MAX_COUPLING_RATIO",
    "ProfileConstants",
    "profile_constants",
    "critical_time",
    "optimal_coupling",
    "phase_from_coupling",
    "optimal_phase",
    "OptimalProfile",
    "SampledProfile",
    "optimal_profile",
    "discretize_profile",
    "TransferConfig",
    "TransferResult",
    "DelayScan",
    "simulate_transfer",
    "simulate_with_delay",
    "optimize_delays",
    "single_excitation_oracle",
]

TWO_PI = 2.0 * math.pi
#: peak output coupling of the loop in units of kappa_e (both ports in phase)
MAX_COUPLING_RATIO = 4.0
_DEFAULT_STEP = 0.002      # tau units
_MIN_STEP = 1e-7
_ARCCOS_SLACK = 1e-12


class ProfileConstants(NamedTuple):
    a1: float
    a2: float
    tau_c: float


def _check_ratio(ratio: float) -> float:
    ratio = float(ratio)
    if not 0.0 < ratio < 4.0:
        raise DomainError(f"r/kappa_e must lie in (0, 4), got {ratio}")
    return ratio


def profile_constants(ratio: float) -> ProfileConstants:
    """Constants (a1, a2, tau_c) of the optimal capture profile, kappa_i = 0.

    `ratio` is r/kappa_e; a1 is the ideal transfer fidelity and tau_c the
    critical switch time in units of 1/kappa_e.
    """
    rho = _check_ratio(ratio)
    q = 8.0 / (4.0 + rho)
    a1 = (16.0 * rho / (4.0 + rho) ** 2 * q ** (-8.0 / (4.0 - rho))
          + q ** (-2.0 * rho / (4.0 - rho)))
    tau_c = 2.0 / (4.0 - rho) * math.log(q)
    return ProfileConstants(a1=a1, a2=1.0, tau_c=tau_c)


def critical_time(ratio: float, kappa_e: float) -> float:
    """Critical switch time in seconds for a cavity with rate kappa_e (rad/s)."""
    if kappa_e <= 0.0:
        raise DomainError("kappa_e must be positive")
    return profile_constants(ratio).tau_c / kappa_e


def optimal_coupling(ratio: float, tau) -> np.ndarray | float:
    """Optimal output coupling kappa/kappa_e at dimensionless time tau.

    4 during the loading stage tau < tau_c, then the interference-matched
    roll-off; continuous across tau_c by construction.
    """
    rho = _check_ratio(ratio)
    a1, a2, tau_c = profile_constants(rho)
    tau_arr = np.asarray(tau, dtype=float)
    out = np.full(tau_arr.shape, MAX_COUPLING_RATIO)
    late = tau_arr > tau_c
    w = np.exp(-rho * tau_arr[late])
    out[late] = rho * w / (a1 - a2 * w)
    return float(out) if np.isscalar(tau) else out


def phase_from_coupling(kappa_ratio) -> np.ndarray | float:
    """Round-trip phase realizing a coupling kappa/kappa_e in [0, 4].

    theta = arccos(kappa_ratio/2 - 1); arguments beyond [-1, 1] by more than
    1e-12 raise, smaller excursions are clamped (they arise from rounding
    right at tau_c).
    """
    arg = np.asarray(kappa_ratio, dtype=float) / 2.0 - 1.0
    if np.any(arg > 1.0 + _ARCCOS_SLACK) or np.any(arg < -1.0 - _ARCCOS_SLACK):
        raise ProfileOutOfRange("coupling ratio outside [0, 4]")
    out = np.arccos(np.clip(arg, -1.0, 1.0))
    return float(out) if out.ndim == 0 else out


def optimal_phase(ratio: float, tau) -> np.ndarray | float:
    """Optimal phase profile theta(tau): 0 before tau_c, arccos roll-off after."""
    rho = _check_ratio(ratio)
    a1, a2, tau_c = profile_constants(rho)
    tau_arr = np.atleast_1d(np.asarray(tau, dtype=float))
    out = np.zeros_like(tau_arr)
    late = tau_arr > tau_c
    if np.any(late):
        w = np.exp(-rho * tau_arr[late])
        out[late] = phase_from_coupling(rho * w / (a1 - a2 * w))
    return float(out[0]) if np.isscalar(tau) else out.reshape(np.shape(tau))


@dataclass(frozen=True)
class OptimalProfile:
    """Closed-form optimal capture profile for a given r/kappa_e."""

    ratio: float
    a1: float
    a2: float
    tau_c: float

    mode = "closed_form"
    kappa_max_ratio = MAX_COUPLING_RATIO

    def theta(self, tau):
        tau_arr = np.atleast_1d(np.asarray(tau, dtype=float))
        out = np.zeros_like(tau_arr)
        late = tau_arr > self.tau_c
        if np.any(late):
            w = np.exp(-self.ratio * tau_arr[late])
            out[late] = phase_from_coupling(self.ratio * w / (self.a1 - self.a2 * w))
        return float(out[0]) if np.isscalar(tau) else out.reshape(np.shape(tau))


def optimal_profile(ratio: float) -> OptimalProfile:
    rho = _check_ratio(ratio)
    a1, a2, tau_c = profile_constants(rho)
    return OptimalProfile(ratio=rho, a1=a1, a2=a2, tau_c=tau_c)


@dataclass(frozen=True)
class SampledProfile:
    """Piecewise-linear phase schedule given as (tau, theta) samples.

    theta must be 0 up to tau_c, non-decreasing, and within [0, pi].
    Evaluation clamps to the first/last sample outside the sampled window.
    """

    tau: np.ndarray
    thetas: np.ndarray
    tau_c: float
    a1: float = math.nan
    a2: float = math.nan

    mode = "sampled"

    def __post_init__(self):
        tau = np.asarray(self.tau, dtype=float)
        th = np.asarray(self.thetas, dtype=float)
        if tau.ndim != 1 or tau.shape != th.shape or tau.size < 2:
            raise DomainError("need matching 1-d tau/theta arrays with >= 2 samples")
        if np.any(np.diff(tau) <= 0.0):
            raise DomainError("sample times must be strictly increasing")
        if np.any(np.diff(th) < -1e-12):
            raise DomainError("phase schedule must be non-decreasing")
        if np.any(th < -1e-12) or np.any(th > math.pi + 1e-9):
            raise DomainError("phase samples must lie in [0, pi]")
        if np.any(th[tau < self.tau_c - 1e-12] > 1e-12):
            raise DomainError("phase must be zero before the critical time")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "thetas", th)

    @property
    def samples(self):
        return list(zip(self.tau.tolist(), self.thetas.tolist()))

    def theta(self, tau):
        out = np.interp(np.asarray(tau, dtype=float), self.tau, self.thetas)
        return float(out) if np.isscalar(tau) else out

    def max_slope(self) -> float:
        return float(np.max(np.diff(self.thetas) / np.diff(self.tau)))


def discretize_profile(profile, slope_cap: float = 23.0,
                       horizon: float = 25.0) -> SampledProfile:
    """Sample a profile on a slope-limited staircase of spacing 0.1 tau_c.

    The first post-critical sample sits at 1.1 tau_c; each subsequent sample
    tracks the source profile but never climbs faster than `slope_cap` in
    d theta / d tau.  Raises :class:`InfeasibleCap` when the cap cannot bring
    theta within 0.01 of pi by the horizon.
    """
    if slope_cap <= 0.0:
        raise DomainError("slope cap must be positive")
    tau_c = profile.tau_c
    if horizon <= tau_c:
        raise DomainError("horizon must exceed the critical time")
    if slope_cap * (horizon - tau_c) < math.pi - 0.01:
        raise InfeasibleCap(
            f"cap {slope_cap} cannot reach pi - 0.01 within horizon {horizon}")
    dt = 0.1 * tau_c
    taus = [0.0, tau_c]
    thetas = [0.0, 0.0]
    t, th = tau_c, 0.0
    while t < horizon:
        t += dt
        th = min(float(profile.theta(t)), th + slope_cap * dt)
        taus.append(t)
        thetas.append(th)
    return SampledProfile(np.array(taus), np.array(thetas), tau_c=tau_c,
                          a1=getattr(profile, "a1", math.nan),
                          a2=getattr(profile, "a2", math.nan))


@dataclass(frozen=True)
class TransferConfig:
    """Cavity, input and delay parameters of a transfer simulation.

    Rates are angular (rad/s); delays are in seconds; `horizon` is the final
    time in units of 1/kappa_e.  `slope_cap` is carried for callers that
    discretize the control profile before simulating (None = continuous).
    """

    kappa_e: float
    r: float
    kappa_i: float = TWO_PI * 1.0
    delta_f: float = 0.0
    delta_m: float = 0.0
    delta_c: float = 0.0
    horizon: float = 25.0
    slope_cap: float | None = None

    def __post_init__(self):
        if self.kappa_e <= 0.0:
            raise DomainError("kappa_e must be positive")
        if self.kappa_i < 0.0:
            raise DomainError("kappa_i must be non-negative")
        _check_ratio(self.r / self.kappa_e)
        if self.delta_f < 0.0:
            raise DomainError("round-trip delay must be non-negative")
        tau_c = profile_constants(self.r / self.kappa_e).tau_c
        if self.horizon <= tau_c:
            raise DomainError(
                f"horizon {self.horizon} must exceed the critical time {tau_c:.4f}")

    @property
    def ratio(self) -> float:
        return self.r / self.kappa_e

    @classmethod
    def from_json(cls, source) -> "TransferConfig":
        """Build from a JSON file path or dict with Hz/ns fields.

        Keys: kappa_e_hz, r_hz (required), kappa_i_hz, delta_f_ns,
        delta_m_ns, delta_c_ns, horizon, slope_cap.  Frequencies are
        ordinary (multiplied by 2*pi here), delays are nanoseconds.
        """
        if isinstance(source, dict):
            data = dict(source)
        else:
            with open(source) as fh:
                data = json.load(fh)
        known = {"kappa_e_hz", "r_hz", "kappa_i_hz", "delta_f_ns",
                 "delta_m_ns", "delta_c_ns", "horizon", "slope_cap"}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        if "kappa_e_hz" not in data or "r_hz" not in data:
            raise DomainError("config requires kappa_e_hz and r_hz")
        cap = data.get("slope_cap")
        return cls(
            kappa_e=TWO_PI * float(data["kappa_e_hz"]),
            r=TWO_PI * float(data["r_hz"]),
            kappa_i=TWO_PI * float(data.get("kappa_i_hz", 1.0)),
            delta_f=1e-9 * float(data.get("delta_f_ns", 0.0)),
            delta_m=1e-9 * float(data.get("delta_m_ns", 0.0)),
            delta_c=1e-9 * float(data.get("delta_c_ns", 0.0)),
            horizon=float(data.get("horizon", 25.0)),
            slope_cap=None if cap is None else float(cap),
        )


@dataclass(frozen=True)
class TransferResult:
    """Fidelity, cavity trajectory, and where the lost energy went."""

    fidelity: float
    tau: np.ndarray
    amplitude: np.ndarray
    reflected_fraction: float
    intrinsic_fraction: float


@dataclass(frozen=True)
class DelayScan:
    """Grid-search result over mirror/detuning clock lags (seconds)."""

    delta_m: float
    delta_c: float
    fidelity: float
    dm_grid: np.ndarray
    dc_grid: np.ndarray
    fidelity_grid: np.ndarray  # shape (len(dm_grid), len(dc_grid))

    def ridge(self, interior_only: bool = True):
        """Best delta_c per delta_m; optionally drop rows whose optimum
        pins to the grid boundary (the ridge leaves the scan window there)."""
        idx = np.argmax(self.fidelity_grid, axis=1)
        dm = np.asarray(self.dm_grid)
        dc = np.asarray(self.dc_grid)[idx]
        if interior_only and len(self.dc_grid) > 2:
            keep = (idx > 0) & (idx < len(self.dc_grid) - 1)
            return dm[keep], dc[keep]
        return dm, dc


def _ode_step_count(horizon: float, h: float) -> int:
    if h < _MIN_STEP:
        raise IntegrationError(f"integration step underflow: h = {h:.3g}")
    return int(math.ceil(horizon / h - 1e-9))


def simulate_transfer(config: TransferConfig, profile, step: float | None = None) -> TransferResult:
    """Integrate the delay-free transfer and return |A(horizon)|^2 and losses.

    `profile` is anything with a vectorizable ``theta(tau)`` (an
    :class:`OptimalProfile` or :class:`SampledProfile`).
    """
    rho = config.ratio
    ki = config.kappa_i / config.kappa_e
    h = _DEFAULT_STEP if step is None else float(step)
    n = _ode_step_count(config.horizon, h)
    # coefficients on the half-step grid; RK4 stages only ever sample there
    tg = np.arange(2 * n + 1) * (h / 2.0)
    chalf = np.cos(np.asarray(profile.theta(tg), dtype=float) / 2.0)
    decay = 0.5 * (4.0 * chalf**2 + ki)
    pump = np.sqrt(rho) * np.exp(-0.5 * rho * tg)
    drive = 2.0 * chalf * pump
    amp = np.empty(n + 1, dtype=complex)
    amp[0] = 0.0
    a = 0.0 + 0.0j
    refl = 0.0
    intr = 0.0

    def rhs(j, aj):
        da = -decay[j] * aj - drive[j]
        out = pump[j] + 2.0 * chalf[j] * aj
        return da, (out.real * out.real + out.imag * out.imag), abs(aj) ** 2

    for i in range(n):
        m = 2 * i
        k1, r1, q1 = rhs(m, a)
        k2, r2, q2 = rhs(m + 1, a + 0.5 * h * k1)
        k3, r3, q3 = rhs(m + 1, a + 0.5 * h * k2)
        k4, r4, q4 = rhs(m + 2, a + h * k3)
        a = a + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        refl += h / 6.0 * (r1 + 2.0 * r2 + 2.0 * r3 + r4)
        intr += ki * h / 6.0 * (q1 + 2.0 * q2 + 2.0 * q3 + q4)
        amp[i + 1] = a
    if not np.isfinite(a.real) or not np.isfinite(a.imag):
        raise IntegrationError("non-finite amplitude; reduce the step size")
    return TransferResult(fidelity=abs(a) ** 2, tau=np.arange(n + 1) * h,
                          amplitude=amp, reflected_fraction=refl,
                          intrinsic_fraction=intr)


def _delay_step(lag: float, step: float | None) -> tuple[float, int]:
    """Step size commensurate with the delay, and the delay in steps."""
    h0 = _DEFAULT_STEP if step is None else float(step)
    if lag <= 0.0:
        return h0, 0
    h0 = min(h0, lag / 20.0)
    if h0 < _MIN_STEP:
        raise IntegrationError(f"integration step underflow: h = {h0:.3g}")
    n_sub = int(math.ceil(lag / h0 - 1e-12))
    return lag / n_sub, n_sub


def _integrate_delay(profile, rho: float, ki: float, lag: float,
                     dm_tau: np.ndarray, dc_tau: np.ndarray, horizon: float,
                     step: float | None, record: bool):
    """Vectorized retarded integration over a (dm, dc) lag grid.

    Returns (fidelity_grid, tau, amplitude, reflected, intrinsic); the last
    three are None unless `record` (single-cell mode).
    """
    h, n_sub = _delay_step(lag, step)
    n = _ode_step_count(horizon, h)
    nm, nc = len(dm_tau), len(dc_tau)

    theta = profile.theta
    tg = np.arange(2 * n + 1) * (h / 2.0)
    # scalar (per-time) coefficient tables on the half-step grid
    e_dir = np.exp(-0.5j * np.asarray(theta(tg), dtype=float))
    pump = np.sqrt(rho) * np.exp(-0.5 * rho * tg)
    drive = e_dir * pump
    td = tg - lag
    # the retarded input enters through the exact shifted exponential
    pump_del = np.sqrt(rho) * np.exp(-0.5 * rho * td)
    echo_in = np.exp(-0.5j * np.asarray(theta(td), dtype=float)) * pump_del
    # per-lag coefficient tables (outer-product structure of the grid)
    sin_dc = np.sin(np.asarray(theta(tg[:, None] - dc_tau[None, :]), dtype=float))
    coef = 1j * sin_dc - (1.0 + 0.5 * ki)                       # (2n+1, nc)
    e_mir = np.exp(1j * np.asarray(
        theta(tg[:, None] - 0.5 * lag - dm_tau[None, :]), dtype=float))  # (2n+1, nm)

    a = np.zeros((nm, nc), dtype=complex)
    buf_len = n_sub + 4
    ring = np.zeros((buf_len, nm, nc), dtype=complex)
    zero = np.zeros((nm, nc), dtype=complex)
    w_mid = (-1.0 / 16.0, 9.0 / 16.0, 9.0 / 16.0, -1.0 / 16.0)

    amp = np.empty(n + 1, dtype=complex) if record else None
    if record:
        amp[0] = 0.0
    refl = 0.0
    intr = 0.0
    current = 0

    def hist(k: int) -> np.ndarray:
        if k < 0:
            return zero
        if k < current - buf_len + 1:
            raise HistoryUnderrun(f"lookup {k} steps behind a {buf_len}-slot buffer")
        return ring[k % buf_len]

    def rhs(jj, aj, ad):
        if ad is None:
            ad = aj  # zero-lag limit: the delayed state is the stage state
        echo = e_mir[jj][:, None] * (echo_in[jj] + ad)
        da = coef[jj][None, :] * aj - echo - drive[jj]
        if record:
            out = e_dir[jj] * (echo[0, 0] + aj[0, 0])
            return da, abs(out) ** 2, abs(aj[0, 0]) ** 2
        return da, 0.0, 0.0

    for i in range(n):
        current = i
        m = 2 * i
        if n_sub == 0:
            a_del = (None, None, None)
        else:
            j = i - n_sub
            mid = (w_mid[0] * hist(j - 1) + w_mid[1] * hist(j)
                   + w_mid[2] * hist(j + 1) + w_mid[3] * hist(j + 2))
            a_del = (hist(j), mid, hist(j + 1))

        k1, r1, q1 = rhs(m, a, a_del[0])
        k2, r2, q2 = rhs(m + 1, a + 0.5 * h * k1, a_del[1])
        k3, r3, q3 = rhs(m + 1, a + 0.5 * h * k2, a_del[1])
        k4, r4, q4 = rhs(m + 2, a + h * k3, a_del[2])
        a = a + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        ring[(i + 1) % buf_len] = a
        if record:
            refl += h / 6.0 * (r1 + 2.0 * r2 + 2.0 * r3 + r4)
            intr += ki * h / 6.0 * (q1 + 2.0 * q2 + 2.0 * q3 + q4)
            amp[i + 1] = a[0, 0]
    if not np.all(np.isfinite(a)):
        raise IntegrationError("non-finite amplitude; reduce the step size")
    fid = np.abs(a) ** 2
    tau = np.arange(n + 1) * h if record else None
    return fid, tau, amp, refl, intr


def simulate_with_delay(config: TransferConfig, profile, step: float | None = None) -> TransferResult:
    """Integrate the transfer with a finite mirror round trip and clock lags.

    The phase profile is evaluated at four retarded arguments (cavity
    detuning, mirror reflection, delayed input, direct input) exactly as in
    the retarded master equation; cavity history before tau = 0 is zero.
    With all delays zero this reproduces :func:`simulate_transfer`.
    """
    ke = config.kappa_e
    fid, tau, amp, refl, intr = _integrate_delay(
        profile, config.ratio, config.kappa_i / ke, ke * config.delta_f,
        np.array([ke * config.delta_m]), np.array([ke * config.delta_c]),
        config.horizon, step, record=True)
    return TransferResult(fidelity=float(fid[0, 0]), tau=tau, amplitude=amp,
                          reflected_fraction=refl, intrinsic_fraction=intr)


def optimize_delays(config: TransferConfig, profile, dm_grid, dc_grid,
                    step: float | None = None) -> DelayScan:
    """Exhaustive grid search of mirror/detuning lags (seconds) for peak fidelity.

    Ties are broken toward smaller |delta_m|, then smaller |delta_c| (then
    by sign), so the result is deterministic regardless of evaluation order.
    """
    dm = np.asarray(dm_grid, dtype=float)
    dc = np.asarray(dc_grid, dtype=float)
    if dm.size == 0 or dc.size == 0:
        raise DomainError("delay grids must be non-empty")
    ke = config.kappa_e
    fid, _, _, _, _ = _integrate_delay(
        profile, config.ratio, config.kappa_i / ke, ke * config.delta_f,
        ke * dm, ke * dc, config.horizon, step, record=False)
    best = np.max(fid)
    ties = np.argwhere(fid == best)
    key = sorted((abs(dm[i]), abs(dc[j]), dm[i], dc[j], i, j) for i, j in ties)
    _, _, dm_best, dc_best, _, _ = key[0]
    return DelayScan(delta_m=float(dm_best), delta_c=float(dc_best),
                     fidelity=float(best), dm_grid=dm, dc_grid=dc,
                     fidelity_grid=fid)


def single_excitation_oracle(config: TransferConfig, profile,
                             bin_width: float = 1e-4) -> float:
    """Transfer fidelity from a time-bin collision model, single excitation.

    The input field is sliced into bins; each bin interacts with the cavity
    through an exact 2x2 beam-splitter unitary with transmission
    e^{-kappa dt / 2}, so probability is conserved exactly.  Valid for the
    lossless, delay-free configuration only; agrees with
    :func:`simulate_transfer` because the single-excitation sector of the
    linear network evolves identically to the mean amplitude.
    """
    if config.kappa_i != 0.0:
        raise DomainError("oracle requires kappa_i = 0")
    if config.delta_f != 0.0:
        raise DomainError("oracle requires a zero mirror round trip")
    rho = config.ratio
    n = int(round(config.horizon / bin_width))
    mid = (np.arange(n) + 0.5) * bin_width
    coupling = 4.0 * np.cos(np.asarray(profile.theta(mid), dtype=float) / 2.0) ** 2
    alpha = np.exp(-0.5 * coupling * bin_width)
    beta = np.sqrt(1.0 - alpha**2)
    xi = np.sqrt(rho * bin_width) * np.exp(-0.5 * rho * mid)
    # amplitude left in the cavity: each bin deposits -beta*xi, then decays
    # through every later bin's transmission
    suffix = np.ones(n)
    suffix[:-1] = np.cumprod(alpha[::-1])[::-1][1:]
    c_final = -np.sum(beta * xi * suffix)
    return float(c_final**2)
