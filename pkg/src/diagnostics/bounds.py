"""
Running constants M, N, ε̂, β, the threshold S₀ and the exponential
synchronization envelope.
"""
import dataclasses
import logging
import math

import numpy as np

from ..utils.errors import ConfigError, DomainError

logger = logging.getLogger(__name__)

ENVELOPE_REL_TOL = 0.05
ENVELOPE_ABS_TOL = 1e-10

A_POSTERIORI_NOTE = ("M, N and eps_hat are maxima over the observed frames, so the "
                     "certified envelope is a posteriori.")


@dataclasses.dataclass(frozen=True)
class BoundsReport:
    M: float
    N: float
    eps_hat: float
    beta: float
    S0: float | None
    beta_positive: bool
    omega_bar: float
    note: str = A_POSTERIORI_NOTE

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data):
        fields = {f.name for f in dataclasses.fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in fields})


def threshold_s0(eps_hat, beta):
    """S₀ = ε̂²/(4β²), the upper end of the synchronization interval."""
    if beta <= 0:
        raise ConfigError(f"S0 is undefined for beta = {beta:.6g} <= 0")
    return eps_hat ** 2 / (4.0 * beta ** 2)


def running_bounds(trajectory, params):
    """
    M = max (θ/2)|v^i| + |∂_x v|, N = max (θ/2)|v|, ε̂ = √(2L max ρ^i|P_i″ρ^i_x|²)
    over all frames, cells and components; β = Ω̄ − M − N.
    """
    frames = trajectory.frames
    if not frames:
        raise ConfigError("Cannot compute bounds of an empty trajectory")
    m = max(f.m_local for f in frames)
    n = max(f.n_local for f in frames)
    eps_hat = math.sqrt(2.0 * trajectory.length * max(f.eps_sq_local for f in frames))
    beta = params.omega_bar - m - n
    positive = beta > 0
    s0 = threshold_s0(eps_hat, beta) if positive else None
    if positive:
        logger.info(f"Bounds: M={m:.4g}, N={n:.4g}, eps_hat={eps_hat:.4g}, beta={beta:.4g}, S0={s0:.4g}")
    else:
        logger.warning(f"beta = {beta:.4g} <= 0: Omega_bar={params.omega_bar} does not exceed M+N={m + n:.4g}")
    return BoundsReport(M=m, N=n, eps_hat=eps_hat, beta=beta, S0=s0,
                        beta_positive=positive, omega_bar=params.omega_bar)


def envelope(t, lyap0, beta, eps_hat):
    """(ε̂/(2β) + e^{−βt}(√L^e(0) − ε̂/(2β)))²."""
    shift = eps_hat / (2.0 * beta)
    return (shift + np.exp(-beta * np.asarray(t)) * (math.sqrt(lyap0) - shift)) ** 2


@dataclasses.dataclass
class Violation:
    index: int
    t: float
    value: float
    bound: float


@dataclasses.dataclass
class CertReport:
    beta: float
    eps_hat: float
    rel_tol: float
    abs_tol: float
    envelope_passed: bool
    envelope_violation: Violation | None
    t_star: float | None = None
    decay_passed: bool | None = None
    decay_violation: Violation | None = None
    hypothesis_bhat_le_I: bool | None = None
    hypothesis_I_ge_BL: bool | None = None
    note: str = A_POSTERIORI_NOTE

    @property
    def passed(self):
        return self.envelope_passed and self.decay_passed is not False

    def to_dict(self):
        out = dataclasses.asdict(self)
        out["passed"] = self.passed
        return out


def _first_violation(times, values, bounds, rel_tol, abs_tol, offset=0):
    slack = bounds * (1.0 + rel_tol) + abs_tol
    bad = np.flatnonzero(values > slack)
    if bad.size == 0:
        return None
    j = int(bad[0])
    return Violation(index=j + offset, t=float(times[j]), value=float(values[j]), bound=float(bounds[j]))


def certify_envelope(times, lyap, beta, eps_hat, t_star=None, bhat=None, integral=None, bl=None,
                     rel_tol=ENVELOPE_REL_TOL, abs_tol=ENVELOPE_ABS_TOL):
    """
    Check the envelope of part (i) on every frame and, when t_star is given,
    the decay L^e(t) ≤ e^{−2β(t−t*)}L^e(t*) of part (ii) on [t*, T]. The
    hypotheses B̂ ≤ I and I ≥ B_L of part (ii) are evaluated separately.
    """
    if beta <= 0:
        raise ConfigError(f"Certification needs beta > 0, got {beta:.6g}")
    times = np.asarray(times, dtype=float)
    lyap = np.asarray(lyap, dtype=float)
    bound = envelope(times - times[0], lyap[0], beta, eps_hat)
    violation = _first_violation(times, lyap, bound, rel_tol, abs_tol)
    report = CertReport(beta=beta, eps_hat=eps_hat, rel_tol=rel_tol, abs_tol=abs_tol,
                        envelope_passed=violation is None, envelope_violation=violation)
    if t_star is None:
        return report

    mask = times >= t_star
    report.t_star = float(t_star)
    if not np.any(mask):
        report.decay_passed = True
        return report
    start = int(np.flatnonzero(mask)[0])
    lyap_star = float(np.interp(t_star, times, lyap))
    decay = np.exp(-2.0 * beta * (times[mask] - t_star)) * lyap_star
    report.decay_violation = _first_violation(times[mask], lyap[mask], decay, rel_tol, abs_tol, start)
    report.decay_passed = report.decay_violation is None
    if bhat is not None and integral is not None:
        report.hypothesis_bhat_le_I = bool(np.all(np.asarray(bhat)[mask] <= np.asarray(integral)[mask]))
    if bl is not None and integral is not None:
        report.hypothesis_I_ge_BL = bool(np.all(np.asarray(integral)[mask] >= np.asarray(bl)[mask]))
    return report


def decay_ode_solution(alpha, beta, c0, t):
    """
    y(t) = α²/(4β²) (1 + C₀ e^{−βt})², a solution of y′ = α√y − 2βy.
    C₀ = −1 is the branch starting from y(0) = 0.
    """
    if c0 < -1:
        raise DomainError(f"C0 must be at least -1, got {c0}")
    if beta <= 0:
        raise DomainError(f"beta must be positive, got {beta}")
    return alpha ** 2 / (4.0 * beta ** 2) * (1.0 + c0 * np.exp(-beta * np.asarray(t, dtype=float))) ** 2


def absorbing_interval_check(times, lyap, s0, rel_tol=ENVELOPE_REL_TOL):
    """
    First time L^e enters [0, S₀] and the first later frame above S₀(1 + rel_tol).
    Returns (entry_time, violation_time); either may be None.
    """
    lyap = np.asarray(lyap, dtype=float)
    inside = np.flatnonzero(lyap <= s0)
    if inside.size == 0:
        return None, None
    entry = int(inside[0])
    after = np.flatnonzero(lyap[entry:] > s0 * (1.0 + rel_tol))
    violation = None if after.size == 0 else float(times[entry + int(after[0])])
    return float(times[entry]), violation


def discrete_inequality_residuals(frames, bounds):
    """
    (L^e_{j+1} − L^e_j)/Δt − (B̂_j + ε̂√L^e_j − 2βL^e_j) between consecutive
    frames. Positive values measure the discretization slack.
    """
    out = []
    for a, b in zip(frames, frames[1:]):
        dt = b.t - a.t
        if dt <= 0:
            continue
        rate = (b.lyap - a.lyap) / dt
        rhs = a.Bhat + bounds.eps_hat * math.sqrt(a.lyap) - 2.0 * bounds.beta * a.lyap
        out.append(rate - rhs)
    return np.array(out)
