"""Solvers for the convolution equation and the extremal delay equation.

The mean-value function sigma solves u*sigma(u) = int_0^u sigma(u-t) P(t) dt
with sigma(u) = u^(k-1) on [0, 1].  For the extremal profile (P = k on [0,1],
-1 beyond) this reduces to the differential-difference equation
u*sigma'(u) + (1-k)*sigma(u) + (k+1)*sigma(u-1) = 0, integrated here in the
normalized variable tau(u) = sigma(u) * u^(1-k) to tame the u^(k-1) growth.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .profiles import Profile, eval_profile, eval_profile_jump_averaged


@dataclass(frozen=True)
class SigmaSolution:
    """Sampled solution on a uniform grid.

    values holds tau samples when normalized=True, sigma samples otherwise.
    """

    k: float
    step: float
    u: np.ndarray
    values: np.ndarray
    provenance: str  # "convolution" | "dde" | "saddle"
    normalized: bool

    def sigma(self) -> np.ndarray:
        if not self.normalized:
            return self.values
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.values * self.u ** (self.k - 1.0)
        if self.k > 1.0 and len(out):
            out[0] = 0.0
        return out

    def tau(self) -> np.ndarray:
        if self.normalized:
            return self.values
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.values * self.u ** (1.0 - self.k)
        if len(out):
            out[0] = 1.0
        return out

    def value_at(self, x: float) -> float:
        """Linear interpolation of the stored values array."""
        if not 0.0 <= x <= self.u[-1] + 1e-12:
            raise ValueError(f"u={x} outside solution range")
        return float(np.interp(x, self.u, self.values))

    def to_csv(self) -> str:
        sig, tau = self.sigma(), self.tau()
        lines = ["u,sigma,tau"]
        lines += [f"{ui:.10g},{si:.12g},{ti:.12g}"
                  for ui, si, ti in zip(self.u, sig, tau)]
        return "\n".join(lines) + "\n"


def _aligned_step(step: float) -> float:
    # the unit delay and the t=1 profile breakpoint must land on the grid
    n = max(1, round(1.0 / step))
    return 1.0 / n


def solve_convolution(p: Profile, k: float, u_max: float, step: float) -> SigmaSolution:
    """Method-of-steps trapezoid solution of u*sigma = (sigma*P)(u).

    The implicit t=0 trapezoid node is solved for at each step; profile values
    at grid breakpoints use the jump-averaged one-sided limits so the O(h^2)
    panel accuracy survives discontinuities of P.
    """
    if step > 1e-3 + 1e-15:
        raise ValueError("step must be <= 1e-3")
    if u_max > 50.0:
        raise ValueError("u_max must be <= 50")
    if p.t_max < u_max - 1e-12:
        raise ValueError("profile domain shorter than u_max")
    h = _aligned_step(step)
    N = int(round(u_max / h))
    u = np.arange(N + 1) * h

    P = np.array([eval_profile_jump_averaged(p, min(t, p.t_max)) for t in u])
    sigma = np.zeros(N + 1)
    n1 = round(1.0 / h)
    km1 = k - 1.0
    sigma[: n1 + 1] = u[: n1 + 1] ** km1 if km1 != 0.0 else 1.0

    P0 = eval_profile(p, 0.0)
    for j in range(n1 + 1, N + 1):
        acc = 0.5 * sigma[0] * P[j]
        if j > 1:
            acc += float(np.dot(sigma[1:j], P[j - 1:0:-1]))
        sigma[j] = h * acc / (u[j] - 0.5 * h * P0)
    return SigmaSolution(k=k, step=h, u=u, values=sigma,
                         provenance="convolution", normalized=False)


class _Hermite:
    """Cubic Hermite lookup over a prefix of a uniform grid."""

    def __init__(self, h: float, vals: np.ndarray, derivs: np.ndarray):
        self.h = h
        self.vals = vals
        self.derivs = derivs

    def __call__(self, x: float) -> float:
        j = int(x / self.h)
        s = (x - j * self.h) / self.h
        if s < 1e-14:
            return float(self.vals[j])
        v0, v1 = self.vals[j], self.vals[j + 1]
        d0, d1 = self.derivs[j] * self.h, self.derivs[j + 1] * self.h
        return float((1 + 2 * s) * (1 - s) ** 2 * v0 + s * (1 - s) ** 2 * d0
                     + s * s * (3 - 2 * s) * v1 + s * s * (s - 1) * d1)


def solve_extremal_dde(k: float, u_max: float, step: float,
                       normalized: bool = True) -> SigmaSolution:
    """Method-of-steps RK4 solution of the extremal delay equation.

    normalized=True integrates tau(u) = sigma(u) u^(1-k) via
    tau'(u) = -(k+1) (1-1/u)^(k-1) tau(u-1) / u  (tau = 1 on [0,1]);
    normalized=False integrates sigma directly.  Delayed values come from
    cubic Hermite interpolation of the already-computed history.
    """
    if k < 1.0:
        raise ValueError("k must be >= 1")
    if u_max > 10.0 * k + 1e-9:
        raise ValueError("u_max must be <= 10k")
    if k * step > 0.01:
        warnings.warn(f"k*step = {k * step:.3g} > 0.01 may under-resolve "
                      "the delay equation", RuntimeWarning, stacklevel=2)
    h = _aligned_step(step)
    n = round(1.0 / h)
    N = int(round(u_max / h))
    u = np.arange(N + 1) * h
    km1 = k - 1.0

    if normalized:
        vals = np.ones(N + 1)
        derivs = np.zeros(N + 1)
        hist = _Hermite(h, vals, derivs)

        def delayed(x):
            return 1.0 if x <= 1.0 else hist(x)

        def rate(uu, d):
            return -(k + 1.0) * (1.0 - 1.0 / uu) ** km1 * d / uu

        for j in range(n, N):
            uu = u[j]
            k1 = rate(uu, delayed(uu - 1.0))
            derivs[j] = k1
            k2 = rate(uu + 0.5 * h, delayed(uu - 1.0 + 0.5 * h))
            k4 = rate(uu + h, delayed(uu + h - 1.0))
            vals[j + 1] = vals[j] + h / 6.0 * (k1 + 4.0 * k2 + k4)
        derivs[N] = rate(u[N], delayed(u[N] - 1.0))
        return SigmaSolution(k=k, step=h, u=u, values=vals,
                             provenance="dde", normalized=True)

    vals = u ** km1 if km1 != 0.0 else np.ones(N + 1)
    derivs = np.zeros(N + 1)
    if km1 != 0.0:
        with np.errstate(divide="ignore"):
            derivs[: n + 1] = km1 * u[: n + 1] ** (km1 - 1.0)
        if not math.isfinite(derivs[0]):
            derivs[0] = 0.0
    hist = _Hermite(h, vals, derivs)

    def delayed(x):
        return x ** km1 if x <= 1.0 else hist(x)

    def rate(uu, y, d):
        return (km1 * y - (k + 1.0) * d) / uu

    for j in range(n, N):
        uu = u[j]
        y = vals[j]
        d0 = delayed(uu - 1.0)
        dh = delayed(uu - 1.0 + 0.5 * h)
        d1 = delayed(uu + h - 1.0)
        k1 = rate(uu, y, d0)
        derivs[j] = k1
        k2 = rate(uu + 0.5 * h, y + 0.5 * h * k1, dh)
        k3 = rate(uu + 0.5 * h, y + 0.5 * h * k2, dh)
        k4 = rate(uu + h, y + h * k3, d1)
        vals[j + 1] = y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    derivs[N] = rate(u[N], vals[N], delayed(u[N] - 1.0))
    return SigmaSolution(k=k, step=h, u=u, values=vals,
                         provenance="dde", normalized=False)


def first_zero(sol: SigmaSolution) -> float | None:
    """First downward sign change of the solution, or None if it stays positive.

    Linear interpolation between the bracketing grid points (ties toward the
    smaller u); the location error is below one grid step.
    """
    v = sol.values
    pos = v > 0.0
    for j in range(len(v) - 1):
        if pos[j] and v[j + 1] <= 0.0:
            if v[j + 1] == 0.0:
                return float(sol.u[j + 1])
            frac = v[j] / (v[j] - v[j + 1])
            return float(sol.u[j] + frac * (sol.u[j + 1] - sol.u[j]))
    return None


@dataclass(frozen=True)
class ComparisonReport:
    """Ordering check sigma <= sigma_sharp (+tol) up to the first zero of sigma."""

    ok: bool
    max_excess: float
    first_zero: float | None
    n_checked: int
    tolerance: float


def compare_profiles(p: Profile, p_sharp: Profile, k: float, u_max: float,
                     step: float = 1e-3, tolerance: float = 1e-8) -> ComparisonReport:
    """Solve both profiles and verify the monotonicity ordering.

    Preconditions (checked by sampling): the profiles agree on [0, 1] and
    p <= p_sharp pointwise.
    """
    ts = np.linspace(0.0, min(p.t_max, p_sharp.t_max, u_max), 1201)
    for t in ts:
        a, b = eval_profile(p, t), eval_profile(p_sharp, t)
        if a > b + 1e-12:
            raise ValueError(f"precondition failed: P({t}) = {a} > P_sharp({t}) = {b}")
        if t <= 1.0 and abs(a - b) > 1e-12:
            raise ValueError(f"precondition failed: profiles differ at t={t} <= 1")

    sol = solve_convolution(p, k, u_max, step)
    sol_sharp = solve_convolution(p_sharp, k, u_max, step)
    u0 = first_zero(sol)
    cut = len(sol.u) if u0 is None else int(u0 / sol.step) + 1
    excess = sol.values[:cut] - sol_sharp.values[:cut]
    max_excess = float(excess.max()) if cut else 0.0
    return ComparisonReport(ok=max_excess <= tolerance, max_excess=max_excess,
                            first_zero=u0, n_checked=cut, tolerance=tolerance)
