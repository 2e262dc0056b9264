"""Inclusion-exclusion simplex integrals and alternating-sum bracketing.

I_j(u) integrates prod (k - P(t_i))/t_i over the simplex t_1+...+t_j <= u,
t_i >= 1, optionally weighted by ((u - sum t_i)/u)^e.  The alternating sums
sum_j (-1)^j I_j(u)/j! reconstruct the mean value sigma(u), with the partial
sums bracketing it from both sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad

from .profiles import Profile, eval_profile


@dataclass(frozen=True)
class IncExcConfig:
    """Quadrature configuration for the I_j integrals.

    weighted=True includes the ((u - sum t_i)/u)^e factor with exponent
    weight_exponent (None means k-1, the sigma-series weight; the cubic case
    uses exponent 1).  weighted=False is the plain character form.
    """

    weighted: bool = True
    weight_exponent: float | None = None
    j_max: int = 3
    quad_tolerance: float = 1e-8

    def __post_init__(self):
        if self.j_max < 0:
            raise ValueError("j_max must be >= 0")
        if self.quad_tolerance <= 0:
            raise ValueError("quad_tolerance must be positive")

    def exponent(self, k: float) -> float:
        if not self.weighted:
            return 0.0
        return (k - 1.0) if self.weight_exponent is None else self.weight_exponent


def _points_in(p: Profile, lo: float, hi: float) -> list[float]:
    return [b for b in p.breakpoints() if lo < b < hi]


def eval_Ij(p: Profile, k: float, j: int, u: float, cfg: IncExcConfig) -> float:
    """The j-fold inclusion-exclusion integral; exact 0 for u <= j."""
    if j not in (0, 1, 2, 3):
        raise ValueError("only j in {0, 1, 2, 3} supported")
    if j == 0:
        return 1.0
    if u <= j:
        return 0.0
    e = cfg.exponent(k)
    tol = cfg.quad_tolerance

    def factor(t):
        return (k - eval_profile(p, t)) / t

    def weight(rem):
        if e == 0.0:
            return 1.0
        if rem <= 0.0:
            return 0.0
        return (rem / u) ** e

    if j == 1:
        f = lambda t1: factor(t1) * weight(u - t1)
        return quad(f, 1.0, u, points=_points_in(p, 1.0, u),
                    epsabs=tol, epsrel=1e-10, limit=300)[0]

    if j == 2:
        def inner(t1):
            hi = u - t1
            if hi <= 1.0:
                return 0.0
            f = lambda t2: factor(t2) * weight(u - t1 - t2)
            return factor(t1) * quad(f, 1.0, hi, points=_points_in(p, 1.0, hi),
                                     epsabs=tol / 10.0, epsrel=1e-10, limit=200)[0]
        return quad(inner, 1.0, u - 1.0, points=_points_in(p, 1.0, u - 1.0),
                    epsabs=tol, epsrel=1e-10, limit=200)[0]

    def inner2(t1, t2):
        hi = u - t1 - t2
        if hi <= 1.0:
            return 0.0
        f = lambda t3: factor(t3) * weight(u - t1 - t2 - t3)
        return quad(f, 1.0, hi, points=_points_in(p, 1.0, hi),
                    epsabs=tol / 100.0, epsrel=1e-10, limit=100)[0]

    def inner1(t1):
        hi = u - t1 - 1.0
        if hi <= 1.0:
            return 0.0
        f = lambda t2: factor(t2) * inner2(t1, t2)
        return factor(t1) * quad(f, 1.0, hi, points=_points_in(p, 1.0, hi),
                                 epsabs=tol / 10.0, epsrel=1e-10, limit=100)[0]

    return quad(inner1, 1.0, u - 2.0, points=_points_in(p, 1.0, u - 2.0),
                epsabs=tol, epsrel=1e-10, limit=100)[0]


def sigma_bracket(p: Profile, k: float, u: float, m: int,
                  cfg: IncExcConfig) -> tuple[float, float]:
    """(lower, upper) bracketing of sigma(u) by the alternating partial sums.

    lower uses terms j <= 2m-1, upper j <= 2m, both scaled by u^(k-1).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if 2 * m > cfg.j_max:
        raise ValueError(f"m={m} needs I_{2 * m}, beyond j_max={cfg.j_max}")
    terms = [((-1.0) ** j / math.factorial(j)) * eval_Ij(p, k, j, u, cfg)
             for j in range(2 * m + 1)]
    scale = u ** (k - 1.0)
    lower = scale * sum(terms[: 2 * m])
    upper = scale * sum(terms)
    return lower, upper


def eval_I3prime(u: float, cfg: IncExcConfig) -> float:
    """int over {t_i >= 1, sum <= u} of (u - t1 - t2 - t3)/(u t1 t2 t3); 0 for u <= 3."""
    if u > 4.0 + 1e-12:
        raise ValueError("u must be <= 4")
    if u <= 3.0:
        return 0.0
    tol = cfg.quad_tolerance

    def inner2(t1, t2):
        hi = u - t1 - t2
        if hi <= 1.0:
            return 0.0
        f = lambda t3: (u - t1 - t2 - t3) / (u * t1 * t2 * t3)
        return quad(f, 1.0, hi, epsabs=tol / 100.0, epsrel=1e-10, limit=100)[0]

    def inner1(t1):
        hi = u - t1 - 1.0
        if hi <= 1.0:
            return 0.0
        return quad(lambda t2: inner2(t1, t2), 1.0, hi,
                    epsabs=tol / 10.0, epsrel=1e-10, limit=100)[0]

    return quad(inner1, 1.0, u - 2.0, epsabs=tol, epsrel=1e-10, limit=100)[0]


def ij_table_csv(p: Profile, k: float, us, cfg: IncExcConfig) -> str:
    """CSV rows (u, I1, I2, I3) over the given u values."""
    lines = ["u,I1,I2,I3"]
    for u in us:
        vals = [eval_Ij(p, k, j, u, cfg) for j in (1, 2, 3)]
        lines.append(f"{u:.10g}," + ",".join(f"{v:.12g}" for v in vals))
    return "\n".join(lines) + "\n"
