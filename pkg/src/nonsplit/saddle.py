"""Saddle-point estimate of sigma(u) for the extremal profile.

The saddle xi(u) solves (k+1) e^xi = k + u*xi, picked real through the two
Lambert-W branches: the principal branch below u = k, the lower branch above.
The main term is -(k-1)! xi e^{(k+1)(gamma + I(xi)) - u xi} /
sqrt(2 pi (k+1) I''(xi)) with I''(xi) = (xi e^xi - e^xi + 1)/xi^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import gammaln

from .specfun import EULER_GAMMA, WBranch, ein, lambert_w


class SaddleBandError(ValueError):
    """Raised when the Lambert-W argument drops below -1/e (u too close to k)."""


def xi_of(k: float, u: float) -> tuple[float, WBranch]:
    """Real saddle point and the branch used.

    Defined whenever u e^{(k-u)/u} >= k+1 (equivalently the W-argument is
    >= -1/e); that always holds for |u-k| >= 2 sqrt(k) but also well inside
    that band.  The residual of (k+1) e^xi = k + u*xi stays below
    1e-10 * (k+1).
    """
    if u <= 0.0:
        raise ValueError("u must be positive")
    arg = -(k + 1.0) * math.exp(-k / u) / u
    if arg < -math.exp(-1.0):
        raise SaddleBandError(
            f"no real saddle at k={k}, u={u}: W-argument {arg:.6g} < -1/e")
    branch = WBranch.PRINCIPAL if u <= k else WBranch.LOWER
    w = lambert_w(branch, arg)
    xi = -w - k / u

    # one Newton polish on (k+1)e^x - k - ux keeps the residual at scale eps
    ex = math.exp(xi)
    f = (k + 1.0) * ex - k - u * xi
    fp = (k + 1.0) * ex - u
    if fp != 0.0:
        xi -= f / fp
    return xi, branch


@dataclass(frozen=True)
class SaddleEstimate:
    k: float
    u: float
    xi: float
    main_term: float
    in_range: bool
    branch_used: WBranch


def in_validity_range(k: float, u: float) -> bool:
    """The proposition's range: k >= 3, k/(2 log k) <= u <= 10k, |u-k| >= 2 sqrt(k)."""
    if k < 3.0:
        return False
    if u < k / (2.0 * math.log(k)) or u > 10.0 * k:
        return False
    return abs(u - k) >= 2.0 * math.sqrt(k)


def sigma_saddle(k: float, u: float) -> SaddleEstimate:
    """Saddle-point main term for sigma(u); sign is -sign(xi).

    Out-of-range (k, u) still produce a value with in_range=False whenever the
    real saddle exists; the magnitude is assembled in log space so large k and
    u^(k-1) growth do not overflow.
    """
    xi, branch = xi_of(k, u)
    i2 = _ein_second_derivative(xi)
    logmag = (gammaln(k) + (k + 1.0) * (EULER_GAMMA + ein(xi)) - u * xi
              + math.log(abs(xi)) - 0.5 * math.log(2.0 * math.pi * (k + 1.0) * i2))
    main = -math.copysign(math.exp(logmag), xi)
    return SaddleEstimate(k=k, u=u, xi=xi, main_term=main,
                          in_range=in_validity_range(k, u), branch_used=branch)


def _ein_second_derivative(xi: float) -> float:
    # I''(xi) = (xi e^xi - e^xi + 1)/xi^2, positive on the real line, -> 1/2 at 0
    if abs(xi) < 1e-6:
        return 0.5 + xi / 3.0
    ex = math.exp(xi)
    return (xi * ex - ex + 1.0) / (xi * xi)


def theorem3_first_zero_window(k: float) -> tuple[float, float]:
    """Window [max(k - 3k^0.6, 0.5 k/log k), k + 3k^0.6] for the first zero.

    The 0.6 exponent stands in for the unquantified 1/2 + eps; the lower clip
    comes from the u0 >> k/log k lemma.
    """
    if k < 3.0:
        raise ValueError("k must be >= 3")
    spread = 3.0 * k ** 0.6
    lo = max(k - spread, 0.5 * k / math.log(k))
    return lo, k + spread


def saddle_dde_table_csv(k: float, us, dde_solution) -> str:
    """CSV rows (u, xi, saddle, dde) comparing the two routes."""
    lines = ["u,xi,saddle,dde"]
    km1 = k - 1.0
    for u in us:
        est = sigma_saddle(k, u)
        sig_dde = dde_solution.value_at(u) * u ** km1 if dde_solution.normalized \
            else dde_solution.value_at(u)
        lines.append(f"{u:.10g},{est.xi:.12g},{est.main_term:.12g},{sig_dde:.12g}")
    return "\n".join(lines) + "\n"
