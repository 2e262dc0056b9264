"""Special functions for the saddle-point analysis.

Real Lambert W branches W0/W-1, the entire function I(s) = int_0^s (e^t-1)/t dt,
and the exponential integral J(s) = int_0^inf e^{-(s+t)}/(s+t) dt, which satisfy
-J(s) = I(-s) + gamma + log s off the cut (-inf, 0].
"""

from __future__ import annotations

import cmath
import math
from enum import Enum

import numpy as np
from scipy.integrate import quad

#: Euler-Mascheroni constant, 30 digits.
EULER_GAMMA = 0.577215664901532860606512090082

_INV_E = math.exp(-1.0)

# crossover |s| between the power series and segment quadrature for ein()
_SERIES_RADIUS = 30.0


class WBranch(Enum):
    """The two real branches of Lambert W on [-1/e, 0): W0 >= -1 >= W-1."""

    PRINCIPAL = "principal"
    LOWER = "lower"


# ---------------------------------------------------------------------------
# Lambert W (Halley iteration, branch-specific initializers)
# ---------------------------------------------------------------------------

def _halley(w: float, x: float) -> float:
    for _ in range(60):
        ew = math.exp(w)
        f = w * ew - x
        if f == 0.0:
            break
        w1 = w + 1.0
        if abs(w1) < 1e-12:
            # at the branch point the iteration degenerates; the initializer
            # is already accurate to O((ex+1)^2) there
            break
        dw = f / (ew * w1 - (w + 2.0) * f / (2.0 * w1))
        w -= dw
        if abs(dw) <= 4e-16 * (1.0 + abs(w)):
            break
    return w


def lambert_w(branch: WBranch, x: float) -> float:
    """Real Lambert W: solve w*e^w = x on the requested branch.

    Principal branch is defined on [-1/e, inf) with W0 >= -1; the lower
    branch on [-1/e, 0) with W-1 <= -1.  Residual |w e^w - x| is kept below
    1e-12 * max(1, |x|).
    """
    if math.isnan(x):
        raise ValueError("lambert_w: x is NaN")
    if x < -_INV_E:
        if x > -_INV_E - 1e-15:  # branch point up to representation error
            return -1.0
        raise ValueError(f"lambert_w: x={x} below -1/e")
    if x == -_INV_E:
        return -1.0

    p2 = 2.0 * (math.e * x + 1.0)
    if branch is WBranch.PRINCIPAL:
        if p2 < 1.0:
            p = math.sqrt(p2)
            w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p2 * p
        elif x < 1.0:
            w = x * (1.0 - x + 1.5 * x * x)
        else:
            lx = math.log(x)
            w = lx - math.log(lx) if lx > 1.0 else 0.5 * lx + 0.3
        w = _halley(w, x)
        return max(w, -1.0)

    if x >= 0.0:
        raise ValueError("lambert_w: lower branch requires x < 0")
    if p2 < 1.0:
        p = math.sqrt(p2)
        w = -1.0 - p - p * p / 3.0 - 11.0 / 72.0 * p2 * p
    else:
        l1 = math.log(-x)
        w = l1 - math.log(-l1)
    w = _halley(w, x)
    return min(w, -1.0)


# ---------------------------------------------------------------------------
# Double-double helpers for the ein power series.
#
# The series sum_{n>=1} s^n/(n*n!) is alternating for Re s < 0 with terms up
# to ~e^{|s|}; at |s| = 30 plain double summation loses ~1e-5 absolute, so the
# term recurrence and accumulation run in compensated double-double (~31
# significant digits), which keeps the advertised 1e-10 relative error on the
# whole series disc.
# ---------------------------------------------------------------------------

_SPLIT = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _fast_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _two_prod(a, b):
    p = a * b
    ca = _SPLIT * a
    ahi = ca - (ca - a)
    alo = a - ahi
    cb = _SPLIT * b
    bhi = cb - (cb - b)
    blo = b - bhi
    return p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo


def _dd_add(x, y):
    s, e = _two_sum(x[0], y[0])
    return _fast_two_sum(s, e + x[1] + y[1])


def _dd_sub(x, y):
    return _dd_add(x, (-y[0], -y[1]))


def _dd_mul(x, y):
    p, e = _two_prod(x[0], y[0])
    return _fast_two_sum(p, e + x[0] * y[1] + x[1] * y[0])


def _dd_div_int(x, n):
    fn = float(n)
    q1 = x[0] / fn
    p, pe = _two_prod(q1, fn)
    s, se = _two_sum(x[0], -p)
    return _fast_two_sum(q1, (s + (se + (x[1] - pe))) / fn)


def _ein_series(s: complex) -> complex:
    """I(s) by the power series sum s^n/(n*n!), double-double internals."""
    sr, si = (s.real, 0.0), (s.imag, 0.0)
    tr, ti = (1.0, 0.0), (0.0, 0.0)  # term s^n/n!, starting at n=0
    ar, ai = (0.0, 0.0), (0.0, 0.0)
    for n in range(1, 700):
        nr = _dd_sub(_dd_mul(tr, sr), _dd_mul(ti, si))
        ni = _dd_add(_dd_mul(tr, si), _dd_mul(ti, sr))
        tr, ti = _dd_div_int(nr, n), _dd_div_int(ni, n)
        addr, addi = _dd_div_int(tr, n), _dd_div_int(ti, n)
        ar, ai = _dd_add(ar, addr), _dd_add(ai, addi)
        if n > abs(s) and abs(addr[0]) + abs(addi[0]) <= 1e-24 * (
            abs(ar[0]) + abs(ai[0]) + 1e-300
        ):
            break
    return complex(ar[0] + ar[1], ai[0] + ai[1])


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _integrand_ein(z: complex, s: complex) -> complex:
    # (e^{s*tau}-1)/tau with z = s*tau; series form dodges cancellation near 0
    if abs(z) < 1e-5:
        return s * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)))
    return (cmath.exp(z) - 1.0) * s / z


def _ein_quad(s: complex) -> complex:
    """I(s) by composite Gauss-Legendre along the straight segment 0 -> s."""
    panels = max(8, int(math.ceil(abs(s) * 0.6)))
    total = 0.0 + 0.0j
    h = 1.0 / panels
    for i in range(panels):
        mid = (i + 0.5) * h
        for xg, wg in zip(_GL_NODES, _GL_WEIGHTS):
            tau = mid + 0.5 * h * xg
            total += wg * _integrand_ein(s * tau, s)
    return total * 0.5 * h


def ein(s):
    """The entire integral I(s) = int_0^s (e^t - 1)/t dt.

    Power series for |s| <= 30, straight-segment quadrature beyond; relative
    error <= 1e-10 on the series disc.  Returns float for real input.
    """
    z = complex(s)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("ein: non-finite argument")
    if z == 0:
        return 0.0 if not isinstance(s, complex) else 0.0 + 0.0j
    val = _ein_series(z) if abs(z) <= _SERIES_RADIUS else _ein_quad(z)
    if isinstance(s, complex):
        return val
    return val.real


def exp_integral_J(s):
    """J(s) = int_0^inf e^{-(s+t)}/(s+t) dt, holomorphic off (-inf, 0].

    Computed as e^{-s} * int_0^inf e^{-t}/(s+t) dt by adaptive quadrature;
    relative error <= 1e-10 for Re s >= 0.1.  Satisfies
    -J(s) = I(-s) + gamma + log s.
    """
    z = complex(s)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("exp_integral_J: non-finite argument")
    if z.imag == 0.0 and z.real <= 0.0:
        raise ValueError("exp_integral_J: argument on the cut (-inf, 0]")

    zr, zi = z.real, z.imag

    def fre(t):
        d = (zr + t) ** 2 + zi * zi
        return math.exp(-t) * (zr + t) / d

    gr = quad(fre, 0.0, math.inf, epsabs=1e-14, epsrel=1e-13, limit=300)[0]
    if zi == 0.0:
        g = complex(gr, 0.0)
    else:

        def fim(t):
            d = (zr + t) ** 2 + zi * zi
            return -math.exp(-t) * zi / d

        g = complex(gr, quad(fim, 0.0, math.inf, epsabs=1e-14, epsrel=1e-13,
                             limit=300)[0])
    val = cmath.exp(-z) * g
    if isinstance(s, complex):
        return val
    return val.real


def j_identity_residual(s) -> float:
    """|−J(s) − (I(−s) + gamma + log s)|, the transform-lemma identity check."""
    z = complex(s)
    lhs = -complex(exp_integral_J(z))
    rhs = complex(ein(-z)) + EULER_GAMMA + cmath.log(z)
    return abs(lhs - rhs)
