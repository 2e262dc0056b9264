"""Degree/discriminant bounds from the Dedekind-zeta side.

Covers the bound-inversion function a(lambda) and its supremum A, the
least-non-split exponent c/(A(l-1)), von Mangoldt sums with the
Rosser-Schoenfeld asymptotic fallback, the greedy T-threshold, and the residue
bound with its closed form and the Louboutin baseline.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .specfun import EULER_GAMMA

#: Largest T the von Mangoldt sieve will handle exactly.
SIEVE_CAP = 100_000_000

#: GRH-conditional comparison (documented only): N << (log d_K / (l-1))^2.
GRH_EXPONENT_NOTE = "(log d_K / (l-1))^2"


@dataclass(frozen=True)
class FieldParams:
    """Degree l and log-discriminant, with the derived k, d and D quantities."""

    l: int
    log_dK: float

    def __post_init__(self):
        if self.l < 2:
            raise ValueError("degree l must be >= 2")
        if self.log_dK <= 0.0:
            raise ValueError("log_dK must be positive")
        if self.log_dK < self.l * math.log(2.0):
            warnings.warn("log_dK below l*log 2: discriminants grow at least "
                          "exponentially in the degree", RuntimeWarning,
                          stacklevel=2)

    @property
    def k(self) -> int:
        return self.l - 1

    @property
    def d(self) -> float:
        """(log d_K)/l, the log of the root discriminant."""
        return self.log_dK / self.l

    @property
    def D(self) -> float:
        """log((log d_K)/l)."""
        return math.log(self.d)


class CPolicyMode(Enum):
    STARK_HALF = "stark_half"
    QUARTER = "quarter"
    QUARTER_PLUS_B = "quarter_plus_B"
    STECHKIN = "stechkin"


_STECHKIN = (1.0 - 1.0 / math.sqrt(5.0)) / 2.0  # 0.27639...


@dataclass(frozen=True)
class CPolicy:
    """Choice of the constant c in the Lambda_K-sum bound c*log d_K + 1/(sigma-1)."""

    mode: CPolicyMode = CPolicyMode.QUARTER

    @property
    def base(self) -> float:
        return {CPolicyMode.STARK_HALF: 0.5,
                CPolicyMode.QUARTER: 0.25,
                CPolicyMode.QUARTER_PLUS_B: 0.25,
                CPolicyMode.STECHKIN: _STECHKIN}[self.mode]

    def value(self, fp: FieldParams | None = None) -> float:
        if self.mode is CPolicyMode.QUARTER_PLUS_B:
            if fp is None:
                raise ValueError("quarter_plus_B needs field parameters")
            return 0.25 + residue_B(fp)
        return self.base


def residue_B(fp: FieldParams) -> float:
    """Explicit part of B = 2 log(d)/d with d = (log d_K)/l (O(1/d) dropped)."""
    if fp.d < math.e:
        raise ValueError("B undefined for (log d_K)/l < e")
    return 2.0 * fp.D / fp.d


def a_lambda(l: int, lam: float) -> float:
    """a(lambda) = (1 - (l/(l-1)) e^(-lambda)) / lambda."""
    if lam <= 0.0:
        raise ValueError("lambda must be positive")
    if l < 2:
        raise ValueError("l must be >= 2")
    return (1.0 - (l / (l - 1.0)) * math.exp(-lam)) / lam


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, lo: float, hi: float, tol: float = 1e-10) -> tuple[float, float]:
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = f(x1)
    x = 0.5 * (lo + hi)
    return f(x), x


def sup_a(l: int) -> tuple[float, float]:
    """(A, argmax): golden-section maximum of a(lambda) over (0, 50].

    A coarse scan brackets the interior maximum first (a is negative near 0
    and decays like 1/lambda at infinity).
    """
    f = lambda lam: a_lambda(l, lam)
    grid = np.geomspace(1e-3, 50.0, 400)
    vals = [f(x) for x in grid]
    i = int(np.argmax(vals))
    lo = float(grid[max(i - 1, 0)])
    hi = float(grid[min(i + 1, len(grid) - 1)])
    best, arg = _golden_max(f, lo, hi)
    return float(best), float(arg)


@dataclass(frozen=True)
class ExponentReport:
    """A bound exponent with its method tag and intermediate constants."""

    method: str
    exponent: float
    baseline: float
    beats_baseline: bool
    constants: dict


def theorem1_exponent(fp: FieldParams, c: CPolicy) -> ExponentReport:
    """Exponent c/(A(l-1)) against the natural barrier 1/(2(l-1))."""
    A, lam = sup_a(fp.l)
    cval = c.value(fp) if c.mode is CPolicyMode.QUARTER_PLUS_B else c.value()
    exponent = cval / (A * (fp.l - 1))
    baseline = 1.0 / (2.0 * (fp.l - 1))
    return ExponentReport(
        method="dedekind_zeta",
        exponent=exponent,
        baseline=baseline,
        beats_baseline=exponent < baseline,
        constants={"A": A, "lambda_star": lam, "c": cval, "c_policy": c.mode.value},
    )


def invert_split_bound(fp: FieldParams, c: CPolicy) -> float:
    """log x threshold: all primes <= x splitting forces log x <= this."""
    rep = theorem1_exponent(fp, c)
    return rep.exponent * fp.log_dK


# ---------------------------------------------------------------------------
# von Mangoldt sums
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MangoldtSums:
    """s1 = sum Lambda(n)/n^sigma, s2 = sum Lambda(n)/(n^sigma log n) up to T."""

    s1: float
    s2: float
    T: float
    sigma: float
    exact: bool


def _primes_up_to(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p:: p] = False
    return np.nonzero(sieve)[0]


def _mangoldt_asymptotic(log_T: float, sigma: float) -> MangoldtSums:
    # s1 ~ log T - gamma (Rosser-Schoenfeld window +-1/log T);
    # s2 <= log log T + gamma + 2/log^2 T
    return MangoldtSums(log_T - EULER_GAMMA,
                        math.log(log_T) + EULER_GAMMA + 2.0 / log_T ** 2,
                        math.exp(min(log_T, 700.0)), sigma, False)


def mangoldt_sums(T: float, sigma: float) -> MangoldtSums:
    """Exact sums over prime powers by a sieve for T <= SIEVE_CAP, asymptotic beyond."""
    if sigma < 1.0:
        raise ValueError("sigma must be >= 1")
    if T < 2.0:
        return MangoldtSums(0.0, 0.0, T, sigma, True)
    if T > SIEVE_CAP:
        return _mangoldt_asymptotic(math.log(T), sigma)
    n = int(T)
    primes = _primes_up_to(n)
    logs = np.log(primes.astype(float))
    s1 = s2 = 0.0
    r = 1
    while 2 ** r <= n:
        cut = int(round(n ** (1.0 / r))) + 1
        idx = np.searchsorted(primes, cut, side="right")
        pw = primes[:idx].astype(float) ** r
        ok = pw <= n + 0.5
        pw = pw[ok]
        inv = pw ** (-sigma)
        s1 += float(np.dot(logs[:idx][ok], inv))
        s2 += float(np.sum(inv)) / r
        r += 1
    return MangoldtSums(s1, s2, T, sigma, True)


def find_T(fp: FieldParams, c: CPolicy, alpha: float) -> float:
    """log T = ((log d_K)/l)(c + 1/alpha), the greedy threshold."""
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    cval = c.value(fp) if c.mode is CPolicyMode.QUARTER_PLUS_B else c.value()
    return fp.d * (cval + 1.0 / alpha)


def find_T_sieve(fp: FieldParams, c: CPolicy, alpha: float,
                 cap: int = 10_000_000) -> float | None:
    """Sieve bisection for the smallest log T with l*s1(T, 1) >= c log d_K + 1/(sigma-1).

    Uses the sigma=1 sums (the route the T-threshold argument takes before
    linearizing); None when no T <= cap qualifies.
    """
    cval = c.value(fp) if c.mode is CPolicyMode.QUARTER_PLUS_B else c.value()
    target = cval * fp.log_dK + fp.log_dK / alpha
    crit = lambda T: fp.l * mangoldt_sums(T, 1.0).s1 - target
    if crit(cap) < 0.0:
        return None
    lo, hi = 2.0, float(cap)
    for _ in range(80):
        mid = math.sqrt(lo * hi)
        if crit(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
        if hi / lo < 1.0 + 1e-9:
            break
    return math.log(hi)


# ---------------------------------------------------------------------------
# Residue bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResidueReport:
    """log kappa bounds: greedy assembly, Theorem-2 closed form, Louboutin baseline.

    All three are logs of the respective right sides; the closed form carries
    an unquantified O(1/log d) inside B (reported asymptotically).
    """

    log_kappa_greedy: float
    log_kappa_closed: float
    log_kappa_louboutin: float
    B: float
    alpha: float
    sigma: float
    log_T: float
    sieve_exact: bool
    annotation: str = "B carries an unquantified O(1/log d); closed form is asymptotic"


def residue_bound(fp: FieldParams, c: CPolicy) -> ResidueReport:
    """Assemble the greedy residue bound and compare with the closed forms.

    greedy: log kappa <= c*alpha + l*s2(T, sigma) + log(sigma - 1) with
    alpha = 4 sqrt(l), sigma = 1 + alpha/log d_K, log T = d(c + 1/alpha).
    closed: (l-1) log((c_base + B) e^{gamma + sqrt(2/l)} d).
    louboutin: (l-1) log(e log d_K / (2(l-1))).
    """
    B = residue_B(fp)
    l = fp.l
    alpha = 4.0 * math.sqrt(l)
    sigma = 1.0 + alpha / fp.log_dK
    cval = c.value(fp) if c.mode is CPolicyMode.QUARTER_PLUS_B else c.value()
    log_T = fp.d * (cval + 1.0 / alpha)
    if log_T <= math.log(SIEVE_CAP):
        ms = mangoldt_sums(math.exp(log_T), sigma)
    else:
        ms = _mangoldt_asymptotic(log_T, sigma)
    greedy = cval * alpha + l * ms.s2 + math.log(sigma - 1.0)
    closed = (l - 1.0) * math.log((c.base + B) * math.exp(EULER_GAMMA
                                                          + math.sqrt(2.0 / l)) * fp.d)
    louboutin = (l - 1.0) * math.log(math.e * fp.log_dK / (2.0 * (l - 1.0)))
    return ResidueReport(log_kappa_greedy=greedy, log_kappa_closed=closed,
                         log_kappa_louboutin=louboutin, B=B, alpha=alpha,
                         sigma=sigma, log_T=log_T, sieve_exact=ms.exact)


def bound_report(fp: FieldParams, c: CPolicy) -> dict:
    """The CLI-facing JSON report schema."""
    rep = theorem1_exponent(fp, c)
    out = {
        "l": fp.l,
        "log_dK": fp.log_dK,
        "c_policy": c.mode.value,
        "A": rep.constants["A"],
        "exponent": rep.exponent,
        "baseline": rep.baseline,
        "beats_baseline": rep.beats_baseline,
        "log_x_threshold": rep.exponent * fp.log_dK,
    }
    if fp.d >= math.e:
        res = residue_bound(fp, c)
        out["residue_bounds"] = {
            "greedy": res.log_kappa_greedy,
            "theorem2": res.log_kappa_closed,
            "louboutin": res.log_kappa_louboutin,
            "scale": "log_kappa",
            "B": res.B,
            "annotation": res.annotation,
        }
    else:
        out["residue_bounds"] = None
    return out
