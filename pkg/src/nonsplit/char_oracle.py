"""Empirical ground truth: Kronecker symbols and least non-residue scans.

Independent of the analytic machinery; scans report empirical exponents
log(n*)/log(q) for comparison only (the analytic bounds carry inexplicit
constants and are never asserted against this data).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np


def kronecker(n: int, q: int) -> int:
    """Kronecker symbol (n|q) for q >= 1, multiplicative in both arguments."""
    if q < 1:
        raise ValueError("modulus must be >= 1")
    if q == 1:
        return 1
    if n % 2 == 0 and q % 2 == 0:
        return 0
    result = 1
    # strip the even part of q: (n|2) = 0, 1, -1 for n even, n = +-1, +-3 mod 8
    v = 0
    while q % 2 == 0:
        q //= 2
        v += 1
    if v % 2 == 1:
        r8 = n % 8
        if r8 in (1, 7):
            pass
        elif r8 in (3, 5):
            result = -result
        else:
            return 0
    if n < 0:
        n = -n
        if q % 4 == 3:
            result = -result
    # Jacobi loop for odd q
    n %= q
    while n:
        while n % 2 == 0:
            n //= 2
            if q % 8 in (3, 5):
                result = -result
        n, q = q, n
        if n % 4 == 3 and q % 4 == 3:
            result = -result
        n %= q
    return result if q == 1 else 0


@dataclass(frozen=True)
class CharSpec:
    """A scan target: a single quadratic modulus or a pair."""

    q: int
    q2: int | None = None
    fundamental: bool = False

    def __post_init__(self):
        if self.q < 3 or (self.q2 is not None and self.q2 < 3):
            raise ValueError("moduli must be >= 3")
        if self.fundamental and not _is_fundamental(self.q):
            raise ValueError(f"{self.q} is not a fundamental discriminant")

    @property
    def kind(self) -> str:
        return "quadratic" if self.q2 is None else "pair"


def _is_fundamental(d: int) -> bool:
    if d % 4 == 1:
        return _squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def _squarefree(n: int) -> bool:
    i = 2
    while i * i <= n:
        if n % (i * i) == 0:
            return False
        i += 1
    return True


_PRIME_BLOCK = 1 << 16


def primes() -> Iterator[int]:
    """Unbounded prime iterator (segmented numpy sieve)."""
    base = np.nonzero(_bool_sieve(_PRIME_BLOCK))[0]
    yield from (int(p) for p in base)
    lo = _PRIME_BLOCK
    small = base
    while True:
        hi = lo + _PRIME_BLOCK
        seg = np.ones(hi - lo, dtype=bool)
        for p in small:
            p = int(p)
            if p * p >= hi:
                break
            start = (-lo) % p
            seg[start::p] = False
        yield from (int(lo + i) for i in np.nonzero(seg)[0])
        lo = hi
        if small[-1] ** 2 < hi:
            small = np.nonzero(_bool_sieve(int(math.isqrt(hi)) + 1))[0]


def _bool_sieve(n: int) -> np.ndarray:
    s = np.ones(n, dtype=bool)
    s[:2] = False
    for p in range(2, int(n ** 0.5) + 1):
        if s[p]:
            s[p * p:: p] = False
    return s


@dataclass(frozen=True)
class LeastResult:
    """A least non-residue (or non-split) prime with its certificate."""

    q: int
    q2: int | None
    n_star: int
    certificate: tuple[int, ...]  # all smaller primes, each verified symbol == 1

    @property
    def exponent(self) -> float:
        modulus = self.q if self.q2 is None else self.q * self.q2
        return math.log(self.n_star) / math.log(modulus)


def least_nonresidue(q: int) -> LeastResult:
    """Smallest prime p with (p|q) != 1 (always exists)."""
    if q < 3:
        raise ValueError("q must be >= 3")
    checked = []
    for p in primes():
        if kronecker(p, q) != 1:
            return LeastResult(q=q, q2=None, n_star=p, certificate=tuple(checked))
        checked.append(p)


def least_nonsplit_pair(q1: int, q2: int) -> LeastResult:
    """Smallest prime p that is a non-residue for q1 or for q2."""
    if q1 < 3 or q2 < 3:
        raise ValueError("moduli must be >= 3")
    checked = []
    for p in primes():
        if kronecker(p, q1) != 1 or kronecker(p, q2) != 1:
            return LeastResult(q=q1, q2=q2, n_star=p, certificate=tuple(checked))
        checked.append(p)


def verify_certificate(res: LeastResult) -> bool:
    """Recheck: symbol 1 at every certificate prime, != 1 at n_star."""
    moduli = (res.q,) if res.q2 is None else (res.q, res.q2)
    for p in res.certificate:
        if all(kronecker(p, q) == 1 for q in moduli):
            continue
        return False
    return any(kronecker(res.n_star, q) != 1 for q in moduli)


def next_prime(n: int) -> int:
    for p in primes():
        if p > n:
            return p


@dataclass(frozen=True)
class ScanSummary:
    n_rows: int
    max_exponent: float | None   # over moduli > 300; None if none qualify
    argmax_q: int | None
    comparison_baseline: float   # 1/(4 sqrt(e)), informational only


def scan_quadratic(lo: int, hi: int) -> tuple[list[LeastResult], ScanSummary]:
    """least_nonresidue for every q in [lo, hi]; certificates verified."""
    if hi > 10_000_000:
        raise ValueError("scan range capped at 1e7")
    rows = []
    for q in range(max(lo, 3), hi + 1):
        res = least_nonresidue(q)
        if not verify_certificate(res):
            raise AssertionError(f"certificate failed at q={q}")
        rows.append(res)
    return rows, _summarize(rows)


def scan_pairs(lo: int, hi: int) -> tuple[list[LeastResult], ScanSummary]:
    """least_nonsplit_pair for q1 in [lo, hi] with q2 the next prime above q1."""
    if hi > 10_000_000:
        raise ValueError("scan range capped at 1e7")
    rows = []
    for q1 in range(max(lo, 3), hi + 1):
        res = least_nonsplit_pair(q1, next_prime(q1))
        if not verify_certificate(res):
            raise AssertionError(f"certificate failed at pair ({q1}, {res.q2})")
        rows.append(res)
    return rows, _summarize(rows)


def _summarize(rows: list[LeastResult]) -> ScanSummary:
    big = [r for r in rows if (r.q if r.q2 is None else max(r.q, r.q2)) > 300]
    if big:
        worst = max(big, key=lambda r: r.exponent)
        return ScanSummary(n_rows=len(rows), max_exponent=worst.exponent,
                           argmax_q=worst.q,
                           comparison_baseline=1.0 / (4.0 * math.sqrt(math.e)))
    return ScanSummary(n_rows=len(rows), max_exponent=None, argmax_q=None,
                       comparison_baseline=1.0 / (4.0 * math.sqrt(math.e)))


def scan_csv(rows: list[LeastResult], summary: ScanSummary) -> str:
    """CSV rows q,n_star,exponent (or q1,q2,n_star,exponent_q1q2 for pairs)."""
    pair = rows and rows[0].q2 is not None
    lines = ["q1,q2,n_star,exponent_q1q2" if pair else "q,n_star,exponent"]
    for r in rows:
        if pair:
            lines.append(f"{r.q},{r.q2},{r.n_star},{r.exponent:.6f}")
        else:
            lines.append(f"{r.q},{r.n_star},{r.exponent:.6f}")
    if summary.max_exponent is not None:
        lines.append(f"# max_exponent_q>300,{summary.max_exponent:.6f},"
                     f"baseline_informational,{summary.comparison_baseline:.6f}")
    return "\n".join(lines) + "\n"
