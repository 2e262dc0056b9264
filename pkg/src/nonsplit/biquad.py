"""Biquadratic-field optimization: the delta sweep over modulus imbalance.

With q1 = q^(1-delta), q2 = q, the product character's mean must satisfy
4 log A + int_2^B (1-P(t))/t dt >= 3 with B = (2-delta) A; the integral is
capped by the pointwise product-character envelope, and the smallest feasible
A gives the interaction bound N << q^(1/(4A)).  Per delta the final exponent
is the smaller of that and the trivial single-character bound (1-delta)/(4
sqrt(e)); the worst delta is where the two branches cross.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .incexc import IncExcConfig
from .profiles import (SQRT_E, CharEnvelope, biquad_envelope_breakpoints,
                       biquad_pointwise_upper)

_FEASIBILITY_TARGET = 3.0


def biquad_integral_bound(A: float, delta: float, cfg: IncExcConfig | None = None,
                          *, per_character: bool = True,
                          e_coef: float = 2.0) -> float:
    """Integral of the product-character envelope over [2, B], B = (2-delta)A.

    Returns 0 for a degenerate range (B <= 2); always at most the trivial
    2 log(B/2).
    """
    if not SQRT_E - 1e-12 <= A <= 2.0 + 1e-12:
        raise ValueError(f"A={A} outside [sqrt(e), 2]")
    if not 0.0 <= delta <= 1.0:
        raise ValueError("delta must lie in [0, 1]")
    B = (2.0 - delta) * A
    if B <= 2.0:
        return 0.0
    cfg = cfg or IncExcConfig()
    env = CharEnvelope.from_A(A)
    f = lambda t: biquad_pointwise_upper(env, delta, t,
                                         per_character=per_character,
                                         e_coef=e_coef)
    pts = biquad_envelope_breakpoints(env, delta, per_character)
    with warnings.catch_warnings():
        # cap crossings between the declared breakpoints trip the roundoff
        # heuristic; accuracy is pinned by tests against fine trapezoids
        warnings.simplefilter("ignore", IntegrationWarning)
        return quad(f, 2.0, B, points=pts, epsabs=cfg.quad_tolerance,
                    epsrel=1e-9, limit=500)[0]


def biquad_solve_A(delta: float, cfg: IncExcConfig | None = None, *,
                   per_character: bool = True, e_coef: float = 2.0,
                   bisect_tol: float = 1e-5) -> float:
    """Smallest A in [sqrt(e), 2] with 4 log A + envelope integral >= 3.

    With per-character cancellation points the bracket starts at
    sqrt(e)/(1-delta) (below that the smaller character already contradicts,
    i.e. the trivial bound holds); the left side is increasing in A.
    """
    if not 0.0 <= delta < 1.0:
        raise ValueError("delta must lie in [0, 1)")
    lo = SQRT_E / (1.0 - delta) if per_character else SQRT_E
    if lo >= 2.0:
        raise ValueError(f"no feasible A in [sqrt(e), 2] for delta={delta}")
    lhs = lambda A: 4.0 * math.log(A) + biquad_integral_bound(
        A, delta, cfg, per_character=per_character, e_coef=e_coef)
    if lhs(lo) >= _FEASIBILITY_TARGET:
        return lo
    if lhs(2.0) < _FEASIBILITY_TARGET:
        raise ValueError(f"no feasible A in [sqrt(e), 2] for delta={delta}")
    hi = 2.0
    while hi - lo > bisect_tol:
        mid = 0.5 * (lo + hi)
        if lhs(mid) >= _FEASIBILITY_TARGET:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class BiquadReport:
    delta_grid: np.ndarray
    A_of_delta: np.ndarray
    exponent_interaction: np.ndarray
    exponent_trivial: np.ndarray
    exponent_q: np.ndarray          # min of the two branches
    exponent_q1q2: np.ndarray       # exponent_q / (2 - delta)
    worst_delta: float
    worst_exponent_q: float
    worst_exponent_q1q2: float
    delta0_exponent_q: float
    delta0_exponent_q1q2: float
    per_character: bool
    e_coef: float
    grid_step: float

    def to_csv(self) -> str:
        lines = ["delta,A,exp_interaction,exp_trivial,exp_final"]
        for d, a, ei, et, ef in zip(self.delta_grid, self.A_of_delta,
                                    self.exponent_interaction,
                                    self.exponent_trivial, self.exponent_q):
            lines.append(f"{d:.6g},{a:.8g},{ei:.8g},{et:.8g},{ef:.8g}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "worst_delta": self.worst_delta,
            "worst_exponent_q": self.worst_exponent_q,
            "worst_exponent_q1q2": self.worst_exponent_q1q2,
            "delta0_exponent_q": self.delta0_exponent_q,
            "delta0_exponent_q1q2": self.delta0_exponent_q1q2,
            "baseline_exponent_q": 1.0 / (4.0 * SQRT_E),
            "per_character": self.per_character,
            "e_coef": self.e_coef,
            "grid_step": self.grid_step,
            "exponents_rounded": {
                "q_at_worst": round(self.worst_exponent_q, 4),
                "q1q2_at_worst": round(self.worst_exponent_q1q2, 4),
                "q1q2_at_delta0": round(self.delta0_exponent_q1q2, 4),
            },
        }


def _sweep_point(args) -> tuple[float, float]:
    delta, tol, per_character, e_coef = args
    cfg = IncExcConfig(quad_tolerance=tol)
    try:
        A = biquad_solve_A(delta, cfg, per_character=per_character, e_coef=e_coef)
    except ValueError:
        A = math.nan
    return delta, A


def biquad_sweep(cfg: IncExcConfig | None = None, grid_step: float = 0.001, *,
                 delta_max: float = 0.5, per_character: bool = True,
                 e_coef: float = 2.0, workers: int | None = None) -> BiquadReport:
    """Sweep delta in [0, delta_max], solving for A(delta) at each grid point.

    exponent_q = min(1/(4A), (1-delta)/(4 sqrt(e)));
    exponent_q1q2 = exponent_q/(2-delta), whose argmax defines worst_delta
    (the crossing of the interaction and trivial branches).
    """
    if grid_step > 0.005:
        raise ValueError("grid_step must be <= 0.005")
    cfg = cfg or IncExcConfig()
    if workers is None:
        workers = int(os.environ.get("NONSPLIT_THREADS", "1"))
    deltas = np.round(np.arange(0.0, delta_max + grid_step / 2, grid_step), 10)
    jobs = [(float(d), cfg.quad_tolerance, per_character, e_coef) for d in deltas]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_sweep_point, jobs, chunksize=16))
    else:
        results = [_sweep_point(j) for j in jobs]

    A_arr = np.array([a for _, a in results])
    trivial = (1.0 - deltas) / (4.0 * SQRT_E)
    with np.errstate(invalid="ignore"):
        interact = 1.0 / (4.0 * A_arr)
    exp_q = np.where(np.isnan(interact), trivial, np.minimum(interact, trivial))
    exp_qq = exp_q / (2.0 - deltas)

    iw = int(np.nanargmax(exp_qq))
    return BiquadReport(
        delta_grid=deltas, A_of_delta=A_arr,
        exponent_interaction=interact, exponent_trivial=trivial,
        exponent_q=exp_q, exponent_q1q2=exp_qq,
        worst_delta=float(deltas[iw]),
        worst_exponent_q=float(exp_q[iw]),
        worst_exponent_q1q2=float(exp_qq[iw]),
        delta0_exponent_q=float(exp_q[0]),
        delta0_exponent_q1q2=float(exp_qq[0]),
        per_character=per_character, e_coef=e_coef, grid_step=grid_step,
    )


def sub_integral_first_piece() -> float:
    """int_2^(1+e^(1/4)) 8 log(t-1)/t dt, the opening piece of the assembly."""
    return quad(lambda t: 8.0 * math.log(t - 1.0) / t, 2.0,
                1.0 + math.exp(0.25), epsabs=1e-13, epsrel=1e-13, limit=200)[0]
