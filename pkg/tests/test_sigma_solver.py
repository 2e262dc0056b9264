import math

import numpy as np
import pytest

from nonsplit.profiles import (Profile, Segment, SegmentKind, constant_profile,
                               cubic_bound_profiles, extremal_profile)
from nonsplit.sigma_solver import (compare_profiles, first_zero,
                                   solve_convolution, solve_extremal_dde)

SQRT_E = math.sqrt(math.e)


# --- convolution solver -------------------------------------------------------

def test_conv_k1_closed_form():
    p = extremal_profile(1.0, 3.0)
    sol = solve_convolution(p, 1.0, 2.0, 1e-3)
    # sigma = 1 - 2 log u on [1, 2]
    for u in (1.2, 1.5, 1.9):
        assert sol.value_at(u) == pytest.approx(1 - 2 * math.log(u), abs=1e-6)
    assert sol.value_at(1.5) == pytest.approx(0.18907, abs=1e-5)


def test_conv_initial_condition_exact():
    p = extremal_profile(3.0, 2.0)
    sol = solve_convolution(p, 3.0, 1.5, 1e-3)
    assert sol.value_at(0.5) == 0.25
    u = sol.u[sol.u <= 1.0]
    assert np.array_equal(sol.values[: len(u)], u ** 2)


def test_conv_constant_profile_growth():
    # P == k keeps sigma = u^(k-1) exactly
    p = constant_profile(2.0, 2.0, 5.0)
    sol = solve_convolution(p, 2.0, 4.0, 1e-3)
    assert np.max(np.abs(sol.values - sol.u)) < 1e-9


def test_conv_validation():
    p = extremal_profile(1.0, 2.0)
    with pytest.raises(ValueError):
        solve_convolution(p, 1.0, 3.0, 1e-3)  # profile domain too short
    with pytest.raises(ValueError):
        solve_convolution(p, 1.0, 1.5, 5e-3)  # step too large
    with pytest.raises(ValueError):
        solve_convolution(extremal_profile(1.0, 60.0), 1.0, 55.0, 1e-3)


def test_sigma_bounded_by_power_growth():
    # sigma <= u^(k-1) up to the solver's own discretization error at the jump
    for k in (1.0, 2.0, 3.0):
        sol = solve_convolution(extremal_profile(k, 4.0), k, 3.5, 1e-3)
        assert np.all(sol.values <= sol.u ** (k - 1.0) + sol.step)


# --- extremal DDE ---------------------------------------------------------------

def test_dde_k1_first_zero_sqrt_e():
    sol = solve_extremal_dde(1.0, 3.0, 1e-4)
    z = first_zero(sol)
    assert z == pytest.approx(SQRT_E, abs=1e-6)


def test_dde_tau_initial_condition():
    sol = solve_extremal_dde(4.0, 5.0, 1e-3)
    assert np.all(sol.values[sol.u <= 1.0] == 1.0)


def test_dde_tau_positive_decreasing_before_zero(dde_cache):
    sol = dde_cache(10.0, 15.0)
    z = first_zero(sol)
    n = int(z / sol.step) - 1
    seg = sol.values[round(1.0 / sol.step): n]
    assert np.all(seg > 0)
    assert np.all(np.diff(seg) <= 1e-15)


def test_dde_step_warning():
    with pytest.warns(RuntimeWarning):
        solve_extremal_dde(30.0, 5.0, 1e-3)


def test_dde_matches_convolution():
    # the two solvers agree on the extremal profile within 10*step
    step = 1e-3
    for k in (1.0, 2.0, 3.0, 5.0):
        import warnings
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            dde = solve_extremal_dde(k, min(2.0 * k, 10.0 * k), step)
        z = first_zero(dde) or 2.0 * k
        u_hi = min(z, 2.0 * k)
        conv = solve_convolution(extremal_profile(k, u_hi + 1.0), k, u_hi, step)
        n = len(conv.values)
        sig_dde = dde.sigma()[:n]
        diff = np.max(np.abs(sig_dde - conv.values))
        assert diff <= 10.0 * step, (k, diff)


def test_dde_normalized_vs_direct():
    # tau-integration and direct sigma-integration agree to relative 1e-6
    k = 3.0
    tau_sol = solve_extremal_dde(k, 6.0, 1e-3, normalized=True)
    sig_sol = solve_extremal_dde(k, 6.0, 1e-3, normalized=False)
    sig_from_tau = tau_sol.sigma()
    ref = sig_sol.values
    mask = np.abs(ref) > 1e-6 * sig_sol.u ** (k - 1.0)
    rel = np.abs(sig_from_tau[mask] - ref[mask]) / np.abs(ref[mask])
    assert np.max(rel) < 1e-6


def test_dde_validation():
    with pytest.raises(ValueError):
        solve_extremal_dde(2.0, 25.0, 1e-3)  # u_max > 10k
    with pytest.raises(ValueError):
        solve_extremal_dde(0.5, 2.0, 1e-3)


# --- first_zero ------------------------------------------------------------------

def test_first_zero_none_for_positive_profile():
    sol = solve_convolution(constant_profile(2.0, 2.0, 4.0), 2.0, 3.0, 1e-3)
    assert first_zero(sol) is None


def test_first_zero_within_step():
    sol = solve_extremal_dde(1.0, 2.0, 1e-3)
    assert first_zero(sol) == pytest.approx(SQRT_E, abs=1e-3)


# --- conversions / export ---------------------------------------------------------

def test_sigma_tau_round_trip():
    sol = solve_extremal_dde(3.0, 4.0, 1e-3)
    sig = sol.sigma()
    tau = sol.tau()
    mid = len(sig) // 2
    u = sol.u[mid]
    assert sig[mid] == pytest.approx(tau[mid] * u ** 2, rel=1e-12)
    assert sig[0] == 0.0 and tau[0] == 1.0


def test_csv_export():
    sol = solve_extremal_dde(1.0, 1.5, 1e-2)
    csv = sol.to_csv()
    lines = csv.strip().splitlines()
    assert lines[0] == "u,sigma,tau"
    assert len(lines) == len(sol.u) + 1


# --- monotonicity in P -------------------------------------------------------------

def test_compare_equal_profiles():
    p = extremal_profile(1.0, 3.0)
    rep = compare_profiles(p, p, 1.0, 2.5)
    assert rep.ok and rep.max_excess <= 1e-12


def _bump_profile(k, t_max, a, width, delta):
    return Profile(k=k, segments=(
        Segment(0.0, 1.0, SegmentKind.CONSTANT, c=k),
        Segment(1.0, a, SegmentKind.CONSTANT, c=-1.0),
        Segment(a, a + width, SegmentKind.CONSTANT, c=-1.0 + delta),
        Segment(a + width, t_max, SegmentKind.CONSTANT, c=-1.0),
    ))


def test_compare_extremal_vs_bump():
    p = extremal_profile(1.0, 4.0)
    p_sharp = _bump_profile(1.0, 4.0, 1.25, 0.25, 0.6)
    rep = compare_profiles(p, p_sharp, 1.0, 3.0)
    assert rep.ok, rep


def test_compare_cubic_envelope_profiles():
    p_low, p_high = cubic_bound_profiles(1.6625, 3.3)
    rep = compare_profiles(p_low, p_high, 2.0, 3.2)
    assert rep.ok, rep


def test_compare_detects_precondition_violation():
    p = extremal_profile(1.0, 3.0)
    worse = _bump_profile(1.0, 3.0, 1.25, 0.25, -0.5)  # dips below p somewhere
    with pytest.raises(ValueError):
        compare_profiles(p, worse, 1.0, 2.5)


def test_compare_random_pairs_small(rng):
    # small randomized version of the acceptance harness
    grid = np.round(np.arange(1.0, 3.01, 0.25), 10)
    for _ in range(5):
        k = float(rng.integers(1, 3))
        base_vals = rng.uniform(-1.0, k, len(grid) - 1)
        bumps = rng.uniform(0.0, 1.0, len(grid) - 1) * (rng.random(len(grid) - 1) < 0.5)
        segs_lo = [Segment(0.0, 1.0, SegmentKind.CONSTANT, c=k)]
        segs_hi = [Segment(0.0, 1.0, SegmentKind.CONSTANT, c=k)]
        for i in range(len(grid) - 1):
            lo_v = float(base_vals[i])
            hi_v = float(min(lo_v + bumps[i], k))
            segs_lo.append(Segment(grid[i], grid[i + 1], SegmentKind.CONSTANT, c=lo_v))
            segs_hi.append(Segment(grid[i], grid[i + 1], SegmentKind.CONSTANT, c=hi_v))
        p = Profile(k=k, segments=tuple(segs_lo))
        ps = Profile(k=k, segments=tuple(segs_hi))
        rep = compare_profiles(p, ps, k, 3.0)
        assert rep.ok, (k, rep)
