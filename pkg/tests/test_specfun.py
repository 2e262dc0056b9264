import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.special as sp

from nonsplit.specfun import (EULER_GAMMA, WBranch, _ein_quad, _ein_series, ein,
                              exp_integral_J, j_identity_residual, lambert_w)

INV_E = math.exp(-1.0)


# --- Lambert W -------------------------------------------------------------

def test_w_principal_at_zero():
    assert lambert_w(WBranch.PRINCIPAL, 0.0) == 0.0


def test_w_lower_branch_point():
    assert lambert_w(WBranch.LOWER, -INV_E) == -1.0


def test_w_lower_example():
    w = lambert_w(WBranch.LOWER, -0.1)
    assert abs(w - (-3.5772)) < 5e-5
    assert abs(w * math.exp(w) + 0.1) < 1e-12


def test_w_domain_errors():
    with pytest.raises(ValueError):
        lambert_w(WBranch.PRINCIPAL, -0.5)
    with pytest.raises(ValueError):
        lambert_w(WBranch.LOWER, 0.1)
    with pytest.raises(ValueError):
        lambert_w(WBranch.LOWER, 0.0)


def test_w_round_trip_bulk(rng):
    # principal on [-1/e, large], lower on [-1/e, 0)
    xs = np.concatenate([
        rng.uniform(-INV_E, 0.0, 4000),
        rng.uniform(0.0, 10.0, 3000),
        np.exp(rng.uniform(0.0, 200.0, 3000)),
    ])
    for x in xs:
        w = lambert_w(WBranch.PRINCIPAL, float(x))
        assert abs(w * math.exp(w) - x) <= 1e-12 * max(1.0, abs(x)), x
    for x in rng.uniform(-INV_E, -1e-12, 10000):
        w = lambert_w(WBranch.LOWER, float(x))
        assert abs(w * math.exp(w) - x) <= 1e-12 * max(1.0, abs(x)), x


def test_w_branch_ordering(rng):
    for x in rng.uniform(-INV_E + 1e-9, -1e-9, 300):
        w0 = lambert_w(WBranch.PRINCIPAL, float(x))
        wm = lambert_w(WBranch.LOWER, float(x))
        assert wm <= -1.0 <= w0


def test_w_against_scipy(rng):
    for x in rng.uniform(-INV_E + 1e-10, 5.0, 500):
        assert lambert_w(WBranch.PRINCIPAL, float(x)) == pytest.approx(
            sp.lambertw(x, 0).real, abs=1e-13, rel=1e-13)
    for x in rng.uniform(-INV_E + 1e-10, -1e-6, 500):
        assert lambert_w(WBranch.LOWER, float(x)) == pytest.approx(
            sp.lambertw(x, -1).real, abs=1e-13, rel=1e-13)


# --- ein = I(s) ------------------------------------------------------------

def _ein_rational_oracle(x_num, x_den, terms=60):
    """Exact-rational partial sums of sum (x)^n/(n*n!)."""
    x = Fraction(x_num, x_den)
    acc = Fraction(0)
    power = Fraction(1)
    fact = 1
    for n in range(1, terms + 1):
        power *= x
        fact *= n
        acc += power / (n * fact)
    return float(acc)


def test_ein_zero():
    assert ein(0.0) == 0.0


def test_ein_one_against_rational_oracle():
    assert ein(1.0) == pytest.approx(_ein_rational_oracle(1, 1), rel=1e-12)
    assert ein(1.0) == pytest.approx(1.3179022, abs=5e-8)


def test_ein_negative_against_rational_oracle():
    for num, den in [(-1, 1), (-5, 2), (-20, 1), (-30, 1)]:
        want = _ein_rational_oracle(num, den, terms=140)
        assert ein(num / den) == pytest.approx(want, rel=1e-11)


def test_ein_cross_check_via_J():
    # I(-1) = -J(1) - gamma - log 1
    assert ein(-1.0) == pytest.approx(-exp_integral_J(1.0) - EULER_GAMMA, rel=1e-10)


def test_ein_series_quadrature_overlap(rng):
    # relative agreement of the two internal methods on the 20 <= |s| <= 30 annulus
    for _ in range(60):
        r = rng.uniform(20.0, 30.0)
        th = rng.uniform(0.0, 2.0 * math.pi)
        s = complex(r * math.cos(th), r * math.sin(th))
        a, b = _ein_series(s), _ein_quad(s)
        assert abs(a - b) <= 1e-8 * max(1.0, abs(a)), s


def test_ein_real_in_real_out():
    assert isinstance(ein(2.5), float)
    assert isinstance(ein(2.5 + 0j), complex)


# --- J(s) ------------------------------------------------------------------

def test_J_at_one():
    # adaptive quadrature of int_1^inf e^-v / v dv, independently via scipy exp1
    assert exp_integral_J(1.0) == pytest.approx(0.2193839, abs=5e-8)
    assert exp_integral_J(1.0) == pytest.approx(float(sp.exp1(1.0)), rel=1e-11)


def test_J_large_argument_decay():
    val = exp_integral_J(40.0)
    assert 0.0 < val <= math.exp(-40.0) / 40.0 * (1.0 + 1e-6)


def test_J_cut_errors():
    with pytest.raises(ValueError):
        exp_integral_J(0.0)
    with pytest.raises(ValueError):
        exp_integral_J(-2.0)


def test_J_against_scipy_complex(rng):
    for _ in range(40):
        s = complex(rng.uniform(0.1, 10.0), rng.uniform(-10.0, 10.0))
        assert exp_integral_J(s) == pytest.approx(complex(sp.exp1(s)), rel=1e-9)


def test_transform_identity_at_two():
    assert j_identity_residual(2.0) <= 1e-10


def test_transform_identity_bulk(rng):
    # -J(s) = I(-s) + gamma + log s on Re s in [0.1, 10], |Im s| <= 10
    for _ in range(100):
        s = complex(rng.uniform(0.1, 10.0), rng.uniform(-10.0, 10.0))
        assert j_identity_residual(s) <= 1e-10, s


def test_ein_nonfinite_rejected():
    with pytest.raises(ValueError):
        ein(math.inf)
    with pytest.raises(ValueError):
        exp_integral_J(complex(math.nan, 1.0))
