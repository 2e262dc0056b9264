import math

import numpy as np
import pytest

from nonsplit.profiles import (SQRT_E, CharEnvelope, Profile, Segment, SegmentKind,
                               biquad_pointwise_upper, breakpoints,
                               constant_profile, cubic_L, cubic_U,
                               envelope_lower_1mP, envelope_upper_1mP,
                               eval_profile, eval_profile_jump_averaged,
                               extremal_character_profile, extremal_profile,
                               format_profile_text, interval_mass_lower,
                               parse_profile_text)

E14 = math.exp(0.25)


# --- Profile evaluation ------------------------------------------------------

def test_extremal_profile_values():
    p = extremal_profile(1.0, 3.0)
    assert eval_profile(p, 0.5) == 1.0
    assert eval_profile(p, 1.5) == -1.0


def test_eval_right_continuous_and_jump_average():
    p = extremal_profile(2.0, 3.0)
    assert eval_profile(p, 1.0) == -1.0          # right-continuous at the jump
    assert eval_profile_jump_averaged(p, 1.0) == 0.5   # (2 + -1)/2


def test_eval_domain_errors():
    p = extremal_profile(1.0, 3.0)
    with pytest.raises(ValueError):
        eval_profile(p, -0.1)
    with pytest.raises(ValueError):
        eval_profile(p, 3.1)


def test_profile_contiguity_enforced():
    with pytest.raises(ValueError):
        Profile(k=1.0, segments=(
            Segment(0.0, 1.0, SegmentKind.CONSTANT, c=1.0),
            Segment(1.5, 2.0, SegmentKind.CONSTANT, c=-1.0),
        ))


def test_clamping():
    p = Profile(k=1.0, segments=(Segment(0.0, 2.0, SegmentKind.CONSTANT, c=7.0),))
    assert eval_profile(p, 0.3) == 1.0
    p2 = Profile(k=1.0, segments=(Segment(0.0, 2.0, SegmentKind.CONSTANT, c=-7.0),))
    assert eval_profile(p2, 0.3) == -1.0


def test_extremal_character_profile_shape():
    prof = extremal_character_profile(1.7)
    assert eval_profile(prof, 0.5) == 1.0
    assert eval_profile(prof, 1.2) == -1.0
    assert eval_profile(prof, 1.9) == 1.0
    t = 2.4
    assert eval_profile(prof, t) == pytest.approx(min(1.0, 1 - 4 * math.log(t - 1)))
    vals = [eval_profile(prof, t) for t in np.linspace(0, prof.t_max, 500)]
    assert all(-1.0 <= v <= 1.0 for v in vals)


# --- Quadratic character envelopes -------------------------------------------

def test_envelope_lower_examples():
    env = CharEnvelope.from_A(SQRT_E)
    assert envelope_lower_1mP(env, 2.0) == pytest.approx(0.0, abs=1e-12)
    assert envelope_lower_1mP(env, 2.5) == pytest.approx(
        (4 / 2.5) * math.log(1.5), rel=1e-12)
    e17 = CharEnvelope.from_A(1.7)
    want = (4 / 3.5) * math.log(1.7 / 1.8) - 2 * e17.E - (2 / 3) * 0.5 ** 2
    assert envelope_lower_1mP(e17, 3.5) == pytest.approx(want, rel=1e-12)


def test_envelope_lower_never_exceeds_trivial(rng):
    for _ in range(200):
        A = rng.uniform(SQRT_E, 2.0)
        t = rng.uniform(2.0, 4.0)
        assert envelope_lower_1mP(CharEnvelope.from_A(A), t) <= 2.0 / t + 1e-15


def test_envelope_upper_examples():
    env = CharEnvelope.from_A(SQRT_E)
    assert envelope_upper_1mP(env, 2.0) == 0.0
    t = 1.0 + SQRT_E
    # both pieces meet at t = 1+A with value (4/(1+A)) log A
    want = (4.0 / t) * math.log(SQRT_E)
    assert envelope_upper_1mP(env, t) == pytest.approx(want, rel=1e-12)
    assert envelope_upper_1mP(env, t - 1e-9) == pytest.approx(want, abs=1e-7)
    # at t = 2A the item-4 form hits log(1) = 0 and the [0, 2/t] clamp keeps 0
    e17 = CharEnvelope.from_A(1.7)
    assert envelope_upper_1mP(e17, 3.4) == 0.0


def test_envelope_lower_below_upper(rng):
    for _ in range(100):
        A = rng.uniform(SQRT_E, 2.0)
        env = CharEnvelope.from_A(A)
        t = rng.uniform(2.0, 2.0 * A)
        assert envelope_lower_1mP(env, t) <= envelope_upper_1mP(env, t) + 1e-12


def test_interval_mass():
    env = CharEnvelope.from_A(1.7)
    assert interval_mass_lower(env, 1.0, 1.7) == pytest.approx(
        2 * math.log(1.7) - env.E, rel=1e-12)  # equals 1 by E = 2logA - 1
    assert interval_mass_lower(env, 1.0, 1.7) == pytest.approx(1.0, rel=1e-12)
    assert interval_mass_lower(CharEnvelope.from_A(SQRT_E), 1.3, 1.3) == 0.0
    e2 = CharEnvelope.from_A(2.0)
    assert interval_mass_lower(e2, 1.2, 1.8) == pytest.approx(
        2 * math.log(1.5) - (2 * math.log(2) - 1), rel=1e-12)
    with pytest.raises(ValueError):
        interval_mass_lower(env, 0.5, 1.2)


# --- Cubic envelopes ----------------------------------------------------------

def test_cubic_U_cases():
    env = CharEnvelope.from_A(1.6625)
    assert cubic_U(env, 1.8) == 1.0
    t = 3.5
    for m in (2, 3):
        want = min(1.0, 1 - 2 * math.log(env.A / (t - env.A)) + env.E * t
                   + (1 / 3) * t * (t - 3) ** m)
        assert cubic_U(env, t, m) == pytest.approx(want, rel=1e-12)
    with pytest.raises(ValueError):
        cubic_U(env, 1.0)
    with pytest.raises(ValueError):
        cubic_U(env, 2.0, m=4)


def test_cubic_U_continuity():
    env = CharEnvelope.from_A(1.6625)
    # at t=2 and t=1+A the adjacent forms agree (up to the min-cap)
    assert cubic_U(env, 2.0) == pytest.approx(cubic_U(env, 2.0 + 1e-10), abs=1e-8)
    tA = 1.0 + env.A
    assert cubic_U(env, tA) == pytest.approx(cubic_U(env, tA + 1e-10), abs=1e-8)


def test_cubic_L_cases():
    env = CharEnvelope.from_A(1.6625)
    assert cubic_L(env, 1.1) == 0.0
    assert cubic_L(env, 1.9) == 1.0
    assert cubic_L(env, 2.5) == pytest.approx(min(1.0, 1 - 2 * math.log(1.5)))
    assert cubic_L(env, 3.0) == pytest.approx(
        min(1.0, 1 - 2 * math.log(env.A / (3.0 - env.A))))
    with pytest.raises(ValueError):
        cubic_L(env, 0.5)


# --- Breakpoints ---------------------------------------------------------------

def test_breakpoint_equations():
    env = CharEnvelope.from_A(1.773)
    t0, t1, t2 = breakpoints(env)
    assert abs(2 * (1 - 2 * math.log(t0 - 1) + env.E * t0) - 1) < 1e-9
    assert abs(2 * (1 - 2 * math.log(env.A / (t1 - env.A)) + env.E * t1) - 1) < 1e-9
    assert t2 == pytest.approx(env.A * (1 + E14) / E14, rel=1e-14)


def test_breakpoint_ordering_where_defined():
    # ordering t0 < 1+A < t1 < t2 < 2A on the operating range of A; for A
    # near 2 the c2/c3 caps never beat trivial and t0/t1 do not exist
    for A in np.linspace(SQRT_E + 0.01, 1.85, 20):
        env = CharEnvelope.from_A(float(A))
        t0, t1, t2 = breakpoints(env)
        assert t0 is not None and t1 is not None, A
        assert t0 < 1.0 + A < t1 < t2 < 2.0 * A, A
    t0, t1, _ = breakpoints(CharEnvelope.from_A(2.0))
    assert t0 is None and t1 is None


# --- Biquad pointwise envelope ---------------------------------------------------

def test_biquad_envelope_at_two():
    env = CharEnvelope.from_A(1.773)
    assert biquad_pointwise_upper(env, 0.0, 2.0) == pytest.approx(0.0, abs=1e-12)


def test_biquad_envelope_trivial_gap():
    # midway between 1+e^(1/4) and t0 only the trivial cap applies
    env = CharEnvelope.from_A(1.773)
    t0, _, _ = breakpoints(env)
    t = 0.5 * (1.0 + E14 + t0)
    assert biquad_pointwise_upper(env, 0.0, t) == pytest.approx(2.0 / t, rel=1e-12)


def test_biquad_envelope_first_piece():
    # on [2, 1+e^(1/4)] the 8log(t-1)/t cap is active
    env = CharEnvelope.from_A(1.773)
    t = 2.1
    assert biquad_pointwise_upper(env, 0.0, t) == pytest.approx(
        8 * math.log(t - 1) / t, rel=1e-12)


def test_biquad_envelope_domain():
    env = CharEnvelope.from_A(1.773)
    with pytest.raises(ValueError):
        biquad_pointwise_upper(env, 0.0, 1.9)
    with pytest.raises(ValueError):
        biquad_pointwise_upper(env, 0.2, 3.4)  # beyond B = 1.8*A


def test_biquad_envelope_shared_vs_per_character_at_delta0():
    env = CharEnvelope.from_A(1.78)
    for t in np.linspace(2.0, 2 * 1.78 - 1e-9, 50):
        a = biquad_pointwise_upper(env, 0.0, float(t), per_character=True)
        b = biquad_pointwise_upper(env, 0.0, float(t), per_character=False)
        assert a == pytest.approx(b, abs=1e-14)


# --- CharEnvelope validation ------------------------------------------------------

def test_envelope_invariants():
    env = CharEnvelope.from_A(SQRT_E)
    assert env.E == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(ValueError):
        CharEnvelope.from_A(1.0)
    with pytest.raises(ValueError):
        CharEnvelope(A=1.7, E=0.5)


# --- Profile text format -----------------------------------------------------------

def test_profile_text_round_trip():
    prof = extremal_character_profile(1.7)
    text = format_profile_text(prof)
    back = parse_profile_text(text)
    assert back.k == prof.k
    for t in np.linspace(0.0, prof.t_max, 300):
        assert eval_profile(back, float(t)) == eval_profile(prof, float(t))


def test_profile_text_parse_errors():
    with pytest.raises(ValueError):
        parse_profile_text("0 1 constant 1\n")  # no k anywhere
    with pytest.raises(ValueError):
        parse_profile_text("k 1\n0 1 bogus 1\n")


def test_profile_text_comments_and_directives():
    text = "# a comment\nk 2\nlower_clamp -1\n0 1 constant 2\n1 3 constant -1\n"
    p = parse_profile_text(text)
    assert p.k == 2.0 and eval_profile(p, 2.0) == -1.0


def test_constant_profile():
    p = constant_profile(2.0, 2.0, 4.0)
    assert eval_profile(p, 3.3) == 2.0
