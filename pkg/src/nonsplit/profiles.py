"""Piecewise prime-average functions P(t) and extremal-character envelopes.

A Profile is a clamped piecewise-analytic function on [0, t_max] built from a
small set of segment forms (constants, log(t-1)-type, log(A/(t-A))-type, and
the cubic tail variant).  CharEnvelope carries the cancellation point A of a
quadratic character normalized so that y^A = q^(1/4), together with
E = 2 log A - 1 measuring its deviation from the classical sqrt(e) threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

SQRT_E = math.sqrt(math.e)
_E14 = math.exp(0.25)  # e^(1/4)


class SegmentKind(Enum):
    CONSTANT = "constant"
    LOG_TMINUS1 = "log_tminus1"
    LOG_A_OVER_TMINUSA = "log_AoverTminusA"
    CUBIC_TAIL = "cubic_tail"


@dataclass(frozen=True)
class Segment:
    """One piece of a Profile on [t_start, t_end).

    Forms:
      constant            -> c
      log_tminus1         -> a + b*log(t-1) + e*t
      log_AoverTminusA    -> a + b*log(A/(t-A)) + e*t
      cubic_tail          -> a + b*log(A/(t-A)) + e*t + g*t*(t-3)^m
    """

    t_start: float
    t_end: float
    kind: SegmentKind
    c: float = 0.0
    a: float = 0.0
    b: float = 0.0
    e: float = 0.0
    g: float = 0.0
    m: int = 2
    A: float = math.nan

    def raw_value(self, t: float) -> float:
        if self.kind is SegmentKind.CONSTANT:
            return self.c
        if self.kind is SegmentKind.LOG_TMINUS1:
            return self.a + self.b * math.log(t - 1.0) + self.e * t
        val = self.a + self.b * math.log(self.A / (t - self.A)) + self.e * t
        if self.kind is SegmentKind.CUBIC_TAIL:
            val += self.g * t * (t - 3.0) ** self.m
        return val


@dataclass(frozen=True)
class Profile:
    """Clamped piecewise prime-average function on [0, t_max].

    Evaluation is right-continuous at interior breakpoints and every value is
    clamped into [lower_clamp, k].
    """

    k: float
    segments: tuple[Segment, ...]
    lower_clamp: float = -1.0

    def __post_init__(self):
        if not self.segments:
            raise ValueError("Profile needs at least one segment")
        prev_end = self.segments[0].t_start
        if prev_end != 0.0:
            raise ValueError("segments must start at t=0")
        for seg in self.segments:
            if seg.t_start != prev_end:
                raise ValueError("segments must be contiguous and ordered")
            if seg.t_end <= seg.t_start:
                raise ValueError("empty segment")
            prev_end = seg.t_end

    @property
    def t_max(self) -> float:
        return self.segments[-1].t_end

    def breakpoints(self) -> list[float]:
        return [s.t_start for s in self.segments[1:]]


def _find_segment(p: Profile, t: float) -> Segment:
    # right-continuous: pick the segment with t_start <= t < t_end,
    # the final segment also owning t == t_max
    lo, hi = 0, len(p.segments) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if t < p.segments[mid].t_end:
            hi = mid
        else:
            lo = mid + 1
    return p.segments[lo]


def eval_profile(p: Profile, t: float) -> float:
    """Clamped value of the profile at t; errors outside [0, t_max]."""
    if not 0.0 <= t <= p.t_max:
        raise ValueError(f"t={t} outside profile domain [0, {p.t_max}]")
    seg = _find_segment(p, t)
    return min(p.k, max(p.lower_clamp, seg.raw_value(t)))


def eval_profile_jump_averaged(p: Profile, t: float) -> float:
    """Like eval_profile but averaging the one-sided limits at breakpoints.

    The convolution solver uses this for trapezoid nodes that land exactly on
    a segment boundary, preserving O(h^2) across jumps.
    """
    if not 0.0 <= t <= p.t_max:
        raise ValueError(f"t={t} outside profile domain [0, {p.t_max}]")
    clamp = lambda v: min(p.k, max(p.lower_clamp, v))
    for seg in p.segments[1:]:
        if abs(t - seg.t_start) < 1e-12:
            left = _find_segment(p, math.nextafter(seg.t_start, 0.0))
            return 0.5 * (clamp(left.raw_value(t)) + clamp(seg.raw_value(t)))
    return eval_profile(p, t)


# ---------------------------------------------------------------------------
# Canonical profiles
# ---------------------------------------------------------------------------

def extremal_profile(k: float, t_max: float) -> Profile:
    """P = k on [0,1] and -1 beyond: the extremal configuration."""
    if t_max <= 1.0:
        raise ValueError("t_max must exceed 1")
    return Profile(k=k, segments=(
        Segment(0.0, 1.0, SegmentKind.CONSTANT, c=k),
        Segment(1.0, t_max, SegmentKind.CONSTANT, c=-1.0),
    ))


def constant_profile(k: float, value: float, t_max: float) -> Profile:
    return Profile(k=k, segments=(Segment(0.0, t_max, SegmentKind.CONSTANT, c=value),))


def extremal_character_profile(A: float, t_max: float | None = None) -> Profile:
    """Prime average of an extremal quadratic character cancelling at y^A.

    +1 up to the split range, -1 on (1, A], +1 again on (A, 2], then the
    envelope shapes min(1, 1-4log(t-1)) and min(1, 1-4log(A/(t-A))), all
    clamped into [-1, 1].  Domain ends at 2A.
    """
    if not SQRT_E - 1e-12 <= A <= 2.0 + 1e-12:
        raise ValueError("A must lie in [sqrt(e), 2]")
    t_max = 2.0 * A if t_max is None else t_max
    if t_max > 2.0 * A + 1e-12:
        raise ValueError("extremal character profile is defined up to 2A")
    segs = [
        Segment(0.0, 1.0, SegmentKind.CONSTANT, c=1.0),
        Segment(1.0, A, SegmentKind.CONSTANT, c=-1.0),
        Segment(A, 2.0, SegmentKind.CONSTANT, c=1.0),
        Segment(2.0, 1.0 + A, SegmentKind.LOG_TMINUS1, a=1.0, b=-4.0),
        Segment(1.0 + A, 2.0 * A, SegmentKind.LOG_A_OVER_TMINUSA, a=1.0, b=-4.0, A=A),
    ]
    out = [s for s in segs if s.t_start < t_max]
    last = out[-1]
    if last.t_end > t_max:
        out[-1] = Segment(last.t_start, t_max, last.kind, c=last.c, a=last.a,
                          b=last.b, e=last.e, g=last.g, m=last.m, A=last.A)
    return Profile(k=1.0, segments=tuple(out))


def cubic_bound_profiles(A: float, u_max: float, m: int = 2) -> tuple[Profile, Profile]:
    """Profiles sandwiching the cubic-case P: (-U extended, -L extended).

    With -P <= U and -P >= L, the pair (p_low, p_high) = (-U, -L) satisfies
    p_low <= P <= p_high; both equal k=2 on [0,1].  Used as a monotonicity
    harness.
    """
    env = CharEnvelope.from_A(A)
    lo = [Segment(0.0, 1.0, SegmentKind.CONSTANT, c=2.0),
          Segment(1.0, 2.0, SegmentKind.CONSTANT, c=-1.0)]
    hi = [Segment(0.0, 1.0, SegmentKind.CONSTANT, c=2.0),
          Segment(1.0, A, SegmentKind.CONSTANT, c=0.0),
          Segment(A, 2.0, SegmentKind.CONSTANT, c=-1.0)]
    if u_max > 2.0:
        # -U = -min(1, 1-2log(t-1)+Et) = max(-1, -1+2log(t-1)-Et); the clamp
        # supplies the max, the segment the inner form
        lo.append(Segment(2.0, min(1.0 + A, u_max), SegmentKind.LOG_TMINUS1,
                          a=-1.0, b=2.0, e=-env.E))
        hi.append(Segment(2.0, min(1.0 + A, u_max), SegmentKind.LOG_TMINUS1,
                          a=-1.0, b=2.0))
    if u_max > 1.0 + A:
        end3 = min(3.0, u_max)
        lo.append(Segment(1.0 + A, end3, SegmentKind.LOG_A_OVER_TMINUSA,
                          a=-1.0, b=2.0, e=-env.E, A=A))
        hi.append(Segment(1.0 + A, min(2.0 * A, u_max), SegmentKind.LOG_A_OVER_TMINUSA,
                          a=-1.0, b=2.0, A=A))
        if u_max > 2.0 * A:
            hi.append(Segment(2.0 * A, u_max, SegmentKind.CONSTANT, c=0.0))
    if u_max > 3.0:
        lo.append(Segment(3.0, min(4.0, u_max), SegmentKind.CUBIC_TAIL,
                          a=-1.0, b=2.0, e=-env.E, g=-1.0 / 3.0, m=m, A=A))
    p_low = Profile(k=2.0, segments=tuple(lo))
    p_high = Profile(k=2.0, segments=tuple(hi))
    return p_low, p_high


# ---------------------------------------------------------------------------
# Quadratic-character envelopes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CharEnvelope:
    """Cancellation data of a quadratic character: sqrt(e) <= A <= 2, E = 2logA - 1."""

    A: float
    E: float = field(default=math.nan)

    def __post_init__(self):
        if not SQRT_E - 1e-12 <= self.A <= 2.0 + 1e-12:
            raise ValueError(f"A={self.A} outside [sqrt(e), 2]")
        expected = 2.0 * math.log(self.A) - 1.0
        if math.isnan(self.E):
            object.__setattr__(self, "E", expected)
        elif abs(self.E - expected) > 1e-9:
            raise ValueError("E must equal 2 log A - 1")

    @classmethod
    def from_A(cls, A: float) -> "CharEnvelope":
        return cls(A=A)


def envelope_lower_1mP(env: CharEnvelope, t: float) -> float:
    """Lower bound on (1 - P(t))/t for a quadratic character, t in [2, 4].

    Capped above by the trivial 2/t; may be negative (vacuous) where the
    envelope gives no information.
    """
    A, E = env.A, env.E
    if not 2.0 <= t <= 4.0:
        raise ValueError(f"t={t} outside [2, 4]")
    if t <= 1.0 + A:
        val = (4.0 / t) * math.log(t - 1.0) - 2.0 * E
    elif t <= 3.0:
        val = (4.0 / t) * math.log(A / (t - A)) - 2.0 * E
    else:
        val = (4.0 / t) * math.log(A / (t - A)) - 2.0 * E \
            - (2.0 / 3.0) * (t - 3.0) ** 2
    return min(val, 2.0 / t)


def envelope_upper_1mP(env: CharEnvelope, t: float) -> float:
    """Upper bound on (1 - P(t))/t for a quadratic character, t in [2, 2A]."""
    A = env.A
    if not 2.0 <= t <= 2.0 * A + 1e-12:
        raise ValueError(f"t={t} outside [2, 2A]")
    if t <= 1.0 + A:
        val = (4.0 / t) * math.log(t - 1.0)
    else:
        val = (4.0 / t) * math.log(A / (t - A))
    return min(max(val, 0.0), 2.0 / t)


def interval_mass_lower(env: CharEnvelope, a: float, b: float) -> float:
    """Lower bound for int_a^b (1-P(t))/t dt on (a, b) inside (1, A]."""
    if not (1.0 - 1e-12 <= a <= b <= env.A + 1e-12):
        raise ValueError(f"interval ({a}, {b}) not inside (1, A)")
    return max(2.0 * math.log(b / a) - env.E, 0.0)


def cubic_U(env: CharEnvelope, t: float, m: int = 2) -> float:
    """Upper envelope for -P(t) in the cubic case, t in [A, 4].

    The tail exponent m defaults to 2 (the derivation's (2/3)(t-3)^2 form);
    m=3 reproduces the displayed piecewise definition.
    """
    if m not in (2, 3):
        raise ValueError("m must be 2 or 3")
    A, E = env.A, env.E
    if not A - 1e-12 <= t <= 4.0 + 1e-12:
        raise ValueError(f"t={t} outside [A, 4]")
    if t <= 2.0:
        return 1.0
    if t <= 1.0 + A:
        return min(1.0, 1.0 - 2.0 * math.log(t - 1.0) + E * t)
    if t <= 3.0:
        return min(1.0, 1.0 - 2.0 * math.log(A / (t - A)) + E * t)
    return min(1.0, 1.0 - 2.0 * math.log(A / (t - A)) + E * t
               + (1.0 / 3.0) * t * (t - 3.0) ** m)


def cubic_L(env: CharEnvelope, t: float) -> float:
    """Lower envelope for -P(t) in the cubic case, t in [1, 2A]."""
    A = env.A
    if not 1.0 - 1e-12 <= t <= 2.0 * A + 1e-12:
        raise ValueError(f"t={t} outside [1, 2A]")
    if t <= A:
        return 0.0
    if t <= 2.0:
        return 1.0
    if t <= 1.0 + A:
        return min(1.0, 1.0 - 2.0 * math.log(t - 1.0))
    return min(1.0, 1.0 - 2.0 * math.log(A / (t - A)))


def _bisect(f, lo: float, hi: float, tol: float = 1e-10) -> float:
    flo = f(lo)
    if flo == 0.0:
        return lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol:
            return mid
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (flo > 0) == (fm > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def breakpoints(env: CharEnvelope) -> tuple[float | None, float | None, float]:
    """(t0, t1, t2) where the product-character caps cross the trivial 2/t.

    t0 solves 2(1 - 2log(t-1) + E t) = 1 on (2, 1+A); t1 solves the
    log(A/(t-A)) analogue on (1+A, 3); t2 = A(1+e^(1/4))/e^(1/4) in closed
    form.  t0/t1 are None when the defining equation has no root (the cap
    never beats trivial, which happens for A near 2).
    """
    A, E = env.A, env.E
    f0 = lambda t: 2.0 * (1.0 - 2.0 * math.log(t - 1.0) + E * t) - 1.0
    f1 = lambda t: 2.0 * (1.0 - 2.0 * math.log(A / (t - A)) + E * t) - 1.0
    t0 = t1 = None
    a, b = 2.0 + 1e-12, 1.0 + A
    if f0(a) * f0(b) < 0:
        t0 = _bisect(f0, a, b)
    a, b = 1.0 + A + 1e-12, 3.0
    if f1(a) * f1(b) < 0:
        t1 = _bisect(f1, a, b)
    t2 = A * (1.0 + _E14) / _E14
    return t0, t1, t2


# ---------------------------------------------------------------------------
# Biquadratic product-character envelope
# ---------------------------------------------------------------------------

def _char_cap_1mP(t: float, a: float) -> float:
    """Upper bound on 1 - P_chi(t) for a character cancelling at y^a; inf if none."""
    if a < SQRT_E - 1e-9:
        return math.inf
    if 2.0 <= t <= 1.0 + a:
        return 4.0 * math.log(t - 1.0)
    if 1.0 + a < t <= 2.0 * a:
        return 4.0 * math.log(a / (t - a))
    return math.inf


def _char_floor_1mP(t: float, a: float, e_coef: float) -> float:
    """Lower bound on 1 - P_chi(t); -inf if none.

    e_coef scales the E-penalty: 2.0 is the envelope lemma as proved; 1.0 is
    the half-penalty variant matching the source's final biquadratic numbers.
    """
    if a < SQRT_E - 1e-9:
        return -math.inf
    E = 2.0 * math.log(a) - 1.0
    if 2.0 <= t <= 1.0 + a:
        return 4.0 * math.log(t - 1.0) - e_coef * E * t
    if 1.0 + a < t <= 3.0:
        return 4.0 * math.log(a / (t - a)) - e_coef * E * t
    if 3.0 < t <= 4.0:
        return 4.0 * math.log(a / (t - a)) - e_coef * E * t \
            - (2.0 / 3.0) * (t - 3.0) ** 2 * t
    return -math.inf


def pair_cap_1mP(t: float, a1: float, a2: float, e_coef: float = 2.0) -> float:
    """Pointwise cap on 1 - P(t) for the product of two quadratic characters.

    Uses the prime-mass decomposition P = S1 + S-1 - S1,-1 - S-1,1:
    1-P <= (1-P1) + (1-P2) unconditionally, and P+1 >= |P1+P2| gives
    1-P <= 2 + b1 + b2 whenever both caps b_i on P_i sum negative.
    """
    caps = [2.0]
    u1 = min(_char_cap_1mP(t, a1), 2.0)
    u2 = min(_char_cap_1mP(t, a2), 2.0)
    caps.append(u1 + u2)
    f1 = _char_floor_1mP(t, a1, e_coef)
    f2 = _char_floor_1mP(t, a2, e_coef)
    if math.isfinite(f1) and math.isfinite(f2):
        b1 = min(1.0 - f1, 1.0)
        b2 = min(1.0 - f2, 1.0)
        if b1 + b2 < 0.0:
            caps.append(2.0 + b1 + b2)
    return max(0.0, min(caps))


def biquad_pointwise_upper(env: CharEnvelope, delta: float, t: float, *,
                           per_character: bool = True,
                           e_coef: float = 2.0) -> float:
    """Upper envelope for (1 - P(t))/t of the product character on [2, B].

    B = (2 - delta) * A.  With per_character=True the smaller-modulus
    character gets its own cancellation point a1 = (1-delta)*A; otherwise the
    shared A is used for both, reproducing the hand partition
    (8log(t-1)/t, 4(1-2log(t-1)+Et)/t, ..., 8log(A/(t-A))/t with trivial 2/t
    between the crossings).
    """
    if not 0.0 <= delta <= 1.0:
        raise ValueError("delta must lie in [0, 1]")
    B = (2.0 - delta) * env.A
    if not 2.0 - 1e-12 <= t <= B + 1e-12:
        raise ValueError(f"t={t} outside [2, B={B}]")
    a1 = (1.0 - delta) * env.A if per_character else env.A
    return pair_cap_1mP(t, a1, env.A, e_coef) / t


def biquad_envelope_breakpoints(env: CharEnvelope, delta: float,
                                per_character: bool = True) -> list[float]:
    """Kink locations of the product envelope, for quadrature panel alignment."""
    pts = set()
    a_values = {env.A}
    if per_character:
        a_values.add((1.0 - delta) * env.A)
    t0, t1, _ = breakpoints(env)
    for x in (t0, t1):
        if x is not None:
            pts.add(x)
    for a in a_values:
        pts.update({1.0 + _E14, 1.0 + a, 2.0 * a, 3.0,
                    a * (1.0 + _E14) / _E14, a * (1.0 + math.exp(-0.5))})
    B = (2.0 - delta) * env.A
    return sorted(p for p in pts if 2.0 < p < B)


# ---------------------------------------------------------------------------
# Profile text format: one directive or segment per line.
#   k <value>
#   lower_clamp <value>
#   <t_start> <t_end> constant <c>
#   <t_start> <t_end> log_tminus1 <a> <b> <e>
#   <t_start> <t_end> log_AoverTminusA <a> <b> <e> <A>
#   <t_start> <t_end> cubic_tail <a> <b> <e> <A> <g> <m>
# ---------------------------------------------------------------------------

def parse_profile_text(text: str, default_k: float | None = None) -> Profile:
    k = default_k
    lower_clamp = -1.0
    segments: list[Segment] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "k":
            k = float(parts[1])
            continue
        if parts[0] == "lower_clamp":
            lower_clamp = float(parts[1])
            continue
        if len(parts) < 4:
            raise ValueError(f"line {lineno}: malformed segment {line!r}")
        t0, t1, kind = float(parts[0]), float(parts[1]), parts[2]
        args = [float(x) for x in parts[3:]]
        if kind == "constant":
            segments.append(Segment(t0, t1, SegmentKind.CONSTANT, c=args[0]))
        elif kind == "log_tminus1":
            segments.append(Segment(t0, t1, SegmentKind.LOG_TMINUS1,
                                    a=args[0], b=args[1], e=args[2]))
        elif kind == "log_AoverTminusA":
            segments.append(Segment(t0, t1, SegmentKind.LOG_A_OVER_TMINUSA,
                                    a=args[0], b=args[1], e=args[2], A=args[3]))
        elif kind == "cubic_tail":
            segments.append(Segment(t0, t1, SegmentKind.CUBIC_TAIL,
                                    a=args[0], b=args[1], e=args[2], A=args[3],
                                    g=args[4], m=int(args[5])))
        else:
            raise ValueError(f"line {lineno}: unknown segment kind {kind!r}")
    if k is None:
        raise ValueError("profile text must set k (or pass default_k)")
    return Profile(k=k, segments=tuple(segments), lower_clamp=lower_clamp)


def format_profile_text(p: Profile) -> str:
    lines = [f"k {p.k!r}", f"lower_clamp {p.lower_clamp!r}"]
    for s in p.segments:
        if s.kind is SegmentKind.CONSTANT:
            lines.append(f"{s.t_start!r} {s.t_end!r} constant {s.c!r}")
        elif s.kind is SegmentKind.LOG_TMINUS1:
            lines.append(f"{s.t_start!r} {s.t_end!r} log_tminus1 {s.a!r} {s.b!r} {s.e!r}")
        elif s.kind is SegmentKind.LOG_A_OVER_TMINUSA:
            lines.append(f"{s.t_start!r} {s.t_end!r} log_AoverTminusA "
                         f"{s.a!r} {s.b!r} {s.e!r} {s.A!r}")
        else:
            lines.append(f"{s.t_start!r} {s.t_end!r} cubic_tail "
                         f"{s.a!r} {s.b!r} {s.e!r} {s.A!r} {s.g!r} {s.m}")
    return "\n".join(lines) + "\n"
