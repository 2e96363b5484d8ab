"""Classical time-scale calculus on bounded scales.

Delta derivative and integral, regressivity, and the scale exponential
e_p(t, s).  Everything decomposes along the same path structure: between two
scale points an evaluation window splits into right-scattered jumps (handled
by exact difference quotients / cylinder factors) and dense sub-intervals
(handled by classical numerics: Richardson-extrapolated one-sided differences
and adaptive Simpson quadrature).
"""

from __future__ import annotations

import math
import cmath
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import chebyshev as _cheb

from .errors import BadParam, NotInScaleKappa, NotRegressive, StencilFailure
from .timescale import TimeScale, kappa_restrict

Scalar = float | complex

_MACHEPS = 2.2204460492503131e-16


@dataclass(frozen=True)
class TimeScaleFunction:
    """A labelled evaluation map from scale points to real/complex scalars."""

    fn: Callable[[float], Scalar]
    label: str = "f"

    def __call__(self, t: float) -> Scalar:
        return self.fn(t)


def constant(c: Scalar, label: str | None = None) -> TimeScaleFunction:
    return TimeScaleFunction(lambda t: c, label or f"const:{c}")


def as_function(p) -> Callable[[float], Scalar]:
    """Accept a callable or a bare constant."""
    if callable(p):
        return p
    v = p
    return lambda t: v


@dataclass(frozen=True)
class NumericConfig:
    """Knobs for the dense-part numerics.

    dense_step_rel: relative initial step of the one-sided difference stencil.
    quad_tol: absolute tolerance of the adaptive Simpson quadrature.
    regress_eps: |1 + mu*p| at or below this counts as a regressivity hit.
    """

    dense_step_rel: float = 2e-4
    quad_tol: float = 1e-10
    regress_eps: float = 1e-12

    def __post_init__(self):
        if min(self.dense_step_rel, self.quad_tol, self.regress_eps) <= 0:
            raise BadParam("NumericConfig fields must be strictly positive")


DEFAULT_CONFIG = NumericConfig()


@dataclass(frozen=True)
class RegressivityCheck:
    """Outcome of a regressivity scan; falsy when a witness was found."""

    ok: bool
    witness: float | None = None
    value: Scalar | None = None

    def __bool__(self) -> bool:
        return self.ok


# -- path decomposition --------------------------------------------------------


def iter_path(T: TimeScale, a: float, b: float):
    """Yield the pieces of [a, b) in T, in increasing order.

    Pieces are ``("jump", tau, mu)`` for right-scattered tau in [a, b) and
    ``("dense", c, d)`` for maximal continuous sub-intervals.  Both endpoints
    must already be snapped scale points with a <= b.
    """
    for idx, seg in enumerate(T.segments):
        if seg.b < a:
            continue
        if seg.a >= b:
            break
        if seg.is_point:
            if a <= seg.a < b:
                yield "jump", seg.a, T.segments[idx + 1].a - seg.a
            continue
        c = max(seg.a, a)
        d = min(seg.b, b)
        if c < d:
            yield "dense", c, d
        if d == seg.b and d < b:
            yield "jump", d, T.segments[idx + 1].a - d


# -- quadrature ----------------------------------------------------------------


def adaptive_simpson(f, a: float, b: float, tol: float, max_depth: int = 44) -> Scalar:
    """Adaptive Simpson rule with per-panel absolute tolerance.

    Complex integrands are fine.  The tolerance is not halved on splits:
    that keeps refinement from stalling on the noise floor of integrands
    that contain numerical derivatives (the accepted-panel error then sums
    to panels * tol in the worst case, far below the identity budgets for
    the default 1e-10).
    """
    if a == b:
        return 0.0
    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth)


def _simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return _simpson_rec(f, a, m, fa, flm, fm, left, tol, depth - 1) + _simpson_rec(
        f, m, b, fm, frm, fb, right, tol, depth - 1
    )


# -- delta derivative ------------------------------------------------------------


def _one_sided_derivative(f, t: float, room: float, sign: float, cfg: NumericConfig) -> Scalar:
    """Richardson-extrapolated (3 levels) one-sided difference at a dense point.

    Exact for cubics; the leading error term is O(h^3 f'''').  The initial
    step shrinks to stay inside the current segment.
    """
    scale = max(abs(t), 1.0)
    h = min(cfg.dense_step_rel * scale, room)
    if h < 1e3 * _MACHEPS * scale:
        raise StencilFailure(
            f"no room for a one-sided stencil at t={t!r} (room={room!r})"
        )
    f0 = f(t)

    def quot(step):
        return (f(t + sign * step) - f0) / (sign * step)

    d1 = quot(h)
    d2 = quot(0.5 * h)
    d3 = quot(0.25 * h)
    r1 = 2.0 * d2 - d1
    r2 = 2.0 * d3 - d2
    return r2 + (r2 - r1) / 3.0


def delta_derivative(T: TimeScale, f, t: float, cfg: NumericConfig = DEFAULT_CONFIG) -> Scalar:
    """Delta derivative of f at t in T^kappa.

    Right-scattered points use the exact quotient (f(sigma(t)) - f(t)) / mu(t).
    Right-dense points use forward differences on [t, segment end]; the
    left-dense maximum of the scale falls back to backward differences.
    """
    ts = T.require(t)
    if not kappa_restrict(T, 1).contains(ts):
        raise NotInScaleKappa(f"t={t!r} is outside T^kappa of {T.describe()}")
    f = as_function(f)
    s = T.sigma(ts)
    if s > ts:
        return (f(s) - f(ts)) / (s - ts)
    idx, _ = T.locate(ts)
    seg = T.segments[idx]
    if seg.is_point:
        # singleton scale: sigma(t) == t but no dense room either side
        raise StencilFailure(f"isolated point t={t!r} admits no stencil")
    if ts < seg.b:
        return _one_sided_derivative(f, ts, seg.b - ts, +1.0, cfg)
    return _one_sided_derivative(f, ts, ts - seg.a, -1.0, cfg)


def delta_derivative2(T: TimeScale, f, t: float, cfg: NumericConfig = DEFAULT_CONFIG) -> Scalar:
    """Second delta derivative: the delta derivative of s -> f^Delta(s).

    The outer derivative lives on T^kappa, whose jump structure near the
    maximum differs from T's, so it is taken over the restricted scale.
    """
    ts = T.require(t)
    if not kappa_restrict(T, 2).contains(ts):
        raise NotInScaleKappa(f"t={t!r} is outside T^kappa^2 of {T.describe()}")
    f = as_function(f)
    inner = lambda s: delta_derivative(T, f, s, cfg)
    return delta_derivative(kappa_restrict(T, 1), inner, ts, cfg)


# -- delta integral ---------------------------------------------------------------


def delta_integral(T: TimeScale, f, a: float, b: float, cfg: NumericConfig = DEFAULT_CONFIG) -> Scalar:
    """Delta integral of f over [a, b] in T; b < a integrates backwards (negated).

    Right-scattered points tau in [a, b) contribute mu(tau) f(tau); dense
    sub-intervals are integrated by adaptive Simpson to cfg.quad_tol.
    """
    sa = T.require(a)
    sb = T.require(b)
    if sa == sb:
        return 0.0
    sign = 1.0
    if sa > sb:
        sa, sb = sb, sa
        sign = -1.0
    f = as_function(f)
    total: Scalar = 0.0
    for kind, x, y in iter_path(T, sa, sb):
        if kind == "jump":
            total += y * f(x)
        else:
            total += adaptive_simpson(f, x, y, cfg.quad_tol)
    return sign * total


# -- regressivity and the scale exponential ----------------------------------------


def is_regressive(T: TimeScale, p, cfg: NumericConfig = DEFAULT_CONFIG) -> RegressivityCheck:
    """Check |1 + mu(t) p(t)| > regress_eps on T^kappa.

    Only right-scattered points can violate the condition (mu == 0 at dense
    points makes the factor exactly 1), so those are checked exactly.
    """
    p = as_function(p)
    for kind, x, m in iter_path(T, T.min, T.max):
        if kind != "jump":
            continue
        v = 1.0 + m * p(x)
        if abs(v) <= cfg.regress_eps:
            return RegressivityCheck(False, x, v)
    return RegressivityCheck(True)


def _exp_any(z: Scalar) -> Scalar:
    return cmath.exp(z) if isinstance(z, complex) else math.exp(z)


def ts_exponential(T: TimeScale, p, t: float, s: float, cfg: NumericConfig = DEFAULT_CONFIG) -> Scalar:
    """Scale exponential e_p(t, s) via the cylinder construction.

    Across [s, t) the value is the product of the cylinder factors
    1 + mu(tau) p(tau) over right-scattered tau times exp of the integral of
    p over the dense parts (for complex p this equals exp of the summed
    principal-branch logarithms; the product form is branch-independent and
    keeps purely scattered evaluations exact).  e_p(s, s) = 1 and t < s is
    served by the reciprocal, the group property of the exponential.
    """
    st = T.require(t)
    ss = T.require(s)
    if st == ss:
        return 1.0
    invert = st < ss
    if invert:
        st, ss = ss, st
    p = as_function(p)
    prod: Scalar = 1.0
    expo: Scalar = 0.0
    for kind, x, y in iter_path(T, ss, st):
        if kind == "jump":
            v = 1.0 + y * p(x)
            if abs(v) <= cfg.regress_eps:
                raise NotRegressive(x, v)
            prod *= v
        else:
            expo += adaptive_simpson(p, x, y, cfg.quad_tol)
    val = prod * _exp_any(expo) if expo != 0.0 else prod
    return 1.0 / val if invert else val


def _trim_cheb(coef) -> list:
    """Drop trailing Chebyshev coefficients below the series' noise floor.

    Constant and low-order arguments collapse to a handful of terms, which
    keeps the scalar Clenshaw loop short on the hot path.
    """
    coef = list(coef)
    floor = 1e-15 * max(1e-300, max(abs(c) for c in coef))
    last = 0
    for i, c in enumerate(coef):
        if abs(c) > floor:
            last = i
    return coef[: last + 1]


def _chebval_scalar(u: float, coef) -> Scalar:
    """Clenshaw evaluation of a Chebyshev series at a scalar point."""
    b1: Scalar = 0.0
    b2: Scalar = 0.0
    two_u = 2.0 * u
    for c in coef[:0:-1]:
        b1, b2 = c + two_u * b1 - b2, b1
    return coef[0] + u * b1 - b2


class ExponentialProfile:
    """Reusable evaluator of e_p(t, s) on a fixed scale.

    Cylinder factors at the scattered points are tabulated once and the
    dense-part antiderivative of p is fitted per segment with a Chebyshev
    interpolant, so one value costs a couple of table lookups.  Agrees with
    ts_exponential to quadrature accuracy (tested); meant for hot paths such
    as solution evaluators and the identity suite.
    """

    _DEG = 48

    def __init__(self, T: TimeScale, p, cfg: NumericConfig = DEFAULT_CONFIG):
        self.scale = T
        self.cfg = cfg
        p = as_function(p)
        taus: list[float] = []
        factors: list[Scalar] = []
        for kind, x, y in iter_path(T, T.min, T.max):
            if kind == "jump":
                taus.append(x)
                factors.append(1.0 + y * p(x))
        self._taus = taus
        self._factors = factors
        # dense cumulative antiderivative, segment by segment
        nodes = np.cos(np.pi * (2.0 * np.arange(self._DEG + 1) + 1.0) / (2.0 * (self._DEG + 1)))
        recs = []
        cum: Scalar = 0.0
        for seg in T.segments:
            if seg.is_point:
                continue
            mid = 0.5 * (seg.a + seg.b)
            half = 0.5 * (seg.b - seg.a)
            vals = np.asarray([p(mid + half * u) * half for u in nodes])
            coef = _cheb.chebfit(nodes, vals, self._DEG)
            anti = tuple(_trim_cheb(_cheb.chebint(coef)))
            base = _chebval_scalar(-1.0, anti)
            total = _chebval_scalar(1.0, anti) - base
            recs.append((seg.a, seg.b, mid, half, anti, base, total, cum))
            cum += total
        self._dense = recs
        self._dense_starts = [r[0] for r in recs]

    def _dense_cum(self, x: float) -> Scalar:
        """Integral of p over the dense parts of [scale.min, x]."""
        i = bisect_right(self._dense_starts, x) - 1
        if i < 0:
            return 0.0
        a, b, mid, half, anti, base, total, before = self._dense[i]
        if x >= b:
            return before + total
        return before + (_chebval_scalar((x - mid) / half, anti) - base)

    def check_range(self, lo: float, hi: float) -> None:
        """Raise NotRegressive if a cylinder factor vanishes on [lo, hi)."""
        i = bisect_left(self._taus, lo)
        j = bisect_left(self._taus, hi)
        for k in range(i, j):
            if abs(self._factors[k]) <= self.cfg.regress_eps:
                raise NotRegressive(self._taus[k], self._factors[k])

    def value(self, t: float, s: float) -> Scalar:
        st = self.scale.require(t)
        ss = self.scale.require(s)
        if st == ss:
            return 1.0
        invert = st < ss
        if invert:
            st, ss = ss, st
        i = bisect_left(self._taus, ss)
        j = bisect_left(self._taus, st)
        prod: Scalar = 1.0
        for k in range(i, j):
            v = self._factors[k]
            if abs(v) <= self.cfg.regress_eps:
                raise NotRegressive(self._taus[k], v)
            prod *= v
        expo = self._dense_cum(st) - self._dense_cum(ss)
        val = prod * _exp_any(expo) if expo != 0.0 else prod
        return 1.0 / val if invert else val

    def as_function_of_t(self, s: float, label: str = "e_p") -> TimeScaleFunction:
        return TimeScaleFunction(lambda t: self.value(t, s), label)
