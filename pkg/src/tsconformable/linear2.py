"""Second-order linear conformable dynamic equations with constant coefficients.

Solves D^a D^a y + a D^a y + b y = 0 through the characteristic roots of
lambda^2 + a lambda + b = 0 and the conformable exponentials E_lambda, plus
the hyperbolic and trigonometric special functions those roots generate.
The repeated-root case a^2 - 4b = 0 is rejected, not approximated.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

from .conformable import (
    ConformableContext,
    conformable_derivative,
    conformable_derivative2,
    ep_profile,
)
from .delta_calculus import RegressivityCheck, Scalar, as_function
from .errors import (
    BadParam,
    ComplexResidue,
    NotInScaleKappa,
    NotRegressive,
    RepeatedRoot,
    SingularWronskian,
)
from .timescale import kappa_restrict, sample_grid

_DISC_EPS = 1e-12
_IMAG_TRUNC = 1e-10


@dataclass(frozen=True)
class RootPair:
    """Roots of the characteristic polynomial, lambda1 + lambda2 = -a."""

    lambda1: Scalar
    lambda2: Scalar

    @property
    def spread(self) -> Scalar:
        """lambda2 - lambda1 == sqrt(a^2 - 4b) in the chosen branch."""
        return self.lambda2 - self.lambda1


@dataclass(frozen=True)
class IVPProblem:
    """Constant coefficients (a, b), anchor t0 and data (y0, y0_alpha)."""

    a: float
    b: float
    t0: float
    y0: Scalar
    y0_alpha: Scalar
    ctx: ConformableContext


@dataclass(frozen=True)
class IVPSolution:
    """Root pair, combination coefficients and the solution evaluator.

    ``roots`` is None when the solution was assembled from an arbitrary
    fundamental pair rather than the characteristic roots.
    """

    roots: RootPair | None
    c1: Scalar
    c2: Scalar
    eval: Callable[[float], Scalar]

    def __call__(self, t: float) -> Scalar:
        return self.eval(t)


def _realify(z: Scalar) -> Scalar:
    if isinstance(z, complex) and abs(z.imag) <= _IMAG_TRUNC * max(1.0, abs(z)):
        return z.real
    return z


def characteristic_roots(a: float, b: float) -> RootPair:
    """Roots of lambda^2 + a*lambda + b = 0 with a^2 - 4b != 0.

    Real discriminants use the numerically stable form (larger-magnitude root
    first, the mate via b/lambda); negative discriminants take the principal
    square root i*sqrt(4b - a^2), putting the negative imaginary part in
    lambda1.
    """
    disc = a * a - 4.0 * b
    if abs(disc) <= _DISC_EPS:
        raise RepeatedRoot(f"a^2 - 4b = {disc!r} is (numerically) zero")
    if disc > 0.0:
        sq = math.sqrt(disc)
        if a >= 0.0:
            l1 = 0.5 * (-a - sq)
            l2 = b / l1 if b != 0.0 else 0.5 * (-a + sq)
        else:
            l2 = 0.5 * (-a + sq)
            l1 = b / l2 if b != 0.0 else 0.5 * (-a - sq)
        return RootPair(l1, l2)
    sq = math.sqrt(-disc)
    return RootPair(complex(-0.5 * a, -0.5 * sq), complex(-0.5 * a, 0.5 * sq))


def is_regressive_eq(ctx: ConformableContext, a: float, b: float) -> RegressivityCheck:
    """Scan k0^2 - mu k0 (a + 2 k1) + mu^2 (b + a k1 + k1^2) over T^kappa.

    Scattered points are checked exactly; dense segments are sampled (there
    mu = 0 and the expression collapses to k0^2).
    """
    k = ctx.kernel
    eps = ctx.cfg.regress_eps
    scale = ctx.scale

    def expr(t: float, m: float) -> float:
        k0 = k.k0_at(t)
        k1 = k.k1_at(t)
        return k0 * k0 - m * k0 * (a + 2.0 * k1) + m * m * (b + a * k1 + k1 * k1)

    kappa = kappa_restrict(scale, 1)
    isolated = sum(1 for s in kappa.segments if s.is_point)
    for t in sample_grid(kappa, max(33, isolated + 2 * len(kappa.segments))):
        v = expr(t, scale.mu(t))
        if abs(v) <= eps:
            return RegressivityCheck(False, t, v)
    return RegressivityCheck(True)


def l2_apply(ctx: ConformableContext, a: float, b: float, y, t: float) -> Scalar:
    """The operator D^a D^a y + a D^a y + b y evaluated at t in T^kappa^2."""
    y = as_function(y)
    return (
        conformable_derivative2(ctx, ctx, y, t)
        + a * conformable_derivative(ctx, y, t)
        + b * y(ctx.scale.require(t))
    )


def wronskian(ctx: ConformableContext, y1, y2, t: float) -> Scalar:
    """W(y1, y2)(t) = y1 D^a y2 - y2 D^a y1."""
    y1 = as_function(y1)
    y2 = as_function(y2)
    ts = ctx.scale.require(t)
    return y1(ts) * conformable_derivative(ctx, y2, ts) - y2(ts) * conformable_derivative(
        ctx, y1, ts
    )


def solve_ivp_constant(problem: IVPProblem) -> IVPSolution:
    """Solve the homogeneous constant-coefficient IVP via E_lambda1, E_lambda2.

    y = c1 E_l1(., t0) + c2 E_l2(., t0) with
    c1 = y0/2 - (a y0 + 2 y0^a) / (2 sqrt(a^2 - 4b)), c2 the conjugate
    combination; both exponentials must be regressive on T^kappa.
    """
    ctx = problem.ctx
    a, b = problem.a, problem.b
    t0 = ctx.scale.require(problem.t0)
    if not kappa_restrict(ctx.scale, 1).contains(t0):
        raise NotInScaleKappa(f"t0={problem.t0!r} must lie in T^kappa")
    check = is_regressive_eq(ctx, a, b)
    if not check:
        raise NotRegressive(check.witness, check.value,
                            f"equation not regressive at t={check.witness!r}")
    roots = characteristic_roots(a, b)
    prof1 = ep_profile(ctx, roots.lambda1)
    prof2 = ep_profile(ctx, roots.lambda2)
    for prof in (prof1, prof2):
        prof.check_range(ctx.scale.min, ctx.scale.max)
    shift = (a * problem.y0 + 2.0 * problem.y0_alpha) / (2.0 * roots.spread)
    c1 = 0.5 * problem.y0 - shift
    c2 = 0.5 * problem.y0 + shift

    def evaluate(t: float) -> Scalar:
        return _realify(c1 * prof1.value(t, t0) + c2 * prof2.value(t, t0))

    return IVPSolution(roots, c1, c2, evaluate)


def general_solution_from_fundamental(ctx: ConformableContext, y1, y2, t0: float,
                                      y0: Scalar, y0_alpha: Scalar) -> IVPSolution:
    """Combine a fundamental pair to match (y0, y0_alpha) at t0.

    Coefficients come from inverting the 2x2 system at the anchor; only the
    Wronskian at t0 must be nonzero.  A vanishing Wronskian elsewhere on the
    scale is reported as a warning, not rejected.
    """
    y1 = as_function(y1)
    y2 = as_function(y2)
    t0 = ctx.scale.require(t0)
    d1 = conformable_derivative(ctx, y1, t0)
    d2 = conformable_derivative(ctx, y2, t0)
    v1 = y1(t0)
    v2 = y2(t0)
    w0 = v1 * d2 - v2 * d1
    ref = max(1.0, abs(v1 * d2), abs(v2 * d1))
    if abs(w0) <= 1e-12 * ref:
        raise SingularWronskian(f"W(y1, y2)(t0) = {w0!r} is numerically zero")
    kappa = kappa_restrict(ctx.scale, 1)
    isolated = sum(1 for s in kappa.segments if s.is_point)
    for t in sample_grid(kappa, isolated + 2 * len(kappa.segments) + 9):
        # report-only scan, so the net is looser than the anchor check
        # (grid Wronskians carry stencil noise)
        if t != t0 and abs(wronskian(ctx, y1, y2, t)) <= 1e-9 * ref:
            warnings.warn(f"fundamental-pair Wronskian vanishes near t={t!r}",
                          stacklevel=2)
            break
    c1 = (d2 * y0 - v2 * y0_alpha) / w0
    c2 = (v1 * y0_alpha - d1 * y0) / w0

    def evaluate(t: float) -> Scalar:
        return _realify(c1 * y1(t) + c2 * y2(t))

    return IVPSolution(None, c1, c2, evaluate)


# -- hyperbolic and trigonometric functions ----------------------------------------


def hyperbolic_pair(ctx: ConformableContext, p, t0: float):
    """Evaluators (cosh_p, sinh_p) sharing the two exponential profiles."""
    t0 = ctx.scale.require(t0)
    p = as_function(p)
    prof_p = ep_profile(ctx, p)
    prof_m = ep_profile(ctx, lambda t: -p(t))

    def cosh_fn(t: float) -> Scalar:
        return 0.5 * (prof_p.value(t, t0) + prof_m.value(t, t0))

    def sinh_fn(t: float) -> Scalar:
        return 0.5 * (prof_p.value(t, t0) - prof_m.value(t, t0))

    return cosh_fn, sinh_fn


def cosh_sinh(ctx: ConformableContext, p, t: float, t0: float) -> tuple[Scalar, Scalar]:
    """(cosh_p, sinh_p)(t, t0) = ((E_p + E_-p)/2, (E_p - E_-p)/2)."""
    ch, sh = hyperbolic_pair(ctx, p, t0)
    return ch(t), sh(t)


def _real_or_raise(z: Scalar, what: str) -> Scalar:
    if not isinstance(z, complex):
        return z
    if abs(z.imag) <= _IMAG_TRUNC * max(1.0, abs(z)):
        return z.real
    raise ComplexResidue(f"{what} carries imaginary residue {z.imag!r}")


def trigonometric_pair(ctx: ConformableContext, p, t0: float):
    """Evaluators (cos_p, sin_p) built from E_{ip} and E_{-ip}.

    Real inputs give real outputs; an imaginary residue above the truncation
    threshold signals inconsistent inputs and raises ComplexResidue.
    """
    t0 = ctx.scale.require(t0)
    p = as_function(p)
    prof_p = ep_profile(ctx, lambda t: 1j * p(t))
    prof_m = ep_profile(ctx, lambda t: -1j * p(t))

    def cos_fn(t: float) -> Scalar:
        v = 0.5 * (prof_p.value(t, t0) + prof_m.value(t, t0))
        return _real_or_raise(v, "cos_p")

    def sin_fn(t: float) -> Scalar:
        v = (prof_p.value(t, t0) - prof_m.value(t, t0)) / 2j
        return _real_or_raise(v, "sin_p")

    return cos_fn, sin_fn


def cos_sin(ctx: ConformableContext, p, t: float, t0: float) -> tuple[Scalar, Scalar]:
    """(cos_p, sin_p)(t, t0) = ((E_ip + E_-ip)/2, (E_ip - E_-ip)/(2i))."""
    cs, sn = trigonometric_pair(ctx, p, t0)
    return cs(t), sn(t)


def solve_hyperbolic(ctx: ConformableContext, gamma: float, t0: float,
                     y0: Scalar, y0_alpha: Scalar) -> IVPSolution:
    """Solution y0*cosh_g + (y0^a/g)*sinh_g of D^a D^a y - g^2 y = 0."""
    if gamma == 0.0:
        raise BadParam("hyperbolic solutions need gamma != 0")
    t0 = ctx.scale.require(t0)
    ch, sh = hyperbolic_pair(ctx, gamma, t0)
    roots = characteristic_roots(0.0, -gamma * gamma)
    shift = y0_alpha / roots.spread  # spread = 2|gamma|
    c1 = 0.5 * y0 - shift
    c2 = 0.5 * y0 + shift

    def evaluate(t: float) -> Scalar:
        return _realify(y0 * ch(t) + (y0_alpha / gamma) * sh(t))

    return IVPSolution(roots, c1, c2, evaluate)


def solve_trigonometric(ctx: ConformableContext, gamma: float, t0: float,
                        c1: Scalar, c2: Scalar) -> Callable[[float], Scalar]:
    """Evaluator c1*cos_g + c2*sin_g solving D^a D^a y + g^2 y = 0."""
    if gamma == 0.0:
        raise BadParam("trigonometric solutions need gamma != 0")
    t0 = ctx.scale.require(t0)
    cs, sn = trigonometric_pair(ctx, gamma, t0)

    def evaluate(t: float) -> Scalar:
        return c1 * cs(t) + c2 * sn(t)

    return evaluate


def solution_residual(ctx: ConformableContext, a: float, b: float, y) -> Callable[[float], float]:
    """Map t -> |L2 y(t)|, the pointwise residual of the dynamic equation."""
    y = as_function(y)

    def res(t: float) -> float:
        return abs(l2_apply(ctx, a, b, y, t))

    return res
