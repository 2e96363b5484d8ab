"""Machine-checkable catalog of the proved identities.

Every case evaluates its left and right sides by disjoint code paths over a
grid of the working scale and reports the maximal deviation.  Cases whose
regressivity preconditions fail are recorded as skips, never as failures.
The non-commutation case is a witness: it passes when the deviation EXCEEDS
its threshold, certifying an inequality.

Known repairs relative to the source displays (derived from the product rule
and checked symbolically on discrete scales): the integral-of-derivative
identity has no extra kappa1 term, the by-parts boundary weight is
E_0(b, t), and the Leibniz rule carries a -k1(t) f(sigma(t), s) correction
inside the integral.  Each repaired identity reduces to the classical form
at alpha = 1 and to the derivative-of-integral identity when the integrand
does not depend on t.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field

from .conformable import (
    ConformableContext,
    check_conformability,
    conformable_derivative,
    conformable_derivative2,
    conformable_integral,
    e0_profile,
    ep_profile,
    make_kernel,
)
from .delta_calculus import (
    DEFAULT_CONFIG,
    NumericConfig,
    Scalar,
    TimeScaleFunction,
    as_function,
    delta_integral,
)
from .errors import BadCase, KernelSingular, NotRegressive
from .timescale import (
    TimeScale,
    build_timescale,
    interval,
    kappa_restrict,
    point,
    sample_grid,
)

IDENTITY_IDS = (
    "L1_linearity",
    "L1_constant",
    "L1_product",
    "L1_quotient",
    "L1_eigen",
    "L1_ftc",
    "L2_deriv_of_integral",
    "L2_integral_of_deriv",
    "L2_by_parts",
    "L2_leibniz",
    "HYP_deriv",
    "HYP_pythagoras",
    "TRIG_deriv",
    "TRIG_pythagoras",
    "NONCOMMUTE_witness",
    "CONFORMABILITY_limits",
)

_CTX_IDS = tuple(i for i in IDENTITY_IDS if i != "NONCOMMUTE_witness")

TOL_SCATTERED = 1e-8
TOL_DENSE = 1e-6
NONCOMMUTE_THRESHOLD = 1.0

_RNG_SEED = 1789


def probe_battery() -> tuple[TimeScaleFunction, ...]:
    """Default probes: polynomials are exact on scattered scales, the
    rational one (pole at -3, outside the default windows) exercises the
    quotient rule."""
    return (
        TimeScaleFunction(lambda t: t * t, "t2"),
        TimeScaleFunction(lambda t: t**3 - 2.0 * t, "t3m2t"),
        TimeScaleFunction(lambda t: 1.0 / (t + 3.0), "recip_t_plus_3"),
    )


G_PROBE = TimeScaleFunction(lambda t: t + 2.0, "t_plus_2")


def leibniz_probe(t: float, s: float) -> float:
    return t * t + t * s


@dataclass(frozen=True)
class IdentityCase:
    id: str
    ctx: ConformableContext
    probes: tuple = ()
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class VerificationReport:
    id: str
    scale: str
    kernel: str
    alpha: float
    max_abs_dev: float
    max_rel_dev: float
    worst_point: float | None
    tolerance_used: float
    passed: bool
    skipped: bool = False
    skip_reason: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def case_tolerance(ctx: ConformableContext) -> float:
    return TOL_SCATTERED if ctx.scale.is_discrete else TOL_DENSE


def _grid(ctx: ConformableContext, kappa: int = 0, budget_extra: int = 8) -> list[float]:
    scale = ctx.scale
    isolated = sum(1 for s in scale.segments if s.is_point)
    n_int = len(scale.segments) - isolated
    pts = sample_grid(scale, isolated + 2 * n_int + budget_extra)
    if kappa:
        restricted = kappa_restrict(scale, kappa)
        pts = [t for t in pts if restricted.contains(t)]
    return pts


class _DevTracker:
    """Per-point deviations; a point passes on its absolute OR relative dev.

    ``max_eff`` is the maximum over points of min(abs, rel), so the case
    passes iff max_eff <= tol.  Taking the global maxima of abs and rel
    separately would fail cases that mix huge values (fine relatively) with
    exact zeros (fine absolutely).
    """

    def __init__(self):
        self.max_abs = 0.0
        self.max_rel = 0.0
        self.max_eff = 0.0
        self.worst: float | None = None

    def add(self, t: float, lhs: Scalar, rhs: Scalar) -> None:
        dev = abs(lhs - rhs)
        mag = max(abs(lhs), abs(rhs))
        rel = dev / mag if mag > 0.0 else 0.0
        self.max_abs = max(self.max_abs, dev)
        self.max_rel = max(self.max_rel, rel)
        eff = min(dev, rel)
        if eff > self.max_eff or self.worst is None:
            self.max_eff = eff
            self.worst = t


# -- individual identities ---------------------------------------------------------


def _probes(case: IdentityCase):
    return case.probes or probe_battery()


def _eval_linearity(case: IdentityCase, dev: _DevTracker) -> None:
    ctx = case.ctx
    rng = random.Random(_RNG_SEED)
    probes = _probes(case)
    pts = _grid(ctx, kappa=1)
    for f, g in zip(probes, probes[1:] + probes[:1]):
        aa = rng.uniform(-2.0, 2.0)
        bb = rng.uniform(-2.0, 2.0)
        combo = lambda t, f=f, g=g, aa=aa, bb=bb: aa * f(t) + bb * g(t)
        for t in pts:
            lhs = conformable_derivative(ctx, combo, t)
            rhs = aa * conformable_derivative(ctx, f, t) + bb * conformable_derivative(
                ctx, g, t
            )
            dev.add(t, lhs, rhs)


def _eval_constant(case: IdentityCase, dev: _DevTracker) -> None:
    ctx = case.ctx
    c = case.params.get("c", 3.0)
    for t in _grid(ctx, kappa=1):
        lhs = conformable_derivative(ctx, lambda _t: c, t)
        rhs = c * ctx.kernel.k1_at(t)
        dev.add(t, lhs, rhs)


def _eval_product(case: IdentityCase, dev: _DevTracker) -> None:
    ctx = case.ctx
    sigma = ctx.scale.sigma
    k1 = ctx.kernel.k1_at
    for f in _probes(case):
        g = G_PROBE
        prod = lambda t, f=f, g=g: f(t) * g(t)
        for t in _grid(ctx, kappa=1):
            lhs = conformable_derivative(ctx, prod, t)
            gs = g(sigma(t))
            rhs = (
                f(t) * conformable_derivative(ctx, g, t)
                + gs * conformable_derivative(ctx, f, t)
                - f(t) * gs * k1(t)
            )
            dev.add(t, lhs, rhs)


def _eval_quotient(case: IdentityCase, dev: _DevTracker) -> None:
    ctx = case.ctx
    sigma = ctx.scale.sigma
    k1 = ctx.kernel.k1_at
    for f in _probes(case):
        g = G_PROBE
        quot = lambda t, f=f, g=g: f(t) / g(t)
        for t in _grid(ctx, kappa=1):
            gv = g(t)
            gs = g(sigma(t))
            if abs(gv * gs) <= 1e-8:
                continue
            lhs = conformable_derivative(ctx, quot, t)
            rhs = (
                gv * conformable_derivative(ctx, f, t)
                - f(t) * conformable_derivative(ctx, g, t)
            ) / (gv * gs) + (f(t) / gv) * k1(t)
            dev.add(t, lhs, rhs)


def _eval_eigen(case: IdentityCase, dev: _DevTracker) -> None:
    ctx = case.ctx
    p = case.params.get("p", 1.0)
    pf = as_function(p)
    s0 = ctx.scale.min
    prof = ep_profile(ctx, p)
    prof.check_range(ctx.scale.min, ctx.scale.max)
    ep = lambda t: prof.value(t, s0)
    for t in _grid(ctx, kappa=1):
        lhs = conformable_derivative(ctx, ep, t)
        rhs = pf(t) * ep(t)
        dev.add(t, lhs, rhs)


def _eval_ftc(case: IdentityCase, dev: _DevTracker, probe_idx: int, anchor_idx: int) -> None:
    """D^a of t -> integral_a^t equals f(t) E_0(sigma(t), t)."""
    ctx = case.ctx
    f = _probes(case)[probe_idx]
    e0 = e0_profile(ctx)
    e0.check_range(ctx.scale.min, ctx.scale.max)
    pts = _grid(ctx, kappa=1, budget_extra=4)
    a = pts[min(anchor_idx, len(pts) - 1)]
    F = lambda tau: conformable_integral(ctx, f, a, tau)
    for t in pts:
        if t < a:
            continue
        lhs = conformable_derivative(ctx, F, t)
        rhs = f(t) * e0.value(ctx.scale.sigma(t), t)
        dev.add(t, lhs, rhs)


def _weighted_alpha_integral(ctx, h, a: float, t: float, weight_sigma: bool) -> Scalar:
    """Integral of h(s) E_0(t, sigma(s) or s) / k0(s) over [a, t]."""
    e0 = e0_profile(ctx)
    sigma = ctx.scale.sigma
    k0 = ctx.kernel.k0_at
    if weight_sigma:
        integrand = lambda s: h(s) * e0.value(t, sigma(s)) / k0(s)
    else:
        integrand = lambda s: h(s) * e0.value(t, s) / k0(s)
    return delta_integral(ctx.scale, integrand, a, t, ctx.cfg)


def _eval_integral_of_deriv(case: IdentityCase, dev: _DevTracker) -> None:
    """integral_a^t D^a[f](s) E_0(t, sigma(s)) d^a s == f E_0(t, .) |_a^t."""
    ctx = case.ctx
    e0 = e0_profile(ctx)
    e0.check_range(ctx.scale.min, ctx.scale.max)
    pts = _grid(ctx, kappa=1, budget_extra=4)
    a = pts[0]
    for f in _probes(case)[:2]:
        df = lambda s, f=f: conformable_derivative(ctx, f, s)
        for t in pts[1:]:
            lhs = _weighted_alpha_integral(ctx, df, a, t, weight_sigma=True)
            rhs = f(t) - f(a) * e0.value(t, a)
            dev.add(t, lhs, rhs)


def _eval_by_parts(case: IdentityCase, dev: _DevTracker) -> None:
    """integral_a^b f D^a[g] E_0(b, sigma(.)) d^a t
    == f g E_0(b, .) |_a^b + integral_a^b (f k1 - D^a[f]) g^sigma E_0(b, sigma(.)) d^a t."""
    ctx = case.ctx
    e0 = e0_profile(ctx)
    e0.check_range(ctx.scale.min, ctx.scale.max)
    sigma = ctx.scale.sigma
    k1 = ctx.kernel.k1_at
    a = ctx.scale.min
    b = ctx.scale.max
    for f in _probes(case)[:2]:
        g = G_PROBE
        fdg = lambda s, f=f, g=g: f(s) * conformable_derivative(ctx, g, s)
        lhs = _weighted_alpha_integral(ctx, fdg, a, b, weight_sigma=True)
        corr = lambda s, f=f, g=g: (
            f(s) * k1(s) - conformable_derivative(ctx, f, s)
        ) * g(sigma(s))
        rhs = (
            f(b) * g(b)
            - f(a) * g(a) * e0.value(b, a)
            + _weighted_alpha_integral(ctx, corr, a, b, weight_sigma=True)
        )
        dev.add(b, lhs, rhs)


def _eval_leibniz(case: IdentityCase, dev: _DevTracker) -> None:
    """D^a[t -> integral_a^t f(t, s) ...] == f(sigma(t), t) E_0(sigma(t), t)
    + integral_a^t [D^a_t f(t, s) - k1(t) f(sigma(t), s)] E_0(t, s)/k0(s) ds."""
    ctx = case.ctx
    f2 = case.params.get("f2", leibniz_probe)
    e0 = e0_profile(ctx)
    e0.check_range(ctx.scale.min, ctx.scale.max)
    scale = ctx.scale
    sigma = scale.sigma
    k0 = ctx.kernel.k0_at
    k1 = ctx.kernel.k1_at
    pts = _grid(ctx, kappa=1, budget_extra=4)
    a = pts[0]
    G = lambda tau: conformable_integral(ctx, lambda s: f2(tau, s), a, tau)
    for t in pts:
        if t <= a:
            continue
        lhs = conformable_derivative(ctx, G, t)
        st = sigma(t)
        k1t = k1(t)

        def inner(s: float) -> Scalar:
            d_t = conformable_derivative(ctx, lambda tau: f2(tau, s), t)
            return (d_t - k1t * f2(st, s)) * e0.value(t, s) / k0(s)

        rhs = f2(st, t) * e0.value(st, t) + delta_integral(scale, inner, a, t, ctx.cfg)
        dev.add(t, lhs, rhs)


def _eval_hyp_deriv(case: IdentityCase, dev: _DevTracker) -> None:
    from .linear2 import hyperbolic_pair

    ctx = case.ctx
    gamma = case.params.get("gamma", 1.0)
    t0 = ctx.scale.min
    ch, sh = hyperbolic_pair(ctx, gamma, t0)
    for t in _grid(ctx, kappa=1):
        dev.add(t, conformable_derivative(ctx, ch, t), gamma * sh(t))
        dev.add(t, conformable_derivative(ctx, sh, t), gamma * ch(t))


def _eval_hyp_pythagoras(case: IdentityCase, dev: _DevTracker) -> None:
    ctx = case.ctx
    gamma = case.params.get("gamma", 1.0)
    t0 = ctx.scale.min
    prof_p = ep_profile(ctx, gamma)
    prof_m = ep_profile(ctx, -gamma)
    for t in _grid(ctx):
        vp = prof_p.value(t, t0)
        vm = prof_m.value(t, t0)
        ch = 0.5 * (vp + vm)
        sh = 0.5 * (vp - vm)
        dev.add(t, ch * ch - sh * sh, vp * vm)


def _eval_trig_deriv(case: IdentityCase, dev: _DevTracker) -> None:
    from .linear2 import trigonometric_pair

    ctx = case.ctx
    gamma = case.params.get("gamma", 1.0)
    t0 = ctx.scale.min
    cs, sn = trigonometric_pair(ctx, gamma, t0)
    for t in _grid(ctx, kappa=1):
        dev.add(t, conformable_derivative(ctx, cs, t), -gamma * sn(t))
        dev.add(t, conformable_derivative(ctx, sn, t), gamma * cs(t))


def _eval_trig_pythagoras(case: IdentityCase, dev: _DevTracker) -> None:
    ctx = case.ctx
    gamma = case.params.get("gamma", 1.0)
    t0 = ctx.scale.min
    prof_p = ep_profile(ctx, 1j * gamma)
    prof_m = ep_profile(ctx, -1j * gamma)
    for t in _grid(ctx):
        vp = prof_p.value(t, t0)
        vm = prof_m.value(t, t0)
        cs = 0.5 * (vp + vm)
        sn = (vp - vm) / 2j
        dev.add(t, cs * cs + sn * sn, vp * vm)


def noncommute_context(cfg: NumericConfig = DEFAULT_CONFIG) -> ConformableContext:
    """The canonical witness setting: |t|-power kernels on a Z window."""
    scale = build_timescale([point(float(k)) for k in range(1, 9)], label="Z{1..8}")
    return ConformableContext(scale, make_kernel("abs_power", 0.5), cfg)


def noncommute_values(ctx: ConformableContext | None = None,
                      t: float = 1.0) -> tuple[Scalar, Scalar]:
    """(D^1 D^1/2 f, D^1/2 D^1 f) at t for f = t^2; they disagree by > 1."""
    if ctx is None:
        ctx = noncommute_context()
    f = probe_battery()[0]
    outer1 = ConformableContext(ctx.scale, ctx.kernel.with_alpha(1.0), ctx.cfg)
    forward = conformable_derivative2(outer1, ctx, f, t)
    backward = conformable_derivative2(ctx, outer1, f, t)
    return forward, backward


def _report(case: IdentityCase, dev: _DevTracker, tol: float, passed: bool,
            skipped: bool = False, reason: str | None = None) -> VerificationReport:
    return VerificationReport(
        id=case.id,
        scale=case.ctx.scale.describe(),
        kernel=case.ctx.kernel.label,
        alpha=case.ctx.kernel.alpha,
        max_abs_dev=dev.max_abs,
        max_rel_dev=dev.max_rel,
        worst_point=dev.worst,
        tolerance_used=tol,
        passed=passed,
        skipped=skipped,
        skip_reason=reason,
    )


_EVALUATORS = {
    "L1_linearity": _eval_linearity,
    "L1_constant": _eval_constant,
    "L1_product": _eval_product,
    "L1_quotient": _eval_quotient,
    "L1_eigen": _eval_eigen,
    "L1_ftc": lambda case, dev: _eval_ftc(case, dev, probe_idx=0, anchor_idx=0),
    "L2_deriv_of_integral": lambda case, dev: _eval_ftc(case, dev, probe_idx=1, anchor_idx=1),
    "L2_integral_of_deriv": _eval_integral_of_deriv,
    "L2_by_parts": _eval_by_parts,
    "L2_leibniz": _eval_leibniz,
    "HYP_deriv": _eval_hyp_deriv,
    "HYP_pythagoras": _eval_hyp_pythagoras,
    "TRIG_deriv": _eval_trig_deriv,
    "TRIG_pythagoras": _eval_trig_pythagoras,
}


def verify(case: IdentityCase) -> VerificationReport:
    """Evaluate one identity case; regressivity violations become skips."""
    if case.id == "NONCOMMUTE_witness":
        dev = _DevTracker()
        fwd, bwd = noncommute_values(case.ctx, case.params.get("t", 1.0))
        dev.add(case.params.get("t", 1.0), fwd, bwd)
        return _report(case, dev, NONCOMMUTE_THRESHOLD,
                       passed=dev.max_abs > NONCOMMUTE_THRESHOLD)
    if case.id == "CONFORMABILITY_limits":
        rep = check_conformability(case.ctx.kernel, case.ctx.scale,
                                   probes=_probes(case), cfg=case.ctx.cfg)
        dev = _DevTracker()
        worst = max(rep.conditions, key=rep.conditions.get)
        dev.max_abs = rep.conditions[worst]
        dev.max_rel = rep.conditions[worst]
        return _report(case, dev, rep.tolerance, passed=rep.passed)
    fn = _EVALUATORS.get(case.id)
    if fn is None:
        raise BadCase(f"unknown identity id {case.id!r}")
    dev = _DevTracker()
    tol = case_tolerance(case.ctx)
    try:
        fn(case, dev)
    except NotRegressive as exc:
        return _report(case, _DevTracker(), tol, passed=True, skipped=True,
                       reason=f"NotRegressive: {exc}")
    return _report(case, dev, tol, passed=dev.max_eff <= tol)


def default_scales() -> tuple[TimeScale, ...]:
    return (
        build_timescale([interval(0.5, 3.0)], label="R[0.5,3]"),
        build_timescale([point(float(k)) for k in range(1, 9)], label="Z{1..8}"),
        build_timescale([point(1.0), interval(2.0, 3.0), point(4.0)],
                        label="hybrid{1}u[2,3]u{4}"),
    )


def default_kernels(alphas=(0.3, 0.8)) -> tuple:
    kernels = []
    for alpha in alphas:
        kernels.append(make_kernel("power_omega", alpha, omega=1.0))
        kernels.append(make_kernel("abs_power", alpha))
        kernels.append(make_kernel("trig", alpha))
    return tuple(kernels)


def verify_all(scales=None, kernels=None, probes=None,
               cfg: NumericConfig = DEFAULT_CONFIG) -> list[VerificationReport]:
    """Cartesian sweep of the per-context identities plus the pinned witness.

    The non-commutation witness runs once in its canonical configuration:
    t-constant kernels (power_omega) genuinely commute, so the inequality can
    only be certified where the kernels depend on t.
    """
    if scales is None:
        scales = default_scales()
    if kernels is None:
        kernels = default_kernels()
    if probes is not None and len(tuple(probes)) == 0:
        return []
    probes = tuple(probes) if probes is not None else ()
    reports: list[VerificationReport] = []
    for scale in scales:
        for kernel in kernels:
            try:
                ctx = ConformableContext(scale, kernel, cfg)
            except KernelSingular as exc:
                for ident in _CTX_IDS:
                    dev = _DevTracker()
                    reports.append(VerificationReport(
                        id=ident, scale=scale.describe(), kernel=kernel.label,
                        alpha=kernel.alpha, max_abs_dev=0.0, max_rel_dev=0.0,
                        worst_point=None, tolerance_used=0.0, passed=True,
                        skipped=True, skip_reason=f"KernelSingular: {exc}"))
                continue
            for ident in _CTX_IDS:
                reports.append(verify(IdentityCase(ident, ctx, probes)))
    nc = noncommute_context(cfg)
    reports.append(verify(IdentityCase("NONCOMMUTE_witness", nc, probes)))
    return reports


def reports_to_dicts(reports) -> list[dict]:
    return [r.to_dict() for r in reports]
