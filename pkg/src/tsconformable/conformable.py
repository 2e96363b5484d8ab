"""Kernel pairs and the order-alpha conformable operators built on them.

The operator is D^a f = k1(a, t) f + k0(a, t) f^Delta for a kernel pair
(k0, k1) whose limits tie it continuously between the identity (a = 0) and
the delta derivative (a = 1).  Built-in families evaluate the a = 0 and
a = 1 endpoints exactly so both reductions hold bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

from .delta_calculus import (
    DEFAULT_CONFIG,
    ExponentialProfile,
    NumericConfig,
    Scalar,
    as_function,
    delta_derivative,
    delta_integral,
    ts_exponential,
)
from .errors import BadParam, KernelSingular, NotInScaleKappa, ReversedBounds, SpecError
from .timescale import TimeScale, kappa_restrict, sample_grid

POWER_OMEGA = "power_omega"
ABS_POWER = "abs_power"
TRIG = "trig"
CUSTOM = "custom"

_T_DEPENDENT_FAMILIES = (ABS_POWER, TRIG)


@dataclass(frozen=True)
class KernelPair:
    """An order alpha plus the weight maps (k0, k1) of the operator."""

    alpha: float
    k0: Callable[[float, float], float]
    k1: Callable[[float, float], float]
    family: str = CUSTOM
    omega: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise BadParam(f"alpha must be in [0, 1], got {self.alpha}")

    def k0_at(self, t: float) -> float:
        return self.k0(self.alpha, t)

    def k1_at(self, t: float) -> float:
        return self.k1(self.alpha, t)

    def with_alpha(self, alpha: float) -> "KernelPair":
        return replace(self, alpha=alpha)

    @property
    def label(self) -> str:
        if self.family == POWER_OMEGA:
            return f"power_omega(omega={self.omega:g},alpha={self.alpha:g})"
        return f"{self.family}(alpha={self.alpha:g})"


def _pw_k1(a, t, w):
    if a == 0.0:
        return 1.0
    if a == 1.0:
        return 0.0
    return (1.0 - a) * w**a


def _pw_k0(a, t, w):
    if a == 0.0:
        return 0.0
    if a == 1.0:
        return 1.0
    return a * w ** (1.0 - a)


def _abs_k1(a, t):
    if a == 0.0:
        return 1.0
    if a == 1.0:
        return 0.0
    return (1.0 - a) * abs(t) ** a


def _abs_k0(a, t):
    if a == 0.0:
        return 0.0
    if a == 1.0:
        return 1.0
    return a * abs(t) ** (1.0 - a)


def _trig_k1(a, t):
    # cos(pi/2) is ~6e-17 in floats; pin the endpoints so D^1 f == f^Delta holds
    # bit-for-bit.
    if a == 0.0:
        return 1.0
    if a == 1.0:
        return 0.0
    return math.cos(0.5 * math.pi * a) * abs(t) ** a


def _trig_k0(a, t):
    if a == 0.0:
        return 0.0
    if a == 1.0:
        return 1.0
    return math.sin(0.5 * math.pi * a) * abs(t) ** (1.0 - a)


def make_kernel(family: str, alpha: float, omega: float | None = None,
                k0=None, k1=None) -> KernelPair:
    """Build a kernel pair from one of the built-in families or custom maps.

    power_omega: k1 = (1-a) w^a,        k0 = a w^(1-a),      w in (0, inf)
    abs_power:   k1 = (1-a) |t|^a,      k0 = a |t|^(1-a)
    trig:        k1 = cos(a pi/2)|t|^a, k0 = sin(a pi/2)|t|^(1-a)

    The |t|-based families require 0 not to lie on the working scale; that is
    enforced when a context is built.
    """
    if family == POWER_OMEGA:
        if omega is None or not omega > 0.0:
            raise BadParam(f"power_omega needs omega > 0, got {omega!r}")
        w = float(omega)
        return KernelPair(alpha, lambda a, t: _pw_k0(a, t, w),
                          lambda a, t: _pw_k1(a, t, w), family, w)
    if family == ABS_POWER:
        return KernelPair(alpha, _abs_k0, _abs_k1, family)
    if family == TRIG:
        return KernelPair(alpha, _trig_k0, _trig_k1, family)
    if family == CUSTOM:
        if k0 is None or k1 is None:
            raise BadParam("custom kernels need explicit k0 and k1 maps")
        return KernelPair(alpha, k0, k1, family)
    raise BadParam(f"unknown kernel family {family!r}")


def kernel_from_spec(spec, alpha_override: float | None = None) -> KernelPair:
    """Kernel-spec JSON: {"family": ..., "alpha": ..., "omega": ...}."""
    if not isinstance(spec, dict) or "family" not in spec:
        raise SpecError("kernel spec must be an object with a 'family'")
    family = spec["family"]
    if family not in (POWER_OMEGA, ABS_POWER, TRIG):
        raise SpecError(f"unknown kernel family {family!r}")
    alpha = alpha_override if alpha_override is not None else spec.get("alpha")
    if alpha is None:
        raise SpecError("kernel spec needs an 'alpha'")
    try:
        alpha = float(alpha)
    except (TypeError, ValueError) as exc:
        raise SpecError(f"bad alpha {alpha!r}") from exc
    if not 0.0 <= alpha <= 1.0:
        raise SpecError(f"alpha must be in [0, 1], got {alpha}")
    omega = spec.get("omega")
    if family == POWER_OMEGA and omega is None:
        raise SpecError("power_omega kernel spec needs 'omega'")
    return make_kernel(family, alpha, omega=omega)


def kernel_to_spec(kernel: KernelPair) -> dict:
    out = {"family": kernel.family, "alpha": kernel.alpha}
    if kernel.omega is not None:
        out["omega"] = kernel.omega
    return out


@dataclass(frozen=True)
class ConformableContext:
    """Scale + kernel pair + numeric config: the evaluation environment."""

    scale: TimeScale
    kernel: KernelPair
    cfg: NumericConfig = DEFAULT_CONFIG
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kernel.family in _T_DEPENDENT_FAMILIES and self.scale.contains(0.0):
            raise KernelSingular(
                f"{self.kernel.family} kernels vanish at t=0, which lies on "
                f"{self.scale.describe()}"
            )

    def q_shift(self, p) -> Callable[[float], Scalar]:
        """The shifted argument (p(t) - k1) / k0 feeding the exponential."""
        p = as_function(p)
        k = self.kernel
        return lambda t: (p(t) - k.k1_at(t)) / k.k0_at(t)

    def restricted(self, order: int = 1) -> "ConformableContext":
        return replace(self, scale=kappa_restrict(self.scale, order))


def _require_positive_order(ctx: ConformableContext) -> None:
    if ctx.kernel.alpha == 0.0:
        raise BadParam("exponentials and integrals need alpha in (0, 1]")


def e0_profile(ctx: ConformableContext) -> ExponentialProfile:
    """Cached fast evaluator of E_0 on the context's scale."""
    prof = ctx._cache.get("e0")
    if prof is None:
        _require_positive_order(ctx)
        k = ctx.kernel
        prof = ExponentialProfile(ctx.scale, lambda t: -k.k1_at(t) / k.k0_at(t), ctx.cfg)
        ctx._cache["e0"] = prof
    return prof


def ep_profile(ctx: ConformableContext, p) -> ExponentialProfile:
    """Fast evaluator of E_p; build once and reuse across evaluation points."""
    _require_positive_order(ctx)
    return ExponentialProfile(ctx.scale, ctx.q_shift(p), ctx.cfg)


# -- the conformable operators ---------------------------------------------------


def conformable_derivative(ctx: ConformableContext, f, t: float) -> Scalar:
    """D^a f(t) = k1(a, t) f(t) + k0(a, t) f^Delta(t).

    When k0 vanishes (exactly at a = 0) the delta derivative is not consulted,
    so the identity reduction holds on all of T and bit-for-bit.
    """
    ts = ctx.scale.require(t)
    f = as_function(f)
    k0v = ctx.kernel.k0_at(ts)
    k1v = ctx.kernel.k1_at(ts)
    if k0v == 0.0:
        return k1v * f(ts)
    return k1v * f(ts) + k0v * delta_derivative(ctx.scale, f, ts, ctx.cfg)


def conformable_derivative2(ctx_outer: ConformableContext,
                            ctx_inner: ConformableContext, f, t: float) -> Scalar:
    """Composition D^beta (D^alpha f) at t in T^kappa^2.

    The inner derivative is differentiated as a plain function over the
    kappa-restricted scale; the symbolic expansion of the composition is used
    only as a test oracle, keeping this path valid for custom kernels.
    """
    if ctx_outer.scale != ctx_inner.scale:
        raise BadParam("composition requires both contexts on the same scale")
    ts = ctx_outer.scale.require(t)
    if not kappa_restrict(ctx_outer.scale, 2).contains(ts):
        raise NotInScaleKappa(
            f"t={t!r} is outside T^kappa^2 of {ctx_outer.scale.describe()}"
        )
    f = as_function(f)
    inner = lambda s: conformable_derivative(ctx_inner, f, s)
    return conformable_derivative(ctx_outer.restricted(1), inner, ts)


def conformable_exponential(ctx: ConformableContext, p, t: float, s: float) -> Scalar:
    """E_p(t, s): the scale exponential of the shifted argument (p - k1)/k0."""
    _require_positive_order(ctx)
    return ts_exponential(ctx.scale, ctx.q_shift(p), t, s, ctx.cfg)


def conformable_e0(ctx: ConformableContext, t: float, s: float) -> Scalar:
    """E_0(t, s) = e_{-k1/k0}(t, s)."""
    return conformable_exponential(ctx, 0.0, t, s)


def conformable_integral(ctx: ConformableContext, f, a: float, t: float) -> Scalar:
    """The alpha-integral: delta integral of f(s) E_0(t, s) / k0(a, s) on [a, t]."""
    _require_positive_order(ctx)
    sa = ctx.scale.require(a)
    st = ctx.scale.require(t)
    if sa > st:
        raise ReversedBounds(f"alpha-integral needs a <= t, got a={a!r}, t={t!r}")
    if sa == st:
        return 0.0
    e0 = e0_profile(ctx)
    e0.check_range(sa, st)
    k = ctx.kernel
    f = as_function(f)
    integrand = lambda s: f(s) * e0.value(st, s) / k.k0_at(s)
    return delta_integral(ctx.scale, integrand, sa, st, ctx.cfg)


# -- conformability diagnostics ---------------------------------------------------


@dataclass(frozen=True)
class ConformabilityReport:
    """Max deviation per limit/reduction condition, with a pass verdict."""

    kernel: str
    conditions: dict[str, float]
    tolerance: float
    passed: bool

    @property
    def max_deviation(self) -> float:
        return max(self.conditions.values())


_ALPHA_LO = 1e-6
_ALPHA_HI = 1.0 - 1e-6
_CONFORMABILITY_TOL = 1e-4


def check_conformability(kernel: KernelPair, scale: TimeScale, samples: int = 24,
                         probes=None, cfg: NumericConfig = DEFAULT_CONFIG) -> ConformabilityReport:
    """Probe the kernel limit conditions and the order-0/1 reductions.

    The four limits are evaluated at alpha = 1e-6 and 1 - 1e-6 on sampled
    scale points; the reductions compare D^0 f against f and D^1 f against
    f^Delta for a probe battery.  Loose 1e-4 tolerance so analytic kernels
    pass with margin while structurally wrong ones (for example k1 == 0)
    fail on the violated limit.
    """
    from .verify import probe_battery  # default battery lives with the suite

    if probes is None:
        probes = probe_battery()
    isolated = sum(1 for s in scale.segments if s.is_point)
    n_int = len(scale.segments) - isolated
    pts = sample_grid(scale, max(samples, isolated + 2 * n_int))
    conds = {
        "k1_limit_alpha_to_0": max(abs(kernel.k1(_ALPHA_LO, t) - 1.0) for t in pts),
        "k0_limit_alpha_to_0": max(abs(kernel.k0(_ALPHA_LO, t)) for t in pts),
        "k1_limit_alpha_to_1": max(abs(kernel.k1(_ALPHA_HI, t)) for t in pts),
        "k0_limit_alpha_to_1": max(abs(kernel.k0(_ALPHA_HI, t) - 1.0) for t in pts),
    }
    ctx0 = ConformableContext(scale, kernel.with_alpha(0.0), cfg)
    ctx1 = ConformableContext(scale, kernel.with_alpha(1.0), cfg)
    # probe the reductions on T^kappa: broken kernels keep a live k0 at
    # order 0, and the delta derivative does not exist at the scale maximum
    kappa_pts = [t for t in pts if kappa_restrict(scale, 1).contains(t)]
    dev0 = 0.0
    dev1 = 0.0
    for f in probes:
        f = as_function(f)
        dev0 = max(
            dev0, max(abs(conformable_derivative(ctx0, f, t) - f(t)) for t in kappa_pts)
        )
        dev1 = max(
            dev1,
            max(
                abs(conformable_derivative(ctx1, f, t) - delta_derivative(scale, f, t, cfg))
                for t in kappa_pts
            ),
        )
    conds["order0_identity"] = dev0
    conds["order1_delta"] = dev1
    passed = all(v <= _CONFORMABILITY_TOL for v in conds.values())
    return ConformabilityReport(kernel.label, conds, _CONFORMABILITY_TOL, passed)
