import cmath
import math

import pytest

from tsconformable import (
    ExponentialProfile,
    NotInScaleKappa,
    NotRegressive,
    NumericConfig,
    StencilFailure,
    adaptive_simpson,
    build_timescale,
    delta_derivative,
    delta_derivative2,
    delta_integral,
    interval,
    is_regressive,
    point,
    ts_exponential,
)

SQ = lambda t: t * t


class TestDeltaDerivative:
    def test_scattered_quotient_exact(self, z_window):
        assert delta_derivative(z_window, SQ, 3.0) == 7.0

    def test_dense_classical(self, r_window):
        assert delta_derivative(r_window, SQ, 0.5) == pytest.approx(1.0, abs=1e-10)

    def test_gap_quotient(self):
        T = build_timescale([point(0), interval(1, 2)])
        assert delta_derivative(T, SQ, 0.0) == 1.0

    def test_left_dense_max_uses_backward_stencil(self, r_window):
        assert delta_derivative(r_window, SQ, 1.0) == pytest.approx(2.0, abs=1e-9)

    def test_h_grid_bit_exact(self):
        h = 0.25
        T = build_timescale([point(k * h) for k in range(9)])
        f = lambda t: math.sin(t)
        t = 0.5
        assert delta_derivative(T, f, t) == (f(t + h) - f(t)) / h

    def test_q_difference_quotient(self):
        # on q^k points the delta derivative is the Jackson q-derivative
        from tsconformable import scale_from_spec

        q = 2.0
        T = scale_from_spec({"type": "qscale", "q": q, "n": 6, "t0": 1.0})
        f = lambda t: t * t
        for k in range(5):
            t = q**k
            expect = (f(q * t) - f(t)) / ((q - 1.0) * t)
            assert delta_derivative(T, f, t) == expect

    def test_constant_and_identity(self, z_window, r_window):
        for T in (z_window, r_window):
            assert delta_derivative(T, lambda t: 4.25, 0.5 if T is r_window else 2.0) == 0.0
        assert delta_derivative(z_window, lambda t: t, 2.0) == 1.0

    def test_outside_kappa(self, z_window):
        with pytest.raises(NotInScaleKappa):
            delta_derivative(z_window, SQ, 8.0)

    def test_singleton_stencil_failure(self):
        T = build_timescale([point(5.0)])
        with pytest.raises(StencilFailure):
            delta_derivative(T, SQ, 5.0)


class TestDeltaDerivative2:
    def test_scattered(self, z_window):
        assert delta_derivative2(z_window, SQ, 1.0) == 2.0

    def test_dense_cubic(self, r_window):
        got = delta_derivative2(r_window, lambda t: t**3, 0.5)
        assert got == pytest.approx(3.0, abs=1e-6)

    def test_constant(self, z_window):
        assert delta_derivative2(z_window, lambda t: 7.0, 2.0) == 0.0

    def test_outside_kappa2(self, z_window):
        with pytest.raises(NotInScaleKappa):
            delta_derivative2(z_window, SQ, 7.0)

    def test_mixed_scale(self):
        T = build_timescale([interval(0, 1), point(2)])
        got = delta_derivative2(T, lambda t: t**3, 0.5)
        assert got == pytest.approx(3.0, abs=1e-6)
        # at the dense max of T^kappa the first derivative jumps (gap quotient
        # vs interior limit), so the second derivative genuinely diverges
        assert abs(delta_derivative2(T, lambda t: t**3, 1.0)) > 1e3


class TestDeltaIntegral:
    def test_unit_scale_riemann_sum(self, z_window):
        assert delta_integral(z_window, lambda t: t, 0.0, 3.0) == 3.0

    def test_classical(self, r_window):
        assert delta_integral(r_window, lambda t: t, 0.0, 1.0) == pytest.approx(0.5, abs=1e-10)

    def test_gap_plus_interval(self):
        T = build_timescale([point(0), interval(1, 2)])
        assert delta_integral(T, lambda t: 1.0, 0.0, 2.0) == pytest.approx(2.0, abs=1e-12)

    def test_empty_and_reversed(self, z_window):
        assert delta_integral(z_window, SQ, 2.0, 2.0) == 0.0
        fwd = delta_integral(z_window, SQ, 0.0, 3.0)
        assert delta_integral(z_window, SQ, 3.0, 0.0) == -fwd

    def test_additive_over_adjacent_windows(self, hybrid):
        f = lambda t: t * t - t
        whole = delta_integral(hybrid, f, 0.0, 3.0)
        split = delta_integral(hybrid, f, 0.0, 1.5) + delta_integral(hybrid, f, 1.5, 3.0)
        assert whole == pytest.approx(split, rel=1e-12)

    def test_linear_in_f(self, hybrid):
        f, g = SQ, lambda t: t + 2
        lhs = delta_integral(hybrid, lambda t: 2 * f(t) - 3 * g(t), 0.0, 3.0)
        rhs = 2 * delta_integral(hybrid, f, 0.0, 3.0) - 3 * delta_integral(hybrid, g, 0.0, 3.0)
        assert lhs == pytest.approx(rhs, rel=1e-12)


class TestRegressivity:
    def test_violation_on_unit_scale(self, z_window):
        chk = is_regressive(z_window, lambda t: -1.0)
        assert not chk
        assert chk.witness is not None

    def test_dense_always_ok(self, r_window):
        assert is_regressive(r_window, lambda t: -1e6)

    def test_ok_on_unit_scale(self, z_window):
        assert is_regressive(z_window, lambda t: -0.25)


class TestExponential:
    def test_product_formula_exact(self, z_window):
        assert ts_exponential(z_window, 1.0, 3.0, 0.0) == 8.0

    def test_classical(self, r_window):
        got = ts_exponential(r_window, 2.5, 0.9, 0.1)
        assert got == pytest.approx(math.exp(2.5 * 0.8), rel=1e-12)

    def test_identity_and_reciprocal(self, z_window):
        assert ts_exponential(z_window, 1.0, 2.0, 2.0) == 1.0
        assert ts_exponential(z_window, 1.0, 0.0, 3.0) == 1.0 / 8.0

    def test_semigroup_on_hybrid(self, hybrid):
        p = lambda t: 0.4 * t - 0.3
        lhs = ts_exponential(hybrid, p, 3.0, 1.2) * ts_exponential(hybrid, p, 1.2, 0.0)
        rhs = ts_exponential(hybrid, p, 3.0, 0.0)
        assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_solves_dynamic_equation(self, hybrid):
        p = lambda t: 0.3 * t
        f = lambda t: ts_exponential(hybrid, p, t, 0.0)
        for t in (0.0, 1.0, 1.4, 2.0):
            got = delta_derivative(hybrid, f, t)
            assert got == pytest.approx(p(t) * f(t), rel=1e-5, abs=1e-8)

    def test_not_regressive_witness(self, z_window):
        with pytest.raises(NotRegressive) as ei:
            ts_exponential(z_window, -1.0, 5.0, 0.0)
        assert ei.value.witness == 0.0

    def test_negative_factors_stay_real(self, z_window):
        v = ts_exponential(z_window, -1.5, 2.0, 0.0)
        assert isinstance(v, float)
        assert v == 0.25  # (-0.5)^2

    def test_complex_argument(self, hybrid):
        v = ts_exponential(hybrid, 1j, 3.0, 0.0)
        assert isinstance(v, complex)
        # |e_{i}| over a dense stretch of length 1 is 1; jumps scale by |1+i|
        assert abs(v) == pytest.approx(abs(1 + 1j) ** 2 * 1.0, rel=1e-10)


class TestExponentialProfile:
    @pytest.mark.parametrize("p", [0.7, lambda t: 0.3 * t - 0.8, lambda t: 1j * t])
    def test_agrees_with_direct(self, hybrid, p):
        prof = ExponentialProfile(hybrid, p)
        for t, s in [(3.0, 0.0), (2.0, 1.3), (0.0, 3.0), (1.7, 1.1)]:
            direct = ts_exponential(hybrid, p, t, s)
            assert prof.value(t, s) == pytest.approx(direct, rel=1e-11)

    def test_check_range(self, z_window):
        prof = ExponentialProfile(z_window, -1.0)
        with pytest.raises(NotRegressive):
            prof.check_range(0.0, 8.0)

    def test_bit_exact_on_unit_scale(self, z_window):
        prof = ExponentialProfile(z_window, 1.0)
        assert prof.value(3.0, 0.0) == 8.0

    def test_agreement_across_default_battery(self):
        # the profile backs solution evaluators and the identity suite, so it
        # must track the direct construction for every default combination
        from tsconformable import ConformableContext
        from tsconformable.verify import default_kernels, default_scales

        for scale in default_scales():
            for kernel in default_kernels((0.3, 0.8)):
                ctx = ConformableContext(scale, kernel)
                for p in (1.0, -0.6, 0.5j):
                    q = ctx.q_shift(p)
                    prof = ExponentialProfile(scale, q)
                    lo, hi = scale.min, scale.max
                    mid = 0.5 * (lo + hi)
                    for t, s in ((hi, lo), (scale.require(scale.sigma(lo)), lo)):
                        direct = ts_exponential(scale, q, t, s)
                        assert prof.value(t, s) == pytest.approx(direct, rel=1e-10)


class TestAdaptiveSimpson:
    def test_polynomial(self):
        assert adaptive_simpson(lambda x: x**3, 0.0, 2.0, 1e-12) == pytest.approx(4.0, abs=1e-10)

    def test_complex(self):
        got = adaptive_simpson(lambda x: cmath.exp(1j * x), 0.0, math.pi, 1e-12)
        assert got == pytest.approx(2j, abs=1e-9)

    def test_empty(self):
        assert adaptive_simpson(lambda x: x, 1.0, 1.0, 1e-10) == 0.0


def test_numeric_config_validation():
    with pytest.raises(Exception):
        NumericConfig(quad_tol=0.0)
