import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import brentq

from apsidal.errors import DomainError, UnsupportedExponentError
from apsidal.model import ForceLaw, circular_radius, reduced_potential
from apsidal.schaaf import (
    Route,
    Verdict,
    classify,
    dual_exponent,
    phi,
    phi_range,
    poly_P,
    poly_Q,
    poly_R,
    test_functions,
)


class TestPolynomials:
    def test_P(self):
        assert poly_P(1.5, 0.5) == pytest.approx(0.3125, abs=1e-15)
        assert poly_P(0.75, 0.0) == pytest.approx(-0.0390625, abs=1e-15)
        assert poly_P(1.0, 3.7) == 0.0

    def test_Q(self):
        assert poly_Q(1.5, 0.5) == pytest.approx(-0.125, abs=1e-15)
        assert poly_Q(0.3, 1.0) == 0.0
        assert poly_Q(1.0, 2.0) == 0.0

    def test_R(self):
        assert poly_R(1.5, 0.5) == 0.0
        assert poly_R(1.5, 1.0) == pytest.approx(0.5)
        assert poly_R(0.75, 0.0) == pytest.approx(0.25)

    @pytest.mark.parametrize("alpha", np.linspace(-3, 1.99, 41))
    def test_algebraic_anchors(self, alpha):
        a = alpha
        assert poly_P(a, a - 1) == pytest.approx(5 * (a - 2) ** 2 * (a - 1) ** 2, abs=1e-12)
        assert poly_Q(a, a - 1) == pytest.approx((1 - a) * (a - 2) ** 2, abs=1e-12)
        if a != 0:
            expected = (a - 2) ** 2 * (a - 1) * (2 * a * a + a + 9) / a
            assert poly_P(a, 2 / a) == pytest.approx(expected, rel=1e-12, abs=1e-12)


class TestPhi:
    def test_examples(self):
        assert phi(ForceLaw(1, 1), 0.5) == pytest.approx(0.5)
        assert phi(ForceLaw(0.5, 2), 1.0) == pytest.approx(math.sqrt(2))
        with pytest.raises(DomainError):
            phi(ForceLaw(1, 1), 0.0)

    @pytest.mark.parametrize("alpha, ell", [(1.5, 1.0), (0.7, 2.0), (-1.5, 0.5)])
    def test_circular_point_and_inflection(self, alpha, ell):
        law = ForceLaw(alpha, ell)
        # well minimum solved numerically: W' = 0
        rho_star = brentq(lambda r: reduced_potential(law, r).d1, 1e-6, 1e3, xtol=1e-15)
        assert rho_star == pytest.approx(ell / circular_radius(law), rel=1e-12)
        assert phi(law, rho_star) == pytest.approx(1.0, rel=1e-12)
        # R vanishes where W'' does (the inflection point), at z = alpha - 1
        if alpha > 1:
            rho_infl = brentq(lambda r: reduced_potential(law, r).d2, 1e-9, rho_star, xtol=1e-15)
            assert phi(law, rho_infl) == pytest.approx(alpha - 1, rel=1e-10)
            assert poly_R(alpha, phi(law, rho_infl)) == pytest.approx(0.0, abs=1e-10)

    @pytest.mark.parametrize("alpha, upper, f", [
        (1.0, 2.0, 2.0), (0.5, 4.0, 4 ** (1 / 1.5)), (1.5, 4 / 3, None)])
    def test_phi_range(self, alpha, upper, f):
        rng = phi_range(ForceLaw(alpha, 1))
        assert (rng.lower, rng.upper) == pytest.approx((0.0, upper))
        if f is not None:
            assert rng.f == pytest.approx(f, rel=1e-14)
        assert phi(ForceLaw(alpha, 1), rng.f) == pytest.approx(rng.upper, rel=1e-13)

    def test_phi_range_unsupported(self):
        with pytest.raises(UnsupportedExponentError):
            phi_range(ForceLaw(-1, 1))

    @given(st.floats(0.05, 1.95), st.floats(0.1, 10))
    def test_annulus_edge_is_zero_level_of_W(self, alpha, ell):
        rng = phi_range(ForceLaw(alpha, ell))
        assert reduced_potential(ForceLaw(alpha, ell), rng.f).W == pytest.approx(0.0, abs=1e-10 * rng.f**2)


class TestFactorizations:
    def test_kepler(self):
        s = test_functions(ForceLaw(1, 1), 1.7)
        assert (s.A, s.B, s.C) == pytest.approx((0.0, 0.0, 1.0), abs=1e-15)

    def test_P_example_through_factorization(self):
        law = ForceLaw(1.5, 1)
        rho = 0.5 ** (1 / 0.5)  # phi(rho) = rho**0.5 = 0.5
        assert phi(law, rho) == pytest.approx(0.5)
        assert test_functions(law, rho).A == pytest.approx(rho**-3 * 0.3125, rel=1e-12)

    def test_random_identities(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            alpha = rng.uniform(-3, 2)
            if abs(alpha) < 1e-3:
                continue
            ell, rho = rng.uniform(0.1, 10), rng.uniform(0.1, 10)
            law = ForceLaw(alpha, ell)
            s, z = test_functions(law, rho), phi(law, rho)
            assert s.A == pytest.approx(ell ** (-2 * alpha) * rho ** (2 * alpha - 6) * poly_P(alpha, z),
                                        rel=1e-10, abs=1e-300)
            assert s.B == pytest.approx(ell ** (-2 * alpha) * rho ** (2 * alpha - 4) * poly_Q(alpha, z),
                                        rel=1e-10, abs=1e-300)
            assert s.C == pytest.approx(ell ** -alpha * rho ** (alpha - 2) * poly_R(alpha, z),
                                        rel=1e-10, abs=1e-300)


class TestClassify:
    def test_examples(self):
        v = classify(ForceLaw(0.75, 1))
        assert (v.verdict, v.route) == (Verdict.DECREASING, Route.DIRECT)
        assert all(p < 0 for _, p in v.p_endpoints)
        v = classify(ForceLaw(1.5, 1))
        assert (v.verdict, v.route) == (Verdict.INCREASING, Route.DIRECT)
        assert v.l_interval == pytest.approx((0.5, 4 / 3))
        assert v.q_at_inflection == pytest.approx(-0.125)
        v = classify(ForceLaw(0.3, 1))
        assert v.verdict is Verdict.INCONCLUSIVE
        assert v.p_endpoints[0][1] == pytest.approx((-1.7) * 0.49 * (-0.4))
        assert v.p_endpoints[1][1] < 0

    def test_duality_route(self):
        v = classify(ForceLaw(-3, 1))
        assert (v.verdict, v.route) == (Verdict.INCREASING, Route.DUALITY)
        assert v.dual_alpha == pytest.approx(1.2)
        assert classify(ForceLaw(-1.5, 2)).verdict is Verdict.DECREASING

    @pytest.mark.parametrize("alpha", [0.1, 0.3, 0.5, -0.5, 1.0, -2.0])
    def test_inconclusive(self, alpha):
        assert classify(ForceLaw(alpha, 1)).verdict is Verdict.INCONCLUSIVE

    def test_verdict_independent_of_ell(self):
        for alpha in (-3.0, -1.0, 0.3, 0.8, 1.7):
            verdicts = {classify(ForceLaw(alpha, ell)).verdict for ell in (0.3, 1, 7)}
            assert len(verdicts) == 1

    @given(st.floats(0.5, 1.0, exclude_min=True, exclude_max=True))
    def test_decreasing_band(self, alpha):
        assert classify(ForceLaw(alpha, 1)).verdict is Verdict.DECREASING

    @given(st.floats(1.0, 2.0, exclude_min=True, exclude_max=True))
    def test_increasing_band(self, alpha):
        assert classify(ForceLaw(alpha, 1)).verdict is Verdict.INCREASING


class TestDual:
    @pytest.mark.parametrize("alpha, expected", [(1, -2), (0.5, -2 / 3), (0, 0)])
    def test_examples(self, alpha, expected):
        assert dual_exponent(alpha) == pytest.approx(expected, abs=1e-15)

    def test_two_rejected(self):
        with pytest.raises(DomainError):
            dual_exponent(2)

    @given(st.floats(-50, 1.99))
    def test_involution(self, alpha):
        assert dual_exponent(dual_exponent(alpha)) == pytest.approx(alpha, rel=1e-13, abs=1e-13)

    @given(st.floats(0.5, 2.0, exclude_min=True, exclude_max=True))
    def test_maps_band_onto_negative_range(self, alpha):
        assert dual_exponent(alpha) < -2 / 3 + 1e-12
