"""
Tests for the quasi-dispersive ZZ estimates.
"""

import math

import pytest

from effham.apps.dispersive import (
    Detunings,
    circle_root,
    find_zero,
    zero_circle_residual,
    zeta4,
    zeta4_contributions,
    zeta6,
    zeta_disp,
    zeta_exact_qrq,
    zeta_npad8,
    zeta_rswt,
    zeta_rswt_traced,
)
from effham.cqed import CqedParams
from effham.errors import ComputationError, ResonanceError
from effham.expr import evaluate


def detunings(p: CqedParams, symbolic: bool = False) -> Detunings:
    return Detunings.from_params(p, symbolic)


class TestDetunings:
    """Resonator-frame parameters."""

    def test_from_params(self, fig4_point):
        d = detunings(fig4_point)
        assert d.delta1 + d.delta2 == pytest.approx(-0.5)
        assert d.delta_minus == pytest.approx(0.132)
        assert d.g1 == d.g2 == 0.05

    def test_swapped(self):
        d = Detunings(-0.4, -0.7, -0.3, -0.2, 0.01, 0.02)
        assert d.swapped() == Detunings(-0.7, -0.4, -0.2, -0.3, 0.02, 0.01)
        assert d.swapped().swapped() == d


class TestFourthOrder:
    """zeta4 and its parts."""

    def test_contributions_sum_to_zeta4(self, dispersive_points):
        for p in dispersive_points:
            d = detunings(p)
            parts = zeta4_contributions(d)
            assert zeta4(d).value == pytest.approx(parts.total, rel=1e-12)
            assert zeta_disp(d).value == pytest.approx(parts.disp, rel=1e-12)

    def test_close_to_exact(self, dispersive_points):
        for p in dispersive_points:
            exact = zeta_exact_qrq(p).value
            assert zeta4(detunings(p)).value == pytest.approx(exact, rel=0.02)

    def test_symmetric_in_qubit_labels(self, dispersive_points):
        d = detunings(dispersive_points[3])
        assert zeta4(d.swapped()).value == pytest.approx(zeta4(d).value, rel=1e-12)

    def test_symbolic_matches_numeric(self, fig4_point):
        env = fig4_point.env()
        symbolic = detunings(fig4_point, symbolic=True)
        numeric = detunings(fig4_point)
        for estimate in (zeta4, zeta_disp, zeta6):
            assert evaluate(estimate(symbolic).value, env) == pytest.approx(estimate(numeric).value, rel=1e-12)

    @pytest.mark.parametrize("estimate", [zeta4, zeta_disp, zeta6])
    def test_resonance(self, estimate):
        d = Detunings(-0.4, -0.73, -0.33, -0.33, 0.05, 0.05)
        with pytest.raises(ResonanceError) as excinfo:
            estimate(d)
        assert excinfo.value.denominator == "Delta_minus+alpha1"


class TestSixthOrder:
    """zeta6 against the exact value."""

    def test_improves_on_zeta4(self, dispersive_points):
        err4 = err6 = 0.0
        for p in dispersive_points:
            exact = zeta_exact_qrq(p).value
            d = detunings(p)
            err4 += abs(zeta4(d).value - exact)
            err6 += abs(zeta6(d).value - exact)
        assert err6 < err4

    def test_matches_rswt_at_dispersive_points(self, dispersive_points):
        for p in dispersive_points:
            assert zeta6(detunings(p)).value == pytest.approx(zeta_rswt(p, order=6).value, rel=1e-3)

    @pytest.mark.parametrize("estimate,order,min_slope", [(zeta4, 4, 5.5), (zeta6, 6, 7.5)])
    def test_closed_form_agrees_with_rswt_through_its_order(self, estimate, order, min_slope):
        # the first missing term is the next even power of g
        couplings = (0.08, 0.04)
        residuals = []
        for g in couplings:
            p = CqedParams.quasi_dispersive(-1.6, 0.05, -0.33, g)
            residuals.append(abs(estimate(detunings(p)).value - zeta_rswt(p, order=order).value))
        slope = math.log(residuals[0] / residuals[1]) / math.log(couplings[0] / couplings[1])
        assert slope >= min_slope


class TestZeroCircle:
    """Zeros of zeta4 for equal anharmonicities."""

    def test_circle_root(self, fig4_alpha):
        root = circle_root(0.4 * abs(fig4_alpha), fig4_alpha)
        assert root == pytest.approx(-0.63245, abs=1e-5)
        assert zero_circle_residual(root, 0.132, fig4_alpha) == pytest.approx(0.0, abs=1e-15)

    def test_zeta4_vanishes_on_circle(self, fig4_alpha):
        dm = 0.132

        def f(dp):
            return zeta4(detunings(CqedParams.quasi_dispersive(dp, dm, fig4_alpha, 0.05))).value

        assert find_zero(f, -0.7, -0.55) == pytest.approx(circle_root(dm, fig4_alpha), abs=1e-10)

    @pytest.mark.parametrize("ratio", [0.0, 0.2, 0.4])
    def test_zeta4_roots_on_circle(self, fig4_alpha, ratio):
        dm = ratio * abs(fig4_alpha)
        guess = circle_root(dm, fig4_alpha)

        def f(dp):
            return zeta4(detunings(CqedParams.quasi_dispersive(dp, dm, fig4_alpha, 0.05))).value

        root = find_zero(f, guess - 0.03, guess + 0.03)
        assert abs(zero_circle_residual(root, dm, fig4_alpha)) <= 1e-10 * fig4_alpha ** 2

    def test_no_root(self, fig4_alpha):
        with pytest.raises(ComputationError):
            circle_root(0.5, fig4_alpha)
        with pytest.raises(ComputationError):
            find_zero(lambda x: x * x + 1.0, -1.0, 1.0)


class TestEngineRoutes:
    """NPAD, RSWT and exact diagonalization on the two-excitation model."""

    def test_npad8_symbolic_matches_numeric(self, fig4_point):
        symbolic = zeta_npad8(fig4_point, symbolic=True).value
        numeric = zeta_npad8(fig4_point).value
        assert evaluate(symbolic, fig4_point.env()) == pytest.approx(numeric, abs=1e-11)

    def test_npad8_uncoupled_qubit(self, fig4_point):
        p = fig4_point.model_copy(update={"g2": 0.0})
        assert abs(zeta_npad8(p).value) < 1e-14
        assert abs(zeta_exact_qrq(p).value) < 1e-14

    def test_rswt_close_to_exact(self, dispersive_points):
        p = dispersive_points[0]
        exact = zeta_exact_qrq(p).value
        estimate, trace = zeta_rswt_traced(p, order=4)
        assert estimate.method == "rswt"
        assert estimate.value == pytest.approx(exact, rel=0.05)
        assert trace.total_commutators == 4

    def test_rswt_symbolic_matches_numeric(self, dispersive_points):
        p = dispersive_points[0]
        symbolic = zeta_rswt(p, order=2, symbolic=True).value
        assert evaluate(symbolic, p.env()) == pytest.approx(zeta_rswt(p, order=2).value, abs=1e-13)

    def test_truncated_reference_is_exact(self, fig4_point):
        assert zeta_exact_qrq(fig4_point).value == pytest.approx(
            zeta_exact_qrq(fig4_point, max_excitations=None).value, abs=1e-12)
