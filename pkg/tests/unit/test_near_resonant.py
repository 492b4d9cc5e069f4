"""
Tests for the near-resonant ZZ estimates on the three-level CZ block.
"""

import math

import pytest

from effham.apps.estimates import zeta_numeric
from effham.apps.near_resonant import (
    first_rotation_cosine,
    jump_detunings,
    level_repulsion,
    two_rotation_closed_form,
    zeta_exact,
    zeta_kerr_approx,
    zeta_leading_perturbation,
    zeta_two_level,
    zeta_two_rotation,
)
from effham.cqed import cz_subspace_parameters, duffing_two_qubit, two_qubit_basis
from effham.errors import RegimeError
from effham.expr import evaluate

# omega1 - omega2 values away from both level crossings of the fig3 model
DETUNINGS = (-0.7, -0.45, -0.1, 0.05, 0.2, 0.45, 0.7)


def block(fig3_params, detuning, symbolic=False):
    p = fig3_params.model_copy(update={"omega1": fig3_params.omega2 + detuning})
    return p, cz_subspace_parameters(p, symbolic)[:4]


class TestClosedForms:
    """Level repulsion and rotation cosines."""

    def test_level_repulsion_keeps_sign(self):
        assert level_repulsion(-0.3, 0.4) == pytest.approx(-0.5)
        assert level_repulsion(0.3, 0.4) == pytest.approx(0.5)
        assert level_repulsion(0.0, 0.4) == 0.4

    def test_first_rotation_cosine(self):
        assert first_rotation_cosine(0.3, 0.0) == 1.0
        assert first_rotation_cosine(0.0, 0.1) == pytest.approx(1 / math.sqrt(2))

    def test_two_level_at_resonance(self):
        assert zeta_two_level(0.0, 0.14).value == -0.14

    def test_jump_detunings(self, fig3_params):
        assert jump_detunings(fig3_params.alpha1, fig3_params.alpha2) == (0.3, -0.3)

    @pytest.mark.parametrize("detuning", DETUNINGS)
    def test_closed_form_matches_rotations(self, fig3_params, detuning):
        _, (delta, big_delta, g1, g2) = block(fig3_params, detuning)
        closed = two_rotation_closed_form(delta, big_delta, g1, g2) + delta
        assert zeta_two_rotation(delta, big_delta, g1, g2).value == pytest.approx(closed, abs=1e-14)


class TestAccuracy:
    """Estimates against the exact block value."""

    @pytest.mark.parametrize("detuning", DETUNINGS)
    def test_block_reference_matches_full_model(self, fig3_params, detuning):
        p, (delta, big_delta, g1, g2) = block(fig3_params, detuning)
        full = zeta_numeric(duffing_two_qubit(p), two_qubit_basis(p), ("00", "01", "10", "11"))
        assert zeta_exact(delta, big_delta, g1, g2).value == pytest.approx(full.value, abs=1e-12)

    @pytest.mark.parametrize("detuning", DETUNINGS)
    def test_two_rotation_beats_two_level(self, fig3_params, detuning):
        _, (delta, big_delta, g1, g2) = block(fig3_params, detuning)
        exact = zeta_exact(delta, big_delta, g1, g2).value
        two_rotation = zeta_two_rotation(delta, big_delta, g1, g2).value
        two_level = zeta_two_level(delta, g1).value
        assert abs(two_rotation - exact) < abs(two_level - exact)

    @pytest.mark.parametrize("detuning", DETUNINGS)
    def test_third_rotation_improves(self, fig3_params, detuning):
        _, (delta, big_delta, g1, g2) = block(fig3_params, detuning)
        exact = zeta_exact(delta, big_delta, g1, g2).value
        two = zeta_two_rotation(delta, big_delta, g1, g2).value
        three = zeta_two_rotation(delta, big_delta, g1, g2, third_rotation=True).value
        assert abs(three - exact) <= abs(two - exact)

    def test_far_detuned_agreement(self, fig3_params):
        _, (delta, big_delta, g1, g2) = block(fig3_params, 0.7)
        exact = zeta_exact(delta, big_delta, g1, g2).value
        estimate = zeta_two_rotation(delta, big_delta, g1, g2)
        assert abs(estimate.value - exact) < 1e-2 * abs(exact)
        assert estimate.error_bound is not None and estimate.error_bound > 0
        assert estimate.secondary_bound is not None

    def test_leading_perturbation_far_detuned(self, fig3_params):
        _, (delta, big_delta, g1, g2) = block(fig3_params, 0.7)
        exact = zeta_exact(delta, big_delta, g1, g2).value
        estimate = zeta_leading_perturbation(delta, big_delta, g1, g2).value
        assert estimate == pytest.approx(exact, rel=0.2)


class TestKerrApprox:
    """Kerr-form estimate and its regime."""

    def test_value_and_bounds(self, fig3_params):
        _, (delta, big_delta, g1, g2) = block(fig3_params, 0.45)
        estimate = zeta_kerr_approx(delta, big_delta, g1, g2)
        exact = zeta_exact(delta, big_delta, g1, g2).value
        assert estimate.value == pytest.approx(exact, rel=0.1)
        assert estimate.error_bound > 0

    def test_outside_regime(self, fig3_params):
        _, (delta, big_delta, g1, g2) = block(fig3_params, -0.5)
        with pytest.raises(RegimeError):
            zeta_kerr_approx(delta, big_delta, g1, g2)


class TestSymbolic:
    """Closed-form graphs evaluate to the numeric estimates."""

    @pytest.mark.parametrize("detuning", [-0.45, 0.2, 0.7])
    def test_two_rotation(self, fig3_params, detuning):
        p, numeric_args = block(fig3_params, detuning)
        _, symbolic_args = block(fig3_params, detuning, symbolic=True)
        env = p.env()
        symbolic = zeta_two_rotation(*symbolic_args).value
        assert evaluate(symbolic, env) == pytest.approx(zeta_two_rotation(*numeric_args).value, abs=1e-12)

    def test_kerr_and_two_level(self, fig3_params):
        p, numeric_args = block(fig3_params, 0.45)
        _, symbolic_args = block(fig3_params, 0.45, symbolic=True)
        env = p.env()
        assert evaluate(zeta_kerr_approx(*symbolic_args).value, env) == pytest.approx(
            zeta_kerr_approx(*numeric_args).value, abs=1e-12)
        assert evaluate(zeta_two_level(symbolic_args[0], symbolic_args[2]).value, env) == pytest.approx(
            zeta_two_level(numeric_args[0], numeric_args[2]).value, abs=1e-12)
