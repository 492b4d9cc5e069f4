"""
Tests for single Givens rotations and pivot selection.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from effham.errors import InputError, InvalidIndexError, StaleRotationError
from effham.expr import Expr, evaluate, param
from effham.givens import (
    CyclicPivot,
    FixedPivots,
    GivensRotation,
    LargestPivot,
    apply_givens,
    half_angle,
    make_givens,
    make_strategy,
    select_pivot,
)
from effham.linalg import HermitianMatrix, offdiag_norm_sq
from tests.helpers import max_abs, random_hermitian

kappas = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False).filter(lambda k: abs(k) > 1e-9)


class TestHalfAngle:
    """t = tan(theta/2) for tan(theta) = kappa."""

    @given(kappa=kappas)
    @settings(max_examples=100, deadline=None)
    def test_smaller_root(self, kappa):
        t, c, s = half_angle(kappa)
        assert abs(t) <= 1.0
        assert math.isclose(t * t + 2 * t / kappa, 1.0, rel_tol=1e-9, abs_tol=1e-9)
        assert math.isclose(c * c + s * s, 1.0, rel_tol=1e-14)
        assert math.copysign(1.0, t) == math.copysign(1.0, kappa)

    def test_limits(self):
        assert half_angle(None)[0] == 1.0
        assert half_angle(0.0)[0] == 0.0
        t, c, s = half_angle(None)
        assert math.isclose(c, s)

    @pytest.mark.parametrize("kappa", [-3.0, -0.2, 0.1, 1.0, 42.0])
    def test_symbolic_form_agrees(self, kappa):
        t_num, c_num, s_num = half_angle(kappa)
        t_sym, c_sym, s_sym = half_angle(param("k"))
        env = {"k": kappa}
        assert math.isclose(evaluate(t_sym, env), t_num, rel_tol=1e-12)
        assert math.isclose(evaluate(c_sym, env), c_num, rel_tol=1e-12)
        assert math.isclose(evaluate(s_sym, env), s_num, rel_tol=1e-12)


class TestMakeGivens:
    """Rotation parameters from the current matrix."""

    def test_real_entry_keeps_sign(self):
        h = HermitianMatrix([[1.0, -0.2], [-0.2, 0.0]])
        r = make_givens(h, 0, 1)
        assert r.g == -0.2
        assert r.phi == 0.0
        assert r.t < 0

    def test_complex_entry_phase(self):
        entry = 0.3 * np.exp(0.7j)
        h = HermitianMatrix([[0.5, entry], [np.conj(entry), -0.5]])
        r = make_givens(h, 0, 1)
        assert math.isclose(r.g, 0.3)
        assert math.isclose(r.phi, -0.7)

    def test_zero_entry_is_identity(self):
        h = HermitianMatrix([[1.0, 0.0], [0.0, 2.0]])
        r = make_givens(h, 0, 1)
        assert r.is_identity
        assert apply_givens(h, r) is h

    def test_indices_are_ordered(self, rng):
        h = random_hermitian(rng, 4)
        assert make_givens(h, 3, 1).pair == (1, 3)

    @pytest.mark.parametrize("pair", [(1, 1), (0, 4), (-1, 2)])
    def test_invalid_pairs(self, rng, pair):
        h = random_hermitian(rng, 4)
        with pytest.raises(InvalidIndexError):
            make_givens(h, *pair)

    def test_symbolic_matrix_is_numeric_only(self):
        r = GivensRotation.identity(0, 1, symbolic=True)
        with pytest.raises(InputError):
            r.matrix(2)


class TestApplyGivens:
    """H' = U H U^H."""

    def test_matches_dense_conjugation(self, rng):
        h = random_hermitian(rng, 5)
        r = make_givens(h, 1, 3)
        u = r.matrix(5)
        rotated = apply_givens(h, r)
        assert max_abs(rotated.data - u @ h.data @ u.conj().T) < 1e-13
        assert rotated[1, 3] == 0
        assert max_abs(u @ u.conj().T - np.eye(5)) < 1e-15

    def test_norm_drops_by_twice_the_entry(self, rng):
        h = random_hermitian(rng, 6)
        before = offdiag_norm_sq(h)
        entry = abs(h[2, 4])
        after = offdiag_norm_sq(apply_givens(h, make_givens(h, 2, 4)))
        assert math.isclose(before - after, 2 * entry ** 2, rel_tol=1e-12)

    def test_level_ordering_is_kept(self):
        h = HermitianMatrix([[2.0, 0.4, 0.1], [0.4, 1.0, 0.2], [0.1, 0.2, -1.0]])
        rotated = apply_givens(h, make_givens(h, 0, 1))
        assert rotated[0, 0].real > 2.0
        assert rotated[1, 1].real < 1.0

    def test_degenerate_pair_rotates_by_quarter(self):
        h = HermitianMatrix([[1.0, 0.5], [0.5, 1.0]])
        r = make_givens(h, 0, 1)
        assert r.t == 1.0
        rotated = apply_givens(h, r)
        assert np.allclose(sorted(rotated.diagonal()), [0.5, 1.5])

    def test_trace_is_preserved(self, rng):
        h = random_hermitian(rng, 4)
        rotated = apply_givens(h, make_givens(h, 0, 2))
        assert np.isclose(rotated.trace(), h.trace(), atol=1e-13)

    def test_stale_rotation_rejected(self, rng):
        h = random_hermitian(rng, 4)
        r = make_givens(h, 0, 1)
        rotated = apply_givens(h, r)
        other = apply_givens(rotated, make_givens(rotated, 0, 2))
        with pytest.raises(StaleRotationError):
            apply_givens(other, r)

    def test_rotation_on_rescaled_matrix_rejected(self):
        # same ratio g/delta, so c and s agree; delta and g do not
        h = HermitianMatrix([[1.0, 0.3], [0.3, -0.5]])
        r = make_givens(h, 0, 1)
        assert r.delta == pytest.approx(0.75)
        with pytest.raises(StaleRotationError):
            apply_givens(HermitianMatrix(2 * h.data), r, stale_tolerance=1e-10)

    def test_rotation_on_rephased_entry_rejected(self):
        h = HermitianMatrix([[1.0, 0.3j], [-0.3j, -0.5]])
        r = make_givens(h, 0, 1)
        with pytest.raises(StaleRotationError):
            apply_givens(HermitianMatrix([[1.0, -0.3j], [0.3j, -0.5]]), r, stale_tolerance=1e-10)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0.5, 2.0).filter(lambda x: abs(x - 1.0) > 1e-6))
    def test_any_rescaling_is_stale(self, factor):
        h = HermitianMatrix([[0.7, 0.2 - 0.1j, 0.05], [0.2 + 0.1j, -0.4, 0.1], [0.05, 0.1, 0.3]])
        r = make_givens(h, 0, 1)
        with pytest.raises(StaleRotationError):
            apply_givens(HermitianMatrix(factor * h.data), r, stale_tolerance=1e-10)

    def test_fresh_rotation_accepted_at_tight_tolerance(self, rng):
        h = random_hermitian(rng, 5, scale=40.0)
        rotated = apply_givens(h, make_givens(h, 1, 4), stale_tolerance=1e-10)
        assert rotated[1, 4] == 0

    def test_full_conjugation_matches_checked_path(self, rng):
        h = random_hermitian(rng, 4)
        r = make_givens(h, 1, 2)
        checked = apply_givens(h, r, check=True)
        unchecked = apply_givens(h, r, check=False)
        assert max_abs(checked.data - unchecked.data) < 1e-13

    def test_symbolic_rotation_diagonalizes_two_level(self):
        a, b, g = param("a"), param("b"), param("g")
        h = HermitianMatrix(np.array([[a, g], [g, b]], dtype=object))
        r = make_givens(h, 0, 1)
        assert isinstance(r.c, Expr)
        rotated = apply_givens(h, r)
        env = {"a": 0.7, "b": -0.1, "g": 0.25}
        numeric = np.array([[0.7, 0.25], [0.25, -0.1]])
        expected = np.linalg.eigvalsh(numeric)
        got = sorted(evaluate(x, env) for x in rotated.diagonal())
        assert np.allclose(got, expected, atol=1e-14)


class TestPivots:
    """Pivot strategies."""

    def test_largest_pivot(self):
        h = HermitianMatrix([[0, 0.1, -0.5], [0.1, 1, 0.3], [-0.5, 0.3, 2]])
        assert select_pivot(h, LargestPivot()) == (0, 2)

    def test_largest_pivot_ties_to_first(self):
        h = HermitianMatrix([[0, 0.3, 0.3], [0.3, 1, 0.3], [0.3, 0.3, 2]])
        assert select_pivot(h, LargestPivot()) == (0, 1)

    def test_largest_pivot_with_mask(self):
        h = HermitianMatrix([[0, 0.9, 0.1], [0.9, 1, 0.2], [0.1, 0.2, 2]])
        mask = np.zeros((3, 3), dtype=bool)
        mask[:2, 2] = mask[2, :2] = True
        assert select_pivot(h, LargestPivot(mask=mask)) == (1, 2)

    def test_done_below_tolerance(self):
        h = HermitianMatrix([[0, 1e-14], [1e-14, 1]])
        assert select_pivot(h, LargestPivot(tolerance=1e-12)) is None

    def test_largest_needs_numbers(self):
        x = param("x")
        h = HermitianMatrix(np.array([[x, x], [x, x]], dtype=object))
        with pytest.raises(InputError):
            select_pivot(h, LargestPivot())

    def test_cyclic_walks_row_major_and_skips_zeros(self):
        h = HermitianMatrix([[0, 0.1, 0.0], [0.1, 1, 0.2], [0.0, 0.2, 2]])
        strategy = CyclicPivot()
        assert strategy.next_pivot(h) == (0, 1)
        assert strategy.next_pivot(h) == (1, 2)
        assert strategy.next_pivot(h) == (0, 1)

    def test_fixed_pivots(self):
        h = HermitianMatrix(np.eye(3))
        strategy = FixedPivots([(0, 2), (1, 2)])
        assert strategy.next_pivot(h) == (0, 2)
        assert strategy.next_pivot(h) == (1, 2)
        assert strategy.next_pivot(h) is None

    def test_unknown_strategy(self):
        with pytest.raises(InputError):
            make_strategy("random")
