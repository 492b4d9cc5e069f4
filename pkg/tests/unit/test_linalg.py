"""
Tests for Hermitian matrices, commutators, the reference eigensolver and bases.
"""

import numpy as np
import pytest

from effham.errors import DimensionMismatchError, InputError, InvalidIndexError, NotHermitianError
from effham.expr import evaluate, param
from effham.linalg import (
    Basis,
    HermitianMatrix,
    commutator,
    eig_oracle,
    embed_operator,
    expm_antihermitian,
    format_label,
    ladder,
    nested_commutator,
    nested_commutators,
    offdiag_norm_sq,
    parse_label,
    spectral_norm,
)
from tests.helpers import max_abs, random_hermitian


class TestHermitianMatrix:
    """Construction, parts and serialization."""

    def test_symmetrizes_tiny_asymmetry(self):
        m = np.array([[1.0, 2.0 + 1e-15], [2.0, -1.0]])
        h = HermitianMatrix(m)
        assert h[0, 1] == h[1, 0]

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            HermitianMatrix([[1.0, 2.0], [0.0, 1.0]])

    def test_rejects_non_square(self):
        with pytest.raises(DimensionMismatchError):
            HermitianMatrix(np.zeros((2, 3)))

    def test_read_only(self, rng):
        h = random_hermitian(rng, 3)
        with pytest.raises(ValueError):
            h.data[0, 0] = 5.0

    def test_symbolic_upper_triangle_mirrors(self):
        x = param("x")
        arr = np.array([[x, x * 2], [0, -x]], dtype=object)
        h = HermitianMatrix(arr)
        assert h.is_symbolic
        assert h[1, 0] is h[0, 1]
        numeric = h.evaluate({"x": 0.5})
        assert np.allclose(numeric.data, [[0.5, 1.0], [1.0, -0.5]])

    def test_parts_add_up(self, rng):
        h = random_hermitian(rng, 4)
        total = h.diagonal_part().data + h.offdiagonal_part().data
        assert np.allclose(total, h.data)
        assert np.isclose(h.trace(), np.trace(h.data))

    def test_symbolic_trace(self):
        x = param("x")
        h = HermitianMatrix.diagonal_matrix([x, 2 * x, 1])
        assert evaluate(h.trace(), {"x": 1.0}) == 4.0

    def test_json_roundtrip(self, rng):
        h = random_hermitian(rng, 3)
        back = HermitianMatrix.from_json(h.to_json())
        assert np.array_equal(back.data, h.data)

    def test_from_json_rejects_wrong_size(self):
        with pytest.raises(DimensionMismatchError):
            HermitianMatrix.from_json('{"dim": 2, "entries": [[1, 0]]}')
        with pytest.raises(InputError):
            HermitianMatrix.from_json("not json")


class TestCommutators:
    """[A, B] and nested commutators."""

    def test_commutator_antisymmetric(self, rng):
        a = random_hermitian(rng, 4).data
        b = random_hermitian(rng, 4).data
        assert np.allclose(commutator(a, b), -commutator(b, a))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            commutator(np.eye(2), np.eye(3))

    def test_nested_recurrence(self, rng):
        a = random_hermitian(rng, 3).data
        b = random_hermitian(rng, 3).data
        c2 = nested_commutator(a, b, 2)
        assert np.allclose(c2, commutator(a, commutator(a, b)))
        assert np.array_equal(nested_commutator(a, b, 0), b)
        assert len(list(nested_commutators(a, b, 4))) == 5

    def test_negative_depth(self):
        with pytest.raises(InputError):
            nested_commutator(np.eye(2), np.eye(2), -1)

    def test_offdiag_norm_with_mask(self):
        h = np.array([[0, 1, 2], [1, 0, 3], [2, 3, 0]], dtype=float)
        assert offdiag_norm_sq(h) == 2 * (1 + 4 + 9)
        mask = np.zeros((3, 3), dtype=bool)
        mask[0, 2] = mask[2, 0] = True
        assert offdiag_norm_sq(h, mask) == 8.0


class TestEigOracle:
    """Cyclic Jacobi reference solver."""

    @pytest.mark.parametrize("dim", [1, 2, 5, 12])
    def test_matches_numpy(self, rng, dim):
        h = random_hermitian(rng, dim)
        result = eig_oracle(h)
        assert np.allclose(result.values, np.linalg.eigvalsh(h.data), atol=1e-12)
        assert np.all(np.diff(result.values) >= 0)

    def test_unitary_reconstructs(self, rng):
        h = random_hermitian(rng, 6)
        result = eig_oracle(h)
        u = result.unitary
        assert max_abs(u @ u.conj().T - np.eye(6)) < 1e-12
        rebuilt = u.conj().T @ np.diag(result.values) @ u
        assert max_abs(rebuilt - h.data) < 1e-12

    def test_eigenvector(self, rng):
        h = random_hermitian(rng, 4)
        result = eig_oracle(h)
        v = result.eigenvector(2)
        assert np.allclose(h.data @ v, result.values[2] * v, atol=1e-12)

    def test_spectral_norm(self, rng):
        m = rng.normal(size=(4, 4))
        assert np.isclose(spectral_norm(m), np.linalg.norm(m, 2), rtol=1e-12)

    def test_expm_antihermitian_is_unitary(self, rng):
        h = random_hermitian(rng, 4, scale=0.3).data
        u = expm_antihermitian(1j * h)
        assert max_abs(u @ u.conj().T - np.eye(4)) < 1e-12


class TestBasis:
    """Product-basis labels."""

    def test_full_basis_is_lexicographic(self):
        basis = Basis.full([2, 3])
        assert len(basis) == 6
        assert basis.labels[1] == (0, 1)
        assert basis.index("12") == 5
        assert basis.is_full

    def test_truncated(self):
        basis = Basis.truncated([4, 4, 4], 2)
        assert len(basis) == 10
        assert not basis.is_full
        with pytest.raises(InvalidIndexError):
            basis.index("111")

    def test_pair_is_ordered(self):
        basis = Basis.full([2, 2])
        assert basis.pair("11", "01") == (1, 3)

    def test_restrict(self):
        basis = Basis.truncated([2, 2], 1)
        op = np.arange(16.0).reshape(4, 4)
        sub = basis.restrict(op)
        assert sub.shape == (3, 3)
        assert sub[2, 2] == op[2, 2]

    def test_invalid_label(self):
        basis = Basis.full([2, 2])
        with pytest.raises(InvalidIndexError):
            basis.index("02x")
        with pytest.raises(InvalidIndexError):
            basis.index((0, 2))

    def test_label_helpers(self):
        assert parse_label("102") == (1, 0, 2)
        assert format_label((1, 0, 2)) == "102"

    def test_embed_operator(self):
        a = ladder(3)
        op = embed_operator(a, 1, [2, 3])
        assert op.shape == (6, 6)
        assert np.allclose(op, np.kron(np.eye(2), a))
        with pytest.raises(DimensionMismatchError):
            embed_operator(a, 0, [2, 3])
