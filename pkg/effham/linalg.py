"""
Dense Hermitian matrix algebra over two scalar backends.

Numeric matrices are ``complex128`` arrays; symbolic matrices are numpy object
arrays of ``Expr`` handles. Everything here works on both unless it needs
magnitudes (norms, the eigensolver), which are numeric only.

Also provides the reference eigensolver ``eig_oracle`` (cyclic Jacobi to
machine precision), tensor-product embeddings and the ``Basis`` labelling used
by the model builders.
"""

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    DimensionMismatchError,
    InputError,
    InvalidIndexError,
    NonConvergenceError,
    NotHermitianError,
)
from .expr import ZERO, Expr, ParamEnv, evaluate_many

BasisLabel = Tuple[int, ...]
ArrayLike = Union["HermitianMatrix", np.ndarray, Sequence[Sequence]]

DEFAULT_HERMITIAN_RTOL = 1e-12


def _to_expr_array(arr: np.ndarray) -> np.ndarray:
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        if isinstance(v, Expr):
            out[idx] = v
        else:
            v = complex(v)
            if v.imag != 0:
                raise InputError("symbolic matrices must be real; got a complex entry")
            out[idx] = ZERO + v.real
    return out


def as_array(x: ArrayLike) -> np.ndarray:
    """Entry array of a matrix-like value: complex128, or object for Expr entries."""
    if isinstance(x, HermitianMatrix):
        return x.data
    if isinstance(x, np.ndarray) and x.dtype != object:
        return x.astype(np.complex128, copy=False)
    arr = np.asarray(x, dtype=object)
    if any(isinstance(v, Expr) for v in arr.flat):
        return _to_expr_array(arr)
    return arr.astype(np.complex128)


def is_symbolic_array(arr: np.ndarray) -> bool:
    return arr.dtype == object


class HermitianMatrix:
    """
    Immutable dense Hermitian matrix.

    Numeric input is symmetrized as (M + M^H)/2 when its asymmetry is below
    ``rtol`` relative to its largest entry, and rejected otherwise. Symbolic
    input is defined by its upper triangle, mirrored into the lower one.
    """

    __slots__ = ("_data",)

    def __init__(self, entries: ArrayLike, rtol: float = DEFAULT_HERMITIAN_RTOL):
        arr = np.array(as_array(entries), copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise DimensionMismatchError(f"expected a non-empty square matrix, got shape {arr.shape}")
        if arr.dtype == object:
            n = arr.shape[0]
            for j in range(n):
                for k in range(j + 1, n):
                    arr[k, j] = arr[j, k]
        else:
            scale = float(np.max(np.abs(arr)))
            asym = float(np.max(np.abs(arr - arr.conj().T)))
            if asym > rtol * max(scale, np.finfo(float).tiny):
                raise NotHermitianError(f"matrix asymmetry {asym:.3e} exceeds {rtol:g} relative")
            arr = (arr + arr.conj().T) / 2
        arr.setflags(write=False)
        self._data = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "HermitianMatrix":
        """Wrap an array already known to be Hermitian (no copy, no checks)."""
        obj = object.__new__(cls)
        arr.setflags(write=False)
        obj._data = arr
        return obj

    @classmethod
    def diagonal_matrix(cls, values: Sequence) -> "HermitianMatrix":
        values = list(values)
        if any(isinstance(v, Expr) for v in values):
            arr = np.full((len(values), len(values)), ZERO, dtype=object)
        else:
            arr = np.zeros((len(values), len(values)), dtype=np.complex128)
        for i, v in enumerate(values):
            arr[i, i] = v
        return cls(arr)

    @property
    def data(self) -> np.ndarray:
        """Read-only entry array."""
        return self._data

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    @property
    def is_symbolic(self) -> bool:
        return self._data.dtype == object

    def __getitem__(self, index):
        return self._data[index]

    def diagonal(self) -> List:
        """Diagonal entries; real floats for numeric matrices."""
        if self.is_symbolic:
            return [self._data[i, i] for i in range(self.dim)]
        return [float(v.real) for v in np.diagonal(self._data)]

    def diagonal_part(self) -> "HermitianMatrix":
        """D: the diagonal of H as a matrix."""
        if self.is_symbolic:
            arr = np.full(self._data.shape, ZERO, dtype=object)
        else:
            arr = np.zeros_like(self._data)
        for i in range(self.dim):
            arr[i, i] = self._data[i, i]
        return HermitianMatrix._wrap(arr)

    def offdiagonal_part(self) -> "HermitianMatrix":
        """V: H with its diagonal removed."""
        arr = self._data.copy()
        for i in range(self.dim):
            arr[i, i] = ZERO if self.is_symbolic else 0.0
        return HermitianMatrix._wrap(arr)

    def trace(self):
        total = self._data[0, 0]
        for i in range(1, self.dim):
            total = total + self._data[i, i]
        return total

    def evaluate(self, env: ParamEnv) -> "HermitianMatrix":
        """Numeric matrix obtained by binding the parameters of every entry."""
        if not self.is_symbolic:
            return self
        n = self.dim
        values = evaluate_many(list(self._data.flat), env)
        arr = np.array(values, dtype=np.complex128).reshape(n, n)
        return HermitianMatrix._wrap(arr)

    def to_json(self) -> str:
        """``{"dim": n, "entries": [[re, im], ...]}`` in row-major order."""
        return json.dumps(self.to_dict())

    def to_dict(self) -> dict:
        if self.is_symbolic:
            raise InputError("only numeric matrices serialize to matrix JSON")
        return {
            "dim": self.dim,
            "entries": [[float(v.real), float(v.imag)] for v in self._data.flat],
        }

    @classmethod
    def from_json(cls, text: str) -> "HermitianMatrix":
        try:
            payload = json.loads(text)
            n = int(payload["dim"])
            entries = payload["entries"]
        except (ValueError, KeyError, TypeError) as e:
            raise InputError(f"malformed matrix JSON: {e}") from e
        if n < 1 or len(entries) != n * n:
            raise DimensionMismatchError(f"matrix JSON declares dim {n} but has {len(entries)} entries")
        try:
            values = [complex(float(re), float(im)) for re, im in entries]
        except (ValueError, TypeError) as e:
            raise InputError(f"matrix entries must be [re, im] pairs: {e}") from e
        return cls(np.array(values, dtype=np.complex128).reshape(n, n))

    def __repr__(self) -> str:
        kind = "symbolic" if self.is_symbolic else "numeric"
        return f"HermitianMatrix(dim={self.dim}, {kind})"


def _check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.ndim != 2 or a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"operand shapes {a.shape} and {b.shape} differ")


def commutator(a: ArrayLike, b: ArrayLike) -> np.ndarray:
    """[A, B] = AB - BA."""
    a, b = as_array(a), as_array(b)
    _check_same_shape(a, b)
    return a @ b - b @ a


def nested_commutators(a: ArrayLike, b: ArrayLike, t_max: int) -> Iterable[np.ndarray]:
    """Yield C_0(A,B) = B, C_1, ..., C_{t_max}; each step costs one commutator."""
    if t_max < 0:
        raise InputError("nesting depth must be non-negative")
    a, current = as_array(a), as_array(b)
    _check_same_shape(a, current)
    yield current
    for _ in range(t_max):
        current = commutator(a, current)
        yield current


def nested_commutator(a: ArrayLike, b: ArrayLike, t: int) -> np.ndarray:
    """C_t(A, B) with C_0 = B and C_{t+1} = [A, C_t]."""
    result = None
    for result in nested_commutators(a, b, t):
        pass
    return result


def offdiag_norm_sq(h: ArrayLike, mask: Optional[np.ndarray] = None) -> float:
    """
    Sum of |H[m][n]|^2 over m != n (restricted to ``mask`` when given).
    """
    arr = as_array(h)
    if arr.dtype == object:
        raise InputError("offdiag_norm_sq needs numeric entries")
    if mask is None:
        mask = ~np.eye(arr.shape[0], dtype=bool)
    return float(np.sum(np.abs(arr[mask]) ** 2))


@dataclass(frozen=True)
class EigenDecomposition:
    """H = U^H diag(values) U with eigenvalues ascending; row n of U is the conjugated eigenvector n."""

    values: np.ndarray
    unitary: np.ndarray
    sweeps: int = 0

    def eigenvector(self, n: int) -> np.ndarray:
        return self.unitary[n].conj()


def _rotate_in_place(a: np.ndarray, u: Optional[np.ndarray], j: int, k: int) -> None:
    """Zero a[j, k] by one complex Jacobi rotation; accumulate into ``u``."""
    h = a[j, k]
    g = abs(h)
    if g == 0.0:
        return
    phase = h.conjugate() / g  # e^{i phi} with h = g e^{-i phi}
    delta = (a[j, j].real - a[k, k].real) / 2
    if delta == 0.0:
        t = 1.0
    else:
        inv_kappa = delta / g
        t = math.copysign(1.0, inv_kappa) / (abs(inv_kappa) + math.hypot(inv_kappa, 1.0))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c

    row_j = a[j, :].copy()
    row_k = a[k, :].copy()
    a[j, :] = c * row_j + phase.conjugate() * s * row_k
    a[k, :] = -phase * s * row_j + c * row_k
    col_j = a[:, j].copy()
    col_k = a[:, k].copy()
    a[:, j] = c * col_j + phase * s * col_k
    a[:, k] = -phase.conjugate() * s * col_j + c * col_k
    a[j, k] = 0.0
    a[k, j] = 0.0
    a[j, j] = a[j, j].real
    a[k, k] = a[k, k].real

    if u is not None:
        u_j = u[j, :].copy()
        u_k = u[k, :].copy()
        u[j, :] = c * u_j + phase.conjugate() * s * u_k
        u[k, :] = -phase * s * u_j + c * u_k


def eig_oracle(h: ArrayLike, max_sweeps: Optional[int] = None, tolerance: Optional[float] = None) -> EigenDecomposition:
    """
    Eigen-decomposition by cyclic complex Jacobi sweeps to machine precision.

    Args:
        h: Numeric Hermitian matrix
        max_sweeps: Sweep cap (configuration default when omitted)
        tolerance: Entries below ``tolerance * ||H||_F / dim`` are skipped

    Returns:
        Ascending eigenvalues and the unitary U with H = U^H diag U

    Raises:
        NonConvergenceError: the sweep cap was hit
    """
    from .settings import get_config

    numerics = get_config().numerics
    max_sweeps = numerics.oracle_max_sweeps if max_sweeps is None else max_sweeps
    tolerance = numerics.oracle_tolerance if tolerance is None else tolerance

    matrix = h if isinstance(h, HermitianMatrix) else HermitianMatrix(h)
    if matrix.is_symbolic:
        raise InputError("eig_oracle needs numeric entries")
    n = matrix.dim
    if n > 4096:
        raise InputError("eig_oracle supports dimensions up to 4096")
    a = np.array(matrix.data, dtype=np.complex128, copy=True)
    u = np.eye(n, dtype=np.complex128)
    threshold = tolerance * float(np.linalg.norm(a)) / n

    sweeps = 0
    converged = n == 1
    while not converged and sweeps < max_sweeps:
        sweeps += 1
        rotated = False
        for j in range(n - 1):
            for k in range(j + 1, n):
                if abs(a[j, k]) > threshold:
                    _rotate_in_place(a, u, j, k)
                    rotated = True
        converged = not rotated
    if not converged:
        raise NonConvergenceError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")

    values = np.real(np.diagonal(a)).copy()
    order = np.argsort(values, kind="stable")
    return EigenDecomposition(values=values[order], unitary=u[order], sweeps=sweeps)


def spectral_norm(m: ArrayLike) -> float:
    """Largest singular value, via eig_oracle of M^H M."""
    arr = as_array(m)
    gram = arr.conj().T @ arr
    gram = (gram + gram.conj().T) / 2
    largest = eig_oracle(HermitianMatrix._wrap(gram)).values[-1]
    return math.sqrt(max(float(largest), 0.0))


def expm_antihermitian(s: ArrayLike) -> np.ndarray:
    """e^S for anti-Hermitian S, from the eigen-decomposition of the Hermitian iS."""
    arr = as_array(s)
    ih = 1j * arr
    ih = (ih + ih.conj().T) / 2
    decomposition = eig_oracle(HermitianMatrix._wrap(ih))
    u = decomposition.unitary
    phases = np.exp(-1j * decomposition.values)
    return u.conj().T @ (phases[:, None] * u)


def ladder(levels: int) -> np.ndarray:
    """Truncated bosonic annihilation operator."""
    if levels < 1:
        raise InputError("a subsystem needs at least one level")
    return np.diag(np.sqrt(np.arange(1, levels, dtype=float)), k=1).astype(np.complex128)


def number(levels: int) -> np.ndarray:
    """Truncated number operator."""
    return np.diag(np.arange(levels, dtype=float)).astype(np.complex128)


def embed_operator(op: np.ndarray, slot: int, dims: Sequence[int]) -> np.ndarray:
    """I x ... x op x ... x I, ordering the product basis lexicographically over ``dims``."""
    dims = list(dims)
    if not 0 <= slot < len(dims):
        raise InvalidIndexError(f"slot {slot} out of range for {len(dims)} subsystems")
    op = np.asarray(op)
    if op.shape != (dims[slot], dims[slot]):
        raise DimensionMismatchError(f"operator shape {op.shape} does not match subsystem dimension {dims[slot]}")
    result = np.ones((1, 1), dtype=np.complex128)
    for i, d in enumerate(dims):
        result = np.kron(result, op if i == slot else np.eye(d))
    return result


def scaled(op: np.ndarray, coefficient) -> np.ndarray:
    """coefficient * op for a real numeric operator and a numeric or Expr coefficient."""
    if isinstance(coefficient, Expr):
        out = np.empty(op.shape, dtype=object)
        for idx, v in np.ndenumerate(op):
            out[idx] = coefficient * float(v.real)
        return out
    return op * coefficient


def hermitian_sum(terms: Sequence[np.ndarray]) -> HermitianMatrix:
    """Sum operator terms into a HermitianMatrix, symbolic if any term is."""
    symbolic = any(t.dtype == object for t in terms)
    shape = terms[0].shape
    total = np.full(shape, ZERO, dtype=object) if symbolic else np.zeros(shape, dtype=np.complex128)
    for term in terms:
        total = total + term
    return HermitianMatrix(total)


@dataclass(frozen=True)
class Basis:
    """Ordered product-basis labels, optionally restricted to low total excitation."""

    dims: Tuple[int, ...]
    labels: Tuple[BasisLabel, ...]
    _index: Dict[BasisLabel, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for label in self.labels:
            self._validate(label)
        object.__setattr__(self, "_index", {label: i for i, label in enumerate(self.labels)})

    @classmethod
    def full(cls, dims: Sequence[int]) -> "Basis":
        dims = tuple(int(d) for d in dims)
        return cls(dims, tuple(itertools.product(*(range(d) for d in dims))))

    @classmethod
    def truncated(cls, dims: Sequence[int], max_excitations: int) -> "Basis":
        """Labels whose total excitation does not exceed ``max_excitations``."""
        dims = tuple(int(d) for d in dims)
        labels = tuple(
            label for label in itertools.product(*(range(d) for d in dims)) if sum(label) <= max_excitations
        )
        return cls(dims, labels)

    def _validate(self, label: BasisLabel) -> None:
        if len(label) != len(self.dims) or any(not 0 <= x < d for x, d in zip(label, self.dims)):
            raise InvalidIndexError(f"label {label} is not valid for subsystem dims {self.dims}")

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def is_full(self) -> bool:
        return len(self.labels) == int(np.prod(self.dims))

    def index(self, label: Union[BasisLabel, str]) -> int:
        """Position of ``label`` (a tuple, or a digit string like ``"011"``)."""
        label = parse_label(label)
        self._validate(label)
        try:
            return self._index[label]
        except KeyError:
            raise InvalidIndexError(f"label {label} is outside this truncated basis") from None

    def pair(self, a: Union[BasisLabel, str], b: Union[BasisLabel, str]) -> Tuple[int, int]:
        """Index pair (j < k) for two labels."""
        j, k = self.index(a), self.index(b)
        return (j, k) if j < k else (k, j)

    def restrict(self, op: np.ndarray) -> np.ndarray:
        """Sub-matrix of a full product-space operator on this basis."""
        if self.is_full:
            return op
        full = [int(np.ravel_multi_index(label, self.dims)) for label in self.labels]
        return op[np.ix_(full, full)]


def parse_label(label: Union[BasisLabel, str]) -> BasisLabel:
    """``"011"`` -> (0, 1, 1); tuples pass through."""
    if isinstance(label, str):
        if not label.isdigit():
            raise InvalidIndexError(f"label '{label}' must be a string of digits")
        return tuple(int(ch) for ch in label)
    return tuple(int(x) for x in label)


def format_label(label: BasisLabel) -> str:
    return "".join(str(x) for x in label)
