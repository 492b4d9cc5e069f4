"""
Hamiltonian builders for superconducting circuits.

All builders are scalar-generic: with ``symbolic=True`` every hardware
parameter enters as a named ``Expr`` parameter and the result is a symbolic
HermitianMatrix; otherwise the matrix is numeric. Energies are in GHz with
hbar = 1.

Basis orderings:

- Duffing two-qubit model: labels (p, q)
- qubit-resonator-qubit model: labels (l, p, q), resonator first
- CZ subspace: (|20>, |11>, |02>)

Both static models conserve the total excitation number, so restricting them
to at most two excitations (``max_excitations=2``) leaves every state needed
for the ZZ interaction, and its energy, unchanged.
"""

import json
import math
import tomllib
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .errors import InputError
from .expr import Expr, param
from .linalg import Basis, HermitianMatrix, embed_operator, hermitian_sum, ladder, number, scaled

Scalar = Union[float, Expr]

PARAMETER_NAMES = ("omega1", "omega2", "alpha1", "alpha2", "g", "g1", "g2", "omega_r", "Omega", "omega_d")


class CqedParams(BaseModel):
    """Hardware parameters of a two-qubit circuit (GHz)."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    omega1: float = Field(0.0, description="Qubit 1 frequency")
    omega2: float = Field(0.0, description="Qubit 2 frequency")
    alpha1: float = Field(-0.3, description="Qubit 1 anharmonicity")
    alpha2: float = Field(-0.3, description="Qubit 2 anharmonicity")
    g: Optional[float] = Field(None, description="Direct qubit-qubit coupling")
    g1: Optional[float] = Field(None, description="Qubit 1 - resonator coupling")
    g2: Optional[float] = Field(None, description="Qubit 2 - resonator coupling")
    omega_r: float = Field(0.0, description="Resonator frequency")
    Omega: float = Field(0.0, description="Drive amplitude on qubit 1")
    omega_d: Optional[float] = Field(None, description="Drive frequency; defaults to omega2")
    levels: Union[int, List[int]] = Field(4, description="Levels per subsystem")

    @field_validator("omega1", "omega2", "alpha1", "alpha2", "g", "g1", "g2", "omega_r", "Omega", "omega_d")
    @classmethod
    def validate_finite(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and not math.isfinite(v):
            raise ValueError("parameters must be finite")
        return v

    @field_validator("levels")
    @classmethod
    def validate_levels(cls, v):
        values = [v] if isinstance(v, int) else list(v)
        if not values or any(n < 2 for n in values):
            raise ValueError("every subsystem needs at least 2 levels")
        return v

    @classmethod
    def load(cls, path: Union[str, Path]) -> "CqedParams":
        """Read parameters from a ``.toml`` or ``.json`` file."""
        path = Path(path)
        try:
            if path.suffix == ".toml":
                with open(path, "rb") as f:
                    data = tomllib.load(f)
            elif path.suffix == ".json":
                data = json.loads(path.read_text())
            else:
                raise InputError(f"unsupported parameter file type '{path.suffix}'")
        except OSError as e:
            raise InputError(f"cannot read parameter file {path}: {e}") from e
        except (tomllib.TOMLDecodeError, json.JSONDecodeError) as e:
            raise InputError(f"malformed parameter file {path}: {e}") from e
        data = data.get("params", data)
        try:
            return cls(**data)
        except ValidationError as e:
            raise InputError(f"invalid parameters in {path}: {e}") from e

    def levels_for(self, subsystems: int) -> Tuple[int, ...]:
        if isinstance(self.levels, int):
            return (self.levels,) * subsystems
        if len(self.levels) != subsystems:
            raise InputError(f"expected {subsystems} level counts, got {len(self.levels)}")
        return tuple(self.levels)

    @property
    def coupling1(self) -> float:
        return self.g1 if self.g1 is not None else (self.g or 0.0)

    @property
    def coupling2(self) -> float:
        return self.g2 if self.g2 is not None else (self.g or 0.0)

    @property
    def drive_frequency(self) -> float:
        return self.omega2 if self.omega_d is None else self.omega_d

    @property
    def delta1(self) -> float:
        """Qubit 1 - resonator detuning."""
        return self.omega1 - self.omega_r

    @property
    def delta2(self) -> float:
        return self.omega2 - self.omega_r

    def env(self) -> Dict[str, float]:
        """Parameter values keyed by the names used for symbolic builds."""
        return {
            "omega1": self.omega1,
            "omega2": self.omega2,
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
            "g": self.g or 0.0,
            "g1": self.coupling1,
            "g2": self.coupling2,
            "omega_r": self.omega_r,
            "Omega": self.Omega,
            "omega_d": self.drive_frequency,
        }

    def scalars(self, symbolic: bool = False) -> Dict[str, Scalar]:
        """Numeric values, or one ``Expr`` parameter per name."""
        if symbolic:
            return {name: param(name) for name in PARAMETER_NAMES}
        return self.env()

    @classmethod
    def quasi_dispersive(cls, delta_plus: float, delta_minus: float, alpha: float, g: float,
                         levels: int = 4) -> "CqedParams":
        """Resonator-frame parameters from the detuning sum and difference."""
        return cls(
            omega1=(delta_plus + delta_minus) / 2,
            omega2=(delta_plus - delta_minus) / 2,
            alpha1=alpha,
            alpha2=alpha,
            g1=g,
            g2=g,
            omega_r=0.0,
            levels=levels,
        )


Term = Tuple[np.ndarray, Scalar]


def _duffing_terms(dims: Tuple[int, ...], slot: int, omega: Scalar, alpha: Scalar) -> List[Term]:
    levels = np.arange(dims[slot], dtype=float)
    n = embed_operator(number(dims[slot]), slot, dims).real
    kerr = embed_operator(np.diag(levels * (levels - 1)), slot, dims).real
    return [(n, omega), (kerr, alpha / 2)]


def _exchange(dims: Tuple[int, ...], a: int, b: int, coupling: Scalar) -> Term:
    """b_a b_b^+ + h.c."""
    op_a = embed_operator(ladder(dims[a]), a, dims)
    op_b = embed_operator(ladder(dims[b]), b, dims)
    hop = op_a @ op_b.conj().T
    return (hop + hop.conj().T).real, coupling


def _assemble(basis: Basis, terms: List[Term]) -> HermitianMatrix:
    return hermitian_sum([scaled(basis.restrict(op), coefficient) for op, coefficient in terms])


def _static_duffing(dims: Tuple[int, ...], v: Dict[str, Scalar]) -> List[Term]:
    return (
        _duffing_terms(dims, 0, v["omega1"], v["alpha1"])
        + _duffing_terms(dims, 1, v["omega2"], v["alpha2"])
        + [_exchange(dims, 0, 1, v["g"])]
    )


def two_qubit_basis(p: CqedParams, max_excitations: Optional[int] = None) -> Basis:
    dims = p.levels_for(2)
    if max_excitations is None:
        return Basis.full(dims)
    return Basis.truncated(dims, max_excitations)


def qrq_basis(p: CqedParams, max_excitations: Optional[int] = None) -> Basis:
    dims = p.levels_for(3)
    if max_excitations is None:
        return Basis.full(dims)
    return Basis.truncated(dims, max_excitations)


def duffing_two_qubit(p: CqedParams, symbolic: bool = False,
                      max_excitations: Optional[int] = None) -> HermitianMatrix:
    """
    Two directly coupled Duffing qubits:
    sum_q w_q n_q + (a_q/2) n_q(n_q - 1) + g (b1 b2^+ + b1^+ b2).
    """
    basis = two_qubit_basis(p, max_excitations)
    return _assemble(basis, _static_duffing(basis.dims, p.scalars(symbolic)))


def three_level_cz(delta: Scalar, big_delta: Scalar, g1: Scalar, g2: Scalar) -> HermitianMatrix:
    """The two-excitation block on (|20>, |11>, |02>) with its mean energy removed."""
    return HermitianMatrix([
        [delta, g1, 0.0],
        [g1, -delta, g2],
        [0.0, g2, -big_delta],
    ])


def cz_subspace_parameters(p: CqedParams, symbolic: bool = False) -> Tuple[Scalar, Scalar, Scalar, Scalar, Scalar]:
    """
    (delta, Delta, g1, g2, epsilon) of the CZ subspace of the Duffing model.

    The block equals ``three_level_cz(delta, Delta, g1, g2)`` plus epsilon times
    the identity, where epsilon = (E20 + E11) / 2.
    """
    v = p.scalars(symbolic)
    w1, w2, a1, a2 = v["omega1"], v["omega2"], v["alpha1"], v["alpha2"]
    delta = (w1 - w2 + a1) / 2
    big_delta = 3 * (w1 - w2) / 2 - a2 + a1 / 2
    coupling = v["g"] * math.sqrt(2)
    epsilon = (3 * w1 + w2 + a1) / 2
    return delta, big_delta, coupling, coupling, epsilon


def qubit_resonator_qubit(p: CqedParams, symbolic: bool = False,
                          max_excitations: Optional[int] = None) -> HermitianMatrix:
    """
    Two Duffing qubits coupled through a resonator:
    sum_q [w_q n_q + (a_q/2) n_q(n_q - 1) + g_q (b_q a^+ + b_q^+ a)] + w_r a^+ a.
    """
    basis = qrq_basis(p, max_excitations)
    dims = basis.dims
    v = p.scalars(symbolic)
    terms = [(embed_operator(number(dims[0]), 0, dims).real, v["omega_r"])]
    terms += _duffing_terms(dims, 1, v["omega1"], v["alpha1"])
    terms += _duffing_terms(dims, 2, v["omega2"], v["alpha2"])
    terms += [_exchange(dims, 1, 0, v["g1"]), _exchange(dims, 2, 0, v["g2"])]
    return _assemble(basis, terms)


def cr_driven_frame(p: CqedParams, symbolic: bool = False) -> HermitianMatrix:
    """
    Cross-resonance Hamiltonian H + H_d - H_R in the frame rotating at omega_d,
    with H_d = (Omega/2)(b1 + b1^+) and H_R = omega_d (n1 + n2).
    """
    dims = p.levels_for(2)
    if dims[0] < 3:
        raise InputError("the control qubit needs at least 3 levels")
    v = p.scalars(symbolic)
    b1 = embed_operator(ladder(dims[0]), 0, dims)
    n_total = embed_operator(number(dims[0]), 0, dims) + embed_operator(number(dims[1]), 1, dims)
    terms = _static_duffing(dims, v)
    terms.append(((b1 + b1.conj().T).real, v["Omega"] / 2))
    terms.append((n_total.real, -v["omega_d"]))
    return _assemble(Basis.full(dims), terms)


def total_excitation(basis: Basis) -> np.ndarray:
    """Total excitation number operator on ``basis``."""
    return np.diag([float(sum(label)) for label in basis.labels]).astype(np.complex128)
