"""
ZZ estimates and the numeric reference value.

The ZZ interaction strength is zeta = E11 - E10 - E01 + E00. The numeric
reference assigns each computational label the eigenvector with the largest
overlap on its bare state; an assignment where some overlap^2 is not above 1/2,
or where two labels claim the same eigenvector, is reported as ambiguous
together with the candidate values.
"""

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from ..errors import InputError
from ..expr import Expr
from ..linalg import Basis, BasisLabel, EigenDecomposition, HermitianMatrix, eig_oracle, format_label, parse_label

METHODS = (
    "two_level",
    "two_rotation",
    "kerr_approx",
    "leading_perturbation",
    "disp",
    "zeta4",
    "zeta6",
    "npad8",
    "rswt",
    "numeric",
)

Label = Union[BasisLabel, str]


@dataclass(frozen=True)
class ZzEstimate:
    """A ZZ strength (GHz) with the method that produced it."""

    value: Union[float, Expr]
    method: str
    error_bound: Optional[float] = None
    secondary_bound: Optional[float] = None
    ambiguous: bool = False
    candidates: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.method not in METHODS:
            raise InputError(f"unknown estimate method '{self.method}'")
        if self.method == "numeric" and self.error_bound is not None:
            raise InputError("numeric estimates carry no analytic error bound")

    def __float__(self) -> float:
        return float(self.value)

    def to_dict(self) -> dict:
        payload = {"method": self.method, "value": float(self.value)}
        if self.error_bound is not None:
            payload["error_bound"] = self.error_bound
        if self.secondary_bound is not None:
            payload["secondary_bound"] = self.secondary_bound
        if self.ambiguous:
            payload["ambiguous"] = True
            payload["candidates"] = list(self.candidates)
        return payload


@dataclass
class StateAssignment:
    """Bare label -> eigenvector index, with the squared overlaps."""

    indices: Dict[str, int] = field(default_factory=dict)
    overlaps: Dict[str, float] = field(default_factory=dict)
    alternatives: Dict[str, List[int]] = field(default_factory=dict)

    @property
    def ambiguous(self) -> bool:
        clash = len(set(self.indices.values())) != len(self.indices)
        return clash or any(o <= 0.5 for o in self.overlaps.values())

    def __getitem__(self, label: Label) -> int:
        return self.indices[format_label(parse_label(label))]


def assign_states(decomposition: EigenDecomposition, basis: Basis, labels: Sequence[Label]) -> StateAssignment:
    """Maximum-overlap assignment of bare labels to eigenvectors."""
    weights = np.abs(decomposition.unitary) ** 2
    assignment = StateAssignment()
    for label in labels:
        key = format_label(parse_label(label))
        column = weights[:, basis.index(label)]
        ranked = [int(n) for n in np.argsort(-column, kind="stable")]
        assignment.indices[key] = ranked[0]
        assignment.overlaps[key] = float(column[ranked[0]])
        assignment.alternatives[key] = ranked[:2]
    if assignment.ambiguous:
        logger.debug("ambiguous state assignment: {}", assignment.overlaps)
    return assignment


def zz_from_energies(e00, e01, e10, e11):
    return e11 - e10 - e01 + e00


def zeta_numeric(h: HermitianMatrix, basis: Basis, labels: Sequence[Label]) -> ZzEstimate:
    """
    Reference zeta from the exact spectrum.

    Args:
        h: Numeric Hamiltonian on ``basis``
        basis: Labelling of the rows of ``h``
        labels: Bare labels of |00>, |01>, |10>, |11> in that order
    """
    if len(labels) != 4:
        raise InputError("zeta needs the four computational labels 00, 01, 10, 11")
    decomposition = eig_oracle(h)
    assignment = assign_states(decomposition, basis, labels)
    keys = [format_label(parse_label(label)) for label in labels]
    energies = decomposition.values
    value = zz_from_energies(*(float(energies[assignment.indices[k]]) for k in keys))
    if not assignment.ambiguous:
        return ZzEstimate(value, "numeric")

    choices = [
        assignment.alternatives[k] if assignment.overlaps[k] <= 0.5 or _claimed_twice(assignment, k) else [assignment.indices[k]]
        for k in keys
    ]
    candidates = sorted({
        zz_from_energies(*(float(energies[n]) for n in combo))
        for combo in itertools.product(*choices)
        if len(set(combo)) == 4
    })
    return ZzEstimate(value, "numeric", ambiguous=True, candidates=tuple(candidates))


def _claimed_twice(assignment: StateAssignment, key: str) -> bool:
    index = assignment.indices[key]
    return sum(1 for v in assignment.indices.values() if v == index) > 1
