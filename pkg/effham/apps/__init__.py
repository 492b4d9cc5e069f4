"""Superconducting-qubit applications: ZZ and ZX coupling strengths."""

from .cross_resonance import omega_zx_analytical, omega_zx_leading, omega_zx_numeric
from .dispersive import (
    Detunings,
    circle_root,
    find_zero,
    zero_circle_residual,
    zero_shift,
    zeta4,
    zeta4_contributions,
    zeta6,
    zeta_disp,
    zeta_exact_qrq,
    zeta_npad8,
    zeta_rswt,
)
from .estimates import METHODS, StateAssignment, ZzEstimate, assign_states, zeta_numeric
from .near_resonant import (
    jump_detunings,
    two_rotation_closed_form,
    zeta_exact,
    zeta_kerr_approx,
    zeta_leading_perturbation,
    zeta_two_level,
    zeta_two_rotation,
)
from .pipelines import PIPELINES, run_pipeline

__all__ = [
    "Detunings",
    "METHODS",
    "PIPELINES",
    "StateAssignment",
    "ZzEstimate",
    "assign_states",
    "circle_root",
    "find_zero",
    "jump_detunings",
    "omega_zx_analytical",
    "omega_zx_leading",
    "omega_zx_numeric",
    "run_pipeline",
    "two_rotation_closed_form",
    "zero_circle_residual",
    "zero_shift",
    "zeta4",
    "zeta4_contributions",
    "zeta6",
    "zeta_disp",
    "zeta_exact",
    "zeta_exact_qrq",
    "zeta_kerr_approx",
    "zeta_leading_perturbation",
    "zeta_npad8",
    "zeta_numeric",
    "zeta_rswt",
    "zeta_two_level",
    "zeta_two_rotation",
]
