"""
Named application pipelines, runnable on either scalar backend.

Each pipeline maps hardware parameters to a single number: a ZZ strength or
the ZX strength. Run with ``symbolic=True`` it returns the closed-form ``Expr``
whose evaluation at ``p.env()`` reproduces the numeric run.
"""

from typing import Callable, Dict, Union

from ..cqed import CqedParams, cz_subspace_parameters
from ..errors import InputError
from ..expr import Expr
from .cross_resonance import omega_zx_analytical, omega_zx_npad4
from .dispersive import Detunings, zeta4, zeta6, zeta_disp, zeta_npad8, zeta_rswt
from .near_resonant import zeta_kerr_approx, zeta_two_level, zeta_two_rotation

Scalar = Union[float, Expr]
Pipeline = Callable[..., Scalar]


def _two_rotation(p: CqedParams, symbolic: bool = False, **_) -> Scalar:
    delta, big_delta, g1, g2, _eps = cz_subspace_parameters(p, symbolic)
    return zeta_two_rotation(delta, big_delta, g1, g2).value


def _two_level(p: CqedParams, symbolic: bool = False, **_) -> Scalar:
    delta, _big_delta, g1, _g2, _eps = cz_subspace_parameters(p, symbolic)
    return zeta_two_level(delta, g1).value


def _kerr_approx(p: CqedParams, symbolic: bool = False, **_) -> Scalar:
    delta, big_delta, g1, g2, _eps = cz_subspace_parameters(p, symbolic)
    return zeta_kerr_approx(delta, big_delta, g1, g2).value


def _disp(p: CqedParams, symbolic: bool = False, **_) -> Scalar:
    return zeta_disp(Detunings.from_params(p, symbolic)).value


def _zeta4(p: CqedParams, symbolic: bool = False, **_) -> Scalar:
    return zeta4(Detunings.from_params(p, symbolic)).value


def _zeta6(p: CqedParams, symbolic: bool = False, **_) -> Scalar:
    return zeta6(Detunings.from_params(p, symbolic)).value


def _npad8(p: CqedParams, symbolic: bool = False, **_) -> Scalar:
    return zeta_npad8(p, symbolic=symbolic).value


def _rswt(p: CqedParams, symbolic: bool = False, order: int = 4, **_) -> Scalar:
    return zeta_rswt(p, order=order, symbolic=symbolic).value


def _omega_zx(p: CqedParams, symbolic: bool = False, **_) -> Scalar:
    v = p.scalars(symbolic)
    return omega_zx_analytical(v["g"], v["Omega"], v["omega1"] - v["omega_d"], v["alpha1"])


def _omega_zx_npad4(p: CqedParams, symbolic: bool = False, **_) -> Scalar:
    return omega_zx_npad4(p, symbolic=symbolic)


PIPELINES: Dict[str, Pipeline] = {
    "two_rotation": _two_rotation,
    "two_level": _two_level,
    "kerr_approx": _kerr_approx,
    "disp": _disp,
    "zeta4": _zeta4,
    "zeta6": _zeta6,
    "npad8": _npad8,
    "rswt": _rswt,
    "omega_zx": _omega_zx,
    "omega_zx_npad4": _omega_zx_npad4,
}


def run_pipeline(name: str, p: CqedParams, symbolic: bool = False, order: int = 4) -> Scalar:
    try:
        pipeline = PIPELINES[name]
    except KeyError:
        raise InputError(f"unknown pipeline '{name}'; expected one of {sorted(PIPELINES)}") from None
    return pipeline(p, symbolic=symbolic, order=order)
