"""
Tables behind the reproduced figures.

Each ``*_tables`` function evaluates its sweep and returns named ``Table``s;
``render_*`` draws the matching SVG from them. Frequencies are in GHz.
"""

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from loguru import logger

from . import plotting
from .apps.cross_resonance import omega_zx_analytical, omega_zx_leading, omega_zx_npad4, omega_zx_numeric
from .apps.dispersive import (
    Detunings,
    circle_root,
    find_zero,
    zeta4,
    zeta6,
    zeta_exact_qrq,
    zeta_npad8,
    zeta_rswt,
    zero_shift,
)
from .apps.near_resonant import (
    first_rotation_cosine,
    level_repulsion,
    zeta_exact,
    zeta_kerr_approx,
    zeta_leading_perturbation,
    zeta_two_level,
    zeta_two_rotation,
)
from .cqed import CqedParams, cz_subspace_parameters
from .errors import ComputationError
from .sweeps import Grid, masked, relative_error, run_sweep

FIG3_GRIDS = {"detuning": Grid("detuning", -0.8, 0.8, 321)}
FIG4_GRIDS = {
    "delta_plus": Grid("delta_plus", -1.0, 0.2, 41),
    "delta_minus": Grid("delta_minus", -0.5, 0.5, 33),
    "cut": Grid("cut", -0.9, -0.3, 121),
}
FIG5_GRIDS = {"Omega": Grid("Omega", 0.0, 0.06, 31)}
FIG7_GRIDS = {"delta_plus": Grid("delta_plus", -0.9, -0.3, 61)}

FIG3_METHODS = ("two_rotation", "kerr_approx", "two_level", "leading_perturbation")
FIG4_CUT_METHODS = ("numeric", "zeta4", "zeta6", "npad8", "rswt6")
FIG7_COUPLINGS = (0.025, 0.05, 0.075)
FIG7_ANHARMONICITIES = (-0.25, -0.33, -0.4)
CUT_RATIO = 0.4


@dataclass
class Table:
    """Column names and rows of one CSV."""

    header: List[str]
    rows: List[List[float]] = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        i = self.header.index(name)
        return np.array([row[i] for row in self.rows], dtype=float)


def _nan_if_ambiguous(estimate) -> float:
    return math.nan if estimate.ambiguous else float(estimate.value)


# near-resonant ZZ -----------------------------------------------------------

def _fig3_row(p: CqedParams, detuning: float) -> List[float]:
    point = p.model_copy(update={"omega1": p.omega2 + detuning})
    delta, big_delta, g1, g2, _ = cz_subspace_parameters(point)
    reference = zeta_exact(delta, big_delta, g1, g2).value
    estimates = {
        "two_rotation": masked(lambda: zeta_two_rotation(delta, big_delta, g1, g2).value)(),
        "kerr_approx": masked(lambda: zeta_kerr_approx(delta, big_delta, g1, g2).value)(),
        "two_level": masked(lambda: zeta_two_level(delta, g1).value)(),
        "leading_perturbation": masked(lambda: zeta_leading_perturbation(delta, big_delta, g1, g2).value)(),
    }
    gap = big_delta - level_repulsion(delta, g1)
    c01 = first_rotation_cosine(delta, g1)
    eps1 = c01 ** 4 * g2 ** 4 / gap ** 3 if gap > 0 else math.nan
    row = [detuning, reference] + [estimates[m] for m in FIG3_METHODS]
    row += [relative_error(estimates[m], reference) for m in FIG3_METHODS]
    row.append(relative_error(reference + eps1, reference) if not math.isnan(eps1) else math.nan)
    return row


def fig3_tables(p: CqedParams, grids: Dict[str, Grid], threads: Optional[int] = None) -> Dict[str, Table]:
    """ZZ estimates on the two-excitation block against its exact value, swept over omega1 - omega2."""
    header = ["detuning", "numeric"] + list(FIG3_METHODS) + [f"err_{m}" for m in FIG3_METHODS] + ["err_bound"]
    rows = run_sweep(lambda x: _fig3_row(p, float(x)), grids["detuning"].values(), threads)
    return {"fig3": Table(header, rows)}


def render_fig3(tables: Dict[str, Table], out: Path) -> List[Path]:
    t = tables["fig3"]
    series = {m: t.column(f"err_{m}") for m in FIG3_METHODS}
    path = plotting.line_plot(out / "fig3.svg", t.column("detuning"), series,
                              "omega1 - omega2 (GHz)", "relative error", logy=True,
                              shade=t.column("err_bound"))
    return [path]


# quasi-dispersive ZZ --------------------------------------------------------

def _qd_point(p: CqedParams, delta_plus: float, delta_minus: float, g: Optional[float] = None,
              alpha: Optional[float] = None) -> CqedParams:
    alpha = p.alpha1 if alpha is None else alpha
    g = p.coupling1 if g is None else g
    return CqedParams.quasi_dispersive(delta_plus, delta_minus, alpha, g, levels=p.levels)


def _landscape_row(p: CqedParams, point) -> List[float]:
    delta_plus, delta_minus = point
    q = _qd_point(p, delta_plus, delta_minus)
    numeric = _nan_if_ambiguous(zeta_exact_qrq(q))
    fourth = masked(lambda: zeta4(Detunings.from_params(q)).value)()
    return [delta_plus, delta_minus, abs(numeric), abs(fourth)]


def _cut_row(p: CqedParams, delta_plus: float) -> List[float]:
    delta_minus = CUT_RATIO * abs(p.alpha1)
    q = _qd_point(p, delta_plus, delta_minus)
    d = Detunings.from_params(q)
    values = {
        "numeric": _nan_if_ambiguous(zeta_exact_qrq(q, max_excitations=None)),
        "zeta4": masked(lambda: zeta4(d).value)(),
        "zeta6": masked(lambda: zeta6(d).value)(),
        "npad8": masked(lambda: zeta_npad8(q).value)(),
        "rswt6": masked(lambda: zeta_rswt(q, order=6).value)(),
    }
    return [delta_plus] + [values[m] for m in FIG4_CUT_METHODS]


def zero_circle(alpha: float, points: int = 201):
    """(Delta_+, Delta_-) samples of (Delta_+ - alpha)^2 + Delta_-^2 = alpha^2."""
    theta = np.linspace(0.0, 2 * math.pi, points)
    return alpha + abs(alpha) * np.cos(theta), abs(alpha) * np.sin(theta)


def fig4_tables(p: CqedParams, grids: Dict[str, Grid], threads: Optional[int] = None) -> Dict[str, Table]:
    """|zeta| landscape over (Delta_+, Delta_-) and the cut at Delta_- = 0.4 |alpha|."""
    points = [(float(dp), float(dm)) for dm in grids["delta_minus"].values() for dp in grids["delta_plus"].values()]
    landscape = Table(["delta_plus", "delta_minus", "numeric", "zeta4"],
                      run_sweep(lambda pt: _landscape_row(p, pt), points, threads))
    cut = Table(["delta_plus"] + list(FIG4_CUT_METHODS),
                run_sweep(lambda x: _cut_row(p, float(x)), grids["cut"].values(), threads))
    circle_x, circle_y = zero_circle(p.alpha1)
    circle = Table(["delta_plus", "delta_minus"], [[float(a), float(b)] for a, b in zip(circle_x, circle_y)])
    return {"fig4_landscape": landscape, "fig4_cut": cut, "fig4_circle": circle}


def render_fig4(tables: Dict[str, Table], out: Path) -> List[Path]:
    landscape = tables["fig4_landscape"]
    x = np.unique(landscape.column("delta_plus"))
    y = np.unique(landscape.column("delta_minus"))
    circle = tables["fig4_circle"]
    curves = {"zeta4 = 0": (circle.column("delta_plus"), circle.column("delta_minus"))}
    paths = []
    for name in ("numeric", "zeta4"):
        z = landscape.column(name).reshape(len(y), len(x))
        paths.append(plotting.heatmap(out / f"fig4_{name}.svg", x, y, z, "Delta_+ (GHz)", "Delta_- (GHz)",
                                      curves=curves, title=name))
    cut = tables["fig4_cut"]
    series = {m: np.abs(cut.column(m)) for m in FIG4_CUT_METHODS}
    paths.append(plotting.line_plot(out / "fig4_cut.svg", cut.column("delta_plus"), series,
                                    "Delta_+ (GHz)", "|zeta| (GHz)", logy=True))
    return paths


# cross-resonance ------------------------------------------------------------

def _fig5_row(p: CqedParams, drive: float) -> List[float]:
    point = p.model_copy(update={"Omega": drive})
    delta_minus = p.omega1 - p.drive_frequency
    g = p.g or 0.0
    analytical = masked(lambda: omega_zx_analytical(g, drive, delta_minus, p.alpha1))()
    leading = masked(lambda: omega_zx_leading(g, drive, delta_minus, p.alpha1))()
    npad4 = masked(lambda: omega_zx_npad4(point))()
    numeric = masked(lambda: omega_zx_numeric(point))()
    return [drive, analytical, npad4, numeric, leading]


def fig5_tables(p: CqedParams, grids: Dict[str, Grid], threads: Optional[int] = None) -> Dict[str, Table]:
    """ZX strength against the drive amplitude."""
    rows = run_sweep(lambda x: _fig5_row(p, float(x)), grids["Omega"].values(), threads)
    return {"fig5": Table(["Omega", "analytical", "npad4", "numeric", "leading"], rows)}


def render_fig5(tables: Dict[str, Table], out: Path) -> List[Path]:
    t = tables["fig5"]
    series = {name: 1e3 * t.column(name) for name in ("analytical", "npad4", "numeric", "leading")}
    return [plotting.line_plot(out / "fig5.svg", 1e3 * t.column("Omega"), series,
                               "Omega (MHz)", "omega_ZX (MHz)")]


# zero-point shift -----------------------------------------------------------

def _zero_or_nan(f: Callable[[float], float], lo: float, hi: float) -> float:
    try:
        return find_zero(f, lo, hi, xtol=1e-12)
    except ComputationError as e:
        logger.debug("no zero found: {}", e)
        return math.nan


def _fig7_values(p: CqedParams, delta_plus: float, g: float, alpha: float) -> List[float]:
    q = _qd_point(p, delta_plus, CUT_RATIO * abs(alpha), g=g, alpha=alpha)
    d = Detunings.from_params(q)
    return [
        _nan_if_ambiguous(zeta_exact_qrq(q)),
        masked(lambda: zeta6(d).value)(),
        masked(lambda: zeta4(d).value)(),
    ]


def _fig7_panel(p: CqedParams, xs: np.ndarray, cases: Sequence[tuple], label: str,
                threads: Optional[int]) -> Table:
    header = ["delta_plus"]
    for g, alpha in cases:
        key = g if label == "g" else alpha
        header += [f"numeric_{label}={key}", f"zeta6_{label}={key}", f"zeta4_{label}={key}"]

    def row(x):
        values = [float(x)]
        for g, alpha in cases:
            values += _fig7_values(p, float(x), g, alpha)
        return values

    return Table(header, run_sweep(row, xs, threads))


def _zeros_row(p: CqedParams, g: float, alpha: float, below: float = 0.05, above: float = 0.2) -> List[float]:
    delta_minus = CUT_RATIO * abs(alpha)
    guess = circle_root(delta_minus, alpha)
    try:
        numeric = zero_shift(delta_minus, alpha, [g], below=below, above=above)[0]
    except ComputationError as e:
        logger.debug("no exact zero for g={} alpha={}: {}", g, alpha, e)
        numeric = math.nan

    def sixth(x):
        return zeta6(Detunings.from_params(_qd_point(p, x, delta_minus, g=g, alpha=alpha))).value

    return [g, alpha, guess, numeric, _zero_or_nan(sixth, guess - below, guess + above)]


def fig7_tables(p: CqedParams, grids: Dict[str, Grid], threads: Optional[int] = None) -> Dict[str, Table]:
    """zeta against Delta_+ for several couplings and anharmonicities, with the zero locations."""
    xs = grids["delta_plus"].values()
    g_cases = [(g, p.alpha1) for g in FIG7_COUPLINGS]
    alpha_cases = [(p.coupling1, a) for a in FIG7_ANHARMONICITIES]
    zeros = Table(["g", "alpha", "zeta4_zero", "numeric_zero", "zeta6_zero"],
                  run_sweep(lambda case: _zeros_row(p, *case), g_cases + alpha_cases, threads))
    return {
        "fig7_g": _fig7_panel(p, xs, g_cases, "g", threads),
        "fig7_alpha": _fig7_panel(p, xs, alpha_cases, "alpha", threads),
        "fig7_zeros": zeros,
    }


def render_fig7(tables: Dict[str, Table], out: Path) -> List[Path]:
    paths = []
    for name in ("fig7_g", "fig7_alpha"):
        t = tables[name]
        series = {h: 1e3 * t.column(h) for h in t.header[1:] if not h.startswith("zeta4")}
        paths.append(plotting.line_plot(out / f"{name}.svg", t.column("delta_plus"), series,
                                        "Delta_+ (GHz)", "zeta (MHz)"))
    return paths


FIGURES = {
    "fig3": (fig3_tables, render_fig3, FIG3_GRIDS),
    "fig4": (fig4_tables, render_fig4, FIG4_GRIDS),
    "fig5": (fig5_tables, render_fig5, FIG5_GRIDS),
    "fig7": (fig7_tables, render_fig7, FIG7_GRIDS),
}
