"""
SVG renderings of the sweep tables.

The CSV files are the results; plots are a convenience view. Output is made
byte-stable by a fixed SVG id salt and by dropping the date metadata.
"""

from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from loguru import logger  # noqa: E402

PathLike = Union[str, Path]


def _salt() -> str:
    from .settings import get_config

    return get_config().output.svg_hashsalt


def _save(fig, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with matplotlib.rc_context({"svg.hashsalt": _salt(), "svg.fonttype": "none"}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    logger.debug("wrote {}", path)
    return path


def line_plot(path: PathLike, x: Sequence[float], series: Dict[str, Sequence[float]],
              xlabel: str, ylabel: str, logy: bool = False,
              shade: Optional[Sequence[float]] = None, title: Optional[str] = None) -> Path:
    """
    One curve per entry of ``series``.

    ``shade`` fills the region below the given curve (error estimate).
    """
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    x = np.asarray(x, dtype=float)
    if shade is not None:
        lower = 1e-12 if logy else 0.0
        ax.fill_between(x, lower, np.asarray(shade, dtype=float), color="0.85", label="error estimate")
    for label, y in series.items():
        ax.plot(x, np.asarray(y, dtype=float), label=label)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.legend(fontsize="small")
    fig.tight_layout()
    return _save(fig, path)


def heatmap(path: PathLike, x: Sequence[float], y: Sequence[float], z: np.ndarray,
            xlabel: str, ylabel: str, curves: Optional[Dict[str, Tuple[Sequence[float], Sequence[float]]]] = None,
            title: Optional[str] = None) -> Path:
    """log10 of ``z`` (rows follow ``y``) with optional overlaid curves."""
    fig, ax = plt.subplots(figsize=(5.6, 4.8))
    z = np.asarray(z, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        image = np.log10(z)
    mesh = ax.pcolormesh(np.asarray(x), np.asarray(y), image, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="log10 |zeta| (GHz)")
    for label, (cx, cy) in (curves or {}).items():
        ax.plot(cx, cy, color="white", linestyle="--", linewidth=1.0, label=label)
    if curves:
        ax.legend(fontsize="small")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return _save(fig, path)
