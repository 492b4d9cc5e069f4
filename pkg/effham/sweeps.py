"""
Parameter grids, parallel evaluation and CSV output.

Grid points are evaluated on a thread pool (``EFFHAM_THREADS`` workers) and
collected in input order, so the rows written are the same for any thread
count. Points where a closed form hits a resonance are kept as NaN.
"""

import csv
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, TypeVar, Union

import numpy as np
from loguru import logger

from .errors import DegenerateGapError, InputError, RegimeError, ResonanceError

T = TypeVar("T")
R = TypeVar("R")

MASKED_ERRORS = (ResonanceError, DegenerateGapError, RegimeError)

_GRID = re.compile(r"^\s*(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*=\s*(?P<start>[^:]+):(?P<stop>[^:]+):(?P<steps>\d+)\s*$")


@dataclass(frozen=True)
class Grid:
    """Evenly spaced values ``start .. stop`` (inclusive) of one parameter."""

    name: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.steps < 1:
            raise InputError(f"grid '{self.name}' needs at least one point")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise InputError(f"grid '{self.name}' bounds must be finite")

    @classmethod
    def parse(cls, text: str) -> "Grid":
        """``name=start:stop:steps``"""
        match = _GRID.match(text)
        if match is None:
            raise InputError(f"grid '{text}' is not of the form name=start:stop:steps")
        try:
            start, stop = float(match["start"]), float(match["stop"])
        except ValueError as e:
            raise InputError(f"grid '{text}' has a non-numeric bound") from e
        return cls(match["name"], start, stop, int(match["steps"]))

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


def parse_grids(texts: Iterable[str], defaults: Optional[Dict[str, Grid]] = None) -> Dict[str, Grid]:
    """Command-line grids layered over ``defaults``; unknown names are rejected when defaults are given."""
    grids = dict(defaults or {})
    for text in texts or ():
        grid = Grid.parse(text)
        if defaults is not None and grid.name not in defaults:
            raise InputError(f"unknown grid '{grid.name}'; expected one of {sorted(defaults)}")
        grids[grid.name] = grid
    return grids


def masked(fn: Callable[..., float]) -> Callable[..., float]:
    """Wrap ``fn`` so resonant or out-of-regime points give NaN."""

    def wrapper(*args, **kwargs) -> float:
        try:
            return float(fn(*args, **kwargs))
        except MASKED_ERRORS as e:
            logger.debug("masked grid point {}: {}", args, e)
            return math.nan

    wrapper.__name__ = getattr(fn, "__name__", "masked")
    return wrapper


def run_sweep(fn: Callable[[T], R], points: Sequence[T], threads: Optional[int] = None) -> List[R]:
    """``[fn(p) for p in points]`` evaluated on ``threads`` workers, results in input order."""
    if threads is None:
        from .settings import get_config

        threads = get_config().sweep.threads
    points = list(points)
    logger.info("sweeping {} points on {} thread(s)", len(points), threads)
    if threads <= 1 or len(points) <= 1:
        return [fn(p) for p in points]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, points))


def format_value(value: Union[float, int, str]) -> str:
    """Shortest round-trip decimal; NaN for masked points."""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return "NaN"
    return repr(value)


def write_csv(path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            if len(row) != len(header):
                raise InputError(f"row of length {len(row)} does not match {len(header)} columns")
            writer.writerow([format_value(v) for v in row])
    logger.debug("wrote {}", path)
    return path


def read_csv(path: Union[str, Path]) -> Dict[str, List[float]]:
    """Columns of a CSV written by ``write_csv``, as floats (NaN kept)."""
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader)
        columns: Dict[str, List[float]] = {name: [] for name in header}
        for row in reader:
            for name, cell in zip(header, row):
                columns[name].append(float(cell))
    return columns


def relative_error(estimate: float, reference: float) -> float:
    if math.isnan(estimate) or math.isnan(reference) or reference == 0:
        return math.nan
    return abs(estimate - reference) / abs(reference)
