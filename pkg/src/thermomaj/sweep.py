"""Parameter sweeps: yield versus energy gap, the coherence-advantage map,
its ridge, and the exponential ridge fit ``p = p0 * (exp(beta dE) - 1)``.

Every grid cell is an independent analytic evaluation.  With ``workers > 1``
cells are fanned out to a thread pool; results are collected in grid order,
so output never depends on scheduling.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .core import ThermalContext
from .errors import DegenerateFitError, UsageError
from .model import PhotoswitchParams
from .optimize import qy_any, qy_both, qy_single

RIDGE_THRESHOLD = 1e-6
RIDGE_TIE_TOL = 1e-9


@dataclass(frozen=True)
class GapSweepRow:
    beta_delta_e: float
    qy_any_hi: float
    qy_any_lo: float
    qy_both_hi: float
    qy_both_lo: float
    qy_single: float

    FIELDS = ("beta_delta_e", "qy_any_hi", "qy_any_lo", "qy_both_hi", "qy_both_lo", "qy_single")

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, f) for f in self.FIELDS)


@dataclass(frozen=True, eq=False)
class AdvantageMap:
    p_grid: np.ndarray
    gap_grid: np.ndarray
    delta: np.ndarray  # shape (len(p_grid), len(gap_grid))

    def __post_init__(self):
        for name in ("p_grid", "gap_grid", "delta"):
            arr = np.array(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.delta.shape != (self.p_grid.size, self.gap_grid.size):
            raise UsageError(f"delta shape {self.delta.shape} does not match grids "
                             f"({self.p_grid.size}, {self.gap_grid.size})")

    def __eq__(self, other) -> bool:
        if not isinstance(other, AdvantageMap):
            return NotImplemented
        return all(np.array_equal(getattr(self, f), getattr(other, f))
                   for f in ("p_grid", "gap_grid", "delta"))

    def long_rows(self) -> list[tuple[float, float, float]]:
        return [(float(p), float(g), float(self.delta[i, j]))
                for i, p in enumerate(self.p_grid) for j, g in enumerate(self.gap_grid)]

    @classmethod
    def from_long_rows(cls, rows: Iterable[Sequence[float]]) -> "AdvantageMap":
        rows = [tuple(map(float, r)) for r in rows]
        if not rows:
            raise UsageError("empty advantage map")
        ps = sorted({r[0] for r in rows})
        gs = sorted({r[1] for r in rows})
        pi = {p: k for k, p in enumerate(ps)}
        gi = {g: k for k, g in enumerate(gs)}
        delta = np.full((len(ps), len(gs)), np.nan)
        for p, g, v in rows:
            delta[pi[p], gi[g]] = v
        if np.isnan(delta).any():
            raise UsageError("advantage map is not a full rectangular grid")
        return cls(ps, gs, delta)


@dataclass(frozen=True)
class RidgeFit:
    points: tuple[tuple[float, float], ...]
    p0: float
    residual: float


def make_grid(lo: float, hi: float, step: float) -> np.ndarray:
    """Inclusive arithmetic grid, rounded to 12 decimals to drop float fuzz."""
    if step <= 0 or hi < lo:
        raise UsageError(f"bad grid [{lo}, {hi}] step {step}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(count), 12)


def _fan_out(func: Callable, items: Sequence, workers: int | None) -> list:
    if workers is None or workers <= 1:
        return [func(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def gap_sweep(e1: float, p: float, lam_hi: float, lam_lo: float,
              gap_grid: Sequence[float], ctx: ThermalContext,
              workers: int | None = None) -> list[GapSweepRow]:
    """Yields at each scaled gap ``beta * delta_e`` for two coherence levels."""
    gaps = [float(g) for g in gap_grid]
    if not gaps:
        raise UsageError("gap grid is empty")

    def row(gap: float) -> GapSweepRow:
        de = gap / ctx.beta
        hi = PhotoswitchParams(e1, de, p, lam_hi)
        lo = PhotoswitchParams(e1, de, p, lam_lo)
        return GapSweepRow(gap, qy_any(hi, ctx).value, qy_any(lo, ctx).value,
                           qy_both(hi, ctx).value, qy_both(lo, ctx).value,
                           qy_single(e1, de, p, ctx).value)

    return _fan_out(row, gaps, workers)


def coherence_advantage(e1: float, p: float, gap: float, ctx: ThermalContext) -> float:
    """``QY_any`` at maximal coherence ``p/2`` minus ``QY_any`` without coherence."""
    de = gap / ctx.beta
    coherent = qy_any(PhotoswitchParams(e1, de, p, p / 2), ctx).value
    incoherent = qy_any(PhotoswitchParams(e1, de, p, 0.0), ctx).value
    return coherent - incoherent


def advantage_map(e1: float, p_grid: Sequence[float], gap_grid: Sequence[float],
                  ctx: ThermalContext, workers: int | None = None) -> AdvantageMap:
    ps = [float(p) for p in p_grid]
    gs = [float(g) for g in gap_grid]
    if not ps or not gs:
        raise UsageError("advantage map grids must be nonempty")
    cells = [(p, g) for p in ps for g in gs]
    values = _fan_out(lambda c: coherence_advantage(e1, c[0], c[1], ctx), cells, workers)
    return AdvantageMap(ps, gs, np.array(values).reshape(len(ps), len(gs)))


def ridge_extract(amap: AdvantageMap, threshold: float = RIDGE_THRESHOLD
                  ) -> list[tuple[float, float]]:
    """Per p row, the mean gap over all cells attaining the row maximum.

    Returns ``(beta_delta_e, p)`` pairs; rows whose maximum is below
    `threshold` carry no ridge and are skipped.
    """
    if amap.delta.size == 0:
        raise UsageError("empty advantage map")
    points = []
    for i, p in enumerate(amap.p_grid):
        row = amap.delta[i]
        top = row.max()
        if top < threshold:
            continue
        at_max = row >= top - RIDGE_TIE_TOL
        points.append((float(amap.gap_grid[at_max].mean()), float(p)))
    return points


def fit_ridge(points: Sequence[tuple[float, float]], ctx: ThermalContext | None = None
              ) -> RidgeFit:
    """Least-squares ``p0`` for ``p = p0 * (exp(g) - 1)`` with ``g = beta * delta_e``.

    The model is linear in ``p0``, giving ``p0 = sum(f p) / sum(f^2)`` with
    ``f = exp(g) - 1``; the residual is the RMS error.  `ctx` is accepted
    for symmetry with the other sweep functions; the gaps are already scaled.
    """
    pts = tuple((float(g), float(p)) for g, p in points)
    if len(pts) < 2:
        raise UsageError("ridge fit needs at least two points")
    g = np.array([pt[0] for pt in pts])
    p = np.array([pt[1] for pt in pts])
    f = np.expm1(g)
    denom = float(np.dot(f, f))
    if denom == 0.0:
        raise DegenerateFitError("all ridge gaps are zero; p0 is undetermined")
    p0 = float(np.dot(f, p)) / denom
    residual = float(np.sqrt(np.mean((p - p0 * f) ** 2)))
    return RidgeFit(pts, p0, residual)
