"""Lorenz curves and the thermomajorization partial order."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (EnergySpectrum, PopulationVector, ThermalContext,
                   check_population, gibbs_weights)
from .errors import DomainError, UsageError

COMPARE_TOL = 1e-9


@dataclass(frozen=True)
class LorenzCurve:
    """Concave piecewise-linear curve through the knots ``(x[k], y[k])``.

    ``x[0] = y[0] = 0``, the last knot sits at ``(Z, 1)``.  `order` records
    which level contributed each segment; `beta` is kept so curves built at
    different temperatures are never compared.
    """

    x: np.ndarray
    y: np.ndarray
    beta: float
    order: tuple[int, ...] = ()

    def __post_init__(self):
        for name in ("x", "y"):
            arr = np.array(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.x.shape != self.y.shape or self.x.ndim != 1 or self.x.size < 2:
            raise UsageError("knot arrays must be 1-D, equal length, at least 2 knots")

    @property
    def z(self) -> float:
        return float(self.x[-1])

    @property
    def knots(self) -> list[tuple[float, float]]:
        return [(float(a), float(b)) for a, b in zip(self.x, self.y)]

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.y) / np.diff(self.x)

    def is_concave(self, tol: float = 1e-9) -> bool:
        s = self.slopes
        return bool(np.all(np.diff(s) <= tol * np.maximum(1.0, np.abs(s[1:]))))

    def __call__(self, x):
        return evaluate(self, x)


def sort_order(probs: np.ndarray, spectrum: EnergySpectrum, ctx: ThermalContext) -> np.ndarray:
    """Level indices sorted by ``p_j exp(beta E_j)`` descending.

    Ties go to the lower energy, then to the lower index.
    """
    keys = probs * np.exp(ctx.beta * spectrum.energies)
    return np.lexsort((np.arange(probs.size), spectrum.energies, -keys))


def build_curve(v: PopulationVector, spectrum: EnergySpectrum,
                ctx: ThermalContext) -> LorenzCurve:
    check_population(v, spectrum)
    order = sort_order(v.probs, spectrum, ctx)
    w = gibbs_weights(spectrum, ctx)
    x = np.concatenate(([0.0], np.cumsum(w[order])))
    y = np.concatenate(([0.0], np.cumsum(v.probs[order])))
    return LorenzCurve(x, y, ctx.beta, tuple(int(k) for k in order))


def _interp(curve: LorenzCurve, x):
    # np.interp clamps to y=1 beyond Z, i.e. the flat extension
    return np.interp(x, curve.x, curve.y)


def evaluate(curve: LorenzCurve, x):
    """Value of the curve at `x` (scalar or array) by linear interpolation."""
    xa = np.asarray(x, dtype=np.float64)
    if np.any(xa < -1e-12) or np.any(xa > curve.z + 1e-9) or np.any(np.isnan(xa)):
        raise DomainError(f"x outside [0, Z={curve.z:.12g}]")
    out = _interp(curve, np.clip(xa, 0.0, curve.z))
    return float(out) if out.ndim == 0 else out


def thermomajorizes(p_curve: LorenzCurve, q_curve: LorenzCurve,
                    tol: float = COMPARE_TOL) -> bool:
    """True iff `p_curve` lies on or above `q_curve` everywhere.

    Both curves are piecewise linear, so comparing at the union of their
    knot abscissae is exact.  A curve is taken as flat at y=1 past its own Z.
    """
    if p_curve.beta != q_curve.beta:
        raise UsageError(f"curves built at different beta ({p_curve.beta} vs {q_curve.beta})")
    xs = np.union1d(p_curve.x, q_curve.x)
    return bool(np.all(_interp(p_curve, xs) >= _interp(q_curve, xs) - tol))
