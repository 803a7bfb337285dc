"""Optimal quantum yields under the thermomajorization constraint.

The analytic optimizer rests on one observation: for any final state q and
level subset S with Gibbs width ``W_S = sum_{j in S} exp(-beta E_j)``, the
Lorenz curve of q satisfies ``L(q)(W_S) >= sum_{j in S} q_j``.  Feasibility
``L(q) <= L(p)`` therefore caps the subset mass at ``L(p)(W_S)``, and the
cap is attained by spreading that mass Gibbs-proportionally inside S and
the remainder Gibbs-proportionally outside it.

:func:`brute_force_yield` is the independent check: it enumerates a
regular grid on the probability simplex and keeps the best feasible point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from ._accel import default_backend
from .core import (EnergySpectrum, PopulationVector, ThermalContext, check_population,
                   gibbs_state, gibbs_weights)
from .errors import DomainError, ResourceError, UsageError
from .kernels import grid_search
from .lorenz import COMPARE_TOL, LorenzCurve, build_curve, evaluate
from .model import (TRANS_ANY, TRANS_BOTH, PhotoswitchParams, single_molecule_initial,
                    single_molecule_model, superposition_initial_state)
from .modes import diagonalize_blocks

Definition = Literal["any", "both", "single", "subset"]

DEFAULT_MAX_CANDIDATES = 10**8
MAX_LEVELS = 9


@dataclass(frozen=True)
class YieldReport:
    value: float
    achiever: PopulationVector
    definition: Definition = "subset"

    def to_dict(self) -> dict:
        return {"definition": self.definition, "value": self.value,
                "achiever": self.achiever.to_list()}


def _subset_indices(spectrum: EnergySpectrum, subset: Iterable[int | str]) -> list[int]:
    idx = sorted({spectrum.index(s) if isinstance(s, str) else int(s) for s in subset})
    if not idx:
        raise UsageError("subset must be nonempty")
    if idx[0] < 0 or idx[-1] >= len(spectrum):
        raise UsageError(f"subset indices {idx} out of range for {len(spectrum)} levels")
    return idx


def max_subset_mass(initial_curve: LorenzCurve, spectrum: EnergySpectrum,
                    ctx: ThermalContext, subset: Iterable[int | str],
                    definition: Definition = "subset") -> YieldReport:
    """Largest total population reachable on `subset` from a state with `initial_curve`."""
    if initial_curve.beta != ctx.beta:
        raise UsageError("curve and context use different beta")
    idx = _subset_indices(spectrum, subset)
    w = gibbs_weights(spectrum, ctx)
    inside = np.zeros(len(spectrum), bool)
    inside[idx] = True
    w_in = math.fsum(w[inside])
    w_out = math.fsum(w[~inside])
    if not inside.all():
        value = evaluate(initial_curve, min(w_in, initial_curve.z))
    else:
        value = 1.0
    value = min(max(value, 0.0), 1.0)
    q = np.where(inside, value * w / w_in, 0.0)
    if w_out > 0:
        q = np.where(inside, q, (1.0 - value) * w / w_out)
    return YieldReport(value, PopulationVector(q), definition)


def _two_molecule_yield(params: PhotoswitchParams, ctx: ThermalContext,
                        labels: Sequence[str], definition: Definition) -> YieldReport:
    state = superposition_initial_state(params)
    diag, _ = diagonalize_blocks(state)
    curve = build_curve(diag, state.spectrum, ctx)
    return max_subset_mass(curve, state.spectrum, ctx, labels, definition)


def qy_both(params: PhotoswitchParams, ctx: ThermalContext) -> YieldReport:
    """Maximal population of ``tt`` (both molecules trans)."""
    return _two_molecule_yield(params, ctx, TRANS_BOTH, "both")


def qy_any(params: PhotoswitchParams, ctx: ThermalContext) -> YieldReport:
    """Maximal population with at least one molecule trans."""
    return _two_molecule_yield(params, ctx, TRANS_ANY, "any")


def qy_single(e1: float, delta_e: float, p: float, ctx: ThermalContext) -> YieldReport:
    spectrum = single_molecule_model(e1, delta_e)
    curve = build_curve(single_molecule_initial(p), spectrum, ctx)
    return max_subset_mass(curve, spectrum, ctx, ["t"], "single")


def _grid_size(n: int, parts: int) -> int:
    return math.comb(n + parts - 1, parts - 1)


def brute_force_yield(initial: PopulationVector, spectrum: EnergySpectrum,
                      ctx: ThermalContext, subset: Iterable[int | str],
                      resolution: float, *,
                      tie_groups: Sequence[Sequence[int | str]] = (),
                      max_candidates: int = DEFAULT_MAX_CANDIDATES,
                      backend: str | None = None,
                      definition: Definition = "subset") -> YieldReport:
    """Best subset mass over final states on the simplex grid of step `resolution`.

    Grid points are the compositions of ``n = 1/resolution`` into one part
    per level.  `tie_groups` lists groups of degenerate levels whose final
    populations are forced equal; each group then takes one grid coordinate,
    split evenly among its members.  Swapping degenerate levels leaves every
    Lorenz curve unchanged and the feasible set is convex, so averaging a
    feasible state over the swaps keeps it feasible; when the subset is a
    union of whole groups the optimum is therefore unchanged.

    The initial state and the Gibbs state are always reachable and are
    scored alongside the grid, so a feasible answer always exists.
    """
    check_population(initial, spectrum)
    if not 0.0 < resolution < 1.0:
        raise DomainError(f"resolution must lie in (0, 1), got {resolution}")
    n = round(1.0 / resolution)
    if abs(n * resolution - 1.0) > 1e-6:
        raise DomainError(f"1/resolution must be an integer, got {1.0 / resolution:.6g}")
    d = len(spectrum)
    if d > MAX_LEVELS:
        raise ResourceError(f"brute force is limited to {MAX_LEVELS} levels, got {d}")

    idx = _subset_indices(spectrum, subset)
    class_of = np.full(d, -1, np.int64)
    groups = [sorted({spectrum.index(m) if isinstance(m, str) else int(m) for m in g})
              for g in tie_groups]
    n_cls = 0
    for g in groups:
        if any(class_of[m] >= 0 for m in g):
            raise UsageError(f"tie groups overlap at {g}")
        if len({spectrum.energies[m] for m in g}) != 1:
            raise UsageError(f"tie group {g} joins non-degenerate levels")
        class_of[g] = n_cls
        n_cls += 1
    for j in range(d):
        if class_of[j] < 0:
            class_of[j] = n_cls
            n_cls += 1
    class_size = np.bincount(class_of, minlength=n_cls)
    in_subset = np.zeros(d, bool)
    in_subset[idx] = True
    subset_cls = np.zeros(n_cls, bool)
    for c in range(n_cls):
        members = in_subset[class_of == c]
        if members.any() and not members.all():
            raise UsageError("a tie group straddles the subset boundary")
        subset_cls[c] = members.all()

    size = _grid_size(n, n_cls)
    if size > max_candidates:
        raise ResourceError(
            f"grid has {size:.3g} candidates (cap {max_candidates:.3g}); "
            "use a coarser resolution, tie groups, or fewer levels")

    w = gibbs_weights(spectrum, ctx)
    if not np.all(w > 0):
        raise DomainError("Gibbs weights underflow; reduce beta * energy")
    curve = build_curve(initial, spectrum, ctx)

    # seeds: identity map and full thermalization
    best_val, best_q = -1.0, None
    for seed in (initial.probs, gibbs_state(spectrum, ctx).probs):
        val = math.fsum(seed[idx])
        if val > best_val:
            best_val, best_q = val, np.array(seed)

    score, counts = grid_search(n, class_of, class_size, subset_cls, w, curve.x, curve.y,
                                COMPARE_TOL, backend or default_backend())
    if score >= 0 and score / n > best_val:
        best_val = score / n
        best_q = counts[class_of] / (n * class_size[class_of])
    return YieldReport(float(best_val), PopulationVector(best_q), definition)


# degenerate partner levels of the two-molecule model
PAIR_SYMMETRY = (("ge", "eg"), ("gt", "tg"), ("et", "te"))


def oracle_qy(params: PhotoswitchParams, ctx: ThermalContext, definition: Definition,
              resolution: float, *, use_symmetry: bool = True,
              max_candidates: int = DEFAULT_MAX_CANDIDATES,
              backend: str | None = None) -> YieldReport:
    """Grid-search counterpart of :func:`qy_any`, :func:`qy_both`, :func:`qy_single`.

    With `use_symmetry` the two-molecule search ties the populations of
    partner levels (ge/eg, gt/tg, et/te), which shrinks the grid from 9 to 6
    coordinates without changing the optimum.
    """
    if definition == "single":
        spectrum = single_molecule_model(params.e1, params.delta_e)
        return brute_force_yield(single_molecule_initial(params.p), spectrum, ctx, ["t"],
                                 resolution, max_candidates=max_candidates, backend=backend,
                                 definition="single")
    labels = {"any": TRANS_ANY, "both": TRANS_BOTH}.get(definition)
    if labels is None:
        raise UsageError(f"unknown yield definition {definition!r}")
    state = superposition_initial_state(params)
    diag, _ = diagonalize_blocks(state)
    return brute_force_yield(diag, state.spectrum, ctx, labels, resolution,
                             tie_groups=PAIR_SYMMETRY if use_symmetry else (),
                             max_candidates=max_candidates, backend=backend,
                             definition=definition)
