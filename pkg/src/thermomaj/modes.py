"""Zero-mode coherences inside degenerate subspaces.

A :class:`CoherentBlockState` is a density matrix restricted to its 0-mode:
populations on the diagonal plus disjoint 2x2 Hermitian blocks between
exactly degenerate levels.  :func:`diagonalize_blocks` is the free
energy-preserving rotation that moves these coherences onto the diagonal,
and :func:`rotate_back` undoes it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import EnergySpectrum, PopulationVector, check_population
from .errors import PositivityError, UsageError

PSD_TOL = 1e-12


@dataclass(frozen=True)
class Block:
    i: int
    j: int
    value: complex  # rho[i, j]; rho[j, i] is its conjugate


@dataclass(frozen=True)
class CoherentBlockState:
    spectrum: EnergySpectrum
    diag: PopulationVector
    blocks: tuple[Block, ...] = ()

    def __post_init__(self):
        diag = self.diag if isinstance(self.diag, PopulationVector) else PopulationVector(self.diag)
        check_population(diag, self.spectrum)
        blocks = []
        used: set[int] = set()
        for b in self.blocks:
            b = b if isinstance(b, Block) else Block(*b)
            i, j = sorted((int(b.i), int(b.j)))
            value = complex(b.value) if i == b.i else complex(b.value).conjugate()
            n = len(self.spectrum)
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise UsageError(f"block ({b.i}, {b.j}) must join two distinct levels of {n}")
            if self.spectrum.energies[i] != self.spectrum.energies[j]:
                raise UsageError(
                    f"block ({i}, {j}) joins non-degenerate levels "
                    f"{self.spectrum.labels[i]!r} and {self.spectrum.labels[j]!r}")
            if i in used or j in used:
                raise UsageError(f"level in block ({i}, {j}) already belongs to another block")
            used.update((i, j))
            pi, pj = diag.probs[i], diag.probs[j]
            if abs(value) ** 2 > pi * pj + PSD_TOL:
                raise PositivityError(
                    f"block ({i}, {j}): |lambda|^2 = {abs(value) ** 2:.6g} exceeds "
                    f"p_i*p_j = {pi * pj:.6g}")
            blocks.append(Block(i, j, value))
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "blocks", tuple(blocks))

    def density_matrix(self) -> np.ndarray:
        rho = np.diag(self.diag.probs).astype(complex)
        for b in self.blocks:
            rho[b.i, b.j] = b.value
            rho[b.j, b.i] = b.value.conjugate()
        return rho

    def to_dict(self) -> dict:
        return {
            "diag": self.diag.to_list(),
            "blocks": [{"i": b.i, "j": b.j, "re": b.value.real, "im": b.value.imag}
                       for b in self.blocks],
        }

    @classmethod
    def from_dict(cls, data: dict, spectrum: EnergySpectrum) -> "CoherentBlockState":
        blocks = tuple(Block(int(b["i"]), int(b["j"]), complex(b.get("re", 0.0), b.get("im", 0.0)))
                       for b in data.get("blocks", ()))
        return cls(spectrum, PopulationVector(data["diag"]), blocks)


@dataclass(frozen=True)
class BlockRotation:
    i: int
    j: int
    angle: float  # mixing angle theta, radians
    phase: float  # arg(lambda), radians


@dataclass(frozen=True)
class BasisRotation:
    spectrum: EnergySpectrum
    blocks: tuple[BlockRotation, ...] = ()

    @property
    def is_identity(self) -> bool:
        return all(r.angle == 0.0 for r in self.blocks)


def extract_zero_mode(state: CoherentBlockState) -> CoherentBlockState:
    """Restrict `state` to its 0-mode (transition frequency zero).

    Blocks can only join degenerate levels, so every stored element already
    belongs to the 0-mode and this is the identity on valid states.
    """
    e = state.spectrum.energies
    kept = tuple(b for b in state.blocks if e[b.i] == e[b.j])
    return CoherentBlockState(state.spectrum, state.diag, kept)


def block_eigenvalues(pi: float, pj: float, lam_abs: float) -> tuple[float, float]:
    """Eigenvalues ``(p_plus, p_minus)`` of ``[[pi, lam], [lam*, pj]]``."""
    mean = 0.5 * (pi + pj)
    radius = math.hypot(0.5 * (pi - pj), lam_abs)
    return mean + radius, mean - radius


def diagonalize_blocks(state: CoherentBlockState) -> tuple[PopulationVector, BasisRotation]:
    """Diagonalize every coherent block in closed form.

    The larger eigenvalue goes to the lower level index.  A block whose
    coherence is exactly zero is left untouched with an identity rotation.
    """
    probs = state.diag.probs.copy()
    rots = []
    for b in state.blocks:
        pi, pj = probs[b.i], probs[b.j]
        lam = abs(b.value)
        if lam * lam > pi * pj + PSD_TOL:
            raise PositivityError(f"block ({b.i}, {b.j}) is not positive semidefinite")
        if lam == 0.0:
            rots.append(BlockRotation(b.i, b.j, 0.0, 0.0))
            continue
        p_plus, _ = block_eigenvalues(pi, pj, lam)
        # s/2 <= p_plus <= s, so s - p_plus is exact (Sterbenz) and the block
        # mass is conserved bit for bit
        p_minus = (pi + pj) - p_plus
        probs[b.i], probs[b.j] = p_plus, p_minus
        angle = 0.5 * math.atan2(2.0 * lam, pi - pj)
        rots.append(BlockRotation(b.i, b.j, angle, math.atan2(b.value.imag, b.value.real)))
    return PopulationVector(probs), BasisRotation(state.spectrum, tuple(rots))


def rotate_back(final_diag: PopulationVector, rot: BasisRotation) -> CoherentBlockState:
    """Apply the inverse block rotation to a diagonal state.

    Each block becomes ``q_i |v+><v+| + q_j |v-><v-|`` where ``v+-`` are the
    eigenvectors found by :func:`diagonalize_blocks`.
    """
    if len(final_diag) != len(rot.spectrum):
        raise UsageError(
            f"dimension mismatch: {len(final_diag)} populations for {len(rot.spectrum)} levels")
    check_population(final_diag, rot.spectrum)
    probs = final_diag.probs.copy()
    blocks = []
    for r in rot.blocks:
        qi, qj = final_diag.probs[r.i], final_diag.probs[r.j]
        c, s = math.cos(r.angle), math.sin(r.angle)
        probs[r.i] = qi * c * c + qj * s * s
        probs[r.j] = qi * s * s + qj * c * c
        off = (qi - qj) * c * s
        blocks.append(Block(r.i, r.j, complex(off * math.cos(r.phase), off * math.sin(r.phase))))
    return CoherentBlockState(rot.spectrum, PopulationVector(probs), tuple(blocks))


def purity(state: CoherentBlockState) -> float:
    """``Tr(rho^2)`` of the 0-mode state."""
    p = state.diag.probs
    return float(np.dot(p, p) + 2.0 * sum(abs(b.value) ** 2 for b in state.blocks))
