"""One- and two-molecule photoswitch models.

Each molecule has three local levels: cis ground ``g`` (energy 0), cis
excited ``e`` (energy ``e1``) and trans ground ``t`` (energy ``delta_e``).
Two-molecule levels are product states with additive energies, listed in
the fixed order ``gg ge eg ee gt tg et te tt``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import EnergySpectrum, PopulationVector, check_population
from .errors import DomainError, PositivityError
from .modes import Block, CoherentBlockState

SINGLE_LABELS = ("g", "e", "t")
PAIR_LABELS = ("gg", "ge", "eg", "ee", "gt", "tg", "et", "te", "tt")

# subsets of the two-molecule levels counted by each yield definition
TRANS_ANY = ("gt", "tg", "et", "te", "tt")
TRANS_BOTH = ("tt",)


@dataclass(frozen=True)
class PhotoswitchParams:
    e1: float
    delta_e: float
    p: float
    lam: float = 0.0

    def __post_init__(self):
        for name in ("e1", "delta_e", "p", "lam"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise DomainError(f"{name} must be finite")
            object.__setattr__(self, name, val)
        _check_energies(self.e1, self.delta_e)
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"p must lie in [0, 1], got {self.p}")
        if self.lam < 0.0:
            raise DomainError(f"lambda is a magnitude and must be >= 0, got {self.lam}")
        if self.lam > self.p / 2 + 1e-12:
            raise PositivityError(f"lambda = {self.lam} exceeds p/2 = {self.p / 2}")


def _check_energies(e1: float, delta_e: float) -> None:
    if not e1 > 0:
        raise DomainError(f"e1 must be > 0, got {e1}")
    if not delta_e >= 0:
        raise DomainError(f"delta_e must be >= 0, got {delta_e}")


def single_molecule_model(e1: float, delta_e: float) -> EnergySpectrum:
    _check_energies(e1, delta_e)
    return EnergySpectrum(SINGLE_LABELS, [0.0, float(e1), float(delta_e)])


def two_molecule_model(e1: float, delta_e: float) -> EnergySpectrum:
    single = single_molecule_model(e1, delta_e)
    local = dict(zip(single.labels, single.energies))
    # float addition is commutative, so E_ij == E_ji bit for bit
    energies = [local[a] + local[b] for a, b in PAIR_LABELS]
    return EnergySpectrum(PAIR_LABELS, energies)


def single_molecule_initial(p: float) -> PopulationVector:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    return PopulationVector([1.0 - p, p, 0.0])


def general_two_molecule_initial(p_gg: float, p_ge: float, p_eg: float, p_ee: float,
                                 lam: complex = 0.0, *, e1: float = 2.48,
                                 delta_e: float = 1.39) -> CoherentBlockState:
    """Cis-subspace state with populations on gg/ge/eg/ee and one ge-eg coherence.

    The spectrum only matters for later Lorenz-curve construction; the
    defaults are the rhodopsin energies.
    """
    spectrum = two_molecule_model(e1, delta_e)
    diag = check_population([p_gg, p_ge, p_eg, p_ee, 0, 0, 0, 0, 0], spectrum)
    return CoherentBlockState(spectrum, diag, (Block(1, 2, complex(lam)),))


def superposition_initial_state(params: PhotoswitchParams) -> CoherentBlockState:
    """Photon split 50/50 over two molecules, with ge-eg coherence ``lam``."""
    half = params.p / 2
    return general_two_molecule_initial(1.0 - params.p, half, half, 0.0, params.lam,
                                        e1=params.e1, delta_e=params.delta_e)
