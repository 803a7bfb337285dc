"""Energy spectra, thermal context, population vectors and Gibbs states.

Energies are in eV and inverse temperatures in 1/eV throughout the package.
All types are immutable: numpy arrays held by them are flagged read-only.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, PopulationError, UsageError

SUM_TOL = 1e-9
ENTRY_TOL = 1e-12


def _frozen(values, dtype=np.float64) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class EnergySpectrum:
    """Labelled eigenenergies of a diagonal Hamiltonian.

    Degenerate levels are allowed; degeneracy is decided by exact equality
    of the stored floats.
    """

    labels: tuple[str, ...]
    energies: np.ndarray

    def __post_init__(self):
        labels = tuple(str(label) for label in self.labels)
        energies = _frozen(self.energies)
        if energies.ndim != 1 or len(labels) != energies.size:
            raise UsageError("labels and energies must be 1-D and of equal length")
        if not labels:
            raise UsageError("a spectrum needs at least one level")
        if len(set(labels)) != len(labels):
            raise UsageError(f"duplicate level labels in {labels}")
        if not np.all(np.isfinite(energies)):
            raise DomainError("energies must be finite")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "energies", energies)

    @classmethod
    def from_levels(cls, levels: Iterable[tuple[str, float]]) -> "EnergySpectrum":
        levels = list(levels)
        return cls(tuple(lab for lab, _ in levels), [e for _, e in levels])

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EnergySpectrum):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.energies, other.energies)

    def __hash__(self) -> int:
        return hash((self.labels, self.energies.tobytes()))

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UsageError(f"unknown level label {label!r}") from None

    def to_dict(self) -> dict:
        return {"levels": [{"label": lab, "energy": float(e)}
                           for lab, e in zip(self.labels, self.energies)]}

    @classmethod
    def from_dict(cls, data: dict) -> "EnergySpectrum":
        try:
            levels = data["levels"]
            return cls.from_levels((lv["label"], float(lv["energy"])) for lv in levels)
        except (KeyError, TypeError) as exc:
            raise UsageError(f"malformed spectrum object: {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "EnergySpectrum":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class ThermalContext:
    beta: float

    def __post_init__(self):
        beta = float(self.beta)
        if not (math.isfinite(beta) and beta > 0):
            raise DomainError(f"beta must be positive and finite, got {self.beta}")
        object.__setattr__(self, "beta", beta)


@dataclass(frozen=True)
class PopulationVector:
    """Occupation probabilities in the energy eigenbasis, in level order.

    Construction only coerces to a 1-D float array; use
    :func:`validate_population` or :func:`check_population` to test it
    against a spectrum.
    """

    probs: np.ndarray

    def __post_init__(self):
        probs = _frozen(self.probs)
        if probs.ndim != 1:
            raise UsageError(f"population vector must be 1-D, got shape {probs.shape}")
        object.__setattr__(self, "probs", probs)

    def __len__(self) -> int:
        return self.probs.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, PopulationVector):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)

    def __hash__(self) -> int:
        return hash(self.probs.tobytes())

    def to_list(self) -> list[float]:
        return [float(v) for v in self.probs]


def gibbs_weights(spectrum: EnergySpectrum, ctx: ThermalContext) -> np.ndarray:
    """Unnormalized Boltzmann factors ``exp(-beta * E_j)``."""
    return np.exp(-ctx.beta * spectrum.energies)


def partition_function(spectrum: EnergySpectrum, ctx: ThermalContext) -> float:
    return float(math.fsum(gibbs_weights(spectrum, ctx)))


def gibbs_state(spectrum: EnergySpectrum, ctx: ThermalContext) -> PopulationVector:
    # shift by the ground energy so large beta*E does not underflow every weight
    w = np.exp(-ctx.beta * (spectrum.energies - spectrum.energies.min()))
    return PopulationVector(w / math.fsum(w))


def validate_population(v: PopulationVector | Sequence[float],
                        spectrum: EnergySpectrum) -> str | None:
    """Return ``None`` if `v` is a valid population on `spectrum`.

    Otherwise return a description of the first violation found, checking
    length, finiteness, entry bounds and normalization in that order.
    """
    probs = v.probs if isinstance(v, PopulationVector) else np.asarray(v, dtype=float)
    if probs.ndim != 1 or probs.size != len(spectrum):
        return f"length mismatch: {probs.size} entries for {len(spectrum)} levels"
    if not np.all(np.isfinite(probs)):
        return "non-finite entry"
    for k, val in enumerate(probs):
        if val < -ENTRY_TOL or val > 1 + ENTRY_TOL:
            return f"entry {k} ({spectrum.labels[k]}) = {val!r} outside [0, 1]"
    total = math.fsum(probs)
    if abs(total - 1.0) > SUM_TOL:
        rel = "sum > 1" if total > 1 else "sum < 1"
        return f"{rel}: entries sum to {total!r}"
    return None


def check_population(v: PopulationVector | Sequence[float],
                     spectrum: EnergySpectrum) -> PopulationVector:
    """Like :func:`validate_population` but raise :class:`PopulationError`."""
    problem = validate_population(v, spectrum)
    if problem is not None:
        raise PopulationError(problem)
    return v if isinstance(v, PopulationVector) else PopulationVector(v)
