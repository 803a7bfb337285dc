"""Thermomajorization toolkit for coherent photoswitch yields."""
from .core import (EnergySpectrum, PopulationVector, ThermalContext, check_population,
                   gibbs_state, gibbs_weights, partition_function, validate_population)
from .errors import (DegenerateFitError, DomainError, PopulationError, PositivityError,
                     ResourceError, ThermoError, UsageError)
from .lorenz import LorenzCurve, build_curve, evaluate, thermomajorizes
from .model import (PhotoswitchParams, general_two_molecule_initial, single_molecule_initial,
                    single_molecule_model, superposition_initial_state, two_molecule_model)
from .modes import (BasisRotation, Block, CoherentBlockState, diagonalize_blocks,
                    extract_zero_mode, purity, rotate_back)
from .optimize import (YieldReport, brute_force_yield, max_subset_mass, oracle_qy, qy_any,
                       qy_both, qy_single)

__version__ = "0.1.0"
