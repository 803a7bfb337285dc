"""Exception hierarchy shared by every module."""


class ThermoError(ValueError):
    """Base class for all numeric-domain errors raised by thermomaj."""


class PopulationError(ThermoError):
    """A population vector failed length, bound or normalization checks."""


class PositivityError(ThermoError):
    """A coherent block violates |lambda|^2 <= p_i * p_j."""


class DomainError(ThermoError):
    """An argument lies outside the domain of a function."""


class UsageError(ThermoError):
    """Inputs are individually valid but inconsistent with each other."""


class ResourceError(ThermoError):
    """A requested computation exceeds the configured size cap."""


class DegenerateFitError(ThermoError):
    """A least-squares fit has no information to determine its parameter."""
