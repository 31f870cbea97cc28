"""Weak-probe gain of a three-level ladder under a strong resonant drive."""
from .errors import ProbelineError
from .lineshape import ContributionToggles, alpha_ratio, contributions, spectrum
from .model import DriveField, ProbeGrid, RelaxationSet, validate

__version__ = "0.1.0"

__all__ = [
    "ContributionToggles", "DriveField", "ProbeGrid", "ProbelineError", "RelaxationSet",
    "alpha_ratio", "contributions", "spectrum", "validate", "__version__",
]
