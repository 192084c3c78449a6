"""Random walks on Cayley graphs of finite groups, lifted to braids.

Exact limiting expectations, braid closures and large-deviation oracles,
each paired with a brute-force check.
"""

from .cayley import CayleyGraph, build_cayley, is_bipartite, length_of, parity_sums, reduced_word
from .errors import CapExceeded, DomainError, InvalidSpec, UnknownElement
from .groups import GroupSpec, Presentation, build_group, has_odd_relator, presentation_of
from .walk import LimitValue, StepDistribution, limiting_expectation, simulate, uniform_step_distribution

__all__ = [
    "CapExceeded",
    "CayleyGraph",
    "DomainError",
    "GroupSpec",
    "InvalidSpec",
    "LimitValue",
    "Presentation",
    "StepDistribution",
    "UnknownElement",
    "build_cayley",
    "build_group",
    "has_odd_relator",
    "is_bipartite",
    "length_of",
    "limiting_expectation",
    "parity_sums",
    "presentation_of",
    "reduced_word",
    "simulate",
    "uniform_step_distribution",
]
__version__ = "0.1.0"
