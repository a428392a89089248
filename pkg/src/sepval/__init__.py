"""Separative valuation algebras: quotient extension, conditionals and composition."""

from .belief import BeliefAlgebra, FrameSystem, MassFunction
from .composition import Density, compose, compose_sequence, is_density
from .conditionals import Conditional, conditional
from .core import Algebra, Valuation, check_axioms
from .gaussian import CanonicalGaussian, GaussianAlgebra, GaussianPotential
from .lattice import VARIABLES, PartitionLattice, SubsetLattice, VariableSet, vset
from .laws import LawReport, LawResult
from .potentials import Potential, PotentialAlgebra
from .quotient import Quotient, embed, equals0, idempotent_of, invert, multiply, project0, reduce

__all__ = [
    "Algebra", "Valuation", "check_axioms",
    "SubsetLattice", "PartitionLattice", "VariableSet", "VARIABLES", "vset",
    "LawReport", "LawResult",
    "Potential", "PotentialAlgebra",
    "GaussianPotential", "CanonicalGaussian", "GaussianAlgebra",
    "MassFunction", "FrameSystem", "BeliefAlgebra",
    "Quotient", "embed", "multiply", "invert", "idempotent_of", "project0", "equals0", "reduce",
    "Conditional", "conditional",
    "Density", "compose", "compose_sequence", "is_density",
]
