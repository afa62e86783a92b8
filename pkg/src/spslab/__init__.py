"""Numerical laboratory for a Schrodinger-Poisson-Slater variational problem.

Submodules: grid (discretizations and quadrature), coulomb (potentials
and the bilinear energy form), energy (functionals, gradients,
scalings), minimize (projected gradient descent and symmetry
diagnostics), constructions (closed-form witness families),
inequalities (weighted-norm and band-integral checks), cli (scenario
orchestrator).
"""

from .energy import EnergyBreakdown, Params
from .grid import BoxGrid, Field3D, RadialField, RadialGrid
from .minimize import MinimizerResult, SolverConfig

__all__ = [
    "BoxGrid",
    "EnergyBreakdown",
    "Field3D",
    "MinimizerResult",
    "Params",
    "RadialField",
    "RadialGrid",
    "SolverConfig",
]

__version__ = "0.1.0"
