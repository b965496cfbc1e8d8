"""Boundary-element library for 2D Laplace/Helmholtz scattering by open
arcs: weighted Galerkin discretization on Chebyshev-graded meshes with
square-root operator preconditioning."""

from .assembly import (GalerkinSpace, assemble_hypersingular_weighted,
                       assemble_mass, assemble_rhs,
                       assemble_single_layer_standard,
                       assemble_single_layer_weighted, assemble_sqrt_argument)
from .errors import ArcbemError
from .geometry import Arc, GradedMesh, graded_mesh, make_arc, normal_vector, weight_omega
from .krylov import SolveReport, gmres
from .precond import (build_dirichlet_preconditioner,
                      build_neumann_preconditioner, build_pade_sqrt,
                      build_spectral_sqrt)

__version__ = "0.1.0"

__all__ = [
    "Arc", "ArcbemError", "GalerkinSpace", "GradedMesh", "SolveReport",
    "assemble_hypersingular_weighted", "assemble_mass", "assemble_rhs",
    "assemble_single_layer_standard", "assemble_single_layer_weighted",
    "assemble_sqrt_argument", "build_dirichlet_preconditioner",
    "build_neumann_preconditioner", "build_pade_sqrt", "build_spectral_sqrt",
    "gmres", "graded_mesh", "make_arc", "normal_vector", "weight_omega",
    "__version__",
]
