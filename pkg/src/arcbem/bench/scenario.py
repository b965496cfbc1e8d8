"""Scenario description and the single-solve driver.

A scenario bundles geometry, boundary condition, wavenumber, right-hand
side, preconditioner and solver settings.  Scenario files are plain JSON
with the same keys as :class:`Scenario` (see README for the schema).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..assembly import (GalerkinSpace, ParamFunction, PlaneWaveNormalDerivative,
                        PlaneWaveTrace, assemble_hypersingular_weighted,
                        assemble_rhs, assemble_single_layer_weighted)
from ..errors import ArcbemError
from ..geometry import Arc, graded_mesh, make_arc
from ..krylov import SolveReport, gmres
from ..precond import (build_calderon_preconditioner,
                       build_dirichlet_preconditioner,
                       build_laplace_shifted_preconditioner,
                       build_neumann_preconditioner, identity_map)

DESK_SCALE_MAX_N = 8000
POINTS_PER_WAVELENGTH = 5


def mesh_size_for(k_times_length: float, points_per_wavelength: float = POINTS_PER_WAVELENGTH) -> int:
    """Panel count for a given k|Gamma|: N = round(p k|Gamma|) with p = 5.

    This is the resolution rule of the reproduced iteration tables (about
    10 pi mesh points per wavelength); it also explains the desk-scale cap:
    k|Gamma| = 400 pi gives N ~ 6300, the largest dense-storage row.
    """
    return max(16, round(points_per_wavelength * k_times_length))


@dataclass
class GeometrySpec:
    kind: str = "flat-segment"
    theta: float | None = None
    samples_csv: str | None = None

    def build(self) -> Arc:
        samples = None
        if self.samples_csv is not None:
            samples = np.loadtxt(self.samples_csv, delimiter=",")
        return make_arc(self.kind, theta=self.theta, samples=samples)


@dataclass
class RhsSpec:
    kind: str = "plane-wave"          # plane-wave | table-rhs | manufactured | constant
    angle: float = 0.0
    case: str = "dir-omega"           # manufactured case name

    def build(self, bc: str, k: float, n_panels: int):
        if self.kind == "plane-wave":
            if bc == "dirichlet":
                return PlaneWaveTrace(k, self.angle)
            return PlaneWaveNormalDerivative(k, self.angle)
        if self.kind == "table-rhs":
            # the k = 0 table data: (x^2 + 1/N^2)^(-1/2) resp. (+1/2)
            power = -0.5 if bc == "dirichlet" else 0.5
            return ParamFunction(lambda t: (t**2 + 1.0 / n_panels**2) ** power)
        if self.kind == "manufactured":
            from .convergence import dirichlet_manufactured_rhs
            if bc != "dirichlet" or k != 0.0:
                raise ArcbemError("manufactured data exists for the k = 0 "
                                  "Dirichlet cases only")
            return ParamFunction(dirichlet_manufactured_rhs(self.case))
        if self.kind == "constant":
            return ParamFunction(lambda t: np.ones_like(t))
        raise ArcbemError(f"unknown rhs kind {self.kind!r}")


@dataclass
class PrecondSpec:
    type: str = "sqrt"                # none | sqrt | sqrt-laplace | calderon
    n_pade: int = 15
    theta: float = np.pi / 3
    eps_rule: str | float = "auto"    # "auto" = 0.05 k^(1/3)

    def eps_for(self, k: float) -> float | None:
        if self.eps_rule == "auto":
            return None
        return float(self.eps_rule)


@dataclass
class SolverSpec:
    tol: float = 1e-8
    max_iter: int = 500


@dataclass
class Scenario:
    geometry: GeometrySpec = field(default_factory=GeometrySpec)
    bc: str = "dirichlet"
    k: float | None = None
    k_times_length: float | None = None
    points_per_wavelength: float = POINTS_PER_WAVELENGTH
    n_panels: int | None = None
    rhs: RhsSpec = field(default_factory=RhsSpec)
    preconditioner: PrecondSpec = field(default_factory=PrecondSpec)
    solver: SolverSpec = field(default_factory=SolverSpec)
    label: str = ""

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        data = dict(data)
        geo = GeometrySpec(**data.pop("geometry", {}))
        rhs = RhsSpec(**data.pop("rhs", {}))
        pre_raw = dict(data.pop("preconditioner", {}))
        if "Np" in pre_raw:           # accepted alias for the term count
            pre_raw["n_pade"] = pre_raw.pop("Np")
        pre = PrecondSpec(**pre_raw)
        sol = SolverSpec(**data.pop("solver", {}))
        return cls(geometry=geo, rhs=rhs, preconditioner=pre, solver=sol, **data)

    @classmethod
    def from_json(cls, path) -> "Scenario":
        with Path(path).open() as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return {
            "geometry": {k: v for k, v in vars(self.geometry).items() if v is not None},
            "bc": self.bc,
            "k": self.k,
            "k_times_length": self.k_times_length,
            "points_per_wavelength": self.points_per_wavelength,
            "n_panels": self.n_panels,
            "rhs": vars(self.rhs),
            "preconditioner": vars(self.preconditioner),
            "solver": vars(self.solver),
            "label": self.label,
        }

    def resolve(self):
        """Arc, wavenumber and panel count for this scenario."""
        arc = self.geometry.build()
        if self.k is not None:
            k = float(self.k)
        elif self.k_times_length is not None:
            k = float(self.k_times_length) / arc.length
        else:
            k = 0.0
        if self.n_panels is not None:
            n = int(self.n_panels)
        elif k > 0:
            n = mesh_size_for(k * arc.length, self.points_per_wavelength)
        else:
            n = 500
        if arc.corners and n % 2:
            n += 1
        if n > DESK_SCALE_MAX_N:
            raise ArcbemError(
                f"N = {n} exceeds the desk-scale cap {DESK_SCALE_MAX_N} "
                f"(dense storage); skip this row")
        return arc, k, n


@dataclass
class ScenarioResult:
    scenario: Scenario
    report: SolveReport
    density: np.ndarray
    arc: Arc
    k: float
    n_panels: int
    space: GalerkinSpace
    operator: np.ndarray


def build_preconditioner(spec: PrecondSpec, arc: Arc, k: float, bc: str,
                         space: GalerkinSpace, operator=None):
    if spec.type == "none":
        return identity_map(space.dof_count)
    eps = spec.eps_for(k)
    if spec.type == "sqrt":
        if bc == "dirichlet":
            return build_dirichlet_preconditioner(
                arc, k, space, n_terms=spec.n_pade, theta=spec.theta, eps=eps)
        return build_neumann_preconditioner(
            arc, k, space, n_terms=spec.n_pade, theta=spec.theta, eps=eps)
    if spec.type == "sqrt-laplace":
        if bc != "dirichlet":
            raise ArcbemError("sqrt-laplace comparison map targets the Dirichlet system")
        return build_laplace_shifted_preconditioner(arc, space)
    if spec.type == "calderon":
        mesh = space.mesh
        other = GalerkinSpace(mesh, "continuous",
                              "omega" if bc == "dirichlet" else "inv-omega")
        space_inv = space if bc == "dirichlet" else other
        space_om = other if bc == "dirichlet" else space
        return build_calderon_preconditioner(arc, k, bc, space_inv, space_om)
    if spec.type == "standard-sqrt":
        raise ArcbemError("standard-sqrt lives on the non-weighted P1 space; "
                          "run it through the graded comparison study "
                          "(arcbem compare graded)")
    raise ArcbemError(f"unknown preconditioner type {spec.type!r}")


def run_scenario(sc: Scenario, true_history: bool = False) -> ScenarioResult:
    """Assemble, precondition and solve one scenario."""
    arc, k, n = sc.resolve()
    mesh = graded_mesh(arc, n)
    weight = "inv-omega" if sc.bc == "dirichlet" else "omega"
    space = GalerkinSpace(mesh, "continuous", weight)
    if sc.bc == "dirichlet":
        op = assemble_single_layer_weighted(space, arc, k)
    elif sc.bc == "neumann":
        op = assemble_hypersingular_weighted(space, arc, k)
    else:
        raise ArcbemError(f"unknown boundary condition {sc.bc!r}")
    data = sc.rhs.build(sc.bc, k, n)
    b = assemble_rhs(space, arc, data)
    pre = build_preconditioner(sc.preconditioner, arc, k, sc.bc, space)
    x, report = gmres(op, b, pre, tol=sc.solver.tol, max_iter=sc.solver.max_iter,
                      config={"label": sc.label, "bc": sc.bc, "k": k,
                              "k_times_length": k * arc.length, "n_panels": n,
                              "preconditioner": sc.preconditioner.type},
                      true_history=true_history)
    return ScenarioResult(scenario=sc, report=report, density=x, arc=arc, k=k,
                          n_panels=n, space=space, operator=op)
