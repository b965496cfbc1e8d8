"""Preconditioner comparisons: wavenumber robustness of the shifted-Laplace
map, the graded-mesh/non-weighted study, and the Pade-order sweep."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..assembly import (GalerkinSpace, PlaneWaveTrace, assemble_mass,
                        assemble_rhs, assemble_single_layer_standard,
                        assemble_single_layer_weighted, interpolate,
                        standard_mass_and_stiffness)
from ..errors import ArcbemError, BenchAssertionError
from ..geometry import beta_graded_mesh, graded_mesh, make_arc
from ..io import write_rows_csv
from ..krylov import gmres
from ..precond import (build_dirichlet_preconditioner,
                       build_standard_sqrt_preconditioner)
from .scenario import (GeometrySpec, PrecondSpec, RhsSpec, Scenario,
                       run_scenario)


def compare_kinds(scenario: Scenario, kinds, outdir=None) -> dict:
    """Solve one scenario under several preconditioners and tabulate counts."""
    from dataclasses import replace
    rows = []
    for kind in kinds:
        sc = replace(scenario, preconditioner=PrecondSpec(type=kind),
                     label=f"{scenario.label or 'scenario'}-{kind}")
        rep = run_scenario(sc).report
        rows.append([kind, rep.dof_count, rep.iterations, rep.converged])
    if outdir is not None:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        write_rows_csv(outdir / "compare_kinds.csv",
                       ["preconditioner", "n_dof", "iterations", "converged"],
                       rows)
    return {"rows": rows}


def robustness_study(kl_over_pi=(50, 100, 200), kinds=("sqrt", "sqrt-laplace"),
                     outdir=None) -> dict:
    """Iteration counts of P_k vs the k-independent shifted-Laplace map over
    a wavenumber sweep on the flat segment (Dirichlet)."""
    counts = {kind: [] for kind in kinds}
    rows = []
    for kind in kinds:
        for kl in kl_over_pi:
            sc = Scenario(geometry=GeometrySpec("flat-segment"), bc="dirichlet",
                          k_times_length=kl * np.pi,
                          rhs=RhsSpec("plane-wave", angle=0.0),
                          preconditioner=PrecondSpec(kind),
                          label=f"robustness-{kind}-kL{kl}pi")
            rep = run_scenario(sc).report
            counts[kind].append(rep.iterations)
            rows.append([kind, kl, rep.dof_count, rep.iterations, rep.converged])
    result = {"kl_over_pi": list(kl_over_pi), "counts": counts, "rows": rows}
    if outdir is not None:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        write_rows_csv(outdir / "compare_robustness.csv",
                       ["preconditioner", "kl_over_pi", "n_dof", "iterations",
                        "converged"], rows)
    return result


def _energy_norm(s0_ref, vec) -> float:
    return float(np.sqrt(max(np.pi * vec @ s0_ref @ vec, 0.0)))


def graded_study(k: float = 10 * np.pi, n_panels: int = 80,
                 betas=(1.0, 2.0, 3.0, 4.0, 5.0), refine: int = 16,
                 outdir=None) -> dict:
    """Non-weighted P1 solves of the single-layer equation on beta-graded
    meshes (preconditioned by the plain square root) versus the weighted
    method, with density errors in the k = 0 single-layer energy norm
    against a reference solution on a ``refine``-times finer weighted mesh.
    """
    arc = make_arc("flat-segment")
    data = PlaneWaveTrace(k, 0.0)

    # reference weighted solve on the refined mesh
    n_ref = refine * n_panels
    mesh_ref = graded_mesh(arc, n_ref)
    space_ref = GalerkinSpace(mesh_ref, "continuous", "inv-omega")
    s_ref = assemble_single_layer_weighted(space_ref, arc, k)
    b_ref = assemble_rhs(space_ref, arc, data)
    alpha_ref = np.linalg.solve(s_ref, b_ref)
    s0_ref = assemble_single_layer_weighted(space_ref, arc, 0.0)
    t_ref = mesh_ref.breakpoints
    ref_norm = _energy_norm(s0_ref, alpha_ref.real) + _energy_norm(s0_ref, alpha_ref.imag)

    def rel_energy_error(alpha_on_ref):
        e = alpha_on_ref - alpha_ref
        return ((_energy_norm(s0_ref, e.real) + _energy_norm(s0_ref, e.imag))
                / ref_norm)

    rows = []
    # non-weighted solves on graded meshes
    for beta in betas:
        x_mesh = beta_graded_mesh(n_panels, beta)
        s_std, gram_cond = assemble_single_layer_standard(k, x_mesh)
        mass, stiff = standard_mass_and_stiffness(x_mesh)
        note = ""
        if gram_cond > 1e14:
            note = f"near-singular Gram matrix (cond ~ {gram_cond:.1e})"
        pre = build_standard_sqrt_preconditioner(mass, stiff, k)
        b = np.array([_std_rhs_entry(x_mesh, i, k) for i in range(len(x_mesh))])
        lam, rep = gmres(s_std, b, pre)
        # density on the reference parameter mesh: alpha = omega * lambda
        lam_ref = np.interp(t_ref, x_mesh, lam.real) + \
            1j * np.interp(t_ref, x_mesh, lam.imag)
        alpha_equiv = np.sqrt(np.clip(1 - t_ref**2, 0, None)) * lam_ref
        err = rel_energy_error(alpha_equiv)
        rows.append([f"beta={beta:g}", rep.dof_count, rep.iterations, err,
                     rep.converged, note])

    # weighted method at the same size
    mesh = graded_mesh(arc, n_panels)
    space = GalerkinSpace(mesh, "continuous", "inv-omega")
    s_w = assemble_single_layer_weighted(space, arc, k)
    b_w = assemble_rhs(space, arc, data)
    pre_w = build_dirichlet_preconditioner(arc, k, space)
    alpha_h, rep_w = gmres(s_w, b_w, pre_w)
    interp = np.interp(t_ref, mesh.breakpoints, alpha_h.real) + \
        1j * np.interp(t_ref, mesh.breakpoints, alpha_h.imag)
    err_w = rel_energy_error(interp)
    rows.append(["weighted", rep_w.dof_count, rep_w.iterations, err_w,
                 rep_w.converged, ""])

    if outdir is not None:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        write_rows_csv(outdir / "compare_graded.csv",
                       ["method", "n_dof", "iterations", "rel_energy_error",
                        "converged", "note"], rows)
    return {"rows": rows, "k": k, "n_panels": n_panels}


def _std_rhs_entry(x_mesh, i, k):
    """L^2 load of the plane-wave trace against the i-th P1 hat function."""
    from ..quadrature import gl
    xg, wg = gl(12)
    total = 0.0 + 0.0j
    if i > 0:
        lo, hi = x_mesh[i - 1], x_mesh[i]
        pts = 0.5 * (lo + hi) + 0.5 * (hi - lo) * xg
        shape = (pts - lo) / (hi - lo)
        total += 0.5 * (hi - lo) * np.sum(wg * shape * np.exp(1j * k * pts))
    if i < len(x_mesh) - 1:
        lo, hi = x_mesh[i], x_mesh[i + 1]
        pts = 0.5 * (lo + hi) + 0.5 * (hi - lo) * xg
        shape = (hi - pts) / (hi - lo)
        total += 0.5 * (hi - lo) * np.sum(wg * shape * np.exp(1j * k * pts))
    return total


def pade_sensitivity(kl_over_pi: float = 200, np_list=(1, 5, 10, 15, 20, 30, 40, 50),
                     geometry: str = "spiral", assert_stagnation: bool = True,
                     outdir=None) -> dict:
    """Iteration count as a function of the number of Pade terms.

    Asserts the stagnation property: counts at 20 and 50 terms differ by at
    most 2 (raises BenchAssertionError otherwise).
    """
    arc = make_arc(geometry)
    kl = kl_over_pi * np.pi
    k = kl / arc.length
    from .scenario import mesh_size_for
    n = mesh_size_for(kl)
    mesh = graded_mesh(arc, n)
    space = GalerkinSpace(mesh, "continuous", "inv-omega")
    s_mat = assemble_single_layer_weighted(space, arc, k)
    b = assemble_rhs(space, arc, PlaneWaveTrace(k, 0.0))
    counts = {}
    rows = []
    for n_pade in np_list:
        pre = build_dirichlet_preconditioner(arc, k, space, n_terms=n_pade)
        _, rep = gmres(s_mat, b, pre)
        counts[n_pade] = rep.iterations
        rows.append([n_pade, rep.iterations, rep.converged])
    if outdir is not None:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        write_rows_csv(outdir / "pade_sweep.csv",
                       ["n_pade", "iterations", "converged"], rows)
    if assert_stagnation and 20 in counts and 50 in counts:
        if abs(counts[20] - counts[50]) > 2:
            raise BenchAssertionError(
                f"no Pade stagnation: iterations(20) = {counts[20]}, "
                f"iterations(50) = {counts[50]}")
    return {"counts": counts, "rows": rows, "n_panels": n, "k": k}
