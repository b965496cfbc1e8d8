"""Iteration-table reproduction: rerun each desk-scale row and emit the
reference count next to the measured one."""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

import numpy as np

from ..errors import ArcbemError
from ..io import write_rows_csv
from . import reference as ref
from .scenario import (DESK_SCALE_MAX_N, GeometrySpec, PrecondSpec, RhsSpec,
                       Scenario, SolverSpec, mesh_size_for, run_scenario)

HEADER = ["row", "n_panels", "preconditioner", "measured_iterations",
          "reference_iterations", "converged", "note"]


def _fmt_ref(value):
    return "" if value is None else value


def _solve_row(scenario: Scenario):
    res = run_scenario(scenario)
    return res.report


def _run_pair(rows, make_scenario, include_unprec=True):
    """Run (preconditioned, unpreconditioned) variants of each table row."""
    out = []
    for key, ref_prec, ref_unprec in rows:
        sc = make_scenario(key)
        try:
            arc, k, n = sc.resolve()
        except ArcbemError:
            out.append([key, "", "sqrt", "", _fmt_ref(ref_prec), "",
                        "skipped: exceeds desk scale"])
            if include_unprec:
                out.append([key, "", "none", "", _fmt_ref(ref_unprec), "",
                            "skipped: exceeds desk scale"])
            continue
        rep = _solve_row(sc)
        out.append([key, rep.dof_count, sc.preconditioner.type, rep.iterations,
                    _fmt_ref(ref_prec), rep.converged, ""])
        if include_unprec and ref_unprec is not None:
            sc_u = replace(sc, preconditioner=PrecondSpec(type="none"))
            rep_u = _solve_row(sc_u)
            note = "" if rep_u.converged else "did not reach tol in 500 iterations"
            out.append([key, rep_u.dof_count, "none", rep_u.iterations,
                        _fmt_ref(ref_unprec), rep_u.converged, note])
    return out


def _laplace_scenario(bc):
    def make(n):
        return Scenario(geometry=GeometrySpec("flat-segment"), bc=bc, k=0.0,
                        n_panels=n, rhs=RhsSpec("table-rhs"),
                        preconditioner=PrecondSpec("sqrt"),
                        label=f"laplace-{bc}-N{n}")
    return make


def _helm_scenario(kind, bc, angle, theta=None, n_pade=15):
    def make(kl_over_pi):
        return Scenario(geometry=GeometrySpec(kind, theta=theta), bc=bc,
                        k_times_length=kl_over_pi * np.pi,
                        rhs=RhsSpec("plane-wave", angle=angle),
                        preconditioner=PrecondSpec("sqrt", n_pade=n_pade),
                        label=f"{kind}-{bc}-kL{kl_over_pi}pi")
    return make


def run_table(table_id: str, outdir=None, rows=None):
    """Reproduce one iteration table; returns CSV-style rows."""
    if table_id == "laplace-dir":
        data = ref.LAPLACE_DIRICHLET
        out = _run_pair(_filter(data, rows), _laplace_scenario("dirichlet"))
    elif table_id == "laplace-neu":
        data = ref.LAPLACE_NEUMANN
        out = _run_pair(_filter(data, rows), _laplace_scenario("neumann"))
    elif table_id == "helm-dir":
        out = _run_pair(_filter(ref.HELMHOLTZ_DIRICHLET, rows),
                        _helm_scenario("flat-segment", "dirichlet", 0.0))
    elif table_id == "helm-neu":
        out = _run_pair(_filter(ref.HELMHOLTZ_NEUMANN, rows),
                        _helm_scenario("flat-segment", "neumann", np.pi / 4))
    elif table_id == "spiral-dir":
        out = _run_pair(_filter(ref.SPIRAL_DIRICHLET, rows),
                        _helm_scenario("spiral", "dirichlet", 0.0))
    elif table_id == "spiral-neu":
        out = _run_pair(_filter(ref.SPIRAL_NEUMANN, rows),
                        _helm_scenario("spiral", "neumann", 0.0))
    elif table_id == "vshape-dir":
        out = _run_pair(_filter(ref.VSHAPE_DIRICHLET, rows),
                        _helm_scenario("v-shape", "dirichlet", np.pi / 2,
                                       theta=np.pi / 2))
    elif table_id == "vshape-refine":
        out = run_vshape_refine(rows)
    elif table_id in ("calderon-dir", "calderon-neu"):
        out = run_calderon_table(table_id, rows)
    elif table_id == "graded-compare":
        from .compare import graded_study
        out = graded_study()["rows"]
    else:
        raise ArcbemError(f"unknown table id {table_id!r}; "
                          f"choose from {ref.TABLE_IDS}")
    if outdir is not None:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        write_rows_csv(outdir / f"table_{table_id}.csv", HEADER, out)
    return out


def _filter(data, rows):
    if rows is None:
        return data
    keep = set(rows)
    return [r for r in data if r[0] in keep]


def run_vshape_refine(ratios=None):
    """Fixed k|Gamma| = 50, refine the mesh; columns are opening angles."""
    ratios = ratios or ref.VSHAPE_REFINE_RATIOS
    angles = {"flat": None, "3pi/4": 3 * np.pi / 4, "pi/2": np.pi / 2,
              "pi/6": np.pi / 6}
    out = []
    for col, theta in angles.items():
        kind = "flat-segment" if theta is None else "v-shape"
        for ratio, ref_it in zip(ratios, ref.VSHAPE_REFINE[col]):
            kl = 50.0
            n = int(round(ratio * kl))
            sc = Scenario(geometry=GeometrySpec(kind, theta=theta),
                          bc="dirichlet", k_times_length=kl, n_panels=n,
                          rhs=RhsSpec("plane-wave", angle=np.pi / 2),
                          preconditioner=PrecondSpec("sqrt", n_pade=60),
                          label=f"vshape-refine-{col}-r{ratio}")
            rep = _solve_row(sc)
            out.append([f"{col} N/(kL)={ratio}", rep.dof_count, "sqrt",
                        rep.iterations, ref_it, rep.converged, ""])
    return out


def run_calderon_table(table_id: str, rows=None):
    bc = "dirichlet" if table_id.endswith("dir") else "neumann"
    data = ref.CALDERON_DIRICHLET if bc == "dirichlet" else ref.CALDERON_NEUMANN
    out = []
    for kl_over_pi, ref_cal, ref_sqrt in _filter(data, rows):
        kl = kl_over_pi * np.pi
        if mesh_size_for(kl) > DESK_SCALE_MAX_N:
            out.append([kl_over_pi, "", "calderon", "", ref_cal, "",
                        "skipped: exceeds desk scale"])
            out.append([kl_over_pi, "", "sqrt", "", ref_sqrt, "",
                        "skipped: exceeds desk scale"])
            continue
        base = dict(geometry=GeometrySpec("flat-segment"), bc=bc,
                    k_times_length=kl, rhs=RhsSpec("plane-wave", angle=np.pi / 4))
        for kind, ref_it in (("calderon", ref_cal), ("sqrt", ref_sqrt)):
            sc = Scenario(**base, preconditioner=PrecondSpec(kind),
                          label=f"calderon-{bc}-kL{kl_over_pi}pi-{kind}")
            rep = _solve_row(sc)
            out.append([kl_over_pi, rep.dof_count, kind, rep.iterations,
                        ref_it, rep.converged, ""])
    return out
