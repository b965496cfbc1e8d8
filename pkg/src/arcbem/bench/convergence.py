"""Manufactured-solution convergence studies at k = 0 on the flat segment.

Dirichlet cases solve the weighted single-layer equation with right-hand
sides built by applying the exact spectral diagonalization (eigenvalues
ln(2)/2 and 1/(2n)) to the Chebyshev expansions of the target densities
omega and omega^3.  The Neumann case uses the degree-2 second-kind
polynomial, whose image has the closed-form eigenvalue 3/2.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..assembly import (GalerkinSpace, ParamFunction, assemble_hypersingular_weighted,
                        assemble_mass, assemble_rhs, assemble_single_layer_weighted)
from ..errors import ArcbemError
from ..geometry import graded_mesh, make_arc
from ..io import write_rows_csv
from ..quadrature import panel_gauss
from ..specfun import ChebyshevSeries, chebyshev_U

DEFAULT_MESHES = (32, 64, 128, 256, 512)


def sigma_eigenvalue(n: int) -> float:
    """Weighted single-layer eigenvalue on T_n: ln(2)/2 for n = 0, else 1/(2n)."""
    return np.log(2.0) / 2.0 if n == 0 else 0.5 / n


def omega_chebyshev_coefficients(m_terms: int) -> np.ndarray:
    """First-kind expansion of sqrt(1 - x^2): c_0 = 2/pi,
    c_2m = -4 / (pi (4 m^2 - 1))."""
    c = np.zeros(m_terms)
    c[0] = 2.0 / np.pi
    m = np.arange(1, (m_terms - 1) // 2 + 1)
    c[2 * m] = -4.0 / (np.pi * (4.0 * m * m - 1.0))
    return c


def omega_cubed_chebyshev_coefficients(m_terms: int) -> np.ndarray:
    """First-kind expansion of (1 - x^2)^{3/2} via moments of (1-x^2) T_n."""
    def integral_T(n):
        # int_{-1}^{1} T_n dx, even n
        return 2.0 / (1.0 - n * n)

    c = np.zeros(m_terms)
    for n in range(0, m_terms, 2):
        mom = 0.5 * integral_T(n) - 0.25 * (integral_T(n + 2) + integral_T(abs(n - 2)))
        inner = mom / np.pi
        c[n] = inner / (1.0 if n == 0 else 0.5)
    return c


def dirichlet_manufactured_rhs(case: str, m_terms: int = 20000) -> ChebyshevSeries:
    """Chebyshev series of the data whose exact solution is omega or omega^3."""
    if case == "dir-omega":
        c = omega_chebyshev_coefficients(m_terms)
    elif case == "dir-omega3":
        c = omega_cubed_chebyshev_coefficients(m_terms)
    else:
        raise ArcbemError(f"unknown Dirichlet case {case!r}")
    sig = np.array([sigma_eigenvalue(n) for n in range(len(c))])
    return ChebyshevSeries("first", sig * c)


def _eval_solution(space, coeffs, tau):
    panels = np.arange(space.mesh.n_panels)
    phi = space.local_values(panels, tau, "value")
    dofs = space.panel_dofs
    return phi[0] * coeffs[dofs[:, 0]][:, None] + phi[1] * coeffs[dofs[:, 1]][:, None]


def weighted_l2_error(space, coeffs, exact, weight: str, order: int = 16) -> float:
    """|| u_h - exact || in the requested weighted L^2 norm."""
    tau, w = panel_gauss(space.mesh.tau_breakpoints, order)
    t = -np.cos(tau)
    diff = _eval_solution(space, coeffs, tau) - exact(t)
    half_len = 0.5 * space.mesh.arc.length
    if weight == "inv-omega":
        wq = w / np.pi
    elif weight == "omega":
        wq = w * np.sin(tau) ** 2 * half_len**2
    else:
        raise ArcbemError(f"unknown weight {weight!r}")
    return float(np.sqrt(np.sum(np.abs(diff) ** 2 * wq)))


def u1_error(space, coeffs, exact, exact_dt, order: int = 16) -> float:
    """Graph norm of the weighted first-order energy:
    (1/pi) (||e||_omega-normalized^2 + int (d/d tau [sin(tau) e])^2 d tau)."""
    mesh = space.mesh
    tau, w = panel_gauss(mesh.tau_breakpoints, order)
    t = -np.cos(tau)
    panels = np.arange(mesh.n_panels)
    dofs = space.panel_dofs
    e = _eval_solution(space, coeffs, tau) - exact(t)
    # d/dt of the P1 part is constant per panel
    tb = mesh.breakpoints
    slope = ((coeffs[dofs[:, 1]] - coeffs[dofs[:, 0]]) /
             (tb[1:] - tb[:-1]))[:, None]
    de_dt = slope - exact_dt(t)
    sn, cs = np.sin(tau), np.cos(tau)
    dwe = cs * e + sn**2 * de_dt      # d/d tau (sin(tau) e)
    l2w2 = np.sum(np.abs(e) ** 2 * w * sn**2) * (2.0 / np.pi)
    deriv2 = np.sum(np.abs(dwe) ** 2 * w) * (2.0 / np.pi)
    return float(np.sqrt(0.5 * (l2w2 + deriv2)))


def least_squares_slope(n_values, errors, n_fit: int = 4) -> float:
    """Order of convergence in h = 1/N from the finest ``n_fit`` meshes."""
    n_values = np.asarray(n_values, dtype=float)[-n_fit:]
    errors = np.asarray(errors, dtype=float)[-n_fit:]
    coef = np.polyfit(np.log(n_values), np.log(errors), 1)
    return float(-coef[0])


def convergence_study(case: str, meshes=DEFAULT_MESHES, outdir=None) -> dict:
    """One convergence case: returns mesh sizes, errors and fitted slopes."""
    arc = make_arc("flat-segment")
    rows = []
    if case in ("dir-omega", "dir-omega3"):
        series = dirichlet_manufactured_rhs(case)
        exact = (lambda t: np.sqrt(1 - t**2)) if case == "dir-omega" \
            else (lambda t: (1 - t**2) ** 1.5)
        errors = []
        for n in meshes:
            mesh = graded_mesh(arc, n)
            space = GalerkinSpace(mesh, "continuous", "inv-omega")
            mat = assemble_single_layer_weighted(space, arc, 0.0)
            b = assemble_rhs(space, arc, ParamFunction(series))
            alpha = np.linalg.solve(mat, b)
            err = weighted_l2_error(space, alpha, exact, "inv-omega")
            errors.append(err)
            rows.append([n, np.pi / n, err, ""])
        slopes = {"l2_inv_omega": least_squares_slope(meshes, errors)}
        result = {"case": case, "meshes": list(meshes),
                  "errors": {"l2_inv_omega": errors}, "slopes": slopes}
    elif case == "neu-U2":
        exact = lambda t: (2.0 / 3.0) * chebyshev_U(2, t)
        exact_dt = lambda t: (16.0 / 3.0) * t
        errs_l2, errs_u1 = [], []
        for n in meshes:
            mesh = graded_mesh(arc, n)
            space = GalerkinSpace(mesh, "continuous", "omega")
            mat = assemble_hypersingular_weighted(space, arc, 0.0)
            b = assemble_rhs(space, arc, ParamFunction(lambda t: chebyshev_U(2, t)))
            beta = np.linalg.solve(mat, b)
            errs_l2.append(weighted_l2_error(space, beta, exact, "omega"))
            errs_u1.append(u1_error(space, beta, exact, exact_dt))
            rows.append([n, np.pi / n, errs_l2[-1], errs_u1[-1]])
        slopes = {"l2_omega": least_squares_slope(meshes, errs_l2),
                  "u1": least_squares_slope(meshes, errs_u1)}
        result = {"case": case, "meshes": list(meshes),
                  "errors": {"l2_omega": errs_l2, "u1": errs_u1},
                  "slopes": slopes}
    else:
        raise ArcbemError(f"unknown convergence case {case!r}")

    if outdir is not None:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        write_rows_csv(outdir / f"convergence_{case}.csv",
                       ["n_panels", "h", "error_primary", "error_secondary"], rows)
    return result
