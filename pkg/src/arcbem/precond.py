"""Square-root operator preconditioners.

At k = 0 the square roots are exact generalized-eigendecomposition maps of
the sparse pencil (X, M).  At k > 0 they are rotated-Pade rational sums: the
matrix formula

    ik ( C0 [I] + sum_j A_j [X] (B_j [X] - (k + i eps)^2 [I])^(-1) )

applied through precomputed sparse factorizations.  The rotation angle is
applied with a negative sign internally so the realized map matches the
principal branch of sqrt([X] - k^2 [I]) on both sides of the grazing point
lambda = k^2 (positive real values on evanescent modes, +i sqrt on
propagating ones).

Application cost is tracked in nominal flops so benchmark comparisons can
assert operation counts instead of wall time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh, lu_factor, lu_solve
from scipy.sparse.linalg import splu

from .assembly import (GalerkinSpace, assemble_hypersingular_weighted,
                       assemble_mass, assemble_single_layer_weighted,
                       assemble_sqrt_argument)
from .errors import PreconditionerError
from .geometry import Arc
from .specfun import PadeCoefficients, pade_coefficients

LN2 = np.log(2.0)


def default_damping(k: float) -> float:
    """Grazing-mode damping eps = 0.05 k^(1/3)."""
    return 0.05 * k ** (1.0 / 3.0)


# ---------------------------------------------------------------------------
# Linear maps with cost accounting
# ---------------------------------------------------------------------------
class LinearMap:
    """Composable linear map with a nominal per-application flop estimate."""

    def __init__(self, apply, n: int, flops_per_apply: float, label: str = ""):
        self._apply = apply
        self.n = n
        self.flops_per_apply = float(flops_per_apply)
        self.label = label
        self.applications = 0

    def __call__(self, v):
        self.applications += 1
        return self._apply(v)

    def dense(self) -> np.ndarray:
        """Materialize by application to the identity (column by column)."""
        eye = np.eye(self.n)
        cols = [self(eye[:, i]) for i in range(self.n)]
        return np.column_stack(cols)


def identity_map(n: int) -> LinearMap:
    return LinearMap(lambda v: v, n, 0.0, "identity")


def _lu_sparse(mat) -> "splu":
    return splu(sp.csc_matrix(mat))


_TRIDIAG_SOLVE_FLOPS = 9.0   # per unknown, LU forward/backward on 3 bands
_SPARSE_MATVEC_FLOPS = 6.0   # per unknown, tridiagonal matvec


# ---------------------------------------------------------------------------
# Spectral square roots (exact at k = 0)
# ---------------------------------------------------------------------------
def generalized_eigendecomposition(X, M):
    """Pencil X V = M V diag(w) with V^T M V = I (dense, symmetric)."""
    Xd = X.toarray() if sp.issparse(X) else np.asarray(X)
    Md = M.toarray() if sp.issparse(M) else np.asarray(M)
    w, V = eigh(Xd, Md, driver="gvd")
    return w, V


def build_spectral_sqrt(X, M, exponent: float, negative_tol: float = 1e-10) -> LinearMap:
    """Galerkin matrix map [f(X)]_p = M V f(W) V^T M with f(w) = w^exponent.

    The pencil must be positive semidefinite; a zero eigenvalue maps to 0
    for either exponent (the Dirichlet zero mode is corrected by a rank-one
    term at the preconditioner level).
    """
    if exponent not in (0.5, -0.5):
        raise PreconditionerError("exponent must be +1/2 or -1/2")
    w, V = generalized_eigendecomposition(X, M)
    scale = max(abs(w[0]), abs(w[-1]))
    if w[0] < -negative_tol * scale:
        raise PreconditionerError(
            f"negative eigenvalue {w[0]:.3e} in a k = 0 square-root argument")
    w = np.clip(w, 0.0, None)
    f = np.zeros_like(w)
    pos = w > negative_tol * scale
    f[pos] = w[pos] ** exponent
    Md = M.toarray() if sp.issparse(M) else np.asarray(M)
    MV = Md @ V
    n = len(w)

    def apply(v):
        return MV @ (f * (MV.T @ v))

    return LinearMap(apply, n, 3 * 2 * n * n, f"spectral^{exponent:+.1f}")


def spectral_pencil_sqrt_map(X, M, k: float) -> LinearMap:
    """Exact-eigendecomposition map of sqrt([X] - k^2 [I]), outgoing branch.

    Eigenvalues above k^2 map to the positive square root; below k^2 to
    -i sqrt(k^2 - w), the branch consistent with outgoing (radiating)
    propagating modes.  Returns the Galerkin-matrix map M V f(W) V^T M.
    """
    w, V = generalized_eigendecomposition(X, M)
    f = np.conj(np.sqrt((w - k**2).astype(complex)))
    Md = M.toarray() if sp.issparse(M) else np.asarray(M)
    MV = Md @ V
    n = len(w)

    def apply(v):
        return MV @ (f * (MV.T @ v))

    return LinearMap(apply, n, 3 * 8 * n * n, "spectral-pencil-sqrt")


# ---------------------------------------------------------------------------
# Rotated-Pade square roots (k > 0)
# ---------------------------------------------------------------------------
@dataclass
class SqrtPreconditioner:
    """Applicable square-root map and its ingredients."""

    side: str
    mode: str
    k: float
    map: LinearMap
    coefficients: PadeCoefficients | None = None
    eps: float = 0.0
    mass: sp.csr_matrix | None = None
    meta: dict = field(default_factory=dict)


def build_pade_sqrt(X, M, k: float, n_terms: int = 15, theta: float = np.pi / 3,
                    eps: float | None = None) -> SqrtPreconditioner:
    """Rational square-root map for sqrt([X] - k^2 [I]), X positive definite
    up to grazing modes.

    Applies  v -> -ik (C0 [I] v + sum_j A_j [X] (B_j [X] - (k+i eps)^2 [I])^{-1} v)
    with one sparse factorization per term.  The realized branch is the
    outgoing one: +sqrt on eigenvalues above k^2 and -i sqrt below, which
    keeps the preconditioned layer-potential spectrum in a single cluster
    (the overall sign is irrelevant to GMRES).
    """
    if k <= 0:
        raise PreconditionerError("build_pade_sqrt requires k > 0")
    if not 0.0 < theta < np.pi:
        raise PreconditionerError("theta must lie in (0, pi)")
    if eps is None:
        eps = default_damping(k)
    coeffs = pade_coefficients(n_terms, theta)
    Xc = sp.csc_matrix(X, dtype=complex)
    Mc = sp.csc_matrix(M, dtype=complex)
    shift = (k + 1j * eps) ** 2
    lus = []
    for bj in coeffs.B:
        try:
            lus.append(splu(bj * Xc - shift * Mc))
        except RuntimeError as exc:
            raise PreconditionerError(
                f"singular shifted system B_j X - (k+i eps)^2 I: {exc}") from exc
    Xr = Xc.tocsr()
    Mr = Mc.tocsr()
    n = X.shape[0]

    def apply(v):
        # Galerkin-consistent composition: the resolvents act on [I] v, so
        # the map diagonalizes on pencil eigenvectors (1x1 case reduces to
        # -ik * pade_sqrt_scalar(-x/k^2) * m).
        mv = Mr @ v.astype(complex)
        acc = coeffs.C0 * mv
        for aj, lu in zip(coeffs.A, lus):
            acc += aj * (Xr @ lu.solve(mv))
        return -1j * k * acc

    flops = n * (n_terms * (_TRIDIAG_SOLVE_FLOPS + _SPARSE_MATVEC_FLOPS)
                 + _SPARSE_MATVEC_FLOPS) * 4.0   # complex arithmetic
    lmap = LinearMap(apply, n, flops, f"pade-sqrt[{n_terms}]")
    return SqrtPreconditioner(side="generic", mode="pade", k=k, map=lmap,
                              coefficients=coeffs, eps=eps, mass=Mr,
                              meta={"n_terms": n_terms, "theta": theta})


# ---------------------------------------------------------------------------
# Problem-level preconditioners
# ---------------------------------------------------------------------------
def _mass_solver(M):
    lu = _lu_sparse(M)
    return lu


def build_dirichlet_preconditioner(arc: Arc, k: float, space: GalerkinSpace,
                                   n_terms: int = 15, theta: float = np.pi / 3,
                                   eps: float | None = None) -> LinearMap:
    """Mass-sandwiched square root: v -> [I]^-1 [P_k] [I]^-1 v.

    k = 0 uses the exact spectral inverse (2 sqrt plus the rank-one
    zero-mode term with coefficient 2/ln 2); k > 0 the rotated-Pade map.
    """
    if space.weight != "inv-omega":
        raise PreconditionerError("Dirichlet preconditioner expects inv-omega space")
    X = assemble_sqrt_argument(space, arc, k, "dirichlet")
    M = assemble_mass(space)
    mass_lu = _mass_solver(M)
    n = space.dof_count
    if k == 0:
        core = build_spectral_sqrt(X, M, 0.5)
        mrow = np.asarray(M.sum(axis=1)).ravel()     # [I] 1: the pi_0 moments

        def apply(v):
            u = mass_lu.solve(v)
            y = 2.0 * core(u) + (2.0 / LN2) * mrow * (mrow @ u)
            return mass_lu.solve(y)

        return LinearMap(apply, n, core.flops_per_apply + 30 * n, "dirichlet-spectral")

    pre = build_pade_sqrt(X, M, k, n_terms=n_terms, theta=theta, eps=eps)
    mass_lu_c = _lu_sparse(M.astype(complex))

    def apply(v):
        u = mass_lu_c.solve(v.astype(complex))
        return mass_lu_c.solve(pre.map(u))

    flops = pre.map.flops_per_apply + 2 * _TRIDIAG_SOLVE_FLOPS * n * 4
    return LinearMap(apply, n, flops, "dirichlet-pade")


def build_neumann_preconditioner(arc: Arc, k: float, space: GalerkinSpace,
                                 n_terms: int = 15, theta: float = np.pi / 3,
                                 eps: float | None = None) -> LinearMap:
    """Inverse-of-local-operator form: v -> [C]^-1 v with
    [C] the Galerkin square root of (-(d w)^2 - k^2 w^2).

    The square-root matrix is materialized densely (by application to
    identity columns) and factorized once, making iteration counts
    deterministic.
    """
    if space.weight != "omega":
        raise PreconditionerError("Neumann preconditioner expects an omega space")
    if space.continuity != "continuous":
        raise PreconditionerError("Neumann preconditioner needs a continuous space")
    X = assemble_sqrt_argument(space, arc, k, "neumann")
    M = assemble_mass(space)
    n = space.dof_count
    if k == 0:
        w, V = generalized_eigendecomposition(X, M)
        if w[0] <= 0:
            raise PreconditionerError("Neumann square-root argument must be SPD at k=0")
        # [C]^-1 = V W^-1/2 V^T for [C] = M V W^1/2 V^T M
        f = w ** -0.5

        def apply(v):
            return V @ (f * (V.T @ v))

        return LinearMap(apply, n, 3 * 2 * n * n, "neumann-spectral")

    pre = build_pade_sqrt(X, M, k, n_terms=n_terms, theta=theta, eps=eps)
    dense_c = pre.map.dense()
    try:
        lu, piv = lu_factor(dense_c)
    except np.linalg.LinAlgError as exc:
        raise PreconditionerError(f"dense factorization of [C] failed: {exc}") from exc
    cond = np.linalg.cond(dense_c)
    if not np.isfinite(cond) or cond > 1e14:
        raise PreconditionerError(f"[C] is numerically singular (cond ~ {cond:.2e})")

    def apply(v):
        return lu_solve((lu, piv), v.astype(complex))

    return LinearMap(apply, n, 8 * n * n, "neumann-pade")


def build_laplace_shifted_preconditioner(arc: Arc, space: GalerkinSpace) -> LinearMap:
    """Comparison map based on sqrt(-(w d)^2 + I): exact spectral build,
    independent of the wavenumber."""
    X = assemble_sqrt_argument(space, arc, 0.0, "dirichlet")
    M = assemble_mass(space)
    core = build_spectral_sqrt(X + M, M, 0.5)
    mass_lu = _lu_sparse(M.astype(complex))
    n = space.dof_count

    def apply(v):
        return mass_lu.solve(core(mass_lu.solve(v.astype(complex))))

    return LinearMap(apply, n, core.flops_per_apply + 20 * n, "laplace-shifted")


def build_standard_sqrt_preconditioner(mass, stiffness, k: float) -> LinearMap:
    """sqrt(-d^2 - k^2) on an unweighted P1 space, by eigendecomposition.

    Graded meshes make the Pade route ill-conditioned, so the square root is
    evaluated directly on the pencil (principal branch).
    """
    core = spectral_pencil_sqrt_map(stiffness, mass, k)
    mass_lu = _lu_sparse(sp.csc_matrix(mass, dtype=complex))
    n = mass.shape[0]

    def apply(v):
        return mass_lu.solve(core(mass_lu.solve(v.astype(complex))))

    return LinearMap(apply, n, core.flops_per_apply + 20 * n, "standard-sqrt")


def build_calderon_preconditioner(arc: Arc, k: float, bc: str,
                                  space_inv: GalerkinSpace,
                                  space_om: GalerkinSpace,
                                  single_layer: np.ndarray | None = None,
                                  hypersingular: np.ndarray | None = None) -> LinearMap:
    """Generalized Calderon maps: the opposite weighted layer potential,
    sandwiched between the two weighted mass inverses.

    bc 'dirichlet' builds [I]_w^-1 [N_kw] [I]_1/w^-1 (preconditions S);
    bc 'neumann' builds [I]_1/w^-1 [S_kw] [I]_w^-1 (preconditions N).
    """
    m_inv = _lu_sparse(assemble_mass(space_inv).astype(complex))
    m_om = _lu_sparse(assemble_mass(space_om).astype(complex))
    n = space_inv.dof_count
    if bc == "dirichlet":
        dense = (assemble_hypersingular_weighted(space_om, arc, k)
                 if hypersingular is None else hypersingular)

        def apply(v):
            return m_om.solve(dense @ m_inv.solve(v.astype(dense.dtype)))
    elif bc == "neumann":
        dense = (assemble_single_layer_weighted(space_inv, arc, k)
                 if single_layer is None else single_layer)

        def apply(v):
            return m_inv.solve(dense @ m_om.solve(v.astype(dense.dtype)))
    else:
        raise PreconditionerError("bc must be 'dirichlet' or 'neumann'")
    mult = 8.0 if np.iscomplexobj(dense) else 2.0
    return LinearMap(apply, n, mult * n * n + 2 * _TRIDIAG_SOLVE_FLOPS * n,
                     f"calderon-{bc}")
