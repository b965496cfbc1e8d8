"""Weighted Galerkin assembly on Chebyshev-graded meshes.

Everything is integrated in the substituted variable tau (t = -cos tau),
where the graded mesh has uniform panels and the Chebyshev weight
dt / sqrt(1 - t^2) = d tau is absorbed exactly.  Conventions:

* inv-omega forms carry the 1/pi normalization of the first-kind Chebyshev
  inner product; omega forms are plain integrals against the weight.
* the log-singular kernel is split as
      G_k = S1(tau - sigma) + S2(tau + sigma) + W(tau, sigma),
  S1/S2 = -(1/2 pi) ln|2 sin(. / 2)|, W smooth; S1 is integrated by graded
  panel-pair rules on touching panels, S2 on the two endpoint self-panels,
  and the bulk tensor-Gauss grid handles everything else.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import AssemblyError, QuadratureError
from .geometry import Arc, GradedMesh, weight_omega
from .quadrature import corner_pair_rule, diag_pair_rule, gl, panel_gauss
from .specfun import green_kernel, smooth_remainder

LOG2 = np.log(2.0)
TWO_PI = 2.0 * np.pi

_SPARSE_ORDER = 10          # per-panel order for mass/stiffness forms
_BULK_ORDER_LAPLACE = 6     # per-panel order for dense kernels, k = 0
_BULK_ORDER_HELMHOLTZ = 8   # and k > 0
_BLOCK_ELEMS = 12_000_000   # target elements per kernel block (~100 MB)


# ---------------------------------------------------------------------------
# Galerkin spaces
# ---------------------------------------------------------------------------
@dataclass
class GalerkinSpace:
    """Piecewise-affine trial/test space on a graded mesh.

    continuity 'continuous' gives N+1 hat functions, 'discontinuous' gives
    2N per-panel linear functions.  ``weight`` records the natural inner
    product of the space ('inv-omega', 'omega' or 'unit').
    """

    mesh: GradedMesh
    continuity: str = "continuous"
    weight: str = "inv-omega"

    def __post_init__(self):
        if self.continuity not in ("continuous", "discontinuous"):
            raise AssemblyError(f"unknown continuity {self.continuity!r}")
        if self.weight not in ("inv-omega", "omega", "unit"):
            raise AssemblyError(f"unknown weight {self.weight!r}")

    @property
    def dof_count(self) -> int:
        n = self.mesh.n_panels
        return n + 1 if self.continuity == "continuous" else 2 * n

    @cached_property
    def panel_dofs(self) -> np.ndarray:
        """Global dof indices of the two local functions, shape (N, 2)."""
        n = self.mesh.n_panels
        if self.continuity == "continuous":
            return np.column_stack([np.arange(n), np.arange(1, n + 1)])
        return np.arange(2 * n).reshape(n, 2)

    def local_values(self, panels: np.ndarray, tau: np.ndarray, kind: str) -> np.ndarray:
        """Local basis data at points ``tau`` inside given panels.

        kind 'value': phi;  'dt': d phi / dt;  'w': sin(tau)^2 phi (the
        weighted function omega phi together with the dt = sin(tau) d tau
        Jacobian); 'v': d/d tau (sin(tau) phi), the parameter derivative of
        omega phi with the same Jacobian absorbed.  ``tau`` may carry
        trailing node axes beyond the shape of ``panels``; returns shape
        (2,) + tau.shape.
        """
        panels = np.asarray(panels)
        tau = np.asarray(tau, dtype=float)
        tb = self.mesh.breakpoints
        pad = (1,) * (tau.ndim - panels.ndim)
        tl = tb[panels].reshape(panels.shape + pad)
        tr = tb[panels + 1].reshape(panels.shape + pad)
        width = tr - tl
        t = -np.cos(tau)
        s0 = (tr - t) / width
        s1 = (t - tl) / width
        if kind == "value":
            return np.stack([s0, s1])
        if kind == "dt":
            d0 = np.broadcast_to(-1.0 / width, tau.shape)
            return np.stack([d0, -d0])
        if kind == "w":
            sn2 = np.sin(tau) ** 2
            return np.stack([sn2 * s0, sn2 * s1])
        if kind == "v":
            sn, cs = np.sin(tau), np.cos(tau)
            d = sn * sn / width
            return np.stack([cs * s0 - d, cs * s1 + d])
        raise AssemblyError(f"unknown basis kind {kind!r}")


# ---------------------------------------------------------------------------
# Node grids and basis-node matrices
# ---------------------------------------------------------------------------
@dataclass
class NodeGrid:
    mesh: GradedMesh
    order: int
    tau: np.ndarray       # flat, (N * order,)
    w: np.ndarray         # d tau weights, flat
    panel: np.ndarray     # owning panel, flat
    t: np.ndarray
    points: np.ndarray    # (M, 2)
    sin_tau: np.ndarray

    @property
    def size(self) -> int:
        return self.tau.size


def node_grid(mesh: GradedMesh, order: int) -> NodeGrid:
    tau2, w2 = panel_gauss(mesh.tau_breakpoints, order)
    tau, w = tau2.ravel(), w2.ravel()
    panel = np.repeat(np.arange(mesh.n_panels), order)
    t = -np.cos(tau)
    return NodeGrid(mesh=mesh, order=order, tau=tau, w=w, panel=panel, t=t,
                    points=mesh.arc.point(t), sin_tau=np.sin(tau))


def basis_node_matrix(space: GalerkinSpace, grid: NodeGrid, kind: str) -> sp.csr_matrix:
    """Sparse (nodes x dofs) matrix of basis data at the grid nodes."""
    vals = space.local_values(grid.panel, grid.tau, kind)   # (2, M)
    rows = np.tile(np.arange(grid.size), 2)
    cols = space.panel_dofs[grid.panel].T.ravel()
    mat = sp.coo_matrix((vals.ravel(), (rows, cols)),
                        shape=(grid.size, space.dof_count))
    return mat.tocsr()


def interpolate(space: GalerkinSpace, f) -> np.ndarray:
    """Nodal interpolant of f(t) onto the space (breakpoint values)."""
    tb = space.mesh.breakpoints
    if space.continuity == "continuous":
        return np.asarray(f(tb))
    vals = np.asarray(f(tb))
    return np.column_stack([vals[:-1], vals[1:]]).ravel()


# ---------------------------------------------------------------------------
# Sparse forms: mass and square-root arguments
# ---------------------------------------------------------------------------
def _accumulate_panels(space: GalerkinSpace, contrib: np.ndarray) -> sp.csr_matrix:
    """Assemble (N, 2, 2) per-panel blocks into the global sparse matrix."""
    dofs = space.panel_dofs
    rows = np.repeat(dofs, 2, axis=1).ravel()          # i index
    cols = np.tile(dofs, (1, 2)).ravel()               # j index
    mat = sp.coo_matrix((contrib.ravel(), (rows, cols)),
                        shape=(space.dof_count, space.dof_count))
    return mat.tocsr()


def assemble_mass(space: GalerkinSpace, order: int = _SPARSE_ORDER) -> sp.csr_matrix:
    """Weighted mass matrix [I]_p in the space's inner product."""
    mesh = space.mesh
    tau, w = panel_gauss(mesh.tau_breakpoints, order)
    panels = np.arange(mesh.n_panels)
    phi = space.local_values(panels, tau, "value")     # (2, N, m)
    half_len = 0.5 * mesh.arc.length
    if space.weight == "inv-omega":
        wq = w / np.pi
    elif space.weight == "omega":
        wq = w * np.sin(tau) ** 2 * half_len**2
    else:
        wq = w * np.sin(tau) * half_len
    contrib = np.einsum("anm,bnm,nm->nab", phi, phi, wq)
    return _accumulate_panels(space, contrib)


def assemble_sqrt_argument(space: GalerkinSpace, arc: Arc, k: float,
                           side: str, order: int = _SPARSE_ORDER) -> sp.csr_matrix:
    """Sparse matrix of X = -(w d)^2 + k^2 (I - w^2) (Dirichlet side) or
    X = -(d w)^2 + k^2 (I - w^2) (Neumann side), in the weighted weak form.

    Derivatives are arclength derivatives; in the parameter they reduce to
    plain tau-integrals, so every panel (including the endpoint ones) is a
    smooth integral.  Requires a continuous space.
    """
    if side not in ("dirichlet", "neumann"):
        raise AssemblyError("side must be 'dirichlet' or 'neumann'")
    if space.continuity != "continuous":
        raise AssemblyError("square-root argument requires a conforming "
                            "(continuous) space")
    if k < 0:
        raise AssemblyError("k must be >= 0")
    expected = "inv-omega" if side == "dirichlet" else "omega"
    if space.weight != expected:
        raise AssemblyError(f"{side} operator expects a {expected} space")
    mesh = space.mesh
    tau, w = panel_gauss(mesh.tau_breakpoints, order)
    panels = np.arange(mesh.n_panels)
    half_len = 0.5 * arc.length
    omega2 = (half_len * np.sin(tau)) ** 2

    if side == "dirichlet":
        dphi = space.local_values(panels, tau, "dt")
        stiff = np.einsum("anm,bnm,nm->nab", dphi, dphi,
                          w * np.sin(tau) ** 2) / np.pi
        if k > 0:
            phi = space.local_values(panels, tau, "value")
            stiff += k**2 / np.pi * np.einsum("anm,bnm,nm->nab", phi, phi,
                                              w * (1.0 - omega2))
    else:
        v = space.local_values(panels, tau, "v")
        stiff = half_len**2 * np.einsum("anm,bnm,nm->nab", v, v, w)
        if k > 0:
            phi = space.local_values(panels, tau, "value")
            stiff += k**2 * half_len**2 * np.einsum(
                "anm,bnm,nm->nab", phi, phi, w * (1.0 - omega2) * np.sin(tau) ** 2)
    return _accumulate_panels(space, stiff)


# ---------------------------------------------------------------------------
# Dense weighted layer potentials
# ---------------------------------------------------------------------------
def _s_log(x):
    """-(1/2 pi) ln|2 sin(x / 2)| with a clipped argument."""
    return -np.log(np.maximum(np.abs(2.0 * np.sin(0.5 * x)), 1e-300)) / TWO_PI


def _fast_green(k: float, r: np.ndarray) -> np.ndarray:
    """(i/4) H0^(1)(k r) via the real Bessel routines (faster than hankel1)."""
    from scipy.special import j0 as _j0, y0 as _y0
    kr = k * r
    return 0.25j * _j0(kr) - 0.25 * _y0(kr)


def _touching_patch(arc: Arc, k: float, grid: NodeGrid, p: int) -> np.ndarray:
    """Smooth kernel part on the panel band (p, p-1..p+1).

    Returns W (+ S2 off the endpoint self-pair), i.e. the full kernel minus
    the terms that the graded pair rules integrate.
    """
    mesh = grid.mesh
    m = grid.order
    n_panels = mesh.n_panels
    r0, r1 = p * m, (p + 1) * m
    c0 = max(0, p - 1) * m
    c1 = min(n_panels, p + 2) * m
    tr = grid.tau[r0:r1, None]
    tc = grid.tau[None, c0:c1]
    dist = np.hypot(grid.points[r0:r1, 0][:, None] - grid.points[None, c0:c1, 0],
                    grid.points[r0:r1, 1][:, None] - grid.points[None, c0:c1, 1])
    tdiff = 2.0 * np.abs(np.sin(0.5 * (tr + tc)) * np.sin(0.5 * (tr - tc)))
    ratio = np.where(tdiff > 1e-14, dist / np.maximum(tdiff, 1e-300),
                     0.5 * arc.length)
    patch = -(np.log(ratio) - LOG2) / TWO_PI
    if k > 0:
        patch = patch + smooth_remainder(k, dist)
    s2 = _s_log(tr + tc)
    if p == 0:
        s2[:, (p - c0 // m) * m:(p - c0 // m + 1) * m] = 0.0
    if p == n_panels - 1:
        off = (p - c0 // m) * m
        s2[:, off:off + m] = 0.0
    return patch + s2


def _dense_kernel_products(arc: Arc, space: GalerkinSpace, k: float,
                           kinds: tuple, order: int) -> dict:
    """Blocked node-grid contractions B_kind^T K_w B_kind plus singular
    corrections, for each requested basis kind.  Returns raw double
    integrals (no operator prefactors).

    Away from touching panels the split terms recombine exactly to the plain
    kernel G_k(dist), so the bulk path evaluates only that; the touching
    band is overwritten with the smooth remainder W (+ S2), and the graded
    pair rules add the log terms there.
    """
    mesh = space.mesh
    n_panels = mesh.n_panels
    delta = mesh.panel_tau_width
    grid = node_grid(mesh, order)
    mats = {kind: basis_node_matrix(space, grid, kind) for kind in kinds}
    dtype = complex if k > 0 else float
    ndof = space.dof_count
    out = {kind: np.zeros((ndof, ndof), dtype=dtype) for kind in kinds}

    m_nodes = grid.size
    m = grid.order
    block_panels = max(1, int(_BLOCK_ELEMS // (m_nodes * m)))
    for p_lo in range(0, n_panels, block_panels):
        p_hi = min(p_lo + block_panels, n_panels)
        lo, hi = p_lo * m, p_hi * m
        dist = np.hypot(grid.points[lo:hi, 0][:, None] - grid.points[None, :, 0],
                        grid.points[lo:hi, 1][:, None] - grid.points[None, :, 1])
        np.maximum(dist, 1e-300, out=dist)
        if k > 0:
            kern = _fast_green(k, dist)
        else:
            kern = np.log(dist)
            kern *= -1.0 / TWO_PI
        del dist
        for p in range(p_lo, p_hi):
            c0 = max(0, p - 1) * m
            c1 = min(n_panels, p + 2) * m
            kern[(p - p_lo) * m:(p - p_lo + 1) * m, c0:c1] = \
                _touching_patch(arc, k, grid, p)
        kern *= grid.w[lo:hi, None]
        kern *= grid.w[None, :]
        for kind in kinds:
            prod = kern @ mats[kind]                     # (b, ndof)
            out[kind] += mats[kind][lo:hi].T @ prod
        del kern

    for kind in kinds:
        _add_singular_corrections(out[kind], space, kind, delta, n_panels)
    return out


def _add_singular_corrections(out: np.ndarray, space: GalerkinSpace, kind: str,
                              delta: float, n_panels: int,
                              chunk: int = 512) -> None:
    """Graded-rule integrals of the masked S1/S2 terms on touching panels."""
    dofs = space.panel_dofs

    def scatter(p_rows, p_cols, vals):
        ii = dofs[p_rows][:, :, None]
        jj = dofs[p_cols][:, None, :]
        np.add.at(out, (np.broadcast_to(ii, vals.shape).ravel(),
                        np.broadcast_to(jj, vals.shape).ravel()), vals.ravel())

    # self pairs: S1(tau - sigma) over [0, delta]^2, diagonal log
    u, v, w = diag_pair_rule()
    s1w = _s_log(delta * (u - v)) * (delta**2 * w)
    for lo in range(0, n_panels, chunk):
        p = np.arange(lo, min(lo + chunk, n_panels))
        ta = p[:, None] * delta + delta * u[None, :]
        tb = p[:, None] * delta + delta * v[None, :]
        fa = space.local_values(p, ta, kind)
        gb = space.local_values(p, tb, kind)
        scatter(p, p, np.einsum("n,apn,bpn->pab", s1w, fa, gb))

    # adjacent pairs (p, p+1): S1 singular at the shared breakpoint
    u, v, w = corner_pair_rule(1, 0)
    s1w = _s_log(delta * (u - 1.0 - v)) * (delta**2 * w)
    for lo in range(0, n_panels - 1, chunk):
        p = np.arange(lo, min(lo + chunk, n_panels - 1))
        ta = p[:, None] * delta + delta * u[None, :]
        tb = (p + 1)[:, None] * delta + delta * v[None, :]
        fa = space.local_values(p, ta, kind)
        gb = space.local_values(p + 1, tb, kind)
        vals = np.einsum("n,apn,bpn->pab", s1w, fa, gb)
        scatter(p, p + 1, vals)
        scatter(p + 1, p, np.transpose(vals, (0, 2, 1)))

    # endpoint self pairs: S2(tau + sigma) singular at tau + sigma = 0, 2 pi
    for p, cu in ((0, 0), (n_panels - 1, 1)):
        u, v, w = corner_pair_rule(cu, cu)
        ta = p * delta + delta * u
        tb = p * delta + delta * v
        s2w = _s_log(ta + tb) * (delta**2 * w)
        pa = np.array([p])
        fa = space.local_values(pa, ta[None, :], kind)
        gb = space.local_values(pa, tb[None, :], kind)
        scatter(pa, pa, np.einsum("n,apn,bpn->pab", s2w, fa, gb))


def _validate_far_pairs(arc: Arc, space: GalerkinSpace, k: float,
                        order: int, rtol: float = 1e-8) -> None:
    """Self-check: refine the tensor rule on sampled distant panel pairs."""
    mesh = space.mesh
    rng = np.random.default_rng(2024)
    n = mesh.n_panels
    pairs = set()
    while len(pairs) < min(10, n * n // 4):
        p, q = rng.integers(0, n, size=2)
        if abs(int(p) - int(q)) >= 2:
            pairs.add((int(p), int(q)))

    def pair_value(p, q, m):
        tp, wp = panel_gauss(mesh.tau_breakpoints[p:p + 2], m)
        tq, wq = panel_gauss(mesh.tau_breakpoints[q:q + 2], m)
        xp = arc.point(-np.cos(tp.ravel()))
        xq = arc.point(-np.cos(tq.ravel()))
        d = np.hypot(xp[:, None, 0] - xq[None, :, 0],
                     xp[:, None, 1] - xq[None, :, 1])
        kern = green_kernel(k, d) if k > 0 else -np.log(d) / TWO_PI
        fa = space.local_values(np.array([p]), tp, "value")[:, 0, :]
        gb = space.local_values(np.array([q]), tq, "value")[:, 0, :]
        ww = np.outer(wp.ravel(), wq.ravel())
        return np.einsum("an,bm,nm,nm->ab", fa, gb, kern, ww)

    for p, q in pairs:
        coarse = pair_value(p, q, order)
        fine = pair_value(p, q, order + 6)
        scale = np.max(np.abs(fine)) + 1e-30
        if np.max(np.abs(coarse - fine)) / scale > rtol:
            raise QuadratureError(
                f"panel pair ({p}, {q}) quadrature differs from refined "
                f"estimate by more than {rtol:g}; increase the order")


def assemble_single_layer_weighted(space: GalerkinSpace, arc: Arc, k: float,
                                   order: int | None = None,
                                   validate: bool = False) -> np.ndarray:
    """Dense matrix of the weighted single-layer form.

    Entries are (1/pi) double integrals of G_k(|r(t) - r(s)|) against basis
    products in the Chebyshev measure on both sides.
    """
    if space.weight != "inv-omega":
        raise AssemblyError("single layer expects an inv-omega space")
    if order is None:
        order = _BULK_ORDER_HELMHOLTZ if k > 0 else _BULK_ORDER_LAPLACE
    if validate:
        _validate_far_pairs(arc, space, k, order)
    prods = _dense_kernel_products(arc, space, k, ("value",), order)
    return prods["value"] / np.pi


def assemble_hypersingular_weighted(space: GalerkinSpace, arc: Arc, k: float,
                                    order: int | None = None,
                                    validate: bool = False) -> np.ndarray:
    """Dense matrix of the weighted hypersingular form.

    Regularized form: derivative factors d/d tau (sin(tau) phi) appear in
    place of the arclength derivatives of (omega phi); the k^2 term carries
    the extra (length/2)^2 weight product.
    """
    if space.weight != "omega":
        raise AssemblyError("hypersingular operator expects an omega space")
    if space.continuity != "continuous":
        raise AssemblyError("hypersingular operator requires a continuous space")
    if order is None:
        order = _BULK_ORDER_HELMHOLTZ if k > 0 else _BULK_ORDER_LAPLACE
    if validate:
        _validate_far_pairs(arc, space, k, order)
    half_len = 0.5 * arc.length
    if k > 0:
        prods = _dense_kernel_products(arc, space, k, ("v", "w"), order)
        return half_len**2 * (prods["v"] - k**2 * half_len**2 * prods["w"])
    prods = _dense_kernel_products(arc, space, k, ("v",), order)
    return half_len**2 * prods["v"]


# ---------------------------------------------------------------------------
# Standard (non-weighted) single layer on a graded x-mesh, flat segment
# ---------------------------------------------------------------------------
def assemble_single_layer_standard(k: float, breakpoints: np.ndarray,
                                   order: int = 8,
                                   cond_warn: float = 1e14) -> tuple:
    """Plain P1 Galerkin matrix of S_k on the flat segment.

    ``breakpoints`` is any increasing mesh of [-1, 1] (e.g. beta-graded).
    Returns (matrix, gram_condition_estimate); the caller decides what to do
    when the Gram matrix is nearly singular.
    """
    x = np.asarray(breakpoints, dtype=float)
    n = len(x) - 1
    ndof = n + 1
    dtype = complex if k > 0 else float
    out = np.zeros((ndof, ndof), dtype=dtype)
    xg, wg = gl(order)

    def shapes(p, pts):
        w = x[p + 1] - x[p]
        return np.stack([(x[p + 1] - pts) / w, (pts - x[p]) / w])

    nodes = x[:-1, None] + 0.5 * np.diff(x)[:, None] * (xg[None, :] + 1.0)
    weights = 0.5 * np.diff(x)[:, None] * wg[None, :]

    du, dv, dw = diag_pair_rule()
    cu, cv, cw = corner_pair_rule(1, 0)
    for p in range(n):
        wp = x[p + 1] - x[p]
        for q in range(n):
            wq = x[q + 1] - x[q]
            if abs(p - q) >= 2:
                xa, xb = nodes[p], nodes[q]
                d = np.abs(xa[:, None] - xb[None, :])
                kern = green_kernel(k, d) if k > 0 else -np.log(d) / TWO_PI
                ww = np.outer(weights[p], weights[q])
                fa, gb = shapes(p, xa), shapes(q, xb)
                out[np.ix_((p, p + 1), (q, q + 1))] += np.einsum(
                    "an,bm,nm,nm->ab", fa, gb, kern, ww)
                continue
            if p == q:
                xa = x[p] + wp * du
                xb = x[p] + wp * dv
                ww = wp * wp * dw
            elif q == p + 1:
                xa = x[p] + wp * cu
                xb = x[q] + wq * cv
                ww = wp * wq * cw
            else:   # q == p - 1: mirrored corner (singular at xa -> 0, xb -> 1)
                xa = x[p] + wp * (1.0 - cu)
                xb = x[q] + wq * (1.0 - cv)
                ww = wp * wq * cw
            d = np.maximum(np.abs(xa - xb), 1e-300)
            kern = green_kernel(k, d) if k > 0 else -np.log(d) / TWO_PI
            fa, gb = shapes(p, xa), shapes(q, xb)
            out[np.ix_((p, p + 1), (q, q + 1))] += np.einsum(
                "an,bn,n,n->ab", fa, gb, kern, ww)

    # P1 Gram matrix condition estimate (graded meshes degrade it)
    widths = np.diff(x)
    main = np.zeros(ndof)
    main[:-1] += widths / 3.0
    main[1:] += widths / 3.0
    gram_cond = float(np.max(main) / np.min(main)) * 4.0
    return out, gram_cond


def standard_mass_and_stiffness(breakpoints: np.ndarray) -> tuple:
    """P1 mass and Laplace stiffness on an interval mesh (unit weight)."""
    x = np.asarray(breakpoints, dtype=float)
    n = len(x) - 1
    w = np.diff(x)
    contrib_m = np.einsum("n,ab->nab", w, np.array([[2.0, 1.0], [1.0, 2.0]]) / 6.0)
    contrib_k = np.einsum("n,ab->nab", 1.0 / w, np.array([[1.0, -1.0], [-1.0, 1.0]]))
    dofs = np.column_stack([np.arange(n), np.arange(1, n + 1)])
    rows = np.repeat(dofs, 2, axis=1).ravel()
    cols = np.tile(dofs, (1, 2)).ravel()
    mass = sp.coo_matrix((contrib_m.ravel(), (rows, cols)), shape=(n + 1, n + 1)).tocsr()
    stiff = sp.coo_matrix((contrib_k.ravel(), (rows, cols)), shape=(n + 1, n + 1)).tocsr()
    return mass, stiff


# ---------------------------------------------------------------------------
# Right-hand sides
# ---------------------------------------------------------------------------
class PlaneWaveTrace:
    """u(x) = exp(i k d . x) restricted to the arc; d from the incidence angle."""

    def __init__(self, k: float, angle: float = 0.0):
        self.k = k
        self.direction = np.array([np.cos(angle), np.sin(angle)])

    def values(self, arc: Arc, t: np.ndarray) -> np.ndarray:
        pts = arc.point(t)
        return np.exp(1j * self.k * (pts @ self.direction))


class PlaneWaveNormalDerivative:
    """u(x) = d/dn exp(i k d . x) on the arc."""

    def __init__(self, k: float, angle: float = 0.0):
        self.k = k
        self.direction = np.array([np.cos(angle), np.sin(angle)])

    def values(self, arc: Arc, t: np.ndarray) -> np.ndarray:
        pts = arc.point(t)
        tan = arc.tangent(t)
        normal = np.stack([-tan[..., 1], tan[..., 0]], axis=-1)
        phase = np.exp(1j * self.k * (pts @ self.direction))
        return 1j * self.k * (normal @ self.direction) * phase


class ParamFunction:
    """Closed-form boundary data given as a function of the parameter t."""

    def __init__(self, f):
        self.f = f

    def values(self, arc: Arc, t: np.ndarray) -> np.ndarray:
        return np.asarray(self.f(t))


class PointFunction:
    """Boundary data given as a function of the plane coordinates."""

    def __init__(self, f):
        self.f = f

    def values(self, arc: Arc, t: np.ndarray) -> np.ndarray:
        pts = arc.point(t)
        return np.asarray(self.f(pts[..., 0], pts[..., 1]))


def assemble_rhs(space: GalerkinSpace, arc: Arc, data, order: int = 12) -> np.ndarray:
    """Weighted load vector with the same conventions as the mass matrix."""
    mesh = space.mesh
    tau, w = panel_gauss(mesh.tau_breakpoints, order)
    panels = np.arange(mesh.n_panels)
    t = -np.cos(tau)
    vals = data.values(arc, t)
    phi = space.local_values(panels, tau, "value")
    half_len = 0.5 * arc.length
    if space.weight == "inv-omega":
        wq = w / np.pi
    elif space.weight == "omega":
        wq = w * np.sin(tau) ** 2 * half_len**2
    else:
        wq = w * np.sin(tau) * half_len
    contrib = np.einsum("anm,nm,nm->an", phi, vals.astype(complex)
                        if np.iscomplexobj(vals) else vals, wq)
    rhs = np.zeros(space.dof_count, dtype=contrib.dtype)
    np.add.at(rhs, space.panel_dofs.T, contrib)
    return rhs
