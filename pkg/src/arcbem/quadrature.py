"""Quadrature rules: cached Gauss-Legendre, geometrically graded composites
for endpoint log singularities, and reference panel-pair rules used by the
singular corrections of the dense Galerkin assembly.

All pair rules live on the unit square; callers scale to physical panels.
Graded composites split [0, 1] into geometric subintervals toward the
singular endpoint so plain Gauss-Legendre converges on every piece.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss


@lru_cache(maxsize=64)
def gl(order: int):
    """Cached Gauss-Legendre nodes/weights on [-1, 1]."""
    x, w = leggauss(order)
    return x, w


def gl01(order: int):
    """Gauss-Legendre nodes/weights on [0, 1]."""
    x, w = gl(order)
    return 0.5 * (x + 1.0), 0.5 * w


@lru_cache(maxsize=32)
def graded01(levels: int = 8, ratio: float = 0.15, order: int = 8):
    """Composite rule on [0, 1] graded geometrically toward 0.

    Handles integrands with an integrable log singularity at 0: every
    subinterval [r^(j+1), r^j] sees an analytic integrand, and the innermost
    piece [0, r^levels] contributes a negligible share of the integral.
    """
    xg, wg = gl01(order)
    edges = np.concatenate([[0.0], ratio ** np.arange(levels, -1, -1.0)])
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        nodes.append(lo + (hi - lo) * xg)
        weights.append((hi - lo) * wg)
    return np.concatenate(nodes), np.concatenate(weights)


def graded_toward(a: float, b: float, singular_end: float,
                  levels: int = 8, ratio: float = 0.15, order: int = 8):
    """Composite rule on [a, b] graded toward ``singular_end`` (= a or b)."""
    x, w = graded01(levels, ratio, order)
    if singular_end == a:
        return a + (b - a) * x, (b - a) * w
    if singular_end == b:
        return b - (b - a) * x, (b - a) * w
    raise ValueError("singular_end must be an interval endpoint")


@lru_cache(maxsize=8)
def diag_pair_rule(levels: int = 8, ratio: float = 0.15, order: int = 8):
    """Unit-square rule for kernels with a log singularity on the diagonal.

    Integrates  I = int_0^1 int_0^1 f(u, v) K(u - v) du dv  where K has a
    log singularity at 0.  The square is split along the diagonal; each
    triangle is mapped to (s, eta) with {u = s, v = s (1 - eta)} so the
    kernel argument becomes s * eta, and both s and eta are graded toward 0.

    Returns (u, v, w) flat arrays; sum(f(u_i, v_i) K(u_i - v_i) w_i) = I.
    """
    s, ws = graded01(levels, ratio, order)
    e, we = graded01(levels, ratio, order)
    S, E = np.meshgrid(s, e, indexing="ij")
    W = np.outer(ws, we) * S          # Jacobian of v = s (1 - eta)
    u1, v1 = S.ravel(), (S * (1.0 - E)).ravel()
    w1 = W.ravel()
    # mirrored triangle (v > u)
    return (np.concatenate([u1, v1]),
            np.concatenate([v1, u1]),
            np.concatenate([w1, w1]))


@lru_cache(maxsize=8)
def corner_pair_rule(cu: int, cv: int,
                     levels: int = 8, ratio: float = 0.15, order: int = 8):
    """Unit-square tensor rule graded toward the corner (cu, cv), cu/cv in {0,1}.

    For kernels singular only at that corner (shared breakpoint of adjacent
    panels, or the tau + sigma = 0 / 2 pi endpoint pairs).
    """
    x, w = graded01(levels, ratio, order)
    u = x if cu == 0 else 1.0 - x
    v = x if cv == 0 else 1.0 - x
    U, V = np.meshgrid(u, v, indexing="ij")
    W = np.outer(w, w)
    return U.ravel(), V.ravel(), W.ravel()


def panel_gauss(breakpoints: np.ndarray, order: int):
    """Per-panel Gauss nodes/weights for a 1D mesh.

    Returns (nodes, weights) of shape (n_panels, order).
    """
    breakpoints = np.asarray(breakpoints, dtype=float)
    x, w = gl(order)
    lo = breakpoints[:-1, None]
    half = 0.5 * np.diff(breakpoints)[:, None]
    return lo + half * (x[None, :] + 1.0), half * w[None, :]
