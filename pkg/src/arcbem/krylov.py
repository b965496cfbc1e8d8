"""GMRES without restart, with left preconditioning and full residual capture.

The iteration minimizes ||M (A x - b)|| over the growing Krylov space of
M A; the recorded history is the preconditioned relative residual, which is
non-increasing by construction.  After convergence the plain (true) relative
residual is evaluated once as a guard against a misleading preconditioner.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

HAPPY_BREAKDOWN = 1e-14
REORTH_FACTOR = 1e-3


@dataclass
class SolveReport:
    """Outcome of one GMRES run."""

    iterations: int
    relative_residual_history: np.ndarray
    converged: bool
    dof_count: int
    wall_time: float
    final_true_residual: float = np.nan
    breakdown: bool = False
    true_residual_history: np.ndarray | None = None
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "iterations": self.iterations,
            "converged": bool(self.converged),
            "dof_count": self.dof_count,
            "wall_time_s": self.wall_time,
            "final_true_residual": float(self.final_true_residual),
            "breakdown": bool(self.breakdown),
            "relative_residual_history": [float(r) for r in
                                          self.relative_residual_history],
        }
        d.update(self.config)
        return d


def as_operator(op):
    """Normalize a matrix / sparse matrix / callable to a callable."""
    if op is None:
        return lambda v: v
    if callable(op) and not hasattr(op, "dot"):
        return op
    if sp.issparse(op):
        return lambda v, _m=op.tocsr(): _m @ v
    mat = np.asarray(op)
    return lambda v, _m=mat: _m @ v


def gmres(apply_A, b, apply_M=None, tol: float = 1e-8, max_iter: int = 500,
          config: dict | None = None, true_history: bool = False):
    """Left-preconditioned GMRES with modified Gram-Schmidt Arnoldi.

    Parameters
    ----------
    apply_A, apply_M : matrix-like or callable
        System operator and (optional) preconditioner application.
    b : ndarray
        Right-hand side.
    tol : float
        Relative tolerance on the preconditioned residual.
    max_iter : int
        Iteration cap; no restarts.
    true_history : bool
        Also reconstruct the plain residual per iteration (extra matvecs).

    Returns
    -------
    (x, SolveReport)
    """
    t_start = time.perf_counter()
    A = as_operator(apply_A)
    M = as_operator(apply_M)
    b = np.asarray(b)
    n = b.shape[0]
    dtype = np.result_type(b.dtype, np.float64)

    mb = np.asarray(M(b), dtype=dtype)
    beta = np.linalg.norm(mb)
    report_cfg = dict(config or {})
    if beta == 0.0:
        x = np.zeros(n, dtype=dtype)
        rep = SolveReport(iterations=0, relative_residual_history=np.zeros(0),
                          converged=True, dof_count=n,
                          wall_time=time.perf_counter() - t_start,
                          final_true_residual=0.0, config=report_cfg)
        return x, rep

    V = [mb / beta]
    H = np.zeros((max_iter + 1, max_iter), dtype=dtype)
    cs = np.zeros(max_iter, dtype=dtype)
    sn = np.zeros(max_iter, dtype=dtype)
    g = np.zeros(max_iter + 1, dtype=dtype)
    g[0] = beta
    history = []
    converged = False
    breakdown = False
    j = 0

    for j in range(max_iter):
        w = np.asarray(M(A(V[j])), dtype=dtype)
        norm_before = np.linalg.norm(w)
        for i in range(j + 1):
            hij = np.vdot(V[i], w)
            H[i, j] = hij
            w -= hij * V[i]
        norm_after = np.linalg.norm(w)
        if norm_after < REORTH_FACTOR * norm_before:
            # one re-orthogonalization pass against loss of orthogonality
            for i in range(j + 1):
                corr = np.vdot(V[i], w)
                H[i, j] += corr
                w -= corr * V[i]
            norm_after = np.linalg.norm(w)
        H[j + 1, j] = norm_after

        # apply accumulated Givens rotations to the new column
        for i in range(j):
            tmp = cs[i] * H[i, j] + sn[i] * H[i + 1, j]
            H[i + 1, j] = -np.conj(sn[i]) * H[i, j] + cs[i] * H[i + 1, j]
            H[i, j] = tmp
        a, bb = H[j, j], H[j + 1, j]
        denom = np.hypot(abs(a), abs(bb))
        if denom == 0.0:
            cs[j], sn[j] = 1.0, 0.0
        elif a == 0.0:
            cs[j], sn[j] = 0.0, 1.0
        else:
            cs[j] = abs(a) / denom
            sn[j] = (a / abs(a)) * np.conj(bb) / denom
        H[j, j] = cs[j] * a + sn[j] * bb
        H[j + 1, j] = 0.0
        g[j + 1] = -np.conj(sn[j]) * g[j]
        g[j] = cs[j] * g[j]

        res = abs(g[j + 1]) / beta
        history.append(res)
        if norm_after <= HAPPY_BREAKDOWN * max(1.0, norm_before):
            breakdown = res > tol
            converged = res <= tol
            j += 1
            break
        V.append(w / norm_after)
        if res <= tol:
            converged = True
            j += 1
            break
    else:
        j = max_iter

    m = j
    x = np.zeros(n, dtype=dtype)
    if m > 0:
        y = np.linalg.solve(H[:m, :m], g[:m])
        x = np.column_stack(V[:m]) @ y

    true_res_history = None
    if true_history and m > 0:
        true_res_history = np.empty(m)
        bnorm = np.linalg.norm(b)
        Vm = np.column_stack(V[:m])
        for i in range(1, m + 1):
            yi = np.linalg.solve(H[:i, :i], g[:i])
            xi = Vm[:, :i] @ yi
            true_res_history[i - 1] = np.linalg.norm(A(xi) - b) / bnorm

    final_true = float(np.linalg.norm(A(x) - b) / np.linalg.norm(b))
    rep = SolveReport(iterations=m,
                      relative_residual_history=np.asarray(history),
                      converged=converged, dof_count=n,
                      wall_time=time.perf_counter() - t_start,
                      final_true_residual=final_true,
                      breakdown=breakdown,
                      true_residual_history=true_res_history,
                      config=report_cfg)
    return x, rep
