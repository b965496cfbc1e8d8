"""Open-arc geometry: parametrized curves, constant-speed normalization,
the edge-distance weight, and Chebyshev-graded meshes.

All arcs are maps r : [-1, 1] -> R^2.  After normalization the speed
|r'(t)| equals length/2 everywhere (piecewise for curves with one corner),
so the arclength element is ds = (length/2) dt and the edge weight takes
the closed form w(r(t)) = (length/2) sqrt(1 - t^2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from .errors import GeometryError

_TABLE_INTERVALS = 256   # 256 intervals x 8 Gauss points = 2048 per smooth piece
_TABLE_ORDER = 8


# ---------------------------------------------------------------------------
# Raw parametrizations
# ---------------------------------------------------------------------------
class _RawCurve:
    """Raw (not necessarily constant-speed) parametrization on [-1, 1].

    ``pieces`` lists parameter breakpoints of smooth pieces, always starting
    at -1 and ending at 1.
    """

    pieces: tuple

    def point(self, t):
        raise NotImplementedError

    def derivative(self, t):
        raise NotImplementedError

    def speed(self, t):
        d = self.derivative(t)
        return np.sqrt(d[..., 0] ** 2 + d[..., 1] ** 2)


class _FlatSegment(_RawCurve):
    pieces = (-1.0, 1.0)

    def point(self, t):
        t = np.asarray(t, dtype=float)
        return np.stack([t, np.zeros_like(t)], axis=-1)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return np.stack([np.ones_like(t), np.zeros_like(t)], axis=-1)


class _Spiral(_RawCurve):
    """x = exp(0.4 (t-0.2)) cos(2 (t-0.2)), y = exp(0.4 (t-0.2)) sin(2 (t-0.2))."""

    pieces = (-1.0, 1.0)

    def point(self, t):
        t = np.asarray(t, dtype=float)
        u = t - 0.2
        rad = np.exp(0.4 * u)
        return np.stack([rad * np.cos(2 * u), rad * np.sin(2 * u)], axis=-1)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        u = t - 0.2
        rad = np.exp(0.4 * u)
        c, s = np.cos(2 * u), np.sin(2 * u)
        return np.stack([rad * (0.4 * c - 2 * s), rad * (0.4 * s + 2 * c)], axis=-1)


class _VShape(_RawCurve):
    """x = t sin(theta/2), y = |t| cos(theta/2); unit speed, corner at t = 0."""

    def __init__(self, theta: float):
        self.theta = theta
        self.pieces = (-1.0, 0.0, 1.0)

    def point(self, t):
        t = np.asarray(t, dtype=float)
        h = self.theta / 2.0
        return np.stack([t * np.sin(h), np.abs(t) * np.cos(h)], axis=-1)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        h = self.theta / 2.0
        sgn = np.where(t >= 0.0, 1.0, -1.0)
        return np.stack([np.full_like(t, np.sin(h)), sgn * np.cos(h)], axis=-1)


class _SampledCurve(_RawCurve):
    """Cubic-spline interpolant (natural ends) of (t, x, y) samples."""

    def __init__(self, samples: np.ndarray):
        samples = np.asarray(samples, dtype=float)
        if samples.ndim != 2 or samples.shape[1] != 3:
            raise GeometryError("custom samples must have shape (n, 3): columns t, x, y")
        t = samples[:, 0]
        if t[0] != -1.0 or t[-1] != 1.0 or np.any(np.diff(t) <= 0):
            raise GeometryError("custom sample parameters must increase from -1 to 1")
        self._spl = CubicSpline(t, samples[:, 1:], bc_type="natural")
        self._der = self._spl.derivative()
        self.pieces = (-1.0, 1.0)

    def point(self, t):
        return self._spl(np.asarray(t, dtype=float))

    def derivative(self, t):
        return self._der(np.asarray(t, dtype=float))


# ---------------------------------------------------------------------------
# Arc: normalized parametrization
# ---------------------------------------------------------------------------
@dataclass
class Arc:
    """Constant-speed open arc.

    ``point``/``derivative`` act on the normalized parameter in [-1, 1];
    |derivative| == length/2 away from corners.  Immutable after
    construction; safe to share across assembly workers.
    """

    kind: str
    length: float
    corners: tuple = ()
    _raw: _RawCurve = field(repr=False, default=None)
    _identity: bool = field(repr=False, default=False)
    _t_table: np.ndarray = field(repr=False, default=None)
    _s_table: np.ndarray = field(repr=False, default=None)

    # -- mapping ------------------------------------------------------------
    def raw_parameter(self, u):
        """Raw curve parameter t(u) such that arclength(t) = (L/2)(u + 1)."""
        u = np.asarray(u, dtype=float)
        if np.any(u < -1.0 - 1e-12) or np.any(u > 1.0 + 1e-12):
            raise GeometryError("parameter out of [-1, 1]")
        if self._identity:
            return np.clip(u, -1.0, 1.0)
        target = 0.5 * self.length * (np.clip(u, -1.0, 1.0) + 1.0)
        t = np.interp(target, self._s_table, self._t_table)
        # Newton refinement on the cached cumulative-arclength table
        for _ in range(60):
            s, sp = self._arclength_and_speed(t)
            dt = (s - target) / sp
            t = np.clip(t - dt, -1.0, 1.0)
            if np.max(np.abs(dt)) < 1e-14:
                break
        else:
            raise GeometryError("arclength inversion did not converge")
        return t

    def _arclength_and_speed(self, t):
        """Cumulative arclength s(t) by table + local Gauss, and raw speed."""
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.searchsorted(self._t_table, t, side="right") - 1,
                      0, len(self._t_table) - 2)
        t0 = self._t_table[idx]
        xg, wg = leggauss(_TABLE_ORDER)
        half = 0.5 * (t - t0)
        nodes = t0[..., None] + half[..., None] * (xg + 1.0)
        ds = np.sum(self._raw.speed(nodes) * wg, axis=-1) * half
        return self._s_table[idx] + ds, self._raw.speed(t)

    def point(self, u):
        return self._raw.point(self.raw_parameter(u))

    def derivative(self, u):
        """d/du of the normalized map; |derivative| = length/2."""
        t = self.raw_parameter(u)
        d = self._raw.derivative(t)
        sp = np.sqrt(d[..., 0] ** 2 + d[..., 1] ** 2)
        return d * (0.5 * self.length / sp)[..., None]

    def tangent(self, u):
        d = self.derivative(u)
        return d / (0.5 * self.length)

    def is_corner(self, u, tol: float = 1e-12):
        u = np.asarray(u, dtype=float)
        hit = np.zeros(u.shape, dtype=bool)
        for c in self.corners:
            hit |= np.abs(u - c) <= tol
        return hit


def normal_vector(arc: Arc, u):
    """Unit normal, the tangent rotated by +90 degrees.

    Raises at corner parameters, where the normal is undefined.
    """
    if np.any(arc.is_corner(u)):
        raise GeometryError("normal undefined at a corner parameter")
    tan = arc.tangent(u)
    return np.stack([-tan[..., 1], tan[..., 0]], axis=-1)


def weight_omega(arc: Arc, u):
    """Edge weight (length/2) sqrt(1 - u^2); clamps roundoff below zero."""
    u = np.asarray(u, dtype=float)
    return 0.5 * arc.length * np.sqrt(np.clip(1.0 - u * u, 0.0, None))


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------
def _check_self_intersection(raw: _RawCurve, samples: int = 512):
    t = np.linspace(-1.0, 1.0, samples + 1)
    p = raw.point(t)
    a, b = p[:-1], p[1:]
    d = b - a
    i, j = np.triu_indices(samples, k=2)
    # segment pair (i, j): solve a_i + s d_i = a_j + u d_j
    r = a[j] - a[i]
    denom = d[i, 0] * d[j, 1] - d[i, 1] * d[j, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (r[:, 0] * d[j, 1] - r[:, 1] * d[j, 0]) / denom
        u = (r[:, 0] * d[i, 1] - r[:, 1] * d[i, 0]) / denom
    hit = (np.abs(denom) > 1e-14) & (s > 0) & (s < 1) & (u > 0) & (u < 1)
    if np.any(hit):
        raise GeometryError("curve is self-intersecting")


def normalize_parametrization(raw: _RawCurve, kind: str) -> Arc:
    """Wrap a raw curve into a constant-speed :class:`Arc`.

    The length is computed by adaptive quadrature of the raw speed per smooth
    piece; the inverse arclength map is solved on a cached cumulative table
    (bisection seed via interpolation, then Newton).
    """
    pieces = raw.pieces
    length_quad = 0.0
    for lo, hi in zip(pieces[:-1], pieces[1:]):
        val, _ = quad(lambda s: float(raw.speed(np.array(s))), lo, hi, limit=200)
        length_quad += val
    if not np.isfinite(length_quad) or length_quad <= 0:
        raise GeometryError("curve has non-positive length")

    # cumulative table, _TABLE_INTERVALS Gauss panels per smooth piece
    xg, wg = leggauss(_TABLE_ORDER)
    t_nodes = [np.array([-1.0])]
    s_incr = []
    for lo, hi in zip(pieces[:-1], pieces[1:]):
        edges = np.linspace(lo, hi, _TABLE_INTERVALS + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[:-1] + edges[1:])
        nodes = mid[:, None] + half[:, None] * xg[None, :]
        s_incr.append(np.sum(raw.speed(nodes) * wg[None, :], axis=1) * half)
        t_nodes.append(edges[1:])
    t_table = np.concatenate(t_nodes)
    s_table = np.concatenate([[0.0], np.cumsum(np.concatenate(s_incr))])
    # the table metric is the canonical length; the adaptive value checks it
    length = float(s_table[-1])
    if abs(length - length_quad) > 1e-6 * length_quad:
        raise GeometryError("arclength table disagrees with adaptive quadrature; "
                            "speed may be nearly singular")

    speeds = raw.speed(np.linspace(-1, 1, 1025))
    if np.min(speeds) < 1e-12 * np.max(speeds):
        raise GeometryError("raw speed vanishes; parametrization is degenerate")
    identity = bool(np.max(np.abs(speeds - 0.5 * length)) <= 1e-13 * 0.5 * length)

    corners = tuple(c for c in pieces[1:-1])
    if not identity and corners:
        raise GeometryError("non-constant-speed curves with corners are not supported")
    return Arc(kind=kind, length=length, corners=corners, _raw=raw,
               _identity=identity, _t_table=t_table, _s_table=s_table)


def make_arc(kind: str, theta: float | None = None,
             samples: np.ndarray | None = None) -> Arc:
    """Construct a normalized arc.

    Parameters
    ----------
    kind : str
        'flat-segment', 'spiral', 'v-shape' or 'custom'.
    theta : float, optional
        Opening angle of the v-shape, in (0, pi].
    samples : ndarray, optional
        (n, 3) array of (t, x, y) rows for kind 'custom'.
    """
    if kind in ("flat-segment", "flat"):
        raw = _FlatSegment()
    elif kind == "spiral":
        raw = _Spiral()
    elif kind == "v-shape":
        if theta is None or not 0.0 < theta <= np.pi:
            raise GeometryError("v-shape requires theta in (0, pi]")
        # theta = pi degenerates to the flat segment (no corner)
        raw = _FlatSegment() if theta == np.pi else _VShape(theta)
    elif kind == "custom":
        if samples is None:
            raise GeometryError("custom arcs require (t, x, y) samples")
        raw = _SampledCurve(samples)
        _check_self_intersection(raw)
    else:
        raise GeometryError(f"unknown arc kind {kind!r}")
    return normalize_parametrization(raw, "flat-segment" if kind == "flat" else kind)


# ---------------------------------------------------------------------------
# Chebyshev-graded mesh
# ---------------------------------------------------------------------------
@dataclass
class GradedMesh:
    """Mesh with breakpoints t_i = -cos(i pi / N).

    Panels are uniform in the substituted variable tau (t = -cos(tau)), so
    the Chebyshev-weighted measure of every panel equals pi / N exactly.
    """

    arc: Arc
    n_panels: int
    breakpoints: np.ndarray      # parameter values t_i
    tau_breakpoints: np.ndarray  # tau_i = i pi / N
    nodes: np.ndarray            # points r(t_i), shape (N+1, 2)

    @property
    def panel_tau_width(self) -> float:
        return np.pi / self.n_panels

    def weighted_measures(self) -> np.ndarray:
        """h_i = integral over panel i of dt / sqrt(1 - t^2)."""
        return np.diff(np.arccos(-self.breakpoints))


def graded_mesh(arc: Arc, n_panels: int) -> GradedMesh:
    """Graded mesh with equal Chebyshev-weighted panel measures."""
    if n_panels < 2:
        raise GeometryError("need at least 2 panels")
    if arc.corners and n_panels % 2 != 0:
        raise GeometryError("arcs with a corner require an even panel count")
    tau = np.arange(n_panels + 1) * (np.pi / n_panels)
    t = -np.cos(tau)
    t[0], t[-1] = -1.0, 1.0
    return GradedMesh(arc=arc, n_panels=n_panels, breakpoints=t,
                      tau_breakpoints=tau, nodes=arc.point(t))


def beta_graded_mesh(n_panels: int, beta: float) -> np.ndarray:
    """Breakpoints on [-1, 1] graded algebraically toward both endpoints.

    Near an endpoint the i-th panel width behaves like (i h)^beta; beta = 1
    is the uniform mesh.  Used by the non-weighted comparison solver.
    """
    if n_panels % 2 != 0:
        raise GeometryError("beta-graded mesh requires an even panel count")
    if not 1.0 <= beta <= 5.0:
        raise GeometryError("beta must lie in [1, 5]")
    half = n_panels // 2
    frac = (np.arange(half + 1) / half) ** beta
    left = -1.0 + frac
    return np.concatenate([left[:-1], [0.0], -left[-2::-1]])
