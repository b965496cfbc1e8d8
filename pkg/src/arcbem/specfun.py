"""Special functions and spectral building blocks.

Chebyshev polynomials and series, the 2D Helmholtz/Laplace Green kernel with
its log-singular split, rotated Pade coefficients for rational square-root
approximation, and Mathieu characteristic values (used as an independent
spectral oracle in the test suite).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import hankel1, j0, y0

from .errors import ArcbemError

EULER_GAMMA = np.euler_gamma
TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# Chebyshev polynomials
# ---------------------------------------------------------------------------
def chebyshev_T(n: int, x):
    """First-kind Chebyshev polynomial T_n(x) by three-term recurrence.

    Accepts scalar or array ``x`` in [-1, 1].
    """
    x = np.asarray(x, dtype=float)
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return np.ones_like(x)
    if n == 1:
        return x.copy()
    tkm1, tk = np.ones_like(x), x
    for _ in range(n - 1):
        tkm1, tk = tk, 2.0 * x * tk - tkm1
    return tk


def chebyshev_U(n: int, x):
    """Second-kind Chebyshev polynomial U_n(x) by three-term recurrence."""
    x = np.asarray(x, dtype=float)
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return np.ones_like(x)
    if n == 1:
        return 2.0 * x
    ukm1, uk = np.ones_like(x), 2.0 * x
    for _ in range(n - 1):
        ukm1, uk = uk, 2.0 * x * uk - ukm1
    return uk


@dataclass
class ChebyshevSeries:
    """Finite Chebyshev series sum_n c_n T_n(x) or sum_n c_n U_n(x).

    Attributes
    ----------
    kind : str
        'first' for T_n, 'second' for U_n.
    coefficients : np.ndarray
        Complex or real coefficients, index = polynomial degree.
    """

    kind: str
    coefficients: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        if self.kind not in ("first", "second"):
            raise ValueError("kind must be 'first' or 'second'")
        self.coefficients = np.atleast_1d(np.asarray(self.coefficients))

    def __call__(self, x):
        """Evaluate by the Clenshaw recurrence."""
        c = self.coefficients
        x = np.asarray(x, dtype=float)
        if len(c) == 0:
            return np.zeros_like(x, dtype=c.dtype if c.size else float)
        bk1 = np.zeros(np.shape(x), dtype=np.result_type(c.dtype, float))
        bk2 = bk1.copy()
        for ck in c[:0:-1]:
            bk1, bk2 = ck + 2.0 * x * bk1 - bk2, bk1
        if self.kind == "first":
            return c[0] + x * bk1 - bk2
        return c[0] + 2.0 * x * bk1 - bk2

    def eval_direct(self, x):
        """Term-by-term evaluation, kept as a slow cross-check."""
        poly = chebyshev_T if self.kind == "first" else chebyshev_U
        x = np.asarray(x, dtype=float)
        out = np.zeros(np.shape(x), dtype=np.result_type(self.coefficients.dtype, float))
        for n, cn in enumerate(self.coefficients):
            out = out + cn * poly(n, x)
        return out


# ---------------------------------------------------------------------------
# Green kernel of the 2D Helmholtz / Laplace equation
# ---------------------------------------------------------------------------
def green_kernel(k: float, r):
    """Free-space Green kernel: -ln(r)/(2 pi) for k=0, (i/4) H0^(1)(kr) for k>0.

    ``r`` must be positive; use :func:`smooth_remainder` near r = 0.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise ArcbemError("green_kernel is singular at r = 0; use smooth_remainder")
    if k == 0.0:
        return -np.log(r) / TWO_PI
    return 0.25j * hankel1(0, k * r)


def smooth_remainder(k: float, r):
    """Smooth part R_k(r) = G_k(r) + ln(r)/(2 pi) of the Green kernel.

    Finite at r = 0 with limit i/4 - (ln(k/2) + gamma)/(2 pi).  Requires k > 0
    (for k = 0 the remainder is identically zero).
    """
    if k <= 0.0:
        raise ValueError("smooth_remainder requires k > 0")
    r = np.asarray(r, dtype=float)
    out = np.empty(r.shape, dtype=complex)
    limit = 0.25j - (np.log(k / 2.0) + EULER_GAMMA) / TWO_PI
    pos = r > 0.0
    rp = r[pos]
    out[pos] = 0.25j * hankel1(0, k * rp) + np.log(rp) / TWO_PI
    out[~pos] = limit
    return out if out.ndim else out[()]


def hankel1_n(n: int, z):
    """Hankel function of the first kind (thin wrapper, complex output)."""
    return hankel1(n, z)


# ---------------------------------------------------------------------------
# Rotated Pade approximation of sqrt(1 + z)
# ---------------------------------------------------------------------------
@dataclass
class PadeCoefficients:
    """Coefficients of the (rotated) rational approximation of sqrt(1+z).

    Base set (c0, a_j, b_j) approximates sqrt(1+z) near the positive axis;
    the rotated set (C0, A_j, B_j) realizes exp(i theta/2) *
    sqrt(exp(-i theta) (1+z)), i.e. the branch cut turned by ``theta``.
    """

    n_terms: int
    theta: float
    c0: float
    a: np.ndarray
    b: np.ndarray
    C0: complex
    A: np.ndarray
    B: np.ndarray


def pade_coefficients(n_terms: int, theta: float) -> PadeCoefficients:
    """Build base and rotated Pade coefficient sets.

    Parameters
    ----------
    n_terms : int
        Number of rational terms (>= 1).
    theta : float
        Branch rotation angle in (-pi, pi).  theta = 0 reduces the rotated
        set to the base set.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    if not -np.pi < theta < np.pi:
        raise ValueError("theta must lie in (-pi, pi)")
    j = np.arange(1, n_terms + 1)
    s = j * np.pi / (2 * n_terms + 1)
    a = 2.0 / (2 * n_terms + 1) * np.sin(s) ** 2
    b = np.cos(s) ** 2
    c0 = 1.0
    w = np.exp(-1j * theta) - 1.0
    d = 1.0 + b * w
    C0 = np.exp(0.5j * theta) * (c0 + np.sum(a * w / d))
    A = np.exp(-0.5j * theta) * a / d**2
    B = np.exp(-1j * theta) * b / d
    return PadeCoefficients(n_terms=n_terms, theta=theta, c0=c0, a=a, b=b,
                            C0=C0, A=A, B=B)


def pade_sqrt_scalar(z, coeffs: PadeCoefficients):
    """Evaluate C0 + sum_j A_j z / (1 + B_j z) for scalar or array z."""
    z = np.asarray(z, dtype=complex)
    den = 1.0 + coeffs.B.reshape((-1,) + (1,) * z.ndim) * z
    if np.any(den == 0.0):
        raise ArcbemError("pade_sqrt_scalar hit a pole 1 + B_j z = 0")
    val = coeffs.C0 + np.sum(coeffs.A.reshape((-1,) + (1,) * z.ndim) * z / den, axis=0)
    return val if val.ndim else val[()]


def rotated_sqrt(z, theta: float):
    """Reference branch exp(i theta/2) sqrt(exp(-i theta) (1 + z))."""
    z = np.asarray(z, dtype=complex)
    return np.exp(0.5j * theta) * np.sqrt(np.exp(-1j * theta) * (1.0 + z))


def pade_error_bound(r, theta: float, n_terms: int):
    """Uniform error bound 2 sqrt(r) |gamma(r, theta)|^(2 Np + 1), r = |z+1|."""
    r = np.asarray(r, dtype=float)
    sq = np.sqrt(r) * np.exp(0.5j * theta)
    gamma = np.abs((sq - 1.0) / (sq + 1.0))
    return 2.0 * np.sqrt(r) * gamma ** (2 * n_terms + 1)


# ---------------------------------------------------------------------------
# Mathieu characteristic values
# ---------------------------------------------------------------------------
def _mathieu_eigenvalues(parity: str, n: int, q: float, size: int) -> float:
    """Characteristic value from the symmetrized Fourier tridiagonal matrix."""
    if parity == "even":
        if n % 2 == 0:
            # ce_{2m}: basis cos(0), cos(2t), cos(4t), ...
            diag = (2.0 * np.arange(size)) ** 2
            off = np.full(size - 1, q)
            off[0] = np.sqrt(2.0) * q
            idx = n // 2
        else:
            # ce_{2m+1}: basis cos(t), cos(3t), ...
            diag = (2.0 * np.arange(size) + 1.0) ** 2
            diag[0] += q
            off = np.full(size - 1, q)
            idx = (n - 1) // 2
    else:
        if n % 2 == 0:
            # se_{2m+2}: basis sin(2t), sin(4t), ...
            diag = (2.0 * np.arange(1, size + 1)) ** 2
            off = np.full(size - 1, q)
            idx = n // 2 - 1
        else:
            # se_{2m+1}: basis sin(t), sin(3t), ...
            diag = (2.0 * np.arange(size) + 1.0) ** 2
            diag[0] -= q
            off = np.full(size - 1, q)
            idx = (n - 1) // 2
    vals = eigh_tridiagonal(diag, off, eigvals_only=True,
                            select="i", select_range=(idx, idx))
    return float(vals[0])


def mathieu_char(parity: str, n: int, q: float, rtol: float = 1e-10) -> float:
    """Characteristic value a_n(q) (parity 'even', ce_n) or b_n(q) ('odd', se_n).

    Solves y'' + (a - 2 q cos(2 t)) y = 0 for 2 pi periodic solutions by the
    eigenvalues of the truncated Fourier tridiagonal matrix; the truncation is
    doubled once and the two values must agree to ``rtol`` (absolute for
    values below 1).

    Parameters
    ----------
    parity : str
        'even' for the cosine-elliptic family, 'odd' for sine-elliptic.
    n : int
        Order; n >= 0 for 'even', n >= 1 for 'odd'.
    q : float
        Mathieu parameter, q >= 0.
    """
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    if q < 0:
        raise ValueError("q must be >= 0")
    if parity == "even" and n < 0:
        raise ValueError("even parity requires n >= 0")
    if parity == "odd" and n < 1:
        raise ValueError("odd parity requires n >= 1")
    size = 64 + n
    v1 = _mathieu_eigenvalues(parity, n, q, size)
    v2 = _mathieu_eigenvalues(parity, n, q, 2 * size)
    if abs(v1 - v2) > rtol * max(1.0, abs(v2)):
        raise ArcbemError(
            f"mathieu_char({parity}, {n}, {q}) did not converge: "
            f"{v1!r} vs {v2!r} at truncations {size}/{2 * size}"
        )
    return v2
