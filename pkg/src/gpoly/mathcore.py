"""Numeric substrate: small dense linear algebra, Gaussian special functions,
adaptive 1-D quadrature, and derivative-free maximization over boxes.

Everything here is a pure function of its inputs. Linear solves and
determinants go through LU with partial pivoting (LAPACK); a pivot smaller
than ``PIVOT_RTOL`` times the largest row norm is treated as singular.
Maximization never assumes unimodality: a dense grid scan is always followed
by local refinement, and the reported value is the best point actually
evaluated.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, linalg, optimize, special

PIVOT_RTOL = 1e-12


class SingularMatrixError(ValueError):
    """A pivot fell below PIVOT_RTOL times the largest row norm."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature hit its subdivision cap before converging."""

    def __init__(self, message: str, value: float, abs_error_estimate: float,
                 evaluations: int):
        super().__init__(message)
        self.value = value
        self.abs_error_estimate = abs_error_estimate
        self.evaluations = evaluations


def _as_square(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def _lu_with_pivot_check(a: np.ndarray):
    """LU factorization plus the pivot magnitude relative to max row norm."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", linalg.LinAlgWarning)
        lu, piv = linalg.lu_factor(a, check_finite=False)
    diag = np.abs(np.diag(lu))
    row_scale = np.max(np.linalg.norm(a, axis=1))
    return lu, piv, diag, row_scale


def solve_linear(a, b) -> np.ndarray:
    """Solve a x = b by LU with partial pivoting.

    Raises SingularMatrixError when a pivot magnitude falls below
    PIVOT_RTOL times the largest row norm of ``a``.
    """
    a = _as_square(a)
    b = np.asarray(b, dtype=float)
    if b.ndim != 1 or b.shape[0] != a.shape[0]:
        raise ValueError(f"rhs of shape {b.shape} does not match matrix "
                         f"order {a.shape[0]}")
    lu, piv, diag, row_scale = _lu_with_pivot_check(a)
    if row_scale == 0.0 or np.min(diag) < PIVOT_RTOL * row_scale:
        raise SingularMatrixError("matrix is singular at pivot tolerance")
    return linalg.lu_solve((lu, piv), b, check_finite=False)


def determinant(a) -> float:
    """LU-based determinant; returns 0.0 when singular at pivot tolerance."""
    a = _as_square(a)
    lu, piv, diag, row_scale = _lu_with_pivot_check(a)
    if row_scale == 0.0 or np.min(diag) < PIVOT_RTOL * row_scale:
        return 0.0
    sign = 1.0 if np.count_nonzero(piv != np.arange(a.shape[0])) % 2 == 0 else -1.0
    return sign * float(np.prod(np.diag(lu)))


def simplex_volume(points) -> float:
    """(m-1)-dimensional volume of the simplex spanned by m points.

    Accepts m points in R^n (one point per row) with 2 <= m <= n+1. When the
    edge matrix is square this is |det| / (m-1)!; otherwise the Gram
    determinant of the edges supplies the embedded volume.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError("points must be a 2-D array, one point per row")
    m, n = pts.shape
    if not 2 <= m <= n + 1:
        raise ValueError(f"{m} points cannot span a simplex in R^{n}")
    edges = pts[1:] - pts[0]
    if m == n + 1:
        vol = abs(determinant(edges))
    else:
        gram = edges @ edges.T
        vol = math.sqrt(max(determinant(gram), 0.0))
    return vol / math.factorial(m - 1)


def std_normal_cdf(y):
    """Phi(y), evaluated through the complementary error function.

    Stable in both tails; needed because downstream integrands raise
    (1 - Phi) to powers of order d.
    """
    return special.ndtr(y)


def std_normal_pdf(y):
    """phi(y) = exp(-y^2/2) / sqrt(2 pi)."""
    y = np.asarray(y, dtype=float)
    out = np.exp(-0.5 * y * y) / math.sqrt(2.0 * math.pi)
    return float(out) if out.ndim == 0 else out


def std_normal_log_cdf(y):
    """log Phi(y) without underflow in the left tail."""
    return special.log_ndtr(y)


def log_gamma(x) -> float:
    """ln Gamma(x) for x > 0."""
    if np.any(np.asarray(x) <= 0):
        raise ValueError("log_gamma requires x > 0")
    return special.gammaln(x)


def log_binomial(n: int, k: int) -> float:
    """ln C(n, k) via log-gamma."""
    if not 0 <= k <= n:
        raise ValueError(f"binomial ({n}, {k}) out of range")
    return float(special.gammaln(n + 1) - special.gammaln(k + 1)
                 - special.gammaln(n - k + 1))


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int


def integrate_1d(f: Callable[[float], float], a: float, b: float,
                 rel_tol: float = 1e-10) -> QuadratureResult:
    """Adaptive Gauss-Kronrod quadrature of f over [a, b].

    Raises QuadratureError (carrying the best value and error estimate) if
    the subdivision cap is reached before the tolerance is met.
    """
    if rel_tol < 1e-13:
        raise ValueError("rel_tol below 1e-13 is not resolvable in float64")
    if not (np.isfinite(a) and np.isfinite(b) and a < b):
        raise ValueError("need finite a < b")
    out = integrate.quad(f, a, b, epsabs=1e-300, epsrel=rel_tol,
                         limit=200, full_output=1)
    value, abs_err, info = out[0], out[1], out[2]
    if len(out) > 3:
        raise QuadratureError(str(out[3]), value=value,
                              abs_error_estimate=abs_err,
                              evaluations=int(info["neval"]))
    return QuadratureResult(float(value), float(abs_err), int(info["neval"]))


@dataclass(frozen=True)
class MaximizeResult:
    argmax: np.ndarray
    value: float
    refinements: int
    grid_resolution: float


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_section_max(f, lo: float, hi: float, xtol: float):
    """Golden-section ascent on [lo, hi]; returns (best_x, best_f, iters)."""
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    best_x, best_f = (x1, f1) if f1 >= f2 else (x2, f2)
    iters = 0
    while hi - lo > xtol and iters < 200:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = f(x2)
            if f2 > best_f:
                best_x, best_f = x2, f2
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = f(x1)
            if f1 > best_f:
                best_x, best_f = x1, f1
        iters += 1
    return best_x, best_f, iters


def maximize_1d(f: Callable[[float], float], a: float, b: float,
                grid_nodes: int = 2049) -> MaximizeResult:
    """Maximize f on [a, b]: dense grid scan then golden-section refinement.

    grid_nodes of the form 2^m + 1 keeps successive doublings nested, so the
    reported value is monotone under grid refinement.
    """
    if grid_nodes < 3:
        raise ValueError("grid_nodes must be at least 3")
    xs = np.linspace(a, b, grid_nodes)
    fs = np.array([f(x) for x in xs], dtype=float)
    i = int(np.argmax(fs))
    best_x, best_f = float(xs[i]), float(fs[i])
    lo = float(xs[max(i - 1, 0)])
    hi = float(xs[min(i + 1, grid_nodes - 1)])
    gx, gf, iters = _golden_section_max(f, lo, hi, xtol=1e-12 * (b - a))
    if gf > best_f:
        best_x, best_f = float(gx), float(gf)
    return MaximizeResult(argmax=np.array([best_x]), value=best_f,
                          refinements=iters,
                          grid_resolution=(b - a) / (grid_nodes - 1))


def maximize_box(f: Callable[[np.ndarray], float],
                 box: Sequence[tuple[float, float]],
                 grid_nodes: int = 65,
                 refine_starts: int = 8,
                 vectorized: bool = False) -> MaximizeResult:
    """Maximize f over a 1- to 3-dimensional box.

    Full grid scan (grid_nodes per axis) followed by Nelder-Mead refinement
    started from the best refine_starts grid cells. Iterates are clamped to
    the box, so the reported argmax always lies inside it. With
    ``vectorized=True`` the grid scan calls f once on an (N, dim) array.
    """
    box = [(float(lo), float(hi)) for lo, hi in box]
    dim = len(box)
    if not 1 <= dim <= 3:
        raise ValueError("box must have 1 to 3 dimensions")
    if any(hi <= lo for lo, hi in box):
        raise ValueError("box intervals must have positive length")
    los = np.array([lo for lo, _ in box])
    his = np.array([hi for _, hi in box])

    axes = [np.linspace(lo, hi, grid_nodes) for lo, hi in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    if vectorized:
        vals = np.asarray(f(pts), dtype=float)
    else:
        vals = np.array([f(p) for p in pts], dtype=float)

    order = np.argsort(vals)[::-1][:refine_starts]
    best_i = int(order[0])
    best_x, best_f = pts[best_i].copy(), float(vals[best_i])

    def neg_clamped(x: np.ndarray) -> float:
        nonlocal best_x, best_f
        xc = np.clip(x, los, his)
        v = float(f(xc[None, :])[0]) if vectorized else float(f(xc))
        if v > best_f:
            best_x, best_f = xc.copy(), v
        return -v

    refinements = 0
    for start in order:
        res = optimize.minimize(neg_clamped, pts[start], method="Nelder-Mead",
                                options={"xatol": 1e-11, "fatol": 1e-13,
                                         "maxiter": 2000})
        refinements += int(res.nit)
    return MaximizeResult(argmax=best_x, value=best_f,
                          refinements=refinements,
                          grid_resolution=float(np.max((his - los)
                                                       / (grid_nodes - 1))))
