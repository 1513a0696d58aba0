"""Closed-form quantities for Gaussian random point sets.

Covers the exact per-subset k-facet probability (a 1-D quadrature after the
reduction to scalar Gaussians), the entropy-weighted exponential growth base
of expected k-facet counts, the variational constants governing simultaneous
facet pairs on disjoint vertex sets, and supporting densities and simplex
volume formulas. Everything is evaluated numerically in log space where
binomial factors could overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .mathcore import (
    MaximizeResult,
    integrate_1d,
    log_binomial,
    log_gamma,
    maximize_1d,
    maximize_box,
    std_normal_cdf,
    std_normal_log_cdf,
)

INTEGRATION_HALF_WIDTH = 12.0  # phi(12)^d underflows any contribution
RHO_MAX = 6.0                  # exp(-rho^2) caps the pair integrand below 2e-16
W_EDGE = 1e-9                  # keep sqrt(1 - w^2) away from its zero


@dataclass(frozen=True, eq=False)
class ConstantResult:
    """A variational constant: value, argmax coordinates, and diagnostics."""

    value: float
    argmax: np.ndarray
    context: dict
    diagnostics: MaximizeResult

    def as_record(self, name: str) -> dict:
        return {
            "name": name,
            "parameters": dict(self.context),
            "value": self.value,
            "argmax": [float(x) for x in np.atleast_1d(self.argmax)],
            "grid_resolution": self.diagnostics.grid_resolution,
        }


def binary_entropy(r: float) -> float:
    """H(r) = -r log2 r - (1-r) log2 (1-r), with H(0) = H(1) = 0."""
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"binary entropy needs r in [0, 1], got {r}")
    if r == 0.0 or r == 1.0:
        return 0.0
    return float(-r * math.log2(r) - (1.0 - r) * math.log2(1.0 - r))


def _check_kfacet_inputs(n: int, d: int, k: int) -> None:
    if d < 1 or n < d + 1:
        raise ValueError(f"need d >= 1 and n >= d + 1, got n={n}, d={d}")
    if not 0 <= k <= n - d:
        raise ValueError(f"need 0 <= k <= n - d, got k={k} with n-d={n - d}")


def kfacet_probability_exact(n: int, d: int, k: int) -> float:
    """Probability that a fixed d-subset of n Gaussian points is a k-facet.

    Equals m * C(n-d, k) * sqrt(d / 2 pi) * integral of
    Phi(y)^k (1 - Phi(y))^(n-d-k) exp(-d y^2 / 2), with m = 2 except at the
    balanced layer k = (n-d)/2, where each subset would otherwise be counted
    for both sides at once.
    """
    _check_kfacet_inputs(n, d, k)
    m = n - d
    factor = 1.0 if 2 * k == m else 2.0
    lc = log_binomial(m, k)

    def integrand(y: float) -> float:
        return math.exp(k * std_normal_log_cdf(y)
                        + (m - k) * std_normal_log_cdf(-y)
                        - 0.5 * d * y * y)

    quad = integrate_1d(integrand, -INTEGRATION_HALF_WIDTH,
                        INTEGRATION_HALF_WIDTH, rel_tol=1e-11)
    p = factor * math.exp(lc) * math.sqrt(d / (2.0 * math.pi)) * quad.value
    return min(max(p, 0.0), 1.0)


def kfacet_log_expectation_exact(n: int, d: int, k: int) -> float:
    """Natural log of the expected k-facet count (safe when C(n, d) is huge)."""
    p = kfacet_probability_exact(n, d, k)
    if p == 0.0:
        return -math.inf
    return log_binomial(n, d) + math.log(p)


def kfacet_expectation_exact(n: int, d: int, k: int) -> float:
    """Expected number of k-facets: C(n, d) times the per-subset probability."""
    return math.exp(kfacet_log_expectation_exact(n, d, k))


def c_alpha_r(alpha: float, r: float,
              alt_exponents: bool = False) -> ConstantResult:
    """Maximum over y of Phi(y)^e1 (1 - Phi(y))^e2 phi(y).

    Default exponents are e1 = r (alpha - 1), e2 = (1 - r)(alpha - 1), the
    scaling under which k-facet counts at k ~ r (n - d) grow like value^d.
    ``alt_exponents`` switches to the convention e1 = r alpha,
    e2 = alpha - 1 - r alpha for comparison; note e2 goes negative for
    r > 1 - 1/alpha, where the objective is unbounded on the real line and
    only its maximum over the scan interval is reported.
    """
    if alpha <= 1.0:
        raise ValueError(f"need alpha > 1, got {alpha}")
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"need r in [0, 1], got {r}")
    if alt_exponents:
        e1, e2 = r * alpha, alpha - 1.0 - r * alpha
    else:
        e1, e2 = r * (alpha - 1.0), (1.0 - r) * (alpha - 1.0)

    def objective(y: float) -> float:
        la = e1 * std_normal_log_cdf(y) if e1 != 0.0 else 0.0
        lb = e2 * std_normal_log_cdf(-y) if e2 != 0.0 else 0.0
        return math.exp(la + lb - 0.5 * y * y) / math.sqrt(2.0 * math.pi)

    res = maximize_1d(objective, -INTEGRATION_HALF_WIDTH,
                      INTEGRATION_HALF_WIDTH)
    return ConstantResult(value=res.value, argmax=res.argmax,
                          context={"alpha": alpha, "r": r,
                                   "alt_exponents": alt_exponents},
                          diagnostics=res)


def growth_base_kfacet(alpha: float, r: float) -> float:
    """Base of the d-exponential growth of expected k-facet counts.

    2^(alpha H(1/alpha)) * 2^((alpha-1) H(r)) * sqrt(2 pi) * c_alpha_r.
    """
    c = c_alpha_r(alpha, r).value
    exponent = alpha * binary_entropy(1.0 / alpha) \
        + (alpha - 1.0) * binary_entropy(r)
    return float(2.0 ** exponent * math.sqrt(2.0 * math.pi) * c)


def _sign_factor(t, sign: str):
    if sign == "-":
        return std_normal_cdf(t)
    if sign == "+":
        return std_normal_cdf(-t)  # 1 - Phi(t), stable in the far tail
    raise ValueError(f"sign must be '-' or '+', got {sign!r}")


def signed_distance_t(rho1, rho2, w):
    """Signed offset (rho2 - rho1 w) / sqrt(1 - w^2).

    Distance from the origin, measured inside the hyperplane with offset
    rho1, of its intersection with the hyperplane at offset rho2 whose
    normal makes dot product w with the first normal. Positive when the
    corresponding halfspace contains the origin.
    """
    w = np.asarray(w, dtype=float)
    if np.any(np.abs(w) >= 1.0):
        raise ValueError("signed distance needs |w| < 1")
    out = (np.asarray(rho2, float) - np.asarray(rho1, float) * w) \
        / np.sqrt(1.0 - w * w)
    return float(out) if out.ndim == 0 else out


def estranged_integrand(rho1, rho2, w, s1: str, s2: str):
    """Density kernel for a fixed partition yielding two simultaneous facets.

    exp(-(rho1^2 + rho2^2)/2) * F1(t21) * F2(t12) * sqrt(1 - w^2), where
    tij is the signed distance of hyperplane i's boundary inside hyperplane
    j and each F is Phi (sign '-') or 1 - Phi (sign '+').
    """
    w = np.asarray(w, dtype=float)
    if np.any(np.abs(w) >= 1.0):
        raise ValueError("estranged integrand needs |w| < 1")
    rho1 = np.asarray(rho1, dtype=float)
    rho2 = np.asarray(rho2, dtype=float)
    sq = np.sqrt(1.0 - w * w)
    t21 = (rho2 - rho1 * w) / sq
    t12 = (rho1 - rho2 * w) / sq
    out = np.exp(-0.5 * (rho1 * rho1 + rho2 * rho2)) \
        * _sign_factor(t21, s1) * _sign_factor(t12, s2) * sq
    return float(out) if out.ndim == 0 else out


def estranged_constant(s1: str, s2: str) -> ConstantResult:
    """Supremum of the sign-term kernel over rho1, rho2 >= 0 and |w| < 1."""
    def batch(pts: np.ndarray) -> np.ndarray:
        return estranged_integrand(pts[:, 0], pts[:, 1], pts[:, 2], s1, s2)

    res = maximize_box(batch, [(0.0, RHO_MAX), (0.0, RHO_MAX),
                               (-1.0 + W_EDGE, 1.0 - W_EDGE)],
                       vectorized=True)
    return ConstantResult(value=res.value, argmax=res.argmax,
                          context={"signs": s1 + s2}, diagnostics=res)


def estranged_constant_reduced() -> ConstantResult:
    """One-rho form of the dominant (-, -) constant.

    The (-, -) kernel is logconcave and symmetric in (rho1, rho2) for fixed
    w, so its supremum is attained on the diagonal rho1 = rho2 = rho:
    exp(-rho^2) Phi(rho (1 - w) / sqrt(1 - w^2))^2 sqrt(1 - w^2).
    """
    def batch(pts: np.ndarray) -> np.ndarray:
        rho, w = pts[:, 0], pts[:, 1]
        sq = np.sqrt(1.0 - w * w)
        return np.exp(-rho * rho) * std_normal_cdf(rho * (1.0 - w) / sq) ** 2 * sq

    res = maximize_box(batch, [(0.0, RHO_MAX), (-1.0 + W_EDGE, 1.0 - W_EDGE)],
                       vectorized=True)
    return ConstantResult(value=res.value, argmax=res.argmax,
                          context={"form": "reduced"}, diagnostics=res)


def dot_density(w, d: int):
    """Density of the dot product of two independent uniform directions.

    Gamma(d/2) / (sqrt(pi) Gamma((d-1)/2)) * (1 - w^2)^((d-3)/2) on [-1, 1].
    For d = 2 the density diverges at the endpoints (integrably).
    """
    if d < 2:
        raise ValueError("dot-product density needs d >= 2")
    w = np.asarray(w, dtype=float)
    if np.any(np.abs(w) > 1.0):
        raise ValueError("dot-product density has support [-1, 1]")
    c = math.exp(log_gamma(d / 2.0) - log_gamma((d - 1) / 2.0)
                 - 0.5 * math.log(math.pi))
    with np.errstate(divide="ignore"):
        out = c * (1.0 - w * w) ** ((d - 3) / 2.0)
    return float(out) if out.ndim == 0 else out


class GaussianSimplexVolume(NamedTuple):
    value: float
    asymptotic: float


def gaussian_simplex_expected_volume(d: int) -> GaussianSimplexVolume:
    """Expected volume of the simplex on d+1 i.i.d. Gaussian points in R^d.

    Exact value sqrt(d+1) / (2^(d/2) Gamma(d/2 + 1)), together with its
    large-d proxy (e/d)^(d/2) / sqrt(pi).
    """
    if d < 1:
        raise ValueError("need d >= 1")
    value = math.exp(0.5 * math.log(d + 1.0) - 0.5 * d * math.log(2.0)
                     - log_gamma(d / 2.0 + 1.0))
    asymptotic = math.exp(-0.5 * math.log(math.pi)
                          + 0.5 * d * (1.0 - math.log(d)))
    return GaussianSimplexVolume(value=value, asymptotic=asymptotic)


def truncated_simplex_lower_bound(d: int) -> float:
    """Lower bound on the expected volume of a halfspace-truncated simplex.

    For d standard Gaussian points in R^(d-1) conditioned on a halfspace
    containing the origin: sqrt(1 - 2/pi) sqrt(d) / (2^((d+5)/2)
    Gamma((d+1)/2)), independent of the halfspace.
    """
    if d < 2:
        raise ValueError("need d >= 2")
    return math.exp(0.5 * math.log1p(-2.0 / math.pi) + 0.5 * math.log(d)
                    - 0.5 * (d + 5) * math.log(2.0) - log_gamma((d + 1) / 2.0))
