"""Monte Carlo harness and the verification suite.

Trial i of any experiment consumes the stream keyed by (master_seed, i), so
results are bit-identical for any worker count: accumulation is single-pass
Welford within fixed-size chunks, and chunk statistics are merged by a
pairwise tree in trial-index order. The verify_* operations each encode one
literal inequality or |z| <= 3 agreement test between simulation and a
closed form.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import geometry, theory
from .mathcore import integrate_1d, simplex_volume
from .sampling import RngStream, _truncated_coords

CHUNK = 4096
SUBSET_CAP = 200_000
Z_THRESHOLD = 3.0


class ResourceCapError(ValueError):
    """Requested parameters exceed the configured desk-scale caps."""


class TrialError(RuntimeError):
    """A Monte Carlo trial raised; carries the failing trial index."""

    def __init__(self, trial_index: int, cause: BaseException):
        super().__init__(f"trial {trial_index} failed: {cause}")
        self.trial_index = trial_index


@dataclass(frozen=True)
class MCEstimate:
    """Running mean/variance summary of one Monte Carlo quantity."""

    mean: float
    variance: float
    trials: int
    std_error: float
    ci95: tuple[float, float]

    @classmethod
    def from_welford(cls, count: int, mean: float, m2: float) -> "MCEstimate":
        variance = m2 / (count - 1)
        std_error = math.sqrt(variance / count)
        return cls(mean=mean, variance=variance, trials=count,
                   std_error=std_error,
                   ci95=(mean - 1.96 * std_error, mean + 1.96 * std_error))

    def as_dict(self) -> dict:
        return {"mean": self.mean, "variance": self.variance,
                "trials": self.trials, "std_error": self.std_error,
                "ci95": [self.ci95[0], self.ci95[1]]}


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one theory-versus-simulation check."""

    name: str
    theory: float
    estimate: MCEstimate | None
    z: float | None
    threshold: float
    passed: bool
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"name": self.name, "theory": self.theory,
                "estimate": None if self.estimate is None
                else self.estimate.as_dict(),
                "z": self.z, "threshold": self.threshold,
                "passed": self.passed, "details": self.details}


def _run_chunk(trial, master_seed: int, lo: int, hi: int):
    s = RngStream(master_seed, lo)
    count = 0
    mean = 0.0
    m2 = 0.0
    for i in range(lo, hi):
        s.reset(master_seed, i)
        try:
            x = float(trial(s))
        except Exception as exc:
            raise TrialError(i, exc) from exc
        count += 1
        delta = x - mean
        mean += delta / count
        m2 += delta * (x - mean)
    return count, mean, m2


def _run_chunk_vector(trial, master_seed: int, lo: int, hi: int, width: int):
    s = RngStream(master_seed, lo)
    count = 0
    mean = np.zeros(width)
    m2 = np.zeros(width)
    for i in range(lo, hi):
        s.reset(master_seed, i)
        try:
            x = np.asarray(trial(s), dtype=float)
        except Exception as exc:
            raise TrialError(i, exc) from exc
        count += 1
        delta = x - mean
        mean += delta / count
        m2 += delta * (x - mean)
    return count, mean, m2


def _merge_stats(a, b):
    na, ma, m2a = a
    nb, mb, m2b = b
    n = na + nb
    delta = mb - ma
    mean = ma + delta * (nb / n)
    m2 = m2a + m2b + delta * delta * (na * nb / n)
    return n, mean, m2


def _tree_merge(stats):
    """Pairwise merge in index order; the tree shape depends only on the
    chunk count, never on the worker count."""
    while len(stats) > 1:
        merged = [_merge_stats(stats[i], stats[i + 1])
                  for i in range(0, len(stats) - 1, 2)]
        if len(stats) % 2 == 1:
            merged.append(stats[-1])
        stats = merged
    return stats[0]


def _run_chunks(chunk_fn, chunks, workers: int):
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(lambda c: chunk_fn(*c), chunks))
    return [chunk_fn(*c) for c in chunks]


def mc_run(trial: Callable[[RngStream], float], trials: int,
           master_seed: int, workers: int = 1) -> MCEstimate:
    """Estimate the mean of trial over independent streams.

    Trial i consumes stream(master_seed, i). The result is bit-identical for
    any worker count.
    """
    if trials < 2:
        raise ValueError("need at least 2 trials")
    chunks = [(lo, min(lo + CHUNK, trials)) for lo in range(0, trials, CHUNK)]
    stats = _run_chunks(
        lambda lo, hi: _run_chunk(trial, master_seed, lo, hi), chunks, workers)
    count, mean, m2 = _tree_merge(stats)
    return MCEstimate.from_welford(count, mean, m2)


def mc_run_vector(trial: Callable[[RngStream], np.ndarray], width: int,
                  trials: int, master_seed: int,
                  workers: int = 1) -> list[MCEstimate]:
    """Vector-valued twin of mc_run; returns one estimate per component."""
    if trials < 2:
        raise ValueError("need at least 2 trials")
    chunks = [(lo, min(lo + CHUNK, trials)) for lo in range(0, trials, CHUNK)]
    stats = _run_chunks(
        lambda lo, hi: _run_chunk_vector(trial, master_seed, lo, hi, width),
        chunks, workers)
    count, mean, m2 = _tree_merge(stats)
    return [MCEstimate.from_welford(count, float(mean[j]), float(m2[j]))
            for j in range(width)]


def _check_subset_cap(n: int, d: int, cap: int) -> None:
    if math.comb(n, d) > cap:
        raise ResourceCapError(
            f"C({n}, {d}) = {math.comb(n, d)} exceeds the subset cap {cap}")


def kfacet_expectation_mc(n: int, d: int, k: int, trials: int,
                          master_seed: int, workers: int = 1,
                          subset_cap: int = SUBSET_CAP) -> MCEstimate:
    """Empirical E e_k by full per-trial enumeration."""
    theory._check_kfacet_inputs(n, d, k)
    _check_subset_cap(n, d, subset_cap)
    subsets = geometry.subset_array(n, d)

    def trial(s: RngStream) -> float:
        coords = s.standard_normal((n, d))
        return float(geometry.profile_counts(coords, subsets)[k])

    return mc_run(trial, trials, master_seed, workers)


def kfacet_profile_expectation_mc(n: int, d: int, trials: int,
                                  master_seed: int, workers: int = 1,
                                  subset_cap: int = SUBSET_CAP
                                  ) -> list[MCEstimate]:
    """Empirical expectation of the whole profile vector (e_0, ..., e_{n-d})."""
    if d < 1 or n < d + 1:
        raise ValueError(f"need d >= 1 and n >= d + 1, got n={n}, d={d}")
    _check_subset_cap(n, d, subset_cap)
    subsets = geometry.subset_array(n, d)

    def trial(s: RngStream) -> np.ndarray:
        coords = s.standard_normal((n, d))
        return geometry.profile_counts(coords, subsets)

    return mc_run_vector(trial, n - d + 1, trials, master_seed, workers)


def fixed_subset_kfacet_probability_mc(n: int, d: int, k: int, trials: int,
                                       master_seed: int, workers: int = 1,
                                       subset_cap: int = SUBSET_CAP
                                       ) -> MCEstimate:
    """Probability that the first d of n Gaussian points form a k-facet."""
    theory._check_kfacet_inputs(n, d, k)
    _check_subset_cap(n, d, subset_cap)
    first = geometry.subset_array(d, d)  # the single subset (0, ..., d-1)

    def trial(s: RngStream) -> float:
        coords = s.standard_normal((n, d))
        dist = geometry.signed_distances(coords, first)[0, d:]
        band = geometry.ON_BAND_RTOL * float(np.max(np.abs(coords)))
        if np.any(np.abs(dist) <= band):
            raise geometry.DegeneracyError(tuple(range(d)),
                                           int(np.argmin(np.abs(dist))) + d)
        below = int((dist < 0).sum())
        return 1.0 if below == k or (n - d) - below == k else 0.0

    return mc_run(trial, trials, master_seed, workers)


def reduced_kfacet_probability_mc(n: int, d: int, k: int, trials: int,
                                  master_seed: int,
                                  workers: int = 1) -> MCEstimate:
    """Scalar surrogate for the fixed-subset probability.

    Draw Y ~ N(0, 1/d) and Y_1..Y_{n-d} ~ N(0, 1); succeed when the number
    of Y_i above Y is k or (n-d) - k.
    """
    theory._check_kfacet_inputs(n, d, k)
    m = n - d
    inv_sqrt_d = 1.0 / math.sqrt(d)

    def trial(s: RngStream) -> float:
        z = s.standard_normal(m + 1)
        above = int((z[1:] > z[0] * inv_sqrt_d).sum())
        return 1.0 if above == k or above == m - k else 0.0

    return mc_run(trial, trials, master_seed, workers)


def estranged_expectation_mc(d: int, trials: int, master_seed: int,
                             workers: int = 1, d_cap: int = 7) -> MCEstimate:
    """Expected number of estranged facet pairs of 2d Gaussian points."""
    if d < 1:
        raise ValueError("need d >= 1")
    if d > d_cap:
        raise ResourceCapError(f"d = {d} exceeds the estranged cap {d_cap}")
    n = 2 * d
    subsets = geometry.subset_array(n, d)
    key = {tuple(row): i for i, row in enumerate(subsets)}
    comp = np.array([key[tuple(j for j in range(n) if j not in set(row))]
                     for row in subsets])
    first_of_pair = np.arange(len(subsets)) < comp

    def trial(s: RngStream) -> float:
        coords = s.standard_normal((n, d))
        mask = geometry.facet_mask(coords, subsets)
        return float((mask & mask[comp] & first_of_pair).sum())

    return mc_run(trial, trials, master_seed, workers)


def pair_facet_probability_mc(d: int, trials: int, master_seed: int,
                              workers: int = 1, d_cap: int = 10) -> MCEstimate:
    """Probability that both halves of a fixed partition of 2d points are facets."""
    if d < 1:
        raise ValueError("need d >= 1")
    if d > d_cap:
        raise ResourceCapError(f"d = {d} exceeds the pair cap {d_cap}")
    n = 2 * d
    halves = np.array([list(range(d)), list(range(d, n))], dtype=np.intp)

    def trial(s: RngStream) -> float:
        coords = s.standard_normal((n, d))
        mask = geometry.facet_mask(coords, halves)
        return 1.0 if bool(mask.all()) else 0.0

    return mc_run(trial, trials, master_seed, workers)


def _z_report(name: str, theory_value: float, est: MCEstimate,
              details: dict | None = None) -> VerificationReport:
    z = (est.mean - theory_value) / est.std_error if est.std_error > 0 \
        else (0.0 if est.mean == theory_value else math.inf)
    return VerificationReport(name=name, theory=theory_value, estimate=est,
                              z=z, threshold=Z_THRESHOLD,
                              passed=abs(z) <= Z_THRESHOLD,
                              details=details or {})


def verify_blaschke(d: int, trials: int, master_seed: int,
                    distribution: str = "gaussian",
                    workers: int = 1) -> VerificationReport:
    """Second-moment identity: det cov = d!/(d+1) E[vol^2] of a simplex.

    Checked as E[vol^2] against (d+1)/d! * det cov with det cov known in
    closed form (1 for standard Gaussian, 12^-d for the unit cube).
    """
    if distribution == "gaussian":
        det_cov = 1.0
        draw = lambda s: s.standard_normal((d + 1, d))
    elif distribution == "uniform-cube":
        det_cov = 12.0 ** (-d)
        draw = lambda s: s.uniform((d + 1, d))
    else:
        raise ValueError(f"unknown distribution {distribution!r}")
    target = (d + 1) / math.factorial(d) * det_cov

    def trial(s: RngStream) -> float:
        return simplex_volume(draw(s)) ** 2

    est = mc_run(trial, trials, master_seed, workers)
    return _z_report(f"blaschke[{distribution},d={d}]", target, est,
                     {"det_cov": det_cov, "d": d,
                      "distribution": distribution})


def verify_simplex_volume(d: int, trials: int, master_seed: int,
                          workers: int = 1) -> VerificationReport:
    """Mean volume of a Gaussian simplex against its closed form."""
    target = theory.gaussian_simplex_expected_volume(d).value

    def trial(s: RngStream) -> float:
        return simplex_volume(s.standard_normal((d + 1, d)))

    est = mc_run(trial, trials, master_seed, workers)
    return _z_report(f"simplex_volume[d={d}]", target, est, {"d": d})


def verify_truncated_bound(d: int, t: float, trials: int, master_seed: int,
                           workers: int = 1) -> VerificationReport:
    """Halfspace-truncated simplex volume respects its lower bound.

    Passes when the empirical mean plus 3 standard errors is at least the
    bound (the bound is a one-sided guarantee, not an equality).
    """
    if d < 2:
        raise ValueError("need d >= 2")
    if t < 0:
        raise ValueError("need t >= 0")
    bound = theory.truncated_simplex_lower_bound(d)

    def trial(s: RngStream) -> float:
        return simplex_volume(_truncated_coords(s, d, d - 1, t))

    est = mc_run(trial, trials, master_seed, workers)
    z = (est.mean - bound) / est.std_error if est.std_error > 0 else math.inf
    passed = est.mean + Z_THRESHOLD * est.std_error >= bound
    return VerificationReport(name=f"truncated_bound[d={d},t={t}]",
                              theory=bound, estimate=est, z=z,
                              threshold=Z_THRESHOLD, passed=passed,
                              details={"d": d, "t": t, "one_sided": True})


LOGCONCAVE_FAMILIES = ("uniform", "gaussian", "truncated-gaussian", "laplace")
_HALF_NORMAL_MEAN = math.sqrt(2.0 / math.pi)


def verify_logconcave_moment(family: str, trials: int, master_seed: int,
                             workers: int = 1) -> VerificationReport:
    """Mean-zero logconcave draws satisfy E|X| >= (1/8) sqrt(E X^2).

    The empirical ratio is checked with a 3-standard-error safety margin on
    both moments (shrinking E|X|, inflating E X^2).
    """
    if family not in LOGCONCAVE_FAMILIES:
        raise ValueError(f"family must be one of {LOGCONCAVE_FAMILIES}")

    def draw(s: RngStream) -> float:
        if family == "uniform":
            return 2.0 * float(s.uniform()) - 1.0
        if family == "gaussian":
            return float(s.standard_normal())
        if family == "truncated-gaussian":
            return -abs(float(s.standard_normal())) + _HALF_NORMAL_MEAN
        return float(s.generator.laplace())

    def trial(s: RngStream) -> np.ndarray:
        x = draw(s)
        return np.array([abs(x), x * x])

    abs_est, sq_est = mc_run_vector(trial, 2, trials, master_seed, workers)
    low_abs = abs_est.mean - Z_THRESHOLD * abs_est.std_error
    high_sq = sq_est.mean + Z_THRESHOLD * sq_est.std_error
    ratio = abs_est.mean / math.sqrt(sq_est.mean)
    conservative = low_abs / math.sqrt(high_sq)
    return VerificationReport(
        name=f"logconcave_moment[{family}]", theory=0.125, estimate=abs_est,
        z=None, threshold=Z_THRESHOLD, passed=conservative >= 0.125,
        details={"family": family, "ratio": ratio,
                 "conservative_ratio": conservative,
                 "mean_abs": abs_est.mean, "mean_sq": sq_est.mean})


def verify_dot_density(d: int, trials: int, master_seed: int,
                       workers: int = 1) -> VerificationReport:
    """Empirical second and fourth moments of the direction dot product
    against quadrature of its closed-form density."""
    if d < 2:
        raise ValueError("need d >= 2")
    m2 = integrate_1d(lambda w: w * w * theory.dot_density(w, d),
                      -1.0, 1.0, rel_tol=1e-11).value
    m4 = integrate_1d(lambda w: w ** 4 * theory.dot_density(w, d),
                      -1.0, 1.0, rel_tol=1e-11).value

    def trial(s: RngStream) -> np.ndarray:
        v1 = s.standard_normal(d)
        v2 = s.standard_normal(d)
        w = float(v1 @ v2 / (np.linalg.norm(v1) * np.linalg.norm(v2)))
        return np.array([w * w, w ** 4])

    est2, est4 = mc_run_vector(trial, 2, trials, master_seed, workers)
    z2 = (est2.mean - m2) / est2.std_error
    z4 = (est4.mean - m4) / est4.std_error
    worst = z2 if abs(z2) >= abs(z4) else z4
    return VerificationReport(
        name=f"dot_density[d={d}]", theory=m2, estimate=est2, z=worst,
        threshold=Z_THRESHOLD,
        passed=abs(z2) <= Z_THRESHOLD and abs(z4) <= Z_THRESHOLD,
        details={"d": d, "moment2_theory": m2, "moment4_theory": m4,
                 "moment4_estimate": est4.as_dict(), "z2": z2, "z4": z4})


def verify_lp_limit(p_values=(10, 100, 1000)) -> VerificationReport:
    """(integral of phi^p)^(1/p) increases toward the sup of phi.

    Quadrature only (no sampling); passes when the sequence is increasing
    and the largest p lands within 0.01 of (2 pi)^(-1/2). The sup is
    factored out before integrating, since phi^p itself underflows float64
    for p of a few hundred.
    """
    p_values = sorted(p_values)
    limit = 1.0 / math.sqrt(2.0 * math.pi)
    values = []
    for p in p_values:
        quad = integrate_1d(lambda y: math.exp(-0.5 * p * y * y),
                            -theory.INTEGRATION_HALF_WIDTH,
                            theory.INTEGRATION_HALF_WIDTH, rel_tol=1e-12)
        values.append(limit * quad.value ** (1.0 / p))
    increasing = all(values[i] < values[i + 1] for i in range(len(values) - 1))
    close = abs(values[-1] - limit) <= 0.01
    return VerificationReport(
        name="lp_limit", theory=limit, estimate=None, z=None,
        threshold=0.01, passed=increasing and close,
        details={"p_values": list(p_values), "values": values,
                 "increasing": increasing, "final_gap": limit - values[-1]})


@dataclass(frozen=True)
class GrowthRow:
    d: int
    n: int
    mean: float
    std_error: float
    root: float
    base: float


def facet_growth_table(alpha: float, d_range, trials: int, master_seed: int,
                       workers: int = 1, k_mode: str = "min",
                       subset_cap: int = SUBSET_CAP) -> list[GrowthRow]:
    """Trend table of (E e_k)^(1/d) against the theoretical growth base.

    k_mode 'min' uses k = 0 (facets, base at r = 0); 'middle' uses the
    middle layer (base at r = 1/2). Diagnostic only: the finite-d offset of
    the root from the base has no universal rate.
    """
    if k_mode not in ("min", "middle"):
        raise ValueError("k_mode must be 'min' or 'middle'")
    r = 0.0 if k_mode == "min" else 0.5
    base = theory.growth_base_kfacet(alpha, r)
    rows = []
    for d in d_range:
        n = round(alpha * d)
        if n < d + 1:
            raise ValueError(f"alpha {alpha} gives n <= d at d = {d}")
        k = 0 if k_mode == "min" else (n - d) // 2
        est = kfacet_expectation_mc(n, d, k, trials, master_seed,
                                    workers=workers, subset_cap=subset_cap)
        rows.append(GrowthRow(d=d, n=n, mean=est.mean,
                              std_error=est.std_error,
                              root=est.mean ** (1.0 / d), base=base))
    return rows


def growth_rows_to_csv(rows, fh) -> None:
    fh.write("d,n,mean,se,root,base\n")
    for row in rows:
        fh.write(f"{row.d},{row.n},{format(row.mean, '.17g')},"
                 f"{format(row.std_error, '.17g')},"
                 f"{format(row.root, '.17g')},{format(row.base, '.17g')}\n")


def verify_kfacet_reduction(n: int, d: int, k: int, trials_full: int,
                            trials_reduced: int, master_seed: int,
                            workers: int = 1) -> VerificationReport:
    """Triangulate the per-subset k-facet probability three ways.

    Exact quadrature, the full d-dimensional experiment, and the scalar
    reduced experiment must pairwise agree within 3 combined standard
    errors.
    """
    exact = theory.kfacet_probability_exact(n, d, k)
    full = fixed_subset_kfacet_probability_mc(n, d, k, trials_full,
                                              master_seed, workers)
    reduced = reduced_kfacet_probability_mc(n, d, k, trials_reduced,
                                            master_seed, workers)
    z_full = (full.mean - exact) / full.std_error
    z_reduced = (reduced.mean - exact) / reduced.std_error
    se_pair = math.sqrt(full.std_error ** 2 + reduced.std_error ** 2)
    z_pair = (full.mean - reduced.mean) / se_pair
    zs = {"full_vs_exact": z_full, "reduced_vs_exact": z_reduced,
          "full_vs_reduced": z_pair}
    passed = all(abs(z) <= Z_THRESHOLD for z in zs.values())
    worst = max(zs.values(), key=abs)
    return VerificationReport(
        name=f"kfacet_reduction[n={n},d={d},k={k}]", theory=exact,
        estimate=full, z=worst, threshold=Z_THRESHOLD, passed=passed,
        details={"n": n, "d": d, "k": k, **zs,
                 "reduced_estimate": reduced.as_dict()})
