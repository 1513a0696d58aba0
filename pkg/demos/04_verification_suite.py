"""Run the theory-versus-simulation verification checks.

Each check pits a Monte Carlo estimate against a closed form: the simplex
second-moment identity, the Gaussian simplex volume formula, the truncated
volume lower bound, the logconcave moment inequality, the direction
dot-product density, and the L^p route to the sup of the Gaussian density.
Gates are |z| <= 3 (or the literal inequality for one-sided bounds).
"""

from gpoly.experiments import (
    LOGCONCAVE_FAMILIES,
    verify_blaschke,
    verify_dot_density,
    verify_logconcave_moment,
    verify_lp_limit,
    verify_simplex_volume,
    verify_truncated_bound,
)

TRIALS = 30_000
SEED = 23


def show(rep):
    z = "-" if rep.z is None else f"{rep.z:+6.2f}"
    print(f"  {'ok' if rep.passed else 'FAIL':4} z={z:>7}  {rep.name}")
    return rep.passed


def main():
    results = []
    print(f"Monte Carlo checks at {TRIALS} trials, seed {SEED}\n")

    print("simplex second moment (det cov = d!/(d+1) E[vol^2]):")
    for d in (1, 2, 3):
        results.append(show(verify_blaschke(d, TRIALS, SEED)))
    results.append(show(verify_blaschke(2, TRIALS, SEED,
                                        distribution="uniform-cube")))

    print("Gaussian simplex mean volume:")
    for d in (2, 4, 6):
        results.append(show(verify_simplex_volume(d, TRIALS, SEED)))

    print("halfspace-truncated simplex volume lower bound (one-sided):")
    for d, t in ((3, 0.0), (5, 0.5), (8, 2.0)):
        results.append(show(verify_truncated_bound(d, t, TRIALS // 3, SEED)))

    print("logconcave moment inequality E|X| >= sqrt(E X^2)/8:")
    for family in LOGCONCAVE_FAMILIES:
        results.append(show(verify_logconcave_moment(family, TRIALS, SEED)))

    print("direction dot-product density moments:")
    for d in (2, 3, 8):
        results.append(show(verify_dot_density(d, TRIALS, SEED)))

    print("L^p norms increasing toward the density sup:")
    rep = verify_lp_limit((10, 100, 1000))
    results.append(show(rep))
    for p, v in zip(rep.details["p_values"], rep.details["values"]):
        print(f"        p={p:<5d} (integral phi^p)^(1/p) = {v:.5f}")
    print(f"        sup phi = {rep.theory:.5f}")

    print(f"\n{sum(results)}/{len(results)} checks passed")


if __name__ == "__main__":
    main()
