"""Fitted convergence exponents of gmd_f on an ill-conditioned quadratic.

Prints the slope of log(f(xhat_k) - f*) against log k for several lambda,
then shows how the lambda = 1 slope depends on the condition number: the
k^-2 regime only dominates the window once k * sqrt(1/kappa) stays small.
"""
import numpy as np

from genmom.diagnostics import fit_rate
from genmom.methods import run
from genmom.objectives import make_problem, make_quadratic
from genmom.spaces import make_mirror


def quadratic(n, kappa):
    return make_problem(make_quadratic(n, kappa), make_mirror("euclidean_unconstrained", n),
                        x0=np.ones(n))


def main():
    prob = quadratic(50, 1e4)
    print("lambda  slope[200, 2000]  final gap")
    for lam in (0.0, 0.5, 1.0):
        tr = run(prob, "gmd_f", 2000, lam=lam, c=0.5).trace
        fit = fit_rate(tr.column("gap"), k_range=(200, 2000))
        print(f"{lam:6.1f}  {fit.slope:16.3f}  {tr[-1].gap:.3e}")

    print("\nlambda = 1, slope against kappa")
    for kappa in (1e4, 1e6, 1e8):
        tr = run(quadratic(50, kappa), "gmd_f", 2000, lam=1.0, c=0.5).trace
        fit = fit_rate(tr.column("gap"), k_range=(200, 2000))
        print(f"kappa={kappa:8.0e}  slope={fit.slope:.3f}")


if __name__ == "__main__":
    main()
