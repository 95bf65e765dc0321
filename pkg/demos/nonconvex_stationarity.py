"""Smallest gradient norm on the double well: gmd with a constant-H schedule vs gradient descent."""
import numpy as np

from genmom.harness import baseline_gd
from genmom.methods import run
from genmom.objectives import DoubleWell, make_problem
from genmom.schedules import build_schedule, constant_h_params
from genmom.spaces import make_mirror


def main():
    obj = DoubleWell()
    iters = 200
    print("seed   gmd min|g|^2   gd min|g|^2   gmd f(y_K)")
    for seed in range(5):
        x0 = np.random.default_rng(seed).uniform(-1.5, 1.5, 2)
        prob = make_problem(obj, make_mirror("euclidean_unconstrained", 2, obj.L), x0=x0)
        s = build_schedule(constant_h_params(0.5, obj.L, obj.L), iters)
        tr = run(prob, "gmd", iters, schedule=s).trace
        gd = baseline_gd(prob, iters)
        print(f"{seed:4d}   {tr[-1].min_grad_sq:.3e}      {gd[-1].min_grad_sq:.3e}     {tr[-1].f_y:+.4f}")


if __name__ == "__main__":
    main()
