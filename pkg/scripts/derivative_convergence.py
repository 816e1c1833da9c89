"""Analytic weak-value derivative against central differences, step by step.

Draws random qubit/qutrit PPS scenarios and prints the finite-difference
residual for h = 1e-2 ... 1e-6.  The residual falls as h^2 until roundoff
(about eps_machine / h) takes over near h ~ 1e-5.

    python scripts/derivative_convergence.py [--seed N] [--count K]
"""

import argparse

import numpy as np

from weakpt import (
    Observable,
    PpsScenario,
    evolve_pps,
    finite_difference_derivative,
    inner,
    ket,
    weak_value_derivative,
)

STEPS = (1e-2, 1e-3, 1e-4, 5e-5, 1e-5, 1e-6)


def random_scenario(rng, dim, t):
    def herm():
        m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        return Observable((m + m.conj().T) / 2)

    def state():
        return ket(rng.normal(size=dim) + 1j * rng.normal(size=dim))

    while True:
        s = PpsScenario(state(), state(), herm(), herm(), herm(), dt_i=rng.uniform(0, 1), dt_f=rng.uniform(0, 1))
        pre, post = evolve_pps(s, t)
        if abs(inner(post, pre)) > 0.5:
            return s


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)

    t = 0.37
    print(f"{'dim':>3s} {'|dA_w/dt|':>10s}" + "".join(f"{h:>11.0e}" for h in STEPS))
    for k in range(args.count):
        dim = 2 + k % 2
        s = random_scenario(rng, dim, t)
        d = weak_value_derivative(s, t)
        res = [abs(d - finite_difference_derivative(s, t, h)) / (1 + abs(d)) for h in STEPS]
        print(f"{dim:3d} {abs(d):10.4f}" + "".join(f"{r:11.2e}" for r in res))


if __name__ == "__main__":
    main()
