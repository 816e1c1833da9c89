"""How fast does first-order pointer theory degrade with coupling strength?

For a qubit with real weak value sqrt(2) (pre/post at +-pi/8 about sigma_z)
and one with weak value i, compares exact post-selected pointer moments with
the first-order predictions over a range of g, and prints the successive
residual ratios for g -> g/2.

Two pointers are used.  For the reflection-symmetric Gaussian the mean
residual is odd in g, so halving g divides it by about 8.  The skewed pointer
(1 + 0.3 q + 0.2 i q) e^{-q^2/4} has no such symmetry and shows the generic
factor of 4.  Variance residuals are quadratic for both.

    python scripts/first_order_scaling.py
"""

import math

import numpy as np

from weakpt import (
    Observable,
    PointerObservable,
    PpsScenario,
    exact_pointer,
    gaussian_pointer,
    ket,
    pointer_from_samples,
    pointer_moments,
    predict_mean,
    predict_variance,
    weak_value,
)
from weakpt.quantum import SIGMA_X, SIGMA_Z

ZERO = Observable(np.zeros((2, 2)))
GAMMAS = (0.08, 0.04, 0.02, 0.01, 0.005)


def scenarios():
    a = math.pi / 8
    yield "A_w = sqrt2", PpsScenario(
        ket(math.cos(a), math.sin(a)), ket(math.cos(a), -math.sin(a)), ZERO, ZERO, Observable(SIGMA_Z)
    )
    yield "A_w = i", PpsScenario(ket(1, 1j), ket(1, 0), ZERO, ZERO, Observable(SIGMA_X))


def pointers():
    yield "gaussian", gaussian_pointer(var_q=1.0, n_grid=4096)
    n, half = 4096, 16.0
    step = 2 * half / n
    q = -half + step * np.arange(n)
    yield "skewed", pointer_from_samples(-half, step, (1 + 0.3 * q + 0.2j * q) * np.exp(-(q**2) / 4))


def residuals(s, phi, gamma0):
    aw = weak_value(s, s.t_ref)
    m = pointer_moments(exact_pointer(s, gamma0, phi)[0])
    Q, P = PointerObservable.Q, PointerObservable.P
    return {
        "mean_q": abs(m.mean_q - predict_mean(phi, Q, gamma0, aw)),
        "mean_p": abs(m.mean_p - predict_mean(phi, P, gamma0, aw)),
        "var_q": abs(m.var_q - predict_variance(phi, Q, gamma0, aw)),
        "var_p": abs(m.var_p - predict_variance(phi, P, gamma0, aw)),
    }


def main():
    for sname, s in scenarios():
        for pname, phi in pointers():
            table = [residuals(s, phi, g) for g in GAMMAS]
            print(f"\n{sname}, {pname} pointer")
            print(f"{'g':>7s}" + "".join(f"{k:>22s}" for k in table[0]))
            for i, g in enumerate(GAMMAS):
                cells = []
                for k, v in table[i].items():
                    if i and v > 1e-14:
                        cells.append(f"{v:11.3e} ({table[i - 1][k] / v:5.2f}x)")
                    else:
                        cells.append(f"{v:11.3e}" + " " * 9)
                print(f"{g:7.3f}" + "".join(f"{c:>22s}" for c in cells))


if __name__ == "__main__":
    main()
