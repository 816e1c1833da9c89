"""Boxcar pointer translations of the two illustrative weak values.

Integrates A_w(t) = exp(2i w (t - t0)) and its odd-Hermitian counterpart
sin 2w(t - t0) + i cos 2w(t - t0) against a boxcar of width eps, and compares
with (g/(w eps)) sin(w eps) (times i for the second).  The weak values are
produced by the qubit PPS scenarios bundled with the package, not by the
analytic formula, so the table checks the whole chain.

    python scripts/reproduce_translations.py [--csv out.csv]
"""

import argparse
import csv
import sys
from pathlib import Path

import weakpt
from weakpt.coupling import closed_form_translation, pointer_translation
from weakpt.pps import weak_value_series
from weakpt.scenario import parse_scenario

SCENARIOS = Path(weakpt.__file__).parent / "scenarios"


def rows(eps_values, omega_values):
    for name in ("pt_example", "anti_pt_example"):
        base = parse_scenario(SCENARIOS / f"{name}.json")
        for omega in omega_values:
            for eps in eps_values:
                cfg = base.with_omega(omega).with_epsilon(eps)
                series = weak_value_series(cfg.scenario, cfg.grid)
                q = pointer_translation(series, cfg.coupling)
                cf = closed_form_translation(cfg.closed_form, cfg.coupling.strength, omega, eps)
                yield name, omega, eps, cfg.grid.n, q, cf, abs(q - cf) / abs(cf)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--eps", type=float, nargs="+", default=[0.001, 0.01, 0.1, 1.0])
    ap.add_argument("--omega", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    ap.add_argument("--csv", type=Path, default=None)
    args = ap.parse_args(argv)

    table = list(rows(args.eps, args.omega))
    print(f"{'scenario':16s} {'omega':>6s} {'eps':>7s} {'n':>6s} {'quadrature':>34s} {'rel err':>9s}")
    for name, omega, eps, n, q, cf, err in table:
        print(f"{name:16s} {omega:6.2f} {eps:7.3g} {n:6d} {q.real:+.14f}{q.imag:+.14f}i {err:9.1e}")
    worst = max(r[-1] for r in table)
    print(f"worst relative error: {worst:.2e}")

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["scenario", "omega", "epsilon", "n", "re_q", "im_q", "re_closed", "im_closed", "rel_err"])
            for name, omega, eps, n, q, cf, err in table:
                w.writerow([name, omega, eps, n, repr(q.real), repr(q.imag), repr(cf.real), repr(cf.imag), repr(err)])
    return 0 if worst <= 1e-9 else 1


if __name__ == "__main__":
    sys.exit(main())
