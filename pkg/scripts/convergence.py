"""Temporal convergence against the exact Mittag-Leffler mode on (0, 1).

Prints one error table per (variant, alpha, grading) combination; the
reference is E_alpha(-pi^2 t^alpha) sin(pi x).

    python3 scripts/convergence.py --levels 25,50,100,200,400 --nx 512
"""

import argparse

from fracfp.meshing import GradedTimeMesh, SpaceGrid
from fracfp.models import InitialDatum, InitialKind, ProblemSpec, Variant
from fracfp.verify import convergence_study, subdiffusion_reference


def _ints(text):
    return [int(v) for v in text.split(",")]


def _floats(text):
    return [float(v) for v in text.split(",")]


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--levels", type=_ints, default=[25, 50, 100, 200, 400])
    p.add_argument("--alphas", type=_floats, default=[0.3, 0.5, 0.7, 1.0])
    p.add_argument("--gammas", type=_floats, default=[1.0, 2.0])
    p.add_argument("--nx", type=int, default=512)
    args = p.parse_args()

    sine = InitialDatum(InitialKind.SINE_MODE, {"wavenumber": 1})
    for variant in Variant:
        for alpha in args.alphas:
            for gamma in args.gammas:
                spec = ProblemSpec(alpha, 1.0, SpaceGrid(0.0, 1.0, args.nx),
                                   GradedTimeMesh(args.levels[0], gamma, 1.0),
                                   initial=sine, variant=variant)
                ref = lambda t, x, a=alpha: subdiffusion_reference(a, 1, t, x)  # noqa: E731
                table = convergence_study(spec, args.levels, reference=ref)
                print(f"\n{variant.value}  alpha={alpha}  gamma={gamma}")
                print(f"{'N':>6} {'error':>12} {'order':>7}")
                for row in table.rows:
                    order = "" if row.order is None else f"{row.order:7.3f}"
                    print(f"{row.resolution:>6} {row.error:12.4e} {order:>7}")


if __name__ == "__main__":
    main()
