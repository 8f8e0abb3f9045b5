"""Richness and sharpness sweep over grid sides at fixed M.

    python3 scripts/run_sweep.py --sides 16,32,64 --M 4
"""

import argparse
import time
from fractions import Fraction

from st_forge.construction import GridParams, SlopeParams, gen_lines, gen_slopes
from st_forge.incidence import richness_report, sharpness_report
from st_forge.qk import RingContext


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--sides", default="16,32,64")
    ap.add_argument("--M", type=int, default=4)
    ap.add_argument("--c", type=Fraction, default=Fraction(1, 2))
    args = ap.parse_args()

    ctx = RingContext(args.k)
    S = gen_slopes(SlopeParams(args.M, args.c), ctx)
    print(f"k={args.k} M={args.M} c={args.c} |S|={len(S)}")
    print(f"{'s':>4} {'|L|':>9} {'r_min':>6} {'r_max':>6} {'mean':>9} {'ratio':>9} {'sec':>6}")
    prev = None
    for s in map(int, args.sides.split(",")):
        t0 = time.perf_counter()
        g = GridParams.from_side(ctx, s)
        L = gen_lines(g, S)
        rep = richness_report(g, L, args.M)
        sh = sharpness_report(g, L, args.M, rep)
        dt = time.perf_counter() - t0
        growth = f"  x{float(rep.mean / prev):.3f}" if prev else ""
        prev = rep.mean
        print(
            f"{s:>4} {len(L):>9} {rep.r_min:>6} {rep.r_max:>6} {float(rep.mean):>9.2f} "
            f"{float(sh.ratio):>9.5f} {dt:>6.1f}{growth}"
        )


if __name__ == "__main__":
    main()
