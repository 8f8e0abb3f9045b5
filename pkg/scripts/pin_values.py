"""Recompute the pinned constants used by the acceptance tests from the oracles."""

import time
from fractions import Fraction

from st_forge.applications import energy_sum, energy_via_incidence, project_all
from st_forge.construction import GridParams, SlopeParams, gen_slopes
from st_forge.oracle import brute_slope_set
from st_forge.qk import RingContext

K2 = RingContext(2)
HALF = Fraction(1, 2)


def timed(label, fn):
    t0 = time.perf_counter()
    out = fn()
    print(f"{label}: {out}  ({time.perf_counter() - t0:.1f}s)")
    return out


def main():
    for M in (4, 16, 36):
        timed(f"brute |S| M={M}", lambda: len(brute_slope_set(M, HALF, 2)))
    sizes = {M: len(gen_slopes(SlopeParams(M, HALF), K2)) for M in (16, 36, 64, 100)}
    ratios = {M: n / M**2 for M, n in sizes.items()}
    print("|S| by M:", sizes)
    print("|S|/M^2 band width:", round(max(ratios.values()) / min(ratios.values()), 3))

    g = GridParams.from_side(K2, 8)
    S = gen_slopes(SlopeParams(4, HALF), K2)
    timed("energy_sum s=8", lambda: energy_sum(g, S).total)
    timed("incidence-side energy s=8", lambda: sum(energy_via_incidence(g, sl.value) for sl in S))
    reps = timed("projection sizes s=8", lambda: sorted(r.n_classes for r in project_all(g, S)))
    print("projection band width:", round(reps[-1] / reps[0], 3))


if __name__ == "__main__":
    main()
