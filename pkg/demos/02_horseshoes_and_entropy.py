"""Pruned horseshoes and three independent routes to topological entropy.

A horseshoe here is a subshift of finite type built from the cylinders
of some depth that stay a fixed distance away from the discontinuity.
Shrinking that distance recovers more and more of the full symbolic
dynamics, and the subshift entropies climb toward log(beta).
"""

import math

import numpy as np

from geolorenz import (ConstantPotential, LorenzMap1D, admissible_words,
                       build_horseshoe, pressure_separated, pressure_transfer,
                       restrict_horseshoe, strongly_connected_components)


def sft_entropy(hs):
    # log of the spectral radius of the adjacency matrix
    eigs = np.linalg.eigvals(np.array(hs.adjacency_matrix(), dtype=float))
    return math.log(max(abs(e) for e in eigs))


def main():
    lmap = LorenzMap1D(alpha=1.0, beta=1.7)
    target = math.log(lmap.beta)
    print("topological entropy of the base map: log(beta) = %.6f\n" % target)

    # route 1: admissible word counts (lap numbers grow like e^(h n))
    counts = {n: len(admissible_words(lmap, n)) for n in (12, 13, 14)}
    growth = math.log(counts[14] / counts[13])
    print("route 1, word counts: N_13=%d N_14=%d  log ratio = %.6f"
          % (counts[13], counts[14], growth))

    # route 2: transfer operator at zero potential
    est = pressure_transfer(lmap, ConstantPotential(0.0), depth=12)
    print("route 2, transfer estimate: %.6f (slack %.4f)"
          % (est.value, est.slack))

    # route 3: separated sets under the orbit metric
    sep = pressure_separated(lmap, ConstantPotential(0.0), n=18, eps=1e-3)
    print("route 3, separated sets:    %.6f (slack %.4f)"
          % (sep.value, sep.slack))

    # horseshoe entropies increase as the excluded gap shrinks
    print("\nhorseshoe entropy vs excluded gap (depth 10):")
    print("  %-10s %-9s %-6s %s" % ("x_gap", "vertices", "SCCs", "entropy"))
    for gap in (0.2, 0.05, 0.01, 0.002):
        hs = build_horseshoe(lmap, depth=10, x_gap=gap)
        sccs = strongly_connected_components(hs)
        core = restrict_horseshoe(hs, max(sccs, key=len))
        print("  %-10g %-9d %-6d %.6f"
              % (gap, len(hs.vertices), len(sccs), sft_entropy(core)))
    print("\nthe 0.002-gap horseshoe already carries nearly all the entropy;")
    print("the 0.2 one collapses to a single two-cycle (entropy 0).")


if __name__ == "__main__":
    main()
