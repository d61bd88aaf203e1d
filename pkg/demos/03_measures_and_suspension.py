"""Invariant measures on the section and their suspension statistics.

Three families of section measures appear throughout the package:
periodic-orbit atoms, Markov measures on pruned horseshoes, and convex
mixtures of the two. The suspension step converts each of them into
flow-level data: mean return time, flow entropy by time rescaling, and
the time average of a potential along the flow.
"""

from geolorenz import (AtomicMeasure, ConstantPotential, CoordinatePotential,
                       LorenzMap1D, RoofFunction, SingularDeltaMeasure,
                       build_horseshoe, convex_combine, entropy_map,
                       equilibrium_measure, find_periodic_point,
                       integrate_map, suspend)


def describe(name, mu, roof, pot):
    h = entropy_map(mu)
    integral, bound = integrate_map(pot, mu, depth=12)
    stats = suspend(mu, roof, pot)
    print("  %-22s h_map=%.6f  int=%+.6f (+-%.1e)  mean_roof=%.4f  "
          "h_flow=%.6f" % (name, h, integral, bound,
                           stats.mean_roof, stats.h_flow))


def main():
    lmap = LorenzMap1D(alpha=1.0, beta=1.7)
    roof = RoofFunction(c0=1.0, c1=1.0, eta0=0.5)
    pot = CoordinatePotential()

    hs = build_horseshoe(lmap, depth=12, x_gap=0.002)
    parry = equilibrium_measure(lmap, hs, ConstantPotential(0.0), t=0.0)
    tilted = equilibrium_measure(lmap, hs, pot, t=1.0)
    atom = AtomicMeasure(lmap, find_periodic_point(lmap, "LRR"))
    mix = convex_combine([(0.5, parry), (0.5, atom)], label="half-half")

    print("section measures under the coordinate potential phi(x,y) = x:")
    describe("max-entropy (Parry)", parry, roof, pot)
    describe("tilted equilibrium", tilted, roof, pot)
    describe("LRR orbit atom", atom, roof, pot)
    describe("50/50 mixture", mix, roof, pot)

    # the mixture is affine in both entropy and integral
    h_expect = 0.5 * entropy_map(parry) + 0.5 * entropy_map(atom)
    print("\nmixture entropy %.6f vs affine combination %.6f"
          % (entropy_map(mix), h_expect))

    # the singular Dirac measure needs flow-level conventions: its mean
    # return time is infinite, so its flow entropy is zero and its time
    # average collapses to the potential value at the singularity
    delta = SingularDeltaMeasure()
    stats = suspend(delta, roof, pot)
    print("\ndelta at the singularity: mean_roof=%s h_flow=%s integral=%+.1f"
          % (stats.mean_roof, stats.h_flow, stats.potential_integral))

    # faster time scale: doubling the speed halves the return time and
    # doubles the flow entropy, leaving h_flow * mean_roof invariant
    fast = roof.scaled(0.5)
    s1, s2 = suspend(parry, roof, pot), suspend(parry, fast, pot)
    print("\ntime rescaling on the max-entropy measure:")
    print("  roof x1.0: mean=%.4f h_flow=%.6f product=%.6f"
          % (s1.mean_roof, s1.h_flow, s1.mean_roof * s1.h_flow))
    print("  roof x0.5: mean=%.4f h_flow=%.6f product=%.6f"
          % (s2.mean_roof, s2.h_flow, s2.mean_roof * s2.h_flow))


if __name__ == "__main__":
    main()
