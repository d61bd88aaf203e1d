"""Tour of the one-dimensional model map and its periodic orbits.

The section map has two increasing branches separated by a discontinuity
at the origin. Everything downstream (symbolic dynamics, measures,
pressure) is built on the handful of facts demonstrated here: branch
monotonicity, uniform expansion, and the checkable axiom report.
"""

import math

from geolorenz import (LorenzMap1D, SkewProductReturnMap,
                       enumerate_periodic, kneading, validate_model)


def main():
    lmap = LorenzMap1D(alpha=1.0, beta=1.7)
    print("map: f(x) = sign(x) * (%.1f*|x|^%.1f - 1)" % (lmap.beta, lmap.alpha))
    print("minimum slope %.4f (uniform expansion needs > sqrt 2 = %.4f)"
          % (lmap.min_slope(), math.sqrt(2.0)))

    # a short orbit from a generic point
    orbit = lmap.iterate(0.3, 8)
    print("\norbit of 0.3:")
    for i, x in enumerate(orbit):
        print("  f^%d = %+.6f  (%s)" % (i, x, "R" if x > 0 else "L"))

    # the axiom report: every hypothesis the later computations rely on
    skew = SkewProductReturnMap(lmap, rho=0.3, c_H=0.5)
    report = validate_model(skew, grid_density=2000)
    print("\naxiom report (all_pass=%s):" % report.all_pass)
    for check in report.checks:
        print("  %-28s %s" % (check["name"],
                              "ok" if check["passed"] else "FAIL"))

    # kneading data: itineraries of the two boundary orbits
    kn = kneading(lmap, depth=16)
    print("\nkneading words (depth 16):")
    print("  from  1: %s..." % kn.k_minus[:16])
    print("  from -1: %s..." % kn.k_plus[:16])

    # periodic points, sorted by period then word
    print("\nperiodic orbits up to period 5:")
    print("  %-8s %-6s %-12s %s" % ("word", "period", "point", "multiplier"))
    for rec in enumerate_periodic(lmap, 5):
        print("  %-8s %-6d %+.8f  %.4f"
              % (rec.word, rec.period, rec.point, rec.multiplier))


if __name__ == "__main__":
    main()
