"""Symbolic dynamics: kneading, admissibility, cylinders, orbits, horseshoes.

The oracles here are deliberately independent of the library internals:
at alpha = 1 with rational beta the map is exact in Fraction arithmetic,
so kneading words, lap counts, and preimage trees can be recomputed from
scratch and compared.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from geolorenz import (
    ConstantPotential,
    DomainError,
    EmptyHorseshoeError,
    InadmissibleWordError,
    InsufficientKneadingError,
    LorenzMap1D,
    PreconditionError,
    build_horseshoe,
    cylinder_interval,
    cylinder_levels,
    entropy_map,
    enumerate_periodic,
    equilibrium_measure,
    find_periodic_point,
    full_shift_sft,
    is_admissible,
    itinerary_of,
    kneading,
    least_rotation,
    pressure_transfer,
    restrict_horseshoe,
    strongly_connected_components,
)

BETA = Fraction(17, 10)


def exact_step(x):
    # f(x) = beta*x - sign(x) at alpha = 1, exact in rationals
    assert x != 0
    return BETA * x - (1 if x > 0 else -1)


def exact_itinerary(x, n):
    out = []
    for _ in range(n):
        assert x != 0
        out.append("R" if x > 0 else "L")
        x = exact_step(x)
    return "".join(out)


def exact_lap_count(n):
    """Number of monotone laps of f^n, via the exact preimage tree of 0.

    Interior breakpoints of f^n are the preimages of 0 up to order n-1;
    the lap count is their number plus one.
    """
    level = {Fraction(0)}
    breaks = set(level)
    for _ in range(n - 1):
        nxt = set()
        for t in level:
            right = (t + 1) / BETA
            if 0 < right <= 1:
                nxt.add(right)
            left = (t - 1) / BETA
            if -1 <= left < 0:
                nxt.add(left)
        breaks |= nxt
        level = nxt
    return len(breaks) + 1


def all_words(length):
    out = [""]
    for _ in range(length):
        out = [w + s for w in out for s in "LR"]
    return out


def test_kneading_matches_exact_arithmetic(lmap):
    kp = kneading(lmap, 64)
    assert kp.k_minus == exact_itinerary(Fraction(1), 64)
    assert kp.k_plus == exact_itinerary(Fraction(-1), 64)
    assert kp.depth == 64
    assert kp.k_minus.startswith("RRRL")
    assert kp.k_plus.startswith("LLLR")


def test_kneading_symmetric_pair(lmap):
    # odd symmetry of the map swaps the two kneading words
    kp = kneading(lmap, 48)
    swapped = kp.k_plus.translate(str.maketrans("LR", "RL"))
    assert kp.k_minus == swapped


def test_admissibility_equals_nonemptiness_exhaustive(lmap):
    kp = kneading(lmap, 16)
    for n in range(1, 11):
        for w in all_words(n):
            assert is_admissible(w, kp) == cylinder_interval(lmap, w).nonempty, w


def test_admissibility_equals_nonemptiness_other_beta():
    lm = LorenzMap1D(alpha=1.0, beta=1.9)
    kp = kneading(lm, 12)
    for n in range(1, 9):
        for w in all_words(n):
            assert is_admissible(w, kp) == cylinder_interval(lm, w).nonempty, w


def test_admissibility_needs_kneading_depth(lmap):
    kp = kneading(lmap, 4)
    with pytest.raises(InsufficientKneadingError):
        is_admissible("RLRLR", kp)


def test_lap_counts_match_exact_preimage_tree(lmap):
    for n in (13, 14):
        assert len(cylinder_levels(lmap, n)[n]) == exact_lap_count(n)


def test_lap_growth_rate_near_log_beta(lmap):
    n13 = exact_lap_count(13)
    n14 = exact_lap_count(14)
    rate = math.log(n14 / n13)
    assert rate == pytest.approx(math.log(1.7), rel=0.02)


def test_cylinder_nesting_and_disjointness(lmap):
    levels = cylinder_levels(lmap, 7)
    for n in range(1, 7):
        for w, (lo, hi) in levels[n].items():
            for s in "LR":
                child = levels[n + 1].get(w + s)
                if child is not None:
                    assert lo - 1e-14 <= child[0] and child[1] <= hi + 1e-14
        # distinct same-length cylinders have disjoint interiors
        spans = sorted(levels[n].values())
        for (a1, b1), (a2, b2) in zip(spans, spans[1:]):
            assert b1 <= a2 + 1e-14
        # width bound from the minimal slope
        for w, (lo, hi) in levels[n].items():
            assert hi - lo <= 2.0 * lmap.min_slope() ** (-n) + 1e-14


def test_cylinder_itinerary_prefix(lmap):
    levels = cylinder_levels(lmap, 6)
    for w, (lo, hi) in levels[6].items():
        mid = 0.5 * (lo + hi)
        assert itinerary_of(lmap, mid, 6) == w


def test_cylinder_interval_rejects_bad_words(lmap):
    with pytest.raises(PreconditionError):
        cylinder_interval(lmap, "")
    with pytest.raises(PreconditionError):
        cylinder_interval(lmap, "LRX")


def test_itinerary_flags_singular_orbit(lmap):
    with pytest.raises(DomainError):
        itinerary_of(lmap, 1e-16, 3)


def test_periodic_records(lmap):
    records = enumerate_periodic(lmap, 7)
    assert records
    seen = set()
    for rec in records:
        assert rec.word == least_rotation(rec.word)
        assert rec.word not in seen
        seen.add(rec.word)
        # coding consistency and closure
        assert itinerary_of(lmap, rec.point, rec.period) == rec.word
        orbit = lmap.iterate(rec.point, rec.period)
        assert abs(lmap(orbit[-1]) - rec.point) <= 1e-10
        assert rec.multiplier > math.sqrt(2.0) ** rec.period
    # deterministic ordering: by period then word
    keys = [(r.period, r.word) for r in records]
    assert keys == sorted(keys)


def test_no_fixed_points_but_rl_cycle(lmap):
    records = enumerate_periodic(lmap, 2)
    assert [r.word for r in records] == ["LR"]
    rec = records[0]
    assert rec.point == pytest.approx(-10.0 / 27.0, rel=1e-12)


def test_find_periodic_point_rejections(lmap):
    with pytest.raises(PreconditionError):
        find_periodic_point(lmap, "LRLR")  # not primitive
    with pytest.raises(InadmissibleWordError):
        find_periodic_point(lmap, "R")  # no fixed points in this model


def test_exact_periodic_point_value(lmap):
    # the LR point solves f(f(x)) = x through the L then R branch
    rec = find_periodic_point(lmap, "LR")
    x = Fraction(-10, 27)  # solves beta*(beta*x + 1) - 1 = x
    assert exact_itinerary(x, 2) == "LR"
    assert rec.point == pytest.approx(float(x), abs=1e-12)


def test_horseshoe_vertex_rule_brute_force(lmap):
    depth, gap = 8, 0.01
    hs = build_horseshoe(lmap, depth, gap)
    levels = cylinder_levels(lmap, depth)

    def dist0(span):
        lo, hi = span
        if lo <= 0.0 <= hi:
            return 0.0
        return min(abs(lo), abs(hi))

    expected = sorted(
        w for w, span in levels[depth].items()
        if dist0(span) >= gap and dist0(levels[depth - 1][w[1:]]) >= gap)
    assert list(hs.vertices) == expected


def test_horseshoe_edges_are_shift_compatible(lmap, horseshoe6):
    joined = cylinder_levels(lmap, 7)[7]
    for i, w in enumerate(horseshoe6.vertices):
        for s, j in horseshoe6.successors(i):
            v = horseshoe6.vertices[j]
            assert v == w[1:] + s
            assert w + s in joined


def test_horseshoe_cycle_orbit_avoids_gap(lmap):
    full = build_horseshoe(lmap, 10, 0.05)
    big = max(strongly_connected_components(full), key=len)
    hs = restrict_horseshoe(full, big)
    # walk the recurrent part until a vertex repeats, then check the
    # actual periodic orbit of the cycle word against the gap
    i, path = 0, []
    seen = {}
    while i not in seen:
        seen[i] = len(path)
        path.append(i)
        succs = hs.successors(i)
        assert succs, "stranded vertex inside a strongly connected component"
        i = succs[0][1]
    cycle = path[seen[i]:]
    word = "".join(hs.vertices[j][0] for j in cycle)
    rec = find_periodic_point(lmap, least_rotation(word))
    for x in rec.orbit_points(lmap):
        assert abs(x) >= full.x_gap


def test_horseshoe_small_gap_recovers_all_but_boundary(lmap):
    depth = 6
    hs = build_horseshoe(lmap, depth, 1e-9)
    levels = cylinder_levels(lmap, depth)

    def touches(span):
        return span[0] <= 0.0 <= span[1]

    excluded = {w for w, span in levels[depth].items()
                if touches(span) or touches(levels[depth - 1][w[1:]])}
    assert set(hs.vertices) == set(levels[depth]) - excluded
    # the boundary set is the only loss and it is small
    assert 0 < len(excluded) <= 2 * depth


def test_horseshoe_guards(lmap):
    with pytest.raises(PreconditionError):
        build_horseshoe(lmap, 1, 0.01)
    with pytest.raises(PreconditionError):
        build_horseshoe(lmap, 8, 0.0)
    with pytest.raises(EmptyHorseshoeError):
        build_horseshoe(lmap, 8, 0.9)


def test_far_horseshoe_degenerates_to_two_cycle(lmap):
    hs = build_horseshoe(lmap, 10, 0.2)
    comps = strongly_connected_components(hs)
    # partition check
    counted = sorted(i for comp in comps for i in comp)
    assert counted == list(range(hs.n_vertices))
    sizes = sorted(len(c) for c in comps)
    assert sizes[-1] == 2
    big = max(comps, key=len)
    words = {hs.vertices[i] for i in big}
    assert words == {w for w in hs.vertices
                     if w in ("LR" * 5, "RL" * 5)}


def test_restrict_horseshoe_keeps_adjacency(lmap, horseshoe12):
    comps = strongly_connected_components(horseshoe12)
    big = max(comps, key=len)
    sub = restrict_horseshoe(horseshoe12, big)
    assert sub.n_vertices == len(big)
    assert len(strongly_connected_components(sub)) == 1
    assert sub.edge_count() > 0


def test_full_shift_vertex_count_matches_admissible(lmap):
    for depth in (4, 8):
        sft = full_shift_sft(lmap, depth)
        assert sft.n_vertices == len(cylinder_levels(lmap, depth)[depth])
        assert 0.0 < sft.adjacency_density() <= 1.0


def test_matched_depth_entropy_bound(lmap):
    zero = ConstantPotential(0.0)
    for depth, gap in ((6, 0.002), (12, 0.002), (10, 0.05)):
        hs = build_horseshoe(lmap, depth, gap)
        h_sft = entropy_map(equilibrium_measure(lmap, hs, zero, t=0.0))
        ambient = pressure_transfer(lmap, zero, depth=depth).value
        assert h_sft <= ambient + 1e-6


def test_adjacency_matrix_agrees_with_successors(horseshoe6):
    mat = horseshoe6.adjacency_matrix()
    n = horseshoe6.n_vertices
    expected = np.zeros((n, n))
    for i in range(n):
        for _, j in horseshoe6.successors(i):
            expected[i, j] = 1.0
    assert np.array_equal(mat, expected)
    assert horseshoe6.edge_count() == int(expected.sum())
