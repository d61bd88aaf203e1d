"""Measure representations, entropy, integration, suspension, distance."""

import math

import numpy as np
import pytest

from geolorenz import (
    AtomicMeasure,
    ConstantPotential,
    CoordinatePotential,
    DepthTooShallowError,
    MarkovMeasure,
    PreconditionError,
    RoofFunction,
    SectionGridPotential,
    SingularDeltaMeasure,
    convex_combine,
    entropy_map,
    enumerate_periodic,
    equilibrium_measure,
    find_periodic_point,
    integrate_map,
    measure_distance,
    measure_from_payload,
    suspend,
)


@pytest.fixture(scope="module")
def parry(lmap, horseshoe12):
    return equilibrium_measure(lmap, horseshoe12, ConstantPotential(0.0),
                               t=0.0, label="parry")


@pytest.fixture(scope="module")
def tilted(lmap, horseshoe12, coord):
    return equilibrium_measure(lmap, horseshoe12, coord, t=1.0,
                               label="tilted")


@pytest.fixture(scope="module")
def atom(lmap):
    return AtomicMeasure(lmap, find_periodic_point(lmap, "LRR"))


def test_atomic_entropy_zero_exact(atom):
    assert entropy_map(atom) == 0.0


def test_atomic_integral_is_orbit_average(lmap, atom, coord):
    value, bound = integrate_map(coord, atom)
    pts = atom.points()
    assert bound == 0.0
    assert value == pytest.approx(float(np.mean(pts)), abs=1e-15)


def test_affinity_of_entropy_and_integral(parry, tilted, atom, coord):
    # entropy_map and integrate_map are affine over convex_combine
    weights = (0.22, 0.45, 0.33)
    parts = (parry, tilted, atom)
    mix = convex_combine(list(zip(weights, parts)))
    h_direct = entropy_map(mix)
    h_affine = sum(w * entropy_map(m) for w, m in zip(weights, parts))
    assert h_direct == pytest.approx(h_affine, abs=1e-10)
    v_direct, b_direct = integrate_map(coord, mix)
    v_affine = sum(w * integrate_map(coord, m)[0]
                   for w, m in zip(weights, parts))
    assert v_direct == pytest.approx(v_affine, abs=1e-10)
    assert b_direct >= 0.0


def test_convex_weights_validated(parry, atom):
    with pytest.raises(PreconditionError):
        convex_combine([(0.6, parry), (0.6, atom)])
    with pytest.raises(PreconditionError):
        convex_combine([(-0.2, parry), (1.2, atom)])
    with pytest.raises(PreconditionError):
        convex_combine([])
    # weight-1 singleton collapses to the component itself
    assert convex_combine([(1.0, parry)]) is parry


def test_markov_validation_errors(lmap, horseshoe12, parry):
    n = horseshoe12.n_vertices
    bad_rows = parry.probs.copy()
    bad_rows[0] *= 0.5
    with pytest.raises(PreconditionError):
        MarkovMeasure(lmap, horseshoe12, bad_rows, parry.stationary)
    bad_pi = parry.stationary.copy()
    bad_pi[0] += 0.01
    bad_pi /= bad_pi.sum()
    with pytest.raises(PreconditionError):
        MarkovMeasure(lmap, horseshoe12, parry.probs, bad_pi)
    with pytest.raises(PreconditionError):
        MarkovMeasure(lmap, horseshoe12, parry.probs[: n - 1],
                      parry.stationary)


def test_markov_off_adjacency_support_rejected(lmap, horseshoe12, parry):
    probs = parry.probs.copy()
    # force mass onto a missing edge
    dead = np.nonzero(horseshoe12.succ["L"] < 0)[0]
    if dead.size:
        i = int(dead[0])
        probs[i] = [0.5, 0.5]
        with pytest.raises(PreconditionError):
            MarkovMeasure(lmap, horseshoe12, probs, parry.stationary)


def test_cylinder_masses_are_probabilities(parry):
    for depth in (12, 14):
        masses = parry.cylinder_masses(depth)
        vals = np.array(list(masses.values()))
        assert np.all(vals >= 0.0)
        assert vals.sum() == pytest.approx(1.0, abs=1e-9)


def test_error_bound_honesty_over_seeded_potentials(parry):
    # refining the integration depth moves the value by less than the
    # coarse depth's reported bound, for 50 certified random potentials
    for seed in range(50):
        pot = SectionGridPotential.seeded(seed)
        v8, b8 = integrate_map(pot, parry, depth=8)
        v12, _ = integrate_map(pot, parry, depth=12)
        assert abs(v8 - v12) <= b8, "seed %d" % seed


def test_integrate_tol_guard(parry):
    pot = SectionGridPotential.seeded(3)
    with pytest.raises(DepthTooShallowError):
        integrate_map(pot, parry, depth=6, tol=1e-12)


def test_birkhoff_sampling_oracle(lmap, parry, coord):
    # seeded trajectory of the chain; its Birkhoff average of the
    # potential must approach the cylinder-midpoint integral
    rng = np.random.default_rng(12345)
    scheme_depth = parry.horseshoe.depth
    from geolorenz.symbolic import cylinder_levels

    spans = cylinder_levels(lmap, scheme_depth)[scheme_depth]
    i = int(np.argmax(parry.stationary))
    total, n_steps = 0.0, 20000
    for _ in range(n_steps):
        w = parry.horseshoe.vertices[i]
        lo, hi = spans[w]
        total += coord.value(0.5 * (lo + hi))
        p_l = parry.probs[i, 0]
        s = "L" if rng.random() < p_l else "R"
        i = int(parry.horseshoe.succ[s][i])
        assert i >= 0
    birkhoff = total / n_steps
    integral, _ = integrate_map(coord, parry)
    assert abs(birkhoff - integral) < 0.02


def test_suspension_abramov_scaling(parry, roof, coord):
    base = suspend(parry, roof, coord)
    for k in (2.0, 5.0):
        scaled = suspend(parry, roof.scaled(k), coord)
        assert scaled.mean_roof == pytest.approx(k * base.mean_roof,
                                                 rel=1e-12)
        assert scaled.h_flow == pytest.approx(base.h_flow / k, rel=1e-12)


def test_suspension_constant_roof_identity(parry, coord):
    # with a flat roof of height c0, flow entropy times c0 is map entropy
    flat = RoofFunction(c0=1.7, c1=0.0, eta0=0.5)
    stats = suspend(parry, flat, coord)
    assert stats.mean_roof == pytest.approx(1.7, abs=1e-12)
    assert stats.h_flow * 1.7 == pytest.approx(entropy_map(parry), abs=1e-12)


def test_ball_fraction_monotone_and_bounded(parry, roof, coord):
    stats = suspend(parry, roof, coord)
    prev = -1.0
    for b in (0.001, 0.01, 0.05, 0.2, 0.4, 0.49):
        f = stats.ball_fraction(b)
        assert 0.0 <= f <= 1.0
        assert f >= prev - 1e-12
        prev = f


def test_singular_delta_conventions(roof, coord):
    delta = SingularDeltaMeasure()
    stats = suspend(delta, roof, coord)
    assert stats.mean_roof == math.inf
    assert stats.h_flow == 0.0
    assert stats.ball_fraction(0.123) == 1.0
    assert stats.potential_integral == coord.value_at_sigma() == 0.0
    for op in (lambda: entropy_map(delta),
               lambda: integrate_map(coord, delta),
               lambda: measure_distance(delta, delta)):
        with pytest.raises(PreconditionError):
            op()


def test_measure_distance_is_a_metric(lmap, parry, tilted, atom):
    pool = [parry, tilted, atom,
            AtomicMeasure(lmap, find_periodic_point(lmap, "LR")),
            convex_combine([(0.5, parry), (0.5, atom)])]
    for a in pool:
        assert measure_distance(a, a) == 0.0
        for b in pool:
            dab = measure_distance(a, b)
            dba = measure_distance(b, a)
            assert dab == pytest.approx(dba, abs=1e-14)
            assert 0.0 <= dab <= 2.0 + 1e-12
            for c in pool:
                assert dab <= (measure_distance(a, c)
                               + measure_distance(c, b) + 1e-12)


def test_distance_separates_distinct_measures(parry, tilted, atom):
    assert measure_distance(parry, tilted) > 1e-4
    assert measure_distance(parry, atom) > 0.1


def test_payload_round_trip(lmap, parry, atom):
    mix = convex_combine([(0.25, atom), (0.75, parry)], label="mix")
    for m in (atom, parry, mix, SingularDeltaMeasure()):
        clone = measure_from_payload(lmap, m.to_payload())
        assert clone.id == m.id
        if not isinstance(m, SingularDeltaMeasure):
            assert measure_distance(m, clone) <= 1e-12


def test_equilibrium_is_stationary_markov(tilted):
    # construction already validates; spot-check the balance directly on
    # the measure's own (recurrent-part) horseshoe
    hs = tilted.horseshoe
    pi = tilted.stationary
    flow = np.zeros_like(pi)
    for k, s in enumerate("LR"):
        arr = hs.succ[s]
        ok = arr >= 0
        np.add.at(flow, arr[ok], pi[ok] * tilted.probs[ok, k])
    assert np.max(np.abs(flow - pi)) < 1e-10
