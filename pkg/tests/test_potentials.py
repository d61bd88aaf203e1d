"""Potential classes: profiles, certified bounds, passage integrals, parsing."""

import json
import math

import mpmath
import numpy as np
import pytest

from geolorenz import (
    ConfigError,
    ConstantPotential,
    CoordinatePotential,
    PreconditionError,
    RoofFunction,
    SectionGridPotential,
    SingularBumpPotential,
    parse_potential_spec,
)


def test_constant_and_coordinate_values():
    c = ConstantPotential(0.75)
    assert c.value(0.3) == 0.75
    assert c.value_at_sigma() == 0.75
    assert c.midpoint_error(-0.5, 0.5) == 0.0
    x = CoordinatePotential()
    assert x.value(-0.42) == -0.42
    assert x.value_at_sigma() == 0.0
    assert x.lipschitz_bound() == 1.0


def test_bump_profile_shape():
    bump = SingularBumpPotential(2.0, 0.1)
    assert bump.value(0.05) == 2.0
    assert bump.value(-0.05) == 2.0
    assert bump.value(0.25) == 0.0
    assert bump.value_at_sigma() == 2.0
    # ramp is linear in log distance, halfway in log scale gives half level
    half = 0.1 * math.sqrt(2.0)
    assert bump.value(half) == pytest.approx(1.0, rel=1e-12)
    # continuity at both radii
    assert bump.value(0.1 * (1 + 1e-12)) == pytest.approx(2.0, abs=1e-9)
    assert bump.value(0.2 * (1 - 1e-12)) == pytest.approx(0.0, abs=1e-9)
    # 0 <= phi <= L everywhere
    xs = np.linspace(-1.0, 1.0, 10001)
    vals = bump.value(xs, np.zeros_like(xs))
    assert np.all(vals >= 0.0) and np.all(vals <= 2.0)


def test_bump_guards():
    with pytest.raises(PreconditionError):
        SingularBumpPotential(0.0, 0.1)
    with pytest.raises(PreconditionError):
        SingularBumpPotential(1.0, 0.6)


def test_bump_passage_integral_against_quadrature():
    # dwell model: c1 units of time per unit log-distance; the passage
    # integral is the profile integrated dt = c1 * db / b from the
    # closest approach out to where the profile dies
    bump = SingularBumpPotential(2.2, 0.1)
    roof = RoofFunction(c0=1.0, c1=1.3, eta0=0.5)

    def oracle(x):
        a = abs(x)
        if a >= 2 * bump.eta:
            return 0.0
        return float(mpmath.quad(
            lambda b: bump.value(float(b)) * 1.3 / float(b),
            [a, bump.eta, 2 * bump.eta]))

    for x in (0.003, 0.05, 0.1, 0.13, 0.199, 0.3, -0.08):
        assert bump.passage_integral(x, roof) == pytest.approx(
            oracle(x), rel=1e-9, abs=1e-12)


def test_bump_passage_requires_resolving_roof():
    bump = SingularBumpPotential(1.0, 0.3)  # 2*eta = 0.6 > eta0 = 0.5
    roof = RoofFunction(c0=1.0, c1=1.0, eta0=0.5)
    with pytest.raises(PreconditionError):
        bump.passage_integral(0.1, roof)


def test_midpoint_error_honesty():
    pots = [SingularBumpPotential(2.0, 0.1), CoordinatePotential(),
            SectionGridPotential.seeded(7)]
    rng = np.random.default_rng(0)
    for pot in pots:
        for _ in range(200):
            lo = rng.uniform(-1.0, 0.99)
            hi = lo + rng.uniform(1e-4, 0.2)
            hi = min(hi, 1.0)
            mid = 0.5 * (lo + hi)
            err = pot.midpoint_error(lo, hi)
            for t in np.linspace(lo, hi, 21):
                assert abs(pot.value(float(t)) - pot.value(mid)) <= err + 1e-12


def test_seeded_grid_is_deterministic_and_bounded():
    a = SectionGridPotential.seeded(11)
    b = SectionGridPotential.seeded(11)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, SectionGridPotential.seeded(12).values)
    assert np.max(np.abs(a.values)) <= 0.3 + 1e-12
    # declared Lipschitz constant is honest on samples
    dx = a.xs[1] - a.xs[0]
    slopes = np.abs(np.diff(a.values, axis=0)) / dx
    assert np.max(slopes) <= a.lipschitz + 1e-9


def test_grid_validation():
    with pytest.raises(PreconditionError):
        SectionGridPotential([0.0, 1.0], [0.0], [[1.0], [2.0], [3.0]], 1.0)
    with pytest.raises(PreconditionError):
        SectionGridPotential([1.0, 0.0], [0.0, 1.0],
                             [[1.0, 1.0], [2.0, 2.0]], 1.0)
    with pytest.raises(PreconditionError):
        SectionGridPotential([0.0, 1.0], [0.0, 1.0],
                             [[1.0, 1.0], [2.0, 2.0]], -1.0)


def test_parse_potential_specs_round_trip(tmp_path):
    assert isinstance(parse_potential_spec("const:0.5"), ConstantPotential)
    assert isinstance(parse_potential_spec("coord:x"), CoordinatePotential)
    assert isinstance(parse_potential_spec("coord"), CoordinatePotential)
    bump = parse_potential_spec("bump:2.23,0.1")
    assert isinstance(bump, SingularBumpPotential)
    assert bump.level == 2.23 and bump.eta == 0.1
    grid = parse_potential_spec("grid:seed:5")
    assert isinstance(grid, SectionGridPotential)
    path = tmp_path / "pot.json"
    path.write_text(json.dumps(grid.to_payload()))
    loaded = parse_potential_spec("grid:%s" % path)
    assert np.array_equal(loaded.values, grid.values)


@pytest.mark.parametrize("bad", [
    "", "const", "const:x", "coord:y", "bump:1.0", "bump:a,b",
    "bump:1.0,0.9", "grid:", "grid:seed:abc", "grid:/nonexistent.json",
    "mystery:1",
])
def test_parse_potential_spec_rejects(bad):
    with pytest.raises(ConfigError):
        parse_potential_spec(bad)
