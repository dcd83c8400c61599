import math

import numpy as np
import pytest

from ballgrad.mobius import (
    MobiusMap,
    apply,
    chain_rule_check,
    hyperbolic_distance,
    poincare_distance_1d,
)
from ballgrad.numerics import QuadratureConfig, sample_ball, sample_sphere
from ballgrad.poisson import PoissonParams, extremal_field

TIGHT = QuadratureConfig(abs_tol=1e-13, rel_tol=1e-12)


def test_maps_zero_to_center_and_back():
    x = np.array([0.3, -0.2, 0.4])
    m = MobiusMap(3, x)
    assert np.max(np.abs(apply(m, np.zeros(3)) - x)) < 1e-15
    assert np.max(np.abs(apply(m, x))) < 1e-15


def test_center_zero_is_negation():
    m = MobiusMap(3, np.zeros(3))
    y = np.array([0.1, 0.5, -0.3])
    assert np.max(np.abs(apply(m, y) + y)) < 1e-15


def test_involution_on_random_pairs():
    for n in (2, 3, 4, 5):
        xs = sample_ball(n, 100, seed=50 + n, radius=0.9)
        ys = sample_ball(n, 100, seed=150 + n, radius=0.9)
        for x, y in zip(xs, ys):
            m = MobiusMap(n, x)
            assert np.max(np.abs(apply(m, apply(m, y)) - y)) < 1e-11


def test_boundary_preservation():
    for n in (2, 3, 5):
        xs = sample_ball(n, 20, seed=60 + n, radius=0.9)
        ys = sample_sphere(n, 20, seed=70 + n)
        for x, y in zip(xs, ys):
            image = apply(MobiusMap(n, x), y)
            assert abs(np.linalg.norm(image) - 1.0) < 1e-12


def test_rejects_exterior_center():
    with pytest.raises(ValueError):
        MobiusMap(2, np.array([1.0, 0.0]))


def test_distance_zero_and_radial_geodesic():
    assert hyperbolic_distance(3, np.zeros(3), np.zeros(3)) == 0.0
    # oracle: line integral of the density 2/(1 - t^2) gives log((1+r)/(1-r))
    for r in (0.1, 0.5, 0.9, 0.999):
        x = np.zeros(2)
        y = np.array([r, 0.0])
        want = math.log((1.0 + r) / (1.0 - r))
        assert abs(hyperbolic_distance(2, x, y) - want) < 1e-12 * max(1.0, want)


def test_distance_mobius_invariance():
    n = 3
    xs = sample_ball(n, 30, seed=81, radius=0.85)
    ys = sample_ball(n, 30, seed=82, radius=0.85)
    zs = sample_ball(n, 30, seed=83, radius=0.85)
    for x1, x2, a in zip(xs, ys, zs):
        m = MobiusMap(n, a)
        d0 = hyperbolic_distance(n, x1, x2)
        d1 = hyperbolic_distance(n, apply(m, x1), apply(m, x2))
        assert abs(d0 - d1) < 1e-10 * max(1.0, d0)


def test_distance_arccosh_formula():
    n = 4
    xs = sample_ball(n, 25, seed=91, radius=0.9)
    ys = sample_ball(n, 25, seed=92, radius=0.9)
    for x1, x2 in zip(xs, ys):
        d = hyperbolic_distance(n, x1, x2)
        s = 2.0 * float(np.sum((x1 - x2) ** 2)) / ((1.0 - x1 @ x1) * (1.0 - x2 @ x2))
        assert abs(d - math.acosh(1.0 + s)) < 1e-10 * max(1.0, d)


def test_distance_rejects_boundary():
    with pytest.raises(ValueError):
        hyperbolic_distance(2, np.array([1.0, 0.0]), np.zeros(2))


def test_poincare_1d_basics():
    assert poincare_distance_1d(0.37, 0.37) == 0.0
    for r in (0.2, 0.8, 0.99):
        want = math.log((1.0 + r) / (1.0 - r))
        assert abs(poincare_distance_1d(0.0, r) - want) < 1e-13


def test_poincare_1d_embeds_in_disc():
    for a, b in ((-0.5, 0.3), (0.1, 0.9), (-0.99, -0.2)):
        d1 = poincare_distance_1d(a, b)
        d2 = hyperbolic_distance(2, np.array([a, 0.0]), np.array([b, 0.0]))
        assert abs(d1 - d2) < 1e-12


def test_poincare_1d_rejects_endpoints():
    with pytest.raises(ValueError):
        poincare_distance_1d(1.0, 0.0)


def test_chain_rule_at_origin():
    fld = extremal_field(3, PoissonParams.harmonic(3), 1.2, TIGHT)
    assert chain_rule_check(fld, np.zeros(3)) < 1e-6


def test_chain_rule_random_hyperbolic_n3():
    fld = extremal_field(3, PoissonParams.hyperbolic(3), 1.0, TIGHT)
    for x in sample_ball(3, 3, seed=101, radius=0.6):
        assert chain_rule_check(fld, x) < 1e-5


def test_chain_rule_random_harmonic_n4():
    # the gradient identity is a property of the metric, not of the equation
    fld = extremal_field(4, PoissonParams.harmonic(4), 1.4, TIGHT)
    for x in sample_ball(4, 3, seed=102, radius=0.6):
        assert chain_rule_check(fld, x) < 1e-5
