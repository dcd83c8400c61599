"""Acceptance battery: one test per criterion, each printing a PASS/FAIL line.

Every tolerance is pinned here; nothing is deferred to calibration.  Run with
``pytest tests/test_acceptance.py -v -s`` to see the per-criterion lines.
"""

import math
from contextlib import contextmanager

import numpy as np
import pytest

from ballgrad.cap import cap_angle, cap_area
from ballgrad.cli import run
from ballgrad.constants import BoundKind, _phi_integral, d_n, khavinson_phi, pointwise_bound
from ballgrad.geometry import ball_constants, ratio_bounds, sigma_star_bounds_check
from ballgrad.mobius import MobiusMap, apply, chain_rule_check
from ballgrad.numerics import QuadratureConfig, sample_ball, sample_sphere
from ballgrad.poisson import (
    BoundaryFunction,
    PoissonParams,
    TransformField,
    extremal_field,
    mc_transform_gradient,
    transform_with_gradient,
    vector_transform,
)
from ballgrad.verify import (
    counterexample,
    default_pairs,
    default_points,
    verify_contraction,
    verify_inq1,
    verify_pde_residuals,
    verify_pointwise,
    verify_section3_auxiliaries,
    verify_thyp3,
    verify_vector,
)

TIGHT = QuadratureConfig(abs_tol=1e-13, rel_tol=1e-12)


@contextmanager
def criterion(number: int, label: str):
    try:
        yield
    except BaseException:
        print(f"[FAIL] criterion {number}: {label}")
        raise
    print(f"[PASS] criterion {number}: {label}")


def test_criterion_01_closed_form_constants():
    with criterion(1, "closed-form constants omega_1..5, 3/2, and 1.5396"):
        exact = {1: 2.0, 2: math.pi, 3: 4 * math.pi / 3, 4: math.pi**2 / 2,
                 5: 8 * math.pi**2 / 15}
        for n, want in exact.items():
            assert abs(ball_constants(n).omega_n - want) <= 1e-12 * want
        assert 2.0 * ball_constants(3).omega_star == 1.5
        assert f"{8.0 / (3.0 * math.sqrt(3.0)):.4f}" == "1.5396"


def test_criterion_02_ratio_bounds():
    with criterion(2, "Borgwardt/Alzer brackets for n=2..50 and the sigma_star chain"):
        for n in range(2, 51):
            blo, bhi = ratio_bounds(n, "borgwardt")
            alo, ahi = ratio_bounds(n, "alzer")
            exact = ball_constants(n).omega_star
            assert blo < exact < bhi
            assert alo < exact < ahi
            assert blo <= alo and ahi <= bhi
        for n in range(4, 51):
            assert sigma_star_bounds_check(n)


def test_criterion_03_cap_inversion():
    with criterion(3, "cap inversion round trip at 1e-12 over n=2..12 x 201 values"):
        grid = np.linspace(-1.0, 1.0, 201)
        for n in range(2, 13):
            for a in grid:
                a = float(a)
                gamma = cap_angle(n, a)
                assert abs(cap_area(n, gamma) - (1.0 + a) / 2.0) <= 1e-12
        for a in grid:
            a = float(a)
            assert abs(cap_angle(2, a) - (math.pi / 2 + math.pi * a / 2)) <= 1e-12
            assert abs(math.cos(cap_angle(3, a)) + a) <= 1e-12


def test_criterion_04_sharpness_oracle():
    with criterion(4, "quadrature gradient at 0 equals D_n to 1e-6 rel, MC within 4 SE"):
        gammas = (0.3, math.pi / 4, math.pi / 2, 2.0, 3.0)
        for n in (3, 4, 5):
            for gamma in gammas:
                for params in (PoissonParams.harmonic(n), PoissonParams.hyperbolic(n)):
                    fld = extremal_field(n, params, gamma, TIGHT)
                    _, grad = transform_with_gradient(fld, np.zeros(n))
                    got = float(np.linalg.norm(grad))
                    want = d_n(n, gamma, params.beta)
                    assert abs(got - want) <= 1e-6 * want
        # Monte Carlo referee on a subgrid (1e6 samples each)
        for n in (3, 4, 5):
            for gamma in (0.3, math.pi / 2, 2.0):
                params = PoissonParams.harmonic(n)
                fld = extremal_field(n, params, gamma)
                mc, se = mc_transform_gradient(fld, np.zeros(n))
                exact_vec = np.zeros(n)
                exact_vec[-1] = d_n(n, gamma, params.beta)
                assert np.all(np.abs(mc - exact_vec) <= 4.0 * se + 1e-12)


def test_criterion_05_counterexample():
    with criterion(5, "conjectured interior bound fails for n=4, 5 with ratio >= 1.05"):
        for n in (4, 5):
            cert = counterexample(n)
            assert cert.grad_norm > 2.0 * ball_constants(n).omega_star * (1.0 - cert.a**2)
            assert cert.violation_ratio >= 1.05
            rel = abs(cert.grad_norm - cert.closed_form_grad) / cert.closed_form_grad
            assert rel <= 1e-6
        cert = counterexample(4, gamma=0.3)
        assert abs(cert.violation_ratio - 1.153) < 2e-3


def test_criterion_06_cap_angle_inequalities():
    with criterion(6, "cap-angle inequality sweeps for n=4..12 plus n=3/n=2 modes"):
        for n in range(4, 13):
            rep = verify_inq1(n, 1001)
            assert rep.passed and rep.worst_margin >= -1e-10
        assert verify_inq1(3, 1001).passed
        assert verify_inq1(2, 1001).passed


def test_criterion_07_auxiliary_functions():
    with criterion(7, "auxiliary sign facts and FD-matched derivatives for n=4..12"):
        for n in range(4, 13):
            rep = verify_section3_auxiliaries(n, 201)
            assert rep.passed, (n, rep.witnesses)


def test_criterion_08_khavinson_profile():
    with criterion(8, "Khavinson profile: values, closed form, monotonicity"):
        for n in range(3, 11):
            assert abs(khavinson_phi(n, 0.0) - 2.0 / (n - 1)) <= 1e-10
        rs = np.linspace(0.01, 1.0, 101)
        worst = max(
            abs(_phi_integral(3, float(r))
                - (2.0 / 3.0) * ((1.0 + r * r / 3.0) ** 1.5 - 1.0 + r * r) / (r * r))
            for r in rs
        )
        assert worst <= 1e-8
        assert abs(khavinson_phi(3, 1.0) - 16.0 / (9.0 * math.sqrt(3.0))) <= 1e-10
        grid = np.linspace(0.0, 1.0, 101)
        vals3 = [khavinson_phi(3, float(r)) for r in grid]
        assert np.all(np.diff(vals3) > 0.0)
        for n in range(4, 11):
            vals = [khavinson_phi(n, float(r)) for r in grid]
            assert np.all(np.diff(vals) < 0.0)


def test_criterion_09_pde_residuals():
    with criterion(9, "PDE residuals below 1e-4 (1 + |h|) at 100 points, n=3 and 4"):
        for n in (3, 4):
            rep = verify_pde_residuals(n, count=100, seed=0, step=1e-4)
            assert rep.passed, (n, rep.witnesses)


def test_criterion_10_pointwise_bounds():
    with criterion(10, "pointwise bounds: sweeps, n=3 equality, n=4 strictness"):
        # equality witness: n = 3 hemisphere extremal at the origin
        fld3 = extremal_field(3, PoissonParams.harmonic(3), math.pi / 2, TIGHT)
        value, grad = transform_with_gradient(fld3, np.zeros(3))
        gnorm = float(np.linalg.norm(grad))
        assert abs(gnorm - 1.5) <= 1e-9
        assert abs(gnorm - 1.5 * (1.0 - value * value)) <= 1e-9
        # strictness witness: n = 4 at the origin, margin 2 - 16/(3 pi) ~ 0.3023
        fld4 = extremal_field(4, PoissonParams.harmonic(4), math.pi / 2, TIGHT)
        value4, grad4 = transform_with_gradient(fld4, np.zeros(4))
        margin4 = 2.0 * (1.0 - value4**2) - float(np.linalg.norm(grad4))
        assert abs(margin4 - (2.0 - 16.0 / (3.0 * math.pi))) <= 1e-8
        assert margin4 > 0.3
        # property sweeps over extremal and random zonal fields, both kinds
        zonal = lambda c: np.cos(2.0 * np.arccos(np.clip(c, -1.0, 1.0)) + 0.4)
        for n in (3, 4):
            for kind in (BoundKind.HARMONIC, BoundKind.HYPERBOLIC_HARMONIC):
                params = (PoissonParams.harmonic(n) if kind is BoundKind.HARMONIC
                          else PoissonParams.hyperbolic(n))
                fields = [extremal_field(n, params, g, TIGHT) for g in (math.pi / 2, 2.2)]
                fields.append(TransformField(
                    n=n, params=params, boundary=BoundaryFunction.zonal(n, zonal),
                    quadrature=TIGHT,
                ))
                rep = verify_pointwise(n, kind, fields,
                                       default_points(n, 15, "pointwise", 0))
                assert rep.passed, (n, kind, rep.witnesses)
        # the dimension-3 envelope on the extremal and a zonal field
        rep = verify_thyp3(fld3, default_points(3, 25, "thyp3", 0))
        assert rep.passed, rep.witnesses


def _odd_vector_fields(n, m):
    odd = [lambda c: c, lambda c: 4.0 * c**3 - 3.0 * c, lambda c: np.sin(1.5 * c)]
    scale = 1.0 / math.sqrt(m)
    return [
        TransformField(
            n=n, params=PoissonParams.harmonic(n),
            boundary=BoundaryFunction.zonal(n, lambda c, f=odd[i % 3]: scale * f(c)),
            quadrature=TIGHT,
        )
        for i in range(m)
    ]


def test_criterion_11_vector_valued():
    with criterion(11, "vector-valued bounds for m in {2,3}, n in {3,4} with h(0)=0 equality"):
        for n in (3, 4):
            for m in (2, 3):
                fields = _odd_vector_fields(n, m)
                pts = np.vstack([np.zeros(n), default_points(n, 12, "vector", 0)])
                rep = verify_vector(n, m, fields, pts, kind=BoundKind.HARMONIC)
                assert rep.passed, (n, m, rep.witnesses)
        vt = vector_transform(_odd_vector_fields(3, 2), np.zeros(3))
        assert float(np.linalg.norm(vt.value)) < 1e-12
        assert abs(vt.norm_gradient - vt.operator_norm) <= 1e-10


def test_criterion_12_contraction_and_mobius():
    with criterion(12, "distance contraction (100 pairs per config) and Moebius identities"):
        for n in (3, 4):
            fld = extremal_field(n, PoissonParams.hyperbolic(n), 2.0, TIGHT)
            rep = verify_contraction(n, fld, default_pairs(n, 100, "contraction", 0),
                                     constant=float(n - 1))
            assert rep.passed and rep.worst_margin >= -1e-8
        fld = extremal_field(3, PoissonParams.harmonic(3), 2.0, TIGHT)
        rep = verify_contraction(3, fld, default_pairs(3, 100, "contraction", 1),
                                 constant=2.0)
        assert rep.passed and rep.worst_margin >= -1e-8
        # Moebius identities at the stated tolerances
        for n in (2, 3, 4, 5):
            xs = sample_ball(n, 100, seed=200 + n, radius=0.9)
            ys = sample_ball(n, 100, seed=300 + n, radius=0.9)
            for x, y in zip(xs, ys):
                mob = MobiusMap(n, x)
                assert np.max(np.abs(apply(mob, apply(mob, y)) - y)) <= 1e-11
            for x, y in zip(xs[:20], sample_sphere(n, 20, seed=400 + n)):
                assert abs(np.linalg.norm(apply(MobiusMap(n, x), y)) - 1.0) <= 1e-12
        hyp = extremal_field(3, PoissonParams.hyperbolic(3), 1.0, TIGHT)
        for x in sample_ball(3, 3, seed=77, radius=0.6):
            assert chain_rule_check(hyp, x) <= 1e-5
        har = extremal_field(4, PoissonParams.harmonic(4), 1.4, TIGHT)
        for x in sample_ball(4, 3, seed=78, radius=0.6):
            assert chain_rule_check(har, x) <= 1e-5


def test_criterion_13_reproducibility(tmp_path):
    with criterion(13, "report-all --n-list 3,4,5 --seed 1 --no-timestamp is byte-identical"):
        out_a = tmp_path / "battery_a.json"
        out_b = tmp_path / "battery_b.json"
        argv = ["report-all", "--n-list", "3,4,5", "--seed", "1", "--no-timestamp"]
        assert run(argv + ["--out", str(out_a)]) == 0
        assert run(argv + ["--out", str(out_b)]) == 0
        assert out_a.read_bytes() == out_b.read_bytes()
