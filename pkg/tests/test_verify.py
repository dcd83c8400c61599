import math

import numpy as np
import pytest

from ballgrad.constants import BoundKind
from ballgrad.geometry import ball_constants
from ballgrad.numerics import QuadratureConfig
from ballgrad.poisson import BoundaryFunction, PoissonParams, TransformField, extremal_field
from ballgrad.verify import (
    counterexample,
    default_pairs,
    default_points,
    explore_question,
    verify_contraction,
    verify_inq1,
    verify_pde_residuals,
    verify_pointwise,
    verify_section3_auxiliaries,
    verify_sharpness,
    verify_thyp3,
    verify_vector,
)

TIGHT = QuadratureConfig(abs_tol=1e-13, rel_tol=1e-12)


# ---------------------------------------------------------------------------
# counterexample


def test_counterexample_n4_certificate():
    cert = counterexample(4)
    assert cert.violation_ratio >= 1.05
    assert cert.grad_norm > cert.liu_rhs
    rel = abs(cert.grad_norm - cert.closed_form_grad) / cert.closed_form_grad
    assert rel < 1e-6


def test_counterexample_n4_gamma03_matches_cn_prediction():
    # oracle: ratio = n C_n(gamma) / (4 omega_star) with C_4(0.3) from closed forms
    cert = counterexample(4, gamma=0.3)
    a0_val = 0.15 - math.sin(0.6) / 4.0
    area = (2.0 / math.pi) * a0_val
    c4 = (1.0 / 3.0) * math.sin(0.3) ** 3 / (a0_val * (1.0 - area))
    want = 4.0 * c4 / (4.0 * ball_constants(4).omega_star)
    assert abs(cert.violation_ratio - want) < 1e-6
    assert abs(cert.violation_ratio - 1.153) < 2e-3


def test_counterexample_n5():
    cert = counterexample(5)
    assert cert.violation_ratio >= 1.05
    rel = abs(cert.grad_norm - cert.closed_form_grad) / cert.closed_form_grad
    assert rel < 1e-6


def test_counterexample_rejects_n3():
    with pytest.raises(ValueError):
        counterexample(3)


# ---------------------------------------------------------------------------
# cap-angle inequality sweeps


def test_inq1_standard_dimensions():
    for n in (4, 5, 8):
        rep = verify_inq1(n, 1001)
        assert rep.passed, rep.witnesses
        assert rep.worst_margin >= -1e-10


def test_inq1_identity_mode_n3():
    rep = verify_inq1(3, 501)
    assert rep.passed
    assert "identity" in rep.grid


def test_inq1_reversed_mode_n2():
    rep = verify_inq1(2, 501)
    assert rep.passed
    assert "reversed" in rep.grid


def test_inq1_equality_cases_present():
    rep = verify_inq1(4, 101)
    assert rep.passed
    # equality margins are recorded as 1e-9 - |lhs - rhs| entries; if any were
    # broken the report would have failed


def test_inq1_rejects_bad_grid():
    with pytest.raises(ValueError):
        verify_inq1(4, 2)


# ---------------------------------------------------------------------------
# auxiliary function analysis


def test_aux3_sign_facts_n4():
    rep = verify_section3_auxiliaries(4, 201)
    assert rep.passed, rep.witnesses
    # frozen oracle values for n = 4 (sigma_star = 2/pi):
    ss = ball_constants(4).sigma_star
    assert abs(ss - 2.0 / math.pi) < 1e-15
    assert 2.0 - 3.0 * math.pi * math.pi / 16.0 > 0.0  # h''(0)
    assert 2.0 - 3.0 * math.pi / 4.0 < 0.0  # h'(1)


def test_aux3_all_dimensions():
    for n in range(4, 13):
        rep = verify_section3_auxiliaries(n, 101)
        assert rep.passed, (n, rep.witnesses)


def test_aux3_rejects_n3():
    with pytest.raises(ValueError):
        verify_section3_auxiliaries(3)


# ---------------------------------------------------------------------------
# pointwise bounds


def test_pointwise_harmonic_n3_equality_at_origin():
    fld = extremal_field(3, PoissonParams.harmonic(3), math.pi / 2, TIGHT)
    rep = verify_pointwise(3, BoundKind.HARMONIC, [fld], np.zeros((1, 3)))
    assert rep.passed
    # n = 3 hemisphere: |grad h(0)| = 3/2 = (3/2)(1 - h(0)^2) is an equality
    assert abs(rep.worst_margin) < 1e-9


def test_pointwise_harmonic_n4_strict_at_origin():
    # strictness margin at the origin for n = 4: 2 (1 - C_4(pi/2)) = 2 - 16/(3 pi)
    fld = extremal_field(4, PoissonParams.harmonic(4), math.pi / 2, TIGHT)
    rep = verify_pointwise(4, BoundKind.HARMONIC, [fld], np.zeros((1, 4)))
    want = 2.0 - 16.0 / (3.0 * math.pi)
    assert rep.passed
    assert abs(rep.worst_margin - want) < 1e-8
    assert rep.worst_margin > 0.3


def test_pointwise_sweeps_hold():
    for n, kind in ((3, BoundKind.HARMONIC), (4, BoundKind.HARMONIC),
                    (3, BoundKind.HYPERBOLIC_HARMONIC), (4, BoundKind.HYPERBOLIC_HARMONIC)):
        params = PoissonParams.harmonic(n) if kind is BoundKind.HARMONIC \
            else PoissonParams.hyperbolic(n)
        fields = [extremal_field(n, params, g, TIGHT) for g in (math.pi / 2, 2.2)]
        rep = verify_pointwise(n, kind, fields, default_points(n, 12, "pointwise", 3))
        assert rep.passed, rep.witnesses


def test_pointwise_constant_data_trivial():
    fld = TransformField(
        n=3, params=PoissonParams.harmonic(3),
        boundary=BoundaryFunction.zonal(3, lambda c: 0.5 * np.ones_like(c)),
        quadrature=TIGHT,
    )
    rep = verify_pointwise(3, BoundKind.HARMONIC, [fld], default_points(3, 5, "pointwise", 4))
    assert rep.passed
    assert rep.worst_margin > 0.5


# ---------------------------------------------------------------------------
# dimension-3 envelope


def test_thyp3_extremal_inside_envelope():
    fld = extremal_field(3, PoissonParams.harmonic(3), math.pi / 2, TIGHT)
    x = np.array([0.0, 0.0, 0.5])
    rep = verify_thyp3(fld, x[None, :])
    assert rep.passed, rep.witnesses


def test_thyp3_constant_field_inside_envelope():
    fld = TransformField(
        n=3, params=PoissonParams.harmonic(3),
        boundary=BoundaryFunction.zonal(3, lambda c: 0.3 * np.ones_like(c)),
        quadrature=TIGHT,
    )
    rep = verify_thyp3(fld, default_points(3, 6, "thyp3", 5))
    assert rep.passed


def test_thyp3_random_zonal_sweep():
    profile = lambda c: np.cos(2.0 * np.arccos(np.clip(c, -1.0, 1.0)) + 0.7)
    fld = TransformField(
        n=3, params=PoissonParams.harmonic(3),
        boundary=BoundaryFunction.zonal(3, profile), quadrature=TIGHT,
    )
    rep = verify_thyp3(fld, default_points(3, 25, "thyp3", 6))
    assert rep.passed, rep.witnesses


def test_thyp3_rejects_wrong_dimension():
    fld = extremal_field(4, PoissonParams.harmonic(4), 1.0)
    with pytest.raises(ValueError):
        verify_thyp3(fld, np.zeros((1, 4)))


# ---------------------------------------------------------------------------
# vector-valued bounds


def _vector_fields(n, m, params):
    odd = [lambda c: c, lambda c: 4.0 * c**3 - 3.0 * c, lambda c: np.sin(1.5 * c)]
    scale = 1.0 / math.sqrt(m)
    return [
        TransformField(
            n=n, params=params,
            boundary=BoundaryFunction.zonal(n, lambda c, f=odd[i % 3]: scale * f(c)),
            quadrature=TIGHT,
        )
        for i in range(m)
    ]


def test_vector_sweeps_hold():
    for n, m in ((3, 2), (4, 3)):
        fields = _vector_fields(n, m, PoissonParams.harmonic(n))
        pts = np.vstack([np.zeros(n), default_points(n, 8, "vector", 7)])
        rep = verify_vector(n, m, fields, pts, kind=BoundKind.HARMONIC)
        assert rep.passed, rep.witnesses


def test_vector_zero_point_equality():
    # odd data vanishes at 0 where |grad |h|| and |Dh| must agree
    from ballgrad.poisson import vector_transform

    fields = _vector_fields(3, 2, PoissonParams.harmonic(3))
    vt = vector_transform(fields, np.zeros(3))
    assert np.linalg.norm(vt.value) < 1e-12
    assert abs(vt.norm_gradient - vt.operator_norm) < 1e-10


def test_vector_hyperbolic_kind():
    fields = _vector_fields(3, 2, PoissonParams.hyperbolic(3))
    rep = verify_vector(3, 2, fields, default_points(3, 6, "vector", 8),
                        kind=BoundKind.HYPERBOLIC_HARMONIC)
    assert rep.passed, rep.witnesses


def test_vector_rejects_wrong_count():
    fields = _vector_fields(3, 2, PoissonParams.harmonic(3))
    with pytest.raises(ValueError):
        verify_vector(3, 3, fields, np.zeros((1, 3)))


# ---------------------------------------------------------------------------
# contraction


def test_contraction_identical_points():
    fld = extremal_field(3, PoissonParams.hyperbolic(3), 1.5, TIGHT)
    x = np.array([0.2, 0.1, -0.4])
    rep = verify_contraction(3, fld, [(x, x)])
    assert rep.passed
    assert abs(rep.worst_margin) < 1e-12


def test_contraction_hyperbolic_sweeps():
    for n in (3, 4):
        fld = extremal_field(n, PoissonParams.hyperbolic(n), 2.0, TIGHT)
        rep = verify_contraction(n, fld, default_pairs(n, 25, "contraction", 9))
        assert rep.passed, rep.witnesses


def test_contraction_n3_harmonic_constant_two():
    fld = extremal_field(3, PoissonParams.harmonic(3), 2.0, TIGHT)
    rep = verify_contraction(3, fld, default_pairs(3, 25, "contraction", 10), constant=2.0)
    assert rep.passed, rep.witnesses


# ---------------------------------------------------------------------------
# question explorer and battery helpers


def test_question_holds_at_origin():
    # at x = 0 the candidate inequality is the proved zero-point bound
    rep = explore_question(3, candidate_count=2, seed=1, points_per_field=1,
                           threads=1)
    for n in (3, 4):
        fld = extremal_field(n, PoissonParams.harmonic(n), 1.0, TIGHT)
        from ballgrad.poisson import transform_with_gradient

        value, grad = transform_with_gradient(fld, np.zeros(n))
        bound = (n / 2.0) * (1.0 - value * value)
        assert np.linalg.norm(grad) <= bound + 1e-10
    assert "evidence" in rep.grid


def test_question_explorer_finds_small_cap_candidates():
    # the gamma = 0.6 harmonic extremal violates the candidate bound at
    # interior points (margin about -0.094 near r = 0.46 on the axis); the
    # explorer must surface it as a re-verified counterexample candidate
    rep = explore_question(3, candidate_count=2, seed=1, points_per_field=10)
    assert not rep.passed
    assert rep.worst_margin < -1e-3
    assert rep.witnesses, "candidates must be reported as witnesses"


def test_question_candidate_survives_direct_check():
    from ballgrad.poisson import transform_with_gradient

    fld = extremal_field(3, PoissonParams.harmonic(3), 0.6, TIGHT)
    x = np.array([0.0, 0.0, 0.46])
    value, grad = transform_with_gradient(fld, x)
    bound = 1.5 * (1.0 - value * value) / (1.0 - 0.46**2)
    assert float(np.linalg.norm(grad)) > bound + 0.05


def test_question_rejects_n2():
    with pytest.raises(ValueError):
        explore_question(2)


def test_sharpness_report():
    rep = verify_sharpness(3, gammas=(0.3, 2.0))
    assert rep.passed, rep.witnesses


def test_pde_residual_report():
    rep = verify_pde_residuals(3, count=5, seed=2)
    assert rep.passed, rep.witnesses


def test_reports_are_deterministic():
    a = explore_question(3, candidate_count=2, seed=5, points_per_field=4)
    b = explore_question(3, candidate_count=2, seed=5, points_per_field=4)
    assert a.worst_margin == b.worst_margin
    assert a.witnesses == b.witnesses


def test_threaded_sweep_matches_sequential():
    fld = extremal_field(3, PoissonParams.hyperbolic(3), 2.0, TIGHT)
    pts = default_points(3, 8, "pointwise", 11)
    seq = verify_pointwise(3, BoundKind.HYPERBOLIC_HARMONIC, [fld], pts, threads=1)
    par = verify_pointwise(3, BoundKind.HYPERBOLIC_HARMONIC, [fld], pts, threads=4)
    assert seq.worst_margin == par.worst_margin
    assert seq.witnesses == par.witnesses
