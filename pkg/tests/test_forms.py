import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from accretive import (
    FormConstants,
    OperatorMatrix,
    assemble_elliptic,
    estimate_constants,
    make_grid,
    numerical_range,
    sector_parameters,
    sobolev_gram,
    verify_split_conditions,
)
from accretive.exceptions import NonAccretive, NonpositiveEpsilon
from accretive.forms import sector_vertex
from conftest import WORKED_2X2, random_accretive

positive = st.floats(0.05, 20.0)


def laplacian_split(n):
    g = make_grid(0, 1, n)
    T = assemble_elliptic(g, np.ones(n))
    A = OperatorMatrix(np.eye(n, dtype=complex), grid=g)
    return g, T, A, sobolev_gram(g, 1), sobolev_gram(g, 0)


def test_identity_perturbation_has_unit_coercivity():
    _, T, A, gp, g0 = laplacian_split(16)
    constants = estimate_constants(T, A, gp, g0)
    assert constants.perturbation_coercivity == pytest.approx(1.0, abs=1e-12)


def test_main_coercivity_closed_form():
    # 3x3 pencil diagonalizes in the sine basis: C0 = lam1 / (1 + lam1)
    _, T, A, gp, g0 = laplacian_split(3)
    constants = estimate_constants(T, A, gp, g0)
    lam1 = 16 * (2 - np.sqrt(2))
    assert constants.main_coercivity == pytest.approx(lam1 / (1 + lam1), abs=1e-10)
    assert constants.main_coercivity == pytest.approx(0.9036, abs=5e-5)


def test_nonaccretive_perturbation_rejected():
    g, T, _, gp, g0 = laplacian_split(8)
    bad = OperatorMatrix(-np.eye(8, dtype=complex), grid=g)
    with pytest.raises(NonAccretive):
        estimate_constants(T, bad, gp, g0)


def test_constants_scale_covariance():
    g, T, A, gp, g0 = laplacian_split(12)
    base = estimate_constants(T, A, gp, g0)
    scaled = estimate_constants(
        OperatorMatrix(3.5 * T.entries, grid=g), A, gp, g0
    )
    assert scaled.main_coercivity == pytest.approx(3.5 * base.main_coercivity, rel=1e-12)
    assert scaled.main_bound == pytest.approx(3.5 * base.main_bound, rel=1e-12)
    assert scaled.perturbation_coercivity == pytest.approx(
        base.perturbation_coercivity, rel=1e-12
    )


def test_form_bound_is_the_sum():
    c = FormConstants(1.0, 2.0, 3.0, 4.0)
    assert c.form_bound == 6.0


def test_sector_worked_example():
    c = FormConstants(1.0, 1.0, 1.0, 1.0)
    sector = sector_parameters(c)
    assert sector.critical_epsilon == pytest.approx(np.sqrt(2) - 1, abs=1e-12)
    assert sector.epsilon == sector.critical_epsilon
    assert sector.cot_half_angle == pytest.approx(1 / (sector.epsilon / 2 + 1), abs=1e-12)
    assert sector.cot_half_angle == pytest.approx(0.828427, abs=1e-6)
    assert abs(sector.vertex) <= 1e-12
    assert sector.half_angle == pytest.approx(np.arctan(1.207107), abs=1e-6)
    assert sector.half_angle == pytest.approx(0.878961, abs=1e-6)


def test_sector_small_main_bound_limit():
    c = FormConstants(2.0, 1e-14, 0.5, 1.0)
    sector = sector_parameters(c)
    assert sector.critical_epsilon == pytest.approx(np.sqrt(2.0 / 0.5), rel=1e-6)


def test_sector_rejects_nonpositive_epsilon():
    with pytest.raises(NonpositiveEpsilon):
        sector_parameters(FormConstants(1, 1, 1, 1), epsilon=0.0)


@settings(max_examples=50, deadline=None)
@given(c0=positive, c1=positive, c2=positive, c3=positive)
def test_sector_vertex_root_and_sign_split(c0, c1, c2, c3):
    c = FormConstants(c0, c1, c2, c3)
    sector = sector_parameters(c)
    xi = sector.critical_epsilon
    assert xi > 0
    assert abs(sector_vertex(c, xi)) <= 1e-12 * max(1.0, c2)
    assert sector_vertex(c, xi / 2) < 0
    assert sector_vertex(c, 2 * xi) > 0
    assert 0 < sector.half_angle < np.pi / 2


def test_numerical_range_vertical_segment():
    sample = numerical_range(WORKED_2X2, m_angles=16, m_random=64, seed=1)
    assert np.allclose(sample.points.real, 2.0, atol=1e-12)
    assert np.max(np.abs(sample.points.imag)) <= 1.0 + 1e-12
    assert sample.aperture == pytest.approx(np.arctan(0.5), abs=1e-12)
    # the segment corners are among the boundary points
    assert np.max(sample.boundary.imag) == pytest.approx(1.0, abs=1e-12)
    assert np.min(sample.boundary.imag) == pytest.approx(-1.0, abs=1e-12)


def test_numerical_range_hermitian_is_real():
    H = np.diag([1.0, 2.0, 5.0]).astype(complex)
    sample = numerical_range(H, m_angles=16, m_random=32, seed=0)
    assert np.max(np.abs(sample.points.imag)) <= 1e-12
    assert sample.aperture <= 1e-12


def test_numerical_range_points_are_rayleigh_quotients():
    rng = np.random.default_rng(5)
    W = random_accretive(rng, 10)
    sample = numerical_range(W, m_angles=8, m_random=16, seed=2)
    for z, v in zip(sample.points, sample.vectors):
        v = v / np.linalg.norm(v)
        assert abs(v.conj() @ W @ v - z) <= 1e-12 * max(1.0, abs(z))


def test_numerical_range_rejects_few_angles():
    with pytest.raises(ValueError):
        numerical_range(WORKED_2X2, m_angles=4)


def test_range_inside_sector_for_model(model_64):
    constants = estimate_constants(
        model_64.main, model_64.perturbation, model_64.gram_plus, model_64.gram0
    )
    sector = sector_parameters(constants)
    sample = numerical_range(model_64.operator, m_angles=32, m_random=128, seed=9)
    slope = 1.0 / sector.cot_half_angle
    slack = slope * (sample.points.real - sector.vertex) - np.abs(sample.points.imag)
    assert np.min(slack) >= -1e-9


def test_split_conditions_pass_for_hermitian_split():
    _, T, A, gp, g0 = laplacian_split(16)
    constants = estimate_constants(T, A, gp, g0)
    margins = verify_split_conditions(T, A, gp, g0, constants, trials=100, seed=3)
    assert margins.passed(1e-9)
    assert margins.worst >= -1e-9


def test_split_conditions_slack_grows_when_loosened():
    _, T, A, gp, g0 = laplacian_split(12)
    tight = estimate_constants(T, A, gp, g0)
    loose = FormConstants(
        0.9 * tight.main_coercivity,
        tight.main_bound / 0.9,
        0.9 * tight.perturbation_coercivity,
        tight.perturbation_bound / 0.9,
    )
    m_tight = verify_split_conditions(T, A, gp, g0, tight, trials=50, seed=4)
    m_loose = verify_split_conditions(T, A, gp, g0, loose, trials=50, seed=4)
    assert m_loose.main_coercive > m_tight.main_coercive
    assert m_loose.main_bounded > m_tight.main_bounded
    assert m_loose.perturbation_coercive > m_tight.perturbation_coercive
    assert m_loose.perturbation_bounded > m_tight.perturbation_bounded
