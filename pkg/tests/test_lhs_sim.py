import numpy as np
import pytest
from scipy import stats

from nodes.lhs_boundary import lhs_density
from nodes.lhs_sim import (
    LhsModel,
    density_value,
    execute,
    execute_verify,
    response,
    simulate,
    verify_model,
)
from nodes.quadrature import random_unit_vectors, sample_density
from nodes.steer_criteria import boundary_symmetric
from utils.errors import NotInModelRegion, NotOnBoundary, SingularT

WERNER = (-0.5, -0.5, -0.5)
AXES = np.eye(3)


# ── Model ───────────────────────────────────────────────────


def test_response_is_sign_of_projection():
    n = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0], [1.0, 0.0, 0.0]])
    assert response(np.diag([0.5, 0.5, -0.5]), [0, 0, 1], n).tolist() == [0, 1, 1]
    assert response(np.eye(3), [1, 0, 0], n).dtype == np.int8
    with pytest.raises(SingularT):
        response(np.diag([0.5, 0.0, 0.5]), [0, 0, 1], n)


def test_model_density():
    model = LhsModel(lhs_density(WERNER))
    n = random_unit_vectors(1, 10)
    assert np.allclose(density_value(model, n), 1 / (4 * np.pi))
    assert density_value(model, [0.0, 0.0, 1.0]).shape == (1,)
    assert np.array_equal(model.response([0, 1, 0], n), response(np.diag(WERNER), [0, 1, 0], n))


# ── Quadrature check ────────────────────────────────────────


def test_verify_werner():
    report = verify_model(WERNER, random_unit_vectors(2, 10))
    assert report.max_deviation <= 1e-10
    assert report.N_T == pytest.approx(1 / (4 * np.pi * 0.5 ** 4))
    assert len(report.rows) == 10


@pytest.mark.parametrize("u", [0.3, 2.5])
def test_verify_anisotropic_boundary_state(u):
    s1, s3 = boundary_symmetric(u)
    report = verify_model((s1, -s1, s3), random_unit_vectors(3, 8))
    assert report.max_deviation <= 1e-8
    for row in report.rows:
        assert row["probability"] == pytest.approx(0.5, abs=1e-8)


def test_verify_requires_boundary_state():
    with pytest.raises(NotOnBoundary):
        verify_model((-0.4, -0.4, -0.4), AXES)
    assert execute_verify((-0.4, -0.4, -0.4), AXES) is None


# ── Monte Carlo ─────────────────────────────────────────────


def test_simulate_werner_matches_quantum_predictions():
    report = simulate(WERNER, AXES, 40_000, seed=5)
    assert report.mixture_weight == 1.0
    assert report.max_z < 5
    for record, e in zip(report.records, AXES):
        assert record.p_hat == pytest.approx(0.5, abs=0.02)
        assert np.allclose(record.bloch_hat, -0.5 * e, atol=0.03)


def test_simulate_inside_uses_mixture():
    report = simulate((-0.25, -0.25, -0.25), AXES, 40_000, seed=6)
    assert report.boundary_scale == pytest.approx(2.0, abs=1e-9)
    assert report.mixture_weight == pytest.approx(0.5, abs=1e-9)
    assert report.max_z < 5
    for record, e in zip(report.records, AXES):
        assert np.allclose(record.bloch_hat, -0.25 * e, atol=0.03)


def test_simulate_is_reproducible():
    a = simulate(WERNER, AXES[:1], 5_000, seed=7)
    b = simulate(WERNER, AXES[:1], 5_000, seed=7)
    c = simulate(WERNER, AXES[:1], 5_000, seed=8)
    assert a.records[0].joint_hat == b.records[0].joint_hat
    assert a.records[0].joint_hat != c.records[0].joint_hat


def test_simulate_rejects_bad_input():
    with pytest.raises(NotInModelRegion):
        simulate((-0.6, -0.6, -0.6), AXES, 1000, seed=1)
    with pytest.raises(ValueError):
        simulate(WERNER, AXES, 1, seed=1)
    with pytest.raises(ValueError):
        simulate(WERNER, [[0, 0, 2]], 1000, seed=1)
    assert execute((-0.6, -0.6, -0.6), AXES, 1000, seed=1) is None


def test_werner_hidden_states_are_uniform():
    density = lhs_density(WERNER)
    sample = sample_density(density, density.bound, seed=9, count=5_000)
    assert sample.points.shape == (5_000, 3)
    # isotropic on the sphere: each coordinate is uniform on (-1, 1)
    for axis in range(3):
        assert stats.kstest(sample.points[:, axis], "uniform", args=(-1, 2)).pvalue > 1e-3
