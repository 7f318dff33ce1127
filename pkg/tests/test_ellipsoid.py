import math

import numpy as np
import pytest

from nodes.ellipsoid import (
    execute,
    steered_state,
    steering_ellipsoid,
    surface_grid,
    surface_radius,
    tstate_separable,
)
from nodes.qstate import TState, TwoQubitState, canonical_form, make_state, make_tstate
from nodes.quadrature import random_unit_vectors
from tests.conftest import random_rotation
from utils.errors import AliceBlochUnit, DegenerateEllipsoid, DegenerateOutcome

ZERO = np.zeros(3)


# ── Conditional states ──────────────────────────────────────


def test_tstate_steered_state():
    t = (0.2, -0.3, 0.4)
    p, b = steered_state(make_tstate(t).to_state(), [0, 0, 1])
    assert p == pytest.approx(0.5)
    assert np.allclose(b, (0, 0, 0.4))


def test_product_state_is_not_steered():
    a, b = np.array([0, 0, 0.5]), np.array([0.1, 0, 0])
    state = make_state(a, b, np.outer(a, b))
    for e in random_unit_vectors(2, 5):
        _, be = steered_state(state, e)
        assert np.allclose(be, b)


def test_singlet_perfect_anticorrelation():
    p, b = steered_state(make_tstate((-1, -1, -1)).to_state(), [1, 0, 0])
    assert p == pytest.approx(0.5)
    assert np.allclose(b, (-1, 0, 0))


def test_steered_state_errors():
    pure_a = make_state([0, 0, 1], ZERO, np.zeros((3, 3)))
    with pytest.raises(DegenerateOutcome):
        steered_state(pure_a, [0, 0, -1])
    with pytest.raises(ValueError):
        steered_state(pure_a, [0, 0, 2])


def test_steered_states_stay_in_bloch_ball(random_state):
    for _ in range(50):
        state = random_state()
        for e in random_unit_vectors(3, 20):
            _, b = steered_state(state, e)
            assert np.linalg.norm(b) <= 1 + 1e-12


# ── Ellipsoid ───────────────────────────────────────────────


def test_tstate_ellipsoid():
    ell = steering_ellipsoid(TState((0.2, -0.5, 0.3)).to_state())
    assert np.allclose(ell.center, 0)
    assert np.allclose(ell.Q, np.diag([0.04, 0.25, 0.09]))
    assert np.allclose(ell.semiaxes, (0.5, 0.3, 0.2))
    assert np.linalg.det(ell.orientation) == pytest.approx(1.0)


def test_product_and_singlet_ellipsoids():
    a, b = np.array([0, 0, 0.5]), np.array([0.1, 0, 0])
    point = steering_ellipsoid(make_state(a, b, np.outer(a, b)))
    assert np.allclose(point.Q, 0, atol=1e-15)
    assert np.allclose(point.center, b)
    assert not point.full_rank

    ball = steering_ellipsoid(make_tstate((-1, -1, -1)).to_state())
    assert np.allclose(ball.Q, np.eye(3))
    assert np.allclose(ball.center, 0)


def test_steered_states_lie_on_ellipsoid(random_state):
    for _ in range(20):
        state = random_state()
        ell = steering_ellipsoid(state)
        q_pinv = np.linalg.pinv(ell.Q)
        for e in random_unit_vectors(4, 10):
            _, b = steered_state(state, e)
            d = b - ell.center
            assert d @ q_pinv @ d == pytest.approx(1.0, abs=1e-8)


def test_semiaxes_invariant_under_local_rotations(rng, random_state):
    state = random_state()
    R, Rp = random_rotation(rng), random_rotation(rng)
    rotated = TwoQubitState(R @ state.a, Rp @ state.b, R @ state.T @ Rp.T)
    assert np.allclose(steering_ellipsoid(rotated).semiaxes, steering_ellipsoid(state).semiaxes, atol=1e-12)
    cf = canonical_form(state)
    local = TwoQubitState(cf.a_loc, cf.b_loc, np.diag(cf.D))
    assert np.allclose(steering_ellipsoid(local).semiaxes, steering_ellipsoid(state).semiaxes, atol=1e-12)


def test_pure_alice_rejected():
    with pytest.raises(AliceBlochUnit):
        steering_ellipsoid(make_state([0, 0, 1], ZERO, np.zeros((3, 3))))


# ── T-state surface ─────────────────────────────────────────


def test_surface_radius_values():
    ts = TState((0.3, 0.4, 0.5))
    assert surface_radius(ts, 0.0, 0.0) == pytest.approx(0.5)
    assert surface_radius(ts, math.pi / 2, 0.0) == pytest.approx(0.3)
    theta, phi = math.pi / 3, math.pi / 5
    n = np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])
    assert surface_radius(ts, theta, phi) == pytest.approx(1 / math.sqrt(n @ np.diag(np.array([0.3, 0.4, 0.5]) ** -2) @ n))
    with pytest.raises(DegenerateEllipsoid):
        surface_radius(TState((0.3, 0.0, 0.5)), 0.1, 0.2)


def test_surface_radius_matches_image_of_sphere():
    t = np.array([0.3, -0.4, 0.5])
    for m in random_unit_vectors(6, 20):
        x = t * m
        theta, phi = math.acos(x[2] / np.linalg.norm(x)), math.atan2(x[1], x[0])
        assert surface_radius(TState(tuple(t)), theta, phi) == pytest.approx(np.linalg.norm(x), rel=1e-12)


def test_separability_and_volume():
    assert tstate_separable(TState((1 / 3, 1 / 3, 1 / 3)))
    assert not tstate_separable(TState((-1, -1, -1)))
    assert tstate_separable(TState((0.2, 0.2, -0.2)))
    ell = steering_ellipsoid(TState((-1 / 3, -1 / 3, -1 / 3)).to_state())
    assert ell.volume == pytest.approx(4 * math.pi / 3 / 27)


def test_surface_grid_and_execute():
    state = make_tstate((-0.5, -0.4, -0.3)).to_state()
    rows = surface_grid(state, 6)
    assert len(rows) == 36
    for row in rows:
        x = np.array([row["x"], row["y"], row["z"]])
        assert x @ np.diag(np.array([0.5, 0.4, 0.3]) ** -2) @ x == pytest.approx(1.0)
    summary = execute(state)
    assert summary["semiaxes"] == pytest.approx([0.5, 0.4, 0.3])
    assert execute(make_state([0, 0, 0.5], [0.1, 0, 0], np.outer([0, 0, 0.5], [0.1, 0, 0])), surface=4) is None
