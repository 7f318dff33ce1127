import math

import numpy as np
import pytest

from nodes import steer_criteria
from nodes.lhs_boundary import boundary_value
from nodes.qstate import TState, from_density_matrix, make_state, make_tstate
from nodes.steer_criteria import (
    boundary_s3,
    boundary_symmetric,
    classify,
    execute,
    linear_margin,
    linear_slice_s3,
    nonlinear_margin,
    nonlinear_slice_s3,
    ray_boundary_scale,
    symmetric_s3_at,
    tstate_nonlinear_margin,
)
from tests.conftest import random_rotation
from utils.errors import ConflictingProofs, NoRoot


def partially_entangled(theta: float):
    psi = np.array([math.cos(theta), 0, 0, math.sin(theta)])
    return from_density_matrix(np.outer(psi, psi))


# ── Margins ─────────────────────────────────────────────────


def test_werner_margins():
    werner = make_tstate((-0.5, -0.5, -0.5)).to_state()
    assert linear_margin(werner) == pytest.approx(0.0, abs=1e-14)
    assert nonlinear_margin(werner) == pytest.approx(1 - 4 / math.pi * math.sqrt(0.75))


def test_singlet_margins():
    singlet = make_tstate((-1, -1, -1)).to_state()
    assert linear_margin(singlet) == pytest.approx(1.5)
    assert nonlinear_margin(singlet) == pytest.approx(2.0)


def test_nonlinear_margin_reduces_to_tstate_form(rng):
    for _ in range(20):
        t = rng.uniform(-1, 1, size=3)
        assert nonlinear_margin(TState(tuple(t)).to_state()) == pytest.approx(tstate_nonlinear_margin(t), abs=1e-12)


def test_nonlinear_margin_of_pure_entangled_state():
    state = partially_entangled(math.pi / 8)
    assert nonlinear_margin(state) == pytest.approx(2 * math.sin(math.pi / 4), abs=1e-6)


def test_product_state_margins_are_not_positive():
    a, b = np.array([0, 0, 0.6]), np.array([0.3, 0, 0])
    state = make_state(a, b, np.outer(a, b))
    assert linear_margin(state) < 0
    assert nonlinear_margin(state) <= 1e-12


# ── Classification ──────────────────────────────────────────


def test_classify_werner_on_surface():
    verdict = classify(make_tstate((-0.5, -0.5, -0.5)).to_state())
    assert verdict.separable == "no"
    assert verdict.nonsteerable_proven
    assert not verdict.steerable_proven
    assert not verdict.gap
    assert verdict.boundary_g == pytest.approx(0.0, abs=1e-13)


def test_classify_singlet_and_separable():
    singlet = classify(make_tstate((-1, -1, -1)).to_state())
    assert singlet.steerable_proven and not singlet.nonsteerable_proven
    assert singlet.conjectured_steerable

    separable = classify(make_tstate((-1 / 3, -1 / 3, -1 / 3)).to_state())
    assert separable.separable == "yes"
    assert separable.nonsteerable_proven


def test_classify_gap_state():
    # outside the LHS surface but below both steering inequalities
    verdict = classify(make_tstate((-0.6, -0.6, -0.29)).to_state())
    assert verdict.gap
    assert verdict.conjectured_steerable
    assert verdict.linear_margin < 0 and verdict.nonlinear_margin < 0


def test_classify_rank_deficient_tstate():
    verdict = classify(make_tstate((-0.5, -0.5, 0.0)).to_state())
    assert verdict.boundary_g is None
    assert verdict.separable == "yes"
    assert verdict.nonsteerable_proven


def test_classify_general_states():
    a, b = np.array([0, 0, 0.6]), np.array([0.3, 0, 0])
    product = classify(make_state(a, b, np.outer(a, b)))
    assert product.separable == "yes" and product.nonsteerable_proven
    assert product.boundary_g is None

    pure = classify(partially_entangled(math.pi / 8))
    assert pure.separable == "no"
    assert pure.steerable_proven
    assert not pure.conjectured_steerable


def rotated(state, R, Rp):
    return make_state(R @ state.a, Rp @ state.b, R @ state.T @ Rp.T)


TIED_STATES = {
    # |t| = (0.6, 0.6, 0.6), Alice and Bob Bloch vectors inside the tied block
    "triple": ((0, 0, 0.2), (0, 0, -0.2), -0.6 * np.eye(3)),
    # |t| = (0.5, 0.5, 0.2), tie between the x and z axes, a and b along z
    "pair": ((0, 0, 0.2), (0, 0, -0.1), np.diag([-0.5, -0.2, -0.5])),
}


@pytest.mark.parametrize("name", sorted(TIED_STATES))
def test_nonlinear_margin_ignores_frame_inside_tied_block(name, rng):
    state = make_state(*TIED_STATES[name])
    base = nonlinear_margin(state)
    for _ in range(20):
        R, Rp = random_rotation(rng), random_rotation(rng)
        assert nonlinear_margin(rotated(state, R, Rp)) == pytest.approx(base, abs=1e-9)


def test_nonlinear_margin_takes_best_frame_in_tied_block():
    # radical √(0.64 + 0.8x) + √(0.64 − 0.8x) with x = n·a is least at |x| = |a| = 0.2
    state = make_state(*TIED_STATES["triple"])
    expected = 1.2 - 2 / math.pi * (math.sqrt(0.8) + math.sqrt(0.48))
    assert nonlinear_margin(state) == pytest.approx(expected, abs=1e-9)


def test_classify_is_invariant_under_local_rotations(rng, random_state):
    states = [make_state(*TIED_STATES["triple"]), make_tstate((-0.6, -0.6, -0.29)).to_state()]
    states += [random_state() for _ in range(5)]
    for state in states:
        verdict = classify(state)
        for _ in range(5):
            other = classify(rotated(state, random_rotation(rng), random_rotation(rng)))
            assert (other.separable, other.nonsteerable_proven, other.steerable_proven, other.gap) == (
                verdict.separable, verdict.nonsteerable_proven, verdict.steerable_proven, verdict.gap)
            assert other.linear_margin == pytest.approx(verdict.linear_margin, abs=1e-10)
            assert other.nonlinear_margin == pytest.approx(verdict.nonlinear_margin, abs=1e-9)
            if verdict.boundary_g is None:
                assert other.boundary_g is None
            else:
                assert other.boundary_g == pytest.approx(verdict.boundary_g, abs=1e-12)


def test_classify_raises_on_conflicting_proofs(monkeypatch):
    separable = make_tstate((-1 / 3, -1 / 3, -1 / 3)).to_state()
    monkeypatch.setattr(steer_criteria, "linear_margin", lambda state: 1.0)
    with pytest.raises(ConflictingProofs):
        classify(separable)
    assert execute(separable) is None


def test_execute_nests_margins():
    result = execute(TState((-0.5, -0.5, -0.5)).to_state())
    assert set(result["margins"]) == {"boundary_g", "linear_margin", "nonlinear_margin"}
    assert result["nonsteerable_proven"] is True


# ── Boundary solvers ────────────────────────────────────────


def test_boundary_s3_on_werner():
    assert boundary_s3(0.5, 0.5) == pytest.approx(0.5, abs=1e-8)
    assert boundary_s3(0.3, 0.5, method="legendre") == pytest.approx(boundary_s3(0.3, 0.5), abs=1e-9)


def test_boundary_s3_no_root():
    with pytest.raises(NoRoot):
        boundary_s3(0.9, 0.9)


@pytest.mark.parametrize("u", [0.25, 0.5, 2.0, 4.0])
def test_symmetric_closed_form_lies_on_surface(u):
    s1, s3 = boundary_symmetric(u)
    assert s3 / s1 == pytest.approx(u)
    assert boundary_value((s1, s1, s3)).g == pytest.approx(0.0, abs=1e-10)
    assert boundary_s3(s1, s1) == pytest.approx(s3, abs=1e-6)


def test_symmetric_isotropic_point():
    assert boundary_symmetric(1.0) == (0.5, 0.5)
    assert boundary_symmetric(1 + 1e-9) == pytest.approx((0.5, 0.5), abs=1e-6)
    with pytest.raises(ValueError):
        boundary_symmetric(0.0)


def test_symmetric_s3_at():
    assert symmetric_s3_at(0.5) == pytest.approx(0.5, abs=1e-10)
    s1, s3 = boundary_symmetric(0.3)
    assert symmetric_s3_at(s1) == pytest.approx(s3, abs=1e-10)
    assert symmetric_s3_at(0.7) is None
    with pytest.raises(ValueError):
        symmetric_s3_at(0.0)


def test_linear_slice():
    assert linear_slice_s3(0.5) == pytest.approx(0.5)
    assert linear_slice_s3(0.2) is None
    assert linear_slice_s3(0.8) is None


@pytest.mark.parametrize("s1", [0.1, 0.3, 0.5, 0.6])
def test_nonlinear_slice_is_where_margin_vanishes(s1):
    s3 = nonlinear_slice_s3(s1)
    assert 0 < s3 < 1
    assert tstate_nonlinear_margin((s1, s1, s3)) == pytest.approx(0.0, abs=1e-12)
    assert tstate_nonlinear_margin((s1, s1, s3 + 1e-3)) > 0


def test_nonlinear_slice_closes_at_two_over_pi():
    assert nonlinear_slice_s3(2 / math.pi) == pytest.approx(0.0, abs=1e-7)


def test_ray_boundary_scale():
    assert ray_boundary_scale((0.25, 0.25, 0.25)) == pytest.approx(2.0, abs=1e-9)
    assert ray_boundary_scale(TState((-0.6, -0.6, -0.6))) == 1.0
    lam = ray_boundary_scale((0.1, 0.2, 0.3))
    assert boundary_value((0.1 * lam, 0.2 * lam, 0.3 * lam)).g == pytest.approx(0.0, abs=1e-8)
