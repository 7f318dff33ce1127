"""
NODE: Steering Ellipsoid
PURPOSE: The set of Bloch vectors Bob's qubit can be steered to by Alice's projective
         measurements: conditional states b(e), the ellipsoid (center, Q, semiaxes,
         orientation), surface radius for T-states, and the separability test s1+s2+s3 ≤ 1.
INPUT: TwoQubitState / TState
OUTPUT: SteeringEllipsoid, surface grids, JSON-ready summaries
DEPENDENCIES: numpy (eigh), nodes.qstate
"""

from dataclasses import dataclass

import numpy as np

from nodes.qstate import TState, TwoQubitState
from utils.config import UNIT_TOL, DEGENERATE_PROB
from utils.errors import AliceBlochUnit, DegenerateEllipsoid, DegenerateOutcome, SteeringError
from utils.logger import log_info, log_warning
from utils.error_report import report_error


@dataclass(frozen=True, eq=False)
class SteeringEllipsoid:
    center: np.ndarray
    Q: np.ndarray
    semiaxes: np.ndarray        # descending
    orientation: np.ndarray     # columns are the semiaxis directions, det = +1

    @property
    def volume(self) -> float:
        return float(4 * np.pi / 3 * np.prod(self.semiaxes))

    @property
    def full_rank(self) -> bool:
        return bool(self.semiaxes[-1] > UNIT_TOL)


# ── Conditional states ───────────────────────────────────────


def steered_state(state: TwoQubitState, e) -> tuple[float, np.ndarray]:
    """
    Alice measures along e and obtains +1.

    Returns:
        (p_e, b(e)) with p_e = (1 + a·e)/2 and b(e) = (b + Tᵀe) / (2 p_e).
    """
    e = np.asarray(e, dtype=float)
    if abs(np.linalg.norm(e) - 1) > UNIT_TOL:
        raise ValueError(f"measurement direction must be a unit vector, |e| = {np.linalg.norm(e)}")
    p = (1 + state.a @ e) / 2
    if p < DEGENERATE_PROB:
        raise DegenerateOutcome(f"outcome probability {p:.3e} along e = {e.tolist()}")
    return float(p), (state.b + state.T.T @ e) / (2 * p)


def steering_ellipsoid(state: TwoQubitState) -> SteeringEllipsoid:
    """
    Ellipsoid {c + Q^{1/2} x : |x| ≤ 1} of steered Bloch vectors.

    c = (b − Tᵀa)/(1 − a²),
    Q = (Tᵀ − b aᵀ)(1 + a aᵀ/(1 − a²))(T − a bᵀ)/(1 − a²).
    """
    a, b, T = state.a, state.b, state.T
    a2 = float(a @ a)
    if a2 >= (1 - UNIT_TOL) ** 2:
        raise AliceBlochUnit(f"|a| = {np.sqrt(a2):.15f}")
    gamma = 1 / (1 - a2)

    center = gamma * (b - T.T @ a)
    Q = gamma * (T.T - np.outer(b, a)) @ (np.eye(3) + gamma * np.outer(a, a)) @ (T - np.outer(a, b))
    Q = (Q + Q.T) / 2

    evals, evecs = np.linalg.eigh(Q)
    if evals[0] < -UNIT_TOL:
        log_warning(f"[Ellipsoid] Q eigenvalue {evals[0]:.3e} < 0 clamped")
    evals = np.clip(evals, 0.0, None)
    order = np.argsort(evals)[::-1]
    evals, evecs = evals[order], evecs[:, order]
    if np.linalg.det(evecs) < 0:
        evecs[:, -1] = -evecs[:, -1]
    return SteeringEllipsoid(center=center, Q=Q, semiaxes=np.sqrt(evals), orientation=evecs)


# ── T-state geometry ─────────────────────────────────────────


def surface_radius(ts: TState, theta, phi):
    """Radius of the origin-centred ellipsoid with semiaxes s along (θ, φ)."""
    s1, s2, s3 = ts.s
    if min(s1, s2, s3) == 0:
        raise DegenerateEllipsoid(f"semiaxes {ts.s} include zero")
    theta, phi = np.asarray(theta, dtype=float), np.asarray(phi, dtype=float)
    st = np.sin(theta)
    f = np.sqrt((st * np.cos(phi) / s1) ** 2 + (st * np.sin(phi) / s2) ** 2 + (np.cos(theta) / s3) ** 2)
    r = 1 / f
    return float(r) if np.ndim(r) == 0 else r


def tstate_separable(ts: TState) -> bool:
    return sum(ts.s) <= 1 + 1e-12


def surface_grid(state: TwoQubitState, n: int) -> list[dict]:
    """Points c + r(d) d on an n × n (θ, φ) grid, r(d) = (dᵀQ⁻¹d)^{-1/2}."""
    ell = steering_ellipsoid(state)
    if not ell.full_rank:
        raise DegenerateEllipsoid(f"semiaxes {ell.semiaxes.tolist()} include zero")
    q_inv = ell.orientation @ np.diag(1 / ell.semiaxes ** 2) @ ell.orientation.T

    rows = []
    for i in range(n):
        theta = np.pi * (i + 0.5) / n
        for j in range(n):
            phi = 2 * np.pi * j / n
            d = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
            x, y, z = ell.center + d / np.sqrt(d @ q_inv @ d)
            rows.append({"theta": theta, "phi": phi, "x": x, "y": y, "z": z})
    return rows


# ── Node entry ───────────────────────────────────────────────


def execute(state: TwoQubitState, surface: int | None = None) -> dict | list[dict] | None:
    """
    Summarize the steering ellipsoid of a state.

    Args:
        state: validated state.
        surface: if given, return an n × n grid of surface points instead.

    Returns:
        summary dict, list of surface rows, or None on failure.
    """
    try:
        if surface:
            rows = surface_grid(state, surface)
            log_info(f"[Ellipsoid] ✓ {len(rows)} surface points")
            return rows
        ell = steering_ellipsoid(state)
        log_info(f"[Ellipsoid] ✓ semiaxes={ell.semiaxes.round(6).tolist()} volume={ell.volume:.6g}")
        return {
            "center": ell.center.tolist(),
            "semiaxes": ell.semiaxes.tolist(),
            "orientation": ell.orientation.tolist(),
            "Q": ell.Q.tolist(),
            "volume": ell.volume,
        }
    except SteeringError as e:
        report_error(f"{type(e).__name__}: {e}", node_name="ellipsoid")
        return None


# ── Standalone test ──────────────────────────────────────────
if __name__ == "__main__":
    werner = TState((-0.5, -0.5, -0.5))
    print(execute(werner.to_state()))
    print(f"r(π/2, 0) for s=(0.3,0.5,0.7): {surface_radius(TState((0.3, -0.5, 0.7)), np.pi / 2, 0.0)}")
