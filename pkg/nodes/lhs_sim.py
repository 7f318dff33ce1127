"""
NODE: LHS Simulation
PURPOSE: Executable local-hidden-state model for T-states. Hidden states n are drawn
         from P(n) = N_T (nᵀT⁻²n)⁻² and Alice answers deterministically with
         [nᵀT⁻¹e ≥ 0]. States strictly inside the surface are simulated as a convex
         mixture of the boundary model and the maximally mixed state. The model is checked
         two ways: Monte Carlo against the quantum predictions, and quadrature of the
         assemblage on the boundary.
INPUT: T-state t, measurement directions e, sample count, seed
OUTPUT: SimulationReport / VerificationReport
DEPENDENCIES: numpy, nodes.quadrature (Philox streams, rejection sampler, hemisphere rule)
"""

from dataclasses import dataclass, field

import numpy as np

from nodes.lhs_boundary import LhsDensity, boundary_value, lhs_density
from nodes.qstate import TState
from nodes.quadrature import QuadratureSpec, counter_rng, hemisphere_integral, sample_density, uniform_directions
from nodes.steer_criteria import ray_boundary_scale
from utils.config import MODEL_REGION_TOL, ON_BOUNDARY_TOL, SAMPLE_BLOCK
from utils.errors import NotInModelRegion, NotOnBoundary, SingularT, SteeringError
from utils.logger import log_info, log_debug
from utils.error_report import report_error


# ── Model ────────────────────────────────────────────────────


@dataclass(frozen=True)
class LhsModel:
    density: LhsDensity

    @property
    def t(self) -> np.ndarray:
        return np.asarray(self.density.t, dtype=float)

    def response(self, e, n: np.ndarray) -> np.ndarray:
        return response(np.diag(self.t), e, n)


def response(T, e, n: np.ndarray) -> np.ndarray:
    """Alice's deterministic outcome [nᵀT⁻¹e ≥ 0] as 0/1, vectorized over rows of n."""
    T = np.asarray(T, dtype=float)
    if abs(np.linalg.det(T)) < 1e-14:
        raise SingularT(f"det T = {np.linalg.det(T):.3e}")
    w = np.linalg.solve(T, np.asarray(e, dtype=float))
    return (np.asarray(n) @ w >= 0).astype(np.int8)


def density_value(model: LhsModel, n: np.ndarray) -> np.ndarray:
    return model.density(np.atleast_2d(n))


def _unit_rows(directions) -> np.ndarray:
    e = np.atleast_2d(np.asarray(directions, dtype=float))
    if e.shape[1] != 3:
        raise ValueError(f"directions must have shape (k, 3), got {e.shape}")
    norms = np.linalg.norm(e, axis=1)
    if np.any(np.abs(norms - 1) > 1e-9):
        raise ValueError("measurement directions must be unit vectors")
    return e


# ── Monte Carlo ──────────────────────────────────────────────


@dataclass
class DirectionRecord:
    e: list[float]
    p_hat: float
    p_stderr: float
    bloch_hat: list[float]          # conditional Bloch vector given outcome +1, target Te
    bloch_stderr: list[float]
    joint_hat: list[float]          # E[r n], target Te/2
    joint_stderr: list[float]
    target_bloch: list[float]
    max_z: float = field(init=False)

    def __post_init__(self):
        dev = np.abs(np.asarray(self.joint_hat) - np.asarray(self.target_bloch) / 2)
        err = np.maximum(np.asarray(self.joint_stderr), 1e-300)
        self.max_z = float(max((dev / err).max(), abs(self.p_hat - 0.5) / max(self.p_stderr, 1e-300)))


@dataclass
class SimulationReport:
    t: list[float]
    count: int
    seed: int
    mixture_weight: float           # q: probability of a boundary-model hidden state
    boundary_scale: float           # λ = 1/q with g(λ s) = 0
    records: list[DirectionRecord]

    @property
    def max_z(self) -> float:
        return max((r.max_z for r in self.records), default=0.0)


def _draw_block(model: LhsModel, q: float, e: np.ndarray, size: int, seed: int, stream: int):
    """Hidden states and Alice's outcomes for one block of the mixture."""
    rng = counter_rng(seed, 2 * stream + 1)
    from_model = rng.random(size) < q
    k = int(from_model.sum())

    points = np.empty((size, 3))
    outcome = np.empty(size, dtype=np.int8)
    if k:
        sample = sample_density(model.density, model.density.bound, seed, k, stream=2 * stream)
        points[from_model] = sample.points
        outcome[from_model] = model.response(e, sample.points)
    if size - k:
        points[~from_model] = uniform_directions(rng, size - k)
        outcome[~from_model] = (rng.random(size - k) < 0.5).astype(np.int8)
    return points, outcome


def simulate(ts, directions, count: int, seed: int) -> SimulationReport:
    """
    Monte Carlo estimate of Alice's outcome probability and Bob's steered states.

    Args:
        ts: TState or t triple with g(s) ≥ 0.
        directions: (k, 3) unit vectors.
        count: hidden states per direction.
        seed: RNG key; streams are keyed by (seed, direction index, block).

    Raises:
        NotInModelRegion: g < −MODEL_REGION_TOL.
    """
    t = np.asarray(ts.t if isinstance(ts, TState) else ts, dtype=float)
    if count < 2:
        raise ValueError(f"count must be ≥ 2, got {count}")
    e_rows = _unit_rows(directions)
    g = boundary_value(np.abs(t)).g
    if g < -MODEL_REGION_TOL:
        raise NotInModelRegion(f"g = {g:.3e} < 0 for s = {np.abs(t).tolist()}")

    scale = ray_boundary_scale(np.abs(t)) if g > 0 else 1.0
    model = LhsModel(lhs_density(tuple(scale * t)))
    q = 1 / scale
    log_info(f"[LHS] simulating s={np.abs(t).round(6).tolist()} with q={q:.6f}, {count} states × {len(e_rows)} directions")

    blocks = -(-count // SAMPLE_BLOCK)
    records = []
    for d, e in enumerate(e_rows):
        n_r = 0
        sum_rn = np.zeros(3)
        sum_rn2 = np.zeros(3)
        for block in range(blocks):
            size = min(SAMPLE_BLOCK, count - block * SAMPLE_BLOCK)
            points, outcome = _draw_block(model, q, e, size, seed, stream=(d << 24) | block)
            rn = points * outcome[:, None]
            n_r += int(outcome.sum())
            sum_rn += rn.sum(axis=0)
            sum_rn2 += (rn ** 2).sum(axis=0)

        p_hat = n_r / count
        joint = sum_rn / count
        joint_var = sum_rn2 / count - joint ** 2
        cond = sum_rn / max(n_r, 1)
        cond_var = sum_rn2 / max(n_r, 1) - cond ** 2
        records.append(DirectionRecord(
            e=e.tolist(),
            p_hat=p_hat,
            p_stderr=float(np.sqrt(p_hat * (1 - p_hat) / count)),
            bloch_hat=cond.tolist(),
            bloch_stderr=np.sqrt(np.clip(cond_var, 0, None) / max(n_r, 1)).tolist(),
            joint_hat=joint.tolist(),
            joint_stderr=np.sqrt(np.clip(joint_var, 0, None) / count).tolist(),
            target_bloch=(t * e).tolist(),
        ))
        log_debug(f"[LHS] e={e.round(4).tolist()} p={p_hat:.5f} b={cond.round(5).tolist()}")

    return SimulationReport(t=t.tolist(), count=count, seed=seed, mixture_weight=q,
                            boundary_scale=scale, records=records)


# ── Quadrature check ─────────────────────────────────────────


@dataclass
class VerificationReport:
    t: list[float]
    N_T: float
    max_deviation: float
    rows: list[dict]


def verify_model(ts, directions, spec: QuadratureSpec | None = None) -> VerificationReport:
    """
    ∫ P(n) [nᵀT⁻¹e ≥ 0] d²n = 1/2 and ∫ P(n) [nᵀT⁻¹e ≥ 0] n d²n = Te/2 on the boundary.

    Raises:
        NotOnBoundary: |g| > ON_BOUNDARY_TOL.
    """
    t = np.asarray(ts.t if isinstance(ts, TState) else ts, dtype=float)
    g = boundary_value(np.abs(t)).g
    if abs(g) > ON_BOUNDARY_TOL:
        raise NotOnBoundary(f"g = {g:.3e} for s = {np.abs(t).tolist()}")
    density = lhs_density(tuple(t))

    def integrand(n: np.ndarray) -> np.ndarray:
        p = density(n)
        return np.column_stack([p, p[:, None] * n])

    rows = []
    worst = 0.0
    for e in _unit_rows(directions):
        v = e / t
        totals = hemisphere_integral(integrand, v / np.linalg.norm(v), spec)
        target = t * e / 2
        dev = max(abs(totals[0] - 0.5), float(np.abs(totals[1:] - target).max()))
        worst = max(worst, dev)
        rows.append({"e": e.tolist(), "probability": float(totals[0]),
                     "assemblage": totals[1:].tolist(), "target": target.tolist(), "deviation": dev})

    return VerificationReport(t=t.tolist(), N_T=density.N_T, max_deviation=worst, rows=rows)


# ── Node entry ───────────────────────────────────────────────


def execute(t, directions, count: int, seed: int) -> SimulationReport | None:
    """Run the Monte Carlo LHS simulation; None on failure."""
    try:
        report = simulate(t, directions, count, seed)
        log_info(f"[LHS] ✓ simulated, worst deviation {report.max_z:.2f}σ")
        return report
    except (SteeringError, ValueError) as e:
        report_error(f"{type(e).__name__}: {e}", node_name="lhs_sim")
        return None


def execute_verify(t, directions, spec: QuadratureSpec | None = None) -> VerificationReport | None:
    """Quadrature check of the boundary model; None on failure."""
    try:
        report = verify_model(t, directions, spec)
        log_info(f"[LHS] ✓ verified, max deviation {report.max_deviation:.3e}")
        return report
    except (SteeringError, ValueError) as e:
        report_error(f"{type(e).__name__}: {e}", node_name="lhs_sim")
        return None


# ── Standalone test ──────────────────────────────────────────
if __name__ == "__main__":
    dirs = np.eye(3)
    rep = execute((-0.5, -0.5, -0.5), dirs, 200_000, 11)
    for r in rep.records:
        print(f"e={r.e} p={r.p_hat:.4f} b={np.round(r.bloch_hat, 4).tolist()} target={r.target_bloch}")
    print(execute_verify((-0.5, -0.5, -0.5), dirs).max_deviation)
