"""
NODE: Sphere Quadrature
PURPOSE: Deterministic integration over the unit sphere and over hemispheres n·v ≥ 0,
         plus seeded rejection sampling from densities on the sphere.
         Sphere rule: Gauss–Legendre in cos θ × trapezoid in φ (exact for band-limited φ).
         Hemisphere rule: rotate v to the pole, then Gauss–Legendre on cos θ ∈ [0, 1],
         so the hemisphere indicator is never sampled.
INPUT: integrand f mapping an (N, 3) array of unit vectors to (N,) or (N, k)
OUTPUT: float or (k,) ndarray
DEPENDENCIES: numpy (leggauss, Philox)
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss

from utils.config import ORDER_THETA, ORDER_PHI, TARGET_REL_TOL, SAMPLE_BLOCK
from utils.errors import BoundViolated
from utils.logger import log_debug

SphereFunction = Callable[[np.ndarray], np.ndarray]


# ── Rule orders ──────────────────────────────────────────────


@dataclass(frozen=True)
class QuadratureSpec:
    """Tensor-rule orders; defaults come from config (256 × 512)."""
    order_theta: int = ORDER_THETA
    order_phi: int = ORDER_PHI
    target_rel_tol: float = TARGET_REL_TOL

    def __post_init__(self):
        if self.order_theta < 2:
            raise ValueError(f"order_theta must be ≥ 2, got {self.order_theta}")
        if self.order_phi < 4:
            raise ValueError(f"order_phi must be ≥ 4, got {self.order_phi}")

    def doubled(self) -> "QuadratureSpec":
        return QuadratureSpec(2 * self.order_theta, 2 * self.order_phi, self.target_rel_tol)


DEFAULT_SPEC = QuadratureSpec()


@lru_cache(maxsize=32)
def _gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@lru_cache(maxsize=32)
def _polar_grid(order_theta: int, order_phi: int, hemisphere: bool) -> tuple[np.ndarray, np.ndarray]:
    """Unit vectors and weights of the tensor rule around the z axis."""
    x, w = _gauss_legendre(order_theta)
    if hemisphere:
        x, w = (x + 1) / 2, w / 2
    phi = 2 * np.pi * np.arange(order_phi) / order_phi
    cos_t = np.repeat(x, order_phi)
    sin_t = np.sqrt(np.clip(1 - cos_t ** 2, 0.0, None))
    phis = np.tile(phi, order_theta)
    points = np.column_stack([sin_t * np.cos(phis), sin_t * np.sin(phis), cos_t])
    weights = np.repeat(w, order_phi) * (2 * np.pi / order_phi)
    points.setflags(write=False)
    weights.setflags(write=False)
    return points, weights


def _apply(f: SphereFunction, points: np.ndarray, weights: np.ndarray):
    values = np.asarray(f(points), dtype=float)
    if values.shape[0] != points.shape[0]:
        raise ValueError(f"integrand returned shape {values.shape} for {points.shape[0]} points")
    total = np.tensordot(weights, values, axes=(0, 0))
    return float(total) if np.ndim(total) == 0 else total


# ── Integration ──────────────────────────────────────────────


def sphere_integral(f: SphereFunction, spec: QuadratureSpec | None = None, split=None):
    """
    ∫_{S²} f(n) d²n.

    Args:
        f: vectorized integrand, (N, 3) → (N,) or (N, k).
        spec: rule orders (defaults from config).
        split: optional axis w; integrates the two hemispheres n·w ≷ 0 separately,
            for integrands with a kink along that great circle.

    Returns:
        float, or (k,) array for vector-valued f.
    """
    if split is not None:
        w = np.asarray(split, dtype=float)
        return hemisphere_integral(f, w, spec) + hemisphere_integral(f, -w, spec)
    spec = spec or DEFAULT_SPEC
    points, weights = _polar_grid(spec.order_theta, spec.order_phi, False)
    return _apply(f, points, weights)


@dataclass(frozen=True)
class RotationToPole:
    R: np.ndarray
    alpha: float
    beta: float


def rotation_to_pole(v) -> RotationToPole:
    """Proper rotation R = R_z(β) R_y(α) with R ẑ = v/|v|."""
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("rotation_to_pole needs a nonzero vector")
    v = v / norm
    alpha = float(np.arccos(np.clip(v[2], -1.0, 1.0)))
    beta = float(np.arctan2(v[1], v[0]))
    ca, sa, cb, sb = np.cos(alpha), np.sin(alpha), np.cos(beta), np.sin(beta)
    rz = np.array([[cb, -sb, 0.0], [sb, cb, 0.0], [0.0, 0.0, 1.0]])
    ry = np.array([[ca, 0.0, sa], [0.0, 1.0, 0.0], [-sa, 0.0, ca]])
    return RotationToPole(R=rz @ ry, alpha=alpha, beta=beta)


def hemisphere_integral(f: SphereFunction, v, spec: QuadratureSpec | None = None):
    """∫_{n·v ≥ 0} f(n) d²n, computed in the frame where v is the pole."""
    spec = spec or DEFAULT_SPEC
    rot = rotation_to_pole(v)
    local, weights = _polar_grid(spec.order_theta, spec.order_phi, True)
    return _apply(f, local @ rot.R.T, weights)


def boundary_colatitude(v, phi):
    """
    Colatitude χ(φ) of the great circle n·v = 0 at azimuth φ.

    Requires v on the upper hemisphere (cos α ≥ 0); where the circle is vertical
    (D = 0) every χ qualifies and π/2 is returned.
    """
    rot = rotation_to_pole(v)
    if np.cos(rot.alpha) < -1e-15:
        raise ValueError("boundary_colatitude requires v_z ≥ 0")
    ca, sa = np.cos(rot.alpha), np.sin(rot.alpha)
    cphi = np.cos(np.asarray(phi, dtype=float) - rot.beta)
    d = np.sqrt(ca ** 2 + sa ** 2 * cphi ** 2)
    chi = np.where(d < 1e-15, np.pi / 2, np.arctan2(ca, -sa * cphi))
    return float(chi) if np.ndim(chi) == 0 else chi


# ── Random directions ────────────────────────────────────────


def counter_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator; (seed, stream) pairs give independent, reproducible streams."""
    if not 0 <= seed < 2 ** 64:
        raise ValueError(f"seed must fit in 64 bits, got {seed}")
    return np.random.Generator(np.random.Philox(key=(int(stream) << 64) | int(seed)))


def uniform_directions(rng: np.random.Generator, count: int) -> np.ndarray:
    z = 2 * rng.random(count) - 1
    phi = 2 * np.pi * rng.random(count)
    r = np.sqrt(np.clip(1 - z * z, 0.0, None))
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def random_unit_vectors(seed: int, count: int, stream: int = 0) -> np.ndarray:
    return uniform_directions(counter_rng(seed, stream), count)


@dataclass(frozen=True)
class DensitySample:
    points: np.ndarray
    acceptance_rate: float
    proposals: int


def sample_density(density: SphereFunction, bound: float, seed: int, count: int,
                   stream: int = 0) -> DensitySample:
    """
    Draw `count` unit vectors with probability density `density` (w.r.t. d²n) by
    rejection against the uniform proposal.

    Args:
        density: vectorized P(n) ≥ 0.
        bound: envelope with P(n) ≤ bound everywhere.
        seed, stream: counter-based RNG key.

    Returns:
        DensitySample with points (count, 3).

    Raises:
        BoundViolated: a proposal had P(n) > bound.
    """
    if bound <= 0:
        raise ValueError(f"bound must be positive, got {bound}")
    rng = counter_rng(seed, stream)
    accepted: list[np.ndarray] = []
    have = proposals = 0
    while have < count:
        block = min(SAMPLE_BLOCK, max(1024, int(1.2 * (count - have) * 4 * np.pi * bound)))
        cand = uniform_directions(rng, block)
        p = np.asarray(density(cand), dtype=float)
        if np.any(p > bound * (1 + 1e-12)):
            raise BoundViolated(f"density {p.max():.6g} exceeds bound {bound:.6g}")
        keep = cand[rng.random(block) * bound < p]
        accepted.append(keep)
        have += len(keep)
        proposals += block

    points = np.concatenate(accepted)[:count]
    rate = have / proposals
    log_debug(f"[Quadrature] sampled {count} points, acceptance {rate:.4f}")
    return DensitySample(points=points, acceptance_rate=rate, proposals=proposals)


# ── Standalone test ──────────────────────────────────────────
if __name__ == "__main__":
    spec = QuadratureSpec(32, 64)
    print(f"∫1        = {sphere_integral(lambda n: np.ones(len(n)), spec):.15f}  (4π = {4 * np.pi:.15f})")
    w = np.array([0.3, -0.4, 0.866])
    w /= np.linalg.norm(w)
    print(f"∫|n·w|    = {sphere_integral(lambda n: np.abs(n @ w), QuadratureSpec()):.12f}  (2π)")
    print(f"∫_hemi 1  = {hemisphere_integral(lambda n: np.ones(len(n)), w, spec):.15f}  (2π)")
    sample = sample_density(lambda n: np.full(len(n), 1 / (4 * np.pi)), 1 / (4 * np.pi), 7, 5)
    print(f"sample    = {sample.points.round(3).tolist()}")
