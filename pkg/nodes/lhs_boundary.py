"""
NODE: LHS Boundary
PURPOSE: Hemisphere integral of the LHS density (analytic formula and quadrature oracle),
         the normalization constant N_T of P(n) = N_T (nᵀT⁻²n)⁻², and the boundary value
         g = 2π N_T |det T| − 1 (g > 0: an LHS model exists, g = 0: on the surface).
INPUT: T-state semiaxes s = |t| (or a full-rank 3×3 T), hemisphere axis v
OUTPUT: vectors q(v), N_T, BoundaryResult
DEPENDENCIES: numpy, nodes.quadrature, nodes.specfun
"""

import math
from dataclasses import dataclass

import numpy as np

from nodes.qstate import TState
from nodes.quadrature import QuadratureSpec, hemisphere_integral, sphere_integral
from nodes.specfun import carlson_rg, elliptic_params, mean_width_integral, elliptic_bracket
from utils.errors import OrderingViolated, SingularT, SteeringError
from utils.logger import log_info, log_debug
from utils.error_report import report_error

SINGULAR_TOL = 1e-14
METHODS = ("closed", "legendre", "quadrature")


# ── Types ────────────────────────────────────────────────────


def _matrix(T) -> np.ndarray:
    """Accept a 3×3 matrix or the diagonal of one."""
    T = np.asarray(T, dtype=float)
    if T.shape == (3,):
        T = np.diag(T)
    if T.shape != (3, 3):
        raise ValueError(f"T must be 3×3 or a diagonal 3-vector, got shape {T.shape}")
    if abs(np.linalg.det(T)) < SINGULAR_TOL:
        raise SingularT(f"det T = {np.linalg.det(T):.3e}")
    return T


def _semiaxes(ts) -> tuple[float, float, float]:
    s = ts.s if isinstance(ts, TState) else tuple(abs(float(x)) for x in ts)
    if min(s) == 0:
        raise SingularT(f"semiaxes {s} include zero")
    return s


@dataclass(frozen=True)
class LhsDensity:
    """P(n) = N_T (nᵀT⁻²n)⁻² on the unit sphere; P(n) = P(−n)."""
    t: tuple[float, float, float]
    N_T: float

    @property
    def T(self) -> np.ndarray:
        return np.diag(self.t)

    def __call__(self, n: np.ndarray) -> np.ndarray:
        inv_sq = 1 / np.asarray(self.t, dtype=float) ** 2
        return self.N_T / ((n ** 2) @ inv_sq) ** 2

    @property
    def bound(self) -> float:
        return density_bound(self)


@dataclass(frozen=True)
class BoundaryResult:
    g: float

    @property
    def hint(self) -> str:
        if abs(self.g) <= 1e-12:
            return "surface"
        return "inside" if self.g > 0 else "outside"


# ── Hemisphere integral ──────────────────────────────────────


def q_analytic(T, v) -> np.ndarray:
    """
    ∫_{n·v ≥ 0} n (nᵀ(TTᵀ)⁻¹n)⁻² d²n = π |det T| TTᵀ v / |Tᵀv|.

    For diagonal T this is π |det T| T²v / |Tv|; invariant under v → λv, λ > 0.
    """
    T = _matrix(T)
    v = np.asarray(v, dtype=float)
    if not np.any(v):
        raise ValueError("v must be nonzero")
    return math.pi * abs(np.linalg.det(T)) * (T @ T.T @ v) / np.linalg.norm(T.T @ v)


def q_numeric(T, v, spec: QuadratureSpec | None = None) -> np.ndarray:
    """Quadrature of the same hemisphere integral; independent of the closed form."""
    T = _matrix(T)
    m_inv = np.linalg.inv(T @ T.T)

    def integrand(n: np.ndarray) -> np.ndarray:
        quad = np.einsum("ij,jk,ik->i", n, m_inv, n)
        return n / quad[:, None] ** 2

    return hemisphere_integral(integrand, v, spec)


# ── Normalization ────────────────────────────────────────────


def normalization(T, spec: QuadratureSpec | None = None) -> float:
    """N_T = 1 / ∫ (nᵀT⁻²n)⁻² d²n by quadrature."""
    T = _matrix(T)
    m_inv = np.linalg.inv(T @ T.T)
    total = sphere_integral(lambda n: np.einsum("ij,jk,ik->i", n, m_inv, n) ** -2.0, spec)
    return 1 / total


def normalization_exact(T) -> float:
    """N_T = 1 / (4π s1 s2 s3 R_G(s1², s2², s3²)); valid for every full-rank T, ties included."""
    s = np.linalg.svd(_matrix(T), compute_uv=False)
    return 1 / (4 * math.pi * float(np.prod(s)) * carlson_rg(*(s ** 2)))


def normalization_closed_form(s1: float, s2: float, s3: float) -> float:
    """
    N_T from incomplete elliptic integrals, for strictly ordered 0 < s1 < s2 < s3.

    The elliptic bracket is evaluated alongside and must come out real.

    Raises:
        OrderingViolated: inputs not strictly ordered.
        NonRealResult: bracket imaginary parts did not cancel.
    """
    if not (0 < s1 < s2 < s3):
        raise OrderingViolated(f"need 0 < s1 < s2 < s3, got ({s1}, {s2}, {s3})")
    bracket = elliptic_bracket(elliptic_params(s1, s2, s3), s1, s2, s3)
    log_debug(f"[Boundary] elliptic bracket {bracket:.12g} at ({s1}, {s2}, {s3})")
    return 1 / mean_width_integral(s1, s2, s3)


def density_bound(density: LhsDensity) -> float:
    """max_n P(n) = N_T s_max⁴, attained along the longest semiaxis."""
    return density.N_T * max(abs(x) for x in density.t) ** 4


def lhs_density(ts) -> LhsDensity:
    t = ts.t if isinstance(ts, TState) else tuple(float(x) for x in ts)
    _semiaxes(t)
    return LhsDensity(t=t, N_T=normalization_exact(np.asarray(t)))


# ── Boundary value ───────────────────────────────────────────


def boundary_value(ts, method: str = "closed", spec: QuadratureSpec | None = None) -> BoundaryResult:
    """
    g = 2π N_T s1 s2 s3 − 1.

    Args:
        ts: TState or semiaxis triple.
        method: "closed" (Carlson R_G, any full-rank T), "legendre" (needs strict
            ordering) or "quadrature".

    Returns:
        BoundaryResult; g > 0 toward the origin, g < 0 beyond the surface.
    """
    s = _semiaxes(ts)
    if method == "closed":
        return BoundaryResult(1 / (2 * carlson_rg(*(x * x for x in s))) - 1)
    if method == "legendre":
        n_t = normalization_closed_form(*sorted(s))
    elif method == "quadrature":
        n_t = normalization(np.asarray(s), spec)
    else:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    return BoundaryResult(2 * math.pi * n_t * s[0] * s[1] * s[2] - 1)


def surface_integral_check(ts, spec: QuadratureSpec | None = None) -> float:
    """∫ √(nᵀT²n) d²n; equals 2π exactly on the boundary surface."""
    sq = np.asarray(ts.s if isinstance(ts, TState) else ts, dtype=float) ** 2
    return sphere_integral(lambda n: np.sqrt((n ** 2) @ sq), spec)


# ── Node entry ───────────────────────────────────────────────


def execute(t, spec: QuadratureSpec | None = None) -> dict | None:
    """
    N_T of a T-state by every available path.

    Returns:
        {"t", "N_T_quadrature", "N_T_exact", "N_T_closed_form", "g"} or None on failure.
        N_T_closed_form is None when the semiaxes are not strictly ordered.
    """
    try:
        s = _semiaxes(t)
        by_quadrature = normalization(np.asarray(s), spec)
        exact = normalization_exact(np.asarray(s))
        try:
            closed = normalization_closed_form(*sorted(s))
        except OrderingViolated:
            log_info("[Boundary] semiaxes tie: closed form skipped")
            closed = None
        g = boundary_value(s).g
        log_info(f"[Boundary] ✓ N_T={exact:.12g} (quadrature {by_quadrature:.12g}) g={g:.6g}")
        return {
            "t": list(t),
            "N_T_quadrature": by_quadrature,
            "N_T_exact": exact,
            "N_T_closed_form": closed,
            "g": g,
        }
    except (SteeringError, ValueError) as e:
        report_error(f"{type(e).__name__}: {e}", node_name="lhs_boundary")
        return None


# ── Standalone test ──────────────────────────────────────────
if __name__ == "__main__":
    T = np.diag([0.4, 0.5, 0.6])
    v = np.ones(3) / np.sqrt(3)
    print(f"q_analytic = {q_analytic(T, v)}")
    print(f"q_numeric  = {q_numeric(T, v)}")
    print(execute((0.3, 0.5, 0.7)))
    for s in (0.4, 0.5, 0.7):
        print(f"g({s},{s},{s}) = {boundary_value((s, s, s)).g:+.6f}")
