"""
NODE: Steerability Criteria
PURPOSE: Classify two-qubit states as provably non-steerable (LHS model / separable),
         provably steerable (linear or nonlinear steering inequality violated by Alice),
         or in the gap between the two. Also solves for the LHS boundary surface.
INPUT: TwoQubitState / TState / semiaxis triples
OUTPUT: SteerabilityVerdict, boundary points s3(s1, s2), symmetric-slice curves
DEPENDENCIES: numpy, scipy.optimize (bisect, minimize), nodes.qstate, nodes.ellipsoid, nodes.lhs_boundary
"""

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import bisect, minimize, minimize_scalar

from nodes.ellipsoid import tstate_separable
from nodes.lhs_boundary import boundary_value
from nodes.qstate import (
    TState,
    TwoQubitState,
    as_tstate,
    canonical_form,
    covariance_matrix,
    partial_transpose_min_eigenvalue,
    singular_values,
)
from nodes.quadrature import QuadratureSpec
from utils.config import BRACKET_FLOOR, BRACKET_SCAN, ROOT_XTOL, TOL_PSD
from utils.errors import ConflictingProofs, NoRoot, SteeringError
from utils.logger import log_info, log_warning, log_debug
from utils.error_report import report_error

MARGIN_TOL = 1e-12
TIE_TOL = 1e-10
TWO_OVER_PI = 2 / math.pi


# ── Verdict ──────────────────────────────────────────────────


@dataclass(frozen=True)
class SteerabilityVerdict:
    separable: str                  # "yes" | "no" | "unknown"
    nonsteerable_proven: bool
    steerable_proven: bool
    gap: bool
    conjectured_steerable: bool     # g < 0; advisory only
    boundary_g: float | None
    linear_margin: float
    nonlinear_margin: float

    def to_dict(self) -> dict:
        out = asdict(self)
        out["margins"] = {k: out.pop(k) for k in ("boundary_g", "linear_margin", "nonlinear_margin")}
        return out


# ── Steering inequalities ────────────────────────────────────


def linear_margin(state: TwoQubitState) -> float:
    """c1 + c2 + c3 − (3/2)√(1 − |b|²); positive proves Alice can steer Bob."""
    c = singular_values(covariance_matrix(state))
    return float(c.sum() - 1.5 * math.sqrt(max(0.0, 1 - state.b @ state.b)))


def _radical(alpha, beta, d: float):
    """√((1+α)² − (d+β)²) + √((1−α)² − (d−β)²) and the smaller radicand, vectorized."""
    plus = (1 + alpha) ** 2 - (d + beta) ** 2
    minus = (1 - alpha) ** 2 - (d - beta) ** 2
    return np.sqrt(np.maximum(plus, 0.0)) + np.sqrt(np.maximum(minus, 0.0)), np.minimum(plus, minus)


def _tied_blocks(s: np.ndarray) -> list[list[int]]:
    """Index groups of the descending |D| whose neighbours differ by at most TIE_TOL."""
    blocks = [[0]]
    for k in (1, 2):
        if s[blocks[-1][-1]] - s[k] <= TIE_TOL:
            blocks[-1].append(k)
        else:
            blocks.append([k])
    return blocks


def _least_radical(a_blk: np.ndarray, c_blk: np.ndarray, d: float) -> tuple[float, float]:
    """
    Minimum of the radical over unit directions n spanning a block of tied |t|,
    with α = n·a and β = n·c. Every such n is the k-th axis of some canonical frame.

    Returns:
        (radical, smaller radicand) at the minimizer.
    """
    def along(n):
        return _radical(n @ a_blk, n @ c_blk, d)

    if len(a_blk) == 1:
        r, low = along(np.ones(1))
        return float(r), float(low)

    if len(a_blk) == 2:
        def unit(phi):
            return np.stack([np.cos(phi), np.sin(phi)], axis=-1)

        phi = np.linspace(0.0, np.pi, 361)      # the radical is even in n
        r, _ = along(unit(phi))
        i, step = int(np.argmin(r)), phi[1] - phi[0]
        res = minimize_scalar(lambda x: along(unit(x))[0], bounds=(phi[i] - step, phi[i] + step),
                              method="bounded", options={"xatol": 1e-12})
        candidates = [unit(phi[i]), unit(res.x)]
    else:
        def unit(theta, phi):
            return np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)

        theta, phi = np.meshgrid(np.linspace(0.0, np.pi / 2, 91), np.linspace(0.0, 2 * np.pi, 361), indexing="ij")
        r, _ = along(unit(theta, phi))
        i = np.unravel_index(int(np.argmin(r)), r.shape)
        res = minimize(lambda x: along(unit(*x))[0], x0=(theta[i], phi[i]), method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-15})
        candidates = [unit(theta[i], phi[i]), unit(*res.x)]

    r, low = min((along(n) for n in candidates), key=lambda pair: float(pair[0]))
    return float(r), float(low)


def nonlinear_margin(state: TwoQubitState) -> float:
    """
    max over axis roles k of |t_i| + |t_j| − (2/π)[√((1+a_k)² − (t_k+b_k)²) + √((1−a_k)² − (t_k−b_k)²)],
    evaluated in canonical form.

    When |t| has ties the canonical frame is free inside each tied block; the role k then
    ranges over every direction of the block, so the margin does not depend on the frame
    the SVD happens to return.
    """
    cf = canonical_form(state)
    s = cf.s
    signs = np.where(cf.D < 0, -1.0, 1.0)
    # with t_k = sign_k·s_k, (t_k ± b_k)² = (s_k ± sign_k·b_k)²
    c = signs * cf.b_loc
    best = -math.inf
    for block in _tied_blocks(s):
        k = block[0]
        radical, low = _least_radical(cf.a_loc[block], c[block], float(s[k]))
        if low < -1e-12:
            log_warning(f"[Criteria] negative radicand {low:.3e} clamped; state may be invalid")
        best = max(best, float(s.sum() - s[k]) - TWO_OVER_PI * radical)
    return float(best)


def tstate_nonlinear_margin(ts) -> float:
    """max over cyclic roles of s_i + s_j − (4/π)√(1 − s_k²)."""
    s = ts.s if isinstance(ts, TState) else tuple(abs(float(x)) for x in ts)
    return max(
        s[(k + 1) % 3] + s[(k + 2) % 3] - 2 * TWO_OVER_PI * math.sqrt(max(0.0, 1 - s[k] ** 2))
        for k in range(3)
    )


# ── Classification ───────────────────────────────────────────


def classify(state: TwoQubitState, method: str = "closed", spec: QuadratureSpec | None = None) -> SteerabilityVerdict:
    """
    Combine the separability test, the LHS boundary and both steering inequalities.

    T-states (a = b = 0): separable iff s1+s2+s3 ≤ 1; non-steerable if separable or
    (full rank and g ≥ 0). Other states: separable iff the partial transpose is PSD;
    no LHS model is available for them.

    Raises:
        ConflictingProofs: a steering inequality is violated by a state with a proven
            LHS model.
    """
    lin = linear_margin(state)
    nonlin = nonlinear_margin(state)
    steerable = lin > MARGIN_TOL or nonlin > MARGIN_TOL

    ts = as_tstate(state)
    g = None
    if ts is not None:
        separable = "yes" if tstate_separable(ts) else "no"
        if min(ts.s) > 0:
            g = boundary_value(ts.s, method=method, spec=spec).g
        nonsteerable = separable == "yes" or (g is not None and g >= -MARGIN_TOL)
    else:
        separable = "yes" if partial_transpose_min_eigenvalue(state) >= -TOL_PSD else "no"
        nonsteerable = separable == "yes"

    if nonsteerable and steerable:
        raise ConflictingProofs(
            f"state is both provably non-steerable and steerable "
            f"(separable={separable}, g={g}, linear={lin:.3e}, nonlinear={nonlin:.3e})")

    return SteerabilityVerdict(
        separable=separable,
        nonsteerable_proven=nonsteerable,
        steerable_proven=steerable,
        gap=not nonsteerable and not steerable,
        conjectured_steerable=g is not None and g < -MARGIN_TOL,
        boundary_g=g,
        linear_margin=lin,
        nonlinear_margin=nonlin,
    )


# ── Boundary solvers ─────────────────────────────────────────


def boundary_s3(s1: float, s2: float, method: str = "closed", spec: QuadratureSpec | None = None) -> float:
    """
    Largest s3 ∈ [BRACKET_FLOOR, 1] with g(s1, s2, s3) = 0.

    Raises:
        NoRoot: g keeps one sign on the bracket.
    """
    def g(x: float) -> float:
        return boundary_value((s1, s2, x), method=method, spec=spec).g

    grid = np.linspace(1.0, BRACKET_FLOOR, BRACKET_SCAN + 1)
    upper, g_upper = grid[0], g(grid[0])
    for lower in grid[1:]:
        g_lower = g(lower)
        if g_upper == 0:
            return float(upper)
        if g_lower == 0 or np.sign(g_lower) != np.sign(g_upper):
            root = bisect(g, lower, upper, xtol=ROOT_XTOL)
            log_debug(f"[Criteria] boundary s3={root:.10f} at (s1={s1}, s2={s2})")
            return float(root)
        upper, g_upper = lower, g_lower
    raise NoRoot(f"g(s1={s1}, s2={s2}, ·) has no sign change on [{BRACKET_FLOOR}, 1]")


def boundary_symmetric(u: float) -> tuple[float, float]:
    """
    Boundary point on the slice s1 = s2 with aspect ratio u = s3/s1.

    s3 = 1 / (1 + arctan(w)/(u² w)), w = √(1/u² − 1) for u < 1, and
    s3 = 1 / (1 + artanh(w)/(u² w)), w = √(1 − 1/u²) for u > 1. Evaluated as
    acos(u)/(u√(1−u²)) and acosh(u)/(u√(u²−1)) so nothing cancels near u = 1.

    Returns:
        (s1, s3).
    """
    if u <= 0:
        raise ValueError(f"u must be positive, got {u}")
    if u == 1:
        return 0.5, 0.5
    gap = math.sqrt(abs((1 - u) * (1 + u)))
    ratio = (math.acos(u) if u < 1 else math.acosh(u)) / (u * gap)
    s3 = 1 / (1 + ratio)
    return s3 / u, s3


def symmetric_s3_at(s1: float) -> float | None:
    """Boundary s3 on the slice s1 = s2; None where the surface does not reach (s1 ≥ 2/π)."""
    if s1 <= 0:
        raise ValueError(f"s1 must be positive, got {s1}")

    def h(log_u: float) -> float:
        return boundary_symmetric(math.exp(log_u))[0] - s1

    lo, hi = math.log(1e-10), math.log(1e6)
    if h(lo) <= 0 or h(hi) >= 0:
        return None
    log_u = bisect(h, lo, hi, xtol=1e-13)
    return boundary_symmetric(math.exp(log_u))[1]


def linear_slice_s3(s1: float) -> float | None:
    """s3 where s1 + s2 + s3 = 3/2 on the slice s1 = s2; None outside [0, 1]."""
    s3 = 1.5 - 2 * s1
    return s3 if 0 <= s3 <= 1 else None


def nonlinear_slice_s3(s1: float) -> float | None:
    """Smallest s3 beyond which the nonlinear inequality is violated on the slice s1 = s2."""
    half = math.pi * s1 / 2
    as_partner = math.sqrt(1 - half ** 2) if half <= 1 else 0.0
    as_axis = 2 * TWO_OVER_PI * math.sqrt(max(0.0, 1 - s1 ** 2)) - s1
    s3 = max(0.0, min(as_partner, as_axis))
    return s3 if s3 <= 1 else None


def ray_boundary_scale(ts, method: str = "closed") -> float:
    """λ ≥ 1 with g(λ s) = 0; 1 when s is already on or beyond the surface."""
    s = np.asarray(ts.s if isinstance(ts, TState) else ts, dtype=float)

    def g(lam: float) -> float:
        return boundary_value(lam * s, method=method).g

    if g(1.0) <= 0:
        return 1.0
    hi = 2.0
    while g(hi) > 0:
        hi *= 2
    return float(bisect(g, hi / 2, hi, xtol=ROOT_XTOL))


# ── Node entry ───────────────────────────────────────────────


def execute(state: TwoQubitState, method: str = "closed", spec: QuadratureSpec | None = None) -> dict | None:
    """Classify a state; returns the verdict as a dict or None on failure."""
    try:
        verdict = classify(state, method=method, spec=spec)
        label = ("non-steerable" if verdict.nonsteerable_proven
                 else "steerable" if verdict.steerable_proven else "gap")
        log_info(f"[Criteria] ✓ {label} (separable={verdict.separable}, g={verdict.boundary_g})")
        return verdict.to_dict()
    except SteeringError as e:
        report_error(f"{type(e).__name__}: {e}", node_name="steer_criteria")
        return None


# ── Standalone test ──────────────────────────────────────────
if __name__ == "__main__":
    for t in [(-0.5, -0.5, -0.5), (-0.8, -0.8, -0.6), (0.9, -0.9, 0.9), (-0.6, -0.6, -0.2)]:
        print(t, execute(TState(t).to_state()))
    print(f"boundary_s3(0.5, 0.5) = {boundary_s3(0.5, 0.5):.10f}")
    print(f"boundary_symmetric(2) = {boundary_symmetric(2.0)}")
