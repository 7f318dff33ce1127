"""
NODE: Figures & Verification Sweeps
PURPOSE: Row generators behind the figure / boundary / verification subcommands:
         the LHS boundary surface over the (s1, s2) square, the s1 = s2 cross-section with
         the linear and nonlinear steering curves, the symmetric-slice sweep in u, and the
         hemisphere-integral oracle harness over random (T, v).
INPUT: grid sizes, sample counts, seeds, QuadratureSpec
OUTPUT: lists of row dicts (column order = CSV header order) / verification summary
DEPENDENCIES: asyncio (row-level concurrency), numpy, nodes.steer_criteria, nodes.lhs_boundary
"""

import asyncio
from typing import Callable, Iterable

import numpy as np

from nodes.lhs_boundary import q_analytic, q_numeric
from nodes.quadrature import QuadratureSpec, counter_rng, uniform_directions
from nodes.steer_criteria import (
    boundary_s3,
    boundary_symmetric,
    linear_slice_s3,
    nonlinear_slice_s3,
    symmetric_s3_at,
)
from utils.config import SWEEP_WORKERS, VERIFY_THRESHOLD
from utils.errors import NoRoot
from utils.logger import log_info, log_warning, log_section

SURFACE_COLUMNS = ("s1", "s2", "s3_boundary", "s3_linear_plane", "separable_plane")
SLICE_COLUMNS = ("s1", "s3_necessary", "s3_linear", "s3_nonlinear")
SYMMETRIC_COLUMNS = ("u", "s1", "s3")
VERIFY_COLUMNS = ("trial", "t1", "t2", "t3", "v1", "v2", "v3", "relative_deviation")


# ── Concurrency ──────────────────────────────────────────────


async def _gather_rows(fn: Callable, items: Iterable) -> list:
    """Run fn over items in worker threads; results keep the order of items."""
    gate = asyncio.Semaphore(SWEEP_WORKERS)

    async def one(item):
        async with gate:
            return await asyncio.to_thread(fn, item)

    return list(await asyncio.gather(*(one(item) for item in items)))


def sweep(fn: Callable, items: Iterable) -> list:
    return asyncio.run(_gather_rows(fn, list(items)))


def _clamp_unit(x: float) -> float:
    return min(1.0, max(0.0, x))


# ── Boundary surface ─────────────────────────────────────────


def _surface_row(point: tuple[float, float], method: str = "closed",
                  spec: QuadratureSpec | None = None) -> dict:
    s1, s2 = point
    try:
        s3 = boundary_s3(s1, s2, method=method, spec=spec)
    except NoRoot:
        s3 = None
    return {
        "s1": s1,
        "s2": s2,
        "s3_boundary": s3,
        "s3_linear_plane": _clamp_unit(1.5 - s1 - s2),
        "separable_plane": _clamp_unit(1 - s1 - s2),
    }


def run_boundary_surface(grid: int, method: str = "closed", spec: QuadratureSpec | None = None) -> list[dict]:
    """Boundary s3 over s_i = i/grid, i = 1..grid; NoRoot leaves s3_boundary empty."""
    if grid < 2:
        raise ValueError(f"grid must be ≥ 2, got {grid}")
    log_section(f"Boundary surface: {grid}×{grid} grid")
    axis = [i / grid for i in range(1, grid + 1)]
    rows = sweep(lambda p: _surface_row(p, method, spec), [(a, b) for a in axis for b in axis])
    found = sum(r["s3_boundary"] is not None for r in rows)
    log_info(f"[Figures] ✓ {found}/{len(rows)} boundary points")
    return rows


def _slice_row(s1: float) -> dict:
    return {
        "s1": s1,
        "s3_necessary": symmetric_s3_at(s1),
        "s3_linear": linear_slice_s3(s1),
        "s3_nonlinear": nonlinear_slice_s3(s1),
    }


def run_slice_curves(samples: int) -> list[dict]:
    """Cross-section s1 = s2 at s1 = i/samples, i = 1..samples."""
    if samples < 2:
        raise ValueError(f"samples must be ≥ 2, got {samples}")
    log_section(f"Slice s1 = s2: {samples} samples")
    rows = sweep(_slice_row, [i / samples for i in range(1, samples + 1)])
    log_info(f"[Figures] ✓ {len(rows)} cross-section rows")
    return rows


def run_symmetric(u_lo: float, u_hi: float, count: int) -> list[dict]:
    """Closed-form boundary points on s1 = s2 for u log-spaced in [u_lo, u_hi]."""
    if not 0 < u_lo <= u_hi or count < 1:
        raise ValueError(f"need 0 < lo ≤ hi and n ≥ 1, got ({u_lo}, {u_hi}, {count})")
    us = np.geomspace(u_lo, u_hi, count) if count > 1 else np.array([u_lo])
    rows = []
    for u in us:
        s1, s3 = boundary_symmetric(float(u))
        rows.append({"u": float(u), "s1": s1, "s3": s3})
    return rows


# ── Hemisphere integral harness ──────────────────────────────


def hemisphere_trials(trials: int, seed: int, iso: bool = False) -> list[tuple[np.ndarray, np.ndarray]]:
    """Random full-rank diagonal T (|t_i| ∈ [0.05, 1], random signs) and unit v."""
    if iso:
        return [(np.ones(3), np.array([0.0, 0.0, 1.0]))] * trials
    rng = counter_rng(seed, stream=0)
    t = rng.uniform(0.05, 1.0, size=(trials, 3)) * rng.choice([-1.0, 1.0], size=(trials, 3))
    return list(zip(t, uniform_directions(rng, trials)))


def run_verify(trials: int, seed: int, spec: QuadratureSpec | None = None, iso: bool = False) -> dict:
    """
    Max relative deviation between the closed-form hemisphere integral and quadrature.

    Returns:
        {"trials", "max_relative_deviation", "threshold", "passed", "rows"}.
    """
    if trials < 1:
        raise ValueError(f"trials must be ≥ 1, got {trials}")
    log_section(f"Hemisphere check: {trials} trial(s)")

    def one(item):
        t, v = item
        exact = q_analytic(t, v)
        numeric = q_numeric(t, v, spec)
        return float(np.linalg.norm(numeric - exact) / np.linalg.norm(exact))

    cases = hemisphere_trials(trials, seed, iso)
    deviations = sweep(one, cases)
    rows = [
        dict(zip(VERIFY_COLUMNS, (i, *map(float, t), *map(float, v), d)))
        for i, ((t, v), d) in enumerate(zip(cases, deviations))
    ]
    worst = max(deviations)
    passed = worst <= VERIFY_THRESHOLD
    (log_info if passed else log_warning)(
        f"[Figures] {'✓' if passed else '✗'} max relative deviation {worst:.3e} (threshold {VERIFY_THRESHOLD:g})")
    return {"trials": trials, "max_relative_deviation": worst, "threshold": VERIFY_THRESHOLD,
            "passed": passed, "rows": rows}


# ── Standalone test ──────────────────────────────────────────
if __name__ == "__main__":
    for row in run_slice_curves(10):
        print(row)
    print(run_verify(3, 1)["max_relative_deviation"])
