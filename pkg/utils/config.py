"""
UTIL: Configuration
PURPOSE: Centralized config loader from .env; single source of truth for numerical
         tolerances, quadrature orders, RNG seed, sweep concurrency and log output.
"""

import os
from dotenv import load_dotenv

load_dotenv()


def _number(key: str, default: str, cast=float):
    """Get a numeric env var (with default) or raise naming the variable."""
    raw = os.getenv(key, default)
    try:
        return cast(raw)
    except ValueError:
        raise EnvironmentError(f"Malformed numeric env var: {key}={raw!r}")


# ── State validity ──────────────────────────────────────────
TOL_PSD = _number("TOL_PSD", "1e-10")
UNIT_TOL = 1e-12          # |e| = 1 check, |a| < 1 check, Q eigenvalue clamp
DEGENERATE_PROB = 1e-14   # p_e below this has no conditional state

# ── Quadrature ──────────────────────────────────────────────
ORDER_THETA = _number("ORDER_THETA", "256", int)
ORDER_PHI = _number("ORDER_PHI", "512", int)
TARGET_REL_TOL = _number("TARGET_REL_TOL", "1e-10")

# ── Special functions ───────────────────────────────────────
CARLSON_TOL = _number("CARLSON_TOL", "1e-16")
CARLSON_MAX_ITER = _number("CARLSON_MAX_ITER", "60", int)
NONREAL_REL_TOL = 1e-9

# ── Boundary root finding ───────────────────────────────────
ROOT_XTOL = _number("ROOT_XTOL", "1e-10")
BRACKET_FLOOR = _number("BRACKET_FLOOR", "1e-4")
BRACKET_SCAN = _number("BRACKET_SCAN", "16", int)

# ── LHS model ───────────────────────────────────────────────
MODEL_REGION_TOL = 1e-9   # g >= -tol admits the LHS model
ON_BOUNDARY_TOL = 1e-6    # |g| <= tol for verify_model
SAMPLE_BLOCK = _number("SAMPLE_BLOCK", "262144", int)

# ── Verification / CLI ──────────────────────────────────────
DEFAULT_SEED = _number("DEFAULT_SEED", "20140101", int)
VERIFY_THRESHOLD = _number("VERIFY_THRESHOLD", "1e-7")
SWEEP_WORKERS = _number("SWEEP_WORKERS", "4", int)

# ── Logging ─────────────────────────────────────────────────
LOG_FILE = os.getenv("LOG_FILE", "steering.log")
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
