"""
UTIL: Errors
PURPOSE: Typed failure modes of the steering toolkit. Library code raises these;
         node execute() entry points and main.py catch SteeringError and report it.
"""


class SteeringError(Exception):
    """Base class for every domain failure."""


# ── States ──────────────────────────────────────────────────
class NotAState(SteeringError):
    """Reconstructed density matrix is not positive semidefinite."""

    def __init__(self, min_eigenvalue: float, message: str | None = None):
        self.min_eigenvalue = float(min_eigenvalue)
        super().__init__(message or f"density matrix has eigenvalue {self.min_eigenvalue:.3e} < 0")


class DegenerateOutcome(SteeringError):
    """Measurement outcome with (numerically) zero probability."""


class AliceBlochUnit(SteeringError):
    """|a| = 1: Alice's reduced state is pure, the ellipsoid is undefined."""


class DegenerateEllipsoid(SteeringError):
    """A semiaxis is zero where a full-rank ellipsoid is required."""


class SingularT(SteeringError):
    """Correlation matrix is not invertible."""


# ── Numerics ────────────────────────────────────────────────
class BoundViolated(SteeringError):
    """Rejection sampler saw a density value above its envelope."""


class DomainError(SteeringError):
    """Special function evaluated outside its domain."""


class OrderingViolated(SteeringError):
    """Closed form requires strictly ordered semiaxes."""


class NonRealResult(SteeringError):
    """An expression expected to be real kept a material imaginary part."""


class NoRoot(SteeringError):
    """Boundary function has no sign change on the bracket."""


# ── LHS model ───────────────────────────────────────────────
class NotInModelRegion(SteeringError):
    """State lies outside the region covered by the LHS model (g < 0)."""


class NotOnBoundary(SteeringError):
    """Deterministic-model verification requires g = 0."""


# ── Classification ──────────────────────────────────────────
class ConflictingProofs(SteeringError):
    """A state came out both provably steerable and provably non-steerable."""
