"""
NODE: Two-Qubit States
PURPOSE: Pauli-basis representation ρ = ¼(1⊗1 + a·σ⊗1 + 1⊗b·σ + Σ T_jk σ_j⊗σ_k),
         PSD validation, covariance matrix, and reduction of T to canonical diagonal form
         by local proper rotations.
INPUT: Bloch vectors a, b and correlation matrix T (or a 4×4 density matrix / JSON payload)
OUTPUT: TwoQubitState, TState, CanonicalForm
DEPENDENCIES: numpy (eigvalsh, svd, kron)
"""

from dataclasses import dataclass, field

import numpy as np

from utils.config import TOL_PSD
from utils.errors import NotAState
from utils.logger import log_info, log_debug
from utils.error_report import report_error

# ── Pauli basis ──────────────────────────────────────────────
IDENTITY = np.eye(2, dtype=complex)
PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
SIGMA_A = tuple(np.kron(p, IDENTITY) for p in PAULI)
SIGMA_B = tuple(np.kron(IDENTITY, p) for p in PAULI)
SIGMA_AB = tuple(tuple(np.kron(p, q) for q in PAULI) for p in PAULI)


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    a: np.ndarray
    b: np.ndarray
    T: np.ndarray


@dataclass(frozen=True)
class TState:
    """a = b = 0, T = diag(t). Valid iff t lies in the tetrahedron with vertices (−1,−1,−1), (−1,1,1), (1,−1,1), (1,1,−1)."""
    t: tuple[float, float, float]

    @property
    def s(self) -> tuple[float, float, float]:
        return tuple(abs(x) for x in self.t)

    def to_state(self) -> TwoQubitState:
        return TwoQubitState(np.zeros(3), np.zeros(3), np.diag(np.asarray(self.t, dtype=float)))


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    R_A: np.ndarray
    R_B: np.ndarray
    D: np.ndarray
    a_loc: np.ndarray
    b_loc: np.ndarray
    s: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "s", np.abs(self.D))


# ── Construction ─────────────────────────────────────────────


def _vector(x, name: str) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.shape != (3,) or not np.all(np.isfinite(v)):
        raise ValueError(f"{name} must be a finite 3-vector, got {x!r}")
    return v


def _rho(a: np.ndarray, b: np.ndarray, T: np.ndarray) -> np.ndarray:
    rho = np.eye(4, dtype=complex)
    for j in range(3):
        rho += a[j] * SIGMA_A[j] + b[j] * SIGMA_B[j]
        for k in range(3):
            rho += T[j, k] * SIGMA_AB[j][k]
    return rho / 4


def make_state(a, b, T) -> TwoQubitState:
    """
    Build a validated state.

    Raises:
        NotAState: the reconstructed ρ has an eigenvalue below −TOL_PSD.
        ValueError: malformed shapes or non-finite entries.
    """
    a, b = _vector(a, "a"), _vector(b, "b")
    T = np.asarray(T, dtype=float)
    if T.shape != (3, 3) or not np.all(np.isfinite(T)):
        raise ValueError(f"T must be a finite 3×3 matrix, got shape {T.shape}")

    lowest = float(np.linalg.eigvalsh(_rho(a, b, T))[0])
    if lowest < -TOL_PSD:
        raise NotAState(lowest)
    return TwoQubitState(a, b, T)


def make_tstate(t) -> TState:
    t = _vector(t, "t")
    make_state(np.zeros(3), np.zeros(3), np.diag(t))
    return TState(tuple(float(x) for x in t))


def density_matrix(state: TwoQubitState) -> np.ndarray:
    return _rho(state.a, state.b, state.T)


def from_density_matrix(rho) -> TwoQubitState:
    """Pauli expectation values a_j = Tr ρ σ_j⊗1, b_k = Tr ρ 1⊗σ_k, T_jk = Tr ρ σ_j⊗σ_k."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"density matrix must be 4×4, got {rho.shape}")
    if not np.allclose(rho, rho.conj().T, atol=1e-12):
        raise ValueError("density matrix is not Hermitian")
    trace = np.trace(rho).real
    if abs(trace - 1) > 1e-10:
        raise ValueError(f"density matrix has trace {trace}")

    a = np.array([np.trace(rho @ s).real for s in SIGMA_A])
    b = np.array([np.trace(rho @ s).real for s in SIGMA_B])
    T = np.array([[np.trace(rho @ s).real for s in row] for row in SIGMA_AB])
    return make_state(a, b, T)


# ── Local structure ──────────────────────────────────────────


def singular_values(M) -> np.ndarray:
    """Descending nonnegative singular values of a 3×3 matrix."""
    return np.linalg.svd(np.asarray(M, dtype=float), compute_uv=False)


def covariance_matrix(state: TwoQubitState) -> np.ndarray:
    """C = T − a bᵀ, i.e. ⟨σ_j⊗σ_k⟩ − ⟨σ_j⊗1⟩⟨1⊗σ_k⟩."""
    return state.T - np.outer(state.a, state.b)


def canonical_form(state: TwoQubitState) -> CanonicalForm:
    """
    T = R_A diag(D) R_Bᵀ with R_A, R_B ∈ SO(3), |D| descending.

    Reflections needed to make U, V proper are pushed into the signs of D, so D has
    an odd number of negative entries exactly when det T < 0.
    """
    U, S, Vt = np.linalg.svd(state.T)
    V = Vt.T
    D = S.copy()
    if np.linalg.det(U) < 0:
        U, D = -U, -D
    if np.linalg.det(V) < 0:
        V, D = -V, -D
    return CanonicalForm(R_A=U, R_B=V, D=D, a_loc=U.T @ state.a, b_loc=V.T @ state.b)


def as_tstate(state: TwoQubitState) -> TState | None:
    """T-state in canonical form when a = b = 0 exactly, else None."""
    if np.any(state.a != 0) or np.any(state.b != 0):
        return None
    return TState(tuple(float(x) for x in canonical_form(state).D))


def partial_transpose_min_eigenvalue(state: TwoQubitState) -> float:
    rho = density_matrix(state).reshape(2, 2, 2, 2)
    rho_tb = rho.transpose(0, 3, 2, 1).reshape(4, 4)
    return float(np.linalg.eigvalsh(rho_tb)[0])


# ── Payload parsing ──────────────────────────────────────────


def parse_state(payload: dict) -> TwoQubitState:
    """Accepts {"a": [...], "b": [...], "T": [[...]×3]} or {"t": [t1, t2, t3]}."""
    if "t" in payload:
        return make_tstate(payload["t"]).to_state()
    missing = [k for k in ("a", "b", "T") if k not in payload]
    if missing:
        raise ValueError(f"state payload is missing {', '.join(missing)}")
    return make_state(payload["a"], payload["b"], payload["T"])


def execute(payload: dict) -> TwoQubitState | None:
    """
    Validate a JSON state payload.

    Returns:
        TwoQubitState, or None if the payload is malformed or not a state.
    """
    try:
        state = parse_state(payload)
        log_debug(f"[State] eigenvalues {np.linalg.eigvalsh(density_matrix(state)).round(12).tolist()}")
        log_info(f"[State] ✓ |a|={np.linalg.norm(state.a):.4f} |b|={np.linalg.norm(state.b):.4f} "
                 f"s={singular_values(state.T).round(6).tolist()}")
        return state
    except NotAState as e:
        report_error(f"not a state: {e}", node_name="qstate")
        return None
    except (ValueError, TypeError) as e:
        report_error(f"malformed state: {e}", node_name="qstate")
        return None


# ── Standalone test ──────────────────────────────────────────
if __name__ == "__main__":
    singlet = make_tstate([-1, -1, -1])
    print(f"Singlet ρ eigenvalues: {np.linalg.eigvalsh(density_matrix(singlet.to_state())).round(12)}")
    state = execute({"a": [0.1, 0, 0.2], "b": [0, 0.3, 0], "T": [[0.2, 0.1, 0], [0, -0.3, 0], [0.1, 0, 0.4]]})
    if state:
        cf = canonical_form(state)
        print(f"D = {cf.D}")
        print(f"reconstruction error = {np.abs(cf.R_A @ np.diag(cf.D) @ cf.R_B.T - state.T).max():.2e}")
