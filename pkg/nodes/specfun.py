"""
NODE: Special Functions
PURPOSE: Carlson symmetric integrals R_F, R_D, R_G by the duplication theorem and the
         Legendre elliptic integrals F(φ|m), E(φ|m), K(m), E(m) built on them
         (parameter convention: m = k²). Also evaluates the bracket of the elliptic
         N_T closed form so its imaginary parts can be checked for cancellation.
INPUT: real or complex arguments on the principal branch
OUTPUT: float (all-real inputs) or complex
DEPENDENCIES: utils.config (tolerances), utils.errors.DomainError
"""

import cmath
import math
from dataclasses import dataclass
from numbers import Real

from utils.config import CARLSON_TOL, CARLSON_MAX_ITER, NONREAL_REL_TOL
from utils.errors import DomainError, NonRealResult, OrderingViolated
from utils.logger import log_debug


# ── Argument handling ────────────────────────────────────────


def _is_real(*values) -> bool:
    return all(isinstance(v, Real) for v in values)


def _prepare(args: tuple, name: str) -> tuple[list[complex], bool]:
    """Cast to complex and reject the negative real axis."""
    real = _is_real(*args)
    out = []
    for w in args:
        w = complex(w)
        if w.imag == 0 and w.real < 0:
            raise DomainError(f"{name}: argument {w.real!r} on the negative real axis")
        out.append(w)
    return out, real


def _finish(value: complex, real: bool):
    return value.real if real else value


# ── Carlson symmetric integrals ──────────────────────────────


def carlson_rf(x, y, z):
    """
    R_F(x, y, z) = ½ ∫₀^∞ dt / √((t+x)(t+y)(t+z)).

    Args:
        x, y, z: at most one zero, none on the negative real axis.

    Returns:
        float for real inputs, complex otherwise.
    """
    (x, y, z), real = _prepare((x, y, z), "R_F")
    if sum(w == 0 for w in (x, y, z)) > 1:
        raise DomainError("R_F: more than one argument is zero")

    a0 = (x + y + z) / 3
    q = (3 * CARLSON_TOL) ** (-1 / 6) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    xm, ym, zm, am = x, y, z, a0
    scale = 1.0
    for m in range(CARLSON_MAX_ITER):
        if scale * q < abs(am):
            break
        sx, sy, sz = cmath.sqrt(xm), cmath.sqrt(ym), cmath.sqrt(zm)
        lam = sx * sy + sx * sz + sy * sz
        xm, ym, zm, am = (xm + lam) / 4, (ym + lam) / 4, (zm + lam) / 4, (am + lam) / 4
        scale /= 4
    else:
        log_debug(f"[Carlson] R_F hit the iteration cap at ({x}, {y}, {z})")

    X = (a0 - x) * scale / am
    Y = (a0 - y) * scale / am
    Z = -X - Y
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    value = (1 - e2 / 10 + e3 / 14 + e2 * e2 / 24 - 3 * e2 * e3 / 44) / cmath.sqrt(am)
    return _finish(value, real)


def carlson_rd(x, y, z):
    """R_D(x, y, z) = (3/2) ∫₀^∞ dt / ((t+z) √((t+x)(t+y)(t+z))); z ≠ 0, x and y not both zero."""
    (x, y, z), real = _prepare((x, y, z), "R_D")
    if z == 0:
        raise DomainError("R_D: third argument is zero")
    if x == 0 and y == 0:
        raise DomainError("R_D: first two arguments are both zero")

    a0 = (x + y + 3 * z) / 5
    q = (CARLSON_TOL / 4) ** (-1 / 6) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    xm, ym, zm, am = x, y, z, a0
    scale = 1.0
    tail = 0j
    for m in range(CARLSON_MAX_ITER):
        if scale * q < abs(am):
            break
        sx, sy, sz = cmath.sqrt(xm), cmath.sqrt(ym), cmath.sqrt(zm)
        lam = sx * sy + sx * sz + sy * sz
        tail += scale / (sz * (zm + lam))
        xm, ym, zm, am = (xm + lam) / 4, (ym + lam) / 4, (zm + lam) / 4, (am + lam) / 4
        scale /= 4
    else:
        log_debug(f"[Carlson] R_D hit the iteration cap at ({x}, {y}, {z})")

    X = (a0 - x) * scale / am
    Y = (a0 - y) * scale / am
    Z = -(X + Y) / 3
    xy = X * Y
    e2 = xy - 6 * Z * Z
    e3 = (3 * xy - 8 * Z * Z) * Z
    e4 = 3 * (xy - Z * Z) * Z * Z
    e5 = xy * Z ** 3
    series = (1 - 3 * e2 / 14 + e3 / 6 + 9 * e2 * e2 / 88 - 3 * e4 / 22
              - 9 * e2 * e3 / 52 + 3 * e5 / 26)
    value = scale * series / (am * cmath.sqrt(am)) + 3 * tail
    return _finish(value, real)


def carlson_rg(x: float, y: float, z: float) -> float:
    """
    R_G(x, y, z) for nonnegative reals; equals the sphere average of √(x n1² + y n2² + z n3²).

    The middle argument goes into the z slot so (x−z)(y−z) ≤ 0 and nothing cancels.
    """
    vals = sorted(float(v) for v in (x, y, z))
    if vals[0] < 0:
        raise DomainError(f"R_G: negative argument {vals[0]!r}")
    lo, mid, hi = vals
    if mid == 0:
        return math.sqrt(hi) / 2
    two_rg = (mid * carlson_rf(lo, hi, mid)
              - (lo - mid) * (hi - mid) * carlson_rd(lo, hi, mid) / 3
              + math.sqrt(lo * hi / mid))
    return two_rg / 2


# ── Legendre forms ───────────────────────────────────────────


def _reduce(amplitude) -> tuple[int, object, bool]:
    """Split φ = φ' + kπ with |Re φ'| ≤ π/2."""
    real = _is_real(amplitude)
    phi = float(amplitude) if real else complex(amplitude)
    k = round(phi.real / math.pi)
    return k, phi - k * math.pi, real


def _sin_cos(phi, real: bool):
    if real:
        return math.sin(phi), math.cos(phi)
    return cmath.sin(phi), cmath.cos(phi)


def _delta_sq(m: float, s, real: bool):
    d = 1 - m * s * s
    if real and -1e-15 < d < 0:
        d = 0.0
    return d


def legendre_f(amplitude, parameter: float):
    """Incomplete elliptic integral of the first kind F(φ|m) = ∫₀^φ dθ / √(1 − m sin²θ)."""
    m = float(parameter)
    k, phi, real = _reduce(amplitude)

    if m == 1:
        if k != 0:
            raise DomainError("F(φ|1) diverges for |Re φ| ≥ π/2")
        s, _ = _sin_cos(phi, real)
        if real and abs(s) >= 1:
            raise DomainError("F(φ|1) diverges at φ = ±π/2")
        return math.atanh(s) if real else cmath.atanh(s)

    s, c = _sin_cos(phi, real)
    if s == 0:
        value = 0.0 if real else 0j
    else:
        value = s * carlson_rf(c * c, _delta_sq(m, s, real), 1.0)
    if k:
        value = value + 2 * k * k_complete(m)
    return value


def legendre_e(amplitude, parameter: float):
    """Incomplete elliptic integral of the second kind E(φ|m) = ∫₀^φ √(1 − m sin²θ) dθ."""
    m = float(parameter)
    k, phi, real = _reduce(amplitude)
    s, c = _sin_cos(phi, real)

    if m == 1:
        return s + 2 * k
    if s == 0:
        value = 0.0 if real else 0j
    else:
        cc, dd = c * c, _delta_sq(m, s, real)
        value = s * carlson_rf(cc, dd, 1.0) - (m / 3) * s ** 3 * carlson_rd(cc, dd, 1.0)
    if k:
        value = value + 2 * k * e_complete(m)
    return value


def k_complete(m: float) -> float:
    """K(m) = R_F(0, 1−m, 1); diverges at m = 1."""
    if m >= 1:
        raise DomainError(f"K(m) undefined for m = {m!r} ≥ 1")
    return carlson_rf(0.0, 1.0 - m, 1.0)


def e_complete(m: float) -> float:
    """E(m) = R_F(0, 1−m, 1) − (m/3) R_D(0, 1−m, 1)."""
    if m == 1:
        return 1.0
    if m > 1:
        raise DomainError(f"E(m) undefined for m = {m!r} > 1")
    return carlson_rf(0.0, 1.0 - m, 1.0) - (m / 3) * carlson_rd(0.0, 1.0 - m, 1.0)


# ── Published N_T closed form ────────────────────────────────


@dataclass(frozen=True)
class EllipticParams:
    A1: complex
    A2: complex
    B: float
    C: float
    X: float
    Y: float


def _check_ordered(a: float, b: float, c: float) -> None:
    if not (0 < a < b < c):
        raise OrderingViolated(f"need 0 < a < b < c, got ({a}, {b}, {c})")


def elliptic_params(a: float, b: float, c: float) -> EllipticParams:
    """Amplitudes, parameters and constants of the elliptic closed form, for 0 < a < b < c."""
    _check_ordered(a, b, c)
    ca, cb = c * c - a * a, c * c - b * b
    return EllipticParams(
        A1=1j * math.asinh(math.sqrt(ca) / a),
        A2=1j * math.log((b + c) / math.sqrt(cb)),
        B=a * a * cb / (b * b * ca),
        C=c * c * (b * b - a * a) / (b * b * ca),
        X=c * (c - a) * ((a + c) * (b + c) + a * b),
        Y=(a + b + c) * math.sqrt(ca),
    )


def elliptic_bracket(params: EllipticParams, a: float, b: float, c: float) -> float:
    """
    X + Y{b(c−a)E(C) + a(b+c)K(C) + i b(c−a)[E(A1|B) − E(A2|B)] + i c(a+b)[F(A1|B) − F(A2|B)]}.

    Raises NonRealResult if the imaginary parts fail to cancel.
    """
    p = params
    inner = (b * (c - a) * e_complete(p.C)
             + a * (b + c) * k_complete(p.C)
             + 1j * b * (c - a) * (legendre_e(p.A1, p.B) - legendre_e(p.A2, p.B))
             + 1j * c * (a + b) * (legendre_f(p.A1, p.B) - legendre_f(p.A2, p.B)))
    value = p.X + p.Y * inner
    if abs(value.imag) > NONREAL_REL_TOL * abs(value):
        raise NonRealResult(f"bracket imaginary residue {value.imag:.3e} at ({a}, {b}, {c})")
    return value.real


def mean_width_integral(a: float, b: float, c: float) -> float:
    """
    ∫ (nᵀ T⁻² n)⁻² d²n for T with singular values 0 < a < b < c, in Legendre form:
    2π abc [a² F(φ|m)/√(c²−a²) + √(c²−a²) E(φ|m) + ab/c], cos φ = a/c, m = (c²−b²)/(c²−a²).
    """
    _check_ordered(a, b, c)
    root = math.sqrt(c * c - a * a)
    phi = math.acos(a / c)
    m = (c * c - b * b) / (c * c - a * a)
    return 2 * math.pi * a * b * c * (a * a * legendre_f(phi, m) / root
                                       + root * legendre_e(phi, m) + a * b / c)


# ── Standalone test ──────────────────────────────────────────
if __name__ == "__main__":
    print(f"R_F(2,3,4)   = {carlson_rf(2, 3, 4):.17g}")
    print(f"R_F(0,1,2)   = {carlson_rf(0, 1, 2):.17g}")
    print(f"K(1/2)       = {k_complete(0.5):.17g}")
    print(f"E(1/2)       = {e_complete(0.5):.17g}")
    print(f"F(0.5i|0.3)  = {legendre_f(0.5j, 0.3)}")
    p = elliptic_params(0.3, 0.5, 0.7)
    print(f"bracket      = {elliptic_bracket(p, 0.3, 0.5, 0.7):.17g}")
    print(f"Legendre N⁻¹ = {mean_width_integral(0.3, 0.5, 0.7):.17g}")
