"""Modified Bessel function K, the radial profile phi, and the operator D.

phi_tau(z) = K_tau(sqrt z) / (sqrt z)^tau solves

    D phi = 4 z phi'' + 4 (tau + 1) phi' - phi = 0,

and its derivatives close under the shift phi_tau' = -phi_{tau+1} / 2.
Evaluation uses scipy's K as a fast path, certified against adaptive
quadrature of the integral representation

    K_tau(z) = integral_0^inf exp(-z cosh t) cosh(tau t) dt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy import integrate, special

from .reports import QuadratureError

_MIN_Z = 1e-8
_FAST_PATH_OK: dict[float, bool] = {}
_AUDIT_GRID = (0.1, 0.37, 1.0, 2.7, 7.4, 20.0, 45.0)
_AUDIT_RTOL = 1e-9


def bessel_k_integral(tau, z: float) -> float:
    """K_tau(z) by adaptive quadrature of the integral representation.

    The exponential scale exp(-z) is factored out so the quadrature runs at
    unit scale and keeps full relative precision even where K underflows
    toward zero.
    """
    if z <= 0:
        raise ValueError(f"K_tau needs z > 0, got {z}")
    t = float(tau)

    def integrand(u):
        return math.exp(-z * (math.cosh(u) - 1.0)) * math.cosh(t * u)

    # beyond this point the integrand is below exp(-720) even after the
    # cosh(tau u) growth; quad gets a finite interval
    upper = math.acosh(1.0 + 720.0 / z) + 1.0
    val, err = integrate.quad(integrand, 0.0, upper, epsabs=0.0, epsrel=1e-12, limit=300)
    if not math.isfinite(val) or err > 1e-10 * abs(val):
        raise QuadratureError(f"K integral did not converge at tau={t}, z={z} (err={err})")
    return math.exp(-z) * val


def _audit_fast_path(tau: float) -> bool:
    ok = _FAST_PATH_OK.get(tau)
    if ok is None:
        ok = True
        for z in _AUDIT_GRID:
            fast = float(special.kv(tau, z))
            slow = bessel_k_integral(tau, z)
            if not math.isclose(fast, slow, rel_tol=_AUDIT_RTOL):
                ok = False
                break
        _FAST_PATH_OK[tau] = ok
    return ok


def bessel_k(tau, z, method: str = "auto"):
    """K_tau(z) to at least 10 significant digits.

    method "auto" uses the library fast path once it has been certified
    against the integral oracle for this order; "quadrature" forces the
    integral representation.  Scalars and arrays are both accepted.
    """
    t = float(tau)
    if method == "quadrature":
        if np.ndim(z) == 0:
            return bessel_k_integral(t, float(z))
        return np.array([bessel_k_integral(t, float(v)) for v in np.asarray(z)])
    if method not in ("auto", "fast"):
        raise ValueError(f"unknown method {method!r}")
    if np.ndim(z) == 0:
        zf = float(z)
        if zf <= 0:
            raise ValueError(f"K_tau needs z > 0, got {zf}")
    else:
        if np.any(np.asarray(z) <= 0):
            raise ValueError("K_tau needs z > 0")
    if method == "auto" and not _audit_fast_path(t):
        return bessel_k(t, z, method="quadrature")
    out = special.kv(t, z)
    return float(out) if np.ndim(z) == 0 else out


def k_half_closed_form(z):
    """K_{1/2}(z) = sqrt(pi / (2 z)) exp(-z), an independent closed form."""
    z = np.asarray(z, dtype=float) if np.ndim(z) else float(z)
    return np.sqrt(np.pi / (2.0 * z)) * np.exp(-z)


def phi_tau(tau, z: float) -> tuple[float, float, float]:
    """(phi, phi', phi'') at z > 0.

    Derivatives come from the order-shift identities
    phi_tau' = -phi_{tau+1}/2 and phi_tau'' = phi_{tau+2}/4, which follow
    from K_nu'(w) = nu K_nu / w - K_{nu+1}.
    """
    if z < _MIN_Z:
        raise ValueError(f"phi evaluation refused below z={_MIN_Z:g} (singular endpoint)")
    t = float(tau)
    w = math.sqrt(z)
    v0 = bessel_k(t, w) / w ** t
    v1 = -0.5 * bessel_k(t + 1.0, w) / w ** (t + 1.0)
    v2 = 0.25 * bessel_k(t + 2.0, w) / w ** (t + 2.0)
    return v0, v1, v2


@dataclass
class RadialFunction:
    """A radial profile: order tau plus an evaluation rule (value, d1, d2)."""

    tau: Fraction | float
    eval: Callable[[float], tuple[float, float, float]]


def phi_radial(tau) -> RadialFunction:
    return RadialFunction(tau, lambda z: phi_tau(tau, z))


def constant_radial(c: float) -> RadialFunction:
    return RadialFunction(0, lambda z: (c, 0.0, 0.0))


def apply_D(tau, f: RadialFunction, z: float) -> float:
    """Evaluate D f = 4 z f'' + 4 (tau + 1) f' - f at z."""
    v0, v1, v2 = f.eval(z)
    t = float(tau)
    return 4.0 * z * v2 + 4.0 * (t + 1.0) * v1 - v0


def d_coefficient_identity(d: int, e: int) -> tuple[Fraction, Fraction]:
    """The two spellings of the first-order coefficient: 4(tau+1), 2(d+1-e).

    Both are returned as exact rationals; they agree identically in (d, e).
    """
    tau = Fraction(d - e - 1, 2)
    return 4 * (tau + 1), Fraction(2 * (d + 1 - e))


# ------------------------------------------------------- finite differences

def bessel_ode_residual_fd(tau, z: float) -> float:
    """Residual of z^2 K'' + z K' - (z^2 + tau^2) K with 5-point stencils."""
    t = float(tau)
    h = z / 150.0
    f = [bessel_k(t, z + k * h) for k in (-2, -1, 0, 1, 2)]
    d1 = (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h)
    d2 = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h)
    return z * z * d2 + z * d1 - (z * z + t * t) * f[2]


def phi_derivative_crosscheck(tau, z: float, tol: float = 1e-6) -> tuple[bool, float]:
    """Compare recurrence-based phi' with a central finite difference.

    Returns (agrees, discrepancy); disagreement above tol is flagged.
    """
    _, d1, _ = phi_tau(tau, z)
    h = z / 500.0
    f = [phi_tau(tau, z + k * h)[0] for k in (-2, -1, 1, 2)]
    fd = (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * h)
    scale = max(abs(d1), 1e-30)
    diff = abs(fd - d1) / scale
    return diff <= tol, diff


# ------------------------------------------------------------- fast vectors

def radial_profile_at(tau, w: np.ndarray) -> np.ndarray:
    """phi_tau evaluated at z = w^2, i.e. K_tau(w) / w^tau, vectorized."""
    t = float(tau)
    w = np.asarray(w, dtype=float)
    if t == 0.5:
        return k_half_closed_form(w) / np.sqrt(w)
    if t == -0.5:
        return k_half_closed_form(w) * np.sqrt(w)
    return special.kv(t, w) / w ** t


def radial_profile_d1_at(tau, w: np.ndarray) -> np.ndarray:
    """phi_tau' evaluated at z = w^2, via phi' = -phi_{tau+1}/2."""
    return -0.5 * radial_profile_at(float(tau) + 1.0, w)
