"""Scalar Gaussian kernels and their truncated moments.

Everything downstream is built from the weighted power kernel

    g_p(t) = t^p exp(-t^2/2),   t >= 0,

its cumulative integral J_p(R) = int_0^R g_p(t) dt, the total mass
J_p(inf) = Gamma((p+1)/2) 2^((p-1)/2), and the one-dimensional Gaussian
CDF pair

    psi(t) = P(Z <= t),   phi(t) = 2 psi(t) - 1 = P(|Z| <= t),  t >= 0.

J_p is evaluated through the regularized lower incomplete gamma function
at (R^2/2; (p+1)/2), so j_lower/j_inverse round-trip at machine accuracy.
Inverses raise :class:`DomainError` where the result would be infinite
instead of returning ``inf``.

All functions accept scalars or numpy arrays and return matching shapes.
"""

from __future__ import annotations

import numpy as np
from scipy import special as sp

TOL_REL = 1e-12
"""Relative accuracy target for round trips and identities in this module."""


class DomainError(ValueError):
    """Argument outside the open domain where the function is finite."""


def _as_array(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _ret(arr: np.ndarray, scalar: bool):
    return float(arr) if scalar else arr


def g(p: float, t) -> np.ndarray | float:
    """Weighted power kernel g_p(t) = t^p exp(-t^2/2) for t >= 0."""
    tt, scalar = _as_array(t)
    if np.any(tt < 0):
        raise DomainError("g requires t >= 0")
    if p < 0 and np.any(tt == 0):
        raise DomainError("g with p < 0 diverges at t = 0")
    with np.errstate(invalid="ignore"):
        out = np.where(np.isinf(tt), 0.0, tt**p * np.exp(-(tt**2) / 2.0))
    return _ret(out, scalar)


def j_total(p: float) -> float:
    """Total mass J_p(inf) = Gamma((p+1)/2) * 2^((p-1)/2); requires p > -1."""
    if p <= -1:
        raise DomainError("j_total requires p > -1")
    return float(sp.gamma((p + 1.0) / 2.0) * 2.0 ** ((p - 1.0) / 2.0))


def j_lower(p: float, R) -> np.ndarray | float:
    """Truncated moment J_p(R) = int_0^R t^p exp(-t^2/2) dt.

    Computed as j_total(p) * P((p+1)/2, R^2/2) with P the regularized
    lower incomplete gamma function.  R = inf gives j_total(p).
    """
    RR, scalar = _as_array(R)
    if np.any(RR < 0):
        raise DomainError("j_lower requires R >= 0")
    out = j_total(p) * sp.gammainc((p + 1.0) / 2.0, RR**2 / 2.0)
    return _ret(out, scalar)


def j_inverse(p: float, y) -> np.ndarray | float:
    """Inverse of R -> j_lower(p, R) on [0, j_total(p)).

    Raises :class:`DomainError` for y < 0 or y >= j_total(p) (where the
    inverse would be infinite).
    """
    yy, scalar = _as_array(y)
    cp = j_total(p)
    if np.any(yy < 0) or np.any(yy >= cp):
        raise DomainError("j_inverse requires 0 <= y < j_total(p)")
    out = np.sqrt(2.0 * sp.gammaincinv((p + 1.0) / 2.0, yy / cp))
    return _ret(out, scalar)


def psi(t) -> np.ndarray | float:
    """Standard Gaussian CDF."""
    tt, scalar = _as_array(t)
    return _ret(sp.ndtr(tt), scalar)


def psi_inv(a) -> np.ndarray | float:
    """Gaussian quantile; domain (0, 1) open, endpoints raise."""
    aa, scalar = _as_array(a)
    if np.any(aa <= 0) or np.any(aa >= 1):
        raise DomainError("psi_inv requires 0 < a < 1")
    return _ret(sp.ndtri(aa), scalar)


def phi(t) -> np.ndarray | float:
    """Symmetric-interval CDF phi(t) = P(|Z| <= t) = erf(t/sqrt(2)), t >= 0."""
    tt, scalar = _as_array(t)
    if np.any(tt < 0):
        raise DomainError("phi requires t >= 0")
    return _ret(sp.erf(tt / np.sqrt(2.0)), scalar)


def phi_inv(a) -> np.ndarray | float:
    """Inverse of phi on [0, 1); phi_inv(1) would be infinite and raises."""
    aa, scalar = _as_array(a)
    if np.any(aa < 0) or np.any(aa >= 1):
        raise DomainError("phi_inv requires 0 <= a < 1")
    return _ret(np.sqrt(2.0) * sp.erfinv(aa), scalar)


def eta(a) -> np.ndarray | float:
    """Half-space first-variation ratio sqrt(2 pi) a psi_inv(a) e^{psi_inv(a)^2/2}.

    Defined on (0, 1); it vanishes at a = 1/2, is bounded below by -1, and
    grows without bound as a -> 1.
    """
    aa, scalar = _as_array(a)
    if np.any(aa <= 0) or np.any(aa >= 1):
        raise DomainError("eta requires 0 < a < 1")
    t = sp.ndtri(aa)
    out = np.sqrt(2.0 * np.pi) * aa * t * np.exp(t**2 / 2.0)
    return _ret(out, scalar)
