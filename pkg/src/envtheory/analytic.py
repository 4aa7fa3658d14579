"""Closed-form envelope solutions and the principal Lambert function."""
from __future__ import annotations

import math

from .errors import DomainError, NonConvergence
from .model import binomial

__all__ = [
    "lambert_w0",
    "powerlaw_solution",
    "exponential_delta",
    "exponential_solution",
]

_INV_E = math.exp(-1.0)


def _w0_guess(x: float) -> float:
    if x < -0.25:
        p = math.sqrt(max(2.0 * (math.e * x + 1.0), 0.0))
        return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p**3
    if x > 3.0:
        l1 = math.log(x)
        l2 = math.log(l1)
        return l1 - l2 + l2 / l1
    # Winitzki's uniform approximation
    lx = math.log1p(x)
    return lx * (1.0 - math.log1p(lx) / (2.0 + lx))


def lambert_w0(x: float) -> float:
    """Principal branch ``W_0`` of the Lambert function for real ``x >= -1/e``.

    Halley iteration from a piecewise initial guess: branch-point series
    near ``-1/e``, log asymptotics for large ``x`` and Winitzki's formula
    in between.

    Raises
    ------
    DomainError
        If ``x < -1/e``.
    """
    x = float(x)
    if math.isnan(x):
        raise DomainError("lambert_w0 of NaN")
    if x < -_INV_E:
        if x > -_INV_E - 4e-17:
            return -1.0
        raise DomainError(f"lambert_w0 undefined for x={x!r} < -1/e")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return math.inf
    w = _w0_guess(x)
    for _ in range(12):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        if wp1 == 0.0:
            return w
        step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w_new = w - step
        if w_new < -1.0:
            w_new = -1.0
        if abs(w_new - w) <= 1e-15 * max(1.0, abs(w_new)):
            return w_new
        w = w_new
    # the branch point region can stall one ulp away from the fixed point
    if abs(w * math.exp(w) - x) <= 1e-14 * max(1.0, abs(x)):
        return w
    raise NonConvergence(f"lambert_w0 did not converge for x={x!r}")


def _check_common(F, alpha, a, N, K):
    if not (F > 0 and alpha > 0 and a > 0):
        raise DomainError("need F, alpha, a > 0")
    if not 2 <= K <= N:
        raise DomainError("need 2 <= K <= N")


def powerlaw_solution(F, alpha, a, b, N, K, D, Q):
    """Envelope energy and ``rho0`` for ``T = F p**alpha`` and ``V = a sgn(b) r**b``.

    ``D`` only enters through the global quantum number ``Q``; it is kept
    in the signature for symmetry with the numerical solver.

    Returns
    -------
    (E, rho0) : tuple of float
    """
    _check_common(F, alpha, a, N, K)
    if b == 0 or not b > -alpha:
        raise DomainError("need b != 0 and b > -alpha")
    if not Q > 0:
        raise DomainError("need Q > 0")
    CNK, CK2, CN2 = binomial(N, K), binomial(K, 2), binomial(N, 2)
    s = math.copysign(1.0, b)
    rho0 = (
        alpha * N * F * Q**alpha / (a * abs(b) * CNK * CN2 ** (alpha / 2) * CK2 ** (b / 2))
    ) ** (1.0 / (b + alpha))
    # work in logs: the bracket mixes very large and very small factors
    log_inner = (
        b * math.log(N * F / abs(b))
        + alpha * math.log(a * CNK / alpha)
        + alpha * b / 2 * math.log(CK2 / CN2)
        + alpha * b * math.log(Q)
    )
    E = s * (b + alpha) * math.exp(log_inner / (b + alpha))
    return E, rho0


def exponential_delta(F, alpha, a, b, gamma, N, K, Q) -> float:
    """Lambert argument for the well ``-a exp(-b r**gamma)``; bound iff ``>= -1/e``."""
    _check_common(F, alpha, a, N, K)
    if not (b > 0 and gamma > 0 and Q > 0):
        raise DomainError("need b, gamma, Q > 0")
    CNK, CK2, CN2 = binomial(N, K), binomial(K, 2), binomial(N, 2)
    inner = (
        alpha * b ** (alpha / gamma) * F / (a * gamma)
        * N / CNK
        * (CK2 / CN2) ** (alpha / 2)
        * Q**alpha
    )
    return -gamma / (alpha + gamma) * inner ** (gamma / (alpha + gamma))


def exponential_solution(F, alpha, a, b, gamma, N, K, Q):
    """Envelope ``(E, rho0)`` for an exponential well, or ``None`` when unbound."""
    delta = exponential_delta(F, alpha, a, b, gamma, N, K, Q)
    if delta < -_INV_E:
        return None
    w = lambert_w0(delta)
    CNK, CK2 = binomial(N, K), binomial(K, 2)
    rho0 = (-(alpha + gamma) / (gamma * b) * w) ** (1.0 / gamma) / math.sqrt(CK2)
    E = -a * CNK * math.exp((alpha + gamma) / gamma * w) * ((alpha + gamma) / alpha * w + 1.0)
    return E, rho0
