"""Numerical envelope-theory solver.

The envelope energy of a state is a stationary value of

    E(rho) = N T(p) + sum_K C_N^K V(sqrt(C_K^2) rho),   p = Q / (sqrt(C_N^2) rho),

where ``rho`` is the root-mean-square interparticle distance and ``Q`` the
(possibly modified) global quantum number. The stationarity condition is
solved as a scalar equation in ``u = ln rho``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NegativeStiffness, NoBoundState, NonConvergence, NoRoot
from .model import (
    ExponentialWell,
    PowerLawKinetic,
    PowerLawPotential,
    StateSpec,
    SystemSpec,
    binomial,
)

__all__ = [
    "BoundCharacter",
    "EtSolution",
    "solve_et",
    "effective_Q",
    "dos_phi",
    "calibrate_phi",
    "variational_character",
]

_U_GRID = np.linspace(-30.0, 30.0, 1201)


class BoundCharacter(enum.Enum):
    UpperBound = "upper"
    LowerBound = "lower"
    Unknown = "unknown"


@dataclass(frozen=True)
class EtSolution:
    """Envelope solution for one value of the effective quantum number."""

    E: float
    rho0: float
    p0: float
    phi: float
    character: BoundCharacter
    Q_eff: float
    multiple_roots: bool = field(default=False, compare=False)


def _call(law, method, x):
    f = law if method is None else getattr(law, method)
    try:
        return np.asarray(f(x), dtype=float)
    except (TypeError, ValueError):
        return np.array([f(float(v)) for v in np.ravel(x)], dtype=float).reshape(np.shape(x))


def _sides(system: SystemSpec, Q, rho):
    """Kinetic and potential sides of the stationarity condition."""
    p = Q / (math.sqrt(system.pairs) * rho)
    lhs = system.N * p * _call(system.kinetic, "d1", p)
    rhs = 0.0
    for K, V in system.terms:
        ck = math.sqrt(binomial(K, 2))
        rhs = rhs + binomial(system.N, K) * ck * rho * _call(V, "d1", ck * rho)
    return p, lhs, rhs


def _energy(system: SystemSpec, Q, rho):
    p = Q / (math.sqrt(system.pairs) * rho)
    E = system.N * float(_call(system.kinetic, None, p))
    for K, V in system.terms:
        E += binomial(system.N, K) * float(_call(V, None, math.sqrt(binomial(K, 2)) * rho))
    return E, p


def _residual(system, Q, u):
    _, lhs, rhs = _sides(system, Q, np.exp(u))
    with np.errstate(invalid="ignore", divide="ignore"):
        return (lhs - rhs) / (np.abs(lhs) + np.abs(rhs))


def solve_et(system: SystemSpec, Q_eff: float, phi: float = 2.0) -> EtSolution:
    """Solve the envelope equations for the effective quantum number ``Q_eff``.

    ``phi`` is only recorded on the result; pass the value used to build
    ``Q_eff`` (see :func:`effective_Q`).

    Raises
    ------
    NoBoundState
        When the stationarity condition has no root for ``ln rho`` in [-30, 30].
    NonConvergence
        When the polished root misses the residual tolerance.
    """
    if not Q_eff > 0:
        raise DomainError("Q_eff must be positive")
    with np.errstate(all="ignore"):
        g = _residual(system, Q_eff, _U_GRID)
    ok = np.isfinite(g)
    roots = []
    for i in range(len(_U_GRID) - 1):
        if not (ok[i] and ok[i + 1]):
            continue
        if g[i] == 0.0:
            roots.append(_U_GRID[i])
        elif g[i] * g[i + 1] < 0.0:
            u = brentq(
                lambda t: float(_residual(system, Q_eff, t)),
                _U_GRID[i], _U_GRID[i + 1], xtol=1e-15, rtol=1e-15, maxiter=200,
            )
            roots.append(u)
    if not roots:
        raise NoBoundState(f"no envelope solution for Q_eff={Q_eff:g}")
    best = None
    for u in roots:
        rho = math.exp(u)
        E, p = _energy(system, Q_eff, rho)
        if best is None or E < best[0]:
            best = (E, rho, p)
    E, rho, p = best
    _, lhs, rhs = _sides(system, Q_eff, rho)
    if abs(lhs - rhs) > 1e-10 * max(abs(lhs), abs(rhs)):
        raise NonConvergence(f"envelope residual too large for Q_eff={Q_eff:g}")
    return EtSolution(
        E=E,
        rho0=rho,
        p0=p,
        phi=phi,
        character=variational_character(system) if phi == 2.0 else BoundCharacter.Unknown,
        Q_eff=Q_eff,
        multiple_roots=len(roots) > 1,
    )


def effective_Q(state: StateSpec, D: int, phi: float) -> float:
    """Modified global quantum number ``sum(phi n + l + (D + phi - 2) / 2)``.

    ``phi = 2`` gives back the usual ``Q = sum(2n + l + D/2)``.
    """
    if not phi > 0:
        raise DomainError("phi must be positive")
    return float(sum(phi * n + l + (D + phi - 2) / 2 for n, l in state.quanta))


def dos_phi(system: SystemSpec, state: StateSpec) -> float:
    """Dominantly-orbital-state prediction of ``phi`` for a state.

    The envelope equations are solved at ``Q0 = sum(l + (D-2)/2)`` and the
    radial stiffness around that orbital solution sets ``phi``. With several
    interaction terms their curvatures are added.
    """
    D, N = system.D, system.N
    Q0 = sum(l + (D - 2) / 2 for _, l in state.quanta)
    if not Q0 > 0:
        raise DomainError("dos_phi needs Q0 > 0")
    sol = solve_et(system, Q0)
    rho, p = sol.rho0, sol.p0
    T1 = float(_call(system.kinetic, "d1", p))
    T2 = float(_call(system.kinetic, "d2", p))
    k = 2 * N * p * T1 / rho**2 + N * p**2 * T2 / rho**2
    for K, V in system.terms:
        ck2 = binomial(K, 2)
        k += ck2 * binomial(N, K) * float(_call(V, "d2", math.sqrt(ck2) * rho))
    if k < 0:
        raise NegativeStiffness(f"negative radial stiffness k={k:g}")
    return math.sqrt(k / (N * system.pairs * p**3 * T1)) * Q0


def calibrate_phi(
    system: SystemSpec, state: StateSpec, E_target: float, bracket=(0.05, 10.0)
) -> float:
    """Find ``phi`` such that the modified envelope energy of ``state`` is ``E_target``."""
    D = system.D

    def mismatch(phi):
        try:
            return solve_et(system, effective_Q(state, D, phi), phi).E - E_target
        except NoBoundState:
            # above the continuum threshold of a well
            return math.inf

    grid = np.geomspace(bracket[0], bracket[1], 81)
    vals = [mismatch(x) for x in grid]
    for lo, hi, flo, fhi in zip(grid, grid[1:], vals, vals[1:]):
        if flo == 0.0:
            return float(lo)
        if not math.isfinite(flo):
            continue
        if flo * fhi < 0:
            if not math.isfinite(fhi):
                # shrink onto the last bound value before the threshold
                a, b = lo, hi
                for _ in range(200):
                    m = 0.5 * (a + b)
                    if math.isfinite(mismatch(m)):
                        a = m
                    else:
                        b = m
                if mismatch(a) < 0:
                    continue
                hi = a
            phi = brentq(mismatch, lo, hi, xtol=1e-14, rtol=1e-15, maxiter=300)
            E = mismatch(phi) + E_target
            if abs(E - E_target) > 1e-8 * abs(E_target):
                raise NonConvergence("phi calibration missed the target energy")
            return float(phi)
    raise NoRoot(f"energy {E_target:g} not reachable for phi in {bracket}")


def _builtin_convexity(law):
    """Convexity of ``b(x) = law(sqrt(x))`` for built-in laws, or None."""
    if isinstance(law, PowerLawKinetic):
        e = law.alpha
    elif isinstance(law, PowerLawPotential):
        e = law.b
    elif isinstance(law, ExponentialWell):
        return "concave" if law.gamma <= 2 else "mixed"
    else:
        return None
    if e < 2:
        return "concave"
    if e > 2:
        return "convex"
    return "linear"


def _sampled_convexity(law):
    # 64 log-spaced points over 6 decades of x = r**2
    x = np.geomspace(1e-3, 1e3, 64)
    with np.errstate(all="ignore"):
        b = _call(law, None, np.sqrt(x))
    h0, h1 = x[1:-1] - x[:-2], x[2:] - x[1:-1]
    d2 = 2 * (b[2:] / (h1 * (h0 + h1)) - b[1:-1] / (h0 * h1) + b[:-2] / (h0 * (h0 + h1)))
    slack = 1e-8 * (np.abs(b[2:]) + np.abs(b[1:-1]) + np.abs(b[:-2])) / (h0 * h1)
    keep = np.isfinite(d2)
    d2, slack = d2[keep], slack[keep]
    if d2.size == 0:
        return "mixed"
    if np.all(np.abs(d2) <= slack):
        return "linear"
    if np.all(d2 <= slack):
        return "concave"
    if np.all(d2 >= -slack):
        return "convex"
    return "mixed"


def variational_character(system: SystemSpec) -> BoundCharacter:
    """Upper/lower bound character of the unmodified envelope energy.

    Each law ``f`` is rewritten ``f(r) = b(r**2)``. Concave ``b`` for every
    law gives an upper bound, convex a lower bound; linear ``b`` is neutral.
    """
    kinds = []
    for law in [system.kinetic] + [V for _, V in system.terms]:
        kind = _builtin_convexity(law)
        kinds.append(kind if kind is not None else _sampled_convexity(law))
    kinds = {k for k in kinds if k != "linear"}
    if not kinds or kinds == {"concave"}:
        return BoundCharacter.UpperBound
    if kinds == {"convex"}:
        return BoundCharacter.LowerBound
    return BoundCharacter.Unknown
