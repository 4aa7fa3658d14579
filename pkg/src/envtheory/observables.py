"""Interparticle-distance moments of envelope eigenstates."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .envelope import EtSolution, effective_Q, solve_et
from .errors import DomainError, MixedQ0
from .model import StateSpec, SystemSpec, quantum_numbers
from .oscillator import SymmetrizedState, radial_moment, scale_parameters, symmetrize

__all__ = [
    "ObservableReport",
    "observable_rk",
    "observable_approx",
    "observable_report",
    "compute_nu",
    "envelope_state",
]


@dataclass(frozen=True)
class ObservableReport:
    k: float
    exact: float | None
    approx: float
    breakdown: tuple


def _check_q0(state: SymmetrizedState, phi: float):
    if phi != 2.0 and len({s.Q0 for s in state.states}) > 1:
        raise MixedQ0(f"{state.label()} mixes several Q0 values; phi={phi:g} is ambiguous")


def observable_rk(state: SymmetrizedState, k: float, phi: float = 2.0) -> float:
    """``<r**k>`` of the pair distance, ``sum_s c_s**2 <r**k>_{n1 l1}`` at scale ``lambda1``.

    Raises
    ------
    MixedQ0
        If ``phi != 2`` and the components do not share one value of ``Q0``.
    """
    if state.lambda1 is None:
        raise DomainError("state has no oscillator scale; use with_scale()")
    _check_q0(state, phi)
    return math.fsum(
        c * c * radial_moment(s.n1, s.l1, k, state.lambda1) for s, c in state.components
    )


def observable_approx(rho0: float, k: float) -> float:
    """Mean-distance approximation ``<r**k> ~ rho0**k``."""
    if not rho0 > 0:
        raise DomainError("rho0 must be positive")
    return rho0**k


def observable_report(state: SymmetrizedState, rho0: float, k: float, phi: float = 2.0):
    try:
        _check_q0(state, phi)
    except MixedQ0:
        return ObservableReport(k, None, observable_approx(rho0, k), ())
    parts = tuple(
        (s, c * c * radial_moment(s.n1, s.l1, k, state.lambda1)) for s, c in state.components
    )
    return ObservableReport(k, math.fsum(p for _, p in parts), observable_approx(rho0, k), parts)


def compute_nu(Q_eff: float, rho0: float, z: float) -> float:
    """Size ratio between the envelope scale ``sqrt(Q/2)/rho0`` and an oscillator scale ``z``."""
    if not (Q_eff > 0 and rho0 > 0 and z > 0):
        raise DomainError("Q_eff, rho0 and z must be positive")
    return math.sqrt(Q_eff / 2) / (rho0 * z)


def envelope_state(
    system: SystemSpec, state: StateSpec, L: int, phi: float = 2.0, which: int = 0
) -> tuple[SymmetrizedState, EtSolution]:
    """Three-body envelope eigenstate with total angular momentum ``L``.

    The band is fixed by the quantum numbers of ``state``; the oscillator
    scale comes from the envelope solution at ``Q_phi``.
    """
    if system.N != 3 or system.D != 3:
        raise DomainError("eigenstates are built for N = D = 3 only")
    _, _, Qstar, _ = quantum_numbers(state, 3)
    states = symmetrize(Qstar, L, state.sigma)
    if len(states) <= which:
        raise DomainError(f"no symmetry-allowed state {which} in band {Qstar}, L={L}")
    Q_eff = effective_Q(state, 3, phi)
    sol = solve_et(system, Q_eff, phi)
    lam1 = scale_parameters(3, Q_eff, sol.rho0)[0]
    return states[which].with_scale(lam1), sol
