"""Physical model: kinetic and potential laws, K-body systems and states.

Laws are immutable values exposing the function and its first two
derivatives. Built-in laws carry analytic derivatives; custom laws must
supply them and are cross-checked against central finite differences when
constructed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "PowerLawKinetic",
    "CustomKinetic",
    "PowerLawPotential",
    "ExponentialWell",
    "CustomPotential",
    "SystemSpec",
    "StateSpec",
    "binomial",
    "quantum_numbers",
    "hyperradius_squared",
    "nonrelativistic",
    "linear_system",
    "coulomb_system",
    "gaussian_system",
]

_SAMPLE_GRID = tuple(np.geomspace(0.1, 10.0, 20))


def binomial(A: int, B: int) -> int:
    """Exact binomial coefficient ``C_A^B`` for ``0 <= B <= A <= 64``."""
    if not (isinstance(A, (int, np.integer)) and isinstance(B, (int, np.integer))):
        raise DomainError("binomial arguments must be integers")
    if not 0 <= B <= A <= 64:
        raise DomainError(f"binomial({A}, {B}) outside 0 <= B <= A <= 64")
    return math.comb(int(A), int(B))


def _check_derivatives(f, df, d2f, grid, name):
    # central differences; h scales with the abscissa
    for x in grid:
        h = 1e-4 * x
        f0, fp, fm = f(x), f(x + h), f(x - h)
        fd1 = (fp - fm) / (2 * h)
        fd2 = (fp - 2 * f0 + fm) / h**2
        a1, a2 = df(x), d2f(x)
        s1 = max(abs(a1), abs(f0) / x, 1e-300)
        s2 = max(abs(a2), abs(a1) / x, abs(f0) / x**2, 1e-300)
        if abs(fd1 - a1) > 1e-4 * s1 or abs(fd2 - a2) > 1e-4 * s2:
            raise DomainError(
                f"{name}: supplied derivatives disagree with finite differences at x={x:g}"
            )


@dataclass(frozen=True)
class PowerLawKinetic:
    """Kinetic energy ``T(p) = F p**alpha``."""

    F: float
    alpha: float

    def __post_init__(self):
        if not (self.F > 0 and self.alpha > 0):
            raise DomainError("power-law kinetic energy needs F > 0 and alpha > 0")

    def __call__(self, p):
        return self.F * p**self.alpha

    def d1(self, p):
        return self.F * self.alpha * p ** (self.alpha - 1)

    def d2(self, p):
        return self.F * self.alpha * (self.alpha - 1) * p ** (self.alpha - 2)


@dataclass(frozen=True)
class CustomKinetic:
    """Kinetic energy given as ``T`` with explicit derivatives ``dT`` and ``d2T``."""

    T: Callable[[float], float]
    dT: Callable[[float], float]
    d2T: Callable[[float], float]
    sample: Sequence[float] = field(default=_SAMPLE_GRID, compare=False)

    def __post_init__(self):
        _check_derivatives(self.T, self.dT, self.d2T, self.sample, "CustomKinetic")

    def __call__(self, p):
        return self.T(p)

    def d1(self, p):
        return self.dT(p)

    def d2(self, p):
        return self.d2T(p)


@dataclass(frozen=True)
class PowerLawPotential:
    """``V(r) = a sgn(b) r**b`` with ``a > 0`` and ``b != 0``."""

    a: float
    b: float

    def __post_init__(self):
        if not self.a > 0 or self.b == 0:
            raise DomainError("power-law potential needs a > 0 and b != 0")

    @property
    def sign(self) -> float:
        return math.copysign(1.0, self.b)

    def __call__(self, r):
        return self.a * self.sign * r**self.b

    def d1(self, r):
        return self.a * abs(self.b) * r ** (self.b - 1)

    def d2(self, r):
        return self.a * abs(self.b) * (self.b - 1) * r ** (self.b - 2)


@dataclass(frozen=True)
class ExponentialWell:
    """``V(r) = -a exp(-b r**gamma)``; ``gamma = 2`` is the Gaussian well."""

    a: float
    b: float
    gamma: float = 2.0

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0 and self.gamma > 0):
            raise DomainError("exponential well needs a, b, gamma > 0")

    def __call__(self, r):
        return -self.a * np.exp(-self.b * r**self.gamma)

    def d1(self, r):
        g = self.gamma
        return self.a * self.b * g * r ** (g - 1) * np.exp(-self.b * r**g)

    def d2(self, r):
        a, b, g = self.a, self.b, self.gamma
        return a * b * g * r ** (g - 2) * (g - 1 - b * g * r**g) * np.exp(-b * r**g)


@dataclass(frozen=True)
class CustomPotential:
    """Potential given as ``V`` with explicit derivatives ``dV`` and ``d2V``."""

    V: Callable[[float], float]
    dV: Callable[[float], float]
    d2V: Callable[[float], float]
    sample: Sequence[float] = field(default=_SAMPLE_GRID, compare=False)

    def __post_init__(self):
        _check_derivatives(self.V, self.dV, self.d2V, self.sample, "CustomPotential")

    def __call__(self, r):
        return self.V(r)

    def d1(self, r):
        return self.dV(r)

    def d2(self, r):
        return self.d2V(r)


@dataclass(frozen=True)
class SystemSpec:
    """N identical particles in D dimensions with K-body hyperradius forces.

    ``terms`` is a sequence of ``(K, potential)`` pairs; each potential is a
    function of ``r_{i1..iK}``, the square root of the summed squared pair
    distances inside a K-particle subset.
    """

    N: int
    D: int
    kinetic: object
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((int(K), V) for K, V in self.terms))
        if self.N < 2 or self.D < 1:
            raise DomainError("need N >= 2 and D >= 1")
        if not self.terms:
            raise DomainError("at least one interaction term is required")
        for K, V in self.terms:
            if not 2 <= K <= self.N:
                raise DomainError(f"K={K} outside [2, N={self.N}]")
            if (
                isinstance(V, PowerLawPotential)
                and isinstance(self.kinetic, PowerLawKinetic)
                and not V.b > -self.kinetic.alpha
            ):
                raise DomainError("power-law potential needs b > -alpha")

    @property
    def pairs(self) -> int:
        """Number of particle pairs ``C_N^2``."""
        return binomial(self.N, 2)

    def V_total(self, rho):
        """Sum over terms of ``C_N^K V(sqrt(C_K^2) rho)``."""
        return sum(binomial(self.N, K) * V(math.sqrt(binomial(K, 2)) * rho) for K, V in self.terms)


@dataclass(frozen=True)
class StateSpec:
    """Internal quantum numbers ``(n_i, l_i)`` for the N-1 Jacobi coordinates.

    ``sigma`` is +1 (symmetric) or -1 (antisymmetric); ``L`` the total
    angular momentum, only used by the three-body eigenstate machinery.
    """

    quanta: tuple
    sigma: int = 1
    L: int | None = None

    def __post_init__(self):
        q = tuple((int(n), int(l)) for n, l in self.quanta)
        object.__setattr__(self, "quanta", q)
        if not q or any(n < 0 or l < 0 for n, l in q):
            raise DomainError("quantum numbers must be nonnegative")
        if self.sigma not in (1, -1):
            raise DomainError("sigma must be +1 or -1")
        if self.L is not None and self.L < 0:
            raise DomainError("L must be nonnegative")

    @property
    def N(self) -> int:
        return len(self.quanta) + 1

    @classmethod
    def ground(cls, N: int = 3) -> "StateSpec":
        return cls(((0, 0),) * (N - 1))


def quantum_numbers(state: StateSpec, D: int = 3):
    """Return ``(Q, Q0, Qstar, parity)`` for a state in D dimensions.

    >>> quantum_numbers(StateSpec(((0, 2), (0, 1))), 3)
    (6.0, 4.0, 3, -1)
    """
    Q = sum(2 * n + l + D / 2 for n, l in state.quanta)
    Q0 = sum(l + (D - 2) / 2 for n, l in state.quanta)
    Qstar = sum(2 * n + l for n, l in state.quanta)
    return float(Q), float(Q0), Qstar, (-1) ** Qstar


def hyperradius_squared(positions, subset) -> float:
    """Sum of squared pair distances within ``subset`` (indices into ``positions``)."""
    subset = list(subset)
    if len(set(subset)) != len(subset):
        raise DomainError("duplicate indices in subset")
    if any(b <= a for a, b in zip(subset, subset[1:])):
        raise DomainError("subset indices must be strictly increasing")
    pts = np.asarray(positions, dtype=float)[subset]
    diff = pts[:, None, :] - pts[None, :, :]
    return float(np.sum(diff**2) / 2)


def nonrelativistic() -> PowerLawKinetic:
    """``T(p) = p**2 / 2`` for unit mass."""
    return PowerLawKinetic(0.5, 2.0)


def linear_system() -> SystemSpec:
    """Three particles bound by ``V = r_123 / 2``."""
    return SystemSpec(3, 3, nonrelativistic(), ((3, PowerLawPotential(0.5, 1.0)),))


def coulomb_system() -> SystemSpec:
    """Three particles bound by ``V = -3 / r_123``."""
    return SystemSpec(3, 3, nonrelativistic(), ((3, PowerLawPotential(3.0, -1.0)),))


def gaussian_system(a: float = 200.0, b: float = 1.0) -> SystemSpec:
    """Three particles bound by ``V = -a exp(-b r_123**2)``."""
    return SystemSpec(3, 3, nonrelativistic(), ((3, ExponentialWell(a, b, 2.0)),))
