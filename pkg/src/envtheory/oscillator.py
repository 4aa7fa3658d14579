"""Three-dimensional harmonic-oscillator machinery for three-body states.

Conventions
-----------
Radial functions are normalised to ``int R_nl(r)**2 r**2 dr = 1`` and are
positive near the origin::

    R_nl(r) = lam**1.5 N_nl (lam r)**l exp(-(lam r)**2 / 2) L_n^{l+1/2}((lam r)**2)

Two-coordinate states ``|n1 l1 n2 l2; L>`` couple ``l1`` (first Jacobi
coordinate) before ``l2``. Permutations act on the mass-weighted Jacobi pair
``(xi1, xi2) = (x1 / sqrt(2), sqrt(2/3) x2)`` as 2x2 orthogonal matrices, so
with both oscillators sharing one scale they are rotations (possibly with a
reflection of ``xi2``) inside each band.

The bracket for angle ``beta`` is the matrix element
``<out| U(beta) |in>`` of the operator ``(U psi)(xi1, xi2) =
psi(cos b xi1 + sin b xi2, -sin b xi1 + cos b xi2)``. It is obtained exactly
as ``expm(beta * A)`` with ``A = a2^+ . a1 - a1^+ . a2`` restricted to the
band, whose matrix follows from oscillator ladder algebra and 6j recoupling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad
from scipy.linalg import expm
from scipy.special import eval_genlaguerre, gammaln
from sympy.physics.wigner import wigner_6j

from .errors import DomainError

__all__ = [
    "CoupledBasisState",
    "SymmetrizedState",
    "enumerate_band",
    "radial_norm",
    "radial_function",
    "radial_moment",
    "radial_moment_quad",
    "rotation_generator",
    "band_rotation",
    "moshinsky_bracket",
    "permutation_matrices",
    "symmetrize",
    "scale_parameters",
]


class CoupledBasisState(NamedTuple):
    n1: int
    l1: int
    n2: int
    l2: int
    L: int

    @property
    def Qstar(self) -> int:
        return 2 * (self.n1 + self.n2) + self.l1 + self.l2

    @property
    def Q0(self) -> int:
        return self.l1 + self.l2 + 1


@dataclass(frozen=True)
class SymmetrizedState:
    """Completely (anti)symmetric state ``sum_s c_s |n1 l1 n2 l2; L>`` of one band."""

    Qstar: int
    L: int
    sigma: int
    components: tuple
    lambda1: float | None = None

    @property
    def parity(self) -> int:
        return (-1) ** self.Qstar

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([c for _, c in self.components])

    @property
    def states(self) -> list:
        return [s for s, _ in self.components]

    def with_scale(self, lambda1: float) -> "SymmetrizedState":
        return replace(self, lambda1=float(lambda1))

    def label(self) -> str:
        p = "+" if self.parity > 0 else "-"
        return f"|{self.sigma};{self.Qstar};{self.L}{p}>"


def enumerate_band(Qstar: int, L: int) -> list:
    """All ``(n1, l1, n2, l2)`` with ``2(n1+n2)+l1+l2 = Qstar`` coupling to ``L``.

    >>> [tuple(s[:4]) for s in enumerate_band(2, 0)]
    [(0, 0, 1, 0), (0, 1, 0, 1), (1, 0, 0, 0)]
    """
    out = []
    if Qstar < 0 or L < 0:
        return out
    for n1 in range(Qstar // 2 + 1):
        for l1 in range(Qstar - 2 * n1 + 1):
            for n2 in range((Qstar - 2 * n1 - l1) // 2 + 1):
                l2 = Qstar - 2 * n1 - l1 - 2 * n2
                if abs(l1 - l2) <= L <= l1 + l2:
                    out.append(CoupledBasisState(n1, l1, n2, l2, L))
    return out


def radial_norm(n: int, l: int) -> float:
    return math.sqrt(2.0 * math.exp(math.lgamma(n + 1) - math.lgamma(n + l + 1.5)))


def radial_function(n: int, l: int, r, lam: float = 1.0):
    """Normalised oscillator radial function ``R_nl(r)`` with scale ``lam``."""
    x = lam * np.asarray(r, dtype=float)
    return (
        lam**1.5 * radial_norm(n, l) * x**l * np.exp(-x * x / 2)
        * eval_genlaguerre(n, l + 0.5, x * x)
    )


def radial_moment(n: int, l: int, k: float, lam: float = 1.0) -> float:
    """``<r**k>`` in the oscillator state ``(n, l)`` of scale ``lam``.

    Closed double sum over Laguerre coefficients, accumulated in log-gamma
    arithmetic with explicit signs.

    >>> round(radial_moment(1, 0, 2, 1.0), 12)
    3.5
    """
    if not k > -(2 * l + 3):
        raise DomainError(f"<r^{k}> diverges for l={l}")
    if not lam > 0:
        raise DomainError("scale must be positive")
    if float(k).is_integer() and k >= 0 and int(k) % 2 == 0:
        # even powers are polynomial; keep the closed form for k = 2
        if k == 0:
            return 1.0
        if k == 2:
            return (2 * n + l + 1.5) / lam**2
    lead = gammaln(n + l + 1.5) - gammaln(n + 1)
    terms = []
    for p in range(n + 1):
        for q in range(n + 1):
            lg = (
                lead
                + gammaln(n + 1) - gammaln(p + 1) - gammaln(n - p + 1)
                + gammaln(n + 1) - gammaln(q + 1) - gammaln(n - q + 1)
                + gammaln(l + p + q + (k + 3) / 2)
                - gammaln(l + p + 1.5) - gammaln(l + q + 1.5)
            )
            terms.append((-1) ** (p + q) * math.exp(lg))
    return math.fsum(terms) / lam**k


def radial_moment_quad(n: int, l: int, k: float, lam: float = 1.0) -> float:
    """Adaptive-quadrature value of ``<r**k>``; independent check of :func:`radial_moment`."""
    f = lambda r: r ** (k + 2) * radial_function(n, l, r, lam) ** 2
    edge = (math.sqrt(4 * n + 2 * l + 3) + 12.0) / lam
    val, _ = quad(f, 0.0, edge, epsabs=0.0, epsrel=1e-13, limit=400)
    return val


# reduced matrix elements of a^+ and a (Edmonds convention)
def _adag_red(n1, l1, n, l):
    if (n1, l1) == (n, l + 1):
        return math.sqrt((l + 1) * (2 * n + 2 * l + 3))
    if (n1, l1) == (n + 1, l - 1):
        return math.sqrt(2 * l * (n + 1))
    return 0.0


def _a_red(n1, l1, n, l):
    if (n1, l1) == (n - 1, l + 1):
        return -math.sqrt(2 * n * (l + 1))
    if (n1, l1) == (n, l - 1):
        return -math.sqrt(l * (2 * n + 2 * l + 1))
    return 0.0


@lru_cache(maxsize=None)
def _sixj(j1, j2, j3, j4, j5, j6) -> float:
    return float(wigner_6j(j1, j2, j3, j4, j5, j6))


def _scalar_product(out, inn, red1, red2):
    """``<out| T(1) . U(2) |in>`` for rank-1 tensors on the two coordinates."""
    r1 = red1(out.n1, out.l1, inn.n1, inn.l1)
    if r1 == 0.0:
        return 0.0
    r2 = red2(out.n2, out.l2, inn.n2, inn.l2)
    if r2 == 0.0:
        return 0.0
    L = inn.L
    phase = (-1) ** (inn.l1 + out.l2 + L)
    return phase * _sixj(L, out.l2, out.l1, 1, inn.l1, inn.l2) * r1 * r2


@lru_cache(maxsize=None)
def rotation_generator(Qstar: int, L: int) -> np.ndarray:
    """Real antisymmetric generator ``a2^+ . a1 - a1^+ . a2`` on a band."""
    band = enumerate_band(Qstar, L)
    index = {s: i for i, s in enumerate(band)}
    A = np.zeros((len(band), len(band)))
    for j, s in enumerate(band):
        candidates = []
        for dn1, dl1 in ((0, 1), (1, -1), (-1, 1), (0, -1)):
            for dn2, dl2 in ((0, 1), (1, -1), (-1, 1), (0, -1)):
                t = CoupledBasisState(s.n1 + dn1, s.l1 + dl1, s.n2 + dn2, s.l2 + dl2, L)
                if t in index:
                    candidates.append(t)
        for t in candidates:
            i = index[t]
            A[i, j] += _scalar_product(t, s, _a_red, _adag_red)
            A[i, j] -= _scalar_product(t, s, _adag_red, _a_red)
    A.setflags(write=False)
    return A


@lru_cache(maxsize=None)
def band_rotation(Qstar: int, L: int, beta: float) -> np.ndarray:
    """Bracket matrix ``B[out, in]`` of the band for kinematic angle ``beta``."""
    A = rotation_generator(Qstar, L)
    U = expm(beta * A) if A.size else A.copy()
    U.setflags(write=False)
    return U


def moshinsky_bracket(out, inn, L: int, beta: float) -> float:
    """Bracket ``<n l n' l'; L | n1 l1 n2 l2; L>_beta`` (see module notes).

    ``out`` and ``inn`` are ``(n, l, n', l')`` tuples for the first and
    second coordinate. Returns 0 when angular selection rules fail.
    """
    out = CoupledBasisState(*out[:4], L)
    inn = CoupledBasisState(*inn[:4], L)
    if out.Qstar != inn.Qstar:
        raise DomainError("bracket requires equal oscillator quanta on both sides")
    band = enumerate_band(inn.Qstar, L)
    if out not in band or inn not in band:
        return 0.0
    U = band_rotation(inn.Qstar, L, float(beta))
    return float(U[band.index(out), band.index(inn)])


@lru_cache(maxsize=None)
def permutation_matrices(Qstar: int, L: int):
    """Matrices of ``P12``, ``P13`` and ``P23`` on the band basis."""
    band = enumerate_band(Qstar, L)
    P12 = np.diag([(-1.0) ** s.l1 for s in band])
    flip = np.diag([(-1.0) ** s.l2 for s in band])
    # P23 maps (xi1, xi2) -> (xi1/2 + r xi2, r xi1 - xi2/2), r = sqrt(3)/2,
    # a rotation by pi/3 followed by xi2 -> -xi2; P13 uses -pi/3
    P23 = band_rotation(Qstar, L, math.pi / 3) @ flip
    P13 = band_rotation(Qstar, L, -math.pi / 3) @ flip
    return P12, P13, P23


def _projector(Qstar, L, sigma):
    P12, P13, P23 = permutation_matrices(Qstar, L)
    one = np.eye(len(P12))
    S = one + sigma * (P12 + P13 + P23) + P13 @ P12 + P23 @ P12
    return S / 6.0


def symmetrize(Qstar: int, L: int, sigma: int = 1) -> list:
    """Orthonormal (anti)symmetric states of the band ``(Qstar, L)``.

    Projected images of the band members are orthonormalised in order of
    increasing ``n1 + n2``; the first nonzero coefficient of each state is
    made positive. Forbidden configurations give an empty list.

    >>> [s.coefficients.round(6).tolist() for s in symmetrize(2, 0)]
    [[0.707107, 0.0, 0.707107]]
    """
    if sigma not in (1, -1):
        raise DomainError("sigma must be +1 or -1")
    band = enumerate_band(Qstar, L)
    if not band:
        return []
    Pi = _projector(Qstar, L, sigma)
    order = sorted(range(len(band)), key=lambda i: (band[i].n1 + band[i].n2, band[i][:4]))
    vecs = []
    for i in order:
        v = Pi[:, i].copy()
        for w in vecs:
            v -= (w @ v) * w
        nrm = np.linalg.norm(v)
        if nrm > 1e-8:
            v /= nrm
            # one more pass keeps orthogonality at machine precision
            for w in vecs:
                v -= (w @ v) * w
            v /= np.linalg.norm(v)
            vecs.append(v)
    out = []
    for v in vecs:
        v = np.where(np.abs(v) < 1e-13, 0.0, v)
        first = v[np.flatnonzero(v)[0]]
        v = v * math.copysign(1.0, first)
        comps = tuple((band[i], float(v[i])) for i in range(len(band)) if v[i] != 0.0)
        out.append(SymmetrizedState(Qstar, L, sigma, comps))
    return out


def scale_parameters(N: int, Q: float, rho0: float) -> list:
    """Oscillator scales ``lambda_i = sqrt(i/(i+1) * 2Q/(N-1)) / rho0`` of the envelope state."""
    if N < 2 or not (Q > 0 and rho0 > 0):
        raise DomainError("need N >= 2 and positive Q, rho0")
    return [math.sqrt(i / (i + 1) * 2 * Q / (N - 1)) / rho0 for i in range(1, N)]
