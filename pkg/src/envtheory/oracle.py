"""Variational three-body solver in a symmetry-adapted oscillator basis.

Trial states are expansions over ``[phi_{n1 l1}(z x1) phi_{n2 l2}(2 z x2 / sqrt 3)]^L``
restricted to completely (anti)symmetric combinations. In mass-weighted
Jacobi coordinates both oscillators share the scale ``beta = sqrt(2) z`` and
the hyperradius ``R`` satisfies ``r_123 = sqrt(3) R``, so the potential is a
function of ``R`` alone: its matrix is diagonal in ``(l1, l2)`` and reduces
to a two-dimensional integral over ``s = beta**2 R**2`` and
``t = cos(angle)**2``. The ``t`` integral is polynomial (Gauss-Jacobi, exact);
the ``s`` integral is exact for power laws and Gaussians through matched
generalised Gauss-Laguerre rules.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import eval_genlaguerre, roots_genlaguerre, roots_jacobi

from .envelope import solve_et
from .errors import EmptyBasis, NoBoundState, NoMinimum, NonConvergence, UnsupportedSystem
from .model import ExponentialWell, PowerLawKinetic, PowerLawPotential, SystemSpec
from .observables import compute_nu
from .oscillator import radial_norm, symmetrize

__all__ = [
    "OracleConfig",
    "OracleSolution",
    "build_basis",
    "hamiltonian_matrix",
    "solve_oracle",
    "HamiltonianAssembler",
    "truncated_diagnostics",
]


@dataclass(frozen=True)
class OracleConfig:
    """Symmetry block and numerical settings of a variational run.

    ``level`` selects the eigenvalue (0 = lowest) of the ``(L, parity, sigma)``
    block that is minimised over ``z``. ``z_bracket=None`` centres the scan on
    the envelope scale of the lowest band. With ``z_window`` set, ``z`` is
    optimised in the sub-basis of bands up to ``et_band + z_window`` (or the
    first band) and the full basis is then diagonalised at that scale.
    """

    L: int = 0
    parity: int = 1
    sigma: int = 1
    Qstar_max: int = 18
    level: int = 0
    z_bracket: tuple | None = None
    z_points: int = 41
    quad_order: int = 80
    et_band: int | None = None
    convergence_tol: float | None = None
    z_window: int | None = None

    def __post_init__(self):
        if self.parity not in (1, -1) or self.sigma not in (1, -1):
            raise ValueError("parity and sigma must be +1 or -1")
        if self.Qstar_max < self.first_band:
            raise ValueError("Qstar_max below the first band of this parity")

    @property
    def first_band(self) -> int:
        return 0 if self.parity > 0 else 1

    @property
    def bands(self) -> list:
        return list(range(self.first_band, self.Qstar_max + 1, 2))


@dataclass(frozen=True)
class OracleSolution:
    E_acc: float
    z_opt: float
    eigenvector: np.ndarray = field(repr=False)
    coupled_states: tuple = field(repr=False)
    coupled_vector: np.ndarray = field(repr=False)
    band_weights: dict = field(repr=False)
    nu: float | None
    moments: dict
    config: OracleConfig = field(repr=False)
    convergence_delta: float | None = None
    z_mode: str = "per-state"

    def weight(self, Qstar: int) -> float:
        return self.band_weights.get(Qstar, 0.0)


def build_basis(config: OracleConfig) -> list:
    """Symmetry-adapted basis: all allowed states of bands ``first_band..Qstar_max``."""
    basis = []
    for Q in config.bands:
        basis.extend(symmetrize(Q, config.L, config.sigma))
    if not basis:
        raise EmptyBasis(f"no allowed state for L={config.L}, parity={config.parity}")
    return basis


def _check_system(system: SystemSpec):
    if system.N != 3 or system.D != 3:
        raise UnsupportedSystem("the oracle treats N = D = 3 only")
    if any(K != 3 for K, _ in system.terms):
        raise UnsupportedSystem("the oracle treats three-body hyperradius forces only")
    kin = system.kinetic
    if not (isinstance(kin, PowerLawKinetic) and kin.alpha == 2.0):
        raise UnsupportedSystem("the oracle needs a nonrelativistic kinetic energy")


def _g(n, l, x):
    """Oscillator radial factor without the Gaussian, in ``x = (scale * r)**2``."""
    return radial_norm(n, l) * x ** (l / 2) * eval_genlaguerre(n, l + 0.5, x)


class HamiltonianAssembler:
    """Caches the z-independent pieces of ``H(z)`` for one basis."""

    def __init__(self, system: SystemSpec, basis: list, quad_order: int = 80):
        _check_system(system)
        self.system = system
        self.basis = list(basis)
        self.quad_order = int(quad_order)
        coupled, seen = [], {}
        for st in self.basis:
            for s, _ in st.components:
                if s not in seen:
                    seen[s] = len(coupled)
                    coupled.append(s)
        self.coupled = coupled
        self.C = np.zeros((len(coupled), len(self.basis)))
        for j, st in enumerate(self.basis):
            for s, c in st.components:
                self.C[seen[s], j] = c
        self.sym_band = np.array([st.Qstar for st in self.basis])
        self.T0 = self.C.T @ self._kinetic_coupled() @ self.C
        qmax = max(s.Qstar for s in coupled)
        x, w = roots_jacobi(qmax // 2 + 2, 0.5, 0.5)
        self.t = (1 + x) / 2
        self.wt = w / 4
        self.blocks = {}
        for i, s in enumerate(coupled):
            self.blocks.setdefault((s.l1, s.l2), []).append(i)
        self._static = None

    def _kinetic_coupled(self):
        # F (p1^2 + p2^2) with unit oscillator scale; scales as beta^2
        def p2(n1, n, l):
            if n1 == n:
                return 2 * n + l + 1.5
            if abs(n1 - n) == 1:
                m = min(n1, n)
                return math.sqrt((m + 1) * (m + l + 1.5))
            return 0.0

        F = self.system.kinetic.F
        n = len(self.coupled)
        T = np.zeros((n, n))
        for i, a in enumerate(self.coupled):
            for j, b in enumerate(self.coupled):
                if (a.l1, a.l2) != (b.l1, b.l2):
                    continue
                v = 0.0
                if a.n2 == b.n2:
                    v += p2(a.n1, b.n1, a.l1)
                if a.n1 == b.n1:
                    v += p2(a.n2, b.n2, a.l2)
                T[i, j] = F * v
        return T

    def _rule(self, V, beta):
        """Nodes/weights for ``int s^2 e^-s V(sqrt(3 s)/beta) f(s) ds``."""
        m = self.quad_order
        if isinstance(V, PowerLawPotential):
            x, w = roots_genlaguerre(m, 2 + V.b / 2)
            return x, w * V.a * V.sign * 3 ** (V.b / 2) * beta ** (-V.b), True
        if isinstance(V, ExponentialWell) and V.gamma == 2.0:
            c = 1 + 3 * V.b / beta**2
            x, w = roots_genlaguerre(m, 2.0)
            return x / c, -V.a * w / c**3, False
        x, w = roots_genlaguerre(m, 2.0)
        with np.errstate(all="ignore"):
            vals = np.asarray([V(math.sqrt(3 * xi) / beta) for xi in x], dtype=float)
        return x, w * vals, False

    def _projected(self, s_nodes):
        """Per (l1, l2) block, grid values of the symmetric basis functions."""
        S = s_nodes[:, None]
        t = self.t[None, :]
        cache1, cache2, out = {}, {}, {}
        for key, idx in self.blocks.items():
            rows = []
            for i in idx:
                s = self.coupled[i]
                k1, k2 = (s.n1, s.l1), (s.n2, s.l2)
                if k1 not in cache1:
                    cache1[k1] = _g(s.n1, s.l1, S * t)
                if k2 not in cache2:
                    cache2[k2] = _g(s.n2, s.l2, S * (1 - t))
                rows.append((cache1[k1] * cache2[k2]).ravel())
            F = np.array(rows)
            out[key] = F.T @ self.C[idx, :]
        return out

    def potential(self, z: float) -> np.ndarray:
        beta = math.sqrt(2.0) * z
        nsym = len(self.basis)
        Vs = np.zeros((nsym, nsym))
        for _, V in self.system.terms:
            s_nodes, ws, static = self._rule(V, beta)
            if static:
                # power law: the matrix only scales with beta**-b
                key = id(V)
                if self._static is None:
                    self._static = {}
                if key not in self._static:
                    base = self._assemble(s_nodes, ws * beta ** V.b)
                    self._static[key] = base
                Vs += self._static[key] * beta ** (-V.b)
            else:
                Vs += self._assemble(s_nodes, ws)
        return Vs

    def _assemble(self, s_nodes, ws):
        W = (ws[:, None] * self.wt[None, :]).ravel() / 4.0
        proj = self._projected(s_nodes)
        nsym = len(self.basis)
        M = np.zeros((nsym, nsym))
        for H in proj.values():
            M += H.T @ (W[:, None] * H)
        return 0.5 * (M + M.T)

    def matrix(self, z: float) -> np.ndarray:
        return 2.0 * z * z * self.T0 + self.potential(z)


def hamiltonian_matrix(system: SystemSpec, basis: list, z: float, quad_order: int = 80):
    """Hamiltonian in the symmetry-adapted basis for oscillator scale ``z``."""
    return HamiltonianAssembler(system, basis, quad_order).matrix(z)


def _moment_matrix(coupled, z, k):
    """Coupled-basis matrix of ``|x1|**k`` for oscillator scale ``z`` on ``x1``."""
    n = len(coupled)
    M = np.zeros((n, n))
    rules = {}
    for i, a in enumerate(coupled):
        for j, b in enumerate(coupled):
            if (a.l1, a.n2, a.l2) != (b.l1, b.n2, b.l2) or j < i:
                continue
            l = a.l1
            if l not in rules:
                rules[l] = roots_genlaguerre(40, l + (k + 1) / 2)
            x, w = rules[l]
            val = 0.5 * radial_norm(a.n1, l) * radial_norm(b.n1, l) * np.sum(
                w * eval_genlaguerre(a.n1, l + 0.5, x) * eval_genlaguerre(b.n1, l + 0.5, x)
            )
            M[i, j] = M[j, i] = val * z ** (-k)
    return M


def _minimise(func, lo, hi, npts):
    zs = np.geomspace(lo, hi, npts)
    Es = np.array([func(z) for z in zs])
    i = int(np.argmin(Es))
    if i == 0 or i == npts - 1:
        raise NoMinimum(f"energy monotone over z in [{lo:g}, {hi:g}]")
    res = minimize_scalar(
        func, bracket=(zs[i - 1], zs[i], zs[i + 1]), method="golden",
        options={"xtol": 1e-10, "maxiter": 500},
    )
    if not res.success:
        raise NonConvergence("golden-section search on z failed")
    return float(res.x), float(res.fun)


def _et_scale(system, Qstar):
    try:
        sol = solve_et(system, Qstar + 3.0)
    except NoBoundState:
        return None, None
    return math.sqrt((Qstar + 3.0) / 2) / sol.rho0, sol


def solve_oracle(system: SystemSpec, config: OracleConfig) -> OracleSolution:
    """Minimise the selected eigenvalue over ``z`` and report the converged state."""
    _check_system(system)
    basis = build_basis(config)
    asm = HamiltonianAssembler(system, basis, config.quad_order)
    if config.level >= len(basis):
        raise EmptyBasis(f"level {config.level} exceeds basis size {len(basis)}")

    def energy(z, sub=None):
        H = asm.matrix(z)
        if sub is not None:
            H = H[np.ix_(sub, sub)]
        return float(np.linalg.eigvalsh(H)[config.level])

    if config.z_bracket is None:
        z0, _ = _et_scale(system, config.first_band if config.et_band is None else config.et_band)
        lo, hi = (z0 / 10, z0 * 10) if z0 else (1e-3, 1e3)
    else:
        lo, hi = config.z_bracket
    if config.z_window is None:
        z_mode = "per-state"
        z_opt, E = _minimise(energy, lo, hi, config.z_points)
    else:
        top = (config.first_band if config.et_band is None else config.et_band) + config.z_window
        window = np.flatnonzero(asm.sym_band <= top)
        if len(window) <= config.level:
            raise EmptyBasis(f"z window up to band {top} holds no level {config.level}")
        z_mode = f"window:{config.z_window}"
        z_opt, _ = _minimise(lambda z: energy(z, window), lo, hi, config.z_points)
        E = energy(z_opt)

    delta = None
    sub = np.flatnonzero(asm.sym_band <= config.Qstar_max - 2)
    if len(sub) > config.level:
        if config.z_window is None:
            _, E_prev = _minimise(lambda z: energy(z, sub), lo, hi, config.z_points)
        else:
            E_prev = energy(z_opt, sub)
        delta = abs(E - E_prev) / abs(E)
        if config.convergence_tol is not None and delta > config.convergence_tol:
            raise NonConvergence(f"energy changed by {delta:.2e} over the last two bands")

    vals, vecs = np.linalg.eigh(asm.matrix(z_opt))
    v = vecs[:, config.level]
    d = asm.C @ v
    weights = {}
    for Q, c in zip(asm.sym_band, v):
        weights[int(Q)] = weights.get(int(Q), 0.0) + float(c * c)
    moments = {}
    for k in (-1, 1, 2):
        M = _moment_matrix(asm.coupled, z_opt, k)
        moments[k] = float(d @ M @ d)
    nu = None
    if config.et_band is not None:
        _, sol = _et_scale(system, config.et_band)
        if sol is not None:
            nu = compute_nu(config.et_band + 3.0, sol.rho0, z_opt)
    return OracleSolution(
        E_acc=float(vals[config.level]),
        z_opt=z_opt,
        eigenvector=v,
        coupled_states=tuple(asm.coupled),
        coupled_vector=d,
        band_weights=weights,
        nu=nu,
        moments=moments,
        config=config,
        convergence_delta=delta,
        z_mode=z_mode,
    )


def truncated_diagnostics(system: SystemSpec, config: OracleConfig, qstar_max: int = 10) -> dict:
    """Size diagnostics from a basis cut at ``qstar_max`` quanta.

    ``z`` is re-optimised with bands up to ``qstar_max`` only, and the
    band weight is read in that basis. The size ratio is returned both as
    ``lambda1 / z`` and as its inverse. This is a secondary convention: the
    scale optimum of a large basis is poorly determined because the energy is
    nearly flat in ``z``, and a small basis pins it down.
    """
    if config.et_band is None:
        raise ValueError("truncated_diagnostics needs config.et_band")
    lam, _ = _et_scale(system, config.et_band)
    if lam is None:
        raise NoBoundState(f"no envelope solution for band {config.et_band}")
    cut = OracleConfig(
        L=config.L, parity=config.parity, sigma=config.sigma,
        Qstar_max=max(qstar_max, config.et_band), level=config.level,
        z_points=config.z_points, quad_order=config.quad_order,
    )
    asm = HamiltonianAssembler(system, build_basis(cut), cut.quad_order)
    z, _ = _minimise(
        lambda x: float(np.linalg.eigvalsh(asm.matrix(x))[cut.level]),
        lam / 10, lam * 10, cut.z_points,
    )
    v = np.linalg.eigh(asm.matrix(z))[1][:, cut.level]
    w = float(np.sum(v[asm.sym_band == config.et_band] ** 2))
    return {"z": z, "lambda1": lam, "nu": lam / z, "inverse_nu": z / lam, "weight": w}
