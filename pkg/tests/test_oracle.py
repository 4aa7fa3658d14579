import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.linalg import eigh_tridiagonal

from envtheory import (
    CustomPotential,
    EmptyBasis,
    ExponentialWell,
    HamiltonianAssembler,
    NoMinimum,
    OracleConfig,
    PowerLawPotential,
    SystemSpec,
    UnsupportedSystem,
    build_basis,
    coulomb_system,
    gaussian_system,
    hamiltonian_matrix,
    linear_system,
    nonrelativistic,
    radial_function,
    solve_oracle,
    truncated_diagnostics,
)


def _hyperradial_levels(V, R_max, n=20000, K=0, count=2):
    """Finite-difference levels of -u''/2 + (K+3/2)(K+5/2)/(2R^2) u + V(sqrt(3) R) u."""
    h = R_max / (n + 1)
    R = h * np.arange(1, n + 1)
    diag = 1 / h**2 + 0.5 * (K + 1.5) * (K + 2.5) / R**2 + V(math.sqrt(3) * R)
    off = -0.5 / h**2 * np.ones(n - 1)
    return eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))[0]


@pytest.mark.parametrize("a", [0.5, 2.0])
@pytest.mark.parametrize("L,parity,band", [(0, 1, 0), (1, -1, 3), (2, 1, 2)])
def test_oscillator_potential_is_exact(a, L, parity, band):
    system = SystemSpec(3, 3, nonrelativistic(), ((3, PowerLawPotential(a, 2.0)),))
    sol = solve_oracle(system, OracleConfig(L=L, parity=parity, Qstar_max=band + 4))
    assert sol.E_acc == pytest.approx(math.sqrt(6 * a) * (band + 3), rel=1e-9)
    assert sol.weight(band) == pytest.approx(1.0, abs=1e-5)  # z is only located to ~1e-6


def test_kinetic_elements_against_quadrature():
    # p^2 = 2 H_osc - r^2 at unit scale, so <n'l|p^2|nl> = (4n+2l+3) delta - <n'l|r^2|nl>
    asm = HamiltonianAssembler(linear_system(), build_basis(OracleConfig(Qstar_max=6)))
    T = asm._kinetic_coupled() / 0.5
    for i, a in enumerate(asm.coupled):
        for j, b in enumerate(asm.coupled):
            if (a.l1, a.n2, a.l2) != (b.l1, b.n2, b.l2):
                continue
            r2, _ = quad(lambda r: r**4 * radial_function(a.n1, a.l1, r) * radial_function(b.n1, b.l1, r),
                         0, 30, limit=200)
            want = (4 * a.n1 + 2 * a.l1 + 3) * (a.n1 == b.n1) - r2
            want += (2 * a.n2 + a.l2 + 1.5) * (a.n1 == b.n1)
            assert T[i, j] == pytest.approx(want, abs=1e-10)


def test_exact_gaussian_rule_matches_generic_rule():
    g = ExponentialWell(200.0, 1.0)
    custom = CustomPotential(lambda r: -200 * np.exp(-r * r), lambda r: 400 * r * np.exp(-r * r),
                             lambda r: 400 * (1 - 2 * r * r) * np.exp(-r * r))
    basis = build_basis(OracleConfig(Qstar_max=6))
    for z in (0.3, 1.0):
        H1 = hamiltonian_matrix(SystemSpec(3, 3, nonrelativistic(), ((3, g),)), basis, z)
        H2 = hamiltonian_matrix(SystemSpec(3, 3, nonrelativistic(), ((3, custom),)), basis, z,
                                quad_order=200)
        assert np.abs(H1 - H2).max() < 1e-8 * np.abs(H1).max()


def test_quadrature_order_doubling():
    basis = build_basis(OracleConfig(Qstar_max=10))
    for system in (linear_system(), coulomb_system(), gaussian_system()):
        H80 = hamiltonian_matrix(system, basis, 0.6, quad_order=80)
        H160 = hamiltonian_matrix(system, basis, 0.6, quad_order=160)
        assert np.abs(H80 - H160).max() < 1e-10 * np.abs(H80).max()


def test_matrix_is_symmetric():
    basis = build_basis(OracleConfig(L=2, Qstar_max=8))
    H = hamiltonian_matrix(gaussian_system(), basis, 1.1)
    assert np.allclose(H, H.T, atol=1e-12)


def test_energy_decreases_with_basis():
    energies = [solve_oracle(linear_system(), OracleConfig(Qstar_max=q)).E_acc for q in (4, 8, 12, 16, 18)]
    assert all(b <= a + 1e-12 for a, b in zip(energies, energies[1:]))


def test_linear_ground_state_against_hyperradial_solver():
    fd = _hyperradial_levels(lambda r: 0.5 * r, 30.0)
    sol = solve_oracle(linear_system(), OracleConfig(Qstar_max=18))
    assert sol.E_acc == pytest.approx(fd[0], rel=2e-7)
    assert sol.E_acc == pytest.approx(2.753, abs=5e-4)


def test_coulomb_hyperradial_levels_are_hydrogenic():
    # -sqrt(3)/R with grand angular momentum K: E = -3 / (2 (K + 5/2 + m)^2)
    fd = _hyperradial_levels(lambda r: -3 / r, 300.0, n=60000)
    assert fd[0] == pytest.approx(-0.24, rel=1e-5)
    assert fd[1] == pytest.approx(-3 / (2 * 3.5**2), rel=1e-5)
    sol = solve_oracle(coulomb_system(), OracleConfig(Qstar_max=20))
    assert -0.24 < sol.E_acc < -0.2397


def test_solution_bookkeeping():
    sol = solve_oracle(gaussian_system(), OracleConfig(L=2, Qstar_max=8, et_band=2))
    assert np.linalg.norm(sol.coupled_vector) == pytest.approx(1.0, abs=1e-12)
    assert sum(sol.band_weights.values()) == pytest.approx(1.0, abs=1e-12)
    assert sol.nu is not None and sol.z_mode == "per-state"
    assert sol.moments[2] > sol.moments[1] ** 2
    assert set(sol.band_weights) == {2, 4, 6, 8}


def test_z_window_mode():
    cfg = OracleConfig(Qstar_max=12, et_band=0, z_window=4)
    sol = solve_oracle(linear_system(), cfg)
    assert sol.z_mode == "window:4"
    full = solve_oracle(linear_system(), OracleConfig(Qstar_max=12))
    assert sol.E_acc >= full.E_acc - 1e-12
    d = truncated_diagnostics(linear_system(), OracleConfig(Qstar_max=12, et_band=0), qstar_max=4)
    assert d["nu"] * d["inverse_nu"] == pytest.approx(1.0)
    assert d["z"] == pytest.approx(sol.z_opt, rel=1e-6)


def test_empty_basis():
    with pytest.raises(EmptyBasis):
        build_basis(OracleConfig(L=1, parity=1, Qstar_max=0))
    with pytest.raises(EmptyBasis):
        solve_oracle(linear_system(), OracleConfig(Qstar_max=0, level=3))


def test_unsupported_systems():
    T = nonrelativistic()
    with pytest.raises(UnsupportedSystem):
        solve_oracle(SystemSpec(4, 3, T, ((2, PowerLawPotential(1.0, 1.0)),)), OracleConfig())
    with pytest.raises(UnsupportedSystem):
        solve_oracle(SystemSpec(3, 3, T, ((2, PowerLawPotential(1.0, 1.0)),)), OracleConfig())


def test_monotone_energy_raises_no_minimum():
    with pytest.raises(NoMinimum):
        solve_oracle(linear_system(), OracleConfig(Qstar_max=4, z_bracket=(5.0, 50.0), z_points=9))


def test_config_validation():
    with pytest.raises(ValueError):
        OracleConfig(parity=0)
    with pytest.raises(ValueError):
        OracleConfig(parity=-1, Qstar_max=0)
    assert OracleConfig(parity=-1, Qstar_max=7).bands == [1, 3, 5, 7]
