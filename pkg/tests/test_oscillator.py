import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import sph_harm_y
from sympy.physics.wigner import clebsch_gordan

from envtheory import (
    CoupledBasisState,
    DomainError,
    band_rotation,
    enumerate_band,
    moshinsky_bracket,
    permutation_matrices,
    radial_function,
    radial_moment,
    radial_moment_quad,
    scale_parameters,
    symmetrize,
)

INV3 = 1 / math.sqrt(3)


def test_enumerate_band_small():
    assert [tuple(s[:4]) for s in enumerate_band(2, 0)] == [(0, 0, 1, 0), (0, 1, 0, 1), (1, 0, 0, 0)]
    assert enumerate_band(0, 1) == []
    for Q in range(7):
        for L in range(Q + 1):
            for s in enumerate_band(Q, L):
                assert s.Qstar == Q and abs(s.l1 - s.l2) <= L <= s.l1 + s.l2


@pytest.mark.parametrize("n,l", [(0, 0), (1, 0), (2, 3), (4, 1)])
def test_radial_orthonormal(n, l):
    lam = 0.7
    for n2 in range(4):
        val, _ = quad(lambda r: radial_function(n, l, r, lam) * radial_function(n2, l, r, lam) * r * r,
                      0, 40, limit=200)
        assert val == pytest.approx(float(n == n2), abs=1e-10)


@pytest.mark.parametrize("k", [-1, 1, 2, 3, 0.5, -1.5, 4])
def test_radial_moment_closed_form_vs_quadrature(k):
    for n in range(5):
        for l in range(4):
            want = radial_moment_quad(n, l, k, 1.3)
            assert radial_moment(n, l, k, 1.3) == pytest.approx(want, rel=1e-10)


def test_second_moment_exact():
    for n in range(6):
        for l in range(6):
            for lam in (0.3, 1.0, 2.5):
                assert radial_moment(n, l, 2, lam) == (2 * n + l + 1.5) / lam**2


def test_radial_moment_domain():
    with pytest.raises(DomainError):
        radial_moment(0, 0, -3, 1.0)
    with pytest.raises(DomainError):
        radial_moment(0, 0, 1, -1.0)


@pytest.mark.parametrize("Q", range(0, 9))
def test_bracket_orthogonality(Q):
    for L in range(Q + 1):
        for beta in (math.pi / 3, -math.pi / 3, 0.4, 2.0):
            U = band_rotation(Q, L, beta)
            if U.size:
                assert np.abs(U @ U.T - np.eye(len(U))).max() < 1e-10


def test_bracket_group_law():
    Q, L = 5, 2
    a, b = 0.3, 1.1
    assert np.allclose(band_rotation(Q, L, a) @ band_rotation(Q, L, b), band_rotation(Q, L, a + b),
                       atol=1e-12)
    assert np.allclose(band_rotation(Q, L, 2 * math.pi), np.eye(len(enumerate_band(Q, L))), atol=1e-10)


def test_bracket_energy_mismatch():
    with pytest.raises(DomainError):
        moshinsky_bracket((0, 0, 0, 0), (1, 0, 0, 0), 0, 0.5)


def _coupled_wavefunction(state, y1, y2):
    """Direct evaluation of [R Y (y1) R Y (y2)]^L_M=0 at unit scale."""
    n1, l1, n2, l2, L = state
    r1, r2 = np.linalg.norm(y1), np.linalg.norm(y2)
    t1, p1 = math.acos(y1[2] / r1), math.atan2(y1[1], y1[0])
    t2, p2 = math.acos(y2[2] / r2), math.atan2(y2[1], y2[0])
    total = 0j
    for m1 in range(-l1, l1 + 1):
        m2 = -m1
        if abs(m2) > l2:
            continue
        cg = float(clebsch_gordan(l1, l2, L, m1, m2, 0))
        total += cg * sph_harm_y(l1, m1, t1, p1) * sph_harm_y(l2, m2, t2, p2)
    return total * radial_function(n1, l1, r1) * radial_function(n2, l2, r2)


@pytest.mark.parametrize("Q,L", [(2, 0), (3, 1), (4, 2), (5, 3)])
def test_bracket_reproduces_rotated_wavefunctions(Q, L):
    rng = np.random.default_rng(Q * 10 + L)
    band = enumerate_band(Q, L)
    beta = 0.7
    U = band_rotation(Q, L, beta)
    c, s = math.cos(beta), math.sin(beta)
    for _ in range(3):
        y1, y2 = rng.normal(size=3), rng.normal(size=3)
        ry1, ry2 = c * y1 + s * y2, -s * y1 + c * y2
        for j, inn in enumerate(band):
            lhs = _coupled_wavefunction(inn, ry1, ry2)
            rhs = sum(U[i, j] * _coupled_wavefunction(out, y1, y2) for i, out in enumerate(band))
            assert abs(lhs - rhs) < 1e-12


@pytest.mark.parametrize("Q", range(0, 7))
def test_permutation_algebra(Q):
    for L in range(Q + 1):
        P12, P13, P23 = permutation_matrices(Q, L)
        one = np.eye(len(P12))
        for P in (P12, P13, P23):
            assert np.allclose(P @ P, one, atol=1e-12)
        assert np.allclose(P13, P12 @ P23 @ P12, atol=1e-12)
        assert np.allclose(P23 @ P12, P12 @ P13, atol=1e-12)


LOW_BANDS = {
    (0, 0): {(0, 0, 0, 0): 1.0},
    (2, 0): {(1, 0, 0, 0): 1 / math.sqrt(2), (0, 0, 1, 0): 1 / math.sqrt(2)},
    (2, 2): {(0, 2, 0, 0): 1 / math.sqrt(2), (0, 0, 0, 2): 1 / math.sqrt(2)},
    (3, 1): {(0, 0, 1, 1): -0.5, (0, 2, 0, 1): INV3, (1, 0, 0, 1): math.sqrt(5 / 12)},
    (3, 3): {(0, 0, 0, 3): 0.5, (0, 2, 0, 1): -math.sqrt(3) / 2},
}


@pytest.mark.parametrize("key", sorted(LOW_BANDS))
def test_symmetric_states_low_bands(key):
    Q, L = key
    states = symmetrize(Q, L, 1)
    assert len(states) == 1
    got = {tuple(s[:4]): c for s, c in states[0].components}
    want = LOW_BANDS[key]
    assert set(got) == set(want)
    sign = math.copysign(1.0, got[next(iter(want))] * next(iter(want.values())))
    for k, v in want.items():
        assert sign * got[k] == pytest.approx(v, abs=1e-10)


@pytest.mark.parametrize("Q,L", [(1, 1), (2, 1), (3, 0), (3, 2)])
def test_forbidden_symmetric(Q, L):
    assert symmetrize(Q, L, 1) == []


@pytest.mark.parametrize("sigma", [1, -1])
def test_symmetrized_states_are_eigenstates(sigma):
    for Q in range(0, 7):
        for L in range(Q + 1):
            states = symmetrize(Q, L, sigma)
            if not states:
                continue
            band = enumerate_band(Q, L)
            V = np.array([[dict(s.components).get(b, 0.0) for b in band] for s in states]).T
            assert np.allclose(V.T @ V, np.eye(V.shape[1]), atol=1e-12)
            for P in permutation_matrices(Q, L):
                assert np.allclose(P @ V, sigma * V, atol=1e-10)


def test_symmetric_state_count_matches_projector_trace():
    from envtheory.oscillator import _projector

    for Q in range(0, 9):
        for L in range(Q + 1):
            if not enumerate_band(Q, L):
                continue
            for sigma in (1, -1):
                assert len(symmetrize(Q, L, sigma)) == round(np.trace(_projector(Q, L, sigma)))


def test_coupled_state_properties():
    s = CoupledBasisState(1, 2, 0, 1, 3)
    assert s.Qstar == 5 and s.Q0 == 4  # l1 + l2 + 1


def test_scale_parameters():
    lam = scale_parameters(3, 3.0, 2.182)
    assert lam[0] == pytest.approx(math.sqrt(1.5) / 2.182)
    assert lam[1] == pytest.approx(math.sqrt(2.0) / 2.182)
    with pytest.raises(DomainError):
        scale_parameters(1, 3.0, 1.0)
