import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from iontoolbox import qlinalg as ql
from iontoolbox.errors import CapacityError, LeakageError, NotHermitianError


def random_hermitian(rng, n):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (m + m.conj().T) / 2


def laguerre_series(n, k, x):
    # exact rational power series, rounded once at the end
    x = Fraction(x)
    return float(sum(Fraction((-1) ** j * math.comb(n + k, n - j), math.factorial(j)) * x**j for j in range(n + 1)))


def test_kron_examples():
    assert np.array_equal(ql.kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(ql.kron(ql.sigma_z(), np.eye(2)), np.diag([1, 1, -1, -1]))
    assert np.array_equal(ql.kron(ql.sigma_x(), ql.sigma_x()) @ [1, 0, 0, 0], [0, 0, 0, 1])


def test_kron_capacity():
    with pytest.raises(CapacityError):
        ql.kron(np.eye(64), np.eye(65))
    with pytest.raises(CapacityError):
        ql.SpinFockSpace(2, (40, 40))


def test_space_ordering():
    space = ql.SpinFockSpace(2, (3,))
    assert space.dim == 12
    assert space.index((0, 1), (2,)) == 5
    psi = space.product_state([ql.UP, ql.DOWN], [np.eye(3)[2]])
    assert np.array_equal(psi, space.basis_state((0, 1), (2,)))


def test_matexp_examples():
    assert np.allclose(ql.matexp_aih(np.zeros((3, 3)), 2.3), np.eye(3), atol=0)
    omega = 0.7
    u = ql.matexp_aih(ql.sigma_x() * omega / 2, math.pi / omega)
    assert np.max(np.abs(u + 1j * ql.sigma_x())) < 1e-12


def test_matexp_rejects_non_hermitian():
    with pytest.raises(NotHermitianError, match="max"):
        ql.matexp_aih(np.array([[0, 1], [0, 0]]), 1.0)


def test_matexp_matches_scipy():
    rng = np.random.default_rng(1)
    h = random_hermitian(rng, 12)
    assert np.max(np.abs(ql.matexp_aih(h, 1.7) - scipy.linalg.expm(-1j * h * 1.7))) < 1e-11


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-5, 5), st.floats(-5, 5))
def test_matexp_group_and_unitarity(seed, t1, t2):
    h = random_hermitian(np.random.default_rng(seed), 6)
    u1, u2 = ql.matexp_aih(h, t1), ql.matexp_aih(h, t2)
    assert ql.is_unitary(u1)
    assert np.max(np.abs(u1 @ u2 - ql.matexp_aih(h, t1 + t2))) < 1e-11
    assert np.max(np.abs(u1 @ ql.matexp_aih(h, -t1) - np.eye(6))) < 1e-12


def test_evolve_spectral_matches_matexp():
    rng = np.random.default_rng(2)
    h = random_hermitian(rng, 5)
    psi = rng.normal(size=5) + 0j
    psi /= np.linalg.norm(psi)
    states = ql.evolve_spectral(h, psi, [0.0, 0.4, 3.0])
    for t, s in zip([0.0, 0.4, 3.0], states):
        assert np.allclose(s, ql.matexp_aih(h, t) @ psi, atol=1e-12)
        assert abs(np.linalg.norm(s) - 1) < 1e-10


def test_fidelity():
    psi = np.array([0.6, 0.8j])
    assert ql.fidelity(psi, psi) == pytest.approx(1)
    assert ql.fidelity(psi, np.exp(1.1j) * psi) == pytest.approx(1)
    assert ql.fidelity(ql.UP, ql.DOWN) == 0
    with pytest.raises(ValueError):
        ql.fidelity(ql.UP, np.ones(3))


def test_born_probabilities():
    space = ql.SpinFockSpace(1, (5,))
    assert ql.born_probabilities(space.basis_state((0,), (0,)), space) == (1, 0)
    plus = (ql.UP + ql.DOWN) / math.sqrt(2)
    p = ql.born_probabilities(space.product_state([plus], [np.eye(5)[3]]), space)
    assert p == pytest.approx((0.5, 0.5))
    with pytest.raises(IndexError):
        ql.born_probabilities(np.zeros(10), space, 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_born_probabilities_sum(seed):
    rng = np.random.default_rng(seed)
    space = ql.SpinFockSpace(2, (3,))
    psi = rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim)
    psi /= np.linalg.norm(psi)
    for i in range(2):
        assert sum(ql.born_probabilities(psi, space, i)) == pytest.approx(1, abs=1e-10)


def test_laguerre_examples():
    assert ql.assoc_laguerre(0, 3, 0.7) == 1
    assert ql.assoc_laguerre(1, 1, 0.01) == pytest.approx(1.99, abs=1e-15)
    assert abs(ql.assoc_laguerre(5, 2, 0.04) - laguerre_series(5, 2, 0.04)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 20), st.integers(0, 5), st.floats(0, 1))
def test_laguerre_against_series(n, k, x):
    # values reach ~5e4 here, so the tolerance is relative to max(1, |L|)
    exact = laguerre_series(n, k, x)
    assert abs(ql.assoc_laguerre(n, k, x) - exact) <= 1e-12 * max(1.0, abs(exact))


def test_ladder_operators():
    a, ad = ql.ladder_operators(6)
    vac = np.eye(6)[0]
    assert not np.any(a @ vac)
    assert np.array_equal(ad @ vac, np.eye(6)[1])
    assert np.allclose(np.diag(ad @ a), np.arange(6))
    with pytest.raises(ValueError):
        ql.ladder_operators(1)


def test_coherent_amplitudes_normalised():
    amps = ql.coherent_amplitudes(1.2 - 0.5j, 60)
    assert np.linalg.norm(amps) == pytest.approx(1, abs=1e-12)


def test_leakage_examples():
    space = ql.SpinFockSpace(1, (50,))
    assert ql.leakage(space.basis_state((1,), (0,)), space) == 0
    mode = ql.SpinFockSpace(0, (50,))
    assert ql.leakage(ql.coherent_amplitudes(1.0, 50), mode) < 1e-30
    big = ql.SpinFockSpace(0, (40,))
    state = ql.coherent_amplitudes(6.0, 40)
    assert ql.leakage(state, big) > 1e-3
    with pytest.raises(LeakageError):
        ql.check_leakage(state, big)


def test_leakage_warns_between_thresholds():
    mode = ql.SpinFockSpace(0, (10,))
    psi = np.zeros(10, dtype=complex)
    psi[0], psi[9] = math.sqrt(1 - 1e-7), math.sqrt(1e-7)
    with pytest.warns(RuntimeWarning):
        assert ql.check_leakage(psi, mode) == pytest.approx(1e-7)
    psi[0], psi[9] = 1, 0
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        ql.check_leakage(psi, mode)
