import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iontoolbox import couplings as cp
from iontoolbox import qlinalg as ql
from iontoolbox import spin_motion as sm

LC = cp.LevelCoupling


def test_magnetic_dipole():
    assert cp.magnetic_dipole_rabi(1.0, math.pi / 2) == pytest.approx(2 * math.pi * 28)
    assert cp.magnetic_dipole_rabi(1.0, 0.0) == 0
    assert cp.magnetic_dipole_rabi(0.5, math.pi / 2) == pytest.approx(2 * math.pi * 14)
    with pytest.raises(ValueError):
        cp.magnetic_dipole_rabi(-1, 0.3)


def test_raman_examples():
    single = [(LC(1, 1, 10.0), LC(1, 1, 10.0))]
    assert cp.raman_rabi(2, 2, single) == pytest.approx(0.1)
    cancel = [(LC(1, 0, 5.0), LC(0, 1, 5.0)), (LC(-1, 0, 5.0), LC(0, 1, 5.0))]
    assert cp.raman_rabi(1, 1, cancel) == 0
    levels = [(LC(0.3 + 0.1j, 0.2, 4.0), LC(0.5, 0.7j, 4.0)), (LC(0.9, 0.1, -7.0), LC(0.1, 0.4, -7.0))]
    doubled = [(LC(r.up, r.down, 2 * r.detuning), LC(b.up, b.down, 2 * b.detuning)) for r, b in levels]
    assert cp.raman_rabi(1.3, 0.8, doubled) == pytest.approx(cp.raman_rabi(1.3, 0.8, levels) / 2)


def test_raman_rejects_bad_input():
    with pytest.raises(ValueError):
        LC(1, 1, 0.0)
    with pytest.raises(ValueError):
        cp.raman_rabi(1, 1, [])
    with pytest.raises(ValueError):
        cp.BeamSpec(1.0, polarization=(1, 1, 0))


@settings(max_examples=40, deadline=None)
@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(0.1, 5), st.floats(0.1, 5))
def test_raman_bilinear(a, b, er, eb):
    levels = [(LC(0.4j, 0.2, 3.0), LC(0.1, 0.6, 3.0)), (LC(0.2, 0.3, -2.0), LC(0.5, -0.1j, -2.0))]
    base = cp.raman_rabi_complex(er, eb, levels)
    assert cp.raman_rabi_complex(a * er, b * eb, levels) == pytest.approx(a * b * base, rel=1e-12, abs=1e-14)


def test_raman_phase_folds_argument():
    levels = [(LC(1j, 0, 2.0), LC(0, 1, 2.0))]
    assert cp.raman_phase(1, 1, levels, red_phase=0.2, blue_phase=0.5) == pytest.approx(0.3 + math.pi / 2)


def test_light_shifts():
    sym = [(LC(0.4, 0.4, 3.0), LC(0.7, 0.7, -2.0))]
    assert cp.raman_light_shifts(1.0, 2.0, sym)[2] == pytest.approx(0, abs=1e-15)
    one = [(LC(0.0, 0.5, 2.0), LC(0.0, 0.0, 2.0))]
    down, up, diff = cp.raman_light_shifts(3.0, 0.0, one)
    assert down == pytest.approx(9 * 0.25 / 8)
    flipped = [(LC(0.0, 0.5, -2.0), LC(0.0, 0.0, -2.0))]
    assert cp.raman_light_shifts(3.0, 0.0, flipped)[0] == pytest.approx(-down)


def test_light_shift_exchange_symmetry():
    levels = [(LC(0.3, 0.8, 3.0), LC(0.2, 0.5, 3.5)), (LC(0.6, 0.1, -4.0), LC(0.9, 0.2, -4.5))]
    swapped = [(LC(r.down, r.up, r.detuning), LC(b.down, b.up, b.detuning)) for r, b in levels]
    assert cp.raman_light_shifts(1.2, 0.9, swapped)[2] == pytest.approx(-cp.raman_light_shifts(1.2, 0.9, levels)[2])


def test_carrier_hamiltonian_shift_convention():
    h = cp.raman_carrier_hamiltonian(0.0, 0.0, 0.3, 0.0, 4)
    evals = np.linalg.eigvalsh(h)
    # qubit energy difference equals the differential shift
    assert evals.max() - evals.min() == pytest.approx(0.3)
    full = cp.raman_carrier_hamiltonian(0.5, 0.2, 0.3, 0.1, 4)
    base = sm.sideband_hamiltonian(sm.PulseSpec(rabi=0.5, phase=0.2, lamb_dicke=0.1), 0, sm.single_mode_space(4))
    assert np.allclose(full - base, 0.15 * np.kron(ql.sigma_z(), np.eye(4)))


def test_quadrupole():
    assert cp.quadrupole_rabi(3.0, 0) == 0
    assert cp.quadrupole_rabi(2.0, 1.0) == 1.0
    assert cp.quadrupole_rabi(4.0, 0.3j) == pytest.approx(2 * cp.quadrupole_rabi(2.0, 0.3j))


def test_lamb_dicke_parameter():
    assert cp.lamb_dicke_parameter(2.0, 4.0, 0.5) == pytest.approx(2.0 / 2)
    eta = cp.lamb_dicke_parameter(1.0, 1.0, 1.0)
    assert cp.lamb_dicke_parameter(1.0, 4.0, 1.0) == pytest.approx(eta / 2)
    with pytest.raises(ValueError):
        cp.lamb_dicke_parameter(1.0, 0.0, 1.0)


def test_raman_geometry():
    assert cp.raman_wavenumber((0, 0, 1.0), (0, 0, 1.0)) == 0
    k = 3.0
    axis = np.array([1.0, -1.0, 0.0])
    assert cp.raman_wavenumber((0, k, 0), (k, 0, 0), axis) == pytest.approx(math.sqrt(2) * k)
