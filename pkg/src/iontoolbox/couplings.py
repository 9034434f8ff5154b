"""Rabi frequencies from the physical origin of the qubit coupling.

Dipole and quadrupole matrix elements are supplied by the caller in
normalised units; nothing here computes atomic structure.  hbar = 1.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import qlinalg as ql
from .species import ZEEMAN_MHZ_PER_MT


@dataclass(frozen=True)
class BeamSpec:
    amplitude: float
    polarization: tuple = (1.0, 0.0, 0.0)
    wavevector: tuple = (0.0, 0.0, 1.0)
    phase: float = 0.0
    frequency: float = 0.0

    def __post_init__(self):
        norm = float(np.linalg.norm(np.asarray(self.polarization, dtype=complex)))
        if abs(norm - 1) > 1e-12:
            raise ValueError(f"polarization must be a unit vector, norm is {norm}")


@dataclass(frozen=True)
class LevelCoupling:
    """Dipole elements <up|d.eps|e_i>, <down|d.eps|e_i> for one beam and its detuning."""

    up: complex
    down: complex
    detuning: float

    def __post_init__(self):
        if self.detuning == 0:
            raise ValueError("zero detuning: resonant excitation is outside the adiabatic-elimination model")


def magnetic_dipole_rabi(field_mt, angle):
    """Angular Rabi frequency (2 pi x MHz) of a Zeeman qubit driven by an RF field.

    Only the component transverse to the quantisation axis couples the levels.
    """
    if field_mt < 0:
        raise ValueError("field amplitude must be non-negative")
    return 2 * math.pi * ZEEMAN_MHZ_PER_MT * field_mt * abs(math.sin(angle))


def raman_rabi_complex(red_amplitude, blue_amplitude, levels):
    """Complex two-photon Rabi frequency summed over intermediate levels.

    ``levels`` is a sequence of (red, blue) :class:`LevelCoupling` pairs, one
    per excited state e_i.  The red element <up|d.eps_r|e_i> couples the upper
    qubit state and the blue element <down|d.eps_b|e_i> the lower one; the
    red beam's detuning is taken as Delta_i.
    """
    if not levels:
        raise ValueError("at least one intermediate level is required")
    total = 0j
    for red, blue in levels:
        total += red.up * np.conj(blue.down) / red.detuning
    return red_amplitude * blue_amplitude / 4 * total


def raman_rabi(red_amplitude, blue_amplitude, levels):
    return abs(raman_rabi_complex(red_amplitude, blue_amplitude, levels))


def raman_phase(red_amplitude, blue_amplitude, levels, red_phase=0.0, blue_phase=0.0):
    """Effective pulse phase: phi_b - phi_r plus the argument of the complex Rabi frequency."""
    omega = raman_rabi_complex(red_amplitude, blue_amplitude, levels)
    extra = cmath.phase(omega) if omega != 0 else 0.0
    return (blue_phase - red_phase + extra) % (2 * math.pi)


def raman_light_shifts(red_amplitude, blue_amplitude, levels):
    """(shift_down, shift_up, shift_up - shift_down) from both Raman beams."""
    if not levels:
        raise ValueError("at least one intermediate level is required")
    down = up = 0.0
    for red, blue in levels:
        down += abs(red_amplitude) ** 2 / 4 * abs(red.down) ** 2 / red.detuning
        down += abs(blue_amplitude) ** 2 / 4 * abs(blue.down) ** 2 / blue.detuning
        up += abs(red_amplitude) ** 2 / 4 * abs(red.up) ** 2 / red.detuning
        up += abs(blue_amplitude) ** 2 / 4 * abs(blue.up) ** 2 / blue.detuning
    return down, up, up - down


def raman_carrier_hamiltonian(rabi, phase, differential_shift, eta, cutoff):
    """Carrier Hamiltonian with the differential light shift as a sigma_z term.

    The shift enters as (differential / 2) sigma_z so that the qubit energy
    difference moves by exactly ``differential_shift``.
    """
    from .spin_motion import PulseSpec, sideband_hamiltonian, single_mode_space

    space = single_mode_space(cutoff)
    h = sideband_hamiltonian(PulseSpec(rabi=rabi, phase=phase, lamb_dicke=eta), 0, space)
    return h + 0.5 * differential_shift * np.kron(ql.sigma_z(), np.eye(cutoff))


def quadrupole_rabi(field_amplitude, quadrupole_element):
    """Omega_0 = (E0 / 2) |<S|(eps.r)(k.r)|D>| in normalised units."""
    return field_amplitude / 2 * abs(quadrupole_element)


def lamb_dicke_parameter(wavenumber, mass, trap_frequency):
    """eta = k x0 with x0 = sqrt(1 / (2 m omega_m))."""
    if wavenumber < 0 or mass <= 0 or trap_frequency <= 0:
        raise ValueError("wavenumber must be non-negative, mass and trap frequency positive")
    return wavenumber * math.sqrt(1 / (2 * mass * trap_frequency))


def raman_wavenumber(k_red, k_blue, trap_axis=(0.0, 0.0, 1.0)):
    """Projection of k_blue - k_red on the trap axis."""
    axis = np.asarray(trap_axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    return abs(float(np.dot(np.asarray(k_blue, dtype=float) - np.asarray(k_red, dtype=float), axis)))
