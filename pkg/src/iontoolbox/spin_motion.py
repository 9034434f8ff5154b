"""Single-qubit gate physics for a spin coupled to one motional mode.

Time is measured in units of 1/omega_m and frequencies are angular in units
of omega_m (hbar = 1).  All Hamiltonians act on ``SpinFockSpace(1, (N,))``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import qlinalg as ql
from .errors import LeakageError, StepSizeError

STEPS_PER_PERIOD = 50
_PAD = 20  # extra Fock levels used when exponentiating position operators


@dataclass(frozen=True)
class PulseSpec:
    """Drive parameters for a single-qubit pulse.

    ``rabi`` is the bare Rabi frequency, ``detuning`` is laser minus qubit
    frequency, ``phase`` the laser phase (with k x_eq absorbed), and
    ``duration`` the pulse length in units of 1/omega_m.  ``qubit_frequency``
    is only needed by the lab-frame integrator.
    """

    rabi: float
    detuning: float = 0.0
    phase: float = 0.0
    lamb_dicke: float = 0.0
    duration: float = 0.0
    trap_frequency: float = 1.0
    qubit_frequency: float | None = None

    def __post_init__(self):
        if self.rabi < 0 or self.lamb_dicke < 0 or self.duration < 0:
            raise ValueError("rabi, lamb_dicke and duration must be non-negative")
        if self.trap_frequency <= 0:
            raise ValueError("trap frequency must be positive")

    def in_lamb_dicke_regime(self, mean_n=0.0):
        return self.lamb_dicke**2 * (mean_n + 0.5) < 0.1

    @property
    def laser_frequency(self):
        if self.qubit_frequency is None:
            raise ValueError("qubit_frequency is required for lab-frame quantities")
        return self.qubit_frequency + self.detuning


def rotation(beta, phi, theta):
    """SU(2) rotation by ``theta`` about n = (cos b cos p, cos b sin p, sin b)."""
    nx = math.cos(beta) * math.cos(phi)
    ny = math.cos(beta) * math.sin(phi)
    nz = math.sin(beta)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [[c - 1j * nz * s, (-1j * nx - ny) * s], [(-1j * nx + ny) * s, c + 1j * nz * s]],
        dtype=complex,
    )


def rotation_equatorial(phi, theta):
    """Carrier propagator ``exp(-i H_carrier t)`` written with theta = Omega t.

    With sigma_plus = |up><down| this equals ``rotation(0, -phi, theta)``:
    the laser phase enters the Bloch axis with the opposite sign.
    """
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [[c, -1j * np.exp(1j * phi) * s], [-1j * np.exp(-1j * phi) * s, c]],
        dtype=complex,
    )


def _coupling(n, s, eta):
    """Signed Debye-Waller element; the i**|s| phase is left to the laser phase."""
    m = n + s
    if n < 0 or m < 0:
        raise ValueError(f"transition {n} -> {m} leaves the oscillator ladder")
    lo, hi = min(n, m), max(n, m)
    k = abs(s)
    log_ratio = 0.5 * (math.lgamma(lo + 1) - math.lgamma(hi + 1))
    x = eta * eta
    return math.exp(-x / 2 + log_ratio) * eta**k * ql.assoc_laguerre(lo, k, x)


def debye_waller(n, s, eta):
    """|<n+s| exp(i eta (a + a^dagger)) |n>| in closed form."""
    return abs(_coupling(n, s, eta))


def rabi_frequency(spec, n, s):
    """Rabi frequency Omega_{n+s,n}; zero when level n+s does not exist."""
    if n + s < 0:
        return 0.0
    return spec.rabi * debye_waller(n, s, spec.lamb_dicke)


def lamb_dicke_rabi(spec, n, s):
    """First-order Lamb-Dicke approximation for the carrier and first sidebands."""
    eta = spec.lamb_dicke
    if s == 0:
        return spec.rabi * (1 - (n + 0.5) * eta**2)
    if s == -1:
        return spec.rabi * math.sqrt(n) * eta
    if s == 1:
        return spec.rabi * math.sqrt(n + 1) * eta
    raise ValueError(f"Lamb-Dicke expressions exist only for |s| <= 1, got s={s}")


def _uniform_coupling(n, s, eta):
    m = n + s
    if m < 0:
        raise ValueError(f"transition {n} -> {m} leaves the oscillator ladder")
    k = abs(s)
    lo, hi = min(n, m), max(n, m)
    return eta**k * math.exp(0.5 * (math.lgamma(hi + 1) - math.lgamma(lo + 1))) / math.factorial(k)


def single_mode_space(cutoff=ql.DEFAULT_CUTOFF):
    return ql.SpinFockSpace(1, (cutoff,))


def sideband_hamiltonian(spec, s, space=None, uniform=False):
    """Resonant carrier (s=0), red (s=-1) or blue (s=+1) sideband Hamiltonian.

    Each pair |down, n> <-> |up, n+s> is coupled with Omega_0 D_{n+s,n} / 2,
    i.e. the exact level-dependent strength.  ``uniform=True`` replaces it by
    the textbook idealisation (Omega_0 for the carrier, Omega_0 eta a for the
    sidebands).  The pulse detuning is ignored: the form is the one in the
    frame where the selected sideband is resonant.
    """
    space = space or single_mode_space()
    if space.spin_count != 1 or len(space.fock_cutoffs) != 1:
        raise ValueError("sideband Hamiltonians need one spin and one mode")
    cutoff = space.fock_cutoffs[0]
    if abs(s) >= cutoff:
        raise ValueError(f"Fock cutoff {cutoff} too small for sideband order {s}")
    h = np.zeros((space.dim, space.dim), dtype=complex)
    phase = np.exp(1j * spec.phase)
    for n in range(cutoff):
        m = n + s
        if not 0 <= m < cutoff:
            continue
        if uniform:
            g = 0.5 * spec.rabi * _uniform_coupling(n, s, spec.lamb_dicke)
        else:
            g = 0.5 * spec.rabi * _coupling(n, s, spec.lamb_dicke)
        up, down = space.index((0,), (m,)), space.index((1,), (n,))
        h[up, down] = g * phase
        h[down, up] = g * np.conj(phase)
    return h


def thermal_populations(mean_n, cutoff):
    """Thermal occupation probabilities, renormalised over the truncated ladder."""
    if mean_n < 0:
        raise ValueError("mean occupation must be non-negative")
    if mean_n == 0:
        p = np.zeros(cutoff)
        p[0] = 1.0
        return p
    ratio = mean_n / (mean_n + 1)
    p = ratio ** np.arange(cutoff) / (mean_n + 1)
    return p / p.sum()


def nutation_curve(spec, s, initial, samples, space=None, uniform=False):
    """Sample P_up(t) on ``samples`` evenly spaced times in [0, duration]."""
    if samples < 2:
        raise ValueError("need at least two samples")
    space = space or single_mode_space()
    h = sideband_hamiltonian(spec, s, space, uniform=uniform)
    times = np.linspace(0.0, spec.duration, samples)
    states = ql.evolve_spectral(h, initial, times)
    for psi in states[[0, -1]]:
        ql.check_leakage(psi, space)
    probs = np.abs(states.reshape((samples,) + space.shape)) ** 2
    p_up = probs[:, 0].sum(axis=1)
    return times, p_up


def thermal_nutation(spec, s, mean_n, samples, space=None, populations=None):
    """P_up(t) for a thermal motional mixture starting in spin down.

    The mixture is averaged over pure trajectories |down, n>, each weighted
    by its occupation probability; leakage is judged on the weighted mixture.
    """
    if samples < 2:
        raise ValueError("need at least two samples")
    space = space or single_mode_space()
    cutoff = space.fock_cutoffs[0]
    weights = thermal_populations(mean_n, cutoff) if populations is None else np.asarray(populations)
    h = sideband_hamiltonian(spec, s, space)
    times = np.linspace(0.0, spec.duration, samples)
    total = np.zeros(samples)
    leaked = 0.0
    for n, w in enumerate(weights):
        if w == 0:
            continue
        states = ql.evolve_spectral(h, space.basis_state((1,), (n,)), times)
        probs = np.abs(states.reshape((samples,) + space.shape)) ** 2
        total += w * probs[:, 0].sum(axis=1)
        leaked += w * max(ql.leakage(states[0], space), ql.leakage(states[-1], space))
    if leaked > ql.LEAKAGE_ERROR:
        raise LeakageError(f"thermal mixture leaks {leaked:.3e} into the top Fock levels")
    return times, total


def _position_exponential(eta, cutoff):
    """exp(i eta (a + a^dagger)) on ``cutoff`` levels, computed on a padded ladder."""
    a, ad = ql.ladder_operators(cutoff + _PAD)
    full = ql.matexp_aih(a + ad, -eta)
    return full[:cutoff, :cutoff]


def interaction_hamiltonian(spec, space=None, detuning=None):
    """Time-independent Hamiltonian in the frame rotating with the laser.

    H = -(delta/2) sigma_z + omega_m (a^dagger a + 1/2)
        + (Omega_0/2) (sigma_plus e^{i eta (a + a^dagger)} e^{i phi} + h.c.)

    Moving to the interaction picture of its first two terms gives the
    full interaction Hamiltonian with every sideband retained; spin
    populations are identical in both frames.
    """
    space = space or single_mode_space()
    cutoff = space.fock_cutoffs[0]
    delta = spec.detuning if detuning is None else detuning
    a, ad = ql.ladder_operators(cutoff)
    kick = _position_exponential(spec.lamb_dicke, cutoff)
    coupling = np.kron(ql.sigma_plus(), kick) * np.exp(1j * spec.phase)
    h = -0.5 * delta * np.kron(ql.sigma_z(), np.eye(cutoff))
    h = h + spec.trap_frequency * np.kron(np.eye(2), ad @ a + 0.5 * np.eye(cutoff))
    h = h + 0.5 * spec.rabi * (coupling + coupling.conj().T)
    return h


def rwa_state(spec, initial, t, space=None):
    """RWA evolution of ``initial`` for time ``t``, returned in the interaction picture."""
    space = space or single_mode_space()
    h = interaction_hamiltonian(spec, space)
    psi = ql.matexp_aih(h, t) @ initial
    cutoff = space.fock_cutoffs[0]
    frame = np.kron(
        np.diag([np.exp(-0.5j * spec.detuning * t), np.exp(0.5j * spec.detuning * t)]),
        np.diag(np.exp(1j * spec.trap_frequency * (np.arange(cutoff) + 0.5) * t)),
    )
    return frame @ psi


def _spectrum_point(spec, initial, delta, space):
    h = interaction_hamiltonian(spec, space, detuning=delta)
    psi = ql.matexp_aih(h, spec.duration) @ initial
    ql.check_leakage(psi, space)
    return ql.born_probabilities(psi, space)[0]


def sideband_spectrum(spec, initial, detunings, space=None, max_workers=None):
    """P_up after a pulse of fixed duration for every detuning in the grid."""
    detunings = np.asarray(detunings, dtype=float)
    if detunings.size == 0:
        raise ValueError("detuning grid is empty")
    space = space or single_mode_space()
    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers) as pool:
            values = list(pool.map(lambda d: _spectrum_point(spec, initial, d, space), detunings))
    else:
        values = [_spectrum_point(spec, initial, d, space) for d in detunings]
    return detunings, np.array(values)


def _chain_product(unitaries):
    """U_{K-1} ... U_1 U_0 for a stack of matrices, by pairwise reduction."""
    mats = unitaries
    while len(mats) > 1:
        if len(mats) % 2:
            mats = np.concatenate([mats, np.eye(mats.shape[-1], dtype=complex)[None]])
        mats = mats[1::2] @ mats[0::2]
    return mats[0]


def lab_hamiltonian_terms(spec, space):
    """Static part H_0 and the operators multiplying e^{+-i(phi - omega t)}."""
    cutoff = space.fock_cutoffs[0]
    a, ad = ql.ladder_operators(cutoff)
    h0 = 0.5 * spec.qubit_frequency * np.kron(ql.sigma_z(), np.eye(cutoff))
    h0 = h0 + spec.trap_frequency * np.kron(np.eye(2), ad @ a + 0.5 * np.eye(cutoff))
    kick = _position_exponential(spec.lamb_dicke, cutoff)
    drive = 0.5 * spec.rabi * np.kron(ql.sigma_x(), kick)
    return h0, drive


def evolve_lab_frame(spec, initial, steps, space=None, chunk=4096):
    """Integrate H_0 + Omega_0 sigma_x cos(eta(a + a^dagger) - omega t + phi) without RWA.

    The Hamiltonian is frozen at each step midpoint and exponentiated
    exactly (exponential midpoint rule, second order in the step).
    Returns the lab-frame state at ``spec.duration``.
    """
    space = space or single_mode_space()
    omega = spec.laser_frequency
    needed = min_lab_steps(spec)
    if steps < needed:
        raise StepSizeError(f"{steps} steps do not resolve the drive; use at least {needed}")
    dt = spec.duration / steps
    h0, drive = lab_hamiltonian_terms(spec, space)
    psi = np.asarray(initial, dtype=complex)
    for start in range(0, steps, chunk):
        k = np.arange(start, min(start + chunk, steps))
        phase = np.exp(1j * (spec.phase - omega * (k + 0.5) * dt))[:, None, None]
        hs = h0 + phase * drive + np.conj(phase) * drive.conj().T
        evals, evecs = np.linalg.eigh(hs)
        us = (evecs * np.exp(-1j * evals * dt)[:, None, :]) @ np.conj(np.swapaxes(evecs, 1, 2))
        psi = _chain_product(us) @ psi
    ql.check_leakage(psi, space)
    return psi


def evolve_lab_frame_extrapolated(spec, initial, steps, space=None):
    """Richardson combination (4 psi_2N - psi_N) / 3 of two lab-frame runs.

    Cancels the O(dt^2) term of the midpoint rule so that the remaining
    discrepancy from the RWA result is dominated by counter-rotating terms.
    """
    coarse = evolve_lab_frame(spec, initial, steps, space)
    fine = evolve_lab_frame(spec, initial, 2 * steps, space)
    psi = (4 * fine - coarse) / 3
    return psi / np.linalg.norm(psi)


def min_lab_steps(spec):
    """Smallest step count accepted by :func:`evolve_lab_frame`."""
    fastest = max(abs(spec.qubit_frequency), abs(spec.laser_frequency), spec.trap_frequency)
    return math.ceil(spec.duration * fastest * STEPS_PER_PERIOD / (2 * math.pi))


def lab_to_interaction(psi, spec, t, space=None):
    """Apply exp(+i H_0 t), moving a lab-frame state to the interaction picture."""
    space = space or single_mode_space()
    cutoff = space.fock_cutoffs[0]
    spin = np.exp(0.5j * spec.qubit_frequency * t * np.array([1.0, -1.0]))
    motion = np.exp(1j * spec.trap_frequency * (np.arange(cutoff) + 0.5) * t)
    return np.kron(spin, motion) * psi
