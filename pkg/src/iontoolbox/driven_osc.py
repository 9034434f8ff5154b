"""Phases accumulated by a harmonic oscillator driven around a closed loop.

A force F(t) = F0 cos(omega t), detuned by ``delta = omega_m - omega``, moves
the oscillator on a circle in phase space

    alpha(t) = (F0 x0 / 2 delta) (1 - exp(i delta t))

which closes after tau = 2 pi / |delta|.  Over one loop the total phase is
phi = sign(delta) (pi/2) (F0 x0 / delta)^2, split into a dynamic part 2 phi
and a geometric part -phi; |geometric| is twice the enclosed area.  The signs
here are the ones produced by direct integration of the Schrodinger
equation (:func:`integrate_driven`), with hbar = 1.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from . import qlinalg as ql

PATH_COLUMNS = ("time", "re_alpha", "im_alpha", "cum_dynamic", "cum_geometric")


@dataclass(frozen=True)
class DriveSpec:
    force: float
    width: float = 1.0  # ground-state width x0
    detuning: float = 0.1
    duration: float | None = None  # defaults to one loop, 2 pi / |detuning|

    def __post_init__(self):
        if self.detuning == 0:
            raise ValueError("detuning must be non-zero; a resonant drive never closes")
        if self.duration is not None and self.duration < 0:
            raise ValueError("duration must be non-negative")

    @property
    def loop_time(self):
        return 2 * math.pi / abs(self.detuning)

    @property
    def total_time(self):
        return self.loop_time if self.duration is None else self.duration

    @property
    def strength(self):
        """Dimensionless drive parameter F0 x0 / delta."""
        return self.force * self.width / self.detuning

    @property
    def radius(self):
        return self.strength / 2


@dataclass(frozen=True)
class DrivePath:
    times: np.ndarray
    alphas: np.ndarray
    cum_dynamic: np.ndarray
    cum_geometric: np.ndarray

    @property
    def dynamic_phase(self):
        return float(self.cum_dynamic[-1])

    @property
    def geometric_phase(self):
        return float(self.cum_geometric[-1])

    @property
    def total_phase(self):
        return self.dynamic_phase + self.geometric_phase

    @property
    def enclosed_area(self):
        return enclosed_area(self.alphas)

    def rows(self):
        return np.column_stack(
            [self.times, self.alphas.real, self.alphas.imag, self.cum_dynamic, self.cum_geometric]
        )

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(PATH_COLUMNS)
        for row in self.rows():
            writer.writerow([f"{v:.12g}" for v in row])
        return buf.getvalue()


def classical_trajectory(spec, mass, times, trap_frequency=1.0):
    """Position and momentum of a classical oscillator driven from rest."""
    omega_m = trap_frequency
    omega = omega_m - spec.detuning
    denom = omega**2 - omega_m**2
    t = np.asarray(times, dtype=float)
    x = spec.force / mass / denom * (np.cos(omega * t) - np.cos(omega_m * t))
    p = spec.force / denom * (omega_m * np.sin(omega_m * t) - omega * np.sin(omega * t))
    return x, p


def classical_rotating_frame(spec, mass, times, trap_frequency=1.0):
    """Classical trajectory as a complex amplitude in the frame rotating at omega_m.

    Position is scaled by 2 x0 and momentum by p0 = 1 / x0, so the result is
    directly comparable with the coherent-state amplitude alpha(t).
    """
    t = np.asarray(times, dtype=float)
    x, p = classical_trajectory(spec, mass, t, trap_frequency)
    x0 = spec.width
    re = x / (2 * x0)
    im = p * x0
    return (re + 1j * im) * np.exp(1j * trap_frequency * t)


def rotating_frame_path(spec, times):
    t = np.asarray(times, dtype=float)
    return spec.radius * (1 - np.exp(1j * spec.detuning * t))


def phase_space_area(spec):
    return math.pi * spec.radius**2


def analytic_phases(spec):
    """(total, dynamic, geometric) phases after one closed loop."""
    total = math.copysign(math.pi / 2 * spec.strength**2, spec.detuning)
    return total, 2 * total, -total


def enclosed_area(alphas):
    """Signed area of the closed polygon through ``alphas`` (counter-clockwise > 0)."""
    z = np.asarray(alphas)
    return 0.5 * float(np.sum(np.imag(np.conj(z) * np.roll(z, -1))))


def compose_displacements(alpha, beta):
    """D(alpha) D(beta) = D(alpha + beta) exp(i Im(alpha conj(beta)))."""
    return alpha + beta, float(np.imag(alpha * np.conj(beta)))


def displacement_matrix(alpha, cutoff):
    """exp(alpha a^dagger - conj(alpha) a) on a truncated ladder.

    Only the block n < cutoff / 2 is free of truncation artefacts to double
    precision; the precondition keeps the coherent state well inside it.
    """
    if cutoff < 4 * (1 + abs(alpha) ** 2):
        raise ValueError(f"cutoff {cutoff} too small for |alpha| = {abs(alpha):.3g}; need >= {4 * (1 + abs(alpha) ** 2):.1f}")
    a, ad = ql.ladder_operators(cutoff)
    generator = 1j * (alpha * ad - np.conj(alpha) * a)
    return ql.matexp_aih(generator, 1.0)


def coherent_overlap(alpha, beta):
    """<alpha|beta> for two coherent states."""
    return complex(np.exp(-0.5 * (abs(alpha) ** 2 + abs(beta) ** 2) + np.conj(alpha) * beta))


def drive_path(spec, samples=2001):
    """Sample the closed-form path and accumulate both phases along it."""
    if samples < 2:
        raise ValueError("need at least two samples")
    times = np.linspace(0.0, spec.total_time, samples)
    alphas = rotating_frame_path(spec, times)
    dyn, geo = _cumulative_phases(spec, times, alphas)
    return DrivePath(times, alphas, dyn, geo)


def circle_path(radius, samples, center=None, turns=1.0):
    """Counter-clockwise circle through the origin used as a pure parameter path."""
    center = radius if center is None else center
    theta = np.linspace(0.0, 2 * math.pi * turns, samples)
    return center - radius * np.exp(1j * theta)


def geometric_phase(alphas):
    """-sum Im(conj(alpha) d alpha) along a sampled path."""
    z = np.asarray(alphas)
    return -float(np.sum(np.imag(np.conj(z[:-1]) * np.diff(z))))


def _energy(spec, times, alphas):
    # <alpha|V_I(t)|alpha> for V_I = (F0 x0 / 2)(a^dagger e^{i delta t} + a e^{-i delta t})
    return spec.force * spec.width * np.real(alphas * np.exp(-1j * spec.detuning * times))


def _cumulative_phases(spec, times, alphas):
    energy = _energy(spec, times, alphas)
    dyn = np.concatenate([[0.0], -np.cumsum(0.5 * (energy[1:] + energy[:-1]) * np.diff(times))])
    geo = np.concatenate([[0.0], -np.cumsum(np.imag(np.conj(alphas[:-1]) * np.diff(alphas)))])
    return dyn, geo


def numeric_phases(spec, path):
    """(dynamic, geometric) phases of a sampled path by quadrature.

    The dynamic phase integrates -<alpha|V_I|alpha> with the trapezoid rule;
    the geometric phase sums -Im(conj(alpha) d alpha).  Both converge to the
    closed-form values as O(1 / samples^2).
    """
    dyn, geo = _cumulative_phases(spec, np.asarray(path.times), np.asarray(path.alphas))
    return float(dyn[-1]), float(geo[-1])


@dataclass(frozen=True)
class DrivenResult:
    state: np.ndarray
    total_phase: float
    times: np.ndarray
    mean_a: np.ndarray  # <a>(t) in the interaction picture, one entry per time


def integrate_driven(spec, cutoff=40, steps=4000, initial=None):
    """Integrate i d/dt psi = V_I(t) psi step by step from the ground state.

    Each step applies the exact propagator of V_I frozen at the step
    midpoint.  The returned phase is arg <0|psi(T)>, which equals the total
    loop phase when T closes the loop.
    """
    loops = spec.total_time / spec.loop_time
    if steps < 100 * max(loops, 1e-12):
        raise ValueError(f"{steps} steps is fewer than 100 per loop")
    space = ql.SpinFockSpace(0, (cutoff,))
    a, ad = ql.ladder_operators(cutoff)
    quadrature = a + ad
    evals, evecs = np.linalg.eigh(quadrature)
    dt = spec.total_time / steps
    g = 0.5 * spec.force * spec.width
    # exp(-i g dt (a^dag e^{i th} + a e^{-i th})) = R(th) exp(-i g dt X) R(th)^dag, R = e^{i th n}
    kick = (evecs * np.exp(-1j * g * dt * evals)) @ evecs.conj().T
    number = np.arange(cutoff)
    psi = np.zeros(cutoff, dtype=complex) if initial is None else np.array(initial, dtype=complex)
    if initial is None:
        psi[0] = 1.0
    times = np.linspace(0.0, spec.total_time, steps + 1)
    mean_a = np.empty(steps + 1, dtype=complex)
    mean_a[0] = np.vdot(psi, a @ psi)
    for k in range(steps):
        theta = spec.detuning * (k + 0.5) * dt
        rot = np.exp(1j * theta * number)
        psi = rot * (kick @ (np.conj(rot) * psi))
        mean_a[k + 1] = np.vdot(psi, a @ psi)
    ql.check_leakage(psi, space)
    return DrivenResult(psi, float(np.angle(psi[0])), times, mean_a)


def path_from_csv(text):
    """Parse :meth:`DrivePath.to_csv` output back into arrays."""
    rows = list(csv.reader(io.StringIO(text)))
    if tuple(rows[0]) != PATH_COLUMNS:
        raise ValueError(f"unexpected header {rows[0]}")
    data = np.array(rows[1:], dtype=float)
    return DrivePath(data[:, 0], data[:, 1] + 1j * data[:, 2], data[:, 3], data[:, 4])
