"""Two-ion normal modes, spin-dependent-force gates and the universal gate set.

Two-qubit matrices use the basis order (up-up, up-down, down-up, down-down).
Gates built from spin-dependent forces are analytic: each collective spin
branch drives one normal mode around a closed loop and picks up the phase
of :func:`driven_osc.analytic_phases`.  ``*_dynamics`` functions redo the
same gate by integrating every branch with :func:`driven_osc.integrate_driven`.
"""
from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import driven_osc as dosc
from . import qlinalg as ql
from .errors import LeakageError
from .spin_motion import rotation

BASIS_LABELS = ("up,up", "up,down", "down,up", "down,down")
BRANCHES = ((0, 0), (0, 1), (1, 0), (1, 1))  # spin indices, 0 = up
_SQ2 = math.sqrt(2)


@dataclass(frozen=True)
class NormalModes:
    cm_frequency: float
    st_frequency: float
    cm_width: float
    st_width: float
    stretch_signs: tuple = (1, -1)

    def frequency(self, mode):
        return {"cm": self.cm_frequency, "st": self.st_frequency}[_check_mode(mode)]

    def width(self, mode):
        return {"cm": self.cm_width, "st": self.st_width}[_check_mode(mode)]

    def signs(self, mode):
        return (1, 1) if _check_mode(mode) == "cm" else tuple(self.stretch_signs)


def _check_mode(mode):
    if mode not in ("cm", "st"):
        raise ValueError(f"mode must be 'cm' or 'st', got {mode!r}")
    return mode


def normal_modes(trap_frequency=1.0, single_ion_width=1.0):
    """Axial modes of two equal-mass ions; widths scale as sqrt(omega_m / omega_mode)."""
    if trap_frequency <= 0 or single_ion_width <= 0:
        raise ValueError("trap frequency and width must be positive")
    st = math.sqrt(3) * trap_frequency
    return NormalModes(
        cm_frequency=trap_frequency,
        st_frequency=st,
        cm_width=single_ion_width,
        st_width=single_ion_width * math.sqrt(trap_frequency / st),
    )


@dataclass(frozen=True)
class ForcePattern:
    """Force amplitude on each ion for each qubit level.

    Amplitudes may be complex: the argument is the phase of the oscillating
    force at that ion.  ``derivation`` keeps whatever produced the numbers.
    """

    force_up: tuple
    force_down: tuple
    derivation: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for name in ("force_up", "force_down"):
            value = getattr(self, name)
            if np.isscalar(value):
                value = (value, value)
            value = tuple(complex(v) for v in value)
            if len(value) != 2 or not all(np.isfinite(v) for v in value):
                raise ValueError(f"{name} needs two finite per-ion values")
            object.__setattr__(self, name, value)

    def on_ion(self, ion, spin):
        return (self.force_up if spin == 0 else self.force_down)[ion]


def light_shift_potential(shift_plus, shift_minus, x, t=0.0, wavenumber=1.0, beat=0.0, phase=0.0):
    """Standing-wave light shift of one qubit level in the lin-perp-lin beam geometry."""
    arg = wavenumber * np.asarray(x) - beat * t + phase
    return 0.5 * (shift_plus + shift_minus) + 0.5 * (shift_plus - shift_minus) * np.cos(arg)


def light_shift_force(shift_plus, shift_minus, x, t=0.0, wavenumber=1.0, beat=0.0, phase=0.0):
    """-dV/dx of :func:`light_shift_potential`."""
    arg = wavenumber * np.asarray(x) - beat * t + phase
    return 0.5 * wavenumber * (shift_plus - shift_minus) * np.sin(arg)


def force_pattern(shifts_up, shifts_down, positions, wavenumber=1.0, phase=0.0):
    """Per-ion force phasors from the circular-polarisation light shifts.

    ``shifts_up`` and ``shifts_down`` are (Delta_+, Delta_-) pairs; the force
    on an ion at x is Re[F e^{-i beat t}] with F the returned amplitude.
    """
    def amp(pair, x):
        plus, minus = pair
        return 0.5 * wavenumber * (plus - minus) * cmath.exp(1j * (wavenumber * x + phase - math.pi / 2))

    return ForcePattern(
        tuple(amp(shifts_up, x) for x in positions),
        tuple(amp(shifts_down, x) for x in positions),
        derivation={"shifts_up": tuple(shifts_up), "shifts_down": tuple(shifts_down),
                    "positions": tuple(positions), "wavenumber": wavenumber, "phase": phase},
    )


def mode_drive(pattern, spins, modes, mode):
    """Total force on a mode: sum of per-ion forces (cm) or their signed difference (st)."""
    signs = modes.signs(mode)
    return sum(s * pattern.on_ion(i, spin) for i, (s, spin) in enumerate(zip(signs, spins)))


def branch_drive(pattern, spins, modes, mode, detuning):
    """DriveSpec of one spin branch; each ion couples through x_mode0 / sqrt(2)."""
    total = mode_drive(pattern, spins, modes, mode)
    return dosc.DriveSpec(force=abs(total), width=modes.width(mode) / _SQ2, detuning=detuning)


def _check_closure(duration, loop_time):
    if duration is None:
        return
    loops = duration / loop_time
    if loops < 0.5 or abs(loops - round(loops)) > 1e-9:
        raise ValueError(f"duration {duration} is not a whole number of loops of {loop_time}")


def _check_budget(spec, cutoff):
    # peak displacement is the loop diameter |F x0 / delta|; count the
    # untruncated coherent state's population from the top two levels up
    amps = ql.coherent_amplitudes(abs(spec.strength), max(cutoff - 2, 1))
    leaked = max(0.0, 1.0 - float(np.sum(np.abs(amps) ** 2)))
    if leaked > ql.LEAKAGE_ERROR:
        raise LeakageError(f"|alpha| = {abs(spec.strength):.3g} leaks {leaked:.2e} out of a {cutoff}-level mode")


def calibrate_sigma_z(modes, detuning, mode="st", target=math.pi / 2):
    """Force F (with F_up = -F_down = F on both ions) giving ``target`` on the anti-parallel branches.

    The anti-parallel branches see a total force 2F through x_mode0 / sqrt(2),
    so their drive parameter is sqrt(2) F x_mode0 / delta.
    """
    if _check_mode(mode) == "cm":
        raise ValueError("equal-and-opposite forces do not drive anti-parallel states on the cm mode")
    strength = math.sqrt(2 * abs(target) / math.pi)
    return strength * abs(detuning) / (_SQ2 * modes.width(mode))


def sigma_z_gate(pattern, modes, detuning, mode="st", duration=None, cutoff=40, samples=2001):
    """Diagonal phase gate from a spin-dependent force; returns (matrix, paths per branch)."""
    _check_mode(mode)
    specs = [branch_drive(pattern, spins, modes, mode, detuning) for spins in BRANCHES]
    _check_closure(duration, specs[0].loop_time)
    loops = 1 if duration is None else round(duration / specs[0].loop_time)
    for spec in specs:
        _check_budget(spec, cutoff)
    phases = [loops * dosc.analytic_phases(s)[0] for s in specs]
    paths = {label: dosc.drive_path(s, samples) for label, s in zip(BASIS_LABELS, specs)}
    return np.diag(np.exp(1j * np.array(phases))), paths


def _integrate_branches(specs, cutoff, steps):
    with ThreadPoolExecutor(max_workers=len(specs)) as pool:
        return list(pool.map(lambda s: dosc.integrate_driven(s, cutoff=cutoff, steps=steps), specs))


def sigma_z_gate_dynamics(pattern, modes, detuning, mode="st", cutoff=40, steps=4000):
    """Time-domain version of :func:`sigma_z_gate` over one loop.

    Returns (gate matrix, lowest ground-state population among branches).
    """
    specs = [branch_drive(pattern, spins, modes, mode, detuning) for spins in BRANCHES]
    results = _integrate_branches(specs, cutoff, steps)
    ground = min(abs(r.state[0]) ** 2 for r in results)
    return np.diag([np.exp(1j * r.total_phase) for r in results]), ground


def phi_basis(phi):
    """Columns |+phi>, |-phi>: eigenvectors of cos(phi) sigma_x + sin(phi) sigma_y."""
    return np.array([[1, 1], [cmath.exp(1j * phi), -cmath.exp(1j * phi)]], dtype=complex) / _SQ2


def _phi_branch_specs(drive_parameter, detuning_sign, width=1.0):
    # Parallel branches (++ and --) drive the cm mode with strength p; the
    # anti-parallel ones cancel.
    detuning = math.copysign(1.0, detuning_sign)
    force = drive_parameter * abs(detuning) / width
    strengths = (force, 0.0, 0.0, force)
    return [dosc.DriveSpec(force=f, width=width, detuning=detuning) for f in strengths]


def sigma_phi_gate(phi, drive_parameter, modes=None, mode="cm", detuning_sign=1):
    """Phase gate diagonal in the |+-phi> x |+-phi> basis, returned in the qubit basis.

    ``drive_parameter`` is F x_mode0 / delta of the parallel branches; at 1
    the gate is e^{i pi/4}(I + i s_phi s_phi)/sqrt(2), a maximally entangling
    collective spin flip.
    """
    _check_mode(mode)
    if detuning_sign == 0:
        raise ValueError("detuning sign must be non-zero")
    specs = _phi_branch_specs(drive_parameter, detuning_sign)
    phases = np.array([dosc.analytic_phases(s)[0] for s in specs])
    basis = np.kron(phi_basis(phi), phi_basis(phi))
    return basis @ np.diag(np.exp(1j * phases)) @ basis.conj().T


def sigma_phi_dynamics(phi, drive_parameter, initial, detuning_sign=1, cutoff=40, steps=4000):
    """Apply the sigma_phi gate to a spin state by integrating each branch's motion.

    Returns the final spin-motion state (spins outer, Fock inner).
    """
    specs = _phi_branch_specs(drive_parameter, detuning_sign)
    results = _integrate_branches(specs, cutoff, steps)
    basis = np.kron(phi_basis(phi), phi_basis(phi))
    coeffs = basis.conj().T @ np.asarray(initial, dtype=complex)
    motion = np.array([r.state for r in results])  # (branch, fock)
    return np.einsum("sb,b,bf->sf", basis, coeffs, motion).reshape(-1)


def bell_fidelity(state):
    """Best overlap with a Bell state, free to choose per-qubit z phases.

    ``state`` is a spin 4-vector, or a spin-motion vector of length 4*m whose
    motional part must factor out (purity above 1 - 1e-6).
    """
    psi = np.asarray(state, dtype=complex).reshape(4, -1)
    if psi.shape[1] > 1:
        rho = psi @ psi.conj().T
        purity = float(np.real(np.trace(rho @ rho)))
        if purity < 1 - 1e-6:
            raise ValueError(f"spins are entangled with motion (purity {purity:.8f})")
        _, vecs = np.linalg.eigh(rho)
        psi = vecs[:, -1:]
    c = np.abs(psi[:, 0]) / np.linalg.norm(psi)
    return float(max((c[0] + c[3]) ** 2, (c[1] + c[2]) ** 2) / 2)


def cnot():
    """Flips the target when the control is down."""
    m = np.eye(4, dtype=complex)
    m[2:, 2:] = ql.sigma_x()
    return m


def toffoli(target_rotation, control="up"):
    """Apply a single-qubit rotation to qubit 3 iff qubits 1 and 2 are both in ``control``."""
    r = np.asarray(target_rotation, dtype=complex)
    if r.shape != (2, 2) or not ql.is_unitary(r):
        raise ValueError("target rotation must be a 2x2 unitary")
    if control not in ("up", "down"):
        raise ValueError("control must be 'up' or 'down'")
    k = 0 if control == "up" else 3
    proj = np.zeros((4, 4), dtype=complex)
    proj[k, k] = 1
    return np.kron(np.eye(4) - proj, np.eye(2)) + np.kron(proj, r)


def hadamard_standard():
    return (ql.sigma_x() + ql.sigma_z()) / _SQ2


def hadamard_paper():
    """The two-rotation decomposition e^{i pi/2} R(0,0,pi) R(0,pi/2,pi/2).

    Taken as a literal matrix product this is (sigma_x + sigma_z) / sqrt(2).
    Applying the rotations in the other order gives [[-1, 1], [1, 1]] / sqrt(2),
    which turns the CNOT sandwich into diag(1, 1, -1, 1).
    """
    return 1j * rotation(0, 0, math.pi) @ rotation(0, math.pi / 2, math.pi / 2)


def phase_gate_pi():
    return np.diag([1, 1, 1, -1]).astype(complex)


def phase_gate_pi_half():
    return -1j * np.diag([1, 1j, 1j, 1])


def sm_gate():
    m = np.array([[1, 0, 0, -1j], [0, 1, -1j, 0], [0, -1j, 1, 0], [-1j, 0, 0, 1]])
    return cmath.exp(1j * math.pi / 4) / _SQ2 * m


def _phase_aligned(a, b):
    """(max entrywise deviation after removing the best global phase, that phase)."""
    phase = cmath.phase(np.vdot(a, b))
    return float(np.max(np.abs(np.exp(-1j * phase) * b - a))), phase


def _real_diag(m):
    return [float(round(v.real, 12)) + 0.0 for v in np.diag(m)]


def basis_change_check():
    """Rebuild the SM gate from the pi/2 phase gate by x-basis rotations."""
    into = np.kron(rotation(0, math.pi / 2, math.pi / 2), rotation(0, math.pi / 2, math.pi / 2))
    back = np.kron(rotation(0, math.pi / 2, -math.pi / 2), rotation(0, math.pi / 2, -math.pi / 2))
    built = into @ (phase_gate_pi_half() * 1j) @ back
    deviation, phase = _phase_aligned(sm_gate(), built)
    sandwiches = {}
    for name, had in (("product", hadamard_paper()),
                      ("reversed", 1j * rotation(0, math.pi / 2, math.pi / 2) @ rotation(0, 0, math.pi))):
        side = np.kron(np.eye(2), had)
        sandwiches[name] = side @ cnot() @ side
    return {
        "max_deviation": deviation,
        "global_phase": phase,
        "raw_deviation": float(np.max(np.abs(built - sm_gate()))),
        "hadamard_paper_sandwich": _real_diag(sandwiches["product"]),
        "hadamard_paper_deviation": float(np.max(np.abs(sandwiches["product"] - phase_gate_pi()))),
        "hadamard_reversed_sandwich": _real_diag(sandwiches["reversed"]),
        "hadamard_reversed_deviation": float(np.max(np.abs(sandwiches["reversed"] - phase_gate_pi()))),
    }


def identity_report():
    """Every matrix identity of the gate set, with deviation and pass flag."""
    h = np.kron(np.eye(2), hadamard_standard())
    r = np.kron(rotation(math.pi / 2, 0, math.pi / 2), rotation(math.pi / 2, 0, math.pi / 2))
    dd = np.array([0, 0, 0, 1], dtype=complex)
    uu = np.array([1, 0, 0, 0], dtype=complex)
    check = basis_change_check()
    sm_dd = sm_gate() @ dd
    rows = [
        ("hadamard_sandwich_cnot", np.max(np.abs(h @ cnot() @ h - phase_gate_pi())), 1e-15),
        ("cnot_from_phase_gate", np.max(np.abs(h @ phase_gate_pi() @ h - cnot())), 1e-15),
        ("pi_half_phase_gate", np.max(np.abs(r @ phase_gate_pi() - phase_gate_pi_half())), 1e-12),
        ("sm_gate_squared", np.max(np.abs(sm_gate() @ sm_gate() @ dd - uu)), 1e-15),
        ("sm_basis_change", check["max_deviation"], 1e-12),
        ("sm_gate_bell_fidelity", abs(1 - bell_fidelity(sm_dd)), 1e-12),
        ("sm_gate_half_population", abs(abs(sm_dd[0]) ** 2 - 0.5), 1e-12),
        ("cnot_involution", np.max(np.abs(cnot() @ cnot() - np.eye(4))), 0.0),
    ]
    for name, gate in (("cnot", cnot()), ("phase_gate_pi", phase_gate_pi()),
                       ("phase_gate_pi_half", phase_gate_pi_half()), ("sm_gate", sm_gate())):
        rows.append((f"{name}_unitary", np.max(np.abs(gate.conj().T @ gate - np.eye(4))), 1e-10))
    return [{"identity": n, "deviation": float(d), "tolerance": t, "passed": bool(d <= t)} for n, d, t in rows]


def gate_to_json(matrix):
    m = np.asarray(matrix, dtype=complex)
    return {
        "basis": list(BASIS_LABELS[: m.shape[0]]) if m.shape[0] == 4 else None,
        "matrix": [[[float(v.real), float(v.imag)] for v in row] for row in m],
    }


def gate_from_json(doc):
    data = np.asarray(doc["matrix"], dtype=float)
    return data[..., 0] + 1j * data[..., 1]


def branch_phases(pattern, modes, detuning, mode="st"):
    """Analytic loop phase of each collective spin branch, in basis order."""
    return [dosc.analytic_phases(branch_drive(pattern, s, modes, mode, detuning))[0] for s in BRANCHES]
