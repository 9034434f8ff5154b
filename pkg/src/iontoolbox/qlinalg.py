"""Dense complex linear algebra over spin ⊗ Fock product spaces.

Conventions used throughout the package:

* hbar = 1 and frequencies are angular, in units of the trap frequency.
* A spin's basis order is (up, down), so ``sigma_z = diag(1, -1)``.
* Product bases list the spins first, lexicographically, with the Fock
  index of each mode innermost.  For two qubits the spin order is
  (up-up, up-down, down-up, down-down).
* ``sigma_plus = |up><down|`` and ``sigma_minus = |down><up|``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import CapacityError, LeakageError, NotHermitianError

MAX_DIM = 4096
DEFAULT_CUTOFF = 50
LEAKAGE_WARN = 1e-8
LEAKAGE_ERROR = 1e-6


def sigma_x():
    return np.array([[0, 1], [1, 0]], dtype=complex)


def sigma_y():
    return np.array([[0, -1j], [1j, 0]], dtype=complex)


def sigma_z():
    return np.array([[1, 0], [0, -1]], dtype=complex)


def sigma_plus():
    """Spin raising operator |up><down|."""
    return np.array([[0, 1], [0, 0]], dtype=complex)


def sigma_minus():
    """Spin lowering operator |down><up|."""
    return np.array([[0, 0], [1, 0]], dtype=complex)


UP = np.array([1, 0], dtype=complex)
DOWN = np.array([0, 1], dtype=complex)


@dataclass(frozen=True)
class SpinFockSpace:
    """Basis descriptor for ``spin_count`` qubits coupled to truncated modes.

    The total dimension is ``2**spin_count * prod(fock_cutoffs)``.
    """

    spin_count: int = 1
    fock_cutoffs: tuple[int, ...] = (DEFAULT_CUTOFF,)

    def __post_init__(self):
        object.__setattr__(self, "fock_cutoffs", tuple(int(c) for c in self.fock_cutoffs))
        if self.spin_count < 0:
            raise ValueError("spin_count must be non-negative")
        if any(c < 1 for c in self.fock_cutoffs):
            raise ValueError(f"Fock cutoffs must be positive, got {self.fock_cutoffs}")
        if self.dim > MAX_DIM:
            raise CapacityError(f"space dimension {self.dim} exceeds {MAX_DIM}")

    @property
    def shape(self):
        return (2,) * self.spin_count + self.fock_cutoffs

    @property
    def dim(self):
        return 2**self.spin_count * math.prod(self.fock_cutoffs)

    def index(self, spins, fock=()):
        """Flat index of a basis ket; spins are 0 (up) or 1 (down)."""
        return int(np.ravel_multi_index(tuple(spins) + tuple(fock), self.shape))

    def basis_state(self, spins, fock=()):
        psi = np.zeros(self.dim, dtype=complex)
        psi[self.index(spins, fock)] = 1.0
        return psi

    def product_state(self, spin_states, mode_states=()):
        """Tensor product of per-spin 2-vectors and per-mode Fock vectors."""
        factors = [np.asarray(s, dtype=complex) for s in spin_states]
        factors += [np.asarray(m, dtype=complex) for m in mode_states]
        if len(factors) != self.spin_count + len(self.fock_cutoffs):
            raise ValueError("one factor is required per spin and per mode")
        return reduce(np.kron, factors)

    def embed(self, spin_ops=None, mode_ops=None):
        """Operator acting as given on selected factors and as identity elsewhere."""
        spin_ops = spin_ops or {}
        mode_ops = mode_ops or {}
        factors = [spin_ops.get(i, np.eye(2)) for i in range(self.spin_count)]
        factors += [mode_ops.get(j, np.eye(c)) for j, c in enumerate(self.fock_cutoffs)]
        return kron(*factors)


def kron(*mats, max_dim=MAX_DIM):
    """Kronecker product of one or more matrices, refusing oversized results."""
    if not mats:
        raise ValueError("kron needs at least one operand")
    rows = math.prod(np.shape(m)[0] for m in mats)
    cols = math.prod(np.shape(m)[-1] for m in mats)
    if max(rows, cols) > max_dim:
        raise CapacityError(f"Kronecker product of size {rows}x{cols} exceeds {max_dim}")
    return reduce(np.kron, (np.asarray(m, dtype=complex) for m in mats))


def hermitian_defect(h):
    h = np.asarray(h)
    return float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0


def matexp_aih(h, t, tol=1e-10):
    """Return ``exp(-i h t)`` for Hermitian ``h`` by eigendecomposition.

    The result is exact (to rounding) for every ``t``; no series truncation
    or time stepping is involved.
    """
    h = np.asarray(h, dtype=complex)
    defect = hermitian_defect(h)
    if defect > tol:
        raise NotHermitianError(f"generator is not Hermitian: max |H - H^dagger| = {defect:.3e}")
    evals, evecs = np.linalg.eigh(h)
    return (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T


def evolve_spectral(h, psi, times):
    """States ``exp(-i h t) psi`` for every ``t`` in ``times``, shape (len(times), dim)."""
    h = np.asarray(h, dtype=complex)
    defect = hermitian_defect(h)
    if defect > 1e-10:
        raise NotHermitianError(f"generator is not Hermitian: max |H - H^dagger| = {defect:.3e}")
    evals, evecs = np.linalg.eigh(h)
    coeffs = evecs.conj().T @ np.asarray(psi, dtype=complex)
    phases = np.exp(-1j * np.outer(np.asarray(times, dtype=float), evals))
    return (phases * coeffs) @ evecs.T


def is_unitary(m, tol=1e-10):
    m = np.asarray(m)
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol)


def overlap_up_to_phase(a, b):
    """``|tr(a^dagger b)| / dim``; equals 1 iff unitaries agree up to global phase."""
    a = np.asarray(a)
    return float(abs(np.trace(a.conj().T @ np.asarray(b))) / a.shape[0])


def fidelity(a, b):
    """Squared overlap ``|<a|b>|^2`` of two state vectors."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(min(1.0, abs(np.vdot(a, b)) ** 2))


def born_probabilities(psi, space, spin_index=0):
    """Marginal (P_up, P_down) of one spin, summed over every other factor."""
    if not 0 <= spin_index < space.spin_count:
        raise IndexError(f"spin index {spin_index} out of range for {space.spin_count} spins")
    probs = np.abs(np.asarray(psi).reshape(space.shape)) ** 2
    other = tuple(ax for ax in range(probs.ndim) if ax != spin_index)
    marginal = probs.sum(axis=other)
    return float(marginal[0]), float(marginal[1])


def assoc_laguerre(n, k, x):
    """Generalized Laguerre polynomial ``L_n^k(x)`` by upward recurrence."""
    if n < 0 or k < 0:
        raise ValueError("assoc_laguerre needs n >= 0 and k >= 0")
    prev, cur = 1.0, 1.0 + k - x
    if n == 0:
        return prev
    for m in range(1, n):
        prev, cur = cur, ((2 * m + 1 + k - x) * cur - (m + k) * prev) / (m + 1)
    return cur


def ladder_operators(cutoff):
    """Truncated annihilation and creation operators (a, a^dagger)."""
    if cutoff < 2:
        raise ValueError("Fock cutoff must be at least 2")
    a = np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), k=1).astype(complex)
    return a, a.conj().T


def coherent_amplitudes(alpha, cutoff):
    """Fock amplitudes exp(-|alpha|^2/2) alpha^n / sqrt(n!) for n < cutoff."""
    n = np.arange(cutoff)
    log_fact = np.array([math.lgamma(k + 1) for k in n])
    if alpha == 0:
        out = np.zeros(cutoff, dtype=complex)
        out[0] = 1.0
        return out
    mag = np.exp(n * math.log(abs(alpha)) - 0.5 * log_fact - 0.5 * abs(alpha) ** 2)
    return mag * np.exp(1j * n * np.angle(alpha))


def leakage(psi, space):
    """Population in states where any mode sits in one of its top two levels."""
    if not space.fock_cutoffs:
        return 0.0
    probs = np.abs(np.asarray(psi).reshape(space.shape)) ** 2
    edge = np.zeros(space.shape, dtype=bool)
    for ax, cutoff in enumerate(space.fock_cutoffs, start=space.spin_count):
        top = [slice(None)] * len(space.shape)
        top[ax] = slice(max(cutoff - 2, 0), None)
        edge[tuple(top)] = True
    return float(probs[edge].sum())


def check_leakage(psi, space, warn=LEAKAGE_WARN, error=LEAKAGE_ERROR):
    """Raise above ``error``, warn above ``warn``; returns the leaked population."""
    leaked = leakage(psi, space)
    if leaked > error:
        raise LeakageError(f"truncation leakage {leaked:.3e} exceeds {error:.0e}; raise the Fock cutoff")
    if leaked > warn:
        warnings.warn(f"truncation leakage {leaked:.3e} above {warn:.0e}", RuntimeWarning, stacklevel=2)
    return leaked
