"""Atomic constants for common ion qubits and simple level-structure helpers.

Numbers are kept in the units they are usually quoted in: linewidths
(gamma / 2pi) in MHz, hyperfine splittings in GHz, wavelengths in nm,
lifetimes in seconds, magnetic fields in mT.

The Bohr magneton is fixed at ``mu_B / h = 14.0 MHz/mT`` so that a free
electron spin (g = 2) is split by exactly 28 MHz/mT.  This is the rounded
figure used in the trapped-ion literature, not the CODATA value
(13.996 MHz/mT).
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

BOHR_MHZ_PER_MT = 14.0
ZEEMAN_MHZ_PER_MT = 2 * BOHR_MHZ_PER_MT
DATA_VERSION = 1


@dataclass(frozen=True)
class OpticalTransition:
    lambda_d52: float  # nm, S1/2 -> D5/2
    d52_lifetime: float  # s
    branching_ratio: float  # P->S / P->D

    def __post_init__(self):
        if self.lambda_d52 <= 0 or self.d52_lifetime <= 0:
            raise ValueError("optical wavelength and lifetime must be positive")
        if not 0 < self.branching_ratio < 1:
            raise ValueError("branching ratio must lie in (0, 1)")


@dataclass(frozen=True)
class IonSpecies:
    """One ion species.

    Fields that a source table does not list are ``None``; e.g. the
    optical-qubit rows carry only the ``optical`` block.  User-defined
    records (an I = 0 Zeeman qubit such as 88Sr+) are built directly.
    """

    name: str
    nuclear_spin: float | None = None
    p12_linewidth: float | None = None  # MHz
    hyperfine_splitting: float | None = None  # GHz
    lambda12: float | None = None  # nm
    lambda32: float | None = None  # nm
    optical: OpticalTransition | None = None

    def __post_init__(self):
        if self.nuclear_spin is not None:
            if self.nuclear_spin < 0 or (2 * self.nuclear_spin) % 1:
                raise ValueError(f"nuclear spin must be a non-negative multiple of 1/2, got {self.nuclear_spin}")
        for field in ("p12_linewidth", "hyperfine_splitting", "lambda12", "lambda32"):
            value = getattr(self, field)
            if value is not None and value <= 0:
                raise ValueError(f"{field} must be positive, got {value}")

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, record):
        record = dict(record)
        optical = record.pop("optical", None)
        return cls(**record, optical=OpticalTransition(**optical) if optical else None)


def _hf(name, spin, gamma, splitting, l12, l32):
    return IonSpecies(name, spin, gamma, splitting, l12, l32)


def _opt(name, wavelength, lifetime, ratio):
    return IonSpecies(name, optical=OpticalTransition(wavelength, lifetime, ratio))


# Hyperfine qubits: S1/2 splitting and S->P transitions.
HYPERFINE = (
    _hf("9Be+", 1.5, 19.6, 1.25, 313.1, 313.0),
    _hf("25Mg+", 2.5, 41.3, 1.79, 280.3, 279.6),
    _hf("43Ca+", 3.5, 22.5, 3.23, 396.8, 393.4),
    _hf("67Zn+", 2.5, 62.2, 7.2, 206.2, 202.5),
    _hf("87Sr+", 4.5, 21.5, 5.00, 421.6, 407.8),
    _hf("111Cd+", 0.5, 50.5, 14.53, 226.5, 214.4),
    _hf("137Ba+", 1.5, 20.1, 8.04, 493.4, 455.4),
    _hf("171Yb+", 0.5, 19.7, 12.64, 369.4, 328.9),
    _hf("199Hg+", 0.5, 54.7, 40.51, 194.2, 165.0),
)

# Optical qubits: S1/2 -> D5/2 wavelength, D5/2 lifetime, branching ratio.
OPTICAL = (
    _opt("Ca+", 729.1, 1.17, 1 / 17),
    _opt("Sr+", 674.0, 0.36, 1 / 14),
    _opt("Ba+", 1761.7, 30.0, 1 / 3),
    _opt("Yb+", 411.0, 0.007, 1 / 290),
    _opt("Hg+", 281.6, 0.1, 1 / 700),
)

SPECIES = {s.name: s for s in HYPERFINE + OPTICAL}


def lookup(name):
    try:
        return SPECIES[name]
    except KeyError:
        raise KeyError(f"unknown species {name!r}; available: {', '.join(SPECIES)}") from None


def species_document(records=None):
    records = SPECIES.values() if records is None else records
    return {"schema_version": DATA_VERSION, "species": [r.to_dict() for r in records]}


def canonical_json(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def checksum(doc):
    return hashlib.sha256(canonical_json(doc).encode()).hexdigest()


def data_file():
    return resources.files("iontoolbox") / "data" / "species.json"


def load_species(path=None):
    """Species records from a JSON file (the shipped table by default)."""
    text = Path(path).read_text() if path else data_file().read_text()
    doc = json.loads(text)
    return {r["name"]: IonSpecies.from_dict(r) for r in doc["species"]}


def zeeman_splitting(field_mt):
    """Zeeman-qubit splitting in MHz for a field in mT."""
    if field_mt < 0:
        raise ValueError("magnetic field must be non-negative")
    return ZEEMAN_MHZ_PER_MT * field_mt


def hyperfine_constant(species):
    """Ground-state hyperfine constant A_hf (GHz) from Delta_hf = (I + 1/2) A_hf."""
    if not species.nuclear_spin or species.hyperfine_splitting is None:
        raise ValueError(f"{species.name} has no hyperfine structure (I = 0 or splitting unknown)")
    return species.hyperfine_splitting / (species.nuclear_spin + 0.5)


def zeeman_shift_low_field(g_f, field_mt, m_f):
    """Linear Zeeman shift g_F mu_B B m_F in MHz."""
    return g_f * BOHR_MHZ_PER_MT * field_mt * m_f
