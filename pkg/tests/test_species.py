import json

import pytest

from iontoolbox import species as sp

HYPERFINE_ROWS = {
    "9Be+": (1.5, 19.6, 1.25, 313.1, 313.0),
    "25Mg+": (2.5, 41.3, 1.79, 280.3, 279.6),
    "43Ca+": (3.5, 22.5, 3.23, 396.8, 393.4),
    "67Zn+": (2.5, 62.2, 7.2, 206.2, 202.5),
    "87Sr+": (4.5, 21.5, 5.00, 421.6, 407.8),
    "111Cd+": (0.5, 50.5, 14.53, 226.5, 214.4),
    "137Ba+": (1.5, 20.1, 8.04, 493.4, 455.4),
    "171Yb+": (0.5, 19.7, 12.64, 369.4, 328.9),
    "199Hg+": (0.5, 54.7, 40.51, 194.2, 165.0),
}

OPTICAL_ROWS = {
    "Ca+": (729.1, 1.17, 1 / 17),
    "Sr+": (674.0, 0.36, 1 / 14),
    "Ba+": (1761.7, 30.0, 1 / 3),
    "Yb+": (411.0, 0.007, 1 / 290),
    "Hg+": (281.6, 0.1, 1 / 700),
}


@pytest.mark.parametrize("name", HYPERFINE_ROWS)
def test_hyperfine_rows(name):
    s = sp.lookup(name)
    got = (s.nuclear_spin, s.p12_linewidth, s.hyperfine_splitting, s.lambda12, s.lambda32)
    assert got == HYPERFINE_ROWS[name]


@pytest.mark.parametrize("name", OPTICAL_ROWS)
def test_optical_rows(name):
    o = sp.lookup(name).optical
    assert (o.lambda_d52, o.d52_lifetime, o.branching_ratio) == OPTICAL_ROWS[name]


def test_unknown_species_lists_names():
    with pytest.raises(KeyError, match="171Yb"):
        sp.lookup("40Ar+")


def test_data_file_matches_embedded():
    shipped = json.loads(sp.data_file().read_text())
    assert shipped == sp.species_document()
    assert sp.checksum(shipped) == sp.checksum(sp.species_document())
    assert sp.load_species() == sp.SPECIES


def test_record_round_trip(tmp_path):
    path = tmp_path / "copy.json"
    path.write_text(sp.canonical_json(sp.species_document()))
    assert sp.load_species(path) == sp.SPECIES
    for record in sp.SPECIES.values():
        assert sp.IonSpecies.from_dict(record.to_dict()) == record


def test_zeeman_splitting():
    assert sp.zeeman_splitting(0) == 0
    assert sp.zeeman_splitting(1) == 28.0
    assert sp.zeeman_splitting(0.5) == 14.0
    for a in (0.1, 3.0, 7.25):
        assert sp.zeeman_splitting(a * 2.0) == pytest.approx(a * sp.zeeman_splitting(2.0), rel=1e-15)
    with pytest.raises(ValueError):
        sp.zeeman_splitting(-1)


def test_hyperfine_constant():
    assert sp.hyperfine_constant(sp.lookup("171Yb+")) == 12.64
    assert sp.hyperfine_constant(sp.lookup("9Be+")) == 0.625
    assert sp.hyperfine_constant(sp.lookup("43Ca+")) == pytest.approx(0.8075, rel=1e-15)
    with pytest.raises(ValueError):
        sp.hyperfine_constant(sp.IonSpecies("88Sr+", nuclear_spin=0, lambda12=421.6))


@pytest.mark.parametrize("name", HYPERFINE_ROWS)
def test_hyperfine_round_trip(name):
    s = sp.lookup(name)
    back = sp.hyperfine_constant(s) * (s.nuclear_spin + 0.5)
    # one rounding in the division, one in the product
    assert back == pytest.approx(s.hyperfine_splitting, rel=2.3e-16, abs=0)


def test_low_field_shift():
    assert sp.zeeman_shift_low_field(0.7, 3.0, 0) == 0
    assert sp.zeeman_shift_low_field(2, 1, 0.5) == 14.0
    assert sp.zeeman_shift_low_field(0.5, 0.2, 1.5) == -sp.zeeman_shift_low_field(0.5, 0.2, -1.5)


def test_validation():
    with pytest.raises(ValueError):
        sp.IonSpecies("x", nuclear_spin=0.3)
    with pytest.raises(ValueError):
        sp.OpticalTransition(729.1, 1.17, 1.5)
