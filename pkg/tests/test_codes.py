import numpy as np
import pytest

from quasiqec.codes import (
    StabilizerCode,
    Syndrome,
    ZString,
    build_repetition_code,
    build_surface_code,
    canonical_representative_table,
)


def test_zstring_group_basics():
    a = ZString.from_qubits(4, [0, 2])
    b = ZString.from_qubits(4, [2, 3])
    assert (a * b).qubits() == (0, 3)
    assert a.weight == 2
    assert (a * a).is_identity
    with pytest.raises(ValueError):
        ZString(2, 0b100)
    with pytest.raises(ValueError):
        a * ZString(3, 0)


def test_repetition_code_syndromes(rep_code):
    z_a = ZString(2, 0b01)
    assert not rep_code.syndrome_of(z_a).trivial
    assert rep_code.syndrome_of(ZString(2, 0)).trivial
    assert rep_code.syndrome_of(rep_code.logical_z).trivial
    assert rep_code.logical_class_of(rep_code.logical_z) == "logical"
    assert rep_code.canonical_representative(Syndrome(1, 1)) == z_a
    assert rep_code.canonical_representative(Syndrome(1, 0)).is_identity


def test_surface_code_counts(d3, d5):
    assert (d3.n, d3.n_checks, len(d3.z_stab_generators)) == (9, 4, 4)
    assert (d5.n, d5.n_checks) == (25, 12)
    d7 = build_surface_code(7)
    assert d7.n == 49 and d7.n_checks == 24
    d17 = build_surface_code(17)  # largest distance the data model carries
    assert d17.n == 289 and d17.n_checks == 144


@pytest.mark.parametrize("d", [2, 4, 1, -3])
def test_surface_code_rejects_bad_distance(d):
    with pytest.raises(ValueError):
        build_surface_code(d)


def test_every_single_qubit_error_detected(d3, d5):
    for code in (d3, d5):
        for q in range(code.n):
            assert not code.syndrome_of(ZString(code.n, 1 << q)).trivial


def test_syndrome_is_group_homomorphism(d5, rng):
    for _ in range(200):
        e1 = ZString(d5.n, int(rng.integers(0, 1 << d5.n)))
        e2 = ZString(d5.n, int(rng.integers(0, 1 << d5.n)))
        assert d5.syndrome_of(e1 * e2) == d5.syndrome_of(e1) ^ d5.syndrome_of(e2)


@pytest.mark.parametrize("dist", [3, 5])
def test_canonical_representative_is_section(dist):
    code = build_surface_code(dist)
    for s in range(1 << code.n_checks):
        syn = Syndrome(code.n_checks, s)
        assert code.syndrome_of(code.canonical_representative(syn)) == syn


def test_coset_partition_is_exhaustive(d3):
    # every 9-qubit Z string factors uniquely as E_s * S * (Z_L)^a
    seen = set()
    for s in range(1 << d3.n_checks):
        rep = d3.canonical_representative(Syndrome(d3.n_checks, s))
        for stab, _ in d3.enumerate_z_stabilizer_group():
            for a in (0, 1):
                e = rep * stab * (d3.logical_z if a else d3.identity())
                seen.add(e.bits)
    assert len(seen) == 1 << d3.n


def test_logical_class_requires_trivial_syndrome(d3):
    assert d3.logical_class_of(d3.identity()) == "trivial"
    for stab, _ in d3.enumerate_z_stabilizer_group():
        assert d3.logical_class_of(stab) == "trivial"
        assert d3.logical_class_of(stab * d3.logical_z) == "logical"
    with pytest.raises(ValueError):
        d3.logical_class_of(ZString(d3.n, 1))


def test_gray_code_enumeration(rep_code, d3, d5):
    assert [z.bits for z, _ in rep_code.enumerate_z_stabilizer_group()] == [0]
    items = list(d3.enumerate_z_stabilizer_group())
    assert len(items) == 16 and items[0][1] is None
    for (prev, _), (cur, j) in zip(items, items[1:]):
        assert (prev * cur).bits == d3.z_stab_generators[j].bits
        assert d3.syndrome_of(cur).trivial
    count = sum(1 for _ in d5.enumerate_z_stabilizer_group())
    assert count == 4096
    with pytest.raises(ValueError):
        list(d5.enumerate_z_stabilizer_group(cap=10))


def test_destabilizers_flip_single_checks(d3, d5):
    for code in (d3, d5):
        for f, dst in enumerate(code.destabilizers):
            assert code.syndrome_of(dst).bits == 1 << f


def test_representative_table_matches_method(d5):
    reps, cls = canonical_representative_table(d5)
    for s in (0, 1, 37, 4095):
        syn = Syndrome(d5.n_checks, s)
        rep = d5.canonical_representative(syn)
        assert reps[s] == rep.bits
        assert cls[s] == d5.class_bit(rep)
