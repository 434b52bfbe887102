import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracle
from brace_forge.errors import StructureError
from brace_forge.heisenberg import (
    HeisenbergCodec,
    LinearMap3,
    PrimeField,
    build_heisenberg_brace,
    census,
    classify_linear_rbo,
    linear_to_carrier,
    symbolic_identities,
)
from brace_forge.rota_baxter import is_two_sided_rbo


def test_basis_products(heis):
    brace, codec = heis
    e1, e2, _ = codec.basis
    assert codec.decode(int(brace.c[e1, e2])) == (1, 1, 2)
    assert codec.decode(int(brace.c[e2, e1])) == (1, 1, 1)


@given(st.integers(0, 26))
def test_square_is_double(x):
    brace, codec = build_heisenberg_brace(3)
    assert brace.c[x, x] == brace.d[x, x]


def test_tables_match_oracle(heis):
    brace, codec = heis
    for x in range(27):
        for y in range(27):
            xs, ys = codec.decode(x), codec.decode(y)
            assert codec.decode(int(brace.c[x, y])) == oracle.heis_circ(xs, ys, 3)
            assert codec.decode(int(brace.d[x, y])) == oracle.heis_add(xs, ys, 3)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_valid_two_sided(p):
    brace, codec = build_heisenberg_brace(p)
    assert brace.n == p**3 and brace.two_sided
    assert codec.encode(*codec.decode(p**3 - 1)) == p**3 - 1


@pytest.mark.parametrize("p", [2, 4, 9, 1])
def test_bad_primes(p):
    with pytest.raises(StructureError):
        PrimeField(p)
    with pytest.raises(StructureError):
        build_heisenberg_brace(p)


def test_half_and_inverse():
    f = PrimeField(7)
    assert f.half == 4
    assert f.inv(3) == 5
    assert f.roots((-2, 0, 1)) == [3, 4]


def test_linear_to_carrier_examples():
    codec = HeisenbergCodec(3)
    e1, e2, e3 = codec.basis
    zero = linear_to_carrier(LinearMap3.from_entries(3), 3).array()
    assert not zero.any()
    ident = linear_to_carrier(LinearMap3.from_entries(3, B11=1, B22=1, B33=1), 3).array()
    assert np.array_equal(ident, np.arange(27))
    enh = linear_to_carrier(LinearMap3.from_entries(3, B31=1), 3).array()
    assert (enh[e1], enh[e2], enh[e3]) == (e3, 0, 0)
    with pytest.raises(StructureError):
        linear_to_carrier(LinearMap3.from_entries(5, B31=1), 3)
    with pytest.raises(StructureError):
        LinearMap3.from_entries(3, C11=1)


@pytest.mark.parametrize("entries,label", [
    ({}, "enhanced"),
    ({"B31": 2, "B32": 1}, "enhanced"),
    ({"B11": 1}, "class_i"),
    ({"B11": 1, "B12": 2, "B21": 1, "B22": 2}, "class_i"),
    ({"B11": 1, "B22": 1}, "none"),
    ({"B13": 1}, "none"),
    ({"B33": 1}, "none"),
    ({"B11": 2, "B22": 2, "B33": 2}, "class_ii_iii"),
])
def test_classify(heis, entries, label):
    brace, _ = heis
    m = LinearMap3.from_entries(3, **entries)
    assert classify_linear_rbo(m, 3) == label
    assert is_two_sided_rbo(brace, linear_to_carrier(m, 3).array()) == (label != "none")


def test_b33_one_over_f3(heis):
    # u^2 - 2u - 1 has no root mod 3, so B33 = 1 admits no diagonal operator
    brace, _ = heis
    for u in range(3):
        m = LinearMap3.from_entries(3, B11=u, B22=u, B33=1)
        assert classify_linear_rbo(m, 3) == "none"
        assert not is_two_sided_rbo(brace, linear_to_carrier(m, 3).array())


def test_census_counts():
    result = census(3)
    assert result.ok
    assert result.counts == {"enhanced": 9, "class_i": 288, "class_ii_iii": 9}
    assert result.rbo_count == 306 and result.enhanced_count == 9
    # enhanced operators carry only their most specific label but belong to class (i)
    assert result.counts["class_i"] + result.counts["enhanced"] == 9 * oracle.singular_2x2(3)


@pytest.mark.slow
def test_census_against_oracle():
    totals = oracle.census(3)
    assert totals == {"rbo": 306, "enhanced": 9}


def test_descendents_validate(operators):
    for _, _, rbo in operators:
        assert rbo.descendent.two_sided


def test_bracket_killed_on_class_i(heis, operators):
    _, codec = heis
    for m, _, rbo in operators:
        if m.entry(1, 3) == m.entry(2, 3) == m.entry(3, 3) == 0:
            for x in range(0, 27, 2):
                for y in range(27):
                    assert rbo.B[codec.bracket(x, y)] == 0


@pytest.mark.parametrize("label", ["enhanced", "class_i", "class_ii_iii"])
def test_symbolic_identities(label):
    verdicts = symbolic_identities(label)
    assert verdicts["additive"] and verdicts["twisted"]
    assert verdicts["enhanced"] == (label == "enhanced")
