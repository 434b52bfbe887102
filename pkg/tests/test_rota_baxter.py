import numpy as np
import pytest
from hypothesis import given, strategies as st

from brace_forge.acceptance import SMALL_ABELIAN, brace_representatives
from brace_forge.braces import enumerate_braces, is_brace_hom, trivial_brace
from brace_forge.errors import AxiomError, KindError, StructureError
from brace_forge.groups import abelian_group, cyclic_group
from brace_forge.heisenberg import LinearMap3, build_heisenberg_brace, linear_to_carrier
from brace_forge.post import make_post_brace
from brace_forge.rota_baxter import (
    adjoint_action,
    adjoint_table,
    b_plus,
    brute_force_rbo_images,
    enhance_property_check,
    enhance_property_witness,
    enumerate_relative_rbos,
    factorization_data,
    factorize,
    factorizations,
    graph_is_subbrace,
    induce_post_brace,
    is_relative_rbo,
    is_two_sided_rbo,
    make_relative_rbo,
    make_semi_trivial_action,
    make_two_sided_rbo,
    trivial_action,
    validate_relative_rbo,
    validate_semi_trivial_action,
    validate_two_sided_rbo,
)

B31 = LinearMap3.from_entries(3, B31=1)


def _carrier(p=3, **entries):
    return linear_to_carrier(LinearMap3.from_entries(p, **entries), p).array()


def test_constant_identity_operator_is_enhanced(heis_action):
    rbo = make_relative_rbo(heis_action, np.zeros(27, dtype=int))
    assert rbo.enhanced
    assert np.array_equal(b_plus(rbo).array(), np.arange(27))
    assert rbo.descendent.same_tables(heis_action.H)


def test_adjoint_needs_two_sided_brace():
    one_sided = [b for orders in SMALL_ABELIAN for b in brace_representatives(orders)
                 if not b.two_sided]
    assert one_sided
    for b in one_sided:
        report = validate_semi_trivial_action(b, b, adjoint_table(b))
        assert not report.ok
        with pytest.raises(KindError):
            adjoint_action(b)


def test_heisenberg_adjoint_is_bracket_shift(heis, heis_action):
    brace, codec = heis
    for x in range(0, 27, 4):
        for y in range(27):
            assert heis_action.phi[x, y] == brace.d[y, codec.bracket(x, y)]


def test_identity_on_sub_adjacent_brace(operators):
    # a post-brace turns Id into an operator from its brace to the sub-adjacent one
    for _, _, rbo in operators[::31]:
        pb = induce_post_brace(rbo)
        action = make_semi_trivial_action(pb.sub_adjacent, pb.brace, pb.rhd)
        ident = make_relative_rbo(action, np.arange(27))
        assert np.array_equal(ident.rhd, pb.rhd)
        assert ident.descendent.same_tables(pb.sub_adjacent)


def test_enhanced_and_plain_examples(heis_action):
    assert validate_relative_rbo(heis_action, _carrier(B31=1))["enhanced"].ok
    report = validate_relative_rbo(heis_action, _carrier(B11=1))
    assert report.ok and not report["enhanced"].ok
    report = validate_two_sided_rbo(heis_action.G, _carrier(B11=1))
    assert "b_circ_B" not in report


def test_enhance_property(enhanced_ops, plain_ops):
    for rbo in enhanced_ops:
        assert enhance_property_check(rbo)
    with pytest.raises(KindError):
        enhance_property_check(plain_ops[0])


def test_enhance_property_fails_for_some_plain_operator(plain_ops):
    assert any(enhance_property_witness(r.action, r.B) is not None for r in plain_ops)


@given(st.integers(0, 3**9 - 1))
def test_graph_criterion_on_linear_maps(code):
    entries = {}
    for k, (i, j) in enumerate((i, j) for i in (1, 2, 3) for j in (1, 2, 3)):
        entries[f"B{i}{j}"] = code // 3**k % 3
    brace, _ = build_heisenberg_brace(3)
    action = adjoint_action(brace)
    B = _carrier(**entries)
    assert graph_is_subbrace(action, B) == is_relative_rbo(action, B)


@given(st.lists(st.integers(0, 3), min_size=4, max_size=4))
def test_graph_criterion_on_arbitrary_maps(values):
    for brace in enumerate_braces(abelian_group(2, 2)):
        action = trivial_action(brace, brace)
        B = [0] + values[1:]
        assert graph_is_subbrace(action, B) == is_relative_rbo(action, B)


def test_descendent_is_brace_and_B_is_hom(operators):
    for _, _, rbo in operators[::13]:
        assert is_brace_hom(rbo.descendent, rbo.G, rbo.B)


def test_descendent_of_class_i(heis, heis_action):
    _, codec = heis
    e1, e2, _ = codec.basis
    half = pow(2, -1, 3)
    for b22 in range(3):
        rbo = make_relative_rbo(heis_action, _carrier(B22=b22))
        assert rbo.descendent.c[e2, e1] == codec.encode(1, 1, -(half + b22))


def test_factorization_data_for_b31(heis, heis_action):
    _, codec = heis
    rbo = make_two_sided_rbo(heis_action.G, linear_to_carrier(B31, 3).array())
    data = factorization_data(rbo)
    assert data.Gminus == (0, 1, 2)
    assert len(data.Kplus) == 9
    assert data.Theta == (0, 1, 2)
    assert len(data.GTheta) == 27
    e1 = codec.basis[0]
    assert factorize(rbo, e1) == (10, 1)
    assert factorize(rbo, 0) == (0, 0)
    for a in range(27):
        assert factorizations(rbo, data, a) == [factorize(rbo, a)]
    with pytest.raises(StructureError):
        factorize(rbo, 27)


def test_factorization_needs_enhanced(plain_ops):
    with pytest.raises(KindError):
        factorization_data(plain_ops[0])
    with pytest.raises(KindError):
        b_plus(plain_ops[0])


def test_every_enhanced_operator_factorizes(enhanced_ops):
    for rbo in enhanced_ops:
        data = factorization_data(rbo)
        assert len(data.GTheta) == 27
        assert sorted(data.PhiIso) == list(data.GTheta)


def test_z2_trivial_action():
    b = trivial_brace(cyclic_group(2))
    rbos = enumerate_relative_rbos(trivial_action(b, b))
    assert [r.image for r in rbos] == [(0, 0), (0, 1)]


def test_one_element_group():
    b = trivial_brace(cyclic_group(1))
    assert len(enumerate_relative_rbos(adjoint_action(b))) == 1


@pytest.mark.parametrize("orders", [(2,), (3,), (4,), (2, 2), (5,), (6,)])
def test_pruned_matches_brute_force(orders):
    for brace in brace_representatives(orders):
        actions = [trivial_action(brace, brace)]
        if brace.two_sided:
            actions.append(adjoint_action(brace))
        for action in actions:
            pruned = [r.image for r in enumerate_relative_rbos(action)]
            assert pruned == brute_force_rbo_images(action)


def test_enhanced_only_filter(heis_action):
    rbos = enumerate_relative_rbos(heis_action, enhanced_only=True)
    assert len(rbos) == 9 and all(r.enhanced for r in rbos)


def test_non_operator_rejected(heis_action):
    B = _carrier(B11=1, B12=1, B21=1)
    assert not is_two_sided_rbo(heis_action.G, B)
    with pytest.raises(AxiomError):
        make_relative_rbo(heis_action, B)


def test_descendents_of_census_are_two_sided(operators):
    assert all(rbo.descendent.two_sided for _, _, rbo in operators)


def test_induced_post_brace_round_trip(operators):
    rbo = operators[7][2]
    pb = make_post_brace(rbo.H, rbo.rhd)
    assert pb.sub_adjacent.same_tables(rbo.descendent)
