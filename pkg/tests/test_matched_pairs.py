import numpy as np
import pytest
from hypothesis import given, strategies as st

from brace_forge.acceptance import brace_representatives
from brace_forge.braces import (
    direct_product_brace,
    enumerate_braces,
    is_left_ideal,
    left_ideal_witness,
    semidirect_product,
    trivial_brace,
    validate_brace,
)
from brace_forge.errors import AxiomError, BoundError, KindError
from brace_forge.groups import GroupTable, abelian_group, cyclic_group, validate_group
from brace_forge.heisenberg import LinearMap3, linear_to_carrier
from brace_forge.matched_pairs import (
    double_brace,
    double_group,
    double_product_table,
    double_tables,
    factor_ideal_criterion,
    make_mp_braces,
    make_mp_groups,
    mp_from_enhanced_rbo,
    transported_brace,
    validate_mp_braces,
    validate_mp_groups,
)
from brace_forge.rota_baxter import (
    adjoint_table,
    trivial_action,
    validate_relative_rbo,
)
from conftest import perturb


def trivial_pair(nG, nH):
    return (np.tile(np.arange(nH), (nG, 1)), np.tile(np.arange(nG)[:, None], (1, nH)))


def action_pair(phi):
    phi = np.asarray(phi)
    return phi, np.tile(np.arange(phi.shape[0])[:, None], (1, phi.shape[1]))


def test_trivial_pair_of_groups_gives_direct_product():
    G, H = cyclic_group(3), abelian_group(2, 2)
    mp = make_mp_groups(G, H, *trivial_pair(3, 4))
    table = double_group(mp).table
    for h in range(4):
        for a in range(3):
            for k in range(4):
                for b in range(3):
                    assert table[h * 3 + a, k * 3 + b] == H.table[h, k] * 3 + G.table[a, b]


def test_action_pair_on_heisenberg_circ(heis):
    brace, _ = heis
    G = brace.circ
    conj = brace.c[brace.c[np.arange(27)[:, None], np.arange(27)[None, :]], brace.cinv[:, None]]
    assert validate_mp_groups(G, G, *action_pair(conj)).ok
    double = double_group(make_mp_groups(G, G, *action_pair(conj)))
    assert double.n == 729


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
def test_mutated_group_pair_iff(a, h, v):
    G = H = abelian_group(2, 2)
    rh, lh = trivial_pair(4, 4)
    rh = perturb(rh, (a, h), v)
    report = validate_mp_groups(G, H, rh, lh)
    table = double_product_table(G, H, rh, lh)
    assert report.ok == validate_group(table).ok
    if not report.ok:
        assert report.first_failure().witness is not None


def test_group_pair_with_swapped_action_rows():
    G = H = cyclic_group(3)
    # a -> h = (1 + a) h is not even a bijection for a = 2
    rh = np.array([[h * (1 + a) % 3 for h in range(3)] for a in range(3)])
    _, lh = trivial_pair(3, 3)
    report = validate_mp_groups(G, H, rh, lh)
    assert not report.ok
    assert not validate_group(double_product_table(G, H, rh, lh)).ok
    with pytest.raises(AxiomError):
        make_mp_groups(G, H, rh, lh)


def test_trivial_pair_of_braces_gives_direct_product():
    for G in enumerate_braces(cyclic_group(4)):
        H = trivial_brace(cyclic_group(2))
        mp = make_mp_braces(G, H, trivial_pair(4, 2), trivial_pair(4, 2))
        assert double_brace(mp).same_tables(direct_product_brace(H, G))


@pytest.mark.parametrize("orders", [(4,), (2, 2)])
def test_structured_and_full_modes_agree(orders):
    braces = brace_representatives(orders)
    for G in braces:
        for H in braces:
            sigma = trivial_pair(G.n, H.n)
            shifted = (np.arange(G.n)[:, None] + np.arange(H.n)[None, :]) % H.n
            thetas = [trivial_pair(G.n, H.n), action_pair(shifted)]
            if H.two_sided:
                thetas.append(action_pair(adjoint_table(H)))
            for theta in thetas:
                full = validate_mp_braces(G, H, sigma, theta, mode="full")
                structured = validate_mp_braces(G, H, sigma, theta, mode="structured")
                assert [v.ok for v in full.verdicts] == [v.ok for v in structured.verdicts]


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.booleans())
def test_mutated_brace_pair_iff(a, h, v, which):
    G = H = enumerate_braces(cyclic_group(4))[1]
    sigma, theta = trivial_pair(4, 4), trivial_pair(4, 4)
    if which:
        theta = (perturb(theta[0], (a, h), v), theta[1])
    else:
        sigma = (perturb(sigma[0], (a, h), v), sigma[1])
    report = validate_mp_braces(G, H, sigma, theta, mode="full")
    d, c = double_tables(G, H, sigma, theta)
    assert report.ok == validate_brace(d, c).ok


def test_theta_mutation_breaks_compatibility_2(enhanced_ops):
    rbo = enhanced_ops[3]
    mp = mp_from_enhanced_rbo(rbo)
    rhd = np.array(mp.rharpd)
    rhd[5] = rhd[5][[0, 2, 1, *range(3, 27)]]
    report = validate_mp_braces(mp.G, mp.H, mp.sigma, (rhd, mp.lharpd))
    assert not report.ok
    assert not report["compatible_2"].ok
    assert len(report["compatible_2"].witness) == 6


def test_enhanced_double_is_semidirect(enhanced_ops):
    for rbo in enhanced_ops:
        mp = mp_from_enhanced_rbo(rbo)
        report = validate_mp_braces(mp.G, mp.H, mp.sigma, mp.theta)
        assert report.ok and report.exhaustive
        double = double_brace(mp)
        assert double.same_tables(semidirect_product(rbo.G, rbo.H, rbo.action, check=False))


def test_plain_operator_has_no_matched_pair(plain_ops):
    with pytest.raises(KindError):
        mp_from_enhanced_rbo(plain_ops[0])


def test_full_mode_over_bound_needs_sampling(enhanced_ops):
    mp = mp_from_enhanced_rbo(enhanced_ops[0])
    with pytest.raises(BoundError, match="sampl"):
        validate_mp_braces(mp.G, mp.H, mp.sigma, mp.theta, mode="full")
    report = validate_mp_braces(mp.G, mp.H, mp.sigma, mp.theta, mode="full",
                                sampled=True, samples=5000, seed=1)
    assert report.ok and not report.exhaustive


def test_transported_unit_for_constant_map():
    G = H = enumerate_braces(abelian_group(2, 2))[2]
    tb = transported_brace(G, H, trivial_action(G, H), np.zeros(4, dtype=int))
    assert tb.unit == 0
    assert tb.brace.same_tables(direct_product_brace(H, G))


@given(st.lists(st.integers(0, 3), min_size=4, max_size=4))
def test_transported_brace_for_arbitrary_maps(B):
    G = H = enumerate_braces(abelian_group(2, 2))[3]
    tb = transported_brace(G, H, trivial_action(G, H), B)
    # unit (e_H, B(e_H)^-1) and inverses from closed formulas, verified inside
    assert tb.unit == G.dinv[B[0]]
    assert validate_brace(tb.brace.dot, tb.brace.circ).ok


def test_transported_inverse_is_plain_for_operators(enhanced_ops):
    rbo = enhanced_ops[1]
    tb = transported_brace(rbo.G, rbo.H, rbo.action, rbo.B)
    inv1, _ = tb.inverse_formulas()
    nG = rbo.G.n
    h, a = np.divmod(np.arange(tb.n), nG)
    assert tb.unit == 0
    assert np.array_equal(inv1, rbo.H.dinv[h] * nG + rbo.G.dinv[a])


def test_factors_are_left_ideals_exactly_when_enhanced(heis_action, enhanced_ops):
    rbo = enhanced_ops[2]
    tb = transported_brace(rbo.G, rbo.H, rbo.action, rbo.B)
    for part in tb.factors():
        assert is_left_ideal(tb.brace, part)
    B = linear_to_carrier(LinearMap3.from_entries(3, B11=1), 3).array()
    tb = transported_brace(heis_action.G, heis_action.H, heis_action, B)
    left, _ = tb.factors()
    assert left_ideal_witness(tb.brace, left) is not None


def test_factor_criterion_matches_enhanced(operators):
    for _, _, rbo in operators:
        assert factor_ideal_criterion(rbo.G, rbo.H, rbo.action, rbo.B) == rbo.enhanced


def test_factor_criterion_on_random_maps(heis_action):
    rng = np.random.default_rng(11)
    for _ in range(30):
        B = rng.integers(0, 27, 27)
        B[0] = 0
        expected = validate_relative_rbo(heis_action, B)["enhanced"].ok
        assert factor_ideal_criterion(heis_action.G, heis_action.H, heis_action, B) == expected


@given(st.lists(st.integers(0, 3), min_size=4, max_size=4), st.integers(0, 3))
def test_factor_criterion_small(B, index):
    G = H = brace_representatives((2, 2))[index % len(brace_representatives((2, 2)))]
    action = trivial_action(G, H)
    expected = validate_relative_rbo(action, B)["enhanced"].ok
    assert factor_ideal_criterion(G, H, action, B) == expected


def test_constant_map_with_trivial_action_factors():
    G = H = trivial_brace(GroupTable(np.array([[0, 1], [1, 0]])))
    assert factor_ideal_criterion(G, H, trivial_action(G, H), [0, 0])
