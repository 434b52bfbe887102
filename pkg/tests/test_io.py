import numpy as np
import pytest
from hypothesis import given, strategies as st

from brace_forge.acceptance import SMALL_ABELIAN, brace_representatives
from brace_forge.errors import FormatError
from brace_forge.groups import cyclic_group
from brace_forge.io import (
    BraceTables,
    emit_action,
    emit_brace,
    emit_group,
    emit_matched_pair,
    emit_post_brace,
    emit_rbo,
    emit_rhd,
    emit_solution,
    parse_action,
    parse_brace,
    parse_group,
    parse_matched_pair,
    parse_post_brace,
    parse_rbo,
    parse_rhd,
    parse_solution,
)
from brace_forge.matched_pairs import mp_from_enhanced_rbo
from brace_forge.rota_baxter import induce_post_brace
from brace_forge.ybe import solution_from_brace

CORPUS = [b for orders in SMALL_ABELIAN for b in brace_representatives(orders)]


@given(st.sampled_from(CORPUS))
def test_brace_round_trip(brace):
    text = emit_brace(brace)
    bt = parse_brace(text)
    assert bt == BraceTables.of(brace)
    assert emit_brace(bt) == text
    assert bt.build().same_tables(brace)


@given(st.sampled_from(CORPUS))
def test_group_and_solution_round_trip(brace):
    assert np.array_equal(parse_group(emit_group(brace.dot)), brace.d)
    R = solution_from_brace(brace)
    assert parse_solution(emit_solution(R)) == R


def test_heisenberg_round_trip(heis):
    brace, _ = heis
    text = emit_brace(brace)
    assert emit_brace(parse_brace(text)) == text
    assert text.startswith("brace n=27 kind=brace\n")


def test_operator_files_round_trip(operators, enhanced_ops):
    rbo = operators[50][2]
    assert parse_rbo(emit_rbo(rbo), 27).tolist() == list(rbo.image)
    assert np.array_equal(parse_rhd(emit_rhd(rbo.rhd)), rbo.rhd)
    assert np.array_equal(parse_action(emit_action(rbo.action)).phi, rbo.action.phi)
    pb = induce_post_brace(rbo)
    pbt = parse_post_brace(emit_post_brace(pb))
    assert pbt.validate().ok
    assert emit_post_brace(pbt) == emit_post_brace(pb)
    mp = mp_from_enhanced_rbo(enhanced_ops[4])
    text = emit_matched_pair(mp)
    mpt = parse_matched_pair(text)
    assert emit_matched_pair(mpt) == text
    assert np.array_equal(mpt.theta[0], mp.rharpd)


def test_comments_and_blank_lines():
    text = "# Z2\n\ngroup n=2\n0 1\n\n# second row\n1 0\n"
    assert parse_group(text).tolist() == [[0, 1], [1, 0]]


@pytest.mark.parametrize("text,line,fragment", [
    ("group n=0\n", 1, "n"),
    ("group n=2\n1 0\n0 1\n", 2, "identity"),
    ("group n=2\n0 1\n1 0 0\n", 3, None),
    ("group n=2\n0 1\n1 2\n", 3, None),
    ("group n=2\n0 1\n1 x\n", 3, None),
    ("group n=2\n0 1\n1 0\nextra\n", 4, "trailing"),
    ("grp n=2\n0 1\n1 0\n", 1, "group"),
])
def test_group_format_errors(text, line, fragment):
    with pytest.raises(FormatError) as info:
        parse_group(text)
    message = str(info.value)
    assert message.startswith(f"line {line}:")
    if fragment:
        assert fragment in message


def test_truncated_input():
    with pytest.raises(FormatError, match="end of input"):
        parse_group("group n=3\n0 1 2\n")


def test_solution_rejects_repeated_output():
    text = "solution n=2\n0 0 -> 0 0\n0 1 -> 0 0\n1 0 -> 1 0\n1 1 -> 1 1\n"
    with pytest.raises(FormatError, match="not a bijection"):
        parse_solution(text)
    with pytest.raises(FormatError, match="twice"):
        parse_solution("solution n=2\n0 0 -> 0 0\n0 0 -> 0 1\n1 0 -> 1 0\n1 1 -> 1 1\n")


def test_brace_kind_checked():
    text = emit_brace(brace_representatives((2,))[0]).replace("kind=brace", "kind=ring")
    with pytest.raises(FormatError, match="kind"):
        parse_brace(text)


def test_matched_pair_header_order():
    mp_text = emit_brace(brace_representatives((2,))[0]) * 2 + "lharp\n0 0\n1 1\n"
    with pytest.raises(FormatError, match="rharp"):
        parse_matched_pair(mp_text)


def test_rbo_range_checked():
    with pytest.raises(FormatError):
        parse_rbo("rbo n=3\n0 1 5\n", 3)
    assert parse_rbo("rbo n=3\n0 1 5\n").tolist() == [0, 1, 5]


def test_group_emit_is_stable():
    text = emit_group(cyclic_group(3))
    assert text == "group n=3\n0 1 2\n1 2 0\n2 0 1\n"


def test_well_formed_non_group_is_left_to_validation():
    assert parse_group("group n=2\n0 1\n1 1\n").tolist() == [[0, 1], [1, 1]]
