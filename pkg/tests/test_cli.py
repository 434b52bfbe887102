import io as stdio
import json

import numpy as np
import pytest

from brace_forge import io
from brace_forge.braces import enumerate_braces, trivial_brace
from brace_forge.cli import run
from brace_forge.groups import cyclic_group
from brace_forge.heisenberg import LinearMap3, build_heisenberg_brace, linear_to_carrier
from brace_forge.matched_pairs import mp_from_enhanced_rbo
from brace_forge.rota_baxter import adjoint_action, make_relative_rbo


def call(*argv):
    stream = stdio.StringIO()
    code = run([str(a) for a in argv], stream)
    return code, stream.getvalue()


@pytest.fixture
def files(tmp_path):
    z2 = tmp_path / "z2.txt"
    z2.write_text(io.emit_brace(trivial_brace(cyclic_group(2))))
    heis = tmp_path / "heis.txt"
    brace, _ = build_heisenberg_brace(3)
    heis.write_text(io.emit_brace(brace))
    group = tmp_path / "group.txt"
    group.write_text(io.emit_group(cyclic_group(4)))
    return {"z2": z2, "heis": heis, "group": group, "dir": tmp_path}


def test_validate_trivial_brace(files):
    code, text = call("validate", files["z2"])
    assert code == 0
    assert text.strip().endswith("brace: ok, two-sided: ok")


def test_validate_group_and_broken_brace(files):
    assert call("validate", files["group"])[0] == 0
    bad = files["dir"] / "bad.txt"
    bad.write_text("brace n=2 kind=brace\n0 1\n1 0\n\n0 1\n1 1\n")
    code, text = call("validate", bad)
    assert code == 1
    assert "FAIL" in text


def test_heisenberg_census():
    code, text = call("heisenberg", "--p", 3, "--census")
    assert code == 0
    assert "census p=3 enhanced: 9" in text
    assert "census p=3 class_i: 288" in text
    assert "census p=3 class_ii_iii: 9" in text


def test_emit_rbo_and_factorize(files):
    out = files["dir"] / "b.txt"
    code, _ = call("heisenberg", "--emit-rbo", "enhanced", "B31=1", "--rbo-out", out)
    assert code == 0
    expected = linear_to_carrier(LinearMap3.from_entries(3, B31=1), 3).array()
    assert io.parse_rbo(out.read_text()).tolist() == expected.tolist()
    code, text = call("factorize", files["heis"], out, "--element", 9)
    assert code == 0
    assert "9 = 10 o bar(1) = 1^-1 . 10: unique" in text


def test_emit_rbo_to_stream():
    code, text = call("heisenberg", "--emit-rbo", "class_i", "B11=1")
    # labelled class_i, and not enhanced (informational)
    assert code == 0
    assert "rbo n=27" in text


def test_factorize_needs_enhanced(files):
    out = files["dir"] / "b.txt"
    call("heisenberg", "--emit-rbo", "class_i", "B11=1", "--rbo-out", out)
    assert call("factorize", files["heis"], out)[0] == 1


def test_enumerate(files):
    code, text = call("enumerate-rbo", files["heis"], "--count-only")
    assert code == 0
    assert "operators: 306" in text and "enhanced: 9" in text
    code, text = call("enumerate-rbo", files["z2"], "--action", "trivial")
    assert text.splitlines()[0] == "rbo 0: 0 0 enhanced=ok"


def test_ybe(files):
    code, text = call("ybe", files["heis"], "--check-drinfeld")
    assert code == 0
    assert "derived_is_flip" in text and "drinfeld_to_flip" in text
    code, _ = call("ybe", files["group"], "--check-drinfeld")
    assert code == 2


def test_ybe_post_brace_and_export(files):
    brace, _ = build_heisenberg_brace(3)
    rbo = make_relative_rbo(adjoint_action(brace), linear_to_carrier(
        LinearMap3.from_entries(3, B11=1), 3).array())
    rhd = files["dir"] / "rhd.txt"
    rhd.write_text(io.emit_rhd(rbo.rhd))
    sol = files["dir"] / "sol.txt"
    code, text = call("ybe", files["heis"], "--post", rhd, "--check-drinfeld", "--export", sol)
    assert code == 0
    assert "drinfeld_R1_R2" in text
    assert call("validate", sol)[0] == 0


def test_matched_pair(files, enhanced_ops):
    mp = mp_from_enhanced_rbo(enhanced_ops[0])
    path = files["dir"] / "mp.txt"
    path.write_text(io.emit_matched_pair(mp))
    double = files["dir"] / "double.txt"
    code, text = call("matched-pair", "double", path, "--export", double)
    assert code == 0
    assert "double: n=729" in text
    assert io.parse_brace(double.read_text()).n == 729
    assert call("matched-pair", "validate", path, "--mode", "full")[0] == 2
    code, text = call("matched-pair", "validate", path, "--mode", "full", "--sampled", "--samples", 2000)
    assert code == 0


def test_broken_matched_pair(files):
    G = enumerate_braces(cyclic_group(2))[0]
    ident = np.array([[0, 1], [0, 1]])
    bad = np.array([[0, 1], [1, 0]])
    tables = io.MatchedPairTables(io.BraceTables.of(G), io.BraceTables.of(G),
                                  ident, np.array([[0, 0], [1, 1]]), bad, np.array([[0, 0], [1, 1]]))
    path = files["dir"] / "mp.txt"
    path.write_text(io.emit_matched_pair(tables))
    code, text = call("matched-pair", "validate", path)
    assert code == 1
    assert "FAIL" in text


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    [],
    ["heisenberg", "--p", "4"],
    ["selftest", "--criterion", "12"],
])
def test_usage_errors(argv):
    assert call(*argv)[0] == 2


def test_format_errors(files):
    empty = files["dir"] / "n0.txt"
    empty.write_text("group n=0\n")
    assert call("validate", empty)[0] == 2
    shifted = files["dir"] / "shift.txt"
    shifted.write_text("group n=2\n1 0\n0 1\n")
    assert call("validate", shifted)[0] == 2
    assert call("validate", files["dir"] / "missing.txt")[0] == 2


def test_deterministic_output(files):
    first = call("enumerate-rbo", files["heis"])
    second = call("enumerate-rbo", files["heis"])
    assert first == second
    assert call("selftest", "--criterion", 1) == call("selftest", "--criterion", 1)


def test_json_mode(files):
    code, text = call("--json", "validate", files["z2"])
    assert code == 0
    records = [json.loads(line) for line in text.splitlines()]
    assert records[-1]["message"] == "brace: ok, two-sided: ok"
    assert all(isinstance(r, dict) for r in records)


def test_threads_flag(files):
    assert call("--threads", 1, "validate", files["z2"])[0] == 0
    assert call("--threads", 0, "validate", files["z2"])[0] == 2
