import json
import re

import pytest

from fixalg.chain import analyze
from fixalg.cli import RunConfig, run
from fixalg.errors import AlgebraMalformed, InputError
from fixalg.files import format_algebra_file, parse_algebra_file
from fixalg.functor import parse_functor_file

from corpus import TC

NAT_FILE = "F = 1 + X\n"
LIST_FILE = "A = {a, b}\nF = 1 + A * X\n"
K_FILE = "K = {k1,k2}\nF = K\n"
AX_FILE = "A = {a}\nF = A * X\n"
ZK_FILE = "K = {k}\nF = 0 + K\n"

PARITY = """\
# parity of numerals
functor: F
carrier: {even, odd}
L(*) -> even
R(even) -> odd
R(odd) -> even
"""


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


# --- chain ---------------------------------------------------------------

def test_chain_without_convergence(files):
    code, out, err = run(["chain", files("nat.f", NAT_FILE), "--max-stage", "5"])
    assert code == 2 and err == ""
    lines = out.splitlines()
    assert lines[0] == "functor: F = 1 + X"
    assert [int(line.split()[1]) for line in lines[2:8]] == [0, 1, 2, 3, 4, 5]
    assert lines[-1] == "no convergence within budget (max stage 5)"


def test_chain_empty_carrier(files):
    code, out, _ = run(["chain", files("ax.f", AX_FILE)])
    assert code == 0
    assert "converged at stage 0" in out
    assert "carrier: {}" in out


def test_chain_constant(files):
    code, out, _ = run(["chain", files("k.f", K_FILE)])
    assert code == 0
    assert "converged at stage 1" in out
    assert "carrier: {k1, k2}" in out
    assert out.endswith("structure map:\nk1 -> k1\nk2 -> k2\n")


def test_chain_explosion(files):
    code, _, err = run(["chain", files("l.f", LIST_FILE), "--cap", "50", "--max-stage", "10"])
    assert code == 2 and "StageExplosion" in err


def test_chain_json(files):
    code, out, _ = run(["chain", files("k.f", K_FILE), "--format", "json"])
    doc = json.loads(out)
    assert code == doc["exit_code"] == 0
    assert doc["subcommand"] == "chain"
    assert doc["stage_sizes"] == [0, 2, 2] and doc["converged_at"] == 1


# --- fold ----------------------------------------------------------------

def test_fold_constant(files):
    alg = files("t.alg", "functor: F\ncarrier: {u, v}\nk1 -> u\nk2 -> v\n")
    code, out, _ = run(["fold", files("k.f", K_FILE), alg])
    assert code == 0
    assert "fold:\nk1 -> u\nk2 -> v\n" in out
    assert "homomorphism square: PASS" in out
    assert "uniqueness: PASS (1 homomorphism(s) among 4 functions)" in out


def test_fold_empty_carrier(files):
    alg = files("t.alg", "functor: F\ncarrier: {u}\n(a,u) -> u\n")
    code, out, _ = run(["fold", files("ax.f", AX_FILE), alg])
    assert code == 0
    assert "fold:\nhomomorphism square: PASS" in out


def test_fold_missing_assignment(files):
    alg = files("t.alg", "functor: F\ncarrier: {u, v}\nk1 -> u\n")
    code, _, err = run(["fold", files("k.f", K_FILE), alg])
    assert code == 1
    assert "AlgebraMalformed" in err and "missing: k2" in err
    assert "expected domain elements: k1, k2" in err


def test_fold_needs_convergence(files):
    code, _, err = run(["fold", files("nat.f", NAT_FILE), files("p.alg", PARITY), "--max-stage", "4"])
    assert code == 2 and "NotConverged" in err


# --- lambek --------------------------------------------------------------

@pytest.mark.parametrize("text", [K_FILE, AX_FILE, ZK_FILE])
def test_lambek_passes(files, text):
    code, out, _ = run(["lambek", files("f.f", text)])
    assert code == 0
    assert "iota.h = id: PASS" in out and "h.iota = id: PASS" in out


def test_lambek_zero_plus_k_shows_both_maps(files):
    _, out, _ = run(["lambek", files("zk.f", ZK_FILE)])
    assert "iota:\nR(k) -> R(k)\nh:\nR(k) -> R(k)\n" in out


# --- datalog -------------------------------------------------------------

def test_datalog_transitive_closure(files):
    code, out, _ = run(["datalog", files("tc.dl", TC)])
    assert code == 0
    assert out.splitlines() == ["edge(1,2)", "edge(2,3)", "path(1,2)", "path(1,3)", "path(2,3)"]


def test_datalog_facts_sorted(files):
    code, out, _ = run(["datalog", files("f.dl", "q(b). p(10). p(9). p(a).")])
    assert code == 0
    assert out.splitlines() == ["p(9)", "p(10)", "p(a)", "q(b)"]


def test_datalog_unsafe(files):
    code, _, err = run(["datalog", files("u.dl", "p(X) :- q(Y).")])
    assert code == 1
    assert "UnsafeRule" in err and "p(X) :- q(Y)." in err and "X" in err


def test_datalog_syntax_error(files):
    code, _, err = run(["datalog", files("s.dl", "p(a)")])
    assert code == 1 and "DatalogSyntaxError: 1:5:" in err


def test_datalog_flags(files):
    code, out, _ = run(["datalog", files("tc.dl", TC), "--trace", "--semi-naive"])
    assert code == 0
    assert "% trace\n% I_1 = I_0 + {edge(1,2), edge(2,3)}\n" in out
    assert "% I_3 = I_2 + {path(1,3)}\n" in out
    assert "% semi-naive agrees with naive: PASS" in out


def test_datalog_check_least(files):
    small = "path(1,2). path(2,3). path(X,Z) :- path(X,Y), path(Y,Z)."
    code, out, _ = run(["datalog", files("tc.dl", small), "--check-least"])
    assert code == 0 and "% leastness: PASS" in out
    code, _, err = run(["datalog", files("tc.dl", TC), "--check-least"])
    assert code == 2 and "EnumerationTooLarge" in err


def test_datalog_json(files):
    code, out, _ = run(["datalog", files("tc.dl", TC), "--trace", "--format", "json"])
    doc = json.loads(out)
    assert doc["model"][-1] == "path(2,3)"
    assert doc["trace"][2] == ["path(1,3)"]
    assert doc["iterations"] == 3


# --- terms ---------------------------------------------------------------

def test_terms_numerals(files):
    code, out, _ = run(["terms", files("nat.f", NAT_FILE), "--depth", "3"])
    assert code == 0 and out.split() == ["#0", "#1", "#2"]


def test_terms_lists(files):
    code, out, _ = run(["terms", files("l.f", LIST_FILE), "--depth", "2"])
    assert code == 0 and out.split() == ["[]", "[a]", "[b]"]


def test_terms_depth_zero(files):
    code, out, _ = run(["terms", files("nat.f", NAT_FILE), "--depth", "0"])
    assert code == 0 and out == ""


def test_terms_with_algebra(files):
    code, out, _ = run(["terms", files("nat.f", NAT_FILE), files("p.alg", PARITY), "--depth", "4"])
    assert code == 0
    assert "#2 -> even\n#3 -> odd\n" in out
    assert "homomorphism square on terms: PASS" in out
    assert "recursion equations: PASS" in out


# --- errors and configuration -------------------------------------------

def test_usage_errors_are_input_errors(files):
    assert run([])[0] == 1
    assert run(["bogus"])[0] == 1
    assert run(["chain"])[0] == 1
    assert run(["chain", files("k.f", K_FILE), "--max-stage", "x"])[0] == 1
    assert run(["chain", files("k.f", K_FILE), "--max-stage", "0"])[0] == 1


def test_missing_file(tmp_path):
    code, _, err = run(["chain", str(tmp_path / "nope.f")])
    assert code == 1 and "cannot read" in err


def test_bad_functor_file(files):
    code, _, err = run(["chain", files("bad.f", "F = 1 + B\n")])
    assert code == 1 and "ParseError: 1:9: undeclared constant set 'B'" in err


def test_run_config_validation():
    with pytest.raises(InputError):
        RunConfig("chain", [], cap=0)
    with pytest.raises(InputError):
        RunConfig("chain", [], format="yaml")
    assert RunConfig("chain", []).max_stage == 64


def test_main_module_entry_point(files):
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "fixalg", "chain", files("k.f", K_FILE)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and "converged at stage 1" in proc.stdout


# --- algebra files -------------------------------------------------------

NAT_DEF = parse_functor_file(NAT_FILE)


def test_algebra_file_round_trip():
    alg = parse_algebra_file(PARITY, NAT_DEF)
    assert [str(e) for e in alg.carrier] == ["even", "odd"]
    assert parse_algebra_file(format_algebra_file(alg, "F"), NAT_DEF) == alg


def test_initial_algebra_written_with_tags_is_rejected():
    # the chain's carrier for 0 + K is {R(k)}; algebra files only take atom carriers
    fdef = parse_functor_file(ZK_FILE)
    text = format_algebra_file(analyze(fdef.expr).algebra, "F")
    with pytest.raises(AlgebraMalformed, match="atoms"):
        parse_algebra_file(text, fdef)


@pytest.mark.parametrize(
    "text, message",
    [
        ("carrier: {even}\nL(*) -> even\nR(even) -> even\n", "missing 'functor:'"),
        ("functor: G\ncarrier: {even}\n", "algebra is for functor 'G'"),
        ("functor: F\nL(*) -> even\n", "missing 'carrier:'"),
        ("functor: F\ncarrier: even\n", "carrier must be written"),
        ("functor: F\ncarrier: {even}\nL(*) even\n", "expected 'element -> element'"),
        ("functor: F\ncarrier: {even}\nL(* -> even\n", "line 3"),
        ("functor: F\ncarrier: {e}\nL(*) -> e\nL(*) -> f\n", "assigned twice"),
        ("functor: F\ncarrier: {e}\nL(*) -> e\nR(e) -> e\nR(z) -> e\n", "R(z) not in 1 + X"),
        ("functor: F\ncarrier: {e}\nL(*) -> e\nR(e) -> z\n", "outside the carrier"),
    ],
)
def test_algebra_file_errors(text, message):
    with pytest.raises(AlgebraMalformed, match=re.escape(message)):
        parse_algebra_file(text, NAT_DEF)


def test_failed_check_exits_three(files, monkeypatch):
    import fixalg.cli as cli

    monkeypatch.setattr(cli, "is_homomorphism", lambda *args: False)
    alg = files("t.alg", "functor: F\ncarrier: {u, v}\nk1 -> u\nk2 -> v\n")
    code, out, _ = run(["fold", files("k.f", K_FILE), alg])
    assert code == 3 and "homomorphism square: FAIL" in out
