import json
from pathlib import Path

import pytest

from aoecheck import axioms
from aoecheck.axioms import (
    AS_WRITTEN, CORRECTED, AxiomSpec, a21_restricted, axiom_registry,
    check_all, check_axiom, eval_b1_sides, get_axiom, sample_env,
)
from aoecheck.numeric import DomainError, is_pow2
from aoecheck.parser import parse_formula, print_formula
from aoecheck.syntax import And, Eq, IsPow2, Lt, Mul, Omega, Pow, Tau, Var, eval_formula, free_vars

FIXTURES = Path(__file__).parent / "fixtures"
IDS = [f"A{i}" for i in range(1, 22)] + ["B1", "B1C", "B2A", "B2B", "B3A", "B3B"]
TRUE_IN_N = [f"A{i}" for i in range(1, 21)]


def test_registry_contents():
    reg = axiom_registry()
    assert [s.id for s in reg] == IDS
    assert len(reg) == 27
    for spec in reg:
        assert free_vars(spec.formula) <= {d.var for d in spec.domain}


def test_registry_a18_shape():
    f = get_axiom("A18").formula
    n = Var("n")
    assert f.left == Lt(parse_formula("0 < n").left, n)
    body = f.right
    assert body.left.left == Eq(n, Mul(Tau(n), Omega(n)))
    assert body.left.right == IsPow2(Tau(n))
    assert "omega(n) = 2 * half(omega(n)) + 1" in print_formula(f)


def test_registry_b2a_consequent():
    f = get_axiom("B2A").formula
    assert f.right == Lt(Var("p"), Pow(parse_formula("2 = 2").left, 210))


def test_registry_b3b_notes_printed_discrepancy():
    spec = get_axiom("B3B")
    assert "32768" in print_formula(spec.formula)
    assert any("32678" in note for note in spec.notes)


def test_spec_requires_domain_for_every_free_variable():
    with pytest.raises(ValueError):
        AxiomSpec("X", parse_formula("x = y"), get_axiom("A16").domain)


def test_sample_env_is_deterministic_and_respects_domains():
    spec = get_axiom("A20")
    assert sample_env(spec, 42, 7) == sample_env(spec, 42, 7)
    assert sample_env(spec, 42, 7) != sample_env(spec, 43, 7)
    for i in range(500):
        env = sample_env(spec, 1, i)
        assert is_pow2(env["n"]) and env["n"] <= 2**256
        assert 0 <= env["x"] < 2**128


def test_sample_env_odd_and_defined_variables():
    odd_spec = AxiomSpec("O", parse_formula("w = w"), axioms.parse_fixture("[O]\ndomain: w odd 64\nw = w\n")[0].domain)
    assert all(sample_env(odd_spec, 3, i)["w"] % 2 == 1 for i in range(300))
    a17 = get_axiom("A17")
    for i in range(100):
        env = sample_env(a17, 42, i)
        assert env["n"] == env["a"] * env["b"]


def test_sampling_is_stratified_by_bit_length():
    spec = get_axiom("A16")
    lengths = {sample_env(spec, 42, i)["x"].bit_length() for i in range(3000)}
    assert lengths == set(range(129))


@pytest.mark.parametrize("axiom_id", ["A1", "A16", "A19"])
def test_true_axioms_have_no_violations(axiom_id):
    report = check_axiom(get_axiom(axiom_id), 2000, 5)
    assert report.passed and report.samples_run == 2000


def test_a19_example_env():
    assert eval_formula(get_axiom("A19").formula, {"n": 2, "m": 8})


def test_a21_violation_witness():
    spec = get_axiom("A21")
    assert not eval_formula(spec.formula, {"n": 4, "m": 2})
    report = check_axiom(spec, 1000, 42)
    assert report.violations
    for v in report.violations:
        assert v.env["n"] > v.env["m"]
        # witnesses reproduce
        assert not eval_formula(spec.formula, v.env)
    assert check_axiom(a21_restricted(), 1000, 42).passed


def test_eval_errors_become_tagged_violations():
    spec = AxiomSpec("E", parse_formula("tau(x) = tau(x)"), get_axiom("A16").domain)
    report = check_axiom(spec, 400, 1)
    assert report.violations
    assert all(v.note.startswith("eval-error") and v.env["x"] == 0 for v in report.violations)


def test_check_axiom_requires_samples():
    with pytest.raises(ValueError):
        check_axiom(get_axiom("A1"), 0, 1)


def test_reports_are_reproducible():
    first = [r.to_json() for r in check_all(300, 9)]
    second = [r.to_json() for r in check_all(300, 9)]
    assert json.dumps(first) == json.dumps(second)
    assert [r["axiom"] for r in first] == IDS


def test_check_all_only_filter():
    reports = check_all(50, 1, only=["A19", "B3B"])
    assert [r.axiom_id for r in reports] == ["A19", "B3B"]
    with pytest.raises(KeyError):
        check_all(50, 1, only=["A99"])


def test_report_json_shape():
    r = check_axiom(get_axiom("A21"), 20, 42).to_json(timings=True)
    assert set(r) >= {"axiom", "mode", "samples", "seed", "violations", "elapsed_ms"}
    assert "elapsed_ms" not in check_axiom(get_axiom("A21"), 20, 42).to_json()
    for v in r["violations"]:
        assert all(isinstance(val, str) for val in v["env"].values())


# -- B1 ---------------------------------------------------------------------

def test_b1_origin_example():
    sides = eval_b1_sides(0, 0, AS_WRITTEN)
    assert sides.lhs == 0
    assert sides.rhs == 2**860 * 2**10 - 2**439 * 2**5 + 1
    assert sides.holds


@pytest.mark.parametrize("qe", range(7))
@pytest.mark.parametrize("xv", [0, 1])
def test_b1_variants_agree_at_x_0_and_1(qe, xv):
    w, c = eval_b1_sides(qe, xv, AS_WRITTEN), eval_b1_sides(qe, xv, CORRECTED)
    assert (w.lhs, w.rhs) == (c.lhs, c.rhs)


def test_b1_is_recomputed_identically():
    assert eval_b1_sides(4, 10, CORRECTED) == eval_b1_sides(4, 10, CORRECTED)


def test_b1_tables_match_parsed_formula():
    """The hand-entered coefficient tables and the fixture text are separate routes."""
    for variant, axiom_id in [(AS_WRITTEN, "B1"), (CORRECTED, "B1C")]:
        f = get_axiom(axiom_id).formula
        for qe in range(7):
            for xv in (0, 1, 2, 3, 5, 10, 63):
                q = 2**qe
                env = {"q": q, "x": xv, "p": 2 * q * q}
                sides = eval_b1_sides(qe, xv, variant)
                assert axioms.eval_term(f.right.left, env) == sides.lhs
                assert axioms.eval_term(f.right.right, env) == sides.rhs
                assert eval_formula(f, env) == sides.holds


def test_b1_grid_matches_frozen_fixture():
    frozen = json.loads((FIXTURES / "b1_grid.json").read_text())
    for variant in (AS_WRITTEN, CORRECTED):
        assert [s.to_json() for s in axioms.b1_grid(variant)] == frozen[variant]


def test_b1_unknown_variant():
    with pytest.raises(ValueError):
        eval_b1_sides(0, 0, "other")


def test_b1_negative_rhs_is_reported(monkeypatch):
    monkeypatch.setattr(axioms, "_B1_RHS_MAIN", ((0, 0, 0),))
    with pytest.raises(DomainError):
        eval_b1_sides(0, 0, AS_WRITTEN)


def test_b1_reports():
    written = axioms.check_b1(get_axiom("B1"), AS_WRITTEN, 200, 42)
    corrected = axioms.check_b1(get_axiom("B1C"), CORRECTED, 200, 42)
    assert all(v.note == "lhs >= rhs" for v in written.violations)
    assert written.violations and corrected.passed
    assert any(n.startswith("grid") for n in written.notes)


# -- B2 / B3 --------------------------------------------------------------------

def test_b2_b3_reports():
    for axiom_id in ("B2A", "B2B", "B3B"):
        report = check_all(10, 42, only=[axiom_id])[0]
        assert report.passed and report.mode == "exhaustive", axiom_id
    b3a = check_all(10, 42, only=["B3A"])[0]
    assert not b3a.passed
    assert all(v.note.startswith("D outside") for v in b3a.violations)
    assert {28, 0}.issubset({v.env["D"] for v in b3a.violations})
    spec = get_axiom("B3A")
    for v in b3a.violations:
        assert not eval_formula(spec.formula, v.env)
