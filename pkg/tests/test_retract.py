import json

from tmlg import jterms, kernel, model, retract
from tmlg.graph import Theory
from tmlg.parser import parse_term
from tmlg.retract import (Report, alpha_component, canon_nat, equivalence_report,
                          is_dense, naturality_check, pi0_report,
                          retract_report)
from tmlg.syntax import (BaseEdge, BaseTy, BaseVertex, Id, NatTy, Refl, Succ,
                         Zero)

G = BaseTy("G")
a, b = BaseVertex("a"), BaseVertex("b")


def test_is_dense(theory1):
    assert is_dense(theory1, Refl(a))
    assert not is_dense(theory1, BaseEdge("f"))
    loop = jterms.path_compose(
        theory1, (), G, BaseEdge("e"),
        jterms.path_inverse(theory1, (), G, BaseEdge("e")))
    assert is_dense(theory1, loop)


def test_alpha_component_vertex(theory1):
    assert alpha_component(theory1, a) == Refl(a)


def test_alpha_component_doppelganger(theory1):
    t = parse_term("(J ((x y z) G) ((x) 'b) 'a 'a 'e)", theory1)
    path = alpha_component(theory1, t)
    assert is_dense(theory1, path)
    kernel.check_type(theory1, (), path, Id(G, t, b))


def test_alpha_component_transport(theory1):
    t = jterms.transport(theory1, (), G, a, b, BaseEdge("f"), a)
    path = alpha_component(theory1, t)
    assert is_dense(theory1, path)
    kernel.check_type(theory1, (), path, Id(G, t, a))


def test_naturality_refl(theory1):
    assert naturality_check(theory1, Refl(a), a, a)


def test_naturality_basic_edge(theory1):
    assert naturality_check(theory1, BaseEdge("f"), a, b)


def test_canon_nat_zero(theory1):
    numeral, proof = canon_nat(theory1, Zero())
    assert numeral == Zero()
    assert proof == Refl(Zero())


def test_canon_nat_rec(theory1):
    t = parse_term("(rec ((n) Nat) z ((x y) (s y)) (s (s z)))", theory1)
    numeral, proof = canon_nat(theory1, t)
    assert numeral == Succ(Succ(Zero()))
    kernel.check_type(theory1, (), proof, Id(NatTy(), t, numeral))


def test_canon_nat_transport(theory1):
    t = jterms.transport(theory1, (), NatTy(), a, a, BaseEdge("e"),
                         Succ(Zero()))
    numeral, proof = canon_nat(theory1, t)
    assert numeral == Succ(Zero())
    kernel.check_type(theory1, (), proof, Id(NatTy(), t, numeral))


def test_pi0_vertices(theory1):
    report = pi0_report(theory1, [BaseVertex(v) for v in theory1.vertices])
    assert report.verdict
    payload = json.loads(report.to_json())
    assert payload["verdict"] == "pass"
    assert payload["stats"]["samples"] == 3


def test_pi0_two_components():
    th = Theory("G", ("a", "b", "c", "d"), {"f": ("a", "b"), "g": ("c", "d")})
    report = pi0_report(th, [BaseVertex(v) for v in th.vertices])
    assert report.verdict


def test_equivalence_zero_fuel(theory1):
    report = equivalence_report(theory1, fuel=0, seed=0)
    assert report.verdict


def test_equivalence_small(theory1):
    report = equivalence_report(theory1, fuel=60, seed=0)
    assert report.verdict, report.counterexample


def test_equivalence_isolated_vertex():
    th = Theory("G", ("a", "b"), {"e": ("a", "a")})
    report = equivalence_report(th, fuel=40, seed=1)
    assert report.verdict, report.counterexample


def test_retract_report_small(theory1):
    report = retract_report(theory1, fuel=25, seed=0)
    assert report.verdict, report.counterexample
    assert report.failures == 0


def test_report_json_schema():
    r = Report("canon", False, 3, 1, 17, counterexample={"term": "z"})
    payload = json.loads(r.to_json())
    assert set(payload) == {"kind", "verdict", "stats", "counterexample"}
    assert set(payload["stats"]) == {"samples", "failures", "millis"}
