import pytest

from tmlg import jterms, kernel, model, realizability as rz
from tmlg.kernel import check_type, infer_type
from tmlg.model import VWord, eval_term
from tmlg.parser import parse_term
from tmlg.realizability import (RBase, RFun, RNat, RPair, RStar, check_realizes,
                                is_dense_path, realize, reindex)
from tmlg.syntax import (App, BaseEdge, BaseTy, BaseVertex, Id, Lam, NatTy,
                         Pair, Pi, Refl, Sigma, Succ, Var, Zero, shift)

G = BaseTy("G")
a, b, c = BaseVertex("a"), BaseVertex("b"), BaseVertex("c")
f, e, g = BaseEdge("f"), BaseEdge("e"), BaseEdge("g")


def test_realize_vertex(theory1):
    r = realize(theory1, (), (), a, G)
    assert r == RBase(Refl(a))
    assert check_realizes(theory1, (), r, a, G)


def test_realize_edge_is_star(theory1):
    r = realize(theory1, (), (), f, Id(G, a, b))
    assert r == RStar()
    assert check_realizes(theory1, (), r, f, Id(G, a, b))


def test_nondense_path_rejected(theory1):
    r = RBase(e)  # a generator loop is not dense
    assert not check_realizes(theory1, (), r, a, G)


def test_realize_numerals(theory1):
    r = realize(theory1, (), (), Succ(Succ(Zero())), NatTy())
    assert isinstance(r, RNat) and r.n == 2
    assert check_realizes(theory1, (), r, Succ(Succ(Zero())), NatTy())
    assert check_realizes(theory1, (), RNat(2, Refl(Succ(Succ(Zero())))),
                          Succ(Succ(Zero())), NatTy())


def test_realize_doppelganger(theory1):
    t = parse_term("(J ((x y z) G) ((x) 'b) 'a 'a 'e)", theory1)
    r = realize(theory1, (), (), t, G)
    assert isinstance(r, RBase)
    # dense path targeting the closure, i.e. the basic vertex b
    check_type(theory1, (), r.path, Id(G, t, b))
    assert is_dense_path(theory1, r.path)
    assert check_realizes(theory1, (), r, t, G)


def test_realize_transport_constant_nat(theory1):
    t = jterms.transport(theory1, (), NatTy(), a, b, f, Zero())
    r = realize(theory1, (), (), t, NatTy())
    assert isinstance(r, RNat) and r.n == 0
    assert check_realizes(theory1, (), r, t, NatTy())


def test_realize_transport_constant_g(theory1):
    t = jterms.transport(theory1, (), G, a, a, e, b)
    r = realize(theory1, (), (), t, G)
    assert isinstance(r, RBase)
    assert check_realizes(theory1, (), r, t, G)


def test_realize_rec(theory1):
    t = parse_term("(rec ((n) Nat) z ((x y) (s y)) (s (s z)))", theory1)
    r = realize(theory1, (), (), t, NatTy())
    assert isinstance(r, RNat) and r.n == 2
    assert check_realizes(theory1, (), r, t, NatTy())


def test_realize_rec_with_transported_scrutinee(theory1):
    scrut = jterms.transport(theory1, (), NatTy(), a, a, e, Succ(Zero()))
    from tmlg.syntax import Rec
    t = Rec(NatTy(), Zero(), Succ(Var(1)), scrut)
    check_type(theory1, (), t, NatTy())
    r = realize(theory1, (), (), t, NatTy())
    assert isinstance(r, RNat) and r.n == 1
    assert check_realizes(theory1, (), r, t, NatTy())


def test_realize_lambda(theory1):
    t = Lam(G, Var(0))
    ty = Pi(G, G)
    r = realize(theory1, (), (), t, ty)
    assert isinstance(r, RFun)
    out = r.map(a, RBase(Refl(a)))
    assert isinstance(out, RBase)
    assert check_realizes(theory1, (), r, t, ty)


def test_realize_lambda_nat(theory1):
    t = Lam(NatTy(), Succ(Var(0)))
    ty = Pi(NatTy(), NatTy())
    r = realize(theory1, (), (), t, ty)
    assert check_realizes(theory1, (), r, t, ty)


def test_realize_application(theory1):
    t = App(Lam(G, Var(0)), a)
    r = realize(theory1, (), (), t, G)
    assert isinstance(r, RBase)
    assert check_realizes(theory1, (), r, t, G)


def test_realize_pairs(theory1):
    sig = Sigma(G, NatTy())
    p = Pair(a, Zero(), sig)
    r = realize(theory1, (), (), p, sig)
    assert isinstance(r, RPair)
    assert check_realizes(theory1, (), r, p, sig)


def test_realize_rsig(theory1):
    t = parse_term(
        "(Rsig ((p) G) ((x y) x) (pair 'a z (Sigma (v G) Nat)))", theory1)
    r = realize(theory1, (), (), t, G)
    assert check_realizes(theory1, (), r, t, G)


def test_realize_path_compose(theory1):
    t = jterms.path_compose(theory1, (), G, e,
                            jterms.path_inverse(theory1, (), G, e))
    r = realize(theory1, (), (), t, Id(G, a, a))
    assert r == RStar()
    assert check_realizes(theory1, (), r, t, Id(G, a, a))


def test_reindex_base_along_edge(theory1):
    r = reindex(theory1, RBase(Refl(a)), G, (None, f))
    assert isinstance(r, RBase)
    # dense, with target the closure of b
    assert is_dense_path(theory1, r.path)
    check_type(theory1, (), r.path, Id(G, b, b))


def test_reindex_identity_is_identity(theory1):
    r = RBase(Refl(a))
    assert reindex(theory1, r, G, (None, Refl(a))) == r


def test_reindex_star(theory1):
    assert reindex(theory1, RStar(), Id(G, a, b), (None, Refl(f))) == RStar()


def test_realize_j_at_nat_motive(theory1):
    # J with a Nat-valued motive over a loop
    t = parse_term("(J ((x y z) Nat) ((x) (s z)) 'a 'a 'e)", theory1)
    r = realize(theory1, (), (), t, NatTy())
    assert isinstance(r, RNat) and r.n == 1
    assert check_realizes(theory1, (), r, t, NatTy())


def test_realize_j_at_id_motive(theory1):
    # J with an identity-typed motive: transport of refl along the loop
    t = parse_term(
        "(J ((x y z) (Id G x y)) ((x) (refl x)) 'a 'a 'e)", theory1)
    ty = Id(G, a, a)
    check_type(theory1, (), t, ty)
    r = realize(theory1, (), (), t, ty)
    assert r == RStar()
    assert check_realizes(theory1, (), r, t, ty)


def test_soundness_small_sample(theory1):
    texts_types = [
        ("'a", "G"),
        ("'f", "(Id G 'a 'b)"),
        ("(J ((x y z) G) ((x) 'b) 'a 'a 'e)", "G"),
        ("(s (s z))", "Nat"),
        ("(rec ((n) Nat) z ((x y) (s (s y))) (s (s z)))", "Nat"),
        ("(app (lam (x G) x) 'c)", "G"),
        ("(pair 'a 'b (Sigma (v G) G))", "(Sigma (v G) G)"),
        ("(refl 'a)", "(Id G 'a 'a)"),
        ("(lam (x Nat) (s x))", "(Pi (x Nat) Nat)"),
    ]
    for text, ty_text in texts_types:
        t = parse_term(text, theory1)
        ty = parse_term(ty_text, theory1)
        check_type(theory1, (), t, ty)
        r = realize(theory1, (), (), t, ty)
        assert check_realizes(theory1, (), r, t, ty), text
