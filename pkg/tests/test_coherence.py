import pytest

from tmlg import jterms, model
from tmlg.jterms import (TelescopePath, coherence, dagger, ddagger, gamma,
                         identity_path, tele_compose)
from tmlg.kernel import check_type, infer_type, normalize
from tmlg.model import VWord, eval_term
from tmlg.syntax import (BaseEdge, BaseTy, BaseVertex, Id, NatTy, Refl, Var,
                         shift)

G = BaseTy("G")
a, b, c = BaseVertex("a"), BaseVertex("b"), BaseVertex("c")
f, e, g = BaseEdge("f"), BaseEdge("e"), BaseEdge("g")


def one_leg(src, tgt, leg):
    return TelescopePath((G,), (src,), (tgt,), (leg,))


def test_tele_compose_single(theory1):
    comp = tele_compose(theory1, (), one_leg(a, b, f), one_leg(b, c, g))
    jterms.check_path(theory1, (), comp)
    w = eval_term(theory1, (), comp.legs[0])
    assert isinstance(w, VWord)
    assert w.word.letters == (("f", 1), ("g", 1))


def test_tele_compose_two_coordinates(theory1):
    p1 = jterms.extend_path(theory1, (), one_leg(a, a, e), G, a, b, f)
    p2 = jterms.extend_path(theory1, (), one_leg(a, a, e), G, b, c, g)
    comp = tele_compose(theory1, (), p1, p2)
    jterms.check_path(theory1, (), comp)
    w0 = eval_term(theory1, (), comp.legs[0])
    assert w0.word.letters == (("e", 1), ("e", 1))
    w1 = eval_term(theory1, (), comp.legs[1])
    assert w1.word.letters == (("f", 1), ("g", 1))


def test_gamma_first_arrow_identity_collapses(theory1):
    # unit coherence: no correction needed when the eliminated arrow is
    # an identity, so the term computes to refl outright
    idp = identity_path((G,), (b,))
    kp = one_leg(b, c, g)
    t = gamma(theory1, (), [G], idp, kp, shift(G, 1, 0), a)
    nf = normalize(theory1, (), t)
    assert isinstance(nf, Refl)


def test_gamma_types_on_general_arrows(theory1):
    hp = one_leg(a, a, e)
    kp = one_leg(a, b, f)
    t = gamma(theory1, (), [G], hp, kp, shift(G, 1, 0), c)
    ty = infer_type(theory1, (), t)
    # both sides of the coherence square evaluate to the same value
    assert isinstance(ty, Id)
    assert eval_term(theory1, (), ty.lhs) == eval_term(theory1, (), ty.rhs)
    w = eval_term(theory1, (), t)
    assert w.word.letters == ()


def test_gamma_all_refl_collapses(theory1):
    idp = identity_path((G,), (a,))
    t = gamma(theory1, (), [G], idp, idp, shift(G, 1, 0), b)
    assert normalize(theory1, (), t) == Refl(b)


def test_dagger_all_refl(theory1):
    path = identity_path((G, shift(G, 1, 0)), (a, b))
    t = dagger(theory1, (), 1, path, shift(G, 1, 0), c)
    nf = normalize(theory1, (), t)
    assert nf == Refl(c)


def test_dagger_trailing_legs_only(theory1):
    # leading arrow refl, trailing leg a loop: still collapses the
    # leading stage; the result is well-typed and dense
    prefix = identity_path((G,), (a,))
    path = jterms.extend_path(theory1, (), prefix, G, a, a, e)
    t = dagger(theory1, (), 1, path, shift(G, 1, 0), c)
    ty = infer_type(theory1, (), t)
    assert isinstance(ty, Id)
    w = eval_term(theory1, (), t)
    assert w.word.letters == ()


def test_dagger_general_path_types(theory1):
    p1 = one_leg(a, a, e)
    path = jterms.extend_path(theory1, (), p1, G, a, b, f)
    t = dagger(theory1, (), 1, path, shift(G, 1, 0), c)
    ty = infer_type(theory1, (), t)
    assert isinstance(ty, Id)
    w = eval_term(theory1, (), t)
    assert w.word.letters == ()


def test_ddagger_refl_collapses(theory1):
    idp = identity_path((G,), (a,))
    # family over (x : G, v : G): constant G; section x
    b_fam = shift(G, 2, 0)
    t = ddagger(theory1, (), idp, b_fam, Var(0), c)
    assert normalize(theory1, (), t) == Refl(c)


def test_ddagger_loop_types(theory1):
    p = one_leg(a, a, e)
    b_fam = shift(G, 2, 0)
    t = ddagger(theory1, (), p, b_fam, Var(0), c)
    ty = infer_type(theory1, (), t)
    assert isinstance(ty, Id)
    w = eval_term(theory1, (), t)
    assert w.word.letters == ()


def test_coherence_dispatch(theory1):
    idp = identity_path((G,), (a,))
    t = coherence(theory1, (), "gamma", telescope=[G], first=idp, second=idp,
                  family=shift(G, 1, 0), object=b)
    assert normalize(theory1, (), t) == Refl(b)
    t2 = coherence(theory1, (), "ddagger", path=idp, family=shift(G, 2, 0),
                   section=Var(0), object=c)
    assert normalize(theory1, (), t2) == Refl(c)
    with pytest.raises(ValueError):
        coherence(theory1, (), "nope")
