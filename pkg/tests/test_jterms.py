import pytest

from tmlg import jterms, kernel, model
from tmlg.jterms import (TelescopePath, action_on_path, check_path,
                         identity_path, move_value, param_j, path_compose,
                         path_inverse, refl_chain_path, seq_j, tele_transport,
                         transport)
from tmlg.kernel import check_type, convertible, infer_type, normalize
from tmlg.model import VWord, eval_term
from tmlg.parser import parse_term
from tmlg.syntax import (App, BaseEdge, BaseTy, BaseVertex, Id, Lam, NatTy,
                         Pi, Refl, Succ, Var, Zero, instantiate, shift)

G = BaseTy("G")
a, b, c = BaseVertex("a"), BaseVertex("b"), BaseVertex("c")
f, e, g = BaseEdge("f"), BaseEdge("e"), BaseEdge("g")


# --- transport ---------------------------------------------------------------

def test_transport_refl_computes(theory1):
    t = transport(theory1, (), NatTy(), a, a, Refl(a), Zero())
    assert normalize(theory1, (), t) == Zero()


def test_transport_constant_nat(theory1):
    t = transport(theory1, (), NatTy(), a, b, f, Zero())
    check_type(theory1, (), t, NatTy())
    assert eval_term(theory1, (), t) == model.VNum(0)


def test_transport_g_family_doppelganger(theory1):
    t = transport(theory1, (), G, a, a, e, b)
    check_type(theory1, (), t, G)
    nf = normalize(theory1, (), t)
    assert nf != b  # stuck: rewriting alone does not collapse it
    assert eval_term(theory1, (), t) == model.VVertex("b")


def test_transport_dependent_family(theory1):
    # family [x] Id(G, 'a, x) over x : G
    fam = Id(shift(G, 1, 0), shift(a, 1, 0), Var(0))
    t = transport(theory1, (), fam, a, b, f, Refl(a))
    check_type(theory1, (), t, Id(G, a, b))
    assert eval_term(theory1, (), t) == eval_term(theory1, (), f)


# --- path algebra ------------------------------------------------------------

def test_path_compose_types_and_values(theory1):
    fg = path_compose(theory1, (), G, f, g)
    check_type(theory1, (), fg, Id(G, a, c))
    w = eval_term(theory1, (), fg)
    assert isinstance(w, VWord)
    assert w.word.letters == (("f", 1), ("g", 1))


def test_path_compose_refl_right_unit(theory1):
    fr = path_compose(theory1, (), G, f, Refl(b))
    assert normalize(theory1, (), fr) == normalize(theory1, (), f)


def test_path_inverse_refl(theory1):
    t = path_inverse(theory1, (), G, Refl(a))
    assert normalize(theory1, (), t) == Refl(a)


def test_path_inverse_law(theory1):
    finv = path_inverse(theory1, (), G, f)
    comp = path_compose(theory1, (), G, f, finv)
    assert convertible(theory1, (), Id(G, a, a), comp, Refl(a))


def test_groupoid_laws_up_to_conversion(theory1):
    ty_ac = Id(G, a, c)
    fg = path_compose(theory1, (), G, f, g)
    # associativity against a loop on the left
    lhs = path_compose(theory1, (), G, path_compose(theory1, (), G, e, f), g)
    rhs = path_compose(theory1, (), G, e, fg)
    assert convertible(theory1, (), ty_ac, lhs, rhs)


# --- move_value / telescope transport ---------------------------------------

def test_move_value_no_tail_is_transport(theory1):
    t1 = move_value(theory1, (), a, b, f, [], [], NatTy(), Zero())
    t2 = transport(theory1, (), NatTy(), a, b, f, Zero())
    assert t1 == t2


def test_move_value_one_tail_types(theory1):
    # moving u : Id(G, w0, 'a) while w0 moves from 'a to 'b along f,
    # with one tail coordinate v : G riding along (unused dependencies)
    tail_ty = shift(G, 1, 0)
    fam = Id(shift(G, 2, 0), Var(1), shift(a, 2, 0))
    t = move_value(theory1, (), a, b, f, [tail_ty], [c], fam, Refl(a))
    want = Id(G, b, a)
    check_type(theory1, (), t, want)
    # semantics: conjugation sends refl to f^-1
    w = eval_term(theory1, (), t)
    assert isinstance(w, VWord)
    assert w.word.letters == (("f", -1),)


def test_tele_transport_two_legs(theory1):
    # telescope (x : G, y : G), family Id(G, x, y); move refl 'a along
    # legs (refl a, f): the classic iterated-identity pushforward
    tel = [G, shift(G, 1, 0)]
    fam = Id(shift(G, 2, 0), Var(1), Var(0))
    t = tele_transport(theory1, (), tel, fam, [a, a], [a, b],
                       [Refl(a), f], Refl(a))
    check_type(theory1, (), t, Id(G, a, b))
    w = eval_term(theory1, (), t)
    assert w == eval_term(theory1, (), f)


def test_check_path_accepts_valid(theory1):
    tel = (G, shift(G, 1, 0))
    p = TelescopePath(tel, (a, a), (a, b), (Refl(a), f))
    check_path(theory1, (), p)


def test_check_path_rejects_bad_leg(theory1):
    tel = (G, shift(G, 1, 0))
    p = TelescopePath(tel, (a, a), (a, c), (Refl(a), f))
    with pytest.raises(kernel.TypeCheckError):
        check_path(theory1, (), p)


def test_refl_chain_path_is_valid(theory1):
    p = refl_chain_path(theory1, (), G, a, b, f)
    check_path(theory1, (), p)


# --- parameterized eliminator -------------------------------------------------

def test_param_j_no_params_is_j(theory1):
    from tmlg.syntax import J
    motive = shift(G, 3, 0)
    phi = shift(b, 1, 0)
    t = param_j(theory1, (), motive, phi, a, a, e, [], [])
    assert t == J(motive, phi, a, a, e)


def test_param_j_refl_collapses(theory1):
    # motive (x y z v1:Nat): Nat; phi (x v1): s v1
    motive = NatTy()
    phi = Succ(Var(0))
    param_tys = [NatTy()]
    t = param_j(theory1, (), motive, phi, a, a, Refl(a), param_tys,
                [Succ(Zero())])
    check_type(theory1, (), t, NatTy())
    assert normalize(theory1, (), t) == Succ(Succ(Zero()))


def test_param_j_nat_parameter_loop(theory1):
    motive = NatTy()
    phi = Succ(Var(0))
    t = param_j(theory1, (), motive, phi, a, a, e, [NatTy()], [Zero()])
    assert infer_type(theory1, (), t) == NatTy()
    assert eval_term(theory1, (), t) == model.VNum(1)


def test_param_j_dependent_param(theory1):
    # parameter type depends on the endpoints: v1 : Id(G, x, y);
    # motive: Id(G, x, y); phi x v1 = v1 (over the diagonal v1 : Id(G,x,x))
    motive = Id(shift(G, 4, 0), Var(3), Var(2))
    param_tys = [Id(shift(G, 3, 0), Var(2), Var(1))]
    phi = Var(0)
    t = param_j(theory1, (), motive, phi, a, b, f, param_tys, [f])
    check_type(theory1, (), t, Id(G, a, b))
    assert normalize(theory1, (), param_j(theory1, (), motive, phi, a, a,
                                          Refl(a), param_tys,
                                          [Refl(a)])) == Refl(a)


# --- sequential eliminator ----------------------------------------------------

def test_seq_j_length_one_is_param_j(theory1):
    motive = shift(G, 3, 0)
    phi = shift(b, 1, 0)
    t1 = seq_j(theory1, (), [G], motive, phi, [a], [a], [e], [], [])
    t2 = param_j(theory1, (), motive, phi, a, a, e, [], [])
    assert t1 == t2


def test_seq_j_all_refl_collapses(theory1):
    # telescope (x1 : G, x2 : G); motive constant Nat; phi = z
    tel = [G, shift(G, 1, 0)]
    motive = NatTy()
    phi = Zero()
    t = seq_j(theory1, (), tel, motive, phi, [a, b], [a, b],
              [Refl(a), Refl(b)], [], [])
    check_type(theory1, (), t, NatTy())
    assert normalize(theory1, (), t) == Zero()


def two_leg_path(theory1):
    """(a, a) -> (a, b) over (x1 : G, x2 : G) along (e, f), with the
    second leg corrected to start at the pushed-forward source."""
    prefix = TelescopePath((G,), (a,), (a,), (e,))
    return jterms.extend_path(theory1, (), prefix, G, a, b, f)


def test_seq_j_two_legs_types(theory1):
    tel = [G, shift(G, 1, 0)]
    motive = NatTy()
    phi = Zero()
    p = two_leg_path(theory1)
    check_path(theory1, (), p)
    t = seq_j(theory1, (), tel, motive, phi, list(p.source), list(p.target),
              list(p.legs), [], [])
    assert infer_type(theory1, (), t) == NatTy()
    assert eval_term(theory1, (), t) == model.VNum(0)


def test_seq_j_dependent_motive(theory1):
    # motive Id(G, y1, y1) over (x1,x2,y1,y2,z1,z2); phi = refl x1
    tel = [G, shift(G, 1, 0)]
    motive = Id(shift(G, 6, 0), Var(3), Var(3))  # Id(G, y1, y1)
    phi = Refl(Var(1))  # over (x1, x2): refl x1
    p = two_leg_path(theory1)
    t = seq_j(theory1, (), tel, motive, phi, list(p.source), list(p.target),
              list(p.legs), [], [])
    check_type(theory1, (), t, Id(G, a, a))


def test_seq_j_three_legs(theory1):
    tel = [G, shift(G, 1, 0), shift(G, 2, 0)]
    motive = NatTy()
    phi = Succ(Zero())
    p2 = two_leg_path(theory1)
    p3 = jterms.extend_path(theory1, (), p2, G, b, c, g)
    check_path(theory1, (), p3)
    t = seq_j(theory1, (), tel, motive, phi, list(p3.source),
              list(p3.target), list(p3.legs), [], [])
    assert infer_type(theory1, (), t) == NatTy()
    assert normalize(theory1, (), seq_j(theory1, (), tel, motive, phi,
                                        [a, a, b], [a, a, b],
                                        [Refl(a), Refl(a), Refl(b)],
                                        [], [])) == Succ(Zero())


def test_seq_j_with_params(theory1):
    tel = [G, shift(G, 1, 0)]
    motive = NatTy()
    phi = Succ(Var(0))  # over (x1, x2, v1)
    p = two_leg_path(theory1)
    t = seq_j(theory1, (), tel, motive, phi, list(p.source), list(p.target),
              list(p.legs), [NatTy()], [Zero()])
    assert infer_type(theory1, (), t) == NatTy()
    collapsed = seq_j(theory1, (), tel, motive, phi, [a, b], [a, b],
                      [Refl(a), Refl(b)], [NatTy()], [Zero()])
    assert normalize(theory1, (), collapsed) == Succ(Zero())


# --- action of a section on a path -------------------------------------------

def test_action_all_refl_is_refl(theory1):
    p = identity_path((G,), (a,))
    t = action_on_path(theory1, (), Var(0), p)
    nf = normalize(theory1, (), t)
    assert nf == Refl(a)


def test_action_identity_section(theory1):
    # section x over (x : G); single leg f : a -> b
    p = TelescopePath((G,), (a,), (b,), (f,))
    t = action_on_path(theory1, (), Var(0), p)
    ty = infer_type(theory1, (), t)
    w = eval_term(theory1, (), t)
    assert w == eval_term(theory1, (), f)


def test_action_closed_section_is_dense(theory1):
    # constant section 'c over (x : G): action along any leg is dense
    p = TelescopePath((G,), (a,), (a,), (e,))
    t = action_on_path(theory1, (), shift(c, 1, 0), p)
    check_type(theory1, (), t, Id(G, transport_of_c(theory1), c))
    w = eval_term(theory1, (), t)
    assert isinstance(w, VWord)
    assert w.word.letters == ()


def transport_of_c(theory1):
    return tele_transport(theory1, (), [G], shift(G, 1, 0), [a], [a], [e], c)


def test_action_two_leg_path(theory1):
    p = two_leg_path(theory1)
    t = action_on_path(theory1, (), Var(0), p)  # section x2
    infer_type(theory1, (), t)
    w = eval_term(theory1, (), t)
    assert w == eval_term(theory1, (), p.legs[1])
