"""Type checker and definitional equality for the graph-generated theory.

Checking is syntax-directed thanks to full annotations. Normalization
orients every conversion rule left-to-right and rewrites innermost-first
under a fuel bound. Conversion is layered: structural equality of normal
forms, then semantic word comparison at identity types over the basic
type, then triviality at identity types over Nat and at iterated
identity types.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .graph import ReducedWord, Theory
from . import syntax as S
from .syntax import (App, BaseEdge, BaseTy, BaseVertex, Context, Id, J, Lam,
                     NatTy, Pair, Pi, Proj0, Proj1, Rec, Refl, RSig, Sigma,
                     Succ, Term, Var, Zero, ctx_extend, ctx_lookup,
                     instantiate, is_closed, shift, substitute)

DEFAULT_FUEL = 10**6


class KernelError(Exception):
    pass


class FuelExhausted(KernelError):
    """Internal error: the rewrite loop exceeded its step bound."""


@dataclass
class TypeCheckError(KernelError):
    kind: str  # Unbound | Mismatch | NotAFunction | NotAPair | NotAPath
               # | MotiveIllFormed | TheoryUnknownSymbol
    subject: Term | None = None
    expected: Term | None = None
    actual: Term | None = None
    detail: str = ""

    def __str__(self):
        bits = [self.kind]
        if self.detail:
            bits.append(self.detail)
        if self.expected is not None:
            bits.append(f"expected {self.expected}")
        if self.actual is not None:
            bits.append(f"actual {self.actual}")
        return ": ".join(bits)


def _fuel() -> int:
    raw = os.environ.get("TML_FUEL")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return DEFAULT_FUEL


# --- normalization -------------------------------------------------------

class _Budget:
    __slots__ = ("left",)

    def __init__(self, fuel: int):
        self.left = fuel

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise FuelExhausted("normalization fuel exhausted")


_NORM_MEMO: dict[Term, Term] = {}


def normalize(theory: Theory, ctx: Context, t: Term, fuel: int | None = None) -> Term:
    """Full normal form: every redex rewritten, including under binders.

    An explicit fuel bound bypasses the memo so the budget is honest.
    """
    if fuel is not None:
        return _norm(t, _Budget(fuel), memo=False)
    return _norm(t, _Budget(_fuel()))


def _norm(t: Term, budget: _Budget, memo: bool = True) -> Term:
    if isinstance(t, (Var, *S.LEAVES)):
        return t
    hit = _NORM_MEMO.get(t) if memo else None
    if hit is not None:
        return hit
    orig = t
    cls = type(t)
    parts = {}
    for name, _ in S.BINDING[cls]:
        parts[name] = _norm(getattr(t, name), budget, memo)
    t = cls(**parts)
    red = _step(t)
    if red is None:
        out = t
    else:
        budget.spend()
        out = _norm(red, budget, memo)
    if memo:
        if len(_NORM_MEMO) > 1_000_000:
            _NORM_MEMO.clear()
        _NORM_MEMO[orig] = out
        _NORM_MEMO[out] = out
    return out


def _step(t: Term) -> Term | None:
    """One head rewrite, or None. Subterms are assumed normal."""
    match t:
        case App(Lam(_, body), arg):
            return substitute(body, 0, arg)
        case Proj0(Pair(fst, _, _)):
            return fst
        case Proj1(Pair(_, snd, _)):
            return snd
        case RSig(_, branch, Pair(fst, snd, _)):
            return instantiate(branch, fst, snd)
        case J(_, base, _, _, Refl(c)):
            return substitute(base, 0, c)
        case Rec(_, zcase, _, Zero()):
            return zcase
        case Rec(motive, zcase, scase, Succ(n)):
            return instantiate(scase, n, Rec(motive, zcase, scase, n))
    return None


# --- typing --------------------------------------------------------------

def check_is_type(theory: Theory, ctx: Context, t: Term) -> None:
    """Type formation: Pi, Sigma, Id, Nat and the basic type, recursively."""
    match t:
        case BaseTy(name):
            if name != theory.name:
                raise TypeCheckError("TheoryUnknownSymbol", t,
                                     detail=f"unknown base type {name!r}")
        case NatTy():
            pass
        case Pi(dom, cod) | Sigma(dom, cod):
            check_is_type(theory, ctx, dom)
            check_is_type(theory, ctx_extend(ctx, dom), cod)
        case Id(ty, lhs, rhs):
            check_is_type(theory, ctx, ty)
            check_type(theory, ctx, lhs, ty)
            check_type(theory, ctx, rhs, ty)
        case _:
            raise TypeCheckError("MotiveIllFormed", t,
                                 detail="not a type former")


def is_type(theory: Theory, ctx: Context, t: Term) -> bool:
    try:
        check_is_type(theory, ctx, t)
        return True
    except TypeCheckError:
        return False


_INFER_MEMO: dict[tuple, Term] = {}


def infer_type(theory: Theory, ctx: Context, t: Term) -> Term:
    key = (theory, ctx, t)
    hit = _INFER_MEMO.get(key)
    if hit is not None:
        return hit
    out = _infer(theory, ctx, t)
    if len(_INFER_MEMO) > 500_000:
        _INFER_MEMO.clear()
    _INFER_MEMO[key] = out
    return out


def _infer(theory: Theory, ctx: Context, t: Term) -> Term:
    match t:
        case Var(i):
            if not 0 <= i < len(ctx):
                raise TypeCheckError("Unbound", t, detail=f"index {i}")
            return ctx_lookup(ctx, i)
        case BaseVertex(name):
            if not theory.has_vertex(name):
                raise TypeCheckError("TheoryUnknownSymbol", t,
                                     detail=f"unknown vertex {name!r}")
            return BaseTy(theory.name)
        case BaseEdge(name):
            if name not in theory.edges:
                raise TypeCheckError("TheoryUnknownSymbol", t,
                                     detail=f"unknown edge {name!r}")
            s, tt = theory.edges[name]
            return Id(BaseTy(theory.name), BaseVertex(s), BaseVertex(tt))
        case Zero():
            return NatTy()
        case Succ(n):
            check_type(theory, ctx, n, NatTy())
            return NatTy()
        case Lam(dom, body):
            check_is_type(theory, ctx, dom)
            cod = infer_type(theory, ctx_extend(ctx, dom), body)
            return Pi(dom, cod)
        case App(fn, arg):
            fn_ty = normalize(theory, ctx, infer_type(theory, ctx, fn))
            if not isinstance(fn_ty, Pi):
                raise TypeCheckError("NotAFunction", t, actual=fn_ty)
            check_type(theory, ctx, arg, fn_ty.domain)
            return substitute(fn_ty.codomain, 0, arg)
        case Pair(fst, snd, annot):
            check_is_type(theory, ctx, annot)
            ann = normalize(theory, ctx, annot)
            if not isinstance(ann, Sigma):
                raise TypeCheckError("NotAPair", t, actual=ann)
            check_type(theory, ctx, fst, ann.domain)
            check_type(theory, ctx, snd, substitute(ann.codomain, 0, fst))
            return annot
        case Proj0(p):
            p_ty = normalize(theory, ctx, infer_type(theory, ctx, p))
            if not isinstance(p_ty, Sigma):
                raise TypeCheckError("NotAPair", t, actual=p_ty)
            return p_ty.domain
        case Proj1(p):
            p_ty = normalize(theory, ctx, infer_type(theory, ctx, p))
            if not isinstance(p_ty, Sigma):
                raise TypeCheckError("NotAPair", t, actual=p_ty)
            return substitute(p_ty.codomain, 0, Proj0(p))
        case Refl(a):
            a_ty = infer_type(theory, ctx, a)
            return Id(a_ty, a, a)
        case J(motive, base, lhs, rhs, path):
            a_ty = infer_type(theory, ctx, lhs)
            check_type(theory, ctx, rhs, a_ty)
            path_ty = normalize(theory, ctx, infer_type(theory, ctx, path))
            if not isinstance(path_ty, Id):
                raise TypeCheckError("NotAPath", t, actual=path_ty)
            check_type(theory, ctx, path, Id(a_ty, lhs, rhs))
            mctx = _motive_ctx(ctx, a_ty)
            check_is_type(theory, mctx, motive)
            base_ctx = ctx_extend(ctx, a_ty)
            base_want = instantiate(shift(motive, 1, 3),
                                    Var(0), Var(0), Refl(Var(0)))
            check_type(theory, base_ctx, base, base_want)
            return instantiate(motive, lhs, rhs, path)
        case Rec(motive, zcase, scase, scrut):
            check_type(theory, ctx, scrut, NatTy())
            check_is_type(theory, ctx_extend(ctx, NatTy()), motive)
            check_type(theory, ctx, zcase, substitute(motive, 0, Zero()))
            sctx = ctx_extend(ctx_extend(ctx, NatTy()), motive)
            # under (n : Nat, ih : motive(n)) the step must fit motive(S n)
            want = substitute(shift(motive, 2, 1), 0, Succ(Var(1)))
            check_type(theory, sctx, scase, want)
            return substitute(motive, 0, scrut)
        case RSig(motive, branch, scrut):
            s_ty = normalize(theory, ctx, infer_type(theory, ctx, scrut))
            if not isinstance(s_ty, Sigma):
                raise TypeCheckError("NotAPair", t, actual=s_ty)
            check_is_type(theory, ctx_extend(ctx, s_ty), motive)
            bctx = ctx_extend(ctx_extend(ctx, s_ty.domain), s_ty.codomain)
            pair = Pair(Var(1), Var(0), shift(s_ty, 2, 0))
            want = substitute(shift(motive, 2, 1), 0, pair)
            check_type(theory, bctx, branch, want)
            return substitute(motive, 0, scrut)
        case Pi(_, _) | Sigma(_, _) | Id(_, _, _) | NatTy() | BaseTy(_):
            raise TypeCheckError("Mismatch", t,
                                 detail="a type was used where a term is expected")
    raise TypeCheckError("Mismatch", t, detail="unrecognized term")


def _motive_ctx(ctx: Context, a_ty: Term) -> Context:
    """ctx extended by two endpoints and a proof between them."""
    c = ctx_extend(ctx, a_ty)
    c = ctx_extend(c, shift(a_ty, 1, 0))
    return ctx_extend(c, Id(shift(a_ty, 2, 0), Var(1), Var(0)))


def check_type(theory: Theory, ctx: Context, t: Term, ty: Term) -> None:
    actual = infer_type(theory, ctx, t)
    if not type_convertible(theory, ctx, actual, ty):
        raise TypeCheckError("Mismatch", t, expected=ty, actual=actual)


def checks(theory: Theory, ctx: Context, t: Term, ty: Term) -> bool:
    try:
        check_type(theory, ctx, t, ty)
        return True
    except TypeCheckError:
        return False


# --- conversion ----------------------------------------------------------

def type_convertible(theory: Theory, ctx: Context, ty1: Term, ty2: Term) -> bool:
    """Conversion of types: structural up to term conversion at Id endpoints."""
    n1 = normalize(theory, ctx, ty1)
    n2 = normalize(theory, ctx, ty2)
    if n1 == n2:
        return True
    match (n1, n2):
        case (Pi(d1, c1), Pi(d2, c2)) | (Sigma(d1, c1), Sigma(d2, c2)):
            return (type_convertible(theory, ctx, d1, d2)
                    and type_convertible(theory, ctx_extend(ctx, d1), c1, c2))
        case (Id(a1, l1, r1), Id(a2, l2, r2)):
            return (type_convertible(theory, ctx, a1, a2)
                    and convertible(theory, ctx, a1, l1, l2)
                    and convertible(theory, ctx, a1, r1, r2))
    return False


_CONV_MEMO: dict[tuple, bool] = {}


def convertible(theory: Theory, ctx: Context, ty: Term, t: Term, u: Term) -> bool:
    key = (theory, ctx, ty, t, u)
    hit = _CONV_MEMO.get(key)
    if hit is not None:
        return hit
    out = _convertible(theory, ctx, ty, t, u)
    if len(_CONV_MEMO) > 500_000:
        _CONV_MEMO.clear()
    _CONV_MEMO[key] = out
    return out


def _convertible(theory: Theory, ctx: Context, ty: Term, t: Term, u: Term) -> bool:
    """Definitional equality of two terms of type ``ty``, layered.

    Normal forms first; at identity types over the basic type the word
    problem in the free groupoid decides (complete there); identity
    proofs over Nat and iterated identity proofs are always identified;
    anything else is inequal. Open terms are decided over the extended
    graph obtained by reading a context of basic vertices and paths as
    fresh generators, when the context has that shape.
    """
    n_t = normalize(theory, ctx, t)
    n_u = normalize(theory, ctx, u)
    if n_t == n_u:
        return True
    n_ty = normalize(theory, ctx, ty)
    match n_ty:
        case Id(BaseTy(_), _, _):
            from . import model
            generic = generic_environment(theory, ctx)
            if generic is None:
                return False
            gtheory, genv = generic
            try:
                return model.eval_term(gtheory, genv, n_t) == \
                    model.eval_term(gtheory, genv, n_u)
            except model.EvalUnsupported:
                return False
        case Id(NatTy(), _, _):
            return True
        case Id(Id(_, _, _), _, _):
            return True
    try:
        return _congruent(theory, ctx, n_t, n_u)
    except (TypeCheckError, FuelExhausted):
        return False


def _congruent(theory: Theory, ctx: Context, t: Term, u: Term) -> bool:
    """Congruence closure of the conversion layers: same head, with
    components convertible at their types. This is how identifications
    made at identity types reach the terms built from them."""
    if t == u:
        return True
    if type(t) is not type(u):
        return False
    match (t, u):
        case (Succ(n1), Succ(n2)):
            return convertible(theory, ctx, NatTy(), n1, n2)
        case (App(f1, a1), App(f2, a2)):
            fn_ty = normalize(theory, ctx, infer_type(theory, ctx, f1))
            if not isinstance(fn_ty, Pi):
                return False
            return (_congruent(theory, ctx, f1, f2)
                    and convertible(theory, ctx, fn_ty.domain, a1, a2))
        case (Lam(d1, b1), Lam(d2, b2)):
            if not type_convertible(theory, ctx, d1, d2):
                return False
            bctx = ctx_extend(ctx, d1)
            b_ty = infer_type(theory, bctx, b1)
            return convertible(theory, bctx, b_ty, b1, b2)
        case (Pair(a1, b1, s1), Pair(a2, b2, s2)):
            if not type_convertible(theory, ctx, s1, s2):
                return False
            sig = normalize(theory, ctx, s1)
            if not isinstance(sig, Sigma):
                return False
            return (convertible(theory, ctx, sig.domain, a1, a2)
                    and convertible(theory, ctx,
                                    substitute(sig.codomain, 0, a1), b1, b2))
        case (Proj0(p1), Proj0(p2)) | (Proj1(p1), Proj1(p2)):
            return _congruent(theory, ctx, p1, p2)
        case (Refl(x1), Refl(x2)):
            a_ty = infer_type(theory, ctx, x1)
            return convertible(theory, ctx, a_ty, x1, x2)
        case (J(m1, b1, l1, r1, p1), J(m2, b2, l2, r2, p2)):
            a_ty = infer_type(theory, ctx, l1)
            if not type_convertible(theory, _motive_ctx(ctx, a_ty), m1, m2):
                return False
            bctx = ctx_extend(ctx, a_ty)
            want = instantiate(shift(m1, 1, 3), Var(0), Var(0), Refl(Var(0)))
            return (convertible(theory, bctx, want, b1, b2)
                    and convertible(theory, ctx, a_ty, l1, l2)
                    and convertible(theory, ctx, a_ty, r1, r2)
                    and convertible(theory, ctx, Id(a_ty, l1, r1), p1, p2))
        case (Rec(m1, z1, s1, n1), Rec(m2, z2, s2, n2)):
            nctx = ctx_extend(ctx, NatTy())
            if not type_convertible(theory, nctx, m1, m2):
                return False
            sctx = ctx_extend(nctx, m1)
            s_want = substitute(shift(m1, 2, 1), 0, Succ(Var(1)))
            return (convertible(theory, ctx, substitute(m1, 0, Zero()), z1, z2)
                    and convertible(theory, sctx, s_want, s1, s2)
                    and convertible(theory, ctx, NatTy(), n1, n2))
        case (RSig(m1, b1, s1), RSig(m2, b2, s2)):
            sig = normalize(theory, ctx, infer_type(theory, ctx, s1))
            if not isinstance(sig, Sigma):
                return False
            mctx = ctx_extend(ctx, sig)
            if not type_convertible(theory, mctx, m1, m2):
                return False
            bctx = ctx_extend(ctx_extend(ctx, sig.domain), sig.codomain)
            pair = Pair(Var(1), Var(0), shift(sig, 2, 0))
            want = substitute(shift(m1, 2, 1), 0, pair)
            return (convertible(theory, bctx, want, b1, b2)
                    and convertible(theory, ctx, sig, s1, s2))
    return False


def generic_environment(theory: Theory, ctx: Context):
    """Read a telescope of basic vertices and basic paths as a graph
    extension: fresh vertices for basic-type entries, fresh edges for
    paths between evaluable endpoints. Returns the extended theory and
    the generic environment, or None if the context has another shape.

    Terms over such a context are closed terms of the extended theory,
    so the word-problem layer stays sound and complete there.
    """
    from . import model
    if not ctx:
        return theory, ()
    vertices = list(theory.vertices)
    edges = dict(theory.edges)
    env: list = []
    current = theory
    taken = set(vertices) | set(edges)
    for k, entry in enumerate(ctx):
        n_entry = normalize(theory, ctx[:k], entry)
        match n_entry:
            case BaseTy(_):
                name = _fresh(f"v{k}'", taken)
                vertices.append(name)
                current = Theory(theory.name, tuple(vertices), dict(edges))
                env.append(model.VVertex(name))
            case Id(a_ty, lhs, rhs) if isinstance(normalize(theory, ctx, a_ty),
                                                  BaseTy):
                try:
                    vl = model.eval_term(current, tuple(env), lhs)
                    vr = model.eval_term(current, tuple(env), rhs)
                except model.EvalUnsupported:
                    return None
                if not (isinstance(vl, model.VVertex)
                        and isinstance(vr, model.VVertex)):
                    return None
                name = _fresh(f"e{k}'", taken)
                edges[name] = (vl.name, vr.name)
                current = Theory(theory.name, tuple(vertices), dict(edges))
                env.append(model.VWord(
                    ReducedWord(vl.name, vr.name, ((name, 1),))))
            case _:
                return None
    return current, tuple(env)


def _fresh(name: str, taken: set[str]) -> str:
    while name in taken:
        name += "'"
    taken.add(name)
    return name
