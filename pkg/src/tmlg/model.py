"""Evaluation into the groupoid model over the free groupoid.

Closed terms denote values; identity proofs denote path values: reduced
words over the basic type, a trivial marker at discrete fibres (Nat and
iterated identity types), and structural maps at function and pair
types. Terms also act on arrows of the context groupoid (``sem_action``),
and type families push values forward along such arrows (``act``); the
eliminator for identity types evaluates through that action.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import graph, kernel
from .graph import ReducedWord, Theory
from . import syntax as S
from .syntax import (App, BaseEdge, BaseTy, BaseVertex, Id, J, Lam, NatTy,
                     Pair, Pi, Proj0, Proj1, Rec, Refl, RSig, Sigma, Succ,
                     Term, Var, Zero)


class EvalUnsupported(Exception):
    """The term or family falls outside the evaluable fragment."""


class NotANumber(Exception):
    pass


class NotAGroupoidValue(Exception):
    pass


@dataclass(frozen=True)
class Value:
    __slots__ = ()


@dataclass(frozen=True)
class VVertex(Value):
    name: str


@dataclass(frozen=True)
class VWord(Value):
    word: ReducedWord


@dataclass(frozen=True)
class VNum(Value):
    n: int


@dataclass(frozen=True)
class VTriv(Value):
    """The unique path value at a discrete fibre."""


@dataclass(frozen=True)
class VPair(Value):
    fst: Value
    snd: Value


@dataclass(frozen=True, eq=False)
class VFun(Value):
    """A function value: object map plus action on domain paths."""
    apply: Callable[[Value], Value]
    apply_path: Callable[[Value, Value, Value], Value]


Env = tuple[Value, ...]


def idpath(v: Value) -> Value:
    match v:
        case VVertex(a):
            return VWord(graph.identity_word(a))
        case VNum(_) | VWord(_) | VTriv():
            return VTriv()
        case VPair(a, b):
            return VPair(idpath(a), idpath(b))
        case VFun(apply, _):
            return VFun(lambda u: idpath(apply(u)),
                        lambda us, ut, p: idpath(idpath(apply(ut))))
    raise EvalUnsupported(f"no identity path on {v!r}")


def compose_path(theory: Theory, p: Value, q: Value) -> Value:
    match (p, q):
        case (VWord(w1), VWord(w2)):
            return VWord(graph.compose(theory, w1, w2))
        case (VTriv(), VTriv()):
            return VTriv()
        case (VPair(a1, b1), VPair(a2, b2)):
            return VPair(compose_path(theory, a1, a2),
                         compose_path(theory, b1, b2))
        case (VFun(ap1, _), VFun(ap2, _)):
            return VFun(lambda u: compose_path(theory, ap1(u), ap2(u)),
                        lambda us, ut, pp: VTriv())
    raise EvalUnsupported(f"cannot compose paths {p!r} and {q!r}")


def inverse_path(theory: Theory, p: Value) -> Value:
    match p:
        case VWord(w):
            return VWord(graph.inverse(theory, w))
        case VTriv():
            return VTriv()
        case VPair(a, b):
            return VPair(inverse_path(theory, a), inverse_path(theory, b))
        case VFun(ap, _):
            return VFun(lambda u: inverse_path(theory, ap(u)),
                        lambda us, ut, pp: VTriv())
    raise EvalUnsupported(f"cannot invert path {p!r}")


def identity_arrow(env: Env) -> tuple[Value, ...]:
    return tuple(idpath(v) for v in env)


_EVAL_MEMO: dict[tuple, Value] = {}


def eval_term(theory: Theory, env: Env, t: Term) -> Value:
    if not env:
        key = (theory, t)
        hit = _EVAL_MEMO.get(key)
        if hit is not None:
            return hit
        out = _eval(theory, (), t)
        if len(_EVAL_MEMO) > 500_000:
            _EVAL_MEMO.clear()
        _EVAL_MEMO[key] = out
        return out
    return _eval(theory, env, t)


def _eval(theory: Theory, env: Env, t: Term) -> Value:
    match t:
        case Var(i):
            if i >= len(env):
                raise EvalUnsupported(f"open term: Var({i})")
            return env[len(env) - 1 - i]
        case BaseVertex(a):
            return VVertex(a)
        case BaseEdge(e):
            s, tt = theory.edges[e]
            return VWord(ReducedWord(s, tt, ((e, 1),)))
        case Zero():
            return VNum(0)
        case Succ(n):
            v = eval_term(theory, env, n)
            if not isinstance(v, VNum):
                raise EvalUnsupported("successor of a non-number")
            return VNum(v.n + 1)
        case Refl(u):
            return idpath(eval_term(theory, env, u))
        case Pair(a, b, _):
            return VPair(eval_term(theory, env, a), eval_term(theory, env, b))
        case Proj0(p):
            v = eval_term(theory, env, p)
            if not isinstance(v, VPair):
                raise EvalUnsupported("first projection of a non-pair")
            return v.fst
        case Proj1(p):
            v = eval_term(theory, env, p)
            if not isinstance(v, VPair):
                raise EvalUnsupported("second projection of a non-pair")
            return v.snd
        case Lam(_, body):
            def apply(u: Value, env=env, body=body) -> Value:
                return eval_term(theory, env + (u,), body)

            def apply_path(us: Value, ut: Value, p: Value,
                           env=env, body=body) -> Value:
                return sem_action(theory, env + (us,), env + (ut,),
                                  identity_arrow(env) + (p,), body)

            return VFun(apply, apply_path)
        case App(fn, arg):
            f = eval_term(theory, env, fn)
            if not isinstance(f, VFun):
                raise EvalUnsupported("application of a non-function")
            return f.apply(eval_term(theory, env, arg))
        case Rec(_, zcase, scase, scrut):
            v = eval_term(theory, env, scrut)
            if not isinstance(v, VNum):
                raise EvalUnsupported("recursion on a non-number")
            acc = eval_term(theory, env, zcase)
            for k in range(v.n):
                acc = eval_term(theory, env + (VNum(k), acc), scase)
            return acc
        case RSig(_, branch, scrut):
            v = eval_term(theory, env, scrut)
            if not isinstance(v, VPair):
                raise EvalUnsupported("pair recursion on a non-pair")
            return eval_term(theory, env + (v.fst, v.snd), branch)
        case J(motive, base, lhs, rhs, path):
            va = eval_term(theory, env, lhs)
            vb = eval_term(theory, env, rhs)
            pf = eval_term(theory, env, path)
            u = eval_term(theory, env + (va,), base)
            env_s = env + (va, va, idpath(va))
            env_t = env + (va, vb, pf)
            arrow = identity_arrow(env) + (idpath(va), pf, VTriv())
            return act(theory, motive, env_s, env_t, arrow, u)
    raise EvalUnsupported(f"cannot evaluate {type(t).__name__}")


def act(theory: Theory, ty: Term, env_s: Env, env_t: Env,
        arrow: tuple[Value, ...], v: Value) -> Value:
    """Push ``v`` forward along an arrow of the context groupoid, in the
    family ``ty`` (a type over the arrow's context)."""
    n_ty = kernel.normalize(theory, (), ty)
    match n_ty:
        case BaseTy(_) | NatTy():
            return v
        case Id(_, lhs, rhs):
            ws = sem_action(theory, env_s, env_t, arrow, lhs)
            wt = sem_action(theory, env_s, env_t, arrow, rhs)
            return compose_path(theory,
                                compose_path(theory, inverse_path(theory, ws), v),
                                wt)
        case Pi(dom, cod):
            if not isinstance(v, VFun):
                raise EvalUnsupported("function family over a non-function")
            inv_arrow = tuple(inverse_path(theory, p) for p in arrow)

            def apply(u: Value, dom=dom, cod=cod) -> Value:
                u_back = act(theory, dom, env_t, env_s, inv_arrow, u)
                return act(theory, cod, env_s + (u_back,), env_t + (u,),
                           arrow + (idpath(u),), v.apply(u_back))

            def apply_path(us: Value, ut: Value, p: Value,
                           dom=dom, cod=cod) -> Value:
                us_b = act(theory, dom, env_t, env_s, inv_arrow, us)
                ut_b = act(theory, dom, env_t, env_s, inv_arrow, ut)
                return v.apply_path(us_b, ut_b, p)

            return VFun(apply, apply_path)
        case Sigma(dom, cod):
            if not isinstance(v, VPair):
                raise EvalUnsupported("pair family over a non-pair")
            v0 = act(theory, dom, env_s, env_t, arrow, v.fst)
            v1 = act(theory, cod, env_s + (v.fst,), env_t + (v0,),
                     arrow + (idpath(v0),), v.snd)
            return VPair(v0, v1)
    raise EvalUnsupported(f"no action for family {type(n_ty).__name__}")


def sem_action(theory: Theory, env_s: Env, env_t: Env,
               arrow: tuple[Value, ...], t: Term) -> Value:
    """The image of a context arrow under the section denoted by ``t``:
    a path value from the source evaluation to the target evaluation."""
    match t:
        case Var(i):
            return arrow[len(arrow) - 1 - i]
        case BaseVertex(a):
            return VWord(graph.identity_word(a))
        case BaseEdge(_) | Zero() | Succ(_) | Refl(_):
            return VTriv()
        case Pair(a, b, _):
            return VPair(sem_action(theory, env_s, env_t, arrow, a),
                         sem_action(theory, env_s, env_t, arrow, b))
        case Proj0(p):
            q = sem_action(theory, env_s, env_t, arrow, p)
            if not isinstance(q, VPair):
                raise EvalUnsupported("projection action on a non-pair path")
            return q.fst
        case Proj1(p):
            q = sem_action(theory, env_s, env_t, arrow, p)
            if not isinstance(q, VPair):
                raise EvalUnsupported("projection action on a non-pair path")
            return q.snd
        case Lam(_, body):
            def component(u: Value, body=body) -> Value:
                return sem_action(theory, env_s + (u,), env_t + (u,),
                                  arrow + (idpath(u),), body)

            return VFun(component, lambda us, ut, p: VTriv())
        case App(fn, arg):
            pf = sem_action(theory, env_s, env_t, arrow, fn)
            pu = sem_action(theory, env_s, env_t, arrow, arg)
            if not isinstance(pf, VFun):
                raise EvalUnsupported("application action on a non-function")
            g_s = eval_term(theory, env_s, fn)
            u_s = eval_term(theory, env_s, arg)
            u_t = eval_term(theory, env_t, arg)
            if not isinstance(g_s, VFun):
                raise EvalUnsupported("application of a non-function")
            first = g_s.apply_path(u_s, u_t, pu)
            return compose_path(theory, first, pf.apply(u_t))
        case Rec(_, zcase, scase, scrut):
            v = eval_term(theory, env_s, scrut)
            if not isinstance(v, VNum):
                raise EvalUnsupported("recursion on a non-number")
            path = sem_action(theory, env_s, env_t, arrow, zcase)
            acc_s = eval_term(theory, env_s, zcase)
            acc_t = eval_term(theory, env_t, zcase)
            for k in range(v.n):
                path = sem_action(theory, env_s + (VNum(k), acc_s),
                                  env_t + (VNum(k), acc_t),
                                  arrow + (VTriv(), path), scase)
                acc_s = eval_term(theory, env_s + (VNum(k), acc_s), scase)
                acc_t = eval_term(theory, env_t + (VNum(k), acc_t), scase)
            return path
        case RSig(_, branch, scrut):
            v_s = eval_term(theory, env_s, scrut)
            v_t = eval_term(theory, env_t, scrut)
            pp = sem_action(theory, env_s, env_t, arrow, scrut)
            if not (isinstance(v_s, VPair) and isinstance(v_t, VPair)
                    and isinstance(pp, VPair)):
                raise EvalUnsupported("pair recursion action on a non-pair")
            return sem_action(theory, env_s + (v_s.fst, v_s.snd),
                              env_t + (v_t.fst, v_t.snd),
                              arrow + (pp.fst, pp.snd), branch)
        case J(_, base, lhs, _, _):
            va_s = eval_term(theory, env_s, lhs)
            va_t = eval_term(theory, env_t, lhs)
            pa = sem_action(theory, env_s, env_t, arrow, lhs)
            return sem_action(theory, env_s + (va_s,), env_t + (va_t,),
                              arrow + (pa,), base)
    raise EvalUnsupported(f"no action for {type(t).__name__}")


# --- numerals and closure ----------------------------------------------------

def numeral_of(v: Value) -> Term:
    if not isinstance(v, VNum):
        raise NotANumber(f"{v!r} is not a numeral value")
    t: Term = Zero()
    for _ in range(v.n):
        t = Succ(t)
    return t


def numeral(n: int) -> Term:
    t: Term = Zero()
    for _ in range(n):
        t = Succ(t)
    return t


def closure_term(theory: Theory, v: Value) -> Term:
    """The canonical basic term or composite of basic edges denoting ``v``."""
    from . import jterms
    match v:
        case VVertex(a):
            return BaseVertex(a)
        case VWord(w):
            if not w.letters:
                return Refl(BaseVertex(w.source))
            t = _letter_term(theory, w.letters[0])
            for letter in w.letters[1:]:
                t = jterms.path_compose(theory, (), BaseTy(theory.name), t,
                                        _letter_term(theory, letter))
            return t
    raise NotAGroupoidValue(f"{v!r} is not a vertex or word value")


def _letter_term(theory: Theory, letter: tuple[str, int]) -> Term:
    from . import jterms
    e, o = letter
    t: Term = BaseEdge(e)
    if o == -1:
        t = jterms.path_inverse(theory, (), BaseTy(theory.name), t)
    return t
