"""Nameless abstract syntax for the graph-generated type theory.

Types and terms share one sort. Bound variables are de Bruijn indices
(0 = innermost binder). Binder counts per constructor are recorded in
``BINDING`` and drive the generic traversals below.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable


class _Intern(type):
    """Hash-consing: structurally equal terms are one object, so deep
    equality short-circuits to identity almost everywhere."""

    _table: dict = {}

    def __call__(cls, *args, **kwargs):
        self = super().__call__(*args, **kwargs)
        table = _Intern._table
        hit = table.get(self)
        if hit is not None:
            return hit
        if len(table) > 2_000_000:
            table.clear()
        table[self] = self
        return self


@dataclass(frozen=True)
class Term(metaclass=_Intern):
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    index: int


@dataclass(frozen=True)
class Pi(Term):
    domain: Term
    codomain: Term  # binds 1


@dataclass(frozen=True)
class Lam(Term):
    domain: Term
    body: Term  # binds 1


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class Sigma(Term):
    domain: Term
    codomain: Term  # binds 1


@dataclass(frozen=True)
class Pair(Term):
    fst: Term
    snd: Term
    annot: Term  # the Sigma type of the pair


@dataclass(frozen=True)
class Proj0(Term):
    pair: Term


@dataclass(frozen=True)
class Proj1(Term):
    pair: Term


@dataclass(frozen=True)
class Id(Term):
    ty: Term
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Refl(Term):
    arg: Term


@dataclass(frozen=True)
class J(Term):
    motive: Term  # binds 3: endpoint, endpoint, proof
    base: Term    # binds 1
    lhs: Term
    rhs: Term
    path: Term


@dataclass(frozen=True)
class NatTy(Term):
    pass


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class Succ(Term):
    pred: Term


@dataclass(frozen=True)
class Rec(Term):
    motive: Term  # binds 1
    zcase: Term
    scase: Term   # binds 2: predecessor, recursive result
    scrut: Term


@dataclass(frozen=True)
class RSig(Term):
    motive: Term  # binds 1
    branch: Term  # binds 2: first, second component
    scrut: Term


@dataclass(frozen=True)
class BaseTy(Term):
    name: str


@dataclass(frozen=True)
class BaseVertex(Term):
    name: str


@dataclass(frozen=True)
class BaseEdge(Term):
    name: str


# field name -> number of binders the field's subterm sits under
BINDING: dict[type, tuple[tuple[str, int], ...]] = {
    Pi: (("domain", 0), ("codomain", 1)),
    Lam: (("domain", 0), ("body", 1)),
    App: (("fn", 0), ("arg", 0)),
    Sigma: (("domain", 0), ("codomain", 1)),
    Pair: (("fst", 0), ("snd", 0), ("annot", 0)),
    Proj0: (("pair", 0),),
    Proj1: (("pair", 0),),
    Id: (("ty", 0), ("lhs", 0), ("rhs", 0)),
    Refl: (("arg", 0),),
    J: (("motive", 3), ("base", 1), ("lhs", 0), ("rhs", 0), ("path", 0)),
    Succ: (("pred", 0),),
    Rec: (("motive", 1), ("zcase", 0), ("scase", 2), ("scrut", 0)),
    RSig: (("motive", 1), ("branch", 2), ("scrut", 0)),
}

LEAVES = (NatTy, Zero, BaseTy, BaseVertex, BaseEdge)

_FIELDS: dict[type, tuple[str, ...]] = {
    Var: ("index",),
    Pair: ("fst", "snd", "annot"),
    Id: ("ty", "lhs", "rhs"),
    J: ("motive", "base", "lhs", "rhs", "path"),
    Rec: ("motive", "zcase", "scase", "scrut"),
    RSig: ("motive", "branch", "scrut"),
    NatTy: (), Zero: (),
    BaseTy: ("name",), BaseVertex: ("name",), BaseEdge: ("name",),
    Pi: ("domain", "codomain"), Lam: ("domain", "body"),
    App: ("fn", "arg"), Sigma: ("domain", "codomain"),
    Proj0: ("pair",), Proj1: ("pair",), Refl: ("arg",), Succ: ("pred",),
}


def _cached_hash(self):
    h = self.__dict__.get("_h")
    if h is None:
        h = hash((type(self).__name__,)
                 + tuple(getattr(self, f) for f in _FIELDS[type(self)]))
        object.__setattr__(self, "_h", h)
    return h


def _fast_eq(self, other):
    if self is other:
        return True
    if type(self) is not type(other):
        return NotImplemented if not isinstance(other, Term) else False
    if _cached_hash(self) != _cached_hash(other):
        return False
    return all(getattr(self, f) == getattr(other, f)
               for f in _FIELDS[type(self)])


for _cls in _FIELDS:
    _cls.__hash__ = _cached_hash
    _cls.__eq__ = _fast_eq


def map_vars(t: Term, cutoff: int, on_var: Callable[[int, int], Term]) -> Term:
    """Rebuild ``t``, replacing each Var via ``on_var(index, cutoff)``.

    ``cutoff`` counts binders passed on the way down; ``on_var`` receives
    the adjusted cutoff at the variable's position.
    """
    if isinstance(t, Var):
        return on_var(t.index, cutoff)
    if isinstance(t, LEAVES):
        return t
    cls = type(t)
    changed = False
    parts = {}
    for name, binders in BINDING[cls]:
        sub = getattr(t, name)
        new = map_vars(sub, cutoff + binders, on_var)
        parts[name] = new
        changed = changed or new is not sub
    return cls(**parts) if changed else t


def max_free(t: Term) -> int:
    """Largest free index of ``t``, or -1; cached per node."""
    if isinstance(t, Var):
        return t.index
    if isinstance(t, LEAVES):
        return -1
    m = t.__dict__.get("_mf")
    if m is None:
        m = -1
        for name, binders in BINDING[type(t)]:
            child = max_free(getattr(t, name)) - binders
            if child > m:
                m = child
        object.__setattr__(t, "_mf", m)
    return m


_SHIFT_MEMO: dict[tuple, Term] = {}
_SUBST_MEMO: dict[tuple, Term] = {}


def shift(t: Term, amount: int, cutoff: int = 0) -> Term:
    """Add ``amount`` to every free index >= cutoff."""
    if amount == 0 or max_free(t) < cutoff:
        return t
    if isinstance(t, Var):
        return Var(t.index + amount) if t.index >= cutoff else t
    key = (t, amount, cutoff)
    hit = _SHIFT_MEMO.get(key)
    if hit is not None:
        return hit
    cls = type(t)
    parts = {}
    for name, binders in BINDING[cls]:
        parts[name] = shift(getattr(t, name), amount, cutoff + binders)
    out = cls(**parts)
    if len(_SHIFT_MEMO) > 500_000:
        _SHIFT_MEMO.clear()
    _SHIFT_MEMO[key] = out
    return out


def substitute(t: Term, target: int, s: Term) -> Term:
    """Replace Var(target) by ``s`` and close the gap left by its binder.

    Indices above ``target`` drop by one; ``s`` is shifted as the traversal
    passes under binders, so capture cannot occur.
    """
    if max_free(t) < target:
        return t
    if isinstance(t, Var):
        if t.index == target:
            return s
        if t.index > target:
            return Var(t.index - 1)
        return t
    key = (t, target, s)
    hit = _SUBST_MEMO.get(key)
    if hit is not None:
        return hit
    cls = type(t)
    parts = {}
    for name, binders in BINDING[cls]:
        parts[name] = substitute(getattr(t, name), target + binders,
                                 shift(s, binders, 0))
    out = cls(**parts)
    if len(_SUBST_MEMO) > 500_000:
        _SUBST_MEMO.clear()
    _SUBST_MEMO[key] = out
    return out


def subst_free(t: Term, fn: Callable[[int], Term]) -> Term:
    """Simultaneously replace every free index j by ``fn(j)``.

    ``fn`` answers relative to the outermost level; results are shifted
    under binders.  Used for the index permutations of the derived-term
    builders.
    """

    def on_var(i, c):
        if i >= c:
            return shift(fn(i - c), c, 0)
        return Var(i)

    return map_vars(t, 0, on_var)


def instantiate(body: Term, *args: Term) -> Term:
    """Substitute a binder block at once.

    ``body`` sits under ``len(args)`` binders, args[0] outermost. All args
    live at the ambient level of the result.
    """
    n = len(args)
    t = body
    for i, arg in enumerate(args):
        k = n - 1 - i
        t = substitute(t, k, shift(arg, k, 0))
    return t


def free_indices(t: Term) -> set[int]:
    """Free de Bruijn indices of ``t`` (relative to its own level)."""
    out: set[int] = set()

    def walk(u: Term, c: int) -> None:
        if isinstance(u, Var):
            if u.index >= c:
                out.add(u.index - c)
            return
        if isinstance(u, LEAVES):
            return
        for name, binders in BINDING[type(u)]:
            walk(getattr(u, name), c + binders)

    walk(t, 0)
    return out


def is_closed(t: Term) -> bool:
    return not free_indices(t)


Context = tuple[Term, ...]


def ctx_extend(ctx: Context, ty: Term) -> Context:
    return ctx + (ty,)


def ctx_lookup(ctx: Context, index: int) -> Term:
    """Type of Var(index), shifted to the full context's level."""
    entry = ctx[len(ctx) - 1 - index]
    return shift(entry, index + 1, 0)


def subterms(t: Term):
    """Iterate over t and all subterms, preorder."""
    yield t
    if isinstance(t, (Var, *LEAVES)):
        return
    for name, _ in BINDING[type(t)]:
        yield from subterms(getattr(t, name))
