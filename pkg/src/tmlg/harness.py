"""Deterministic generators of random theories and well-typed closed terms.

Generation is derivation-directed: each target type has a menu of typing
rules, and picking one produces premises recursively, so every emitted
term checks. Randomness comes from counter-split streams, reproducible
across runs and workers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import jterms, kernel, model
from .graph import Theory, component_of, identity_word, reduce
from .syntax import (App, BaseEdge, BaseTy, BaseVertex, Id, Lam, NatTy, Pair,
                     Pi, Proj0, Proj1, Rec, Refl, Sigma, Succ, Term, Var,
                     Zero, shift)

MASK = (1 << 64) - 1


def _splitmix(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def child_seed(seed: int, *indices: int) -> int:
    s = seed & MASK
    for i in indices:
        s = _splitmix(s ^ _splitmix(i & MASK))
    return s


def stream(seed: int, *indices: int) -> random.Random:
    return random.Random(child_seed(seed, *indices))


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    fuel: int = 3
    max_vertices: int = 4
    max_edges: int = 5
    type_target: Term = field(default_factory=NatTy)

    def __post_init__(self):
        if self.fuel < 0 or self.max_vertices < 1:
            raise ValueError("fuel must be >= 0 and max_vertices >= 1")


class TargetUnrealizable(Exception):
    pass


def gen_theory(cfg: GenConfig) -> Theory:
    rng = stream(cfg.seed, 0)
    nv = rng.randint(1, cfg.max_vertices)
    vertices = tuple(f"v{i}" for i in range(nv))
    ne = rng.randint(0, cfg.max_edges)
    edges = {}
    for j in range(ne):
        edges[f"e{j}"] = (rng.choice(vertices), rng.choice(vertices))
    return Theory("G", vertices, edges)


def gen_term(theory: Theory, cfg: GenConfig) -> Term:
    rng = stream(cfg.seed, 1)
    return _gen(theory, rng, cfg.type_target, cfg.fuel)


def _vertices_in_component(theory: Theory, v: str) -> list[str]:
    comp = component_of(theory, v)
    return [x for x in theory.vertices if x in comp]


def _random_word(theory: Theory, rng: random.Random, src: str, tgt: str,
                 tries: int = 64):
    """A reduced word from src to tgt by random walk; None if unlucky."""
    out_edges: dict[str, list] = {}
    for e, (s, t) in theory.edges.items():
        out_edges.setdefault(s, []).append((e, 1, t))
        out_edges.setdefault(t, []).append((e, -1, s))
    for _ in range(tries):
        at = src
        letters = []
        for _ in range(rng.randint(0, 6)):
            options = out_edges.get(at)
            if not options:
                break
            e, o, nxt = rng.choice(options)
            letters.append((e, o))
            at = nxt
        if at == tgt:
            return reduce(theory, src, letters)
    return None


def _gen(theory: Theory, rng: random.Random, target: Term, fuel: int) -> Term:
    n_target = kernel.normalize(theory, (), target)
    match n_target:
        case BaseTy(_):
            return _gen_g(theory, rng, fuel)
        case NatTy():
            return _gen_nat(theory, rng, fuel)
        case Id(BaseTy(_), lhs, rhs):
            return _gen_path(theory, rng, lhs, rhs, fuel)
        case Id(NatTy(), lhs, rhs):
            vl = model.eval_term(theory, (), lhs)
            vr = model.eval_term(theory, (), rhs)
            if vl != vr:
                raise TargetUnrealizable("distinct naturals have no path")
            return Refl(lhs)
        case Pi(dom, cod):
            return _gen_fun(theory, rng, dom, cod, fuel)
        case Sigma(dom, cod):
            fst = _gen(theory, rng, dom, max(0, fuel - 1))
            from .syntax import substitute
            snd = _gen(theory, rng, substitute(cod, 0, fst),
                       max(0, fuel - 1))
            return Pair(fst, snd, n_target)
    raise TargetUnrealizable(f"no generator for target {n_target!r}")


def _loops_and_edges(theory: Theory):
    loops = [(e, s) for e, (s, t) in theory.edges.items() if s == t]
    return loops


def _gen_g(theory: Theory, rng: random.Random, fuel: int) -> Term:
    vertex = BaseVertex(rng.choice(theory.vertices))
    if fuel == 0:
        return vertex
    menu = ["vertex", "j", "j", "transport", "beta", "proj", "rec"]
    pick = rng.choice(menu)
    if pick == "vertex":
        return vertex
    if pick in ("j", "transport"):
        src = rng.choice(theory.vertices)
        tgts = _vertices_in_component(theory, src)
        tgt = rng.choice(tgts)
        try:
            path = _gen_path(theory, rng, BaseVertex(src), BaseVertex(tgt),
                             fuel - 1)
        except TargetUnrealizable:
            return vertex
        inner = _gen_g(theory, rng, fuel - 1)
        if pick == "j":
            base = Var(0) if rng.random() < 0.4 else shift(inner, 1, 0)
            from .syntax import J
            return J(BaseTy(theory.name), base, BaseVertex(src),
                     BaseVertex(tgt), path)
        return jterms.transport(theory, (), BaseTy(theory.name),
                                BaseVertex(src), BaseVertex(tgt), path,
                                inner)
    if pick == "beta":
        inner = _gen_g(theory, rng, fuel - 1)
        return App(Lam(BaseTy(theory.name), Var(0)), inner)
    if pick == "proj":
        g = BaseTy(theory.name)
        fst = _gen_g(theory, rng, fuel - 1)
        snd = _gen_nat(theory, rng, fuel - 1)
        return Proj0(Pair(fst, snd, Sigma(g, NatTy())))
    # rec with a constant basic-type motive
    g = BaseTy(theory.name)
    zc = _gen_g(theory, rng, fuel - 1)
    n = _gen_nat(theory, rng, fuel - 1)
    return Rec(shift(g, 1, 0), zc, Var(0), n)


def _gen_nat(theory: Theory, rng: random.Random, fuel: int) -> Term:
    if fuel == 0:
        return Zero()
    pick = rng.choice(["zero", "succ", "succ", "rec", "beta", "transport",
                       "proj"])
    if pick == "zero":
        return Zero()
    if pick == "succ":
        return Succ(_gen_nat(theory, rng, fuel - 1))
    if pick == "rec":
        zc = _gen_nat(theory, rng, fuel - 1)
        scrut = _gen_nat(theory, rng, fuel - 1)
        body = rng.choice([Succ(Var(0)), Var(0), Succ(Var(1))])
        return Rec(NatTy(), zc, body, scrut)
    if pick == "beta":
        inner = _gen_nat(theory, rng, fuel - 1)
        return App(Lam(NatTy(), Var(0)), inner)
    if pick == "transport":
        src = rng.choice(theory.vertices)
        tgts = _vertices_in_component(theory, src)
        tgt = rng.choice(tgts)
        try:
            path = _gen_path(theory, rng, BaseVertex(src), BaseVertex(tgt),
                             min(fuel - 1, 1))
        except TargetUnrealizable:
            return Succ(_gen_nat(theory, rng, fuel - 1))
        inner = _gen_nat(theory, rng, fuel - 1)
        return jterms.transport(theory, (), NatTy(), BaseVertex(src),
                                BaseVertex(tgt), path, inner)
    snd = _gen_nat(theory, rng, fuel - 1)
    fst = _gen_g(theory, rng, fuel - 1)
    return Proj1(Pair(fst, snd, Sigma(BaseTy(theory.name), NatTy())))


def _gen_path(theory: Theory, rng: random.Random, lhs: Term, rhs: Term,
              fuel: int) -> Term:
    """A closed identity proof between two basic-type terms."""
    g = BaseTy(theory.name)
    vl = model.eval_term(theory, (), lhs)
    vr = model.eval_term(theory, (), rhs)
    if not (isinstance(vl, model.VVertex) and isinstance(vr, model.VVertex)):
        raise TargetUnrealizable("endpoints must evaluate to vertices")
    word = _random_word(theory, rng, vl.name, vr.name)
    if word is None:
        if vl.name == vr.name:
            word = identity_word(vl.name)
        else:
            raise TargetUnrealizable(
                f"no path between {vl.name} and {vr.name}")
    base = _path_of_word(theory, rng, word, fuel)
    # endpoints are vertex literals here; decorate only between literals
    if lhs != BaseVertex(vl.name) or rhs != BaseVertex(vr.name):
        raise TargetUnrealizable("endpoints must be vertex literals")
    return base


def _path_of_word(theory: Theory, rng: random.Random, word, fuel: int) -> Term:
    g = BaseTy(theory.name)
    base = model.closure_term(theory, model.VWord(word))
    if fuel <= 0:
        return base
    pick = rng.choice(["plain", "plain", "cancel", "double_inv",
                       "refl_right", "transport"])
    if pick == "cancel" and theory.edges:
        e = rng.choice(list(theory.edges))
        loop = jterms.path_compose(
            theory, (), g, BaseEdge(e),
            jterms.path_inverse(theory, (), g, BaseEdge(e)))
        src = BaseVertex(theory.edges[e][0])
        start = jterms.path_compose(theory, (), g, loop,
                                    _path_of_word(theory, rng, word,
                                                  fuel - 1)) \
            if theory.edges[e][0] == word.source else base
        return start
    if pick == "double_inv":
        inner = _path_of_word(theory, rng, word, fuel - 1)
        return jterms.path_inverse(
            theory, (), g, jterms.path_inverse(theory, (), g, inner))
    if pick == "refl_right":
        inner = _path_of_word(theory, rng, word, fuel - 1)
        return jterms.path_compose(theory, (), g, inner,
                                   Refl(BaseVertex(word.target)))
    if pick == "transport":
        inner = _path_of_word(theory, rng, word, fuel - 1)
        fam = Id(shift(g, 1, 0), shift(BaseVertex(word.source), 1, 0),
                 Var(0))
        return jterms.transport(theory, (), fam, BaseVertex(word.target),
                                BaseVertex(word.target),
                                Refl(BaseVertex(word.target)), inner)
    return base


def _gen_fun(theory: Theory, rng: random.Random, dom: Term, cod: Term,
             fuel: int) -> Term:
    """A closed function; the body may use the argument when the types
    line up, otherwise it is a weakened closed term."""
    n_dom = kernel.normalize(theory, (), dom)
    n_cod = kernel.normalize(theory, (), cod)
    if n_cod == shift(n_dom, 1, 0) and rng.random() < 0.5:
        return Lam(dom, Var(0))
    if n_cod == NatTy() and n_dom == NatTy() and rng.random() < 0.5:
        return Lam(dom, Succ(Var(0)))
    from .syntax import substitute
    body = _gen(theory, rng, substitute(cod, 0, _dummy(theory, n_dom, rng)),
                max(0, fuel - 1))
    return Lam(dom, shift(body, 1, 0))


def _dummy(theory: Theory, ty: Term, rng: random.Random) -> Term:
    return _gen(theory, rng, ty, 0)


def nat_targets(theory: Theory) -> list[Term]:
    return [NatTy()]


def g_targets(theory: Theory) -> list[Term]:
    return [BaseTy(theory.name)]


def id_targets(theory: Theory, rng: random.Random, count: int) -> list[Term]:
    """Identity-type targets with valid endpoints."""
    out = []
    for _ in range(count * 4):
        if len(out) >= count:
            break
        src = rng.choice(theory.vertices)
        tgt = rng.choice(_vertices_in_component(theory, src))
        out.append(Id(BaseTy(theory.name), BaseVertex(src), BaseVertex(tgt)))
    return out


def pi_sigma_targets(theory: Theory, rng: random.Random,
                     count: int) -> list[Term]:
    g = BaseTy(theory.name)
    basics = [g, NatTy()]
    out = []
    for _ in range(count):
        a = rng.choice(basics)
        b = rng.choice(basics)
        if rng.random() < 0.5:
            out.append(Pi(a, shift(b, 1, 0)))
        else:
            out.append(Sigma(a, shift(b, 1, 0)))
    return out
