"""Reflexive directed graphs and their free groupoid of reduced words.

Letters are oriented edges; identity loops are never letters (they reduce
away eagerly), so equality of reduced words is plain structural equality.
The letter-level loops live in a compiled kernel when available, with a
pure-Python twin as fallback.
"""

from __future__ import annotations

from dataclasses import dataclass, field

try:  # compiled kernel, built by setup.py; fall back to the Python twin
    from . import _wordcore as _core  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover - depends on build environment
    from . import _wordcore_py as _core

WORD_BACKEND: str = _core.BACKEND


class GraphError(Exception):
    pass


class EndpointMismatch(GraphError):
    pass


class UnknownSymbol(GraphError):
    pass


@dataclass(frozen=True)
class Theory:
    """A named reflexive directed graph: vertices plus oriented edges.

    Identity loops are implicit, one per vertex; they are not edges.
    """

    name: str
    vertices: tuple[str, ...]
    edges: dict[str, tuple[str, str]] = field(default_factory=dict)

    def __post_init__(self):
        vs = set(self.vertices)
        for e, (s, t) in self.edges.items():
            if s not in vs or t not in vs:
                raise UnknownSymbol(f"edge {e} has undeclared endpoint")
            if e in vs:
                raise UnknownSymbol(f"name {e} used for both vertex and edge")
        object.__setattr__(self, "_edge_ids",
                           {e: i + 1 for i, e in enumerate(self.edges)})
        object.__setattr__(self, "_edge_names", tuple(self.edges))

    def edge_source(self, e: str) -> str:
        return self.edges[e][0]

    def edge_target(self, e: str) -> str:
        return self.edges[e][1]

    def has_vertex(self, v: str) -> bool:
        return v in set(self.vertices)

    def encode(self, letters) -> list[int]:
        ids = self._edge_ids
        return [ids[e] * o for e, o in letters]

    def decode(self, codes) -> tuple[tuple[str, int], ...]:
        names = self._edge_names
        return tuple((names[abs(c) - 1], 1 if c > 0 else -1) for c in codes)

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((self.name, self.vertices, tuple(self.edges.items())))
            object.__setattr__(self, "_h", h)
        return h

    def __eq__(self, other):
        return (isinstance(other, Theory) and self.name == other.name
                and self.vertices == other.vertices and self.edges == other.edges)


@dataclass(frozen=True)
class ReducedWord:
    """A cancellation-free path of oriented edges: an arrow of the free groupoid."""

    source: str
    target: str
    letters: tuple[tuple[str, int], ...]

    def is_identity(self) -> bool:
        return not self.letters

    def __len__(self):
        return len(self.letters)


def letter_endpoints(theory: Theory, letter: tuple[str, int]) -> tuple[str, str]:
    e, o = letter
    if e not in theory.edges:
        raise UnknownSymbol(f"unknown edge {e!r}")
    s, t = theory.edges[e]
    return (s, t) if o == 1 else (t, s)


def identity_word(vertex: str) -> ReducedWord:
    return ReducedWord(vertex, vertex, ())


def reduce(theory: Theory, source: str, raw) -> ReducedWord:
    """Cancel a raw oriented-edge sequence starting at ``source``."""
    at = source
    for letter in raw:
        s, t = letter_endpoints(theory, letter)
        if s != at:
            raise EndpointMismatch(f"letter {letter} starts at {s}, expected {at}")
        at = t
    codes = _core.cancel(theory.encode(raw))
    return ReducedWord(source, at, theory.decode(codes))


def compose(theory: Theory, w1: ReducedWord, w2: ReducedWord) -> ReducedWord:
    """Reduced concatenation; ``w1`` first, then ``w2``."""
    if w1.target != w2.source:
        raise EndpointMismatch(f"{w1.target} != {w2.source}")
    codes = _core.splice(theory.encode(w1.letters), theory.encode(w2.letters))
    return ReducedWord(w1.source, w2.target, theory.decode(codes))


def inverse(theory: Theory, w: ReducedWord) -> ReducedWord:
    return ReducedWord(w.target, w.source,
                       tuple((e, -o) for e, o in reversed(w.letters)))


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def components(theory: Theory) -> list[frozenset[str]]:
    """Partition of vertices by undirected reachability along edges."""
    uf = _UnionFind(theory.vertices)
    for s, t in theory.edges.values():
        uf.union(s, t)
    groups: dict[str, set[str]] = {}
    for v in theory.vertices:
        groups.setdefault(uf.find(v), set()).add(v)
    return sorted((frozenset(g) for g in groups.values()),
                  key=lambda g: sorted(g)[0])


def component_of(theory: Theory, vertex: str) -> frozenset[str]:
    for comp in components(theory):
        if vertex in comp:
            return comp
    raise UnknownSymbol(f"unknown vertex {vertex!r}")


def parse_word_expr(theory: Theory, text: str) -> ReducedWord:
    """CLI word expressions: "f . g" composes, "f^" inverts, "1@a" is the identity."""
    parts = [p.strip() for p in text.split(".")]
    if not parts or any(not p for p in parts):
        raise GraphError("empty word expression")
    word: ReducedWord | None = None
    for part in parts:
        inv = part.endswith("^")
        if inv:
            part = part[:-1].strip()
        if part.startswith("1@"):
            v = part[2:]
            if not theory.has_vertex(v):
                raise UnknownSymbol(f"unknown vertex {v!r}")
            w = identity_word(v)
        else:
            if part not in theory.edges:
                raise UnknownSymbol(f"unknown edge {part!r}")
            s, t = theory.edges[part]
            w = ReducedWord(s, t, ((part, 1),))
        if inv:
            w = inverse(theory, w)
        word = w if word is None else compose(theory, word, w)
    return word
