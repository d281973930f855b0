"""Concrete syntax: line-oriented theory files and s-expression terms.

Comments run from ``--`` to end of line. The printer generates fresh
binder names ``x0, x1, ...`` by depth, so printing then parsing is the
identity on well-scoped terms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .graph import Theory
from . import syntax as S


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int

    def __str__(self):
        return f"{self.file}:{self.line}:{self.column}"


class ParseError(Exception):
    def __init__(self, span: SourceSpan, message: str):
        super().__init__(f"{span}: {message}")
        self.span = span
        self.message = message


class DuplicateNameError(ParseError):
    pass


class UnknownEndpointError(ParseError):
    pass


class UnboundNameError(ParseError):
    pass


IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*$")

KEYWORDS = {"Pi", "Sigma", "Id", "Nat", "lam", "app", "pair", "p0", "p1",
            "refl", "J", "Rsig", "rec", "z", "s"}


def _strip_comment(line: str) -> str:
    i = line.find("--")
    return line if i < 0 else line[:i]


def parse_theory(text: str, filename: str = "<theory>") -> Theory:
    name: str | None = None
    vertices: list[str] = []
    edges: dict[str, tuple[str, str]] = {}
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        span = SourceSpan(filename, lineno, 1)
        words = line.split()
        if words[0] == "theory":
            if name is not None:
                raise ParseError(span, "duplicate theory header")
            if len(words) != 2 or not IDENT.match(words[1]):
                raise ParseError(span, "expected: theory NAME")
            name = words[1]
        elif words[0] == "vertex":
            if len(words) != 2 or not IDENT.match(words[1]):
                raise ParseError(span, "expected: vertex IDENT")
            if words[1] in seen:
                raise DuplicateNameError(span, f"duplicate name {words[1]!r}")
            seen.add(words[1])
            vertices.append(words[1])
        elif words[0] == "edge":
            m = re.match(r"edge\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$", line)
            if not m or not all(IDENT.match(g) for g in m.groups()):
                raise ParseError(span, "expected: edge IDENT : IDENT -> IDENT")
            e, s, t = m.groups()
            if e in seen:
                raise DuplicateNameError(span, f"duplicate name {e!r}")
            if s not in vertices or t not in vertices:
                raise UnknownEndpointError(span, f"edge {e!r} uses undeclared vertex")
            seen.add(e)
            edges[e] = (s, t)
        else:
            raise ParseError(span, f"unrecognized declaration {words[0]!r}")
    if name is None:
        raise ParseError(SourceSpan(filename, 1, 1), "missing theory header")
    return Theory(name, tuple(vertices), edges)


# --- s-expression reader -------------------------------------------------

@dataclass(frozen=True)
class _Sym:
    text: str
    span: SourceSpan


def _tokenize(text: str, filename: str):
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "-" and text[i:i + 2] == "--":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            col += 1
            i += 1
            continue
        if c in "()":
            yield (c, SourceSpan(filename, line, col))
            col += 1
            i += 1
            continue
        start = i
        startcol = col
        while i < n and not text[i].isspace() and text[i] not in "()":
            i += 1
            col += 1
        yield (text[start:i], SourceSpan(filename, line, startcol))


def _read_from(first, tokens):
    tok, span = first
    if tok == "(":
        items = []
        while True:
            try:
                peeked = next(tokens)
            except StopIteration:
                raise ParseError(span, "unclosed parenthesis") from None
            if peeked[0] == ")":
                return items
            items.append(_read_from(peeked, tokens))
    if tok == ")":
        raise ParseError(span, "unbalanced ')'")
    return _Sym(tok, span)


def _read_sexpr(text: str, filename: str):
    tokens = _tokenize(text, filename)
    first = next(tokens, None)
    if first is None:
        raise ParseError(SourceSpan(filename, 1, 1), "no term in input")
    expr = _read_from(first, tokens)
    leftover = next(tokens, None)
    if leftover is not None:
        raise ParseError(leftover[1], "trailing input after term")
    return expr


# --- term parsing --------------------------------------------------------

def _expect_binder(expr, count: int, span: SourceSpan) -> list[str]:
    if not isinstance(expr, list) or len(expr) != count or \
            not all(isinstance(x, _Sym) for x in expr):
        raise ParseError(span, f"expected a list of {count} binder names")
    names = [x.text for x in expr]
    for nm in names:
        if not IDENT.match(nm):
            raise ParseError(span, f"bad binder name {nm!r}")
    return names


def _span_of(expr) -> SourceSpan:
    if isinstance(expr, _Sym):
        return expr.span
    for item in expr:
        return _span_of(item)
    return SourceSpan("<term>", 1, 1)


def parse_term(text: str, theory: Theory, filename: str = "<term>") -> S.Term:
    expr = _read_sexpr(text, filename)
    return _convert(expr, theory, [])


def _convert(expr, theory: Theory, scope: list[str]) -> S.Term:
    if isinstance(expr, _Sym):
        return _atom(expr, theory, scope)
    span = _span_of(expr)
    if not expr:
        raise ParseError(span, "empty expression")
    head = expr[0]
    if not isinstance(head, _Sym):
        raise ParseError(span, "expected a keyword head")
    kw = head.text
    args = expr[1:]

    def need(n):
        if len(args) != n:
            raise ParseError(head.span, f"{kw} expects {n} arguments, got {len(args)}")

    def binder(expr_pair, count):
        # ((x ... ) body)
        if not isinstance(expr_pair, list) or len(expr_pair) != 2:
            raise ParseError(head.span, f"{kw} expects ((names...) body)")
        names = _expect_binder(expr_pair[0], count, head.span)
        body = _convert(expr_pair[1], theory, scope + names)
        return body

    if kw == "Pi" or kw == "Sigma":
        need(2)
        if not isinstance(args[0], list) or len(args[0]) != 2 or \
                not isinstance(args[0][0], _Sym):
            raise ParseError(head.span, f"{kw} expects (name DOMAIN) CODOMAIN")
        name = _expect_binder([args[0][0]], 1, head.span)[0]
        dom = _convert(args[0][1], theory, scope)
        cod = _convert(args[1], theory, scope + [name])
        return (S.Pi if kw == "Pi" else S.Sigma)(dom, cod)
    if kw == "lam":
        need(2)
        if not isinstance(args[0], list) or len(args[0]) != 2 or \
                not isinstance(args[0][0], _Sym):
            raise ParseError(head.span, "lam expects (name DOMAIN) BODY")
        name = _expect_binder([args[0][0]], 1, head.span)[0]
        dom = _convert(args[0][1], theory, scope)
        body = _convert(args[1], theory, scope + [name])
        return S.Lam(dom, body)
    if kw == "app":
        need(2)
        return S.App(_convert(args[0], theory, scope), _convert(args[1], theory, scope))
    if kw == "pair":
        need(3)
        return S.Pair(_convert(args[0], theory, scope),
                      _convert(args[1], theory, scope),
                      _convert(args[2], theory, scope))
    if kw == "p0":
        need(1)
        return S.Proj0(_convert(args[0], theory, scope))
    if kw == "p1":
        need(1)
        return S.Proj1(_convert(args[0], theory, scope))
    if kw == "Id":
        need(3)
        return S.Id(_convert(args[0], theory, scope),
                    _convert(args[1], theory, scope),
                    _convert(args[2], theory, scope))
    if kw == "refl":
        need(1)
        return S.Refl(_convert(args[0], theory, scope))
    if kw == "J":
        need(5)
        motive = binder(args[0], 3)
        base = binder(args[1], 1)
        return S.J(motive, base,
                   _convert(args[2], theory, scope),
                   _convert(args[3], theory, scope),
                   _convert(args[4], theory, scope))
    if kw == "rec":
        need(4)
        motive = binder(args[0], 1)
        zcase = _convert(args[1], theory, scope)
        scase = binder(args[2], 2)
        scrut = _convert(args[3], theory, scope)
        return S.Rec(motive, zcase, scase, scrut)
    if kw == "Rsig":
        need(3)
        motive = binder(args[0], 1)
        branch = binder(args[1], 2)
        scrut = _convert(args[2], theory, scope)
        return S.RSig(motive, branch, scrut)
    if kw == "s":
        need(1)
        return S.Succ(_convert(args[0], theory, scope))
    raise ParseError(head.span, f"unknown keyword {kw!r}")


def _atom(sym: _Sym, theory: Theory, scope: list[str]) -> S.Term:
    text = sym.text
    # binders shadow everything, including the atomic keywords
    for depth, name in enumerate(reversed(scope)):
        if name == text:
            return S.Var(depth)
    if text == "Nat":
        return S.NatTy()
    if text == "z":
        return S.Zero()
    if text.startswith("'"):
        name = text[1:]
        if name.startswith("1_"):
            v = name[2:]
            if not theory.has_vertex(v):
                raise UnboundNameError(sym.span, f"unknown vertex {v!r} in {text!r}")
            # identity loops are refl on the vertex, not edges
            return S.Refl(S.BaseVertex(v))
        if theory.has_vertex(name):
            return S.BaseVertex(name)
        if name in theory.edges:
            return S.BaseEdge(name)
        raise UnboundNameError(sym.span, f"unknown graph symbol {name!r}")
    if not IDENT.match(text):
        raise ParseError(sym.span, f"bad token {text!r}")
    if text == "G" or text == theory.name:
        return S.BaseTy(theory.name)
    raise UnboundNameError(sym.span, f"unbound name {text!r}")


# --- printing ------------------------------------------------------------

def print_term(t: S.Term) -> str:
    return _print(t, 0)


def _name(depth: int) -> str:
    return f"x{depth}"


def _print(t: S.Term, depth: int) -> str:
    match t:
        case S.Var(i):
            return _name(depth - 1 - i)
        case S.Pi(dom, cod):
            return f"(Pi ({_name(depth)} {_print(dom, depth)}) {_print(cod, depth + 1)})"
        case S.Sigma(dom, cod):
            return f"(Sigma ({_name(depth)} {_print(dom, depth)}) {_print(cod, depth + 1)})"
        case S.Lam(dom, body):
            return f"(lam ({_name(depth)} {_print(dom, depth)}) {_print(body, depth + 1)})"
        case S.App(fn, arg):
            return f"(app {_print(fn, depth)} {_print(arg, depth)})"
        case S.Pair(a, b, annot):
            return f"(pair {_print(a, depth)} {_print(b, depth)} {_print(annot, depth)})"
        case S.Proj0(p):
            return f"(p0 {_print(p, depth)})"
        case S.Proj1(p):
            return f"(p1 {_print(p, depth)})"
        case S.Id(ty, lhs, rhs):
            return f"(Id {_print(ty, depth)} {_print(lhs, depth)} {_print(rhs, depth)})"
        case S.Refl(a):
            return f"(refl {_print(a, depth)})"
        case S.J(motive, base, lhs, rhs, path):
            names = f"({_name(depth)} {_name(depth + 1)} {_name(depth + 2)})"
            mot = f"({names} {_print(motive, depth + 3)})"
            bas = f"(({_name(depth)}) {_print(base, depth + 1)})"
            return (f"(J {mot} {bas} {_print(lhs, depth)} "
                    f"{_print(rhs, depth)} {_print(path, depth)})")
        case S.NatTy():
            return "Nat"
        case S.Zero():
            return "z"
        case S.Succ(n):
            return f"(s {_print(n, depth)})"
        case S.Rec(motive, zcase, scase, scrut):
            mot = f"(({_name(depth)}) {_print(motive, depth + 1)})"
            sc = f"(({_name(depth)} {_name(depth + 1)}) {_print(scase, depth + 2)})"
            return f"(rec {mot} {_print(zcase, depth)} {sc} {_print(scrut, depth)})"
        case S.RSig(motive, branch, scrut):
            mot = f"(({_name(depth)}) {_print(motive, depth + 1)})"
            br = f"(({_name(depth)} {_name(depth + 1)}) {_print(branch, depth + 2)})"
            return f"(Rsig {mot} {br} {_print(scrut, depth)})"
        case S.BaseTy(_):
            return "G"
        case S.BaseVertex(name):
            return f"'{name}"
        case S.BaseEdge(name):
            return f"'{name}"
    raise TypeError(f"unprintable term {t!r}")
