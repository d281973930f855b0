"""The headline results as executable checks: density of realizer paths,
the deformation retraction onto basic terms, canonicity of closed
naturals, preservation of connected components, and the equivalence
between the syntactic groupoid and the free groupoid."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from . import harness, jterms, kernel, model, realizability as rz
from .graph import Theory, component_of, components
from .harness import GenConfig, stream
from .syntax import BaseTy, BaseVertex, Id, NatTy, Refl, Term


@dataclass
class Report:
    kind: str  # retract | canon | pi0 | equivalence
    verdict: bool
    samples: int = 0
    failures: int = 0
    millis: int = 0
    inputs: str = ""
    counterexample: dict | None = None

    def __post_init__(self):
        if not self.verdict and self.counterexample is None:
            self.counterexample = {"note": "failure without witness"}

    def to_json(self) -> str:
        payload = {
            "kind": self.kind,
            "verdict": "pass" if self.verdict else "fail",
            "stats": {"samples": self.samples, "failures": self.failures,
                      "millis": self.millis},
        }
        if self.counterexample is not None:
            payload["counterexample"] = self.counterexample
        return json.dumps(payload, sort_keys=True)


def is_dense(theory: Theory, f: Term) -> bool:
    """A closed identity proof is dense when its word is empty."""
    v = model.eval_term(theory, (), f)
    return isinstance(v, model.VWord) and not v.word.letters


def alpha_component(theory: Theory, t: Term) -> Term:
    """The distinguished dense path from a closed basic-type term to its
    closure, extracted from its realizer."""
    r = rz.realize(theory, (), (), t, BaseTy(theory.name))
    if not isinstance(r, rz.RBase):
        raise rz.RealizeUnsupported("expected a dense-path realizer")
    return r.path


def naturality_check(theory: Theory, f: Term, t: Term, s: Term) -> bool:
    """The retraction square: following the path then the closure agrees
    with closing first and following the target's path."""
    g = BaseTy(theory.name)
    alpha_t = alpha_component(theory, t)
    alpha_s = alpha_component(theory, s)
    f_bar = model.closure_term(theory, model.eval_term(theory, (), f))
    lhs = jterms.path_compose(theory, (), g, alpha_t, f_bar)
    rhs = jterms.path_compose(theory, (), g, f, alpha_s)
    s_bar = model.closure_term(theory, model.eval_term(theory, (), s))
    ty = Id(g, t, s_bar)
    return kernel.convertible(theory, (), ty, lhs, rhs)


def canon_nat(theory: Theory, t: Term) -> tuple[Term, Term]:
    """Every closed natural is a numeral, witnessed by a checked proof."""
    numeral = model.numeral_of(model.eval_term(theory, (), t))
    r = rz.realize(theory, (), (), t, NatTy())
    if not isinstance(r, rz.RNat):
        raise rz.RealizeUnsupported("expected a numeral realizer")
    if model.numeral(r.n) != numeral:
        raise AssertionError("realizer numeral disagrees with evaluation")
    kernel.check_type(theory, (), r.proof, Id(NatTy(), t, numeral))
    return numeral, r.proof


def pi0_report(theory: Theory, samples: list[Term]) -> Report:
    """Connected components of closed basic-type terms match the graph's."""
    start = time.monotonic()
    failures = 0
    counterexample = None
    hit_components = set()
    for t in samples:
        try:
            v = model.eval_term(theory, (), t)
            path = alpha_component(theory, t)
            target = model.eval_term(theory, (), path)
            ok = (isinstance(v, model.VVertex)
                  and isinstance(target, model.VWord)
                  and not target.word.letters
                  and component_of(theory, v.name)
                  == component_of(theory, target.word.target))
        except Exception:
            ok = False
        if ok:
            hit_components.add(frozenset(component_of(theory, v.name)))
        else:
            failures += 1
            if counterexample is None:
                from .parser import print_term
                counterexample = {"term": print_term(t)}
    covers = {frozenset(c) for c in components(theory)}
    vertex_samples = {t.name for t in samples if isinstance(t, BaseVertex)}
    if vertex_samples >= set(theory.vertices) and hit_components != covers:
        failures += 1
        counterexample = counterexample or {"note": "a component was missed"}
    millis = int((time.monotonic() - start) * 1000)
    return Report("pi0", failures == 0, len(samples), failures, millis,
                  inputs=f"{len(samples)} samples", counterexample=counterexample)


def equivalence_report(theory: Theory, fuel: int = 200,
                       seed: int = 0) -> Report:
    """Sections, fullness and conversion soundness for the interpretation
    into the free groupoid."""
    start = time.monotonic()
    rng = stream(seed, 11)
    failures = 0
    counterexample = None
    samples = 0

    def fail(note):
        nonlocal failures, counterexample
        failures += 1
        if counterexample is None:
            counterexample = {"note": note}

    # essential surjectivity / section law on vertices and sampled words
    for v in theory.vertices:
        samples += 1
        if model.eval_term(theory, (),
                           model.closure_term(theory, model.VVertex(v))) \
                != model.VVertex(v):
            fail(f"section law fails on vertex {v}")
    for i in range(fuel):
        src = rng.choice(theory.vertices)
        tgt = rng.choice(list(component_of(theory, src)))
        word = harness._random_word(theory, rng, src, tgt)
        if word is None:
            continue
        samples += 1
        back = model.eval_term(theory, (),
                               model.closure_term(theory, model.VWord(word)))
        if back != model.VWord(word):
            fail("section law fails on a word")

    # fullness: arbitrary endpoints reach every parallel word by conjugation
    g = BaseTy(theory.name)
    for i in range(max(1, fuel // 10)):
        try:
            t = harness.gen_term(theory, GenConfig(
                seed=harness.child_seed(seed, 2, i), fuel=2, type_target=g))
            s = harness.gen_term(theory, GenConfig(
                seed=harness.child_seed(seed, 3, i), fuel=2, type_target=g))
            vt = model.eval_term(theory, (), t)
            vs = model.eval_term(theory, (), s)
            word = harness._random_word(theory, rng, vt.name, vs.name)
            if word is None:
                continue
            samples += 1
            alpha_t = alpha_component(theory, t)
            alpha_s = alpha_component(theory, s)
            middle = model.closure_term(theory, model.VWord(word))
            witness = jterms.path_compose(
                theory, (), g,
                jterms.path_compose(theory, (), g, alpha_t, middle),
                jterms.path_inverse(theory, (), g, alpha_s))
            if model.eval_term(theory, (), witness) != model.VWord(word):
                fail("fullness witness evaluates to the wrong word")
        except (harness.TargetUnrealizable, rz.RealizeUnsupported):
            continue

    # conversion soundness: convertible proofs have equal words
    for i in range(max(1, fuel // 10)):
        try:
            src = rng.choice(theory.vertices)
            tgt = rng.choice(list(component_of(theory, src)))
            ty = Id(g, BaseVertex(src), BaseVertex(tgt))
            p = harness.gen_term(theory, GenConfig(
                seed=harness.child_seed(seed, 4, i), fuel=3, type_target=ty))
            q = harness.gen_term(theory, GenConfig(
                seed=harness.child_seed(seed, 5, i), fuel=3, type_target=ty))
        except harness.TargetUnrealizable:
            continue
        samples += 1
        if kernel.convertible(theory, (), ty, p, q):
            if model.eval_term(theory, (), p) != \
                    model.eval_term(theory, (), q):
                fail("convertible proofs with distinct words")
    millis = int((time.monotonic() - start) * 1000)
    return Report("equivalence", failures == 0, samples, failures, millis,
                  inputs=f"fuel={fuel} seed={seed}",
                  counterexample=counterexample)


def retract_report(theory: Theory, fuel: int = 100, seed: int = 0) -> Report:
    """Dense components plus naturality on generated terms and paths."""
    start = time.monotonic()
    rng = stream(seed, 21)
    g = BaseTy(theory.name)
    failures = 0
    counterexample = None
    samples = 0
    for i in range(fuel):
        try:
            t = harness.gen_term(theory, GenConfig(
                seed=harness.child_seed(seed, 6, i), fuel=3, type_target=g))
        except harness.TargetUnrealizable:
            continue
        samples += 1
        try:
            path = alpha_component(theory, t)
            bar = model.closure_term(theory, model.eval_term(theory, (), t))
            kernel.check_type(theory, (), path, Id(g, t, bar))
            ok = is_dense(theory, path)
        except Exception:
            ok = False
        if not ok:
            failures += 1
            if counterexample is None:
                from .parser import print_term
                counterexample = {"term": print_term(t)}
    for i in range(max(1, fuel // 5)):
        src = rng.choice(theory.vertices)
        tgt = rng.choice(list(component_of(theory, src)))
        ty = Id(g, BaseVertex(src), BaseVertex(tgt))
        try:
            f = harness.gen_term(theory, GenConfig(
                seed=harness.child_seed(seed, 7, i), fuel=2, type_target=ty))
        except harness.TargetUnrealizable:
            continue
        samples += 1
        try:
            ok = naturality_check(theory, f, BaseVertex(src),
                                  BaseVertex(tgt))
        except Exception:
            ok = False
        if not ok:
            failures += 1
            if counterexample is None:
                from .parser import print_term
                counterexample = {"path": print_term(f)}
    millis = int((time.monotonic() - start) * 1000)
    return Report("retract", failures == 0, samples, failures, millis,
                  inputs=f"fuel={fuel} seed={seed}",
                  counterexample=counterexample)
