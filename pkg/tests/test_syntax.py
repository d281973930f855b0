import random

from tmlg.syntax import (App, Id, Lam, NatTy, Pi, Refl, Succ, Var, Zero,
                         free_indices, instantiate, shift, subst_free,
                         substitute)


def test_shift_free_variable():
    assert shift(Var(0), 1, 0) == Var(1)


def test_shift_under_binder_leaves_bound():
    t = Lam(NatTy(), Var(0))
    assert shift(t, 1, 0) == Lam(NatTy(), Var(0))


def test_shift_cutoff():
    t = App(Var(0), Var(2))
    assert shift(t, 3, 1) == App(Var(0), Var(5))


def test_substitute_simple():
    assert substitute(Var(0), 0, Zero()) == Zero()
    assert substitute(Succ(Var(0)), 0, Succ(Zero())) == Succ(Succ(Zero()))


def test_substitute_under_binder():
    t = Lam(NatTy(), App(Var(0), Var(1)))
    assert substitute(t, 0, Zero()) == Lam(NatTy(), App(Var(0), Zero()))


def _random_term(rng, depth, max_free):
    pick = rng.randrange(6 if depth > 0 else 2)
    if pick == 0:
        return Var(rng.randrange(max_free)) if max_free else Zero()
    if pick == 1:
        return Zero()
    if pick == 2:
        return Succ(_random_term(rng, depth - 1, max_free))
    if pick == 3:
        return App(_random_term(rng, depth - 1, max_free),
                   _random_term(rng, depth - 1, max_free))
    if pick == 4:
        return Lam(NatTy(), _random_term(rng, depth - 1, max_free + 1))
    return Id(NatTy(), _random_term(rng, depth - 1, max_free),
              _random_term(rng, depth - 1, max_free))


def test_weaken_then_substitute_is_identity():
    rng = random.Random(7)
    for _ in range(300):
        t = _random_term(rng, 4, 3)
        s = _random_term(rng, 3, 3)
        assert substitute(shift(t, 1, 0), 0, s) == t


def test_shift_composition():
    rng = random.Random(8)
    for _ in range(300):
        t = _random_term(rng, 4, 3)
        a, b, c = rng.randrange(3), rng.randrange(3), rng.randrange(2)
        assert shift(shift(t, a, c), b, c) == shift(t, a + b, c)


def test_instantiate_order():
    # body under binders (x, y): x = Var(1), y = Var(0)
    body = App(Var(1), Var(0))
    assert instantiate(body, Zero(), Succ(Zero())) == App(Zero(), Succ(Zero()))


def test_instantiate_with_free_ambient():
    body = App(Var(2), Var(0))  # mentions ambient Var(0) past two binders
    out = instantiate(body, Zero(), Zero())
    assert out == App(Var(0), Zero())


def test_subst_free_permutes():
    t = App(Var(0), Lam(NatTy(), App(Var(0), Var(2))))
    out = subst_free(t, lambda j: Var(j + 5))
    assert out == App(Var(5), Lam(NatTy(), App(Var(0), Var(7))))


def test_free_indices():
    t = Lam(NatTy(), App(Var(0), Var(3)))
    assert free_indices(t) == {2}
    assert free_indices(Refl(Var(1))) == {1}
