"""Derived-term builders: transports, parameterized and sequential
eliminators over telescopes, functorial action terms, coherence terms.

Everything here is pure term surgery on nameless syntax. Binder
conventions (outermost first) are stated per builder; all emit fully
explicit terms, accepting size growth at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Theory
from . import kernel
from .syntax import (App, Context, Id, J, Lam, Pi, Refl, Term, Var,
                     instantiate, shift, subst_free, substitute)


def fam_at(body: Term, arg: Term, extra: int) -> Term:
    """Instantiate a one-binder family at ``arg``, ``extra`` binders below
    the family's own level."""
    return substitute(shift(body, extra, 1), 0, arg)


def var_refs(top: int, count: int) -> list[Term]:
    """[Var(top), Var(top-1), ...]: ``count`` consecutive references."""
    return [Var(top - i) for i in range(count)]


# --- single transport ------------------------------------------------------

def transport(theory: Theory, ctx: Context, family: Term, a: Term, b: Term,
              f: Term, t: Term) -> Term:
    """Reindex ``t : family[a]`` along ``f : Id(A, a, b)``.

    The eliminator's motive is the function type family[x] -> family[y],
    so transporting along refl computes to ``t`` by one beta step.
    """
    motive = Pi(fam_at(family, Var(2), 3), shift(fam_at(family, Var(1), 3), 1, 0))
    base = Lam(fam_at(family, Var(0), 1), Var(0))
    return App(J(motive, base, a, b, f), t)


def _id_endpoints(theory: Theory, ctx: Context, f: Term) -> tuple[Term, Term, Term]:
    ty = kernel.normalize(theory, ctx, kernel.infer_type(theory, ctx, f))
    if not isinstance(ty, Id):
        raise kernel.TypeCheckError("NotAPath", f, actual=ty)
    return ty.ty, ty.lhs, ty.rhs


def _pc_at(theory: Theory, ctx: Context, A: Term, a: Term, b: Term, c: Term,
           f: Term, g: Term) -> Term:
    """Compose with the endpoints supplied rather than inferred. A refl
    second factor reduces on the spot, as it would under normalization."""
    if isinstance(g, Refl):
        return f
    family = Id(shift(A, 1, 0), shift(a, 1, 0), Var(0))
    return transport(theory, ctx, family, b, c, g, f)


def path_compose(theory: Theory, ctx: Context, A: Term, f: Term, g: Term) -> Term:
    """f : Id(A,a,b), g : Id(A,b,c) |-> a path Id(A,a,c), f first."""
    _, a, _ = _id_endpoints(theory, ctx, f)
    _, b, c = _id_endpoints(theory, ctx, g)
    return _pc_at(theory, ctx, A, a, b, c, f, g)


def _pinv_at(theory: Theory, ctx: Context, A: Term, a: Term, b: Term,
             f: Term) -> Term:
    if isinstance(f, Refl):
        return f
    family = Id(shift(A, 1, 0), Var(0), shift(a, 1, 0))
    return transport(theory, ctx, family, a, b, f, Refl(a))


def path_inverse(theory: Theory, ctx: Context, A: Term, f: Term) -> Term:
    _, a, b = _id_endpoints(theory, ctx, f)
    return _pinv_at(theory, ctx, A, a, b, f)


def ap_arg(theory: Theory, ctx: Context, out_ty: Term, fn_body: Term,
           a: Term, b: Term, p: Term) -> Term:
    """Congruence: from p : Id(A,a,b) derive Id(out_ty, fn[a], fn[b]).

    ``fn_body`` binds 1; ``out_ty`` must not depend on the argument.
    """
    motive = Id(shift(out_ty, 3, 0), fam_at(fn_body, Var(2), 3),
                fam_at(fn_body, Var(1), 3))
    base = Refl(fam_at(fn_body, Var(0), 1))
    return J(motive, base, a, b, p)


def ap_app(theory: Theory, ctx: Context, fun_ty: Term, arg: Term,
           g1: Term, g2: Term, p: Term) -> Term:
    """From p : Id(fun_ty, g1, g2) derive Id(cod[arg], app(g1,arg), app(g2,arg))."""
    fty = kernel.normalize(theory, ctx, fun_ty)
    if not isinstance(fty, Pi):
        raise kernel.TypeCheckError("NotAFunction", g1, actual=fty)
    out_ty = substitute(fty.codomain, 0, arg)
    return ap_arg(theory, ctx, out_ty, App(Var(0), shift(arg, 1, 0)), g1, g2, p)


# --- parameterized eliminator ----------------------------------------------

def param_j(theory: Theory, ctx: Context, motive: Term, phi: Term,
            a: Term, b: Term, f: Term,
            param_tys: list[Term] = (), params: list[Term] = ()) -> Term:
    """Eliminate f : Id(A,a,b) with trailing parameters.

    motive binds (x, y, z, v1..vp); phi binds (x, v1..vp); param_tys[i]
    binds (x, y, z, v1..vi); a, b, f and params live in ctx. Built by
    lambda-abstracting the innermost parameter and recursing, so the
    refl instance computes to phi applied to the parameters.
    """
    p = len(params)
    if p != len(param_tys):
        raise ValueError("params and param_tys must align")
    if p == 0:
        return J(motive, phi, a, b, f)
    bn = param_tys[-1]
    new_motive = Pi(bn, motive)
    # collapse (x,y,z) to (x): substitute z := refl x, then y := x
    bn_refl = substitute(substitute(bn, p - 1, Refl(Var(p))), p - 1, Var(p - 1))
    new_phi = Lam(bn_refl, phi)
    inner = param_j(theory, ctx, new_motive, new_phi, a, b, f,
                    list(param_tys[:-1]), list(params[:-1]))
    return App(inner, params[-1])


# --- telescope machinery -----------------------------------------------------

@dataclass(frozen=True)
class TelescopePath:
    """An arrow of the groupoid of a context telescope.

    telescope[i] is a type under ctx plus i earlier entries; source and
    target are objectwise instances; legs[k] proves the k-th target equal
    to the k-th source pushed forward through the earlier legs.
    """

    telescope: tuple[Term, ...]
    source: tuple[Term, ...]
    target: tuple[Term, ...]
    legs: tuple[Term, ...]

    def __len__(self):
        return len(self.telescope)


def identity_path(telescope: tuple[Term, ...], points: tuple[Term, ...]) -> TelescopePath:
    return TelescopePath(tuple(telescope), tuple(points), tuple(points),
                         tuple(Refl(pt) for pt in points))


def _prune_tails(tail_tys: list[Term], fam: Term):
    """Tail numbers (1-based) the family actually depends on, closed
    under dependencies between the tails themselves."""
    from .syntax import free_indices
    m = len(tail_tys)
    needed: set[int] = set()

    def mark(body: Term, binders: int):
        for idx in free_indices(body):
            if idx < binders - 1:  # a tail slot, not the mover or ambient
                needed.add(binders - 1 - idx)

    mark(fam, m + 1)
    for k in sorted(range(1, m + 1), reverse=True):
        if k in needed:
            mark(tail_tys[k - 1], k)
    return sorted(needed)


def _reindex_pruned(body: Term, binders: int, keep: list[int]) -> Term:
    """Re-express a body under (w0, w1..w_{binders-1}) over the kept
    tails only. Dropped slots must not occur."""
    total = len(keep) + 1

    def fn(j):
        if j == binders - 1:            # the mover w0
            return Var(total - 1)
        if j > binders - 1:             # ambient
            return Var(j - (binders - total))
        k = (binders - 1) - j           # tail number
        if k in keep:
            return Var(total - 2 - keep.index(k))
        return Var(j)                   # unreachable by construction

    return subst_free(body, fn)


def move_value(theory: Theory, ctx: Context, a: Term, b: Term, f: Term,
               tail_tys: list[Term], tail_vals: list[Term],
               fam: Term, u: Term) -> Term:
    """Push ``u : fam(a, tails)`` along ``f : Id(A, a, b)``.

    ``fam`` binds (w0, w1..wm): the moving coordinate then the dependent
    tail; tail_tys[i] binds (w0, w1..wi). Tail coordinates the family
    depends on ride along as eliminator parameters, which is what makes
    the iterated one-step transports of a telescope arrow well-typed;
    unused tails are dropped so the canonical form is stable across
    construction sites.
    """
    if isinstance(f, Refl):
        return u  # the whole eliminator stack fires at refl
    m = len(tail_tys)
    if m > 0:
        keep = _prune_tails(tail_tys, fam)
        if len(keep) < m:
            new_tys = [_reindex_pruned(tail_tys[k - 1], k,
                                       [j for j in keep if j < k])
                       for k in keep]
            new_vals = [tail_vals[k - 1] for k in keep]
            new_fam = _reindex_pruned(fam, m + 1, keep)
            return move_value(theory, ctx, a, b, f, new_tys, new_vals,
                              new_fam, u)
    if m == 0:
        return transport(theory, ctx, fam, a, b, f, u)

    bs = []
    for i in range(m):
        body = tail_tys[i]  # binds (w0, w1..wi)

        def fn(j, i=i):
            if j == i:
                return Var(i + 2)   # w0 -> x
            if j < i:
                return Var(j)       # wk -> vk
            return Var(j + 2)

        bs.append(subst_free(body, fn))

    def src_fn(j):
        if j == m:
            return Var(m + 2)       # w0 -> x
        if j < m:
            return Var(j)
        return Var(j + 2)

    f_src = subst_free(fam, src_fn)

    # moved tail variables, open in the motive context (x,y,z,v1..vm)
    lift = m + 3
    moved_open: list[Term] = []
    for j in range(m):
        fam_j = shift(tail_tys[j], lift, j + 1)
        tys_j = [shift(tail_tys[k], lift, k + 1) for k in range(j)]
        vals_j = [Var(m - 1 - k) for k in range(j)]
        moved_open.append(move_value(theory, ctx, Var(m + 2), Var(m + 1), Var(m),
                                     tys_j, vals_j, fam_j, Var(m - 1 - j)))

    def tgt_fn(j):
        if j == m:
            return Var(m + 1)       # w0 -> y
        if j < m:
            return moved_open[m - j - 1]
        return Var(j + 2)

    f_tgt = subst_free(fam, tgt_fn)
    motive = Pi(f_src, shift(f_tgt, 1, 0))
    phi = Lam(fam, Var(0))
    inner = param_j(theory, ctx, motive, phi, a, b, f, bs, list(tail_vals))
    return App(inner, u)


def move_values(theory: Theory, ctx: Context, a: Term, b: Term, f: Term,
                tail_tys: list[Term], tail_vals: list[Term]) -> list[Term]:
    """Push every tail coordinate along one leg, dependencies and all."""
    out = []
    for j in range(len(tail_tys)):
        out.append(move_value(theory, ctx, a, b, f,
                              list(tail_tys[:j]), list(tail_vals[:j]),
                              tail_tys[j], tail_vals[j]))
    return out


def stage_walk(theory: Theory, ctx: Context, tel: list[Term],
               srcs: list[Term], tgts: list[Term], legs: list[Term],
               extra_tys: list[Term], extra_vals: list[Term]) -> list[Term]:
    """Consume every leg of a telescope arrow, carrying extra dependent
    coordinates (types under ctx + full telescope + earlier extras).
    Returns the pushed-forward extras."""
    tel_cur = list(tel) + list(extra_tys)
    vals = list(srcs) + list(extra_vals)
    for j in range(len(tel)):
        a, b, f = vals[0], tgts[j], legs[j]
        vals = move_values(theory, ctx, a, b, f, tel_cur[1:], vals[1:])
        tel_cur = [substitute(tel_cur[1 + i], i, shift(b, i, 0))
                   for i in range(len(tel_cur) - 1)]
    return vals


def tele_transport(theory: Theory, ctx: Context, tel: list[Term], fam: Term,
                   srcs: list[Term], tgts: list[Term], legs: list[Term],
                   u: Term) -> Term:
    """Push ``u : fam(srcs)`` along a whole telescope arrow."""
    return stage_walk(theory, ctx, list(tel), list(srcs), list(tgts),
                      list(legs), [fam], [u])[0]


def moved_source(theory: Theory, ctx: Context, path: TelescopePath,
                 k: int) -> Term:
    """The k-th source coordinate pushed through the earlier legs: the
    left endpoint the k-th leg must connect to the k-th target."""
    tel = list(path.telescope)
    cur = list(path.source)
    for j in range(k):
        a, b, f = cur[0], path.target[j], path.legs[j]
        cur = move_values(theory, ctx, a, b, f, tel[1:], cur[1:])
        tel = [substitute(tel[1 + i], i, shift(b, i, 0))
               for i in range(len(tel) - 1)]
    return cur[0]


def _instantiate_prefix(entry: Term, args: list[Term]) -> Term:
    """Instantiate a telescope entry (under len(args) priors) at args."""
    k = len(args)
    t = entry
    for i, arg in enumerate(args):
        j = k - 1 - i
        t = substitute(t, j, shift(arg, j, 0))
    return t


def check_path(theory: Theory, ctx: Context, path: TelescopePath) -> None:
    """Validate the leg typings of a telescope arrow."""
    n = len(path.telescope)
    if not (len(path.source) == len(path.target) == len(path.legs) == n):
        raise ValueError("telescope path components must have equal length")
    for j in range(n):
        kernel.check_type(theory, ctx, path.source[j],
                          _instantiate_prefix(path.telescope[j],
                                              list(path.source[:j])))
    tel = list(path.telescope)
    cur = list(path.source)
    for j in range(n):
        a, b, f = cur[0], path.target[j], path.legs[j]
        kernel.check_type(theory, ctx, b, tel[0])
        kernel.check_type(theory, ctx, f, Id(tel[0], a, b))
        cur = move_values(theory, ctx, a, b, f, tel[1:], cur[1:])
        tel = [substitute(tel[1 + i], i, shift(b, i, 0))
               for i in range(len(tel) - 1)]


# --- sequential eliminator ---------------------------------------------------

def _diag_fn(n: int, q: int):
    """Index map collapsing the first n-1 telescope triples to their
    diagonal, keeping the last triple and q parameters as binders.

    Source binders: (x1..xn, y1..yn, z1..zn, v1..vq); target binders:
    (xn, yn, zn, v1..vq) over a context extended by (x1..x_{n-1}).
    """

    def fn(j):
        if j <= q - 1:
            return Var(j)                    # parameters
        if j == q:
            return Var(q)                    # zn
        if j == q + n:
            return Var(q + 1)                # yn
        if j == q + 2 * n:
            return Var(q + 2)                # xn
        if q < j < q + n:                    # z_i, i < n -> refl on x_i
            return Refl(Var(j + 2))
        if q + n < j < q + 2 * n:            # y_i -> x_i reference
            return Var(j + 2 - n)
        if q + 2 * n < j < q + 3 * n:        # x_i -> prefix entry
            return Var(j + 2 - 2 * n)
        return Var(j - 2 * n + 2)            # ambient

    return fn


def _perm_fn(n: int, q: int):
    """Reorder (x*, y*, z*, v*) binders so the last triple trails the
    prefix triples, becoming the first three parameters."""

    def fn(j):
        if j <= q - 1:
            return Var(j)
        if j == q:
            return Var(q)                    # zn
        if j == q + n:
            return Var(q + 1)                # yn
        if j == q + 2 * n:
            return Var(q + 2)                # xn
        if q < j < q + n:                    # z_i
            return Var(j + 2)
        if q + n < j < q + 2 * n:            # y_i
            return Var(j + 1)
        if q + 2 * n < j < q + 3 * n:        # x_i
            return Var(j)
        return Var(j)                        # ambient: binder count unchanged

    return fn


def seq_j(theory: Theory, ctx: Context, tel: list[Term], motive: Term,
          phi: Term, srcs: list[Term], tgts: list[Term], legs: list[Term],
          param_tys: list[Term] = (), params: list[Term] = ()) -> Term:
    """Expand ``phi`` along a telescope arrow, with trailing parameters.

    motive binds (x1..xn, y1..yn, z1..zn, v1..vp); phi binds (x1..xn,
    v1..vp); param_tys[i] binds the same block as the motive but with
    only i parameters. Built by induction on the telescope: the last
    entry is eliminated with an ordinary parameterized eliminator over
    the diagonal of the prefix, and the prefix is then expanded around
    the result.
    """
    n = len(tel)
    p = len(params)
    if n == 0:
        return instantiate(phi, *params)
    if n == 1:
        return param_j(theory, ctx, motive, phi, srcs[0], tgts[0], legs[0],
                       list(param_tys), list(params))

    an = tel[n - 1]  # under (x1..x_{n-1}) over ctx
    lift = 3 + p

    inner_motive = shift(subst_free(motive, _diag_fn(n, p)), lift, lift)
    inner_phi = shift(phi, lift, 1 + p)
    inner_bs = [shift(subst_free(param_tys[i], _diag_fn(n, i)), lift, 3 + i)
                for i in range(p)]

    ictx = list(ctx) + list(tel[:n - 1])
    ictx.append(an)
    ictx.append(shift(an, 1, 0))
    ictx.append(Id(shift(an, 2, 0), Var(1), Var(0)))
    for i in range(p):
        ictx.append(subst_free(param_tys[i], _diag_fn(n, i)))
    ictx_t = tuple(ictx)

    inner = param_j(theory, ictx_t, inner_motive, inner_phi,
                    Var(p + 2), Var(p + 1), Var(p), inner_bs,
                    [Var(p - 1 - i) for i in range(p)])

    # outer: sequential over the prefix, the last triple joins the parameters
    outer_motive = subst_free(motive, _perm_fn(n, p))
    pre = n - 1
    a1 = shift(an, 2 * pre, 0)  # xn's parameter type over (x*, y*, z*)

    def yn_fn(j):
        if j < pre:
            return Var(j + pre + 1)   # x_i -> y_i (one extra binder: xn)
        return Var(j + 2 * pre + 1)

    a2 = subst_free(an, yn_fn)

    def an_e_fn(j):  # A_n at the y-side, under prefix triples + (xn, yn)
        if j < pre:
            return Var(j + pre + 2)
        return Var(j + 2 * pre + 2)

    an_y = subst_free(an, an_e_fn)
    # moved xn along the z-prefix, under prefix triples + (xn, yn)
    binders = 3 * pre + 2
    tel_in = [shift(tel[k], binders, k) for k in range(pre)]
    x_refs = [Var(binders - 1 - k) for k in range(pre)]          # x1..x_{n-1}
    y_refs = [Var(binders - 1 - pre - k) for k in range(pre)]    # y1..y_{n-1}
    z_refs = [Var(binders - 1 - 2 * pre - k) for k in range(pre)]
    moved_xn = stage_walk(theory, ctx, tel_in, x_refs, y_refs, z_refs,
                          [shift(an, binders, pre)], [Var(1)])[0]
    a3 = Id(an_y, moved_xn, Var(0))

    outer_btys = [a1, a2, a3]
    for i in range(p):
        outer_btys.append(subst_free(param_tys[i], _perm_fn(n, i)))
    outer_params = [srcs[n - 1], tgts[n - 1], legs[n - 1]] + list(params)

    return seq_j(theory, ctx, tel[:n - 1], outer_motive, inner,
                 srcs[:n - 1], tgts[:n - 1], legs[:n - 1],
                 outer_btys, outer_params)


# --- functorial action of a term on a telescope arrow ------------------------

def action_on_path(theory: Theory, ctx: Context, t: Term,
                   path: TelescopePath, section_ty: Term | None = None) -> Term:
    """The image of a telescope arrow under the section ``t``.

    ``t`` lives over ctx extended by the telescope; the result proves
    the pushforward of t at the source equal to t at the target. All
    legs refl collapses the term to refl on t at the source.
    ``section_ty`` overrides inference for callers working under binders.
    """
    n = len(path.telescope)
    if n == 0:
        return Refl(t)
    tel = list(path.telescope)
    if section_ty is not None:
        t_ty = section_ty
    else:
        tctx = tuple(ctx) + tuple(tel)
        t_ty = kernel.infer_type(theory, tctx, t)  # under (x1..xn) over ctx

    def to_y(j):
        if j < n:
            return Var(j + n)
        return Var(j + 2 * n)

    ty_y = subst_free(t_ty, to_y)
    t_y = subst_free(t, to_y)
    t_x = shift(t, 2 * n, 0)
    fam = shift(t_ty, 3 * n, n)
    tel_in = [shift(tel[k], 3 * n, k) for k in range(n)]
    x_refs = [Var(3 * n - 1 - k) for k in range(n)]
    y_refs = [Var(2 * n - 1 - k) for k in range(n)]
    z_refs = [Var(n - 1 - k) for k in range(n)]
    moved = tele_transport(theory, ctx, tel_in, fam, x_refs, y_refs, z_refs, t_x)
    motive = Id(ty_y, moved, t_y)
    phi = Refl(t)
    return seq_j(theory, ctx, tel, motive, phi,
                 list(path.source), list(path.target), list(path.legs))


def correction_path(theory: Theory, ctx: Context, fam: Term,
                    path: TelescopePath, u: Term) -> Term:
    """For a family whose instances all normalize to one constant type,
    the canonical proof that the pushforward of ``u`` equals ``u``."""
    n = len(path.telescope)
    tel = list(path.telescope)

    def to_y(j):
        if j < n:
            return Var(j + n)
        return Var(j + 2 * n)

    fam_y = subst_free(fam, to_y)
    fam3 = shift(fam, 3 * n, n)
    tel_in = [shift(tel[k], 3 * n, k) for k in range(n)]
    x_refs = [Var(3 * n - 1 - k) for k in range(n)]
    y_refs = [Var(2 * n - 1 - k) for k in range(n)]
    z_refs = [Var(n - 1 - k) for k in range(n)]
    u3 = shift(u, 3 * n, 0)
    moved = tele_transport(theory, ctx, tel_in, fam3, x_refs, y_refs, z_refs, u3)
    motive = Id(fam_y, moved, u3)
    phi = Refl(shift(u, n, 0))
    return seq_j(theory, ctx, tel, motive, phi,
                 list(path.source), list(path.target), list(path.legs))


# --- the standard identity-elimination arrow ---------------------------------

def weakened_leg(theory: Theory, ctx: Context, prefix: TelescopePath,
                 coord_ty: Term, src: Term, raw: Term) -> Term:
    """A leg for a coordinate of constant (weakened) type.

    ``raw`` proves the unmoved source equal to the intended target; the
    result corrects it to start at the source pushed through the prefix
    legs, as the telescope invariant demands.
    """
    n = len(prefix.telescope)
    if n == 0:
        return raw
    section = shift(src, n, 0)
    connector = action_on_path(theory, ctx, section, prefix)
    return path_compose(theory, ctx, coord_ty, connector, raw)


def extend_path(theory: Theory, ctx: Context, prefix: TelescopePath,
                coord_ty: Term, src: Term, tgt: Term,
                raw: Term) -> TelescopePath:
    """Extend a telescope arrow by one coordinate of constant type."""
    leg = weakened_leg(theory, ctx, prefix, coord_ty, src, raw)
    n = len(prefix.telescope)
    return TelescopePath(prefix.telescope + (shift(coord_ty, n, 0),),
                         prefix.source + (src,),
                         prefix.target + (tgt,),
                         prefix.legs + (leg,))


def refl_chain_path(theory: Theory, ctx: Context, A: Term, a: Term, b: Term,
                    f: Term) -> TelescopePath:
    """The arrow (a, a, refl a) -> (a, b, f) of the two-endpoints-and-a-
    proof telescope; its third leg is the classic iterated-identity
    eliminator term."""
    tel = (A, shift(A, 1, 0), Id(shift(A, 2, 0), Var(1), Var(0)))
    third = refl_move_eq(theory, ctx, A, a, b, f)
    return TelescopePath(tel, (a, a, Refl(a)), (a, b, f),
                         (Refl(a), f, third))


def refl_move_eq(theory: Theory, ctx: Context, A: Term, a: Term, b: Term,
                 f: Term) -> Term:
    """Proof that refl on ``a`` pushed along (refl a, f) equals ``f``."""
    # open pushforward of refl x along (refl x, z), under (x, y, z)
    telw = [shift(A, 3, 0), shift(A, 4, 0)]
    famw = Id(shift(A, 5, 0), Var(1), Var(0))
    moved = tele_transport(theory, ctx, telw, famw,
                           [Var(2), Var(2)], [Var(2), Var(1)],
                           [Refl(Var(2)), Var(0)], Refl(Var(2)))
    motive = Id(Id(shift(A, 3, 0), Var(2), Var(1)), moved, Var(0))
    base = Refl(Refl(Var(0)))
    return J(motive, base, a, b, f)


# --- composition of telescope arrows and coherence terms ----------------------

def tele_compose(theory: Theory, ctx: Context, p1: TelescopePath,
                 p2: TelescopePath) -> TelescopePath:
    """Composite arrow of the telescope groupoid, ``p1`` first.

    Per coordinate past the first, the leg corrects with the composition
    coherence, pushes the first arrow's leg along the second arrow, and
    finishes with the second arrow's leg.
    """
    n = len(p1.telescope)
    legs_out: list[Term] = []
    for i in range(n):
        coord_ty = _instantiate_prefix(p1.telescope[i], list(p2.target[:i]))
        ai = p1.telescope[i]
        m0 = moved_source(theory, ctx, p1, i)
        if i == 0:
            leg = _pc_at(theory, ctx, coord_ty, p1.source[0], p1.target[0],
                         p2.target[0], p1.legs[0], p2.legs[0])
            legs_out.append(leg)
            continue
        pre1 = TelescopePath(p1.telescope[:i], p1.source[:i],
                             p1.target[:i], p1.legs[:i])
        pre2 = TelescopePath(p2.telescope[:i], p2.source[:i],
                             p2.target[:i], p2.legs[:i])
        gamma_i = gamma(theory, ctx, list(p1.telescope[:i]), pre1, pre2,
                        ai, p1.source[i])
        extras = [ai, shift(ai, 1, 0), Id(shift(ai, 2, 0), Var(1), Var(0))]
        moved = stage_walk(theory, ctx, list(p1.telescope[:i]),
                           list(p2.source[:i]), list(p2.target[:i]),
                           list(p2.legs[:i]), extras,
                           [m0, p1.target[i], p1.legs[i]])
        comp_lhs = stage_walk(theory, ctx, list(p1.telescope[:i]),
                              list(p1.source[:i]), list(p2.target[:i]),
                              legs_out, [ai], [p1.source[i]])[0]
        p2_lhs = moved_source(theory, ctx, p2, i)
        leg = _pc_at(theory, ctx, coord_ty, comp_lhs, moved[0], moved[1],
                     gamma_i, moved[2])
        leg = _pc_at(theory, ctx, coord_ty, comp_lhs, p2_lhs, p2.target[i],
                     leg, p2.legs[i])
        legs_out.append(leg)
    return TelescopePath(p1.telescope, p1.source, p2.target, tuple(legs_out))


def gamma(theory: Theory, ctx: Context, tel: list[Term], p1: TelescopePath,
          p2: TelescopePath, fam: Term, t: Term) -> Term:
    """Coherence between transporting along a composite and transporting
    in two stages.

    Eliminates the first arrow; the second arrow's targets and legs ride
    along as parameters together with the object. Collapses to refl when
    the first arrow is an identity.
    """
    n = len(tel)
    if n == 0:
        return Refl(t)

    # parameter types: targets e1..en, legs w1..wn, the object u
    ptys: list[Term] = []
    for i in range(1, n + 1):  # e_i under (x*,y*,z*, e1..e_{i-1})
        ptys.append(shift(tel[i - 1], 3 * n, i - 1))
    for i in range(1, n + 1):  # w_i under (x*,y*,z*, e*, w1..w_{i-1})
        binders = 4 * n + i - 1

        def a_fn(j, i=i):
            if j < i - 1:
                return Var(j + n)
            return Var(j + 4 * n)

        ai_e = subst_free(tel[i - 1], a_fn)
        tel_in = [shift(tel[k], binders, k) for k in range(i - 1)]
        y_refs = [Var(3 * n + i - 2 - k) for k in range(i - 1)]
        e_refs = [Var(n + i - 2 - k) for k in range(i - 1)]
        w_refs = [Var(i - 2 - k) for k in range(i - 1)]
        moved_yi = stage_walk(theory, ctx, tel_in, y_refs, e_refs, w_refs,
                              [shift(tel[i - 1], binders, i - 1)],
                              [Var(3 * n - 1)])[0]
        ei_ref = Var(n - 1)
        ptys.append(Id(ai_e, moved_yi, ei_ref))
    ptys.append(shift(fam, 4 * n, 0))  # u : T(x*)

    # motive under (x*, y*, z*, e*, w*, u)
    total = 5 * n + 1
    x_refs = [Var(total - 1 - k) for k in range(n)]
    y_refs = [Var(total - 1 - n - k) for k in range(n)]
    z_refs = [Var(total - 1 - 2 * n - k) for k in range(n)]
    e_refs = [Var(total - 1 - 3 * n - k) for k in range(n)]
    w_refs = [Var(total - 1 - 4 * n - k) for k in range(n)]
    u_ref = Var(0)
    tel_m = [shift(tel[k], total, k) for k in range(n)]
    fam_m = shift(fam, total, n)
    gen1 = TelescopePath(tuple(tel_m), tuple(x_refs), tuple(y_refs),
                         tuple(z_refs))
    gen2 = TelescopePath(tuple(tel_m), tuple(y_refs), tuple(e_refs),
                         tuple(w_refs))
    comp = tele_compose(theory, ctx, gen1, gen2)
    lhs = tele_transport(theory, ctx, tel_m, fam_m, x_refs, e_refs,
                         list(comp.legs), u_ref)
    staged = tele_transport(theory, ctx, tel_m, fam_m, x_refs, y_refs,
                            z_refs, u_ref)
    rhs = tele_transport(theory, ctx, tel_m, fam_m, y_refs, e_refs,
                         w_refs, staged)

    def fam_e(j):
        if j < n:
            return Var(j + n + 1)
        return Var(j + 4 * n + 1)

    motive = Id(subst_free(fam, fam_e), lhs, rhs)

    # phi under (x*, e*, w*, u): refl on the two-stage pushforward at refl
    ptotal = 3 * n + 1
    px = [Var(ptotal - 1 - k) for k in range(n)]
    pe = [Var(ptotal - 1 - n - k) for k in range(n)]
    pw = [Var(ptotal - 1 - 2 * n - k) for k in range(n)]
    tel_p = [shift(tel[k], ptotal, k) for k in range(n)]
    fam_p = shift(fam, ptotal, n)
    phi = Refl(tele_transport(theory, ctx, tel_p, fam_p, px, pe, pw, Var(0)))

    params = list(p2.target) + list(p2.legs) + [t]
    return seq_j(theory, ctx, tel, motive, phi,
                 list(p1.source), list(p1.target), list(p1.legs),
                 ptys, params)


def dagger(theory: Theory, ctx: Context, split: int, path: TelescopePath,
           fam: Term, a: Term) -> Term:
    """Weakening coherence: a path between pushing ``a`` along the first
    ``split`` legs only and pushing it along the whole arrow.

    ``fam`` lives over the first ``split`` telescope entries; the
    remaining entries are the weakened-in context. Refl when the trailing
    legs are refl; refl on ``a`` outright when all legs are.
    """
    n = len(path.telescope)
    m = n - split
    gtel = list(path.telescope[:split])
    gsrc = list(path.source[:split])
    gtgt = list(path.target[:split])
    glegs = list(path.legs[:split])
    a_moved = tele_transport(theory, ctx, gtel, fam, gsrc, gtgt, glegs, a)

    # trailing sources pushed through the leading legs, and the trailing
    # telescope instantiated at the leading targets
    moved_deltas = stage_walk(theory, ctx, gtel, gsrc, gtgt, glegs,
                              list(path.telescope[split:]),
                              list(path.source[split:]))
    dtel = []
    for i in range(m):
        entry = path.telescope[split + i]  # under ctx + split + i priors
        for k, val in enumerate(gtgt):
            j = split - 1 - k + i
            entry = substitute(entry, j, shift(val, j, 0))
        dtel.append(entry)

    fam_inst = fam
    for k, val in enumerate(gtgt):
        j = split - 1 - k
        fam_inst = substitute(fam_inst, j, shift(val, j, 0))

    # the full pushforward continues from a_moved through generic
    # trailing legs, in a family constant in the trailing coordinates
    total = 3 * m
    dtel_m = [shift(dtel[k], total, k) for k in range(m)]
    x_refs = [Var(total - 1 - k) for k in range(m)]
    y_refs = [Var(2 * m - 1 - k) for k in range(m)]
    z_refs = [Var(m - 1 - k) for k in range(m)]
    fam_w = shift(fam_inst, total + m, 0)
    moved_all = tele_transport(theory, ctx, dtel_m, fam_w, x_refs, y_refs,
                               z_refs, shift(a_moved, total, 0))
    motive = Id(shift(fam_inst, total, 0), shift(a_moved, total, 0),
                moved_all)
    phi = Refl(shift(a_moved, m, 0))
    return seq_j(theory, ctx, dtel, motive, phi,
                 moved_deltas, list(path.target[split:]),
                 list(path.legs[split:]), [], [])


def ddagger(theory: Theory, ctx: Context, path: TelescopePath, b_fam: Term,
            a_section: Term, d1: Term) -> Term:
    """Substitution comparison: pushing a value of the substituted family
    along an arrow agrees with pushing it through the extended telescope
    that tracks the substituted section.

    ``b_fam`` binds the telescope plus one slot for the section's value;
    ``a_section`` lives over the telescope. Refl when the arrow is."""
    n = len(path.telescope)
    tel = list(path.telescope)
    composed = substitute(b_fam, 0, a_section)  # family over the telescope

    total = 3 * n + 1  # binders (x*, y*, z*, u1)
    tel_m = [shift(tel[k], total, k) for k in range(n)]
    x_refs = [Var(total - 1 - k) for k in range(n)]
    y_refs = [Var(total - 1 - n - k) for k in range(n)]
    z_refs = [Var(total - 1 - 2 * n - k) for k in range(n)]

    # u1 pushed through the extended telescope (tel, x:A) along (z*, a|z*)
    a_ty = kernel.infer_type(theory, tuple(ctx) + tuple(tel), a_section)
    ext_tel = tel_m + [shift(a_ty, total, n)]
    gen = TelescopePath(tuple(tel_m), tuple(x_refs), tuple(y_refs),
                        tuple(z_refs))
    act_term = action_on_path(theory, ctx, shift(a_section, total, n), gen,
                              section_ty=shift(a_ty, total, n))
    ext_fam = shift(b_fam, total, n + 1)
    lhs = tele_transport(theory, ctx, ext_tel, ext_fam,
                         x_refs + [subst_free_section(a_section, x_refs, total)],
                         y_refs + [subst_free_section(a_section, y_refs, total)],
                         z_refs + [act_term], Var(0))
    rhs = tele_transport(theory, ctx, tel_m, shift(composed, total, n),
                         x_refs, y_refs, z_refs, Var(0))

    def comp_y(j):
        if j < n:
            return Var(j + n + 1)
        return Var(j + 2 * n + 1)

    motive = Id(subst_free(composed, comp_y), lhs, rhs)
    phi = Refl(Var(0))
    b1_param = shift(composed, 2 * n, 0)
    return seq_j(theory, ctx, tel, motive, phi,
                 list(path.source), list(path.target), list(path.legs),
                 [b1_param], [d1])


def subst_free_section(section: Term, refs: list[Term], total: int) -> Term:
    """A section over the telescope, re-pointed at explicit references."""
    n = len(refs)

    def fn(j):
        if j < n:
            return refs[n - 1 - j]
        return Var(j - n + total)

    return subst_free(section, fn)


def coherence(theory: Theory, ctx: Context, kind: str, **kw) -> Term:
    """Dispatch for the three coherence builders by keyword arguments."""
    if kind == "gamma":
        return gamma(theory, ctx, kw["telescope"], kw["first"], kw["second"],
                     kw["family"], kw["object"])
    if kind == "dagger":
        return dagger(theory, ctx, kw["split"], kw["path"], kw["family"],
                      kw["object"])
    if kind == "ddagger":
        return ddagger(theory, ctx, kw["path"], kw["family"],
                       kw["section"], kw["object"])
    raise ValueError(f"unknown coherence kind {kind!r}")
