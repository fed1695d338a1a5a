"""Two-level base-structured categories, composite fibration checks, model
comparison (wreath group against groupoid hierarchy) and base classification."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .algebra.action import GroupAction, group_as_category, natural_action
from .algebra.perm import PermGroup, direct_product, wreath_product
from .core.actions import CatValuedAction, SetValuedAction
from .core.category import (
    Collector, FinCat, FinFunctor, ValidationReport, check_functor, compose_functors, fiber_subcategory,
)
from .core.constructions import codiscrete_groupoid, pair_name
from .errors import BlockSizeMismatch, NonFunctorialAction
from .grothendieck import (
    FibredCategory,
    Variant,
    grothendieck_complete,
    is_cartesian_for,
    transformation_groupoid,
)


@dataclass(frozen=True)
class HierarchySpec:
    """``inner[I] = (B2_I, action on B2_I)``; ``outer_act[u]`` is a functor
    between the concrete-left completions over ``src u`` and ``tgt u``."""

    outer_base: FinCat
    inner: Mapping
    outer_act: Mapping

    __hash__ = None


@dataclass(frozen=True)
class Hierarchy:
    inner: dict  # I -> FibredCategory (concrete-left)
    total: FibredCategory  # E over B1
    middle: FibredCategory  # induced inner-base completion over B1
    inner_coproduct: FibredCategory  # coproduct of the inner completions
    P: FinFunctor  # E -> middle.total
    Q: FinFunctor  # middle.total -> B1

    __hash__ = None


def inner_completions(spec: HierarchySpec) -> dict:
    out = {}
    for I in spec.outer_base.objects:
        base, action = spec.inner[I]
        if action.base is not base and action.base != base:
            raise NonFunctorialAction(f"inner action at {I!r} is not over its stated base", witness=(I,), level="inner")
        out[I] = grothendieck_complete(action, Variant.CONCRETE_LEFT, level="inner")
    return out


def _induced_base_functor(u, F: FinFunctor, src: FibredCategory, tgt: FibredCategory) -> FinFunctor:
    """Push a functor between completions down to their bases."""
    ob, mor = {}, {}
    P, Q = src.projection, tgt.projection
    for o in src.total.objects:
        X, Y = P.object_map[o], Q.object_map[F.object_map[o]]
        if ob.setdefault(X, Y) != Y:
            raise NonFunctorialAction(f"{u!r} does not respect fibers at {X!r}", witness=(u, X), level="outer")
    for m in src.total.names:
        f, g = P.morphism_map[m], Q.morphism_map[F.morphism_map[m]]
        if mor.setdefault(f, g) != g:
            raise NonFunctorialAction(f"{u!r} does not respect fibers at {f!r}", witness=(u, f), level="outer")
    missing = [X for X in src.base.objects if X not in ob] + [f for f in src.base.names if f not in mor]
    if missing:
        raise NonFunctorialAction(f"{u!r} induces no base map at {missing[0]!r} (empty fiber)", witness=(u, missing[0]), level="outer")
    return FinFunctor(src.base, tgt.base, ob, mor)


def coproduct_fibred(parts: Mapping) -> FibredCategory:
    """Tagged disjoint union of fibred categories; tags are the mapping keys."""
    objs, mors, ident, comp = [], [], {}, {}
    bobjs, bmors, bident, bcomp = [], [], {}, {}
    pob, pmor, cleavage, oparts, mparts = {}, {}, {}, {}, {}
    for tag, FC in parts.items():
        t = lambda n: f"{tag}.{n}"
        E, B = FC.total, FC.base
        objs += [t(X) for X in E.objects]
        mors += [(t(n), t(s), t(d)) for n, s, d in E.morphisms]
        ident.update({t(X): t(i) for X, i in E.identity.items()})
        comp.update({(t(g), t(f)): t(h) for (g, f), h in E.compose.items()})
        bobjs += [t(X) for X in B.objects]
        bmors += [(t(n), t(s), t(d)) for n, s, d in B.morphisms]
        bident.update({t(X): t(i) for X, i in B.identity.items()})
        bcomp.update({(t(g), t(f)): t(h) for (g, f), h in B.compose.items()})
        pob.update({t(X): t(Y) for X, Y in FC.projection.object_map.items()})
        pmor.update({t(f): t(g) for f, g in FC.projection.morphism_map.items()})
        cleavage.update({(t(f), a): t(m) for (f, a), m in FC.cleavage.items()})
        oparts.update({t(o): (t(X), a) for o, (X, a) in FC.object_parts.items()})
        mparts.update({t(m): (t(p[0]),) + tuple(p[1:]) for m, p in FC.morphism_parts.items()})
    total = FinCat(objs, mors, ident, comp)
    base = FinCat(bobjs, bmors, bident, bcomp)
    variant = next(iter(parts.values())).variant if parts else Variant.CONCRETE_LEFT
    return FibredCategory(total, base, FinFunctor(total, base, pob, pmor), cleavage, variant, oparts, mparts)


def build_hierarchy(spec: HierarchySpec) -> Hierarchy:
    B1 = spec.outer_base
    inner = inner_completions(spec)
    outer = CatValuedAction(B1, {I: inner[I].total for I in B1.objects}, spec.outer_act)
    E = grothendieck_complete(outer, Variant.ABSTRACT_LEFT, level="outer")

    base_act = {
        u: _induced_base_functor(u, spec.outer_act[u], inner[B1.src[u]], inner[B1.tgt[u]])
        for u in B1.names
    }
    middle_action = CatValuedAction(B1, {I: inner[I].base for I in B1.objects}, base_act)
    M = grothendieck_complete(middle_action, Variant.ABSTRACT_LEFT, level="outer")

    m_obj = {v: k for k, v in M.object_parts.items()}
    m_mor = {v: k for k, v in M.morphism_parts.items()}
    ob, mor = {}, {}
    for o, (I, e) in E.object_parts.items():
        ob[o] = m_obj[I, inner[I].object_parts[e][0]]
    for m, (u, phi, e) in E.morphism_parts.items():
        J = B1.tgt[u]
        I = B1.src[u]
        key = (u, inner[J].projection.morphism_map[phi], inner[I].object_parts[e][0])
        mor[m] = m_mor[key]
    P = FinFunctor(E.total, M.total, ob, mor)
    r = check_functor(P, fail_fast=True)
    if not r.ok:
        v = r.violations[0]
        raise NonFunctorialAction(f"middle projection breaks {v.law}", witness=v.witness, level="outer")
    Q = M.projection
    QP = compose_functors(Q, P)
    if not QP.same_maps(E.projection):
        raise NonFunctorialAction("composite projection differs from the outer projection", level="outer")
    return Hierarchy(inner, E, M, coproduct_fibred(inner), P, Q)


def _has_cartesian_lift(P: FinFunctor, u, e) -> bool:
    E = P.dom
    for m in E.incoming.get(e, ()):
        if P.morphism_map[m] == u and is_cartesian_for(P, m):
            return True
    return False


def restrict_to_fiber(P: FinFunctor, Q: FinFunctor, I) -> FinFunctor:
    """``P`` restricted to the ``Q.P``-fiber over ``I``, landing in the ``Q``-fiber."""
    E, M, B = P.dom, P.cod, Q.cod
    idI = B.identity[I]
    m_objs = [x for x in M.objects if Q.object_map[x] == I]
    m_mors = [f for f in M.names if Q.morphism_map[f] == idI]
    keep_o = set(m_objs)
    keep_m = set(m_mors)
    e_objs = [x for x in E.objects if P.object_map[x] in keep_o]
    e_mors = [f for f in E.names if P.morphism_map[f] in keep_m]
    Ef = fiber_subcategory(E, e_objs, e_mors)
    Mf = fiber_subcategory(M, m_objs, m_mors)
    return FinFunctor(
        Ef, Mf,
        {x: P.object_map[x] for x in Ef.objects},
        {f: P.morphism_map[f] for f in Ef.names},
    )


def check_composite_fibration(P: FinFunctor, Q: FinFunctor, *, limit=20, fail_fast=False) -> ValidationReport:
    """Clauses: (a) ``QP`` has cartesian lifts; (b) ``f`` is ``QP``-cartesian iff
    it is ``P``-cartesian over a ``Q``-cartesian ``Pf``; (c) ``P`` restricted to
    each ``QP``-fiber is a fibration."""
    E, M, B = P.dom, P.cod, Q.cod
    QP = compose_functors(Q, P)

    def clause_a(out):
        for u in B.names:
            for e in E.objects:
                if QP.object_map[e] == B.tgt[u] and not _has_cartesian_lift(QP, u, e):
                    out.add("a", (u, e))

    def clause_b(out):
        for f in E.names:
            lhs = is_cartesian_for(QP, f)
            pf = P.morphism_map[f]
            rhs = pf in M.index and is_cartesian_for(P, f) and is_cartesian_for(Q, pf)
            if lhs != rhs:
                out.add("b", (f,))

    def clause_c(out):
        for I in B.objects:
            PI = restrict_to_fiber(P, Q, I)
            for w in PI.cod.names:
                for e in PI.dom.objects:
                    if PI.object_map[e] == PI.cod.tgt[w] and not _has_cartesian_lift(PI, w, e):
                        out.add("c", (I, w, e))

    return Collector(limit, fail_fast).run(clause_a, clause_b, clause_c)


# ---------------------------------------------------------------- spec builders


def _translate_functor(src: FibredCategory, tgt: FibredCategory, ob: Mapping, mor: Mapping) -> FinFunctor:
    return FinFunctor(src.total, tgt.total, ob, mor)


def codiscrete_hierarchy_spec(block_size: int = 3, blocks: int = 2) -> HierarchySpec:
    """Outer codiscrete groupoid on ``o1..ok`` acting on ``k`` codiscrete inner
    bases ``s..`` with singleton fibers ``x..``; outer arrows translate blocks."""
    outer = codiscrete_groupoid(blocks, [f"o{b}" for b in range(1, blocks + 1)])
    names = {b: [str(b * block_size + j) for j in range(1, block_size + 1)] for b in range(blocks)}
    inner, totals = {}, {}
    for b in range(blocks):
        base = codiscrete_groupoid(block_size, [f"s{p}" for p in names[b]])
        act = {f: {f"x{base.src[f][1:]}": f"x{base.tgt[f][1:]}"} for f in base.names}
        action = SetValuedAction(base, {X: (f"x{X[1:]}",) for X in base.objects}, act)
        inner[f"o{b + 1}"] = (base, action)
        totals[b] = grothendieck_complete(action, Variant.CONCRETE_LEFT)
    outer_act = {}
    for u in outer.names:
        a, b = int(outer.src[u][1:]) - 1, int(outer.tgt[u][1:]) - 1
        shift = dict(zip(names[a], names[b]))
        tr = lambda p: shift[p]
        src, tgt = totals[a], totals[b]
        ob = {pair_name(f"s{p}", f"x{p}"): pair_name(f"s{tr(p)}", f"x{tr(p)}") for p in names[a]}
        mor = {}
        for p in names[a]:
            for q in names[a]:
                f = f"id_s{p}" if p == q else f"s{p}->s{q}"
                g = f"id_s{tr(p)}" if p == q else f"s{tr(p)}->s{tr(q)}"
                mor[pair_name(f, f"x{q}")] = pair_name(g, f"x{tr(q)}")
        outer_act[u] = _translate_functor(src, tgt, ob, mor)
    return HierarchySpec(outer, inner, outer_act)


def factor_permuting_action(G: PermGroup, top: PermGroup, fiber_point: str = "Y") -> HierarchySpec:
    """One-object hierarchy: ``top`` permutes the factors of ``G^k`` acting
    trivially on a single point."""
    k = top.degree
    Gk = direct_product(*([G] * k))
    inner_base = group_as_category(Gk)
    action = SetValuedAction(inner_base, {"*": (fiber_point,)}, {g: {fiber_point: fiber_point} for g in Gk.names})
    inner = grothendieck_complete(action, Variant.CONCRETE_LEFT)
    outer = group_as_category(top)
    outer_act = {}
    for pname in top.names:
        p = top.element(pname)
        pinv = p.inverse()
        mor = {}
        for name in Gk.names:
            factors = name[1:-1].split(",")
            moved = "(" + ",".join(factors[pinv(i) - 1] for i in range(1, k + 1)) + ")"
            mor[pair_name(name, fiber_point)] = pair_name(moved, fiber_point)
        ob = {o: o for o in inner.total.objects}
        outer_act[pname] = FinFunctor(inner.total, inner.total, ob, mor)
    return HierarchySpec(outer, {"*": (inner_base, action)}, outer_act)


def block_hierarchy_spec(blocks, inner_sym: PermGroup, outer_sym: PermGroup) -> HierarchySpec:
    """Groupoid hierarchy for a partitioned set: transformation groupoids on each
    block, moved around by the transformation groupoid of ``outer_sym`` on the
    block indices.  Inner fibers are singletons ``{x<point>}``."""
    blocks = [tuple(str(p) for p in B) for B in blocks]
    _check_blocks(blocks, inner_sym, outer_sym)
    k = len(blocks)
    idx = [str(b) for b in range(1, k + 1)]
    outer = transformation_groupoid(natural_action(outer_sym, idx))
    inner, totals = {}, {}
    for b, pts in enumerate(blocks):
        base = transformation_groupoid(natural_action(inner_sym, pts))
        act = {f: {f"x{base.src[f]}": f"x{base.tgt[f]}"} for f in base.names}
        action = SetValuedAction(base, {X: (f"x{X}",) for X in base.objects}, act)
        inner[idx[b]] = (base, action)
        totals[idx[b]] = grothendieck_complete(action, Variant.CONCRETE_LEFT)
    outer_act = {}
    for u in outer.names:
        a, b = outer.src[u], outer.tgt[u]
        shift = dict(zip(blocks[int(a) - 1], blocks[int(b) - 1]))
        src, tgt = totals[a], totals[b]
        ob = {pair_name(p, f"x{p}"): pair_name(shift[p], f"x{shift[p]}") for p in blocks[int(a) - 1]}
        mor = {}
        for m, (f, _, x) in src.morphism_parts.items():
            g, p = _split_pair(f)
            y = src.base.tgt[f]
            mor[m] = pair_name(pair_name(g, shift[p]), f"x{shift[y]}")
        outer_act[u] = FinFunctor(src.total, tgt.total, ob, mor)
    return HierarchySpec(outer, inner, outer_act)


def _split_pair(name: str):
    inner = name[1:-1]
    head, _, tail = inner.rpartition(",")
    return head, tail


def _check_blocks(blocks, inner_sym: PermGroup, outer_sym: PermGroup):
    sizes = {len(B) for B in blocks}
    if len(sizes) > 1:
        raise BlockSizeMismatch(f"blocks have different sizes {sorted(sizes)}")
    if blocks and inner_sym.degree != len(blocks[0]):
        raise BlockSizeMismatch(f"inner group acts on {inner_sym.degree} points but blocks have {len(blocks[0])}")
    if outer_sym.degree != len(blocks):
        raise BlockSizeMismatch(f"outer group acts on {outer_sym.degree} points but there are {len(blocks)} blocks")
    flat = [p for B in blocks for p in B]
    if len(set(flat)) != len(flat):
        raise BlockSizeMismatch("blocks overlap")


# ---------------------------------------------------------------- metrics


@dataclass(frozen=True)
class PresentationStats:
    objects: int
    morphisms: int
    composable_pairs: int

    def __add__(self, other):
        return PresentationStats(
            self.objects + other.objects,
            self.morphisms + other.morphisms,
            self.composable_pairs + other.composable_pairs,
        )

    def to_dict(self):
        return {"objects": self.objects, "morphisms": self.morphisms, "composable_pairs": self.composable_pairs}


def presentation_stats(C: FinCat) -> PresentationStats:
    pairs = sum(len(C.incoming[Y]) * len(C.outgoing[Y]) for Y in C.objects)
    return PresentationStats(len(C.objects), len(C.morphisms), pairs)


@dataclass(frozen=True)
class ComparisonReport:
    group_model: PresentationStats
    groupoid_model: PresentationStats
    notes: list = field(default_factory=list)

    @property
    def morphism_counts_coincide(self) -> bool:
        return self.group_model.morphisms == self.groupoid_model.morphisms

    def to_dict(self):
        return {
            "group_model": self.group_model.to_dict(),
            "groupoid_model": self.groupoid_model.to_dict(),
            "morphism_counts_coincide": self.morphism_counts_coincide,
            "notes": list(self.notes),
        }


def wreath_model(inner_sym: PermGroup, outer_sym: PermGroup, point: str = "Y") -> FibredCategory:
    """The one-object model: the wreath group acting trivially on one whole set."""
    W = wreath_product(inner_sym, outer_sym)
    base = group_as_category(W)
    action = SetValuedAction(base, {"*": (point,)}, {g: {point: point} for g in W.names})
    return grothendieck_complete(action, Variant.CONCRETE_LEFT)


def compare_models(blocks, inner_sym: PermGroup, outer_sym: PermGroup) -> ComparisonReport:
    blocks = [tuple(str(p) for p in B) for B in blocks]
    _check_blocks(blocks, inner_sym, outer_sym)
    group = presentation_stats(wreath_model(inner_sym, outer_sym).total)
    H = build_hierarchy(block_hierarchy_spec(blocks, inner_sym, outer_sym))
    groupoid = presentation_stats(H.total.total)
    notes = [
        f"wreath model: {group.objects} object(s), {group.morphisms} morphisms, {group.composable_pairs} composable pairs",
        f"groupoid hierarchy: {groupoid.objects} objects, {groupoid.morphisms} morphisms, {groupoid.composable_pairs} composable pairs",
    ]
    return ComparisonReport(group, groupoid, notes)


# ---------------------------------------------------------------- classification

SET_LABELS = {
    "singleton": "X modeled as single whole set",
    "discrete": "X a set partitioned into subsets",
    "one-object-many-arrows": "X as endoset on some set",
    "general": "X as small category",
}
CAT_LABELS = {
    "singleton": "X as small 1-category",
    "discrete": "X as coproduct category",
    "one-object-many-arrows": "X as endofunctor category,(strict)Monoidal category",
    "general": "X as 2-category",
}
GENERAL_LABELS = {
    "singleton": "X modeled as object in D",
    "discrete": "X modeled as coproduct object",
    "one-object-many-arrows": "X modeled as monoid object",
    "general": "X modeled as category object",
}


def classify_base(B: FinCat, codomain: str = "set") -> tuple:
    """Return ``(class, label)``; ``codomain`` is ``set``, ``cat`` or ``general``."""
    n_obj, n_mor = len(B.objects), len(B.morphisms)
    if n_obj == 1 and n_mor == 1:
        kind = "singleton"
    elif n_mor == n_obj:
        kind = "discrete"
    elif n_obj == 1:
        kind = "one-object-many-arrows"
    else:
        kind = "general"
    labels = {"set": SET_LABELS, "cat": CAT_LABELS, "general": GENERAL_LABELS}[codomain]
    return kind, labels[kind]
