"""Standard finite categories and constructions on them."""

from __future__ import annotations

from itertools import product as _cartesian

from ..errors import NotAGroupoid
from .category import FinCat, FinFunctor


def discrete_category(points) -> FinCat:
    objs = tuple(str(p) for p in points)
    ident = {x: f"id_{x}" for x in objs}
    mors = [(ident[x], x, x) for x in objs]
    return FinCat(objs, mors, ident, {(ident[x], ident[x]): ident[x] for x in objs})


def codiscrete_groupoid(n, names=None) -> FinCat:
    """Exactly one morphism ``a->b`` for every ordered pair; identities ``id_a``."""
    objs = tuple(names) if names is not None else tuple(str(i) for i in range(1, n + 1))
    if names is not None and len(objs) != n:
        raise ValueError("names must have length n")

    def arrow(a, b):
        return f"id_{a}" if a == b else f"{a}->{b}"

    mors = [(arrow(a, b), a, b) for a, b in _cartesian(objs, objs)]
    comp = {(arrow(b, c), arrow(a, b)): arrow(a, c) for a, b, c in _cartesian(objs, objs, objs)}
    return FinCat(objs, mors, {a: arrow(a, a) for a in objs}, comp)


def poset_category(elements, leq) -> FinCat:
    """Thin category of a finite preorder given by the predicate ``leq(a, b)``."""
    objs = tuple(elements)

    def arrow(a, b):
        return f"id_{a}" if a == b else f"{a}<={b}"

    mors = [(arrow(a, b), a, b) for a, b in _cartesian(objs, objs) if a == b or leq(a, b)]
    have = {(s, t) for _, s, t in mors}
    comp = {
        (arrow(b, c), arrow(a, b)): arrow(a, c)
        for a, b, c in _cartesian(objs, objs, objs)
        if (a, b) in have and (b, c) in have
    }
    return FinCat(objs, mors, {a: arrow(a, a) for a in objs}, comp)


def opposite(C: FinCat) -> FinCat:
    """Same names, endpoints swapped, composition reversed."""
    return FinCat(
        C.objects,
        [(n, t, s) for n, s, t in C.morphisms],
        C.identity,
        {(f, g): h for (g, f), h in C.compose.items()},
    )


def pair_name(a, b) -> str:
    return f"({a},{b})"


def product(C: FinCat, D: FinCat) -> FinCat:
    objs = [pair_name(X, Y) for X, Y in _cartesian(C.objects, D.objects)]
    mors = [
        (pair_name(f, g), pair_name(C.src[f], D.src[g]), pair_name(C.tgt[f], D.tgt[g]))
        for f, g in _cartesian(C.names, D.names)
    ]
    ident = {pair_name(X, Y): pair_name(C.identity[X], D.identity[Y]) for X, Y in _cartesian(C.objects, D.objects)}
    comp = {
        (pair_name(f2, g2), pair_name(f1, g1)): pair_name(f, g)
        for ((f2, f1), f), ((g2, g1), g) in _cartesian(C.compose.items(), D.compose.items())
    }
    return FinCat(objs, mors, ident, comp)


def coproduct(C: FinCat, D: FinCat, tags=("inl", "inr")) -> FinCat:
    objs, mors, ident, comp = [], [], {}, {}
    for tag, E in zip(tags, (C, D)):
        t = lambda n: f"{tag}.{n}"
        objs += [t(X) for X in E.objects]
        mors += [(t(n), t(s), t(d)) for n, s, d in E.morphisms]
        ident.update({t(X): t(i) for X, i in E.identity.items()})
        comp.update({(t(g), t(f)): t(h) for (g, f), h in E.compose.items()})
    return FinCat(objs, mors, ident, comp)


def inverse_of(C: FinCat, f):
    """Two-sided inverse of ``f`` or ``None``."""
    s, t = C.src[f], C.tgt[f]
    for g in C.hom(t, s):
        if C.compose.get((g, f)) == C.identity[s] and C.compose.get((f, g)) == C.identity[t]:
            return g
    return None


def is_groupoid(C: FinCat) -> bool:
    return all(inverse_of(C, f) is not None for f in C.names)


def connected_components(C: FinCat) -> list:
    """Partition of the objects, each block in object order, blocks ordered by first object."""
    parent = {X: X for X in C.objects}

    def find(X):
        while parent[X] != X:
            parent[X] = parent[parent[X]]
            X = parent[X]
        return X

    for _, s, t in C.morphisms:
        a, b = find(s), find(t)
        if a != b:
            parent[max(a, b, key=C.object_index.get)] = min(a, b, key=C.object_index.get)
    blocks = {}
    for X in C.objects:
        blocks.setdefault(find(X), []).append(X)
    return [tuple(b) for b in blocks.values()]


def vertex_group(C: FinCat, X) -> FinCat:
    if not is_groupoid(C):
        raise NotAGroupoid("vertex groups are only defined for groupoids")
    loops = C.hom(X, X)
    keep = set(loops)
    return FinCat(
        (X,),
        [(f, X, X) for f in loops],
        {X: C.identity[X]},
        {(g, f): h for (g, f), h in C.compose.items() if g in keep and f in keep},
    )


def functor_graph_category(F: FinFunctor) -> FinCat:
    """Objects ``(X,FX)`` and morphisms ``(f,Ff)`` with componentwise composition."""
    C, ob, mor = F.dom, F.object_map, F.morphism_map
    on = lambda X: pair_name(X, ob[X])
    mn = lambda f: pair_name(f, mor[f])
    return FinCat(
        [on(X) for X in C.objects],
        [(mn(f), on(s), on(t)) for f, s, t in C.morphisms],
        {on(X): mn(i) for X, i in C.identity.items()},
        {(mn(g), mn(f)): mn(h) for (g, f), h in C.compose.items()},
    )


def full_image_projection(graph: FinCat, F: FinFunctor) -> FinFunctor:
    """The first-component functor from the graph category back to ``dom F``."""
    C = F.dom
    return FinFunctor(
        graph, C,
        {pair_name(X, F.object_map[X]): X for X in C.objects},
        {pair_name(f, F.morphism_map[f]): f for f in C.names},
    )


def relabel(C: FinCat, objects=None, morphisms=None) -> FinCat:
    """Rename objects and/or morphisms by dicts (missing keys keep their name)."""
    o = (lambda X: objects.get(X, X)) if objects else (lambda X: X)
    m = (lambda f: morphisms.get(f, f)) if morphisms else (lambda f: f)
    return FinCat(
        [o(X) for X in C.objects],
        [(m(n), o(s), o(t)) for n, s, t in C.morphisms],
        {o(X): m(i) for X, i in C.identity.items()},
        {(m(g), m(f)): m(h) for (g, f), h in C.compose.items()},
    )


def constant_functor(C: FinCat, D: FinCat, X) -> FinFunctor:
    return FinFunctor(C, D, {Y: X for Y in C.objects}, {f: D.identity[X] for f in C.names})
