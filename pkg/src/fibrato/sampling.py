"""Seeded random instances and single-entry mutations for property and
acceptance tests.  Everything takes a ``random.Random`` so runs are reproducible."""

from __future__ import annotations

import random

from .algebra.action import GroupAction, group_as_category, natural_action
from .algebra.perm import Perm, close_generators, standard_group
from .core.actions import SetValuedAction
from .core.category import FinCat, FinFunctor
from .core.constructions import codiscrete_groupoid, poset_category
from .errors import ClosureBudgetExceeded
from .algebra.internal import InternalGroupoidData
from .grothendieck import FibredCategory

BASE_KINDS = ("tree", "group", "codiscrete", "idempotent")


def _points(rng: random.Random, lo=1, hi=3) -> tuple:
    return tuple(f"x{i}" for i in range(rng.randint(lo, hi)))


def _tree_action(rng: random.Random) -> SetValuedAction:
    """A rooted tree poset on at most 4 nodes; functions are chosen along
    edges and composed along paths, so functoriality holds by construction."""
    n = rng.randint(1, 4)
    parent = {0: None}
    for k in range(1, n):
        parent[k] = rng.randrange(k)

    def ancestors(k):
        chain = [k]
        while parent[chain[-1]] is not None:
            chain.append(parent[chain[-1]])
        return chain

    nodes = [str(k) for k in range(n)]
    B = poset_category(nodes, lambda a, b: int(a) in ancestors(int(b)))
    fiber = {str(k): _points(rng) for k in range(n)}
    step = {
        k: {x: rng.choice(fiber[str(k)]) for x in fiber[str(parent[k])]}
        for k in range(1, n)
    }
    act = {}
    for f, a, b in B.morphisms:
        path = ancestors(int(b))
        path = path[: path.index(int(a))]
        act[f] = {x: _walk(x, path, step) for x in fiber[a]}
    return SetValuedAction(B, fiber, act)


def _walk(x, path, step):
    for k in reversed(path):
        x = step[k][x]
    return x


def _group_action(rng: random.Random) -> SetValuedAction:
    kind, n = rng.choice([("cyclic", 2), ("cyclic", 3), ("cyclic", 4), ("cyclic", 6),
                          ("dihedral", 3), ("dihedral", 4), ("symmetric", 3)])
    G = standard_group(kind, n)
    B = group_as_category(G)
    if rng.random() < 0.25:
        pts = _points(rng)
        return SetValuedAction(B, {"*": pts}, {g: {x: x for x in pts} for g in G.names})
    carrier = [f"p{i}" for i in range(1, G.degree + 1)]
    rng.shuffle(carrier)
    A = natural_action(G, carrier)
    return SetValuedAction(B, {"*": tuple(A.carrier)}, {g: {x: A.table[g, x] for x in A.carrier} for g in G.names})


def _codiscrete_action(rng: random.Random) -> SetValuedAction:
    n = rng.randint(1, 3)
    B = codiscrete_groupoid(n)
    pts = _points(rng)
    beta = {}
    for X in B.objects:
        image = list(pts)
        if X != B.objects[0]:
            rng.shuffle(image)
        beta[X] = dict(zip(pts, image))
    inv = {X: {v: k for k, v in b.items()} for X, b in beta.items()}
    fiber = {X: tuple(beta[X][p] for p in pts) for X in B.objects}
    act = {
        f: {x: beta[t][inv[s][x]] for x in fiber[s]}
        for f, s, t in B.morphisms
    }
    return SetValuedAction(B, fiber, act)


def idempotent_monoid() -> FinCat:
    return FinCat.build(["*"], [("c", "*", "*")], [("c", "c", "c")])


def _idempotent_action(rng: random.Random) -> SetValuedAction:
    B = idempotent_monoid()
    pts = _points(rng)
    keep = rng.sample(pts, rng.randint(1, len(pts)))
    c = {x: (x if x in keep else rng.choice(keep)) for x in pts}
    return SetValuedAction(B, {"*": pts}, {"id_*": {x: x for x in pts}, "c": c})


_BUILDERS = {
    "tree": _tree_action,
    "group": _group_action,
    "codiscrete": _codiscrete_action,
    "idempotent": _idempotent_action,
}


def random_set_action(rng: random.Random, kind: str | None = None) -> SetValuedAction:
    """A functorial Set-valued action on a base with at most 4 objects and 12 morphisms."""
    return _BUILDERS[kind or rng.choice(BASE_KINDS)](rng)


def random_group_action(rng: random.Random, max_degree: int = 6, max_order: int = 24) -> GroupAction:
    """Natural action of a random permutation group (degree and order bounded) on relabelled points."""
    while True:
        degree = rng.randint(1, max_degree)
        gens = {}
        for k in range(rng.randint(1, 2)):
            images = list(range(1, degree + 1))
            rng.shuffle(images)
            gens[f"g{k}"] = Perm(tuple(images))
        try:
            G = close_generators(degree, gens, budget=max_order)
        except ClosureBudgetExceeded:
            continue
        carrier = [f"q{i}" for i in range(1, degree + 1)]
        rng.shuffle(carrier)
        return natural_action(G, carrier)


# ---------------------------------------------------------------- mutations


def _alternative(C: FinCat, current):
    """Another morphism with the endpoints of ``current`` if there is one, else any other."""
    s, t = C.src[current], C.tgt[current]
    for m in C.hom(s, t):
        if m != current:
            return m
    for m in C.names:
        if m != current:
            return m
    return None


def with_total(FC: FibredCategory, total: FinCat) -> FibredCategory:
    P = FC.projection
    return FibredCategory(
        total, FC.base, FinFunctor(total, P.cod, P.object_map, P.morphism_map),
        FC.cleavage, FC.variant, FC.object_parts, FC.morphism_parts,
    )


def compose_mutations(FC: FibredCategory):
    """Yield ``(key, FibredCategory)`` with exactly one total compose entry changed."""
    E = FC.total
    for key, value in E.compose.items():
        alt = _alternative(E, value)
        if alt is None:
            continue
        table = dict(E.compose)
        table[key] = alt
        yield key, with_total(FC, FinCat(E.objects, E.morphisms, E.identity, table))


def cleavage_mutations(FC: FibredCategory):
    """Yield ``(key, FibredCategory)`` with exactly one cleavage entry redirected."""
    for key, value in FC.cleavage.items():
        alt = _alternative(FC.total, value)
        if alt is None:
            continue
        cl = dict(FC.cleavage)
        cl[key] = alt
        yield key, FC.with_cleavage(cl)


def internal_mutations(T: InternalGroupoidData, rng: random.Random, count: int = 20):
    """Yield ``(map, key, mutated)`` where one entry of ``m``, ``e`` or ``i`` is changed."""
    for _ in range(count):
        which = rng.choice(("m", "e", "i"))
        table = dict(getattr(T, which))
        key = rng.choice(sorted(table, key=str))
        table[key] = rng.choice([g for g in T.G1 if g != table[key]])
        parts = {name: getattr(T, name) for name in ("G0", "G1", "d0", "d1", "e", "m", "i")}
        parts[which] = table
        yield which, key, InternalGroupoidData(**parts)
