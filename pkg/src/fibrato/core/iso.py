"""Exhaustive isomorphism search between finite categories.

Objects are matched first (pruned by endomorphism count and hom-size
profiles), then morphisms hom-set by hom-set with composition propagation.
"""

from __future__ import annotations

import os
from collections import Counter

from ..errors import BudgetExceeded
from .category import FinCat, FinFunctor

DEFAULT_BUDGET = 200_000


def default_budget(fallback: int = DEFAULT_BUDGET) -> int:
    value = os.environ.get("FIBRATO_BUDGET")
    if value:
        try:
            return int(value)
        except ValueError:
            pass
    return fallback


class _Budget:
    def __init__(self, limit):
        self.limit = default_budget() if limit is None else limit
        self.used = 0

    def tick(self):
        self.used += 1
        if self.used > self.limit:
            raise BudgetExceeded(f"isomorphism search exceeded {self.limit} nodes")


def _object_signature(C: FinCat, X):
    outs = sorted(len(C.hom(X, Y)) for Y in C.objects)
    ins = sorted(len(C.hom(Y, X)) for Y in C.objects)
    return len(C.hom(X, X)), tuple(outs), tuple(ins)


def _power_type(C: FinCat, f):
    """(preperiod, period) of the sequence f, f^2, ... for an endomorphism."""
    seen = {}
    cur, k = f, 0
    while cur not in seen:
        seen[cur] = k
        cur = C.compose[f, cur]
        k += 1
    return seen[cur], k - seen[cur]


def _morphism_signature(C: FinCat, f):
    if C.src[f] != C.tgt[f]:
        return ("arrow", f in C.identities)
    return ("endo", f in C.identities, _power_type(C, f))


def _counts_match(C: FinCat, D: FinCat) -> bool:
    if len(C.objects) != len(D.objects) or len(C.morphisms) != len(D.morphisms):
        return False
    sc = Counter(_object_signature(C, X) for X in C.objects)
    sd = Counter(_object_signature(D, X) for X in D.objects)
    return sc == sd


def _object_bijections(C, D, budget, seed):
    sig_c = {X: _object_signature(C, X) for X in C.objects}
    sig_d = {Y: _object_signature(D, Y) for Y in D.objects}
    order = list(C.objects)
    assign, used = {}, set()

    def rec(i):
        if i == len(order):
            yield dict(assign)
            return
        X = order[i]
        cands = [Y for Y in D.objects if Y not in used and sig_d[Y] == sig_c[X]]
        if X in seed and seed[X] in cands:
            cands.remove(seed[X])
            cands.insert(0, seed[X])
        for Y in cands:
            budget.tick()
            ok = all(len(C.hom(X, Z)) == len(D.hom(Y, assign[Z])) and len(C.hom(Z, X)) == len(D.hom(assign[Z], Y))
                     for Z in assign)
            if not ok:
                continue
            assign[X] = Y
            used.add(Y)
            yield from rec(i + 1)
            del assign[X]
            used.discard(Y)

    yield from rec(0)


def _morphism_bijections(C, D, obmap, budget, hint):
    sig_c = {f: _morphism_signature(C, f) for f in C.names}
    sig_d = {g: _morphism_signature(D, g) for g in D.names}
    mor, used = {}, set()
    trail = []

    def assign(f, g):
        mor[f] = g
        used.add(g)
        trail.append(f)

    def consistent_push(f, g):
        """Assign f -> g and propagate composites; False on contradiction."""
        queue = [(f, g)]
        while queue:
            a, b = queue.pop()
            if a in mor:
                if mor[a] != b:
                    return False
                continue
            if b in used or D.src[b] != obmap[C.src[a]] or D.tgt[b] != obmap[C.tgt[a]] or sig_d[b] != sig_c[a]:
                return False
            assign(a, b)
            for x in C.outgoing[C.tgt[a]]:
                if x in mor:
                    queue.append((C.compose[x, a], D.compose[mor[x], b]))
            for x in C.incoming[C.src[a]]:
                if x in mor:
                    queue.append((C.compose[a, x], D.compose[b, mor[x]]))
        return True

    def undo(mark):
        while len(trail) > mark:
            f = trail.pop()
            used.discard(mor.pop(f))

    for X, i in C.identity.items():
        if not consistent_push(i, D.identity[obmap[X]]):
            return
    order = [f for f in C.names if f not in C.identities]

    def rec(i):
        while i < len(order) and order[i] in mor:
            i += 1
        if i == len(order):
            yield dict(mor)
            return
        f = order[i]
        cands = [g for g in D.hom(obmap[C.src[f]], obmap[C.tgt[f]]) if g not in used and sig_d[g] == sig_c[f]]
        if f in hint and hint[f] in cands:
            cands.remove(hint[f])
            cands.insert(0, hint[f])
        for g in cands:
            budget.tick()
            mark = len(trail)
            if consistent_push(f, g):
                yield from rec(i + 1)
            undo(mark)

    yield from rec(0)


def iter_isomorphisms(C: FinCat, D: FinCat, budget: int | None = None, object_map=None, morphism_map=None):
    """Yield every strict isomorphism ``C -> D`` as a :class:`FinFunctor`.

    ``object_map``/``morphism_map`` are hints: hinted images are tried first.
    Raises :class:`BudgetExceeded` once more than ``budget`` search nodes are used.
    """
    if not _counts_match(C, D):
        return
    b = _Budget(budget)
    for obmap in _object_bijections(C, D, b, object_map or {}):
        for mor in _morphism_bijections(C, D, obmap, b, morphism_map or {}):
            yield FinFunctor(C, D, obmap, mor)


def inverse_functor(F: FinFunctor) -> FinFunctor:
    return FinFunctor(
        F.cod, F.dom,
        {v: k for k, v in F.object_map.items()},
        {v: k for k, v in F.morphism_map.items()},
    )


def find_isomorphism(C: FinCat, D: FinCat, budget: int | None = None, object_map=None, morphism_map=None):
    """Return ``(F, G)`` mutually inverse, or ``None`` when no isomorphism exists."""
    for F in iter_isomorphisms(C, D, budget, object_map, morphism_map):
        return F, inverse_functor(F)
    return None


def are_mutually_inverse(F: FinFunctor, G: FinFunctor) -> bool:
    C, D = F.dom, F.cod
    return (
        all(G.object_map[F.object_map[X]] == X for X in C.objects)
        and all(F.object_map[G.object_map[Y]] == Y for Y in D.objects)
        and all(G.morphism_map[F.morphism_map[f]] == f for f in C.names)
        and all(F.morphism_map[G.morphism_map[g]] == g for g in D.names)
    )
