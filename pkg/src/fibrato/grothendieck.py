"""Grothendieck completions of Set- and Cat-valued actions, transformation
groupoids, and brute-force (co)cartesianness.

Every variant goes through one engine.  Left variants take a covariant action
on ``B`` and fibre over ``B``; right variants take a covariant action on
``B^op`` (a contravariant action on ``B``) and fibre over ``B``, which is
``opposite(action.base)``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional

from .algebra.action import GroupAction, group_as_category
from .core.actions import CatValuedAction, SetValuedAction
from .core.category import (
    Collector,
    FinCat,
    FinFunctor,
    ValidationReport,
    check_category,
    check_functor,
    fiber_subcategory,
)
from .core.constructions import opposite, pair_name
from .core.iso import are_mutually_inverse, find_isomorphism


class Variant(str, Enum):
    ABSTRACT_LEFT = "abstract-left"
    ABSTRACT_RIGHT = "abstract-right"
    CONCRETE_LEFT = "concrete-left"
    CONCRETE_RIGHT = "concrete-right"

    @property
    def is_left(self) -> bool:
        return self in (Variant.ABSTRACT_LEFT, Variant.CONCRETE_LEFT)

    @property
    def is_concrete(self) -> bool:
        return self in (Variant.CONCRETE_LEFT, Variant.CONCRETE_RIGHT)

    @property
    def short(self) -> str:
        return {"abstract": "abs", "concrete": "con"}[self.value.split("-")[0]] + "-" + self.value.split("-")[1]

    @classmethod
    def parse(cls, text) -> "Variant":
        if isinstance(text, Variant):
            return text
        for v in cls:
            if text in (v.value, v.short):
                return v
        raise ValueError(f"unknown variant {text!r}")


@dataclass(frozen=True)
class FibredCategory:
    """A completion together with its projection and chosen lifts.

    ``cleavage[(f, a)]`` is the chosen lift of base morphism ``f`` anchored at
    fiber object ``a``: over the source for left variants, over the target for
    right ones.  ``object_parts`` maps total objects to ``(X, a)`` and
    ``morphism_parts`` maps total morphisms to ``(f, phi, anchor)``.
    """

    total: FinCat
    base: FinCat
    projection: FinFunctor
    cleavage: Mapping
    variant: Variant
    object_parts: Mapping = field(default_factory=dict)
    morphism_parts: Mapping = field(default_factory=dict)

    __hash__ = None

    def object_over(self, X, a):
        return pair_name(X, a)

    def fiber_objects(self, X) -> list:
        return [o for o in self.total.objects if self.projection.object_map[o] == X]

    def fiber(self, X) -> FinCat:
        objs = self.fiber_objects(X)
        ident = self.base.identity[X]
        mors = [m for m in self.total.names if self.projection.morphism_map[m] == ident]
        return fiber_subcategory(self.total, objs, mors)

    def with_cleavage(self, cleavage) -> "FibredCategory":
        return FibredCategory(
            self.total, self.base, self.projection, dict(cleavage), self.variant,
            self.object_parts, self.morphism_parts,
        )


def _as_cat_valued(action, variant: Variant) -> CatValuedAction:
    if isinstance(action, SetValuedAction):
        return action.to_cat_valued()
    if variant.is_concrete:
        raise TypeError("concrete variants take a SetValuedAction")
    return action


def grothendieck_complete(action, variant, *, validate: bool = True, level=None) -> FibredCategory:
    """Build the total category of ``action`` for the requested variant."""
    variant = Variant.parse(variant)
    if validate:
        action.validate(level=level)
    F = _as_cat_valued(action, variant)
    if variant.is_left:
        return _complete_left(F, variant)
    return _complete_right(F, variant)


def _disambiguate(rows, concrete: bool):
    """rows: (f, phi, anchor, label); label repeats within one f get ``|anchor``."""
    counts = Counter((f, label) for f, _, _, label in rows)
    names = []
    for f, phi, anchor, label in rows:
        base = pair_name(f, label)
        names.append(base if counts[f, label] == 1 else f"({f},{label}|{anchor})")
    return names


def _complete_left(F: CatValuedAction, variant: Variant) -> FibredCategory:
    B = F.base
    concrete = variant.is_concrete
    obj = {}
    objects = []
    for X in B.objects:
        for a in F.fiber[X].objects:
            obj[X, a] = pair_name(X, a)
            objects.append(obj[X, a])
    rows, ends = [], []
    for f in B.names:
        X, Y = B.src[f], B.tgt[f]
        Ff, FY = F.act[f], F.fiber[Y]
        for a in F.fiber[X].objects:
            fa = Ff.object_map[a]
            for phi in FY.names:
                if FY.src[phi] != fa:
                    continue
                label = FY.tgt[phi] if concrete else phi
                rows.append((f, phi, a, label))
                ends.append((obj[X, a], obj[Y, FY.tgt[phi]]))
    names = _disambiguate(rows, concrete)
    key = {(f, phi, a): n for (f, phi, a, _), n in zip(rows, names)}
    parts = {n: (f, phi, a) for (f, phi, a, _), n in zip(rows, names)}
    morphisms = [(n, s, t) for n, (s, t) in zip(names, ends)]
    identity = {obj[X, a]: key[B.identity[X], F.fiber[X].identity[a], a] for X, a in obj}

    out_of = {}
    for n, s, _ in morphisms:
        out_of.setdefault(s, []).append(n)
    compose = {}
    for n1, _, t1 in morphisms:
        f, phi, a = parts[n1]
        for n2 in out_of.get(t1, ()):
            g, psi, _ = parts[n2]
            Z = B.tgt[g]
            chi = F.fiber[Z].compose[psi, F.act[g].morphism_map[phi]]
            compose[n2, n1] = key[B.compose[g, f], chi, a]
    total = FinCat(objects, morphisms, identity, compose)
    projection = FinFunctor(
        total, B,
        {obj[k]: k[0] for k in obj},
        {n: parts[n][0] for n in names},
    )
    cleavage = {}
    for f in B.names:
        X, Y = B.src[f], B.tgt[f]
        for a in F.fiber[X].objects:
            fa = F.act[f].object_map[a]
            cleavage[f, a] = key[f, F.fiber[Y].identity[fa], a]
    return FibredCategory(
        total, B, projection, cleavage, variant, {obj[k]: k for k in obj}, parts
    )


def _complete_right(F: CatValuedAction, variant: Variant) -> FibredCategory:
    Bop = F.base
    B = opposite(Bop)
    concrete = variant.is_concrete
    obj = {}
    objects = []
    for X in B.objects:
        for a in F.fiber[X].objects:
            obj[X, a] = pair_name(X, a)
            objects.append(obj[X, a])
    rows, ends = [], []
    for f in B.names:
        X, Y = B.src[f], B.tgt[f]
        Ff, FX = F.act[f], F.fiber[X]
        for b in F.fiber[Y].objects:
            fb = Ff.object_map[b]
            for phi in FX.names:
                if FX.tgt[phi] != fb:
                    continue
                label = FX.src[phi] if concrete else phi
                rows.append((f, phi, b, label))
                ends.append((obj[X, FX.src[phi]], obj[Y, b]))
    names = _disambiguate(rows, concrete)
    key = {(f, phi, b): n for (f, phi, b, _), n in zip(rows, names)}
    parts = {n: (f, phi, b) for (f, phi, b, _), n in zip(rows, names)}
    morphisms = [(n, s, t) for n, (s, t) in zip(names, ends)]
    identity = {obj[X, a]: key[B.identity[X], F.fiber[X].identity[a], a] for X, a in obj}

    out_of = {}
    for n, s, _ in morphisms:
        out_of.setdefault(s, []).append(n)
    compose = {}
    for n1, _, t1 in morphisms:
        f, phi, _ = parts[n1]
        X = B.src[f]
        for n2 in out_of.get(t1, ()):
            g, psi, c = parts[n2]
            chi = F.fiber[X].compose[F.act[f].morphism_map[psi], phi]
            compose[n2, n1] = key[B.compose[g, f], chi, c]
    total = FinCat(objects, morphisms, identity, compose)
    projection = FinFunctor(
        total, B,
        {obj[k]: k[0] for k in obj},
        {n: parts[n][0] for n in names},
    )
    cleavage = {}
    for f in B.names:
        X, Y = B.src[f], B.tgt[f]
        for b in F.fiber[Y].objects:
            fb = F.act[f].object_map[b]
            cleavage[f, b] = key[f, F.fiber[X].identity[fb], b]
    return FibredCategory(
        total, B, projection, cleavage, variant, {obj[k]: k for k in obj}, parts
    )


def _lift_table(P: FinFunctor, e0, e1):
    """Morphisms e0 -> e1 grouped by their image under P."""
    table = {}
    for h in P.dom.hom(e0, e1):
        table.setdefault(P.morphism_map[h], []).append(h)
    return table


def is_cartesian_for(P: FinFunctor, m) -> bool:
    """Decide P-cartesianness of ``m`` by enumerating every factorization problem."""
    E, B = P.dom, P.cod
    e1, e2 = E.src[m], E.tgt[m]
    Pm = P.morphism_map[m]
    for e0 in E.objects:
        lifts = _lift_table(P, e0, e1)
        for g in E.hom(e0, e2):
            Pg = P.morphism_map[g]
            for w in B.hom(P.object_map.get(e0), P.object_map.get(e1)):
                if B.compose.get((Pm, w)) != Pg:
                    continue
                if sum(1 for h in lifts.get(w, ()) if E.compose[m, h] == g) != 1:
                    return False
    return True


def is_cocartesian_for(P: FinFunctor, m) -> bool:
    E, B = P.dom, P.cod
    e1, e2 = E.src[m], E.tgt[m]
    Pm = P.morphism_map[m]
    for e3 in E.objects:
        lifts = _lift_table(P, e2, e3)
        for g in E.hom(e1, e3):
            Pg = P.morphism_map[g]
            for w in B.hom(P.object_map.get(e2), P.object_map.get(e3)):
                if B.compose.get((w, Pm)) != Pg:
                    continue
                if sum(1 for h in lifts.get(w, ()) if E.compose[h, m] == g) != 1:
                    return False
    return True


def is_cartesian(FC: FibredCategory, m) -> bool:
    return is_cartesian_for(FC.projection, m)


def is_cocartesian(FC: FibredCategory, m) -> bool:
    return is_cocartesian_for(FC.projection, m)


def check_split_fibration(FC: FibredCategory, *, limit=20, fail_fast=False) -> ValidationReport:
    """Check that ``FC`` is a split (op)fibration with the recorded cleavage.

    Left variants have their chosen lifts checked for cocartesianness, right
    variants for cartesianness.
    """
    E, B, P = FC.total, FC.base, FC.projection
    left = Variant.parse(FC.variant).is_left
    by_parts = {v: k for k, v in FC.object_parts.items()}
    fibers = {X: [] for X in B.objects}
    for o, (X, a) in FC.object_parts.items():
        fibers[X].append(a)

    def categories(out):
        for law, C in (("total-category", E), ("base-category", B)):
            r = check_category(C, fail_fast=True)
            if not r.ok:
                out.add(law, (r.violations[0].law,) + r.violations[0].witness)

    def projection(out):
        r = check_functor(P, fail_fast=True)
        if not r.ok:
            out.add("projection", (r.violations[0].law,) + r.violations[0].witness)

    def coverage(out):
        expected = {(f, a) for f in B.names for a in fibers[B.src[f] if left else B.tgt[f]]}
        for k in sorted(expected - set(FC.cleavage), key=str):
            out.add("cleavage-coverage", k)
        for k in sorted(set(FC.cleavage) - expected, key=str):
            out.add("cleavage-coverage", k)

    def anchoring(out):
        for (f, a), m in FC.cleavage.items():
            if m not in E.index:
                out.add("cleavage-projection", (f, a, m))
                continue
            if P.morphism_map[m] != f:
                out.add("cleavage-projection", (f, a, m))
            end = E.src[m] if left else E.tgt[m]
            X = B.src[f] if left else B.tgt[f]
            if end != by_parts.get((X, a)):
                out.add("cleavage-anchor", (f, a, m))

    def universality(out):
        law = "cocartesian" if left else "cartesian"
        test = is_cocartesian_for if left else is_cartesian_for
        for (f, a), m in FC.cleavage.items():
            if m in E.index and not test(P, m):
                out.add(law, (f, a, m))

    def strictness(out):
        cl = FC.cleavage
        for X in B.objects:
            for a in fibers[X]:
                if cl.get((B.identity[X], a)) != E.identity.get(by_parts[X, a]):
                    out.add("strict-identity", (B.identity[X], a))
        for (g, f), gf in B.compose.items():
            if left:
                for a in fibers[B.src[f]]:
                    lf = cl.get((f, a))
                    if lf not in E.index:
                        continue
                    b = FC.object_parts[E.tgt[lf]][1]
                    lg = cl.get((g, b))
                    if E.compose.get((lg, lf)) != cl.get((gf, a)):
                        out.add("strict-composite", (g, f, a))
            else:
                for c in fibers[B.tgt[g]]:
                    lg = cl.get((g, c))
                    if lg not in E.index:
                        continue
                    b = FC.object_parts[E.src[lg]][1]
                    lf = cl.get((f, b))
                    if E.compose.get((lg, lf)) != cl.get((gf, c)):
                        out.add("strict-composite", (g, f, c))

    def fiber_structure(out):
        seen = set()
        for X in B.objects:
            F = FC.fiber(X)
            if seen & set(F.objects):
                out.add("fibers", (X,))
            seen |= set(F.objects)
            if not check_category(F, fail_fast=True).ok:
                out.add("fibers", (X,))
            if Variant.parse(FC.variant).is_concrete and len(F.morphisms) != len(F.objects):
                out.add("fibers", (X,))

    return Collector(limit, fail_fast).run(
        categories, projection, coverage, anchoring, universality, strictness, fiber_structure
    )


def transformation_groupoid(A: GroupAction) -> FinCat:
    """Objects are points; ``(g,x)`` runs from ``x`` to ``g.x``."""
    G = A.group
    name = {(g, x): pair_name(g, x) for g in G.names for x in A.carrier}
    morphisms = [(name[g, x], x, A.table[g, x]) for g in G.names for x in A.carrier]
    compose = {
        (name[h, A.table[g, x]], name[g, x]): name[G.mul(h, g), x]
        for g in G.names for h in G.names for x in A.carrier
    }
    identity = {x: name[G.identity_name, x] for x in A.carrier}
    return FinCat(A.carrier, morphisms, identity, compose)


def contravariant_action(A: GroupAction, obj: str = "*") -> SetValuedAction:
    """``g |-> (x |-> g^-1 . x)`` as a covariant action on the opposite of ``G``."""
    G = A.group
    base = opposite(group_as_category(G, obj))
    act = {g: {x: A.table[G.inv(g), x] for x in A.carrier} for g in G.names}
    return SetValuedAction(base, {obj: A.carrier}, act)


def covariant_action(A: GroupAction, obj: str = "*") -> SetValuedAction:
    G = A.group
    act = {g: {x: A.table[g, x] for x in A.carrier} for g in G.names}
    return SetValuedAction(group_as_category(G, obj), {obj: A.carrier}, act)


@dataclass(frozen=True)
class IsoReport:
    isomorphic: bool
    witness: Optional[tuple]
    count_summary: tuple  # ((objects, morphisms), (objects, morphisms))

    __hash__ = None

    def to_dict(self) -> dict:
        d = {"isomorphic": self.isomorphic, "counts": [list(c) for c in self.count_summary]}
        if self.witness is not None:
            d["object_map"] = self.witness[0].object_map
        return d


def iso_report(C: FinCat, D: FinCat, budget=None, object_map=None, morphism_map=None) -> IsoReport:
    pair = find_isomorphism(C, D, budget, object_map, morphism_map)
    counts = ((len(C.objects), len(C.morphisms)), (len(D.objects), len(D.morphisms)))
    if pair is not None and not are_mutually_inverse(*pair):
        pair = None
    return IsoReport(pair is not None, pair, counts)


def check_transformation_equals_completion(A: GroupAction, budget=None) -> IsoReport:
    """Compare ``X//G`` with the concrete right completion of the induced action.

    The search is seeded with ``(*,x) |-> x`` and same-named morphisms.
    """
    XG = transformation_groupoid(A)
    FC = grothendieck_complete(contravariant_action(A), Variant.CONCRETE_RIGHT)
    seed_objects = {o: parts[1] for o, parts in FC.object_parts.items()}
    seed_morphisms = {m: m for m in FC.total.names if m in XG.index}
    report = iso_report(FC.total, XG, budget, seed_objects, seed_morphisms)
    return report
