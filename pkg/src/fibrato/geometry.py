"""Finite Klein geometries (group, subgroup) and groupoid geometries
(groupoid, wide subgroupoid), with their coset spaces and completions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .algebra.action import GroupAction, group_as_category
from .algebra.perm import PermGroup
from .core.actions import SetValuedAction
from .core.category import Collector, FinCat, ValidationReport, check_category
from .core.constructions import connected_components, inverse_of, is_groupoid, vertex_group
from .errors import NotASubgroup, NotWideSubgroupoid
from .grothendieck import Variant, grothendieck_complete, iso_report, transformation_groupoid


@dataclass(frozen=True)
class KleinPair:
    G: PermGroup
    H: PermGroup

    __hash__ = None

    def validate(self):
        parent = set(self.G.elements)
        if not set(self.H.elements) <= parent:
            raise NotASubgroup("H contains permutations outside G")
        self.G.subgroup(self.H.elements)
        return self


@dataclass(frozen=True)
class CosetSpace:
    points: tuple
    action: object  # GroupAction, or SetValuedAction for groupoid geometries
    basepoints: tuple

    __hash__ = None


def klein_space(K: KleinPair) -> CosetSpace:
    """Left cosets ``gH`` labelled by their least element in ``G``'s order."""
    K.validate()
    G, H = K.G, K.H
    coset_of, points = {}, []
    for g, name in zip(G.elements, G.names):
        if g in coset_of:
            continue
        label = f"{name}H"
        points.append(label)
        for h in H.elements:
            coset_of[g * h] = label
    rep = {label: None for label in points}
    for g in G.elements:
        if rep[coset_of[g]] is None:
            rep[coset_of[g]] = g
    table = {
        (name, label): coset_of[g * rep[label]]
        for g, name in zip(G.elements, G.names)
        for label in points
    }
    action = GroupAction(G, points, table)
    return CosetSpace(tuple(points), action, (coset_of[G.elements[0]],))


@dataclass(frozen=True)
class KleinReport:
    transitive: bool
    components_of_X_mod_G: int
    vertex_group_order_at_basepoint: int
    vertex_group_equals_H: bool
    H_order: int
    completion_counts: dict  # name -> (objects, morphisms)
    completion_components: int
    iso_probe: bool
    iso_witness: Optional[tuple] = None
    obstruction: str = ""

    __hash__ = None

    def to_dict(self) -> dict:
        return {
            "transitive": self.transitive,
            "components_of_X_mod_G": self.components_of_X_mod_G,
            "vertex_group_order_at_basepoint": self.vertex_group_order_at_basepoint,
            "vertex_group_equals_H": self.vertex_group_equals_H,
            "H_order": self.H_order,
            "completion_counts": {k: list(v) for k, v in self.completion_counts.items()},
            "completion_components": self.completion_components,
            "iso_probe": self.iso_probe,
            "obstruction": self.obstruction,
        }


def subgroup_action(space: CosetSpace, H: PermGroup) -> SetValuedAction:
    """``H`` acting on the coset space by left multiplication, as a Set-valued functor."""
    A = space.action
    base = group_as_category(H)
    act = {h: {x: A.table[h, x] for x in space.points} for h in H.names}
    return SetValuedAction(base, {"*": space.points}, act)


def check_klein(K: KleinPair, budget=None) -> KleinReport:
    """Build ``X//G`` and the completion of ``H`` acting on ``X`` and report on both.

    The isomorphism probe is only attempted when the counts agree; otherwise
    the count obstruction is recorded.
    """
    space = klein_space(K)
    XG = transformation_groupoid(space.action)
    comps = connected_components(XG)
    base_point = space.basepoints[0]
    V = vertex_group(XG, base_point)
    stab = {name[1:].rpartition(",")[0] for name in V.names}
    completion = grothendieck_complete(subgroup_action(space, K.H), Variant.CONCRETE_LEFT).total
    counts = {
        "X//G": (len(XG.objects), len(XG.morphisms)),
        "H-completion": (len(completion.objects), len(completion.morphisms)),
    }
    if counts["X//G"] != counts["H-completion"]:
        probe, witness = False, None
        obstruction = (
            f"count obstruction: X//G has {counts['X//G'][1]} morphisms, "
            f"the H-completion has {counts['H-completion'][1]}"
        )
    else:
        rep = iso_report(completion, XG, budget)
        probe, witness = rep.isomorphic, rep.witness
        obstruction = "" if probe else "no isomorphism found by exhaustive search"
    return KleinReport(
        transitive=len(comps) == 1,
        components_of_X_mod_G=len(comps),
        vertex_group_order_at_basepoint=len(V.morphisms),
        vertex_group_equals_H=stab == set(K.H.names),
        H_order=K.H.order,
        completion_counts=counts,
        completion_components=len(connected_components(completion)),
        iso_probe=probe,
        iso_witness=witness,
        obstruction=obstruction,
    )


@dataclass(frozen=True)
class GroupoidGeometry:
    G: FinCat
    B: FinCat

    __hash__ = None

    def validate(self):
        G, B = self.G, self.B
        if not is_groupoid(G):
            raise NotWideSubgroupoid("the principal category is not a groupoid")
        if tuple(B.objects) != tuple(G.objects):
            raise NotWideSubgroupoid("subgroupoid must have exactly the objects of the groupoid")
        for f, s, t in B.morphisms:
            if f not in G.index or G.src[f] != s or G.tgt[f] != t:
                raise NotWideSubgroupoid(f"{f!r} is not a morphism of the groupoid with the same endpoints")
        keep = set(B.names)
        for X in G.objects:
            if G.identity[X] not in keep or B.identity.get(X) != G.identity[X]:
                raise NotWideSubgroupoid(f"identity of {X!r} missing from the subgroupoid")
        for f in B.names:
            if inverse_of(G, f) not in keep:
                raise NotWideSubgroupoid(f"inverse of {f!r} missing from the subgroupoid")
            for g in B.outgoing[B.tgt[f]]:
                if G.compose[g, f] not in keep or B.compose.get((g, f)) != G.compose[g, f]:
                    raise NotWideSubgroupoid(f"subgroupoid not closed at ({g!r}, {f!r})")
        return self


def wide_subgroupoid(G: FinCat, names) -> FinCat:
    """The subcategory of ``G`` on all objects and the given morphisms plus identities."""
    keep = set(names) | set(G.identity.values())
    return FinCat(
        G.objects,
        [m for m in G.morphisms if m[0] in keep],
        G.identity,
        {(g, f): h for (g, f), h in G.compose.items() if g in keep and f in keep},
    )


def groupoid_coset_space(GG: GroupoidGeometry) -> CosetSpace:
    """Classes ``[g] = {g . b}`` for ``b`` in ``B`` ending at ``src g``; ``G`` acts
    by postcomposition, so ``[g]`` lies over ``tgt g``.  Labels are ``[rep]``
    with ``rep`` the first member in ``G``'s morphism order."""
    GG.validate()
    G, B = GG.G, GG.B
    cls = {}
    labels = []
    for g in G.names:
        if g in cls:
            continue
        label = f"[{g}]"
        labels.append(label)
        for b in B.incoming[G.src[g]]:
            cls[G.compose[g, b]] = label
    rep = {}
    for g in G.names:
        rep.setdefault(cls[g], g)
    over = {X: tuple(l for l in labels if G.tgt[rep[l]] == X) for X in G.objects}
    act = {
        h: {l: cls[G.compose[h, rep[l]]] for l in over[G.src[h]]}
        for h in G.names
    }
    action = SetValuedAction(G, over, act)
    basepoints = tuple(cls[G.identity[X]] for X in G.objects)
    return CosetSpace(tuple(labels), action, basepoints)


def check_groupoid_geometry(GG: GroupoidGeometry) -> tuple:
    """Return ``(report, rows)``: laws checked plus the data of the groupoid
    column of the Klein/groupoid comparison (blocks, basepoints, local groups)."""
    GG.validate()
    G, B = GG.G, GG.B
    space = groupoid_coset_space(GG)
    A = space.action
    comps = connected_components(G)
    comp_of = {X: k for k, block in enumerate(comps) for X in block}
    anchor = {p: X for X, pts in A.fiber.items() for p in pts}
    restricted = SetValuedAction(B, A.fiber, {f: A.act[f] for f in B.names})
    completion = grothendieck_complete(restricted, Variant.CONCRETE_LEFT)

    def action_laws(out):
        r = A.check(fail_fast=True)
        if not r.ok:
            out.add("action", r.violations[0].witness)

    def coproduct(out):
        for h, table in A.act.items():
            for p, q in table.items():
                if comp_of[anchor[p]] != comp_of[anchor[q]]:
                    out.add("coproduct", (h, p))

    def stabilizers(out):
        for X, x in zip(G.objects, space.basepoints):
            stab = {h for h in G.hom(X, X) if A.act[h][x] == x}
            if stab != set(B.hom(X, X)):
                out.add("stabilizer", (X, x))

    def completion_law(out):
        if not check_category(completion.total, fail_fast=True).ok:
            out.add("completion", ())

    report = Collector().run(action_laws, coproduct, stabilizers, completion_law)
    rows = {
        "principal_groupoid": {"objects": len(G.objects), "morphisms": len(G.morphisms)},
        "subgroupoid": {"morphisms": len(B.morphisms)},
        "coproduct_blocks": [
            [p for p in space.points if comp_of[anchor[p]] == k] for k in range(len(comps))
        ],
        "basepoints": list(space.basepoints),
        "local_groups": {X: len(B.hom(X, X)) for X in G.objects},
        "completion": {
            "objects": len(completion.total.objects),
            "morphisms": len(completion.total.morphisms),
        },
    }
    return report, rows
