"""Group actions on finite sets and their permutation representations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from ..core.category import Collector, FinCat, ValidationReport
from ..errors import IncompleteTable
from .perm import PermGroup


@dataclass(frozen=True)
class GroupAction:
    """``table[(g, x)]`` is ``g . x`` for element name ``g`` and point ``x``."""

    group: PermGroup
    carrier: tuple
    table: Mapping

    def __post_init__(self):
        object.__setattr__(self, "carrier", tuple(self.carrier))
        object.__setattr__(self, "table", dict(self.table))

    __hash__ = None

    def __call__(self, g, x):
        return self.table[g, x]


@dataclass(frozen=True)
class RepTable:
    """``phi[g]`` lists the images of the carrier points, in carrier order."""

    group: PermGroup
    carrier: tuple
    phi: Mapping

    def __post_init__(self):
        object.__setattr__(self, "carrier", tuple(self.carrier))
        object.__setattr__(self, "phi", {g: tuple(v) for g, v in self.phi.items()})

    __hash__ = None


def natural_action(G: PermGroup, carrier=None) -> GroupAction:
    """``G`` acting on its points, labelled ``"1".."n"`` unless ``carrier`` is given."""
    carrier = tuple(carrier) if carrier is not None else tuple(str(i) for i in range(1, G.degree + 1))
    table = {
        (name, carrier[i - 1]): carrier[p(i) - 1]
        for p, name in zip(G.elements, G.names)
        for i in range(1, G.degree + 1)
    }
    return GroupAction(G, carrier, table)


def check_action(A: GroupAction, *, limit=20, fail_fast=False) -> ValidationReport:
    G, X = A.group, A.carrier
    for g in G.names:
        for x in X:
            if (g, x) not in A.table:
                raise IncompleteTable(f"no entry for ({g!r}, {x!r})")
    points = set(X)
    e = G.identity_name

    def closure(out):
        for (g, x), y in A.table.items():
            if y not in points:
                out.add("closure", (g, x))

    def identity(out):
        for x in X:
            if A.table[e, x] != x:
                out.add("identity", (e, x))

    def compatibility(out):
        for g2 in G.names:
            for g1 in G.names:
                g21 = G.mul(g2, g1)
                for x in X:
                    if A.table.get((g2, A.table[g1, x])) != A.table[g21, x]:
                        out.add("compatibility", (g2, g1, x))

    return Collector(limit, fail_fast).run(closure, identity, compatibility)


def check_rep(R: RepTable, *, limit=20, fail_fast=False) -> ValidationReport:
    G, X = R.group, R.carrier
    pos = {x: i for i, x in enumerate(X)}

    def bijective(out):
        for g in G.names:
            if g not in R.phi:
                raise IncompleteTable(f"no permutation for {g!r}")
            if sorted(R.phi[g], key=lambda y: pos.get(y, -1)) != list(X):
                out.add("bijection", (g,))

    def homomorphism(out):
        if R.phi[G.identity_name] != X:
            out.add("identity", (G.identity_name,))
        for a in G.names:
            for b in G.names:
                composite = tuple(R.phi[a][pos[y]] for y in R.phi[b])
                if composite != R.phi[G.mul(a, b)]:
                    out.add("homomorphism", (a, b))

    return Collector(limit, fail_fast).run(bijective, homomorphism)


def action_to_rep(A: GroupAction) -> RepTable:
    return RepTable(A.group, A.carrier, {g: tuple(A.table[g, x] for x in A.carrier) for g in A.group.names})


def rep_to_action(R: RepTable) -> GroupAction:
    return GroupAction(
        R.group, R.carrier, {(g, x): R.phi[g][i] for g in R.group.names for i, x in enumerate(R.carrier)}
    )


def orbits_stabilizers(A: GroupAction) -> list:
    """One ``(orbit, stabilizer)`` per orbit, the orbit listed in carrier order
    and the stabilizer taken at its first point."""
    G = A.group
    seen, result = set(), []
    for x in A.carrier:
        if x in seen:
            continue
        reached = {A.table[g, x] for g in G.names}
        orbit = tuple(y for y in A.carrier if y in reached)
        seen |= reached
        stab = G.subgroup([p for p, g in zip(G.elements, G.names) if A.table[g, x] == x])
        result.append((orbit, stab))
    return result


def group_as_category(G: PermGroup, obj: str = "*") -> FinCat:
    return FinCat(
        (obj,),
        [(g, obj, obj) for g in G.names],
        {obj: G.identity_name},
        dict(G.mult),
    )
