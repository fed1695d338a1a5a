"""Groupoids presented as a 7-tuple of sets and structure maps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from ..core.category import Collector, FinCat, ValidationReport
from ..core.constructions import inverse_of, is_groupoid
from ..errors import DomainMismatch, NotAGroupoid


@dataclass(frozen=True)
class InternalGroupoidData:
    """``d0`` is the source map, ``d1`` the target map; ``m[(g, f)]`` is defined
    on pairs with ``d0(g) == d1(f)`` (``f`` first)."""

    G0: tuple
    G1: tuple
    d0: Mapping
    d1: Mapping
    e: Mapping
    m: Mapping
    i: Mapping

    def __post_init__(self):
        for name in ("G0", "G1"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        for name in ("d0", "d1", "e", "m", "i"):
            object.__setattr__(self, name, dict(getattr(self, name)))

    __hash__ = None

    def composable(self) -> list:
        """The fibered product ``G1 x_G0 G1``."""
        return [(g, f) for f in self.G1 for g in self.G1 if self.d0[g] == self.d1[f]]

    def composable_triples(self) -> list:
        return [
            (h, g, f)
            for (g, f) in self.composable()
            for h in self.G1
            if self.d0[h] == self.d1[g]
        ]

    def as_group(self):
        """Collapse to ``(G1, unit, m, i)`` when the object set is a point."""
        if len(self.G0) != 1:
            raise ValueError("only a one-object groupoid collapses to a group")
        (x,) = self.G0
        return self.G1, self.e[x], dict(self.m), dict(self.i)


def check_internal_groupoid(T: InternalGroupoidData, *, limit=20, fail_fast=False) -> ValidationReport:
    objs, mors = set(T.G0), set(T.G1)
    for (g, f) in T.m:
        if g not in mors or f not in mors or T.d0[g] != T.d1[f]:
            raise DomainMismatch(f"m is defined on ({g!r}, {f!r}), outside the fibered product")
    d0, d1, e, m, i = T.d0, T.d1, T.e, T.m, T.i

    def structure_maps(out):
        for f in T.G1:
            if d0.get(f) not in objs or d1.get(f) not in objs:
                out.add("source-target", (f,))
            if i.get(f) not in mors:
                out.add("inverse-map", (f,))
        for x in T.G0:
            if e.get(x) not in mors:
                out.add("identity-section", (x,))

    def identity_section(out):
        for x in T.G0:
            if d0.get(e.get(x)) != x or d1.get(e.get(x)) != x:
                out.add("identity-section", (x,))

    def pullback(out):
        for g, f in T.composable():
            if (g, f) not in m:
                out.add("pullback", (g, f))
            elif m[g, f] not in mors or d0[m[g, f]] != d0[f] or d1[m[g, f]] != d1[g]:
                out.add("multiplication-endpoints", (g, f))

    def units(out):
        for f in T.G1:
            if m.get((e.get(d1[f]), f)) != f:
                out.add("unit", (e.get(d1[f]), f))
            if m.get((f, e.get(d0[f]))) != f:
                out.add("unit", (f, e.get(d0[f])))

    def associativity(out):
        for h, g, f in T.composable_triples():
            left = m.get((h, m.get((g, f))))
            right = m.get((m.get((h, g)), f))
            if left != right:
                out.add("associativity", (h, g, f))

    def inverses(out):
        for f in T.G1:
            g = i.get(f)
            if g not in mors or d0[g] != d1[f] or d1[g] != d0[f]:
                out.add("inverse", (f,))
            elif m.get((g, f)) != e.get(d0[f]) or m.get((f, g)) != e.get(d1[f]):
                out.add("inverse", (f,))

    return Collector(limit, fail_fast).run(
        structure_maps, identity_section, pullback, units, associativity, inverses
    )


def category_to_internal(C: FinCat) -> InternalGroupoidData:
    if not is_groupoid(C):
        raise NotAGroupoid("only groupoids have an internal-groupoid presentation")
    return InternalGroupoidData(
        C.objects,
        C.names,
        dict(C.src),
        dict(C.tgt),
        dict(C.identity),
        dict(C.compose),
        {f: inverse_of(C, f) for f in C.names},
    )
