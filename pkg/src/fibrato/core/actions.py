"""Strict functors out of a finite base into Set or Cat."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from ..errors import NonFunctorialAction
from .category import Collector, FinCat, FinFunctor, ValidationReport, check_category, check_functor


@dataclass(frozen=True)
class SetValuedAction:
    """``fiber[X]`` is a tuple of point names; ``act[f]`` maps points of the
    source fiber to points of the target fiber."""

    base: FinCat
    fiber: Mapping
    act: Mapping

    def __post_init__(self):
        object.__setattr__(self, "fiber", {X: tuple(v) for X, v in self.fiber.items()})
        object.__setattr__(self, "act", {f: dict(m) for f, m in self.act.items()})

    __hash__ = None

    def __call__(self, f, x):
        return self.act[f][x]

    def check(self, *, limit=20, fail_fast=False) -> ValidationReport:
        B = self.base

        def totality(out):
            for X in B.objects:
                if X not in self.fiber:
                    out.add("fiber", (X,))
            for f in B.names:
                table = self.act.get(f)
                if table is None:
                    out.add("totality", (f,))
                    continue
                codomain = set(self.fiber.get(B.tgt[f], ()))
                for x in self.fiber.get(B.src[f], ()):
                    if table.get(x) not in codomain:
                        out.add("totality", (f, x))

        def identities(out):
            for X in B.objects:
                table = self.act.get(B.identity[X], {})
                for x in self.fiber.get(X, ()):
                    if table.get(x) != x:
                        out.add("identity", (B.identity[X], x))

        def composition(out):
            for (g, f), h in B.compose.items():
                for x in self.fiber.get(B.src[f], ()):
                    y = self.act.get(f, {}).get(x)
                    if self.act.get(g, {}).get(y) != self.act.get(h, {}).get(x):
                        out.add("composition", (g, f, x))

        return Collector(limit, fail_fast).run(totality, identities, composition)

    def validate(self, level=None):
        report = self.check(fail_fast=True)
        if not report.ok:
            v = report.violations[0]
            raise NonFunctorialAction(f"{v.law} fails at {v.witness}", witness=v.witness, level=level)
        return self

    def to_cat_valued(self) -> "CatValuedAction":
        """Compose with the inclusion of sets as discrete categories."""
        from .constructions import discrete_category

        fibers = {X: discrete_category(pts) for X, pts in self.fiber.items()}
        act = {}
        for f in self.base.names:
            D = fibers[self.base.src[f]]
            E = fibers[self.base.tgt[f]]
            table = self.act[f]
            act[f] = FinFunctor(
                D, E,
                {x: table[x] for x in D.objects},
                {D.identity[x]: E.identity[table[x]] for x in D.objects},
            )
        return CatValuedAction(self.base, fibers, act)


@dataclass(frozen=True)
class CatValuedAction:
    base: FinCat
    fiber: Mapping
    act: Mapping

    def __post_init__(self):
        object.__setattr__(self, "fiber", dict(self.fiber))
        object.__setattr__(self, "act", dict(self.act))

    __hash__ = None

    def check(self, *, limit=20, fail_fast=False) -> ValidationReport:
        B = self.base

        def shapes(out):
            for X in B.objects:
                if X not in self.fiber:
                    out.add("fiber", (X,))
                elif not check_category(self.fiber[X], fail_fast=True).ok:
                    out.add("fiber-category", (X,))
            for f in B.names:
                F = self.act.get(f)
                if F is None:
                    out.add("totality", (f,))
                    continue
                if F.dom is not self.fiber.get(B.src[f]) and F.dom != self.fiber.get(B.src[f]):
                    out.add("domain", (f,))
                elif F.cod is not self.fiber.get(B.tgt[f]) and F.cod != self.fiber.get(B.tgt[f]):
                    out.add("codomain", (f,))
                elif not check_functor(F, fail_fast=True).ok:
                    out.add("functor", (f,))

        def identities(out):
            for X in B.objects:
                F = self.act.get(B.identity[X])
                if F is not None and not F.same_maps(FinFunctor.identity(self.fiber[X])):
                    out.add("identity", (B.identity[X],))

        def composition(out):
            for (g, f), h in B.compose.items():
                Fg, Ff, Fh = self.act.get(g), self.act.get(f), self.act.get(h)
                if None in (Fg, Ff, Fh):
                    continue
                ok = all(Fg.object_map.get(Ff.object_map[x]) == Fh.object_map[x] for x in Ff.object_map)
                ok = ok and all(
                    Fg.morphism_map.get(Ff.morphism_map[m]) == Fh.morphism_map[m] for m in Ff.morphism_map
                )
                if not ok:
                    out.add("composition", (g, f))

        return Collector(limit, fail_fast).run(shapes, identities, composition)

    def validate(self, level=None):
        report = self.check(fail_fast=True)
        if not report.ok:
            v = report.violations[0]
            raise NonFunctorialAction(f"{v.law} fails at {v.witness}", witness=v.witness, level=level)
        return self
