"""Explicit finite categories, functors between them, and exhaustive validators.

A :class:`FinCat` stores everything: object names, morphism names with their
endpoints, the identity assignment and the full composition table keyed by
``(g, f)`` meaning ``g . f`` (``f`` first).  Nothing is derived lazily from
generators, so every law can be checked by enumeration.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping

import numpy as np

from ..errors import DanglingReference, DuplicateName


@dataclass(frozen=True)
class Violation:
    law: str
    witness: tuple


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def laws(self) -> set:
        return {v.law for v in self.violations}

    def witnesses(self, law: str) -> list:
        return [v.witness for v in self.violations if v.law == law]

    def __add__(self, other: "ValidationReport") -> "ValidationReport":
        return ValidationReport(self.violations + other.violations)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [{"law": v.law, "witness": list(v.witness)} for v in self.violations],
        }


class _Stop(Exception):
    pass


class Collector:
    """Accumulates violations, optionally capped per law or stopping at the first."""

    def __init__(self, limit: int | None = 20, fail_fast: bool = False):
        self.limit = limit
        self.fail_fast = fail_fast
        self.items: list[Violation] = []
        self._counts: Counter = Counter()

    def add(self, law: str, witness: tuple):
        if self.limit is None or self._counts[law] < self.limit:
            self.items.append(Violation(law, tuple(witness)))
        self._counts[law] += 1
        if self.fail_fast:
            raise _Stop

    def run(self, *checks) -> ValidationReport:
        try:
            for check in checks:
                check(self)
        except _Stop:
            pass
        return ValidationReport(tuple(self.items))


@dataclass(frozen=True, eq=True)
class FinCat:
    objects: tuple
    morphisms: tuple  # (name, src, tgt) triples
    identity: Mapping = field(default_factory=dict)
    compose: Mapping = field(default_factory=dict)  # (g, f) -> g.f

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "morphisms", tuple(tuple(m) for m in self.morphisms))
        object.__setattr__(self, "identity", dict(self.identity))
        object.__setattr__(self, "compose", dict(self.compose))

    __hash__ = None

    @classmethod
    def build(cls, objects, morphisms, compose=(), identity=None) -> "FinCat":
        """Assemble a category, filling in every identity-involving composite.

        ``identity`` defaults to fresh ``id_X`` morphisms placed before the
        non-identity ones.  ``compose`` may be a mapping or ``(g, f, gf)`` rows.
        """
        objects = tuple(objects)
        morphisms = [tuple(m) for m in morphisms]
        if identity is None:
            identity = {X: f"id_{X}" for X in objects}
            morphisms = [(identity[X], X, X) for X in objects] + morphisms
        table = dict(compose.items()) if isinstance(compose, Mapping) else {
            (g, f): h for g, f, h in compose
        }
        for name, s, t in morphisms:
            if t in identity:
                table.setdefault((identity[t], name), name)
            if s in identity:
                table.setdefault((name, identity[s]), name)
        return cls(objects, morphisms, identity, table)

    @cached_property
    def names(self) -> tuple:
        return tuple(m[0] for m in self.morphisms)

    @cached_property
    def index(self) -> dict:
        return {name: i for i, name in enumerate(self.names)}

    @cached_property
    def object_index(self) -> dict:
        return {X: i for i, X in enumerate(self.objects)}

    @cached_property
    def src(self) -> dict:
        return {name: s for name, s, _ in self.morphisms}

    @cached_property
    def tgt(self) -> dict:
        return {name: t for name, _, t in self.morphisms}

    @cached_property
    def _homs(self) -> dict:
        homs = defaultdict(list)
        for name, s, t in self.morphisms:
            homs[s, t].append(name)
        return {k: tuple(v) for k, v in homs.items()}

    @cached_property
    def outgoing(self) -> dict:
        out = {X: [] for X in self.objects}
        for name, s, _ in self.morphisms:
            out.setdefault(s, []).append(name)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def incoming(self) -> dict:
        inc = {X: [] for X in self.objects}
        for name, _, t in self.morphisms:
            inc.setdefault(t, []).append(name)
        return {k: tuple(v) for k, v in inc.items()}

    @cached_property
    def identities(self) -> frozenset:
        return frozenset(self.identity.values())

    def hom(self, X, Y) -> tuple:
        return self._homs.get((X, Y), ())

    def comp(self, g, f):
        return self.compose[g, f]

    def is_identity(self, f) -> bool:
        return f in self.identities

    def composable_pairs(self) -> Iterator[tuple]:
        for f in self.names:
            for g in self.outgoing.get(self.tgt[f], ()):
                yield g, f

    def __len__(self):
        return len(self.morphisms)

    def __repr__(self):
        return f"FinCat({len(self.objects)} objects, {len(self.morphisms)} morphisms)"


def _check_names(C: FinCat):
    for kind, names in (("object", C.objects), ("morphism", [m[0] for m in C.morphisms])):
        dup = [n for n, k in Counter(names).items() if k > 1]
        if dup:
            raise DuplicateName(f"duplicate {kind} name {dup[0]!r}")
    objs = set(C.objects)
    for name, s, t in C.morphisms:
        for end in (s, t):
            if end not in objs:
                raise DanglingReference(f"morphism {name!r} mentions unknown object {end!r}")
    mors = C.index
    for X, i in C.identity.items():
        if X not in objs:
            raise DanglingReference(f"identity assigned to unknown object {X!r}")
        if i not in mors:
            raise DanglingReference(f"identity of {X!r} is unknown morphism {i!r}")
    for (g, f), h in C.compose.items():
        for n in (g, f, h):
            if n not in mors:
                raise DanglingReference(f"compose entry ({g!r}, {f!r}) mentions unknown morphism {n!r}")


def _associativity(C: FinCat, out: Collector):
    n = len(C.morphisms)
    if n == 0:
        return
    idx = C.index
    # row/column n is a sentinel for "undefined"
    table = np.full((n + 1, n + 1), n, dtype=np.int64)
    for (g, f), h in C.compose.items():
        if C.tgt[f] == C.src[g]:
            table[idx[g], idx[f]] = idx[h]
    names = C.names
    for Y in C.objects:
        pairs = [(idx[g], idx[f]) for f in C.names for g in C.outgoing[C.tgt[f]] if C.tgt[g] == Y]
        hs = [idx[h] for h in C.outgoing[Y]]
        if not pairs or not hs:
            continue
        G = np.array([p[0] for p in pairs])
        F = np.array([p[1] for p in pairs])
        GF = table[G, F]
        H = np.array(hs)[:, None]
        left = table[H, GF[None, :]]
        right = table[table[H, G[None, :]], F[None, :]]
        defined = (left < n) & (right < n)
        bad = np.argwhere(defined & (left != right))
        for a, b in bad:
            out.add("associativity", (names[hs[a]], names[G[b]], names[F[b]]))


def check_category(C: FinCat, *, limit: int | None = 20, fail_fast: bool = False) -> ValidationReport:
    """Check the category laws exhaustively.

    Raises :class:`DuplicateName` or :class:`DanglingReference` for malformed
    presentations; law failures come back as violations with witnesses.
    Associativity witnesses are ``(h, g, f)`` for ``h.(g.f) != (h.g).f``.
    """
    _check_names(C)
    src, tgt, comp = C.src, C.tgt, C.compose

    def identities(out):
        for X in C.objects:
            i = C.identity.get(X)
            if i is None:
                out.add("identity", (X,))
            elif src[i] != X or tgt[i] != X:
                out.add("identity", (X, i))

    def domain(out):
        for (g, f) in comp:
            if tgt[f] != src[g]:
                out.add("domain", (g, f))

    def totality(out):
        for g, f in C.composable_pairs():
            if (g, f) not in comp:
                out.add("totality", (g, f))

    def endpoints(out):
        for (g, f), h in comp.items():
            if tgt[f] == src[g] and (src[h] != src[f] or tgt[h] != tgt[g]):
                out.add("endpoints", (g, f, h))

    def units(out):
        for f in C.names:
            left = C.identity.get(tgt[f])
            right = C.identity.get(src[f])
            if left is not None and comp.get((left, f), f) != f:
                out.add("unit", (left, f))
            if right is not None and comp.get((f, right), f) != f:
                out.add("unit", (f, right))

    return Collector(limit, fail_fast).run(
        identities, domain, totality, endpoints, units, lambda out: _associativity(C, out)
    )


@dataclass(frozen=True)
class FinFunctor:
    dom: FinCat
    cod: FinCat
    object_map: Mapping
    morphism_map: Mapping

    def __post_init__(self):
        object.__setattr__(self, "object_map", dict(self.object_map))
        object.__setattr__(self, "morphism_map", dict(self.morphism_map))

    __hash__ = None

    def ob(self, X):
        return self.object_map[X]

    def mor(self, f):
        return self.morphism_map[f]

    @classmethod
    def identity(cls, C: FinCat) -> "FinFunctor":
        return cls(C, C, {X: X for X in C.objects}, {f: f for f in C.names})

    def then(self, G: "FinFunctor") -> "FinFunctor":
        """``G . self``."""
        return compose_functors(G, self)

    def same_maps(self, other: "FinFunctor") -> bool:
        return self.object_map == other.object_map and self.morphism_map == other.morphism_map

    def __repr__(self):
        return f"FinFunctor({self.dom!r} -> {self.cod!r})"


def compose_functors(G: FinFunctor, F: FinFunctor) -> FinFunctor:
    """``G . F`` (``F`` applied first)."""
    return FinFunctor(
        F.dom,
        G.cod,
        {X: G.object_map.get(Y) for X, Y in F.object_map.items()},
        {f: G.morphism_map.get(g) for f, g in F.morphism_map.items()},
    )


def check_functor(F: FinFunctor, *, limit: int | None = 20, fail_fast: bool = False) -> ValidationReport:
    C, D = F.dom, F.cod
    for X in C.objects:
        if F.object_map.get(X) not in D.object_index:
            raise DanglingReference(f"object {X!r} maps to {F.object_map.get(X)!r}, not an object of the codomain")
    for f in C.names:
        if F.morphism_map.get(f) not in D.index:
            raise DanglingReference(f"morphism {f!r} maps to {F.morphism_map.get(f)!r}, not a morphism of the codomain")
    ob, mor = F.object_map, F.morphism_map

    def ends(out):
        for f in C.names:
            if D.src[mor[f]] != ob[C.src[f]]:
                out.add("source", (f,))
            if D.tgt[mor[f]] != ob[C.tgt[f]]:
                out.add("target", (f,))

    def identities(out):
        for X in C.objects:
            if mor[C.identity[X]] != D.identity.get(ob[X]):
                out.add("identity", (X,))

    def composition(out):
        for (g, f), h in C.compose.items():
            if D.compose.get((mor[g], mor[f])) != mor[h]:
                out.add("composition", (g, f))

    return Collector(limit, fail_fast).run(ends, identities, composition)


def fiber_subcategory(C: FinCat, objects: Iterable, morphisms: Iterable) -> FinCat:
    """Restrict ``C`` to the given objects and morphisms, keeping ``C``'s order."""
    keep_o = set(objects)
    keep_m = set(morphisms)
    obs = [X for X in C.objects if X in keep_o]
    mors = [m for m in C.morphisms if m[0] in keep_m]
    ident = {X: C.identity[X] for X in obs if X in C.identity}
    comp = {(g, f): h for (g, f), h in C.compose.items() if g in keep_m and f in keep_m}
    return FinCat(obs, mors, ident, comp)
