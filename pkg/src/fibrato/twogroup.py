"""Automorphism 2-groups of small categories and their naturality squares."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product as _cartesian
from typing import Mapping, Optional

from .core.category import Collector, FinCat, FinFunctor, ValidationReport, compose_functors
from .core.constructions import inverse_of
from .core.iso import iter_isomorphisms
from .errors import BudgetExceeded, FiberMismatch
from .grothendieck import FibredCategory


@dataclass(frozen=True)
class TwoCell:
    """A natural isomorphism between 1-cells ``source`` and ``target`` (indices)."""

    source: int
    target: int
    components: tuple  # ((object, morphism), ...) in object order

    @cached_property
    def at(self) -> dict:
        return dict(self.components)


def _functor_key(F: FinFunctor, C: FinCat):
    return tuple(F.object_map[X] for X in C.objects), tuple(F.morphism_map[f] for f in C.names)


def is_natural(C: FinCat, gamma: FinFunctor, gamma2: FinFunctor, comps: Mapping) -> bool:
    for f in C.names:
        x, y = C.src[f], C.tgt[f]
        if C.compose.get((gamma2.morphism_map[f], comps[x])) != C.compose.get((comps[y], gamma.morphism_map[f])):
            return False
    return True


def natural_isomorphisms(C: FinCat, gamma: FinFunctor, gamma2: FinFunctor) -> list:
    """All natural isomorphisms ``gamma => gamma2``, components chosen object by
    object with naturality checked as soon as both ends are assigned."""
    objs = C.objects
    pos = {X: i for i, X in enumerate(objs)}
    # morphisms whose later endpoint is objs[i]; checked once objs[i] is assigned
    due = {i: [] for i in range(len(objs))}
    for f in C.names:
        due[max(pos[C.src[f]], pos[C.tgt[f]])].append(f)
    iso = {f: inverse_of(C, f) is not None for f in C.names}
    found, comps = [], {}

    def rec(i):
        if i == len(objs):
            found.append(tuple((X, comps[X]) for X in objs))
            return
        X = objs[i]
        for a in C.hom(gamma.object_map[X], gamma2.object_map[X]):
            if not iso[a]:
                continue
            comps[X] = a
            ok = all(
                C.compose.get((gamma2.morphism_map[f], comps[C.src[f]]))
                == C.compose.get((comps[C.tgt[f]], gamma.morphism_map[f]))
                for f in due[i]
            )
            if ok:
                rec(i + 1)
            del comps[X]

    rec(0)
    return found


class TwoGroup:
    """One object; 1-cells are invertible endofunctors (identity first) and
    2-cells the natural isomorphisms between each ordered pair of them."""

    def __init__(self, base_object: FinCat, one_cells):
        C = base_object
        self.base_object = C
        self.one_cells = list(one_cells)
        self._index = {_functor_key(F, C): i for i, F in enumerate(self.one_cells)}
        self.two_cells = {}
        for i, j in _cartesian(range(len(self.one_cells)), repeat=2):
            self.two_cells[i, j] = [
                TwoCell(i, j, comps)
                for comps in natural_isomorphisms(C, self.one_cells[i], self.one_cells[j])
            ]

    def index_of(self, F: FinFunctor) -> Optional[int]:
        return self._index.get(_functor_key(F, self.base_object))

    @cached_property
    def all_two_cells(self) -> list:
        return [c for key in sorted(self.two_cells) for c in self.two_cells[key]]

    @cached_property
    def _cell_id(self) -> dict:
        return {c: k for k, c in enumerate(self.all_two_cells)}

    @cached_property
    def compose_table(self) -> dict:
        """``(i, j) -> k`` with ``one_cells[k] = one_cells[i] . one_cells[j]`` (or None)."""
        return {
            (i, j): self.index_of(compose_functors(self.one_cells[i], self.one_cells[j]))
            for i, j in _cartesian(range(len(self.one_cells)), repeat=2)
        }

    def identity_cell(self, i: int) -> TwoCell:
        C = self.base_object
        F = self.one_cells[i]
        return TwoCell(i, i, tuple((X, C.identity[F.object_map[X]]) for X in C.objects))

    def vertical(self, chi2: TwoCell, chi1: TwoCell) -> TwoCell:
        """``chi2 . chi1`` for ``chi1: g => g'`` and ``chi2: g' => g''``."""
        C = self.base_object
        if chi1.target != chi2.source:
            raise ValueError("2-cells are not vertically composable")
        return TwoCell(
            chi1.source, chi2.target,
            tuple((X, C.compose[chi2.at[X], chi1.at[X]]) for X in C.objects),
        )

    def horizontal(self, psi: TwoCell, chi: TwoCell) -> TwoCell:
        """``psi * chi`` for ``chi: g => g'``, ``psi: d => d'``; its component at
        ``x`` is ``psi_{g' x} . d(chi_x)``."""
        C = self.base_object
        d = self.one_cells[psi.source]
        g2 = self.one_cells[chi.target]
        src = self.compose_table[psi.source, chi.source]
        tgt = self.compose_table[psi.target, chi.target]
        comps = tuple(
            (X, C.compose[psi.at[g2.object_map[X]], d.morphism_map[chi.at[X]]]) for X in C.objects
        )
        return TwoCell(src, tgt, comps)

    @cached_property
    def vertical_table(self) -> dict:
        ids = self._cell_id
        table = {}
        for c1 in self.all_two_cells:
            for c2 in self.all_two_cells:
                if c1.target == c2.source:
                    table[ids[c2], ids[c1]] = ids.get(self.vertical(c2, c1))
        return table

    @cached_property
    def horizontal_table(self) -> dict:
        ids = self._cell_id
        return {
            (ids[p], ids[c]): ids.get(self.horizontal(p, c))
            for p in self.all_two_cells
            for c in self.all_two_cells
        }

    def summary(self) -> dict:
        return {
            "objects": len(self.base_object.objects),
            "morphisms": len(self.base_object.morphisms),
            "one_cells": len(self.one_cells),
            "two_cells": len(self.all_two_cells),
        }


def aut_2group(C: FinCat, budget: Optional[int] = None, max_objects: int = 4, max_morphisms: int = 24) -> TwoGroup:
    if len(C.objects) > max_objects or len(C.morphisms) > max_morphisms:
        raise BudgetExceeded(
            f"category has {len(C.objects)} objects / {len(C.morphisms)} morphisms; "
            f"limits are {max_objects} / {max_morphisms}"
        )
    cells = list(iter_isomorphisms(C, C, budget))
    ident = FinFunctor.identity(C)
    cells.sort(key=lambda F: (not F.same_maps(ident), _functor_key(F, C)))
    return TwoGroup(C, cells)


def functor_from_object_map(C: FinCat, object_map: Mapping) -> FinFunctor:
    """Extend an object map to a functor on a category with at most one morphism per hom."""
    mor = {}
    for f in C.names:
        (g,) = C.hom(object_map[C.src[f]], object_map[C.tgt[f]])
        mor[f] = g
    return FinFunctor(C, C, object_map, mor)


def sub_2group(C: FinCat, generators, max_one_cells: int = 10_000) -> TwoGroup:
    """The 2-group on the closure of ``generators`` under composition."""
    ident = FinFunctor.identity(C)
    cells = [ident]
    seen = {_functor_key(ident, C)}
    frontier = [ident]
    while frontier:
        nxt = []
        for F in frontier:
            for g in generators:
                H = compose_functors(g, F)
                key = _functor_key(H, C)
                if key not in seen:
                    seen.add(key)
                    cells.append(H)
                    nxt.append(H)
                    if len(cells) > max_one_cells:
                        raise BudgetExceeded("sub-2-group closure exceeded its limit")
        frontier = nxt
    return TwoGroup(C, cells)


def check_two_group(T: TwoGroup, *, limit=20, fail_fast=False) -> ValidationReport:
    C = T.base_object
    n = len(T.one_cells)

    def closure(out):
        for (i, j), k in T.compose_table.items():
            if k is None:
                out.add("closure", (i, j))

    def inverses(out):
        e = 0
        for i in range(n):
            if not any(T.compose_table[i, j] == e and T.compose_table[j, i] == e for j in range(n)):
                out.add("inverse-1cell", (i,))
        for c in T.all_two_cells:
            inv = {X: inverse_of(C, a) for X, a in c.components}
            if None in inv.values():
                out.add("inverse-2cell", (c.source, c.target))
                continue
            back = TwoCell(c.target, c.source, tuple((X, inv[X]) for X in C.objects))
            if back not in T.two_cells[c.target, c.source]:
                out.add("inverse-2cell", (c.source, c.target))

    def naturality(out):
        for c in T.all_two_cells:
            if not is_natural(C, T.one_cells[c.source], T.one_cells[c.target], c.at):
                out.add("naturality", (c.source, c.target, c.components))

    def interchange(out):
        V, H = T.vertical_table, T.horizontal_table
        cells_from = {}
        for k, c in enumerate(T.all_two_cells):
            cells_from.setdefault(c.source, []).append((k, c))
        for k1, chi1 in enumerate(T.all_two_cells):
            for k2, chi2 in cells_from.get(chi1.target, ()):
                for p1, psi1 in enumerate(T.all_two_cells):
                    for p2, _ in cells_from.get(psi1.target, ()):
                        left = H.get((V[p2, p1], V[k2, k1]))
                        right = V.get((H[p2, k2], H[p1, k1]))
                        if left is None or left != right:
                            out.add("interchange", (p2, p1, k2, k1))

    return Collector(limit, fail_fast).run(closure, inverses, naturality, interchange)


@dataclass(frozen=True)
class NaturalitySquare:
    """Corners ``(g x, g y, g' x, g' y)``; edges ``top = g(f)``,
    ``bottom = g'(f)``, ``left = chi_x``, ``right = chi_y``."""

    corners: tuple
    edges: tuple  # (top, bottom, left, right)
    cell: tuple  # (chi_x, chi_y)
    commutes: bool
    label: str = "chi"

    def to_dict(self) -> dict:
        top, bottom, left, right = self.edges
        return {
            "corners": list(self.corners),
            "edges": {"top": top, "bottom": bottom, "left": left, "right": right},
            "cell": list(self.cell),
            "commutes": self.commutes,
        }


def _commutes(C: FinCat, top, bottom, left, right) -> bool:
    a = C.compose.get((bottom, left))
    b = C.compose.get((right, top))
    return a is not None and a == b


def naturality_square(T: TwoGroup, chi: TwoCell, f, label: str = "chi") -> NaturalitySquare:
    """The square ``g'(f) . chi_x = chi_y . g(f)``; ``commutes`` is computed, not assumed."""
    C = T.base_object
    g, g2 = T.one_cells[chi.source], T.one_cells[chi.target]
    x, y = C.src[f], C.tgt[f]
    comps = chi.at
    top, bottom = g.morphism_map[f], g2.morphism_map[f]
    left, right = comps[x], comps[y]
    corners = (g.object_map[x], g.object_map[y], g2.object_map[x], g2.object_map[y])
    return NaturalitySquare(corners, (top, bottom, left, right), (left, right), _commutes(C, top, bottom, left, right), label)


def embed_square_at_node(sq: NaturalitySquare, FC: FibredCategory, node) -> NaturalitySquare:
    """Prefix a square living in the fiber over ``node`` with ``(node, -)`` / ``(id_node, -)``."""
    objects = {v: k for k, v in FC.object_parts.items()}
    morphisms = {v: k for k, v in FC.morphism_parts.items()}
    ident = FC.base.identity.get(node)
    if ident is None:
        raise FiberMismatch(f"{node!r} is not an object of the base")
    corners = []
    for c in sq.corners:
        if (node, c) not in objects:
            raise FiberMismatch(f"corner {c!r} does not lie in the fiber over {node!r}")
        corners.append(objects[node, c])
    edges = []
    # each edge starts at a known corner: top at gx, bottom at g'x, left at gx, right at gy
    starts = (sq.corners[0], sq.corners[2], sq.corners[0], sq.corners[1])
    for e, s in zip(sq.edges, starts):
        key = (ident, e, s)
        if key not in morphisms:
            raise FiberMismatch(f"edge {e!r} does not lie in the fiber over {node!r}")
        edges.append(morphisms[key])
    top, bottom, left, right = edges
    return NaturalitySquare(
        tuple(corners), tuple(edges), (left, right),
        _commutes(FC.total, top, bottom, left, right), sq.label,
    )


def outer_square(T_outer: TwoGroup, chi_o: TwoCell, m, label: str = "chi_o") -> NaturalitySquare:
    if m not in T_outer.base_object.index:
        raise ValueError(f"{m!r} is not a morphism of the acted-on category")
    if chi_o not in T_outer.two_cells.get((chi_o.source, chi_o.target), ()):
        raise ValueError("2-cell does not belong to this 2-group")
    return naturality_square(T_outer, chi_o, m, label)
