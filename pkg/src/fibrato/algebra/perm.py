"""Concrete permutation groups with deterministic, word-based element names."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import product as _cartesian
from typing import Mapping

from ..errors import ClosureBudgetExceeded, NotASubgroup

CLOSURE_BUDGET = 10_000


@dataclass(frozen=True, order=True)
class Perm:
    """One-line notation over ``1..degree``; ``(p * q)(x) = p(q(x))``."""

    images: tuple

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{images} is not a permutation of 1..{len(images)}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(tuple(range(1, degree + 1)))

    @classmethod
    def from_cycles(cls, degree: int, *cycles) -> "Perm":
        img = list(range(1, degree + 1))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a - 1] = b
        return cls(tuple(img))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    def __mul__(self, other: "Perm") -> "Perm":
        return Perm(tuple(self.images[i - 1] for i in other.images))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images, 1):
            inv[j - 1] = i
        return Perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images, 1))

    def __repr__(self):
        return f"Perm{self.images}"


def _word_name(word) -> str:
    if not word:
        return "e"
    parts, prev, run = [], None, 0
    for g in word + [None]:
        if g == prev:
            run += 1
            continue
        if prev is not None:
            parts.append(prev if run == 1 else f"{prev}^{run}")
        prev, run = g, 1
    return "*".join(parts)


class PermGroup:
    """A finite permutation group with named elements.

    ``elements`` and ``names`` are parallel tuples; the identity is first.
    """

    def __init__(self, degree: int, generators: Mapping, elements, names):
        self.degree = degree
        self.generators = dict(generators)
        self.elements = tuple(elements)
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("element names must be unique")

    @cached_property
    def _by_perm(self) -> dict:
        return dict(zip(self.elements, self.names))

    @cached_property
    def _by_name(self) -> dict:
        return dict(zip(self.names, self.elements))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, p) -> bool:
        return p in self._by_perm

    def name_of(self, p: Perm) -> str:
        return self._by_perm[p]

    def element(self, name: str) -> Perm:
        return self._by_name[name]

    @property
    def identity_name(self) -> str:
        return self.names[0]

    def mul(self, a: str, b: str) -> str:
        return self._by_perm[self._by_name[a] * self._by_name[b]]

    def inv(self, a: str) -> str:
        return self._by_perm[self._by_name[a].inverse()]

    @cached_property
    def mult(self) -> dict:
        return {(a, b): self.mul(a, b) for a in self.names for b in self.names}

    def act(self, name: str, x: int) -> int:
        return self._by_name[name](x)

    def perm_set(self) -> frozenset:
        return frozenset(self.elements)

    def is_closed(self) -> bool:
        elems = self._by_perm
        return all(p.inverse() in elems for p in self.elements) and all(
            p * q in elems for p in self.elements for q in self.elements
        )

    def subgroup(self, perms) -> "PermGroup":
        """Subgroup on an element subset, keeping this group's names and order."""
        keep = set(perms)
        missing = keep - set(self.elements)
        if missing:
            raise NotASubgroup(f"{sorted(missing)[0]} is not an element of the group")
        if Perm.identity(self.degree) not in keep or any(
            p.inverse() not in keep or p * q not in keep for p in keep for q in keep
        ):
            raise NotASubgroup("element subset is not closed under products and inverses")
        pairs = [(p, n) for p, n in zip(self.elements, self.names) if p in keep]
        gens = {n: p for p, n in pairs if not p.is_identity()}
        return PermGroup(self.degree, gens, [p for p, _ in pairs], [n for _, n in pairs])

    def generated_subgroup(self, perms) -> "PermGroup":
        closure = close_generators(self.degree, {str(i): p for i, p in enumerate(perms)})
        return self.subgroup(closure.elements)

    def __eq__(self, other):
        return (
            isinstance(other, PermGroup)
            and self.degree == other.degree
            and self.elements == other.elements
            and self.names == other.names
        )

    __hash__ = None

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order})"


def close_generators(degree: int, gens: Mapping, budget: int = CLOSURE_BUDGET) -> PermGroup:
    """Breadth-first closure; each element is named by its shortlex-least word."""
    gens = {name: (g if isinstance(g, Perm) else Perm(tuple(g))) for name, g in gens.items()}
    for name, g in gens.items():
        if g.degree != degree:
            raise ValueError(f"generator {name!r} has degree {g.degree}, expected {degree}")
    order = sorted(gens)
    e = Perm.identity(degree)
    seen = {e: []}
    elements = [e]
    queue = deque([e])
    while queue:
        p = queue.popleft()
        for name in order:
            q = p * gens[name]
            if q not in seen:
                seen[q] = seen[p] + [name]
                elements.append(q)
                if len(elements) > budget:
                    raise ClosureBudgetExceeded(f"closure exceeded {budget} elements")
                queue.append(q)
    return PermGroup(degree, gens, elements, [_word_name(seen[p]) for p in elements])


def standard_group(kind: str, n: int) -> PermGroup:
    if n < 1:
        raise ValueError("n must be at least 1")
    rot = Perm(tuple(range(2, n + 1)) + (1,))
    if kind == "cyclic":
        return close_generators(n, {"r": rot} if n > 1 else {})
    if kind == "dihedral":
        if n < 3:
            raise ValueError("the dihedral group of order 2n acts faithfully on n points only for n >= 3")
        return close_generators(n, {"r": rot, "s": Perm(tuple((n + 1 - i) % n + 1 for i in range(1, n + 1)))})
    if kind == "symmetric":
        if n == 1:
            return close_generators(1, {})
        swap = Perm((2, 1) + tuple(range(3, n + 1)))
        return close_generators(n, {"t": swap, "c": rot} if n > 2 else {"t": swap})
    raise ValueError(f"unknown group kind {kind!r}")


def trivial_group(degree: int = 1) -> PermGroup:
    return close_generators(degree, {})


def _shift(p: Perm, offset: int, degree: int) -> Perm:
    img = list(range(1, degree + 1))
    for i, j in enumerate(p.images, 1):
        img[offset + i - 1] = offset + j
    return Perm(tuple(img))


def direct_product(*groups: PermGroup) -> PermGroup:
    """Acts on the disjoint union of the factors' points, in order."""
    degree = sum(G.degree for G in groups)
    offsets = [sum(G.degree for G in groups[:i]) for i in range(len(groups))]

    def embed(parts):
        p = Perm.identity(degree)
        for q, off in zip(parts, offsets):
            p = p * _shift(q, off, degree)
        return p

    elements, names = [], []
    for combo in _cartesian(*[list(zip(G.elements, G.names)) for G in groups]):
        elements.append(embed([q for q, _ in combo]))
        names.append("(" + ",".join(n for _, n in combo) + ")")
    gens = {}
    for k, G in enumerate(groups):
        for gname, g in G.generators.items():
            parts = [Perm.identity(H.degree) for H in groups]
            parts[k] = g
            gens[f"{gname}.{k + 1}"] = embed(parts)
    return PermGroup(degree, gens, elements, names)


def wreath_element(G: PermGroup, fs, p: Perm) -> Perm:
    """Point ``(b-1)*n + q`` goes to ``(p(b)-1)*n + f_b(q)``."""
    n, k = G.degree, p.degree
    img = []
    for b in range(1, k + 1):
        for q in range(1, n + 1):
            img.append((p(b) - 1) * n + fs[b - 1](q))
    return Perm(tuple(img))


def wreath_product(G: PermGroup, top: PermGroup) -> PermGroup:
    """``G wr top`` with its imprimitive action on ``k`` blocks of size ``n``."""
    k = top.degree
    elements, names = [], []
    base = list(zip(G.elements, G.names))
    for combo in _cartesian(*([base] * k), list(zip(top.elements, top.names))):
        fs = [f for f, _ in combo[:k]]
        p, pname = combo[k]
        elements.append(wreath_element(G, fs, p))
        names.append("(" + ",".join(n for _, n in combo[:k]) + ";" + pname + ")")
    ident_g = Perm.identity(G.degree)
    gens = {}
    for b in range(k):
        for gname, g in G.generators.items():
            fs = [ident_g] * k
            fs[b] = g
            gens[f"{gname}@{b + 1}"] = wreath_element(G, fs, Perm.identity(k))
    for pname, p in top.generators.items():
        gens[f"top.{pname}"] = wreath_element(G, [ident_g] * k, p)
    return PermGroup(G.degree * k, gens, elements, names)


def blocks_of(n: int, k: int) -> list:
    return [frozenset(range(b * n + 1, (b + 1) * n + 1)) for b in range(k)]


def preserves_blocks(p: Perm, blocks) -> bool:
    blocks = [frozenset(B) for B in blocks]
    blockset = set(blocks)
    return all(frozenset(p(x) for x in B) in blockset for B in blocks)
