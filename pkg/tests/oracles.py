"""Independent reference computations used to derive expected values.

These deliberately avoid the library's own helpers: plain loops over raw
tables, sympy for permutation groups and networkx for graph structure.
"""

from itertools import product as cartesian

import networkx as nx
from sympy.combinatorics import Permutation, PermutationGroup


def associativity_failures(objects, morphisms, compose):
    """All (h, g, f) with both bracketings defined and different, by triple loop."""
    src = {m: s for m, s, _ in morphisms}
    tgt = {m: t for m, _, t in morphisms}
    names = [m for m, _, _ in morphisms]
    bad = []
    for h, g, f in cartesian(names, repeat=3):
        if tgt[f] != src[g] or tgt[g] != src[h]:
            continue
        left = compose.get((compose.get((h, g)), f))
        right = compose.get((h, compose.get((g, f))))
        if left != right:
            bad.append((h, g, f))
    return bad


def sympy_group(perms):
    """A sympy group from one-line permutations on 1..n."""
    gens = [Permutation([i - 1 for i in p]) for p in perms]
    return PermutationGroup(gens)


def group_order(perms):
    return sympy_group(perms).order()


def component_count(objects, morphisms):
    G = nx.Graph()
    G.add_nodes_from(objects)
    G.add_edges_from((s, t) for _, s, t in morphisms)
    return nx.number_connected_components(G)


def transformation_counts(carrier, group_elements, act):
    """(objects, morphisms) of X//G from first principles."""
    return len(carrier), sum(1 for _ in group_elements for _ in carrier)


def completion_counts(base_objects, base_morphisms, fiber, left=True):
    """Closed-form object and morphism counts of a Set-valued completion."""
    objects = sum(len(fiber[X]) for X in base_objects)
    anchor = 1 if left else 2
    morphisms = sum(len(fiber[m[anchor]]) for m in base_morphisms)
    return objects, morphisms


def natural_transformations(objects, morphisms, compose, F, G):
    """All families (component per object) natural from F to G, by full enumeration."""
    src = {m: s for m, s, _ in morphisms}
    tgt = {m: t for m, _, t in morphisms}
    Fo, Fm = F
    Go, Gm = G
    homs = {
        X: [m for m in src if src[m] == Fo[X] and tgt[m] == Go[X]] for X in objects
    }
    found = []
    for choice in cartesian(*(homs[X] for X in objects)):
        comp = dict(zip(objects, choice))
        if all(
            compose.get((Gm[f], comp[src[f]])) == compose.get((comp[tgt[f]], Fm[f]))
            for f in src
        ):
            found.append(comp)
    return found


def cartesian_by_definition(E, B, P, m, dual=False):
    """Universal property of ``m`` checked straight from the definition.

    Cartesian: for every ``g`` into ``tgt m`` and every ``w`` with
    ``P(m) . w = P(g)`` there is exactly one ``h`` over ``w`` with ``m . h = g``.
    ``dual=True`` checks the cocartesian property instead.
    """
    Pm = P.morphism_map
    Po = P.object_map
    names = [n for n, _, _ in E.morphisms]
    src = {n: s for n, s, _ in E.morphisms}
    tgt = {n: t for n, _, t in E.morphisms}
    bnames = [n for n, _, _ in B.morphisms]
    bsrc = {n: s for n, s, _ in B.morphisms}
    btgt = {n: t for n, _, t in B.morphisms}
    for g in names:
        if (src[g] if dual else tgt[g]) != (src[m] if dual else tgt[m]):
            continue
        for w in bnames:
            if dual:
                if bsrc[w] != Po[tgt[m]] or btgt[w] != Po[tgt[g]]:
                    continue
                if B.compose.get((w, Pm[m])) != Pm[g]:
                    continue
                hits = [
                    h for h in names
                    if src[h] == tgt[m] and tgt[h] == tgt[g] and Pm[h] == w
                    and E.compose.get((h, m)) == g
                ]
            else:
                if bsrc[w] != Po[src[g]] or btgt[w] != Po[src[m]]:
                    continue
                if B.compose.get((Pm[m], w)) != Pm[g]:
                    continue
                hits = [
                    h for h in names
                    if src[h] == src[g] and tgt[h] == src[m] and Pm[h] == w
                    and E.compose.get((m, h)) == g
                ]
            if len(hits) != 1:
                return False
    return True
