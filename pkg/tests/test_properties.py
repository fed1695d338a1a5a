import random

from hypothesis import given, strategies as st

from fibrato.algebra import (
    Perm,
    action_to_rep,
    blocks_of,
    category_to_internal,
    check_internal_groupoid,
    check_rep,
    group_as_category,
    orbits_stabilizers,
    preserves_blocks,
    rep_to_action,
    standard_group,
    wreath_product,
)
from fibrato.cli import Document, parse, serialize
from fibrato.core import (
    FinFunctor,
    check_category,
    check_functor,
    codiscrete_groupoid,
    compose_functors,
    connected_components,
    coproduct,
    discrete_category,
    find_isomorphism,
    is_groupoid,
    opposite,
    product,
    relabel,
    vertex_group,
)
from fibrato.geometry import GroupoidGeometry, KleinPair, check_klein, groupoid_coset_space, klein_space, wide_subgroupoid
from fibrato.grothendieck import Variant, check_split_fibration, grothendieck_complete, transformation_groupoid
from fibrato.hierarchy import classify_base, presentation_stats
from fibrato.sampling import internal_mutations, random_group_action, random_set_action
from fibrato.twogroup import aut_2group

from oracles import completion_counts, component_count, group_order

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def make_rng(base_seed, s):
    return random.Random(base_seed * 2**32 + s)


def random_category(rng):
    """The base or a completion total of a random action."""
    A = random_set_action(rng)
    if rng.random() < 0.5:
        return A.base
    return grothendieck_complete(A, rng.choice(list(Variant))).total


def shuffled_relabel(C, rng):
    objs = list(C.objects)
    rng.shuffle(objs)
    o = {X: f"o{k}" for k, X in enumerate(objs)}
    names = list(C.names)
    rng.shuffle(names)
    m = {f: f"m{k}" for k, f in enumerate(names)}
    return relabel(C, o, m), o, m


@given(seeds)
def test_completions_satisfy_counting_and_fibration_laws(base_seed, s):
    rng = make_rng(base_seed, s)
    A = random_set_action(rng)
    for variant in Variant:
        FC = grothendieck_complete(A, variant)
        B = FC.base
        assert (len(FC.total.objects), len(FC.total.morphisms)) == completion_counts(
            B.objects, B.morphisms, A.fiber, left=variant.is_left
        )
        assert check_category(FC.total).ok
        assert check_functor(FC.projection).ok
        assert check_split_fibration(FC).ok
        for (f, _), lift in FC.cleavage.items():
            assert FC.projection.morphism_map[lift] == f
        fibers = [FC.fiber(X) for X in B.objects]
        assert all(len(F.morphisms) == len(F.objects) for F in fibers)
        assert sum(len(F.objects) for F in fibers) == len({X for F in fibers for X in F.objects})
        if is_groupoid(FC.base):
            assert is_groupoid(FC.total)


@given(seeds)
def test_left_and_right_completions_mirror(base_seed, s):
    A = random_set_action(make_rng(base_seed, s))
    for left, right in [(Variant.CONCRETE_LEFT, Variant.CONCRETE_RIGHT), (Variant.ABSTRACT_LEFT, Variant.ABSTRACT_RIGHT)]:
        assert grothendieck_complete(A, left).total == opposite(grothendieck_complete(A, right).total)


@given(seeds)
def test_rep_roundtrip_and_orbit_stabilizer(base_seed, s):
    A = random_group_action(make_rng(base_seed, s))
    R = action_to_rep(A)
    assert check_rep(R).ok
    assert rep_to_action(R) == A
    assert action_to_rep(rep_to_action(R)) == R
    G = A.group
    assert G.order == group_order([g.images for g in G.generators.values()] or [tuple(range(1, G.degree + 1))])
    for orbit, stab in orbits_stabilizers(A):
        assert len(orbit) * stab.order == G.order


@given(seeds)
def test_transformation_groupoid_is_a_groupoid_with_orbit_components(base_seed, s):
    A = random_group_action(make_rng(base_seed, s))
    XG = transformation_groupoid(A)
    assert check_category(XG).ok and is_groupoid(XG)
    assert (len(XG.objects), len(XG.morphisms)) == (len(A.carrier), A.group.order * len(A.carrier))
    assert len(connected_components(XG)) == len(orbits_stabilizers(A)) == component_count(XG.objects, XG.morphisms)


@given(seeds)
def test_product_coproduct_and_opposite(base_seed, s):
    rng = make_rng(base_seed, s)
    C, D = random_category(rng), random_category(rng)
    P, S = product(C, D), coproduct(C, D)
    assert (len(P.objects), len(P.morphisms)) == (len(C.objects) * len(D.objects), len(C.morphisms) * len(D.morphisms))
    assert (len(S.objects), len(S.morphisms)) == (len(C.objects) + len(D.objects), len(C.morphisms) + len(D.morphisms))
    assert presentation_stats(S) == presentation_stats(C) + presentation_stats(D)
    if len(P.morphisms) <= 200:
        assert check_category(P).ok
    Cop = opposite(C)
    assert is_groupoid(Cop) == is_groupoid(C)
    assert sorted(map(sorted, connected_components(Cop))) == sorted(map(sorted, connected_components(C)))
    assert opposite(Cop) == C


@given(seeds)
def test_isomorphism_search_is_symmetric(base_seed, s):
    rng = make_rng(base_seed, s)
    C = random_category(rng)
    R, _, _ = shuffled_relabel(C, rng)
    there, back = find_isomorphism(C, R), find_isomorphism(R, C)
    assert there is not None and back is not None
    F, G = there
    assert compose_functors(G, F).same_maps(FinFunctor.identity(C))
    assert compose_functors(F, G).same_maps(FinFunctor.identity(R))


@given(seeds)
def test_functor_composition_preserves_validity(base_seed, s):
    rng = make_rng(base_seed, s)
    C = random_category(rng)
    R, o, m = shuffled_relabel(C, rng)
    F = FinFunctor(C, R, o, m)
    T = discrete_category(["pt"])
    K = FinFunctor(R, T, {X: "pt" for X in R.objects}, {f: "id_pt" for f in R.names})
    assert check_functor(F).ok and check_functor(K).ok
    assert check_functor(compose_functors(K, F)).ok


@given(seeds)
def test_classification_is_total(base_seed, s):
    C = random_category(make_rng(base_seed, s))
    kind, label = classify_base(C)
    assert kind in {"singleton", "discrete", "one-object-many-arrows", "general"} and label


@given(st.sampled_from([("cyclic", 2), ("cyclic", 3), ("cyclic", 4), ("dihedral", 3), ("dihedral", 4), ("symmetric", 3)]))
def test_one_object_groupoid_is_its_vertex_group(spec):
    C = group_as_category(standard_group(*spec))
    assert len(C.objects) == 1 and is_groupoid(C)
    assert vertex_group(C, C.objects[0]) == C


@given(seeds)
def test_internal_groupoids_catch_every_mutation(base_seed, s):
    rng = make_rng(base_seed, s)
    C = rng.choice([
        codiscrete_groupoid(rng.randint(1, 3)),
        group_as_category(standard_group("cyclic", rng.randint(2, 4))),
        transformation_groupoid(random_group_action(rng, max_degree=4, max_order=8)),
    ])
    T = category_to_internal(C)
    assert check_internal_groupoid(T).ok
    if len(T.G1) < 2:
        return
    for which, key, M in internal_mutations(T, rng, count=5):
        assert not check_internal_groupoid(M).ok, (which, key)


@given(
    st.sampled_from([("cyclic", 2), ("cyclic", 3), ("dihedral", 3)]),
    st.sampled_from([("cyclic", 2), ("cyclic", 3), ("symmetric", 3)]),
)
def test_wreath_products_preserve_blocks(inner, outer):
    G, P = standard_group(*inner), standard_group(*outer)
    W = wreath_product(G, P)
    assert W.order == G.order ** P.degree * P.order
    blocks = blocks_of(G.degree, P.degree)
    assert all(preserves_blocks(w, blocks) for w in W.elements)


@given(seeds)
def test_klein_counts_follow_lagrange(base_seed, s):
    rng = make_rng(base_seed, s)
    G = standard_group(*rng.choice([("symmetric", 3), ("dihedral", 4), ("symmetric", 4)]))
    g = rng.choice(G.elements)
    powers, p = [Perm.identity(G.degree)], g
    while not p.is_identity:
        powers.append(p)
        p = p * g
    H = G.subgroup(powers)
    K = KleinPair(G, H)
    index = G.order // H.order
    assert len(klein_space(K).points) == index
    rep = check_klein(K)
    assert rep.transitive and rep.vertex_group_equals_H
    assert rep.completion_counts["X//G"] == (index, G.order * index)
    assert rep.completion_counts["H-completion"] == (index, H.order * index)


@given(seeds)
def test_identity_subgroupoid_gives_one_point_per_morphism(base_seed, s):
    XG = transformation_groupoid(random_group_action(make_rng(base_seed, s), max_degree=4, max_order=12))
    space = groupoid_coset_space(GroupoidGeometry(XG, wide_subgroupoid(XG, [])))
    assert len(space.points) == len(XG.morphisms)


@given(st.integers(min_value=1, max_value=3))
def test_two_cell_counts_on_codiscrete_and_discrete(n):
    T = aut_2group(codiscrete_groupoid(n))
    assert all(len(cells) == 1 for cells in T.two_cells.values())
    D = aut_2group(discrete_category([str(k) for k in range(n)]))
    assert all((len(cells) == 1) == (i == j) for (i, j), cells in D.two_cells.items())


@given(seeds)
def test_parse_serialize_roundtrip_on_random_documents(base_seed, s):
    rng = make_rng(base_seed, s)
    A = random_group_action(rng)
    docs = [
        Document("category", random_category(rng)),
        Document("action", A),
        Document("group", A.group),
        Document("set_valued_action", random_set_action(rng)),
    ]
    for doc in docs:
        text = serialize(doc)
        assert parse(text) == doc
        assert serialize(parse(text)) == text
