import pytest

from fibrato.algebra import GroupAction, natural_action, standard_group, trivial_group
from fibrato.core import (
    CatValuedAction,
    FinFunctor,
    SetValuedAction,
    are_mutually_inverse,
    check_category,
    check_functor,
    codiscrete_groupoid,
    connected_components,
    discrete_category,
    find_isomorphism,
    is_groupoid,
    opposite,
    poset_category,
)
from fibrato.errors import NonFunctorialAction
from fibrato.grothendieck import (
    Variant,
    check_split_fibration,
    check_transformation_equals_completion,
    contravariant_action,
    covariant_action,
    grothendieck_complete,
    is_cartesian,
    is_cocartesian,
    transformation_groupoid,
)

from oracles import cartesian_by_definition, completion_counts, component_count


def c3_action():
    return natural_action(standard_group("cyclic", 3))


def collapse_action():
    """Walking arrow A -> B with fiber map {1,2} -> {1}."""
    B = poset_category(["A", "B"], lambda a, b: a <= b)
    return SetValuedAction(
        B,
        {"A": ("1", "2"), "B": ("1",)},
        {B.identity["A"]: {"1": "1", "2": "2"}, B.identity["B"]: {"1": "1"}, "A<=B": {"1": "1", "2": "1"}},
    )


@pytest.mark.parametrize("kind, morphisms", [("cyclic", 9), ("dihedral", 18)])
def test_transformation_groupoid(kind, morphisms):
    A = natural_action(standard_group(kind, 3))
    XG = transformation_groupoid(A)
    assert (len(XG.objects), len(XG.morphisms)) == (3, morphisms)
    assert check_category(XG).ok and is_groupoid(XG)
    assert len(connected_components(XG)) == 1 == component_count(XG.objects, XG.morphisms)
    assert XG.compose["(r,2)", "(r,1)"] == "(r^2,1)"


def test_transformation_groupoid_of_trivial_group_is_discrete():
    T = trivial_group(2)
    XG = transformation_groupoid(natural_action(T))
    assert len(XG.morphisms) == len(XG.objects) == 2


def test_concrete_left_c3_counts_and_names():
    FC = grothendieck_complete(covariant_action(c3_action()), Variant.CONCRETE_LEFT)
    assert (len(FC.total.objects), len(FC.total.morphisms)) == (3, 9)
    assert "(r,2)" in FC.total.index  # (f, y) with y = F f(x)
    assert FC.total.src["(r,2)"] == "(*,1)"
    assert check_split_fibration(FC).ok


def test_concrete_right_c3_via_opposite_base():
    FC = grothendieck_complete(contravariant_action(c3_action()), "con-right")
    assert (len(FC.total.objects), len(FC.total.morphisms)) == (3, 9)
    assert check_split_fibration(FC).ok


def test_abstract_left_with_single_fiber_category():
    A = covariant_action(c3_action())
    X = discrete_category(["X"])
    F = CatValuedAction(A.base, {"*": X}, {g: FinFunctor.identity(X) for g in A.base.names})
    FC = grothendieck_complete(F, Variant.ABSTRACT_LEFT)
    assert FC.total.objects == ("(*,X)",)
    assert len(FC.total.morphisms) == 3


def test_abstract_left_over_codiscrete_singletons():
    B = codiscrete_groupoid(3, names=["*1", "*2", "*3"])
    fiber = {"*1": ("x1",), "*2": ("x2",), "*3": ("x3",)}
    act = {f: {fiber[s][0]: fiber[t][0]} for f, s, t in B.morphisms}
    FC = grothendieck_complete(SetValuedAction(B, fiber, act), Variant.ABSTRACT_LEFT)
    assert FC.total.objects == ("(*1,x1)", "(*2,x2)", "(*3,x3)")
    assert len(FC.total.morphisms) == 9
    assert check_split_fibration(FC).ok


def test_non_functorial_action_is_rejected():
    A = covariant_action(c3_action())
    act = {g: dict(t) for g, t in A.act.items()}
    act["r"]["1"] = "1"
    with pytest.raises(NonFunctorialAction):
        grothendieck_complete(SetValuedAction(A.base, A.fiber, act), Variant.CONCRETE_LEFT)


@pytest.mark.parametrize("variant", list(Variant))
def test_counting_laws_on_collapse(variant):
    A = collapse_action()
    FC = grothendieck_complete(A, variant)
    B = FC.base
    fiber = A.fiber
    expected = completion_counts(B.objects, B.morphisms, fiber, left=variant.is_left)
    assert (len(FC.total.objects), len(FC.total.morphisms)) == expected
    assert check_split_fibration(FC).ok
    assert check_functor(FC.projection).ok


def test_cartesian_predicate_matches_definition_on_collapse():
    for variant in Variant:
        FC = grothendieck_complete(collapse_action(), variant)
        for m in FC.total.names:
            assert is_cartesian(FC, m) == cartesian_by_definition(FC.total, FC.base, FC.projection, m)
            assert is_cocartesian(FC, m) == cartesian_by_definition(FC.total, FC.base, FC.projection, m, dual=True)


def test_collapsed_lift_is_computed_not_assumed():
    FC = grothendieck_complete(collapse_action(), Variant.CONCRETE_LEFT)
    # both lifts of A<=B land on (B,1); they are cocartesian but not cartesian
    lifts = [FC.cleavage["A<=B", a] for a in ("1", "2")]
    assert [is_cocartesian(FC, m) for m in lifts] == [True, True]
    assert [is_cartesian(FC, m) for m in lifts] == [False, False]
    assert [cartesian_by_definition(FC.total, FC.base, FC.projection, m) for m in lifts] == [False, False]


def test_identities_and_groupoid_lifts_are_cartesian():
    FC = grothendieck_complete(covariant_action(c3_action()), Variant.CONCRETE_LEFT)
    assert all(is_cartesian(FC, m) for m in FC.total.names)
    assert is_groupoid(FC.total)


def test_redirected_cleavage_entry_breaks_strictness():
    FC = grothendieck_complete(covariant_action(c3_action()), Variant.CONCRETE_LEFT)
    cl = dict(FC.cleavage)
    cl[FC.base.identity["*"], "1"] = "(r,2)"
    report = check_split_fibration(FC.with_cleavage(cl))
    assert "strict-identity" in report.laws()


@pytest.mark.parametrize("concrete", [True, False])
def test_left_total_is_opposite_of_mirrored_right_total(concrete):
    A = collapse_action()
    left = Variant.CONCRETE_LEFT if concrete else Variant.ABSTRACT_LEFT
    right = Variant.CONCRETE_RIGHT if concrete else Variant.ABSTRACT_RIGHT
    L = grothendieck_complete(A, left)
    R = grothendieck_complete(A, right)
    assert L.total == opposite(R.total)
    assert find_isomorphism(L.total, opposite(R.total)) is not None


def test_fibers_are_disjoint_discrete():
    FC = grothendieck_complete(collapse_action(), Variant.CONCRETE_LEFT)
    seen = set()
    for X in FC.base.objects:
        F = FC.fiber(X)
        assert len(F.morphisms) == len(F.objects)
        assert not seen & set(F.objects)
        seen |= set(F.objects)


@pytest.mark.parametrize("kind, morphisms", [("cyclic", 9), ("dihedral", 18)])
def test_transformation_groupoid_equals_completion(kind, morphisms):
    rep = check_transformation_equals_completion(natural_action(standard_group(kind, 3)))
    assert rep.isomorphic
    assert rep.count_summary == ((3, morphisms), (3, morphisms))
    F, G = rep.witness
    assert are_mutually_inverse(F, G)
    assert check_functor(F).ok and check_functor(G).ok


def test_transformation_equals_completion_for_a_point():
    T = trivial_group(1)
    rep = check_transformation_equals_completion(GroupAction(T, ["x"], {("e", "x"): "x"}))
    assert rep.isomorphic and rep.count_summary == ((1, 1), (1, 1))


def test_cat_valued_completion_counts():
    # fiber over A is the codiscrete pair, over B a point; the lift collapses it
    B = poset_category(["A", "B"], lambda a, b: a <= b)
    K2, T = codiscrete_groupoid(2), codiscrete_groupoid(1)
    collapse = FinFunctor(K2, T, {X: "1" for X in K2.objects}, {f: "id_1" for f in K2.names})
    F = CatValuedAction(
        B, {"A": K2, "B": T},
        {B.identity["A"]: FinFunctor.identity(K2), B.identity["B"]: FinFunctor.identity(T), "A<=B": collapse},
    )
    for variant in (Variant.ABSTRACT_LEFT, Variant.ABSTRACT_RIGHT):
        FC = grothendieck_complete(F, variant)
        # 4 + 1 morphisms inside fibers, 2 over the arrow
        assert (len(FC.total.objects), len(FC.total.morphisms)) == (3, 7)
        assert check_split_fibration(FC).ok
