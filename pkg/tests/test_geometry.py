import pytest

from fibrato.algebra import Perm, check_action, natural_action, standard_group
from fibrato.core import FinCat, codiscrete_groupoid, coproduct, is_groupoid
from fibrato.errors import NotASubgroup, NotWideSubgroupoid
from fibrato.geometry import (
    GroupoidGeometry,
    KleinPair,
    check_groupoid_geometry,
    check_klein,
    groupoid_coset_space,
    klein_space,
    wide_subgroupoid,
)
from fibrato.grothendieck import transformation_groupoid

from oracles import component_count, sympy_group

E3 = Perm((1, 2, 3))


@pytest.fixture(scope="module")
def S3():
    return standard_group("symmetric", 3)


def test_klein_s3_transposition(S3):
    H = S3.subgroup([E3, Perm((2, 1, 3))])
    space = klein_space(KleinPair(S3, H))
    assert space.points == ("eH", "cH", "c^2H")
    assert check_action(space.action).ok
    rep = check_klein(KleinPair(S3, H))
    index = S3.order // H.order
    assert index == len(sympy_group([g.images for g in S3.generators.values()]).orbit(2))
    assert rep.transitive and rep.components_of_X_mod_G == 1
    assert rep.vertex_group_order_at_basepoint == 2 and rep.vertex_group_equals_H
    assert rep.completion_counts == {"X//G": (index, S3.order * index), "H-completion": (index, H.order * index)}
    assert rep.completion_counts["X//G"][1] == 18 and rep.completion_counts["H-completion"][1] == 6
    assert rep.completion_components == 2
    assert not rep.iso_probe and rep.iso_witness is None
    assert rep.obstruction.startswith("count obstruction")


def test_klein_whole_group(S3):
    rep = check_klein(KleinPair(S3, S3.subgroup(S3.elements)))
    assert rep.completion_counts == {"X//G": (1, 6), "H-completion": (1, 6)}
    assert rep.vertex_group_equals_H and rep.iso_probe and rep.iso_witness is not None


def test_klein_trivial_subgroup(S3):
    rep = check_klein(KleinPair(S3, S3.subgroup([E3])))
    assert rep.transitive and rep.vertex_group_order_at_basepoint == 1
    assert rep.completion_counts == {"X//G": (6, 36), "H-completion": (6, 6)}
    assert rep.completion_components == 6
    assert not rep.iso_probe


def test_klein_rejects_foreign_subgroup():
    C3 = standard_group("cyclic", 3)
    S3 = standard_group("symmetric", 3)
    with pytest.raises(NotASubgroup):
        check_klein(KleinPair(C3, S3))


@pytest.fixture(scope="module")
def d3_geometry():
    G = transformation_groupoid(natural_action(standard_group("dihedral", 3)))
    return GroupoidGeometry(G, wide_subgroupoid(G, ["(s,1)", "(r*s,3)", "(s*r,2)"]))


def test_groupoid_geometry_d3(d3_geometry):
    report, rows = check_groupoid_geometry(d3_geometry)
    assert report.ok
    G, B = d3_geometry.G, d3_geometry.B
    assert len(groupoid_coset_space(d3_geometry).points) == len(G.morphisms) // 2 == 9
    assert rows["local_groups"] == {"1": 2, "2": 2, "3": 2}
    assert rows["basepoints"] == ["[(e,1)]", "[(e,2)]", "[(e,3)]"]
    assert len(rows["coproduct_blocks"]) == component_count(G.objects, G.morphisms) == 1
    assert rows["completion"] == {"objects": 9, "morphisms": 9 * 2}
    assert len(B.morphisms) == 6


def test_full_subgroupoid_gives_one_point_per_object(d3_geometry):
    G = d3_geometry.G
    _, rows = check_groupoid_geometry(GroupoidGeometry(G, G))
    assert rows["basepoints"] == [p for block in rows["coproduct_blocks"] for p in block]
    assert len(rows["basepoints"]) == len(G.objects)


def test_disconnected_groupoid_splits_into_blocks():
    K = coproduct(codiscrete_groupoid(2), codiscrete_groupoid(2))
    report, rows = check_groupoid_geometry(GroupoidGeometry(K, wide_subgroupoid(K, [])))
    assert report.ok
    assert [len(b) for b in rows["coproduct_blocks"]] == [4, 4]
    assert rows["completion"] == {"objects": 8, "morphisms": 8}


def test_subgroupoid_validation(d3_geometry):
    G = d3_geometry.G
    with pytest.raises(NotWideSubgroupoid):
        GroupoidGeometry(G, wide_subgroupoid(G, ["(s,1)", "(r,1)"])).validate()
    arrow = FinCat.build(["A", "B"], [("f", "A", "B")])
    assert not is_groupoid(arrow)
    with pytest.raises(NotWideSubgroupoid):
        GroupoidGeometry(arrow, arrow).validate()
