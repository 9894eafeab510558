"""Unit tests for Kan conditions, profiles, fibres and weak equivalences."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.errors import BadParams, HypothesesNotMet, LevelOutOfRange, NotA2Groupoid, NotAFibration
from src.groupoids.categories import cyclic_group, pair_groupoid, poset_category, preorder_category
from src.groupoids.functors import Functor
from src.groupoids.standard import standard_groupoid
from src.kan.conditions import FAILS, SURJECTIVE_ONLY, UNIQUE, ConditionSpec, acyc, check_condition, kan
from src.kan.fibers import fiber, unique_kan_propagation
from src.kan.profile import classify_map, classify_object
from src.kan.weak import bigons, require_2groupoid, weak_equivalence_2groupoid
from src.simplicial.constructions import decalage, pullback
from src.simplicial.core import compose_maps, identity_map
from src.simplicial.hom import enumerate_lifts, hom_set
from src.simplicial.shapes import boundary, horn, inclusion, simplex


def nerve_z(n):
    return cyclic_group(n).as_groupoid().nerve()


def test_group_nerve_is_a_1_groupoid():
    profile = classify_object(nerve_z(2))
    flags = profile.flags()
    assert flags['kan_complex'], "N(Z/2) should be Kan"
    assert flags['groupoid_level'] == 1, f"expected level 1, got {flags['groupoid_level']}"
    assert profile.status("Kan", 1, 0) == SURJECTIVE_ONLY, "a vertex of N(Z/2) has two edges"
    assert profile.status("Kan", 2, 0) == UNIQUE
    assert flags['window_complete']


def test_point_is_a_0_groupoid():
    flags = classify_object(simplex(0)).flags()
    assert flags['kan_complex'] and flags['acyclic']
    assert flags['groupoid_level'] == 0


def test_category_level_of_nerves():
    """Nerves of non-discrete categories are 1-categories; only discrete nerves sit at level 0."""
    assert classify_object(nerve_z(2)).category_level == 1
    assert classify_object(poset_category(3).nerve()).category_level == 1, "the poset 0 < 1 < 2"
    discrete = preorder_category(3, lambda i, j: i == j).nerve()
    assert classify_object(discrete).category_level == 0
    assert classify_object(simplex(0)).category_level == 0


def test_simplex_is_inner_kan_only():
    profile = classify_object(simplex(1))
    assert profile.is_inner_kan
    assert not profile.is_kan
    assert profile.groupoid_level is None
    assert kan(simplex(1), 2, 0).status == FAILS


def test_horn_is_not_inner_kan():
    result = kan(horn(2, 1), 2, 1)
    assert result.status == FAILS
    assert result.witness['fillers'] == 0
    assert not result.holds


def test_unique_flag_on_results():
    X = nerve_z(3)
    assert kan(X, 2, 1, unique=True).holds
    assert not kan(X, 1, 0, unique=True).holds, "three edges leave the vertex"
    assert kan(X, 1, 0).holds


def test_acyclicity_of_point_and_group():
    assert acyc(simplex(0), 1).holds
    assert not acyc(nerve_z(2), 1, unique=True).holds


def test_condition_spec_rejects_bad_indices():
    with pytest.raises(BadParams):
        ConditionSpec("Kan", 1, 2)
    with pytest.raises(BadParams):
        ConditionSpec("Acyc", 1, 0)
    with pytest.raises(BadParams):
        ConditionSpec("Fill", 1)
    assert str(ConditionSpec("KanUnique", 2, 1)) == "Kan!(2,1)"


def test_condition_above_window_rejected():
    with pytest.raises(LevelOutOfRange):
        kan(nerve_z(2), 5, 0)
    with pytest.raises(LevelOutOfRange):
        check_condition(nerve_z(2), ConditionSpec("WeakAcyc", 1))


def test_profile_frame_columns():
    df = classify_object(nerve_z(2)).to_frame()
    assert list(df.columns) == ['condition', 'm', 'k', 'status', 'horns', 'min_fillers',
                                'max_fillers', 'witness']
    assert set(df['condition']) == {'Kan', 'Acyc'}
    assert set(df['status']) <= {UNIQUE, SURJECTIVE_ONLY, FAILS}


def test_decalage_maps():
    X = nerve_z(2)
    _, pi, kappa = decalage(X)
    assert classify_map(pi).is_kan, "dec X -> X should be a Kan fibration"
    assert classify_map(kappa).is_acyclic, "dec X -> sk0 X0 should be acyclic"


def test_identity_is_weak_acyclic():
    f = identity_map(nerve_z(2))
    profile = classify_map(f)
    assert profile.is_acyclic
    assert profile.is_weak_acyclic
    assert profile.flags()['kan_fibration']


def test_fiber_of_group_extension():
    Z4, Z2 = cyclic_group(4).as_groupoid(), cyclic_group(2).as_groupoid()
    F = Functor(Z4, Z2, [0], [x % 2 for x in range(4)], name="Z/4->Z/2")
    fib = fiber(F.nerve_map(), 0)
    assert fib.sizes(1) == [1, 2], f"the kernel is Z/2, got sizes {fib.sizes(1)}"


def test_fiber_requires_fibration():
    vertex = hom_set(simplex(0), simplex(1))[0]
    with pytest.raises(NotAFibration) as excinfo:
        fiber(vertex, 0)
    assert excinfo.value.code == 1


def test_unique_filler_propagation():
    report = unique_kan_propagation(simplex(2), 2, 'inner')
    assert report.all_hold and report.consistent
    assert set(report.statuses) == {1, 2}
    with pytest.raises(HypothesesNotMet):
        unique_kan_propagation(horn(2, 1), 2, 'inner')


def test_bigons_of_group_nerve():
    X = nerve_z(2)
    found = bigons(X)
    assert len(found) == 2, "one bigon per edge, on the identity"
    for _, s, t in found:
        assert s == t


def test_weak_equivalence_identity():
    report = weak_equivalence_2groupoid(identity_map(nerve_z(2)))
    assert report.weak_equivalence
    assert report.weak_acyclic


def test_weak_equivalence_pair_groupoid_to_point():
    P = pair_groupoid([0, 1])
    point = cyclic_group(1).as_groupoid()
    F = Functor(P, point, [0, 0], [0] * P.n_arrows)
    report = weak_equivalence_2groupoid(F.nerve_map())
    assert report.weak_equivalence, "pair(2) is equivalent to the point"
    assert report.weak_acyclic == classify_map(F.nerve_map()).is_weak_acyclic


def test_collapsing_a_group_is_not_a_weak_equivalence():
    Z2, point = cyclic_group(2).as_groupoid(), cyclic_group(1).as_groupoid()
    F = Functor(Z2, point, [0], [0, 0])
    report = weak_equivalence_2groupoid(F.nerve_map())
    assert not report.weak_equivalence
    assert 'fully_faithful' in report.witnesses or 'locally_essentially_surjective' in report.witnesses
    assert report.weak_acyclic is False


def test_require_2groupoid():
    require_2groupoid(nerve_z(2))
    with pytest.raises(NotA2Groupoid):
        require_2groupoid(simplex(1))


@pytest.fixture(scope="module")
def nerve_maps():
    """Every map between the nerves of point, pair(2), Z/2 and the discrete groupoid on two objects."""
    groupoids = (pair_groupoid([0]), pair_groupoid([0, 1]), cyclic_group(2).as_groupoid(),
                 standard_groupoid('trivial', [0, 1]))
    nerves = [G.nerve() for G in groupoids]
    return [f for X in nerves for Y in nerves for f in hom_set(X, Y)]


def lifts_every_square(i, p):
    """Whether every commutative square from i to p has a diagonal filler."""
    for a in hom_set(i.source, p.source):
        for b in enumerate_lifts(i, compose_maps(a, p)):
            if not enumerate_lifts(i, a, b, p):
                return False
    return True


def inclusions():
    return ([inclusion(horn(2, k), simplex(2)) for k in range(3)]
            + [inclusion(boundary(m), simplex(m)) for m in (1, 2)])


def composable(data, maps, f):
    return data.draw(st.sampled_from([g for g in maps if g.source is f.target]))


@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_lifting_closed_under_composition(nerve_maps, data):
    f = data.draw(st.sampled_from(nerve_maps))
    g = composable(data, nerve_maps, f)
    gf = compose_maps(f, g)
    for i in inclusions():
        if lifts_every_square(i, f) and lifts_every_square(i, g):
            assert lifts_every_square(i, gf), f"{gf.name} loses lifts against {i.name}"


@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_lifting_stable_under_pullback(nerve_maps, data):
    f = data.draw(st.sampled_from(nerve_maps))
    h = data.draw(st.sampled_from([h for h in nerve_maps if h.target is f.target]))
    _, _, q = pullback(f, h)
    for i in inclusions():
        if lifts_every_square(i, f):
            assert lifts_every_square(i, q), f"pullback of {f.name} along {h.name} against {i.name}"


@settings(max_examples=20, deadline=None)
@given(data=st.data())
def test_fibrations_closed_under_composition_and_pullback(nerve_maps, data):
    f = data.draw(st.sampled_from(nerve_maps))
    g = composable(data, nerve_maps, f)
    pf, pg = classify_map(f), classify_map(g)
    composite = classify_map(compose_maps(f, g))
    if pf.is_kan and pg.is_kan:
        assert composite.is_kan, f"{g.name} after {f.name}"
    if pf.is_acyclic and pg.is_acyclic:
        assert composite.is_acyclic, f"{g.name} after {f.name}"
    h = data.draw(st.sampled_from([h for h in nerve_maps if h.target is g.target]))
    _, _, q = pullback(g, h)
    if pg.is_kan:
        assert classify_map(q).is_kan, f"pullback of {g.name} along {h.name}"
    if pg.is_acyclic:
        assert classify_map(q).is_acyclic, f"pullback of {g.name} along {h.name}"


def test_acyclic_fibrations_are_kan(nerve_maps):
    maps = list(nerve_maps) + [decalage(nerve_z(2))[2], decalage(nerve_z(3))[2]]
    acyclic = [f for f in maps if classify_map(f).is_acyclic]
    assert len(acyclic) >= 3, "pair(2) -> point and the two décalage maps are acyclic"
    for f in acyclic:
        assert classify_map(f).is_kan, f"{f.name} is acyclic but not a Kan fibration"


@settings(max_examples=20, deadline=None)
@given(data=st.data())
def test_weak_equivalences_two_out_of_three(nerve_maps, data):
    f = data.draw(st.sampled_from(nerve_maps))
    g = composable(data, nerve_maps, f)
    flags = [weak_equivalence_2groupoid(m).weak_equivalence for m in (f, g, compose_maps(f, g))]
    assert sum(flags) != 2, f"{f.name}, {g.name}: {flags}"


@settings(max_examples=20, deadline=None)
@given(data=st.data())
def test_weak_equivalences_two_out_of_six(nerve_maps, data):
    f = data.draw(st.sampled_from(nerve_maps))
    g = composable(data, nerve_maps, f)
    h = composable(data, nerve_maps, g)
    gf, hg = compose_maps(f, g), compose_maps(g, h)
    if weak_equivalence_2groupoid(gf).weak_equivalence and weak_equivalence_2groupoid(hg).weak_equivalence:
        for m in (f, g, h, compose_maps(gf, h)):
            assert weak_equivalence_2groupoid(m).weak_equivalence, f"{m.name} in {f.name}, {g.name}, {h.name}"


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
