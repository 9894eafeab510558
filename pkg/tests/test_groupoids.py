"""Unit tests for finite groupoids, functors, bimodules, cographs and crossed modules."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.bibundles.colored import higher_cograph
from src.errors import BadParams, IncoherentInput, NotACategoryNerve, NotComposable, NotInvariant, NotOverInterval
from src.groupoids.bibundles import (
    GroupoidAction,
    action_groupoid,
    bibundle_morphisms,
    bundlisation,
    check_principal,
    compose_bibundles,
    is_morita,
    isomorphic_bimodules,
    unit_bibundle,
)
from src.groupoids.categories import (
    FiniteGroup,
    cyclic_group,
    pair_groupoid,
    poset_category,
    preorder_category,
    symmetric_group,
)
from src.groupoids.cograph import bimodule_from_colored, bimodule_from_cograph, cograph_bimodule, cograph_category
from src.groupoids.crossed import CrossedModule, crossed_module_morphism
from src.groupoids.functors import (
    Functor,
    classify_functor,
    compose_functors,
    identity_functor,
    isomorphic_groupoids,
    natural_transformations,
    weak_pullback,
)
from src.groupoids.nerve import category_from_nerve
from src.groupoids.quotient import find_orbits, moves_by_orbit, orbit_labels, route
from src.groupoids.standard import standard_groupoid
from src.simplicial.shapes import horn
from src.two_groupoids.bigons import bigon_groupoid, fundamental_groupoid


def extension():
    Z4, Z2 = cyclic_group(4).as_groupoid(), cyclic_group(2).as_groupoid()
    return Functor(Z4, Z2, [0], [x % 2 for x in range(4)], name="Z/4->Z/2")


def collapse(G):
    return Functor(G, cyclic_group(1).as_groupoid(), [0] * G.n_objects, [0] * G.n_arrows)


def swap_action():
    Z2 = cyclic_group(2).as_groupoid()
    act = {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 0}
    return GroupoidAction(Z2, ["a", "b"], [0, 0], act, side='right')


def test_poset_nerve_sizes():
    C = poset_category(2)
    assert (C.n_objects, C.n_arrows) == (2, 3)
    assert C.nerve().sizes(2) == [2, 3, 4]
    assert not C.is_groupoid()
    assert cyclic_group(3).as_groupoid().is_groupoid()


def test_preorder_must_be_reflexive_and_transitive():
    with pytest.raises(IncoherentInput):
        preorder_category(2, lambda i, j: i < j)
    chain = {(0, 1), (1, 2)}
    with pytest.raises(IncoherentInput, match="transitive"):
        preorder_category(3, lambda i, j: i == j or (i, j) in chain)


def test_group_tables_checked():
    with pytest.raises(IncoherentInput, match="identity"):
        FiniteGroup([0, 1], [[0, 0], [0, 0]])
    with pytest.raises(IncoherentInput):
        FiniteGroup([0, 1], [[0, 1]])
    S3 = symmetric_group(3)
    assert S3.order == 6 and not S3.is_abelian()
    assert cyclic_group(4).is_abelian()


def test_nerve_round_trip():
    for C in (poset_category(3), cyclic_group(3).as_groupoid(), pair_groupoid([0, 1])):
        D = category_from_nerve(C.nerve())
        assert isomorphic_groupoids(C, D), f"{C.name} not recovered from its nerve"
        assert D.is_groupoid() == C.is_groupoid()


def test_horn_is_not_a_nerve():
    with pytest.raises(NotACategoryNerve):
        category_from_nerve(horn(2, 1))


def test_functor_validation():
    Z2 = cyclic_group(2).as_groupoid()
    with pytest.raises(IncoherentInput):
        Functor(Z2, Z2, [0], [1, 1])
    F = extension()
    with pytest.raises(NotComposable):
        compose_functors(F, F)


def test_classify_extension():
    flags = classify_functor(extension())
    assert flags['essentially_surjective'] and flags['surjective_on_objects']
    assert not flags['fully_faithful']
    assert not flags['weak_equivalence']
    assert not flags['nerve_acyclic']


def test_pair_groupoid_collapses_to_point():
    flags = classify_functor(collapse(pair_groupoid([0, 1])))
    assert flags['weak_equivalence'], "pair(2) is equivalent to the point"
    assert flags['nerve_acyclic'], "surjective and fully faithful gives an acyclic fibration"


def test_natural_transformations_are_the_centre():
    S3 = symmetric_group(3).as_groupoid()
    assert len(natural_transformations(identity_functor(S3), identity_functor(S3))) == 1
    Z3 = cyclic_group(3).as_groupoid()
    assert len(natural_transformations(identity_functor(Z3), identity_functor(Z3))) == 3


def test_bundlisation_is_right_principal():
    P = bundlisation(extension())
    assert P.size == 2
    assert P.right_principal().principal
    assert not is_morita(P), "Z/4 does not act freely on two points"
    assert is_morita(unit_bibundle(cyclic_group(2).as_groupoid()))


def test_composition_follows_functors():
    F = extension()
    G = collapse(F.target)
    composite = compose_bibundles(bundlisation(F), bundlisation(G))
    assert composite.size == 1
    assert isomorphic_bimodules(composite, bundlisation(compose_functors(F, G)))


def test_unit_bibundle_is_a_unit():
    P = bundlisation(extension())
    assert isomorphic_bimodules(compose_bibundles(unit_bibundle(P.left), P), P)
    assert isomorphic_bimodules(compose_bibundles(P, unit_bibundle(P.right)), P)


CYCLIC = {n: cyclic_group(n).as_groupoid() for n in range(1, 5)}


@st.composite
def cyclic_chains(draw, length):
    """Composable homomorphisms x -> a x between cyclic groups of order at most four."""
    orders = draw(st.lists(st.integers(min_value=1, max_value=4), min_size=length + 1, max_size=length + 1))
    chain = []
    for n, m in zip(orders, orders[1:]):
        a = draw(st.sampled_from([a for a in range(m) if (a * n) % m == 0]))
        chain.append(Functor(CYCLIC[n], CYCLIC[m], [0], [(a * x) % m for x in range(n)], name=f"x{a}:Z/{n}->Z/{m}"))
    return chain


@settings(max_examples=40, deadline=None)
@given(chain=cyclic_chains(2))
def test_equivalences_two_out_of_three(chain):
    F, G = chain
    flags = [classify_functor(H, check_nerve=False)['weak_equivalence'] for H in (F, G, compose_functors(F, G))]
    assert sum(flags) != 2, f"{F.name}, {G.name}: {flags}"


@settings(max_examples=25, deadline=None)
@given(chain=cyclic_chains(3))
def test_bibundle_composition_is_associative(chain):
    P, Q, R = (bundlisation(F) for F in chain)
    left = compose_bibundles(compose_bibundles(P, Q), R)
    right = compose_bibundles(P, compose_bibundles(Q, R))
    assert left.size == right.size, f"{[F.name for F in chain]}: {left.size} vs {right.size}"
    assert isomorphic_bimodules(left, right), f"{[F.name for F in chain]}"


def test_composition_needs_a_shared_middle():
    P = bundlisation(extension())
    with pytest.raises(NotComposable):
        compose_bibundles(P, P)


def test_transformations_match_bibundle_maps():
    Z2 = cyclic_group(2).as_groupoid()
    pairs = bibundle_morphisms(identity_functor(Z2), identity_functor(Z2))
    assert len(pairs) == 2


def test_principal_action():
    action = swap_action()
    assert check_principal(action, [0, 0], 1).principal
    groupoid = action_groupoid(action)
    assert (groupoid.n_objects, groupoid.n_arrows) == (2, 4)
    assert isomorphic_groupoids(groupoid, pair_groupoid([0, 1]))
    with pytest.raises(NotInvariant):
        check_principal(action, [0, 1], 2)


def test_trivial_action_is_not_principal():
    Z2 = cyclic_group(2).as_groupoid()
    act = {(0, 0): 0, (0, 1): 0, (1, 0): 1, (1, 1): 1}
    report = check_principal(GroupoidAction(Z2, ["a", "b"], [0, 0], act), [0, 0], 1)
    assert not report.shear_injective
    assert 'shear_collision' in report.witness


def test_partial_action_rejected():
    Z2 = cyclic_group(2).as_groupoid()
    with pytest.raises(IncoherentInput):
        GroupoidAction(Z2, ["a"], [0], {(0, 0): 0})


def test_standard_groupoids():
    C = standard_groupoid('cech', [0, 1, 2], [0, 0, 1])
    assert (C.n_objects, C.n_arrows) == (3, 5)
    assert standard_groupoid('pair', [0, 1, 2]).n_arrows == 9
    assert standard_groupoid('trivial', [0, 1]).n_arrows == 2
    with pytest.raises(BadParams):
        standard_groupoid('torus', [0])
    with pytest.raises(BadParams):
        standard_groupoid('action', [0, 1])


def test_weak_pullback_over_a_point():
    Z2 = cyclic_group(2).as_groupoid()
    f = collapse(Z2)
    W = weak_pullback(f, f)
    assert (W.groupoid.n_objects, W.groupoid.n_arrows) == (1, 4)


def test_cograph_round_trip():
    P = bundlisation(identity_functor(cyclic_group(2).as_groupoid()))
    C = cograph_category(P)
    assert (C.n_objects, C.n_arrows) == (2, 6)
    again = bimodule_from_cograph(cograph_bimodule(P))
    assert again.size == P.size
    assert isomorphic_bimodules(P, again)


def test_colored_category_must_lie_over_interval():
    C = poset_category(2)
    assert bimodule_from_colored(C, [0, 1]).size == 1
    with pytest.raises(NotOverInterval):
        bimodule_from_colored(C, [1, 0])


def test_orbits():
    np.testing.assert_array_equal(orbit_labels(4, [(0, 2)]), [0, 1, 0, 2])
    np.testing.assert_array_equal(orbit_labels(4, [(0, 2)], use_scipy=False), [0, 1, 0, 2])
    reps, orbit_of = find_orbits(["a", "b", "c"], [("c", "a")])
    assert reps == ["a", "b"]
    assert orbit_of["c"] == 0


def test_orbit_routes():
    moves = [("a", "b"), ("c", "b"), ("d", "e")]
    reps, orbit_of = find_orbits(["a", "b", "c", "d", "e"], moves)
    grouped = moves_by_orbit(moves, orbit_of)
    assert grouped == {0: [("a", "b"), ("c", "b")], 1: [("d", "e")]}
    assert route("a", "c", grouped[0]) == [("a", "b"), ("b", "c")], "moves are used backwards too"
    assert route("a", "a", moves) == []
    assert route("a", "d", moves) is None


def test_crossed_module_axioms():
    Z2, Z4 = cyclic_group(2), cyclic_group(4)
    with pytest.raises(IncoherentInput):
        CrossedModule(Z4, Z2, [0, 1])
    X = CrossedModule(Z4, Z2, [0, 2])
    assert X.nerve().sizes(2) == [1, 4, 32]


def test_bigons_of_crossed_modules():
    X = CrossedModule(cyclic_group(1), cyclic_group(2), [0, 0])
    E = bigon_groupoid(X.nerve())
    assert (E.n_objects, E.n_arrows) == (1, 2)
    assert fundamental_groupoid(X.nerve()).n_arrows == 1


def test_tau_of_crossed_module_is_the_cokernel():
    X = CrossedModule(cyclic_group(4), cyclic_group(2), [0, 2])
    tau = fundamental_groupoid(X.nerve())
    assert (tau.n_objects, tau.n_arrows) == (1, 2), "Z/4 modulo the image of Z/2"
    assert isomorphic_groupoids(tau, cyclic_group(2).as_groupoid())


def test_crossed_module_morphisms():
    X = CrossedModule(cyclic_group(4), cyclic_group(2), [0, 2])
    f = crossed_module_morphism(X, X, [0, 1, 2, 3], [0, 1])
    assert f.is_bijective(2)
    with pytest.raises(IncoherentInput):
        crossed_module_morphism(X, X, [0, 0, 0, 1], [0, 1])


def test_crossed_module_morphism_reaches_level_three():
    X = CrossedModule(cyclic_group(1), cyclic_group(2), [0, 0])
    Y = CrossedModule(cyclic_group(1), cyclic_group(1), [0])
    f = crossed_module_morphism(X, Y, [0], [0, 0])
    NX = X.nerve()
    assert f.component(3).tolist() == [0] * NX.size(3), "the point has one 3-simplex"
    G = higher_cograph(f)
    assert G.bound >= 4
    for i in range(4):
        assert len(G.cell(i, 0)) == NX.size(i), f"cell ({i}, 0) should copy level {i} of the source"


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
