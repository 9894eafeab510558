"""Unit tests for bigons, categorified actions and composition of 2-bibundles."""

import pytest

from src.bibundles.colored import higher_cograph, opposite_bibundle
from src.errors import CoherenceFailure, NotA2Groupoid, NotAFibration, NotRightPrincipal
from src.groupoids.categories import cyclic_group
from src.groupoids.crossed import CrossedModule
from src.groupoids.functors import Functor, identity_functor
from src.simplicial.constructions import decalage
from src.simplicial.hom import hom_set
from src.simplicial.iso import are_isomorphic
from src.simplicial.shapes import simplex
from src.two_groupoids.actions import (
    extract_action,
    low_data,
    reconstruct_fibration,
    three_multiplications,
    verify_coherence,
)
from src.two_groupoids.bigons import bigon_classes, bigon_groupoid, fundamental_groupoid
from src.two_groupoids.comparisons import (
    associativity_iso,
    bundlisation_functoriality,
    decalage_bibundle,
    tau_comparison,
    unit_comparison,
)
from src.two_groupoids.composition import TOP, compose_2bibundles


def extension_map():
    Z4, Z2 = cyclic_group(4).as_groupoid(), cyclic_group(2).as_groupoid()
    return Functor(Z4, Z2, [0], [x % 2 for x in range(4)], name="Z/4->Z/2").nerve_map()


@pytest.fixture(scope="module")
def dec_composite():
    """Dec(N(Z/2)) composed with itself."""
    D = decalage_bibundle(cyclic_group(2).as_groupoid().nerve())
    return D, compose_2bibundles(D, D)


def test_bigons_of_a_1_groupoid_are_trivial():
    X = cyclic_group(3).as_groupoid().nerve()
    E = bigon_groupoid(X)
    assert E.n_objects == 3
    assert E.n_arrows == 3, "one identity bigon per edge"
    labels, reps = bigon_classes(X)
    assert len(reps) == 3 and labels == [0, 1, 2]
    assert fundamental_groupoid(X).n_arrows == 3


def test_bigons_need_a_2_groupoid():
    with pytest.raises(NotA2Groupoid):
        bigon_groupoid(simplex(1))


def test_extract_action_of_extension():
    data = extract_action(extension_map())
    assert (data.fiber.n_objects, data.fiber.n_arrows) == (1, 2), "the fibre is the kernel Z/2"
    summary = data.summary()
    assert summary['holds'].all()
    assert summary['evaluated'].sum() > 0


def test_reconstruction_is_isomorphic():
    X = CrossedModule(cyclic_group(1), cyclic_group(2), [0, 0]).nerve()
    for pi in (extension_map(), decalage(X)[1]):
        rebuilt = reconstruct_fibration(low_data(pi), three_multiplications(pi))
        assert are_isomorphic(rebuilt.source, pi.source), pi.name


def test_corrupted_multiplication_is_caught():
    mults = three_multiplications(extension_map())
    key = sorted(mults.tables[1])[0]
    mults.tables[1][key] = (mults.tables[1][key] + 1) % mults.low.n_edges
    with pytest.raises(CoherenceFailure) as excinfo:
        verify_coherence(mults)
    assert excinfo.value.clause == "i"
    assert excinfo.value.code == 1


def test_non_fibration_rejected():
    vertex = hom_set(simplex(0), simplex(1))[0]
    with pytest.raises(NotAFibration):
        three_multiplications(vertex)


def test_composite_is_right_principal(dec_composite):
    _, composite = dec_composite
    assert composite.report.right_principal
    assert composite.square is not None and composite.square.holds
    df = composite.to_frame()
    assert list(df.columns) == ['cell', 'degree', 'configurations', 'moves', 'simplices']
    assert (df['simplices'] > 0).all()


def test_orbits_replay_from_representatives(dec_composite):
    _, composite = dec_composite
    for cell, orbits in composite.orbits.items():
        for key, o in orbits.orbit_of.items():
            steps = orbits.route_to(key)
            assert steps is not None, f"{cell}: {key} is not reached from its representative"
            if steps:
                assert steps[0][0] == orbits.reps[o] and steps[-1][1] == key
        assert sum(len(orbits.moves_of(o)) for o in range(len(orbits))) == len(orbits.moves)


def test_tau_comparison(dec_composite):
    _, composite = dec_composite
    assert tau_comparison(composite).isomorphism


def test_unit_comparisons(dec_composite):
    D, _ = dec_composite
    for side in ("left", "right"):
        result = unit_comparison(D, side=side)
        assert result.acyclic, f"{side}: {result.acyclicity}"


def test_associativity_iso(dec_composite):
    D, _ = dec_composite
    result = associativity_iso(D, D, D)
    assert result.isomorphism, f"cells not matched: {[c for c, ok in result.cells.items() if not ok]}"
    assert result.left.total.sizes(TOP) == result.right.total.sizes(TOP)
    assert result.map.is_bijective(TOP)


def test_bundlisation_functoriality():
    Z4, Z2, point = (cyclic_group(n).as_groupoid() for n in (4, 2, 1))
    F = Functor(Z4, Z2, [0], [x % 2 for x in range(4)], name="Z/4->Z/2")
    for G in (identity_functor(Z2), Functor(Z2, point, [0], [0, 0], name="Z/2->1")):
        result = bundlisation_functoriality(F.nerve_map(), G.nerve_map())
        assert result.acyclic, f"{G.name}:\n{result.to_frame()}"
        assert result.map.target is result.composite.total


def test_composition_requires_right_principal():
    G = higher_cograph(extension_map())
    with pytest.raises(NotRightPrincipal):
        compose_2bibundles(opposite_bibundle(G), G)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
