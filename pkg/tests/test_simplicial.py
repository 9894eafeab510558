"""Unit tests for truncated simplicial sets, shapes and constructions."""

from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.errors import (
    BadParams,
    IdentityViolation,
    IncompatibleTruncations,
    InvalidMap,
    LevelOutOfRange,
    NonCommutingSquare,
    NonInclusion,
    PartialTable,
    TruncationTooLow,
)
from src.groupoids.categories import cyclic_group, pair_groupoid
from src.simplicial.constructions import (
    coskeleton,
    decalage,
    decalage_transpose,
    is_connected,
    is_coskeletal,
    join,
    opposite,
    path_components,
    pullback,
    skeleton,
)
from src.simplicial.core import SimplicialMap, identity_map, make_truncated, map_from_function
from src.simplicial.hom import HomSearch, count_maps, enumerate_lifts, hom_set
from src.simplicial.iso import are_isomorphic
from src.simplicial.shapes import boundary, empty_sset, horn, inclusion, shape, simplex, spine, standard_library


def interval(d0_of_degenerate=0):
    """Delta^1 stored up to level 1: edges s0(0), s0(1), e."""
    return make_truncated(
        [2, 3],
        {1: [[d0_of_degenerate, 1, 1], [0, 1, 0]]},
        {0: [[0, 1]]},
        cosk_level=1,
        name="I",
    )


def nerve_z(n):
    return cyclic_group(n).as_groupoid().nerve()


def test_simplex_sizes():
    """Delta^2 has 3 vertices, 6 edges and 10 triangles counted with degeneracies."""
    assert simplex(2).sizes(2) == [3, 6, 10], f"got {simplex(2).sizes(2)}"


@settings(max_examples=20, deadline=None)
@given(n=st.integers(min_value=0, max_value=3), m=st.integers(min_value=0, max_value=3))
def test_simplex_levels_are_monotone_sequences(n, m):
    """Level m of Delta^n holds the weakly monotone sequences of length m + 1."""
    assert simplex(n).size(m) == comb(n + m + 1, m + 1)


def test_horn_sizes():
    H = horn(2, 1)
    assert H.sizes(2) == [3, 5, 7], f"got {H.sizes(2)}"
    assert H.nondegenerate(2) == [], "a horn has no interior"


def test_shape_parameters_checked():
    with pytest.raises(BadParams):
        horn(1, 2)
    with pytest.raises(BadParams):
        shape('horn', 2)
    with pytest.raises(BadParams):
        shape('torus', 1)
    assert shape('spine', 3).sizes(1) == spine(3).sizes(1)


def test_coskeletal_completion_of_interval():
    """The 1-truncated interval completes to Delta^1 above level 1."""
    I = interval()
    assert I.size(2) == 4, f"expected 4 triangles, got {I.size(2)}"
    assert are_isomorphic(I, simplex(1))


def test_identity_violation_reports_family():
    with pytest.raises(IdentityViolation) as excinfo:
        interval(d0_of_degenerate=1)
    err = excinfo.value
    assert err.family == "d_j s_j = d_{j+1} s_j = id"
    assert err.witness['simplex'] == 0
    assert err.code == 2


def test_partial_table_rejected():
    with pytest.raises(PartialTable):
        make_truncated([2, 3], {1: [[0, 1, 1]]}, {0: [[0, 1]]}, cosk_level=1)
    with pytest.raises(PartialTable):
        make_truncated([2, 3], {1: [[0, 1, 5], [0, 1, 0]]}, {0: [[0, 1]]}, cosk_level=1)


def test_map_commutes_with_faces():
    X = simplex(1)
    with pytest.raises(InvalidMap):
        # swap the vertices but keep the edge: d_0 no longer commutes
        SimplicialMap(X, X, [[1, 0], [0, 1, 2]])
    f = identity_map(X)
    assert f.is_bijective(2)


def test_hom_counts():
    assert count_maps(simplex(1), nerve_z(2)) == 2
    assert count_maps(horn(2, 1), nerve_z(3)) == 9
    assert count_maps(simplex(0), simplex(2)) == 3
    assert len(hom_set(simplex(1), simplex(1))) == 3


def long_path(n):
    """A path of n edges: degenerate edges first, then the edge i -> i + 1 at n + 1 + i."""
    vertices = list(range(n + 1))
    return make_truncated(
        [n + 1, 2 * n + 1],
        {1: [vertices + [i + 1 for i in range(n)], vertices + list(range(n))]},
        {0: [vertices]},
        cosk_level=1,
        name=f"P{n}",
        dimension=1,
    )


def test_hom_search_on_long_sources():
    """Sources with thousands of nondegenerate simplices are searched without deep recursion."""
    P = long_path(1000)
    assert count_maps(P, nerve_z(1)) == 1
    f = HomSearch(P, simplex(1)).first()
    assert f is not None and set(f.component(0).tolist()) == {0}, "the first map is constant at 0"


def test_lifts_against_inner_horn_in_nerve():
    """Inner horns in a group nerve have exactly one filler."""
    X = nerve_z(3)
    H = horn(2, 1)
    i = inclusion(H, simplex(2))
    for f in hom_set(H, X):
        lifts = enumerate_lifts(i, f)
        assert len(lifts) == 1, f"{len(lifts)} fillers"


def test_lift_inputs_checked():
    S, P = simplex(1), simplex(0)
    X = nerve_z(2)
    f = hom_set(S, X)[0]
    with pytest.raises(NonInclusion):
        enumerate_lifts(hom_set(S, P)[0], f)
    i = identity_map(S)
    lifts = enumerate_lifts(i, f, hom_set(S, P)[0], hom_set(X, P)[0])
    assert len(lifts) == 1 and lifts[0].agrees_with(f, 1)
    constant = hom_set(X, S)[0]
    with pytest.raises(NonCommutingSquare):
        enumerate_lifts(i, f, identity_map(S), constant)


def test_inclusion_requires_labels():
    with pytest.raises(NonInclusion):
        inclusion(simplex(2), simplex(1))


def test_join_of_simplices():
    for n, m in [(0, 0), (0, 1), (1, 1)]:
        J = join(simplex(n), simplex(m))
        assert are_isomorphic(J, simplex(n + m + 1)), f"Delta^{n} * Delta^{m}"


def test_join_with_empty_is_identity():
    Y = simplex(1)
    J = join(empty_sset(), Y)
    assert J.sizes(2) == Y.sizes(2)
    assert are_isomorphic(J, Y)


def test_coskeletality():
    assert is_coskeletal(simplex(2), 1)
    assert not is_coskeletal(simplex(2), 0), "Delta^2 has no edge 1 -> 0"
    assert is_coskeletal(nerve_z(2), 2)
    assert not is_coskeletal(nerve_z(2), 1), "N(Z/2) has unfillable triangle boundaries"
    assert not is_coskeletal(boundary(2), 1), "the hollow triangle is not 1-coskeletal"


def test_skeleton_of_triangle_is_its_boundary():
    S = skeleton(simplex(2), 1)
    assert S.sizes(2) == [3, 6, 9], "only the degenerate 2-simplices survive"
    assert are_isomorphic(S, boundary(2))
    with pytest.raises(TruncationTooLow):
        skeleton(simplex(1), 3)
    with pytest.raises(LevelOutOfRange):
        skeleton(simplex(1), -1)


def test_coskeleton_fills_hollow_triangle():
    C = coskeleton(boundary(2), 1)
    assert C.cosk_level == 1
    assert C.size(2) == 10, "nine degenerate triangles plus the filled boundary"
    assert are_isomorphic(C, simplex(2))


def test_pullback_of_identities():
    X = nerve_z(2)
    P, p, q = pullback(identity_map(X), identity_map(X))
    assert P.sizes(2) == X.sizes(2)
    assert p.target is X and q.target is X
    assert are_isomorphic(P, X)


def test_pullback_over_point_is_product():
    pt = simplex(0)
    X, Y = simplex(1), nerve_z(2)
    f = map_from_function(X, pt, lambda m, x: 0)
    g = map_from_function(Y, pt, lambda m, x: 0)
    P, _, _ = pullback(f, g)
    assert P.sizes(2) == [2 * 1, 3 * 2, 4 * 4]
    with pytest.raises(IncompatibleTruncations):
        pullback(f, map_from_function(Y, simplex(0), lambda m, x: 0))


def test_opposite_of_simplex():
    assert are_isomorphic(opposite(simplex(2)), simplex(2))


def test_decalage_shifts_levels():
    X = nerve_z(2)
    D, pi, kappa = decalage(X)
    assert D.sizes(2) == [X.size(1), X.size(2), X.size(3)]
    assert pi.target is X
    assert kappa.target.size(0) == X.size(0)


def test_decalage_transpose_is_a_bijection():
    X = nerve_z(3)
    D, _, _ = decalage(X)
    S = simplex(1)
    maps = hom_set(join(S, simplex(0)), X)
    transposes = [decalage_transpose(f, S, D) for f in maps]
    images = {tuple(t.components(1)[1]) for t in transposes}
    assert len(images) == len(maps) == count_maps(S, D)


def test_decalage_adjunction_counts():
    for X in (nerve_z(2), pair_groupoid([0, 1]).nerve()):
        D, _, _ = decalage(X)
        for S in filter(is_connected, standard_library(2)):
            assert count_maps(join(S, simplex(0)), X) == count_maps(S, D), f"{X.name}: {S.name}"


def test_decalage_adjunction_needs_connected_shapes():
    """Two points coned off share the cone vertex, so the counts differ once X has two objects."""
    X = pair_groupoid([0, 1]).nerve()
    D, _, _ = decalage(X)
    S = boundary(1)
    assert not is_connected(S)
    assert count_maps(join(S, simplex(0)), X) == 8, "pairs of arrows with a common target"
    assert count_maps(S, D) == 16


def test_path_components():
    assert path_components(boundary(1)).tolist() == [0, 1]
    assert is_connected(horn(2, 0)) and is_connected(spine(3))
    assert not is_connected(empty_sset())


def test_decalage_variant_checked():
    with pytest.raises(LevelOutOfRange):
        decalage(simplex(1), variant="shift")


def test_vertices_of_simplex():
    np.testing.assert_array_equal(simplex(1).vertices(1), np.array([[0, 0], [0, 1], [1, 1]]))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
