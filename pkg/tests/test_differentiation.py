"""Unit tests for pair nerves of pointed sets and discrete jets."""

import pytest

from src.differentiation.jets import discrete_jet, jet_stage, reimpose_degeneracies
from src.differentiation.pair_nerve import (
    PointedFinSet,
    first_repeat,
    in_stage,
    pair_nerve,
    runs,
    stage_certificate,
    stage_inclusion,
)
from src.errors import BadParams, StageMissing
from src.groupoids.categories import cyclic_group
from src.groupoids.crossed import CrossedModule
from src.simplicial.iso import are_isomorphic
from src.simplicial.shapes import simplex


def group_nerve():
    return cyclic_group(2).as_groupoid().nerve()


def crossed_nerve():
    return CrossedModule(cyclic_group(1), cyclic_group(2), [0, 0], name="(Z/2->1)").nerve()


def test_pointed_sets():
    S = PointedFinSet.of_size(3)
    assert S.carrier == ("*", "s1", "s2") and S.base_index == 0
    with pytest.raises(BadParams):
        PointedFinSet(("a", "b"), "*")
    with pytest.raises(BadParams):
        PointedFinSet(("*", "*"))
    with pytest.raises(BadParams):
        PointedFinSet.of_size(0)


def test_sequence_helpers():
    assert runs((0, 0, 1)) == 2
    assert runs((1,)) == 1
    assert first_repeat((0, 1, 1)) == 1
    assert first_repeat((0, 1, 0)) is None
    assert in_stage((0, 1), 0, 1)
    assert not in_stage((1, 0), 0, 1), "sequences in a stage start at the basepoint"


def test_pair_nerve_sizes():
    P = pair_nerve(PointedFinSet.of_size(2))
    assert P.sizes(2) == [2, 4, 8], f"got {P.sizes(2)}"


def test_low_stages():
    S = PointedFinSet.of_size(2)
    assert are_isomorphic(pair_nerve(S, 0), simplex(0))
    P1 = pair_nerve(S, 1)
    assert P1.sizes(1) == [2, 3]
    assert are_isomorphic(P1, simplex(1))
    with pytest.raises(BadParams):
        pair_nerve(S, -1)


def test_stage_inclusions_are_left_anodyne():
    S = PointedFinSet.of_size(2)
    cert = stage_certificate(S, 1)
    assert cert.flavor == "left"
    assert len(cert) == 1
    assert stage_certificate(S, 2).flavor == "left"
    with pytest.raises(BadParams):
        stage_inclusion(S, 0)


def test_jets_of_a_1_groupoid():
    result = discrete_jet(group_nerve(), PointedFinSet.of_size(3))
    assert result.stabilized_at == 1, f"stabilised at {result.stabilized_at}"
    assert result.verified
    assert result.oracle_size == 4, "functors from pair(3) to Z/2"
    assert len(result.jet) == 4


def test_jets_of_a_2_groupoid():
    result = discrete_jet(crossed_nerve(), PointedFinSet.of_size(3))
    assert result.stabilized_at == 2, f"stabilised at {result.stabilized_at}"
    assert result.verified
    df = result.to_frame()
    assert list(df.columns) == ['k', 'elements', 'surjective', 'bijective']
    assert df['surjective'].all()


def test_jet_stops_at_max_stage():
    result = discrete_jet(crossed_nerve(), PointedFinSet.of_size(2), max_stage=2)
    assert result.stabilized_at is None
    assert result.jet is None and not result.verified


def test_stages_need_their_predecessor():
    X, S = group_nerve(), PointedFinSet.of_size(2)
    stage0 = jet_stage(X, S, 0)
    with pytest.raises(StageMissing):
        jet_stage(X, S, 2, stage0)
    with pytest.raises(StageMissing):
        jet_stage(X, PointedFinSet.of_size(3), 1, stage0)
    with pytest.raises(BadParams):
        jet_stage(X, S, -1)


def test_reimposing_degeneracies_matches():
    X, S = crossed_nerve(), PointedFinSet.of_size(2)
    stage0 = jet_stage(X, S, 0)
    free = jet_stage(X, S, 1, stage0, impose_degeneracies=False)
    imposed = jet_stage(X, S, 1, stage0)
    assert len(free) >= len(imposed)
    assert len(reimpose_degeneracies(free)) == len(imposed)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
