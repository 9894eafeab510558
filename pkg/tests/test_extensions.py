"""Unit tests for filtration certificates, join pushouts and colored outer horns."""

from itertools import islice

import pytest

from src.bibundles.colored import higher_cograph
from src.errors import (
    BadColorSplit,
    BadParams,
    BudgetExceeded,
    FlavorMismatch,
    NotASubcomplex,
    NotFound,
    ReplayMismatch,
)
from src.extensions.colored_horns import fill_colored_outer_horn, outer_horns
from src.extensions.filtrations import (
    FiltrationCertificate,
    find_filtration,
    horn_allowed,
    join_collapsibility,
    verify_certificate,
)
from src.groupoids.categories import cyclic_group
from src.groupoids.functors import Functor
from src.simplicial.hom import HomSearch, hom_set
from src.simplicial.iso import same_labelled
from src.simplicial.shapes import boundary, face_of_simplex, horn, inclusion, simplex, spine


def test_horn_flavors():
    assert horn_allowed("inner", 2, 1)
    assert not horn_allowed("inner", 2, 0)
    assert horn_allowed("left", 2, 0) and not horn_allowed("left", 2, 2)
    assert horn_allowed("right", 2, 2) and not horn_allowed("right", 2, 0)
    assert horn_allowed("special", 2, 0, monochrome=True)
    assert not horn_allowed("special", 2, 0)


def test_inner_horn_fills_in_one_step():
    i = inclusion(horn(2, 1), simplex(2))
    cert = find_filtration(i, "inner")
    assert len(cert) == 1
    step = cert.steps[0]
    assert (step.n, step.k) == (2, 1)
    ok, stages = verify_certificate(cert, i)
    assert ok and len(stages) == 2


def test_vertex_into_edge_is_left_not_right():
    i = inclusion(face_of_simplex(1, [0]), simplex(1))
    cert = find_filtration(i, "left")
    assert [s.k for s in cert.steps] == [0]
    with pytest.raises(NotFound):
        find_filtration(i, "right")


def test_spine_into_simplex_is_inner():
    for n in (2, 3):
        i = inclusion(spine(n), simplex(n))
        ok, _ = verify_certificate(find_filtration(i, "inner"), i)
        assert ok, f"spine {n}"


def test_boundary_flavor_attaches_interiors():
    i = inclusion(boundary(2), simplex(2))
    cert = find_filtration(i, "boundary")
    assert [s.k for s in cert.steps] == [None]
    with pytest.raises(NotFound) as excinfo:
        find_filtration(i, "inner")
    assert excinfo.value.witness['exhaustive'] is True


def test_replay_against_another_flavor():
    i = inclusion(horn(2, 0), simplex(2))
    cert = find_filtration(i, "left")
    with pytest.raises(ReplayMismatch) as excinfo:
        verify_certificate(cert, i, flavor="inner")
    assert excinfo.value.step == 0


def test_certificate_dict_round_trip_replays():
    i = inclusion(horn(3, 1), simplex(3))
    cert = find_filtration(i, "inner")
    again = FiltrationCertificate.from_dict(cert.to_dict())
    assert again.steps == cert.steps
    ok, _ = verify_certificate(again, i)
    assert ok


def test_search_budget():
    with pytest.raises(BudgetExceeded) as excinfo:
        find_filtration(inclusion(spine(3), simplex(3)), "inner", budget=1)
    assert 'explored' in excinfo.value.partial


def test_bad_inputs():
    with pytest.raises(BadParams):
        find_filtration(inclusion(horn(2, 1), simplex(2)), "outer")
    with pytest.raises(BadParams):
        find_filtration(inclusion(horn(2, 1), simplex(2)), "special")
    S = simplex(1)
    with pytest.raises(NotASubcomplex):
        find_filtration(hom_set(S, simplex(0))[0], "all")


def test_join_pushout_is_a_horn():
    pushout = join_collapsibility(inclusion(horn(2, 1), simplex(2)), inclusion(boundary(1), simplex(1)),
                                  ("inner", "boundary"))
    assert same_labelled(pushout.union, horn(4, 1))
    assert pushout.certificate.flavor == "inner"
    ok, _ = verify_certificate(pushout.certificate, pushout.inclusion)
    assert ok


def test_join_pushout_flavor_pairs():
    f = inclusion(horn(2, 1), simplex(2))
    with pytest.raises(FlavorMismatch):
        join_collapsibility(f, f, ("inner", "inner"))


def _extension_cograph():
    Z4, Z2 = cyclic_group(4).as_groupoid(), cyclic_group(2).as_groupoid()
    F = Functor(Z4, Z2, [0], [x % 2 for x in range(4)], name="Z/4->Z/2")
    return higher_cograph(F.nerve_map())


def test_outer_horns_lie_over_the_interval():
    G = _extension_cograph()
    for m in (2, 3):
        for i in range(m + 2):
            for h in islice(outer_horns(G, m, i), 6):
                colours = [G.vertex_colours[h(0, v)] for v in range(m + 1)]
                assert colours == [0] * i + [1] * (m + 1 - i), f"m={m}, i={i}: colours {colours}"
    with pytest.raises(BadColorSplit):
        next(outer_horns(G, 2, 4))


def test_colored_outer_horn_rejects_horns_off_the_interval():
    G = _extension_cograph()
    h = next(h for h in HomSearch(horn(2, 0), G.total).maps()
             if [G.vertex_colours[h(0, v)] for v in range(3)] == [0, 1, 0])
    with pytest.raises(BadColorSplit):
        fill_colored_outer_horn(G, h)


def test_colored_outer_horn_agrees_with_enumeration():
    G = _extension_cograph()
    horns = list(islice(outer_horns(G, 2, 2), 4))
    assert horns, "the cograph has white-white-black horns"
    for h in horns:
        result = fill_colored_outer_horn(G, h)
        assert result.split == (2, 1)
        assert result.in_enumeration, f"filler {result.filler} not among {result.fillers}"
        assert result.consistent


def test_colored_outer_horn_level_three_is_unique():
    G = _extension_cograph()
    for i in (2, 3):
        for h in islice(outer_horns(G, 3, i), 2):
            result = fill_colored_outer_horn(G, h)
            assert result.unique and result.in_enumeration, f"split ({i}, {4 - i})"


def test_colored_outer_horn_needs_two_apex_colours():
    G = _extension_cograph()
    h = next(outer_horns(G, 2, 1))
    with pytest.raises(BadColorSplit):
        fill_colored_outer_horn(G, h)
    with pytest.raises(BadParams):
        fill_colored_outer_horn(G, h, k=1)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
