"""Unit tests for colored simplicial sets and bibundle classification."""

import pytest

from src.bibundles.colored import (
    ColoredSSet,
    colored_check,
    ends,
    from_bigraded,
    higher_cograph,
    opposite_bibundle,
    row_or_column,
    to_bigraded,
)
from src.bibundles.report import classify_bibundle, colored_weak_acyclicity
from src.errors import BadColorSplit, EndsNotGroupoids
from src.groupoids.bibundles import bundlisation
from src.groupoids.categories import cyclic_group
from src.groupoids.cograph import cograph_bimodule
from src.groupoids.functors import Functor, identity_functor
from src.kan.conditions import FAILS
from src.simplicial.core import identity_map
from src.simplicial.iso import are_isomorphic
from src.simplicial.shapes import simplex
from src.two_groupoids.comparisons import decalage_bibundle


@pytest.fixture
def extension_cograph():
    """Cograph of the quotient Z/4 -> Z/2."""
    Z4, Z2 = cyclic_group(4).as_groupoid(), cyclic_group(2).as_groupoid()
    F = Functor(Z4, Z2, [0], [x % 2 for x in range(4)], name="Z/4->Z/2")
    return higher_cograph(F.nerve_map())


def test_cograph_ends(extension_cograph):
    G = extension_cograph
    e = ends(G)
    assert are_isomorphic(e.white, cyclic_group(4).as_groupoid().nerve())
    assert are_isomorphic(e.black, cyclic_group(2).as_groupoid().nerve())
    assert len(G.cell(0, -1)) == 1
    assert len(G.cell(0, 0)) == 2, "one white vertex times two black edges"


def test_cograph_of_functor_is_right_principal(extension_cograph):
    report = classify_bibundle(extension_cograph, 1)
    flags = report.flags()
    assert flags['bibundle']
    assert flags['right_principal']
    assert not flags['left_principal'], "Z/4 does not act freely on the two points"
    assert not flags['morita']


def test_report_frame(extension_cograph):
    df = classify_bibundle(extension_cograph, 1).to_frame()
    assert list(df.columns) == ['group', 'condition', 'm', 'k', 'i', 'j', 'status', 'required', 'ok', 'witness']
    assert set(df['group']) == {'inner', 'colored', 'left', 'opposite_left'}
    assert (df.loc[df['m'] > 1, 'required'] == 'unique').all()
    assert df.loc[df['group'] != 'opposite_left', 'ok'].all()


def test_unit_cograph_is_morita():
    Z2 = cyclic_group(2).as_groupoid()
    G = cograph_bimodule(bundlisation(identity_functor(Z2)))
    assert classify_bibundle(G, 1).morita


def test_opposite_swaps_principality(extension_cograph):
    G = extension_cograph
    op = opposite_bibundle(G)
    assert op.vertex_colours == [1 - c for c in G.vertex_colours]
    assert classify_bibundle(op, 1).left_principal == classify_bibundle(G, 1).right_principal


def test_ends_must_be_groupoids(extension_cograph):
    with pytest.raises(EndsNotGroupoids) as excinfo:
        classify_bibundle(extension_cograph, 0)
    assert excinfo.value.witness['end'] == 'white'


def test_colour_split_checked(extension_cograph):
    with pytest.raises(BadColorSplit):
        colored_check(extension_cograph, 2, 0, 2, 2)
    with pytest.raises(BadColorSplit):
        row_or_column(extension_cograph, 'diagonal', 0)


def test_colored_outer_condition(extension_cograph):
    result = colored_check(extension_cograph, 2, 0, 2, 1)
    assert result.status != FAILS


def test_row_minus_one_is_the_black_end(extension_cograph):
    line = row_or_column(extension_cograph, 'row', -1)
    black = ends(extension_cograph).black
    assert line.space.sizes(2) == black.sizes(2)


def test_weak_acyclicity_split_by_colour(extension_cograph):
    G = extension_cograph
    statuses = colored_weak_acyclicity(identity_map(G.total), G)
    assert (0, (0, 1)) in statuses
    assert all(s != FAILS for s in statuses.values()), statuses


def test_weak_acyclicity_skips_decreasing_colours():
    D = decalage_bibundle(cyclic_group(2).as_groupoid().nerve())
    statuses = colored_weak_acyclicity(identity_map(D.total), D)
    for (k, colour), status in statuses.items():
        assert list(colour) == sorted(colour), f"k={k}: colour {colour} does not lie over Delta^1"
        assert status != FAILS, f"k={k}, colour {colour}"
    assert (1, (0, 0, 1)) in statuses


def test_bigraded_cells(extension_cograph):
    G = extension_cograph
    Z = to_bigraded(G)
    again = from_bigraded(Z)
    assert isinstance(again, ColoredSSet)
    assert again.cell_sizes(2) == G.cell_sizes(2)


def test_interval_as_colored_simplex():
    G = ColoredSSet(simplex(1), [0, 1])
    assert len(G.cell(0, 0)) == 1
    report = classify_bibundle(G, 0)
    assert report.morita, "Delta^1 is the unit bibundle of the point"


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
