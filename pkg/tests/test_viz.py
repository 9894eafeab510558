"""Unit tests for Kan profile heatmaps."""

import matplotlib

matplotlib.use("Agg")

import numpy as np
import pytest

from src.groupoids.categories import cyclic_group
from src.kan.profile import classify_object
from src.viz.kan_heatmap import plot_kan_profile, status_matrix


@pytest.fixture
def profile():
    return classify_object(cyclic_group(2).as_groupoid().nerve())


def test_status_matrix(profile):
    matrix = status_matrix(profile)
    assert list(matrix.columns)[-1] == 'Acyc'
    assert matrix.loc[1, '0'] == 1, "a vertex of N(Z/2) has two edges"
    assert matrix.loc[2, '1'] == 2
    assert np.isnan(matrix.loc[1, '2'])


def test_plot_saves_figure(profile, tmp_path):
    path = tmp_path / "profile.png"
    fig, ax = plot_kan_profile(profile, save_path=str(path))
    assert path.exists()
    assert ax.get_xlabel() == 'horn index k'
    assert 'N(Z/2)' in ax.get_title()


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
