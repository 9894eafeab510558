"""Heatmaps of Kan profiles."""

from typing import Optional

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
import seaborn as sns
from matplotlib.colors import ListedColormap

from src.kan.profile import KanProfile

STATUS_CODES = {'fails': 0, 'surjective_only': 1, 'unique': 2}
STATUS_COLOURS = ['#d7301f', '#fdcc8a', '#31a354']


def status_matrix(profile: KanProfile) -> pd.DataFrame:
    """
    Kan(m, k) statuses as codes (0 fails, 1 surjective only, 2 unique).

    Rows are m, columns are k; cells with k > m are NaN. Acyc(m) is added as
    a last column.
    """
    df = profile.to_frame()
    kan = df[df['condition'] == 'Kan']
    acyc = df[df['condition'] == 'Acyc']
    levels = sorted(set(kan['m']) | set(acyc['m']))
    width = int(kan['k'].max()) + 1 if len(kan) else 0
    matrix = pd.DataFrame(np.nan, index=pd.Index(levels, name='m'),
                          columns=[str(k) for k in range(width)] + ['Acyc'])
    for _, row in kan.iterrows():
        matrix.loc[row['m'], str(int(row['k']))] = STATUS_CODES[row['status']]
    for _, row in acyc.iterrows():
        matrix.loc[row['m'], 'Acyc'] = STATUS_CODES[row['status']]
    return matrix


def plot_kan_profile(
    profile: KanProfile,
    title: Optional[str] = None,
    save_path: Optional[str] = None,
):
    """
    Draw the (m, k) status grid of a profile.

    Args:
        profile: Result of classify_object or classify_map
        title: Plot title (defaults to the subject name)
        save_path: Path to save figure

    Returns:
        (fig, ax)
    """
    matrix = status_matrix(profile)
    fig, ax = plt.subplots(figsize=(1.2 * len(matrix.columns) + 3, 0.8 * len(matrix) + 2))

    sns.heatmap(
        matrix,
        annot=matrix.replace({v: k[0].upper() for k, v in STATUS_CODES.items()}),
        fmt='',
        cmap=ListedColormap(STATUS_COLOURS),
        vmin=-0.5,
        vmax=2.5,
        linewidths=0.5,
        linecolor='white',
        cbar_kws={'ticks': [0, 1, 2], 'label': 'fillers'},
        ax=ax
    )
    ax.collections[0].colorbar.set_ticklabels(['none', 'several', 'unique'])

    ax.set_title(title or f'Kan profile: {profile.subject}', fontsize=14, fontweight='bold')
    ax.set_xlabel('horn index k', fontsize=12)
    ax.set_ylabel('dimension m', fontsize=12)
    plt.yticks(rotation=0)
    plt.tight_layout()

    if save_path:
        plt.savefig(save_path, dpi=300, bbox_inches='tight')
        print(f"Saved Kan profile heatmap to {save_path}")

    return fig, ax
