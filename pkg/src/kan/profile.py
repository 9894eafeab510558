"""Kan profiles: the grid of condition statuses for an object or a map, and its flags."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import pandas as pd

from src.kan.conditions import (
    FAILS,
    UNIQUE,
    ConditionResult,
    ConditionSpec,
    Subject,
    check_condition,
)
from src.simplicial.core import SimplicialMap, TruncatedSSet

logger = logging.getLogger(__name__)


@dataclass
class KanProfile:
    """
    Statuses of Kan(m, k), Acyc(m) and, for maps, WeakAcyc(m) over a scanned window.

    Classification flags are properties computed from ``results``; nothing
    else is stored.
    """

    subject: str
    is_map: bool
    max_dim: int
    cosk_level: int
    results: Dict[Tuple[str, int, Optional[int]], ConditionResult] = field(default_factory=dict)

    def status(self, base: str, m: int, k: Optional[int] = None) -> Optional[str]:
        result = self.results.get((base, m, k))
        return None if result is None else result.status

    def _kan_cells(self, inner_only: bool = False) -> List[Tuple[int, int, str]]:
        cells = []
        for (base, m, k), result in sorted(self.results.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2] or 0)):
            if base != "Kan":
                continue
            if inner_only and not 0 < k < m:
                continue
            cells.append((m, k, result.status))
        return cells

    @property
    def window_complete(self) -> bool:
        """Whether the scan reaches c + 1, above which every status is forced."""
        return self.max_dim >= self.cosk_level + 1

    @property
    def is_kan(self) -> bool:
        return all(status != FAILS for _, _, status in self._kan_cells())

    @property
    def is_inner_kan(self) -> bool:
        return all(status != FAILS for _, _, status in self._kan_cells(inner_only=True))

    def _unique_above(self, inner_only: bool) -> Optional[int]:
        cells = self._kan_cells(inner_only)
        for n in range(0, self.max_dim + 1):
            if all(status == UNIQUE for m, _, status in cells if m > n):
                return n
        return None

    @property
    def groupoid_level(self) -> Optional[int]:
        """Least n with Kan and Kan!(m, k) for all scanned m > n, or None when not Kan."""
        if not self.is_kan:
            return None
        return self._unique_above(inner_only=False)

    @property
    def category_level(self) -> Optional[int]:
        """
        Least n >= 1 with inner Kan and inner Kan!(m, k) for all scanned m > n.

        Inner horns start at m = 2, so level 0 is reserved for discrete subjects,
        where every 1-horn (a single vertex) has only its degenerate edge.
        """
        if not self.is_inner_kan:
            return None
        level = self._unique_above(inner_only=True)
        if level == 0 and not self._is_discrete:
            return 1
        return level

    @property
    def _is_discrete(self) -> bool:
        edges = [status for m, _, status in self._kan_cells() if m == 1]
        return bool(edges) and all(status == UNIQUE for status in edges)

    def is_n_groupoid(self, n: int) -> bool:
        level = self.groupoid_level
        return level is not None and level <= n

    @property
    def is_acyclic(self) -> bool:
        cells = [r for (base, _, _), r in self.results.items() if base == "Acyc"]
        return bool(cells) and all(r.status != FAILS for r in cells)

    @property
    def is_weak_acyclic(self) -> Optional[bool]:
        """Acyc'(k) onto for every scanned k and one-to-one from k = 2 on; None if not scanned."""
        cells = {m: r for (base, m, _), r in self.results.items() if base == "WeakAcyc"}
        if not cells:
            return None
        return all(r.status != FAILS and (m < 2 or r.status == UNIQUE) for m, r in cells.items())

    def flags(self) -> Dict[str, object]:
        noun = "fibration" if self.is_map else "complex"
        out = {
            f'kan_{noun}': self.is_kan,
            f'inner_kan_{noun}': self.is_inner_kan,
            'acyclic': self.is_acyclic,
            'groupoid_level': self.groupoid_level,
            'category_level': self.category_level,
            'window_complete': self.window_complete,
        }
        if self.is_map:
            out['weak_acyclic'] = self.is_weak_acyclic
        return out

    def to_frame(self) -> pd.DataFrame:
        """One row per scanned condition."""
        rows = []
        for (base, m, k), result in self.results.items():
            rows.append({
                'condition': base,
                'm': m,
                'k': k,
                'status': result.status,
                'horns': result.horns,
                'min_fillers': min(result.histogram) if result.histogram else None,
                'max_fillers': max(result.histogram) if result.histogram else None,
                'witness': result.witness,
            })
        df = pd.DataFrame(rows, columns=['condition', 'm', 'k', 'status', 'horns',
                                         'min_fillers', 'max_fillers', 'witness'])
        return df.sort_values(['condition', 'm', 'k'], na_position='first').reset_index(drop=True)


def _scan(subject: Subject, max_dim: int, is_map: bool, weak: bool) -> KanProfile:
    if is_map:
        c = max(subject.source.cosk_level, subject.target.cosk_level)
    else:
        c = subject.cosk_level
    max_dim = min(max_dim, c + 1)
    profile = KanProfile(subject=subject.name, is_map=is_map, max_dim=max_dim, cosk_level=c)
    for m in range(1, max_dim + 1):
        for k in range(m + 1):
            profile.results[("Kan", m, k)] = check_condition(subject, ConditionSpec("Kan", m, k))
    for m in range(0, max_dim + 1):
        profile.results[("Acyc", m, None)] = check_condition(subject, ConditionSpec("Acyc", m))
    if weak:
        for m in range(0, max_dim):
            profile.results[("WeakAcyc", m, None)] = check_condition(
                subject, ConditionSpec("WeakAcyc", m)
            )
    logger.info(f"{subject.name}: scanned {len(profile.results)} conditions up to level {max_dim}")
    return profile


def classify_object(X: TruncatedSSet, max_dim: Optional[int] = None) -> KanProfile:
    """
    Scan Kan(m, k) and Acyc(m) for X up to max_dim (capped at c + 1).

    Args:
        X: Simplicial set
        max_dim: Highest m scanned; defaults to c + 1

    Returns:
        KanProfile
    """
    if max_dim is None:
        max_dim = X.cosk_level + 1
    return _scan(X, max_dim, is_map=False, weak=False)


def classify_map(f: SimplicialMap, max_dim: Optional[int] = None, weak: bool = True) -> KanProfile:
    """
    Scan the relative conditions of f: X -> Y.

    Args:
        f: Simplicial map
        max_dim: Highest m scanned; defaults to the larger stored level plus one
        weak: Also scan the weak acyclicity conditions Acyc'(k)

    Returns:
        KanProfile with fibration flags
    """
    if max_dim is None:
        max_dim = max(f.source.cosk_level, f.target.cosk_level) + 1
    return _scan(f, max_dim, is_map=True, weak=weak)
