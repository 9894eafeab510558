"""Classification of colored simplicial sets as bibundles between higher groupoids."""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import pandas as pd

from src.bibundles.colored import ColoredSSet, colored_check, ends, opposite_bibundle
from src.errors import EndsNotGroupoids
from src.kan.conditions import FAILS, UNIQUE, ConditionResult, kan, status_from_counts, weak_acyclic_counts
from src.kan.profile import classify_object
from src.simplicial.core import SimplicialMap

logger = logging.getLogger(__name__)


def _ok(result: ConditionResult, unique: bool) -> bool:
    return result.status == UNIQUE if unique else result.status != FAILS


@dataclass
class BibundleReport:
    """
    Colored Kan statuses of a colored simplicial set and the flags they imply.

    ``inner`` holds Kan(m, k) for 0 < k < m, ``colored`` holds Kan(m, 0)[i, j]
    with i >= 2 and Kan(m, m)[i, j] with j >= 2, ``left`` holds Kan(m, 0) and
    ``opposite_left`` holds Kan(m, 0) of the opposite bibundle.
    """

    subject: str
    n: int
    max_dim: int
    inner: Dict[Tuple[int, int], ConditionResult] = field(default_factory=dict)
    colored: Dict[Tuple[int, int, int, int], ConditionResult] = field(default_factory=dict)
    left: Dict[int, ConditionResult] = field(default_factory=dict)
    opposite_left: Dict[int, ConditionResult] = field(default_factory=dict)

    def _group_ok(self, group: Dict) -> bool:
        # keys start with m, or are m
        return all(_ok(r, (key[0] if isinstance(key, tuple) else key) > self.n) for key, r in group.items())

    @property
    def bibundle(self) -> bool:
        return self._group_ok(self.inner) and self._group_ok(self.colored)

    @property
    def right_principal(self) -> bool:
        return self.bibundle and self._group_ok(self.left)

    @property
    def left_principal(self) -> bool:
        return self.bibundle and self._group_ok(self.opposite_left)

    @property
    def morita(self) -> bool:
        return self.right_principal and self.left_principal

    def flags(self) -> Dict[str, bool]:
        return {
            'bibundle': self.bibundle,
            'right_principal': self.right_principal,
            'left_principal': self.left_principal,
            'morita': self.morita,
        }

    def to_frame(self) -> pd.DataFrame:
        """One row per checked condition, with the requirement the flags apply to it."""
        rows = []

        def add(group: str, m: int, k: int, i, j, result: ConditionResult) -> None:
            unique = m > self.n
            colour = f"[{i},{j}]" if i is not None else ""
            rows.append({
                'group': group,
                'condition': f"Kan{'!' if unique else ''}({m},{k}){colour}",
                'm': m, 'k': k, 'i': i, 'j': j,
                'status': result.status,
                'required': 'unique' if unique else 'exists',
                'ok': _ok(result, unique),
                'witness': result.witness,
            })

        for (m, k), r in sorted(self.inner.items()):
            add('inner', m, k, None, None, r)
        for (m, k, i, j), r in sorted(self.colored.items()):
            add('colored', m, k, i, j, r)
        for m, r in sorted(self.left.items()):
            add('left', m, 0, None, None, r)
        for m, r in sorted(self.opposite_left.items()):
            add('opposite_left', m, 0, None, None, r)
        return pd.DataFrame(rows, columns=['group', 'condition', 'm', 'k', 'i', 'j', 'status',
                                           'required', 'ok', 'witness'])


def classify_bibundle(G: ColoredSSet, n: int, max_dim: Optional[int] = None,
                      check_ends: bool = True) -> BibundleReport:
    """
    Check the bibundle conditions of a colored simplicial set between n-groupoids.

    Args:
        G: Colored simplicial set
        n: Groupoid level of the ends; conditions above n must hold uniquely
        max_dim: Highest simplex dimension checked (defaults to min(n + 2, c + 1))
        check_ends: Verify that both ends are n-groupoids first

    Returns:
        BibundleReport

    Raises:
        EndsNotGroupoids: an end is not an n-groupoid
    """
    if max_dim is None:
        max_dim = min(n + 2, G.bound + 1)
    if check_ends:
        e = ends(G)
        for side, X in (('white', e.white), ('black', e.black)):
            profile = classify_object(X)
            if not profile.is_n_groupoid(n):
                raise EndsNotGroupoids(f"{G.name}: the {side} end is not a {n}-groupoid",
                                       witness={'end': side, 'groupoid_level': profile.groupoid_level})

    report = BibundleReport(subject=G.name, n=n, max_dim=max_dim)
    op = opposite_bibundle(G)
    for m in range(1, max_dim + 1):
        for k in range(1, m):
            report.inner[(m, k)] = kan(G.structure, m, k)
        for i in range(2, m + 2):
            report.colored[(m, 0, i, m + 1 - i)] = colored_check(G, m, 0, i, m + 1 - i)
        for j in range(2, m + 2):
            report.colored[(m, m, m + 1 - j, j)] = colored_check(G, m, m, m + 1 - j, j)
        report.left[m] = kan(G.structure, m, 0)
        report.opposite_left[m] = kan(op.structure, m, 0)
    logger.info(f"{G.name}: bibundle flags {report.flags()}")
    return report


def colored_weak_acyclicity(
    f: SimplicialMap,
    target: ColoredSSet,
    max_k: int = 2,
) -> Dict[Tuple[int, Tuple[int, ...]], str]:
    """
    Weak acyclicity of a map into a colored simplicial set, split by colour.

    For each k and each colour of the (k+1)-simplex completing the horn, the
    status of the restricted condition Acyc'(k).

    Args:
        f: Map whose target is ``target.total``
        target: Colored target
        max_k: Highest k checked

    Returns:
        (k, colour sequence) -> status
    """
    Y = target.total
    colours = target.vertex_colours
    out: Dict[Tuple[int, Tuple[int, ...]], str] = {}

    X = f.source
    for c0, c1 in ((0, 0), (0, 1), (1, 1)):
        counts: Counter = Counter({v: 0 for v in range(Y.size(0)) if colours[v] == c1})
        images = Counter(int(f(0, x)) for x in range(X.size(0)))
        for y in range(Y.size(1)):
            head, tail = int(Y.face(1, 1)[y]), int(Y.face(1, 0)[y])
            if colours[head] == c0 and colours[tail] == c1:
                counts[tail] += images.get(head, 0)
        if counts:
            out[(0, (c0, c1))] = status_from_counts({(v,): n for v, n in counts.items()})[0]

    for k in range(1, max_k + 1):
        grouped: Dict[Tuple[int, ...], Dict] = {}
        for key, n in weak_acyclic_counts(f, k).items():
            horn = key[1]
            tail = [colours[int(v)] for v in Y.vertices(k)[horn[0]]]
            head = colours[int(Y.vertices(k)[horn[1]][0])]
            colour = tuple([head] + tail)
            # a horn whose vertex colours decrease has no simplex over Delta^1 to fill it
            if any(a > b for a, b in zip(colour, colour[1:])):
                continue
            grouped.setdefault(colour, {})[key] = n
        for colour, counts in sorted(grouped.items()):
            out[(k, colour)] = status_from_counts(counts)[0]
    return out
