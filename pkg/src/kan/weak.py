"""Weak equivalences and weak acyclic fibrations of 2-groupoids."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from src.errors import NotA2Groupoid
from src.kan.conditions import FAILS, UNIQUE, ConditionSpec, check_condition
from src.kan.profile import classify_object
from src.simplicial.core import SimplicialMap, TruncatedSSet

logger = logging.getLogger(__name__)


def bigons(X: TruncatedSSet) -> List[Tuple[int, int, int]]:
    """
    2-simplices whose d_0 face is degenerate, as (simplex, source edge, target edge).

    The source is d_1 and the target d_2; both edges share their endpoints.
    """
    degenerate_edges = set(int(e) for e in X.degeneracy(0, 0))
    d0, d1, d2 = X.face(2, 0), X.face(2, 1), X.face(2, 2)
    return [(x, int(d1[x]), int(d2[x])) for x in range(X.size(2)) if int(d0[x]) in degenerate_edges]


def endpoints(X: TruncatedSSet, e: int) -> Tuple[int, int]:
    """(vertex 0, vertex 1) of an edge, i.e. (d_1 e, d_0 e)."""
    return int(X.face(1, 1)[e]), int(X.face(1, 0)[e])


def require_2groupoid(X: TruncatedSSet) -> None:
    """
    Raises:
        NotA2Groupoid: X is not a Kan complex with unique fillers above level 2
    """
    profile = classify_object(X)
    level = profile.groupoid_level
    if level is None or level > 2:
        raise NotA2Groupoid(f"{X.name} is not a 2-groupoid (groupoid level {level})",
                            witness={'groupoid_level': level})


@dataclass
class WeakEquivalenceReport:
    """Essential surjectivity and the two halves of the bigon-functor condition."""

    essentially_surjective: bool
    locally_essentially_surjective: bool
    fully_faithful: bool
    weak_acyclic: Optional[bool] = None
    witnesses: Dict[str, Dict] = field(default_factory=dict)

    @property
    def weak_equivalence(self) -> bool:
        return (self.essentially_surjective and self.locally_essentially_surjective
                and self.fully_faithful)


def _bigon_classes(Y: TruncatedSSet) -> Set[Tuple[int, int]]:
    related = set()
    for _, s, t in bigons(Y):
        related.add((s, t))
        related.add((t, s))
    return related


def weak_equivalence_2groupoid(f: SimplicialMap, check_inputs: bool = True) -> WeakEquivalenceReport:
    """
    Check that a map of 2-groupoids is a weak equivalence.

    Essential surjectivity asks every vertex of Y to be joined by an edge to
    the image of a vertex of X. The functor on bigon groupoids is a weak
    equivalence edgewise: for vertices a, b of X every edge of Y between f(a)
    and f(b) is bigon-related to the image of an edge from a to b, and bigons
    between two edges of X with common endpoints biject with bigons between
    their images.

    Args:
        f: Map of 2-groupoid nerves
        check_inputs: Verify that source and target are 2-groupoids

    Returns:
        WeakEquivalenceReport, including the Acyc'(k) verdict for k = 0, 1, 2

    Raises:
        NotA2Groupoid: an end is not a 2-groupoid
    """
    X, Y = f.source, f.target
    if check_inputs:
        require_2groupoid(X)
        require_2groupoid(Y)
    witnesses: Dict[str, Dict] = {}

    images = set(int(v) for v in f.component(0))
    reached = set(int(Y.face(1, 1)[e]) for e in range(Y.size(1)) if int(Y.face(1, 0)[e]) in images)
    missing = sorted(set(range(Y.size(0))) - reached)
    es = not missing
    if missing:
        witnesses['essentially_surjective'] = {'vertex': missing[0]}

    related = _bigon_classes(Y)
    edges_between: Dict[Tuple[int, int], List[int]] = {}
    for e in range(X.size(1)):
        edges_between.setdefault(endpoints(X, e), []).append(e)
    y_edges_between: Dict[Tuple[int, int], List[int]] = {}
    for e in range(Y.size(1)):
        y_edges_between.setdefault(endpoints(Y, e), []).append(e)

    local_es = True
    for a in range(X.size(0)):
        for b in range(X.size(0)):
            images_ab = [int(f(1, e)) for e in edges_between.get((a, b), [])]
            for y in y_edges_between.get((int(f(0, a)), int(f(0, b))), []):
                if not any(y == z or (z, y) in related for z in images_ab):
                    local_es = False
                    witnesses.setdefault('locally_essentially_surjective',
                                         {'vertices': [a, b], 'edge': y})
    x_bigons: Dict[Tuple[int, int], List[int]] = {}
    for x, s, t in bigons(X):
        x_bigons.setdefault((s, t), []).append(x)
    y_bigons: Dict[Tuple[int, int], List[int]] = {}
    for y, s, t in bigons(Y):
        y_bigons.setdefault((s, t), []).append(y)

    ff = True
    for edges in edges_between.values():
        for s in edges:
            for t in edges:
                mapped = sorted(int(f(2, x)) for x in x_bigons.get((s, t), []))
                expected = sorted(y_bigons.get((int(f(1, s)), int(f(1, t))), []))
                if mapped != expected:
                    ff = False
                    witnesses.setdefault('fully_faithful', {
                        'edges': [s, t], 'bigons': len(mapped), 'image_bigons': len(expected),
                    })

    weak_acyclic = True
    for k in range(3):
        result = check_condition(f, ConditionSpec("WeakAcyc", k))
        if result.status == FAILS or (k >= 2 and result.status != UNIQUE):
            weak_acyclic = False
            witnesses.setdefault('weak_acyclic', {'k': k, 'status': result.status,
                                                  'horn': result.witness})
    report = WeakEquivalenceReport(es, local_es, ff, weak_acyclic, witnesses)
    logger.info(f"{f.name}: weak equivalence {report.weak_equivalence}, weak acyclic {weak_acyclic}")
    return report
