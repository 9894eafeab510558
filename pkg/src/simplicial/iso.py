"""Isomorphism search between finite simplicial sets."""

import logging
from typing import Dict, Optional, Tuple

from src.simplicial.core import SimplicialMap, TruncatedSSet
from src.simplicial.hom import HomSearch

logger = logging.getLogger(__name__)


def _profile(X: TruncatedSSet, top: int) -> Tuple:
    return tuple((X.size(m), len(X.nondegenerate(m))) for m in range(top + 1))


def find_isomorphism(
    X: TruncatedSSet,
    Y: TruncatedSSet,
    fixed: Optional[Dict[Tuple[int, int], int]] = None,
    budget: Optional[int] = None,
) -> Optional[SimplicialMap]:
    """
    Search for an isomorphism X -> Y.

    Nondegenerate simplices are sent injectively to nondegenerate simplices; a
    candidate map is accepted when it is bijective on every level up to the
    higher of the two stored levels, above which both sides are determined by
    their boundaries.

    Args:
        X: Source
        Y: Target
        fixed: Optional partial assignment (level, simplex of X) -> simplex of Y
        budget: Optional cap on search expansions

    Returns:
        The first isomorphism in canonical order, or None
    """
    top = max(X.cosk_level, Y.cosk_level)
    if _profile(X, top) != _profile(Y, top):
        logger.debug(f"{X.name} and {Y.name} differ in level sizes")
        return None
    search = HomSearch(X, Y, fixed=fixed, injective=True, search_level=top, budget=budget)
    for f in search.maps():
        if f.is_bijective(top):
            return f
    return None


def are_isomorphic(X: TruncatedSSet, Y: TruncatedSSet) -> bool:
    return find_isomorphism(X, Y) is not None


def same_labelled(X: TruncatedSSet, Y: TruncatedSSet, up_to: Optional[int] = None) -> bool:
    """
    Whether X and Y coincide after matching simplices by label (bit-exact comparison).

    Levels are compared as label sets, and every face and degeneracy must agree
    under the label matching.
    """
    if up_to is None:
        up_to = max(X.cosk_level, Y.cosk_level)
    for m in range(up_to + 1):
        if sorted(map(repr, X.labels(m))) != sorted(map(repr, Y.labels(m))):
            return False
    for m in range(1, up_to + 1):
        for x in range(X.size(m)):
            y = Y.index_of(m, X.label(m, x))
            for i in range(m + 1):
                if X.label(m - 1, int(X.face(m, i)[x])) != Y.label(m - 1, int(Y.face(m, i)[y])):
                    return False
    for m in range(up_to):
        for x in range(X.size(m)):
            y = Y.index_of(m, X.label(m, x))
            for j in range(m + 1):
                if (X.label(m + 1, int(X.degeneracy(m, j)[x]))
                        != Y.label(m + 1, int(Y.degeneracy(m, j)[y]))):
                    return False
    return True
