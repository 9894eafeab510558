"""Hom-set and lift enumeration over finite simplicial sets.

Maps S -> X are enumerated as the limit over the nondegenerate simplices of S:
simplices are assigned in (level, index) order, each candidate is looked up
from the images of its faces, and degenerate simplices follow from the
Eilenberg-Zilber decomposition. Only levels up to the target's stored level
are searched; everything above is forced by coskeletality.
"""

import logging
from typing import Dict, Iterator, List, Optional, Set, Tuple

import numpy as np

from src.errors import BudgetExceeded, NonCommutingSquare, NonInclusion
from src.simplicial.core import INDEX_DTYPE, SimplicialMap, TruncatedSSet

logger = logging.getLogger(__name__)


class HomSearch:
    """Backtracking enumeration of simplicial maps S -> X with optional constraints."""

    def __init__(
        self,
        source: TruncatedSSet,
        target: TruncatedSSet,
        fixed: Optional[Dict[Tuple[int, int], int]] = None,
        over: Optional[Tuple[SimplicialMap, SimplicialMap]] = None,
        injective: bool = False,
        search_level: Optional[int] = None,
        budget: Optional[int] = None,
    ):
        """
        Args:
            source: Domain S
            target: Codomain X
            fixed: (level, simplex of S) -> prescribed image, on nondegenerate simplices
            over: (p: X -> Y, g: S -> Y); only maps f with p.f = g are produced
            injective: Send nondegenerate simplices injectively to nondegenerate ones
            search_level: Highest level searched; defaults to what coskeletality requires
            budget: Optional cap on candidate expansions
        """
        self.source = source
        self.target = target
        self.fixed = dict(fixed or {})
        self.over = over
        self.injective = injective
        self.budget = budget
        self.expansions = 0

        top = target.cosk_level
        if over is not None:
            top = max(top, over[0].target.cosk_level)
        if search_level is None:
            search_level = top if source.dimension is None else min(source.dimension, top)
        self.level = search_level
        self.order: List[Tuple[int, int]] = [
            (m, x) for m in range(search_level + 1) for x in source.nondegenerate(m)
        ]
        self._assigned: Dict[Tuple[int, int], int] = {}
        self._arrays: List[np.ndarray] = []
        self._used: Dict[int, Set[int]] = {}

    def _level_array(self, k: int) -> Optional[np.ndarray]:
        S, X = self.source, self.target
        degenerate_by = S.degenerate_by(k)
        out = np.empty(S.size(k), dtype=INDEX_DTYPE)
        for x in np.flatnonzero(degenerate_by < 0):
            out[x] = self._assigned[(k, int(x))]
        if k > 0:
            lower = self._arrays[k - 1]
            for j in range(k):
                hit = degenerate_by == j
                if hit.any():
                    out[hit] = X.degeneracy(k - 1, j)[lower[S.face(k, j)[hit]]]
        return out

    def _ensure_arrays(self, m: int) -> None:
        del self._arrays[m:]
        while len(self._arrays) < m:
            self._arrays.append(self._level_array(len(self._arrays)))

    def _candidates(self, m: int, x: int) -> List[int]:
        S, X = self.source, self.target
        if m == 0:
            pool: List[int] = list(range(X.size(0)))
        else:
            lower = self._arrays[m - 1]
            pool = X.lookup(m, [lower[S.face(m, i)[x]] for i in range(m + 1)])
        if (m, x) in self.fixed:
            want = self.fixed[(m, x)]
            pool = [want] if want in pool else []
        if self.over is not None:
            p, g = self.over
            image = g(m, x)
            pool = [y for y in pool if p(m, y) == image]
        if self.injective:
            used = self._used.setdefault(m, set())
            pool = [y for y in pool if y not in used and not X.is_degenerate(m, y)]
        return pool

    def maps(self) -> Iterator[SimplicialMap]:
        """Yield every map in canonical (lexicographic) order."""
        yield from self._search()

    def _search(self) -> Iterator[SimplicialMap]:
        # one frame per assigned step: [step, remaining candidates, current choice]
        frames: List[list] = []
        t: Optional[int] = 0
        while t is not None:
            if t == len(self.order):
                self._ensure_arrays(self.level + 1)
                yield SimplicialMap(self.source, self.target, [a.copy() for a in self._arrays],
                                    validate=False, name=f"{self.source.name}->{self.target.name}")
            else:
                m, x = self.order[t]
                self._ensure_arrays(m)
                frames.append([t, iter(self._candidates(m, x)), None])
            t = self._advance(frames)

    def _advance(self, frames: List[list]) -> Optional[int]:
        """Move the deepest frame to its next candidate, popping exhausted frames."""
        while frames:
            frame = frames[-1]
            t, pool, previous = frame
            m, x = self.order[t]
            if previous is not None:
                if self.injective:
                    self._used[m].discard(previous)
                del self._assigned[(m, x)]
                del self._arrays[m:]
                frame[2] = None
            y = next(pool, None)
            if y is None:
                frames.pop()
                continue
            self.expansions += 1
            if self.budget is not None and self.expansions > self.budget:
                raise BudgetExceeded(partial={'step': t, 'level': m, 'simplex': x})
            self._assigned[(m, x)] = y
            if self.injective:
                self._used[m].add(y)
            frame[2] = y
            return t + 1
        return None

    def first(self) -> Optional[SimplicialMap]:
        for f in self.maps():
            return f
        return None

    def count(self) -> int:
        return sum(1 for _ in self.maps())


def hom_set(S: TruncatedSSet, X: TruncatedSSet) -> List[SimplicialMap]:
    """
    All simplicial maps S -> X in canonical order.

    Args:
        S: Finite source
        X: Target

    Returns:
        List of SimplicialMap (possibly empty)
    """
    maps = list(HomSearch(S, X).maps())
    logger.debug(f"hom({S.name}, {X.name}) has {len(maps)} elements")
    return maps


def count_maps(S: TruncatedSSet, X: TruncatedSSet) -> int:
    return HomSearch(S, X).count()


def _check_inclusion(i: SimplicialMap) -> None:
    top = max(i.source.cosk_level, i.target.cosk_level)
    for m in range(top + 1):
        if not i.is_injective_at(m):
            raise NonInclusion(f"{i.name} is not injective at level {m}")


def _check_square(i: SimplicialMap, f: SimplicialMap, g: SimplicialMap, p: SimplicialMap) -> None:
    top = max(i.source.cosk_level, f.target.cosk_level, g.target.cosk_level)
    for m in range(top + 1):
        left = p.component(m)[f.component(m)]
        right = g.component(m)[i.component(m)]
        bad = np.flatnonzero(left != right)
        if bad.size:
            raise NonCommutingSquare(
                f"p.f and g.i differ at level {m} on simplex {int(bad[0])}",
                witness={'level': m, 'simplex': int(bad[0])},
            )


def lift_search(
    i: SimplicialMap,
    f: SimplicialMap,
    g: Optional[SimplicialMap] = None,
    p: Optional[SimplicialMap] = None,
) -> HomSearch:
    """Set up the search for diagonal fillers B -> X of a (relative) lifting square."""
    if f.source is not i.source:
        raise NonCommutingSquare("f and i must share their source")
    _check_inclusion(i)
    if (g is None) != (p is None):
        raise NonCommutingSquare("relative lifting needs both g: B -> Y and p: X -> Y")
    over = None
    if g is not None:
        _check_square(i, f, g, p)
        over = (p, g)
    A = i.source
    fixed: Dict[Tuple[int, int], int] = {}
    top = f.target.cosk_level if over is None else max(f.target.cosk_level, p.target.cosk_level)
    if A.dimension is not None:
        top = min(top, A.dimension)
    for m in range(top + 1):
        for a in A.nondegenerate(m):
            fixed[(m, i(m, a))] = f(m, a)
    return HomSearch(i.target, f.target, fixed=fixed, over=over)


def enumerate_lifts(
    i: SimplicialMap,
    f: SimplicialMap,
    g: Optional[SimplicialMap] = None,
    p: Optional[SimplicialMap] = None,
) -> List[SimplicialMap]:
    """
    All diagonal fillers of the square (i: A -> B, f: A -> X) optionally over (g: B -> Y, p: X -> Y).

    Args:
        i: Levelwise injective map A -> B
        f: Map A -> X
        g: Optional map B -> Y
        p: Optional map X -> Y with p.f = g.i

    Returns:
        Fillers B -> X in canonical order

    Raises:
        NonInclusion: i is not injective
        NonCommutingSquare: p.f != g.i
    """
    return list(lift_search(i, f, g, p).maps())
