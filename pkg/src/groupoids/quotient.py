"""Orbit quotients by union-find, with a sparse-graph path when scipy is present."""

from collections import deque
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

try:
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components
    SCIPY_AVAILABLE = True
except ImportError:
    SCIPY_AVAILABLE = False


class UnionFind:
    def __init__(self, items: Iterable[Hashable]):
        self.parent = {x: x for x in items}
        self.rank = {x: 0 for x in self.parent}
        self.size = {x: 1 for x in self.parent}

    def find(self, x: Hashable) -> Hashable:
        y = self.parent[x]
        if self.parent[y] != y:
            y = self.parent[x] = self.find(y)
        return y

    def union(self, x: Hashable, y: Hashable) -> None:
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x
        self.size[x] += self.size[y]
        del self.rank[y]

    def reps(self) -> set:
        return set(self.rank)

    def __len__(self) -> int:
        return len(self.rank)


def orbit_labels(n: int, edges: Sequence[Tuple[int, int]], use_scipy: bool = True) -> np.ndarray:
    """
    Orbit of each point 0..n-1 under the equivalence generated by edges.

    Orbits are numbered by their least element, so the numbering follows the
    canonical order of the points.

    Returns:
        Array of orbit numbers, one per point
    """
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    if use_scipy and SCIPY_AVAILABLE and len(edges):
        rows = np.array([a for a, _ in edges])
        cols = np.array([b for _, b in edges])
        graph = coo_matrix((np.ones(len(edges)), (rows, cols)), shape=(n, n))
        _, raw = connected_components(graph, directed=True, connection='weak')
    else:
        uf = UnionFind(range(n))
        for a, b in edges:
            uf.union(a, b)
        raw = np.array([uf.find(x) for x in range(n)])
    first: Dict[int, int] = {}
    out = np.empty(n, dtype=np.int64)
    for x in range(n):
        out[x] = first.setdefault(int(raw[x]), len(first))
    return out


def find_orbits(
    space: Sequence[Hashable],
    moves: Iterable[Tuple[Hashable, Hashable]],
) -> Tuple[List[Hashable], Dict[Hashable, int]]:
    """
    Quotient a finite set by the equivalence generated by pairs.

    Args:
        space: Points in canonical order
        moves: Pairs of points to identify

    Returns:
        (representative of each orbit, the least point in canonical order; point -> orbit number)
    """
    position = {x: t for t, x in enumerate(space)}
    labels = orbit_labels(len(space), [(position[a], position[b]) for a, b in moves])
    reps: List[Hashable] = []
    orbit_of: Dict[Hashable, int] = {}
    for x, o in zip(space, labels):
        if o == len(reps):
            reps.append(x)
        orbit_of[x] = int(o)
    return reps, orbit_of


def quotient_by_action(
    space: Sequence[Hashable],
    acts: Callable[[Hashable], Iterable[Hashable]],
) -> Tuple[List[Hashable], Dict[Hashable, int]]:
    """Orbits of a partial action given as the set of points each point moves to."""
    return find_orbits(space, ((x, y) for x in space for y in acts(x)))


def moves_by_orbit(
    moves: Iterable[Tuple[Hashable, Hashable]],
    orbit_of: Dict[Hashable, int],
) -> Dict[int, List[Tuple[Hashable, Hashable]]]:
    """The generating moves of each orbit, in the order they were given."""
    out: Dict[int, List[Tuple[Hashable, Hashable]]] = {}
    for a, b in moves:
        out.setdefault(orbit_of[a], []).append((a, b))
    return out


def route(
    start: Hashable,
    end: Hashable,
    moves: Sequence[Tuple[Hashable, Hashable]],
) -> Optional[List[Tuple[Hashable, Hashable]]]:
    """
    A shortest chain of moves from start to end, each used in either direction.

    Returns:
        List of (from, to) steps, empty when start == end, None when the two
        points lie in different orbits
    """
    neighbours: Dict[Hashable, List[Hashable]] = {}
    for a, b in moves:
        neighbours.setdefault(a, []).append(b)
        neighbours.setdefault(b, []).append(a)
    previous: Dict[Hashable, Hashable] = {start: start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        if x == end:
            break
        for y in neighbours.get(x, []):
            if y not in previous:
                previous[y] = x
                queue.append(y)
    if end not in previous:
        return None
    steps = []
    x = end
    while x != start:
        steps.append((previous[x], x))
        x = previous[x]
    return steps[::-1]
