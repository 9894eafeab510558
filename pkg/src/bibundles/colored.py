"""Colored simplicial sets over the interval and their bigradings.

A colored simplicial set is a simplicial set with a map to the 1-simplex.
The map is stored through the colours of the vertices (0 white, 1 black);
every simplex then has colour sequence 0^(i+1) 1^(j+1) and lies in the
bigraded cell (i, j). Cells with j = -1 form the white end, cells with
i = -1 the black end.
"""

import functools
import logging
from dataclasses import dataclass
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import BadColorSplit, NotOverInterval
from src.kan.conditions import ConditionResult, ConditionSpec, horn_fill_counts, status_from_counts
from src.simplicial.bisimplicial import AugBiSSet, grid_cells
from src.simplicial.constructions import discrete, opposite, subcomplex
from src.simplicial.core import INDEX_DTYPE, SimplicialMap, TruncatedSSet
from src.simplicial.shapes import simplex

logger = logging.getLogger(__name__)

Cell = Tuple[int, int]


@functools.lru_cache(maxsize=1)
def interval() -> TruncatedSSet:
    """The 1-simplex, shared by every colored simplicial set."""
    return simplex(1)


def colour_label(i: int, j: int) -> Tuple[int, ...]:
    return (0,) * (i + 1) + (1,) * (j + 1)


def structure_map(X: TruncatedSSet, vertex_colours: Sequence[int], name: Optional[str] = None) -> SimplicialMap:
    """
    The map X -> Delta^1 determined by colouring the vertices of X.

    Raises:
        NotOverInterval: some simplex has a black vertex before a white one
    """
    colours = np.asarray(vertex_colours, dtype=INDEX_DTYPE)
    if len(colours) != X.size(0) or not np.isin(colours, (0, 1)).all():
        raise NotOverInterval(f"{X.name}: need a colour 0 or 1 for each of the {X.size(0)} vertices")
    I = interval()
    top = max(X.cosk_level, I.cosk_level)
    components = []
    for m in range(top + 1):
        seqs = colours[X.vertices(m)]
        bad = np.flatnonzero((np.diff(seqs, axis=1) < 0).any(axis=1)) if m else np.array([], dtype=int)
        if bad.size:
            raise NotOverInterval(f"{X.name}: simplex {int(bad[0])} at level {m} runs from colour 1 to 0",
                                  witness={'level': m, 'simplex': int(bad[0])})
        # 0^(i+1) 1^(j+1) sits at position m - i in the lexicographic order of Delta^1_m
        components.append(m - (seqs == 0).sum(axis=1) + 1)
    return SimplicialMap(X, I, components, validate=False, name=name or f"{X.name}->Delta^1")


class ColoredSSet:
    """A simplicial set over Delta^1, stored as its total space and vertex colours."""

    def __init__(self, total: TruncatedSSet, vertex_colours: Sequence[int], name: Optional[str] = None):
        self.total = total
        self.vertex_colours = [int(c) for c in vertex_colours]
        self.name = name or total.name
        self.structure = structure_map(total, self.vertex_colours)
        self._cells: Dict[Cell, np.ndarray] = {}
        self._local: Dict[int, np.ndarray] = {}

    def __repr__(self) -> str:
        return f"ColoredSSet({self.name}, c={self.bound})"

    @property
    def bound(self) -> int:
        return self.total.cosk_level

    def colour(self, m: int, x: int) -> Tuple[int, ...]:
        return tuple(self.vertex_colours[int(v)] for v in self.total.vertices(m)[x])

    def cell(self, i: int, j: int) -> np.ndarray:
        """Indices (in canonical order) of the total simplices over 0^(i+1) 1^(j+1)."""
        if (i, j) not in self._cells:
            if i < -1 or j < -1 or i + j + 1 < 0:
                raise BadColorSplit(f"no cell ({i}, {j})")
            m = i + j + 1
            self._cells[(i, j)] = np.flatnonzero(self.structure.component(m) == j + 1).astype(INDEX_DTYPE)
        return self._cells[(i, j)]

    def local(self, m: int) -> np.ndarray:
        """Position of each level-m simplex inside its own cell."""
        if m not in self._local:
            out = np.empty(self.total.size(m), dtype=INDEX_DTYPE)
            for i in range(m, -2, -1):
                members = self.cell(i, m - 1 - i)
                out[members] = np.arange(len(members), dtype=INDEX_DTYPE)
            self._local[m] = out
        return self._local[m]

    def cell_sizes(self, bound: Optional[int] = None) -> Dict[Cell, int]:
        bound = self.bound if bound is None else bound
        return {cell: (1 if cell == (-1, -1) else len(self.cell(*cell))) for cell in grid_cells(bound)}

    def bigraded(self, bound: Optional[int] = None) -> AugBiSSet:
        return to_bigraded(self, bound)


def colored_from_vertex_colours(X: TruncatedSSet, colours: Sequence[int], name: Optional[str] = None) -> ColoredSSet:
    return ColoredSSet(X, colours, name=name)


def to_bigraded(G: ColoredSSet, bound: Optional[int] = None) -> AugBiSSet:
    """
    The augmented bisimplicial set of cells of a colored simplicial set.

    Horizontal maps are the total d_k, s_k with k <= i; vertical ones are
    d_{i+1+k}, s_{i+1+k}.
    """
    bound = G.bound if bound is None else bound
    T = G.total
    sizes, hfaces, vfaces, hdegens, vdegens, labels = {}, {}, {}, {}, {}, {}
    for (i, j) in grid_cells(bound):
        m = i + j + 1
        if m < 0:
            sizes[(i, j)] = 1
            continue
        idx = G.cell(i, j)
        sizes[(i, j)] = len(idx)
        labels[(i, j)] = [T.label(m, int(x)) for x in idx]

        def move(k: int) -> np.ndarray:
            if m == 0:
                return np.zeros(len(idx), dtype=INDEX_DTYPE)
            return G.local(m - 1)[T.face(m, k)[idx]]

        if i >= 0:
            hfaces[(i, j)] = np.stack([move(k) for k in range(i + 1)]).reshape(i + 1, len(idx))
        if j >= 0:
            vfaces[(i, j)] = np.stack([move(i + 1 + k) for k in range(j + 1)]).reshape(j + 1, len(idx))
        if m + 1 <= bound:
            up = G.local(m + 1)
            if i >= 0:
                hdegens[(i, j)] = np.stack([up[T.degeneracy(m, k)[idx]]
                                            for k in range(i + 1)]).reshape(i + 1, len(idx))
            if j >= 0:
                vdegens[(i, j)] = np.stack([up[T.degeneracy(m, i + 1 + k)[idx]]
                                            for k in range(j + 1)]).reshape(j + 1, len(idx))
    return AugBiSSet(bound, sizes, hfaces, vfaces, hdegens, vdegens, labels=labels, name=G.name)


def from_bigraded(Z: AugBiSSet, name: Optional[str] = None, validate: bool = True) -> ColoredSSet:
    """
    Reassemble a colored simplicial set from an augmented bisimplicial set.

    Raises:
        BadAugmentation: Z is not an augmented bisimplicial set
    """
    if validate:
        Z.validate()
    T, cell_of = Z.total(name=name)
    colours = [0 if cell == (0, -1) else 1 for cell in cell_of[0]]
    return ColoredSSet(T, colours, name=name or T.name)


@dataclass
class Ends:
    """The white and black ends of a colored simplicial set with their inclusions."""

    white: TruncatedSSet
    white_inclusion: SimplicialMap
    black: TruncatedSSet
    black_inclusion: SimplicialMap


def ends(G: ColoredSSet) -> Ends:
    c = G.bound
    white, iw = subcomplex(G.total, {m: G.cell(m, -1) for m in range(c + 1)}, name=f"{G.name}|0")
    black, ib = subcomplex(G.total, {m: G.cell(-1, m) for m in range(c + 1)}, name=f"{G.name}|1")
    return Ends(white, iw, black, ib)


def check_colour_split(m: int, k: int, i: int, j: int) -> None:
    if m < 1 or not 0 <= k <= m or i < 0 or j < 0 or i + j != m + 1:
        raise BadColorSplit(f"Kan({m},{k})[{i},{j}] needs m >= 1, 0 <= k <= m, i, j >= 0 and i + j = m + 1")


def colored_check(G: ColoredSSet, m: int, k: int, i: int, j: int, unique: bool = False) -> ConditionResult:
    """
    Kan(m, k)[i, j]: fill horns of m-simplices with i white and j black vertices.

    Args:
        G: Colored simplicial set
        m: Simplex dimension
        k: Missing face
        i: Number of white vertices
        j: Number of black vertices (i + j = m + 1)
        unique: Report against the unique version of the condition

    Raises:
        BadColorSplit: the colour split does not describe an m-simplex
    """
    check_colour_split(m, k, i, j)
    colour = interval().index_of(m, (0,) * i + (1,) * j)
    positions = [t for t in range(m + 1) if t != k]
    counts = horn_fill_counts(G.total, m, positions, p=G.structure, colour=colour)
    status, bad = status_from_counts(counts)
    spec = ConditionSpec("KanUnique" if unique else "Kan", m, k)
    witness = None
    if bad is not None:
        witness = {'horn': list(bad[0]), 'fillers': counts[bad], 'colours': [i, j]}
    hist: Dict[int, int] = {}
    for n in counts.values():
        hist[n] = hist.get(n, 0) + 1
    logger.debug(f"{G.name}: Kan({m},{k})[{i},{j}] -> {status}")
    return ConditionResult(spec=spec, status=status, histogram=dict(sorted(hist.items())), witness=witness)


def opposite_bibundle(G: ColoredSSet, name: Optional[str] = None) -> ColoredSSet:
    """
    The bibundle read from the black end to the white end.

    Vertex order is reversed and colours swapped, so Kan(m, k)[i, j] of the
    result is Kan(m, m-k)[j, i] of G. The ends become the opposites of the
    original ends, which for groupoid nerves are isomorphic to them.
    """
    return ColoredSSet(opposite(G.total), [1 - c for c in G.vertex_colours], name=name or f"{G.name}^-")


@dataclass
class ReducedLine:
    """A reduced row or column with its maps to the end and to the discrete base."""

    space: TruncatedSSet
    to_end: SimplicialMap
    to_base: SimplicialMap


def row_or_column(G: ColoredSSet, side: str, l: int) -> ReducedLine:
    """
    The reduced row l (levels G_{l,j}) or column l (levels G_{i,l}).

    A row maps to the black end by forgetting its white vertices and to the
    discrete set G_{l,-1} by forgetting its black vertices; columns are the
    mirror image.

    Args:
        G: Colored simplicial set
        side: 'row' or 'column'
        l: Fixed index, at least -1

    Raises:
        BadColorSplit: unknown side or l below -1
    """
    if side not in ('row', 'column') or l < -1:
        raise BadColorSplit(f"row_or_column needs side row or column and l >= -1, got {side!r}, {l}")
    top = G.bound
    T = G.total
    row = side == 'row'

    def cell(a: int) -> Cell:
        return (l, a) if row else (a, l)

    sizes = [len(G.cell(*cell(a))) for a in range(top + 1)]
    faces, degens, labels = {}, {}, {}
    for a in range(top + 1):
        m = l + a + 1
        idx = G.cell(*cell(a))
        labels[a] = [T.label(m, int(x)) for x in idx]
        shift = l + 1 if row else 0
        if a >= 1:
            faces[a] = np.stack([G.local(m - 1)[T.face(m, shift + k)[idx]] for k in range(a + 1)])
        if a < top:
            degens[a] = np.stack([G.local(m + 1)[T.degeneracy(m, shift + k)[idx]] for k in range(a + 1)])
    what = "R" if row else "C"
    space = TruncatedSSet(sizes, faces, degens, top, labels=labels, name=f"{what}'_{l}({G.name})")

    e = ends(G)
    end = e.black if row else e.white
    base_cell = (-1, -1) if l == -1 else ((l, -1) if row else (-1, l))
    base_points = ["*"] if l == -1 else [T.label(l, int(x)) for x in G.cell(*base_cell)]
    base = discrete(base_points, name=f"sk0 {G.name}_{base_cell}")
    to_end, to_base = [], []
    for a in range(top + 1):
        m = l + a + 1
        idx = G.cell(*cell(a))
        forget_end, forget_base = idx, idx
        level = m
        for _ in range(l + 1):
            # rows drop white vertices from the front, columns black ones from the back
            forget_end = T.face(level, 0 if row else level)[forget_end]
            level -= 1
        to_end.append(G.local(a)[forget_end])
        if l == -1:
            to_base.append(np.zeros(len(idx), dtype=INDEX_DTYPE))
            continue
        level = m
        for _ in range(a + 1):
            forget_base = T.face(level, level if row else 0)[forget_base]
            level -= 1
        to_base.append(G.local(l)[forget_base])
    return ReducedLine(
        space,
        SimplicialMap(space, end, to_end, name=f"{space.name}->{end.name}"),
        SimplicialMap(space, base, to_base, name=f"{space.name}->{base.name}"),
    )


def higher_cograph(f: SimplicialMap, bound: Optional[int] = None, name: Optional[str] = None) -> ColoredSSet:
    """
    The cograph of f: X -> Y, with cells G_{i,j} = X_i x_{Y_i} Y_{i+j+1}.

    Y_{i+j+1} maps to Y_i by restricting to the first i+1 vertices.

    Args:
        f: Map of simplicial sets (normally between higher groupoid nerves)
        bound: Total degree stored; defaults to one above the larger stored level

    Returns:
        ColoredSSet whose white end is X and black end is Y
    """
    X, Y = f.source, f.target
    bound = max(X.cosk_level, Y.cosk_level) + 1 if bound is None else bound
    pairs: Dict[Cell, List[Tuple[int, int]]] = {}
    position: Dict[Cell, Dict[Tuple[int, int], int]] = {}
    for (i, j) in grid_cells(bound):
        m = i + j + 1
        if m < 0:
            pairs[(i, j)] = [(0, 0)]
        elif i < 0:
            pairs[(i, j)] = [(0, y) for y in range(Y.size(m))]
        else:
            front = np.arange(Y.size(m), dtype=INDEX_DTYPE)
            level = m
            while level > i:
                front = Y.face(level, level)[front]
                level -= 1
            over: Dict[int, List[int]] = {}
            for y, b in enumerate(front):
                over.setdefault(int(b), []).append(y)
            pairs[(i, j)] = [(x, y) for x in range(X.size(i)) for y in over.get(int(f(i, x)), [])]
        position[(i, j)] = {p: t for t, p in enumerate(pairs[(i, j)])}

    def table(cell: Cell, target: Cell, rule) -> np.ndarray:
        return np.array([position[target][rule(x, y)] for x, y in pairs[cell]], dtype=INDEX_DTYPE)

    sizes, hfaces, vfaces, hdegens, vdegens, labels = {}, {}, {}, {}, {}, {}
    for (i, j) in grid_cells(bound):
        m = i + j + 1
        sizes[(i, j)] = len(pairs[(i, j)])
        if m < 0:
            continue
        labels[(i, j)] = [(X.label(i, x) if i >= 0 else None, Y.label(m, y)) for x, y in pairs[(i, j)]]
        n = sizes[(i, j)]
        if i >= 0:
            rows = []
            for k in range(i + 1):
                if m == 0:
                    rows.append(np.zeros(n, dtype=INDEX_DTYPE))
                elif i == 0:
                    rows.append(table((i, j), (i - 1, j), lambda x, y: (0, int(Y.face(m, 0)[y]))))
                else:
                    rows.append(table((i, j), (i - 1, j),
                                      lambda x, y, k=k: (int(X.face(i, k)[x]), int(Y.face(m, k)[y]))))
            hfaces[(i, j)] = np.stack(rows).reshape(i + 1, n)
        if j >= 0:
            rows = []
            for k in range(j + 1):
                if m == 0:
                    rows.append(np.zeros(n, dtype=INDEX_DTYPE))
                else:
                    rows.append(table((i, j), (i, j - 1),
                                      lambda x, y, k=k: (x, int(Y.face(m, i + 1 + k)[y]))))
            vfaces[(i, j)] = np.stack(rows).reshape(j + 1, n)
        if m + 1 <= bound:
            if i >= 0:
                hdegens[(i, j)] = np.stack([
                    table((i, j), (i + 1, j),
                          lambda x, y, k=k: (int(X.degeneracy(i, k)[x]), int(Y.degeneracy(m, k)[y])))
                    for k in range(i + 1)]).reshape(i + 1, n)
            if j >= 0:
                vdegens[(i, j)] = np.stack([
                    table((i, j), (i, j + 1), lambda x, y, k=k: (x, int(Y.degeneracy(m, i + 1 + k)[y])))
                    for k in range(j + 1)]).reshape(j + 1, n)
    Z = AugBiSSet(bound, sizes, hfaces, vfaces, hdegens, vdegens, labels=labels,
                  name=name or f"cograph({f.name})")
    G = from_bigraded(Z, name=Z.name)
    logger.info(f"{G.name}: cell sizes {G.cell_sizes(min(bound, 2))}")
    return G


def cell_labels(G: ColoredSSet, i: int, j: int) -> List[Hashable]:
    return [G.total.label(i + j + 1, int(x)) for x in G.cell(i, j)]
