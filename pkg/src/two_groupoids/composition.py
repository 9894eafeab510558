"""
Composition of right principal bibundles between 2-groupoids.

For Gamma: X-Y and Xi: Y-Z, a simplex of the composite with i+1 white and
j+1 black vertices is a configuration over a frame: whites a_0..a_i, one gray
g_pq for each pair of a white and a black, and blacks b_0..b_j. The simplices
spanned by whites and grays are mapped into Gamma, those spanned by grays and
blacks into Xi, and the two halves agree on the grays through the
identification of Gamma's black end with Xi's white end. In degrees one and
two configurations are identified along bigons acting on their inner edges;
in degree three a simplex is a boundary realised by some configuration, and
the composite is 3-coskeletal above that.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import pandas as pd

from src.bibundles.colored import ColoredSSet, ends, structure_map
from src.bibundles.report import BibundleReport, classify_bibundle
from src.config import config_value
from src.errors import InvalidMap, NotA2Groupoid, NotComposable, NotRightPrincipal, QuotientDegenerate
from src.groupoids.quotient import find_orbits, moves_by_orbit, route
from src.simplicial.core import SimplicialMap, TruncatedSSet, make_truncated
from src.simplicial.hom import HomSearch
from src.simplicial.iso import find_isomorphism
from src.simplicial.shapes import simplex_subcomplex
from src.two_groupoids.bigons import move_triangle

logger = logging.getLogger(__name__)

Cell = Tuple[int, int]
Key = Tuple[int, ...]

# Mixed cells by total degree, up to the coskeletal level of the composite
MIXED: Dict[int, List[Cell]] = {1: [(0, 0)], 2: [(1, 0), (0, 1)], 3: [(2, 0), (1, 1), (0, 2)]}
TOP = 3

VARIANTS = ("TL", "TR", "BL", "BR")


def level_cells(m: int) -> List[Cell]:
    """Cells of total degree m, white end first."""
    return [(m - b, b - 1) for b in range(m + 2)]


class Frame:
    """
    Vertex scheme of a composite simplex with i+1 white and j+1 black vertices.

    Vertices are numbered whites a_0..a_i, then grays g_pq in lexicographic
    order, then blacks b_0..b_j. Whites and grays span a simplex of the first
    bibundle when no gray row exceeds a white index. Grays and blacks span a
    simplex of the second when no gray column is below a black index; with
    ``high`` no gray column may exceed a black index instead.
    """

    def __init__(self, i: int, j: int, high: bool = False):
        self.i, self.j, self.high = i, j, high
        kinds: List[Tuple] = [('a', p) for p in range(i + 1)]
        kinds += [('g', p, q) for p in range(i + 1) for q in range(j + 1)]
        kinds += [('b', q) for q in range(j + 1)]
        self.kinds = kinds
        self.position = {kind: v for v, kind in enumerate(kinds)}
        self.gamma_max = self._maximal(self._first_ok, ('a', 'g'))
        self.xi_max = self._maximal(self._second_ok, ('g', 'b'))

    def __repr__(self) -> str:
        return f"Frame({self.i}, {self.j}{', high' if self.high else ''})"

    @property
    def cell(self) -> Cell:
        return (self.i, self.j)

    @property
    def degree(self) -> int:
        return self.i + self.j + 1

    @property
    def maximal(self) -> List[Tuple[int, ...]]:
        return self.gamma_max + self.xi_max

    def _parts(self, S: Sequence[int], letter: str, slot: int) -> List[int]:
        return [self.kinds[v][slot] for v in S if self.kinds[v][0] == letter]

    def _first_ok(self, S: Sequence[int]) -> bool:
        whites, rows = self._parts(S, 'a', 1), self._parts(S, 'g', 1)
        return not whites or not rows or max(rows) <= min(whites)

    def _second_ok(self, S: Sequence[int]) -> bool:
        blacks, columns = self._parts(S, 'b', 1), self._parts(S, 'g', 2)
        if not blacks or not columns:
            return True
        return max(columns) <= min(blacks) if self.high else min(columns) >= max(blacks)

    def _maximal(self, ok, letters: Tuple[str, str]) -> List[Tuple[int, ...]]:
        pool = [v for v, kind in enumerate(self.kinds) if kind[0] in letters]
        valid = [S for r in range(1, len(pool) + 1) for S in itertools.combinations(pool, r) if ok(S)]
        sets = [frozenset(S) for S in valid]
        return [S for S, F in zip(valid, sets) if not any(F < other for other in sets)]

    def is_gray(self, seq: Sequence[int]) -> bool:
        return all(self.kinds[v][0] == 'g' for v in seq)

    def colour(self, v: int, half: str) -> int:
        """Vertex colour inside the first (white/gray) or second (gray/black) half."""
        dark = ('g', 'b') if half == 'first' else ('b',)
        return int(self.kinds[v][0] in dark)

    def face(self, l: int) -> Tuple["Frame", List[int]]:
        """The frame of the l-th face and the positions of its vertices in this frame."""
        if l <= self.i:
            def drop(kind: Tuple) -> bool:
                return kind == ('a', l) or (kind[0] == 'g' and kind[1] == l)
            sub = Frame(self.i - 1, self.j, self.high)
        else:
            q = l - self.i - 1

            def drop(kind: Tuple) -> bool:
                return kind == ('b', q) or (kind[0] == 'g' and kind[2] == q)
            sub = Frame(self.i, self.j - 1, self.high)
        return sub, [v for v, kind in enumerate(self.kinds) if not drop(kind)]

    def collapse(self, target: "Frame", white: Sequence[int], black: Sequence[int]) -> List[int]:
        """Vertex map onto a smaller frame induced by monotone maps of the whites and the blacks."""
        out = []
        for kind in self.kinds:
            if kind[0] == 'a':
                out.append(target.position[('a', white[kind[1]])])
            elif kind[0] == 'g':
                out.append(target.position[('g', white[kind[1]], black[kind[2]])])
            else:
                out.append(target.position[('b', black[kind[1]])])
        return out

    def snake_edges(self) -> List[Tuple[int, int]]:
        """Inner edges a bigon can act on: gray-gray edges and off-diagonal mixed edges."""
        edges = []
        for u, v in itertools.combinations(range(len(self.kinds)), 2):
            a, b = self.kinds[u], self.kinds[v]
            if a[0] == 'g' and b[0] == 'g':
                edges.append((u, v))
            elif a[0] == 'a' and b[0] == 'g' and a[1] != b[1]:
                edges.append((u, v))
            elif a[0] == 'g' and b[0] == 'b' and a[2] != b[1]:
                edges.append((u, v))
        return [e for e in edges if any(set(e) <= set(S) for S in self.maximal)]


def _positional(Y1: TruncatedSSet, Y2: TruncatedSSet) -> Optional[SimplicialMap]:
    """Identity on positions up to the lower stored level, extended by boundaries above it."""
    low = min(Y1.cosk_level, Y2.cosk_level)
    top = max(Y1.cosk_level, Y2.cosk_level)
    if Y1.sizes(top) != Y2.sizes(top):
        return None
    components: List[List[int]] = [list(range(Y1.size(m))) for m in range(low + 1)]
    for m in range(low + 1, top + 1):
        index = Y2.boundary_index(m)
        row = []
        for x in range(Y1.size(m)):
            hits = index.get(tuple(components[m - 1][int(Y1.face(m, i)[x])] for i in range(m + 1)))
            if not hits:
                return None
            row.append(hits[0])
        components.append(row)
    try:
        f = SimplicialMap(Y1, Y2, components, name=f"id:{Y1.name}->{Y2.name}")
    except InvalidMap:
        logger.debug(f"{Y1.name} and {Y2.name} do not match position by position")
        return None
    return f if f.is_bijective(top) else None


def end_identification(first: ColoredSSet, second: ColoredSSet, budget: Optional[int] = None) -> SimplicialMap:
    """
    Isomorphism from the black end of ``first`` to the white end of ``second``.

    The two ends are matched position by position when that is simplicial,
    which is the case whenever both were built from the same 2-groupoid;
    otherwise an isomorphism is searched for.

    Raises:
        NotComposable: the two ends are not isomorphic
    """
    Y1, Y2 = ends(first).black, ends(second).white
    top = max(Y1.cosk_level, Y2.cosk_level)
    positional = _positional(Y1, Y2)
    if positional is not None:
        return positional
    iso = find_isomorphism(Y1, Y2, budget=budget)
    if iso is None:
        raise NotComposable(f"the black end of {first.name} is not the white end of {second.name}",
                            witness={'sizes': [Y1.sizes(top), Y2.sizes(top)]})
    return iso


class Gluing:
    """Two bibundles with the identification of the middle 2-groupoid, and their bigons."""

    def __init__(self, first: ColoredSSet, second: ColoredSSet, identification: SimplicialMap):
        self.first = first
        self.second = second
        self.identification = identification
        self._bigons: Dict[Tuple[str, str], Dict[int, List[int]]] = {}

    def transfer(self, m: int, y: int) -> int:
        """Total index in ``second`` of a black simplex of ``first``."""
        local = int(self.first.local(m)[y])
        return int(self.second.cell(m, -1)[self.identification(m, local)])

    def total(self, half: str) -> TruncatedSSet:
        return self.first.total if half == 'first' else self.second.total

    def bigons(self, half: str, side: str) -> Dict[int, List[int]]:
        """Bigons by the edge they start at: d_0 degenerate and d_2 the edge, or d_2 and d_1 for ``left``."""
        if (half, side) not in self._bigons:
            T = self.total(half)
            flat, old = (0, 2) if side == "right" else (2, 1)
            degenerate = {int(e) for e in T.degeneracy(0, 0)}
            out: Dict[int, List[int]] = {}
            for x in range(T.size(2)):
                if int(T.face(2, flat)[x]) in degenerate:
                    out.setdefault(int(T.face(2, old)[x]), []).append(x)
            self._bigons[(half, side)] = out
        return self._bigons[(half, side)]


@dataclass
class Configuration:
    key: Key
    first: SimplicialMap
    second: SimplicialMap


@dataclass
class Orbits:
    """Quotient of a configuration space with the moves that generate it."""

    reps: List[Key]
    orbit_of: Dict[Key, int]
    moves: List[Tuple[Key, Key]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.reps)

    def moves_of(self, orbit: int) -> List[Tuple[Key, Key]]:
        """Bigon moves generating one orbit."""
        return moves_by_orbit(self.moves, self.orbit_of).get(orbit, [])

    def route_to(self, key: Key) -> Optional[List[Tuple[Key, Key]]]:
        """Moves leading from the representative of key's orbit to key."""
        return route(self.reps[self.orbit_of[key]], key, self.moves_of(self.orbit_of[key]))


class ConfigurationSpace:
    """Every configuration over one frame, keyed by the images of the maximal simplices."""

    def __init__(self, gluing: Gluing, frame: Frame, budget: Optional[int] = None):
        self.gluing = gluing
        self.frame = frame
        n = len(frame.kinds) - 1
        self.first_complex = simplex_subcomplex(n, frame.gamma_max, name=f"K1{frame}")
        self.second_complex = simplex_subcomplex(n, frame.xi_max, name=f"K2{frame}")
        self.configurations = list(self._enumerate(budget))
        self.by_key = {c.key: c for c in self.configurations}
        self.keys = [c.key for c in self.configurations]
        logger.debug(f"{frame}: {len(self.keys)} configurations")

    def __len__(self) -> int:
        return len(self.keys)

    def _enumerate(self, budget: Optional[int]):
        frame, glue = self.frame, self.gluing
        K1, K2 = self.first_complex, self.second_complex
        over1 = (glue.first.structure,
                 structure_map(K1, [frame.colour(K1.label(0, t)[0], 'first') for t in range(K1.size(0))]))
        over2 = (glue.second.structure,
                 structure_map(K2, [frame.colour(K2.label(0, t)[0], 'second') for t in range(K2.size(0))]))
        for f1 in HomSearch(K1, glue.first.total, over=over1, budget=budget).maps():
            fixed = {}
            for m in range(K2.dimension + 1):
                for x in K2.nondegenerate(m):
                    seq = K2.label(m, x)
                    if frame.is_gray(seq):
                        fixed[(m, x)] = glue.transfer(m, f1(m, K1.index_of(m, seq)))
            for f2 in HomSearch(K2, glue.second.total, fixed=fixed, over=over2, budget=budget).maps():
                key = self._evaluate(f1, f2, frame.gamma_max, frame.xi_max)
                yield Configuration(key, f1, f2)

    def _evaluate(self, f1: SimplicialMap, f2: SimplicialMap,
                  first_seqs: Sequence[Sequence[int]], second_seqs: Sequence[Sequence[int]]) -> Key:
        out = []
        for seqs, K, f in ((first_seqs, self.first_complex, f1), (second_seqs, self.second_complex, f2)):
            for seq in seqs:
                m = len(seq) - 1
                out.append(f(m, K.index_of(m, tuple(int(v) for v in seq))))
        return tuple(out)

    def values(self, config: Configuration, first_seqs: Sequence[Sequence[int]],
               second_seqs: Sequence[Sequence[int]]) -> Key:
        """Images of vertex sequences of this frame, each read in the half it lies in."""
        return self._evaluate(config.first, config.second, first_seqs, second_seqs)

    def restrict(self, config: Configuration, sub: Frame, positions: Sequence[int]) -> Key:
        """Key of the configuration read on a subframe or a collapsed frame."""
        return self.values(config,
                           [[positions[v] for v in S] for S in sub.gamma_max],
                           [[positions[v] for v in S] for S in sub.xi_max])

    def _half(self, pos: int) -> str:
        return 'first' if pos < len(self.frame.gamma_max) else 'second'

    def orbits(self, gray_side: str = "right") -> Orbits:
        """
        Orbits under bigons acting on inner edges.

        A gray edge is shared by a triangle of each half; its bigons are taken
        on the ``gray_side`` in the first bibundle and carried over. Mixed
        edges are acted on by right bigons of the half they lie in.

        Raises:
            NotA2Groupoid: a moved triangle is not unique
            QuotientDegenerate: a move leaves the configuration space
        """
        if self.frame.degree != 2:
            return Orbits(list(self.keys), {k: t for t, k in enumerate(self.keys)})
        glue = self.gluing
        moves: List[Tuple[Key, Key]] = []
        plan = []
        for edge in self.frame.snake_edges():
            holders = [(pos, S) for pos, S in enumerate(self.frame.maximal) if set(edge) <= set(S)]
            (p1, S1), (p2, S2) = holders
            w1 = next(t for t, v in enumerate(S1) if v not in edge)
            w2 = next(t for t, v in enumerate(S2) if v not in edge)
            side = gray_side if self.frame.is_gray(edge) else "right"
            plan.append((p1, w1, p2, w2, side))

        for key in self.keys:
            for p1, w1, p2, w2, side in plan:
                h1, h2 = self._half(p1), self._half(p2)
                T1, T2 = glue.total(h1), glue.total(h2)
                old = int(T1.face(2, w1)[key[p1]])
                for beta in glue.bigons(h1, side).get(old, []):
                    beta2 = glue.transfer(2, beta) if h1 != h2 else beta
                    moved = list(key)
                    moved[p1] = _moved(T1, key[p1], w1, beta, side)
                    moved[p2] = _moved(T2, key[p2], w2, beta2, side)
                    moved = tuple(moved)
                    if moved not in self.by_key:
                        raise QuotientDegenerate(f"{self.frame}: a bigon moves {key} out of the configurations",
                                                 witness={'key': list(key), 'moved': list(moved), 'bigon': beta})
                    if moved != key:
                        moves.append((key, moved))
        reps, orbit_of = find_orbits(self.keys, moves)
        return Orbits(reps, orbit_of, moves)


def _moved(T: TruncatedSSet, t: int, w: int, beta: int, side: str) -> int:
    hits = move_triangle(T, t, w, beta, side)
    if len(hits) != 1:
        raise NotA2Groupoid(f"{T.name}: moving triangle {t} by bigon {beta} gives {len(hits)} triangles",
                            witness={'triangle': t, 'bigon': beta, 'results': hits})
    return hits[0]


def _as_bijection(pairs, n_source: int, n_target: int) -> Optional[Dict[int, int]]:
    mapping: Dict[int, int] = {}
    for a, b in pairs:
        if mapping.setdefault(a, b) != b:
            return None
    if len(mapping) != n_source or sorted(mapping.values()) != list(range(n_target)):
        return None
    return mapping


@dataclass
class VariantSquare:
    """The four quotients for one white and two black vertices and the bijections between them."""

    sizes: Dict[str, int]
    maps: Dict[str, Optional[Dict[int, int]]]
    commutes: bool

    @property
    def bijective(self) -> Dict[str, bool]:
        return {name: m is not None for name, m in self.maps.items()}

    @property
    def holds(self) -> bool:
        return all(self.bijective.values()) and self.commutes

    def to_frame(self) -> pd.DataFrame:
        rows = [{'map': name, 'source': name.split('->')[0], 'target': name.split('->')[1],
                 'bijective': m is not None} for name, m in self.maps.items()]
        return pd.DataFrame(rows, columns=['map', 'source', 'target', 'bijective'])


def _flips(second: TruncatedSSet, low: ConfigurationSpace, high: ConfigurationSpace) -> Dict[Key, List[Key]]:
    """Exchange the two triangles of the second half across a tetrahedron of the second bibundle."""
    quad = tuple(sorted(set().union(*low.frame.xi_max)))

    def face_of(S: Sequence[int]) -> int:
        return next(p for p, v in enumerate(quad) if v not in S)

    n_first = len(low.frame.gamma_max)
    out: Dict[Key, List[Key]] = {}
    for key in low.keys:
        known = {face_of(S): key[n_first + s] for s, S in enumerate(low.frame.xi_max)}
        first = min(known)
        hits = [z for z in second.face_index(3, first).get(known[first], [])
                if all(int(second.face(3, i)[z]) == v for i, v in known.items())]
        out[key] = [key[:n_first] + tuple(int(second.face(3, face_of(S))[z]) for S in high.frame.xi_max)
                    for z in hits]
    return out


def variant_square(gluing: Gluing, low: ConfigurationSpace, budget: Optional[int] = None) -> VariantSquare:
    """
    Build the four quotients TL, TR, BL, BR for one white and two black vertices.

    TL and BL share the low frame and differ in the side of the bigons acting
    on the gray edge; TR and BR use the high frame. Vertical maps identify
    orbits through shared configurations, horizontal ones by replacing the
    two triangles of the second half with the other two faces of a
    tetrahedron.
    """
    high = ConfigurationSpace(gluing, Frame(0, 1, high=True), budget)
    orbits = {
        'TL': low.orbits("right"), 'BL': low.orbits("left"),
        'TR': high.orbits("right"), 'BR': high.orbits("left"),
    }
    flips = _flips(gluing.second.total, low, high)
    relations = {
        'TL->BL': [(orbits['TL'].orbit_of[k], orbits['BL'].orbit_of[k]) for k in low.keys],
        'TR->BR': [(orbits['TR'].orbit_of[k], orbits['BR'].orbit_of[k]) for k in high.keys],
        'TL->TR': [(orbits['TL'].orbit_of[k], orbits['TR'].orbit_of[k2])
                   for k in low.keys for k2 in flips[k] if k2 in high.by_key],
        'BL->BR': [(orbits['BL'].orbit_of[k], orbits['BR'].orbit_of[k2])
                   for k in low.keys for k2 in flips[k] if k2 in high.by_key],
    }
    maps = {}
    for name, pairs in relations.items():
        source, target = name.split('->')
        maps[name] = _as_bijection(pairs, len(orbits[source]), len(orbits[target]))
    commutes = False
    if all(m is not None for m in maps.values()):
        commutes = all(maps['TR->BR'][maps['TL->TR'][o]] == maps['BL->BR'][maps['TL->BL'][o]]
                       for o in range(len(orbits['TL'])))
    square = VariantSquare({v: len(orbits[v]) for v in VARIANTS}, maps, commutes)
    logger.info(f"variant square: sizes {square.sizes}, commutes {commutes}")
    return square


class _Assembly:
    """Levels 0..3 of the composite: cells, faces and degeneracies."""

    def __init__(self, gluing: Gluing, spaces: Dict[Cell, ConfigurationSpace], orbits: Dict[Cell, Orbits]):
        self.gluing = gluing
        self.spaces = spaces
        self.orbits = orbits
        self.offsets: Dict[Cell, int] = {}
        self.boundaries: Dict[Cell, List[Key]] = {}
        self.level3: Dict[Key, int] = {}

    def _pure(self, cell: Cell) -> Tuple[ColoredSSet, Sequence[int]]:
        i, j = cell
        if j < 0:
            return self.gluing.first, self.gluing.first.cell(i, -1)
        return self.gluing.second, self.gluing.second.cell(-1, j)

    def _pure_index(self, cell: Cell, y: int) -> int:
        G, _ = self._pure(cell)
        return self.offsets[cell] + int(G.local(cell[0] + cell[1] + 1)[y])

    def index_of_key(self, frame: Frame, key: Key) -> int:
        """Index in the composite of the simplex a configuration key over ``frame`` represents."""
        if frame.i < 0 or frame.j < 0:
            return self._pure_index(frame.cell, key[0])
        cell = frame.cell
        if frame.degree == TOP:
            config = self.spaces[cell].by_key.get(key)
            boundary = None if config is None else self.config_boundary(self.spaces[cell], config)
            if boundary not in self.level3:
                raise QuotientDegenerate(f"{frame}: key {key} is not a realised boundary")
            return self.level3[boundary]
        orbit = self.orbits[cell].orbit_of.get(key)
        if orbit is None:
            raise QuotientDegenerate(f"{frame}: key {key} is not a configuration",
                                     witness={'cell': list(cell), 'key': list(key)})
        return self.offsets[cell] + orbit

    def config_face(self, space: ConfigurationSpace, config: Configuration, l: int) -> int:
        sub, kept = space.frame.face(l)
        return self.index_of_key(sub, space.restrict(config, sub, kept))

    def config_boundary(self, space: ConfigurationSpace, config: Configuration) -> Key:
        return tuple(self.config_face(space, config, l) for l in range(space.frame.degree + 1))

    def _members(self, cell: Cell) -> List[Hashable]:
        i, j = cell
        m = i + j + 1
        if i < 0 or j < 0:
            G, idx = self._pure(cell)
            return [G.total.label(m, int(x)) for x in idx]
        if m < TOP:
            return list(self.orbits[cell].reps)
        return self.boundaries[cell]

    def _check_orbit_faces(self, cell: Cell, faces: Dict[int, List[List[int]]]) -> None:
        space, orbits = self.spaces[cell], self.orbits[cell]
        m = space.frame.degree
        base = self.offsets[cell]
        for config in space.configurations:
            x = base + orbits.orbit_of[config.key]
            for l in range(m + 1):
                if self.config_face(space, config, l) != faces[m][l][x]:
                    raise QuotientDegenerate(
                        f"{space.frame}: faces differ within an orbit",
                        witness={'cell': list(cell), 'key': list(config.key), 'face': l})

    def _collapse_degeneracy(self, cell: Cell, key: Key, j: int) -> int:
        i, jj = cell
        space = self.spaces[cell]
        if j <= i:
            big = Frame(i + 1, jj)
            white = [p if p <= j else p - 1 for p in range(i + 2)]
            black = list(range(jj + 1))
        else:
            q0 = j - i - 1
            big = Frame(i, jj + 1)
            white = list(range(i + 1))
            black = [q if q <= q0 else q - 1 for q in range(jj + 2)]
        collapse = big.collapse(space.frame, white, black)
        return self.index_of_key(big, space.restrict(space.by_key[key], big, collapse))

    def build(self, name: str) -> TruncatedSSet:
        levels: List[List[Hashable]] = []
        faces: Dict[int, List[List[int]]] = {}
        degens: Dict[int, List[List[int]]] = {}

        for m in range(TOP + 1):
            if m == TOP:
                for cell in MIXED[TOP]:
                    space = self.spaces[cell]
                    self.boundaries[cell] = sorted({self.config_boundary(space, c) for c in space.configurations})
            labels: List[Hashable] = []
            for cell in level_cells(m):
                self.offsets[cell] = len(labels)
                labels += [(cell, payload) for payload in self._members(cell)]
            levels.append(labels)
            if m == 0:
                continue

            rows = [[0] * len(labels) for _ in range(m + 1)]
            for cell in level_cells(m):
                base = self.offsets[cell]
                i, j = cell
                if i < 0 or j < 0:
                    G, idx = self._pure(cell)
                    for t, y in enumerate(idx):
                        for l in range(m + 1):
                            face = int(G.total.face(m, l)[y])
                            rows[l][base + t] = self._pure_index(_face_cell(cell, l), face)
                elif m < TOP:
                    space = self.spaces[cell]
                    for t, key in enumerate(self.orbits[cell].reps):
                        for l in range(m + 1):
                            rows[l][base + t] = self.config_face(space, space.by_key[key], l)
                else:
                    for t, boundary in enumerate(self.boundaries[cell]):
                        for l in range(m + 1):
                            rows[l][base + t] = boundary[l]
            faces[m] = rows
            if m == TOP:
                self.level3 = {}
                for x in range(len(labels)):
                    self.level3.setdefault(tuple(rows[l][x] for l in range(m + 1)), x)
            else:
                for cell in MIXED.get(m, []):
                    self._check_orbit_faces(cell, faces)

        for m in range(TOP):
            rows = [[0] * len(levels[m]) for _ in range(m + 1)]
            for cell in level_cells(m):
                base = self.offsets[cell]
                i, j = cell
                if i < 0 or j < 0:
                    G, idx = self._pure(cell)
                    up = (i + 1, j) if j < 0 else (i, j + 1)
                    for t, y in enumerate(idx):
                        for k in range(m + 1):
                            rows[k][base + t] = self._pure_index(up, int(G.total.degeneracy(m, k)[y]))
                elif m < TOP - 1:
                    for t, key in enumerate(self.orbits[cell].reps):
                        for k in range(m + 1):
                            rows[k][base + t] = self._collapse_degeneracy(cell, key, k)
                else:
                    for t in range(len(self._members(cell))):
                        x = base + t
                        for k in range(m + 1):
                            boundary = _degenerate_boundary(faces[m], degens[m - 1], x, k)
                            if boundary not in self.level3:
                                raise QuotientDegenerate(f"{name}: degenerate simplex s_{k} of {x} is not realised",
                                                         witness={'simplex': x, 'degeneracy': k})
                            rows[k][x] = self.level3[boundary]
            degens[m] = rows

        return make_truncated(levels, faces, degens, cosk_level=TOP, name=name)


def _face_cell(cell: Cell, l: int) -> Cell:
    i, j = cell
    return (i - 1, j) if l <= i else (i, j - 1)


def _degenerate_boundary(faces: List[List[int]], lower: List[List[int]], x: int, j: int) -> Key:
    """Faces of s_j x read off the simplicial identities."""
    m = len(faces) - 1
    out = []
    for i in range(m + 2):
        if i < j:
            out.append(lower[j - 1][faces[i][x]])
        elif i in (j, j + 1):
            out.append(x)
        else:
            out.append(lower[j][faces[i - 1][x]])
    return tuple(out)


@dataclass
class Composite:
    """The composite bibundle with the quotients it was assembled from."""

    colored: ColoredSSet
    gluing: Gluing
    spaces: Dict[Cell, ConfigurationSpace]
    orbits: Dict[Cell, Orbits]
    square: Optional[VariantSquare] = None
    report: Optional[BibundleReport] = None
    assembly: Optional[_Assembly] = field(default=None, repr=False)

    @property
    def total(self) -> TruncatedSSet:
        return self.colored.total

    def index(self, cell: Cell, key: Key) -> int:
        """Total index of the simplex containing the configuration ``key`` over the frame of ``cell``."""
        return self.assembly.index_of_key(Frame(*cell), tuple(int(v) for v in key))

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for m in range(TOP + 1):
            for cell in level_cells(m):
                mixed = cell in self.spaces
                rows.append({
                    'cell': f"({cell[0]},{cell[1]})",
                    'degree': m,
                    'configurations': len(self.spaces[cell]) if mixed else None,
                    'moves': len(self.orbits[cell].moves) if cell in self.orbits else None,
                    'simplices': len(self.colored.cell(*cell)),
                })
        return pd.DataFrame(rows, columns=['cell', 'degree', 'configurations', 'moves', 'simplices'])


def require_right_principal(G: ColoredSSet) -> BibundleReport:
    """
    Raises:
        NotRightPrincipal: a colored or right Kan condition fails
    """
    report = classify_bibundle(G, 2)
    if not report.right_principal:
        frame = report.to_frame()
        failing = frame.loc[~frame['ok'], 'condition'].tolist()
        raise NotRightPrincipal(f"{G.name} is not a right principal 2-bibundle", witness={'failing': failing})
    return report


def compose_2bibundles(
    first: ColoredSSet,
    second: ColoredSSet,
    identification: Optional[SimplicialMap] = None,
    check: bool = True,
    variants: bool = True,
    budget: Optional[int] = None,
    name: Optional[str] = None,
) -> Composite:
    """
    Compose right principal bibundles Gamma: X-Y and Xi: Y-Z.

    Args:
        first: Gamma
        second: Xi
        identification: Isomorphism from Gamma's black end to Xi's white end;
            found by end_identification when omitted
        check: Gate both inputs on right principality and classify the result
        variants: Also build the TR, BL and BR quotients and their square
        budget: Cap on search expansions per configuration search
        name: Display name

    Returns:
        Composite, with the colored simplicial set in ``colored``

    Raises:
        NotRightPrincipal: an input is not right principal
        QuotientDegenerate: the quotients do not assemble into a right principal bibundle
    """
    name = name or f"{first.name}(x){second.name}"
    budget = budget if budget is not None else int(config_value('budget', 1_000_000))
    if check:
        require_right_principal(first)
        require_right_principal(second)
    iota = identification if identification is not None else end_identification(first, second, budget)
    gluing = Gluing(first, second, iota)

    spaces = {cell: ConfigurationSpace(gluing, Frame(*cell), budget)
              for m in sorted(MIXED) for cell in MIXED[m]}
    orbits = {cell: spaces[cell].orbits() for m in (1, 2) for cell in MIXED[m]}
    assembly = _Assembly(gluing, spaces, orbits)
    total = assembly.build(name)
    colours = [0] * len(first.cell(0, -1)) + [1] * len(second.cell(-1, 0))
    sigma = ColoredSSet(total, colours, name=name)

    square = variant_square(gluing, spaces[(0, 1)], budget) if variants else None
    report = None
    if check:
        report = classify_bibundle(sigma, 2, check_ends=False)
        if not report.right_principal:
            raise QuotientDegenerate(f"{name} is not a right principal bibundle",
                                     witness={'flags': report.flags()})
    logger.info(f"{name}: cell sizes {sigma.cell_sizes(2)}")
    return Composite(sigma, gluing, spaces, orbits, square, report, assembly)
