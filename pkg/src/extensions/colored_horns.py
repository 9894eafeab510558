"""Filling outer horns Lambda^m_0[i, j] (i >= 2) of a colored simplicial set.

The horn is enlarged to a complex T inside a bigger simplex: a white vertex
1+ with (0, 1+) degenerate and, for m > 2, a second white vertex 1++ with
(1, 1++) degenerate. T is reached from the enlarged horn S by attaching only
inner horns and horns of one colour, whose fillers exist under the bibundle
conditions; the face {0, 1, 2, ..., m} of T is the outer filler.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from src.bibundles.colored import ColoredSSet, ends, interval, opposite_bibundle
from src.errors import BadColorSplit, BadParams, HypothesesNotMet
from src.extensions.filtrations import FiltrationCertificate, find_filtration
from src.kan.conditions import kan
from src.simplicial.core import SimplicialMap, TruncatedSSet, map_from_function
from src.simplicial.hom import HomSearch, enumerate_lifts
from src.simplicial.shapes import horn, inclusion, simplex, simplex_subcomplex

logger = logging.getLogger(__name__)


@dataclass
class ColoredFiller:
    """
    Outcome of the colored outer horn construction.

    ``filler`` is the constructed m-simplex of the total space, ``fillers``
    every filler found by direct enumeration, ``consistent`` whether taking
    the last instead of the first filler at every step gave the same result.
    """

    m: int
    k: int
    split: Tuple[int, int]
    filler: int
    filler_map: Optional[SimplicialMap]
    fillers: List[int] = field(default_factory=list)
    consistent: bool = True
    certificate: Optional[FiltrationCertificate] = None

    @property
    def unique(self) -> bool:
        return len(self.fillers) == 1

    @property
    def in_enumeration(self) -> bool:
        return self.filler in self.fillers


def _transport(src: TruncatedSSet, dst: TruncatedSSet, level: int, y: int) -> int:
    """The simplex of dst = opposite(src) matching y (indices agree on stored levels)."""
    if level <= min(src.cosk_level, dst.cosk_level):
        return y
    faces = [_transport(src, dst, level - 1, int(src.face(level, level - i)[y])) for i in range(level + 1)]
    return dst.lookup(level, faces)[0]


def _horn_split(G: ColoredSSet, h: SimplicialMap, m: int) -> Tuple[int, int]:
    seq = [G.vertex_colours[h(0, v)] for v in range(m + 1)]
    if any(b < a for a, b in zip(seq, seq[1:])):
        raise BadColorSplit(f"horn vertices have colours {seq}, which do not lie over Delta^1")
    i = seq.count(0)
    return i, m + 1 - i


def outer_horns(G: ColoredSSet, m: int, i: int, k: int = 0) -> Iterator[SimplicialMap]:
    """
    Horns Lambda^m_k in G.total lying over the colour split 0^i 1^(m+1-i), in canonical order.

    Raises:
        BadColorSplit: i is outside 0..m+1
    """
    if not 0 <= i <= m + 1:
        raise BadColorSplit(f"no colour split with {i} white vertices in dimension {m}")
    H, I = horn(m, k), interval()
    pattern = (0,) * i + (1,) * (m + 1 - i)
    g = map_from_function(H, I, lambda n, x: I.index_of(n, tuple(pattern[int(v)] for v in H.vertices(n)[x])))
    yield from HomSearch(H, G.total, over=(G.structure, g)).maps()


def check_outer_hypotheses(G: ColoredSSet, m: int) -> List[str]:
    """Failing conditions among inner Kan of the structure map and Kan of both ends."""
    top = min(m + 1, G.bound + 1)
    failing = []
    for level in range(2, top + 1):
        for k in range(1, level):
            if not kan(G.structure, level, k).holds:
                failing.append(f"Kan({level},{k}) of {G.structure.name}")
    e = ends(G)
    for side, X in (('white', e.white), ('black', e.black)):
        for level in range(1, top + 1):
            for k in range(level + 1):
                if not kan(X, level, k).holds:
                    failing.append(f"Kan({level},{k}) of the {side} end")
    return failing


class _Enlargement:
    """The complexes S and T of the construction for a given m."""

    def __init__(self, m: int, colours: Sequence[int]):
        self.m = m
        self.extras = 1 if m == 2 else 2
        e = self.extras
        self.n = m + e
        rest = [v + e for v in range(2, m + 1)]
        facets = [[p for p in rest if p != q] for q in rest] if m > 2 else []

        s_gens = [[self.pos(v) for v in range(m + 1) if v != t] for t in range(1, m + 1)]
        s_gens.append([0, 2] + rest)
        t_gens = [[0, 1, 2] + rest]
        for F in facets:
            s_gens.append([0, 1, 3] + F)
            s_gens.append([0, 2, 3] + F)
            t_gens.append([0, 1, 2, 3] + F)
        self.S = simplex_subcomplex(self.n, s_gens, name=f"S_{m}")
        self.T = simplex_subcomplex(self.n, s_gens + t_gens, name=f"T_{m}")
        self.colours = [0] * (e + 2) + [int(colours[v]) for v in range(2, m + 1)]

    def pos(self, v: int) -> int:
        return v if v < 2 else v + self.extras

    def collapse(self, seq: Sequence[int]) -> Tuple[int, ...]:
        # 1+ -> 0, 1++ -> 1
        table = {0: 0, 1: 1, 2: 0, 3: 1}
        return tuple(table[p] if p < 2 + self.extras else p - self.extras for p in seq)

    @property
    def outer_face(self) -> Tuple[int, ...]:
        return tuple(self.pos(v) for v in range(self.m + 1))


def _replay(
    E: _Enlargement,
    cert: FiltrationCertificate,
    i: SimplicialMap,
    start: SimplicialMap,
    target: TruncatedSSet,
    choice: str,
) -> int:
    T = E.T
    assigned: Dict[Tuple[int, int], int] = {}
    for d in range((E.S.dimension or 0) + 1):
        for s in E.S.nondegenerate(d):
            assigned[(d, i(d, s))] = start(d, s)

    def image(d: int, z: int) -> int:
        if (d, z) in assigned:
            return assigned[(d, z)]
        j = int(T.degenerate_by(d)[z])
        below = image(d - 1, int(T.face(d, j)[z]))
        return int(target.degeneracy(d - 1, j)[below])

    for t, step in enumerate(cert.steps):
        n, k = step.n, step.k
        known = {p: image(n - 1, y) for p, y in enumerate(step.attaching) if p != k}
        first = min(known)
        candidates = [y for y in target.face_index(n, first).get(known[first], [])
                      if all(int(target.face(n, p)[y]) == v for p, v in known.items())]
        if not candidates:
            raise HypothesesNotMet(f"no filler for the Lambda^{n}_{k} horn at step {t}",
                                   witness={'step': t, 'label': list(step.label)})
        y = candidates[0] if choice == "first" else candidates[-1]
        assigned[(n, step.simplex)] = y
        assigned[(n - 1, step.attaching[k])] = int(target.face(n, k)[y])
    return image(E.m, T.index_of(E.m, E.outer_face))


def fill_colored_outer_horn(
    G: ColoredSSet,
    h: SimplicialMap,
    k: int = 0,
    check_hypotheses: bool = True,
    budget: Optional[int] = None,
) -> ColoredFiller:
    """
    Fill a colored outer horn Lambda^m_0[i, j] with i >= 2, or Lambda^m_m[i, j] with j >= 2.

    The last case is the first one read in the opposite bibundle.

    Args:
        G: Colored simplicial set
        h: Map from horn(m, k) into G.total
        k: 0 or m
        check_hypotheses: Check inner Kan of the structure map and Kan of both ends first
        budget: Node budget for the filtration search

    Returns:
        ColoredFiller

    Raises:
        BadColorSplit: fewer than two vertices share the colour of the horn's apex
        HypothesesNotMet: a hypothesis fails, or a horn on the way has no filler
    """
    Hn = h.source
    m = Hn.ambient_dim
    if m is None or m < 2:
        raise BadParams("fill_colored_outer_horn needs a horn Lambda^m_k with m >= 2")
    if k not in (0, m):
        raise BadParams(f"Lambda^{m}_{k} is not an outer horn")
    i, j = _horn_split(G, h, m)
    if (k == 0 and i < 2) or (k == m and j < 2):
        raise BadColorSplit(f"Kan({m},{k})[{i},{j}] is not a colored outer condition",
                            witness={'m': m, 'k': k, 'split': [i, j]})
    if check_hypotheses:
        failing = check_outer_hypotheses(G, m)
        if failing:
            raise HypothesesNotMet(f"{G.name}: {len(failing)} hypotheses fail", witness={'failing': failing})

    work, work_h = G, h
    if k == m:
        work = opposite_bibundle(G)
        H0 = horn(m, 0)
        top = max(m, G.bound)

        def flipped(d: int, x: int) -> int:
            seq = tuple(m - v for v in reversed(H0.label(d, x)))
            return _transport(G.total, work.total, d, h(d, Hn.index_of(d, seq)))

        work_h = map_from_function(H0, work.total, flipped, up_to=top, name=f"{h.name}^op")

    E = _Enlargement(m, [work.vertex_colours[work_h(0, v)] for v in range(m + 1)])
    top = max(E.S.cosk_level, work.bound)
    start = map_from_function(
        E.S, work.total,
        lambda d, x: work_h(d, work_h.source.index_of(d, E.collapse(E.S.label(d, x)))),
        up_to=top, name=f"{E.S.name}->{work.name}",
    )
    inc = inclusion(E.S, E.T)
    cert = find_filtration(inc, "special", colours=E.colours, budget=budget)
    filler = _replay(E, cert, inc, start, work.total, "first")
    consistent = filler == _replay(E, cert, inc, start, work.total, "last")
    if k == m:
        filler = _transport(work.total, G.total, m, filler)

    Dm = simplex(m)
    top_cell = Dm.index_of(m, tuple(range(m + 1)))
    lifts = enumerate_lifts(inclusion(Hn, Dm), h)
    fillers = sorted({f(m, top_cell) for f in lifts})
    matching = [f for f in lifts if f(m, top_cell) == filler]
    result = ColoredFiller(m, k, (i, j), filler, matching[0] if matching else None, fillers, consistent, cert)
    if m > 2 and not result.unique:
        logger.warning(f"{G.name}: Lambda^{m}_{k}[{i},{j}] has {len(fillers)} fillers")
    logger.info(f"{G.name}: filled Lambda^{m}_{k}[{i},{j}] with simplex {filler} "
                f"({len(cert)} steps, {len(fillers)} fillers by enumeration)")
    return result
