"""
Groupoids of bigons and the fundamental groupoid of a 2-groupoid.

A bigon is a 2-simplex with a degenerate face. With d_0 degenerate it runs
from d_1 to d_2 and composes through the inner horn Lambda^3_2; with d_2
degenerate it runs from d_0 to d_1 and composes through Lambda^3_1. The
two groupoids are identified by filling outer horns Lambda^3_3.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from src.bibundles.colored import ColoredSSet
from src.errors import BadParams, CompositionIllDefined, IncoherentInput, NotA2Groupoid
from src.groupoids.categories import FinGroupoid
from src.groupoids.functors import Functor
from src.groupoids.quotient import orbit_labels
from src.kan.weak import require_2groupoid
from src.simplicial.core import TruncatedSSet

logger = logging.getLogger(__name__)


@dataclass
class BigonGroupoid:
    """
    The groupoid E of bigons with d_0 degenerate, its mirror E' with d_2
    degenerate, and the isomorphism phi: E -> E' (identity on objects).

    ``objects`` and ``arrows`` are the edge and 2-simplex indices of the
    underlying simplicial set that E is built on.
    """

    groupoid: FinGroupoid
    objects: List[int]
    arrows: List[int]
    mirror: FinGroupoid
    mirror_arrows: List[int]
    phi: Functor

    @property
    def n_objects(self) -> int:
        return self.groupoid.n_objects

    @property
    def n_arrows(self) -> int:
        return self.groupoid.n_arrows


def _degenerate_edges(X: TruncatedSSet) -> set:
    return set(int(e) for e in X.degeneracy(0, 0))


def _fill(X: TruncatedSSet, known: Dict[int, int], missing: int, what: str) -> int:
    """The missing face of the unique 3-simplex with the given faces."""
    first = min(known)
    hits = {int(X.face(3, missing)[y]) for y in X.face_index(3, first).get(known[first], [])
            if all(int(X.face(3, i)[y]) == v for i, v in known.items())}
    if len(hits) != 1:
        raise NotA2Groupoid(f"{X.name}: {what} has {len(hits)} fillers",
                            witness={'faces': {str(i): v for i, v in known.items()}, 'fillers': len(hits)})
    return hits.pop()


def move_triangle(S: TruncatedSSet, t: int, w: int, beta: int, side: str = "right") -> List[int]:
    """
    Act on the edge of a triangle opposite vertex w by a bigon.

    The triangle t is a face of a 3-simplex T in which one endpoint v of the
    edge is doubled (the later endpoint for ``right``, the earlier for
    ``left``). Deleting the double gives t, deleting w gives beta, deleting
    the other endpoint gives a degenerate triangle; the face deleting v is
    the moved triangle. A right bigon has d_0 degenerate and d_2 the old
    edge; a left bigon has d_2 degenerate and d_1 the old edge.

    Returns:
        Every moved triangle (one when the inner horn fills uniquely)
    """
    x, y = (q for q in range(3) if q != w)
    v, u = (y, x) if side == "right" else (x, y)
    old = int(S.face(2, w)[t])
    if int(S.face(2, 2 if side == "right" else 1)[beta]) != old:
        raise BadParams(f"bigon {beta} does not start at edge {old} of triangle {t}")

    def pos(q: int) -> int:
        return q if q <= v else q + 1

    degenerate = int(S.degeneracy(1, 0 if v < w else 1)[S.face(2, u)[t]])
    known = {v + 1: t, pos(w): beta, pos(u): degenerate}
    first = min(known)
    return sorted({int(S.face(3, v)[z]) for z in S.face_index(3, first).get(known[first], [])
                   if all(int(S.face(3, i)[z]) == val for i, val in known.items())})


def _groupoid(
    X: TruncatedSSet,
    objects: Sequence[int],
    arrows: Sequence[int],
    ends: Tuple[int, int],
    unit_degeneracy: int,
    composite,
    name: str,
) -> FinGroupoid:
    """Assemble a groupoid of bigons; ends = (source face, target face)."""
    obj_pos = {e: t for t, e in enumerate(objects)}
    arr_pos = {x: t for t, x in enumerate(arrows)}
    s_face, t_face = ends
    source = [obj_pos[int(X.face(2, s_face)[x])] for x in arrows]
    target = [obj_pos[int(X.face(2, t_face)[x])] for x in arrows]
    unit = [arr_pos[int(X.degeneracy(1, unit_degeneracy)[e])] for e in objects]
    into: Dict[int, List[int]] = {}
    for f, b in enumerate(target):
        into.setdefault(b, []).append(f)
    compose = {}
    for g in range(len(arrows)):
        for f in into.get(source[g], []):
            h = composite(arrows[f], arrows[g])
            if h not in arr_pos:
                raise NotA2Groupoid(f"{X.name}: composite of bigons {arrows[g]} and {arrows[f]} is not a bigon")
            compose[(g, f)] = arr_pos[h]
    return FinGroupoid(
        [X.label(1, e) for e in objects], [X.label(2, x) for x in arrows],
        source, target, unit, compose, name=name,
    )


def bigon_groupoid(
    subject: Union[TruncatedSSet, ColoredSSet],
    check: bool = True,
    name: Optional[str] = None,
) -> BigonGroupoid:
    """
    Groupoid of bigons of a 2-groupoid nerve, or of a bibundle.

    For a 2-groupoid X the objects are X_1 and the arrows the 2-simplices
    with degenerate d_0, from d_1 to d_2, with unit s_1. For a bibundle the
    objects are the edges with one white and one black vertex, and the
    arrows the triangles with one white and two black vertices whose black
    edge is degenerate.

    Args:
        subject: 2-groupoid nerve or colored simplicial set
        check: Verify the 2-groupoid property of an uncoloured input first
        name: Display name

    Returns:
        BigonGroupoid, with the mirror groupoid and phi checked to be an isomorphism

    Raises:
        NotA2Groupoid: a composite or phi(theta) is not uniquely determined
    """
    if isinstance(subject, ColoredSSet):
        X = subject.total
        objects = [int(e) for e in subject.cell(0, 0)]
        right = [int(x) for x in subject.cell(0, 1)]
        left = [int(x) for x in subject.cell(1, 0)]
    else:
        X = subject
        if check:
            require_2groupoid(X)
        objects = list(range(X.size(1)))
        right = left = list(range(X.size(2)))
    name = name or f"E({subject.name})"
    degenerate = _degenerate_edges(X)
    arrows = [x for x in right if int(X.face(2, 0)[x]) in degenerate]
    mirror_arrows = [x for x in left if int(X.face(2, 2)[x]) in degenerate]

    def vertex(e: int, end: int) -> int:
        return int(X.face(1, 1 - end)[e])

    def totally_degenerate(v: int) -> int:
        return int(X.degeneracy(1, 0)[X.degeneracy(0, 0)[v]])

    def composite(f: int, g: int) -> int:
        # f: e1 -> e2 and g: e2 -> e3 fill (u, v, v+, v++) as d_1 and d_3
        v = vertex(int(X.face(2, 1)[f]), 1)
        return _fill(X, {0: totally_degenerate(v), 1: f, 3: g}, 2, "a composite of bigons")

    def mirror_composite(f: int, g: int) -> int:
        u = vertex(int(X.face(2, 0)[f]), 0)
        return _fill(X, {0: f, 2: g, 3: totally_degenerate(u)}, 1, "a composite of mirrored bigons")

    E = _groupoid(X, objects, arrows, (1, 2), 1, composite, name)
    E_prime = _groupoid(X, objects, mirror_arrows, (0, 1), 0, mirror_composite, f"{name}'")

    mirror_pos = {x: t for t, x in enumerate(mirror_arrows)}
    images = []
    for theta in arrows:
        e1 = int(X.face(2, 1)[theta])
        known = {0: int(X.degeneracy(1, 1)[e1]), 1: theta, 2: int(X.degeneracy(1, 0)[e1])}
        image = _fill(X, known, 3, "an outer Lambda^3_3 horn")
        if image not in mirror_pos:
            raise NotA2Groupoid(f"{X.name}: phi sends bigon {theta} outside the mirrored bigons")
        images.append(mirror_pos[image])
    phi = Functor(E, E_prime, list(range(E.n_objects)), images, name=f"phi:{name}")
    if len(set(images)) != len(images) or len(images) != E_prime.n_arrows:
        raise IncoherentInput(f"{name}: phi is not bijective on arrows")
    logger.info(f"{name}: {E.n_objects} objects, {E.n_arrows} bigons")
    return BigonGroupoid(E, objects, arrows, E_prime, mirror_arrows, phi)


def colored_bigon_groupoid(G: ColoredSSet, name: Optional[str] = None) -> BigonGroupoid:
    return bigon_groupoid(G, check=False, name=name)


def bigon_classes(X: TruncatedSSet) -> Tuple[List[int], List[int]]:
    """
    Orbits of edges under the bigon relation.

    Returns:
        (orbit number of every edge, least edge of each orbit)
    """
    degenerate = _degenerate_edges(X)
    pairs = [(int(X.face(2, 1)[x]), int(X.face(2, 2)[x]))
             for x in range(X.size(2)) if int(X.face(2, 0)[x]) in degenerate]
    labels = [int(v) for v in orbit_labels(X.size(1), pairs)]
    reps: List[int] = []
    for e, o in enumerate(labels):
        if o == len(reps):
            reps.append(e)
    return labels, reps


def fundamental_groupoid(X: TruncatedSSet, check: bool = True, name: Optional[str] = None) -> FinGroupoid:
    """
    tau(X): objects X_0, arrows the edges up to bigons, [d_2 t] . [d_0 t] = [d_1 t].

    Args:
        X: 2-groupoid nerve
        check: Verify the 2-groupoid property first

    Returns:
        FinGroupoid whose arrows are labelled by their least representative edge

    Raises:
        CompositionIllDefined: two triangles give different composites for the same classes
    """
    if check:
        require_2groupoid(X)
    name = name or f"tau({X.name})"
    cls, reps = bigon_classes(X)
    source = [int(X.face(1, 0)[e]) for e in reps]
    target = [int(X.face(1, 1)[e]) for e in reps]
    unit = [cls[int(X.degeneracy(0, 0)[v])] for v in range(X.size(0))]
    compose: Dict[Tuple[int, int], int] = {}
    for t in range(X.size(2)):
        g, f, h = (cls[int(X.face(2, i)[t])] for i in (2, 0, 1))
        if compose.setdefault((g, f), h) != h:
            raise CompositionIllDefined(
                f"{name}: classes {g} and {f} compose to both {compose[(g, f)]} and {h}",
                witness={'pair': [g, f], 'composites': [compose[(g, f)], h], 'triangle': t},
            )
    missing = [(g, f) for g in range(len(reps)) for f in range(len(reps))
               if source[g] == target[f] and (g, f) not in compose]
    if missing:
        raise CompositionIllDefined(f"{name}: classes {missing[0]} have no composite",
                                    witness={'pair': list(missing[0])})
    tau = FinGroupoid(X.labels(0), [X.label(1, e) for e in reps], source, target, unit, compose, name=name)
    logger.info(f"{name}: {tau.n_objects} objects, {tau.n_arrows} arrows from {X.size(1)} edges")
    return tau
