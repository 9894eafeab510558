"""Constructions on finite simplicial sets: skeleta, coskeleta, limits, joins and décalage."""

import logging
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Tuple

import numpy as np

from src.errors import (
    IncompatibleTruncations,
    LevelOutOfRange,
    NotASubcomplex,
    TruncationTooLow,
)
from src.groupoids.quotient import orbit_labels
from src.simplicial.bisimplicial import AugBiSSet, grid_cells
from src.simplicial.core import (
    INDEX_DTYPE,
    SimplicialMap,
    TruncatedSSet,
    compatible_families,
)

logger = logging.getLogger(__name__)

DECALAGE_VARIANTS = ("dec", "dec_prime", "total")


def discrete(points: Iterable[Hashable], name: Optional[str] = None) -> TruncatedSSet:
    """The constant simplicial set on a finite set (all simplices above level 0 degenerate)."""
    points = list(points)
    n = len(points)
    ids = np.arange(n, dtype=INDEX_DTYPE)
    return TruncatedSSet(
        sizes=[n, n],
        faces={1: np.stack([ids, ids])},
        degeneracies={0: ids.reshape(1, n)},
        cosk_level=1,
        labels={0: points, 1: points},
        dimension=0,
        name=name or "sk0",
    )


def path_components(X: TruncatedSSet) -> np.ndarray:
    """Component number of each vertex, joining the two ends of every edge."""
    edges = list(zip(X.face(1, 1).tolist(), X.face(1, 0).tolist()))
    return orbit_labels(X.size(0), edges)


def is_connected(X: TruncatedSSet) -> bool:
    return X.size(0) > 0 and int(path_components(X).max()) == 0


def subcomplex(
    X: TruncatedSSet,
    keep: Dict[int, Iterable[int]],
    name: Optional[str] = None,
    dimension: Optional[int] = None,
) -> Tuple[TruncatedSSet, SimplicialMap]:
    """
    Restrict X to a family of simplices closed under faces and degeneracies.

    Args:
        X: Ambient simplicial set
        keep: Level m -> simplices kept, for levels 0..top; the result is stored up to top
        name: Display name
        dimension: Highest level with nondegenerate simplices, if known

    Returns:
        (subcomplex, inclusion map)

    Raises:
        NotASubcomplex: the family is not closed under the structure maps
    """
    top = max(keep)
    kept = [sorted(int(x) for x in keep[m]) for m in range(top + 1)]
    position = [{x: t for t, x in enumerate(level)} for level in kept]

    def reindex(m: int, values: np.ndarray, what: str) -> np.ndarray:
        out = np.empty(len(values), dtype=INDEX_DTYPE)
        for t, v in enumerate(values):
            if int(v) not in position[m]:
                raise NotASubcomplex(f"{what} leaves the kept simplices at level {m}")
            out[t] = position[m][int(v)]
        return out

    faces, degens = {}, {}
    for m in range(1, top + 1):
        idx = np.asarray(kept[m], dtype=INDEX_DTYPE)
        faces[m] = np.stack([reindex(m - 1, X.face(m, i)[idx], f"d_{i}") for i in range(m + 1)]) \
            if len(idx) else np.zeros((m + 1, 0), dtype=INDEX_DTYPE)
    for m in range(top):
        idx = np.asarray(kept[m], dtype=INDEX_DTYPE)
        degens[m] = np.stack([reindex(m + 1, X.degeneracy(m, j)[idx], f"s_{j}") for j in range(m + 1)]) \
            if len(idx) else np.zeros((m + 1, 0), dtype=INDEX_DTYPE)

    S = TruncatedSSet(
        sizes=[len(level) for level in kept],
        faces=faces,
        degeneracies=degens,
        cosk_level=top,
        labels={m: [X.label(m, x) for x in kept[m]] for m in range(top + 1)},
        dimension=dimension,
        name=name or f"sub({X.name})",
        vertex_labels=X.vertex_labels,
    )
    S.ambient_dim = X.ambient_dim
    inc = SimplicialMap(S, X, [np.asarray(level, dtype=INDEX_DTYPE) for level in kept],
                        validate=False, name=f"{S.name}->{X.name}")
    return S, inc


def skeleton(X: TruncatedSSet, n: int) -> TruncatedSSet:
    """
    The n-skeleton: levels 0..n of X plus the degenerate (n+1)-simplices.

    Raises:
        TruncationTooLow: n above the stored level of X
    """
    if n < 0:
        raise LevelOutOfRange(f"skeleton level must be >= 0, got {n}")
    if n > X.cosk_level:
        raise TruncationTooLow(f"sk_{n} needs stored level {n}, {X.name} stores up to {X.cosk_level}")
    keep = {m: range(X.size(m)) for m in range(n + 1)}
    keep[n + 1] = np.flatnonzero(~X.nondegenerate_mask(n + 1))
    dims = [m for m in range(n + 1) if X.nondegenerate(m)]
    S, _ = subcomplex(X, keep, name=f"sk_{n}({X.name})", dimension=max(dims, default=0))
    return S


def coskeleton(X: TruncatedSSet, n: int) -> TruncatedSSet:
    """cosk_n X: levels 0..n of X, everything above as matching families."""
    if n < 0:
        raise LevelOutOfRange(f"coskeleton level must be >= 0, got {n}")
    return X.truncated_copy(n)


def is_coskeletal(X: TruncatedSSet, n: int) -> bool:
    """Whether X -> cosk_n X is an isomorphism (checked on the stored levels above n)."""
    return coskeletal_defect(X, n) is None


def coskeletal_defect(X: TruncatedSSet, n: int) -> Optional[Dict[str, int]]:
    """
    First level above n where boundaries fail to determine simplices uniquely.

    Returns:
        None when X is n-coskeletal, else {'level', 'fillers', 'boundary'} for
        the first boundary with zero or several fillers
    """
    for m in range(n + 1, X.cosk_level + 1):
        index = X.boundary_index(m)
        for family in compatible_families(X, m, range(m + 1)):
            fillers = index.get(family, [])
            if len(fillers) != 1:
                return {'level': m, 'fillers': len(fillers), 'boundary': list(family)}
    return None


def opposite(X: TruncatedSSet, name: Optional[str] = None) -> TruncatedSSet:
    """The opposite simplicial set: d_i and s_j at level m become d_{m-i} and s_{m-j}."""
    c = X.cosk_level
    faces = {m: X.face_table(m)[::-1].copy() for m in range(1, c + 1)}
    degens = {m: X.degeneracy_table(m)[::-1].copy() for m in range(c)}
    Y = TruncatedSSet(X.sizes(c), faces, degens, c,
                      labels={m: X.labels(m) for m in range(c + 1)},
                      dimension=X.dimension, name=name or f"{X.name}^op")
    return Y


def _levelwise_pairs(
    X: TruncatedSSet,
    Y: TruncatedSSet,
    c: int,
    key_x: Optional[Callable[[int], np.ndarray]],
    key_y: Optional[Callable[[int], np.ndarray]],
    name: str,
    dimension: Optional[int],
) -> Tuple[TruncatedSSet, SimplicialMap, SimplicialMap]:
    levels: List[List[Tuple[int, int]]] = []
    for m in range(c + 1):
        if key_x is None:
            pairs = [(x, y) for x in range(X.size(m)) for y in range(Y.size(m))]
        else:
            kx, ky = key_x(m), key_y(m)
            by_key: Dict[int, List[int]] = {}
            for y, v in enumerate(ky):
                by_key.setdefault(int(v), []).append(y)
            pairs = [(x, y) for x in range(X.size(m)) for y in by_key.get(int(kx[x]), [])]
        levels.append(pairs)
    position = [{p: t for t, p in enumerate(level)} for level in levels]

    faces, degens = {}, {}
    for m in range(1, c + 1):
        faces[m] = np.array(
            [[position[m - 1][(int(X.face(m, i)[x]), int(Y.face(m, i)[y]))] for x, y in levels[m]]
             for i in range(m + 1)], dtype=INDEX_DTYPE).reshape(m + 1, len(levels[m]))
    for m in range(c):
        degens[m] = np.array(
            [[position[m + 1][(int(X.degeneracy(m, j)[x]), int(Y.degeneracy(m, j)[y]))]
              for x, y in levels[m]] for j in range(m + 1)],
            dtype=INDEX_DTYPE).reshape(m + 1, len(levels[m]))

    P = TruncatedSSet(
        sizes=[len(level) for level in levels],
        faces=faces,
        degeneracies=degens,
        cosk_level=c,
        labels={m: [(X.label(m, x), Y.label(m, y)) for x, y in levels[m]] for m in range(c + 1)},
        dimension=dimension,
        name=name,
    )
    px = SimplicialMap(P, X, [[x for x, _ in level] for level in levels], validate=False,
                       name=f"pr1:{name}")
    py = SimplicialMap(P, Y, [[y for _, y in level] for level in levels], validate=False,
                       name=f"pr2:{name}")
    logger.debug(f"{name}: level sizes {P.sizes(c)}")
    return P, px, py


def pullback(f: SimplicialMap, g: SimplicialMap) -> Tuple[TruncatedSSet, SimplicialMap, SimplicialMap]:
    """
    Levelwise fiber product X x_Z Y of f: X -> Z and g: Y -> Z.

    The result is stored up to the larger of the two stored levels, which is
    where both factors become coskeletal.

    Returns:
        (pullback, projection to X, projection to Y)

    Raises:
        IncompatibleTruncations: f and g do not share their target
    """
    if f.target is not g.target:
        raise IncompatibleTruncations(f"{f.name} and {g.name} have different targets")
    X, Y = f.source, g.source
    c = max(X.cosk_level, Y.cosk_level)
    return _levelwise_pairs(X, Y, c, f.component, g.component,
                            name=f"{X.name} x_{f.target.name} {Y.name}", dimension=None)


def product(X: TruncatedSSet, Y: TruncatedSSet) -> Tuple[TruncatedSSet, SimplicialMap, SimplicialMap]:
    """Binary product with its projections."""
    c = max(X.cosk_level, Y.cosk_level)
    dim = None
    if X.dimension is not None and Y.dimension is not None:
        dim = X.dimension + Y.dimension
    return _levelwise_pairs(X, Y, c, None, None, name=f"{X.name} x {Y.name}", dimension=dim)


def disjoint_union(X: TruncatedSSet, Y: TruncatedSSet) -> Tuple[TruncatedSSet, SimplicialMap, SimplicialMap]:
    """
    Coproduct X + Y with its two injections.

    Stored at least up to level 1, since a pair of vertices from different
    summands bounds no edge.
    """
    c = max(X.cosk_level, Y.cosk_level, 1)
    sizes = [X.size(m) + Y.size(m) for m in range(c + 1)]
    faces, degens = {}, {}
    for m in range(1, c + 1):
        faces[m] = np.concatenate([X.face_table(m), Y.face_table(m) + X.size(m - 1)], axis=1)
    for m in range(c):
        degens[m] = np.concatenate([X.degeneracy_table(m), Y.degeneracy_table(m) + X.size(m + 1)],
                                   axis=1)
    dim = None
    if X.dimension is not None and Y.dimension is not None:
        dim = max(X.dimension, Y.dimension)
    U = TruncatedSSet(
        sizes, faces, degens, c,
        labels={m: [(0, lab) for lab in X.labels(m)] + [(1, lab) for lab in Y.labels(m)]
                for m in range(c + 1)},
        dimension=dim,
        name=f"{X.name} + {Y.name}",
    )
    ix = SimplicialMap(X, U, [np.arange(X.size(m)) for m in range(c + 1)], validate=False)
    iy = SimplicialMap(Y, U, [np.arange(Y.size(m)) + X.size(m) for m in range(c + 1)], validate=False)
    return U, ix, iy


class JoinData:
    """Bookkeeping of a join: offsets of the summands X_i x Y_j inside each level."""

    def __init__(self, left: TruncatedSSet, right: TruncatedSSet, offsets: Dict[Tuple[int, int], int]):
        self.left = left
        self.right = right
        self.offsets = offsets

    def index(self, i: int, j: int, x: int, y: int) -> int:
        """Index of (x, y) in X_i x Y_j at level i + j + 1 (x or y is 0 for the -1 side)."""
        width = 1 if j < 0 else self.right.size(j)
        return self.offsets[(i, j)] + x * width + y


def _aug_size(X: TruncatedSSet, k: int) -> int:
    return 1 if k < 0 else X.size(k)


def join(X: TruncatedSSet, Y: TruncatedSSet, name: Optional[str] = None) -> TruncatedSSet:
    """
    The join X * Y with level k the union of X_i x Y_j over i + j = k - 1 (i, j >= -1).

    Faces and degeneracies follow the ordinal sum: indices up to i act on the
    X part, the remaining ones on the Y part. Subcomplexes of standard
    simplices join to subcomplexes of the simplex of the ordinal sum, labelled
    by vertex sequences with Y's vertices shifted past X's ambient simplex.

    Args:
        X: Left factor
        Y: Right factor
        name: Display name

    Returns:
        TruncatedSSet with a ``join_data`` attribute locating the summands
    """
    c = max(X.cosk_level, Y.cosk_level) + 1
    offsets: Dict[Tuple[int, int], int] = {}
    sizes = []
    for k in range(c + 1):
        start = 0
        for i in range(k, -2, -1):
            j = k - 1 - i
            offsets[(i, j)] = start
            start += _aug_size(X, i) * _aug_size(Y, j)
        sizes.append(start)
    data = JoinData(X, Y, offsets)

    def piece(i: int, j: int) -> Tuple[np.ndarray, np.ndarray]:
        nx, ny = _aug_size(X, i), _aug_size(Y, j)
        return (np.repeat(np.arange(nx, dtype=INDEX_DTYPE), ny),
                np.tile(np.arange(ny, dtype=INDEX_DTYPE), nx))

    def locate(i: int, j: int, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return offsets[(i, j)] + xs * _aug_size(Y, j) + ys

    faces, degens = {}, {}
    for k in range(c + 1):
        face_rows = np.empty((k + 1, sizes[k]), dtype=INDEX_DTYPE)
        degen_rows = np.empty((k + 1, sizes[k]), dtype=INDEX_DTYPE) if k < c else None
        for i in range(k, -2, -1):
            j = k - 1 - i
            xs, ys = piece(i, j)
            lo, hi = offsets[(i, j)], offsets[(i, j)] + len(xs)
            for l in range(k + 1):
                if k >= 1:
                    if l <= i:
                        low_x = X.face(i, l)[xs] if i >= 1 else np.zeros_like(xs)
                        face_rows[l, lo:hi] = locate(i - 1, j, low_x, ys)
                    else:
                        low_y = Y.face(j, l - i - 1)[ys] if j >= 1 else np.zeros_like(ys)
                        face_rows[l, lo:hi] = locate(i, j - 1, xs, low_y)
                if degen_rows is not None:
                    if l <= i:
                        degen_rows[l, lo:hi] = locate(i + 1, j, X.degeneracy(i, l)[xs], ys)
                    else:
                        degen_rows[l, lo:hi] = locate(i, j + 1, xs, Y.degeneracy(j, l - i - 1)[ys])
        if k >= 1:
            faces[k] = face_rows
        if degen_rows is not None:
            degens[k] = degen_rows

    shaped = X.ambient_dim is not None and Y.ambient_dim is not None
    shift = (X.ambient_dim + 1) if shaped else 0

    def join_label(i: int, j: int, x: int, y: int) -> Hashable:
        if shaped:
            left = tuple(X.label(i, x)) if i >= 0 else ()
            right = tuple(v + shift for v in Y.label(j, y)) if j >= 0 else ()
            return left + right
        return (X.label(i, x) if i >= 0 else None, Y.label(j, y) if j >= 0 else None)

    labels = {}
    for k in range(c + 1):
        level = []
        for i in range(k, -2, -1):
            j = k - 1 - i
            for x in range(_aug_size(X, i)):
                for y in range(_aug_size(Y, j)):
                    level.append(join_label(i, j, x, y))
        labels[k] = level

    dx = -1 if X.size(0) == 0 else X.dimension
    dy = -1 if Y.size(0) == 0 else Y.dimension
    dim = None if dx is None or dy is None else max(dx + dy + 1, 0)
    J = TruncatedSSet(sizes, faces, degens, c, labels=labels, dimension=dim,
                      name=name or f"{X.name} * {Y.name}", vertex_labels=shaped)
    if shaped:
        J.ambient_dim = X.ambient_dim + Y.ambient_dim + 1
    J.join_data = data
    return J


def decalage(
    X: TruncatedSSet, variant: str = "dec"
):
    """
    Décalage of X.

    ``dec`` shifts down dropping the last face (dec X_n = X_{n+1}, cone point the
    last vertex); ``dec_prime`` drops the first face instead; ``total`` returns
    the augmented bisimplicial grid X_{i+j+1}.

    Args:
        X: Simplicial set
        variant: dec, dec_prime or total

    Returns:
        For dec/dec_prime: (dec X, pi: dec X -> X, kappa: dec X -> sk0 X_0);
        for total: AugBiSSet
    """
    if variant == "total":
        return total_decalage(X)
    if variant not in DECALAGE_VARIANTS:
        raise LevelOutOfRange(f"unknown décalage variant {variant!r}")
    last = variant == "dec"
    c = X.cosk_level
    sizes = [X.size(n + 1) for n in range(c + 1)]
    faces, degens = {}, {}
    for n in range(1, c + 1):
        rows = range(n + 1) if last else range(1, n + 2)
        faces[n] = np.stack([X.face(n + 1, i) for i in rows])
    for n in range(c):
        rows = range(n + 1) if last else range(1, n + 2)
        degens[n] = np.stack([X.degeneracy(n + 1, j) for j in rows])
    D = TruncatedSSet(
        sizes, faces, degens, c,
        labels={n: X.labels(n + 1) for n in range(c + 1)},
        dimension=None,
        name=f"{variant}({X.name})",
    )
    drop = (lambda n: n + 1) if last else (lambda n: 0)
    pi = SimplicialMap(D, X, [X.face(n + 1, drop(n)) for n in range(c + 1)], validate=False,
                       name=f"pi:{D.name}")
    sk0 = discrete(X.labels(0), name=f"sk0({X.name})")
    corner = (lambda n: n + 1) if last else (lambda n: 0)
    kappa = SimplicialMap(D, sk0, [X.vertices(n + 1)[:, corner(n)] for n in range(c + 1)],
                          validate=False, name=f"kappa:{D.name}")
    return D, pi, kappa


def total_decalage(X: TruncatedSSet, bound: Optional[int] = None) -> AugBiSSet:
    """
    Total décalage as an augmented bisimplicial set: Z_{i,j} = X_{i+j+1}.

    Horizontal maps are d_k, s_k for k <= i; vertical ones are d_{i+1+k}, s_{i+1+k}.
    """
    if bound is None:
        bound = X.cosk_level
    sizes, hfaces, vfaces, hdegens, vdegens, labels = {}, {}, {}, {}, {}, {}
    for (i, j) in grid_cells(bound):
        m = i + j + 1
        if m < 0:
            sizes[(i, j)] = 1
            continue
        sizes[(i, j)] = X.size(m)
        labels[(i, j)] = X.labels(m)
        if i >= 0:
            hfaces[(i, j)] = np.stack([_face_or_point(X, m, k) for k in range(i + 1)])
        if j >= 0:
            vfaces[(i, j)] = np.stack([_face_or_point(X, m, i + 1 + k) for k in range(j + 1)])
        if m + 1 <= bound:
            if i >= 0:
                hdegens[(i, j)] = np.stack([X.degeneracy(m, k) for k in range(i + 1)])
            if j >= 0:
                vdegens[(i, j)] = np.stack([X.degeneracy(m, i + 1 + k) for k in range(j + 1)])
    return AugBiSSet(bound, sizes, hfaces, vfaces, hdegens, vdegens, labels=labels,
                     name=f"Dec({X.name})")


def _face_or_point(X: TruncatedSSet, m: int, k: int) -> np.ndarray:
    if m == 0:
        return np.zeros(X.size(0), dtype=INDEX_DTYPE)
    return X.face(m, k)


def decalage_transpose(f: SimplicialMap, S: TruncatedSSet, D: TruncatedSSet) -> SimplicialMap:
    """
    Transpose f: S * Delta^0 -> X to S -> dec X, sending x in S_n to f(x, cone).

    Args:
        f: Map out of join(S, Delta^0)
        S: The left factor of the join
        D: dec X as returned by ``decalage(X, "dec")``

    Returns:
        SimplicialMap S -> dec X
    """
    data = f.source.join_data
    top = max(S.cosk_level, D.cosk_level)
    components = [
        [f(n + 1, data.index(n, 0, x, 0)) for x in range(S.size(n))] for n in range(top + 1)
    ]
    return SimplicialMap(S, D, components, validate=True, name=f"transpose({f.name})")
