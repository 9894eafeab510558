"""Standard shapes: simplices, horns, boundaries, spines and other subcomplexes of a simplex."""

import itertools
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from src.errors import BadParams, LevelOutOfRange, NonInclusion
from src.simplicial.core import INDEX_DTYPE, SimplicialMap, TruncatedSSet

SHAPE_KINDS = ("simplex", "horn", "boundary", "spine", "interval_point")


def _down_closure(generators: Iterable[Iterable[int]]) -> Set[FrozenSet[int]]:
    family: Set[FrozenSet[int]] = set()
    for gen in generators:
        gen = sorted(set(gen))
        for r in range(1, len(gen) + 1):
            for sub in itertools.combinations(gen, r):
                family.add(frozenset(sub))
    return family


def simplex_subcomplex(
    n: int,
    generators: Iterable[Iterable[int]],
    name: Optional[str] = None,
) -> TruncatedSSet:
    """
    Subcomplex of the standard n-simplex generated by faces spanned by vertex sets.

    Simplices at level m are weakly monotone sequences of length m+1 whose image
    lies in the generated family, labelled by the sequence itself and ordered
    lexicographically.

    Args:
        n: Dimension of the ambient simplex
        generators: Vertex sets spanning the generating faces
        name: Display name

    Returns:
        TruncatedSSet stored up to one level above its dimension
    """
    family = _down_closure(generators)
    dim = max((len(s) for s in family), default=0) - 1
    c = dim + 1
    levels: List[List[Tuple[int, ...]]] = []
    for m in range(c + 1):
        levels.append([
            seq for seq in itertools.combinations_with_replacement(range(n + 1), m + 1)
            if frozenset(seq) in family
        ])
    position = [{seq: x for x, seq in enumerate(level)} for level in levels]

    faces = {}
    degens = {}
    for m in range(1, c + 1):
        faces[m] = np.array(
            [[position[m - 1][seq[:i] + seq[i + 1:]] for seq in levels[m]] for i in range(m + 1)],
            dtype=INDEX_DTYPE,
        ).reshape(m + 1, len(levels[m]))
    for m in range(c):
        degens[m] = np.array(
            [[position[m + 1][seq[:j + 1] + seq[j:]] for seq in levels[m]] for j in range(m + 1)],
            dtype=INDEX_DTYPE,
        ).reshape(m + 1, len(levels[m]))

    X = TruncatedSSet(
        sizes=[len(level) for level in levels],
        faces=faces,
        degeneracies=degens,
        cosk_level=c,
        labels={m: level for m, level in enumerate(levels)},
        dimension=max(dim, 0) if family else 0,
        name=name or f"sub(Delta^{n})",
        vertex_labels=True,
    )
    X.ambient_dim = n
    return X


def empty_sset(name: str = "empty") -> TruncatedSSet:
    """The empty simplicial set."""
    return TruncatedSSet([0], {}, {}, 0, labels={0: []}, dimension=0, name=name)


def simplex(n: int) -> TruncatedSSet:
    if n < 0:
        raise BadParams(f"simplex dimension must be >= 0, got {n}")
    return simplex_subcomplex(n, [range(n + 1)], name=f"Delta^{n}")


def horn(n: int, k: int) -> TruncatedSSet:
    """The horn of the n-simplex missing the interior and the face opposite vertex k."""
    if n < 1 or not 0 <= k <= n:
        raise BadParams(f"horn({n},{k}) needs n >= 1 and 0 <= k <= n")
    gens = [[v for v in range(n + 1) if v != i] for i in range(n + 1) if i != k]
    return simplex_subcomplex(n, gens, name=f"Lambda^{n}_{k}")


def boundary(n: int) -> TruncatedSSet:
    if n < 1:
        raise BadParams(f"boundary({n}) needs n >= 1")
    gens = [[v for v in range(n + 1) if v != i] for i in range(n + 1)]
    return simplex_subcomplex(n, gens, name=f"dDelta^{n}")


def spine(n: int) -> TruncatedSSet:
    """The union of the edges {i, i+1} of the n-simplex."""
    if n < 0:
        raise BadParams(f"spine({n}) needs n >= 0")
    gens = [[i, i + 1] for i in range(n)] or [[0]]
    return simplex_subcomplex(n, gens, name=f"Sp^{n}")


def interval_point(i: int) -> TruncatedSSet:
    """The vertex i of the interval, as a subcomplex of the 1-simplex."""
    if i not in (0, 1):
        raise BadParams(f"interval_point({i}) needs i in {{0, 1}}")
    return simplex_subcomplex(1, [[i]], name=f"Delta^0{{{i}}}")


def face_of_simplex(n: int, vertices: Sequence[int]) -> TruncatedSSet:
    """The face of the n-simplex spanned by the given vertices."""
    if not vertices or any(not 0 <= v <= n for v in vertices):
        raise BadParams(f"face {list(vertices)} is not a face of Delta^{n}")
    return simplex_subcomplex(n, [vertices], name=f"Delta{{{','.join(map(str, sorted(vertices)))}}}")


def shape(kind: str, *params: int) -> TruncatedSSet:
    """
    Build a standard shape.

    Args:
        kind: One of simplex, horn, boundary, spine, interval_point
        params: (n,) for simplex/boundary/spine, (n, k) for horn, (i,) for interval_point

    Returns:
        TruncatedSSet labelled by weakly monotone vertex sequences
    """
    builders = {
        'simplex': (simplex, 1),
        'horn': (horn, 2),
        'boundary': (boundary, 1),
        'spine': (spine, 1),
        'interval_point': (interval_point, 1),
    }
    if kind not in builders:
        raise BadParams(f"unknown shape kind {kind!r}; expected one of {SHAPE_KINDS}")
    builder, arity = builders[kind]
    if len(params) != arity:
        raise BadParams(f"shape {kind} takes {arity} parameter(s), got {len(params)}")
    return builder(*params)


def inclusion(A: TruncatedSSet, B: TruncatedSSet, up_to: Optional[int] = None) -> SimplicialMap:
    """
    The inclusion of one labelled complex into another, matching labels levelwise.

    Raises:
        NonInclusion: a label of A is missing from B
    """
    if up_to is None:
        up_to = A.cosk_level
    components = []
    for m in range(up_to + 1):
        try:
            components.append([B.index_of(m, lab) for lab in A.labels(m)])
        except LevelOutOfRange as exc:
            raise NonInclusion(f"{A.name} is not labelled inside {B.name} at level {m}: {exc}")
    return SimplicialMap(A, B, components, name=f"{A.name}->{B.name}")


def standard_library(max_n: int = 3) -> List[TruncatedSSet]:
    """Shapes used for adjunction and law checks: simplices, horns, boundaries and spines."""
    shapes = [simplex(n) for n in range(max_n + 1)]
    for n in range(1, max_n + 1):
        shapes.append(boundary(n))
        shapes.extend(horn(n, k) for k in range(n + 1))
    shapes.extend(spine(n) for n in range(2, max_n + 1))
    return shapes


def point_boundary() -> TruncatedSSet:
    """The empty boundary of the 0-simplex, kept as a (vacuous) subcomplex of it."""
    return simplex_subcomplex(0, [], name="dDelta^0")


def generators_of(X: TruncatedSSet) -> List[Tuple[int, ...]]:
    """Vertex sets of the nondegenerate simplices of a subcomplex of a standard simplex."""
    top = X.dimension if X.dimension is not None else X.cosk_level
    gens = []
    for m in range(top + 1):
        for x in X.nondegenerate(m):
            gens.append(tuple(X.label(m, x)))
    return gens


def union_of_shapes(*parts: TruncatedSSet, name: Optional[str] = None) -> TruncatedSSet:
    """Union of subcomplexes of the same standard simplex."""
    ambient = {p.ambient_dim for p in parts}
    if len(ambient) != 1 or None in ambient:
        raise BadParams("union_of_shapes needs subcomplexes of one common simplex")
    n = ambient.pop()
    gens = [g for p in parts for g in generators_of(p)]
    return simplex_subcomplex(n, gens, name=name or " u ".join(p.name for p in parts))
