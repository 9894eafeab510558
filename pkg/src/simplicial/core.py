"""Finite simplicial sets stored as coskeletal truncations.

A ``TruncatedSSet`` stores levels 0..c explicitly (degenerate simplices
included) as integer face and degeneracy tables. The simplicial set it
represents is cosk_c of that truncation: a simplex above level c is a
matching family of faces, and those levels are built on demand.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import (
    IdentityViolation,
    InvalidMap,
    LevelOutOfRange,
    NotComposable,
    PartialTable,
    TruncationTooLow,
)

logger = logging.getLogger(__name__)

INDEX_DTYPE = np.int64


@dataclass(frozen=True, order=True)
class SimplexId:
    """A simplex addressed by level and position in that level's canonical order."""

    level: int
    index: int


class TruncatedSSet:
    """A finite simplicial set given by its levels 0..c and coskeletal completion."""

    def __init__(
        self,
        sizes: Sequence[int],
        faces: Dict[int, np.ndarray],
        degeneracies: Dict[int, np.ndarray],
        cosk_level: int,
        labels: Optional[Dict[int, Sequence[Hashable]]] = None,
        dimension: Optional[int] = None,
        name: Optional[str] = None,
        vertex_labels: bool = False,
    ):
        """
        Args:
            sizes: Number of simplices at levels 0..cosk_level
            faces: m -> array of shape (m+1, sizes[m]) with d_i as row i
            degeneracies: m -> array of shape (m+1, sizes[m]) with s_j as row j,
                for 0 <= m < cosk_level
            cosk_level: Highest stored level c
            labels: Optional m -> list of hashable labels for stored levels
            dimension: Highest level holding nondegenerate simplices, if known
            name: Display name
            vertex_labels: Label simplices above c by their vertex sequence instead of
                their face tuple (for complexes whose simplices are determined by vertices)
        """
        self.vertex_labels = vertex_labels
        # Set on subcomplexes of a standard simplex: the dimension of that simplex
        self.ambient_dim: Optional[int] = None
        if len(sizes) != cosk_level + 1:
            raise PartialTable(f"expected {cosk_level + 1} levels, got {len(sizes)}")

        self.cosk_level = cosk_level
        self.dimension = dimension
        self.name = name or "X"

        self._sizes: List[int] = [int(n) for n in sizes]
        self._faces: List[Optional[np.ndarray]] = [None]
        self._degens: List[Optional[np.ndarray]] = []
        self._labels: List[Optional[List[Hashable]]] = []

        for m in range(1, cosk_level + 1):
            table = np.asarray(faces[m], dtype=INDEX_DTYPE).reshape(m + 1, self._sizes[m])
            self._faces.append(table)
        for m in range(cosk_level + 1):
            if m < cosk_level:
                table = np.asarray(degeneracies[m], dtype=INDEX_DTYPE)
                self._degens.append(table.reshape(m + 1, self._sizes[m]))
            else:
                self._degens.append(None)
            level_labels = None if labels is None else labels.get(m)
            self._labels.append(list(level_labels) if level_labels is not None else None)

        self._boundary_index: Dict[int, Dict[Tuple[int, ...], List[int]]] = {}
        self._face_index: Dict[Tuple[int, int], Dict[int, List[int]]] = {}
        self._label_index: Dict[int, Dict[Hashable, int]] = {}
        self._vertices: Dict[int, np.ndarray] = {}
        self._degenerate_by: Dict[int, np.ndarray] = {}

    def __repr__(self) -> str:
        return f"TruncatedSSet({self.name}, c={self.cosk_level}, sizes={self._sizes})"

    # Levels

    @property
    def materialized_levels(self) -> int:
        return len(self._sizes) - 1

    def size(self, m: int) -> int:
        if m < 0:
            raise LevelOutOfRange(f"level {m} is negative")
        self._extend_to(m)
        return self._sizes[m]

    def sizes(self, up_to: int) -> List[int]:
        return [self.size(m) for m in range(up_to + 1)]

    def face(self, m: int, i: int) -> np.ndarray:
        """Array of d_i on level m (values in level m-1)."""
        if m < 1 or not 0 <= i <= m:
            raise LevelOutOfRange(f"face d_{i} undefined on level {m}")
        self._extend_to(m)
        return self._faces[m][i]

    def degeneracy(self, m: int, j: int) -> np.ndarray:
        """Array of s_j on level m (values in level m+1)."""
        if m < 0 or not 0 <= j <= m:
            raise LevelOutOfRange(f"degeneracy s_{j} undefined on level {m}")
        self._extend_to(m + 1)
        return self._degens[m][j]

    def face_table(self, m: int) -> np.ndarray:
        self._extend_to(m)
        return self._faces[m]

    def degeneracy_table(self, m: int) -> np.ndarray:
        self._extend_to(m + 1)
        return self._degens[m]

    def boundary(self, m: int, x: int) -> Tuple[int, ...]:
        return tuple(int(v) for v in self.face_table(m)[:, x])

    def boundary_index(self, m: int) -> Dict[Tuple[int, ...], List[int]]:
        """Map from face tuples to the simplices of level m having them."""
        if m not in self._boundary_index:
            index: Dict[Tuple[int, ...], List[int]] = {}
            table = self.face_table(m)
            for x in range(self.size(m)):
                index.setdefault(tuple(int(v) for v in table[:, x]), []).append(x)
            self._boundary_index[m] = index
        return self._boundary_index[m]

    def face_index(self, m: int, i: int) -> Dict[int, List[int]]:
        """Map from a value of d_i to the simplices of level m having it."""
        key = (m, i)
        if key not in self._face_index:
            index: Dict[int, List[int]] = {}
            for x, v in enumerate(self.face(m, i)):
                index.setdefault(int(v), []).append(x)
            self._face_index[key] = index
        return self._face_index[key]

    def lookup(self, m: int, faces: Sequence[int]) -> List[int]:
        """Simplices of level m with the given faces (unique above the stored levels)."""
        return self.boundary_index(m).get(tuple(int(v) for v in faces), [])

    # Labels

    def label(self, m: int, x: int) -> Hashable:
        self._extend_to(m)
        level_labels = self._labels[m]
        if level_labels is not None:
            return level_labels[x]
        if m > self.cosk_level:
            if self.vertex_labels:
                return tuple(_unwrap(self.label(0, int(v))) for v in self.vertices(m)[x])
            return self.boundary(m, x)
        return x

    def labels(self, m: int) -> List[Hashable]:
        return [self.label(m, x) for x in range(self.size(m))]

    def has_labels(self, m: int) -> bool:
        return m <= self.cosk_level and self._labels[m] is not None

    def index_of(self, m: int, label: Hashable) -> int:
        if m not in self._label_index:
            self._label_index[m] = {lab: x for x, lab in enumerate(self.labels(m))}
        try:
            return self._label_index[m][label]
        except KeyError:
            raise LevelOutOfRange(f"no simplex labelled {label!r} at level {m} of {self.name}")

    # Derived tables

    def vertices(self, m: int) -> np.ndarray:
        """Array of shape (size(m), m+1) listing the vertices of each simplex."""
        if m not in self._vertices:
            if m == 0:
                table = np.arange(self.size(0), dtype=INDEX_DTYPE).reshape(-1, 1)
            else:
                lower = self.vertices(m - 1)
                table = np.empty((self.size(m), m + 1), dtype=INDEX_DTYPE)
                table[:, :m] = lower[self.face(m, m)]
                table[:, m] = lower[self.face(m, 0)][:, m - 1]
            self._vertices[m] = table
        return self._vertices[m]

    def degenerate_by(self, m: int) -> np.ndarray:
        """First j with x = s_j d_j x for each simplex of level m, or -1."""
        if m not in self._degenerate_by:
            out = np.full(self.size(m), -1, dtype=INDEX_DTYPE)
            if m > 0:
                ids = np.arange(self.size(m), dtype=INDEX_DTYPE)
                for j in reversed(range(m)):
                    hit = self.degeneracy(m - 1, j)[self.face(m, j)] == ids
                    out[hit] = j
            self._degenerate_by[m] = out
        return self._degenerate_by[m]

    def nondegenerate_mask(self, m: int) -> np.ndarray:
        return self.degenerate_by(m) < 0

    def nondegenerate(self, m: int) -> List[int]:
        return [int(x) for x in np.flatnonzero(self.nondegenerate_mask(m))]

    def is_degenerate(self, m: int, x: int) -> bool:
        return bool(self.degenerate_by(m)[x] >= 0)

    def apply_operator(self, m: int, x: int, seq: Sequence[int]) -> int:
        """
        Act on x in level m by the weakly monotone map [k] -> [m] given by seq.

        Args:
            m: Level of x
            x: Simplex index
            seq: Values theta(0) <= ... <= theta(k) in [0, m]

        Returns:
            Index of theta^* x at level k
        """
        seq = list(seq)
        if any(b < a for a, b in zip(seq, seq[1:])) or not all(0 <= v <= m for v in seq):
            raise LevelOutOfRange(f"{seq} is not a weakly monotone map into [{m}]")
        image = sorted(set(seq))
        level, current = m, x
        for i in reversed(range(m + 1)):
            if i not in image:
                current = int(self.face(level, i)[current])
                level -= 1
        positions = [image.index(v) for v in seq]
        for t in range(1, len(positions)):
            if positions[t] == positions[t - 1]:
                current = int(self.degeneracy(level, t - 1)[current])
                level += 1
        return current

    def nondegenerate_core(self, m: int, x: int) -> Tuple[int, int]:
        """Strip degeneracies: returns (level, index) of the nondegenerate simplex under x."""
        level, current = m, x
        while level > 0:
            j = int(self.degenerate_by(level)[current])
            if j < 0:
                break
            current = int(self.face(level, j)[current])
            level -= 1
        return level, current

    # Lazy coskeletal levels

    def _extend_to(self, m: int) -> None:
        while len(self._sizes) <= m:
            level = len(self._sizes)
            families = compatible_families(self, level, range(level + 1))
            n = len(families)
            table = np.array(families, dtype=INDEX_DTYPE).reshape(n, level + 1).T.copy()
            self._sizes.append(n)
            self._faces.append(table)
            self._degens.append(None)
            self._labels.append(None)
            self._degens[level - 1] = self._degeneracies_into(level)
            logger.debug(f"{self.name}: materialised level {level} with {n} simplices")

    def _degeneracies_into(self, level: int) -> np.ndarray:
        below = level - 1
        n = self._sizes[below]
        ids = np.arange(n, dtype=INDEX_DTYPE)
        out = np.empty((level, n), dtype=INDEX_DTYPE)
        index = self.boundary_index(level)
        for j in range(level):
            columns = []
            for i in range(level + 1):
                if i < j:
                    columns.append(self._degens[below - 1][j - 1][self._faces[below][i]])
                elif i in (j, j + 1):
                    columns.append(ids)
                else:
                    columns.append(self._degens[below - 1][j][self._faces[below][i - 1]])
            rows = np.stack(columns, axis=1)
            for x in range(n):
                hits = index.get(tuple(int(v) for v in rows[x]))
                if not hits:
                    raise PartialTable(
                        f"{self.name}: s_{j} of simplex {x} at level {below} is not a matching family"
                    )
                out[j, x] = hits[0]
        return out

    def truncated_copy(self, n: int, name: Optional[str] = None) -> "TruncatedSSet":
        """The stored levels 0..n re-read as an n-coskeletal simplicial set."""
        self._extend_to(n)
        return TruncatedSSet(
            sizes=self._sizes[: n + 1],
            faces={m: self._faces[m] for m in range(1, n + 1)},
            degeneracies={m: self.degeneracy_table(m) for m in range(n)},
            cosk_level=n,
            labels={m: self.labels(m) for m in range(n + 1)},
            name=name or f"cosk_{n}({self.name})",
            vertex_labels=self.vertex_labels,
        )


def compatible_families(
    X: TruncatedSSet,
    m: int,
    positions: Iterable[int],
    allowed: Optional[Dict[int, Iterable[int]]] = None,
) -> List[Tuple[int, ...]]:
    """
    Enumerate families (y_p) of (m-1)-simplices with d_a y_b = d_{b-1} y_a for a < b.

    With all positions 0..m these are the maps from the boundary of the m-simplex;
    leaving one position out gives the horn maps.

    Args:
        X: Simplicial set
        m: Dimension of the ambient simplex (m >= 1)
        positions: Face positions present in the family
        allowed: Optional per-position sets of admissible simplices

    Returns:
        Families as tuples ordered by position, in lexicographic order
    """
    if m < 1:
        raise LevelOutOfRange(f"families of faces need m >= 1, got {m}")
    positions = sorted(positions)
    allowed = allowed or {}
    n_prev = X.size(m - 1)
    pools: List[Optional[set]] = [
        set(int(v) for v in allowed[p]) if allowed.get(p) is not None else None for p in positions
    ]

    if m == 1 or len(positions) <= 1:
        ranges = [
            sorted(pool) if pool is not None else range(n_prev) for pool in pools
        ]
        return [tuple(t) for t in itertools.product(*ranges)]

    faces = X.face_table(m - 1)
    results: List[Tuple[int, ...]] = []
    chosen: List[int] = []

    def extend(t: int) -> None:
        if t == len(positions):
            results.append(tuple(chosen))
            return
        b = positions[t]
        if t == 0:
            candidates: Iterable[int] = range(n_prev)
        else:
            a0 = positions[0]
            key = int(faces[b - 1][chosen[0]])
            candidates = X.face_index(m - 1, a0).get(key, ())
        pool = pools[t]
        for y in candidates:
            if pool is not None and y not in pool:
                continue
            if all(
                faces[positions[s]][y] == faces[b - 1][chosen[s]] for s in range(1, t)
            ):
                chosen.append(y)
                extend(t + 1)
                chosen.pop()

    extend(0)
    return results


def make_truncated(
    levels: Sequence,
    face_tables: Dict[int, Sequence[Sequence[int]]],
    degeneracy_tables: Dict[int, Sequence[Sequence[int]]],
    cosk_level: int,
    name: Optional[str] = None,
    dimension: Optional[int] = None,
) -> TruncatedSSet:
    """
    Build a TruncatedSSet and verify every simplicial identity on the stored levels.

    Args:
        levels: Per level either a size or a list of labels, for levels 0..cosk_level
        face_tables: m -> rows d_0..d_m, each a list over level m
        degeneracy_tables: m -> rows s_0..s_m, each a list over level m (m < cosk_level)
        cosk_level: Highest stored level
        name: Display name
        dimension: Highest level with nondegenerate simplices, if known

    Returns:
        Validated TruncatedSSet

    Raises:
        PartialTable: missing rows, wrong lengths or out-of-range entries
        IdentityViolation: first failing identity
    """
    if len(levels) != cosk_level + 1:
        raise PartialTable(f"expected levels 0..{cosk_level}, got {len(levels)} levels")
    sizes: List[int] = []
    labels: Dict[int, List[Hashable]] = {}
    for m, level in enumerate(levels):
        if isinstance(level, (int, np.integer)):
            sizes.append(int(level))
        else:
            labels[m] = [_hashable(v) for v in level]
            sizes.append(len(labels[m]))

    faces: Dict[int, np.ndarray] = {}
    degens: Dict[int, np.ndarray] = {}
    for m in range(1, cosk_level + 1):
        faces[m] = _checked_table(face_tables, m, m + 1, sizes[m], sizes[m - 1], "face")
    for m in range(cosk_level):
        degens[m] = _checked_table(degeneracy_tables, m, m + 1, sizes[m], sizes[m + 1], "degeneracy")

    check_identities(sizes, faces, degens, cosk_level)
    X = TruncatedSSet(sizes, faces, degens, cosk_level, labels=labels or None,
                      dimension=dimension, name=name)
    logger.debug(f"validated {X}")
    return X


def _unwrap(label):
    if isinstance(label, tuple) and len(label) == 1:
        return label[0]
    return label


def _hashable(value):
    if isinstance(value, list):
        return tuple(_hashable(v) for v in value)
    return value


def _checked_table(tables, m: int, rows: int, length: int, bound: int, kind: str) -> np.ndarray:
    if m not in tables:
        raise PartialTable(f"missing {kind} table for level {m}")
    raw = tables[m]
    if len(raw) != rows or any(len(row) != length for row in raw):
        raise PartialTable(f"{kind} table at level {m} must have {rows} rows of length {length}")
    table = np.asarray(raw, dtype=INDEX_DTYPE).reshape(rows, length)
    if table.size and (table.min() < 0 or table.max() >= bound):
        raise PartialTable(f"{kind} table at level {m} points outside its target level")
    return table


def check_identities(
    sizes: Sequence[int],
    faces: Dict[int, np.ndarray],
    degens: Dict[int, np.ndarray],
    cosk_level: int,
) -> None:
    """
    Verify the five simplicial identity families on stored levels.

    Raises:
        IdentityViolation: naming the family, level, indices and first failing simplex
    """

    def fail(family: str, m: int, i: int, j: int, mismatch: np.ndarray) -> None:
        bad = np.flatnonzero(mismatch)
        if bad.size:
            raise IdentityViolation(family, m, i, j, int(bad[0]))

    for m in range(2, cosk_level + 1):
        for j in range(m + 1):
            for i in range(j):
                left = faces[m - 1][i][faces[m][j]]
                right = faces[m - 1][j - 1][faces[m][i]]
                fail("d_i d_j = d_{j-1} d_i", m, i, j, left != right)

    for m in range(cosk_level):
        ids = np.arange(sizes[m], dtype=INDEX_DTYPE)
        for j in range(m + 1):
            s_j = degens[m][j]
            for i in range(m + 2):
                left = faces[m + 1][i][s_j]
                if i < j:
                    right = degens[m - 1][j - 1][faces[m][i]]
                    fail("d_i s_j = s_{j-1} d_i", m + 1, i, j, left != right)
                elif i in (j, j + 1):
                    fail("d_j s_j = d_{j+1} s_j = id", m + 1, i, j, left != ids)
                else:
                    right = degens[m - 1][j][faces[m][i - 1]]
                    fail("d_i s_j = s_j d_{i-1}", m + 1, i, j, left != right)

    for m in range(cosk_level - 1):
        for j in range(m + 1):
            for i in range(j + 1):
                left = degens[m + 1][i][degens[m][j]]
                right = degens[m + 1][j + 1][degens[m][i]]
                fail("s_i s_j = s_{j+1} s_i", m + 2, i, j, left != right)


class SimplicialMap:
    """A simplicial map given by level components, completed on demand."""

    def __init__(
        self,
        source: TruncatedSSet,
        target: TruncatedSSet,
        components: Sequence[Sequence[int]],
        validate: bool = True,
        name: Optional[str] = None,
    ):
        self.source = source
        self.target = target
        self.name = name or f"{source.name}->{target.name}"
        self._components: List[np.ndarray] = [
            np.asarray(c, dtype=INDEX_DTYPE).reshape(-1) for c in components
        ]
        if not self._components:
            raise InvalidMap("a simplicial map needs at least its vertex component")
        if validate:
            self.validate(max(len(self._components) - 1, source.cosk_level, target.cosk_level))

    def __repr__(self) -> str:
        return f"SimplicialMap({self.name})"

    def component(self, m: int) -> np.ndarray:
        while len(self._components) <= m:
            self._components.append(self._derive_level(len(self._components)))
        return self._components[m]

    def __call__(self, m: int, x: int) -> int:
        return int(self.component(m)[x])

    def _derive_level(self, m: int) -> np.ndarray:
        src, tgt = self.source, self.target
        lower = self.component(m - 1)
        n = src.size(m)
        if m > tgt.cosk_level:
            out = np.empty(n, dtype=INDEX_DTYPE)
            rows = np.stack([lower[src.face(m, i)] for i in range(m + 1)], axis=1)
            index = tgt.boundary_index(m)
            for x in range(n):
                hits = index.get(tuple(int(v) for v in rows[x]))
                if not hits:
                    raise InvalidMap(f"{self.name}: image of simplex {x} at level {m} is not a simplex")
                out[x] = hits[0]
            return out
        witness = src.degenerate_by(m)
        if (witness < 0).any():
            x = int(np.flatnonzero(witness < 0)[0])
            raise TruncationTooLow(
                f"{self.name}: nondegenerate simplex {x} at level {m} has no assigned image"
            )
        out = np.empty(n, dtype=INDEX_DTYPE)
        for j in range(m):
            hit = witness == j
            out[hit] = tgt.degeneracy(m - 1, j)[lower[src.face(m, j)[hit]]]
        return out

    def validate(self, up_to: int) -> None:
        """Check lengths, ranges and commutation with faces and degeneracies up to a level."""
        src, tgt = self.source, self.target
        for m in range(up_to + 1):
            comp = self.component(m)
            if len(comp) != src.size(m):
                raise InvalidMap(f"{self.name}: component {m} has length {len(comp)}, "
                                 f"expected {src.size(m)}")
            if comp.size and (comp.min() < 0 or comp.max() >= tgt.size(m)):
                raise InvalidMap(f"{self.name}: component {m} points outside the target")
            if m > 0:
                lower = self.component(m - 1)
                for i in range(m + 1):
                    bad = np.flatnonzero(tgt.face(m, i)[comp] != lower[src.face(m, i)])
                    if bad.size:
                        raise InvalidMap(f"{self.name}: d_{i} fails on simplex {int(bad[0])} "
                                         f"at level {m}", witness={'level': m, 'simplex': int(bad[0])})
                for j in range(m):
                    bad = np.flatnonzero(tgt.degeneracy(m - 1, j)[lower] != comp[src.degeneracy(m - 1, j)])
                    if bad.size:
                        raise InvalidMap(f"{self.name}: s_{j} fails on simplex {int(bad[0])} "
                                         f"at level {m - 1}")

    def is_injective(self, up_to: int) -> bool:
        return all(len(np.unique(self.component(m))) == self.source.size(m) for m in range(up_to + 1))

    def is_bijective(self, up_to: int) -> bool:
        return all(
            self.source.size(m) == self.target.size(m) and self.is_injective_at(m)
            for m in range(up_to + 1)
        )

    def is_injective_at(self, m: int) -> bool:
        return len(np.unique(self.component(m))) == self.source.size(m)

    def is_surjective_at(self, m: int) -> bool:
        return len(np.unique(self.component(m))) == self.target.size(m)

    def components(self, up_to: int) -> List[List[int]]:
        return [[int(v) for v in self.component(m)] for m in range(up_to + 1)]

    def agrees_with(self, other: "SimplicialMap", up_to: int) -> bool:
        return all(np.array_equal(self.component(m), other.component(m)) for m in range(up_to + 1))

    def then(self, after: "SimplicialMap") -> "SimplicialMap":
        """The composite after . self."""
        return compose_maps(self, after)


def identity_map(X: TruncatedSSet) -> SimplicialMap:
    return SimplicialMap(
        X, X, [np.arange(X.size(m), dtype=INDEX_DTYPE) for m in range(X.cosk_level + 1)],
        validate=False, name=f"id_{X.name}",
    )


def compose_maps(f: SimplicialMap, g: SimplicialMap) -> SimplicialMap:
    """Composite g . f of f: X -> Y and g: Y -> Z."""
    if f.target is not g.source:
        raise NotComposable(f"cannot compose {f.name} with {g.name}")
    top = max(f.source.cosk_level, f.target.cosk_level, g.target.cosk_level)
    return SimplicialMap(
        f.source, g.target,
        [g.component(m)[f.component(m)] for m in range(top + 1)],
        validate=False, name=f"{g.name}.{f.name}",
    )


def map_from_function(
    source: TruncatedSSet,
    target: TruncatedSSet,
    rule,
    up_to: Optional[int] = None,
    name: Optional[str] = None,
    validate: bool = True,
) -> SimplicialMap:
    """
    Build a map from a rule (m, x) -> target index evaluated on levels 0..up_to.

    Args:
        source: Source simplicial set
        target: Target simplicial set
        rule: Callable giving the image of simplex x at level m
        up_to: Highest level evaluated; defaults to both stored levels
        name: Display name
        validate: Check commutation with the structure maps

    Returns:
        SimplicialMap
    """
    if up_to is None:
        up_to = max(source.cosk_level, target.cosk_level)
    components = [[rule(m, x) for x in range(source.size(m))] for m in range(up_to + 1)]
    return SimplicialMap(source, target, components, validate=validate, name=name)
