"""Kan, acyclicity and weak-acyclicity conditions for objects and maps.

Every condition compares a space of simplices with a space of horn (or
boundary) data through a restriction map. In Sets a cover is a surjection,
so a condition holds when every fibre of the restriction is non-empty, and
holds uniquely when every fibre has exactly one element.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from src.errors import BadParams, LevelOutOfRange
from src.simplicial.core import SimplicialMap, TruncatedSSet, compatible_families

logger = logging.getLogger(__name__)

UNIQUE = "unique"
SURJECTIVE_ONLY = "surjective_only"
FAILS = "fails"

CONDITION_KINDS = ("Kan", "KanUnique", "Acyc", "AcycUnique", "WeakAcyc", "WeakAcycUnique")

Subject = Union[TruncatedSSet, SimplicialMap]
HornKey = Tuple


@dataclass(frozen=True)
class ConditionSpec:
    """One lifting condition: Kan(m, k), Acyc(m) or WeakAcyc(m), optionally unique."""

    kind: str
    m: int
    k: Optional[int] = None

    def __post_init__(self):
        if self.kind not in CONDITION_KINDS:
            raise BadParams(f"unknown condition kind {self.kind!r}")
        if self.kind.startswith("Kan"):
            if self.m < 1 or self.k is None or not 0 <= self.k <= self.m:
                raise BadParams(f"Kan({self.m},{self.k}) needs m >= 1 and 0 <= k <= m")
        else:
            if self.m < 0:
                raise BadParams(f"{self.base}({self.m}) needs m >= 0")
            if self.k is not None:
                raise BadParams(f"{self.base} takes no horn index")

    @property
    def base(self) -> str:
        return self.kind.replace("Unique", "")

    @property
    def unique(self) -> bool:
        return self.kind.endswith("Unique")

    def __str__(self) -> str:
        bang = "!" if self.unique else ""
        if self.k is None:
            return f"{self.base}{bang}({self.m})"
        return f"{self.base}{bang}({self.m},{self.k})"


@dataclass
class ConditionResult:
    """Outcome of a condition check with the fill-count histogram and a witness."""

    spec: ConditionSpec
    status: str
    histogram: Dict[int, int] = field(default_factory=dict)
    witness: Optional[Dict] = None

    @property
    def holds(self) -> bool:
        if self.spec.unique:
            return self.status == UNIQUE
        return self.status != FAILS

    @property
    def horns(self) -> int:
        return sum(self.histogram.values())


def status_from_counts(counts: Dict[HornKey, int]) -> Tuple[str, Optional[HornKey]]:
    """
    Classify a restriction map from its fibre sizes.

    Returns:
        (status, first horn with no filler or else with several fillers, or None)
    """
    empty = [key for key, n in counts.items() if n == 0]
    if empty:
        return FAILS, min(empty)
    several = [key for key, n in counts.items() if n > 1]
    if several:
        return SURJECTIVE_ONLY, min(several)
    return UNIQUE, None


def _preimages(f: SimplicialMap, m: int) -> Dict[int, List[int]]:
    out: Dict[int, List[int]] = {}
    for x, y in enumerate(f.component(m)):
        out.setdefault(int(y), []).append(x)
    return out


def horn_fill_counts(
    X: TruncatedSSet,
    m: int,
    positions: Sequence[int],
    p: Optional[SimplicialMap] = None,
    colour: Optional[int] = None,
) -> Dict[HornKey, int]:
    """
    Count fillers of every horn-shaped family in X (optionally over p: X -> Y).

    Args:
        X: Simplicial set
        m: Dimension of the simplex being filled
        positions: Faces present in the family (all of 0..m for a boundary)
        p: Optional map; horns are then pairs (family, y) with y in Y_m
        colour: With p, restrict to the single simplex y = colour of Y_m

    Returns:
        Horn key -> number of m-simplices restricting to it. Keys are
        (family,) for absolute checks and (family, y) for relative ones.
    """
    positions = sorted(positions)
    fillers: Counter = Counter()
    table = X.face_table(m) if m >= 1 else None
    for x in range(X.size(m)):
        family = tuple(int(table[i, x]) for i in positions) if table is not None else ()
        key = (family,) if p is None else (family, int(p(m, x)))
        fillers[key] += 1

    counts: Dict[HornKey, int] = {}
    if p is None:
        if m == 0:
            counts[((),)] = X.size(0)
            return counts
        for family in compatible_families(X, m, positions):
            counts[(family,)] = fillers.get((family,), 0)
        return counts

    Y = p.target
    ys: Iterable[int] = range(Y.size(m)) if colour is None else [colour]
    if m == 0:
        for y in ys:
            counts[((), y)] = fillers.get(((), y), 0)
        return counts
    below = _preimages(p, m - 1)
    y_table = Y.face_table(m)
    cache: Dict[Tuple[int, ...], List[Tuple[int, ...]]] = {}
    for y in ys:
        shadow = tuple(int(y_table[i, y]) for i in positions)
        if shadow not in cache:
            allowed = {i: below.get(v, []) for i, v in zip(positions, shadow)}
            cache[shadow] = compatible_families(X, m, positions, allowed)
        for family in cache[shadow]:
            counts[(family, y)] = fillers.get((family, y), 0)
    return counts


def weak_acyclic_counts(f: SimplicialMap, k: int) -> Dict[HornKey, int]:
    """
    Fibre sizes of Hom(D^k -> D^k * D^0, f) -> Hom(boundary -> boundary * D^0, f).

    A point of the source is (x in X_k, y in Y_{k+1}) with d_{k+1} y = f(x); it
    restricts to the boundary of x together with the faces d_0..d_k of y, which
    form a horn of Y missing the last face.

    Returns:
        (boundary family of X, horn family of Y) -> number of (x, y) over it
    """
    X, Y = f.source, f.target
    last = Y.face(k + 1, k + 1)
    y_faces = Y.face_table(k + 1)
    by_base: Dict[int, List[int]] = {}
    for y, v in enumerate(last):
        by_base.setdefault(int(v), []).append(y)

    fillers: Counter = Counter()
    x_table = X.face_table(k) if k >= 1 else None
    for x in range(X.size(k)):
        bx = tuple(int(x_table[i, x]) for i in range(k + 1)) if x_table is not None else ()
        for y in by_base.get(int(f(k, x)), []):
            fillers[(bx, tuple(int(y_faces[i, y]) for i in range(k + 1)))] += 1

    counts: Dict[HornKey, int] = {}
    horns = compatible_families(Y, k + 1, range(k + 1))
    if k == 0:
        for h in horns:
            counts[((), h)] = fillers.get(((), h), 0)
        return counts
    below = _preimages(f, k - 1)
    h_faces = Y.face_table(k)
    for h in horns:
        allowed = {i: below.get(int(h_faces[k, h[i]]), []) for i in range(k + 1)}
        for b in compatible_families(X, k, range(k + 1), allowed):
            counts[(b, h)] = fillers.get((b, h), 0)
    return counts


def _subject_level(subject: Subject) -> int:
    if isinstance(subject, SimplicialMap):
        return max(subject.source.cosk_level, subject.target.cosk_level)
    return subject.cosk_level


def check_condition(subject: Subject, spec: ConditionSpec) -> ConditionResult:
    """
    Check a lifting condition on a simplicial set or a map.

    Args:
        subject: TruncatedSSet (absolute form) or SimplicialMap (relative form)
        spec: The condition

    Returns:
        ConditionResult with status unique / surjective_only / fails and, when
        not unique, the lexicographically first bad horn as witness

    Raises:
        LevelOutOfRange: m beyond the stored level plus one, or WeakAcyc on an object
    """
    top = _subject_level(subject) + 1
    if spec.m > top:
        raise LevelOutOfRange(
            f"{spec} lies above level {top}; higher conditions are forced by coskeletality"
        )
    relative = isinstance(subject, SimplicialMap)

    if spec.base == "WeakAcyc":
        if not relative:
            raise LevelOutOfRange("weak acyclicity is a condition on maps")
        counts = weak_acyclic_counts(subject, spec.m)
    else:
        X = subject.source if relative else subject
        p = subject if relative else None
        if spec.base == "Kan":
            positions = [i for i in range(spec.m + 1) if i != spec.k]
        else:
            positions = list(range(spec.m + 1)) if spec.m >= 1 else []
        counts = horn_fill_counts(X, spec.m, positions, p)

    status, bad = status_from_counts(counts)
    histogram = dict(sorted(Counter(counts.values()).items()))
    witness = None
    if bad is not None:
        witness = {'horn': [list(part) if isinstance(part, tuple) else part for part in bad],
                   'fillers': counts[bad]}
    name = subject.name
    logger.debug(f"{name}: {spec} -> {status} over {len(counts)} horns")
    return ConditionResult(spec=spec, status=status, histogram=histogram, witness=witness)


def kan(subject: Subject, m: int, k: int, unique: bool = False) -> ConditionResult:
    return check_condition(subject, ConditionSpec("KanUnique" if unique else "Kan", m, k))


def acyc(subject: Subject, m: int, unique: bool = False) -> ConditionResult:
    return check_condition(subject, ConditionSpec("AcycUnique" if unique else "Acyc", m))
