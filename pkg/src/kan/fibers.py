"""Fibres of Kan fibrations and propagation of unique horn fillers."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from src.errors import BadParams, HypothesesNotMet, NotAFibration
from src.kan.conditions import (
    FAILS,
    UNIQUE,
    ConditionSpec,
    Subject,
    check_condition,
)
from src.kan.profile import classify_map
from src.simplicial.constructions import subcomplex
from src.simplicial.core import SimplicialMap, TruncatedSSet, compatible_families

logger = logging.getLogger(__name__)

HORN_RANGES = {
    # flavor -> (hypothesis indices at level n, propagated indices at level n + 1)
    'inner': (lambda n: range(1, n), lambda n: range(1, n + 1)),
    'right': (lambda n: range(1, n + 1), lambda n: range(1, n + 2)),
    'left': (lambda n: range(0, n), lambda n: range(0, n + 1)),
}


def fiber(f: SimplicialMap, base: int, check: bool = True) -> TruncatedSSet:
    """
    Fibre of f: X -> Y over a vertex: the simplices of X mapping to a totally degenerate simplex on it.

    Args:
        f: Kan fibration
        base: Vertex of Y
        check: Verify that f is a Kan fibration first

    Returns:
        TruncatedSSet stored up to the larger stored level of X and Y

    Raises:
        NotAFibration: f fails a Kan condition in the scanned window
    """
    if check:
        profile = classify_map(f, weak=False)
        if not profile.is_kan:
            (_, m, k), result = next(
                (key, r) for key, r in sorted(profile.results.items(), key=lambda kv: (kv[0][1], kv[0][2] or 0))
                if key[0] == "Kan" and r.status == FAILS
            )
            raise NotAFibration(f"{f.name} fails Kan({m},{k})",
                                witness={'m': m, 'k': k, 'horn': result.witness})
    X, Y = f.source, f.target
    top = max(X.cosk_level, Y.cosk_level)
    keep = {}
    for m in range(top + 1):
        point = Y.apply_operator(0, base, [0] * (m + 1))
        keep[m] = [x for x in range(X.size(m)) if f(m, x) == point]
    F, _ = subcomplex(X, keep, name=f"Fib({f.name})@{base}")
    logger.debug(f"fibre of {f.name} over {base}: sizes {F.sizes(top)}")
    return F


@dataclass
class PropagationReport:
    """Outcome of propagating Kan!(n+1, j0) to every admissible j."""

    n: int
    flavor: str
    statuses: Dict[int, str] = field(default_factory=dict)
    bijections: Dict[Tuple[int, int], Dict[Tuple, Tuple]] = field(default_factory=dict)

    @property
    def all_hold(self) -> bool:
        return all(status == UNIQUE for status in self.statuses.values())

    @property
    def consistent(self) -> bool:
        """Either every propagated condition holds uniquely or none does."""
        values = set(status == UNIQUE for status in self.statuses.values())
        return len(values) <= 1


def _horn_families(subject: Subject, m: int, missing: int) -> Dict[Tuple, Tuple]:
    """Horn families keyed by themselves; relative horns carry their image simplex."""
    positions = [i for i in range(m + 1) if i != missing]
    if isinstance(subject, TruncatedSSet):
        return {(fam, None): fam for fam in compatible_families(subject, m, positions)}
    X, Y = subject.source, subject.target
    below: Dict[int, List[int]] = {}
    for x, y in enumerate(subject.component(m - 1)):
        below.setdefault(int(y), []).append(x)
    out = {}
    for y in range(Y.size(m)):
        allowed = {i: below.get(int(Y.face(m, i)[y]), []) for i in positions}
        for fam in compatible_families(X, m, positions, allowed):
            out[(fam, y)] = fam
    return out


def horn_bijection(subject: Subject, m: int, i: int, j: int) -> Dict[Tuple, Tuple]:
    """
    The bijection Hom(horn missing i) -> Hom(horn missing j) through the shared faces.

    Both horns contain every face other than i and j; a horn missing i is
    sent to the horn missing j with the same shared faces.

    Returns:
        (family, image) -> (family, image), keyed with families ordered by position

    Raises:
        HypothesesNotMet: the shared faces do not determine the missing face
    """
    def shared(key: Tuple, missing: int) -> Tuple:
        fam, y = key
        positions = [p for p in range(m + 1) if p != missing]
        kept = tuple(v for p, v in zip(positions, fam) if p not in (i, j))
        return kept, y

    target: Dict[Tuple, List[Tuple]] = {}
    for key in _horn_families(subject, m, j):
        target.setdefault(shared(key, j), []).append(key)
    mapping = {}
    for key in _horn_families(subject, m, i):
        hits = target.get(shared(key, i), [])
        if len(hits) != 1:
            raise HypothesesNotMet(
                f"horns missing {i} and {j} at level {m} do not correspond one-to-one",
                witness={'horn': list(key[0]), 'matches': len(hits)},
            )
        mapping[key] = hits[0]
    if len(mapping) != sum(len(v) for v in target.values()):
        raise HypothesesNotMet(f"horns missing {j} at level {m} are not all reached from {i}")
    return mapping


def unique_kan_propagation(subject: Subject, n: int, flavor: str = 'inner') -> PropagationReport:
    """
    Check that unique filling at level n+1 for one horn index implies it for all.

    Args:
        subject: Simplicial set or map
        n: Level at which Kan!(n, k) is assumed
        flavor: inner (0<k<n), right (0<k<=n) or left (0<=k<n)

    Returns:
        PropagationReport with the Kan!(n+1, j) statuses and horn-space bijections

    Raises:
        HypothesesNotMet: some Kan!(n, k) of the flavor fails
    """
    if flavor not in HORN_RANGES:
        raise BadParams(f"unknown flavor {flavor!r}")
    if n < 1:
        raise BadParams(f"propagation needs n >= 1, got {n}")
    hypothesis, propagated = HORN_RANGES[flavor]
    failing = []
    for k in hypothesis(n):
        result = check_condition(subject, ConditionSpec("KanUnique", n, k))
        if result.status != UNIQUE:
            failing.append({'m': n, 'k': k, 'status': result.status, 'horn': result.witness})
    if failing:
        names = ", ".join(f"Kan!({c['m']},{c['k']})" for c in failing)
        raise HypothesesNotMet(f"{subject.name} fails {names}", witness={'failing': failing})

    report = PropagationReport(n=n, flavor=flavor)
    indices = list(propagated(n))
    for j in indices:
        report.statuses[j] = check_condition(subject, ConditionSpec("KanUnique", n + 1, j)).status
    for a, b in zip(indices, indices[1:]):
        report.bijections[(a, b)] = horn_bijection(subject, n + 1, a, b)
    logger.info(f"{subject.name}: Kan!({n + 1}, j) statuses {report.statuses}")
    return report
