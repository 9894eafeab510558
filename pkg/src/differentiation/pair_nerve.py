"""
Nerves of pair groupoids of pointed finite sets and their filtration by stages.

Simplices of P(S) at level m are the sequences in S^(m+1). The stage P^(k)(S)
is the subcomplex generated by the k-simplices whose 0-th vertex is the
basepoint; a sequence lies in it when it can be written with at most k + 1
entries, the first of which is the basepoint.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Hashable, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import BadParams
from src.extensions.filtrations import FiltrationCertificate, find_filtration
from src.simplicial.core import INDEX_DTYPE, SimplicialMap, TruncatedSSet
from src.simplicial.shapes import inclusion

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PointedFinSet:
    """A finite set with a chosen basepoint."""

    carrier: Tuple[Hashable, ...]
    basepoint: Hashable = "*"

    def __post_init__(self):
        if self.basepoint not in self.carrier:
            raise BadParams(f"basepoint {self.basepoint!r} is not in {list(self.carrier)}")
        if len(set(self.carrier)) != len(self.carrier):
            raise BadParams(f"carrier {list(self.carrier)} repeats an element")

    @classmethod
    def of_size(cls, n: int) -> "PointedFinSet":
        """{*, s1, ..., s(n-1)}"""
        if n < 1:
            raise BadParams(f"a pointed set needs at least one element, got {n}")
        return cls(("*",) + tuple(f"s{i}" for i in range(1, n)), "*")

    def __len__(self) -> int:
        return len(self.carrier)

    @property
    def base_index(self) -> int:
        return self.carrier.index(self.basepoint)


def runs(seq: Sequence[int]) -> int:
    """Number of maximal blocks of equal adjacent entries."""
    return 1 + sum(a != b for a, b in zip(seq, seq[1:]))


def first_repeat(seq: Sequence[int]) -> Optional[int]:
    """Least j with seq[j] == seq[j+1], so that seq = s_j of seq without entry j."""
    return next((j for j in range(len(seq) - 1) if seq[j] == seq[j + 1]), None)


def in_stage(seq: Sequence[int], base: int, k: Optional[int]) -> bool:
    return k is None or runs(seq) + (seq[0] != base) <= k + 1


def stage_sequences(S: PointedFinSet, m: int, k: Optional[int]) -> List[Tuple[int, ...]]:
    """Level m of P^(k)(S) (of P(S) when k is None) in lexicographic order."""
    base = S.base_index
    return [seq for seq in itertools.product(range(len(S)), repeat=m + 1) if in_stage(seq, base, k)]


def pair_nerve(S: PointedFinSet, k: Optional[int] = None, name: Optional[str] = None) -> TruncatedSSet:
    """
    P(S), or its stage P^(k)(S).

    Simplices are labelled by their sequences of element positions. The full
    nerve is stored to level 2 and determined by its vertices above; a stage
    has dimension k and is stored one level higher.

    Raises:
        BadParams: k is negative
    """
    if k is not None and k < 0:
        raise BadParams(f"stage index must be non-negative, got {k}")
    top = 2 if k is None else k + 1
    levels = [stage_sequences(S, m, k) for m in range(top + 1)]
    position = [{seq: x for x, seq in enumerate(level)} for level in levels]

    faces, degens = {}, {}
    for m in range(1, top + 1):
        faces[m] = np.array(
            [[position[m - 1][seq[:i] + seq[i + 1:]] for seq in levels[m]] for i in range(m + 1)],
            dtype=INDEX_DTYPE).reshape(m + 1, len(levels[m]))
    for m in range(top):
        degens[m] = np.array(
            [[position[m + 1][seq[:j + 1] + seq[j:]] for seq in levels[m]] for j in range(m + 1)],
            dtype=INDEX_DTYPE).reshape(m + 1, len(levels[m]))

    default = f"P({len(S)})" if k is None else f"P^({k})({len(S)})"
    P = TruncatedSSet(
        sizes=[len(level) for level in levels],
        faces=faces,
        degeneracies=degens,
        cosk_level=top,
        labels={m: level for m, level in enumerate(levels)},
        dimension=k,
        name=name or default,
        vertex_labels=True,
    )
    logger.debug(f"{P.name}: level sizes {P.sizes(top)}")
    return P


def stage_inclusion(S: PointedFinSet, k: int) -> SimplicialMap:
    """P^(k-1)(S) -> P^(k)(S) by matching sequences."""
    if k < 1:
        raise BadParams(f"stage inclusions start at k = 1, got {k}")
    return inclusion(pair_nerve(S, k - 1), pair_nerve(S, k))


def stage_certificate(S: PointedFinSet, k: int, budget: Optional[int] = None) -> FiltrationCertificate:
    """
    Certificate that P^(k-1)(S) -> P^(k)(S) is built by attaching horns Lambda^n_j with j < n.

    Raises:
        NotFound: no such filtration exists
    """
    cert = find_filtration(stage_inclusion(S, k), flavor="left", budget=budget)
    logger.info(f"P^({k - 1}) -> P^({k}) over {len(S)} points: {len(cert)} attachments")
    return cert
