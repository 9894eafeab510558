"""
Staged computation of Hom(P(S), X).

An element of stage k is a map P^(k)(S) -> X. Over a fixed element of stage
k-1 it is given by one k-simplex g(s) of X for every s in S^k, attached to
the generator (*, s), subject to three kinds of conditions:

* the faces d_1..d_k of g(s) are the values of stage k-1 on the faces of (*, s);
* d_0 g(s) is the value of stage k-1 on s whenever s already lies in P^(k-1)(S);
* g(s) = s_j of the value on (*, s) with entry j removed whenever (*, s) repeats
  entry j, for every such j (the first repeat suffices).

The conditions on different s are independent, so a stage is a product of
candidate sets over each element of the previous one.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import pandas as pd

from src.config import config_value
from src.differentiation.pair_nerve import PointedFinSet, first_repeat, pair_nerve, stage_sequences
from src.errors import BadParams, StageMissing
from src.simplicial.core import TruncatedSSet
from src.simplicial.hom import hom_set

logger = logging.getLogger(__name__)

Seq = Tuple[int, ...]


@dataclass
class JetStage:
    """G^(k)(S): maps P^(k)(S) -> X with their projection to the previous stage."""

    k: int
    S: PointedFinSet
    X: TruncatedSSet
    values: List[Tuple[int, ...]]
    parents: List[int]
    tables: List[Dict[Seq, int]] = field(repr=False)
    previous: Optional["JetStage"] = field(default=None, repr=False)
    degeneracies_imposed: bool = True

    def __len__(self) -> int:
        return len(self.values)

    @property
    def generators(self) -> List[Seq]:
        """The sequences s of S^k, in the order of ``values``."""
        return list(itertools.product(range(len(self.S)), repeat=self.k)) if self.k else [()]

    @property
    def surjective(self) -> bool:
        if self.previous is None:
            return True
        return set(self.parents) == set(range(len(self.previous)))

    @property
    def bijective(self) -> bool:
        return self.surjective and len(self.parents) == len(set(self.parents)) and (
            self.previous is None or len(self) == len(self.previous))

    def value(self, e: int, seq: Seq) -> int:
        """The simplex of X element e assigns to a sequence of P^(k)(S)."""
        return self.tables[e][tuple(seq)]


def _forced(X: TruncatedSSet, table: Dict[Seq, int], sigma: Seq) -> Optional[int]:
    j = first_repeat(sigma)
    if j is None:
        return None
    return int(X.degeneracy(len(sigma) - 2, j)[table[sigma[:j] + sigma[j + 1:]]])


def _candidates(X: TruncatedSSet, table: Dict[Seq, int], sigma: Seq, impose: bool) -> List[int]:
    k = len(sigma) - 1
    known = {i: table[sigma[:i] + sigma[i + 1:]] for i in range(1, k + 1)}
    if sigma[1:] in table:
        known[0] = table[sigma[1:]]

    def fits(x: int) -> bool:
        return all(int(X.face(k, i)[x]) == v for i, v in known.items())

    forced = _forced(X, table, sigma) if impose else None
    if forced is not None:
        return [forced] if fits(forced) else []
    first = min(known)
    return [x for x in X.face_index(k, first).get(known[first], []) if fits(x)]


def _extend(X: TruncatedSSet, table: Dict[Seq, int], base: int, gens: List[Seq], choice: Tuple[int, ...],
            level: List[Seq]) -> Dict[Seq, int]:
    k = len(gens[0])
    out = dict(table)
    for s, x in zip(gens, choice):
        out[(base,) + s] = x
        if s not in out:
            out[s] = int(X.face(k, 0)[x])
    for seq in level:
        if seq not in out:
            out[seq] = _forced(X, out, seq)
    return out


def jet_stage(
    X: TruncatedSSet,
    S: PointedFinSet,
    k: int,
    previous: Optional[JetStage] = None,
    impose_degeneracies: bool = True,
) -> JetStage:
    """
    Compute stage k over stage k-1.

    Args:
        X: Higher groupoid nerve
        S: Pointed finite set
        k: Stage index; stage 0 is X_0
        previous: Stage k-1 (required for k >= 1)
        impose_degeneracies: Force g(s) on degenerate generators; without it
            those values are only constrained by their faces

    Raises:
        BadParams: k is negative
        StageMissing: stage k-1 was not supplied, or belongs to another X or S
    """
    if k < 0:
        raise BadParams(f"stage index must be non-negative, got {k}")
    base = S.base_index
    if k == 0:
        values = [(x,) for x in range(X.size(0))]
        tables = [{(base,): x} for x in range(X.size(0))]
        return JetStage(0, S, X, values, [], tables, None, impose_degeneracies)
    if previous is None or previous.k != k - 1:
        raise StageMissing(f"stage {k} needs stage {k - 1}",
                           witness={'stage': k, 'given': None if previous is None else previous.k})
    if previous.S != S or previous.X is not X:
        raise StageMissing(f"stage {k - 1} was computed for another pointed set or target")

    gens = list(itertools.product(range(len(S)), repeat=k))
    level = stage_sequences(S, k, k)
    values: List[Tuple[int, ...]] = []
    parents: List[int] = []
    tables: List[Dict[Seq, int]] = []
    for parent, table in enumerate(previous.tables):
        options = [_candidates(X, table, (base,) + s, impose_degeneracies) for s in gens]
        for choice in itertools.product(*options):
            values.append(tuple(int(x) for x in choice))
            parents.append(parent)
            tables.append(_extend(X, table, base, gens, choice, level))
    stage = JetStage(k, S, X, values, parents, tables, previous, impose_degeneracies)
    logger.info(f"G^({k})({len(S)} points) into {X.name}: {len(stage)} elements over {len(previous)}")
    return stage


def reimpose_degeneracies(stage: JetStage) -> JetStage:
    """Keep the elements whose values on degenerate generators are the forced degeneracies."""
    if stage.k == 0 or stage.degeneracies_imposed:
        return stage
    base = stage.S.base_index
    gens = stage.generators
    keep = []
    for e, parent in enumerate(stage.parents):
        table = stage.previous.tables[parent]
        if all(_forced(stage.X, table, (base,) + s) in (None, x) for s, x in zip(gens, stage.values[e])):
            keep.append(e)
    return JetStage(stage.k, stage.S, stage.X, [stage.values[e] for e in keep],
                    [stage.parents[e] for e in keep], [stage.tables[e] for e in keep],
                    stage.previous, True)


@dataclass
class JetResult:
    """Stages up to stabilisation, with the comparison against Hom(P(S), X)."""

    stages: List[JetStage]
    stabilized_at: Optional[int]
    oracle_size: Optional[int] = None
    bijection: Optional[List[int]] = None

    @property
    def jet(self) -> Optional[JetStage]:
        return None if self.stabilized_at is None else self.stages[self.stabilized_at]

    @property
    def verified(self) -> bool:
        return self.bijection is not None

    def to_frame(self) -> pd.DataFrame:
        rows = [{'k': s.k, 'elements': len(s), 'surjective': s.surjective, 'bijective': s.bijective}
                for s in self.stages]
        return pd.DataFrame(rows, columns=['k', 'elements', 'surjective', 'bijective'])


def oracle_bijection(stage: JetStage) -> Tuple[int, Optional[List[int]]]:
    """
    Match the elements of a stage with the maps P(S) -> X by restriction.

    Returns:
        (number of maps P(S) -> X, element -> map index, or None when the match is not one-to-one)
    """
    P = pair_nerve(stage.S)
    maps = hom_set(P, stage.X)
    if not stage.tables:
        return len(maps), ([] if not maps else None)
    domain = sorted(stage.tables[0], key=lambda seq: (len(seq), seq))
    element_of = {tuple(table[seq] for seq in domain): e for e, table in enumerate(stage.tables)}
    image: List[Optional[int]] = [None] * len(stage)
    for t, h in enumerate(maps):
        key = tuple(h(len(seq) - 1, P.index_of(len(seq) - 1, seq)) for seq in domain)
        e = element_of.get(key)
        if e is None or image[e] is not None:
            return len(maps), None
        image[e] = t
    if any(v is None for v in image):
        return len(maps), None
    return len(maps), image


def discrete_jet(
    X: TruncatedSSet,
    S: PointedFinSet,
    max_stage: Optional[int] = None,
    check_oracle: bool = True,
) -> JetResult:
    """
    Compute stages until two consecutive projections are bijective.

    The stage before those two is the jet. With ``check_oracle`` its elements
    are matched one-to-one with Hom(P(S), X).

    Args:
        X: n-groupoid nerve
        S: Pointed finite set
        max_stage: Highest stage computed; defaults to the configured ``jet.max_stage``
        check_oracle: Build the bijection with Hom(P(S), X)
    """
    max_stage = max_stage if max_stage is not None else int(config_value('jet.max_stage', 4))
    stages = [jet_stage(X, S, 0)]
    streak = 0
    while streak < 2 and stages[-1].k < max_stage:
        stages.append(jet_stage(X, S, stages[-1].k + 1, stages[-1]))
        streak = streak + 1 if stages[-1].bijective else 0
    stabilized = stages[-1].k - 2 if streak == 2 else None
    result = JetResult(stages, stabilized)
    if stabilized is None:
        logger.warning(f"jets of {len(S)} points into {X.name} did not stabilise by stage {max_stage}")
        return result
    if check_oracle:
        result.oracle_size, result.bijection = oracle_bijection(stages[stabilized])
    logger.info(f"jets of {len(S)} points into {X.name}: stabilised at k = {stabilized}, "
                f"{len(stages[stabilized])} elements, oracle {result.oracle_size}")
    return result
