"""Collapsible-extension certificates for inclusions of finite simplicial sets.

An inclusion A -> B is collapsible when B is reached from A by finitely many
pushouts along horn inclusions (or boundary inclusions). Attaching the horn
Lambda^n_k -> Delta^n at a simplex x of B adds x and its face d_k x, which
must both be new while every other face is already present; attaching a
boundary adds x alone.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, List, Optional, Sequence, Set, Tuple

from src.config import config_value
from src.errors import BadParams, BudgetExceeded, FlavorMismatch, NotASubcomplex, NotFound, ReplayMismatch
from src.simplicial.core import SimplicialMap, TruncatedSSet
from src.simplicial.shapes import generators_of, inclusion, simplex_subcomplex

logger = logging.getLogger(__name__)

FLAVORS = ("all", "inner", "left", "right", "boundary", "special")

Stage = FrozenSet[Tuple[int, int]]


@dataclass(frozen=True)
class FiltrationStep:
    """One attachment: the simplex x of level n along the horn k (None for a boundary)."""

    n: int
    k: Optional[int]
    simplex: int
    attaching: Tuple[int, ...]
    label: Hashable = None


@dataclass
class FiltrationCertificate:
    flavor: str
    steps: List[FiltrationStep] = field(default_factory=list)
    source: str = ""
    target: str = ""
    colours: Optional[List[int]] = None

    def __len__(self) -> int:
        return len(self.steps)

    def to_dict(self) -> Dict:
        return {
            'flavor': self.flavor,
            'source': self.source,
            'target': self.target,
            'colours': self.colours,
            'steps': [{'n': s.n, 'k': s.k, 'simplex': s.simplex, 'attaching': list(s.attaching),
                       'label': list(s.label) if isinstance(s.label, tuple) else s.label}
                      for s in self.steps],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "FiltrationCertificate":
        steps = [FiltrationStep(int(s['n']), None if s['k'] is None else int(s['k']), int(s['simplex']),
                                tuple(int(v) for v in s['attaching']),
                                tuple(s['label']) if isinstance(s.get('label'), list) else s.get('label'))
                 for s in data.get('steps', [])]
        return cls(data['flavor'], steps, data.get('source', ""), data.get('target', ""), data.get('colours'))


def horn_allowed(flavor: str, n: int, k: int, monochrome: bool = False) -> bool:
    """Whether Lambda^n_k is an admissible horn for the flavor."""
    if flavor == "all":
        return True
    if flavor == "inner":
        return 0 < k < n
    if flavor == "left":
        return 0 <= k < n
    if flavor == "right":
        return 0 < k <= n
    if flavor == "special":
        return 0 < k < n or monochrome
    return False


def _check_flavor(flavor: str) -> None:
    if flavor not in FLAVORS:
        raise BadParams(f"unknown flavor {flavor!r}; expected one of {FLAVORS}")


def _top(B: TruncatedSSet) -> int:
    return B.dimension if B.dimension is not None else B.cosk_level


def _initial_stage(i: SimplicialMap) -> Set[Tuple[int, int]]:
    A, B = i.source, i.target
    top = _top(B)
    stage: Set[Tuple[int, int]] = set()
    for m in range(top + 1):
        if A.size(m) and not i.is_injective_at(m):
            raise NotASubcomplex(f"{i.name} is not injective at level {m}")
        for a in A.nondegenerate(m):
            stage.add((m, i(m, a)))
    return stage


class _Attacher:
    """Legality of attachments into a fixed ambient B."""

    def __init__(self, B: TruncatedSSet, flavor: str, colours: Optional[Sequence[int]] = None):
        self.B = B
        self.flavor = flavor
        self.colours = list(colours) if colours is not None else None
        self.top = _top(B)
        self.universe: Set[Tuple[int, int]] = {(m, x) for m in range(self.top + 1) for x in B.nondegenerate(m)}

    def present(self, stage, m: int, y: int) -> bool:
        return self.B.nondegenerate_core(m, y) in stage

    def monochrome(self, n: int, x: int) -> bool:
        if self.colours is None:
            return False
        return len({self.colours[int(v)] for v in self.B.vertices(n)[x]}) == 1

    def legal(self, stage, step: FiltrationStep) -> Optional[str]:
        """None when the step may be applied to the stage, else the reason it may not."""
        n, k, x = step.n, step.k, step.simplex
        if (n, x) not in self.universe:
            return f"simplex {x} at level {n} is not a nondegenerate simplex of {self.B.name}"
        if (n, x) in stage:
            return f"simplex {x} at level {n} is already present"
        faces = self.B.boundary(n, x) if n else ()
        if tuple(step.attaching) != faces:
            return f"attaching map does not match the faces of simplex {x}"
        if k is None:
            if self.flavor != "boundary":
                return f"boundary attachments are not {self.flavor} steps"
            missing = [t for t, y in enumerate(faces) if not self.present(stage, n - 1, y)]
            return f"faces {missing} are not present" if missing else None
        if n < 1 or not 0 <= k <= n:
            return f"Lambda^{n}_{k} is not a horn"
        if not horn_allowed(self.flavor, n, k, self.monochrome(n, x)):
            return f"Lambda^{n}_{k} is not a {self.flavor} horn"
        new_face = faces[k]
        if self.B.is_degenerate(n - 1, new_face) or (n - 1, new_face) in stage:
            return f"face d_{k} of simplex {x} is not a new nondegenerate simplex"
        missing = [t for t, y in enumerate(faces) if t != k and not self.present(stage, n - 1, y)]
        if missing:
            return f"faces {missing} are not present"
        return None

    def apply(self, stage, step: FiltrationStep) -> Stage:
        added = {(step.n, step.simplex)}
        if step.k is not None:
            added.add((step.n - 1, step.attaching[step.k]))
        return frozenset(stage | added)

    def moves(self, stage) -> List[FiltrationStep]:
        out = []
        for n, x in sorted(self.universe - stage):
            faces = self.B.boundary(n, x) if n else ()
            label = self.B.label(n, x)
            if self.flavor == "boundary":
                candidates: List[Optional[int]] = [None]
            else:
                candidates = list(range(n + 1)) if n else []
            for k in candidates:
                step = FiltrationStep(n, k, x, faces, label)
                if self.legal(stage, step) is None:
                    out.append(step)
        return out


def find_filtration(
    i: SimplicialMap,
    flavor: str = "all",
    colours: Optional[Sequence[int]] = None,
    budget: Optional[int] = None,
) -> FiltrationCertificate:
    """
    Search for a collapsible filtration of A -> B.

    Attachments are tried lowest dimension first, then by simplex index and
    horn index; dead-end stages are remembered, so an exhausted search proves
    that no filtration of the flavor exists.

    Args:
        i: Levelwise injective map A -> B with B of finite dimension
        flavor: all, inner, left, right, boundary or special
        colours: Vertex colours of B, needed for the special flavor (inner or one-colour horns)
        budget: Node budget; defaults to the configured ``budget``

    Returns:
        FiltrationCertificate

    Raises:
        NotASubcomplex: i is not injective
        NotFound: the search space was exhausted
        BudgetExceeded: the budget ran out first
    """
    _check_flavor(flavor)
    if flavor == "special" and colours is None:
        raise BadParams("the special flavor needs vertex colours")
    budget = budget if budget is not None else int(config_value('budget', 1_000_000))
    B = i.target
    attacher = _Attacher(B, flavor, colours)
    start = frozenset(_initial_stage(i))
    dead: Set[Stage] = set()
    expansions = 0
    steps: List[FiltrationStep] = []

    def search(stage: Stage) -> bool:
        nonlocal expansions
        if stage == attacher.universe:
            return True
        if stage in dead:
            return False
        for step in attacher.moves(stage):
            expansions += 1
            if expansions > budget:
                raise BudgetExceeded(partial={'steps': len(steps), 'explored': expansions,
                                              'dead_stages': len(dead)})
            steps.append(step)
            if search(attacher.apply(stage, step)):
                return True
            steps.pop()
        dead.add(stage)
        return False

    if not search(start):
        raise NotFound(f"no {flavor} filtration of {i.source.name} -> {B.name}",
                       witness={'exhaustive': True, 'explored': expansions, 'dead_stages': len(dead)})
    logger.debug(f"{flavor} filtration of {i.source.name} -> {B.name}: {len(steps)} steps, "
                 f"{expansions} expansions")
    return FiltrationCertificate(flavor, list(steps), i.source.name, B.name,
                                 list(colours) if colours is not None else None)


def verify_certificate(
    cert: FiltrationCertificate,
    i: SimplicialMap,
    flavor: Optional[str] = None,
) -> Tuple[bool, List[Stage]]:
    """
    Replay a certificate from the image of A.

    Args:
        cert: Certificate to replay
        i: The inclusion A -> B it certifies
        flavor: Check the steps against this flavor instead of the certificate's own

    Returns:
        (final stage equals B, list of stages from A to the last step)

    Raises:
        ReplayMismatch: a step cannot be applied
    """
    flavor = flavor or cert.flavor
    _check_flavor(flavor)
    attacher = _Attacher(i.target, flavor, cert.colours)
    stage: Stage = frozenset(_initial_stage(i))
    stages = [stage]
    for t, step in enumerate(cert.steps):
        reason = attacher.legal(stage, step)
        if reason is not None:
            raise ReplayMismatch(t, f"step {t}: {reason}")
        stage = attacher.apply(stage, step)
        stages.append(stage)
    return stage == attacher.universe, stages


# (flavor of f, flavor of g) -> flavor of the join pushout
JOIN_FLAVORS = {
    ("right", "boundary"): "inner",
    ("inner", "boundary"): "inner",
    ("left", "boundary"): "left",
    ("boundary", "left"): "inner",
    ("boundary", "inner"): "inner",
    ("boundary", "right"): "right",
    ("boundary", "boundary"): "boundary",
}


@dataclass
class JoinPushout:
    """The inclusion A*Y u B*X -> B*Y with its certificate."""

    union: TruncatedSSet
    join: TruncatedSSet
    inclusion: SimplicialMap
    certificate: FiltrationCertificate


def _join_generators(P: TruncatedSSet, Q: TruncatedSSet, shift: int) -> List[Tuple[int, ...]]:
    left = generators_of(P) + [()]
    right = [tuple(v + shift for v in g) for g in generators_of(Q)] + [()]
    return [a + b for a in left for b in right if a or b]


def join_collapsibility(
    f: SimplicialMap,
    g: SimplicialMap,
    flavors: Tuple[str, str],
    budget: Optional[int] = None,
) -> JoinPushout:
    """
    Certificate for A*Y u_{A*X} B*X -> B*Y from certificates of f: A -> B and g: X -> Y.

    Each pair of attachments (x of f, y of g) attaches the joined simplex x*y;
    a horn of f at index k stays at k, a horn of g at index k moves to
    dim(x) + 1 + k. Pairs run with the horn side varying fastest.

    Args:
        f: Inclusion of subcomplexes of one standard simplex
        g: Inclusion of subcomplexes of another standard simplex
        flavors: Flavors of f and g

    Returns:
        JoinPushout with a verified certificate

    Raises:
        FlavorMismatch: the flavor pair is not one the join pushout preserves
        BadParams: the inputs are not subcomplexes of standard simplices
    """
    flavors = tuple(flavors)
    if flavors not in JOIN_FLAVORS:
        raise FlavorMismatch(f"join pushout of a {flavors[0]} and a {flavors[1]} extension is not covered",
                             witness={'flavors': list(flavors)})
    result_flavor = JOIN_FLAVORS[flavors]
    A, B, X, Y = f.source, f.target, g.source, g.target
    if None in (A.ambient_dim, B.ambient_dim, X.ambient_dim, Y.ambient_dim):
        raise BadParams("join_collapsibility needs subcomplexes of standard simplices")
    p, q = B.ambient_dim, Y.ambient_dim
    shift = p + 1
    total = simplex_subcomplex(p + q + 1, _join_generators(B, Y, shift), name=f"{B.name} * {Y.name}")
    union = simplex_subcomplex(
        p + q + 1,
        _join_generators(A, Y, shift) + _join_generators(B, X, shift),
        name=f"{A.name}*{Y.name} u {B.name}*{X.name}",
    )
    i = inclusion(union, total)

    cf = find_filtration(f, flavors[0], budget=budget)
    cg = find_filtration(g, flavors[1], budget=budget)
    pairs = []
    if flavors[0] == "boundary":
        pairs = [(sf, sg) for sf in cf.steps for sg in cg.steps]
    else:
        pairs = [(sf, sg) for sg in cg.steps for sf in cf.steps]

    steps = []
    for sf, sg in pairs:
        label = tuple(sf.label) + tuple(v + shift for v in sg.label)
        level = sf.n + sg.n + 1
        x = total.index_of(level, label)
        if sf.k is not None:
            k = sf.k
        elif sg.k is not None:
            k = sf.n + 1 + sg.k
        else:
            k = None
        steps.append(FiltrationStep(level, k, x, total.boundary(level, x), label))
    cert = FiltrationCertificate(result_flavor, steps, union.name, total.name)
    complete, _ = verify_certificate(cert, i)
    if not complete:
        raise ReplayMismatch(len(steps), f"{result_flavor} steps do not exhaust {total.name}")
    logger.info(f"join pushout {union.name} -> {total.name}: {len(steps)} {result_flavor} steps")
    return JoinPushout(union, total, i, cert)
