"""Functors between finite categories, natural transformations and weak pullbacks."""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from src.errors import IncoherentInput, NotComposable
from src.groupoids.categories import FinCategory, FinGroupoid
from src.kan.profile import classify_map
from src.simplicial.core import SimplicialMap

logger = logging.getLogger(__name__)


class Functor:
    """A functor given on object and arrow indices."""

    def __init__(
        self,
        source: FinCategory,
        target: FinCategory,
        on_objects: Sequence[int],
        on_arrows: Sequence[int],
        name: Optional[str] = None,
        validate: bool = True,
    ):
        self.source = source
        self.target = target
        self.on_objects = [int(v) for v in on_objects]
        self.on_arrows = [int(v) for v in on_arrows]
        self.name = name or f"{source.name}->{target.name}"
        self._nerve_map: Optional[SimplicialMap] = None
        if validate:
            self.validate()

    def __repr__(self) -> str:
        return f"Functor({self.name})"

    def obj(self, a: int) -> int:
        return self.on_objects[a]

    def arr(self, f: int) -> int:
        return self.on_arrows[f]

    def validate(self) -> None:
        """
        Raises:
            IncoherentInput: sources, targets, units or composites not preserved
        """
        C, D = self.source, self.target
        if len(self.on_objects) != C.n_objects or len(self.on_arrows) != C.n_arrows:
            raise IncoherentInput(f"{self.name}: object/arrow assignments have the wrong lengths")
        for f in range(C.n_arrows):
            Ff = self.arr(f)
            if D.source[Ff] != self.obj(C.source[f]) or D.target[Ff] != self.obj(C.target[f]):
                raise IncoherentInput(f"{self.name}: arrow {f} lands between the wrong objects",
                                      witness={'arrow': f})
        for a in range(C.n_objects):
            if self.arr(C.unit[a]) != D.unit[self.obj(a)]:
                raise IncoherentInput(f"{self.name}: unit of object {a} not preserved", witness={'object': a})
        for (g, f), h in C.compose.items():
            if self.arr(h) != D.comp(self.arr(g), self.arr(f)):
                raise IncoherentInput(f"{self.name}: composite of ({g}, {f}) not preserved",
                                      witness={'pair': [g, f]})

    def then(self, after: "Functor") -> "Functor":
        return compose_functors(self, after)

    def nerve_map(self) -> SimplicialMap:
        """N(F): N(C) -> N(D) on the shared nerves of source and target."""
        if self._nerve_map is None:
            NC, ND = self.source.nerve(), self.target.nerve()
            level2 = [ND.lookup(2, [self.arr(int(NC.face(2, i)[x])) for i in range(3)])[0]
                      for x in range(NC.size(2))]
            self._nerve_map = SimplicialMap(NC, ND, [self.on_objects, self.on_arrows, level2],
                                            name=f"N({self.name})")
        return self._nerve_map


def identity_functor(C: FinCategory) -> Functor:
    return Functor(C, C, range(C.n_objects), range(C.n_arrows), name=f"id_{C.name}", validate=False)


def compose_functors(F: Functor, G: Functor) -> Functor:
    """G after F."""
    if F.target is not G.source:
        raise NotComposable(f"{F.name} and {G.name} do not compose")
    return Functor(F.source, G.target, [G.obj(F.obj(a)) for a in range(F.source.n_objects)],
                   [G.arr(F.arr(f)) for f in range(F.source.n_arrows)],
                   name=f"{G.name}.{F.name}", validate=False)


def constant_functor(C: FinCategory, D: FinCategory, d: int) -> Functor:
    return Functor(C, D, [d] * C.n_objects, [D.unit[d]] * C.n_arrows, name=f"const_{D.objects[d]}")


def natural_transformations(F: Functor, G: Functor) -> List[List[int]]:
    """
    All natural transformations F => G, as component lists indexed by objects.

    Naturality: G(f) after alpha_{s f} equals alpha_{t f} after F(f).
    """
    C, D = F.source, F.target
    if G.source is not C or G.target is not D:
        raise NotComposable(f"{F.name} and {G.name} are not parallel")
    results: List[List[int]] = []
    chosen: List[int] = []

    def natural_so_far() -> bool:
        a = len(chosen) - 1
        for f in range(C.n_arrows):
            s, t = C.source[f], C.target[f]
            if max(s, t) != a:
                continue
            if D.comp(G.arr(f), chosen[s]) != D.comp(chosen[t], F.arr(f)):
                return False
        return True

    def extend(a: int) -> None:
        if a == C.n_objects:
            results.append(list(chosen))
            return
        for alpha in D.hom(F.obj(a), G.obj(a)):
            chosen.append(alpha)
            if natural_so_far():
                extend(a + 1)
            chosen.pop()

    extend(0)
    return results


def is_essentially_surjective(F: Functor) -> bool:
    D = F.target
    image = set(F.on_objects)
    return all(any(D.hom(x, y) for x in image) for y in range(D.n_objects))


def is_fully_faithful(F: Functor) -> bool:
    C, D = F.source, F.target
    for a in range(C.n_objects):
        for b in range(C.n_objects):
            mapped = sorted(F.arr(f) for f in C.hom(a, b))
            if mapped != sorted(D.hom(F.obj(a), F.obj(b))):
                return False
    return True


def classify_functor(F: Functor, check_nerve: bool = True) -> Dict[str, Optional[bool]]:
    """
    Flags of a functor between finite groupoids.

    Returns:
        Dict with essentially_surjective, fully_faithful, weak_equivalence,
        surjective_on_objects and nerve_acyclic (acyclic fibration of nerves)
    """
    es = is_essentially_surjective(F)
    ff = is_fully_faithful(F)
    flags: Dict[str, Optional[bool]] = {
        'essentially_surjective': es,
        'fully_faithful': ff,
        'weak_equivalence': es and ff,
        'surjective_on_objects': set(F.on_objects) == set(range(F.target.n_objects)),
        'nerve_acyclic': None,
    }
    if check_nerve:
        flags['nerve_acyclic'] = classify_map(F.nerve_map(), weak=False).is_acyclic
    logger.debug(f"{F.name}: {flags}")
    return flags


@dataclass
class WeakPullback:
    """The comma groupoid (f | g) with its projections and comparison transformation."""

    groupoid: FinGroupoid
    left: Functor
    right: Functor
    comparison: List[int]


def weak_pullback(f: Functor, g: Functor) -> WeakPullback:
    """
    Weak pullback of f: G -> K and g: H -> K.

    Objects are triples (x, a, y) with a: f(x) -> g(y) in K. An arrow
    (b, c): (x1, a1, y1) -> (x2, a2, y2) pairs b: x1 -> x2 and c: y1 -> y2 with
    g(c) a1 = a2 f(b). The comparison sends (x, a, y) to a: f p1 => g p2.
    """
    G, H, K = f.source, g.source, f.target
    if g.target is not K:
        raise NotComposable(f"{f.name} and {g.name} have different targets")
    objects = [(x, a, y) for x in range(G.n_objects) for y in range(H.n_objects)
               for a in K.hom(f.obj(x), g.obj(y))]
    obj_pos = {o: t for t, o in enumerate(objects)}
    arrows = []
    for s, (x1, a1, y1) in enumerate(objects):
        for t, (x2, a2, y2) in enumerate(objects):
            for b in G.hom(x1, x2):
                for c in H.hom(y1, y2):
                    if K.comp(g.arr(c), a1) == K.comp(a2, f.arr(b)):
                        arrows.append((s, t, b, c))
    arr_pos = {(b, c, s): i for i, (s, _, b, c) in enumerate(arrows)}
    compose = {}
    for i, (s2, t2, b2, c2) in enumerate(arrows):
        for j, (s1, t1, b1, c1) in enumerate(arrows):
            if t1 == s2:
                compose[(i, j)] = arr_pos[(G.comp(b2, b1), H.comp(c2, c1), s1)]
    unit = [arr_pos[(G.unit[x], H.unit[y], obj_pos[(x, a, y)])] for (x, a, y) in objects]
    inverse = [arr_pos[(G.inv(b), H.inv(c), t)] for (s, t, b, c) in arrows]
    W = FinGroupoid(
        [(G.objects[x], K.arrows[a], H.objects[y]) for x, a, y in objects],
        [(G.arrows[b], H.arrows[c]) for _, _, b, c in arrows],
        [s for s, _, _, _ in arrows],
        [t for _, t, _, _ in arrows],
        unit, compose, inverse=inverse,
        name=f"({f.name} | {g.name})",
    )
    p1 = Functor(W, G, [x for x, _, _ in objects], [b for _, _, b, _ in arrows], name="pr1")
    p2 = Functor(W, H, [y for _, _, y in objects], [c for _, _, _, c in arrows], name="pr2")
    return WeakPullback(W, p1, p2, [a for _, a, _ in objects])


def isomorphic_groupoids(G: FinCategory, H: FinCategory) -> bool:
    """Whether two finite categories are isomorphic, decided on their nerves."""
    from src.simplicial.iso import are_isomorphic

    if (G.n_objects, G.n_arrows) != (H.n_objects, H.n_arrows):
        return False
    return are_isomorphic(G.nerve(), H.nerve())
