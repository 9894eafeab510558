"""Finite categories, groupoids and groups with explicitly materialised composition."""

import itertools
import logging
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import IncoherentInput

logger = logging.getLogger(__name__)


class FinCategory:
    """
    A finite category on indexed objects and arrows.

    Composition is a total function on the materialised set of composable
    pairs: ``compose[(g, f)]`` is g after f, defined exactly when the source of
    g is the target of f.
    """

    def __init__(
        self,
        objects: Sequence[Hashable],
        arrows: Sequence[Hashable],
        source: Sequence[int],
        target: Sequence[int],
        unit: Sequence[int],
        compose: Dict[Tuple[int, int], int],
        name: Optional[str] = None,
        validate: bool = True,
    ):
        self.objects = list(objects)
        self.arrows = list(arrows)
        self.source = [int(v) for v in source]
        self.target = [int(v) for v in target]
        self.unit = [int(v) for v in unit]
        self.compose = {(int(g), int(f)): int(h) for (g, f), h in compose.items()}
        self.name = name or "C"
        self._hom: Optional[Dict[Tuple[int, int], List[int]]] = None
        self._nerve = None
        if validate:
            self.validate()

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.name}, {self.n_objects} objects, {self.n_arrows} arrows)"

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    def comp(self, g: int, f: int) -> int:
        return self.compose[(g, f)]

    def hom(self, a: int, b: int) -> List[int]:
        """Arrows from a to b."""
        if self._hom is None:
            self._hom = {}
            for f in range(self.n_arrows):
                self._hom.setdefault((self.source[f], self.target[f]), []).append(f)
        return self._hom.get((a, b), [])

    def composable_pairs(self) -> List[Tuple[int, int]]:
        return [(g, f) for g in range(self.n_arrows) for f in range(self.n_arrows)
                if self.source[g] == self.target[f]]

    def object_index(self, label: Hashable) -> int:
        return self.objects.index(label)

    def arrow_index(self, label: Hashable) -> int:
        return self.arrows.index(label)

    def validate(self) -> None:
        """
        Raises:
            IncoherentInput: partial or overdefined composition, unit or associativity failure
        """
        n_obj, n_arr = self.n_objects, self.n_arrows
        if not (len(self.source) == len(self.target) == n_arr and len(self.unit) == n_obj):
            raise IncoherentInput(f"{self.name}: structure maps have the wrong lengths")
        if any(not 0 <= v < n_obj for v in self.source + self.target):
            raise IncoherentInput(f"{self.name}: source/target outside the objects")
        pairs = set(self.composable_pairs())
        if set(self.compose) != pairs:
            extra = sorted(set(self.compose) ^ pairs)[0]
            raise IncoherentInput(f"{self.name}: composition is not defined exactly on composable pairs",
                                  witness={'pair': list(extra)})
        for (g, f), h in self.compose.items():
            if self.source[h] != self.source[f] or self.target[h] != self.target[g]:
                raise IncoherentInput(f"{self.name}: composite {h} of ({g}, {f}) has wrong ends",
                                      witness={'pair': [g, f]})
        for a, u in enumerate(self.unit):
            if self.source[u] != a or self.target[u] != a:
                raise IncoherentInput(f"{self.name}: unit of object {a} is not an endomorphism")
        for f in range(n_arr):
            if self.comp(self.unit[self.target[f]], f) != f or self.comp(f, self.unit[self.source[f]]) != f:
                raise IncoherentInput(f"{self.name}: unit law fails at arrow {f}", witness={'arrow': f})
        for h, g in pairs:
            for f in self.hom_into(self.source[g]):
                if self.comp(self.comp(h, g), f) != self.comp(h, self.comp(g, f)):
                    raise IncoherentInput(f"{self.name}: associativity fails",
                                          witness={'arrows': [h, g, f]})

    def hom_into(self, b: int) -> List[int]:
        return [f for f in range(self.n_arrows) if self.target[f] == b]

    def inverse_of(self, f: int) -> Optional[int]:
        for g in self.hom(self.target[f], self.source[f]):
            if self.comp(g, f) == self.unit[self.source[f]] and self.comp(f, g) == self.unit[self.target[f]]:
                return g
        return None

    def is_groupoid(self) -> bool:
        return all(self.inverse_of(f) is not None for f in range(self.n_arrows))

    def full_subcategory(self, objects: Sequence[int], name: Optional[str] = None) -> Tuple["FinCategory", List[int]]:
        """
        Full subcategory on the given objects.

        Returns:
            (subcategory, original index of each of its arrows)
        """
        objects = sorted(objects)
        obj_pos = {a: t for t, a in enumerate(objects)}
        arrows = [f for f in range(self.n_arrows)
                  if self.source[f] in obj_pos and self.target[f] in obj_pos]
        arr_pos = {f: t for t, f in enumerate(arrows)}
        compose = {(arr_pos[g], arr_pos[f]): arr_pos[self.comp(g, f)]
                   for g in arrows for f in arrows if self.source[g] == self.target[f]}
        sub = FinCategory(
            [self.objects[a] for a in objects],
            [self.arrows[f] for f in arrows],
            [obj_pos[self.source[f]] for f in arrows],
            [obj_pos[self.target[f]] for f in arrows],
            [arr_pos[self.unit[a]] for a in objects],
            compose,
            name=name or f"{self.name}|sub",
            validate=False,
        )
        if self.is_groupoid():
            sub = FinGroupoid.from_category(sub)
        return sub, arrows

    def nerve(self):
        """The nerve, built once and shared so that nerve maps can be composed."""
        if self._nerve is None:
            from src.groupoids.nerve import nerve
            self._nerve = nerve(self)
        return self._nerve


class FinGroupoid(FinCategory):
    """A finite category in which every arrow has an inverse."""

    def __init__(self, *args, inverse: Optional[Sequence[int]] = None, **kwargs):
        validate = kwargs.get('validate', True)
        kwargs['validate'] = False
        super().__init__(*args, **kwargs)
        if inverse is None:
            found = [self.inverse_of(f) for f in range(self.n_arrows)]
            if any(g is None for g in found):
                bad = found.index(None)
                raise IncoherentInput(f"{self.name}: arrow {self.arrows[bad]!r} is not invertible",
                                      witness={'arrow': bad})
            inverse = found
        self.inverse = [int(g) for g in inverse]
        if validate:
            self.validate()

    @classmethod
    def from_category(cls, C: FinCategory, name: Optional[str] = None) -> "FinGroupoid":
        return cls(C.objects, C.arrows, C.source, C.target, C.unit, C.compose,
                   name=name or C.name, validate=False)

    def validate(self) -> None:
        super().validate()
        for f, g in enumerate(self.inverse):
            if self.comp(g, f) != self.unit[self.source[f]] or self.comp(f, g) != self.unit[self.target[f]]:
                raise IncoherentInput(f"{self.name}: inverse of arrow {f} is wrong", witness={'arrow': f})

    def inv(self, f: int) -> int:
        return self.inverse[f]


class FiniteGroup:
    """A finite group given by its multiplication table."""

    def __init__(self, elements: Sequence[Hashable], table, name: Optional[str] = None, validate: bool = True):
        self.elements = list(elements)
        self.table = np.asarray(table, dtype=np.int64)
        self.name = name or "G"
        n = len(self.elements)
        if self.table.shape != (n, n):
            raise IncoherentInput(f"{self.name}: multiplication table must be {n}x{n}")
        ids = np.arange(n)
        units = [e for e in range(n) if (self.table[e] == ids).all() and (self.table[:, e] == ids).all()]
        if not units:
            raise IncoherentInput(f"{self.name}: no identity element")
        self.identity = units[0]
        inverse = []
        for a in range(n):
            hits = np.flatnonzero(self.table[a] == self.identity)
            if hits.size != 1 or self.table[hits[0], a] != self.identity:
                raise IncoherentInput(f"{self.name}: element {self.elements[a]!r} has no inverse")
            inverse.append(int(hits[0]))
        self.inverse = inverse
        if validate:
            left = self.table[self.table]            # (ab)c as left[a, b, c]
            right = self.table[:, self.table]        # a(bc) as right[a, b, c]
            if not (left == right).all():
                raise IncoherentInput(f"{self.name}: multiplication is not associative")
        self._groupoid: Optional[FinGroupoid] = None

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def as_groupoid(self) -> FinGroupoid:
        """The one-object groupoid; composition g after f is the product g f."""
        if self._groupoid is None:
            n = self.order
            compose = {(g, f): self.mul(g, f) for g in range(n) for f in range(n)}
            self._groupoid = FinGroupoid(["*"], self.elements, [0] * n, [0] * n, [self.identity],
                                         compose, inverse=self.inverse, name=self.name)
        return self._groupoid


def is_homomorphism(G: FiniteGroup, H: FiniteGroup, phi: Sequence[int]) -> bool:
    return all(phi[G.mul(a, b)] == H.mul(phi[a], phi[b]) for a in range(G.order) for b in range(G.order))


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise IncoherentInput(f"cyclic group order must be >= 1, got {n}")
    table = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    return FiniteGroup(list(range(n)), table, name=f"Z/{n}")


def symmetric_group(n: int) -> FiniteGroup:
    perms = list(itertools.permutations(range(n)))
    index = {p: t for t, p in enumerate(perms)}
    # (p q)(i) = p(q(i))
    table = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return FiniteGroup(perms, table, name=f"S{n}")


def product_group(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    elements = [(g, h) for g in G.elements for h in H.elements]
    nh = H.order
    table = [[G.mul(a // nh, b // nh) * nh + H.mul(a % nh, b % nh) for b in range(len(elements))]
             for a in range(len(elements))]
    return FiniteGroup(elements, table, name=f"{G.name}x{H.name}")


def _pairs_groupoid(objects: Sequence[Hashable], related: Callable[[int, int], bool], name: str) -> FinGroupoid:
    """Groupoid with one arrow (x, y): y -> x for every related pair."""
    n = len(objects)
    arrows = [(x, y) for x in range(n) for y in range(n) if related(x, y)]
    position = {a: t for t, a in enumerate(arrows)}
    compose = {}
    for (x, y) in arrows:
        for (y2, z) in arrows:
            if y2 == y:
                compose[(position[(x, y)], position[(y, z)])] = position[(x, z)]
    return FinGroupoid(
        list(objects),
        [(objects[x], objects[y]) for x, y in arrows],
        [y for _, y in arrows],
        [x for x, _ in arrows],
        [position[(x, x)] for x in range(n)],
        compose,
        inverse=[position[(y, x)] for x, y in arrows],
        name=name,
    )


def pair_groupoid(M: Sequence[Hashable], name: Optional[str] = None) -> FinGroupoid:
    return _pairs_groupoid(M, lambda x, y: True, name or f"pair({len(M)})")


def trivial_groupoid(M: Sequence[Hashable], name: Optional[str] = None) -> FinGroupoid:
    return _pairs_groupoid(M, lambda x, y: x == y, name or f"trivial({len(M)})")


def cech_groupoid(M: Sequence[Hashable], f: Sequence[Hashable], name: Optional[str] = None) -> FinGroupoid:
    """Čech groupoid of f: M -> N (given as the list of images): arrows M x_N M."""
    if len(f) != len(M):
        raise IncoherentInput("cech groupoid needs one image per point")
    return _pairs_groupoid(M, lambda x, y: f[x] == f[y], name or f"cech({len(M)})")


def group_action_groupoid(
    G: FiniteGroup,
    X: Sequence[Hashable],
    act: Callable[[int, int], int],
    name: Optional[str] = None,
) -> FinGroupoid:
    """
    Action groupoid of a right action x.g of G on X.

    The arrow (x, g) goes from x.g to x, and (x, g) after (x.g, h) is (x, gh).
    """
    n = len(X)
    arrows = [(x, g) for x in range(n) for g in range(G.order)]
    position = {a: t for t, a in enumerate(arrows)}
    compose = {}
    for (x, g) in arrows:
        y = act(x, g)
        for h in range(G.order):
            compose[(position[(x, g)], position[(y, h)])] = position[(x, G.mul(g, h))]
    return FinGroupoid(
        list(X),
        [(X[x], G.elements[g]) for x, g in arrows],
        [act(x, g) for x, g in arrows],
        [x for x, _ in arrows],
        [position[(x, G.identity)] for x in range(n)],
        compose,
        inverse=[position[(act(x, g), G.inv(g))] for x, g in arrows],
        name=name or f"{len(X)}//{G.name}",
    )


def preorder_category(
    n: int,
    related: Callable[[int, int], bool],
    name: Optional[str] = None,
) -> FinCategory:
    """
    The thin category of a preorder on 0..n-1: one arrow (i, j) from j to i when related(i, j).

    Raises:
        IncoherentInput: the relation is not reflexive and transitive
    """
    arrows = [(i, j) for i in range(n) for j in range(n) if related(i, j)]
    position = {a: t for t, a in enumerate(arrows)}
    if any((i, i) not in position for i in range(n)):
        raise IncoherentInput("a preorder must be reflexive")
    compose = {}
    for (i, j) in arrows:
        for (j2, k) in arrows:
            if j2 == j:
                if (i, k) not in position:
                    raise IncoherentInput(f"a preorder must be transitive: ({i}, {j}), ({j}, {k})")
                compose[(position[(i, j)], position[(j, k)])] = position[(i, k)]
    return FinCategory(
        list(range(n)), arrows,
        [j for _, j in arrows], [i for i, _ in arrows],
        [position[(i, i)] for i in range(n)],
        compose,
        name=name or f"preorder({n})",
    )


def poset_category(n: int, name: Optional[str] = None) -> FinCategory:
    """The linear order 0 < 1 < ... < n-1; the arrow (i, j) goes from j to i for i <= j."""
    return preorder_category(n, lambda i, j: i <= j, name=name or f"[{n - 1}]")
