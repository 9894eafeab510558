"""Crossed modules of finite groups and their 2-groupoid nerves."""

import logging
from typing import Callable, List, Optional, Sequence

import numpy as np

from src.errors import IncoherentInput
from src.groupoids.categories import FiniteGroup, is_homomorphism
from src.simplicial.constructions import subcomplex
from src.simplicial.core import INDEX_DTYPE, SimplicialMap, TruncatedSSet

logger = logging.getLogger(__name__)


class CrossedModule:
    """
    A crossed module d: H -> G with a left action of G on H by automorphisms.

    Axioms: d(g.h) = g d(h) g^-1 and d(h).h' = h h' h^-1.
    """

    def __init__(
        self,
        G: FiniteGroup,
        H: FiniteGroup,
        boundary: Sequence[int],
        action: Optional[Callable[[int, int], int]] = None,
        name: Optional[str] = None,
        validate: bool = True,
    ):
        self.G = G
        self.H = H
        self.boundary = [int(v) for v in boundary]
        if action is None:
            # trivial action: needs H abelian with central image
            action = lambda g, h: h
        self.act_table = np.array([[action(g, h) for h in range(H.order)] for g in range(G.order)],
                                  dtype=np.int64)
        self.name = name or f"({H.name}->{G.name})"
        self._nerve: Optional[TruncatedSSet] = None
        if validate:
            self.validate()

    def __repr__(self) -> str:
        return f"CrossedModule{self.name}"

    def act(self, g: int, h: int) -> int:
        return int(self.act_table[g, h])

    def d(self, h: int) -> int:
        return self.boundary[h]

    def validate(self) -> None:
        """
        Raises:
            IncoherentInput: naming the first failing axiom
        """
        G, H = self.G, self.H
        if not is_homomorphism(H, G, self.boundary):
            raise IncoherentInput(f"{self.name}: boundary is not a homomorphism")
        for g in range(G.order):
            row = [self.act(g, h) for h in range(H.order)]
            if sorted(row) != list(range(H.order)) or not is_homomorphism(H, H, row):
                raise IncoherentInput(f"{self.name}: {G.elements[g]!r} does not act by an automorphism")
        for g1 in range(G.order):
            for g2 in range(G.order):
                for h in range(H.order):
                    if self.act(G.mul(g1, g2), h) != self.act(g1, self.act(g2, h)):
                        raise IncoherentInput(f"{self.name}: G does not act on H")
        for g in range(G.order):
            for h in range(H.order):
                if self.d(self.act(g, h)) != G.mul(G.mul(g, self.d(h)), G.inv(g)):
                    raise IncoherentInput(f"{self.name}: boundary is not equivariant",
                                          witness={'g': g, 'h': h})
        for h in range(H.order):
            for k in range(H.order):
                if self.act(self.d(h), k) != H.mul(H.mul(h, k), H.inv(h)):
                    raise IncoherentInput(f"{self.name}: Peiffer identity fails", witness={'h': h, 'k': k})

    def nerve(self) -> TruncatedSSet:
        if self._nerve is None:
            self._nerve = crossed_module_nerve(self)
        return self._nerve


def conjugation(G: FiniteGroup) -> Callable[[int, int], int]:
    """G acting on a subgroup (or itself) by conjugation, for identity-like boundaries."""
    return lambda g, h: G.mul(G.mul(g, h), G.inv(g))


def crossed_module_nerve(X: CrossedModule) -> TruncatedSSet:
    """
    The 2-groupoid nerve of a crossed module, stored up to level 3.

    One vertex; edges are elements of G; a 2-simplex is (a, b, h) with
    d_2 = a, d_0 = b and d_1 = d(h) a b. A family of four 2-simplices bounds a
    3-simplex when h_023 h_012 = h_013 (g_01 . h_123).

    Args:
        X: Crossed module

    Returns:
        TruncatedSSet with cosk_level 3
    """
    G, H = X.G, X.H
    nG, nH = G.order, H.order
    triples = [(a, b, h) for a in range(nG) for b in range(nG) for h in range(nH)]
    index = {t: i for i, t in enumerate(triples)}
    e = H.identity

    faces = {
        1: np.zeros((2, nG), dtype=INDEX_DTYPE),
        2: np.array([[b for _, b, _ in triples],
                     [G.mul(X.d(h), G.mul(a, b)) for a, b, h in triples],
                     [a for a, _, _ in triples]], dtype=INDEX_DTYPE),
    }
    degens = {
        0: np.full((1, 1), G.identity, dtype=INDEX_DTYPE),
        1: np.array([[index[(G.identity, a, e)] for a in range(nG)],
                     [index[(a, G.identity, e)] for a in range(nG)]], dtype=INDEX_DTYPE),
    }
    labels = {0: ["*"], 1: list(G.elements),
              2: [(G.elements[a], G.elements[b], H.elements[h]) for a, b, h in triples]}
    two = TruncatedSSet([1, nG, len(triples)], faces, degens, 2, labels=labels, name=f"N{X.name}_2")

    def coherent(family) -> bool:
        y0, y1, y2, y3 = (triples[int(v)] for v in family)
        g01 = y3[0]
        return H.mul(y1[2], y3[2]) == H.mul(y2[2], X.act(g01, y0[2]))

    table = two.face_table(3)
    keep3 = [x for x in range(two.size(3)) if coherent(table[:, x])]
    N, _ = subcomplex(two, {0: [0], 1: range(nG), 2: range(len(triples)), 3: keep3},
                      name=f"N{X.name}", dimension=2)
    logger.debug(f"nerve of {X.name}: sizes {N.sizes(3)}")
    return N


def crossed_module_morphism(
    X: CrossedModule,
    Y: CrossedModule,
    on_G: Sequence[int],
    on_H: Sequence[int],
) -> SimplicialMap:
    """
    Nerve map of a morphism of crossed modules.

    Raises:
        IncoherentInput: the pair is not compatible with boundaries and actions
    """
    if not (is_homomorphism(X.G, Y.G, on_G) and is_homomorphism(X.H, Y.H, on_H)):
        raise IncoherentInput("crossed module morphism components must be homomorphisms")
    for h in range(X.H.order):
        if on_G[X.d(h)] != Y.d(on_H[h]):
            raise IncoherentInput("crossed module morphism does not commute with boundaries")
        for g in range(X.G.order):
            if on_H[X.act(g, h)] != Y.act(on_G[g], on_H[h]):
                raise IncoherentInput("crossed module morphism is not equivariant")
    NX, NY = X.nerve(), Y.nerve()
    nGy, nHy = Y.G.order, Y.H.order
    level2: List[int] = []
    for a, b, h in ((a, b, h) for a in range(X.G.order) for b in range(X.G.order) for h in range(X.H.order)):
        level2.append((on_G[a] * nGy + on_G[b]) * nHy + on_H[h])
    level3: List[int] = []
    table = NX.face_table(3)
    for x in range(NX.size(3)):
        found = NY.lookup(3, [level2[int(v)] for v in table[:, x]])
        if not found:
            raise IncoherentInput(f"3-simplex {x} of N{X.name} has no image in N{Y.name}")
        level3.append(found[0])
    return SimplicialMap(NX, NY, [[0], list(on_G), level2, level3], name=f"N({X.name}->{Y.name})")
