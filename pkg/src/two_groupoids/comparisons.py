"""Comparison maps for composite 2-bibundles: fundamental groupoid, units, associativity, bundlisation."""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import pandas as pd

from src.bibundles.colored import ColoredSSet, ends, from_bigraded, higher_cograph, row_or_column
from src.bibundles.report import colored_weak_acyclicity
from src.errors import NotFound
from src.groupoids.categories import FinGroupoid
from src.groupoids.functors import Functor, classify_functor
from src.kan.conditions import FAILS
from src.simplicial.constructions import pullback, total_decalage
from src.simplicial.core import SimplicialMap, TruncatedSSet, compose_maps
from src.simplicial.hom import HomSearch
from src.simplicial.iso import find_isomorphism
from src.two_groupoids.bigons import bigon_classes, colored_bigon_groupoid, fundamental_groupoid
from src.two_groupoids.composition import TOP, Cell, Composite, compose_2bibundles, level_cells

logger = logging.getLogger(__name__)


def bigon_functor(f: SimplicialMap, source: ColoredSSet, target: ColoredSSet) -> Functor:
    """The functor a map of bibundles induces on groupoids of bigons."""
    E1, E2 = colored_bigon_groupoid(source), colored_bigon_groupoid(target)
    objects = {x: t for t, x in enumerate(E2.objects)}
    arrows = {x: t for t, x in enumerate(E2.arrows)}
    return Functor(E1.groupoid, E2.groupoid,
                   [objects[f(1, e)] for e in E1.objects],
                   [arrows[f(2, x)] for x in E1.arrows],
                   name=f"E({f.name})")


def end_assignment(source: ColoredSSet, target: ColoredSSet, top: int = TOP) -> Dict[Tuple[int, int], int]:
    """Send nondegenerate simplices of both ends of ``source`` to the same positions in ``target``."""
    fixed: Dict[Tuple[int, int], int] = {}
    for m in range(top + 1):
        nondegenerate = set(source.total.nondegenerate(m))
        for cell in ((m, -1), (-1, m)):
            image = target.cell(*cell)
            for t, x in enumerate(source.cell(*cell)):
                if int(x) in nondegenerate:
                    fixed[(m, int(x))] = int(image[t])
    return fixed


@dataclass
class Comparison:
    """A map of bibundles into a composite with its verification."""

    map: SimplicialMap
    composite: Composite
    acyclicity: Dict[Tuple[int, Tuple[int, ...]], str]
    bigon_flags: Dict[str, Optional[bool]]

    @property
    def acyclic(self) -> bool:
        return all(status != FAILS for status in self.acyclicity.values())

    @property
    def weak_equivalence(self) -> bool:
        return bool(self.bigon_flags.get('weak_equivalence'))

    def to_frame(self) -> pd.DataFrame:
        rows = [{'k': k, 'colours': ''.join(str(c) for c in colours), 'status': status}
                for (k, colours), status in sorted(self.acyclicity.items())]
        return pd.DataFrame(rows, columns=['k', 'colours', 'status'])


def _comparison(source: ColoredSSet, composite: Composite, fixed: Dict[Tuple[int, int], int],
                budget: Optional[int], what: str) -> Comparison:
    target = composite.colored
    search = HomSearch(source.total, target.total, fixed=fixed,
                       over=(target.structure, source.structure), budget=budget)
    f = search.first()
    if f is None:
        raise NotFound(f"no {what} map {source.name} -> {target.name}",
                       witness={'expansions': search.expansions})
    f.validate(max(source.bound, TOP + 1))
    acyclicity = colored_weak_acyclicity(f, target, max_k=2)
    flags = classify_functor(bigon_functor(f, source, target), check_nerve=False)
    logger.info(f"{what} {f.name}: weak equivalence on bigons {flags['weak_equivalence']}")
    return Comparison(f, composite, acyclicity, flags)


def decalage_bibundle(X: TruncatedSSet, name: Optional[str] = None) -> ColoredSSet:
    """Dec(X) as an X-X bibundle."""
    return from_bigraded(total_decalage(X), name=name or f"Dec({X.name})")


def unit_comparison(G: ColoredSSet, side: str = "left", check: bool = True,
                    budget: Optional[int] = None) -> Comparison:
    """
    The map Gamma -> Dec(X) (x) Gamma, or Gamma -> Gamma (x) Dec(Y) for ``right``.

    A mixed edge goes to the configuration pairing it with the degenerate
    edge at its white (right: black) vertex; the rest is found by extension
    with both ends fixed.

    Raises:
        NotFound: no extension exists
    """
    e = ends(G)
    X = e.white if side == "left" else e.black
    D = decalage_bibundle(X)
    first, second = (D, G) if side == "left" else (G, D)
    composite = compose_2bibundles(first, second, check=check, variants=False, budget=budget)

    fixed = end_assignment(G, composite.colored)
    T = G.total
    for gamma in G.cell(0, 0):
        gamma = int(gamma)
        if side == "left":
            x = int(G.local(0)[T.face(1, 1)[gamma]])
            key = (int(D.cell(0, 0)[X.degeneracy(0, 0)[x]]), gamma)
        else:
            y = int(G.local(0)[T.face(1, 0)[gamma]])
            key = (gamma, int(D.cell(0, 0)[X.degeneracy(0, 0)[y]]))
        fixed[(1, gamma)] = composite.index((0, 0), key)
    return _comparison(G, composite, fixed, budget, f"{side} unit comparison")


def bundlisation_functoriality(f: SimplicialMap, g: SimplicialMap, check: bool = True,
                               budget: Optional[int] = None) -> Comparison:
    """
    The map cograph(g.f) -> cograph(f) (x) cograph(g).

    An edge (x, z) goes to the configuration through the degenerate edge at f(x).

    Raises:
        NotFound: no extension exists
    """
    X, Y, Z = f.source, f.target, g.target
    Cf, Cg = higher_cograph(f), higher_cograph(g)
    Cgf = higher_cograph(compose_maps(f, g))
    composite = compose_2bibundles(Cf, Cg, check=check, variants=False, budget=budget)

    by_label_f = {Cf.total.label(1, int(e))[1]: int(e) for e in Cf.cell(0, 0)}
    by_label_g = {Cg.total.label(1, int(e))[1]: int(e) for e in Cg.cell(0, 0)}
    fixed = end_assignment(Cgf, composite.colored)
    for e in Cgf.cell(0, 0):
        e = int(e)
        x_label, z_label = Cgf.total.label(1, e)[1]
        y = f(0, X.index_of(0, x_label))
        through = (by_label_f[(x_label, Y.label(1, int(Y.degeneracy(0, 0)[y])))],
                   by_label_g[(Y.label(0, y), z_label)])
        fixed[(1, e)] = composite.index((0, 0), through)
    logger.debug(f"bundlisation of {f.name} and {g.name} into {Z.name}")
    return _comparison(Cgf, composite, fixed, budget, "bundlisation comparison")


@dataclass
class AssociativityResult:
    """The isomorphism between the two bracketings, checked cell by cell."""

    map: SimplicialMap
    left: Composite
    right: Composite
    cells: Dict[Cell, bool] = field(default_factory=dict)

    @property
    def isomorphism(self) -> bool:
        return all(self.cells.values())


def associativity_iso(first: ColoredSSet, second: ColoredSSet, third: ColoredSSet, check: bool = True,
                      budget: Optional[int] = None) -> AssociativityResult:
    """
    An isomorphism (Gamma (x) Xi) (x) Omega -> Gamma (x) (Xi (x) Omega) fixing both ends.

    Raises:
        NotFound: the two bracketings are not isomorphic relative to their ends
    """
    inner_left = compose_2bibundles(first, second, check=check, variants=False, budget=budget)
    left = compose_2bibundles(inner_left.colored, third, check=check, variants=False, budget=budget)
    inner_right = compose_2bibundles(second, third, check=check, variants=False, budget=budget)
    right = compose_2bibundles(first, inner_right.colored, check=check, variants=False, budget=budget)

    iso = find_isomorphism(left.total, right.total, fixed=end_assignment(left.colored, right.colored),
                           budget=budget)
    if iso is None:
        raise NotFound(f"{left.colored.name} and {right.colored.name} are not isomorphic over their ends",
                       witness={'sizes': [left.total.sizes(TOP), right.total.sizes(TOP)]})
    iso.validate(TOP + 1)
    cells = {}
    for m in range(TOP + 1):
        for cell in level_cells(m):
            image = sorted(int(v) for v in iso.component(m)[left.colored.cell(*cell)])
            cells[cell] = image == [int(v) for v in right.colored.cell(*cell)]
    logger.info(f"associativity: {sum(cells.values())}/{len(cells)} cells matched")
    return AssociativityResult(iso, left, right, cells)


@dataclass
class TauComparison:
    """The functor from the fundamental groupoid of the fibre product of row and column to the bigons."""

    functor: Functor
    pullback: TruncatedSSet
    tau: FinGroupoid
    bigons: FinGroupoid

    @property
    def isomorphism(self) -> bool:
        F = self.functor
        return (sorted(F.on_objects) == list(range(F.target.n_objects))
                and sorted(F.on_arrows) == list(range(F.target.n_arrows)))


def tau_comparison(composite: Composite) -> TauComparison:
    """
    Compare the bigons of a composite with tau(R'_0 Gamma x_Y C'_0 Xi).

    A pair (r, c) of a row triangle of Gamma and a column triangle of Xi over
    the same middle edge goes to the class of the configuration (r, c, s_1 d_0 c),
    which is a bigon of the composite.
    """
    G, H = composite.gluing.first, composite.gluing.second
    iota = composite.gluing.identification
    row = row_or_column(G, 'row', 0)
    column = row_or_column(H, 'column', 0)
    R = row.space
    to_middle = SimplicialMap(R, column.to_end.target,
                              [iota.component(m)[row.to_end.component(m)] for m in range(R.cosk_level + 1)],
                              validate=False, name=f"{row.to_end.name}.{iota.name}")
    P, p1, p2 = pullback(to_middle, column.to_end)
    tau = fundamental_groupoid(P, check=False)
    E = colored_bigon_groupoid(composite.colored)
    objects = {x: t for t, x in enumerate(E.objects)}
    arrows = {x: t for t, x in enumerate(E.arrows)}

    on_objects = [objects[composite.index((0, 0), (int(G.cell(0, 0)[p1(0, v)]), int(H.cell(0, 0)[p2(0, v)])))]
                  for v in range(P.size(0))]
    _, reps = bigon_classes(P)
    on_arrows = []
    T = H.total
    for e in reps:
        r, c = int(G.cell(0, 1)[p1(1, e)]), int(H.cell(1, 0)[p2(1, e)])
        key = (r, c, int(T.degeneracy(1, 1)[T.face(2, 0)[c]]))
        on_arrows.append(arrows[composite.index((0, 1), key)])
    F = Functor(tau, E.groupoid, on_objects, on_arrows, name=f"{tau.name}->{E.groupoid.name}")
    result = TauComparison(F, P, tau, E.groupoid)
    logger.info(f"{composite.colored.name}: tau comparison is an isomorphism: {result.isomorphism}")
    return result
