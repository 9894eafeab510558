"""Cographs of bimodules: categories over the interval and their colored nerves."""

import logging
from typing import Optional, Sequence

from src.bibundles.colored import ColoredSSet
from src.errors import IncoherentInput, NotOverInterval
from src.groupoids.bibundles import Bimodule
from src.groupoids.categories import FinCategory, FinGroupoid
from src.groupoids.nerve import category_from_nerve

logger = logging.getLogger(__name__)


def cograph_category(P: Bimodule, name: Optional[str] = None) -> FinCategory:
    """
    The cograph of a G-H bimodule.

    Objects are G_0 followed by H_0, arrows are G_1, then H_1, then the points
    of P; a point p is an arrow from J_r(p) to J_l(p). Composites with G are
    the left action and composites with H the right action.

    Args:
        P: Bimodule

    Returns:
        FinCategory (a groupoid only when P is empty)
    """
    G, H = P.left, P.right
    nG, aG, aH = G.n_objects, G.n_arrows, H.n_arrows
    offset_p = aG + aH

    objects = [(0, x) for x in G.objects] + [(1, y) for y in H.objects]
    arrows = [(0, g) for g in G.arrows] + [(1, h) for h in H.arrows] + [(2, p) for p in P.carrier]
    source = G.source + [nG + s for s in H.source] + [nG + b for b in P.right_moment]
    target = G.target + [nG + t for t in H.target] + list(P.left_moment)
    unit = G.unit + [aG + u for u in H.unit]

    compose = {}
    for (g2, g1), g in G.compose.items():
        compose[(g2, g1)] = g
    for (h2, h1), h in H.compose.items():
        compose[(aG + h2, aG + h1)] = aG + h
    for p in range(P.size):
        for g in range(aG):
            if G.source[g] == P.left_moment[p]:
                compose[(g, offset_p + p)] = offset_p + P.lact(g, p)
        for h in range(aH):
            if H.target[h] == P.right_moment[p]:
                compose[(offset_p + p, aG + h)] = offset_p + P.ract(p, h)
    C = FinCategory(objects, arrows, source, target, unit, compose, name=name or f"cograph({P.name})")
    logger.debug(f"{C.name}: {C.n_objects} objects, {C.n_arrows} arrows")
    return C


def cograph_bimodule(P: Bimodule, name: Optional[str] = None) -> ColoredSSet:
    """
    The nerve of the cograph of P, coloured white on G and black on H.

    Cell (i, j) holds strings g_1, ..., g_i, p, h_1, ..., h_j, so (0, 0) is P
    itself, (1, 0) is G_1 x_{G_0} P and (0, 1) is P x_{H_0} H_1.
    """
    C = cograph_category(P, name=name)
    colours = [0] * P.left.n_objects + [1] * P.right.n_objects
    return ColoredSSet(C.nerve(), colours, name=C.name)


def bimodule_from_colored(C: FinCategory, colours: Sequence[int], name: Optional[str] = None) -> Bimodule:
    """
    Read a bimodule off a category over the interval.

    The white objects span the left groupoid, the black ones the right
    groupoid, and the arrows from black to white objects form the carrier.

    Args:
        C: Finite category
        colours: 0 (white) or 1 (black) per object

    Returns:
        Bimodule whose groupoids keep the relative order of objects and arrows in C

    Raises:
        NotOverInterval: an arrow runs from a white object to a black one
        IncoherentInput: the full subcategory on one colour is not a groupoid
    """
    colours = [int(c) for c in colours]
    if len(colours) != C.n_objects or any(c not in (0, 1) for c in colours):
        raise NotOverInterval(f"{C.name}: need a colour 0 or 1 for each of the {C.n_objects} objects")
    for f in range(C.n_arrows):
        if colours[C.source[f]] == 0 and colours[C.target[f]] == 1:
            raise NotOverInterval(f"{C.name}: arrow {C.arrows[f]!r} runs from white to black",
                                  witness={'arrow': f})

    white = [a for a in range(C.n_objects) if colours[a] == 0]
    black = [a for a in range(C.n_objects) if colours[a] == 1]
    sides = []
    for side, objects in (('white', white), ('black', black)):
        sub, arrows = C.full_subcategory(objects, name=f"{C.name}|{side}")
        if not isinstance(sub, FinGroupoid):
            if not sub.is_groupoid():
                raise IncoherentInput(f"{C.name}: the {side} part is not a groupoid")
            sub = FinGroupoid.from_category(sub)
        sides.append((sub, {a: t for t, a in enumerate(objects)}, {f: t for t, f in enumerate(arrows)}))
    (G, g_obj, g_arr), (H, h_obj, h_arr) = sides

    carrier = [f for f in range(C.n_arrows) if colours[C.source[f]] == 1 and colours[C.target[f]] == 0]
    position = {f: t for t, f in enumerate(carrier)}
    left_act, right_act = {}, {}
    for t, p in enumerate(carrier):
        for g, g_local in g_arr.items():
            if C.source[g] == C.target[p]:
                left_act[(t, g_local)] = position[C.comp(g, p)]
        for h, h_local in h_arr.items():
            if C.target[h] == C.source[p]:
                right_act[(t, h_local)] = position[C.comp(p, h)]
    return Bimodule(
        G, H,
        [C.arrows[p] for p in carrier],
        [g_obj[C.target[p]] for p in carrier],
        [h_obj[C.source[p]] for p in carrier],
        left_act, right_act,
        name=name or f"bimodule({C.name})",
    )


def bimodule_from_cograph(G: ColoredSSet, check: bool = True, name: Optional[str] = None) -> Bimodule:
    """
    Inverse of ``cograph_bimodule``: the category of the total space, split by colour.

    Raises:
        NotACategoryNerve: the total space is not a nerve
        NotOverInterval: as for ``bimodule_from_colored``
    """
    C = category_from_nerve(G.total, check=check)
    return bimodule_from_colored(C, G.vertex_colours, name=name)
