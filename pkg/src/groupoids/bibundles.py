"""Groupoid actions, principal bundles and HS bibundles between finite groupoids."""

import logging
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from src.errors import IncoherentInput, NotComposable, NotInvariant, NotRightPrincipal
from src.groupoids.categories import FinGroupoid
from src.groupoids.functors import Functor, identity_functor
from src.groupoids.quotient import find_orbits

logger = logging.getLogger(__name__)


class GroupoidAction:
    """
    An action of a finite groupoid on a finite set along a moment map.

    A right action is defined on pairs (p, g) with J(p) = t(g) and satisfies
    J(p.g) = s(g); a left action is defined on (g, p) with s(g) = J(p) and
    satisfies J(g.p) = t(g). ``act`` is keyed (p, g) for both sides.
    """

    def __init__(
        self,
        groupoid: FinGroupoid,
        carrier: Sequence[Hashable],
        moment: Sequence[int],
        act: Dict[Tuple[int, int], int],
        side: str = 'right',
        name: Optional[str] = None,
        validate: bool = True,
    ):
        if side not in ('left', 'right'):
            raise IncoherentInput(f"action side must be left or right, got {side!r}")
        self.groupoid = groupoid
        self.carrier = list(carrier)
        self.moment = [int(v) for v in moment]
        self.act = {(int(p), int(g)): int(q) for (p, g), q in act.items()}
        self.side = side
        self.name = name or f"{groupoid.name}-action"
        if validate:
            self.validate()

    @property
    def size(self) -> int:
        return len(self.carrier)

    def defined(self, p: int, g: int) -> bool:
        G = self.groupoid
        return self.moment[p] == (G.target[g] if self.side == 'right' else G.source[g])

    def __call__(self, p: int, g: int) -> int:
        return self.act[(p, g)]

    def acting_pairs(self) -> List[Tuple[int, int]]:
        return [(p, g) for p in range(self.size) for g in range(self.groupoid.n_arrows) if self.defined(p, g)]

    def validate(self) -> None:
        """
        Raises:
            IncoherentInput: partial action, moment, unit or associativity failure
        """
        G = self.groupoid
        pairs = self.acting_pairs()
        if set(self.act) != set(pairs):
            raise IncoherentInput(f"{self.name}: action not defined exactly where the moment allows")
        for p, g in pairs:
            q = self.act[(p, g)]
            expected = G.source[g] if self.side == 'right' else G.target[g]
            if self.moment[q] != expected:
                raise IncoherentInput(f"{self.name}: moment of the translate of {p} by {g} is wrong",
                                      witness={'point': p, 'arrow': g})
        for p in range(self.size):
            if self.act[(p, G.unit[self.moment[p]])] != p:
                raise IncoherentInput(f"{self.name}: unit does not act trivially on {p}", witness={'point': p})
        for p, g in pairs:
            for h in range(G.n_arrows):
                if self.side == 'right' and G.source[g] == G.target[h]:
                    if self.act[(self.act[(p, g)], h)] != self.act[(p, G.comp(g, h))]:
                        raise IncoherentInput(f"{self.name}: (p.g).h != p.(gh)", witness={'point': p})
                if self.side == 'left' and G.target[g] == G.source[h]:
                    if self.act[(self.act[(p, g)], h)] != self.act[(p, G.comp(h, g))]:
                        raise IncoherentInput(f"{self.name}: h.(g.p) != (hg).p", witness={'point': p})


@dataclass
class PrincipalReport:
    """Principality of an action over a base map kappa: P -> N."""

    surjective: bool
    shear_injective: bool
    shear_surjective: bool
    witness: Dict = field(default_factory=dict)

    @property
    def shear_bijective(self) -> bool:
        return self.shear_injective and self.shear_surjective

    @property
    def principal(self) -> bool:
        return self.surjective and self.shear_bijective


def check_principal(action: GroupoidAction, kappa: Sequence[int], base_size: int) -> PrincipalReport:
    """
    Check that an action is principal over kappa: P -> N.

    The shear map sends (p, g) to (p, p.g) in P x_N P; the action is principal
    when kappa is onto and the shear map is a bijection.

    Args:
        action: Groupoid action on P
        kappa: Base point of each point of P, in 0..base_size-1
        base_size: Size of N

    Raises:
        NotInvariant: kappa is not constant on orbits
    """
    for p, g in action.acting_pairs():
        if kappa[action(p, g)] != kappa[p]:
            raise NotInvariant(f"{action.name}: base map changes along {p} -> {action(p, g)}",
                               witness={'point': p, 'arrow': g})
    witness: Dict = {}
    missing = sorted(set(range(base_size)) - set(kappa))
    if missing:
        witness['unreached'] = missing[0]
    images: Dict[Tuple[int, int], Tuple[int, int]] = {}
    injective = True
    for p, g in action.acting_pairs():
        key = (p, action(p, g))
        if key in images and injective:
            injective = False
            witness['shear_collision'] = [list(images[key]), [p, g]]
        images.setdefault(key, (p, g))
    fibre_pairs = {(p, q) for p in range(action.size) for q in range(action.size) if kappa[p] == kappa[q]}
    unreached = sorted(fibre_pairs - set(images))
    if unreached:
        witness['shear_misses'] = list(unreached[0])
    return PrincipalReport(not missing, injective, not unreached, witness)


class Bimodule:
    """
    A G-H bibundle: commuting left G and right H actions on one carrier.

    The left moment J_l: P -> G_0 is invariant under H and the right moment
    J_r: P -> H_0 is invariant under G.
    """

    def __init__(
        self,
        left: FinGroupoid,
        right: FinGroupoid,
        carrier: Sequence[Hashable],
        left_moment: Sequence[int],
        right_moment: Sequence[int],
        left_act: Dict[Tuple[int, int], int],
        right_act: Dict[Tuple[int, int], int],
        name: Optional[str] = None,
        validate: bool = True,
    ):
        self.left = left
        self.right = right
        self.carrier = list(carrier)
        self.left_moment = [int(v) for v in left_moment]
        self.right_moment = [int(v) for v in right_moment]
        self.name = name or f"{left.name}-{right.name}"
        self.left_action = GroupoidAction(left, carrier, left_moment, left_act, side='left',
                                          name=f"{self.name}:left", validate=validate)
        self.right_action = GroupoidAction(right, carrier, right_moment, right_act, side='right',
                                           name=f"{self.name}:right", validate=validate)
        if validate:
            self.validate()

    def __repr__(self) -> str:
        return f"Bimodule({self.name}, |P|={self.size})"

    @property
    def size(self) -> int:
        return len(self.carrier)

    def lact(self, g: int, p: int) -> int:
        return self.left_action(p, g)

    def ract(self, p: int, h: int) -> int:
        return self.right_action(p, h)

    def validate(self) -> None:
        """
        Raises:
            IncoherentInput: moments not invariant or actions not commuting
        """
        for p, g in self.left_action.acting_pairs():
            if self.right_moment[self.lact(g, p)] != self.right_moment[p]:
                raise IncoherentInput(f"{self.name}: right moment changes under the left action")
        for p, h in self.right_action.acting_pairs():
            if self.left_moment[self.ract(p, h)] != self.left_moment[p]:
                raise IncoherentInput(f"{self.name}: left moment changes under the right action")
            for g in range(self.left.n_arrows):
                if self.left.source[g] == self.left_moment[p]:
                    if self.ract(self.lact(g, p), h) != self.lact(g, self.ract(p, h)):
                        raise IncoherentInput(f"{self.name}: actions do not commute at {p}",
                                              witness={'point': p, 'left': g, 'right': h})

    def right_principal(self) -> PrincipalReport:
        """The H-action is principal over J_l (an HS bibundle)."""
        return check_principal(self.right_action, self.left_moment, self.left.n_objects)

    def left_principal(self) -> PrincipalReport:
        return check_principal(self.left_action, self.right_moment, self.right.n_objects)

    def opposite(self) -> "Bimodule":
        """The H-G bibundle on the same carrier with h.p = p.h^-1 and p.g = g^-1.p."""
        G, H = self.left, self.right
        left_act = {(p, h): self.ract(p, H.inv(h)) for p in range(self.size) for h in range(H.n_arrows)
                    if H.source[h] == self.right_moment[p]}
        right_act = {(p, g): self.lact(G.inv(g), p) for p in range(self.size) for g in range(G.n_arrows)
                     if G.target[g] == self.left_moment[p]}
        return Bimodule(H, G, self.carrier, self.right_moment, self.left_moment, left_act, right_act,
                        name=f"{self.name}^op")


def is_morita(P: Bimodule) -> bool:
    return P.right_principal().principal and P.left_principal().principal


def bundlisation(f: Functor) -> Bimodule:
    """
    Bund(f) = G_0 x_{H_0} H_1: pairs (x, h) with t(h) = f(x).

    G acts by g.(x, h) = (t g, f(g) h) and H by (x, h).h' = (x, h h').
    """
    G, H = f.source, f.target
    carrier = [(x, h) for x in range(G.n_objects) for h in range(H.n_arrows) if H.target[h] == f.obj(x)]
    pos = {c: t for t, c in enumerate(carrier)}
    left_act = {}
    right_act = {}
    for p, (x, h) in enumerate(carrier):
        for g in range(G.n_arrows):
            if G.source[g] == x:
                left_act[(p, g)] = pos[(G.target[g], H.comp(f.arr(g), h))]
        for k in range(H.n_arrows):
            if H.target[k] == H.source[h]:
                right_act[(p, k)] = pos[(x, H.comp(h, k))]
    return Bimodule(
        G, H,
        [(G.objects[x], H.arrows[h]) for x, h in carrier],
        [x for x, _ in carrier],
        [H.source[h] for _, h in carrier],
        left_act, right_act,
        name=f"Bund({f.name})",
    )


def unit_bibundle(G: FinGroupoid) -> Bimodule:
    return bundlisation(identity_functor(G))


def compose_bibundles(P: Bimodule, Q: Bimodule, check: bool = True) -> Bimodule:
    """
    Composite P x_H Q of a G-H bibundle and an H-K bibundle.

    The carrier is the orbit set of P x_{H_0} Q under (p, q).h = (p.h, h^-1.q);
    each orbit is represented by its least pair in canonical order.

    Raises:
        NotComposable: the middle groupoids differ
        NotRightPrincipal: P is not right principal
    """
    if P.right is not Q.left:
        raise NotComposable(f"{P.name} and {Q.name} do not share their middle groupoid")
    if check:
        report = P.right_principal()
        if not report.principal:
            raise NotRightPrincipal(f"{P.name} is not right principal", witness=report.witness)
    H = P.right
    pairs = [(p, q) for p in range(P.size) for q in range(Q.size) if P.right_moment[p] == Q.left_moment[q]]
    moves = []
    for p, q in pairs:
        for h in range(H.n_arrows):
            if H.target[h] == P.right_moment[p]:
                moves.append(((p, q), (P.ract(p, h), Q.lact(H.inv(h), q))))
    reps, orbit_of = find_orbits(pairs, moves)

    G, K = P.left, Q.right
    left_act, right_act = {}, {}
    for o, (p, q) in enumerate(reps):
        for g in range(G.n_arrows):
            if G.source[g] == P.left_moment[p]:
                left_act[(o, g)] = orbit_of[(P.lact(g, p), q)]
        for k in range(K.n_arrows):
            if K.target[k] == Q.right_moment[q]:
                right_act[(o, k)] = orbit_of[(p, Q.ract(q, k))]
    if check:
        # the induced actions must not depend on the representative
        for (p, q), o in orbit_of.items():
            for g in range(G.n_arrows):
                if G.source[g] == P.left_moment[p] and orbit_of[(P.lact(g, p), q)] != left_act[(o, g)]:
                    raise NotRightPrincipal(f"left action on {P.name} x {Q.name} is not well defined")
            for k in range(K.n_arrows):
                if K.target[k] == Q.right_moment[q] and orbit_of[(p, Q.ract(q, k))] != right_act[(o, k)]:
                    raise NotRightPrincipal(f"right action on {P.name} x {Q.name} is not well defined")
    logger.debug(f"{P.name} x {Q.name}: {len(pairs)} pairs, {len(reps)} orbits")
    return Bimodule(
        G, K,
        [(P.carrier[p], Q.carrier[q]) for p, q in reps],
        [P.left_moment[p] for p, _ in reps],
        [Q.right_moment[q] for _, q in reps],
        left_act, right_act,
        name=f"{P.name}*{Q.name}",
    )


def equivariant_maps(P: Bimodule, Q: Bimodule, bijective: bool = False) -> List[List[int]]:
    """
    All maps P -> Q commuting with both moments and both actions.

    Images are chosen orbit by orbit; an assignment is propagated along the
    actions and rejected on the first conflict.
    """
    if P.left is not Q.left or P.right is not Q.right:
        raise NotComposable(f"{P.name} and {Q.name} are not bibundles between the same groupoids")
    G, H = P.left, P.right
    results: List[List[int]] = []
    phi: List[Optional[int]] = [None] * P.size

    def neighbours(p: int) -> List[Tuple[int, int, str]]:
        out = [(g, P.lact(g, p), 'l') for g in range(G.n_arrows) if G.source[g] == P.left_moment[p]]
        out += [(h, P.ract(p, h), 'r') for h in range(H.n_arrows) if H.target[h] == P.right_moment[p]]
        return out

    def propagate(start: int, image: int, trail: List[int]) -> bool:
        stack = [(start, image)]
        while stack:
            p, q = stack.pop()
            if phi[p] is not None:
                if phi[p] != q:
                    return False
                continue
            if P.left_moment[p] != Q.left_moment[q] or P.right_moment[p] != Q.right_moment[q]:
                return False
            phi[p] = q
            trail.append(p)
            for arrow, p2, side in neighbours(p):
                q2 = Q.lact(arrow, q) if side == 'l' else Q.ract(q, arrow)
                stack.append((p2, q2))
        return True

    def extend() -> None:
        free = [p for p in range(P.size) if phi[p] is None]
        if not free:
            if not bijective or len(set(phi)) == Q.size == P.size:
                results.append(list(phi))
            return
        p = free[0]
        for q in range(Q.size):
            trail: List[int] = []
            if propagate(p, q, trail):
                extend()
            for x in trail:
                phi[x] = None

    extend()
    return results


def find_bimodule_isomorphism(P: Bimodule, Q: Bimodule) -> Optional[List[int]]:
    if P.size != Q.size:
        return None
    maps = equivariant_maps(P, Q, bijective=True)
    return maps[0] if maps else None


def transformation_to_morphism(f: Functor, g: Functor, alpha: Sequence[int]) -> List[int]:
    """The map Bund(f) -> Bund(g) induced by alpha: f => g, sending (x, h) to (x, alpha_x h)."""
    P, Q = bundlisation(f), bundlisation(g)
    H = f.target
    index = {lab: t for t, lab in enumerate(Q.carrier)}
    out = []
    for x_label, h_label in P.carrier:
        x = f.source.object_index(x_label)
        h = H.arrow_index(h_label)
        out.append(index[(x_label, H.arrows[H.comp(alpha[x], h)])])
    return out


def action_groupoid(action: GroupoidAction, name: Optional[str] = None) -> FinGroupoid:
    """
    The action groupoid P x| G of a groupoid action.

    For a right action the arrow (p, g) goes from p.g to p and (p, g) after
    (p.g, h) is (p, gh). For a left action (p, g) goes from p to g.p and
    (g.p, h) after (p, g) is (p, hg).
    """
    G = action.groupoid
    arrows = action.acting_pairs()
    pos = {a: t for t, a in enumerate(arrows)}
    right = action.side == 'right'
    compose = {}
    for p, g in arrows:
        q = action(p, g)
        for h in range(G.n_arrows):
            if right and (q, h) in pos:
                compose[(pos[(p, g)], pos[(q, h)])] = pos[(p, G.comp(g, h))]
            elif not right and (q, h) in pos:
                compose[(pos[(q, h)], pos[(p, g)])] = pos[(p, G.comp(h, g))]
    source = [action(p, g) if right else p for p, g in arrows]
    target = [p if right else action(p, g) for p, g in arrows]
    unit = [pos[(p, G.unit[action.moment[p]])] for p in range(action.size)]
    inverse = [pos[(action(p, g), G.inv(g))] for p, g in arrows]
    return FinGroupoid(
        list(action.carrier),
        [(action.carrier[p], G.arrows[g]) for p, g in arrows],
        source, target, unit, compose, inverse=inverse,
        name=name or f"{action.name}//{G.name}",
    )


def biaction_groupoid(P: Bimodule, name: Optional[str] = None) -> FinGroupoid:
    """
    The groupoid G x| P |x H of a bimodule.

    The arrow (g, p, h) goes from p to g.p.h; (g', q, h') after (g, p, h) is
    (g' g, p, h h').
    """
    G, H = P.left, P.right
    arrows = [(g, p, h) for p in range(P.size)
              for g in range(G.n_arrows) if G.source[g] == P.left_moment[p]
              for h in range(H.n_arrows) if H.target[h] == P.right_moment[p]]
    pos = {a: t for t, a in enumerate(arrows)}

    def end(g: int, p: int, h: int) -> int:
        return P.lact(g, P.ract(p, h))

    by_source: Dict[int, List[Tuple[int, int, int]]] = {}
    for a in arrows:
        by_source.setdefault(a[1], []).append(a)
    compose = {}
    for g, p, h in arrows:
        for g2, q, h2 in by_source[end(g, p, h)]:
            compose[(pos[(g2, q, h2)], pos[(g, p, h)])] = pos[(G.comp(g2, g), p, H.comp(h, h2))]
    return FinGroupoid(
        list(P.carrier),
        [(G.arrows[g], P.carrier[p], H.arrows[h]) for g, p, h in arrows],
        [p for _, p, _ in arrows],
        [end(g, p, h) for g, p, h in arrows],
        [pos[(G.unit[P.left_moment[p]], p, H.unit[P.right_moment[p]])] for p in range(P.size)],
        compose,
        inverse=[pos[(G.inv(g), end(g, p, h), H.inv(h))] for g, p, h in arrows],
        name=name or f"{G.name}|x{P.name}x|{H.name}",
    )


def _same_tables(A: FinGroupoid, B: FinGroupoid) -> bool:
    return (A.source == B.source and A.target == B.target and A.unit == B.unit
            and A.compose == B.compose)


def rebase(Q: Bimodule, left: FinGroupoid, right: FinGroupoid) -> Bimodule:
    """
    Q re-read as a bimodule between index-identical copies of its groupoids.

    Raises:
        NotComposable: the groupoids differ as tables
    """
    if not (_same_tables(Q.left, left) and _same_tables(Q.right, right)):
        raise NotComposable(f"{Q.name} does not act through groupoids matching {left.name}, {right.name}")
    return Bimodule(left, right, Q.carrier, Q.left_moment, Q.right_moment,
                    Q.left_action.act, Q.right_action.act, name=Q.name, validate=False)


def isomorphic_bimodules(P: Bimodule, Q: Bimodule) -> bool:
    """Whether P and Q are isomorphic bimodules over index-identical groupoids."""
    try:
        Q = rebase(Q, P.left, P.right)
    except NotComposable:
        return False
    return find_bimodule_isomorphism(P, Q) is not None


def bibundle_morphisms(f: Functor, g: Functor) -> List[Tuple[List[int], List[int]]]:
    """
    Pair each natural transformation f => g with its morphism Bund(f) -> Bund(g).

    Raises:
        IncoherentInput: the induced morphisms miss an equivariant map or repeat one
    """
    from src.groupoids.functors import natural_transformations

    pairs = [(alpha, transformation_to_morphism(f, g, alpha)) for alpha in natural_transformations(f, g)]
    P, Q = bundlisation(f), bundlisation(g)
    Q = rebase(Q, P.left, P.right)
    expected = sorted(equivariant_maps(P, Q))
    induced = sorted(m for _, m in pairs)
    if induced != expected:
        raise IncoherentInput(f"{f.name} => {g.name}: transformations and bibundle maps do not correspond",
                              witness={'transformations': len(pairs), 'equivariant_maps': len(expected)})
    return pairs
