"""
2-groupoid Kan fibrations as finite data, and the categorified actions they encode.

A fibration pi: A -> X with Kan(1, 0), Kan(1, 1) and unique fillers from
level 2 on is determined by pi in levels 0 and 1 together with the three
multiplications m_j: Hom(Lambda^2_j, pi) -> A_1. The same data read as an
action gives the fibre groupoid E, the action of the arrow groupoid of X
on A_1, and the associator and unitor of that action.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import pandas as pd

from src.errors import CoherenceFailure, IncoherentInput, NotA2Groupoid, NotAFibration
from src.groupoids.categories import FinGroupoid
from src.groupoids.quotient import find_orbits
from src.kan.conditions import kan
from src.simplicial.core import SimplicialMap, TruncatedSSet, make_truncated
from src.two_groupoids.bigons import BigonGroupoid, bigon_groupoid, move_triangle

logger = logging.getLogger(__name__)

CLAUSES = ("i", "ii", "iii")

# Vertices (p, q) of the edge opposite vertex i of a triangle
_EDGE = {0: (1, 2), 1: (0, 2), 2: (0, 1)}


def require_kan_fibration(pi: SimplicialMap) -> None:
    """
    Raises:
        NotAFibration: Kan(1, k) fails, or a horn of dimension 2 or 3 does not fill uniquely
    """
    failing = [f"Kan(1,{k})" for k in (0, 1) if not kan(pi, 1, k).holds]
    for m in (2, 3):
        failing += [f"Kan!({m},{k})" for k in range(m + 1) if not kan(pi, m, k, unique=True).holds]
    if failing:
        raise NotAFibration(f"{pi.name} is not a 2-groupoid Kan fibration", witness={'failing': failing})


@dataclass
class LowData:
    """pi in levels 0 and 1: A_0, A_1 with d_0, d_1, s_0, and the projections to X."""

    base: TruncatedSSet
    object_labels: List[Hashable]
    edge_labels: List[Hashable]
    d0: List[int]
    d1: List[int]
    s0: List[int]
    pi0: List[int]
    pi1: List[int]
    name: str = "A"

    @property
    def n_objects(self) -> int:
        return len(self.object_labels)

    @property
    def n_edges(self) -> int:
        return len(self.edge_labels)

    def vertex(self, eta: int, end: int) -> int:
        return self.d1[eta] if end == 0 else self.d0[eta]

    def over(self, e: int) -> List[int]:
        """Edges of A lying over the edge e of X."""
        return [eta for eta in range(self.n_edges) if self.pi1[eta] == e]

    def validate(self) -> None:
        """
        Raises:
            IncoherentInput: an identity in levels 0 and 1 fails, pi does not commute
                with them, or Kan(1, 0) or Kan(1, 1) fails
        """
        X = self.base
        for a in range(self.n_objects):
            if self.d0[self.s0[a]] != a or self.d1[self.s0[a]] != a:
                raise IncoherentInput(f"{self.name}: d_i s_0 is not the identity on vertex {a}")
            if self.pi1[self.s0[a]] != int(X.degeneracy(0, 0)[self.pi0[a]]):
                raise IncoherentInput(f"{self.name}: projection does not commute with s_0 at vertex {a}")
        for eta in range(self.n_edges):
            for i, d in ((0, self.d0), (1, self.d1)):
                if int(X.face(1, i)[self.pi1[eta]]) != self.pi0[d[eta]]:
                    raise IncoherentInput(f"{self.name}: projection does not commute with d_{i} at edge {eta}")
        for k, known in ((0, self.d1), (1, self.d0)):
            # Lambda^1_k keeps the vertex opposite k
            reached = {(known[eta], self.pi1[eta]) for eta in range(self.n_edges)}
            for a in range(self.n_objects):
                for e in range(X.size(1)):
                    if int(X.face(1, k ^ 1)[e]) == self.pi0[a] and (a, e) not in reached:
                        raise IncoherentInput(f"{self.name}: Kan(1,{k}) fails at vertex {a} over edge {e}",
                                              witness={'vertex': a, 'edge': e})


def low_data(pi: SimplicialMap) -> LowData:
    A = pi.source
    return LowData(
        base=pi.target,
        object_labels=A.labels(0),
        edge_labels=A.labels(1),
        d0=[int(v) for v in A.face(1, 0)],
        d1=[int(v) for v in A.face(1, 1)],
        s0=[int(v) for v in A.degeneracy(0, 0)],
        pi0=[int(v) for v in pi.component(0)],
        pi1=[int(v) for v in pi.component(1)],
        name=A.name,
    )


MultKey = Tuple[int, int, int]


@dataclass
class ThreeMultiplications:
    """
    The maps m_j: (gamma, the two faces other than j in increasing order) -> face j.

    ``tables[j]`` may be edited in place to model corrupted data.
    """

    low: LowData
    tables: Dict[int, Dict[MultKey, int]]

    def m(self, j: int, gamma: int, first: int, second: int) -> Optional[int]:
        return self.tables[j].get((gamma, first, second))

    def horns(self, j: int) -> List[MultKey]:
        """Every element of Hom(Lambda^2_j, pi), from the low data alone."""
        low, X = self.low, self.low.base
        out = []
        i0, i1 = (i for i in range(3) if i != j)
        for gamma in range(X.size(2)):
            for a in low.over(int(X.face(2, i0)[gamma])):
                for b in low.over(int(X.face(2, i1)[gamma])):
                    placed: Dict[int, int] = {}
                    ok = True
                    for i, eta in ((i0, a), (i1, b)):
                        p, q = _EDGE[i]
                        for vertex, value in ((p, low.d1[eta]), (q, low.d0[eta])):
                            if placed.setdefault(vertex, value) != value:
                                ok = False
                    if ok:
                        out.append((gamma, a, b))
        return out

    def complete(self, j: int, key: MultKey) -> Optional[Tuple[int, Tuple[int, int, int]]]:
        """The triangle (gamma, (d_0, d_1, d_2)) obtained by filling a horn with m_j."""
        value = self.tables[j].get(key)
        if value is None:
            return None
        gamma, a, b = key
        faces = [a, b]
        faces.insert(j, value)
        return gamma, tuple(faces)


def three_multiplications(pi: SimplicialMap, check: bool = True) -> ThreeMultiplications:
    """
    Read the 3-multiplications off a 2-groupoid Kan fibration.

    Args:
        pi: Map A -> X
        check: Verify the fibration conditions and the coherence clauses

    Returns:
        ThreeMultiplications

    Raises:
        NotAFibration: pi is not a 2-groupoid Kan fibration
        CoherenceFailure: a coherence clause fails
    """
    if check:
        require_kan_fibration(pi)
    A = pi.source
    tables: Dict[int, Dict[MultKey, int]] = {0: {}, 1: {}, 2: {}}
    for t in range(A.size(2)):
        gamma = pi(2, t)
        faces = A.boundary(2, t)
        for j in range(3):
            rest = tuple(f for i, f in enumerate(faces) if i != j)
            if tables[j].setdefault((gamma,) + rest, faces[j]) != faces[j]:
                raise NotAFibration(f"{pi.name}: Kan!(2,{j}) fails over triangle {gamma}",
                                    witness={'gamma': gamma, 'faces': list(rest)})
    mults = ThreeMultiplications(low_data(pi), tables)
    if check:
        for j in range(3):
            missing = [h for h in mults.horns(j) if h not in tables[j]]
            if missing:
                raise NotAFibration(f"{pi.name}: Kan(2,{j}) fails", witness={'horn': list(missing[0])})
        verify_coherence(mults)
    logger.info(f"{pi.name}: 3-multiplications with {[len(tables[j]) for j in range(3)]} entries")
    return mults


def verify_coherence(mults: ThreeMultiplications, clauses: Sequence[str] = CLAUSES) -> None:
    """
    Check the coherence clauses: (i) the m_j are mutually inverse, (ii) units,
    (iii) associativity of m_1 over every 3-simplex of X.

    Raises:
        CoherenceFailure: with the clause and the offending data
    """
    low, X = mults.low, mults.low.base
    if "i" in clauses:
        filled = {}
        for j in range(3):
            filled[j] = set()
            for key in mults.tables[j]:
                gamma, faces = mults.complete(j, key)
                filled[j].add((gamma, faces))
                for i in range(3):
                    rest = tuple(f for t, f in enumerate(faces) if t != i)
                    if mults.m(i, gamma, *rest) != faces[i]:
                        raise CoherenceFailure("i", f"m_{j} and m_{i} disagree over triangle {gamma}",
                                               witness={'from': j, 'to': i, 'gamma': gamma, 'faces': list(faces)})
        if not filled[0] == filled[1] == filled[2]:
            raise CoherenceFailure("i", "the m_j fill different sets of triangles")

    if "ii" in clauses:
        for eta in range(low.n_edges):
            e = low.pi1[eta]
            left = mults.m(1, int(X.degeneracy(1, 0)[e]), eta, low.s0[low.d1[eta]])
            right = mults.m(1, int(X.degeneracy(1, 1)[e]), low.s0[low.d0[eta]], eta)
            if left != eta or right != eta:
                raise CoherenceFailure("ii", f"units fail at edge {eta}",
                                       witness={'edge': eta, 'left': left, 'right': right})

    if "iii" in clauses:
        for gamma in range(X.size(3)):
            edge = {(a, b): X.apply_operator(3, gamma, (a, b)) for a in range(4) for b in range(a + 1, 4)}
            tri = {abc: X.apply_operator(3, gamma, abc) for abc in ((0, 1, 2), (0, 2, 3), (1, 2, 3), (0, 1, 3))}
            for e01 in low.over(edge[(0, 1)]):
                for e12 in low.over(edge[(1, 2)]):
                    if low.d1[e12] != low.d0[e01]:
                        continue
                    for e23 in low.over(edge[(2, 3)]):
                        if low.d1[e23] != low.d0[e12]:
                            continue
                        e02 = mults.m(1, tri[(0, 1, 2)], e12, e01)
                        e13 = mults.m(1, tri[(1, 2, 3)], e23, e12)
                        first = None if e02 is None else mults.m(1, tri[(0, 2, 3)], e23, e02)
                        second = None if e13 is None else mults.m(1, tri[(0, 1, 3)], e13, e01)
                        if first is None or first != second:
                            raise CoherenceFailure(
                                "iii", f"the two routes over 3-simplex {gamma} disagree",
                                witness={'gamma': gamma, 'edges': [e01, e12, e23], 'routes': [first, second]},
                            )


def reconstruct_fibration(
    low: LowData,
    mults: ThreeMultiplications,
    check: bool = True,
    name: Optional[str] = None,
) -> SimplicialMap:
    """
    Rebuild A -> X from its levels 0 and 1 and the 3-multiplications.

    A_2 is Hom(Lambda^2_1, pi) filled by m_1, and A_3 consists of the
    boundaries of 3-simplices of X made of elements of A_2. A is stored up
    to level 3 and coskeletal above.

    Args:
        low: Levels 0 and 1
        mults: 3-multiplications
        check: Verify the low data, the coherence clauses and the unique filler conditions

    Returns:
        The reconstructed map A -> X

    Raises:
        IncoherentInput: the data does not assemble into a Kan fibration
        CoherenceFailure: a coherence clause fails
    """
    X = low.base
    name = name or f"rec({low.name})"
    if check:
        low.validate()
        verify_coherence(mults)

    triangles = sorted(mults.complete(1, key) for key in mults.tables[1])
    tri_index = {t: x for x, t in enumerate(triangles)}

    def degenerate_triangle(eta: int, j: int) -> int:
        if j == 0:
            faces = (eta, eta, low.s0[low.d1[eta]])
        else:
            faces = (low.s0[low.d0[eta]], eta, eta)
        key = (int(X.degeneracy(1, j)[low.pi1[eta]]), faces)
        if key not in tri_index:
            raise IncoherentInput(f"{name}: s_{j} of edge {eta} is not a filled horn")
        return tri_index[key]

    s_level1 = [[degenerate_triangle(eta, j) for eta in range(low.n_edges)] for j in range(2)]
    faces2 = [[faces[i] for _, faces in triangles] for i in range(3)]
    level2_labels = [(X.label(2, g), tuple(low.edge_labels[f] for f in faces)) for g, faces in triangles]
    skeleton = make_truncated(
        [low.object_labels, low.edge_labels, level2_labels],
        {1: [low.d0, low.d1], 2: faces2},
        {0: [low.s0], 1: s_level1},
        cosk_level=2, name=f"{name}_2",
    )
    pi2 = [g for g, _ in triangles]

    tetrahedra: List[Tuple[int, Tuple[int, ...]]] = []
    table = skeleton.face_table(3)
    for z in range(skeleton.size(3)):
        boundary = tuple(int(v) for v in table[:, z])
        for gamma in X.lookup(3, [pi2[a] for a in boundary]):
            tetrahedra.append((int(gamma), boundary))
    tet_index = {t: x for x, t in enumerate(tetrahedra)}

    def degenerate_tetrahedron(a: int, j: int) -> int:
        faces = []
        for i in range(4):
            if i < j:
                faces.append(s_level1[j - 1][faces2[i][a]])
            elif i in (j, j + 1):
                faces.append(a)
            else:
                faces.append(s_level1[j][faces2[i - 1][a]])
        key = (int(X.degeneracy(2, j)[pi2[a]]), tuple(faces))
        if key not in tet_index:
            raise IncoherentInput(f"{name}: s_{j} of triangle {a} has no 3-simplex")
        return tet_index[key]

    level3_labels = [(gamma, tuple(level2_labels[a] for a in boundary)) for gamma, boundary in tetrahedra]
    A = make_truncated(
        [low.object_labels, low.edge_labels, level2_labels, level3_labels],
        {1: [low.d0, low.d1], 2: faces2, 3: [[b[i] for _, b in tetrahedra] for i in range(4)]},
        {0: [low.s0], 1: s_level1, 2: [[degenerate_tetrahedron(a, j) for a in range(len(triangles))]
                                       for j in range(3)]},
        cosk_level=3, name=name, dimension=None,
    )
    pi = SimplicialMap(A, X, [low.pi0, low.pi1, pi2, [g for g, _ in tetrahedra]], name=f"{name}->{X.name}")
    if check:
        failing = [f"Kan!({m},{k})" for m in (2, 3) for k in range(m + 1)
                   if not kan(pi, m, k, unique=True).holds]
        if failing:
            raise IncoherentInput(f"{name}: unique filler conditions fail", witness={'failing': failing})
    logger.info(f"reconstructed {A}")
    return pi


@dataclass
class ActionData:
    """
    The categorified action encoded by a 2-groupoid Kan fibration pi: A -> X.

    The fibre groupoid E acts on the carrier A_1 on both sides and the arrow
    groupoid of X (objects X_1, arrows bigons) acts by changing the edge of
    X below. The associator identifies pairs (a, b) of composable edges up
    to E with pairs (c, d) of an edge and a triangle of X up to bigons, by
    (a, b) -> (d_1 t, pi t) for every triangle t of A with d_2 t = a, d_0 t = b.
    """

    fibration: SimplicialMap
    low: LowData
    mults: ThreeMultiplications
    fiber: FinGroupoid
    fiber_arrows: List[int]
    arrows: BigonGroupoid
    moment: List[int]
    left: Dict[Tuple[int, int], int]
    right: Dict[Tuple[int, int], int]
    bigon: Dict[Tuple[int, int], int]
    associator: Dict[int, int]
    pair_reps: List[Tuple[int, int]]
    mixed_reps: List[Tuple[int, int]]
    unitor: Dict[int, int]
    checks: Dict[str, int] = field(default_factory=dict)

    def summary(self) -> pd.DataFrame:
        rows = [{'property': name, 'holds': True, 'evaluated': n} for name, n in self.checks.items()]
        return pd.DataFrame(rows, columns=['property', 'holds', 'evaluated'])


def _check(condition: bool, clause: str, message: str, witness: Dict) -> None:
    if not condition:
        raise CoherenceFailure(clause, message, witness=witness)


def extract_action(pi: SimplicialMap, check: bool = True) -> ActionData:
    """
    Extract the categorified action data from a 2-groupoid Kan fibration.

    Args:
        pi: Map A -> X
        check: Verify the fibration conditions first

    Returns:
        ActionData whose ``checks`` count the evaluated instances of each property

    Raises:
        NotAFibration: pi is not a 2-groupoid Kan fibration
        CoherenceFailure: an action law, the associator, the unitor, the
            triangle or the pentagon fails
    """
    mults = three_multiplications(pi, check=check)
    low, X = mults.low, pi.target
    checks: Dict[str, int] = {}

    def m1(gamma: int, d0: int, d2: int) -> int:
        value = mults.m(1, gamma, d0, d2)
        if value is None:
            raise NotAFibration(f"{pi.name}: no filler over triangle {gamma}", witness={'faces': [d0, d2]})
        return value

    degenerate_edge = [int(X.degeneracy(0, 0)[x]) for x in range(X.size(0))]
    fiber_arrows = [eta for eta in range(low.n_edges) if low.pi1[eta] == degenerate_edge[low.pi0[low.d0[eta]]]]
    pos = {eta: t for t, eta in enumerate(fiber_arrows)}
    into: Dict[int, List[int]] = {}
    for eta in fiber_arrows:
        into.setdefault(low.d1[eta], []).append(eta)
    compose = {}
    for g in fiber_arrows:
        for f in into.get(low.d0[g], []):
            x = low.pi0[low.d0[f]]
            flat = int(X.degeneracy(1, 0)[degenerate_edge[x]])
            compose[(pos[g], pos[f])] = pos[m1(flat, f, g)]
    E = FinGroupoid(
        low.object_labels, [low.edge_labels[eta] for eta in fiber_arrows],
        [low.d0[eta] for eta in fiber_arrows], [low.d1[eta] for eta in fiber_arrows],
        [pos[low.s0[a]] for a in range(low.n_objects)], compose, name=f"E({pi.source.name})",
    )
    G = bigon_groupoid(X, check=check)

    left, right, bigon = {}, {}, {}
    for eta in range(low.n_edges):
        e = low.pi1[eta]
        for eps in fiber_arrows:
            if low.d0[eps] == low.d1[eta]:
                left[(eps, eta)] = m1(int(X.degeneracy(1, 0)[e]), eta, eps)
            if low.d1[eps] == low.d0[eta]:
                right[(eta, eps)] = m1(int(X.degeneracy(1, 1)[e]), eps, eta)
        for beta in G.arrows:
            if int(X.face(2, 2)[beta]) == e:
                bigon[(eta, beta)] = m1(beta, low.s0[low.d0[eta]], eta)

    # action laws and commutation
    inv = {eps: fiber_arrows[E.inv(pos[eps])] for eps in fiber_arrows}
    for (eps, eta), out in left.items():
        for eps2 in fiber_arrows:
            if low.d0[eps2] == low.d1[out]:
                both = fiber_arrows[E.comp(pos[eps2], pos[eps])]
                _check(left[(eps2, out)] == left[(both, eta)], "action", "left action is not associative",
                       {'edge': eta, 'arrows': [eps2, eps]})
        for eps2 in fiber_arrows:
            if (eta, eps2) in right:
                _check(right[(out, eps2)] == left[(eps, right[(eta, eps2)])], "action",
                       "left and right actions do not commute", {'edge': eta})
        for beta in G.arrows:
            if (eta, beta) in bigon:
                _check(bigon[(out, beta)] == left[(eps, bigon[(eta, beta)])], "action",
                       "left action and bigon action do not commute", {'edge': eta, 'bigon': beta})
    for (eta, eps), out in right.items():
        for eps2 in fiber_arrows:
            if low.d1[eps2] == low.d0[out]:
                both = fiber_arrows[E.comp(pos[eps], pos[eps2])]
                _check(right[(out, eps2)] == right[(eta, both)], "action", "right action is not associative",
                       {'edge': eta, 'arrows': [eps, eps2]})
        for beta in G.arrows:
            if (eta, beta) in bigon:
                _check(bigon[(out, beta)] == right[(bigon[(eta, beta)], eps)], "action",
                       "right action and bigon action do not commute", {'edge': eta, 'bigon': beta})
    arrow_pos = {beta: t for t, beta in enumerate(G.arrows)}
    for (eta, beta), out in bigon.items():
        for beta2 in G.arrows:
            if (out, beta2) in bigon:
                both = G.arrows[G.groupoid.comp(arrow_pos[beta], arrow_pos[beta2])]
                _check(bigon[(out, beta2)] == bigon[(eta, both)], "action", "bigon action is not associative",
                       {'edge': eta, 'bigons': [beta, beta2]})
    for eta in range(low.n_edges):
        unit = int(X.degeneracy(1, 1)[low.pi1[eta]])
        _check(bigon[(eta, unit)] == eta and left[(low.s0[low.d1[eta]], eta)] == eta
               and right[(eta, low.s0[low.d0[eta]])] == eta, "action", "units do not act trivially", {'edge': eta})
    checks['actions'] = len(left) + len(right) + len(bigon)

    # associator
    A = pi.source
    pairs = sorted({(low_a, low_b) for low_a in range(low.n_edges) for low_b in range(low.n_edges)
                    if low.d0[low_a] == low.d1[low_b]})
    mixed = sorted({(c, d) for c in range(low.n_edges) for d in range(X.size(2))
                    if low.pi1[c] == int(X.face(2, 1)[d])})

    def moved(d: int, w: int, beta: int) -> int:
        hits = move_triangle(X, d, w, beta, "right")
        if len(hits) != 1:
            raise NotA2Groupoid(f"{X.name}: moving triangle {d} by bigon {beta} gives {len(hits)} triangles")
        return hits[0]

    pair_moves = [((a, b), (right[(a, eps)], left[(inv[eps], b)]))
                  for a, b in pairs for eps in fiber_arrows if low.d1[eps] == low.d0[a]]
    mixed_moves = [((c, d), (bigon[(c, beta)], moved(d, 1, beta)))
                   for c, d in mixed for beta in G.arrows if (c, beta) in bigon]
    pair_reps, pair_orbit = find_orbits(pairs, pair_moves)
    mixed_reps, mixed_orbit = find_orbits(mixed, mixed_moves)

    alpha: Dict[int, int] = {}
    for t in range(A.size(2)):
        src = pair_orbit[(int(A.face(2, 2)[t]), int(A.face(2, 0)[t]))]
        dst = mixed_orbit[(int(A.face(2, 1)[t]), pi(2, t))]
        _check(alpha.setdefault(src, dst) == dst, "associator", "associator depends on representatives",
               {'triangle': t, 'images': [alpha[src], dst]})
    _check(len(alpha) == len(pair_reps) and sorted(alpha.values()) == list(range(len(mixed_reps))),
           "associator", "associator is not a bijection of orbits",
           {'pairs': len(pair_reps), 'mixed': len(mixed_reps), 'hit': len(set(alpha.values()))})
    checks['associator'] = A.size(2)

    def through(a: int, b: int) -> int:
        return alpha[pair_orbit[(a, b)]]

    equivariance = 0
    for t in range(A.size(2)):
        a, c, b = (int(A.face(2, i)[t]) for i in (2, 1, 0))
        d = pi(2, t)
        for eps in fiber_arrows:
            if (eps, a) in left:
                _check(through(left[(eps, a)], b) == mixed_orbit[(left[(eps, c)], d)], "associator",
                       "associator is not equivariant for the left action", {'triangle': t, 'arrow': eps})
                equivariance += 1
            if (b, eps) in right:
                _check(through(a, right[(b, eps)]) == mixed_orbit[(right[(c, eps)], d)], "associator",
                       "associator is not equivariant for the right action", {'triangle': t, 'arrow': eps})
                equivariance += 1
        for beta in G.arrows:
            if (a, beta) in bigon:
                _check(through(bigon[(a, beta)], b) == mixed_orbit[(c, moved(d, 2, beta))], "associator",
                       "associator is not equivariant for bigons on the first edge", {'triangle': t, 'bigon': beta})
                equivariance += 1
            if (b, beta) in bigon:
                _check(through(a, bigon[(b, beta)]) == mixed_orbit[(c, moved(d, 0, beta))], "associator",
                       "associator is not equivariant for bigons on the second edge", {'triangle': t, 'bigon': beta})
                equivariance += 1
    checks['equivariance'] = equivariance

    # unitor: E_1 is the part of A_1 over degenerate edges, and the right action restricts to composition
    unitor = {t: eta for t, eta in enumerate(fiber_arrows)}
    for (g, f), h in E.compose.items():
        _check(right[(fiber_arrows[g], fiber_arrows[f])] == fiber_arrows[h], "unitor",
               "the unitor does not intertwine composition", {'pair': [g, f]})
    checks['unitor'] = len(E.compose)

    for eta in range(low.n_edges):
        e = low.pi1[eta]
        _check(through(eta, low.s0[low.d0[eta]]) == mixed_orbit[(eta, int(X.degeneracy(1, 1)[e]))],
               "triangle", "unit on the right is not absorbed", {'edge': eta})
        _check(through(low.s0[low.d1[eta]], eta) == mixed_orbit[(eta, int(X.degeneracy(1, 0)[e]))],
               "triangle", "unit on the left is not absorbed", {'edge': eta})
    checks['triangle'] = 2 * low.n_edges

    verify_coherence(mults, clauses=("iii",))
    checks['pentagon'] = X.size(3)

    logger.info(f"{pi.name}: action of {G.n_arrows} bigons on {low.n_edges} edges, "
                f"{len(pair_reps)} associator orbits")
    return ActionData(pi, low, mults, E, fiber_arrows, G, list(low.pi0), left, right, bigon, alpha,
                      pair_reps, mixed_reps, unitor, checks)
