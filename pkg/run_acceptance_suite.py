"""
Acceptance suite.

Runs the twelve acceptance criteria over two corpus seeds and prints a
pass/fail table. Exit code 0 when every criterion passes.
"""

import logging
import sys
import time
from functools import lru_cache
from itertools import islice
from pathlib import Path
from typing import Callable, List, Tuple

import pandas as pd

sys.path.insert(0, str(Path(__file__).parent))

from src.bibundles.colored import higher_cograph
from src.bibundles.report import classify_bibundle
from src.cli.corpus import corpus, crossed_module_morphisms, group_extension, small_crossed_modules
from src.differentiation.jets import discrete_jet
from src.differentiation.pair_nerve import PointedFinSet
from src.errors import NotFound
from src.extensions.colored_horns import fill_colored_outer_horn, outer_horns
from src.extensions.filtrations import find_filtration, join_collapsibility, verify_certificate
from src.groupoids.categories import cech_groupoid, cyclic_group, pair_groupoid
from src.groupoids.cograph import cograph_bimodule
from src.groupoids.crossed import CrossedModule
from src.groupoids.functors import classify_functor, identity_functor, isomorphic_groupoids
from src.groupoids.nerve import category_from_nerve
from src.kan.conditions import kan
from src.kan.profile import classify_map, classify_object
from src.kan.weak import weak_equivalence_2groupoid
from src.simplicial.constructions import decalage, is_connected, is_coskeletal, join
from src.simplicial.hom import count_maps
from src.simplicial.iso import are_isomorphic, same_labelled
from src.simplicial.shapes import boundary, face_of_simplex, horn, inclusion, simplex, spine, standard_library
from src.two_groupoids.actions import extract_action, low_data, reconstruct_fibration, three_multiplications
from src.two_groupoids.comparisons import (
    associativity_iso,
    bundlisation_functoriality,
    decalage_bibundle,
    tau_comparison,
    unit_comparison,
)
from src.two_groupoids.composition import compose_2bibundles

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

SEEDS = (0, 1)
# at most four objects; eight functors and bundlisations per seed
SIZES = {'max_objects': 4}
COUNTS = {'categories': 25, 'functors': 7, 'bimodules': 8}
MAX_ARROWS = 12


@lru_cache(maxsize=None)
def _corpus(seed: int) -> tuple:
    return tuple(corpus(seed, sizes=SIZES, counts=COUNTS))


def _instances(family: str) -> list:
    return [inst for seed in SEEDS for inst in _corpus(seed) if inst.family == family]


@lru_cache(maxsize=None)
def _crossed_maps() -> tuple:
    return tuple(crossed_module_morphisms(small_crossed_modules()))


def nerve_laws() -> Tuple[bool, str]:
    checked = groupoids = 0
    for inst in _instances('category') + _instances('groupoid') + _instances('group'):
        C = inst.params['category']
        if C.n_arrows > MAX_ARROWS:
            continue
        profile = classify_object(inst.value)
        inner = [r.status for (base, m, k), r in profile.results.items() if base == "Kan" and 0 < k < m]
        if not profile.is_inner_kan or any(s != "unique" for s in inner):
            return False, f"{inst.name}: inner fillers not unique"
        if profile.category_level != (0 if C.n_arrows == C.n_objects else 1):
            return False, f"{inst.name}: category level {profile.category_level}"
        if inst.family != 'category':
            if not profile.is_n_groupoid(1):
                return False, f"{inst.name}: nerve of a groupoid is not a 1-groupoid"
            groupoids += 1
        if not isomorphic_groupoids(category_from_nerve(inst.value), C):
            return False, f"{inst.name}: category_from_nerve does not recover {C.name}"
        checked += 1
    if checked < 50:
        return False, f"only {checked} categories with at most {MAX_ARROWS} arrows"
    return True, f"{checked} nerves, {groupoids} of groupoids"


def coskeletality() -> Tuple[bool, str]:
    checked = 0
    for inst in _instances('category'):
        if not is_coskeletal(inst.value, 2):
            return False, f"{inst.name} is not 2-coskeletal"
        checked += 1
    for points in ([0], [0, 1], [0, 1, 2]):
        cases = [(pair_groupoid(points).nerve(), 0),
                 (cech_groupoid(points, [0] * len(points)).nerve(), 1),
                 (cech_groupoid(points, [p % 2 for p in points]).nerve(), 1)]
        for X, n in cases:
            if not is_coskeletal(X, n):
                return False, f"{X.name} is not {n}-coskeletal"
            checked += 1
    return True, f"{checked} nerves"


def join_identities() -> Tuple[bool, str]:
    checked = 0
    for n in range(3):
        for m in range(3):
            if not are_isomorphic(join(simplex(n), simplex(m)), simplex(n + m + 1)):
                return False, f"Delta^{n} * Delta^{m} is not Delta^{n + m + 1}"
            checked += 1
    for n in range(1, 3):
        for m in range(1, 3):
            families = [(horn(n, k), simplex(n), boundary(m), simplex(m), ("inner", "boundary"), horn(n + m + 1, k))
                        for k in range(1, n)]
            families.append((horn(n, 0), simplex(n), boundary(m), simplex(m), ("left", "boundary"),
                             horn(n + m + 1, 0)))
            families.append((boundary(n), simplex(n), horn(m, m), simplex(m), ("boundary", "right"),
                             horn(n + m + 1, n + m + 1)))
            for A, B, X, Y, flavors, expected in families:
                pushout = join_collapsibility(inclusion(A, B), inclusion(X, Y), flavors)
                if not same_labelled(pushout.union, expected):
                    return False, f"{pushout.union.name} differs from {expected.name}"
                if not same_labelled(pushout.join, simplex(n + m + 1)):
                    return False, f"{pushout.join.name} differs from Delta^{n + m + 1}"
                checked += 1
    return True, f"{checked} identities"


def collapsibility() -> Tuple[bool, str]:
    certified = 0
    cases = [(face_of_simplex(n, list(range(k + 1))), simplex(n), "all") for n in range(1, 4) for k in range(n)]
    cases += [(spine(n), horn(n, k), "inner") for n in range(2, 5) for k in range(1, n)]
    for A, B, flavor in cases:
        i = inclusion(A, B)
        ok, _ = verify_certificate(find_filtration(i, flavor), i)
        if not ok:
            return False, f"{A.name} -> {B.name}: certificate does not replay"
        certified += 1
    for f, g, flavors in [((horn(2, 1), simplex(2)), (boundary(1), simplex(1)), ("inner", "boundary")),
                          ((boundary(1), simplex(1)), (horn(1, 1), simplex(1)), ("boundary", "right"))]:
        pushout = join_collapsibility(inclusion(*f), inclusion(*g), flavors)
        ok, _ = verify_certificate(pushout.certificate, pushout.inclusion)
        if not ok:
            return False, f"join pushout {pushout.union.name}: certificate does not replay"
        certified += 1
    try:
        find_filtration(inclusion(boundary(2), simplex(2)), "inner")
        return False, "boundary of Delta^2 admitted an inner filtration"
    except NotFound:
        pass
    return True, f"{certified} certificates, boundary case exhausted"


def decalage_fibrations() -> Tuple[bool, str]:
    library = standard_library(2)
    shapes = [S for S in library if is_connected(S)]
    # coning off a disconnected shape glues its components at the cone point
    skipped = [S.name for S in library if not is_connected(S)]
    logger.info(f"adjunction counts over connected shapes; skipping {', '.join(skipped) or 'none'}")
    targets = [inst.value for inst in _instances('groupoid') + _instances('group') + _instances('crossed_module')]
    for X in targets:
        D, pi, kappa = decalage(X)
        if not classify_map(pi).is_kan or not classify_map(kappa).is_acyclic:
            return False, f"{X.name}: décalage maps misclassified"
        for S in shapes:
            if count_maps(join(S, simplex(0)), X) != count_maps(S, D):
                return False, f"{X.name}: adjunction count differs on {S.name}"
    return True, f"{len(targets)} décalages, {len(shapes)} shapes"


def hs_colored_kan() -> Tuple[bool, str]:
    bimodules = [inst.value for inst in _instances('bimodule')]
    bimodules += [P.opposite() for P in bimodules]
    for P in bimodules:
        G = cograph_bimodule(P)
        colored = (kan(G.structure, 1, 0).holds
                   and all(kan(G.structure, m, 0, unique=True).holds for m in (2, 3)))
        principal = P.right_principal().principal
        if colored != principal:
            return False, f"{P.name}: right principal {principal}, colored Kan {colored}"
    if len(bimodules) < 30:
        return False, f"only {len(bimodules)} bimodules"
    return True, f"{len(bimodules)} bimodules"


def cograph_profiles() -> Tuple[bool, str]:
    maps = [(F.nerve_map(), 1, classify_functor(F)['nerve_acyclic']) for F in
            (inst.value for inst in _instances('functor'))]
    maps += [(f, 2, classify_map(f, weak=False).is_acyclic) for f in _crossed_maps()]
    for f, n, acyclic in maps:
        G = higher_cograph(f)
        frame = classify_bibundle(G, n).to_frame()
        colored = frame[frame['group'] == 'colored']
        if not colored['ok'].astype(bool).all():
            return False, f"cograph of {f.name} fails a colored condition"
        if acyclic:
            if not all(kan(G.structure, m, k).holds for m in range(1, n + 3) for k in range(m + 1)):
                return False, f"cograph of nerve-acyclic {f.name} is not a Kan fibration"
    if len(maps) < 20:
        return False, f"only {len(maps)} morphisms"
    return True, f"{len(maps)} cographs"


def colored_outer_horns() -> Tuple[bool, str]:
    filled = 0
    bibundles = [inst.value for inst in _instances('cograph')[:3]]
    bibundles.append(decalage_bibundle(cyclic_group(2).as_groupoid().nerve()))
    for G in bibundles:
        for m in (2, 3, 4):
            for i in range(2, m + 2):
                for h in islice(outer_horns(G, m, i), 2):
                    result = fill_colored_outer_horn(G, h)
                    if not result.in_enumeration or not result.consistent:
                        return False, f"{G.name}: filler of a level {m} horn is not a raw lift"
                    if m >= 3 and not result.unique:
                        return False, f"{G.name}: level {m} horn has {len(result.fillers)} fillers"
                    filled += 1
    return True, f"{filled} horns filled"


def action_round_trip() -> Tuple[bool, str]:
    pis = [group_extension().nerve_map()]
    pis += [decalage(inst.value)[1] for inst in _instances('crossed_module')[:2]]
    for pi in pis:
        data = extract_action(pi)
        rebuilt = reconstruct_fibration(low_data(pi), three_multiplications(pi))
        if not are_isomorphic(rebuilt.source, pi.source):
            return False, f"{pi.name}: reconstruction is not isomorphic"
        logger.info(f"{pi.name}: {int(data.summary()['evaluated'].sum())} law instances evaluated")
    return True, f"{len(pis)} fibrations"


def composition_suite() -> Tuple[bool, str]:
    X = cyclic_group(2).as_groupoid().nerve()
    D = decalage_bibundle(X)
    composite = compose_2bibundles(D, D)
    if not composite.report.right_principal:
        return False, f"{composite.colored.name} is not right principal"
    if composite.square is None or not composite.square.holds:
        return False, f"{composite.colored.name}: variant square does not commute"
    if not tau_comparison(composite).isomorphism:
        return False, "bigons of the composite differ from tau of the fibre product"
    for side in ("left", "right"):
        if not unit_comparison(D, side=side).acyclic:
            return False, f"{side} unit comparison is not weakly acyclic"
    F = group_extension()
    f = F.nerve_map()
    g = identity_functor(F.target).nerve_map()
    if not bundlisation_functoriality(f, g).acyclic:
        return False, "bundlisation comparison is not weakly acyclic"
    triples = [(D, D, D), (D, D, decalage_bibundle(X, name="Dec'")), (decalage_bibundle(X, name="Dec''"), D, D)]
    for triple in triples:
        if not associativity_iso(*triple).isomorphism:
            return False, f"associativity fails on {[G.name for G in triple]}"
    return True, f"composite of two {D.name}, {len(triples)} associativity triples"


def weak_equivalences() -> Tuple[bool, str]:
    maps = [inst.value.nerve_map() for inst in _instances('functor')]
    maps += [decalage(inst.value)[1] for inst in _instances('group')]
    maps += [decalage(inst.value)[1] for inst in _instances('crossed_module')]
    maps += list(_crossed_maps())
    for f in maps:
        report = weak_equivalence_2groupoid(f)
        weak = classify_map(f).is_weak_acyclic
        if report.weak_equivalence != weak:
            return False, f"{f.name}: weak equivalence {report.weak_equivalence}, weak acyclic {weak}"
    if len(maps) < 30:
        return False, f"only {len(maps)} morphisms"
    return True, f"{len(maps)} morphisms, {len(_crossed_maps())} between crossed modules"


def discrete_jets() -> Tuple[bool, str]:
    targets = [
        (cyclic_group(2).as_groupoid().nerve(), 1),
        (pair_groupoid([0, 1, 2]).nerve(), 1),
        (CrossedModule(cyclic_group(1), cyclic_group(2), [0, 0], name="(Z/2->1)").nerve(), 2),
    ]
    for X, n in targets:
        for size in (1, 2, 3, 4):
            result = discrete_jet(X, PointedFinSet.of_size(size))
            if result.stabilized_at != n or not result.verified:
                return False, f"{X.name}, |S| = {size}: stabilised at {result.stabilized_at}"
    return True, f"{len(targets)} targets"


CRITERIA: List[Tuple[str, Callable[[], Tuple[bool, str]]]] = [
    ("1 nerve laws", nerve_laws),
    ("2 coskeletality", coskeletality),
    ("3 join identities", join_identities),
    ("4 collapsibility certificates", collapsibility),
    ("5 décalage", decalage_fibrations),
    ("6 HS and colored Kan", hs_colored_kan),
    ("7 cograph profile", cograph_profiles),
    ("8 colored outer horns", colored_outer_horns),
    ("9 action round trip", action_round_trip),
    ("10 composition", composition_suite),
    ("11 weak equivalences", weak_equivalences),
    ("12 discrete jets", discrete_jets),
]


def main() -> int:
    rows = []
    for name, criterion in CRITERIA:
        logger.info("=" * 60)
        logger.info(f"Criterion {name}")
        logger.info("=" * 60)
        start = time.perf_counter()
        try:
            passed, detail = criterion()
        except Exception as exc:
            logger.exception(f"criterion {name} raised")
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        elapsed = time.perf_counter() - start
        logger.info(f"{'PASS' if passed else 'FAIL'}: {detail} ({elapsed:.1f}s)")
        rows.append({'criterion': name, 'passed': passed, 'detail': detail, 'seconds': round(elapsed, 2)})

    summary = pd.DataFrame(rows)
    logger.info("=" * 60)
    logger.info("Acceptance summary")
    logger.info("=" * 60)
    print(summary.to_string(index=False))
    return 0 if summary['passed'].all() else 1


if __name__ == "__main__":
    sys.exit(main())
