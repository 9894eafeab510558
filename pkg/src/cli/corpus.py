"""
Seeded generators of test instances, each tagged with the classification it must receive.

Families: nerves of random preorders and of standard groupoids, groups,
crossed-module 2-groupoids, group homomorphisms and Čech projections with
their bundlisations and cographs, the group-extension fibration, décalages
and the total décalage of N(Z/2).
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from src.bibundles.colored import ColoredSSet, higher_cograph
from src.bibundles.report import classify_bibundle
from src.config import config_value
from src.errors import IncoherentInput, SizeOutOfBounds
from src.groupoids.bibundles import Bimodule, bundlisation, is_morita
from src.groupoids.categories import (
    FinCategory,
    FiniteGroup,
    cyclic_group,
    group_action_groupoid,
    poset_category,
    preorder_category,
    product_group,
    symmetric_group,
)
from src.groupoids.crossed import CrossedModule, crossed_module_morphism
from src.groupoids.functors import Functor, classify_functor
from src.groupoids.standard import standard_groupoid
from src.kan.profile import classify_map, classify_object
from src.simplicial.constructions import decalage
from src.simplicial.core import SimplicialMap, TruncatedSSet
from src.simplicial.shapes import simplex
from src.two_groupoids.comparisons import decalage_bibundle

logger = logging.getLogger(__name__)

SIZE_KEYS = ('max_objects', 'max_group_order', 'max_dimension')


@dataclass
class CorpusInstance:
    """A generated value with the flags its classifier must report."""

    name: str
    family: str
    value: Any
    expected: Dict[str, Any]
    params: Dict[str, Any] = field(default_factory=dict)

    @property
    def kind(self) -> str:
        if isinstance(self.value, ColoredSSet):
            return 'colored'
        if isinstance(self.value, TruncatedSSet):
            return 'sset'
        if isinstance(self.value, SimplicialMap):
            return 'smap'
        if isinstance(self.value, Bimodule):
            return 'bimodule'
        return 'functor'


def corpus_bounds(sizes: Optional[Dict[str, int]] = None) -> Dict[str, int]:
    """
    Generator bounds, defaulting to and capped by the configured ones.

    Raises:
        SizeOutOfBounds: a requested bound exceeds the configured cap or is below 1
    """
    caps = {key: int(config_value(f'corpus.{key}', default)) for key, default in
            zip(SIZE_KEYS, (5, 8, 5))}
    bounds = dict(caps)
    for key, value in (sizes or {}).items():
        if key not in caps:
            raise SizeOutOfBounds(f"unknown corpus size {key!r}; expected one of {', '.join(SIZE_KEYS)}")
        if not 1 <= int(value) <= caps[key]:
            raise SizeOutOfBounds(f"{key} = {value} outside 1..{caps[key]}",
                                  witness={'key': key, 'value': int(value), 'cap': caps[key]})
        bounds[key] = int(value)
    return bounds


def _groupoid_level(C: FinCategory) -> int:
    return 0 if C.n_arrows == C.n_objects else 1


def _random_preorder(rng: np.random.Generator, n: int, name: str) -> FinCategory:
    """Transitive closure of a random relation on 0..n-1 oriented upwards."""
    reach = np.eye(n, dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            reach[i, j] = rng.random() < 0.4
    for k in range(n):
        reach |= reach[:, [k]] & reach[[k], :]
    return preorder_category(n, lambda i, j: bool(reach[i, j]), name=name)


def _random_group(rng: np.random.Generator, max_order: int) -> FiniteGroup:
    choices = [cyclic_group(n) for n in range(1, max_order + 1)]
    if max_order >= 4:
        choices.append(product_group(cyclic_group(2), cyclic_group(2)))
    if max_order >= 6:
        choices.append(symmetric_group(3))
    return choices[int(rng.integers(len(choices)))]


def _random_groupoid(rng: np.random.Generator, bounds: Dict[str, int], t: int) -> FinCategory:
    n = int(rng.integers(1, bounds['max_objects'] + 1))
    points = list(range(n))
    kind = ('pair', 'trivial', 'cech', 'action')[t % 4]
    if kind == 'cech':
        images = [int(v) for v in rng.integers(0, 2, n)]
        return standard_groupoid('cech', points, images, name=f"cech{t}")
    if kind == 'action':
        order = int(rng.integers(1, bounds['max_group_order'] + 1))
        if n <= order and order % n == 0:
            return group_action_groupoid(cyclic_group(order), points, lambda x, g: (x + g) % n,
                                         name=f"rot{t}")
        return group_action_groupoid(cyclic_group(order), points, lambda x, g: x, name=f"fix{t}")
    return standard_groupoid(kind, points, name=f"{kind}{t}")


def _cyclic_homomorphism(rng: np.random.Generator, max_order: int, t: int) -> Functor:
    n = int(rng.integers(1, max_order + 1))
    m = int(rng.integers(1, max_order + 1))
    multipliers = [a for a in range(m) if (a * n) % m == 0]
    a = multipliers[int(rng.integers(len(multipliers)))]
    G, H = cyclic_group(n).as_groupoid(), cyclic_group(m).as_groupoid()
    return Functor(G, H, [0], [(a * x) % m for x in range(n)], name=f"x{a}:Z/{n}->Z/{m}#{t}")


def _cech_projection(rng: np.random.Generator, max_objects: int, t: int) -> Functor:
    """The Čech groupoid of a random map onto {0, .., r-1} projected to its image."""
    n = int(rng.integers(1, max_objects + 1))
    r = int(rng.integers(1, n + 1))
    images = [x % r for x in range(n)]
    rng.shuffle(images)
    C = standard_groupoid('cech', list(range(n)), images, name=f"cech{t}")
    T = standard_groupoid('trivial', list(range(r)), name=f"pt{r}")
    on_objects = [int(images[x]) for x in range(n)]
    on_arrows = [on_objects[C.target[f]] for f in range(C.n_arrows)]
    return Functor(C, T, on_objects, on_arrows, name=f"c{t}:{C.name}->{T.name}")


def _functor_tags(F: Functor) -> Dict[str, Any]:
    """Flags of a group homomorphism or a Čech projection, read off the construction."""
    if F.source.n_objects == 1 and F.target.n_objects == 1:
        iso = sorted(F.on_arrows) == list(range(F.target.n_arrows))
        return {'essentially_surjective': True, 'fully_faithful': iso,
                'weak_equivalence': iso, 'nerve_acyclic': iso}
    return {'essentially_surjective': True, 'fully_faithful': True,
            'weak_equivalence': True, 'nerve_acyclic': True}


CROSSED_MODULES = (
    ('Z/2->1', 2, 1, lambda h: 0),
    ('Z/2->Z/4', 2, 4, lambda h: 2 * h),
    ('Z/3->Z/3', 3, 3, lambda h: h),
    ('1->Z/2', 1, 2, lambda h: 0),
)


def _crossed(t: int) -> CrossedModule:
    name, nh, ng, d = CROSSED_MODULES[t % len(CROSSED_MODULES)]
    H, G = cyclic_group(nh), cyclic_group(ng)
    return CrossedModule(G, H, [d(h) for h in range(nh)], name=f"({name})")


def small_crossed_modules() -> List[CrossedModule]:
    """Crossed modules of order at most four with trivial action: 1->1, Z/2->1, 1->Z/2 and Z/2->Z/2."""
    out = []
    for nh, ng, d in ((1, 1, lambda h: 0), (2, 1, lambda h: 0), (1, 2, lambda h: 0), (2, 2, lambda h: h)):
        H, G = cyclic_group(nh), cyclic_group(ng)
        out.append(CrossedModule(G, H, [d(h) for h in range(nh)], name=f"({H.name}->{G.name})"))
    return out


def _multipliers(n: int, m: int) -> List[int]:
    """The a with x -> a x a homomorphism Z/n -> Z/m."""
    return [a for a in range(m) if (a * n) % m == 0]


def crossed_module_morphisms(modules: Sequence[CrossedModule]) -> List[SimplicialMap]:
    """
    Nerve maps of every morphism between crossed modules of cyclic groups.

    Homomorphism pairs that are not compatible with boundaries and actions are skipped.
    """
    out: List[SimplicialMap] = []
    for X in modules:
        for Y in modules:
            for a in _multipliers(X.G.order, Y.G.order):
                for b in _multipliers(X.H.order, Y.H.order):
                    on_G = [(a * x) % Y.G.order for x in range(X.G.order)]
                    on_H = [(b * h) % Y.H.order for h in range(X.H.order)]
                    try:
                        out.append(crossed_module_morphism(X, Y, on_G, on_H))
                    except IncoherentInput:
                        continue
    logger.debug(f"{len(out)} morphisms between {len(modules)} crossed modules")
    return out


def group_extension() -> Functor:
    """Z/4 -> Z/2, reduction mod 2."""
    return Functor(cyclic_group(4).as_groupoid(), cyclic_group(2).as_groupoid(), [0],
                   [x % 2 for x in range(4)], name="Z/4->Z/2")


def corpus(seed: int = 0, sizes: Optional[Dict[str, int]] = None,
           counts: Optional[Dict[str, int]] = None) -> List[CorpusInstance]:
    """
    Generate the tagged corpus.

    Args:
        seed: Seed of the generator; equal seeds give equal corpora
        sizes: Bounds ``max_objects``, ``max_group_order`` and ``max_dimension``,
            each at most its configured cap
        counts: Instances per random family; defaults to ``corpus.counts``

    Returns:
        List of CorpusInstance in generation order

    Raises:
        SizeOutOfBounds: a bound is outside its range
    """
    bounds = corpus_bounds(sizes)
    configured = dict(config_value('corpus.counts', {}) or {})
    configured.update(counts or {})

    def count(family: str, default: int) -> int:
        return int(configured.get(family, default))

    rng = np.random.default_rng(seed)
    out: List[CorpusInstance] = []

    for d in range(min(bounds['max_dimension'], 3) + 1):
        out.append(CorpusInstance(f"simplex{d}", 'simplex', simplex(d),
                                  {'inner_kan_complex': True, 'kan_complex': d == 0}))

    for t in range(count('categories', 8)):
        n = int(rng.integers(1, bounds['max_objects'] + 1))
        C = _random_preorder(rng, n, f"pre{t}") if t % 2 else poset_category(n, name=f"lin{t}")
        out.append(CorpusInstance(f"category{t}", 'category', C.nerve(),
                                  {'inner_kan_complex': True}, {'category': C}))

    groupoids = []
    for t in range(count('groupoids', 6)):
        G = _random_groupoid(rng, bounds, t)
        groupoids.append(G)
        out.append(CorpusInstance(f"groupoid{t}", 'groupoid', G.nerve(),
                                  {'kan_complex': True, 'groupoid_level': _groupoid_level(G)},
                                  {'category': G}))

    for t in range(count('groups', 4)):
        G = _random_group(rng, bounds['max_group_order']).as_groupoid()
        groupoids.append(G)
        out.append(CorpusInstance(f"group{t}", 'group', G.nerve(),
                                  {'kan_complex': True, 'groupoid_level': _groupoid_level(G)},
                                  {'category': G}))

    for t in range(count('crossed_modules', 3)):
        X = _crossed(t)
        level = 2 if X.H.order > 1 else (1 if X.G.order > 1 else 0)
        out.append(CorpusInstance(f"crossed{t}", 'crossed_module', X.nerve(),
                                  {'kan_complex': True, 'groupoid_level': level},
                                  {'crossed_module': X, 'n': 2}))

    functors = [group_extension()]
    for t in range(count('functors', 6)):
        if t < count('cech', 3):
            functors.append(_cech_projection(rng, bounds['max_objects'], t))
        else:
            functors.append(_cyclic_homomorphism(rng, bounds['max_group_order'], t))
    for t, F in enumerate(functors):
        tags = _functor_tags(F)
        out.append(CorpusInstance(f"functor{t}", 'functor', F, tags))
        if t == 0:
            out.append(CorpusInstance("extension", 'extension', F.nerve_map(), {'kan_fibration': True}))
        if t < count('bimodules', 6):
            out.append(CorpusInstance(f"bund{t}", 'bimodule', bundlisation(F),
                                      {'right_principal': True, 'morita': tags['weak_equivalence']},
                                      {'functor': F}))
        cograph_tags = {'bibundle': True}
        if tags['nerve_acyclic']:
            cograph_tags['right_principal'] = True
        out.append(CorpusInstance(f"cograph{t}", 'cograph', higher_cograph(F.nerve_map()),
                                  cograph_tags, {'functor': F, 'n': 1}))

    for t, G in enumerate(groupoids[:3]):
        D, pi, kappa = decalage(G.nerve())
        out.append(CorpusInstance(f"dec{t}", 'decalage', pi, {'kan_fibration': True}, {'base': G}))
        out.append(CorpusInstance(f"kappa{t}", 'decalage', kappa, {'acyclic': True}, {'base': G}))

    Z2 = cyclic_group(2).as_groupoid()
    out.append(CorpusInstance("total_dec", 'total_decalage', decalage_bibundle(Z2.nerve()),
                              {'morita': True}, {'n': 1}))
    logger.info(f"corpus(seed={seed}): {len(out)} instances")
    return out


def observe(instance: CorpusInstance) -> Dict[str, Any]:
    """The flags the matching classifier reports for an instance."""
    value = instance.value
    kind = instance.kind
    if kind == 'sset':
        return classify_object(value).flags()
    if kind == 'smap':
        return classify_map(value).flags()
    if kind == 'colored':
        return classify_bibundle(value, n=instance.params.get('n', 1)).flags()
    if kind == 'bimodule':
        return {'right_principal': value.right_principal().principal,
                'left_principal': value.left_principal().principal,
                'morita': is_morita(value)}
    return classify_functor(value)


def confirm(instance: CorpusInstance) -> Dict[str, Any]:
    """Compare the tagged flags with the observed ones."""
    observed = observe(instance)
    mismatches = {key: {'expected': want, 'observed': observed.get(key)}
                  for key, want in instance.expected.items() if observed.get(key) != want}
    if mismatches:
        logger.warning(f"{instance.name}: {mismatches}")
    return {'name': instance.name, 'family': instance.family, 'confirmed': not mismatches,
            'mismatches': mismatches}


def corpus_frame(instances: List[CorpusInstance], verify: bool = False) -> pd.DataFrame:
    """One row per instance with its tags, and with the classifier verdict when ``verify``."""
    rows = []
    for inst in instances:
        row = {'name': inst.name, 'family': inst.family, 'kind': inst.kind,
               'value': getattr(inst.value, 'name', ''), 'expected': inst.expected}
        if verify:
            row['confirmed'] = confirm(inst)['confirmed']
        rows.append(row)
    columns = ['name', 'family', 'kind', 'value', 'expected'] + (['confirmed'] if verify else [])
    return pd.DataFrame(rows, columns=columns)
