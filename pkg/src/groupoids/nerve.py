"""Nerves of finite categories and the categories they come from."""

import logging
from typing import Dict, List, Tuple, Union

import numpy as np

from src.errors import NotACategoryNerve
from src.groupoids.categories import FinCategory, FinGroupoid
from src.kan.profile import classify_object
from src.simplicial.core import INDEX_DTYPE, TruncatedSSet

logger = logging.getLogger(__name__)


def nerve(C: FinCategory) -> TruncatedSSet:
    """
    The nerve of C, stored up to level 2 (nerves of categories are 2-coskeletal).

    An n-simplex is a string x_0 <- x_1 <- ... <- x_n of composable arrows
    (f_1, ..., f_n) with f_k: x_k -> x_{k-1}. d_0 drops f_1, d_n drops f_n,
    an inner d_i replaces f_i, f_{i+1} by their composite, and s_i inserts the
    identity of x_i.

    Args:
        C: Finite category

    Returns:
        TruncatedSSet labelled by objects, arrows and pairs of arrows
    """
    n_obj, n_arr = C.n_objects, C.n_arrows
    pairs = [(f1, f2) for f1 in range(n_arr) for f2 in range(n_arr) if C.source[f1] == C.target[f2]]
    pair_index = {p: t for t, p in enumerate(pairs)}

    faces = {
        1: np.array([C.source, C.target], dtype=INDEX_DTYPE).reshape(2, n_arr),
        2: np.array([[f2 for _, f2 in pairs],
                     [C.comp(f1, f2) for f1, f2 in pairs],
                     [f1 for f1, _ in pairs]], dtype=INDEX_DTYPE).reshape(3, len(pairs)),
    }
    degens = {
        0: np.array([C.unit], dtype=INDEX_DTYPE).reshape(1, n_obj),
        1: np.array([[pair_index[(C.unit[C.target[f]], f)] for f in range(n_arr)],
                     [pair_index[(f, C.unit[C.source[f]])] for f in range(n_arr)]],
                    dtype=INDEX_DTYPE).reshape(2, n_arr),
    }
    labels = {
        0: list(C.objects),
        1: list(C.arrows),
        2: [(C.arrows[f1], C.arrows[f2]) for f1, f2 in pairs],
    }
    X = TruncatedSSet([n_obj, n_arr, len(pairs)], faces, degens, 2, labels=labels,
                      name=f"N({C.name})")
    logger.debug(f"nerve of {C.name}: sizes {X.sizes(2)}")
    return X


def category_from_nerve(X: TruncatedSSet, check: bool = True) -> Union[FinCategory, FinGroupoid]:
    """
    Read a category off a simplicial set with unique inner fillers.

    Objects are vertices and arrows are edges (from d_0 to d_1); g after f is
    d_1 of the unique 2-simplex with d_0 = f and d_2 = g.

    Args:
        X: Simplicial set
        check: Verify inner Kan with unique inner fillers from level 2 on

    Returns:
        FinGroupoid when the outer 2-horns also fill uniquely, else FinCategory

    Raises:
        NotACategoryNerve: naming the failing condition
    """
    groupoid = False
    if check:
        profile = classify_object(X, max_dim=max(3, X.cosk_level + 1))
        for (base, m, k), result in sorted(profile.results.items(), key=lambda kv: (kv[0][1], kv[0][2] or 0)):
            if base == "Kan" and 0 < k < m and m >= 2 and result.status != "unique":
                raise NotACategoryNerve(
                    f"{X.name} fails Kan!({m},{k}): {result.status}",
                    witness={'m': m, 'k': k, 'horn': result.witness},
                )
        groupoid = all(profile.status("Kan", 2, k) == "unique" for k in (0, 2))

    source = [int(v) for v in X.face(1, 0)]
    target = [int(v) for v in X.face(1, 1)]
    unit = [int(v) for v in X.degeneracy(0, 0)]
    by_horn: Dict[Tuple[int, int], List[int]] = {}
    for t in range(X.size(2)):
        by_horn.setdefault((int(X.face(2, 0)[t]), int(X.face(2, 2)[t])), []).append(t)
    compose = {}
    for g in range(X.size(1)):
        for f in range(X.size(1)):
            if source[g] != target[f]:
                continue
            fillers = by_horn.get((f, g), [])
            if len(fillers) != 1:
                raise NotACategoryNerve(f"{X.name}: composite of edges {g} and {f} is not unique",
                                        witness={'pair': [g, f], 'fillers': len(fillers)})
            compose[(g, f)] = int(X.face(2, 1)[fillers[0]])

    args = (X.labels(0), X.labels(1), source, target, unit, compose)
    name = f"cat({X.name})"
    if groupoid or (not check and FinCategory(*args, name=name, validate=False).is_groupoid()):
        return FinGroupoid(*args, name=name)
    return FinCategory(*args, name=name)
