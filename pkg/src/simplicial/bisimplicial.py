"""Augmented bisimplicial sets, truncated by total degree."""

import itertools
import logging
from typing import Dict, Hashable, List, Optional, Tuple

import numpy as np

from src.errors import BadAugmentation
from src.simplicial.core import INDEX_DTYPE, TruncatedSSet

logger = logging.getLogger(__name__)

Cell = Tuple[int, int]


def grid_cells(bound: int) -> List[Cell]:
    """Cells (i, j) with i, j >= -1 and i + j + 1 <= bound, by total degree then descending i."""
    cells = []
    for total in range(-1, bound + 1):
        for i in range(total, -2, -1):
            j = total - 1 - i
            if j >= -1:
                cells.append((i, j))
    return cells


class AugBiSSet:
    """
    Grid Z_{i,j} (i, j >= -1) with horizontal maps in i and vertical maps in j.

    Horizontal faces d^h_k: Z_{i,j} -> Z_{i-1,j} for 0 <= k <= i, vertical faces
    d^v_k: Z_{i,j} -> Z_{i,j-1} for 0 <= k <= j, and the matching degeneracies,
    stored for cells of total degree i + j + 1 <= bound.
    """

    def __init__(
        self,
        bound: int,
        sizes: Dict[Cell, int],
        hfaces: Dict[Cell, np.ndarray],
        vfaces: Dict[Cell, np.ndarray],
        hdegens: Dict[Cell, np.ndarray],
        vdegens: Dict[Cell, np.ndarray],
        labels: Optional[Dict[Cell, List[Hashable]]] = None,
        name: Optional[str] = None,
    ):
        self.bound = bound
        self.name = name or "Z"
        self._sizes = dict(sizes)
        self._hfaces = {c: np.asarray(t, dtype=INDEX_DTYPE) for c, t in hfaces.items()}
        self._vfaces = {c: np.asarray(t, dtype=INDEX_DTYPE) for c, t in vfaces.items()}
        self._hdegens = {c: np.asarray(t, dtype=INDEX_DTYPE) for c, t in hdegens.items()}
        self._vdegens = {c: np.asarray(t, dtype=INDEX_DTYPE) for c, t in vdegens.items()}
        self._labels = labels or {}

    def __repr__(self) -> str:
        return f"AugBiSSet({self.name}, bound={self.bound})"

    def cells(self) -> List[Cell]:
        return grid_cells(self.bound)

    def size(self, i: int, j: int) -> int:
        return self._sizes[(i, j)]

    def hface(self, i: int, j: int, k: int) -> np.ndarray:
        return self._hfaces[(i, j)][k]

    def vface(self, i: int, j: int, k: int) -> np.ndarray:
        return self._vfaces[(i, j)][k]

    def hdegen(self, i: int, j: int, k: int) -> np.ndarray:
        return self._hdegens[(i, j)][k]

    def vdegen(self, i: int, j: int, k: int) -> np.ndarray:
        return self._vdegens[(i, j)][k]

    def label(self, i: int, j: int, z: int) -> Hashable:
        level = self._labels.get((i, j))
        return level[z] if level is not None else z

    def validate(self) -> None:
        """
        Check that rows and columns are augmented simplicial sets and that
        horizontal and vertical maps commute.

        Raises:
            BadAugmentation: naming the first failing cell and identity
        """
        if self._sizes.get((-1, -1)) != 1:
            raise BadAugmentation("Z_{-1,-1} must be a single point")
        for (i, j) in self.cells():
            if self._sizes.get((i, j)) is None:
                raise BadAugmentation(f"missing cell ({i}, {j})")
            n = self._sizes[(i, j)]
            for table, rows, where in (
                (self._hfaces.get((i, j)), i + 1, (i - 1, j)),
                (self._vfaces.get((i, j)), j + 1, (i, j - 1)),
            ):
                if rows > 0:
                    if table is None or table.shape != (rows, n):
                        raise BadAugmentation(f"face table of cell ({i}, {j}) has wrong shape")
                    if n and (table.min() < 0 or table.max() >= self._sizes[where]):
                        raise BadAugmentation(f"face table of cell ({i}, {j}) leaves cell {where}")

        self._check_direction(horizontal=True)
        self._check_direction(horizontal=False)
        self._check_commuting()

    def _check_direction(self, horizontal: bool) -> None:
        # In local coordinates (a, b): a is the simplicial index, b the fixed one.
        def to_cell(a: int, b: int) -> Cell:
            return (a, b) if horizontal else (b, a)

        def face(a: int, b: int, k: int) -> np.ndarray:
            i, j = to_cell(a, b)
            return self.hface(i, j, k) if horizontal else self.vface(i, j, k)

        def degen(a: int, b: int, k: int) -> Optional[np.ndarray]:
            table = (self._hdegens if horizontal else self._vdegens).get(to_cell(a, b))
            return None if table is None else table[k]

        def fail(cell: Cell, what: str, bad: np.ndarray) -> None:
            hits = np.flatnonzero(bad)
            if hits.size:
                side = "row" if horizontal else "column"
                raise BadAugmentation(f"{side} identity {what} fails at cell {cell} "
                                      f"on element {int(hits[0])}")

        for cell in self.cells():
            a, b = (cell if horizontal else (cell[1], cell[0]))
            if a >= 1:
                for q in range(a + 1):
                    for p in range(q):
                        left = face(a - 1, b, p)[face(a, b, q)]
                        right = face(a - 1, b, q - 1)[face(a, b, p)]
                        fail(cell, "d_p d_q = d_{q-1} d_p", left != right)
            if a >= 0:
                ids = np.arange(self._sizes[cell], dtype=INDEX_DTYPE)
                for q in range(a + 1):
                    s_q = degen(a, b, q)
                    if s_q is None:
                        continue
                    for p in range(a + 2):
                        left = face(a + 1, b, p)[s_q]
                        if p < q:
                            right = degen(a - 1, b, q - 1)[face(a, b, p)]
                        elif p in (q, q + 1):
                            right = ids
                        else:
                            right = degen(a - 1, b, q)[face(a, b, p - 1)]
                        fail(cell, "d s", left != right)

    def _check_commuting(self) -> None:
        for (i, j) in self.cells():
            if i < 0 or j < 0:
                continue
            for k in range(i + 1):
                for l in range(j + 1):
                    left = self.vface(i - 1, j, l)[self.hface(i, j, k)]
                    right = self.hface(i, j - 1, k)[self.vface(i, j, l)]
                    if (left != right).any():
                        raise BadAugmentation(f"d^h_{k} and d^v_{l} do not commute at ({i}, {j})")

    def total(self, name: Optional[str] = None) -> Tuple[TruncatedSSet, Dict[int, List[Cell]]]:
        """
        Assemble the total simplicial set: level m is the union of the cells with i + j + 1 = m.

        Returns:
            (total TruncatedSSet stored up to the bound, m -> cell of each simplex)
        """
        offsets: Dict[Cell, int] = {}
        sizes: List[int] = []
        cell_of: Dict[int, List[Cell]] = {}
        labels: Dict[int, List[Hashable]] = {}
        for m in range(self.bound + 1):
            start = 0
            cell_of[m] = []
            labels[m] = []
            for i in range(m, -2, -1):
                cell = (i, m - 1 - i)
                offsets[cell] = start
                n = self._sizes[cell]
                start += n
                cell_of[m].extend([cell] * n)
                labels[m].extend((cell, self.label(i, cell[1], z)) for z in range(n))
            sizes.append(start)

        faces: Dict[int, np.ndarray] = {}
        degens: Dict[int, np.ndarray] = {}
        for m in range(self.bound + 1):
            face_rows = np.empty((m + 1, sizes[m]), dtype=INDEX_DTYPE)
            degen_rows = np.empty((m + 1, sizes[m]), dtype=INDEX_DTYPE) if m < self.bound else None
            for i in range(m, -2, -1):
                j = m - 1 - i
                cell = (i, j)
                lo, n = offsets[cell], self._sizes[cell]
                for l in range(m + 1):
                    if m >= 1:
                        if l <= i:
                            face_rows[l, lo:lo + n] = offsets[(i - 1, j)] + self.hface(i, j, l)
                        else:
                            face_rows[l, lo:lo + n] = offsets[(i, j - 1)] + self.vface(i, j, l - i - 1)
                    if degen_rows is not None:
                        if l <= i:
                            degen_rows[l, lo:lo + n] = offsets[(i + 1, j)] + self.hdegen(i, j, l)
                        else:
                            degen_rows[l, lo:lo + n] = offsets[(i, j + 1)] + self.vdegen(i, j, l - i - 1)
            if m >= 1:
                faces[m] = face_rows
            if degen_rows is not None:
                degens[m] = degen_rows
        X = TruncatedSSet(sizes, faces, degens, self.bound, labels=labels,
                          name=name or f"T({self.name})")
        return X, cell_of


def box_product(A: TruncatedSSet, B: TruncatedSSet, bound: int) -> AugBiSSet:
    """
    Box product of two simplicial sets viewed as augmented over a point: Z_{i,j} = A_i x B_j.

    Args:
        A: Horizontal factor
        B: Vertical factor
        bound: Total-degree truncation

    Returns:
        AugBiSSet
    """

    def size(X: TruncatedSSet, k: int) -> int:
        return 1 if k < 0 else X.size(k)

    def face(X: TruncatedSSet, k: int, l: int) -> np.ndarray:
        return np.zeros(X.size(0), dtype=INDEX_DTYPE) if k == 0 else X.face(k, l)

    sizes, hfaces, vfaces, hdegens, vdegens, labels = {}, {}, {}, {}, {}, {}
    for (i, j) in grid_cells(bound):
        na, nb = size(A, i), size(B, j)
        sizes[(i, j)] = na * nb
        a_idx = np.repeat(np.arange(na, dtype=INDEX_DTYPE), nb)
        b_idx = np.tile(np.arange(nb, dtype=INDEX_DTYPE), na)
        labels[(i, j)] = [
            (None if i < 0 else A.label(i, a), None if j < 0 else B.label(j, b))
            for a, b in itertools.product(range(na), range(nb))
        ]
        if i >= 0:
            hfaces[(i, j)] = np.stack([face(A, i, l)[a_idx] * nb + b_idx for l in range(i + 1)])
        if j >= 0:
            nb_low = size(B, j - 1)
            vfaces[(i, j)] = np.stack([a_idx * nb_low + face(B, j, l)[b_idx] for l in range(j + 1)])
        if i >= 0 and i + j + 2 <= bound:
            hdegens[(i, j)] = np.stack([A.degeneracy(i, l)[a_idx] * nb + b_idx for l in range(i + 1)])
        if j >= 0 and i + j + 2 <= bound:
            nb_high = size(B, j + 1)
            vdegens[(i, j)] = np.stack([a_idx * nb_high + B.degeneracy(j, l)[b_idx] for l in range(j + 1)])
    return AugBiSSet(bound, sizes, hfaces, vfaces, hdegens, vdegens, labels=labels,
                     name=f"{A.name} box {B.name}")
