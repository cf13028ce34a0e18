"""
Exact Euclidean nearest-neighbour search over the scaled sample.

A balanced k-d tree: each internal node splits on the dimension of widest
spread at the median. Queries can skip already-claimed rows and resolve equal
distances in favour of the smallest original row index.
"""
from typing import Iterable, Optional, Tuple, Union

import numpy as np

from src.exception import Exhausted

LEAF_SIZE = 16


def squared_distances(points: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Squared distances accumulated one coordinate at a time, identical for any row subset."""
    d2 = np.zeros(points.shape[0])
    for k in range(points.shape[1]):
        diff = points[:, k] - q[k]
        d2 += diff * diff
    return d2


class _Node:
    __slots__ = ("dim", "split", "left", "right", "rows")

    def __init__(self, dim=-1, split=0.0, left=None, right=None, rows=None):
        self.dim = dim
        self.split = split
        self.left = left
        self.right = right
        self.rows = rows

    @property
    def is_leaf(self) -> bool:
        return self.rows is not None


class PointIndex:
    """Immutable k-d tree over the rows of `points`; queries are read-only."""

    def __init__(self, points: np.ndarray, leaf_size: int = LEAF_SIZE):
        points = np.asarray(points, dtype=float)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if points.shape[0] < 1:
            raise ValueError("cannot index an empty point set")
        self.points = points
        self.leaf_size = max(1, int(leaf_size))
        self.root = self._build(np.arange(points.shape[0]))

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def _build(self, rows: np.ndarray) -> _Node:
        if rows.size <= self.leaf_size:
            return _Node(rows=np.sort(rows))
        block = self.points[rows]
        spread = block.max(axis=0) - block.min(axis=0)
        dim = int(np.argmax(spread))
        if spread[dim] == 0.0:
            # all rows coincide
            return _Node(rows=np.sort(rows))
        order = np.argsort(block[:, dim], kind="stable")
        mid = rows.size // 2
        split = float(block[order[mid], dim])
        return _Node(
            dim=dim,
            split=split,
            left=self._build(rows[order[:mid]]),
            right=self._build(rows[order[mid:]]),
        )

    def nearest(self, q, excluded: Optional[np.ndarray] = None) -> Tuple[int, float]:
        q = np.asarray(q, dtype=float).ravel()
        if q.shape[0] != self.points.shape[1]:
            raise ValueError(f"query has {q.shape[0]} coordinates, index has {self.points.shape[1]}")
        best = [np.inf, -1]
        self._search(self.root, q, excluded, best)
        if best[1] < 0:
            raise Exhausted("every indexed point is excluded")
        return int(best[1]), float(np.sqrt(best[0]))

    def _search(self, node: _Node, q: np.ndarray, excluded, best: list) -> None:
        if node.is_leaf:
            rows = node.rows
            if excluded is not None:
                rows = rows[~excluded[rows]]
                if rows.size == 0:
                    return
            d2 = squared_distances(self.points[rows], q)
            k = int(np.argmin(d2))          # rows are sorted, so argmin keeps the smallest index on ties
            if d2[k] < best[0] or (d2[k] == best[0] and rows[k] < best[1]):
                best[0], best[1] = float(d2[k]), int(rows[k])
            return

        gap = q[node.dim] - node.split
        near, far = (node.left, node.right) if gap < 0 else (node.right, node.left)
        self._search(near, q, excluded, best)
        # equality still descends so that an equidistant lower index can win
        if gap * gap <= best[0]:
            self._search(far, q, excluded, best)


def build_index(points) -> PointIndex:
    return PointIndex(points)


def exclusion_mask(n: int, excluded: Union[None, np.ndarray, Iterable[int]]) -> Optional[np.ndarray]:
    if excluded is None:
        return None
    if isinstance(excluded, np.ndarray) and excluded.dtype == bool:
        if excluded.shape[0] != n:
            raise ValueError(f"exclusion mask has length {excluded.shape[0]}, index has {n} points")
        return excluded
    mask = np.zeros(n, dtype=bool)
    rows = np.fromiter((int(i) for i in excluded), dtype=int)
    if rows.size:
        mask[rows] = True
    return mask


def nearest(index: PointIndex, q, excluded=None) -> Tuple[int, float]:
    """
    Closest non-excluded row to q and its Euclidean distance.

    `excluded` may be a set/list of row indices or a boolean mask. Raises
    Exhausted when every row is excluded.
    """
    return index.nearest(q, exclusion_mask(index.size, excluded))
