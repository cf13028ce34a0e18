import numpy as np
import pytest

from src.components.spatial_index import PointIndex, build_index, exclusion_mask, nearest
from src.exception import Exhausted


def brute_nearest(points, q, excluded=None):
    d2 = ((points - q) ** 2).sum(axis=1)
    if excluded is not None:
        d2 = np.where(excluded, np.inf, d2)
    best = d2.min()
    return int(np.flatnonzero(d2 == best)[0])


def test_matches_linear_scan(rng):
    points = rng.standard_normal((500, 3))
    index = build_index(points)
    for q in rng.standard_normal((50, 3)):
        row, distance = nearest(index, q)
        assert row == brute_nearest(points, q)
        assert distance == pytest.approx(np.linalg.norm(points[row] - q))


def test_matches_linear_scan_with_exclusions(rng):
    points = rng.uniform(-1, 1, size=(300, 2))
    index = build_index(points)
    excluded = rng.random(300) < 0.7
    for q in rng.uniform(-1, 1, size=(40, 2)):
        row, _ = nearest(index, q, excluded)
        assert not excluded[row]
        assert row == brute_nearest(points, q, excluded)


def test_ties_go_to_lowest_index():
    points = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]])
    index = build_index(points)
    assert nearest(index, [0.0, 0.0])[0] == 0
    assert nearest(index, [0.0, 0.0], {0})[0] == 2
    assert nearest(build_index(np.array([[-1.0], [1.0]])), [0.0])[0] == 0


def test_grid_with_many_ties(rng):
    # integer grid points give lots of equidistant candidates
    points = rng.integers(0, 4, size=(200, 2)).astype(float)
    index = PointIndex(points, leaf_size=4)
    claimed = np.zeros(200, dtype=bool)
    for q in rng.integers(0, 4, size=(150, 2)).astype(float) + 0.5:
        row, _ = index.nearest(q, claimed)
        assert row == brute_nearest(points, q, claimed)
        claimed[row] = True


def test_exhausted():
    index = build_index(np.zeros((3, 2)))
    with pytest.raises(Exhausted):
        nearest(index, [0.0, 0.0], [0, 1, 2])


def test_exclusion_mask_forms():
    assert exclusion_mask(4, None) is None
    assert exclusion_mask(4, [1, 3]).tolist() == [False, True, False, True]
    with pytest.raises(ValueError):
        exclusion_mask(4, np.zeros(3, dtype=bool))


def test_query_dimension_mismatch():
    with pytest.raises(ValueError):
        build_index(np.zeros((3, 2))).nearest([0.0])


def test_distance_grows_with_the_excluded_set(rng):
    points = rng.standard_normal((300, 2))
    index = build_index(points)
    for q in rng.standard_normal((10, 2)):
        excluded = np.zeros(300, dtype=bool)
        last = 0.0
        for _ in range(40):
            row, distance = nearest(index, q, excluded)
            assert distance >= last
            last = distance
            excluded[row] = True
            excluded[rng.integers(300)] = True
