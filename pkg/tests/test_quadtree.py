"""Normalization, quadtree levels, ancestors, grid queries."""

import math

import numpy as np
import pytest

from cechkit.errors import DegenerateInput, InvalidInput
from cechkit.geometry import Ball
from cechkit.quadtree import Cell, build, cell_index_of, normalize, qcell

from conftest import random_cloud


def test_normalize_two_points():
    cloud = normalize([[0.0, 0.0], [1.0, 0.0]])
    assert cloud.scale == pytest.approx(1.0 / math.sqrt(2.0))
    dist = np.linalg.norm(cloud.points[0] - cloud.points[1])
    assert dist == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-12)


def test_normalize_three_collinear():
    cloud = normalize([[0.0, 0.0], [2.0, 0.0], [10.0, 0.0]])
    assert cloud.scale == pytest.approx((1.0 / math.sqrt(2.0)) / 2.0)
    # spread 10 * scale ~ 3.54, so the root cube has side 4
    assert cloud.L == 2
    assert (cloud.points >= 0).all() and (cloud.points < 2.0**cloud.L).all()


def test_normalize_single_point():
    cloud = normalize([[5.0, 5.0]])
    assert cloud.scale == 1.0
    assert cloud.L == 0
    assert np.allclose(cloud.points, 0.0)


def test_normalize_degenerate():
    with pytest.raises(DegenerateInput):
        normalize([[1.0, 1.0], [1.0, 1.0]])


def test_normalize_min_distance_invariant():
    rng = np.random.default_rng(2)
    for _ in range(10):
        d = int(rng.integers(1, 5))
        pts = random_cloud(rng, int(rng.integers(2, 12)), d, box=rng.uniform(0.5, 20))
        cloud = normalize(pts)
        dmat = np.linalg.norm(
            cloud.points[:, None, :] - cloud.points[None, :, :], axis=2
        )
        mind = dmat[np.triu_indices(cloud.n, 1)].min()
        assert mind == pytest.approx(1.0 / math.sqrt(d), rel=1e-9)
        assert (cloud.points >= 0).all() and (cloud.points < 2.0**cloud.L).all()
        # round trip of lengths through the recorded transform
        assert cloud.to_original_length(cloud.to_normalized_length(1.7)) == pytest.approx(1.7)


def test_build_single_point_chain():
    qt = build(normalize([[3.0, 1.0]]))
    for h in (0, 1, 2):
        cells = qt.cells_at(h)
        assert len(cells) == 1
        assert qt.rep(cells[0]) == 0


def test_build_two_points_opposite_quadrants():
    # Normalized points (0,0) and (~0.69, ~0.14) share the height-0
    # root and fall into different height -1 quadrants.
    qt = build(normalize([[0.0, 0.0], [1.0, 0.2]]))
    root = qt.root()
    kids = qt.children(root)
    assert len(kids) == 2
    assert sorted(qt.rep(c) for c in kids) == [0, 1]


def test_representative_heredity():
    rng = np.random.default_rng(9)
    qt = build(normalize(random_cloud(rng, 20, 2)))
    for h in range(0, qt.L + 1):
        for cell in qt.cells_at(h):
            kids = qt.children(cell) if h > 0 else []
            if kids:
                assert qt.rep(cell) in {qt.rep(c) for c in kids}
            assert cell.contains_point(qt.cloud.points[qt.rep(cell)])


def test_grid_partition_and_leaf_uniqueness():
    rng = np.random.default_rng(4)
    qt = build(normalize(random_cloud(rng, 15, 3)))
    for h in (-1, 0, 1, qt.L):
        lev = qt.level(h)
        ids = sorted(i for ids in lev.values() for i in ids)
        assert ids == list(range(15))
    # normalization gap exceeds the height-0 cell diameter at depth -1
    assert all(len(ids) == 1 for ids in qt.level(-1).values())


def test_qcell_examples():
    q = Cell(0, (5, 3))
    assert qcell(q, 2) == Cell(2, (1, 0))
    assert qcell(q, 0) == q
    assert qcell(qcell(q, 1), 3) == qcell(q, 3)
    with pytest.raises(InvalidInput):
        qcell(q, -1)


def test_cell_geometry():
    c = Cell(-1, (1, 1))
    assert c.side == 0.5
    assert c.diam() == pytest.approx(0.5 * math.sqrt(2.0))
    assert c.contains_point([0.5, 0.7])
    assert not c.contains_point([1.0, 0.7])  # half-open upper face
    assert c.distance_to_cell(Cell(-1, (3, 1))) == pytest.approx(0.5)
    assert cell_index_of(np.array([0.5, 0.7]), -1) == (1, 1)


def test_nonempty_cells_intersecting_point_ball():
    rng = np.random.default_rng(13)
    qt = build(normalize(random_cloud(rng, 12, 2)))
    p = qt.cloud.points[5]
    cells = qt.nonempty_cells_intersecting(Ball(tuple(p), 0.0), 0)
    own = Cell(0, cell_index_of(p, 0))
    assert own in cells
    assert all(c.intersects_ball(Ball(tuple(p), 0.0)) for c in cells)


def test_nonempty_cells_intersecting_root_ball():
    rng = np.random.default_rng(14)
    qt = build(normalize(random_cloud(rng, 12, 2)))
    big = Ball(tuple(qt.root().center()), 2.0 ** (qt.L + 2))
    assert qt.nonempty_cells_intersecting(big, 1) == qt.cells_at(1)


def test_nonempty_cells_intersecting_matches_bruteforce():
    rng = np.random.default_rng(15)
    qt = build(normalize(random_cloud(rng, 18, 2)))
    for _ in range(25):
        h = int(rng.integers(-2, qt.L + 1))
        center = rng.uniform(0, 2.0**qt.L, size=2)
        ball = Ball(tuple(center), float(rng.uniform(0.1, 2.0**qt.L)))
        got = qt.nonempty_cells_intersecting(ball, h)
        want = sorted(
            (c for c in qt.cells_at(h) if c.intersects_ball(ball)),
            key=lambda c: c.index,
        )
        assert got == want
