"""Minimum enclosing balls, diameters, and ball expansion."""

import itertools
import math

import numpy as np
import pytest

from cechkit.errors import InvalidInput
from cechkit.geometry import Ball, diam, expand, meb, meb_of_cells, min_pairwise_distance
from cechkit.quadtree import Cell

from conftest import TRIANGLE, random_cloud


# ---------------------------------------------------------------------------
# brute-force oracle: minimum over circumballs of support subsets

def _circumball_oracle(pts):
    p0 = pts[0]
    if len(pts) == 1:
        return p0.copy(), 0.0
    A = np.array([2.0 * (q - p0) for q in pts[1:]])
    b = np.array([float(np.dot(q - p0, q - p0)) for q in pts[1:]])
    x, *_ = np.linalg.lstsq(A, b, rcond=None)
    c = p0 + x
    return c, max(float(np.linalg.norm(q - c)) for q in pts)


def meb_radius_bruteforce(pts):
    """Smallest circumball radius over support subsets covering all points."""
    n, d = pts.shape
    best = math.inf
    for size in range(1, min(n, d + 1) + 1):
        for sub in itertools.combinations(range(n), size):
            c, r = _circumball_oracle(pts[list(sub)])
            if all(np.linalg.norm(p - c) <= r * (1 + 1e-9) + 1e-12 for p in pts):
                best = min(best, r)
    return best


# ---------------------------------------------------------------------------
# meb

def test_meb_equilateral_triangle():
    res = meb(TRIANGLE)
    assert np.allclose(res.center, [0.0, 0.5773502], atol=1e-6)
    assert res.radius == pytest.approx(1.1547005, abs=1e-6)


def test_meb_single_point():
    res = meb([[3.0, 4.0]])
    assert tuple(res.center) == (3.0, 4.0)
    assert res.radius == 0.0


def test_meb_standard_simplex_r4():
    res = meb(np.eye(4))
    assert res.radius == pytest.approx(math.sqrt(3.0 / 4.0), abs=1e-9)


def test_meb_errors():
    with pytest.raises(InvalidInput):
        meb(np.empty((0, 2)))
    with pytest.raises(InvalidInput):
        meb([[0.0, np.inf]])
    with pytest.raises(InvalidInput):
        meb(np.zeros((2, 13)))


def test_meb_support_certificate():
    rng = np.random.default_rng(11)
    for _ in range(20):
        pts = random_cloud(rng, int(rng.integers(2, 8)), 3)
        res = meb(pts)
        assert 1 <= len(res.support) <= 4
        for i in res.support:
            dist = np.linalg.norm(pts[i] - res.center)
            assert dist == pytest.approx(res.radius, rel=1e-6, abs=1e-9)
        for p in pts:
            assert res.ball.contains(p)


def test_meb_matches_bruteforce_oracle():
    rng = np.random.default_rng(23)
    for _ in range(30):
        n = int(rng.integers(2, 10))
        d = int(rng.integers(2, 4))
        pts = random_cloud(rng, n, d)
        assert meb(pts).radius == pytest.approx(meb_radius_bruteforce(pts), rel=1e-9)


def test_meb_monotone_under_inclusion():
    rng = np.random.default_rng(5)
    for _ in range(20):
        pts = random_cloud(rng, 8, 3)
        k = int(rng.integers(2, 8))
        sub = rng.choice(8, size=k, replace=False)
        assert meb(pts[sub]).radius <= meb(pts).radius + 1e-12


# ---------------------------------------------------------------------------
# diam

def test_diam_triangle():
    assert diam(TRIANGLE) == pytest.approx(2.0, abs=1e-12)


def test_diam_single_point():
    assert diam([[7.0, 7.0]]) == 0.0


def test_diam_unit_vectors():
    assert diam(np.eye(3)[:2]) == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_rad_diam_sandwich():
    rng = np.random.default_rng(17)
    for _ in range(25):
        pts = random_cloud(rng, int(rng.integers(2, 9)), int(rng.integers(1, 4)))
        r, dm = meb(pts).radius, diam(pts)
        assert r <= dm + 1e-12
        assert dm <= 2.0 * r + 1e-12


# ---------------------------------------------------------------------------
# expand

def test_expand_scales_radius():
    b = expand(Ball((1.0, 2.0), 2.0), 1.5)
    assert b.center == (1.0, 2.0)
    assert b.radius == 3.0


def test_expand_identity():
    b = Ball((0.0, 0.0), 0.7)
    assert expand(b, 1.0) == b


def test_expand_negative_factor():
    with pytest.raises(InvalidInput):
        expand(Ball((0.0,), 1.0), -1.0)


def test_offset_box_containment():
    # A box of diameter <= lam * r touching the ball fits in the
    # (1 + lam)-expansion; sampled over random ball/box pairs.
    rng = np.random.default_rng(31)
    for _ in range(1000):
        d = int(rng.integers(1, 4))
        center = rng.uniform(-5, 5, size=d)
        r = rng.uniform(0.1, 3.0)
        lam = rng.uniform(0.05, 2.0)
        side = lam * r / math.sqrt(d) * rng.uniform(0.2, 1.0)
        # A point on or inside the ball that the box will contain.
        x = rng.standard_normal(d)
        x = center + x * rng.uniform(0.0, r) / max(np.linalg.norm(x), 1e-12)
        lo = x - side * rng.uniform(0.0, 1.0, size=d)
        big = expand(Ball(tuple(center), r), 1.0 + lam)
        for m in range(1 << d):
            corner = lo + side * np.array([(m >> a) & 1 for a in range(d)])
            assert big.contains(corner)


# ---------------------------------------------------------------------------
# meb of cell unions

def test_meb_of_single_cell():
    cell = Cell(1, (0, 0))  # side 2 square at origin
    res = meb_of_cells([cell])
    assert np.allclose(res.center, [1.0, 1.0])
    assert res.radius == pytest.approx(2.0 * math.sqrt(2.0) / 2.0, abs=1e-9)


def test_meb_of_duplicate_cells():
    cell = Cell(0, (2, 5))
    assert meb_of_cells([cell, cell]).radius == pytest.approx(
        meb_of_cells([cell]).radius, abs=1e-12
    )


def test_meb_of_two_separated_squares():
    # Unit squares with lower-left corners (0,0) and (3,0): the corner
    # set spans [0,4]x[0,1], giving radius sqrt(17)/2.
    res = meb_of_cells([Cell(0, (0, 0)), Cell(0, (3, 0))])
    assert res.radius == pytest.approx(math.sqrt(17.0) / 2.0, abs=1e-9)


def test_meb_of_cells_empty():
    with pytest.raises(InvalidInput):
        meb_of_cells([])


def test_min_pairwise_distance():
    assert min_pairwise_distance([[0.0, 0.0], [3.0, 4.0], [0.0, 1.0]]) == pytest.approx(1.0)
    with pytest.raises(InvalidInput):
        min_pairwise_distance([[0.0, 0.0]])
