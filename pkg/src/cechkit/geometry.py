"""Exact low-dimensional geometric primitives.

Minimum enclosing balls are computed by Welzl's move-to-front algorithm
with support sets of at most d+1 points; this is exact (up to floating
point) and practical for d <= 12, which covers everything the rest of
the library needs.  Balls of cell unions reduce to the ball of all cell
corners, since the meb of a convex polytope equals the meb of its
vertex set.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput

# Relative tolerance for geometric containment checks.
TAU_GEOM = 1e-9

# Looser internal slack used while the Welzl recursion decides whether a
# point is already covered; keeps the recursion from cycling on ties.
_WELZL_SLACK = 1e-10

MAX_MEB_DIM = 12


@dataclass(frozen=True)
class Ball:
    """Closed Euclidean ball."""

    center: tuple[float, ...]
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise InvalidInput(f"negative radius {self.radius}")

    @property
    def center_array(self) -> np.ndarray:
        return np.asarray(self.center, dtype=float)

    def contains(self, point, tol: float = TAU_GEOM) -> bool:
        d = float(np.linalg.norm(np.asarray(point, dtype=float) - self.center_array))
        return d <= self.radius * (1.0 + tol) + tol


@dataclass(frozen=True)
class MebResult:
    """Minimum enclosing ball plus a certificate of support points."""

    ball: Ball
    support: tuple[int, ...]

    @property
    def radius(self) -> float:
        return self.ball.radius

    @property
    def center(self) -> np.ndarray:
        return self.ball.center_array


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(1, -1)
    if pts.size == 0:
        raise InvalidInput("empty point set")
    if not np.isfinite(pts).all():
        raise InvalidInput("non-finite coordinate")
    return pts


def _circumball(boundary: list[np.ndarray]) -> tuple[np.ndarray, float]:
    """Smallest ball with all `boundary` points on its surface.

    The center lies in the affine hull of the boundary points; the
    least-squares solve below returns exactly that (minimum-norm
    solution of the offset system).
    """
    p0 = boundary[0]
    if len(boundary) == 1:
        return p0.copy(), 0.0
    A = np.array([2.0 * (q - p0) for q in boundary[1:]])
    b = np.array([float(np.dot(q - p0, q - p0)) for q in boundary[1:]])
    x, *_ = np.linalg.lstsq(A, b, rcond=None)
    center = p0 + x
    radius = max(float(np.linalg.norm(q - center)) for q in boundary)
    return center, radius


def _welzl_mtf(pts: list[np.ndarray], boundary: list[np.ndarray], d: int):
    center, radius = _circumball(boundary)
    if len(boundary) == d + 1:
        return center, radius
    for i, q in enumerate(pts):
        if float(np.linalg.norm(q - center)) > radius * (1.0 + _WELZL_SLACK) + 1e-14:
            center, radius = _welzl_mtf(pts[: i + 1], boundary + [q], d)
    return center, radius


def meb(points) -> MebResult:
    """Minimum enclosing ball of a nonempty point set in R^d, d <= 12."""
    pts = _as_points(points)
    n, d = pts.shape
    if d > MAX_MEB_DIM:
        raise InvalidInput(f"dimension {d} exceeds exact meb limit {MAX_MEB_DIM}")
    if n == 1:
        return MebResult(Ball(tuple(pts[0]), 0.0), (0,))

    order = list(range(n))
    random.Random(0x5EB1).shuffle(order)
    shuffled = [pts[i] for i in order]

    center, radius = shuffled[0].copy(), 0.0
    for i, p in enumerate(shuffled):
        if float(np.linalg.norm(p - center)) > radius * (1.0 + _WELZL_SLACK) + 1e-14:
            center, radius = _welzl_mtf(shuffled[:i], [p], d)

    dists = np.linalg.norm(pts - center, axis=1)
    on_boundary = [
        int(i) for i in np.argsort(-dists) if abs(dists[i] - radius) <= radius * TAU_GEOM + 1e-12
    ]
    support = tuple(sorted(on_boundary[: d + 1]))
    return MebResult(Ball(tuple(center), radius), support)


def diam(points) -> float:
    """Maximum pairwise distance; 0 for a single point."""
    pts = _as_points(points)
    n = pts.shape[0]
    if n == 1:
        return 0.0
    best = 0.0
    for i in range(n):
        dd = np.linalg.norm(pts[i + 1 :] - pts[i], axis=1)
        if dd.size:
            best = max(best, float(dd.max()))
    return best


def expand(ball: Ball, factor: float) -> Ball:
    """Ball with the same center and radius scaled by `factor`."""
    if factor < 0:
        raise InvalidInput(f"negative expansion factor {factor}")
    return Ball(ball.center, ball.radius * factor)


def meb_of_cells(cells) -> MebResult:
    """Minimum enclosing ball of a union of solid quadtree cells.

    Computed as the meb of all cell corners (2^d per cell), which is
    exact for the convex union arguments used elsewhere.
    """
    cells = list(cells)
    if not cells:
        raise InvalidInput("empty cell list")
    corners = np.concatenate([c.corners() for c in cells], axis=0)
    corners = np.unique(corners, axis=0)
    return meb(corners)


def min_pairwise_distance(points) -> float:
    pts = _as_points(points)
    n = pts.shape[0]
    if n < 2:
        raise InvalidInput("need at least two points")
    best = math.inf
    for i in range(n):
        dd = np.linalg.norm(pts[i + 1 :] - pts[i], axis=1)
        if dd.size:
            best = min(best, float(dd.min()))
    return best
