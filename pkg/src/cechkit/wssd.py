"""Well-separated simplicial decompositions.

Gamma_1 is an (eps/2)-WSPD.  For k >= 2, each (k-1)-tuple gamma is
extended by every nonempty grid cell, at the height matched to
rad(gamma), that intersects the doubled enclosing ball of gamma's cell
union.  Tuples are deduplicated on their sorted cell key because the
recursion can reach the same tuple through different parents.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput
from .geometry import Ball, MebResult, expand, meb, meb_of_cells
from .quadtree import Cell, Quadtree
from .wspd import build_wspd


def _bracket_pow2(x: float) -> int:
    """Integer h with 2^h <= x <= 2^(h+1); exact powers of two map to log2(x)."""
    if x <= 0.0:
        raise InvalidInput(f"positive value required, got {x}")
    h = int(math.floor(math.log2(x)))
    while 2.0 ** h > x:
        h -= 1
    while 2.0 ** (h + 1) < x:
        h += 1
    return h


def grid_height_for(r: float, eps: float, d: int) -> int:
    """Height h of the expansion grid: 2^h <= eps*r/(2*sqrt(d)) <= 2^(h+1)."""
    if r <= 0.0:
        raise InvalidInput(f"radius must be positive, got {r}")
    return _bracket_pow2(eps * r / (2.0 * math.sqrt(d)))


@dataclass
class WST:
    """Well-separated tuple: cells plus the cached radius of their union."""

    cells: tuple[Cell, ...]
    _meb: MebResult | None = field(default=None, repr=False)

    @property
    def k(self) -> int:
        return len(self.cells) - 1

    def meb(self) -> MebResult:
        if self._meb is None:
            self._meb = meb_of_cells(self.cells)
        return self._meb

    @property
    def rad(self) -> float:
        return self.meb().radius

    def key(self):
        return tuple(sorted((c.height, c.index) for c in self.cells))


@dataclass
class WSSD:
    epsilon: float
    gammas: list[list[WST]]  # gammas[k-1] holds the (k+1)-tuples of Gamma_k

    def gamma(self, k: int) -> list[WST]:
        return self.gammas[k - 1]

    @property
    def kmax(self) -> int:
        return len(self.gammas)

    def all_tuples(self):
        for g in self.gammas:
            yield from g


def build_wssd(qt: Quadtree, eps: float, kmax: int) -> WSSD:
    """Recursive construction of Gamma_1 ... Gamma_kmax."""
    if not (0.0 < eps < 1.0):
        raise InvalidInput(f"eps must be in (0,1), got {eps}")
    if not (1 <= kmax <= qt.d):
        raise InvalidInput(f"kmax must satisfy 1 <= kmax <= d={qt.d}, got {kmax}")

    base = build_wspd(qt, eps / 2.0)
    gamma1 = [WST((p.q, p.q2)) for p in base.pairs]
    gammas = [gamma1]

    for _k in range(2, kmax + 1):
        out: dict[tuple, WST] = {}
        for g in gammas[-1]:
            res = g.meb()
            r = res.radius
            h = grid_height_for(r, eps, qt.d)
            double = Ball(tuple(res.center), 2.0 * r)
            for q2 in qt.nonempty_cells_intersecting(double, h):
                t = WST(g.cells + (q2,))
                out.setdefault(t.key(), t)
        gammas.append([out[k] for k in sorted(out)])

    return WSSD(eps, gammas)


def covers(t: WST, vertex_points) -> bool:
    """Permutation test: does the tuple cover the simplex on these points?

    `vertex_points` holds the k+1 vertex coordinates of the simplex.
    """
    pts = np.asarray(vertex_points, dtype=float)
    if pts.shape[0] != len(t.cells):
        raise InvalidInput(
            f"simplex arity {pts.shape[0]} does not match tuple arity {len(t.cells)}"
        )
    allowed = [
        [j for j, cell in enumerate(t.cells) if cell.contains_point(p)] for p in pts
    ]
    return _has_perfect_matching(allowed, len(t.cells))


def _has_perfect_matching(allowed: list[list[int]], n: int) -> bool:
    match: dict[int, int] = {}

    def try_assign(i: int, seen: set[int]) -> bool:
        for j in allowed[i]:
            if j in seen:
                continue
            seen.add(j)
            if j not in match or try_assign(match[j], seen):
                match[j] = i
                return True
        return False

    for i in range(n):
        if not try_assign(i, set()):
            return False
    return True


def wst_ball_property_check(t: WST, eps: float, trials: int, seed: int = 0) -> bool:
    """Randomized check of the defining tuple property.

    Samples balls containing at least one (geometric) point of every
    cell and verifies that the (1+eps)-expansion contains the whole
    cell union.  Sample points are random convex corner combinations,
    so they always lie inside their cell.
    """
    rng = np.random.RandomState(seed)
    corner_sets = [c.corners() for c in t.cells]
    all_corners = np.concatenate(corner_sets, axis=0)

    for _ in range(trials):
        anchors = []
        for corners in corner_sets:
            w = rng.dirichlet(np.ones(corners.shape[0]))
            anchors.append(w @ corners)
        base = meb(anchors).ball
        grow = rng.uniform(0.0, 1.0)
        shift = rng.standard_normal(len(base.center))
        norm = float(np.linalg.norm(shift))
        if norm > 0 and base.radius > 0:
            shift *= rng.uniform(0.0, 1.0) * base.radius * grow / norm
        else:
            shift[:] = 0.0
        ball = Ball(tuple(base.center_array + shift), base.radius * (1.0 + grow))
        big = expand(ball, 1.0 + eps)
        for corner in all_corners:
            if not big.contains(corner):
                return False
    return True


def removable_point_check(points) -> int:
    """Index of a point p with |p - center(P \\ p)| <= c(d) * rad(P \\ p).

    The bound c(d) = (1 + 1/d) / sqrt(1 - 1/d^2) is at most 2 for d >= 2.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 3:
        raise InvalidInput("need at least 3 points")
    d = pts.shape[1]
    factor = (1.0 + 1.0 / d) / math.sqrt(1.0 - 1.0 / d**2) if d >= 2 else 2.0
    for i in range(pts.shape[0]):
        rest = np.delete(pts, i, axis=0)
        res = meb(rest)
        dist = float(np.linalg.norm(pts[i] - res.center))
        if dist <= factor * res.radius * (1.0 + 1e-9) + 1e-12:
            return i
    raise InvalidInput("no removable point found (violates the removal lemma)")


def simplices_of(n: int, k: int):
    """All k-simplices (as sorted id tuples) over n points."""
    return itertools.combinations(range(n), k + 1)
