"""Multiplicative comparison of persistence diagrams.

A diagram is a c-approximation of another if a bijection moves every
point by at most a factor c in each coordinate; points close enough to
the diagonal (death <= c^2 * birth) may be dropped instead of matched.
Births equal to zero only match births equal to zero, and infinite
deaths only match infinite deaths; this is the right convention for the
Cech-style filtrations produced here, where all 0-dimensional classes
are born exactly at scale 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidInput
from .homology import INF, PersistenceDiagram

_REL = 1e-12  # slack absorbing floating-point noise in ratio comparisons


def _ratio_ok(a: float, b: float, c: float) -> bool:
    """Is b within [a/c, a*c], multiplicatively, with 0 and inf handled?"""
    if a == b:
        return True
    if a == INF or b == INF:
        return False
    if a == 0.0 or b == 0.0:
        return False
    r = a / b if a >= b else b / a
    return r <= c * (1.0 + _REL)


def _compatible(p1, p2, c: float) -> bool:
    return _ratio_ok(p1[0], p2[0], c) and _ratio_ok(p1[1], p2[1], c)


def _droppable(pt, c: float) -> bool:
    birth, death = pt
    if death == INF:
        return False
    if birth == 0.0:
        return death == 0.0
    return death <= c * c * birth * (1.0 + _REL)


def _feasible(pts1, pts2, c: float):
    """Perfect matching with per-point diagonal partners; returns the
    matching as a list of (i, j) index pairs or None."""
    n1, n2 = len(pts1), len(pts2)
    size_a = n1 + n2  # pts1 followed by diagonal partners of pts2
    size_b = n2 + n1  # pts2 followed by diagonal partners of pts1

    def neighbors(a: int):
        if a < n1:
            for j in range(n2):
                if _compatible(pts1[a], pts2[j], c):
                    yield j
            if _droppable(pts1[a], c):
                yield n2 + a
        else:
            j = a - n1  # diagonal partner of pts2[j]
            if _droppable(pts2[j], c):
                yield j
            for b in range(n2, size_b):
                yield b

    match_b = [-1] * size_b

    def augment(a: int, seen: list[bool]) -> bool:
        for b in neighbors(a):
            if seen[b]:
                continue
            seen[b] = True
            if match_b[b] == -1 or augment(match_b[b], seen):
                match_b[b] = a
                return True
        return False

    matched = 0
    for a in range(size_a):
        if augment(a, [False] * size_b):
            matched += 1
    if matched != size_a:
        return None
    return [(match_b[b], b) for b in range(n2) if match_b[b] != -1 and match_b[b] < n1]


@dataclass
class ApproxReport:
    c: float
    matched: bool
    witness: dict = field(default_factory=dict)


def is_c_approximation(d1: PersistenceDiagram, d2: PersistenceDiagram, c: float) -> ApproxReport:
    """Feasibility of a c-bounded bijection between the two diagrams."""
    if c < 1.0:
        raise InvalidInput(f"approximation factor must be >= 1, got {c}")
    witness = {}
    for p in sorted(set(d1.dims()) | set(d2.dims())):
        pts1, pts2 = d1.dim(p), d2.dim(p)
        match = _feasible(pts1, pts2, c)
        if match is None:
            return ApproxReport(c, False, {"failed_dimension": p})
        witness[p] = [(pts1[i], pts2[j]) for i, j in match]
    return ApproxReport(c, True, witness)


def _candidates(pts1, pts2) -> list[float]:
    cands = {1.0}
    for pt in pts1 + pts2:
        birth, death = pt
        if death != INF and birth > 0.0 and death > 0.0:
            cands.add(math.sqrt(death / birth))
    for p1 in pts1:
        for p2 in pts2:
            for a, b in ((p1[0], p2[0]), (p1[1], p2[1])):
                if a == INF or b == INF or a == 0.0 or b == 0.0:
                    continue
                cands.add(a / b if a >= b else b / a)
    return sorted(x for x in cands if x >= 1.0)


def bottleneck_log(d1: PersistenceDiagram, d2: PersistenceDiagram) -> float:
    """log of the smallest c for which the diagrams are c-approximations.

    Candidate values of c come from coordinate ratios (a finite set), so
    the result is exact up to floating point.  Returns +inf when no c
    works (e.g. mismatched counts of infinite or zero-birth points).
    """
    worst = 0.0
    for p in sorted(set(d1.dims()) | set(d2.dims())):
        pts1, pts2 = d1.dim(p), d2.dim(p)
        if not pts1 and not pts2:
            continue
        cands = _candidates(pts1, pts2)
        if _feasible(pts1, pts2, cands[-1]) is None:
            return INF
        lo, hi = 0, len(cands) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if _feasible(pts1, pts2, cands[mid]) is None:
                lo = mid + 1
            else:
                hi = mid
        worst = max(worst, math.log(cands[lo]))
    return worst
