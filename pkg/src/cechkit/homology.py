"""GF(2) persistent homology.

Two routes into the same invariants:

* ``persist_filtration`` -- classical boundary-matrix column reduction
  for a single filtration, columns stored as Python ints (bitsets).
* ``tower_diagram`` -- persistence of a tower of complexes connected by
  simplicial vertex maps, via induced homology matrices, persistent
  Betti ranks, and inclusion-exclusion of multiplicities.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput

INF = math.inf


# ---------------------------------------------------------------------------
# complexes and maps

@dataclass
class SComplex:
    """Finite simplicial complex; simplices are sorted tuples of labels."""

    simplices: set

    @staticmethod
    def from_simplices(simplices) -> "SComplex":
        out = set()
        for s in simplices:
            out.add(tuple(sorted(set(s))))
        return SComplex(out)

    def closure(self) -> "SComplex":
        out = set()
        for s in self.simplices:
            for k in range(1, len(s) + 1):
                out.update(itertools.combinations(s, k))
        return SComplex(out)

    def is_closed(self) -> bool:
        for s in self.simplices:
            if len(s) == 1:
                continue
            for f in itertools.combinations(s, len(s) - 1):
                if f not in self.simplices:
                    return False
        return True

    def vertices(self) -> list:
        return sorted({v for s in self.simplices for v in s})

    def dim_simplices(self, p: int) -> list:
        return sorted(s for s in self.simplices if len(s) == p + 1)

    def max_dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def euler_characteristic(self) -> int:
        return sum((-1) ** (len(s) - 1) for s in self.simplices)


@dataclass
class VertexMap:
    """Vertex map between complexes, extended simplexwise."""

    domain: SComplex
    codomain: SComplex
    mapping: dict

    def apply(self, simplex) -> tuple:
        return tuple(sorted({self.mapping[v] for v in simplex}))

    def is_simplicial(self) -> bool:
        return all(self.apply(s) in self.codomain.simplices for s in self.domain.simplices)

    def compose(self, other: "VertexMap") -> "VertexMap":
        """self after other (other's codomain feeds self's domain)."""
        return VertexMap(
            other.domain,
            self.codomain,
            {v: self.mapping[w] for v, w in other.mapping.items()},
        )


def identity_map(K: SComplex) -> VertexMap:
    return VertexMap(K, K, {v: v for v in K.vertices()})


def check_contiguous(f: VertexMap, g: VertexMap) -> bool:
    """Do f and g jointly span a simplex on every simplex of the domain?"""
    if f.domain.simplices != g.domain.simplices or f.codomain.simplices != g.codomain.simplices:
        raise InvalidInput("contiguity requires identical domain and codomain")
    for s in f.domain.simplices:
        joint = tuple(sorted({f.mapping[v] for v in s} | {g.mapping[v] for v in s}))
        if joint not in f.codomain.simplices:
            return False
    return True


# ---------------------------------------------------------------------------
# GF(2) linear algebra on int bitsets

def _top_bit(x: int) -> int:
    return x.bit_length() - 1


class _Echelon:
    """Incremental GF(2) echelon form with combination tracking."""

    def __init__(self):
        self.rows: dict[int, tuple[int, int]] = {}  # pivot -> (vector, track)
        self.count = 0

    def add(self, vec: int, track: int = 0) -> bool:
        """Insert a vector; returns True if it increased the rank."""
        v, t = vec, track
        while v:
            b = _top_bit(v)
            if b not in self.rows:
                self.rows[b] = (v, t)
                self.count += 1
                return True
            rv, rt = self.rows[b]
            v ^= rv
            t ^= rt
        return False

    def express(self, vec: int) -> int | None:
        """Track combination reducing `vec` to zero, or None if outside span."""
        v, t = vec, 0
        while v:
            b = _top_bit(v)
            if b not in self.rows:
                return None
            rv, rt = self.rows[b]
            v ^= rv
            t ^= rt
        return t


# ---------------------------------------------------------------------------
# homology bases

@dataclass
class HomologyBasis:
    """Cycle representatives of H_p plus the data needed for coordinates."""

    p: int
    simplices: list          # p-simplices in canonical order
    index: dict              # simplex -> bit position
    cycles: list[int]        # one bitset per homology generator
    boundaries: list[int]    # basis of the boundary subspace B_p
    _coords: _Echelon = field(default=None, repr=False)

    @property
    def betti(self) -> int:
        return len(self.cycles)

    def coordinates(self, chain: int) -> tuple[int, ...] | None:
        """Homology-class coordinates of a cycle, or None if not a cycle class."""
        if self._coords is None:
            ech = _Echelon()
            for b in self.boundaries:
                ech.add(b, 0)
            for i, z in enumerate(self.cycles):
                ech.add(z, 1 << i)
            self._coords = ech
        t = self._coords.express(chain)
        if t is None:
            return None
        return tuple((t >> i) & 1 for i in range(len(self.cycles)))

    def chain_to_bits(self, simplices) -> int:
        out = 0
        for s in simplices:
            out ^= 1 << self.index[s]
        return out

    def bits_to_chain(self, bits: int) -> list:
        return [self.simplices[i] for i in range(len(self.simplices)) if (bits >> i) & 1]


def _boundary_bits(simplex, index_lower: dict) -> int:
    out = 0
    for f in itertools.combinations(simplex, len(simplex) - 1):
        out ^= 1 << index_lower[f]
    return out


def homology_basis(K: SComplex, p: int) -> HomologyBasis:
    """Basis of H_p(K) over GF(2), cycles as bitsets over the p-simplices."""
    sp = K.dim_simplices(p)
    index = {s: i for i, s in enumerate(sp)}
    lower = {s: i for i, s in enumerate(K.dim_simplices(p - 1))} if p > 0 else {}

    # Kernel of the p-th boundary map, with combination tracking.
    kernel: list[int] = []
    ech = _Echelon()
    for j, s in enumerate(sp):
        bnd = _boundary_bits(s, lower) if p > 0 else 0
        if bnd == 0:
            kernel.append(1 << j)
            continue
        v, t = bnd, 1 << j
        while v:
            b = _top_bit(v)
            if b not in ech.rows:
                ech.rows[b] = (v, t)
                break
            rv, rt = ech.rows[b]
            v ^= rv
            t ^= rt
        if v == 0:
            kernel.append(t)

    # Image of the (p+1)-st boundary map.
    boundaries: list[int] = []
    img = _Echelon()
    for s in K.dim_simplices(p + 1):
        bnd = _boundary_bits(s, index)
        if img.add(bnd):
            boundaries.append(bnd)

    # Kernel vectors independent modulo the boundary subspace.
    quot = _Echelon()
    for b in boundaries:
        quot.add(b)
    cycles = [z for z in kernel if quot.add(z)]
    return HomologyBasis(p, sp, index, cycles, boundaries)


def induced_map(
    f: VertexMap, p: int, basis_dom: HomologyBasis = None, basis_cod: HomologyBasis = None
) -> np.ndarray:
    """Matrix of H_p(f) in the given (or freshly computed) bases."""
    if not f.is_simplicial():
        raise InvalidInput("map is not simplicial")
    if basis_dom is None:
        basis_dom = homology_basis(f.domain, p)
    if basis_cod is None:
        basis_cod = homology_basis(f.codomain, p)

    M = np.zeros((basis_cod.betti, basis_dom.betti), dtype=np.uint8)
    for j, z in enumerate(basis_dom.cycles):
        image_bits = 0
        for s in basis_dom.bits_to_chain(z):
            t = f.apply(s)
            if len(t) == p + 1:  # degenerate images vanish in dimension p
                image_bits ^= 1 << basis_cod.index[t]
        coords = basis_cod.coordinates(image_bits)
        if coords is None:
            raise InvalidInput("image of a cycle is not a cycle; map not simplicial?")
        M[:, j] = coords
    return M


def gf2_rank(M: np.ndarray) -> int:
    A = (np.array(M, dtype=np.uint8) % 2).copy()
    if A.size == 0:
        return 0
    rank = 0
    rows, cols = A.shape
    for c in range(cols):
        pivot = None
        for r in range(rank, rows):
            if A[r, c]:
                pivot = r
                break
        if pivot is None:
            continue
        A[[rank, pivot]] = A[[pivot, rank]]
        for r in range(rows):
            if r != rank and A[r, c]:
                A[r] ^= A[rank]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# persistence diagrams

@dataclass
class PersistenceDiagram:
    """Per-dimension multiset of (birth, death) pairs; death may be inf."""

    points: dict[int, list[tuple[float, float]]] = field(default_factory=dict)

    def add(self, p: int, birth: float, death: float):
        self.points.setdefault(p, []).append((birth, death))

    def dim(self, p: int) -> list[tuple[float, float]]:
        return sorted(self.points.get(p, []))

    def dims(self) -> list[int]:
        return sorted(self.points)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PersistenceDiagram):
            return NotImplemented
        dims = set(self.points) | set(other.points)
        return all(sorted(self.points.get(p, [])) == sorted(other.points.get(p, [])) for p in dims)

    def to_json_obj(self) -> list:
        out = []
        for p in self.dims():
            pts = [[b, "inf" if d == INF else d] for b, d in self.dim(p)]
            out.append({"p": p, "points": pts})
        return out

    @staticmethod
    def from_json_obj(obj) -> "PersistenceDiagram":
        dgm = PersistenceDiagram()
        for block in obj:
            for b, d in block["points"]:
                dgm.add(int(block["p"]), float(b), INF if d == "inf" else float(d))
        return dgm


def persist_filtration(filt, pmax: int) -> PersistenceDiagram:
    """Standard GF(2) column reduction of a filtration's boundary matrix."""
    if not filt.is_face_monotone():
        raise InvalidInput("filtration is not face-monotone")
    entries = filt.entries
    position = {s: i for i, (s, _) in enumerate(entries)}

    columns: list[int] = []
    for s, _ in entries:
        bits = 0
        if len(s) > 1:
            for f in itertools.combinations(s, len(s) - 1):
                bits ^= 1 << position[f]
        columns.append(bits)

    low_of: dict[int, int] = {}  # low index -> column index
    lows: list[int | None] = [None] * len(entries)
    for j in range(len(entries)):
        col = columns[j]
        while col:
            low = _top_bit(col)
            if low not in low_of:
                break
            col ^= columns[low_of[low]]
        columns[j] = col
        if col:
            low = _top_bit(col)
            low_of[low] = j
            lows[j] = low

    dgm = PersistenceDiagram()
    paired = set()
    for j, low in enumerate(lows):
        if low is None:
            continue
        paired.add(low)
        paired.add(j)
        p = len(entries[low][0]) - 1
        if p > pmax:
            continue
        birth, death = entries[low][1], entries[j][1]
        if birth < death:
            dgm.add(p, birth, death)
    for j, (s, v) in enumerate(entries):
        if j in paired or lows[j] is not None:
            continue
        p = len(s) - 1
        if p <= pmax:
            dgm.add(p, v, INF)
    return dgm


# ---------------------------------------------------------------------------
# towers

@dataclass
class Tower:
    """Complexes linked by simplicial maps at strictly increasing scales.

    `births_at_zero` marks towers whose leftmost complex represents the
    limit of a module that is constant down to scale 0 (e.g. a
    vertices-only approximation complex); classes alive at the leftmost
    index are then reported as born at 0.
    """

    complexes: list[SComplex]
    maps: list[VertexMap]
    scales: list[float]
    births_at_zero: bool = False

    def __post_init__(self):
        if len(self.complexes) != len(self.scales):
            raise InvalidInput("one scale per complex required")
        if len(self.maps) != max(len(self.complexes) - 1, 0):
            raise InvalidInput("need exactly one map per consecutive pair")
        if any(b >= a for a, b in zip(self.scales[1:], self.scales)):
            raise InvalidInput("scales must be strictly increasing")


def tower_diagram(tower: Tower, p: int) -> PersistenceDiagram:
    """Diagram of a tower via persistent Betti ranks of induced maps."""
    m = len(tower.complexes)
    dgm = PersistenceDiagram()
    if m == 0:
        return dgm
    bases = [homology_basis(K, p) for K in tower.complexes]
    mats = [
        induced_map(f, p, bases[i], bases[i + 1]) for i, f in enumerate(tower.maps)
    ]

    # beta[i][j] = rank of H_p(K_i) -> H_p(K_j), j >= i
    beta = [[0] * m for _ in range(m)]
    for i in range(m):
        beta[i][i] = bases[i].betti
        acc = np.eye(bases[i].betti, dtype=np.uint8)
        for j in range(i + 1, m):
            acc = (mats[j - 1] @ acc) % 2
            beta[i][j] = gf2_rank(acc)

    def b(i: int, j: int) -> int:
        if i < 0 or j < 0:
            return 0
        return beta[i][j]

    birth_scale = lambda i: 0.0 if (i == 0 and tower.births_at_zero) else tower.scales[i]

    for i in range(m):
        for j in range(i + 1, m):
            mu = b(i, j - 1) - b(i, j) - b(i - 1, j - 1) + b(i - 1, j)
            for _ in range(mu):
                dgm.add(p, birth_scale(i), tower.scales[j])
        essential = b(i, m - 1) - b(i - 1, m - 1)
        for _ in range(essential):
            dgm.add(p, birth_scale(i), INF)
    return dgm


def filtration_tower(filt) -> Tower:
    """Inclusion tower of a filtration sampled at all its critical values."""
    values = sorted({v for _, v in filt.entries})
    complexes = []
    for v in values:
        complexes.append(SComplex(filt.complex_at(v, tol=0.0)))
    maps = [
        VertexMap(complexes[i], complexes[i + 1], {u: u for u in complexes[i].vertices()})
        for i in range(len(complexes) - 1)
    ]
    return Tower(complexes, maps, values)
