"""Abstract simplicial complexes on the vertex set ``[m] = {1, ..., m}``.

Vertex subsets are stored as integer bitmasks (vertex ``i`` is bit ``i - 1``).
Public functions accept and return ordinary vertex collections; the ``*_mask``
helpers are exposed for the numeric modules that enumerate multidegrees.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from . import _kernels

# dense face tables are used up to this many vertices
DENSE_FACE_TABLE_MAX_M = 20


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << (v - 1)
    return mask


def to_vertices(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def submasks(mask: int):
    """All submasks of ``mask``, including 0 and ``mask`` itself."""
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


def face_order_key(mask: int) -> tuple[int, tuple[int, ...]]:
    """Faces by size, then lexicographically by sorted vertex tuple."""
    return popcount(mask), to_vertices(mask)


def _maximal(masks: Iterable[int]) -> list[int]:
    ms = sorted(set(masks), key=popcount, reverse=True)
    keep: list[int] = []
    for s in ms:
        if not any(s & ~k == 0 for k in keep):
            keep.append(s)
    return keep


@dataclass(frozen=True)
class SimplicialComplex:
    """Simplicial complex given by its facets.

    ``facets`` holds canonical bitmasks sorted lexicographically by vertex
    tuple.  The complex ``{∅}`` has the single facet ``0``.  Vertices that lie
    in no facet are ghost vertices.
    """

    m: int
    facets: tuple[int, ...]
    labels: tuple[int, ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("vertex count must be non-negative")
        full = (1 << self.m) - 1
        for f in self.facets:
            if f & ~full:
                raise ValueError(f"facet {to_vertices(f)} uses a vertex outside 1..{self.m}")
        canon = tuple(sorted(_maximal(self.facets or (0,)), key=to_vertices))
        object.__setattr__(self, "facets", canon)

    @classmethod
    def from_facets(cls, m: int, facets: Iterable[Iterable[int]], labels=None) -> "SimplicialComplex":
        masks = []
        for f in facets:
            f = list(f)
            for v in f:
                if not 1 <= v <= m:
                    raise ValueError(f"vertex {v} out of range 1..{m}")
            masks.append(to_mask(f))
        return cls(m, tuple(masks), labels)

    # -- basic data -------------------------------------------------------
    @property
    def dim(self) -> int:
        return max(popcount(f) for f in self.facets) - 1

    @property
    def vertex_mask(self) -> int:
        out = 0
        for f in self.facets:
            out |= f
        return out

    @property
    def full_mask(self) -> int:
        return (1 << self.m) - 1

    def facet_list(self) -> list[tuple[int, ...]]:
        return [to_vertices(f) for f in self.facets]

    def is_pure(self) -> bool:
        return len({popcount(f) for f in self.facets}) == 1

    @cached_property
    def _table(self):
        if self.m <= DENSE_FACE_TABLE_MAX_M:
            return _kernels.face_table(self.facets, self.m)
        return None

    @cached_property
    def face_set(self) -> frozenset[int]:
        table = self._table
        if table is not None:
            return frozenset(int(i) for i in table.nonzero()[0])
        out: set[int] = set()
        for f in self.facets:
            out.update(submasks(f))
        return frozenset(out)

    @cached_property
    def faces(self) -> tuple[int, ...]:
        """All faces as masks, ordered by size then lexicographically."""
        return tuple(sorted(self.face_set, key=face_order_key))

    def has_face_mask(self, mask: int) -> bool:
        table = self._table
        if table is not None:
            return mask <= self.full_mask and bool(table[mask])
        return any(mask & ~f == 0 for f in self.facets)

    def is_face(self, sigma: Iterable[int]) -> bool:
        sigma = list(sigma)
        for v in sigma:
            if not 1 <= v <= self.m:
                raise ValueError(f"vertex {v} out of range 1..{self.m}")
        return self.has_face_mask(to_mask(sigma))

    def f_vector(self) -> list[int]:
        """Face counts by dimension, starting with the empty face."""
        out = [0] * (self.dim + 2)
        for f in self.face_set:
            out[popcount(f)] += 1
        return out

    def __str__(self):
        return f"K(m={self.m}, facets={self.facet_list()})"

    # -- serialisation ----------------------------------------------------
    def to_dict(self) -> dict:
        return {"m": self.m, "facets": [list(f) for f in self.facet_list()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "SimplicialComplex":
        try:
            m = int(data["m"])
            facets = data["facets"]
        except (KeyError, TypeError) as exc:
            raise ValueError("complex JSON needs keys 'm' and 'facets'") from exc
        return cls.from_facets(m, facets)

    @classmethod
    def from_json(cls, text: str) -> "SimplicialComplex":
        return cls.from_dict(json.loads(text))


def complex_from_faces(m: int, face_masks: Iterable[int]) -> SimplicialComplex:
    return SimplicialComplex(m, tuple(_maximal(face_masks)))


@dataclass(frozen=True)
class SimplicialMap:
    """Vertex map ``[m1] -> [m2]`` sending faces of ``source`` to faces of ``target``."""

    source: SimplicialComplex
    target: SimplicialComplex
    vertex_map: tuple[int, ...]

    def __post_init__(self):
        vm = tuple(self.vertex_map)
        object.__setattr__(self, "vertex_map", vm)
        if len(vm) != self.source.m:
            raise ValueError("vertex map must be defined on every source vertex")
        if any(not 1 <= j <= self.target.m for j in vm):
            raise ValueError("vertex map image out of range")
        for f in self.source.facets:
            if not self.target.has_face_mask(self.image_mask(f)):
                raise ValueError(f"not simplicial: image of {to_vertices(f)} is not a face")

    def image_mask(self, mask: int) -> int:
        return to_mask(self.vertex_map[v - 1] for v in to_vertices(mask))

    def preimage(self, j: int) -> tuple[int, ...]:
        return tuple(i + 1 for i, t in enumerate(self.vertex_map) if t == j)

    def compose(self, after: "SimplicialMap") -> "SimplicialMap":
        """``after ∘ self``."""
        if after.source != self.target:
            raise ValueError("maps are not composable")
        vm = tuple(after.vertex_map[j - 1] for j in self.vertex_map)
        return SimplicialMap(self.source, after.target, vm)


# ---------------------------------------------------------------- operations

def _check_subset(K: SimplicialComplex, vertices: Iterable[int]) -> int:
    vertices = list(vertices)
    for v in vertices:
        if not 1 <= v <= K.m:
            raise ValueError(f"vertex {v} out of range 1..{K.m}")
    return to_mask(vertices)


def restriction_facets(K: SimplicialComplex, omega_mask: int) -> list[int]:
    """Facet masks of the full subcomplex on ``omega_mask`` (original labels)."""
    return _maximal(f & omega_mask for f in K.facets)


def full_subcomplex(K: SimplicialComplex, omega: Iterable[int]) -> SimplicialComplex:
    """Full subcomplex on ``omega``, relabelled order-preservingly to ``1..|omega|``.

    The original label of new vertex ``k`` is ``result.labels[k - 1]``.
    """
    omega_mask = _check_subset(K, omega)
    labels = to_vertices(omega_mask)
    pos = {v: k + 1 for k, v in enumerate(labels)}
    facets = [[pos[v] for v in to_vertices(f)] for f in restriction_facets(K, omega_mask)]
    return SimplicialComplex.from_facets(len(labels), facets, labels=labels)


def link_mask(K: SimplicialComplex, sigma_mask: int) -> SimplicialComplex:
    facets = [f & ~sigma_mask for f in K.facets if f & sigma_mask == sigma_mask]
    return SimplicialComplex(K.m, tuple(facets))


def star_mask(K: SimplicialComplex, sigma_mask: int) -> SimplicialComplex:
    facets = [f for f in K.facets if f & sigma_mask == sigma_mask]
    return SimplicialComplex(K.m, tuple(facets))


def link(K: SimplicialComplex, sigma: Iterable[int]) -> SimplicialComplex:
    s = _check_subset(K, sigma)
    if not K.has_face_mask(s):
        raise ValueError(f"{to_vertices(s)} is not a face")
    return link_mask(K, s)


def star(K: SimplicialComplex, sigma: Iterable[int]) -> SimplicialComplex:
    s = _check_subset(K, sigma)
    if not K.has_face_mask(s):
        raise ValueError(f"{to_vertices(s)} is not a face")
    return star_mask(K, s)


def join(K1: SimplicialComplex, K2: SimplicialComplex) -> SimplicialComplex:
    """Join on ``[m1 + m2]``; vertex ``i`` of ``K2`` becomes ``m1 + i``."""
    facets = [f1 | (f2 << K1.m) for f1 in K1.facets for f2 in K2.facets]
    return SimplicialComplex(K1.m + K2.m, tuple(facets))


def join_maps(K1: SimplicialComplex, K2: SimplicialComplex) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Vertex labels of ``K1`` and ``K2`` inside ``join(K1, K2)``."""
    return tuple(range(1, K1.m + 1)), tuple(range(K1.m + 1, K1.m + K2.m + 1))


def cone(K: SimplicialComplex) -> SimplicialComplex:
    """Cone with apex 1 (the join ``Δ⁰ * K``)."""
    return join(simplex(1), K)


def stellar_subdivision(K: SimplicialComplex, sigma: Iterable[int]) -> SimplicialComplex:
    """Replace the star of ``sigma`` by the cone over its boundary.

    The cone point gets label ``m + 1``.
    """
    s = _check_subset(K, sigma)
    if s == 0:
        raise ValueError("cannot subdivide the empty face")
    if not K.has_face_mask(s):
        raise ValueError(f"{to_vertices(s)} is not a face")
    apex = 1 << K.m
    facets = [f for f in K.facets if f & s != s]
    for f in K.facets:
        if f & s == s:
            # facets of the star minus one vertex of sigma span its boundary
            for v in to_vertices(s):
                facets.append((f & ~(1 << (v - 1))) | apex)
    return SimplicialComplex(K.m + 1, tuple(facets))


def minimal_nonfaces(K: SimplicialComplex) -> list[tuple[int, ...]]:
    """Inclusion-minimal non-faces, sorted by size then lexicographically."""
    return [to_vertices(t) for t in minimal_nonface_masks(K)]


def minimal_nonface_masks(K: SimplicialComplex) -> list[int]:
    faces = K.face_set
    cands = set()
    for f in faces:
        rest = K.full_mask & ~f
        while rest:
            bit = rest & -rest
            rest ^= bit
            if f | bit not in faces:
                cands.add(f | bit)
    out = []
    for t in cands:
        r = t
        minimal = True
        while r:
            bit = r & -r
            r ^= bit
            if (t ^ bit) not in faces:
                minimal = False
                break
        if minimal:
            out.append(t)
    return sorted(out, key=face_order_key)


def from_minimal_nonfaces(m: int, nonfaces: Iterable[Iterable[int]]) -> SimplicialComplex:
    """The complex on ``[m]`` whose minimal non-faces are ``nonfaces``."""
    bad = [to_mask(t) for t in nonfaces]
    faces = [s for s in range(1 << m) if not any(b & ~s == 0 for b in bad)]
    return complex_from_faces(m, faces)


def dual_complex(K: SimplicialComplex) -> SimplicialComplex:
    """Faces are the complements of non-faces of ``K``."""
    if K.has_face_mask(K.full_mask):
        raise ValueError("the full simplex has no dual complex")
    full = K.full_mask
    return SimplicialComplex(K.m, tuple(full & ~t for t in minimal_nonface_masks(K)))


def is_cone(K: SimplicialComplex) -> bool:
    apex = K.full_mask
    for f in K.facets:
        apex &= f
    return apex != 0


def relabel(K: SimplicialComplex, perm: Sequence[int]) -> SimplicialComplex:
    """Apply the bijection ``i -> perm[i - 1]`` to the vertices."""
    facets = [[perm[v - 1] for v in f] for f in K.facet_list()]
    return SimplicialComplex.from_facets(K.m, facets)


def find_isomorphism(K1: SimplicialComplex, K2: SimplicialComplex) -> tuple[int, ...] | None:
    """A vertex bijection carrying ``K1`` onto ``K2``, by backtracking on facets."""
    if K1.m != K2.m or len(K1.facets) != len(K2.facets) or K1.f_vector() != K2.f_vector():
        return None
    m = K1.m
    target = set(K2.facets)

    def degree(K, v):
        return sum(1 for f in K.facets if f >> (v - 1) & 1)

    deg1 = [degree(K1, v) for v in range(1, m + 1)]
    deg2 = [degree(K2, v) for v in range(1, m + 1)]
    perm = [0] * m
    used = [False] * (m + 1)

    def consistent(k):
        # every facet of K1 inside the assigned prefix must map to a face of K2
        assigned = (1 << k) - 1
        for f in K1.facets:
            if f & ~assigned == 0:
                img = to_mask(perm[v - 1] for v in to_vertices(f))
                if not K2.has_face_mask(img):
                    return False
        return True

    def rec(k):
        if k == m:
            img = {to_mask(perm[v - 1] for v in to_vertices(f)) for f in K1.facets}
            return img == target
        for j in range(1, m + 1):
            if not used[j] and deg1[k] == deg2[j - 1]:
                perm[k] = j
                used[j] = True
                if consistent(k + 1) and rec(k + 1):
                    return True
                used[j] = False
        return False

    return tuple(perm) if rec(0) else None


# ---------------------------------------------------------------- generators

def simplex(m: int) -> SimplicialComplex:
    """The full simplex Δ^{m-1} on ``m`` vertices."""
    if m < 1:
        raise ValueError("simplex needs m >= 1")
    return SimplicialComplex(m, ((1 << m) - 1,))


def boundary_simplex(m: int) -> SimplicialComplex:
    """∂Δ^{m-1}: all proper subsets of ``[m]``."""
    if m < 2:
        raise ValueError("boundary_simplex needs m >= 2")
    full = (1 << m) - 1
    return SimplicialComplex(m, tuple(full & ~(1 << i) for i in range(m)))


def mgon(m: int) -> SimplicialComplex:
    """Boundary of an m-gon with edges {i, i+1} and {1, m}."""
    if m < 3:
        raise ValueError("mgon needs m >= 3")
    return SimplicialComplex.from_facets(m, [[i, i % m + 1] for i in range(1, m + 1)])


def cross_polytope(n: int) -> SimplicialComplex:
    """Boundary of the n-dimensional cross-polytope; {2i-1, 2i} are the missing edges."""
    if n < 1:
        raise ValueError("cross_polytope needs n >= 1")
    K = points(2)
    for _ in range(n - 1):
        K = join(K, points(2))
    return K


def points(m: int) -> SimplicialComplex:
    if m < 1:
        raise ValueError("points needs m >= 1")
    return SimplicialComplex.from_facets(m, [[i] for i in range(1, m + 1)])


# labelling v1..v6 -> 1..6, w1 -> 7, w2 -> 8
CUT_CUBE_NONFACES = (
    (1, 2), (3, 4), (5, 6), (7, 8), (1, 3), (4, 5), (3, 7), (6, 7), (2, 8), (4, 8),
)


def cut_cube_dual() -> SimplicialComplex:
    """Octahedron with stellar subdivisions at the edges {4,5} (vertex 7) and {1,3} (vertex 8).

    Dual to a cube with two non-adjacent edges cut off.
    """
    return from_minimal_nonfaces(8, CUT_CUBE_NONFACES)


def rp2() -> SimplicialComplex:
    """The 6-vertex triangulation of the real projective plane."""
    return SimplicialComplex.from_facets(6, [
        [1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 2, 6],
        [2, 3, 5], [2, 4, 5], [2, 4, 6], [3, 4, 6], [3, 5, 6],
    ])


GENERATORS = {
    "simplex": simplex,
    "boundary_simplex": boundary_simplex,
    "mgon": mgon,
    "cross_polytope": cross_polytope,
    "points": points,
    "cut_cube_dual": cut_cube_dual,
    "rp2": rp2,
}
_ALIASES = {"bsimplex": "boundary_simplex", "cross": "cross_polytope", "cut_cube": "cut_cube_dual"}


def generate(spec: str) -> SimplicialComplex:
    """Build a named complex from ``name`` or ``name:param``, e.g. ``mgon:5``."""
    name, _, param = spec.partition(":")
    name = _ALIASES.get(name, name)
    if name not in GENERATORS:
        raise ValueError(f"unknown generator {name!r}; known: {', '.join(GENERATORS)}")
    fn = GENERATORS[name]
    if name in ("cut_cube_dual", "rp2"):
        if param:
            raise ValueError(f"{name} takes no parameter")
        return fn()
    if not param:
        raise ValueError(f"{name} needs a parameter, e.g. {name}:4")
    try:
        value = int(param)
    except ValueError as exc:
        raise ValueError(f"bad parameter {param!r}") from exc
    return fn(value)

