"""Tor of the face ring from full subcomplexes, with the multiplicative structure.

A class in ``H̃^p(K_ω)`` sits in ``H^{p+1-|ω|, 2ω}`` of the moment-angle
complex.  The cochain map to the Koszul side sends ``σ*`` to
``ζ(σ, ω) u_{ω∖σ} v_σ`` where

    ζ(σ, ω) = (-1)^{k(k-1)/2} · sign(shuffle(σ, ω∖σ)),   k = |σ|,

which intertwines the simplicial coboundary with the Koszul differential.
The product of ``a ∈ C̃^p(K_ω1)`` and ``b ∈ C̃^q(K_ω2)`` (disjoint ``ω``'s)
evaluates on ``σ1 ⊔ σ2`` as

    (-1)^{(q+1)|ω1|} · sign(ω1, ω2) · sign(σ1, σ2) · a(σ1) b(σ2),

the join cochain restricted to ``K_{ω1 ⊔ ω2}``; with this sign the map to
R*(K) is multiplicative on the nose.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import SimplicialComplex, popcount, restriction_facets, to_mask, to_vertices
from .homology import (
    QQ,
    Coefficients,
    CohomologyBlock,
    HomologyGroup,
    cochain_block,
    cohomology_from_homology,
    reduced_homology_of_faces,
)
from .koszul import BettiTable, KoszulElement, _map, shuffle_sign


def is_cone_restriction(K: SimplicialComplex, omega: int) -> bool:
    """True when some vertex of ``ω`` lies in every facet of ``K_ω`` (so ``K_ω`` is acyclic)."""
    apex = omega
    for f in restriction_facets(K, omega):
        apex &= f
    return apex != 0


def restricted_faces(K: SimplicialComplex, omega: int) -> list[int]:
    return [s for s in K.faces if s & ~omega == 0]


def full_subcomplex_cohomology(K: SimplicialComplex, omega: int, coeff: Coefficients = QQ
                               ) -> dict[int, HomologyGroup]:
    """``H̃^p(K_ω)`` for ``-1 <= p <= |ω| - 1`` via homology and universal coefficients."""
    faces = restricted_faces(K, omega)
    hom = reduced_homology_of_faces(faces, coeff, top=max(popcount(omega) - 1, -1))
    return cohomology_from_homology(hom, coeff)


def betti_table_hochster(K: SimplicialComplex, coeff: Coefficients = QQ, multigraded: bool = False,
                         prune: bool = True, threads: int | None = None) -> BettiTable:
    """Bigraded Betti numbers as sums of full-subcomplex cohomology.

    ``H̃^p(K_ω)`` contributes to bidegree ``(p + 1 - |ω|, 2|ω|)``.  Cones are
    skipped when ``prune`` is set.
    """

    def one(omega):
        if prune and is_cone_restriction(K, omega):
            return omega, {}
        return omega, full_subcomplex_cohomology(K, omega, coeff)

    table = BettiTable(coeff, multigraded={} if multigraded else None)
    for omega, groups in _map(one, range(1 << K.m), threads):
        j = popcount(omega)
        for p, g in groups.items():
            table.add(p + 1 - j, 2 * j, g)
            if multigraded and g.rank:
                table.multigraded[(p + 1 - j, omega)] = g.rank
    return table


# --------------------------------------------------------------- classes

@dataclass
class MultigradedClass:
    """A reduced cocycle of ``K_ω`` in degree ``p`` (keys: simplex masks)."""

    K: SimplicialComplex
    omega: int
    degree: int
    cochain: dict[int, object] = field(default_factory=dict)
    coeff: Coefficients = QQ

    @property
    def bidegree(self) -> tuple[int, int]:
        j = popcount(self.omega)
        return self.degree + 1 - j, 2 * j

    @property
    def total_degree(self) -> int:
        return self.degree + 1 + popcount(self.omega)

    def is_zero(self) -> bool:
        return not any(self.cochain.values())

    def to_dict(self) -> dict:
        from .koszul import _coeff_json

        return {
            "omega": list(to_vertices(self.omega)),
            "degree": self.degree,
            "cochain": [{"simplex": list(to_vertices(s)), "coeff": _coeff_json(c)}
                        for s, c in sorted(self.cochain.items(), key=lambda kv: to_vertices(kv[0])) if c],
        }

    @classmethod
    def from_dict(cls, K, data, coeff: Coefficients = QQ) -> "MultigradedClass":
        from fractions import Fraction

        cochain = {to_mask(t["simplex"]): coeff.elem(Fraction(str(t["coeff"]))) for t in data["cochain"]}
        return cls(K, to_mask(data["omega"]), int(data["degree"]), cochain, coeff)


class FullSubcomplexCohomology:
    """Cached cochain blocks of full subcomplexes over a field."""

    def __init__(self, K: SimplicialComplex, coeff: Coefficients = QQ):
        if not coeff.is_field:
            raise ValueError("ring computations are restricted to field coefficients")
        self.K = K
        self.coeff = coeff
        self._blocks: dict[tuple[int, int], tuple[list[int], CohomologyBlock]] = {}

    def block(self, omega: int, p: int):
        key = (omega, p)
        b = self._blocks.get(key)
        if b is None:
            b = self._blocks[key] = cochain_block(restricted_faces(self.K, omega), p, self.coeff)
        return b

    def rank(self, omega: int, p: int) -> int:
        if p < -1 or p > popcount(omega) - 1:
            return 0
        return self.block(omega, p)[1].rank

    def basis(self, omega: int, p: int) -> list[MultigradedClass]:
        if p < -1 or p > popcount(omega) - 1:
            return []
        simplices, blk = self.block(omega, p)
        return [MultigradedClass(self.K, omega, p, {s: c for s, c in zip(simplices, rep) if c}, self.coeff)
                for rep in blk.representatives]

    def coordinates(self, a: MultigradedClass) -> list:
        simplices, blk = self.block(a.omega, a.degree)
        vec = [a.cochain.get(s, 0) for s in simplices]
        return blk.coordinates(vec)

    def is_cocycle(self, a: MultigradedClass) -> bool:
        simplices, blk = self.block(a.omega, a.degree)
        return blk.is_cocycle([a.cochain.get(s, 0) for s in simplices])

    def is_trivial(self, a: MultigradedClass) -> bool:
        if a.degree < -1 or a.degree > popcount(a.omega) - 1:
            return True
        return not any(self.coordinates(a))

    def positive_basis(self) -> list[MultigradedClass]:
        """Basis of all classes except the unit, ordered by ``(ω, p)``."""
        out = []
        for omega in range(1, 1 << self.K.m):
            for p in range(-1, popcount(omega)):
                out += self.basis(omega, p)
        return out


def baskakov_product(a: MultigradedClass, b: MultigradedClass) -> MultigradedClass:
    """Product of full-subcomplex cocycles; zero when the vertex sets meet."""
    K, coeff = a.K, a.coeff
    omega = a.omega | b.omega
    deg = a.degree + b.degree + 1
    if a.omega & b.omega:
        return MultigradedClass(K, omega, deg, {}, coeff)
    base = shuffle_sign(a.omega, b.omega) * (-1 if (b.degree + 1) * popcount(a.omega) % 2 else 1)
    out: dict[int, object] = {}
    for s1, c1 in a.cochain.items():
        for s2, c2 in b.cochain.items():
            s = s1 | s2
            if not K.has_face_mask(s):
                continue
            out[s] = coeff.elem(out.get(s, 0) + base * shuffle_sign(s1, s2) * c1 * c2)
    return MultigradedClass(K, omega, deg, {s: c for s, c in out.items() if c}, coeff)


def zeta_sign(sigma: int, omega: int) -> int:
    k = popcount(sigma)
    sign = shuffle_sign(sigma, omega & ~sigma)
    return -sign if (k * (k - 1) // 2) % 2 else sign


def gamma_iso(a: MultigradedClass) -> KoszulElement:
    """Cochain map ``σ* ↦ ζ(σ, ω) u_{ω∖σ} v_σ`` into R*(K)."""
    terms = {(a.omega & ~s, s): zeta_sign(s, a.omega) * c for s, c in a.cochain.items()}
    return KoszulElement(a.K, terms, a.coeff)


def gamma_inverse(x: KoszulElement, omega: int) -> MultigradedClass:
    """Inverse of ``gamma_iso`` on the multidegree-ω part of ``x``."""
    cochain = {}
    degrees = set()
    for (w, s), c in x.terms.items():
        if w | s == omega:
            cochain[s] = zeta_sign(s, omega) * c
            degrees.add(popcount(s) - 1)
    if len(degrees) > 1:
        raise ValueError("element is not homogeneous in this multidegree")
    p = degrees.pop() if degrees else -1
    return MultigradedClass(x.K, omega, p, cochain, x.coeff)


@dataclass
class GolodScreen:
    products_vanish: bool
    witness: tuple[MultigradedClass, MultigradedClass] | None = None

    def to_dict(self) -> dict:
        out = {"verdict": "products_vanish" if self.products_vanish else "nontrivial_product"}
        out["witness"] = None if self.witness is None else [c.to_dict() for c in self.witness]
        return out


def golod_product_screen(K: SimplicialComplex, coeff: Coefficients = QQ) -> GolodScreen:
    """Look for a pair of positive-degree classes with nonzero product.

    Pairs are scanned in basis order; pairs whose target group vanishes are skipped.
    """
    H = FullSubcomplexCohomology(K, coeff)
    groups = []
    for omega in range(1, 1 << K.m):
        for p in range(-1, popcount(omega)):
            if H.rank(omega, p):
                groups.append((omega, p))
    for n1, (w1, p1) in enumerate(groups):
        for w2, p2 in groups[n1:]:
            if w1 & w2 or not H.rank(w1 | w2, p1 + p2 + 1):
                continue
            for a in H.basis(w1, p1):
                for b in H.basis(w2, p2):
                    if not H.is_trivial(baskakov_product(a, b)):
                        return GolodScreen(False, (a, b))
    return GolodScreen(True)
