"""Triple Massey products in R*(K) and the stellar-subdivision family that
carries non-trivial ones."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian

from .complexes import (
    SimplicialComplex,
    boundary_simplex,
    cut_cube_dual,
    full_subcomplex,
    join,
    popcount,
    stellar_subdivision,
    to_mask,
    to_vertices,
)
from .hochster import FullSubcomplexCohomology, gamma_iso
from .homology import QQ, Coefficients, field_rank
from .koszul import KoszulCohomology, KoszulElement, format_element, parse_element


class UndefinedMasseyProduct(ValueError):
    """Raised when ``a1 a2`` or ``a2 a3`` is not a coboundary."""

    def __init__(self, obstruction: str, coordinates: dict):
        self.obstruction = obstruction
        self.coordinates = coordinates
        super().__init__(f"undefined product: {obstruction} is not a coboundary")


@dataclass
class MasseyProblem:
    K: SimplicialComplex
    a1: KoszulElement
    a2: KoszulElement
    a3: KoszulElement
    coeff: Coefficients = QQ

    def __post_init__(self):
        for name, a in (("a1", self.a1), ("a2", self.a2), ("a3", self.a3)):
            if not a.is_cocycle():
                raise ValueError(f"{name} is not a cocycle")
            a.total_degree()  # homogeneity check

    @classmethod
    def parse(cls, K, a1: str, a2: str, a3: str, coeff: Coefficients = QQ) -> "MasseyProblem":
        return cls(K, *(parse_element(K, s, coeff) for s in (a1, a2, a3)), coeff)


@dataclass
class MasseyResult:
    representative: KoszulElement
    e: KoszulElement
    f: KoszulElement
    indeterminacy_basis: list[KoszulElement]
    trivial: bool
    degree: int
    cohomology: KoszulCohomology = field(repr=False)

    def in_coset(self, other: KoszulElement) -> bool:
        """True when ``other`` represents the same coset as the representative."""
        return _in_span(self.cohomology, self.indeterminacy_basis, self.representative - other)

    def to_dict(self) -> dict:
        return {
            "representative": format_element(self.representative),
            "representative_terms": self.representative.to_list(),
            "e": format_element(self.e),
            "f": format_element(self.f),
            "degree": self.degree,
            "indeterminacy_rank": _span_rank(self.cohomology, self.indeterminacy_basis),
            "trivial": self.trivial,
        }


def _coordinate_rows(H: KoszulCohomology, elements) -> list[dict]:
    return [H.coordinates(x) for x in elements]


def _flatten(H: KoszulCohomology, rows: list[dict]) -> list[list]:
    keys = sorted({k for r in rows for k in r})
    out = []
    for r in rows:
        vec = []
        for k in keys:
            vec += r.get(k) or [0] * H.block(*k).rank
        out.append(vec)
    return out


def _span_rank(H: KoszulCohomology, elements) -> int:
    rows = [r for r in _coordinate_rows(H, elements) if r]
    return field_rank(_flatten(H, rows), H.coeff) if rows else 0


def _in_span(H: KoszulCohomology, elements, x: KoszulElement) -> bool:
    target = H.coordinates(x)
    if not target:
        return True
    rows = [r for r in _coordinate_rows(H, elements) if r]
    if not rows:
        return False
    flat = _flatten(H, rows + [target])
    return field_rank(flat[:-1], H.coeff) == field_rank(flat, H.coeff)


def _classes_multiplying(H: KoszulCohomology, a: KoszulElement, total: int) -> list[KoszulElement]:
    """Basis of ``H^total``, skipping multidegrees whose product with ``a`` vanishes identically."""
    supports = list(a.components())
    out = []
    if not supports:
        return out
    for omega in range(1 << H.K.m):
        if all(omega & s for s in supports):
            continue
        out += H.basis(omega, 2 * popcount(omega) - total)
    return out


def indeterminacy(H: KoszulCohomology, a1: KoszulElement, a2: KoszulElement, a3: KoszulElement
                  ) -> list[KoszulElement]:
    """Cocycles ``a1·h`` and ``h'·a3`` spanning the indeterminacy of ``<a1, a2, a3>``."""
    d1, d2, d3 = a1.total_degree(), a2.total_degree(), a3.total_degree()
    out = []
    for h in _classes_multiplying(H, a1, d2 + d3 - 1):
        p = a1 * h
        if p:
            out.append(p)
    for h in _classes_multiplying(H, a3, d1 + d2 - 1):
        p = h * a3
        if p:
            out.append(p)
    return out


def triple_massey(P: MasseyProblem, order: str = "first", H: KoszulCohomology | None = None) -> MasseyResult:
    """Representative ``(-1)^{deg a1 + 1} a1 f + e a3`` with ``de = a1 a2``, ``df = a2 a3``.

    ``order`` selects the pivot preference used to solve for ``e`` and ``f``.
    """
    H = H or KoszulCohomology(P.K, P.coeff)
    a1, a2, a3 = P.a1, P.a2, P.a3
    p12, p23 = a1 * a2, a2 * a3
    e = H.preimage(p12, order)
    if e is None:
        raise UndefinedMasseyProduct("a1*a2", H.coordinates(p12))
    f = H.preimage(p23, order)
    if f is None:
        raise UndefinedMasseyProduct("a2*a3", H.coordinates(p23))
    d1 = a1.total_degree()
    w = (a1 * f).scale(-1 if d1 % 2 == 0 else 1) + e * a3
    if not w.is_cocycle():  # pragma: no cover - guaranteed by the Leibniz rule
        raise ArithmeticError("Massey representative is not a cocycle")
    basis = indeterminacy(H, a1, a2, a3)
    degree = d1 + a2.total_degree() + a3.total_degree() - 1
    return MasseyResult(w, e, f, basis, _in_span(H, basis, w), degree, H)


# ----------------------------------------------------- non-trivial family

@dataclass
class NTMASComplex:
    complex: SimplicialComplex
    parts: tuple[int, int, int]  # vertex masks V1, V2, V3

    @property
    def part_vertices(self) -> tuple[tuple[int, ...], ...]:
        return tuple(to_vertices(v) for v in self.parts)


def _check_facet(K: SimplicialComplex, sigma, name: str) -> int:
    s = to_mask(sigma)
    if s & ~K.full_mask:
        raise ValueError(f"{name} has vertices outside 1..{K.m}")
    if s not in K.facets:
        raise ValueError(f"{name} = {sorted(sigma)} is not a maximal simplex")
    return s


def build_ntmas_complex(K1: SimplicialComplex, K2: SimplicialComplex, K3: SimplicialComplex,
                        s1, s2a, s2b, s3) -> NTMASComplex:
    """Join ``K1*K2*K3`` then subdivide at ``σ2″∪σ3`` (vertex m+1) and ``σ1∪σ2′`` (vertex m+2).

    Simplices are given in each factor's own labels.
    """
    m1, m2, m3 = K1.m, K2.m, K3.m
    f1 = _check_facet(K1, s1, "sigma1")
    f2a = _check_facet(K2, s2a, "sigma2'")
    f2b = _check_facet(K2, s2b, "sigma2''")
    f3 = _check_facet(K3, s3, "sigma3")
    if f2a & f2b:
        raise ValueError("sigma2' and sigma2'' must be disjoint")
    K = join(join(K1, K2), K3)
    first = (f2b << m1) | (f3 << (m1 + m2))
    second = f1 | (f2a << m1)
    K = stellar_subdivision(K, to_vertices(first))
    K = stellar_subdivision(K, to_vertices(second))
    parts = ((1 << m1) - 1, ((1 << m2) - 1) << m1, ((1 << m3) - 1) << (m1 + m2))
    return NTMASComplex(K, parts)


def ntmas_classes(nt: NTMASComplex, coeff: Coefficients = QQ) -> tuple[KoszulElement, ...]:
    """Koszul cocycles for the fundamental classes of the three factor spheres."""
    K = nt.complex
    Hs = FullSubcomplexCohomology(K, coeff)
    out = []
    for n, V in enumerate(nt.parts, start=1):
        sub = full_subcomplex(K, to_vertices(V))
        p = sub.dim
        if Hs.rank(V, p) != 1:
            raise ValueError(f"full subcomplex on V{n} has H^{p} of rank {Hs.rank(V, p)}, expected 1")
        out.append(gamma_iso(Hs.basis(V, p)[0]))
    H = KoszulCohomology(K, coeff)
    for name, x in (("a1*a2", out[0] * out[1]), ("a2*a3", out[1] * out[2])):
        if not H.is_coboundary(x):
            raise ValueError(f"{name} is not a coboundary")
    return tuple(out)


def ntmas_instances(choices=(2, 3)):
    """All instances with factors ``∂Δ^{k-1}``, ``k ∈ choices``, and every valid facet choice.

    Yields ``(label, NTMASComplex)``; the middle factor needs two disjoint facets.
    """
    spheres = {k: boundary_simplex(k) for k in choices}
    for k1, k2, k3 in cartesian(choices, repeat=3):
        K1, K2, K3 = spheres[k1], spheres[k2], spheres[k3]
        for s1, s2a, s2b, s3 in cartesian(K1.facet_list(), K2.facet_list(), K2.facet_list(), K3.facet_list()):
            if to_mask(s2a) & to_mask(s2b):
                continue
            label = f"d{k1 - 1}:{list(s1)}|d{k2 - 1}:{list(s2a)},{list(s2b)}|d{k3 - 1}:{list(s3)}"
            yield label, build_ntmas_complex(K1, K2, K3, s1, s2a, s2b, s3)


def demo_p3(coeff: Coefficients = QQ) -> tuple[MasseyProblem, MasseyResult]:
    """``<v1u2, v3u4, v5u6>`` on the 8-vertex sphere dual to the cube with two edges cut."""
    P = MasseyProblem.parse(cut_cube_dual(), "v1u2", "v3u4", "v5u6", coeff)
    return P, triple_massey(P)
