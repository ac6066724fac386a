"""Homology of the coordinate subspace arrangement complement U(K), Alexander
duality between full subcomplexes and dual links, and the toral rank bound."""
from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import SimplicialComplex, dual_complex, face_order_key, link_mask, popcount, to_vertices
from .hochster import betti_table_hochster, is_cone_restriction, restricted_faces
from .homology import (
    QQ,
    Coefficients,
    HomologyGroup,
    cohomology_from_homology,
    reduced_cohomology,
    reduced_homology_of_faces,
)
from .koszul import _map


def _add(a: HomologyGroup, b: HomologyGroup) -> HomologyGroup:
    return HomologyGroup(a.rank + b.rank, tuple(sorted(a.torsion + b.torsion)))


def _group_json(g: HomologyGroup) -> dict:
    return {"rank": g.rank, "torsion": list(g.torsion)}


@dataclass
class ArrangementReport:
    """``H̃_p(U(K))`` per degree together with the pieces it was assembled from."""

    route: str
    coeff: Coefficients
    groups: dict[int, HomologyGroup] = field(default_factory=dict)
    pieces: list[tuple[tuple[int, ...], int, HomologyGroup]] = field(default_factory=list)

    def add(self, label: tuple[int, ...], degree: int, g: HomologyGroup):
        if g.is_zero:
            return
        self.groups[degree] = _add(self.groups.get(degree, HomologyGroup()), g)
        self.pieces.append((label, degree, g))

    @property
    def ranks(self) -> dict[int, int]:
        return {p: g.rank for p, g in sorted(self.groups.items()) if g.rank}

    def same_groups(self, other: "ArrangementReport") -> bool:
        return {p: g for p, g in self.groups.items() if not g.is_zero} == \
               {p: g for p, g in other.groups.items() if not g.is_zero}

    def to_dict(self) -> dict:
        key = "tau" if self.route == "subcomplex" else "sigma"
        return {
            "schema": 1,
            "route": self.route,
            "field": self.coeff.spec,
            "homology": [{"degree": p, **_group_json(g)} for p, g in sorted(self.groups.items())],
            "pieces": [{key: list(s), "degree": p, **_group_json(g)}
                       for s, p, g in sorted(self.pieces, key=lambda t: (len(t[0]), t[0], t[1]))],
        }


def uk_homology_via_subcomplexes(K: SimplicialComplex, coeff: Coefficients = QQ,
                                 threads: int | None = None) -> ArrangementReport:
    """``H̃_p(U(K)) = ⊕_{τ ∉ K} H̃_{p-|τ|-1}(K_τ)``; cones are skipped."""

    def one(tau):
        if K.has_face_mask(tau) or is_cone_restriction(K, tau):
            return tau, {}
        top = max(popcount(tau) - 1, -1)
        return tau, reduced_homology_of_faces(restricted_faces(K, tau), coeff, top)

    report = ArrangementReport("subcomplex", coeff)
    for tau, hom in _map(one, range(1 << K.m), threads):
        shift = popcount(tau) + 1
        for j, g in sorted(hom.items()):
            report.add(to_vertices(tau), j + shift, g)
    return report


def uk_homology_via_dual_links(K: SimplicialComplex, coeff: Coefficients = QQ,
                               threads: int | None = None) -> ArrangementReport:
    """``H̃_i(U(K)) = ⊕_{σ ∈ K̂} H̃^{2m-2|σ|-i-2}(link_{K̂} σ)``."""
    dual = dual_complex(K)
    m = K.m

    def one(sigma):
        return sigma, reduced_cohomology(link_mask(dual, sigma), coeff)

    report = ArrangementReport("dual", coeff)
    for sigma, coh in _map(one, sorted(dual.face_set), threads):
        for q, g in sorted(coh.items()):
            report.add(to_vertices(sigma), 2 * m - 2 * popcount(sigma) - q - 2, g)
    return report


@dataclass
class DualityResult:
    ok: bool
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {"verdict": "pass" if self.ok else "fail", "witness": self.witness}


def alexander_duality_check(K: SimplicialComplex, coeff: Coefficients = QQ) -> DualityResult:
    """Compare ``H̃_j(K_σ)`` with ``H̃^{|σ|-3-j}(link_{K̂} σ̂)`` for every non-face ``σ``.

    Non-faces are visited by size, then lexicographically; the first mismatch
    ``(σ, j)`` is reported.
    """
    dual = dual_complex(K)
    full = K.full_mask
    nonfaces = sorted((t for t in range(1 << K.m) if not K.has_face_mask(t)), key=face_order_key)
    for sigma in nonfaces:
        s = popcount(sigma)
        hom = reduced_homology_of_faces(restricted_faces(K, sigma), coeff, s - 2)
        coh = reduced_cohomology(link_mask(dual, full & ~sigma), coeff)
        for j in range(-1, s - 1):
            left = hom.get(j, HomologyGroup())
            right = coh.get(s - 3 - j, HomologyGroup())
            if left != right:
                return DualityResult(False, {"sigma": list(to_vertices(sigma)), "j": j,
                                             "homology": _group_json(left), "cohomology": _group_json(right)})
    return DualityResult(True)


def whole_complex_duality(K: SimplicialComplex, coeff: Coefficients = QQ) -> bool:
    """``H̃_j(K) ≅ H̃^{m-3-j}(K̂)`` for all ``j``."""
    from .homology import reduced_homology

    hom = reduced_homology(K, coeff)
    coh = cohomology_from_homology(reduced_homology(dual_complex(K), coeff), coeff)
    return all(hom.get(j, HomologyGroup()) == coh.get(K.m - 3 - j, HomologyGroup())
               for j in range(-1, K.m - 1))


@dataclass
class ToralRankReport:
    lhs: int
    rhs: int
    n: int
    pure: bool

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs

    @property
    def margin(self) -> int:
        return self.lhs - self.rhs

    def to_dict(self) -> dict:
        return {"verdict": "holds" if self.holds else "violation", "lhs": self.lhs, "rhs": self.rhs,
                "margin": self.margin, "n": self.n, "pure": self.pure,
                "n_source": "dimension" if self.pure else "dimension (complex not pure)"}


def toral_rank_check(K: SimplicialComplex, threads: int | None = None) -> ToralRankReport:
    """``dim ⊕_ω H̃*(K_ω; Q)`` against ``2^{m-n}`` with ``n = dim K + 1``.

    A failure is reported, not raised: the bound is a conjecture.
    """
    n = K.dim + 1
    lhs = betti_table_hochster(K, QQ, threads=threads).total_dimension()
    return ToralRankReport(lhs, 2 ** (K.m - n), n, K.is_pure())


def regraded_betti(K: SimplicialComplex, coeff: Coefficients = QQ) -> dict[int, int]:
    """Reduced total Betti numbers ``b^k(Z_K) = Σ_{2j-i=k} β^{-i,2j}`` (unit dropped)."""
    out = betti_table_hochster(K, coeff).total_betti()
    out = dict(out)
    out[0] = out.get(0, 0) - 1
    return {k: v for k, v in sorted(out.items()) if v}
