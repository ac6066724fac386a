"""Face rings as monomial quotients: ideal membership, induced maps, lsop and
Cohen–Macaulay certification."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .complexes import (
    SimplicialComplex,
    SimplicialMap,
    face_order_key,
    link_mask,
    minimal_nonface_masks,
    to_mask,
    to_vertices,
)
from .homology import Coefficients, reduced_homology

# polynomials: {exponent tuple: integer coefficient}
Polynomial = dict


@dataclass(frozen=True)
class FaceRing:
    complex: SimplicialComplex

    @property
    def ideal_generators(self) -> list[tuple[int, ...]]:
        """Minimal non-faces; ``v_τ`` for these generate the Stanley–Reisner ideal."""
        return [to_vertices(t) for t in minimal_nonface_masks(self.complex)]

    def monomial_in_ideal(self, exponents: Sequence[int]) -> bool:
        return monomial_in_ideal(self.complex, exponents)

    def reduce(self, poly: Polynomial) -> Polynomial:
        return {e: c for e, c in poly.items() if c and not monomial_in_ideal(self.complex, e)}


def monomial_in_ideal(K: SimplicialComplex, exponents: Sequence[int]) -> bool:
    """A monomial lies in the Stanley–Reisner ideal iff its support is a non-face."""
    if len(exponents) != K.m:
        raise ValueError(f"exponent vector must have length {K.m}")
    support = to_mask(i + 1 for i, a in enumerate(exponents) if a)
    return not K.has_face_mask(support)


def _poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    out: Polynomial = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


@dataclass
class InducedHomomorphism:
    """``φ*: k[K2] → k[K1]``, ``w_j ↦ Σ_{i ∈ φ^{-1}(j)} v_i``."""

    phi: SimplicialMap

    def generator_image(self, j: int) -> Polynomial:
        m1 = self.phi.source.m
        return {tuple(int(k == i - 1) for k in range(m1)): 1 for i in self.phi.preimage(j)}

    @property
    def images(self) -> list[Polynomial]:
        return [self.generator_image(j) for j in range(1, self.phi.target.m + 1)]

    def apply(self, poly: Polynomial) -> Polynomial:
        """Image of a polynomial in the ``w`` variables (before reduction)."""
        m1 = self.phi.source.m
        out: Polynomial = {}
        for exps, c in poly.items():
            term: Polynomial = {(0,) * m1: c}
            for j, a in enumerate(exps, start=1):
                for _ in range(a):
                    term = _poly_mul(term, self.generator_image(j))
            for e, v in term.items():
                out[e] = out.get(e, 0) + v
        return {e: c for e, c in out.items() if c}

    def check_ideal(self) -> tuple[int, ...] | None:
        """Expand ``φ*(w_τ)`` for every minimal non-face ``τ`` of the target.

        Returns ``None`` when every term lies in the source ideal, otherwise a
        source face found among the terms (impossible for a simplicial map).
        """
        K1, K2 = self.phi.source, self.phi.target
        for tau in minimal_nonface_masks(K2):
            pre = [self.phi.preimage(j) for j in to_vertices(tau)]
            for choice in product(*pre):
                if K1.has_face_mask(to_mask(choice)):
                    return tuple(sorted(set(choice)))
        return None


def induced_hom(phi: SimplicialMap) -> InducedHomomorphism:
    return InducedHomomorphism(phi)


# --------------------------------------------------------------- lsop checks

@dataclass(frozen=True)
class CharMatrix:
    """Integer ``n × m`` matrix whose rows are the linear forms ``t_i = Σ λ_ij v_j``."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if len({len(r) for r in rows}) > 1:
            raise ValueError("ragged matrix")
        if rows and self.n > self.m:
            raise ValueError("a characteristic matrix needs n <= m")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def m(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def minor(self, columns: Sequence[int]) -> list[list[int]]:
        return [[r[j - 1] for j in columns] for r in self.rows]

    def to_dict(self) -> dict:
        return {"n": self.n, "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_dict(cls, data: dict) -> "CharMatrix":
        M = cls(tuple(tuple(r) for r in data["rows"]))
        if "n" in data and int(data["n"]) != M.n:
            raise ValueError("'n' does not match the number of rows")
        return M


def det(M: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by Bareiss elimination."""
    a = [list(map(int, r)) for r in M]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass
class Verdict:
    ok: bool
    witness: object = None
    detail: dict | None = None

    def to_dict(self, ok_word="pass", fail_word="fail") -> dict:
        out = {"verdict": ok_word if self.ok else fail_word, "witness": self.witness}
        if self.detail:
            out.update(self.detail)
        return out


def _check_shape(K: SimplicialComplex, L: CharMatrix):
    if L.m != K.m or L.n != K.dim + 1 or not K.is_pure():
        raise ValueError(
            f"matrix shape mismatch: need a pure complex and an {K.dim + 1}x{K.m} matrix, "
            f"got {L.n}x{L.m}" + ("" if K.is_pure() else " (complex is not pure)"))


def lsop_check_integer(K: SimplicialComplex, L: CharMatrix) -> Verdict:
    """Pass iff every facet minor has determinant ±1; else the first failing facet."""
    _check_shape(K, L)
    for f in K.facets:
        sigma = to_vertices(f)
        d = det(L.minor(sigma))
        if abs(d) != 1:
            return Verdict(False, list(sigma), {"det": d})
    return Verdict(True)


def lsop_check_field(K: SimplicialComplex, L: CharMatrix, coeff: Coefficients) -> Verdict:
    """Pass iff every facet minor is invertible over the field."""
    if not coeff.is_field:
        raise ValueError("lsop_check_field needs field coefficients")
    _check_shape(K, L)
    for f in K.facets:
        sigma = to_vertices(f)
        d = det(L.minor(sigma))
        if coeff.elem(d) == 0:
            return Verdict(False, list(sigma), {"det": d})
    return Verdict(True)


def reisner_cm_test(K: SimplicialComplex, coeff: Coefficients) -> Verdict:
    """Reisner's criterion: ``H̃_i(link σ) = 0`` for all faces σ and ``i < dim link σ``.

    Faces are scanned by size, then lexicographically; the first violation
    ``(σ, i)`` is returned.
    """
    if not coeff.is_field:
        raise ValueError("the Cohen-Macaulay test needs field coefficients")
    for s in sorted(K.face_set, key=face_order_key):
        L = link_mask(K, s)
        hom = reduced_homology(L, coeff)
        for i in range(-1, L.dim):
            if hom[i].rank:
                return Verdict(False, {"sigma": list(to_vertices(s)), "i": i})
    return Verdict(True)


__all__ = [
    "FaceRing", "monomial_in_ideal", "InducedHomomorphism", "induced_hom", "CharMatrix", "det",
    "Verdict", "lsop_check_integer", "lsop_check_field", "reisner_cm_test",
]
