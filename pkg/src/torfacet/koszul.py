"""The finite differential algebra R*(K) and its bigraded cohomology.

A basis monomial ``u_ω v_σ`` is stored as the mask pair ``(ω, σ)`` with
``ω ∩ σ = ∅`` and ``σ ∈ K``.  Exterior generators are kept in ascending
order, so

* ``d(u_ω v_σ) = Σ_{i ∈ ω} (-1)^{pos(i, ω)} u_{ω∖i} v_{σ∪i}`` (0-based
  position; terms with ``σ ∪ i ∉ K`` vanish), and
* ``u_ω1 v_σ1 · u_ω2 v_σ2 = ε(ω1, ω2) u_{ω1∪ω2} v_{σ1∪σ2}`` with ``ε`` the
  sign of the shuffle merging ``ω1`` and ``ω2``; the product is zero when
  the supports overlap or ``σ1 ∪ σ2 ∉ K``.

Bidegree of ``u_ω v_σ`` is ``(-|ω|, 2|ω| + 2|σ|)`` and its multidegree is
``ω ∪ σ``.
"""
from __future__ import annotations

import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .complexes import SimplicialComplex, popcount, submasks, to_mask, to_vertices
from .homology import (
    QQ,
    Coefficients,
    CohomologyBlock,
    HomologyGroup,
    _rank,
    elementary_divisors,
    invariant_factors,
)


def shuffle_sign(a: int, b: int) -> int:
    """Sign of the permutation sorting the concatenation of sorted ``a`` then ``b``."""
    inv = 0
    rest = b
    while rest:
        bit = rest & -rest
        rest ^= bit
        inv += popcount(a & ~((bit << 1) - 1))
    return -1 if inv & 1 else 1


# ------------------------------------------------------------------ elements

class KoszulElement:
    """Exact linear combination of monomials ``u_ω v_σ`` in R*(K)."""

    __slots__ = ("K", "coeff", "terms")

    def __init__(self, K: SimplicialComplex, terms=None, coeff: Coefficients = QQ):
        self.K = K
        self.coeff = coeff
        self.terms: dict[tuple[int, int], object] = {}
        for key, c in (terms or {}).items():
            self._add_term(key, c)

    def _add_term(self, key, c):
        omega, sigma = key
        if omega & sigma or not self.K.has_face_mask(sigma):
            return
        c = self.coeff.elem(c)
        new = self.coeff.elem(self.terms.get(key, 0) + c)
        if new:
            self.terms[key] = new
        else:
            self.terms.pop(key, None)

    @classmethod
    def monomial(cls, K, omega, sigma, c=1, coeff: Coefficients = QQ) -> "KoszulElement":
        """``c · u_omega v_sigma`` from vertex collections."""
        return cls(K, {(to_mask(omega), to_mask(sigma)): c}, coeff)

    @classmethod
    def zero(cls, K, coeff: Coefficients = QQ) -> "KoszulElement":
        return cls(K, {}, coeff)

    @classmethod
    def one(cls, K, coeff: Coefficients = QQ) -> "KoszulElement":
        return cls(K, {(0, 0): 1}, coeff)

    def _new(self, terms=None):
        return KoszulElement(self.K, terms, self.coeff)

    # arithmetic
    def __add__(self, other):
        out = self._new(self.terms)
        for k, c in other.terms.items():
            out._add_term(k, c)
        return out

    def __neg__(self):
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.coeff.elem(c)
        return self._new({k: v * c for k, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other):
        if not isinstance(other, KoszulElement):
            return self.scale(other)
        out = self._new()
        for (w1, s1), c1 in self.terms.items():
            for (w2, s2), c2 in other.terms.items():
                if (w1 | s1) & (w2 | s2):
                    continue
                out._add_term((w1 | w2, s1 | s2), shuffle_sign(w1, w2) * c1 * c2)
        return out

    def __eq__(self, other):
        return isinstance(other, KoszulElement) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"KoszulElement({format_element(self)})"

    def d(self) -> "KoszulElement":
        out = self._new()
        for (omega, sigma), c in self.terms.items():
            sign = 1
            rest = omega
            while rest:
                bit = rest & -rest
                rest ^= bit
                out._add_term((omega ^ bit, sigma | bit), sign * c)
                sign = -sign
        return out

    def is_cocycle(self) -> bool:
        return not self.d()

    # gradings
    def bidegrees(self) -> set[tuple[int, int]]:
        return {(-popcount(w), 2 * popcount(w | s)) for w, s in self.terms}

    def total_degree(self) -> int:
        degs = {popcount(w) + 2 * popcount(s) for w, s in self.terms}
        if len(degs) > 1:
            raise ValueError("element is not homogeneous")
        return degs.pop() if degs else 0

    def components(self) -> dict[int, "KoszulElement"]:
        """Split by multidegree ``ω ∪ σ``."""
        out: dict[int, KoszulElement] = {}
        for (w, s), c in self.terms.items():
            out.setdefault(w | s, self._new())._add_term((w, s), c)
        return out

    # serialisation
    def to_list(self) -> list[dict]:
        out = []
        for (w, s) in sorted(self.terms, key=lambda k: (to_vertices(k[0] | k[1]), to_vertices(k[0]))):
            out.append({"omega": list(to_vertices(w)), "sigma": list(to_vertices(s)),
                        "coeff": _coeff_json(self.terms[(w, s)])})
        return out

    @classmethod
    def from_list(cls, K, data, coeff: Coefficients = QQ) -> "KoszulElement":
        out = cls(K, {}, coeff)
        for t in data:
            omega, sigma = t["omega"], t["sigma"]
            for v in list(omega) + list(sigma):
                if not 1 <= v <= K.m:
                    raise ValueError(f"vertex {v} out of range 1..{K.m}")
            w, s = to_mask(omega), to_mask(sigma)
            if w & s:
                raise ValueError("u_i v_i is zero in R*(K); omega and sigma must be disjoint")
            out._add_term((w, s), Fraction(str(t.get("coeff", 1))))
        return out


def _coeff_json(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else str(c)
    return int(c)


def format_monomial(omega: int, sigma: int) -> str:
    v = "".join(f"v{i}" for i in to_vertices(sigma))
    u = "".join(f"u{i}" for i in to_vertices(omega))
    return " ".join(p for p in (v, u) if p) or "1"


def format_element(x: KoszulElement) -> str:
    if not x.terms:
        return "0"
    out = ""
    for (w, s) in sorted(x.terms, key=lambda k: (to_vertices(k[0] | k[1]), to_vertices(k[0]))):
        c = x.terms[(w, s)]
        if x.coeff.kind == "Q" and c < 0:
            sign, c = "-", -c
        else:
            sign = "+"
        body = format_monomial(w, s) if c == 1 else f"{c}*{format_monomial(w, s)}"
        if not out:
            out = body if sign == "+" else f"-{body}"
        else:
            out += f" {sign} {body}"
    return out


_TERM = re.compile(r"([+-]?)\s*(?:([0-9]+(?:/[0-9]+)?)\s*\*?\s*)?((?:[uv][0-9]+\s*)+|1)")


def parse_element(K: SimplicialComplex, text: str, coeff: Coefficients = QQ) -> KoszulElement:
    """Parse strings such as ``v1u2`` or ``u1v3 - u3v1`` (variables commute up to sign)."""
    out = KoszulElement.zero(K, coeff)
    pos = 0
    text = text.strip()
    if text == "0":
        return out
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse Koszul element near {text[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        c = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        mono = KoszulElement.one(K, coeff)
        body = m.group(3).replace(" ", "")
        if body != "1":
            for kind, idx in re.findall(r"([uv])([0-9]+)", body):
                i = int(idx)
                if not 1 <= i <= K.m:
                    raise ValueError(f"vertex {i} out of range 1..{K.m}")
                gen = KoszulElement(K, {((1 << (i - 1)), 0) if kind == "u" else (0, 1 << (i - 1)): 1}, coeff)
                mono = mono * gen
        out = out + mono.scale(sign * c)
        pos = m.end()
        while pos < len(text) and text[pos] == " ":
            pos += 1
    return out


def load_element(K: SimplicialComplex, text: str, coeff: Coefficients = QQ) -> KoszulElement:
    """Element from JSON (term list) or the compact string syntax."""
    t = text.strip()
    if t.startswith("["):
        return KoszulElement.from_list(K, json.loads(t), coeff)
    return parse_element(K, t, coeff)


def differential(x: KoszulElement) -> KoszulElement:
    return x.d()


def cup_product(x: KoszulElement, y: KoszulElement) -> KoszulElement:
    """Product of two cocycles (cochain-level representative of the class product)."""
    if not x.is_cocycle() or not y.is_cocycle():
        raise ValueError("cup product needs cocycle representatives")
    return x * y


# --------------------------------------------------------- multidegree blocks

class MultidegreeComplex:
    """The subcomplex of R*(K) in multidegree ``ω``.

    ``basis[i]`` lists the monomials ``u_{ω∖σ} v_σ`` with ``|ω∖σ| = i``
    (bidegree ``(-i, 2|ω|)``); ``matrix(i)`` is the differential from level
    ``i`` to level ``i - 1``.
    """

    def __init__(self, K: SimplicialComplex, omega_mask: int, coeff: Coefficients = QQ, faces=None):
        self.K = K
        self.omega = omega_mask
        self.coeff = coeff
        j = popcount(omega_mask)
        if faces is None:
            faces = [s for s in submasks(omega_mask) if K.has_face_mask(s)]
        levels: dict[int, list[tuple[int, int]]] = {i: [] for i in range(j + 1)}
        for s in faces:
            w = omega_mask & ~s
            levels[popcount(w)].append((w, s))
        for i in levels:
            levels[i].sort(key=lambda k: to_vertices(k[1]))
        self.j = j
        self.basis = levels
        self.index = {i: {mono: n for n, mono in enumerate(b)} for i, b in levels.items()}

    def matrix(self, i: int) -> np.ndarray:
        """Differential ``C^{-i} → C^{-i+1}`` (rows: level ``i-1``)."""
        src = self.basis.get(i, [])
        dst = self.basis.get(i - 1, [])
        M = np.zeros((len(dst), len(src)), dtype=np.int64)
        idx = self.index.get(i - 1, {})
        for col, (w, s) in enumerate(src):
            sign = 1
            rest = w
            while rest:
                bit = rest & -rest
                rest ^= bit
                row = idx.get((w ^ bit, s | bit))
                if row is not None:
                    M[row, col] = sign
                sign = -sign
        return M

    def cohomology(self) -> dict[int, HomologyGroup]:
        """``H^{-i, 2ω}`` for every level ``i`` (zero groups omitted)."""
        out = {}
        mats = {i: self.matrix(i) for i in range(self.j + 2)}
        if self.coeff.kind == "Z":
            inv = {i: invariant_factors(M) for i, M in mats.items()}
            ranks = {i: len(v) for i, v in inv.items()}
        else:
            ranks = {i: _rank(M, self.coeff) for i, M in mats.items()}
        for i in range(self.j + 1):
            r = len(self.basis[i]) - ranks.get(i, 0) - ranks.get(i + 1, 0)
            tors = elementary_divisors(inv[i + 1]) if self.coeff.kind == "Z" else ()
            g = HomologyGroup(r, tors)
            if not g.is_zero:
                out[i] = g
        return out

    def block(self, i: int) -> CohomologyBlock:
        return CohomologyBlock(self.matrix(i + 1), self.matrix(i), len(self.basis.get(i, [])), self.coeff)

    def vector(self, x: KoszulElement, i: int) -> list:
        """Coordinates of the multidegree-ω, level-i part of ``x``."""
        v = [self.coeff.elem(0)] * len(self.basis[i])
        for key, c in x.terms.items():
            n = self.index[i].get(key)
            if n is not None:
                v[n] = c
        return v

    def element(self, vec, i: int) -> KoszulElement:
        return KoszulElement(self.K, {mono: c for mono, c in zip(self.basis[i], vec) if c}, self.coeff)


def multidegree_complex(K: SimplicialComplex, omega, coeff: Coefficients = QQ) -> MultidegreeComplex:
    omega_mask = omega if isinstance(omega, int) else to_mask(omega)
    if omega_mask & ~K.full_mask:
        raise ValueError("multidegree outside the vertex set")
    return MultidegreeComplex(K, omega_mask, coeff)


# --------------------------------------------------------------- Betti tables

@dataclass
class BettiTable:
    """Bigraded Tor ranks keyed by ``(-i, 2j)``.

    ``multigraded`` refines the ranks by ``(-i, ω)`` when requested.
    """

    coeff: Coefficients
    entries: dict[tuple[int, int], HomologyGroup] = field(default_factory=dict)
    multigraded: dict[tuple[int, int], int] | None = None

    def rank(self, neg_i: int, j2: int) -> int:
        g = self.entries.get((neg_i, j2))
        return g.rank if g else 0

    def ranks(self) -> dict[tuple[int, int], int]:
        return {k: g.rank for k, g in sorted(self.entries.items()) if g.rank}

    def total_betti(self) -> dict[int, int]:
        """Ordinary Betti numbers ``b^k = Σ_{2j-i=k} b^{-i,2j}``."""
        out: dict[int, int] = {}
        for (neg_i, j2), g in self.entries.items():
            if g.rank:
                out[j2 + neg_i] = out.get(j2 + neg_i, 0) + g.rank
        return dict(sorted(out.items()))

    def total_dimension(self) -> int:
        return sum(g.rank for g in self.entries.values())

    def __eq__(self, other):
        return (isinstance(other, BettiTable) and self.coeff == other.coeff
                and self.entries == other.entries)

    def add(self, neg_i: int, j2: int, g: HomologyGroup):
        if g.is_zero:
            return
        old = self.entries.get((neg_i, j2), HomologyGroup())
        self.entries[(neg_i, j2)] = HomologyGroup(old.rank + g.rank, tuple(sorted(old.torsion + g.torsion)))

    def to_dict(self) -> dict:
        out = {
            "schema": 1,
            "field": self.coeff.spec,
            "entries": [
                {"i": -neg_i, "j2": j2, "rank": g.rank, "torsion": list(g.torsion)}
                for (neg_i, j2), g in sorted(self.entries.items(), key=lambda kv: (-kv[0][0], kv[0][1]))
            ],
        }
        if self.multigraded is not None:
            out["multigraded"] = [
                {"i": -neg_i, "omega": list(to_vertices(w)), "rank": r}
                for (neg_i, w), r in sorted(self.multigraded.items(), key=lambda kv: (-kv[0][0], kv[0][1]))
            ]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "BettiTable":
        t = cls(Coefficients.parse(data["field"]))
        for e in data["entries"]:
            t.add(-int(e["i"]), int(e["j2"]), HomologyGroup(int(e["rank"]), tuple(e.get("torsion", ()))))
        if "multigraded" in data:
            t.multigraded = {(-int(e["i"]), to_mask(e["omega"])): int(e["rank"]) for e in data["multigraded"]}
        return t

    def format(self) -> str:
        lines = [f"Betti table over {self.coeff}:"]
        for (neg_i, j2), g in sorted(self.entries.items(), key=lambda kv: (-kv[0][0], kv[0][1])):
            tors = f"  torsion {list(g.torsion)}" if g.torsion else ""
            lines.append(f"  ({neg_i},{j2}): {g.rank}{tors}")
        return "\n".join(lines)


def _map(fn, items, threads: int | None):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def betti_table_koszul(K: SimplicialComplex, coeff: Coefficients = QQ, multigraded: bool = False,
                       threads: int | None = None) -> BettiTable:
    """Bigraded Tor of ``k[K]`` from the cohomology of all ``2^m`` multidegree blocks."""
    faces = K.faces

    def one(omega):
        fs = [s for s in faces if s & ~omega == 0]
        return omega, MultidegreeComplex(K, omega, coeff, fs).cohomology()

    table = BettiTable(coeff, multigraded={} if multigraded else None)
    for omega, groups in _map(one, range(1 << K.m), threads):
        j2 = 2 * popcount(omega)
        for i, g in groups.items():
            table.add(-i, j2, g)
            if multigraded and g.rank:
                table.multigraded[(-i, omega)] = g.rank
    return table


def betti_table_full_complex(K: SimplicialComplex, coeff: Coefficients = QQ) -> BettiTable:
    """Oracle: cohomology of each ``C^{*,2j}`` assembled without the multigrading.

    Intended for small ``m``; over Z the torsion comes from one Smith form per degree.
    """
    faces = K.faces
    basis: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for omega in range(1 << K.m):
        for s in faces:
            if s & ~omega == 0:
                w = omega & ~s
                basis.setdefault((popcount(w), popcount(omega)), []).append((w, s))
    table = BettiTable(coeff)
    for j in range(K.m + 1):
        mats = {}
        for i in range(j + 2):
            src = basis.get((i, j), [])
            dst = basis.get((i - 1, j), [])
            idx = {mono: n for n, mono in enumerate(dst)}
            M = np.zeros((len(dst), len(src)), dtype=np.int64)
            for col, (w, s) in enumerate(src):
                x = KoszulElement(K, {(w, s): 1}, QQ).d()
                for key, c in x.terms.items():
                    M[idx[key], col] = int(c)
            mats[i] = M
        if coeff.kind == "Z":
            inv = {i: invariant_factors(M) for i, M in mats.items()}
            ranks = {i: len(v) for i, v in inv.items()}
        else:
            ranks = {i: _rank(M, coeff) for i, M in mats.items()}
        for i in range(j + 1):
            r = len(basis.get((i, j), [])) - ranks.get(i, 0) - ranks.get(i + 1, 0)
            tors = elementary_divisors(inv[i + 1]) if coeff.kind == "Z" else ()
            table.add(-i, 2 * j, HomologyGroup(r, tors))
    return table


# ----------------------------------------------------- cohomology with classes

class KoszulCohomology:
    """Lazy per-multidegree cohomology bases of R*(K) over a field."""

    def __init__(self, K: SimplicialComplex, coeff: Coefficients = QQ):
        if not coeff.is_field:
            raise ValueError("class computations need field coefficients")
        self.K = K
        self.coeff = coeff
        self._complexes: dict[int, MultidegreeComplex] = {}
        self._blocks: dict[tuple[int, int], CohomologyBlock] = {}

    def complex(self, omega: int) -> MultidegreeComplex:
        c = self._complexes.get(omega)
        if c is None:
            c = self._complexes[omega] = MultidegreeComplex(self.K, omega, self.coeff)
        return c

    def block(self, omega: int, i: int) -> CohomologyBlock:
        b = self._blocks.get((omega, i))
        if b is None:
            b = self._blocks[(omega, i)] = self.complex(omega).block(i)
        return b

    def basis(self, omega: int, i: int) -> list[KoszulElement]:
        """Cocycle representatives of a basis of ``H^{-i, 2ω}``."""
        if i < 0 or i > popcount(omega):
            return []
        c = self.complex(omega)
        return [c.element(v, i) for v in self.block(omega, i).representatives]

    def basis_in_degree(self, total: int) -> list[KoszulElement]:
        """Basis of ``H^total`` across all multidegrees, ordered by ``ω``."""
        out = []
        for omega in range(1 << self.K.m):
            i = 2 * popcount(omega) - total
            out += self.basis(omega, i)
        return out

    def _pieces(self, x: KoszulElement):
        for omega, comp in sorted(x.components().items()):
            levels = {popcount(w) for w, _ in comp.terms}
            for i in sorted(levels):
                part = KoszulElement(self.K, {k: c for k, c in comp.terms.items() if popcount(k[0]) == i},
                                     self.coeff)
                yield omega, i, part

    def coordinates(self, x: KoszulElement) -> dict[tuple[int, int], list]:
        """Class of a cocycle as coordinates per ``(ω, i)`` block (zero blocks dropped)."""
        out = {}
        for omega, i, part in self._pieces(x):
            coords = self.block(omega, i).coordinates(self.complex(omega).vector(part, i))
            if any(coords):
                out[(omega, i)] = coords
        return out

    def is_coboundary(self, x: KoszulElement) -> bool:
        if not x.is_cocycle():
            raise ValueError("not a cocycle")
        return not self.coordinates(x)

    def preimage(self, x: KoszulElement, order: str = "first") -> KoszulElement | None:
        """Some ``e`` with ``d e = x``, solved block by block; ``None`` if none exists."""
        out = KoszulElement.zero(self.K, self.coeff)
        for omega, i, part in self._pieces(x):
            c = self.complex(omega)
            blk = self.block(omega, i)
            ncols = len(c.basis.get(i + 1, []))
            col_order = list(range(ncols))[::-1] if order == "last" else None
            sol = blk.preimage(c.vector(part, i), col_order)
            if sol is None:
                return None
            if ncols:
                out = out + c.element(sol, i + 1)
        return out
