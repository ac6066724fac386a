"""Exact reduced simplicial (co)homology over Q, F_p and Z.

Chains use the ascending-vertex orientation: deleting the vertex in position
``i`` (0-based) of a simplex carries the sign ``(-1)**i``.  The chain complex
is augmented, so ``{∅}`` has ``H̃_{-1} = k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .complexes import SimplicialComplex, popcount

# matrices with more entries than this go through the sparse column reduction
SPARSE_THRESHOLD = 250_000


@lru_cache(maxsize=None)
def _isprime(p: int) -> bool:
    from sympy import isprime

    return bool(isprime(p))


@dataclass(frozen=True)
class Coefficients:
    """Coefficient ring: ``Q``, ``Fp`` (with prime ``p``) or ``Z``."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Q", "Fp", "Z"):
            raise ValueError(f"unknown coefficient kind {self.kind!r}")
        if self.kind == "Fp":
            if self.p is None or not _isprime(self.p):
                raise ValueError(f"F_p needs a prime p, got {self.p}")
        elif self.p is not None:
            raise ValueError("only F_p takes a characteristic")

    @classmethod
    def parse(cls, text: str) -> "Coefficients":
        t = text.strip().lower()
        if t in ("q", "rationals"):
            return QQ
        if t in ("z", "integers"):
            return ZZ
        for prefix in ("fp:", "f"):
            if t.startswith(prefix):
                try:
                    return cls("Fp", int(t[len(prefix):]))
                except ValueError:
                    break
        raise ValueError(f"bad coefficient spec {text!r} (use q, z or fp:<prime>)")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    def __str__(self):
        return f"F{self.p}" if self.kind == "Fp" else self.kind

    @property
    def spec(self) -> str:
        return f"fp:{self.p}" if self.kind == "Fp" else self.kind.lower()

    # exact field arithmetic; Q uses Fraction, F_p uses ints in [0, p)
    def elem(self, x):
        if self.kind == "Q":
            return Fraction(x)
        if self.kind == "Fp":
            if isinstance(x, Fraction):
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        return int(x)

    def inv(self, x):
        if self.kind == "Q":
            return 1 / Fraction(x)
        if self.kind == "Fp":
            return pow(int(x), -1, self.p)
        if x in (1, -1):
            return x
        raise ZeroDivisionError(f"{x} is not a unit in Z")


QQ = Coefficients("Q")
ZZ = Coefficients("Z")


def GF(p: int) -> Coefficients:
    return Coefficients("Fp", p)


@dataclass(frozen=True)
class HomologyGroup:
    """Free rank plus torsion as sorted prime powers (empty over a field)."""

    rank: int = 0
    torsion: tuple[int, ...] = ()

    @property
    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.rank:
            parts.append(f"k^{self.rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def elementary_divisors(invariants: Iterable[int]) -> tuple[int, ...]:
    """Split invariant factors > 1 into sorted prime powers."""
    from sympy import factorint

    out = []
    for d in invariants:
        if d > 1:
            out += [q ** e for q, e in factorint(int(d)).items()]
    return tuple(sorted(out))


# ------------------------------------------------------------ Smith form

@dataclass
class SNFResult:
    diagonal: list[int]
    left: list[list[int]] | None = field(default=None, repr=False)
    right: list[list[int]] | None = field(default=None, repr=False)


def smith_normal_form(A: Sequence[Sequence[int]], transforms: bool = True) -> SNFResult:
    """Smith form ``U A V = D`` over Z with unimodular ``U``, ``V``.

    ``diagonal`` lists all ``min(rows, cols)`` diagonal entries
    (non-negative, each dividing the next, zeros last).  Pivots are chosen by
    minimal absolute value.  Arbitrary precision throughout.
    """
    a = [[int(x) for x in row] for row in A]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    U = [[int(i == j) for j in range(nr)] for i in range(nr)] if transforms else None
    V = [[int(i == j) for j in range(nc)] for i in range(nc)] if transforms else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst += q * row src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        if U is not None:
            U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        if V is not None:
            for row in V:
                row[dst] += q * row[src]

    n = min(nr, nc)
    t = 0
    while t < n:
        piv = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            p = a[t][t]
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            left = [(abs(a[i][t]), i, t) for i in range(t + 1, nr) if a[i][t]]
            left += [(abs(a[t][j]), t, j) for j in range(t + 1, nc) if a[t][j]]
            if left:
                _, i, j = min(left)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next((i for i in range(t + 1, nr)
                        if any(a[i][j] % p for j in range(t + 1, nc))), None)
            if bad is not None:
                add_row(t, bad, 1)
                continue
            break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    diag = [a[i][i] for i in range(n)]
    return SNFResult(diag, U, V)


def invariant_factors(A: np.ndarray) -> list[int]:
    """Nonzero Smith invariant factors of an integer matrix (int64 fast path)."""
    A = np.asarray(A)
    if A.size == 0:
        return []
    diag, ok = _kernels.snf_diagonal(A)
    if ok:
        return sorted(int(d) for d in diag)
    return [d for d in smith_normal_form(A.tolist(), transforms=False).diagonal if d]


# ----------------------------------------------------- field linear algebra

def rref(rows: list[list], coeff: Coefficients, order: Sequence[int] | None = None):
    """Reduced row echelon form over a field.

    ``order`` permutes the column scan (pivot preference); default ascending.
    Returns ``(R, pivots)`` with ``pivots[k]`` the pivot column of row ``k``.
    """
    R = [[coeff.elem(x) for x in row] for row in rows]
    nr = len(R)
    nc = len(R[0]) if nr else 0
    cols = list(order) if order is not None else list(range(nc))
    pivots = []
    r = 0
    p = coeff.p
    for c in cols:
        if r == nr:
            break
        k = next((i for i in range(r, nr) if R[i][c]), None)
        if k is None:
            continue
        R[r], R[k] = R[k], R[r]
        inv = coeff.inv(R[r][c])
        R[r] = [x * inv for x in R[r]]
        if p:
            R[r] = [x % p for x in R[r]]
        for i in range(nr):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
                if p:
                    R[i] = [x % p for x in R[i]]
        pivots.append(c)
        r += 1
    return R[:r], pivots


def field_rank(rows: list[list], coeff: Coefficients) -> int:
    if not rows or not rows[0]:
        return 0
    return len(rref(rows, coeff)[1])


def solve_linear(A: list[list], b: Sequence, coeff: Coefficients, order: Sequence[int] | None = None):
    """Solve ``A x = b`` over a field.

    Returns ``(x, kernel)``: ``x`` is the echelon solution with free variables
    zero (``None`` if the system is inconsistent) and ``kernel`` a basis of
    ``ker A``.  ``order`` changes the pivot preference, giving another
    particular solution.
    """
    if not coeff.is_field:
        raise ValueError("solve_linear needs field coefficients")
    nr = len(A)
    nc = len(A[0]) if nr else 0
    if len(b) != nr:
        raise ValueError("dimension mismatch")
    if nr == 0:
        return [coeff.elem(0)] * nc, [[coeff.elem(int(i == j)) for j in range(nc)] for i in range(nc)]
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    col_order = list(order) if order is not None else list(range(nc))
    R, piv = rref(aug, coeff, col_order + [nc])
    zero = coeff.elem(0)
    if nc in piv:
        x = None
    else:
        x = [zero] * nc
        for row, c in zip(R, piv):
            x[c] = row[nc]
    kernel = []
    rows = [(row, c) for row, c in zip(R, piv) if c != nc]
    free = [c for c in range(nc) if c not in piv]
    for f in free:
        v = [zero] * nc
        v[f] = coeff.elem(1)
        for row, c in rows:
            v[c] = coeff.elem(-row[f])
        kernel.append(v)
    return x, kernel


def nullspace(A: list[list], ncols: int, coeff: Coefficients) -> list[list]:
    if not A:
        return [[coeff.elem(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    return solve_linear(A, [0] * len(A), coeff)[1]


def _columns(M: np.ndarray) -> list[list[int]]:
    return [list(map(int, col)) for col in np.asarray(M).T]


class CohomologyBlock:
    """Cohomology of ``C_in --D_in--> C --D_out--> C_out`` at ``C`` over a field.

    ``D_in`` has shape ``(dim C, dim C_in)`` and ``D_out`` shape
    ``(dim C_out, dim C)``.  Class representatives are chosen greedily from a
    kernel basis, in order, against the span of the coboundaries.
    """

    def __init__(self, D_in: np.ndarray, D_out: np.ndarray, dim: int, coeff: Coefficients):
        if not coeff.is_field:
            raise ValueError("cohomology representatives need field coefficients")
        self.coeff = coeff
        self.dim = dim
        self.D_in = np.asarray(D_in, dtype=np.int64)
        self.D_out = np.asarray(D_out, dtype=np.int64)
        self.boundaries = [[coeff.elem(x) for x in col] for col in _columns(self.D_in)]
        cycles = nullspace(self.D_out.tolist(), dim, coeff) if dim else []
        basis = rref(self.boundaries, coeff)[0] if self.boundaries else []
        reps = []
        span = list(basis)
        rank = len(span)
        for z in cycles:
            if field_rank(span + [z], coeff) > rank:
                span.append(z)
                rank += 1
                reps.append(z)
        self.representatives = reps
        self._bspan = basis

    @property
    def rank(self) -> int:
        return len(self.representatives)

    def is_cocycle(self, vec) -> bool:
        if not self.dim:
            return True
        v = [self.coeff.elem(x) for x in vec]
        for row in self.D_out.tolist():
            s = sum(self.coeff.elem(a) * b for a, b in zip(row, v) if a)
            if self.coeff.elem(s) != 0:
                return False
        return True

    def coordinates(self, vec) -> list:
        """Class of a cocycle in the representative basis."""
        if not self.is_cocycle(vec):
            raise ValueError("not a cocycle")
        if not self.dim:
            return []
        gens = self.representatives + self._bspan
        A = [[g[i] for g in gens] for i in range(self.dim)]
        x, _ = solve_linear(A, list(vec), self.coeff)
        if x is None:  # pragma: no cover - cocycles always lie in the span
            raise ArithmeticError("cocycle outside cycle space")
        return x[: self.rank]

    def is_coboundary(self, vec) -> bool:
        return not any(self.coordinates(vec))

    def preimage(self, vec, order: Sequence[int] | None = None):
        """Some ``x`` with ``D_in x = vec``, or ``None``."""
        A = self.D_in.tolist()
        if self.D_in.shape[1] == 0:
            return [] if not any(self.coeff.elem(v) for v in vec) else None
        x, _ = solve_linear(A, list(vec), self.coeff, order)
        return x


# -------------------------------------------------------- simplicial chains

def faces_by_dim(face_masks: Iterable[int]) -> dict[int, list[int]]:
    """Faces grouped by dimension (``-1`` holds the empty face), each sorted."""
    from .complexes import face_order_key

    out: dict[int, list[int]] = {}
    for f in face_masks:
        out.setdefault(popcount(f) - 1, []).append(f)
    for k in out:
        out[k].sort(key=face_order_key)
    return out


def boundary_matrix(lower: list[int], upper: list[int]) -> np.ndarray:
    """Matrix of ∂ from the span of ``upper`` to the span of ``lower``."""
    index = {f: i for i, f in enumerate(lower)}
    M = np.zeros((len(lower), len(upper)), dtype=np.int64)
    for j, f in enumerate(upper):
        sign = 1
        rest = f
        while rest:
            bit = rest & -rest
            rest ^= bit
            M[index[f ^ bit], j] = sign
            sign = -sign
    return M


def _rank(M: np.ndarray, coeff: Coefficients) -> int:
    if M.size == 0:
        return 0
    if M.size > SPARSE_THRESHOLD:
        return sparse_rank(M, coeff)
    if coeff.kind == "Fp":
        return _kernels.rank_mod_p(M, coeff.p)
    return len(invariant_factors(M))


def sparse_rank(M: np.ndarray, coeff: Coefficients) -> int:
    """Rank by column reduction on sparse columns (dict row -> value)."""
    mod = coeff.p if coeff.kind == "Fp" else None
    conv = (lambda x: x % mod) if mod else Fraction
    cols = []
    for col in np.asarray(M).T:
        nz = np.nonzero(col)[0]
        cols.append({int(i): conv(int(col[i])) for i in nz})
    pivots: dict[int, dict] = {}
    for col in cols:
        col = {k: v for k, v in col.items() if v}
        while col:
            low = max(col)
            other = pivots.get(low)
            if other is None:
                pivots[low] = col
                break
            f = col[low] * (pow(int(other[low]), -1, mod) if mod else 1 / other[low])
            for k, v in other.items():
                nv = col.get(k, 0) - f * v
                if mod:
                    nv %= mod
                if nv:
                    col[k] = nv
                else:
                    col.pop(k, None)
    return len(pivots)


def _homology_from_faces(face_masks: Iterable[int], coeff: Coefficients, top: int) -> dict[int, HomologyGroup]:
    by_dim = faces_by_dim(face_masks)
    dims = {k: len(v) for k, v in by_dim.items()}
    ranks: dict[int, int] = {}
    torsion: dict[int, tuple[int, ...]] = {}
    for k in range(0, top + 2):
        if k in by_dim and k - 1 in by_dim:
            M = boundary_matrix(by_dim[k - 1], by_dim[k])
            if coeff.kind == "Z":
                inv = invariant_factors(M)
                ranks[k] = len(inv)
                torsion[k - 1] = elementary_divisors(inv)
            else:
                ranks[k] = _rank(M, coeff)
    out = {}
    for k in range(-1, top + 1):
        r = dims.get(k, 0) - ranks.get(k, 0) - ranks.get(k + 1, 0)
        out[k] = HomologyGroup(r, torsion.get(k, ()))
    return out


def reduced_homology(K: SimplicialComplex, coeff: Coefficients = QQ) -> dict[int, HomologyGroup]:
    """``H̃_i(K)`` for ``-1 <= i <= dim K``."""
    return _homology_from_faces(K.face_set, coeff, K.dim)


def reduced_homology_of_faces(face_masks, coeff: Coefficients = QQ, top: int | None = None):
    face_masks = list(face_masks)
    if top is None:
        top = max(popcount(f) for f in face_masks) - 1
    return _homology_from_faces(face_masks, coeff, top)


def cohomology_from_homology(hom: dict[int, HomologyGroup], coeff: Coefficients) -> dict[int, HomologyGroup]:
    """Universal coefficients: ``H̃^i`` has the free rank of ``H̃_i`` and the torsion of ``H̃_{i-1}``."""
    if coeff.is_field:
        return {k: HomologyGroup(g.rank) for k, g in hom.items()}
    return {k: HomologyGroup(g.rank, hom.get(k - 1, HomologyGroup()).torsion) for k, g in hom.items()}


def reduced_cohomology(K: SimplicialComplex, coeff: Coefficients = QQ) -> dict[int, HomologyGroup]:
    return cohomology_from_homology(reduced_homology(K, coeff), coeff)


def euler_characteristic(K: SimplicialComplex) -> int:
    """Reduced Euler characteristic from the face counts."""
    return sum((-1) ** (popcount(f) - 1) for f in K.face_set)


def cochain_block(face_masks: Iterable[int], p: int, coeff: Coefficients) -> tuple[list[int], CohomologyBlock]:
    """Cochains in degree ``p`` of a face collection with their cohomology block.

    The coboundary matrix is the transpose of the boundary matrix.
    """
    by_dim = faces_by_dim(face_masks)
    below, here, above = by_dim.get(p - 1, []), by_dim.get(p, []), by_dim.get(p + 1, [])
    D_in = boundary_matrix(below, here).T if below and here else np.zeros((len(here), len(below)), np.int64)
    D_out = boundary_matrix(here, above).T if here and above else np.zeros((len(above), len(here)), np.int64)
    return here, CohomologyBlock(D_in, D_out, len(here), coeff)
