"""Named and random complexes, stored reference values and batch cross-checks."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import comb
from pathlib import Path

from .complexes import (
    SimplicialComplex,
    boundary_simplex,
    cross_polytope,
    cut_cube_dual,
    from_minimal_nonfaces,
    generate,
    minimal_nonfaces,
    mgon,
    points,
    rp2,
    simplex,
)
from .homology import QQ, Coefficients

CORPUS_VERSION = "v1"


def random_complex(m: int, density=Fraction(1, 2), seed: int = 0) -> SimplicialComplex:
    """Each nonempty ``S ⊆ [m]`` becomes a candidate facet with probability ``density^|S|``.

    Subsets are visited in increasing bitmask order with one draw each from
    ``random.Random(seed)``, so a seed fixes the complex.  Density 1 gives the
    full simplex and density 0 the complex ``{∅}``.
    """
    if not 1 <= m <= 16:
        raise ValueError("random_complex needs 1 <= m <= 16")
    d = Fraction(str(density)) if not isinstance(density, Fraction) else density
    if not 0 <= d <= 1:
        raise ValueError("density must lie in [0, 1]")
    rng = random.Random(seed)
    facets = []
    dfloat = float(d)
    for s in range(1, 1 << m):
        if rng.random() < dfloat ** bin(s).count("1"):
            facets.append(s)
    if d == 1:
        facets = [(1 << m) - 1]
    return SimplicialComplex(m, tuple(facets) or (0,))


def random_corpus(count: int, max_m: int, seed: int, min_m: int = 1):
    """``count`` random complexes with ``m`` and density drawn from ``seed``."""
    rng = random.Random(seed)
    for k in range(count):
        m = rng.randint(min_m, max_m)
        density = Fraction(rng.randint(2, 8), 10)
        yield f"random-{seed}-{k}", random_complex(m, density, rng.randrange(1 << 30))


# ----------------------------------------------------------------- named

@dataclass(frozen=True)
class CorpusEntry:
    name: str
    complex: SimplicialComplex
    sphere: bool = False
    provenance: str = "construction"

    def to_dict(self) -> dict:
        return {"name": self.name, "complex": self.complex.to_dict(), "sphere": self.sphere,
                "provenance": self.provenance}

    @classmethod
    def from_dict(cls, data: dict) -> "CorpusEntry":
        return cls(data["name"], SimplicialComplex.from_dict(data["complex"]), bool(data["sphere"]),
                   data["provenance"])


FIGURE_NONFACES = ((1, 5), (3, 4), (1, 2, 3), (2, 4, 5))


def _ntmas_small() -> SimplicialComplex:
    from .massey import build_ntmas_complex

    return build_ntmas_complex(boundary_simplex(3), boundary_simplex(2), boundary_simplex(2),
                               (1, 2), (1,), (2,), (1,)).complex


def build_corpus() -> list[CorpusEntry]:
    out = [CorpusEntry(f"simplex-{m}", simplex(m)) for m in (1, 2, 3, 4)]
    out += [CorpusEntry(f"boundary-simplex-{m}", boundary_simplex(m), True) for m in range(2, 7)]
    out += [CorpusEntry(f"mgon-{m}", mgon(m), True) for m in range(4, 9)]
    out += [CorpusEntry(f"points-{m}", points(m)) for m in range(2, 7)]
    out += [CorpusEntry(f"cross-polytope-{n}", cross_polytope(n), True) for n in (2, 3)]
    out += [
        CorpusEntry("cut-cube-dual", cut_cube_dual(), True, "worked-example"),
        CorpusEntry("rp2", rp2()),
        CorpusEntry("two-disjoint-edges", SimplicialComplex.from_facets(4, [[1, 2], [3, 4]])),
        CorpusEntry("figure-complex", from_minimal_nonfaces(5, FIGURE_NONFACES), False, "worked-example"),
        CorpusEntry("ghost-vertices-3", SimplicialComplex(3, (0,))),
        CorpusEntry("ghost-vertex-triangle", SimplicialComplex.from_facets(4, [[1, 2], [2, 3], [1, 3]])),
        CorpusEntry("ntmas-d2-d1-d1", _ntmas_small(), True),
    ]
    return out


def data_dir() -> Path:
    return Path(str(resources.files("torfacet") / "corpus_data" / CORPUS_VERSION))


def write_corpus(directory: Path | None = None) -> Path:
    """Serialise the named corpus; output is byte-stable."""
    directory = Path(directory or data_dir())
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / "complexes.json"
    path.write_text(json.dumps([e.to_dict() for e in build_corpus()], indent=1) + "\n")
    return path


@lru_cache(maxsize=None)
def load_corpus() -> tuple[CorpusEntry, ...]:
    data = json.loads((data_dir() / "complexes.json").read_text())
    return tuple(CorpusEntry.from_dict(d) for d in data)


def load_goldens() -> list[dict]:
    return json.loads((data_dir() / "goldens.json").read_text())["checks"]


# ----------------------------------------------------------------- suites

def _result(name, coeff, ok, witness=None, **extra) -> dict:
    out = {"name": name, "field": coeff.spec if coeff else None, "pass": bool(ok), "witness": witness}
    out.update(extra)
    return out


def _complexes(include_random: int, max_m: int, seed: int, full_simplex: bool = True):
    items = [(e.name, e.complex) for e in load_corpus()]
    items += list(random_corpus(include_random, max_m, seed))
    if not full_simplex:
        items = [(n, K) for n, K in items if not K.has_face_mask(K.full_mask)]
    return items


def _table_diff(a, b) -> list:
    keys = sorted(set(a.entries) | set(b.entries))
    return [{"i": -k[0], "j2": k[1], "hochster": str(a.entries.get(k)), "koszul": str(b.entries.get(k))}
            for k in keys if a.entries.get(k) != b.entries.get(k)]


def suite_hochster_vs_koszul(coeffs, random_count=0, max_m=8, seed=0, threads=None) -> list[dict]:
    from .hochster import betti_table_hochster
    from .koszul import betti_table_koszul

    out = []
    for name, K in _complexes(random_count, max_m, seed):
        for c in coeffs:
            h = betti_table_hochster(K, c, threads=threads)
            k = betti_table_koszul(K, c, threads=threads)
            out.append(_result(name, c, h == k, _table_diff(h, k) or None))
    return out


def poincare_check(K: SimplicialComplex, coeff: Coefficients = QQ) -> tuple[bool, dict]:
    """``b^k = b^{m+n-k}`` for the total Betti numbers of ``Z_K``."""
    from .hochster import betti_table_hochster

    b = betti_table_hochster(K, coeff).total_betti()
    top = K.m + K.dim + 1
    bad = {k: (b.get(k, 0), b.get(top - k, 0)) for k in range(top + 1) if b.get(k, 0) != b.get(top - k, 0)}
    return not bad, {"betti": {str(k): v for k, v in b.items()}, "top": top,
                     "mismatch": {str(k): v for k, v in bad.items()}}


def suite_poincare(coeffs, **_) -> list[dict]:
    out = []
    for e in load_corpus():
        if not e.sphere:
            continue
        for c in coeffs:
            ok, info = poincare_check(e.complex, c)
            out.append(_result(e.name, c, ok, info["mismatch"] or None, betti=info["betti"]))
    return out


def suite_alexander(coeffs, random_count=0, max_m=7, seed=0, threads=None) -> list[dict]:
    from .arrangements import alexander_duality_check, uk_homology_via_dual_links, uk_homology_via_subcomplexes

    out = []
    for name, K in _complexes(random_count, max_m, seed, full_simplex=False):
        for c in coeffs:
            ad = alexander_duality_check(K, c)
            a = uk_homology_via_subcomplexes(K, c, threads)
            b = uk_homology_via_dual_links(K, c, threads)
            same = a.same_groups(b)
            witness = ad.witness if not ad.ok else (None if same else {"subcomplex": a.to_dict()["homology"],
                                                                       "dual": b.to_dict()["homology"]})
            out.append(_result(name, c, ad.ok and same, witness))
    return out


def suite_reisner(coeffs, **_) -> list[dict]:
    from .facering import reisner_cm_test

    out = []
    for e in load_corpus():
        if not e.sphere:
            continue
        for c in coeffs:
            v = reisner_cm_test(e.complex, c)
            out.append(_result(e.name, c, v.ok, v.witness))
    return out


def suite_toral_rank(coeffs=None, random_count=0, max_m=8, seed=0, threads=None) -> list[dict]:
    from .arrangements import toral_rank_check

    out = []
    for name, K in _complexes(random_count, max_m, seed):
        r = toral_rank_check(K, threads)
        out.append(_result(name, QQ, r.holds, None if r.holds else r.to_dict(), margin=r.margin))
    return out


def suite_paper_goldens(coeffs=None, **_) -> list[dict]:
    return [check_golden(g) for g in load_goldens()]


SUITES = {
    "hochster-vs-koszul": suite_hochster_vs_koszul,
    "paper-goldens": suite_paper_goldens,
    "poincare-duality": suite_poincare,
    "alexander": suite_alexander,
    "reisner": suite_reisner,
    "toral-rank": suite_toral_rank,
}


def run_suite(name: str, coeffs=(QQ,), **options) -> dict:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    results = SUITES[name](list(coeffs), **options)
    return {
        "schema": 1,
        "suite": name,
        "fields": [c.spec for c in coeffs],
        "passed": all(r["pass"] for r in results),
        "count": len(results),
        "failures": sum(not r["pass"] for r in results),
        "results": results,
    }


# ---------------------------------------------------------------- goldens

def _complex_of(g: dict) -> SimplicialComplex:
    if "gen" in g:
        return generate(g["gen"])
    return {e.name: e.complex for e in load_corpus()}[g["corpus"]]


def _table_ranks(table) -> dict[str, int]:
    return {f"{k[0]},{k[1]}": v for k, v in table.ranks().items()}


def check_golden(g: dict) -> dict:
    """Evaluate one stored reference value; the result carries what was computed."""
    from .arrangements import toral_rank_check, uk_homology_via_subcomplexes
    from .facering import CharMatrix, lsop_check_field, lsop_check_integer, reisner_cm_test
    from .hochster import betti_table_hochster, golod_product_screen
    from .koszul import betti_table_koszul, format_element
    from .massey import demo_p3

    kind = g["kind"]
    coeff = Coefficients.parse(g.get("coeff", "q"))
    expected = g["expected"]
    if kind == "betti":
        K = _complex_of(g)
        got = [_table_ranks(betti_table_hochster(K, coeff)), _table_ranks(betti_table_koszul(K, coeff))]
        ok = all(x == expected for x in got)
        got = got[0]
    elif kind == "total-dimension":
        got = toral_rank_check(_complex_of(g)).lhs
        ok = got == expected
    elif kind == "degree-dimensions":
        got = {str(k): v for k, v in betti_table_hochster(_complex_of(g), coeff).total_betti().items() if k}
        ok = got == expected
    elif kind == "products-vanish":
        got = golod_product_screen(_complex_of(g), coeff).products_vanish
        ok = got == expected
    elif kind == "minimal-nonfaces":
        got = [list(t) for t in minimal_nonfaces(_complex_of(g))]
        ok = sorted(got) == sorted(expected)
    elif kind == "massey-demo":
        _, res = demo_p3(coeff)
        got = {"representative": format_element(res.representative), "e": format_element(res.e),
               "f": format_element(res.f), "trivial": res.trivial}
        ok = got == expected
    elif kind == "reisner":
        v = reisner_cm_test(_complex_of(g), coeff)
        got = {"verdict": "cohen_macaulay" if v.ok else "fail", "witness": v.witness}
        ok = got == expected
    elif kind == "lsop":
        K, L = _complex_of(g), CharMatrix.from_dict(g["matrix"])
        v = lsop_check_integer(K, L) if g.get("coeff", "z") == "z" else lsop_check_field(K, L, coeff)
        got = v.to_dict()
        ok = got == expected
    elif kind == "uk-homology":
        got = {str(p): r for p, r in uk_homology_via_subcomplexes(_complex_of(g), coeff).ranks.items()}
        ok = got == expected
    else:
        raise ValueError(f"unknown golden kind {kind!r}")
    return _result(g["id"], coeff, ok, None if ok else {"expected": expected, "got": got},
                   provenance=g["provenance"])


def expected_points_dimensions(m: int) -> dict[str, int]:
    """``dim H^{k+1}(Z_K) = (k-1) C(m, k)`` for ``m`` points."""
    return {str(k + 1): (k - 1) * comb(m, k) for k in range(2, m + 1)}
