"""Exact Tor-algebras of Stanley–Reisner face rings.

Two independent routes compute the bigraded Betti numbers: the Koszul-type
algebra R*(K) and full-subcomplex cohomology.  Products, triple Massey
products, Cohen–Macaulay and lsop certificates, Alexander duality and the
homology of coordinate arrangement complements are built on top.
"""
__version__ = "0.1.0"

from .complexes import (
    SimplicialComplex,
    SimplicialMap,
    boundary_simplex,
    cross_polytope,
    cut_cube_dual,
    dual_complex,
    full_subcomplex,
    generate,
    join,
    link,
    mgon,
    minimal_nonfaces,
    points,
    rp2,
    simplex,
    star,
    stellar_subdivision,
)
from .homology import GF, QQ, ZZ, Coefficients, HomologyGroup, reduced_cohomology, reduced_homology
from .koszul import BettiTable, KoszulElement, betti_table_koszul, cup_product, differential
from .hochster import MultigradedClass, baskakov_product, betti_table_hochster, gamma_iso, golod_product_screen
from .facering import CharMatrix, FaceRing, induced_hom, lsop_check_field, lsop_check_integer, reisner_cm_test
from .massey import MasseyProblem, MasseyResult, UndefinedMasseyProduct, build_ntmas_complex, triple_massey
from .arrangements import (
    alexander_duality_check,
    toral_rank_check,
    uk_homology_via_dual_links,
    uk_homology_via_subcomplexes,
)
from .corpus import random_complex, run_suite

__all__ = [
    "__version__",
    "SimplicialComplex",
    "SimplicialMap",
    "boundary_simplex",
    "cross_polytope",
    "cut_cube_dual",
    "dual_complex",
    "full_subcomplex",
    "generate",
    "join",
    "link",
    "mgon",
    "minimal_nonfaces",
    "points",
    "rp2",
    "simplex",
    "star",
    "stellar_subdivision",
    "GF",
    "QQ",
    "ZZ",
    "Coefficients",
    "HomologyGroup",
    "reduced_cohomology",
    "reduced_homology",
    "BettiTable",
    "KoszulElement",
    "betti_table_koszul",
    "cup_product",
    "differential",
    "MultigradedClass",
    "baskakov_product",
    "betti_table_hochster",
    "gamma_iso",
    "golod_product_screen",
    "CharMatrix",
    "FaceRing",
    "induced_hom",
    "lsop_check_field",
    "lsop_check_integer",
    "reisner_cm_test",
    "MasseyProblem",
    "MasseyResult",
    "UndefinedMasseyProduct",
    "build_ntmas_complex",
    "triple_massey",
    "alexander_duality_check",
    "toral_rank_check",
    "uk_homology_via_dual_links",
    "uk_homology_via_subcomplexes",
    "random_complex",
    "run_suite",
]
