"""Compare the numba and pure-numpy paths of the integer kernels.

Inputs are boundary matrices of real complexes and face tables of random
facet families.  Results of both paths are checked for equality before timing.

    python benchmarks/bench_kernels.py --repeat 5
"""
import argparse
import random
import timeit

import numpy as np

from torfacet import _kernels as kern
from torfacet.complexes import cross_polytope, rp2, stellar_subdivision
from torfacet.homology import boundary_matrix, faces_by_dim


def boundary_inputs():
    out = []
    K = cross_polytope(5)
    by_dim = faces_by_dim(K.face_set)
    out.append(("cross5 d2", boundary_matrix(by_dim[1], by_dim[2])))
    out.append(("cross5 d3", boundary_matrix(by_dim[2], by_dim[3])))
    K = stellar_subdivision(stellar_subdivision(rp2(), [1, 2, 3]), [2, 3])
    by_dim = faces_by_dim(K.face_set)
    out.append(("rp2-subdiv d2", boundary_matrix(by_dim[1], by_dim[2])))
    return out


def face_inputs(seed):
    rng = random.Random(seed)
    out = []
    for m in (10, 13, 16):
        full = (1 << m) - 1
        facets = [rng.randrange(1, full) & rng.randrange(1, full) for _ in range(3 * m)]
        out.append((f"faces m={m}", (facets, m)))
    return out


def bench(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rows = []
    for name, M in boundary_inputs():
        M = np.ascontiguousarray(M, dtype=np.int64)
        for p in (2, 3):
            assert kern.rank_mod_p_numba(M, p) == kern.rank_mod_p_numpy(M, p)
            rows.append((f"{name} rank mod {p}", M.shape,
                         bench(kern.rank_mod_p_numba, (M, p), args.repeat),
                         bench(kern.rank_mod_p_numpy, (M, p), args.repeat)))
        d1, ok1 = kern.snf_diagonal_numba(M)
        d2, ok2 = kern.snf_diagonal_numpy(M)
        assert ok1 and ok2 and np.array_equal(d1, d2)
        rows.append((f"{name} snf", M.shape,
                     bench(kern.snf_diagonal_numba, (M,), args.repeat),
                     bench(kern.snf_diagonal_numpy, (M,), args.repeat)))
    for name, (facets, m) in face_inputs(args.seed):
        assert np.array_equal(kern.face_table_numba(facets, m), kern.face_table_numpy(facets, m))
        rows.append((name, (1 << m,), bench(kern.face_table_numba, (facets, m), args.repeat),
                     bench(kern.face_table_numpy, (facets, m), args.repeat)))

    print(f"{'kernel':34s} {'shape':>12s} {'numba ms':>10s} {'numpy ms':>10s} {'ratio':>7s}")
    for name, shape, tn, tp in rows:
        print(f"{name:34s} {str(shape):>12s} {tn * 1e3:10.3f} {tp * 1e3:10.3f} {tp / tn:7.1f}")


if __name__ == "__main__":
    main()
