"""Independent reference computations used to freeze expected values.

None of these share code paths with the package: Hom spaces are counted by
brute force over a small field, ranks come from sympy's GF(p) matrices, and
Ext^1 over hereditary algebras comes from the Euler form.
"""
import itertools
import math

import numpy as np
from sympy import GF
from sympy.polys.matrices import DomainMatrix


def sympy_rank(m, p):
    m = np.asarray(m, dtype=np.int64) % p
    if m.size == 0:
        return 0
    dm = DomainMatrix([[GF(p)(int(x)) for x in row] for row in m], m.shape, GF(p))
    return dm.rank()


def brute_hom_dim(M, N):
    """log_p of the number of tuples of vertex maps commuting with every arrow."""
    p = M.p
    shapes = [(N.dims[v], M.dims[v]) for v in range(len(M.dims))]
    sizes = [a * b for a, b in shapes]
    total = sum(sizes)
    assert p ** total <= 200_000, "too large for brute force"
    count = 0
    for entries in itertools.product(range(p), repeat=total):
        maps, pos = [], 0
        for (a, b), s in zip(shapes, sizes):
            maps.append(np.array(entries[pos:pos + s], dtype=np.int64).reshape(a, b))
            pos += s
        ok = True
        for k, (s, t) in enumerate(M.algebra.arrow_ends):
            lhs = N.maps[k] @ maps[s] % p
            rhs = maps[t] @ M.maps[k] % p
            if not np.array_equal(lhs, rhs):
                ok = False
                break
        count += ok
    d = round(math.log(count, p))
    assert p ** d == count
    return d


def euler_form(x, y, arrow_ends):
    """<x, y> = sum x_i y_i - sum over arrows x_s y_t."""
    return sum(a * b for a, b in zip(x, y)) - sum(x[s] * y[t] for s, t in arrow_ends)


def interval_dim_vectors(n):
    """Positive roots of A_n: indicator vectors of intervals."""
    out = set()
    for i in range(n):
        for j in range(i, n):
            out.add(tuple(1 if i <= k <= j else 0 for k in range(n)))
    return out
