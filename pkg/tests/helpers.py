"""Small algebras and module families shared by the test modules."""
import numpy as np

from nauslander.nabelian import n_cokernel, n_kernel
from nauslander.quivrep import (compose, direct_sum, enumerate_indecomposables, hom_space,
                                linear_quiver_algebra, path_algebra)
from nauslander.subcategory import SubcategorySpec


def a2(p=101):
    return linear_quiver_algebra(2, p=p)


def gamma5(p=101):
    """1 -> 2 -> 3 with the length-2 path zero."""
    return linear_quiver_algebra(3, [(1, 2)], p=p)


def a4_rad2(p=101):
    return linear_quiver_algebra(4, [(1, 2), (2, 2)], p=p)


def semisimple(k=2, p=101):
    return path_algebra([str(i) for i in range(1, k + 1)], [], p=p)


def indecs(alg, bound=4, declared=None):
    e = enumerate_indecomposables(alg, bound, declared if declared is not None else bound)
    assert e.complete
    return e.modules


def by_name(mods):
    return {X.name: X for X in mods}


def random_sums(mods, count, rng, max_terms=2):
    """Seeded direct sums of 1..max_terms indecomposables."""
    out = []
    for _ in range(count):
        k = int(rng.integers(1, max_terms + 1))
        parts = [mods[int(i)] for i in rng.integers(0, len(mods), size=k)]
        out.append(parts[0] if k == 1 else direct_sum(parts)[0])
    return out


def random_morphisms(mods, count, seed=0, max_terms=2, nonzero=False):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        X, Y = random_sums(mods, 2, rng, max_terms)
        f = hom_space(X, Y).random_element(rng)
        if nonzero and f.is_zero():
            continue
        out.append(f)
    return out


def subcategory(alg, names, bound=4, declared=None):
    mods = by_name(indecs(alg, bound, declared))
    return SubcategorySpec(alg, [mods[n] for n in names], name="+".join(names))


def whole_category(alg, bound=4, declared=None):
    return SubcategorySpec(alg, indecs(alg, bound, declared), name="all")


def ct_gamma5():
    return subcategory(gamma5(), ["S1", "S3", "P1", "P2"])


def ct_a4_rad2():
    return subcategory(a4_rad2(), ["S1", "S4", "P1", "P2", "P3"])


def random_add_morphisms(M, count, seed=0):
    """Random maps between two-term sums of members."""
    return random_morphisms(M.members, count, seed=seed)


def d_squared_zero(c):
    return all(compose(c.differentials[k + 1], c.differentials[k]).is_zero()
               for k in range(len(c.differentials) - 1))


def random_complexes(count, seed=0):
    """n-cokernel and n-kernel sequences of random maps in three subcategories."""
    out = []
    cases = [(whole_category(gamma5()), 1), (ct_gamma5(), 2), (ct_a4_rad2(), 3)]
    per = -(-count // (2 * len(cases)))
    for M, n in cases:
        for f in random_add_morphisms(M, per, seed=seed):
            out.append((M, n, n_cokernel(f, M, n)))
            out.append((M, n, n_kernel(f, M, n)))
    return out[:count]
