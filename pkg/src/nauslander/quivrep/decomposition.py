"""Krull-Schmidt decomposition, isomorphism tests and enumeration of indecomposables.

Splitting follows the usual MeatAxe recipe: draw a random endomorphism,
factor its minimal polynomial and split the module along the primary
components.  Indecomposability is *certified* rather than assumed, by
exhibiting the radical of the endomorphism ring and checking that the
quotient is a field.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from .. import exactfield as ef
from .homological import ext1_data
from .module import (Module, ModuleMorphism, cokernel, compose, direct_sum, hom_space, identity,
                     kernel, row_morphism)

DEFAULT_RETRIES = 64
_EXHAUSTIVE_LIMIT = 4096


class Undecided(RuntimeError):
    """A randomized routine exhausted its retry budget."""


def _rng(rng):
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng or 0)


# -- endomorphism rings ----------------------------------------------------------

@dataclass
class EndomorphismRing:
    """``End(M)`` with structure constants in a basis whose first element is ``1_M``."""

    module: Module
    basis: List[ModuleMorphism]
    # mult[i, j] = coordinates of basis[i] ∘ basis[j]
    mult: np.ndarray
    space: object = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, f: ModuleMorphism) -> np.ndarray:
        return self.space.coordinates(f)

    def element(self, coeffs) -> ModuleMorphism:
        return self.space.element(coeffs)


def endomorphism_ring(M: Module) -> EndomorphismRing:
    p = M.p
    raw = hom_space(M, M)
    one = identity(M)
    # put the identity first, then complete to a basis
    basis = [one] if M.dim else []
    if M.dim:
        span = one.flat().reshape(-1, 1)
        for f in raw.basis:
            trial = np.hstack([span, f.flat().reshape(-1, 1)])
            if ef.rank(trial, p) > span.shape[1]:
                basis.append(f)
                span = trial
    from .module import HomSpace
    space = HomSpace(M, M, basis)
    d = len(basis)
    mult = np.zeros((d, d, d), dtype=np.int64)
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            mult[i, j] = space.coordinates(compose(a, b))
    return EndomorphismRing(M, basis, mult, space)


def _span_rows(vectors, d, p):
    if not len(vectors):
        return ef.zeros(0, d)
    red, r, _ = ef.rref(np.array(vectors, dtype=np.int64).reshape(-1, d), p)
    return red[:r]


def _ideal_products(ring: EndomorphismRing, J: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning ``E J + J E`` in coordinates."""
    vecs = []
    for x in J:
        for i in range(ring.dim):
            e = np.zeros(ring.dim, dtype=np.int64)
            e[i] = 1
            vecs.append(_multiply(ring, e, x, p))
            vecs.append(_multiply(ring, x, e, p))
    return _span_rows(vecs, ring.dim, p)


def _multiply(ring, x, y, p):
    return np.einsum("i,j,ijk->k", x, y, ring.mult) % p


def _is_nilpotent_subspace(ring, J, p) -> bool:
    power = J
    for _ in range(ring.dim + 1):
        if power.shape[0] == 0:
            return True
        prods = [_multiply(ring, x, y, p) for x in power for y in J]
        power = _span_rows(prods, ring.dim, p)
    return power.shape[0] == 0


def _contains(span_rows, vec, p) -> bool:
    if span_rows.shape[0] == 0:
        return not np.any(vec % p)
    return ef.rank(np.vstack([span_rows, vec]), p) == ef.rank(span_rows, p)


def _min_poly_in_ring(ring, x, p) -> List[int]:
    """Minimal polynomial of ``x`` (coordinates) in ``End(M)``, low degree first."""
    d = ring.dim
    one = np.zeros(d, dtype=np.int64)
    one[0] = 1
    powers = [one]
    while True:
        cur = _multiply(ring, powers[-1], x, p)
        A = np.column_stack(powers)
        sol = ef.solve_particular(A, cur.reshape(-1, 1), p)
        if sol is not None:
            return [int(-c) % p for c in sol[:, 0]] + [1]
        powers.append(cur)


def _factor(coeffs_low_first: Sequence[int], p: int):
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(coeffs_low_first)), x, modulus=p)
    _, facs = poly.factor_list()
    return [([int(c) % p for c in reversed(f.all_coeffs())], e) for f, e in facs]


@dataclass
class LocalityCertificate:
    """Evidence about whether ``End(M)`` is local.

    ``local`` is True/False when decided and None when undecided.
    ``radical`` holds coordinate rows spanning ``rad End(M)`` when local.
    """

    local: Optional[bool]
    radical: np.ndarray
    residue_degree: int
    method: str


def locality_certificate(ring: EndomorphismRing, rng=None) -> LocalityCertificate:
    p = ring.module.p
    d = ring.dim
    if d == 0:
        return LocalityCertificate(False, ef.zeros(0, 0), 0, "zero module")
    if d == 1:
        return LocalityCertificate(True, ef.zeros(0, 1), 1, "End = field")
    # split case: every basis element is a scalar plus a nilpotent
    rows = []
    split = True
    for i in range(d):
        e = np.zeros(d, dtype=np.int64)
        e[i] = 1
        facs = _factor(_min_poly_in_ring(ring, e, p), p)
        if len(facs) != 1 or len(facs[0][0]) != 2:
            if len(facs) > 1:
                return LocalityCertificate(False, ef.zeros(0, d), 0,
                                           f"basis element {i} has a reducible minimal polynomial")
            split = False
            break
        lam = (-facs[0][0][0]) % p
        v = e.copy()
        v[0] = (v[0] - lam) % p
        rows.append(v)
    if split:
        J = _span_rows(rows, d, p)
        if (J.shape[0] == d - 1 and _is_nilpotent_subspace(ring, J, p)
                and all(_contains(J, r, p) for r in _ideal_products(ring, J, p))):
            return LocalityCertificate(True, J, 1, "nilpotent ideal of codimension 1")
        return LocalityCertificate(False, ef.zeros(0, d), 0,
                                   "scalar-plus-nilpotent span is not a nilpotent ideal")
    if p <= d:
        return LocalityCertificate(None, ef.zeros(0, d), 0,
                                   "non-split residue field with p <= dim End; trace form unusable")
    # trace-form radical (exact when p > dim End)
    L = [ring.mult[i].T for i in range(d)]          # left multiplication by basis[i]
    gram = np.array([[int(np.trace(ef.matmul(L[i], L[j], p))) % p for j in range(d)]
                     for i in range(d)], dtype=np.int64)
    J = ef.kernel_basis(gram, p).T.copy()
    J = _span_rows(J, d, p)
    r = d - J.shape[0]
    if not _is_nilpotent_subspace(ring, J, p):
        return LocalityCertificate(None, ef.zeros(0, d), 0, "trace radical not nilpotent")
    # residue algebra is a field iff commutative and a random element generates it
    comp = ef.complement_basis(J, d, p).T
    quotient_rows = comp
    for a in quotient_rows:
        for b in quotient_rows:
            diff = (_multiply(ring, a, b, p) - _multiply(ring, b, a, p)) % p
            if not _contains(J, diff, p):
                return LocalityCertificate(False, ef.zeros(0, d), 0, "residue algebra not commutative")
    gen = _rng(rng)
    for _ in range(DEFAULT_RETRIES):
        x = (gen.integers(0, p, size=r) @ quotient_rows) % p
        # minimal polynomial in the quotient: stop when a power lies in span(lower) + J
        powers = [np.eye(1, d, 0, dtype=np.int64)[0]]
        while True:
            cur = _multiply(ring, powers[-1], x, p)
            A = np.vstack(powers + list(J)).T
            sol = ef.solve_particular(A, cur.reshape(-1, 1), p)
            if sol is not None:
                coeffs = [int(-c) % p for c in sol[:len(powers), 0]] + [1]
                break
            powers.append(cur)
        facs = _factor(coeffs, p)
        if len(facs) > 1:
            return LocalityCertificate(False, ef.zeros(0, d), 0, "residue algebra has idempotents")
        if len(coeffs) - 1 == r and facs[0][1] == 1:
            return LocalityCertificate(True, J, r, f"residue field of degree {r}")
    return LocalityCertificate(None, ef.zeros(0, d), 0, "no generator of the residue algebra found")


def is_indecomposable(M: Module, rng=None) -> Optional[bool]:
    if M.is_zero():
        return False
    return locality_certificate(endomorphism_ring(M), rng).local


# -- splitting -------------------------------------------------------------------

def _poly_at(coeffs_low_first, f: ModuleMorphism) -> ModuleMorphism:
    p = f.p
    maps = []
    for m in f.maps:
        acc = ef.zeros(*m.shape)
        for c in reversed(coeffs_low_first):
            acc = (ef.matmul(acc, m, p) + c * ef.eye(m.shape[0])) % p
        maps.append(acc)
    return ModuleMorphism(f.source, f.target, maps, check=False)


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def split_once(M: Module, rng, retries: int = DEFAULT_RETRIES):
    """Try to write ``M = K1 ⊕ K2`` with both nonzero; returns inclusions or None."""
    ring = endomorphism_ring(M)
    p = M.p
    if ring.dim <= 1:
        return None
    for _ in range(retries):
        coeffs = rng.integers(0, p, size=ring.dim)
        phi = ring.element(coeffs)
        facs = _factor(_min_poly_in_ring(ring, coeffs % p, p), p)
        if len(facs) < 2:
            continue
        g = [1]
        for _ in range(facs[0][1]):
            g = _poly_mul(g, facs[0][0], p)
        h = [1]
        for f, e in facs[1:]:
            for _ in range(e):
                h = _poly_mul(h, f, p)
        K1, i1 = kernel(_poly_at(g, phi))
        K2, i2 = kernel(_poly_at(h, phi))
        if K1.dim and K2.dim and K1.dim + K2.dim == M.dim:
            return (K1, i1), (K2, i2)
    return None


@dataclass
class Decomposition:
    """``M ≅ ⊕ summands`` with explicit inclusions whose sum is an isomorphism."""

    module: Module
    summands: List[Module]
    inclusions: List[ModuleMorphism]
    status: str                       # "complete" or "undecided"
    certificates: List[LocalityCertificate] = field(default_factory=list)
    groups: List[Tuple[Module, int]] = field(default_factory=list)

    def iso_certificate(self) -> ModuleMorphism:
        """The assembled map ``⊕ summands -> M``; an isomorphism when the split is right."""
        if not self.summands:
            from .module import zero_morphism
            return zero_morphism(self.module.algebra.zero_module(), self.module)
        return row_morphism(self.summands, self.module, self.inclusions)

    def projections(self) -> List[ModuleMorphism]:
        iso = self.iso_certificate()
        inv = iso.inverse()
        S, _, projs = direct_sum(self.summands)
        return [compose(pr, inv) for pr in projs]


def decompose(M: Module, rng=None, retries: int = DEFAULT_RETRIES) -> Decomposition:
    gen = _rng(rng)
    if M.is_zero():
        return Decomposition(M, [], [], "complete")
    stack = [(M, identity(M))]
    pieces, incs, certs = [], [], []
    status = "complete"
    while stack:
        N, inc = stack.pop()
        cert = locality_certificate(endomorphism_ring(N), gen)
        if cert.local:
            pieces.append(N)
            incs.append(inc)
            certs.append(cert)
            continue
        res = split_once(N, gen, retries)
        if res is None:
            status = "undecided"
            pieces.append(N)
            incs.append(inc)
            certs.append(cert)
            continue
        (K1, i1), (K2, i2) = res
        stack.append((K2, compose(inc, i2)))
        stack.append((K1, compose(inc, i1)))
    order = sorted(range(len(pieces)), key=lambda k: (pieces[k].dim, pieces[k].dims))
    dec = Decomposition(M, [pieces[k] for k in order], [incs[k] for k in order], status,
                        [certs[k] for k in order])
    if not dec.iso_certificate().is_iso():
        raise AssertionError("decomposition failed its isomorphism certificate")
    dec.groups = group_isomorphic(dec.summands, gen)
    return dec


# -- isomorphism -----------------------------------------------------------------

def find_isomorphism(M: Module, N: Module, rng=None,
                     retries: int = DEFAULT_RETRIES) -> Optional[ModuleMorphism]:
    """An isomorphism ``M -> N`` or None.

    Exhaustive over ``Hom(M, N)`` when it has at most 4096 elements,
    otherwise random combinations; a miss after ``retries`` draws has
    probability at most ``(dim M / p) ** retries``.
    """
    if M.dims != N.dims:
        return None
    if M.is_zero():
        from .module import zero_morphism
        return zero_morphism(M, N)
    hs = hom_space(M, N)
    if hs.dim == 0:
        return None
    p = M.p
    gen = _rng(rng)
    for f in hs.basis:
        if f.is_iso():
            return f
    if p ** hs.dim <= _EXHAUSTIVE_LIMIT:
        for coeffs in itertools.product(range(p), repeat=hs.dim):
            f = hs.element(coeffs)
            if f.is_iso():
                return f
        return None
    for _ in range(retries):
        f = hs.random_element(gen)
        if f.is_iso():
            return f
    return None


def is_isomorphic(M: Module, N: Module, rng=None) -> bool:
    return find_isomorphism(M, N, rng) is not None


def group_isomorphic(modules: Sequence[Module], rng=None) -> List[Tuple[Module, int]]:
    groups: List[List] = []
    for X in modules:
        for g in groups:
            if is_isomorphic(g[0], X, rng):
                g[1] += 1
                break
        else:
            groups.append([X, 1])
    return [(g[0], g[1]) for g in groups]


def index_of_isomorphic(X: Module, candidates: Sequence[Module], rng=None) -> Optional[int]:
    for i, Y in enumerate(candidates):
        if Y.dims == X.dims and is_isomorphic(X, Y, rng):
            return i
    return None


def standard_name(algebra, M: Module, rng=None) -> str:
    """``P<v>``/``I<v>`` for indecomposable projectives/injectives, else the dim vector."""
    for i in range(algebra.n_vertices):
        if is_isomorphic(M, algebra.projective(i), rng):
            return f"P{algebra.vertex_names[i]}"
    for i in range(algebra.n_vertices):
        if is_isomorphic(M, algebra.injective(i), rng):
            return f"I{algebra.vertex_names[i]}"
    return "M" + "".join(str(d) for d in M.dims)


# -- enumeration -----------------------------------------------------------------

@dataclass
class Enumeration:
    modules: List[Module]
    complete: bool
    exhaustive: bool
    dim_bound: int
    notes: List[str] = field(default_factory=list)


def _projective_points(e: int, p: int):
    """Representatives of lines in F_p^e (first nonzero coordinate 1)."""
    for lead in range(e):
        for tail in itertools.product(range(p), repeat=e - lead - 1):
            v = [0] * lead + [1] + list(tail)
            yield np.array(v, dtype=np.int64)


def _n_points(e: int, p: int) -> int:
    return (p ** e - 1) // (p - 1)


def _multisets(items: List[Tuple[int, int, int]], target: int):
    """Yield {index: multiplicity} with sum(mult*weight) == target; items=(index, weight, cap)."""
    def rec(pos, remaining, chosen):
        if remaining == 0:
            yield dict(chosen)
            return
        if pos == len(items):
            return
        idx, w, cap = items[pos]
        for m in range(min(cap, remaining // w), -1, -1):
            if m:
                chosen[idx] = m
            yield from rec(pos + 1, remaining - m * w, chosen)
            chosen.pop(idx, None)
    yield from rec(0, target, {})


def _independent(vectors, p) -> bool:
    return ef.rank(np.array(vectors), p) == len(vectors)


def _class_choices(data, m, p):
    """Linearly independent m-subsets of projective points of Ext^1."""
    pts = list(_projective_points(data.dim, p))
    for combo in itertools.combinations(range(len(pts)), m):
        vecs = [pts[i] for i in combo]
        if m == 1 or _independent(vecs, p):
            yield vecs


def _middle_term(parts, classes, S):
    """Middle term of the extension of ⊕ parts by S with the given cocycle classes."""
    p = S.p
    covers = [d.cover.projective for d in parts]
    syz = [d.syzygy for d in parts]
    cocycles = []
    for d, c in zip(parts, classes):
        g = d.classes[0].scaled(0)
        for coef, base in zip(c, d.classes):
            g = g + base.scaled(int(coef))
        cocycles.append(g.scaled(p - 1))
    # Ω -> P ⊕ S given by (ι ; -g)
    from .module import block_morphism
    blocks = []
    for t, P in enumerate(covers):
        blocks.append([parts[t].inclusion if s == t else None for s in range(len(parts))])
    blocks.append(cocycles)
    f = block_morphism(syz, covers + [S], blocks)
    E, _ = cokernel(f)
    return E


def enumerate_indecomposables(algebra, dim_bound: int, declared_max_dim: Optional[int] = None,
                              budget: int = 20000, rng=None) -> Enumeration:
    """All indecomposables of total dimension <= ``dim_bound`` up to isomorphism.

    Every indecomposable of dimension k >= 2 is a non-split extension of a
    module of dimension k-1 by a simple submodule; enumerating classes up to
    the scalar action on each summand is exhaustive, so the list is complete
    whenever no level exceeded ``budget`` candidates.  ``complete`` is only
    reported True when additionally ``dim_bound >= declared_max_dim``.
    """
    if dim_bound < 1:
        raise ValueError("dim_bound must be >= 1")
    gen = _rng(rng)
    p = algebra.p
    simples = algebra.simples()
    found: List[Module] = list(simples)
    exhaustive = True
    notes = []
    ext_cache: Dict[Tuple[int, int], object] = {}
    for k in range(2, dim_bound + 1):
        new: List[Module] = []
        for s, S in enumerate(simples):
            items = []
            for x, X in enumerate(found):
                if X.dim >= k:
                    continue
                key = (x, s)
                if key not in ext_cache:
                    ext_cache[key] = ext1_data(X, S)
                e = ext_cache[key].dim
                if e:
                    items.append((x, X.dim, e))
            for combo in _multisets(items, k - 1):
                keys = sorted(combo)
                per = [list(_class_choices(ext_cache[(x, s)], combo[x], p)) for x in keys]
                total = 1
                for c in per:
                    total *= len(c)
                if total > budget:
                    exhaustive = False
                    notes.append(f"dim {k}: {total} extension classes over simple "
                                 f"{algebra.vertex_names[s]}; sampled {budget}")
                    choices = (tuple(c[gen.integers(len(c))] for c in per) for _ in range(budget))
                else:
                    choices = itertools.product(*per)
                for choice in choices:
                    parts, classes = [], []
                    for x, vecs in zip(keys, choice):
                        for v in vecs:
                            parts.append(ext_cache[(x, s)])
                            classes.append(v)
                    E = _middle_term(parts, classes, S)
                    dec = decompose(E, gen)
                    if dec.status != "complete":
                        exhaustive = False
                        notes.append(f"undecided decomposition at dim {k}")
                    for Y in dec.summands:
                        pool = [Z for Z in found + new if Z.dims == Y.dims]
                        if index_of_isomorphic(Y, pool, gen) is None:
                            if Y.dim < k:
                                notes.append(f"late indecomposable of dim {Y.dim} found at level {k}")
                            new.append(Y)
        found.extend(new)
    found.sort(key=lambda M: (M.dim, tuple(-d for d in M.dims)))
    named = [M if M.name else M.renamed(standard_name(algebra, M, gen)) for M in found]
    complete = exhaustive and declared_max_dim is not None and dim_bound >= declared_max_dim
    return Enumeration(named, complete, exhaustive, dim_bound, notes)
