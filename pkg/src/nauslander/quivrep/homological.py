"""Radicals, projective covers, minimal projective resolutions and Ext."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from .. import exactfield as ef
from .module import (Complex, Module, ModuleMorphism, compose, direct_sum, hom_space,
                     kernel, rank_of_morphisms, zero_morphism)


def radical_bases(M: Module) -> List[np.ndarray]:
    """Per-vertex column bases of ``rad M`` = sum of the images of all arrows."""
    p = M.p
    alg = M.algebra
    out = []
    for v in range(alg.n_vertices):
        into = [M.maps[k] for k in alg.arrows_into(v) if M.maps[k].size]
        if into:
            out.append(ef.column_space_basis(np.hstack(into), p))
        else:
            out.append(ef.zeros(M.dims[v], 0))
    return out


def top_dims(M: Module) -> Tuple[int, ...]:
    return tuple(M.dims[v] - b.shape[1] for v, b in enumerate(radical_bases(M)))


def top_generators(M: Module) -> List[Tuple[int, np.ndarray]]:
    """Vectors whose classes form a basis of ``top M``, as (vertex, vector)."""
    gens = []
    for v, rad in enumerate(radical_bases(M)):
        comp = ef.complement_basis(rad.T.copy(), M.dims[v], M.p)
        gens.extend((v, comp[:, j]) for j in range(comp.shape[1]))
    return gens


@dataclass
class ProjectiveCover:
    projective: Module
    epi: ModuleMorphism
    summands: List[int]          # vertex of each indecomposable summand, in order


def projective_cover(M: Module) -> ProjectiveCover:
    alg = M.algebra
    p = M.p
    gens = top_generators(M)
    summands = [v for v, _ in gens]
    if not gens:
        Z = alg.zero_module()
        return ProjectiveCover(Z, zero_morphism(Z, M), [])
    parts = [alg.projective(v) for v in summands]
    P = direct_sum(parts, name="+".join(x.name for x in parts))[0]
    actions = {v: alg.projective_action(v, M) for v in set(summands)}
    maps = []
    for w in range(alg.n_vertices):
        cols = []
        for v, x in gens:
            for act in actions[v][w]:
                cols.append(ef.matmul(act, x.reshape(-1, 1), p)[:, 0])
        maps.append(np.column_stack(cols) if cols else ef.zeros(M.dims[w], 0))
    return ProjectiveCover(P, ModuleMorphism(P, M, maps, check=False), summands)


@dataclass
class Resolution:
    """``... -> P_1 -> P_0 -> M -> 0``; ``differentials[k]`` is ``P_{k+1} -> P_k``."""

    module: Module
    terms: List[Module]
    summands: List[List[int]]
    differentials: List[ModuleMorphism]
    augmentation: ModuleMorphism
    complete: bool = False          # True when the resolution reached a zero term

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def projective_dimension(self):
        if not self.complete:
            return None
        nz = [k for k, P in enumerate(self.terms) if not P.is_zero()]
        return max(nz) if nz else -1

    def as_complex(self) -> Complex:
        """``P_len -> ... -> P_0`` in increasing cochain order."""
        objs = list(reversed(self.terms))
        diffs = list(reversed(self.differentials))
        return Complex(objs, diffs)

    def augmented_complex(self) -> Complex:
        objs = list(reversed(self.terms)) + [self.module]
        diffs = list(reversed(self.differentials)) + [self.augmentation]
        return Complex(objs, diffs)


_RES_CACHE: Dict[int, Tuple[Module, Resolution]] = {}


def projective_resolution(M: Module, length: int) -> Resolution:
    """Minimal projective resolution with terms ``P_0 .. P_length``."""
    if length < 0:
        raise ValueError("length must be >= 0")
    hit = _RES_CACHE.get(id(M))
    if hit is not None and hit[0] is M and (hit[1].length >= length or hit[1].complete):
        return _truncate(hit[1], length)
    cover = projective_cover(M)
    terms, summands, diffs = [cover.projective], [cover.summands], []
    aug = cover.epi
    current = aug
    complete = False
    while len(terms) <= length:
        K, inc = kernel(current)
        if K.is_zero():
            complete = True
            break
        c = projective_cover(K)
        d = compose(inc, c.epi)
        terms.append(c.projective)
        summands.append(c.summands)
        diffs.append(d)
        current = d
    res = Resolution(M, terms, summands, diffs, aug, complete)
    if not complete and len(terms) == length + 1:
        K, _ = kernel(current)
        res.complete = K.is_zero()
    if len(_RES_CACHE) > 5000:
        _RES_CACHE.clear()
    _RES_CACHE[id(M)] = (M, res)
    return _truncate(res, length)


def _truncate(res: Resolution, length: int) -> Resolution:
    terms = list(res.terms[:length + 1])
    summands = [list(s) for s in res.summands[:length + 1]]
    diffs = list(res.differentials[:length])
    alg = res.module.algebra
    while len(terms) < length + 1:
        Z = alg.zero_module()
        diffs.append(zero_morphism(Z, terms[-1]))
        terms.append(Z)
        summands.append([])
    complete = res.complete and len(res.terms) <= length + 1
    return Resolution(res.module, terms, summands, diffs, res.augmentation, complete)


def syzygy(M: Module):
    """(Ω M, inclusion Ω M -> P_0, cover) from the projective cover."""
    c = projective_cover(M)
    K, inc = kernel(c.epi)
    return K, inc, c


def _pullback_rank(N: Module, d: ModuleMorphism) -> int:
    """Rank of ``Hom(d.target, N) -> Hom(d.source, N)``, ``g |-> g ∘ d``."""
    hs = hom_space(d.target, N)
    return rank_of_morphisms([compose(g, d) for g in hs.basis], N.p)


def ext_dims(M: Module, N: Module, max_k: int) -> List[int]:
    """``[dim Ext^0(M,N), ..., dim Ext^max_k(M,N)]`` via a minimal resolution of ``M``."""
    res = projective_resolution(M, max_k + 1)
    out = []
    ranks = [_pullback_rank(N, d) for d in res.differentials]   # d_k: P_{k+1} -> P_k
    for k in range(max_k + 1):
        dim_hom = hom_space(res.terms[k], N).dim
        rk_out = ranks[k] if k < len(ranks) else 0
        rk_in = ranks[k - 1] if k >= 1 else 0
        out.append(dim_hom - rk_out - rk_in)
    return out


def ext_dim(M: Module, N: Module, k: int) -> int:
    if k < 0:
        raise ValueError("k must be >= 0")
    return ext_dims(M, N, k)[k]


@dataclass
class Ext1Data:
    """Ext^1(X, S) presented by cocycles ``Ω X -> S`` modulo coboundaries."""

    module: Module
    target: Module
    syzygy: Module
    inclusion: ModuleMorphism
    cover: object
    classes: List[ModuleMorphism] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.classes)


def ext1_data(X: Module, S: Module) -> Ext1Data:
    p = X.p
    K, inc, cover = syzygy(X)
    hs = hom_space(K, S)
    boundaries = [compose(g, inc) for g in hom_space(cover.projective, S).basis]
    reps = []
    if hs.dim:
        span = (np.vstack([b.flat() for b in boundaries]) if boundaries
                else ef.zeros(0, hs.matrix.shape[0]))
        rk = ef.rank(span, p) if span.shape[0] else 0
        for g in hs.basis:
            trial = np.vstack([span, g.flat()]) if span.shape[0] else g.flat().reshape(1, -1)
            r2 = ef.rank(trial, p)
            if r2 > rk:
                reps.append(g)
                span, rk = trial, r2
    return Ext1Data(X, S, K, inc, cover, reps)
