"""Finite additive subcategories ``add(M_1 ⊕ ... ⊕ M_t)`` and their approximations."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from . import exactfield as ef
from .quivrep import (Module, ModuleMorphism, compose, decompose, direct_sum, endomorphism_ring,
                      hom_space, index_of_isomorphic, is_isomorphic, locality_certificate,
                      rank_of_morphisms, row_morphism, column_morphism, zero_morphism)


class SubcategoryError(ValueError):
    pass


class SubcategorySpec:
    """``add`` of a finite list of pairwise non-isomorphic indecomposables.

    Each member's endomorphism ring is certified local on construction, and
    a basis of its radical is kept for minimal approximations.
    """

    def __init__(self, algebra, indecomposables: Sequence[Module], name: str = "", rng=0):
        self.algebra = algebra
        self.members: List[Module] = list(indecomposables)
        self.name = name
        self.rng = np.random.default_rng(rng)
        self.certificates = []
        self._rad = []
        for i, M in enumerate(self.members):
            if M.algebra is not algebra:
                raise SubcategoryError(f"member {M.name or i} lives over another algebra")
            ring = endomorphism_ring(M)
            cert = locality_certificate(ring, self.rng)
            if cert.local is not True:
                raise SubcategoryError(
                    f"member {M.name or i} not certified indecomposable ({cert.method})")
            self.certificates.append(cert)
            self._rad.append([ring.element(row) for row in cert.radical])
        for i in range(len(self.members)):
            for j in range(i):
                if is_isomorphic(self.members[i], self.members[j], self.rng):
                    raise SubcategoryError(
                        f"members {self.members[j].name or j} and {self.members[i].name or i} "
                        "are isomorphic")

    def __len__(self):
        return len(self.members)

    @property
    def names(self) -> List[str]:
        return [M.name or f"M{i}" for i, M in enumerate(self.members)]

    def without(self, index: int) -> "SubcategorySpec":
        keep = [M for k, M in enumerate(self.members) if k != index]
        return SubcategorySpec(self.algebra, keep, name=f"{self.name}-{self.names[index]}")

    def radical_morphisms(self, i: int, j: int) -> List[ModuleMorphism]:
        """A spanning set of ``rad(M_i, M_j)``."""
        if i == j:
            return self._rad[i]
        return hom_space(self.members[i], self.members[j]).basis

    def index_of(self, X: Module) -> Optional[int]:
        return index_of_isomorphic(X, self.members, self.rng)

    def add_decomposition(self, X: Module) -> Optional[List[int]]:
        """Member indices (with repetition) of the summands of ``X``, or None if X ∉ add M."""
        if X.is_zero():
            return []
        dec = decompose(X, self.rng)
        out = []
        for Y in dec.summands:
            k = self.index_of(Y)
            if k is None:
                return None
            out.append(k)
        return sorted(out)

    def contains(self, X: Module) -> bool:
        return self.add_decomposition(X) is not None

    def object(self, indices: Sequence[int]) -> Module:
        if not indices:
            return self.algebra.zero_module()
        return direct_sum([self.members[i] for i in indices])[0]

    def describe(self) -> dict:
        return {"name": self.name, "members": [
            {"name": n, "dims": list(M.dims)} for n, M in zip(self.names, self.members)]}


@dataclass
class Approximation:
    """``X -> B`` (right) or ``B -> X`` (left) with ``X = ⊕ members[summands]``."""

    side: str
    obj: Module
    morphism: ModuleMorphism
    summands: List[int]
    minimal: bool

    def is_epi(self) -> bool:
        return self.morphism.is_epi()

    def is_mono(self) -> bool:
        return self.morphism.is_mono()


def _complement_choice(candidates, span_morphisms, p):
    """Indices of ``candidates`` independent modulo the span of ``span_morphisms``."""
    if not candidates:
        return []
    rows = [f.flat() for f in span_morphisms]
    width = candidates[0].flat().size
    base = np.array(rows, dtype=np.int64).reshape(-1, width)
    rk = ef.rank(base, p) if base.shape[0] else 0
    chosen = []
    for k, f in enumerate(candidates):
        trial = np.vstack([base, f.flat()]) if base.shape[0] else f.flat().reshape(1, -1)
        r2 = ef.rank(trial, p)
        if r2 > rk:
            chosen.append(k)
            base, rk = trial, r2
    return chosen


def right_approximation_data(B: Module, M: SubcategorySpec, minimal: bool = True) -> Approximation:
    """Right ``add M``-approximation ``X -> B`` from the evaluation map.

    With ``minimal`` the components are chosen independent modulo maps that
    factor through radical morphisms, which gives the right minimal version.
    """
    p = B.p
    parts, comps, summands = [], [], []
    for i, Mi in enumerate(M.members):
        basis = hom_space(Mi, B).basis
        if minimal:
            factored = [compose(g, r) for j, Mj in enumerate(M.members)
                        for g in hom_space(Mj, B).basis for r in M.radical_morphisms(i, j)]
            keep = _complement_choice(basis, factored, p)
            basis = [basis[k] for k in keep]
        for g in basis:
            parts.append(Mi)
            comps.append(g)
            summands.append(i)
    if not parts:
        Z = B.algebra.zero_module()
        return Approximation("right", Z, zero_morphism(Z, B), [], minimal)
    X = direct_sum(parts)[0]
    return Approximation("right", X, row_morphism(parts, B, comps, source=X), summands, minimal)


def left_approximation_data(B: Module, M: SubcategorySpec, minimal: bool = True) -> Approximation:
    """Left ``add M``-approximation ``B -> X``; dual of :func:`right_approximation_data`."""
    p = B.p
    parts, comps, summands = [], [], []
    for i, Mi in enumerate(M.members):
        basis = hom_space(B, Mi).basis
        if minimal:
            factored = [compose(r, g) for j, Mj in enumerate(M.members)
                        for g in hom_space(B, Mj).basis for r in M.radical_morphisms(j, i)]
            keep = _complement_choice(basis, factored, p)
            basis = [basis[k] for k in keep]
        for g in basis:
            parts.append(Mi)
            comps.append(g)
            summands.append(i)
    if not parts:
        Z = B.algebra.zero_module()
        return Approximation("left", Z, zero_morphism(B, Z), [], minimal)
    X = direct_sum(parts)[0]
    return Approximation("left", X, column_morphism(B, parts, comps, target=X), summands, minimal)


def right_approximation(B: Module, M: SubcategorySpec, minimal: bool = True) -> ModuleMorphism:
    """The morphism ``X -> B`` of :func:`right_approximation_data`."""
    return right_approximation_data(B, M, minimal).morphism


def left_approximation(B: Module, M: SubcategorySpec, minimal: bool = True) -> ModuleMorphism:
    return left_approximation_data(B, M, minimal).morphism


def approximation_defect(a: Approximation, M: SubcategorySpec) -> List[int]:
    """Members for which the approximation property fails (empty when it holds)."""
    p = a.morphism.p
    bad = []
    for i, Mi in enumerate(M.members):
        if a.side == "right":
            B = a.morphism.target
            got = rank_of_morphisms([compose(a.morphism, h) for h in hom_space(Mi, a.obj).basis], p)
            need = hom_space(Mi, B).dim
        else:
            B = a.morphism.source
            got = rank_of_morphisms([compose(h, a.morphism) for h in hom_space(a.obj, Mi).basis], p)
            need = hom_space(B, Mi).dim
        if got != need:
            bad.append(i)
    return bad
