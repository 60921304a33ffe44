"""Approximations, n-rigidity, n-cluster tilting certificates and their search."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .quivrep import (Enumeration, Module, cokernel, enumerate_indecomposables, ext_dims,
                      factor_through, identity, index_of_isomorphic, kernel)
from .subcategory import (Approximation, SubcategoryError, SubcategorySpec, approximation_defect,
                          left_approximation, left_approximation_data, right_approximation,
                          right_approximation_data)

__all__ = [
    "Approximation", "right_approximation", "left_approximation", "right_approximation_data",
    "left_approximation_data", "approximation_defect", "RigidityReport", "n_rigidity_report",
    "ExtTable", "CTCertificate", "IncompleteEnumeration", "is_n_cluster_tilting",
    "maximality_witness", "search_cluster_tilting",
]


class IncompleteEnumeration(RuntimeError):
    pass


@dataclass
class RigidityReport:
    n: int
    table: Dict[Tuple[str, str, int], int]

    @property
    def rigid(self) -> bool:
        return not any(self.table.values())

    def nonzero(self) -> List[dict]:
        return [{"source": a, "target": b, "k": k, "dim": d}
                for (a, b, k), d in sorted(self.table.items()) if d]

    def to_dict(self) -> dict:
        return {"n": self.n, "rigid": self.rigid,
                "table": [{"source": a, "target": b, "k": k, "dim": d}
                          for (a, b, k), d in sorted(self.table.items())]}


def n_rigidity_report(M: SubcategorySpec, n: int) -> RigidityReport:
    """``dim Ext^k(M_i, M_j)`` for all ordered pairs and ``1 <= k <= n-1``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    table = {}
    if n >= 2:
        for a, X in zip(M.names, M.members):
            for b, Y in zip(M.names, M.members):
                dims = ext_dims(X, Y, n - 1)
                for k in range(1, n):
                    table[(a, b, k)] = dims[k]
    return RigidityReport(n, table)


class ExtTable:
    """Lazy ``Ext^{0..max_k}`` between ambient indecomposables, keyed by index."""

    def __init__(self, modules: Sequence[Module], max_k: int, compute=None):
        self.modules = list(modules)
        self.max_k = max_k
        self.compute = compute or ext_dims
        self._t: Dict[Tuple[int, int], List[int]] = {}

    def __call__(self, i: int, j: int) -> List[int]:
        hit = self._t.get((i, j))
        if hit is None:
            hit = list(self.compute(self.modules[i], self.modules[j], self.max_k))
            self._t[(i, j)] = hit
        return hit

    def vanishes(self, i: int, j: int, upto: int) -> bool:
        return not any(self(i, j)[1:upto + 1])


@dataclass
class CollapseStep:
    step: int
    mono: bool
    split: bool
    ext: List[int]

    def to_dict(self):
        return {"step": self.step, "mono": self.mono, "split": self.split, "ext": self.ext}


def maximality_witness(B: Module, M: SubcategorySpec, n: int, side: str = "right") -> dict:
    """Iterated approximation sequence used to show an orthogonal object lies in ``add M``.

    For ``side="right"`` (``Ext^{1..n-1}(M, B) = 0``) the sequence is
    ``0 -> B -> X^1 -> X^2 -> ...`` by minimal left approximations with
    ``C^{r+1} = coker``; each step records whether the approximation is a split
    monomorphism and the Ext dimensions of ``M`` into the current cokernel.
    ``side="left"`` is dual.  The object is in ``add M`` iff the first
    approximation splits.
    """
    steps = []
    C = B
    for r in range(1, max(n, 2)):
        if side == "right":
            a = left_approximation(C, M)
            split = factor_through(identity(C), a, "right") is not None
            ext = [sum(ext_dims(X, C, n)[k] for X in M.members) for k in range(1, n)]
            steps.append(CollapseStep(r, a.is_mono(), split, ext))
            C = cokernel(a)[0]
        else:
            a = right_approximation(C, M)
            split = factor_through(identity(C), a, "left") is not None
            ext = [sum(ext_dims(C, X, n)[k] for X in M.members) for k in range(1, n)]
            steps.append(CollapseStep(r, a.is_epi(), split, ext))
            C = kernel(a)[0]
        if C.is_zero():
            break
    return {"side": side, "steps": [s.to_dict() for s in steps],
            "in_subcategory": bool(steps and steps[0].split)}


@dataclass
class CTCertificate:
    subcategory: SubcategorySpec
    n: int
    rigidity: RigidityReport
    ambient: List[str]
    member_index: List[Optional[int]]            # ambient index of each member
    left_orthogonal: Dict[str, bool]
    right_orthogonal: Dict[str, bool]
    generating: Dict[str, bool]
    cogenerating: Dict[str, bool]
    approximations: Dict[str, dict]
    maximality: Dict[str, dict] = field(default_factory=dict)
    complete: bool = True
    failures: List[str] = field(default_factory=list)

    @property
    def is_ct(self) -> bool:
        return not self.failures

    @property
    def conditional(self) -> bool:
        return not self.complete

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "subcategory": self.subcategory.names,
            "is_cluster_tilting": self.is_ct,
            "conditional": self.conditional,
            "rigidity": self.rigidity.to_dict(),
            "left_orthogonal": self.left_orthogonal,
            "right_orthogonal": self.right_orthogonal,
            "generating": self.generating,
            "cogenerating": self.cogenerating,
            "approximations": self.approximations,
            "maximality": self.maximality,
            "failures": self.failures,
        }


def _ambient(ambient, algebra) -> Tuple[List[Module], bool]:
    if isinstance(ambient, Enumeration):
        return list(ambient.modules), ambient.complete
    if ambient is None:
        raise ValueError("ambient indecomposables are required")
    return list(ambient), True


def is_n_cluster_tilting(M: SubcategorySpec, n: int, ambient, ext_table: ExtTable = None,
                         with_maximality: bool = True) -> CTCertificate:
    """Certificate for ``M`` being n-cluster tilting in the module category.

    ``ambient`` is an :class:`Enumeration` (its completeness flag is
    inherited) or a list assumed to be all indecomposables.
    """
    mods, complete = _ambient(ambient, M.algebra)
    names = [X.name or f"X{i}" for i, X in enumerate(mods)]
    table = ext_table or ExtTable(mods, max(n - 1, 1))
    failures = []
    rig = n_rigidity_report(M, n)
    if not rig.rigid:
        failures.append(f"not {n}-rigid: {rig.nonzero()[0]}")
    member_index = [index_of_isomorphic(X, mods, M.rng) for X in M.members]
    for nm, k in zip(M.names, member_index):
        if k is None:
            failures.append(f"member {nm} is missing from the ambient list")
    members = {k for k in member_index if k is not None}
    left, right = {}, {}
    for b in range(len(mods)):
        if n >= 2 and None not in member_index:
            left[names[b]] = all(table.vanishes(b, k, n - 1) for k in member_index)
            right[names[b]] = all(table.vanishes(k, b, n - 1) for k in member_index)
        else:
            # for n = 1 both orthogonals are the whole category
            left[names[b]] = right[names[b]] = True
        if left[names[b]] != (b in members):
            failures.append(f"left orthogonal disagrees at {names[b]}"
                            f" (orthogonal={left[names[b]]}, member={b in members})")
        if right[names[b]] != (b in members):
            failures.append(f"right orthogonal disagrees at {names[b]}"
                            f" (orthogonal={right[names[b]]}, member={b in members})")
    gen, cogen, approx = {}, {}, {}
    for b, B in enumerate(mods):
        ra = right_approximation_data(B, M)
        la = left_approximation_data(B, M)
        rdef, ldef = approximation_defect(ra, M), approximation_defect(la, M)
        gen[names[b]] = ra.is_epi()
        cogen[names[b]] = la.is_mono()
        approx[names[b]] = {"right": [M.names[i] for i in ra.summands],
                            "left": [M.names[i] for i in la.summands],
                            "right_defect": [M.names[i] for i in rdef],
                            "left_defect": [M.names[i] for i in ldef]}
        if rdef or ldef:
            failures.append(f"approximation property fails at {names[b]}")
        if not gen[names[b]]:
            failures.append(f"right approximation of {names[b]} is not epi (not generating)")
        if not cogen[names[b]]:
            failures.append(f"left approximation of {names[b]} is not mono (not cogenerating)")
    maxi = {}
    if with_maximality and n >= 2:
        for b, B in enumerate(mods):
            if right[names[b]] and rig.rigid:
                w = maximality_witness(B, M, n, "right")
                maxi[names[b]] = w
                if w["in_subcategory"] != (b in members):
                    failures.append(f"maximality collapse disagrees at {names[b]}")
    return CTCertificate(M, n, rig, names, member_index, left, right, gen, cogen, approx,
                         maxi, complete, failures)


def search_cluster_tilting(algebra, n: int, ambient: Enumeration = None,
                           dim_bound: int = None, declared_max_dim: int = None,
                           rng=0, ext_table: ExtTable = None) -> List[SubcategorySpec]:
    """All n-cluster tilting subcategories among subsets of the ambient indecomposables.

    Subsets must contain every indecomposable projective and injective; they
    are visited by size, then lexicographically by ambient index.
    """
    if ambient is None:
        ambient = enumerate_indecomposables(algebra, dim_bound or 8, declared_max_dim)
    if not ambient.complete:
        raise IncompleteEnumeration(
            "ambient enumeration is not certified complete; declare a maximal indecomposable "
            "dimension no larger than the enumeration bound")
    mods = list(ambient.modules)
    rs = np.random.default_rng(rng)
    forced = set()
    for P in algebra.projectives() + algebra.injectives():
        if P.is_zero():
            continue
        k = index_of_isomorphic(P, mods, rs)
        if k is None:
            raise IncompleteEnumeration(f"{P.name} not found among the enumerated modules")
        forced.add(k)
    table = ext_table or ExtTable(mods, max(n - 1, 1))

    def rigid_pair(i, j):
        return n == 1 or (table.vanishes(i, j, n - 1) and table.vanishes(j, i, n - 1))

    free = [b for b in range(len(mods)) if b not in forced
            and rigid_pair(b, b) and all(rigid_pair(b, f) for f in forced)]
    base = sorted(forced)
    if not all(rigid_pair(i, j) for i in base for j in base):
        return []
    out = []
    for size in range(len(free) + 1):
        for extra in combinations(free, size):
            if not all(rigid_pair(i, j) for i, j in combinations(extra, 2)):
                continue
            S = set(base) | set(extra)
            ok = True
            for b in range(len(mods)):
                if b in S:
                    continue
                if n == 1 or all(table.vanishes(b, s, n - 1) for s in S) \
                        or all(table.vanishes(s, b, n - 1) for s in S):
                    ok = False
                    break
            if not ok:
                continue
            idx = sorted(S)
            try:
                spec = SubcategorySpec(algebra, [mods[i] for i in idx],
                                       name="+".join(mods[i].name for i in idx), rng=rng)
            except SubcategoryError:
                continue
            cert = is_n_cluster_tilting(spec, n, ambient, table)
            if cert.is_ct:
                out.append(spec)
    return out
