"""The n-abelian toolkit: weak cokernels, n-cokernels, cones, n-pushouts, axioms.

Complexes are written ``X^0 -> X^1 -> ... -> X^{n+1}``.  All exactness
questions are decided on Hom sequences against every member of the
subcategory, which suffices by additivity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .quivrep import (Complex, Module, ModuleMorphism, block_morphism, cokernel, column_morphism,
                      compose, direct_sum, hom_space, identity, is_identity, kernel,
                      rank_of_morphisms)
from .subcategory import (SubcategorySpec, left_approximation, right_approximation)

__all__ = [
    "SubcategorySpec", "NExactnessVerdict", "ConstructionStalled", "ChainMap", "AxiomReport",
    "weak_cokernel", "weak_kernel", "n_cokernel", "n_kernel", "mapping_cone", "n_pushout",
    "is_n_exact", "is_mono_in", "is_epi_in", "check_axioms", "is_contractible",
]


class ConstructionStalled(RuntimeError):
    """An n-(co)kernel or n-pushout could not be completed inside the subcategory."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


# -- Hom-exactness ---------------------------------------------------------------

def _contra_rank(d: ModuleMorphism, Y: Module) -> int:
    """Rank of ``Hom(d.target, Y) -> Hom(d.source, Y)``."""
    return rank_of_morphisms([compose(g, d) for g in hom_space(d.target, Y).basis], Y.p)


def _co_rank(d: ModuleMorphism, Y: Module) -> int:
    """Rank of ``Hom(Y, d.source) -> Hom(Y, d.target)``."""
    return rank_of_morphisms([compose(d, h) for h in hom_space(Y, d.source).basis], Y.p)


def contravariant_defects(c: Complex, Y: Module, positions) -> List[dict]:
    """Positions ``k`` where ``Hom(X^{k+1},Y) -> Hom(X^k,Y) -> Hom(X^{k-1},Y)`` is not exact."""
    out = []
    m = len(c.objects) - 1
    for k in positions:
        dim = hom_space(c.objects[k], Y).dim
        rk_out = _contra_rank(c.differentials[k - 1], Y) if k >= 1 else 0
        rk_in = _contra_rank(c.differentials[k], Y) if k < m else 0
        if dim - rk_out != rk_in:
            out.append({"position": k, "kernel": dim - rk_out, "image": rk_in})
    return out


def covariant_defects(c: Complex, Y: Module, positions) -> List[dict]:
    """Positions ``k`` where ``Hom(Y,X^{k-1}) -> Hom(Y,X^k) -> Hom(Y,X^{k+1})`` is not exact."""
    out = []
    m = len(c.objects) - 1
    for k in positions:
        dim = hom_space(Y, c.objects[k]).dim
        rk_out = _co_rank(c.differentials[k], Y) if k < m else 0
        rk_in = _co_rank(c.differentials[k - 1], Y) if k >= 1 else 0
        if dim - rk_out != rk_in:
            out.append({"position": k, "kernel": dim - rk_out, "image": rk_in})
    return out


@dataclass
class NExactnessVerdict:
    left: bool
    right: bool
    witnesses: List[dict] = field(default_factory=list)

    @property
    def both(self) -> bool:
        return self.left and self.right


def is_n_exact(c: Complex, M: SubcategorySpec, n: int) -> NExactnessVerdict:
    if len(c.objects) != n + 2:
        raise ValueError(f"an n-exact candidate for n={n} needs {n + 2} objects, got {len(c.objects)}")
    wit = []
    right = left = True
    for name, Y in zip(M.names, M.members):
        bad = contravariant_defects(c, Y, range(1, n + 2))
        if bad:
            right = False
            wit.extend({"side": "right", "test_object": name, **b} for b in bad)
        bad = covariant_defects(c, Y, range(0, n + 1))
        if bad:
            left = False
            wit.extend({"side": "left", "test_object": name, **b} for b in bad)
    return NExactnessVerdict(left, right, wit)


def is_contractible(c: Complex, M: SubcategorySpec) -> bool:
    """Every Hom sequence into and out of members is exact at every position."""
    pos = range(len(c.objects))
    return all(not contravariant_defects(c, Y, pos) and not covariant_defects(c, Y, pos)
               for Y in M.members)


def is_mono_in(f: ModuleMorphism, M: SubcategorySpec) -> bool:
    """Left-cancellable against maps from members: ``Hom(Y, f)`` injective for all Y."""
    return all(_co_rank(f, Y) == hom_space(Y, f.source).dim for Y in M.members)


def is_epi_in(f: ModuleMorphism, M: SubcategorySpec) -> bool:
    return all(_contra_rank(f, Y) == hom_space(f.target, Y).dim for Y in M.members)


# -- weak (co)kernels and n-(co)kernels -------------------------------------------

def weak_cokernel(f: ModuleMorphism, M: SubcategorySpec) -> ModuleMorphism:
    """Cokernel in the ambient category followed by its minimal left approximation."""
    C, q = cokernel(f)
    return compose(left_approximation(C, M), q)


def weak_kernel(f: ModuleMorphism, M: SubcategorySpec) -> ModuleMorphism:
    K, inc = kernel(f)
    return compose(inc, right_approximation(K, M))


def n_cokernel(f: ModuleMorphism, M: SubcategorySpec, n: int) -> Complex:
    """The right n-exact sequence ``X^0 -f-> X^1 -> ... -> X^{n+1}``.

    The n-cokernel proper is ``differentials[1:]``.  Raises
    :class:`ConstructionStalled` when the last map is not a cokernel in M.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    diffs = [f]
    for _ in range(n):
        diffs.append(weak_cokernel(diffs[-1], M))
    if not is_epi_in(diffs[-1], M):
        raise ConstructionStalled(
            f"step {n}: the weak cokernel of d^{n - 1} is not an epimorphism in the subcategory",
            step=n)
    c = Complex([f.source] + [d.target for d in diffs], diffs)
    bad = [d for Y in M.members for d in contravariant_defects(c, Y, range(1, n + 2))]
    if bad:
        raise ConstructionStalled(f"n-cokernel contract fails: {bad[0]}", step=bad[0]["position"])
    return c


def n_kernel(f: ModuleMorphism, M: SubcategorySpec, n: int) -> Complex:
    """The left n-exact sequence ``X^0 -> ... -> X^n -f-> X^{n+1}``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    diffs = [f]
    for _ in range(n):
        diffs.insert(0, weak_kernel(diffs[0], M))
    if not is_mono_in(diffs[0], M):
        raise ConstructionStalled(
            f"step {n}: the weak kernel of d^1 is not a monomorphism in the subcategory", step=0)
    c = Complex([diffs[0].source] + [d.target for d in diffs], diffs)
    bad = [d for Y in M.members for d in covariant_defects(c, Y, range(0, n + 1))]
    if bad:
        raise ConstructionStalled(f"n-kernel contract fails: {bad[0]}", step=bad[0]["position"])
    return c


# -- chain maps, cones and n-pushouts ---------------------------------------------

class ChainMap:
    def __init__(self, source: Complex, target: Complex, components: Sequence[ModuleMorphism]):
        if len(source.objects) != len(target.objects) or len(components) != len(source.objects):
            raise ValueError("chain map needs complexes of equal length and one component each")
        self.source, self.target = source, target
        self.components = tuple(components)

    def first_failing_square(self) -> Optional[int]:
        for k, dX in enumerate(self.source.differentials):
            lhs = compose(self.components[k + 1], dX)
            rhs = compose(self.target.differentials[k], self.components[k])
            if not lhs.equals(rhs):
                return k
        return None


def _neg(f: ModuleMorphism) -> ModuleMorphism:
    return f.scaled(f.p - 1)


def mapping_cone(f: ChainMap) -> Complex:
    """``X^0 -> X^1 ⊕ Y^0 -> ... -> X^m ⊕ Y^{m-1} -> Y^m``.

    ``d_C^k = [[-d_X^k, 0], [f^k, d_Y^{k-1}]]`` with the two boundary forms.
    """
    bad = f.first_failing_square()
    if bad is not None:
        raise ValueError(f"not a chain map: square {bad} does not commute")
    X, Y = f.source, f.target
    m = len(X.objects) - 1
    if m == 0:
        return Complex([X.objects[0], Y.objects[0]], [f.components[0]])
    objs = [X.objects[0]]
    sums = []
    for k in range(1, m + 1):
        S = direct_sum([X.objects[k], Y.objects[k - 1]])[0]
        sums.append(S)
        objs.append(S)
    objs.append(Y.objects[m])
    diffs = [column_morphism(X.objects[0], [X.objects[1], Y.objects[0]],
                             [_neg(X.differentials[0]), f.components[0]], target=sums[0])]
    for k in range(1, m):
        diffs.append(block_morphism(
            [X.objects[k], Y.objects[k - 1]], [X.objects[k + 1], Y.objects[k]],
            [[_neg(X.differentials[k]), None], [f.components[k], Y.differentials[k - 1]]],
            source=sums[k - 1], target=sums[k]))
    diffs.append(block_morphism(
        [X.objects[m], Y.objects[m - 1]], [Y.objects[m]],
        [[f.components[m], Y.differentials[m - 1]]], source=sums[m - 1], target=Y.objects[m]))
    return Complex(objs, diffs)


@dataclass
class NPushout:
    target: Complex
    chain_map: ChainMap
    cone: Complex
    cone_verdict: NExactnessVerdict
    mono_preserved: Optional[bool]      # None when d_X^0 is not a monomorphism


def n_pushout(X: Complex, f0: ModuleMorphism, M: SubcategorySpec, n: int) -> NPushout:
    """Complete ``f0 : X^0 -> Y^0`` to a chain map whose cone is right n-exact.

    Each ``Y^k`` is the weak cokernel of the partial cone differential, so the
    cone is built as an iterated weak cokernel of ``(-d_X^0; f0)``.
    """
    if len(X.objects) != n + 1:
        raise ValueError(f"n-pushout needs a complex with {n + 1} objects")
    if f0.source.dims != X.objects[0].dims:
        raise ValueError("f0 must start at X^0")
    if is_identity(f0) and f0.source is X.objects[0]:
        Y, comps = X, [identity(Z) for Z in X.objects]
    else:
        Y_objs, Y_diffs, comps = [f0.target], [], [f0]
        d_prev = column_morphism(X.objects[0], [X.objects[1], f0.target],
                                 [_neg(X.differentials[0]), f0])
        for k in range(1, n + 1):
            Ck_parts = [X.objects[k], Y_objs[k - 1]]
            Ck, incs, _ = direct_sum(Ck_parts)
            d_prev = _retarget(d_prev, Ck)
            w = weak_cokernel(d_prev, M)
            if k == n and not is_epi_in(w, M):
                raise ConstructionStalled(
                    f"n-pushout step {k}: last weak cokernel is not a cokernel", step=k)
            Yk = w.target
            fk = compose(w, incs[0])
            dY = compose(w, incs[1])
            Y_objs.append(Yk)
            Y_diffs.append(dY)
            comps.append(fk)
            if k < n:
                nxt = direct_sum([X.objects[k + 1], Yk])[0]
                d_prev = block_morphism(Ck_parts, [X.objects[k + 1], Yk],
                                        [[_neg(X.differentials[k]), None], [fk, dY]],
                                        source=Ck, target=nxt)
        Y = Complex(Y_objs, Y_diffs)
    chain = ChainMap(X, Y, comps)
    cone = mapping_cone(chain)
    verdict = is_n_exact(cone, M, n)
    mono = None
    if is_mono_in(X.differentials[0], M):
        mono = is_mono_in(Y.differentials[0], M)
    return NPushout(Y, chain, cone, verdict, mono)


def _retarget(f: ModuleMorphism, T: Module) -> ModuleMorphism:
    """Same matrices, target replaced by an equal-layout module."""
    if f.target is T:
        return f
    return ModuleMorphism(f.source, T, f.maps, check=False)


# -- axiom checker ------------------------------------------------------------------

@dataclass
class AxiomReport:
    n: int
    subcategory: List[str]
    verdicts: dict
    failures: List[dict]
    sampling: dict
    counts: dict
    sequences: list = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self) -> dict:
        return {"n": self.n, "subcategory": self.subcategory, "passed": self.passed,
                "verdicts": self.verdicts, "failures": self.failures,
                "sampling": self.sampling, "counts": self.counts}


def _test_morphisms(M: SubcategorySpec, rng, per_pair: int, sum_samples: int):
    """(label, morphism) pairs: Hom bases, random combinations, and maps between 2-term sums."""
    p = M.algebra.p
    out = []
    names = M.names
    for i, A in enumerate(M.members):
        for j, B in enumerate(M.members):
            hs = hom_space(A, B)
            for k, f in enumerate(hs.basis):
                out.append(({"source": [names[i]], "target": [names[j]], "basis": k}, f))
            if hs.dim >= 2:
                for s in range(per_pair):
                    c = rng.integers(0, p, size=hs.dim)
                    out.append(({"source": [names[i]], "target": [names[j]],
                                 "combination": [int(x) for x in c]}, hs.element(c)))
    t = len(M.members)
    if t:
        for s in range(sum_samples):
            src = sorted(int(x) for x in rng.integers(0, t, size=2))
            tgt = sorted(int(x) for x in rng.integers(0, t, size=2))
            blocks, coeffs = [], []
            for b in tgt:
                row = []
                for a in src:
                    hs = hom_space(M.members[a], M.members[b])
                    c = rng.integers(0, p, size=hs.dim)
                    coeffs.append([int(x) for x in c])
                    row.append(hs.element(c) if hs.dim else None)
                blocks.append(row)
            f = block_morphism([M.members[a] for a in src], [M.members[b] for b in tgt], blocks)
            out.append(({"source": [names[a] for a in src], "target": [names[b] for b in tgt],
                         "blocks": coeffs}, f))
    return out


def check_axioms(M: SubcategorySpec, n: int, seed: int = 0, per_pair: int = 50,
                 sum_samples: int = 20) -> AxiomReport:
    """Check (A0)-(A3) over a finite, seeded morphism test set.

    Object quantifiers reduce to members by additivity; morphism
    quantifiers are sampled, and the sample is recorded in the report.
    """
    rng = np.random.default_rng(seed)
    failures = []
    a0 = all(c.local for c in M.certificates)
    if not a0:
        failures.append({"axiom": "A0", "detail": "member without local endomorphism ring"})
    tests = _test_morphisms(M, rng, per_pair, sum_samples)
    ok = {"A1": True, "A2": True, "A3": True}
    counts = {"morphisms": len(tests), "monomorphisms": 0, "epimorphisms": 0}
    sequences = []
    for label, f in tests:
        try:
            cok = n_cokernel(f, M, n)
        except ConstructionStalled as exc:
            ok["A1"] = False
            failures.append({"axiom": "A1", "morphism": label, "detail": f"n-cokernel: {exc}"})
            cok = None
        try:
            ker = n_kernel(f, M, n)
        except ConstructionStalled as exc:
            ok["A1"] = False
            failures.append({"axiom": "A1", "morphism": label, "detail": f"n-kernel: {exc}"})
            ker = None
        if cok is not None:
            sequences.append(cok)
        if ker is not None:
            sequences.append(ker)
        if cok is not None and is_mono_in(f, M):
            counts["monomorphisms"] += 1
            v = is_n_exact(cok, M, n)
            if not v.both:
                ok["A2"] = False
                failures.append({"axiom": "A2", "morphism": label,
                                 "detail": "n-cokernel of a monomorphism is not n-exact",
                                 "witnesses": v.witnesses[:4]})
        if ker is not None and is_epi_in(f, M):
            counts["epimorphisms"] += 1
            v = is_n_exact(ker, M, n)
            if not v.both:
                ok["A3"] = False
                failures.append({"axiom": "A3", "morphism": label,
                                 "detail": "n-kernel of an epimorphism is not n-exact",
                                 "witnesses": v.witnesses[:4]})
    verdicts = {"A0": bool(a0), **ok}
    sampling = {"seed": seed, "per_pair_random": per_pair, "sum_samples": sum_samples,
                "policy": "all Hom-basis morphisms between members; random combinations for "
                          "pairs with dim Hom >= 2; random maps between two-term sums"}
    return AxiomReport(n, M.names, verdicts, failures, sampling, counts, sequences)
