"""Finite-dimensional modules as quiver representations, and their morphisms."""
from __future__ import annotations

import hashlib
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .. import exactfield as ef


class RelationViolation(ValueError):
    pass


class NotAMorphism(ValueError):
    pass


class Module:
    """A representation: a vector space per vertex and a matrix per arrow.

    ``maps[k]`` has shape ``(dims[target], dims[source])`` for arrow ``k``.
    Relations are checked eagerly; instances are treated as immutable.
    """

    def __init__(self, algebra, dims: Sequence[int], maps: Sequence, name: str = "",
                 check: bool = True):
        self.algebra = algebra
        self.dims: Tuple[int, ...] = tuple(int(d) for d in dims)
        if len(self.dims) != algebra.n_vertices:
            raise ValueError(f"expected {algebra.n_vertices} dimensions, got {len(self.dims)}")
        if any(d < 0 for d in self.dims):
            raise ValueError(f"negative dimension in {self.dims}")
        p = algebra.p
        if len(maps) != len(algebra.arrow_ends):
            raise ValueError(f"expected {len(algebra.arrow_ends)} arrow maps, got {len(maps)}")
        fixed = []
        for k, (s, t) in enumerate(algebra.arrow_ends):
            m = np.array(maps[k], dtype=np.int64).reshape(self.dims[t], self.dims[s]) % p \
                if np.size(maps[k]) == self.dims[t] * self.dims[s] else None
            if m is None:
                raise ValueError(
                    f"arrow {algebra.arrow_names[k]}: shape {np.shape(maps[k])} does not match "
                    f"{(self.dims[t], self.dims[s])}")
            fixed.append(ef.freeze(m))
        self.maps: Tuple[np.ndarray, ...] = tuple(fixed)
        self.name = name
        if check:
            bad = algebra.relation_violation(self.dims, self.maps)
            if bad is not None:
                raise RelationViolation(f"relation violated: {bad}")

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.dim == 0

    def arrow_map(self, name: str) -> np.ndarray:
        return self.maps[self.algebra.arrow_names.index(name)]

    def renamed(self, name: str) -> "Module":
        m = Module.__new__(Module)
        m.algebra, m.dims, m.maps, m.name = self.algebra, self.dims, self.maps, name
        return m

    @property
    def key(self) -> str:
        h = hashlib.sha256()
        h.update(self.algebra.key.encode())
        h.update(repr(self.dims).encode())
        for m in self.maps:
            h.update(m.tobytes())
        return h.hexdigest()[:24]

    def same_as(self, other: "Module") -> bool:
        return (self.algebra is other.algebra and self.dims == other.dims
                and all(np.array_equal(a, b) for a, b in zip(self.maps, other.maps)))

    def to_dict(self) -> dict:
        return {"dims": list(self.dims),
                "maps": {n: m.tolist() for n, m in zip(self.algebra.arrow_names, self.maps)}}

    def __repr__(self):
        label = self.name or "Module"
        return f"<{label} dims={list(self.dims)}>"


def make_module(algebra, dims, arrow_maps=None, name: str = "") -> Module:
    """Build a validated module from per-vertex dims and per-arrow matrices.

    ``dims`` may be a sequence or a dict keyed by vertex name; ``arrow_maps``
    a dict keyed by arrow name (missing arrows are zero) or a sequence.
    """
    if isinstance(dims, dict):
        dims = [int(dims.get(v, 0)) for v in algebra.vertex_names]
    arrow_maps = arrow_maps or {}
    if isinstance(arrow_maps, dict):
        maps = []
        for k, (s, t) in enumerate(algebra.arrow_ends):
            m = arrow_maps.get(algebra.arrow_names[k])
            maps.append(ef.zeros(dims[t], dims[s]) if m is None else m)
    else:
        maps = list(arrow_maps)
    return Module(algebra, dims, maps, name=name)


class ModuleMorphism:
    """A family of vertex maps ``f_v : M(v) -> N(v)`` commuting with all arrows."""

    def __init__(self, source: Module, target: Module, maps: Sequence, check: bool = True):
        if source.algebra is not target.algebra:
            raise NotAMorphism("source and target live over different algebras")
        self.source = source
        self.target = target
        p = source.p
        fixed = []
        for v in range(source.algebra.n_vertices):
            shape = (target.dims[v], source.dims[v])
            m = np.array(maps[v], dtype=np.int64)
            if m.size != shape[0] * shape[1]:
                raise NotAMorphism(f"vertex {v}: shape {m.shape} does not match {shape}")
            fixed.append(ef.freeze(m.reshape(shape) % p))
        self.maps: Tuple[np.ndarray, ...] = tuple(fixed)
        if check:
            bad = self.failing_arrow()
            if bad is not None:
                raise NotAMorphism(f"does not commute with arrow {bad}")

    @property
    def p(self) -> int:
        return self.source.p

    @property
    def algebra(self):
        return self.source.algebra

    def failing_arrow(self) -> Optional[str]:
        p = self.p
        for k, (s, t) in enumerate(self.algebra.arrow_ends):
            lhs = ef.matmul(self.maps[t], self.source.maps[k], p)
            rhs = ef.matmul(self.target.maps[k], self.maps[s], p)
            if not np.array_equal(lhs, rhs):
                return self.algebra.arrow_names[k]
        return None

    def flat(self) -> np.ndarray:
        parts = [m.ravel() for m in self.maps]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def __matmul__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        return compose(self, other)

    def __add__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        return ModuleMorphism(self.source, self.target,
                              [(a + b) % self.p for a, b in zip(self.maps, other.maps)], check=False)

    def __sub__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        return ModuleMorphism(self.source, self.target,
                              [(a - b) % self.p for a, b in zip(self.maps, other.maps)], check=False)

    def scaled(self, c: int) -> "ModuleMorphism":
        return ModuleMorphism(self.source, self.target, [(c * a) % self.p for a in self.maps],
                              check=False)

    def is_zero(self) -> bool:
        return not any(np.any(m) for m in self.maps)

    def ranks(self) -> List[int]:
        return [ef.rank(m, self.p) for m in self.maps]

    def is_mono(self) -> bool:
        return all(r == d for r, d in zip(self.ranks(), self.source.dims))

    def is_epi(self) -> bool:
        return all(r == d for r, d in zip(self.ranks(), self.target.dims))

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and self.is_mono()

    def inverse(self) -> "ModuleMorphism":
        inv = [ef.inverse(m, self.p) for m in self.maps]
        if any(m is None for m in inv):
            raise ValueError("morphism is not invertible")
        return ModuleMorphism(self.target, self.source, inv, check=False)

    def equals(self, other: "ModuleMorphism") -> bool:
        return all(np.array_equal(a, b) for a, b in zip(self.maps, other.maps))

    def __repr__(self):
        return f"<Morphism {self.source!r} -> {self.target!r}>"


def compose(g: ModuleMorphism, f: ModuleMorphism) -> ModuleMorphism:
    """``g ∘ f``."""
    if f.target.dims != g.source.dims:
        raise NotAMorphism(f"cannot compose {g!r} after {f!r}")
    p = f.p
    return ModuleMorphism(f.source, g.target,
                          [ef.matmul(b, a, p) for a, b in zip(f.maps, g.maps)], check=False)


def identity(M: Module) -> ModuleMorphism:
    return ModuleMorphism(M, M, [ef.eye(d) for d in M.dims], check=False)


def zero_morphism(M: Module, N: Module) -> ModuleMorphism:
    return ModuleMorphism(M, N, [ef.zeros(b, a) for a, b in zip(M.dims, N.dims)], check=False)


def is_identity(f: ModuleMorphism) -> bool:
    return (f.source.dims == f.target.dims
            and all(np.array_equal(m, ef.eye(m.shape[0])) for m in f.maps))


# -- Hom spaces ----------------------------------------------------------------

def intertwiner_system(M: Module, N: Module) -> np.ndarray:
    """Matrix whose kernel is ``Hom(M, N)`` in row-major stacked coordinates."""
    alg = M.algebra
    p = M.p
    offsets = [0]
    for v in range(alg.n_vertices):
        offsets.append(offsets[-1] + N.dims[v] * M.dims[v])
    blocks = []
    for k, (s, t) in enumerate(alg.arrow_ends):
        rows = N.dims[t] * M.dims[s]
        if rows == 0:
            continue
        row = ef.zeros(rows, offsets[-1])
        # f_t M_a - N_a f_s
        row[:, offsets[t]:offsets[t + 1]] = np.kron(ef.eye(N.dims[t]), M.maps[k].T)
        row[:, offsets[s]:offsets[s + 1]] = (row[:, offsets[s]:offsets[s + 1]]
                                             - np.kron(N.maps[k], ef.eye(M.dims[s]))) % p
        blocks.append(row)
    if not blocks:
        return ef.zeros(0, offsets[-1])
    return np.vstack(blocks) % p


def morphism_from_flat(M: Module, N: Module, vec: np.ndarray, check: bool = False) -> ModuleMorphism:
    maps, pos = [], 0
    for a, b in zip(M.dims, N.dims):
        maps.append(vec[pos:pos + a * b].reshape(b, a))
        pos += a * b
    return ModuleMorphism(M, N, maps, check=check)


class HomSpace:
    """A basis of ``Hom(M, N)`` with coordinate extraction."""

    def __init__(self, M: Module, N: Module, basis: Optional[List[ModuleMorphism]] = None):
        self.source, self.target = M, N
        p = M.p
        if basis is None:
            kb = ef.kernel_basis(intertwiner_system(M, N), p)
            basis = [morphism_from_flat(M, N, kb[:, j]) for j in range(kb.shape[1])]
        self.basis: List[ModuleMorphism] = basis
        size = sum(a * b for a, b in zip(M.dims, N.dims))
        self._matrix = (np.column_stack([f.flat() for f in basis]) if basis
                        else ef.zeros(size, 0))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def matrix(self) -> np.ndarray:
        """Columns are the flattened basis morphisms."""
        return self._matrix

    def coordinates(self, f: ModuleMorphism) -> np.ndarray:
        res = ef.solve(self._matrix, f.flat().reshape(-1, 1), f.p)
        if res is None:
            raise NotAMorphism("morphism is not in this Hom space")
        return res[0][:, 0]

    def element(self, coeffs) -> ModuleMorphism:
        vec = ef.matmul(self._matrix, np.array(coeffs, dtype=np.int64).reshape(-1, 1),
                        self.source.p)[:, 0]
        return morphism_from_flat(self.source, self.target, vec)

    def random_element(self, rng) -> ModuleMorphism:
        return self.element(rng.integers(0, self.source.p, size=self.dim))


_HOM_CACHE: Dict[Tuple[int, int], Tuple[Module, Module, HomSpace]] = {}


def hom_space(M: Module, N: Module) -> HomSpace:
    """Cached by object identity; safe because modules are immutable."""
    key = (id(M), id(N))
    hit = _HOM_CACHE.get(key)
    if hit is not None and hit[0] is M and hit[1] is N:
        return hit[2]
    hs = HomSpace(M, N)
    if len(_HOM_CACHE) > 20000:
        _HOM_CACHE.clear()
    _HOM_CACHE[key] = (M, N, hs)
    return hs


def hom_basis(M: Module, N: Module) -> List[ModuleMorphism]:
    return hom_space(M, N).basis


def hom_dim(M: Module, N: Module) -> int:
    return hom_space(M, N).dim


def rank_of_morphisms(morphisms: Sequence[ModuleMorphism], p: int) -> int:
    if not morphisms:
        return 0
    return ef.rank(np.column_stack([f.flat() for f in morphisms]), p)


# -- kernels, cokernels, images ------------------------------------------------

def _induced_maps(sub_bases, module, p):
    """Arrow maps of the submodule spanned (vertexwise) by ``sub_bases`` columns."""
    maps = []
    for k, (s, t) in enumerate(module.algebra.arrow_ends):
        img = ef.matmul(module.maps[k], sub_bases[s], p)
        sol = ef.solve_particular(sub_bases[t], img, p)
        if sol is None:
            raise ValueError("subspace is not a submodule")
        maps.append(sol)
    return maps


def submodule(N: Module, bases: Sequence[np.ndarray], name: str = ""):
    """Submodule with vertex bases given as column matrices; returns (S, inclusion)."""
    p = N.p
    dims = [b.shape[1] for b in bases]
    S = Module(N.algebra, dims, _induced_maps(bases, N, p), name=name, check=False)
    return S, ModuleMorphism(S, N, bases, check=False)


def quotient_module(N: Module, row_bases: Sequence[np.ndarray], name: str = ""):
    """Quotient by the map whose vertex matrices are ``row_bases`` (full row rank)."""
    p = N.p
    dims = [q.shape[0] for q in row_bases]
    maps = []
    for k, (s, t) in enumerate(N.algebra.arrow_ends):
        rhs = ef.matmul(row_bases[t], N.maps[k], p)
        sol = ef.solve_particular(row_bases[s].T, rhs.T, p)
        if sol is None:
            raise ValueError("not a quotient map")
        maps.append(sol.T)
    C = Module(N.algebra, dims, maps, name=name, check=False)
    return C, ModuleMorphism(N, C, row_bases, check=False)


def kernel(f: ModuleMorphism):
    """(K, inclusion K -> source)."""
    return submodule(f.source, [ef.kernel_basis(m, f.p) for m in f.maps])


def cokernel(f: ModuleMorphism):
    """(C, projection target -> C)."""
    return quotient_module(f.target, [ef.left_kernel_basis(m, f.p) for m in f.maps])


def image(f: ModuleMorphism):
    """(I, inclusion I -> target, corestriction source -> I)."""
    p = f.p
    I, inc = submodule(f.target, [ef.column_space_basis(m, p) for m in f.maps])
    core = [ef.solve_particular(b, m, p) for b, m in zip(inc.maps, f.maps)]
    return I, inc, ModuleMorphism(f.source, I, core, check=False)


def factor_through(g: ModuleMorphism, h: ModuleMorphism, side: str) -> Optional[ModuleMorphism]:
    """Solve for ``u`` with ``h ∘ u = g`` (side='left') or ``u ∘ h = g`` (side='right').

    Solved over ``Hom`` so the result is a genuine module morphism.
    """
    p = g.p
    if side == "left":
        hs = hom_space(g.source, h.source)
        cols = [compose(h, u).flat() for u in hs.basis]
    else:
        hs = hom_space(h.target, g.target)
        cols = [compose(u, h).flat() for u in hs.basis]
    if not cols:
        return zero_morphism(hs.source, hs.target) if g.is_zero() else None
    sol = ef.solve_particular(np.column_stack(cols), g.flat().reshape(-1, 1), p)
    if sol is None:
        return None
    return hs.element(sol[:, 0])


# -- direct sums -----------------------------------------------------------------

def direct_sum(modules: Sequence[Module], name: str = ""):
    """(S, inclusions, projections) for the ordered direct sum."""
    if not modules:
        raise ValueError("direct sum of an empty list needs an algebra; use algebra.zero_module()")
    alg = modules[0].algebra
    dims = [sum(M.dims[v] for M in modules) for v in range(alg.n_vertices)]
    maps = [ef.block_diag([M.maps[k] for M in modules]) for k in range(len(alg.arrow_ends))]
    S = Module(alg, dims, maps, name=name or "+".join(M.name or "?" for M in modules), check=False)
    incs, projs = [], []
    offs = [0] * alg.n_vertices
    for M in modules:
        inc, proj = [], []
        for v in range(alg.n_vertices):
            i = ef.zeros(dims[v], M.dims[v])
            i[offs[v]:offs[v] + M.dims[v], :] = ef.eye(M.dims[v])
            inc.append(i)
            proj.append(i.T.copy())
            offs[v] += M.dims[v]
        incs.append(ModuleMorphism(M, S, inc, check=False))
        projs.append(ModuleMorphism(S, M, proj, check=False))
    return S, incs, projs


def sum_of(algebra, modules: Sequence[Module], name: str = "") -> Module:
    return direct_sum(modules, name)[0] if modules else algebra.zero_module()


def block_morphism(source_parts: Sequence[Module], target_parts: Sequence[Module],
                   blocks, source: Optional[Module] = None,
                   target: Optional[Module] = None) -> ModuleMorphism:
    """Morphism ``⊕ source_parts -> ⊕ target_parts`` from ``blocks[t][s]`` (None = zero)."""
    alg = (source_parts or target_parts)[0].algebra if (source_parts or target_parts) else None
    S = source if source is not None else sum_of(alg, source_parts)
    T = target if target is not None else sum_of(alg, target_parts)
    maps = []
    for v in range(S.algebra.n_vertices):
        rows = []
        for ti, Tp in enumerate(target_parts):
            row = []
            for si, Sp in enumerate(source_parts):
                b = blocks[ti][si]
                row.append(ef.zeros(Tp.dims[v], Sp.dims[v]) if b is None else b.maps[v])
            rows.append(np.hstack(row) if row else ef.zeros(Tp.dims[v], 0))
        maps.append(np.vstack(rows) if rows else ef.zeros(0, S.dims[v]))
    return ModuleMorphism(S, T, maps, check=False)


def column_morphism(source: Module, target_parts, components, target=None) -> ModuleMorphism:
    """``source -> ⊕ target_parts`` with the given components."""
    return block_morphism([source], target_parts, [[c] for c in components],
                          source=source, target=target)


def row_morphism(source_parts, target: Module, components, source=None) -> ModuleMorphism:
    """``⊕ source_parts -> target`` with the given components."""
    return block_morphism(source_parts, [target], [list(components)],
                          source=source, target=target)


# -- complexes -------------------------------------------------------------------

class Complex:
    """``X^0 -> X^1 -> ... -> X^m`` with ``d^{k+1} ∘ d^k = 0`` checked on construction."""

    def __init__(self, objects: Sequence[Module], differentials: Sequence[ModuleMorphism],
                 check: bool = True):
        self.objects = tuple(objects)
        self.differentials = tuple(differentials)
        if len(self.differentials) != max(len(self.objects) - 1, 0):
            raise ValueError("a complex with m+1 objects needs m differentials")
        for k, d in enumerate(self.differentials):
            if d.source.dims != self.objects[k].dims or d.target.dims != self.objects[k + 1].dims:
                raise ValueError(f"differential {k} has wrong endpoints")
        if check:
            k = self.first_nonzero_square()
            if k is not None:
                raise ValueError(f"d^{k + 1} ∘ d^{k} != 0")

    def first_nonzero_square(self) -> Optional[int]:
        for k in range(len(self.differentials) - 1):
            if not compose(self.differentials[k + 1], self.differentials[k]).is_zero():
                return k
        return None

    def __len__(self):
        return len(self.objects)

    def homology_dims(self) -> List[Tuple[int, ...]]:
        """Vertexwise homology dimensions at every object (ends use zero maps)."""
        out = []
        p = self.objects[0].p if self.objects else 2
        for k, X in enumerate(self.objects):
            row = []
            for v in range(X.algebra.n_vertices):
                rk_out = ef.rank(self.differentials[k].maps[v], p) if k < len(self.differentials) else 0
                rk_in = ef.rank(self.differentials[k - 1].maps[v], p) if k > 0 else 0
                row.append(X.dims[v] - rk_out - rk_in)
            out.append(tuple(row))
        return out

    def is_exact_at(self, k: int) -> bool:
        return not any(self.homology_dims()[k])

    def __repr__(self):
        return "<Complex " + " -> ".join(repr(X) for X in self.objects) + ">"


def complex_from_maps(differentials: Sequence[ModuleMorphism]) -> Complex:
    objs = [differentials[0].source] + [d.target for d in differentials]
    return Complex(objs, differentials)
