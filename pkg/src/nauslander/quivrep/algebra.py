"""Quivers, admissible relations and basic algebras ``kQ/I``.

Paths are written as sequences of arrow names in the order they are
traversed: ``("a", "b")`` means *first* ``a`` then ``b``, so on a
representation it acts as ``M_b @ M_a``.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .. import exactfield as ef
from ..exactfield import PrimeField


class QuiverError(ValueError):
    pass


class InadmissibleRelation(QuiverError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


class Quiver:
    def __init__(self, vertices: Sequence[str], arrows: Sequence = ()):
        self.vertices: Tuple[str, ...] = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError(f"duplicate vertex names in {self.vertices}")
        arrs = []
        for a in arrows:
            a = a if isinstance(a, Arrow) else Arrow(*map(str, a))
            if a.source not in self.vertices or a.target not in self.vertices:
                raise QuiverError(f"arrow {a.name} has undeclared endpoint")
            arrs.append(a)
        self.arrows: Tuple[Arrow, ...] = tuple(arrs)
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise QuiverError(f"duplicate arrow names in {names}")
        if set(names) & set(self.vertices):
            raise QuiverError("arrow and vertex names must be distinct")
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        self._aindex = {a.name: i for i, a in enumerate(self.arrows)}

    def vertex_index(self, v) -> int:
        return self._vindex[str(v)]

    def arrow_index(self, name) -> int:
        return self._aindex[str(name)]

    def arrow(self, name) -> Arrow:
        return self.arrows[self.arrow_index(name)]

    def path_ends(self, path: Sequence[str]) -> Tuple[str, str]:
        """(source, target) of a non-empty path; raises if not composable."""
        arrs = [self.arrow(a) for a in path]
        for x, y in zip(arrs, arrs[1:]):
            if x.target != y.source:
                raise QuiverError(f"path {list(path)} is not composable at {x.name}->{y.name}")
        return arrs[0].source, arrs[-1].target

    def is_acyclic(self) -> bool:
        return self.longest_path_length() is not None

    def longest_path_length(self) -> Optional[int]:
        """Length of the longest path, or ``None`` when there is a cycle."""
        out = {v: [] for v in self.vertices}
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            out[a.source].append(a.target)
            indeg[a.target] += 1
        order, stack = [], [v for v in self.vertices if indeg[v] == 0]
        while stack:
            v = stack.pop()
            order.append(v)
            for w in out[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    stack.append(w)
        if len(order) != len(self.vertices):
            return None
        longest = {v: 0 for v in self.vertices}
        for v in reversed(order):
            for w in out[v]:
                longest[v] = max(longest[v], longest[w] + 1)
        return max(longest.values(), default=0)

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"name": a.name, "source": a.source, "target": a.target}
                       for a in self.arrows],
        }


@dataclass(frozen=True)
class Relation:
    """A linear combination of parallel paths, each of length >= 2."""

    terms: Tuple[Tuple[int, Tuple[str, ...]], ...]
    name: str = ""

    @classmethod
    def from_terms(cls, terms, name: str = "") -> "Relation":
        return cls(tuple((int(c), tuple(str(a) for a in path)) for c, path in terms), name)

    def label(self) -> str:
        if self.name:
            return self.name
        return " + ".join(f"{c}*{'.'.join(path)}" for c, path in self.terms)


class RelationSet:
    def __init__(self, relations: Sequence = ()):
        self.relations: Tuple[Relation, ...] = tuple(
            r if isinstance(r, Relation) else Relation.from_terms(r) for r in relations)

    def __iter__(self):
        return iter(self.relations)

    def __len__(self):
        return len(self.relations)

    def validate(self, quiver: Quiver) -> None:
        for r in self.relations:
            if not r.terms:
                raise InadmissibleRelation(f"relation {r.label()!r} is empty")
            ends = set()
            for c, path in r.terms:
                if len(path) < 2:
                    raise InadmissibleRelation(
                        f"relation {r.label()!r}: path {'.'.join(path)} has length < 2")
                try:
                    ends.add(quiver.path_ends(path))
                except KeyError as exc:
                    raise InadmissibleRelation(
                        f"relation {r.label()!r}: unknown arrow {exc.args[0]}") from None
                except QuiverError as exc:
                    raise InadmissibleRelation(f"relation {r.label()!r}: {exc}") from None
            if len(ends) != 1:
                raise InadmissibleRelation(
                    f"relation {r.label()!r}: paths are not parallel {sorted(ends)}")

    def to_list(self) -> list:
        return [[[c, list(path)] for c, path in r.terms] for r in self.relations]


class BasicAlgebra:
    """Interface shared by ``kQ/I`` and endomorphism algebras.

    A basic algebra here is presented by vertices (primitive idempotents) and
    arrows spanning the radical modulo its square, together with a way to
    build indecomposable projectives and to check relations on a candidate
    representation.  Subclasses provide ``field``, ``vertex_names``,
    ``arrow_names``, ``arrow_ends`` and the abstract methods below.
    """

    field: PrimeField
    vertex_names: Tuple[str, ...]
    arrow_names: Tuple[str, ...]
    arrow_ends: Tuple[Tuple[int, int], ...]

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_names)

    def arrows_into(self, v: int) -> List[int]:
        return [k for k, (s, t) in enumerate(self.arrow_ends) if t == v]

    def arrows_out_of(self, v: int) -> List[int]:
        return [k for k, (s, t) in enumerate(self.arrow_ends) if s == v]

    def projective(self, i: int):
        raise NotImplementedError

    def injective(self, i: int):
        raise NotImplementedError

    def projective_action(self, i: int, module) -> List[List[np.ndarray]]:
        """For each vertex ``v``: matrices ``M(i) -> M(v)`` of the basis of ``e_v A e_i``.

        The order matches the basis of ``projective(i)`` at ``v``, so a
        vector ``x`` in ``M(i)`` defines ``projective(i) -> M`` by sending
        the generator to ``x``.
        """
        raise NotImplementedError

    def relation_violation(self, dims, maps) -> Optional[str]:
        raise NotImplementedError

    @cached_property
    def key(self) -> str:
        return hashlib.sha256(json.dumps(self.describe(), sort_keys=True).encode()).hexdigest()[:16]

    def describe(self) -> dict:
        raise NotImplementedError

    def simple(self, i: int):
        from .module import Module
        dims = [0] * self.n_vertices
        dims[i] = 1
        return Module(self, dims, [ef.zeros(dims[t], dims[s]) for s, t in self.arrow_ends],
                      name=f"S{self.vertex_names[i]}")

    def simples(self):
        return [self.simple(i) for i in range(self.n_vertices)]

    def projectives(self):
        return [self.projective(i) for i in range(self.n_vertices)]

    def injectives(self):
        return [self.injective(i) for i in range(self.n_vertices)]

    def zero_module(self):
        from .module import Module
        return Module(self, [0] * self.n_vertices,
                      [ef.zeros(0, 0) for _ in self.arrow_ends], name="0")


class QuiverAlgebra(BasicAlgebra):
    """The bound path algebra ``kQ/I`` over F_p.

    ``nilpotency`` declares that every path of that length lies in the ideal;
    it is required for quivers with oriented cycles and derived otherwise.
    """

    def __init__(self, quiver: Quiver, relations=(), p: int = ef.DEFAULT_PRIME,
                 nilpotency: Optional[int] = None):
        self.quiver = quiver
        self.relations = relations if isinstance(relations, RelationSet) else RelationSet(relations)
        self.relations.validate(quiver)
        self.field = PrimeField(p)
        longest = quiver.longest_path_length()
        if longest is None:
            if nilpotency is None:
                raise QuiverError("quiver has oriented cycles: declare a nilpotency bound")
            self.max_length = int(nilpotency)
            self.declared_nilpotency = True
        else:
            self.max_length = longest + 1 if nilpotency is None else min(int(nilpotency), longest + 1)
            self.declared_nilpotency = nilpotency is not None and nilpotency <= longest
        self.vertex_names = quiver.vertices
        self.arrow_names = tuple(a.name for a in quiver.arrows)
        self.arrow_ends = tuple((quiver.vertex_index(a.source), quiver.vertex_index(a.target))
                                for a in quiver.arrows)
        self._build_path_spaces()
        self._proj_cache: Dict[int, object] = {}
        self._inj_cache: Dict[int, object] = {}

    def describe(self) -> dict:
        return {"kind": "quiver", "p": self.p, "quiver": self.quiver.to_dict(),
                "relations": self.relations.to_list(), "max_length": self.max_length}

    # -- path spaces ---------------------------------------------------
    def _build_path_spaces(self):
        n = self.n_vertices
        L = self.max_length
        paths = {(u, v): [] for u in range(n) for v in range(n)}
        for u in range(n):
            frontier = [((), u)]
            paths[(u, u)].append(())
            for _ in range(1, L):
                nxt = []
                for path, end in frontier:
                    for k in self.arrows_out_of(end):
                        q = path + (self.arrow_names[k],)
                        t = self.arrow_ends[k][1]
                        paths[(u, t)].append(q)
                        nxt.append((q, t))
                frontier = nxt
        self._paths = paths
        self._path_index = {key: {q: j for j, q in enumerate(lst)} for key, lst in paths.items()}
        rels = []
        for r in self.relations:
            s, t = self.quiver.path_ends(r.terms[0][1])
            rels.append((self.quiver.vertex_index(s), self.quiver.vertex_index(t), r))
        p = self.p
        self._standard = {}
        self._reduce = {}
        for (u, v), lst in paths.items():
            # long paths first so rref eliminates them in favour of short ones
            order = sorted(range(len(lst)), key=lambda j: (-len(lst[j]), lst[j]))
            pos = {j: c for c, j in enumerate(order)}
            rows = []
            for s, t, r in rels:
                for pre in paths[(u, s)]:
                    for post in paths[(t, v)]:
                        vec = np.zeros(len(lst), dtype=np.int64)
                        for c, body in r.terms:
                            q = pre + body + post
                            if len(q) < L:
                                vec[pos[self._path_index[(u, v)][q]]] += c
                        if np.any(vec % p):
                            rows.append(vec % p)
            if rows:
                red, rk, pivots = ef.rref(np.array(rows), p)
                red = red[:rk]
            else:
                red, pivots = ef.zeros(0, len(lst)), []
            piv_set = set(pivots)
            free_cols = [c for c in range(len(lst)) if c not in piv_set]
            std = sorted((order[c] for c in free_cols), key=lambda j: (len(lst[j]), lst[j]))
            std_pos = {j: k for k, j in enumerate(std)}
            reduce = ef.zeros(len(std), len(lst))
            for c in range(len(lst)):
                j = order[c]
                if c in piv_set:
                    row = red[pivots.index(c)]
                    for c2 in free_cols:
                        if row[c2]:
                            reduce[std_pos[order[c2]], j] = (-row[c2]) % p
                else:
                    reduce[std_pos[j], j] = 1
            self._standard[(u, v)] = [lst[j] for j in std]
            self._reduce[(u, v)] = reduce

    def standard_paths(self, u: int, v: int) -> List[Tuple[str, ...]]:
        """Basis of ``e_v A e_u``: paths from ``u`` to ``v`` surviving the relations."""
        return self._standard[(u, v)]

    def reduce_path(self, u: int, v: int, path: Tuple[str, ...]) -> np.ndarray:
        """Coordinates of a path (from ``u`` to ``v``) in the standard basis."""
        if len(path) >= self.max_length:
            return np.zeros(len(self._standard[(u, v)]), dtype=np.int64)
        return self._reduce[(u, v)][:, self._path_index[(u, v)][path]].copy()

    def dimension(self) -> int:
        return sum(len(s) for s in self._standard.values())

    # -- modules -------------------------------------------------------
    def projective(self, i: int):
        from .module import Module
        if i not in self._proj_cache:
            dims = [len(self._standard[(i, v)]) for v in range(self.n_vertices)]
            maps = []
            for k, (s, t) in enumerate(self.arrow_ends):
                mat = ef.zeros(dims[t], dims[s])
                for col, q in enumerate(self._standard[(i, s)]):
                    mat[:, col] = self.reduce_path(i, t, q + (self.arrow_names[k],))
                maps.append(mat)
            self._proj_cache[i] = Module(self, dims, maps, name=f"P{self.vertex_names[i]}")
        return self._proj_cache[i]

    def injective(self, i: int):
        from .module import Module
        if i not in self._inj_cache:
            dims = [len(self._standard[(w, i)]) for w in range(self.n_vertices)]
            maps = []
            for k, (s, t) in enumerate(self.arrow_ends):
                # right multiplication e_i A e_t -> e_i A e_s, q |-> a then q
                right = ef.zeros(dims[s], dims[t])
                for col, q in enumerate(self._standard[(t, i)]):
                    right[:, col] = self.reduce_path(s, i, (self.arrow_names[k],) + q)
                maps.append(right.T.copy())
            self._inj_cache[i] = Module(self, dims, maps, name=f"I{self.vertex_names[i]}")
        return self._inj_cache[i]

    def path_matrix(self, module, path: Tuple[str, ...], start: int) -> np.ndarray:
        out = ef.eye(module.dims[start])
        for a in path:
            out = ef.matmul(module.maps[self.quiver.arrow_index(a)], out, self.p)
        return out

    def projective_action(self, i: int, module) -> List[List[np.ndarray]]:
        return [[self.path_matrix(module, q, i) for q in self._standard[(i, v)]]
                for v in range(self.n_vertices)]

    def relation_violation(self, dims, maps) -> Optional[str]:
        p = self.p
        idx = self.quiver.arrow_index
        for r in self.relations:
            s, t = self.quiver.path_ends(r.terms[0][1])
            si, ti = self.quiver.vertex_index(s), self.quiver.vertex_index(t)
            total = ef.zeros(dims[ti], dims[si])
            for c, path in r.terms:
                m = ef.eye(dims[si])
                for a in path:
                    m = ef.matmul(maps[idx(a)], m, p)
                total = (total + c * m) % p
            if np.any(total):
                return r.label()
        if self.declared_nilpotency:
            L = self.max_length
            for u in range(self.n_vertices):
                frontier = [((), u, ef.eye(dims[u]))]
                for _ in range(L):
                    frontier = [(q + (self.arrow_names[k],), self.arrow_ends[k][1],
                                 ef.matmul(maps[k], m, p))
                                for q, end, m in frontier for k in self.arrows_out_of(end)]
                for q, end, m in frontier:
                    if np.any(m):
                        return f"nilpotency: path {'.'.join(q)} acts nonzero"
        return None


def path_algebra(vertices, arrows, relations=(), p: int = ef.DEFAULT_PRIME,
                 nilpotency: Optional[int] = None) -> QuiverAlgebra:
    """Convenience constructor from plain lists."""
    return QuiverAlgebra(Quiver(vertices, arrows), RelationSet(relations), p, nilpotency)


def linear_quiver_algebra(n: int, zero_relations: Sequence[Tuple[int, int]] = (),
                          p: int = ef.DEFAULT_PRIME) -> QuiverAlgebra:
    """``1 -> 2 -> ... -> n`` with zero relations on arrow runs ``(start, length)``."""
    vertices = [str(i) for i in range(1, n + 1)]
    arrows = [(f"a{i}", str(i), str(i + 1)) for i in range(1, n)]
    rels = [[(1, tuple(f"a{j}" for j in range(s, s + length)))] for s, length in zero_relations]
    return path_algebra(vertices, arrows, rels, p)
