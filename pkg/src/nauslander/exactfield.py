"""Exact linear algebra over a prime field F_p.

Matrices are plain ``numpy`` int64 arrays whose entries lie in ``[0, p)``.
Every routine returns fresh arrays; callers may freeze them with
:func:`freeze`.  Empty (0 x n and n x 0) matrices are legal everywhere and
stand for zero maps.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

DEFAULT_PRIME = 101
_MAX_PRIME = 2**31


class ContractViolation(ValueError):
    """Raised when an operation is called with incompatible shapes."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_matrix(data, p: int, shape: Optional[Tuple[int, int]] = None) -> np.ndarray:
    """Coerce ``data`` to a reduced int64 matrix, keeping empty shapes intact."""
    a = np.array(data, dtype=np.int64)
    if shape is not None:
        a = a.reshape(shape)
    if a.ndim != 2:
        raise ContractViolation(f"expected a 2-d matrix, got shape {a.shape}")
    return a % p


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ContractViolation(f"cannot multiply {a.shape} by {b.shape}")
    k = a.shape[1]
    if k == 0:
        return zeros(a.shape[0], b.shape[1])
    if (p - 1) ** 2 * k < 2**62:
        return (a @ b) % p
    out = (a.astype(object) @ b.astype(object)) % p
    return out.astype(np.int64)


def inverse_scalar(x: int, p: int) -> int:
    return pow(int(x) % p, -1, p)


def rref(m: np.ndarray, p: int) -> Tuple[np.ndarray, int, list]:
    """Reduced row-echelon form with first-nonzero pivoting.

    Returns ``(reduced, rank, pivots)``.
    """
    a = np.array(m, dtype=np.int64) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * inverse_scalar(a[r, c], p)) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r]) % p) % p
        pivots.append(c)
        r += 1
    return a, r, pivots


def rank(m: np.ndarray, p: int) -> int:
    if m.size == 0:
        return 0
    return rref(m, p)[1]


def kernel_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Columns form a basis of ``{x : a x = 0}``."""
    rows, cols = a.shape
    red, r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = zeros(cols, len(free))
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-red[i, f]) % p
    return basis


def left_kernel_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Rows form a basis of ``{y : y a = 0}``."""
    return kernel_basis(a.T, p).T.copy()


def column_space_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Pivot columns of ``a``: a basis of its column space."""
    _, _, pivots = rref(a, p)
    return a[:, pivots].copy()


def complement_basis(rows_span: np.ndarray, dim: int, p: int) -> np.ndarray:
    """Unit vectors (as columns) spanning a complement of the row span."""
    if rows_span.shape[0] == 0:
        return eye(dim)
    _, _, pivots = rref(rows_span, p)
    free = [c for c in range(dim) if c not in set(pivots)]
    out = zeros(dim, len(free))
    for j, f in enumerate(free):
        out[f, j] = 1
    return out


def solve(a: np.ndarray, b: np.ndarray, p: int):
    """Solve ``a x = b``.

    ``b`` may have several columns.  Returns ``(particular, nullspace_basis)``
    or ``None`` when the system is inconsistent.
    """
    if b.ndim == 1:
        b = b.reshape(-1, 1)
    if a.shape[0] != b.shape[0]:
        raise ContractViolation(
            f"row mismatch: A has {a.shape[0]} rows, b has {b.shape[0]}")
    n = a.shape[1]
    aug = np.hstack([a % p, b % p]) if a.shape[0] else zeros(0, n + b.shape[1])
    red, r, pivots = rref(aug, p)
    if any(c >= n for c in pivots):
        return None
    x = zeros(n, b.shape[1])
    for i, c in enumerate(pivots):
        x[c] = red[i, n:]
    return x, kernel_basis(a, p)


def solve_particular(a: np.ndarray, b: np.ndarray, p: int) -> Optional[np.ndarray]:
    res = solve(a, b, p)
    return None if res is None else res[0]


def inverse(a: np.ndarray, p: int) -> Optional[np.ndarray]:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ContractViolation(f"inverse of non-square {a.shape}")
    if n == 0:
        return zeros(0, 0)
    red, r, _ = rref(np.hstack([a % p, eye(n)]), p)
    if r < n or not np.array_equal(red[:, :n], eye(n)):
        return None
    return red[:, n:].copy()


def is_invertible(a: np.ndarray, p: int) -> bool:
    return a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]


def random_matrix(rng: np.random.Generator, rows: int, cols: int, p: int) -> np.ndarray:
    return rng.integers(0, p, size=(rows, cols), dtype=np.int64)


def block_diag(blocks: Sequence[np.ndarray]) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


@dataclass(frozen=True)
class PrimeField:
    """The field F_p; a thin handle bundling the modulus with the kernels."""

    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not is_prime(int(self.p)):
            raise ValueError(f"modulus not prime: {self.p!r}")
        if self.p >= _MAX_PRIME:
            raise ValueError(f"modulus {self.p} too large (must be < 2**31)")

    def matrix(self, data, shape=None) -> np.ndarray:
        return as_matrix(data, self.p, shape)

    def mul(self, a, b):
        return matmul(a, b, self.p)

    def rref(self, m):
        return rref(m, self.p)

    def rank(self, m):
        return rank(m, self.p)

    def solve(self, a, b):
        return solve(a, b, self.p)

    def kernel_basis(self, a):
        return kernel_basis(a, self.p)

    def inverse(self, a):
        return inverse(a, self.p)

    def random_matrix(self, rng, rows, cols):
        return random_matrix(rng, rows, cols, self.p)
