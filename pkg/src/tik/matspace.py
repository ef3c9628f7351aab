"""Exact linear algebra over GF(p): matrices, tuples, spaces, groups.

Everything is a numpy int64 array with entries reduced mod p.  Row
reduction is deterministic (leftmost pivot column, first nonzero row
from the top), so ranks, kernels, echelon forms and the witnesses built
on top of them are reproducible bit for bit.

The module also owns enumeration and sampling of the groups the rest of
the package searches over: GL(n, p), monomial matrices Mon(n, p), and
permutations.  Enumeration is budget-guarded and refuses loudly instead
of running forever.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import DEFAULT_BUDGET
from .gf import GF


class BudgetExceeded(RuntimeError):
    """An enumeration was refused because it would exceed the budget."""

    def __init__(self, what: str, required: int, budget: int):
        super().__init__(
            f"{what} needs {required} elements, over the budget of {budget}"
        )
        self.required = required
        self.budget = budget


def as_array(a, p: int) -> np.ndarray:
    arr = np.asarray(a, dtype=np.int64) % p
    return arr


# ---------------------------------------------------------------------------
# row reduction and everything derived from it
# ---------------------------------------------------------------------------

def row_reduce(M, p: int):
    """Reduced row echelon form.

    Returns (R, pivot_cols, rank, det_like) where det_like is the
    determinant for square M (0 when singular) and otherwise just the
    accumulated pivot product with swap signs, which callers ignore.
    """
    F = GF(p)
    R = as_array(M, p).copy()
    rows, cols = R.shape
    pivot_cols = []
    det = 1
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
            det = (-det) % p
        a = int(R[r, c])
        det = (det * a) % p
        if a != 1:
            R[r] = (R[r] * F.inv(a)) % p
        mask = np.nonzero(R[:, c])[0]
        mask = mask[mask != r]
        if mask.size:
            R[mask] = (R[mask] - np.outer(R[mask, c], R[r])) % p
        pivot_cols.append(c)
        r += 1
    rank = r
    if rows == cols and rank < rows:
        det = 0
    return R, pivot_cols, rank, det % p


def rank(M, p: int) -> int:
    return row_reduce(M, p)[2]


def det(M, p: int) -> int:
    M = as_array(M, p)
    if M.shape[0] != M.shape[1]:
        raise ValueError("determinant of a non-square matrix")
    return row_reduce(M, p)[3]


def inverse(M, p: int) -> np.ndarray:
    M = as_array(M, p)
    n = M.shape[0]
    if M.shape[0] != M.shape[1]:
        raise ValueError("inverse of a non-square matrix")
    aug = np.hstack([M, np.eye(n, dtype=np.int64)])
    R, pivots, rk, _ = row_reduce(aug, p)
    if rk < n or pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:]


def is_invertible(M, p: int) -> bool:
    M = as_array(M, p)
    return M.shape[0] == M.shape[1] and rank(M, p) == M.shape[0]


def right_kernel(M, p: int) -> np.ndarray:
    """Basis of {v : M v = 0}, one vector per row."""
    M = as_array(M, p)
    rows, cols = M.shape
    R, pivots, rk, _ = row_reduce(M, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = (-R[r, f]) % p
    return basis


def left_kernel(M, p: int) -> np.ndarray:
    """Basis of {u : u M = 0}, one vector per row."""
    return right_kernel(as_array(M, p).T, p)


def solve_linear(A, b, p: int):
    """Solve A x = b exactly.

    Returns (x0, N) with x0 one solution (free variables set to 0) and
    N the nullspace basis (rows), or (None, N) when inconsistent.
    b may be a vector or a matrix of stacked right-hand sides.
    """
    A = as_array(A, p)
    b = as_array(b, p)
    vec = b.ndim == 1
    B = b.reshape(-1, 1) if vec else b
    rows, cols = A.shape
    aug = np.hstack([A, B])
    R, pivots, rk, _ = row_reduce(aug, p)
    pivots_in_A = [c for c in pivots if c < cols]
    if len(pivots_in_A) < rk:
        return None, right_kernel(A, p)
    x0 = np.zeros((cols, B.shape[1]), dtype=np.int64)
    for r, pc in enumerate(pivots_in_A):
        x0[pc] = R[r, cols:]
    if vec:
        x0 = x0[:, 0]
    return x0, right_kernel(A, p)


def span_canonical(vectors, p: int) -> np.ndarray:
    """Canonical basis (RREF, zero rows dropped) of the row span."""
    V = as_array(vectors, p)
    if V.ndim == 1:
        V = V.reshape(1, -1)
    R, _, rk, _ = row_reduce(V, p)
    return R[:rk]


def span_membership(vectors, v, p: int) -> bool:
    V = as_array(vectors, p)
    v = as_array(v, p).reshape(1, -1)
    return rank(V, p) == rank(np.vstack([V, v]), p)


def span_equal(U, V, p: int) -> bool:
    A = span_canonical(U, p)
    B = span_canonical(V, p)
    return A.shape == B.shape and bool(np.array_equal(A, B))


# ---------------------------------------------------------------------------
# typed wrappers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mat:
    """A dense matrix over GF(p)."""

    data: np.ndarray
    p: int

    def __post_init__(self):
        object.__setattr__(self, "data", as_array(self.data, self.p))
        if self.data.ndim != 2:
            raise ValueError("Mat needs a 2-d array")

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @staticmethod
    def identity(n: int, p: int) -> "Mat":
        return Mat(np.eye(n, dtype=np.int64), p)

    @staticmethod
    def zeros(r: int, c: int, p: int) -> "Mat":
        return Mat(np.zeros((r, c), dtype=np.int64), p)

    def __matmul__(self, other: "Mat") -> "Mat":
        return Mat(self.data @ other.data % self.p, self.p)

    def __add__(self, other: "Mat") -> "Mat":
        return Mat((self.data + other.data) % self.p, self.p)

    def __sub__(self, other: "Mat") -> "Mat":
        return Mat((self.data - other.data) % self.p, self.p)

    def __neg__(self) -> "Mat":
        return Mat((-self.data) % self.p, self.p)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Mat)
            and other.p == self.p
            and np.array_equal(other.data, self.data)
        )

    def transpose(self) -> "Mat":
        return Mat(self.data.T, self.p)

    @property
    def T(self) -> "Mat":
        return self.transpose()

    def rank(self) -> int:
        return rank(self.data, self.p)

    def det(self) -> int:
        return det(self.data, self.p)

    def inverse(self) -> "Mat":
        return Mat(inverse(self.data, self.p), self.p)

    def is_invertible(self) -> bool:
        return is_invertible(self.data, self.p)


@dataclass(frozen=True)
class MatrixTuple:
    """An ordered tuple of equal-shaped matrices: array (m, rows, cols)."""

    data: np.ndarray
    p: int

    def __post_init__(self):
        object.__setattr__(self, "data", as_array(self.data, self.p))
        if self.data.ndim != 3:
            raise ValueError("MatrixTuple needs an (m, rows, cols) array")

    @property
    def m(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self):
        return self.data.shape[1:]

    def flatten(self) -> np.ndarray:
        """Each slice as a row vector: (m, rows*cols)."""
        return self.data.reshape(self.m, -1)

    def slice(self, k: int) -> Mat:
        return Mat(self.data[k], self.p)

    def __iter__(self):
        return (Mat(S, self.p) for S in self.data)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MatrixTuple)
            and other.p == self.p
            and np.array_equal(other.data, self.data)
        )


def is_alternating(A: np.ndarray, p: int) -> bool:
    """A = -A^t with zero diagonal (the characteristic-2-safe definition)."""
    A = as_array(A, p)
    return bool(
        np.array_equal(A, (-np.swapaxes(A, -1, -2)) % p)
        and not np.any(np.diagonal(A, 0, -2, -1))
    )


def is_symmetric(A: np.ndarray, p: int) -> bool:
    A = as_array(A, p)
    return bool(np.array_equal(A, np.swapaxes(A, -1, -2)))


@dataclass(frozen=True)
class MatrixSpace:
    """Span of a tuple of equal-shaped matrices, with an explicit basis.

    The basis slices must be linearly independent; this is checked at
    construction by flattening and row reducing.
    """

    basis: MatrixTuple
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.check:
            flat = self.basis.flatten()
            if rank(flat, self.p) != self.basis.m:
                raise ValueError("basis slices are linearly dependent")

    @property
    def p(self) -> int:
        return self.basis.p

    @property
    def dim(self) -> int:
        return self.basis.m

    @property
    def alternating(self) -> bool:
        return all(is_alternating(S, self.p) for S in self.basis.data)

    @property
    def symmetric(self) -> bool:
        return all(is_symmetric(S, self.p) for S in self.basis.data)

    def canonical_key(self) -> bytes:
        return span_canonical(self.basis.flatten(), self.p).tobytes()

    def contains(self, M) -> bool:
        M = as_array(M, self.p)
        return span_membership(self.basis.flatten(), M.reshape(-1), self.p)

    def coordinates_of(self, M):
        """Coefficients of M in the basis, or None when outside the span."""
        M = as_array(M, self.p)
        x, _ = solve_linear(self.basis.flatten().T, M.reshape(-1), self.p)
        return x

    def same_span(self, other: "MatrixSpace") -> bool:
        return span_equal(self.basis.flatten(), other.basis.flatten(), self.p)


@dataclass(frozen=True)
class MonomialMatrix:
    """Permutation-plus-scaling matrix: entry (i, perm[i]) equals scalars[i]."""

    perm: tuple
    scalars: tuple
    p: int

    def __post_init__(self):
        n = len(self.perm)
        if sorted(self.perm) != list(range(n)) or len(self.scalars) != n:
            raise ValueError("not a permutation with matching scalars")
        if any(s % self.p == 0 for s in self.scalars):
            raise ValueError("monomial scalars must be nonzero")

    @property
    def n(self) -> int:
        return len(self.perm)

    def to_matrix(self) -> np.ndarray:
        M = np.zeros((self.n, self.n), dtype=np.int64)
        for i, j in enumerate(self.perm):
            M[i, j] = self.scalars[i] % self.p
        return M

    def inverse(self) -> "MonomialMatrix":
        F = GF(self.p)
        inv_perm = [0] * self.n
        for i, j in enumerate(self.perm):
            inv_perm[j] = i
        scal = tuple(F.inv(self.scalars[inv_perm[j]]) for j in range(self.n))
        return MonomialMatrix(tuple(inv_perm), scal, self.p)


def monomial_from_matrix(M, p: int):
    """Classify M as monomial, returning MonomialMatrix or None."""
    M = as_array(M, p)
    n = M.shape[0]
    if M.shape[0] != M.shape[1]:
        return None
    perm = []
    scalars = []
    for i in range(n):
        nz = np.nonzero(M[i])[0]
        if nz.size != 1:
            return None
        perm.append(int(nz[0]))
        scalars.append(int(M[i, nz[0]]))
    if sorted(perm) != list(range(n)):
        return None
    return MonomialMatrix(tuple(perm), tuple(scalars), p)


def permutation_matrix(perm, p: int) -> np.ndarray:
    """Matrix P with P[i, perm[i]] = 1."""
    n = len(perm)
    M = np.zeros((n, n), dtype=np.int64)
    for i, j in enumerate(perm):
        M[i, j] = 1
    return M


# ---------------------------------------------------------------------------
# group orders, enumeration, sampling
# ---------------------------------------------------------------------------

def order_gl(n: int, p: int) -> int:
    q = p**n
    return math.prod(q - p**i for i in range(n))


def order_monomial(n: int, p: int) -> int:
    return math.factorial(n) * (p - 1) ** n


def check_budget(what: str, required: int, budget: int | None):
    budget = DEFAULT_BUDGET if budget is None else budget
    if required > budget:
        raise BudgetExceeded(what, required, budget)


def enumerate_gl(n: int, p: int, budget: int | None = None):
    """All of GL(n, p), lexicographic by the row-major entry vector."""
    check_budget(f"GL({n},{p})", order_gl(n, p), budget)
    for entries in itertools.product(range(p), repeat=n * n):
        M = np.array(entries, dtype=np.int64).reshape(n, n)
        if rank(M, p) == n:
            yield M


def enumerate_monomial(n: int, p: int, budget: int | None = None):
    """All of Mon(n, p): permutations in lex order, scalars lex within."""
    check_budget(f"Mon({n},{p})", order_monomial(n, p), budget)
    for perm in itertools.permutations(range(n)):
        for scal in itertools.product(range(1, p), repeat=n):
            yield MonomialMatrix(perm, scal, p)


def enumerate_permutations(n: int, budget: int | None = None):
    check_budget(f"S_{n}", math.factorial(n), budget)
    return itertools.permutations(range(n))


def all_gl_array(n: int, p: int, budget: int | None = None) -> np.ndarray:
    """GL(n, p) as one (N, n, n) array, in enumeration order.

    Used by the vectorized brute-force oracles; n <= 4 has closed-form
    batch determinants, larger n falls back to the generator.  The
    candidate sweep is chunked to keep memory flat.
    """
    order = order_gl(n, p)
    check_budget(f"GL({n},{p})", order, budget)
    total = p ** (n * n)
    if n > 4:
        return np.stack(list(enumerate_gl(n, p, budget)))
    powers = p ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    chunks = []
    step = 1 << 20
    for start in range(0, total, step):
        idx = np.arange(start, min(start + step, total), dtype=np.int64)
        cand = ((idx[:, None] // powers[None, :]) % p).reshape(-1, n, n)
        chunks.append(cand[batch_det(cand, p) != 0])
    out = np.concatenate(chunks) if len(chunks) > 1 else chunks[0]
    assert out.shape[0] == order
    return out


def batch_det(A: np.ndarray, p: int) -> np.ndarray:
    """Determinants mod p of a batch (N, n, n), closed formulas for n <= 4."""
    n = A.shape[-1]
    if n == 1:
        return A[..., 0, 0] % p
    if n == 2:
        return (A[..., 0, 0] * A[..., 1, 1] - A[..., 0, 1] * A[..., 1, 0]) % p
    if n == 3:
        a = A
        return (
            a[..., 0, 0] * (a[..., 1, 1] * a[..., 2, 2] - a[..., 1, 2] * a[..., 2, 1])
            - a[..., 0, 1] * (a[..., 1, 0] * a[..., 2, 2] - a[..., 1, 2] * a[..., 2, 0])
            + a[..., 0, 2] * (a[..., 1, 0] * a[..., 2, 1] - a[..., 1, 1] * a[..., 2, 0])
        ) % p
    if n == 4:
        total = np.zeros(A.shape[:-2], dtype=np.int64)
        cols = list(range(4))
        for j in range(4):
            minor = A[..., 1:, :][..., :, cols[:j] + cols[j + 1 :]]
            term = A[..., 0, j] * batch_det(minor, p)
            total = (total + (-1) ** j * term) % p
        return total % p
    return np.array([det(M, p) for M in A.reshape(-1, n, n)], dtype=np.int64).reshape(
        A.shape[:-2]
    )


def sample_gl(n: int, p: int, rng) -> np.ndarray:
    """Uniform over GL(n, p) by rejection on the determinant."""
    rng = _as_rng(rng)
    while True:
        M = rng.integers(0, p, size=(n, n), dtype=np.int64)
        if det(M, p) != 0:
            return M


def sample_monomial(n: int, p: int, rng) -> MonomialMatrix:
    rng = _as_rng(rng)
    perm = tuple(int(x) for x in rng.permutation(n))
    scal = tuple(int(x) for x in rng.integers(1, p, size=n))
    return MonomialMatrix(perm, scal, p)


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)
