"""3-way and d-way arrays over GF(p), group actions, and witnesses.

Conventions that everything else in the package relies on:

* A ``Tensor3`` stores A(i, j, k) as an (l, n, m) array, i slowest and
  k fastest.  Frontal slices fix k (shape l x n), lateral slices fix j
  (shape l x m), horizontal slices fix i (shape n x m).
* Slice mixing uses columns: the k-th output slice takes the k-th
  *column* of the mixing matrix R, i.e. B_k = sum_{k'} R[k',k] A_{k'}.
* ``act(t, w)`` maps the left instance to the right one: w certifies
  "A is equivalent to B" exactly when act(A, w) == B.
* A witness stores the matrices of the acting group element; the exact
  equations per tag are listed in ``_CONTRACTIONS`` below.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial

import numpy as np

from .gf import GF
from .matspace import (
    MatrixTuple,
    as_array,
    inverse,
    is_invertible,
    left_kernel,
    monomial_from_matrix,
    right_kernel,
    row_reduce,
    solve_linear,
)

# problem tags: the closed catalog of group actions
TI3 = "TI3"
EQUIVALENCE = "Equivalence"
ISOMETRY = "Isometry"
PSEUDO_ISOMETRY = "PseudoIsometry"
CONJUGACY = "Conjugacy"
ALGEBRA_ISO = "AlgebraIso"
TRILINEAR_EQ = "TrilinearEq"
FORM_EQ = "FormEq"
MONCODE_EQ = "MonCodeEq"
GRAPH_ISO = "GraphIso"
TI_D = "TI_d"

_ARITY = {
    TI3: 3,
    EQUIVALENCE: 2,
    ISOMETRY: 2,
    PSEUDO_ISOMETRY: 2,
    CONJUGACY: 2,
    ALGEBRA_ISO: 1,
    TRILINEAR_EQ: 1,
    FORM_EQ: 1,
    MONCODE_EQ: 3,
    GRAPH_ISO: 1,
}

ALL_TAGS = tuple(_ARITY) + (TI_D,)


class DegenerateInput(ValueError):
    """Raised by constructions that require a nondegenerate array."""


class UnsupportedField(ValueError):
    """Raised when the field characteristic rules an operation out."""


# ---------------------------------------------------------------------------
# tensors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Tensor3:
    """Dense l x n x m array over GF(p)."""

    data: np.ndarray
    p: int

    def __post_init__(self):
        object.__setattr__(self, "data", as_array(self.data, self.p))
        if self.data.ndim != 3:
            raise ValueError("Tensor3 needs a 3-d array")

    @property
    def dims(self):
        return self.data.shape

    def frontal(self) -> MatrixTuple:
        """m slices of shape l x n: A_k(i, j) = A(i, j, k)."""
        return MatrixTuple(np.moveaxis(self.data, 2, 0), self.p)

    def lateral(self) -> MatrixTuple:
        """n slices of shape l x m: L_j(i, k) = A(i, j, k)."""
        return MatrixTuple(np.moveaxis(self.data, 1, 0), self.p)

    def horizontal(self) -> MatrixTuple:
        """l slices of shape n x m: H_i(j, k) = A(i, j, k)."""
        return MatrixTuple(self.data.copy(), self.p)

    def permuted(self, axes) -> "Tensor3":
        return Tensor3(np.transpose(self.data, axes), self.p)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Tensor3)
            and other.p == self.p
            and np.array_equal(other.data, self.data)
        )


def tensor3_from_frontal(slices: MatrixTuple) -> Tensor3:
    return Tensor3(np.moveaxis(slices.data, 0, 2), slices.p)


def tensor3_from_tuple(arrs, p: int) -> Tensor3:
    """Frontal slices given as a list of l x n arrays."""
    return tensor3_from_frontal(MatrixTuple(np.stack([as_array(a, p) for a in arrs]), p))


@dataclass(frozen=True)
class TensorD:
    """Dense n_1 x ... x n_d array over GF(p), first index slowest."""

    data: np.ndarray
    p: int

    def __post_init__(self):
        object.__setattr__(self, "data", as_array(self.data, self.p))
        if self.data.ndim < 1:
            raise ValueError("TensorD needs d >= 1")

    @property
    def d(self) -> int:
        return self.data.ndim

    @property
    def dims(self):
        return self.data.shape

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TensorD)
            and other.p == self.p
            and np.array_equal(other.data, self.data)
        )


# ---------------------------------------------------------------------------
# witnesses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    """A problem-tagged tuple of invertible matrices.

    For MonCodeEq the matrices are (Q, D, P) with D diagonal and P a
    permutation; for GraphIso the single matrix is a permutation matrix
    with entry (i, pi(i)) = 1; for TI_d there are d matrices.
    """

    tag: str
    mats: tuple
    p: int

    def __post_init__(self):
        object.__setattr__(
            self, "mats", tuple(as_array(M, self.p) for M in self.mats)
        )
        if self.tag not in ALL_TAGS:
            raise ValueError(f"unknown problem tag {self.tag!r}")
        if self.tag != TI_D and len(self.mats) != _ARITY[self.tag]:
            raise ValueError(
                f"{self.tag} expects {_ARITY[self.tag]} matrices, got {len(self.mats)}"
            )
        for M in self.mats:
            if M.ndim != 2 or M.shape[0] != M.shape[1] or not is_invertible(M, self.p):
                raise ValueError(f"witness matrix is not square invertible:\n{M}")
        if self.tag == MONCODE_EQ:
            Q, D, P = self.mats
            if np.any(D[~np.eye(D.shape[0], dtype=bool)]):
                raise ValueError("MonCodeEq middle matrix must be diagonal")
            if monomial_from_matrix(P, self.p) is None or np.any((P != 0) & (P != 1)):
                raise ValueError("MonCodeEq last matrix must be a permutation")
        if self.tag == GRAPH_ISO:
            P = self.mats[0]
            if monomial_from_matrix(P, self.p) is None or np.any((P != 0) & (P != 1)):
                raise ValueError("GraphIso matrix must be a permutation")

    def perm(self) -> tuple:
        """The permutation of a GraphIso witness: i -> pi(i)."""
        if self.tag != GRAPH_ISO:
            raise ValueError("perm() is only defined for GraphIso witnesses")
        return monomial_from_matrix(self.mats[0], self.p).perm


def identity_witness(tag: str, dims, p: int) -> Witness:
    eye = lambda n: np.eye(n, dtype=np.int64)
    if tag == TI3:
        l, n, m = dims
        return Witness(tag, (eye(l), eye(n), eye(m)), p)
    if tag == EQUIVALENCE:
        l, n = dims[0], dims[1]
        return Witness(tag, (eye(l), eye(n)), p)
    if tag in (ISOMETRY, PSEUDO_ISOMETRY, CONJUGACY):
        n, m = dims[0], dims[2]
        return Witness(tag, (eye(n), eye(m)), p)
    if tag in (ALGEBRA_ISO, TRILINEAR_EQ, FORM_EQ, GRAPH_ISO):
        return Witness(tag, (eye(dims[0]),), p)
    if tag == MONCODE_EQ:
        d, n = dims
        return Witness(tag, (eye(d), eye(n), eye(n)), p)
    if tag == TI_D:
        return Witness(tag, tuple(eye(n) for n in dims), p)
    raise ValueError(tag)


def instance_dims(x) -> tuple:
    """Size tuple of any problem instance, in its witness convention."""
    if isinstance(x, Graph):
        return (x.n, len(x.edges))
    if isinstance(x, FormD):
        return (x.n, x.degree)
    return tuple(x.dims)


def contract_all(data: np.ndarray, mats, p: int) -> np.ndarray:
    """B(j_1..j_d) = sum A(i_1..i_d) prod_t M_t[i_t, j_t]."""
    B = data
    for M in mats:
        B = np.tensordot(B, M, axes=([0], [0])) % p
    return B


def _contraction_triplet(w: Witness, dims):
    """The three per-axis matrices realizing w on an l x n x m array."""
    p = w.p
    eye_m = np.eye(dims[2], dtype=np.int64)
    if w.tag == TI3:
        P, Q, R = w.mats
        return P.T, Q, R
    if w.tag == EQUIVALENCE:
        P, Q = w.mats
        return P.T, Q, eye_m
    if w.tag == CONJUGACY:
        P, R = w.mats
        return inverse(P, p).T, P, R
    if w.tag in (ISOMETRY, PSEUDO_ISOMETRY):
        P, R = w.mats
        return P, P, R
    if w.tag in (TRILINEAR_EQ, FORM_EQ):
        (P,) = w.mats
        return P, P, P
    if w.tag == ALGEBRA_ISO:
        (M,) = w.mats
        Minv = inverse(M, p)
        return Minv, Minv, M.T
    raise ValueError(f"tag {w.tag} does not act on a 3-way array")


def act(t, w: Witness):
    """Apply a witness: returns the instance w maps t to."""
    if isinstance(t, Tensor3):
        mats = _contraction_triplet(w, t.dims)
        if tuple(M.shape[0] for M in mats) != t.dims:
            raise ValueError(
                f"witness dimensions {[M.shape[0] for M in mats]} do not "
                f"match tensor dims {t.dims}"
            )
        return Tensor3(contract_all(t.data, mats, t.p), t.p)
    if isinstance(t, TensorD):
        if w.tag != TI_D:
            raise ValueError(f"tag {w.tag} does not act on a d-way array")
        if len(w.mats) != t.d or tuple(M.shape[0] for M in w.mats) != t.dims:
            raise ValueError("witness dimensions do not match tensor dims")
        return TensorD(contract_all(t.data, w.mats, t.p), t.p)
    if isinstance(t, FormD):
        if w.tag != FORM_EQ:
            raise ValueError(f"tag {w.tag} does not act on a form")
        return t.substitute(w.mats[0])
    if isinstance(t, Code):
        if w.tag != MONCODE_EQ:
            raise ValueError(f"tag {w.tag} does not act on a code")
        Q, D, P = w.mats
        return Code(Q @ t.gen @ D @ P % w.p, t.p)
    if isinstance(t, Graph):
        if w.tag != GRAPH_ISO:
            raise ValueError(f"tag {w.tag} does not act on a graph")
        return t.relabel(w.perm())
    if w.tag == MONCODE_EQ:
        Q, D, P = w.mats
        code = as_array(t, w.p)
        return Q @ code @ D @ P % w.p
    raise ValueError(f"cannot act on {type(t).__name__} with tag {w.tag}")


def compose(w2: Witness, w1: Witness) -> Witness:
    """The witness realizing act(act(x, w1), w2)."""
    if w1.tag != w2.tag:
        raise ValueError("mismatched tags")
    p, tag = w1.p, w1.tag
    if tag == TI3:
        P1, Q1, R1 = w1.mats
        P2, Q2, R2 = w2.mats
        return Witness(tag, (P2 @ P1 % p, Q1 @ Q2 % p, R1 @ R2 % p), p)
    if tag == EQUIVALENCE:
        P1, Q1 = w1.mats
        P2, Q2 = w2.mats
        return Witness(tag, (P2 @ P1 % p, Q1 @ Q2 % p), p)
    if tag in (ISOMETRY, PSEUDO_ISOMETRY, CONJUGACY):
        P1, R1 = w1.mats
        P2, R2 = w2.mats
        return Witness(tag, (P1 @ P2 % p, R1 @ R2 % p), p)
    if tag in (TRILINEAR_EQ, FORM_EQ):
        return Witness(tag, (w1.mats[0] @ w2.mats[0] % p,), p)
    if tag == ALGEBRA_ISO:
        return Witness(tag, (w2.mats[0] @ w1.mats[0] % p,), p)
    if tag == GRAPH_ISO:
        return Witness(tag, (w1.mats[0] @ w2.mats[0] % p,), p)
    if tag == MONCODE_EQ:
        Q1, D1, P1 = w1.mats
        Q2, D2, P2 = w2.mats
        M = D1 @ P1 @ D2 @ P2 % p
        # re-split the monomial product into diagonal-times-permutation
        mono = monomial_from_matrix(M, p)
        perm_mat = np.zeros_like(M)
        for i, j in enumerate(mono.perm):
            perm_mat[i, j] = 1
        D = np.diag(np.array(mono.scalars, dtype=np.int64))
        return Witness(tag, (Q2 @ Q1 % p, D, perm_mat), p)
    if tag == TI_D:
        return Witness(tag, tuple(a @ b % p for a, b in zip(w1.mats, w2.mats)), p)
    raise ValueError(tag)


def invert(w: Witness) -> Witness:
    """The witness mapping act(x, w) back to x."""
    p, tag = w.p, w.tag
    inv = lambda M: inverse(M, p)
    if tag in (TI3, EQUIVALENCE):
        return Witness(tag, tuple(inv(M) for M in w.mats), p)
    if tag in (ISOMETRY, PSEUDO_ISOMETRY, CONJUGACY, TRILINEAR_EQ, FORM_EQ,
               ALGEBRA_ISO, GRAPH_ISO, TI_D):
        return Witness(tag, tuple(inv(M) for M in w.mats), p)
    if tag == MONCODE_EQ:
        Q, D, P = w.mats
        M = inv(D @ P % p)
        mono = monomial_from_matrix(M, p)
        perm_mat = np.zeros_like(M)
        for i, j in enumerate(mono.perm):
            perm_mat[i, j] = 1
        return Witness(tag, (inv(Q), np.diag(np.array(mono.scalars, dtype=np.int64)), perm_mat), p)
    raise ValueError(tag)


# ---------------------------------------------------------------------------
# degeneracy handling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoreMaps:
    """Restriction maps from a tensor onto its nondegenerate core.

    row_select (l' x l) and col_select (n x n') cut the first two
    directions down to coordinate complements of the common left/right
    kernels of the frontal slices; kept_slices lists the retained
    frontal slices and slice_coords (m x m') writes every original
    slice in the kept basis.
    """

    row_select: np.ndarray
    col_select: np.ndarray
    kept_slices: tuple
    slice_coords: np.ndarray


def _coordinate_complement_rows(kernel_rows: np.ndarray, dim: int, p: int):
    """Indices i with e_i spanning a complement of the kernel row span."""
    R, pivots, rk, _ = row_reduce(kernel_rows, p) if kernel_rows.size else (None, [], 0, 1)
    return [i for i in range(dim) if i not in pivots]


def nondegenerate_core(t: Tensor3):
    """Cut t down to a tensor with independent slices in all directions.

    Returns (core, CoreMaps).  The zero tensor yields the 0 x 0 x 0
    marker.  Deterministic: complements are coordinate subspaces at the
    non-pivot positions of the deterministic row reduction.
    """
    p = t.p
    l, n, m = t.dims
    flat_rows = t.data.reshape(l, n * m)  # u A_k = 0 for all k  <=>  u @ this = 0
    lk = left_kernel(flat_rows, p) if flat_rows.size else np.eye(l, dtype=np.int64)
    # right kernel: A_k v = 0 for all k; stack slices vertically
    stacked = np.moveaxis(t.data, 2, 0).reshape(m * l, n)
    rk_ = right_kernel(stacked, p) if stacked.size else np.eye(n, dtype=np.int64)

    rows = _coordinate_complement_rows(lk, l, p)
    cols = _coordinate_complement_rows(rk_, n, p)
    S = np.zeros((len(rows), l), dtype=np.int64)
    for a, i in enumerate(rows):
        S[a, i] = 1
    T = np.zeros((n, len(cols)), dtype=np.int64)
    for b, j in enumerate(cols):
        T[j, b] = 1

    cut = np.einsum("ai,ijk,jb->abk", S, t.data, T) % p

    # greedy independent frontal slices, in order
    kept = []
    flat = cut.reshape(len(rows) * len(cols), m).T  # slice k flattened as row k
    basis = np.zeros((0, flat.shape[1]), dtype=np.int64)
    for k in range(m):
        cand = np.vstack([basis, flat[k : k + 1]])
        if row_reduce(cand, p)[2] > basis.shape[0]:
            kept.append(k)
            basis = cand
    core_data = cut[:, :, kept] if kept else np.zeros((len(rows), len(cols), 0), dtype=np.int64)
    if not kept:
        core_data = np.zeros((0, 0, 0), dtype=np.int64)
        S = np.zeros((0, l), dtype=np.int64)
        T = np.zeros((n, 0), dtype=np.int64)
    kept_flat = flat[kept] if kept else np.zeros((0, flat.shape[1]), dtype=np.int64)
    coords = np.zeros((m, len(kept)), dtype=np.int64)
    for k in range(m):
        if kept:
            x, _ = solve_linear(kept_flat.T, flat[k], p)
            coords[k] = x
    core = Tensor3(core_data, p)
    return core, CoreMaps(S, T, tuple(kept), coords)


def is_nondegenerate(t: Tensor3) -> bool:
    core, maps = nondegenerate_core(t)
    return core.dims == t.dims


# ---------------------------------------------------------------------------
# padding between tensor orders
# ---------------------------------------------------------------------------

def pad_to_d(t: TensorD, d_prime: int) -> TensorD:
    """Append trailing directions of length 1."""
    if d_prime < t.d:
        raise ValueError(f"cannot pad a {t.d}-way array down to {d_prime}")
    return TensorD(t.data.reshape(t.dims + (1,) * (d_prime - t.d)), t.p)


def pad_witness_forward(w: Witness, d_prime: int) -> Witness:
    one = np.ones((1, 1), dtype=np.int64)
    return Witness(TI_D, tuple(w.mats) + (one,) * (d_prime - len(w.mats)), w.p)


def pad_witness_recover(w: Witness, d: int) -> Witness:
    """Absorb the trailing 1 x 1 scalars into the first matrix."""
    p = w.p
    scale = 1
    for M in w.mats[d:]:
        scale = scale * int(M[0, 0]) % p
    mats = (w.mats[0] * scale % p,) + tuple(w.mats[1:d])
    return Witness(TI_D, mats, p)


# ---------------------------------------------------------------------------
# graphs and linear codes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1."""

    n: int
    edges: frozenset  # of (u, v) pairs with u < v

    @staticmethod
    def from_edges(n: int, pairs) -> "Graph":
        es = set()
        for u, v in pairs:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"bad edge ({u}, {v}) on {n} vertices")
            es.add((min(u, v), max(u, v)))
        return Graph(n, frozenset(es))

    def sorted_edges(self):
        return sorted(self.edges)

    def relabel(self, perm) -> "Graph":
        """Image under u -> perm[u]."""
        return Graph.from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            A[u, v] = A[v, u] = 1
        return A


@dataclass(frozen=True)
class Code:
    """A linear code given by a generator matrix (rows span the code)."""

    gen: np.ndarray  # d x n
    p: int

    def __post_init__(self):
        object.__setattr__(self, "gen", as_array(self.gen, self.p))
        if self.gen.ndim != 2:
            raise ValueError("generator matrix must be 2-d")

    @property
    def dims(self):
        return self.gen.shape

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Code)
            and other.p == self.p
            and np.array_equal(other.gen, self.gen)
        )


# ---------------------------------------------------------------------------
# degree-d forms, sparsely
# ---------------------------------------------------------------------------

def _monomial_key(exps):
    return tuple(exps)


@dataclass(frozen=True)
class FormD:
    """A homogeneous degree-d form in n variables, exponent-vector -> coeff.

    Coefficients are kept in a canonical sorted tuple so equal forms
    compare equal structurally.
    """

    n: int
    degree: int
    coeffs: tuple  # ((e_1..e_n), c), graded-lex sorted, c != 0
    p: int

    @staticmethod
    def from_dict(n: int, degree: int, d: dict, p: int) -> "FormD":
        items = []
        for exps, c in d.items():
            c %= p
            if c == 0:
                continue
            if len(exps) != n or sum(exps) != degree or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for degree {degree}")
            items.append((tuple(int(e) for e in exps), int(c)))
        items.sort()
        return FormD(n, degree, tuple(items), p)

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def substitute(self, A) -> "FormD":
        """g with g(y) = f(A y): variable x_i becomes sum_j A[i,j] y_j."""
        A = as_array(A, self.p)
        if A.shape != (self.n, self.n):
            raise ValueError("substitution matrix must be n x n")
        out: dict = {}
        for exps, c in self.coeffs:
            term = {tuple([0] * self.n): c}
            for i, e in enumerate(exps):
                if e == 0:
                    continue
                lin = {}
                for j in range(self.n):
                    if A[i, j] % self.p:
                        key = tuple(1 if jj == j else 0 for jj in range(self.n))
                        lin[key] = int(A[i, j])
                for _ in range(e):
                    term = _poly_mul(term, lin, self.p)
            for k, v in term.items():
                out[k] = (out.get(k, 0) + v) % self.p
        return FormD.from_dict(self.n, self.degree, out, self.p)

    def times_new_var_power(self, e: int) -> "FormD":
        """Multiply by z^e where z is one fresh variable, placed last."""
        out = {exps + (e,): c for exps, c in self.coeffs}
        return FormD.from_dict(self.n + 1, self.degree + e, out, self.p)

    def drop_last_var(self) -> "FormD":
        """Inverse of times_new_var_power when every term has z^e."""
        es = {exps[-1] for exps, _ in self.coeffs}
        if len(es) > 1:
            raise ValueError("last variable does not appear uniformly")
        e = es.pop() if es else 0
        out = {exps[:-1]: c for exps, c in self.coeffs}
        return FormD.from_dict(self.n - 1, self.degree - e, out, self.p)

    def evaluate(self, point) -> int:
        v = as_array(point, self.p)
        total = 0
        for exps, c in self.coeffs:
            term = c
            for x, e in zip(v, exps):
                term = term * pow(int(x), e, self.p) % self.p
            total = (total + term) % self.p
        return total % self.p


def _poly_mul(a: dict, b: dict, p: int) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            out[key] = (out.get(key, 0) + ca * cb) % p
    return {k: v for k, v in out.items() if v}


def random_form(n: int, degree: int, p: int, rng) -> FormD:
    exps = sorted(_exponent_vectors(n, degree), reverse=True)
    d = {e: int(rng.integers(0, p)) for e in exps}
    return FormD.from_dict(n, degree, d, p)


def _exponent_vectors(n: int, degree: int):
    if n == 1:
        yield (degree,)
        return
    for lead in range(degree, -1, -1):
        for rest in _exponent_vectors(n - 1, degree - lead):
            yield (lead,) + rest


# ---------------------------------------------------------------------------
# cubic forms <-> symmetric 3-way arrays
# ---------------------------------------------------------------------------

def symmetrize_cubic(f: FormD) -> TensorD:
    """Fully symmetric T with sum_{ijk} T(i,j,k) x_i x_j x_k = f.

    Needs the characteristic away from 6 (p >= 5): the entry at an
    index triple with multiplicity pattern s is c * s / 3!.
    """
    if f.degree != 3:
        raise ValueError("symmetrize_cubic needs a cubic form")
    if f.p in (2, 3):
        raise UnsupportedField(f"cubic symmetrization needs p >= 5, got p={f.p}")
    F = GF(f.p)
    inv6 = F.inv(6)
    T = np.zeros((f.n,) * 3, dtype=np.int64)
    for exps, c in f.coeffs:
        vars_ = []
        for i, e in enumerate(exps):
            vars_.extend([i] * e)
        stab = 1
        for e in exps:
            stab *= factorial(e)
        val = c * stab % f.p * inv6 % f.p
        for tri in set(itertools.permutations(vars_)):
            T[tri] = val
    return TensorD(T, f.p)


def evaluate_diag(T: TensorD) -> FormD:
    """The cubic form sum T(i,j,k) x_i x_j x_k of a symmetric 3-array."""
    if T.d != 3 or len(set(T.dims)) != 1:
        raise ValueError("need an n x n x n array")
    n = T.dims[0]
    out: dict = {}
    for i, j, k in np.argwhere(T.data):
        exps = [0] * n
        for v in (i, j, k):
            exps[v] += 1
        key = tuple(exps)
        out[key] = (out.get(key, 0) + int(T.data[i, j, k])) % T.p
    return FormD.from_dict(n, 3, out, T.p)
