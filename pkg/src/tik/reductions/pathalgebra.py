"""Associative unital algebras that encode digraphs and d-way arrays.

Both constructions output structure-constant cubes (basis x basis -> basis
coefficients), so algebra isomorphism of the outputs is the target problem.

The digraph algebra has one idempotent per vertex and one radical basis
element per arrow, and every product of two arrows is zero.  Since
dim e_i * A * e_j counts the arrows from i to j, the digraph can be read
back off the algebra, and any isomorphism must permute the vertex
idempotents by a digraph isomorphism.

The d-way-array algebra is the path algebra of a line quiver with one
rewrite rule: vertices 0..d-1, n_t parallel arrows t -> t+1 for t <= d-2,
and n_{d-1} extra "collapse" arrows 0 -> d-1.  Chains of consecutive arrows
multiply by concatenation until they reach full length d-1, at which point
the product collapses to the combination of collapse arrows whose
coefficients are the array entries.  Full-length chains still sit in the
basis (no product ever produces one), which keeps multiplication closed.
An isomorphism of two such algebras fixes every vertex idempotent after
conjugating by a unit 1 + r with r in the radical, and then its arrow
blocks are exactly a tuple-equivalence witness for the two arrays.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod

import numpy as np

from .. import tensor as T
from ..matspace import (
    inverse,
    is_invertible,
    monomial_from_matrix,
    permutation_matrix,
    rank,
    solve_linear,
)
from ..oracle import verify_witness
from . import Reduction, RecoveryError, register


# -- digraphs and their arrow algebras ---------------------------------------

@dataclass(frozen=True)
class DiGraph:
    """Directed multigraph on 0..n-1, no loops; weights[i][j] = #arrows i->j."""

    n: int
    weights: tuple  # n rows of n nonnegative ints, zero diagonal

    @staticmethod
    def from_matrix(W) -> "DiGraph":
        W = np.asarray(W, dtype=np.int64)
        n = W.shape[0]
        if W.ndim != 2 or W.shape != (n, n):
            raise ValueError("weight matrix must be square")
        if np.any(W < 0) or np.any(np.diag(W)):
            raise ValueError("weights must be nonnegative with a zero diagonal")
        return DiGraph(n, tuple(tuple(int(x) for x in row) for row in W))

    def matrix(self) -> np.ndarray:
        return np.array(self.weights, dtype=np.int64)

    def arrows(self) -> list:
        """All arrows (i, j, t) with t < weights[i][j], row-major."""
        out = []
        for i in range(self.n):
            for j in range(self.n):
                out.extend((i, j, t) for t in range(self.weights[i][j]))
        return out


def digraph_of_graph(G: T.Graph) -> DiGraph:
    """Both orientations of every edge, one arrow each."""
    return DiGraph.from_matrix(G.adjacency())


def grigoriev_graph_algebra(D: DiGraph, p: int) -> T.Tensor3:
    """Structure constants of the arrow algebra of D over GF(p).

    Basis: vertex idempotents first, then arrows in row-major order.
    e_i * a = a iff a starts at i, a * e_j = a iff a ends at j, and all
    arrow * arrow products vanish.
    """
    arrows = D.arrows()
    n = D.n
    N = n + len(arrows)
    C = np.zeros((N, N, N), dtype=np.int64)
    for v in range(n):
        C[v, v, v] = 1
    for k, (i, j, _) in enumerate(arrows):
        C[i, n + k, n + k] = 1
        C[n + k, j, n + k] = 1
    return T.Tensor3(C, p)


def grigoriev_reconstruct(alg: T.Tensor3, num_vertices: int) -> DiGraph:
    """Read the digraph back: weight(i, j) = dim e_i * A * e_j for i != j.

    Assumes the first ``num_vertices`` basis elements are the vertex
    idempotents; the dimension is the rank of left-multiplication by e_i
    composed with right-multiplication by e_j.
    """
    C = alg.data
    p = alg.p
    n = num_vertices
    W = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        L = C[i].T % p
        for j in range(n):
            if i == j:
                continue
            R = C[:, j, :].T % p
            W[i, j] = rank(L @ R % p, p)
    return DiGraph.from_matrix(W)


def graph_to_grigoriev_algebra(G: T.Graph, p: int = 2) -> T.Tensor3:
    return grigoriev_graph_algebra(digraph_of_graph(G), p)


def _grig_forward(G: T.Graph, w: T.Witness, p: int = 2) -> T.Witness:
    pi = w.perm()
    H = G.relabel(pi)
    arrows_a = digraph_of_graph(G).arrows()
    index_b = {a: k for k, a in enumerate(digraph_of_graph(H).arrows())}
    n = G.n
    N = n + len(arrows_a)
    M = np.zeros((N, N), dtype=np.int64)
    for i in range(n):
        M[pi[i], i] = 1
    for k, (i, j, t) in enumerate(arrows_a):
        M[n + index_b[(pi[i], pi[j], t)], n + k] = 1
    return T.Witness(T.ALGEBRA_ISO, (M,), p)


def _grig_recover(GA: T.Graph, GB: T.Graph, wt: T.Witness,
                  p: int = 2) -> T.Witness:
    n = GA.n
    M = wt.mats[0] % wt.p
    block = M[:n, :n]
    mono = monomial_from_matrix(block, wt.p)
    if mono is None or any(s % wt.p != 1 for s in mono.scalars):
        raise RecoveryError(
            "witness invalid: the vertex idempotents are not permuted"
        )
    pi = tuple(int(np.nonzero(block[:, i])[0][0]) for i in range(n))
    w = T.Witness(T.GRAPH_ISO, (permutation_matrix(pi, 2),), 2)
    if not verify_witness(GA, GB, w):
        raise RecoveryError(
            "witness invalid: the vertex permutation is not a graph "
            "isomorphism"
        )
    return w


# -- the line-quiver algebra of a d-way array --------------------------------

class PathBasis:
    """Index bookkeeping for the line-quiver algebra basis.

    Order: the d vertex idempotents; then chains grouped by (start s,
    length L), s ascending, L ascending within s, multi-indices row-major;
    then the n_{d-1} collapse arrows last.
    """

    def __init__(self, dims):
        self.dims = tuple(int(x) for x in dims)
        self.d = len(self.dims)
        if any(x < 1 for x in self.dims):
            raise ValueError("all axis lengths must be positive")
        self.groups: dict = {}
        off = self.d
        for s in range(self.d - 1):
            for length in range(1, self.d - s):
                self.groups[(s, length)] = off
                off += prod(self.dims[s:s + length])
        self.collapse_offset = off
        self.size = off + self.dims[-1]

    def group_span(self, s: int, length: int):
        off = self.groups[(s, length)]
        return off, off + prod(self.dims[s:s + length])

    def chain_index(self, s: int, length: int, multi) -> int:
        idx = 0
        for t, a in zip(range(s, s + length), multi):
            idx = idx * self.dims[t] + a
        return self.groups[(s, length)] + idx

    def multis(self, s: int, length: int):
        return itertools.product(
            *(range(self.dims[t]) for t in range(s, s + length))
        )


def dti_to_algebra(t: T.TensorD) -> T.Tensor3:
    """Structure constants of the line-quiver algebra of a d-way array."""
    d = t.d
    if d < 3:
        raise ValueError("need a d-way array with d >= 3")
    pb = PathBasis(t.dims)
    N = pb.size
    C = np.zeros((N, N, N), dtype=np.int64)
    for v in range(d):
        C[v, v, v] = 1
    for (s, length), _ in pb.groups.items():
        lo, hi = pb.group_span(s, length)
        for idx in range(lo, hi):
            C[s, idx, idx] = 1
            C[idx, s + length, idx] = 1
    for j in range(t.dims[-1]):
        idx = pb.collapse_offset + j
        C[0, idx, idx] = 1
        C[idx, d - 1, idx] = 1
    for (s1, L1) in pb.groups:
        for (s2, L2) in pb.groups:
            if s2 != s1 + L1:
                continue
            for m1 in pb.multis(s1, L1):
                i1 = pb.chain_index(s1, L1, m1)
                for m2 in pb.multis(s2, L2):
                    i2 = pb.chain_index(s2, L2, m2)
                    if L1 + L2 < d - 1:
                        C[i1, i2, pb.chain_index(s1, L1 + L2, m1 + m2)] = 1
                    else:
                        # s1 is forced to 0 here; the full product collapses
                        C[i1, i2, pb.collapse_offset:] = t.data[m1 + m2]
    return T.Tensor3(C, t.p)


def _left_mult(C: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    """Matrix of x -> y * x on coordinates."""
    return np.einsum("abc,a->bc", C, y).T % p


def _right_mult(C: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    """Matrix of x -> x * y on coordinates."""
    return np.einsum("abc,b->ac", C, y).T % p


def straighten_idempotents(alg: T.Tensor3, M: np.ndarray, d: int):
    """Conjugate an iso into one fixing the first d idempotents pointwise.

    Solves (1 + r) M[:, i] = e_i (1 + r) for r in the radical (coordinates
    d..N-1); the conjugated map (1 + r) phi(.) (1 + r)^{-1} then sends e_i
    to e_i exactly.  Returns the conjugated matrix, or None when no r
    exists (the witness was not an isomorphism).
    """
    C = alg.data
    p = alg.p
    N = C.shape[0]
    eye = np.eye(N, dtype=np.int64)
    rows = []
    rhs = []
    for i in range(d):
        y = M[:, i] % p
        K = (_right_mult(C, y, p) - _left_mult(C, eye[i], p)) % p
        rows.append(K[:, d:])
        rhs.append((eye[i] - y) % p)
    r_rad, _ = solve_linear(np.vstack(rows), np.concatenate(rhs), p)
    if r_rad is None:
        return None
    r = np.zeros(N, dtype=np.int64)
    r[d:] = r_rad % p
    lift = (eye + _left_mult(C, r, p)) % p
    unit = np.zeros(N, dtype=np.int64)
    unit[:d] = 1
    lift_inv_of_unit = inverse(lift, p) @ unit % p
    return lift @ _right_mult(C, lift_inv_of_unit, p) @ M % p


def _dti_forward(t: T.TensorD, w: T.Witness) -> T.Witness:
    p = t.p
    pb = PathBasis(t.dims)
    inv = [inverse(P, p) for P in w.mats[:-1]]
    M = np.zeros((pb.size, pb.size), dtype=np.int64)
    M[:pb.d, :pb.d] = np.eye(pb.d, dtype=np.int64)
    for (s, length), _ in pb.groups.items():
        blk = np.eye(1, dtype=np.int64)
        for tt in range(s, s + length):
            blk = np.kron(blk, inv[tt]) % p
        lo, hi = pb.group_span(s, length)
        M[lo:hi, lo:hi] = blk
    M[pb.collapse_offset:, pb.collapse_offset:] = w.mats[-1].T % p
    return T.Witness(T.ALGEBRA_ISO, (M,), p)


def _dti_recover(tA: T.TensorD, tB: T.TensorD, wt: T.Witness) -> T.Witness:
    p = tA.p
    d = tA.d
    pb = PathBasis(tA.dims)
    alg_b = dti_to_algebra(tB)
    if not verify_witness(dti_to_algebra(tA), alg_b, wt):
        raise RecoveryError("witness invalid: not an algebra isomorphism")
    M = wt.mats[0] % p
    if not np.array_equal(M[:d, :d], np.eye(d, dtype=np.int64)):
        # the line quiver has no nontrivial automorphisms, so a genuine
        # isomorphism fixes every vertex idempotent modulo the radical
        raise RecoveryError("witness invalid: vertex idempotents are mixed")
    Mp = straighten_idempotents(alg_b, M, d)
    if Mp is None:
        raise RecoveryError(
            "witness invalid: idempotent images cannot be aligned"
        )
    eye = np.eye(pb.size, dtype=np.int64)
    if not np.array_equal(Mp[:, :d], eye[:, :d]):
        raise RecoveryError(
            "witness invalid: conjugation did not fix the idempotents"
        )
    mats = []
    for tt in range(d - 1):
        lo, hi = pb.group_span(tt, 1)
        blk = Mp[lo:hi, lo:hi]
        if not is_invertible(blk, p):
            raise RecoveryError("witness invalid: an arrow block is singular")
        mats.append(inverse(blk, p))
    V = Mp[pb.collapse_offset:, pb.collapse_offset:]
    if not is_invertible(V, p):
        raise RecoveryError(_collapse_error(tA))
    mats.append(V.T % p)
    w = T.Witness(T.TI_D, tuple(mats), p)
    if not verify_witness(tA, tB, w):
        raise RecoveryError(_collapse_error(tA))
    return w


def _collapse_error(tA: T.TensorD) -> str:
    flat = tA.data.reshape(-1, tA.dims[-1])
    if rank(flat, p=tA.p) < tA.dims[-1]:
        return (
            "recovery-unsupported: the last-axis flattening has deficient "
            "column rank, so arrow products do not pin down the collapse "
            "arrows; use inputs whose last-axis flattening has full column "
            "rank"
        )
    return "witness invalid: recovered tuple does not map the source array"


register(Reduction(
    name="grigoriev",
    source=T.GRAPH_ISO,
    target=T.ALGEBRA_ISO,
    construct=graph_to_grigoriev_algebra,
    witness_forward=_grig_forward,
    witness_recover=_grig_recover,
    target_dims=lambda dims, p=2: (dims[0] + 2 * dims[1],) * 3,
    params=("p",),
))

register(Reduction(
    name="dti-to-algebra",
    source=T.TI_D,
    target=T.ALGEBRA_ISO,
    construct=dti_to_algebra,
    witness_forward=_dti_forward,
    witness_recover=_dti_recover,
    target_dims=lambda dims: (PathBasis(dims).size,) * 3,
))
