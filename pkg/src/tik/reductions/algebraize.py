"""Matrix-tuple isometry as algebra isomorphism or trilinear-form equivalence.

A tuple of linearly independent n x n matrices A_1..A_m defines a product on
F^n + F^m by (u + v) * (u' + v') = sum_k (u^t A_k u') x_k: the structure
tensor has its first n frontal slices zero and slice n+k carrying A_k in the
top-left block.  The same array read as a plain 3-way cube, acted on
diagonally, gives the trilinear-form variant.  Block-diagonal maps implement
the forward witness direction; linear independence of the slices forces any
backward witness into the same block shape.

Also here: unit adjunction for algebras, and the structural predicates
(associativity, commutativity, triple products, Lie axioms) the test suite
uses to characterize the constructed algebras.
"""

from __future__ import annotations

import numpy as np

from .. import tensor as T
from ..matspace import inverse, is_invertible, rank
from ..oracle import verify_witness
from . import Reduction, RecoveryError, register
from .common import block_diag


def _embed_cube(t: T.Tensor3) -> np.ndarray:
    n, n2, m = t.dims
    if n != n2:
        raise ValueError(f"slices must be square, got {n}x{n2}")
    if rank(t.data.reshape(n * n2, m).T, t.p) != m:
        raise T.DegenerateInput(
            "frontal slices are linearly dependent; pass a basis of the space"
        )
    side = n + m
    C = np.zeros((side, side, side), dtype=np.int64)
    C[:n, :n, n:] = t.data
    return C


def isometry_to_algebra(t: T.Tensor3) -> T.Tensor3:
    return T.Tensor3(_embed_cube(t), t.p)


def isometry_to_trilinear(t: T.Tensor3) -> T.Tensor3:
    return T.Tensor3(_embed_cube(t), t.p)


def _alg_forward(t: T.Tensor3, w: T.Witness) -> T.Witness:
    P, R = w.mats
    M = block_diag(inverse(P, t.p), R.T % t.p)
    return T.Witness(T.ALGEBRA_ISO, (M,), t.p)


def _alg_recover(tA: T.Tensor3, tB: T.Tensor3, wt: T.Witness) -> T.Witness:
    M = wt.mats[0]
    p = tA.p
    n = tA.dims[0]
    X = M[:n, :n] % p
    Y = M[n:, n:] % p
    if not (is_invertible(X, p) and is_invertible(Y, p)):
        raise RecoveryError("witness invalid: diagonal blocks singular")
    w = T.Witness(T.ISOMETRY, (inverse(X, p), Y.T % p), p)
    if not verify_witness(tA, tB, w):
        raise RecoveryError("witness invalid: recovered isometry fails")
    return w


def _tri_forward(t: T.Tensor3, w: T.Witness) -> T.Witness:
    P, R = w.mats
    return T.Witness(T.TRILINEAR_EQ, (block_diag(P, R),), t.p)


def _tri_recover(tA: T.Tensor3, tB: T.Tensor3, wt: T.Witness) -> T.Witness:
    M = wt.mats[0]
    p = tA.p
    n = tA.dims[0]
    X = M[:n, :n] % p
    W = M[n:, n:] % p
    if not (is_invertible(X, p) and is_invertible(W, p)):
        raise RecoveryError("witness invalid: diagonal blocks singular")
    w = T.Witness(T.ISOMETRY, (X, W), p)
    if not verify_witness(tA, tB, w):
        raise RecoveryError("witness invalid: recovered isometry fails")
    return w


def adjoin_unit(t: T.Tensor3) -> T.Tensor3:
    """Append a two-sided unit as the last basis element."""
    n, n2, n3 = t.dims
    if not (n == n2 == n3):
        raise ValueError("structure constants must form a cube")
    side = n + 1
    C = np.zeros((side, side, side), dtype=np.int64)
    C[:n, :n, :n] = t.data
    idx = np.arange(n)
    C[n, idx, idx] = 1
    C[idx, n, idx] = 1
    C[n, n, n] = 1
    return T.Tensor3(C, t.p)


def _unit_forward(t: T.Tensor3, w: T.Witness) -> T.Witness:
    M = w.mats[0]
    one = np.ones((1, 1), dtype=np.int64)
    return T.Witness(T.ALGEBRA_ISO, (block_diag(M, one),), t.p)


def _unit_recover(tA: T.Tensor3, tB: T.Tensor3, wt: T.Witness) -> T.Witness:
    M = wt.mats[0]
    p = tA.p
    n = tA.dims[0]
    X = M[:n, :n] % p
    if not is_invertible(X, p):
        raise RecoveryError("witness invalid: non-unit block singular")
    w = T.Witness(T.ALGEBRA_ISO, (X,), p)
    if not verify_witness(tA, tB, w):
        raise RecoveryError(
            "witness invalid: recovered unit-free isomorphism fails"
        )
    return w


# --- structural predicates over structure-constant cubes -------------------

def algebra_is_associative(t: T.Tensor3) -> bool:
    C = t.data
    left = np.einsum("abk,kcd->abcd", C, C) % t.p
    right = np.einsum("bck,akd->abcd", C, C) % t.p
    return bool(np.array_equal(left, right))


def algebra_is_commutative(t: T.Tensor3) -> bool:
    return bool(np.array_equal(t.data, np.swapaxes(t.data, 0, 1)))


def algebra_triple_products_vanish(t: T.Tensor3) -> bool:
    C = t.data
    left = np.einsum("abk,kcd->abcd", C, C) % t.p
    right = np.einsum("bck,akd->abcd", C, C) % t.p
    return not left.any() and not right.any()


def algebra_is_lie(t: T.Tensor3) -> bool:
    """Alternating bracket satisfying the Jacobi identity."""
    C = t.data
    p = t.p
    n = C.shape[0]
    if (C[np.arange(n), np.arange(n), :] % p).any():
        return False
    if ((C + np.swapaxes(C, 0, 1)) % p).any():
        return False
    j1 = np.einsum("abk,kcd->abcd", C, C)
    jac = (j1 + j1.transpose(1, 2, 0, 3) + j1.transpose(2, 0, 1, 3)) % p
    return not jac.any()


def _iso_alg_dims(src_dims):
    n, _, m = src_dims
    side = n + m
    return (side, side, side)


register(Reduction(
    name="isometry-to-algebra",
    source=T.ISOMETRY,
    target=T.ALGEBRA_ISO,
    construct=isometry_to_algebra,
    witness_forward=_alg_forward,
    witness_recover=_alg_recover,
    target_dims=_iso_alg_dims,
))

register(Reduction(
    name="isometry-to-trilinear",
    source=T.ISOMETRY,
    target=T.TRILINEAR_EQ,
    construct=isometry_to_trilinear,
    witness_forward=_tri_forward,
    witness_recover=_tri_recover,
    target_dims=_iso_alg_dims,
))

register(Reduction(
    name="adjoin-unit",
    source=T.ALGEBRA_ISO,
    target=T.ALGEBRA_ISO,
    construct=adjoin_unit,
    witness_forward=_unit_forward,
    witness_recover=_unit_recover,
    target_dims=lambda dims: tuple(x + 1 for x in dims),
))
