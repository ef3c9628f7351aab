"""Monomial code equivalence as 3-tensor equivalence.

A full-rank d x n generator matrix (d > 1) becomes a (d+2n) x n x (1+2n)
tensor: frontal slice 0 stacks the generator over 2n zero rows, and frontal
slice 1 + 2i + j (i in [n], j in {0,1}) is the elementary matrix pairing
gadget row d + 2i + j with code coordinate i.  Each lateral slice then
carries an identity pair in its own gadget block, so its rank is 2 or 3
while any combination of two or more lateral slices has rank at least 4 —
which forces the middle matrix of any tensor witness to be monomial.
"""

from __future__ import annotations

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
from .common import block_diag


def moncode_to_3ti(code: T.Code) -> T.Tensor3:
    d, n = code.gen.shape
    p = code.p
    if d <= 1:
        raise ValueError("moncode_to_3ti needs d > 1")
    if rank(code.gen, p) != d:
        raise T.DegenerateInput("generator matrix must have full row rank")
    data = np.zeros((d + 2 * n, n, 1 + 2 * n), dtype=np.int64)
    data[:d, :, 0] = code.gen
    for i in range(n):
        for j in range(2):
            data[d + 2 * i + j, i, 1 + 2 * i + j] = 1
    return T.Tensor3(data, p)


def _forward(code: T.Code, w: T.Witness) -> T.Witness:
    Q, D, Pm = w.mats
    p = code.p
    n = code.gen.shape[1]
    M = (D @ Pm) % p
    eye2 = np.eye(2, dtype=np.int64)
    left = block_diag(Q, np.kron(inverse(M, p), eye2))
    mix = block_diag(np.ones((1, 1), dtype=np.int64), np.kron(Pm, eye2))
    return T.Witness(T.TI3, (left, M, mix), p)


def _recover(cA: T.Code, cB: T.Code, wt: T.Witness) -> T.Witness:
    p = cA.p
    M = wt.mats[1] % p
    mono = monomial_from_matrix(M, p)
    if mono is None:
        raise RecoveryError(
            "witness invalid: middle factor of the tensor witness is not monomial"
        )
    x0, _ = solve_linear((cA.gen @ M % p).T, cB.gen.T % p, p)
    if x0 is None:
        raise RecoveryError(
            "witness invalid: permuted code does not span the target code"
        )
    Q = x0.T % p
    if not is_invertible(Q, p):
        raise RecoveryError("witness invalid: recovered row map is singular")
    D = np.diag(np.asarray(mono.scalars, dtype=np.int64)) % p
    Pm = permutation_matrix(mono.perm, p)
    w = T.Witness(T.MONCODE_EQ, (Q, D, Pm), p)
    if not verify_witness(cA, cB, w):
        raise RecoveryError("witness invalid: recovered code equivalence fails")
    return w


def _dims(src_dims):
    d, n = src_dims
    return (d + 2 * n, n, 1 + 2 * n)


register(Reduction(
    name="moncode-to-3ti",
    source=T.MONCODE_EQ,
    target=T.TI3,
    construct=moncode_to_3ti,
    witness_forward=_forward,
    witness_recover=_recover,
    target_dims=_dims,
))
