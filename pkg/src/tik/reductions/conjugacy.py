"""3-tensor equivalence as conjugacy of a block upper-triangular matrix space.

A tensor with frontal slices A_1..A_m over row space of size l and column
space of size n becomes the space spanned by the (l+n) x (l+n) matrices

    [[0, A_k],
     [0, 0 ]]

optionally together with the marker slice diag(I_l, 0).  Conjugating by an
invertible W preserves the common image (the first l coordinates) exactly
when the input is nondegenerate, which pins W to block upper-triangular form
and makes the diagonal blocks a tensor witness.
"""

from __future__ import annotations

import numpy as np

from .. import tensor as T
from ..matspace import inverse, is_invertible
from ..oracle import verify_witness
from . import Reduction, RecoveryError, register
from .common import solve_slice_mix


def _require_nondegenerate(t: T.Tensor3):
    if not T.is_nondegenerate(t):
        raise T.DegenerateInput(
            "input tensor is degenerate; apply nondegenerate_core first"
        )


def ti3_to_conjugacy(t: T.Tensor3, with_unit: bool = False) -> T.Tensor3:
    _require_nondegenerate(t)
    l, n, m = t.dims
    side = l + n
    slices = []
    if with_unit:
        marker = np.zeros((side, side), dtype=np.int64)
        marker[:l, :l] = np.eye(l, dtype=np.int64)
        slices.append(marker)
    for k in range(m):
        S = np.zeros((side, side), dtype=np.int64)
        S[:l, l:] = t.data[:, :, k]
        slices.append(S)
    return T.tensor3_from_tuple(slices, t.p)


def _forward(t: T.Tensor3, w: T.Witness, with_unit: bool = False) -> T.Witness:
    P, Q, R = w.mats
    p = t.p
    l, n, _ = t.dims
    W = np.zeros((l + n, l + n), dtype=np.int64)
    W[:l, :l] = inverse(P, p)
    W[l:, l:] = Q
    if with_unit:
        m = R.shape[0]
        mix = np.zeros((m + 1, m + 1), dtype=np.int64)
        mix[0, 0] = 1
        mix[1:, 1:] = R
    else:
        mix = R
    return T.Witness(T.CONJUGACY, (W, mix), p)


def _recover(tA: T.Tensor3, tB: T.Tensor3, wt: T.Witness,
             with_unit: bool = False) -> T.Witness:
    W = wt.mats[0]
    p = tA.p
    l, n, m = tA.dims
    W11 = W[:l, :l] % p
    W22 = W[l:, l:] % p
    if not (is_invertible(W11, p) and is_invertible(W22, p)):
        raise RecoveryError(
            "witness invalid: diagonal blocks of the conjugator are singular"
        )
    P = inverse(W11, p)
    Q = W22
    transformed = np.stack(
        [(P @ tA.data[:, :, k] @ Q) % p for k in range(m)], axis=0
    )
    target = np.moveaxis(tB.data, 2, 0)
    R = solve_slice_mix(transformed, target, p)
    if R is None or not is_invertible(R, p):
        raise RecoveryError(
            "witness invalid: transformed slices do not span the target slices"
        )
    w = T.Witness(T.TI3, (P, Q, R), p)
    if not verify_witness(tA, tB, w):
        raise RecoveryError("witness invalid: recovered tensor witness fails")
    return w


def _dims(src_dims, with_unit: bool = False):
    l, n, m = src_dims
    side = l + n
    return (side, side, m + (1 if with_unit else 0))


register(Reduction(
    name="3ti-to-conjugacy",
    source=T.TI3,
    target=T.CONJUGACY,
    construct=ti3_to_conjugacy,
    witness_forward=_forward,
    witness_recover=_recover,
    target_dims=_dims,
))

register(Reduction(
    name="3ti-to-conjugacy-unital",
    source=T.TI3,
    target=T.CONJUGACY,
    construct=lambda t: ti3_to_conjugacy(t, with_unit=True),
    witness_forward=lambda t, w: _forward(t, w, with_unit=True),
    witness_recover=lambda a, b, wt: _recover(a, b, wt, with_unit=True),
    target_dims=lambda dims: _dims(dims, with_unit=True),
))
