"""Padding a d-way array to d' > d ways without changing its orbit.

New trailing axes all have length 1, so the padded array is equivalent to the
original one up to the obvious bijection: tuples on the new axes are 1 x 1
invertible matrices, i.e. nonzero scalars, and any such scalar choice can be
absorbed into the first tuple entry.  Recovery therefore strips the trailing
scalars and folds their product back into the first matrix.
"""

from __future__ import annotations

from .. import tensor as T
from ..oracle import verify_witness
from . import Reduction, RecoveryError, register


def pad_tensor(t: T.TensorD, d_prime: int) -> T.TensorD:
    return T.pad_to_d(t, d_prime)


def _forward(t: T.TensorD, w: T.Witness, d_prime: int) -> T.Witness:
    return T.pad_witness_forward(w, d_prime)


def _recover(tA: T.TensorD, tB: T.TensorD, wt: T.Witness,
             d_prime: int) -> T.Witness:
    w = T.pad_witness_recover(wt, tA.d)
    if not verify_witness(tA, tB, w):
        raise RecoveryError("witness invalid: unpadded witness fails")
    return w


register(Reduction(
    name="pad-d",
    source=T.TI_D,
    target=T.TI_D,
    construct=pad_tensor,
    witness_forward=_forward,
    witness_recover=_recover,
    target_dims=lambda dims, d_prime: tuple(dims) + (1,) * (d_prime - len(dims)),
    params=("d_prime",),
))
