"""3-tensor equivalence as isometry of alternating (or symmetric) matrix tuples.

A nondegenerate tensor with frontal slices A_1..A_m of shape l x n (l <= n,
normalized by transposing the first two directions when needed) embeds into
matrices of side l + 7n + 3 over four coordinate blocks

    U (size l) | V (size n) | E (size 2n+1) | F (size 4n+2)

as the tuple consisting of

* the m embedded slices  [[0, A_k], [-A_k^t, 0]]  on U + V,
* one elementary pair per (u_p, e_q): rows 1..l each tied to every E
  coordinate (l*(2n+1) slices),
* one elementary pair per (v_p, f_q): rows l+1..l+n each tied to every F
  coordinate (n*(4n+2) slices).

The gadget widths force any isometry to respect the flag spanned by the
gadget coordinates: lateral slices at U rows have rank in [2n+1, 3n+1],
at V rows in [4n+2, 5n+2], and at gadget rows at most n, so the diagonal
U and V blocks of an isometry carry a tensor witness.
"""

from __future__ import annotations

import numpy as np

from .. import tensor as T
from ..matspace import inverse, is_invertible
from ..oracle import verify_witness
from . import Reduction, RecoveryError, register
from .common import skew_pair, solve_slice_mix, sym_pair


def gadget_layout(l: int, n: int) -> dict:
    """Coordinate offsets of the four blocks and the slice ordering."""
    return {
        "side": l + 7 * n + 3,
        "u": 0,
        "v": l,
        "e": l + n,
        "f": l + 3 * n + 1,
        "ne": 2 * n + 1,
        "nf": 4 * n + 2,
        "slices": lambda m: m + l * (2 * n + 1) + n * (4 * n + 2),
    }


def _normalize(t: T.Tensor3):
    """Transpose the first two directions when l > n; report whether we did."""
    l, n, _ = t.dims
    if l > n:
        return t.permuted((1, 0, 2)), True
    return t, False


def _swap_ti3(w: T.Witness) -> T.Witness:
    """Transport a tensor witness through swapping the first two directions."""
    P, Q, R = w.mats
    return T.Witness(T.TI3, (Q.T % w.p, P.T % w.p, R), w.p)


def _build(t: T.Tensor3, symmetric: bool) -> T.Tensor3:
    if not T.is_nondegenerate(t):
        raise T.DegenerateInput(
            "input tensor is degenerate; apply nondegenerate_core first"
        )
    t, _ = _normalize(t)
    l, n, m = t.dims
    p = t.p
    lay = gadget_layout(l, n)
    side = lay["side"]
    pair = sym_pair if symmetric else skew_pair
    sgn = 1 if symmetric else (-1) % p
    slices = []
    for k in range(m):
        S = np.zeros((side, side), dtype=np.int64)
        S[:l, lay["v"] : lay["v"] + n] = t.data[:, :, k]
        S[lay["v"] : lay["v"] + n, :l] = (sgn * t.data[:, :, k].T) % p
        slices.append(S)
    for pp in range(l):
        for q in range(lay["ne"]):
            slices.append(pair(side, pp, lay["e"] + q, p))
    for pp in range(n):
        for q in range(lay["nf"]):
            slices.append(pair(side, lay["v"] + pp, lay["f"] + q, p))
    return T.tensor3_from_tuple(slices, p)


def ti3_to_alt_isometry(t: T.Tensor3) -> T.Tensor3:
    return _build(t, symmetric=False)


def ti3_to_sym_isometry(t: T.Tensor3) -> T.Tensor3:
    return _build(t, symmetric=True)


def _forward(t: T.Tensor3, w: T.Witness) -> T.Witness:
    p = t.p
    t, swapped = _normalize(t)
    if swapped:
        w = _swap_ti3(w)
    P, Q, R = w.mats
    l, n, _ = t.dims
    lay = gadget_layout(l, n)
    W = np.zeros((lay["side"], lay["side"]), dtype=np.int64)
    W[:l, :l] = P.T % p
    W[lay["v"] : lay["v"] + n, lay["v"] : lay["v"] + n] = Q % p
    er = np.arange(lay["e"], lay["e"] + lay["ne"])
    W[er, er] = 1
    fr = np.arange(lay["f"], lay["f"] + lay["nf"])
    W[fr, fr] = 1
    mix_e = np.kron(inverse(P, p), np.eye(lay["ne"], dtype=np.int64))
    mix_f = np.kron(inverse(Q, p).T % p, np.eye(lay["nf"], dtype=np.int64))
    m = R.shape[0]
    total = m + l * lay["ne"] + n * lay["nf"]
    mix = np.zeros((total, total), dtype=np.int64)
    mix[:m, :m] = R
    mix[m : m + l * lay["ne"], m : m + l * lay["ne"]] = mix_e
    mix[m + l * lay["ne"] :, m + l * lay["ne"] :] = mix_f
    return T.Witness(T.ISOMETRY, (W, mix % p), p)


def _recover(tA: T.Tensor3, tB: T.Tensor3, wt: T.Witness) -> T.Witness:
    p = tA.p
    origA, origB = tA, tB
    tA, swapped = _normalize(tA)
    tB, _ = _normalize(tB)
    W = wt.mats[0] % p
    l, n, m = tA.dims
    P = W[:l, :l].T % p
    Q = W[l : l + n, l : l + n]
    if not (is_invertible(P, p) and is_invertible(Q, p)):
        raise RecoveryError("witness invalid: diagonal U/V blocks singular")
    transformed = np.stack(
        [(P @ tA.data[:, :, k] @ Q) % p for k in range(m)], axis=0
    )
    R = solve_slice_mix(transformed, np.moveaxis(tB.data, 2, 0), p)
    if R is None or not is_invertible(R, p):
        raise RecoveryError(
            "witness invalid: transformed slices do not span the target slices"
        )
    w = T.Witness(T.TI3, (P, Q, R), p)
    if swapped:
        w = _swap_ti3(w)
    if not verify_witness(origA, origB, w):
        raise RecoveryError("witness invalid: recovered tensor witness fails")
    return w


def _dims(src_dims):
    l, n, m = src_dims
    if l > n:
        l, n = n, l
    side = l + 7 * n + 3
    return (side, side, m + l * (2 * n + 1) + n * (4 * n + 2))


register(Reduction(
    name="3ti-to-alt-isometry",
    source=T.TI3,
    target=T.ISOMETRY,
    construct=ti3_to_alt_isometry,
    witness_forward=_forward,
    witness_recover=_recover,
    target_dims=_dims,
))

register(Reduction(
    name="3ti-to-sym-isometry",
    source=T.TI3,
    target=T.ISOMETRY,
    construct=ti3_to_sym_isometry,
    witness_forward=_forward,
    witness_recover=_recover,
    target_dims=_dims,
))
