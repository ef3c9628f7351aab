"""Graph isomorphism as isometry of alternating matrix tuples.

Two steps.  ``graph_to_altspace`` turns each edge {i, j} into the elementary
alternating matrix E_ij - E_ji; relabelings of the graph correspond exactly
to *monomial* isometries of the tuple.  ``monomial_gadget`` then removes the
monomial restriction: it appends, for every pair (i, j) in [n] x [n], the
elementary alternating matrix pairing row i with gadget row n + i*n + j.
Lateral slices at original rows have rank at least n while gadget rows stay
at rank 1, which forces the top-left block of any isometry of the enlarged
tuple to be monomial.  The composition is a full reduction from graph
isomorphism to alternating matrix space isometry.
"""

from __future__ import annotations

import numpy as np

from .. import tensor as T
from ..matspace import (
    inverse,
    is_alternating,
    is_invertible,
    monomial_from_matrix,
    permutation_matrix,
)
from ..oracle import verify_witness
from . import Reduction, RecoveryError, register
from .common import block_diag, skew_pair, solve_slice_mix


def graph_to_altspace(G: T.Graph, p: int = 2) -> T.Tensor3:
    if G.n < 1:
        raise ValueError("graph must have at least one vertex")
    slices = [skew_pair(G.n, u, v, p) for (u, v) in G.sorted_edges()]
    if not slices:
        return T.Tensor3(np.zeros((G.n, G.n, 0), dtype=np.int64), p)
    return T.tensor3_from_tuple(slices, p)


def _graph_forward(G: T.Graph, w: T.Witness, p: int = 2) -> T.Witness:
    perm = w.perm()
    edges = G.sorted_edges()
    index = {e: k for k, e in enumerate(G.relabel(perm).sorted_edges())}
    m = len(edges)
    R = np.zeros((m, m), dtype=np.int64)
    for k, (u, v) in enumerate(edges):
        a, b = perm[u], perm[v]
        # an orientation flip negates the skew slice
        R[k, index[(min(a, b), max(a, b))]] = 1 if a < b else (p - 1)
    return T.Witness(T.ISOMETRY, (permutation_matrix(perm, p), R), p)


def _graph_recover(GA: T.Graph, GB: T.Graph, wt: T.Witness,
                   p: int = 2) -> T.Witness:
    P = wt.mats[0] % wt.p
    mono = monomial_from_matrix(P, wt.p)
    if mono is None:
        raise RecoveryError(
            "witness invalid: isometry is not monomial; compose with the "
            "monomial-forcing gadget to handle general isometries"
        )
    w = T.Witness(T.GRAPH_ISO, (permutation_matrix(mono.perm, 2),), 2)
    if not verify_witness(GA, GB, w):
        raise RecoveryError("witness invalid: permutation is not an isomorphism")
    return w


def monomial_gadget(t: T.Tensor3) -> T.Tensor3:
    n, n2, m = t.dims
    p = t.p
    if n != n2 or n < 2:
        raise ValueError("monomial_gadget needs square slices of side >= 2")
    for k in range(m):
        if not is_alternating(t.data[:, :, k], p):
            raise ValueError("monomial_gadget expects alternating slices")
    side = n + n * n
    data = np.zeros((side, side, m + n * n), dtype=np.int64)
    data[:n, :n, :m] = t.data
    for i in range(n):
        for j in range(n):
            data[:, :, m + i * n + j] = skew_pair(side, i, n + i * n + j, p)
    return T.Tensor3(data, p)


def _gadget_forward(t: T.Tensor3, w: T.Witness) -> T.Witness:
    P, R = w.mats
    p = t.p
    n = t.dims[0]
    mono = monomial_from_matrix(P % p, p)
    if mono is None:
        raise ValueError(
            "forward transport through the monomial gadget needs a monomial "
            "isometry witness"
        )
    eye_n = np.eye(n, dtype=np.int64)
    big = block_diag(P % p, np.kron(inverse(P, p).T % p, eye_n))
    mix = block_diag(R % p, np.kron(permutation_matrix(mono.perm, p), eye_n))
    return T.Witness(T.ISOMETRY, (big, mix), p)


def _gadget_recover(tA: T.Tensor3, tB: T.Tensor3, wt: T.Witness) -> T.Witness:
    p = tA.p
    n, _, m = tA.dims
    P = wt.mats[0][:n, :n] % p
    mono = monomial_from_matrix(P, p)
    if mono is None:
        raise RecoveryError(
            "witness invalid: top-left block of the gadget isometry is not "
            "monomial"
        )
    transformed = np.einsum("ai,ijk,jb->kab", P.T, tA.data, P) % p
    R = solve_slice_mix(transformed, np.moveaxis(tB.data, 2, 0), p)
    if R is None or not is_invertible(R, p):
        raise RecoveryError(
            "witness invalid: transformed slices do not span the target slices"
        )
    w = T.Witness(T.ISOMETRY, (P, R), p)
    if not verify_witness(tA, tB, w):
        raise RecoveryError("witness invalid: recovered isometry fails")
    return w


register(Reduction(
    name="graph-to-altspace",
    source=T.GRAPH_ISO,
    target=T.ISOMETRY,
    construct=graph_to_altspace,
    witness_forward=_graph_forward,
    witness_recover=_graph_recover,
    target_dims=lambda dims, p=2: (dims[0], dims[0], dims[1]),
    params=("p",),
))

register(Reduction(
    name="monomial-gadget",
    source=T.ISOMETRY,
    target=T.ISOMETRY,
    construct=monomial_gadget,
    witness_forward=_gadget_forward,
    witness_recover=_gadget_recover,
    target_dims=lambda dims: (
        dims[0] + dims[0] ** 2,
        dims[0] + dims[0] ** 2,
        dims[2] + dims[0] ** 2,
    ),
))
