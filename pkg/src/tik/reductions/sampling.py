"""Random, correctly-shaped source pairs for every registered reduction.

Shared by the CLI selftest and the test suite: for a reduction name this
produces (A, B, w, params) with act(A, w) == B, where A satisfies the
reduction's source-side preconditions (nondegeneracy, independent
slices, monomial witnesses for the monomial gadget, ...) and every
direction length stays at or below 3 (graphs at most 4 vertices, d-way
arrays at most 4 directions).
"""

from __future__ import annotations

import numpy as np

from .. import oracle as O
from .. import tensor as T
from ..matspace import _as_rng, sample_gl, sample_monomial

_CAP = 3


def _dims3(rng, nondegenerate=False):
    while True:
        l, n, m = (int(x) for x in rng.integers(1, _CAP + 1, 3))
        if not nondegenerate:
            return l, n, m
        if l <= n * m and n <= l * m and m <= l * n:
            return l, n, m


def _nondeg_ti3(p, rng):
    A = O.gen_tensor3(*_dims3(rng, nondegenerate=True), p, rng, nondegenerate=True)
    return A, O.random_witness(T.TI3, A.dims, p, rng), {}


def _tuple_pair(p, rng, kind="general"):
    n = int(rng.integers(2, _CAP + 1))
    cap = {"general": n * n, "alternating": n * (n - 1) // 2}[kind]
    m = int(rng.integers(1, min(_CAP, cap) + 1))
    A = O.gen_tuple(n, m, p, rng, kind=kind)
    return A, O.random_witness(T.ISOMETRY, A.dims, p, rng), {}


def _cube_pair(p, rng):
    n = int(rng.integers(2, _CAP + 1))
    A = O.gen_tensor3(n, n, n, p, rng)
    return A, O.random_witness(T.ALGEBRA_ISO, A.dims, p, rng), {}


def _code_pair(p, rng):
    d = int(rng.integers(2, _CAP + 1))
    n = int(rng.integers(d, _CAP + 1))
    A = O.gen_code(d, n, p, rng)
    return A, O.random_witness(T.MONCODE_EQ, (d, n), p, rng), {}


def _graph_pair(p, rng):
    n = int(rng.integers(2, 5))
    G = O.gen_graph(n, rng)
    return G, O.random_witness(T.GRAPH_ISO, (n,), 2, rng), {"p": p}


def _monomial_isometry_pair(p, rng):
    n = int(rng.integers(2, _CAP + 1))
    m = int(rng.integers(1, n * (n - 1) // 2 + 1))
    A = O.gen_tuple(n, m, p, rng, kind="alternating")
    w = T.Witness(
        T.ISOMETRY, (sample_monomial(n, p, rng).to_matrix(), sample_gl(m, p, rng)), p
    )
    return A, w, {}


def _tensord_pair(p, rng):
    d = int(rng.integers(2, 4))
    dims = tuple(int(x) for x in rng.integers(1, _CAP + 1, d))
    A = O.gen_tensord(dims, p, rng)
    d_prime = d + int(rng.integers(1, 3))
    return A, O.random_witness(T.TI_D, dims, p, rng), {"d_prime": d_prime}


def _dti_pair(p, rng):
    d = int(rng.integers(3, 5))
    dims = tuple(int(x) for x in rng.integers(2, _CAP + 1, d))
    A = O.gen_tensord(dims, p, rng)
    return A, O.random_witness(T.TI_D, dims, p, rng), {}


def _cubic_pair(p, rng):
    n = int(rng.integers(2, _CAP + 1))
    f = O.gen_form(n, 3, p, rng)
    w = O.random_witness(T.FORM_EQ, (n, 3), p, rng)
    return f, w, {"d": int(rng.integers(3, 6))}


_BUILDERS = {
    "3ti-to-conjugacy": _nondeg_ti3,
    "3ti-to-conjugacy-unital": _nondeg_ti3,
    "3ti-to-alt-isometry": _nondeg_ti3,
    "3ti-to-sym-isometry": _nondeg_ti3,
    "isometry-to-algebra": lambda p, rng: _tuple_pair(p, rng, "general"),
    "isometry-to-trilinear": lambda p, rng: _tuple_pair(p, rng, "general"),
    "adjoin-unit": _cube_pair,
    "moncode-to-3ti": _code_pair,
    "graph-to-altspace": _graph_pair,
    "grigoriev": _graph_pair,
    "monomial-gadget": _monomial_isometry_pair,
    "pad-d": _tensord_pair,
    "dti-to-algebra": _dti_pair,
    "cubic-to-degree-d": _cubic_pair,
}


def sampled_names():
    return sorted(_BUILDERS)


def source_pair(name: str, p: int, rng=None):
    """(A, B, w, params) with act(A, w) == B for the named reduction."""
    rng = _as_rng(rng)
    A, w, params = _BUILDERS[name](p, rng)
    return A, T.act(A, w), w, params
