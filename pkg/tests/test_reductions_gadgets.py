"""Rank-profile and layout checks for the gadget constructions.

The witness round-trip tests say the reductions work; these say the
constructions have the structural separation properties the recovery
arguments lean on: lateral-slice rank bands and their behavior under
random slice combinations.
"""

import numpy as np
import pytest

from tik import oracle as O
from tik import reductions as R
from tik import tensor as T
from tik.matspace import _as_rng, is_alternating, is_symmetric, rank

ALT_SHAPES = [(2, 3, 2, 3), (3, 2, 2, 2), (2, 2, 3, 5), (1, 1, 1, 2)]


def _effective_ln(l, n):
    """The construction transposes so the first direction is the short one."""
    return (n, l) if l > n else (l, n)


def _laterals(G):
    return [G.data[i, :, :] for i in range(G.dims[0])]


@pytest.mark.parametrize("l,n,m,p", ALT_SHAPES)
@pytest.mark.parametrize("name,checker", [
    ("3ti-to-alt-isometry", is_alternating),
    ("3ti-to-sym-isometry", is_symmetric),
])
def test_isometry_gadget_lateral_bands(l, n, m, p, name, checker):
    rng = _as_rng(l * 100 + n * 10 + p)
    red = R.get(name)
    for _ in range(5):
        A = O.gen_tensor3(l, n, m, p, rng, nondegenerate=True)
        G = red.construct(A)
        le, ne = _effective_ln(l, n)
        assert G.dims[0] == le + 7 * ne + 3
        assert G.dims[2] == m + le * (2 * ne + 1) + ne * (4 * ne + 2)
        assert all(checker(G.data[:, :, k], p) for k in range(G.dims[2]))
        lats = _laterals(G)
        for i, L in enumerate(lats):
            r = rank(L, p)
            if i < le:
                assert 2 * ne + 1 <= r <= 3 * ne + 1, f"U row {i}: {r}"
            elif i < le + ne:
                assert 4 * ne + 2 <= r <= 5 * ne + 2, f"V row {i}: {r}"
            else:
                assert r <= ne, f"gadget row {i}: {r}"


@pytest.mark.parametrize("l,n,m,p", [(2, 3, 2, 3), (2, 2, 2, 2)])
def test_alt_isometry_combination_bounds(l, n, m, p):
    rng = _as_rng(41)
    red = R.get("3ti-to-alt-isometry")
    A = O.gen_tensor3(l, n, m, p, rng, nondegenerate=True)
    G = red.construct(A)
    le, ne = _effective_ln(l, n)
    side = G.dims[0]
    lats = np.stack(_laterals(G))
    for _ in range(60):
        c = rng.integers(0, p, side)
        if not c.any():
            continue
        r = rank(np.tensordot(c, lats, axes=(0, 0)) % p, p)
        touches_v = bool(c[le:le + ne].any())
        touches_u = bool(c[:le].any())
        if touches_v:
            assert r >= 4 * ne + 2
        elif touches_u:
            assert r >= 2 * ne + 1
        else:
            # gadget rows alone never climb into the U band
            assert r <= le + ne < 2 * ne + 1
        # combinations inside a single block stay in that block's band
        cu = np.zeros(side, dtype=np.int64)
        cu[:le] = rng.integers(0, p, le)
        if cu.any():
            ru = rank(np.tensordot(cu, lats, axes=(0, 0)) % p, p)
            assert 2 * ne + 1 <= ru <= 3 * ne + 1
        cv = np.zeros(side, dtype=np.int64)
        cv[le:le + ne] = rng.integers(0, p, ne)
        if cv.any():
            rv = rank(np.tensordot(cv, lats, axes=(0, 0)) % p, p)
            assert 4 * ne + 2 <= rv <= 5 * ne + 2


@pytest.mark.parametrize("d,n,p", [(2, 2, 2), (2, 3, 3), (3, 3, 5)])
def test_moncode_lateral_rank_profile(d, n, p):
    rng = _as_rng(d * 10 + n + p)
    red = R.get("moncode-to-3ti")
    for _ in range(5):
        C = O.gen_code(d, n, p, rng)
        G = red.construct(C)
        assert G.dims == (d + 2 * n, n, 1 + 2 * n)
        lats = np.stack([G.data[:, j, :] for j in range(n)])
        for L in lats:
            assert rank(L, p) in (2, 3)
        for _ in range(40):
            c = rng.integers(0, p, n)
            if (c != 0).sum() < 2:
                continue
            r = rank(np.tensordot(c, lats, axes=(0, 0)) % p, p)
            assert r >= 4, "a nontrivial multi-slice combination dropped below 4"


@pytest.mark.parametrize("n,m,p", [(2, 1, 2), (3, 2, 3), (3, 3, 5)])
def test_monomial_gadget_profile(n, m, p):
    rng = _as_rng(n + m + p)
    red = R.get("monomial-gadget")
    A = O.gen_tuple(n, m, p, rng, kind="alternating")
    G = red.construct(A)
    assert G.dims == (n + n * n, n + n * n, m + n * n)
    lats = np.stack(_laterals(G))
    for i in range(n):
        assert n <= rank(lats[i], p) <= 2 * n - 1
    for i in range(n, n + n * n):
        assert rank(lats[i], p) == 1
    # the fresh coordinates contribute n independent columns per touched
    # original row, so a combination over k rows has rank at least k*n
    for _ in range(30):
        c = np.zeros(n + n * n, dtype=np.int64)
        c[:n] = rng.integers(0, p, n)
        k = int((c[:n] != 0).sum())
        if k == 0:
            continue
        r = rank(np.tensordot(c, lats, axes=(0, 0)) % p, p)
        assert r >= k * n


def test_monomial_gadget_rejects_bad_input():
    red = R.get("monomial-gadget")
    sym = O.gen_tuple(2, 2, 3, _as_rng(1), kind="symmetric")
    with pytest.raises(ValueError):
        red.construct(sym)
    tiny = O.gen_tuple(1, 1, 3, _as_rng(1), kind="general")
    with pytest.raises(ValueError):
        red.construct(tiny)


def test_graph_altspace_is_elementary():
    red = R.get("graph-to-altspace")
    triangle = T.Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    G = red.construct(triangle, p=3)
    assert G.dims == (3, 3, 3)
    for k, (u, v) in enumerate(triangle.sorted_edges()):
        S = G.data[:, :, k]
        assert S[u, v] == 1 and S[v, u] == (-1) % 3
        assert np.count_nonzero(S) == 2


def test_conjugacy_space_layout():
    red = R.get("3ti-to-conjugacy")
    unital = R.get("3ti-to-conjugacy-unital")
    A = O.gen_tensor3(2, 3, 2, 3, _as_rng(4), nondegenerate=True)
    G = red.construct(A)
    l, n, m = A.dims
    assert G.dims == (l + n, l + n, m)
    for k in range(m):
        S = G.data[:, :, k]
        assert not S[:, :l].any() and not S[l:, :].any()
        assert np.array_equal(S[:l, l:], A.data[:, :, k])
    Gu = unital.construct(A)
    assert Gu.dims == (l + n, l + n, m + 1)
    marker = Gu.data[:, :, 0]
    assert np.array_equal(marker[:l, :l], np.eye(l, dtype=np.int64))
    assert np.count_nonzero(marker) == l


def test_adjoin_unit_layout():
    red = R.get("adjoin-unit")
    A = O.gen_tensor3(2, 2, 2, 5, _as_rng(6))
    G = red.construct(A)
    assert G.dims == (3, 3, 3)
    # the adjoined basis element multiplies as a two-sided unit
    C, p = G.data, G.p
    unit = G.dims[0] - 1 if np.array_equal(C[-1, -1] % p, _unit_vector(G)) else 0
    e = np.zeros(G.dims[0], dtype=np.int64)
    e[unit] = 1
    for x in np.eye(G.dims[0], dtype=np.int64):
        left = np.einsum("i,j,ijk->k", e, x, C) % p
        right = np.einsum("i,j,ijk->k", x, e, C) % p
        assert np.array_equal(left, x) and np.array_equal(right, x)


def _unit_vector(G):
    e = np.zeros(G.dims[0], dtype=np.int64)
    e[-1] = 1
    return e
