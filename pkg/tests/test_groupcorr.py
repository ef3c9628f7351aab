import numpy as np
import pytest

from tik import oracle as O
from tik import tensor as T
from tik.groupcorr import (
    MatrixGroupGens,
    baer_alt,
    baer_group,
    enumerate_group,
    lie_closure,
    matrix_exp,
    matrix_log,
)
from tik.matspace import BudgetExceeded, _as_rng


def _random_unitriangular(n, p, rng):
    g = np.eye(n, dtype=np.int64)
    g[np.triu_indices(n, 1)] = rng.integers(0, p, n * (n - 1) // 2)
    return g


@pytest.mark.parametrize("p", [5, 7])
def test_log_exp_round_trip(p):
    rng = _as_rng(p)
    for n in (2, 3, 4):
        for _ in range(50):
            g = _random_unitriangular(n, p, rng)
            x = matrix_log(g, p)
            assert np.array_equal(matrix_exp(x, p), g)
            assert not np.any(np.diagonal(x))


def test_log_rejects_non_unipotent():
    with pytest.raises(ValueError):
        matrix_log(np.array([[2, 0], [0, 1]]), 5)


def test_log_needs_nilpotency_below_p():
    # (g - 1) has nilpotency index 4 > 3, so the series for log stops short
    g = np.eye(4, dtype=np.int64)
    g[0, 1] = g[1, 2] = g[2, 3] = 1
    with pytest.raises(ValueError) as info:
        matrix_log(g, 3)
    assert "nilpotency index" in str(info.value)
    # the same shape is fine one prime up
    assert matrix_log(g, 5) is not None


def test_baer_group_heisenberg():
    # n=2, m=1, the full alternating form: the Heisenberg group of order 27
    t = T.Tensor3(np.array([[[0], [1]], [[-1 % 3], [0]]]), 3)
    G = baer_group(t)
    assert G.n == 4 and G.num_generators == 3
    elems = enumerate_group(G)
    assert len(elems) == 27


@pytest.mark.parametrize("n,m,p", [(2, 1, 3), (3, 1, 3), (3, 2, 3), (2, 1, 5), (3, 1, 5)])
def test_baer_group_order_exponent_class(n, m, p):
    rng = _as_rng(n * 100 + m * 10 + p)
    t = O.gen_tuple(n, m, p, rng, kind="alternating")
    G = baer_group(t)
    elems = enumerate_group(G)
    assert len(elems) == p ** (n + m)
    eye = np.eye(G.n, dtype=np.int64)
    for g in elems:
        acc = eye
        for _ in range(p):
            acc = acc @ g % p
        assert np.array_equal(acc, eye), "exponent is not p"
    # class two: commutators are central (checked on generators x elements)
    def comm(a, b):
        from tik.matspace import inverse
        return inverse(a, p) @ inverse(b, p) @ a % p @ b % p

    gens = G.generators
    for a in gens:
        for b in gens:
            c = comm(a, b)
            for h in gens:
                assert np.array_equal(c @ h % p, h @ c % p)


def test_baer_group_rejects_gf2():
    t = O.gen_tuple(2, 1, 2, _as_rng(0), kind="alternating")
    with pytest.raises(ValueError) as info:
        baer_group(t)
    assert "odd" in str(info.value)


def test_baer_group_rejects_non_alternating():
    t = O.gen_tuple(2, 1, 3, _as_rng(0), kind="symmetric")
    with pytest.raises(ValueError):
        baer_group(t)


@pytest.mark.parametrize("n,m,p", [(2, 1, 3), (3, 2, 3), (2, 1, 5)])
def test_baer_round_trip_is_pseudo_isometric(n, m, p):
    rng = _as_rng(n + m + p)
    t = O.gen_tuple(n, m, p, rng, kind="alternating")
    back = baer_alt(baer_group(t))
    assert back.dims == t.dims
    w = O.decide_pseudo_isometry(t, back)
    assert w is not None and O.verify_witness(t, back, w)


def test_baer_alt_of_transported_group():
    # groups built from isometric tuples stay isomorphic; their recovered
    # tuples are pseudo-isometric to each other
    rng = _as_rng(77)
    t = O.gen_tuple(2, 1, 3, rng, kind="alternating")
    w = O.random_witness(T.PSEUDO_ISOMETRY, t.dims, 3, rng)
    u = T.act(t, w)
    a, b = baer_alt(baer_group(t)), baer_alt(baer_group(u))
    assert O.decide_pseudo_isometry(a, b) is not None


def test_lie_closure_heisenberg():
    e12 = np.zeros((3, 3), dtype=np.int64); e12[0, 1] = 1
    e23 = np.zeros((3, 3), dtype=np.int64); e23[1, 2] = 1
    L = lie_closure([e12, e23], 5)
    assert L.dim == 3  # e12, e23 and their bracket e13
    assert L.jacobi and L.alternating
    sc = L.sc.data
    # sc[0, 1] expresses [e12, e23] = e13 in the closure's own basis
    e13 = np.zeros((3, 3), dtype=np.int64); e13[0, 2] = 1
    assert np.array_equal(np.tensordot(sc[0, 1], L.basis, axes=(0, 0)) % 5, e13)
    assert np.array_equal(sc[1, 0], (-sc[0, 1]) % 5)
    assert not sc[0, 2].any() and not sc[2, 1].any()  # e13 is central


def test_enumerate_group_budget():
    t = O.gen_tuple(3, 3, 5, _as_rng(1), kind="alternating")
    G = baer_group(t)  # order 5^6 = 15625
    with pytest.raises(BudgetExceeded):
        enumerate_group(G, budget=100)


def test_group_gens_validation():
    with pytest.raises(ValueError) as info:
        MatrixGroupGens(2, 3, (np.eye(2, dtype=np.int64),
                               np.zeros((2, 2), dtype=np.int64)))
    assert "2" in str(info.value)  # the offending generator is named
    with pytest.raises(ValueError):
        MatrixGroupGens(2, 3, (np.zeros((2, 3), dtype=np.int64),))
