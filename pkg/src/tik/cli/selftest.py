"""Built-in verification battery behind ``tik selftest``.

Each check is a small self-contained exercise of one component:
reduction round-trips on random correctly-shaped inputs, oracle
plant/reject, gadget rank profiles, the group correspondence, the
oracle-guided isometry search, document round-trips, and byte-level
determinism.  ``quick`` runs every check once at small sizes; ``full``
widens the field and seed coverage and adds the slower consistency
checks.
"""

from __future__ import annotations

import numpy as np

from .. import oracle as O
from .. import reductions as R
from .. import tensor as T
from ..groupcorr import baer_alt, baer_group, matrix_exp, matrix_log
from ..matspace import _as_rng, rank
from ..reductions import sampling
from ..reductions.pathalgebra import (
    DiGraph,
    grigoriev_graph_algebra,
    grigoriev_reconstruct,
)
from ..s2d import find_isometry, individualization_gadget
from .formats import emit_instance, emit_witness, parse_instance


def run(level: str = "quick"):
    """Run the battery; returns a list of (name, ok, detail) triples."""
    checks = []

    def check(name, fn):
        try:
            fn()
            checks.append((name, True, ""))
        except Exception as e:  # noqa: BLE001 - battery reports, never raises
            checks.append((name, False, f"{type(e).__name__}: {e}"))

    if level == "quick":
        primes, seeds = (3,), (101,)
    else:
        primes, seeds = (2, 3, 5), (101, 202)

    for name in R.names():
        for p in primes:
            for seed in seeds:
                label = f"roundtrip/{name}/p{p}/s{seed}"
                check(label, lambda n=name, q=p, s=seed: _roundtrip(n, q, s))

    check("oracle/plant-and-reject", _oracle_plant_reject)
    check("gadget/lateral-bands", _gadget_bands)
    check("groups/baer-roundtrip", _baer_roundtrip)
    check("groups/log-exp", lambda: _log_exp(20 if level == "quick" else 100))
    check("s2d/planted", _s2d_planted)
    check("determinism/gen-pair", _determinism)
    check("formats/roundtrip", _formats_roundtrip)

    if level == "full":
        check("s2d/certified-negative", _s2d_negative)
        check("algebra/dti-associative", _dti_associative)
        check("grigoriev/reconstruct", _grigoriev_reconstruct)

    return checks


def _roundtrip(name, p, seed):
    red = R.get(name)
    A, B, w, params = sampling.source_pair(name, p, seed)
    tA = red.construct(A, **params)
    tB = red.construct(B, **params)
    fw = red.witness_forward(A, w, **params)
    assert O.verify_witness(tA, tB, fw), "forward witness failed"
    back = red.witness_recover(A, B, fw, **params)
    assert O.verify_witness(A, B, back), "recovered witness failed"


def _oracle_plant_reject():
    A, B, w = O.gen_pair(T.TI3, (2, 2, 2), 2, seed=5, isomorphic=True)
    found = O.decide_3ti_smart(A, B)
    assert found is not None and O.verify_witness(A, B, found)
    A, B, _ = O.gen_pair(T.TI3, (2, 2, 2), 2, seed=6, isomorphic=False)
    assert O.decide_3ti_smart(A, B) is None


def _gadget_bands():
    n, m, p = 3, 2, 3
    t = O.gen_tuple(n, m, p, _as_rng(7), kind="alternating")
    for i in (1, 2):
        G = individualization_gadget(t, i)
        side = G.dims[0]
        for j in range(side):
            r = rank(G.data[:, j, :], p)
            if j < i:
                assert 2 * n <= r < 3 * n, f"pinned lateral {j}: rank {r}"
            elif j < n:
                assert n <= r < 2 * n, f"guarded lateral {j}: rank {r}"
            else:
                assert 1 <= r < n, f"fresh lateral {j}: rank {r}"


def _baer_roundtrip():
    t = O.gen_tuple(2, 1, 3, _as_rng(11), kind="alternating")
    back = baer_alt(baer_group(t))
    w = O.decide_pseudo_isometry(t, back)
    assert w is not None, "round-trip tuple is not pseudo-isometric"


def _log_exp(count):
    rng = _as_rng(13)
    p, n = 5, 3
    for _ in range(count):
        g = np.eye(n, dtype=np.int64)
        g[np.triu_indices(n, 1)] = rng.integers(0, p, n * (n - 1) // 2)
        assert np.array_equal(matrix_exp(matrix_log(g, p), p), g)


def _s2d_planted():
    rng = _as_rng(17)
    A = O.gen_tuple(3, 2, 3, rng, kind="alternating")
    w = O.random_witness(T.ISOMETRY, A.dims, 3, rng)
    B = T.act(A, w)
    found = find_isometry(A, B)
    assert found is not None and O.verify_witness(A, B, found)


def _s2d_negative():
    A, B, _ = O.gen_pair(T.ISOMETRY, (3, 3, 2), 2, seed=23, isomorphic=False,
                         kind="alternating-any")
    assert find_isometry(A, B) is None


def _determinism():
    one = O.gen_pair(T.TI3, (2, 3, 2), 3, seed=29, isomorphic=True)
    two = O.gen_pair(T.TI3, (2, 3, 2), 3, seed=29, isomorphic=True)
    texts = [emit_instance("tensor3", x) for x in (one[0], two[0], one[1], two[1])]
    assert texts[0] == texts[1] and texts[2] == texts[3]
    assert emit_witness(one[2]) == emit_witness(two[2])


def _formats_roundtrip():
    rng = _as_rng(31)
    docs = [
        ("tensor3", O.gen_tensor3(2, 3, 2, 3, rng)),
        ("tensord", O.gen_tensord((2, 1, 2), 3, rng)),
        ("matspace", O.gen_tuple(2, 2, 3, rng, kind="general")),
        ("altspace", O.gen_tuple(3, 2, 3, rng, kind="alternating")),
        ("symspace", O.gen_tuple(2, 2, 3, rng, kind="symmetric")),
        ("code", O.gen_code(2, 3, 3, rng)),
        ("graph", O.gen_graph(4, rng)),
        ("algebra", O.gen_tensor3(2, 2, 2, 5, rng)),
        ("formd", O.gen_form(2, 3, 3, rng)),
        ("group", baer_group(O.gen_tuple(2, 1, 3, rng, kind="alternating"))),
    ]
    for head, obj in docs:
        text = emit_instance(head, obj)
        head2, parsed = parse_instance(text)
        assert head2 == head, f"{head} parsed as {head2}"
        assert emit_instance(head, parsed) == text, f"{head} is not a fixed point"


def _dti_associative():
    from ..reductions.pathalgebra import dti_to_algebra

    t = O.gen_tensord((2, 2, 2), 3, _as_rng(37))
    alg = dti_to_algebra(t)
    C, p, N = alg.data, alg.p, alg.dims[0]
    for i in range(N):
        for j in range(N):
            ij = C[i, j]
            for k in range(N):
                lhs = np.tensordot(ij, C[:, k, :], axes=(0, 0)) % p
                jk = C[j, k]
                rhs = np.tensordot(jk, C[i], axes=(0, 0)) % p
                assert np.array_equal(lhs, rhs), f"({i}{j}){k} != {i}({j}{k})"


def _grigoriev_reconstruct():
    for a in range(3):
        for b in range(3):
            D = DiGraph.from_matrix([[0, a], [b, 0]])
            alg = grigoriev_graph_algebra(D, 3)
            assert grigoriev_reconstruct(alg, 2) == D
