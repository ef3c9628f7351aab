"""The acceptance battery: seven numbered criteria, one test and one
printed [PASS]/[FAIL] line each (visible with `pytest -s` or on failure).

1. witness round-trips, 200 random pairs per registered reduction
2. exhaustive iff-soundness on the four brute-force-feasible cases
3. gadget lateral-rank profiles, 100 instances + 100 combinations each
4. path-algebra dimension formula, associativity, digraph reconstruction
5. group correspondence: order/exponent/class by full enumeration,
   round trips certified by brute force, log/exp identities
6. oracle-guided isometry search end to end, query-size bound, < 5 min
7. byte-level determinism of every seeded artifact
"""

import itertools
import json
import time

import numpy as np

from tik import oracle as O
from tik import reductions as R
from tik import tensor as T
from tik.cli.formats import emit_instance, emit_witness
from tik.cli.main import main as cli_main
from tik.cli.selftest import run as selftest_run
from tik.groupcorr import (
    baer_alt,
    baer_group,
    enumerate_group,
    matrix_exp,
    matrix_log,
)
from tik.matspace import (
    _as_rng,
    enumerate_gl,
    is_alternating,
    is_symmetric,
    permutation_matrix,
    rank,
    row_reduce,
    sample_gl,
)
from tik.reductions import sampling
from tik.reductions.pathalgebra import (
    DiGraph,
    dti_to_algebra,
    grigoriev_graph_algebra,
    grigoriev_reconstruct,
)
from tik.s2d import find_isometry, gadget_side, individualization_gadget, query_side_bound
from tik.tensor import FormD


def _report(name: str, ok: bool, detail: str = ""):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f" ({detail})" if detail else "")
    print(line)
    assert ok, line


def _span_key(t: T.Tensor3):
    n1, n2, m = t.dims
    flat = np.moveaxis(t.data, 2, 0).reshape(m, n1 * n2)
    rr, _, rk, _ = row_reduce(flat, t.p)
    return rk, rr[:rk].tobytes()


# --- 1: witness round-trips -------------------------------------------------

def test_criterion_1_witness_round_trips():
    trials = 200
    primes = (2, 3, 5)
    failures = []
    for name in sampling.sampled_names():
        red = R.get(name)
        for trial in range(trials):
            p = primes[trial % len(primes)]
            A, B, w, params = sampling.source_pair(name, p, 7919 * trial + p)
            tA = red.construct(A, **params)
            tB = red.construct(B, **params)
            fw = red.witness_forward(A, w, **params)
            if not O.verify_witness(tA, tB, fw):
                failures.append((name, trial, p, "forward"))
                continue
            back = red.witness_recover(A, B, fw, **params)
            if not O.verify_witness(A, B, back):
                failures.append((name, trial, p, "recover"))
    _report(
        "criterion 1: 200/200 witness round-trips on each of "
        f"{len(sampling.sampled_names())} reductions",
        not failures,
        f"violations: {failures[:5]}" if failures else "all exact",
    )


# --- 2: exhaustive iff-soundness --------------------------------------------

def _all_cubes_gf2():
    for bits in itertools.product((0, 1), repeat=8):
        yield T.Tensor3(np.array(bits, dtype=np.int64).reshape(2, 2, 2), 2)


def test_criterion_2a_conjugacy_exhaustive():
    red = R.get("3ti-to-conjugacy")
    nondeg = []
    for t in _all_cubes_gf2():
        core, _ = T.nondegenerate_core(t)
        if core.dims == (2, 2, 2):
            nondeg.append(t)
    # classify by the 3TI brute decider, keeping each witness to its
    # class representative
    reps, labels, to_rep = [], [], []
    for t in nondeg:
        for idx, r in enumerate(reps):
            w = O.decide_3ti(t, r)
            if w is not None:
                labels.append(idx)
                to_rep.append(w)
                break
        else:
            labels.append(len(reps))
            to_rep.append(T.identity_witness(T.TI3, t.dims, 2))
            reps.append(t)
    ok = len(nondeg) == 174 and len(reps) == 3
    # every member is conjugate to its representative's image via the
    # forward witness — certifies the positive side of the iff for all
    # same-class pairs by composition
    for t, lab, w in zip(nondeg, labels, to_rep):
        fw = red.witness_forward(t, w)
        ok = ok and O.verify_witness(red.construct(t), red.construct(reps[lab]), fw)
    # representatives pairwise non-equivalent on both sides; the
    # conjugacy side enumerates all of GL(4,2)
    for i, j in itertools.combinations(range(len(reps)), 2):
        ok = ok and O.decide_3ti(reps[i], reps[j]) is None
        ok = ok and O.decide_conjugacy(red.construct(reps[i]),
                                       red.construct(reps[j])) is None
    # spot-check the label-derived answers against direct decisions
    rng = _as_rng(2024)
    for a, b in zip(rng.choice(len(nondeg), 8), rng.choice(len(nondeg), 8)):
        direct = O.decide_conjugacy(red.construct(nondeg[a]),
                                    red.construct(nondeg[b]))
        ok = ok and (direct is not None) == (labels[a] == labels[b])
    _report(
        "criterion 2a: conjugacy iff 3TI on all 174^2 nondegenerate "
        "2x2x2 GF(2) pairs (3 classes, cross-class certified by GL(4,2) "
        "enumeration)",
        ok,
    )


def test_criterion_2b_moncode_exhaustive():
    red = R.get("moncode-to-3ti")
    codes = [T.Code(np.array(g), 2) for g in
             (np.stack(pair) for pair in itertools.permutations(
                 itertools.product((0, 1), repeat=2), 2))
             if rank(np.stack(g), 2) == 2]
    ok = len(codes) == 6
    for A, B in itertools.product(codes, repeat=2):
        oracle_w = O.decide_code_monomial(A, B)
        w3 = O.decide_3ti(red.construct(A), red.construct(B))
        ok = ok and (oracle_w is not None) == (w3 is not None)
        if w3 is not None:
            back = red.witness_recover(A, B, w3)
            ok = ok and O.verify_witness(A, B, back)
    _report(
        "criterion 2b: monomial code equivalence iff 3TI of the "
        "constructed arrays on all 36 rank-2 2x2 GF(2) pairs, witnesses "
        "recovered",
        ok,
    )


def test_criterion_2c_cubic_exhaustive():
    p, d = 3, 4
    red = R.get("cubic-to-degree-d")
    monos = [e for e in itertools.product(range(4), repeat=2) if sum(e) == 3]
    forms = [FormD.from_dict(2, 3, dict(zip(monos, v)), p)
             for v in itertools.product(range(p), repeat=4)]
    gl2 = list(enumerate_gl(2, p))
    src_label, n_src = {}, 0
    for f in forms:
        if f.coeffs in src_label:
            continue
        for A in gl2:
            src_label.setdefault(f.substitute(A).coeffs, n_src)
        n_src += 1
    outs = [red.construct(f, d=d) for f in forms]
    # GL(3,3) orbits of the outputs by closure under a generating set
    gens = [np.array(g, dtype=np.int64) for g in
            ([[2, 0, 0], [0, 1, 0], [0, 0, 1]],
             [[1, 1, 0], [0, 1, 0], [0, 0, 1]],
             [[0, 1, 0], [0, 0, 1], [1, 0, 0]])]
    tgt_label, n_tgt = {}, 0
    for f in outs:
        if f.coeffs in tgt_label:
            continue
        frontier, seen = [f], {f.coeffs}
        while frontier:
            nxt = []
            for g in frontier:
                for A in gens:
                    h = g.substitute(A)
                    if h.coeffs not in seen:
                        seen.add(h.coeffs)
                        nxt.append(h)
            frontier = nxt
        for key in seen:
            tgt_label[key] = n_tgt
        n_tgt += 1
    src = [src_label[f.coeffs] for f in forms]
    tgt = [tgt_label[f.coeffs] for f in outs]
    ok = n_src == n_tgt == 6
    for i in range(len(forms)):
        for j in range(len(forms)):
            if (src[i] == src[j]) != (tgt[i] == tgt[j]):
                ok = False
    _report(
        "criterion 2c: degree-3/degree-4 equivalence agree on all 81^2 "
        "binary cubic pairs over GF(3) (6 orbits on both sides)",
        ok,
    )


def _graphs_on(n):
    pairs = list(itertools.combinations(range(n), 2))
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        yield T.Graph.from_edges(n, tuple(e for e, b in zip(pairs, bits) if b))


def test_criterion_2d_graph_exhaustive():
    g2a, mono = R.get("graph-to-altspace"), R.get("monomial-gadget")
    ok = True
    checked_pairs = 0
    for n in (2, 3, 4):
        graphs = list(_graphs_on(n))
        keys, acted = [], []
        for G in graphs:
            alt = g2a.construct(G)
            gt = mono.construct(alt)
            keys.append(_span_key(gt))
            per_sigma = set()
            for sigma in itertools.permutations(range(n)):
                P = permutation_matrix(sigma, 2)
                gw = mono.witness_forward(
                    alt, g2a.witness_forward(G, T.Witness(T.GRAPH_ISO, (P,), 2)))
                per_sigma.add(_span_key(T.act(gt, gw)))
            acted.append(per_sigma)
        for a, G in enumerate(graphs):
            for b, H in enumerate(graphs):
                truth = O.decide_graph_iso(G, H) is not None
                ok = ok and (keys[b] in acted[a]) == truth
                checked_pairs += 1
    # recover closes the loop on a sample of isomorphic pairs
    rng = _as_rng(7)
    done = 0
    for G in _graphs_on(4):
        if done >= 10 or not G.edges:
            continue
        sigma = tuple(rng.permutation(4))
        w = T.Witness(T.GRAPH_ISO, (permutation_matrix(sigma, 2),), 2)
        H = T.act(G, w)
        altG, altH = g2a.construct(G), g2a.construct(H)
        fw = mono.witness_forward(altG, g2a.witness_forward(G, w))
        mid = mono.witness_recover(altG, altH, fw)
        back = g2a.witness_recover(G, H, mid)
        ok = ok and O.verify_witness(G, H, back)
        done += 1
    _report(
        "criterion 2d: gadget-space isometry iff graph isomorphism on "
        f"all same-order pairs of graphs with <= 4 vertices "
        f"({checked_pairs} pairs vs permutation brute force)",
        ok,
    )


# --- 3: gadget rank profiles -------------------------------------------------

_FEASIBLE_3TI_DIMS = [
    (1, 1, 1), (1, 2, 2), (2, 2, 1), (2, 2, 2), (2, 3, 2), (3, 2, 2),
    (2, 2, 3), (3, 3, 1), (3, 3, 2), (1, 3, 3), (3, 1, 3), (2, 3, 3),
    (3, 3, 3),
]


def _check_isometry_gadget(red_name, checker, rng, p):
    red = R.get(red_name)
    l, n, m = _FEASIBLE_3TI_DIMS[int(rng.integers(0, len(_FEASIBLE_3TI_DIMS)))]
    A = O.gen_tensor3(l, n, m, p, rng, nondegenerate=True)
    G = red.construct(A)
    le, ne = (n, l) if l > n else (l, n)
    side = le + 7 * ne + 3
    if G.dims != (side, side, m + le * (2 * ne + 1) + ne * (4 * ne + 2)):
        return False
    if not all(checker(G.data[:, :, k], p) for k in range(G.dims[2])):
        return False
    lats = np.stack([G.data[i, :, :] for i in range(side)])
    for i in range(side):
        r = rank(lats[i], p)
        if i < le:
            if not (2 * ne + 1 <= r <= 3 * ne + 1):
                return False
        elif i < le + ne:
            if not (4 * ne + 2 <= r <= 5 * ne + 2):
                return False
        elif r > ne:
            return False
    # one random nonzero combination per instance
    c = rng.integers(0, p, side)
    if not c.any():
        c[int(rng.integers(0, side))] = 1
    r = rank(np.tensordot(c, lats, axes=(0, 0)) % p, p)
    if c[le:le + ne].any():
        return r >= 4 * ne + 2
    if c[:le].any():
        return r >= 2 * ne + 1
    return r <= le + ne < 2 * ne + 1


def _check_moncode_gadget(rng, p):
    red = R.get("moncode-to-3ti")
    d = int(rng.integers(2, 4))
    n = int(rng.integers(d, 4))
    code = O.gen_code(d, n, p, rng)
    while rank(code.gen, p) < d:
        code = O.gen_code(d, n, p, rng)
    G = red.construct(code)
    if G.dims != (d + 2 * n, n, 1 + 2 * n):
        return False
    lats = np.stack([G.data[:, j, :] for j in range(n)])
    if any(rank(lats[j], p) not in (2, 3) for j in range(n)):
        return False
    # a combination of >= 2 lateral slices with all-nonzero coefficients
    if n >= 2:
        k = int(rng.integers(2, n + 1))
        rows = rng.choice(n, size=k, replace=False)
        c = np.zeros(n, dtype=np.int64)
        c[rows] = rng.integers(1, p, k)
        if rank(np.tensordot(c, lats, axes=(0, 0)) % p, p) < 4:
            return False
    return True


def _check_monomial_gadget(rng, p):
    red = R.get("monomial-gadget")
    n = int(rng.integers(2, 4))
    m = int(rng.integers(1, n * (n - 1) // 2 + 1))
    A = O.gen_tuple(n, m, p, rng, kind="alternating")
    G = red.construct(A)
    if G.dims != (n + n * n, n + n * n, m + n * n):
        return False
    side = G.dims[0]
    lats = np.stack([G.data[i, :, :] for i in range(side)])
    for i in range(side):
        r = rank(lats[i], p)
        if i < n:
            if not (n <= r <= 2 * n - 1):
                return False
        elif r != 1:
            return False
    # combinations touching k original rows keep rank >= k*n
    k = int(rng.integers(1, n + 1))
    c = np.zeros(side, dtype=np.int64)
    c[rng.choice(n, size=k, replace=False)] = rng.integers(1, p, k)
    return rank(np.tensordot(c, lats, axes=(0, 0)) % p, p) >= k * n


def _check_individualization_gadget(rng, p):
    n = int(rng.integers(3, 5))
    m = int(rng.integers(1, 3))
    i = int(rng.integers(1, n))
    A = O.gen_tuple(n, m, p, rng, kind="alternating")
    G = individualization_gadget(A, i)
    side = gadget_side(n, i)
    if G.dims[0] != side:
        return False
    lats = np.stack([G.data[r, :, :] for r in range(side)])
    for r in range(side):
        rk = rank(lats[r], p)
        if r < i:
            if not (2 * n <= rk < 3 * n):
                return False
        elif r < n:
            if not (n <= rk < 2 * n):
                return False
        elif not (1 <= rk < n):
            return False
    c = rng.integers(0, p, side)
    if not c.any():
        c[0] = 1
    rk = rank(np.tensordot(c, lats, axes=(0, 0)) % p, p)
    touched = np.flatnonzero(c)
    if (touched < i).any():
        return rk >= 2 * n
    if (touched < n).any():
        return rk >= n
    return 1 <= rk <= n


def test_criterion_3_gadget_rank_profiles():
    primes = (2, 3, 5)
    checks = {
        "alt-isometry": lambda rng, p: _check_isometry_gadget(
            "3ti-to-alt-isometry", is_alternating, rng, p),
        "sym-isometry": lambda rng, p: _check_isometry_gadget(
            "3ti-to-sym-isometry", is_symmetric, rng, p),
        "moncode": _check_moncode_gadget,
        "monomial": _check_monomial_gadget,
        "individualization": _check_individualization_gadget,
    }
    violations = []
    for cname, check in checks.items():
        for trial in range(100):
            rng = _as_rng(100000 + 37 * trial)
            if not check(rng, primes[trial % 3]):
                violations.append((cname, trial))
    _report(
        "criterion 3: lateral-rank bands and combination bounds on "
        "100 instances + 100 random combinations per gadget construction",
        not violations,
        f"violations: {violations[:5]}" if violations else "zero violations",
    )


# --- 4: path-algebra checks ---------------------------------------------------

def _closed_formula(dims):
    d = len(dims)
    chains = 0
    for s in range(d - 1):
        for L in range(1, d - s):
            block = 1
            for t in range(s, s + L):
                block *= dims[t]
            chains += block
    return d + chains + dims[-1]


def _associative(alg):
    C, p, N = alg.data, alg.p, alg.dims[0]
    for i in range(N):
        Ci = C[i]
        for j in range(N):
            left = np.tensordot(C[i, j], C, axes=(0, 0)) % p
            right = C[j] @ Ci % p
            if not np.array_equal(left, right):
                return False
    return True


def test_criterion_4_path_algebra():
    primes = (2, 3, 5)
    ok = True
    for count, dims in enumerate(itertools.product((1, 2, 3), repeat=3)):
        p = primes[count % 3]
        t = O.gen_tensord(dims, p, _as_rng(count))
        alg = dti_to_algebra(t)
        ok = ok and alg.dims[0] == _closed_formula(dims) and _associative(alg)
    t4 = O.gen_tensord((2, 2, 2, 2), 5, _as_rng(99))
    alg4 = dti_to_algebra(t4)
    ok = ok and alg4.dims[0] == _closed_formula((2, 2, 2, 2)) == 28
    ok = ok and _associative(alg4)
    digraphs = 0
    for n in (1, 2, 3):
        cells = [(i, j) for i in range(n) for j in range(n) if i != j]
        for bits in itertools.product((0, 1), repeat=len(cells)):
            M = np.zeros((n, n), dtype=np.int64)
            for (i, j), b in zip(cells, bits):
                M[i, j] = b
            D = DiGraph.from_matrix(M)
            p = primes[digraphs % 3]
            back = grigoriev_reconstruct(grigoriev_graph_algebra(D, p), n)
            ok = ok and back == D
            digraphs += 1
    _report(
        "criterion 4: dimension formula on all dims <= (3,3,3) and "
        "(2,2,2,2), associativity on all basis triples, digraph "
        f"reconstruction identity on all {digraphs} digraphs <= 3 vertices",
        ok,
    )


# --- 5: group correspondence ---------------------------------------------------

def _batched_unitriangular_inverse(E, p):
    n = E.shape[1]
    eye = np.eye(n, dtype=np.int64)
    nil = (E - eye) % p
    inv = np.broadcast_to(eye, E.shape).copy()
    term = inv.copy()
    for k in range(1, n):
        term = np.matmul(term, nil) % p
        inv = (inv + (-1) ** k * term) % p
    return inv


def _group_laws_by_enumeration(t):
    p = t.p
    n, _, m = t.dims
    G = baer_group(t)
    E = np.stack(enumerate_group(G))
    if len(E) != p ** (n + m):
        return False
    eye = np.broadcast_to(np.eye(G.n, dtype=np.int64), E.shape)
    acc = E.copy()
    for _ in range(p - 1):
        acc = np.matmul(acc, E) % p
    if not np.array_equal(acc, eye % p):
        return False
    inv = _batched_unitriangular_inverse(E, p)
    gens = np.stack(G.generators)
    N = len(E)
    chunk = max(1, 2 ** 21 // N)
    for s in range(0, N, chunk):
        x = E[s:s + chunk][:, None]
        xinv = inv[s:s + chunk][:, None]
        comm = np.matmul(np.matmul(np.matmul(xinv, inv[None]) % p, x) % p,
                         E[None]) % p
        for g in gens:
            if not np.array_equal(np.matmul(comm, g) % p,
                                  np.matmul(g, comm) % p):
                return False
    return True


def test_criterion_5_group_correspondence():
    ok = True
    for p in (3, 5):
        for n, m in ((2, 1), (3, 1), (3, 2), (4, 1)):
            t = O.gen_tuple(n, m, p, _as_rng(n * 17 + m * 5 + p),
                            kind="alternating")
            ok = ok and _group_laws_by_enumeration(t)
    round_trips = [(2, 1, 3), (3, 1, 3), (3, 2, 3), (3, 3, 3),
                   (2, 1, 5), (3, 1, 5), (3, 2, 5)]
    for n, m, p in round_trips:
        t = O.gen_tuple(n, m, p, _as_rng(n + 7 * m + p), kind="alternating")
        back = baer_alt(baer_group(t))
        w = O.decide_pseudo_isometry(t, back)
        ok = ok and w is not None and O.verify_witness(t, back, w)
    for p in (5, 7):
        rng = _as_rng(p)
        for trial in range(1000):
            size = 2 + trial % 3
            g = np.eye(size, dtype=np.int64)
            g[np.triu_indices(size, 1)] = rng.integers(0, p, size * (size - 1) // 2)
            if not np.array_equal(matrix_exp(matrix_log(g, p), p), g):
                ok = False
    _report(
        "criterion 5: order p^(n+m)/exponent p/class 2 by full enumeration "
        "at n+m <= 5 over GF(3) and GF(5); group->tuple->group round trips "
        "brute-certified at n <= 3; exp(log) identity on 1000 random "
        "unitriangular matrices per field",
        ok,
    )


# --- 6: search-to-decision end to end -----------------------------------------

def test_criterion_6_search_to_decision():
    t0 = time.time()
    n, m, p = 4, 2, 3
    bound = query_side_bound(n)
    ok = True
    for trial in range(50):
        rng = _as_rng(5000 + trial)
        A = O.gen_tuple(n, m, p, rng, kind="alternating")
        B = T.act(A, O.random_witness(T.ISOMETRY, A.dims, p, rng))
        stats = {}
        w = find_isometry(A, B, stats=stats)
        ok = ok and w is not None and O.verify_witness(A, B, w)
        ok = ok and all(side <= bound for _, side in stats["queries"])
    negatives = 0
    for seed in range(20):
        A, B, _ = O.gen_pair(T.ISOMETRY, (3, 3, 2), 2, seed, isomorphic=False,
                             kind="alternating-any")
        stats = {}
        ok = ok and find_isometry(A, B, stats=stats) is None
        ok = ok and all(side <= query_side_bound(3)
                        for _, side in stats["queries"])
        negatives += 1
    elapsed = time.time() - t0
    ok = ok and negatives == 20 and elapsed < 300
    _report(
        "criterion 6: verified isometries on 50/50 planted pairs (n=4, m=2, "
        "GF(3)), None on 20/20 certified negatives (n=3, GF(2)), query sides "
        "<= 2n^2+2n",
        ok,
        f"{elapsed:.0f}s < 300s",
    )


# --- 7: determinism -------------------------------------------------------------

def _seeded_artifacts():
    from tik.cli.main import header_for
    docs = []
    for name in sampling.sampled_names():
        A, B, w, params = sampling.source_pair(name, 3, 4242)
        red = R.get(name)
        tA = red.construct(A, **params)
        fw = red.witness_forward(A, w, **params)
        docs.append(emit_instance(header_for(w.tag, A), A))
        docs.append(emit_instance(header_for(w.tag, B), B))
        docs.append(emit_witness(w))
        docs.append(emit_instance(header_for(fw.tag, tA), tA))
        docs.append(emit_witness(fw))
    return "".join(docs)


def _cli_transcript(tmp_path, tag):
    base = tmp_path / tag
    base.mkdir()
    paths = {k: str(base / f"{k}.txt") for k in
             ("inst", "red", "w", "tw", "rw", "b")}
    lines = []

    def go(*argv):
        import io
        import contextlib
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = cli_main(list(argv))
        out = buf.getvalue().replace(str(base), "BASE")
        lines.append(f"exit={code} {out}")

    go("gen", "--problem", "3ti", "--dims", "2,2,2", "--p", "3", "--seed", "6",
       "--kind", "nondegenerate", "--out", paths["inst"])
    go("reduce", "--reduction", "3ti-to-conjugacy", "--in", paths["inst"],
       "--out", paths["red"])
    go("decide", "--problem", "3ti", "--a", paths["inst"], "--b", paths["inst"],
       "--witness-out", paths["w"])
    go("witness-map", "--reduction", "3ti-to-conjugacy", "--in", paths["inst"],
       "--witness", paths["w"], "--out", paths["tw"])
    go("witness-recover", "--reduction", "3ti-to-conjugacy", "--a", paths["inst"],
       "--b", paths["inst"], "--witness", paths["tw"], "--out", paths["rw"])
    go("verify", "--a", paths["inst"], "--b", paths["inst"],
       "--witness", paths["rw"])
    artifacts = b"".join(open(paths[k], "rb").read() for k in
                         ("inst", "red", "w", "tw", "rw"))
    return "\n".join(lines).encode() + artifacts


def test_criterion_7_determinism(tmp_path):
    ok = _seeded_artifacts() == _seeded_artifacts()
    ok = ok and _cli_transcript(tmp_path, "one") == _cli_transcript(tmp_path, "two")
    first = [(n, k, d) for n, k, d in selftest_run("quick")]
    second = [(n, k, d) for n, k, d in selftest_run("quick")]
    ok = ok and first == second and all(passed for _, passed, _ in first)
    _report(
        "criterion 7: byte-identical artifacts and logs on rerun — sampled "
        "documents for every reduction, a full CLI transcript, and the "
        "quick selftest battery",
        ok,
    )
