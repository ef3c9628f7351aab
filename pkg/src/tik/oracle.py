"""Brute-force reference deciders and instance generators.

Every decider here is exhaustive but budget-bounded: it returns a
verified witness, or None after covering the whole search space, or
raises BudgetExceeded — it never guesses and never samples.  First hit
wins under a fixed deterministic enumeration order, so repeated runs
agree.

The cost unit is "candidates examined" (group elements tried plus
solution-space vectors walked), charged against the budget as the
search proceeds.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import DEFAULT_BUDGET
from .matspace import (
    BudgetExceeded,
    _as_rng,
    all_gl_array,
    enumerate_gl,
    enumerate_monomial,
    inverse,
    is_invertible,
    order_gl,
    order_monomial,
    right_kernel,
    row_reduce,
    sample_gl,
    sample_monomial,
    solve_linear,
)
from .tensor import (
    ALGEBRA_ISO,
    CONJUGACY,
    EQUIVALENCE,
    FORM_EQ,
    GRAPH_ISO,
    ISOMETRY,
    MONCODE_EQ,
    PSEUDO_ISOMETRY,
    TI3,
    TI_D,
    TRILINEAR_EQ,
    Code,
    FormD,
    Graph,
    Tensor3,
    TensorD,
    Witness,
    act,
    identity_witness,
    is_nondegenerate,
    random_form,
)

_BATCH_CACHE_LIMIT = 2_000_000  # largest GL we materialize as one array


class _Meter:
    """Candidate counter enforcing the budget."""

    def __init__(self, budget, what: str):
        self.budget = DEFAULT_BUDGET if budget is None else budget
        self.used = 0
        self.what = what

    def spend(self, k: int):
        self.used += k
        if self.used > self.budget:
            raise BudgetExceeded(self.what, self.used, self.budget)

    def precheck(self, k: int):
        if self.used + k > self.budget:
            raise BudgetExceeded(self.what, self.used + k, self.budget)


def verify_witness(src, dst, w: Witness) -> bool:
    """True iff act(src, w) == dst; False (not an error) on mismatch."""
    try:
        img = act(src, w)
    except (ValueError, ZeroDivisionError):
        return False
    if isinstance(img, np.ndarray):
        return isinstance(dst, np.ndarray) and np.array_equal(img, dst)
    return img == dst


# ---------------------------------------------------------------------------
# shared machinery
# ---------------------------------------------------------------------------

def _coeff_block(lo: int, hi: int, d: int, p: int) -> np.ndarray:
    """Rows lo..hi-1 of F_p^d in base-p counting order (left digit high)."""
    idx = np.arange(lo, hi, dtype=np.int64)
    out = np.zeros((hi - lo, d), dtype=np.int64)
    for e in range(d):
        power = p ** (d - 1 - e)  # python int: may exceed int64 range
        if power < (1 << 62):
            out[:, e] = (idx // power) % p
    return out


def _kernel_walk(K: np.ndarray, p: int, meter: _Meter, skip_zero: bool = True,
                 chunk: int = 65536):
    """Yield every row-combination c @ K lazily, charging the meter."""
    d = K.shape[0]
    total = p ** d
    lo = 1 if skip_zero else 0
    while lo < total:
        hi = min(lo + chunk, total)
        meter.spend(hi - lo)
        X = _coeff_block(lo, hi, d, p) @ K % p
        yield from X
        lo = hi


def _affine_walk(x0: np.ndarray, K: np.ndarray, ncols: int, p: int, meter: _Meter,
                 chunk: int = 65536):
    """Yield x0 + K^t C over all C in F_p^(kd x ncols), lazily metered.

    x0 is a particular solution with independently adjustable columns
    and K the per-column kernel basis (rows), as solve_linear returns.
    """
    kd = K.shape[0]
    if kd == 0 or ncols == 0:
        meter.spend(1)
        yield x0 % p
        return
    total = p ** (kd * ncols)
    lo = 0
    while lo < total:
        hi = min(lo + chunk, total)
        meter.spend(hi - lo)
        for c in _coeff_block(lo, hi, kd * ncols, p):
            yield (x0 + K.T @ c.reshape(kd, ncols)) % p
        lo = hi


def _mix_solutions(src_cols: np.ndarray, dst_cols: np.ndarray, p: int, meter: _Meter):
    """Yield every invertible R with src_cols @ R == dst_cols.

    src_cols/dst_cols are (N, m) with tuple members flattened as
    columns; R mixes columns.  Walks the whole affine solution space.
    """
    x0, K = solve_linear(src_cols, dst_cols, p)
    if x0 is None:
        return
    for R in _affine_walk(x0, K, src_cols.shape[1], p, meter):
        if is_invertible(R, p):
            yield R


def _tuple_cols(data: np.ndarray) -> np.ndarray:
    """Frontal slices of an (l, n, m) array flattened as columns."""
    l, n, m = data.shape
    return data.reshape(l * n, m)


def _flat_ranks(t: Tensor3):
    l, n, m = t.dims
    return (
        row_reduce(t.data.reshape(l, n * m), t.p)[2],
        row_reduce(np.moveaxis(t.data, 1, 0).reshape(n, l * m), t.p)[2],
        row_reduce(np.moveaxis(t.data, 2, 0).reshape(m, l * n), t.p)[2],
    )


def _gl_batches(n: int, p: int, chunk: int = 4096):
    """Yield (count, (g, n, n) array) chunks covering GL(n, p) in order."""
    if n <= 4 and order_gl(n, p) <= _BATCH_CACHE_LIMIT:
        arr = all_gl_array(n, p)
        for lo in range(0, arr.shape[0], chunk):
            part = arr[lo : lo + chunk]
            yield part.shape[0], part
        return
    buf = []
    for M in enumerate_gl(n, p, budget=None):
        buf.append(M)
        if len(buf) == chunk:
            yield chunk, np.stack(buf)
            buf = []
    if buf:
        yield len(buf), np.stack(buf)


def _perm_matrix(perm, n: int) -> np.ndarray:
    P = np.zeros((n, n), dtype=np.int64)
    for i, j in enumerate(perm):
        P[i, int(j)] = 1
    return P


# ---------------------------------------------------------------------------
# three-directional equivalence of 3-way arrays
# ---------------------------------------------------------------------------

def _permute_back(mats_d, perm):
    """Per-axis matrices for the axes-permuted array -> original TI3."""
    orig = [mats_d[perm.index(j)] for j in range(3)]
    return orig[0].T, orig[1], orig[2]


def _ti3_join_strategy(A: Tensor3, B: Tensor3, axis: int, meter: _Meter):
    """Enumerate GL on one axis, solve the other two sides jointly.

    With the enumerated matrix Q on the middle axis, the remaining
    conditions P (A_k Q) = sum_t S[t,k] B_t are linear in (P, S) at
    once (S the inverse slice mix), so the full witness space per
    candidate is one kernel computation.
    """
    p = A.p
    others = [ax for ax in range(3) if ax != axis]
    perm = [others[0], axis, others[1]]
    Ad = np.transpose(A.data, perm)
    Bd = np.transpose(B.data, perm)
    l, n, m = Ad.shape
    eyel = np.eye(l, dtype=np.int64)
    eyem = np.eye(m, dtype=np.int64)
    # S-part coefficients are candidate-independent:
    # CS[k,i,j,t,k2] = -delta(k,k2) B'(i,j,t)
    CS = -(eyem[:, None, None, None, :] * Bd[None, :, :, :, None])
    CS = CS.reshape(m * l * n, m * m) % p
    for Q in enumerate_gl(n, p, budget=None):
        meter.spend(1)
        M = np.einsum("ajk,jb->abk", Ad, Q) % p  # M[.,.,k] = A'_k Q
        # CP[k,i,j,i2,a] = delta(i,i2) M[a,j,k]
        CP = eyel[None, :, None, :, None] * np.transpose(M, (2, 1, 0))[:, None, :, None, :]
        CP = CP.reshape(m * l * n, l * l)
        K = right_kernel(np.hstack([CP, CS]), p)
        if K.shape[0] == 0:
            continue
        for x in _kernel_walk(K, p, meter):
            P = x[: l * l].reshape(l, l)
            S = x[l * l :].reshape(m, m)
            if is_invertible(P, p) and is_invertible(S, p):
                mats_d = (P.T, Q, inverse(S, p))
                Pm, Qm, Rm = _permute_back(mats_d, perm)
                return Witness(TI3, (Pm, Qm, Rm), p)
    return None


def _ti3_double_strategy(A: Tensor3, B: Tensor3, axes, meter: _Meter):
    """Enumerate GL on two axes, solve the slice mix linearly."""
    p = A.p
    third = ({0, 1, 2} - set(axes)).pop()
    perm = [axes[0], axes[1], third]
    Ad = np.transpose(A.data, perm)
    Bd = np.transpose(B.data, perm)
    l, n, m = Ad.shape
    dst = _tuple_cols(Bd)
    for P in enumerate_gl(l, p, budget=None):
        PA = np.einsum("ia,ajk->ijk", P, Ad) % p
        for Q in enumerate_gl(n, p, budget=None):
            meter.spend(1)
            C = np.einsum("ijk,jb->ibk", PA, Q) % p
            for R in _mix_solutions(_tuple_cols(C), dst, p, meter):
                mats_d = (P.T, Q, R)
                Pm, Qm, Rm = _permute_back(mats_d, perm)
                return Witness(TI3, (Pm, Qm, Rm), p)
    return None


def decide_3ti_smart(A: Tensor3, B: Tensor3, budget=None, strategy: str = "auto"):
    """Search for (P, Q, R) with act(A, (P, Q, R)) == B.

    Enumerates invertible matrices on the cheapest direction(s) and
    recovers the remaining ones by linear algebra, instead of walking
    the full product of three general linear groups.

    strategy: "auto" picks the cheaper of enumerating one axis with a
    joint linear solve ("join") or enumerating two axes ("double").
    """
    if A.p != B.p or A.dims != B.dims:
        return None
    p = A.p
    if 0 in A.dims:
        return identity_witness(TI3, A.dims, p)
    if _flat_ranks(A) != _flat_ranks(B):
        return None
    meter = _Meter(budget, "three-directional equivalence search")
    l, n, m = A.dims
    sizes = A.dims

    plans = []
    if strategy in ("auto", "join"):
        for ax in range(3):
            rows = l * n * m
            cols = sum(sizes[o] ** 2 for o in range(3) if o != ax)
            if rows * cols > 4_000_000:
                continue
            ops = order_gl(sizes[ax], p) * rows * cols * min(rows, cols)
            plans.append(("join", ax, ops))
    if strategy in ("auto", "double"):
        for axes in itertools.permutations(range(3), 2):
            third = ({0, 1, 2} - set(axes)).pop()
            ops = (
                order_gl(sizes[axes[0]], p)
                * order_gl(sizes[axes[1]], p)
                * (l * n * m + sizes[third] ** 3)
            )
            plans.append(("double", axes, ops))
    if not plans:
        raise ValueError(f"unknown strategy {strategy!r}")
    kind, arg, _ = min(plans, key=lambda t: t[2])
    if kind == "join":
        meter.precheck(order_gl(sizes[arg], p))
        w = _ti3_join_strategy(A, B, arg, meter)
    else:
        meter.precheck(order_gl(sizes[arg[0]], p) * order_gl(sizes[arg[1]], p))
        w = _ti3_double_strategy(A, B, arg, meter)
    if w is not None:
        assert verify_witness(A, B, w)
    return w


# Short name kept for callers that do not care about the strategy.
decide_3ti = decide_3ti_smart


def decide_ti_d(A: TensorD, B: TensorD, budget=None):
    """Exhaustive d-directional equivalence: enumerate every axis but
    the largest, solve that last side linearly."""
    if A.p != B.p or A.dims != B.dims:
        return None
    p, d = A.p, A.d
    if 0 in A.dims:
        return identity_witness(TI_D, A.dims, p)
    for ax in range(d):
        ra = row_reduce(np.moveaxis(A.data, ax, 0).reshape(A.dims[ax], -1), p)[2]
        rb = row_reduce(np.moveaxis(B.data, ax, 0).reshape(B.dims[ax], -1), p)[2]
        if ra != rb:
            return None
    meter = _Meter(budget, "d-directional equivalence search")
    solved = max(range(d), key=lambda ax: order_gl(A.dims[ax], p))
    enum_axes = [ax for ax in range(d) if ax != solved]
    perm = enum_axes + [solved]
    Ad = np.transpose(A.data, perm)
    Bd = np.transpose(B.data, perm)
    n_last = Ad.shape[-1]
    Bf = Bd.reshape(-1, n_last)
    total = 1
    for ax in enum_axes:
        total *= order_gl(A.dims[ax], p)
    meter.precheck(total)
    for mats in itertools.product(
        *(enumerate_gl(Ad.shape[t], p, budget=None) for t in range(d - 1))
    ):
        meter.spend(1)
        X = Ad
        for M in mats:
            X = np.tensordot(X, M, axes=([0], [0])) % p
        # the un-contracted original last axis now sits first
        Xf = np.moveaxis(X, 0, -1).reshape(-1, n_last)
        for P in _mix_solutions(Xf, Bf, p, meter):
            full = list(mats) + [P]
            orig = [full[perm.index(j)] for j in range(d)]
            w = Witness(TI_D, tuple(orig), p)
            assert verify_witness(A, B, w)
            return w
    return None


def decide_equivalence(A: Tensor3, B: Tensor3, budget=None):
    """Exact two-sided tuple equivalence P A_k Q == B_k: one joint
    linear solve over (P, Q^{-1}), then walk the kernel."""
    if A.p != B.p or A.dims != B.dims:
        return None
    p = A.p
    l, n, m = A.dims
    if 0 in A.dims:
        return identity_witness(EQUIVALENCE, A.dims, p)
    meter = _Meter(budget, "tuple equivalence search")
    eyel = np.eye(l, dtype=np.int64)
    eyen = np.eye(n, dtype=np.int64)
    # rows (k,i,j); unknowns vec(P) then vec(Q') with Q' = Q^{-1}:
    # sum_a P[i,a] A_k[a,j] - sum_b B_k[i,b] Q'[b,j] = 0
    CP = eyel[None, :, None, :, None] * np.transpose(A.data, (2, 1, 0))[:, None, :, None, :]
    CQ = -(
        np.transpose(B.data, (2, 0, 1))[:, :, None, :, None]
        * eyen[None, None, :, None, :]
    )
    rows = m * l * n
    M = np.hstack([CP.reshape(rows, l * l), CQ.reshape(rows, n * n)]) % p
    K = right_kernel(M, p)
    if K.shape[0] == 0:
        return None
    for x in _kernel_walk(K, p, meter):
        P = x[: l * l].reshape(l, l)
        Qp = x[l * l :].reshape(n, n)
        if is_invertible(P, p) and is_invertible(Qp, p):
            w = Witness(EQUIVALENCE, (P, inverse(Qp, p)), p)
            if verify_witness(A, B, w):
                return w
    return None


# ---------------------------------------------------------------------------
# one-matrix searches over square tuples
# ---------------------------------------------------------------------------

def decide_isometry(A: Tensor3, B: Tensor3, budget=None, tag: str = ISOMETRY):
    """Find (P, R) with P^t A_k P mixed by R equal to B."""
    if A.p != B.p or A.dims != B.dims:
        return None
    p = A.p
    n, n2, m = A.dims
    if n != n2:
        raise ValueError("need square frontal slices")
    if 0 in A.dims:
        return identity_witness(tag, A.dims, p)
    if _flat_ranks(A) != _flat_ranks(B):
        return None
    meter = _Meter(budget, f"{tag} search")
    meter.precheck(order_gl(n, p))
    Afront = np.moveaxis(A.data, 2, 0)
    dst = _tuple_cols(B.data)
    ker = right_kernel(dst.T, p)  # rows orthogonal to the target span
    for count, batch in _gl_batches(n, p):
        meter.spend(count)
        T = np.einsum("gia,kij,gjb->gkab", batch, Afront, batch) % p
        if ker.shape[0]:
            flat = T.reshape(count, m, n * n)
            ok = ~np.any((flat @ ker.T) % p, axis=(1, 2))
        else:
            ok = np.ones(count, dtype=bool)
        for g in np.flatnonzero(ok):
            C = np.moveaxis(T[g], 0, 2)  # (n, n, m)
            for R in _mix_solutions(_tuple_cols(C), dst, p, meter):
                w = Witness(tag, (batch[g], R), p)
                if verify_witness(A, B, w):
                    return w
    return None


def decide_pseudo_isometry(A: Tensor3, B: Tensor3, budget=None):
    return decide_isometry(A, B, budget, tag=PSEUDO_ISOMETRY)


def decide_conjugacy(A: Tensor3, B: Tensor3, budget=None):
    """Find (P, R) with P^{-1} A_k P mixed by R equal to B.

    Uses the inverse-free form: P B_t must equal sum_k R[k,t] (A_k P),
    so each candidate still reduces to one linear mix-solve.
    """
    if A.p != B.p or A.dims != B.dims:
        return None
    p = A.p
    n, n2, m = A.dims
    if n != n2:
        raise ValueError("need square frontal slices")
    if 0 in A.dims:
        return identity_witness(CONJUGACY, A.dims, p)
    if _flat_ranks(A) != _flat_ranks(B):
        return None
    meter = _Meter(budget, "conjugacy search")
    meter.precheck(order_gl(n, p))
    Afront = np.moveaxis(A.data, 2, 0)
    Bfront = np.moveaxis(B.data, 2, 0)
    for count, batch in _gl_batches(n, p):
        meter.spend(count)
        E = np.einsum("kij,gjb->gkib", Afront, batch) % p  # A_k P
        D = np.einsum("gia,kab->gkib", batch, Bfront) % p  # P B_k
        for g in range(count):
            src = E[g].reshape(m, n * n).T
            dst = D[g].reshape(m, n * n).T
            for R in _mix_solutions(src, dst, p, meter):
                w = Witness(CONJUGACY, (batch[g], R), p)
                if verify_witness(A, B, w):
                    return w
    return None


def decide_algebra_iso(A: Tensor3, B: Tensor3, budget=None):
    """Find M with x -> Mx an algebra isomorphism: exhaustive over GL."""
    if A.p != B.p or A.dims != B.dims:
        return None
    p = A.p
    n = A.dims[0]
    if A.dims != (n, n, n):
        raise ValueError("structure tensors must be n x n x n")
    meter = _Meter(budget, "algebra isomorphism search")
    meter.precheck(order_gl(n, p))
    for M in enumerate_gl(n, p, budget=None):
        meter.spend(1)
        w = Witness(ALGEBRA_ISO, (M,), p)
        if act(A, w) == B:
            return w
    return None


def decide_trilinear_eq(A: Tensor3, B: Tensor3, budget=None):
    """Find P acting the same way on all three directions."""
    if A.p != B.p or A.dims != B.dims:
        return None
    p = A.p
    n = A.dims[0]
    if A.dims != (n, n, n):
        raise ValueError("need a cubical array")
    meter = _Meter(budget, "trilinear equivalence search")
    meter.precheck(order_gl(n, p))
    for P in enumerate_gl(n, p, budget=None):
        meter.spend(1)
        w = Witness(TRILINEAR_EQ, (P,), p)
        if act(A, w) == B:
            return w
    return None


def decide_form_eq(f: FormD, g: FormD, budget=None):
    """Find A with f(Ax) == g(x), exhaustive over GL(n, p)."""
    if (f.n, f.degree, f.p) != (g.n, g.degree, g.p):
        return None
    p, n = f.p, f.n
    if f.is_zero() != g.is_zero():
        return None
    meter = _Meter(budget, "form equivalence search")
    meter.precheck(order_gl(n, p))
    for A in enumerate_gl(n, p, budget=None):
        meter.spend(1)
        if f.substitute(A) == g:
            return Witness(FORM_EQ, (A,), p)
    return None


def decide_code_monomial(A: Code, B: Code, budget=None):
    """Find (Q, D, P) with Q A (D P) == B, exhaustive over monomials."""
    if A.p != B.p or A.dims != B.dims:
        return None
    p = A.p
    d, n = A.dims
    if row_reduce(A.gen, p)[2] != row_reduce(B.gen, p)[2]:
        return None
    meter = _Meter(budget, "monomial code equivalence search")
    meter.precheck(order_monomial(n, p))
    for mono in enumerate_monomial(n, p, budget=None):
        meter.spend(1)
        M = mono.to_matrix()
        AM = A.gen @ M % p
        x0, K = solve_linear(AM.T, B.gen.T, p)
        if x0 is None:
            continue
        Dm = np.diag(np.array(mono.scalars, dtype=np.int64))
        Pm = _perm_matrix(mono.perm, n)
        for Qt in _affine_walk(x0, K, d, p, meter):
            Q = Qt.T
            if not is_invertible(Q, p):
                continue
            w = Witness(MONCODE_EQ, (Q, Dm, Pm), p)
            if verify_witness(A, B, w):
                return w
    return None


def decide_graph_iso(G: Graph, H: Graph, budget=None):
    """Exhaustive relabeling search (vertex count factorial)."""
    if G.n != H.n or len(G.edges) != len(H.edges):
        return None
    degG = sorted(np.sum(G.adjacency(), axis=0).tolist())
    degH = sorted(np.sum(H.adjacency(), axis=0).tolist())
    if degG != degH:
        return None
    meter = _Meter(budget, "graph isomorphism search")
    fact = 1
    for i in range(2, G.n + 1):
        fact *= i
    meter.precheck(fact)
    target = H.edges
    for perm in itertools.permutations(range(G.n)):
        meter.spend(1)
        if all(
            (min(perm[u], perm[v]), max(perm[u], perm[v])) in target
            for u, v in G.edges
        ):
            return Witness(GRAPH_ISO, (_perm_matrix(perm, G.n),), 2)
    return None


# ---------------------------------------------------------------------------
# instance generation
# ---------------------------------------------------------------------------

def gen_tensor3(l: int, n: int, m: int, p: int, rng=None, nondegenerate: bool = False) -> Tensor3:
    rng = _as_rng(rng)
    for _ in range(1000):
        t = Tensor3(rng.integers(0, p, (l, n, m)), p)
        if not nondegenerate or is_nondegenerate(t):
            return t
    raise ValueError(
        f"no nondegenerate {l} x {n} x {m} array over GF({p}) found; "
        "the direction lengths are likely infeasible"
    )


def gen_tensord(dims, p: int, rng=None) -> TensorD:
    rng = _as_rng(rng)
    return TensorD(rng.integers(0, p, tuple(dims)), p)


def gen_tuple(n: int, m: int, p: int, rng=None, kind: str = "general") -> Tensor3:
    """m independent n x n frontal slices.

    kind: "general", "alternating" (zero diagonal, A = -A^t), or
    "symmetric".
    """
    rng = _as_rng(rng)
    caps = {
        "alternating": n * (n - 1) // 2,
        "symmetric": n * (n + 1) // 2,
        "general": n * n,
    }
    if m > caps[kind]:
        raise ValueError(f"cannot fit {m} independent {kind} slices at side {n}")
    for _ in range(1000):
        slices = []
        for _ in range(m):
            M = rng.integers(0, p, (n, n))
            if kind == "alternating":
                M = np.triu(M, 1)
                M = (M - M.T) % p
            elif kind == "symmetric":
                M = np.triu(M)
                M = (M + np.triu(M, 1).T) % p
            slices.append(M)
        flat = np.stack(slices).reshape(m, n * n)
        if row_reduce(flat, p)[2] == m:
            return Tensor3(np.moveaxis(np.stack(slices), 0, 2), p)
    raise ValueError("could not sample independent slices")


def gen_code(d: int, n: int, p: int, rng=None) -> Code:
    """Random full-row-rank d x n generator matrix."""
    if d > n:
        raise ValueError("code dimension exceeds length")
    rng = _as_rng(rng)
    for _ in range(1000):
        G = rng.integers(0, p, (d, n))
        if row_reduce(G, p)[2] == d:
            return Code(G, p)
    raise ValueError("could not sample a full-rank generator matrix")


def gen_graph(n: int, rng=None, edge_prob: float = 0.5) -> Graph:
    rng = _as_rng(rng)
    pairs = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < edge_prob
    ]
    return Graph.from_edges(n, pairs)


def gen_form(n: int, degree: int, p: int, rng=None) -> FormD:
    return random_form(n, degree, p, _as_rng(rng))


def random_witness(tag: str, dims, p: int, rng=None) -> Witness:
    """A random witness of the given tag for instances of size dims."""
    rng = _as_rng(rng)
    gl = lambda k: sample_gl(k, p, rng)
    if tag == TI3:
        l, n, m = dims
        return Witness(tag, (gl(l), gl(n), gl(m)), p)
    if tag == EQUIVALENCE:
        return Witness(tag, (gl(dims[0]), gl(dims[1])), p)
    if tag in (ISOMETRY, PSEUDO_ISOMETRY, CONJUGACY):
        return Witness(tag, (gl(dims[0]), gl(dims[2])), p)
    if tag in (ALGEBRA_ISO, TRILINEAR_EQ, FORM_EQ):
        return Witness(tag, (gl(dims[0]),), p)
    if tag == MONCODE_EQ:
        d, n = dims
        mono = sample_monomial(n, p, rng)
        return Witness(
            tag,
            (
                gl(d),
                np.diag(np.array(mono.scalars, dtype=np.int64)),
                _perm_matrix(mono.perm, n),
            ),
            p,
        )
    if tag == GRAPH_ISO:
        return Witness(tag, (_perm_matrix(rng.permutation(dims[0]), dims[0]),), 2)
    if tag == TI_D:
        return Witness(tag, tuple(gl(k) for k in dims), p)
    raise ValueError(tag)


_DECIDERS = {
    TI3: decide_3ti_smart,
    TI_D: decide_ti_d,
    EQUIVALENCE: decide_equivalence,
    ISOMETRY: decide_isometry,
    PSEUDO_ISOMETRY: decide_pseudo_isometry,
    CONJUGACY: decide_conjugacy,
    ALGEBRA_ISO: decide_algebra_iso,
    TRILINEAR_EQ: decide_trilinear_eq,
    FORM_EQ: decide_form_eq,
    MONCODE_EQ: decide_code_monomial,
    GRAPH_ISO: decide_graph_iso,
}


def decider_for(tag: str):
    return _DECIDERS[tag]


def gen_instance(tag: str, dims, p: int, seed=None, kind: str = None):
    """One random instance of the given problem, deterministic in seed.

    dims follows the instance's own dimension convention: tensor dims
    for the array problems, (d, n) for codes, (n, degree) for forms,
    (n,) or (n, e) for graphs.  kind overrides the per-problem default
    slice shape where that makes sense ("general", "alternating",
    "symmetric", "independent", "nondegenerate").
    """
    return _make_instance(tag, dims, p, _as_rng(seed), kind)


def _make_instance(tag: str, dims, p: int, rng, kind):
    if tag == TI3:
        l, n, m = dims
        return gen_tensor3(l, n, m, p, rng, nondegenerate=(kind == "nondegenerate"))
    if tag == TI_D:
        return gen_tensord(dims, p, rng)
    if tag in (EQUIVALENCE, CONJUGACY):
        l, n, m = dims
        if kind == "independent":
            if l != n:
                raise ValueError("independent-slice sampling needs square slices")
            return gen_tuple(n, m, p, rng)
        return gen_tensor3(l, n, m, p, rng)
    if tag in (ISOMETRY, PSEUDO_ISOMETRY):
        n, n2, m = dims
        if n != n2:
            raise ValueError("isometry instances need square slices")
        if kind == "alternating-any":
            # alternating slices with no independence requirement; the
            # only way to vary the slice-span dimension at sizes where
            # the independent-slice orbit is unique
            upper = np.triu(rng.integers(0, p, (m, n, n)), 1)
            slices = (upper - np.swapaxes(upper, 1, 2)) % p
            return Tensor3(np.moveaxis(slices, 0, 2), p)
        return gen_tuple(n, m, p, rng, kind=kind or "alternating")
    if tag in (ALGEBRA_ISO, TRILINEAR_EQ):
        n = dims[0]
        if any(d != n for d in dims):
            raise ValueError(f"{tag} instances are cubes")
        return gen_tensor3(n, n, n, p, rng)
    if tag == FORM_EQ:
        n, degree = dims
        return gen_form(n, degree, p, rng)
    if tag == MONCODE_EQ:
        d, n = dims
        return gen_code(d, n, p, rng)
    if tag == GRAPH_ISO:
        n = dims[0]
        if len(dims) > 1 and dims[1] is not None:
            pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
            if dims[1] > len(pairs):
                raise ValueError("more edges requested than vertex pairs")
            chosen = rng.choice(len(pairs), size=dims[1], replace=False)
            return Graph.from_edges(n, [pairs[i] for i in sorted(chosen)])
        return gen_graph(n, rng)
    raise ValueError(tag)


def gen_pair(tag: str, dims, p: int, seed=None, isomorphic: bool = True,
             budget=None, kind: str = None):
    """(A, B, w) with act(A, w) == B, or a certified-inequivalent pair.

    Equivalent pairs are built by pushing A through a random sampled
    witness, which is returned.  Inequivalent pairs are certified by the
    brute-force decider for the tag, so keep the dimensions small there;
    the decider's budget refusal propagates rather than being swallowed.
    Same seed, same bytes out.
    """
    rng = _as_rng(seed)
    A = _make_instance(tag, dims, p, rng, kind)
    if isomorphic:
        w = random_witness(tag, _witness_dims(tag, A), p, rng)
        return A, act(A, w), w
    decide = decider_for(tag)
    for _ in range(200):
        B = _make_instance(tag, dims, p, rng, kind)
        if decide(A, B, budget=budget) is None:
            return A, B, None
    raise ValueError("could not sample an inequivalent pair; orbit too large?")


def _witness_dims(tag: str, instance):
    """Dimension tuple random_witness expects for this instance."""
    if tag == FORM_EQ:
        return (instance.n, instance.degree)
    if tag == MONCODE_EQ:
        return instance.gen.shape
    if tag == GRAPH_ISO:
        return (instance.n,)
    return instance.dims
