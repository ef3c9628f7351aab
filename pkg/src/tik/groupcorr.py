"""Class-2 exponent-p matrix groups <-> alternating matrix tuples.

A tuple of alternating forms A_1..A_m on F_p^n (p odd) determines a
group of unitriangular matrices in GL(1 + n + m, p): coordinates
(v, w) in F^n x F^m multiply by

    (v, w) * (v', w') = (v + v', w + w' + (v^t A_k v')_k),

which is a group of order p^(n+m), exponent p, class <= 2 whose
commutator map is the tuple (up to a factor of 2 absorbed by a basis
change on the centre).  Conversely, a unitriangular group of exponent p
and class <= 2 yields an alternating tuple on its abelianization via
matrix logarithms: at class 2 the truncated Baker-Campbell-Hausdorff
identities are exact,

    log(gh) = log g + log h + [log g, log h]/2,
    [g, h]  = exp([log g, log h]),

so the commutator map becomes honest linear algebra on the logs.  The
two directions invert each other up to pseudo-isometry of the tuple.

Everything here is exact arithmetic mod p; group enumeration is plain
breadth-first closure (the intended inputs have order at most p^8), and
no polycyclic machinery is involved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import DEFAULT_BUDGET
from .matspace import (
    BudgetExceeded,
    as_array,
    inverse,
    is_alternating,
    is_invertible,
    row_reduce,
    solve_linear,
)
from .tensor import Tensor3


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class MatrixGroupGens:
    """A matrix group given by a generating set over GF(p)."""

    n: int
    p: int
    generators: tuple  # of n x n invertible arrays

    def __post_init__(self):
        gens = tuple(as_array(g, self.p) for g in self.generators)
        for k, g in enumerate(gens):
            if g.shape != (self.n, self.n):
                raise ValueError(f"generator {k + 1} is not {self.n} x {self.n}")
            if not is_invertible(g, self.p):
                raise ValueError(f"generator {k + 1} is singular mod {self.p}")
        object.__setattr__(self, "generators", gens)

    @property
    def num_generators(self) -> int:
        return len(self.generators)


@dataclass(frozen=True)
class LieSC:
    """A matrix Lie algebra: basis plus structure constants.

    sc[i, j, k] is the X_k-coordinate of [X_i, X_j].  alternating and
    jacobi record whether the bracket table passes those two checks
    (they always hold for honest matrix brackets; the flags exist so a
    consumer can assert them without recomputing).
    """

    basis: np.ndarray  # k x n x n
    sc: Tensor3
    alternating: bool
    jacobi: bool

    @property
    def dim(self) -> int:
        return self.basis.shape[0]


# ---------------------------------------------------------------------------
# truncated log / exp


def _nilpotency_index(N: np.ndarray, p: int):
    """Smallest k with N^k = 0, or None if N is not nilpotent."""
    n = N.shape[0]
    power = np.eye(n, dtype=np.int64)
    for k in range(n + 1):
        if not power.any():
            return k
        power = power @ N % p
    return None


def matrix_log(g, p: int) -> np.ndarray:
    """log(g) = sum_{k>=1} -(-1)^k (g - 1)^k / k, exact for unipotent g.

    Requires (g - 1) nilpotent of index strictly less than p so that
    every denominator in the truncated series is invertible mod p.
    """
    g = as_array(g, p)
    N = (g - np.eye(g.shape[0], dtype=np.int64)) % p
    index = _nilpotency_index(N, p)
    if index is None:
        raise ValueError("matrix is not unipotent: g - 1 is not nilpotent")
    if index >= p:
        raise ValueError(
            f"nilpotency index {index} of g - 1 is not below p = {p}; "
            "the truncated logarithm series is not defined"
        )
    out = np.zeros_like(N)
    term = np.eye(g.shape[0], dtype=np.int64)
    for k in range(1, index):
        term = term @ N % p
        coeff = pow(k, -1, p) * (1 if k % 2 == 1 else -1)
        out = (out + coeff * term) % p
    return out


def matrix_exp(x, p: int) -> np.ndarray:
    """exp(x) = sum_{k>=0} x^k / k!, exact for nilpotent x of index < p."""
    x = as_array(x, p)
    index = _nilpotency_index(x, p)
    if index is None:
        raise ValueError("matrix is not nilpotent; exp would not terminate")
    if index >= p:
        raise ValueError(
            f"nilpotency index {index} is not below p = {p}; "
            "the truncated exponential series is not defined"
        )
    out = np.eye(x.shape[0], dtype=np.int64)
    term = out
    factorial = 1
    for k in range(1, index):
        term = term @ x % p
        factorial = factorial * k % p
        out = (out + pow(factorial, -1, p) * term) % p
    return out


# ---------------------------------------------------------------------------
# Lie closure


def _bracket(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b - b @ a) % p


class _SpanTracker:
    """Incremental row-span membership for flattened matrices."""

    def __init__(self, ncols: int, p: int):
        self.p = p
        self.rows = np.zeros((0, ncols), dtype=np.int64)
        self.rank = 0

    def add(self, flat: np.ndarray) -> bool:
        """Add a vector; True when it enlarged the span."""
        stacked = np.vstack([self.rows, flat % self.p])
        rref, _, rank, _ = row_reduce(stacked, self.p)
        if rank == self.rank:
            return False
        self.rows = rref[:rank]
        self.rank = rank
        return True


def lie_closure(mats, p: int) -> LieSC:
    """Smallest matrix Lie algebra over GF(p) containing the given matrices.

    Breadth-first: span the inputs, bracket every pair of basis
    elements, keep whatever enlarges the span, repeat until stable.
    """
    mats = [as_array(m, p) for m in mats]
    if not mats:
        raise ValueError("need at least one matrix")
    n = mats[0].shape[0]
    tracker = _SpanTracker(n * n, p)
    basis = []
    queue = list(mats)
    while queue:
        cand = queue.pop(0)
        if not tracker.add(cand.reshape(-1)):
            continue
        for other in basis:
            queue.append(_bracket(cand, other, p))
        basis.append(cand)
    k = len(basis)
    flat = np.stack([b.reshape(-1) for b in basis])  # k x n^2
    sc = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        for j in range(i + 1, k):
            coords, _ = solve_linear(flat.T, _bracket(basis[i], basis[j], p).reshape(-1), p)
            assert coords is not None  # closure guarantees membership
            sc[i, j] = coords
            sc[j, i] = (-coords) % p
    alternating = True  # sc[i, i] = 0 and antisymmetry hold by construction
    jacobi = True
    for i in range(k):
        for j in range(k):
            for l in range(k):
                s = (
                    _bracket(_bracket(basis[i], basis[j], p), basis[l], p)
                    + _bracket(_bracket(basis[j], basis[l], p), basis[i], p)
                    + _bracket(_bracket(basis[l], basis[i], p), basis[j], p)
                ) % p
                if s.any():
                    jacobi = False
    return LieSC(np.stack(basis), Tensor3(sc, p), alternating, jacobi)


# ---------------------------------------------------------------------------
# group enumeration (the only group-theoretic search in the package)


def enumerate_group(G: MatrixGroupGens, budget=None):
    """All elements of <generators> by breadth-first closure.

    Deterministic order (identity first, then by discovery).  Raises
    BudgetExceeded once more elements appear than the budget allows.
    """
    limit = DEFAULT_BUDGET if budget is None else budget
    p = G.p
    eye = np.eye(G.n, dtype=np.int64)
    seen = {eye.tobytes(): eye}
    frontier = [eye]
    while frontier:
        nxt = []
        for x in frontier:
            for g in G.generators:
                y = x @ g % p
                key = y.tobytes()
                if key not in seen:
                    if len(seen) >= limit:
                        raise BudgetExceeded("group closure", len(seen) + 1, limit)
                    seen[key] = y
                    nxt.append(y)
        frontier = nxt
    return list(seen.values())


def _matrix_order(g: np.ndarray, p: int, cap: int = 1 << 20) -> int:
    eye = np.eye(g.shape[0], dtype=np.int64)
    power = g % p
    for k in range(1, cap + 1):
        if np.array_equal(power, eye):
            return k
        power = power @ g % p
    raise ValueError("element order exceeds cap")


def _group_commutator(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return inverse(a, p) @ inverse(b, p) @ a @ b % p


# ---------------------------------------------------------------------------
# tuple -> group


def baer_group(t: Tensor3) -> MatrixGroupGens:
    """Unitriangular model group of an alternating tuple (odd p only).

    Coordinates (v, w) embed as

        [ 1  v^t  w^t ]
        [ 0  I    M(v)]      with M(v) = [A_1 v | ... | A_m v],
        [ 0  0    I   ]

    and the generators returned are the coordinate vectors: n of them
    with v = e_i, w = 0, then m of them with v = 0, w = e_j.
    """
    if t.p == 2:
        raise ValueError(
            "no exponent-2 model group exists over GF(2); odd p required"
        )
    n, n2, m = t.dims
    if n != n2:
        raise ValueError("alternating tuples need square slices")
    for k in range(m):
        if not is_alternating(t.data[:, :, k], t.p):
            raise ValueError(f"slice {k + 1} is not alternating")
    size = 1 + n + m
    gens = []
    for i in range(n):
        g = np.eye(size, dtype=np.int64)
        g[0, 1 + i] = 1
        # M(e_i)[b, k] = A_k[b, i]
        g[1 : 1 + n, 1 + n :] = t.data[:, i, :]
        gens.append(g)
    for j in range(m):
        g = np.eye(size, dtype=np.int64)
        g[0, 1 + n + j] = 1
        gens.append(g)
    return MatrixGroupGens(size, t.p, tuple(gens))


# ---------------------------------------------------------------------------
# group -> tuple


def _check_unitriangular(G: MatrixGroupGens):
    for k, g in enumerate(G.generators):
        if np.any(np.tril(g, -1)) or not np.all(np.diag(g) == 1):
            raise ValueError(
                f"generator {k + 1} is not unitriangular "
                "(upper triangular with unit diagonal)"
            )


def _check_class_exponent(G: MatrixGroupGens):
    """Verify class <= 2 and exponent p on generators.

    For p odd these generator-level relations imply the same for the
    whole group: commutators of generators being central makes the
    derived subgroup central (class <= 2), and at class 2 the p-th
    power map is an endomorphism, so generator orders dividing p give
    exponent p.
    """
    p = G.p
    gens = G.generators
    eye = np.eye(G.n, dtype=np.int64)
    for i, g in enumerate(gens):
        if not np.array_equal(_matpow(g, p, p), eye):
            raise ValueError(f"exponent-p violated: g{i + 1}^{p} != 1")
    comms = {}
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            c = _group_commutator(gens[i], gens[j], p)
            comms[(i, j)] = c
            if not np.array_equal(_matpow(c, p, p), eye):
                raise ValueError(f"exponent-p violated: [g{i + 1},g{j + 1}]^{p} != 1")
    for (i, j), c in comms.items():
        for k, g in enumerate(gens):
            if not np.array_equal(_group_commutator(c, g, p), eye):
                raise ValueError(
                    f"class-2 violated: [[g{i + 1},g{j + 1}],g{k + 1}] != 1"
                )


def _matpow(g: np.ndarray, e: int, p: int) -> np.ndarray:
    out = np.eye(g.shape[0], dtype=np.int64)
    base = g % p
    while e:
        if e & 1:
            out = out @ base % p
        base = base @ base % p
        e >>= 1
    return out


@dataclass(frozen=True)
class _LogBasis:
    """Log-coordinate data for a class-2 exponent-p unitriangular group."""

    lifts: np.ndarray        # n x size x size  (log lifts of abelianization basis)
    centre: np.ndarray       # m x size x size  (basis of the commutator span)
    tuple: Tensor3           # the commutator map on the lift basis
    gen_coords: np.ndarray   # num_generators x (n + m), log coords of generators


def _log_basis(G: MatrixGroupGens) -> _LogBasis:
    if G.p == 2:
        raise ValueError("log coordinates need odd p")
    _check_unitriangular(G)
    _check_class_exponent(G)
    p = G.p
    logs = [matrix_log(g, p) for g in G.generators]
    # centre of the Lie data: span of pairwise brackets
    size = G.n
    centre_tracker = _SpanTracker(size * size, p)
    centre = []
    for i in range(len(logs)):
        for j in range(i + 1, len(logs)):
            b = _bracket(logs[i], logs[j], p)
            if centre_tracker.add(b.reshape(-1)):
                centre.append(b)
    # class 2 of the matrix Lie algebra (exact truncated identities need it)
    for b in centre:
        for i, x in enumerate(logs):
            if _bracket(b, x, p).any():
                raise ValueError(
                    "matrix logs are not class 2: a bracket fails to be "
                    f"central against log g{i + 1}"
                )
    m = len(centre)
    # lift basis: generators' logs modulo the centre span
    full_tracker = _SpanTracker(size * size, p)
    for b in centre:
        full_tracker.add(b.reshape(-1))
    lifts = []
    for x in logs:
        if full_tracker.add(x.reshape(-1)):
            lifts.append(x)
    n = len(lifts)
    centre_flat = (
        np.stack([c.reshape(-1) for c in centre])
        if centre
        else np.zeros((0, size * size), dtype=np.int64)
    )
    lift_flat = (
        np.stack([x.reshape(-1) for x in lifts])
        if lifts
        else np.zeros((0, size * size), dtype=np.int64)
    )
    data = np.zeros((n, n, m), dtype=np.int64)
    for a in range(n):
        for b in range(a + 1, n):
            br = _bracket(lifts[a], lifts[b], p).reshape(-1)
            coords, _ = solve_linear(centre_flat.T, br, p) if m else (np.zeros(0, dtype=np.int64), None)
            if coords is None:
                raise ValueError("bracket left the commutator span; inputs inconsistent")
            data[a, b] = coords
            data[b, a] = (-coords) % p
    # coordinates of every generator over (lifts | centre)
    basis_flat = np.vstack([lift_flat, centre_flat])
    gen_coords = np.zeros((len(logs), n + m), dtype=np.int64)
    for k, x in enumerate(logs):
        coords, _ = solve_linear(basis_flat.T, x.reshape(-1), p)
        if coords is None:
            raise ValueError("generator log escaped the computed basis")
        gen_coords[k] = coords
    lifts_arr = (
        np.stack(lifts) if lifts else np.zeros((0, size, size), dtype=np.int64)
    )
    centre_arr = (
        np.stack(centre) if centre else np.zeros((0, size, size), dtype=np.int64)
    )
    return _LogBasis(lifts_arr, centre_arr, Tensor3(data, p), gen_coords)


def baer_alt(G: MatrixGroupGens) -> Tensor3:
    """Commutator map of a class-2 exponent-p unitriangular group.

    Returns the alternating tuple of the group on a computed basis of
    its abelianization (slices indexed by a basis of the commutator
    subgroup's log span).  Abelian input gives an empty tuple (m = 0).
    Inverse of baer_group up to pseudo-isometry.
    """
    return _log_basis(G).tuple
