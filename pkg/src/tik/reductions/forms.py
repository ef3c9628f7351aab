"""Cubic-form equivalence lifted to degree-d form equivalence.

The construction multiplies a cubic f by z^(d-3) for one fresh variable z,
giving a degree-d form in n+1 variables.  An equivalence A of cubics extends
to diag(A, 1) on the padded forms.

Recovery is the delicate direction.  A padded witness B either fixes the
hyperplane z = 0 up to scalar (last row proportional to e_z), in which case
the top-left block is an equivalence of the cubics after absorbing a cube
root of the scalar, or it does not, which forces both cubics to carry a
linear factor of multiplicity >= d-3.  In the latter case we recover a cubic
witness structurally: split off all linear factors and match the factor
multisets.  The only residual case (d = 4, a simple linear factor times an
irreducible quadratic) falls back to a budgeted exhaustive search.

The reduction is faithful whenever cubing is a bijection on nonzero scalars,
i.e. p != 1 (mod 3).  For p = 1 (mod 3) two perfect cubes c*l^3 and c'*l^3
with c'/c a non-cube pad to equivalent degree-d forms while the cubics are
inequivalent, so callers should avoid those fields.
"""

from __future__ import annotations

import itertools

import numpy as np

from .. import tensor as T
from ..matspace import (
    BudgetExceeded,
    as_array,
    inverse,
    is_invertible,
    rank,
    solve_linear,
)
from ..oracle import decide_form_eq, verify_witness
from . import Reduction, RecoveryError, register

_FALLBACK_BUDGET = 10 ** 5
_EXHAUST_LIMIT = 1 << 16
_SAMPLE_TRIES = 512


def cubic_to_degree_d(f: T.FormD, d: int) -> T.FormD:
    if f.degree != 3:
        raise ValueError("source form must be a cubic")
    if d < 3:
        raise ValueError("target degree must be at least 3")
    if d == 3:
        return f
    return f.times_new_var_power(d - 3)


def _forward(f: T.FormD, w: T.Witness, d: int) -> T.Witness:
    A = w.mats[0] % f.p
    if d == 3:
        return T.Witness(T.FORM_EQ, (A,), f.p)
    big = np.zeros((f.n + 1, f.n + 1), dtype=np.int64)
    big[: f.n, : f.n] = A
    big[f.n, f.n] = 1
    return T.Witness(T.FORM_EQ, (big,), f.p)


# -- linear factors of forms -------------------------------------------------

def projective_rows(n: int, p: int):
    """All nonzero rows of length n, first nonzero entry normalized to 1."""
    for vec in itertools.product(range(p), repeat=n):
        w = np.array(vec, dtype=np.int64)
        nz = np.nonzero(w)[0]
        if nz.size and w[nz[0]] == 1:
            yield w


def _complete_to_invertible(w: np.ndarray, p: int) -> np.ndarray:
    n = len(w)
    rows = [w % p]
    for i in range(n):
        if len(rows) == n:
            break
        cand = np.array(rows + [np.eye(n, dtype=np.int64)[i]])
        if rank(cand, p) == len(cand):
            rows.append(cand[-1])
    return np.array(rows, dtype=np.int64)


def divide_by_linear(f: T.FormD, w) -> "T.FormD | None":
    """Quotient q with f == (w . x) * q, or None when w . x does not divide f."""
    p = f.p
    w = as_array(w, p)
    if not np.any(w % p):
        raise ValueError("cannot divide by the zero form")
    W = _complete_to_invertible(w, p)
    h = f.substitute(inverse(W, p))
    shifted = {}
    for exps, c in h.coeffs:
        if exps[0] == 0:
            return None
        shifted[(exps[0] - 1,) + exps[1:]] = c
    q = T.FormD.from_dict(f.n, f.degree - 1, shifted, p)
    return q.substitute(W)


def split_linear_factors(f: T.FormD):
    """Peel off every linear factor of f.

    Returns (factors, rest): factors is a list of (row, multiplicity) with
    projectively normalized rows, and f == rest * prod (row . x)^mult.  When
    f splits completely, rest has degree 0 and its constant is the leading
    scalar.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero form")
    g = f
    factors = []
    for w in projective_rows(f.n, f.p):
        mult = 0
        while g.degree > 0:
            q = divide_by_linear(g, w)
            if q is None:
                break
            g = q
            mult += 1
        if mult:
            factors.append((w, mult))
        if g.degree == 0:
            break
    return factors, g


def _invertible_solution(L: np.ndarray, R: np.ndarray, p: int):
    """An invertible n x n matrix X with L @ X == R (mod p), or None."""
    x0, N = solve_linear(L, R, p)
    if x0 is None:
        return None
    n = x0.shape[1]
    k = N.shape[0]
    if k == 0:
        return x0 % p if is_invertible(x0, p) else None
    if p ** (k * n) <= _EXHAUST_LIMIT:
        for flat in itertools.product(range(p), repeat=k * n):
            C = np.array(flat, dtype=np.int64).reshape(k, n)
            X = (x0 + N.T @ C) % p
            if is_invertible(X, p):
                return X
        return None
    rng = np.random.default_rng(k * n * p)
    for _ in range(_SAMPLE_TRIES):
        C = rng.integers(0, p, size=(k, n))
        X = (x0 + N.T @ C) % p
        if is_invertible(X, p):
            return X
    return None


def _match_split_cubics(fA: T.FormD, fB: T.FormD, factsA, constA, factsB,
                        constB):
    """Equivalence of two fully split cubics, or None.

    Complete: any X with fA(X x) == fB must carry the factor multiset of fA
    onto that of fB respecting multiplicities, so enumerating the bijections
    and the per-factor scalars finds a witness whenever one exists.
    """
    p, n = fA.p, fA.n
    cA = constA.coeffs[0][1]
    cB = constB.coeffs[0][1]
    rowsA = [w for w, _ in factsA]
    rowsB = [w for w, _ in factsB]
    multsA = [m for _, m in factsA]
    multsB = [m for _, m in factsB]
    if sorted(multsA) != sorted(multsB):
        return None
    r = len(factsA)
    L = np.array(rowsA, dtype=np.int64)
    for sigma in itertools.permutations(range(r)):
        if any(multsA[i] != multsB[sigma[i]] for i in range(r)):
            continue
        for ts in itertools.product(range(1, p), repeat=r):
            total = cA
            for t, m in zip(ts, multsA):
                total = total * pow(t, m, p) % p
            if total != cB % p:
                continue
            R = np.array(
                [ts[i] * rowsB[sigma[i]] for i in range(r)], dtype=np.int64
            ) % p
            X = _invertible_solution(L, R, p)
            if X is None:
                continue
            w = T.Witness(T.FORM_EQ, (X,), p)
            if verify_witness(fA, fB, w):
                return w
    return None


def _structural_recover(fA: T.FormD, fB: T.FormD) -> T.Witness:
    p, n = fA.p, fA.n
    if fA.is_zero() and fB.is_zero():
        return T.Witness(T.FORM_EQ, (np.eye(n, dtype=np.int64),), p)
    if fA.is_zero() != fB.is_zero():
        raise RecoveryError("witness invalid: only one of the cubics is zero")
    factsA, restA = split_linear_factors(fA)
    factsB, restB = split_linear_factors(fB)
    if restA.degree == 0 and restB.degree == 0:
        w = _match_split_cubics(fA, fB, factsA, restA, factsB, restB)
        if w is not None:
            return w
        raise RecoveryError(
            "recovery-unsupported: the padded forms are equivalent but the "
            "split cubics admit no equivalence (scalar obstruction)"
        )
    try:
        w = decide_form_eq(fA, fB, budget=_FALLBACK_BUDGET)
    except BudgetExceeded:
        raise RecoveryError(
            "recovery-unsupported: residual factor pattern needs an "
            "exhaustive search beyond the local budget"
        )
    if w is None:
        raise RecoveryError(
            "recovery-unsupported: the padded forms are equivalent but the "
            "cubics are not"
        )
    return w


def _recover(fA: T.FormD, fB: T.FormD, wt: T.Witness, d: int) -> T.Witness:
    p, n = fA.p, fA.n
    if d == 3:
        w = T.Witness(T.FORM_EQ, (wt.mats[0] % p,), p)
        if not verify_witness(fA, fB, w):
            raise RecoveryError("witness invalid: matrix is not an equivalence")
        return w
    if not verify_witness(cubic_to_degree_d(fA, d), cubic_to_degree_d(fB, d),
                          wt):
        raise RecoveryError("witness invalid: padded-form witness fails")
    B = wt.mats[0] % p
    if not np.any(B[n, :n]):
        # The witness maps the z = 0 hyperplane to itself: the top block is
        # an equivalence once a cube root of the z-scalar is absorbed.
        c = int(B[n, n])
        A1 = B[:n, :n] % p
        want = pow(c, d - 3, p)
        for mu in range(1, p):
            if pow(mu, 3, p) == want:
                w = T.Witness(T.FORM_EQ, (mu * A1 % p,), p)
                if verify_witness(fA, fB, w):
                    return w
                break
    return _structural_recover(fA, fB)


register(Reduction(
    name="cubic-to-degree-d",
    source=T.FORM_EQ,
    target=T.FORM_EQ,
    construct=cubic_to_degree_d,
    witness_forward=_forward,
    witness_recover=_recover,
    target_dims=lambda dims, d: (dims[0] + (0 if d == 3 else 1), d),
    params=("d",),
))
