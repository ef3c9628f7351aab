"""Shared helpers for the reduction constructions.

The elementary-pair helpers are the single source of truth for gadget slice
layouts: every construction and witness map that touches an elementary
alternating/symmetric gadget entry goes through them, so the index
bookkeeping cannot drift between construct and witness code.
"""

from __future__ import annotations

import numpy as np

from ..matspace import solve_linear


def block_diag(*blocks) -> np.ndarray:
    """Exact block-diagonal assembly keeping int64 dtype."""
    blocks = [np.asarray(b, dtype=np.int64) for b in blocks]
    n = sum(b.shape[0] for b in blocks)
    m = sum(b.shape[1] for b in blocks)
    out = np.zeros((n, m), dtype=np.int64)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def skew_pair(side: int, r: int, c: int, p: int) -> np.ndarray:
    """The elementary alternating matrix with +1 at (r, c) and -1 at (c, r)."""
    out = np.zeros((side, side), dtype=np.int64)
    out[r, c] = 1
    out[c, r] = (-1) % p
    return out


def sym_pair(side: int, r: int, c: int, p: int) -> np.ndarray:
    """The elementary symmetric matrix with +1 at both (r, c) and (c, r)."""
    out = np.zeros((side, side), dtype=np.int64)
    out[r, c] = 1
    out[c, r] = 1
    return out


def solve_slice_mix(transformed: np.ndarray, target: np.ndarray, p: int):
    """Solve for a mixing matrix R with target_k = sum_j R[j, k] * transformed_j.

    Both arguments are stacks of equal-shaped matrices, indexed by their
    first axis.  Returns one solution (free coordinates zero) or None when
    the system is inconsistent; the caller decides whether invertibility is
    required.
    """
    m = transformed.shape[0]
    cols = transformed.reshape(m, -1).T % p
    rhs = target.reshape(target.shape[0], -1).T % p
    x0, _ = solve_linear(cols, rhs, p)
    return x0
