"""Plain-text instance and witness files.

Every file is whitespace-separated integers after a one-word header;
`#` starts a comment that runs to the end of the line.  Indices inside
files are 1-based (vertex labels); everything in memory is 0-based, and
this module is the only place that converts.  Emit and parse round-trip
exactly.

Headers:

    tensor3 l n m p      l*n*m entries, first index slowest
    tensord d n1..nd p   product entries, first index slowest
    matspace n m p       m frontal n x n slices, row-major each
    altspace n m p       same, every slice alternating (zero diagonal)
    symspace n m p       same, every slice symmetric
    code d n p           d x n generator matrix, full row rank not required
    graph n e            e lines "u v", vertices 1..n
    algebra n p          n^3 entries C(i,j,k): x_i * x_j = sum_k C(i,j,k) x_k
    formd n d p          one line per monomial: e_1 .. e_n coefficient
    group n m p          m generator matrices, n x n each
    witness <tag> p k    k matrices, each "rows cols" then the entries
"""

from __future__ import annotations

import numpy as np

from .. import MAX_PRIME
from ..gf import is_prime
from ..groupcorr import MatrixGroupGens
from ..matspace import is_alternating, is_symmetric
from ..tensor import (
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
)

_TAGS = (TI3, TI_D, EQUIVALENCE, ISOMETRY, PSEUDO_ISOMETRY, CONJUGACY,
         ALGEBRA_ISO, TRILINEAR_EQ, FORM_EQ, MONCODE_EQ, GRAPH_ISO)

INSTANCE_HEADERS = ("tensor3", "tensord", "matspace", "altspace", "symspace",
                    "code", "graph", "algebra", "formd", "group")


class ParseError(ValueError):
    """Malformed file; the message always carries a line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class _Tokens:
    """Comment-stripping token stream that remembers line numbers."""

    def __init__(self, text: str):
        self.items = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            for tok in raw.split("#", 1)[0].split():
                self.items.append((tok, lineno))
        self.pos = 0
        self.line = 1  # line of the most recently consumed token

    def next_word(self, what: str) -> str:
        if self.pos >= len(self.items):
            raise ParseError(self.line, f"unexpected end of file; expected {what}")
        tok, self.line = self.items[self.pos]
        self.pos += 1
        return tok

    def next_int(self, what: str) -> int:
        tok = self.next_word(what)
        try:
            return int(tok)
        except ValueError:
            raise ParseError(self.line, f"expected {what}, got {tok!r}") from None

    def next_entry(self, p: int) -> int:
        x = self.next_int("an entry")
        if not 0 <= x < p:
            raise ParseError(self.line, f"entry {x} outside 0 .. {p - 1}")
        return x

    def done(self):
        if self.pos < len(self.items):
            tok, line = self.items[self.pos]
            raise ParseError(line, f"trailing data starting at {tok!r}")


def _check_prime(tokens: _Tokens, p: int) -> int:
    if not is_prime(p) or p > MAX_PRIME:
        raise ParseError(tokens.line, f"p = {p} is not a prime below {MAX_PRIME}")
    return p


def _check_size(tokens: _Tokens, value: int, what: str, minimum: int = 0) -> int:
    if value < minimum:
        raise ParseError(tokens.line, f"{what} = {value} must be at least {minimum}")
    return value


def _read_matrix(tokens: _Tokens, rows: int, cols: int, p: int) -> np.ndarray:
    out = np.zeros((rows, cols), dtype=np.int64)
    for r in range(rows):
        for c in range(cols):
            out[r, c] = tokens.next_entry(p)
    return out


# ---------------------------------------------------------------------------
# parsing


def parse_instance(text: str):
    """Parse an instance file; returns (header_word, object)."""
    tokens = _Tokens(text)
    head = tokens.next_word("a format header")
    if head not in INSTANCE_HEADERS:
        raise ParseError(tokens.line, f"unknown format {head!r}")
    obj = _INSTANCE_PARSERS[head](tokens)
    tokens.done()
    return head, obj


def _parse_tensor3(tokens: _Tokens) -> Tensor3:
    l = _check_size(tokens, tokens.next_int("l"), "l")
    n = _check_size(tokens, tokens.next_int("n"), "n")
    m = _check_size(tokens, tokens.next_int("m"), "m")
    p = _check_prime(tokens, tokens.next_int("p"))
    data = np.zeros((l, n, m), dtype=np.int64)
    for i in range(l):
        for j in range(n):
            for k in range(m):
                data[i, j, k] = tokens.next_entry(p)
    return Tensor3(data, p)


def _parse_tensord(tokens: _Tokens) -> TensorD:
    d = _check_size(tokens, tokens.next_int("d"), "d", 1)
    dims = tuple(
        _check_size(tokens, tokens.next_int(f"n{t + 1}"), f"n{t + 1}")
        for t in range(d)
    )
    p = _check_prime(tokens, tokens.next_int("p"))
    data = np.zeros(dims, dtype=np.int64)
    flat = data.reshape(-1)
    for idx in range(flat.size):
        flat[idx] = tokens.next_entry(p)
    return TensorD(data, p)


def _parse_slices(tokens: _Tokens, shape_check=None):
    n = _check_size(tokens, tokens.next_int("n"), "n")
    m = _check_size(tokens, tokens.next_int("m"), "m")
    p = _check_prime(tokens, tokens.next_int("p"))
    data = np.zeros((n, n, m), dtype=np.int64)
    for k in range(m):
        start = tokens.line
        data[:, :, k] = _read_matrix(tokens, n, n, p)
        if shape_check is not None:
            shape_check(data[:, :, k], p, k, start)
    return Tensor3(data, p)


def _parse_matspace(tokens: _Tokens) -> Tensor3:
    return _parse_slices(tokens)


def _parse_altspace(tokens: _Tokens) -> Tensor3:
    def check(S, p, k, start):
        if np.any(np.diagonal(S)):
            raise ParseError(start, f"slice {k + 1} has a nonzero diagonal")
        if not is_alternating(S, p):
            raise ParseError(start, f"slice {k + 1} is not alternating")

    return _parse_slices(tokens, check)


def _parse_symspace(tokens: _Tokens) -> Tensor3:
    def check(S, p, k, start):
        if not is_symmetric(S, p):
            raise ParseError(start, f"slice {k + 1} is not symmetric")

    return _parse_slices(tokens, check)


def _parse_code(tokens: _Tokens) -> Code:
    d = _check_size(tokens, tokens.next_int("d"), "d")
    n = _check_size(tokens, tokens.next_int("n"), "n")
    p = _check_prime(tokens, tokens.next_int("p"))
    return Code(_read_matrix(tokens, d, n, p), p)


def _parse_graph(tokens: _Tokens) -> Graph:
    n = _check_size(tokens, tokens.next_int("n"), "n")
    e = _check_size(tokens, tokens.next_int("e"), "e")
    seen = set()
    edges = []
    for _ in range(e):
        u = tokens.next_int("a vertex")
        if not 1 <= u <= n:
            raise ParseError(tokens.line, f"vertex {u} outside 1 .. {n}")
        v = tokens.next_int("a vertex")
        if not 1 <= v <= n:
            raise ParseError(tokens.line, f"vertex {v} outside 1 .. {n}")
        if u == v:
            raise ParseError(tokens.line, f"loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(tokens.line, f"duplicate edge {key[0]} {key[1]}")
        seen.add(key)
        edges.append((key[0] - 1, key[1] - 1))
    return Graph.from_edges(n, edges)


def _parse_algebra(tokens: _Tokens) -> Tensor3:
    n = _check_size(tokens, tokens.next_int("n"), "n")
    p = _check_prime(tokens, tokens.next_int("p"))
    data = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                data[i, j, k] = tokens.next_entry(p)
    return Tensor3(data, p)


def _parse_formd(tokens: _Tokens) -> FormD:
    n = _check_size(tokens, tokens.next_int("n"), "n", 1)
    d = _check_size(tokens, tokens.next_int("d"), "d", 1)
    p = _check_prime(tokens, tokens.next_int("p"))
    coeffs = {}
    while tokens.pos < len(tokens.items):
        start = tokens.line
        exps = tuple(tokens.next_int(f"exponent {t + 1}") for t in range(n))
        if any(e < 0 for e in exps):
            raise ParseError(start, "negative exponent")
        if sum(exps) != d:
            raise ParseError(start, f"monomial degree {sum(exps)} != {d}")
        c = tokens.next_entry(p)
        if exps in coeffs:
            raise ParseError(start, f"repeated monomial {' '.join(map(str, exps))}")
        coeffs[exps] = c
    return FormD.from_dict(n, d, coeffs, p)


def _parse_group(tokens: _Tokens) -> MatrixGroupGens:
    n = _check_size(tokens, tokens.next_int("n"), "n", 1)
    m = _check_size(tokens, tokens.next_int("m"), "m")
    p = _check_prime(tokens, tokens.next_int("p"))
    gens = []
    for k in range(m):
        start = tokens.line
        M = _read_matrix(tokens, n, n, p)
        gens.append(M)
    try:
        return MatrixGroupGens(n, p, tuple(gens))
    except ValueError as exc:
        raise ParseError(start if m else tokens.line, str(exc)) from None


_INSTANCE_PARSERS = {
    "tensor3": _parse_tensor3,
    "tensord": _parse_tensord,
    "matspace": _parse_matspace,
    "altspace": _parse_altspace,
    "symspace": _parse_symspace,
    "code": _parse_code,
    "graph": _parse_graph,
    "algebra": _parse_algebra,
    "formd": _parse_formd,
    "group": _parse_group,
}


def parse_witness(text: str) -> Witness:
    tokens = _Tokens(text)
    head = tokens.next_word("the word 'witness'")
    if head != "witness":
        raise ParseError(tokens.line, f"expected 'witness', got {head!r}")
    tag = tokens.next_word("a problem tag")
    if tag not in _TAGS:
        raise ParseError(tokens.line, f"unknown tag {tag!r}")
    p = _check_prime(tokens, tokens.next_int("p"))
    k = _check_size(tokens, tokens.next_int("matrix count"), "matrix count")
    mats = []
    for _ in range(k):
        rows = _check_size(tokens, tokens.next_int("rows"), "rows")
        cols = _check_size(tokens, tokens.next_int("cols"), "cols")
        mats.append(_read_matrix(tokens, rows, cols, p))
    tokens.done()
    try:
        return Witness(tag, tuple(mats), p)
    except ValueError as exc:
        raise ParseError(tokens.line, str(exc)) from None


# ---------------------------------------------------------------------------
# emitting


def emit_instance(head: str, obj) -> str:
    return "\n".join(_INSTANCE_EMITTERS[head](obj)) + "\n"


def _emit_tensor3(t: Tensor3):
    l, n, m = t.dims
    out = [f"tensor3 {l} {n} {m} {t.p}"]
    for i in range(l):
        for j in range(n):
            out.append(" ".join(str(int(x)) for x in t.data[i, j]))
    return out


def _emit_tensord(t: TensorD):
    dims = t.dims
    out = [f"tensord {len(dims)} {' '.join(map(str, dims))} {t.p}"]
    if t.data.size:
        for row in t.data.reshape(-1, dims[-1]):
            out.append(" ".join(str(int(x)) for x in row))
    return out


def _emit_slices(head: str):
    def emit(t: Tensor3):
        n, n2, m = t.dims
        out = [f"{head} {n} {m} {t.p}"]
        for k in range(m):
            for r in range(n):
                out.append(" ".join(str(int(x)) for x in t.data[r, :, k]))
        return out

    return emit


def _emit_code(c: Code):
    d, n = c.gen.shape
    out = [f"code {d} {n} {c.p}"]
    for row in c.gen:
        out.append(" ".join(str(int(x)) for x in row))
    return out


def _emit_graph(g: Graph):
    out = [f"graph {g.n} {len(g.sorted_edges())}"]
    for u, v in g.sorted_edges():
        out.append(f"{u + 1} {v + 1}")
    return out


def _emit_algebra(t: Tensor3):
    n = t.dims[0]
    out = [f"algebra {n} {t.p}"]
    for i in range(n):
        for j in range(n):
            out.append(" ".join(str(int(x)) for x in t.data[i, j]))
    return out


def _emit_formd(f: FormD):
    out = [f"formd {f.n} {f.degree} {f.p}"]
    for exps, c in f.coeffs:
        out.append(f"{' '.join(map(str, exps))} {c}")
    return out


def _emit_group(g: MatrixGroupGens):
    out = [f"group {g.n} {len(g.generators)} {g.p}"]
    for M in g.generators:
        for row in M:
            out.append(" ".join(str(int(x)) for x in row))
    return out


_INSTANCE_EMITTERS = {
    "tensor3": _emit_tensor3,
    "tensord": _emit_tensord,
    "matspace": _emit_slices("matspace"),
    "altspace": _emit_slices("altspace"),
    "symspace": _emit_slices("symspace"),
    "code": _emit_code,
    "graph": _emit_graph,
    "algebra": _emit_algebra,
    "formd": _emit_formd,
    "group": _emit_group,
}


def emit_witness(w: Witness) -> str:
    out = [f"witness {w.tag} {w.p} {len(w.mats)}"]
    for M in w.mats:
        out.append(f"{M.shape[0]} {M.shape[1]}")
        for row in M:
            out.append(" ".join(str(int(x)) for x in row))
    return "\n".join(out) + "\n"
