"""Exact integer linear algebra on numpy object arrays.

Every matrix handled here is a 2-d ``numpy.ndarray`` with ``dtype=object``
whose entries are Python ints, so nothing can overflow.  Shapes with a zero
dimension are legal throughout.

The transformations are deterministic: whenever several pivots qualify, the
one with the smallest absolute value wins, and among equals the lowest row
(then column) index.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import NamedTuple, Optional, Sequence

import numpy as np

IntMatrix = np.ndarray


def imat(data, rows: Optional[int] = None, cols: Optional[int] = None) -> IntMatrix:
    """Build an exact integer matrix.

    ``rows``/``cols`` are only needed to fix the shape of an empty matrix,
    e.g. ``imat([], rows=2, cols=0)``.
    """
    if isinstance(data, np.ndarray) and data.ndim == 2:
        out = np.empty(data.shape, dtype=object)
        for idx, x in np.ndenumerate(data):
            out[idx] = int(x)
    else:
        data = [list(row) for row in data]
        if not data:
            out = np.empty((rows or 0, cols or 0), dtype=object)
            if out.size:
                raise ValueError("empty data with a nonempty shape")
            return out
        width = len(data[0])
        if any(len(row) != width for row in data):
            raise ValueError("ragged matrix rows")
        out = np.empty((len(data), width), dtype=object)
        for i, row in enumerate(data):
            for j, x in enumerate(row):
                out[i, j] = int(x)
    if rows is not None and out.shape[0] != rows:
        raise ValueError(f"expected {rows} rows, got {out.shape[0]}")
    if cols is not None and out.shape[1] != cols:
        raise ValueError(f"expected {cols} columns, got {out.shape[1]}")
    return out


def column(vec: Sequence[int]) -> IntMatrix:
    """A single column matrix."""
    return imat([[int(x)] for x in vec], rows=len(vec), cols=1)


def from_columns(cols: Sequence[Sequence[int]], rows: int) -> IntMatrix:
    """Stack integer vectors as the columns of a ``rows``-row matrix."""
    out = zeros(rows, len(cols))
    for j, c in enumerate(cols):
        if len(c) != rows:
            raise ValueError(f"column {j} has length {len(c)}, expected {rows}")
        for i, x in enumerate(c):
            out[i, j] = int(x)
    return out


def zeros(rows: int, cols: int) -> IntMatrix:
    return np.zeros((rows, cols), dtype=object)


def identity(n: int) -> IntMatrix:
    return np.eye(n, dtype=object)


def to_lists(a: IntMatrix) -> list:
    return [[int(x) for x in row] for row in a]


def hstack(*mats: IntMatrix) -> IntMatrix:
    rows = mats[0].shape[0]
    if any(m.shape[0] != rows for m in mats):
        raise ValueError("row counts differ")
    return np.concatenate(mats, axis=1) if mats else zeros(0, 0)


def vstack(*mats: IntMatrix) -> IntMatrix:
    cols = mats[0].shape[1]
    if any(m.shape[1] != cols for m in mats):
        raise ValueError("column counts differ")
    return np.concatenate(mats, axis=0)


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return a.dot(b)


def is_zero(a: IntMatrix) -> bool:
    return all(x == 0 for x in a.flat)


def equal(a: IntMatrix, b: IntMatrix) -> bool:
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


# -- Smith normal form -------------------------------------------------------


class SnfDecomposition(NamedTuple):
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list:
        """Nonzero diagonal entries, in divisibility order."""
        k = min(self.D.shape)
        return [int(self.D[i, i]) for i in range(k) if self.D[i, i] != 0]

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def _swap_rows(m: IntMatrix, i: int, j: int) -> None:
    if i != j:
        m[[i, j]] = m[[j, i]]


def _swap_cols(m: IntMatrix, i: int, j: int) -> None:
    if i != j:
        m[:, [i, j]] = m[:, [j, i]]


def _min_nonzero(cands):
    best = None
    for key, value in cands:
        if value != 0 and (best is None or abs(value) < best[1]):
            best = (key, abs(value))
    return None if best is None else best[0]


def snf(a: IntMatrix) -> SnfDecomposition:
    """Smith normal form with unimodular transformation witnesses.

    Uses a minimal-absolute-value pivot and full row/column reduction; the
    divisibility chain is enforced before a pivot is frozen, by folding any
    row with a non-divisible entry into the pivot row.
    """
    A = imat(a).copy()
    m, n = A.shape
    U, V = identity(m), identity(n)
    for t in range(min(m, n)):
        pos = _min_nonzero(((i, j), A[i, j]) for i in range(t, m) for j in range(t, n))
        if pos is None:
            break
        _swap_rows(A, t, pos[0]), _swap_rows(U, t, pos[0])
        _swap_cols(A, t, pos[1]), _swap_cols(V, t, pos[1])
        while True:
            p = A[t, t]
            for i in range(t + 1, m):
                q = A[i, t] // p
                if q:
                    A[i] -= q * A[t]
                    U[i] -= q * U[t]
            for j in range(t + 1, n):
                q = A[t, j] // p
                if q:
                    A[:, j] -= q * A[:, t]
                    V[:, j] -= q * V[:, t]
            # ties between remainders go to the row entries
            pos = _min_nonzero(
                [(("r", i), A[i, t]) for i in range(t + 1, m)]
                + [(("c", j), A[t, j]) for j in range(t + 1, n)]
            )
            if pos is not None:
                kind, idx = pos
                if kind == "r":
                    _swap_rows(A, t, idx), _swap_rows(U, t, idx)
                else:
                    _swap_cols(A, t, idx), _swap_cols(V, t, idx)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i, j] % p),
                None,
            )
            if bad is None:
                break
            A[t] += A[bad]
            U[t] += U[bad]
        if A[t, t] < 0:
            A[t] = -A[t]
            U[t] = -U[t]
    return SnfDecomposition(U, A, V)


def smith_invariants(a: IntMatrix) -> list:
    return snf(a).diagonal


def rank(a: IntMatrix) -> int:
    return snf(a).rank


# -- Hermite normal form ------------------------------------------------------


def hnf(a: IntMatrix):
    """Row Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``u @ a == h``; ``h`` is in
    row echelon form with positive pivots and the entries above each pivot
    reduced into ``[0, pivot)``.
    """
    H = imat(a).copy()
    m, n = H.shape
    U = identity(m)
    r = 0
    for j in range(n):
        if r == m:
            break
        while True:
            p = _min_nonzero((i, H[i, j]) for i in range(r, m))
            if p is None:
                break
            _swap_rows(H, r, p), _swap_rows(U, r, p)
            done = True
            for i in range(r + 1, m):
                q = H[i, j] // H[r, j]
                if q:
                    H[i] -= q * H[r]
                    U[i] -= q * U[r]
                if H[i, j] != 0:
                    done = False
            if done:
                break
        if H[r, j] == 0:
            continue
        if H[r, j] < 0:
            H[r] = -H[r]
            U[r] = -U[r]
        for i in range(r):
            q = H[i, j] // H[r, j]
            if q:
                H[i] -= q * H[r]
                U[i] -= q * U[r]
        r += 1
    return H, U


def _nonzero_rows(h: IntMatrix) -> int:
    return sum(1 for row in h if any(x != 0 for x in row))


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """Columns form a basis of the lattice ``{x : a @ x == 0}``.

    The basis comes from the unimodular transform of an HNF, so it spans the
    whole (saturated) kernel; it is then put in Hermite form for determinism.
    """
    a = imat(a)
    m, n = a.shape
    h, u = hnf(a.T)
    r = _nonzero_rows(h)
    k = u[r:]
    if k.shape[0]:
        k, _ = hnf(k)
    return np.ascontiguousarray(k.T) if k.shape[0] else zeros(n, 0)


def solve_integer(a: IntMatrix, b: Sequence[int]) -> Optional[list]:
    """Some integer ``x`` with ``a @ x == b``, or ``None`` if none exists."""
    a = imat(a)
    m, n = a.shape
    if len(b) != m:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m}")
    U, D, V = snf(a)
    c = matmul(U, column(b))
    y = zeros(n, 1)
    for i in range(m):
        d = D[i, i] if i < n else 0
        if d == 0:
            if c[i, 0] != 0:
                return None
        else:
            q, rem = divmod(c[i, 0], d)
            if rem:
                return None
            y[i, 0] = q
    x = matmul(V, y)
    return [int(v) for v in x[:, 0]]


def solve_integer_matrix(a: IntMatrix, b: IntMatrix) -> Optional[IntMatrix]:
    """Column-by-column :func:`solve_integer`; ``None`` if any column fails."""
    cols = []
    for j in range(b.shape[1]):
        x = solve_integer(a, list(b[:, j]))
        if x is None:
            return None
        cols.append(x)
    return from_columns(cols, a.shape[1])


def det(a: IntMatrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    M = imat(a).copy()
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k, k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i, k] != 0), None)
            if swap is None:
                return 0
            _swap_rows(M, k, swap)
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i, j] = (M[i, j] * M[k, k] - M[i, k] * M[k, j]) // prev
        prev = M[k, k]
    return sign * int(M[n - 1, n - 1])


def is_unimodular(a: IntMatrix) -> bool:
    return a.shape[0] == a.shape[1] and det(a) in (1, -1)


def unimodular_inverse(a: IntMatrix) -> IntMatrix:
    h, u = hnf(a)
    if not equal(h, identity(a.shape[0])):
        raise ValueError("matrix is not unimodular")
    return u


def rational_inverse(a: IntMatrix) -> np.ndarray:
    """Inverse over the rationals as an object array of ``Fraction``."""
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    M = np.empty((n, 2 * n), dtype=object)
    for i in range(n):
        for j in range(n):
            M[i, j] = Fraction(int(a[i, j]))
            M[i, n + j] = Fraction(int(i == j))
    for c in range(n):
        p = next((i for i in range(c, n) if M[i, c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        _swap_rows(M, c, p)
        M[c] = M[c] / M[c, c]
        for i in range(n):
            if i != c and M[i, c] != 0:
                M[i] = M[i] - M[i, c] * M[c]
    return M[:, n:]


def primitive(vec: Sequence[int]):
    """Split ``vec`` as ``multiplier * primitive``; zero vectors give (0, vec)."""
    g = 0
    for x in vec:
        g = gcd(g, int(x))
    if g == 0:
        return 0, tuple(int(x) for x in vec)
    return g, tuple(int(x) // g for x in vec)
