"""Rank, kernel and span-membership over exact rationals and complex floats.

Exact matrices are nested lists of ints / Fractions; the elimination is
fraction-free (Bareiss) on a denominator-cleared copy, which keeps the
intermediate entries at minor size and makes every result deterministic.
Floating matrices go through numpy's SVD / least squares with a relative
singular-value threshold.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import InvalidInput
from .scalars import RANK_TOL, check_finite, is_exact


def matrix_is_exact(rows) -> bool:
    for row in rows:
        for x in row:
            return is_exact(x)
    return True


def clear_denominators(rows):
    """Scale each row to integer entries (row scaling preserves rank,
    kernel and solution sets)."""
    out = []
    for row in rows:
        den = 1
        for x in row:
            if isinstance(x, Fraction) and x.denominator != 1:
                den = den * x.denominator // math.gcd(den, x.denominator)
        if den == 1:
            out.append([int(x) for x in row])
        else:
            out.append([int(x * den) for x in row])
    return out


def bareiss_echelon(int_rows):
    """Fraction-free row echelon form of an integer matrix.

    Returns (echelon, pivot_columns).  All divisions are exact; entries
    stay bounded by minors of the input.
    """
    m = [list(r) for r in int_rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    pivots = []
    prev = 1
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        pr = next((i for i in range(r, nr) if m[i][c] != 0), None)
        if pr is None:
            continue
        if pr != r:
            m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        for i in range(r + 1, nr):
            mic = m[i][c]
            for j in range(c + 1, nc):
                m[i][j] = (m[i][j] * piv - mic * m[r][j]) // prev
            m[i][c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return m, pivots


def exact_rref(rows):
    """Reduced row echelon form over the rationals.

    Elimination runs fraction-free; only the final normalization divides.
    Returns (rref_rows, pivot_columns) with the zero rows dropped.
    """
    ech, pivots = bareiss_echelon(clear_denominators(rows))
    m = [[Fraction(x) for x in ech[r]] for r in range(len(pivots))]
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(r):
            f = m[i][c]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
    return m, pivots


def mat_rank(rows, tol: float = RANK_TOL) -> int:
    """Rank of a matrix; exact elimination or SVD threshold by entry type."""
    nr = len(rows)
    if nr == 0 or len(rows[0]) == 0:
        return 0
    if matrix_is_exact(rows):
        _, pivots = bareiss_echelon(clear_denominators(rows))
        return len(pivots)
    a = check_finite(rows)
    sigma = np.linalg.svd(a, compute_uv=False)
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0
    return int(np.sum(sigma > tol * sigma[0]))


def kernel_basis(rows, tol: float = RANK_TOL):
    """Basis of the right kernel; empty list iff the kernel is trivial."""
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    if nc == 0:
        return []
    if nr == 0:
        return [[Fraction(int(i == j)) for j in range(nc)] for i in range(nc)]
    if matrix_is_exact(rows):
        m, pivots = exact_rref(rows)
        pivot_set = set(pivots)
        basis = []
        for f in range(nc):
            if f in pivot_set:
                continue
            v = [Fraction(0)] * nc
            v[f] = Fraction(1)
            for r, c in enumerate(pivots):
                v[c] = -m[r][f]
            basis.append(v)
        return basis
    a = check_finite(rows)
    _, sigma, vh = np.linalg.svd(a)
    smax = sigma[0] if sigma.size else 0.0
    rank = int(np.sum(sigma > tol * smax)) if smax > 0 else 0
    return [vh[i].conj() for i in range(rank, nc)]


def solve_linear(rows, rhs, tol: float = RANK_TOL):
    """One solution of A x = b, or None if inconsistent.

    Exact input gives the exact solution with free variables set to zero.
    """
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    if len(rhs) != nr:
        raise InvalidInput("right-hand side length does not match matrix")
    if matrix_is_exact(rows) and all(is_exact(b) for b in rhs):
        aug = [list(rows[i]) + [rhs[i]] for i in range(nr)]
        m, pivots = exact_rref(aug)
        if nc in pivots:
            return None
        x = [Fraction(0)] * nc
        for r, c in enumerate(pivots):
            x[c] = m[r][nc]
        return x
    a = check_finite(rows)
    b = check_finite(rhs)
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return [0j] * nc
    x, _, _, _ = np.linalg.lstsq(a, b, rcond=None)
    if np.linalg.norm(a @ x - b) <= max(tol, 1e-9) * bnorm:
        return list(x)
    return None


def solve_in_span(target, generators, tol: float = 1e-8):
    """Coefficients c with sum(c_i * gen_i) = target, or None.

    Exact data is solved exactly; floating data accepts a relative
    residual of ``tol``.
    """
    if not generators:
        return None
    n = len(target)
    for g in generators:
        if len(g) != n:
            raise InvalidInput("generator length does not match target")
    exact = all_exact_vector(target) and all(all_exact_vector(g) for g in generators)
    if exact:
        rows = [[g[i] for g in generators] + [target[i]] for i in range(n)]
        m, pivots = exact_rref(rows)
        k = len(generators)
        if k in pivots:
            return None
        coeffs = [Fraction(0)] * k
        for r, c in enumerate(pivots):
            coeffs[c] = m[r][k]
        return coeffs
    a = np.stack([np.asarray(g, dtype=complex) for g in generators], axis=1)
    b = np.asarray(target, dtype=complex)
    check_finite(a)
    check_finite(b)
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return [0j] * len(generators)
    x, _, _, _ = np.linalg.lstsq(a, b, rcond=None)
    if np.linalg.norm(a @ x - b) <= tol * bnorm:
        return list(x)
    return None


def all_exact_vector(v) -> bool:
    return all(is_exact(x) for x in v)


def span_rank(vectors, tol: float = RANK_TOL) -> int:
    """Dimension of the span of a list of vectors."""
    if not vectors:
        return 0
    return mat_rank([list(v) for v in vectors], tol=tol)


def invert_exact(rows):
    """Exact inverse of a square rational matrix (InvalidInput if singular)."""
    n = len(rows)
    aug = [list(rows[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    m, pivots = exact_rref(aug)
    if len(pivots) < n or pivots[:n] != list(range(n)):
        raise InvalidInput("matrix is singular")
    return [row[n:] for row in m[:n]]
