"""Partially symmetric tensor spaces and their embedded geometry.

A format fixes the number of factors, the per-factor projective
dimensions and symmetric degrees.  Coefficients use the pure monomial
convention: the entry of ``embed(x)`` at a tuple of exponent vectors is
the plain product of coordinate powers, with no multinomial weights.
Exponent tuples per factor are sorted lexicographically descending and
the global index is mixed radix with the first factor most significant.
This makes every flattening a direct Hankel-style read of coefficients.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb

import numpy as np

from . import linalg, polynomials as poly
from .errors import (CapExceeded, IndependenceFailure, InvalidInput,
                     VerificationFailed)
from .scalars import RANK_TOL, VERIFY_TOL, is_exact


@lru_cache(maxsize=None)
def exponent_tuples(n: int, d: int):
    """All exponent vectors of length n+1 summing to d, lex descending."""
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + (e,), remaining - e, slots - 1)

    rec((), d, n + 1)
    return tuple(out)


@dataclass(frozen=True)
class Format:
    """Shape (n_1..n_k; d_1..d_k) of a partially symmetric tensor space."""

    n: tuple
    d: tuple

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(int(v) for v in self.n))
        object.__setattr__(self, "d", tuple(int(v) for v in self.d))
        if len(self.n) != len(self.d) or not self.n:
            raise InvalidInput("need matching, nonempty dimension and degree tuples")
        if any(v < 1 for v in self.n) or any(v < 1 for v in self.d):
            raise InvalidInput("projective dimensions and degrees must be >= 1")

    @property
    def k(self) -> int:
        return len(self.n)

    @cached_property
    def factor_sizes(self):
        return tuple(comb(di + ni, ni) for ni, di in zip(self.n, self.d))

    @cached_property
    def strides(self):
        """Mixed-radix strides, first factor most significant."""
        out = [1] * self.k
        for i in range(self.k - 2, -1, -1):
            out[i] = out[i + 1] * self.factor_sizes[i + 1]
        return tuple(out)

    @cached_property
    def size(self) -> int:
        """Number of coefficients, i.e. N + 1."""
        out = 1
        for s in self.factor_sizes:
            out *= s
        return out

    @property
    def ambient_dim(self) -> int:
        """Projective dimension N of the embedded tensor space."""
        return self.size - 1

    def factor_exponents(self, i):
        return exponent_tuples(self.n[i], self.d[i])

    def index_iter(self):
        """Global coefficient indices as tuples of per-factor exponent tuples."""
        return itertools.product(*(self.factor_exponents(i) for i in range(self.k)))

    def index_of(self, exps) -> int:
        idx = 0
        for i in range(self.k):
            table = _position_table(self.n[i], self.d[i])
            idx += table[tuple(exps[i])] * self.strides[i]
        return idx


@lru_cache(maxsize=None)
def _position_table(n, d):
    return {e: pos for pos, e in enumerate(exponent_tuples(n, d))}


# ---------------------------------------------------------------------------
# points and tensors


def check_point(fmt: Format, x):
    """Validate a product point: one nonzero vector of length n_i+1 per factor."""
    if len(x) != fmt.k:
        raise InvalidInput("point has wrong number of factors")
    for i, v in enumerate(x):
        if len(v) != fmt.n[i] + 1:
            raise InvalidInput(f"factor {i} has wrong coordinate length")
        if not any(v):
            raise InvalidInput(f"factor {i} is the zero vector")
    return tuple(tuple(v) for v in x)


def point_is_exact(x) -> bool:
    return all(is_exact(c) for v in x for c in v)


def points_projectively_equal(u, v, tol: float = 1e-9) -> bool:
    """Per-factor projective equality of two product points."""
    for a, b in zip(u, v):
        if not _vectors_proportional(a, b, tol):
            return False
    return True


def _vectors_proportional(a, b, tol):
    if len(a) != len(b):
        return False
    if all(is_exact(x) for x in a) and all(is_exact(x) for x in b):
        for i in range(len(a)):
            for j in range(i + 1, len(a)):
                if a[i] * b[j] != a[j] * b[i]:
                    return False
        return True
    av = np.asarray(a, dtype=complex)
    bv = np.asarray(b, dtype=complex)
    na, nb = np.linalg.norm(av), np.linalg.norm(bv)
    if na == 0 or nb == 0:
        return na == nb
    av, bv = av / na, bv / nb
    mu = np.vdot(av, bv)
    return float(np.linalg.norm(bv - mu * av)) <= tol


@dataclass(frozen=True, eq=False)
class PSTensor:
    """A point of the ambient projective space in fixed coefficient order."""

    format: Format
    coeffs: tuple

    def __post_init__(self):
        coeffs = self.coeffs
        if isinstance(coeffs, np.ndarray):
            coeffs = tuple(complex(c) for c in coeffs)
        else:
            coeffs = tuple(coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if len(coeffs) != self.format.size:
            raise InvalidInput("coefficient count does not match format")
        if not any(coeffs):
            raise InvalidInput("tensor is identically zero")

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.coeffs)

    def numeric(self):
        return np.asarray([complex(c) for c in self.coeffs])

    def proportional_to(self, other, tol: float = 1e-9) -> bool:
        return _vectors_proportional(self.coeffs, other.coeffs, tol)


def embed(fmt: Format, x) -> PSTensor:
    """Segre-Veronese embedding of a product point (monomial convention)."""
    x = check_point(fmt, x)
    coeffs = []
    for exps in fmt.index_iter():
        val = 1
        for i in range(fmt.k):
            for j, e in enumerate(exps[i]):
                if e:
                    val = val * x[i][j] ** e
        coeffs.append(val)
    return PSTensor(fmt, tuple(coeffs))


def tensor_combination(tensors, coeffs) -> PSTensor:
    """Linear combination of tensors of a common format."""
    fmt = tensors[0].format
    n = fmt.size
    exact = all(t.is_exact for t in tensors) and all(is_exact(c) for c in coeffs)
    if exact:
        acc = [Fraction(0)] * n
        for t, c in zip(tensors, coeffs):
            if c:
                for i, v in enumerate(t.coeffs):
                    acc[i] += c * v
        return PSTensor(fmt, tuple(acc))
    acc = np.zeros(n, dtype=complex)
    for t, c in zip(tensors, coeffs):
        acc += complex(c) * t.numeric()
    return PSTensor(fmt, acc)


# ---------------------------------------------------------------------------
# jets


@dataclass(frozen=True, eq=False)
class JetScheme:
    """Connected curvilinear scheme of degree ``order``, presented as an
    order-``order`` jet of a parametrized map at t = 0.

    ``factors[i][j]`` is the coefficient tuple of the j-th coordinate
    polynomial of factor i, truncated below t**order.
    """

    format: Format
    order: int
    factors: tuple

    def __post_init__(self):
        if self.order < 1:
            raise InvalidInput("jet order must be >= 1")
        if len(self.factors) != self.format.k:
            raise InvalidInput("jet needs one coordinate tuple per factor")
        fixed = []
        for i, factor in enumerate(self.factors):
            if len(factor) != self.format.n[i] + 1:
                raise InvalidInput(f"factor {i} has wrong coordinate count")
            rows = tuple(tuple(list(p)[: self.order]) for p in factor)
            if not any(p[0] if p else 0 for p in rows):
                raise InvalidInput(f"factor {i} has zero constant term, support undefined")
            rows = tuple(tuple(p) + (0,) * (self.order - len(p)) for p in rows)
            fixed.append(rows)
        object.__setattr__(self, "factors", tuple(fixed))

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for f in self.factors for p in f for c in p)

    def support(self):
        return tuple(tuple(p[0] for p in factor) for factor in self.factors)

    def truncate(self, order: int) -> "JetScheme":
        if order > self.order:
            raise InvalidInput("cannot extend a jet by truncation")
        return JetScheme(self.format, order,
                         tuple(tuple(p[:order] for p in f) for f in self.factors))

    def factor_polys(self, i):
        """Coordinate polynomials of factor i (projection to that factor)."""
        return tuple(list(p) for p in self.factors[i])

    def drop_factor(self, i) -> "JetScheme":
        if self.format.k == 1:
            raise InvalidInput("cannot drop the only factor")
        n = self.format.n[:i] + self.format.n[i + 1:]
        d = self.format.d[:i] + self.format.d[i + 1:]
        return JetScheme(Format(n, d), self.order,
                         self.factors[:i] + self.factors[i + 1:])


def normalize_jet(jet: JetScheme) -> JetScheme:
    """Divide each factor's coordinates by the unit series of its first
    coordinate with a nonzero constant term.

    The map is projectively unchanged, but a factor that is constant as a
    map becomes literally constant, which the ambient reduction relies on.
    """
    factors = []
    for i in range(jet.format.k):
        polys = [list(p) for p in jet.factors[i]]
        unit = next(p for p in polys if p[0])
        inv = poly.series_inverse(unit, jet.order)
        factors.append(tuple(tuple(poly.mul_trunc(p, inv, jet.order))
                             for p in polys))
    return JetScheme(jet.format, jet.order, tuple(factors))


def jet_vectors(jet: JetScheme):
    """Taylor coefficient tensors of the embedded jet: entry j is the
    coefficient of t**j in embed(f(t)), so entry 0 is embed(support).

    A zero Taylor vector means the embedded jet cannot be linearly
    independent, which every consumer requires, so that case raises
    IndependenceFailure directly.
    """
    fmt = jet.format
    c = jet.order
    caches = [dict() for _ in range(fmt.k)]

    def factor_product(i, exp):
        prod = caches[i].get(exp)
        if prod is None:
            prod = [1] + [0] * (c - 1)
            for j, e in enumerate(exp):
                if e:
                    prod = poly.mul_trunc(
                        prod, poly.pow_trunc(list(jet.factors[i][j]), e, c), c)
            caches[i][exp] = prod
        return prod

    coeff_rows = [[] for _ in range(c)]
    for exps in fmt.index_iter():
        prod = factor_product(0, exps[0])
        for i in range(1, fmt.k):
            prod = poly.mul_trunc(prod, factor_product(i, exps[i]), c)
        for j in range(c):
            coeff_rows[j].append(prod[j] if j < len(prod) else 0)
    for j, row in enumerate(coeff_rows):
        if not any(row):
            raise IndependenceFailure(
                f"embedded Taylor vector {j} of the jet is zero")
    return [PSTensor(fmt, tuple(row)) for row in coeff_rows]


def factor_span_dim(jet: JetScheme, i: int) -> int:
    """Projective dimension of the span of the factor-i projection."""
    rows = [[p[j] for p in jet.factors[i]] for j in range(jet.order)]
    return linalg.mat_rank(rows) - 1


def factor_local_degree(jet: JetScheme, i: int) -> int:
    """Degree of the scheme-theoretic image of the jet under the
    projection to factor i.

    Computed as the dimension of the subalgebra of K[t]/t^order generated
    by the affine-normalized coordinate functions.
    """
    c = jet.order
    polys = [list(p) for p in jet.factors[i]]
    unit = next(p for p in polys if p[0])
    inv = poly.series_inverse(unit, c)
    gens = [poly.mul_trunc(p, inv, c) for p in polys]
    basis_rows = [[1] + [0] * (c - 1)]
    frontier = list(gens)
    while True:
        added = False
        for g in frontier:
            candidate_rows = basis_rows + [list(g) + [0] * (c - len(g))]
            if linalg.mat_rank(candidate_rows) > len(basis_rows):
                basis_rows.append(list(g) + [0] * (c - len(g)))
                added = True
        if not added:
            break
        frontier = [poly.mul_trunc(b, g, c) for b in basis_rows for g in gens]
    return len(basis_rows)


def project_point(x, i):
    """Coordinates of the i-th factor of a product point."""
    return tuple(x[i])


def drop_point_factor(x, i):
    return tuple(x[:i]) + tuple(x[i + 1:])


@dataclass(frozen=True, eq=False)
class MultiJet:
    """Disjoint union of connected jets with pairwise distinct supports."""

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise InvalidInput("need at least one component")
        fmt = comps[0].format
        for c in comps:
            if c.format != fmt:
                raise InvalidInput("components live in different formats")
        for a in range(len(comps)):
            for b in range(a + 1, len(comps)):
                if points_projectively_equal(comps[a].support(), comps[b].support()):
                    raise InvalidInput("component supports must be pairwise distinct")
        object.__setattr__(self, "components", comps)

    @property
    def format(self) -> Format:
        return self.components[0].format

    @property
    def total_degree(self) -> int:
        return sum(c.order for c in self.components)

    @property
    def alpha(self) -> int:
        return len(self.components)


# ---------------------------------------------------------------------------
# flattenings


def flatten(tensor: PSTensor, split):
    """Hankel-style unfolding of a tensor along a per-factor degree split.

    Rows are indexed by exponent tuples of degrees ``split``; columns by
    degrees ``d - split``; the entry is the coefficient at the index sum.
    """
    fmt = tensor.format
    split = tuple(int(s) for s in split)
    if len(split) != fmt.k or any(s < 0 or s > fmt.d[i] for i, s in enumerate(split)):
        raise InvalidInput("invalid split for format")
    co = tensor.coeffs
    k = fmt.k
    strides = fmt.strides
    tables = [_position_table(fmt.n[i], fmt.d[i]) for i in range(k)]
    # per factor, the stride-weighted position of every (row, col) exponent sum
    row_parts = [exponent_tuples(fmt.n[i], split[i]) for i in range(k)]
    col_parts = [exponent_tuples(fmt.n[i], fmt.d[i] - split[i]) for i in range(k)]
    pair_pos = []
    for i in range(k):
        pos = {}
        for re_ in row_parts[i]:
            for ce in col_parts[i]:
                total = tuple(a + b for a, b in zip(re_, ce))
                pos[(re_, ce)] = tables[i][total] * strides[i]
        pair_pos.append(pos)
    rows = []
    for re_ in itertools.product(*row_parts):
        row = []
        for ce in itertools.product(*col_parts):
            idx = 0
            for i in range(k):
                idx += pair_pos[i][(re_[i], ce[i])]
            row.append(co[idx])
        rows.append(row)
    return rows


@dataclass(frozen=True)
class FlatteningReport:
    """Exact ranks of a family of unfoldings; max_rank lower-bounds the
    border rank."""

    ranks: dict = field(default_factory=dict)
    max_rank: int = 0
    complete: bool = True


def flattening_report(tensor: PSTensor, max_entries: int = 250_000,
                      full_split_limit: int = 20_000, strict: bool = False,
                      tol: float = RANK_TOL) -> FlatteningReport:
    """Ranks of all admissible unfoldings (both sides of size >= 2).

    Formats with more than ``full_split_limit`` coefficients only get the
    factor-subset splits (s_i either 0 or d_i).  Splits whose matrix would
    exceed ``max_entries`` are skipped and the report is flagged partial;
    with ``strict=True`` this raises CapExceeded instead.
    """
    fmt = tensor.format
    if fmt.size <= full_split_limit:
        candidates = itertools.product(*(range(d + 1) for d in fmt.d))
    else:
        candidates = itertools.product(*((0, d) for d in fmt.d))
    ranks = {}
    complete = True
    for split in candidates:
        nrows = 1
        ncols = 1
        for i in range(fmt.k):
            nrows *= comb(split[i] + fmt.n[i], fmt.n[i])
            ncols *= comb(fmt.d[i] - split[i] + fmt.n[i], fmt.n[i])
        if nrows < 2 or ncols < 2:
            continue
        if nrows * ncols > max_entries:
            complete = False
            continue
        ranks[split] = linalg.mat_rank(flatten(tensor, split), tol=tol)
    report = FlatteningReport(ranks=ranks,
                              max_rank=max(ranks.values(), default=1),
                              complete=complete)
    if strict and not complete:
        raise CapExceeded("flattening enumeration exceeded its cap", report=report)
    return report


# ---------------------------------------------------------------------------
# decompositions and verification


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Terms (coefficient, product point) expressing a tensor as a
    combination of embedded points."""

    format: Format
    terms: tuple

    def __post_init__(self):
        terms = tuple((c, check_point(self.format, x)) for c, x in self.terms)
        if not terms:
            raise InvalidInput("a decomposition needs at least one term")
        object.__setattr__(self, "terms", terms)

    @property
    def size(self) -> int:
        return len(self.terms)

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) and point_is_exact(x) for c, x in self.terms)

    def points(self):
        return [x for _, x in self.terms]

    def recombine(self) -> PSTensor:
        tensors = [embed(self.format, x) for _, x in self.terms]
        return tensor_combination(tensors, [c for c, _ in self.terms])


@dataclass(frozen=True)
class VerificationRecord:
    size: int
    mode: str
    residual: float


def verify_decomposition(p: PSTensor, dec: Decomposition, mode: str = "auto",
                         tol: float = VERIFY_TOL) -> VerificationRecord:
    """Recompute the combination and compare with p projectively.

    Exact mode demands identity up to a global scalar; numeric mode
    accepts a relative residual of at most ``tol``.  Raises
    VerificationFailed otherwise.
    """
    if dec.format != p.format:
        raise InvalidInput("decomposition format does not match tensor")
    if mode == "auto":
        mode = "exact" if (p.is_exact and dec.is_exact) else "numeric"
    s = dec.recombine()
    if mode == "exact":
        if not (p.is_exact and dec.is_exact):
            raise InvalidInput("exact verification requires exact data")
        if not _vectors_proportional(s.coeffs, p.coeffs, 0.0):
            raise VerificationFailed("recombined tensor differs from target",
                                     residual=1.0)
        return VerificationRecord(size=dec.size, mode="exact", residual=0.0)
    pv = p.numeric()
    sv = s.numeric()
    pn = np.linalg.norm(pv)
    sn = np.linalg.norm(sv)
    if sn == 0.0:
        raise VerificationFailed("recombined tensor is zero", residual=1.0)
    mu = np.vdot(sv, pv) / (sn * sn)
    residual = float(np.linalg.norm(pv - mu * sv) / pn)
    if residual > tol:
        raise VerificationFailed(f"relative residual {residual:.3e} exceeds {tol:.1e}",
                                 residual=residual)
    return VerificationRecord(size=dec.size, mode="numeric", residual=residual)
