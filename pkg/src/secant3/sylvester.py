"""Rank computations on rational normal curves and their projections.

The classical catalecticant machinery: Hankel matrices of a binary
point, kernel search for a square-free apolar form, root extraction and
a Vandermonde solve.  ``decompose_via_curve`` lifts a tensor through the
linearization of any parametrized rational curve, decomposes the lift on
the abstract degree-a curve and pushes the parameters back down, so the
same engine serves every curve the pipelines construct.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg, polynomials as poly
from .curves import CurveMap, detect_power_substitution, linearize
from .errors import InvalidInput, NotInSpan, NotMinimal, RetriesExhausted
from .scalars import ROOT_MERGE_TOL, is_exact, working_precision
from .tensorspace import Decomposition, PSTensor, embed


def catalecticant(q, s: int):
    """(a-s+1) x (s+1) Hankel matrix of a degree-a binary point, entry
    (i, j) = q[i + j]."""
    a = len(q) - 1
    if s < 0 or s > a:
        raise InvalidInput("catalecticant order out of range")
    return [[q[i + j] for j in range(s + 1)] for i in range(a - s + 1)]


@dataclass(frozen=True, eq=False)
class RncDecomposition:
    """Decomposition of a binary point against the monomial curve
    t -> (1, t, ..., t^a); parameters are normalized (s0, t0) pairs."""

    degree: int
    params: tuple
    coeffs: tuple

    @property
    def size(self) -> int:
        return len(self.params)

    def monomial_vector(self, s0, t0):
        a = self.degree
        return [s0 ** (a - j) * t0 ** j for j in range(a + 1)]

    def recombine(self):
        acc = np.zeros(self.degree + 1, dtype=complex)
        for (s0, t0), c in zip(self.params, self.coeffs):
            acc += complex(c) * np.asarray(self.monomial_vector(complex(s0), complex(t0)))
        return acc

    def residual(self, q) -> float:
        qv = np.asarray([complex(v) for v in q])
        return float(np.linalg.norm(self.recombine() - qv) / np.linalg.norm(qv))


def _is_squarefree(form, merge_tol=ROOT_MERGE_TOL):
    if all(is_exact(c) for c in form):
        return poly.form_is_squarefree_exact(form)
    roots = poly.find_roots(list(form))
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) <= merge_tol * max(1.0, abs(roots[j])):
                return False
    return poly.form_infinity_multiplicity(form) <= 1


def _kernel_candidates(kernel, seed, random_budget=64):
    """Deterministic grid of small integer combinations of kernel basis
    vectors, then seeded random integer combinations."""
    m = len(kernel)
    for v in kernel:
        yield v
    for i in range(m):
        for j in range(i + 1, m):
            yield [a + b for a, b in zip(kernel[i], kernel[j])]
            yield [a - b for a, b in zip(kernel[i], kernel[j])]
    if m <= 4:
        grid = [0, 1, -1, 2]
        for combo in itertools.product(grid, repeat=m):
            if not any(combo):
                continue
            yield [sum(c * kernel[i][j] for i, c in enumerate(combo))
                   for j in range(len(kernel[0]))]
    rng = np.random.default_rng(seed)
    for _ in range(random_budget):
        combo = rng.integers(-9, 10, size=m)
        if not any(combo):
            continue
        yield [sum(int(c) * kernel[i][j] for i, c in enumerate(combo))
               for j in range(len(kernel[0]))]


def _decompose_with_form(q, form, tol):
    """Roots of a square-free apolar form -> parameters -> coefficients."""
    a = len(q) - 1
    params = poly.form_roots(list(form), precision=working_precision())
    cols = []
    for (s0, t0) in params:
        col = [s0 ** (a - j) * t0 ** j for j in range(a + 1)]
        cols.append(list(np.asarray(col) / np.linalg.norm(col)))
    target = [complex(v) for v in q]
    coeffs = linalg.solve_in_span(target, cols, tol=tol)
    if coeffs is None:
        return _decompose_with_form_extended(q, form, tol)
    norms = [np.linalg.norm([s0 ** (a - j) * t0 ** j for j in range(a + 1)])
             for (s0, t0) in params]
    coeffs = tuple(complex(c) / n for c, n in zip(coeffs, norms))
    return RncDecomposition(degree=a, params=tuple(params), coeffs=coeffs)


def _decompose_with_form_extended(q, form, tol, precision: int = 200):
    """Extended-precision retry for ill-conditioned parameter systems
    (high-degree curves); roots and the solve both run in mpmath."""
    import mpmath

    a = len(q) - 1
    inf_mult = poly.form_infinity_multiplicity(form)
    tpart = poly.trim(list(form))
    with mpmath.workprec(precision):
        coeffs_hi = [_to_mp(c, mpmath) for c in reversed(tpart)]
        try:
            roots = mpmath.polyroots(coeffs_hi, maxsteps=400, extraprec=precision)
        except mpmath.libmp.NoConvergence:
            return None
        params = []
        for r in roots:
            if abs(r) <= 1:
                params.append((mpmath.mpc(1), r))
            else:
                params.append((1 / r, mpmath.mpc(1)))
        params.extend([(mpmath.mpc(0), mpmath.mpc(1))] * min(inf_mult, 1))
        if not params:
            return None
        amat = mpmath.matrix(a + 1, len(params))
        for j, (s0, t0) in enumerate(params):
            for i in range(a + 1):
                amat[i, j] = (s0 ** (a - i)) * (t0 ** i)
        bvec = mpmath.matrix([_to_mp(v, mpmath) for v in q])
        try:
            sol, _ = mpmath.qr_solve(amat, bvec)
        except (ValueError, ZeroDivisionError):
            return None
        resid = amat * sol - bvec
        rel = mpmath.norm(resid) / mpmath.norm(bvec)
        if rel > tol:
            return None
        out_params = tuple((complex(s0), complex(t0)) for s0, t0 in params)
        out_coeffs = tuple(complex(c) for c in sol)
    return RncDecomposition(degree=a, params=out_params, coeffs=out_coeffs)


def _to_mp(c, mpmath):
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator)
    if isinstance(c, int):
        return mpmath.mpf(c)
    z = complex(c)
    return mpmath.mpc(z.real, z.imag)


def sylvester_general(q, seed: int = 0, tol: float = 1e-8) -> RncDecomposition:
    """Minimal-size decomposition of a binary point on the rational
    normal curve of its degree.

    Scans the catalecticant order upward and accepts the first verified
    decomposition arising from a square-free kernel form; by the
    classical dichotomy the result has the minimal possible size.
    """
    a = len(q) - 1
    if a < 1:
        raise InvalidInput("need degree at least 1")
    if not any(q):
        raise InvalidInput("zero vector is not a projective point")
    for s in range(1, a + 1):
        kernel = linalg.kernel_basis(catalecticant(q, s))
        if not kernel:
            continue
        if _kernel_forces_multiple_root(kernel, s):
            continue
        for cand in _kernel_candidates(kernel, seed):
            if not any(cand):
                continue
            if not _is_squarefree(cand):
                continue
            dec = _decompose_with_form(q, cand, tol)
            if dec is not None:
                return dec
    raise RetriesExhausted("no square-free apolar form produced a verified "
                           "decomposition", seed=seed)


def _kernel_forces_multiple_root(kernel, s: int) -> bool:
    """True when every kernel combination has a forced double root: all
    basis forms divisible by t**2 (double root at 0) or by s**2 (double
    root at infinity).  Exact kernels only."""
    if not all(is_exact(c) for v in kernel for c in v):
        return False
    lead = min(next(j for j, c in enumerate(v) if c) for v in kernel)
    trail = max(s - next(j for j, c in enumerate(reversed(list(v))) if c)
                for v in kernel)
    return lead >= 2 or trail <= s - 2


def jet_span_point(a: int, c: int, jet_coeffs):
    """The binary point with the given coordinates in the order-c jet
    basis of the monomial curve at t = 0 (that basis is the first c
    standard vectors)."""
    if not 1 <= c <= a + 1:
        raise InvalidInput("jet order out of range")
    if len(jet_coeffs) != c:
        raise InvalidInput("expected one coordinate per jet order")
    return list(jet_coeffs) + [0] * (a + 1 - c)


def sylvester_from_jet(a: int, c: int, jet_coeffs, seed: int = 0,
                       tol: float = 1e-8) -> RncDecomposition:
    """Decompose a point of the order-c jet span of the monomial curve.

    For c <= ceil((a+1)/2) the size is exactly a + 2 - c; beyond that the
    result is only guaranteed to have size at most c.  The top jet
    coefficient must be nonzero (otherwise the point lives in a smaller
    jet and the caller should reduce c).
    """
    if not 2 <= c <= a:
        raise InvalidInput("need 2 <= c <= a")
    if not jet_coeffs[c - 1]:
        raise NotMinimal("top jet coefficient vanishes; reduce the order")
    q = jet_span_point(a, c, jet_coeffs)
    dec = sylvester_general(q, seed=seed, tol=tol)
    if c <= (a + 2) // 2:
        if dec.size != a + 2 - c:
            raise RetriesExhausted(
                f"expected size {a + 2 - c}, search returned {dec.size}", seed=seed)
    elif dec.size > c:
        raise RetriesExhausted(f"size {dec.size} exceeds the bound {c}", seed=seed)
    return dec


def decompose_via_curve(curve: CurveMap, p: PSTensor, border_jet=None,
                        seed: int = 0, tol: float = 1e-8) -> Decomposition:
    """Decompose p as points of a parametrized rational curve by lifting
    through the curve's linearization.

    ``border_jet`` is ``(c, coords)``: p lies in the span of the order-c
    jet of the embedded curve at t = 0, optionally with its known exact
    coordinates.  Coefficients transfer unchanged because the lift
    satisfies embed(h(t)) = matrix . monomials identically.
    """
    kappa, curve = detect_power_substitution(curve)
    if kappa > 1 and border_jet is not None:
        border_jet = (border_jet[0], None)  # reparametrized; solve coords afresh
    lin = linearize(curve)
    a = lin.degree
    rows = [list(r) for r in lin.matrix]

    if border_jet is not None:
        c, coords = border_jet
        if coords is None:
            cols = lin.columns(min(c, a + 1))
            coords = _solve_jet_coords(rows, cols, p, tol)
        coords = list(coords)
        while coords and not coords[-1]:
            coords.pop()
        c = len(coords)
        if c == 0:
            raise InvalidInput("target has no component in the jet span")
        if c == 1:
            x = curve.evaluate(1, 0)
            return Decomposition(curve.format, ((coords[0], x),))
        if c > a:
            q = jet_span_point(a, a + 1, coords[: a + 1])
            rnc = sylvester_general(q, seed=seed, tol=tol)
        else:
            rnc = sylvester_from_jet(a, c, coords, seed=seed, tol=tol)
    else:
        q = linalg.solve_linear(rows, list(p.coeffs), tol=tol)
        if q is None:
            raise NotInSpan("target is not in the span of the embedded curve")
        if not any(q):
            raise InvalidInput("target lifts to the zero vector")
        rnc = sylvester_general(q, seed=seed, tol=tol)

    terms = []
    for (s0, t0), coeff in zip(rnc.params, rnc.coeffs):
        x = curve.evaluate(s0, t0)
        terms.append((coeff, x))
    dec = Decomposition(curve.format, tuple(terms))

    # the carried coefficients are exact in exact arithmetic, but for
    # high-degree curves the parameter-level solve is ill-conditioned in
    # floating point; refit the coefficients against the embedded points
    # (the system the verification actually recombines) when needed
    pv = np.asarray([complex(v) for v in p.coeffs])
    pn = np.linalg.norm(pv)
    if np.linalg.norm(dec.recombine().numeric() - pv) > 0.1 * tol * pn:
        cols = [embed(curve.format, x).numeric() for _, x in terms]
        norms = [np.linalg.norm(col) for col in cols]
        gens = [list(col / n) for col, n in zip(cols, norms)]
        sol = linalg.solve_in_span(list(pv), gens, tol=tol)
        if sol is None:
            raise RetriesExhausted("tensor-level coefficient refit failed",
                                   seed=seed)
        terms = [(complex(cc) / n, x)
                 for cc, n, (_, x) in zip(sol, norms, terms)]
        dec = Decomposition(curve.format, tuple(terms))
    return dec


def _solve_jet_coords(matrix_rows, cols, p: PSTensor, tol):
    target = list(p.coeffs)
    exact = p.is_exact and all(all(is_exact(v) for v in col) for col in cols)
    if exact:
        coords = linalg.solve_in_span(target, cols, tol=tol)
    else:
        coords = linalg.solve_in_span([complex(v) for v in target],
                                      [[complex(v) for v in col] for col in cols],
                                      tol=tol)
    if coords is None:
        raise NotInSpan("target is not in the jet span of the embedded curve")
    return coords
