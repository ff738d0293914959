"""Parametrized rational curves through curvilinear schemes.

The constructions here produce product maps from the line whose
restriction to a fat point reproduces a prescribed jet: truncation
lifting with base-locus removal for arbitrary orders, and the dedicated
order-3 builders (isomorphism of the line, ramified double cover, smooth
conic) that keep the multidegree at most 2 per factor.  A linearization
turns the embedded curve into an exact coefficient matrix against the
monomial basis of the parameter, which is what the rank engine consumes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as int_gcd

import numpy as np

from . import linalg, polynomials as poly
from .errors import (AutarkyViolation, DegenerateJet, InvalidInput,
                     NotAnEmbedding, NotInSpan, RetriesExhausted)
from .scalars import is_exact, working_precision
from .tensorspace import (Decomposition, Format, JetScheme, PSTensor, embed,
                          factor_local_degree, jet_vectors)


@dataclass(frozen=True, eq=False)
class CurveMap:
    """Morphism from the line to a product space, one tuple of binary
    forms of common degree per factor; every factor is basepoint-free."""

    format: Format
    factors: tuple

    def __post_init__(self):
        fixed = []
        for i, forms in enumerate(self.factors):
            forms = tuple(tuple(f) for f in forms)
            if len(forms) != self.format.n[i] + 1:
                raise InvalidInput(f"factor {i} has wrong coordinate count")
            degs = {len(f) - 1 for f in forms}
            if len(degs) != 1:
                raise InvalidInput(f"factor {i} mixes form degrees")
            if all(is_exact(c) for f in forms for c in f):
                if poly.forms_common_factor_degree(list(forms)) != 0:
                    raise InvalidInput(f"factor {i} has a base point")
            fixed.append(forms)
        object.__setattr__(self, "factors", tuple(fixed))

    @property
    def multidegree(self):
        return tuple(len(f[0]) - 1 for f in self.factors)

    @property
    def embedded_degree(self) -> int:
        return sum(a * d for a, d in zip(self.multidegree, self.format.d))

    def evaluate(self, s0, t0):
        """Product point at parameter [s0 : t0]."""
        return tuple(tuple(poly.form_eval(f, s0, t0) for f in forms)
                     for forms in self.factors)

    def jet_at_zero(self, order: int) -> JetScheme:
        """Restriction to the order-``order`` fat point at t = 0."""
        return JetScheme(self.format, order,
                         tuple(tuple(list(f)[:order] for f in forms)
                               for forms in self.factors))


@dataclass(frozen=True, eq=False)
class PiecewiseCurve:
    """Union of curve maps in a common format (a connected nodal curve in
    the applications, but connectivity is not enforced here)."""

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise InvalidInput("need at least one component")
        fmt = comps[0].format
        for c in comps:
            if c.format != fmt:
                raise InvalidInput("components live in different formats")
        object.__setattr__(self, "components", comps)

    @property
    def format(self) -> Format:
        return self.components[0].format

    @property
    def total_embedded_degree(self) -> int:
        return sum(c.embedded_degree for c in self.components)


def jets_projectively_equal(polys_a, polys_b, order: int) -> bool:
    """Whether two coordinate-polynomial tuples agree as maps to
    projective space modulo t**order (all cross products vanish)."""
    n = len(polys_a)
    for i in range(n):
        for j in range(i + 1, n):
            lhs = poly.mul_trunc(list(polys_a[i]), list(polys_b[j]), order)
            rhs = poly.mul_trunc(list(polys_a[j]), list(polys_b[i]), order)
            if poly.trim(poly.add(lhs, poly.scale(rhs, -1))):
                return False
    return True


# ---------------------------------------------------------------------------
# jet extension (arbitrary order)


def extend_jet_to_map(jet_polys, order: int):
    """Extend a truncated coordinate tuple to a basepoint-free map.

    Lifts each truncation to a degree-``order`` binary form, removes the
    gcd of the lifted family (the scheme-theoretic base locus) and
    returns ``(e, forms)`` with ``e <= order`` the degree of the
    resulting map.  The restriction of the map to the fat point of
    degree ``order`` at t = 0 equals the input jet exactly (projectively).
    """
    polys = [poly.trim(list(p)[:order]) for p in jet_polys]
    if not any(polys):
        raise InvalidInput("all-zero jet cannot be extended")
    if not any(p and p[0] for p in polys):
        raise InvalidInput("jet has no unit coordinate at t = 0")
    nonzero = [p for p in polys if p]
    g = []
    for p in nonzero:
        g = poly.gcd(g, p) if g else [Fraction(c) for c in p]
    g = poly.trim(g)
    lead = g[-1]
    g = [c / lead for c in g]
    s_mult = min(order - (len(p) - 1) for p in nonzero)
    base_degree = s_mult + (len(g) - 1)
    e = order - base_degree
    forms = []
    for p in polys:
        if not p:
            forms.append([0] * (e + 1))
            continue
        q, r = poly.divmod_exact(p, g)
        if poly.trim(r):
            raise InvalidInput("gcd division left a remainder")  # unreachable
        q = q + [Fraction(0)] * (e + 1 - len(q))
        forms.append(q[: e + 1])
    return e, tuple(tuple(f) for f in poly.integerize(forms))


# ---------------------------------------------------------------------------
# order-3 builders


def mobius_from_3jet(j0, j1, j2):
    """Degree-1 map of the line whose affine value has Taylor expansion
    j0 + j1*t + j2*t**2 modulo t**3 (series coefficients, j1 != 0).

    Returns a (denominator, numerator) pair of degree-1 forms.
    """
    j0, j1, j2 = Fraction(j0), Fraction(j1), Fraction(j2)
    if j1 == 0:
        raise NotAnEmbedding("first-order coefficient vanishes")
    delta = -j2 / j1
    den, num = poly.integerize([[Fraction(1), delta], [j0, j1 + j0 * delta]])
    return tuple(den), tuple(num)


def _affine_normalize(polys, order):
    """Divide a coordinate tuple by its first unit coordinate, exactly."""
    polys = [list(p)[:order] for p in polys]
    unit_idx = next(i for i, p in enumerate(polys) if p and p[0])
    inv = poly.series_inverse(polys[unit_idx], order)
    return unit_idx, [poly.mul_trunc(p, inv, order) for p in polys]


def conic_through_3jet(jet_polys, seed_combinations: int = 64):
    """Smooth plane conic through a 3-jet spanning the plane, returned as
    three degree-2 binary forms whose order-3 jet at t = 0 matches the
    input exactly (projectively).
    """
    order = 3
    polys = [list(p)[:order] + [0] * (order - len(list(p)[:order])) for p in jet_polys]
    if len(polys) != 3:
        raise InvalidInput("conic construction needs three coordinates")
    taylor = [[p[j] for p in polys] for j in range(order)]
    if linalg.mat_rank(taylor) < 3:
        raise DegenerateJet("3-jet lies in a line")

    # conic coefficients in the order xx, xy, xz, yy, yz, zz
    pairs = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
    cond_rows = []
    for m in range(order):
        row = []
        for (a, b) in pairs:
            prod = poly.mul_trunc(polys[a], polys[b], order)
            row.append(prod[m] if m < len(prod) else 0)
        cond_rows.append(row)
    kernel = linalg.kernel_basis(cond_rows)

    conic = None
    for cand in _kernel_combinations(kernel, seed_combinations):
        if _conic_discriminant(cand) != 0:
            conic = cand
            break
    if conic is None:
        raise DegenerateJet("no smooth conic through the jet was found")

    sym = _conic_matrix(conic)
    o = [Fraction(c) for c in taylor[0]]

    # complement basis of the support point, then the tangent direction
    unit_idx = next(i for i, c in enumerate(o) if c)
    comp = [e for e in range(3) if e != unit_idx]
    b1 = [Fraction(int(i == comp[0])) for i in range(3)]
    b2 = [Fraction(int(i == comp[1])) for i in range(3)]
    bo1 = _bilinear(sym, o, b1)
    bo2 = _bilinear(sym, o, b2)
    if bo1 == 0 and bo2 == 0:
        raise DegenerateJet("support is a singular point of the conic")
    d0 = [bo2 * x - bo1 * y for x, y in zip(b1, b2)]  # tangent direction
    d1 = b1 if bo1 != 0 else b2

    # second intersection of the line through o in direction d(s,t)
    # with the conic: Q(d) * o - 2 B(o, d) * d, a degree-2 parametrization
    # whose parameter 0 sits at o.
    forms = []
    d_forms = [(d0[i], d1[i]) for i in range(3)]
    q_d = _quadratic_form_of_linear(sym, d_forms)
    b_od = _bilinear_form_of_linear(sym, o, d_forms)
    for i in range(3):
        term1 = [q_d[m] * o[i] for m in range(3)]
        term2 = poly.form_mul([2 * b_od[0], 2 * b_od[1]], [d_forms[i][0], d_forms[i][1]])
        forms.append(tuple(a - b for a, b in zip(term1, term2)))

    # reparametrize so the order-3 jet matches the input exactly
    h_polys = [list(f) for f in forms]  # affine restriction s = 1
    c1, c2 = _match_3jets(h_polys, polys)
    den, num = mobius_from_3jet(0, c1, c2)
    out = [poly.form_substitute(list(f), list(den), list(num)) for f in forms]
    out = tuple(tuple(f) for f in poly.integerize(out))
    if not jets_projectively_equal([list(f)[:3] for f in out], polys, 3):
        raise DegenerateJet("conic reparametrization failed to match the jet")
    return out


def _kernel_combinations(kernel, budget):
    """Deterministic sequence of kernel elements to test for smoothness."""
    count = 0
    for v in kernel:
        yield v
        count += 1
        if count >= budget:
            return
    for i in range(len(kernel)):
        for j in range(i + 1, len(kernel)):
            for sign in (1, -1):
                yield [a + sign * b for a, b in zip(kernel[i], kernel[j])]
                count += 1
                if count >= budget:
                    return
    for scale in (2, 3, -2):
        for i in range(len(kernel)):
            for j in range(len(kernel)):
                if i == j:
                    continue
                yield [a + scale * b for a, b in zip(kernel[i], kernel[j])]
                count += 1
                if count >= budget:
                    return


def _conic_matrix(c):
    cxx, cxy, cxz, cyy, cyz, czz = [Fraction(v) for v in c]
    half = Fraction(1, 2)
    return [[cxx, half * cxy, half * cxz],
            [half * cxy, cyy, half * cyz],
            [half * cxz, half * cyz, czz]]


def _conic_discriminant(c):
    m = _conic_matrix(c)
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _bilinear(sym, u, v):
    return sum(sym[i][j] * u[i] * v[j] for i in range(3) for j in range(3))


def _quadratic_form_of_linear(sym, d_forms):
    """Q(d(s,t)) as a degree-2 binary form, d given by per-coordinate
    degree-1 forms."""
    out = [Fraction(0)] * 3
    for i in range(3):
        for j in range(3):
            if sym[i][j] == 0:
                continue
            prod = poly.form_mul(list(d_forms[i]), list(d_forms[j]))
            for m in range(3):
                out[m] += sym[i][j] * prod[m]
    return out


def _bilinear_form_of_linear(sym, o, d_forms):
    """B(o, d(s,t)) as a degree-1 binary form."""
    out = [Fraction(0)] * 2
    for i in range(3):
        for j in range(3):
            if sym[i][j] == 0:
                continue
            for m in range(2):
                out[m] += sym[i][j] * o[i] * d_forms[j][m]
    return out


def _match_3jets(h_polys, f_polys):
    """Coefficients (c1, c2) of the reparametrization tau = c1 t + c2 t^2
    carrying the 3-jet of h onto the 3-jet of f, both immersed germs of
    the same plane curve at the same point."""
    _, h_hat = _affine_normalize(h_polys, 3)
    _, f_hat = _affine_normalize(f_polys, 3)
    a1 = [p[1] for p in h_hat]
    a2 = [p[2] for p in h_hat]
    b1 = [p[1] for p in f_hat]
    b2 = [p[2] for p in f_hat]
    idx = next(i for i, v in enumerate(a1) if v)
    c1 = Fraction(b1[idx]) / a1[idx]
    if any(Fraction(b1[i]) != c1 * a1[i] for i in range(len(a1))):
        raise DegenerateJet("jets are not tangent to the same curve germ")
    rhs = [Fraction(b2[i]) - a2[i] * c1 * c1 for i in range(len(a1))]
    c2 = rhs[idx] / a1[idx]
    if any(rhs[i] != c2 * a1[i] for i in range(len(a1))):
        raise DegenerateJet("jets do not lie on the same curve germ")
    if c1 == 0:
        raise DegenerateJet("input jet is not an immersion")
    return c1, c2


def curve_through_jet3(jet: JetScheme) -> CurveMap:
    """Product curve of multidegree at most 2 per factor through an
    order-3 jet whose ambient has already been reduced (every factor
    projection has local degree 2 or 3)."""
    if jet.order != 3:
        raise InvalidInput("construction requires an order-3 jet")
    fmt = jet.format
    factors = []
    for i in range(fmt.k):
        polys = jet.factor_polys(i)
        local = factor_local_degree(jet, i)
        if local <= 1:
            raise AutarkyViolation(f"factor {i} projects to a single point; "
                                   "reduce the ambient first")
        if local == 2:
            e, forms = extend_jet_to_map(polys, 3)
            if e != 2:
                raise InvalidInput(f"degree-2 factor {i} extended to degree {e}")
            factors.append(forms)
            continue
        if fmt.n[i] == 1:
            unit_idx, hat = _affine_normalize(polys, 3)
            other = 1 - unit_idx
            y = hat[other]
            den, num = mobius_from_3jet(y[0], y[1], y[2])
            pair = [None, None]
            pair[unit_idx] = den
            pair[other] = num
            factors.append(tuple(pair))
        elif fmt.n[i] == 2:
            factors.append(conic_through_3jet(polys))
        else:
            raise AutarkyViolation(f"factor {i} still has dimension {fmt.n[i]} > 2")
    curve = CurveMap(fmt, tuple(factors))
    for i in range(fmt.k):
        if not jets_projectively_equal(curve.factors[i], jet.factors[i], 3):
            raise InvalidInput(f"factor {i} of the curve misses its jet")  # safety net
    return curve


# ---------------------------------------------------------------------------
# linearization


@dataclass(frozen=True, eq=False)
class Linearization:
    """Exact identity embed(h(s,t)) = matrix . (monomials of degree a)."""

    curve: CurveMap
    matrix: tuple  # (N+1) rows, each of length a+1
    degree: int

    @property
    def span_dim(self) -> int:
        """Projective dimension of the span of the embedded curve."""
        return linalg.mat_rank([list(r) for r in self.matrix]) - 1

    def column(self, j):
        return [row[j] for row in self.matrix]

    def columns(self, upto=None):
        upto = self.degree + 1 if upto is None else upto
        return [self.column(j) for j in range(upto)]


def linearize(curve: CurveMap) -> Linearization:
    """Expand the embedded curve symbolically against the monomial basis
    of the parameter line."""
    fmt = curve.format
    a = curve.embedded_degree
    caches = [dict() for _ in range(fmt.k)]

    def factor_product(i, exp):
        prod = caches[i].get(exp)
        if prod is None:
            prod = [1]
            for j, e in enumerate(exp):
                for _ in range(e):
                    prod = poly.mul(prod, list(curve.factors[i][j]))
            caches[i][exp] = prod
        return prod

    rows = []
    for exps in fmt.index_iter():
        prod = factor_product(0, exps[0])
        for i in range(1, fmt.k):
            prod = poly.mul(prod, factor_product(i, exps[i]))
        prod = prod + [0] * (a + 1 - len(prod))
        rows.append(tuple(prod[: a + 1]))
    return Linearization(curve=curve, matrix=tuple(rows), degree=a)


def detect_power_substitution(curve: CurveMap):
    """When every coordinate form only involves t-exponents divisible by
    some kappa >= 2 (and kappa divides the degree), the map factors
    through t -> t**kappa; return (kappa, reduced curve), else (1, curve).
    """
    exponents = set()
    for forms in curve.factors:
        deg = len(forms[0]) - 1
        exponents.add(deg)
        for f in forms:
            for j, c in enumerate(f):
                if c:
                    exponents.add(j)
    kappa = 0
    for e in exponents:
        kappa = int_gcd(kappa, e)
    if kappa <= 1:
        return 1, curve
    new_factors = []
    for forms in curve.factors:
        deg = (len(forms[0]) - 1) // kappa
        new_factors.append(tuple(tuple(f[j * kappa] for j in range(deg + 1))
                                 for f in forms))
    return kappa, CurveMap(curve.format, tuple(new_factors))


# ---------------------------------------------------------------------------
# hyperplane-section decomposition on a reduced (piecewise) curve


def hyperplane_section_decompose(curve, p: PSTensor, seed: int = 0,
                                 retries: int = 32, tol: float = 1e-8,
                                 merge_tol: float = 1e-7) -> Decomposition:
    """Decompose p as a combination of points of the curve cut out by a
    random hyperplane through p inside the span of the embedded curve.

    Draws are seeded and retried; every returned point is the image of a
    recorded parameter on one of the components.
    """
    if isinstance(curve, CurveMap):
        curve = PiecewiseCurve((curve,))
    fmt = curve.format
    lins = [linearize(c) for c in curve.components]
    pv = p.numeric()
    pn = np.linalg.norm(pv)

    span_cols = []
    for lin in lins:
        span_cols.extend(np.asarray([complex(v) for v in lin.column(j)])
                         for j in range(lin.degree + 1))
    if linalg.solve_in_span(list(pv), [list(c) for c in span_cols], tol=tol) is None:
        raise NotInSpan("target is not in the span of the embedded curve")

    rng = np.random.default_rng(seed)
    for attempt in range(retries):
        g1 = rng.standard_normal(fmt.size) + 1j * rng.standard_normal(fmt.size)
        g2 = rng.standard_normal(fmt.size) + 1j * rng.standard_normal(fmt.size)
        ell = g1 * (g2 @ pv) - g2 * (g1 @ pv)  # bilinear, so ell(p) = 0

        cand_params = []
        cand_vectors = []
        cand_points = []
        degenerate = False
        for lin in lins:
            a = lin.degree
            mat = np.asarray([[complex(v) for v in row] for row in lin.matrix])
            section = ell @ mat  # binary form of degree a on the component
            if np.linalg.norm(section) <= 1e-13 * np.linalg.norm(ell) * np.linalg.norm(mat):
                degenerate = True  # hyperplane contains the whole component
                break
            roots = poly.form_roots(list(section), precision=working_precision(),
                                    merge_tol=merge_tol)
            if len(roots) < a:
                degenerate = True  # multiple root collapsed; resample
                break
            for (s0, t0) in roots:
                x = lin.curve.evaluate(s0, t0)
                vec = embed(fmt, x).numeric()
                cand_params.append((lin.curve, (s0, t0)))
                cand_vectors.append(vec)
                cand_points.append(x)
        if degenerate:
            continue

        # deduplicate projectively
        keep = []
        unit = []
        for idx, vec in enumerate(cand_vectors):
            u = vec / np.linalg.norm(vec)
            dup = False
            for w in unit:
                if 1.0 - abs(np.vdot(u, w)) <= merge_tol:
                    dup = True
                    break
            if dup:
                continue
            keep.append(idx)
            unit.append(u)

        # a single section point proportional to p gives a size-1 answer
        for idx in keep:
            u = cand_vectors[idx] / np.linalg.norm(cand_vectors[idx])
            if 1.0 - abs(np.vdot(u, pv / pn)) <= 1e-12:
                coeff = complex(np.vdot(u, pv) / np.linalg.norm(cand_vectors[idx]))
                return Decomposition(fmt, ((coeff, cand_points[idx]),))

        coeffs = linalg.solve_in_span(list(pv),
                                      [list(cand_vectors[i]) for i in keep], tol=tol)
        if coeffs is None:
            continue
        scale = max(abs(c) for c in coeffs)
        support = [i for c, i in zip(coeffs, keep) if abs(c) > 1e-11 * scale]
        coeffs = linalg.solve_in_span(list(pv),
                                      [list(cand_vectors[i]) for i in support], tol=tol)
        if coeffs is None:
            continue
        terms = tuple((complex(c), cand_points[i]) for c, i in zip(coeffs, support))
        return Decomposition(fmt, terms)
    raise RetriesExhausted("no usable hyperplane section found", seed=seed)
