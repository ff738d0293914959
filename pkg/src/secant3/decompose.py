"""Decomposition pipelines and rank-bound certificates.

Input is always a *presentation* (one of the normal forms a border-rank-3
point admits, or a curvilinear multi-jet), never a bare coefficient
vector: recovering a presentation from raw coefficients is a hard inverse
problem that this package does not attempt.  Each pipeline produces an
explicit decomposition together with a certificate recording the proved
upper bound, the achieved size, the verification residual and the
flattening lower bound.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .curves import CurveMap, PiecewiseCurve, curve_through_jet3, \
    hyperplane_section_decompose
from .errors import (IndependenceFailure, InvalidInput, InvalidPresentation,
                     NotATangent, NotInSpan, RetriesExhausted)
from .scalars import VERIFY_TOL, is_exact
from .sylvester import decompose_via_curve
from .tensorspace import (Decomposition, Format, JetScheme, MultiJet, PSTensor,
                          check_point, embed, flattening_report, jet_vectors,
                          normalize_jet, points_projectively_equal,
                          tensor_combination, verify_decomposition)

# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True, eq=False)
class ThreePoints:
    """Three distinct reduced points."""

    x1: tuple
    x2: tuple
    x3: tuple

    def points(self):
        return (self.x1, self.x2, self.x3)

    def validate(self, fmt: Format):
        pts = [check_point(fmt, x) for x in self.points()]
        for a in range(3):
            for b in range(a + 1, 3):
                if points_projectively_equal(pts[a], pts[b]):
                    raise InvalidInput("the three points must be pairwise distinct")


@dataclass(frozen=True, eq=False)
class PointPlusTangent:
    """A reduced point plus a connected degree-2 scheme."""

    point: tuple
    jet: JetScheme

    def validate(self, fmt: Format):
        check_point(fmt, self.point)
        if self.jet.format != fmt or self.jet.order != 2:
            raise InvalidInput("tangent part must be an order-2 jet of the format")
        if points_projectively_equal(self.point, self.jet.support()):
            raise InvalidInput("point must be disjoint from the tangent support")


@dataclass(frozen=True, eq=False)
class Jet3:
    """A connected curvilinear scheme of degree 3."""

    jet: JetScheme

    def validate(self, fmt: Format):
        if self.jet.format != fmt or self.jet.order != 3:
            raise InvalidInput("presentation needs an order-3 jet of the format")


@dataclass(frozen=True, eq=False)
class TwoTangentsOnLine:
    """Two degree-2 schemes whose supports span a line moving only one
    factor; that factor must have degree 1 so the line embeds linearly."""

    v: JetScheme
    w: JetScheme
    shared_factor: int

    def validate(self, fmt: Format):
        i = self.shared_factor
        if not 0 <= i < fmt.k:
            raise InvalidInput("shared factor index out of range")
        if fmt.d[i] != 1:
            raise InvalidInput("the shared factor must have degree 1")
        if self.v.format != fmt or self.w.format != fmt:
            raise InvalidInput("jets must live in the presentation format")
        if self.v.order != 2 or self.w.order != 2:
            raise InvalidInput("both schemes must be order-2 jets")
        ov, ow = self.v.support(), self.w.support()
        for j in range(fmt.k):
            same = points_projectively_equal((ov[j],), (ow[j],))
            if j == i and same:
                raise InvalidInput("supports must differ in the shared factor")
            if j != i and not same:
                raise InvalidInput("supports may differ only in the shared factor")


BorderPresentation = (ThreePoints, PointPlusTangent, Jet3, TwoTangentsOnLine)


@dataclass(frozen=True, eq=False)
class TangentPresentation:
    """A point on a tangent line: support o and direction vectors w."""

    format: Format
    o: tuple
    w: tuple

    def __post_init__(self):
        o = check_point(self.format, self.o)
        w = tuple(tuple(v) for v in self.w)
        if len(w) != self.format.k:
            raise InvalidInput("direction needs one vector per factor")
        for i, v in enumerate(w):
            if len(v) != self.format.n[i] + 1:
                raise InvalidInput(f"direction vector {i} has wrong length")
        object.__setattr__(self, "o", o)
        object.__setattr__(self, "w", w)


def tangent_support(tp: TangentPresentation):
    """Factors where the direction is not proportional to the support."""
    out = []
    for i in range(tp.format.k):
        o, w = tp.o[i], tp.w[i]
        if not any(w):
            continue
        if not _proportional(o, w):
            out.append(i)
    if not out:
        raise NotATangent("direction is proportional to the support everywhere")
    return tuple(out)


def _proportional(a, b):
    if all(is_exact(x) for x in a) and all(is_exact(x) for x in b):
        return all(a[i] * b[j] == a[j] * b[i]
                   for i in range(len(a)) for j in range(i + 1, len(a)))
    import numpy as np

    av = np.asarray(a, complex)
    bv = np.asarray(b, complex)
    na, nb = np.linalg.norm(av), np.linalg.norm(bv)
    if na == 0 or nb == 0:
        return True
    mu = np.vdot(av, bv) / (na * na)
    return float(np.linalg.norm(bv - mu * av)) <= 1e-10 * nb


# ---------------------------------------------------------------------------
# bounds


def rank_bound_border3(fmt: Format) -> int:
    """Upper bound -1 + sum(2 d_i) for the rank of any point of the third
    secant variety."""
    return -1 + sum(2 * d for d in fmt.d)


def rank_bound_curvilinear(fmt: Format, c: int, alpha: int) -> int:
    """Upper bound 2*alpha + c*(sum(d_i) - 1) for points spanned by a
    degree-c curvilinear scheme with alpha components."""
    if not 1 <= alpha <= c:
        raise InvalidInput("need c >= alpha >= 1")
    return 2 * alpha + c * (sum(fmt.d) - 1)


# ---------------------------------------------------------------------------
# ambient reduction (autarky)


@dataclass(frozen=True, eq=False)
class AutarkyReduction:
    """Per-factor restriction data: either ("keep", basis_rows, pivots) to
    a coordinate subspace, or ("drop", fixed_vector) for a factor in which
    the scheme is constant."""

    original_format: Format
    reduced_format: Format
    actions: tuple

    @property
    def is_identity(self) -> bool:
        if self.original_format != self.reduced_format:
            return False
        return all(a[0] == "keep" and len(a[2]) == self.original_format.n[i] + 1
                   for i, a in enumerate(self.actions))

    def reduce_vector(self, i: int, v):
        kind, *data = self.actions[i]
        if kind != "keep":
            raise InvalidInput("factor was dropped")
        _, pivots = data
        return tuple(v[j] for j in pivots)

    def embed_vector(self, i: int, c):
        kind, *data = self.actions[i]
        if kind != "keep":
            raise InvalidInput("factor was dropped")
        basis, _ = data
        n = len(basis[0])
        return tuple(sum(c[r] * basis[r][j] for r in range(len(basis)))
                     for j in range(n))

    def reduce_point(self, x):
        out = []
        for i, action in enumerate(self.actions):
            if action[0] == "keep":
                out.append(self.reduce_vector(i, x[i]))
        return tuple(out)

    def embed_point(self, x_red):
        out = []
        r = 0
        for i, action in enumerate(self.actions):
            if action[0] == "keep":
                out.append(self.embed_vector(i, x_red[r]))
                r += 1
            else:
                out.append(tuple(action[1]))
        return tuple(out)

    def reduce_jet(self, jet: JetScheme) -> JetScheme:
        factors = []
        for i, action in enumerate(self.actions):
            if action[0] != "keep":
                continue
            pivots = action[2]
            factors.append(tuple(jet.factors[i][j] for j in pivots))
        return JetScheme(self.reduced_format, jet.order, tuple(factors))

    def embed_decomposition(self, dec: Decomposition) -> Decomposition:
        terms = tuple((c, self.embed_point(x)) for c, x in dec.terms)
        return Decomposition(self.original_format, terms)


def _factor_vectors(obj, i: int):
    """All coordinate vectors the scheme exposes in factor i (supports and
    Taylor coefficients)."""
    if isinstance(obj, JetScheme):
        return [[p[j] for p in obj.factors[i]] for j in range(obj.order)]
    if isinstance(obj, MultiJet):
        out = []
        for comp in obj.components:
            out.extend(_factor_vectors(comp, i))
        return out
    if isinstance(obj, Jet3):
        return _factor_vectors(obj.jet, i)
    if isinstance(obj, ThreePoints):
        return [list(x[i]) for x in obj.points()]
    if isinstance(obj, PointPlusTangent):
        return [list(obj.point[i])] + _factor_vectors(obj.jet, i)
    if isinstance(obj, TwoTangentsOnLine):
        return _factor_vectors(obj.v, i) + _factor_vectors(obj.w, i)
    raise InvalidInput(f"unsupported presentation {type(obj).__name__}")


def _factor_is_constant(obj, i: int) -> bool:
    """Whether the scheme projects to a single reduced point in factor i
    (all Taylor coefficient vectors proportional to one support)."""
    return linalg.span_rank(_factor_vectors(obj, i)) <= 1


def _presentation_format(obj):
    if isinstance(obj, (JetScheme, MultiJet)):
        return obj.format
    if isinstance(obj, Jet3):
        return obj.jet.format
    if isinstance(obj, PointPlusTangent):
        return obj.jet.format
    if isinstance(obj, TwoTangentsOnLine):
        return obj.v.format
    raise InvalidInput("presentation carries no format")


def autarky_reduce(obj) -> AutarkyReduction:
    """Shrink each factor to the span of the scheme's projection and drop
    factors where the projection is a single reduced point.  The rank of
    any point in the scheme's span is unchanged by this reduction."""
    if isinstance(obj, ThreePoints):
        raise InvalidInput("reduce ThreePoints by solving directly instead")
    fmt = _presentation_format(obj)
    actions = []
    new_n = []
    new_d = []
    for i in range(fmt.k):
        vecs = _factor_vectors(obj, i)
        if _factor_is_constant(obj, i):
            fixed = next(v for v in vecs if any(v))
            actions.append(("drop", tuple(fixed)))
            continue
        rref_rows, pivots = linalg.exact_rref(vecs)
        basis = tuple(tuple(row) for row in rref_rows)
        actions.append(("keep", basis, tuple(pivots)))
        new_n.append(len(pivots) - 1)
        new_d.append(fmt.d[i])
    if not new_n:
        raise InvalidInput("the scheme is a single reduced point; rank is 1")
    return AutarkyReduction(original_format=fmt,
                            reduced_format=Format(tuple(new_n), tuple(new_d)),
                            actions=tuple(actions))


# ---------------------------------------------------------------------------
# certificates


@dataclass
class Certificate:
    """Audit record for one decomposition run."""

    bound: int
    size: int
    mode: str
    residual: float
    flattening_max_rank: int
    seed: int
    status: str = "ok"
    fallback: bool = False
    input_digest: str = ""
    border_slope: float | None = None
    lower_bound_note: str = ""
    timings: dict = field(default_factory=dict)


def _digest(p: PSTensor, pres) -> str:
    blob = repr((type(pres).__name__, getattr(pres, "__dict__", None),
                 p.coeffs)).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _solve_span_coords(p: PSTensor, vectors, tol):
    gens = [list(v.coeffs) for v in vectors]
    target = list(p.coeffs)
    if p.is_exact and all(v.is_exact for v in vectors):
        coords = linalg.solve_in_span(target, gens, tol=tol)
    else:
        coords = linalg.solve_in_span([complex(x) for x in target],
                                      [[complex(x) for x in g] for g in gens],
                                      tol=tol)
    if coords is None:
        raise NotInSpan("tensor is not in the span of the presentation")
    return coords


# ---------------------------------------------------------------------------
# tangent pipeline


def decompose_tangent(tp: TangentPresentation, p: PSTensor, seed: int = 0,
                      tol: float = VERIFY_TOL) -> Decomposition:
    """Decompose a point of a tangent line; the size equals the sum of
    the degrees over the factors the direction actually moves."""
    fmt = tp.format
    E = tangent_support(tp)
    factors = []
    for i in range(fmt.k):
        if i in E:
            factors.append(tuple((tp.o[i][j], tp.w[i][j])
                                 for j in range(fmt.n[i] + 1)))
        else:
            factors.append(tuple((tp.o[i][j],) for j in range(fmt.n[i] + 1)))
    curve = CurveMap(fmt, tuple(factors))
    jet2 = curve.jet_at_zero(2)
    coords = _solve_span_coords(p, jet_vectors(jet2), tol)
    return decompose_via_curve(curve, p, border_jet=(2, coords), seed=seed, tol=tol)


def minimal_jet_order(jet: JetScheme, p: PSTensor, tol: float = VERIFY_TOL) -> int:
    """Smallest order c' such that p lies in the span of the order-c'
    sub-jet (c' = 1 means p is a point of the variety)."""
    vecs = jet_vectors(jet)
    for c in range(1, jet.order + 1):
        try:
            _solve_span_coords(p, vecs[:c], tol)
            return c
        except NotInSpan:
            continue
    raise NotInSpan("tensor is not in the span of the jet")


# ---------------------------------------------------------------------------
# border-rank-3 dispatcher


def decompose_border3(pres, p: PSTensor, seed: int = 0, tol: float = VERIFY_TOL,
                      retries: int = 32):
    """Decompose a tensor given one of the border-rank-3 presentations.

    Returns (Decomposition, Certificate); the achieved size never exceeds
    -1 + sum(2 d_i).
    """
    fmt = p.format
    t0 = time.perf_counter()
    if isinstance(pres, ThreePoints):
        pres.validate(fmt)
        dec, fallback = _decompose_three_points(pres, p, tol), False
    elif isinstance(pres, PointPlusTangent):
        pres.validate(fmt)
        dec, fallback = _decompose_point_plus_tangent(pres, p, seed, tol), False
    elif isinstance(pres, Jet3):
        pres.validate(fmt)
        dec, fallback = _decompose_jet3(pres, p, seed, tol), False
    elif isinstance(pres, TwoTangentsOnLine):
        pres.validate(fmt)
        dec, fallback = _decompose_two_tangents(pres, p, seed, tol, retries)
    else:
        raise InvalidInput(f"unknown presentation {type(pres).__name__}")

    bound = rank_bound_border3(fmt)
    if dec.size > bound:
        raise InvalidPresentation(
            f"size {dec.size} exceeds the bound {bound}; presentation invalid")
    record = verify_decomposition(p, dec, mode="auto", tol=tol)
    report = flattening_report(p)
    cert = Certificate(bound=bound, size=dec.size, mode=record.mode,
                       residual=record.residual,
                       flattening_max_rank=report.max_rank, seed=seed,
                       status="fallback" if fallback else "ok",
                       fallback=fallback, input_digest=_digest(p, pres),
                       timings={"total": time.perf_counter() - t0})
    return dec, cert


def _decompose_three_points(pres: ThreePoints, p, tol):
    fmt = p.format
    vecs = [embed(fmt, x) for x in pres.points()]
    coords = _solve_span_coords(p, vecs, tol)
    terms = tuple((c, x) for c, x in zip(coords, pres.points()) if c)
    return Decomposition(fmt, terms)


def _tangent_from_jet2(jet: JetScheme) -> TangentPresentation:
    w = tuple(tuple(p[1] for p in factor) for factor in jet.factors)
    return TangentPresentation(jet.format, jet.support(), w)


def _decompose_point_plus_tangent(pres: PointPlusTangent, p, seed, tol):
    fmt = p.format
    point_vec = embed(fmt, pres.point)
    jvecs = jet_vectors(pres.jet)
    coords = _solve_span_coords(p, [point_vec] + jvecs, tol)
    mu, c0, c1 = coords
    terms = []
    if mu:
        terms.append((mu, pres.point))
    if c1:
        q = tensor_combination(jvecs, [c0, c1])
        tp = _tangent_from_jet2(pres.jet)
        dec_q = decompose_tangent(tp, q, seed=seed, tol=tol)
        terms.extend(dec_q.terms)
    elif c0:
        terms.append((c0, pres.jet.support()))
    return Decomposition(fmt, tuple(terms))


def _decompose_jet3(pres: Jet3, p, seed, tol):
    jet = normalize_jet(pres.jet)
    vecs = jet_vectors(jet)
    coords = _solve_span_coords(p, vecs, tol)
    if not coords[2]:
        # the point lives in the order-2 sub-jet span: tangent or point case
        if not coords[1]:
            return Decomposition(p.format, ((coords[0], jet.support()),))
        q = tensor_combination(vecs[:2], coords[:2])
        dec = decompose_tangent(_tangent_from_jet2(jet.truncate(2)), q,
                                seed=seed, tol=tol)
        return dec

    reduction = autarky_reduce(jet)
    jet_red = reduction.reduce_jet(jet)
    vecs_red = jet_vectors(jet_red)
    p_red = tensor_combination(vecs_red, coords)
    curve = curve_through_jet3(jet_red)
    delta = curve.embedded_degree
    if delta <= 3:
        raise InvalidPresentation(
            "embedded curve degree <= 3: the point lies in the second secant "
            "variety and is not a genuine border-rank-3 presentation")
    dec_red = decompose_via_curve(curve, p_red, border_jet=(3, None),
                                  seed=seed, tol=tol)
    return reduction.embed_decomposition(dec_red)


def _decompose_two_tangents(pres: TwoTangentsOnLine, p, seed, tol, retries):
    fmt = p.format
    i = pres.shared_factor
    vv = jet_vectors(pres.v)
    wv = jet_vectors(pres.w)
    coords = _solve_span_coords(p, vv + wv, tol)

    def support_set(jet):
        try:
            return tangent_support(_tangent_from_jet2(jet))
        except NotATangent:
            return ()

    I = support_set(pres.v)
    J = support_set(pres.w)
    I1 = tuple(j for j in I if j != i)
    J1 = tuple(j for j in J if j != i)

    ov, ow = pres.v.support(), pres.w.support()
    dir_v = tuple(tuple(q[1] for q in f) for f in pres.v.factors)
    dir_w = tuple(tuple(q[1] for q in f) for f in pres.w.factors)

    components = [_line_through(fmt, ov, i, ow[i])]
    for j in I1:
        components.append(_line_through(fmt, ov, j, dir_v[j]))
    for j in J1:
        components.append(_line_through(fmt, ow, j, dir_w[j]))
    curve = PiecewiseCurve(tuple(components))

    try:
        dec = hyperplane_section_decompose(curve, p, seed=seed,
                                           retries=retries, tol=tol)
        alpha = sum(fmt.d[j] for j in I1) + sum(fmt.d[j] for j in J1) + fmt.d[i]
        if dec.size > alpha:
            raise RetriesExhausted(f"section produced {dec.size} > alpha={alpha}",
                                   seed=seed)
        return dec, False
    except RetriesExhausted:
        # decompose the two tangent parts separately; may exceed alpha by d_i
        terms = []
        for jet, part in ((pres.v, coords[:2]), (pres.w, coords[2:])):
            if not any(part):
                continue
            vecs = jet_vectors(jet)
            q = tensor_combination(vecs, part)
            if part[1]:
                dec_part = decompose_tangent(_tangent_from_jet2(jet), q,
                                             seed=seed, tol=tol)
                terms.extend(dec_part.terms)
            else:
                terms.append((part[0], jet.support()))
        return Decomposition(fmt, tuple(terms)), True


def _line_through(fmt: Format, base, moving_factor: int, direction):
    """Curve map constant at ``base`` except in one factor, where it moves
    linearly from the base coordinates along ``direction``."""
    factors = []
    for j in range(fmt.k):
        if j == moving_factor:
            factors.append(tuple((base[j][m], direction[m])
                                 for m in range(fmt.n[j] + 1)))
        else:
            factors.append(tuple((base[j][m],) for m in range(fmt.n[j] + 1)))
    return CurveMap(fmt, tuple(factors))


# ---------------------------------------------------------------------------
# curvilinear pipeline


def decompose_curvilinear(mj: MultiJet, p: PSTensor, seed: int = 0,
                          tol: float = VERIFY_TOL):
    """Decompose a tensor spanned by a curvilinear scheme with several
    connected components; the size never exceeds
    2*alpha + c*(sum(d_i) - 1)."""
    fmt = p.format
    t0 = time.perf_counter()
    components = tuple(normalize_jet(c) for c in mj.components)
    comp_vecs = [jet_vectors(comp) for comp in components]
    stacked = [v for vecs in comp_vecs for v in vecs]
    if linalg.span_rank([list(v.coeffs) for v in stacked]) < mj.total_degree:
        raise IndependenceFailure("embedded jet vectors are linearly dependent")
    coords = _solve_span_coords(p, stacked, tol)

    terms = []
    offset = 0
    for comp, vecs in zip(components, comp_vecs):
        part = list(coords[offset: offset + comp.order])
        offset += comp.order
        while part and not part[-1]:
            part.pop()
        if not part:
            continue
        c_min = len(part)
        if c_min == 1:
            terms.append((part[0], comp.support()))
            continue
        jet_min = comp.truncate(c_min)
        reduction = autarky_reduce(jet_min)
        jet_red = reduction.reduce_jet(jet_min)
        curve = _extend_jet_curve(jet_red)
        vecs_red = jet_vectors(jet_red)
        p_comp = tensor_combination(vecs_red, part)
        dec_comp = decompose_via_curve(curve, p_comp, border_jet=(c_min, None),
                                       seed=seed, tol=tol)
        dec_comp = reduction.embed_decomposition(dec_comp)
        terms.extend(dec_comp.terms)

    dec = Decomposition(fmt, tuple(terms))
    bound = rank_bound_curvilinear(fmt, mj.total_degree, mj.alpha)
    if dec.size > bound:
        raise InvalidPresentation(f"size {dec.size} exceeds the bound {bound}")
    record = verify_decomposition(p, dec, mode="auto", tol=tol)
    report = flattening_report(p)
    cert = Certificate(bound=bound, size=dec.size, mode=record.mode,
                       residual=record.residual,
                       flattening_max_rank=report.max_rank, seed=seed,
                       input_digest=_digest(p, mj),
                       timings={"total": time.perf_counter() - t0})
    return dec, cert


def _extend_jet_curve(jet: JetScheme) -> CurveMap:
    """Basepoint-free product map through a jet, one truncation lift per
    factor."""
    from .curves import extend_jet_to_map

    factors = []
    for i in range(jet.format.k):
        _, forms = extend_jet_to_map(jet.factor_polys(i), jet.order)
        factors.append(forms)
    return CurveMap(jet.format, tuple(factors))
