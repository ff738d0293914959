"""Seeded random instances for tests, demos and batch runs.

Everything here is deterministic in the seed.  Coefficients are small
integers so the exact pipelines stay fast; degenerate draws (coincident
points, dependent jets, formats that force a second-secant point) are
resampled.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .decompose import (Jet3, PointPlusTangent, TangentPresentation,
                        ThreePoints, TwoTangentsOnLine)
from .errors import IndependenceFailure
from .tensorspace import (Format, JetScheme, MultiJet, embed, jet_vectors,
                          points_projectively_equal, tensor_combination)
from . import linalg


def _rng(seed):
    return np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed


def _nonzero_vector(rng, length, lo=-5, hi=6):
    while True:
        v = tuple(int(x) for x in rng.integers(lo, hi, size=length))
        if any(v):
            return v


def random_format(seed, max_k=4, max_n=2, max_d=3, max_size=2500,
                  require_degree_one=False) -> Format:
    rng = _rng(seed)
    while True:
        k = int(rng.integers(1, max_k + 1))
        n = tuple(int(rng.integers(1, max_n + 1)) for _ in range(k))
        d = tuple(int(rng.integers(1, max_d + 1)) for _ in range(k))
        fmt = Format(n, d)
        if fmt.size > max_size:
            continue
        if require_degree_one and 1 not in d:
            continue
        return fmt


def random_point(fmt: Format, rng):
    return tuple(_nonzero_vector(rng, ni + 1) for ni in fmt.n)


def random_three_points(fmt: Format, seed):
    rng = _rng(seed)
    while True:
        pts = [random_point(fmt, rng) for _ in range(3)]
        if any(points_projectively_equal(pts[a], pts[b])
               for a in range(3) for b in range(a + 1, 3)):
            continue
        vecs = [embed(fmt, x) for x in pts]
        if linalg.span_rank([list(v.coeffs) for v in vecs]) < 3:
            continue
        pres = ThreePoints(*pts)
        coeffs = [Fraction(int(rng.integers(1, 9))) for _ in range(3)]
        p = tensor_combination(vecs, coeffs)
        return pres, p


def random_tangent_presentation(fmt: Format, seed):
    """A tangent presentation with a nonempty moving set, plus a point on
    the tangent line that is not the support itself."""
    rng = _rng(seed)
    while True:
        o = random_point(fmt, rng)
        w = []
        moving = False
        for i in range(fmt.k):
            if rng.integers(0, 2) or not moving:
                vec = _nonzero_vector(rng, fmt.n[i] + 1)
                if not _proportional_exact(o[i], vec):
                    w.append(vec)
                    moving = True
                    continue
            w.append(tuple(0 for _ in range(fmt.n[i] + 1)))
        tp = TangentPresentation(fmt, o, tuple(w))
        jet = JetScheme(fmt, 2, tuple(
            tuple((o[i][j], w[i][j]) for j in range(fmt.n[i] + 1))
            for i in range(fmt.k)))
        vecs = jet_vectors(jet)
        if linalg.span_rank([list(v.coeffs) for v in vecs]) < 2:
            continue
        c0 = Fraction(int(rng.integers(-8, 9)))
        c1 = Fraction(int(rng.integers(1, 9)))
        p = tensor_combination(vecs, [c0, c1])
        return tp, p


def _proportional_exact(a, b):
    return all(a[i] * b[j] == a[j] * b[i]
               for i in range(len(a)) for j in range(i + 1, len(a)))


def random_jet2(fmt: Format, seed, support=None):
    rng = _rng(seed)
    while True:
        o = support if support is not None else random_point(fmt, rng)
        factors = []
        moving = False
        for i in range(fmt.k):
            dir_i = tuple(int(x) for x in rng.integers(-4, 5, size=fmt.n[i] + 1))
            if any(dir_i) and not _proportional_exact(o[i], dir_i):
                moving = True
            factors.append(tuple((o[i][j], dir_i[j]) for j in range(fmt.n[i] + 1)))
        if not moving:
            continue
        jet = JetScheme(fmt, 2, tuple(factors))
        vecs = jet_vectors(jet)
        if linalg.span_rank([list(v.coeffs) for v in vecs]) == 2:
            return jet


def random_point_plus_tangent(fmt: Format, seed):
    rng = _rng(seed)
    while True:
        jet = random_jet2(fmt, rng)
        a = random_point(fmt, rng)
        if points_projectively_equal(a, jet.support()):
            continue
        vecs = [embed(fmt, a)] + jet_vectors(jet)
        if linalg.span_rank([list(v.coeffs) for v in vecs]) < 3:
            continue
        pres = PointPlusTangent(a, jet)
        coeffs = [Fraction(int(rng.integers(1, 9))) for _ in range(3)]
        p = tensor_combination(vecs, coeffs)
        return pres, p


def random_jet3(fmt: Format, seed, min_embedded_degree=4):
    """Order-3 jet whose embedded curve construction stays out of the
    second secant variety (the multidegree-weighted degree is >= 4).

    Factors with n_i = 2 get plane-spanning jets, factors with n_i = 1
    get local degree 3 (occasionally 2 when another factor keeps the
    product embedded)."""
    rng = _rng(seed)
    while True:
        factors = []
        ramified_used = False
        a_bound = 0
        for i in range(fmt.k):
            o = _nonzero_vector(rng, fmt.n[i] + 1)
            d1 = tuple(int(x) for x in rng.integers(-4, 5, size=fmt.n[i] + 1))
            d2 = tuple(int(x) for x in rng.integers(-4, 5, size=fmt.n[i] + 1))
            if fmt.n[i] == 1:
                allow_ramified = (fmt.k >= 2 and not ramified_used
                                  and rng.integers(0, 4) == 0)
                if allow_ramified and any(d2) and not _proportional_exact(o, d2):
                    factors.append(tuple((o[j], 0, d2[j]) for j in range(2)))
                    ramified_used = True
                    a_bound += 2 * fmt.d[i]
                    continue
                if not any(d1) or _proportional_exact(o, d1):
                    d1 = (o[1] + 1, o[0])
                    if _proportional_exact(o, d1):
                        d1 = (o[1], o[0] + 1)
                factors.append(tuple((o[j], d1[j], d2[j]) for j in range(2)))
                a_bound += fmt.d[i]
            else:
                tries = 0
                while linalg.mat_rank([list(o), list(d1), list(d2)]) < 3:
                    d1 = tuple(int(x) for x in rng.integers(-4, 5, size=3))
                    d2 = tuple(int(x) for x in rng.integers(-4, 5, size=3))
                    tries += 1
                    if tries > 12:
                        break
                if linalg.mat_rank([list(o), list(d1), list(d2)]) < 3:
                    factors = None
                    break
                factors.append(tuple((o[j], d1[j], d2[j]) for j in range(3)))
                a_bound += 2 * fmt.d[i]
        if factors is None or a_bound < min_embedded_degree:
            continue
        jet = JetScheme(fmt, 3, tuple(factors))
        try:
            vecs = jet_vectors(jet)
        except IndependenceFailure:
            continue
        if linalg.span_rank([list(v.coeffs) for v in vecs]) < 3:
            continue
        return jet


def random_jet3_presentation(fmt: Format, seed):
    rng = _rng(seed)
    jet = random_jet3(fmt, rng)
    vecs = jet_vectors(jet)
    c0 = Fraction(int(rng.integers(-8, 9)))
    c1 = Fraction(int(rng.integers(-8, 9)))
    c2 = Fraction(int(rng.integers(1, 9)))
    p = tensor_combination(vecs, [c0, c1, c2])
    return Jet3(jet), p


def random_two_tangents(fmt: Format, seed):
    """Presentation with two order-2 schemes supported on a line moving a
    degree-one factor; the moving-factor components of each direction are
    kept inside the span of the two supports so the connecting curve
    really contains both schemes."""
    rng = _rng(seed)
    deg_one = [i for i, d in enumerate(fmt.d) if d == 1]
    if not deg_one:
        raise ValueError("format has no degree-one factor")
    i = deg_one[int(rng.integers(0, len(deg_one)))]
    while True:
        base = random_point(fmt, rng)
        oi_v = base[i]
        oi_w = _nonzero_vector(rng, fmt.n[i] + 1)
        if _proportional_exact(oi_v, oi_w):
            continue
        ov = base[:i] + (oi_v,) + base[i + 1:]
        ow = base[:i] + (oi_w,) + base[i + 1:]

        def jet_at(o):
            factors = []
            moving = False
            for j in range(fmt.k):
                if j == i:
                    # direction along the line spanned by the two supports
                    lam, mu = int(rng.integers(-3, 4)), int(rng.integers(-3, 4))
                    dir_j = tuple(lam * oi_v[m] + mu * oi_w[m]
                                  for m in range(fmt.n[i] + 1))
                else:
                    dir_j = tuple(int(x) for x in rng.integers(-4, 5,
                                                               size=fmt.n[j] + 1))
                if any(dir_j) and not _proportional_exact(o[j], dir_j):
                    moving = True
                factors.append(tuple((o[j][m], dir_j[m])
                                     for m in range(fmt.n[j] + 1)))
            return JetScheme(fmt, 2, tuple(factors)) if moving else None

        v = jet_at(ov)
        w = jet_at(ow)
        if v is None or w is None:
            continue
        vecs = jet_vectors(v) + jet_vectors(w)
        if linalg.span_rank([list(t.coeffs) for t in vecs]) < 4:
            continue
        pres = TwoTangentsOnLine(v, w, i)
        coeffs = [Fraction(int(rng.integers(1, 9))) for _ in range(4)]
        p = tensor_combination(vecs, coeffs)
        return pres, p


def _max_jet3_degree(fmt: Format) -> int:
    """Largest embedded curve degree an order-3 jet can force on this
    format: factors on a line contribute d_i (2 d_i for at most one
    ramified factor when there are several factors), plane factors 2 d_i."""
    base = sum(d if n == 1 else 2 * d for n, d in zip(fmt.n, fmt.d))
    extra = 0
    if fmt.k >= 2:
        extra = max((d for n, d in zip(fmt.n, fmt.d) if n == 1), default=0)
    return base + extra


def random_border3_presentation(seed, max_k=4, max_n=2, max_d=3, max_size=2500):
    """One of the four presentations, drawn uniformly, with its tensor."""
    rng = _rng(seed)
    kind = int(rng.integers(0, 4))
    if kind == 3:
        while True:
            fmt = random_format(rng, max_k=max_k, max_n=max_n, max_d=max_d,
                                max_size=max_size, require_degree_one=True)
            if fmt.k >= 2:
                break
        return random_two_tangents(fmt, rng)
    fmt = random_format(rng, max_k=max_k, max_n=max_n, max_d=max_d,
                        max_size=max_size)
    if kind in (0, 1):
        while fmt.size < 4:
            fmt = random_format(rng, max_k=max_k, max_n=max_n, max_d=max_d,
                                max_size=max_size)
        if kind == 0:
            return random_three_points(fmt, rng)
        return random_point_plus_tangent(fmt, rng)
    while _max_jet3_degree(fmt) < 4:
        fmt = random_format(rng, max_k=max_k, max_n=max_n, max_d=max_d,
                            max_size=max_size)
    return random_jet3_presentation(fmt, rng)


def random_multijet(seed, max_alpha=3, max_total=6, max_sum_d=6, max_size=2500):
    """Curvilinear multi-jet with independent embedded jet vectors, plus a
    tensor in its span."""
    rng = _rng(seed)
    while True:
        fmt = random_format(rng, max_k=3, max_n=2, max_d=3, max_size=max_size)
        if sum(fmt.d) > max_sum_d:
            continue
        alpha = int(rng.integers(1, max_alpha + 1))
        orders = [1] * alpha
        for _ in range(int(rng.integers(0, max_total - alpha + 1))):
            orders[int(rng.integers(0, alpha))] += 1
        total = sum(orders)
        if total > max_total or fmt.size < total:
            continue
        comps = []
        ok = True
        for c in orders:
            for _ in range(8):
                factors = []
                for i in range(fmt.k):
                    coords = []
                    o = _nonzero_vector(rng, fmt.n[i] + 1)
                    for j in range(fmt.n[i] + 1):
                        tail = [int(x) for x in rng.integers(-3, 4, size=c - 1)]
                        coords.append(tuple([o[j]] + tail))
                    factors.append(tuple(coords))
                jet = JetScheme(fmt, c, tuple(factors))
                if all(not points_projectively_equal(jet.support(), cc.support())
                       for cc in comps):
                    comps.append(jet)
                    break
            else:
                ok = False
                break
        if not ok:
            continue
        mj = MultiJet(tuple(comps))
        try:
            stacked = [v for comp in comps for v in jet_vectors(comp)]
        except IndependenceFailure:
            continue
        if linalg.span_rank([list(v.coeffs) for v in stacked]) < total:
            continue
        coeffs = [Fraction(int(rng.integers(-6, 7))) for _ in stacked]
        if not any(coeffs):
            coeffs[0] = Fraction(1)
        p = tensor_combination(stacked, coeffs)
        return mj, p
