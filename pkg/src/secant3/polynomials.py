"""Dense univariate polynomials and binary forms.

Polynomials are coefficient lists in increasing degree, ``p[j]`` the
coefficient of ``t**j``.  A binary form of degree ``d`` in ``(s, t)`` is a
list of length ``d + 1`` with ``coeffs[j]`` the coefficient of
``s**(d-j) * t**j``; restricting to ``s = 1`` recovers the plain
polynomial reading of the same list.

Everything here works over exact scalars (int / Fraction) or complex
floats alike, except the gcd routines, which require exact input.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
import numpy as np

from .errors import InvalidInput
from .scalars import DEFAULT_PRECISION, is_exact


def trim(p):
    """Drop trailing zero coefficients; the zero polynomial becomes []."""
    n = len(p)
    while n and not p[n - 1]:
        n -= 1
    return list(p[:n])


def degree(p) -> int:
    """Degree of p, with deg 0 = -1 for the zero polynomial."""
    return len(trim(p)) - 1


def add(p, q):
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] = out[i] + c
    return out


def scale(p, c):
    return [c * a for a in p]


def mul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def mul_trunc(p, q, n):
    """Product of p and q modulo t**n."""
    out = [0] * n
    for i, a in enumerate(p):
        if i >= n or not a:
            continue
        for j, b in enumerate(q):
            if i + j >= n:
                break
            out[i + j] = out[i + j] + a * b
    return out


def pow_trunc(p, e, n):
    out = [1] + [0] * (n - 1)
    for _ in range(e):
        out = mul_trunc(out, p, n)
    return out


def eval_at(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def deriv(p):
    return [i * c for i, c in enumerate(p)][1:]


def series_inverse(p, n):
    """Multiplicative inverse of p modulo t**n; requires p[0] != 0."""
    if not p or not p[0]:
        raise InvalidInput("series has no constant term, cannot invert")
    c0 = Fraction(1, 1) / p[0] if is_exact(p[0]) else 1.0 / p[0]
    out = [c0] + [0] * (n - 1)
    for i in range(1, n):
        acc = 0
        for j in range(1, min(i, len(p) - 1) + 1):
            acc = acc + p[j] * out[i - j]
        out[i] = -c0 * acc
    return out


def divmod_exact(p, q):
    """Polynomial division with remainder over an exact field."""
    q = trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    p = [Fraction(c) for c in trim(p)]
    qlead = Fraction(q[-1])
    dq = len(q) - 1
    quot = [Fraction(0)] * max(len(p) - dq, 0)
    while len(p) - 1 >= dq and p:
        shift = len(p) - 1 - dq
        c = p[-1] / qlead
        quot[shift] = c
        for i, b in enumerate(q):
            p[shift + i] -= c * b
        p = trim(p)
    return quot, p


def gcd(p, q):
    """Monic gcd over the rationals (exact input only)."""
    a, b = trim(p), trim(q)
    while b:
        _, r = divmod_exact(a, b)
        a, b = b, r
    if not a:
        return []
    lead = Fraction(a[-1])
    return [Fraction(c) / lead for c in a]


def is_squarefree_exact(p) -> bool:
    p = trim(p)
    if len(p) <= 1:
        return True
    return len(gcd(p, deriv(p))) == 1


def integerize(vectors):
    """Scale a family of coefficient lists by one positive rational so the
    entries become coprime integers.

    Only valid for projective data (the family is defined up to a common
    scalar).  Exact input only; returns lists of ints.
    """
    from math import gcd as _gcd

    den = 1
    for v in vectors:
        for c in v:
            if isinstance(c, Fraction) and c.denominator != 1:
                den = den * c.denominator // _gcd(den, c.denominator)
    scaled = [[int(c * den) for c in v] for v in vectors]
    g = 0
    for v in scaled:
        for c in v:
            g = _gcd(g, c)
    if g > 1:
        scaled = [[c // g for c in v] for v in scaled]
    return scaled


# ---------------------------------------------------------------------------
# binary forms


def form_degree(coeffs) -> int:
    return len(coeffs) - 1


def form_eval(coeffs, s0, t0):
    d = form_degree(coeffs)
    acc = 0
    sp = [1]
    for _ in range(d):
        sp.append(sp[-1] * s0)
    tp = 1
    for j, c in enumerate(coeffs):
        if c:
            acc = acc + c * sp[d - j] * tp
        tp = tp * t0
    return acc


def form_mul(a, b):
    # degrees add; the coefficient list convolution is the same as mul()
    out = mul(list(a), list(b))
    want = form_degree(a) + form_degree(b) + 1
    out = out + [0] * (want - len(out))
    return out


def form_substitute(coeffs, sub_s, sub_t):
    """Substitute (s, t) -> (sub_s, sub_t), two forms of equal degree e.

    Returns a form of degree d*e where d is the input degree.
    """
    d = form_degree(coeffs)
    e = form_degree(sub_s)
    if form_degree(sub_t) != e:
        raise InvalidInput("substitution forms must have equal degree")
    out = [0] * (d * e + 1)
    s_pows = [[1]]
    t_pows = [[1]]
    for _ in range(d):
        s_pows.append(form_mul(s_pows[-1], sub_s) if len(s_pows) > 1 else list(sub_s))
        t_pows.append(form_mul(t_pows[-1], sub_t) if len(t_pows) > 1 else list(sub_t))
    for j, c in enumerate(coeffs):
        if not c:
            continue
        term = form_mul(s_pows[d - j], t_pows[j])
        for i, v in enumerate(term):
            out[i] = out[i] + c * v
    return out


def form_infinity_multiplicity(coeffs) -> int:
    """Multiplicity of the root [0:1], i.e. the power of s dividing the form."""
    d = form_degree(coeffs)
    return d - degree(list(coeffs))


def form_is_squarefree_exact(coeffs) -> bool:
    if form_infinity_multiplicity(coeffs) > 1:
        return False
    return is_squarefree_exact(list(coeffs))


def forms_common_factor_degree(forms) -> int:
    """Degree of the gcd of a family of binary forms of common degree.

    Exact input only.  Zero means the family is basepoint-free.
    """
    nonzero = [f for f in forms if trim(f)]
    if not nonzero:
        raise InvalidInput("all forms are zero")
    inf_mult = min(form_infinity_multiplicity(f) for f in nonzero)
    g = []
    for f in nonzero:
        g = gcd(g, list(f)) if g else trim(f)
        if len(g) == 1 and inf_mult == 0:
            return 0
    return inf_mult + (len(trim(g)) - 1)


# ---------------------------------------------------------------------------
# numeric roots


def find_roots(p, precision: int = DEFAULT_PRECISION):
    """Complex roots of a polynomial given in increasing-degree order.

    Uses companion-matrix eigenvalues plus a few Newton steps at double
    precision; an extended ``precision`` routes through mpmath instead.
    """
    p = trim([complex(c) for c in p])
    if len(p) <= 1:
        return []
    if precision <= DEFAULT_PRECISION:
        roots = [complex(z) for z in np.roots(list(reversed(p)))]
        return _newton_polish(p, roots)
    with mpmath.workprec(precision):
        roots = mpmath.polyroots([mpmath.mpc(c) for c in reversed(p)], maxsteps=200)
    return [complex(r) for r in roots]


def _newton_polish(p, roots, iters: int = 3):
    dp = deriv(p)
    out = []
    for z in roots:
        for _ in range(iters):
            dz = eval_at(dp, z)
            if dz == 0:
                break
            step = eval_at(p, z) / dz
            z = z - step
            if abs(step) <= 1e-16 * max(1.0, abs(z)):
                break
        out.append(z)
    return out


def form_roots(coeffs, precision: int = DEFAULT_PRECISION, merge_tol: float = 0.0):
    """Projective roots of a binary form as normalized (s0, t0) pairs.

    Finite roots r come back as (1, r) when |r| <= 1 and (1/r, 1)
    otherwise; roots at infinity as (0, 1).  ``merge_tol`` > 0 merges
    clusters of nearby roots to a single representative.
    """
    inf_mult = form_infinity_multiplicity(coeffs)
    finite = find_roots(list(coeffs), precision)
    if merge_tol > 0:
        merged = []
        for r in finite:
            for m in merged:
                if abs(r - m) <= merge_tol * max(1.0, abs(m)):
                    break
            else:
                merged.append(r)
        finite = merged
        inf_mult = min(inf_mult, 1)
    params = []
    for r in finite:
        if abs(r) <= 1.0:
            params.append((1.0 + 0.0j, complex(r)))
        else:
            params.append((1.0 / complex(r), 1.0 + 0.0j))
    params.extend([(0.0j, 1.0 + 0.0j)] * inf_mult)
    return params
