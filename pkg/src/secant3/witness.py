"""Witness tensors on products of lines: border rank 3 with prescribed rank.

For k unsymmetrized factors and any x between 3 and k-1 there is a tensor
of border rank 3 and rank exactly x.  The generator realizes it as a
point in the span of an order-3 jet on x+1 factors (each factor moved by
a seeded invertible fractional-linear map, so every projection has local
degree 3), decomposes it, and pads the remaining factors with fixed
generic points, which changes neither border rank nor rank.

Rank lower bounds for x >= 4 are not re-certified at runtime (the
certificate says so); the flattening report certifies border rank >= 3
and the epsilon-family certifies border rank <= 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .decompose import (Certificate, Jet3, autarky_reduce, decompose_border3,
                        minimal_jet_order, _solve_span_coords)
from .curves import curve_through_jet3, linearize
from .errors import InvalidInput, InvalidRange
from .scalars import VERIFY_TOL
from .tensorspace import (Decomposition, Format, JetScheme, PSTensor,
                          jet_vectors, normalize_jet, tensor_combination)

#: interpolation nodes for the epsilon-family (fixed for predictable
#: Vandermonde conditioning)
FAMILY_NODES = (1, -1, 2)


@dataclass(frozen=True, eq=False)
class WitnessBundle:
    format: Format
    tensor: PSTensor
    presentation: Jet3
    decomposition: Decomposition
    certificate: Certificate
    padded_factors: tuple
    rank: int


def _seeded_mobius_jet(k: int, rng) -> JetScheme:
    """Order-3 jet on a product of k lines, factor i the truncation of an
    invertible map with small integer coefficients."""
    fmt = Format((1,) * k, (1,) * k)
    factors = []
    for _ in range(k):
        while True:
            a, b, c, d = (int(v) for v in rng.integers(-5, 6, size=4))
            if a * d - b * c != 0 and (a or b):
                break
        factors.append(((a, b, 0), (c, d, 0)))
    return JetScheme(fmt, 3, tuple(factors))


def make_witness(k: int, x: int, seed: int = 0) -> WitnessBundle:
    """Build a tensor on k unsymmetrized binary factors with border rank 3
    and rank x, together with its verified decomposition."""
    if k < 3:
        raise InvalidRange("need at least 3 factors")
    if not 3 <= x <= k - 1:
        raise InvalidRange(f"x must lie in {{3..{k - 1}}}, got {x}")
    rng = np.random.default_rng(seed)
    jet_core = _seeded_mobius_jet(x + 1, rng)

    vecs = jet_vectors(jet_core)
    while True:
        c0, c1 = (Fraction(int(v)) for v in rng.integers(-9, 10, size=2))
        c2 = Fraction(int(rng.integers(1, 10)) * (1 if rng.integers(2) else -1))
        if c2:
            break
    p_core = tensor_combination(vecs, [c0, c1, c2])
    dec_core, cert_core = decompose_border3(Jet3(jet_core), p_core, seed=seed)

    pad = []
    for _ in range(k - (x + 1)):
        while True:
            u = tuple(int(v) for v in rng.integers(-5, 6, size=2))
            if any(u):
                break
        pad.append(u)
    pad = tuple(pad)

    fmt = Format((1,) * k, (1,) * k)
    jet = JetScheme(fmt, 3, jet_core.factors + tuple(
        ((u[0],), (u[1],)) for u in pad))
    p = tensor_combination(jet_vectors(jet), [c0, c1, c2])
    terms = tuple((coeff, tuple(pt) + pad) for coeff, pt in dec_core.terms)
    dec = Decomposition(fmt, terms)

    dec_check, cert = decompose_border3(Jet3(jet), p, seed=seed)
    if dec_check.size != dec.size or dec.size != x:
        raise InvalidInput(f"witness construction produced size {dec_check.size}, "
                           f"expected {x}")
    cert.lower_bound_note = ("rank lower bound taken from the product-of-lines "
                             "construction, not machine-certified" if x >= 4
                             else "rank certified by flattening lower bound")
    return WitnessBundle(format=fmt, tensor=p, presentation=Jet3(jet),
                         decomposition=dec_check, certificate=cert,
                         padded_factors=pad, rank=x)


def border_family(pres: Jet3, p: PSTensor, eps, seed: int = 0,
                  tol: float = VERIFY_TOL):
    """Three curve points at parameters eps * node exhibiting p as a limit
    of rank-3 tensors.

    Coefficients solve the moment conditions matching the order-3 jet
    expansion, so the relative residual decays linearly in eps.  Returns
    (Decomposition, residual).
    """
    if not eps:
        raise InvalidInput("eps must be nonzero")
    jet = normalize_jet(pres.jet)
    vecs = jet_vectors(jet)
    coords = list(_solve_span_coords(p, vecs, tol))

    c_min = minimal_jet_order(jet, p, tol=tol)
    reduction = autarky_reduce(jet) if c_min > 1 else None

    if c_min == 1:
        # p is a point of the variety: the exact one-point family, padded
        # with two zero-weight companions on the jet itself
        o = jet.support()
        shifted = _jet_point(jet, complex(eps))
        shifted2 = _jet_point(jet, -complex(eps))
        dec = Decomposition(p.format, ((coords[0], o), (0j, shifted), (0j, shifted2)))
        return dec, 0.0

    jet_red = reduction.reduce_jet(jet)
    curve = curve_through_jet3(jet_red)
    lin = linearize(curve)
    cols = lin.columns(3)
    p_red = tensor_combination(jet_vectors(jet_red), coords)
    w = _solve_span_coords(p_red, [PSTensor(jet_red.format, tuple(c)) for c in cols],
                           tol)

    nodes = [complex(eps) * z for z in FAMILY_NODES]
    vand = [[1, 1, 1], list(nodes), [z * z for z in nodes]]
    mom = np.linalg.solve(np.asarray(vand, dtype=complex),
                          np.asarray([complex(v) for v in w[:3]]))
    terms = []
    for mu, z in zip(mom, nodes):
        x_red = curve.evaluate(1, z)
        terms.append((complex(mu), reduction.embed_point(x_red)))
    dec = Decomposition(p.format, tuple(terms))
    pv = p.numeric()
    resid = float(np.linalg.norm(dec.recombine().numeric() - pv) / np.linalg.norm(pv))
    return dec, resid


def _jet_point(jet: JetScheme, t0):
    """Evaluate the jet's coordinate polynomials at a parameter value."""
    out = []
    for factor in jet.factors:
        out.append(tuple(sum(c * t0 ** j for j, c in enumerate(p)) for p in factor))
    return tuple(out)


def residual_slope(pres: Jet3, p: PSTensor, eps_list=(1e-1, 1e-2, 1e-3, 1e-4),
                   seed: int = 0, tol: float = VERIFY_TOL) -> float:
    """Log-log slope of the family residual against eps (expected >= 0.9
    for points that genuinely need the full order-3 jet)."""
    xs, ys = [], []
    for eps in eps_list:
        _, resid = border_family(pres, p, eps, seed=seed, tol=tol)
        if resid <= 0.0:
            return float("inf")
        xs.append(math.log(eps))
        ys.append(math.log(resid))
    n = len(xs)
    xbar = sum(xs) / n
    ybar = sum(ys) / n
    num = sum((a - xbar) * (b - ybar) for a, b in zip(xs, ys))
    den = sum((a - xbar) ** 2 for a in xs)
    return num / den
