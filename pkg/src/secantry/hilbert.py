"""Degree-2 Hilbert function measurement and Castelnuovo-type bounds.

h_X(2) is the number of independent quadrics *on* X: the rank of the
matrix whose columns are all degree-2 monomials in the ambient
coordinates, evaluated at a comfortable surplus of sampled points.
Evaluation works uniformly for implicit-backed varieties and avoids the
term blowup of composing coordinate polynomials symbolically.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .linalg import PrimeContext, RowReducer
from .variety import VarietySpec, span_dim


class MinimalDegreeViolated(ValueError):
    """deg(X) >= codim(X) + 1 fails: the inputs cannot describe a variety."""


def castelnuovo_bound(r: int, n: int, d: int) -> tuple[int, int]:
    """Lower bound for h_X(2) of an irreducible nondegenerate X in P^r.

    Returns (iota, bound) with iota = min(d + n - r - 1, r - n) and
    bound = iota + r(n+1) - n(n-1)/2 + 1.  Equality holds exactly for the
    varieties whose general curve section is linearly normal of genus iota.
    """
    if d < r - n + 1:
        raise MinimalDegreeViolated(f"degree {d} below minimal degree {r - n + 1}")
    iota = min(d + n - r - 1, r - n)
    bound = iota + r * (n + 1) - n * (n - 1) // 2 + 1
    return iota, bound


def hilbert2(spec: VarietySpec, ctxs: list[PrimeContext],
             rng: random.Random) -> int:
    """h_X(2): rank of degree-2 monomial evaluations at sampled points.

    Draws C(R+2, 2) + 8 samples per prime (R+1 ambient coordinates), so a
    rank deficit is attributable to the variety rather than undersampling;
    the maximum across primes is reported.
    """
    best = 0
    ncoords = spec.ambient + 1
    pairs = list(itertools.combinations_with_replacement(range(ncoords), 2))
    nsamples = len(pairs) + 8
    for ctx in ctxs:
        p = ctx.p
        red = RowReducer(p)
        for _ in range(nsamples):
            q = spec.sample(ctx, rng).point
            red.add([q[i] * q[j] % p for i, j in pairs])
            if red.rank == len(pairs):
                break
        best = max(best, red.rank)
    return best


@dataclass
class HilbertReport:
    """h1/h2 measurements plus the degree-based bound when the degree is known."""

    h1: int
    h2: int
    d: int | None = None
    iota: int | None = None
    bound2: int | None = None
    equality2: bool | None = None


def hilbert_report(spec: VarietySpec, ctxs: list[PrimeContext],
                   rng: random.Random) -> HilbertReport:
    """Measure h1 = dim<X> + 1 and h2; add iota/bound when the degree is declared.

    The bound is computed against the span dimension r = h1 - 1, since
    monomial presentations may be ambient-degenerate.
    """
    h1 = max(span_dim(spec, ctx, rng) for ctx in ctxs)
    h2 = hilbert2(spec, ctxs, rng)
    rep = HilbertReport(h1=h1, h2=h2)
    if spec.degree is not None:
        rep.d = spec.degree
        rep.iota, rep.bound2 = castelnuovo_bound(h1 - 1, spec.dim, spec.degree)
        rep.equality2 = h2 == rep.bound2
    return rep


@dataclass
class QuadricCountReport:
    """Result of the two-sided h_Y(2) check for a contact image Y in P^(k+1)."""

    k: int
    n: int
    d: int
    h2: int
    iota: int
    lower: int
    upper: int
    lower_ok: bool
    upper_ok: bool
    equality: bool

    @property
    def holds(self) -> bool:
        return self.lower_ok and self.upper_ok


def check_quadric_bounds(spec: VarietySpec, k: int, ctxs: list[PrimeContext],
                         rng: random.Random) -> QuadricCountReport:
    """Check lower <= h_Y(2) <= 4k + 4 for a declared-degree Y spanning P^(k+1).

    The lower bound is the Castelnuovo-type bound evaluated at r = k + 1;
    the upper bound 4k + 4 is what an ambient of dimension at most 4k + 3
    can accommodate.
    """
    if spec.degree is None:
        raise ValueError("check needs a declared degree")
    if spec.dim >= k + 1:
        raise ValueError("variety must be a proper subvariety of P^(k+1)")
    h1 = max(span_dim(spec, ctx, rng) for ctx in ctxs)
    if h1 != k + 2:
        raise ValueError(f"variety spans P^{h1 - 1}, expected P^{k + 1}")
    iota, lower = castelnuovo_bound(k + 1, spec.dim, spec.degree)
    h2 = hilbert2(spec, ctxs, rng)
    upper = 4 * k + 4
    return QuadricCountReport(k=k, n=spec.dim, d=spec.degree, h2=h2, iota=iota,
                              lower=lower, upper=upper,
                              lower_ok=h2 >= lower, upper_ok=h2 <= upper,
                              equality=h2 == lower)
