"""Secant-variety measurements via Terracini's lemma.

Terracini's lemma identifies the tangent space of the k-th secant variety
at a general point with the span of tangent spaces at k+1 general points
of X.  In the affine-cone model every tangent space is a frame of n+1
rows, so s^(k) is simply rank(stacked frames of k+1 samples) - 1.

Randomization over a 62-bit prime field has one-sided error: an unlucky
point or prime can only lower a rank.  Every dimension is therefore the
maximum over independent trials, repeated under two independently drawn
primes, with an `agreement` flag recording whether all runs concurred.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import linalg
from .linalg import PrimeContext, RowReducer
from .variety import NotParametric, ProjectFrom, VarietySpec, span_dim

DEFAULT_TRIALS = 5


def expected_secant_dim(r: int, n: int, k: int) -> int:
    """The expected dimension min(r, n(k+1) + k) of the k-th secant variety."""
    return min(r, n * (k + 1) + k)


@dataclass
class SecantReport:
    """Measured secant dimensions s^(0..k) with their defect bookkeeping.

    `r` is the projective dimension of the linear span of X (monomial
    presentations may sit degenerately in a larger coordinate space, and
    all expected-dimension counts refer to the span).
    """

    k: int
    r: int
    n: int
    chain: list[int]
    sigma_k: int
    delta_k: int
    r_k: int
    trials: int
    primes: list[int]
    agreement: bool

    def delta(self, h: int) -> int:
        return expected_secant_dim(self.r, self.n, h) - self.chain[h]

    def is_defective_at(self, h: int) -> bool:
        return self.delta(h) > 0 and self.chain[h] < self.r


@dataclass
class ScanResult:
    first_defective: int | None
    reports: list[SecantReport]

    @property
    def top(self) -> SecantReport:
        return self.reports[-1]


@dataclass
class TangentialReport:
    """Image dimension of a general k-tangential projection."""

    k: int
    n_k: int
    m_k: int
    projected_spec: ProjectFrom


@dataclass
class ContactShape:
    """Coarse shape of the tangential contact locus, read off the projection.

    The image X_k of the k-tangential projection of a minimally k-defective
    threefold is either a curve or a developable surface exactly when the
    contact locus is a divisor; a non-developable surface image means the
    contact locus is a curve.  `gamma_lower` is the lower bound m_k for the
    contact dimension.
    """

    classification: str  # DivisorViaCurveImage | DivisorViaDevelopableImage |
    #                      NotDivisorial | Indeterminate
    gamma_lower: int


def _chain_once(spec: VarietySpec, k: int, ctx: PrimeContext,
                rng: random.Random) -> list[int]:
    """One trial: ranks of stacked frames of 1..k+1 independent samples, minus 1."""
    red = RowReducer(ctx.p)
    chain = []
    for _ in range(k + 1):
        pf = spec.sample(ctx, rng)
        for row in pf.frame:
            red.add(row)
        chain.append(red.rank - 1)
    return chain


def secant_dim(spec: VarietySpec, k: int, ctxs: list[PrimeContext],
               rng: random.Random, trials: int = DEFAULT_TRIALS) -> SecantReport:
    """Measure the secant dimension chain s^(0), ..., s^(k).

    Each s^(h) is the maximum over `trials` independent trials and all
    primes of rank(stacked frames of h+1 samples) - 1.
    """
    if k < 0 or trials < 1:
        raise ValueError("need k >= 0 and trials >= 1")
    n = spec.dim
    chains = []
    spans = []
    for ctx in ctxs:
        spans.append(span_dim(spec, ctx, rng))
        for _ in range(trials):
            chains.append(_chain_once(spec, k, ctx, rng))
    r = max(spans) - 1
    chain = [max(c[h] for c in chains) for h in range(k + 1)]
    agreement = all(c == chain for c in chains) and all(s - 1 == r for s in spans)
    sigma_k = expected_secant_dim(r, n, k)
    r_k = r - (chain[k - 1] if k >= 1 else -1) - 1
    return SecantReport(k=k, r=r, n=n, chain=chain, sigma_k=sigma_k,
                        delta_k=sigma_k - chain[k], r_k=r_k, trials=trials,
                        primes=[c.p for c in ctxs], agreement=agreement)


def defect(spec: VarietySpec, k: int, ctxs: list[PrimeContext],
           rng: random.Random, trials: int = DEFAULT_TRIALS) -> int:
    """The k-defect: expected minus measured secant dimension (0 when filling)."""
    return secant_dim(spec, k, ctxs, rng, trials).delta_k


def min_defective_scan(spec: VarietySpec, k_max: int, ctxs: list[PrimeContext],
                       rng: random.Random, trials: int = DEFAULT_TRIALS) -> ScanResult:
    """Find the smallest k <= k_max at which the variety is defective.

    Defective means delta_k > 0 *and* s^(k) < r: a variety whose secants
    fill the span is never called defective.
    """
    if k_max < 1:
        raise ValueError("need k_max >= 1")
    full = secant_dim(spec, k_max, ctxs, rng, trials)
    reports = []
    for h in range(k_max + 1):
        sigma_h = expected_secant_dim(full.r, full.n, h)
        r_h = full.r - (full.chain[h - 1] if h >= 1 else -1) - 1
        reports.append(SecantReport(k=h, r=full.r, n=full.n, chain=full.chain[:h + 1],
                                    sigma_k=sigma_h, delta_k=sigma_h - full.chain[h],
                                    r_k=r_h, trials=trials, primes=full.primes,
                                    agreement=full.agreement))
    first = next((h for h in range(1, k_max + 1)
                  if reports[h].delta_k > 0 and full.chain[h] < full.r), None)
    return ScanResult(first_defective=first, reports=reports)


def _tangential_once(spec: VarietySpec, k: int, ctx: PrimeContext,
                     rng: random.Random) -> tuple[int, list[list[int]]]:
    """Project from the span of k sampled tangent frames; return (n_k, center rows)."""
    rows: list[list[int]] = []
    for _ in range(k):
        rows.extend(spec.sample(ctx, rng).frame)
    center = linalg.row_basis(rows, ctx.p)
    if len(center) >= spec.ambient + 1:
        raise ValueError("tangent span fills the ambient space; nothing to project")
    proj = ProjectFrom(spec, center, dim=spec.dim, bound_p=ctx.p)
    kmap = proj.kernel_map(ctx)
    fresh = spec.sample(ctx, rng)
    image_rows = linalg.apply_map(fresh.frame, kmap, ctx.p)
    n_k = linalg.rank(image_rows, ctx.p) - 1
    if n_k < 0:
        raise ValueError("tangent span fills the span of the variety; "
                         "nothing to project")
    return n_k, center


def tangential_projection(spec: VarietySpec, k: int, ctxs: list[PrimeContext],
                          rng: random.Random) -> TangentialReport:
    """Measure n_k = dim of the image of a general k-tangential projection.

    The returned projected_spec composes with every other operation but is
    bound to the first prime context (its center rows are residues).
    """
    if k < 1:
        raise ValueError("need k >= 1")
    best = -1
    kept_center = None
    for ctx in ctxs:
        n_k, center = _tangential_once(spec, k, ctx, rng)
        if n_k > best:
            best = n_k
        if kept_center is None:
            kept_center = center
    proj = ProjectFrom(spec, kept_center, dim=best, bound_p=ctxs[0].p)
    return TangentialReport(k=k, n_k=best, m_k=spec.dim - best, projected_spec=proj)


def gauss_fiber_dim(spec: VarietySpec, ctxs: list[PrimeContext],
                    rng: random.Random, points: int = 2) -> int:
    """Dimension of the general fiber of the Gauss map of a parametric variety.

    The differential of the Gauss map kills a tangent direction v exactly
    when every first-order variation of the frame along v stays inside the
    tangent space itself, so the fiber is the kernel dimension of the map
    v -> (d_v frame mod frame), minus the chart's own fiber directions.
    Second-order data comes from formal partials of the chart.  The
    minimum over primes and points is reported (rank can only drop on
    unlucky samples).
    """
    best = None
    for ctx in ctxs:
        cmap, _ = spec.chart(ctx)  # NotParametric for implicit-backed trees
        first = [[co.partial(j) for j in range(cmap.nvars)] for co in cmap.coords]
        for _ in range(points):
            fiber = _gauss_fiber_once(spec, cmap, first, ctx, rng)
            best = fiber if best is None else min(best, fiber)
    if best is None:
        raise ValueError("no prime contexts given")
    return best


def _gauss_fiber_once(spec: VarietySpec, cmap, first, ctx: PrimeContext,
                      rng: random.Random) -> int:
    p = ctx.p
    c = cmap.nvars
    n = spec.dim
    ncoords = len(cmap.coords)
    for _ in range(linalg.SAMPLE_RETRIES):
        t = [rng.randrange(p) for _ in range(c)]
        value = cmap.eval(t, p)
        d1 = [[first[ci][j].eval(t, p) for ci in range(ncoords)] for j in range(c)]
        frame_rows = [value] + d1
        tangent = RowReducer(p)
        for row in frame_rows:
            tangent.add(row)
        if tangent.rank != n + 1:
            continue
        # Row i=0 is the chart value, rows i>=1 are first partials; their
        # j-derivatives are the first and second partials respectively.
        constraints = []  # rows of the linear system on directions v
        for i in range(c + 1):
            residuals = []
            for j in range(c):
                if i == 0:
                    deriv = d1[j]
                else:
                    deriv = [first[ci][i - 1].partial(j).eval(t, p)
                             for ci in range(ncoords)]
                residuals.append(tangent.residual(deriv))
            for coord in range(ncoords):
                row = [residuals[j][coord] for j in range(c)]
                if any(row):
                    constraints.append(row)
        if not constraints:
            kernel_dim = c
        else:
            kernel_dim = c - linalg.rank(constraints, p)
        return kernel_dim - (c - n)
    raise ValueError("could not find a generic chart point for the Gauss map")


def contact_shape(spec: VarietySpec, k: int, ctxs: list[PrimeContext],
                  rng: random.Random, trials: int = DEFAULT_TRIALS) -> ContactShape:
    """Classify the tangential contact locus through the k-tangential image.

    Curve image => the contact locus is a divisor; surface image => it is a
    divisor iff the image surface is developable (positive-dimensional
    Gauss fibers); implicit-backed images cannot be probed and come back
    Indeterminate.
    """
    tan = tangential_projection(spec, k, ctxs, rng)
    gamma_lower = tan.m_k
    if tan.n_k == 1:
        return ContactShape("DivisorViaCurveImage", gamma_lower)
    if tan.n_k != 2:
        return ContactShape("Indeterminate", gamma_lower)
    try:
        fibers = []
        for ctx in ctxs:
            n_k, center = _tangential_once(spec, k, ctx, rng)
            proj = ProjectFrom(spec, center, dim=n_k, bound_p=ctx.p)
            fibers.append(gauss_fiber_dim(proj, [ctx], rng, points=1))
        fiber = min(fibers)
    except NotParametric:
        return ContactShape("Indeterminate", gamma_lower)
    if fiber > 0:
        return ContactShape("DivisorViaDevelopableImage", gamma_lower)
    return ContactShape("NotDivisorial", gamma_lower)
