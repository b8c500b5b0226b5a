"""Projective varieties as composable constructor trees with one sampler contract.

Every node can produce a random point on the affine cone of the variety
together with a frame: an (n+1)-row matrix spanning the affine tangent
space of the cone at that point (n = projective dimension).  With tangent
spaces in this affine-cone form, every dimension question downstream
becomes a matrix rank minus one.

Constructor trees hold only *integer* data (polynomial coefficients,
center matrices), so one tree can be sampled under several primes; the
reduction modulo p happens inside the samplers.

Fully parametric trees additionally expose a symbolic chart: a PolyMap
whose image (projectivized) is the variety.  Charts come in two kinds:

* "affine"  - projective dim = nvars; the cone adds one scaling direction,
              handled by including the value row in the frame;
* "scaled"  - the chart already parametrizes the cone (joins carry the
              two block scalings as explicit parameters); projective
              dim = nvars - 1.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import random

from . import linalg, uniroots
from .linalg import PrimeContext, RowReducer, SAMPLE_RETRIES
from .mpoly import MPoly, PolyMap, parse_poly, poly_str, random_poly


class SampleExhausted(Exception):
    """Sampling failed repeatedly: degenerate description or unlucky prime."""


class NoRootFound(SampleExhausted):
    """The univariate restriction never produced a root in F_p."""


class CenterContainsVariety(SampleExhausted):
    """A projection center keeps swallowing every sampled point."""


class NotParametric(Exception):
    """Operation needs a symbolic chart but the tree has implicit nodes."""


class _Resample(Exception):
    """Internal: this attempt degenerated, try again with fresh randomness."""

    def __init__(self, cause: str = "degenerate"):
        self.cause = cause


class PointFrame:
    """A point on the affine cone plus a basis of the cone tangent there."""

    __slots__ = ("p", "point", "frame")

    def __init__(self, p: int, point: list[int], frame: list[list[int]]):
        self.p = p
        self.point = point
        self.frame = frame


class VarietySpec:
    """Base node.  Subclasses fill dim/ambient/degree and _sample_once."""

    dim: int
    ambient: int
    degree: int | None = None

    def _sample_once(self, ctx: PrimeContext, rng: random.Random) -> PointFrame:
        raise NotImplementedError

    def sample(self, ctx: PrimeContext, rng: random.Random) -> PointFrame:
        """Sample a generic point+frame, retrying bounded-many times."""
        causes: list[str] = []
        for _ in range(SAMPLE_RETRIES):
            try:
                return self._sample_once(ctx, rng)
            except _Resample as exc:
                causes.append(exc.cause)
        if causes and all(c == "no_root" for c in causes):
            raise NoRootFound(f"{type(self).__name__}: no univariate root after {SAMPLE_RETRIES} tries")
        if causes and all(c == "center" for c in causes):
            raise CenterContainsVariety("projection center contains the variety")
        raise SampleExhausted(f"{type(self).__name__}: {SAMPLE_RETRIES} failed attempts ({set(causes)})")

    # -- symbolic chart ----------------------------------------------------

    def chart(self, ctx: PrimeContext) -> tuple[PolyMap, str]:
        raise NotParametric(f"{type(self).__name__} has no polynomial chart")

    @property
    def is_parametric(self) -> bool:
        probe_p = getattr(self, "bound_p", None) or (1 << 61) - 1
        try:
            self.chart(PrimeContext(p=probe_p, seed="probe"))
            return True
        except NotParametric:
            return False

    # -- serialization -----------------------------------------------------

    def to_obj(self) -> dict:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.dim}, ambient={self.ambient})"


def _frame_from_rows(rows: list[list[int]], want_rank: int, p: int) -> list[list[int]]:
    basis = linalg.row_basis(rows, p)
    if len(basis) != want_rank:
        raise _Resample("frame_rank")
    return basis


# ---------------------------------------------------------------------------
# Leaf and combinator nodes
# ---------------------------------------------------------------------------


class Parametric(VarietySpec):
    """Closure of the image of a polynomial map (one affine or scaled chart)."""

    def __init__(self, fmap: PolyMap, scaled: bool = False, degree: int | None = None,
                 ctor: dict | None = None):
        self.map = fmap
        self.scaled = scaled
        self.dim = fmap.nvars - 1 if scaled else fmap.nvars
        self.ambient = len(fmap.coords) - 1
        self.degree = degree
        self._ctor = ctor

    def _sample_once(self, ctx, rng):
        p = ctx.p
        t = [rng.randrange(p) for _ in range(self.map.nvars)]
        point = self.map.eval(t, p)
        if not any(point):
            raise _Resample("zero_point")
        rows = [point] + self.map.partial_rows(t, p)
        frame = _frame_from_rows(rows, self.dim + 1, p)
        return PointFrame(p, point, frame)

    def chart(self, ctx):
        return self.map, ("scaled" if self.scaled else "affine")

    def to_obj(self):
        if self._ctor is not None:
            return dict(self._ctor)
        obj = {"op": "parametric", "nvars": self.map.nvars,
               "coords": [poly_str(c, "t") for c in self.map.coords]}
        if self.scaled:
            obj["scaled"] = True
        if self.degree is not None:
            obj["degree"] = self.degree
        return obj


class Veronese(VarietySpec):
    """Image under the degree-d monomial (Veronese) re-embedding."""

    def __init__(self, child: VarietySpec, d: int):
        if d < 1:
            raise ValueError("Veronese degree must be >= 1")
        self.child = child
        self.d = d
        self.combos = list(itertools.combinations_with_replacement(
            range(child.ambient + 1), d))
        self.dim = child.dim
        self.ambient = len(self.combos) - 1
        self.degree = (child.degree * d ** child.dim) if child.degree is not None else None

    def _push_point(self, q: list[int], p: int) -> list[int]:
        out = []
        for combo in self.combos:
            t = 1
            for i in combo:
                t = t * q[i] % p
            out.append(t)
        return out

    def _push_dir(self, q: list[int], v: list[int], p: int) -> list[int]:
        # d/de of prod q[i]+e*v[i] over each index multiset (product rule).
        out = []
        for combo in self.combos:
            acc = 0
            for j in range(len(combo)):
                t = v[combo[j]]
                for l, i in enumerate(combo):
                    if l != j:
                        t = t * q[i] % p
                acc += t
            out.append(acc % p)
        return out

    def _sample_once(self, ctx, rng):
        p = ctx.p
        pf = self.child.sample(ctx, rng)
        point = self._push_point(pf.point, p)
        if not any(point):
            raise _Resample("zero_point")
        rows = [point] + [self._push_dir(pf.point, v, p) for v in pf.frame]
        frame = _frame_from_rows(rows, self.dim + 1, p)
        return PointFrame(p, point, frame)

    def chart(self, ctx):
        cmap, kind = self.child.chart(ctx)
        coords = []
        for combo in self.combos:
            acc = MPoly.constant(cmap.nvars, 1)
            for i in combo:
                acc = acc * cmap.coords[i]
            coords.append(acc)
        return PolyMap(cmap.nvars, coords), kind

    def to_obj(self):
        return {"op": "veronese", "d": self.d, "child": self.child.to_obj()}


class SegrePair(VarietySpec):
    """Segre product of two independently sampled varieties (all pairwise products)."""

    def __init__(self, left: VarietySpec, right: VarietySpec):
        self.left = left
        self.right = right
        self.dim = left.dim + right.dim
        self.ambient = (left.ambient + 1) * (right.ambient + 1) - 1

    def _sample_once(self, ctx, rng):
        p = ctx.p
        a = self.left.sample(ctx, rng)
        b = self.right.sample(ctx, rng)

        def tensor(u: list[int], v: list[int]) -> list[int]:
            return [x * y % p for x in u for y in v]

        point = tensor(a.point, b.point)
        if not any(point):
            raise _Resample("zero_point")
        rows = [tensor(fa, b.point) for fa in a.frame]
        rows += [tensor(a.point, fb) for fb in b.frame]
        frame = _frame_from_rows(rows, self.dim + 1, p)
        return PointFrame(p, point, frame)

    def chart(self, ctx):
        lmap, lkind = self.left.chart(ctx)
        rmap, rkind = self.right.chart(ctx)
        if "scaled" in (lkind, rkind) and lkind == rkind:
            raise NotParametric("Segre of two scaled charts is not supported")
        nv = lmap.nvars + rmap.nvars
        lcs = [c.shift_vars(0, nv) for c in lmap.coords]
        rcs = [c.shift_vars(lmap.nvars, nv) for c in rmap.coords]
        coords = [a * b for a in lcs for b in rcs]
        kind = "scaled" if "scaled" in (lkind, rkind) else "affine"
        return PolyMap(nv, coords), kind

    def to_obj(self):
        return {"op": "segre", "left": self.left.to_obj(), "right": self.right.to_obj()}


class ConeOver(VarietySpec):
    """Cone over the child with a coordinate vertex of projective dimension v."""

    def __init__(self, child: VarietySpec, vertex_dim: int):
        if vertex_dim < 0:
            raise ValueError("vertex dimension must be >= 0")
        self.child = child
        self.v = vertex_dim
        self.dim = child.dim + vertex_dim + 1
        self.ambient = child.ambient + vertex_dim + 1
        self.degree = child.degree

    def _sample_once(self, ctx, rng):
        p = ctx.p
        pf = self.child.sample(ctx, rng)
        extra = [rng.randrange(p) for _ in range(self.v + 1)]
        point = pf.point + extra
        zeros = [0] * (self.v + 1)
        rows = [row + zeros for row in pf.frame]
        for i in range(self.v + 1):
            e = [0] * (self.ambient + 1)
            e[self.child.ambient + 1 + i] = 1
            rows.append(e)
        frame = _frame_from_rows(rows, self.dim + 1, p)
        return PointFrame(p, point, frame)

    def chart(self, ctx):
        cmap, kind = self.child.chart(ctx)
        nv = cmap.nvars + self.v + 1
        coords = [c.shift_vars(0, nv) for c in cmap.coords]
        coords += [MPoly.variable(nv, cmap.nvars + i) for i in range(self.v + 1)]
        return PolyMap(nv, coords), kind

    def to_obj(self):
        return {"op": "cone", "vertex_dim": self.v, "child": self.child.to_obj()}


class ProjectFrom(VarietySpec):
    """Linear projection of the child away from the span of `center` rows.

    The projection map is a kernel basis of the center, so coordinates of
    the image are linear forms vanishing on the center.  `dim` may be
    overridden for non-generic (e.g. tangential) centers, where the image
    dimension genuinely drops.
    """

    def __init__(self, child: VarietySpec, center: list[list[int]],
                 dim: int | None = None, degree: int | None = None,
                 bound_p: int | None = None):
        if not center:
            raise ValueError("empty projection center")
        if len(center[0]) != child.ambient + 1:
            raise ValueError("center width must be child ambient + 1")
        if len(center) > child.ambient:
            raise ValueError("center cannot fill the ambient space")
        self.child = child
        self.center = [list(r) for r in center]
        self.dim = child.dim if dim is None else dim
        self.ambient = child.ambient - len(center)
        self.degree = degree
        self.bound_p = bound_p
        self._kmaps: dict[int, list[list[int]]] = {}

    def kernel_map(self, ctx: PrimeContext) -> list[list[int]]:
        if self.bound_p is not None and ctx.p != self.bound_p:
            raise ValueError("this projection is bound to a different prime")
        kmap = self._kmaps.get(ctx.p)
        if kmap is None:
            if linalg.rank(self.center, ctx.p) != len(self.center):
                raise ValueError("projection center rows are dependent mod p")
            kmap = linalg.kernel_basis(self.center, ctx.p)
            self._kmaps[ctx.p] = kmap
        return kmap

    def _sample_once(self, ctx, rng):
        p = ctx.p
        kmap = self.kernel_map(ctx)
        pf = self.child.sample(ctx, rng)
        point = linalg.mat_vec(kmap, pf.point, p)
        if not any(point):
            raise _Resample("center")
        rows = linalg.apply_map(pf.frame, kmap, p)
        frame = _frame_from_rows(rows, self.dim + 1, p)
        return PointFrame(p, point, frame)

    def chart(self, ctx):
        cmap, kind = self.child.chart(ctx)
        return cmap.compose_linear(self.kernel_map(ctx)), kind

    def to_obj(self):
        obj = {"op": "project", "center": [list(r) for r in self.center],
               "child": self.child.to_obj()}
        if self.dim != self.child.dim:
            obj["dim"] = self.dim
        if self.degree is not None:
            obj["degree"] = self.degree
        return obj


class Hypersurface(VarietySpec):
    """Zero locus of one homogeneous polynomial in P^m.

    Sampling fixes all coordinates but one at random values and solves the
    univariate restriction over F_p; the frame is the kernel of the
    gradient at the found point.
    """

    def __init__(self, m: int, equation: MPoly):
        if equation.is_zero():
            raise ValueError("hypersurface equation is zero")
        if not equation.is_homogeneous():
            raise ValueError("hypersurface equation must be homogeneous")
        if equation.nvars != m + 1:
            raise ValueError("equation must have m+1 variables")
        self.m = m
        self.g = equation
        self.dim = m - 1
        self.ambient = m
        self.degree = equation.degree()

    def _sample_once(self, ctx, rng):
        p = ctx.p
        j = rng.randrange(self.m + 1)
        values: list[int | None] = [rng.randrange(p) for _ in range(self.m + 1)]
        values[j] = None
        f = self.g.to_univariate(values, p)
        if not f:
            raise _Resample("zero_restriction")
        rts = uniroots.roots(f, p, rng)
        if not rts:
            raise _Resample("no_root")
        values[j] = rts[rng.randrange(len(rts))]
        point = [int(v) for v in values]  # type: ignore[arg-type]
        if not any(point):
            raise _Resample("zero_point")
        value, grad = self.g.grad_eval(point, p)
        assert value == 0, "sampled point must satisfy the equation exactly"
        if not any(grad):
            raise _Resample("singular_point")
        frame = linalg.kernel_basis([grad], p)
        if len(frame) != self.dim + 1:
            raise _Resample("frame_rank")
        return PointFrame(p, point, frame)

    def to_obj(self):
        return {"op": "hypersurface", "m": self.m, "equation": poly_str(self.g)}


class RestrictedChart(VarietySpec):
    """A parametrized ambient chart cut down by one equation.

    The equation lives in the ambient coordinates and is pulled back to the
    chart parameters at sample time; the sampler solves it univariately in
    one designated parameter.  Used for varieties carved out of a
    parametrized hypersurface, e.g. a threefold on a smooth quadric in P^5.
    """

    def __init__(self, chart: PolyMap, equation: MPoly, solve_var: int = 0,
                 ctor: dict | None = None):
        if equation.nvars != len(chart.coords):
            raise ValueError("equation must use the chart's ambient coordinates")
        if not 0 <= solve_var < chart.nvars:
            raise ValueError("solve variable out of range")
        self.chart_map = chart
        self.g = equation
        self.solve_var = solve_var
        self.dim = chart.nvars - 1
        self.ambient = len(chart.coords) - 1
        self.degree = None
        self._ctor = ctor

    def _sample_once(self, ctx, rng):
        p = ctx.p
        sv = self.solve_var
        params: list[int | None] = [rng.randrange(p) for _ in range(self.chart_map.nvars)]
        params[sv] = None
        # Pull the equation back along the chart with only `sv` left symbolic.
        uni_coords = [c.to_univariate(params, p) for c in self.chart_map.coords]
        f = self._eval_equation_on(uni_coords, p)
        if not f:
            raise _Resample("zero_restriction")
        rts = uniroots.roots(f, p, rng)
        if not rts:
            raise _Resample("no_root")
        params[sv] = rts[rng.randrange(len(rts))]
        t = [int(v) for v in params]  # type: ignore[arg-type]
        point = self.chart_map.eval(t, p)
        if not any(point):
            raise _Resample("zero_point")
        _, gmb = self.g.grad_eval(point, p)
        jac = self.chart_map.partial_rows(t, p)
        w = [sum(a * b for a, b in zip(gmb, row)) % p for row in jac]
        if not any(w):
            raise _Resample("singular_point")
        dirs = linalg.kernel_basis([w], p)
        rows = [point] + [[sum(d[j] * jac[j][ci] for j in range(len(jac))) % p
                           for ci in range(self.ambient + 1)] for d in dirs]
        frame = _frame_from_rows(rows, self.dim + 1, p)
        return PointFrame(p, point, frame)

    def _eval_equation_on(self, uni_coords: list[list[int]], p: int) -> list[int]:
        acc: list[int] = []
        for e, c in self.g.terms.items():
            term = [c % p]
            for i, k in enumerate(e):
                for _ in range(k):
                    term = uniroots.poly_mul(term, uni_coords[i], p)
                    if not term:
                        break
                if not term:
                    break
            acc = uniroots.poly_sub(acc, [(-x) % p for x in term], p)
        return acc

    def to_obj(self):
        if self._ctor is not None:
            return dict(self._ctor)
        return {"op": "restricted",
                "chart": [poly_str(c, "t") for c in self.chart_map.coords],
                "nvars": self.chart_map.nvars,
                "equation": poly_str(self.g),
                "solve_var": self.solve_var}


class ConeSection(VarietySpec):
    """Hypersurface section of the cone with a point vertex over the child.

    One new coordinate w is appended; sampling solves g(child_point, w) = 0
    univariately in w along the ruling through a sampled child point.  The
    result keeps the child's dimension while gaining one ambient dimension:
    the standard way to realize a variety inside a cone that projects
    finitely onto the base.
    """

    def __init__(self, child: VarietySpec, equation: MPoly):
        if equation.nvars != child.ambient + 2:
            raise ValueError("equation needs child ambient + 2 variables")
        if not equation.is_homogeneous():
            raise ValueError("section equation must be homogeneous")
        self.child = child
        self.g = equation
        self.dim = child.dim
        self.ambient = child.ambient + 1
        self.degree = None

    def _sample_once(self, ctx, rng):
        p = ctx.p
        pf = self.child.sample(ctx, rng)
        values: list[int | None] = [v for v in pf.point] + [None]
        f = self.g.to_univariate(values, p)
        if not f:
            raise _Resample("zero_restriction")
        rts = uniroots.roots(f, p, rng)
        if not rts:
            raise _Resample("no_root")
        w = rts[rng.randrange(len(rts))]
        point = pf.point + [w]
        _, grad = self.g.grad_eval(point, p)
        if not any(grad):
            raise _Resample("singular_point")
        ruling = [0] * (self.ambient + 1)
        ruling[-1] = 1
        big = [row + [0] for row in pf.frame] + [ruling]
        # Intersect span(big) with the gradient hyperplane: combinations c of
        # the spanning rows with (c . big) . grad = 0.
        pairing = [sum(a * b for a, b in zip(row, grad)) % p for row in big]
        combos = linalg.kernel_basis([pairing], p)
        rows = [[sum(c[i] * big[i][j] for i in range(len(big))) % p
                 for j in range(self.ambient + 1)] for c in combos]
        frame = _frame_from_rows(rows, self.dim + 1, p)
        return PointFrame(p, point, frame)

    def to_obj(self):
        return {"op": "cone_section", "equation": poly_str(self.g),
                "child": self.child.to_obj()}


class JoinLinear(VarietySpec):
    """Ruled join of the child with its image under a linear map.

    Sweeps the lines joining each child point y to M.y placed in a
    complementary coordinate block: the resulting variety has dimension
    child.dim + 1 and sits in the cone over the child with vertex the new
    block (projective dimension rows(M) - 1).
    """

    def __init__(self, child: VarietySpec, block: list[list[int]]):
        if not block or len(block[0]) != child.ambient + 1:
            raise ValueError("block matrix width must be child ambient + 1")
        self.child = child
        self.block = [list(r) for r in block]
        self.dim = child.dim + 1
        self.ambient = child.ambient + len(block)
        self.degree = None

    def _sample_once(self, ctx, rng):
        p = ctx.p
        pf = self.child.sample(ctx, rng)
        mq = linalg.mat_vec(self.block, pf.point, p)
        if not any(mq):
            raise _Resample("center")
        a = rng.randrange(1, p)
        b = rng.randrange(1, p)
        w = len(self.block)
        point = [a * x % p for x in pf.point] + [b * x % p for x in mq]
        rows = [pf.point + [0] * w, [0] * (self.child.ambient + 1) + mq]
        for row in pf.frame:
            mrow = linalg.mat_vec(self.block, row, p)
            rows.append([a * x % p for x in row] + [b * x % p for x in mrow])
        frame = _frame_from_rows(rows, self.dim + 1, p)
        return PointFrame(p, point, frame)

    def chart(self, ctx):
        cmap, kind = self.child.chart(ctx)
        if kind != "affine":
            raise NotParametric("ruled join over a scaled chart is not supported")
        nv = cmap.nvars + 2
        av, bv = cmap.nvars, cmap.nvars + 1
        base = [c.shift_vars(0, nv) for c in cmap.coords]
        a = MPoly.variable(nv, av)
        b = MPoly.variable(nv, bv)
        coords = [a * c for c in base]
        for row in self.block:
            acc = MPoly.zero(nv)
            for coef, c in zip(row, base):
                if coef:
                    acc = acc + c * coef
            coords.append(b * acc)
        return PolyMap(nv, coords), "scaled"

    def to_obj(self):
        return {"op": "join_linear", "block": [list(r) for r in self.block],
                "child": self.child.to_obj()}


# ---------------------------------------------------------------------------
# Public constructors
# ---------------------------------------------------------------------------


def parametric(coords: list[MPoly], scaled: bool = False,
               degree: int | None = None) -> Parametric:
    nv = coords[0].nvars
    return Parametric(PolyMap(nv, coords), scaled=scaled, degree=degree)


def projective_space(n: int) -> Parametric:
    """P^n in its tautological chart (1, t1, ..., tn)."""
    if n < 1:
        raise ValueError("need n >= 1")
    coords = [MPoly.constant(n, 1)] + [MPoly.variable(n, i) for i in range(n)]
    return Parametric(PolyMap(n, coords), degree=1,
                      ctor={"op": "parametric", "nvars": n,
                            "coords": [poly_str(c, "t") for c in coords]})


def scroll(degrees: list[int]) -> Parametric:
    """Rational normal scroll S(a_1, ..., a_m): dimension m, degree sum(a_i).

    Chart variables are (t, u_1, ..., u_{m-1}); block i holds u_{i-1} * t^j
    for j = 0..a_i (u_0 = 1).  Zero entries give cone blocks, so scrolls of
    minimal degree in every dimension are covered by one constructor.
    """
    if not degrees or sum(degrees) < 1:
        raise ValueError("scroll needs positive total degree")
    m = len(degrees)
    coords = []
    for i, a in enumerate(degrees):
        for j in range(a + 1):
            e = [0] * m
            e[0] = j
            if i > 0:
                e[i] = 1
            coords.append(MPoly.monomial(m, tuple(e)))
    return Parametric(PolyMap(m, coords), degree=sum(degrees),
                      ctor={"op": "scroll", "degrees": list(degrees)})


def rational_normal_curve(d: int) -> Parametric:
    return scroll([d])


def veronese(child: VarietySpec, d: int) -> Veronese:
    return Veronese(child, d)


def segre_pair(left: VarietySpec, right: VarietySpec) -> SegrePair:
    return SegrePair(left, right)


def cone_over(child: VarietySpec, vertex_dim: int) -> ConeOver:
    return ConeOver(child, vertex_dim)


def hypersurface(m: int, equation: MPoly) -> Hypersurface:
    return Hypersurface(m, equation)


def random_hypersurface(m: int, degree: int, rng: random.Random) -> Hypersurface:
    return Hypersurface(m, random_poly(m + 1, degree, rng))


STANDARD_QUADRIC_CHART_NVARS = 4


def _standard_quadric_chart() -> PolyMap:
    # Chart of the smooth quadric x1*x2 + x3*x4 - x0*x5 = 0 in P^5,
    # by stereographic projection from (0:...:0:1): t -> (1, t, t1t2+t3t4).
    nv = 4
    t = [MPoly.variable(nv, i) for i in range(nv)]
    coords = [MPoly.constant(nv, 1), t[0], t[1], t[2], t[3],
              t[0] * t[1] + t[2] * t[3]]
    return PolyMap(nv, coords)


def on_quadric(extra_equation: MPoly) -> RestrictedChart:
    """A threefold on the standard smooth quadric in P^5, cut by one more equation.

    The extra equation is given in the six ambient coordinates and pulled
    back through the stereographic chart of the quadric at sample time.
    """
    if extra_equation.nvars != 6:
        raise ValueError("extra equation must use the 6 coordinates of P^5")
    return RestrictedChart(_standard_quadric_chart(), extra_equation, solve_var=0,
                           ctor={"op": "on_quadric", "equation": poly_str(extra_equation)})


def cone_section(child: VarietySpec, equation: MPoly) -> ConeSection:
    return ConeSection(child, equation)


def random_cone_section(child: VarietySpec, degree: int, rng: random.Random) -> ConeSection:
    return ConeSection(child, random_poly(child.ambient + 2, degree, rng))


def ruled_join(map1: PolyMap, map2: PolyMap, degree: int | None = None) -> Parametric:
    """Join of corresponding points of two images sharing parameters.

    Affine-cone chart (a, b, t) -> a*map1(t) (+) b*map2(t) in complementary
    blocks; projective dimension nvars + 1.
    """
    if map1.nvars != map2.nvars:
        raise ValueError("maps must share parameters")
    nv = map1.nvars + 2
    av, bv = map1.nvars, map1.nvars + 1
    a = MPoly.variable(nv, av)
    b = MPoly.variable(nv, bv)
    coords = [a * c.shift_vars(0, nv) for c in map1.coords]
    coords += [b * c.shift_vars(0, nv) for c in map2.coords]
    ctor = {"op": "ruled_join",
            "nvars": map1.nvars,
            "map1": [poly_str(c, "t") for c in map1.coords],
            "map2": [poly_str(c, "t") for c in map2.coords]}
    return Parametric(PolyMap(nv, coords), scaled=True, degree=degree, ctor=ctor)


def fibered_join(base: PolyMap, fiber: PolyMap) -> Parametric:
    """Join every base point to the corresponding fiber of a family over it.

    `fiber` shares the base parameters plus extra ones; the chart
    (a, b, t, u) -> a*base(t) (+) b*fiber(t, u) has projective dimension
    (parameters of fiber) + 1.
    """
    if fiber.nvars < base.nvars:
        raise ValueError("fiber must extend the base parameters")
    nv = fiber.nvars + 2
    av, bv = fiber.nvars, fiber.nvars + 1
    a = MPoly.variable(nv, av)
    b = MPoly.variable(nv, bv)
    coords = [a * c.shift_vars(0, nv) for c in base.coords]
    coords += [b * c.shift_vars(0, nv) for c in fiber.coords]
    ctor = {"op": "fibered_join",
            "base_vars": base.nvars,
            "base": [poly_str(c, "t") for c in base.coords],
            "fiber": [poly_str(c, "t") for c in fiber.coords]}
    return Parametric(PolyMap(nv, coords), scaled=True, ctor=ctor)


def join_linear(child: VarietySpec, block: list[list[int]]) -> JoinLinear:
    return JoinLinear(child, block)


def project_from(child: VarietySpec, center, rng: random.Random | None = None,
                 degree: int | None = None) -> ProjectFrom:
    """Project the child from a center given as one of:

    * an explicit integer matrix (rows spanning the center),
    * ("random", s): a random s-dimensional subspace of the ambient space,
    * ("span", s): a random s-dimensional subspace of the linear span of
      the child (needs a parametric child),
    * ("points", c): the span of c points sampled on the child itself
      (needs a parametric child; points are chart values at integer
      parameters so the center is prime-independent).
    """
    if isinstance(center, tuple):
        kind, s = center
        if rng is None:
            raise ValueError("random centers need an rng")
        if kind == "random":
            center = random_center(child.ambient, s, rng)
        elif kind == "span":
            center = center_in_span(child, s, rng)
        elif kind == "points":
            center = center_on_points(child, s, rng)
            degree = None  # center meets the variety; degree metadata no longer valid
        else:
            raise ValueError(f"unknown center kind {kind!r}")
    return ProjectFrom(child, center, degree=degree)


def _chart_int_eval(spec: VarietySpec, t: list[int]) -> list[int]:
    """Evaluate a parametric chart over the integers (no reduction)."""
    cmap, _ = spec.chart(PrimeContext(p=(1 << 61) - 1, seed="probe"))
    out = []
    for c in cmap.coords:
        acc = 0
        for e, coef in c.terms.items():
            term = coef
            for v, k in zip(t, e):
                term *= v ** k
            acc += term
        out.append(acc)
    return out


def center_in_span(child: VarietySpec, s: int, rng: random.Random) -> list[list[int]]:
    """An (s+1)-row integer matrix spanning a random s-plane inside <child>."""
    cmap, _ = child.chart(PrimeContext(p=(1 << 61) - 1, seed="probe"))
    nparams = cmap.nvars
    rows = []
    for _ in range(s + 1):
        acc = [0] * (child.ambient + 1)
        for _ in range(child.ambient + 2):
            t = [rng.randrange(1, 50) for _ in range(nparams)]
            val = _chart_int_eval(child, t)
            c = rng.randrange(1, 10 ** 6)
            acc = [a + c * v for a, v in zip(acc, val)]
        rows.append(acc)
    return rows


def center_on_points(child: VarietySpec, count: int, rng: random.Random) -> list[list[int]]:
    """Center spanned by `count` chart points of the child at integer parameters."""
    cmap, _ = child.chart(PrimeContext(p=(1 << 61) - 1, seed="probe"))
    rows = []
    for _ in range(count):
        t = [rng.randrange(2, 10 ** 4) for _ in range(cmap.nvars)]
        rows.append(_chart_int_eval(child, t))
    return rows


def random_center(ambient: int, s: int, rng: random.Random) -> list[list[int]]:
    return [[rng.randrange(1, 1 << 61) for _ in range(ambient + 1)]
            for _ in range(s + 1)]


# ---------------------------------------------------------------------------
# Span measurement
# ---------------------------------------------------------------------------


def span_dim(spec: VarietySpec, ctx: PrimeContext, rng: random.Random,
             samples: int | None = None) -> int:
    """h_X(1): the number of independent coordinates on X, i.e. dim<X> + 1.

    Draws at least ambient+2 samples so a rank deficit reflects the variety,
    not undersampling.
    """
    n = samples if samples is not None else spec.ambient + 2
    if n < spec.ambient + 2:
        raise ValueError("need at least ambient+2 samples")
    red = RowReducer(ctx.p)
    for _ in range(n):
        red.add(spec.sample(ctx, rng).point)
        if red.rank == spec.ambient + 1:
            break
    return red.rank


def effective_r(spec: VarietySpec, ctxs: list[PrimeContext], rng: random.Random) -> int:
    """Projective dimension of the linear span, maximized across primes."""
    return max(span_dim(spec, ctx, rng) for ctx in ctxs) - 1


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


class SpecParseError(ValueError):
    pass


def spec_to_obj(spec: VarietySpec) -> dict:
    return spec.to_obj()


def spec_from_obj(obj: dict) -> VarietySpec:
    if not isinstance(obj, dict) or "op" not in obj:
        raise SpecParseError("spec node must be an object with an 'op' field")
    op = obj["op"]
    try:
        if op == "parametric":
            nv = int(obj["nvars"])
            coords = [parse_poly(s, nv) for s in obj["coords"]]
            return Parametric(PolyMap(nv, coords), scaled=bool(obj.get("scaled", False)),
                              degree=obj.get("degree"))
        if op == "scroll":
            return scroll([int(a) for a in obj["degrees"]])
        if op == "veronese":
            return Veronese(spec_from_obj(obj["child"]), int(obj["d"]))
        if op == "segre":
            return SegrePair(spec_from_obj(obj["left"]), spec_from_obj(obj["right"]))
        if op == "cone":
            return ConeOver(spec_from_obj(obj["child"]), int(obj["vertex_dim"]))
        if op == "project":
            child = spec_from_obj(obj["child"])
            return ProjectFrom(child, [[int(x) for x in row] for row in obj["center"]],
                               dim=obj.get("dim"), degree=obj.get("degree"))
        if op == "hypersurface":
            m = int(obj["m"])
            return Hypersurface(m, parse_poly(obj["equation"], m + 1))
        if op == "on_quadric":
            return on_quadric(parse_poly(obj["equation"], 6))
        if op == "restricted":
            nv = int(obj["nvars"])
            chart = PolyMap(nv, [parse_poly(s, nv) for s in obj["chart"]])
            eq = parse_poly(obj["equation"], len(chart.coords))
            return RestrictedChart(chart, eq, solve_var=int(obj.get("solve_var", 0)))
        if op == "cone_section":
            child = spec_from_obj(obj["child"])
            eq = parse_poly(obj["equation"], child.ambient + 2)
            return ConeSection(child, eq)
        if op == "ruled_join":
            nv = int(obj["nvars"])
            m1 = PolyMap(nv, [parse_poly(s, nv) for s in obj["map1"]])
            m2 = PolyMap(nv, [parse_poly(s, nv) for s in obj["map2"]])
            return ruled_join(m1, m2)
        if op == "fibered_join":
            bvars = int(obj["base_vars"])
            base_coords = [parse_poly(s, bvars) for s in obj["base"]]
            fsrc = obj["fiber"]
            # Fiber variable count: parse against the widest index used.
            fvars = _max_var_index(fsrc) + 1
            fvars = max(fvars, bvars)
            fiber_coords = [parse_poly(s, fvars) for s in fsrc]
            return fibered_join(PolyMap(bvars, base_coords), PolyMap(fvars, fiber_coords))
        if op == "join_linear":
            child = spec_from_obj(obj["child"])
            return JoinLinear(child, [[int(x) for x in row] for row in obj["block"]])
    except (KeyError, ValueError, TypeError) as exc:
        raise SpecParseError(f"bad {op!r} node: {exc}") from exc
    raise SpecParseError(f"unknown op {op!r}")


def _max_var_index(poly_strs: list[str]) -> int:
    import re

    best = 0
    for s in poly_strs:
        for m in re.finditer(r"[xt](\d+)", s):
            best = max(best, int(m.group(1)))
    return best


def dumps_spec(spec: VarietySpec) -> str:
    return json.dumps(spec_to_obj(spec), sort_keys=True, separators=(",", ":"))


def loads_spec(text: str) -> VarietySpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"invalid JSON: {exc}") from exc
    return spec_from_obj(obj)


def spec_hash(spec: VarietySpec) -> str:
    return hashlib.sha256(dumps_spec(spec).encode()).hexdigest()
