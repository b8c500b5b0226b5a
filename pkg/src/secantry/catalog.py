"""Catalog of minimally k-defective threefold families and their invariants.

Each family F1..F14 of the classification of defective threefolds gets one
concrete constructible representative per (k, variant), built from the
variety combinators, together with the invariant table it must reproduce:
ambient span r, secant dimension s^(k), defect delta_k, tangential image
dimension n_k, minimality, and (where meaningful) s^(k+1).

Three families (F3, F6, F9) need threefolds whose curve sections have
arithmetic genus 1 or 2; those have no rational parametrization and are
reported NotConstructible rather than approximated.  Verification never
autocorrects a mismatch between the table and a measurement: mismatches
are surfaced as data.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .linalg import derive_rng
from .mpoly import MPoly, PolyMap, random_poly
from .terracini import (DEFAULT_TRIALS, ScanResult, TangentialReport,
                        min_defective_scan, tangential_projection)
from .variety import (Parametric, VarietySpec, center_on_points,
                      cone_over, fibered_join, hypersurface, join_linear,
                      on_quadric, project_from, projective_space,
                      random_center, random_cone_section, scroll, segre_pair,
                      veronese)


class NotConstructible(Exception):
    """This (family, k) has no representative the engine can build."""


@dataclass(frozen=True)
class Expected:
    """Invariant table row for one catalog entry (asserted exactly)."""

    r: int
    s_k: int
    delta_k: int
    n_k: int
    s_k_plus_1: int | None = None
    minimal: bool = True


@dataclass
class CatalogEntry:
    family: str
    k: int
    variant: str
    spec: VarietySpec
    expected: Expected
    k_eval: int  # secancy order the expected row refers to
    note: str = ""


@dataclass
class VerifyResult:
    entry: CatalogEntry
    scan: ScanResult | None
    tangential: TangentialReport | None
    passed: bool
    mismatches: list[str] = field(default_factory=list)


@dataclass
class SkippedFamily:
    family: str
    k: int
    reason: str


FAMILIES = ["F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8", "F9", "F10",
            "F11", "F12", "F13", "F14",
            "EX_VERONESE_P3", "EX_SEGRE", "EX_TERRACINI_13"]

K_CAP = 5  # keeps every matrix at desk scale

FAMILY_DOMAINS: dict[str, tuple[int, ...]] = {
    "F1": tuple(range(2, K_CAP + 1)),
    "F2": (3,),
    "F3": (),
    "F4": (4, 5),
    "F5": (4,),
    "F6": (),
    "F7": tuple(range(2, K_CAP + 1)),
    "F8": (2,),
    "F9": (),
    "F10": tuple(range(2, K_CAP + 1)),
    "F11": tuple(range(2, K_CAP + 1)),
    "F12": tuple(range(2, K_CAP + 1)),
    "F13": tuple(range(2, K_CAP + 1)),
    "F14": tuple(range(2, K_CAP + 1)),
    "EX_VERONESE_P3": (1,),
    "EX_SEGRE": (2, 3),
    "EX_TERRACINI_13": (4,),
}

FAMILY_VARIANTS: dict[str, tuple[str, ...]] = {
    "F1": ("point", "line"),
    "F2": ("uple", "cone"),
    "F7": ("i0", "i1"),
    "F12": ("narrow", "wide"),
    "F13": ("full", "point", "line", "line_secant"),
}

NOT_CONSTRUCTIBLE_REASONS = {
    "F3": "needs a threefold with elliptic curve sections (no rational parametrization)",
    "F6": "needs a threefold with genus-2 curve sections (no rational parametrization)",
    "F9": "needs a surface with elliptic curve sections (no rational parametrization)",
}

FAMILY_NOTES = {
    "F1": "threefold in a cone (vertex a point or a line) over the 2-uple of a "
          "minimal-degree threefold, realized as quadric sections of the cone",
    "F2": "2-uple of a cubic hypersurface in P^4, plus the vertex-point cone variant",
    "F4": "2-uple of a cone with vertex a line over a smooth rational curve of "
          "degree k in P^(k-1)",
    "F5": "2-uple of a threefold cut on the smooth quadric in P^5 by a cubic",
    "F7": "join of the 2-uple of a minimal-degree surface with a linear image "
          "of it in a P^(k-i) block",
    "F8": "join of the 2-uple of a cubic surface in P^3 with a pencil image (vertex a line)",
    "F10": "join of a general rational surface with a linear image in P^(k-1)",
    "F11": "scroll joining a rational normal curve to a surface scroll spanning "
           "a 2k-dimensional vertex block",
    "F12": "like F11 with a (2k-1)-dimensional vertex block",
    "F13": "2-uple of a minimal-degree threefold in P^(k+2), optionally projected "
           "from a point or a line (the line possibly secant)",
    "F14": "diagonal Segre image of a minimal-degree threefold under two point "
           "projections to P^(k+1)",
    "EX_VERONESE_P3": "the 2-uple embedding of P^3 in P^9",
    "EX_SEGRE": "the Segre product P^(k+1) x P^(k+1)",
    "EX_TERRACINI_13": "P^1 x P^2 embedded by divisors of bidegree (1, 3) in P^19",
}


def _parts(d: int, blocks: int) -> list[int]:
    """Balanced partition of d into `blocks` nonnegative scroll degrees."""
    base, extra = divmod(d, blocks)
    return [base + (1 if i < extra else 0) for i in range(blocks)]


def minimal_threefold(d: int) -> Parametric:
    """A threefold of minimal degree d in P^(d+2) (a 3-block scroll)."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    return scroll(_parts(d, 3))


def minimal_surface(d: int) -> Parametric:
    """A surface of minimal degree d in P^(d+1) (a 2-block scroll)."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    return scroll(_parts(d, 2))


def _general_rational_surface(span_dim: int, rng: random.Random) -> Parametric:
    """P^2 re-embedded into P^span_dim by span_dim+1 random plane curves.

    The forms are dense random combinations of all plane-curve monomials of
    the smallest degree rich enough to span; such a surface lands outside
    the thin classified list of weakly defective surfaces with
    overwhelming probability (and the measured invariants confirm or
    reject per instance).
    """
    need = span_dim + 1
    e = 1
    while (e + 1) * (e + 2) // 2 < need:
        e += 1
    coords = [random_poly(2, e, rng, homogeneous=False) for _ in range(need)]
    return Parametric(PolyMap(2, coords))


def _surface_scroll_map(deg_a: int, deg_b: int) -> PolyMap:
    """Chart (t, u) -> (t^0..t^a, u t^0..u t^b): a scroll surface map."""
    coords = []
    for j in range(deg_a + 1):
        coords.append(MPoly.monomial(2, (j, 0)))
    for j in range(deg_b + 1):
        coords.append(MPoly.monomial(2, (j, 1)))
    return PolyMap(2, coords)


def _build_spec(family: str, k: int, variant: str, rng: random.Random) -> VarietySpec:
    if family == "F1":
        base = veronese(minimal_threefold(k - 1), 2)
        x = random_cone_section(base, 2, rng)
        if variant == "line":
            x = random_cone_section(x, 2, rng)
        return x
    if family == "F2":
        y = hypersurface(4, random_poly(5, 3, rng))
        x = veronese(y, 2)
        if variant == "cone":
            x = random_cone_section(x, 2, rng)
        return x
    if family == "F4":
        if variant == "double_line":
            # Projection of a minimal-degree threefold from a point on the
            # plane of its degree-2 directrix conic; the conic contracts to
            # a double line of the image.  Optional variant, not in default
            # runs.  The directrix block must have degree exactly 2: other
            # conics sit inside quadric sub-scrolls whose span contains the
            # center, which would double a whole surface.
            z = scroll([2] + _parts(k - 2, 2))
            # The directrix conic (1, t, t^2, 0, ..., 0) spans <e0, e1, e2>.
            combo = [rng.randrange(1, 10 ** 6) for _ in range(3)]
            center = [combo + [0] * (z.ambient - 2)]
            y = project_from(z, center, degree=k)
            return veronese(y, 2)
        curve = project_from(scroll([k]), ("random", 0), rng=rng, degree=k)
        y = cone_over(curve, 1)
        return veronese(y, 2)
    if family == "F5":
        y = on_quadric(random_poly(6, 3, rng))
        y.degree = 6
        return veronese(y, 2)
    if family == "F7":
        i = 1 if variant == "i1" else 0
        y2 = veronese(minimal_surface(k), 2)
        block = random_center(y2.ambient, k - i, rng)
        return join_linear(y2, block)
    if family == "F8":
        s = hypersurface(3, random_poly(4, 3, rng))
        y2 = veronese(s, 2)
        return join_linear(y2, random_center(y2.ambient, 1, rng))
    if family == "F10":
        s = _general_rational_surface(3 * k + 3, rng)
        return join_linear(s, random_center(s.ambient, k - 1, rng))
    if family in ("F11", "F12"):
        if family == "F11":
            curve_deg = 2 * k + 2
            fiber = _surface_scroll_map(k, k - 1)        # spans a 2k-dim block
        else:
            curve_deg = (2 * k + 2) if variant == "narrow" else (2 * k + 3)
            fiber = _surface_scroll_map(k - 1, k - 1)    # spans a (2k-1)-dim block
        base = scroll([curve_deg]).map
        return fibered_join(base, fiber)
    if family == "F13":
        y2 = veronese(minimal_threefold(k), 2)
        if variant == "full":
            return y2
        if variant == "point":
            return project_from(y2, ("span", 0), rng=rng)
        if variant == "line":
            return project_from(y2, ("span", 1), rng=rng)
        if variant == "line_secant":
            return project_from(y2, ("points", 2), rng=rng)
        raise ValueError(f"unknown F13 variant {variant!r}")
    if family == "F14":
        # Two point projections to P^(k+1), each centered at a point of Y
        # itself, multiplied into the Segre coordinates.  Centering on Y is
        # what makes the product span exactly P^(4k+3): for centers off Y
        # the products span one dimension more.
        y = minimal_threefold(k)
        points = center_on_points(y, 2, rng)
        proj = []
        for q in points:
            m = [[q[0] if j == i else (-q[i] if j == 0 else 0)
                  for j in range(y.ambient + 1)] for i in range(1, y.ambient + 1)]
            proj.append(y.map.compose_linear(m))
        coords = [a * b for a in proj[0].coords for b in proj[1].coords]
        return Parametric(PolyMap(3, coords))
    if family == "EX_VERONESE_P3":
        return veronese(projective_space(3), 2)
    if family == "EX_SEGRE":
        return segre_pair(projective_space(k + 1), projective_space(k + 1))
    if family == "EX_TERRACINI_13":
        return segre_pair(projective_space(1), veronese(projective_space(2), 3))
    raise ValueError(f"unknown family {family!r}")


def _expected(family: str, k: int, variant: str) -> tuple[Expected, int]:
    """The invariant table row plus the secancy order it refers to."""
    if family == "F1":
        if variant == "point":
            return Expected(4 * k + 2, 4 * k + 1, 1, 1, 4 * k + 2), k
        return Expected(4 * k + 3, 4 * k + 2, 1, 2, 4 * k + 3), k
    if family == "F2":
        if variant == "uple":
            return Expected(14, 13, 1, 1, 14), 3
        return Expected(15, 14, 1, 2, 15), 3
    if family == "F4":
        return Expected(4 * k + 3, 4 * k + 2, 1, 2, 4 * k + 3), k
    if family == "F5":
        return Expected(19, 18, 1, 2, 19), 4
    if family == "F7":
        i = 1 if variant == "i1" else 0
        return Expected(4 * k + 3 - i, 4 * k + 2 - i, 1, 2 - i, 4 * k + 3 - i), k
    if family == "F8":
        return Expected(11, 10, 1, 2, 11), 2
    if family == "F10":
        return Expected(4 * k + 3, 4 * k + 2, 1, 2, 4 * k + 3), k
    if family == "F11":
        return Expected(4 * k + 3, 4 * k + 2, 1, 2, 4 * k + 3), k
    if family == "F12":
        if variant == "narrow":
            return Expected(4 * k + 2, 4 * k + 1, 1, 1, 4 * k + 2), k
        return Expected(4 * k + 3, 4 * k + 1, 2, 1, 4 * k + 3), k
    if family == "F13":
        # The full 2-uple is also (k+1)-defective: s^(k+1) stops at 4k+4 < r.
        r = {"full": 4 * k + 5, "point": 4 * k + 4,
             "line": 4 * k + 3, "line_secant": 4 * k + 3}[variant]
        s_next = 4 * k + 4 if variant in ("full", "point") else 4 * k + 3
        return Expected(r, 4 * k + 2, 1, 2, s_next), k
    if family == "F14":
        return Expected(4 * k + 3, 4 * k + 2, 1, 2, 4 * k + 3), k
    if family == "EX_VERONESE_P3":
        return Expected(9, 6, 1, 2, 8), 1
    if family == "EX_SEGRE":
        # Secants of a Segre square are bounded-rank matrix loci:
        # s^(h) = r - (k + 1 - h)^2 until that fills the ambient space.
        r = (k + 2) ** 2 - 1
        return Expected(r, r - k * k, 2, 2 * k, r - (k - 1) ** 2), 1
    if family == "EX_TERRACINI_13":
        return Expected(19, 18, 1, 2, 19), 4
    raise ValueError(f"unknown family {family!r}")


def default_variant(family: str) -> str:
    return FAMILY_VARIANTS.get(family, ("default",))[0]


def build_family(family: str, k: int, variant: str | None = None,
                 rng: random.Random | None = None) -> CatalogEntry:
    """Build the representative spec and expected table for (family, k, variant).

    Raises NotConstructible for F3/F6/F9 and for k outside the family's
    constructible domain.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if family in NOT_CONSTRUCTIBLE_REASONS:
        raise NotConstructible(NOT_CONSTRUCTIBLE_REASONS[family])
    domain = FAMILY_DOMAINS[family]
    if k not in domain:
        raise NotConstructible(
            f"{family} has no representative at k={k} (constructible k: {list(domain)})")
    variant = variant or default_variant(family)
    if variant not in FAMILY_VARIANTS.get(family, (variant,)):
        raise ValueError(f"unknown variant {variant!r} for {family}")
    if rng is None:
        rng = derive_rng(0, "catalog", family, k, variant)
    spec = _build_spec(family, k, variant, rng)
    expected, k_eval = _expected(family, k, variant)
    return CatalogEntry(family=family, k=k, variant=variant, spec=spec,
                        expected=expected, k_eval=k_eval,
                        note=FAMILY_NOTES.get(family, ""))


def verify_family(entry: CatalogEntry, ctxs, rng: random.Random,
                  trials: int = DEFAULT_TRIALS) -> VerifyResult:
    """Measure the entry and compare every expected field exactly."""
    exp = entry.expected
    k = entry.k_eval
    k_max = k + 1 if exp.s_k_plus_1 is not None else k
    scan = min_defective_scan(entry.spec, k_max, ctxs, rng, trials)
    tan = tangential_projection(entry.spec, k, ctxs, rng)
    mism: list[str] = []
    top = scan.reports[k]
    if top.r != exp.r:
        mism.append(f"r: expected {exp.r}, measured {top.r}")
    if top.chain[k] != exp.s_k:
        mism.append(f"s_k: expected {exp.s_k}, measured {top.chain[k]}")
    if top.delta_k != exp.delta_k:
        mism.append(f"delta_k: expected {exp.delta_k}, measured {top.delta_k}")
    if tan.n_k != exp.n_k:
        mism.append(f"n_k: expected {exp.n_k}, measured {tan.n_k}")
    if exp.minimal and scan.first_defective != k:
        mism.append(f"minimal: expected first defective k={k}, "
                    f"measured {scan.first_defective}")
    if exp.s_k_plus_1 is not None:
        measured_next = scan.reports[k + 1].chain[k + 1]
        if measured_next != exp.s_k_plus_1:
            mism.append(f"s_(k+1): expected {exp.s_k_plus_1}, measured {measured_next}")
    return VerifyResult(entry=entry, scan=scan, tangential=tan,
                        passed=not mism, mismatches=mism)


def verify_all(k_range, ctxs, rng: random.Random | None = None,
               trials: int = DEFAULT_TRIALS, seed: int = 0):
    """Verify every constructible (family, k, variant); failures are data.

    Returns a list mixing VerifyResult and SkippedFamily records (never
    aborts on a single failure).
    """
    ks = sorted(set(k_range))
    if any(k < 1 or k > K_CAP for k in ks):
        raise ValueError(f"k range must stay within [1, {K_CAP}]")
    out: list[VerifyResult | SkippedFamily] = []
    for family in FAMILIES:
        domain = FAMILY_DOMAINS.get(family, ())
        if family in NOT_CONSTRUCTIBLE_REASONS:
            for k in ks:
                out.append(SkippedFamily(family, k, NOT_CONSTRUCTIBLE_REASONS[family]))
            continue
        for k in ks:
            if k not in domain:
                out.append(SkippedFamily(
                    family, k,
                    f"no representative at k={k} (constructible k: {list(domain)})"))
                continue
            for variant in FAMILY_VARIANTS.get(family, ("default",)):
                entry = build_family(family, k, variant)
                run_rng = rng if rng is not None else derive_rng(
                    seed, "verify", family, k, variant)
                out.append(verify_family(entry, ctxs, run_rng, trials))
    return out
