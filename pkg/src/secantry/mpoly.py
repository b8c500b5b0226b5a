"""Sparse multivariate polynomial arithmetic and first-order jets.

Polynomials carry *integer* coefficients and are reduced modulo a prime
only at evaluation time.  That way one polynomial (or one variety
description built from polynomials) can be evaluated under several
independently drawn primes, which is how every dimension measurement in
this package gets cross-checked.

Ring operations (+, *, partial derivatives) are exact over the integers.
A term map {exponent_tuple: coefficient} never stores zero coefficients.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass


class SingularSample(Exception):
    """A sampled point gave a degenerate Jacobian (caller should resample)."""


class MPoly:
    """Sparse multivariate polynomial with integer coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[tuple[int, ...], int] | None = None):
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c != 0}

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MPoly":
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c: int) -> "MPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "MPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, nvars: int, exps: tuple[int, ...], c: int = 1) -> "MPoly":
        return cls(nvars, {tuple(exps): c})

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "MPoly | int") -> "MPoly":
        if isinstance(other, int):
            other = MPoly.constant(self.nvars, other)
        if self.nvars != other.nvars:
            raise ValueError("mixed variable counts")
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return MPoly(self.nvars, terms)

    def __neg__(self) -> "MPoly":
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MPoly | int") -> "MPoly":
        if isinstance(other, int):
            other = MPoly.constant(self.nvars, other)
        return self + (-other)

    def __mul__(self, other: "MPoly | int") -> "MPoly":
        if isinstance(other, int):
            return MPoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        if self.nvars != other.nvars:
            raise ValueError("mixed variable counts")
        terms: dict[tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MPoly(self.nvars, terms)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, MPoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"MPoly({self.nvars}, {poly_str(self)!r})"

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    # -- calculus and evaluation --------------------------------------------

    def partial(self, var: int) -> "MPoly":
        """Formal partial derivative with respect to variable `var`."""
        if not 0 <= var < self.nvars:
            raise ValueError("variable index out of range")
        terms: dict[tuple[int, ...], int] = {}
        for e, c in self.terms.items():
            k = e[var]
            if k:
                e2 = list(e)
                e2[var] = k - 1
                key = tuple(e2)
                terms[key] = terms.get(key, 0) + c * k
        return MPoly(self.nvars, terms)

    def eval(self, point: list[int], p: int) -> int:
        if len(point) != self.nvars:
            raise ValueError("point length must equal nvars")
        pt = [v % p for v in point]
        acc = 0
        for e, c in self.terms.items():
            t = c % p
            for v, k in zip(pt, e):
                if k:
                    t = t * pow(v, k, p) % p
            acc += t
        return acc % p

    def grad_eval(self, point: list[int], p: int) -> tuple[int, list[int]]:
        """Value and full gradient at `point`, via one dual-number pass."""
        jets = [Jet.seed(p, v, self.nvars, i) for i, v in enumerate(point)]
        out = jet_eval(self, jets, p)
        return out.value, list(out.derivs)

    def to_univariate(self, values: list[int | None], p: int) -> list[int]:
        """Substitute numbers for all variables except the single None slot.

        Returns ascending coefficients of the remaining univariate polynomial.
        """
        free = [i for i, v in enumerate(values) if v is None]
        if len(free) != 1:
            raise ValueError("exactly one variable must stay free")
        var = free[0]
        coeffs: dict[int, int] = {}
        for e, c in self.terms.items():
            t = c % p
            for i, k in enumerate(e):
                if k and i != var:
                    t = t * pow(values[i] % p, k, p) % p
            d = e[var]
            coeffs[d] = (coeffs.get(d, 0) + t) % p
        if not coeffs:
            return []
        out = [0] * (max(coeffs) + 1)
        for d, c in coeffs.items():
            out[d] = c
        while out and out[-1] == 0:
            out.pop()
        return out

    def shift_vars(self, offset: int, new_nvars: int) -> "MPoly":
        """Reinterpret in a larger variable set, shifting indices by `offset`."""
        terms = {}
        for e, c in self.terms.items():
            e2 = [0] * new_nvars
            for i, k in enumerate(e):
                e2[offset + i] = k
            terms[tuple(e2)] = c
        return MPoly(new_nvars, terms)


@dataclass(frozen=True)
class Jet:
    """First-order jet (dual number): a value plus its gradient.

    Product rule holds by construction: jet(f*g) = (fg, f*dg + g*df).
    """

    p: int
    value: int
    derivs: tuple[int, ...]

    @classmethod
    def seed(cls, p: int, value: int, nvars: int, var: int) -> "Jet":
        d = [0] * nvars
        d[var] = 1
        return cls(p, value % p, tuple(d))

    @classmethod
    def const(cls, p: int, value: int, nvars: int) -> "Jet":
        return cls(p, value % p, (0,) * nvars)

    def __add__(self, other: "Jet") -> "Jet":
        return Jet(self.p, (self.value + other.value) % self.p,
                   tuple((a + b) % self.p for a, b in zip(self.derivs, other.derivs)))

    def __mul__(self, other: "Jet | int") -> "Jet":
        p = self.p
        if isinstance(other, int):
            return Jet(p, self.value * other % p, tuple(d * other % p for d in self.derivs))
        v = self.value * other.value % p
        d = tuple((self.value * db + other.value * da) % p
                  for da, db in zip(self.derivs, other.derivs))
        return Jet(p, v, d)

    __rmul__ = __mul__

    def pow(self, k: int) -> "Jet":
        out = Jet.const(self.p, 1, len(self.derivs))
        for _ in range(k):
            out = out * self
        return out


def jet_eval(f: MPoly, jets: list[Jet], p: int) -> Jet:
    """Evaluate f on jet inputs; returns value plus gradient composed by the chain rule."""
    nd = len(jets[0].derivs) if jets else 0
    acc = Jet.const(p, 0, nd)
    for e, c in f.terms.items():
        t = Jet.const(p, c, nd)
        for jet, k in zip(jets, e):
            if k:
                t = t * jet.pow(k)
        acc = acc + t
    return acc


class PolyMap:
    """An ordered tuple of polynomials in shared variables (a coordinate map)."""

    __slots__ = ("nvars", "coords")

    def __init__(self, nvars: int, coords: list[MPoly]):
        if not coords:
            raise ValueError("a map needs at least one coordinate")
        if any(c.nvars != nvars for c in coords):
            raise ValueError("all coordinates must share nvars")
        if all(c.is_zero() for c in coords):
            raise ValueError("all coordinates identically zero")
        self.nvars = nvars
        self.coords = list(coords)

    def __len__(self) -> int:
        return len(self.coords)

    def eval(self, point: list[int], p: int) -> list[int]:
        return [c.eval(point, p) for c in self.coords]

    def partial_rows(self, point: list[int], p: int) -> list[list[int]]:
        """Rows d/dt_j of the map at `point` (one gradient pass per coordinate)."""
        rows = [[0] * len(self.coords) for _ in range(self.nvars)]
        for ci, c in enumerate(self.coords):
            _, grad = c.grad_eval(point, p)
            for j in range(self.nvars):
                rows[j][ci] = grad[j]
        return rows

    def compose_linear(self, mat: list[list[int]]) -> "PolyMap":
        """Left-compose with a linear map: coordinates become mat . coords."""
        if any(len(row) != len(self.coords) for row in mat):
            raise ValueError("matrix width must match coordinate count")
        new = []
        for row in mat:
            acc = MPoly.zero(self.nvars)
            for a, c in zip(row, self.coords):
                if a:
                    acc = acc + c * a
            if acc.is_zero():
                acc = MPoly.zero(self.nvars)
            new.append(acc)
        return PolyMap(self.nvars, new)

    def max_degree(self) -> int:
        return max(c.degree() for c in self.coords)


def jacobian_at(fmap: PolyMap, point: list[int], p: int) -> list[list[int]]:
    """Affine-cone tangent frame of a parametrized image at fmap(point).

    Rows are F(t) followed by dF/dt_j(t); the value row accounts for the
    cone scaling direction.  Raises SingularSample when the rows do not
    reach full rank nvars+1 (non-generic point; callers resample).
    """
    from . import linalg

    value = fmap.eval(point, p)
    if not any(value):
        raise SingularSample("map vanishes at the sample point")
    rows = [value] + fmap.partial_rows(point, p)
    if linalg.rank(rows, p) < fmap.nvars + 1:
        raise SingularSample("Jacobian rank below nvars+1")
    return rows


# -- monomial bookkeeping ----------------------------------------------------


def monomial_exponents(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree `degree`, in a fixed deterministic order."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def random_poly(nvars: int, degree: int, rng: random.Random,
                homogeneous: bool = True) -> MPoly:
    """Dense random polynomial with integer coefficients in [1, 2**61)."""
    degs = [degree] if homogeneous else range(degree + 1)
    terms = {}
    for d in degs:
        for e in monomial_exponents(nvars, d):
            terms[e] = rng.randrange(1, 1 << 61)
    return MPoly(nvars, terms)


# -- parsing and printing ----------------------------------------------------


def poly_str(f: MPoly, names: str = "x") -> str:
    """Canonical string form: integer-coefficient terms in sorted exponent order."""
    if not f.terms:
        return "0"
    parts = []
    for e in sorted(f.terms, reverse=True):
        c = f.terms[e]
        factors = []
        for i, k in enumerate(e):
            if k == 1:
                factors.append(f"{names}{i}")
            elif k > 1:
                factors.append(f"{names}{i}^{k}")
        body = "*".join(factors)
        if not body:
            term = str(abs(c))
        elif abs(c) == 1:
            term = body
        else:
            term = f"{abs(c)}*{body}"
        parts.append(("- " if c < 0 else "+ ") + term)
    joined = " ".join(parts)
    return joined[2:] if joined.startswith("+ ") else "-" + joined[2:]


class PolyParseError(ValueError):
    pass


def parse_poly(text: str, nvars: int, names: tuple[str, ...] = ("x", "t")) -> MPoly:
    """Parse an integer-coefficient polynomial in variables like x0..x<n-1>.

    Supports + - * ^ (or **), parentheses and implicit exponents; both `x`
    and `t` prefixes are accepted so map coordinates and ambient equations
    share one grammar.
    """
    tokens = _tokenize(text, names)
    pos = [0]

    def peek() -> str | None:
        return tokens[pos[0]] if pos[0] < len(tokens) else None

    def take() -> str:
        tok = tokens[pos[0]]
        pos[0] += 1
        return tok

    def parse_expr() -> MPoly:
        sign = 1
        while peek() in ("+", "-"):
            if take() == "-":
                sign = -sign
        acc = parse_term() * sign
        while peek() in ("+", "-"):
            op = take()
            term = parse_term()
            acc = acc + term if op == "+" else acc - term
        return acc

    def parse_term() -> MPoly:
        acc = parse_factor()
        while peek() == "*" or (peek() is not None and peek() not in "+-*^)" and peek() != ")"):
            if peek() == "*":
                take()
            acc = acc * parse_factor()
        return acc

    def parse_factor() -> MPoly:
        base = parse_atom()
        if peek() == "^":
            take()
            exp_tok = take()
            if not exp_tok.isdigit():
                raise PolyParseError(f"bad exponent {exp_tok!r}")
            out = MPoly.constant(nvars, 1)
            for _ in range(int(exp_tok)):
                out = out * base
            return out
        return base

    def parse_atom() -> MPoly:
        tok = peek()
        if tok is None:
            raise PolyParseError("unexpected end of input")
        if tok == "(":
            take()
            inner = parse_expr()
            if peek() != ")":
                raise PolyParseError("missing closing parenthesis")
            take()
            return inner
        if tok == "-":
            take()
            return -parse_atom()
        take()
        if tok.isdigit():
            return MPoly.constant(nvars, int(tok))
        for name in names:
            if tok.startswith(name) and tok[len(name):].isdigit():
                idx = int(tok[len(name):])
                if idx >= nvars:
                    raise PolyParseError(f"variable {tok} out of range (nvars={nvars})")
                return MPoly.variable(nvars, idx)
        raise PolyParseError(f"unexpected token {tok!r}")

    result = parse_expr()
    if pos[0] != len(tokens):
        raise PolyParseError(f"trailing input at token {tokens[pos[0]]!r}")
    return result


def _tokenize(text: str, names: tuple[str, ...]) -> list[str]:
    tokens = []
    i = 0
    text = text.replace("**", "^")
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+-*^()":
            tokens.append(ch)
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(text[i:j])
            i = j
        elif any(text.startswith(name, i) for name in names):
            name = next(n for n in names if text.startswith(n, i))
            j = i + len(name)
            while j < len(text) and text[j].isdigit():
                j += 1
            if j == i + len(name):
                raise PolyParseError(f"variable {name!r} needs an index")
            tokens.append(text[i:j])
            i = j
        else:
            raise PolyParseError(f"bad character {ch!r} in polynomial")
    return tokens
