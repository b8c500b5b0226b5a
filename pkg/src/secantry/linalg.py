"""Exact linear algebra over large prime fields.

Everything here is tolerance-free: matrices hold Python integers, all
arithmetic is done modulo a prime p, and a rank statement is an exact
statement about the given matrix.  Randomized callers re-run computations
under a second independently drawn prime because unlucky evaluation points
can only *drop* a rank, never raise it (the Schwartz-Zippel direction), so
the maximum observed value across primes and trials is the accepted one.

Field elements are plain ints in [0, p); a matrix is a list of rows.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

# Witnesses making Miller-Rabin deterministic for all n < 3.3 * 10**24,
# far beyond the 64-bit range used here.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

SAMPLE_RETRIES = 32


def is_prime_u64(n: int) -> bool:
    """Deterministic Miller-Rabin primality test, valid for all n < 2**64."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeContext:
    """A prime modulus plus the seed label it was drawn from.

    Invariant: p is prime and 2**(bits-1) <= p < 2**bits for bits = 62.
    """

    p: int
    seed: str

    def __post_init__(self) -> None:
        if not is_prime_u64(self.p):
            raise ValueError(f"{self.p} is not prime")

    def reduce(self, a: int) -> int:
        return a % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("no inverse of 0")
        return pow(a, self.p - 2, self.p)

    def rand(self, rng: random.Random) -> int:
        return rng.randrange(self.p)


def random_prime(bits: int, rng: random.Random, seed_label: str = "") -> PrimeContext:
    """Draw a uniform random prime in [2**(bits-1), 2**bits)."""
    if bits < 3:
        raise ValueError("bits too small")
    while True:
        cand = rng.randrange(1 << (bits - 1), 1 << bits) | 1
        if is_prime_u64(cand):
            return PrimeContext(p=cand, seed=seed_label)


def derive_rng(seed: int, *labels: object) -> random.Random:
    """Deterministically derive an independent RNG stream from a seed and labels."""
    return random.Random("secantry:" + str(seed) + "/" + "/".join(str(x) for x in labels))


def make_contexts(seed: int, count: int = 2, bits: int = 62) -> list[PrimeContext]:
    """Draw `count` independent primes for cross-checked exact computations."""
    out = []
    for i in range(count):
        label = f"{seed}:prime{i}"
        out.append(random_prime(bits, derive_rng(seed, "prime", i), seed_label=label))
    return out


class RowReducer:
    """Incremental Gaussian elimination over F_p.

    Rows are fed one at a time; each independent row is normalized (pivot 1)
    and stored keyed by its pivot column.  Supports rank queries and
    membership tests against the accumulated row space.
    """

    def __init__(self, p: int):
        self.p = p
        self.pivots: dict[int, list[int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def residual(self, row: list[int]) -> list[int]:
        """Reduce `row` against the stored pivot rows; result has zeros in pivot columns."""
        p = self.p
        r = [a % p for a in row]
        for col, prow in self.pivots.items():
            c = r[col]
            if c:
                r = [(a - c * b) % p for a, b in zip(r, prow)]
        return r

    def add(self, row: list[int]) -> bool:
        """Fold a row in; return True when it increased the rank."""
        r = self.residual(row)
        for col, val in enumerate(r):
            if val:
                inv = pow(val, -1, self.p)
                self.pivots[col] = [a * inv % self.p for a in r]
                return True
        return False

    def contains(self, row: list[int]) -> bool:
        return not any(self.residual(row))


def rank(mat: list[list[int]], p: int) -> int:
    """Row rank of an integer matrix modulo p, by Gaussian elimination."""
    red = RowReducer(p)
    for row in mat:
        red.add(row)
    return red.rank


def row_span_dim(rows: list[list[int]], p: int) -> int:
    """Dimension of the span of the given vectors over F_p."""
    if not rows:
        return 0
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("vectors must all have the same length")
    return rank(rows, p)


def row_basis(mat: list[list[int]], p: int) -> list[list[int]]:
    """A normalized basis of the row space (echelon rows, pivot-sorted)."""
    red = RowReducer(p)
    for row in mat:
        red.add(row)
    return [red.pivots[c] for c in sorted(red.pivots)]


def _rref(mat: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form plus the list of pivot columns."""
    rows = [[a % p for a in r] for r in mat]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][col], -1, p)
        rows[r] = [a * inv % p for a in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][col]:
                c = rows[i][col]
                rows[i] = [(a - c * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return rows[:r], pivots


def kernel_basis(mat: list[list[int]], p: int) -> list[list[int]]:
    """Rows spanning the right kernel {v : mat . v = 0 mod p}.

    Returns a (cols - rank) x cols matrix; empty list for full column rank.
    """
    if not mat:
        raise ValueError("kernel of an empty matrix is ambiguous")
    ncols = len(mat[0])
    rref, pivots = _rref(mat, p)
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free_cols:
        v = [0] * ncols
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-rref[i][f]) % p
        basis.append(v)
    return basis


def mat_vec(mat: list[list[int]], vec: list[int], p: int) -> list[int]:
    return [sum(a * b for a, b in zip(row, vec)) % p for row in mat]


def apply_map(rows: list[list[int]], kmap: list[list[int]], p: int) -> list[list[int]]:
    """Apply the linear map with matrix `kmap` (rows = output coords) to each row."""
    return [[sum(a * b for a, b in zip(krow, row)) % p for krow in kmap] for row in rows]
