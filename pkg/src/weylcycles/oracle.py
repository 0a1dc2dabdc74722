"""Dimension of linear systems with assigned multiple points, by rank over F_p.

Points: the first min(s, n+1) are the coordinate points, the next one is
(1, ..., 1), the rest are drawn uniformly from {1..p-1}^(n+1) with
``numpy.random.default_rng(seed)``. Multiplicity m at a point means every
partial derivative of order m-1 vanishes there (Euler's relation then
gives the lower orders, since p > d).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, factorial
from typing import Iterable, Sequence

import numpy as np

from .errors import PreconditionError, ResourceCapError
from .lattice import DivisorClass, Space

DEFAULT_PRIME = 2147483647  # 2^31 - 1; products of residues fit in int64
DEFAULT_CELL_CAP = 4_000_000
ORACLE_VERSION = "fp-rank-1"
_SECOND_SEED_SALT = 0x5EED


@dataclass(frozen=True)
class InterpolationProblem:
    n: int
    d: int
    m: tuple[int, ...]
    seed: int = 0
    prime: int = DEFAULT_PRIME

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        if self.n < 1 or self.d < 0:
            raise PreconditionError(f"need n >= 1 and d >= 0, got n={self.n}, d={self.d}")
        if any(x < 1 for x in self.m):
            raise PreconditionError(f"multiplicities must be positive, got {self.m}")
        if self.prime <= self.d:
            raise PreconditionError(f"prime {self.prime} must exceed the degree {self.d}")
        if self.prime >= 2**31:
            raise PreconditionError("prime must stay below 2^31 for int64 elimination")

    @classmethod
    def from_divisor(cls, D: DivisorClass, seed: int = 0, prime: int = DEFAULT_PRIME) -> "InterpolationProblem":
        """Problem for D; zero multiplicities are dropped, negative ones rejected."""
        if any(x < 0 for x in D.m):
            raise PreconditionError(f"negative multiplicity in {D}")
        return cls(D.space.n, D.d, tuple(x for x in D.m if x > 0), seed, prime)

    @property
    def monomial_count(self) -> int:
        return comb(self.n + self.d, self.n)

    @property
    def condition_count(self) -> int:
        return sum(comb(self.n + min(x - 1, self.d), self.n) for x in self.m)


@dataclass(frozen=True)
class OracleResult:
    dimension: int
    stable: bool
    per_seed: tuple[int, ...]
    seeds: tuple[int, ...]
    prime: int


def _exponents(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of all monomials of ``degree`` in ``nvars`` variables."""
    out = []
    for bars in itertools.combinations(range(degree + nvars - 1), nvars - 1):
        prev, e = -1, []
        for b in bars:
            e.append(b - prev - 1)
            prev = b
        e.append(degree + nvars - 2 - prev)
        out.append(tuple(e))
    return out


def general_points(n: int, s: int, seed: int, prime: int) -> list[tuple[int, ...]]:
    pts: list[tuple[int, ...]] = []
    for i in range(min(s, n + 1)):
        pts.append(tuple(1 if j == i else 0 for j in range(n + 1)))
    if s > n + 1:
        pts.append((1,) * (n + 1))
    rng = np.random.default_rng(seed)
    while len(pts) < s:
        pts.append(tuple(int(x) for x in rng.integers(1, prime, size=n + 1)))
    return pts


def condition_matrix(p: InterpolationProblem, seed: int) -> np.ndarray:
    n1, d, q = p.n + 1, p.d, p.prime
    monos = _exponents(n1, d)
    rows = []
    for point, mult in zip(general_points(p.n, len(p.m), seed, q), p.m):
        order = min(mult - 1, d)
        for alpha in _exponents(n1, order):
            row = []
            for beta in monos:
                val = 1
                for a, b, x in zip(alpha, beta, point):
                    if b < a:
                        val = 0
                        break
                    # d^a/dx^a of x^b = b!/(b-a)! x^(b-a)
                    val = val * (factorial(b) // factorial(b - a)) % q * pow(x, b - a, q) % q
                row.append(val)
            rows.append(row)
    if not rows:
        return np.zeros((0, len(monos)), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def rank_mod_p(A: np.ndarray, prime: int) -> int:
    """Rank of an int64 matrix over F_prime (prime < 2^31)."""
    A = np.array(A, dtype=np.int64) % prime
    nrows, ncols = A.shape
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        nz = np.nonzero(A[rank:, c])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            A[[rank, piv]] = A[[piv, rank]]
        inv = pow(int(A[rank, c]), prime - 2, prime)
        A[rank] = A[rank] * inv % prime
        col = A[:, c].copy()
        col[rank] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            A[rows] = (A[rows] - (col[rows, None] * A[rank][None, :]) % prime) % prime
        rank += 1
    return rank


def _dimension_for_seed(p: InterpolationProblem, seed: int, cell_cap: int) -> int:
    cells = p.monomial_count * p.condition_count
    if cells > cell_cap:
        raise ResourceCapError(f"matrix {p.condition_count}x{p.monomial_count} exceeds cap {cell_cap}")
    A = condition_matrix(p, seed)
    if A.shape[0] == 0:
        return p.monomial_count
    return p.monomial_count - rank_mod_p(A, p.prime)


def oracle_dimension(p: InterpolationProblem, cell_cap: int = DEFAULT_CELL_CAP) -> OracleResult:
    """Affine dimension of the system, run with two seeds."""
    seeds = (p.seed, p.seed ^ _SECOND_SEED_SALT)
    dims = tuple(_dimension_for_seed(p, sd, cell_cap) for sd in seeds)
    return OracleResult(max(dims), dims[0] == dims[1], dims, seeds, p.prime)


def system_dimension(p: InterpolationProblem, cell_cap: int = DEFAULT_CELL_CAP) -> int:
    return oracle_dimension(p, cell_cap).dimension


def divisor_dimension(D: DivisorClass, seed: int = 0, prime: int = DEFAULT_PRIME) -> OracleResult:
    """Oracle for a divisor class; negative degree gives 0."""
    if D.d < 0:
        return OracleResult(0, True, (0, 0), (seed, seed ^ _SECOND_SEED_SALT), prime)
    return oracle_dimension(InterpolationProblem.from_divisor(D, seed, prime))


# -- tables -------------------------------------------------------------------

@dataclass(frozen=True)
class TableRow:
    d: int
    m: tuple[int, ...]
    oracle: int
    stable: bool
    wdim: int
    effective: bool
    complete: bool

    @property
    def match(self) -> bool:
        return self.oracle == self.expected

    @property
    def expected(self) -> int:
        """max(wdim, 0) inside the effective cone, 0 outside it."""
        return max(self.wdim, 0) if self.effective else 0

    def to_json(self) -> dict:
        return {"d": self.d, "m": list(self.m), "oracle": self.oracle, "stable": self.stable,
                "wdim": self.wdim, "effective": self.effective, "expected": self.expected,
                "match": self.match, "complete": self.complete}


def multiplicity_vectors(s: int, m_min: int, m_max: int) -> Iterable[tuple[int, ...]]:
    """Nonincreasing vectors of length s with entries in [m_min, m_max]."""
    for combo in itertools.combinations_with_replacement(range(m_max, m_min - 1, -1), s):
        yield combo


def _row(space: Space, d: int, m: tuple[int, ...], seed: int, prime: int, degree_bound) -> TableRow:
    from .baselocus import in_effective_cone, wdim

    D = DivisorClass(space, d, m)
    res = divisor_dimension(D, seed, prime)
    w = wdim(D, degree_bound)
    return TableRow(d, m, res.dimension, res.stable, w.value, in_effective_cone(D, degree_bound), w.complete)


def _row_star(args):
    return _row(*args)


def dimension_table(space: Space, d_max: int, m_max: int, seed: int = 0, *, d_min: int = 0, m_min: int = 1,
                    prime: int = DEFAULT_PRIME, degree_bound: int | None = None, jobs: int = 1) -> list[TableRow]:
    """Oracle dimension against wdim for every (d, m) in the grid.

    Multiplicity vectors are taken up to permutation (nonincreasing).
    Rows come back in (d, m) order regardless of ``jobs``.
    """
    if d_max < d_min or m_max < m_min or m_min < 1:
        raise PreconditionError("empty or invalid grid")
    tasks = [(space, d, m, seed, prime, degree_bound)
             for d in range(d_min, d_max + 1)
             for m in multiplicity_vectors(space.s, m_min, m_max)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_row_star, tasks, chunksize=8))
    return [_row(*t) for t in tasks]
