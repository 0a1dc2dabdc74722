"""Exact polyhedral cones and the cones of k-moving curves.

Cones are stored by integer generators. Divisor and curve cones live in
the coordinates ``(d; m)`` and ``(delta; mu)`` and are dual to each other
through the intersection pairing, i.e. the form diag(1, -1, ..., -1).
Duals are computed with the double description method on Python ints.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .cycles import binom
from .errors import (DimensionMismatchError, InvariantViolationError, PreconditionError, ResourceCapError,
                     UnsupportedSpaceError)
from .lattice import CurveClass, DivisorClass, Space, dm_dual_curve, is_mori_dream
from .weyl import effective_orbit

DEFAULT_DIM_CAP = 10
_DUAL_KIND = {"plain": "plain", "divisor": "curve", "curve": "divisor"}

Vec = tuple[int, ...]


# -- integer linear algebra -----------------------------------------------------

def primitive(v: Sequence[int]) -> Vec:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise PreconditionError("zero vector has no primitive form")
    return tuple(x // g for x in v)


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


class _Echelon:
    """Incremental row echelon form over Q, kept in integers."""

    def __init__(self):
        self.rows: list[tuple[int, list[int]]] = []  # (pivot column, row)

    def reduce(self, v: Sequence[int]) -> list[int]:
        v = list(v)
        for p, row in self.rows:
            if v[p]:
                a, b = row[p], v[p]
                v = [a * x - b * y for x, y in zip(v, row)]
        return v

    def add(self, v: Sequence[int]) -> bool:
        """Add ``v``; return False if it was dependent."""
        r = self.reduce(v)
        nz = next((i for i, x in enumerate(r) if x), None)
        if nz is None:
            return False
        self.rows.append((nz, list(primitive(r))))
        return True


def rank(rows: Iterable[Sequence[int]]) -> int:
    ech = _Echelon()
    return sum(ech.add(r) for r in rows)


def nullspace(rows: Sequence[Sequence[int]], dim: int) -> list[Vec]:
    """Integer basis of {y : r . y = 0 for all rows r}."""
    M = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    row_i = 0
    for c in range(dim):
        piv = next((i for i in range(row_i, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[row_i], M[piv] = M[piv], M[row_i]
        inv = 1 / M[row_i][c]
        M[row_i] = [x * inv for x in M[row_i]]
        for i in range(len(M)):
            if i != row_i and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[row_i])]
        pivots.append(c)
        row_i += 1
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for f in free:
        y = [Fraction(0)] * dim
        y[f] = Fraction(1)
        for i, p in enumerate(pivots):
            y[p] = -M[i][f]
        den = 1
        for x in y:
            den = den * x.denominator // gcd(den, x.denominator)
        basis.append(primitive([int(x * den) for x in y]))
    return basis


def _inverse_columns(A: Sequence[Sequence[int]]) -> list[Vec]:
    """Primitive integer multiples of the columns of A^{-1} (A square, invertible)."""
    k = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(k)] for i, row in enumerate(A)]
    for c in range(k):
        piv = next(i for i in range(c, k) if M[i][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for i in range(k):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    cols = []
    for j in range(k):
        col = [M[i][k + j] for i in range(k)]
        den = 1
        for x in col:
            den = den * x.denominator // gcd(den, x.denominator)
        cols.append(primitive([int(x * den) for x in col]))
    return cols


def _extreme_rays(A: list[Vec], dim: int) -> list[Vec]:
    """Extreme rays of {z : A z >= 0}; A must have rank ``dim``."""
    ech = _Echelon()
    initial = []
    for i, row in enumerate(A):
        if ech.add(row):
            initial.append(i)
            if len(initial) == dim:
                break
    if len(initial) != dim:
        raise InvariantViolationError("constraint matrix is not of full column rank")
    cols = _inverse_columns([A[i] for i in initial])
    rays: list[Vec] = []
    zeros: list[int] = []
    for j, col in enumerate(cols):
        rays.append(col)
        zeros.append(sum(1 << initial[i] for i in range(dim) if i != j))
    done = set(initial)
    for idx, a in enumerate(A):
        if idx in done:
            continue
        bit = 1 << idx
        vals = [_dot(a, r) for r in rays]
        neg = [i for i, v in enumerate(vals) if v < 0]
        if not neg:
            for i, v in enumerate(vals):
                if v == 0:
                    zeros[i] |= bit
            continue
        pos = [i for i, v in enumerate(vals) if v > 0]
        new_rays, new_zeros = [], []
        for i, v in enumerate(vals):
            if v > 0:
                new_rays.append(rays[i])
                new_zeros.append(zeros[i])
            elif v == 0:
                new_rays.append(rays[i])
                new_zeros.append(zeros[i] | bit)
        need = dim - 2
        for p in pos:
            zp = zeros[p]
            for q in neg:
                common = zp & zeros[q]
                if common.bit_count() < need:
                    continue
                # combinatorial adjacency: no third ray shares the common zero set
                adjacent = True
                for t, zt in enumerate(zeros):
                    if t != p and t != q and zt & common == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vq = vals[p], vals[q]
                ray = primitive([vp * x - vq * y for x, y in zip(rays[q], rays[p])])
                new_rays.append(ray)
                new_zeros.append(common | bit)
        rays, zeros = new_rays, new_zeros
    return rays


# -- cones ----------------------------------------------------------------------

@dataclass(frozen=True)
class RationalCone:
    ambient_dim: int
    generators: tuple[Vec, ...]
    kind: str = "plain"  # "plain", "divisor" or "curve"

    def __post_init__(self):
        if self.kind not in _DUAL_KIND:
            raise PreconditionError(f"unknown cone kind {self.kind!r}")
        seen: dict[Vec, None] = {}
        for g in self.generators:
            if len(g) != self.ambient_dim:
                raise DimensionMismatchError(f"generator {g} not of length {self.ambient_dim}")
            if any(g):
                seen[primitive(g)] = None
        object.__setattr__(self, "generators", tuple(sorted(seen)))

    def _form(self, v: Sequence[int]) -> Vec:
        """Apply the pairing form, so that pairing becomes a dot product."""
        if self.kind == "plain":
            return tuple(v)
        return (v[0],) + tuple(-x for x in v[1:])

    def pair(self, x: Sequence[int], y: Sequence[int]) -> int:
        return _dot(self._form(x), y)

    @functools.cached_property
    def dual(self) -> "RationalCone":
        return dual_cone(self)

    @property
    def dimension(self) -> int:
        return rank(self.generators)

    def to_json(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "kind": self.kind, "generators": [list(g) for g in self.generators]}

    @classmethod
    def from_classes(cls, classes: Iterable, kind: str | None = None) -> "RationalCone":
        classes = list(classes)
        if not classes:
            raise PreconditionError("no classes given")
        if kind is None:
            kind = "curve" if isinstance(classes[0], CurveClass) else "divisor"
        return cls(len(classes[0].vector), tuple(c.vector for c in classes), kind)


def dual_cone(C: RationalCone, dim_cap: int | None = None) -> RationalCone:
    """The dual cone under the pairing of ``C.kind``, with extremal generators.

    An empty generator list gives the whole space, returned as the
    generators +-e_i.
    """
    dim = C.ambient_dim
    if dim_cap is not None and dim > dim_cap:
        raise ResourceCapError(f"ambient dimension {dim} exceeds cap {dim_cap}")
    G = [C._form(g) for g in C.generators]
    out_kind = _DUAL_KIND[C.kind]
    basis_rows = []
    ech = _Echelon()
    for g in G:
        if ech.add(g):
            basis_rows.append(g)
    rho = len(basis_rows)
    lineality = nullspace(G, dim) if rho < dim else []
    gens: list[Vec] = []
    for l in lineality:
        gens.append(l)
        gens.append(tuple(-x for x in l))
    if rho:
        # constraints restricted to the row space, parametrised by y = B^T z
        M = [tuple(_dot(g, b) for b in basis_rows) for g in G]
        for z in _extreme_rays(M, rho):
            y = [sum(z[i] * basis_rows[i][j] for i in range(rho)) for j in range(dim)]
            gens.append(primitive(y))
    D = RationalCone(dim, tuple(gens), out_kind)
    for g in C.generators:
        for h in D.generators:
            if C.pair(g, h) < 0:
                raise InvariantViolationError("dual generator pairs negatively with an input generator")
    return D


def _check_same(A: RationalCone, B: RationalCone):
    if A.ambient_dim != B.ambient_dim or A.kind != B.kind:
        raise DimensionMismatchError(f"cones of dims/kinds {A.ambient_dim}/{A.kind} and {B.ambient_dim}/{B.kind}")


def cone_contains(C: RationalCone, v: Sequence[int]) -> bool:
    if len(v) != C.ambient_dim:
        raise DimensionMismatchError(f"vector of length {len(v)} in a cone of dimension {C.ambient_dim}")
    D = C.dual
    return all(D.pair(h, v) >= 0 for h in D.generators)


def cone_equal(A: RationalCone, B: RationalCone) -> bool:
    _check_same(A, B)
    return all(cone_contains(B, g) for g in A.generators) and all(cone_contains(A, g) for g in B.generators)


def is_extremal(C: RationalCone, g: Sequence[int]) -> bool:
    """Whether ``g`` spans an extremal ray of the (pointed) cone C."""
    if not any(g) or not cone_contains(C, g):
        return False
    D = C.dual
    tight = [h for h in D.generators if D.pair(h, g) == 0]
    return rank(tight) == C.ambient_dim - 1


# -- cones of k-moving curves ---------------------------------------------------------

@dataclass
class ConeGeneratorReport:
    space: Space
    k: int
    seeds: list[str]
    orbits: list[tuple[str, int]]  # (representative seed, orbit size)
    complete: bool
    extremal: dict[Vec, bool] = field(default_factory=dict)

    @property
    def orbit_count(self) -> int:
        return len(self.orbits)

    def to_json(self) -> dict:
        return {
            "n": self.space.n, "s": self.space.s, "k": self.k, "seeds": self.seeds,
            "orbits": [{"seed": s, "size": c} for s, c in self.orbits],
            "orbit_count": self.orbit_count, "complete": self.complete,
            "extremal": [{"class": list(v), "extremal": e} for v, e in sorted(self.extremal.items())],
        }


def _check_dim(space: Space, dim_cap: int | None):
    cap = DEFAULT_DIM_CAP if dim_cap is None else dim_cap
    if space.s + 1 > cap:
        raise ResourceCapError(f"{space} has lattice dimension {space.s + 1} > cap {cap}")


def ck_seeds(space: Space, k: int) -> list[CurveClass]:
    """Seed classes whose effective orbits generate C_k."""
    n, s = space.n, space.s
    if not 0 <= k <= n - 1:
        raise PreconditionError(f"k must be in 0..{n - 1}")
    line = CurveClass.line(space)
    h_e = [CurveClass.through(space, 1, (i,)) for i in range(1, s + 1)]
    e = [CurveClass.exceptional(space, i) for i in range(1, s + 1)]
    if k == 0:
        return [line] + h_e
    if (n, s) == (4, 8) and k == 3:
        return [CurveClass.through(space, 1, I) for I in itertools.combinations(range(1, s + 1), 2)] + e
    if k == 1:
        return h_e + e
    size = n - k + 1
    return h_e + e + [CurveClass.through(space, size - 1, I) for I in itertools.combinations(range(1, s + 1), size)]


def ck_generators(space: Space, k: int, degree_bound: int | None = None, *, extremal_flags: bool = True,
                  dim_cap: int | None = None) -> tuple[ConeGeneratorReport, RationalCone]:
    """Generators of C_k as the union of effective orbits of the seeds."""
    _check_dim(space, dim_cap)
    mds = is_mori_dream(space)[0]
    if not mds and degree_bound is None:
        raise UnsupportedSpaceError(f"{space} is not a Mori dream space: degree_bound is required")
    seeds = ck_seeds(space, k)
    found: set[Vec] = set()
    orbits = []
    complete = True
    for seed in seeds:
        if seed.vector in found:
            continue
        if space.has_weyl_group:
            cat = effective_orbit(seed, degree_bound)
            complete &= cat.complete
            members = set(cat.elements)
        else:
            members = {seed.vector}
        found |= members
        orbits.append((str(seed), len(members)))
    cone = RationalCone(space.s + 1, tuple(found), "curve")
    report = ConeGeneratorReport(space, k, [str(x) for x in seeds], orbits, complete and mds)
    if extremal_flags:
        report.extremal = {g: is_extremal(cone, g) for g in cone.generators}
    return report, cone


def table1_orbit_count(n: int, s: int, k: int) -> int | None:
    """Orbit counts for C_k, k >= 1, on X^n_s with n+1 <= s <= n+3."""
    if k < 1 or k > n - 1:
        return None
    if s == n + 1:
        return 2 * n + 2 if k == 1 else 2 * n + 2 + binom(n + 1, n - k + 1)
    if s == n + 2:
        return 2 if k == 1 else 2 + binom(n + 2, n - k + 1)
    if s == n + 3:
        return 2 if k == 1 else 3
    return None


def c_It(space: Space, size: int, t: int, I: Iterable[int]) -> CurveClass:
    """c_{I,t} from its formula, without the join dimension constraint."""
    I = set(I)
    n = space.n
    mu = tuple(t + 1 if i in I else t for i in range(1, space.s + 1))
    return CurveClass(space, size + (n + 1) * t - 1, mu)


def dk_curve_list(space: Space, k: int) -> list[CurveClass]:
    """Curve classes whose nonnegativity cuts out D_k on X^n_{n+3}.

    Types: h and h - e_i; nh - sum e_i + e_j; c_{I,t} with |I| = n-2t-k+1 >= 0;
    e_i only for k >= 1 (for k = 0 the cone is the effective cone, which
    does contain the E_i).
    """
    n, s = space.n, space.s
    if s != n + 3:
        raise UnsupportedSpaceError(f"explicit D_k inequalities need s = n+3, got {space}")
    if not 0 <= k <= n - 1:
        raise PreconditionError(f"k must be in 0..{n - 1}")
    out = [CurveClass.line(space)] + [CurveClass.through(space, 1, (i,)) for i in range(1, s + 1)]
    out += [CurveClass(space, n, tuple(0 if i == j else 1 for i in range(1, s + 1))) for j in range(1, s + 1)]
    # t runs up to (n-k+1)/2 so that |I| = 0 is reached; for k = 0 and odd n
    # this is one step past n/2 and is needed for (n+1)/2 * ((n+1)h - sum e_i)
    for t in range(0, (n - k + 1) // 2 + 1):
        size = n - 2 * t - k + 1
        if size == 0 and t == 0:
            continue
        for I in itertools.combinations(range(1, s + 1), size):
            out.append(c_It(space, size, t, I))
    if k >= 1:
        out += [CurveClass.exceptional(space, i) for i in range(1, s + 1)]
    return out


def _weyl_divisors(space: Space, degree_bound: int | None) -> list[DivisorClass]:
    found: set[Vec] = set()
    for i in range(1, space.s + 1):
        E = DivisorClass.exceptional(space, i)
        if E.vector not in found:
            found |= set(effective_orbit(E, degree_bound).elements)
    return [DivisorClass.from_vector(space, v) for v in sorted(found)]


def dk_inequality_cone(space: Space, k: int, degree_bound: int | None = None,
                       dim_cap: int | None = None) -> RationalCone:
    """The divisor cone D_k.

    For s = n+3 it is cut out by the explicit curve list. For X^3_7 and
    X^4_8, k = 0 is the cone on Weyl divisors and k = 1 cuts the effective
    cone by <D, W> >= 0 for every Weyl divisor W.
    """
    _check_dim(space, dim_cap)
    n, s = space.n, space.s
    if s == n + 3:
        curves = RationalCone.from_classes(dk_curve_list(space, k))
        return dual_cone(curves)
    if (n, s) in ((3, 7), (4, 8)) and k in (0, 1):
        W = _weyl_divisors(space, degree_bound)
        eff = RationalCone.from_classes(W)
        if k == 0:
            return eff
        curves = list(eff.dual.generators) + [dm_dual_curve(D).vector for D in W]
        return dual_cone(RationalCone(s + 1, tuple(curves), "curve"))
    raise UnsupportedSpaceError(f"no D_{k} description for {space}")


@dataclass
class DualityReport:
    space: Space
    k: int
    equal: bool
    missing_from_ck: list[Vec]  # rays of D_k dual not in C_k
    missing_from_dual: list[Vec]  # generators of C_k outside D_k dual
    ck_generators: int
    dk_rays: int

    def to_json(self) -> dict:
        return {"n": self.space.n, "s": self.space.s, "k": self.k, "equal": self.equal,
                "ck_generators": self.ck_generators, "dk_rays": self.dk_rays,
                "missing_from_ck": [list(v) for v in self.missing_from_ck],
                "missing_from_dual": [list(v) for v in self.missing_from_dual]}


def verify_strong_duality(space: Space, k: int, degree_bound: int | None = None,
                          dim_cap: int | None = None) -> DualityReport:
    """Compare C_k (from orbits) with the dual of D_k."""
    if not is_mori_dream(space)[0]:
        raise UnsupportedSpaceError(f"{space} is not a Mori dream space")
    _, C = ck_generators(space, k, degree_bound, extremal_flags=False, dim_cap=dim_cap)
    Dk = dk_inequality_cone(space, k, degree_bound, dim_cap)
    dual = Dk.dual
    miss_ck = [g for g in dual.generators if not cone_contains(C, g)]
    miss_dual = [g for g in C.generators if not cone_contains(dual, g)]
    return DualityReport(space, k, not miss_ck and not miss_dual, miss_ck, miss_dual,
                         len(C.generators), len(Dk.generators))
