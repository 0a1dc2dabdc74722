"""Weyl base loci, chamber signatures, Euler characteristic and wdim."""

from __future__ import annotations

import functools
import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .cycles import WeylPlane, binom, classify_weyl_planes
from .errors import PreconditionError
from .lattice import CurveClass, DivisorClass, Space, intersect, is_mori_dream
from .weyl import FILTER_VERSION, effective_orbit


@dataclass(frozen=True)
class PlaneCatalog:
    """All Weyl r-planes (1 <= r <= n-1) of a space, stacked for fast pairing."""

    space: Space
    planes: tuple[WeylPlane, ...]
    degree_bound: int | None
    complete: bool
    vectors: np.ndarray = field(repr=False, compare=False)  # rows (delta, mu)
    dims: np.ndarray = field(repr=False, compare=False)

    def pairings(self, D: DivisorClass) -> np.ndarray:
        """D . c for every catalog curve, in catalog order."""
        coeff = np.array((D.d,) + tuple(-x for x in D.m), dtype=object)
        return self.vectors.dot(coeff)

    @property
    def version_hash(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.space.n},{self.space.s},{self.degree_bound},{FILTER_VERSION}".encode())
        for p in self.planes:
            h.update(str(p.sweeping_curve.vector).encode())
        return h.hexdigest()[:16]


@functools.lru_cache(maxsize=32)
def plane_catalog(space: Space, degree_bound: int | None = None) -> PlaneCatalog:
    mds = is_mori_dream(space)[0]
    if not mds and degree_bound is None and space.has_weyl_group:
        raise PreconditionError(f"{space} is not a Mori dream space: degree_bound is required")
    planes: list[WeylPlane] = []
    for r in range(1, space.n):
        planes.extend(classify_weyl_planes(space, r, degree_bound))
    # non-MDS catalogs are degree-truncated, hence never complete
    complete = mds or not space.has_weyl_group
    vecs = np.array([p.sweeping_curve.vector for p in planes], dtype=object).reshape(len(planes), space.s + 1)
    dims = np.array([p.r for p in planes], dtype=np.int64)
    return PlaneCatalog(space, tuple(planes), degree_bound, complete, vecs, dims)


def k_w(D: DivisorClass, W: WeylPlane) -> int:
    """Multiplicity of W in the Weyl base locus of D."""
    if D.space != W.space:
        raise PreconditionError(f"divisor on {D.space}, plane on {W.space}")
    return max(0, -intersect(D, W.sweeping_curve))


@dataclass(frozen=True)
class WeylBaseLocus:
    divisor: DivisorClass
    components: tuple[tuple[WeylPlane, int], ...]
    catalog_bound: int | None
    complete: bool
    catalog_hash: str = ""

    def to_json(self) -> dict:
        return {
            "divisor": self.divisor.to_json(),
            "components": [
                {"r": p.r, "curve": list(p.sweeping_curve.vector), "multiplicity": k,
                 **({"join": p.join.to_json()} if p.join is not None else {})}
                for p, k in self.components
            ],
            "catalog_bound": self.catalog_bound,
            "complete": self.complete,
            "catalog_hash": self.catalog_hash,
            "filter_version": FILTER_VERSION,
        }


def weyl_base_locus(D: DivisorClass, degree_bound: int | None = None) -> WeylBaseLocus:
    cat = plane_catalog(D.space, degree_bound)
    pairs = cat.pairings(D)
    comps = tuple((cat.planes[i], int(-pairs[i])) for i in range(len(cat.planes)) if pairs[i] < 0)
    return WeylBaseLocus(D, comps, degree_bound, cat.complete, cat.version_hash)


# -- chambers -------------------------------------------------------------------

@dataclass(frozen=True)
class ChamberSignature:
    divisor: DivisorClass
    signs: tuple[int, ...]  # -1, 0, +1 per catalog curve, catalog order
    curves: tuple[CurveClass, ...] = field(repr=False)
    catalog_bound: int | None = None

    def as_dict(self) -> dict[CurveClass, int]:
        return dict(zip(self.curves, self.signs))


def chamber_signature(D: DivisorClass, degree_bound: int | None = None) -> ChamberSignature:
    cat = plane_catalog(D.space, degree_bound)
    signs = tuple(int(np.sign(x)) for x in cat.pairings(D))
    return ChamberSignature(D, signs, tuple(p.sweeping_curve for p in cat.planes), degree_bound)


def same_chamber(D1: DivisorClass, D2: DivisorClass, degree_bound: int | None = None) -> bool:
    if D1.space != D2.space:
        raise PreconditionError("divisors on different spaces")
    return chamber_signature(D1, degree_bound).signs == chamber_signature(D2, degree_bound).signs


# -- effectivity ------------------------------------------------------------------

@functools.lru_cache(maxsize=32)
def _eff_test_curves(space: Space, degree_bound: int | None) -> np.ndarray:
    seeds = [CurveClass.line(space)] + [CurveClass.through(space, 1, (i,)) for i in range(1, space.s + 1)]
    found: set[tuple[int, ...]] = set()
    for seed in seeds:
        if seed.vector in found:
            continue
        if space.has_weyl_group:
            found.update(effective_orbit(seed, degree_bound).elements)
        else:
            found.add(seed.vector)
    return np.array(sorted(found), dtype=object)


def in_effective_cone(D: DivisorClass, degree_bound: int | None = None) -> bool:
    """Pseudo-effectivity test: D pairs >= 0 with the orbits of h and h - e_i.

    These orbits generate the dual of the effective cone on the Mori dream
    spaces handled here; on other spaces the test is only necessary.
    """
    curves = _eff_test_curves(D.space, degree_bound)
    coeff = np.array((D.d,) + tuple(-x for x in D.m), dtype=object)
    return bool((curves.dot(coeff) >= 0).all())


# -- expected dimension -----------------------------------------------------------

def poly_binom(a: int, n: int) -> int:
    """a(a-1)...(a-n+1)/n!, the binomial as a polynomial in a."""
    num = 1
    for j in range(n):
        num *= a - j
    den = 1
    for j in range(2, n + 1):
        den *= j
    return num // den


def euler_characteristic(D: DivisorClass, convention: str = "polynomial") -> int:
    """Virtual dimension C(n+d, n) - sum_i C(n+m_i-1, n).

    ``polynomial`` evaluates the binomials as polynomials, which is the
    Riemann-Roch value and agrees with ``truncated`` whenever d >= -n and
    every m_i > -n. ``truncated`` drops terms with a < b and all negative
    m_i.
    """
    n = D.space.n
    if convention == "polynomial":
        return poly_binom(n + D.d, n) - sum(poly_binom(n + m - 1, n) for m in D.m)
    if convention == "truncated":
        return binom(n + D.d, n) - sum(binom(n + m - 1, n) for m in D.m if m > 0)
    raise PreconditionError(f"unknown convention {convention!r}")


@dataclass(frozen=True)
class WdimResult:
    value: int
    chi: int
    base_locus: WeylBaseLocus

    @property
    def truncated(self) -> int:
        return max(self.value, 0)

    @property
    def complete(self) -> bool:
        return self.base_locus.complete


def wdim(D: DivisorClass, degree_bound: int | None = None, convention: str = "polynomial") -> WdimResult:
    """chi plus the alternating correction of every Weyl plane in the base locus."""
    n = D.space.n
    bl = weyl_base_locus(D, degree_bound)
    chi = euler_characteristic(D, convention)
    total = chi
    for plane, k in bl.components:
        total += (-1) ** (plane.r + 1) * binom(n + k - plane.r - 1, n)
    return WdimResult(total, chi, bl)
