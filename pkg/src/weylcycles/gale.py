"""Gale duality between curves on X^4_8 and divisors on the surface X^2_8.

A surface class ``w = a*alpha + sum b_i beta_i`` uses the basis of a line
class and the exceptional classes. Its Cremona image is computed by viewing
it as the divisor ``(a; -b_1, ..., -b_8)`` on X^2_8.

rho^{-1} sends alpha to 3h - 1/2 sum e_i and beta_i to 1/2 (h - e_i), so
2 rho^{-1}(w) is always integral. eta(w) = 2 rho^{-1}(w) - F with
F = 5h - sum e_i = rho^{-1}(-K_S).
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidIndexSetError, InvariantViolationError, PreconditionError
from .lattice import CurveClass, DivisorClass, Space, anticanonical_curve
from .weyl import cremona_curve, cremona_divisor, effective_orbit

SURFACE = Space(2, 8)
X48 = Space(4, 8)


@dataclass(frozen=True)
class SurfaceDivisor:
    a: int
    b: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        if len(self.b) != 8:
            raise PreconditionError(f"surface classes need 8 beta coefficients, got {len(self.b)}")

    @classmethod
    def alpha(cls) -> "SurfaceDivisor":
        return cls(1, (0,) * 8)

    @classmethod
    def beta(cls, i: int) -> "SurfaceDivisor":
        if not 1 <= i <= 8:
            raise PreconditionError(f"beta index {i} out of range 1..8")
        return cls(0, tuple(int(j == i) for j in range(1, 9)))

    @classmethod
    def canonical(cls) -> "SurfaceDivisor":
        """K_S = -3 alpha + sum beta_i."""
        return cls(-3, (1,) * 8)

    def __add__(self, other):
        return SurfaceDivisor(self.a + other.a, tuple(x + y for x, y in zip(self.b, other.b)))

    def __neg__(self):
        return SurfaceDivisor(-self.a, tuple(-x for x in self.b))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k: int):
        return SurfaceDivisor(k * self.a, tuple(k * x for x in self.b))

    __rmul__ = __mul__

    def dot(self, other: "SurfaceDivisor") -> int:
        """Surface intersection form: alpha^2 = 1, beta_i . beta_j = -delta_ij."""
        return self.a * other.a - sum(x * y for x, y in zip(self.b, other.b))

    def to_divisor(self) -> DivisorClass:
        return DivisorClass(SURFACE, self.a, tuple(-x for x in self.b))

    @classmethod
    def from_divisor(cls, D: DivisorClass) -> "SurfaceDivisor":
        if D.space != SURFACE:
            raise PreconditionError(f"expected a class on {SURFACE}")
        return cls(D.d, tuple(-x for x in D.m))

    def to_json(self) -> dict:
        return {"a": self.a, "b": list(self.b)}

    @classmethod
    def from_json(cls, obj: dict) -> "SurfaceDivisor":
        return cls(obj["a"], obj["b"])

    def __str__(self):
        return f"{self.a};" + ",".join(map(str, self.b))


@dataclass(frozen=True)
class HalfCurveClass:
    """A curve class on X^4_8 with entries in 1/2 Z, stored as numerators over 2."""

    delta2: int
    mu2: tuple[int, ...]

    @property
    def doubled(self) -> CurveClass:
        return CurveClass(X48, self.delta2, self.mu2)

    @property
    def is_integral(self) -> bool:
        return self.delta2 % 2 == 0 and all(x % 2 == 0 for x in self.mu2)

    def to_curve(self) -> CurveClass:
        if not self.is_integral:
            raise PreconditionError(f"{self} is not integral")
        return CurveClass(X48, self.delta2 // 2, tuple(x // 2 for x in self.mu2))

    def __str__(self):
        return f"({self.delta2};{','.join(map(str, self.mu2))})/2"


def rho_inv(w: SurfaceDivisor) -> HalfCurveClass:
    # 2 rho^{-1}(alpha) = (6; 1^8), 2 rho^{-1}(beta_i) = (1; unit_i)
    delta2 = 6 * w.a + sum(w.b)
    mu2 = tuple(w.a + x for x in w.b)
    return HalfCurveClass(delta2, mu2)


def two_rho_inv(w: SurfaceDivisor) -> CurveClass:
    return rho_inv(w).doubled


def eta(w: SurfaceDivisor) -> CurveClass:
    out = two_rho_inv(w) - anticanonical_curve(X48)
    # rho^{-1}(2w + K_S) computed on the half-integer lattice must agree and be integral
    half = rho_inv(w * 2 + SurfaceDivisor.canonical())
    if not half.is_integral or half.to_curve() != out:
        raise InvariantViolationError(f"eta({w}) is not integral or inconsistent")
    return out


def surface_cremona(w: SurfaceDivisor, triple: Sequence[int]) -> SurfaceDivisor:
    return SurfaceDivisor.from_divisor(cremona_divisor(w.to_divisor(), triple)[0])


def complement(triple: Sequence[int]) -> tuple[int, ...]:
    t = set(triple)
    if len(t) != 3 or not t <= set(range(1, 9)):
        raise InvalidIndexSetError(f"need three distinct indices in 1..8, got {list(triple)}")
    return tuple(i for i in range(1, 9) if i not in t)


def check_equivariance(w: SurfaceDivisor, triple: Sequence[int]) -> bool:
    """rho^{-1} of the 3-point surface move equals the 5-point curve move of rho^{-1}."""
    gamma_x = complement(triple)
    lhs = two_rho_inv(surface_cremona(w, triple))
    rhs = cremona_curve(two_rho_inv(w), gamma_x)[0]
    return lhs == rhs


# -- classification of images ------------------------------------------------------

SURFACE_KINDS = {"-1": (-1, -1), "0": (0, -2), "1": (1, -3)}


def surface_kind(w: SurfaceDivisor) -> str | None:
    """Kind of w from (w^2, w.K_S), or None when it matches none."""
    key = (w.dot(w), w.dot(SurfaceDivisor.canonical()))
    for kind, val in SURFACE_KINDS.items():
        if key == val:
            return kind
    return None


@functools.lru_cache(maxsize=None)
def _orbit(seed_vec: tuple[int, ...], effective_only: bool) -> frozenset:
    seed = CurveClass.from_vector(X48, seed_vec)
    return frozenset(effective_orbit(seed, effective_only=effective_only).elements)


_LABELS = {
    "0-weyl-line": (1, 1, 0, 0, 0, 0, 0, 0, 0),
    "1-weyl-line": (1,) + (0,) * 8,
    "e_i-orbit": (0, -1) + (0,) * 7,
    "2h-e_ijk-orbit": (2, 1, 1, 1, 0, 0, 0, 0, 0),
}
_EXPECTED = {("-1", "2rho"): "0-weyl-line", ("1", "eta"): "1-weyl-line",
             ("0", "eta"): "e_i-orbit", ("-1", "eta"): "2h-e_ijk-orbit"}


@dataclass(frozen=True)
class GaleImage:
    source: SurfaceDivisor
    kind: str
    map: str
    image: CurveClass
    label: str
    effective: bool

    def to_json(self) -> dict:
        return {"source": self.source.to_json(), "kind": self.kind, "map": self.map,
                "image": list(self.image.vector), "label": self.label, "effective": self.effective}


def gale_image_classification(kind: str, w: SurfaceDivisor, map: str | None = None) -> GaleImage:
    """Image of a (-1), (0) or (1)-curve w, labeled by orbit membership on X^4_8."""
    kind = kind.strip("()")
    if kind not in SURFACE_KINDS:
        raise PreconditionError(f"kind must be one of (-1), (0), (1), got {kind!r}")
    actual = surface_kind(w)
    if actual != kind:
        raise PreconditionError(f"{w} has (w^2, w.K) = ({w.dot(w)}, {w.dot(SurfaceDivisor.canonical())}), not a ({kind})-class")
    if map is None:
        map = "2rho" if kind == "-1" else "eta"
    if (kind, map) not in _EXPECTED:
        raise PreconditionError(f"no statement for map {map!r} on ({kind})-classes")
    image = two_rho_inv(w) if map == "2rho" else eta(w)
    name = _EXPECTED[(kind, map)]
    seed = _LABELS[name]
    if image.vector in _orbit(seed, True):
        return GaleImage(w, kind, map, image, name, True)
    if image.vector in _orbit(seed, False):
        return GaleImage(w, kind, map, image, name + " (non-effective)", False)
    raise InvariantViolationError(f"image {image} of {w} is outside the orbit {name}")


def surface_curves(kind: str) -> list[SurfaceDivisor]:
    """All (kind)-curves on the surface, as effective orbits of beta_1, alpha - beta_1, alpha."""
    kind = kind.strip("()")
    seeds = {"-1": [DivisorClass.exceptional(SURFACE, 1)],
             "0": [DivisorClass(SURFACE, 1, (1,) + (0,) * 7)],
             "1": [DivisorClass.hyperplane(SURFACE)]}[kind]
    out: set[tuple[int, ...]] = set()
    for s in seeds:
        out |= set(effective_orbit(s).elements)
    return [SurfaceDivisor.from_divisor(DivisorClass.from_vector(SURFACE, v)) for v in sorted(out)]


def gale_cone_curves(which: str) -> list[CurveClass]:
    """Curve classes whose orthogonal hyperplanes bound Eff (``eff``) or Mov (``mov``) of X^4_8."""
    first = [two_rho_inv(w) for w in surface_curves("-1")]
    if which == "eff":
        second = [eta(w) for w in surface_curves("1")]
    elif which == "mov":
        second = [eta(w) for w in surface_curves("0")]
    else:
        raise PreconditionError("which must be 'eff' or 'mov'")
    return sorted(set(first + second), key=lambda c: c.vector)


def random_surface_classes(count: int, seed: int = 0, bound: int = 5) -> list[SurfaceDivisor]:
    import random

    rng = random.Random(seed)
    return [SurfaceDivisor(rng.randint(-bound, bound), tuple(rng.randint(-bound, bound) for _ in range(8)))
            for _ in range(count)]


def all_triples() -> list[tuple[int, int, int]]:
    return list(itertools.combinations(range(1, 9), 3))
