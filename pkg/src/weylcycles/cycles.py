"""Joins of linear spans with secant varieties of the rational normal curve.

``Join(space, I, t)`` is the strict transform of the join of the span of
the points in ``I`` with the t-th secant variety of the rational normal
curve through all n+3 points (t = 0 means no secant part). Its dimension
is ``|I| + 2t - 1``. A join of dimension n-1 is a Weyl divisor
``E_{I,sigma_t} = (t+1)H - (t+1) sum_I E_i - t sum_{i not in I} E_i``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

from .errors import InvalidJoinError, InvariantViolationError, NotOrthogonalError, PreconditionError
from .lattice import CurveClass, DivisorClass, Space, dm_pairing, intersect
from .weyl import WeylWord, effective_orbit


def binom(a: int, b: int) -> int:
    """Binomial with C(a, 0) = 1 and C(a, b) = 0 for b < 0."""
    if b < 0:
        return 0
    if b == 0:
        return 1
    if a < b:
        return 0
    return comb(a, b)


@dataclass(frozen=True, order=True)
class Join:
    space: Space
    I: tuple[int, ...]
    t: int = 0

    def __post_init__(self):
        I = tuple(sorted(int(i) for i in self.I))
        object.__setattr__(self, "I", I)
        n, s, t = self.space.n, self.space.s, self.t
        if len(set(I)) != len(I) or (I and (I[0] < 1 or I[-1] > s)):
            raise InvalidJoinError(f"bad index set {I} on {self.space}")
        if t < 0:
            raise InvalidJoinError("secant parameter t must be >= 0")
        if t == 0 and not I:
            raise InvalidJoinError("the empty join (I empty, t = 0) is not a cycle")
        if t >= 1 and s != n + 3:
            raise InvalidJoinError(f"secant joins need s = n+3 points, {self.space} has s={s}")
        if len(I) > n - 2 * t:
            raise InvalidJoinError(f"|I| + 2t - 1 = {len(I) + 2 * t - 1} exceeds n-1 = {n - 1}")

    @property
    def r(self) -> int:
        return len(self.I) + 2 * self.t - 1

    @property
    def is_divisor(self) -> bool:
        return self.r == self.space.n - 1

    def divisor_class(self) -> DivisorClass:
        """The Weyl divisor E_{I,sigma_t}; only for joins of dimension n-1."""
        if not self.is_divisor:
            raise InvalidJoinError(f"{self} has dimension {self.r}, not n-1")
        return weyl_divisor(self.space, self.I, self.t)

    def __str__(self):
        return f"J({{{','.join(map(str, self.I))}}},t={self.t})"

    def to_json(self) -> dict:
        return {"I": list(self.I), "t": self.t}

    @classmethod
    def from_json(cls, space: Space, obj: dict) -> "Join":
        return cls(space, tuple(obj["I"]), obj.get("t", 0))


def weyl_divisor(space: Space, I: Iterable[int], tau: int) -> DivisorClass:
    """E_{I,sigma_tau} as a divisor class (checks |I| = n - 2 tau)."""
    I = set(I)
    if len(I) != space.n - 2 * tau:
        raise InvalidJoinError(f"|I| must be n - 2*tau = {space.n - 2 * tau}, got {len(I)}")
    Join(space, tuple(I), tau)  # validation
    m = tuple(tau + 1 if i in I else tau for i in range(1, space.s + 1))
    return DivisorClass(space, tau + 1, m)


def sweeping_curve(J: Join) -> CurveClass:
    """c_{I,t} = (|I| + (n+1)t - 1)h - (t+1) sum_I e_i - t sum_{not I} e_i."""
    n, t = J.space.n, J.t
    delta = len(J.I) + (n + 1) * t - 1
    inI = set(J.I)
    mu = tuple(t + 1 if i in inI else t for i in range(1, J.space.s + 1))
    return CurveClass(J.space, delta, mu)


@dataclass(frozen=True)
class CycleDegrees:
    r: int
    hr_degree: int
    er_degrees: tuple[int, ...]

    def __add__(self, other: "CycleDegrees") -> "CycleDegrees":
        if self.r != other.r:
            raise PreconditionError("cannot add cycles of different dimension")
        return CycleDegrees(self.r, self.hr_degree + other.hr_degree,
                            tuple(a + b for a, b in zip(self.er_degrees, other.er_degrees)))


def join_cycle_degrees(J: Join) -> CycleDegrees:
    n, r, t = J.space.n, J.r, J.t
    on = binom(t + n - r, t)
    off = binom(t + n - r - 1, t - 1)
    inI = set(J.I)
    er = tuple(on if i in inI else off for i in range(1, J.space.s + 1))
    return CycleDegrees(r, on, er)


def kappa(J: Join, D: DivisorClass) -> int:
    """Multiplicity exponent of J in the base locus of |D| (may be negative)."""
    if J.space != D.space:
        raise PreconditionError(f"join on {J.space}, divisor on {D.space}")
    n, t = J.space.n, J.t
    inI = set(J.I)
    total = -(len(J.I) + (n + 1) * t - 1) * D.d
    for i, m in enumerate(D.m, start=1):
        total += (t + 1) * m if i in inI else t * m
    return total


def kappa_weyl(W: Join, V: Join) -> int:
    """kappa of V against the Weyl divisor W = E_{I_W, sigma_tau}, closed form."""
    if not W.is_divisor:
        raise InvalidJoinError(f"{W} is not a Weyl divisor")
    return W.t - V.t + 1 - len(set(V.I) - set(W.I))


def is_orthogonal(J: Join, D: DivisorClass) -> bool:
    return intersect(D, sweeping_curve(J)) == 0


def intersection_decomposition(W: Join, V: Join) -> list[Join]:
    """Components of the intersection of the Weyl divisor W with an orthogonal join V.

    Drops each i in I_V outside I_W, and (when t_V >= 1) adds each i in
    I_W outside I_V while lowering t by one.
    """
    if not W.is_divisor:
        raise InvalidJoinError(f"{W} is not a Weyl divisor")
    if W.space != V.space:
        raise PreconditionError("joins on different spaces")
    if not is_orthogonal(V, W.divisor_class()):
        raise NotOrthogonalError(f"{V} is not orthogonal to {W} (kappa = {kappa_weyl(W, V)})")
    IV, IW = set(V.I), set(W.I)
    out = [Join(V.space, tuple(IV - {i}), V.t) for i in sorted(IV - IW)]
    if V.t >= 1:
        out += [Join(V.space, tuple(IV | {i}), V.t - 1) for i in sorted(IW - IV)]
    return out


def intersection_bookkeeping(W: Join, V: Join) -> CycleDegrees:
    """Degrees of W . V from the degrees of V, case by case on the point index."""
    n, r, t, tau = V.space.n, V.r, V.t, W.t
    big = binom(t + n - r, t)
    small = binom(t + n - r - 1, t - 1)
    IW, IV = set(W.I), set(V.I)
    er = []
    for j in range(1, V.space.s + 1):
        if j in IW:
            er.append((tau + 1) * (big if j in IV else small))
        else:
            er.append(tau * (big if j in IV else small))
    return CycleDegrees(r - 1, (tau + 1) * big, tuple(er))


def _contains(V: Join, W: Join) -> bool:
    return W.t <= V.t and len(set(W.I) - set(V.I)) <= V.t - W.t


def curve_decomposition(V: Join, W: Join) -> tuple[CurveClass, list[CurveClass]]:
    """Write c_V = c_W + (sum of (0)-Weyl lines) along a chain of reductions.

    The chain first adds the indices of I_W missing from I_V (each lowers t),
    spends leftover t-decrements by adding then dropping a free index, and
    finally drops the indices of I_V not in I_W.
    """
    if V.space != W.space:
        raise PreconditionError("joins on different spaces")
    if not _contains(V, W):
        raise PreconditionError(f"{W} is not reachable from {V} by the reduction moves")
    space, n = V.space, V.space.n
    I, t = set(V.I), V.t
    pieces: list[CurveClass] = []

    def add(i):
        nonlocal t
        pieces.append(CurveClass(space, n, tuple(0 if j == i else 1 for j in range(1, space.s + 1))))
        I.add(i)
        t -= 1

    def drop(i):
        pieces.append(CurveClass.through(space, 1, (i,)))
        I.discard(i)

    for i in sorted(set(W.I) - I):
        add(i)
    while t > W.t:
        free = min(j for j in range(1, space.s + 1) if j not in I and j not in W.I)
        add(free)
        drop(free)
    for i in sorted(I - set(W.I)):
        drop(i)
    cW = sweeping_curve(W)
    total = cW
    for p in pieces:
        total = total + p
    if total != sweeping_curve(V):
        raise InvariantViolationError(f"decomposition of {V} into {W} does not add up")
    return cW, pieces


@dataclass(frozen=True)
class WeylCycleWitness:
    join: Join
    divisors: tuple[DivisorClass, ...]
    relabeling: tuple[int, ...]  # relabeling[k-1] = original index placed at position k


def weyl_cycle_witness(V: Join) -> WeylCycleWitness:
    """Pairwise orthogonal Weyl divisors whose intersection chain reaches V.

    Points are relabeled so that I = {1..a}; in those labels the divisors
    are E_{I_j, sigma_t} with I_j = {1..n+1-2t} minus j, j = a+1..n+1-2t.
    """
    space, n, t = V.space, V.space.n, V.t
    if space.s < n + 1 - 2 * t:
        raise PreconditionError(f"{space} has too few points for the witness")
    rest = [i for i in range(1, space.s + 1) if i not in V.I]
    relabel = tuple(V.I) + tuple(rest)
    a = len(V.I)
    top = n + 1 - 2 * t
    divisors = []
    for j in range(a + 1, top + 1):
        Ij = [relabel[k - 1] for k in range(1, top + 1) if k != j]
        divisors.append(weyl_divisor(space, Ij, t))
    return WeylCycleWitness(V, tuple(divisors), relabel)


def check_witness(w: WeylCycleWitness) -> bool:
    divs = w.divisors
    if any(dm_pairing(a, b) != 0 for a, b in itertools.combinations(divs, 2)):
        return False
    return all(kappa(w.join, D) >= 1 for D in divs)


# -- Weyl planes ------------------------------------------------------------------

@dataclass(frozen=True)
class WeylPlane:
    space: Space
    r: int
    sweeping_curve: CurveClass
    witness: WeylWord = ()
    seed: CurveClass | None = None
    join: Join | None = None
    provenance: str = "closed-form"

    def to_json(self) -> dict:
        out = {"curve": list(self.sweeping_curve.vector), "witness": [list(g) for g in self.witness]}
        if self.seed is not None:
            out["seed"] = list(self.seed.vector)
        if self.join is not None:
            out["join"] = self.join.to_json()
        out["provenance"] = self.provenance
        return out


def joins_of_dimension(space: Space, r: int) -> list[Join]:
    """All joins of dimension r (secant joins only when s = n+3)."""
    n, s = space.n, space.s
    out = []
    tmax = n // 2 if s == n + 3 else 0
    for t in range(0, tmax + 1):
        size = r + 1 - 2 * t
        if size < 0 or (size == 0 and t == 0):
            continue
        for I in itertools.combinations(range(1, s + 1), size):
            out.append(Join(space, I, t))
    return out


def classify_weyl_planes(space: Space, r: int, degree_bound: int | None = None) -> list[WeylPlane]:
    """Weyl r-planes of ``space`` with witness words.

    Seeds are the classes c_I with |I| = r+1, plus e_i when r = n-1. For
    s <= n+3 the orbit union is checked against the closed-form join list
    and each plane carries its join; for larger s the degree-bounded orbit
    catalog is returned as is.
    """
    n, s = space.n, space.s
    if not 1 <= r <= n - 1:
        raise PreconditionError(f"r must be in 1..{n - 1}, got {r}")
    if r + 1 > s:
        return []
    seeds = [CurveClass.through(space, r, I) for I in itertools.combinations(range(1, s + 1), r + 1)]
    if r == n - 1:
        seeds += [CurveClass.exceptional(space, i) for i in range(1, s + 1)]

    found: dict[CurveClass, WeylPlane] = {}
    closed = s <= n + 3
    tag = "closed-form" if closed else "orbit-bfs"
    complete = True
    for seed in seeds:
        if seed in found:
            continue
        if not space.has_weyl_group:
            found[seed] = WeylPlane(space, r, seed, (), seed, provenance=tag)
            continue
        cat = effective_orbit(seed, degree_bound)
        complete &= cat.complete
        for c in cat.classes():
            if c not in found:
                found[c] = WeylPlane(space, r, c, cat.witness(c), seed, provenance=tag)

    if closed:
        expected = {sweeping_curve(J): J for J in joins_of_dimension(space, r)}
        if r == n - 1:
            expected.update({CurveClass.exceptional(space, i): None for i in range(1, s + 1)})
        if set(expected) != set(found):
            raise InvariantViolationError(
                f"{space}, r={r}: orbit union has {len(found)} classes, closed form {len(expected)}"
            )
        found = {c: WeylPlane(p.space, r, c, p.witness, p.seed, expected[c], tag) for c, p in found.items()}
    planes = sorted(found.values(), key=lambda p: (p.sweeping_curve.delta, p.sweeping_curve.vector))
    return planes
