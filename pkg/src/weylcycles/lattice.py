"""Divisor and curve classes on X^n_s, the blow-up of P^n at s general points.

Sign conventions are fixed once here and used everywhere:

* a divisor is ``D = d H - sum m_i E_i``, stored as ``(d; m_1, ..., m_s)``;
* a 1-cycle is ``c = delta h - sum mu_i e_i``, stored as ``(delta; mu_1, ..., mu_s)``.

So ``E_i`` is the divisor with ``m_i = -1`` and ``e_i`` the curve with
``mu_i = -1``. All arithmetic is on Python ints.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatchError, InvariantViolationError, PreconditionError, UnsupportedSpaceError


@dataclass(frozen=True, order=True)
class Space:
    n: int
    s: int

    def __post_init__(self):
        if self.n < 2:
            raise PreconditionError(f"ambient dimension must be >= 2, got n={self.n}")
        if self.s < 0:
            raise PreconditionError(f"number of points must be >= 0, got s={self.s}")

    def __str__(self):
        return f"X^{self.n}_{self.s}"

    @property
    def has_weyl_group(self) -> bool:
        return self.s >= self.n + 1

    def require_weyl(self) -> None:
        if not self.has_weyl_group:
            raise UnsupportedSpaceError(
                f"{self}: Cremona moves need s >= n+1 = {self.n + 1} points"
            )

    @classmethod
    def parse(cls, text: str) -> "Space":
        """Parse ``"n,s"``."""
        try:
            n, s = (int(x) for x in text.split(","))
        except ValueError:
            raise PreconditionError(f"space must look like 'n,s', got {text!r}") from None
        return cls(n, s)


def _check_len(space: Space, vec: Sequence[int], what: str) -> tuple:
    vec = tuple(int(x) for x in vec)
    if len(vec) != space.s:
        raise DimensionMismatchError(f"{what} has {len(vec)} entries, {space} needs {space.s}")
    return vec


def _same_space(a, b):
    if a.space != b.space:
        raise DimensionMismatchError(f"classes live on {a.space} and {b.space}")


def _parse_vector(text: str) -> tuple[int, tuple[int, ...]]:
    head, sep, tail = text.partition(";")
    if not sep:
        raise PreconditionError(f"class notation is 'd; m1,...,ms', got {text!r}")
    try:
        lead = int(head)
        rest = tuple(int(x) for x in tail.split(",")) if tail.strip() else ()
    except ValueError:
        raise PreconditionError(f"non-integer entry in {text!r}") from None
    return lead, rest


def _format_vector(lead: int, rest: Sequence[int]) -> str:
    return f"{lead};" + ",".join(str(x) for x in rest)


@dataclass(frozen=True)
class DivisorClass:
    space: Space
    d: int
    m: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "m", _check_len(self.space, self.m, "multiplicity vector"))

    # construction helpers
    @classmethod
    def hyperplane(cls, space: Space) -> "DivisorClass":
        return cls(space, 1, (0,) * space.s)

    @classmethod
    def exceptional(cls, space: Space, i: int) -> "DivisorClass":
        """E_i for 1-based ``i``."""
        return cls(space, 0, _unit(space, i, -1))

    @classmethod
    def parse(cls, space: Space, text: str) -> "DivisorClass":
        d, m = _parse_vector(text)
        return cls(space, d, m)

    @classmethod
    def from_json(cls, obj: dict) -> "DivisorClass":
        return cls(Space(obj["n"], obj["s"]), obj["d"], obj["m"])

    def to_json(self) -> dict:
        return {"n": self.space.n, "s": self.space.s, "d": self.d, "m": list(self.m)}

    def __str__(self):
        return _format_vector(self.d, self.m)

    @property
    def vector(self) -> tuple[int, ...]:
        """Coordinates ``(d, m_1, ..., m_s)``."""
        return (self.d,) + self.m

    @classmethod
    def from_vector(cls, space: Space, vec: Sequence[int]) -> "DivisorClass":
        return cls(space, vec[0], tuple(vec[1:]))

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        _same_space(self, other)
        return DivisorClass(self.space, self.d + other.d, tuple(a + b for a, b in zip(self.m, other.m)))

    def __neg__(self):
        return DivisorClass(self.space, -self.d, tuple(-a for a in self.m))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k: int) -> "DivisorClass":
        return DivisorClass(self.space, k * self.d, tuple(k * a for a in self.m))

    __rmul__ = __mul__


@dataclass(frozen=True)
class CurveClass:
    space: Space
    delta: int
    mu: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "delta", int(self.delta))
        object.__setattr__(self, "mu", _check_len(self.space, self.mu, "multiplicity vector"))

    @classmethod
    def line(cls, space: Space) -> "CurveClass":
        return cls(space, 1, (0,) * space.s)

    @classmethod
    def exceptional(cls, space: Space, i: int) -> "CurveClass":
        """e_i for 1-based ``i``."""
        return cls(space, 0, _unit(space, i, -1))

    @classmethod
    def through(cls, space: Space, degree: int, points: Iterable[int]) -> "CurveClass":
        """``degree * h - sum_{i in points} e_i``."""
        mu = [0] * space.s
        for i in points:
            _check_index(space, i)
            mu[i - 1] += 1
        return cls(space, degree, tuple(mu))

    @classmethod
    def parse(cls, space: Space, text: str) -> "CurveClass":
        delta, mu = _parse_vector(text)
        return cls(space, delta, mu)

    @classmethod
    def from_json(cls, obj: dict) -> "CurveClass":
        return cls(Space(obj["n"], obj["s"]), obj["delta"], obj["mu"])

    def to_json(self) -> dict:
        return {"n": self.space.n, "s": self.space.s, "delta": self.delta, "mu": list(self.mu)}

    def __str__(self):
        return _format_vector(self.delta, self.mu)

    @property
    def vector(self) -> tuple[int, ...]:
        return (self.delta,) + self.mu

    @classmethod
    def from_vector(cls, space: Space, vec: Sequence[int]) -> "CurveClass":
        return cls(space, vec[0], tuple(vec[1:]))

    def __add__(self, other: "CurveClass") -> "CurveClass":
        _same_space(self, other)
        return CurveClass(self.space, self.delta + other.delta, tuple(a + b for a, b in zip(self.mu, other.mu)))

    def __neg__(self):
        return CurveClass(self.space, -self.delta, tuple(-a for a in self.mu))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k: int) -> "CurveClass":
        return CurveClass(self.space, k * self.delta, tuple(k * a for a in self.mu))

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return self.delta == 0 and not any(self.mu)


def _check_index(space: Space, i: int) -> None:
    if not 1 <= i <= space.s:
        raise PreconditionError(f"point index {i} out of range 1..{space.s}")


def _unit(space: Space, i: int, value: int) -> tuple[int, ...]:
    _check_index(space, i)
    vec = [0] * space.s
    vec[i - 1] = value
    return tuple(vec)


def intersect(D: DivisorClass, c: CurveClass) -> int:
    """Intersection number ``d*delta - sum m_i mu_i``."""
    _same_space(D, c)
    return D.d * c.delta - sum(a * b for a, b in zip(D.m, c.mu))


def dm_pairing(D1: DivisorClass, D2: DivisorClass) -> int:
    """Dolgachev-Mukai pairing: <H,H> = n-1, <E_i,E_j> = -delta_ij."""
    _same_space(D1, D2)
    return (D1.space.n - 1) * D1.d * D2.d - sum(a * b for a, b in zip(D1.m, D2.m))


def dm_dual_curve(D: DivisorClass) -> CurveClass:
    """The curve class ``c`` with ``D' . c == <D', D>`` for every divisor ``D'``.

    This map commutes with Cremona moves and sends ``E_i`` to ``e_i``.
    """
    return CurveClass(D.space, (D.space.n - 1) * D.d, D.m)


def anticanonical_divisor(space: Space) -> DivisorClass:
    return DivisorClass(space, space.n + 1, (space.n - 1,) * space.s)


def anticanonical_curve(space: Space) -> CurveClass:
    """The Weyl-invariant curve class F = (n+1)h - sum e_i."""
    return CurveClass(space, space.n + 1, (1,) * space.s)


def _mds_by_list(n: int, s: int) -> bool:
    if n == 2:
        return s <= 8
    if n == 3:
        return s <= 7
    if n == 4:
        return s <= 8
    return s <= n + 3


def is_mori_dream(space: Space) -> tuple[bool, str]:
    """Decide whether X^n_s is a Mori dream space.

    Both the classification list and the sign of <-K,-K> are evaluated;
    they must agree. Returns ``(answer, reason)`` where the reason names
    the list entry and the value of the self-pairing.
    """
    K = anticanonical_divisor(space)
    self_pairing = dm_pairing(K, K)
    by_pairing = self_pairing > 0
    by_list = _mds_by_list(space.n, space.s)
    if by_pairing != by_list:
        raise InvariantViolationError(
            f"{space}: list says {by_list}, <-K,-K> = {self_pairing}"
        )
    verdict = "in" if by_list else "not in"
    return by_list, f"{verdict} MDS list; <-K,-K> = {self_pairing}"


def f_decomposition(space: Space) -> list[CurveClass] | None:
    """Write F as a sum of effective classes, or ``None`` if not available.

    For s = 2n+2 this is the n+1 lines joining consecutive pairs of
    points; for plane cubics (n = 2, s <= 9) the class F itself.
    """
    n, s = space.n, space.s
    if s == 2 * n + 2:
        return [CurveClass.through(space, 1, (2 * i - 1, 2 * i)) for i in range(1, n + 2)]
    if n == 2 and s <= 9:
        return [anticanonical_curve(space)]
    return None


def parse_class(space: Space, text: str, kind: str):
    if kind == "divisor":
        return DivisorClass.parse(space, text)
    if kind == "curve":
        return CurveClass.parse(space, text)
    raise PreconditionError(f"unknown class kind {kind!r}")


def class_from_json(obj: dict | str):
    """Decode either the divisor or the curve JSON object form."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if "d" in obj:
        return DivisorClass.from_json(obj)
    if "delta" in obj:
        return CurveClass.from_json(obj)
    raise PreconditionError("JSON class needs 'd'/'m' or 'delta'/'mu'")
