"""Cremona moves on divisor and curve classes, reduction and effective orbits.

A Cremona index set (Gamma) is a sorted tuple of ``n+1`` distinct 1-based
point indices; a Weyl word is a tuple of such sets, applied left to right.
"""

from __future__ import annotations

import enum
import heapq
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .errors import InvalidIndexSetError, InvariantViolationError, PreconditionError
from .lattice import CurveClass, DivisorClass, Space, dm_pairing, intersect, is_mori_dream

IndexSet = tuple[int, ...]
WeylWord = tuple[IndexSet, ...]
Klass = Union[DivisorClass, CurveClass]

FILTER_VERSION = "delta-sign/mult-bound-1"


def cremona_index_set(space: Space, gamma: Iterable[int]) -> IndexSet:
    """Validate and normalise a Cremona index set for ``space``."""
    space.require_weyl()
    g = tuple(sorted(int(i) for i in gamma))
    if len(g) != space.n + 1 or len(set(g)) != len(g):
        raise InvalidIndexSetError(f"need {space.n + 1} distinct indices on {space}, got {list(gamma)}")
    if g[0] < 1 or g[-1] > space.s:
        raise InvalidIndexSetError(f"indices {g} out of range 1..{space.s}")
    return g


def all_index_sets(space: Space) -> list[IndexSet]:
    """Every Cremona index set, in lexicographic order."""
    space.require_weyl()
    return list(itertools.combinations(range(1, space.s + 1), space.n + 1))


def _move_vector(vec: Sequence[int], gamma0: Sequence[int], n: int, curve: bool) -> tuple[tuple[int, ...], int]:
    """Apply one Cremona move to raw coordinates ``(lead, mults...)``.

    ``gamma0`` holds 0-based positions into the multiplicity part. Returns
    the new vector and the shift (b for divisors, a for curves).
    """
    lead = vec[0]
    mults = list(vec[1:])
    total = sum(mults[i] for i in gamma0)
    if curve:
        shift = total - lead
        new_lead = lead - (n - 1) * shift
    else:
        shift = total - (n - 1) * lead
        new_lead = lead - shift
    if shift:
        for i in gamma0:
            mults[i] -= shift
    return (new_lead, *mults), shift


def cremona_divisor(D: DivisorClass, gamma: Iterable[int]) -> tuple[DivisorClass, int]:
    """Image of ``D`` under Cr_Gamma together with b_Gamma(D)."""
    g = cremona_index_set(D.space, gamma)
    vec, b = _move_vector(D.vector, [i - 1 for i in g], D.space.n, curve=False)
    return DivisorClass.from_vector(D.space, vec), b


def cremona_curve(c: CurveClass, gamma: Iterable[int]) -> tuple[CurveClass, int]:
    """Image of ``c`` under Cr_Gamma together with a_Gamma(c).

    The formula is applied formally; effective curves can map to
    non-effective classes.
    """
    g = cremona_index_set(c.space, gamma)
    vec, a = _move_vector(c.vector, [i - 1 for i in g], c.space.n, curve=True)
    return CurveClass.from_vector(c.space, vec), a


def apply_move(x: Klass, gamma: Iterable[int]) -> Klass:
    if isinstance(x, DivisorClass):
        return cremona_divisor(x, gamma)[0]
    return cremona_curve(x, gamma)[0]


def apply_word(x: Klass, word: Iterable[Iterable[int]]) -> Klass:
    for gamma in word:
        x = apply_move(x, gamma)
    return x


def normalize_word(space: Space, word: Iterable[Iterable[int]]) -> WeylWord:
    return tuple(cremona_index_set(space, g) for g in word)


def pairing_preserved(x: DivisorClass, y: Klass, word: Iterable[Iterable[int]]) -> bool:
    """True when the pairing of ``x`` with ``y`` survives ``word``.

    ``y`` may be a curve (intersection number) or a divisor (DM pairing).
    Always true mathematically; kept as a test hook.
    """
    word = list(word)
    pair = intersect if isinstance(y, CurveClass) else dm_pairing
    return pair(x, y) == pair(apply_word(x, word), apply_word(y, word))


# -- reduction ---------------------------------------------------------------

@dataclass(frozen=True)
class ReductionResult:
    divisor: DivisorClass
    word: WeylWord
    reduced: bool

    @property
    def steps(self) -> int:
        return len(self.word)


def max_b(D: DivisorClass) -> tuple[int, IndexSet]:
    """Largest b_Gamma(D) and the lexicographically smallest Gamma attaining it.

    The maximum uses the n+1 largest multiplicities; among ties the
    smallest indices give the lexicographically smallest set.
    """
    D.space.require_weyl()
    n = D.space.n
    order = sorted(range(D.space.s), key=lambda i: (-D.m[i], i))
    gamma = tuple(sorted(i + 1 for i in order[: n + 1]))
    b = sum(D.m[i - 1] for i in gamma) - (n - 1) * D.d
    return b, gamma


def is_cremona_reduced(D: DivisorClass) -> bool:
    return max_b(D)[0] <= 0


def cremona_reduce(D: DivisorClass, max_steps: int = 1000) -> ReductionResult:
    """Apply the move with the largest positive b_Gamma until none is left.

    Degree drops strictly at each step. When ``max_steps`` runs out the
    result carries ``reduced=False``.
    """
    if max_steps < 0:
        raise PreconditionError("max_steps must be >= 0")
    word: list[IndexSet] = []
    while True:
        b, gamma = max_b(D)
        if b <= 0:
            return ReductionResult(D, tuple(word), True)
        if len(word) >= max_steps:
            return ReductionResult(D, tuple(word), False)
        D = cremona_divisor(D, gamma)[0]
        word.append(gamma)


# -- effectivity of curve classes ----------------------------------------------

class Effectivity(enum.Enum):
    CANDIDATE = "effective-candidate"
    NON_EFFECTIVE = "non-effective"
    INDETERMINATE = "indeterminate"


def _curve_status(delta: int, mu: Sequence[int]) -> Effectivity:
    if delta < 0:
        return Effectivity.NON_EFFECTIVE
    if delta == 0:
        # only sums of lines inside exceptional divisors have degree 0
        if any(x > 0 for x in mu) or not any(mu):
            return Effectivity.NON_EFFECTIVE
        return Effectivity.CANDIDATE
    if max(mu, default=0) > delta:
        # a point multiplicity above the degree needs a negative e_i part;
        # not expanded, surfaced instead
        return Effectivity.INDETERMINATE
    return Effectivity.CANDIDATE


def curve_effectivity_filter(c: CurveClass) -> Effectivity:
    """Conservative effectivity test used while walking orbits."""
    return _curve_status(c.delta, c.mu)


# -- orbits -------------------------------------------------------------------

@dataclass
class OrbitCatalog:
    space: Space
    kind: str  # "curve" or "divisor"
    seed: tuple[int, ...]
    degree_bound: int
    elements: dict[tuple[int, ...], WeylWord]
    complete: bool
    effective_only: bool = True
    boundary: dict[tuple[int, ...], Effectivity] = field(default_factory=dict)
    truncated: int = 0

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x) -> bool:
        vec = x.vector if hasattr(x, "vector") else tuple(x)
        return vec in self.elements

    def ordered(self) -> list[tuple[int, ...]]:
        """Element vectors in (degree, lexicographic) order."""
        return sorted(self.elements, key=lambda v: (v[0], v))

    def classes(self) -> list[Klass]:
        cls = CurveClass if self.kind == "curve" else DivisorClass
        return [cls.from_vector(self.space, v) for v in self.ordered()]

    def witness(self, x) -> WeylWord:
        vec = x.vector if hasattr(x, "vector") else tuple(x)
        return self.elements[vec]

    def count_up_to_permutation(self) -> int:
        """Number of elements modulo permutations of the points."""
        return len({(v[0],) + tuple(sorted(v[1:])) for v in self.elements})


def default_degree_bound(space: Space, seed_degree: int) -> int | None:
    """10*(seed degree + n) on Mori dream spaces, ``None`` elsewhere."""
    if is_mori_dream(space)[0]:
        return 10 * (abs(seed_degree) + space.n)
    return None


def effective_orbit(seed: Klass, degree_bound: int | None = None, effective_only: bool = True) -> OrbitCatalog:
    """Walk the (effective) Weyl orbit of ``seed`` by Cremona moves.

    Classes are expanded in (degree, lexicographic) order, so witness
    words are deterministic. Curve children failing the effectivity
    filter, and divisor children of negative degree, are kept as boundary
    and not expanded. Children above ``degree_bound`` stop the walk in
    that direction and mark the catalog incomplete.

    With ``effective_only=False`` nothing is filtered (the full orbit);
    the bound then applies to the absolute degree.
    """
    space = seed.space
    space.require_weyl()
    curve = isinstance(seed, CurveClass)
    seed_vec = seed.vector
    mds = is_mori_dream(space)[0]
    if degree_bound is None:
        degree_bound = default_degree_bound(space, seed_vec[0])
        if degree_bound is None:
            raise PreconditionError(f"{space} is not a Mori dream space: degree_bound is required")
    if degree_bound < abs(seed_vec[0]):
        raise PreconditionError(f"degree_bound {degree_bound} below seed degree {seed_vec[0]}")

    n = space.n
    gammas = all_index_sets(space)
    gammas0 = [[i - 1 for i in g] for g in gammas]

    elements: dict[tuple[int, ...], WeylWord] = {seed_vec: ()}
    boundary: dict[tuple[int, ...], Effectivity] = {}
    truncated = 0
    heap = [(seed_vec[0], seed_vec)]
    while heap:
        _, vec = heapq.heappop(heap)
        word = elements[vec]
        for gamma, g0 in zip(gammas, gammas0):
            child, shift = _move_vector(vec, g0, n, curve)
            if not shift or child in elements or child in boundary:
                continue
            if effective_only:
                if curve:
                    status = _curve_status(child[0], child[1:])
                else:
                    status = Effectivity.NON_EFFECTIVE if child[0] < 0 else Effectivity.CANDIDATE
                if status is not Effectivity.CANDIDATE:
                    boundary[child] = status
                    continue
            if abs(child[0]) > degree_bound:
                truncated += 1
                continue
            elements[child] = word + (gamma,)
            heapq.heappush(heap, (child[0], child))

    complete = truncated == 0
    if mds and not complete:
        raise InvariantViolationError(
            f"orbit of {seed} on Mori dream space {space} did not close below degree {degree_bound}"
        )
    return OrbitCatalog(
        space=space,
        kind="curve" if curve else "divisor",
        seed=seed_vec,
        degree_bound=degree_bound,
        elements=elements,
        complete=complete,
        effective_only=effective_only,
        boundary=boundary,
        truncated=truncated,
    )


def check_move_closed(cat: OrbitCatalog) -> bool:
    """Every move of every element lands in the catalog or its boundary."""
    curve = cat.kind == "curve"
    gammas0 = [[i - 1 for i in g] for g in all_index_sets(cat.space)]
    for vec in cat.elements:
        for g0 in gammas0:
            child, _ = _move_vector(vec, g0, cat.space.n, curve)
            if child not in cat.elements and child not in cat.boundary:
                return False
    return True


# -- degree-increasing recursion ------------------------------------------------

@dataclass(frozen=True)
class RecursionCertificate:
    status: str  # "satisfies", "fails" or "unavailable"
    case: str
    witness: IndexSet | None = None
    index_set: IndexSet | None = None  # positions (sorted order) summed in the test
    detail: str = ""

    @property
    def satisfied(self) -> bool:
        return self.status == "satisfies"


def recursion_certificate(c: CurveClass) -> RecursionCertificate:
    """Check the inequality that forces an unbounded chain of degree increases.

    Works on a sorted copy of the multiplicities (nondecreasing). For
    s = n+5 (n = 3, 4) the tested sum is m_3 + m_4 + m_7 + ... + m_{n+5};
    for s = n+4 (n >= 5) it runs over an (n+1)-set missing positions
    1, k, l with 4 <= k, k+3 <= l <= n+2, chosen with the smallest sum.
    When satisfied, the witness move is the set of original point indices
    carrying the n+1 smallest multiplicities.
    """
    space = c.space
    n, s = space.n, space.s
    if s == n + 5 and n in (3, 4):
        case = "s=n+5"
        positions = (3, 4) + tuple(range(7, n + 6))
    elif s == n + 4 and n >= 5:
        case = "s=n+4"
        k, l = n - 1, n + 2
        positions = tuple(i for i in range(1, s + 1) if i not in (1, k, l))
    else:
        return RecursionCertificate("unavailable", "none", detail=f"no recursion statement for {space}")
    if c.delta <= 0 or min(c.mu) < 0:
        return RecursionCertificate("unavailable", case, detail="needs positive degree and nonnegative multiplicities")

    order = sorted(range(s), key=lambda i: (c.mu[i], i))
    m = [c.mu[i] for i in order]  # m[0] is m_1
    total = sum(m[p - 1] for p in positions)
    ok = c.delta > total or (c.delta == total and m[-1] > m[0])
    witness = tuple(sorted(i + 1 for i in order[: n + 1]))
    if not ok:
        return RecursionCertificate("fails", case, index_set=positions, detail=f"d={c.delta}, sum={total}")
    branch = "strict" if c.delta > total else "equality"
    return RecursionCertificate("satisfies", case, witness=witness, index_set=positions, detail=f"{branch}: d={c.delta}, sum={total}")


def recursion_chain(c: CurveClass, steps: int) -> list[CurveClass]:
    """Iterate the witness move ``steps`` times; stops early if the test fails."""
    chain = [c]
    for _ in range(steps):
        cert = recursion_certificate(chain[-1])
        if not cert.satisfied:
            break
        chain.append(cremona_curve(chain[-1], cert.witness)[0])
    return chain


# -- serialization and caching ---------------------------------------------------

CATALOG_VERSION = 1
CACHE_ENV = "WEYLCYCLES_CACHE"


def catalog_to_json(cat: OrbitCatalog) -> dict:
    elements = [{"class": list(v), "witness": [list(g) for g in cat.elements[v]]} for v in cat.ordered()]
    out = {
        "version": CATALOG_VERSION,
        "filter_version": FILTER_VERSION,
        "n": cat.space.n,
        "s": cat.space.s,
        "kind": cat.kind,
        "seed": list(cat.seed),
        "degree_bound": cat.degree_bound,
        "complete": cat.complete,
        "effective_only": cat.effective_only,
        "size": len(cat.elements),
        "boundary": len(cat.boundary),
        "indeterminate": sum(1 for x in cat.boundary.values() if x is Effectivity.INDETERMINATE),
        "elements": elements,
    }
    out["catalog_hash"] = catalog_hash(out)
    return out


def catalog_hash(obj: dict) -> str:
    """Hash of the header and element classes (witnesses excluded)."""
    import hashlib
    import json

    key = {k: obj[k] for k in ("version", "filter_version", "n", "s", "kind", "seed", "degree_bound", "effective_only")}
    key["classes"] = [e["class"] for e in obj["elements"]]
    return hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()[:16]


def catalog_from_json(obj: dict) -> OrbitCatalog:
    if obj.get("version") != CATALOG_VERSION or obj.get("filter_version") != FILTER_VERSION:
        raise PreconditionError("catalog written by an incompatible version")
    space = Space(obj["n"], obj["s"])
    elements = {tuple(e["class"]): tuple(tuple(g) for g in e["witness"]) for e in obj["elements"]}
    return OrbitCatalog(space, obj["kind"], tuple(obj["seed"]), obj["degree_bound"], elements,
                        obj["complete"], obj.get("effective_only", True))


def cached_orbit(seed: Klass, degree_bound: int | None = None, cache_dir=None,
                 effective_only: bool = True) -> OrbitCatalog:
    """effective_orbit backed by a JSON file cache.

    The directory comes from ``cache_dir`` or the WEYLCYCLES_CACHE
    environment variable; with neither, nothing is cached. Boundary
    classes are not stored, so loaded catalogs have an empty boundary.
    """
    import json
    import os
    from pathlib import Path

    cache_dir = cache_dir or os.environ.get(CACHE_ENV)
    if not cache_dir:
        return effective_orbit(seed, degree_bound, effective_only)
    kind = "curve" if isinstance(seed, CurveClass) else "divisor"
    bound = degree_bound if degree_bound is not None else default_degree_bound(seed.space, seed.vector[0])
    name = "{}_{}_{}_{}_{}_{}.json".format(
        kind, seed.space.n, seed.space.s, "_".join(map(str, seed.vector)).replace("-", "m"), bound,
        "eff" if effective_only else "full")
    path = Path(cache_dir) / name
    if path.exists():
        obj = json.loads(path.read_text())
        if obj.get("filter_version") == FILTER_VERSION and obj.get("catalog_hash") == catalog_hash(obj):
            return catalog_from_json(obj)
    cat = effective_orbit(seed, degree_bound, effective_only)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(catalog_to_json(cat), sort_keys=True))
    tmp.replace(path)
    return cat
