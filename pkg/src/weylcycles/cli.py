"""Command line front end: ``weylcycles <subcommand> ...``.

Exit codes: 0 success, 2 precondition error, 3 verification mismatch,
4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Any

from . import __version__
from .errors import PreconditionError, ResourceCapError, VerificationError, WeylError
from .lattice import CurveClass, DivisorClass, Space, dm_pairing, anticanonical_divisor, is_mori_dream
from .weyl import CACHE_ENV, FILTER_VERSION

EXIT_OK, EXIT_PRECONDITION, EXIT_VERIFY, EXIT_CAP = 0, 2, 3, 4


class Mismatch(Exception):
    """Raised after printing a report whose verification failed."""


# -- argument helpers ---------------------------------------------------------------

def _ints(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise PreconditionError(f"expected comma separated integers, got {text!r}") from None


def _space(args) -> Space:
    if not args.space:
        raise PreconditionError("--space n,s is required")
    return Space.parse(args.space)


def _divisor(args, space: Space, attr: str = "divisor") -> DivisorClass:
    text = getattr(args, attr)
    if not text:
        raise PreconditionError(f"--{attr.replace('_', '-')} is required")
    return DivisorClass.parse(space, text)


def _class(args, space: Space):
    if getattr(args, "divisor", None) and getattr(args, "curve", None):
        raise PreconditionError("give either --divisor or --curve, not both")
    if getattr(args, "curve", None):
        return CurveClass.parse(space, args.curve)
    if getattr(args, "divisor", None):
        return DivisorClass.parse(space, args.divisor)
    raise PreconditionError("--divisor or --curve is required")


def _cache_dir(args):
    return args.cache_dir or os.environ.get(CACHE_ENV)


# -- output ---------------------------------------------------------------------------

def _emit(args, payload: dict, rows: list[dict] | None = None, text: str | None = None):
    payload = {"tool_version": __version__, "filter_version": FILTER_VERSION, **payload}
    fmt = args.format
    if fmt == "json":
        out = json.dumps(payload, sort_keys=True, indent=2)
    elif fmt == "csv":
        if rows is None:
            rows = [{k: v for k, v in payload.items() if not isinstance(v, (list, dict))}]
        buf = io.StringIO()
        fields = list(rows[0].keys()) if rows else []
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in r.items()})
        out = buf.getvalue().rstrip("\n")
    else:
        if text is None:
            text = "\n".join(f"{k}: {_plain(v)}" for k, v in payload.items())
        out = text
    print(out)


def _plain(v: Any) -> str:
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True)
    return str(v)


# -- subcommands ------------------------------------------------------------------------

def cmd_classify(args):
    space = _space(args)
    mds, reason = is_mori_dream(space)
    K = anticanonical_divisor(space)
    _emit(args, {"space": str(space), "n": space.n, "s": space.s, "mori_dream": mds, "reason": reason,
                 "anticanonical_self_pairing": dm_pairing(K, K), "weyl_group": space.has_weyl_group})


def cmd_orbit(args):
    from .weyl import cached_orbit, catalog_hash, catalog_to_json

    space = _space(args)
    seed = _class(args, space)
    cat = cached_orbit(seed, args.degree_bound, _cache_dir(args), effective_only=not args.full)
    obj = catalog_to_json(cat)
    payload = {k: v for k, v in obj.items() if k != "elements"}
    payload["space"] = str(space)
    payload["up_to_permutation"] = cat.count_up_to_permutation()
    if args.elements:
        payload["elements"] = obj["elements"]
    rows = [{"class": ";".join([str(e["class"][0]), ",".join(map(str, e["class"][1:]))]),
             "witness": e["witness"]} for e in obj["elements"]]
    text = (f"{space} seed {seed}: {len(cat)} elements, "
            f"{'complete' if cat.complete else 'incomplete'} (degree bound {cat.degree_bound})")
    if args.elements:
        text += "\n" + "\n".join(r["class"] for r in rows)
    _emit(args, payload, rows if args.format == "csv" else None, text)


def cmd_cremona(args):
    from .weyl import cremona_curve, cremona_divisor

    space = _space(args)
    x = _class(args, space)
    if not args.gamma:
        raise PreconditionError("--gamma is required (repeat it to apply a word)")
    shifts = []
    for g in args.gamma:
        if isinstance(x, DivisorClass):
            x, sh = cremona_divisor(x, _ints(g))
        else:
            x, sh = cremona_curve(x, _ints(g))
        shifts.append(sh)
    _emit(args, {"space": str(space), "result": str(x), "vector": list(x.vector), "shifts": shifts},
          text=str(x))


def cmd_reduce(args):
    from .weyl import cremona_reduce

    space = _space(args)
    res = cremona_reduce(_divisor(args, space), args.max_steps)
    _emit(args, {"space": str(space), "input": args.divisor, "result": str(res.divisor),
                 "reduced": res.reduced, "steps": res.steps, "word": [list(g) for g in res.word]},
          text=f"{res.divisor} ({'reduced' if res.reduced else 'step budget exhausted'} after {res.steps} steps)")


def _join_row(J):
    from .cycles import join_cycle_degrees, sweeping_curve

    deg = join_cycle_degrees(J)
    return {"I": list(J.I), "t": J.t, "r": J.r, "curve": str(sweeping_curve(J)),
            "hr_degree": deg.hr_degree, "er_degrees": list(deg.er_degrees)}


def cmd_joins(args):
    from .cycles import Join, joins_of_dimension

    space = _space(args)
    if args.I is not None:
        joins = [Join(space, _ints(args.I), args.t)]
    else:
        dims = [args.r] if args.r is not None else range(0, space.n)
        joins = [J for r in dims for J in joins_of_dimension(space, r)]
    rows = [_join_row(J) for J in joins]
    text = "\n".join(f"J({r['I']},t={r['t']}) r={r['r']} curve {r['curve']}" for r in rows)
    _emit(args, {"space": str(space), "count": len(rows), "joins": rows}, rows, text)


def cmd_kappa(args):
    from .cycles import Join, is_orthogonal, kappa

    space = _space(args)
    J = Join(space, _ints(args.I or ""), args.t)
    D = _divisor(args, space)
    k = kappa(J, D)
    _emit(args, {"space": str(space), "join": J.to_json(), "divisor": str(D), "kappa": k,
                 "containment": max(0, k), "orthogonal": is_orthogonal(J, D)}, text=str(k))


def cmd_cones(args):
    from .cones import ck_generators, table1_orbit_count

    space = _space(args)
    ks = [args.k] if args.k is not None else range(space.n)
    reports = []
    for k in ks:
        rep, cone = ck_generators(space, k, args.degree_bound, extremal_flags=args.extremal,
                                  dim_cap=args.dim_cap)
        obj = rep.to_json()
        obj["generator_count"] = len(cone.generators)
        obj["table1_expected"] = table1_orbit_count(space.n, space.s, k)
        if not args.extremal:
            obj.pop("extremal")
        if args.generators:
            obj["generators"] = [list(g) for g in cone.generators]
        reports.append(obj)
    rows = [{"k": r["k"], "orbit_count": r["orbit_count"], "generator_count": r["generator_count"],
             "table1_expected": r["table1_expected"], "complete": r["complete"]} for r in reports]
    text = "\n".join(f"k={r['k']}: {r['orbit_count']} orbits, {r['generator_count']} generators" for r in rows)
    _emit(args, {"space": str(space), "cones": reports}, rows, text)


def cmd_duality(args):
    from .cones import verify_strong_duality

    space = _space(args)
    ks = [args.k] if args.k is not None else range(space.n)
    reps = [verify_strong_duality(space, k, args.degree_bound, args.dim_cap) for k in ks]
    rows = [{"k": r.k, "equal": r.equal, "ck_generators": r.ck_generators, "dk_rays": r.dk_rays} for r in reps]
    text = "\n".join(f"k={r['k']}: {'equal' if r['equal'] else 'MISMATCH'}" for r in rows)
    _emit(args, {"space": str(space), "reports": [r.to_json() for r in reps]}, rows, text)
    if not all(r.equal for r in reps):
        raise Mismatch("strong duality check failed")


def cmd_base_locus(args):
    from .baselocus import weyl_base_locus

    space = _space(args)
    bl = weyl_base_locus(_divisor(args, space), args.degree_bound)
    obj = bl.to_json()
    text = "\n".join(f"r={c['r']} curve {c['curve']} multiplicity {c['multiplicity']}" for c in obj["components"]) or "empty"
    _emit(args, {"space": str(space), **obj}, obj["components"] or None, text)


def cmd_chamber(args):
    from .baselocus import chamber_signature, plane_catalog

    space = _space(args)
    D = _divisor(args, space)
    sig = chamber_signature(D, args.degree_bound)
    payload = {"space": str(space), "divisor": str(D),
               "catalog_hash": plane_catalog(space, args.degree_bound).version_hash,
               "negative": sum(1 for x in sig.signs if x < 0), "zero": sum(1 for x in sig.signs if x == 0),
               "positive": sum(1 for x in sig.signs if x > 0)}
    if args.compare:
        D2 = _divisor(args, space, "compare")
        sig2 = chamber_signature(D2, args.degree_bound)
        payload["compare"] = str(D2)
        payload["same_chamber"] = sig.signs == sig2.signs
    if args.signs:
        payload["signs"] = [{"curve": str(c), "sign": s} for c, s in zip(sig.curves, sig.signs)]
    _emit(args, payload)


def cmd_wdim(args):
    from .baselocus import in_effective_cone, wdim
    from .oracle import divisor_dimension

    space = _space(args)
    D = _divisor(args, space)
    res = wdim(D, args.degree_bound, args.chi_convention)
    payload = {"space": str(space), "divisor": str(D), "chi": res.chi, "wdim": res.value,
               "wdim_truncated": res.truncated, "complete": res.complete,
               "catalog_hash": res.base_locus.catalog_hash,
               "components": len(res.base_locus.components)}
    if not args.no_oracle:
        if any(x < 0 for x in D.m):
            raise PreconditionError("the oracle needs nonnegative multiplicities (use --no-oracle)")
        effective = in_effective_cone(D, args.degree_bound)
        orc = divisor_dimension(D, args.seed, args.prime)
        expected = res.truncated if effective else 0
        payload.update({"oracle": orc.dimension, "oracle_stable": orc.stable, "seed": args.seed,
                        "prime": args.prime, "in_effective_cone": effective, "match": orc.dimension == expected})
    text = f"wdim {res.value}"
    if "oracle" in payload:
        text += f", oracle {payload['oracle']}, {'match' if payload['match'] else 'MISMATCH'}"
    _emit(args, payload, text=text)


def cmd_oracle(args):
    from .oracle import DEFAULT_CELL_CAP, ORACLE_VERSION, InterpolationProblem, dimension_table, oracle_dimension

    if args.oracle_cmd == "dim":
        if args.space and args.divisor:
            space = _space(args)
            D = _divisor(args, space)
            p = InterpolationProblem.from_divisor(D, args.seed, args.prime)
        else:
            if args.n is None or args.d is None:
                raise PreconditionError("give --space and --divisor, or --n, --d and --m")
            p = InterpolationProblem(args.n, args.d, _ints(args.m or ""), args.seed, args.prime)
        res = oracle_dimension(p, args.cell_cap or DEFAULT_CELL_CAP)
        _emit(args, {"oracle_version": ORACLE_VERSION, "n": p.n, "d": p.d, "m": list(p.m),
                     "dimension": res.dimension, "stable": res.stable, "per_seed": list(res.per_seed),
                     "seeds": list(res.seeds), "prime": res.prime}, text=str(res.dimension))
        return
    space = _space(args)
    rows = dimension_table(space, args.d_max, args.m_max, args.seed, d_min=args.d_min, m_min=args.m_min,
                           prime=args.prime, degree_bound=args.degree_bound, jobs=args.jobs)
    objs = [r.to_json() for r in rows]
    mism = [o for o in objs if not o["match"]]
    payload = {"oracle_version": ORACLE_VERSION, "space": str(space), "seed": args.seed, "prime": args.prime,
               "rows": objs, "mismatches": len(mism), "unstable": sum(1 for o in objs if not o["stable"])}
    text = "\n".join(f"d={o['d']} m={o['m']} oracle={o['oracle']} wdim={o['wdim']} "
                     f"{'ok' if o['match'] else 'MISMATCH'}" for o in objs)
    _emit(args, payload, objs, text)
    if args.check and mism:
        raise Mismatch(f"{len(mism)} mismatching rows")


def _surface_class(text: str):
    from .gale import SurfaceDivisor

    head, _, tail = text.partition(";")
    return SurfaceDivisor(int(head), _ints(tail))


def cmd_gale(args):
    from .gale import (SurfaceDivisor, all_triples, check_equivariance, eta, gale_image_classification,
                       random_surface_classes, rho_inv, two_rho_inv)

    if args.gale_cmd == "map":
        w = _surface_class(args.surface)
        payload = {"surface": w.to_json(), "rho_inv_times_2": list(two_rho_inv(w).vector),
                   "rho_inv": str(rho_inv(w)), "eta": list(eta(w).vector)}
        if args.kind:
            payload["classification"] = gale_image_classification(args.kind, w, args.map).to_json()
        _emit(args, payload)
        return
    a, b = SurfaceDivisor.alpha(), SurfaceDivisor.beta
    identities = {
        "2rho_inv(beta_1) = h - e_1": two_rho_inv(b(1)) == CurveClass.through(Space(4, 8), 1, (1,)),
        "eta(alpha) = h": eta(a) == CurveClass.line(Space(4, 8)),
        "eta(alpha - beta_1) = e_1": eta(a - b(1)) == CurveClass.exceptional(Space(4, 8), 1),
        "eta(2alpha - beta_1..5) = 2h - e_6 - e_7 - e_8":
            eta(2 * a - b(1) - b(2) - b(3) - b(4) - b(5)) == CurveClass.through(Space(4, 8), 2, (6, 7, 8)),
    }
    ws = random_surface_classes(args.random, args.seed)
    failures = [{"w": w.to_json(), "triple": list(t)} for w in ws for t in all_triples()
                if not check_equivariance(w, t)]
    ok = all(identities.values()) and not failures
    _emit(args, {"identities": identities, "equivariance_checks": len(ws) * 56, "failures": failures, "ok": ok},
          text="ok" if ok else "FAILED")
    if not ok:
        raise Mismatch("Gale verification failed")


def cmd_certify(args):
    from .weyl import recursion_certificate, recursion_chain

    space = _space(args)
    c = CurveClass.parse(space, args.curve)
    cert = recursion_certificate(c)
    chain = recursion_chain(c, args.steps)
    degrees = [x.delta for x in chain]
    increasing = all(a < b for a, b in zip(degrees, degrees[1:]))
    certified = cert.satisfied and len(chain) == args.steps + 1 and increasing
    _emit(args, {"space": str(space), "curve": str(c), "status": cert.status, "case": cert.case,
                 "witness": list(cert.witness) if cert.witness else None,
                 "index_set": list(cert.index_set) if cert.index_set else None, "detail": cert.detail,
                 "steps": len(chain) - 1, "degrees": degrees, "certified": certified},
          text=f"{cert.status}: degrees {degrees}")


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space", help="n,s")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--degree-bound", type=int, default=None)
    common.add_argument("--cache-dir", default=None, help=f"orbit cache directory (or ${CACHE_ENV})")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--prime", type=int, default=2147483647)

    p = argparse.ArgumentParser(prog="weylcycles", description="Weyl cycles on blow-ups of P^n at points")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    add("classify", cmd_classify, "Mori dream space test")

    sp = add("orbit", cmd_orbit, "effective Weyl orbit of a class")
    sp.add_argument("--divisor")
    sp.add_argument("--curve")
    sp.add_argument("--full", action="store_true", help="full orbit, no effectivity filter")
    sp.add_argument("--elements", action="store_true", help="list elements with witness words")

    sp = add("cremona", cmd_cremona, "apply Cremona moves")
    sp.add_argument("--divisor")
    sp.add_argument("--curve")
    sp.add_argument("--gamma", action="append", help="index set, e.g. 1,2,3,4,5; repeat for a word")

    sp = add("reduce", cmd_reduce, "Cremona-reduce a divisor")
    sp.add_argument("--divisor")
    sp.add_argument("--max-steps", type=int, default=1000)

    sp = add("joins", cmd_joins, "joins and their sweeping curves")
    sp.add_argument("--r", type=int)
    sp.add_argument("--I")
    sp.add_argument("--t", type=int, default=0)

    sp = add("kappa", cmd_kappa, "base locus exponent of a join")
    sp.add_argument("--divisor")
    sp.add_argument("--I")
    sp.add_argument("--t", type=int, default=0)

    for name, fn, h in (("cones", cmd_cones, "generators of the cones C_k"),
                        ("duality", cmd_duality, "verify C_k = dual of D_k")):
        sp = add(name, fn, h)
        sp.add_argument("--k", type=int)
        sp.add_argument("--dim-cap", type=int, default=None)
        if name == "cones":
            sp.add_argument("--extremal", action="store_true")
            sp.add_argument("--generators", action="store_true")

    sp = add("base-locus", cmd_base_locus, "Weyl base locus of a divisor")
    sp.add_argument("--divisor")

    sp = add("chamber", cmd_chamber, "Weyl chamber signature")
    sp.add_argument("--divisor")
    sp.add_argument("--compare")
    sp.add_argument("--signs", action="store_true")

    sp = add("wdim", cmd_wdim, "Weyl expected dimension (and oracle)")
    sp.add_argument("--divisor")
    sp.add_argument("--no-oracle", action="store_true")
    sp.add_argument("--chi-convention", choices=("polynomial", "truncated"), default="polynomial")

    sp = add("oracle", cmd_oracle, "interpolation oracle")
    osub = sp.add_subparsers(dest="oracle_cmd", required=True)
    od = osub.add_parser("dim", parents=[common])
    od.add_argument("--divisor")
    od.add_argument("--n", type=int)
    od.add_argument("--d", type=int)
    od.add_argument("--m")
    od.add_argument("--cell-cap", type=int)
    ot = osub.add_parser("table", parents=[common])
    ot.add_argument("--d-min", type=int, default=0)
    ot.add_argument("--d-max", type=int, default=5)
    ot.add_argument("--m-min", type=int, default=1)
    ot.add_argument("--m-max", type=int, default=3)
    ot.add_argument("--jobs", type=int, default=1)
    ot.add_argument("--check", action="store_true", help="exit 3 on any mismatch")

    sp = add("gale", cmd_gale, "Gale duality maps for X^4_8")
    gsub = sp.add_subparsers(dest="gale_cmd", required=True)
    gm = gsub.add_parser("map", parents=[common])
    gm.add_argument("--surface", required=True, help="a;b1,...,b8")
    gm.add_argument("--kind", choices=("-1", "0", "1"))
    gm.add_argument("--map", choices=("2rho", "eta"))
    gv = gsub.add_parser("verify", parents=[common])
    gv.add_argument("--random", type=int, default=20)

    sp = add("certify-infinite", cmd_certify, "degree-increasing recursion certificate")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--steps", type=int, default=20)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except Mismatch as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except WeylError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
