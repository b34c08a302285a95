"""Command-line front end.  Every command prints one JSON report on stdout.

Exit codes: 0 pass, 1 fail (or a library error), 2 usage, 3 work guard.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import bergman, fan, matroid, realization, serialize
from .errors import GuardError, TropfanError

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _load_matroid(path):
    return serialize.matroid_from_json(serialize.load(path))


def _load_fan(path):
    return serialize.fan_from_json(serialize.load(path))


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")


def _components(M):
    return [list(matroid.elements(c)) for c in matroid.connected_components(M).components]


# --- matroid ---------------------------------------------------------------

def cmd_matroid_info(args):
    M = _load_matroid(args.inp)
    lattice = matroid.flats(M)
    return True, {
        "n_elements": M.n_elements,
        "rank": M.rank,
        "bases": len(M.bases),
        "circuits": len(matroid.circuits(M)),
        "components": len(matroid.connected_components(M)),
        "component_blocks": _components(M),
        "flats_by_rank": [len(layer) for layer in lattice.flats_by_rank],
    }


def cmd_matroid_validate(args):
    obj = serialize.load(args.inp)
    try:
        M = serialize.matroid_from_json(obj)
    except (TropfanError, serialize.SchemaError) as exc:
        return False, {"valid": False, "error": type(exc).__name__, "message": str(exc)}
    return True, {"valid": True, "matroid": serialize.matroid_to_json(M)}


# --- fan -------------------------------------------------------------------

def cmd_fan_build(args):
    M = _load_matroid(args.matroid)
    F = bergman.bergman_fan(M)
    flats = bergman.proper_flats(M)
    payload = {
        "ambient_rank": F.ambient_rank,
        "dimension": F.dimension,
        "rays": len(F.rays),
        "maximal_cones": len(F.maximal_cones),
    }
    if args.out:
        out = Path(args.out)
        serialize.dump(serialize.fan_to_json(F), out)
        sidecar = out.with_name(out.stem + ".flats.json")
        serialize.dump(serialize.ray_flats_to_json(flats), sidecar)
        payload["out"] = str(out)
        payload["sidecar"] = str(sidecar)
    else:
        payload["fan"] = serialize.fan_to_json(F)
        payload.update(serialize.ray_flats_to_json(flats))
    return True, payload


def cmd_fan_validate(args):
    F = _load_fan(args.inp)
    rep = fan.fan_validate(F)
    return rep.valid, {
        "valid": rep.valid,
        "checked_pairs": rep.checked_pairs,
        "violations": [
            {"kind": v.kind, "cones": [list(c) for c in v.cones], "detail": v.detail}
            for v in rep.violations
        ],
    }


def cmd_fan_balance(args):
    F = _load_fan(args.inp)
    rep = fan.check_balancing(F)
    return rep.balanced, {
        "balanced": rep.balanced,
        "checked": rep.checked,
        "failures": [{"tau": list(f.tau), "residual": list(f.residual)} for f in rep.failures],
    }


def cmd_fan_member(args):
    F = _load_fan(args.inp)
    n1 = F.ambient_rank + 1
    if args.vector is not None:
        v = _int_list(args.vector)
        if len(v) != n1:
            raise UsageError(f"vector needs {n1} coordinates")
        cone = fan.support_contains(F, v)
        return cone is not None, {
            "vector": list(fan.QuotientVector.of(v).coords),
            "cone": list(cone.ray_indices) if cone else None,
        }
    if args.random is None:
        raise UsageError("give --vector or --random N")
    M = _load_matroid(args.matroid) if args.matroid else None
    rng = random.Random(args.seed)
    rows, agree = [], 0
    for _ in range(args.random):
        v = [rng.randint(-5, 5) for _ in range(n1)]
        cone = fan.support_contains(F, v)
        row = {"vector": v, "cone": list(cone.ray_indices) if cone else None}
        if M is not None:
            row["circuit_test"] = bergman.circuit_membership(M, v)
            agree += row["circuit_test"] == (cone is not None)
        rows.append(row)
    payload = {"seed": args.seed, "samples": rows, "inside": sum(r["cone"] is not None for r in rows)}
    if M is not None:
        payload["agree"] = agree
    return M is None or agree == args.random, payload


def cmd_fan_lineality(args):
    F = _load_fan(args.inp)
    basis = fan.lineality(F)
    return True, {"rank": len(basis), "basis": [list(v.coords) for v in basis]}


# --- bergman ---------------------------------------------------------------

def cmd_bergman_degree(args):
    M = _load_matroid(args.matroid)
    if args.basis == "all":
        bases = [b for b in M.sorted_bases()]
    elif args.basis == "auto":
        bases = ["auto"]
    else:
        bases = [_int_list(args.basis)]
    reports = []
    for b in bases:
        rep = bergman.verify_degree_one(M, b)
        reports.append({
            "basis": list(rep.basis),
            "permutation": list(rep.permutation),
            "cones_checked": rep.cones_checked,
            "pass": rep.passed,
            "cones": [
                {
                    "subsets": [list(s) for s in c.subsets],
                    "flats": [list(f) for f in c.predicted_flats],
                    "preimages": [list(p) for p in c.preimages],
                    "injective": c.injective,
                    "unimodular": c.unimodular,
                }
                for c in rep.checks
            ],
        })
    ok = all(r["pass"] for r in reports)
    return ok, {"pass": ok, "bases_checked": len(reports), "reports": reports}


# --- realize ---------------------------------------------------------------

def _search(args, mode):
    M = _load_matroid(args.matroid)
    classes = realization.search_realizations(M, args.p, mode, args.max_work)
    payload = {"p": args.p, "mode": mode, "found": len(classes)}
    payload.update(serialize.classes_to_json(classes))
    return M, classes, payload


def cmd_realize_search(args):
    _, classes, payload = _search(args, args.mode)
    return bool(classes), payload


def cmd_realize_classes(args):
    _, classes, payload = _search(args, "all_classes")
    return True, payload


def cmd_realize_count(args):
    M = _load_matroid(args.matroid)
    return True, {"q": args.q, "count": realization.count_tropical_realizations(M, args.q, args.max_work)}


def cmd_realize_torsor(args):
    M = _load_matroid(args.matroid)
    t = realization.verify_torsor_count(M, args.q, args.max_work)
    return t.passed, {
        "q": t.q, "lhs": t.lhs, "rhs": t.rhs, "classes": t.classes,
        "torus_rank": t.torus_rank, "pass": t.passed,
    }


def cmd_realize_check(args):
    M = _load_matroid(args.matroid)
    A = serialize.realization_from_json(serialize.load(args.inp))
    gamma = realization.is_gamma_point(M, A)
    arrangement = realization.arrangement_check(A, M, seed=args.seed)
    return gamma.ok and arrangement, {
        "gamma_point": gamma.ok,
        "failing_subset": list(gamma.failing_subset) if gamma.failing_subset else None,
        "arrangement": arrangement,
    }


# --- zoo -------------------------------------------------------------------

def cmd_zoo_emit(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, M in matroid.zoo().items():
        path = out / f"{name}.json"
        serialize.dump(serialize.matroid_to_json(M), path)
        written.append(str(path))
    return True, {"written": written}


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sampling")
    common.add_argument("--max-work", type=int, default=None,
                        help="override enumeration guards (also $TROPFAN_MAX_WORK)")

    parser = argparse.ArgumentParser(prog="tropfan", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)

    def add(group, name, func, **kw):
        p = group.add_parser(name, parents=[common], **kw)
        p.set_defaults(func=func)
        return p

    g = groups.add_parser("matroid").add_subparsers(dest="action", required=True)
    add(g, "info", cmd_matroid_info).add_argument("--in", dest="inp", required=True)
    add(g, "validate", cmd_matroid_validate).add_argument("--in", dest="inp", required=True)

    g = groups.add_parser("fan").add_subparsers(dest="action", required=True)
    p = add(g, "build", cmd_fan_build)
    p.add_argument("--matroid", required=True)
    p.add_argument("--out")
    add(g, "validate", cmd_fan_validate).add_argument("--in", dest="inp", required=True)
    add(g, "balance", cmd_fan_balance).add_argument("--in", dest="inp", required=True)
    p = add(g, "member", cmd_fan_member)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--vector", help="comma-separated integer representative")
    p.add_argument("--random", type=int, help="test N seeded random vectors in [-5, 5]")
    p.add_argument("--matroid", help="cross-check random vectors against circuits")
    add(g, "lineality", cmd_fan_lineality).add_argument("--in", dest="inp", required=True)

    g = groups.add_parser("bergman").add_subparsers(dest="action", required=True)
    p = add(g, "degree", cmd_bergman_degree)
    p.add_argument("--matroid", required=True)
    p.add_argument("--basis", default="auto", help="auto, all, or a comma-separated basis")

    g = groups.add_parser("realize").add_subparsers(dest="action", required=True)
    for name, func in (("search", cmd_realize_search), ("classes", cmd_realize_classes)):
        p = add(g, name, func)
        p.add_argument("--matroid", required=True)
        p.add_argument("--p", type=int, required=True)
        if name == "search":
            p.add_argument("--mode", choices=["first", "all_classes"], default="first")
    for name, func in (("count", cmd_realize_count), ("torsor", cmd_realize_torsor)):
        p = add(g, name, func)
        p.add_argument("--matroid", required=True)
        p.add_argument("--q", type=int, required=True)
    p = add(g, "check", cmd_realize_check)
    p.add_argument("--matroid", required=True)
    p.add_argument("--in", dest="inp", required=True)

    g = groups.add_parser("zoo").add_subparsers(dest="action", required=True)
    add(g, "emit", cmd_zoo_emit).add_argument("--out", required=True)
    return parser


def dispatch(argv: list[str]) -> tuple[dict, int]:
    """Run one command; returns (report, exit code).  Argparse usage errors exit directly."""
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    code = EXIT_PASS
    try:
        ok, payload = args.func(args)
        status = "pass" if ok else "fail"
        code = EXIT_PASS if ok else EXIT_FAIL
    except GuardError as exc:
        status, payload, code = "error", {"error": type(exc).__name__, "message": str(exc)}, EXIT_GUARD
    except TropfanError as exc:
        status, payload, code = "error", {"error": type(exc).__name__, "message": str(exc)}, EXIT_FAIL
    except (UsageError, OSError, ValueError) as exc:
        # SchemaError and JSONDecodeError are ValueErrors
        print(f"tropfan: {exc}", file=sys.stderr)
        return {}, EXIT_USAGE
    report = {
        "command": f"{args.group} {args.action}",
        "argv": list(argv),
        "status": status,
        "payload": _jsonable(payload),
        "elapsed_ms": round((time.perf_counter() - start) * 1000, 3),
    }
    return report, code


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    report, code = dispatch(argv)
    if report:
        json.dump(report, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
