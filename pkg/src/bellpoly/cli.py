"""Command-line surface: every capability, machine-readable by default.

Results go to stdout as one JSON document; progress and notes go to
stderr.  --pretty switches to a human-readable summary.  Exit codes:
0 when every claim checked out (or a partial result was produced under an
explicit budget), 1 when a verification failed, 2 for usage errors or
malformed input.  There is no randomness anywhere: the same invocation
produces byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import cglmp as cglmp_mod
from . import membership as membership_mod
from .correlators import (
    cglmp_corr_inequality,
    corr_from_json,
    corr_to_json,
    project,
    projected_generators,
)
from .facets import classify_trivial, enumerate_facets, saturation_count, vrep_of
from .jsonio import encode_rational
from .linalg import rank
from .scenario import (
    Scenario,
    all_generators,
    behavior_from_json,
    constraint_matrix,
    inequality_from_json,
    inequality_to_json,
    polytope_affine_dim,
)
from .symmetry import label_classes


class UsageError(Exception):
    pass


def _emit(payload: dict, pretty_lines: list[str] | None, pretty: bool) -> None:
    if pretty and pretty_lines is not None:
        print("\n".join(pretty_lines))
    else:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def _parse_d(value: str) -> int:
    try:
        d = int(value)
    except ValueError as exc:
        raise UsageError(f"d must be an integer, got {value!r}") from exc
    if d < 2:
        raise UsageError("d must be at least 2")
    return d


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise UsageError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from exc


def cmd_dims(args) -> int:
    d = _parse_d(args.d)
    s = Scenario(d)
    rows, _ = constraint_matrix(s)
    got_rank = rank(rows)
    got_dim = polytope_affine_dim(s)
    ok = got_rank == 4 * d and got_dim == 4 * d * (d - 1)
    payload = {
        "d": d,
        "constraint_rows": len(rows),
        "constraint_rank": got_rank,
        "expected_constraint_rank": 4 * d,
        "affine_dim": got_dim,
        "expected_affine_dim": 4 * d * (d - 1),
        "ok": ok,
    }
    _emit(
        payload,
        [
            f"scenario d={d}",
            f"  constraint system: {len(rows)} rows, rank {got_rank} (expected {4*d})",
            f"  affine dimension of the generator hull: {got_dim} (expected {4*d*(d-1)})",
            f"  {'OK' if ok else 'FAILED'}",
        ],
        args.pretty,
    )
    return 0 if ok else 1


def cmd_verify_cglmp(args) -> int:
    d = _parse_d(args.d)
    try:
        rep = cglmp_mod.verify_condition1(d)
    except cglmp_mod.VerificationError as exc:
        _emit({"d": d, "ok": False, "error": str(exc)}, [f"FAILED: {exc}"], args.pretty)
        return 1
    payload = {
        "d": d,
        "total": rep.total,
        "max": encode_rational(rep.max_value),
        "histogram": {str(encode_rational(k)): v for k, v in rep.histogram.items()},
        "cases": rep.case_histogram,
        "ok": True,
    }
    lines = [f"CGLMP bound over all {rep.total} generators at d={d}: max {rep.max_value}"]
    for value, count in rep.histogram.items():
        lines.append(f"  value {value}: {count} generators")
    lines.append("  coefficient form and f form agree everywhere; OK")
    _emit(payload, lines, args.pretty)
    return 0


def cmd_tightness(args) -> int:
    d = _parse_d(args.d)
    rep = cglmp_mod.tightness_rank(d)
    payload = {
        "d": d,
        "h": rep.h,
        "saturating": rep.saturating,
        "rank": rep.rank,
        "tight": rep.tight,
    }
    lines = [
        f"tightness at d={d}: {rep.saturating} saturating generators, "
        f"rank {rep.rank} of required {rep.h} -> {'tight' if rep.tight else 'NOT tight'}"
    ]
    ok = rep.tight
    if args.witness:
        try:
            batches = cglmp_mod.constructive_witness(d)
            payload["witness_steps"] = [
                {
                    "step": b.step_index,
                    "scheme": b.scheme,
                    "params": list(b.params),
                    "vectors": len(b.vectors),
                    "rank_after": b.rank_after,
                }
                for b in batches
            ]
            for b in batches:
                lines.append(
                    f"  step {b.step_index}: {b.scheme} {b.params} -> rank {b.rank_after}"
                )
        except cglmp_mod.WitnessError as exc:
            payload["witness_error"] = str(exc)
            lines.append(f"  witness FAILED: {exc}")
            ok = False
    payload["ok"] = ok
    _emit(payload, lines, args.pretty)
    return 0 if ok else 1


def cmd_project(args) -> int:
    data = _load_json(args.file)
    if "P" not in data:
        raise UsageError("expected a behavior JSON object with a 'P' table")
    try:
        p = behavior_from_json(data)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad behavior file: {exc}") from exc
    c = project(p)
    payload = corr_to_json(c)
    lines = [f"projected correlators (d={c.d}):"]
    for a, b in ((1, 1), (1, 2), (2, 1), (2, 2)):
        row = [str(c[(a, b, n)]) for n in range(c.d)]
        lines.append(f"  A{a}B{b}: {row}")
    _emit(payload, lines, args.pretty)
    return 0


def cmd_cglmp(args) -> int:
    d = _parse_d(args.d)
    ineq = cglmp_corr_inequality(d) if args.space == "corr" else cglmp_mod.cglmp_inequality(d)
    payload = inequality_to_json(ineq)
    _emit(
        payload,
        [
            f"CGLMP inequality at d={d} in {ineq.space} coordinates",
            f"  coefficients: {[str(c) for c in ineq.coeffs]}",
            f"  bound: {ineq.bound}",
        ],
        args.pretty,
    )
    return 0


def _vertices_for(space: str, d: int):
    if space == "correlator":
        return projected_generators(d)
    return all_generators(Scenario(d))


def cmd_enumerate(args) -> int:
    d = _parse_d(args.d)
    space = "correlator" if args.space == "corr" else "behavior"
    deadline = None
    if args.budget is not None:
        if d < 4:
            print("note: --budget only matters for d >= 4; ignoring", file=sys.stderr)
        else:
            deadline = time.monotonic() + float(args.budget)
    t0 = time.monotonic()
    verts = _vertices_for(space, d)
    hrep = enumerate_facets(vrep_of(verts), space=space, d=d, deadline=deadline)
    print(
        f"enumerated {len(hrep.facets)} facets of {len(verts)} vertices "
        f"(dim {hrep.reduced_dim}) in {time.monotonic()-t0:.2f}s",
        file=sys.stderr,
    )
    trivial = [classify_trivial(f) for f in hrep.facets]
    if space == "behavior" and d >= 4:
        labels = None
        print("note: behavior-space symmetry classes need the large-group flag; "
              "facets emitted without class labels", file=sys.stderr)
    else:
        labels, _reps = label_classes(hrep.facets)
    facets_json = []
    for i, f in enumerate(hrep.facets):
        entry = {
            "coeffs": [encode_rational(c) for c in f.coeffs],
            "bound": encode_rational(f.bound),
            "trivial": trivial[i],
            "class": None if labels is None else labels[i],
        }
        facets_json.append(entry)
    payload = {
        "space": space,
        "d": d,
        "complete": hrep.complete,
        "reduced_dim": hrep.reduced_dim,
        "equations": [
            {"coeffs": [encode_rational(c) for c in row], "rhs": encode_rational(rhs)}
            for row, rhs in hrep.equations
        ],
        "facets": facets_json,
    }
    nclasses = len(set(l for l in labels)) if labels is not None else None
    lines = [
        f"{space} polytope at d={d}: {len(hrep.facets)} facets"
        + ("" if hrep.complete else " (INCOMPLETE: budget exhausted)"),
        f"  trivial {sum(trivial)}, non-trivial {len(trivial) - sum(trivial)}"
        + (f", symmetry classes {nclasses}" if nclasses is not None else ""),
    ]
    _emit(payload, lines, args.pretty)
    return 0


def cmd_classify(args) -> int:
    data = _load_json(args.file)
    try:
        space = str(data["space"])
        d = int(data["d"])
        facets = [
            inequality_from_json({"space": space, "d": d, **f}) for f in data["facets"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad facet list: {exc}") from exc
    if space not in ("behavior", "correlator"):
        raise UsageError(f"unknown space {space!r}")
    verts = _vertices_for(space, d)
    checked = []
    ok = True
    for f in facets:
        try:
            count, rk = saturation_count(f, verts)
            checked.append({"supporting": True, "saturating": count, "rank": rk})
        except ValueError as exc:
            checked.append({"supporting": False, "error": str(exc)})
            ok = False
    if space == "behavior" and d >= 4:
        labels = [None] * len(facets)
    else:
        labels, _ = label_classes(facets)
    payload = {
        "space": space,
        "d": d,
        "facets": [
            {
                "coeffs": [encode_rational(c) for c in f.coeffs],
                "bound": encode_rational(f.bound),
                "trivial": classify_trivial(f),
                "class": labels[i],
                **checked[i],
            }
            for i, f in enumerate(facets)
        ],
        "ok": ok,
    }
    lines = [f"classified {len(facets)} inequalities ({space}, d={d}); ok={ok}"]
    for i, entry in enumerate(payload["facets"]):
        lines.append(
            f"  #{i}: trivial={entry['trivial']} class={entry['class']} "
            + (f"saturating={entry.get('saturating')} rank={entry.get('rank')}"
               if entry["supporting"] else f"NOT SUPPORTING: {entry.get('error')}")
        )
    _emit(payload, lines, args.pretty)
    return 0 if ok else 1


def cmd_membership(args) -> int:
    data = _load_json(args.file)
    try:
        if "P" in data:
            p = behavior_from_json(data)
            res = membership_mod.local_decompose(p)
            keyfmt = lambda lam: ",".join(str(x) for x in lam)
        elif "C" in data:
            c = corr_from_json(data)
            res = membership_mod.corr_local_decompose(c)
            keyfmt = lambda lab: ",".join(str(x) for x in lab)
        else:
            raise UsageError("file is neither a behavior ('P') nor a correlator ('C') object")
    except ValueError as exc:
        raise UsageError(f"bad input: {exc}") from exc
    payload = {
        "verdict": "local" if res.local else "nonlocal",
        "weights": None
        if res.weights is None
        else {keyfmt(k): encode_rational(v) for k, v in res.weights.items()},
        "certificate": None if res.certificate is None else inequality_to_json(res.certificate),
        "violation": None if res.violation is None else encode_rational(res.violation),
        "certificate_class": res.certificate_class,
    }
    if res.local:
        lines = [f"local: convex decomposition over {len(res.weights)} strategies"]
        for k, v in res.weights.items():
            lines.append(f"  ({keyfmt(k)}): {v}")
    else:
        lines = [
            "nonlocal: separating inequality found",
            f"  class: {res.certificate_class}",
            f"  violation above the local bound: {res.violation}",
        ]
    _emit(payload, lines, args.pretty)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellpoly",
        description="exact local-realistic polytopes, CGLMP certificates and Bell facets",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="human-readable output")
    common.add_argument(
        "--threads", type=int, default=1, metavar="N",
        help="accepted for compatibility; the pipeline is deterministic and single-process",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", parents=[common], help="constraint rank and affine dimension")
    p.add_argument("d")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("verify-cglmp", parents=[common], help="exhaustive bound check over all generators")
    p.add_argument("d")
    p.set_defaults(func=cmd_verify_cglmp)

    p = sub.add_parser("tightness", parents=[common], help="saturation rank; --witness adds the staged certificate")
    p.add_argument("d")
    p.add_argument("--witness", action="store_true")
    p.set_defaults(func=cmd_tightness)

    p = sub.add_parser("project", parents=[common], help="behavior JSON to generalized correlators")
    p.add_argument("file")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("cglmp", parents=[common], help="emit the CGLMP inequality")
    p.add_argument("d")
    p.add_argument("--space", choices=["corr", "behavior"], default="corr")
    p.set_defaults(func=cmd_cglmp)

    p = sub.add_parser("enumerate", parents=[common], help="complete facet enumeration")
    p.add_argument("d")
    p.add_argument("--space", choices=["corr", "behavior"], default="corr")
    p.add_argument("--budget", type=float, default=None, metavar="SECONDS")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("classify", parents=[common], help="re-verify and classify a facet list")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("membership", parents=[common], help="local-model decision for a behavior or correlator file")
    p.add_argument("file")
    p.set_defaults(func=cmd_membership)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be positive")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except cglmp_mod.VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
