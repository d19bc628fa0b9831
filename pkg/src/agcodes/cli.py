"""Command-line harness: build code artifacts with manifests, verify the
recorded guarantees from scratch, tabulate bounds, and replay manifests
bit-for-bit.

Exit codes: 0 success, 2 usage error (argparse), 3 precondition violation,
4 verification failure (a mathematical guarantee did not hold, or a replay
diverged). All randomness flows from the --seed flag through Python's
Mersenne Twister (random.Random), so every artifact is reproducible from
its manifest. Output files are written atomically (temp file + rename).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time

from . import bounds
from .codes import build_goppa, code_from_text, code_to_text, exact_min_distance
from .combined import CombinedParams, build_combined
from .curves import build_curve, default_eval_points
from .errors import PreconditionError, VerificationError
from .field import make_field_q
from .sections import canonical_twists, enumerate_sections, multiplicity_census
from .xing import XingParams, build_xing, search_centers

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_VERIFICATION = 4


def _write_atomic(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-agcodes-")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _resolve_curve(args):
    field = make_field_q(args.q)
    return build_curve(args.curve, field)


def _resolve_points(curve, D, spec: str | None):
    if spec is None:
        return default_eval_points(curve, D)
    idx = [int(t) for t in spec.split(",") if t.strip() != ""]
    return tuple(curve.points[i] for i in idx)


def _manifest(command: str, params: dict, extra: dict, artifact: str, text: str,
              elapsed: float, context: dict | None = None) -> str:
    doc = {
        "command": command,
        "params": params,
        "results": extra,
        "artifact": artifact,
        "artifact_sha256": _sha256(text),
        "timings": {"build_seconds": round(elapsed, 6)},
    }
    if context:
        doc["context"] = context
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _curve_context(curve, points=None) -> dict:
    ctx = {
        "field": {
            "p": curve.field.p,
            "alpha": curve.field.degree,
            "modulus": list(curve.field.modulus),
        },
        "point_order": ";".join(p.serialize() for p in curve.points),
    }
    if points is not None:
        ctx["eval_points"] = ";".join(p.serialize() for p in points)
    return ctx


def _emit(args, command: str, params: dict, extra: dict, artifact_name: str, text: str,
          elapsed: float, context: dict | None = None):
    out_dir = args.out
    os.makedirs(out_dir, exist_ok=True)
    artifact_path = os.path.join(out_dir, artifact_name)
    _write_atomic(artifact_path, text)
    manifest = _manifest(command, params, extra, artifact_name, text, elapsed, context)
    _write_atomic(os.path.join(out_dir, "manifest.json"), manifest)
    print(f"wrote {artifact_path}")
    for k, v in extra.items():
        print(f"  {k}: {v}")


# ---------------------------------------------------------------------------
# Subcommand bodies. Each returns an exit code.

def cmd_field_selftest(args) -> int:
    import random

    for q in args.q or [2, 3, 4, 5, 8, 9, 16, 25, 49]:
        field = make_field_q(q)
        rng = random.Random(args.seed)
        for _ in range(200):
            a = rng.randrange(q)
            b = rng.randrange(q)
            c = rng.randrange(q)
            if field.add(field.mul(a, b), field.mul(a, c)) != field.mul(a, field.add(b, c)):
                print(f"distributivity failed in GF({q})")
                return EXIT_VERIFICATION
        for a in range(q):
            if field.pow(a, q) != a:
                print(f"Frobenius fixed-point failed in GF({q})")
                return EXIT_VERIFICATION
        print(f"GF({q}) ok (modulus {','.join(str(c) for c in field.modulus)})")
    return EXIT_OK


def cmd_curve_info(args) -> int:
    curve = _resolve_curve(args)
    info = curve.info()
    info["points"] = ";".join(p.serialize() for p in curve.points)
    print(json.dumps(info, indent=2, sort_keys=True))
    return EXIT_OK


def _build_params(args, keys) -> dict:
    return {k: getattr(args, k) for k in keys}


def cmd_goppa_build(args) -> int:
    t0 = time.perf_counter()
    curve = _resolve_curve(args)
    D = curve.parse_divisor(args.divisor)
    points = _resolve_points(curve, D, args.points)
    code = build_goppa(curve, D, points)
    text = code_to_text(code)
    extra = {
        "n": code.length,
        "dim": code.metadata["dim"],
        "words": code.size,
        "claimed_distance": code.metadata["claimed_distance"],
        "measured_distance": code.metadata["measured_distance"],
    }
    params = _build_params(args, ("q", "curve", "divisor", "points"))
    _emit(args, "goppa build", params, extra, "goppa_code.txt", text,
          time.perf_counter() - t0, context=_curve_context(curve, points))
    return EXIT_OK


def cmd_xing_build(args) -> int:
    t0 = time.perf_counter()
    curve = _resolve_curve(args)
    D = curve.parse_divisor(args.divisor)
    points = _resolve_points(curve, D, args.points)
    params = XingParams(
        m=args.m,
        radii=tuple(int(t) for t in args.radii.split(",")),
        strategy=args.strategy,
        seed=args.seed,
        trials=args.trials,
    )
    build = build_xing(curve, D, params, points)
    text = code_to_text(build.code)
    extra = {
        "n": build.code.length,
        "functions": build.code.metadata["n_functions"],
        "survivors": build.search.survivor_count,
        "code_words": build.code.size,
        "average": build.code.metadata["average"],
        "claimed_distance": build.claimed_distance,
        "measured_distance": build.code.metadata["measured_distance"],
    }
    cli_params = _build_params(
        args, ("q", "curve", "divisor", "m", "radii", "strategy", "seed", "trials", "points")
    )
    _emit(args, "xing build", cli_params, extra, "xing_code.txt", text,
          time.perf_counter() - t0, context=_curve_context(curve, points))
    return EXIT_OK


def cmd_sections_enumerate(args) -> int:
    t0 = time.perf_counter()
    field = make_field_q(args.q)
    curve = build_curve("p1", field)
    D = curve.parse_divisor(args.divisor)
    sections = enumerate_sections(curve, D, args.h)
    q, n = field.q, curve.n_points
    reference = ((q + 1) / q) ** n * q ** (2 * args.h)
    lines = [f"# sections of height <= {args.h} for divisor {D.serialize()} over GF({q})"]
    lines += [s.f.serialize() + f" height={s.height}" for s in sections]
    text = "\n".join(lines) + "\n"
    extra = {
        "count": len(sections),
        "count_reference": f"{reference:.6g}",
        "count_ratio": f"{len(sections) / reference:.6g}",
    }
    params = _build_params(args, ("q", "divisor", "h"))
    _emit(args, "sections enumerate", params, extra, "sections.txt", text,
          time.perf_counter() - t0, context=_curve_context(curve))
    return EXIT_OK


def cmd_sections_proposition(args) -> int:
    import random

    field = make_field_q(args.q)
    curve = build_curve("p1", field)
    D = curve.parse_divisor(args.divisor)
    twists = canonical_twists(curve, D)
    h_each = args.h_max // 2
    sections = [s for s in enumerate_sections(curve, D, h_each)]
    rng = random.Random(args.seed)
    checked = 0
    while checked < args.pairs:
        a = sections[rng.randrange(len(sections))]
        b = sections[rng.randrange(len(sections))]
        if a.f == b.f:
            continue
        rows = multiplicity_census(curve, a, b, twists)
        total = sum(r["m"] * r["place"].degree for r in rows)
        mu_total = sum((r["mu"] + r["mu2"]) * r["place"].degree for r in rows)
        if total != a.height + b.height:
            print(f"multiplicity total {total} != {a.height} + {b.height}")
            return EXIT_VERIFICATION
        if mu_total != a.height + b.height:
            print("pole-count identity failed")
            return EXIT_VERIFICATION
        checked += 1
    print(f"proposition verified on {checked} pairs (q={args.q}, h<= {h_each} each)")
    return EXIT_OK


def cmd_combined_build(args) -> int:
    t0 = time.perf_counter()
    field = make_field_q(args.q)
    curve = build_curve("p1", field)
    D = curve.parse_divisor(args.divisor)
    points = tuple(curve.points) if args.points is None else _resolve_points(curve, D, args.points)
    params = CombinedParams(
        h=args.h, s0=args.s0, d0=args.d0,
        strategy=args.strategy, seed=args.seed, trials=args.trials,
    )
    result = build_combined(curve, D, params, points)
    text = code_to_text(result.code)
    extra = {
        "n": result.code.length,
        "sections": result.n_sections,
        "survivors": len(result.survivors),
        "code_words": result.code.size,
        "average": result.code.metadata["average"],
        "claimed_distance": result.claimed_distance,
        "measured_distance": result.code.metadata["measured_distance"],
    }
    cli_params = _build_params(
        args, ("q", "divisor", "h", "s0", "d0", "strategy", "seed", "trials", "points")
    )
    _emit(args, "combined build", cli_params, extra, "combined_code.txt", text,
          time.perf_counter() - t0, context=_curve_context(curve, points))
    return EXIT_OK


def cmd_bounds_table(args) -> int:
    t0 = time.perf_counter()
    text = bounds.frontier_csv(args.q, args.grid, args.m)
    q0 = bounds.sqrt_if_square(args.q)
    extra = {"rows": args.grid, "reference_ratio": q0 - 1}
    params = _build_params(args, ("q", "grid", "m"))
    _emit(args, "bounds table", params, extra, f"frontier_q{args.q}.csv", text,
          time.perf_counter() - t0)
    return EXIT_OK


def cmd_bounds_crossing(args) -> int:
    result = bounds.gv_crossing(args.q)
    argmax, peak = bounds.entropy_gap_max(args.q)
    print(f"q={args.q} crossing={'true' if result else 'false'} "
          f"peak={float(peak):.9f} at delta={float(argmax):.9f}")
    return EXIT_OK


def cmd_verify_distance(args) -> int:
    with open(args.code) as fh:
        code = code_from_text(fh.read())
    claimed = code.metadata.get("claimed_distance")
    code.metadata["linear"] = False  # recompute pairwise, trusting nothing
    measured = exact_min_distance(code)
    print(f"words={code.size} claimed={claimed} measured={measured}")
    if code.size >= 2 and claimed is not None and measured < claimed:
        print("distance guarantee FAILED")
        return EXIT_VERIFICATION
    print("distance guarantee holds")
    return EXIT_OK


def cmd_verify_averaging(args) -> int:
    field = make_field_q(args.q)
    curve = build_curve("p1", field)
    D = curve.parse_divisor(args.divisor)
    if args.kind == "xing":
        params = XingParams(
            m=args.m,
            radii=tuple(int(t) for t in args.radii.split(",")),
            strategy="exhaustive",
        )
        res = search_centers(curve, D, params, census=True)
        total, expected = res.census_total, res.expected_census
    else:
        from .combined import averaging_census

        total, expected = averaging_census(curve, D, args.h, args.s0)
    print(f"census total={total} expected={expected}")
    if total != expected:
        print("averaging identity FAILED")
        return EXIT_VERIFICATION
    print("averaging identity holds")
    return EXIT_OK


def cmd_replay_manifest(args) -> int:
    with open(args.manifest) as fh:
        doc = json.load(fh)
    command = doc["command"]
    params = doc["params"]
    out_dir = args.out or tempfile.mkdtemp(prefix="agcodes-replay-")
    argv = command.split()
    for k, v in params.items():
        if v is None:
            continue
        argv += [f"--{k.replace('_', '-')}", str(v)]
    argv += ["--out", out_dir]
    rc = main(argv)
    if rc != EXIT_OK:
        return rc
    artifact = os.path.join(out_dir, doc["artifact"])
    with open(artifact) as fh:
        text = fh.read()
    if _sha256(text) != doc["artifact_sha256"]:
        print("replay diverged from the recorded artifact")
        return EXIT_VERIFICATION
    print(f"replay identical: {artifact}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="agcodes", description=__doc__)
    sub = ap.add_subparsers(dest="group", required=True)

    def add(group_parser, name, fn, **kwargs):
        p = group_parser.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        return p

    field_g = sub.add_parser("field").add_subparsers(dest="sub", required=True)
    p = add(field_g, "selftest", cmd_field_selftest)
    p.add_argument("--q", type=int, action="append")
    p.add_argument("--seed", type=int, default=0)

    curve_g = sub.add_parser("curve").add_subparsers(dest="sub", required=True)
    p = add(curve_g, "info", cmd_curve_info)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--curve", choices=("p1", "hermitian"), default="p1")

    goppa_g = sub.add_parser("goppa").add_subparsers(dest="sub", required=True)
    p = add(goppa_g, "build", cmd_goppa_build)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--curve", choices=("p1", "hermitian"), default="p1")
    p.add_argument("--divisor", required=True)
    p.add_argument("--points", default=None)
    p.add_argument("--out", default="artifacts")

    xing_g = sub.add_parser("xing").add_subparsers(dest="sub", required=True)
    p = add(xing_g, "build", cmd_xing_build)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--curve", choices=("p1", "hermitian"), default="p1")
    p.add_argument("--divisor", required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--radii", required=True)
    p.add_argument("--strategy", choices=("exhaustive", "random", "greedy"),
                   default="exhaustive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=64)
    p.add_argument("--points", default=None)
    p.add_argument("--out", default="artifacts")

    sections_g = sub.add_parser("sections").add_subparsers(dest="sub", required=True)
    p = add(sections_g, "enumerate", cmd_sections_enumerate)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--divisor", default="0")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--out", default="artifacts")
    p = add(sections_g, "proposition", cmd_sections_proposition)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--divisor", default="0")
    p.add_argument("--h-max", type=int, default=6)
    p.add_argument("--pairs", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)

    combined_g = sub.add_parser("combined").add_subparsers(dest="sub", required=True)
    p = add(combined_g, "build", cmd_combined_build)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--divisor", default="0")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--s0", type=int, required=True)
    p.add_argument("--d0", type=int, required=True)
    p.add_argument("--strategy", choices=("exhaustive", "random", "greedy"),
                   default="exhaustive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=64)
    p.add_argument("--points", default=None)
    p.add_argument("--out", default="artifacts")

    bounds_g = sub.add_parser("bounds").add_subparsers(dest="sub", required=True)
    p = add(bounds_g, "table", cmd_bounds_table)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--grid", type=int, default=99)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--out", default="artifacts")
    p = add(bounds_g, "crossing", cmd_bounds_crossing)
    p.add_argument("--q", type=int, required=True)

    verify_g = sub.add_parser("verify").add_subparsers(dest="sub", required=True)
    p = add(verify_g, "distance", cmd_verify_distance)
    p.add_argument("--code", required=True)
    p = add(verify_g, "averaging", cmd_verify_averaging)
    p.add_argument("--kind", choices=("xing", "combined"), required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--divisor", default="0")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--radii", default="1")
    p.add_argument("--h", type=int, default=1)
    p.add_argument("--s0", type=int, default=1)
    p.add_argument("--d0", type=int, default=1)

    replay_g = sub.add_parser("replay").add_subparsers(dest="sub", required=True)
    p = add(replay_g, "manifest", cmd_replay_manifest)
    p.add_argument("manifest")
    p.add_argument("--out", default=None)

    return ap


def main(argv=None) -> int:
    ap = _parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
