"""``gorlab`` command line."""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

from . import __version__
from .algebra import AlgebraError, CdgaPresentation, terms_str
from .chain import GradedDimensionVector
from .expr import ParseError
from .invariants import (
    example_fiber_homology,
    g_invariant,
    gorenstein,
    pd_check_presentation,
    t_invariant,
    theorem2_report,
    theorem4_report,
)
from .modules import tor, trivial_module
from .parser import format_algebra, parse_algebra
from .presets import preset_text
from .sullivan import LambdaExtension, acyclic_closure, minimal_model

COMMANDS = (
    "cohomology",
    "check",
    "pd-check",
    "minimal-model",
    "acyclic-closure",
    "tor",
    "tcal",
    "gcal",
    "gorenstein",
    "theorem2",
    "theorem4",
    "example-fiber",
)


class InputError(Exception):
    pass


def _default_max_degree() -> int:
    raw = os.environ.get("GORLAB_MAX_DEGREE")
    if raw is None:
        return 12
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"GORLAB_MAX_DEGREE must be an integer, got {raw!r}") from None


def _read_input(src: str) -> str:
    if src.startswith("@"):
        try:
            return preset_text(src[1:])
        except KeyError as e:
            raise InputError(e.args[0]) from None
    try:
        with open(src, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {src}: {e.strerror}") from None


def _dims_lines(label: str, v: GradedDimensionVector) -> list[str]:
    out = [f"{label} (certified on degrees {v.lo}..{v.hi}; other degrees uncertified):"]
    shown = [n for n in range(v.lo, v.hi + 1) if v[n]]
    if not shown:
        out.append("  0 in every certified degree")
    for n in shown:
        out.append(f"  degree {n}: {v[n]}")
    return out


def _need(obj, kind, command):
    if not isinstance(obj, kind):
        want = "an extension (block-tagged) file" if kind is LambdaExtension else "an algebra file"
        raise InputError(f"{command} needs {want}")
    return obj


# -- commands: each returns (payload, text lines, warnings) ------------------------------------


def cmd_cohomology(R, args):
    res = R.cohomology()
    payload = {"dims": res.dims.to_json()}
    lines = _dims_lines("H", res.dims)
    if args.show_bases:
        payload["bases"] = {str(n): [str(r) for r in reps] for n, reps in sorted(res.reps.items()) if reps}
        for n, reps in sorted(res.reps.items()):
            if reps:
                lines.append(f"  basis H^{n}: " + ", ".join(f"[{r}]" for r in reps))
    return payload, lines, []


def cmd_check(R, args):
    if isinstance(R, LambdaExtension):
        payload = {
            "kind": "extension",
            "base": list(R.base.names),
            "fiber": [g.name for g in R.fiber_generators],
            "sullivan": R.is_sullivan,
            "d_squared": R.total.check_d_squared()["ok"],
        }
    else:
        payload = {
            "kind": "algebra",
            "generators": [[g.name, g.degree] for g in R.generators],
            "stages": list(R.stages),
            "relations": len(R.relations),
            "d_squared": R.check_d_squared()["ok"],
        }
    payload["canonical"] = format_algebra(R)
    lines = [f"{k}: {v}" for k, v in payload.items() if k != "canonical"]
    lines += ["canonical form:"] + ["  " + l for l in payload["canonical"].splitlines()]
    return payload, lines, []


def cmd_pd_check(R, args):
    rep = pd_check_presentation(R)
    lines = [f"Poincaré duality: {rep.verdict}"]
    if rep.formal_dimension is not None:
        lines.append(f"formal dimension: {rep.formal_dimension}, fundamental class {rep.fundamental_class}")
    else:
        top = max(n for n, d in rep.dims.items() if d)
        lines.append(f"top cohomology H^{top} has dimension {rep.dims[top]}, so there is no fundamental class")
        return rep.to_json(), lines, []
    for k, r, a, b in rep.pairing_ranks:
        lines.append(f"  pairing H^{k} x H^{rep.formal_dimension - k}: rank {r} (dims {a}, {b})")
    return rep.to_json(), lines, []


def cmd_minimal_model(R, args):
    mm = minimal_model(R, args.max_degree)
    M = mm.model
    gens = [{"name": g.name, "degree": g.degree, "d": terms_str(M._raw_d.get(i, {}), M.names)} for i, g in enumerate(M.generators)]
    payload = {"generators": gens, "verified": mm.verified, "quasi_iso_through": mm.quasi_iso_through, "minimal": mm.is_minimal()}
    lines = [f"minimal model (quasi-isomorphism through degree {mm.quasi_iso_through}, verified {mm.verified}):"]
    lines += [f"  {g['name']} : {g['degree']}   d = {g['d']}" for g in gens]
    return payload, lines, []


def cmd_acyclic_closure(R, args):
    if not isinstance(R, CdgaPresentation):
        R = _need(R, CdgaPresentation, "acyclic-closure")
    clo = acyclic_closure(R, top=args.max_degree - 1, word_cap=args.word_cap)
    gens = [{"name": n, "degree": d, "d": clo.differential_text(i)} for i, (n, d) in enumerate(clo.generators)]
    payload = {
        "generators": gens,
        "verified_through": clo.verified_through,
        "stable": clo.stable,
        "word_cap": clo.word_cap,
    }
    lines = [f"acyclic closure: H = Q verified through degree {clo.verified_through}, stable {clo.stable}"]
    lines += [f"  {g['name']} : {g['degree']}   d = {g['d']}" for g in gens]
    warnings = [] if clo.stable else ["closure homology not stable under raising the word cap"]
    return payload, lines, warnings


def _finite(R, args):
    return R.truncate(args.max_degree)


def cmd_tor(R, args):
    F = _finite(R, args)
    v = tor(trivial_module(F), args.max_degree - 1, args.word_cap)
    return {"dims": v.to_json()}, _dims_lines("Tor(Q, Q)", v), []


def cmd_tcal(R, args):
    rep = t_invariant(R, args.max_degree, args.word_cap)
    payload = {
        "dims": rep.resolution.to_json(),
        "closure_route": rep.closure.to_json(),
        "routes_agree_on": list(rep.common),
    }
    lines = _dims_lines("T", rep.resolution)
    lines.append(f"closure route agrees on degrees {rep.common[0]}..{rep.common[1]}")
    warnings = [] if rep.closure.stable else ["closure route not stable under raising the word cap"]
    return payload, lines, warnings


def cmd_gcal(R, args):
    v = g_invariant(R, args.max_degree, args.word_cap)
    warnings = [] if v.stable else ["not stable under raising the word cap"]
    return {"dims": v.to_json()}, _dims_lines("G", v), warnings


def cmd_gorenstein(R, args):
    rep = gorenstein(R, args.max_degree, args.word_cap)
    lines = [f"gorenstein: {str(rep.gorenstein).lower()}"]
    if rep.degree is not None:
        lines.append(f"gorenstein degree: {rep.degree}")
    lines += _dims_lines("T", rep.t) + _dims_lines("G", rep.g)
    return rep.to_json(), lines, []


def cmd_theorem2(R, args):
    rep = theorem2_report(R, args.max_degree, args.word_cap)
    i, ii, iii = rep.conditions
    lines = [
        f"dim T(R) on degrees {rep.t.lo}..{rep.t.hi} = {rep.t_total}; equals 1: {i}",
        f"dim T(H(R)) on degrees {rep.t_cohomology.lo}..{rep.t_cohomology.hi} = {rep.t_cohomology_total}; equals 1: {ii}",
        f"H(R) satisfies Poincaré duality: {iii}",
        "all three agree",
    ]
    return rep.to_json(), lines, []


def cmd_theorem4(E, args):
    E = _need(E, LambdaExtension, "theorem4")
    rep = theorem4_report(E, args.max_degree, args.word_cap)
    b, f, s = rep.gorenstein
    lines = _dims_lines("T(base)", rep.t_base) + _dims_lines("T(fiber)", rep.t_fiber) + _dims_lines("T(total)", rep.t_total)
    lines.append(f"convolution identity verified on degrees {rep.checked[0]}..{rep.checked[-1]}" if rep.checked else "no degree could be checked")
    lines.append(f"gorenstein: base {b}, fiber {f}, total {s}")
    return rep.to_json(), lines, []


def cmd_example_fiber(_, args):
    rep = example_fiber_homology(args.word_cap, min(args.max_degree, 8))
    lines = _dims_lines(f"H of the fiber model, word cap {args.word_cap}", rep.dims)
    for n, cs in sorted(rep.classes.items()):
        lines.append(f"  classes in degree {n}: " + ", ".join(cs))
    return rep.to_json(), lines, list(rep.warnings)


HANDLERS = {
    "cohomology": cmd_cohomology,
    "check": cmd_check,
    "pd-check": cmd_pd_check,
    "minimal-model": cmd_minimal_model,
    "acyclic-closure": cmd_acyclic_closure,
    "tor": cmd_tor,
    "tcal": cmd_tcal,
    "gcal": cmd_gcal,
    "gorenstein": cmd_gorenstein,
    "theorem2": cmd_theorem2,
    "theorem4": cmd_theorem4,
    "example-fiber": cmd_example_fiber,
}
ALGEBRA_ONLY = {"cohomology", "pd-check", "minimal-model", "tor", "tcal", "gcal", "gorenstein", "theorem2"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gorlab", description="Exact rational CDGA computations.")
    p.add_argument("--version", action="version", version=f"gorlab {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", nargs="?", help="presentation file, or @preset")
    p.add_argument("--max-degree", type=int, default=None, help="degree window D (default 12, or $GORLAB_MAX_DEGREE)")
    p.add_argument("--word-cap", type=int, default=6, help="word-length cap L for degree-0 directions (default 6)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--show-bases", action="store_true", help="print cohomology representatives")
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    report = {"command": args.command, "input": args.input}
    try:
        if args.max_degree is None:
            args.max_degree = _default_max_degree()
        if args.max_degree < 2 or args.word_cap < 0:
            raise InputError("--max-degree must be >= 2 and --word-cap >= 0")
        obj = None
        if args.command != "example-fiber":
            if args.input is None:
                raise InputError(f"{args.command} needs an input file")
            text = _read_input(args.input)
            report["input_sha256"] = hashlib.sha256(text.encode()).hexdigest()
            obj = parse_algebra(text, max_degree=args.max_degree, word_cap=args.word_cap)
            if args.command in ALGEBRA_ONLY:
                obj = _need(obj, CdgaPresentation, args.command)
        report["window"] = {"max_degree": args.max_degree, "word_cap": args.word_cap}
        payload, lines, warnings = HANDLERS[args.command](obj, args)
        code = 0
        report["result"] = payload
        report["warnings"] = warnings
    except (InputError, ParseError, AlgebraError) as e:
        code = 1
        report["error"] = {"kind": type(e).__name__, "message": str(e)}
        lines, warnings = [], []
    except AssertionError as e:
        code = 2
        report["error"] = {"kind": type(e).__name__, "message": str(e)}
        lines, warnings = [], []
    if args.json:
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    elif code:
        print(f"error ({report['error']['kind']}): {report['error']['message']}", file=sys.stderr)
    else:
        for l in lines:
            out.write(l + "\n")
        for w in warnings:
            out.write(f"warning: {w}\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
