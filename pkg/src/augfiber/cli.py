"""Command-line front end.

Reports go to stdout as JSON; a one-line human summary per input goes to
stderr.  Exit status: 0 Fibered, 1 NotFibered, 2 Inapplicable, 3 library
error, 4 unreadable input, 64 bad usage.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Callable, Optional

from .augment import augment, find_twist_regions, flatten
from .diagram import PlanarDiagram, components, format_pd, parse_pd, standard_surface, trace_faces
from .errors import AugFiberError, InvalidALD, MalformedCode
from .fibergraph import FIBERED, INAPPLICABLE, NOT_FIBERED, analyze, build_gb
from .freegroup import nielsen_generates
from .generate import random_ald
from .model import FlatAugmentedLink, classify_detailed, rank_counts
from .moves import (ChiLedger, ProgramStep, deplumb, fill_a_circle, fill_b_circles,
                    lift_alternating, make_locally_alternating, replay_program, standard_chi)
from .stallings import build_fstar_filled, verify

EXIT = {FIBERED: 0, NOT_FIBERED: 1, INAPPLICABLE: 2}
EXIT_ERROR, EXIT_INPUT, EXIT_USAGE = 3, 4, 64
SIGN_CONVENTIONS = ("right-negative", "right-positive")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep status 2 free for Inapplicable
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class InputError(Exception):
    pass


# ------------------------------------------------------------------ input

def _read(path: str) -> tuple[str, str]:
    try:
        text = Path(path).read_text() if path != "-" else sys.stdin.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    return text, hashlib.sha256(text.encode()).hexdigest()


def load(text: str, unbounded: Optional[int] = None) -> FlatAugmentedLink | PlanarDiagram:
    """An ALD from JSON, otherwise a diagram from PD text."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"bad JSON: {exc}") from exc
        if isinstance(data, dict) and "ald" in data:
            data = data["ald"]
        return FlatAugmentedLink.from_json(data)
    d = parse_pd(text)
    if unbounded is not None:
        faces = trace_faces(d)
        if not 0 <= unbounded < len(faces):
            raise MalformedCode(f"no face {unbounded}; the diagram has {len(faces)}")
        d = replace(d, unbounded=faces[unbounded].boundary[0])
    return d


def _need_ald(obj) -> FlatAugmentedLink:
    if not isinstance(obj, FlatAugmentedLink):
        raise InvalidALD("this command expects an ALD JSON file")
    return obj


def _need_pd(obj) -> PlanarDiagram:
    if not isinstance(obj, PlanarDiagram):
        raise MalformedCode("this command expects a PD diagram")
    return obj


def _signed(instructions, convention: str):
    if convention == "right-positive":
        return [replace(i, n=-i.n) for i in instructions]
    return instructions


def _diagram_stats(d: PlanarDiagram) -> dict:
    faces, stats = standard_surface(d)
    return {"crossings": d.n_crossings, "components": len(components(d)),
            "circles": len(d.circles), "faces": len(faces), "chi": stats.chi,
            "orientable": stats.orientable}


# --------------------------------------------------------------- commands

class Timer:
    def __init__(self):
        self.timings: dict[str, float] = {}

    def run(self, name: str, fn: Callable, *args, **kw):
        t = time.perf_counter()
        try:
            return fn(*args, **kw)
        finally:
            self.timings[name] = round(time.perf_counter() - t, 6)


def to_ald(obj, opts, report: dict, timer: Timer) -> FlatAugmentedLink:
    """Run the diagram stages (augment, flatten, classify) when given a diagram."""
    if isinstance(obj, FlatAugmentedLink):
        return obj
    d = obj
    stages = report["stages"]
    stages["diagram"] = _diagram_stats(d)
    if not d.circles:
        regions = timer.run("augment", find_twist_regions, d)
        d = timer.run("augment", augment, d, regions)
        stages["augment"] = {"twist_regions": [list(r.crossings) for r in regions]}
    if any(c.twist for c in d.circles):
        d, instr = timer.run("flatten", flatten, d)
        stages["flatten"] = {"instructions": [i.to_json() for i in _signed(instr, opts.sign_convention)],
                             "pd": format_pd(d)}
    cls = timer.run("classify", classify_detailed, d)
    stages["flat_diagram"] = _diagram_stats(d)
    return cls.ald


def cmd_analyze(path: str, opts) -> dict:
    text, digest = _read(path)
    report = {"input": path, "digest": digest, "stages": {}}
    timer = Timer()
    ald = to_ald(load(text, opts.unbounded), opts, report, timer)
    report["stages"]["ald"] = ald.to_json()
    report["stages"]["counts"] = rank_counts(ald)
    report["stages"]["fiber_graph"] = {"vertices": len(ald.c_regions), "edges": len(ald.b_circles)}
    v = timer.run("analyze", analyze, ald)
    report["outcome"] = v.outcome
    report["verdict"] = v.to_json()
    if opts.verify:
        o = timer.run("verify", verify, ald)
        report["oracle"] = o.to_json(with_trace=opts.emit_trace is not None)
        report["oracle_agrees"] = o.outcome == v.outcome
    report["timings"] = timer.timings
    return report


def cmd_verify(path: str, opts) -> dict:
    text, digest = _read(path)
    report = {"input": path, "digest": digest, "stages": {}}
    timer = Timer()
    ald = to_ald(load(text, opts.unbounded), opts, report, timer)
    o = timer.run("verify", verify, ald)
    report["outcome"] = o.outcome
    report["oracle"] = o.to_json(with_trace=opts.emit_trace is not None)
    report["timings"] = timer.timings
    return report


def cmd_augment(path: str, opts) -> dict:
    text, digest = _read(path)
    d = _need_pd(load(text, opts.unbounded))
    regions = find_twist_regions(d)
    out = augment(d, regions)
    return {"input": path, "digest": digest,
            "twist_regions": [list(r.crossings) for r in regions], "pd": format_pd(out)}


def cmd_flatten(path: str, opts) -> dict:
    text, digest = _read(path)
    d = _need_pd(load(text, opts.unbounded))
    if not d.circles:
        d = augment(d)
    flat, instr = flatten(d)
    return {"input": path, "digest": digest, "pd": format_pd(flat),
            "instructions": [i.to_json() for i in _signed(instr, opts.sign_convention)]}


def cmd_deplumb(path: str, opts) -> dict:
    text, digest = _read(path)
    ald = _need_ald(load(text))
    ledger = ChiLedger(standard_chi(ald))
    out, records = deplumb(ald, ledger)
    return {"input": path, "digest": digest, "ald": out.to_json(),
            "hopf": [r.to_json() for r in records], "chi": ledger.to_json()}


def _program(opts, ald: FlatAugmentedLink) -> list[ProgramStep]:
    if opts.program:
        data = json.loads(Path(opts.program).read_text())
        return [ProgramStep.from_json(s) for s in data]
    return ([ProgramStep(a.id, "A", opts.sign) for a in ald.a_circles] +
            [ProgramStep(b.id, "B", opts.sign) for b in ald.b_circles])


def cmd_fill(path: str, opts) -> dict:
    """Apply +-1 fillings: A-circles one by one, then B-circles together."""
    text, digest = _read(path)
    ald = _need_ald(load(text))
    ledger = ChiLedger(standard_chi(ald))
    program = _program(opts, ald)
    report = {"input": path, "digest": digest,
              "program": [s.to_json() for s in program], "moves": []}
    for s in program:
        if s.kind == "A":
            rec = fill_a_circle(ald, s.circle, s.sign, ledger)
            ald = rec.ald
            report["moves"].append({"fill_a": s.circle, "sign": s.sign})
    ald, records = deplumb(ald, ledger)
    report["moves"] += [{"deplumb": r.circle} for r in records]
    b_steps = [s for s in program if s.kind == "B"]
    k = fill_b_circles(ald, [s.circle for s in b_steps], [s.sign for s in b_steps], ledger)
    report["filled"] = k.to_json()
    report["chi"] = ledger.to_json()
    if not k.remaining:
        m = build_fstar_filled(k)
        ok, trace = nielsen_generates(m.image_tuple(), m.rank, m.codomain)
        report["fstar"] = m.to_json()
        report["outcome"] = FIBERED if ok else NOT_FIBERED
        if opts.emit_trace is not None:
            report["trace"] = trace.to_json()
    else:
        report["outcome"] = analyze(ald).outcome
    return report


def cmd_lift(path: str, opts) -> dict:
    text, digest = _read(path)
    ald = _need_ald(load(text))
    if opts.from_flat:
        ald = make_locally_alternating(ald)
    out, program = lift_alternating(ald, opts.sign)
    v = analyze(out)
    return {"input": path, "digest": digest, "ald": out.to_json(),
            "program": [s.to_json() for s in program], "outcome": v.outcome,
            "verdict": v.to_json(), "replays": replay_program(out, program) == ald}


def cmd_export_dot(path: str, opts) -> dict:
    text, digest = _read(path)
    report = {"input": path, "digest": digest, "stages": {}}
    ald = to_ald(load(text, opts.unbounded), opts, report, Timer())
    return {"input": path, "digest": digest, "dot": build_gb(ald).to_dot()}


COMMANDS = {
    "analyze": cmd_analyze, "verify": cmd_verify, "augment": cmd_augment,
    "flatten": cmd_flatten, "fill": cmd_fill, "deplumb": cmd_deplumb,
    "lift": cmd_lift, "export-dot": cmd_export_dot,
}


def _run_one(args: tuple[str, str, argparse.Namespace]) -> tuple[dict, int]:
    name, path, opts = args
    try:
        report = COMMANDS[name](path, opts)
    except AugFiberError as exc:
        return {"input": path, "error": {"code": exc.code, "message": str(exc)}}, EXIT_ERROR
    except (InputError, json.JSONDecodeError, OSError) as exc:
        return {"input": path, "error": {"code": "cli.InputError", "message": str(exc)}}, EXIT_INPUT
    return report, EXIT.get(report.get("outcome"), 0)


def _summary(report: dict) -> str:
    if "error" in report:
        return f"{report['input']}: error {report['error']['code']}: {report['error']['message']}"
    bits = [report.get("outcome", "ok")]
    if "oracle_agrees" in report:
        bits.append("oracle agrees" if report["oracle_agrees"] else "ORACLE DISAGREES")
    return f"{report['input']}: " + ", ".join(bits)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="augfiber", description="Fiberedness of flat augmented links.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, many=True):
        sp.add_argument("paths", nargs="+" if many else 1, metavar="PATH",
                        help="ALD JSON or PD text file ('-' for stdin)")
        sp.add_argument("--unbounded", type=int, metavar="FACE-ID",
                        help="face id (trace order) of a PD input to treat as unbounded")
        sp.add_argument("--sign-convention", choices=SIGN_CONVENTIONS, default="right-negative",
                        help="sign of n for a removed right-handed full twist")
        sp.add_argument("--jobs", type=int, default=1, help="process inputs in parallel")
        sp.add_argument("--emit-trace", metavar="FILE",
                        help="write Nielsen traces as JSON to FILE")
        sp.add_argument("--verify", action="store_true",
                        help="also run the free-group oracle and report agreement")

    for name in ("analyze", "verify", "augment", "flatten", "deplumb", "export-dot"):
        common(sub.add_parser(name))
    for name in ("fill", "lift"):
        sp = sub.add_parser(name)
        common(sp)
        sp.add_argument("--sign", type=int, choices=(1, -1), default=1,
                        help="filling sign for generated program steps")
        if name == "fill":
            sp.add_argument("--program", metavar="FILE",
                            help="JSON list of {circle, kind, sign}; default fills everything")
        else:
            sp.add_argument("--from-flat", action="store_true",
                            help="make a flat ALD locally alternating before lifting")

    r = sub.add_parser("random")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--size", type=int, default=6, help="maximum number of C-regions")
    r.add_argument("--tree", choices=("auto", "yes", "no"), default="auto")
    r.add_argument("--connected", action="store_true",
                   help="add A-circles until regions and circles form one piece")
    r.add_argument("--alternating", action="store_true",
                   help="emit the locally alternating version")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    opts = build_parser().parse_args(argv)
    if opts.command == "random":
        tree = {"auto": None, "yes": True, "no": False}[opts.tree]
        ald = random_ald(opts.seed, opts.size, tree=tree, connected=opts.connected)
        if opts.alternating:
            ald = make_locally_alternating(ald)
        sys.stdout.write(ald.dumps())
        return 0
    jobs = [(opts.command, p, opts) for p in opts.paths]
    if opts.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=opts.jobs) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    reports = [r for r, _ in results]
    for r in reports:
        print(_summary(r), file=sys.stderr)
    if opts.emit_trace:
        traces = {r["input"]: (r.get("oracle", {}).get("trace") or r.get("trace")) for r in reports}
        Path(opts.emit_trace).write_text(json.dumps(traces, indent=2) + "\n")
    out = reports[0] if len(reports) == 1 else {"reports": reports}
    sys.stdout.write(json.dumps(out, indent=2, sort_keys=True) + "\n")
    codes = [c for _, c in results]
    errors = [c for c in codes if c > 2]
    return max(errors) if errors else max(codes)


if __name__ == "__main__":
    sys.exit(main())
