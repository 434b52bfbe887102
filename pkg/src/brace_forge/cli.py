"""Command-line front end.

Exit status: 0 when every requested verdict holds, 1 when one fails (its
witness is printed), 2 for usage and file-format errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings

import numpy as np

from . import io
from .acceptance import run_acceptance
from .braces import Brace
from .errors import AxiomError, BraceForgeError, InternalConsistencyError
from .groups import validate_group
from .heisenberg import LABELS, LinearMap3, build_heisenberg_brace, census, classify_linear_rbo, linear_to_carrier
from .matched_pairs import MatchedPairBraces, double_brace, validate_mp_braces
from .post import make_post_brace, validate_post_brace
from .report import Report
from .rota_baxter import (
    adjoint_action,
    enumerate_relative_rbos,
    factorization_data,
    factorizations,
    factorize,
    make_semi_trivial_action,
    make_two_sided_rbo,
    trivial_action,
    validate_two_sided_rbo,
)
from .ybe import (
    derived_solution,
    drinfeld_witness,
    flip,
    omega_from_lambda,
    post_brace_solutions,
    solution_from_brace,
)

OK, FAILED, USAGE = 0, 1, 2


class Output:
    """Plain lines, or one JSON record per verdict/message with --json."""

    def __init__(self, as_json: bool = False, timing: bool = False, stream=None):
        self.as_json = as_json
        self.timing = timing
        self.stream = stream or sys.stdout

    def _write(self, text: str) -> None:
        print(text, file=self.stream)

    def report(self, report: Report) -> bool:
        if self.as_json:
            for record in report.records():
                self._write(record)
        else:
            for line in report.lines(timing=self.timing):
                self._write(line)
        return report.ok

    def line(self, text: str, **fields) -> None:
        if self.as_json:
            self._write(json.dumps({"message": text, **fields}, sort_keys=True))
        else:
            self._write(text)


def _verdict(ok: bool) -> str:
    return "ok" if ok else "FAIL"


def _load_brace(path: str, out: Output) -> Brace | None:
    """Parse and validate; prints the failing report and returns None when the axioms fail."""
    tables = io.parse_brace(io.read_text(path))
    report = tables.validate()
    if not report:
        out.report(report)
        return None
    return tables.build()


def _first_word(text: str) -> str:
    for line in text.splitlines():
        s = line.strip()
        if s and not s.startswith("#"):
            return s.split()[0]
    raise io.FormatError("empty file")


# -- subcommands --------------------------------------------------------------------------------


def cmd_validate(args, out: Output) -> int:
    text = io.read_text(args.file)
    kind = _first_word(text)
    if args.post:
        value = io.parse_post_brace(text)
        report = value.brace.validate()
        ok = out.report(report)
        if ok:
            ok = out.report(validate_post_brace(value.brace.build(), value.rhd))
        out.line(f"post-brace: {_verdict(ok)}")
        return OK if ok else FAILED
    if kind == "group":
        ok = out.report(validate_group(io.parse_group(text)))
        out.line(f"group: {_verdict(ok)}")
    elif kind == "brace":
        report = io.parse_brace(text).validate()
        ok = out.report(report)
        summary = f"{report.subject}: {_verdict(ok)}"
        if ok:
            summary += f", two-sided: {_verdict(report['two_sided'].ok)}"
        out.line(summary)
    elif kind == "solution":
        R = io.parse_solution(text)
        ok = out.report(R.report)
    else:
        raise io.FormatError(f"validate expects a group, brace or solution file, got {kind!r}", 1)
    return OK if ok else FAILED


def _action_for(brace: Brace, choice: str):
    if choice == "adjoint":
        return adjoint_action(brace)
    if choice == "trivial":
        return trivial_action(brace, brace)
    phi = io.parse_action(io.read_text(choice)).phi
    return make_semi_trivial_action(brace, brace, phi)


def cmd_enumerate(args, out: Output) -> int:
    brace = _load_brace(args.brace, out)
    if brace is None:
        return FAILED
    action = _action_for(brace, args.action)
    rbos = enumerate_relative_rbos(action, enhanced_only=args.enhanced_only, prune=not args.brute_force)
    if not args.count_only:
        for i, rbo in enumerate(rbos):
            out.line(f"rbo {i}: {' '.join(map(str, rbo.image))} enhanced={_verdict(rbo.enhanced)}",
                     image=list(rbo.image), enhanced=rbo.enhanced)
    enhanced = sum(r.enhanced for r in rbos)
    out.line(f"operators: {len(rbos)}", count=len(rbos))
    out.line(f"enhanced: {enhanced}", enhanced_count=enhanced)
    return OK


def cmd_ybe(args, out: Output) -> int:
    brace = _load_brace(args.brace, out)
    if brace is None:
        return FAILED
    brace.require_brace("the brace solution")
    ok = True
    if args.post is None:
        R = solution_from_brace(brace)
        ok &= out.report(R.report)
        derived = Report("solution")
        derived.add("derived_is_flip", None if derived_solution(R) == flip(brace.n) else (0, 0))
        if args.check_drinfeld:
            derived.add("drinfeld_to_flip", drinfeld_witness(R, flip(brace.n), omega_from_lambda(brace.lam)))
        ok &= out.report(derived)
        exported = R
    else:
        pb = make_post_brace(brace, io.parse_rhd(io.read_text(args.post)))
        sols = post_brace_solutions(pb)
        for name, R in (("R1", sols.R1), ("R2", sols.R2)):
            sub = Report(name)
            sub.extend(R.report)
            ok &= out.report(sub)
        if args.check_drinfeld:
            check = Report("omega_bar")
            check.add("drinfeld_R1_R2", drinfeld_witness(sols.R1, sols.R2, sols.omega_bar))
            ok &= out.report(check)
        exported = sols.R2
    if args.export:
        io.write_text(args.export, io.emit_solution(exported))
    return OK if ok else FAILED


def cmd_factorize(args, out: Output) -> int:
    brace = _load_brace(args.brace, out)
    if brace is None:
        return FAILED
    image = io.parse_rbo(io.read_text(args.rbo), target=brace.n)
    rbo = make_two_sided_rbo(brace, image)
    if not rbo.enhanced:
        report = Report("rbo")
        report.add("enhanced", (0,))
        out.report(report)
        return FAILED
    data = factorization_data(rbo)
    out.line(f"G+ = {list(data.Gplus)}", Gplus=list(data.Gplus))
    out.line(f"G- = {list(data.Gminus)}", Gminus=list(data.Gminus))
    out.line(f"K+ = {list(data.Kplus)}", Kplus=list(data.Kplus))
    out.line(f"K- = {list(data.Kminus)}", Kminus=list(data.Kminus))
    out.line(f"Theta = {list(data.Theta)}", Theta=list(data.Theta))
    out.line(f"|G_Theta| = {len(data.GTheta)}", GTheta=len(data.GTheta))
    elements = range(brace.n) if args.element is None else [args.element]
    ok = True
    for a in elements:
        ap, am = factorize(rbo, a)
        unique = factorizations(rbo, data, a) == [(ap, am)]
        ok &= unique
        out.line(f"{a} = {ap} o bar({am}) = {am}^-1 . {ap}: {'unique' if unique else 'NOT unique'}",
                 element=a, plus=ap, minus=am, unique=unique)
    return OK if ok else FAILED


def _load_matched_pair(path: str, out: Output):
    tables = io.parse_matched_pair(io.read_text(path))
    braces = []
    for name, bt in (("G", tables.G), ("H", tables.H)):
        report = bt.validate()
        if not report:
            report.subject = f"{name} {report.subject}"
            out.report(report)
            return None
        braces.append(bt.build())
    return tables, braces[0], braces[1]


def cmd_matched_pair(args, out: Output) -> int:
    loaded = _load_matched_pair(args.file, out)
    if loaded is None:
        return FAILED
    tables, G, H = loaded
    report = validate_mp_braces(G, H, tables.sigma, tables.theta, mode=args.mode,
                                sampled=args.sampled, samples=args.samples, seed=args.seed)
    ok = out.report(report)
    if args.action == "double" and ok:
        mp = MatchedPairBraces(G, H, tables.rharp, tables.lharp, tables.rharpd, tables.lharpd)
        double = double_brace(mp)
        out.line(f"double: n={double.n}, two-sided: {_verdict(double.two_sided)}", n=double.n)
        if args.export:
            io.write_text(args.export, io.emit_brace(double))
    return OK if ok else FAILED


def _parse_params(params: list[str]) -> dict[str, int]:
    entries = {}
    for item in params:
        key, sep, value = item.partition("=")
        if not sep:
            raise io.FormatError(f"expected Bij=<int>, got {item!r}")
        try:
            entries[key] = int(value)
        except ValueError:
            raise io.FormatError(f"{key}: {value!r} is not an integer") from None
    return entries


def cmd_heisenberg(args, out: Output) -> int:
    brace, codec = build_heisenberg_brace(args.p)
    out.line(f"heisenberg p={args.p}: n={brace.n}, two-sided: {_verdict(brace.two_sided)}", n=brace.n)
    ok = brace.two_sided
    if args.emit_brace:
        io.write_text(args.emit_brace, io.emit_brace(brace))
    if args.census:
        result = census(args.p)
        for line in result.lines():
            out.line(line)
        ok &= result.ok
    if args.emit_rbo:
        label, *params = args.emit_rbo
        if label not in LABELS[:-1]:
            raise io.FormatError(f"class must be one of {', '.join(LABELS[:-1])}, got {label!r}")
        m = LinearMap3.from_entries(args.p, **_parse_params(params))
        found = classify_linear_rbo(m, args.p)
        image = linear_to_carrier(m, args.p).array()
        report = _matrix_report(brace, image, label, found)
        ok &= out.report(report)
        if report.ok:
            text = io.emit_rbo(image)
            if args.rbo_out:
                io.write_text(args.rbo_out, text)
            else:
                out.line(text.rstrip("\n"), image=image.tolist())
    return OK if ok else FAILED


def _matrix_report(brace: Brace, image: np.ndarray, label: str, found: str) -> Report:
    report = Report("matrix")
    report.add("class", None if found == label else (LABELS.index(found),))
    report.extend(validate_two_sided_rbo(brace, image), prefix="rbo.")
    return report


def cmd_selftest(args, out: Output) -> int:
    results = run_acceptance(set(args.criterion) if args.criterion else None)
    for r in results:
        out.line(r.line(timing=out.timing), criterion=r.number, ok=r.ok)
    return OK if all(r.ok for r in results) else FAILED


# -- parser -----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="brace-forge", description="Exhaustive checks for finite braces.")
    parser.add_argument("--json", action="store_true", help="one JSON record per verdict")
    parser.add_argument("--threads", type=int, help="cap on worker threads")
    parser.add_argument("--timing", action="store_true", help="append timings (breaks byte-identical output)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("validate", help="check a group, brace, post-brace or solution file")
    p.add_argument("file")
    p.add_argument("--post", action="store_true", help="the file is a brace followed by a |> table")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("enumerate-rbo", help="list every relative Rota-Baxter operator on a brace")
    p.add_argument("brace")
    p.add_argument("--action", default="adjoint", help="adjoint, trivial, or an action file")
    p.add_argument("--enhanced-only", action="store_true")
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--brute-force", action="store_true", help="plain enumeration of all maps")
    p.set_defaults(run=cmd_enumerate)

    p = sub.add_parser("ybe", help="solutions of the Yang-Baxter equation from a brace")
    p.add_argument("brace")
    p.add_argument("--post", metavar="RHD", help="a |> table file making the brace a post-brace")
    p.add_argument("--check-drinfeld", action="store_true")
    p.add_argument("--export", metavar="FILE")
    p.set_defaults(run=cmd_ybe)

    p = sub.add_parser("factorize", help="factor every element through an enhanced operator")
    p.add_argument("brace")
    p.add_argument("rbo")
    p.add_argument("--element", type=int)
    p.set_defaults(run=cmd_factorize)

    p = sub.add_parser("matched-pair", help="matched pairs of braces")
    p.add_argument("action", choices=("validate", "double"))
    p.add_argument("file")
    p.add_argument("--mode", choices=("auto", "full", "structured"), default="auto")
    p.add_argument("--sampled", action="store_true", help="allow seeded sampling above the tuple limit")
    p.add_argument("--samples", type=int, default=1 << 20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--export", metavar="FILE", help="write the double brace (double only)")
    p.set_defaults(run=cmd_matched_pair)

    p = sub.add_parser("heisenberg", help="the Heisenberg brace over F_p and its operators")
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--census", action="store_true")
    p.add_argument("--emit-brace", metavar="FILE")
    p.add_argument("--emit-rbo", nargs="+", metavar="ARG", help="CLASS then Bij=<int> entries")
    p.add_argument("--rbo-out", metavar="FILE")
    p.set_defaults(run=cmd_heisenberg)

    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.add_argument("--criterion", type=int, action="append", choices=range(1, 10))
    p.set_defaults(run=cmd_selftest)
    return parser


def _set_threads(k: int) -> None:
    import numba

    if k < 1:
        raise io.FormatError(f"--threads must be positive, got {k}")
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message=".*TBB.*")
        numba.set_num_threads(min(k, numba.config.NUMBA_NUM_THREADS))


def run(argv=None, stream=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    out = Output(args.json, args.timing, stream)
    try:
        if args.threads is not None:
            _set_threads(args.threads)
        return args.run(args, out)
    except AxiomError as exc:
        out.report(exc.report)
        return FAILED
    except InternalConsistencyError as exc:
        out.line(f"internal consistency failure: {exc}")
        return FAILED
    except (BraceForgeError, OSError) as exc:
        print(f"brace-forge: error: {exc}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(run())
