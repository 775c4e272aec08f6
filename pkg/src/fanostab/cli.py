"""Command-line front end.

Exit codes: 0 success, 1 a sound but negative answer (stuck chase, not
special, not proved stable, failing selftest), 2 usage or input errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import weyl
from .chase import ScriptError, StoreSource, WeylSource, check_trace, parse_script, replay
from .resources import FACTS_ENV, facts_dir, load_store
from .special import NotSpecial, PropagationError, certificate_chain, is_special
from .stability import FanoProfile, InvalidProfile, Outcome, fano_stability
from .tables import FactConflict, FactParseError, FootprintError, format_cell_line, parse_space

DEFAULT_REACH = 10
RANGE_FLAGS = {"--t-range", "--window"}


class UsageError(Exception):
    pass


def parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"bad range {text!r}, expected a:b") from None
    if lo > hi:
        raise UsageError(f"empty range {text!r}")
    return lo, hi


class _Step(argparse.Action):
    """Collects --section and --cover in command-line order."""

    def __call__(self, parser, namespace, values, option_string=None):
        steps = getattr(namespace, self.dest) or []
        kind = option_string.lstrip("-")
        steps.append((kind, *values))
        setattr(namespace, self.dest, steps)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fanostab", description="Cohomology tables, vanishing chases and tangent bundle stability for Fano manifolds.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cohomology", help="h^p(Omega^q(t)) on P(n) or G(k,n) by Borel-Weil-Bott")
    c.add_argument("--space", required=True, help="P(n) or G(k,n)")
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--t-range", help=f"a:b (default -{DEFAULT_REACH}:{DEFAULT_REACH})")
    c.add_argument("--p", type=int, help="show only this cohomological degree")
    c.add_argument("--format", choices=("grid", "records"), default="grid")

    s = sub.add_parser("special", help="special cohomology certificate for a chain of sections and cyclic covers")
    s.add_argument("--from", dest="start", required=True, help="P(n) or G(k,n)")
    s.add_argument("--section", dest="steps", nargs=1, type=int, action=_Step, metavar="D")
    s.add_argument("--cover", dest="steps", nargs=2, type=int, action=_Step, metavar=("K", "D"))
    s.add_argument("--window", help=f"a:b containing 0 (default -{DEFAULT_REACH}:{DEFAULT_REACH})")
    s.add_argument("--out", type=Path, help="write the serialized certificate here")

    h = sub.add_parser("chase", help="replay a chase script and check its trace")
    h.add_argument("--script", type=Path, required=True)
    h.add_argument("--facts", type=Path, action="append", help=f"fact file (repeatable; default: every file in ${FACTS_ENV} or the shipped facts)")
    h.add_argument("--trace-out", type=Path, help="write the proof trace here")
    h.add_argument("--quiet", action="store_true", help="omit the trace from standard output")

    t = sub.add_parser("stability", help="stability verdict for T_X with a reason log")
    t.add_argument("--n", type=int, required=True, help="dimension")
    t.add_argument("--index", type=int, required=True)
    t.add_argument("--genus", type=int)
    t.add_argument("--degree", type=int, help="H^n, for coindex 3 (sets the genus)")
    t.add_argument("--assume-es", action="store_true", help="assume smooth slices exist down to index 1")
    t.add_argument("--b2", type=int, default=1)

    sub.add_parser("selftest", help="run the acceptance suite")
    return ap


def _normalize(argv: list[str]) -> list[str]:
    # "--window -4:4" would otherwise be read as an unknown option
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in RANGE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _window(text: str | None) -> tuple[tuple[int, int], str]:
    if text is None:
        return (-DEFAULT_REACH, DEFAULT_REACH), " (default)"
    return parse_range(text), ""


def cmd_cohomology(args, out) -> int:
    try:
        space = parse_space(args.space)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    k, n = (0, space.params[0]) if space.kind == "projective" else space.params
    if not 0 <= args.q <= space.dim:
        raise UsageError(f"--q must lie in 0..{space.dim}")
    if args.p is not None and not 0 <= args.p <= space.dim:
        raise UsageError(f"--p must lie in 0..{space.dim}")
    (lo, hi), note = _window(args.t_range)
    if args.format == "records":
        print(f"# Omega^{args.q} on {space.id}, t in {lo}:{hi}{note}", file=out)
        print(f"space {space.id} dim {space.dim} index {space.index}", file=out)
    else:
        print(f"# h^p(Omega^{args.q}(t)) on {space.id} (dim {space.dim}), t in {lo}:{hi}{note}", file=out)
    for t in range(lo, hi + 1):
        coh = weyl.grassmann_cohomology(k, n, args.q, t)
        cells = [(p, v) for p, v in sorted(coh.items()) if v and (args.p is None or p == args.p)]
        if args.format == "records":
            for p, v in cells:
                print(format_cell_line(space.id, p, args.q, t, v), file=out)
        else:
            print(f"t={t}" + "".join(f"  p={p}: {v}" for p, v in cells), file=out)
    return 0


def cmd_special(args, out) -> int:
    try:
        start = parse_space(args.start)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    window, note = _window(args.window)
    if not window[0] <= 0 <= window[1]:
        raise UsageError("--window must contain 0")
    steps = args.steps or []
    chain = " ".join(f"--{s[0]} " + " ".join(map(str, s[1:])) for s in steps) or "(none)"
    print(f"# from {start.id}, steps {chain}, window {window[0]}:{window[1]}{note}", file=out)
    try:
        cert = certificate_chain(start, steps, window)
    except NotSpecial as exc:
        print(f"space {start.id} dim {start.dim}", file=out)
        print("special: no", file=out)
        for v in exc.violations:
            print(f"  violation {v.condition} {v.cell}: {v}", file=out)
        return 1
    except (FootprintError, PropagationError) as exc:
        print("special: undetermined", file=out)
        print(f"  propagation failed: {exc}", file=out)
        return 1
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ok, violations = is_special(cert.table)
    print(f"space {cert.space.id} dim {cert.dim} index {cert.space.index}", file=out)
    for cond, rules in cert.conditions().items():
        backing = ", ".join(f"{r} x{c}" for r, c in sorted(rules.items())) or "no cells"
        print(f"  condition ({cond}): {backing}", file=out)
    print(f"special: {'yes' if ok else 'no'}", file=out)
    for v in violations:
        print(f"  violation {v.condition} {v.cell}: {v}", file=out)
    if args.out:
        args.out.write_text(cert.to_text())
        print(f"certificate written to {args.out}", file=out)
    return 0 if ok else 1


def _stores(paths: list[Path] | None):
    if paths is None:
        fdir = facts_dir()
        paths = sorted(fdir.glob("*.facts")) if fdir.is_dir() else []
    stores = []
    for p in paths:
        try:
            stores.append(load_store(p))
        except OSError as exc:
            raise UsageError(f"cannot read facts {p}: {exc.strerror}") from None
        except (FactParseError, FactConflict) as exc:
            raise UsageError(str(exc)) from None
    return stores


def cmd_chase(args, out) -> int:
    try:
        text = args.script.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read script {args.script}: {exc.strerror}") from None
    stores = _stores(args.facts)
    try:
        script = parse_script(text, args.script.stem)
    except (ScriptError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    sources = [WeylSource()] + [StoreSource(s) for s in stores]
    print(f"# script {args.script}, facts: {', '.join(s.name for s in stores) or '(none)'}", file=out)
    result = replay(script, sources)
    if not result.proved:
        out.write(result.report())
        return 1
    report = check_trace(result.trace, sources)
    if not args.quiet:
        out.write(result.trace.to_text())
    if args.trace_out:
        args.trace_out.write_text(result.trace.to_text())
    print(f"{result.script}: proved, {len(result.trace.steps)} steps", file=out)
    print(f"checker: {report.summary()}", file=out)
    return 0 if report.ok else 1


def cmd_stability(args, out) -> int:
    try:
        profile = FanoProfile(args.n, args.index, degree=args.degree, genus=args.genus, assume_es=args.assume_es, b2_is_1=args.b2 == 1)
    except InvalidProfile as exc:
        raise UsageError(f"invalid profile: {exc}") from None
    verdict = fano_stability(profile)
    out.write(verdict.render())
    return 0 if verdict.outcome == Outcome.STABLE else 1


def cmd_selftest(args, out) -> int:
    from .acceptance import run_all

    results = run_all(out)
    return 0 if all(r.passed for r in results) else 1


COMMANDS = {
    "cohomology": cmd_cohomology,
    "special": cmd_special,
    "chase": cmd_chase,
    "stability": cmd_stability,
    "selftest": cmd_selftest,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    argv = _normalize(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"fanostab {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
