"""Command-line front end: ``ode3lin classify|synthesize|verify|pullback``.

Exit codes
----------
0  ok / MaximallySymmetric / verified
2  parse or usage error, degenerate transformation, rejected hint
3  not applicable (NotMaximallySymmetric) / not verified
4  partial synthesis result

Right-hand sides are written in x, u, u' (or p) and u'' (or q); numbers are
integers or ratios, so every printed value is exact and re-parses to itself.
Without an expression argument (or with ``-``) the command reads one
expression per line from standard input and prints one JSON report per line;
the exit code is then the most serious one over all lines (2, then 4, 3, 0).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from .invariants import InvariantReport, Ode3, Verdict, invariants
from .kernel import U, X, ParseError, parse, parse_in
from .synthesis import HINT_STAGES, HintRejected, Outcome, synthesize
from .transform import DegenerateTransformError, PointTransform, pullback, verify

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_APPLICABLE = 3
EXIT_PARTIAL = 4


class UsageError(Exception):
    """Bad input that is reported with exit code 2."""


@dataclass
class Report:
    """Everything a command prints; ``to_dict`` is the JSON schema."""

    command: str
    status: str = "ok"
    input: Optional[str] = None
    invariants: Optional[Dict[str, str]] = None
    verdict: Optional[str] = None
    witness: Optional[str] = None
    transformation: Optional[Dict[str, str]] = None
    auxiliaries: Optional[Dict[str, Optional[str]]] = None
    trace: Optional[List[dict]] = None
    extra: Dict[str, Any] = field(default_factory=dict)
    message: Optional[str] = None
    exit_code: int = EXIT_OK

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "command": self.command,
            "status": self.status,
            "input": self.input,
            "invariants": self.invariants,
            "verdict": self.verdict,
            "witness": self.witness,
            "transformation": self.transformation,
            "auxiliaries": self.auxiliaries,
            "trace": self.trace,
        }
        out.update(self.extra)
        out["message"] = self.message
        return out

    def set_invariants(self, rep: InvariantReport) -> None:
        self.invariants = {f"I{k}": str(v) for k, v in enumerate(rep.values, start=1)}
        self.verdict = rep.verdict.value
        self.witness = f"I{rep.witness}" if rep.witness else None


def _error(command: str, message: str, text: Optional[str] = None) -> Report:
    return Report(command, status="error", input=text, message=message, exit_code=EXIT_USAGE)


def _parse_rhs(text: str) -> Ode3:
    return Ode3(parse(text))


def _parse_pair(args) -> PointTransform:
    if args.phi is None or args.psi is None:
        raise UsageError("both --phi and --psi are required")
    phi = parse_in(args.phi, {X, U}, "phi")
    psi = parse_in(args.psi, {X, U}, "psi")
    return PointTransform(phi, psi)


def cmd_classify(text: str, args) -> Report:
    ode = _parse_rhs(text)
    rep = Report("classify", input=str(ode.f))
    inv = invariants(ode)
    rep.set_invariants(inv)
    if inv.verdict is not Verdict.MAXIMALLY_SYMMETRIC:
        rep.status = "not-applicable"
        rep.exit_code = EXIT_NOT_APPLICABLE
    return rep


def _hints(args) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for item in args.hint or []:
        stage, sep, expr = item.partition("=")
        stage = stage.strip()
        if not sep or stage not in HINT_STAGES:
            raise UsageError(f"--hint expects STAGE=EXPR with STAGE in {', '.join(HINT_STAGES)}; got {item!r}")
        out[stage] = expr
    return out


def cmd_synthesize(text: str, args) -> Report:
    ode = _parse_rhs(text)
    hints = {k: parse(v) for k, v in _hints(args).items()}
    result = synthesize(ode, max_degree=args.max_degree, riccati_degree=args.riccati_degree, hints=hints)
    rep = Report("synthesize", input=str(ode.f))
    rep.set_invariants(result.report)
    rep.trace = result.trace.to_list()
    rep.message = result.message
    if result.outcome is Outcome.NOT_APPLICABLE:
        rep.status = "not-applicable"
        rep.exit_code = EXIT_NOT_APPLICABLE
        return rep
    rep.auxiliaries = result.aux_partial()
    if result.outcome is Outcome.SUCCESS:
        t = result.transform
        rep.transformation = {"phi": str(t.phi), "psi": str(t.psi)}
    else:
        rep.status = "partial"
        rep.exit_code = EXIT_PARTIAL
        rep.extra["blocking_stage"] = result.blocking_stage
        found = {k: str(v) for k, v in (("phi", result.phi), ("psi", result.psi)) if v is not None}
        rep.transformation = found or None
    return rep


def cmd_verify(text: str, args) -> Report:
    ode = _parse_rhs(text)
    t = _parse_pair(args)
    ok = verify(ode, t)
    rep = Report("verify", input=str(ode.f))
    rep.transformation = {"phi": str(t.phi), "psi": str(t.psi)}
    rep.extra["verified"] = ok
    if not ok:
        rep.exit_code = EXIT_NOT_APPLICABLE
    return rep


def cmd_pullback(text: Optional[str], args) -> Report:
    t = _parse_pair(args)
    target = parse(args.target)
    ode = pullback(target, t)
    rep = Report("pullback", input=str(target))
    rep.transformation = {"phi": str(t.phi), "psi": str(t.psi)}
    rep.extra["result"] = str(ode.f)
    rep.set_invariants(invariants(ode))
    return rep


COMMANDS = {
    "classify": cmd_classify,
    "synthesize": cmd_synthesize,
    "verify": cmd_verify,
    "pullback": cmd_pullback,
}


def run(command: str, text: Optional[str], args) -> Report:
    """Run one command, turning input problems into an error report."""
    try:
        return COMMANDS[command](text, args)
    except ParseError as exc:
        return _error(command, f"parse error: {exc}", text)
    except DegenerateTransformError as exc:
        rep = _error(command, f"degenerate transformation: {exc}", text)
        rep.extra["error"] = "degenerate-transformation"
        return rep
    except HintRejected as exc:
        rep = _error(command, str(exc), text)
        rep.extra["error"] = "hint-rejected"
        return rep
    except (UsageError, ValueError, ZeroDivisionError) as exc:
        return _error(command, str(exc), text)


def format_human(rep: Report) -> str:
    lines = []
    if rep.command == "pullback":
        lines.append(f"target:   ū''' = {rep.input}")
        lines.append(f"map:      x̄ = {rep.transformation['phi']}, ū = {rep.transformation['psi']}")
        lines.append(f"result:   u''' = {rep.extra['result']}")
    elif rep.input is not None:
        lines.append(f"input:    u''' = {rep.input}")
    if rep.command in ("classify", "synthesize") and rep.invariants:
        for k, v in rep.invariants.items():
            lines.append(f"  {k} = {v}")
        lines.append(f"verdict:  {rep.verdict}" + (f" (witness {rep.witness})" if rep.witness else ""))
    if rep.command == "synthesize" and rep.status != "not-applicable":
        for step in rep.trace or []:
            lines.append(f"  [{step['stage']}] {step['equation']}")
            lines.append(f"      ansatz: {step['ansatz']}")
            lines.append(f"      result: {step['result']}")
        if rep.auxiliaries:
            aux = ", ".join(f"{k} = {v if v is not None else '?'}" for k, v in rep.auxiliaries.items())
            lines.append(f"auxiliaries: {aux}")
        if rep.status == "ok":
            t = rep.transformation
            lines.append(f"transformation: x̄ = {t['phi']}, ū = {t['psi']}")
        else:
            lines.append(f"partial: blocked at {rep.extra.get('blocking_stage')}")
    if rep.command == "verify":
        t = rep.transformation
        lines.append(f"map:      x̄ = {t['phi']}, ū = {t['psi']}")
        lines.append("verified: " + ("yes" if rep.extra["verified"] else "no"))
    lines.append(f"status:   {rep.status}")
    if rep.message and rep.status != "ok":
        lines.append(f"message:  {rep.message}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    # the global flags work before or after the subcommand; the subcommand
    # copies default to SUPPRESS so they do not reset a value given earlier
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="print the report as JSON")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS, help="print nothing; only set the exit code")

    parser = argparse.ArgumentParser(
        prog="ode3lin",
        description="Decide and construct linearizations of u''' = f(x, u, u', u'') to u''' = 0.",
        epilog="exit codes: 0 ok, 2 parse/usage error, 3 not applicable / not verified, 4 partial",
    )
    parser.add_argument("--json", action="store_true", help="print the report as JSON")
    parser.add_argument("--quiet", action="store_true", help="print nothing; only set the exit code")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, expr: bool = True):
        p = sub.add_parser(name, help=help_text, parents=[common])
        if expr:
            p.add_argument("expr", nargs="?", default=None, help="right-hand side f; omit or '-' to read lines from stdin")
        return p

    add("classify", "compute I1..I4 and the verdict")
    p = add("synthesize", "construct a linearizing point transformation")
    p.add_argument("--max-degree", type=int, default=6, help="degree bound for psi and its completion (default 6)")
    p.add_argument("--riccati-degree", type=int, default=4, help="degree bound for the Riccati search (default 4)")
    p.add_argument("--hint", action="append", metavar="STAGE=EXPR", help=f"replace a stage by a checked value; STAGE in {', '.join(HINT_STAGES)}")
    p = add("verify", "check that (phi, psi) maps u''' = f onto u''' = 0")
    p.add_argument("--phi", help="new independent variable phi(x, u)")
    p.add_argument("--psi", help="new dependent variable psi(x, u)")
    p = add("pullback", "the equation that (phi, psi) maps onto the target", expr=False)
    p.add_argument("--phi", required=True)
    p.add_argument("--psi", required=True)
    p.add_argument("--target", default="0", help="right-hand side of the target equation (default 0)")
    return parser


def _emit(rep: Report, as_json: bool, quiet: bool) -> None:
    if rep.status == "error":
        print(f"ode3lin {rep.command}: {rep.message}", file=sys.stderr)
    if quiet:
        return
    if as_json:
        print(json.dumps(rep.to_dict(), ensure_ascii=False))
    elif rep.status != "error":
        print(format_human(rep))


_VALUE_FLAGS = ("--phi", "--psi", "--target", "--hint")

# batch mode reports the most serious outcome over all lines
_SEVERITY = {EXIT_OK: 0, EXIT_NOT_APPLICABLE: 1, EXIT_PARTIAL: 2, EXIT_USAGE: 3}


def _glue_values(argv: Sequence[str]) -> List[str]:
    """Attach expression values to their flag so '--psi -1/(x*u)' is not read as an option."""
    out: List[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = _glue_values(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    for name in ("max_degree", "riccati_degree"):
        if getattr(args, name, 0) < 0:
            print(f"ode3lin: --{name.replace('_', '-')} must be non-negative", file=sys.stderr)
            return EXIT_USAGE

    text = getattr(args, "expr", None)
    if args.command == "pullback" or (text is not None and text != "-"):
        rep = run(args.command, text, args)
        _emit(rep, args.json, args.quiet)
        return rep.exit_code

    # batch mode: one report per non-empty input line, in input order
    worst = EXIT_OK
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        rep = run(args.command, line, args)
        _emit(rep, True, args.quiet)
        worst = max(worst, rep.exit_code, key=_SEVERITY.__getitem__)
    return worst


if __name__ == "__main__":
    sys.exit(main())
