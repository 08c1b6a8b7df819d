"""Command-line front end: scl, certify, surface, experiment.

Exit codes are stable and scriptable:
  0  success (scl computed / certificate incompressible or norm-minimizing)
  1  certificate inconclusive
  2  parse or configuration error
  3  chain is not homologically trivial (or a term is trivial)
  5  size guard or timeout

All numbers in JSON output are exact rationals rendered as "p/q" strings;
wall-clock times are the only floating-point fields.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .certificates import (
    ExternalInput,
    SurfaceData,
    Verdict,
    build_example1,
    build_example2,
    build_example3,
    build_example4,
    check_certificate,
)
from .errors import (
    ArityMismatch,
    DegenerateFamily,
    InvalidInput,
    InvalidSurface,
    MissingExternalScl,
    NegativeScl,
    NotHomologicallyTrivial,
    OracleTooLarge,
    ParseError,
    SolveTimeout,
    TrivialWord,
    UnbalancedSigns,
)
from .experiments import (
    ScanConfig,
    records_to_csv,
    run_scan,
    summarize,
    summary_to_json_dict,
    trend_warnings,
)
from .rationals import parse_rational, rat, rat_str
from .scl import solve_chain
from .surface import extremal_surface
from .words import parse_chain

EXIT_OK = 0
EXIT_INCONCLUSIVE = 1
EXIT_USAGE = 2
EXIT_NOT_BOUNDING = 3
EXIT_GUARD = 5

_USAGE_ERRORS = (
    ParseError,
    DegenerateFamily,
    UnbalancedSigns,
    ArityMismatch,
    InvalidInput,
    InvalidSurface,
    NegativeScl,
    MissingExternalScl,
    ValueError,
)
_NOT_BOUNDING_ERRORS = (NotHomologicallyTrivial, TrivialWord)
_GUARD_ERRORS = (OracleTooLarge, SolveTimeout)


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _classify(exc: Exception) -> Optional[int]:
    if isinstance(exc, _NOT_BOUNDING_ERRORS):
        return EXIT_NOT_BOUNDING
    if isinstance(exc, _GUARD_ERRORS):
        return EXIT_GUARD
    if isinstance(exc, _USAGE_ERRORS):
        return EXIT_USAGE
    return None


def cmd_scl(args) -> int:
    chain = parse_chain(args.chain, args.rank)
    record = solve_chain(chain, args.mode, args.timeout)
    result = record.result
    if args.format == "json":
        print(json.dumps(
            {
                "chain": str(chain),
                "scl": rat_str(result.value),
                "mode": result.mode,
                "lp": {
                    "variables": result.lp_stats.variables,
                    "rows": result.lp_stats.rows,
                    "pivots": result.lp_stats.pivots,
                    "wall_ms": result.lp_stats.wall_ms,
                },
            },
            indent=2,
        ))
    else:
        print(rat_str(result.value))
    return EXIT_OK


def _print_certificate(verdict_or_report, fmt: str) -> int:
    data = verdict_or_report.to_json_dict()
    if fmt == "text":
        if "verdict" in data:
            print(f"verdict: {data['verdict']}")
            print(f"norm: {data['norm']}   chi: {data['chi']}")
            print(f"min_cover_index: {data['min_cover_index']}")
        else:
            print(f"relator: {data['relator']}")
            print(
                f"reference_scl: {data['reference_scl']}   "
                f"target_interval: {data['target_interval']}"
            )
    else:
        print(json.dumps(data, indent=2))
    verdict = data.get("verdict")
    if verdict == Verdict.INCONCLUSIVE.value:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_certify(args) -> int:
    if args.family == "example1":
        if args.v is None:
            raise InvalidInput("example1 requires --v")
        result = build_example1(args.v)
    elif args.family == "example2":
        if args.v is None:
            raise InvalidInput("example2 requires --v")
        result = build_example2(args.v, args.g)
    elif args.family == "example3":
        if args.scl_h is None:
            raise InvalidInput("example3 requires --scl-h")
        result = build_example3(
            parse_rational(args.scl_h), args.provenance or "command line"
        )
    elif args.family == "example4":
        if args.N is None or args.signs is None or args.conjugators is None:
            raise InvalidInput("example4 requires --N, --signs, --conjugators")
        signs = []
        for token in args.signs.split(","):
            token = token.strip()
            if token in ("+", "+1"):
                signs.append(1)
            elif token in ("-", "-1"):
                signs.append(-1)
            else:
                raise InvalidInput(f"bad sign {token!r}; use + or -")
        conjugators = args.conjugators.split(",")
        result = build_example4(args.N, signs, conjugators)
    elif args.family == "amalgam":
        if args.scl_left is None or args.scl_right is None or args.genus is None:
            raise InvalidInput(
                "amalgam requires --scl-left, --scl-right and --genus"
            )
        left = parse_rational(args.scl_left)
        right = parse_rational(args.scl_right)
        if left < 0 or right < 0:
            raise NegativeScl("scl values must be nonnegative")
        result = check_certificate(
            rat(2) * (left + right),
            SurfaceData.genus(args.genus),
            family="amalgam",
            word=args.word,
            scl_left=left,
            scl_right=right,
            norm_is_exact=False,
            external_inputs=(
                ExternalInput("scl_left", left, "command line"),
                ExternalInput("scl_right", right, "command line"),
            ),
        )
    else:  # pragma: no cover - argparse restricts choices
        raise InvalidInput(f"unknown family {args.family!r}")
    return _print_certificate(result, args.format)


def cmd_surface(args) -> int:
    chain = parse_chain(args.chain, args.rank)
    surface = extremal_surface(chain, args.mode, args.timeout)
    record = solve_chain(chain, surface.mode, args.timeout)
    print(f"scl: {rat_str(surface.scl_value)}")
    print(f"degree: {surface.degree}")
    print(f"euler_characteristic: {surface.euler_characteristic}")
    print(f"genus: {surface.genus}")
    print(f"boundary_components: {surface.boundary_component_count}")
    print(f"connected_components: {surface.connected_component_count}")
    if args.out:
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(surface.to_json(record.graph), encoding="utf-8")
        print(f"wrote {path}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    lengths = tuple(int(tok) for tok in args.lengths.split(","))
    cfg = ScanConfig(
        lengths=lengths,
        samples_per_length=args.samples,
        seed=args.seed,
        rank=args.rank,
        mode=args.mode,
        timeout_s=args.timeout if args.timeout is not None else 120.0,
    )
    records = run_scan(cfg, workers=args.workers)
    summary = summarize(records)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "scan.csv"
    csv_path.write_text(records_to_csv(records), encoding="utf-8")
    summary_path = out_dir / "summary.json"
    summary_path.write_text(
        json.dumps(summary_to_json_dict(cfg, summary), indent=2) + "\n",
        encoding="utf-8",
    )
    for n in sorted(summary):
        stats = summary[n]
        mean = rat_str(stats["mean"]) if stats["mean"] is not None else "n/a"
        print(
            f"n={n}: count={stats['count']} timeouts={stats['timeouts']} "
            f"mean={mean}"
        )
    for warning in trend_warnings(summary):
        print(f"trend warning: {warning}")
    print(f"wrote {csv_path} and {summary_path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sclcert",
        description=(
            "Exact stable commutator length in free groups and "
            "incompressibility certificates for amalgam surfaces."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, timeout_default=None):
        p.add_argument(
            "--mode", choices=["fast", "oracle"], default="fast",
            help="piece enumeration mode (oracle is exhaustive band cycles, "
            "guarded at total length 14)",
        )
        p.add_argument(
            "--timeout", type=float, default=timeout_default,
            help="seconds before the solve is abandoned",
        )
        p.add_argument(
            "--rank", type=int, default=26,
            help="alphabet rank accepted by the parser (default 26)",
        )

    p_scl = sub.add_parser("scl", help="exact scl of a chain")
    p_scl.add_argument("chain", help='chain text, e.g. "[a,b]" or "2*abAB + cC"')
    p_scl.add_argument("--format", choices=["text", "json"], default="text")
    add_common(p_scl)
    p_scl.set_defaults(func=cmd_scl)

    p_cert = sub.add_parser("certify", help="incompressibility certificates")
    p_cert.add_argument(
        "family",
        choices=["example1", "example2", "example3", "example4", "amalgam"],
    )
    p_cert.add_argument("--v", help="the word v of the [a,b][c,v] families")
    p_cert.add_argument("--g", type=int, default=2, help="genus parameter of example2")
    p_cert.add_argument("--scl-h", dest="scl_h", help="external scl value for example3")
    p_cert.add_argument("--provenance", help="provenance note for external values")
    p_cert.add_argument("--N", type=int, help="power parameter of example4")
    p_cert.add_argument("--signs", help='comma list of +/-, e.g. "+,-"')
    p_cert.add_argument(
        "--conjugators", help='comma list of words in a,b; empty item = identity'
    )
    p_cert.add_argument("--scl-left", dest="scl_left", help="amalgam: left scl value")
    p_cert.add_argument("--scl-right", dest="scl_right", help="amalgam: right scl value")
    p_cert.add_argument("--genus", type=int, help="amalgam: certificate surface genus")
    p_cert.add_argument("--word", help="amalgam: optional word annotation")
    p_cert.add_argument("--format", choices=["text", "json"], default="json")
    p_cert.set_defaults(func=cmd_certify)

    p_surf = sub.add_parser("surface", help="extract an extremal surface")
    p_surf.add_argument("chain")
    p_surf.add_argument("--out", help="path for the surface JSON")
    p_surf.add_argument(
        "--mode", choices=["fast", "oracle"], default=None,
        help="piece mode; default picks oracle for small chains",
    )
    p_surf.add_argument("--timeout", type=float, default=None)
    p_surf.add_argument("--rank", type=int, default=26)
    p_surf.set_defaults(func=cmd_surface)

    p_exp = sub.add_parser("experiment", help="random-word scl scans")
    p_exp.add_argument("--lengths", required=True, help='comma list, e.g. "4,8,16"')
    p_exp.add_argument("--samples", type=int, required=True)
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.add_argument("--rank", type=int, default=3)
    p_exp.add_argument("--mode", choices=["fast", "oracle"], default="fast")
    p_exp.add_argument("--timeout", type=float, default=None)
    p_exp.add_argument("--workers", type=int, default=1)
    p_exp.add_argument("--out", default="experiment_out", help="output directory")
    p_exp.set_defaults(func=cmd_experiment)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - single translation point
        code = _classify(exc)
        if code is None:
            raise
        return _fail(str(exc), code)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
