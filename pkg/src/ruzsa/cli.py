"""Command-line entry point.

Exit status: 0 success, 1 a check failed, 2 usage error, 3 node budget exhausted.
Data goes to stdout (or --out); configuration and diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from pathlib import Path

from . import constructions, exact, primes, scan
from .residues import sigma_profile

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ruzsa", description=__doc__.splitlines()[0])
    parser.add_argument("--no-timestamp", action="store_true", help="omit the timestamp line")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build and verify a certificate for Z_m")
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=_positive, default=200, help="random restarts for the base search")
    p.add_argument("--target", type=int, default=48, help="sigma bound asked of the Z_{2p^2} base")
    p.add_argument("--base-file", type=Path, help="import the Z_{2p^2} base instead of searching")
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("verify", help="re-check a certificate file")
    p.add_argument("--cert", type=Path, required=True)

    p = sub.add_parser("exact", help="exact Ruzsa number R_m")
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--budget", type=_positive, default=exact.DEFAULT_BUDGET)
    p.add_argument("--oracle", action="store_true", help="use full subset enumeration (m <= 18)")

    p = sub.add_parser("cover", help="least size c(m) of a basis of Z_m and ell_m")
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--budget", type=_positive, default=exact.DEFAULT_BUDGET)

    p = sub.add_parser("kmin", help="K_m, least size among sets with 1 <= sigma <= R_m")
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--budget", type=_positive, default=exact.DEFAULT_BUDGET)

    p = sub.add_parser("scan", help="conjecture evidence table as CSV")
    p.add_argument("--from", dest="m_lo", type=_positive, required=True)
    p.add_argument("--to", dest="m_hi", type=_positive, required=True)
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--budget", type=_positive, default=exact.DEFAULT_BUDGET)
    p.add_argument("--out", type=Path, help="CSV destination (default stdout)")

    p = sub.add_parser("lemma2", help="check the explicit small-modulus base set")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--all", action="store_true", help=f"every m in 1..{constructions.LEMMA2_LIMIT}")
    g.add_argument("--m", type=_positive)

    p = sub.add_parser("lemma3", help="prime in (x, 2x/sqrt3] for all real x in a range")
    p.add_argument("--from", dest="x_lo", type=int, required=True)
    p.add_argument("--to", dest="x_hi", type=int, required=True)

    p = sub.add_parser("panaitopol", help="the reduced analytic inequality")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--x", type=float)
    g.add_argument("--grid", nargs=3, metavar=("LO", "HI", "STEPS"))
    return parser


def _config_line(args: argparse.Namespace) -> str:
    cfg = {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(args).items())}
    return "# config: " + json.dumps(cfg, sort_keys=True)


def _cmd_construct(args) -> int:
    if args.base_file is not None:
        provider = constructions.ImportProvider(args.base_file.read_text(), str(args.base_file))
    else:
        provider = constructions.SearchProvider(args.seed, args.budget, args.target)
    cert = constructions.theorem1_basis(args.m, provider)
    args.out.write_text(cert.dumps())
    steps = ",".join(s.kind for s in cert.trace)
    print(f"m={cert.m} size={len(cert.elements)} sigma_min={cert.sigma_min} "
          f"sigma_max={cert.sigma_max} claimed_bound={cert.claimed_bound} trace={steps}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    try:
        cert = constructions.BasisCertificate.loads(args.cert.read_text())
    except (ValueError, KeyError, TypeError) as exc:
        print(f"status=FAIL malformed certificate: {exc}")
        return EXIT_FAIL
    check = constructions.verify_certificate(cert)
    print(f"m={cert.m} claimed_bound={cert.claimed_bound} status={'OK' if check.ok else 'FAIL'}")
    for reason in check.reasons:
        print(f"reason: {reason}", file=sys.stderr)
    return EXIT_OK if check.ok else EXIT_FAIL


def _cmd_exact(args) -> int:
    if args.oracle:
        res = exact.oracle_ruzsa(args.m)
    else:
        res = exact.exact_ruzsa(args.m, budget=args.budget)
    print(f"m={res.modulus} r_m={res.r_m} status=exact witness={' '.join(map(str, res.witness))} "
          f"nodes={res.nodes_explored}")
    return EXIT_OK


def _cmd_cover(args) -> int:
    res = exact.min_cover(args.m, budget=args.budget)
    ell = res.ell_m
    print(f"m={res.modulus} c_m={res.c_m} ell_m={ell.numerator}/{ell.denominator} "
          f"witness={' '.join(map(str, res.witness))} nodes={res.nodes_explored}")
    return EXIT_OK


def _cmd_kmin(args) -> int:
    r = exact.exact_ruzsa(args.m, budget=args.budget)
    res = exact.k_min(args.m, r.r_m, budget=args.budget)
    print(f"m={res.modulus} r_m={r.r_m} k_m={res.k_m} witness={' '.join(map(str, res.witness))} "
          f"nodes={res.nodes_explored}")
    return EXIT_OK


def _cmd_scan(args) -> int:
    if args.m_hi < args.m_lo:
        raise ValueError("--to must be >= --from")
    report = scan.scan(args.m_lo, args.m_hi, budget=args.budget, jobs=args.jobs)
    unknown = [r.m for r in report.rows if r.r_m is None]
    summary = f"rows={len(report.rows)} r_exact={len(report.rows) - len(unknown)} out={args.out or '-'}"
    if args.out is None:
        sys.stdout.write(report.to_csv())
        print(summary, file=sys.stderr)
    else:
        args.out.write_text(report.to_csv())
        print(summary)
    return EXIT_BUDGET if unknown else EXIT_OK


def _cmd_lemma2(args) -> int:
    moduli = range(1, constructions.LEMMA2_LIMIT + 1) if args.all else [args.m]
    failures = 0
    worst = 0
    for m in moduli:
        prof = sigma_profile(constructions.base_set_small(m))
        worst = max(worst, prof.max_sigma)
        ok = prof.min_sigma >= 1 and prof.max_sigma <= constructions.LEMMA2_BOUND
        failures += not ok
        if not args.all or not ok:
            print(f"m={m} sigma_min={prof.min_sigma} sigma_max={prof.max_sigma} "
                  f"status={'OK' if ok else 'FAIL'}")
    if args.all:
        print(f"checked={len(moduli)} failures={failures} worst_sigma_max={worst} "
              f"status={'OK' if not failures else 'FAIL'}")
    return EXIT_OK if not failures else EXIT_FAIL


def _cmd_lemma3(args) -> int:
    report = primes.verify_lemma3_range(args.x_lo, args.x_hi)
    print(report.line())
    return EXIT_OK if report.ok else EXIT_FAIL


def _cmd_panaitopol(args) -> int:
    if args.x is not None:
        ok = primes.panaitopol_inequality_check(args.x)
        print(f"x={args.x!r} margin={primes.panaitopol_margin(args.x)!r} status={'OK' if ok else 'FAIL'}")
        return EXIT_OK if ok else EXIT_FAIL
    try:
        lo, hi, steps = float(args.grid[0]), float(args.grid[1]), int(args.grid[2])
    except ValueError as exc:
        raise ValueError(f"bad --grid values: {exc}") from None
    ok = primes.panaitopol_monotone_check(lo, hi, steps)
    print(f"grid=[{lo!r},{hi!r}] steps={steps} nondecreasing={'true' if ok else 'false'}")
    return EXIT_OK if ok else EXIT_FAIL


_COMMANDS = {
    "construct": _cmd_construct,
    "verify": _cmd_verify,
    "exact": _cmd_exact,
    "cover": _cmd_cover,
    "kmin": _cmd_kmin,
    "scan": _cmd_scan,
    "lemma2": _cmd_lemma2,
    "lemma3": _cmd_lemma3,
    "panaitopol": _cmd_panaitopol,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    print(_config_line(args), file=sys.stderr)
    if not args.no_timestamp:
        now = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
        print(f"# timestamp: {now}", file=sys.stderr)
    try:
        return _COMMANDS[args.command](args)
    except exact.BudgetExhausted as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except constructions.SearchFailed as exc:
        print(f"base search failed: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except constructions.ConstructionError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
