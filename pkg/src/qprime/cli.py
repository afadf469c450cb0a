"""qprime command line.

Exit codes: 0 prime / verified, 1 composite / rejected, 2 probably composite,
3 indeterminate verification, 64 usage error, 65 malformed certificate,
66 missing input file.
"""

from __future__ import annotations

import argparse
import csv
import json
import re
import sys
import time

from . import __version__
from .bench import run_bench, summarize
from .certificates import CertificateError, parse, serialize, verify
from .errors import IndeterminateError, InvalidInputError, ResourceLimitError
from .order_finding import QofConfig
from .primality import Prime, PrimePower, TestConfig, test_primality, test_prime_power
from .sweeps import density_rows, range_sweep

EXIT_PRIME, EXIT_COMPOSITE, EXIT_PROBABLY_COMPOSITE = 0, 1, 2
EXIT_INDETERMINATE, EXIT_USAGE, EXIT_DATAERR, EXIT_NOINPUT = 3, 64, 65, 66
_DECIMAL = re.compile(r"[0-9]+")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def decimal(text: str) -> int:
    if not _DECIMAL.fullmatch(text):
        raise argparse.ArgumentTypeError(f"expected a decimal integer, got {text!r}")
    return int(text)


def _common(parser, *, engine=True):
    parser.add_argument("--seed", type=decimal, default=0, help="64-bit RNG seed")
    parser.add_argument("--backend", choices=("analytic", "statevector"), default="analytic")
    parser.add_argument("--control-bits", type=decimal, default=None,
                        help="override the 2*bits(N)+1 control register width")
    parser.add_argument("--max-measurements", type=decimal, default=20)
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    if engine:
        parser.add_argument("--mr-rounds", "--prescreen", dest="mr_rounds", type=decimal, default=16)
        parser.add_argument("--cap-mode", choices=("three_ln_n", "three_ln_ln_N"), default="three_ln_n")
        parser.add_argument("--cap-min", type=decimal, default=10)


def _qof(args) -> QofConfig:
    return QofConfig(control_bits=args.control_bits, max_measurements=args.max_measurements,
                     backend=args.backend)


def _config(args) -> TestConfig:
    return TestConfig(mr_rounds=args.mr_rounds, cap_mode=args.cap_mode, cap_min=args.cap_min,
                      qof=_qof(args), seed=args.seed)


def _exit_for(verdict) -> int:
    if isinstance(verdict, (Prime, PrimePower)):
        return EXIT_PRIME
    if verdict.label == "composite":
        return EXIT_COMPOSITE
    return EXIT_PROBABLY_COMPOSITE


def _report(verdict, seconds: float) -> dict:
    return {
        "n": str(verdict.n),
        "verdict": verdict.label,
        "certificate": verdict.certificate.to_dict() if verdict.certificate else None,
        "iterations": verdict.iterations,
        "measurements": verdict.measurements,
        "wall_time": seconds,
    }


def _describe(verdict) -> str:
    cert = verdict.certificate
    parts = [f"{verdict.n}: {verdict.label.replace('_', ' ')}"]
    if cert is not None:
        parts.append("(" + ", ".join(f"{k}={v}" for k, v in cert.witness.items()) + ")")
    parts.append(f"[{verdict.iterations} order-finding iterations, {verdict.measurements} measurements]")
    return " ".join(parts)


def _run(args):
    if args.n < 2:
        raise UsageError("N must be >= 2")
    config = _config(args)
    start = time.perf_counter()
    if getattr(args, "prime_power", False):
        if args.n < 4:
            raise UsageError("--prime-power needs N >= 4")
        verdict = test_prime_power(args.n, config)
    else:
        verdict = test_primality(args.n, config)
    return verdict, time.perf_counter() - start


def cmd_test(args) -> int:
    verdict, seconds = _run(args)
    if args.json:
        print(json.dumps(_report(verdict, seconds), indent=2))
    else:
        print(_describe(verdict))
    return _exit_for(verdict)


def cmd_certify(args) -> int:
    verdict, _ = _run(args)
    code = _exit_for(verdict)
    cert = verdict.certificate
    if cert is None or (code != EXIT_PRIME and not args.allow_composite_witness):
        print(f"{_describe(verdict)}; no certificate written", file=sys.stderr)
        return code
    data = serialize(cert)
    if args.out in (None, "-"):
        sys.stdout.write(data.decode())
    else:
        with open(args.out, "wb") as fh:
            fh.write(data)
        print(f"{_describe(verdict)} -> {args.out}", file=sys.stderr)
    return code


def cmd_verify(args) -> int:
    try:
        with open(args.path, "rb") as fh:
            raw = fh.read()
    except FileNotFoundError:
        print(f"no such file: {args.path}", file=sys.stderr)
        return EXIT_NOINPUT
    try:
        cert = parse(raw, strict=not args.lenient)
    except CertificateError as exc:
        print(f"malformed certificate: {exc}", file=sys.stderr)
        return EXIT_DATAERR
    try:
        ok = verify(cert, args.mode, _qof(args), args.seed)
    except IndeterminateError as exc:
        print(f"indeterminate: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except CertificateError as exc:
        print(f"malformed certificate: {exc}", file=sys.stderr)
        return EXIT_DATAERR
    result = {"n": str(cert.n), "kind": cert.kind, "mode": args.mode, "valid": ok}
    print(json.dumps(result) if args.json else f"{cert.n}: {cert.kind} {'valid' if ok else 'INVALID'}")
    return 0 if ok else 1


def cmd_range(args) -> int:
    if not 2 <= args.lo <= args.hi:
        raise UsageError("range needs 2 <= lo <= hi")
    if args.hi - args.lo + 1 > args.max_range:
        raise UsageError(f"range of {args.hi - args.lo + 1} exceeds --max-range {args.max_range}")
    summary = range_sweep(args.lo, args.hi, _config(args), jobs=args.jobs)
    if args.json:
        print(json.dumps(summary.to_dict(), indent=2))
    else:
        print(f"tested {summary.tested} integers in [{args.lo}, {args.hi}]")
        print(f"verdicts: {dict(summary.verdicts)}")
        print(f"primes proved: {summary.proved}/{summary.primes} (completeness {summary.completeness:.4%})")
        print(f"soundness violations: {len(summary.soundness_violations)} {summary.soundness_violations[:10]}")
        print(f"unverified certificates: {len(summary.unverified_certificates)}")
        hist = ", ".join(f"{k}:{v}" for k, v in sorted(summary.iterations.items()))
        print(f"order-finding iterations histogram: {hist}")
    return 1 if summary.soundness_violations or summary.unverified_certificates else 0


def cmd_density(args) -> int:
    if not 3 <= args.lo <= args.hi:
        raise UsageError("density needs 3 <= lo <= hi")
    if args.hi - args.lo + 1 > args.max_range:
        raise UsageError(f"range exceeds --max-range {args.max_range}")
    rows = density_rows(args.lo, args.hi)
    out = open(args.out, "w", newline="") if args.out not in (None, "-") else sys.stdout
    try:
        if args.csv:
            writer = csv.writer(out)
            writer.writerow(["N", "phi_ratio", "bound_eq6", "bound_eq7", "flag"])
            for r in rows:
                writer.writerow([r.n, repr(r.phi_ratio), repr(r.bound_eq6), repr(r.bound_eq7), r.flag])
        else:
            out.write(f"{'N':>10} {'phi(N-1)/(N-1)':>15} {'1/(3lnln)':>10} {'RS bound':>10}  flag\n")
            for r in rows:
                out.write(f"{r.n:>10} {r.phi_ratio:>15.6f} {r.bound_eq6:>10.6f} {r.bound_eq7:>10.6f}  {r.flag}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    violations = sum(r.flag == "violation" for r in rows)
    print(f"{len(rows)} primes, {violations} violations", file=sys.stderr)
    return 1 if violations else 0


def cmd_bench(args) -> int:
    if not 2 <= args.bits_lo <= args.bits_hi:
        raise UsageError("need 2 <= --bits-lo <= --bits-hi")
    rows = run_bench(args.seed, range(args.bits_lo, args.bits_hi + 1), args.per_bits,
                     mr_rounds=args.mr_rounds)
    report = summarize(rows)
    if args.json:
        print(json.dumps(report, indent=2))
        return 0
    print(f"{'bits':>4} {'mult/exp':>9} {'circuit/meas':>12} {'classical/meas':>14} "
          f"{'test mults (mean)':>17} {'MR mults':>9} {'MR sq/bound':>12} {'sec':>6}")
    for r in report["rows"]:
        all_mults = [m for v in r["test_mults"].values() for m in v]
        mean_test = sum(all_mults) / len(all_mults)
        print(f"{r['bits']:>4} {r['mults_per_exponentiation']:>9.2f} {r['circuit_mults_per_measurement']:>12.1f} "
              f"{r['classical_mults_per_measurement']:>14.1f} {mean_test:>17.1f} {r['mr_mults']:>9} "
              f"{r['mr_squarings']:>5}/{r['mr_squaring_bound']:<6} {r['seconds']:>6.2f}")
    fit = report["exponentiation_fit"]
    print(f"mult/exp ~ {fit['slope']:.3f}*n + {fit['intercept']:.3f}, "
          f"max relative residual {fit['max_rel_residual']:.3f} ({'linear' if fit['ok'] else 'NOT linear'})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qprime", description="Primality proofs by (simulated) quantum order finding")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("test", help="test one integer")
    p.add_argument("n", type=decimal)
    p.add_argument("--prime-power", action="store_true", help="run the prime-power variant")
    _common(p)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("certify", help="test and write a certificate")
    p.add_argument("n", type=decimal)
    p.add_argument("--out", default=None)
    p.add_argument("--allow-composite-witness", action="store_true")
    p.add_argument("--prime-power", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="check a certificate file")
    p.add_argument("path")
    p.add_argument("--mode", choices=("classical", "quantum", "both"), default="both")
    p.add_argument("--lenient", action="store_true", help="ignore unknown fields")
    _common(p, engine=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("range", help="sweep [lo, hi] against trial division")
    p.add_argument("lo", type=decimal)
    p.add_argument("hi", type=decimal)
    p.add_argument("--jobs", type=decimal, default=1)
    p.add_argument("--max-range", type=decimal, default=1 << 20)
    _common(p)
    p.set_defaults(func=cmd_range)

    p = sub.add_parser("density", help="phi(N-1)/(N-1) against its lower bounds")
    p.add_argument("lo", type=decimal)
    p.add_argument("hi", type=decimal)
    p.add_argument("--csv", action="store_true")
    p.add_argument("--out", default=None)
    p.add_argument("--max-range", type=decimal, default=10 ** 7)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("bench", help="multiplication counts on a seeded workload")
    p.add_argument("--bits-lo", type=decimal, default=8)
    p.add_argument("--bits-hi", type=decimal, default=24)
    p.add_argument("--per-bits", type=decimal, default=4)
    _common(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qprime: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidInputError, ResourceLimitError) as exc:
        print(f"qprime: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
