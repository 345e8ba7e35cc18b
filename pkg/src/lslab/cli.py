"""Command-line front door.

Subcommands: compute, table, verify, roots, clt, edgeworth, asymptotics.
Exit codes: 0 success, 1 invariant failure, 2 usage, 3 resource limit,
4 cache corruption (the table is still produced from a fresh build).
All output is deterministic for a fixed configuration: exact values are
printed as decimal strings, floats at a digit count derived from
--precision-bits, and parallel sections reduce in fixed order.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import mpmath as mp

from . import cache, clt, edgeworth, genpoly, laplace, sturm, triangles, verify
from .errors import CacheCorruptionError, LslabError, ResourceLimitError

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_CACHE = 4


@dataclass
class RunConfig:
    """Validated knobs shared by the subcommands.  gamma is set exactly
    when the command addresses a triangle family; precision_bits >= 64
    and threads >= 1 always hold after from_args."""

    family: str | None = None
    gamma: triangles.GammaParam | None = None
    n: int | None = None
    j: int | None = None
    precision_bits: int = 256
    fmt: str = "csv"
    cache_dir: Path | None = None
    threads: int = 1

    @classmethod
    def from_args(cls, parser, args) -> "RunConfig":
        bits = getattr(args, "precision_bits", 256)
        if bits < 64:
            parser.error("--precision-bits must be at least 64")
        threads = getattr(args, "threads", 1)
        if threads < 1:
            parser.error("--threads must be at least 1")
        family = getattr(args, "family", None)
        gamma = None
        if family is not None:
            gamma = cls._resolve_gamma(parser, family, getattr(args, "gamma", None))
        cache_dir = getattr(args, "cache_dir", None)
        return cls(
            family=family,
            gamma=gamma,
            n=getattr(args, "n", None),
            j=getattr(args, "j", None),
            precision_bits=bits,
            fmt=getattr(args, "format", "csv"),
            cache_dir=Path(cache_dir) if cache_dir else None,
            threads=threads,
        )

    @staticmethod
    def _resolve_gamma(parser, family, gamma) -> triangles.GammaParam:
        if family == "jacobi":
            if gamma is None:
                parser.error("--gamma is required for --family jacobi")
            try:
                return triangles.GammaParam.parse(gamma)
            except (ValueError, ZeroDivisionError) as exc:
                parser.error(f"bad --gamma: {exc}")
        if gamma is not None:
            parser.error("--gamma is only valid with --family jacobi")
        if family not in triangles.FAMILY_GAMMAS:
            parser.error(f"unknown family {family!r}")
        return triangles.FAMILY_GAMMAS[family]


def _digits(bits: int) -> int:
    return max(8, int(bits * 0.301))


def _open_out(path: str | None):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w"), True


def _emit(fp, close: bool):
    if close:
        fp.close()


def cmd_compute(parser, args, cfg: RunConfig) -> int:
    value = triangles.jacobi_stirling(cfg.n, cfg.j, cfg.gamma)
    print(triangles.format_entry(value))
    return EXIT_OK


def cmd_table(parser, args, cfg: RunConfig) -> int:
    cache_dir = cache.resolve_cache_dir(cfg.cache_dir)
    lines, _, corrupted = cache.load_or_build(cfg.gamma, args.n_max, cache_dir)
    fp, close = _open_out(args.out)
    try:
        if cfg.fmt == "json":
            for line in lines:
                fp.write(line + "\n")
        else:
            fp.write("n,j,value\n")
            for n, j, value in cache.lines_to_entries(lines):
                fp.write(f"{n},{j},{triangles.format_entry(value)}\n")
    finally:
        _emit(fp, close)
    if corrupted:
        print("warning: cache was corrupted and has been rebuilt", file=sys.stderr)
        return EXIT_CACHE
    return EXIT_OK


def cmd_verify(parser, args, cfg: RunConfig) -> int:
    cfg = verify.SuiteConfig(precision_bits=args.precision_bits, threads=args.threads)
    ratio_only = False
    if args.n is not None or args.j is not None:
        if args.suite != "clt" or args.n is None or args.j is None:
            parser.error("--n/--j select the ratio target and need suite 'clt'")
        cfg.ratio_n, cfg.ratio_j = args.n, args.j
        ratio_only = True
    if args.n_max is not None:
        cfg.identities_max = args.n_max
        cfg.certificate_max = args.n_max
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    results = verify.run_suites(names, cfg, ratio_only=ratio_only)
    for result in results:
        print(result.line())
    failures = [r for r in results if not r.passed]
    if failures:
        print(f"{len(failures)} of {len(results)} checks failed", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_roots(parser, args, cfg: RunConfig) -> int:
    cert = sturm.certify_roots(args.n)
    if args.refine_bits:
        roots = sturm.refine_roots(cert, args.refine_bits)
        payload = json.loads(cert.to_json())
        payload["roots"] = [mp.nstr(r, _digits(args.refine_bits)) for r in roots]
        print(json.dumps(payload))
    else:
        print(cert.to_json())
    return EXIT_OK


def cmd_clt(parser, args, cfg: RunConfig) -> int:
    bits = args.precision_bits
    if args.report == "ratio":
        if args.n is None or args.j is None:
            parser.error("ratio report needs --n and --j")
        rep = clt.ratio_check(args.n, args.j, bits)
        print(json.dumps(rep.to_json_dict()))
        return EXIT_OK
    fp, close = _open_out(args.out)
    try:
        if args.report == "residuals":
            ns = args.n_list or [100, 200, 400]
            clt.mean_variance_residuals(ns, bits).to_csv(fp)
        else:  # cdf
            if args.n is None:
                parser.error("cdf report needs --n")
            digits = _digits(bits)
            fp.write("y,scaled_cdf,normal_cdf\n")
            with mp.workprec(bits):
                for i in range(-40, 41):
                    y = mp.mpf(i) / 10
                    lhs = clt.scaled_cdf(args.n, y, bits)
                    rhs = clt.normal_cdf(y, bits)
                    fp.write(
                        f"{mp.nstr(y, 3)},{mp.nstr(lhs, digits)},{mp.nstr(rhs, digits)}\n"
                    )
    finally:
        _emit(fp, close)
    return EXIT_OK


def cmd_edgeworth(parser, args, cfg: RunConfig) -> int:
    bits = args.precision_bits
    n = args.n
    prof = edgeworth.cumulants_from_genpoly(genpoly.legendre_genpoly_fast(n), 6, bits)
    row = triangles.modified_legendre_row(n)
    total = sum(row)
    digits = _digits(bits)
    fp, close = _open_out(args.out)
    try:
        fp.write("j,x,sigma_p,order2,order3,abs_err2,abs_err3\n")
        with mp.workprec(bits):
            sigma = mp.sqrt(mp.mpf(prof.variance.numerator) / prof.variance.denominator)
            mean = mp.mpf(prof.mean.numerator) / prof.mean.denominator
            for j in range(n + 1):
                x = (j - mean) / sigma
                target = sigma * mp.mpf(row[j]) / total
                v2 = edgeworth.density_expansion(prof, j, 2, bits)
                v3 = edgeworth.density_expansion(prof, j, 3, bits)
                fp.write(
                    ",".join(
                        [str(j)]
                        + [
                            mp.nstr(v, digits)
                            for v in (x, target, v2, v3, abs(target - v2), abs(target - v3))
                        ]
                    )
                    + "\n"
                )
    finally:
        _emit(fp, close)
    return EXIT_OK


def cmd_asymptotics(parser, args, cfg: RunConfig) -> int:
    bits = args.precision_bits
    if args.report == "saddle":
        z = clt.saddle_constant(bits) if args.z == "w" else mp.mpf(args.z)
        ns = args.n_list or [100, 200, 400]
        rep = laplace.saddle_expansion_check(args.nu, z, ns, bits)
        fp, close = _open_out(args.out)
        try:
            rep.to_csv(fp)
        finally:
            _emit(fp, close)
        return EXIT_OK
    if args.report == "residuals":
        ns = args.n_list or [100, 200, 400]
        fp, close = _open_out(args.out)
        try:
            clt.mean_variance_residuals(ns, bits).to_csv(fp)
        finally:
            _emit(fp, close)
        return EXIT_OK
    # mass: total-mass ratio decay table
    ns = args.n_list or [50, 100, 200, 400]
    digits = _digits(bits)
    fp, close = _open_out(args.out)
    try:
        fp.write("n,mass_ratio,abs_deviation\n")
        for n in ns:
            m = clt.total_mass_ratio(n, bits)
            fp.write(f"{n},{mp.nstr(m, digits)},{mp.nstr(abs(m - 1), digits)}\n")
    finally:
        _emit(fp, close)
    return EXIT_OK


def _add_common(sub, *, precision=True, threads=True):
    if precision:
        sub.add_argument("--precision-bits", type=int, default=256)
    if threads:
        sub.add_argument("--threads", type=int, default=1)


def _n_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad n list {text!r}")
    if values != sorted(values):
        raise argparse.ArgumentTypeError("n list must be ascending")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lslab",
        description="Exact and asymptotic laboratory for Jacobi/Legendre/Chebyshev-"
        "Stirling numbers of the second kind.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("compute", help="print one exact triangle entry")
    p.add_argument("--family", required=True, choices=["legendre", "chebyshev", "jacobi"])
    p.add_argument("--gamma", help="rational p/q, required iff --family jacobi")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int, required=True)

    p = subs.add_parser("table", help="emit a triangle as CSV or JSON lines")
    p.add_argument("--family", required=True, choices=["legendre", "chebyshev", "jacobi"])
    p.add_argument("--gamma")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default="-")
    p.add_argument("--cache-dir")

    p = subs.add_parser("verify", help="run a named verification suite")
    p.add_argument(
        "suite", choices=["identities", "roots", "eisenstein", "clt", "edgeworth", "all"]
    )
    p.add_argument("--n", type=int, help="ratio-check row (suite clt)")
    p.add_argument("--j", type=int, help="ratio-check column (suite clt)")
    p.add_argument("--n-max", type=int, help="cap for the exhaustive identity scans")
    _add_common(p)

    p = subs.add_parser("roots", help="certify the generating polynomial roots")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--refine-bits", type=int, default=0)

    p = subs.add_parser("clt", help="ratio / residual / cdf reports")
    p.add_argument("--report", choices=["ratio", "residuals", "cdf"], default="ratio")
    p.add_argument("--n", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--n-list", type=_n_list)
    p.add_argument("--out", default="-")
    _add_common(p, threads=False)

    p = subs.add_parser("edgeworth", help="expansion comparison table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default="-")
    _add_common(p, threads=False)

    p = subs.add_parser("asymptotics", help="saddle/residual/mass decay tables")
    p.add_argument("--report", choices=["saddle", "residuals", "mass"], default="saddle")
    p.add_argument("--nu", type=int, default=0)
    p.add_argument("--z", default="w", help="positive real, or 'w' for the saddle constant")
    p.add_argument("--n-list", type=_n_list)
    p.add_argument("--out", default="-")
    _add_common(p, threads=False)

    return parser


COMMANDS = {
    "compute": cmd_compute,
    "table": cmd_table,
    "verify": cmd_verify,
    "roots": cmd_roots,
    "clt": cmd_clt,
    "edgeworth": cmd_edgeworth,
    "asymptotics": cmd_asymptotics,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = RunConfig.from_args(parser, args)
    try:
        return COMMANDS[args.command](parser, args, config)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except CacheCorruptionError as exc:
        print(f"cache error: {exc}", file=sys.stderr)
        return EXIT_CACHE
    except LslabError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
