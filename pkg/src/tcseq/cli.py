"""Command line interface.

Examples
--------
    tcseq tables --which fty
    tcseq verify --claims growth --n-max 1000000
    tcseq certify-q8 --k 2..3 --mode exhaustive
    tcseq bounds --group Z2 --n-max 13 --bundled-facts
    tcseq growth --group generic-even --r 3 --m 9

Exit codes: 0 pass, 1 claim failure, 2 table mismatch, 3 engine
contradiction, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import difflib
import io
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Sequence

from . import dyadic, growth, tcbounds
from .f2ring import EXHAUSTIVE, RANDOM, q8_certificate
from .report import FULL, Report, Sampled

EXIT_OK = 0
EXIT_CLAIM_FAILED = 1
EXIT_TABLE_MISMATCH = 2
EXIT_CONTRADICTION = 3
EXIT_USAGE = 64

GOLDEN_DIR = Path(__file__).parent / "data" / "golden"
TABLE_NAMES = ("fty", "remark", "section4")
CLAIMS = ("digits", "kummer", "growth", "section4", "asymptotic", "engine")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- tables ---------------------------------------------------------------------


def _horizontal(rows: list[tuple[str, list[int]]], fmt: str) -> str:
    width = len(rows[0][1])
    header = ["n"] + [str(n) for n in range(1, width + 1)]
    body = [[label] + [str(v) for v in values] for label, values in rows]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(body)
        return buf.getvalue()
    return tcbounds.markdown_table(header, body)


class TableMismatch(Exception):
    pass


def table_rows(which: str, facts_path: Path | None = None, n_max: int = 13) -> list[tuple[str, list[int]]]:
    if which == "fty":
        path = facts_path or tcbounds.bundled_facts_path()
        if not path.exists():
            raise UsageError(f"fact file not found: {path}")
        table = tcbounds.build_table(tcbounds.Z2, n_max, facts=_load_facts(path))
        values = []
        for n in range(1, n_max + 1):
            lo, hi = table.lower(n), table.upper(n)
            if lo != hi:
                raise TableMismatch(f"TC^{n}(Z2) not determined: bounds ({lo}, {hi})")
            values.append(lo)
        return [("TC(RP^n)", values)]
    if which == "remark":
        return [
            ("f(n+1)", [growth.f_of(n + 1) for n in range(1, n_max + 1)]),
            ("beta(n)", growth.beta_values(n_max)[1:]),
        ]
    if which == "section4":
        return [
            ("beta(n)", growth.beta_values(n_max)[1:]),
            ("gamma(n)", [growth.gamma(n) for n in range(1, n_max + 1)]),
        ]
    raise UsageError(f"unknown table {which!r}")


def render_table(which: str, fmt: str = "markdown", facts_path: Path | None = None) -> str:
    return _horizontal(table_rows(which, facts_path), fmt)


def cmd_tables(args) -> int:
    names = TABLE_NAMES if args.which == "all" else (args.which,)
    ext = "csv" if args.format == "csv" else "md"
    status = EXIT_OK
    for idx, name in enumerate(names):
        try:
            text = render_table(name, args.format, args.facts)
        except TableMismatch as exc:
            print(f"{name}: {exc}", file=sys.stderr)
            status = EXIT_TABLE_MISMATCH
            continue
        if idx:
            sys.stdout.write("\n")
        sys.stdout.write(text)
        golden_path = Path(args.golden_dir) / f"{name}.{ext}"
        if not golden_path.exists():
            raise UsageError(f"golden file not found: {golden_path}")
        golden = golden_path.read_text(encoding="utf-8")
        if text != golden:
            diff = difflib.unified_diff(
                golden.splitlines(True), text.splitlines(True), str(golden_path), f"{name} (computed)"
            )
            sys.stderr.writelines(diff)
            status = EXIT_TABLE_MISMATCH
    return status


# -- verify ---------------------------------------------------------------------


def _claim_jobs(args) -> list[tuple[str, Callable[..., Report], tuple]]:
    claims = CLAIMS if args.claims == ["all"] else args.claims
    jobs = []
    for claim in claims:
        if claim == "digits":
            n = args.digits_n_max
            strategy = FULL if n <= 2000 else Sampled(args.seed, args.samples)
            jobs.append((claim, dyadic.verify_digit_identities, (n, strategy)))
        elif claim == "kummer":
            jobs.append((claim, dyadic.verify_kummer_step, (args.k_max or 30,)))
        elif claim == "growth":
            jobs.append((claim, growth.verify_growth_chain, (args.n_max,)))
        elif claim == "section4":
            jobs.append((claim, growth.verify_section4_claims, (args.k_max or 16,)))
        elif claim == "asymptotic":
            jobs.append((claim, growth.asymptotic_report, (args.exponent_max,)))
        elif claim == "engine":
            jobs.append((claim, tcbounds.compare_with_closed_forms, (args.m_max,)))
    return jobs


def _run(job):
    _, fn, fargs = job
    return fn(*fargs)


def _print_report(report: Report, out) -> None:
    print(report.summary_line(), file=out)
    if not report.passed:
        print(f"  failures={report.failures} range={report.checked_range} strategy={report.strategy}", file=out)
        for rel, count in sorted(report.failures_by_relation.items()):
            print(f"  failed relation={rel!r} count={count}", file=out)
        for ce in report.counterexamples[:10]:
            print(f"  counterexample input={ce.input!r} relation={ce.relation!r} observed={ce.observed!r}", file=out)
    for key, value in report.info.items():
        if key == "rows":
            for row in value:
                print(
                    f"  row j={row.j} n={row.n} floor_half={row.floor_half} beta={row.beta} "
                    f"dev_upper={row.upper_deviation} dev_lower={row.lower_deviation}",
                    file=out,
                )
            continue
        if isinstance(value, list) and len(value) > 20:
            value = f"{value[:20]}... ({len(value)} total)"
        elif isinstance(value, dict):
            value = {k: (f"{v[:20]}... ({len(v)} total)" if isinstance(v, list) and len(v) > 20 else v) for k, v in value.items()}
        print(f"  info {key}={value}", file=out)


def cmd_verify(args) -> int:
    jobs = _claim_jobs(args)
    if args.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            reports = list(pool.map(_run, jobs))
    else:
        reports = [_run(job) for job in jobs]
    for report in reports:
        _print_report(report, sys.stdout)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CLAIM_FAILED


# -- certify-q8 -------------------------------------------------------------------


def parse_k_range(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = (int(p) for p in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise UsageError(f"bad k range {text!r}; use K or LO..HI") from None
    if lo > hi:
        raise UsageError(f"empty k range {text!r}")
    return list(range(lo, hi + 1))


def cmd_certify_q8(args) -> int:
    ks = parse_k_range(args.k)
    if ks[0] < 2:
        raise UsageError(
            "the Q8 certificate needs k >= 2: its proof uses the exponent 2^(k-2); "
            "k = 0, 1 can only be applied as stated, uncertified"
        )
    lines = []
    ok = True
    for k in ks:
        cert = q8_certificate(k, args.mode, seed=args.seed, trials=args.trials, strict=False)
        ok = ok and cert.passed
        lines.append(cert.to_record())
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_CLAIM_FAILED


# -- bounds / growth ----------------------------------------------------------------


def _profile(name: str) -> tcbounds.GroupProfile:
    try:
        return tcbounds.PROFILES[name]
    except KeyError:
        raise UsageError(f"unknown group {name!r}; known: {', '.join(tcbounds.PROFILES)}") from None


def _load_facts(path) -> list[tcbounds.IngestedFact]:
    try:
        return tcbounds.load_facts(path)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _facts(args) -> list[tcbounds.IngestedFact]:
    facts = []
    if args.bundled_facts:
        facts += tcbounds.load_facts(tcbounds.bundled_facts_path())
    if args.facts:
        if not Path(args.facts).exists():
            raise UsageError(f"fact file not found: {args.facts}")
        facts += _load_facts(args.facts)
    return facts


def _engine_table(args, n_max: int) -> tcbounds.BoundTable:
    profile = _profile(args.group)
    certs = []
    if profile.has(tcbounds.Trait.IS_Q8) and args.r == 2:
        certs = [q8_certificate(k) for k in range(2, args.certify_k_max + 1)]
    return tcbounds.build_table(
        profile,
        n_max,
        r=args.r,
        facts=_facts(args),
        certificates=certs,
        davis_k_max=args.davis_k_max,
        q8_k_max=args.q8_k_max,
    )


def cmd_bounds(args) -> int:
    table = _engine_table(args, args.n_max)
    if args.format == "csv":
        sys.stdout.write(tcbounds.table_to_csv(table))
    else:
        sys.stdout.write(tcbounds.table_to_markdown(table))
    return EXIT_OK


def cmd_growth(args) -> int:
    if args.m is not None:
        ms = [args.m]
    else:
        ms = list(range(1, args.m_max + 1))
    table = _engine_table(args, max(ms))
    profile = table.profile
    with_beta = args.r == 2 and profile.has(tcbounds.Trait.EVEN_ORDER)
    with_gamma = args.r == 2 and profile.has(tcbounds.Trait.IS_Q8)
    betas = growth.beta_values(max(ms)) if with_beta else None
    header = ["m", "lower", "upper", f"floor(m/{args.r})"]
    header += ["beta(m)"] * with_beta + ["gamma(m)"] * with_gamma + ["provenance"]
    rows = []
    for m in ms:
        gi = tcbounds.growth_interval(table, m)
        row = [str(m), str(gi.lower), str(gi.upper), str(m // args.r)]
        if with_beta:
            row.append(str(betas[m]))
        if with_gamma:
            row.append(str(growth.gamma(m)))
        row.append(" ".join(gi.provenance))
        rows.append(row)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        sys.stdout.write(buf.getvalue())
    else:
        sys.stdout.write(tcbounds.markdown_table(header, rows))
    return EXIT_OK


# -- wiring -----------------------------------------------------------------------------


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _order(text: str) -> int:
    value = _positive(text)
    if value < 2:
        raise argparse.ArgumentTypeError("r must be >= 2")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tcseq", description="Bounds on topological complexity sequences of groups.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log rule applications")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("tables", help="reproduce the published tables and diff them against golden files")
    p.add_argument("--which", choices=TABLE_NAMES + ("all",), default="all")
    p.add_argument("--format", choices=("markdown", "csv"), default="markdown")
    p.add_argument("--facts", type=Path, help="fact file for the TC(RP^n) table (default: bundled)")
    p.add_argument("--golden-dir", default=str(GOLDEN_DIR))
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("verify", help="run verification sweeps")
    p.add_argument("--claims", nargs="+", choices=CLAIMS + ("all",), default=["all"])
    p.add_argument("--n-max", type=_positive, default=10**6, help="growth-chain sweep limit")
    p.add_argument("--k-max", type=_positive, help="section4 (default 16) / kummer (default 30) limit")
    p.add_argument("--m-max", type=_positive, default=1000, help="engine comparison limit")
    p.add_argument("--exponent-max", type=_positive, default=20)
    p.add_argument("--digits-n-max", type=_positive, default=1000)
    p.add_argument("--seed", type=int, default=0, help="seed for sampled digit checks")
    p.add_argument("--samples", type=_positive, default=100_000)
    p.add_argument("--workers", type=_positive, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("certify-q8", help="emit ring certificates for the Q8 lower bound")
    p.add_argument("--k", required=True, help="K or LO..HI")
    p.add_argument("--mode", choices=(EXHAUSTIVE, RANDOM), help="default: exhaustive for k <= 3")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=_positive, default=1000)
    p.add_argument("--out", help="write records here instead of stdout")
    p.set_defaults(func=cmd_certify_q8)

    for name, func, help_ in (
        ("bounds", cmd_bounds, "print the bound table for a group"),
        ("growth", cmd_growth, "print bounds on the growth function"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--group", required=True, help=", ".join(tcbounds.PROFILES))
        p.add_argument("--r", type=_order, default=2, help="sequential order (2 = classical TC)")
        p.add_argument("--facts", help="line-delimited JSON fact file")
        p.add_argument("--bundled-facts", action="store_true", help="also ingest the bundled TC(RP^n) facts")
        p.add_argument("--format", choices=("markdown", "csv"), default="markdown")
        p.add_argument("--davis-k-max", type=_positive)
        p.add_argument("--q8-k-max", type=int)
        p.add_argument("--certify-k-max", type=int, default=3, help="certify the Q8 rule for 2 <= k <= this")
        if name == "bounds":
            p.add_argument("--n-max", type=_positive, default=13)
        else:
            g = p.add_mutually_exclusive_group()
            g.add_argument("--m", type=_positive)
            g.add_argument("--m-max", type=_positive, default=13)
        p.set_defaults(func=func)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    import logging

    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"tcseq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except tcbounds.ContradictionError as exc:
        print(f"tcseq: {exc}", file=sys.stderr)
        return EXIT_CONTRADICTION


if __name__ == "__main__":
    sys.exit(main())
