"""Command-line surface: computation, verification, charts.

Every command writes byte-deterministic output for a fixed invocation;
parallel fan-out merges results in canonical order so --jobs never changes
the bytes.  Exit codes: 0 success/pass, 1 verification or computation
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor

from . import charts, cobar, hopf, xadic
from .grading import RO2Degree


class UsageError(Exception):
    pass


def parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise UsageError(f"expected a range like -4..4, got {text!r}")
    try:
        bounds = int(lo), int(hi)
    except ValueError:
        raise UsageError(f"expected integer bounds in {text!r}") from None
    if bounds[0] > bounds[1]:
        raise UsageError(f"empty range {text!r}")
    return bounds


def parse_level(text: str):
    if text == "inf":
        return None
    try:
        n = int(text)
    except ValueError:
        raise UsageError(f"level must be a positive integer or 'inf', got {text!r}") from None
    if n < 1:
        raise UsageError(f"level must be a positive integer or 'inf', got {text!r}")
    return n


def level_str(n) -> str:
    return "inf" if n is None else str(n)


def emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def emit_json(obj, path: str | None) -> None:
    emit(json.dumps(obj, indent=2, ensure_ascii=False) + "\n", path)


def default_jobs() -> int:
    return os.cpu_count() or 1


def pool_map(fn, items, jobs: int):
    """Map preserving input order; fan out only when it can actually help."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    chunk = max(1, len(items) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


# -- workers (top level so they pickle) --------------------------------------

def _ext_cell(args):
    n, s, p, q, invert = args
    res = cobar.ext_dim(s, RO2Degree(p, q), n, invert)
    return s, p, q, res.dim, res.rep_labels


def _einfty_cell(args):
    n, s, p, q = args
    d = RO2Degree(p, q)
    got = cobar.ext_dim(s, d, n, False).dim
    want = len(xadic.einfty_basis(n, s, d))
    return s, p, q, got, want


def _stem_column(args):
    stem, s_max = args
    out = []
    for s in range(s_max + 1):
        d = RO2Degree(stem + s, 0)
        for mono in xadic.einfty_basis(None, s, d):
            dd = mono.degree()
            out.append((dd.p - mono.filtration, mono.filtration, dd.q, mono.label()))
    return out


# -- commands -----------------------------------------------------------------

def cmd_ext(args) -> int:
    n = parse_level(args.n)
    if args.invert_u and n is None:
        raise UsageError(
            "u cannot be inverted at level inf; use limit-ext for the completed value"
        )
    res = cobar.ext_dim(args.s, RO2Degree(args.p, args.q), n, args.invert_u)
    emit_json(
        {"s": args.s, "p": args.p, "q": args.q, "n": level_str(n),
         "dim": res.dim, "basis": list(res.rep_labels)},
        args.out,
    )
    return 0


def cmd_ext_table(args) -> int:
    n = parse_level(args.n)
    if args.invert_u and n is None:
        raise UsageError(
            "u cannot be inverted at level inf; use limit-ext for the completed value"
        )
    s_lo, s_hi = parse_range(args.s)
    p_lo, p_hi = parse_range(args.p)
    q_lo, q_hi = parse_range(args.q)
    if s_lo < 0:
        raise UsageError("filtration window must start at 0 or above")
    cells = [
        (n, s, p, q, args.invert_u)
        for s in range(s_lo, s_hi + 1)
        for p in range(p_lo, p_hi + 1)
        for q in range(q_lo, q_hi + 1)
    ]
    rows = pool_map(_ext_cell, cells, args.jobs)
    lines = ["n\ts\tp\tq\tdim\tbasis"]
    for s, p, q, dim, labels in rows:
        lines.append(f"{level_str(n)}\t{s}\t{p}\t{q}\t{dim}\t{';'.join(labels)}")
    emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_limit_ext(args) -> int:
    report = cobar.limit_ext_report(
        args.s, RO2Degree(args.p, args.q),
        range(args.start, args.start + args.depth + 1),
    )
    emit_json(report.to_dict(), args.out)
    return 0 if report.stabilized else 1


def cmd_verify_axioms(args) -> int:
    ok = True
    summaries = []
    for n in range(1, args.nmax + 1):
        cap = 2**n - 1
        e_max = cap if args.letters is None else min(args.letters, cap)
        report = hopf.check_axioms(
            n, e_max, coeff_window=args.window, cone_window=args.window)
        ok = ok and report.ok
        for line in report.lines():
            print(line)
        summaries.append({
            "n": n,
            "checks": [
                {"name": c.name, "cases": c.cases, "ok": c.ok,
                 "counterexample": c.counterexample}
                for c in report.checks
            ],
        })
    emit_json({"ok": ok, "levels": summaries}, args.out)
    return 0 if ok else 1


def cmd_verify_coboundary(args) -> int:
    single = args.r is not None or args.m is not None
    if single and (args.r is None or args.m is None):
        raise UsageError("--r and --m go together")
    checks = []
    if single:
        n = args.n if args.n is not None else args.r + 1
        checks.append(xadic.verify_coboundary(args.r, args.m, n))
    else:
        for r in range(args.rmax + 1):
            for m in range(args.mmax + 1):
                for n in range(r + 1, max(args.nmax, r + 1) + 1):
                    checks.append(xadic.verify_coboundary(r, m, n))
    ok = all(c.ok for c in checks)
    for c in checks:
        status = "pass" if c.ok else f"FAIL (kept {list(c.kept_labels)})"
        print(f"r={c.r} m={c.m} n={c.n}: d({c.source_label}) keeps "
              f"{c.expected_label} below the letter cutoff: {status}")
    emit_json(
        {"ok": ok, "checks": [
            {"r": c.r, "m": c.m, "n": c.n, "ok": c.ok,
             "source": c.source_label, "expected": c.expected_label,
             "kept": list(c.kept_labels), "discarded": list(c.discarded_labels)}
            for c in checks
        ]},
        args.out,
    )
    return 0 if ok else 1


def cmd_verify_einfty(args) -> int:
    n = parse_level(args.n)
    cells = [
        (n, s, p, q)
        for s in range(args.smax + 1)
        for p in range(-args.window, args.window + 1)
        for q in range(-args.window, args.window + 1)
    ]
    rows = pool_map(_einfty_cell, cells, args.jobs)
    mismatches = [
        {"s": s, "p": p, "q": q, "ext": got, "closed_form": want}
        for s, p, q, got, want in rows if got != want
    ]
    ok = not mismatches
    print(f"n={level_str(n)}: {len(rows)} tridegrees checked, "
          f"{len(mismatches)} mismatches: {'pass' if ok else 'FAIL'}")
    emit_json(
        {"ok": ok, "n": level_str(n), "window": args.window, "smax": args.smax,
         "checked": len(rows), "mismatches": mismatches},
        args.out,
    )
    return 0 if ok else 1


def cmd_verify_vanishing(args) -> int:
    report = xadic.verify_vanishing(
        parse_range(args.p), parse_range(args.budget), args.smax)
    for e in report.failures():
        print(f"FAIL p={e.p} q={e.q} s={e.s}: expected dim {e.expected_dim} "
              f"{list(e.expected_basis)}, got {e.got_dim} {list(e.got_basis)} "
              f"(levels {list(e.levels)}, rule {e.rule})")
    print(f"{len(report.entries)} tridegrees checked, "
          f"{len(report.failures())} failures: {'pass' if report.ok else 'FAIL'}")
    emit_json(
        {"ok": report.ok, "checked": len(report.entries),
         "failures": [
             {"p": e.p, "q": e.q, "s": e.s, "expected_dim": e.expected_dim,
              "got_dim": e.got_dim, "levels": list(e.levels), "rule": e.rule}
             for e in report.failures()
         ]},
        args.out,
    )
    return 0 if report.ok else 1


def cmd_verify_localization(args) -> int:
    report = cobar.verify_localization(
        tuple(args.n), window=args.window, s_max=args.smax)
    for e in report.failures():
        print(f"FAIL n={e.n} s={e.s} p={e.p} q={e.q}: inverted {e.inverted_dim}, "
              f"shifted dims {list(e.shifted_dims)} at t={list(e.shifts)}, "
              f"periodic={e.periodic_ok}")
    print(f"{len(report.entries)} tridegrees checked, "
          f"{len(report.failures())} failures: {'pass' if report.ok else 'FAIL'}")
    emit_json(
        {"ok": report.ok, "checked": len(report.entries),
         "failures": [
             {"n": e.n, "s": e.s, "p": e.p, "q": e.q,
              "inverted_dim": e.inverted_dim, "shifts": list(e.shifts),
              "shifted_dims": list(e.shifted_dims), "periodic_ok": e.periodic_ok}
             for e in report.failures()
         ]},
        args.out,
    )
    return 0 if report.ok else 1


def cmd_xadic(args) -> int:
    n = parse_level(args.n)
    d = RO2Degree(args.p, args.q)
    basis = xadic.xadic_stage(n, args.t, args.s, d)
    diffs = []
    for mono in basis:
        targets = xadic.xadic_differential(n, args.t, mono)
        diffs.append({
            "source": mono.label(),
            "targets": sorted(t.label() for t in targets),
        })
    emit_json(
        {"n": level_str(n), "t": args.t, "s": args.s, "p": args.p, "q": args.q,
         "basis": [m.label() for m in basis], "differentials": diffs},
        args.out,
    )
    return 0


def cmd_chart(args) -> int:
    stem_lo, stem_hi = parse_range(args.stems)
    if args.format not in ("tsv", "json", "svg"):
        raise UsageError(f"unknown format {args.format!r} (expected svg, tsv, json)")
    if args.sigma is None:
        columns = pool_map(
            _stem_column, [(stem, args.smax) for stem in range(stem_lo, stem_hi + 1)],
            args.jobs)
        dots = sorted(
            (charts.ChartDot(*row) for col in columns for row in col
             if stem_lo <= row[0] <= stem_hi),
            key=charts.ChartDot.sort_key,
        )
    else:
        dots = charts.slice_chart(args.sigma, (stem_lo, stem_hi), args.smax, args.n)
    arrows: tuple[charts.ChartArrow, ...] = ()
    if args.conjectural_d2:
        overlay = charts.conjectural_d2_overlay(dots)
        arrows = overlay.arrows
        for drop in overlay.dropped:
            print(f"dropped arrow {drop.source.label} -> {drop.target_label}: "
                  f"{drop.reason}", file=sys.stderr)
        if args.format == "tsv" and args.arrows_out is None:
            raise UsageError("tsv with --conjectural-d2 needs --arrows-out")
    emit(charts.render(dots, arrows, args.format), args.out)
    if args.arrows_out is not None:
        emit(charts.render_arrows_tsv(arrows), args.arrows_out)
    return 0


_ETAR_USAGE = "give either --theta I J or a word-free monomial like 'a^2 u'"


def _parse_word_free(text: str) -> tuple[int, int]:
    alpha = beta = 0
    for piece in text.split():
        if piece == "1":
            continue
        name, sep, exp = piece.partition("^")
        if name not in ("a", "u"):
            raise UsageError(f"unknown factor {piece!r}; {_ETAR_USAGE}")
        try:
            e = int(exp) if sep else 1
        except ValueError:
            raise UsageError(f"bad exponent in {piece!r}") from None
        if name == "a":
            alpha += e
        else:
            beta += e
    if alpha < 0:
        raise UsageError("a-exponents must be nonnegative")
    if beta < 0:
        raise UsageError(
            "negative u-powers have no polynomial expansion; --theta handles the cone")
    return alpha, beta


def cmd_etar(args) -> int:
    if (args.theta is None) == (not args.expr):
        raise UsageError(_ETAR_USAGE)
    if args.theta is not None:
        i, j = args.theta
        if i < 0 or j < 0:
            raise UsageError("--theta needs i, j >= 0")
        terms = hopf.eta_r_negative(hopf.NegativeConeClass(i, j))
        emit(hopf.cone_element_label(terms) + "\n", args.out)
    else:
        alpha, beta = _parse_word_free(" ".join(args.expr))
        terms = hopf.eta_r_positive([(alpha, beta)])
        emit(hopf.positive_element_label(terms) + "\n", args.out)
    return 0


# -- parser -------------------------------------------------------------------

def _add_out(p):
    p.add_argument("--out", default=None, help="write the document here instead of stdout")


def _add_jobs(p):
    p.add_argument("--jobs", type=int, default=default_jobs(),
                   help="worker processes (never affects output bytes)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cobarext",
        description="Completed Ext over the truncated polynomial Hopf algebras "
                    "F2[x]/x^(2^n), with verification suites and charts.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ext", help="one Ext group as JSON")
    p.add_argument("--n", required=True, help="truncation level, or 'inf'")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--invert-u", action="store_true")
    _add_out(p)
    p.set_defaults(func=cmd_ext)

    p = sub.add_parser("ext-table", help="Ext dims over a window as TSV")
    p.add_argument("--n", required=True, help="truncation level, or 'inf'")
    p.add_argument("--s", default="0..4", help="filtration window lo..hi")
    p.add_argument("--p", default="-4..4", help="p window lo..hi")
    p.add_argument("--q", default="-4..4", help="q window lo..hi")
    p.add_argument("--invert-u", action="store_true")
    _add_jobs(p)
    _add_out(p)
    p.set_defaults(func=cmd_ext_table)

    p = sub.add_parser("limit-ext", help="completed Ext via the level tower")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--start", type=int, default=1, help="lowest level of the tower")
    p.add_argument("--depth", type=int, default=3,
                   help="tower spans start..start+depth")
    _add_out(p)
    p.set_defaults(func=cmd_limit_ext)

    p = sub.add_parser("verify", help="verification suites")
    checks = p.add_subparsers(dest="check", required=True)

    c = checks.add_parser("axioms", help="coalgebra/comodule/right-unit laws")
    c.add_argument("--nmax", type=int, default=4)
    c.add_argument("--letters", type=int, default=None,
                   help="cap on bar letters (default: the level's full range)")
    c.add_argument("--window", type=int, default=6,
                   help="bound on coefficient exponents in the suite")
    _add_out(c)
    c.set_defaults(func=cmd_verify_axioms)

    c = checks.add_parser("coboundary",
                          help="u^(2^r(2m+1)) bounds a^(2^(r+1))[x^(2^r)]")
    c.add_argument("--r", type=int, default=None)
    c.add_argument("--m", type=int, default=None)
    c.add_argument("--n", type=int, default=None, help="level (default r+1)")
    c.add_argument("--rmax", type=int, default=3, help="sweep bound when --r is absent")
    c.add_argument("--mmax", type=int, default=3, help="sweep bound when --m is absent")
    c.add_argument("--nmax", type=int, default=4, help="sweep levels r+1..nmax")
    _add_out(c)
    c.set_defaults(func=cmd_verify_coboundary)

    c = checks.add_parser("einfty", help="cobar dims equal closed-form counts")
    c.add_argument("--n", required=True, help="truncation level, or 'inf'")
    c.add_argument("--window", type=int, default=8, help="|p|, |q| bound")
    c.add_argument("--smax", type=int, default=4)
    _add_jobs(c)
    _add_out(c)
    c.set_defaults(func=cmd_verify_einfty)

    c = checks.add_parser("vanishing", help="completed Ext vanishes for p+q<0")
    c.add_argument("--p", default="-8..8", help="p window lo..hi")
    c.add_argument("--budget", default="-8..-1", help="p+q window lo..hi, below 0")
    c.add_argument("--smax", type=int, default=6)
    _add_out(c)
    c.set_defaults(func=cmd_verify_vanishing)

    c = checks.add_parser("localization",
                          help="inverting u agrees with large u^(2^n) shifts")
    c.add_argument("--n", type=int, nargs="+", default=[1, 2], help="levels to sample")
    c.add_argument("--window", type=int, default=6, help="|p|, |q| bound")
    c.add_argument("--smax", type=int, default=4)
    _add_out(c)
    c.set_defaults(func=cmd_verify_localization)

    p = sub.add_parser("xadic", help="one weight-filtration page slice as JSON")
    p.add_argument("--n", required=True, help="truncation level, or 'inf'")
    p.add_argument("--t", type=int, required=True, help="page stage")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    _add_out(p)
    p.set_defaults(func=cmd_xadic)

    p = sub.add_parser("chart", help="Adams-style dot chart")
    p.add_argument("--stems", default="0..7", help="stem window lo..hi")
    p.add_argument("--smax", type=int, default=8)
    p.add_argument("--sigma", type=int, default=None,
                   help="draw this sigma-slice of the completed page "
                        "(default: integer stems, sigma 0)")
    p.add_argument("--n", type=int, default=6,
                   help="top truncation level a sigma-slice tower may use")
    p.add_argument("--conjectural-d2", action="store_true",
                   help="overlay the conjectural degree-2 differential")
    p.add_argument("--format", default="tsv", help="svg, tsv, or json")
    p.add_argument("--arrows-out", default=None,
                   help="write the arrow table here (tsv overlay requires it)")
    _add_jobs(p)
    _add_out(p)
    p.set_defaults(func=cmd_chart)

    p = sub.add_parser("etar", help="expand the right unit on an element")
    p.add_argument("--theta", type=int, nargs=2, metavar=("I", "J"), default=None,
                   help="cone class theta/(a^I u^J)")
    p.add_argument("expr", nargs="*", help="word-free monomial, e.g. 'u' or 'a^3'")
    _add_out(p)
    p.set_defaults(func=cmd_etar)

    return ap


_NEG_RANGE = re.compile(r"^-\d+\.\.-?\d+$")


def normalize_argv(argv) -> list[str]:
    """Attach range values that start with '-' to their flag so argparse
    does not mistake them for options (e.g. --p -8..8 becomes --p=-8..8)."""
    out: list[str] = []
    for tok in argv:
        if (_NEG_RANGE.match(tok) and out and out[-1].startswith("--")
                and "=" not in out[-1]):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8")
    args = build_parser().parse_args(normalize_argv(
        sys.argv[1:] if argv is None else argv))
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (cobar.UnboundedBasisError, hopf.UnboundedCoactionError,
            xadic.StageOutOfRangeError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (cobar.ComplexTooLargeError, cobar.NotStabilizedError,
            charts.ChartMismatchError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
