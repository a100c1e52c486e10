"""Command-line entry point.

Subcommands: matrices, expand, count, dim, pressure, bound, witness, verify,
render.  Parameters may come from a JSON config file (``--config``) whose
keys mirror the flag names; flags given on the command line win.

Exit status: 0 success, 1 usage/config error, 2 verification mismatch,
3 budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import __version__
from .carpet import MoranSequence, carpet_dimension
from .dimension import VerificationSuite, box_dim_sequence, tail_bounds, verify_matrix_counts
from .errors import BudgetExceeded, MoranSliceError, ParseError, VerificationFailure
from .matrices import diff_families, matrix_family
from .multifractal import (CHORDS, DEFAULT_WORD_BUDGET, chord_endpoint, pressure_estimate, spectrum_upper_bound,
                           witness_margins)
from .render import DEFAULT_CANVAS, DEFAULT_ELEMENT_CAP, render_svg
from .slicing import (DEFAULT_CELL_BUDGET, Slope, expansion_value, format_rational, greedy_expand,
                      parse_rational, truncation_bound)

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH, EXIT_BUDGET = 0, 1, 2, 3

DEFAULTS = {
    "slope": "1/1", "sigma": "(0)", "a": None, "depth": 7, "method": "matrix", "q": None,
    "alpha": None, "qgrid": None, "window": 5, "format": None, "out": None,
    "cell_budget": DEFAULT_CELL_BUDGET, "word_budget": DEFAULT_WORD_BUDGET, "seed": 0, "samples": 25,
    "max_denominator": 200, "closed_form": False, "chord": "limit", "canvas": DEFAULT_CANVAS,
    "element_cap": DEFAULT_ELEMENT_CAP,
}

DEFAULT_FORMAT = {"matrices": "table", "pressure": "csv", "bound": "csv", "witness": "csv"}


class UsageError(MoranSliceError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"expected a comma-separated list of numbers, got {text!r}") from None


def parse_qgrid(text) -> list[float]:
    """``START:STEP:END`` inclusive, stepped in exact decimal arithmetic."""
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    parts = str(text).split(":")
    if len(parts) != 3:
        raise ParseError(f"q grid must be START:STEP:END, got {text!r}")
    try:
        start, step, end = (Fraction(p.strip()) for p in parts)
    except ValueError:
        raise ParseError(f"q grid must be START:STEP:END, got {text!r}") from None
    if step <= 0 or end < start:
        raise ParseError(f"q grid needs STEP > 0 and END >= START, got {text!r}")
    out = []
    x = start
    while x <= end:
        out.append(float(x))
        x += step
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("parameters")
    g.add_argument("--config", help="JSON file with parameter values (flags override)")
    g.add_argument("--slope", action="append", help="slope M/N in lowest terms (repeatable for verify)")
    g.add_argument("--sigma", action="append", help="sequence as PREFIX(PERIOD), e.g. '(01)' (repeatable for verify)")
    g.add_argument("--a", action="append", help="intercept p/q (repeatable for verify)")
    g.add_argument("--depth", type=int)
    g.add_argument("--method", choices=["matrix", "oracle", "both"])
    g.add_argument("--q", help="comma-separated q values")
    g.add_argument("--alpha", help="comma-separated alpha values")
    g.add_argument("--qgrid", help="START:STEP:END")
    g.add_argument("--window", type=int)
    g.add_argument("--format", choices=["json", "csv", "table"])
    g.add_argument("--out", help="output path (default stdout)")
    g.add_argument("--cell-budget", type=int, dest="cell_budget")
    g.add_argument("--word-budget", type=int, dest="word_budget")
    g.add_argument("--seed", type=int)
    g.add_argument("--samples", type=int)
    g.add_argument("--max-denominator", type=int, dest="max_denominator")
    g.add_argument("--closed-form", action="store_const", const=True, dest="closed_form",
                   help="also build closed-form matrices and diff them")
    g.add_argument("--chord", choices=list(CHORDS),
                   help="witness chord endpoint: carpet dimension (limit) or depth-k pressure at q=1 (finite)")
    g.add_argument("--canvas", type=int)
    g.add_argument("--element-cap", type=int, dest="element_cap")

    p = _Parser(prog="moranslice", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "matrices": "print the transfer matrices for a slope",
        "expand": "greedy expansion of an intercept",
        "count": "slice cell counts per depth",
        "dim": "box-dimension estimate sequence",
        "pressure": "normalized pressure on a q grid",
        "bound": "level-set dimension upper bound per alpha",
        "witness": "search q in [0,1] where pressure falls below the chord",
        "verify": "matrix vs oracle counts over seeded intercepts",
        "render": "SVG of a carpet approximation and the line",
    }
    for name, h in helps.items():
        sub.add_parser(name, parents=[common], help=h)
    return p


def resolve(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config) as fh:
                filecfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        unknown = set(k.replace("-", "_") for k in filecfg) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        cfg.update({k.replace("-", "_"): v for k, v in filecfg.items()})
    for k in DEFAULTS:
        v = getattr(args, k, None)
        if v is not None:
            cfg[k] = v
    cfg["command"] = args.command
    if cfg["format"] is None:
        cfg["format"] = DEFAULT_FORMAT.get(args.command, "json")
    return cfg


def _listify(v):
    return list(v) if isinstance(v, (list, tuple)) else [v]


def _one(cfg, key):
    vals = _listify(cfg[key])
    if len(vals) != 1:
        raise UsageError(f"--{key} given {len(vals)} times; this command takes one value")
    return vals[0]


def _field(name, fn, value):
    try:
        return fn(value)
    except (ParseError, ValueError) as exc:
        raise UsageError(f"--{name}: {exc}") from None


class Emitter:
    """Writes records as JSON lines, CSV or an aligned table."""

    def __init__(self, fmt: str, stream):
        self.fmt = fmt
        self.stream = stream
        self.rows: list[dict] = []

    def emit(self, rec: dict):
        if self.fmt == "json":
            self.stream.write(json.dumps(rec) + "\n")
        else:
            self.rows.append(rec)

    def close(self):
        if self.fmt == "json" or not self.rows:
            return
        cols = []
        for r in self.rows:
            cols.extend(c for c in r if c not in cols)
        cells = [[_cell(r.get(c, "")) for c in cols] for r in self.rows]
        if self.fmt == "csv":
            w = csv.writer(self.stream, lineterminator="\n")
            w.writerow(cols)
            w.writerows(cells)
        else:
            widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
            self.stream.write("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip() + "\n")
            for row in cells:
                self.stream.write("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() + "\n")


def _cell(v) -> str:
    if isinstance(v, (list, tuple)):
        return " ".join(_cell(x) for x in v)
    if isinstance(v, bool):
        return str(v).lower()
    if v is None:
        return ""
    return str(v) if not isinstance(v, float) else repr(v)


def cmd_matrices(cfg, out: Emitter, stream) -> int:
    slope = _field("slope", Slope.parse, _one(cfg, "slope"))
    echo = {"cmd": "matrices", "slope": str(slope)}
    builders = ["semantic"] + (["closed_form"] if cfg["closed_form"] else [])
    if out.fmt == "table":
        for b in builders:
            for t in (0, 1):
                for A in matrix_family(t, slope, closed_form=b == "closed_form"):
                    stream.write(f"# A_{t}^{A.label} tag={t} j={A.label} order={A.order} builder={b}\n")
                    stream.write(A.format() + "\n")
    else:
        for b in builders:
            for t in (0, 1):
                for A in matrix_family(t, slope, closed_form=b == "closed_form"):
                    out.emit({**echo, "builder": b, "tag": t, "j": A.label, "order": A.order,
                              "entries": A.to_lists()})
    if cfg["closed_form"]:
        diff = diff_families(slope)
        if out.fmt == "table":
            stream.write(f"# diff semantic vs closed_form: {len(diff)} entries\n")
            for d in diff:
                stream.write(json.dumps(d) + "\n")
        else:
            out.emit({**echo, "diff": diff})
        if diff:
            return EXIT_MISMATCH
    return EXIT_OK


def _line_params(cfg):
    slope = _field("slope", Slope.parse, _one(cfg, "slope"))
    sigma = _field("sigma", MoranSequence.parse, _one(cfg, "sigma"))
    if cfg["a"] is None:
        raise UsageError("--a: an intercept is required for this command")
    a = _field("a", parse_rational, _one(cfg, "a"))
    if not slope.contains(a):
        lo, hi = slope.interval
        raise UsageError(f"--a: intercept {format_rational(a)} outside [{format_rational(lo)}, {format_rational(hi)}]")
    depth = cfg["depth"]
    if not isinstance(depth, int) or depth < 0:
        raise UsageError(f"--depth: must be a nonnegative integer, got {depth!r}")
    return slope, sigma, a, depth


def cmd_expand(cfg, out: Emitter) -> int:
    slope, sigma, a, depth = _line_params(cfg)
    exp = greedy_expand(a, sigma, slope, depth)
    val = expansion_value(exp, sigma, slope)
    out.emit({"cmd": "expand", "slope": str(slope), "sigma": str(sigma), "a": format_rational(a), "depth": depth,
              "k": exp.k, "digits": list(exp.digits), "boundary": exp.boundary_flag,
              "value": format_rational(val), "error": format_rational(a - val),
              "error_bound": format_rational(truncation_bound(sigma, slope, depth))})
    return EXIT_OK


def cmd_count(cfg, out: Emitter) -> int:
    slope, sigma, a, depth = _line_params(cfg)
    if depth < 1:
        raise UsageError("--depth: must be at least 1")
    method = cfg["method"]
    echo = {"cmd": "count", "slope": str(slope), "sigma": str(sigma), "a": format_rational(a), "method": method}
    est = box_dim_sequence(a, sigma, slope, depth, method, cfg["window"], cfg["cell_budget"])
    for i, k in enumerate(est.depths):
        rec = {**echo, "k": k}
        if method in ("matrix", "both"):
            rec["matrix"] = est.counts[i]
        if method in ("oracle", "both"):
            rec["oracle"] = est.oracle_counts[i] if i < len(est.oracle_counts) else None
        rec["boundary"] = est.boundary
        out.emit(rec)
    if method == "oracle" and est.capped:
        raise BudgetExceeded(f"oracle stopped at depth {len(est.depths)} of {depth} (cell budget {cfg['cell_budget']})")
    return EXIT_OK


def cmd_dim(cfg, out: Emitter) -> int:
    slope, sigma, a, depth = _line_params(cfg)
    if depth < 1:
        raise UsageError("--depth: must be at least 1")
    method = cfg["method"]
    echo = {"cmd": "dim", "slope": str(slope), "sigma": str(sigma), "a": format_rational(a), "method": method}
    est = box_dim_sequence(a, sigma, slope, depth, method, cfg["window"], cfg["cell_budget"])
    for k, c, e in zip(est.depths, est.counts, est.estimates):
        out.emit({**echo, "k": k, "count": c, "estimate": e, "boundary": est.boundary})
    w = min(cfg["window"], len(est.estimates))
    if w >= 1:
        lo, hi = tail_bounds(est, w)
        out.emit({**echo, "summary": True, "depth": est.depths[-1], "window": w, "lower_proxy": lo,
                  "upper_proxy": hi, "capped": est.capped, "boundary": est.boundary})
    return EXIT_OK


def _curve_params(cfg):
    slope = _field("slope", Slope.parse, _one(cfg, "slope"))
    sigma = _field("sigma", MoranSequence.parse, _one(cfg, "sigma"))
    k = cfg["depth"]
    if not isinstance(k, int) or k < 1:
        raise UsageError(f"--depth: must be a positive integer, got {k!r}")
    return slope, sigma, k


def _qs(cfg, default="-2:0.25:2"):
    if cfg["q"] is not None:
        return _field("q", _float_list, cfg["q"])
    return _field("qgrid", parse_qgrid, cfg["qgrid"] if cfg["qgrid"] is not None else default)


def cmd_pressure(cfg, out: Emitter) -> int:
    slope, sigma, k = _curve_params(cfg)
    for q in _qs(cfg):
        raw, norm = pressure_estimate(q, sigma, slope, k, cfg["word_budget"])
        out.emit({"cmd": "pressure", "slope": str(slope), "sigma": str(sigma), "q": q, "k": k,
                  "raw": raw, "normalized": norm})
    return EXIT_OK


def cmd_bound(cfg, out: Emitter) -> int:
    slope, sigma, k = _curve_params(cfg)
    grid = _qs(cfg)
    alphas = _field("alpha", _float_list, cfg["alpha"]) if cfg["alpha"] is not None else [carpet_dimension(sigma) - 1]
    for alpha in alphas:
        bound, qmin = spectrum_upper_bound(alpha, sigma, slope, k, grid, cfg["word_budget"])
        out.emit({"cmd": "bound", "slope": str(slope), "sigma": str(sigma), "alpha": alpha, "k": k,
                  "bound": bound, "q_min": qmin})
    return EXIT_OK


def cmd_witness(cfg, out: Emitter) -> int:
    slope, sigma, k = _curve_params(cfg)
    grid = _qs(cfg, default="0.1:0.1:0.9")
    if any(not 0 <= q <= 1 for q in grid):
        raise UsageError("witness grid must lie in [0, 1]")
    top = chord_endpoint(sigma, slope, k, cfg["chord"])
    echo = {"cmd": "witness", "slope": str(slope), "sigma": str(sigma), "k": k, "chord": cfg["chord"]}
    margins = witness_margins(sigma, slope, k, grid, cfg["word_budget"], cfg["chord"])
    best = None
    for q, m in margins:
        out.emit({**echo, "q": q, "normalized": m + 1 + (top - 1) * q, "chord_value": 1 + (top - 1) * q, "margin": m})
        if m < 0 and (best is None or m < best[1]):
            best = (q, m)
    out.emit({**echo, "q": best[0] if best else None, "normalized": None, "chord_value": None,
              "margin": best[1] if best else None, "witness": best is not None})
    return EXIT_OK


def cmd_verify(cfg, out: Emitter) -> int:
    slopes = [_field("slope", Slope.parse, s) for s in _listify(cfg["slope"])]
    sigmas = [_field("sigma", MoranSequence.parse, s) for s in _listify(cfg["sigma"])]
    intercepts = [_field("a", parse_rational, a) for a in _listify(cfg["a"] or [])]
    suite = VerificationSuite(slopes, sigmas, seed=cfg["seed"], samples=cfg["samples"], depth=cfg["depth"],
                              intercepts=intercepts, max_denominator=cfg["max_denominator"],
                              cell_budget=cfg["cell_budget"])
    report = verify_matrix_counts(suite)
    for rec in sorted(report.records, key=lambda r: r["sample"]):
        out.emit({"cmd": "verify", "seed": suite.seed, **rec})
    summary = (f"verify: checked={report.checked} skipped_boundary={report.skipped} "
               f"mismatches={report.mismatches} -> {'PASS' if report.passed else 'FAIL'}\n")
    sys.stderr.write(summary)
    return EXIT_OK if report.passed else EXIT_MISMATCH


def cmd_render(cfg, stream) -> int:
    sigma = _field("sigma", MoranSequence.parse, _one(cfg, "sigma"))
    depth = cfg["depth"]
    slope = a = None
    if cfg["a"] is not None:
        slope, sigma, a, depth = _line_params(cfg)
    elif not isinstance(depth, int) or depth < 0:
        raise UsageError(f"--depth: must be a nonnegative integer, got {depth!r}")
    svg, summary = render_svg(sigma, depth, slope, a, cfg["canvas"], cfg["element_cap"])
    stream.write(svg)
    rec = {"cmd": "render", "sigma": str(sigma), "depth": depth, **summary}
    if slope is not None:
        rec.update(slope=str(slope), a=format_rational(a))
    sys.stderr.write(json.dumps(rec) + "\n")
    return EXIT_OK


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    stream = None
    try:
        cfg = resolve(args)
        stream = open(cfg["out"], "w", newline="") if cfg["out"] else stdout
        out = Emitter(cfg["format"], stream)
        cmd = cfg["command"]
        try:
            if cmd == "matrices":
                code = cmd_matrices(cfg, out, stream)
            elif cmd == "render":
                code = cmd_render(cfg, stream)
            else:
                code = {"expand": cmd_expand, "count": cmd_count, "dim": cmd_dim, "pressure": cmd_pressure,
                        "bound": cmd_bound, "witness": cmd_witness, "verify": cmd_verify}[cmd](cfg, out)
        finally:
            out.close()
        return code
    except VerificationFailure as exc:
        _error_record(stdout, "VerificationFailure", str(exc), exc.record)
        return EXIT_MISMATCH
    except BudgetExceeded as exc:
        _error_record(stdout, type(exc).__name__, str(exc))
        return EXIT_BUDGET
    except (MoranSliceError, ValueError, OSError) as exc:
        _error_record(stdout, type(exc).__name__, str(exc))
        return EXIT_USAGE
    finally:
        if stream is not None and stream is not stdout:
            stream.close()


def _error_record(stdout, kind, message, extra=None):
    rec = {"error": kind, "message": message}
    if extra:
        rec.update(extra)
    stdout.write(json.dumps(rec) + "\n")
    sys.stderr.write(f"moranslice: {kind}: {message}\n")


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
