"""``refcast`` command line.

Exit codes: 0 success, 1 usage or configuration error, 2 validation failure,
3 contingency breach.
"""

from __future__ import annotations

import argparse
import dataclasses
import shlex
import sys
from pathlib import Path
from typing import Sequence

from refcast.config import Config, load_config
from refcast.dataset import (
    VARIABLES,
    Dataset,
    DatasetFormatError,
    extract_observations,
    filter_dataset,
    read_dataset,
    serialize_dataset,
)
from refcast.errors import DomainError
from refcast.hypotests import (
    REST_LABEL,
    STAR_FOOTNOTE,
    compare_groups,
    error_explanation_test,
)
from refcast.rcf import (
    adjust_uplift,
    apply_uplift,
    build_reference_class,
    uplift,
)
from refcast.regime import DEFAULT_TIERS, TierSpec, allocate_outturn, build_regime, check_tiers
from refcast.report import FORMATS, Block, RunReport, money, p_text, pct, text_table
from refcast.stats import moving_average, summarize, tukey_fences
from refcast.store import DatasetStore
from refcast.synth import SynthSpec, generate

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_BREACH = 0, 1, 2, 3

VARIABLE_LABEL = {"cost": "Cost overrun", "schedule": "Schedule overrun"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2, which is reserved
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- helpers


def _variables(choice: str) -> tuple[str, ...]:
    return VARIABLES if choice == "both" else (choice,)


def _load(arg: str, cfg: Config, report: RunReport | None = None) -> Dataset:
    if arg.startswith("@"):
        path = DatasetStore(cfg.dataset_store_path).resolve(arg[1:])
    else:
        path = Path(arg)
    try:
        ds = read_dataset(path)
    except OSError as exc:
        raise UsageError(f"cannot read {arg}: {exc.strerror or exc}") from exc
    ds = Dataset(ds.records, dataclasses.replace(ds.source_meta, path=arg))
    if report is not None:
        report.provenance = ds.source_meta.describe()
        if ds.source_meta.rejected:
            report.warn(f"{len(ds.source_meta.rejected)} invalid row(s) ignored; run `refcast validate` for details")
    return ds


def _parse_filters(items: Sequence[str] | None) -> dict:
    out: dict = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or not value:
            raise UsageError(f"filter {item!r} must look like key=value")
        if key in ("sector", "country", "exclude_country"):
            out[key] = [v.strip() for v in value.split(",") if v.strip()]
        elif key == "years":
            lo, sep2, hi = value.partition("-")
            try:
                out["years"] = (int(lo), int(hi if sep2 else lo))
            except ValueError as exc:
                raise UsageError(f"years filter {value!r} must be FIRST-LAST") from exc
        else:
            raise UsageError(f"unknown filter key {key!r} (sector, country, exclude_country, years)")
    return out


def _parse_floats(text: str, what: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"{what}: expected comma-separated numbers, got {text!r}") from exc


def _parse_level(text: str) -> float:
    text = text.strip()
    if text[:1] in "Pp":
        return float(text[1:]) / 100.0
    value = float(text)
    return value / 100.0 if value > 1 else value


def parse_tiers(text: str, defaults: Sequence[TierSpec] = DEFAULT_TIERS) -> tuple[TierSpec, ...]:
    """Parse ``"P30,P50,P80"`` or ``"contract/contract manager=P30,..."``.

    Unnamed tiers borrow name and owner from the default tier at the same
    P-level, if there is one.
    """
    tiers = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        label, sep, level_text = item.rpartition("=")
        try:
            level = _parse_level(level_text)
        except ValueError as exc:
            raise UsageError(f"bad tier {item!r}") from exc
        if sep:
            name, _, owner = label.partition("/")
        else:
            match = next((d for d in defaults if abs(d.p_level - level) < 1e-12), None)
            name, owner = (match.name, match.owner) if match else (f"P{level * 100:g}", "")
        tiers.append(TierSpec(name.strip(), level, owner.strip()))
    check_tiers(tiers)
    return tuple(tiers)


def _plot_dir(args) -> Path | None:
    if not getattr(args, "plot", None):
        return None
    d = Path(args.plot)
    d.mkdir(parents=True, exist_ok=True)
    return d


# ---------------------------------------------------------------- commands


def cmd_validate(args, cfg: Config, report: RunReport) -> None:
    ds = _load(args.path, cfg)
    meta = ds.source_meta
    report.provenance = meta.describe()
    n_cost = len(extract_observations(ds, "cost"))
    n_sched = len(extract_observations(ds, "schedule"))
    report.blocks.append(
        Block(
            "summary",
            ["variable", "records", "rejected", "observations", "skipped"],
            [
                {
                    "variable": v,
                    "records": len(ds.records),
                    "rejected": len(meta.rejected),
                    "observations": n,
                    "skipped": ds.skipped(v),
                }
                for v, n in (("cost", n_cost), ("schedule", n_sched))
            ],
        )
    )
    if meta.rejected:
        report.blocks.append(
            Block(
                "rejected",
                ["variable", "row", "reason", "detail"],
                [{"variable": None, "row": r.row, "reason": r.reason, "detail": r.detail} for r in meta.rejected],
            )
        )
        report.exit_code = EXIT_INVALID
    if not ds.records:
        report.warn("dataset has no records (n=0)")
    if args.register and report.exit_code == EXIT_OK:
        target = DatasetStore(cfg.dataset_store_path).register(args.register, Path(args.path), ds)
        report.warn(f"registered as @{args.register} ({target})")


def _describe_rows(label: str, ds: Dataset, variables, report: RunReport):
    rows, text_rows, swans = [], [], {}
    for v in variables:
        obs = extract_observations(ds, v)
        row_label = f"{label}: {VARIABLE_LABEL[v]}" if label else VARIABLE_LABEL[v]
        row = {"variable": v, "group": label or "all"}
        if not obs:
            report.warn(f"{row_label}: no observations")
            rows.append(row | {"n": 0})
            text_rows.append([row_label, "NA", "NA", "NA", "NA", "0", "NA", "NA"])
            continue
        s = summarize(obs)
        row.update(n=s.n, mean=s.mean, median=s.median, min=s.min, max=s.max, freq_overrun=s.freq_overrun)
        fence_txt = share_txt = "NA"
        if s.n >= 4:
            f = tukey_fences(obs)
            high = [i for i, x in zip(f.outlier_ids, f.outlier_values) if x >= f.upper_fence]
            swans[v] = set(high)
            row.update(
                upper_fence=f.upper_fence,
                lower_fence=f.lower_fence,
                n_outliers=len(f.outlier_ids),
                outlier_share=f.outlier_share,
            )
            fence_txt, share_txt = f">= {pct(f.upper_fence)}", pct(f.outlier_share, signed=False)
        else:
            report.warn(f"{row_label}: fewer than 4 observations, no outlier fences")
        rows.append(row)
        text_rows.append(
            [
                row_label,
                pct(s.mean),
                pct(s.median),
                f"{pct(s.min)} to {pct(s.max)}",
                pct(s.freq_overrun, signed=False),
                str(s.n),
                fence_txt,
                share_txt,
            ]
        )
    return rows, text_rows, swans


DESCRIBE_COLUMNS = [
    "variable", "group", "n", "mean", "median", "min", "max", "freq_overrun",
    "upper_fence", "lower_fence", "n_outliers", "outlier_share",
]
DESCRIBE_HEADER = [
    "", "Average", "Median", "Range", "Frequency of overrun", "Sample size (n)",
    "Outlier fence", "Outlier share",
]


def cmd_describe(args, cfg: Config, report: RunReport) -> None:
    ds = _load(args.path, cfg, report)
    variables = _variables(args.variable)
    if args.by == "none":
        groups = [("", ds)]
    else:
        labels = list(dict.fromkeys(getattr(r, args.by) for r in ds.records))
        groups = [(lab, filter_dataset(ds, **{args.by: lab})) for lab in labels]
    rows, text_rows, swan_rows = [], [], []
    for label, sub in groups:
        r, t, swans = _describe_rows(label, sub, variables, report)
        rows += r
        text_rows += t
        if len(swans) == 2:
            joint = swans["cost"] & swans["schedule"]
            swan_rows.append(
                {
                    "variable": "both",
                    "group": label or "all",
                    "cost_outliers": len(swans["cost"]),
                    "schedule_outliers": len(swans["schedule"]),
                    "joint": len(joint),
                    "joint_share": len(joint) / len(sub.records),
                }
            )
    title = "Cost and schedule overruns" if len(variables) == 2 else VARIABLE_LABEL[variables[0]] + "s"
    scope = f" by {args.by}" if args.by != "none" else ""
    text = f"{title}{scope}\n" + text_table(DESCRIBE_HEADER, text_rows)
    if swan_rows:
        text += "\n\n" + "\n".join(
            f"Upper outliers{(' (' + r['group'] + ')') if r['group'] != 'all' else ''}: "
            f"{r['cost_outliers']} cost, {r['schedule_outliers']} schedule, "
            f"{r['joint']} in both ({pct(r['joint_share'], signed=False)} of projects)"
            for r in swan_rows
        )
    report.blocks.append(Block("describe", DESCRIBE_COLUMNS, rows, text))
    if swan_rows:
        report.blocks.append(
            Block("black_swans", ["variable", "group", "cost_outliers", "schedule_outliers", "joint", "joint_share"], swan_rows, "")
        )


def cmd_compare(args, cfg: Config, report: RunReport) -> None:
    ds = _load(args.path, cfg, report)
    variables = _variables(args.variable)
    table = compare_groups(ds, args.group_col, args.baseline, split=args.split, variables=variables)
    for note in table.notes:
        report.warn(note)

    def display(label: str) -> str:
        if label == REST_LABEL and args.split:
            return "Rest of the world" if args.group_col == "country" else "Other"
        return label

    header = [""]
    for v in variables:
        word = v
        header += [f"{word.capitalize()} overrun (mean)", f"Frequency of {word} overrun"]
    header.append("Sample size (n)")
    text_rows = []
    for row in table.rows:
        cells = [display(row.group)]
        for v in variables:
            c = row.cells[v]
            cells += [pct(c.mean) + c.stars, pct(c.freq_overrun, signed=False)]
        cells.append(str(row.n_records))
        text_rows.append(cells)
    text = (
        f"Overruns by {args.group_col}, compared with {display(args.baseline)}\n"
        + text_table(header, text_rows)
        + f"\n{STAR_FOOTNOTE} (two-sample Wilcoxon rank-sum tests against {display(args.baseline)})"
    )
    report.blocks.append(Block("comparison", [], [], text))

    for v in variables:
        rows, detail = [], []
        for row in table.rows:
            c = row.cells[v]
            t = c.test
            rows.append(
                {
                    "variable": v,
                    "group": row.group,
                    "baseline": row.is_baseline,
                    "n": c.n,
                    "mean": c.mean,
                    "freq_overrun": c.freq_overrun,
                    "u_statistic": t.statistic if t else None,
                    "p_value": t.p_value if t else None,
                    "method": t.method if t else None,
                    "stars": c.stars,
                }
            )
            if t and t.method == "normal_approx":
                report.warn(f"{v}/{row.group}: p-value from normal approximation" + (" (ties present)" if t.ties else ""))
            detail.append(
                [
                    display(row.group),
                    str(c.n),
                    "baseline" if row.is_baseline else ("NA" if t is None else f"{t.statistic:g}"),
                    "" if t is None else p_text(t.p_value),
                    "" if t is None else t.method,
                ]
            )
        text = f"Rank-sum detail: {v} overrun\n" + text_table(["group", "n", "U", "p", "method"], detail)
        report.blocks.append(
            Block(
                f"compare_{v}",
                ["variable", "group", "baseline", "n", "mean", "freq_overrun", "u_statistic", "p_value", "method", "stars"],
                rows,
                text,
            )
        )


def cmd_forecast(args, cfg: Config, report: RunReport) -> None:
    if args.adjust is not None and not (args.evidence or "").strip():
        raise DomainError("adjustment requires hard evidence (--evidence)")
    ds = _load(args.path, cfg, report)
    rc = build_reference_class(ds, args.variable, **_parse_filters(args.filter))
    report.provenance = rc.provenance
    if rc.small_sample:
        report.warn(f"reference class has only {rc.n} projects; 20-30 is the usual minimum")
    rows, text_rows = [], []
    for p in _parse_floats(args.certainty, "--certainty"):
        res = uplift(rc, p)
        if args.adjust is not None:
            res = adjust_uplift(res, args.adjust, args.evidence)
            for note in res.notes:
                report.warn(note)
        budget = apply_uplift(args.base, res.effective) if args.base is not None else None
        rows.append(
            {
                "variable": rc.variable,
                "certainty": p,
                "uplift": res.uplift,
                "adjusted_uplift": res.adjusted_uplift,
                "evidence": res.adjustment_evidence or None,
                "base_estimate": args.base,
                "budget": budget,
            }
        )
        text_rows.append(
            [f"P{p * 100:g}", pct(res.uplift), pct(res.adjusted_uplift) if res.adjusted_uplift is not None else "",
             money(budget) if budget is not None else ""]
        )
    text = (
        f"Reference class: {rc.variable} overrun, n={rc.n}\n"
        + text_table(["Certainty", "Uplift", "Adjusted uplift", "Budget"], text_rows)
    )
    if args.adjust is not None:
        text += f"\nAdjustment x{args.adjust:g} on evidence: {args.evidence.strip()}"
    report.blocks.append(
        Block("forecast", ["variable", "certainty", "uplift", "adjusted_uplift", "evidence", "base_estimate", "budget"], rows, text)
    )
    outdir = _plot_dir(args)
    if outdir is not None:
        from refcast import plotting

        files = plotting.plot_ecdf(rc, outdir) + plotting.plot_uplift(
            rc, outdir, marks=[r["certainty"] for r in rows]
        )
        _files_block(report, files, rc.variable)


def _files_block(report: RunReport, files: Sequence[Path], variable: str | None) -> None:
    report.blocks.append(
        Block(
            "files",
            ["variable", "file"],
            [{"variable": variable, "file": str(f)} for f in files],
            "Files written\n" + "\n".join(f"  {f}" for f in files),
        )
    )


def cmd_regime(args, cfg: Config, report: RunReport) -> None:
    tiers = parse_tiers(args.tiers) if args.tiers else cfg.tiers
    ds = _load(args.path, cfg, report)
    rc = build_reference_class(ds, "cost", **_parse_filters(args.filter))
    report.provenance = rc.provenance
    if rc.small_sample:
        report.warn(f"reference class has only {rc.n} projects; 20-30 is the usual minimum")
    regime = build_regime(rc, args.base, tiers)
    rows, text_rows = [], []
    for t in regime.tiers:
        rows.append(
            {
                "variable": "cost",
                "tier": t.spec.name,
                "p_level": t.spec.p_level,
                "owner": t.spec.owner,
                "uplift": t.uplift,
                "cumulative_budget": t.cumulative_budget,
                "tranche": t.tranche,
            }
        )
        text_rows.append(
            [t.spec.name, f"P{t.spec.p_level * 100:g}", pct(t.uplift), money(t.cumulative_budget), money(t.tranche), t.spec.owner]
        )
    text = (
        f"Contingency regime over base estimate {money(regime.base_estimate)}\n"
        + text_table(["Tier", "P-level", "Uplift", "Cumulative budget", "Tranche", "Owner"], text_rows, "lrrrrl")
        + f"\nTotal funded: {money(regime.total_funded)}"
    )
    report.blocks.append(
        Block("regime", ["variable", "tier", "p_level", "owner", "uplift", "cumulative_budget", "tranche"], rows, text)
    )
    if args.actual is not None:
        alloc = allocate_outturn(regime, args.actual)
        arows = [{"variable": "cost", "tier": "base", "spent": alloc.base_spent, "available": regime.base_estimate}]
        arows += [
            {"variable": "cost", "tier": name, "spent": spent, "available": t.tranche}
            for (name, spent), t in zip(alloc.spends, regime.tiers)
        ]
        text = (
            f"Outturn {money(alloc.actual_cost)}\n"
            + text_table(["Tier", "Spent", "Available"], [[r["tier"], money(r["spent"]), money(r["available"])] for r in arows])
        )
        if alloc.breach:
            text += f"\nBREACH: outturn exceeds total funding by {money(alloc.excess)}"
            report.warn(f"outturn exceeds total funding by {money(alloc.excess)}")
            report.exit_code = EXIT_BREACH
        arows.append({"variable": "cost", "tier": "excess", "spent": alloc.excess, "available": 0.0})
        report.blocks.append(Block("allocation", ["variable", "tier", "spent", "available"], arows, text))
    outdir = _plot_dir(args)
    if outdir is not None:
        from refcast import plotting

        _files_block(report, plotting.plot_regime(regime, outdir), "cost")


def cmd_trend(args, cfg: Config, report: RunReport) -> None:
    window = args.window if args.window is not None else cfg.window
    confidence = args.confidence if args.confidence is not None else cfg.confidence
    ds = _load(args.path, cfg, report)
    filters = _parse_filters(args.filter)
    if filters:
        ds = filter_dataset(ds, **filters)
        report.provenance = ds.source_meta.describe()
    series = {}
    for v in _variables(args.variable):
        obs = extract_observations(ds, v)
        if not obs:
            report.warn(f"{v}: no observations")
            continue
        s = moving_average(obs, window, confidence)
        if not s.points:
            report.warn(f"{v}: no year has two or more observations in its window")
        series[v] = s
        rows = [
            {
                "variable": v,
                "year": p.year,
                "mean": p.window_mean,
                "ci_low": p.ci_low,
                "ci_high": p.ci_high,
                "window_n": p.window_n,
            }
            for p in s.points
        ]
        text = (
            f"{VARIABLE_LABEL[v]}: {window}-year centered moving average, {confidence * 100:g}% t-interval\n"
            + text_table(
                ["Year", "Mean", "CI low", "CI high", "n"],
                [[str(p.year), pct(p.window_mean), pct(p.ci_low), pct(p.ci_high), str(p.window_n)] for p in s.points],
            )
        )
        report.blocks.append(Block(f"trend_{v}", ["variable", "year", "mean", "ci_low", "ci_high", "window_n"], rows, text))
    outdir = _plot_dir(args)
    if outdir is not None and series:
        from refcast import plotting

        _files_block(report, plotting.plot_trend(series, outdir), None)


def cmd_error_test(args, cfg: Config, report: RunReport) -> None:
    ds = _load(args.path, cfg, report)
    res = error_explanation_test(ds)
    for note in res.notes:
        report.warn(note)
    rows, text_rows = [], []
    for r in res.rows:
        rows.append(
            {
                "variable": r.variable,
                "n": r.n,
                "mean": r.mean,
                "signed_rank_statistic": r.signed_rank.statistic,
                "signed_rank_p": r.signed_rank.p_value,
                "signed_rank_method": r.signed_rank.method,
                "freq_overrun": r.freq_overrun,
                "binomial_k": r.binomial.statistic,
                "binomial_n": r.binomial.n,
                "binomial_p": r.binomial.p_value,
            }
        )
        if r.signed_rank.method == "normal_approx":
            report.warn(f"{r.variable}: signed-rank p-value from normal approximation")
        text_rows.append(
            [VARIABLE_LABEL[r.variable], pct(r.mean, signed=False), p_text(r.signed_rank.p_value),
             pct(r.freq_overrun, signed=False), p_text(r.binomial.p_value)]
        )
    text = "Is the forecast error just error?\n" + text_table(
        ["", "Mean", "Signed-rank test (centred on zero?)", "Frequency of overrun",
         "Binomial test (overruns as frequent as underruns?)"],
        text_rows,
    )
    report.blocks.append(
        Block(
            "error_test",
            ["variable", "n", "mean", "signed_rank_statistic", "signed_rank_p", "signed_rank_method",
             "freq_overrun", "binomial_k", "binomial_n", "binomial_p"],
            rows,
            text,
        )
    )


def cmd_synth(args, cfg: Config, report: RunReport) -> str | None:
    first, _, last = args.years.partition("-")
    try:
        years = (int(first), int(last or first))
    except ValueError as exc:
        raise UsageError(f"--years {args.years!r} must be FIRST-LAST") from exc
    spec = SynthSpec(
        n=args.n,
        location=args.location,
        scale=args.scale,
        tail=args.tail,
        seed=args.seed,
        sector=args.sector,
        country=args.country,
        years=years,
        schedule=args.schedule,
    )
    ds = generate(spec)
    text = serialize_dataset(ds)
    if not args.out:
        return text
    Path(args.out).write_text(text, encoding="utf-8")
    report.provenance = ds.source_meta.path or ""
    s = summarize(extract_observations(ds, "cost"))
    report.blocks.append(
        Block(
            "synth",
            ["variable", "n", "mean", "median", "freq_overrun", "file"],
            [{"variable": "cost", "n": s.n, "mean": s.mean, "median": s.median, "freq_overrun": s.freq_overrun, "file": args.out}],
        )
    )
    return None


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=None, help="output format (default from config: text)")
    common.add_argument("--config", default=None, help="JSON config file (else $REFCAST_CONFIG)")
    common.add_argument("--store", default=None, help="dataset store directory; overrides config")

    parser = _Parser(prog="refcast", description="Reference class forecasting for project cost and schedule risk.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, help_text: str, with_path: bool = True):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if with_path:
            p.add_argument("path", help="dataset CSV, or @ID for a dataset in the store")
        return p

    p = add("validate", "Parse a dataset and list rejected rows.")
    p.add_argument("--register", metavar="ID", help="copy into the dataset store under ID when valid")
    p.set_defaults(func=cmd_validate)

    p = add("describe", "Summary statistics and outlier fences per variable.")
    p.add_argument("--variable", choices=("cost", "schedule", "both"), default="both")
    p.add_argument("--by", choices=("none", "sector", "country"), default="none")
    p.set_defaults(func=cmd_describe)

    p = add("compare", "Compare groups against a baseline with rank-sum tests.")
    p.add_argument("--group-col", choices=("sector", "country"), default="sector")
    p.add_argument("--baseline", required=True)
    p.add_argument("--split", action="store_true", help="two groups only: baseline versus all others")
    p.add_argument("--variable", choices=("cost", "schedule", "both"), default="both")
    p.set_defaults(func=cmd_compare)

    p = add("forecast", "Uplifts at chosen certainty levels from a reference class.")
    p.add_argument("--variable", choices=("cost", "schedule"), default="cost")
    p.add_argument("--filter", action="append", metavar="KEY=VALUE",
                   help="sector=..., country=..., exclude_country=..., years=FIRST-LAST (repeatable)")
    p.add_argument("--certainty", default="0.5,0.8", help="comma-separated certainty levels in (0, 1]")
    p.add_argument("--base", type=float, default=None, help="base estimate to uplift")
    p.add_argument("--adjust", type=float, default=None, metavar="FACTOR")
    p.add_argument("--evidence", default=None, help="justification required with --adjust")
    p.add_argument("--plot", metavar="DIR", help="write curve CSVs and SVG plots to DIR")
    p.set_defaults(func=cmd_forecast)

    p = add("regime", "Tiered contingency regime over a base estimate.")
    p.add_argument("--base", type=float, required=True)
    p.add_argument("--tiers", default=None, help='e.g. "P30,P50,P80" or "contract/manager=P30,..."')
    p.add_argument("--filter", action="append", metavar="KEY=VALUE")
    p.add_argument("--actual", type=float, default=None, help="outturn cost to allocate across tiers")
    p.add_argument("--plot", metavar="DIR")
    p.set_defaults(func=cmd_regime)

    p = add("trend", "Centered moving average of overruns by decision year.")
    p.add_argument("--variable", choices=("cost", "schedule", "both"), default="both")
    p.add_argument("--window", type=int, default=None, help="odd window width in years (default 11)")
    p.add_argument("--confidence", type=float, default=None)
    p.add_argument("--filter", action="append", metavar="KEY=VALUE")
    p.add_argument("--plot", metavar="DIR")
    p.set_defaults(func=cmd_trend)

    p = add("error-test", "Signed-rank and binomial tests of unbiased error.")
    p.set_defaults(func=cmd_error_test)

    p = add("synth", "Generate a synthetic dataset.", with_path=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--location", type=float, default=0.0)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--tail", choices=("symmetric", "heavy_right"), default="heavy_right")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sector", default="hydro")
    p.add_argument("--country", default="ZZ")
    p.add_argument("--years", default="1960-2015")
    p.add_argument("--schedule", action="store_true", help="also draw schedule overruns (independent stream)")
    p.add_argument("--out", default=None, help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config)
        if args.store:
            cfg = Config(Path(args.store), cfg.tiers, cfg.window, cfg.confidence, cfg.format)
        fmt = args.format or cfg.format
        report = RunReport(command=args.command, echo=shlex.join(argv))
        raw = args.func(args, cfg, report)
    except (UsageError, DomainError, DatasetFormatError) as exc:
        print(f"refcast {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(raw, str):
        sys.stdout.write(raw)
        return EXIT_OK
    sys.stdout.write(report.render(fmt))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
