"""Figure output for forecasts, trends and contingency regimes.

Each plot is written as an SVG next to a CSV of the (x, y) data it draws, so
results can be checked without diffing images.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import FuncFormatter  # noqa: E402

from refcast.rcf import ReferenceClass, ecdf_curve, uplift_curve  # noqa: E402
from refcast.regime import ContingencyRegime  # noqa: E402
from refcast.stats import TrendSeries  # noqa: E402

_PCT = FuncFormatter(lambda v, _pos: f"{v * 100:.0f}%")

_STYLE = {
    "figure.figsize": (7.0, 4.3),
    "font.size": 9,
    "axes.grid": True,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "grid.color": "0.85",
    "grid.linewidth": 0.5,
    "lines.linewidth": 1.4,
    # fixed ids and no timestamp keep SVG output byte-stable
    "svg.hashsalt": "refcast",
    "svg.fonttype": "path",
}


def new_axes():
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
    return fig, ax


def save(fig, path: Path) -> Path:
    with plt.rc_context(_STYLE):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def write_xy_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[float]]) -> Path:
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(float(x)) if isinstance(x, float) else x for x in r])
    return path


def plot_ecdf(rc: ReferenceClass, outdir: Path, stem: str = "ecdf") -> list[Path]:
    """Cumulative share of projects against overrun."""
    pts = ecdf_curve(rc)
    csv_path = write_xy_csv(outdir / f"{stem}.csv", ["overrun", "cumulative_share"], pts)
    fig, ax = new_axes()
    xs = [rc.values[0]] + [x for x, _ in pts]
    ys = [0.0] + [y for _, y in pts]
    ax.step(xs, ys, where="post", color="#1f4e79")
    ax.xaxis.set_major_formatter(_PCT)
    ax.yaxis.set_major_formatter(_PCT)
    ax.set_xlabel(f"{rc.variable.capitalize()} overrun")
    ax.set_ylabel("Share of projects")
    ax.set_ylim(0, 1.02)
    ax.set_title(f"Cumulative frequency of {rc.variable} overrun (n={rc.n})")
    return [csv_path, save(fig, outdir / f"{stem}.svg")]


def plot_uplift(
    rc: ReferenceClass, outdir: Path, marks: Sequence[float] = (), stem: str = "uplift"
) -> list[Path]:
    """Required uplift against certainty, with chosen P-levels marked."""
    pts = uplift_curve(rc)
    csv_path = write_xy_csv(outdir / f"{stem}.csv", ["certainty", "uplift"], pts)
    fig, ax = new_axes()
    ax.step([p for p, _ in pts], [u for _, u in pts], where="pre", color="#8b1a1a")
    for p, u in uplift_curve(rc, marks):
        ax.plot([p], [u], "o", color="black", markersize=4)
        ax.annotate(f"P{p * 100:.0f}: {u * 100:+.0f}%", (p, u), textcoords="offset points", xytext=(-40, 8))
    ax.xaxis.set_major_formatter(_PCT)
    ax.yaxis.set_major_formatter(_PCT)
    ax.set_xlabel("Required certainty")
    ax.set_ylabel(f"{rc.variable.capitalize()} uplift")
    ax.set_title(f"Uplift by certainty level (n={rc.n})")
    return [csv_path, save(fig, outdir / f"{stem}.svg")]


def plot_trend(series: Mapping[str, TrendSeries], outdir: Path, stem: str = "trend") -> list[Path]:
    """Moving average per variable with its confidence band.

    The y axis is symlog so large overruns stay readable; statistics are
    computed on the linear scale.
    """
    rows = [
        (var, pt.year, pt.window_mean, pt.ci_low, pt.ci_high, pt.window_n)
        for var, s in series.items()
        for pt in s.points
    ]
    csv_path = write_xy_csv(
        outdir / f"{stem}.csv", ["variable", "year", "mean", "ci_low", "ci_high", "window_n"], rows
    )
    fig, ax = new_axes()
    colors = {"cost": "#1f4e79", "schedule": "#b35900"}
    for var, s in series.items():
        if not s.points:
            continue
        years = [p.year for p in s.points]
        c = colors.get(var, "black")
        ax.plot(years, [p.window_mean for p in s.points], color=c, label=f"{var} overrun")
        ax.fill_between(
            years, [p.ci_low for p in s.points], [p.ci_high for p in s.points], color=c, alpha=0.2, linewidth=0
        )
    ax.set_yscale("symlog", linthresh=0.1)
    ax.yaxis.set_major_formatter(_PCT)
    ax.set_xlabel("Year of decision to build")
    ax.set_ylabel("Mean overrun")
    first = next(iter(series.values()), None)
    if first is not None:
        ax.set_title(f"{first.window_width}-year moving average, {first.confidence * 100:g}% confidence band")
    if any(s.points for s in series.values()):
        ax.legend(frameon=False)
    return [csv_path, save(fig, outdir / f"{stem}.svg")]


def plot_regime(regime: ContingencyRegime, outdir: Path, stem: str = "regime") -> list[Path]:
    rows = [(t.spec.name, t.spec.p_level, t.cumulative_budget, t.tranche) for t in regime.tiers]
    csv_path = write_xy_csv(outdir / f"{stem}.csv", ["tier", "p_level", "cumulative_budget", "tranche"], rows)
    fig, ax = new_axes()
    ax.bar([0], [regime.base_estimate], color="0.6", width=0.5, label="base estimate")
    bottom = regime.base_estimate
    palette = ["#9ecae1", "#4292c6", "#08519c", "#08306b"]
    for i, t in enumerate(regime.tiers):
        ax.bar(
            [0], [t.tranche], bottom=bottom, width=0.5, color=palette[i % len(palette)],
            label=f"{t.spec.name} (to P{t.spec.p_level * 100:g})",
        )
        bottom += t.tranche
    ax.set_xticks([])
    ax.set_xlim(-1, 1.6)
    ax.set_ylabel("Budget")
    ax.set_title("Tiered contingency regime")
    ax.legend(frameon=False, loc="upper right")
    return [csv_path, save(fig, outdir / f"{stem}.svg")]
