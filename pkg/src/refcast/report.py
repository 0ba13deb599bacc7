"""Run reports and their text, CSV and JSON-lines renderings.

Text output is meant for people: percentages carry a sign and no decimals.
CSV and JSON lines keep full float precision.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any, Literal, Sequence

Format = Literal["text", "csv", "jsonl"]
FORMATS = ("text", "csv", "jsonl")


def pct(v: float | None, signed: bool = True) -> str:
    if v is None:
        return "NA"
    r = round(v * 100) + 0  # + 0 turns a rounded -0 into 0
    return f"{r:+d}%" if signed else f"{r:d}%"


def p_text(p: float) -> str:
    return "p < 0.001" if p < 0.001 else f"p = {p:.3f}"


def money(v: float) -> str:
    return f"{v:,.2f}"


def text_table(header: Sequence[str], rows: Sequence[Sequence[str]], align: str | None = None) -> str:
    """Align columns with two spaces; first column left, the rest right unless ``align`` says otherwise."""
    cols = len(header)
    if align is None:
        align = "l" + "r" * (cols - 1)
    widths = [max(len(str(r[i])) for r in [header, *rows]) for i in range(cols)]
    lines = []
    for r in [header, *rows]:
        cells = [
            str(c).ljust(w) if a == "l" else str(c).rjust(w)
            for c, w, a in zip(r, widths, align)
        ]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines)


@dataclass
class Block:
    """One result table: machine rows plus an optional hand-laid-out text form."""

    name: str
    columns: list[str]
    rows: list[dict[str, Any]] = field(default_factory=list)
    text: str | None = None


@dataclass
class RunReport:
    command: str
    echo: str
    provenance: str = ""
    warnings: list[str] = field(default_factory=list)
    blocks: list[Block] = field(default_factory=list)
    exit_code: int = 0

    def warn(self, message: str) -> None:
        if message not in self.warnings:
            self.warnings.append(message)

    def render(self, fmt: Format = "text") -> str:
        if fmt == "text":
            return self._render_text()
        if fmt == "csv":
            return self._render_csv()
        if fmt == "jsonl":
            return self._render_jsonl()
        raise ValueError(f"unknown format {fmt!r}")

    def _render_text(self) -> str:
        out = [f"# refcast {self.echo}"]
        if self.provenance:
            out.append(f"# input: {self.provenance}")
        for block in self.blocks:
            if block.text == "":
                continue
            out.append("")
            if block.text is not None:
                out.append(block.text)
            else:
                out.append(block.name)
                rows = [[_text_cell(r.get(c)) for c in block.columns] for r in block.rows]
                out.append(text_table(block.columns, rows))
        if self.warnings:
            out.append("")
            out.extend(f"warning: {w}" for w in self.warnings)
        return "\n".join(out) + "\n"

    def _render_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# refcast {self.echo}\n")
        if self.provenance:
            buf.write(f"# input: {self.provenance}\n")
        for w in self.warnings:
            buf.write(f"# warning: {w}\n")
        for block in self.blocks:
            if not block.columns:
                continue
            buf.write(f"# block: {block.name}\n")
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(block.columns)
            for r in block.rows:
                writer.writerow([_csv_cell(r.get(c)) for c in block.columns])
        return buf.getvalue()

    def _render_jsonl(self) -> str:
        lines = []
        for w in self.warnings:
            lines.append({"command": self.command, "variable": None, "kind": "warning", "message": w})
        for block in self.blocks:
            for r in block.rows:
                row = {"command": self.command, "variable": r.get("variable"), "kind": block.name}
                row.update({c: r.get(c) for c in block.columns if c != "variable"})
                lines.append(row)
        return "".join(json.dumps(r, allow_nan=False) + "\n" for r in lines)


def _text_cell(v: Any) -> str:
    if v is None:
        return "NA"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _csv_cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)
