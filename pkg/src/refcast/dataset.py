"""Project records, overrun observations and the canonical CSV format.

Overruns are kept as fractions (``actual / estimate - 1``) throughout the
package; ``+0.32`` reads as a 32% overrun. Amounts are expected in constant
prices; no deflation is attempted here.
"""

from __future__ import annotations

import csv
import datetime
import io
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Literal, Sequence

from refcast.errors import DomainError

Variable = Literal["cost", "schedule"]
VARIABLES: tuple[Variable, ...] = ("cost", "schedule")

SECTORS = (
    "hydro",
    "road",
    "bridge",
    "tunnel",
    "rail",
    "wind",
    "solar",
    "thermal",
    "transmission",
    "nuclear",
    "mining_oil_gas",
    "other",
)

COLUMNS = (
    "id",
    "name",
    "sector",
    "country",
    "decision_year",
    "est_cost",
    "act_cost",
    "est_duration_months",
    "act_duration_months",
    "price_basis",
)
REQUIRED_COLUMNS = COLUMNS[:-1]

MIN_YEAR = 1900

_DECIMAL = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_INTEGER = re.compile(r"[+-]?\d+")
_COUNTRY = re.compile(r"[A-Z]{2}")


class DatasetFormatError(ValueError):
    """The CSV stream cannot be read as a dataset at all."""


def compute_overrun(estimate: float, actual: float) -> float:
    """Return ``actual / estimate - 1``.

    >>> compute_overrun(100, 150)
    0.5
    """
    if not estimate > 0:
        raise DomainError(f"estimate must be positive, got {estimate!r}")
    if not actual > 0:
        raise DomainError(f"actual must be positive, got {actual!r}")
    return actual / estimate - 1.0


@dataclass(frozen=True)
class ProjectRecord:
    id: str
    name: str
    sector: str
    country: str
    decision_year: int
    est_cost: float | None = None
    act_cost: float | None = None
    est_duration: float | None = None
    act_duration: float | None = None
    price_basis: str = ""

    def __post_init__(self) -> None:
        if not self.id:
            raise DomainError("record id must be nonempty")
        if self.sector not in SECTORS:
            raise DomainError(f"unknown sector {self.sector!r}")
        if not _COUNTRY.fullmatch(self.country):
            raise DomainError(f"invalid country code {self.country!r}")
        if not MIN_YEAR <= self.decision_year <= datetime.date.today().year:
            raise DomainError(f"decision_year {self.decision_year} out of range")
        if self.est_cost is None and self.est_duration is None:
            raise DomainError("missing estimate")
        for name in ("est_cost", "est_duration"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise DomainError("non-positive estimate", name)
        for name in ("act_cost", "act_duration"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise DomainError("non-positive actual", name)

    def pair(self, variable: Variable) -> tuple[float | None, float | None]:
        if variable == "cost":
            return self.est_cost, self.act_cost
        if variable == "schedule":
            return self.est_duration, self.act_duration
        raise DomainError(f"unknown variable {variable!r}")


@dataclass(frozen=True)
class OverrunObservation:
    value: float
    variable: Variable
    project_id: str
    sector: str = "other"
    country: str = "ZZ"
    decision_year: int = 0

    def __post_init__(self) -> None:
        if not self.value > -1:
            raise DomainError(f"overrun must exceed -1, got {self.value!r}")


@dataclass(frozen=True)
class RejectedRow:
    row: int
    reason: str
    detail: str = ""


@dataclass(frozen=True)
class SourceMeta:
    path: str | None = None
    row_count: int = 0
    rejected: tuple[RejectedRow, ...] = ()
    filters: tuple[str, ...] = ()

    def describe(self) -> str:
        parts = [self.path or "<stream>", f"rows={self.row_count}"]
        if self.rejected:
            parts.append(f"rejected={len(self.rejected)}")
        parts.extend(self.filters)
        return "; ".join(parts)


@dataclass(frozen=True)
class Dataset:
    records: tuple[ProjectRecord, ...] = ()
    source_meta: SourceMeta = field(default_factory=SourceMeta)

    def __post_init__(self) -> None:
        object.__setattr__(self, "records", tuple(self.records))
        seen: set[str] = set()
        for rec in self.records:
            if rec.id in seen:
                raise DatasetFormatError(f"duplicate id {rec.id!r}")
            seen.add(rec.id)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[ProjectRecord]:
        return iter(self.records)

    def skipped(self, variable: Variable) -> int:
        """Number of records that cannot yield an overrun for ``variable``."""
        return sum(1 for rec in self.records if None in rec.pair(variable))


def extract_observations(ds: Dataset, variable: Variable) -> list[OverrunObservation]:
    if variable not in VARIABLES:
        raise DomainError(f"unknown variable {variable!r}")
    out = []
    for rec in ds.records:
        est, act = rec.pair(variable)
        if est is None or act is None:
            continue
        out.append(
            OverrunObservation(
                value=compute_overrun(est, act),
                variable=variable,
                project_id=rec.id,
                sector=rec.sector,
                country=rec.country,
                decision_year=rec.decision_year,
            )
        )
    return out


def _parse_number(text: str) -> float | None:
    text = text.strip()
    if not text:
        return None
    if not _DECIMAL.fullmatch(text):
        raise DomainError("non-numeric value", text)
    return float(text)


def _parse_row(row: dict[str, str]) -> ProjectRecord:
    year_text = (row["decision_year"] or "").strip()
    if not _INTEGER.fullmatch(year_text):
        raise DomainError("invalid decision_year", year_text)
    return ProjectRecord(
        id=(row["id"] or "").strip(),
        name=(row["name"] or "").strip(),
        sector=(row["sector"] or "").strip(),
        country=(row["country"] or "").strip(),
        decision_year=int(year_text),
        est_cost=_parse_number(row["est_cost"] or ""),
        act_cost=_parse_number(row["act_cost"] or ""),
        est_duration=_parse_number(row["est_duration_months"] or ""),
        act_duration=_parse_number(row["act_duration_months"] or ""),
        price_basis=(row.get("price_basis") or "").strip(),
    )


def parse_dataset(stream: str | Iterable[str], path: str | None = None) -> Dataset:
    """Parse canonical CSV text into a :class:`Dataset`.

    Invalid rows are collected in ``source_meta.rejected`` with their line
    number; a missing header column or a duplicate id is fatal.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.DictReader(stream)
    header = reader.fieldnames
    if header is None:
        raise DatasetFormatError("missing header row")
    header = [h.strip() for h in header]
    reader.fieldnames = header
    missing = [c for c in REQUIRED_COLUMNS if c not in header]
    if missing:
        raise DatasetFormatError(f"missing header columns: {', '.join(missing)}")

    records: list[ProjectRecord] = []
    rejected: list[RejectedRow] = []
    seen: dict[str, int] = {}
    n_rows = 0
    for row in reader:
        line = reader.line_num
        if not any((v or "").strip() for v in row.values() if isinstance(v, str)):
            continue
        n_rows += 1
        if None in row or any(v is None for v in row.values()):
            rejected.append(RejectedRow(line, "wrong field count"))
            continue
        try:
            rec = _parse_row(row)
        except DomainError as exc:
            reason = exc.args[0]
            detail = exc.args[1] if len(exc.args) > 1 else ""
            rejected.append(RejectedRow(line, reason, str(detail)))
            continue
        if rec.id in seen:
            raise DatasetFormatError(
                f"duplicate id {rec.id!r} on line {line} (first seen on line {seen[rec.id]})"
            )
        seen[rec.id] = line
        records.append(rec)

    meta = SourceMeta(path=path, row_count=n_rows, rejected=tuple(rejected))
    return Dataset(tuple(records), meta)


def read_dataset(path: str | Path) -> Dataset:
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as fh:
        return parse_dataset(fh, path=str(path))


def _fmt(value: float | None) -> str:
    if value is None:
        return ""
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def serialize_dataset(ds: Dataset | Sequence[ProjectRecord]) -> str:
    """Render records in the canonical CSV format (inverse of ``parse_dataset``)."""
    records = ds.records if isinstance(ds, Dataset) else ds
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for rec in records:
        writer.writerow(
            [
                rec.id,
                rec.name,
                rec.sector,
                rec.country,
                rec.decision_year,
                _fmt(rec.est_cost),
                _fmt(rec.act_cost),
                _fmt(rec.est_duration),
                _fmt(rec.act_duration),
                rec.price_basis,
            ]
        )
    return buf.getvalue()


def filter_dataset(
    ds: Dataset,
    sector: str | Iterable[str] | None = None,
    country: str | Iterable[str] | None = None,
    years: tuple[int, int] | None = None,
    exclude_country: str | Iterable[str] | None = None,
) -> Dataset:
    """Subset ``ds`` by sector, country and inclusive decision-year range.

    Order is preserved and the filter is appended to ``source_meta.filters``.
    """

    def as_set(v: str | Iterable[str] | None) -> frozenset[str] | None:
        if v is None:
            return None
        return frozenset([v]) if isinstance(v, str) else frozenset(v)

    sectors, countries, excluded = as_set(sector), as_set(country), as_set(exclude_country)
    desc = []
    if sectors is not None:
        desc.append("sector=" + "|".join(sorted(sectors)))
    if countries is not None:
        desc.append("country=" + "|".join(sorted(countries)))
    if excluded is not None:
        desc.append("country!=" + "|".join(sorted(excluded)))
    if years is not None:
        lo, hi = years
        desc.append(f"decision_year={lo}..{hi}")

    def keep(rec: ProjectRecord) -> bool:
        if sectors is not None and rec.sector not in sectors:
            return False
        if countries is not None and rec.country not in countries:
            return False
        if excluded is not None and rec.country in excluded:
            return False
        if years is not None and not years[0] <= rec.decision_year <= years[1]:
            return False
        return True

    meta = ds.source_meta
    new_meta = SourceMeta(
        path=meta.path,
        row_count=meta.row_count,
        rejected=meta.rejected,
        filters=meta.filters + (("filter: " + ", ".join(desc)) if desc else "filter: none",),
    )
    return Dataset(tuple(r for r in ds.records if keep(r)), new_meta)
