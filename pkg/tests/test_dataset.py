import pytest
from hypothesis import given, strategies as st

from refcast.dataset import (
    COLUMNS,
    Dataset,
    DatasetFormatError,
    ProjectRecord,
    compute_overrun,
    extract_observations,
    filter_dataset,
    parse_dataset,
    read_dataset,
    serialize_dataset,
)
from refcast.errors import DomainError

HEADER = ",".join(COLUMNS)


def csv_text(*rows):
    return "\n".join([HEADER, *rows]) + "\n"


def test_compute_overrun_examples():
    assert compute_overrun(100, 100) == 0.0
    assert compute_overrun(100, 5242) == pytest.approx(51.42, abs=1e-12)
    assert compute_overrun(100, 53) == pytest.approx(-0.47, abs=1e-12)
    assert compute_overrun(100, 150) == 0.5


@pytest.mark.parametrize("est, act, field", [(0, 10, "estimate"), (-5, 10, "estimate"), (10, 0, "actual")])
def test_compute_overrun_rejects_non_positive(est, act, field):
    with pytest.raises(DomainError, match=field):
        compute_overrun(est, act)


@given(st.floats(1e-6, 1e9), st.floats(1e-6, 1e9), st.sampled_from([0.5, 2.0, 1024.0]))
def test_overrun_unit_independence(est, act, k):
    assert compute_overrun(est, est) == 0
    # power-of-two rescaling is exact in binary floating point
    assert compute_overrun(k * est, k * act) == compute_overrun(est, act)


def test_parse_valid_row():
    ds = parse_dataset(csv_text("A,Dam A,hydro,CA,1990,100,150,60,72,USD2015"))
    assert len(ds) == 1
    assert ds.source_meta.rejected == ()
    rec = ds.records[0]
    assert (rec.est_cost, rec.act_cost, rec.est_duration, rec.act_duration) == (100, 150, 60, 72)


def test_parse_rejects_negative_estimate():
    ds = parse_dataset(csv_text("A,Dam A,hydro,CA,1990,-5,150,60,72,", "B,Dam B,hydro,CA,1990,5,6,60,72,"))
    assert [r.id for r in ds.records] == ["B"]
    (rej,) = ds.source_meta.rejected
    assert rej.row == 2
    assert rej.reason == "non-positive estimate"


def test_blank_actual_duration_skips_schedule_only():
    ds = parse_dataset(csv_text("A,Dam A,hydro,CA,1990,100,150,60,,"))
    assert ds.source_meta.rejected == ()
    assert len(extract_observations(ds, "cost")) == 1
    assert extract_observations(ds, "schedule") == []
    assert ds.skipped("schedule") == 1


@pytest.mark.parametrize(
    "row, reason",
    [
        ("A,x,volcano,CA,1990,1,1,1,1,", "unknown sector"),
        ("A,x,hydro,Canada,1990,1,1,1,1,", "invalid country"),
        ("A,x,hydro,CA,1850,1,1,1,1,", "out of range"),
        ("A,x,hydro,CA,19x0,1,1,1,1,", "invalid decision_year"),
        ("A,x,hydro,CA,1990,1;5,1,1,1,", "non-numeric value"),
        ("A,x,hydro,CA,1990,1,0,1,1,", "non-positive actual"),
        ("A,x,hydro,CA,1990,,1,,1,", "missing estimate"),
        ("A,x,hydro,CA,1990,1,1,1", "wrong field count"),
    ],
)
def test_rejected_row_reasons(row, reason):
    ds = parse_dataset(csv_text(row))
    assert len(ds) == 0
    assert reason in ds.source_meta.rejected[0].reason


def test_decimal_comma_is_not_a_number():
    ds = parse_dataset(csv_text('A,x,hydro,CA,1990,"1,5",2,1,1,'))
    assert ds.source_meta.rejected[0].reason == "non-numeric value"


def test_missing_header_column_is_fatal():
    with pytest.raises(DatasetFormatError, match="est_cost"):
        parse_dataset("id,name,sector,country,decision_year\n")


def test_duplicate_id_is_fatal():
    with pytest.raises(DatasetFormatError, match="duplicate"):
        parse_dataset(csv_text("A,x,hydro,CA,1990,1,1,1,1,", "A,y,hydro,CA,1991,1,1,1,1,"))


def test_price_basis_column_optional():
    text = ",".join(COLUMNS[:-1]) + "\nA,x,hydro,CA,1990,1,2,3,4\n"
    assert parse_dataset(text).records[0].price_basis == ""


def test_extract_skip_rule():
    ds = parse_dataset(
        csv_text(
            "A,x,hydro,CA,1990,100,150,60,72,",
            "B,x,hydro,CA,1990,100,,60,72,",
            "C,x,hydro,CA,1990,100,90,60,72,",
        )
    )
    obs = extract_observations(ds, "cost")
    assert [o.project_id for o in obs] == ["A", "C"]
    assert obs[0].value == 0.5
    assert len(obs) + ds.skipped("cost") == len(ds)
    assert extract_observations(Dataset(), "cost") == []


def test_fixture_counts(fixture_path):
    ds = read_dataset(fixture_path)
    assert len(ds) == 38
    for v in ("cost", "schedule"):
        assert len(extract_observations(ds, v)) + ds.skipped(v) == 38


def test_roundtrip(fixture_path):
    ds = read_dataset(fixture_path)
    again = parse_dataset(serialize_dataset(ds))
    assert again.records == ds.records
    assert serialize_dataset(again) == serialize_dataset(ds)


records = st.builds(
    ProjectRecord,
    id=st.text("abcdefghij0123456789", min_size=1, max_size=6),
    name=st.text(st.characters(blacklist_categories=("Cs", "Cc")), max_size=12).map(str.strip),
    sector=st.sampled_from(["hydro", "road", "nuclear"]),
    country=st.sampled_from(["CA", "BR", "US"]),
    decision_year=st.integers(1900, 2020),
    est_cost=st.floats(1e-3, 1e9),
    act_cost=st.none() | st.floats(1e-3, 1e9),
    est_duration=st.none() | st.floats(1e-3, 1e4),
    act_duration=st.none() | st.floats(1e-3, 1e4),
)


@given(st.lists(records, max_size=8, unique_by=lambda r: r.id))
def test_roundtrip_property(recs):
    ds = Dataset(tuple(recs))
    assert parse_dataset(serialize_dataset(ds)).records == ds.records


def test_filter(fixture_path):
    ds = read_dataset(fixture_path)
    hydro = filter_dataset(ds, sector="hydro")
    assert {r.sector for r in hydro} == {"hydro"} and len(hydro) == 24
    assert "sector=hydro" in hydro.source_meta.filters[-1]
    ca = filter_dataset(ds, country="CA")
    assert [r.id for r in ca] == ["H01", "H02", "H03", "H04", "R02", "N03"]
    window = filter_dataset(ds, years=(1980, 1995))
    assert [r.id for r in window] == [
        "H04", "H12", "H13", "H14", "H15", "H16", "H17", "H18", "R03", "R04", "R05", "N05",
    ]
    rest = filter_dataset(ds, sector="hydro", exclude_country="CA")
    assert len(rest) == 20
