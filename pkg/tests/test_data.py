"""Tests for snapshot and price ingestion, validation, and round trips."""
import numpy as np
import pytest

from topovelocity.data import (
    PriceSeries,
    SnapshotSeries,
    Transaction,
    date_add,
    ingest_snapshots,
    load_prices,
    save_prices,
    save_transactions,
)


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestIngestSnapshots:
    def test_basic_parse_groups_and_sorts_days(self, tmp_path):
        p = _write(
            tmp_path,
            "tx.csv",
            "date,src,dst,amount\n"
            "2024-01-02,b,c,5.0\n"
            "2024-01-01,a,b,1.5\n"
            "2024-01-02,c,d,2.0\n",
        )
        s = ingest_snapshots(p)
        assert s.dates == ["2024-01-01", "2024-01-02"]
        assert s.days[0][1] == [Transaction("a", "b", 1.5)]
        assert len(s.days[1][1]) == 2

    def test_self_loops_dropped(self, tmp_path):
        p = _write(
            tmp_path,
            "tx.csv",
            "date,src,dst,amount\n2024-01-01,a,a,5.0\n2024-01-01,a,b,1.0\n",
        )
        s = ingest_snapshots(p)
        assert s.days[0][1] == [Transaction("a", "b", 1.0)]

    def test_duplicate_transactions_kept(self, tmp_path):
        p = _write(
            tmp_path,
            "tx.csv",
            "date,src,dst,amount\n2024-01-01,a,b,1.0\n2024-01-01,a,b,1.0\n",
        )
        assert len(ingest_snapshots(p).days[0][1]) == 2

    def test_blank_lines_skipped(self, tmp_path):
        p = _write(
            tmp_path,
            "tx.csv",
            "date,src,dst,amount\n2024-01-01,a,b,1.0\n\n2024-01-01,b,c,2.0\n",
        )
        assert len(ingest_snapshots(p).days[0][1]) == 2

    @pytest.mark.parametrize(
        "body,fragment",
        [
            ("2024-01-01,a,b\n", "row 2: expected 4 fields"),
            ("not-a-date,a,b,1.0\n", "row 2: unparseable date"),
            ("2024-01-01,,b,1.0\n", "row 2: empty node identifier"),
            ("2024-01-01,a,b,abc\n", "row 2: unparseable amount"),
            ("2024-01-01,a,b,0.0\n", "row 2: amount must be positive"),
            ("2024-01-01,a,b,-3\n", "row 2: amount must be positive"),
            ("2024-01-01,a,b,inf\n", "row 2: amount must be positive"),
        ],
    )
    def test_bad_rows_report_line_numbers(self, tmp_path, body, fragment):
        p = _write(tmp_path, "tx.csv", "date,src,dst,amount\n" + body)
        with pytest.raises(ValueError, match=fragment):
            ingest_snapshots(p)

    def test_error_on_later_row_names_that_row(self, tmp_path):
        p = _write(
            tmp_path,
            "tx.csv",
            "date,src,dst,amount\n2024-01-01,a,b,1.0\n2024-01-02,a,b,bad\n",
        )
        with pytest.raises(ValueError, match="row 3"):
            ingest_snapshots(p)

    def test_wrong_header_rejected(self, tmp_path):
        p = _write(tmp_path, "tx.csv", "when,src,dst,amount\n")
        with pytest.raises(ValueError, match="expected header date,src,dst,amount"):
            ingest_snapshots(p)

    def test_round_trip(self, tmp_path):
        s = SnapshotSeries(
            [
                ("2024-01-01", [Transaction("a", "b", 1.25)]),
                ("2024-01-03", [Transaction("b", "c", 0.1), Transaction("a", "c", 7.0)]),
            ]
        )
        p = tmp_path / "tx.csv"
        save_transactions(s, p)
        back = ingest_snapshots(p)
        assert back.days == s.days


class TestSnapshotSeries:
    def test_dates_must_increase(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            SnapshotSeries([("2024-01-02", []), ("2024-01-01", [])])
        with pytest.raises(ValueError, match="strictly increasing"):
            SnapshotSeries([("2024-01-01", []), ("2024-01-01", [])])

    def test_rejects_bad_transactions(self):
        with pytest.raises(ValueError, match="self-loop"):
            SnapshotSeries([("2024-01-01", [Transaction("a", "a", 1.0)])])
        with pytest.raises(ValueError, match="positive"):
            SnapshotSeries([("2024-01-01", [Transaction("a", "b", 0.0)])])

    def test_len_and_dates(self):
        s = SnapshotSeries([("2024-01-01", []), ("2024-02-01", [])])
        assert len(s) == 2
        assert s.dates == ["2024-01-01", "2024-02-01"]


class TestPrices:
    def test_load_and_lookup(self, tmp_path):
        p = _write(
            tmp_path, "px.csv", "date,price\n2024-01-01,100.0\n2024-01-02,101.5\n"
        )
        prices = load_prices(p)
        assert len(prices) == 2
        assert "2024-01-01" in prices
        assert prices["2024-01-02"] == 101.5

    @pytest.mark.parametrize(
        "body,fragment",
        [
            ("2024-01-01\n", "row 2: expected 2 fields"),
            ("nope,1.0\n", "row 2: unparseable date"),
            ("2024-01-01,zero\n", "row 2: unparseable price"),
            ("2024-01-01,0\n", "row 2: price must be positive"),
            ("2024-01-01,1.0\n2024-01-01,2.0\n", "row 3: duplicate date"),
        ],
    )
    def test_bad_rows_report_line_numbers(self, tmp_path, body, fragment):
        p = _write(tmp_path, "px.csv", "date,price\n" + body)
        with pytest.raises(ValueError, match=fragment):
            load_prices(p)

    def test_round_trip_is_exact(self, tmp_path):
        vals = {f"2024-01-{d:02d}": 100.0 * (1.0 + 0.01) ** d for d in range(1, 10)}
        p = tmp_path / "px.csv"
        save_prices(PriceSeries(vals), p)
        back = load_prices(p)
        assert all(back[d] == vals[d] for d in vals)

    def test_price_series_validation(self):
        with pytest.raises(ValueError):
            PriceSeries({"2024-01-01": -1.0})
        with pytest.raises(ValueError):
            PriceSeries({"2024-01-01": np.inf})


class TestDateAdd:
    def test_simple_shift(self):
        assert date_add("2024-01-30", 3) == "2024-02-02"

    def test_crosses_leap_day(self):
        assert date_add("2024-02-28", 1) == "2024-02-29"
        assert date_add("2023-02-28", 1) == "2023-03-01"

    def test_negative_shift(self):
        assert date_add("2024-01-01", -1) == "2023-12-31"
