"""Snapshot and price series: types, validation, CSV ingestion.

File formats, both with ISO dates:
  transactions: ``date,src,dst,amount`` one row per transaction
  prices:       ``date,price`` one row per day

Ingestion is strict: malformed rows, bad dates, and non-positive amounts
are reported with their line number. Self-loop transactions are dropped
(they carry no edge), duplicate same-day transactions are kept because
they shift the per-node amount averages.
"""

from __future__ import annotations

import csv
import datetime
import math
from dataclasses import dataclass
from typing import NamedTuple


__all__ = [
    "Transaction",
    "SnapshotSeries",
    "PriceSeries",
    "ingest_snapshots",
    "save_transactions",
    "load_prices",
    "save_prices",
    "date_add",
]


class Transaction(NamedTuple):
    src: str
    dst: str
    amount: float


def date_add(date: str, days: int) -> str:
    """ISO date shifted by a number of calendar days."""
    return (datetime.date.fromisoformat(date) + datetime.timedelta(days=days)).isoformat()


@dataclass
class SnapshotSeries:
    """Per-day transaction lists, ordered by strictly increasing date."""

    days: list

    def __post_init__(self):
        dates = [d for d, _ in self.days]
        if any(b <= a for a, b in zip(dates, dates[1:])):
            raise ValueError("dates must be strictly increasing and unique")
        for d, txs in self.days:
            datetime.date.fromisoformat(d)
            for tx in txs:
                if tx.amount <= 0 or not math.isfinite(tx.amount):
                    raise ValueError(f"{d}: transaction amount must be positive")
                if tx.src == tx.dst:
                    raise ValueError(f"{d}: self-loop transaction {tx.src!r}")

    @property
    def dates(self) -> list:
        return [d for d, _ in self.days]

    def __len__(self) -> int:
        return len(self.days)


@dataclass
class PriceSeries:
    """Date-indexed positive prices."""

    prices: dict

    def __post_init__(self):
        for d, p in self.prices.items():
            datetime.date.fromisoformat(d)
            if p <= 0 or not math.isfinite(p):
                raise ValueError(f"{d}: price must be positive")

    def __contains__(self, date: str) -> bool:
        return date in self.prices

    def __getitem__(self, date: str) -> float:
        return self.prices[date]

    def __len__(self) -> int:
        return len(self.prices)


def _check_header(row, expected, path):
    if row is None or [h.strip() for h in row] != expected:
        raise ValueError(f"{path}: expected header {','.join(expected)}")


def ingest_snapshots(path) -> SnapshotSeries:
    """Read and validate a transactions CSV; days come back sorted."""
    groups: dict = {}
    with open(path, newline="") as f:
        reader = csv.reader(f)
        _check_header(next(reader, None), ["date", "src", "dst", "amount"], path)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise ValueError(f"{path}: row {lineno}: expected 4 fields, got {len(row)}")
            date_s, src, dst, amount_s = (c.strip() for c in row)
            try:
                datetime.date.fromisoformat(date_s)
            except ValueError:
                raise ValueError(f"{path}: row {lineno}: unparseable date {date_s!r}") from None
            if not src or not dst:
                raise ValueError(f"{path}: row {lineno}: empty node identifier")
            try:
                amount = float(amount_s)
            except ValueError:
                raise ValueError(f"{path}: row {lineno}: unparseable amount {amount_s!r}") from None
            if amount <= 0 or not math.isfinite(amount):
                raise ValueError(f"{path}: row {lineno}: amount must be positive, got {amount_s}")
            if src == dst:
                continue
            groups.setdefault(date_s, []).append(Transaction(src, dst, amount))
    return SnapshotSeries([(d, groups[d]) for d in sorted(groups)])


def save_transactions(series: SnapshotSeries, path) -> None:
    out = path if hasattr(path, "write") else open(path, "w", newline="")
    try:
        w = csv.writer(out)
        w.writerow(["date", "src", "dst", "amount"])
        for date, txs in series.days:
            for tx in txs:
                w.writerow([date, tx.src, tx.dst, repr(float(tx.amount))])
    finally:
        if out is not path:
            out.close()


def load_prices(path) -> PriceSeries:
    prices: dict = {}
    with open(path, newline="") as f:
        reader = csv.reader(f)
        _check_header(next(reader, None), ["date", "price"], path)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"{path}: row {lineno}: expected 2 fields, got {len(row)}")
            date_s, price_s = (c.strip() for c in row)
            try:
                datetime.date.fromisoformat(date_s)
            except ValueError:
                raise ValueError(f"{path}: row {lineno}: unparseable date {date_s!r}") from None
            if date_s in prices:
                raise ValueError(f"{path}: row {lineno}: duplicate date {date_s}")
            try:
                price = float(price_s)
            except ValueError:
                raise ValueError(f"{path}: row {lineno}: unparseable price {price_s!r}") from None
            if price <= 0 or not math.isfinite(price):
                raise ValueError(f"{path}: row {lineno}: price must be positive, got {price_s}")
            prices[date_s] = price
    return PriceSeries(prices)


def save_prices(prices: PriceSeries, path) -> None:
    out = path if hasattr(path, "write") else open(path, "w", newline="")
    try:
        w = csv.writer(out)
        w.writerow(["date", "price"])
        for d in sorted(prices.prices):
            w.writerow([d, repr(float(prices.prices[d]))])
    finally:
        if out is not path:
            out.close()
