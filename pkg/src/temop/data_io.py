"""Price CSV ingestion, model persistence and synthetic series."""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
from dataclasses import dataclass
from datetime import date, datetime, timedelta
from pathlib import Path

import numpy as np

from .errors import (
    CorruptModelError,
    CsvFormatError,
    InvalidInputError,
    UnsupportedVersionError,
)
from .series import TimeSeries
from .train import ClassStats, LagModel, SubsetModel, TemopModel

FORMAT_VERSION = 1
SYNTHETIC_KINDS = ("random_walk", "trending", "alternating")
# investing.com exports use MM/DD/YYYY; the rest cover common alternatives
DATE_FORMATS = ("%m/%d/%Y", "%Y-%m-%d", "%b %d, %Y", "%d.%m.%Y")
_SYNTH_EPOCH = date(2000, 1, 1)


@dataclass(frozen=True)
class CsvConfig:
    date_column: str = "Date"
    price_column: str = "Price"
    thousands_separator: str | None = ","
    decimal_point: str = "."
    ascending: bool = True
    date_formats: tuple[str, ...] = DATE_FORMATS

    def __post_init__(self):
        if self.thousands_separator is not None and self.thousands_separator == self.decimal_point:
            raise InvalidInputError("thousands separator and decimal point must differ")


def _parse_date(text: str, formats: tuple[str, ...]) -> date:
    text = text.strip()
    for fmt in formats:
        try:
            return datetime.strptime(text, fmt).date()
        except ValueError:
            continue
    raise ValueError(f"unrecognised date {text!r}")


def _parse_number(text: str, cfg: CsvConfig) -> float:
    s = text.strip()
    if cfg.thousands_separator:
        s = s.replace(cfg.thousands_separator, "")
    if cfg.decimal_point != ".":
        s = s.replace(cfg.decimal_point, ".")
    value = float(s)
    if not math.isfinite(value):
        raise ValueError(f"non-finite price {text!r}")
    return value


def load_csv(path: str | os.PathLike, config: CsvConfig = CsvConfig()) -> TimeSeries:
    """Read a date/price CSV into a series sorted oldest-first.

    With ``config.ascending`` false the values come back newest-first and
    without date labels (labels must increase).
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8-sig") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise CsvFormatError(f"{path}: empty file")
        header = [name.strip() for name in reader.fieldnames]
        reader.fieldnames = header
        for col in (config.date_column, config.price_column):
            if col not in header:
                raise CsvFormatError(f"{path}: missing column {col!r} (have {header})")
        rows = []
        for row in reader:
            lineno = reader.line_num
            try:
                day = _parse_date(row[config.date_column] or "", config.date_formats)
            except ValueError as exc:
                raise CsvFormatError(f"{path}:{lineno}: {exc}") from None
            try:
                price = _parse_number(row[config.price_column] or "", config)
            except ValueError:
                raise CsvFormatError(
                    f"{path}:{lineno}: unparseable price {row[config.price_column]!r}"
                ) from None
            rows.append((day, price, lineno))
    if not rows:
        raise CsvFormatError(f"{path}: no data rows")

    rows.sort(key=lambda r: r[0])
    for prev, cur in zip(rows, rows[1:]):
        if cur[0] == prev[0]:
            raise CsvFormatError(
                f"{path}: duplicate date {cur[0].isoformat()} on lines {prev[2]} and {cur[2]}"
            )
    values = [r[1] for r in rows]
    labels = [r[0].isoformat() for r in rows]
    if not config.ascending:
        return TimeSeries(values[::-1])
    return TimeSeries(values, labels)


def write_csv(series: TimeSeries, path: str | os.PathLike) -> None:
    """Canonical writer: ISO dates and shortest round-trip prices.

    Unlabelled series get consecutive calendar days starting 2000-01-01.
    """
    labels = series.labels
    if labels is None:
        labels = [(_SYNTH_EPOCH + timedelta(days=k)).isoformat() for k in range(len(series))]
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["Date", "Price"])
        for label, value in zip(labels, series.values):
            writer.writerow([label, repr(float(value))])


def _stats_to_dict(stats: ClassStats) -> dict:
    if stats.empty:
        return {"count": 0}
    return {
        "count": stats.count,
        "mean": stats.mean.tolist(),
        "std": stats.std.tolist(),
        "inv_cov": stats.inv_cov.tolist(),
    }


def _stats_from_dict(d: dict) -> ClassStats:
    count = int(d["count"])
    if count == 0:
        return ClassStats(0)
    arrays = []
    for key in ("mean", "std", "inv_cov"):
        a = np.array(d[key], dtype=float)
        a.setflags(write=False)
        arrays.append(a)
    return ClassStats(count, *arrays)


def model_to_dict(model: TemopModel) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "m": model.m,
        "q": model.q,
        "lambda": model.lam,
        "train_len": model.train_len,
        "lags": [
            {
                "lag": lm.lag,
                "subsets": [
                    {
                        "pattern": list(s.pattern),
                        "total": s.total,
                        "plus": _stats_to_dict(s.plus),
                        "minus": _stats_to_dict(s.minus),
                    }
                    for s in lm.subsets
                ],
            }
            for lm in model.lag_models
        ],
    }


def model_from_dict(d: dict) -> TemopModel:
    lag_models = tuple(
        LagModel(
            lag=int(lm["lag"]),
            subsets=tuple(
                SubsetModel(
                    pattern=tuple(int(c) for c in s["pattern"]),
                    total=int(s["total"]),
                    plus=_stats_from_dict(s["plus"]),
                    minus=_stats_from_dict(s["minus"]),
                )
                for s in lm["subsets"]
            ),
        )
        for lm in d["lags"]
    )
    return TemopModel(
        m=int(d["m"]),
        q=int(d["q"]),
        lam=float(d["lambda"]),
        lag_models=lag_models,
        train_len=int(d["train_len"]),
    )


def _checksum(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def save_model(model: TemopModel, path: str | os.PathLike) -> None:
    payload = model_to_dict(model)
    payload["checksum"] = _checksum(payload)
    Path(path).write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")


def load_model(path: str | os.PathLike) -> TemopModel:
    text = Path(path).read_text(encoding="utf-8")
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptModelError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(payload, dict):
        raise CorruptModelError(f"{path}: top level is not an object")
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(
            f"{path}: format_version {version!r} unsupported (expected {FORMAT_VERSION})"
        )
    stored = payload.pop("checksum", None)
    if stored != _checksum(payload):
        raise CorruptModelError(f"{path}: checksum mismatch")
    try:
        return model_from_dict(payload)
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModelError(f"{path}: malformed model payload ({exc})") from None


def generate_synthetic(kind: str, n: int, seed: int = 0) -> TimeSeries:
    """Deterministic test series.

    ``random_walk``: 100 plus cumulative N(0, 1) steps, floored at 1.
    ``trending``: strictly increasing with random positive increments.
    ``alternating``: strict zigzag around 100.
    """
    if kind not in SYNTHETIC_KINDS:
        raise InvalidInputError(f"unknown kind {kind!r}; choose from {SYNTHETIC_KINDS}")
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    if kind == "random_walk":
        values = np.maximum(100.0 + np.cumsum(rng.normal(0.0, 1.0, n)), 1.0)
    elif kind == "trending":
        values = 100.0 + np.cumsum(rng.uniform(0.1, 1.0, n))
    else:
        amp = rng.uniform(0.5, 1.5, n)
        sign = np.where(np.arange(n) % 2 == 0, -1.0, 1.0)
        if rng.random() < 0.5:
            sign = -sign
        values = 100.0 + sign * amp
    return TimeSeries(values)
