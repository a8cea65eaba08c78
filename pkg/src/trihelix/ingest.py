"""Delimited-text ingestion with per-dimension proxy transforms.

A single JSON config document names the input file, assigns one column per
schema dimension, and attaches the proxy transforms used in register-based
studies: geographic prefixing (postal code -> region), code truncation or
mapping (activity code -> sector), and numeric binning (head count -> size
class). Rows with unusable values are dropped and counted, never silently
altered; strict mode turns the first problem into an error.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .errors import DegenerateDataError, SchemaError, ValidationError
from .infomeasure import MaxEntropyMode, UnitScale
from .tableau import Dimension, DimensionSchema, Record

MISSING_LABEL = "(missing)"

# EU enterprise-size convention; fully overridable in the config
EU_SIZE_THRESHOLDS = (10.0, 50.0, 250.0)
EU_SIZE_LABELS = ("micro", "small", "medium", "large")


class _BadValue(Exception):
    """Internal: carries the drop reason for one unusable row value."""

    def __init__(self, reason: str):
        self.reason = reason


@dataclass(frozen=True)
class TransformRule:
    """How one raw column value becomes a category label.

    kinds: identity | prefix(length) | code_map(mapping) |
    numeric_bin(thresholds -> labels, one more label than thresholds,
    value < thresholds[i] selects labels[i], else the last label).
    """

    kind: str
    length: int | None = None
    mapping: Mapping[str, str] | None = None
    thresholds: tuple[float, ...] | None = None
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind == "identity":
            pass
        elif self.kind == "prefix":
            if self.length is None or self.length < 1:
                raise ValidationError(f"prefix length must be >= 1, got {self.length}")
        elif self.kind == "code_map":
            if not self.mapping:
                raise ValidationError("code_map needs a non-empty mapping")
            if any(not isinstance(v, str) or not v for v in self.mapping.values()):
                raise ValidationError("code_map labels must be non-empty strings")
        elif self.kind == "numeric_bin":
            th, lb = self.thresholds, self.labels
            if not th or not lb or len(lb) != len(th) + 1:
                raise ValidationError(
                    "numeric_bin needs thresholds and exactly one more label"
                )
            if any(b <= a for a, b in zip(th, th[1:])):
                raise ValidationError(f"thresholds must strictly increase: {th}")
            if any(not l for l in lb):
                raise ValidationError("bin labels must be non-empty")
        else:
            raise ValidationError(f"unknown transform kind {self.kind!r}")

    @staticmethod
    def identity() -> "TransformRule":
        return TransformRule(kind="identity")

    @staticmethod
    def prefix(length: int) -> "TransformRule":
        return TransformRule(kind="prefix", length=length)

    @staticmethod
    def code_map(mapping: Mapping[str, str]) -> "TransformRule":
        return TransformRule(kind="code_map", mapping=dict(mapping))

    @staticmethod
    def numeric_bin(
        thresholds: Iterable[float], labels: Iterable[str]
    ) -> "TransformRule":
        return TransformRule(
            kind="numeric_bin", thresholds=tuple(thresholds), labels=tuple(labels)
        )

    def apply(self, raw: str) -> str:
        if self.kind == "identity":
            return raw
        if self.kind == "prefix":
            return raw[: self.length]
        if self.kind == "code_map":
            label = self.mapping.get(raw)  # type: ignore[union-attr]
            if label is None:
                raise _BadValue("unmapped_code")
            return label
        # numeric_bin
        try:
            value = float(raw)
        except ValueError:
            raise _BadValue("bad_numeric") from None
        if not math.isfinite(value):
            raise _BadValue("bad_numeric")
        for cut, label in zip(self.thresholds, self.labels):  # type: ignore[arg-type]
            if value < cut:
                return label
        return self.labels[-1]  # type: ignore[index]


@dataclass(frozen=True)
class IngestConfig:
    input_path: Path
    columns: dict[str, str]  # dimension name -> column name
    delimiter: str = ","
    weight_column: str | None = None
    period_column: str | None = None
    missing_policy: str = "drop"  # or "explicit_missing"
    max_mode: MaxEntropyMode = MaxEntropyMode.OBSERVED
    unit: UnitScale = UnitScale.BITS
    strict: bool = False

    def __post_init__(self) -> None:
        if self.missing_policy not in ("drop", "explicit_missing"):
            raise ValidationError(
                f"missing_policy must be 'drop' or 'explicit_missing', "
                f"got {self.missing_policy!r}"
            )
        assigned = list(self.columns.values())
        for extra in (self.weight_column, self.period_column):
            if extra is not None:
                assigned.append(extra)
        if len(set(assigned)) != len(assigned):
            raise ValidationError(
                f"assigned columns must be distinct, got {assigned}; a column "
                "cannot serve as both a dimension and a weight"
            )


@dataclass
class IngestStats:
    rows_read: int = 0
    rows_kept: int = 0
    rows_dropped: int = 0
    drop_reasons: dict[str, int] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def drop(self, reason: str) -> None:
        self.rows_dropped += 1
        self.drop_reasons[reason] = self.drop_reasons.get(reason, 0) + 1

    def to_dict(self) -> dict:
        return {
            "rows_read": self.rows_read,
            "rows_kept": self.rows_kept,
            "rows_dropped": self.rows_dropped,
            "drop_reasons": dict(sorted(self.drop_reasons.items())),
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _transform_from_config(node: dict, base_dir: Path) -> TransformRule:
    kind = node.get("kind")
    if kind == "identity":
        _reject_unknown(node, {"kind"}, "transform")
        return TransformRule.identity()
    if kind == "prefix":
        _reject_unknown(node, {"kind", "length"}, "transform")
        return TransformRule.prefix(int(node.get("length", 0)))
    if kind == "code_map":
        _reject_unknown(node, {"kind", "mapping", "file"}, "transform")
        mapping = node.get("mapping")
        path = node.get("file")
        if (mapping is None) == (path is None):
            raise ValidationError("code_map needs exactly one of 'mapping' or 'file'")
        if path is not None:
            with open(base_dir / path, encoding="utf-8") as fh:
                mapping = json.load(fh)
            if not isinstance(mapping, dict):
                raise ValidationError(f"code_map file {path!r} must hold a JSON object")
        return TransformRule.code_map(mapping)
    if kind == "numeric_bin":
        _reject_unknown(node, {"kind", "thresholds", "labels"}, "transform")
        thresholds = node.get("thresholds", EU_SIZE_THRESHOLDS)
        labels = node.get("labels", EU_SIZE_LABELS if "thresholds" not in node else None)
        if labels is None:
            raise ValidationError("numeric_bin with custom thresholds needs labels")
        return TransformRule.numeric_bin(
            tuple(float(t) for t in thresholds), tuple(labels)
        )
    raise ValidationError(f"unknown transform kind {kind!r}")


def _reject_unknown(node: dict, allowed: set[str], what: str) -> None:
    unknown = set(node) - allowed
    if unknown:
        raise ValidationError(f"unknown {what} keys: {sorted(unknown)}")


_CONFIG_KEYS = {
    "input",
    "delimiter",
    "dimensions",
    "weight_column",
    "period_column",
    "missing_policy",
    "max_mode",
    "unit",
    "strict",
}


def load_config(path: str | Path) -> tuple[IngestConfig, DimensionSchema]:
    """Parse the single JSON config document into (IngestConfig, schema).

    Relative paths inside the config resolve against the config file's
    directory. Every key is documented in the README; unknown keys are
    rejected so typos fail loudly.
    """
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("config document must be a JSON object")
    _reject_unknown(doc, _CONFIG_KEYS, "config")
    dims_node = doc.get("dimensions")
    if not isinstance(dims_node, list) or not 2 <= len(dims_node) <= 6:
        raise ValidationError("config needs a 'dimensions' list of 2..6 entries")
    base_dir = path.parent
    dims: list[Dimension] = []
    columns: dict[str, str] = {}
    for node in dims_node:
        _reject_unknown(
            node, {"name", "column", "declared_cardinality", "transform"}, "dimension"
        )
        name = node.get("name")
        column = node.get("column")
        if not name or not column:
            raise ValidationError(f"every dimension needs 'name' and 'column': {node}")
        transform = (
            _transform_from_config(node["transform"], base_dir)
            if "transform" in node
            else None
        )
        dims.append(
            Dimension(
                name=name,
                declared_cardinality=node.get("declared_cardinality"),
                transform=transform,
            )
        )
        columns[name] = column
    schema = DimensionSchema(tuple(dims))
    input_raw = doc.get("input")
    if not input_raw:
        raise ValidationError("config needs an 'input' path")
    input_path = Path(input_raw)
    if not input_path.is_absolute():
        input_path = base_dir / input_path
    try:
        max_mode = MaxEntropyMode(doc.get("max_mode", "observed"))
    except ValueError:
        raise ValidationError(f"bad max_mode {doc.get('max_mode')!r}") from None
    try:
        unit = UnitScale(doc.get("unit", "bits"))
    except ValueError:
        raise ValidationError(f"bad unit {doc.get('unit')!r}") from None
    config = IngestConfig(
        input_path=input_path,
        columns=columns,
        delimiter=doc.get("delimiter", ","),
        weight_column=doc.get("weight_column"),
        period_column=doc.get("period_column"),
        missing_policy=doc.get("missing_policy", "drop"),
        max_mode=max_mode,
        unit=unit,
        strict=bool(doc.get("strict", False)),
    )
    return config, schema


def load_records(
    config: IngestConfig, schema: DimensionSchema
) -> tuple[list[Record], IngestStats]:
    """Read the delimited input into records, one per kept row, input order.

    Unreadable files raise OSError; a header missing an assigned column is
    a schema error. Unusable row values drop the row under a counted
    reason, or raise immediately in strict mode.
    """
    for dim in schema.dims:
        if dim.name not in config.columns:
            raise ValidationError(f"dimension {dim.name!r} has no assigned column")
    stats = IngestStats()
    records: list[Record] = []
    with open(config.input_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=config.delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise DegenerateDataError(f"{config.input_path} is empty") from None
        positions: dict[str, int] = {}
        for col in [config.columns[d.name] for d in schema.dims] + [
            c for c in (config.weight_column, config.period_column) if c
        ]:
            try:
                positions[col] = header.index(col)
            except ValueError:
                raise SchemaError(
                    f"column {col!r} not found in header {header}"
                ) from None
        dim_cols = [positions[config.columns[d.name]] for d in schema.dims]
        # None marks identity: the hot loop skips the call entirely
        transforms = [
            d.transform if d.transform and d.transform.kind != "identity" else None
            for d in schema.dims
        ]
        w_col = positions.get(config.weight_column) if config.weight_column else None
        p_col = positions.get(config.period_column) if config.period_column else None
        explicit_missing = config.missing_policy == "explicit_missing"
        width = max(positions.values()) + 1
        for row_no, row in enumerate(reader, start=2):
            stats.rows_read += 1
            if len(row) < width:
                _problem(stats, config, row_no, "malformed_row")
                continue
            try:
                values = []
                for ci, tr in zip(dim_cols, transforms):
                    raw = row[ci].strip()
                    if not raw:
                        if explicit_missing:
                            values.append(MISSING_LABEL)
                            continue
                        raise _BadValue("missing_value")
                    values.append(tr.apply(raw) if tr is not None else raw)
                weight = 1.0
                if w_col is not None:
                    try:
                        weight = float(row[w_col])
                    except ValueError:
                        raise _BadValue("bad_weight") from None
                    if not math.isfinite(weight) or weight < 0:
                        raise _BadValue("bad_weight")
                period = None
                if p_col is not None:
                    period = row[p_col].strip()
                    if not period:
                        raise _BadValue("missing_period")
            except _BadValue as bad:
                _problem(stats, config, row_no, bad.reason)
                continue
            records.append(Record(values=tuple(values), weight=weight, period=period))
            stats.rows_kept += 1
    if stats.rows_dropped:
        stats.warnings.append(
            f"dropped {stats.rows_dropped} of {stats.rows_read} rows: "
            + ", ".join(f"{k}={v}" for k, v in sorted(stats.drop_reasons.items()))
        )
    assert stats.rows_read == stats.rows_kept + stats.rows_dropped
    return records, stats


def _problem(stats: IngestStats, config: IngestConfig, row_no: int, reason: str) -> None:
    if config.strict:
        raise ValidationError(f"row {row_no}: {reason} (strict mode)")
    stats.drop(reason)


def write_records(
    records: list[Record],
    schema: DimensionSchema,
    path: str | Path,
    *,
    delimiter: str = ",",
) -> None:
    """Write records in the same delimited format load_records reads.

    A weight column appears only when some weight differs from 1; a period
    column appears when records carry periods (all of them must). Weights
    are written with full repr precision so a round trip reproduces the
    table exactly.
    """
    with_weight = any(r.weight != 1.0 for r in records)
    with_period = any(r.period is not None for r in records)
    if with_period and any(r.period is None for r in records):
        raise ValidationError("either every record carries a period or none does")
    header = list(schema.names)
    if with_weight:
        header.append("weight")
    if with_period:
        header.append("period")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter=delimiter)
        writer.writerow(header)
        for rec in records:
            row = list(rec.values)
            if with_weight:
                row.append(repr(rec.weight))
            if with_period:
                row.append(rec.period)
            writer.writerow(row)
