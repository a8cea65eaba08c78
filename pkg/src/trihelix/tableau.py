"""Categorical data model and sparse n-dimensional contingency tables.

Cells are keyed by category tuples and only observed (positive-mass) cells
are stored: realistic register spaces (postal prefix x activity code x size
class) are huge and almost entirely empty. Tables are immutable after
construction; all reads are safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, NamedTuple, Sequence

from .errors import DegenerateDataError, SchemaError, ValidationError

if TYPE_CHECKING:  # TransformRule lives in ingest; carried here, applied there
    from .ingest import TransformRule

MAX_DIMS = 6


@dataclass(frozen=True)
class Dimension:
    """One categorical axis: name, optional declared cardinality, optional
    ingest-time transform rule."""

    name: str
    declared_cardinality: int | None = None
    transform: "TransformRule | None" = None

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not self.name:
            raise ValidationError("dimension name must be a non-empty string")
        if "," in self.name:
            # names appear as ","-joined subset keys in reports
            raise ValidationError(f"dimension name may not contain ',': {self.name!r}")
        if self.declared_cardinality is not None and self.declared_cardinality < 1:
            raise ValidationError(
                f"declared_cardinality must be >= 1 for dimension {self.name!r}"
            )


@dataclass(frozen=True)
class DimensionSchema:
    """Ordered list of named categorical axes.

    Declared analysis schemas carry 2..6 dimensions; single-dimension
    instances exist only as marginals.
    """

    dims: tuple[Dimension, ...]

    def __post_init__(self) -> None:
        if not 1 <= len(self.dims) <= MAX_DIMS:
            raise ValidationError(
                f"schema must have 1..{MAX_DIMS} dimensions, got {len(self.dims)}"
            )
        names = [d.name for d in self.dims]
        if len(set(names)) != len(names):
            raise ValidationError(f"dimension names must be unique: {names}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.dims)

    def index(self, name: str) -> int:
        for i, d in enumerate(self.dims):
            if d.name == name:
                return i
        raise SchemaError(f"unknown dimension {name!r}; schema has {self.names}")

    def dimension(self, name: str) -> Dimension:
        return self.dims[self.index(name)]

    def subschema(self, keep: Sequence[str]) -> "DimensionSchema":
        """Sub-schema over ``keep``, preserving schema order."""
        idx = sorted(self.index(n) for n in keep)
        return DimensionSchema(tuple(self.dims[i] for i in idx))


def schema_of(*dims: Dimension | str) -> DimensionSchema:
    """Convenience constructor; bare strings become plain dimensions."""
    return DimensionSchema(
        tuple(d if isinstance(d, Dimension) else Dimension(d) for d in dims)
    )


class Record(NamedTuple):
    """One unit of analysis: a category label per schema dimension, a
    nonnegative mass weight (default 1), and an optional period label."""

    values: tuple[str, ...]
    weight: float = 1.0
    period: str | None = None


@dataclass(frozen=True)
class ContingencyTable:
    """Sparse map from category tuples to positive mass.

    ``total`` is the exact compensated sum of all cell masses and
    ``support`` holds the observed categories per dimension. Treat ``cells``
    as read-only; tables are never mutated after construction.
    """

    schema: DimensionSchema
    cells: dict[tuple[str, ...], float]
    total: float
    support: tuple[frozenset[str], ...]

    def __len__(self) -> int:
        return len(self.cells)

    def support_of(self, dim: str) -> frozenset[str]:
        return self.support[self.schema.index(dim)]


def _support_from_cells(
    n: int, cells: dict[tuple[str, ...], float]
) -> tuple[frozenset[str], ...]:
    sets: list[set[str]] = [set() for _ in range(n)]
    for key in cells:
        for i, cat in enumerate(key):
            sets[i].add(cat)
    return tuple(frozenset(s) for s in sets)


def _check_declared(schema: DimensionSchema, support: tuple[frozenset[str], ...]) -> None:
    for dim, seen in zip(schema.dims, support):
        if dim.declared_cardinality is not None and len(seen) > dim.declared_cardinality:
            raise SchemaError(
                f"dimension {dim.name!r} has {len(seen)} observed categories, "
                f"more than the declared cardinality {dim.declared_cardinality}"
            )


def build_table(records: Iterable[Record], schema: DimensionSchema) -> ContingencyTable:
    """Tabulate records into a sparse contingency table.

    Cell mass is the sum of the weights of the records sharing that tuple,
    accumulated with exact compensated summation so the result is identical
    under any permutation or sharding of the input. Zero-weight records are
    legal but contribute nothing; an all-zero build is an error.
    """
    n = len(schema.dims)
    counts: dict[tuple[str, ...], int] = {}
    oddments: dict[tuple[str, ...], list[float]] = {}
    saw_any = False
    for rec in records:
        saw_any = True
        vals = rec.values
        if len(vals) != n:
            raise SchemaError(
                f"record has {len(vals)} values, schema expects {n}: {vals!r}"
            )
        w = rec.weight
        if w < 0:
            raise ValidationError(f"negative record weight {w} for {vals!r}")
        for v in vals:
            if not v:
                raise ValidationError(
                    f"empty category label in {vals!r}; map or drop missing "
                    "values at ingest"
                )
        if w == 0:
            continue
        if w == 1.0:
            counts[vals] = counts.get(vals, 0) + 1
        else:
            oddments.setdefault(vals, []).append(w)
    if not saw_any:
        raise DegenerateDataError("no records to tabulate")
    cells: dict[tuple[str, ...], float] = {k: float(c) for k, c in counts.items()}
    for key, ws in oddments.items():
        # fsum makes each cell's mass independent of record order
        cells[key] = cells.get(key, 0.0) + math.fsum(ws)
    if not cells:
        raise DegenerateDataError("all records carry zero weight; table has no mass")
    support = _support_from_cells(n, cells)
    _check_declared(schema, support)
    return ContingencyTable(schema, cells, math.fsum(cells.values()), support)


def table_from_cells(
    schema: DimensionSchema, cells: dict[tuple[str, ...], float]
) -> ContingencyTable:
    """Build a table directly from a cell-mass map (zero masses are skipped)."""
    n = len(schema.dims)
    clean: dict[tuple[str, ...], float] = {}
    for key, mass in cells.items():
        if len(key) != n:
            raise SchemaError(f"cell key {key!r} has arity {len(key)}, expected {n}")
        if mass < 0 or not math.isfinite(mass):
            raise ValidationError(f"cell mass must be finite and >= 0, got {mass}")
        for v in key:
            if not v:
                raise ValidationError(f"empty category label in cell key {key!r}")
        if mass > 0:
            clean[key] = float(mass)
    if not clean:
        raise DegenerateDataError("cell map has no positive mass")
    support = _support_from_cells(n, clean)
    _check_declared(schema, support)
    return ContingencyTable(schema, clean, math.fsum(clean.values()), support)


def marginalize(table: ContingencyTable, keep: Iterable[str]) -> ContingencyTable:
    """Sum the table down to the ``keep`` dimensions (schema order kept).

    Total mass is carried over unchanged; per-cell sums are compensated, so
    marginal masses do not depend on cell iteration order.
    """
    keep_names = list(keep)
    if not keep_names:
        raise ValidationError("keep set must not be empty")
    if len(set(keep_names)) != len(keep_names):
        raise ValidationError(f"duplicate dimension in keep set: {keep_names}")
    idx = sorted(table.schema.index(n) for n in keep_names)
    if len(idx) == len(table.schema.dims):
        return table
    grouped: dict[tuple[str, ...], list[float]] = {}
    for key, mass in table.cells.items():
        out = tuple(key[i] for i in idx)
        grouped.setdefault(out, []).append(mass)
    cells = {k: math.fsum(v) for k, v in grouped.items()}
    sub = DimensionSchema(tuple(table.schema.dims[i] for i in idx))
    support = tuple(table.support[i] for i in idx)
    return ContingencyTable(sub, cells, table.total, support)


def slice_group(
    records: Sequence[Record],
    schema: DimensionSchema,
    group_dim: str,
    group_value: str,
) -> list[Record]:
    """Records whose ``group_dim`` category equals ``group_value``, in order.

    An absent group value yields an empty list, not an error.
    """
    gi = schema.index(group_dim)
    return [r for r in records if r.values[gi] == group_value]
