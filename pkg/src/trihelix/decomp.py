"""Group decomposition of synergy and per-period trajectory panels.

The decomposition follows the additive between/within scheme of statistical
decomposition analysis: the pooled transmission splits into mass-weighted
within-group transmissions plus a between-group surplus,

    pooled_T = sum_g (N_g / N) * T_g + delta_T.

A negative delta_T means the pooled level adds synergy beyond the groups;
a positive delta_T means pooling dissipates group-level synergy. Both are
reported without judgment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateDataError, SchemaError, ValidationError
from .infomeasure import (
    MaxEntropyMode,
    UnitScale,
    joint_entropy,
    mutual_redundancy,
    transmission,
)
from .tableau import ContingencyTable, DimensionSchema, Record, build_table, marginalize

_IDENTITY_GUARD = 1e-9


@dataclass(frozen=True)
class GroupingSpec:
    """Which dimension partitions the data and which dimensions carry the
    synergy measure. Groups lighter than ``min_mass`` are reported but
    flagged unreliable; nothing is merged automatically."""

    group_dim: str
    measure_dims: tuple[str, ...]
    min_mass: float = 1.0

    def __post_init__(self) -> None:
        if len(self.measure_dims) < 2:
            raise ValidationError(
                f"measure_dims needs >= 2 dimensions, got {self.measure_dims}"
            )
        if self.group_dim in self.measure_dims:
            raise SchemaError(
                f"group dimension {self.group_dim!r} cannot also be measured"
            )


@dataclass(frozen=True)
class GroupShare:
    key: str
    mass: float
    record_count: int
    weight: float
    T_g: float
    contribution: float
    reliable: bool


@dataclass(frozen=True)
class SynergyDecomposition:
    pooled_T: float
    groups: tuple[GroupShare, ...]
    delta_T: float
    unit: UnitScale = UnitScale.BITS
    degenerate: bool = False  # single group: delta_T is 0 by construction

    @property
    def within_sum(self) -> float:
        return math.fsum(g.contribution for g in self.groups)

    @property
    def interpretation(self) -> str:
        if self.degenerate:
            return "single group: the decomposition is trivial and delta_T is 0"
        if self.delta_T < 0:
            return (
                "delta_T < 0: the pooled level adds synergy beyond the "
                "weighted sum of the groups"
            )
        if self.delta_T > 0:
            return (
                "delta_T > 0: the pooled level dissipates synergy generated "
                "within the groups"
            )
        return "delta_T = 0: the pooled level neither adds nor removes synergy"


def decompose(
    records: list[Record],
    schema: DimensionSchema,
    spec: GroupingSpec,
    *,
    unit: UnitScale = UnitScale.BITS,
) -> SynergyDecomposition:
    """Split pooled synergy into within-group contributions plus delta_T.

    Group weights are mass shares (record-count shares under unit weights).
    Groups come back sorted by key; a constant group dimension degenerates
    to delta_T = 0 and is reported, not rejected.
    """
    if not records:
        raise DegenerateDataError("no records to decompose")
    gi = schema.index(spec.group_dim)
    for d in spec.measure_dims:
        schema.index(d)
    pooled = build_table(records, schema)
    pooled_t = transmission(marginalize(pooled, spec.measure_dims), spec.measure_dims)

    by_group: dict[str, list[Record]] = {}
    for rec in records:
        by_group.setdefault(rec.values[gi], []).append(rec)
    shares: list[GroupShare] = []
    for key in sorted(by_group):
        members = by_group[key]
        try:
            g_table = build_table(members, schema)
        except DegenerateDataError as exc:
            raise DegenerateDataError(
                f"group {key!r} has no mass; every group needs positive mass"
            ) from exc
        t_g = transmission(marginalize(g_table, spec.measure_dims), spec.measure_dims)
        weight = g_table.total / pooled.total
        shares.append(
            GroupShare(
                key=key,
                mass=g_table.total,
                record_count=len(members),
                weight=weight,
                T_g=t_g,
                contribution=weight * t_g,
                reliable=g_table.total >= spec.min_mass,
            )
        )
    within = math.fsum(s.contribution for s in shares)
    delta = pooled_t - within
    if abs(delta + within - pooled_t) > _IDENTITY_GUARD:
        raise ValidationError("decomposition identity drifted; internal error")
    return SynergyDecomposition(
        pooled_T=pooled_t,
        groups=tuple(shares),
        delta_T=delta,
        unit=unit,
        degenerate=len(shares) == 1,
    )


@dataclass(frozen=True)
class PanelPoint:
    """One period's sample of the trajectory: realized entropy, maximum
    entropy of the category space, the unrealized-options share, and the
    mutual redundancy of the measured dimensions."""

    period: str
    H_obs: float
    H_max: float
    shannon_R: float
    R_n: float
    record_count: int


def _space_sizes(
    schema: DimensionSchema,
    measure_dims: tuple[str, ...],
    table: ContingencyTable,
    running: dict[str, set[str]],
    max_mode: MaxEntropyMode,
) -> list[int]:
    sizes: list[int] = []
    for name in measure_dims:
        if max_mode == MaxEntropyMode.DECLARED:
            card = schema.dimension(name).declared_cardinality
            if card is None:
                raise ValidationError(
                    f"dimension {name!r} has no declared_cardinality; "
                    "declared max-entropy mode is unavailable"
                )
            sizes.append(card)
        elif max_mode == MaxEntropyMode.OBSERVED:
            sizes.append(len(table.support_of(name)))
        else:  # cumulative union over periods seen so far
            running[name] |= table.support_of(name)
            sizes.append(len(running[name]))
    return sizes


def panel_series(
    records: list[Record],
    schema: DimensionSchema,
    measure_dims: tuple[str, ...],
    max_mode: MaxEntropyMode = MaxEntropyMode.CUMULATIVE,
    *,
    epsilon: float = 1e-12,
    unit: UnitScale = UnitScale.BITS,
) -> list[PanelPoint]:
    """One PanelPoint per period, ascending by period label.

    In cumulative mode the category space at period t is the union of
    everything observed up to and including t, so H_max never decreases.
    """
    if not records:
        raise DegenerateDataError("no records for panel computation")
    if len(measure_dims) < 2:
        raise ValidationError(f"panel needs >= 2 measure dims, got {measure_dims}")
    for d in measure_dims:
        schema.index(d)
    by_period: dict[str, list[Record]] = {}
    for rec in records:
        if rec.period is None:
            raise ValidationError(
                f"record {rec.values!r} has no period label; panels need periods"
            )
        by_period.setdefault(rec.period, []).append(rec)
    running: dict[str, set[str]] = {name: set() for name in measure_dims}
    points: list[PanelPoint] = []
    for period in sorted(by_period):
        members = by_period[period]
        try:
            table = marginalize(build_table(members, schema), measure_dims)
        except DegenerateDataError as exc:
            raise DegenerateDataError(f"period {period!r} has no mass") from exc
        sizes = _space_sizes(schema, tuple(measure_dims), table, running, max_mode)
        h_max = math.fsum(math.log2(s) for s in sizes)
        if h_max <= 0.0:
            raise DegenerateDataError(
                f"period {period!r}: single-state space, redundancy undefined"
            )
        h_obs = joint_entropy(table, measure_dims)
        points.append(
            PanelPoint(
                period=period,
                H_obs=h_obs,
                H_max=h_max,
                shannon_R=min(1.0, max(0.0, (h_max - h_obs) / h_max)),
                R_n=mutual_redundancy(table, measure_dims),
                record_count=len(members),
            )
        )
    return points
