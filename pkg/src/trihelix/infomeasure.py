"""Entropy, transmission, and mutual-redundancy measures in bits.

All measures use base-2 logarithms. Probabilities are maximum-likelihood
cell frequencies (mass / total) with the 0 log 0 = 0 convention; unobserved
cells contribute nothing. Accumulation uses exact compensated summation
(math.fsum) over cells visited in sorted-key order, so every figure is
bit-reproducible across runs and across any sharding of the count.

Measure definitions, for an ordered dimension subset U:

    H(d)        = -sum_c p(c) log2 p(c)          marginal entropy, bits
    H(U)        = entropy of the joint marginal over U
    T(U)        = sum over nonempty V within U of (-1)^(|V|+1) H(V)
                  (for |U| = 2 this is H1 + H2 - H12, and is nonnegative)
    Y(pair)     = H1 + H2 + T(pair)              surplus information
    R(U)        = (-1)^(1+|U|) T(U)              mutual redundancy
    balance(U)  = left + right where
                  left  = H(U) - sum_i H(i)      (<= 0 by subadditivity)
                  right = sum_{k=2..|U|-1} (-1)^k sum_{|V|=k} T(V)
                  and left + right = R(U)

A negative R means self-organization prevails over organization in the
configuration under study; a positive R means the reverse.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

from .errors import DegenerateDataError, ValidationError
from .tableau import ContingencyTable, DimensionSchema

DEFAULT_EPSILON = 1e-12

# rounding guards: residues this small are floating-point dust, not signal
_NEG_ENTROPY_GUARD = 1e-9
_IDENTITY_GUARD = 1e-9


class UnitScale(str, Enum):
    """Reporting scale; computation is always in bits."""

    BITS = "bits"
    MBITS = "mbits"


class MaxEntropyMode(str, Enum):
    """Which category space defines the maximum entropy."""

    DECLARED = "declared"
    OBSERVED = "observed"
    CUMULATIVE = "cumulative"


class SynergyVerdict(str, Enum):
    SELF_ORGANIZATION_PREVAILS = "self_organization_prevails"
    ORGANIZATION_PREVAILS = "organization_prevails"
    BALANCED = "balanced"

    @staticmethod
    def classify(r: float, epsilon: float = DEFAULT_EPSILON) -> "SynergyVerdict":
        if r < -epsilon:
            return SynergyVerdict.SELF_ORGANIZATION_PREVAILS
        if r > epsilon:
            return SynergyVerdict.ORGANIZATION_PREVAILS
        return SynergyVerdict.BALANCED


@dataclass(frozen=True)
class SubsetMask:
    """Ordered, duplicate-free subset of schema dimension names."""

    dims: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.dims:
            raise ValidationError("subset must not be empty")
        if len(set(self.dims)) != len(self.dims):
            raise ValidationError(f"duplicate dimension in subset: {self.dims}")

    def __len__(self) -> int:
        return len(self.dims)


SubsetLike = SubsetMask | Iterable[str]


def _resolve_subset(schema: DimensionSchema, subset: SubsetLike) -> tuple[str, ...]:
    """Canonicalize to schema order; any permutation maps to the same tuple."""
    names = tuple(subset.dims if isinstance(subset, SubsetMask) else subset)
    if not names:
        raise ValidationError("subset must not be empty")
    if len(set(names)) != len(names):
        raise ValidationError(f"duplicate dimension in subset: {names}")
    idx = sorted(schema.index(n) for n in names)
    return tuple(schema.dims[i].name for i in idx)


def _require_mass(table: ContingencyTable) -> None:
    if table.total <= 0:
        raise DegenerateDataError("table has zero total mass")


def _entropy_from_masses(
    masses: Iterable[float],
    total: float,
    zero_cells: int = 0,
    zero_mass: float = 0.0,
) -> float:
    """H = log2(total) - sum(m log2 m) / total over positive masses.

    ``zero_cells`` cells of identical ``zero_mass`` account for smoothing
    mass on unobserved cells without materializing them.
    """
    s = math.fsum(m * math.log2(m) for m in masses)
    if zero_cells and zero_mass > 0.0:
        s += zero_cells * (zero_mass * math.log2(zero_mass))
    h = math.log2(total) - s / total
    if h < 0.0:
        if h < -_NEG_ENTROPY_GUARD:
            raise ValidationError(f"entropy computed as {h}; inconsistent table")
        h = 0.0
    return h


def _marginal_masses(
    table: ContingencyTable, idx: tuple[int, ...]
) -> dict[tuple[str, ...], float]:
    grouped: dict[tuple[str, ...], list[float]] = {}
    for key, mass in table.cells.items():
        out = tuple(key[i] for i in idx)
        grouped.setdefault(out, []).append(mass)
    return {k: math.fsum(v) for k, v in grouped.items()}


def _subset_entropy(
    table: ContingencyTable, names: tuple[str, ...], smoothing_alpha: float
) -> float:
    idx = tuple(sorted(table.schema.index(n) for n in names))
    masses = _marginal_masses(table, idx)
    ordered = [masses[k] for k in sorted(masses)]
    if smoothing_alpha == 0.0:
        return _entropy_from_masses(ordered, table.total)
    if smoothing_alpha < 0:
        raise ValidationError(f"smoothing_alpha must be >= 0, got {smoothing_alpha}")
    # additive smoothing: alpha mass on every cell of the full observed
    # product space, projected exactly onto this subset
    sizes = [len(s) for s in table.support]
    rest = 1
    for i, size in enumerate(sizes):
        if i not in idx:
            rest *= size
    space = 1
    for i in idx:
        space *= sizes[i]
    add = smoothing_alpha * rest
    total = table.total + smoothing_alpha * space * rest
    return _entropy_from_masses(
        (m + add for m in ordered), total, zero_cells=space - len(ordered), zero_mass=add
    )


def entropy(table: ContingencyTable, dim: str, *, smoothing_alpha: float = 0.0) -> float:
    """Shannon entropy of one dimension's marginal, in bits."""
    _require_mass(table)
    return _subset_entropy(table, (table.schema.dimension(dim).name,), smoothing_alpha)


def joint_entropy(
    table: ContingencyTable, subset: SubsetLike, *, smoothing_alpha: float = 0.0
) -> float:
    """Joint entropy of the marginal over ``subset``, in bits."""
    _require_mass(table)
    names = _resolve_subset(table.schema, subset)
    return _subset_entropy(table, names, smoothing_alpha)


def _all_subset_entropies(
    table: ContingencyTable, names: tuple[str, ...], smoothing_alpha: float
) -> dict[tuple[str, ...], float]:
    """Entropy of every nonempty subset of ``names``, keyed by name tuple."""
    out: dict[tuple[str, ...], float] = {}
    for k in range(1, len(names) + 1):
        for combo in itertools.combinations(names, k):
            out[combo] = _subset_entropy(table, combo, smoothing_alpha)
    return out


def _transmission_of(
    entropies: Mapping[tuple[str, ...], float], names: tuple[str, ...]
) -> float:
    # fixed reduce order: subset size, then lexicographic
    terms = []
    for k in range(1, len(names) + 1):
        sign = 1.0 if k % 2 == 1 else -1.0
        for combo in itertools.combinations(names, k):
            terms.append(sign * entropies[combo])
    return math.fsum(terms)


def transmission(
    table: ContingencyTable, subset: SubsetLike, *, smoothing_alpha: float = 0.0
) -> float:
    """Multivariate transmission T over ``subset`` (|subset| >= 2), in bits.

    Pairwise T is nonnegative; for three or more dimensions the sign is
    unconstrained. Any permutation of the subset yields the identical float.
    """
    _require_mass(table)
    names = _resolve_subset(table.schema, subset)
    if len(names) < 2:
        raise ValidationError(f"transmission needs >= 2 dimensions, got {names}")
    return _transmission_of(_all_subset_entropies(table, names, smoothing_alpha), names)


def y_information(
    table: ContingencyTable, pair: SubsetLike, *, smoothing_alpha: float = 0.0
) -> float:
    """Surplus information of a pair: H1 + H2 + T12 (= H12 + 2 T12)."""
    _require_mass(table)
    names = _resolve_subset(table.schema, pair)
    if len(names) != 2:
        raise ValidationError(f"y_information is defined for pairs, got {names}")
    ent = _all_subset_entropies(table, names, smoothing_alpha)
    t = _transmission_of(ent, names)
    return ent[(names[0],)] + ent[(names[1],)] + t


def mutual_redundancy(
    table: ContingencyTable, subset: SubsetLike, *, smoothing_alpha: float = 0.0
) -> float:
    """Mutual redundancy R = (-1)^(1+n) T over ``subset``, in bits.

    For pairs this is exactly -T (and therefore <= 0); negative values
    signal prevailing self-organization.
    """
    t = transmission(table, subset, smoothing_alpha=smoothing_alpha)
    n = len(_resolve_subset(table.schema, subset))
    return t if n % 2 == 1 else -t


def redundancy_balance(
    table: ContingencyTable, subset: SubsetLike, *, smoothing_alpha: float = 0.0
) -> tuple[float, float]:
    """Split R into its two bracket terms: (left, right).

    left = joint entropy minus the sum of marginal entropies (never
    positive); right = the alternating sum of transmissions over the strict
    intermediate subset sizes, starting positive at pairs. The two add up
    to mutual_redundancy.
    """
    _require_mass(table)
    names = _resolve_subset(table.schema, subset)
    if len(names) < 2:
        raise ValidationError(f"redundancy_balance needs >= 2 dimensions, got {names}")
    ent = _all_subset_entropies(table, names, smoothing_alpha)
    left = math.fsum(
        [ent[names]] + [-ent[(n,)] for n in names]
    )
    right_terms = []
    for k in range(2, len(names)):
        sign = 1.0 if k % 2 == 0 else -1.0
        for combo in itertools.combinations(names, k):
            right_terms.append(sign * _transmission_of(ent, combo))
    right = math.fsum(right_terms)
    return left, right


def max_entropy(
    table: ContingencyTable, dim: str, max_mode: MaxEntropyMode = MaxEntropyMode.OBSERVED
) -> float:
    """log2 of the dimension's category-space size under the chosen mode."""
    d = table.schema.dimension(dim)
    if max_mode == MaxEntropyMode.DECLARED:
        if d.declared_cardinality is None:
            raise ValidationError(
                f"dimension {dim!r} has no declared_cardinality; "
                "declared max-entropy mode is unavailable"
            )
        return math.log2(d.declared_cardinality)
    if max_mode == MaxEntropyMode.OBSERVED:
        return math.log2(len(table.support_of(dim)))
    raise ValidationError(
        "cumulative max-entropy applies to period panels; "
        "use declared or observed for a single table"
    )


def shannon_redundancy(
    table: ContingencyTable, dim: str, max_mode: MaxEntropyMode = MaxEntropyMode.OBSERVED
) -> float:
    """(H_max - H_obs) / H_max for one dimension; dimensionless, in [0, 1]."""
    _require_mass(table)
    h_max = max_entropy(table, dim, max_mode)
    if h_max <= 0.0:
        raise DegenerateDataError(
            f"redundancy undefined for dimension {dim!r}: "
            f"single-category space under {max_mode.value} mode"
        )
    h_obs = entropy(table, dim)
    return min(1.0, max(0.0, (h_max - h_obs) / h_max))


@dataclass(frozen=True)
class InfoReport:
    """Every measure for one table and one dimension subset, in bits.

    ``flags`` is derived, not supplied: a negative right bracket with four
    or more dimensions is flagged (it is not guaranteed positive there) but
    never rejected.
    """

    dims: tuple[str, ...]
    entropies: dict[str, float]
    joint_entropies: dict[tuple[str, ...], float]
    transmissions: dict[tuple[str, ...], float]
    mutual_redundancy: float
    left_bracket: float
    right_bracket: float
    shannon_redundancy: dict[str, float]
    verdict: SynergyVerdict
    unit: UnitScale = UnitScale.BITS
    flags: tuple[str, ...] = field(init=False)

    def __post_init__(self) -> None:
        gap = abs(self.mutual_redundancy - (self.left_bracket + self.right_bracket))
        if gap > _IDENTITY_GUARD:
            raise ValidationError(
                f"bracket identity violated by {gap} bits; inconsistent report"
            )
        if self.left_bracket > DEFAULT_EPSILON:
            raise ValidationError(
                f"left bracket {self.left_bracket} is positive; "
                "subadditivity violated"
            )
        flags: list[str] = []
        if len(self.dims) >= 4 and self.right_bracket < -DEFAULT_EPSILON:
            flags.append("negative_right_bracket")
        object.__setattr__(self, "flags", tuple(flags))


def compute_report(
    table: ContingencyTable,
    subset: SubsetLike | None = None,
    *,
    max_mode: MaxEntropyMode = MaxEntropyMode.OBSERVED,
    epsilon: float = DEFAULT_EPSILON,
    unit: UnitScale = UnitScale.BITS,
    smoothing_alpha: float = 0.0,
) -> InfoReport:
    """Compute the full measure set over ``subset`` (default: all dimensions).

    For a single unpartitioned table the cumulative category space equals
    the observed one, so CUMULATIVE falls back to OBSERVED here.
    """
    _require_mass(table)
    names = _resolve_subset(table.schema, subset if subset is not None else table.schema.names)
    if len(names) < 2:
        raise ValidationError(f"a report needs >= 2 dimensions, got {names}")
    ent = _all_subset_entropies(table, names, smoothing_alpha)
    transmissions = {}
    for k in range(2, len(names) + 1):
        for combo in itertools.combinations(names, k):
            transmissions[combo] = _transmission_of(ent, combo)
    t_full = transmissions[names]
    r = t_full if len(names) % 2 == 1 else -t_full
    left = math.fsum([ent[names]] + [-ent[(n,)] for n in names])
    right_terms = []
    for k in range(2, len(names)):
        sign = 1.0 if k % 2 == 0 else -1.0
        for combo in itertools.combinations(names, k):
            right_terms.append(sign * transmissions[combo])
    # for n = 2 the right bracket is an empty sum and left equals R exactly
    right = math.fsum(right_terms)
    sh_mode = (
        MaxEntropyMode.OBSERVED if max_mode == MaxEntropyMode.CUMULATIVE else max_mode
    )
    return InfoReport(
        dims=names,
        entropies={n: ent[(n,)] for n in names},
        joint_entropies=dict(ent),
        transmissions=transmissions,
        mutual_redundancy=r,
        left_bracket=left,
        right_bracket=right,
        shannon_redundancy={n: shannon_redundancy(table, n, sh_mode) for n in names},
        verdict=SynergyVerdict.classify(r, epsilon),
        unit=unit,
    )
