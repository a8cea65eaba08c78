"""Synthetic record generators with known information structure.

Each generator defines a finite joint pmf over small categorical spaces.
Records can be drawn i.i.d. (seeded, reproducible) or emitted balanced-exact,
where every support tuple appears at its exact expected multiplicity so the
empirical frequencies equal the pmf with no sampling noise at all.

``analytic_measures`` evaluates every measure by dense enumeration of the
full joint pmf with numpy. That dense path shares no code with the sparse
table path and serves as the independent oracle for it.

Sampling uses numpy's PCG64 bit generator; given the same seed the record
stream is byte-identical across runs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .infomeasure import (
    DEFAULT_EPSILON,
    InfoReport,
    MaxEntropyMode,
    SynergyVerdict,
    UnitScale,
)
from .tableau import Dimension, DimensionSchema, Record

KINDS = ("independent", "copy", "parity", "coupled", "random_joint")


@dataclass(frozen=True)
class GeneratorSpec:
    """A named pmf plus a sampling mode.

    kind:
      independent(cardinalities)  product of uniform marginals
      copy(n_dims)                one uniform bit copied to every dimension
      parity                      three binary dims, third = xor of the others
      coupled(coupling)           mixture: coupling * parity + (1 - coupling)
                                  * independent uniform bits
      random_joint(cardinalities, concentration, seed)  Dirichlet-drawn pmf
    mode: "sampled" (i.i.d., seeded) or "balanced" (exact multiplicities).
    """

    kind: str
    n: int
    mode: str = "sampled"
    seed: int = 0
    cardinalities: tuple[int, ...] | None = None
    n_dims: int | None = None
    coupling: float | None = None
    concentration: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValidationError(f"unknown generator kind {self.kind!r}; pick from {KINDS}")
        if self.n < 1:
            raise ValidationError(f"sample count must be >= 1, got {self.n}")
        if self.mode not in ("sampled", "balanced"):
            raise ValidationError(f"mode must be 'sampled' or 'balanced', got {self.mode!r}")
        if self.kind in ("independent", "random_joint"):
            cards = self.cardinalities
            if not cards or any(c < 2 for c in cards) or not 2 <= len(cards) <= 6:
                raise ValidationError(
                    f"{self.kind} needs 2..6 cardinalities, each >= 2, got {cards}"
                )
        if self.kind == "copy":
            if self.n_dims is None or not 2 <= self.n_dims <= 6:
                raise ValidationError(f"copy needs n_dims in 2..6, got {self.n_dims}")
        if self.kind == "coupled":
            lam = self.coupling
            if lam is None or not 0.0 <= lam <= 1.0:
                raise ValidationError(f"coupling must lie in [0, 1], got {lam}")
        if self.kind == "random_joint":
            if self.concentration is None or self.concentration <= 0:
                raise ValidationError(
                    f"random_joint needs concentration > 0, got {self.concentration}"
                )

    def dim_cards(self) -> tuple[int, ...]:
        if self.kind in ("independent", "random_joint"):
            return tuple(self.cardinalities)  # type: ignore[arg-type]
        if self.kind == "copy":
            return (2,) * int(self.n_dims)  # type: ignore[arg-type]
        return (2, 2, 2)  # parity, coupled

    def dim_names(self) -> tuple[str, ...]:
        return tuple(f"d{i + 1}" for i in range(len(self.dim_cards())))

    def schema(self) -> DimensionSchema:
        return DimensionSchema(
            tuple(
                Dimension(name, declared_cardinality=card)
                for name, card in zip(self.dim_names(), self.dim_cards())
            )
        )

    def dense_pmf(self) -> np.ndarray:
        """The full joint pmf as a dense array indexed by category number."""
        cards = self.dim_cards()
        if self.kind == "independent":
            p = np.full(cards, 1.0 / float(np.prod(cards)))
        elif self.kind == "copy":
            p = np.zeros(cards)
            p[(0,) * len(cards)] = 0.5
            p[(1,) * len(cards)] = 0.5
        elif self.kind in ("parity", "coupled"):
            lam = 1.0 if self.kind == "parity" else float(self.coupling)  # type: ignore[arg-type]
            p = np.empty(cards)
            for x, y, z in itertools.product((0, 1), repeat=3):
                even = (x ^ y ^ z) == 0
                p[x, y, z] = lam / 4.0 + (1.0 - lam) / 8.0 if even else (1.0 - lam) / 8.0
        else:  # random_joint
            rng = np.random.Generator(np.random.PCG64(self.seed))
            alpha = float(self.concentration)  # type: ignore[arg-type]
            flat = rng.dirichlet(np.full(int(np.prod(cards)), alpha))
            p = flat.reshape(cards)
        return p

    def pmf_cells(self) -> dict[tuple[str, ...], float]:
        """Support cells as label tuples -> probability, sorted by key."""
        p = self.dense_pmf()
        cells: dict[tuple[str, ...], float] = {}
        for idx in sorted(itertools.product(*(range(c) for c in p.shape))):
            mass = float(p[idx])
            if mass > 0.0:
                cells[tuple(str(i) for i in idx)] = mass
        return cells


def generate(spec: GeneratorSpec) -> list[Record]:
    """Materialize the spec as a record list (unit weights, no periods)."""
    cells = spec.pmf_cells()
    keys = sorted(cells)
    if spec.mode == "balanced":
        counts = []
        for key in keys:
            expected = spec.n * cells[key]
            count = round(expected)
            if abs(expected - count) > 1e-9 * max(1.0, expected):
                raise ValidationError(
                    f"balanced-exact needs integral cell multiplicities; "
                    f"N = {spec.n} gives {expected} for cell {key} "
                    f"(for uniform supports: N divisible by {len(keys)})"
                )
            counts.append(count)
        if sum(counts) != spec.n:
            raise ValidationError(
                f"balanced-exact multiplicities sum to {sum(counts)}, not N = {spec.n}"
            )
        out: list[Record] = []
        for key, count in zip(keys, counts):
            out.extend([Record(values=key)] * count)
        return out
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    probs = np.array([cells[k] for k in keys])
    draws = rng.choice(len(keys), size=spec.n, p=probs)
    return [Record(values=keys[i]) for i in draws]


# ---------------------------------------------------------------------------
# dense oracle: every measure by direct summation over the full pmf array
# ---------------------------------------------------------------------------


def dense_entropy(masses: np.ndarray, axes: tuple[int, ...]) -> float:
    """Entropy (bits) of the marginal over ``axes`` of a dense mass array."""
    p = np.asarray(masses, dtype=float)
    p = p / p.sum()
    drop = tuple(i for i in range(p.ndim) if i not in axes)
    marg = p.sum(axis=drop) if drop else p
    flat = marg[marg > 0]
    return float(-(flat * np.log2(flat)).sum())


def dense_transmission(masses: np.ndarray, axes: tuple[int, ...]) -> float:
    """Inclusion-exclusion transmission over ``axes`` of a dense mass array."""
    if len(axes) < 2:
        raise ValidationError(f"transmission needs >= 2 axes, got {axes}")
    t = 0.0
    for k in range(1, len(axes) + 1):
        sign = 1.0 if k % 2 == 1 else -1.0
        for combo in itertools.combinations(axes, k):
            t += sign * dense_entropy(masses, combo)
    return t


def dense_mutual_redundancy(masses: np.ndarray, axes: tuple[int, ...]) -> float:
    t = dense_transmission(masses, axes)
    return t if len(axes) % 2 == 1 else -t


def dense_brackets(masses: np.ndarray, axes: tuple[int, ...]) -> tuple[float, float]:
    left = dense_entropy(masses, axes) - sum(dense_entropy(masses, (a,)) for a in axes)
    right = 0.0
    for k in range(2, len(axes)):
        sign = 1.0 if k % 2 == 0 else -1.0
        for combo in itertools.combinations(axes, k):
            right += sign * dense_transmission(masses, combo)
    return float(left), float(right)


def dense_shannon_redundancy(
    masses: np.ndarray, axis: int, cardinality: int | None = None
) -> float:
    """(Hmax - Hobs)/Hmax for one axis; Hmax from the given cardinality or
    the observed support size."""
    p = np.asarray(masses, dtype=float)
    p = p / p.sum()
    drop = tuple(i for i in range(p.ndim) if i != axis)
    marg = p.sum(axis=drop) if drop else p
    size = cardinality if cardinality is not None else int((marg > 0).sum())
    if size < 2:
        raise ValidationError(f"redundancy undefined for a {size}-state axis")
    h_max = math.log2(size)
    h_obs = float(-(marg[marg > 0] * np.log2(marg[marg > 0])).sum())
    return min(1.0, max(0.0, (h_max - h_obs) / h_max))


def dense_report(
    masses: np.ndarray,
    dim_names: tuple[str, ...],
    *,
    declared: tuple[int, ...] | None = None,
    max_mode: MaxEntropyMode = MaxEntropyMode.OBSERVED,
    epsilon: float = DEFAULT_EPSILON,
    unit: UnitScale = UnitScale.BITS,
) -> InfoReport:
    """Full InfoReport from a dense mass array, by direct summation only."""
    p = np.asarray(masses, dtype=float)
    if p.ndim != len(dim_names):
        raise ValidationError(
            f"array has {p.ndim} axes but {len(dim_names)} names were given"
        )
    axes = tuple(range(p.ndim))
    joint = {}
    for k in range(1, len(axes) + 1):
        for combo in itertools.combinations(axes, k):
            joint[tuple(dim_names[a] for a in combo)] = dense_entropy(p, combo)
    transmissions = {}
    for k in range(2, len(axes) + 1):
        for combo in itertools.combinations(axes, k):
            transmissions[tuple(dim_names[a] for a in combo)] = dense_transmission(p, combo)
    r = dense_mutual_redundancy(p, axes)
    left, right = dense_brackets(p, axes)
    if max_mode == MaxEntropyMode.DECLARED:
        if declared is None:
            raise ValidationError("declared max-entropy mode needs cardinalities")
        cards: tuple[int | None, ...] = declared
    else:
        cards = (None,) * p.ndim
    return InfoReport(
        dims=tuple(dim_names),
        entropies={dim_names[a]: joint[(dim_names[a],)] for a in axes},
        joint_entropies=joint,
        transmissions=transmissions,
        mutual_redundancy=r,
        left_bracket=left,
        right_bracket=right,
        shannon_redundancy={
            dim_names[a]: dense_shannon_redundancy(p, a, cards[a]) for a in axes
        },
        verdict=SynergyVerdict.classify(r, epsilon),
        unit=unit,
    )


def analytic_measures(
    spec: GeneratorSpec,
    *,
    max_mode: MaxEntropyMode = MaxEntropyMode.OBSERVED,
    epsilon: float = DEFAULT_EPSILON,
    unit: UnitScale = UnitScale.BITS,
) -> InfoReport:
    """Oracle report for the spec's pmf, by dense enumeration (no sampling)."""
    declared = spec.dim_cards() if max_mode == MaxEntropyMode.DECLARED else None
    return dense_report(
        spec.dense_pmf(),
        spec.dim_names(),
        declared=declared,
        max_mode=max_mode,
        epsilon=epsilon,
        unit=unit,
    )
