import itertools
import math

import numpy as np
import pytest

from trihelix import (
    DegenerateDataError,
    GroupingSpec,
    MaxEntropyMode,
    Record,
    SchemaError,
    ValidationError,
    build_table,
    decompose,
    mutual_redundancy,
    panel_series,
    schema_of,
)
from trihelix.synth import GeneratorSpec, dense_transmission, generate

from conftest import copy_records, xor_records

# frozen from the dense oracle over the 50/50 copy-triple/parity mixture
MIXED_POOLED_T = -0.2781953111478326


def grouped(groups):
    """records over (grp, d1, d2, d3) from {key: three-dim record list}."""
    out = []
    for key, records in groups.items():
        out.extend(
            Record(values=(key, *r.values), weight=r.weight) for r in records
        )
    return out


@pytest.fixture
def gschema():
    return schema_of("grp", "d1", "d2", "d3")


SPEC = GroupingSpec(group_dim="grp", measure_dims=("d1", "d2", "d3"))


class TestGroupingSpec:
    def test_group_dim_cannot_be_measured(self):
        with pytest.raises(SchemaError):
            GroupingSpec(group_dim="a", measure_dims=("a", "b"))

    def test_needs_two_measure_dims(self):
        with pytest.raises(ValidationError):
            GroupingSpec(group_dim="g", measure_dims=("a",))


class TestDecompose:
    def test_identical_groups_have_zero_surplus(self, gschema):
        records = grouped({"A": xor_records(), "B": xor_records()})
        dec = decompose(records, gschema, SPEC)
        assert [g.T_g for g in dec.groups] == pytest.approx([-1.0, -1.0], abs=1e-12)
        assert dec.pooled_T == pytest.approx(-1.0, abs=1e-12)
        assert dec.delta_T == pytest.approx(0.0, abs=1e-12)

    def test_single_group_degenerates(self, gschema):
        records = grouped({"A": xor_records()})
        dec = decompose(records, gschema, SPEC)
        assert dec.degenerate
        assert dec.delta_T == 0.0
        assert dec.pooled_T == dec.groups[0].T_g

    def test_mixed_copy_and_parity(self, gschema):
        records = grouped({"A": copy_records(copies=100), "B": xor_records(50)})
        dec = decompose(records, gschema, SPEC)
        assert dec.within_sum == pytest.approx(0.0, abs=1e-12)
        assert dec.pooled_T == pytest.approx(MIXED_POOLED_T, abs=1e-9)
        assert dec.delta_T == pytest.approx(MIXED_POOLED_T, abs=1e-9)
        # direct dense-oracle comparison over the mixture pmf
        mix = np.zeros((2, 2, 2))
        mix[0, 0, 0] += 0.25
        mix[1, 1, 1] += 0.25
        for x, y in itertools.product((0, 1), (0, 1)):
            mix[x, y, x ^ y] += 0.125
        assert dec.pooled_T == pytest.approx(
            dense_transmission(mix, (0, 1, 2)), abs=1e-12
        )

    def test_weights_are_mass_shares(self, gschema):
        records = grouped(
            {"A": xor_records(30), "B": xor_records(10)}  # 120 vs 40 records
        )
        dec = decompose(records, gschema, SPEC)
        assert [g.weight for g in dec.groups] == pytest.approx([0.75, 0.25])
        assert math.fsum(g.weight for g in dec.groups) == pytest.approx(1.0, abs=1e-9)

    def test_groups_sorted_by_key(self, gschema):
        records = grouped({"B": xor_records(5), "A": xor_records(5), "C": xor_records(5)})
        dec = decompose(records, gschema, SPEC)
        assert [g.key for g in dec.groups] == ["A", "B", "C"]

    def test_identity_on_random_groups(self, gschema):
        rng = np.random.Generator(np.random.PCG64(9))
        for _ in range(20):
            records = []
            for key in ("A", "B", "C"):
                for _ in range(int(rng.integers(5, 40))):
                    vals = tuple(str(int(v)) for v in rng.integers(0, 3, size=3))
                    records.append(
                        Record(values=(key, *vals), weight=float(rng.uniform(0.1, 4)))
                    )
            dec = decompose(records, gschema, SPEC)
            assert dec.delta_T + dec.within_sum == pytest.approx(
                dec.pooled_T, abs=1e-9
            )

    def test_weights_invariant_under_reordering(self, gschema):
        rng = np.random.Generator(np.random.PCG64(13))
        records = grouped({"A": xor_records(7), "B": copy_records(copies=11)})
        shuffled = list(records)
        rng.shuffle(shuffled)
        first = decompose(records, gschema, SPEC)
        second = decompose(shuffled, gschema, SPEC)
        assert [g.weight for g in first.groups] == [g.weight for g in second.groups]
        assert first.pooled_T == second.pooled_T
        assert first.delta_T == second.delta_T

    def test_empty_records(self, gschema):
        with pytest.raises(DegenerateDataError):
            decompose([], gschema, SPEC)

    def test_zero_mass_group(self, gschema):
        records = grouped({"A": xor_records(5)})
        records.append(Record(values=("B", "0", "0", "0"), weight=0.0))
        with pytest.raises(DegenerateDataError):
            decompose(records, gschema, SPEC)

    def test_min_mass_flag(self, gschema):
        records = grouped({"A": xor_records(5)})
        records.append(Record(values=("B", "0", "0", "0"), weight=0.25))
        records.append(Record(values=("B", "1", "1", "1"), weight=0.25))
        dec = decompose(records, gschema, GroupingSpec("grp", ("d1", "d2", "d3")))
        flags = {g.key: g.reliable for g in dec.groups}
        assert flags == {"A": True, "B": False}

    def test_interpretation_strings(self, gschema):
        records = grouped({"A": copy_records(copies=100), "B": xor_records(50)})
        dec = decompose(records, gschema, SPEC)
        assert "delta_T < 0" in dec.interpretation
        single = decompose(grouped({"A": xor_records(5)}), gschema, SPEC)
        assert "single group" in single.interpretation

    def test_merged_groups_reproduce_pooled_table(self, gschema):
        records = grouped({"A": copy_records(copies=10), "B": xor_records(5)})
        pooled = build_table(records, gschema)
        merged: dict = {}
        for key in ("A", "B"):
            part = [r for r in records if r.values[0] == key]
            for cell, mass in build_table(part, gschema).cells.items():
                merged[cell] = merged.get(cell, 0.0) + mass
        assert merged == pooled.cells


class TestPanelSeries:
    def with_periods(self, records, period):
        return [Record(values=r.values, weight=r.weight, period=period) for r in records]

    def test_single_period_matches_direct_compute(self, schema3):
        records = self.with_periods(xor_records(), "2001")
        points = panel_series(records, schema3, ("d1", "d2", "d3"))
        assert len(points) == 1
        p = points[0]
        table = build_table(xor_records(), schema3)
        assert p.R_n == mutual_redundancy(table, ("d1", "d2", "d3"))
        assert p.H_obs == pytest.approx(2.0, abs=1e-12)
        assert p.H_max == pytest.approx(3.0, abs=1e-12)
        assert p.record_count == 400

    def test_new_categories_raise_cumulative_h_max(self):
        schema = schema_of("a", "b")
        records = [
            Record(values=("A", "X"), period="t1"),
            Record(values=("B", "Y"), period="t1"),
            Record(values=("C", "Z"), period="t2"),
            Record(values=("A", "X"), period="t2"),
        ]
        points = panel_series(records, schema, ("a", "b"), MaxEntropyMode.CUMULATIVE)
        assert [p.period for p in points] == ["t1", "t2"]
        assert points[1].H_max > points[0].H_max

    def test_cumulative_h_max_never_decreases(self):
        schema = schema_of("a", "b")
        rng = np.random.Generator(np.random.PCG64(77))
        records = []
        for t in range(6):
            for _ in range(40):
                a = str(int(rng.integers(0, 2 + t)))
                b = str(int(rng.integers(0, 3)))
                records.append(Record(values=(a, b), period=f"t{t}"))
        points = panel_series(records, schema, ("a", "b"), MaxEntropyMode.CUMULATIVE)
        series = [p.H_max for p in points]
        assert series == sorted(series)
        assert all(0.0 <= p.shannon_R <= 1.0 for p in points)
        assert all(p.H_obs <= p.H_max + 1e-12 for p in points)

    def test_observed_mode_uses_per_period_support(self):
        schema = schema_of("a", "b")
        records = [
            Record(values=("A", "X"), period="t1"),
            Record(values=("B", "Y"), period="t1"),
            Record(values=("A", "X"), period="t2"),
            Record(values=("B", "X"), period="t2"),
        ]
        points = panel_series(records, schema, ("a", "b"), MaxEntropyMode.OBSERVED)
        assert points[0].H_max == pytest.approx(2.0, abs=1e-12)  # 2 x 2
        assert points[1].H_max == pytest.approx(1.0, abs=1e-12)  # 2 x 1

    def test_declared_mode_is_constant(self):
        from trihelix import Dimension, DimensionSchema

        schema = DimensionSchema(
            (
                Dimension("a", declared_cardinality=4),
                Dimension("b", declared_cardinality=2),
            )
        )
        records = [
            Record(values=("A", "X"), period="t1"),
            Record(values=("B", "Y"), period="t1"),
            Record(values=("A", "Y"), period="t2"),
            Record(values=("B", "X"), period="t2"),
        ]
        points = panel_series(records, schema, ("a", "b"), MaxEntropyMode.DECLARED)
        assert [p.H_max for p in points] == pytest.approx([3.0, 3.0], abs=1e-12)

    def test_declared_mode_needs_cardinalities(self, schema3):
        records = self.with_periods(xor_records(1), "t1")
        with pytest.raises(ValidationError):
            panel_series(records, schema3, ("d1", "d2", "d3"), MaxEntropyMode.DECLARED)

    def test_missing_period_rejected(self, schema3):
        records = xor_records(1)
        with pytest.raises(ValidationError):
            panel_series(records, schema3, ("d1", "d2", "d3"))

    def test_stationary_generator_tracks_analytic_value(self, schema3):
        points = []
        records = []
        for t in range(5):
            spec = GeneratorSpec(kind="parity", n=100_000, mode="sampled", seed=50 + t)
            records.extend(
                Record(values=r.values, period=f"y{t}") for r in generate(spec)
            )
        points = panel_series(records, schema3, ("d1", "d2", "d3"))
        assert len(points) == 5
        for p in points:
            assert abs(p.R_n - (-1.0)) < 0.02
