import json

import pytest

from trihelix import (
    DegenerateDataError,
    IngestConfig,
    Record,
    SchemaError,
    TransformRule,
    ValidationError,
    build_table,
    load_config,
    load_records,
    schema_of,
    write_records,
)
from trihelix.infomeasure import MaxEntropyMode, UnitScale
from trihelix.ingest import EU_SIZE_LABELS, MISSING_LABEL


class TestTransformRule:
    def test_nace_prefix(self):
        assert TransformRule.prefix(2).apply("62.01") == "62"

    def test_postal_prefix(self):
        assert TransformRule.prefix(2).apply("1001NG") == "10"

    def test_prefix_shorter_value_kept_whole(self):
        assert TransformRule.prefix(4).apply("7") == "7"

    def test_numeric_bin_micro(self):
        rule = TransformRule.numeric_bin((10, 50), ("micro", "small", "large"))
        assert rule.apply("7") == "micro"
        assert rule.apply("10") == "small"
        assert rule.apply("49.5") == "small"
        assert rule.apply("800") == "large"

    def test_identity(self):
        assert TransformRule.identity().apply("62.01") == "62.01"

    def test_code_map(self):
        rule = TransformRule.code_map({"62": "ict", "10": "food"})
        assert rule.apply("62") == "ict"

    def test_prefix_length_validated(self):
        with pytest.raises(ValidationError):
            TransformRule.prefix(0)

    def test_thresholds_must_increase(self):
        with pytest.raises(ValidationError):
            TransformRule.numeric_bin((10, 10), ("a", "b", "c"))

    def test_labels_arity(self):
        with pytest.raises(ValidationError):
            TransformRule.numeric_bin((10, 50), ("a", "b"))


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


def basic_doc(tmp_path, **overrides):
    doc = {
        "input": "firms.csv",
        "dimensions": [
            {"name": "region", "column": "postcode", "transform": {"kind": "prefix", "length": 2}},
            {"name": "sector", "column": "nace", "transform": {"kind": "prefix", "length": 2}},
            {
                "name": "size",
                "column": "employees",
                "declared_cardinality": 4,
                "transform": {"kind": "numeric_bin"},
            },
        ],
    }
    doc.update(overrides)
    return doc


FIRMS_CSV = """postcode,nace,employees,year
1001NG,62.01,7,2001
1002AB,62.42,120,2001
2511CV,28.11,35,2002
1001NG,62.01,7,2002
"""


class TestLoadConfig:
    def test_full_document(self, tmp_path):
        (tmp_path / "firms.csv").write_text(FIRMS_CSV, encoding="utf-8")
        path = write_config(
            tmp_path,
            basic_doc(
                tmp_path,
                period_column="year",
                max_mode="cumulative",
                unit="mbits",
                delimiter=",",
            ),
        )
        config, schema = load_config(path)
        assert schema.names == ("region", "sector", "size")
        assert schema.dimension("size").declared_cardinality == 4
        assert schema.dimension("size").transform.labels == EU_SIZE_LABELS
        assert config.input_path == tmp_path / "firms.csv"
        assert config.period_column == "year"
        assert config.max_mode == MaxEntropyMode.CUMULATIVE
        assert config.unit == UnitScale.MBITS

    def test_unknown_key_rejected(self, tmp_path):
        path = write_config(tmp_path, basic_doc(tmp_path, tyop=True))
        with pytest.raises(ValidationError):
            load_config(path)

    def test_too_few_dimensions(self, tmp_path):
        doc = basic_doc(tmp_path)
        doc["dimensions"] = doc["dimensions"][:1]
        with pytest.raises(ValidationError):
            load_config(write_config(tmp_path, doc))

    def test_duplicate_columns_rejected(self, tmp_path):
        doc = basic_doc(tmp_path)
        doc["dimensions"][1]["column"] = "postcode"
        with pytest.raises(ValidationError):
            load_config(write_config(tmp_path, doc))

    def test_weight_column_cannot_be_a_dimension(self, tmp_path):
        doc = basic_doc(tmp_path, weight_column="employees")
        with pytest.raises(ValidationError):
            load_config(write_config(tmp_path, doc))

    def test_code_map_file(self, tmp_path):
        (tmp_path / "map.json").write_text(json.dumps({"62": "ict"}), encoding="utf-8")
        doc = basic_doc(tmp_path)
        doc["dimensions"][1]["transform"] = {"kind": "code_map", "file": "map.json"}
        _, schema = load_config(write_config(tmp_path, doc))
        assert schema.dimension("sector").transform.mapping == {"62": "ict"}

    def test_bad_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ValidationError):
            load_config(path)

    def test_custom_bins_need_labels(self, tmp_path):
        doc = basic_doc(tmp_path)
        doc["dimensions"][2]["transform"] = {"kind": "numeric_bin", "thresholds": [5]}
        with pytest.raises(ValidationError):
            load_config(write_config(tmp_path, doc))


class TestLoadRecords:
    def setup_inputs(self, tmp_path, csv_text=FIRMS_CSV, **overrides):
        (tmp_path / "firms.csv").write_text(csv_text, encoding="utf-8")
        path = write_config(tmp_path, basic_doc(tmp_path, **overrides))
        return load_config(path)

    def test_transforms_applied(self, tmp_path):
        config, schema = self.setup_inputs(tmp_path)
        records, stats = load_records(config, schema)
        assert stats.rows_read == 4
        assert stats.rows_kept == 4
        assert records[0] == Record(values=("10", "62", "micro"), weight=1.0, period=None)
        assert records[1].values == ("10", "62", "medium")
        assert records[2].values == ("25", "28", "small")

    def test_period_column(self, tmp_path):
        config, schema = self.setup_inputs(tmp_path, period_column="year")
        records, _ = load_records(config, schema)
        assert [r.period for r in records] == ["2001", "2001", "2002", "2002"]

    def test_weight_column(self, tmp_path):
        csv_text = "postcode,nace,employees,mass\n1001,62,5,2.5\n1002,63,5,0.5\n"
        config, schema = self.setup_inputs(tmp_path, csv_text, weight_column="mass")
        records, _ = load_records(config, schema)
        assert [r.weight for r in records] == [2.5, 0.5]

    def test_missing_value_dropped_and_counted(self, tmp_path):
        csv_text = "postcode,nace,employees\n1001,62,5\n,62,5\n1002,,9\n"
        config, schema = self.setup_inputs(tmp_path, csv_text)
        records, stats = load_records(config, schema)
        assert len(records) == 1
        assert stats.rows_dropped == 2
        assert stats.drop_reasons == {"missing_value": 2}
        assert stats.rows_read == stats.rows_kept + stats.rows_dropped
        assert stats.warnings

    def test_explicit_missing_policy(self, tmp_path):
        csv_text = "postcode,nace,employees\n1001,62,5\n,62,5\n"
        config, schema = self.setup_inputs(
            tmp_path, csv_text, missing_policy="explicit_missing"
        )
        records, stats = load_records(config, schema)
        assert stats.rows_kept == 2
        assert records[1].values[0] == MISSING_LABEL

    def test_bad_numeric_dropped(self, tmp_path):
        csv_text = "postcode,nace,employees\n1001,62,many\n1002,63,4\n"
        config, schema = self.setup_inputs(tmp_path, csv_text)
        _, stats = load_records(config, schema)
        assert stats.drop_reasons == {"bad_numeric": 1}

    def test_bad_weight_dropped(self, tmp_path):
        csv_text = "postcode,nace,employees,mass\n1001,62,5,heavy\n1002,63,5,-1\n1003,64,5,2\n"
        config, schema = self.setup_inputs(tmp_path, csv_text, weight_column="mass")
        records, stats = load_records(config, schema)
        assert len(records) == 1
        assert stats.drop_reasons == {"bad_weight": 2}

    def test_unmapped_code_dropped(self, tmp_path):
        (tmp_path / "firms.csv").write_text(
            "postcode,nace,employees\n1001,62,5\n1002,99,5\n", encoding="utf-8"
        )
        doc = basic_doc(tmp_path)
        doc["dimensions"][1]["transform"] = {"kind": "code_map", "mapping": {"62": "ict"}}
        config, schema = load_config(write_config(tmp_path, doc))
        records, stats = load_records(config, schema)
        assert len(records) == 1
        assert stats.drop_reasons == {"unmapped_code": 1}

    def test_strict_mode_raises(self, tmp_path):
        csv_text = "postcode,nace,employees\n1001,62,many\n"
        config, schema = self.setup_inputs(tmp_path, csv_text, strict=True)
        with pytest.raises(ValidationError):
            load_records(config, schema)

    def test_missing_column_is_schema_error(self, tmp_path):
        csv_text = "postcode,employees\n1001,5\n"
        config, schema = self.setup_inputs(tmp_path, csv_text)
        with pytest.raises(SchemaError):
            load_records(config, schema)

    def test_unreadable_input_is_oserror(self, tmp_path):
        config, schema = self.setup_inputs(tmp_path)
        broken = IngestConfig(
            input_path=tmp_path / "no-such-file.csv", columns=config.columns
        )
        with pytest.raises(OSError):
            load_records(broken, schema)

    def test_empty_file_is_degenerate(self, tmp_path):
        config, schema = self.setup_inputs(tmp_path, "")
        with pytest.raises(DegenerateDataError):
            load_records(config, schema)

    def test_malformed_row_counted(self, tmp_path):
        csv_text = "postcode,nace,employees\n1001,62,5\n1002\n"
        config, schema = self.setup_inputs(tmp_path, csv_text)
        _, stats = load_records(config, schema)
        assert stats.drop_reasons == {"malformed_row": 1}

    def test_missing_period_dropped(self, tmp_path):
        csv_text = "postcode,nace,employees,year\n1001,62,5,2001\n1002,63,5,\n"
        config, schema = self.setup_inputs(tmp_path, period_column="year", csv_text=csv_text)
        records, stats = load_records(config, schema)
        assert len(records) == 1
        assert stats.drop_reasons == {"missing_period": 1}

    def test_deterministic(self, tmp_path):
        config, schema = self.setup_inputs(tmp_path)
        first, _ = load_records(config, schema)
        second, _ = load_records(config, schema)
        assert first == second


class TestRoundTrip:
    def test_records_survive_export_and_reingest(self, tmp_path):
        schema = schema_of("region", "sector")
        records = [
            Record(values=("10", "62"), weight=1.0, period="2001"),
            Record(values=("10", "63"), weight=2.25, period="2001"),
            Record(values=("25", "62"), weight=0.125, period="2002"),
        ]
        out = tmp_path / "export.csv"
        write_records(records, schema, out)
        doc = {
            "input": "export.csv",
            "dimensions": [
                {"name": "region", "column": "region"},
                {"name": "sector", "column": "sector"},
            ],
            "weight_column": "weight",
            "period_column": "period",
        }
        config, schema2 = load_config(write_config(tmp_path, doc))
        loaded, stats = load_records(config, schema2)
        assert stats.rows_dropped == 0
        assert loaded == records
        assert build_table(loaded, schema2).cells == build_table(records, schema).cells

    def test_weight_column_only_when_needed(self, tmp_path):
        schema = schema_of("a", "b")
        out = tmp_path / "plain.csv"
        write_records([Record(values=("x", "y"))], schema, out)
        assert out.read_text(encoding="utf-8") == "a,b\nx,y\n"

    def test_mixed_period_presence_rejected(self, tmp_path):
        schema = schema_of("a", "b")
        records = [
            Record(values=("x", "y"), period="t1"),
            Record(values=("x", "z")),
        ]
        with pytest.raises(ValidationError):
            write_records(records, schema, tmp_path / "bad.csv")


class TestIngestStats:
    def test_json_shape(self):
        from trihelix import IngestStats

        stats = IngestStats(rows_read=3, rows_kept=2, rows_dropped=1)
        stats.drop_reasons["missing_value"] = 1
        doc = json.loads(stats.to_json())
        assert doc["rows_read"] == 3
        assert doc["drop_reasons"] == {"missing_value": 1}
