"""Synergy and redundancy indicators for categorical micro-data.

Sparse n-dimensional contingency tables, Shannon entropies and multivariate
transmissions in bits, the signed mutual-redundancy indicator with its
bracket decomposition, within/between group decomposition, per-period
trajectories, delimited ingestion with proxy transforms, and seeded
synthetic generators that double as an exact verification oracle.
"""

from ._version import __version__
from .errors import DegenerateDataError, SchemaError, SynergyError, ValidationError
from .tableau import (
    ContingencyTable,
    Dimension,
    DimensionSchema,
    Record,
    build_table,
    marginalize,
    schema_of,
    slice_group,
    table_from_cells,
)
from .infomeasure import (
    InfoReport,
    MaxEntropyMode,
    SubsetMask,
    SynergyVerdict,
    UnitScale,
    compute_report,
    entropy,
    joint_entropy,
    max_entropy,
    mutual_redundancy,
    redundancy_balance,
    shannon_redundancy,
    transmission,
    y_information,
)
from .decomp import (
    GroupingSpec,
    GroupShare,
    PanelPoint,
    SynergyDecomposition,
    decompose,
    panel_series,
)
from .ingest import (
    IngestConfig,
    IngestStats,
    TransformRule,
    load_config,
    load_records,
    write_records,
)
from .synth import GeneratorSpec, analytic_measures, generate

__all__ = [
    "__version__",
    "SynergyError",
    "ValidationError",
    "SchemaError",
    "DegenerateDataError",
    "Dimension",
    "DimensionSchema",
    "Record",
    "ContingencyTable",
    "schema_of",
    "build_table",
    "table_from_cells",
    "marginalize",
    "slice_group",
    "SubsetMask",
    "InfoReport",
    "SynergyVerdict",
    "MaxEntropyMode",
    "UnitScale",
    "entropy",
    "joint_entropy",
    "transmission",
    "y_information",
    "mutual_redundancy",
    "redundancy_balance",
    "shannon_redundancy",
    "max_entropy",
    "compute_report",
    "GroupingSpec",
    "GroupShare",
    "SynergyDecomposition",
    "PanelPoint",
    "decompose",
    "panel_series",
    "TransformRule",
    "IngestConfig",
    "IngestStats",
    "load_config",
    "load_records",
    "write_records",
    "GeneratorSpec",
    "generate",
    "analytic_measures",
]
