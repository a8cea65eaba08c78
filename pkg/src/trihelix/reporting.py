"""Report serialization: run manifests, JSON, aligned text, and CSV.

JSON payloads are emitted with sorted keys and full double precision, so a
rerun with identical config and input bytes produces a byte-identical
payload except for the manifest timestamp. Millibit values appear next to
bit values whenever the report's unit scale is mbits; rounding to three
decimals happens only in the human-readable text rendering.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import shlex
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

from ._version import __version__
from .decomp import PanelPoint, SynergyDecomposition
from .infomeasure import InfoReport, MaxEntropyMode, UnitScale

TOOL_NAME = "trihelix"


@dataclass(frozen=True)
class RunManifest:
    """Provenance block embedded in every JSON report: identical config and
    input digests imply identical payloads (timestamp aside)."""

    tool_version: str
    command_line: str
    config_digest: str
    input_digest: str
    timestamp: str


def _digest(path: Path | None) -> str:
    if path is None:
        return "-"
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def build_manifest(
    config_path: Path | None, input_path: Path | None, argv: list[str]
) -> RunManifest:
    return RunManifest(
        tool_version=__version__,
        command_line=shlex.join([TOOL_NAME, *argv]),
        config_digest=_digest(config_path),
        input_digest=_digest(input_path),
        timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )


def _scaled(value: float, unit: UnitScale):
    if unit == UnitScale.MBITS:
        return {"bits": value, "mbits": value * 1000.0}
    return value


def _subset_key(names: tuple[str, ...]) -> str:
    return ",".join(names)


def compute_payload(report: InfoReport, manifest: RunManifest) -> dict:
    u = report.unit
    return {
        "report_type": "compute",
        "manifest": asdict(manifest),
        "unit": u.value,
        "dims": list(report.dims),
        "entropies": {d: _scaled(v, u) for d, v in sorted(report.entropies.items())},
        "joint_entropies": {
            _subset_key(k): _scaled(v, u) for k, v in sorted(report.joint_entropies.items())
        },
        "transmissions": {
            _subset_key(k): _scaled(v, u) for k, v in sorted(report.transmissions.items())
        },
        "R_n": _scaled(report.mutual_redundancy, u),
        "left_bracket": _scaled(report.left_bracket, u),
        "right_bracket": _scaled(report.right_bracket, u),
        "shannon_redundancy": dict(sorted(report.shannon_redundancy.items())),
        "verdict": report.verdict.value,
        "flags": list(report.flags),
    }


def decompose_payload(dec: SynergyDecomposition, manifest: RunManifest,
                      group_dim: str, measure_dims: tuple[str, ...]) -> dict:
    u = dec.unit
    return {
        "report_type": "decompose",
        "manifest": asdict(manifest),
        "unit": u.value,
        "group_dim": group_dim,
        "measure_dims": list(measure_dims),
        "pooled_T": _scaled(dec.pooled_T, u),
        "within_sum": _scaled(dec.within_sum, u),
        "delta_T": _scaled(dec.delta_T, u),
        "degenerate": dec.degenerate,
        "interpretation": dec.interpretation,
        "groups": [
            {
                "key": g.key,
                "weight": g.weight,
                "mass": g.mass,
                "record_count": g.record_count,
                "T_g": _scaled(g.T_g, u),
                "contribution": _scaled(g.contribution, u),
                "reliable": g.reliable,
            }
            for g in dec.groups
        ],
    }


def panel_payload(
    points: list[PanelPoint],
    manifest: RunManifest,
    unit: UnitScale,
    measure_dims: tuple[str, ...],
    max_mode: MaxEntropyMode,
) -> dict:
    return {
        "report_type": "panel",
        "manifest": asdict(manifest),
        "unit": unit.value,
        "measure_dims": list(measure_dims),
        "max_mode": max_mode.value,
        "points": [
            {
                "period": p.period,
                "record_count": p.record_count,
                "H_obs": _scaled(p.H_obs, unit),
                "H_max": _scaled(p.H_max, unit),
                "shannon_redundancy": p.shannon_R,
                "R_n": _scaled(p.R_n, unit),
            }
            for p in points
        ],
    }


def dumps_payload(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# human-readable text
# ---------------------------------------------------------------------------


def _fmt(value: float, unit: UnitScale) -> str:
    if unit == UnitScale.MBITS:
        return f"{value * 1000.0:.3f} mbit"
    return f"{value:.6f} bit"


def render_compute_text(report: InfoReport) -> str:
    u = report.unit
    lines = [f"synergy report over {', '.join(report.dims)} (unit: {u.value})", ""]
    rows: list[tuple[str, str]] = []
    for d in report.dims:
        rows.append((f"H({d})", _fmt(report.entropies[d], u)))
    for k in sorted(report.joint_entropies):
        if len(k) > 1:
            rows.append((f"H({_subset_key(k)})", _fmt(report.joint_entropies[k], u)))
    for k in sorted(report.transmissions):
        rows.append((f"T({_subset_key(k)})", _fmt(report.transmissions[k], u)))
    rows.append(("left bracket", _fmt(report.left_bracket, u)))
    rows.append(("right bracket", _fmt(report.right_bracket, u)))
    rows.append(("R_n (mutual redundancy)", _fmt(report.mutual_redundancy, u)))
    for d in report.dims:
        rows.append((f"shannon redundancy ({d})", f"{report.shannon_redundancy[d]:.6f}"))
    rows.append(("verdict", report.verdict.value))
    for flag in report.flags:
        rows.append(("flag", flag))
    width = max(len(label) for label, _ in rows)
    lines += [f"  {label.ljust(width)}  {value}" for label, value in rows]
    return "\n".join(lines) + "\n"


def render_decompose_text(
    dec: SynergyDecomposition, group_dim: str, measure_dims: tuple[str, ...]
) -> str:
    u = dec.unit
    lines = [
        f"synergy decomposition by {group_dim} over {', '.join(measure_dims)} "
        f"(unit: {u.value})",
        "",
        f"  pooled T     {_fmt(dec.pooled_T, u)}",
        f"  within sum   {_fmt(dec.within_sum, u)}",
        f"  delta T      {_fmt(dec.delta_T, u)}",
        f"  {dec.interpretation}",
        "",
        f"  {'group':<16} {'weight':>8} {'T_g':>16} {'contribution':>16}",
    ]
    for g in dec.groups:
        mark = "" if g.reliable else "  (below min mass)"
        lines.append(
            f"  {g.key:<16} {g.weight:>8.4f} {_fmt(g.T_g, u):>16} "
            f"{_fmt(g.contribution, u):>16}{mark}"
        )
    if dec.degenerate:
        lines.append("  warning: single group, decomposition is trivial")
    return "\n".join(lines) + "\n"


def render_panel_text(points: list[PanelPoint], unit: UnitScale) -> str:
    lines = [
        f"trajectory panel (unit: {unit.value})",
        "",
        f"  {'period':<12} {'records':>8} {'H_obs':>14} {'H_max':>14} "
        f"{'shannon_R':>10} {'R_n':>14}",
    ]
    for p in points:
        lines.append(
            f"  {p.period:<12} {p.record_count:>8} {_fmt(p.H_obs, unit):>14} "
            f"{_fmt(p.H_max, unit):>14} {p.shannon_R:>10.4f} {_fmt(p.R_n, unit):>14}"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# delimited output
# ---------------------------------------------------------------------------


def decompose_csv(dec: SynergyDecomposition) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["group_key", "weight", "T_g_bits", "T_g_mbits", "contribution"])
    for g in dec.groups:
        writer.writerow(
            [g.key, repr(g.weight), repr(g.T_g), repr(g.T_g * 1000.0), repr(g.contribution)]
        )
    return buf.getvalue()


def panel_csv(points: list[PanelPoint], unit: UnitScale) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["period", "record_count", "H_obs_bits", "H_max_bits",
              "shannon_redundancy", "R_n_bits"]
    if unit == UnitScale.MBITS:
        header += ["H_obs_mbits", "H_max_mbits", "R_n_mbits"]
    writer.writerow(header)
    for p in points:
        row = [p.period, p.record_count, repr(p.H_obs), repr(p.H_max),
               repr(p.shannon_R), repr(p.R_n)]
        if unit == UnitScale.MBITS:
            row += [repr(p.H_obs * 1000.0), repr(p.H_max * 1000.0), repr(p.R_n * 1000.0)]
        writer.writerow(row)
    return buf.getvalue()


def load_report_schema() -> dict:
    """The published JSON schema every JSON report validates against."""
    text = resources.files("trihelix").joinpath("schemas/report.schema.json").read_text()
    return json.loads(text)
