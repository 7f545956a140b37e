"""
Output formatters for frame analysis results.
Generates both human-readable and machine-parseable outputs.
"""

import json
from datetime import datetime
from typing import Any

import numpy as np

from .golden import CheckRow, RowStatus
from .models import (
    MeasureKind,
    OptimalityCertificate,
    PairVerdict,
    SearchResult,
    SimReport,
)


def to_plain(obj: Any) -> Any:
    """Convert results, numpy scalars and arrays to JSON-ready Python values"""
    if hasattr(obj, "to_dict"):
        return to_plain(obj.to_dict())
    if isinstance(obj, dict):
        return {str(getattr(k, "value", k)): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


class JSONFormatter:
    """
    Formats results as structured JSON for scripts and agents.
    Floats use the shortest repr that round-trips exactly.
    """

    def format(self, obj: Any, indent: int = 2) -> str:
        """Generate full JSON output"""
        return json.dumps(to_plain(obj), indent=indent)

    def format_compact(self, obj: Any) -> str:
        return json.dumps(to_plain(obj), separators=(",", ":"))


def _num(x: float) -> str:
    return f"{x:.12g}"


class MarkdownFormatter:
    """
    Formats results as readable Markdown documents.
    Designed for human review and documentation.
    """

    STATUS_EMOJI = {
        RowStatus.PASS: "✅",
        RowStatus.FAIL: "❌",
        RowStatus.DISCREPANCY: "📝",
    }

    def _header(self, title: str) -> list:
        return [
            f"# {title}",
            "",
            f"**Report Generated:** {datetime.now().strftime('%Y-%m-%d %H:%M')}",
            "",
            "---",
            "",
        ]

    def format_analysis(self, analysis: dict) -> str:
        """Measures, closed form and pair verdict from the analyze command"""
        lines = self._header("Erasure Measures")
        lines.extend([
            f"**Dimension:** {analysis['dimension']}",
            f"**Vectors:** {analysis['size']}",
            f"**Erasures (m):** {analysis['m']}",
            f"**Dual:** {analysis['dual_source']}",
            "",
            "| Measure | Value | Worst patterns |",
            "|---------|-------|----------------|",
        ])
        for kind, report in analysis["measures"].items():
            patterns = ", ".join(
                "{" + ",".join(str(i + 1) for i in p.indices) + "}" for p in report.argmax
            )
            lines.append(f"| {MeasureKind(kind).value} | {_num(report.value)} | {patterns} |")
        lines.append("")

        closed = analysis.get("closed_form")
        if closed is not None:
            lines.append(f"**Single-erasure A (closed form):** {_num(closed.value)}")
            lines.append("")

        verdict = analysis.get("pair_verdict")
        if verdict is not None:
            lines.extend(self._verdict_lines(verdict))

        tight = analysis.get("tight_pair")
        if tight is not None:
            lines.append(f"**Unique optimal pair (tight frame):** {'yes' if tight else 'no'}")
            lines.append("")
        return "\n".join(lines)

    def _verdict_lines(self, verdict: PairVerdict) -> list:
        mark = lambda ok: "✅" if ok else "❌"
        return [
            "## Dual Pair",
            "",
            f"- POD pair: {mark(verdict.is_pod_pair)}",
            f"- PSOD pair: {mark(verdict.is_psod_pair)}",
            f"- PASOD pair: {mark(verdict.is_pasod_pair)}",
            "",
        ]

    def format_search(self, result: SearchResult) -> str:
        lines = self._header(f"Optimal Dual Search ({result.objective.value})")
        lines.extend([
            f"**Value:** {_num(result.value)}",
            f"**Winning restart:** {result.restart}",
            f"**Converged:** {'yes' if result.converged else '⚠️ no'}",
            "",
            "| Restart | Best value | Iterations |",
            "|---------|------------|------------|",
        ])
        for k, (value, its) in enumerate(zip(result.restart_values, result.restart_iterations)):
            lines.append(f"| {k} | {_num(value)} | {its} |")
        lines.extend(["", "## Dual Vectors", ""])
        for i, g in enumerate(result.dual.vectors, start=1):
            entries = ", ".join(_num_complex(z) for z in g)
            lines.append(f"- g_{i} = ({entries})")
        lines.append("")
        return "\n".join(lines)

    def format_certificate(self, name: str, cert: OptimalityCertificate) -> str:
        lines = [
            f"### {'✅' if cert.holds else '➖'} {name}",
            "",
            f"**Kind:** {cert.kind.value}",
        ]
        for part, indices in cert.partitions.items():
            lines.append(f"**{part}:** {{{', '.join(str(i + 1) for i in indices)}}}")
        lines.append("")
        return "\n".join(lines)

    def format_simulation(self, report: SimReport) -> str:
        cfg = report.config
        lines = self._header("Erasure Channel Simulation")
        lines.extend([
            f"**Trials:** {cfg.trials} x {cfg.signals} signals",
            f"**Erasures (m):** {cfg.m}",
            f"**Mode:** {cfg.mode.value}",
            f"**Seed:** {cfg.seed} ({report.rng_algorithm})",
            "",
            f"- Empirical max: {_num(report.empirical_max)}",
            f"- Empirical mean: {_num(report.empirical_mean)}",
            f"- Bound: {_num(report.bound)}",
            f"- Attainment ratio: {_num(report.attainment_ratio)}",
            "",
            "| Pattern | Frequency |",
            "|---------|-----------|",
        ])
        for pattern, freq in report.pattern_frequencies().items():
            lines.append(f"| {{{','.join(map(str, pattern.one_based()))}}} | {freq:.4f} |")
        lines.append("")
        return "\n".join(lines)

    def format_verification(self, rows: list) -> str:
        """Table of golden example checks"""
        lines = self._header("Worked Example Verification")
        lines.extend([
            "| | Example | Check | Expected | Actual | Published |",
            "|---|---------|-------|----------|--------|-----------|",
        ])
        for row in rows:
            lines.append(self._row_line(row))
        failed = sum(row.status == RowStatus.FAIL for row in rows)
        noted = sum(row.status == RowStatus.DISCREPANCY for row in rows)
        lines.extend([
            "",
            f"**{len(rows) - failed - noted} passed, {noted} published discrepancies, {failed} failed**",
            "",
        ])
        return "\n".join(lines)

    def _row_line(self, row: CheckRow) -> str:
        published = "" if row.published is None else _cell(row.published)
        return (
            f"| {self.STATUS_EMOJI[row.status]} | {row.example} | {row.check} | "
            f"{_cell(row.expected)} | {_cell(row.actual)} | {published} |"
        )


def _num_complex(z: complex) -> str:
    if abs(z.imag) < 1e-15:
        return _num(z.real)
    return f"{_num(z.real)}{'+' if z.imag >= 0 else '-'}{_num(abs(z.imag))}i"


def _cell(value: Any) -> str:
    value = to_plain(value)
    if isinstance(value, float):
        return _num(value)
    if isinstance(value, list):
        return "[" + ", ".join(_cell(v) for v in value) + "]"
    return str(value)
