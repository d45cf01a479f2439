"""Aggregation and output for benchmark samples.

CSV rows carry exactly `subject,mode,workload,phase,metric`. The text
format is a human summary with per-subject aggregates and, when two sample
sets are compared, the refinable:native ratio.
"""
from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass

from .harness import BenchError, BenchSample

CSV_HEADER = ("subject", "mode", "workload", "phase", "metric")

# Published overhead of the original JavaScript implementation of this
# pipeline model, kept as a qualitative reference point for the nonio run.
REFERENCE_NOTE = (
    "reference: ~3x non-IO overhead reported for the JavaScript "
    "implementation on Node.js v7.7.2 (environment-specific, not a target)"
)


class ShapeMismatch(BenchError):
    """The two sample sets do not describe the same measurement shape."""


class WriteFailed(BenchError):
    """The report file could not be written."""


@dataclass(frozen=True)
class SubjectStats:
    subject: str
    count: int
    mean: float
    median: float
    stdev: float
    variance: float
    total: int
    minimum: int
    maximum: int

    @classmethod
    def from_samples(cls, samples: list[BenchSample]) -> "SubjectStats":
        metrics = [s.metric for s in samples]
        spread = statistics.stdev(metrics) if len(metrics) > 1 else 0.0
        return cls(
            subject=samples[0].subject,
            count=len(metrics),
            mean=statistics.fmean(metrics),
            median=statistics.median(metrics),
            stdev=spread,
            variance=spread * spread,
            total=sum(metrics),
            minimum=min(metrics),
            maximum=max(metrics),
        )


@dataclass(frozen=True)
class OverheadReport:
    mode: str
    workload: str
    phases: int
    native: SubjectStats
    refinable: SubjectStats
    ratio: float
    per_phase_ratio: tuple[float, ...]
    samples: tuple[BenchSample, ...]


def compare(native: list[BenchSample], refinable: list[BenchSample]) -> OverheadReport:
    """Pair two per-phase sample sets into an overhead report."""
    if not native or not refinable:
        raise ShapeMismatch("both sample sets must be non-empty")
    if len(native) != len(refinable):
        raise ShapeMismatch(
            f"sample counts differ: {len(native)} vs {len(refinable)}")
    for a, b in zip(native, refinable):
        if (a.mode, a.workload, a.phase) != (b.mode, b.workload, b.phase):
            raise ShapeMismatch(
                f"samples disagree on shape at phase {a.phase}: {a} vs {b}")
    native_stats = SubjectStats.from_samples(native)
    refinable_stats = SubjectStats.from_samples(refinable)
    per_phase = tuple(
        _ratio(b.metric, a.metric) for a, b in zip(native, refinable))
    return OverheadReport(
        mode=native[0].mode,
        workload=native[0].workload,
        phases=len(native),
        native=native_stats,
        refinable=refinable_stats,
        ratio=_ratio(refinable_stats.mean, native_stats.mean),
        per_phase_ratio=per_phase,
        samples=tuple(native) + tuple(refinable),
    )


def _ratio(numerator: float, denominator: float) -> float:
    if denominator == 0:
        return math.nan if numerator == 0 else math.inf
    return numerator / denominator


def emit_report(data, path: str, fmt: str = "csv") -> None:
    """Write samples or an OverheadReport to `path` as CSV or text."""
    if fmt not in ("csv", "text"):
        raise ValueError(f"format must be 'csv' or 'text': {fmt!r}")
    samples = data.samples if isinstance(data, OverheadReport) else data
    try:
        with open(path, "w", newline="") as handle:
            if fmt == "csv":
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(CSV_HEADER)
                for sample in samples:
                    writer.writerow((sample.subject, sample.mode,
                                     sample.workload, sample.phase,
                                     sample.metric))
            else:
                handle.write(render_text(data))
                handle.write("\n")
    except OSError as exc:
        raise WriteFailed(f"cannot write report to {path}: {exc}") from exc


def render_text(data) -> str:
    """Human summary of samples or an OverheadReport."""
    if isinstance(data, OverheadReport):
        unit = "ns" if data.mode == "time" else "B"
        lines = [
            f"benchmark mode={data.mode} workload={data.workload} "
            f"phases={data.phases}",
        ]
        for stats in (data.native, data.refinable):
            lines.extend(_stats_lines(stats, unit))
        lines.append(f"refinable:native mean ratio: {_fmt(data.ratio)}")
        finite = [r for r in data.per_phase_ratio if math.isfinite(r)]
        if finite:
            lines.append(
                f"per-phase ratio median: {_fmt(statistics.median(finite))}")
        if data.mode == "time" and data.workload == "nonio":
            lines.append(REFERENCE_NOTE)
        return "\n".join(lines)
    samples = list(data)
    if not samples:
        return "no samples"
    unit = "ns" if samples[0].mode == "time" else "B"
    head = (f"benchmark mode={samples[0].mode} "
            f"workload={samples[0].workload} phases={len(samples)}")
    return "\n".join([head] + _stats_lines(SubjectStats.from_samples(samples), unit))


def _stats_lines(stats: SubjectStats, unit: str) -> list[str]:
    return [
        f"{stats.subject}: phases={stats.count} "
        f"mean={_fmt(stats.mean)} {unit} median={_fmt(stats.median)} {unit} "
        f"stdev={_fmt(stats.stdev)} {unit} variance={_fmt(stats.variance)} "
        f"total={stats.total} {unit} min={stats.minimum} max={stats.maximum}",
    ]


def _fmt(value: float) -> str:
    if math.isnan(value):
        return "n/a"
    if math.isinf(value):
        return "inf"
    return f"{value:.2f}"
