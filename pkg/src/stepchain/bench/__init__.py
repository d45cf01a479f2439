"""Benchmark harness for pipeline overhead measurements."""
from .harness import (
    BenchConfig,
    BenchError,
    BenchSample,
    ClockUnavailable,
    IoUnavailable,
    WorkloadMismatch,
    run_bench,
)
from .report import (
    CSV_HEADER,
    OverheadReport,
    ShapeMismatch,
    SubjectStats,
    WriteFailed,
    compare,
    emit_report,
    render_text,
)

__all__ = [
    "BenchConfig",
    "BenchError",
    "BenchSample",
    "CSV_HEADER",
    "ClockUnavailable",
    "IoUnavailable",
    "OverheadReport",
    "ShapeMismatch",
    "SubjectStats",
    "WorkloadMismatch",
    "WriteFailed",
    "compare",
    "emit_report",
    "render_text",
    "run_bench",
]
