"""Microbenchmark harness: direct calls vs one-step pipelines.

Two workloads, each run as `phases` phases of `iterations` repetitions:

* nonio - increment an accumulator by one, either through a plain function
  or through a one-step pipeline.
* io - read a scratch file of `io_file_size` bytes whole, either directly
  or through a one-step pipeline wrapping the read.

Time mode records elapsed nanoseconds per phase (monotonic clock); space
mode records the heap-bytes delta around each phase, probed with
tracemalloc, so deltas may be negative when memory is reclaimed between
probes. Every phase also checks that the workload computed the expected
value, so both subjects provably do the same work.
"""
from __future__ import annotations

import os
import tempfile
import time
import tracemalloc
from dataclasses import dataclass

from ..pipeline import Pipeline

MODES = ("time", "space")
WORKLOADS = ("nonio", "io")
SUBJECTS = ("native", "refinable")


class BenchError(Exception):
    """Base class for harness failures."""


class IoUnavailable(BenchError):
    """The scratch file could not be created or read."""


class ClockUnavailable(BenchError):
    """No monotonic nanosecond clock on this platform."""


class WorkloadMismatch(BenchError):
    """A phase produced a value the workload equivalence check rejects."""


@dataclass(frozen=True)
class BenchConfig:
    mode: str
    workload: str
    subject: str
    phases: int
    iterations: int
    io_file_size: int = 1024
    output_path: str | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}: {self.mode!r}")
        if self.workload not in WORKLOADS:
            raise ValueError(
                f"workload must be one of {WORKLOADS}: {self.workload!r}")
        if self.subject not in SUBJECTS:
            raise ValueError(
                f"subject must be one of {SUBJECTS}: {self.subject!r}")
        if self.phases <= 0 or self.iterations <= 0:
            raise ValueError("phases and iterations must both be positive")
        if self.io_file_size < 1:
            raise ValueError("io_file_size must be at least 1 byte")


@dataclass(frozen=True)
class BenchSample:
    """One per-phase measurement."""

    subject: str
    mode: str
    workload: str
    phase: int
    metric: int


def add_one(n):
    return n + 1


def read_file(path):
    with open(path, "rb") as handle:
        return handle.read()


def _nonio_phase_native(iterations, _path):
    value = 0
    for _ in range(iterations):
        value = add_one(value)
    return value


def _make_nonio_phase_refinable():
    pipeline = Pipeline().add(add_one, "addOne")

    def phase(iterations, _path):
        value = 0
        for _ in range(iterations):
            value = pipeline.exec(value).result().single
        return value

    return phase


def _io_phase_native(iterations, path):
    size = 0
    for _ in range(iterations):
        size = len(read_file(path))
    return size


def _make_io_phase_refinable():
    pipeline = Pipeline().add(read_file, "readFile")

    def phase(iterations, path):
        size = 0
        for _ in range(iterations):
            size = len(pipeline.exec(path).result().single)
        return size

    return phase


def run_bench(cfg: BenchConfig) -> list[BenchSample]:
    """Run one subject of one workload and return one sample per phase."""
    if not hasattr(time, "perf_counter_ns"):
        raise ClockUnavailable("time.perf_counter_ns is missing")

    if cfg.workload == "nonio":
        phase_fn = (_nonio_phase_native if cfg.subject == "native"
                    else _make_nonio_phase_refinable())
        expected = cfg.iterations
        scratch = None
    else:
        phase_fn = (_io_phase_native if cfg.subject == "native"
                    else _make_io_phase_refinable())
        expected = cfg.io_file_size
        scratch = _make_scratch_file(cfg.io_file_size)

    samples: list[BenchSample] = []
    started_tracing = False
    if cfg.mode == "space" and not tracemalloc.is_tracing():
        tracemalloc.start()
        started_tracing = True
    try:
        for phase in range(cfg.phases):
            if cfg.mode == "time":
                t0 = time.perf_counter_ns()
                value = _run_phase(phase_fn, cfg.iterations, scratch)
                metric = time.perf_counter_ns() - t0
            else:
                before = tracemalloc.get_traced_memory()[0]
                value = _run_phase(phase_fn, cfg.iterations, scratch)
                metric = tracemalloc.get_traced_memory()[0] - before
            if value != expected:
                raise WorkloadMismatch(
                    f"{cfg.subject}/{cfg.workload} phase {phase} computed "
                    f"{value!r}, expected {expected!r}")
            samples.append(BenchSample(
                subject=cfg.subject, mode=cfg.mode, workload=cfg.workload,
                phase=phase, metric=metric))
    finally:
        if started_tracing:
            tracemalloc.stop()
        if scratch is not None:
            try:
                os.unlink(scratch)
            except OSError:
                pass
    return samples


def _run_phase(phase_fn, iterations, scratch):
    try:
        return phase_fn(iterations, scratch)
    except OSError as exc:
        raise IoUnavailable(f"scratch file read failed: {exc}") from exc


def _make_scratch_file(size: int) -> str:
    try:
        fd, path = tempfile.mkstemp(prefix="stepchain-bench-", suffix=".dat")
        with os.fdopen(fd, "wb") as handle:
            handle.write(b"x" * size)
    except OSError as exc:
        raise IoUnavailable(f"cannot create scratch file: {exc}") from exc
    return path
