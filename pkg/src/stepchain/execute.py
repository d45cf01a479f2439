"""Sequential execution over synchronous, deferred, and nested steps.

Running a pipeline walks its steps in order, threading an ArgTuple of values
from one step to the next. A step may return a plain value (continued with
immediately), a Deferred (execution suspends until it settles), or be a
nested pipeline (executed recursively; its final values feed the next step).
Absent steps are skipped. The first raising step or rejected Deferred stops
the run and the outcome carries an ExecError naming the failing step's path.

Execution works on a snapshot of the step tree taken when `run` is called,
so refining a pipeline mid-flight never affects runs already started, and
several threads may execute one pipeline concurrently.
"""
from __future__ import annotations

import threading
from enum import Enum
from typing import Callable

from .errors import AlreadySettled, PipelineError
from .model import ABSENT, Nested
from .pipeline import Pipeline

INTERFACE_SEGMENT = "<interface>"
CATCH_SEGMENT = "<catch>"


class ExecError(PipelineError):
    """Failure of one step, carrying its path in the execution snapshot."""

    def __init__(self, path: tuple[str, ...], cause):
        super().__init__(f"step {'/'.join(path)!r} failed: {cause!r}")
        self.path = path
        self.cause = cause


class ArgTuple:
    """Engine-level container for the values threaded between steps.

    Distinct from any user value: a step returning a plain tuple (or any
    other collection) passes it on as a single argument, while returning an
    ArgTuple spreads its entries as the next step's positional arguments.
    """

    __slots__ = ("values",)

    def __init__(self, values=()):
        self.values = tuple(values)

    @property
    def single(self):
        """The sole value, for the common one-argument case."""
        if len(self.values) != 1:
            raise ValueError(f"expected exactly one value, have {len(self.values)}")
        return self.values[0]

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, index):
        return self.values[index]

    def __eq__(self, other):
        if isinstance(other, ArgTuple):
            return self.values == other.values
        return NotImplemented

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"ArgTuple{self.values!r}"


def _as_args(value) -> ArgTuple:
    # Non-ArgTuple results become a one-element tuple before the next step.
    return value if isinstance(value, ArgTuple) else ArgTuple((value,))


class Deferred:
    """A value that settles later, exactly once, to a result or an error.

    Thread-safe. Steps return Deferreds to signal asynchronous work; the
    engine recognizes them by type (never by duck-typing) and suspends the
    run until `resolve` or `reject` is called, without blocking any thread.
    """

    __slots__ = ("_lock", "_state", "_payload", "_callbacks", "_event")

    def __init__(self):
        self._lock = threading.Lock()
        self._state = "pending"
        self._payload = None
        self._callbacks: list[tuple[Callable, Callable]] = []
        self._event: threading.Event | None = None

    @classmethod
    def resolved(cls, value) -> "Deferred":
        d = cls()
        d.resolve(value)
        return d

    @classmethod
    def rejected(cls, error: BaseException) -> "Deferred":
        d = cls()
        d.reject(error)
        return d

    def resolve(self, value) -> None:
        self._settle("value", value)

    def reject(self, error: BaseException) -> None:
        if not isinstance(error, BaseException):
            raise TypeError(f"reject expects an exception, got {error!r}")
        self._settle("error", error)

    @property
    def pending(self) -> bool:
        with self._lock:
            return self._state == "pending"

    def subscribe(self, on_value: Callable, on_error: Callable) -> None:
        """Invoke one of the callbacks when settled (immediately if already
        settled, on the settling thread otherwise)."""
        with self._lock:
            if self._state == "pending":
                self._callbacks.append((on_value, on_error))
                return
            state, payload = self._state, self._payload
        self._dispatch(state, payload, on_value, on_error)

    def wait(self, timeout: float | None = None):
        """Block until settled; return the value or raise the error."""
        with self._lock:
            if self._state == "pending":
                if self._event is None:
                    self._event = threading.Event()
                event = self._event
            else:
                event = None
        if event is not None and not event.wait(timeout):
            raise TimeoutError("deferred value did not settle in time")
        with self._lock:
            state, payload = self._state, self._payload
        if state == "error":
            raise payload
        return payload

    def _settle(self, state: str, payload) -> None:
        with self._lock:
            if self._state != "pending":
                raise AlreadySettled("deferred value already settled")
            self._state = state
            self._payload = payload
            callbacks, self._callbacks = self._callbacks, []
            event = self._event
        if event is not None:
            event.set()
        for on_value, on_error in callbacks:
            self._dispatch(state, payload, on_value, on_error)

    @staticmethod
    def _dispatch(state, payload, on_value, on_error):
        if state == "value":
            on_value(payload)
        else:
            on_error(payload)

    def __repr__(self):
        with self._lock:
            return f"<Deferred {self._state}>"


class StepKind(Enum):
    IMMEDIATE = "immediate"
    DEFERRED = "deferred"
    NESTED = "nested"


def classify(value) -> StepKind:
    """Total classification used by the engine: nested pipelines execute
    recursively, Deferreds suspend, anything else continues immediately."""
    if isinstance(value, (Pipeline, Nested)):
        return StepKind.NESTED
    if isinstance(value, Deferred):
        return StepKind.DEFERRED
    return StepKind.IMMEDIATE


class ExecOutcome:
    """Eventual result of a run: a final ArgTuple or an ExecError."""

    __slots__ = ("_cell",)

    def __init__(self):
        self._cell = Deferred()

    def result(self, timeout: float | None = None) -> ArgTuple:
        """Block until the run finishes; return the final values or raise
        the ExecError."""
        return self._cell.wait(timeout)

    def exception(self, timeout: float | None = None) -> ExecError | None:
        """Block until finished; return the ExecError, or None on success."""
        try:
            self._cell.wait(timeout)
        except ExecError as err:
            return err
        return None

    def done(self) -> bool:
        return not self._cell.pending

    def catch(self, handler: Callable) -> "ExecOutcome":
        """Recovery channel, chainable like the run itself.

        On success the value passes through untouched and the handler never
        runs. On failure the handler receives the ExecError and its return
        value becomes the new outcome; if the handler raises, the new
        outcome fails with that error instead.
        """
        recovered = ExecOutcome()

        def on_value(value):
            recovered._resolve(value)

        def on_error(error):
            try:
                replacement = handler(error)
            except Exception as exc:
                recovered._reject(ExecError((CATCH_SEGMENT,), exc))
                return
            recovered._resolve(_as_args(replacement))

        self._cell.subscribe(on_value, on_error)
        return recovered

    def _resolve(self, args: ArgTuple) -> None:
        self._cell.resolve(args)

    def _reject(self, error: ExecError) -> None:
        self._cell.reject(error)

    def __repr__(self):
        return f"<ExecOutcome {'done' if self.done() else 'running'}>"


class _Frame:
    __slots__ = ("steps", "index", "path")

    def __init__(self, steps, path):
        self.steps = steps
        self.index = 0
        self.path = path


class _Execution:
    """One run's state: a stack of frames plus the current arguments.

    Exactly one thread drives at a time. When a step returns a pending
    Deferred the driver parks; the settling thread picks the run back up.
    The `_driving` latch turns already-settled Deferreds into plain loop
    iterations instead of recursion.
    """

    __slots__ = ("_outcome", "_stack", "_args", "_lock", "_driving", "_resumed")

    def __init__(self, outcome: ExecOutcome, steps, args: ArgTuple):
        self._outcome = outcome
        self._stack = [_Frame(steps, ())]
        self._args = args
        self._lock = threading.Lock()
        self._driving = False
        self._resumed = None

    def start(self):
        with self._lock:
            self._driving = True
        self._drive()

    def _drive(self):
        while True:
            suspended = self._run_steps()
            if suspended is None:
                with self._lock:
                    self._driving = False
                return
            deferred, path = suspended
            with self._lock:
                self._resumed = None
            deferred.subscribe(
                self._on_value,
                lambda error, p=path: self._on_error(ExecError(p, error)),
            )
            with self._lock:
                resumed = self._resumed
                if resumed is None:
                    self._driving = False
                    return
                self._resumed = None
            if resumed[0] == "error":
                with self._lock:
                    self._driving = False
                self._outcome._reject(resumed[1])
                return
            self._args = resumed[1]

    def _on_value(self, value):
        args = _as_args(value)
        with self._lock:
            if self._driving:
                self._resumed = ("value", args)
                return
            self._driving = True
        self._args = args
        self._drive()

    def _on_error(self, error: ExecError):
        with self._lock:
            if self._driving:
                self._resumed = ("error", error)
                return
        self._outcome._reject(error)

    def _run_steps(self):
        """Advance until finished (resolve/reject the outcome, return None)
        or suspended on a pending Deferred (return it with its path)."""
        while self._stack:
            frame = self._stack[-1]
            if frame.index >= len(frame.steps):
                self._stack.pop()
                continue
            step = frame.steps[frame.index]
            frame.index += 1
            body = step.body
            if body is ABSENT:
                continue
            if isinstance(body, Nested):
                inner = body.pipeline._store.steps
                self._stack.append(_Frame(inner, frame.path + (step.name,)))
                continue
            path = frame.path + (step.name,)
            try:
                raw = body.fn(*self._args.values)
            except Exception as exc:
                self._outcome._reject(ExecError(path, exc))
                return None
            if isinstance(raw, Deferred):
                return raw, path
            self._args = _as_args(raw)
        self._outcome._resolve(self._args)
        return None


def run(pipeline: Pipeline, args: ArgTuple) -> ExecOutcome:
    """Execute `pipeline` with `args`, returning an ExecOutcome.

    The step tree is snapshotted first, then every interface spec in the
    snapshot (the pipeline's own and those of nested pipelines) is checked;
    a violation resolves the outcome to an ExecError with the synthetic
    path segment `<interface>` and runs no steps. Step callables must not
    refine the pipeline they run in; thanks to the snapshot such mutations
    would be ignored rather than corrupt the run, but they remain a
    contract violation.
    """
    outcome = ExecOutcome()
    snapshot = pipeline.inherit()
    violated = _scan_interfaces(snapshot, ())
    if violated is not None:
        path, violation = violated
        outcome._reject(ExecError(path + (INTERFACE_SEGMENT,), violation))
        return outcome
    _Execution(outcome, snapshot._store.steps, args).start()
    return outcome


def _scan_interfaces(pipeline: Pipeline, prefix: tuple[str, ...]):
    violation = pipeline.validate_interface()
    if violation is not None:
        return prefix, violation
    for step in pipeline._store.steps:
        if isinstance(step.body, Nested):
            found = _scan_interfaces(step.body.pipeline, prefix + (step.name,))
            if found is not None:
                return found
    return None
