"""Refinable pipelines of named steps.

A `Pipeline` is an ordered sequence of uniquely named steps. It can be
inherited (deep clone, no structural sharing), refined in place (insert,
update, remove, wrap, trait assignment, user-defined refiners), constrained
by an interface (required step names in relative order), and executed
sequentially over mixed synchronous / deferred / nested steps.

All operations validate their input before the underlying store is mutated,
so a raised error never leaves a pipeline half-changed.
"""
from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .errors import (
    CycleDetected,
    DuplicateName,
    InterfaceViolation,
    InvalidTraitValue,
    InvalidWrapperResult,
    InvariantViolation,
    MissingName,
    NotNested,
    ReservedName,
    StaleRef,
    UnknownRefiner,
    UnknownStep,
    UnknownTraitKey,
)
from .model import ABSENT, Leaf, Nested, Step, derived_name, valid_name
from .store import StepStore


class Pipeline:
    """An ordered, refinable sequence of named steps.

    Mutating methods return a pipeline so construction chains::

        p = Pipeline().add(parse, "parse").add(check, "check")

    Pipelines are single-writer values: do not refine one pipeline from two
    threads at once. Executing (`exec`) is safe concurrently because each run
    works on a private snapshot of the step tree.
    """

    __slots__ = ("_store",)

    def __init__(self):
        self._store = StepStore()

    # -- construction ------------------------------------------------------

    def add(self, body, name: str | None = None) -> "Pipeline":
        """Append a step. `body` is a callable, a Pipeline, or ABSENT.

        The name is taken from the callable's `__name__` when not given
        explicitly; anonymous bodies require an explicit name.
        """
        name, body = _coerce(body, name)
        if self._store.find(name) is not None:
            raise DuplicateName(f"step name already in use: {name!r}")
        _ensure_acyclic(self, body)
        self._store.append(Step(name, body))
        return self

    def inherit(self) -> "Pipeline":
        """Deep copy of this pipeline: steps, nested pipelines, interface
        spec, and refiners. The copy shares no structure with its parent, so
        refining one never alters the other."""
        child = Pipeline()
        child._store = self._store.clone()
        return child

    # -- addressing --------------------------------------------------------

    def resolve(self, path: str | Sequence[str]) -> "StepRef":
        """Resolve a step path to a handle usable for refinement.

        Every prefix segment must name a nested step at its level; the final
        segment may name any step. Lookup is by exact name per level, never
        by deep search.
        """
        segments = (path,) if isinstance(path, str) else tuple(path)
        if not segments:
            raise ValueError("step path must not be empty")
        owner = self
        for segment in segments[:-1]:
            index = owner._store.find(segment)
            if index is None:
                raise UnknownStep(f"no step named {segment!r}")
            body = owner._store.steps[index].body
            if not isinstance(body, Nested):
                raise NotNested(f"step {segment!r} has no nested steps")
            owner = body.pipeline
        last = segments[-1]
        index = owner._store.find(last)
        if index is None:
            raise UnknownStep(f"no step named {last!r}")
        return StepRef(self, owner, index, last)

    def step(self, name: str) -> "StepRef":
        """Shorthand for resolving a single direct step by name."""
        return self.resolve((name,))

    def names(self) -> list[str]:
        """Direct step names in execution order, absent steps included."""
        return self._store.names()

    @property
    def interface(self) -> tuple[str, ...] | None:
        return self._store.interface

    # -- traits ------------------------------------------------------------

    def assign_traits(self, traits: dict, strict: bool = True) -> "Pipeline":
        """Bulk-override direct steps by name.

        A value of None (or ABSENT) marks the matching step absent; a
        callable replaces its body in place. Keys matching no step raise
        UnknownTraitKey unless `strict` is False, in which case they are
        skipped. Nothing is applied until every key has been checked.
        """
        updates: list[tuple[int, object]] = []
        for key, value in traits.items():
            index = self._store.find(key)
            if index is None:
                if strict:
                    raise UnknownTraitKey(f"trait key matches no step: {key!r}")
                continue
            if value is None or value is ABSENT:
                updates.append((index, ABSENT))
            elif isinstance(value, (Pipeline, Nested)):
                raise InvalidTraitValue(
                    f"trait value for {key!r} must be a callable or ABSENT, "
                    "not a pipeline"
                )
            elif callable(value):
                updates.append((index, Leaf(value)))
            else:
                raise InvalidTraitValue(
                    f"trait value for {key!r} must be a callable or ABSENT: "
                    f"{value!r}"
                )
        for index, body in updates:
            old = self._store.steps[index]
            self._store.replace(index, Step(old.name, body), structural=False)
        return self

    # -- interface ---------------------------------------------------------

    def set_interface(self, names: Iterable[str]) -> "Pipeline":
        """Declare required step names in required relative order.

        The spec is validated immediately; on violation it is not stored.
        It is re-checked at the start of every execution.
        """
        spec = tuple(names)
        seen = set()
        for name in spec:
            if not valid_name(name):
                raise InterfaceViolation(f"invalid interface name: {name!r}")
            if name in seen:
                raise InterfaceViolation(f"duplicate interface name: {name!r}")
            seen.add(name)
        previous = self._store.interface
        self._store.interface = spec
        violation = self.validate_interface()
        if violation is not None:
            self._store.interface = previous
            raise violation
        return self

    def validate_interface(self) -> InterfaceViolation | None:
        """Verdict on the stored interface spec, or None when satisfied.

        Satisfied means: the spec names, in order, form a subsequence of the
        executable (non-absent) direct step names. A step that exists but is
        marked absent counts as missing.
        """
        spec = self._store.interface
        if spec is None:
            return None
        executable = [s.name for s in self._store.steps if s.body is not ABSENT]
        remaining = iter(executable)
        for want in spec:
            for got in remaining:
                if got == want:
                    break
            else:
                return InterfaceViolation(
                    f"interface requires executable step {want!r} in order; "
                    f"executable steps are {executable!r}"
                )
        return None

    # -- user-defined refiners ----------------------------------------------

    def define_refiner(self, name: str, procedure: Callable) -> "Pipeline":
        """Register a custom refinement procedure under `name`.

        The procedure is called by `apply_refiner` with a mutable list of the
        direct steps (plus any caller arguments) and may reorder, insert, or
        delete entries. Inherited pipelines carry a copy of the registry.
        """
        if not valid_name(name):
            raise ValueError(f"invalid refiner name: {name!r}")
        if name in _RESERVED_NAMES:
            raise ReservedName(f"refiner name shadows a built-in: {name!r}")
        self._store.refiners[name] = procedure
        return self

    def apply_refiner(self, name: str, *args) -> "Pipeline":
        """Run a registered refiner against the direct step sequence.

        The refiner works on a copy; the result replaces the sequence only
        if it still satisfies every invariant (unique valid names, usable
        bodies, no cycles). Otherwise InvariantViolation is raised and the
        pipeline is unchanged. List entries may be Step objects or bare
        callables / pipelines, which are named like `add` arguments.
        """
        procedure = self._store.refiners.get(name)
        if procedure is None:
            raise UnknownRefiner(f"no refiner named {name!r}")
        work: list = list(self._store.steps)
        procedure(work, *args)
        try:
            steps = [self._adopt(entry) for entry in work]
            names = [s.name for s in steps]
            if len(set(names)) != len(names):
                raise DuplicateName(f"duplicate step names: {names!r}")
        except (TypeError, MissingName, DuplicateName, CycleDetected, ValueError) as exc:
            raise InvariantViolation(f"refiner {name!r} corrupted the sequence: {exc}") from exc
        self._store.commit(steps)
        return self

    def _adopt(self, entry) -> Step:
        if isinstance(entry, Step):
            if not valid_name(entry.name):
                raise ValueError(f"invalid step name: {entry.name!r}")
            if not (entry.body is ABSENT or isinstance(entry.body, (Leaf, Nested))):
                raise TypeError(f"invalid step body: {entry.body!r}")
            _ensure_acyclic(self, entry.body)
            return entry
        name, body = _coerce(entry, None)
        _ensure_acyclic(self, body)
        return Step(name, body)

    # -- execution ----------------------------------------------------------

    def exec(self, *args) -> "ExecOutcome":  # noqa: F821 - see execute module
        """Execute the steps in order against a snapshot of the tree.

        Returns an outcome that eventually resolves to the final threaded
        values or to an ExecError. See `stepchain.execute.run`.
        """
        from . import execute

        return execute.run(self, execute.ArgTuple(args))

    # -- introspection ------------------------------------------------------

    def tree_text(self) -> str:
        """Human-readable step tree, one step per line:
        `indent name [leaf|nested|absent]`, two-space indent per level."""
        lines: list[str] = []
        _tree_lines(self, 0, lines)
        return "\n".join(lines)

    def __len__(self):
        return len(self._store.steps)

    def __repr__(self):
        return f"<Pipeline steps={self._store.names()!r}>"


class StepRef:
    """Handle to one resolved step: (owning pipeline, position).

    Positional refinement goes through this handle. Any structural change at
    the owner's level (insert, append, remove, rename) invalidates handles
    resolved before it; a stale handle raises StaleRef instead of acting on
    a shifted position.
    """

    __slots__ = ("_root", "_owner", "_index", "_name", "_version")

    def __init__(self, root: Pipeline, owner: Pipeline, index: int, name: str):
        self._root = root
        self._owner = owner
        self._index = index
        self._name = name
        self._version = owner._store.version

    # -- inspection ---------------------------------------------------------

    @property
    def name(self) -> str:
        return self._name

    @property
    def kind(self) -> str:
        """Body kind at resolution level: 'leaf', 'nested', or 'absent'."""
        self._guard()
        return self._owner._store.steps[self._index].kind

    @property
    def nested(self) -> Pipeline:
        """The inner pipeline of a nested step (NotNested otherwise)."""
        self._guard()
        body = self._owner._store.steps[self._index].body
        if not isinstance(body, Nested):
            raise NotNested(f"step {self._name!r} is not nested")
        return body.pipeline

    # -- refinement ---------------------------------------------------------

    def insert_before(self, body, name: str | None = None) -> Pipeline:
        """Place a new step immediately before this one."""
        return self._insert(0, body, name)

    def insert_after(self, body, name: str | None = None) -> Pipeline:
        """Place a new step immediately after this one."""
        return self._insert(1, body, name)

    def update(self, body, rename: str | None = None) -> Pipeline:
        """Replace this step's body in place; position is preserved and the
        name is kept unless `rename` is given."""
        self._guard()
        new_name, new_body = _coerce(body, rename if rename is not None else self._name)
        store = self._owner._store
        if new_name != self._name and store.find(new_name) is not None:
            raise DuplicateName(f"step name already in use: {new_name!r}")
        _ensure_acyclic(self._owner, new_body)
        store.replace(self._index, Step(new_name, new_body),
                      structural=new_name != self._name)
        return self._root

    def remove(self) -> Pipeline:
        """Delete this step; its name disappears from the sequence."""
        self._guard()
        self._owner._store.delete(self._index)
        return self._root

    def wrap(self, wrapper: Callable) -> Pipeline:
        """Replace the body with `wrapper(current)`.

        The wrapper receives the leaf callable, the nested pipeline, or
        ABSENT, and must return a callable, a Pipeline, a body object, or
        ABSENT; anything else raises InvalidWrapperResult. Name and position
        are preserved.
        """
        self._guard()
        store = self._owner._store
        current = store.steps[self._index].body
        exposed = current.fn if isinstance(current, Leaf) else (
            current.pipeline if isinstance(current, Nested) else ABSENT)
        produced = wrapper(exposed)
        body = _as_body(produced)
        if body is None:
            raise InvalidWrapperResult(
                f"wrapper for {self._name!r} returned {produced!r}")
        _ensure_acyclic(self._owner, body)
        store.replace(self._index, Step(self._name, body), structural=False)
        return self._root

    def assign_traits(self, traits: dict, strict: bool = True) -> Pipeline:
        """Apply a trait set to the steps of this nested pipeline."""
        self.nested.assign_traits(traits, strict=strict)
        return self._root

    def _insert(self, offset: int, body, name: str | None) -> Pipeline:
        self._guard()
        name, body = _coerce(body, name)
        store = self._owner._store
        if store.find(name) is not None:
            raise DuplicateName(f"step name already in use: {name!r}")
        _ensure_acyclic(self._owner, body)
        store.insert(self._index + offset, Step(name, body))
        return self._root

    def _guard(self):
        if self._version != self._owner._store.version:
            raise StaleRef(
                f"handle to step {self._name!r} predates a structural change")

    def __repr__(self):
        return f"<StepRef {self._name!r} @{self._index}>"


def make_step(body, name: str | None = None) -> Step:
    """Build a Step the way `add` would; handy inside refiners."""
    resolved, coerced = _coerce(body, name)
    return Step(resolved, coerced)


def _as_body(value):
    if value is ABSENT:
        return ABSENT
    if isinstance(value, (Leaf, Nested)):
        return value
    if isinstance(value, Pipeline):
        return Nested(value)
    if callable(value):
        return Leaf(value)
    return None


def _coerce(value, name: str | None):
    body = _as_body(value)
    if body is None:
        raise TypeError(
            f"step body must be a callable, a Pipeline, or ABSENT: {value!r}")
    if name is None:
        name = derived_name(body.fn) if isinstance(body, Leaf) else None
        if name is None:
            raise MissingName(
                "step body has no derivable name; pass one explicitly")
    if not valid_name(name):
        raise ValueError(f"invalid step name: {name!r}")
    return name, body


def _ensure_acyclic(owner: Pipeline, body):
    if not isinstance(body, Nested):
        return
    seen: set[int] = set()
    stack = [body.pipeline]
    while stack:
        pipeline = stack.pop()
        if pipeline is owner:
            raise CycleDetected(
                "nested body would contain the pipeline it is added to")
        if id(pipeline) in seen:
            continue
        seen.add(id(pipeline))
        for step in pipeline._store.steps:
            if isinstance(step.body, Nested):
                stack.append(step.body.pipeline)


def _tree_lines(pipeline: Pipeline, depth: int, lines: list[str]):
    pad = "  " * depth
    for step in pipeline._store.steps:
        lines.append(f"{pad}{step.name} [{step.kind}]")
        if isinstance(step.body, Nested):
            _tree_lines(step.body.pipeline, depth + 1, lines)


_RESERVED_NAMES = frozenset(
    attr for attr in vars(Pipeline) if not attr.startswith("_"))
