"""stepchain: refinable pipelines of named steps.

Build a pipeline by appending named steps, specialize it by deep-clone
inheritance, refine any copy in place (insert, update, remove, wrap, trait
overrides, custom refiners), constrain it with an interface, and execute it
sequentially over synchronous, deferred, and nested steps.
"""
from .errors import (
    AlreadySettled,
    CycleDetected,
    DuplicateName,
    InterfaceViolation,
    InvalidTraitValue,
    InvalidWrapperResult,
    InvariantViolation,
    MissingName,
    NotNested,
    PipelineError,
    ReservedName,
    StaleRef,
    UnknownRefiner,
    UnknownStep,
    UnknownTraitKey,
)
from .model import ABSENT, Leaf, Nested, Step
from .pipeline import Pipeline, StepRef, make_step
from .execute import (
    ArgTuple,
    Deferred,
    ExecError,
    ExecOutcome,
    StepKind,
    classify,
)

__version__ = "0.1.0"

__all__ = [
    "ABSENT",
    "ArgTuple",
    "AlreadySettled",
    "CycleDetected",
    "Deferred",
    "DuplicateName",
    "ExecError",
    "ExecOutcome",
    "InterfaceViolation",
    "InvalidTraitValue",
    "InvalidWrapperResult",
    "InvariantViolation",
    "Leaf",
    "MissingName",
    "Nested",
    "NotNested",
    "Pipeline",
    "PipelineError",
    "ReservedName",
    "StaleRef",
    "Step",
    "StepKind",
    "StepRef",
    "UnknownRefiner",
    "UnknownStep",
    "UnknownTraitKey",
    "classify",
    "make_step",
]
