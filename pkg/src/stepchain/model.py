"""Step data model.

A step binds a name to a body. Bodies come in three kinds: a leaf callable,
a nested pipeline, or the absent placeholder. Absent steps keep their slot in
the sequence (so a later trait assignment can re-enable them by name) and are
skipped at execution time.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

_NAME_RE = re.compile(r"\w+\Z")


class _AbsentType:
    """Singleton placeholder for a trait-nulled step body."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ABSENT"


ABSENT = _AbsentType()


class Leaf:
    """A step body that is a plain callable."""

    __slots__ = ("fn",)
    kind = "leaf"

    def __init__(self, fn: Callable):
        self.fn = fn

    def __repr__(self):
        return f"Leaf({getattr(self.fn, '__name__', self.fn)!r})"


class Nested:
    """A step body that is itself a pipeline, executed recursively."""

    __slots__ = ("pipeline",)
    kind = "nested"

    def __init__(self, pipeline):
        self.pipeline = pipeline

    def __repr__(self):
        return f"Nested({self.pipeline!r})"


# What a Step.body may hold.
StepBody = Leaf | Nested | _AbsentType


@dataclass(frozen=True)
class Step:
    """One named element of a pipeline."""

    name: str
    body: StepBody

    @property
    def kind(self) -> str:
        return "absent" if self.body is ABSENT else self.body.kind


def valid_name(name) -> bool:
    """True if `name` is a non-empty string of word characters."""
    return isinstance(name, str) and bool(_NAME_RE.fullmatch(name))


def derived_name(fn) -> str | None:
    """Step name carried by a callable, or None if it has no usable one.

    Lambdas (`<lambda>`) and callables without a `__name__` yield None.
    """
    name = getattr(fn, "__name__", None)
    if isinstance(name, str) and valid_name(name):
        return name
    return None
