"""Internal step store.

Holds the ordered step sequence plus the interface spec and registered
refiners for one pipeline. The store performs raw mutations only; all
validation happens in the `Pipeline` facade before anything here is touched.

The store keeps a version counter that advances on every change to the
ordered name sequence (insert, append, delete, rename). Step handles record
the version they were resolved against and refuse to operate once it moved.
Body-only replacement (update without rename, wrap, trait assignment) does
not advance the version.
"""
from __future__ import annotations

from typing import Callable

from .model import ABSENT, Leaf, Nested, Step


class StepStore:
    __slots__ = ("steps", "interface", "refiners", "version")

    def __init__(self):
        self.steps: list[Step] = []
        self.interface: tuple[str, ...] | None = None
        self.refiners: dict[str, Callable] = {}
        self.version = 0

    def find(self, name: str) -> int | None:
        for i, step in enumerate(self.steps):
            if step.name == name:
                return i
        return None

    def names(self) -> list[str]:
        return [step.name for step in self.steps]

    def append(self, step: Step) -> None:
        self.steps.append(step)
        self.version += 1

    def insert(self, index: int, step: Step) -> None:
        self.steps.insert(index, step)
        self.version += 1

    def delete(self, index: int) -> None:
        del self.steps[index]
        self.version += 1

    def replace(self, index: int, step: Step, structural: bool) -> None:
        self.steps[index] = step
        if structural:
            self.version += 1

    def commit(self, steps: list[Step]) -> None:
        """Swap in a refiner-produced sequence; structural iff names moved."""
        structural = [s.name for s in steps] != self.names()
        self.steps = steps
        if structural:
            self.version += 1

    def clone(self) -> StepStore:
        """Recursive copy: new steps, cloned nested pipelines, copied spec
        and refiner registry. Leaf callables are shared (they are opaque)."""
        other = StepStore()
        other.steps = [Step(s.name, _clone_body(s.body)) for s in self.steps]
        other.interface = self.interface
        other.refiners = dict(self.refiners)
        return other


def _clone_body(body):
    if body is ABSENT:
        return ABSENT
    if isinstance(body, Leaf):
        return Leaf(body.fn)
    if isinstance(body, Nested):
        return Nested(body.pipeline.inherit())
    raise TypeError(f"unrecognized step body: {body!r}")
