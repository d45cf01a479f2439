"""Demo blog built on stepchain pipelines."""
from .datastore import SCHEMA, BlogStore, BrokenReference, MissingRecord, StoreError
from .pipelines import (
    build_decorator,
    build_read_hierarchy,
    crud,
    derive_public_endpoint,
    make_load_article,
)
from .scenarios import SCENARIOS, ScenarioFailed, run_scenario

__all__ = [
    "BlogStore",
    "BrokenReference",
    "MissingRecord",
    "SCENARIOS",
    "SCHEMA",
    "ScenarioFailed",
    "StoreError",
    "build_decorator",
    "build_read_hierarchy",
    "crud",
    "derive_public_endpoint",
    "make_load_article",
    "run_scenario",
]
