"""Blog pipelines built on stepchain.

Shows the intended usage of the library: a read-validation hierarchy grown
by inheritance, public endpoints derived by trait overrides, a decorator
builder whose parts stay addressable by name, and CRUD pipelines over the
in-memory datastore.

Validation steps pass their input through unchanged and raise on violation,
so the same value threads the whole pipeline until a datastore step swaps
it for a record.
"""
from __future__ import annotations

from ..execute import Deferred
from ..model import ABSENT
from ..pipeline import Pipeline
from .datastore import SCHEMA, BlogStore


# -- validation steps --------------------------------------------------------

def check_empty(data):
    """Reject missing input: None, empty strings, empty collections."""
    if data is None or (hasattr(data, "__len__") and len(data) == 0):
        raise ValueError("empty input")
    return data


def num_type_check(data):
    # Ids arrive as ints or raw route strings; anything else is malformed.
    if isinstance(data, bool) or not isinstance(data, (int, str)):
        raise TypeError(f"id payload must be an int or string: {data!r}")
    return data


def positive_id_check(data):
    if int(data) <= 0:
        raise ValueError(f"id must be positive: {data!r}")
    return data


def post_id_check(data):
    """The post-id rule: 'p' prefix, positive integer remainder."""
    if not (isinstance(data, str) and data[:1] == "p" and int(data[1:]) > 0):
        raise ValueError(f"not a post id: {data!r}")
    return data


def payload_check(data):
    if not isinstance(data, dict) or not data:
        raise ValueError(f"payload must be a non-empty mapping: {data!r}")
    return data


def _make_db_read(store: BlogStore, table: str):
    def db_read(data):
        if isinstance(data, dict):
            return data  # already materialized (cache hit upstream)
        return store.read(table, int(data) if isinstance(data, str) else data)

    return db_read


def _make_cache_probe(cache: dict):
    def cache_probe(data):
        hit = cache.get(data)
        if hit is not None:
            return Deferred.resolved(hit)
        return data

    return cache_probe


# -- the read hierarchy ------------------------------------------------------

def build_read_hierarchy(store: BlogStore, cache: dict | None = None) -> dict[str, Pipeline]:
    """Four read pipelines grown by inheritance.

    Read            [checkEmpty]
    ReadNumber      + numTypeChecker
    ReadNumberUserId  + idChecker (> 0) + dbProc (Users lookup)
    ReadNumberPostId  idChecker updated to the 'p'-prefix rule, with a
                      cacheProbe inserted right after it
    """
    cache = {} if cache is None else cache
    read = Pipeline().add(check_empty, "checkEmpty")
    read_number = read.inherit().add(num_type_check, "numTypeChecker")
    user_id = (read_number.inherit()
               .add(positive_id_check, "idChecker")
               .add(_make_db_read(store, "Users"), "dbProc"))
    post_id = user_id.inherit()
    post_id.step("idChecker").update(post_id_check)
    post_id.step("idChecker").insert_after(_make_cache_probe(cache), "cacheProbe")
    return {
        "Read": read,
        "ReadNumber": read_number,
        "ReadNumberUserId": user_id,
        "ReadNumberPostId": post_id,
    }


# -- trait-derived public endpoints ------------------------------------------

def derive_public_endpoint(authenticated: Pipeline) -> Pipeline:
    """Public variant of an authenticated pipeline: same steps, authCheck
    trait-nulled. The original pipeline is untouched."""
    return authenticated.inherit().assign_traits({"authCheck": ABSENT})


def make_load_article(store: BlogStore) -> Pipeline:
    """An authenticated article loader: payloadCheck, authCheck, loadQuery.

    Requests are mappings like {"user": name-or-None, "article": id}.
    """
    def auth_check(request):
        if not request.get("user"):
            raise PermissionError("authentication required")
        return request

    def load_query(request):
        return store.read("Posts", request["article"])

    return (Pipeline()
            .add(payload_check, "payloadCheck")
            .add(auth_check, "authCheck")
            .add(load_query, "loadQuery"))


# -- decorator builder ---------------------------------------------------------

def build_decorator(pre_body, post_body):
    """Builder wrapping any core body as [preFn, coreFn, postFn].

    The returned pipeline keeps all three parts addressable by name, so for
    example the postFn step can be updated later.
    """
    def build(core_body) -> Pipeline:
        return (Pipeline()
                .add(pre_body, "preFn")
                .add(core_body, "coreFn")
                .add(post_body, "postFn"))

    return build


# -- CRUD ----------------------------------------------------------------------

# Never mutated; crud() clones from these so every pipeline shares the same
# validation ancestry.
_READ = Pipeline().add(check_empty, "checkEmpty")
_READ_NUMBER = _READ.inherit().add(num_type_check, "numTypeChecker")

CRUD_OPS = ("create", "read", "update", "delete")


def crud(store: BlogStore, entity: str, op: str) -> Pipeline:
    """A CRUD pipeline for one table.

    read/delete take an id and validate it; update takes
    {"id": ..., "fields": {...}}; create takes the record mapping and
    checks referential integrity before writing.
    """
    if entity not in SCHEMA:
        raise ValueError(f"unknown table: {entity!r}")
    if op not in CRUD_OPS:
        raise ValueError(f"op must be one of {CRUD_OPS}: {op!r}")

    if op == "read":
        return (_READ_NUMBER.inherit()
                .add(positive_id_check, "idChecker")
                .add(_make_db_read(store, entity), "dbProc"))

    if op == "delete":
        def db_delete(data):
            return store.delete(entity, int(data) if isinstance(data, str) else data)

        return (_READ_NUMBER.inherit()
                .add(positive_id_check, "idChecker")
                .add(db_delete, "dbProc"))

    if op == "create":
        def db_create(record):
            return store.create(entity, record)

        return (_READ.inherit()
                .add(payload_check, "payloadCheck")
                .add(db_create, "dbProc"))

    def update_shape_check(request):
        payload_check(request)
        if "id" not in request or not isinstance(request.get("fields"), dict):
            raise ValueError(
                "update payload needs an 'id' and a 'fields' mapping")
        positive_id_check(request["id"])
        return request

    def db_update(request):
        return store.update(entity, request["id"], request["fields"])

    return (_READ.inherit()
            .add(update_shape_check, "payloadCheck")
            .add(db_update, "dbProc"))
