"""Self-checking demo scenarios.

Each scenario builds its own store and pipelines, exercises one usage
pattern end to end, and raises ScenarioFailed on any unexpected outcome.
The return value is a short summary for the CLI.
"""
from __future__ import annotations

from ..errors import InterfaceViolation, InvariantViolation
from ..execute import INTERFACE_SEGMENT
from ..model import Step
from ..pipeline import Pipeline, make_step
from .datastore import BlogStore, BrokenReference, MissingRecord
from .pipelines import (
    build_decorator,
    build_read_hierarchy,
    check_empty,
    crud,
    derive_public_endpoint,
    make_load_article,
)


class ScenarioFailed(Exception):
    pass


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise ScenarioFailed(message)


def _failure_path(pipeline: Pipeline, *args) -> tuple[str, ...]:
    error = pipeline.exec(*args).exception()
    _expect(error is not None, f"expected a failing run for input {args!r}")
    return error.path


def _seeded_store() -> BlogStore:
    store = BlogStore()
    store.create("Users", {"email": "ada@example.net", "name": "Ada"}, record_id=14)
    store.create("Images", {"url": "img/one.png"}, record_id=1)
    return store


def read_hierarchy() -> str:
    store = _seeded_store()
    cached_post = {"id": 12, "author": 14, "body": "cached body"}
    hierarchy = build_read_hierarchy(store, cache={"p12": cached_post})

    _expect(hierarchy["Read"].names() == ["checkEmpty"], "Read should hold one step")
    _expect(hierarchy["ReadNumber"].names() == ["checkEmpty", "numTypeChecker"],
            "ReadNumber shape is wrong")
    _expect(hierarchy["ReadNumberUserId"].names() ==
            ["checkEmpty", "numTypeChecker", "idChecker", "dbProc"],
            "ReadNumberUserId shape is wrong")
    _expect(hierarchy["ReadNumberPostId"].names() ==
            ["checkEmpty", "numTypeChecker", "idChecker", "cacheProbe", "dbProc"],
            "ReadNumberPostId shape is wrong")

    user = hierarchy["ReadNumberUserId"].exec(14).result().single
    _expect(user == store.read("Users", 14), "user lookup should match the table")
    _expect(_failure_path(hierarchy["ReadNumberUserId"], 0) == ("idChecker",),
            "id 0 should fail at idChecker")
    post = hierarchy["ReadNumberPostId"].exec("p12").result().single
    _expect(post == cached_post, "post id 'p12' should come from the cache")

    before = {name: p.tree_text() for name, p in hierarchy.items()}
    hierarchy["ReadNumberPostId"].add(lambda data: data, "auditLog")
    for name in ("Read", "ReadNumber", "ReadNumberUserId"):
        _expect(hierarchy[name].tree_text() == before[name],
                f"refining the leaf pipeline must not touch {name}")
    return "hierarchy shapes, lookups, and locality verified"


def public_endpoint() -> str:
    store = _seeded_store()
    store.create("Posts", {"author": 14, "body": "hello"}, record_id=1)
    anonymous = {"user": None, "article": 1}

    load_article = make_load_article(store)
    _expect(_failure_path(load_article, anonymous) == ("authCheck",),
            "anonymous request should fail authCheck")
    public = derive_public_endpoint(load_article)
    _expect(public.exec(anonymous).result().single["body"] == "hello",
            "public endpoint should serve the anonymous request")
    _expect(load_article.exec(anonymous).exception() is not None,
            "deriving must not loosen the original pipeline")
    _expect(derive_public_endpoint(load_article).tree_text() == public.tree_text(),
            "deriving twice should give identical trees")

    guarded = make_load_article(store).set_interface(["payloadCheck", "authCheck"])
    broken = derive_public_endpoint(guarded)
    error = broken.exec({"user": "ada", "article": 1}).exception()
    _expect(error is not None and error.path == (INTERFACE_SEGMENT,)
            and isinstance(error.cause, InterfaceViolation),
            "nulled authCheck should violate the declared interface at run time")
    return "trait-derived endpoint and interface enforcement verified"


def _interleave(steps: list, guard) -> None:
    # Insert a guard before every step that sat at an even index.
    result = []
    for index, step in enumerate(steps):
        if index % 2 == 0:
            result.append(make_step(guard, f"guard{index}"))
        result.append(step)
    steps[:] = result


def interleave() -> str:
    def type_guard(data):
        if not data:
            raise TypeError("user input type error")
        return data

    read = Pipeline().add(check_empty, "checkEmpty")
    read.define_refiner("interleave", _interleave)
    exec_pipeline = (read.inherit()
                     .add(lambda data: data * 2, "double")
                     .add(lambda data: data + 1, "increment"))
    exec_pipeline.apply_refiner("interleave", type_guard)
    _expect(exec_pipeline.names() ==
            ["guard0", "checkEmpty", "double", "guard2", "increment"],
            "guards should sit at the even positions")
    _expect(exec_pipeline.exec(3).result().single == 7,
            "guarded pipeline should still compute 3*2+1")
    error = exec_pipeline.exec(0).exception()
    _expect(error is not None and str(error.cause) == "user input type error",
            "guard should raise the type error message")
    recovered = exec_pipeline.exec(0).catch(lambda err: "http 500").result().single
    _expect(recovered == "http 500", "catch handler should supply the fallback")

    bad = read.inherit().add(lambda data: data, "other")

    def clobber(steps):
        steps[0] = Step("other", steps[0].body)

    bad.define_refiner("clobber", clobber)
    before = bad.tree_text()
    try:
        bad.apply_refiner("clobber")
    except InvariantViolation:
        pass
    else:
        raise ScenarioFailed("duplicate rename must be rejected")
    _expect(bad.tree_text() == before, "failed refiner must roll back")
    return "custom refiner, guard errors, and rollback verified"


def decorator() -> str:
    def scaffold(value):
        return f"scaffold({value})"

    def finish(value):
        return f"finish({value})"

    def handler(value):
        return f"handle({value})"

    build = build_decorator(scaffold, finish)
    decorated = build(handler)
    _expect(decorated.names() == ["preFn", "coreFn", "postFn"],
            "decorator parts should be addressable by name")
    _expect(decorated.exec("x").result().single == "finish(handle(scaffold(x)))",
            "decorator should thread pre, core, post in order")

    decorated.step("postFn").update(lambda value: f"audit({value})")
    _expect(decorated.exec("x").result().single == "audit(handle(scaffold(x)))",
            "updated postFn should take effect")

    identity = lambda value: value  # noqa: E731
    plain = build_decorator(identity, identity)(handler)
    _expect(plain.exec("x").result().single == handler("x"),
            "identity decorator should equal the bare handler")
    return "decorator build, named update, and identity case verified"


def robot_traverse() -> str:
    log: list[str] = []

    def sensor(name):
        def probe(state):
            log.append(name)
            return state
        return probe

    def forward_in_degree(degree):
        def move(state):
            log.append(f"forward{degree}")
            return {**state, "heading": degree}
        return move

    obstacle = (Pipeline()
                .add(sensor("static"), "checkStaticObstacle")
                .add(sensor("dynamic"), "checkDynamicObstacle"))
    move_right = (Pipeline()
                  .add(sensor("battery"), "checkBattery")
                  .add(forward_in_degree(90), "forwardInDegree"))
    move_forward = (Pipeline()
                    .add(obstacle, "checkObstacle")
                    .add(move_right, "moveRight"))

    move_forward.resolve(["checkObstacle", "checkStaticObstacle"]) \
        .insert_after(sensor("environmental"), "checkEnvironmentalObstacle")
    move_forward.resolve(["moveRight", "checkBattery"]) \
        .insert_after(sensor("fuel"), "checkFuel")

    final = move_forward.exec({"heading": 0}).result().single
    _expect(final == {"heading": 90}, "robot should end heading 90")
    _expect(log == ["static", "environmental", "dynamic", "battery", "fuel",
                    "forward90"],
            f"sensor order is wrong: {log}")
    expected_tree = "\n".join([
        "checkObstacle [nested]",
        "  checkStaticObstacle [leaf]",
        "  checkEnvironmentalObstacle [leaf]",
        "  checkDynamicObstacle [leaf]",
        "moveRight [nested]",
        "  checkBattery [leaf]",
        "  checkFuel [leaf]",
        "  forwardInDegree [leaf]",
    ])
    _expect(move_forward.tree_text() == expected_tree,
            "deep insertions should land inside the nested pipelines")
    return "deep path refinement of nested pipelines verified"


def crud_roundtrip() -> str:
    store = BlogStore()
    user = crud(store, "Users", "create").exec(
        {"email": "ada@example.net", "name": "Ada"}).result().single
    post = crud(store, "Posts", "create").exec(
        {"author": user["id"], "body": "hello"}).result().single

    broken = crud(store, "Posts", "create").exec(
        {"author": 999, "body": "nope"}).exception()
    _expect(broken is not None and isinstance(broken.cause, BrokenReference),
            "missing author should break referential integrity")

    fetched = crud(store, "Posts", "read").exec(post["id"]).result().single
    _expect(fetched["body"] == "hello", "read should return the stored post")
    _expect(_failure_path(crud(store, "Users", "read"), "") == ("checkEmpty",),
            "empty input should fail at checkEmpty")

    updated = crud(store, "Users", "update").exec(
        {"id": user["id"], "fields": {"name": "Ada L."}}).result().single
    _expect(updated["name"] == "Ada L.", "update should merge fields")

    crud(store, "Users", "delete").exec(user["id"]).result()
    gone = crud(store, "Users", "read").exec(user["id"]).exception()
    _expect(gone is not None and isinstance(gone.cause, MissingRecord),
            "deleted user should be missing")
    return "create/read/update/delete round-trip verified"


SCENARIOS = {
    "read-hierarchy": read_hierarchy,
    "public-endpoint": public_endpoint,
    "interleave": interleave,
    "decorator": decorator,
    "robot-traverse": robot_traverse,
    "crud-roundtrip": crud_roundtrip,
}


def run_scenario(name: str) -> str:
    if name not in SCENARIOS:
        raise KeyError(name)
    return SCENARIOS[name]()
