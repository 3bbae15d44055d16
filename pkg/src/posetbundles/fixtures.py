"""The canonical small posets used throughout the tests and the CLI.

The same posets ship as text files under ``fixtures/`` at the repository
root.
"""

from .poset import Poset, build_poset


def chain3() -> Poset:
    return build_poset(["x", "y", "z"], [("x", "y"), ("y", "z")], name="chain3")


def vee() -> Poset:
    # one minimal element below two incomparable maximal ones
    return build_poset(["o", "a", "b"], [("o", "a"), ("o", "b")], name="vee")


def circ4() -> Poset:
    # the four point pseudocircle, a finite model of S^1
    return build_poset(
        ["p", "q", "A", "B"],
        [("p", "A"), ("q", "A"), ("p", "B"), ("q", "B")],
        name="circ4",
    )


def diamond() -> Poset:
    return build_poset(
        ["bot", "a", "b", "top"],
        [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")],
        name="diamond",
    )


def singleton() -> Poset:
    return build_poset(["*"], [], name="point")


def antichain(*ids) -> Poset:
    return build_poset(list(ids), [], name="antichain")


FIXTURES = {
    "chain3": chain3,
    "vee": vee,
    "circ4": circ4,
    "diamond": diamond,
}
