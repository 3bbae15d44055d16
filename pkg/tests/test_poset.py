import pytest
from hypothesis import given, strategies as st

from posetbundles.errors import CycleDetected, DuplicateElement, ParseError, UnknownElement
from posetbundles.fixtures import antichain, singleton
from posetbundles.poset import (
    build_poset,
    connected_components,
    down_set,
    dual,
    format_poset,
    fundamental_covering,
    is_connected,
    is_downward_directed,
    is_locally_constant,
    is_upward_directed,
    load_poset,
    maximal_elements,
    minimal_elements,
    parse_poset,
)


def test_chain_closure(chain3):
    assert chain3.leq("x", "z")
    assert not chain3.leq("z", "x")
    assert chain3.covers() == [("x", "y"), ("y", "z")]


def test_circ4_incomparable_tops(circ4):
    assert not circ4.comparable("A", "B")
    assert not circ4.comparable("p", "q")


def test_construction_errors():
    with pytest.raises(CycleDetected):
        build_poset(["x", "y"], [("x", "y"), ("y", "x")])
    with pytest.raises(DuplicateElement):
        build_poset(["x", "x"], [])
    with pytest.raises(UnknownElement):
        build_poset(["x"], [("x", "w")])


def test_dual(chain3, circ4):
    d = dual(chain3)
    assert d.leq("z", "x") and d.leq("y", "x")
    assert dual(d) == chain3
    assert sorted(minimal_elements(dual(circ4))) == ["A", "B"]
    assert sorted(maximal_elements(dual(circ4))) == ["p", "q"]
    a = antichain("a", "b")
    assert dual(a) == a


def test_down_sets(chain3, circ4):
    assert down_set(chain3, "y").members == {"x", "y"}
    assert down_set(circ4, "A").members == {"p", "q", "A"}
    assert down_set(circ4, "p").members == {"p"}
    with pytest.raises(UnknownElement):
        down_set(circ4, "Z")


def test_fundamental_covering(chain3, circ4):
    assert [d.members for d in fundamental_covering(chain3)] == [{"x"}, {"x", "y"}, {"x", "y", "z"}]
    # canonical order is codepoint order of the ids, so A and B come first
    cov = {d.anchor: d.members for d in fundamental_covering(circ4)}
    assert cov == {"p": {"p"}, "q": {"q"}, "A": {"p", "q", "A"}, "B": {"p", "q", "B"}}
    assert [d.members for d in fundamental_covering(singleton())] == [{"*"}]


def test_directedness(chain3, circ4, diamond):
    assert is_upward_directed(diamond)
    assert not is_upward_directed(circ4) and not is_downward_directed(circ4)
    assert is_upward_directed(chain3) and is_downward_directed(chain3)


def test_components(circ4):
    assert connected_components(circ4) == [["A", "B", "p", "q"]]
    two = build_poset(["a", "b", "c", "d"], [("a", "b"), ("c", "d")])
    assert len(connected_components(two)) == 2
    assert connected_components(build_poset([], [])) == []


def test_locally_constant(chain3, circ4):
    assert is_locally_constant(chain3, {"x": 0, "y": 0, "z": 0})
    assert not is_locally_constant(chain3, {"x": 0, "y": 1}, {"x", "y"})
    assert is_locally_constant(circ4, {"p": 0, "q": 1}, {"p", "q"})
    with pytest.raises(UnknownElement):
        is_locally_constant(chain3, {"x": 0}, {"x", "y"})


def test_text_format_roundtrip(circ4, tmp_path):
    text = format_poset(circ4)
    assert parse_poset(text) == circ4
    path = tmp_path / "circ4.poset"
    path.write_text("# comment\n" + text)
    assert load_poset(path) == circ4


def test_parse_errors_have_line_numbers():
    with pytest.raises(ParseError, match="line 3"):
        parse_poset("poset k\nelements a b\ncover a < c\n")
    with pytest.raises(ParseError, match="line 1"):
        parse_poset("posit k\n")


@st.composite
def random_posets(draw):
    n = draw(st.integers(1, 6))
    ids = [f"e{i}" for i in range(n)]
    # edges only from lower to higher index keep it acyclic
    covers = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=10))
    covers = [(ids[i], ids[j]) for i, j in covers if i < j]
    return build_poset(ids, covers)


@given(random_posets())
def test_order_axioms(p):
    for a in p:
        assert p.leq(a, a)
        for b in p:
            if p.leq(a, b) and p.leq(b, a):
                assert a == b
            for c in p:
                if p.leq(a, b) and p.leq(b, c):
                    assert p.leq(a, c)


@given(random_posets())
def test_down_set_monotone(p):
    for a in p:
        assert a in down_set(p, a)
        for b in p.below(a):
            assert down_set(p, b).members <= down_set(p, a).members


@given(random_posets())
def test_dual_involution(p):
    assert dual(dual(p)) == p
    assert is_upward_directed(p) == is_downward_directed(dual(p))


@given(random_posets(), st.data())
def test_locally_constant_iff_constant_on_components(p, data):
    f = {a: data.draw(st.integers(0, 1)) for a in p}
    comps = connected_components(p)
    by_comp = all(len({f[a] for a in c}) == 1 for c in comps)
    assert is_locally_constant(p, f) == by_comp
    assert is_connected(p) == (len(comps) == 1)
