import random

import pytest
from hypothesis import given, strategies as st

from oracles import count_monotone_maps
from posetbundles.errors import DegreeOutOfRange, EndpointMismatch, IndexOutOfRange, NotConnected, PatternMismatch
from posetbundles.fixtures import FIXTURES, antichain, singleton
from posetbundles.groups import cyclic, enumerate_homomorphisms, evaluate_word
from posetbundles.poset import build_poset
from posetbundles.simplicial import (
    CONTRACT,
    EXPAND,
    HomotopyMoves,
    compose_paths,
    degenerate,
    edge,
    face,
    faces,
    homotopy_step,
    is_monotone,
    is_nerve,
    loop_of_edge,
    nerve_inclusion,
    nerve_pair,
    nerve_simplices,
    path,
    pi1_presentation,
    reverse,
    reverse_path,
    simplices,
    skeleton_edges,
)


def test_counts_degree_one(chain3, circ4):
    # frozen from the brute-force oracle in test_counts_match_oracle
    assert len(simplices(chain3, 1)) == 14
    assert len(simplices(circ4, 1)) == 20
    assert len(simplices(singleton(), 2)) == 1


@pytest.mark.parametrize("name", sorted(FIXTURES))
@pytest.mark.parametrize("n", [0, 1, 2])
def test_counts_match_oracle(name, n):
    p = FIXTURES[name]()
    assert len(simplices(p, n)) == count_monotone_maps(p, n)


def test_degree_three_small_oracle():
    two = build_poset(["a", "b"], [("a", "b")])
    assert len(simplices(two, 3)) == count_monotone_maps(two, 3)
    assert len(simplices(antichain("u", "v"), 3)) == 2


def test_degree_range(chain3):
    with pytest.raises(DegreeOutOfRange):
        simplices(chain3, 4)
    with pytest.raises(DegreeOutOfRange):
        simplices(chain3, -1)


def test_one_simplex_layout():
    b = edge("o", "a", "t")
    assert (b.support, b.face0, b.face1) == ("o", "a", "t")
    assert face(b, 0).values == ("a",) and face(b, 1).values == ("t",)
    assert str(b) == "(o; a, t)"


def test_face_errors(circ4):
    b = simplices(circ4, 1)[0]
    with pytest.raises(IndexOutOfRange):
        face(b, 2)
    with pytest.raises(IndexOutOfRange):
        face(simplices(circ4, 0)[0], 0)


@pytest.mark.parametrize("n", [2, 3])
def test_simplicial_identities(chain3, n):
    for x in simplices(chain3, n)[:400]:
        for j in range(n + 1):
            for i in range(j):
                assert face(face(x, j), i) == face(face(x, i), j - 1)


def test_faces_shorthand(circ4):
    c = simplices(circ4, 2)[5]
    assert faces(c, 0, 1) == face(face(c, 1), 0)
    assert face(face(c, 0), 0) == face(face(c, 1), 0)


def test_faces_are_simplices(circ4):
    ones = set(simplices(circ4, 1))
    for c in simplices(circ4, 2):
        for i in range(3):
            d = face(c, i)
            assert d in ones and circ4.leq(d.support, c.support)


def test_degenerate_and_reverse(chain3, circ4):
    assert degenerate(chain3, "x") == edge("x", "x", "x")
    assert reverse(degenerate(circ4, "A")) == degenerate(circ4, "A")
    assert reverse(edge("A", "p", "q")) == edge("A", "q", "p")
    for b in simplices(circ4, 1):
        assert reverse(reverse(b)) == b


def test_nerve(chain3, circ4):
    assert len(nerve_simplices(chain3, 1)) == 6
    assert len(nerve_simplices(circ4, 1)) == 8
    assert nerve_inclusion(nerve_pair("y", "x")) == edge("y", "y", "x")
    with pytest.raises(DegreeOutOfRange):
        nerve_simplices(chain3, 7)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_nerve_image_is_support_equals_face0(name):
    p = FIXTURES[name]()
    image = {nerve_inclusion(x) for x in nerve_simplices(p, 1)}
    assert image == {b for b in simplices(p, 1) if b.support == b.face0}
    for n in (1, 2):
        for x in nerve_simplices(p, n):
            y = nerve_inclusion(x)
            assert is_monotone(p, y) and is_nerve(p, y)
            assert y.support == x.chain[-1]


def test_paths(circ4):
    b1 = edge("A", "A", "p")
    b2 = edge("A", "q", "A")
    q = compose_paths(path(b2), path(b1))
    assert q.source == "p" and q.target == "q"
    assert reverse_path(reverse_path(q)) == q
    assert reverse_path(q).source == "q"
    with pytest.raises(EndpointMismatch):
        compose_paths(path(b1), path(b1))
    triv = path(degenerate(circ4, "p"))
    assert len(compose_paths(path(b1), triv)) == 2


def test_homotopy_step_roundtrip(circ4):
    c = next(x for x in simplices(circ4, 2) if len({face(x, i) for i in range(3)}) == 3)
    q = path(face(c, 1))
    expanded = homotopy_step(q, 0, c, EXPAND)
    assert expanded.edges == (face(c, 2), face(c, 0))
    assert homotopy_step(expanded, 0, c, CONTRACT) == q
    with pytest.raises(PatternMismatch):
        homotopy_step(q, 0, c, CONTRACT)
    with pytest.raises(PatternMismatch):
        homotopy_step(path(face(c, 0)), 0, c, EXPAND)


def test_presentation_chain3(chain3):
    pres = pi1_presentation(chain3, "x")
    for G in (cyclic(2), cyclic(3)):
        assert len(enumerate_homomorphisms(pres, G)) == 1


def test_presentation_circ4(circ4):
    pres = pi1_presentation(circ4, "p")
    assert len(skeleton_edges(circ4)) == 6
    assert [len(enumerate_homomorphisms(pres, cyclic(k))) for k in (2, 3, 4)] == [2, 3, 4]


def test_presentation_disconnected():
    with pytest.raises(NotConnected):
        pi1_presentation(antichain("a", "b"), "a")


def test_tree_edges_have_empty_words(circ4):
    pres = pi1_presentation(circ4, "p")
    for x, q in pres.tree_paths.items():
        assert q.source == "p" and q.target == x
        assert pres.path_word(q) == ()
    for b in simplices(circ4, 1):
        if b.face0 == b.face1:
            assert pres.word(b) == ()


def test_loop_of_generator_is_nontrivial(circ4):
    pres = pi1_presentation(circ4, "p")
    chis = enumerate_homomorphisms(pres, cyclic(2))
    for k, b in enumerate(pres.generators):
        loop = loop_of_edge(pres, b)
        assert loop.source == loop.target == "p"
        w = pres.path_word(loop)
        if any(evaluate_word(cyclic(2), w, chi) != 0 for chi in chis):
            break
    else:
        pytest.fail("no generator loop is detected by a hom to Z2")
    assert pres.path_word(loop_of_edge(pres, degenerate(circ4, "A"))) == ()


@given(st.integers(0, 10**6))
def test_random_homotopies_preserve_words(seed):
    rng = random.Random(seed)
    p = FIXTURES["circ4"]()
    pres = pi1_presentation(p, "p")
    moves = HomotopyMoves(p)
    by_src = {}
    for b in simplices(p, 1):
        by_src.setdefault(b.face1, []).append(b)
    edges = []
    x = "p"
    for _ in range(rng.randint(1, 5)):
        b = rng.choice(by_src[x])
        edges.append(b)
        x = b.face0
    q = path(*edges)
    r = moves.random_walk(q, 5, rng)
    assert (r.source, r.target) == (q.source, q.target)
    # words agree in every abelian quotient we can test quickly
    for chi in enumerate_homomorphisms(pres, cyclic(4)):
        G = cyclic(4)
        assert evaluate_word(G, pres.path_word(q), chi) == evaluate_word(G, pres.path_word(r), chi)
