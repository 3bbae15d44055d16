import pytest

from posetbundles import cech
from posetbundles.cohomology import classify_cocycles, trivial_cochain
from posetbundles.errors import InvalidCech, NotACover, NotCocycle
from posetbundles.fixtures import FIXTURES
from posetbundles.groups import cyclic, symmetric
from posetbundles.poset import dual
from posetbundles.simplicial import edge


def test_overlaps_on_dual(circ4):
    L = dual(circ4)
    # in the opposite order, stars of A and B meet in {p, q}
    assert cech.overlap(L, "A", "B") == {"p", "q"}
    assert cech.overlap(L, "p", "q") == frozenset()
    assert ("p", "q") not in cech.overlap_pairs(L)


def test_to_cech_formula(circ4, z2):
    z = classify_cocycles(circ4, z2)[1]
    xi = cech.to_cech(z)
    assert xi.poset == dual(circ4)
    assert cech.cech_violations(xi) == []
    for (a, at), m in xi.xi.items():
        for o, g in m.items():
            assert g == z2.mul(z(edge(a, a, o)), z2.inv(z(edge(at, at, o))))


def test_to_cech_needs_cocycle(circ4, z2):
    with pytest.raises(NotCocycle):
        cech.to_cech(trivial_cochain(circ4, z2).with_values({edge("A", "p", "q"): 1, edge("A", "q", "p"): 1}))


def test_invalid_cech(circ4, z2):
    xi = cech.to_cech(trivial_cochain(circ4, z2))
    xi.xi[("A", "B")]["p"] = 1
    assert cech.cech_violations(xi)
    with pytest.raises(InvalidCech):
        cech.to_net(xi)
    with pytest.raises(InvalidCech):
        xi("A", "p", "q")


@pytest.mark.parametrize("name", sorted(FIXTURES))
@pytest.mark.parametrize("G", [cyclic(2), cyclic(3), symmetric(3)], ids=str)
def test_double_circle(name, G):
    p = FIXTURES[name]()
    for z in classify_cocycles(p, G):
        assert cech.verify_double_circle(z)
        assert cech.to_net(cech.to_cech(z)).poset == dual(p)


def test_cech_classes(circ4, chain3):
    for k in (2, 3):
        assert len(cech.cech_classes(dual(circ4), cyclic(k))) == k
    assert len(cech.cech_classes(dual(chain3), cyclic(2))) == 1


def test_cech_equivalence_constants(circ4, z2):
    a, b = classify_cocycles(circ4, z2)
    xa, xb = cech.to_cech(a), cech.to_cech(b)
    assert cech.cech_equivalent(xa, xb) is None
    u = cech.cech_equivalent(xb, xb)
    assert u is not None and set(u) == set(circ4.elements)


def test_point_model(circ4, diamond):
    assert cech.points_of(circ4, "A") == {"p", "q"}
    assert cech.points_of(circ4, "p") == {"p"}
    # p and q share no open below both A and B
    assert cech.point_components(circ4, "A", "B") == [["p"], ["q"]]
    assert cech.point_components(circ4, "A", "A") == [["p", "q"]]


def test_cover_checks(circ4):
    assert cech.check_cover(circ4, ["B", "A"]) == ("A", "B")
    with pytest.raises(NotACover):
        cech.check_cover(circ4, ["p"])


@pytest.mark.parametrize("k", [2, 3, 4, 6])
def test_lc_class_counts(circ4, k):
    assert len(cech.lc_classes(circ4, ["A", "B"], cyclic(k))) == k


def test_lc_from_cech(circ4, z2):
    a, b = classify_cocycles(circ4, z2)
    ca = cech.to_locally_constant(cech.to_cech(a), ["A", "B"])
    cb = cech.to_locally_constant(cech.to_cech(b), ["A", "B"])
    assert cech.lc_violations(ca) == [] and cech.lc_violations(cb) == []
    assert cech.lc_equivalent(ca, cb) is None
    v = cech.lc_equivalent(cb, cb)
    assert v is not None and cech.lc_witness_violations(cb, cb, v) == []


def test_cover_change(circ4, s3):
    for z in classify_cocycles(circ4, s3):
        xi = cech.to_cech(z)
        c1 = cech.to_locally_constant(xi, ["A", "B"])
        c2 = cech.to_locally_constant(xi, ["A", "B", "p"])
        v = cech.cover_change_witness(xi, ["A", "B"], ["A", "B", "p"])
        assert cech.lc_witness_violations(c1, c2, v) == []
        assert cech.lc_equivalent(c1, c2) is not None
