import random

import pytest

from posetbundles import bundles as bd
from posetbundles.cohomology import bundle_cocycle, classify_cocycles, gamma, reconstruct_bundle, upsilon
from posetbundles.errors import BadAnchor, EmptyFibre, InvalidBundle, NotConnected, NotOpen
from posetbundles.groups import cyclic, perm_from_cycles
from posetbundles.simplicial import edge, path, simplices


def test_product_bundle_valid(chain3, circ4, s3):
    assert bd.validate_net_bundle(bd.product_bundle(chain3, "ab")) == []
    assert bd.validate_principal(bd.product_principal(circ4, s3)) == []
    with pytest.raises(EmptyFibre):
        bd.product_bundle(chain3, [])


def test_point_labels():
    assert bd.split_point(bd.point_label("A", 3)) == ("A", 3)


def test_broken_net_structure(circ4, z2):
    pb = bd.product_principal(circ4, z2)
    J = {k: dict(v) for k, v in pb.J.items()}
    # circ4 has no strict 2-chains, so swapping one J map gives a valid twisted bundle
    m = J[("A", "p")]
    J[("A", "p")] = {k: m[other] for k, other in zip(sorted(m), reversed(sorted(m)))}
    twisted = bd.PrincipalNetBundle(circ4, pb.fibres, J, z2, pb.action)
    assert bd.validate_principal(twisted) == []
    # a non-bijective map is rejected
    J[("A", "p")] = {k: "A#0" for k in m}
    with pytest.raises(InvalidBundle):
        bd.check_bundle(bd.NetBundle(circ4, pb.fibres, J))


def test_chain_composition_checked(chain3, z2):
    pb = bd.principal_from_left_mults(chain3, z2, {("z", "x"): 1})
    assert any("J" in r or "compose" in r for r in bd.validate_net_bundle(pb))
    ok = bd.principal_from_left_mults(chain3, z2, {("z", "x"): 1, ("y", "x"): 1})
    assert bd.validate_net_bundle(ok) == []


def test_total_order(chain3):
    b = bd.product_bundle(chain3, "ab")
    E = bd.total_order(b)
    assert len(E) == 6
    assert E.leq("x#0", "z#0") and not E.leq("x#0", "z#1")


def test_restrict(circ4, z2):
    pb = bd.product_principal(circ4, z2)
    sub = bd.restrict(pb, {"p", "q", "A"})
    assert sorted(sub.base.elements) == ["A", "p", "q"]
    assert bd.validate_principal(sub) == []
    with pytest.raises(NotOpen):
        bd.restrict(pb, {"A"})
    with pytest.raises(NotConnected):
        bd.restrict(pb, {"p", "q"})


def test_flat_connection_of_product(circ4, s3):
    pb = bd.product_principal(circ4, s3)
    U = bd.flat_connection(pb)
    assert bd.validate_connection(U) == []
    assert bd.connection_is_flat(U)
    for b in simplices(circ4, 1):
        assert all(bd.split_point(U(b)[pt])[1] == bd.split_point(pt)[1] for pt in U(b))
    assert bd.bundle_holonomy(pb, U, "p#0").order == 1


def test_parallel_transport_along_loop(circ4, z2):
    z = classify_cocycles(circ4, z2)[1]
    pb, theta = reconstruct_bundle(z)
    U = bd.flat_connection(pb)
    assert bd.bundle_holonomy(pb, U, pb.fibres["p"][0]).order == 2
    loop = path(edge("A", "A", "p"), edge("A", "q", "A"), edge("B", "B", "q"), edge("B", "p", "B"))
    m = bd.parallel_transport(U, loop)
    # around the circle the nontrivial class swaps the two points
    assert all(m[pt] != pt for pt in pb.fibres["p"])
    assert sorted(m.values()) == sorted(pb.fibres["p"])


def test_trivialization_and_transitions(circ4, z2):
    z = classify_cocycles(circ4, z2)[1]
    pb, theta = reconstruct_bundle(z)
    for a in circ4:
        for o in theta.domain(a):
            for g in z2:
                pt = theta.chart(a, o, g)
                assert pb.proj[pt] == o
                assert theta.chart_inv(a, pt) == (o, g)
    tf = bd.transition_functions(theta)
    # only A and B, or p and q, meet in a star
    assert set(tf) >= {("A", "A"), ("A", "p"), ("p", "q")}
    assert ("A", "B") not in tf
    # the two minimal charts disagree on exactly one of the tops
    assert sorted(tf[("q", "p")].values()) == [0, 1]


def test_bad_anchor(circ4, z2):
    pb = bd.product_principal(circ4, z2)
    with pytest.raises(BadAnchor):
        bd.local_trivialization(pb, {a: "p#0" for a in circ4})
    with pytest.raises(BadAnchor):
        bd.local_trivialization(pb, {"p": "p#0"})


def test_sections(circ4, z2):
    triv = bd.product_principal(circ4, z2)
    s = bd.global_section(triv)
    assert s is not None and bd.validate_section(triv, s) == []
    theta = bd.local_trivialization(triv)
    for a in circ4:
        assert bd.representative_is_locally_constant(s, theta, a)
    f = bd.morphism_from_section(triv, s)
    assert bd.validate_morphism(f, triv, triv) == []
    z = classify_cocycles(circ4, z2)[1]
    mobius, _ = reconstruct_bundle(z)
    assert bd.global_section(mobius) is None
    local = bd.section_from_point(mobius, "A", mobius.fibres["A"][0])
    assert local.domain == {"A", "p", "q"}
    assert bd.validate_section(mobius, local) == []


def test_morphism_checks(chain3, s3):
    pb = bd.product_principal(chain3, s3)
    ident = {pt: pt for pt in pb.points()}
    assert bd.validate_morphism(ident, pb, pb) == []
    # left multiplication by a fixed element everywhere is a principal automorphism
    g = perm_from_cycles(3, (1, 2))
    left = {}
    for pt in pb.points():
        o, i = bd.split_point(pt)
        left[pt] = bd.point_label(o, s3.index(s3.mul(g, s3.elements[i])))
    assert bd.validate_morphism(left, pb, pb) == []
    assert bd.compose_morphisms(left, left) == ident
    # right multiplication is not equivariant in a nonabelian group
    right = {}
    for pt in pb.points():
        o, i = bd.split_point(pt)
        right[pt] = bd.point_label(o, s3.index(s3.mul(s3.elements[i], g)))
    assert any("equivariant" in r for r in bd.validate_morphism(right, pb, pb))


def test_gamma_of_flat_connection_is_bundle_cocycle(chain3, circ4, s3, z2):
    rng = random.Random(3)
    for p, G in ((chain3, s3), (circ4, z2), (circ4, cyclic(3))):
        for z in classify_cocycles(p, G):
            pb, theta = reconstruct_bundle(z)
            assert gamma(theta, bd.flat_connection(pb)) == bundle_cocycle(theta) == z
            U = upsilon(theta, z)
            assert bd.validate_connection(U) == [] and bd.connection_is_flat(U)
            anchors = {a: rng.choice(pb.fibres[a]) for a in p}
            theta2 = bd.local_trivialization(pb, anchors)
            assert bd.validate_connection(upsilon(theta2, bundle_cocycle(theta2))) == []
