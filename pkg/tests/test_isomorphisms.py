import random

import pytest

from cases import base_isos, commuting_square
from gogkit import fixtures as fx
from gogkit.core import Pi1Group, pi1_generators
from gogkit.foundations import FreeWord
from gogkit.isomorphisms import (
    FreeImages,
    IdentityIso,
    check_semi_conjugation,
    elementary_equivalence,
    free_images_is_iso,
    identity_iso,
    is_identity_iso,
    iso_apply,
    iso_compose,
    iso_equal,
    iso_invert,
    iso_validate,
    make_iso,
    nielsen_invert,
    twist_corrections,
)
from oracles import oracle_equal, oracle_is_trivial, random_connected_word


def test_validate_examples():
    assert iso_validate(fx.h_a()).ok
    assert iso_validate(fx.d_b()).ok
    bad = make_iso(fx.fix_b(), {"e": "c^-1"}, edge_signs={"e": -1})
    rep = iso_validate(bad)
    assert not rep.ok and any("'e'" in m for m in rep.issues)


def test_validate_rejects_non_bijective_vertex_map():
    G = fx.fix_b()
    H = make_iso(G)
    broken = type(H)(G, G, {"u": "u", "v": "u"}, H.dart_map, H.vertex_isos, H.edge_signs, H.corrections)
    assert not iso_validate(broken).ok


def test_validate_rejects_non_iso_vertex_map():
    G = fx.fix_b()
    F = G.group("u")
    phi = FreeImages(F, F, [F.parse("a"), F.parse("a")])
    assert not free_images_is_iso(phi)
    assert not iso_validate(make_iso(G, vertex_isos={"u": phi})).ok


def test_apply_examples():
    A, B = fx.fix_a(), fx.fix_b()
    assert iso_apply(fx.h_a(), A.word("t[e]")) == A.word("t[e] a^-1")
    assert iso_apply(fx.d_b(), B.word("t[e]")) == B.word("t[e] c")
    assert iso_apply(fx.d_b(), B.word("a b")) == B.word("a b")


def test_apply_matches_symbolic_formula():
    # H_*(t_e) = δ(ē) t_{H(e)} δ(e)⁻¹ for every dart of every fixture iso
    for G, H in base_isos():
        C = H.codomain
        for d in G.graph.darts:
            expected = C.mul(
                C.elem(C.graph.origin(H.dart_map[d]), H.corrections[G.bar(d)]),
                C.letter(H.dart_map[d]),
                C.elem(C.graph.terminal[H.dart_map[d]], C.group(C.graph.terminal[H.dart_map[d]]).inv(H.corrections[d])),
            )
            assert C.equal(iso_apply(H, G.letter(d)), expected)


def test_relations_hold_in_image():
    for G, H in base_isos():
        C = H.codomain
        for d in G.graph.darts:
            assert oracle_is_trivial(C, C.concat(iso_apply(H, G.letter(d)), iso_apply(H, G.letter(G.bar(d)))))


def test_reduced_length_preserved():
    rng = random.Random(21)
    isos = base_isos()
    for _ in range(200):
        G, H = rng.choice(isos)
        w = G.reduce(random_connected_word(G, rng, 5, 2))
        assert iso_apply(H, w).length == w.length


def test_compose_examples():
    HA = fx.h_a()
    A = HA.domain
    assert iso_equal(iso_compose(HA, identity_iso(A)), HA)
    assert iso_compose(HA, HA).corrections["e"] == A.group("v").parse("a^2")


def test_compose_pointwise_and_associative():
    rng = random.Random(22)
    B = fx.fix_b()
    H1 = fx.d_b()
    H2, H0 = twist_corrections(fx.d_b(), {"e": "d"})
    trip = (iso_invert(H0), H2, H0)
    left = iso_compose(iso_compose(trip[0], trip[1]), trip[2])
    right = iso_compose(trip[0], iso_compose(trip[1], trip[2]))
    for _ in range(100):
        w = random_connected_word(B, rng, 5, 2)
        assert oracle_equal(B, iso_apply(iso_compose(H1, H1), w), iso_apply(H1, iso_apply(H1, w)))
        assert B.equal(iso_apply(left, w), iso_apply(right, w))


def test_invert_examples():
    A = fx.fix_a()
    inv = iso_invert(fx.h_a())
    assert inv.corrections["e"] == A.group("v").parse("a^-1")
    assert iso_apply(inv, A.word("t[e]")) == A.word("t[e] a")
    assert is_identity_iso(iso_invert(identity_iso(A)))


def test_invert_roundtrip():
    rng = random.Random(23)
    B = fx.fix_b()
    H = twist_corrections(fx.d_b(), {"e": "d", "~e": "b^-1"})[1]
    Hi = iso_invert(H)
    assert is_identity_iso(iso_compose(Hi, H))
    for _ in range(100):
        w = random_connected_word(B, rng, 5, 2)
        assert B.equal(iso_apply(Hi, iso_apply(H, w)), w)


def test_invert_nontrivial_vertex_map():
    Gd, Hd, *_ = fx.fix_d_data()
    Hi = iso_invert(Hd)
    assert iso_validate(Hi).ok
    assert is_identity_iso(iso_compose(Hd, Hi))
    F = Gd.group("V0")
    images = nielsen_invert([F.parse("x"), F.parse("y x^-1")], 2)
    assert images == [F.parse("x"), F.parse("y x")]


def test_elementary_equivalence_examples():
    B = fx.fix_b()
    G1, H0 = elementary_equivalence(B, "e", B.group("v").identity())
    assert G1 is B and is_identity_iso(H0)
    d = B.group("v").parse("d")
    G1, H0 = elementary_equivalence(B, "e", d)
    assert G1.image("e") == B.group("v").parse("d^-1 c d")
    assert H0.corrections["e"] == d
    assert iso_validate(H0).ok
    with pytest.raises(ValueError):
        elementary_equivalence(B, "e", FreeWord(((7, 1),)))


def test_twist_corrections_examples():
    HA = fx.h_a()
    A = HA.domain
    H1, H0 = twist_corrections(HA, {})
    assert iso_equal(H1, HA)
    H1, _ = twist_corrections(HA, {"e": "a"})
    assert H1.corrections["e"] == A.group("v").parse("a")
    B = fx.fix_b()
    H1, H0 = twist_corrections(fx.d_b(), {"e": "d"})
    assert H1.corrections["e"] == B.group("v").parse("d^-1 c^-1 d")
    assert iso_validate(H1).ok and iso_validate(H0).ok
    conj = iso_compose(iso_compose(H0, fx.d_b()), iso_invert(H0))
    G1 = H1.domain
    for x in pi1_generators(G1, "u"):
        assert G1.equal(iso_apply(H1, x), iso_apply(conj, x))


def test_twist_corrections_semi_conjugation():
    rng = random.Random(24)
    for _ in range(40):
        H1, H0, H2 = commuting_square(rng)
        G = H1.domain
        v = G.graph.vertices[0]
        for x in pi1_generators(G, v):
            lhs = iso_apply(H0, iso_apply(H1, x))
            rhs = iso_apply(H2, iso_apply(H0, x))
            assert H2.domain.equal(lhs, rhs)


def test_semi_conjugation_examples():
    A = fx.fix_a()
    P = Pi1Group(A, "v")
    ident = IdentityIso(P)
    assert check_semi_conjugation(ident, fx.h_a(), fx.h_a())
    assert not check_semi_conjugation(ident, fx.h_a(), identity_iso(A))
    with pytest.raises(ValueError):
        check_semi_conjugation(ident, fx.h_a(), fx.h_a(), v="w")
