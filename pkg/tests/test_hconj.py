import random

import pytest

from gogkit import fixtures as fx
from gogkit.hconj import (
    backward_op,
    describe,
    elementary_op,
    h_conjugate_bounded,
    h_length,
    h_reduce,
    is_h_reduced,
    is_h_zero,
    twisted,
)
from gogkit.isomorphisms import identity_iso, iso_apply, iso_invert
from oracles import random_connected_word


@pytest.fixture
def fa():
    return fx.fix_a(), fx.h_a()


def _closed(G, H, rng, max_length=4):
    for _ in range(200):
        v = rng.choice(G.graph.vertices)
        w = random_connected_word(G, rng, max_length, 2, start=v)
        if w.end == H.vertex_map[v]:
            return w
    return G.identity(G.graph.vertices[0])


def _isos():
    Gd, Hd, *_ = fx.fix_d_data()
    return [fx.h_a(), iso_invert(fx.h_a()), fx.d_b(), fx.h_c(), iso_invert(fx.h_c()), Hd]


def test_elementary_op_examples(fa):
    A, HA = fa
    assert elementary_op(HA, A.word("t[e]")) == A.word("t[e] a^-1")
    assert elementary_op(HA, A.word("t[e] a t[~e]")) == A.identity("v")
    with pytest.raises(ValueError):
        elementary_op(HA, A.word("a"))


def test_elementary_op_rejects_open_words():
    B = fx.fix_b()
    with pytest.raises(ValueError):
        elementary_op(fx.d_b(), B.word("t[e]"))


def test_is_h_reduced_examples(fa):
    A, HA = fa
    assert is_h_reduced(HA, A.word("a^3"))
    assert is_h_reduced(HA, A.word("t[e]"))
    assert not is_h_reduced(HA, A.word("t[e] a t[~e]"))


def test_h_reduce_examples(fa):
    A, HA = fa
    hr = h_reduce(HA, A.word("a^2"))
    assert (hr.reduced, hr.witness, hr.h_length) == (A.word("a^2"), A.identity("v"), 0)
    hr = h_reduce(HA, A.word("t[e] a t[~e]"))
    assert (hr.reduced, hr.witness, hr.h_length) == (A.identity("v"), A.word("t[e]"), 0)
    hr = h_reduce(HA, A.word("t[e]"))
    assert hr.reduced.length == 1 and hr.witness == A.identity("v") and hr.h_length == 1
    assert "h_length=1" in describe(HA, hr)


def test_h_length_examples(fa):
    A, HA = fa
    assert h_length(HA, A.word("a^5")) == 0
    assert h_length(HA, A.word("t[e]")) == 1
    assert h_length(HA, A.word("t[e] a t[~e]")) == 0


def test_elementary_op_is_one_step_conjugation():
    rng = random.Random(41)
    for _ in range(150):
        H = rng.choice(_isos())
        G = H.domain
        w = G.reduce(_closed(G, H, rng))
        if not w.length:
            continue
        out = elementary_op(H, w)
        assert out.length in (w.length, w.length - 2)
        first = G.concat(G.elem(w.start, w.elements[0]), G.letter(w.darts[0]))
        assert G.equal(twisted(H, first, w), out)


def test_backward_op_preserves_h_length():
    rng = random.Random(42)
    for _ in range(100):
        H = rng.choice(_isos())
        G = H.domain
        w = G.reduce(_closed(G, H, rng))
        if not w.length:
            continue
        assert h_length(H, backward_op(H, w)) == h_length(H, w)


def test_reductions_verify_and_are_h_reduced():
    rng = random.Random(43)
    for _ in range(200):
        H = rng.choice(_isos())
        G = H.domain
        hr = h_reduce(H, _closed(G, H, rng))
        assert hr.verify(H)
        assert is_h_reduced(H, hr.reduced)
        assert hr.h_length == hr.reduced.length
        assert hr.h_length <= hr.input.length
        assert (hr.h_length == hr.input.length) == is_h_reduced(H, hr.input)


def test_h_length_is_a_conjugacy_invariant():
    rng = random.Random(44)
    for _ in range(150):
        H = rng.choice(_isos())
        G = H.domain
        w = _closed(G, H, rng)
        u = random_connected_word(G, rng, 3, 2, start=w.start)
        # u⁻¹ w H_*(u) runs from end(u) to H(end(u))
        assert h_length(H, twisted(H, u, w)) == h_length(H, w)


def test_is_h_zero_examples(fa):
    A, HA = fa
    z = is_h_zero(HA, A.word("a^2"))
    assert z.gamma == A.identity("v") and z.g == A.group("v").parse("a^2")
    Gd, Hd, G0, H0, theta0 = fx.fix_d_data()
    x, y = Gd.group("V0").generators()
    w = theta0(Gd.group("V0").mul(x, y))
    assert w == G0.word("a t[e]")
    assert is_h_zero(iso_invert(H0), w) is None
    w = A.word("t[e] a t[~e]")
    z = is_h_zero(HA, w)
    assert z.conjugator == A.word("t[e]")
    assert z.gamma == iso_apply(HA, z.conjugator) == A.word("t[e] a^-1")
    assert z.g == A.group("v").identity()
    # w = (H⁻¹)_*(gamma) · g · gamma⁻¹
    back = iso_apply(iso_invert(HA), z.gamma)
    assert A.equal(A.mul(back, A.elem("v", z.g), A.inv(z.gamma)), w)


def test_zero_witnesses_verify():
    rng = random.Random(45)
    zeros = 0
    for _ in range(200):
        H = rng.choice(_isos())
        G = H.domain
        v = rng.choice(G.graph.vertices)
        u = random_connected_word(G, rng, 3, 2, start=v)
        g = G.elem(u.end, G.group(u.end).ball(1)[-1])
        w = G.mul(u, g, G.inv(iso_apply(H, u)))
        z = is_h_zero(H, w)
        assert z is not None and z.verify(H, G.reduce(w))
        zeros += 1
    assert zeros == 200


def test_identity_iso_h_length_is_cyclic_length():
    B = fx.fix_b()
    ident = identity_iso(B)
    # ordinary conjugacy: t_e d t_~e is conjugate into a vertex group
    assert h_length(ident, B.word("t[e] d t[~e]")) == 0
    assert h_length(ident, B.word("t[e] d t[~e] b")) == 2


def test_bounded_conjugacy_examples(fa):
    A, HA = fa
    w = A.word("t[e] a")
    assert h_conjugate_bounded(HA, w, w, 0) == A.identity("v")
    c = h_conjugate_bounded(HA, A.identity("v"), A.word("t[e] a t[~e]"), 1)
    assert c is not None and c.length == 1
    assert A.equal(A.mul(c, A.word("t[e] a t[~e]"), A.inv(iso_apply(HA, c))), A.identity("v"))
    assert h_conjugate_bounded(HA, A.word("t[e]"), A.word("a"), 2, radius=1) is None
