import random
from dataclasses import replace

import pytest

from cases import fix_c_variant
from gogkit import fixtures as fx
from gogkit.core import Pi1Group, gog_validate, pi1_rank
from gogkit.dehn import TwistKind, classify_twist, trivial_edge_dehn
from gogkit.hconj import is_h_zero
from gogkit.isomorphisms import (
    IdentityIso,
    check_semi_conjugation,
    identity_iso,
    is_identity_iso,
    iso_apply,
    iso_invert,
    iso_validate,
    make_iso,
    restrict_iso,
    twist_corrections,
)
from gogkit.surgery import (
    NotLocallyZero,
    blowup,
    blowup_plan,
    partial_dehn_blowup,
    partial_dehn_detect,
    quotient_gog,
    quotient_iso,
    quotient_iso_multi,
    quotient_multi,
    roundtrip,
)


# -- quotient ---------------------------------------------------------------------------


def test_quotient_single_vertex_is_trivial():
    C = fx.fix_c()
    Q = quotient_gog(C, ["u"], "u")
    assert Q.quotient is C and Q.sub is None
    w = C.word("t[e] t[f] t[~e]")
    assert Q.theta(w) == w
    H = fx.h_c()
    assert quotient_iso(H, Q) is H


def test_quotient_fix_c():
    C = fx.fix_c()
    Q = quotient_gog(C, ["v"], "v")
    Gbar = Q.quotient
    assert Gbar.graph.vertices == ("V0", "u")
    assert set(Gbar.graph.darts) == {"e", "~e"}
    assert Gbar.rank("e") == 0
    P = Gbar.group("V0")
    assert isinstance(P, Pi1Group) and P.base == "v"
    assert P.generators() == [C.word("c"), C.word("t[f]")]
    assert Q.gammas["e"] == C.identity("v")
    assert gog_validate(Gbar).ok
    # θ: t_E ↦ t_e, fixing c and t_f
    tE = Gbar.letter("e")
    assert C.equal(Q.theta(Gbar.mul(tE, Gbar.elem("V0", C.word("t[f]")), Gbar.inv(tE))), C.word("t[e] t[f] t[~e]"))
    assert Q.verify_theta()


def test_quotient_rejects_bad_input():
    C = fx.fix_c()
    with pytest.raises(ValueError):
        quotient_gog(C, ["v"], "u")
    with pytest.raises(ValueError):
        quotient_gog(C, ["v"], "v", gammas={"e": C.word("a")})
    with pytest.raises(ValueError):
        quotient_gog(C, ["v", "f"], "v")
    ch = fx.chain3()
    with pytest.raises(ValueError):
        quotient_gog(ch, ["p", "s"], "p")


def test_quotient_iso_examples():
    C = fx.fix_c()
    Q = quotient_gog(C, ["v"], "v")
    assert is_identity_iso(quotient_iso(identity_iso(C), Q))
    Hbar = quotient_iso(fx.h_c(), Q)
    assert iso_validate(Hbar).ok
    assert Q.quotient.equal(Q.quotient.elem("V0", Hbar.corrections["e"]), Q.quotient.elem("V0", C.word("c")))
    local = Hbar.vertex_isos["V0"]
    assert C.equal(local(C.word("t[f]")), C.word("t[f] c^-1"))
    assert check_semi_conjugation(Q.theta, Hbar, fx.h_c())
    with pytest.raises(ValueError):
        quotient_iso(replace(fx.h_c(), vertex_map={"u": "v", "v": "u"}), Q)


def test_quotient_uniqueness_witness():
    # a different connector γ'_e gives the quotient iso obtained by twisting with w_E = γ γ'⁻¹
    C = fx.fix_c()
    H = fx.h_c()
    Q1 = quotient_gog(C, ["v"], "v")
    alt = C.word("t[f] c")
    Q2 = quotient_gog(C, ["v"], "v", gammas={"e": alt})
    H1, H2 = quotient_iso(H, Q1), quotient_iso(H, Q2)
    w = C.mul(Q1.gammas["e"], C.inv(alt))
    H1t, _ = twist_corrections(H1, {"e": w})
    assert Q2.quotient.group("V0").equal(H1t.corrections["e"], H2.corrections["e"])
    assert H1t.corrections["~e"] == H2.corrections["~e"]
    assert check_semi_conjugation(Q2.theta, H2, H)


def test_quotient_multi_examples():
    ch = fx.chain3()
    Q = quotient_multi(ch, [])
    assert Q.quotient is ch
    single = quotient_multi(ch, [(["s"], "s")])
    assert single.quotient == quotient_gog(ch, ["s"], "s").quotient
    Q = quotient_multi(ch, [(["s"], "s"), (["p"], "p")], base="q")
    G2 = Q.quotient
    assert G2.graph.vertices == ("V0", "V1", "q")
    assert pi1_rank(ch) == 5
    assert Q.verify_theta()
    H = make_iso(ch, {"lp": "a", "ls": "c^2", "g": "b"})
    Hq = quotient_iso_multi(H, Q)
    assert iso_validate(Hq).ok
    assert check_semi_conjugation(Q.theta, Hq, H)
    with pytest.raises(ValueError):
        quotient_multi(ch, [(["p", "q"], "p"), (["q"], "q")])


# -- blow-up -----------------------------------------------------------------------------


def test_blowup_plan_fix_d():
    Gbar, Hbar, G0, H0, theta0 = fx.fix_d_data()
    plan = blowup_plan(Gbar, Hbar, "V0", G0, H0, theta0)
    entry = plan["E"]
    assert entry.vertex == "v" and entry.gamma == G0.identity("v")
    assert entry.g == G0.group("v").parse("a^2")
    assert plan["~E"].g == G0.group("v").identity()


def test_blowup_plan_not_locally_zero():
    Gbar, Hbar, G0, H0, theta0 = fx.fix_d_data("x y")
    assert is_h_zero(iso_invert(H0), theta0(Gbar.group("V0").parse("x y"))) is None
    with pytest.raises(NotLocallyZero) as exc:
        blowup_plan(Gbar, Hbar, "V0", G0, H0, theta0)
    assert exc.value.dart == "E" and exc.value.vertex == "V0"


def test_blowup_plan_trivial_correction():
    Gbar, Hbar, G0, H0, theta0 = fx.fix_d_data("1")
    plan = blowup_plan(Gbar, Hbar, "V0", G0, H0, theta0)
    assert plan["E"].gamma == G0.identity("v") and plan["E"].g == G0.group("v").identity()


def test_blowup_plan_checks_local_model():
    Gbar, Hbar, G0, H0, theta0 = fx.fix_d_data()
    with pytest.raises(ValueError):
        blowup_plan(Gbar, Hbar, "V0", G0, identity_iso(G0), theta0)


def test_blowup_fix_d():
    Gbar, Hbar, G0, H0, theta0 = fx.fix_d_data()
    plan = blowup_plan(Gbar, Hbar, "V0", G0, H0, theta0)
    res = blowup(Gbar, Hbar, "V0", G0, H0, theta0, plan)
    G = res.gog
    assert G.graph.vertices == ("v",)
    assert set(G.graph.darts) == {"E", "~E", "e", "~e"}
    assert G.rank("E") == G.rank("e") == 0
    a = G.group("v").parse("a")
    assert res.iso.corrections["E"] == a ** 2 and res.iso.corrections["e"] == a
    assert pi1_rank(G) == 3
    assert iso_validate(res.iso).ok
    assert check_semi_conjugation(res.theta, Hbar, res.iso)


def test_blowup_rejects_isolated_vertex():
    G0 = fx.fix_a()
    single = fx.make_gog({"V0": "x"}, [])
    H = identity_iso(single)
    theta0 = IdentityIso(Pi1Group(G0, "v"))
    with pytest.raises(ValueError):
        blowup(single, H, "V0", G0, fx.h_a(), theta0, None)


def test_roundtrip_fix_c_and_variants():
    ok, res, Q = roundtrip(fx.fix_c(), fx.h_c(), ["v"], "v", darts=["f"])
    assert ok
    rng = random.Random(51)
    for _ in range(10):
        G, H, sub = fix_c_variant(rng)
        ok, res, _ = roundtrip(G, H, ["v"], "v", darts=sub[1:])
        assert ok


def _rank_one_chain():
    return fx.make_gog(
        {"u": "ab", "v": "cd", "w": "p"},
        [("e", "u", "v", 1), ("g", "w", "v", 1)],
        {"e": "c", "~e": "a", "g": "d", "~g": "p"},
    )


@pytest.mark.parametrize("corr", [{}, {"e": "c^-1"}, {"g": "d^2"}])
@pytest.mark.parametrize("P0", ["u", "v"])
def test_roundtrip_rank_one_edges(corr, P0):
    G = _rank_one_chain()
    ok, res, _ = roundtrip(G, make_iso(G, corr), ["u", "v"], P0)
    assert ok


def test_roundtrip_rank_one_other_connector():
    # the sweep picks γ = t_e c instead of t_e: the result is the original twisted at g by c
    G = _rank_one_chain()
    H = make_iso(G, {"e": "c", "g": "d^-1", "~e": "a^2"})
    ok, res, Q = roundtrip(G, H, ["u", "v"], "u")
    assert not ok
    assert iso_validate(res.iso).ok
    Hbar = quotient_iso(H, Q)
    assert check_semi_conjugation(res.theta, Hbar, res.iso)
    G0 = Q.sub
    H0 = replace(restrict_iso(H, G0.graph.vertices, G0.graph.darts), domain=G0, codomain=G0)
    plan = blowup_plan(Q.quotient, Hbar, Q.V0, G0, H0, IdentityIso(Hbar.domain.group(Q.V0)))
    diff = G0.mul(G0.inv(Q.gammas["g"]), plan["g"].gamma)
    assert diff.length == 0
    H1, _ = twist_corrections(H, {"g": diff.elements[0]})
    assert H1.domain == res.gog
    assert all(H1.corrections[d] == res.iso.corrections[d] for d in G.graph.darts)


# -- partial Dehn twists ---------------------------------------------------------------------


def test_partial_dehn_detect_examples():
    Gbar, Hbar, *_ = fx.fix_d_data()
    assert partial_dehn_detect(Hbar, {"V0"})
    assert partial_dehn_detect(fx.d_b(), set())
    assert not partial_dehn_detect(Hbar, set())
    # exceptional vertices may not carry nontrivial incident edge groups
    assert not partial_dehn_detect(fx.d_b(), {"v"})


def test_partial_dehn_blowup_fix_d():
    Gbar, Hbar, G0, H0, theta0 = fx.fix_d_data()
    res = partial_dehn_blowup(Hbar, {"V0": (H0, G0, theta0)})
    assert res.kind is TwistKind.GENERAL
    assert trivial_edge_dehn(res.iso).ok
    a = res.gog.group("v").parse("a")
    assert res.iso.corrections["E"] == a ** 2 and res.iso.corrections["e"] == a
    assert check_semi_conjugation(res.theta, Hbar, res.iso)
    # every correction that was blown up was locally zero
    assert is_h_zero(iso_invert(H0), theta0(Hbar.corrections["E"])) is not None


def test_partial_dehn_blowup_rejects():
    Gbar, Hbar, G0, H0, theta0 = fx.fix_d_data("x y")
    with pytest.raises(NotLocallyZero) as exc:
        partial_dehn_blowup(Hbar, {"V0": (H0, G0, theta0)})
    assert (exc.value.vertex, exc.value.dart) == ("V0", "E")


def test_partial_dehn_blowup_empty():
    D = fx.d_b()
    res = partial_dehn_blowup(D, {})
    assert res.iso is D and res.kind is TwistKind.CLASSICAL
    B = fx.fix_b()
    w = B.word("a t[e] d t[~e]")
    assert res.theta(w) == w


def test_partial_dehn_blowup_semi_conjugates_on_words():
    rng = random.Random(52)
    Gbar, Hbar, G0, H0, theta0 = fx.fix_d_data()
    res = partial_dehn_blowup(Hbar, {"V0": (H0, G0, theta0)})
    G = res.gog
    F = Gbar.group("V0")
    for _ in range(30):
        x = F.parse(rng.choice(["x", "y", "x y^-1", "y^2 x"]))
        w = Gbar.mul(Gbar.elem("V0", x), Gbar.letter("E"))
        assert G.equal(res.theta(iso_apply(Hbar, w)), iso_apply(res.iso, res.theta(w)))
    assert classify_twist(res.iso).kind is TwistKind.GENERAL
