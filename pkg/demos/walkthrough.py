"""A short tour: reduce words, apply a twist, H-reduce, then quotient and blow up.

Usage: python demos/walkthrough.py
"""
from gogkit import fixtures as fx
from gogkit import (
    blowup,
    blowup_plan,
    classify_twist,
    format_word,
    h_reduce,
    iso_apply,
    partial_dehn_blowup,
    quotient_gog,
    quotient_iso,
)
from gogkit.surgery import roundtrip


def main():
    B = fx.fix_b()
    w = B.word("t[e] c^2 t[~e] b")
    print("reduce:", format_word(B, w), "->", format_word(B, B.reduce(w)))

    D = fx.d_b()
    c = classify_twist(D)
    print("twist kind:", c.kind.value, "twistors:", c.data.z)
    print("D(t[e]) =", format_word(B, iso_apply(D, B.word("t[e]"))))

    HA = fx.h_a()
    A = HA.domain
    hr = h_reduce(HA, A.word("t[e] a t[~e]"))
    print("H-reduce:", format_word(A, hr.input), "->", format_word(A, hr.reduced),
          "via", format_word(A, hr.witness), "h_length", hr.h_length)

    C, HC = fx.fix_c(), fx.h_c()
    Q = quotient_gog(C, ["v"], "v")
    Hbar = quotient_iso(HC, Q)
    # the induced map acts nontrivially on the V0 group, so it is only a partial twist
    print("quotient vertices:", Q.quotient.graph.vertices, "kind:", classify_twist(Hbar).kind.value)
    ok, res, _ = roundtrip(C, HC, ["v"], "v")
    print("roundtrip reproduces the input:", ok)

    Gbar, Hd, G0, H0, theta0 = fx.fix_d_data()
    plan = blowup_plan(Gbar, Hd, "V0", G0, H0, theta0)
    res = blowup(Gbar, Hd, "V0", G0, H0, theta0, plan)
    print("blow-up darts:", sorted(res.gog.graph.darts))
    out = partial_dehn_blowup(Hd, {"V0": (H0, G0, theta0)})
    print("partial twist blows up to a", out.kind.value, "twist")


if __name__ == "__main__":
    main()
