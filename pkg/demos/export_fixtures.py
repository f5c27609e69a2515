"""Write the fixture graphs of groups and isomorphisms as JSON documents.

Usage: python demos/export_fixtures.py [OUT_DIR]   (default: tests/data)
"""
import sys
from pathlib import Path

from gogkit import fixtures as fx
from gogkit.serialize import dump_gog, dump_iso


def documents() -> dict:
    docs = {
        "FIX-A.gog": dump_gog(fx.fix_a()),
        "FIX-B.gog": dump_gog(fx.fix_b()),
        "FIX-C.gog": dump_gog(fx.fix_c()),
        "FIX-D.gog": dump_gog(fx.fix_d()),
        "FIX-A.iso": dump_iso(fx.h_a()),
        "FIX-B.iso": dump_iso(fx.d_b()),
        "FIX-C.iso": dump_iso(fx.h_c()),
    }
    for tag, delta in (("", "x^2"), ("-xy", "x y")):
        Gbar, Hbar, G0, H0, theta0 = fx.fix_d_data(delta)
        docs[f"FIX-D{tag}.iso"] = dump_iso(Hbar, {"V0": (H0, G0, theta0)})
    return docs


def main(out="tests/data"):
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in documents().items():
        (out / f"{name}.json").write_text(text, encoding="utf-8")
        print("wrote", out / f"{name}.json")


if __name__ == "__main__":
    main(*sys.argv[1:])
