"""
``gog``: command-line front end over the JSON documents of :mod:`gogkit.serialize`.

Exit codes: 0 success / true, 1 false / violation, 2 usage, parse or I/O error.
Pass ``-`` as a file name to read standard input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import serialize as ser
from .core import format_word, gog_validate
from .dehn import (
    TwistKind,
    classify_twist,
    efficiency_check,
    subdivide_to_classical,
    trivial_edge_dehn,
    twistors,
)
from .foundations import WordSyntaxError
from .hconj import h_reduce, is_h_zero
from .isomorphisms import check_semi_conjugation, iso_apply, iso_compose, iso_invert, iso_validate
from .surgery import (
    BlowupError,
    NotLocallyZero,
    blowup,
    blowup_plan,
    partial_dehn_blowup,
    quotient_gog,
    quotient_iso,
    roundtrip,
)


class CliError(Exception):
    """Anything that should end the command with exit code 2."""


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout
        self.color = os.environ.get("GOG_COLOR", "1") != "0" and self.stream.isatty()

    def verdict(self, ok: bool, text: str) -> None:
        mark = "ok" if ok else "FAIL"
        if self.color:
            mark = ("\033[32m" if ok else "\033[31m") + mark + "\033[0m"
        self.stream.write(f"{mark}: {text}\n")

    def doc(self, kind: str, payload, text: str | None = None) -> None:
        if self.fmt == "text" and text is not None:
            self.stream.write(text.rstrip("\n") + "\n")
        else:
            self.stream.write(ser.dumps(ser.document(kind, payload)))

    def report(self, payload: dict, ok: bool, text: str) -> None:
        if self.fmt == "text":
            self.verdict(ok, text)
        else:
            self.stream.write(json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n")


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None


def _load_iso(path: str, locals_: bool = False):
    res = ser.load_iso(_read(path), with_locals=locals_)
    H = res[0] if locals_ else res
    rep = gog_validate(H.domain)
    rep.extend(iso_validate(H))
    if not rep.ok:
        raise CliError(f"{path}: invalid isomorphism: " + "; ".join(rep.issues))
    return res


def _load_gog(path: str):
    G = ser.load_gog(_read(path))
    rep = gog_validate(G)
    if not rep.ok:
        raise CliError(f"{path}: invalid graph of groups: " + "; ".join(rep.issues))
    return G


def _word(G, text: str, start=None):
    text = text.strip()
    if text.startswith("{"):
        doc = json.loads(text)
        return ser.word_from_json(G, doc.get("payload", doc))
    return G.word(text, start=start)


def _split_subgraph(G, spec: str):
    names = [s.strip() for s in spec.split(",") if s.strip()]
    vs = [n for n in names if n in G.graph.vertices]
    ds = [n for n in names if n in G.graph.terminal]
    unknown = set(names) - set(vs) - set(ds)
    if unknown:
        raise CliError(f"unknown names in subgraph: {sorted(unknown)}")
    return vs, ds


# -- commands -----------------------------------------------------------------


def cmd_validate(args, out: Output) -> int:
    doc = ser.loads(_read(args.file))
    if doc["kind"] == "gog":
        rep = gog_validate(ser.gog_from_json(doc["payload"]))
    elif doc["kind"] == "iso":
        H = ser.iso_from_json(doc["payload"])
        rep = gog_validate(H.domain)
        if rep.ok:
            rep.extend(iso_validate(H))
    else:
        raise CliError(f"cannot validate a {doc['kind']} document")
    out.report({"valid": rep.ok, "issues": rep.issues}, rep.ok,
               "valid" if rep.ok else "invalid: " + "; ".join(rep.issues))
    return 0 if rep.ok else 1


def cmd_reduce(args, out: Output) -> int:
    G = _load_gog(args.file)
    w = G.reduce(_word(G, args.word, args.start))
    out.doc("word", ser.word_to_json(G, w), format_word(G, w))
    return 0


def cmd_eq(args, out: Output) -> int:
    G = _load_gog(args.file)
    w1, w2 = _word(G, args.word, args.start), _word(G, args.other, args.start)
    same = w1.start == w2.start and w1.end == w2.end and G.equal(w1, w2)
    out.report({"equal": same}, same, "equal" if same else "not equal")
    return 0 if same else 1


def cmd_apply(args, out: Output) -> int:
    H = _load_iso(args.iso)
    if args.inverse:
        H = iso_invert(H)
    w = iso_apply(H, _word(H.domain, args.word, args.start))
    out.doc("word", ser.word_to_json(H.codomain, w), format_word(H.codomain, w))
    return 0


def cmd_compose(args, out: Output) -> int:
    H2, H1 = _load_iso(args.second), _load_iso(args.first)
    H = iso_compose(H2, H1)
    out.doc("iso", ser.iso_to_json(H))
    return 0


def cmd_invert(args, out: Output) -> int:
    H = iso_invert(_load_iso(args.iso))
    out.doc("iso", ser.iso_to_json(H))
    return 0


def cmd_dehn(args, out: Output) -> int:
    H = _load_iso(args.iso)
    if args.action == "classify":
        c = classify_twist(H)
        payload = {"kind": c.kind.value, "reason": c.reason, "non_classical": list(c.non_classical)}
        if c.data:
            payload["z"] = c.data.z
        ok = c.kind is not TwistKind.NOT_DEHN
        out.report(payload, ok, c.kind.value + (f" ({c.reason})" if c.reason else ""))
        return 0 if ok else 1
    if args.action == "twistors":
        data = twistors(H)
        out.report({"gamma": data.gamma, "z": data.z}, True,
                   " ".join(f"z[{d}]={k}" for d, k in sorted(data.z.items())))
        return 0
    if args.action == "subdivide":
        sub = subdivide_to_classical(H)
        out.doc("iso", ser.iso_to_json(sub.twist))
        return 0
    rep = efficiency_check(H)
    out.report({"efficient": rep.efficient, "failed": rep.failed(), "details": rep.details}, rep.efficient,
               "efficient" if rep.efficient else "not efficient: " + ", ".join(rep.failed()))
    return 0 if rep.efficient else 1


def cmd_hzero(args, out: Output) -> int:
    H, locs = _load_iso(args.iso, locals_=True)
    G = H.domain
    w = _word(G, args.word, args.start)
    local = locs.get(w.start) if not args.no_locals else None
    if local is not None:
        if w.length:
            raise CliError("words at an exceptional vertex must be vertex elements")
        D0, G0, theta0 = local
        H, G, w = D0, G0, theta0(w.elements[0])
    if args.inverse:
        H = iso_invert(H)
    zw = is_h_zero(H, w)
    if zw is None:
        hr = h_reduce(H, w)
        out.report({"h_zero": False, "h_length": hr.h_length, "reduced": ser.word_to_json(G, hr.reduced)},
                   False, f"not H-zero (H-length {hr.h_length}, reduced {format_word(G, hr.reduced)})")
        return 1
    payload = {
        "h_zero": True,
        "vertex": zw.vertex,
        "gamma": ser.word_to_json(G, zw.gamma),
        "g": ser.elem_to_json(G.group(zw.vertex), zw.g),
        "conjugator": ser.word_to_json(G, zw.conjugator),
    }
    out.report(payload, True,
               f"H-zero at {zw.vertex}: gamma={format_word(G, zw.gamma)} g={G.group(zw.vertex).format(zw.g)}")
    return 0


def cmd_quotient(args, out: Output) -> int:
    if args.iso:
        H = _load_iso(args.iso)
        G = H.domain
    else:
        H, G = None, _load_gog(args.file)
    vs, ds = _split_subgraph(G, args.subgraph)
    base = args.base or sorted(vs, key=str)[0]
    Q = quotient_gog(G, vs, base, darts=ds or None)
    if not Q.verify_theta():
        raise CliError("quotient map failed its generator check")
    if H is None:
        out.doc("gog", ser.gog_to_json(Q.quotient))
        return 0
    Hbar = quotient_iso(H, Q)
    if not check_semi_conjugation(Q.theta, Hbar, H):
        raise CliError("quotient isomorphism failed the semi-conjugation check")
    out.doc("iso", ser.iso_to_json(Hbar))
    return 0


def _blowup_inputs(args):
    H, locs = _load_iso(args.iso, locals_=True)
    V0 = args.vertex or (sorted(locs, key=str)[0] if locs else None)
    if V0 not in locs:
        raise CliError("the isomorphism document carries no local data for the blow-up vertex")
    return H, V0, locs[V0]


def cmd_plan(args, out: Output) -> int:
    H, V0, (D0, G0, theta0) = _blowup_inputs(args)
    try:
        plan = blowup_plan(H.domain, H, V0, G0, D0, theta0)
    except BlowupError as exc:
        out.report({"error": type(exc).__name__, "dart": exc.dart, "vertex": exc.vertex}, False, str(exc))
        return 1
    out.doc("plan", ser.plan_to_json(plan, G0))
    return 0


def cmd_blowup(args, out: Output) -> int:
    H, V0, (D0, G0, theta0) = _blowup_inputs(args)
    try:
        if args.plan:
            doc = ser.loads(_read(args.plan))
            plan = ser.plan_from_json(doc["payload"], G0)
        else:
            plan = blowup_plan(H.domain, H, V0, G0, D0, theta0)
        res = blowup(H.domain, H, V0, G0, D0, theta0, plan)
    except BlowupError as exc:
        out.report({"error": type(exc).__name__, "dart": exc.dart, "vertex": exc.vertex}, False, str(exc))
        return 1
    if not (iso_validate(res.iso).ok and check_semi_conjugation(res.theta, H, res.iso)):
        raise CliError("blow-up result failed verification")
    out.doc("iso", ser.iso_to_json(res.iso))
    return 0


def cmd_partial_blowup(args, out: Output) -> int:
    H, locs = _load_iso(args.iso, locals_=True)
    try:
        res = partial_dehn_blowup(H, locs)
    except NotLocallyZero as exc:
        out.report({"error": "NotLocallyZero", "dart": exc.dart, "vertex": exc.vertex}, False, str(exc))
        return 1
    verdict = trivial_edge_dehn(res.iso)
    if args.format == "text":
        n = len(res.gog.graph.vertices)
        out.verdict(verdict.ok, f"{res.kind.value} twist on {n} vert{'ex' if n == 1 else 'ices'}")
    else:
        out.doc("iso", ser.iso_to_json(res.iso))
    return 0


def cmd_roundtrip(args, out: Output) -> int:
    G = _load_gog(args.gog)
    H = _load_iso(args.iso)
    if H.domain != G:
        raise CliError("the isomorphism is not defined on the given graph of groups")
    vs, ds = _split_subgraph(G, args.subgraph)
    base = args.base or sorted(vs, key=str)[0]
    try:
        ok, res, _ = roundtrip(G, H, vs, base, darts=ds or None)
    except BlowupError as exc:
        out.report({"roundtrip": False, "error": str(exc)}, False, str(exc))
        return 1
    out.report({"roundtrip": ok, "semi_conjugation": ok}, ok,
               "quotient then blow-up reproduces the input" if ok else "roundtrip mismatch")
    return 0 if ok else 1


# -- argument parsing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gog", description="Graphs of groups, their isomorphisms and surgery.")
    p.add_argument("--format", choices=("json", "text"), default="json")
    sub = p.add_subparsers(dest="command", required=True)

    def word_opts(sp, other=False):
        sp.add_argument("--word", required=True, help="word text such as 'a t[e] c^-1', or a JSON word")
        if other:
            sp.add_argument("--other", required=True)
        sp.add_argument("--start", help="start vertex when it cannot be inferred")

    sp = sub.add_parser("validate", help="validate a gog or iso document")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("reduce", help="reduce a path word")
    sp.add_argument("file")
    word_opts(sp)
    sp.set_defaults(fn=cmd_reduce)

    sp = sub.add_parser("eq", help="decide equality of two path words")
    sp.add_argument("file")
    word_opts(sp, other=True)
    sp.set_defaults(fn=cmd_eq)

    sp = sub.add_parser("apply", help="apply an isomorphism to a word")
    sp.add_argument("iso")
    word_opts(sp)
    sp.add_argument("--inverse", action="store_true")
    sp.set_defaults(fn=cmd_apply)

    sp = sub.add_parser("compose", help="compose two isomorphisms (second after first)")
    sp.add_argument("second")
    sp.add_argument("first")
    sp.set_defaults(fn=cmd_compose)

    sp = sub.add_parser("invert", help="invert an isomorphism")
    sp.add_argument("iso")
    sp.set_defaults(fn=cmd_invert)

    sp = sub.add_parser("dehn", help="Dehn twist tools")
    sp.add_argument("action", choices=("classify", "twistors", "subdivide", "efficient"))
    sp.add_argument("iso")
    sp.set_defaults(fn=cmd_dehn)

    sp = sub.add_parser("hzero", help="decide whether a word is H-zero")
    sp.add_argument("iso")
    word_opts(sp)
    sp.add_argument("--inverse", action="store_true", help="test against the inverse isomorphism")
    sp.add_argument("--no-locals", action="store_true", help="ignore local data for exceptional vertices")
    sp.set_defaults(fn=cmd_hzero)

    sp = sub.add_parser("quotient", help="contract a connected subgraph")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--iso", help="also push an isomorphism down to the quotient")
    sp.add_argument("--subgraph", required=True, help="comma-separated vertices and darts")
    sp.add_argument("--base")
    sp.set_defaults(fn=cmd_quotient)

    for name, fn in (("plan", cmd_plan), ("blowup", cmd_blowup)):
        sp = sub.add_parser(name, help=f"{name} at a vertex carrying local data")
        sp.add_argument("iso")
        sp.add_argument("--vertex")
        if name == "blowup":
            sp.add_argument("--plan")
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("partial-blowup", help="blow a partial Dehn twist up to a Dehn twist")
    sp.add_argument("iso")
    sp.set_defaults(fn=cmd_partial_blowup)

    sp = sub.add_parser("roundtrip", help="quotient then blow up again and compare")
    sp.add_argument("gog")
    sp.add_argument("iso")
    sp.add_argument("--subgraph", required=True)
    sp.add_argument("--base")
    sp.set_defaults(fn=cmd_roundtrip)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.command == "quotient" and not (args.file or args.iso):
        print("gog: quotient needs a gog file or --iso", file=sys.stderr)
        return 2
    out = Output(args.format)
    try:
        return args.fn(args, out)
    except (CliError, ser.DocumentError, WordSyntaxError) as exc:
        print(f"gog: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, TypeError) as exc:
        print(f"gog: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
