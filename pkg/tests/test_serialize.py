import json
import random

import pytest

from gogkit import fixtures as fx
from gogkit.core import FreeGroup, GraphOfGroups
from gogkit.foundations import SerreGraph
from gogkit.isomorphisms import FreeImages, iso_invert, make_iso
from gogkit.serialize import (
    DocumentError,
    document,
    dump_gog,
    dump_iso,
    dump_word,
    dumps,
    iso_to_json,
    load_gog,
    load_iso,
    loads,
    plan_from_json,
    plan_to_json,
    word_from_json,
)
from gogkit.surgery import blowup_plan, quotient_gog, quotient_iso
from oracles import random_connected_word, random_vertex_element

NAMES = "abcdefgh"


def random_gog(rng) -> GraphOfGroups:
    n = rng.randint(1, 3)
    verts = [f"v{i}" for i in range(n)]
    pool = iter(NAMES)
    groups = {v: FreeGroup([next(pool) for _ in range(rng.randint(0, 2))]) for v in verts}
    edges = [(f"e{i}", verts[i], verts[i + 1]) for i in range(n - 1)]
    edges += [(f"l{i}", rng.choice(verts), rng.choice(verts)) for i in range(rng.randint(0, 2))]
    graph = SerreGraph.from_edges(verts, edges)
    ranks, maps = {}, {}
    for name, o, t in edges:
        rk = 1 if groups[o].rank and groups[t].rank and rng.random() < 0.6 else 0
        ranks[name] = ranks[graph.bar[name]] = rk
        if rk:
            for d, v in ((name, t), (graph.bar[name], o)):
                x = random_vertex_element(groups[v], rng)
                maps[d] = x if x.letters else groups[v].gen(0)
    return GraphOfGroups(graph, groups, ranks, maps)


def random_iso(rng, G):
    corr = {d: random_vertex_element(G.group(G.graph.terminal[d]), rng) for d in G.graph.darts}
    vis = {}
    for v in G.graph.vertices:
        F = G.group(v)
        if F.rank == 2 and rng.random() < 0.5:
            vis[v] = FreeImages(F, F, [F.gen(0), F.mul(F.gen(1), F.gen(0))])
    return make_iso(G, corr, vertex_isos=vis)


def test_dumps_is_canonical():
    text = dumps(document("word", {"tokens": [], "start": "v"}))
    assert text.endswith("\n")
    assert text.index('"kind"') < text.index('"payload"') < text.index('"version"')
    assert dumps(json.loads(text)) == text


def test_gog_roundtrip_random():
    rng = random.Random(61)
    for _ in range(200):
        G = random_gog(rng)
        text = dump_gog(G)
        back = load_gog(text)
        assert back == G
        assert dump_gog(back) == text


def test_iso_roundtrip_random():
    rng = random.Random(62)
    for _ in range(200):
        G = random_gog(rng)
        H = random_iso(rng, G)
        text = dump_iso(H)
        back = load_iso(text)
        assert back.domain == G and back.corrections == H.corrections
        assert dump_iso(back) == text


def test_word_roundtrip_random():
    rng = random.Random(63)
    for _ in range(200):
        G = random_gog(rng)
        if not G.graph.darts:
            w = G.elem("v0", random_vertex_element(G.group("v0"), rng))
        else:
            w = G.reduce(random_connected_word(G, rng, 4, 2))
        text = dump_word(G, w)
        assert word_from_json(G, loads(text)["payload"]) == w


def test_nested_group_roundtrip():
    C = fx.fix_c()
    Q = quotient_gog(C, ["v"], "v")
    Hbar = quotient_iso(fx.h_c(), Q)
    text = dump_iso(Hbar)
    back = load_iso(text)
    assert back.domain == Q.quotient
    assert dump_iso(back) == text
    w = Q.quotient.mul(Q.quotient.letter("e"), Q.quotient.elem("V0", C.word("t[f] c")))
    assert word_from_json(Q.quotient, loads(dump_word(Q.quotient, w))["payload"]) == w


def test_iso_with_locals_and_codomain():
    Gbar, Hbar, G0, H0, theta0 = fx.fix_d_data()
    text = dump_iso(Hbar, {"V0": (H0, G0, theta0)})
    H, locs = load_iso(text, with_locals=True)
    D0, G0b, th = locs["V0"]
    assert G0b == G0 and th.images == theta0.images
    assert dump_iso(H, {"V0": (D0, G0b, th)}) == text
    assert load_gog(text) == Gbar
    inv = iso_invert(Hbar)
    assert dump_iso(load_iso(dump_iso(inv))) == dump_iso(inv)


def test_plan_roundtrip():
    Gbar, Hbar, G0, H0, theta0 = fx.fix_d_data()
    plan = blowup_plan(Gbar, Hbar, "V0", G0, H0, theta0)
    data = json.loads(dumps(document("plan", plan_to_json(plan, G0))))["payload"]
    back = plan_from_json(data, G0)
    assert back.V0 == plan.V0 and back.entries == plan.entries


def test_free_rank_shorthand():
    doc = document("gog", {"vertices": ["v"], "groups": {"v": {"free": 2}}, "darts": []})
    G = load_gog(dumps(doc))
    assert G.group("v").rank == 2


def test_errors_carry_positions():
    with pytest.raises(DocumentError) as exc:
        loads('{"kind": "gog",\n  "payload": }')
    assert exc.value.line == 2 and exc.value.column is not None
    with pytest.raises(DocumentError):
        loads('{"kind": "nope", "payload": {}}')
    with pytest.raises(DocumentError):
        loads('{"kind": "gog", "version": 9, "payload": {}}')
    with pytest.raises(DocumentError):
        load_iso(dump_gog(fx.fix_a()))
    bad = json.loads(dump_iso(fx.h_a()))
    bad["payload"]["corrections"]["e"] = "a z"
    with pytest.raises(DocumentError) as exc:
        load_iso(dumps(bad))
    assert exc.value.column == 3


def test_goldens_reproduce():
    from pathlib import Path

    data = Path(__file__).parent / "data"
    assert (data / "FIX-A.gog.json").read_text() == dump_gog(fx.fix_a())
    assert (data / "FIX-B.iso.json").read_text() == dump_iso(fx.d_b())
    assert iso_to_json(fx.h_a())["corrections"] == {"e": "a", "~e": "1"}
