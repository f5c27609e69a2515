"""
Canonical JSON documents for graphs of groups, isomorphisms, words and blow-up plans.

Every document is ``{"kind": ..., "version": 1, "payload": ...}`` written with
sorted keys, two-space indentation and a trailing newline, so the output of
:func:`dumps` is byte-stable.

Vertex groups are ``{"free": ["a", "b"]}`` (a bare integer rank is also
accepted and names the generators ``a, b, c, ...``) or
``{"pi1": {"gog": <gog payload>, "base": P0}}``.  Elements of a free group are
word strings such as ``"a^2 b^-1"``; elements of a ``π₁`` group are word
documents.  A word is ``{"start": v, "tokens": [...]}`` where a token is
``{"v": vertex, "w": element}`` or ``{"t": dart}``.
"""
from __future__ import annotations

import json
from typing import Any

from .core import FreeGroup, GraphOfGroups, PathWord, Pi1Group
from .foundations import SerreGraph, WordSyntaxError
from .isomorphisms import FreeImages, GogIso, GroupIso, IdentityIso, InducedIso, make_iso

VERSION = 1
KINDS = ("gog", "iso", "word", "plan")


class DocumentError(ValueError):
    """Malformed document; ``line``/``column`` point into the text when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line, self.column = line, column


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def document(kind: str, payload) -> dict:
    return {"kind": kind, "version": VERSION, "payload": payload}


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or doc.get("kind") not in KINDS or "payload" not in doc:
        raise DocumentError("expected an object with 'kind' (gog, iso, word or plan) and 'payload'")
    if doc.get("version", VERSION) != VERSION:
        raise DocumentError(f"unsupported version {doc.get('version')!r}")
    return doc


def _need(obj, key, what):
    if not isinstance(obj, dict) or key not in obj:
        raise DocumentError(f"{what}: missing '{key}'")
    return obj[key]


# -- groups and elements -----------------------------------------------------


def group_to_json(grp) -> dict:
    if isinstance(grp, FreeGroup):
        return {"free": list(grp.names)}
    if isinstance(grp, Pi1Group):
        return {"pi1": {"gog": gog_to_json(grp.gog), "base": grp.base}}
    raise TypeError(f"cannot serialize group {grp!r}")


def group_from_json(data):
    if isinstance(data, dict) and "free" in data:
        names = data["free"]
        if isinstance(names, int):
            if names < 0:
                raise DocumentError("negative rank")
            return FreeGroup(names)
        if not all(isinstance(n, str) and n for n in names):
            raise DocumentError("generator names must be non-empty strings")
        return FreeGroup(names)
    if isinstance(data, dict) and "pi1" in data:
        inner = data["pi1"]
        return Pi1Group(gog_from_json(_need(inner, "gog", "pi1 group")), _need(inner, "base", "pi1 group"))
    raise DocumentError(f"unknown vertex group {data!r}")


def elem_to_json(grp, x):
    if isinstance(grp, Pi1Group):
        return word_to_json(grp.gog, x)
    return grp.format(x)


def elem_from_json(grp, data):
    if isinstance(grp, Pi1Group):
        w = word_from_json(grp.gog, data)
        if w.start != grp.base or w.end != grp.base:
            raise DocumentError(f"element of π₁ must be a loop at {grp.base!r}")
        return w
    if not isinstance(data, str):
        raise DocumentError(f"expected a word string, got {data!r}")
    try:
        return grp.parse(data)
    except WordSyntaxError as exc:
        raise DocumentError(f"{exc} in {data!r}", 1, exc.position + 1) from None


# -- words -------------------------------------------------------------------


def word_to_json(G: GraphOfGroups, w: PathWord) -> dict:
    tokens = []
    for i, (v, x) in enumerate(zip(w.vertices, w.elements)):
        grp = G.group(v)
        if not grp.is_identity(x):
            tokens.append({"v": v, "w": elem_to_json(grp, x)})
        if i < w.length:
            tokens.append({"t": w.darts[i]})
    return {"start": w.start, "tokens": tokens}


def word_from_json(G: GraphOfGroups, data) -> PathWord:
    start = _need(data, "start", "word")
    if start not in G.graph.terminal.values() and start not in G.graph.vertices:
        raise DocumentError(f"unknown vertex {start!r}")
    w = G.identity(start)
    for tok in _need(data, "tokens", "word"):
        if "t" in tok:
            d = tok["t"]
            if d not in G.graph.terminal:
                raise DocumentError(f"unknown dart {d!r}")
            piece = G.letter(d)
        elif "v" in tok:
            v = tok["v"]
            if v not in G.vertex_groups:
                raise DocumentError(f"unknown vertex {v!r}")
            piece = G.elem(v, elem_from_json(G.group(v), _need(tok, "w", "vertex token")))
        else:
            raise DocumentError(f"bad token {tok!r}")
        try:
            w = G.concat(w, piece)
        except ValueError as exc:
            raise DocumentError(str(exc)) from None
    return w


# -- graphs of groups ----------------------------------------------------------


def gog_to_json(G: GraphOfGroups) -> dict:
    darts = []
    for d in sorted(G.graph.darts):
        entry: dict[str, Any] = {
            "name": d,
            "bar": G.graph.bar[d],
            "terminal": G.graph.terminal[d],
            "rank": G.rank(d),
        }
        if G.rank(d):
            entry["image"] = elem_to_json(G.group(G.graph.terminal[d]), G.image(d))
        darts.append(entry)
    return {
        "vertices": list(G.graph.vertices),
        "groups": {str(v): group_to_json(G.group(v)) for v in G.graph.vertices},
        "darts": darts,
    }


def gog_from_json(data) -> GraphOfGroups:
    """Build without validating, so that invalid inputs can still be reported on."""
    vertices = tuple(_need(data, "vertices", "gog"))
    groups_raw = _need(data, "groups", "gog")
    groups = {v: group_from_json(groups_raw[v]) for v in vertices if v in groups_raw}
    bar, terminal, ranks, raw_images = {}, {}, {}, {}
    for entry in _need(data, "darts", "gog"):
        d = _need(entry, "name", "dart")
        bar[d] = _need(entry, "bar", f"dart {d!r}")
        terminal[d] = _need(entry, "terminal", f"dart {d!r}")
        ranks[d] = entry.get("rank", 0)
        if "image" in entry:
            raw_images[d] = entry["image"]
    graph = SerreGraph(vertices, tuple(sorted(bar)), bar, terminal)
    maps = {}
    for d, raw in raw_images.items():
        t = terminal[d]
        if t not in groups:
            raise DocumentError(f"dart {d!r} ends at unknown vertex {t!r}")
        maps[d] = elem_from_json(groups[t], raw)
    return GraphOfGroups(graph, groups, ranks, maps)


# -- isomorphisms ------------------------------------------------------------


def vertex_iso_to_json(phi: GroupIso):
    if isinstance(phi, IdentityIso) or phi.is_identity():
        return {"identity": True}
    if isinstance(phi, FreeImages):
        return {"images": [elem_to_json(phi.target, x) for x in phi.images]}
    if isinstance(phi, InducedIso):
        return {"induced": iso_to_json(phi.local), "base": phi.base}
    raise TypeError(f"cannot serialize vertex isomorphism {phi!r}")


def vertex_iso_from_json(data, source, target):
    if data.get("identity"):
        return IdentityIso(source)
    if "images" in data:
        if not isinstance(source, FreeGroup):
            raise DocumentError("image lists need a free vertex group")
        return FreeImages(source, target, [elem_from_json(target, x) for x in data["images"]])
    if "induced" in data:
        local = iso_from_json(data["induced"])
        return InducedIso(local, data["base"], source, target)
    raise DocumentError(f"unknown vertex isomorphism {data!r}")


def iso_to_json(H: GogIso, locals_: dict | None = None) -> dict:
    G, C = H.domain, H.codomain
    out: dict[str, Any] = {
        "gog": gog_to_json(G),
        "vertex_map": {str(v): H.vertex_map[v] for v in G.graph.vertices},
        "dart_map": {d: H.dart_map[d] for d in G.graph.darts},
        "vertex_isos": {str(v): vertex_iso_to_json(H.vertex_isos[v]) for v in G.graph.vertices},
        "edge_signs": {d: H.edge_signs[d] for d in G.graph.darts},
        "corrections": {
            d: elem_to_json(C.group(C.graph.terminal[H.dart_map[d]]), H.corrections[d]) for d in G.graph.darts
        },
    }
    if C != G:
        out["codomain"] = gog_to_json(C)
    if locals_:
        out["locals"] = {str(v): local_to_json(*locals_[v]) for v in locals_}
    return out


def iso_from_json(data, with_locals: bool = False):
    G = gog_from_json(_need(data, "gog", "iso"))
    C = gog_from_json(data["codomain"]) if "codomain" in data else G
    vmap = dict(data.get("vertex_map") or {v: v for v in G.graph.vertices})
    dmap = dict(data.get("dart_map") or {d: d for d in G.graph.darts})
    vis = {}
    for v, raw in (data.get("vertex_isos") or {}).items():
        vis[v] = vertex_iso_from_json(raw, G.group(v), C.group(vmap[v]))
    for v in G.graph.vertices:
        vis.setdefault(v, IdentityIso(G.group(v)))
    signs = {d: 1 for d in G.graph.darts}
    signs.update(data.get("edge_signs") or {})
    corr = {}
    for d in G.graph.darts:
        grp = C.group(C.graph.terminal[dmap[d]])
        raw = (data.get("corrections") or {}).get(d)
        corr[d] = grp.identity() if raw is None else elem_from_json(grp, raw)
    if C == G and all(vmap[v] == v for v in vmap) and all(dmap[d] == d for d in dmap):
        H = make_iso(G, corr, vertex_isos=vis, edge_signs=signs)
    else:
        H = GogIso(G, C, vmap, dmap, vis, signs, corr)
    if not with_locals:
        return H
    locs = {v: local_from_json(raw, G.group(v)) for v, raw in (data.get("locals") or {}).items()}
    return H, locs


def local_to_json(D0: GogIso, G0: GraphOfGroups, theta0: FreeImages) -> dict:
    """Local blow-up data at an exceptional vertex: ``(D0, G0, θ0)``."""
    return {
        "iso": iso_to_json(D0),
        "base": theta0.target.base,
        "theta": [word_to_json(G0, x) for x in theta0.images],
    }


def local_from_json(data, vertex_group):
    D0 = iso_from_json(_need(data, "iso", "local"))
    G0 = D0.domain
    P = Pi1Group(G0, _need(data, "base", "local"))
    images = [word_from_json(G0, x) for x in _need(data, "theta", "local")]
    return D0, G0, FreeImages(vertex_group, P, images)


# -- plans -------------------------------------------------------------------


def plan_to_json(plan, G0: GraphOfGroups) -> dict:
    return {
        "V0": plan.V0,
        "entries": {
            str(E): {
                "vertex": p.vertex,
                "gamma": word_to_json(G0, p.gamma),
                "g": elem_to_json(G0.group(p.vertex), p.g),
            }
            for E, p in plan.entries.items()
        },
    }


def plan_from_json(data, G0: GraphOfGroups):
    from .surgery import BlowupPlan, PlanEntry

    entries = {}
    for E, raw in _need(data, "entries", "plan").items():
        v = _need(raw, "vertex", "plan entry")
        entries[E] = PlanEntry(v, word_from_json(G0, _need(raw, "gamma", "plan entry")),
                               elem_from_json(G0.group(v), _need(raw, "g", "plan entry")))
    return BlowupPlan(_need(data, "V0", "plan"), entries)


# -- convenience ---------------------------------------------------------------


def dump_gog(G: GraphOfGroups) -> str:
    return dumps(document("gog", gog_to_json(G)))


def dump_iso(H: GogIso, locals_: dict | None = None) -> str:
    return dumps(document("iso", iso_to_json(H, locals_)))


def dump_word(G: GraphOfGroups, w: PathWord) -> str:
    return dumps(document("word", word_to_json(G, w)))


def load_gog(text: str) -> GraphOfGroups:
    doc = loads(text)
    if doc["kind"] == "iso":
        return iso_from_json(doc["payload"]).domain
    if doc["kind"] != "gog":
        raise DocumentError(f"expected a gog document, got {doc['kind']!r}")
    return gog_from_json(doc["payload"])


def load_iso(text: str, with_locals: bool = False):
    doc = loads(text)
    if doc["kind"] != "iso":
        raise DocumentError(f"expected an iso document, got {doc['kind']!r}")
    return iso_from_json(doc["payload"], with_locals)
