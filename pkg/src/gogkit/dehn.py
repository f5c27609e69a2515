"""
Dehn twists of graphs of groups.

A twist is an automorphism that is the identity on the graph, the vertex
groups and the edge groups, so it is determined by its correction terms.
It is *classical* when every ``δ(e)`` is the image of an edge-group
element ``γ_e``; since edge groups here are ``1`` or ``Z``, ``γ_e`` is an
integer and so are the twistors ``z_e = γ_ē - γ_e`` (written additively).
It is *general* when ``δ(e)`` only centralizes ``f_e(G_e)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import gcd

from .core import FreeGroup, GraphOfGroups, pi1_rank
from .foundations import FreeWord, Orientation, SerreGraph, fw_conjugacy, fw_power_of, fw_primitive_root, inverse_name
from .isomorphisms import (
    GogIso,
    IdentityIso,
    WordMap,
    group_iso_equal,
    iso_apply,
    make_iso,
)


class TwistKind(Enum):
    CLASSICAL = "classical"
    GENERAL = "general"
    NOT_DEHN = "not-a-dehn-twist"


@dataclass(frozen=True)
class TwistData:
    """``gamma[e]`` and ``z[e] = gamma[ē] - gamma[e]`` as exponents of the edge generator."""

    gamma: dict
    z: dict


@dataclass(frozen=True)
class Classification:
    kind: TwistKind
    data: TwistData | None = None
    reason: str = ""
    non_classical: tuple = ()

    @property
    def is_classical(self) -> bool:
        return self.kind is TwistKind.CLASSICAL


def _twist_shape(H: GogIso) -> str:
    """Empty string when ``H`` is the identity on graph, vertex and edge groups."""
    if H.domain is not H.codomain and H.domain != H.codomain:
        return "not an automorphism"
    if not H.graph_is_identity():
        return "graph map is not the identity"
    for d, s in H.edge_signs.items():
        if s != 1:
            return f"edge isomorphism on {d!r} is not the identity"
    for v, phi in H.vertex_isos.items():
        if not (phi.is_identity() or group_iso_equal(phi, IdentityIso(phi.source))):
            return f"vertex isomorphism at {v!r} is not the identity"
    return ""


def classify_twist(H: GogIso) -> Classification:
    reason = _twist_shape(H)
    if reason:
        return Classification(TwistKind.NOT_DEHN, reason=reason)
    G = H.domain
    gamma, loose = {}, []
    for d in G.graph.darts:
        grp = G.group(G.graph.terminal[d])
        delta = H.corrections[d]
        k = G.edge_power(d, delta)
        if k is not None:
            gamma[d] = k
            continue
        if G.rank(d) == 1 and not grp.commute(delta, G.image(d)):
            return Classification(
                TwistKind.NOT_DEHN, reason=f"δ({d}) does not centralize the image of its edge group"
            )
        loose.append(d)
    if loose:
        return Classification(TwistKind.GENERAL, non_classical=tuple(sorted(loose)))
    z = {d: gamma[G.bar(d)] - gamma[d] for d in G.graph.darts}
    return Classification(TwistKind.CLASSICAL, TwistData(gamma, z))


def twistors(D: GogIso) -> TwistData:
    """Twistors of a classical twist; also checks ``D_*(t_e) = t_e f_e(z_e)``."""
    c = classify_twist(D)
    if not c.is_classical:
        raise ValueError(f"not a classical Dehn twist ({c.kind.value}{': ' + c.reason if c.reason else ''})")
    G = D.domain
    for d in G.graph.darts:
        t = G.graph.terminal[d]
        expected = G.concat(G.letter(d), G.elem(t, G.edge_image(d, c.data.z[d])))
        if not G.equal(iso_apply(D, G.letter(d)), expected):
            raise AssertionError(f"twist formula fails on t[{d}]")
    return c.data


def from_twistors(G: GraphOfGroups, z: dict, orientation: Orientation | None = None) -> GogIso:
    """Classical twist with ``γ_e = -z_e`` on positive darts and ``γ_e = 0`` on negative ones."""
    orientation = orientation or Orientation.default(G.graph)
    rep = orientation.validate(G.graph)
    if not rep.ok:
        raise ValueError("; ".join(rep.issues))
    full = {}
    for d in G.graph.darts:
        zd, zb = z.get(d), z.get(G.bar(d))
        if zd is None and zb is None:
            zd = zb = 0
        elif zd is None:
            zd = -zb
        elif zb is None:
            zb = -zd
        if zd != -zb:
            raise ValueError(f"twistors of {d!r} and {G.bar(d)!r} must be inverse to each other")
        if G.rank(d) == 0 and zd:
            raise ValueError(f"dart {d!r} has trivial edge group; its twistor must be trivial")
        full[d] = zd
    corr = {}
    for d in G.graph.darts:
        gam = -full[d] if d in orientation.positive else 0
        corr[d] = G.edge_image(d, gam)
    return make_iso(G, corr)


# ---------------------------------------------------------------------------
# Subdivision of general twists
# ---------------------------------------------------------------------------


@dataclass
class Subdivision:
    twist: GogIso
    theta: object
    vertex_correspondence: dict
    new_vertices: list = field(default_factory=list)
    already_classical: bool = False

    def theta_at(self, v):
        return self.theta.rebased(v, self.vertex_correspondence[v])


def _fresh(name: str, taken: set) -> str:
    cand = name + "'"
    while cand in taken or inverse_name(cand) in taken:
        cand += "'"
    return cand


def _subdivide_once(D: GogIso, e0) -> tuple[GogIso, dict, str]:
    G = D.domain
    graph = G.graph
    t0, o0 = graph.terminal[e0], graph.origin(e0)
    tgrp = G.group(t0)
    if not isinstance(tgrp, FreeGroup):
        raise NotImplementedError("subdivision needs an explicit free group at the terminal vertex")
    delta = D.corrections[e0]
    if G.rank(e0) == 1:
        root, m = fw_primitive_root(G.image(e0))
        j = fw_power_of(delta, root)
        g = gcd(m, j)
        s = root ** g
        u_exp = m // g
    else:
        s, u_exp = delta, None
    text = tgrp.format(s)
    vgrp = FreeGroup([text if text.isidentifier() and " " not in text else "s"])
    v0 = f"v0@{e0}"
    while v0 in graph.vertices:
        v0 += "'"
    taken = set(graph.darts)
    e1 = _fresh(e0, taken)
    taken |= {e1, inverse_name(e1)}
    e2 = _fresh(e1, taken)
    b1, b2 = inverse_name(e1), inverse_name(e2)
    eb = graph.bar[e0]

    bar = {d: b for d, b in graph.bar.items() if d not in (e0, eb)}
    terminal = {d: t for d, t in graph.terminal.items() if d not in (e0, eb)}
    bar.update({e1: b1, b1: e1, e2: b2, b2: e2})
    terminal.update({e1: v0, b1: o0, e2: t0, b2: v0})
    new_graph = SerreGraph(tuple(sorted(graph.vertices + (v0,))), tuple(sorted(bar)), bar, terminal)

    groups = dict(G.vertex_groups)
    groups[v0] = vgrp
    ranks = {d: r for d, r in G.edge_ranks.items() if d not in (e0, eb)}
    ranks.update({e1: G.rank(e0), b1: G.rank(e0), e2: 1, b2: 1})
    maps = {d: x for d, x in G.edge_maps.items() if d not in (e0, eb)}
    if G.rank(e0):
        maps[e1] = vgrp.pow(vgrp.gen(0), u_exp)
        maps[b1] = G.image(eb)
    maps[e2] = FreeWord(s.letters, tgrp)
    maps[b2] = vgrp.gen(0)
    G1 = GraphOfGroups(new_graph, groups, ranks, maps)

    corr = {d: x for d, x in D.corrections.items() if d not in (e0, eb)}
    corr.update({b1: D.corrections[eb], e1: vgrp.identity(), b2: vgrp.identity(), e2: delta})
    vis = dict(D.vertex_isos)
    vis[v0] = IdentityIso(vgrp)
    D1 = make_iso(G1, corr, vertex_isos=vis)
    word = G1.concat(G1.letter(e1), G1.letter(e2))
    return D1, {e0: word, eb: G1.inv(word)}, v0


def subdivide_to_classical(D: GogIso, base=None) -> Subdivision:
    """Subdivide each non-classical dart (sorted order) until the twist is classical.

    Returns the classical twist, the injection ``θ`` of path groups restricted
    to ``π₁`` at ``base`` (default: the first vertex) and the vertex
    correspondence.
    """
    G = D.domain
    base = base if base is not None else G.graph.vertices[0]
    c = classify_twist(D)
    if c.kind is TwistKind.NOT_DEHN:
        raise ValueError(f"not a Dehn twist: {c.reason}")
    corr = {v: v for v in G.graph.vertices}
    ident = WordMap(G, G, base, base, corr, {d: G.letter(d) for d in G.graph.darts})
    if c.is_classical:
        return Subdivision(D, ident, corr, [], already_classical=True)
    current, theta, new_vertices = D, None, []
    while True:
        c = classify_twist(current)
        if c.kind is not TwistKind.GENERAL:
            break
        e0 = c.non_classical[0]
        nxt, words, v0 = _subdivide_once(current, e0)
        src = current.domain
        step = WordMap(
            src,
            nxt.domain,
            base,
            base,
            {v: v for v in src.graph.vertices},
            {d: words[d] if d in words else nxt.domain.letter(d) for d in src.graph.darts},
        )
        theta = step if theta is None else _compose_word_maps(theta, step)
        new_vertices.append(v0)
        current = nxt
    if c.kind is TwistKind.NOT_DEHN:
        raise AssertionError(f"subdivision produced a non-twist: {c.reason}")
    return Subdivision(current, theta, corr, new_vertices)


def _compose_word_maps(first: WordMap, second: WordMap) -> WordMap:
    """``second ∘ first`` as a single substitution."""
    words = {d: second.map_word(w) for d, w in first.dart_words.items()}
    return WordMap(first.src, second.tgt, first.source.base, second.target.base, first.vertex_map, words)


# ---------------------------------------------------------------------------
# Efficiency
# ---------------------------------------------------------------------------


class Bond(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NONE = "none"


@dataclass
class EfficiencyReport:
    minimal: bool = True
    no_invisible_vertex: bool = True
    no_proper_power: bool = True
    no_unused_edge: bool = True
    not_positively_bonded: bool = True
    details: dict = field(default_factory=lambda: {k: [] for k in CONDITIONS})

    @property
    def efficient(self) -> bool:
        return all(getattr(self, k) for k in CONDITIONS)

    def failed(self) -> list:
        return [k for k in CONDITIONS if not getattr(self, k)]

    def flag(self, cond: str, message: str) -> None:
        setattr(self, cond, False)
        self.details[cond].append(message)


CONDITIONS = ("minimal", "no_invisible_vertex", "no_proper_power", "no_unused_edge", "not_positively_bonded")


def edge_map_surjective(G: GraphOfGroups, dart) -> bool:
    """Is ``f_dart`` onto its (free) vertex group?"""
    grp = G.group(G.graph.terminal[dart])
    if not isinstance(grp, FreeGroup):
        raise NotImplementedError("surjectivity test needs an explicit free vertex group")
    if G.rank(dart) == 0:
        return grp.rank == 0
    img = G.image(dart)
    return grp.rank == 1 and len(img.letters) == 1 and abs(img.letters[0][1]) == 1


def bondedness(D: GogIso, e1, e2, data: TwistData | None = None) -> Bond:
    """Bonding of two darts with a common terminal vertex.

    ``f(z^n)`` is a power of the primitive root of the image, so the
    question is whether the roots are conjugate (same direction) or
    conjugate to each other's inverse, compared against the twistor signs.
    Negative bonding is read with ``n2 ≤ -1``.
    """
    G = D.domain
    data = data or twistors(D)
    if G.graph.terminal[e1] != G.graph.terminal[e2]:
        raise ValueError(f"{e1!r} and {e2!r} do not share a terminal vertex")
    for d in (e1, e2):
        if G.rank(d) != 1 or data.z[d] == 0:
            raise ValueError(f"dart {d!r} needs a rank-1 edge group and a nontrivial twistor")
    if not isinstance(G.group(G.graph.terminal[e1]), FreeGroup):
        raise NotImplementedError("bondedness needs an explicit free vertex group")
    r1, _ = fw_primitive_root(G.image(e1))
    r2, _ = fw_primitive_root(G.image(e2))
    same_sign = (data.z[e1] > 0) == (data.z[e2] > 0)
    if fw_conjugacy(r1, r2) is not None:
        return Bond.POSITIVE if same_sign else Bond.NEGATIVE
    if fw_conjugacy(r1, r2.inverse()) is not None:
        return Bond.NEGATIVE if same_sign else Bond.POSITIVE
    return Bond.NONE


def efficiency_check(D: GogIso) -> EfficiencyReport:
    data = twistors(D)
    G = D.domain
    for v in G.graph.vertices:
        if not isinstance(G.group(v), FreeGroup):
            raise NotImplementedError(f"efficiency check needs explicit free vertex groups (vertex {v!r})")
    rep = EfficiencyReport()
    for v in G.graph.vertices:
        into = G.graph.darts_into(v)
        if len(into) == 1 and edge_map_surjective(G, into[0]):
            rep.flag("minimal", f"valence-one vertex {v!r}: f_{into[0]} is surjective")
        if len(into) == 2 and all(edge_map_surjective(G, d) for d in into):
            rep.flag("no_invisible_vertex", f"vertex {v!r} is invisible ({into[0]}, {into[1]})")
    for d in G.graph.darts:
        if G.rank(d) == 1 and fw_primitive_root(G.image(d))[1] > 1:
            rep.flag("no_proper_power", f"image of {d!r} is a proper power")
    for d in G.graph.edges():
        if data.z[d] == 0:
            rep.flag("no_unused_edge", f"edge {d!r} has trivial twistor")
    for v in G.graph.vertices:
        into = [d for d in G.graph.darts_into(v) if G.rank(d) == 1 and data.z[d] != 0]
        for i, e1 in enumerate(into):
            for e2 in into[i + 1:]:
                if bondedness(D, e1, e2, data) is Bond.POSITIVE:
                    rep.flag("not_positively_bonded", f"{e1!r} and {e2!r} are positively bonded at {v!r}")
    return rep


# ---------------------------------------------------------------------------
# Twistor criterion and trivial edge groups
# ---------------------------------------------------------------------------


class SameOuter(Enum):
    EQUAL = "equal"
    DISTINCT = "distinct"
    HYPOTHESIS_FAILS = "hypothesis-fails"


def malnormal_witness(G: GraphOfGroups, dart):
    """An ``r`` with ``f(G_e) ∩ r f(G_e) r⁻¹ = 1``, or ``None`` if none exists.

    In a free group two nontrivial powers of ``u`` conjugate by ``r`` only
    when ``r`` commutes with ``u``, i.e. is a power of its primitive root;
    any other ``r`` works.
    """
    grp = G.group(G.graph.terminal[dart])
    if G.rank(dart) == 0:
        return grp.identity()
    if not isinstance(grp, FreeGroup):
        raise NotImplementedError("witness search needs an explicit free vertex group")
    root, _ = fw_primitive_root(G.image(dart))
    for r in grp.generators():
        if fw_power_of(r, root) is None:
            return r
    return None


def same_outer_by_twistors(D1: GogIso, D2: GogIso) -> SameOuter:
    if D1.domain != D2.domain:
        raise ValueError("twists live on different graphs of groups")
    G = D1.domain
    for d in G.graph.darts:
        if malnormal_witness(G, d) is None:
            return SameOuter.HYPOTHESIS_FAILS
    z1, z2 = twistors(D1).z, twistors(D2).z
    return SameOuter.EQUAL if all(z1[d] == z2[d] for d in G.graph.darts) else SameOuter.DISTINCT


@dataclass(frozen=True)
class TrivialEdgeVerdict:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def trivial_edge_dehn(H: GogIso) -> TrivialEdgeVerdict:
    """Identity on graph and vertex groups with all edge groups trivial: a Dehn twist automorphism."""
    G = H.domain
    for d in G.graph.edges():
        if G.rank(d):
            return TrivialEdgeVerdict(False, f"edge {d!r} has a nontrivial edge group")
    reason = _twist_shape(H)
    if reason:
        return TrivialEdgeVerdict(False, reason)
    return TrivialEdgeVerdict(True, "Dehn twist automorphism")


__all__ = [
    "Bond",
    "Classification",
    "EfficiencyReport",
    "SameOuter",
    "Subdivision",
    "TrivialEdgeVerdict",
    "TwistData",
    "TwistKind",
    "bondedness",
    "classify_twist",
    "efficiency_check",
    "from_twistors",
    "malnormal_witness",
    "pi1_rank",
    "same_outer_by_twistors",
    "subdivide_to_classical",
    "trivial_edge_dehn",
    "twistors",
]
