"""
Quotients and blow-ups of graphs of groups and their isomorphisms.

Contracting a connected sub-graph-of-groups ``G0`` to one vertex ``V0``
gives a graph of groups whose vertex group at ``V0`` is ``π₁(G0, P0)``.  The
connectors ``γ_e`` (words in ``G0`` from ``P0`` to ``τ(e)``) twist the edge
maps of darts entering ``G0``, and an isomorphism fixing the graph descends
to the quotient.

Blowing up goes the other way: given a local model ``(G0, H0)`` and an
identification ``θ0`` of the vertex group at ``V0`` with ``π₁(G0, P0)``, a
correction term ``δ(E)`` on a dart entering ``V0`` can be pushed into ``G0``
exactly when ``θ0(δ(E))`` has ``H0⁻¹``-length zero; the zero witness then
says where the dart attaches and what its new correction term is.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

from .core import GraphOfGroups, PathWord, Pi1Group, gog_validate, pw_validate
from .dehn import TwistKind, classify_twist
from .foundations import SerreGraph, tree_paths
from .hconj import connected_words, is_h_zero
from .isomorphisms import (
    CompositeIso,
    FunctionIso,
    GogIso,
    GroupIso,
    IdentityIso,
    InducedIso,
    WordMap,
    check_semi_conjugation,
    group_iso_equal,
    iso_apply,
    iso_invert,
    iso_validate,
    make_iso,
    restrict_iso,
)


class BlowupError(ValueError):
    def __init__(self, message: str, dart=None, vertex=None):
        super().__init__(message)
        self.dart = dart
        self.vertex = vertex


class NotLocallyZero(BlowupError):
    pass


class NotCompatible(BlowupError):
    pass


# ---------------------------------------------------------------------------
# Quotients
# ---------------------------------------------------------------------------


@dataclass
class QuotientResult:
    original: GraphOfGroups
    quotient: GraphOfGroups
    sub: GraphOfGroups | None
    V0: object
    P0: object
    gammas: dict
    theta: GroupIso
    theta_inverse: GroupIso
    vertex_correspondence: dict
    dart_correspondence: dict
    stages: list = field(default_factory=list)

    def verify_theta(self) -> bool:
        """``θ`` and its inverse compose to the identity on both generating sets."""
        th, ps = self.theta, self.theta_inverse
        src, tgt = th.source, th.target
        return all(src.equal(ps(th(x)), x) for x in src.generators()) and all(
            tgt.equal(th(ps(y)), y) for y in tgt.generators()
        )


def _fresh_vertex(name, taken) -> str:
    while name in taken:
        name += "'"
    return name


def _sub_darts(G: GraphOfGroups, vertices, darts):
    vs = set(vertices)
    unknown = vs - set(G.graph.vertices)
    if unknown:
        raise ValueError(f"unknown vertices {sorted(map(str, unknown))}")
    if darts is None:
        darts = [d for d in G.graph.darts if G.graph.terminal[d] in vs and G.graph.origin(d) in vs]
    ds = set(darts) | {G.bar(d) for d in darts}
    missing = ds - set(G.graph.darts)
    if missing:
        raise ValueError(f"unknown darts {sorted(missing)}")
    return vs, ds


def _trivial_quotient(G: GraphOfGroups, base=None) -> QuotientResult:
    base = base if base is not None else G.graph.vertices[0]
    ident = WordMap(G, G, base, base, {v: v for v in G.graph.vertices}, {d: G.letter(d) for d in G.graph.darts})
    q = {v: v for v in G.graph.vertices}
    res = QuotientResult(G, G, None, None, None, {}, ident, ident, q, {d: d for d in G.graph.darts})
    res.stages = []
    return res


def quotient_gog(G: GraphOfGroups, vertices, P0, darts=None, gammas: Mapping | None = None,
                 name: str = "V0") -> QuotientResult:
    """Contract the connected subgraph on ``vertices``/``darts`` to a vertex.

    ``darts`` defaults to every dart with both ends in ``vertices``; the
    default connectors are spanning-tree paths from ``P0``.
    """
    vs, ds = _sub_darts(G, vertices, darts)
    if P0 not in vs:
        raise ValueError(f"base point {P0!r} is not in the subgraph")
    G0 = G.restrict(vs, ds)
    rep = gog_validate(G0)
    if not rep.ok:
        raise ValueError("subgraph is not a valid graph of groups: " + "; ".join(rep.issues))
    if len(vs) == 1 and not ds:
        return _trivial_quotient(G, P0)
    V0 = name if name in vs else _fresh_vertex(name, set(G.graph.vertices))
    tree_word = _tree_words(G0, P0)

    outer = [d for d in G.graph.darts if d not in ds]
    entering = [d for d in outer if G.graph.terminal[d] in vs]
    gam = {}
    for d in entering:
        t = G.graph.terminal[d]
        if gammas and d in gammas:
            w = gammas[d]
            if isinstance(w, str):
                w = G0.word(w, start=P0)
            if w.start != P0 or w.end != t or not pw_validate(G0, w).ok:
                raise ValueError(f"connector for {d!r} must run from {P0!r} to {t!r} inside the subgraph")
            gam[d] = G0.reduce(w)
        else:
            gam[d] = tree_word[t]

    q = {v: (V0 if v in vs else v) for v in G.graph.vertices}
    bar = {d: G.bar(d) for d in outer}
    terminal = {d: q[G.graph.terminal[d]] for d in outer}
    verts = tuple(sorted({q[v] for v in G.graph.vertices}, key=str))
    graph = SerreGraph(verts, tuple(sorted(outer)), bar, terminal)
    P = Pi1Group(G0, P0)
    groups = {v: G.group(v) for v in G.graph.vertices if v not in vs}
    groups[V0] = P
    ranks = {d: G.rank(d) for d in outer}
    maps = {}
    for d in outer:
        if G.rank(d) == 0:
            continue
        if d in gam:
            t = G.graph.terminal[d]
            maps[d] = G0.mul(gam[d], G0.elem(t, G.image(d)), G0.inv(gam[d]))
        else:
            maps[d] = G.image(d)
    Gbar = GraphOfGroups(graph, groups, ranks, maps)

    theta = _quotient_theta(G, Gbar, vs, V0, P0, gam)
    psi = _quotient_psi(G, Gbar, G0, vs, ds, V0, P0, gam, tree_word)
    res = QuotientResult(G, Gbar, G0, V0, P0, gam, theta, psi, q, {d: d for d in outer})
    res.stages = [res]
    return res


def _quotient_theta(G, Gbar, vs, V0, P0, gam, base=None) -> WordMap:
    words = {}
    for d in Gbar.graph.darts:
        w = G.letter(d)
        if G.graph.origin(d) in vs:
            w = G.concat(gam[G.bar(d)], w)
        if G.graph.terminal[d] in vs:
            w = G.concat(w, G.inv(gam[d]))
        words[d] = w
    vmap = {v: (P0 if v == V0 else v) for v in Gbar.graph.vertices}
    base = V0 if base is None else base
    return WordMap(Gbar, G, base, vmap[base], vmap, words, {V0: lambda x: x})


def _quotient_psi(G, Gbar, G0, vs, ds, V0, P0, gam, beta, base=None) -> FunctionIso:
    """Inverse of ``θ``: push a word of ``G`` into the quotient segment by segment."""

    def at_V0(w: PathWord) -> PathWord:
        return Gbar.elem(V0, G0.reduce(w))

    def image(w: PathWord) -> PathWord:
        pieces = []
        for i, (v, x) in enumerate(zip(w.vertices, w.elements)):
            if v in vs:
                pieces.append(at_V0(G0.concat(beta[v], G0.elem(v, x), G0.inv(beta[v]))))
            else:
                pieces.append(Gbar.elem(v, x))
            if i == w.length:
                break
            d = w.darts[i]
            o, t = w.vertices[i], w.vertices[i + 1]
            if d in ds:
                pieces.append(at_V0(G0.concat(beta[o], G0.letter(d), G0.inv(beta[t]))))
                continue
            if o in vs:
                pieces.append(at_V0(G0.concat(beta[o], G0.inv(gam[G.bar(d)]))))
            pieces.append(Gbar.letter(d))
            if t in vs:
                pieces.append(at_V0(G0.concat(gam[d], G0.inv(beta[t]))))
        return Gbar.mul(*pieces)

    base = P0 if base is None else base
    q = V0 if base in vs else base
    src, tgt = Pi1Group(G, base), Pi1Group(Gbar, q)
    if base in vs and base != P0:
        raise ValueError("rebasing the inverse inside the contracted subgraph is not supported")
    return FunctionIso(src, tgt, image)


def quotient_iso(H: GogIso, Q: QuotientResult) -> GogIso:
    """The isomorphism induced on the quotient: ``δ(E) = H_*(γ_e) δ(e) γ_e⁻¹`` for darts entering ``V0``."""
    if not H.graph_is_identity():
        raise ValueError("quotient isomorphisms need H to be the identity on the graph")
    if Q.sub is None:
        return H
    G, Gbar, G0 = Q.original, Q.quotient, Q.sub
    local = restrict_iso(H, G0.graph.vertices, G0.graph.darts)
    local = replace(local, domain=G0, codomain=G0)
    P = Gbar.group(Q.V0)
    vis = {v: H.vertex_isos[v] for v in Gbar.graph.vertices if v != Q.V0}
    vis[Q.V0] = InducedIso(local, Q.P0, P, P)
    corr = {}
    for d in Gbar.graph.darts:
        if d in Q.gammas:
            t = G.graph.terminal[d]
            g = Q.gammas[d]
            corr[d] = G0.mul(iso_apply(local, g), G0.elem(t, H.corrections[d]), G0.inv(g))
        else:
            corr[d] = H.corrections[d]
    signs = {d: H.edge_signs[d] for d in Gbar.graph.darts}
    return make_iso(Gbar, corr, vertex_isos=vis, edge_signs=signs)


def quotient_multi(G: GraphOfGroups, subgraphs, base=None) -> QuotientResult:
    """Contract pairwise disjoint subgraphs one after another (sorted by smallest vertex).

    ``subgraphs`` holds ``(vertices, P0)`` or ``(vertices, P0, darts)``
    entries; the k-th contracted vertex is named ``V0``, ``V1``, ...
    """
    items = [tuple(s) + (None,) * (3 - len(s)) for s in subgraphs]
    items.sort(key=lambda s: min(map(str, s[0])))
    seen = set()
    for vs, _, _ in items:
        if seen & set(vs):
            raise ValueError(f"subgraphs overlap in {sorted(seen & set(vs))}")
        seen |= set(vs)
    base = base if base is not None else G.graph.vertices[0]
    if not items:
        return _trivial_quotient(G, base)
    stages, cur, b = [], G, base
    thetas, psis = [], []
    for k, (vs, P0, ds) in enumerate(items):
        Q = quotient_gog(cur, vs, P0, darts=ds, name=f"V{k}")
        nb = Q.vertex_correspondence[b]
        if Q.sub is not None:
            Q.theta = _quotient_theta(cur, Q.quotient, set(vs), Q.V0, P0, Q.gammas, base=nb)
            if b in set(vs) and b != P0:
                raise ValueError("base point inside a subgraph must be that subgraph's P0")
            Q.theta_inverse = _quotient_psi(cur, Q.quotient, Q.sub, set(Q.sub.graph.vertices),
                                            set(Q.sub.graph.darts), Q.V0, P0, Q.gammas,
                                            _tree_words(Q.sub, P0), base=b)
        stages.append(Q)
        thetas.append(Q.theta)
        psis.append(Q.theta_inverse)
        cur, b = Q.quotient, nb
    theta = thetas[-1]
    for th in reversed(thetas[:-1]):
        theta = CompositeIso(theta, th)
    psi = psis[0]
    for p in psis[1:]:
        psi = CompositeIso(psi, p)
    q = {}
    for v in G.graph.vertices:
        x = v
        for Q in stages:
            x = Q.vertex_correspondence[x]
        q[v] = x
    last = stages[-1]
    res = QuotientResult(G, cur, last.sub, last.V0, last.P0, last.gammas, theta, psi, q,
                         {d: d for d in cur.graph.darts})
    res.stages = stages
    return res


def _tree_words(G0: GraphOfGroups, P0) -> dict:
    paths, _ = tree_paths(G0.graph, P0)
    out = {}
    for x, path in paths.items():
        w = G0.identity(P0)
        for d in path:
            w = G0.concat(w, G0.letter(d))
        out[x] = w
    return out


def quotient_iso_multi(H: GogIso, Q: QuotientResult) -> GogIso:
    for stage in Q.stages:
        H = quotient_iso(H, stage)
    return H


# ---------------------------------------------------------------------------
# Blow-up
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlanEntry:
    vertex: object
    gamma: PathWord
    g: object


@dataclass
class BlowupPlan:
    V0: object
    entries: dict

    def __getitem__(self, dart) -> PlanEntry:
        return self.entries[dart]


def check_local_model(Hbar: GogIso, V0, H0: GogIso, theta0: GroupIso) -> bool:
    """``θ0 ∘ H̄_{V0} = H0_* ∘ θ0`` on the generators of ``G_{V0}``."""
    return check_semi_conjugation(theta0, Hbar.vertex_isos[V0], H0)


def _connector_ok(G0, theta0, fE_image, gamma) -> bool:
    y = G0.mul(G0.inv(gamma), theta0(fE_image), gamma)
    return y.length == 0


def blowup_plan(Gbar: GraphOfGroups, Hbar: GogIso, V0, G0: GraphOfGroups, H0: GogIso,
                theta0: GroupIso, search_radius: int = 4) -> BlowupPlan:
    """Attach data for every dart entering ``V0``; raises NotLocallyZero / NotCompatible."""
    if not Hbar.graph_is_identity():
        raise ValueError("blow-up needs an isomorphism that is the identity on the graph")
    if not check_local_model(Hbar, V0, H0, theta0):
        raise ValueError("θ0 does not intertwine the vertex isomorphism at V0 with the local isomorphism")
    H0inv = iso_invert(H0)
    entries = {}
    for E in sorted(Gbar.graph.darts_into(V0)):
        w = theta0(Hbar.corrections[E])
        zw = is_h_zero(H0inv, w)
        if zw is None:
            raise NotLocallyZero(f"correction term of {E!r} is not locally zero", dart=E, vertex=V0)
        entry = PlanEntry(zw.vertex, zw.gamma, zw.g)
        if Gbar.rank(E) == 1 and not _connector_ok(G0, theta0, Gbar.image(E), entry.gamma):
            entry = _search_connector(G0, H0, theta0, Gbar.image(E), w, entry, search_radius)
            if entry is None:
                raise NotCompatible(f"no connector found making the edge group of {E!r} land in a vertex group",
                                    dart=E, vertex=V0)
        entries[E] = entry
    return BlowupPlan(V0, entries)


def _search_connector(G0, H0, theta0, fE_image, w, entry: PlanEntry, radius: int):
    """Try ``γ' = γ c`` for short ``c``: vertex-group elements up to ``radius``, then paths of length ≤ 2."""
    start = entry.gamma.end
    cands = list(connected_words(G0, start, 0, radius)) + [
        c for c in connected_words(G0, start, 2, 1) if c.length
    ]
    for c in cands:
        gamma = G0.mul(entry.gamma, c)
        if not _connector_ok(G0, theta0, fE_image, gamma):
            continue
        g = G0.mul(G0.inv(iso_apply(H0, gamma)), w, gamma)
        if g.length == 0:
            return PlanEntry(g.start, gamma, g.elements[0])
    return None


@dataclass
class BlowupResult:
    gog: GraphOfGroups
    iso: GogIso
    theta: GroupIso


def blowup(Gbar: GraphOfGroups, Hbar: GogIso, V0, G0: GraphOfGroups, H0: GogIso, theta0: GroupIso,
           plan: BlowupPlan, base=None) -> BlowupResult:
    """Replace ``V0`` by ``G0``; darts entering ``V0`` reattach at the planned vertices."""
    if V0 not in Gbar.graph.vertices:
        raise ValueError(f"{V0!r} is not a vertex")
    into = sorted(Gbar.graph.darts_into(V0))
    if not into:
        raise ValueError("blow-up at a vertex without incident edges would disconnect the graph")
    clash = (set(Gbar.graph.vertices) - {V0}) & set(G0.graph.vertices)
    clash |= set(Gbar.graph.darts) & set(G0.graph.darts)
    if clash:
        raise ValueError(f"names shared between the quotient and the local model: {sorted(map(str, clash))}")
    P0 = theta0.target.base
    bar = dict(Gbar.graph.bar)
    bar.update(G0.graph.bar)
    terminal = {}
    for d in Gbar.graph.darts:
        terminal[d] = plan[d].vertex if d in into else Gbar.graph.terminal[d]
    terminal.update(G0.graph.terminal)
    verts = tuple(sorted((set(Gbar.graph.vertices) - {V0}) | set(G0.graph.vertices), key=str))
    graph = SerreGraph(verts, tuple(sorted(bar)), bar, terminal)
    groups = {v: Gbar.group(v) for v in Gbar.graph.vertices if v != V0}
    groups.update(G0.vertex_groups)
    ranks = dict(Gbar.edge_ranks)
    ranks.update(G0.edge_ranks)
    maps = dict(G0.edge_maps)
    for d in Gbar.graph.darts:
        if Gbar.rank(d) == 0:
            continue
        if d in into:
            p = plan[d]
            y = G0.mul(G0.inv(p.gamma), theta0(Gbar.image(d)), p.gamma)
            if y.length:
                raise NotCompatible(f"plan for {d!r} violates the edge-group condition", dart=d, vertex=V0)
            maps[d] = y.elements[0]
        else:
            maps[d] = Gbar.image(d)
    G = GraphOfGroups(graph, groups, ranks, maps)

    corr = dict(H0.corrections)
    for d in Gbar.graph.darts:
        if d in into:
            p = plan[d]
            w = theta0(Hbar.corrections[d])
            g = G0.mul(G0.inv(iso_apply(H0, p.gamma)), w, p.gamma)
            if g.length or g.start != p.vertex or not G0.group(p.vertex).equal(g.elements[0], p.g):
                raise ValueError(f"plan for {d!r} does not satisfy the correction-term condition")
            corr[d] = p.g
        else:
            corr[d] = Hbar.corrections[d]
    vis = {v: Hbar.vertex_isos[v] for v in Gbar.graph.vertices if v != V0}
    vis.update(H0.vertex_isos)
    signs = dict(Hbar.edge_signs)
    signs.update(H0.edge_signs)
    H = make_iso(G, corr, vertex_isos=vis, edge_signs=signs)

    words = {}
    for d in Gbar.graph.darts:
        w = G.letter(d)
        if Gbar.graph.origin(d) == V0:
            w = G.concat(plan[Gbar.bar(d)].gamma, w)
        if d in into:
            w = G.concat(w, G.inv(plan[d].gamma))
        words[d] = w
    vmap = {v: (P0 if v == V0 else v) for v in Gbar.graph.vertices}
    base = V0 if base is None else base
    theta = WordMap(Gbar, G, base, vmap[base], vmap, words, {V0: theta0})
    return BlowupResult(G, H, theta)


# ---------------------------------------------------------------------------
# Partial Dehn twists
# ---------------------------------------------------------------------------


def partial_dehn_detect(H: GogIso, exceptional=()) -> bool:
    """Identity on graph and edge groups, and on vertex groups off ``exceptional``;
    corrections centralize edge images; darts into exceptional vertices have trivial edge groups."""
    G = H.domain
    if H.codomain != G or not H.graph_is_identity():
        return False
    exc = set(exceptional)
    if any(s != 1 for s in H.edge_signs.values()):
        return False
    for v, phi in H.vertex_isos.items():
        if v in exc:
            continue
        if not (phi.is_identity() or group_iso_equal(phi, IdentityIso(phi.source))):
            return False
    for d in G.graph.darts:
        t = G.graph.terminal[d]
        if t in exc and G.rank(d):
            return False
        if G.rank(d):
            grp = G.group(t)
            if not grp.commute(H.corrections[d], G.image(d)):
                return False
    return True


@dataclass
class DehnTwistResult:
    gog: GraphOfGroups
    iso: GogIso
    theta: GroupIso
    kind: TwistKind


def partial_dehn_blowup(Hbar: GogIso, locals_: Mapping, base=None) -> DehnTwistResult:
    """Blow up every exceptional vertex via its local twist ``(D0, G0, θ0)``, sorted order.

    Raises :class:`NotLocallyZero` carrying the vertex and dart at fault.
    """
    G = Hbar.domain
    exc = sorted(locals_, key=str)
    if not partial_dehn_detect(Hbar, exc):
        raise ValueError("not a partial Dehn twist relative to the given vertices")
    base = base if base is not None else G.graph.vertices[0]
    cur_G, cur_H = G, Hbar
    theta = WordMap(G, G, base, base, {v: v for v in G.graph.vertices}, {d: G.letter(d) for d in G.graph.darts})
    for V0 in exc:
        D0, G0, theta0 = locals_[V0]
        if classify_twist(D0).kind is TwistKind.NOT_DEHN:
            raise ValueError(f"local isomorphism at {V0!r} is not a Dehn twist")
        plan = blowup_plan(cur_G, cur_H, V0, G0, D0, theta0)
        cur_base = base
        res = blowup(cur_G, cur_H, V0, G0, D0, theta0, plan, base=cur_base)
        theta = CompositeIso(theta, res.theta)
        cur_G, cur_H = res.gog, res.iso
        if base == V0:
            base = theta0.target.base
    kind = classify_twist(cur_H).kind
    if kind is TwistKind.NOT_DEHN:
        raise AssertionError("blow-up of a partial Dehn twist did not produce a Dehn twist")
    return DehnTwistResult(cur_G, cur_H, theta, kind)


def roundtrip(G: GraphOfGroups, H: GogIso, vertices, P0, darts=None) -> tuple[bool, BlowupResult, QuotientResult]:
    """Quotient by a subgraph and blow back up with the restricted local data.

    Returns whether the result reproduces ``(G, H)`` together with the
    intermediate results; the semi-conjugation of the composed ``θ`` is
    part of the verdict.
    """
    Q = quotient_gog(G, vertices, P0, darts=darts)
    if Q.sub is None:
        return True, BlowupResult(G, H, Q.theta), Q
    Hbar = quotient_iso(H, Q)
    G0 = Q.sub
    H0 = replace(restrict_iso(H, G0.graph.vertices, G0.graph.darts), domain=G0, codomain=G0)
    P = Hbar.domain.group(Q.V0)
    theta0 = IdentityIso(P)
    plan = blowup_plan(Q.quotient, Hbar, Q.V0, G0, H0, theta0)
    res = blowup(Q.quotient, Hbar, Q.V0, G0, H0, theta0, plan)
    same = res.gog == G and iso_validate(res.iso).ok and _same_iso_data(res.iso, H)
    semi = check_semi_conjugation(res.theta, Hbar, res.iso) and check_semi_conjugation(Q.theta, Hbar, H)
    return same and semi, res, Q


def _same_iso_data(A: GogIso, B: GogIso) -> bool:
    G = B.domain
    for d in G.graph.darts:
        grp = G.group(G.graph.terminal[d])
        if not grp.equal(A.corrections[d], B.corrections[d]):
            return False
    if dict(A.edge_signs) != dict(B.edge_signs):
        return False
    return all(group_iso_equal(A.vertex_isos[v], B.vertex_isos[v]) for v in G.graph.vertices)
