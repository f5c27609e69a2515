"""
Isomorphisms of graphs of groups and the maps they induce on path words.

A :class:`GogIso` carries a graph map, an isomorphism per vertex group, a
sign per edge (the edge groups are trivial or infinite cyclic, so an edge
isomorphism is ``x ↦ x^{±1}``) and a correction term per dart.  The
compatibility required of it is checked on the edge generator::

    H_{τ(e)}(f_e(x)) == δ(e) · f'_{H(e)}(x^sign) · δ(e)⁻¹
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Mapping

from .core import (
    FreeGroup,
    GraphOfGroups,
    PathWord,
    Pi1Group,
    gog_validate,
    pi1_decompose,
    pw_reduce,
)
from .foundations import FreeWord, Report


# ---------------------------------------------------------------------------
# Vertex group isomorphisms
# ---------------------------------------------------------------------------


class GroupIso:
    source = None
    target = None

    def __call__(self, x):
        raise NotImplementedError

    def inverse(self) -> "GroupIso":
        raise NotImplementedError

    def is_identity(self) -> bool:
        return False


class IdentityIso(GroupIso):
    def __init__(self, group):
        self.source = self.target = group

    def __call__(self, x):
        return x

    def inverse(self) -> "IdentityIso":
        return self

    def is_identity(self) -> bool:
        return True

    def __repr__(self) -> str:
        return f"IdentityIso({self.source!r})"


class FreeImages(GroupIso):
    """Homomorphism out of a free group given by the images of its basis.

    The target may be a free group or a ``π₁`` group; the latter is how the
    identification of a vertex group with a local fundamental group is
    represented.
    """

    def __init__(self, source: FreeGroup, target, images):
        images = tuple(images)
        if len(images) != source.rank:
            raise ValueError(f"need {source.rank} images, got {len(images)}")
        self.source, self.target, self.images = source, target, images

    def __call__(self, x: FreeWord):
        tgt = self.target
        out = tgt.identity()
        for i, k in x.letters:
            out = tgt.mul(out, tgt.pow(self.images[i], k))
        return out

    def is_identity(self) -> bool:
        return self.source == self.target and all(
            self.target.equal(img, g) for img, g in zip(self.images, self.source.generators())
        )

    def inverse(self) -> GroupIso:
        if isinstance(self.target, FreeGroup):
            inv = nielsen_invert(self.images, self.target.rank)
            if inv is None:
                raise ValueError("images do not form a basis of the target free group")
            return FreeImages(self.target, self.source, [FreeWord(w.letters, self.source) for w in inv])
        return Pi1ToFree.inverting(self)

    def __repr__(self) -> str:
        return f"FreeImages({[self.target.format(i) for i in self.images]})"


class Pi1ToFree(GroupIso):
    """Homomorphism ``π₁(G, v) → F`` fixed by the images of the spanning-tree generators.

    Only meaningful when those generators form a free basis, i.e. when every
    vertex group is free and every edge group trivial.
    """

    def __init__(self, source: Pi1Group, target, gen_images):
        self.source, self.target, self.gen_images = source, target, tuple(gen_images)

    @classmethod
    def inverting(cls, theta: FreeImages) -> "Pi1ToFree":
        src: Pi1Group = theta.target
        gog = src.gog
        if any(gog.rank(d) for d in gog.graph.darts) or not all(
            isinstance(gog.group(v), FreeGroup) for v in gog.graph.vertices
        ):
            raise NotImplementedError("inverting into π₁ needs free vertex groups and trivial edge groups")
        n = len(src.generators())
        if n != theta.source.rank:
            raise ValueError(f"rank mismatch: free group of rank {theta.source.rank} versus π₁ of rank {n}")
        basis = FreeGroup([f"g{i}" for i in range(n)])
        coords = [FreeWord.from_letters(pi1_decompose(gog, img, src.base), basis) for img in theta.images]
        inv = nielsen_invert(coords, n)
        if inv is None:
            raise ValueError("images do not generate the fundamental group")
        return cls(src, theta.source, [FreeWord(w.letters, theta.source) for w in inv])

    def __call__(self, x: PathWord):
        tgt = self.target
        out = tgt.identity()
        for i, k in pi1_decompose(self.source.gog, x, self.source.base):
            out = tgt.mul(out, tgt.pow(self.gen_images[i], k))
        return out

    def inverse(self) -> GroupIso:
        return _invert_pi1_to_free(self)


def _invert_pi1_to_free(phi: Pi1ToFree) -> FreeImages:
    n = len(phi.gen_images)
    gens = phi.source.generators()
    inv = nielsen_invert(phi.gen_images, phi.target.rank)
    if inv is None or n != phi.target.rank:
        raise ValueError("not an isomorphism onto the free group")
    # inv[j] is a word in the π₁ generators mapping to basis letter j
    images = []
    for w in inv:
        x = phi.source.identity()
        for i, k in w.letters:
            x = phi.source.mul(x, phi.source.pow(gens[i], k))
        images.append(x)
    return FreeImages(phi.target, phi.source, images)


class InducedIso(GroupIso):
    """``π₁(G0, P0) → π₁(G0', H(P0))`` induced by a local isomorphism ``H``."""

    def __init__(self, local: "GogIso", base, source: Pi1Group | None = None, target: Pi1Group | None = None):
        self.local = local
        self.base = base
        self.source = source or Pi1Group(local.domain, base)
        self.target = target or Pi1Group(local.codomain, local.vertex_map[base])

    def __call__(self, x: PathWord) -> PathWord:
        return iso_apply(self.local, x)

    def inverse(self) -> "InducedIso":
        return InducedIso(iso_invert(self.local), self.local.vertex_map[self.base], self.target, self.source)

    def is_identity(self) -> bool:
        return is_identity_iso(self.local)

    def __repr__(self) -> str:
        return f"InducedIso(base={self.base!r})"


class CompositeIso(GroupIso):
    """``second ∘ first``."""

    def __init__(self, first: GroupIso, second: GroupIso):
        self.first, self.second = first, second
        self.source, self.target = first.source, second.target

    def __call__(self, x):
        return self.second(self.first(x))

    def inverse(self) -> "CompositeIso":
        return CompositeIso(self.second.inverse(), self.first.inverse())

    def is_identity(self) -> bool:
        return group_iso_equal(self, IdentityIso(self.source))


class FunctionIso(GroupIso):
    """A map given by a Python callable, with an optional inverse callable."""

    def __init__(self, source, target, fn: Callable, inv: Callable | None = None):
        self.source, self.target, self.fn, self.inv = source, target, fn, inv

    def __call__(self, x):
        return self.fn(x)

    def inverse(self) -> "FunctionIso":
        if self.inv is None:
            raise NotImplementedError("no inverse supplied")
        return FunctionIso(self.target, self.source, self.inv, self.fn)


def compose_group_isos(first: GroupIso, second: GroupIso) -> GroupIso:
    if first.is_identity():
        return second
    if second.is_identity():
        return first
    return CompositeIso(first, second)


def group_iso_equal(a: GroupIso, b: GroupIso) -> bool:
    return all(a.target.equal(a(g), b(g)) for g in a.source.generators())


def _nielsen_moves(n: int):
    for i in range(n):
        for j in range(n):
            if i != j:
                for eps in (1, -1):
                    for right in (True, False):
                        yield i, j, eps, right


def _apply_move(ws: list, ps: list, move) -> None:
    i, j, eps, right = move
    uj = ws[j] if eps == 1 else ws[j].inverse()
    pj = ps[j] if eps == 1 else ps[j].inverse()
    if right:
        ws[i], ps[i] = ws[i] * uj, ps[i] * pj
    else:
        ws[i], ps[i] = uj * ws[i], pj * ps[i]


def nielsen_invert(images, rank: int, max_plateau: int = 4):
    """Invert the endomorphism ``x_i ↦ images[i]`` of a free group of the given rank.

    Returns ``inv`` with ``inv[j]`` a word in the ``x_i`` mapping to basis
    letter ``j``, or ``None`` when the images are not a basis.  Uses
    length-reducing Nielsen moves, falling back to a short breadth-first
    search over length-preserving moves when stuck.
    """
    n = len(images)
    if n != rank:
        return None
    ws = [FreeWord(w.letters) for w in images]
    ps = [FreeWord.generator(i) for i in range(n)]
    while True:
        if _is_permuted_basis(ws):
            break
        total = sum(len(w) for w in ws)
        improved = False
        for mv in _nielsen_moves(n):
            trial_w, trial_p = list(ws), list(ps)
            _apply_move(trial_w, trial_p, mv)
            if sum(len(w) for w in trial_w) < total:
                ws, ps, improved = trial_w, trial_p, True
                break
        if improved:
            continue
        found = _plateau_search(ws, ps, total, max_plateau)
        if found is None:
            return None
        ws, ps = found
    inv = [None] * n
    for w, p in zip(ws, ps):
        (g, k), = w.letters
        inv[g] = p if k == 1 else p.inverse()
    return inv


def _is_permuted_basis(ws) -> bool:
    seen = set()
    for w in ws:
        if len(w.letters) != 1 or abs(w.letters[0][1]) != 1:
            return False
        seen.add(w.letters[0][0])
    return len(seen) == len(ws)


def _plateau_search(ws, ps, total, depth):
    n = len(ws)
    layer = [(ws, ps)]
    seen = {tuple(w.letters for w in ws)}
    for _ in range(depth):
        nxt = []
        for cw, cp in layer:
            for mv in _nielsen_moves(n):
                tw, tp = list(cw), list(cp)
                _apply_move(tw, tp, mv)
                s = sum(len(w) for w in tw)
                if s < total or _is_permuted_basis(tw):
                    return tw, tp
                key = tuple(w.letters for w in tw)
                if s == total and key not in seen and all(tw):
                    seen.add(key)
                    nxt.append((tw, tp))
        layer = nxt
    return None


def free_images_is_iso(phi: FreeImages) -> bool:
    """Rank equality plus a Nielsen-reduction certificate of generation."""
    if not isinstance(phi.target, FreeGroup):
        raise NotImplementedError("only free targets can be certified")
    return phi.source.rank == phi.target.rank and nielsen_invert(phi.images, phi.target.rank) is not None


# ---------------------------------------------------------------------------
# Graph-of-groups isomorphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GogIso:
    domain: GraphOfGroups
    codomain: GraphOfGroups
    vertex_map: Mapping
    dart_map: Mapping
    vertex_isos: Mapping
    edge_signs: Mapping
    corrections: Mapping
    meta: Mapping = field(default_factory=dict, compare=False)

    def correction(self, dart):
        return self.corrections[dart]

    def graph_is_identity(self) -> bool:
        return all(k == v for k, v in self.vertex_map.items()) and all(k == v for k, v in self.dart_map.items())

    def __call__(self, w: PathWord) -> PathWord:
        return iso_apply(self, w)


def identity_iso(G: GraphOfGroups) -> GogIso:
    return GogIso(
        G,
        G,
        {v: v for v in G.graph.vertices},
        {d: d for d in G.graph.darts},
        {v: IdentityIso(G.group(v)) for v in G.graph.vertices},
        {d: 1 for d in G.graph.darts},
        {d: G.group(G.graph.terminal[d]).identity() for d in G.graph.darts},
    )


def make_iso(G: GraphOfGroups, corrections: Mapping | None = None, vertex_isos: Mapping | None = None,
             edge_signs: Mapping | None = None, codomain: GraphOfGroups | None = None) -> GogIso:
    """Isomorphism with identity graph map; unspecified data defaults to the identity.

    ``corrections`` values may be text, parsed in the group at ``τ(e)``.
    """
    C = codomain or G
    base = identity_iso(G)
    corr = dict(base.corrections)
    for d, x in (corrections or {}).items():
        grp = C.group(C.graph.terminal[d])
        corr[d] = grp.parse(x) if isinstance(x, str) else x
    vis = dict(base.vertex_isos)
    for v, phi in (vertex_isos or {}).items():
        vis[v] = phi
    signs = dict(base.edge_signs)
    for d, s in (edge_signs or {}).items():
        signs[d] = signs[G.graph.bar[d]] = s
    return GogIso(G, C, base.vertex_map, base.dart_map, vis, signs, corr)


def is_identity_iso(H: GogIso) -> bool:
    if not H.graph_is_identity():
        return False
    if any(s != 1 for s in H.edge_signs.values()):
        return False
    cod = H.codomain
    for d, x in H.corrections.items():
        if not cod.group(cod.graph.terminal[H.dart_map[d]]).is_identity(x):
            return False
    return all(phi.is_identity() or group_iso_equal(phi, IdentityIso(phi.source)) for phi in H.vertex_isos.values())


def iso_validate(H: GogIso, check_groups: bool = True) -> Report:
    """Bijectivity and equivariance of the graph map, then the correction identity per dart."""
    report = Report()
    G, C = H.domain, H.codomain
    if check_groups:
        report.extend(gog_validate(G), "domain: ")
        report.extend(gog_validate(C), "codomain: ")
        if not report.ok:
            return report
    vm, dm = H.vertex_map, H.dart_map
    if set(vm) != set(G.graph.vertices) or sorted(vm.values()) != sorted(C.graph.vertices):
        report.add("graph map is not a bijection on vertices")
    if set(dm) != set(G.graph.darts) or sorted(dm.values()) != sorted(C.graph.darts):
        report.add("graph map is not a bijection on darts")
    if not report.ok:
        return report
    for d in G.graph.darts:
        if dm[G.bar(d)] != C.bar(dm[d]):
            report.add(f"dart {d!r}: graph map does not commute with bar")
        if vm[G.graph.terminal[d]] != C.graph.terminal[dm[d]]:
            report.add(f"dart {d!r}: graph map does not commute with τ")
        if G.rank(d) != C.rank(dm[d]):
            report.add(f"dart {d!r}: edge group rank {G.rank(d)} maps to rank {C.rank(dm[d])}")
    for v in G.graph.vertices:
        phi = H.vertex_isos.get(v)
        if phi is None:
            report.add(f"vertex {v!r}: no vertex isomorphism")
        elif phi.source != G.group(v) or phi.target != C.group(vm[v]):
            report.add(f"vertex {v!r}: vertex isomorphism has the wrong source or target group")
        elif isinstance(phi, FreeImages) and isinstance(phi.target, FreeGroup) and not free_images_is_iso(phi):
            report.add(f"vertex {v!r}: vertex map is not an isomorphism")
    if not report.ok:
        return report
    for d in G.graph.darts:
        s = H.edge_signs.get(d)
        if s not in (1, -1) or H.edge_signs.get(G.bar(d)) != s:
            report.add(f"dart {d!r}: edge isomorphism must be x ↦ x^±1 and shared with {G.bar(d)!r}")
            continue
        if G.rank(d) == 0 and s != 1:
            report.add(f"dart {d!r}: trivial edge group has only the identity isomorphism")
        t = C.graph.terminal[dm[d]]
        grp = C.group(t)
        delta = H.corrections.get(d)
        if delta is None or not grp.contains(delta):
            report.add(f"dart {d!r}: correction term missing or not in the group of {t!r}")
            continue
        if G.rank(d) == 1:
            lhs = H.vertex_isos[G.graph.terminal[d]](G.image(d))
            rhs = grp.mul(grp.mul(delta, C.edge_image(dm[d], s)), grp.inv(delta))
            if not grp.equal(lhs, rhs):
                report.add(
                    f"dart {d!r}: correction identity fails: H(f_e(x)) = {grp.format(lhs)} "
                    f"but δ·f'(x^{s})·δ⁻¹ = {grp.format(rhs)}"
                )
    return report


def iso_apply(H: GogIso, w: PathWord) -> PathWord:
    """Image of a path word: ``g ↦ H_v(g)`` and ``t_e ↦ δ(ē) t_{H(e)} δ(e)⁻¹``, reduced."""
    C = H.codomain
    bar = H.domain.graph.bar
    vm = H.vertex_map
    verts, elems, darts = [], [], []
    for i, (v, x) in enumerate(zip(w.vertices, w.elements)):
        y = H.vertex_isos[v](x)
        grp = C.group(vm[v])
        if i == 0:
            verts.append(vm[v])
            elems.append(y)
        else:
            elems[-1] = grp.mul(elems[-1], y)
        if i < w.length:
            d = w.darts[i]
            elems[-1] = grp.mul(elems[-1], H.corrections[bar[d]])
            t = C.graph.terminal[H.dart_map[d]]
            darts.append(H.dart_map[d])
            verts.append(t)
            elems.append(C.group(t).inv(H.corrections[d]))
    return pw_reduce(C, PathWord(tuple(verts), tuple(elems), tuple(darts)))


def iso_compose(H2: GogIso, H1: GogIso) -> GogIso:
    """``H2 ∘ H1``, with ``δ(e) = H2_{τ(H1 e)}(δ1(e)) · δ2(H1 e)``."""
    if H1.codomain is not H2.domain and H1.codomain != H2.domain:
        raise ValueError("domain mismatch: codomain of the first map is not the domain of the second")
    C = H2.codomain
    vm = {v: H2.vertex_map[H1.vertex_map[v]] for v in H1.vertex_map}
    dm = {d: H2.dart_map[H1.dart_map[d]] for d in H1.dart_map}
    vis = {v: compose_group_isos(H1.vertex_isos[v], H2.vertex_isos[H1.vertex_map[v]]) for v in H1.vertex_map}
    signs = {d: H1.edge_signs[d] * H2.edge_signs[H1.dart_map[d]] for d in H1.dart_map}
    corr = {}
    for d in H1.dart_map:
        d1 = H1.dart_map[d]
        t1 = H2.domain.graph.terminal[d1]
        grp = C.group(C.graph.terminal[dm[d]])
        corr[d] = grp.mul(H2.vertex_isos[t1](H1.corrections[d]), H2.corrections[d1])
    return GogIso(H1.domain, C, vm, dm, vis, signs, corr)


def iso_invert(H: GogIso) -> GogIso:
    """``δ⁻¹(e) = H_{τ(e')}⁻¹(δ(e')⁻¹)`` with ``e' = H⁻¹(e)``."""
    G, C = H.domain, H.codomain
    vinv = {w: v for v, w in H.vertex_map.items()}
    dinv = {e: d for d, e in H.dart_map.items()}
    inv_isos = {v: H.vertex_isos[v].inverse() for v in G.graph.vertices}
    vis = {w: inv_isos[v] for w, v in vinv.items()}
    signs = {e: H.edge_signs[d] for e, d in dinv.items()}
    corr = {}
    for e, d in dinv.items():
        t = G.graph.terminal[d]
        grp = C.group(C.graph.terminal[e])
        corr[e] = inv_isos[t](grp.inv(H.corrections[d]))
    return GogIso(C, G, vinv, dinv, vis, signs, corr)


def iso_equal(H1: GogIso, H2: GogIso) -> bool:
    """Same data: graph maps, signs, corrections and vertex maps on generators."""
    if H1.domain != H2.domain or H1.codomain != H2.codomain:
        return False
    if dict(H1.vertex_map) != dict(H2.vertex_map) or dict(H1.dart_map) != dict(H2.dart_map):
        return False
    if dict(H1.edge_signs) != dict(H2.edge_signs):
        return False
    C = H1.codomain
    for d in H1.dart_map:
        grp = C.group(C.graph.terminal[H1.dart_map[d]])
        if not grp.equal(H1.corrections[d], H2.corrections[d]):
            return False
    return all(group_iso_equal(H1.vertex_isos[v], H2.vertex_isos[v]) for v in H1.vertex_map)


def restrict_iso(H: GogIso, vertices, darts) -> GogIso:
    """Restriction to an ``H``-invariant subgraph."""
    vs = set(vertices)
    ds = set(darts) | {H.domain.bar(d) for d in darts}
    if {H.vertex_map[v] for v in vs} != vs or {H.dart_map[d] for d in ds} != ds:
        raise ValueError("subgraph is not invariant under the graph map")
    G0 = H.domain.restrict(vs, ds)
    C0 = H.codomain.restrict(vs, ds) if H.codomain is not H.domain else G0
    return GogIso(
        G0,
        C0,
        {v: H.vertex_map[v] for v in vs},
        {d: H.dart_map[d] for d in ds},
        {v: H.vertex_isos[v] for v in vs},
        {d: H.edge_signs[d] for d in ds},
        {d: H.corrections[d] for d in ds},
    )


def with_domain(H: GogIso, domain: GraphOfGroups, codomain: GraphOfGroups | None = None) -> GogIso:
    return replace(H, domain=domain, codomain=codomain or domain)


# ---------------------------------------------------------------------------
# Natural equivalences
# ---------------------------------------------------------------------------


def conjugate_edge_map(G: GraphOfGroups, dart, g) -> GraphOfGroups:
    """``G`` with ``f_dart`` replaced by ``ad_{g⁻¹} ∘ f_dart``."""
    if G.rank(dart) == 0:
        return G
    grp = G.group(G.graph.terminal[dart])
    maps = dict(G.edge_maps)
    maps[dart] = grp.mul(grp.mul(grp.inv(g), maps[dart]), g)
    return replace(G, edge_maps=maps)


def elementary_equivalence(G: GraphOfGroups, e0, g0) -> tuple[GraphOfGroups, GogIso]:
    """``(G', H0)``: ``f'_{e0} = ad_{g0⁻¹} f_{e0}``, ``H0`` the identity with ``δ0(e0) = g0``."""
    grp = G.group(G.graph.terminal[e0])
    if not grp.contains(g0):
        raise ValueError(f"g0 does not lie in the group of τ({e0}) = {G.graph.terminal[e0]!r}")
    if grp.is_identity(g0):
        return G, identity_iso(G)
    G1 = conjugate_edge_map(G, e0, g0)
    return G1, make_iso(G, {e0: g0}, codomain=G1)


def twist_corrections(H: GogIso, w: Mapping) -> tuple[GogIso, GogIso]:
    """Change corrections by ``δ'(e) = H_{τ(e)}(w_e)⁻¹ δ(e) w_{H(e)}``.

    ``H`` must be an automorphism.  Returns ``(H', H0)`` where ``H0: G → G'``
    is the natural equivalence with ``f'_e = ad_{w_e⁻¹} f_e`` and
    ``H' = H0 H H0⁻¹``.
    """
    G = H.domain
    if H.codomain != G:
        raise ValueError("correction twisting needs an automorphism")
    ws = {}
    for d in G.graph.darts:
        grp = G.group(G.graph.terminal[d])
        x = w.get(d, grp.identity())
        if isinstance(x, str):
            x = grp.parse(x)
        if not grp.contains(x):
            raise ValueError(f"w[{d!r}] does not lie in the group of {G.graph.terminal[d]!r}")
        ws[d] = x
    G1 = G
    for d in sorted(ws):
        G1 = conjugate_edge_map(G1, d, ws[d])
    H0 = make_iso(G, ws, codomain=G1)
    corr = {}
    for d in G.graph.darts:
        t = G.graph.terminal[d]
        grp = G.group(G.graph.terminal[H.dart_map[d]])
        corr[d] = grp.mul(grp.mul(grp.inv(H.vertex_isos[t](ws[d])), H.corrections[d]), ws[H.dart_map[d]])
    H1 = GogIso(G1, G1, H.vertex_map, H.dart_map, H.vertex_isos, H.edge_signs, corr)
    return H1, H0


# ---------------------------------------------------------------------------
# Semi-conjugation checks
# ---------------------------------------------------------------------------


def _as_map(X, base):
    if isinstance(X, GogIso):
        if X.vertex_map[base] != base:
            raise ValueError(f"isomorphism moves the base point {base!r}")

        def fn(x):
            return iso_apply(X, x)

        return fn
    return X


def check_semi_conjugation(theta: GroupIso, A, B, v=None, v_prime=None) -> bool:
    """True iff ``theta(A(x)) == B(theta(x))`` for every generator ``x`` of theta's source.

    ``A`` and ``B`` are group isomorphisms or graph-of-groups isomorphisms
    (then taken on ``π₁`` at ``v`` resp. ``v_prime``).
    """
    src, tgt = theta.source, theta.target
    if isinstance(src, Pi1Group) and v is not None and src.base != v:
        raise ValueError(f"theta is based at {src.base!r}, not {v!r}")
    if isinstance(tgt, Pi1Group) and v_prime is not None and tgt.base != v_prime:
        raise ValueError(f"theta lands at {tgt.base!r}, not {v_prime!r}")
    a = _as_map(A, getattr(src, "base", v))
    b = _as_map(B, getattr(tgt, "base", v_prime))
    return all(tgt.equal(theta(a(x)), b(theta(x))) for x in src.generators())


class WordMap(GroupIso):
    """Path-group homomorphism given on generators, restricted to ``π₁``.

    ``dart_words[d]`` is the image of ``t_d`` (its bar is mapped to the
    inverse automatically when absent); vertex elements go through
    ``vertex_fns[v]`` when given, otherwise they are carried unchanged to
    ``vertex_map[v]``.
    """

    def __init__(self, src: GraphOfGroups, tgt: GraphOfGroups, base, tgt_base, vertex_map: Mapping,
                 dart_words: Mapping, vertex_fns: Mapping | None = None, inverse_map: "GroupIso | None" = None):
        self.src, self.tgt = src, tgt
        self.vertex_map = dict(vertex_map)
        self.dart_words = dict(dart_words)
        for d, w in list(self.dart_words.items()):
            self.dart_words.setdefault(src.bar(d), tgt.inv(w))
        self.vertex_fns = dict(vertex_fns or {})
        self.source = Pi1Group(src, base)
        self.target = Pi1Group(tgt, tgt_base)
        self._inverse = inverse_map

    def map_word(self, w: PathWord) -> PathWord:
        tgt = self.tgt
        pieces = []
        for i, (v, x) in enumerate(zip(w.vertices, w.elements)):
            fn = self.vertex_fns.get(v)
            pieces.append(fn(x) if fn else tgt.elem(self.vertex_map[v], x))
            if i < w.length:
                pieces.append(self.dart_words[w.darts[i]])
        return tgt.mul(*pieces)

    def __call__(self, x: PathWord) -> PathWord:
        return self.map_word(x)

    def inverse(self) -> GroupIso:
        if self._inverse is None:
            raise NotImplementedError("no inverse attached to this word map")
        return self._inverse

    def rebased(self, base, tgt_base) -> "WordMap":
        return WordMap(self.src, self.tgt, base, tgt_base, self.vertex_map, self.dart_words, self.vertex_fns)
