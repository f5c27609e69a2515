"""
Graphs of groups, their path group and fundamental groups.

A path-group word ``r0 t1 r1 ... tq rq`` is a :class:`PathWord`: the vertex
elements ``r_i`` together with the vertex each one lives at, and the darts
``t_i``. Vertex groups are either explicit free groups (:class:`FreeGroup`)
or fundamental groups of a nested graph of groups (:class:`Pi1Group`); both
expose the same small interface so that reduction never needs to know which
kind it is multiplying in.

Edge groups have rank 0 or 1. An element of a rank-1 edge group is an
integer ``k`` standing for ``x^k``; the edge map is stored as the image of
``x``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .foundations import (
    FreeWord,
    Report,
    SerreGraph,
    WordSyntaxError,
    free_ball,
    fw_commute,
    fw_multiply,
    fw_power_of,
    graph_validate,
    parse_free_word,
    tree_paths,
)


# ---------------------------------------------------------------------------
# Vertex groups
# ---------------------------------------------------------------------------


def default_names(rank: int) -> tuple:
    return tuple(chr(ord("a") + i) for i in range(rank))


class FreeGroup:
    """Explicit free group with named basis."""

    def __init__(self, names: Sequence[str] | int):
        if isinstance(names, int):
            names = default_names(names)
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"repeated generator names {self.names}")

    @property
    def rank(self) -> int:
        return len(self.names)

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeGroup) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"FreeGroup({list(self.names)})"

    def identity(self) -> FreeWord:
        return FreeWord((), self)

    def gen(self, i: int) -> FreeWord:
        return FreeWord(((i, 1),), self)

    def generators(self) -> list:
        return [self.gen(i) for i in range(self.rank)]

    def mul(self, x: FreeWord, y: FreeWord) -> FreeWord:
        return fw_multiply(x, y)

    def inv(self, x: FreeWord) -> FreeWord:
        return x.inverse()

    def pow(self, x: FreeWord, k: int) -> FreeWord:
        return x ** k

    def is_identity(self, x: FreeWord) -> bool:
        return not x.letters

    def equal(self, x: FreeWord, y: FreeWord) -> bool:
        return x.letters == y.letters

    def power_of(self, x: FreeWord, u: FreeWord) -> int | None:
        return fw_power_of(x, u)

    def commute(self, x: FreeWord, y: FreeWord) -> bool:
        return fw_commute(x, y)

    def contains(self, x) -> bool:
        if not isinstance(x, FreeWord):
            return False
        if x.group is not None and x.group != self:
            return False
        return x.max_index() < self.rank

    def ball(self, radius: int) -> list:
        return free_ball(self.rank, radius, self)

    def decompose(self, x: FreeWord) -> list:
        return list(x.letters)

    def format(self, x: FreeWord) -> str:
        return x.format(self.names)

    def parse(self, text: str) -> FreeWord:
        return parse_free_word(text, self.names, self)


class Pi1Group:
    """``π₁(gog, base)`` used as a vertex group; elements are closed words at ``base``."""

    def __init__(self, gog: "GraphOfGroups", base):
        if base not in gog.graph.vertices:
            raise ValueError(f"base {base!r} is not a vertex of the nested graph of groups")
        self.gog = gog
        self.base = base
        self._gens = None

    def __eq__(self, other) -> bool:
        if not isinstance(other, Pi1Group):
            return False
        return self.base == other.base and (self.gog is other.gog or self.gog == other.gog)

    def __hash__(self) -> int:
        return hash(("pi1", self.base))

    def __repr__(self) -> str:
        return f"Pi1Group(base={self.base!r}, vertices={list(self.gog.graph.vertices)})"

    def identity(self) -> "PathWord":
        return self.gog.identity(self.base)

    def generators(self) -> list:
        if self._gens is None:
            self._gens = pi1_generators(self.gog, self.base)
        return list(self._gens)

    def mul(self, x, y):
        return self.gog.mul(x, y)

    def inv(self, x):
        return self.gog.inv(x)

    def pow(self, x, k: int):
        return self.gog.pow(x, k)

    def is_identity(self, x) -> bool:
        return self.gog.is_identity(x)

    def equal(self, x, y) -> bool:
        return pw_equal(self.gog, x, y)

    def power_of(self, x, u) -> int | None:
        return subgroup_power_membership(self.gog, x, u)

    def commute(self, x, y) -> bool:
        return self.equal(self.mul(x, y), self.mul(y, x))

    def contains(self, x) -> bool:
        return isinstance(x, PathWord) and pw_is_pi1(self.gog, x, self.base)

    def ball(self, radius: int) -> list:
        gens = self.generators()
        letters = [g for g in gens] + [self.inv(g) for g in gens]
        seen = {self.identity()}
        out = [self.identity()]
        layer = [self.identity()]
        for _ in range(radius):
            nxt = []
            for w in layer:
                for s in letters:
                    p = self.mul(w, s)
                    if p not in seen:
                        seen.add(p)
                        nxt.append(p)
                        out.append(p)
            layer = nxt
        return out

    def decompose(self, x) -> list:
        return pi1_decompose(self.gog, x, self.base)

    def format(self, x) -> str:
        return "(" + format_word(self.gog, x) + ")"

    def parse(self, text: str):
        return parse_word(self.gog, text, start=self.base)


Group = FreeGroup | Pi1Group


# ---------------------------------------------------------------------------
# Path words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PathWord:
    """``r0 t1 r1 ... tq rq``: ``elements[i]`` lives in the group of ``vertices[i]``."""

    vertices: tuple
    elements: tuple
    darts: tuple = ()

    def __post_init__(self):
        if len(self.vertices) != len(self.elements) or len(self.darts) + 1 != len(self.elements):
            raise ValueError("a path word needs q darts and q+1 vertex elements")

    @property
    def length(self) -> int:
        return len(self.darts)

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    def is_closed(self) -> bool:
        return self.vertices[0] == self.vertices[-1]


# ---------------------------------------------------------------------------
# Graph of groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GraphOfGroups:
    """Serre graph with vertex groups and rank ≤ 1 edge groups.

    ``edge_ranks`` is keyed by dart (pairing ``G_e = G_ē`` is checked by
    :func:`gog_validate`); ``edge_maps[e]`` is ``f_e(x)`` for rank-1 darts.
    """

    graph: SerreGraph
    vertex_groups: Mapping
    edge_ranks: Mapping
    edge_maps: Mapping

    # -- structure ---------------------------------------------------------
    def group(self, v):
        return self.vertex_groups[v]

    def rank(self, dart) -> int:
        return self.edge_ranks[dart]

    def bar(self, dart):
        return self.graph.bar[dart]

    def image(self, dart):
        return self.edge_maps.get(dart)

    def edge_image(self, dart, k: int):
        """``f_dart(x^k)`` in ``G_{τ(dart)}``."""
        grp = self.group(self.graph.terminal[dart])
        if k == 0:
            return grp.identity()
        if self.rank(dart) == 0:
            raise ValueError(f"edge group of {dart!r} is trivial")
        return grp.pow(self.edge_maps[dart], k)

    def edge_power(self, dart, r) -> int | None:
        """``k`` with ``r = f_dart(x^k)``, or ``None`` when ``r ∉ f_dart(G_dart)``."""
        grp = self.group(self.graph.terminal[dart])
        if self.rank(dart) == 0:
            return 0 if grp.is_identity(r) else None
        return grp.power_of(r, self.edge_maps[dart])

    def restrict(self, vertices: Iterable, darts: Iterable) -> "GraphOfGroups":
        vs = set(vertices)
        ds = set(darts)
        ds |= {self.bar(d) for d in ds}
        for d in ds:
            if self.graph.terminal[d] not in vs:
                raise ValueError(f"dart {d!r} leaves the vertex set {sorted(vs)}")
        graph = SerreGraph(
            tuple(sorted(vs)),
            tuple(sorted(ds)),
            {d: self.graph.bar[d] for d in ds},
            {d: self.graph.terminal[d] for d in ds},
        )
        return GraphOfGroups(
            graph,
            {v: self.vertex_groups[v] for v in vs},
            {d: self.edge_ranks[d] for d in ds},
            {d: m for d, m in self.edge_maps.items() if d in ds},
        )

    # -- words -------------------------------------------------------------
    def identity(self, v) -> PathWord:
        return PathWord((v,), (self.group(v).identity(),))

    def elem(self, v, x) -> PathWord:
        return PathWord((v,), (x,))

    def letter(self, dart) -> PathWord:
        o, t = self.graph.origin(dart), self.graph.terminal[dart]
        return PathWord((o, t), (self.group(o).identity(), self.group(t).identity()), (dart,))

    def concat(self, *words: PathWord) -> PathWord:
        """Juxtapose words without reducing; adjacent end/start vertices must agree."""
        verts, elems, darts = list(words[0].vertices), list(words[0].elements), list(words[0].darts)
        for w in words[1:]:
            if verts[-1] != w.vertices[0]:
                raise ValueError(
                    f"cannot concatenate: word ends at {verts[-1]!r} but next starts at {w.vertices[0]!r}"
                )
            grp = self.group(verts[-1])
            elems[-1] = grp.mul(elems[-1], w.elements[0])
            verts.extend(w.vertices[1:])
            elems.extend(w.elements[1:])
            darts.extend(w.darts)
        return PathWord(tuple(verts), tuple(elems), tuple(darts))

    def mul(self, *words: PathWord) -> PathWord:
        return pw_reduce(self, self.concat(*words))

    def inv(self, w: PathWord) -> PathWord:
        return PathWord(
            tuple(reversed(w.vertices)),
            tuple(self.group(v).inv(x) for v, x in zip(reversed(w.vertices), reversed(w.elements))),
            tuple(self.graph.bar[d] for d in reversed(w.darts)),
        )

    def pow(self, w: PathWord, k: int) -> PathWord:
        if k < 0:
            w, k = self.inv(w), -k
        result = self.identity(w.start)
        for _ in range(k):
            result = self.concat(result, w)
        return pw_reduce(self, result)

    def is_identity(self, w: PathWord) -> bool:
        r = pw_reduce(self, w)
        return r.length == 0 and self.group(r.start).is_identity(r.elements[0])

    def reduce(self, w: PathWord) -> PathWord:
        return pw_reduce(self, w)

    def equal(self, w1: PathWord, w2: PathWord) -> bool:
        return pw_equal(self, w1, w2)

    def word(self, text: str, start=None) -> PathWord:
        return parse_word(self, text, start)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def gog_validate(G: GraphOfGroups) -> Report:
    """Graph validity, edge-rank pairing, injectivity and placement of edge images."""
    report = graph_validate(G.graph)
    bar, terminal = G.graph.bar, G.graph.terminal
    for v in G.graph.vertices:
        grp = G.vertex_groups.get(v)
        if grp is None:
            report.add(f"vertex {v!r} has no vertex group")
        elif isinstance(grp, Pi1Group):
            sub = gog_validate(grp.gog)
            report.extend(sub, prefix=f"vertex {v!r} (nested): ")
    for d in G.graph.darts:
        rk = G.edge_ranks.get(d)
        if rk not in (0, 1):
            report.add(f"dart {d!r}: edge group rank must be 0 or 1, got {rk!r}")
            continue
        b = bar.get(d)
        if b is not None and G.edge_ranks.get(b) != rk:
            report.add(f"dart {d!r}: edge group differs from that of {b!r} (G_e must equal G_ē)")
        grp = G.vertex_groups.get(terminal.get(d))
        image = G.edge_maps.get(d)
        if rk == 0:
            if image is not None:
                report.add(f"dart {d!r}: trivial edge group cannot carry an image")
            continue
        if image is None:
            report.add(f"dart {d!r}: rank-1 edge group has no edge map")
            continue
        if grp is None:
            continue
        if not grp.contains(image):
            report.add(f"dart {d!r}: edge map image does not lie in the group of vertex {terminal[d]!r}")
        elif grp.is_identity(image):
            report.add(f"dart {d!r}: edge map not injective (image of generator is 1)")
    return report


def pw_is_connected(G: GraphOfGroups, w: PathWord) -> bool:
    term, bar, vs = G.graph.terminal, G.graph.bar, w.vertices
    for i, d in enumerate(w.darts):
        t = term.get(d)
        if t is None or vs[i + 1] != t or vs[i] != term.get(bar.get(d)):
            return False
    groups = G.vertex_groups
    return all(v in groups for v in vs)


def pw_validate(G: GraphOfGroups, w: PathWord) -> Report:
    report = Report()
    if not pw_is_connected(G, w):
        report.add("word is not connected")
        return report
    for i, (v, x) in enumerate(zip(w.vertices, w.elements)):
        if not G.group(v).contains(x):
            report.add(f"element r{i} does not lie in the group of vertex {v!r}")
    return report


# ---------------------------------------------------------------------------
# Reduction and equality
# ---------------------------------------------------------------------------


def pw_reduce(G: GraphOfGroups, w: PathWord) -> PathWord:
    """Rewrite every backtrack ``t_e f_e(g) t_ē`` to ``f_ē(g)`` until none is left.

    One left-to-right pass with a stack suffices: a rewrite only changes the
    element on top of the stack, so the only new candidate for cancellation
    is at the junction with the next dart.
    """
    if not pw_is_connected(G, w):
        raise ValueError("cannot reduce a disconnected word")
    bar = G.graph.bar
    verts = [w.vertices[0]]
    elems = [w.elements[0]]
    darts: list = []
    for i, d in enumerate(w.darts):
        r_next = w.elements[i + 1]
        if darts and darts[-1] == bar[d]:
            e = darts[-1]
            k = G.edge_power(e, elems[-1])
            if k is not None:
                darts.pop()
                elems.pop()
                verts.pop()
                grp = G.group(verts[-1])
                elems[-1] = grp.mul(grp.mul(elems[-1], G.edge_image(bar[e], k)), r_next)
                continue
        darts.append(d)
        elems.append(r_next)
        verts.append(w.vertices[i + 1])
    return PathWord(tuple(verts), tuple(elems), tuple(darts))


def pw_is_reduced(G: GraphOfGroups, w: PathWord) -> bool:
    bar = G.graph.bar
    for i in range(1, w.length):
        if w.darts[i] == bar[w.darts[i - 1]] and G.edge_power(w.darts[i - 1], w.elements[i]) is not None:
            return False
    return True


def pw_equal(G: GraphOfGroups, w1: PathWord, w2: PathWord) -> bool:
    """Equality in the path group, by reducing ``w1·w2⁻¹``."""
    if w1.start != w2.start or w1.end != w2.end:
        raise ValueError(
            f"endpoint mismatch: {w1.start!r}->{w1.end!r} versus {w2.start!r}->{w2.end!r}"
        )
    d = pw_reduce(G, G.concat(w1, G.inv(w2)))
    return d.length == 0 and G.group(d.start).is_identity(d.elements[0])


def pw_path_type(w: PathWord) -> tuple:
    return w.darts


def pw_cyclic_reduce(G: GraphOfGroups, w: PathWord) -> tuple[PathWord, PathWord]:
    """Return ``(core, conjugator)`` with ``w = conjugator·core·conjugator⁻¹``."""
    w = pw_reduce(G, w)
    if not w.is_closed():
        raise ValueError("cyclic reduction needs a closed word")
    bar, terminal = G.graph.bar, G.graph.terminal
    conj = G.identity(w.start)
    while w.length >= 2 and w.darts[0] == bar[w.darts[-1]]:
        x = w.start
        grp = G.group(x)
        k = G.edge_power(w.darts[-1], grp.mul(w.elements[-1], w.elements[0]))
        if k is None:
            break
        e1 = w.darts[0]
        y = terminal[e1]
        prefix = PathWord((x, y), (w.elements[0], G.group(y).identity()), (e1,))
        inner_elems = list(w.elements[1:-1])
        inner_elems[-1] = G.group(y).mul(inner_elems[-1], G.edge_image(e1, k))
        inner = PathWord(w.vertices[1:-1], tuple(inner_elems), w.darts[1:-1])
        conj = G.mul(conj, prefix)
        w = pw_reduce(G, inner)
    return w, conj


def pw_is_pi1(G: GraphOfGroups, w: PathWord, v) -> bool:
    """True iff ``w`` is a closed connected word issued at ``v``."""
    return w.start == v and w.is_closed() and pw_validate(G, w).ok


def transfer_elements(G: GraphOfGroups, w1: PathWord, w2: PathWord) -> list | None:
    """Edge-group elements relating two reduced words of one path type.

    Returns ``[h_1, ..., h_q]`` with ``r'_0 = r_0 f_{ē1}(h_1)``,
    ``r'_i = f_{e_i}(h_i)⁻¹ r_i f_{ē_{i+1}}(h_{i+1})`` and
    ``r'_q = f_{e_q}(h_q)⁻¹ r_q``, or ``None`` if no such family exists.
    """
    if w1.darts != w2.darts or w1.start != w2.start:
        return None
    bar = G.graph.bar
    hs = []
    carry = None  # f_{e_i}(h_i) acting on the left of r_i
    for i in range(w1.length + 1):
        v = w1.vertices[i]
        grp = G.group(v)
        left = grp.identity() if carry is None else grp.inv(carry)
        # r'_i = left · r_i · f_{ē_{i+1}}(h_{i+1})
        lhs = grp.mul(grp.inv(grp.mul(left, w1.elements[i])), w2.elements[i])
        if i == w1.length:
            if not grp.is_identity(lhs):
                return None
            break
        e = w1.darts[i]
        h = G.edge_power(bar[e], lhs)
        if h is None:
            return None
        hs.append(h)
        carry = G.edge_image(e, h) if h else G.group(G.graph.terminal[e]).identity()
    return hs


# ---------------------------------------------------------------------------
# Fundamental group
# ---------------------------------------------------------------------------


class Conjugation:
    """Base change ``x ↦ W·x·W⁻¹`` from ``π₁(G, end(W))`` to ``π₁(G, start(W))``."""

    def __init__(self, G: GraphOfGroups, W: PathWord):
        if not pw_is_connected(G, W):
            raise ValueError("base change word must be connected")
        self.G = G
        self.W = pw_reduce(G, W)
        self.source = W.end
        self.target = W.start

    def apply(self, x: PathWord) -> PathWord:
        if x.start != self.source or not x.is_closed():
            raise ValueError(f"expected a closed word at {self.source!r}")
        return self.G.mul(self.W, x, self.G.inv(self.W))

    def then(self, other: "Conjugation") -> "Conjugation":
        """``other ∘ self`` as a single base change."""
        return Conjugation(self.G, self.G.mul(other.W, self.W))


def base_change(G: GraphOfGroups, W: PathWord) -> Conjugation:
    return Conjugation(G, W)


def _tree_words(G: GraphOfGroups, v) -> tuple[dict, set]:
    paths, tree = tree_paths(G.graph, v)
    words = {}
    for x, path in paths.items():
        w = G.identity(v)
        for d in path:
            w = G.concat(w, G.letter(d))
        words[x] = w
    return words, set(tree)


def _pi1_layout(G: GraphOfGroups, v):
    gammas, tree = _tree_words(G, v)
    bar = G.graph.bar
    loops = [d for d in G.graph.edges() if d not in tree and bar[d] not in tree]
    offsets, n = {}, 0
    for x in gammas:  # BFS order, base first
        offsets[x] = n
        n += len(G.group(x).generators())
    loop_index = {d: n + i for i, d in enumerate(loops)}
    return gammas, tree, loops, offsets, loop_index


def pi1_generators(G: GraphOfGroups, v) -> list:
    """Spanning-tree generating set of ``π₁(G, v)``.

    Tree-conjugated vertex-group generators (vertices in breadth-first
    order, ``v`` first), then one loop ``γ t_e γ⁻¹`` per non-tree edge.
    """
    gammas, tree, loops, _, _ = _pi1_layout(G, v)
    gens = []
    for x, gx in gammas.items():
        for g in G.group(x).generators():
            gens.append(G.mul(gx, G.elem(x, g), G.inv(gx)))
    for d in loops:
        o, t = G.graph.origin(d), G.graph.terminal[d]
        gens.append(G.mul(gammas[o], G.letter(d), G.inv(gammas[t])))
    return gens


def pi1_decompose(G: GraphOfGroups, w: PathWord, v) -> list:
    """Express a closed word at ``v`` as ``[(generator index, exponent), ...]``.

    Indices refer to :func:`pi1_generators` ``(G, v)``.
    """
    if not (w.start == v and w.is_closed()):
        raise ValueError(f"expected a closed word at {v!r}")
    gammas, tree, loops, offsets, loop_index = _pi1_layout(G, v)
    bar = G.graph.bar
    out = []
    for i, (x, r) in enumerate(zip(w.vertices, w.elements)):
        for j, k in G.group(x).decompose(r):
            out.append((offsets[x] + j, k))
        if i < w.length:
            d = w.darts[i]
            if d in tree or bar[d] in tree:
                continue
            if d in loop_index:
                out.append((loop_index[d], 1))
            else:
                out.append((loop_index[bar[d]], -1))
    return out


def pi1_rank(G: GraphOfGroups) -> int:
    """``1 - χ(G)`` for free vertex groups: the rank of ``π₁`` whenever it is free."""
    chi = 0
    for v in G.graph.vertices:
        grp = G.group(v)
        if not isinstance(grp, FreeGroup):
            raise NotImplementedError("Euler characteristic needs explicit free vertex groups")
        chi += 1 - grp.rank
    for d in G.graph.edges():
        chi -= 1 - G.rank(d)
    return 1 - chi


def subgroup_power_membership(G: GraphOfGroups, r: PathWord, u: PathWord) -> int | None:
    """Return ``k`` with ``r = u^k`` in ``π₁``, or ``None``.

    ``u`` is cyclically reduced first.  A hyperbolic core of path length
    ``q ≥ 1`` has reduced powers of length ``|k|·q``, which pins ``|k|``;
    an elliptic core sends the question into its vertex group.
    """
    r = pw_reduce(G, r)
    if G.is_identity(r):
        return 0
    if G.is_identity(u):
        raise ValueError("u = 1 has only trivial powers")
    core, c = pw_cyclic_reduce(G, u)
    inner = G.mul(G.inv(c), r, c)
    if core.length:
        n, q = inner.length, core.length
        if n % q:
            return None
        k = n // q
        for cand in (k, -k):
            if pw_equal(G, inner, G.pow(core, cand)):
                return cand
        return None
    if inner.length:
        return None
    return G.group(core.start).power_of(inner.elements[0], core.elements[0])


# ---------------------------------------------------------------------------
# Text form of words
# ---------------------------------------------------------------------------

_STABLE = re.compile(r"t\[([^\]]+)\]")


def parse_word(G: GraphOfGroups, text: str, start=None) -> PathWord:
    """Parse ``"a t[e] c^3 t[~e]"``; ``t[d]`` is the stable letter of dart ``d``.

    Vertex letters between stable letters are read in the group of the
    vertex the path is at.  For a word without stable letters the vertex is
    ``start`` or, failing that, the unique vertex whose group knows every
    letter used.
    """
    pieces, darts, pos = [], [], 0
    for m in _STABLE.finditer(text):
        pieces.append((text[pos:m.start()], pos))
        d = m.group(1).strip()
        if d not in G.graph.terminal:
            raise WordSyntaxError(f"unknown dart {d!r} at column {m.start() + 1}", m.start())
        darts.append(d)
        pos = m.end()
    pieces.append((text[pos:], pos))
    if "[" in "".join(p for p, _ in pieces) or "]" in "".join(p for p, _ in pieces):
        raise WordSyntaxError("malformed stable letter; expected t[dart]")
    if darts:
        verts = [G.graph.origin(darts[0])] + [G.graph.terminal[d] for d in darts]
        if start is not None and start != verts[0]:
            raise ValueError(f"word starts at {verts[0]!r}, not {start!r}")
    elif start is not None:
        verts = [start]
    else:
        verts = [_infer_vertex(G, pieces[0][0])]
    elems = []
    for v, (chunk, offset) in zip(verts, pieces):
        grp = G.group(v)
        if isinstance(grp, Pi1Group) and chunk.strip() not in ("", "1"):
            raise WordSyntaxError(f"text form cannot name elements of the nested group at {v!r}", offset)
        try:
            elems.append(grp.parse(chunk) if chunk.strip() else grp.identity())
        except WordSyntaxError as exc:
            raise WordSyntaxError(f"{exc} (vertex {v!r})", offset + exc.position) from None
    return PathWord(tuple(verts), tuple(elems), tuple(darts))


def _infer_vertex(G: GraphOfGroups, chunk: str):
    candidates = []
    for v in G.graph.vertices:
        grp = G.group(v)
        if not isinstance(grp, FreeGroup):
            continue
        try:
            parse_free_word(chunk, grp.names)
        except WordSyntaxError:
            continue
        candidates.append(v)
    if len(candidates) == 1:
        return candidates[0]
    if not candidates:
        raise WordSyntaxError(f"no vertex group contains every letter of {chunk.strip()!r}")
    raise ValueError(f"word {chunk.strip()!r} is ambiguous between vertices {candidates}; give a start vertex")


def format_word(G: GraphOfGroups, w: PathWord) -> str:
    parts = []
    for i, (v, x) in enumerate(zip(w.vertices, w.elements)):
        grp = G.group(v)
        if not grp.is_identity(x):
            parts.append(grp.format(x))
        if i < w.length:
            parts.append(f"t[{w.darts[i]}]")
    return " ".join(parts) if parts else f"1@{w.start}"
