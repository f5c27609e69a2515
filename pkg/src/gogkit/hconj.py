"""
Twisted conjugacy in the path group.

``w1`` is H-conjugate to ``w2`` when ``w1 = w · w2 · H_*(w)⁻¹`` for some path
word ``w``.  The elementary operation conjugates away the first syllable
``r0 t1``; sweeping it along a word and restarting whenever the path length
drops finds an H-reduced representative together with the conjugator.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .core import GraphOfGroups, PathWord, format_word, pw_reduce
from .isomorphisms import GogIso, iso_apply, iso_invert


def _check_twisted_closed(H: GogIso, w: PathWord) -> None:
    if H.codomain != H.domain:
        raise ValueError("H-conjugation needs an automorphism")
    if w.end != H.vertex_map[w.start]:
        raise ValueError(f"word must run from a vertex v to H(v); got {w.start!r} -> {w.end!r}")


def _prefix(G: GraphOfGroups, w: PathWord) -> PathWord:
    d = w.darts[0]
    t = G.graph.terminal[d]
    return PathWord((w.start, t), (w.elements[0], G.group(t).identity()), (d,))


def twisted(H: GogIso, u: PathWord, w: PathWord) -> PathWord:
    """``u⁻¹ · w · H_*(u)``, reduced."""
    G = H.domain
    return G.mul(G.inv(u), w, iso_apply(H, u))


def elementary_op(H: GogIso, w: PathWord) -> PathWord:
    """``(r0 t1)⁻¹ · w · H_*(r0 t1)``."""
    G = H.domain
    w = pw_reduce(G, w)
    if w.length == 0:
        raise ValueError("the elementary operation needs path length at least 1")
    _check_twisted_closed(H, w)
    return twisted(H, _prefix(G, w), w)


def backward_op(H: GogIso, w: PathWord) -> PathWord:
    """Shorten from the end: ``s · w · H_*(s)⁻¹`` with ``H_*(s) = t_q r_q``."""
    G = H.domain
    w = pw_reduce(G, w)
    if w.length == 0:
        raise ValueError("the backward operation needs path length at least 1")
    d = w.darts[-1]
    o = G.graph.origin(d)
    tail = PathWord((o, w.end), (G.group(o).identity(), w.elements[-1]), (d,))
    s = iso_apply(iso_invert(H), tail)
    return G.mul(s, w, G.inv(tail))


def is_h_reduced(H: GogIso, w: PathWord) -> bool:
    w = pw_reduce(H.domain, w)
    if w.length == 0:
        return True
    return elementary_op(H, w).length == w.length


@dataclass(frozen=True)
class HReduction:
    """``reduced = witness⁻¹ · input · H_*(witness)``."""

    input: PathWord
    reduced: PathWord
    witness: PathWord
    h_length: int
    steps: int = 0

    def verify(self, H: GogIso) -> bool:
        return H.domain.equal(twisted(H, self.witness, self.input), self.reduced)


def h_reduce(H: GogIso, w: PathWord) -> HReduction:
    """Sweep elementary operations, restarting after every drop in path length.

    A sweep that runs its full course (one step per syllable) without a
    drop leaves the current word as the answer.
    """
    G = H.domain
    w0 = pw_reduce(G, w)
    _check_twisted_closed(H, w0)
    cur, u = w0, G.identity(w0.start)
    steps = 0
    while cur.length:
        x, ux, dropped = cur, u, False
        for _ in range(cur.length):
            p = _prefix(G, x)
            nxt = twisted(H, p, x)
            steps += 1
            if nxt.length > x.length:
                raise AssertionError("elementary operation increased path length")
            ux = G.mul(ux, p)
            if nxt.length < cur.length:
                cur, u, dropped = nxt, ux, True
                break
            x = nxt
        if not dropped:
            break
    return HReduction(w0, cur, u, cur.length, steps)


def h_length(H: GogIso, w: PathWord) -> int:
    return h_reduce(H, w).h_length


@dataclass(frozen=True)
class ZeroWitness:
    """``input = (H⁻¹)_*(gamma) · g · gamma⁻¹`` with ``g`` in the group of ``vertex``.

    ``conjugator`` is the H-reduction witness ``u``; ``gamma = H_*(u)``.
    Asked of ``H = H0⁻¹`` this reads ``w = H0_*(gamma) · g · gamma⁻¹``.
    """

    gamma: PathWord
    g: object
    vertex: object
    conjugator: PathWord

    def verify(self, H: GogIso, w: PathWord) -> bool:
        G = H.domain
        lhs = G.mul(self.conjugator, G.elem(self.vertex, self.g), G.inv(self.gamma))
        return G.equal(lhs, w) and G.equal(iso_apply(H, self.conjugator), self.gamma)


def is_h_zero(H: GogIso, w: PathWord) -> ZeroWitness | None:
    hr = h_reduce(H, w)
    if hr.h_length:
        return None
    u = hr.witness
    zw = ZeroWitness(iso_apply(H, u), hr.reduced.elements[0], hr.reduced.start, u)
    if not zw.verify(H, hr.input):
        raise AssertionError("zero witness failed verification")
    return zw


def connected_words(G: GraphOfGroups, start, max_length: int, radius: int, end=None):
    """All connected words from ``start`` of path length ``≤ max_length``.

    Vertex elements range over the ball of the given radius in each vertex
    group.  Order: by length, then by sorted darts, then by ball order.
    """
    balls = {v: G.group(v).ball(radius) for v in G.graph.vertices}
    for q in range(max_length + 1):
        for path in _paths(G, start, q):
            verts = [start] + [G.graph.terminal[d] for d in path]
            if end is not None and verts[-1] != end:
                continue
            for elems in product(*(balls[v] for v in verts)):
                yield PathWord(tuple(verts), tuple(elems), tuple(path))


def _paths(G: GraphOfGroups, start, q: int):
    if q == 0:
        yield ()
        return
    for prefix in _paths(G, start, q - 1):
        here = G.graph.terminal[prefix[-1]] if prefix else start
        for d in G.graph.darts_from(here):
            yield prefix + (d,)


def h_conjugate_bounded(H: GogIso, w1: PathWord, w2: PathWord, max_length: int, radius: int = 2):
    """A conjugator ``w`` with ``w1 = w · w2 · H_*(w)⁻¹`` of bounded size, or ``None``.

    ``None`` only means nothing was found within the bound.
    """
    G = H.domain
    for w in connected_words(G, w1.start, max_length, radius, end=w2.start):
        cand = G.mul(w, w2, G.inv(iso_apply(H, w)))
        if cand.start == w1.start and cand.end == w1.end and G.equal(cand, w1):
            return pw_reduce(G, w)
    return None


def describe(H: GogIso, hr: HReduction) -> str:
    G = H.domain
    return (
        f"reduced={format_word(G, hr.reduced)} witness={format_word(G, hr.witness)} "
        f"h_length={hr.h_length}"
    )


__all__ = [
    "HReduction",
    "ZeroWitness",
    "backward_op",
    "connected_words",
    "elementary_op",
    "h_conjugate_bounded",
    "h_length",
    "h_reduce",
    "is_h_reduced",
    "is_h_zero",
    "describe",
    "twisted",
]
