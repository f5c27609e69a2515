"""
The small canonical graphs of groups used by the tests, demos and CLI goldens.

* ``fix_a``: one vertex ``v`` with ``⟨a⟩``, a loop ``e`` with trivial edge group.
* ``fix_b``: ``e`` from ``u`` (``⟨a,b⟩``) to ``v`` (``⟨c,d⟩``), edge group ``⟨x⟩``,
  ``f_e(x) = c`` and ``f_~e(x) = a``.
* ``fix_c``: ``e`` from ``u`` (``⟨a⟩``) to ``v`` (``⟨c⟩``) and a loop ``f`` at ``v``,
  both with trivial edge groups.
* ``fix_d``: one vertex ``V0`` with ``⟨x,y⟩`` and a loop ``E`` with trivial edge group.
"""
from __future__ import annotations

from .core import FreeGroup, GraphOfGroups
from .foundations import SerreGraph


def make_gog(vertex_groups: dict, edges: list, images: dict | None = None) -> GraphOfGroups:
    """Build from ``{v: names}``, ``[(edge, origin, terminus, rank)]`` and ``{dart: text}``.

    Image texts are parsed in the group of the dart's terminal vertex.
    """
    graph = SerreGraph.from_edges(vertex_groups, [(n, o, t) for n, o, t, _ in edges])
    groups = {v: FreeGroup(names) for v, names in vertex_groups.items()}
    ranks = {}
    for name, _, _, rk in edges:
        ranks[name] = ranks[graph.bar[name]] = rk
    maps = {}
    for d, text in (images or {}).items():
        maps[d] = groups[graph.terminal[d]].parse(text)
    return GraphOfGroups(graph, groups, ranks, maps)


def fix_a() -> GraphOfGroups:
    return make_gog({"v": "a"}, [("e", "v", "v", 0)])


def fix_b() -> GraphOfGroups:
    return make_gog({"u": "ab", "v": "cd"}, [("e", "u", "v", 1)], {"e": "c", "~e": "a"})


def fix_c() -> GraphOfGroups:
    return make_gog({"u": "a", "v": "c"}, [("e", "u", "v", 0), ("f", "v", "v", 0)])


def fix_d() -> GraphOfGroups:
    return make_gog({"V0": ("x", "y")}, [("E", "V0", "V0", 0)])


def chain3() -> GraphOfGroups:
    """Three vertices ``p - q - s`` with a loop at each end; all edge groups trivial."""
    return make_gog(
        {"p": "a", "q": "b", "s": "c"},
        [("g", "p", "q", 0), ("h", "q", "s", 0), ("lp", "p", "p", 0), ("ls", "s", "s", 0)],
    )


GOGS = {"A": fix_a, "B": fix_b, "C": fix_c, "D": fix_d}


# -- isomorphisms on the fixtures ------------------------------------------


def h_a(G=None):
    """FIX-A with ``δ(e) = a``, ``δ(~e) = 1``."""
    from .isomorphisms import make_iso

    G = G or fix_a()
    return make_iso(G, {"e": "a"})


def d_b(G=None):
    """The classical twist on FIX-B with ``δ(e) = c⁻¹``."""
    from .isomorphisms import make_iso

    G = G or fix_b()
    return make_iso(G, {"e": "c^-1"})


def h_c(G=None):
    """FIX-C with ``δ(e) = c`` and ``δ(f) = c``."""
    from .isomorphisms import make_iso

    G = G or fix_c()
    return make_iso(G, {"e": "c", "f": "c"})


def fix_d_data(delta_e: str = "x^2"):
    """Blow-up data on FIX-D: ``(Ḡ, H̄, G0, H0, θ0)``.

    ``H̄`` acts on ``⟨x,y⟩`` by ``x ↦ x, y ↦ y x⁻¹`` with ``δ(E)`` as given;
    the local model is FIX-A with ``H_A`` and ``θ0: x ↦ a, y ↦ t_e``.
    """
    from .core import Pi1Group
    from .isomorphisms import FreeImages, make_iso

    Gbar = fix_d()
    F = Gbar.group("V0")
    Hv = FreeImages(F, F, [F.parse("x"), F.parse("y x^-1")])
    Hbar = make_iso(Gbar, {"E": delta_e}, vertex_isos={"V0": Hv})
    G0 = fix_a()
    H0 = h_a(G0)
    P = Pi1Group(G0, "v")
    theta0 = FreeImages(F, P, [G0.word("a"), G0.word("t[e]")])
    return Gbar, Hbar, G0, H0, theta0
