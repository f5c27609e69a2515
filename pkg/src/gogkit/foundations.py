"""
Free-group words and Serre graphs.

Everything above this module reduces its decision problems to the word
arithmetic defined here: free reduction, powers, primitive roots and
conjugacy in finitely generated free groups, plus the combinatorics of
graphs with an orientation-reversing involution on their darts.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence


class Generator(NamedTuple):
    group: Hashable
    index: int


Letter = tuple  # (generator index, nonzero exponent)


def _free_reduce(letters: Iterable[Letter]) -> tuple:
    out: list = []
    for g, k in letters:
        if k == 0:
            continue
        if out and out[-1][0] == g:
            s = out[-1][1] + k
            if s:
                out[-1] = (g, s)
            else:
                out.pop()
        else:
            out.append((g, k))
    return tuple(out)


@dataclass(frozen=True, slots=True)
class FreeWord:
    """Freely reduced word stored as exponent runs ``((gen, exp), ...)``.

    ``group`` tags the owning free group; it does not take part in equality,
    so the identity of one group compares equal to the identity of another.
    Build words with :meth:`from_letters` (which reduces) rather than the raw
    constructor unless the runs are already reduced.
    """

    letters: tuple = ()
    group: Hashable = field(default=None, compare=False)

    @classmethod
    def from_letters(cls, letters: Iterable[Letter], group: Hashable = None) -> "FreeWord":
        return cls(_free_reduce(letters), group)

    @classmethod
    def generator(cls, index: int, group: Hashable = None) -> "FreeWord":
        return cls(((index, 1),), group)

    def __len__(self) -> int:
        return sum(abs(k) for _, k in self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return fw_multiply(self, other)

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple((g, -k) for g, k in reversed(self.letters)), self.group)

    def __pow__(self, n: int) -> "FreeWord":
        if n < 0:
            return self.inverse() ** (-n)
        result = FreeWord((), self.group)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def expanded(self) -> tuple:
        """Letter sequence with unit exponents, e.g. ``a^2 b^-1 -> (a, a, b^-1)``."""
        out = []
        for g, k in self.letters:
            s = 1 if k > 0 else -1
            out.extend([(g, s)] * abs(k))
        return tuple(out)

    def max_index(self) -> int:
        return max((g for g, _ in self.letters), default=-1)

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.letters:
            return "1"
        parts = []
        for g, k in self.letters:
            name = names[g] if names is not None else f"x{g}"
            parts.append(name if k == 1 else f"{name}^{k}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"FreeWord({self.format()!r})"


class WordSyntaxError(ValueError):
    """A word string could not be tokenised against the given generator names."""

    def __init__(self, message: str, position: int = 0):
        super().__init__(message)
        self.position = position


_TOKEN = re.compile(r"([^\s^*\[\]]+)(?:\^(-?\d+))?")


def parse_free_word(text: str, names: Sequence[str], group: Hashable = None) -> FreeWord:
    """Parse ``"a^2 b^-1"`` (or ``"a a b^-1"``, ``"ab"`` for one-letter names)."""
    index = {n: i for i, n in enumerate(names)}
    text = text.strip()
    if text in ("", "1"):
        return FreeWord((), group)
    letters = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace() or text[pos] in "*·":
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise WordSyntaxError(f"unexpected character {text[pos]!r} at column {pos + 1}", pos)
        name, exp = m.group(1), int(m.group(2)) if m.group(2) is not None else 1
        if name == "1" and exp == 1:
            pass
        elif name in index:
            letters.append((index[name], exp))
        elif all(ch in index for ch in name):
            chars = [(index[ch], 1) for ch in name]
            chars[-1] = (chars[-1][0], exp)
            letters.extend(chars)
        else:
            raise WordSyntaxError(f"unknown generator {name!r} at column {pos + 1}", pos)
        pos = m.end()
    return FreeWord.from_letters(letters, group)


def fw_multiply(u: FreeWord, v: FreeWord) -> FreeWord:
    """Freely reduced product ``u·v``.

    Only the junction needs cancelling since both inputs are reduced.
    """
    if u.group is not None and v.group is not None and u.group != v.group:
        raise ValueError(f"cannot multiply words of different groups {u.group!r} and {v.group!r}")
    group = u.group if u.group is not None else v.group
    a, b = u.letters, v.letters
    if not a:
        return FreeWord(b, group)
    if not b:
        return FreeWord(a, group)
    i, j = len(a) - 1, 0
    while i >= 0 and j < len(b) and a[i][0] == b[j][0]:
        s = a[i][1] + b[j][1]
        if s:
            return FreeWord(a[:i] + ((a[i][0], s),) + b[j + 1:], group)
        i -= 1
        j += 1
    return FreeWord(a[: i + 1] + b[j:], group)


def fw_cyclic_reduce(w: FreeWord) -> tuple[FreeWord, FreeWord]:
    """Return ``(core, c)`` with ``w = c·core·c⁻¹`` and ``core`` cyclically reduced."""
    letters = list(w.letters)
    prefix = []
    while len(letters) >= 2 and letters[0][0] == letters[-1][0]:
        g, k0 = letters[0]
        k1 = letters[-1][1]
        prefix.append((g, k0))
        if k0 + k1 == 0:
            letters = letters[1:-1]
        else:
            # a^k0 X a^k1 = a^k0 (X a^(k0+k1)) a^-k0; X starts and ends off a
            letters = letters[1:-1] + [(g, k0 + k1)]
            break
    return FreeWord(tuple(letters), w.group), FreeWord.from_letters(prefix, w.group)


def fw_power_of(w: FreeWord, u: FreeWord) -> int | None:
    """Return ``k`` with ``w = u^k`` or ``None``; ``k`` is unique when ``u ≠ 1``."""
    if w.is_identity():
        return 0
    if u.is_identity():
        raise ValueError("u = 1 has only trivial powers")
    if len(u.letters) == 1:
        (g, e), = u.letters
        if len(w.letters) != 1 or w.letters[0][0] != g or w.letters[0][1] % e:
            return None
        return w.letters[0][1] // e
    core, c = fw_cyclic_reduce(u)
    inner = c.inverse() * w * c
    n, m = len(inner), len(core)
    if n % m:
        return None
    k = n // m
    if core ** k == inner:
        return k
    if core ** (-k) == inner:
        return -k
    return None


def _smallest_period(seq: tuple) -> int:
    n = len(seq)
    for d in range(1, n + 1):
        if n % d == 0 and seq[:d] * (n // d) == seq:
            return d
    return n


def fw_primitive_root(w: FreeWord) -> tuple[FreeWord, int]:
    """Return ``(root, p)`` with ``w = root^p``, ``p ≥ 1`` and ``root`` not a proper power."""
    if w.is_identity():
        raise ValueError("the identity has no primitive root")
    core, c = fw_cyclic_reduce(w)
    seq = core.expanded()
    d = _smallest_period(seq)
    root = FreeWord.from_letters(seq[:d], w.group)
    return c * root * c.inverse(), len(seq) // d


def fw_conjugacy(u: FreeWord, v: FreeWord) -> FreeWord | None:
    """Return ``c`` with ``u = c·v·c⁻¹`` or ``None`` if ``u`` and ``v`` are not conjugate."""
    cu, au = fw_cyclic_reduce(u)
    cv, av = fw_cyclic_reduce(v)
    su, sv = cu.expanded(), cv.expanded()
    if len(su) != len(sv):
        return None
    n = len(sv)
    # v' = x·y and u' = y·x = y·v'·y⁻¹; try y = empty first
    for i in range(n, 0, -1) if n else [0]:
        x, y = sv[:i], sv[i:]
        if y + x == su:
            yw = FreeWord.from_letters(y, u.group)
            return au * yw * av.inverse()
    return None


def fw_commute(u: FreeWord, v: FreeWord) -> bool:
    return u * v == v * u


def free_ball(rank: int, radius: int, group: Hashable = None) -> list[FreeWord]:
    """All reduced words of letter length ≤ ``radius``, shortlex ordered."""
    out = [FreeWord((), group)]
    layer = [()]
    for _ in range(radius):
        nxt = []
        for seq in layer:
            for g in range(rank):
                for s in (1, -1):
                    if seq and seq[-1] == (g, -s):
                        continue
                    nxt.append(seq + ((g, s),))
        out.extend(FreeWord.from_letters(seq, group) for seq in nxt)
        layer = nxt
    return out


# ---------------------------------------------------------------------------
# Serre graphs
# ---------------------------------------------------------------------------


def inverse_name(dart: str) -> str:
    """Serialized name of the inverse dart: ``e <-> ~e``."""
    return dart[1:] if dart.startswith("~") else "~" + dart


@dataclass
class Report:
    """Outcome of a validation: ``ok`` iff no issues were found."""

    issues: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def __bool__(self) -> bool:
        return self.ok

    def add(self, message: str) -> None:
        self.issues.append(message)

    def extend(self, other: "Report", prefix: str = "") -> None:
        self.issues.extend(prefix + m for m in other.issues)


@dataclass(frozen=True)
class SerreGraph:
    """Graph in the sense of Serre: darts with an involution ``bar`` and terminal map."""

    vertices: tuple
    darts: tuple
    bar: Mapping
    terminal: Mapping

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable[tuple]) -> "SerreGraph":
        """Build from ``(name, origin, terminus)`` triples; the inverse of ``e`` is ``~e``."""
        bar, terminal = {}, {}
        for name, origin, terminus in edges:
            inv = inverse_name(name)
            bar[name], bar[inv] = inv, name
            terminal[name], terminal[inv] = terminus, origin
        return cls(tuple(sorted(vertices)), tuple(sorted(bar)), bar, terminal)

    def origin(self, dart: str):
        return self.terminal[self.bar[dart]]

    def darts_from(self, v) -> list:
        return [d for d in self.darts if self.origin(d) == v]

    def darts_into(self, v) -> list:
        return [d for d in self.darts if self.terminal[d] == v]

    def valence(self, v) -> int:
        return len(self.darts_into(v))

    def edges(self) -> list:
        """One representative per dart pair (the smaller name)."""
        return [d for d in self.darts if d <= self.bar[d]]

    def edge_key(self, dart: str) -> str:
        return min(dart, self.bar[dart])


@dataclass(frozen=True)
class Orientation:
    positive: frozenset

    @classmethod
    def default(cls, graph: SerreGraph) -> "Orientation":
        return cls(frozenset(graph.edges()))

    def validate(self, graph: SerreGraph) -> Report:
        report = Report()
        for d in graph.darts:
            inside = d in self.positive
            bar_inside = graph.bar[d] in self.positive
            if inside == bar_inside:
                report.add(f"dart {d!r}: exactly one of {d!r}, {graph.bar[d]!r} must be positive")
        for d in self.positive - set(graph.darts):
            report.add(f"dart {d!r} is not in the graph")
        return report


def _components(graph: SerreGraph) -> list[set]:
    adj = {v: set() for v in graph.vertices}
    for d in graph.darts:
        a, b = graph.terminal.get(graph.bar.get(d)), graph.terminal.get(d)
        if a in adj and b in adj:
            adj[a].add(b)
            adj[b].add(a)
    seen, comps = set(), []
    for v in graph.vertices:
        if v in seen:
            continue
        comp, queue = {v}, deque([v])
        while queue:
            x = queue.popleft()
            for y in sorted(adj[x]):
                if y not in comp:
                    comp.add(y)
                    queue.append(y)
        seen |= comp
        comps.append(comp)
    return comps


def graph_validate(graph: SerreGraph) -> Report:
    """Check the involution, its freeness of fixed points, terminal map and connectedness."""
    report = Report()
    if not graph.vertices:
        report.add("graph is empty")
        return report
    vset = set(graph.vertices)
    for d in graph.darts:
        b = graph.bar.get(d)
        if b is None:
            report.add(f"dart {d!r} has no inverse")
            continue
        if b == d:
            report.add(f"dart {d!r}: involution has fixed point (bar({d}) = {d})")
        elif graph.bar.get(b) != d:
            report.add(f"dart {d!r}: bar is not an involution (bar(bar({d})) = {graph.bar.get(b)!r})")
        if b not in graph.darts:
            report.add(f"dart {d!r}: inverse {b!r} is not a dart of the graph")
        if graph.terminal.get(d) not in vset:
            report.add(f"dart {d!r}: terminal vertex {graph.terminal.get(d)!r} is not a vertex")
    comps = _components(graph)
    if len(comps) > 1:
        names = "; ".join(",".join(map(str, sorted(c))) for c in comps)
        report.add(f"graph is disconnected: components {names}")
    return report


def spanning_tree(graph: SerreGraph, root) -> frozenset:
    """Breadth-first spanning tree from ``root``; darts are oriented away from the root."""
    if root not in graph.vertices:
        raise ValueError(f"root {root!r} is not a vertex of the graph")
    return frozenset(tree_paths(graph, root)[1])


def tree_paths(graph: SerreGraph, root) -> tuple[dict, list]:
    """Return ``(paths, tree)``: the tree path (tuple of darts) from ``root`` to each vertex."""
    if root not in graph.vertices:
        raise ValueError(f"root {root!r} is not a vertex of the graph")
    paths = {root: ()}
    tree = []
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for d in graph.darts_from(x):
            y = graph.terminal[d]
            if y not in paths:
                paths[y] = paths[x] + (d,)
                tree.append(d)
                queue.append(y)
    if len(paths) != len(graph.vertices):
        missing = sorted(set(graph.vertices) - set(paths))
        raise ValueError(f"graph is disconnected; unreachable from {root!r}: {missing}")
    return paths, tree
