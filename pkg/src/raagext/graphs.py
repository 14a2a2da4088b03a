"""Finite simplicial graphs with a fixed total vertex order.

The vertex order (input order) is the single source of determinism for
everything downstream: normal forms, coset representatives, snapshot ids
and all tie-breaking.  Graphs are immutable and hashable, so they can key
memoization caches and be shared freely across threads.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Optional, Sequence


class GraphError(ValueError):
    pass


class GraphParseError(GraphError):
    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


_FULL = -1  # ~0, every bit set


class SimplicialGraph:
    """Finite simple graph: no loops, no multi-edges, opaque string labels."""

    __slots__ = ("_labels", "_index", "_adj", "_star", "_edge_pairs",
                 "_noncomm", "_hash")

    def __init__(self, vertices: Iterable[str], edges: Iterable = ()):
        labels = tuple(str(v) for v in vertices)
        index = {}
        for i, lab in enumerate(labels):
            if lab in index:
                raise GraphError(f"duplicate vertex {lab!r}")
            index[lab] = i
        n = len(labels)
        adj = [0] * n
        pairs = set()
        for e in edges:
            u, w = e
            iu, iw = index.get(str(u)), index.get(str(w))
            if iu is None or iw is None:
                raise GraphError(f"edge {e!r} has an endpoint that is not a vertex")
            if iu == iw:
                raise GraphError(f"loop at vertex {u!r}")
            adj[iu] |= 1 << iw
            adj[iw] |= 1 << iu
            pairs.add((min(iu, iw), max(iu, iw)))
        self._labels = labels
        self._index = index
        self._adj = tuple(adj)
        self._star = tuple(a | (1 << i) for i, a in enumerate(adj))
        self._edge_pairs = tuple(sorted(pairs))
        # vertices whose generators do NOT commute with i, including i itself
        self._noncomm = tuple(
            tuple(j for j in range(n) if j != i and not (adj[i] >> j) & 1) + (i,)
            for i in range(n)
        )
        self._hash = hash((labels, self._edge_pairs))

    # -- basic accessors -------------------------------------------------

    @property
    def vertices(self) -> tuple:
        return self._labels

    @property
    def n(self) -> int:
        return len(self._labels)

    @property
    def edges(self) -> tuple:
        return tuple((self._labels[i], self._labels[j]) for i, j in self._edge_pairs)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise GraphError(f"unknown vertex {label!r}") from None

    def label(self, i: int) -> str:
        return self._labels[i]

    def adjacent(self, u: str, w: str) -> bool:
        return bool((self._adj[self.index(u)] >> self.index(w)) & 1)

    def degree(self, v: str) -> int:
        return bin(self._adj[self.index(v)]).count("1")

    def link(self, v: str) -> tuple:
        m = self._adj[self.index(v)]
        return self._mask_labels(m)

    def star(self, v: str) -> tuple:
        m = self._star[self.index(v)]
        return self._mask_labels(m)

    def _mask_labels(self, mask: int) -> tuple:
        return tuple(l for i, l in enumerate(self._labels) if (mask >> i) & 1)

    def _mask_of(self, labels: Iterable[str]) -> int:
        m = 0
        for l in labels:
            m |= 1 << self.index(l)
        return m

    def __eq__(self, other) -> bool:
        return (isinstance(other, SimplicialGraph)
                and self._labels == other._labels
                and self._edge_pairs == other._edge_pairs)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"SimplicialGraph({list(self._labels)!r}, {len(self._edge_pairs)} edges)"

    # -- constructions ---------------------------------------------------

    def opposite(self) -> "SimplicialGraph":
        edges = [(self._labels[i], self._labels[j])
                 for i, j in itertools.combinations(range(self.n), 2)
                 if not (self._adj[i] >> j) & 1]
        return SimplicialGraph(self._labels, edges)

    def induced(self, subset: Iterable[str]) -> "SimplicialGraph":
        keep = {self.index(l) for l in subset}
        labels = [l for i, l in enumerate(self._labels) if i in keep]
        edges = [(self._labels[i], self._labels[j]) for i, j in self._edge_pairs
                 if i in keep and j in keep]
        return SimplicialGraph(labels, edges)

    # -- predicates and invariants ----------------------------------------

    def is_clique(self, subset: Iterable[str]) -> bool:
        idx = [self.index(l) for l in subset]
        return all((self._adj[i] >> j) & 1 for i, j in itertools.combinations(idx, 2))

    def _components(self, vertex_mask: int = _FULL, adj: Optional[Sequence[int]] = None):
        adj = self._adj if adj is None else adj
        todo = [i for i in range(self.n) if (vertex_mask >> i) & 1]
        seen = set()
        comps = []
        for s in todo:
            if s in seen:
                continue
            comp = []
            stack = [s]
            seen.add(s)
            while stack:
                i = stack.pop()
                comp.append(i)
                m = adj[i] & vertex_mask
                while m:
                    b = m & -m
                    j = b.bit_length() - 1
                    m ^= b
                    if j not in seen:
                        seen.add(j)
                        stack.append(j)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self._components()) == 1

    def shortest_path(self, u: str, w: str) -> tuple:
        """BFS path from u to w inclusive; ties break toward smaller indices."""
        s, t = self.index(u), self.index(w)
        prev = {s: -1}
        frontier = [s]
        while frontier and t not in prev:
            nxt = []
            for x in frontier:
                m = self._adj[x]
                while m:
                    b = m & -m
                    y = b.bit_length() - 1
                    m ^= b
                    if y not in prev:
                        prev[y] = x
                        nxt.append(y)
            frontier = nxt
        if t not in prev:
            raise GraphError(f"no path from {u!r} to {w!r}")
        path = [t]
        while path[-1] != s:
            path.append(prev[path[-1]])
        return tuple(self._labels[i] for i in reversed(path))

    def diameter(self) -> int:
        best = 0
        for s in range(self.n):
            dist = {s: 0}
            frontier = [s]
            while frontier:
                nxt = []
                for u in frontier:
                    m = self._adj[u]
                    while m:
                        b = m & -m
                        w = b.bit_length() - 1
                        m ^= b
                        if w not in dist:
                            dist[w] = dist[u] + 1
                            nxt.append(w)
                frontier = nxt
            if len(dist) != self.n:
                raise GraphError("diameter of a disconnected graph")
            best = max(best, max(dist.values()))
        return best

    def is_anti_connected(self) -> bool:
        return self.opposite().is_connected()

    def is_triangle_free(self) -> bool:
        return all(not self._adj[i] & self._adj[j]
                   for i, j in self._edge_pairs)

    def is_square_free(self) -> bool:
        # no induced 4-cycle: four vertices, exactly four edges, all degrees two
        for quad in itertools.combinations(range(self.n), 4):
            deg = [sum(1 for j in quad if j != i and (self._adj[i] >> j) & 1)
                   for i in quad]
            if deg == [2, 2, 2, 2]:
                return False
        return True

    def split_join(self, subset: Iterable[str]):
        """Split ``subset`` as A disjoint-union B with every cross pair an edge.

        Returns the two parts (sorted by size, then labels) or None when the
        induced opposite graph on the subset is connected, i.e. no split
        exists.
        """
        idx = sorted(self.index(l) for l in subset)
        if len(idx) < 2:
            return None
        mask = 0
        for i in idx:
            mask |= 1 << i
        opp = tuple((~self._adj[i]) & mask & ~(1 << i) for i in range(self.n))
        comps = self._components(mask, opp)
        if len(comps) < 2:
            return None
        first = comps[0]
        rest = sorted(j for c in comps[1:] for j in c)
        a = tuple(self._labels[i] for i in first)
        b = tuple(self._labels[i] for i in rest)
        parts = sorted([a, b], key=lambda p: (len(p), p))
        return tuple(parts[0]), tuple(parts[1])

    def girth(self):
        """Length of the shortest cycle; math.inf for forests."""
        best = math.inf
        for s in range(self.n):
            dist = {s: 0}
            parent = {s: -1}
            frontier = [s]
            while frontier:
                nxt = []
                for u in frontier:
                    m = self._adj[u]
                    while m:
                        b = m & -m
                        w = b.bit_length() - 1
                        m ^= b
                        if w not in dist:
                            dist[w] = dist[u] + 1
                            parent[w] = u
                            nxt.append(w)
                        elif w != parent[u] and dist[w] >= dist[u]:
                            best = min(best, dist[u] + dist[w] + 1)
                frontier = nxt
        return best

    def clique_graph(self, size_cap: int = 16) -> "SimplicialGraph":
        """Graph of nonempty cliques, adjacent when the union is a clique.

        Clique enumeration is exponential, so graphs above ``size_cap``
        vertices are rejected.
        """
        if self.n > size_cap:
            raise GraphError(
                f"clique_graph refused: {self.n} vertices exceeds cap {size_cap}")
        cliques = []

        def extend(current: tuple, common: int, start: int):
            if current:
                cliques.append(current)
            m = common & ~((1 << start) - 1) if start else common
            while m:
                b = m & -m
                j = b.bit_length() - 1
                m ^= b
                extend(current + (j,), common & self._adj[j], j + 1)

        extend((), (1 << self.n) - 1, 0)
        cliques.sort(key=lambda c: (len(c), c))
        single = all(len(l) == 1 for l in self._labels)
        join = "" if single else ","
        labels = [join.join(self._labels[i] for i in c) for c in cliques]
        masks = []
        for c in cliques:
            m = 0
            for i in c:
                m |= 1 << i
            masks.append(m)
        edges = []
        for x, y in itertools.combinations(range(len(cliques)), 2):
            u = masks[x] | masks[y]
            if u == masks[x] or u == masks[y] or self._mask_is_clique(u):
                edges.append((labels[x], labels[y]))
        return SimplicialGraph(labels, edges)

    def _mask_is_clique(self, mask: int) -> bool:
        m = mask
        while m:
            b = m & -m
            i = b.bit_length() - 1
            m ^= b
            if mask & ~self._star[i]:
                return False
        return True

    # -- text formats ------------------------------------------------------

    @classmethod
    def from_text(cls, text: str) -> "SimplicialGraph":
        """Parse the one-line-per-vertex format ``v: u w x``.

        Neighbor lists must be symmetric; a vertex listed on the right of a
        line must list that line's vertex back, otherwise the input is
        rejected.
        """
        order = []
        nbrs = {}
        for ln, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if ":" not in line:
                raise GraphParseError("expected 'vertex: neighbors'", ln)
            head, tail = line.split(":", 1)
            v = head.strip()
            if not v:
                raise GraphParseError("empty vertex name", ln)
            if v in nbrs:
                raise GraphParseError(f"vertex {v!r} declared twice", ln)
            order.append(v)
            nbrs[v] = (tail.split(), ln)
        edges = []
        for v in order:
            outs, ln = nbrs[v]
            for w in outs:
                if w not in nbrs:
                    raise GraphParseError(f"neighbor {w!r} of {v!r} is not declared", ln)
                if w == v:
                    raise GraphParseError(f"loop at {v!r}", ln)
                if v not in nbrs[w][0]:
                    raise GraphParseError(
                        f"asymmetric adjacency: {v!r} lists {w!r} but not conversely", ln)
                if order.index(v) < order.index(w):
                    edges.append((v, w))
        return cls(order, edges)

    def to_text(self) -> str:
        lines = []
        for v in self._labels:
            lines.append(f"{v}: " + " ".join(self.link(v)))
        return "\n".join(lines) + "\n"

    def to_dot(self, name: str = "G") -> str:
        out = [f"graph {name} {{"]
        for v in self._labels:
            out.append(f'  "{v}";')
        for u, w in self.edges:
            out.append(f'  "{u}" -- "{w}";')
        out.append("}")
        return "\n".join(out) + "\n"

    # -- stock graphs ------------------------------------------------------

    @staticmethod
    def _default_labels(n: int):
        if n <= 26:
            return [chr(ord("a") + i) for i in range(n)]
        return [f"v{i}" for i in range(n)]

    @classmethod
    def cycle(cls, n: int, labels=None) -> "SimplicialGraph":
        if n < 3:
            raise GraphError("cycle needs at least 3 vertices")
        labels = labels or cls._default_labels(n)
        edges = [(labels[i], labels[(i + 1) % n]) for i in range(n)]
        return cls(labels, edges)

    @classmethod
    def path(cls, n: int, labels=None) -> "SimplicialGraph":
        labels = labels or cls._default_labels(n)
        edges = [(labels[i], labels[i + 1]) for i in range(n - 1)]
        return cls(labels, edges)

    @classmethod
    def discrete(cls, n: int, labels=None) -> "SimplicialGraph":
        return cls(labels or cls._default_labels(n), [])

    @classmethod
    def complete(cls, n: int, labels=None) -> "SimplicialGraph":
        labels = labels or cls._default_labels(n)
        return cls(labels, itertools.combinations(labels, 2))


def builtin_graph(name: str) -> Optional[SimplicialGraph]:
    """Stock graph by short name: c5, p4, d3, k4 and friends."""
    if len(name) < 2:
        return None
    try:
        n = int(name[1:])
    except ValueError:
        return None
    head = name[0].lower()
    if head == "c" and n >= 3:
        return SimplicialGraph.cycle(n)
    if head == "p" and n >= 1:
        return SimplicialGraph.path(n)
    if head == "d" and n >= 1:
        return SimplicialGraph.discrete(n)
    if head == "k" and n >= 1:
        return SimplicialGraph.complete(n)
    return None
