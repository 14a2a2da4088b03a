"""Extension-graph machinery: canonical conjugate vertices, finite budgeted
snapshots, graph and covering distances, copy intersections.

A vertex of the extension graph is a conjugate v^g of a vertex generator.
Its stabilizer under right conjugation is the star subgroup of v, so the
pair (v, canonical right-coset representative of <st(v)> g) is a faithful
canonical name.  Coset representatives are obtained by stripping the
maximal prefix supported in st(v); one strip suffices, since a second
star prefix surviving the first would contradict maximality.

Snapshots materialize the union of the copies of the base graph over all
conjugators within a budget (word length at most L, letter runs at most E
in the canonical form).  Every edge of the extension graph lies in such a
copy: if u^k and w^h commute then u^{kh^-1} lies in the star subgroup of w,
which forces u, w adjacent in the base graph and exhibits a common
conjugator.  build_snapshot still verifies this against the defining
commutator test on demand (verify_edges), keeping the algebraic criterion
authoritative.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional

from .graphs import GraphError, SimplicialGraph
from .words import (Letters, GroupElement, format_word, invert_letters,
                    iota_split, max_run, mult, parse_word, reduce_letters,
                    star_length, support_mask)


# ---------------------------------------------------------------------------
# canonical vertices


@dataclass(frozen=True)
class ExtVertex:
    graph: SimplicialGraph
    base: int            # vertex index in the base graph
    conj: Letters        # canonical coset representative, star prefix stripped

    @property
    def base_label(self) -> str:
        return self.graph.label(self.base)

    def element(self) -> GroupElement:
        """The conjugate v^g as a group element."""
        inv = invert_letters(self.conj)
        code = 2 * self.base + 1
        return GroupElement(self.graph,
                            reduce_letters(self.graph, inv + (code,) + self.conj),
                            _canonical=True)

    def __str__(self) -> str:
        if not self.conj:
            return self.base_label
        return f"{self.base_label}^({format_word(self.graph, self.conj)})"


def canonical_vertex(graph: SimplicialGraph, base, conj) -> ExtVertex:
    """Canonical name for v^g; any star-subgroup prefix of g is stripped."""
    b = base if isinstance(base, int) else graph.index(base)
    letters = conj.letters if isinstance(conj, GroupElement) else tuple(conj)
    letters = reduce_letters(graph, letters)
    pre, rest = iota_split(graph, letters, graph._star[b])
    return ExtVertex(graph, b, rest)


def parse_vertex(graph: SimplicialGraph, text: str) -> ExtVertex:
    """Parse ``v`` or ``v^(word literal)``."""
    text = text.strip()
    if "^" not in text:
        return canonical_vertex(graph, text, ())
    name, _, rest = text.partition("^")
    rest = rest.strip()
    if rest.startswith("(") and rest.endswith(")"):
        rest = rest[1:-1]
    return canonical_vertex(graph, name.strip(), parse_word(graph, rest))


def act(x: ExtVertex, g: GroupElement) -> ExtVertex:
    """Right conjugation action: v^h -> v^{hg}."""
    return canonical_vertex(x.graph, x.base, mult(x.graph, x.conj, g.letters))


def same_vertex(graph: SimplicialGraph, base, g: GroupElement, h: GroupElement) -> bool:
    """Defining test v^g = v^h via membership of g h^-1 in the star subgroup."""
    b = base if isinstance(base, int) else graph.index(base)
    q = mult(graph, g.letters, invert_letters(h.letters))
    return not (support_mask(q) & ~graph._star[b])


def ext_adjacent(x: ExtVertex, y: ExtVertex) -> bool:
    """Adjacency in the extension graph: the conjugates commute (and differ)."""
    if x == y:
        return False
    return x.element().commutes_with(y.element())


def _adjacent_fast(graph: SimplicialGraph, x: ExtVertex, y: ExtVertex) -> bool:
    # u^k ~ w^m  iff  u,w adjacent and strip(k m^-1, st u) is supported in st(w)
    if x == y:
        return False
    if not (graph._adj[x.base] >> y.base) & 1:
        return False
    q = mult(graph, x.conj, invert_letters(y.conj))
    _, r = iota_split(graph, q, graph._star[x.base])
    return not (support_mask(r) & ~graph._star[y.base])


# ---------------------------------------------------------------------------
# exact covering distance by double-coset peeling


def covering_distance_exact(x: ExtVertex, y: ExtVertex) -> int:
    """Covering distance between extension-graph vertices.

    d'(u, w^q) is 1 + the least t with q in <st w> X_t ... X_1 <st u> over
    star subgroups X_i.  The head star prefix is stripped for free, each
    step peels a maximal star prefix, and the tail is absorbed once the
    remainder is supported in st(u).  Right invariance reduces the general
    pair to this form.
    """
    graph = x.graph
    if x == y:
        return 0
    # translate so x = u^1: q = conj(y) * conj(x)^-1
    q = mult(graph, y.conj, invert_letters(x.conj))
    u, w = x.base, y.base
    _, h = iota_split(graph, q, graph._star[w])
    target_mask = graph._star[u]
    if not (support_mask(h) & ~target_mask):
        return 1
    stars = graph._star
    frontier = {h}
    seen = {h}
    depth = 0
    while frontier:
        depth += 1
        nxt = set()
        for cur in frontier:
            for v in range(graph.n):
                pre, rest = iota_split(graph, cur, stars[v])
                if not pre or rest in seen:
                    continue
                if not (support_mask(rest) & ~target_mask):
                    return depth + 1
                seen.add(rest)
                nxt.add(rest)
        frontier = nxt
    raise AssertionError("peeling failed to terminate")


# ---------------------------------------------------------------------------
# budgeted snapshots


class SnapshotBudgetError(GraphError):
    pass


class ExtSnapshot:
    """Finite induced stage of the extension graph.

    Vertices come from conjugators of word length <= L with letter runs
    <= E; edges are the commuting pairs among them.  The budget makes all
    distances upper bounds for the true extension-graph distances.
    """

    def __init__(self, graph: SimplicialGraph, L: int, E: int,
                 conjugators, vertices, provenance, edges_complete: bool):
        self.graph = graph
        self.L = L
        self.E = E
        self.conjugators = conjugators          # tuple of canonical Letters
        self.vertices = vertices                # tuple of ExtVertex, sorted
        self.ids = {v: i for i, v in enumerate(vertices)}
        self.provenance = provenance            # vertex id -> generating conjugator
        self.edges_complete = edges_complete
        self._adjlists: Optional[list] = None
        self._copy_index = None

    # -- vertices ---------------------------------------------------------

    def n_vertices(self) -> int:
        return len(self.vertices)

    def vertex_id(self, x: ExtVertex) -> Optional[int]:
        return self.ids.get(x)

    def has_vertex(self, x: ExtVertex) -> bool:
        return x in self.ids

    # -- edges --------------------------------------------------------------

    def adjacency(self) -> list:
        if self._adjlists is None:
            self._build_edges()
        return self._adjlists

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency()) // 2

    def edges(self):
        for i, nbrs in enumerate(self.adjacency()):
            for j in nbrs:
                if i < j:
                    yield (i, j)

    def _build_edges(self):
        graph = self.graph
        n = len(self.vertices)
        adjsets = [set() for _ in range(n)]
        # every edge lies in a copy of the base graph
        strip_cache = {}

        def vid(base: int, conj: Letters) -> Optional[int]:
            key = (base, conj)
            hit = strip_cache.get(key)
            if hit is None:
                _, rest = iota_split(graph, conj, graph._star[base])
                hit = self.ids.get(ExtVertex(graph, base, rest), -1)
                strip_cache[key] = hit
            return hit

        for k in self.conjugators:
            for iu, iw in graph._edge_pairs:
                a = vid(iu, k)
                b = vid(iw, k)
                if a >= 0 and b >= 0:
                    adjsets[a].add(b)
                    adjsets[b].add(a)
        if self.edges_complete:
            # pairwise completion between adjacent bases, cheap support test
            from .words import _pile_reduce
            adj = graph._adj
            by_base = {}
            for i, v in enumerate(self.vertices):
                by_base.setdefault(v.base, []).append(i)
            for iu, iw in graph._edge_pairs:
                su, sw = graph._star[iu], graph._star[iw]
                not_sw = ~sw
                for a in by_base.get(iu, ()):
                    ka = self.vertices[a].conj
                    for b in by_base.get(iw, ()):
                        if b in adjsets[a]:
                            continue
                        kb_inv = invert_letters(self.vertices[b].conj)
                        word = _pile_reduce(graph, ka + kb_inv)
                        can = -1
                        rest_supp = 0
                        for code in word:
                            v = code >> 1
                            bit = 1 << v
                            if not (su & bit and can & bit):
                                rest_supp |= bit
                                can &= adj[v]
                        if not rest_supp & not_sw:
                            adjsets[a].add(b)
                            adjsets[b].add(a)
        self._adjlists = [tuple(sorted(s)) for s in adjsets]

    def verify_edges(self, pairs: Optional[Iterable] = None) -> bool:
        """Check stored adjacency against the defining commutator test."""
        adj = self.adjacency()
        if pairs is None:
            n = len(self.vertices)
            pairs = ((i, j) for i in range(n) for j in range(i + 1, n))
        for i, j in pairs:
            want = ext_adjacent(self.vertices[i], self.vertices[j])
            have = j in adj[i]
            if want != have:
                return False
        return True

    # -- distances ----------------------------------------------------------

    def bfs(self, source: int):
        adj = self.adjacency()
        dist = {source: 0}
        frontier = [source]
        while frontier:
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        nxt.append(w)
            frontier = nxt
        return dist

    def graph_distance(self, x: ExtVertex, y: ExtVertex):
        """BFS distance: an upper bound for the extension-graph distance.

        The exact flag is set when the covering-distance lower bound pins
        the value; unset means only "at most this".
        """
        i, j = self.ids.get(x), self.ids.get(y)
        if i is None or j is None:
            raise GraphError("vertex not in snapshot")
        dist = self.bfs(i)
        d = dist.get(j)
        if d is None:
            return None, False
        dprime = covering_distance_exact(x, y)
        exact = d == dprime or d <= 1
        return d, exact

    # -- covering distance over stored copies --------------------------------

    def _copies(self):
        if self._copy_index is None:
            graph = self.graph
            per_vertex = [dict() for _ in range(graph.n)]  # coset rep -> copy ids
            for ci, k in enumerate(self.conjugators):
                for v in range(graph.n):
                    _, rest = iota_split(graph, k, graph._star[v])
                    per_vertex[v].setdefault(rest, []).append(ci)
            self._copy_index = per_vertex
        return self._copy_index

    def covering_distance(self, x: ExtVertex, y: ExtVertex):
        """Shortest chain of stored copies joining x to y (upper bound).

        Returns (value, exact) where exact compares with the peeling
        computation; None when no chain exists within the budget.
        """
        if x == y:
            return 0, True
        per_vertex = self._copies()
        graph = self.graph
        start = set(per_vertex[x.base].get(x.conj, ()))
        goal = set(per_vertex[y.base].get(y.conj, ()))
        if not start or not goal:
            raise GraphError("vertex not covered by any stored copy")
        if start & goal:
            d = 1
        else:
            # BFS over copies, grouped by the vertex cosets they share
            seen = set(start)
            used_buckets = set()
            frontier = start
            d = None
            depth = 1
            while frontier and d is None:
                depth += 1
                nxt = set()
                for ci in frontier:
                    k = self.conjugators[ci]
                    for v in range(graph.n):
                        _, rest = iota_split(graph, k, graph._star[v])
                        bucket = (v, rest)
                        if bucket in used_buckets:
                            continue
                        used_buckets.add(bucket)
                        for cj in per_vertex[v][rest]:
                            if cj not in seen:
                                seen.add(cj)
                                nxt.add(cj)
                if nxt & goal:
                    d = depth
                    break
                frontier = nxt
            if d is None:
                return None, False
        exact = d == covering_distance_exact(x, y)
        return d, exact

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        g = self.graph
        return {
            "graph": {"vertices": list(g.vertices), "edges": [list(e) for e in g.edges]},
            "budget": {"L": self.L, "E": self.E},
            "vertices": [
                {"id": i, "base": v.base_label,
                 "conjugator": format_word(g, v.conj)}
                for i, v in enumerate(self.vertices)
            ],
            "edges": [[i, j] for i, j in self.edges()],
        }

    def to_dot(self) -> str:
        out = ["graph snapshot {"]
        for i, v in enumerate(self.vertices):
            shape = ' style=filled fillcolor=lightblue' if not v.conj else ""
            out.append(f'  n{i} [label="{v}"{shape}];')
        for i, j in self.edges():
            out.append(f"  n{i} -- n{j};")
        out.append("}")
        return "\n".join(out) + "\n"


def snapshot_from_json(data: dict) -> ExtSnapshot:
    g = SimplicialGraph(data["graph"]["vertices"],
                        [tuple(e) for e in data["graph"]["edges"]])
    return build_snapshot(g, data["budget"]["L"], data["budget"]["E"])


def enumerate_ball(graph: SimplicialGraph, L: int, run_cap: Optional[int] = None,
                   support: Optional[int] = None, cap: Optional[int] = None):
    """Canonical forms of all elements of word length <= L.

    Optional letter-run cap, support restriction (a vertex mask), and a
    hard count cap that raises when exceeded.
    """
    out = [()]
    seen = {()}
    frontier = [()]
    letters = [c for c in range(2 * graph.n)
               if support is None or (support >> (c >> 1)) & 1]
    for _ in range(L):
        nxt = []
        for k in frontier:
            for c in letters:
                k2 = reduce_letters(graph, k + (c,))
                if len(k2) != len(k) + 1 or k2 in seen:
                    continue
                if run_cap is not None and max_run(k2) > run_cap:
                    continue
                seen.add(k2)
                nxt.append(k2)
                out.append(k2)
                if cap is not None and len(out) > cap:
                    raise SnapshotBudgetError(
                        f"ball enumeration exceeded cap {cap} at length {len(k2)}")
        frontier = nxt
    return out


def build_snapshot(graph: SimplicialGraph, L: int, E: int,
                   vertex_cap: int = 100_000,
                   complete_edges: Optional[bool] = None,
                   conjugator_support: Optional[int] = None) -> ExtSnapshot:
    """Materialize the stage of the extension graph within budget (L, E).

    complete_edges=None lets the builder decide: the pairwise completion
    pass is run when its cost is reasonable, otherwise only copy-realized
    edges are stored (still genuine edges, possibly not all of them).
    conjugator_support restricts conjugators to a vertex mask, which gives
    the doubling-over-a-subgroup stages used by the link models.
    """
    if L < 0 or E < 1:
        raise GraphError("budget needs L >= 0 and E >= 1")
    conjugators = enumerate_ball(graph, L, run_cap=E, support=conjugator_support)
    vertices = {}
    provenance = {}
    for k in conjugators:
        for b in range(graph.n):
            _, rest = iota_split(graph, k, graph._star[b])
            x = ExtVertex(graph, b, rest)
            if x not in vertices:
                vertices[x] = k
                if len(vertices) > vertex_cap:
                    raise SnapshotBudgetError(
                        f"snapshot exceeds vertex cap {vertex_cap}; "
                        f"budget (L={L}, E={E}) is too large for this graph")
    ordered = tuple(sorted(vertices, key=lambda x: (x.base, x.conj)))
    prov = {i: vertices[x] for i, x in enumerate(ordered)}
    if complete_edges is None:
        by_base = {}
        for x in ordered:
            by_base[x.base] = by_base.get(x.base, 0) + 1
        pair_work = sum(by_base.get(u, 0) * by_base.get(w, 0)
                        for u, w in graph._edge_pairs)
        complete_edges = pair_work <= 8_000_000
    return ExtSnapshot(graph, L, E, tuple(conjugators), ordered, prov,
                       bool(complete_edges))


def snapshot_girth(s: ExtSnapshot):
    """Girth of the snapshot graph.

    BFS from every vertex; a non-tree edge at depths d1 <= d2 closes a
    cycle of length d1 + d2 + 1, and once a bound is known each BFS stops
    at half of it.
    """
    import math
    adj = s.adjacency()
    best = math.inf
    n = len(adj)
    for src in range(n):
        dist = {src: 0}
        parent = {src: -1}
        frontier = [src]
        depth = 0
        while frontier and depth * 2 < best - 1:
            depth += 1
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if w not in dist:
                        dist[w] = depth
                        parent[w] = u
                        nxt.append(w)
                    elif w != parent[u] and dist[w] >= dist[u]:
                        cand = dist[u] + dist[w] + 1
                        if cand < best:
                            best = cand
            frontier = nxt
    return best


# ---------------------------------------------------------------------------
# copy intersections (triangle- and square-free case)


def copy_intersection(graph: SimplicialGraph, g: GroupElement):
    """Vertices shared by the base copy and its conjugate by g.

    Case analysis on the star-word structure of g; requires a triangle-
    and square-free base graph.  copy_intersection_raw is the direct
    stabilizer computation it must agree with.
    """
    if not (graph.is_triangle_free() and graph.is_square_free()):
        raise GraphError("copy intersection analysis needs a triangle- and "
                         "square-free graph")
    if g.is_identity():
        return tuple(graph.vertices)
    smask = support_mask(g.letters)
    hosts = [v for v in range(graph.n) if not smask & ~graph._star[v]]
    if not hosts:
        return ()
    # pick the host star: prefer one with >= 2 link letters, then the
    # support vertex itself, then the smallest host
    def linkcount(v):
        return bin(smask & graph._adj[v]).count("1")

    y = None
    for v in hosts:
        if linkcount(v) >= 2:
            y = v
            break
    if y is None:
        for v in hosts:
            if (smask >> v) & 1 and linkcount(v) == 0:
                # pure power of v
                return graph.star(graph.label(v))
        for v in hosts:
            if (smask >> v) & 1:
                y = v
                break
    if y is None:
        y = hosts[0]
    lk = smask & graph._adj[y]
    k = bin(lk).count("1")
    if k >= 2:
        return (graph.label(y),)
    if k == 1:
        a = lk.bit_length() - 1
        if g.syllable_len() > 1:
            labs = sorted([graph.label(a), graph.label(y)],
                          key=lambda l: graph.index(l))
            return tuple(labs)
        return graph.star(graph.label(a))
    return graph.star(graph.label(y))


def copy_intersection_raw(graph: SimplicialGraph, g: GroupElement):
    """Direct computation: vertices whose star subgroup contains g."""
    smask = support_mask(g.letters)
    return tuple(v for v in graph.vertices
                 if not smask & ~graph._star[graph.index(v)])


# ---------------------------------------------------------------------------
# the free-group (discrete graph) variant


def free_reduce(letters: Letters) -> Letters:
    out = []
    for c in letters:
        if out and out[-1] == c ^ 1:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


def free_syllables(letters: Letters) -> int:
    count = 0
    prev = None
    for c in letters:
        if prev is None or (c >> 1) != prev:
            count += 1
        prev = c >> 1
    return count


@dataclass(frozen=True)
class FreeExtVertex:
    """Vertex x^g of the extension graph of a discrete graph.

    The conjugator is a reduced free word with no leading x-power.
    """
    base: int
    conj: Letters


def free_vertex(base: int, conj: Letters) -> FreeExtVertex:
    conj = free_reduce(conj)
    i = 0
    while i < len(conj) and (conj[i] >> 1) == base:
        i += 1
    return FreeExtVertex(base, conj[i:])


def free_ext_distance(x: FreeExtVertex, y: FreeExtVertex) -> int:
    """Exact distance in the extension graph of a discrete graph.

    Every copy is a clique, so a shortest copy chain is a syllable peel:
    strip the leading y-power and trailing x-power of the relative
    conjugator and count the remaining syllables, plus one.
    """
    if x == y:
        return 0
    q = free_reduce(y.conj + tuple(c ^ 1 for c in reversed(x.conj)))
    i = 0
    while i < len(q) and (q[i] >> 1) == y.base:
        i += 1
    j = len(q)
    while j > i and (q[j - 1] >> 1) == x.base:
        j -= 1
    return free_syllables(q[i:j]) + 1
