"""Vertex links, their connected models, projections and the bounded
geodesic image scan.

Links in the extension graph of a triangle-free graph are discrete, so the
link of v is the extension graph of the free group on lk(v) and distances
inside it are computed exactly by syllable peeling (free_ext_distance).
The connected models Z_v and Y_v give the separation constant: the scan
bound is M = 3 diam(Z_v) for vertex projections and M' = 18 diam(Z_v) for
geodesics avoiding the star.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .graphs import GraphError, SimplicialGraph
from .words import GroupElement, Letters, iota_split, reduce_letters, support_mask
from .extension import (ExtSnapshot, ExtVertex, FreeExtVertex, build_snapshot,
                        canonical_vertex, covering_distance_exact,
                        enumerate_ball, free_ext_distance, free_vertex)


def _require_trisqfree(graph: SimplicialGraph):
    if not graph.is_triangle_free() or not graph.is_square_free():
        raise GraphError("this construction needs a triangle- and square-free graph")
    if not graph.is_connected():
        raise GraphError("this construction needs a connected graph")


# ---------------------------------------------------------------------------
# link coordinates


def link_coordinate(v: str, x: ExtVertex) -> FreeExtVertex:
    """Coordinates of a neighbor of the base vertex v inside its link.

    A vertex adjacent to v has the form x^{u v^n} with u supported in
    lk(v); dropping the v letters lands it in the extension graph of the
    free group on lk(v).
    """
    graph = x.graph
    iv = graph.index(v)
    star = graph._star[iv]
    if not ((graph._adj[iv] >> x.base) & 1) or (support_mask(x.conj) & ~star):
        raise GraphError(f"{x} is not adjacent to {v}")
    u = tuple(c for c in x.conj if (c >> 1) != iv)
    return free_vertex(x.base, u)


def link_vertex(graph: SimplicialGraph, v: str, fv: FreeExtVertex) -> ExtVertex:
    """Inverse of link_coordinate."""
    return canonical_vertex(graph, fv.base, fv.conj)


def link_distance(graph: SimplicialGraph, v: str, a: ExtVertex, b: ExtVertex) -> int:
    """Exact distance between two link members inside the link of v."""
    return free_ext_distance(link_coordinate(v, a), link_coordinate(v, b))


def link_diameter(graph: SimplicialGraph, v: str, members: Iterable[ExtVertex]) -> int:
    pts = [link_coordinate(v, x) for x in members]
    best = 0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = free_ext_distance(pts[i], pts[j])
            if d > best:
                best = d
    return best


# ---------------------------------------------------------------------------
# connected models


@dataclass
class LinkModel:
    graph: SimplicialGraph
    v: str
    Z: SimplicialGraph                 # Gamma minus v plus boundary join edges
    boundary: dict                     # x in lk(v) -> tuple of boundary labels
    patches: tuple                     # synthetic degree-one helpers added
    Z_diameter: int
    Y: ExtSnapshot                     # budgeted doubling of Z over lk(v)
    collapsed: SimplicialGraph         # c_v: boundaries collapsed to single points

    @property
    def bound_single(self) -> int:
        return 3 * self.Z_diameter

    @property
    def bound_segment(self) -> int:
        return 18 * self.Z_diameter


def build_link_model(graph: SimplicialGraph, v: str, budget: int = 3) -> LinkModel:
    """Z_v, the boundary sets B_x, and a budgeted connected model Y_v."""
    _require_trisqfree(graph)
    iv = graph.index(v)
    lk = graph.link(v)
    # degree-one patching: pendant helpers so every link vertex has a boundary
    labels = [l for l in graph.vertices if l != v]
    edges = [e for e in graph.edges if v not in e]
    patches = []
    for x in lk:
        if graph.degree(x) == 1:
            px = x + "'"
            while px in labels:
                px += "'"
            labels.append(px)
            edges.append((x, px))
            patches.append(px)
    base = SimplicialGraph(labels, edges)
    boundary = {x: tuple(base.link(x)) for x in lk}
    zedges = list(edges)
    seen = {frozenset(e) for e in zedges}
    for i, x in enumerate(lk):
        for y in lk[i + 1:]:
            for zb in boundary[x]:
                for wb in boundary[y]:
                    if zb != wb and frozenset((zb, wb)) not in seen:
                        zedges.append((zb, wb))
                        seen.add(frozenset((zb, wb)))
    Z = SimplicialGraph(labels, zedges)
    lk_mask = 0
    for x in lk:
        lk_mask |= 1 << Z.index(x)
    Y = build_snapshot(Z, budget, 1, conjugator_support=lk_mask,
                       complete_edges=True)
    # collapsed model: one vertex per boundary set, complete across boundaries
    clabels = list(lk) + [f"B({x})" for x in lk]
    cedges = [(x, f"B({x})") for x in lk]
    for i, x in enumerate(lk):
        for y in lk[i + 1:]:
            cedges.append((f"B({x})", f"B({y})"))
    collapsed = SimplicialGraph(clabels, cedges)
    return LinkModel(graph, v, Z, boundary, tuple(patches),
                     Z.diameter(), Y, collapsed)


def model_is_connected(model: LinkModel) -> bool:
    adj = model.Y.adjacency()
    n = len(adj)
    if n == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


# ---------------------------------------------------------------------------
# projections


def geodesic_entry_points(s: ExtSnapshot, source: int, target: int):
    """Vertices at distance one from the source lying on some geodesic.

    A geodesic from the source meets the link of the source exactly in its
    second vertex, so these are the projection entry points.
    """
    dist_s = s.bfs(source)
    if target not in dist_s:
        return None, ()
    d = dist_s[target]
    dist_t = s.bfs(target)
    adj = s.adjacency()
    entries = tuple(sorted(w for w in adj[source]
                           if dist_t.get(w, -1) + 1 == d))
    return d, entries


def project(s: ExtSnapshot, v: ExtVertex, target) -> tuple:
    """Vertex link projection of a vertex or vertex set onto lk(v).

    Enumerates snapshot geodesics through the BFS structure; the result is
    a tuple of ExtVertex in the link of v.  Budget caveat: snapshot
    geodesics may be longer than true ones, so the set is an approximation
    that grows monotonically with the budget.
    """
    i = s.ids.get(v)
    if i is None:
        raise GraphError("projection center not in snapshot")
    targets = [target] if isinstance(target, ExtVertex) else list(target)
    out = set()
    for t in targets:
        j = s.ids.get(t)
        if j is None:
            raise GraphError("projection target not in snapshot")
        if j == i:
            raise GraphError("cannot project the center to itself")
        _, entries = geodesic_entry_points(s, i, j)
        out.update(entries)
    return tuple(s.vertices[k] for k in sorted(out))


# ---------------------------------------------------------------------------
# the scan


def bgit_scan(graph: SimplicialGraph, L: int = 4, E: int = 1,
              samples: int = 200, seed: int = 0,
              segment_samples: int = 0,
              snapshot: Optional[ExtSnapshot] = None) -> dict:
    """Sample vertex-link projections and check them against the bound.

    Part one: projections of single vertices at certified distance >= 3
    from a base vertex; their link diameter must stay within
    M = 3 diam(Z_v).  Optionally, part two samples geodesic segments
    avoiding the star of v and checks the segment bound M' = 18 diam(Z_v).
    """
    _require_trisqfree(graph)
    rng = random.Random(seed)
    s = snapshot if snapshot is not None else build_snapshot(graph, L, E)
    models = {v: build_link_model(graph, v, budget=2) for v in graph.vertices}
    per_case = []
    max_ratio = 0.0
    violations = 0
    tried = 0
    base_ids = {v: s.ids[canonical_vertex(graph, v, ())] for v in graph.vertices}
    dists = {v: s.bfs(base_ids[v]) for v in graph.vertices}
    n = s.n_vertices()
    while len(per_case) < samples and tried < 60 * samples:
        tried += 1
        v = graph.vertices[rng.randrange(graph.n)]
        j = rng.randrange(n)
        src = base_ids[v]
        if j == src:
            continue
        d_snap = dists[v].get(j)
        if d_snap is None or d_snap < 3:
            continue
        target = s.vertices[j]
        d_low = covering_distance_exact(s.vertices[src], target)
        if d_low < 3:
            continue  # only certified far targets
        d, entries = geodesic_entry_points(s, src, j)
        diam = link_diameter(graph, v, [s.vertices[k] for k in entries])
        M = models[v].bound_single
        ok = diam <= M
        if not ok:
            violations += 1
        max_ratio = max(max_ratio, diam / M if M else 0.0)
        per_case.append({"v": v, "target": str(target), "distance": d,
                         "entry_count": len(entries), "diameter": diam,
                         "bound": M, "pass": ok})
    segments = []
    seg_violations = 0
    for _ in range(segment_samples):
        v = graph.vertices[rng.randrange(graph.n)]
        src = base_ids[v]
        a, b = rng.randrange(n), rng.randrange(n)
        if a == b:
            continue
        da = dists[v].get(a)
        db = dists[v].get(b)
        if da is None or db is None or min(da, db) < 3:
            continue
        path = _some_path(s, a, b)
        if path is None:
            continue
        if any(dists[v].get(k, 0) < 3 for k in path):
            continue  # outside the closed 2-ball
        ent = set()
        for k in path:
            _, e = geodesic_entry_points(s, src, k)
            ent.update(e)
        diam = link_diameter(graph, v, [s.vertices[k] for k in ent])
        M2 = models[v].bound_segment
        ok = diam <= M2
        if not ok:
            seg_violations += 1
        segments.append({"v": v, "length": len(path) - 1, "diameter": diam,
                         "bound": M2, "pass": ok})
    return {
        "graph": list(graph.vertices),
        "budget": {"L": s.L, "E": s.E},
        "bounds": {v: models[v].bound_single for v in graph.vertices},
        "samples": len(per_case),
        "violations": violations,
        "max_ratio": round(max_ratio, 4),
        "cases": per_case,
        "segments": segments,
        "segment_violations": seg_violations,
        "pass": violations == 0 and seg_violations == 0,
    }


def _some_path(s: ExtSnapshot, a: int, b: int):
    adj = s.adjacency()
    prev = {a: -1}
    frontier = [a]
    while frontier and b not in prev:
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in prev:
                    prev[w] = u
                    nxt.append(w)
        frontier = nxt
    if b not in prev:
        return None
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]


def c4_projection_demo(L: int = 2, E: int = 1) -> dict:
    """The square's failure mode: the projection of c onto the link of a
    fills the whole stored link, growing with the budget."""
    c4 = SimplicialGraph.cycle(4)
    s = build_snapshot(c4, L, E)
    a = canonical_vertex(c4, "a", ())
    c = canonical_vertex(c4, "c", ())
    entries = project(s, a, c)
    adj = s.adjacency()
    link_size = len(adj[s.ids[a]])
    return {"projection_size": len(entries), "stored_link_size": link_size,
            "fills_link": len(entries) == link_size}
