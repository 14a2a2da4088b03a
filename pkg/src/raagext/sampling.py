"""Seeded random generators for words, elements and graphs.

Everything takes an explicit random.Random so identical seeds give
identical runs; nothing here touches global RNG state.
"""

from __future__ import annotations

import random
from typing import Optional

from .graphs import SimplicialGraph
from .words import GroupElement, max_run, reduce_letters

from .classify import classify


def random_word(graph: SimplicialGraph, rng: random.Random, length: int):
    """Uniform random letter tuple, not reduced."""
    return tuple(rng.randrange(2 * graph.n) for _ in range(length))


def random_reduced(graph: SimplicialGraph, rng: random.Random, length: int,
                   run_cap: Optional[int] = None, tries: int = 200):
    """Canonical form of exactly the requested word length (rejection)."""
    for _ in range(tries):
        w = reduce_letters(graph, random_word(graph, rng, length))
        if len(w) == length and (run_cap is None or max_run(w) <= run_cap):
            return w
    # fall back to whatever reduction of the right parity appears
    w = reduce_letters(graph, random_word(graph, rng, length))
    return w


def random_element(graph: SimplicialGraph, rng: random.Random, length: int,
                   run_cap: Optional[int] = None) -> GroupElement:
    return GroupElement(graph, random_reduced(graph, rng, length, run_cap),
                        _canonical=True)


def random_of_kind(graph: SimplicialGraph, rng: random.Random, kind: str,
                   max_len: int, tries: int = 2000) -> GroupElement:
    """Random element with the requested classification kind."""
    for _ in range(tries):
        g = random_element(graph, rng, rng.randint(1, max_len))
        if classify(g).kind == kind:
            return g
    raise RuntimeError(f"could not sample a {kind} element of length <= {max_len}")


def random_tree(n: int, rng: random.Random) -> SimplicialGraph:
    """Uniform labeled tree from a random Pruefer sequence."""
    labels = SimplicialGraph._default_labels(n)
    if n == 1:
        return SimplicialGraph(labels)
    if n == 2:
        return SimplicialGraph(labels, [(labels[0], labels[1])])
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    import heapq
    leaves = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(leaves)
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((labels[leaf], labels[x]))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u = heapq.heappop(leaves)
    w = heapq.heappop(leaves)
    edges.append((labels[u], labels[w]))
    return SimplicialGraph(labels, edges)


def random_trisqfree_connected(n: int, rng: random.Random,
                               extra_edges: Optional[int] = None) -> SimplicialGraph:
    """Connected graph with no triangles or induced squares (girth >= 5).

    Grows a random tree, then adds random chords rejecting any that create
    a cycle shorter than five.
    """
    g = random_tree(n, rng)
    labels = g.vertices
    target = extra_edges if extra_edges is not None else max(1, n // 3)
    added = 0
    attempts = 0
    edges = list(g.edges)
    while added < target and attempts < 50 * n:
        attempts += 1
        i, j = rng.sample(range(n), 2)
        cand = SimplicialGraph(labels, edges + [(labels[i], labels[j])])
        if cand.girth() >= 5:
            edges.append((labels[i], labels[j]))
            added += 1
    return SimplicialGraph(labels, edges)
