"""Independent brute-force oracles.

Everything here recomputes a quantity by exhaustive search, with no shared
code path with the fast implementations it is used to check.  Oracles are
meant for small inputs only.
"""

from __future__ import annotations

import itertools
from typing import Iterable

from .graphs import SimplicialGraph
from .words import (Letters, _lex_canon, enumerate_prefixes, invert_letters,
                    reduce_letters, support_mask)


def closure_neighbors(graph: SimplicialGraph, word: Letters):
    """Words one rewriting move away: a commuting swap or an inverse-pair
    deletion of adjacent letters."""
    adj = graph._adj
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        if a == b ^ 1:
            yield word[:i] + word[i + 2:]
        if (a >> 1) != (b >> 1) and (adj[a >> 1] >> (b >> 1)) & 1:
            yield word[:i] + (b, a) + word[i + 2:]


def rewriting_closure(graph: SimplicialGraph, word: Letters) -> frozenset:
    """All words reachable by swaps and cancellations (a finite set)."""
    word = tuple(word)
    seen = {word}
    frontier = [word]
    while frontier:
        nxt = []
        for w in frontier:
            for u in closure_neighbors(graph, w):
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return frozenset(seen)


def oracle_reduce(graph: SimplicialGraph, word: Letters) -> Letters:
    """Least word of minimal length in the rewriting closure."""
    cl = rewriting_closure(graph, word)
    m = min(len(w) for w in cl)
    return min(w for w in cl if len(w) == m)


_star_memo: dict = {}


def oracle_star_length(graph: SimplicialGraph, letters: Letters) -> int:
    """Star length by peeling every extractable star prefix, not only the
    maximal one."""
    letters = reduce_letters(graph, letters)
    key = (graph, letters)
    hit = _star_memo.get(key)
    if hit is not None:
        return hit
    if not letters:
        return 0
    best = len(letters)
    for v in range(graph.n):
        for pre, rest in enumerate_prefixes(graph, letters, graph._star[v]).items():
            cand = 1 + oracle_star_length(graph, rest)
            if cand < best:
                best = cand
    _star_memo[key] = best
    return best


_syl_memo: dict = {}


def oracle_syllable_length(graph: SimplicialGraph, letters: Letters) -> int:
    """Syllable length by peeling every extractable vertex-power prefix."""
    letters = reduce_letters(graph, letters)
    key = (graph, letters)
    hit = _syl_memo.get(key)
    if hit is not None:
        return hit
    if not letters:
        return 0
    best = len(letters)
    for v in range(graph.n):
        for pre, rest in enumerate_prefixes(graph, letters, 1 << v).items():
            cand = 1 + oracle_syllable_length(graph, rest)
            if cand < best:
                best = cand
    _syl_memo[key] = best
    return best


def oracle_prefixes(graph: SimplicialGraph, letters: Letters, mask: int):
    """All prefixes with support in ``mask`` by raw subset enumeration."""
    n = len(letters)
    found = set()
    for bits in range(1 << n):
        take = [letters[i] for i in range(n) if (bits >> i) & 1]
        if any(not (mask >> (c >> 1)) & 1 for c in take):
            continue
        ok = True
        for i in range(n):
            if not (bits >> i) & 1:
                continue
            for j in range(i):
                if not (bits >> j) & 1:
                    u, w = letters[i] >> 1, letters[j] >> 1
                    if u == w or not (graph._adj[u] >> w) & 1:
                        ok = False
                        break
            if not ok:
                break
        if ok:
            found.add(_lex_canon(graph, take))
    return found


def has_subjoin_containing(graph: SimplicialGraph, supp: Iterable[str]) -> bool:
    """Exhaustive search for a subjoin A * B with supp inside A union B."""
    supp = set(supp)
    verts = graph.vertices
    for r in range(1, graph.n + 1):
        for avs in itertools.combinations(verts, r):
            aset = set(avs)
            rest = [v for v in verts if v not in aset]
            # B must be nonempty, adjacent to all of A
            cands = [v for v in rest
                     if all(graph.adjacent(v, u) for u in avs)]
            if not cands:
                continue
            for rb in range(1, len(cands) + 1):
                for bvs in itertools.combinations(cands, rb):
                    if supp <= aset | set(bvs):
                        return True
    return False


def enumerate_cycles(graph: SimplicialGraph):
    """All simple cycle lengths, brute force over vertex subsets."""
    lengths = set()
    verts = range(graph.n)
    for r in range(3, graph.n + 1):
        for sub in itertools.combinations(verts, r):
            for perm in itertools.permutations(sub[1:]):
                cyc = (sub[0],) + perm
                if all((graph._adj[cyc[i]] >> cyc[(i + 1) % r]) & 1
                       for i in range(r)):
                    lengths.add(r)
                    break
            if r in lengths:
                break
    return lengths


def acyclic_by_union_find(graph: SimplicialGraph) -> bool:
    parent = list(range(graph.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in graph._edge_pairs:
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        parent[ri] = rj
    return True


def count_cliques_by_subsets(graph: SimplicialGraph) -> int:
    cnt = 0
    for r in range(1, graph.n + 1):
        for sub in itertools.combinations(graph.vertices, r):
            if graph.is_clique(sub):
                cnt += 1
    return cnt


def clear():
    _star_memo.clear()
    _syl_memo.clear()
