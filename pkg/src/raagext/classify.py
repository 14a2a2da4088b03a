"""Elliptic/loxodromic classification and its quantitative companions.

A nonidentity element acts loxodromically on the extension graph exactly
when the support of its cyclic reduction is not contained in a subjoin of
the base graph.  Containment in a subjoin is decided by: the induced
opposite graph on the support is disconnected, or the support lies in one
vertex star (which covers joins with a side disjoint from the support).
The brute-force subjoin search in oracles.has_subjoin_containing is the
reference this is checked against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .graphs import GraphError, SimplicialGraph
from .words import GroupElement, star_length, support_mask


@dataclass(frozen=True)
class ElementType:
    kind: str                      # "identity" | "elliptic" | "loxodromic"
    witness: Optional[tuple]       # see classify()

    def is_elliptic(self) -> bool:
        return self.kind == "elliptic"

    def is_loxodromic(self) -> bool:
        return self.kind == "loxodromic"


def _support_in_subjoin(graph: SimplicialGraph, smask: int):
    """Join witness for the support, or None.

    Returns ("split", (A, B)) when the induced opposite graph on the
    support is disconnected, ("star", v) when the support sits inside one
    vertex star.
    """
    verts = [i for i in range(graph.n) if (smask >> i) & 1]
    if len(verts) >= 2:
        labels = [graph.label(i) for i in verts]
        split = graph.split_join(labels)
        if split is not None:
            return ("split", split)
    for v in range(graph.n):
        if not smask & ~graph._star[v]:
            return ("star", graph.label(v))
    return None


def classify(g: GroupElement) -> ElementType:
    """Identity, elliptic or loxodromic, with a validating witness.

    Elliptic witnesses are a join split (A, B) of the cyclically reduced
    support or a star ("star", v); loxodromic witnesses are an edge loop
    through the support in the opposite graph.
    """
    if g.is_identity():
        return ElementType("identity", None)
    core, _ = g.cyclic_reduce()
    graph = g.graph
    smask = support_mask(core.letters)
    join = _support_in_subjoin(graph, smask)
    if join is not None:
        return ElementType("elliptic", join)
    loop = _opposite_edge_loop(graph, smask)
    return ElementType("loxodromic", ("loop", loop))


def _opposite_edge_loop(graph: SimplicialGraph, smask: int):
    """Closed walk through all support vertices in the opposite graph.

    Exists whenever the induced opposite graph on the support is connected
    with at least two vertices: double a spanning walk.
    """
    verts = [i for i in range(graph.n) if (smask >> i) & 1]
    adj = graph._adj
    order = [verts[0]]
    seen = {verts[0]}
    # DFS walk that returns along its own steps
    def dfs(u):
        for w in verts:
            if w not in seen and w != u and not (adj[u] >> w) & 1:
                seen.add(w)
                order.append(w)
                dfs(w)
                order.append(u)
    dfs(verts[0])
    if len(seen) != len(verts):
        raise AssertionError("opposite graph on support unexpectedly disconnected")
    return tuple(graph.label(i) for i in order)


def is_pure(g: GroupElement) -> bool:
    """No nontrivial commuting-split of the cyclically reduced element:
    the induced opposite graph on the support is connected."""
    if g.is_identity():
        return False
    core, _ = g.cyclic_reduce()
    smask = support_mask(core.letters)
    labels = [core.graph.label(i) for i in range(core.graph.n) if (smask >> i) & 1]
    return core.graph.split_join(labels) is None


def power_star_growth(g: GroupElement, n_max: int):
    """Exact star lengths of g, g^2, ..., g^n_max."""
    out = []
    power = GroupElement.identity(g.graph)
    for n in range(1, n_max + 1):
        power = power * g
        out.append((n, star_length(g.graph, power.letters)))
    return out


def translation_length_estimate(g: GroupElement, n: int):
    """Certified rational interval around d(v, v^{g^n}) / n.

    Lower endpoint (star length - 1)/n, upper diam * (star length + 1)/n.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    gn = g ** n
    sl = star_length(g.graph, gn.letters)
    diam = g.graph.diameter()
    return (Fraction(sl - 1, n), Fraction(diam * (sl + 1), n))


def conjugate_divergence(lam: GroupElement, g: GroupElement, n_max: int):
    """Star lengths of lam^n g lam^-n for n = 1..n_max.

    lam must be loxodromic and g must not commute with it; the identity is
    allowed and flagged trivial by the constant-zero sequence.
    """
    if not classify(lam).is_loxodromic():
        raise ValueError("conjugator must be loxodromic")
    if not g.is_identity() and lam.commutes_with(g):
        raise ValueError("g commutes with the loxodromic, divergence fails")
    out = []
    ln = GroupElement.identity(lam.graph)
    linv = lam.inverse()
    lninv = ln
    for n in range(1, n_max + 1):
        ln = ln * lam
        lninv = lninv * linv
        conj = ln * g * lninv
        out.append(star_length(lam.graph, conj.letters))
    return out


def sample_free_relations(lambdas: Sequence[GroupElement], N: int = 2,
                          word_len_max: int = 4):
    """Relations among freely reduced words in the N-th powers.

    Enumerates all freely reduced words of length <= word_len_max in the
    symbols lambda_i^{+-N} and reports those that collapse to the identity.
    An empty list is consistency with freeness at this scale.
    """
    k = len(lambdas)
    if k == 0:
        raise ValueError("need at least one element")
    for lam in lambdas:
        if not classify(lam).is_loxodromic():
            raise ValueError(f"{lam} is not loxodromic")
    for i, j in itertools.combinations(range(k), 2):
        if lambdas[i].commutes_with(lambdas[j]):
            raise ValueError(f"elements {i} and {j} commute; powers cannot be free")
    powers = []
    for lam in lambdas:
        p = lam ** N
        powers.append((p, p.inverse()))
    violations = []

    def extend(word, elem, last):
        if word:
            if elem.is_identity():
                violations.append(tuple(word))
        if len(word) == word_len_max:
            return
        for i in range(k):
            for s in (1, -1):
                if last == (i, -s):
                    continue  # freely reduced: no immediate inverse
                sym = powers[i][0] if s > 0 else powers[i][1]
                extend(word + [(i, s)], elem * sym, (i, s))

    extend([], GroupElement.identity(lambdas[0].graph), None)
    return sorted(violations)


def commutation_graph(elements: Sequence[GroupElement],
                      labels: Optional[Sequence[str]] = None) -> SimplicialGraph:
    """Graph with one vertex per element, edges between commuting pairs."""
    k = len(elements)
    labels = list(labels) if labels is not None else [f"g{i}" for i in range(k)]
    if len(labels) != k:
        raise ValueError("label count mismatch")
    edges = []
    for i, j in itertools.combinations(range(k), 2):
        if elements[i].commutes_with(elements[j]):
            edges.append((labels[i], labels[j]))
    return SimplicialGraph(labels, edges)
