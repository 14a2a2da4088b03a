"""Distance formula: projection sums recover syllable length.

Tree case: the unique geodesic from v to v^g is cut out of an explicit
copy-chain path, and the sum of link projection distances over its
interior is a (4D, 4D) estimate of the syllable length.

General triangle- and square-free case: an explicit (10D, 10D)
quasi-geodesic built from a minimal-syllable star factorization carries a
window sum of link distances comparable to the syllable length with
constants (D + 3, 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graphs import GraphError, SimplicialGraph
from .words import (GroupElement, Letters, min_syllable_star_factorization,
                    mult, reduce_letters, star_length, support_mask,
                    syllable_length)
from .extension import (ExtVertex, act, canonical_vertex,
                        covering_distance_exact, ext_adjacent)
from .links import link_coordinate
from .extension import free_ext_distance


def star_factorize_min_syllable(g: GroupElement):
    """Minimal-length star factorization minimizing total syllable count.

    Returns (factors, hosts): factors multiply left to right to g, and
    hosts[i] is the chosen star vertex, preferring degree > 1 whenever the
    factor has two or more syllables.
    """
    graph = g.graph
    total, parts = min_syllable_star_factorization(graph, g.letters)
    if total != syllable_length(graph, g.letters):
        raise AssertionError("factorization syllable total disagrees with "
                             "the syllable length")
    factors = []
    hosts = []
    for _, letters in parts:
        smask = support_mask(letters)
        cands = [v for v in range(graph.n) if not smask & ~graph._star[v]]
        syl = syllable_length(graph, letters)
        if syl == 1:
            host = smask.bit_length() - 1  # the single support vertex
        else:
            good = [v for v in cands if bin(graph._adj[v]).count("1") > 1]
            host = (good or cands)[0]
        factors.append(GroupElement(graph, letters, _canonical=True))
        hosts.append(graph.label(host))
    return tuple(factors), tuple(hosts)


def _delta(x: ExtVertex, prev: ExtVertex, nxt: ExtVertex) -> int:
    """Link distance between the two neighbors of x, measured in lk(x)."""
    graph = x.graph
    back = GroupElement(graph, tuple(c ^ 1 for c in reversed(x.conj)),
                        _canonical=False)
    p = act(prev, back)
    q = act(nxt, back)
    base = graph.label(x.base)
    return free_ext_distance(link_coordinate(base, p), link_coordinate(base, q))


# ---------------------------------------------------------------------------
# tree case


def tree_distance_formula_check(graph: SimplicialGraph, g: GroupElement) -> dict:
    """Projection-sum comparison with the syllable length over a tree.

    Builds the copy-chain path, prunes backtracks (tree geodesics are
    unique), sums the interior link distances and checks the two-sided
    (4D, 4D) inequality.
    """
    import math
    if graph.girth() != math.inf or not graph.is_connected():
        raise GraphError("tree distance formula needs a connected tree")
    D = graph.diameter()
    if D < 2:
        raise GraphError("tree must have diameter at least 2")
    syl = syllable_length(graph, g.letters)
    if g.is_identity():
        return {"syl": 0, "sum": 0, "K": 4 * D, "C": 4 * D, "pass": True,
                "relaxed": False, "markers": [], "b_count": 0,
                "b_bound": D + 1, "geodesic_length": 0, "base_point": None,
                "sharper": {"low": 0, "high": D + 1, "pass": True}}
    factors, hosts = star_factorize_min_syllable(g)
    k = len(factors)
    # reversed-index view: the walk uses suffix products of the factor list
    ys = list(hosts)
    suffix = [GroupElement.identity(graph)]
    for f in reversed(factors):
        suffix.append(f * suffix[-1])
    suffix = suffix[::-1]  # suffix[i] = factors[i] * ... * factors[k-1]
    # conjugator of stage i (product of the last i factors)
    stage = [suffix[k - i] for i in range(k + 1)]  # stage[0]=1, stage[k]=g
    y_of_stage = [hosts[k - i] for i in range(1, k + 1)]  # y_i for stage i
    y1, yk = y_of_stage[0], y_of_stage[-1]
    banned = set(graph.star(y1)) | set(graph.star(yk))
    free_v = [v for v in graph.vertices if v not in banned]
    relaxed = not free_v
    if relaxed:
        free_v = [v for v in graph.vertices if v not in {y1, yk}]
        if not free_v:
            raise GraphError("no admissible base point in this tree")
    v = free_v[0]
    # walk: [v..y1], then per stage the path [y_i..y_{i+1}] in copy stage_i,
    # finally [y_k..v] in the copy of g
    tagged = []

    def emit(path_labels, conj: GroupElement, tag: int):
        for lab in path_labels:
            x = canonical_vertex(graph, lab, conj.letters)
            if tagged and tagged[-1][0] == x:
                continue
            tagged.append((x, tag))

    emit(graph.shortest_path(v, y1), GroupElement.identity(graph), 0)
    for i in range(1, k):
        emit(graph.shortest_path(y_of_stage[i - 1], y_of_stage[i]), stage[i], i)
    emit(graph.shortest_path(yk, v), stage[k], k)
    # prune backtracks; the remainder is the tree geodesic
    reduced = []
    for item in tagged:
        if len(reduced) >= 2 and reduced[-2][0] == item[0]:
            reduced.pop()
        else:
            reduced.append(item)
    path = [x for x, _ in reduced]
    for a, b in zip(path, path[1:]):
        if not ext_adjacent(a, b):
            raise AssertionError("copy-chain walk produced a non-edge")
    total = 0
    markers = []
    b_count = 0
    for i in range(1, len(reduced) - 1):
        d = _delta(path[i], path[i - 1], path[i + 1])
        total += d
        if reduced[i][1] != reduced[i + 1][1]:
            markers.append({"stage": reduced[i + 1][1], "delta": d})
        elif d == 1:
            b_count += 1
        else:
            markers.append({"stage": reduced[i][1], "delta": d})
    K = C = 4 * D
    ok = (syl / K - C) <= total <= (K * syl + C)
    sharper_low = (syl - 4) / 3 if relaxed else syl / 3
    return {
        "syl": syl, "sum": total, "K": K, "C": C, "pass": bool(ok),
        "relaxed": relaxed, "markers": markers, "b_count": b_count,
        "b_bound": (D - 1) * k + D + 1,
        "sharper": {"low": sharper_low, "high": (D + 1) * (syl + 1),
                    "pass": bool(sharper_low <= total <= (D + 1) * (syl + 1))},
        "geodesic_length": len(path) - 1,
        "base_point": v,
    }


# ---------------------------------------------------------------------------
# general case


@dataclass
class QuasiGeodesicCertificate:
    graph: SimplicialGraph
    g: GroupElement
    path: tuple                   # ExtVertex sequence
    markers: tuple                # indices of the stitching vertices
    factors: tuple                # (host y, z, w, factor) per stage
    K: int
    C: int

    def length(self) -> int:
        return len(self.path) - 1


def build_quasi_geodesic(graph: SimplicialGraph, g: GroupElement) -> QuasiGeodesicCertificate:
    """Explicit (10D, 10D) quasi-geodesic from a base vertex to its
    g-translate, stitched from one length-two hop per star factor.

    Each factor h with host y gets a hop (w, z, w^h): a length-two path for
    a pure power, else z = y and a link vertex moved by h.
    """
    if not graph.is_triangle_free() or not graph.is_square_free():
        raise GraphError("needs a triangle- and square-free graph")
    if not graph.is_connected():
        raise GraphError("needs a connected graph")
    D = graph.diameter()
    if D < 2:
        raise GraphError("needs diameter at least 2")
    if any(graph._star[v] == (1 << graph.n) - 1 for v in range(graph.n)):
        raise GraphError("star-shaped graphs have no two-step hops")
    if g.is_identity():
        raise GraphError("needs a nonidentity element")
    factors, hosts = star_factorize_min_syllable(g)
    k = len(factors)
    # stage order: h_1 is the right-most factor
    hs = list(reversed(factors))
    ys = [graph.index(h) for h in reversed(hosts)]
    zs = []
    ws = []
    for h, y in zip(hs, ys):
        smask = support_mask(h.letters)
        lk_letters = smask & graph._adj[y]
        if smask == (1 << y):
            # pure power: walk two steps away from y
            z = next(z for z in _bits(graph._adj[y])
                     if graph._adj[z] & ~(1 << y))
            w = next(w for w in _bits(graph._adj[z]) if w != y)
        else:
            z = y
            w = next(w for w in _bits(graph._adj[z])
                     if not _fixes(graph, h, w))
        zs.append(z)
        ws.append(w)
    stage = [GroupElement.identity(graph)]
    for h in hs:
        stage.append(h * stage[-1])
    # stage[i] = h_i ... h_1
    verts = []
    markers = []

    def push(x: ExtVertex, marker: bool = False):
        if verts and verts[-1] == x:
            if marker:
                markers.append(len(verts) - 1)
            return
        verts.append(x)
        if marker:
            markers.append(len(verts) - 1)

    for i in range(k):
        gi_prev, gi = stage[i], stage[i + 1]
        w, z = ws[i], zs[i]
        push(canonical_vertex(graph, w, gi_prev.letters))
        push(canonical_vertex(graph, z, gi_prev.letters), marker=True)
        push(canonical_vertex(graph, w, gi.letters))
        # connector toward the next hop start (or back to the base vertex)
        nxt = ws[i + 1] if i + 1 < k else ws[0]
        conn = graph.shortest_path(graph.label(w), graph.label(nxt))
        for lab in conn[1:]:
            push(canonical_vertex(graph, lab, gi.letters))
    path = tuple(verts)
    for a, b in zip(path, path[1:]):
        if not ext_adjacent(a, b):
            raise AssertionError("quasi-geodesic construction produced a non-edge")
    info = tuple((graph.label(y), graph.label(z), graph.label(w), h)
                 for y, z, w, h in zip(ys, zs, ws, hs))
    return QuasiGeodesicCertificate(graph, g, path, tuple(markers), info,
                                    K=10 * D, C=10 * D)


def _bits(mask: int):
    while mask:
        b = mask & -mask
        yield b.bit_length() - 1
        mask ^= b


def _fixes(graph: SimplicialGraph, h: GroupElement, w: int) -> bool:
    x = canonical_vertex(graph, w, ())
    return act(x, h) == x


def general_distance_formula_check(cert: QuasiGeodesicCertificate,
                                   pair_step: int = 1) -> dict:
    """Window sum and quasi-geodesic inequality for a built certificate.

    The window sum of link distances over the interior of the path is
    compared to the syllable length at (10D, 10D) and at the sharper
    (D + 3, 0); the parameter-vs-distance inequality is checked at every
    sampled index pair against the two-sided covering-distance interval,
    and passes only if it holds for every value in the interval.
    """
    graph = cert.graph
    D = graph.diameter()
    path = cert.path
    ell = len(path) - 1
    syl = syllable_length(graph, cert.g.letters)
    total = 0
    for i in range(1, ell):
        total += _delta(path[i], path[i - 1], path[i + 1])
    K, C = cert.K, cert.C
    window_main = (syl / K - C) <= total <= (K * syl + C)
    sharp = D + 3
    window_sharp = (syl / sharp) <= total <= (sharp * syl) or syl == 0
    qg_ok = True
    worst = None
    for p in range(0, ell + 1, pair_step):
        for q in range(p + 1, ell + 1, pair_step):
            dprime = covering_distance_exact(path[p], path[q])
            d_lo, d_hi = dprime, D * max(dprime, 1) if dprime else 0
            if dprime == 0:
                d_lo = d_hi = 0
            lower_ok = (q - p) / K - C <= d_lo
            upper_ok = d_hi <= K * (q - p) + C
            if not (lower_ok and upper_ok):
                qg_ok = False
                worst = {"p": p, "q": q, "d_interval": [d_lo, d_hi]}
    return {
        "syl": syl, "window_sum": total, "length": ell,
        "K": K, "C": C,
        "window_pass": bool(window_main),
        "window_sharp_pass": bool(window_sharp),
        "quasi_geodesic_pass": bool(qg_ok),
        "worst_pair": worst,
        "pass": bool(window_main and window_sharp and qg_ok),
    }
