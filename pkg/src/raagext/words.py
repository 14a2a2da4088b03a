"""Element algebra of the right-angled Artin group on a simplicial graph.

Letters are packed into ints: ``2*v`` is the inverse generator of vertex
``v`` and ``2*v + 1`` the positive one, so plain int order is exactly the
letter order used for canonical forms (vertex order first, inverse before
positive).  Words are tuples of letter codes.

The canonical normal form of an element is the lexicographically least
reduced word representing it.  Two reduced words represent the same element
iff they differ by swaps of adjacent commuting letters, so the least word
in that commutation class is a well-defined normal form and gives O(1)
equality and stable cache keys.

All functions here are pure; the module-level caches are bounded and safe
to share between threads (worst case a value is computed twice).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Optional

from .graphs import GraphError, SimplicialGraph

CACHE_SIZE = 1 << 20

Letters = tuple


class WordParseError(ValueError):
    pass


def letter_code(graph: SimplicialGraph, vertex: str, sign: int) -> int:
    v = graph.index(vertex)
    return 2 * v + (1 if sign > 0 else 0)


def letter_vertex(code: int) -> int:
    return code >> 1


def letter_sign(code: int) -> int:
    return 1 if code & 1 else -1


def invert_letters(letters: Letters) -> Letters:
    return tuple(c ^ 1 for c in reversed(letters))


def support_mask(letters: Letters) -> int:
    m = 0
    for c in letters:
        m |= 1 << (c >> 1)
    return m


def max_run(letters: Letters) -> int:
    best = run = 0
    prev = None
    for c in letters:
        run = run + 1 if c == prev else 1
        prev = c
        if run > best:
            best = run
    return best


# ---------------------------------------------------------------------------
# reduction and the canonical form


def _pile_reduce(graph: SimplicialGraph, letters: Letters) -> list:
    """One-pass reduction to some reduced word.

    Each incoming letter scans back over letters it commutes with; hitting
    its inverse cancels the pair, hitting a non-commuting letter keeps it.
    Removals cannot create new cancellable pairs, so the output stays
    reduced throughout.
    """
    adj = graph._adj
    out = []
    for c in letters:
        v = c >> 1
        inv = c ^ 1
        i = len(out) - 1
        hit = -1
        while i >= 0:
            o = out[i]
            if o == inv:
                hit = i
                break
            if not (adj[o >> 1] >> v) & 1:
                break
            i -= 1
        if hit >= 0:
            out.pop(hit)
        else:
            out.append(c)
    return out


def _lex_canon(graph: SimplicialGraph, word: list) -> Letters:
    """Lexicographically least shuffle of a reduced word.

    Greedy: repeatedly emit the smallest letter that commutes past
    everything still ahead of it.  Same-vertex letters never pass each
    other, which keeps the result well defined.
    """
    adj = graph._adj
    rem = list(word)
    out = []
    while rem:
        allowed = -1
        best = -1
        best_i = 0
        for i, code in enumerate(rem):
            v = code >> 1
            if (allowed >> v) & 1 and (best < 0 or code < best):
                best = code
                best_i = i
            allowed &= adj[v]
            if not allowed:
                break
        out.append(rem.pop(best_i))
    return tuple(out)


@lru_cache(maxsize=CACHE_SIZE)
def reduce_letters(graph: SimplicialGraph, letters: Letters) -> Letters:
    """Canonical normal form of the element represented by ``letters``."""
    return _lex_canon(graph, _pile_reduce(graph, letters))


def mult(graph: SimplicialGraph, *parts: Letters) -> Letters:
    joined = ()
    for p in parts:
        joined += p
    return reduce_letters(graph, joined)


def conjugate(graph: SimplicialGraph, g: Letters, by: Letters) -> Letters:
    """g^by, i.e. by^-1 * g * by."""
    return reduce_letters(graph, invert_letters(by) + g + by)


def is_reduced_sequence(graph: SimplicialGraph, parts: Iterable[Letters]) -> bool:
    """Word lengths add up across the product."""
    parts = [reduce_letters(graph, p) for p in parts]
    return len(mult(graph, *parts)) == sum(len(p) for p in parts)


# ---------------------------------------------------------------------------
# prefix and suffix extraction


@lru_cache(maxsize=CACHE_SIZE)
def iota_split(graph: SimplicialGraph, letters: Letters, allowed_mask: int):
    """Maximal prefix supported in ``allowed_mask`` and the remainder.

    A letter joins the prefix when its vertex is allowed and it commutes
    with every earlier letter that stayed behind.  The set of extractable
    positions is closed under union, so this single left-to-right pass
    finds the unique maximal prefix.
    """
    adj = graph._adj
    can = -1  # vertices still able to jump over everything kept so far
    pre = []
    rest = []
    for code in letters:
        v = code >> 1
        if (allowed_mask >> v) & 1 and (can >> v) & 1:
            pre.append(code)
        else:
            rest.append(code)
            can &= adj[v]
            if not can:
                rest_idx = len(pre) + len(rest)
                rest.extend(letters[rest_idx:])
                break
    return _lex_canon(graph, pre), _lex_canon(graph, rest)


def iota(graph: SimplicialGraph, letters: Letters, vertex_set_mask: int) -> Letters:
    return iota_split(graph, letters, vertex_set_mask)[0]


def tau_split(graph: SimplicialGraph, letters: Letters, allowed_mask: int):
    """Maximal suffix supported in the mask, via the mirrored prefix."""
    pre, rest = iota_split(graph, invert_letters(letters), allowed_mask)
    return invert_letters(pre), invert_letters(rest)


def tau(graph: SimplicialGraph, letters: Letters, vertex_set_mask: int) -> Letters:
    return tau_split(graph, letters, vertex_set_mask)[0]


# ---------------------------------------------------------------------------
# lengths


@lru_cache(maxsize=CACHE_SIZE)
def star_length(graph: SimplicialGraph, letters: Letters) -> int:
    """Minimal number of factors each supported in one vertex star.

    Peels the maximal star prefix for every vertex and recurses; stripping
    maximally is safe because deleting the extra extracted letters from an
    optimal factorization of the remainder leaves a factorization of the
    same length.
    """
    if not letters:
        return 0
    smask = support_mask(letters)
    stars = graph._star
    for sm in stars:
        if not smask & ~sm:
            return 1
    best = len(letters)
    for v in range(graph.n):
        pre, rest = iota_split(graph, letters, stars[v])
        if pre:
            sub = star_length(graph, rest)
            if sub + 1 < best:
                best = sub + 1
    return best


@lru_cache(maxsize=CACHE_SIZE)
def syllable_length(graph: SimplicialGraph, letters: Letters) -> int:
    """Minimal number of vertex-power blocks multiplying to the element."""
    if not letters:
        return 0
    smask = support_mask(letters)
    if smask & (smask - 1) == 0:
        return 1
    best = len(letters)
    for v in range(graph.n):
        if not (smask >> v) & 1:
            continue
        pre, rest = iota_split(graph, letters, 1 << v)
        if pre:
            sub = syllable_length(graph, rest)
            if sub + 1 < best:
                best = sub + 1
    return best


def star_length_at_most(graph: SimplicialGraph, letters: Letters, bound: int) -> bool:
    """Early-exit star length test, cheaper than the exact value for big words."""
    if not letters:
        return bound >= 0
    if bound <= 0:
        return False
    smask = support_mask(letters)
    if any(not smask & ~sm for sm in graph._star):
        return True
    if bound == 1:
        return False
    frontier = {letters}
    for _ in range(bound - 1):
        nxt = set()
        for h in frontier:
            for v in range(graph.n):
                pre, rest = iota_split(graph, h, graph._star[v])
                if pre:
                    if any(not support_mask(rest) & ~sm for sm in graph._star):
                        return True
                    nxt.add(rest)
        frontier = nxt
        if not frontier:
            return False
    return False


def star_factor_greedy(graph: SimplicialGraph, letters: Letters):
    """One optimal star factorization, maximal-prefix peels, smallest vertex first.

    Returns a list of (vertex index, factor letters); the product left to
    right is the element.
    """
    out = []
    h = reduce_letters(graph, letters)
    total = star_length(graph, h)
    while h:
        for v in range(graph.n):
            pre, rest = iota_split(graph, h, graph._star[v])
            if pre and star_length(graph, rest) == total - 1:
                out.append((v, pre))
                h = rest
                total -= 1
                break
        else:
            raise AssertionError("greedy star peel found no optimal step")
    return out


# ---------------------------------------------------------------------------
# prefix enumeration (all extractable prefixes, not just maximal ones)


def enumerate_prefixes(graph: SimplicialGraph, letters: Letters, allowed_mask: int):
    """All nonempty (prefix, rest) splits with prefix support in the mask.

    Enumerates extraction subsets by position: a position may be taken when
    its vertex lies in the mask and commutes with every earlier kept letter.
    Results are deduplicated by the canonical prefix.
    """
    adj = graph._adj
    n = len(letters)
    out = {}

    def record(taken: tuple, kept: tuple):
        pre = _lex_canon(graph, list(taken))
        if pre not in out:
            out[pre] = _lex_canon(graph, list(kept))

    def go(i: int, can: int, taken: tuple, kept: tuple):
        if i == n:
            if taken:
                record(taken, kept)
            return
        code = letters[i]
        v = code >> 1
        # keep letters[i] behind the prefix
        nc = can & adj[v]
        if nc:
            go(i + 1, nc, taken, kept + (code,))
        elif taken:
            # nothing later can be extracted past this letter
            record(taken, kept + letters[i:])
        # take letters[i] into the prefix
        if (allowed_mask >> v) & 1 and (can >> v) & 1:
            go(i + 1, can, taken + (code,), kept)

    go(0, -1, (), ())
    return out


# ---------------------------------------------------------------------------
# derived operations


def min_syllable_star_factorization(graph: SimplicialGraph, letters: Letters):
    """Star factorization of minimal length minimizing total syllable count.

    Dijkstra over (remaining element, factors used): a step strips any
    extractable star-word prefix and costs its syllable length.  The number
    of factors is pinned to the star length, and branches that cannot
    finish within the remaining factor budget are cut.

    Returns (best_total_syllables, factors) with factors a tuple of
    (vertex index, prefix letters) multiplying left to right to the element.
    """
    import heapq

    g = reduce_letters(graph, letters)
    r = star_length(graph, g)
    if r == 0:
        return 0, ()
    stars = graph._star
    start = (g, 0)
    dist = {start: 0}
    parent = {start: None}
    heap = [(0, start)]
    target = None
    while heap:
        cost, state = heapq.heappop(heap)
        if cost > dist[state]:
            continue
        h, used = state
        if not h and used == r:
            target = state
            break
        if used >= r:
            continue
        budget = r - used
        for v in range(graph.n):
            for pre, rest in enumerate_prefixes(graph, h, stars[v]).items():
                if star_length(graph, rest) > budget - 1:
                    continue
                nstate = (rest, used + 1)
                ncost = cost + syllable_length(graph, pre)
                if ncost < dist.get(nstate, ncost + 1):
                    dist[nstate] = ncost
                    parent[nstate] = (state, v, pre)
                    heapq.heappush(heap, (ncost, nstate))
    if target is None:
        raise AssertionError("no star factorization of the required length")
    factors = []
    cur = target
    while parent[cur] is not None:
        prev, v, pre = parent[cur]
        factors.append((v, pre))
        cur = prev
    factors.reverse()
    return dist[target], tuple(factors)


def syllable_via_star(graph: SimplicialGraph, letters: Letters) -> int:
    """Minimal total syllable count over minimal-length star factorizations."""
    return min_syllable_star_factorization(graph, letters)[0]


def cyclic_reduce_letters(graph: SimplicialGraph, letters: Letters):
    """Strip conjugating pairs: returns (core, conjugator) with
    g = conjugator * core * conjugator^-1.

    While some letter is movable to the front and its inverse to the back,
    remove the pair (smallest eligible vertex first).
    """
    g = reduce_letters(graph, letters)
    conj: Letters = ()
    adj = graph._adj
    while True:
        front = {}  # vertex -> code movable to front
        can = -1
        for code in g:
            v = code >> 1
            if (can >> v) & 1 and v not in front:
                front[v] = code
            can &= adj[v]
            if not can:
                break
        back = {}
        can = -1
        for code in reversed(g):
            v = code >> 1
            if (can >> v) & 1 and v not in back:
                back[v] = code
            can &= adj[v]
            if not can:
                break
        stripped = False
        for v in sorted(front):
            code = front[v]
            if back.get(v) == code ^ 1:
                i = g.index(code)
                j = len(g) - 1 - tuple(reversed(g)).index(code ^ 1)
                rest = g[:i] + g[i + 1:j] + g[j + 1:]
                conj = conj + (code,)
                g = reduce_letters(graph, rest)
                stripped = True
                break
        if not stripped:
            return g, reduce_letters(graph, conj)


# ---------------------------------------------------------------------------
# word literals


def parse_word(graph: SimplicialGraph, text: str) -> Letters:
    """Parse ``a b^-1 c^3`` style literals into letter codes."""
    letters = []
    for tok in text.split():
        name, caret, exp = tok.partition("^")
        if not name:
            raise WordParseError(f"bad token {tok!r}")
        try:
            v = graph.index(name)
        except GraphError:
            raise WordParseError(f"unknown generator {name!r} in token {tok!r}")
        e = 1
        if caret:
            try:
                e = int(exp)
            except ValueError:
                raise WordParseError(f"bad exponent in token {tok!r}")
        code = 2 * v + (1 if e > 0 else 0)
        letters.extend([code] * abs(e))
    return tuple(letters)


def format_word(graph: SimplicialGraph, letters: Letters) -> str:
    """Inverse of parse_word on canonical words; identity prints as '1'."""
    if not letters:
        return "1"
    toks = []
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        v = graph.label(letters[i] >> 1)
        e = (j - i) * letter_sign(letters[i])
        toks.append(v if e == 1 else f"{v}^{e}")
        i = j
    return " ".join(toks)


# ---------------------------------------------------------------------------
# the element wrapper


class GroupElement:
    """An element of the right-angled Artin group on ``graph``.

    Stores the canonical normal form; equality and hashing are by that
    form, so elements are usable as dict keys everywhere.
    """

    __slots__ = ("graph", "letters")

    def __init__(self, graph: SimplicialGraph, letters: Iterable[int] = (),
                 _canonical: bool = False):
        letters = tuple(letters)
        for c in letters:
            if not 0 <= (c >> 1) < graph.n:
                raise GraphError(f"letter code {c} outside the graph")
        self.graph = graph
        self.letters = letters if _canonical else reduce_letters(graph, letters)

    @classmethod
    def from_word(cls, graph: SimplicialGraph, text: str) -> "GroupElement":
        return cls(graph, parse_word(graph, text))

    @classmethod
    def identity(cls, graph: SimplicialGraph) -> "GroupElement":
        return cls(graph, (), _canonical=True)

    @classmethod
    def generator(cls, graph: SimplicialGraph, vertex: str, sign: int = 1):
        return cls(graph, (letter_code(graph, vertex, sign),), _canonical=True)

    # algebra

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if self.graph != other.graph:
            raise GraphError("elements of different groups")
        return GroupElement(self.graph, mult(self.graph, self.letters, other.letters),
                            _canonical=True)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.graph,
                            reduce_letters(self.graph, invert_letters(self.letters)),
                            _canonical=True)

    def __pow__(self, k: int) -> "GroupElement":
        if k < 0:
            return self.inverse() ** (-k)
        out = GroupElement.identity(self.graph)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate_by(self, h: "GroupElement") -> "GroupElement":
        """g^h = h^-1 g h."""
        return h.inverse() * self * h

    def commutes_with(self, other: "GroupElement") -> bool:
        comm = mult(self.graph, self.letters, other.letters,
                    invert_letters(self.letters), invert_letters(other.letters))
        return not comm

    # views

    @property
    def word_length(self) -> int:
        return len(self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def support(self) -> frozenset:
        m = support_mask(self.letters)
        return frozenset(self.graph.label(i) for i in range(self.graph.n)
                         if (m >> i) & 1)

    def star_len(self) -> int:
        return star_length(self.graph, self.letters)

    def syllable_len(self) -> int:
        return syllable_length(self.graph, self.letters)

    def cyclic_reduce(self):
        core, conj = cyclic_reduce_letters(self.graph, self.letters)
        return (GroupElement(self.graph, core, _canonical=True),
                GroupElement(self.graph, conj, _canonical=True))

    def iota(self, vertex_set: Iterable[str]) -> "GroupElement":
        mask = self.graph._mask_of(vertex_set)
        return GroupElement(self.graph, iota(self.graph, self.letters, mask),
                            _canonical=True)

    def tau(self, vertex_set: Iterable[str]) -> "GroupElement":
        mask = self.graph._mask_of(vertex_set)
        return GroupElement(self.graph, tau(self.graph, self.letters, mask),
                            _canonical=True)

    def __eq__(self, other) -> bool:
        return (isinstance(other, GroupElement) and self.graph == other.graph
                and self.letters == other.letters)

    def __hash__(self) -> int:
        return hash((self.graph, self.letters))

    def __str__(self) -> str:
        return format_word(self.graph, self.letters)

    def __repr__(self) -> str:
        return f"<{format_word(self.graph, self.letters)}>"


class Factorization:
    """A star-word factorization with per-factor vertices.

    ``factors`` multiply left to right to ``target``; each factor is
    supported in the star of its vertex.
    """

    __slots__ = ("graph", "factors", "target")

    def __init__(self, graph: SimplicialGraph, factors, target: GroupElement):
        self.graph = graph
        self.factors = tuple(factors)  # (vertex label, GroupElement)
        self.target = target
        self.validate()

    def validate(self):
        prod = GroupElement.identity(self.graph)
        for v, h in self.factors:
            star = set(self.graph.star(v))
            if not set(h.support()) <= star:
                raise GraphError(f"factor {h} not supported in st({v})")
            prod = prod * h
        if prod != self.target:
            raise GraphError("factor product does not reproduce the target")

    def __len__(self) -> int:
        return len(self.factors)

    def total_syllables(self) -> int:
        return sum(h.syllable_len() for _, h in self.factors)


def star_length_with_witness(g: GroupElement):
    """Star length plus a greedy optimal factorization as a Factorization."""
    parts = star_factor_greedy(g.graph, g.letters)
    factors = [(g.graph.label(v), GroupElement(g.graph, pre, _canonical=True))
               for v, pre in parts]
    return len(parts), Factorization(g.graph, factors, g)


def clear_caches():
    reduce_letters.cache_clear()
    iota_split.cache_clear()
    star_length.cache_clear()
    syllable_length.cache_clear()
