"""Group elements of a graph product, kept in a canonical normal form.

An element is a sequence of syllables (vertex, exponent). The normal form
is computed in three stages: exponents are reduced to canonical
representatives (1..order-1 for finite vertices, any nonzero integer for
infinite ones, zero syllables deleted), same-vertex syllables separated
only by commuting material are merged until no merge applies, and finally
the syllables are shuffled into the lexicographically least arrangement
reachable by swapping adjacent commuting syllables (repeatedly emit the
least-rank syllable that can be brought to the front). Two words are equal
in the group iff they have the same normal form.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Optional

from .graph import LabeledGraph, UnknownVertex, bits

Syllable = tuple[int, int]  # (vertex rank, exponent)


class MalformedWord(ValueError):
    """Unparseable word text."""


def _canon_exp(order: Optional[int], exp: int) -> int:
    """Canonical exponent representative; 0 means the syllable vanishes."""
    if order is None:
        return exp
    return exp % order


def _normal_form(g: LabeledGraph, raw: Iterable[Syllable]) -> tuple[Syllable, ...]:
    word: list[Syllable] = []
    for v, e in raw:
        e = _canon_exp(g.orders[v], e)
        if e:
            word.append((v, e))

    # Merge same-vertex syllables separated only by commuting syllables,
    # rechecking from scratch after every merge since deletions can expose
    # new merges across the gap.
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(word):
            v, e = word[i]
            adj = g.adj_bits[v]
            j = i + 1
            while j < len(word):
                u, f = word[j]
                if u == v:
                    merged = _canon_exp(g.orders[v], e + f)
                    del word[j]
                    if merged:
                        word[i] = (v, merged)
                    else:
                        del word[i]
                    changed = True
                    break
                if not (adj >> u) & 1:
                    break
                j += 1
            if changed:
                break
            i += 1

    # Lexicographically least shuffle: repeatedly take the least-rank
    # syllable whose earlier syllables all commute with it. An earlier
    # same-vertex syllable blocks (adjacency is irreflexive), so merges
    # cannot reappear.
    out: list[Syllable] = []
    while word:
        seen = 0
        best = -1
        for idx, (v, _) in enumerate(word):
            if seen & ~g.adj_bits[v] == 0 and (best < 0 or v < word[best][0]):
                best = idx
            seen |= 1 << v
        out.append(word.pop(best))
    return tuple(out)


class GroupElement:
    """An element of the graph product of ``graph``, stored in normal form.

    Instances are immutable and hashable; equality is equality in the
    group. Multiplication, inversion and powers renormalize.
    """

    __slots__ = ("graph", "syllables")

    def __init__(self, graph: LabeledGraph, pairs: Iterable[tuple[str, int]] = ()):
        raw = [(graph.rank(name), exp) for name, exp in pairs]
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "syllables", _normal_form(graph, raw))

    @classmethod
    def _make(cls, graph: LabeledGraph, normal: tuple[Syllable, ...]) -> "GroupElement":
        el = cls.__new__(cls)
        object.__setattr__(el, "graph", graph)
        object.__setattr__(el, "syllables", normal)
        return el

    @classmethod
    def identity(cls, graph: LabeledGraph) -> "GroupElement":
        return cls._make(graph, ())

    @classmethod
    def generator(cls, graph: LabeledGraph, name: str, exp: int = 1) -> "GroupElement":
        return cls(graph, [(name, exp)])

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("GroupElement is immutable")

    # -- algebra -----------------------------------------------------------

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if self.graph != other.graph:
            raise ValueError("elements live over different graphs")
        return GroupElement._make(
            self.graph, _normal_form(self.graph, self.syllables + other.syllables)
        )

    def inverse(self) -> "GroupElement":
        rev = [(v, -e) for v, e in reversed(self.syllables)]
        return GroupElement._make(self.graph, _normal_form(self.graph, rev))

    def __pow__(self, n: int) -> "GroupElement":
        base = self if n >= 0 else self.inverse()
        result = GroupElement.identity(self.graph)
        for _ in range(abs(n)):
            result = result * base
        return result

    def conjugate(self, by: "GroupElement") -> "GroupElement":
        """by * self * by^-1."""
        return by * self * by.inverse()

    # -- structure ----------------------------------------------------------

    @property
    def is_identity(self) -> bool:
        return not self.syllables

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def __len__(self) -> int:
        return len(self.syllables)

    def support(self) -> frozenset[str]:
        return frozenset(self.graph.names[v] for v, _ in self.syllables)

    def support_mask(self) -> int:
        m = 0
        for v, _ in self.syllables:
            m |= 1 << v
        return m

    def named_syllables(self) -> tuple[tuple[str, int], ...]:
        return tuple((self.graph.names[v], e) for v, e in self.syllables)

    def exponent_vector(self) -> dict[str, int]:
        """Image in the direct product of the vertex groups' abelianizations.

        Finite vertices are reduced mod their order (0..order-1); infinite
        vertices report the exact integer sum. Vertices absent from the
        word are omitted when their total is zero.
        """
        totals: dict[int, int] = {}
        for v, e in self.syllables:
            totals[v] = totals.get(v, 0) + e
        out: dict[str, int] = {}
        for v, total in totals.items():
            order = self.graph.orders[v]
            if order is not None:
                total %= order
            if total:
                out[self.graph.names[v]] = total
        return out

    # -- comparison / hashing ------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.graph == other.graph and self.syllables == other.syllables

    def __hash__(self) -> int:
        return hash((self.graph, self.syllables))

    # -- text ------------------------------------------------------------------

    def text(self) -> str:
        if not self.syllables:
            return "(identity)"
        parts = []
        for v, e in self.syllables:
            name = self.graph.names[v]
            parts.append(name if e == 1 else f"{name}^{e}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"<{self.text()}>"

    @classmethod
    def parse(cls, graph: LabeledGraph, text: str) -> "GroupElement":
        """Parse "a b^2 c^-1" style text; empty text or "1" is the identity."""
        stripped = text.strip()
        if stripped in ("", "1", "(identity)"):
            return cls.identity(graph)
        pairs = []
        for token in stripped.split():
            if "^" in token:
                name, _, exppart = token.rpartition("^")
                try:
                    exp = int(exppart)
                except ValueError:
                    raise MalformedWord(f"bad exponent in token {token!r}") from None
            else:
                name, exp = token, 1
            if name not in graph.index:
                raise UnknownVertex(f"no vertex named {name!r}")
            pairs.append((name, exp))
        return cls(graph, pairs)


def word(graph: LabeledGraph, text: str) -> GroupElement:
    """Shorthand for GroupElement.parse."""
    return GroupElement.parse(graph, text)


# -- cyclic reduction and conjugacy ------------------------------------------


def _frontable_positions(g: LabeledGraph, syls: tuple[Syllable, ...]) -> list[int]:
    front = []
    seen = 0
    for idx, (v, _) in enumerate(syls):
        if seen & ~g.adj_bits[v] == 0:
            front.append(idx)
        seen |= 1 << v
    return front


def _endable_vertices(g: LabeledGraph, syls: tuple[Syllable, ...]) -> dict[int, int]:
    """Map vertex -> position of its endable syllable (later material commutes)."""
    endable: dict[int, int] = {}
    seen = 0
    for idx in range(len(syls) - 1, -1, -1):
        v, _ = syls[idx]
        if seen & ~g.adj_bits[v] == 0:
            endable[v] = idx
        seen |= 1 << v
    return endable


def cyclic_reduce(x: GroupElement) -> tuple[GroupElement, GroupElement]:
    """Split x as conj * core * conj^-1 with core cyclically reduced.

    A word is cyclically reduced when no syllable that can be shuffled to
    the front has a same-vertex partner that can be shuffled to the end.
    Each peel moves one such syllable around the back, strictly shortening
    the word, so this terminates.
    """
    g = x.graph
    conj = GroupElement.identity(g)
    core = x
    while True:
        syls = core.syllables
        endable = _endable_vertices(g, syls)
        peeled = False
        for idx in _frontable_positions(g, syls):
            v, e = syls[idx]
            partner = endable.get(v)
            if partner is not None and partner != idx:
                s = GroupElement._make(g, ((v, e),))
                conj = conj * s
                core = s.inverse() * core * s
                peeled = True
                break
        if not peeled:
            return conj, core


def _syllable_multiset(x: GroupElement) -> tuple[Syllable, ...]:
    return tuple(sorted(x.syllables))


def conjugacy_witness(x: GroupElement, y: GroupElement) -> Optional[GroupElement]:
    """A witness g with g * x * g^-1 == y, or None if x, y are not conjugate.

    Both elements are cyclically reduced; the search walks the finite set
    of cyclic rotations (conjugating by any frontable syllable) of the
    reduced core of x, comparing against the reduced core of y. Rotating a
    cyclically reduced word never changes its syllable multiset, so the
    state space is finite and the multiset is a cheap prefilter.
    """
    if x.graph != y.graph:
        raise ValueError("elements live over different graphs")
    g = x.graph
    cx, corex = cyclic_reduce(x)
    cy, corey = cyclic_reduce(y)
    if len(corex) != len(corey):
        return None
    if _syllable_multiset(corex) != _syllable_multiset(corey):
        return None
    if x.exponent_vector() != y.exponent_vector():
        return None

    # BFS over rotations; parent links rebuild the accumulated conjugator r
    # with corex = r * state * r^-1. Rotating a cyclically reduced word
    # should stay cyclically reduced, but the re-reduction's conjugator is
    # folded into the edge element anyway so the invariant cannot drift.
    start = corex.syllables
    target = corey.syllables
    parents: dict[tuple[Syllable, ...], Optional[tuple[tuple[Syllable, ...], GroupElement]]] = {
        start: None
    }
    queue = deque([start])
    found: Optional[tuple[Syllable, ...]] = start if start == target else None
    while queue and found is None:
        state = queue.popleft()
        el = GroupElement._make(g, state)
        for idx in _frontable_positions(g, state):
            v, e = state[idx]
            s = GroupElement._make(g, ((v, e),))
            extra, rotated = cyclic_reduce(s.inverse() * el * s)
            nxt = rotated.syllables
            if nxt in parents:
                continue
            parents[nxt] = (state, s * extra)
            if nxt == target:
                found = nxt
                break
            queue.append(nxt)
    if found is None:
        return None

    r = GroupElement.identity(g)
    node: tuple[Syllable, ...] = found
    while parents[node] is not None:
        prev, rot = parents[node]  # type: ignore[misc]
        r = rot * r
        node = prev
    # corex = r * corey_state * r^-1 along the path, so g = cy * r^-1 * cx^-1.
    witness = cy * r.inverse() * cx.inverse()
    if witness * x * witness.inverse() != y:
        raise AssertionError("conjugacy witness failed verification")
    return witness


def are_conjugate(x: GroupElement, y: GroupElement) -> bool:
    return conjugacy_witness(x, y) is not None
