"""Vertex domination order and everything derived from it.

A vertex u is dominated by v (written u <= v) when every relation u has to
satisfy is already satisfied by v's neighbours:

  * u == v, or
  * u has infinite order and lk(u) is contained in st(v), or
  * u and v both have finite order, a power of the same prime, and st(u)
    is contained in st(v).

Domination is reflexive and transitive. Mutual domination partitions the
vertices into equivalence classes, each of which generates either a finite
abelian p-group (a clique of same-prime vertices), a free abelian group
(a clique of infinite vertices, singletons included), or a free group (an
independent set of at least two infinite vertices).

The depth invariant measured here drives the nilpotency-class bound for
the automorphism subgroup generated by dominated transvections and
partial conjugations: chains of strict domination between infinite-order
vertices raise it, and so do chains ending in a vertex whose star
separates the graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .graph import LabeledGraph, Order, bits, prime_power


def dominates(g: LabeledGraph, u: str, v: str) -> bool:
    """True when u <= v, i.e. v can absorb u's relations."""
    i, j = g.rank(u), g.rank(v)
    if i == j:
        return True
    oi, oj = g.orders[i], g.orders[j]
    if oi is None:
        return g.adj_bits[i] & ~g.star_mask(j) == 0
    if oj is None:
        return False
    pi, _ = prime_power(oi)
    pj, _ = prime_power(oj)
    return pi == pj and g.star_mask(i) & ~g.star_mask(j) == 0


def transvection_exponent(g: LabeledGraph, u: str, v: str) -> int:
    """The least k >= 1 for which u -> u v^k extends to an automorphism.

    1 when u has infinite order; p^(j-i) when u, v have orders p^i, p^j
    with j > i; otherwise 1.
    """
    if u == v or not dominates(g, u, v):
        raise ValueError(f"{u!r} is not dominated by {v!r}")
    ou, ov = g.order_of(u), g.order_of(v)
    if ou is None:
        return 1
    p, i = prime_power(ou)
    _, j = prime_power(ov)  # same prime, guaranteed by dominates
    return p ** (j - i) if j > i else 1


def dominates_inf(g: LabeledGraph, u: str, v: str) -> bool:
    """u <= v with u of infinite order (or u == v)."""
    if u == v:
        return True
    return g.order_of(u) is None and dominates(g, u, v)


@dataclass(frozen=True)
class ClassKind:
    """What a domination-equivalence class generates.

    kind is one of "finite" (abelian p-group; prime is set), "free_abelian"
    (clique of infinite vertices, singletons included) or "free"
    (independent set of >= 2 infinite vertices).
    """

    kind: str
    prime: Optional[int] = None

    @property
    def abelian(self) -> bool:
        return self.kind != "free"


@dataclass(frozen=True)
class CompressedGraph:
    """Quotient of the defining graph by domination equivalence.

    classes are listed by least member rank; adj[i] is the bitmask of
    classes adjacent to class i (adjacency between distinct classes is
    uniform over members, which the constructor of the domination table
    verifies). order_multisets keeps the sorted member orders of each
    class so symmetry checks can require label preservation.
    """

    classes: tuple[frozenset[str], ...]
    kinds: tuple[ClassKind, ...]
    adj: tuple[int, ...]
    order_multisets: tuple[tuple[Order, ...], ...]

    @property
    def n(self) -> int:
        return len(self.classes)

    def adjacent(self, i: int, j: int) -> bool:
        return bool(self.adj[i] >> j & 1)


@dataclass(frozen=True)
class DepthWitness:
    """A structure achieving a vertex's depth.

    kind "chain": vertices is a strict domination chain of infinite-order
    vertices ending at the measured vertex, one per equivalence class.
    kind "separation": vertices is such a chain whose first vertex u has
    >= 2 components of (graph minus st(u)) not inside st(last); those
    components are listed. The depth is len(vertices) for a chain and
    len(vertices) + 1 for a separation.
    """

    value: int
    kind: str
    vertices: tuple[str, ...]
    components: tuple[frozenset[str], ...] = ()


class DominationTable:
    """All domination-derived data for one graph, computed eagerly.

    Obtain through domination_table(), which memoizes on the graph.
    """

    def __init__(self, g: LabeledGraph):
        self.g = g
        n = g.n
        # dom_bits[i]: mask of j with i <= j.
        self.dom_bits = tuple(
            sum(
                1 << j
                for j in range(n)
                if dominates(g, g.names[i], g.names[j])
            )
            for i in range(n)
        )

        # Equivalence classes (mutual domination), ordered by least rank.
        class_of = [-1] * n
        class_masks: list[int] = []
        for i in range(n):
            if class_of[i] >= 0:
                continue
            mask = 0
            for j in range(i, n):
                if self.dom_bits[i] >> j & 1 and self.dom_bits[j] >> i & 1:
                    mask |= 1 << j
                    class_of[j] = len(class_masks)
            class_masks.append(mask)
        self.class_of = tuple(class_of)
        self.class_masks = tuple(class_masks)

        self.kinds = tuple(self._classify(mask) for mask in class_masks)
        self._check_uniform_adjacency()

        # Class partial order and adjacency.
        k = len(class_masks)
        self.class_le = tuple(
            sum(
                1 << b
                for b in range(k)
                if self._member_le(class_masks[a], class_masks[b])
            )
            for a in range(k)
        )
        self.class_adj = tuple(
            sum(
                1 << b
                for b in range(k)
                if b != a and self._masks_adjacent(class_masks[a], class_masks[b])
            )
            for a in range(k)
        )
        self.maximal = tuple(
            a for a in range(k) if self.class_le[a] & ~(1 << a) == 0
        )

        # Classes of mutual <=_inf: infinite classes survive whole, finite
        # vertices become singletons.
        inf_class_of = [-1] * n
        inf_masks: list[int] = []
        for i in range(n):
            if inf_class_of[i] >= 0:
                continue
            if g.orders[i] is None:
                mask = class_masks[class_of[i]]
            else:
                mask = 1 << i
            for j in bits(mask):
                inf_class_of[j] = len(inf_masks)
            inf_masks.append(mask)
        self.inf_class_of = tuple(inf_class_of)
        self.inf_masks = tuple(inf_masks)

        # DAG on <=_inf classes: A -> B when some infinite member of A is
        # dominated by B's members and A != B. Finite singletons are sinks.
        m = len(inf_masks)
        edges_into: list[int] = [0] * m
        for a in range(m):
            rep = inf_masks[a].bit_length() - 1  # any member; uniform
            if g.orders[rep] is not None:
                continue
            for b in range(m):
                if a == b:
                    continue
                tgt = inf_masks[b].bit_length() - 1
                if self.dom_bits[rep] >> tgt & 1:
                    edges_into[b] |= 1 << a
        self.inf_edges_into = tuple(edges_into)
        self._longest_ending: dict[int, int] = {}
        self._longest_between: dict[tuple[int, int], int] = {}

    # -- construction helpers ----------------------------------------------

    def _classify(self, mask: int) -> ClassKind:
        g = self.g
        members = list(bits(mask))
        orders = [g.orders[i] for i in members]
        if orders[0] is not None:
            primes = {prime_power(o)[0] for o in orders}
            if len(primes) != 1:
                raise AssertionError("finite class mixing primes")
            if not g.is_clique_mask(mask):
                raise AssertionError("finite class is not a clique")
            return ClassKind("finite", primes.pop())
        if any(o is not None for o in orders):
            raise AssertionError("class mixes finite and infinite orders")
        if g.is_clique_mask(mask):
            return ClassKind("free_abelian")
        for i in members:
            if g.adj_bits[i] & mask:
                raise AssertionError("infinite class neither clique nor independent")
        return ClassKind("free")

    def _check_uniform_adjacency(self) -> None:
        g = self.g
        for a, ma in enumerate(self.class_masks):
            for b, mb in enumerate(self.class_masks):
                if b <= a:
                    continue
                flags = {bool(g.adj_bits[i] & mb) for i in bits(ma)}
                if len(flags) > 1:
                    raise AssertionError("class adjacency is not uniform")

    def _member_le(self, mask_a: int, mask_b: int) -> bool:
        i = mask_a.bit_length() - 1
        j = mask_b.bit_length() - 1
        return bool(self.dom_bits[i] >> j & 1)

    def _masks_adjacent(self, mask_a: int, mask_b: int) -> bool:
        i = mask_a.bit_length() - 1
        return bool(self.g.adj_bits[i] & mask_b)

    # -- depth machinery ------------------------------------------------------

    def longest_chain_ending(self, b: int) -> int:
        """Number of classes on the longest <=_inf chain ending at class b."""
        memo = self._longest_ending
        if b in memo:
            return memo[b]
        memo[b] = 1  # cycle guard; the edge relation is acyclic anyway
        best = 1
        for a in bits(self.inf_edges_into[b]):
            best = max(best, 1 + self.longest_chain_ending(a))
        memo[b] = best
        return best

    def longest_chain_between(self, a: int, b: int) -> int:
        """Longest <=_inf chain from class a to class b (class count), 0 if none."""
        if a == b:
            return 1
        key = (a, b)
        memo = self._longest_between
        if key in memo:
            return memo[key]
        memo[key] = 0
        best = 0
        for mid in bits(self.inf_edges_into[b]):
            sub = self.longest_chain_between(a, mid)
            if sub:
                best = max(best, sub + 1)
        memo[key] = best
        return best

    def chain_witness_ending(self, b: int) -> list[int]:
        """Ranks of one longest chain's representatives, ending at class b."""
        best_len = self.longest_chain_ending(b)
        chain = [b]
        cur = b
        while len(chain) < best_len:
            for a in bits(self.inf_edges_into[cur]):
                if self.longest_chain_ending(a) == best_len - len(chain):
                    chain.append(a)
                    cur = a
                    break
            else:
                raise AssertionError("chain reconstruction failed")
        chain.reverse()
        reps = []
        for cls in chain:
            # prefer an infinite-order representative; only the last class
            # of a chain may lack one
            members = list(bits(self.inf_masks[cls]))
            inf_members = [i for i in members if self.g.orders[i] is None]
            reps.append((inf_members or members)[0])
        return reps

    def chain_witness_between(self, a: int, b: int) -> list[int]:
        length = self.longest_chain_between(a, b)
        if not length:
            raise ValueError("classes are not chain-connected")
        chain = [b]
        cur = b
        while len(chain) < length:
            for mid in bits(self.inf_edges_into[cur]):
                if self.longest_chain_between(a, mid) == length - len(chain):
                    chain.append(mid)
                    cur = mid
                    break
            else:
                raise AssertionError("chain reconstruction failed")
        chain.reverse()
        reps = []
        for cls in chain:
            members = list(bits(self.inf_masks[cls]))
            inf_members = [i for i in members if self.g.orders[i] is None]
            reps.append((inf_members or members)[0])
        return reps


def domination_table(g: LabeledGraph) -> DominationTable:
    table = g._cache.get("domination")
    if table is None:
        table = DominationTable(g)
        g._cache["domination"] = table
    return table


# -- public views --------------------------------------------------------------


def equivalence_classes(g: LabeledGraph) -> list[frozenset[str]]:
    t = domination_table(g)
    return [g.names_of_mask(m) for m in t.class_masks]


def class_of_vertex(g: LabeledGraph, v: str) -> frozenset[str]:
    t = domination_table(g)
    return g.names_of_mask(t.class_masks[t.class_of[g.rank(v)]])


def class_kinds(g: LabeledGraph) -> list[ClassKind]:
    return list(domination_table(g).kinds)


def maximal_classes(g: LabeledGraph) -> list[frozenset[str]]:
    t = domination_table(g)
    return [g.names_of_mask(t.class_masks[a]) for a in t.maximal]


def inf_classes(g: LabeledGraph) -> list[frozenset[str]]:
    """Classes of mutual domination among infinite-order vertices; finite
    vertices appear as singletons."""
    t = domination_table(g)
    return [g.names_of_mask(m) for m in t.inf_masks]


def compressed_graph(g: LabeledGraph) -> CompressedGraph:
    t = domination_table(g)
    return CompressedGraph(
        classes=tuple(g.names_of_mask(m) for m in t.class_masks),
        kinds=t.kinds,
        adj=t.class_adj,
        order_multisets=tuple(
            tuple(sorted((g.orders[i] for i in bits(m)), key=lambda o: (o is None, o)))
            for m in t.class_masks
        ),
    )


def leaf_like(g: LabeledGraph, u: str) -> Optional[frozenset[str]]:
    """The unique maximal equivalence class inside lk(u) that dominates u.

    None when no maximal class lies inside the link, when several do, or
    when u is not dominated by the one that does. When defined the class
    is always abelian: u <= y forces the class to be a clique.
    """
    t = domination_table(g)
    i = g.rank(u)
    link = g.adj_bits[i]
    candidates = [a for a in t.maximal if t.class_masks[a] & ~link == 0]
    if len(candidates) != 1:
        return None
    cls = candidates[0]
    rep = t.class_masks[cls].bit_length() - 1
    if not t.dom_bits[i] >> rep & 1:
        return None
    if not t.kinds[cls].abelian:
        raise AssertionError("leaf-like class is not abelian")
    return g.names_of_mask(t.class_masks[cls])


def bridged_components(g: LabeledGraph, v: str) -> list[frozenset[str]]:
    """Components of the graph with the edges inside st(v) removed,
    restricted to the vertices outside st(v).

    Unlike plain components of (graph minus st(v)), two vertices outside
    st(v) sharing a neighbour in lk(v) stay bridged together.
    """
    return bridged_components_rel(g, g.star(v))


def bridged_components_rel(g: LabeledGraph, star: Iterable[str]) -> list[frozenset[str]]:
    """bridged_components against an arbitrary vertex set in place of st(v)."""
    star_mask = g.mask_of(star)
    outside = g.full_mask & ~star_mask
    # Components of the edge-deleted graph, found by BFS that refuses to
    # cross an edge with both endpoints in the star set.
    restricted_masks: list[int] = []
    seen = 0
    for start in bits(g.full_mask):
        if seen >> start & 1:
            continue
        comp = 1 << start
        frontier = comp
        while frontier:
            low = frontier & -frontier
            i = low.bit_length() - 1
            frontier &= ~low
            nbrs = g.adj_bits[i]
            if star_mask >> i & 1:
                nbrs &= ~star_mask
            grow = nbrs & ~comp
            comp |= grow
            frontier |= grow
        seen |= comp
        restricted = comp & outside
        if restricted:
            restricted_masks.append(restricted)
    restricted_masks.sort(key=lambda m: m & -m)
    return [g.names_of_mask(m) for m in restricted_masks]


# -- depth ------------------------------------------------------------------------


def _qualifying_components(
    g: LabeledGraph, u: str, v: str
) -> list[frozenset[str]]:
    """Components of (graph minus st(u)) not contained in st(v)."""
    sv = g.star_mask(g.rank(v))
    out = []
    for comp_mask in g.components_within(g.full_mask & ~g.star_mask(g.rank(u))):
        if comp_mask & ~sv:
            out.append(g.names_of_mask(comp_mask))
    return out


def depth_witness(g: LabeledGraph, v: str) -> DepthWitness:
    """The depth of v together with a structure achieving it."""
    t = domination_table(g)
    vb = t.inf_class_of[g.rank(v)]

    chain_len = t.longest_chain_ending(vb)

    best_sep = 0
    best_u: Optional[str] = None
    for u in g.names:
        ub = t.inf_class_of[g.rank(u)]
        length = t.longest_chain_between(ub, vb)
        if not length:
            continue
        if len(_qualifying_components(g, u, v)) >= 2:
            if length > best_sep:
                best_sep, best_u = length, u

    if best_u is not None and best_sep + 1 > chain_len:
        ub = t.inf_class_of[g.rank(best_u)]
        reps = t.chain_witness_between(ub, vb)
        vertices = [g.names[r] for r in reps]
        vertices[0] = best_u
        if len(vertices) > 1:
            vertices[-1] = v
        return DepthWitness(
            value=best_sep + 1,
            kind="separation",
            vertices=tuple(vertices),
            components=tuple(_qualifying_components(g, best_u, v)),
        )

    reps = t.chain_witness_ending(vb)
    vertices = [g.names[r] for r in reps]
    vertices[-1] = v
    return DepthWitness(value=chain_len, kind="chain", vertices=tuple(vertices))


def vertex_depth(g: LabeledGraph, v: str) -> int:
    return depth_witness(g, v).value


def infinity_depth(g: LabeledGraph) -> int:
    """Graph-level depth: the maximum vertex depth over vertices of order
    other than 2, or 1 when every vertex has order 2."""
    depths = [
        vertex_depth(g, v) for v in g.names if g.order_of(v) != 2
    ]
    return max(depths, default=1)
