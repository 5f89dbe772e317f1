"""Labeled simplicial graphs defining graph products of cyclic groups.

A graph here is a finite simplicial graph (no loops, no multi-edges) whose
vertices carry an order: a prime power >= 2 for a finite cyclic factor, or
infinity for an infinite cyclic one. The group presented by the graph has
one generator per vertex, relations v^order(v) = 1 for finite vertices, and
uv = vu for each edge {u, v}.

Vertices are addressed by name in the public API and by rank (position in
the declaration order) internally; adjacency is kept as per-vertex bitmasks
so membership tests and component sweeps stay cheap.
"""

from __future__ import annotations

import json
from typing import Iterable, Iterator, Optional, Sequence

# None encodes infinite order; any int present is a validated prime power.
Order = Optional[int]


class GraphError(ValueError):
    """Base class for malformed graph input."""


class MalformedGraph(GraphError):
    """Structurally invalid graph description (bad JSON shape, bad order string)."""


class NonPrimePower(GraphError):
    """A finite vertex order that is not a prime power >= 2."""


class DuplicateVertex(GraphError):
    pass


class LoopEdge(GraphError):
    pass


class UnknownVertex(GraphError):
    """A vertex name that was never declared."""


def prime_power(n: int) -> tuple[int, int]:
    """Return (p, k) with n == p**k, or raise NonPrimePower."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise NonPrimePower(f"order {n!r} is not a prime power >= 2")
    p = _least_prime_factor(n)
    m, k = n, 0
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise NonPrimePower(f"order {n} has more than one prime factor")
    return p, k


def _least_prime_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return d
        d += 2
    return n


def _parse_order(value: object) -> Order:
    if value == "inf":
        return None
    if isinstance(value, str):
        if not value.isdigit():
            raise MalformedGraph(f"order {value!r} is neither 'inf' nor a decimal string")
        value = int(value)
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedGraph(f"order {value!r} is neither 'inf' nor an integer")
    prime_power(value)
    return value


def order_text(order: Order) -> str:
    """Canonical textual form of an order, inverse to the JSON parser."""
    return "inf" if order is None else str(order)


class LabeledGraph:
    """Immutable vertex-ordered graph with bitmask adjacency.

    ``names`` fixes the rank of each vertex; ``adj_bits[i]`` has bit j set
    iff vertices of rank i and j are adjacent (always irreflexive). The
    ``_cache`` dict is scratch space for derived data (domination tables)
    keyed by the computing module; it never affects equality.
    """

    __slots__ = ("names", "orders", "index", "adj_bits", "edge_pairs", "_cache")

    def __init__(
        self,
        vertices: Iterable[tuple[str, Order]],
        edges: Iterable[tuple[str, str]] = (),
    ):
        names: list[str] = []
        orders: list[Order] = []
        index: dict[str, int] = {}
        for name, order in vertices:
            if not isinstance(name, str) or not name:
                raise MalformedGraph(f"vertex name {name!r} must be a nonempty string")
            if name in index:
                raise DuplicateVertex(f"vertex {name!r} declared twice")
            if order is not None:
                prime_power(order)
            index[name] = len(names)
            names.append(name)
            orders.append(order)
        adj = [0] * len(names)
        pairs: set[tuple[int, int]] = set()
        for a, b in edges:
            for end in (a, b):
                if end not in index:
                    raise UnknownVertex(f"edge endpoint {end!r} is not a declared vertex")
            i, j = index[a], index[b]
            if i == j:
                raise LoopEdge(f"loop edge at {a!r}")
            adj[i] |= 1 << j
            adj[j] |= 1 << i
            pairs.add((min(i, j), max(i, j)))
        self.names: tuple[str, ...] = tuple(names)
        self.orders: tuple[Order, ...] = tuple(orders)
        self.index: dict[str, int] = index
        self.adj_bits: tuple[int, ...] = tuple(adj)
        self.edge_pairs: tuple[tuple[int, int], ...] = tuple(sorted(pairs))
        self._cache: dict = {}

    # -- basic queries ---------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.names)) - 1

    def rank(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise UnknownVertex(f"no vertex named {name!r}") from None

    def order_of(self, name: str) -> Order:
        return self.orders[self.rank(name)]

    def adjacent(self, a: str, b: str) -> bool:
        return bool(self.adj_bits[self.rank(a)] >> self.rank(b) & 1)

    def adjacent_idx(self, i: int, j: int) -> bool:
        return bool(self.adj_bits[i] >> j & 1)

    def edges(self) -> list[tuple[str, str]]:
        return [(self.names[i], self.names[j]) for i, j in self.edge_pairs]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return (
            self.names == other.names
            and self.orders == other.orders
            and self.edge_pairs == other.edge_pairs
        )

    def __hash__(self) -> int:
        return hash((self.names, self.orders, self.edge_pairs))

    def __repr__(self) -> str:
        parts = ", ".join(f"{v}^{order_text(o)}" for v, o in zip(self.names, self.orders))
        return f"LabeledGraph({parts}; {len(self.edge_pairs)} edges)"

    # -- masks and mask utilities ----------------------------------------

    def link_mask(self, i: int) -> int:
        return self.adj_bits[i]

    def star_mask(self, i: int) -> int:
        return self.adj_bits[i] | (1 << i)

    def mask_of(self, names: Iterable[str]) -> int:
        m = 0
        for name in names:
            m |= 1 << self.rank(name)
        return m

    def names_of_mask(self, mask: int) -> frozenset[str]:
        return frozenset(self.names[i] for i in bits(mask))

    def is_clique_mask(self, mask: int) -> bool:
        """True when every two distinct vertices in the mask are adjacent."""
        for i in bits(mask):
            if mask & ~self.star_mask(i):
                return False
        return True

    # -- link / star / components ----------------------------------------

    def link(self, v: str) -> frozenset[str]:
        return self.names_of_mask(self.adj_bits[self.rank(v)])

    def star(self, v: str) -> frozenset[str]:
        return self.names_of_mask(self.star_mask(self.rank(v)))

    def components_within(self, mask: int) -> list[int]:
        """Connected components (as masks) of the subgraph induced on mask.

        Ordered by least member rank, so the result is deterministic.
        """
        comps: list[int] = []
        rem = mask
        while rem:
            comp = rem & -rem
            frontier = comp
            while frontier:
                low = frontier & -frontier
                i = low.bit_length() - 1
                frontier &= ~low
                grow = self.adj_bits[i] & mask & ~comp
                comp |= grow
                frontier |= grow
            comps.append(comp)
            rem &= ~comp
        return comps

    def components_minus_star(self, v: str) -> list[frozenset[str]]:
        """Connected components of the graph with st(v) deleted."""
        mask = self.full_mask & ~self.star_mask(self.rank(v))
        return [self.names_of_mask(m) for m in self.components_within(mask)]

    def center_vertices(self) -> list[str]:
        """Vertices adjacent to every other vertex, in rank order."""
        return [
            self.names[i]
            for i in range(self.n)
            if self.adj_bits[i] == self.full_mask & ~(1 << i)
        ]

    def free_factors(self) -> list[frozenset[str]]:
        """Connected components of the graph; the group is their free product."""
        return [self.names_of_mask(m) for m in self.components_within(self.full_mask)]

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components_within(self.full_mask)) == 1

    # -- derived graphs ---------------------------------------------------

    def induced_subgraph(self, keep: Iterable[str]) -> "LabeledGraph":
        """Subgraph on the given vertices, preserving relative declaration order."""
        keep_ranks = sorted(self.rank(v) for v in keep)
        keep_set = set(keep_ranks)
        vertices = [(self.names[i], self.orders[i]) for i in keep_ranks]
        edges = [
            (self.names[i], self.names[j])
            for i, j in self.edge_pairs
            if i in keep_set and j in keep_set
        ]
        return LabeledGraph(vertices, edges)

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "vertices": [
                {"name": v, "order": order_text(o)}
                for v, o in zip(self.names, self.orders)
            ],
            "edges": [[a, b] for a, b in self.edges()],
        }

    def serialize(self) -> str:
        """Canonical JSON text: declaration-order vertices, rank-sorted edges."""
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    @classmethod
    def from_json_dict(cls, data: object) -> "LabeledGraph":
        if not isinstance(data, dict):
            raise MalformedGraph("graph JSON must be an object")
        raw_vertices = data.get("vertices")
        raw_edges = data.get("edges", [])
        if not isinstance(raw_vertices, list):
            raise MalformedGraph("graph JSON needs a 'vertices' list")
        if not isinstance(raw_edges, list):
            raise MalformedGraph("'edges' must be a list")
        vertices = []
        for entry in raw_vertices:
            if not isinstance(entry, dict) or "name" not in entry or "order" not in entry:
                raise MalformedGraph(f"vertex entry {entry!r} needs 'name' and 'order'")
            vertices.append((entry["name"], _parse_order(entry["order"])))
        edges = []
        for entry in raw_edges:
            if not isinstance(entry, (list, tuple)) or len(entry) != 2:
                raise MalformedGraph(f"edge entry {entry!r} must be a pair")
            edges.append((entry[0], entry[1]))
        return cls(vertices, edges)

    @classmethod
    def parse(cls, text: str) -> "LabeledGraph":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedGraph(f"invalid JSON: {exc}") from None
        return cls.from_json_dict(data)


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of mask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask &= ~low
