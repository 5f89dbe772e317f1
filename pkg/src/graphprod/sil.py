"""Separating intersections of links (SILs) and their variants.

A pair of non-adjacent vertices x, y forms a SIL when deleting the shared
link lk(x) & lk(y) leaves a component containing neither x nor y. Such a
component supports partial conjugations on x and on y that fail to
commute, which is the seed of every nonabelian free subgroup inside the
automorphism groups studied here.

Variants: a SIL is non-Coxeter when x or y has order other than 2; a STIL
adds a third vertex z such that some component of the triple-shared link
complement avoids all three and the three vertices do not generate a
virtually abelian group; an FSIL is a triple whose three pairs are all
SILs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .graph import LabeledGraph


@dataclass(frozen=True)
class SilWitness:
    """One witness from the census.

    kind is "SIL", "NonCoxeterSIL", "STIL" or "FSIL". vertices is the pair
    or triple in rank order. component is the separated component for pair
    witnesses and None for triple witnesses (a triple is a property of the
    three vertices; consumers recompute the components they need).
    """

    kind: str
    vertices: tuple[str, ...]
    component: Optional[frozenset[str]]


def _shared_link_components(g: LabeledGraph, ranks: list[int]) -> list[int]:
    shared = g.full_mask
    for i in ranks:
        shared &= g.adj_bits[i]
    return g.components_within(g.full_mask & ~shared)


def sil_components(g: LabeledGraph, x: str, y: str) -> list[frozenset[str]]:
    """Components of the graph minus lk(x) & lk(y) avoiding both x and y.

    Empty when x, y are adjacent or equal: only non-adjacent pairs form
    SILs.
    """
    i, j = g.rank(x), g.rank(y)
    if i == j or g.adjacent_idx(i, j):
        return []
    avoid = (1 << i) | (1 << j)
    return [
        g.names_of_mask(m)
        for m in _shared_link_components(g, [i, j])
        if not m & avoid
    ]


def is_sil(g: LabeledGraph, x: str, y: str) -> bool:
    return bool(sil_components(g, x, y))


def stil_components(g: LabeledGraph, x: str, y: str, z: str) -> list[frozenset[str]]:
    """Components of the graph minus lk(x) & lk(y) & lk(z) avoiding all three."""
    ranks = [g.rank(x), g.rank(y), g.rank(z)]
    if len(set(ranks)) != 3:
        raise ValueError("need three distinct vertices")
    avoid = sum(1 << i for i in ranks)
    return [
        g.names_of_mask(m)
        for m in _shared_link_components(g, ranks)
        if not m & avoid
    ]


def is_virtually_abelian_triple(g: LabeledGraph, x: str, y: str, z: str) -> bool:
    """Whether the subgroup generated by three distinct vertices is
    virtually abelian.

    A clique generates an abelian group. With exactly one edge missing the
    group is (C2 * C2) x cyclic, virtually abelian, precisely when both
    non-adjacent endpoints have order 2; any larger free-product factor
    contains a nonabelian free subgroup. With two or three edges missing a
    free product with a factor of size > 2 appears and the answer is no.
    """
    trio = [x, y, z]
    missing = [
        (u, v) for u, v in combinations(trio, 2) if not g.adjacent(u, v)
    ]
    if not missing:
        return True
    if len(missing) == 1:
        u, v = missing[0]
        return g.order_of(u) == 2 and g.order_of(v) == 2
    return False


def is_stil(g: LabeledGraph, x: str, y: str, z: str) -> bool:
    if is_virtually_abelian_triple(g, x, y, z):
        return False
    return bool(stil_components(g, x, y, z))


def find_sils(g: LabeledGraph) -> list[SilWitness]:
    """Census of all SIL structure, deterministically ordered.

    Pair witnesses come first (one per pair and component), then STIL
    triples, then FSIL triples.
    """
    out: list[SilWitness] = []
    names = g.names
    sil_pairs: set[tuple[str, str]] = set()
    for xi, yi in combinations(range(g.n), 2):
        x, y = names[xi], names[yi]
        comps = sil_components(g, x, y)
        if comps:
            sil_pairs.add((x, y))
        non_coxeter = g.orders[xi] != 2 or g.orders[yi] != 2
        for comp in comps:
            out.append(
                SilWitness(
                    kind="NonCoxeterSIL" if non_coxeter else "SIL",
                    vertices=(x, y),
                    component=comp,
                )
            )
    for xi, yi, zi in combinations(range(g.n), 3):
        x, y, z = names[xi], names[yi], names[zi]
        if is_stil(g, x, y, z):
            out.append(SilWitness(kind="STIL", vertices=(x, y, z), component=None))
    for xi, yi, zi in combinations(range(g.n), 3):
        x, y, z = names[xi], names[yi], names[zi]
        if {(x, y), (x, z), (y, z)} <= sil_pairs:
            out.append(SilWitness(kind="FSIL", vertices=(x, y, z), component=None))
    return out


def has_any_sil(g: LabeledGraph) -> bool:
    return any(
        is_sil(g, g.names[i], g.names[j]) for i, j in combinations(range(g.n), 2)
    )


def has_non_coxeter_sil(g: LabeledGraph) -> bool:
    for i, j in combinations(range(g.n), 2):
        if (g.orders[i] != 2 or g.orders[j] != 2) and is_sil(
            g, g.names[i], g.names[j]
        ):
            return True
    return False


def has_stil(g: LabeledGraph) -> bool:
    return any(
        is_stil(g, *[g.names[k] for k in trio])
        for trio in combinations(range(g.n), 3)
    )


def has_fsil(g: LabeledGraph) -> bool:
    return any(w.kind == "FSIL" for w in find_sils(g))


# -- commuting criterion for partial conjugations ------------------------------


def check_pc_component(g: LabeledGraph, v: str, comp_mask: int) -> None:
    """Validate that comp_mask is a union of components of the graph minus
    st(v); raises ValueError otherwise."""
    i = g.rank(v)
    if comp_mask & g.star_mask(i):
        raise ValueError(f"component meets st({v})")
    outside = g.full_mask & ~g.star_mask(i)
    for m in g.components_within(outside):
        inter = m & comp_mask
        if inter and inter != m:
            raise ValueError(
                f"component set is not a union of components off st({v})"
            )


def pc_commute(
    g: LabeledGraph,
    x: str,
    comp_x: frozenset,
    y: str,
    comp_y: frozenset,
) -> bool:
    """Whether the partial conjugations by x over comp_x and by y over
    comp_y commute in the outer automorphism group.

    comp_x must be a union of components of the graph minus st(x) (same
    for y). Two partial conjugations fail to commute exactly when x, y
    form a SIL and the conjugated sets interlock: they overlap the same
    separated component, or one's vertex lies in the other's set (with a
    separated component meeting that set, or mutually).
    """
    cx = g.mask_of(comp_x)
    cy = g.mask_of(comp_y)
    check_pc_component(g, x, cx)
    check_pc_component(g, y, cy)
    if x == y:
        return True
    xm = 1 << g.rank(x)
    ym = 1 << g.rank(y)
    for comp in sil_components(g, x, y):
        k = g.mask_of(comp)
        if cx == cy and k & cx:
            return False
        if xm & cy and k & cx:
            return False
        if ym & cx and k & cy:
            return False
        if xm & cy and ym & cx:
            return False
    return True
