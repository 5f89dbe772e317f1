"""Automorphisms of a graph product, built from verified generators.

An Automorphism stores the images of every vertex generator under the map
and under its inverse. The primitive constructors (transvections, partial
conjugations, inner and factor automorphisms, graph symmetries, and the
commutator-shaped variants) all run a full verification: defining
relations are preserved in both directions and the two maps compose to
the identity on generators. Composition and inversion skip that check,
since composites of verified automorphisms need none.

Provenance tags ("transvection", "partial_conjugation", "inner",
"commutator_transvection", "commutator_pc", "factor", "graph") accumulate
under composition so membership in the subgroup generated by inner
automorphisms, transvections and partial conjugations can be read off.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd
from typing import Callable, Iterable, Mapping, Optional

from .domination import dominates, transvection_exponent
from .graph import LabeledGraph, bits
from .sil import check_pc_component
from .words import GroupElement, cyclic_reduce

AUT0_TAGS = frozenset(
    {
        "inner",
        "transvection",
        "partial_conjugation",
        "commutator_transvection",
        "commutator_pc",
    }
)

_LABEL_CAP = 120


class NotAnAutomorphism(ValueError):
    """The proposed images do not define an automorphism."""


class NotRestrictable(ValueError):
    """No bounded inner correction makes the map preserve the subgroup."""


class KernelNotPreserved(ValueError):
    """The map does not descend along the projection killing the other
    generators."""


def _apply_images(images: tuple[GroupElement, ...], x: GroupElement) -> GroupElement:
    acc = None
    for v, e in x.syllables:
        step = images[v] ** e
        acc = step if acc is None else acc * step
    if acc is None:
        target = images[0].graph if images else x.graph
        return GroupElement.identity(target)
    return acc


def _cap(label: str) -> str:
    return label if len(label) <= _LABEL_CAP else label[: _LABEL_CAP - 3] + "..."


class Automorphism:
    """A verified automorphism given by generator images both ways."""

    __slots__ = ("graph", "fwd", "bwd", "provenance", "label")

    def __init__(
        self,
        graph: LabeledGraph,
        fwd: Iterable[GroupElement],
        bwd: Iterable[GroupElement],
        provenance: tuple[str, ...] = (),
        label: str = "",
        verify: bool = True,
    ):
        fwd = tuple(fwd)
        bwd = tuple(bwd)
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "fwd", fwd)
        object.__setattr__(self, "bwd", bwd)
        object.__setattr__(self, "provenance", tuple(provenance))
        object.__setattr__(self, "label", label or "auto")
        if verify:
            self._verify()

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Automorphism is immutable")

    @classmethod
    def from_images(
        cls,
        graph: LabeledGraph,
        images: Mapping[str, GroupElement],
        inverse_images: Mapping[str, GroupElement],
        provenance: tuple[str, ...] = (),
        label: str = "",
    ) -> "Automorphism":
        fwd = [images[v] for v in graph.names]
        bwd = [inverse_images[v] for v in graph.names]
        return cls(graph, fwd, bwd, provenance, label)

    @classmethod
    def identity(cls, graph: LabeledGraph) -> "Automorphism":
        gens = [GroupElement.generator(graph, v) for v in graph.names]
        return cls(graph, gens, gens, (), "id", verify=False)

    def _verify(self) -> None:
        g = self.graph
        n = g.n
        if len(self.fwd) != n or len(self.bwd) != n:
            raise NotAnAutomorphism("wrong number of generator images")
        for side, images in (("image", self.fwd), ("inverse image", self.bwd)):
            for i, el in enumerate(images):
                if not isinstance(el, GroupElement) or el.graph != g:
                    raise NotAnAutomorphism(
                        f"{side} of {g.names[i]!r} is not an element over this graph"
                    )
            for i, j in g.edge_pairs:
                if images[i] * images[j] != images[j] * images[i]:
                    raise NotAnAutomorphism(
                        f"{side}s of adjacent {g.names[i]!r}, {g.names[j]!r} "
                        "do not commute"
                    )
            for i in range(n):
                order = g.orders[i]
                if order is not None and not (images[i] ** order).is_identity:
                    raise NotAnAutomorphism(
                        f"{side} of {g.names[i]!r} breaks the order relation"
                    )
        for i in range(n):
            gen = GroupElement.generator(g, g.names[i])
            if _apply_images(self.fwd, self.bwd[i]) != gen:
                raise NotAnAutomorphism(
                    f"maps do not invert each other at {g.names[i]!r}"
                )
            if _apply_images(self.bwd, self.fwd[i]) != gen:
                raise NotAnAutomorphism(
                    f"maps do not invert each other at {g.names[i]!r}"
                )

    # -- action -----------------------------------------------------------

    def __call__(self, x: GroupElement) -> GroupElement:
        if x.graph != self.graph:
            raise ValueError("element lives over a different graph")
        return _apply_images(self.fwd, x)

    def apply_inverse(self, x: GroupElement) -> GroupElement:
        if x.graph != self.graph:
            raise ValueError("element lives over a different graph")
        return _apply_images(self.bwd, x)

    def image_of(self, v: str) -> GroupElement:
        return self.fwd[self.graph.rank(v)]

    # -- group structure ------------------------------------------------------

    def __mul__(self, other: "Automorphism") -> "Automorphism":
        """Composition: (self * other)(x) == self(other(x))."""
        if self.graph != other.graph:
            raise ValueError("automorphisms live over different graphs")
        fwd = tuple(_apply_images(self.fwd, img) for img in other.fwd)
        bwd = tuple(_apply_images(other.bwd, img) for img in self.bwd)
        return Automorphism(
            self.graph,
            fwd,
            bwd,
            self.provenance + other.provenance,
            _cap(f"{self.label}*{other.label}"),
            verify=False,
        )

    def inverse(self) -> "Automorphism":
        return Automorphism(
            self.graph,
            self.bwd,
            self.fwd,
            tuple(reversed(self.provenance)),
            _cap(f"({self.label})^-1"),
            verify=False,
        )

    def __pow__(self, n: int) -> "Automorphism":
        base = self if n >= 0 else self.inverse()
        out = Automorphism.identity(self.graph)
        for _ in range(abs(n)):
            out = out * base
        return out

    @property
    def is_identity(self) -> bool:
        g = self.graph
        return all(
            img == GroupElement.generator(g, g.names[i])
            for i, img in enumerate(self.fwd)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Automorphism):
            return NotImplemented
        return self.graph == other.graph and self.fwd == other.fwd

    def __hash__(self) -> int:
        return hash((self.graph, self.fwd))

    def __repr__(self) -> str:
        return f"<Automorphism {self.label}>"


def commutator(a: Automorphism, b: Automorphism) -> Automorphism:
    """[a, b] = a b a^-1 b^-1."""
    return a * b * a.inverse() * b.inverse()


def in_aut_zero(phi: Automorphism) -> bool:
    """Whether the provenance certifies membership in the subgroup generated
    by inner automorphisms, transvections and partial conjugations."""
    return set(phi.provenance) <= AUT0_TAGS


# -- primitive constructors -------------------------------------------------


def _gens(g: LabeledGraph) -> list[GroupElement]:
    return [GroupElement.generator(g, v) for v in g.names]


def transvection(g: LabeledGraph, u: str, v: str, side: str = "right") -> Automorphism:
    """u -> u * v^k (right) or v^k * u (left), with k the least legal power.

    Exists exactly when u != v and u is dominated by v; k comes from
    transvection_exponent.
    """
    k = transvection_exponent(g, u, v)
    return transvection_power(g, u, v, k, side)


def transvection_power(
    g: LabeledGraph, u: str, v: str, exp: int, side: str = "right"
) -> Automorphism:
    """u -> u * v^exp (or v^exp * u); exp must be a multiple of the least
    legal power for finite u."""
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    k = transvection_exponent(g, u, v)
    if exp % k:
        raise NotAnAutomorphism(
            f"power {exp} is not a multiple of the least legal power {k}"
        )
    ui = g.rank(u)
    fwd = _gens(g)
    bwd = _gens(g)
    vel = GroupElement.generator(g, v)
    gen_u = fwd[ui]
    if side == "right":
        fwd[ui] = gen_u * vel**exp
        bwd[ui] = gen_u * vel**-exp
    else:
        fwd[ui] = vel**exp * gen_u
        bwd[ui] = vel**-exp * gen_u
    tag = "R" if side == "right" else "L"
    power = f"^{exp}" if exp != 1 else ""
    body = f"{u}*{v}{power}" if side == "right" else f"{v}{power}*{u}"
    return Automorphism(
        g, fwd, bwd, ("transvection",), f"{tag}[{u}->{body}]"
    )


def partial_conjugation(
    g: LabeledGraph, v: str, component: Iterable[str], exp: int = 1
) -> Automorphism:
    """z -> v^exp z v^-exp for z in the component set, fixing the rest.

    The component set must be a union of connected components of the graph
    minus st(v).
    """
    comp = frozenset(component)
    comp_mask = g.mask_of(comp)
    check_pc_component(g, v, comp_mask)
    conj = GroupElement.generator(g, v) ** exp
    conj_inv = conj.inverse()
    fwd = _gens(g)
    bwd = _gens(g)
    for i in bits(comp_mask):
        fwd[i] = conj * fwd[i] * conj_inv
        bwd[i] = conj_inv * bwd[i] * conj
    members = ",".join(sorted(comp, key=g.rank))
    power = f"^{exp}" if exp != 1 else ""
    return Automorphism(
        g,
        fwd,
        bwd,
        ("partial_conjugation",),
        f"pc[{v}{power}:{{{members}}}]",
    )


def inner(g: LabeledGraph, h: GroupElement) -> Automorphism:
    """Conjugation x -> h x h^-1."""
    if h.graph != g:
        raise ValueError("conjugator lives over a different graph")
    hi = h.inverse()
    fwd = [h * e * hi for e in _gens(g)]
    bwd = [hi * e * h for e in _gens(g)]
    return Automorphism(g, fwd, bwd, ("inner",), f"ad[{h.text()}]", verify=False)


def factor_automorphism(g: LabeledGraph, v: str, power: int) -> Automorphism:
    """v -> v^power on one vertex group; power invertible mod the order
    (or +-1 for an infinite vertex)."""
    i = g.rank(v)
    order = g.orders[i]
    if order is None:
        if power not in (1, -1):
            raise NotAnAutomorphism("infinite cyclic factor only admits powers +-1")
        inv_power = power
    else:
        if gcd(power, order) != 1:
            raise NotAnAutomorphism(f"power {power} is not invertible mod {order}")
        inv_power = pow(power, -1, order)
    fwd = _gens(g)
    bwd = _gens(g)
    fwd[i] = fwd[i] ** power
    bwd[i] = bwd[i] ** inv_power
    return Automorphism(g, fwd, bwd, ("factor",), f"pow[{v}->{v}^{power}]")


def graph_automorphism(g: LabeledGraph, mapping: Mapping[str, str]) -> Automorphism:
    """The automorphism induced by an order-preserving graph symmetry."""
    if sorted(mapping) != sorted(g.names) or sorted(mapping.values()) != sorted(
        g.names
    ):
        raise NotAnAutomorphism("mapping is not a permutation of the vertices")
    for v, w in mapping.items():
        if g.order_of(v) != g.order_of(w):
            raise NotAnAutomorphism(f"orders differ along {v!r} -> {w!r}")
    for u, v in g.edges():
        if not g.adjacent(mapping[u], mapping[v]):
            raise NotAnAutomorphism(f"edge {u!r}-{v!r} is not preserved")
    inverse_map = {w: v for v, w in mapping.items()}
    fwd = [GroupElement.generator(g, mapping[v]) for v in g.names]
    bwd = [GroupElement.generator(g, inverse_map[v]) for v in g.names]
    moved = ",".join(f"{v}->{w}" for v, w in mapping.items() if v != w)
    return Automorphism(g, fwd, bwd, ("graph",), f"perm[{moved or 'id'}]")


def commutator_transvection(g: LabeledGraph, u: str, v: str, w: str) -> Automorphism:
    """u -> u * [v, w], where [v, w] = v w v^-1 w^-1.

    Defined when u is an infinite-order vertex distinct from v and w that
    is dominated by both; then lk(u) lands in st(v) & st(w) and the map
    respects all relations. This is a primitive, not a composite, so
    identities expressing it as a commutator of transvections can be
    tested without circularity.
    """
    if u in (v, w):
        raise NotAnAutomorphism("the moved vertex must differ from both multipliers")
    if g.order_of(u) is not None:
        raise NotAnAutomorphism("the moved vertex must have infinite order")
    for y in (v, w):
        if u == y or not dominates(g, u, y):
            raise NotAnAutomorphism(f"{u!r} is not dominated by {y!r}")
    ui = g.rank(u)
    ve = GroupElement.generator(g, v)
    we = GroupElement.generator(g, w)
    comm = ve * we * ve.inverse() * we.inverse()
    fwd = _gens(g)
    bwd = _gens(g)
    fwd[ui] = fwd[ui] * comm
    bwd[ui] = bwd[ui] * comm.inverse()
    return Automorphism(
        g, fwd, bwd, ("commutator_transvection",), f"R[{u}->{u}*[{v},{w}]]"
    )


def commutator_pc(
    g: LabeledGraph, v: str, w: str, component: Iterable[str]
) -> Automorphism:
    """z -> [v, w] z [v, w]^-1 on the component set, fixing the rest.

    The component set must be a union of components both off st(v) and off
    st(w). The map equals the commutator of the two inverse partial
    conjugations, [pc(w, C)^-1, pc(v, C)^-1], so it lies in the subgroup
    they generate.
    """
    comp = frozenset(component)
    comp_mask = g.mask_of(comp)
    check_pc_component(g, v, comp_mask)
    check_pc_component(g, w, comp_mask)
    ve = GroupElement.generator(g, v)
    we = GroupElement.generator(g, w)
    comm = ve * we * ve.inverse() * we.inverse()
    comm_inv = comm.inverse()
    fwd = _gens(g)
    bwd = _gens(g)
    for i in bits(comp_mask):
        fwd[i] = comm * fwd[i] * comm_inv
        bwd[i] = comm_inv * bwd[i] * comm
    members = ",".join(sorted(comp, key=g.rank))
    return Automorphism(
        g, fwd, bwd, ("commutator_pc",), f"pc[[{v},{w}]:{{{members}}}]"
    )


def equal_in_aut(a: Automorphism, b: Automorphism) -> bool:
    return a == b


# -- inner detection -----------------------------------------------------------


@dataclass(frozen=True)
class InnerResult:
    """Outcome of a bounded search for an inner form.

    status is "inner" (witness holds a conjugator), "not_inner" (some
    generator image is not even conjugate to the generator, which no
    bigger budget can fix) or "unknown" (search exhausted the budget).
    """

    status: str
    witness: Optional[GroupElement] = None
    bound: int = 0

    @property
    def is_inner(self) -> Optional[bool]:
        if self.status == "inner":
            return True
        if self.status == "not_inner":
            return False
        return None


def is_inner_bounded(phi: Automorphism, max_syllables: int = 4) -> InnerResult:
    """Decide whether phi is conjugation by some element.

    The reduction: if phi == ad_h then each generator image is conjugate
    to the generator, so its cyclically reduced core must be the generator
    itself; failing that, phi is definitively not inner. Otherwise any
    valid h differs from the conjugator of one chosen vertex image by a
    centralizer element, and the centralizer of a generator is the
    subgroup on its star; the search walks products of up to
    max_syllables star letters.
    """
    g = phi.graph
    gens = _gens(g)
    if not g.names:
        return InnerResult("inner", GroupElement.identity(g))
    conjs: list[GroupElement] = []
    for i, img in enumerate(phi.fwd):
        conj, core = cyclic_reduce(img)
        if core != gens[i]:
            return InnerResult("not_inner")
        conjs.append(conj)

    v0 = min(range(g.n), key=lambda i: (bin(g.star_mask(i)).count("1"), i))
    h0 = conjs[v0]

    def works(h: GroupElement) -> bool:
        hi = h.inverse()
        return all(phi.fwd[i] == h * gens[i] * hi for i in range(g.n))

    letters = []
    for i in bits(g.star_mask(v0)):
        letters.append(gens[i])
        letters.append(gens[i].inverse())
    seen = {GroupElement.identity(g)}
    frontier = [GroupElement.identity(g)]
    if works(h0):
        return InnerResult("inner", h0, max_syllables)
    for _ in range(max_syllables):
        nxt = []
        for z in frontier:
            for s in letters:
                cand = z * s
                if cand in seen:
                    continue
                seen.add(cand)
                nxt.append(cand)
                if works(h0 * cand):
                    return InnerResult("inner", h0 * cand, max_syllables)
        frontier = nxt
    return InnerResult("unknown", None, max_syllables)


def equal_in_out_bounded(
    a: Automorphism, b: Automorphism, max_syllables: int = 4
) -> InnerResult:
    """Whether a and b agree modulo inner automorphisms, within a budget."""
    if a == b:
        return InnerResult("inner", GroupElement.identity(a.graph), max_syllables)
    return is_inner_bounded(a * b.inverse(), max_syllables)


# -- special subgroups -----------------------------------------------------------


def _enumerate_conjugators(g: LabeledGraph, max_syllables: int):
    gens = _gens(g)
    letters = [x for e in gens for x in (e, e.inverse())]
    seen = {GroupElement.identity(g)}
    yield GroupElement.identity(g)
    frontier = [GroupElement.identity(g)]
    for _ in range(max_syllables):
        nxt = []
        for z in frontier:
            for s in letters:
                cand = z * s
                if cand not in seen:
                    seen.add(cand)
                    nxt.append(cand)
                    yield cand
        frontier = nxt


def restrict_to_special(
    phi: Automorphism, vertices: Iterable[str], max_syllables: int = 4
) -> Automorphism:
    """Restrict phi to the subgroup on the given vertices, correcting by a
    bounded inner automorphism if needed.

    Searches conjugators c with at most max_syllables syllables such that
    (ad_c phi) and its inverse both send the chosen generators into the
    subgroup they span; the restriction is returned over the induced
    subgraph. Raises NotRestrictable when no budgeted correction works.
    """
    g = phi.graph
    lam = sorted(frozenset(vertices), key=g.rank)
    lam_mask = g.mask_of(lam)
    sub = g.induced_subgraph(lam)

    def translate(x: GroupElement) -> GroupElement:
        return GroupElement(sub, x.named_syllables())

    for c in _enumerate_conjugators(g, max_syllables):
        ci = c.inverse()
        fwd_imgs = [c * phi.fwd[g.rank(v)] * ci for v in lam]
        if any(img.support_mask() & ~lam_mask for img in fwd_imgs):
            continue
        d = _apply_images(phi.bwd, c)
        di = d.inverse()
        bwd_imgs = [di * phi.bwd[g.rank(v)] * d for v in lam]
        if any(img.support_mask() & ~lam_mask for img in bwd_imgs):
            continue
        members = ",".join(lam)
        return Automorphism(
            sub,
            [translate(x) for x in fwd_imgs],
            [translate(x) for x in bwd_imgs],
            ("restriction",),
            _cap(f"{phi.label}|{{{members}}}"),
        )
    raise NotRestrictable(
        f"no inner correction with <= {max_syllables} syllables restricts the map"
    )


def factor_to_special(phi: Automorphism, vertices: Iterable[str]) -> Automorphism:
    """Push phi through the projection that kills every other generator.

    Requires the projection kernel to be preserved in both directions:
    the image of each killed generator must project to the identity.
    Raises KernelNotPreserved otherwise.
    """
    g = phi.graph
    lam = sorted(frozenset(vertices), key=g.rank)
    lam_set = set(lam)
    sub = g.induced_subgraph(lam)

    def kappa(x: GroupElement) -> GroupElement:
        return GroupElement(
            sub, [(n, e) for n, e in x.named_syllables() if n in lam_set]
        )

    for v in g.names:
        if v in lam_set:
            continue
        i = g.rank(v)
        for side, images in (("forward", phi.fwd), ("inverse", phi.bwd)):
            if not kappa(images[i]).is_identity:
                raise KernelNotPreserved(
                    f"{side} image of killed generator {v!r} survives the projection"
                )
    members = ",".join(lam)
    return Automorphism(
        sub,
        [kappa(phi.fwd[g.rank(v)]) for v in lam],
        [kappa(phi.bwd[g.rank(v)]) for v in lam],
        ("factor_projection",),
        _cap(f"{phi.label}/{{{members}}}"),
    )
