import networkx as nx
import pytest
from hypothesis import given

import strategies
from graphprod.domination import (
    ClassKind,
    bridged_components,
    bridged_components_rel,
    class_kinds,
    class_of_vertex,
    compressed_graph,
    depth_witness,
    dominates,
    dominates_inf,
    equivalence_classes,
    inf_classes,
    infinity_depth,
    leaf_like,
    maximal_classes,
    transvection_exponent,
    vertex_depth,
)
from graphprod.graph import LabeledGraph
from graphs import (
    build,
    chain_dag,
    coxeter_free3,
    deep_star,
    dihedral,
    free_322,
    free_two,
    path3,
    path3_end2,
    path5,
    z2_times_z,
)

# -- the order itself ---------------------------------------------------------


def test_dominates_infinite_branch():
    g = path3()
    assert dominates(g, "a", "b")
    assert dominates(g, "c", "b")
    assert not dominates(g, "b", "a")
    # a and c have equal links, so they dominate each other
    assert dominates(g, "a", "c") and dominates(g, "c", "a")


def test_dominates_requires_link_in_star():
    g = path5()
    assert dominates(g, "a", "b")
    assert dominates(g, "a", "c")
    assert not dominates(g, "a", "d")
    assert not dominates(g, "b", "c")


def test_dominates_finite_branch_needs_same_prime_and_star():
    g = build("u-v", u=2, v=4)
    assert dominates(g, "u", "v")
    assert dominates(g, "v", "u")
    g2 = build("u-v", u=2, v=3)
    assert not dominates(g2, "u", "v")
    g3 = build("u v", u=2, v=2)  # no edge: st(u) can't land in st(v)
    assert not dominates(g3, "u", "v")


def test_dominates_never_mixes_finite_and_infinite():
    g = z2_times_z()
    assert not dominates(g, "a", "b")  # finite a, infinite b
    assert dominates(g, "b", "a")  # infinite branch is fine


def test_transvection_exponent():
    g = build("u-v", u=2, v=4)
    assert transvection_exponent(g, "u", "v") == 2
    assert transvection_exponent(g, "v", "u") == 1
    g2 = build("u-v", u=2, v=8)
    assert transvection_exponent(g2, "u", "v") == 4
    assert transvection_exponent(z2_times_z(), "b", "a") == 1
    assert transvection_exponent(path3(), "a", "b") == 1
    with pytest.raises(ValueError):
        transvection_exponent(path3(), "b", "a")
    with pytest.raises(ValueError):
        transvection_exponent(path3(), "a", "a")


@given(strategies.graphs())
def test_domination_is_a_preorder(g):
    names = g.names
    for u in names:
        assert dominates(g, u, u)
    pairs = [(u, v) for u in names for v in names if dominates(g, u, v)]
    related = set(pairs)
    for u, v in pairs:
        for w in names:
            if (v, w) in related:
                assert (u, w) in related, f"{u}<={v}<={w} but not {u}<={w}"


# -- classes and kinds ----------------------------------------------------------


def test_equivalence_classes_frozen():
    assert equivalence_classes(path3()) == [frozenset("ac"), frozenset("b")]
    assert equivalence_classes(free_two()) == [frozenset("uv")]
    assert equivalence_classes(dihedral()) == [frozenset("x"), frozenset("y")]
    assert equivalence_classes(path3_end2()) == [
        frozenset("a"),
        frozenset("b"),
        frozenset("c"),
    ]


def test_class_kinds_frozen():
    assert class_kinds(free_two()) == [ClassKind("free")]
    assert class_kinds(path3()) == [ClassKind("free"), ClassKind("free_abelian")]
    assert class_kinds(dihedral()) == [ClassKind("finite", 2), ClassKind("finite", 2)]
    g = build("u-v", u=2, v=4)
    assert class_kinds(g) == [ClassKind("finite", 2)]
    assert class_kinds(build("u-v")) == [ClassKind("free_abelian")]


def test_class_of_vertex():
    g = path3()
    assert class_of_vertex(g, "a") == {"a", "c"}
    assert class_of_vertex(g, "b") == {"b"}


def test_maximal_classes():
    assert maximal_classes(path3()) == [frozenset("b")]
    assert maximal_classes(path5()) == [
        frozenset("b"),
        frozenset("c"),
        frozenset("d"),
    ]
    assert maximal_classes(z2_times_z()) == [frozenset("a")]
    assert maximal_classes(chain_dag()) == [frozenset({"v3"})]


def test_inf_classes_split_finite_vertices():
    g = build("x-y", x=4, y=4)
    assert equivalence_classes(g) == [frozenset("xy")]
    assert inf_classes(g) == [frozenset("x"), frozenset("y")]
    assert inf_classes(path3()) == [frozenset("ac"), frozenset("b")]


def test_compressed_graph_frozen():
    c = compressed_graph(path3())
    assert c.classes == (frozenset("ac"), frozenset("b"))
    assert c.kinds == (ClassKind("free"), ClassKind("free_abelian"))
    assert c.adjacent(0, 1) and c.adjacent(1, 0)
    assert not c.adjacent(0, 0)
    assert c.order_multisets == ((None, None), (None,))

    c2 = compressed_graph(dihedral())
    assert c2.n == 2
    assert not c2.adjacent(0, 1)
    assert c2.order_multisets == ((2,), (2,))


@given(strategies.graphs())
def test_classes_partition_and_kinds_are_coherent(g):
    classes = equivalence_classes(g)
    seen = set()
    for cls in classes:
        assert not (cls & seen)
        seen |= cls
    assert seen == set(g.names)
    for cls, kind in zip(classes, class_kinds(g)):
        orders = {g.order_of(v) for v in cls}
        if kind.kind == "finite":
            assert None not in orders
        else:
            assert orders == {None}
            if kind.kind == "free":
                assert len(cls) >= 2


@given(strategies.graphs())
def test_mutual_domination_matches_reported_classes(g):
    for u in g.names:
        for v in g.names:
            same = dominates(g, u, v) and dominates(g, v, u)
            assert same == (class_of_vertex(g, u) == class_of_vertex(g, v))


# -- leaf_like ----------------------------------------------------------------


def test_leaf_like_frozen():
    g = path3()
    assert leaf_like(g, "a") == {"b"}
    assert leaf_like(g, "c") == {"b"}
    assert leaf_like(g, "b") is None
    assert leaf_like(path5(), "a") == {"b"}
    assert leaf_like(path5(), "b") is None
    # a is finite here and not dominated by b, so no leaf-like class
    assert leaf_like(path3_end2(), "a") is None
    assert leaf_like(path3_end2(), "c") == {"b"}


def test_leaf_like_requires_unique_maximal():
    # two maximal classes {b}, {c} inside lk(a) kill uniqueness
    g = build("a-b a-c b-d c-e")
    assert leaf_like(g, "a") is None


@given(strategies.graphs())
def test_leaf_like_properties(g):
    for u in g.names:
        cls = leaf_like(g, u)
        if cls is None:
            continue
        assert u not in cls
        assert cls <= g.link(u)
        assert cls in maximal_classes(g)
        for y in cls:
            assert dominates(g, u, y)


# -- bridged components ---------------------------------------------------------


def naive_bridged(g, star):
    h = nx.Graph()
    h.add_nodes_from(g.names)
    star = set(star)
    for a, b in g.edges():
        if not (a in star and b in star):
            h.add_edge(a, b)
    out = []
    for comp in nx.connected_components(h):
        rest = frozenset(comp) - star
        if rest:
            out.append(rest)
    return sorted(out, key=lambda s: min(g.rank(v) for v in s))


def test_bridged_components_frozen():
    g = path5()
    assert bridged_components(g, "c") == [frozenset("a"), frozenset("e")]
    assert bridged_components(g, "a") == [frozenset("cde")]
    assert bridged_components(g, "b") == [frozenset("de")]
    # hub: everything outside st(v) hangs together through the hub vertex
    g2 = build("v-w a-w b-w")
    assert bridged_components(g2, "v") == [frozenset("ab")]
    assert g2.components_minus_star("v") == [frozenset("a"), frozenset("b")]


def test_bridged_components_empty_cases():
    g = build("m-x m-y")
    assert bridged_components(g, "m") == []
    assert bridged_components(build("a-b"), "a") == []


@given(strategies.graphs())
def test_bridged_components_match_naive(g):
    for v in g.names:
        assert bridged_components(g, v) == naive_bridged(g, g.star(v))


@given(strategies.graphs())
def test_bridged_components_rel_matches_naive_on_arbitrary_sets(g):
    names = list(g.names)
    for k in range(0, len(names) + 1, 2):
        star = names[:k]
        assert bridged_components_rel(g, star) == naive_bridged(g, star)


@given(strategies.graphs())
def test_bridged_components_partition_outside(g):
    for v in g.names:
        comps = bridged_components(g, v)
        union = set()
        for c in comps:
            assert not (c & union)
            union |= c
        assert union == set(g.names) - g.star(v)


# -- depth ------------------------------------------------------------------------


def test_vertex_depth_frozen():
    g = path3()
    assert vertex_depth(g, "b") == 2
    assert vertex_depth(g, "a") == 1
    g5 = path3_end2()
    assert vertex_depth(g5, "b") == 2
    assert vertex_depth(g5, "c") == 1


def test_depth_chain_witness():
    g = chain_dag()
    assert dominates_inf(g, "v1", "v2")
    assert dominates_inf(g, "v2", "v3")
    assert not dominates(g, "v2", "v1")
    assert not dominates(g, "v3", "v2")
    w = depth_witness(g, "v3")
    assert w.value == 3
    assert w.kind == "chain"
    assert w.vertices == ("v1", "v2", "v3")
    assert infinity_depth(g) == 3


def test_depth_separation_witness():
    g = deep_star()
    w = depth_witness(g, "v2")
    assert w.value == 3
    assert w.kind == "separation"
    assert w.vertices == ("v1", "v2")
    assert frozenset("q") in w.components and frozenset("r") in w.components
    assert infinity_depth(g) == 3


def test_graph_depth_frozen():
    assert infinity_depth(path3_end2()) == 2
    assert infinity_depth(z2_times_z()) == 1
    assert infinity_depth(dihedral()) == 1
    assert infinity_depth(free_two()) == 1
    assert infinity_depth(path3()) == 2
    assert infinity_depth(free_322()) == 2
    assert infinity_depth(coxeter_free3()) == 1


def test_separating_vertex_gives_depth_two():
    # x alone separates {y, w}; x has order 3 so it counts
    g = free_322()
    assert vertex_depth(g, "x") == 2
    w = depth_witness(g, "x")
    assert w.kind == "separation"
    assert w.vertices == ("x",)
    assert len(w.components) == 2


@given(strategies.graphs())
def test_depth_witness_is_sound(g):
    for v in g.names:
        w = depth_witness(g, v)
        assert w.value >= 1
        if w.kind == "chain":
            assert w.value == len(w.vertices)
            assert w.vertices[-1] == v
        else:
            assert w.value == len(w.vertices) + 1
            assert len(w.components) >= 2
            u = w.vertices[0]
            outside = set(g.names) - g.star(u)
            sv = g.star(v)
            for comp in w.components:
                assert comp <= outside
                assert not comp <= sv
        for earlier, later in zip(w.vertices, w.vertices[1:]):
            assert g.order_of(earlier) is None
            assert dominates(g, earlier, later)
            assert class_of_vertex(g, earlier) != class_of_vertex(g, later)


@given(strategies.graphs())
def test_graph_depth_ignores_order_two_vertices(g):
    d = infinity_depth(g)
    assert d >= 1
    candidates = [vertex_depth(g, v) for v in g.names if g.order_of(v) != 2]
    assert d == max(candidates, default=1)
