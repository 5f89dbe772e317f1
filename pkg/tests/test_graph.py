import json

import pytest
from hypothesis import given

import strategies
from graphprod.graph import (
    DuplicateVertex,
    LabeledGraph,
    LoopEdge,
    MalformedGraph,
    NonPrimePower,
    UnknownVertex,
    bits,
    prime_power,
)
from graphs import build, path3, path5


def test_prime_power_accepts_prime_powers():
    assert prime_power(2) == (2, 1)
    assert prime_power(3) == (3, 1)
    assert prime_power(4) == (2, 2)
    assert prime_power(8) == (2, 3)
    assert prime_power(9) == (3, 2)
    assert prime_power(27) == (3, 3)
    assert prime_power(1024) == (2, 10)
    assert prime_power(7**5) == (7, 5)


@pytest.mark.parametrize("bad", [1, 0, -5, 6, 12, 30, 100])
def test_prime_power_rejects_non_prime_powers(bad):
    with pytest.raises(NonPrimePower):
        prime_power(bad)


def test_constructor_rejects_bad_input():
    with pytest.raises(DuplicateVertex):
        LabeledGraph([("a", None), ("a", 2)])
    with pytest.raises(LoopEdge):
        LabeledGraph([("a", None)], [("a", "a")])
    with pytest.raises(UnknownVertex):
        LabeledGraph([("a", None)], [("a", "b")])
    with pytest.raises(NonPrimePower):
        LabeledGraph([("a", 6)])
    with pytest.raises(MalformedGraph):
        LabeledGraph([("", None)])


def test_duplicate_edges_collapse():
    g = LabeledGraph([("a", None), ("b", None)], [("a", "b"), ("b", "a"), ("a", "b")])
    assert g.edges() == [("a", "b")]


def test_basic_queries_on_path():
    g = path3()
    assert g.n == 3
    assert g.order_of("a") is None
    assert g.adjacent("a", "b") and g.adjacent("b", "c")
    assert not g.adjacent("a", "c")
    assert not g.adjacent("a", "a")
    assert g.link("b") == {"a", "c"}
    assert g.star("b") == {"a", "b", "c"}
    assert g.link("a") == {"b"}
    assert g.center_vertices() == ["b"]


def test_components_minus_star():
    g = path5()
    assert g.components_minus_star("c") == [frozenset({"a"}), frozenset({"e"})]
    assert g.components_minus_star("a") == [frozenset({"c", "d", "e"})]
    g2 = build("a-b c d")
    assert g2.components_minus_star("a") == [frozenset({"c"}), frozenset({"d"})]


def test_center_vertices():
    assert build("a-b a-c b-c").center_vertices() == ["a", "b", "c"]
    assert build("a-b a-c").center_vertices() == ["a"]
    assert build("a b").center_vertices() == []
    # a lone vertex is vacuously adjacent to everything else
    assert build("a").center_vertices() == ["a"]


def test_free_factors_and_connectivity():
    g = build("a-b c d-e")
    assert g.free_factors() == [
        frozenset({"a", "b"}),
        frozenset({"c"}),
        frozenset({"d", "e"}),
    ]
    assert not g.is_connected()
    assert path3().is_connected()


def test_induced_subgraph():
    g = build("a-b b-c c-d", b=4)
    sub = g.induced_subgraph(["c", "a", "b"])
    assert sub.names == ("a", "b", "c")
    assert sub.order_of("b") == 4
    assert sub.edges() == [("a", "b"), ("b", "c")]
    with pytest.raises(UnknownVertex):
        g.induced_subgraph(["a", "zz"])


def test_clique_mask():
    g = build("a-b a-c b-c d")
    assert g.is_clique_mask(g.mask_of("abc"))
    assert g.is_clique_mask(g.mask_of("ad")) is False
    assert g.is_clique_mask(0)
    assert g.is_clique_mask(g.mask_of("d"))


def test_serialize_round_trip_and_canonical_form():
    g = build("b-a c", a=2, c=9)
    text = g.serialize()
    again = LabeledGraph.parse(text)
    assert again == g
    data = json.loads(text)
    assert data["vertices"] == [
        {"name": "b", "order": "inf"},
        {"name": "a", "order": "2"},
        {"name": "c", "order": "9"},
    ]
    assert data["edges"] == [["b", "a"]]


def test_parse_accepts_integer_orders():
    g = LabeledGraph.from_json_dict(
        {"vertices": [{"name": "a", "order": 4}], "edges": []}
    )
    assert g.order_of("a") == 4


@pytest.mark.parametrize(
    "payload",
    [
        "[]",
        '{"edges": []}',
        '{"vertices": [{"name": "a"}]}',
        '{"vertices": [{"name": "a", "order": "x"}]}',
        '{"vertices": [{"name": "a", "order": "inf"}], "edges": [["a"]]}',
        "not json at all",
    ],
)
def test_parse_rejects_malformed(payload):
    with pytest.raises(MalformedGraph):
        LabeledGraph.parse(payload)


def test_parse_rejects_bad_orders_and_edges():
    with pytest.raises(NonPrimePower):
        LabeledGraph.parse('{"vertices": [{"name": "a", "order": "6"}], "edges": []}')
    with pytest.raises(UnknownVertex):
        LabeledGraph.parse(
            '{"vertices": [{"name": "a", "order": "inf"}], "edges": [["a", "b"]]}'
        )


def test_bits_iterates_increasing():
    assert list(bits(0b101101)) == [0, 2, 3, 5]
    assert list(bits(0)) == []


@given(strategies.graphs())
def test_round_trip_random_graphs(g):
    assert LabeledGraph.parse(g.serialize()) == g


@given(strategies.graphs())
def test_components_partition(g):
    comps = g.components_within(g.full_mask)
    union = 0
    for c in comps:
        assert union & c == 0
        union |= c
    assert union == g.full_mask
