import random

import pytest

from bslab.gbs import (
    CAVEAT_CASE2,
    GraphOfZ,
    GraphParseError,
    bass_serre_valences,
    classify,
    collapse_unit_edges,
    modular_image,
    parse_graph,
    presentation,
    random_graph,
    spanning_tree,
)
from fractions import Fraction


def test_parse_examples():
    G = parse_graph("loop 2 3")
    assert G.vertices == ["s"] and G.edges == [("s", "s", 2, 3)]
    G = parse_graph("vertex x\nvertex y\nedge x y 2 3  # amalgam\n")
    assert G.edges == [("x", "y", 2, 3)]
    with pytest.raises(GraphParseError, match="line 1"):
        parse_graph("loop 0 3")
    with pytest.raises(GraphParseError, match="line 3"):
        parse_graph("vertex a\nvertex b\nedge a c 1 2")
    with pytest.raises(GraphParseError, match="disconnected"):
        parse_graph("vertex a\nvertex b\nloop a 1 2")
    with pytest.raises(GraphParseError, match="line 2"):
        parse_graph("vertex a\nbogus")


def test_presentations():
    P = presentation(GraphOfZ.loop(2, 3))
    assert P.generators == ["s", "t"] and P.relators == [("t s^2 t^-1", "s^3")]
    P = presentation(parse_graph("vertex x\nvertex y\nedge x y 2 3"))
    assert P.generators == ["x", "y"] and P.relators == [("x^2", "y^3")]
    P = presentation(parse_graph("loop 1 2\nloop s 1 3"))
    assert len(P.generators) == 3 and len(P.relators) == 2


def test_modular_image_examples():
    assert modular_image(GraphOfZ.loop(2, 3)).generators == (Fraction(3, 2),)
    assert modular_image(GraphOfZ.loop(2, 2)).generators == ()
    assert modular_image(parse_graph("vertex x\nvertex y\nedge x y 2 3")).generators == ()
    # <3/2, 9/4> = <3/2>; <4, 8> = <2>
    assert modular_image(parse_graph("loop 2 3\nloop s 4 9")).generators == (Fraction(3, 2),)
    assert modular_image(parse_graph("loop 1 4\nloop s 1 8")).generators == (Fraction(2),)
    assert modular_image(GraphOfZ.loop(2, -2)).unimodular


def test_classify_examples():
    assert classify(GraphOfZ.loop(2, 2)).case == 1
    assert classify(GraphOfZ.loop(1, 5)).case == 2
    c = classify(GraphOfZ.loop(2, 3))
    assert c.case == 3 and c.detail == "quasi-isometric to BS(2,3)" and not c.caveats
    assert classify(GraphOfZ.loop(1, 1)).case == 1
    tree = classify(parse_graph("vertex x\nvertex y\nedge x y 2 3"))
    assert tree.case == 1 and not tree.caveats


def test_collapse_reveals_hidden_bs1n():
    G = parse_graph("vertex a\nvertex b\nedge a b 1 2\nloop b 1 3")
    R = collapse_unit_edges(G)
    assert R.vertices == ["b"] and R.edges == [("b", "b", 1, 3)]
    assert classify(G).case == 2
    # x_a = x_b^2 turns the loop at a into t x_b^2 t^-1 = x_b^6
    G = parse_graph("vertex a\nvertex b\nedge a b 1 2\nloop a 1 3")
    R = collapse_unit_edges(G)
    assert R.edges == [("b", "b", 2, 6)]
    assert classify(G).case == 3 and not classify(G).caveats
    H = parse_graph("vertex a\nvertex b\nedge a b 1 1\nloop b 1 3")
    assert classify(H).case == 2


def test_caveat_only_on_unreduced_graphs():
    c = classify(parse_graph("loop 2 3\nloop s 2 5"))
    assert c.case == 3 and c.caveats == [CAVEAT_CASE2]


def test_valences():
    assert bass_serre_valences(GraphOfZ.loop(-2, 3)) == {"s": 5}
    assert bass_serre_valences(parse_graph("vertex x\nvertex y\nedge x y 2 3")) == {"x": 2, "y": 3}
    assert bass_serre_valences(parse_graph("loop 1 2\nloop s 1 3")) == {"s": 7}


def test_invariants_on_random_graphs():
    rng = random.Random(0)
    for _ in range(100):
        G = random_graph(rng)
        images = {modular_image(G, spanning_tree(G, rng)) for _ in range(4)}
        assert len(images) == 1
        tree = spanning_tree(G)
        P = presentation(G, tree)
        assert len(P.relators) == len(G.edges)
        assert len(P.generators) == len(G.vertices) + len(G.edges) - len(tree)
        c = classify(G)
        assert c.case in (1, 2, 3)
        assert (c.case == 1) == modular_image(G).unimodular
