import random

import pytest

from treecoh.errors import DisconnectedGraph, UndecidableContraction, UndecidableIndex
from treecoh.gog import (
    Enumerated,
    Graph,
    GroupHom,
    INFINITE,
    Orientation,
    Symbolic,
    SymbolicEmbedding,
    epsilon,
    is_reduced,
    make_gog,
    reduce,
    spanning_tree,
    validate,
)
from treecoh.groups import check_hom, closure, trivial_group


def z2():
    return closure([(1, 0)], name="Z2")


def seg_gog(head_group=None, tail_group=None, edge_group=None, sigma_head=None, sigma_tail=None):
    """Segment a -- b with configurable groups; defaults to the smallest
    amalgam: Z2 vertex groups over the trivial edge group."""
    ga = tail_group or Enumerated(z2())
    gb = head_group or Enumerated(z2())
    ge = edge_group or Enumerated(trivial_group())
    graph = Graph.from_pairs(["a", "b"], [("e1", "a", "b")])
    sh = sigma_head or check_hom({"1": "1"}, ge.group, gb.group)
    st = sigma_tail or check_hom({"1": "1"}, ge.group, ga.group)
    return make_gog(
        graph,
        {"a": ga, "b": gb},
        {"e1": ge, "e1~": ge},
        {"e1": sh, "e1~": st},
    )


def test_segment_is_valid():
    assert validate(seg_gog()).valid


def test_involution_fixed_point_detected():
    g = Graph(("a",), ("e",), {"e": "e"}, {"e": "a"}, {"e": "a"})
    msgs = g.structural_violations()
    assert any("fixed point" in m for m in msgs)


def test_sigma_not_injective_detected():
    ge = Enumerated(z2())
    crushed = check_hom({"1": "1", "(1 2)": "1"}, ge.group, z2())
    # target group instance must be the vertex group itself
    gb = Enumerated(crushed.target)
    graph = Graph.from_pairs(["a", "b"], [("e1", "a", "b")])
    gog = make_gog(
        graph,
        {"a": Enumerated(z2()), "b": gb},
        {"e1": ge, "e1~": ge},
        {"e1": crushed, "e1~": check_hom({"1": "1", "(1 2)": "(1 2)"}, ge.group, z2())},
    )
    rep = validate(gog)
    assert not rep.valid
    assert any("not injective" in v.message for v in rep.violations)


def test_spanning_tree_segment():
    gog = seg_gog()
    assert gog.tree.edge_ids == frozenset({"e1", "e1~"})


def test_spanning_tree_loop_empty():
    graph = Graph.from_pairs(["v"], [("e1", "v", "v")])
    assert spanning_tree(graph).edge_ids == frozenset()


def test_spanning_tree_theta_forced():
    graph = Graph.from_pairs(["a", "b"], [("e1", "a", "b"), ("e2", "a", "b"), ("e3", "a", "b")])
    assert spanning_tree(graph).edge_ids == frozenset({"e1", "e1~"})


def test_spanning_tree_deterministic():
    graph = Graph.from_pairs(
        ["a", "b", "c"], [("e1", "a", "b"), ("e2", "b", "c"), ("e3", "c", "a")]
    )
    trees = {spanning_tree(graph).edge_ids for _ in range(5)}
    assert len(trees) == 1


def test_spanning_tree_disconnected():
    g = Graph(("a", "b"), (), {}, {}, {})
    with pytest.raises(DisconnectedGraph):
        spanning_tree(g)


def path_abc():
    graph = Graph.from_pairs(["a", "b", "c"], [("e1", "a", "b"), ("e2", "b", "c")])
    return graph, spanning_tree(graph)


def test_epsilon_examples():
    graph, tree = path_abc()
    assert epsilon(graph, tree, "a", "c", "e1") == 1
    assert epsilon(graph, tree, "c", "a", "e1") == -1
    assert epsilon(graph, tree, "a", "b", "e2") == 0


def test_epsilon_cocycle_identities():
    graph, tree = path_abc()
    rng = random.Random(7)
    verts = list(graph.vertices)
    for _ in range(50):
        u, v, w = (rng.choice(verts) for _ in range(3))
        e = rng.choice(list(graph.edges))
        assert epsilon(graph, tree, v, w, e) == -epsilon(graph, tree, w, v, e)
        assert epsilon(graph, tree, u, v, e) + epsilon(graph, tree, v, w, e) == epsilon(
            graph, tree, u, w, e
        )
        assert epsilon(graph, tree, v, v, e) == 0


def test_epsilon_zero_off_tree():
    graph = Graph.from_pairs(["a", "b"], [("e1", "a", "b"), ("e2", "a", "b")])
    tree = spanning_tree(graph)
    assert "e2" not in tree
    for v in ("a", "b"):
        for w in ("a", "b"):
            assert epsilon(graph, tree, v, w, "e2") == 0


def s3_contractible_segment():
    """sigma bijective onto the head Z2 inside a segment whose tail is S3."""
    s3 = closure([(1, 0, 2), (1, 2, 0)], name="S3")
    ge = Enumerated(z2())
    gb = Enumerated(z2())
    sh = check_hom({"1": "1", "(1 2)": "(1 2)"}, ge.group, gb.group)
    st = check_hom({"1": "1", "(1 2)": "(1 2)"}, ge.group, s3)
    graph = Graph.from_pairs(["a", "b"], [("e1", "a", "b")])
    return make_gog(
        graph,
        {"a": Enumerated(s3), "b": gb},
        {"e1": ge, "e1~": ge},
        {"e1": sh, "e1~": st},
    )


def test_reduce_contracts_to_tail_group():
    gog = s3_contractible_segment()
    reduced, log = reduce(gog)
    assert len(log.steps) == 1
    assert reduced.graph.vertices == ("a",)
    assert len(reduced.vertex_groups["a"].group) == 6
    assert is_reduced(reduced).reduced


def test_reduce_fixpoint_on_reduced_input():
    gog = seg_gog()  # both indices 2
    reduced, log = reduce(gog)
    assert log.steps == ()
    assert reduced is gog


def test_reduce_never_contracts_loops():
    z3 = closure([(1, 2, 0)], name="Z3")
    ge = Enumerated(z3)
    ident = check_hom({lab: lab for lab in z3.labels}, z3, z3)
    graph = Graph.from_pairs(["v"], [("e1", "v", "v")])
    gog = make_gog(graph, {"v": Enumerated(z3)}, {"e1": ge, "e1~": ge}, {"e1": ident, "e1~": ident})
    reduced, log = reduce(gog)
    assert log.steps == () and reduced is gog
    assert is_reduced(gog).reduced


def test_reduce_idempotent():
    gog = s3_contractible_segment()
    once, _ = reduce(gog)
    twice, log = reduce(once)
    assert log.steps == ()


def test_is_reduced_witness():
    gog = s3_contractible_segment()
    rep = is_reduced(gog)
    assert not rep.reduced and rep.witness in ("e1", "e1~")


def test_symbolic_reduce_undecidable():
    sym = Symbolic("S", INFINITE, beta1_zero=True)
    graph = Graph.from_pairs(["a", "b"], [("e1", "a", "b")])
    gog = make_gog(
        graph,
        {"a": sym, "b": sym},
        {"e1": sym, "e1~": sym},
        {"e1": SymbolicEmbedding(None), "e1~": SymbolicEmbedding(None)},
    )
    with pytest.raises(UndecidableContraction):
        reduce(gog)
    with pytest.raises(UndecidableIndex):
        is_reduced(gog)


def test_symbolic_contraction_with_asserted_surjectivity():
    sa = Symbolic("A", INFINITE)
    sb = Symbolic("B", INFINITE)
    se = Symbolic("E", INFINITE)
    graph = Graph.from_pairs(["a", "b"], [("e1", "a", "b")])
    gog = make_gog(
        graph,
        {"a": sa, "b": sb},
        {"e1": se, "e1~": se},
        {"e1": SymbolicEmbedding(1), "e1~": SymbolicEmbedding(3)},
    )
    reduced, log = reduce(gog)
    assert len(log.steps) == 1
    assert reduced.graph.vertices == ("a",)
    assert reduced.vertex_groups["a"] is sa


def test_orientation_default_and_violations():
    graph = Graph.from_pairs(["a", "b"], [("e1", "a", "b")])
    ori = Orientation.default(graph)
    assert ori.chosen == ("e1",)
    bad = Orientation(("e1", "e1~"))
    assert bad.violations(graph)
