"""Graphs of groups: the combinatorial data model and its validation.

A graph here is a set of oriented edges with a fixed-point-free
involution e -> bar(e); head(e) is the terminal vertex, tail(e) the
initial one, and head(bar(e)) = tail(e).  A graph of groups attaches a
group to every vertex and edge pair, plus a monomorphism sigma_f from
the edge group into the head group of every oriented edge f.  For an
oriented edge e of the chosen orientation A, theta_e denotes
sigma_{bar(e)} (the map into the tail group); conventions here differ
from Serre's, who identifies edge groups with their sigma-image only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Union

from .errors import (
    DisconnectedGraph,
    UndecidableContraction,
    UndecidableIndex,
    UnknownEdge,
    UnknownVertex,
)
from .groups import FiniteGroup, GroupHom

INFINITE = math.inf

BAR_SUFFIX = "~"


def bar_name(edge_id: str) -> str:
    return edge_id[:-1] if edge_id.endswith(BAR_SUFFIX) else edge_id + BAR_SUFFIX


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[str, ...]
    bar: Mapping[str, str]
    head: Mapping[str, str]
    tail: Mapping[str, str]

    @staticmethod
    def from_pairs(vertices, pairs) -> "Graph":
        """Build from geometric edges given as (id, tail, head) triples.

        Each pair contributes the oriented edge ``id`` and its reversal
        ``id~``.  The ids as given form the natural orientation.
        """
        bar, head, tail = {}, {}, {}
        edges = []
        for eid, t, h in pairs:
            rid = bar_name(eid)
            if eid in bar or rid in bar:
                raise ValueError(f"duplicate edge id {eid!r}")
            bar[eid], bar[rid] = rid, eid
            head[eid], tail[eid] = h, t
            head[rid], tail[rid] = t, h
            edges += [eid, rid]
        return Graph(tuple(sorted(vertices)), tuple(sorted(edges)), bar, head, tail)

    def check_vertex(self, v: str):
        if v not in self.vertices:
            raise UnknownVertex(v)

    def check_edge(self, e: str):
        if e not in self.bar:
            raise UnknownEdge(e)

    def out_edges(self, v: str) -> list[str]:
        """Oriented edges with tail v, ascending id."""
        return [e for e in self.edges if self.tail[e] == v]

    def in_edges(self, v: str) -> list[str]:
        return [e for e in self.edges if self.head[e] == v]

    def structural_violations(self) -> list[str]:
        out = []
        for e in self.edges:
            b = self.bar.get(e)
            if b is None or b not in self.bar:
                out.append(f"edge {e!r}: bar image missing")
                continue
            if b == e:
                out.append(f"edge {e!r}: involution has fixed point")
            elif self.bar.get(b) != e:
                out.append(f"edge {e!r}: bar is not an involution")
            if self.head.get(self.bar[e]) != self.tail.get(e):
                out.append(f"edge {e!r}: head(bar(e)) != tail(e)")
            for v in (self.head.get(e), self.tail.get(e)):
                if v not in self.vertices:
                    out.append(f"edge {e!r}: endpoint {v!r} unknown")
        if self.vertices and not self.is_connected():
            out.append("graph is not connected")
        return out

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for e in self.edges:
                if self.tail.get(e) == v and self.head.get(e) not in seen:
                    seen.add(self.head[e])
                    stack.append(self.head[e])
        return len(seen) == len(self.vertices)


@dataclass(frozen=True)
class Orientation:
    """One oriented edge chosen from each pair {e, bar(e)} (the set A)."""

    chosen: tuple[str, ...]

    def __contains__(self, e: str) -> bool:
        return e in self.chosen

    @staticmethod
    def default(graph: Graph) -> "Orientation":
        chosen = []
        seen = set()
        for e in graph.edges:
            if e not in seen:
                chosen.append(e)
                seen.add(e)
                seen.add(graph.bar[e])
        return Orientation(tuple(sorted(chosen)))

    def violations(self, graph: Graph) -> list[str]:
        out = []
        chosen = set(self.chosen)
        for e in self.chosen:
            if e not in graph.bar:
                out.append(f"orientation contains unknown edge {e!r}")
            elif graph.bar[e] in chosen:
                out.append(f"orientation contains both {e!r} and its reversal")
        for e in graph.edges:
            if e not in chosen and graph.bar.get(e) not in chosen:
                out.append(f"edge pair of {e!r} missing from orientation")
                break
        return out


@dataclass(frozen=True)
class SpanningTree:
    """Tree edges stored with both orientations; pairs counted once in size."""

    edge_ids: frozenset[str]

    def __contains__(self, e: str) -> bool:
        return e in self.edge_ids

    @property
    def pair_count(self) -> int:
        return len(self.edge_ids) // 2

    def violations(self, graph: Graph) -> list[str]:
        out = []
        for e in self.edge_ids:
            if e not in graph.bar:
                out.append(f"tree contains unknown edge {e!r}")
                return out
            if graph.bar[e] not in self.edge_ids:
                out.append(f"tree edge {e!r} present without its reversal")
        if self.pair_count != len(graph.vertices) - 1:
            out.append(
                f"tree has {self.pair_count} edge pairs for {len(graph.vertices)} vertices"
            )
        # acyclic + spanning: BFS over tree edges must reach everything once
        if not out and graph.vertices:
            parent = {graph.vertices[0]: None}
            queue = [graph.vertices[0]]
            used = set()
            while queue:
                v = queue.pop(0)
                for e in graph.out_edges(v):
                    if e in self.edge_ids and e not in used:
                        used.add(e)
                        used.add(graph.bar[e])
                        w = graph.head[e]
                        if w in parent:
                            out.append(f"tree contains a cycle through {e!r}")
                            return out
                        parent[w] = (v, e)
                        queue.append(w)
            if len(parent) != len(graph.vertices):
                out.append("tree does not span the graph")
        return out


def spanning_tree(graph: Graph) -> SpanningTree:
    """Deterministic spanning tree: BFS from the smallest vertex id,
    out-edges explored in ascending edge id."""
    if not graph.is_connected():
        raise DisconnectedGraph("cannot build a spanning tree")
    if not graph.vertices:
        return SpanningTree(frozenset())
    root = min(graph.vertices)
    seen = {root}
    queue = [root]
    edges: set[str] = set()
    while queue:
        v = queue.pop(0)
        for e in graph.out_edges(v):
            w = graph.head[e]
            if w not in seen:
                seen.add(w)
                edges.add(e)
                edges.add(graph.bar[e])
                queue.append(w)
    return SpanningTree(frozenset(edges))


def tree_path(graph: Graph, tree: SpanningTree, v: str, w: str) -> list[str]:
    """Oriented tree edges traversed from v to w (empty if v == w)."""
    graph.check_vertex(v)
    graph.check_vertex(w)
    parent: dict[str, Optional[tuple[str, str]]] = {v: None}
    queue = [v]
    while queue and w not in parent:
        u = queue.pop(0)
        for e in graph.out_edges(u):
            if e in tree and graph.head[e] not in parent:
                parent[graph.head[e]] = (u, e)
                queue.append(graph.head[e])
    if w not in parent:
        raise DisconnectedGraph(f"no tree path from {v!r} to {w!r}")
    path = []
    cur = w
    while parent[cur] is not None:
        u, e = parent[cur]
        path.append(e)
        cur = u
    path.reverse()
    return path


def epsilon(graph: Graph, tree: SpanningTree, v: str, w: str, e: str) -> int:
    """Sign of the oriented edge e on the tree path [v, w]: +1 pointing
    away from v, -1 pointing towards v, 0 if not on the path.  Non-tree
    edges always give 0."""
    graph.check_edge(e)
    path = tree_path(graph, tree, v, w)
    if e in path:
        return 1
    if graph.bar[e] in path:
        return -1
    return 0


# ---------------------------------------------------------------------------
# group references and edge embeddings


@dataclass(frozen=True)
class Enumerated:
    group: FiniteGroup

    @property
    def cardinality(self) -> Union[int, float]:
        return len(self.group)

    @property
    def is_enumerated(self) -> bool:
        return True

    # finite groups are amenable with vanishing positive-degree L2-Betti
    # numbers; these are theorems, not user assertions
    @property
    def beta1_zero(self) -> bool:
        return True

    @property
    def amenable(self) -> bool:
        return True

    def higher_betti(self, i: int) -> Optional[Fraction]:
        return Fraction(0) if i >= 1 else None


@dataclass(frozen=True)
class Symbolic:
    """A group known only through user assertions; nothing is inferred."""

    name: str
    cardinality: Union[int, float]  # finite order or INFINITE
    beta1_zero: bool = False
    amenable: bool = False
    property_t: bool = False
    presentation: Optional[str] = None
    betti_table: Optional[Mapping[int, Fraction]] = None

    @property
    def is_enumerated(self) -> bool:
        return False

    def higher_betti(self, i: int) -> Optional[Fraction]:
        if self.betti_table is not None and i in self.betti_table:
            return self.betti_table[i]
        if self.amenable and i >= 1:
            return Fraction(0)
        return None


GroupRef = Union[Enumerated, Symbolic]


@dataclass(frozen=True)
class SymbolicEmbedding:
    """Stand-in for sigma_f when either side is symbolic; carries only
    the asserted index [G_head : image] (1 asserts surjectivity)."""

    index: Union[int, float, None] = None  # None = unasserted


EdgeMap = Union[GroupHom, SymbolicEmbedding]


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def valid(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class GraphOfGroups:
    graph: Graph
    vertex_groups: Mapping[str, GroupRef]
    edge_groups: Mapping[str, GroupRef]  # keyed by oriented edge, bar-invariant
    sigma: Mapping[str, EdgeMap]  # sigma_f : G_f -> G_{head(f)}, every oriented f
    orientation: Orientation
    tree: SpanningTree
    base_vertex: str

    def theta(self, e: str) -> EdgeMap:
        """The tail-side map of an oriented edge: sigma of its reversal."""
        return self.sigma[self.graph.bar[e]]

    def vgroup(self, v: str) -> GroupRef:
        return self.vertex_groups[v]

    def egroup(self, e: str) -> GroupRef:
        return self.edge_groups[e]

    @property
    def all_enumerated(self) -> bool:
        return all(r.is_enumerated for r in self.vertex_groups.values()) and all(
            r.is_enumerated for r in self.edge_groups.values()
        )

    def edge_index(self, f: str) -> Union[int, float, None]:
        """[G_{head(f)} : sigma_f(G_f)]; None when undecidable."""
        m = self.sigma[f]
        if isinstance(m, GroupHom):
            return len(m.target) // len(set(m.images))
        return m.index


def validate(gog: GraphOfGroups) -> ValidationReport:
    """Check every structural invariant; violations are data, an empty
    report means the instance is valid."""
    out: list[Violation] = []
    g = gog.graph
    for msg in g.structural_violations():
        out.append(Violation("graph", "graph", msg))
    for msg in gog.orientation.violations(g):
        out.append(Violation("orientation", "orientation", msg))
    for msg in gog.tree.violations(g):
        out.append(Violation("tree", "tree", msg))
    if gog.base_vertex not in g.vertices:
        out.append(Violation("base", gog.base_vertex, "base vertex not in graph"))
    for v in g.vertices:
        if v not in gog.vertex_groups:
            out.append(Violation("vertex-group", v, "vertex has no group"))
    for e in g.edges:
        if e not in gog.edge_groups:
            out.append(Violation("edge-group", e, "edge has no group"))
            continue
        b = g.bar.get(e)
        if b in gog.edge_groups and gog.edge_groups[e] is not gog.edge_groups[b]:
            if gog.edge_groups[e] != gog.edge_groups[b]:
                out.append(Violation("edge-group", e, "edge group differs from its reversal's"))
        m = gog.sigma.get(e)
        if m is None:
            out.append(Violation("sigma", e, "missing edge monomorphism"))
            continue
        ref, head_ref = gog.edge_groups[e], gog.vertex_groups.get(g.head.get(e, ""), None)
        if isinstance(m, GroupHom):
            if not (isinstance(ref, Enumerated) and m.source is ref.group):
                out.append(Violation("sigma", e, "sigma source is not the edge group"))
            if not (isinstance(head_ref, Enumerated) and m.target is head_ref.group):
                out.append(Violation("sigma", e, "sigma target is not the head vertex group"))
            if not m.injective:
                out.append(Violation("sigma", e, "sigma not injective"))
        else:
            if isinstance(ref, Enumerated) and isinstance(head_ref, Enumerated):
                out.append(Violation("sigma", e, "enumerated edge needs an explicit map"))
    return ValidationReport(tuple(out))


@dataclass(frozen=True)
class Contraction:
    edge: str
    removed_vertex: str
    kept_vertex: str


@dataclass(frozen=True)
class ContractionLog:
    steps: tuple[Contraction, ...]


@dataclass(frozen=True)
class ReducednessReport:
    reduced: bool
    witness: Optional[str] = None  # offending oriented edge


def _surjective(gog: GraphOfGroups, f: str) -> Optional[bool]:
    m = gog.sigma[f]
    if isinstance(m, GroupHom):
        return m.surjective
    if m.index is None:
        return None
    return m.index == 1


def is_reduced(gog: GraphOfGroups) -> ReducednessReport:
    """True iff every non-loop edge has both edge-group indices >= 2.
    Loops are exempt.  Raises UndecidableIndex for symbolic maps without
    an index assertion."""
    g = gog.graph
    for e in sorted(gog.orientation.chosen):
        if g.head[e] == g.tail[e]:
            continue
        for f in (e, g.bar[e]):
            idx = gog.edge_index(f)
            if idx is None:
                raise UndecidableIndex(f"no index assertion for edge map {f!r}")
            if idx < 2:
                return ReducednessReport(False, witness=f)
    return ReducednessReport(True)


def _compose_edge_map(outer: EdgeMap, inner: EdgeMap, outer_index_factor) -> EdgeMap:
    """Composite of a re-rooting map after sigma_f, at whichever level of
    detail the data supports."""
    if isinstance(outer, GroupHom) and isinstance(inner, GroupHom):
        images = tuple(outer.images[i] for i in inner.images)
        return GroupHom(inner.source, outer.target, images)
    inner_index = (
        len(inner.target) // len(set(inner.images)) if isinstance(inner, GroupHom) else inner.index
    )
    if inner_index is None or outer_index_factor is None:
        return SymbolicEmbedding(None)
    return SymbolicEmbedding(inner_index * outer_index_factor)


def reduce(gog: GraphOfGroups) -> tuple[GraphOfGroups, ContractionLog]:
    """Contract, repeatedly and in ascending oriented-edge order, any
    non-loop edge whose head-side map is surjective.  The head vertex is
    merged into the tail vertex: the merged group is the tail group, and
    head-group elements are rewritten through theta . sigma^{-1}.  Loops
    are never contracted.  Restarts the scan after each contraction."""
    current = gog
    steps: list[Contraction] = []
    while True:
        g = current.graph
        # decidability is a precondition for the whole pass
        for f in sorted(g.edges):
            if g.head[f] != g.tail[f] and _surjective(current, f) is None:
                raise UndecidableContraction(
                    f"cannot decide surjectivity of the edge map {f!r}"
                )
        target = next(
            (
                f
                for f in sorted(g.edges)
                if g.head[f] != g.tail[f] and _surjective(current, f)
            ),
            None,
        )
        if target is None:
            return current, ContractionLog(tuple(steps))
        current = _contract(current, target)
        steps.append(
            Contraction(edge=target, removed_vertex=g.head[target], kept_vertex=g.tail[target])
        )


def _contract(gog: GraphOfGroups, e: str) -> GraphOfGroups:
    g = gog.graph
    hv, tv = g.head[e], g.tail[e]
    eb = g.bar[e]
    sig = gog.sigma[e]
    # rewriting map r : G_head -> G_tail
    if isinstance(sig, GroupHom):
        theta = gog.sigma[eb]
        assert isinstance(theta, GroupHom)
        images = tuple(theta.images[sig.preimage(j)] for j in range(len(sig.target)))
        rewrite: EdgeMap = GroupHom(sig.target, theta.target, images)
        tail_factor = gog.edge_index(eb)
    else:
        rewrite = SymbolicEmbedding(gog.edge_index(eb))
        tail_factor = gog.edge_index(eb)

    vertices = tuple(v for v in g.vertices if v != hv)
    edges = tuple(f for f in g.edges if f not in (e, eb))
    remap = lambda v: tv if v == hv else v
    head = {f: remap(g.head[f]) for f in edges}
    tail = {f: remap(g.tail[f]) for f in edges}
    bar = {f: g.bar[f] for f in edges}
    new_graph = Graph(vertices, edges, bar, head, tail)

    sigma = {}
    for f in edges:
        m = gog.sigma[f]
        if g.head[f] == hv:
            m = _compose_edge_map(rewrite, m, tail_factor)
        sigma[f] = m
    vgroups = {v: gog.vertex_groups[v] for v in vertices}
    egroups = {f: gog.edge_groups[f] for f in edges}
    orientation = Orientation(tuple(sorted(x for x in gog.orientation.chosen if x not in (e, eb))))
    tree = spanning_tree(new_graph)
    base = remap(gog.base_vertex)
    return GraphOfGroups(new_graph, vgroups, egroups, sigma, orientation, tree, base)


def make_gog(
    graph: Graph,
    vertex_groups: Mapping[str, GroupRef],
    edge_groups: Mapping[str, GroupRef],
    sigma: Mapping[str, EdgeMap],
    orientation: Optional[Orientation] = None,
    tree: Optional[SpanningTree] = None,
    base_vertex: Optional[str] = None,
) -> GraphOfGroups:
    orientation = orientation or Orientation.default(graph)
    tree = tree or spanning_tree(graph)
    base_vertex = base_vertex or (min(graph.vertices) if graph.vertices else "")
    return GraphOfGroups(graph, dict(vertex_groups), dict(edge_groups), dict(sigma), orientation, tree, base_vertex)
