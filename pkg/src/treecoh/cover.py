"""Balls of the Bass-Serre universal cover and the action on them.

Cover vertices are cosets g.G_v addressed by canonical coset words
(words.VertexCoset); the coset word *is* the geodesic from the base
lift, so distances and geodesics come from longest common prefixes and
never need a materialized ball.  Balls are built breadth-first for
export and for enumeration-style searches (fixed vertices, degree
checks); translation lengths, axes and the elementarity classifier work
directly on coset words, since balls of radius 2d+1 grow exponentially
in covers of branching degree >= 3.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import BallTooLarge, OutOfBall, UnknownVertex
from .gog import GraphOfGroups
from .words import (
    EdgeCoset,
    EdgeLetter,
    Engine,
    GroupWord,
    NormalForm,
    VertexCoset,
    VertexLetter,
    engine_for,
)

DEFAULT_BALL_CAP = 50000
GEODESIC_CAP = 4000


def ball_cap() -> int:
    return int(os.environ.get("TREECOH_BALL_CAP", DEFAULT_BALL_CAP))


# ---------------------------------------------------------------------------
# coset geometry (ball-free)


def coset_prefixes(gog: GraphOfGroups, vc: VertexCoset) -> list[VertexCoset]:
    """The geodesic from the base lift to vc, as coset addresses."""
    g = gog.graph
    out = [VertexCoset(gog.base_vertex, ())]
    for i in range(1, len(vc.steps) + 1):
        out.append(VertexCoset(g.head[vc.steps[i - 1][1]], vc.steps[:i]))
    return out


def tree_distance(gog: GraphOfGroups, u: VertexCoset, v: VertexCoset) -> int:
    """Geodesic length between two cover vertices: coset words are
    geodesics from the base, so d = |u| + |v| - 2 lcp."""
    lcp = 0
    for a, b in zip(u.steps, v.steps):
        if a != b:
            break
        lcp += 1
    return (u.depth - lcp) + (v.depth - lcp)


def geodesic(gog: GraphOfGroups, u: VertexCoset, v: VertexCoset) -> list[VertexCoset]:
    lcp = 0
    for a, b in zip(u.steps, v.steps):
        if a != b:
            break
        lcp += 1
    up = coset_prefixes(gog, u)
    down = coset_prefixes(gog, v)
    return up[lcp:][::-1] + down[lcp + 1 :]


def step_edge(gog: GraphOfGroups, vc: VertexCoset, i: int) -> tuple[EdgeCoset, int]:
    """The cover edge crossed between prefix i and prefix i+1 of vc,
    with +1 if its A-orientation points down the geodesic (away from
    the base) and -1 otherwise."""
    rep, f = vc.steps[i]
    prefixes = coset_prefixes(gog, vc)
    if f in gog.orientation:
        grp = gog.vertex_groups[gog.graph.head[f]].group
        return EdgeCoset(f, prefixes[i + 1], grp.labels[grp.id_index]), 1
    e = gog.graph.bar[f]
    return EdgeCoset(e, prefixes[i], rep), -1


# ---------------------------------------------------------------------------
# balls


@dataclass(frozen=True)
class CoverVertex:
    uid: str
    vtype: str
    coset: VertexCoset
    depth: int


@dataclass(frozen=True)
class CoverEdge:
    uid: str
    etype: str
    head: str
    tail: str
    residual: str


@dataclass
class CoverBall:
    gog: GraphOfGroups
    radius: int
    base_uid: str
    vertices: dict[str, CoverVertex]
    edges: dict[str, CoverEdge]
    adjacency: dict[str, list[tuple[str, str]]]  # uid -> [(edge uid, neighbor uid)]

    def vertex(self, key) -> CoverVertex:
        uid = key.uid if isinstance(key, CoverVertex) else (
            key.key() if isinstance(key, VertexCoset) else key
        )
        try:
            return self.vertices[uid]
        except KeyError:
            raise UnknownVertex(f"{uid!r} is not in the ball")

    def degree(self, uid: str) -> int:
        return len(self.adjacency[uid])

    def interior_uids(self) -> list[str]:
        return [u for u, v in self.vertices.items() if v.depth < self.radius]


def expected_degree(gog: GraphOfGroups, vtype: str):
    """Sum over oriented edges with head v of [G_v : sigma_f(G_f)]."""
    total = 0
    for f in gog.graph.in_edges(vtype):
        idx = gog.edge_index(f)
        if idx is None:
            return None
        total += idx
    return total


def build_ball(gog: GraphOfGroups, radius: int, cap: Optional[int] = None) -> CoverBall:
    """Breadth-first ball around the base lift.  Neighbor enumeration is
    deterministic: edge types ascending, transversal representatives in
    element order."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    cap = cap if cap is not None else ball_cap()
    eng = engine_for(gog)
    g = gog.graph
    base = eng.base_coset()
    bv = CoverVertex(base.key(), base.vtype, base, 0)
    vertices = {bv.uid: bv}
    edges: dict[str, CoverEdge] = {}
    adjacency: dict[str, list[tuple[str, str]]] = {bv.uid: []}
    queue = [bv]
    while queue:
        x = queue.pop(0)
        if x.depth >= radius:
            continue
        for ec, other in _incident(eng, x.coset):
            euid = ec.key()
            if euid in edges:
                continue
            ouid = other.key()
            if ouid not in vertices:
                if len(vertices) + 1 > cap:
                    raise BallTooLarge(f"ball exceeded vertex cap {cap}")
                ov = CoverVertex(ouid, other.vtype, other, x.depth + 1)
                vertices[ouid] = ov
                adjacency[ouid] = []
                queue.append(ov)
            head_uid = ec.head.key()
            tail_uid = ouid if head_uid == x.uid else x.uid
            edges[euid] = CoverEdge(euid, ec.etype, head_uid, tail_uid, ec.residual)
            adjacency[x.uid].append((euid, ouid))
            adjacency[ouid].append((euid, x.uid))
    return CoverBall(gog, radius, bv.uid, vertices, edges, adjacency)


def _incident(eng: Engine, u: VertexCoset):
    """All cover edges at the vertex u with the opposite endpoint, in
    deterministic order."""
    gog = eng.gog
    g = gog.graph
    v = u.vtype
    grp = eng.vgrp[v]
    out = []
    for e in sorted(gog.orientation.chosen):
        if g.head[e] == v:
            for h in eng.trans[e].reps:
                lab = grp.labels[h]
                w = GroupWord((VertexLetter(v, lab),)) if lab != grp.labels[grp.id_index] else GroupWord(())
                ec = eng.extend_edge(u, w, e)
                other = eng.extend_vertex(
                    u, GroupWord((VertexLetter(v, lab), EdgeLetter(e, -1))), g.tail[e]
                )
                out.append((ec, other))
        if g.tail[e] == v:
            eb = g.bar[e]
            for h in eng.trans[eb].reps:
                lab = grp.labels[h]
                ec = eng.extend_edge(u, GroupWord((VertexLetter(v, lab), EdgeLetter(e, 1))), e)
                other = eng.extend_vertex(
                    u, GroupWord((VertexLetter(v, lab), EdgeLetter(e, 1))), g.head[e]
                )
                out.append((ec, other))
    return out


def act(ball: CoverBall, w: GroupWord, v) -> CoverVertex:
    """The image w . v inside the ball; OutOfBall if it lands beyond."""
    cv = ball.vertex(v)
    eng = engine_for(ball.gog)
    image = eng.act_vertex(w, cv.coset)
    uid = image.key()
    if uid not in ball.vertices:
        raise OutOfBall(f"image {uid!r} lies beyond radius {ball.radius}")
    return ball.vertices[uid]


def distance(ball: CoverBall, u, v) -> int:
    return tree_distance(ball.gog, ball.vertex(u).coset, ball.vertex(v).coset)


# ---------------------------------------------------------------------------
# isometries


@dataclass(frozen=True)
class IsometryReport:
    word: GroupWord
    normal: NormalForm
    displacement: int
    kind: str  # "elliptic" | "hyperbolic"
    translation_length: int
    axis_segment: tuple[VertexCoset, ...] = ()
    fixed_vertex: Optional[VertexCoset] = None


def power_word(gog: GraphOfGroups, w: GroupWord, n: int) -> GroupWord:
    if n >= 0:
        return GroupWord(w.letters * n)
    return GroupWord(w.inverse(gog).letters * (-n))


def isometry_report(gog: GraphOfGroups, w: GroupWord, cap: int = GEODESIC_CAP) -> IsometryReport:
    """Translation length as the minimum displacement over the geodesic
    [x0, w.x0]; the min-set of a tree isometry meets that geodesic, so
    the restricted minimum is the global one."""
    eng = engine_for(gog)
    target = eng.vertex_coset(w, gog.base_vertex)
    if target.depth > cap:
        raise BallTooLarge(f"displacement {target.depth} exceeds cap {cap}")
    line = coset_prefixes(gog, target)
    disps = []
    for p in line:
        q = eng.act_vertex(w, p)
        disps.append(tree_distance(gog, q, p))
    ell = min(disps)
    nf = eng.normal_form(w)
    if ell == 0:
        fixed = line[disps.index(0)]
        return IsometryReport(w, nf, target.depth, "elliptic", 0, (), fixed)
    seg = tuple(p for p, d in zip(line, disps) if d == ell)
    return IsometryReport(w, nf, target.depth, "hyperbolic", ell, seg, None)


def axis_window(gog: GraphOfGroups, w: GroupWord, report: IsometryReport, half_width: int):
    """An ordered vertex run along Axis(w) covering at least half_width
    edges on each side of the projection of the base vertex."""
    eng = engine_for(gog)
    ell = report.translation_length
    seg = list(report.axis_segment)
    reps = max(1, -(-half_width // ell) + 1)
    run: list[VertexCoset] = []
    for k in range(-reps, reps + 1):
        pw = power_word(gog, w, k)
        part = [eng.act_vertex(pw, p) for p in seg]
        if run and part and run[-1].key() == part[0].key():
            part = part[1:]
        run.extend(part)
    return run


@dataclass(frozen=True)
class PingPongCertificate:
    """Two hyperbolic words whose axes overlap in fewer edges than the
    sum of their translation lengths (after power-raising), which pins
    four distinct ends and rules out any finite orbit."""

    g1: GroupWord
    g2: GroupWord
    power: int
    overlap: int
    ell1: int
    ell2: int


@dataclass(frozen=True)
class EndPairCertificate:
    axis_word: GroupWord
    confirmations: tuple[tuple[str, str], ...]  # (generator, relation kind)


@dataclass(frozen=True)
class ActionClassification:
    verdict: str  # fixed_vertex | elementary_end_pair | non_elementary | inconclusive
    budget: int
    fixed_vertex: Optional[VertexCoset] = None
    pingpong: Optional[PingPongCertificate] = None
    endpair: Optional[EndPairCertificate] = None


def _overlap_run(runA: list[VertexCoset], runB: list[VertexCoset]):
    """Common segment of two axis windows: (edge length, interiorA,
    interiorB); None if the windows share no vertex."""
    keysA = {p.key(): i for i, p in enumerate(runA)}
    hits = [(keysA[q.key()], j) for j, q in enumerate(runB) if q.key() in keysA]
    if not hits:
        return None
    ia = [i for i, _ in hits]
    jb = [j for _, j in hits]
    length = max(ia) - min(ia)
    interior_a = min(ia) > 0 and max(ia) < len(runA) - 1
    interior_b = min(jb) > 0 and max(jb) < len(runB) - 1
    return length, interior_a, interior_b


def classify_action(gog: GraphOfGroups, gens: list[GroupWord], budget: int = 24) -> ActionClassification:
    """Fixed vertex / elementary end pair / non-elementary trichotomy
    with checkable certificates; Inconclusive when budget-bounded axis
    coincidence lacks an exact algebraic confirmation."""
    if not gens:
        raise ValueError("gens must be nonempty")
    eng = engine_for(gog)
    probes = list(gens)
    for i in range(len(gens)):
        for j in range(len(gens)):
            if i < j:
                probes.append(gens[i] * gens[j])
    reports = [isometry_report(gog, p) for p in probes]
    hyp = next(((p, r) for p, r in zip(probes, reports) if r.kind == "hyperbolic"), None)

    if hyp is None:
        witness = _common_fixed_vertex(gog, gens, reports[: len(gens)], budget)
        return ActionClassification("fixed_vertex", budget, fixed_vertex=witness)

    h, hrep = hyp
    ell = hrep.translation_length
    coincide: list[tuple[GroupWord, str]] = []
    for s in gens:
        # window wide enough that a nonempty axis intersection must show
        p = hrep.axis_segment[0]
        sp = eng.act_vertex(s, p)
        b = tree_distance(gog, p, sp)
        width = b + 2 * ell + budget + 2
        runA = axis_window(gog, h, hrep, width)
        runB = [eng.act_vertex(s, q) for q in runA]  # = Axis(s h s^-1)
        got = _overlap_run(runA, runB)
        if got is None:
            return _pingpong(gog, h, s, 0, ell)
        length, int_a, int_b = got
        if int_a and int_b:
            return _pingpong(gog, h, s, length, ell)
        coincide.append((s, "window"))

    confirmations = []
    for s, _ in coincide:
        conj = s * h * s.inverse(gog)
        if eng.equal(conj, h):
            confirmations.append((str(s), "conjugates-to-h"))
        elif eng.equal(conj, h.inverse(gog)):
            confirmations.append((str(s), "conjugates-to-h-inverse"))
        elif eng.is_identity(conj * h * conj.inverse(gog) * h.inverse(gog)):
            confirmations.append((str(s), "commutes-with-h"))
        else:
            return ActionClassification("inconclusive", budget)
    return ActionClassification(
        "elementary_end_pair",
        budget,
        endpair=EndPairCertificate(h, tuple(confirmations)),
    )


def _pingpong(gog: GraphOfGroups, h: GroupWord, s: GroupWord, overlap: int, ell: int):
    n = overlap // (2 * ell) + 1
    g1 = power_word(gog, h, n)
    g2 = power_word(gog, s * h * s.inverse(gog), n)
    cert = PingPongCertificate(g1, g2, n, overlap, n * ell, n * ell)
    return ActionClassification("non_elementary", 0, pingpong=cert)


def _common_fixed_vertex(gog, gens, reports, budget):
    """All generators elliptic with pairwise-elliptic products: their
    fixed subtrees pairwise intersect, hence globally (Helly on trees);
    search outward until the witness shows."""
    eng = engine_for(gog)
    r = max(1, max(rep.displacement for rep in reports))
    limit = sum(rep.displacement for rep in reports) + 4
    while True:
        ball = build_ball(gog, r)
        for uid in _bfs_order(ball):
            p = ball.vertices[uid].coset
            if all(eng.act_vertex(s, p).key() == uid for s in gens):
                return p
        if r > limit:
            raise BallTooLarge("no common fixed vertex within the search limit")
        r *= 2


def _bfs_order(ball: CoverBall) -> list[str]:
    return sorted(ball.vertices, key=lambda u: (ball.vertices[u].depth, u))


# ---------------------------------------------------------------------------
# certificate checkers (used to re-verify classifications independently)


def check_classification(gog: GraphOfGroups, gens: list[GroupWord], cls: ActionClassification) -> bool:
    eng = engine_for(gog)
    if cls.verdict == "fixed_vertex":
        p = cls.fixed_vertex
        return p is not None and all(eng.act_vertex(s, p).key() == p.key() for s in gens)
    if cls.verdict == "non_elementary":
        c = cls.pingpong
        if c is None:
            return False
        r1 = isometry_report(gog, c.g1)
        r2 = isometry_report(gog, c.g2)
        if r1.kind != "hyperbolic" or r2.kind != "hyperbolic":
            return False
        if r1.translation_length != c.ell1 or r2.translation_length != c.ell2:
            return False
        width = c.overlap + c.ell1 + c.ell2 + 4
        runA = axis_window(gog, c.g1, r1, width)
        runB = axis_window(gog, c.g2, r2, width)
        got = _overlap_run(runA, runB)
        if got is None:
            return 0 < c.ell1 + c.ell2
        length, int_a, int_b = got
        if not (int_a and int_b):
            return False
        return length == c.overlap and length < c.ell1 + c.ell2
    if cls.verdict == "elementary_end_pair":
        c = cls.endpair
        if c is None:
            return False
        h = c.axis_word
        for s in gens:
            conj = s * h * s.inverse(gog)
            ok = (
                eng.equal(conj, h)
                or eng.equal(conj, h.inverse(gog))
                or eng.is_identity(conj * h * conj.inverse(gog) * h.inverse(gog))
            )
            if not ok:
                return False
        return True
    return cls.verdict == "inconclusive"


# ---------------------------------------------------------------------------
# export


def ball_to_dot(ball: CoverBall) -> str:
    lines = ["graph cover {"]
    for uid in sorted(ball.vertices):
        v = ball.vertices[uid]
        lines.append(f'  "{uid}" [label="{v.vtype}|{uid}"];')
    for euid in sorted(ball.edges):
        e = ball.edges[euid]
        lines.append(f'  "{e.tail}" -- "{e.head}" [label="{e.etype}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def ball_to_json(ball: CoverBall) -> dict:
    return {
        "radius": ball.radius,
        "base": ball.base_uid,
        "vertices": [
            {"id": uid, "type": v.vtype, "depth": v.depth}
            for uid, v in sorted(ball.vertices.items())
        ],
        "edges": [
            {
                "id": euid,
                "type": e.etype,
                "head": e.head,
                "tail": e.tail,
                "residual": e.residual,
            }
            for euid, e in sorted(ball.edges.items())
        ],
    }
