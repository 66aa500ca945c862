"""The Haagerup cocycle b(g) = 1_{g.x0} - 1_{x0} on l2 of oriented cover
edges, together with the edge family omega_e = dirac(reversed lift) -
dirac(lift) and exact verification that the connecting map applied to
omega reproduces b on every generator.

Both orientations of a cover edge are independent coordinates, so
|b(g)|^2 = 2 d(g.x0, x0) holds with exact integer arithmetic: the +1
entries sit on the geodesic orientations pointing toward g.x0, the -1
entries on their reversals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import BallTooLarge, OutOfBall
from .cover import CoverBall, coset_prefixes, step_edge, tree_distance
from .gog import GraphOfGroups
from .words import EdgeCoset, EdgeLetter, GroupWord, VertexLetter, engine_for

OrientedEdge = tuple[EdgeCoset, int]  # (edge coset, +1 = A-orientation, -1 = reversed)


class EdgeVector:
    """Finitely supported exact-rational function on oriented cover edges."""

    def __init__(self, entries: Optional[dict[OrientedEdge, Fraction]] = None):
        self.entries: dict[OrientedEdge, Fraction] = {}
        if entries:
            for k, v in entries.items():
                if v != 0:
                    self.entries[k] = Fraction(v)

    def __eq__(self, other):
        return isinstance(other, EdgeVector) and self.entries == other.entries

    def __add__(self, other: "EdgeVector") -> "EdgeVector":
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, Fraction(0)) + v
        return EdgeVector(out)

    def __sub__(self, other: "EdgeVector") -> "EdgeVector":
        return self + other.scale(-1)

    def scale(self, c) -> "EdgeVector":
        c = Fraction(c)
        return EdgeVector({k: c * v for k, v in self.entries.items()})

    def norm_sq(self) -> Fraction:
        return sum((v * v for v in self.entries.values()), Fraction(0))

    @property
    def support_size(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def acted(self, gog: GraphOfGroups, w: GroupWord) -> "EdgeVector":
        eng = engine_for(gog)
        out: dict[OrientedEdge, Fraction] = {}
        for (ec, sign), v in self.entries.items():
            key = (eng.act_edge(w, ec), sign)
            out[key] = out.get(key, Fraction(0)) + v
        return EdgeVector(out)

    def describe(self) -> list[tuple[str, str]]:
        return sorted(
            (f"{ec.key()}{'+' if sign > 0 else '-'}", str(v))
            for (ec, sign), v in self.entries.items()
        )


def haagerup_cocycle(gog: GraphOfGroups, ball: CoverBall, w: GroupWord) -> EdgeVector:
    """b(w) as the signed indicator of the geodesic [x0, w.x0]."""
    eng = engine_for(gog)
    target = eng.vertex_coset(w, gog.base_vertex)
    if target.depth > ball.radius:
        raise OutOfBall(
            f"orbit point at distance {target.depth} exceeds ball radius {ball.radius}"
        )
    entries: dict[OrientedEdge, Fraction] = {}
    for i in range(target.depth):
        ec, direction = step_edge(gog, target, i)
        entries[(ec, direction)] = Fraction(1)
        entries[(ec, -direction)] = Fraction(-1)
    return EdgeVector(entries)


@dataclass(frozen=True)
class OmegaFamily:
    vectors: dict[str, EdgeVector]  # per edge of A

    def __getitem__(self, e: str) -> EdgeVector:
        return self.vectors[e]


def omega_family(gog: GraphOfGroups, ball: CoverBall) -> OmegaFamily:
    """The two-point family omega_e = dirac(reversed lift) - dirac(lift),
    with G_e-invariance checked by acting with every edge-group element."""
    eng = engine_for(gog)
    g = gog.graph
    out = {}
    for e in sorted(gog.orientation.chosen):
        lift_head = eng.vertex_coset(GroupWord(()), g.head[e])
        if lift_head.depth + 1 > ball.radius:
            raise BallTooLarge(
                f"lift of edge {e!r} is not contained in the radius-{ball.radius} ball"
            )
        grp = eng.vgrp[g.head[e]]
        lift = EdgeCoset(e, lift_head, grp.labels[grp.id_index])
        vec = EdgeVector({(lift, -1): Fraction(1), (lift, 1): Fraction(-1)})
        sig = gog.sigma[e]
        for x in range(len(sig.source)):
            lab = sig.target.labels[sig.images[x]]
            moved = vec.acted(gog, GroupWord((VertexLetter(g.head[e], lab),)))
            if moved != vec:
                raise AssertionError(f"omega_{e} is not fixed by its edge group")
        out[e] = vec
    return OmegaFamily(out)


def integral(gog: GraphOfGroups, omega: OmegaFamily, v0: str, v1: str) -> EdgeVector:
    """Path integral of the family along the tree path [v0, v1]."""
    from .gog import tree_path

    total = EdgeVector()
    for f in tree_path(gog.graph, gog.tree, v0, v1):
        if f in gog.orientation:
            total = total + omega[f]
        else:
            total = total - omega[gog.graph.bar[f]]
    return total


def connecting_on_letter(
    gog: GraphOfGroups, omega: OmegaFamily, letter, base: Optional[str] = None
) -> EdgeVector:
    """The connecting map's value on one generator: for g_v it is
    (g_v - 1) . integral(base -> v); for t_e it is
    t_e . integral(base -> e+) - t_e . omega_e - integral(base -> e-)."""
    base = base if base is not None else gog.base_vertex
    g = gog.graph
    if isinstance(letter, VertexLetter):
        vec = integral(gog, omega, base, letter.vertex)
        return vec.acted(gog, GroupWord((letter,))) - vec
    e = letter.edge
    te = GroupWord((EdgeLetter(e, 1),))
    head_part = integral(gog, omega, base, g.head[e]).acted(gog, te)
    mid = omega[e].acted(gog, te)
    tail_part = integral(gog, omega, base, g.tail[e])
    value = head_part - mid - tail_part
    if letter.exponent == 1:
        return value
    return value.acted(gog, GroupWord((letter,))).scale(-1)  # b(t^-1) = -t^-1 b(t)


def connecting_on_word(
    gog: GraphOfGroups, omega: OmegaFamily, w: GroupWord, base: Optional[str] = None
) -> EdgeVector:
    """Cocycle-rule extension b(uv) = b(u) + u.b(v) over the letters."""
    total = EdgeVector()
    prefix: list = []
    for letter in w.letters:
        part = connecting_on_letter(gog, omega, letter, base)
        total = total + part.acted(gog, GroupWord(tuple(prefix)))
        prefix.append(letter)
    return total


@dataclass(frozen=True)
class OmegaCheck:
    label: str
    ok: bool


@dataclass(frozen=True)
class OmegaReport:
    checks: tuple[OmegaCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def generator_words(gog: GraphOfGroups) -> list[GroupWord]:
    """Every non-identity vertex-group element and every stable letter."""
    out = []
    for v in gog.graph.vertices:
        grp = gog.vertex_groups[v].group
        for i, lab in enumerate(grp.labels):
            if i != grp.id_index:
                out.append(GroupWord((VertexLetter(v, lab),)))
    for e in sorted(gog.orientation.chosen):
        out.append(GroupWord((EdgeLetter(e, 1),)))
    return out


def verify_omega_lift(
    gog: GraphOfGroups, ball: CoverBall, test_words: Iterable[GroupWord] = ()
) -> OmegaReport:
    """Exact equality of the connecting map on omega with the Haagerup
    cocycle: on every generator, on the supplied words via the cocycle
    rule, and base-point independence up to the exact coboundary of
    integral(v0 -> v1)."""
    omega = omega_family(gog, ball)
    checks = []
    for gw in generator_words(gog):
        lhs = connecting_on_word(gog, omega, gw)
        rhs = haagerup_cocycle(gog, ball, gw)
        checks.append(OmegaCheck(f"generator {gw}", lhs == rhs))
    for gw in test_words:
        lhs = connecting_on_word(gog, omega, gw)
        rhs = haagerup_cocycle(gog, ball, gw)
        checks.append(OmegaCheck(f"word {gw}", lhs == rhs))
    v0 = gog.base_vertex
    for v1 in gog.graph.vertices:
        if v1 == v0:
            continue
        shift = integral(gog, omega, v0, v1)
        for gw in generator_words(gog):
            lhs = connecting_on_word(gog, omega, gw, base=v0) - connecting_on_word(
                gog, omega, gw, base=v1
            )
            rhs = shift.acted(gog, gw) - shift
            checks.append(OmegaCheck(f"base change {v0}->{v1} on {gw}", lhs == rhs))
    return OmegaReport(tuple(checks))


@dataclass(frozen=True)
class BoundednessWitness:
    kind: str  # "fixed_vertex" | "growth"
    fixed_vertex: Optional[object] = None
    word: Optional[GroupWord] = None
    norm_sq: Optional[Fraction] = None


def boundedness_witness(gog: GraphOfGroups, gens: list[GroupWord], horizon: int) -> BoundednessWitness:
    """Either a vertex fixed by every generator (so the cocycle stays
    bounded on the generated subgroup) or a word with |b|^2 >= horizon."""
    from .cover import classify_action, isometry_report, power_word, _common_fixed_vertex

    eng = engine_for(gog)
    reports = [isometry_report(gog, s) for s in gens]
    probes = list(zip(gens, reports))
    for i in range(len(gens)):
        for j in range(len(gens)):
            if i < j:
                w = gens[i] * gens[j]
                probes.append((w, isometry_report(gog, w)))
    hyp = next(((w, r) for w, r in probes if r.kind == "hyperbolic"), None)
    if hyp is None:
        witness = _common_fixed_vertex(gog, gens, reports, budget=0)
        return BoundednessWitness("fixed_vertex", fixed_vertex=witness)
    w, rep = hyp
    ell = rep.translation_length
    k = -(-horizon // (2 * ell))  # ceil
    grown = power_word(gog, w, k)
    target = eng.vertex_coset(grown, gog.base_vertex)
    norm_sq = Fraction(2 * target.depth)
    assert norm_sq >= horizon
    return BoundednessWitness("growth", word=grown, norm_sq=norm_sq)
