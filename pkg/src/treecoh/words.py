"""Words in the fundamental group of a graph of groups, and their
canonical forms.

The fundamental group is presented by the elements of the vertex groups
together with one stable letter per oriented edge of the orientation A;
stable letters of spanning-tree edges are trivial, and conjugation by
t_e carries the head-side copy of the edge group onto the tail-side
copy.  Deciding equality of words works through *path words*: a word is
expanded into an edge path based at the base vertex (each letter
contributes a loop through the spanning tree), pinches

    t_f . (element in the head-side edge subgroup) . t_f^{-1}

are resolved by carrying the element across the edge, and the remaining
reduced path is canonicalized left-to-right against fixed left-coset
transversals, pushing residues toward the final letter.  The result is
the unique normal form for the chosen transversals: reduced path words
of positive length never represent the identity, so triviality is
decidable.  The same machinery canonicalizes cosets g.G_v and g.G_e,
which is how the universal cover addresses its vertices and edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .errors import MissingPresentation, SymbolicGroupInWord, UnknownEdge, UnknownVertex
from .gog import GraphOfGroups, tree_path
from .groups import GroupHom, Transversal, left_transversal


@dataclass(frozen=True)
class VertexLetter:
    vertex: str
    element: str

    def inv(self, gog: GraphOfGroups) -> "VertexLetter":
        grp = gog.vertex_groups[self.vertex].group
        return VertexLetter(self.vertex, grp.labels[grp.inv(grp.index[self.element])])

    def __str__(self):
        return f"{self.vertex}:{self.element}"


@dataclass(frozen=True)
class EdgeLetter:
    edge: str  # element of the orientation A
    exponent: int  # +1 or -1

    def inv(self, gog=None) -> "EdgeLetter":
        return EdgeLetter(self.edge, -self.exponent)

    def __str__(self):
        return self.edge if self.exponent == 1 else f"{self.edge}^-1"


Letter = Union[VertexLetter, EdgeLetter]


@dataclass(frozen=True)
class GroupWord:
    letters: tuple[Letter, ...]

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def __len__(self):
        return len(self.letters)

    def inverse(self, gog: GraphOfGroups) -> "GroupWord":
        return GroupWord(tuple(l.inv(gog) for l in reversed(self.letters)))

    def __str__(self):
        return " * ".join(str(l) for l in self.letters) if self.letters else "1"


def word(*letters: Letter) -> GroupWord:
    return GroupWord(tuple(letters))


def parse_word(gog: GraphOfGroups, text: str) -> GroupWord:
    """Parse the CLI word syntax: `v:g` vertex elements, `e` / `e^-1`
    stable letters, separated by `*`.  `1` is the empty word."""
    text = text.strip()
    if text in ("", "1"):
        return GroupWord(())
    letters: list[Letter] = []
    for token in text.split("*"):
        token = token.strip()
        if ":" in token:
            v, _, lab = token.partition(":")
            if v not in gog.graph.vertices:
                raise UnknownVertex(v)
            ref = gog.vertex_groups[v]
            if not ref.is_enumerated:
                raise SymbolicGroupInWord(f"vertex group at {v!r} is symbolic")
            if lab not in ref.group.index:
                raise ValueError(f"unknown element {lab!r} of the group at {v!r}")
            letters.append(VertexLetter(v, lab))
        else:
            exp = 1
            if token.endswith("^-1"):
                token, exp = token[:-3], -1
            elif token.endswith("^1"):
                token = token[:-2]
            if token not in gog.orientation.chosen:
                raise UnknownEdge(f"{token!r} is not an edge of the orientation")
            letters.append(EdgeLetter(token, exp))
    return GroupWord(tuple(letters))


# ---------------------------------------------------------------------------
# canonical cosets (addresses of universal-cover vertices and edges)


@dataclass(frozen=True)
class VertexCoset:
    """Canonical address of a cover vertex g.G_v: the reduced,
    transversal-canonical edge path from the base lift, one
    (representative, oriented edge) step at a time."""

    vtype: str
    steps: tuple[tuple[str, str], ...]  # (rep label at step start, oriented edge)

    @property
    def depth(self) -> int:
        return len(self.steps)

    def key(self) -> str:
        toks = []
        for rep, f in self.steps:
            if rep != "1":
                toks.append(rep)
            toks.append(f)
        return ("*".join(toks) if toks else ".") + "@" + self.vtype


@dataclass(frozen=True)
class EdgeCoset:
    """Canonical address of a cover edge g.G_e: the address of its head
    vertex plus the residual coset representative inside the head group."""

    etype: str
    head: VertexCoset
    residual: str

    def key(self) -> str:
        return f"{self.head.key()}|{self.etype}|{self.residual}"


@dataclass(frozen=True)
class NormalForm:
    word: GroupWord
    is_identity: bool

    def key(self) -> str:
        return str(self.word)


class Engine:
    """Rewriting engine for one graph of groups with enumerated groups.

    Holds the fixed transversal data (smallest-index representatives)
    that makes normal forms and coset addresses canonical.
    """

    def __init__(self, gog: GraphOfGroups):
        if not gog.all_enumerated:
            raise SymbolicGroupInWord("word arithmetic needs enumerated groups")
        self.gog = gog
        g = gog.graph
        self.graph = g
        self.base = gog.base_vertex
        self.vgrp = {v: gog.vertex_groups[v].group for v in g.vertices}
        self.image: dict[str, frozenset[int]] = {}
        self.trans: dict[str, Transversal] = {}
        self.cross: dict[str, dict[int, int]] = {}
        for f in g.edges:
            hom = gog.sigma[f]
            assert isinstance(hom, GroupHom)
            back = gog.sigma[g.bar[f]]
            self.image[f] = hom.image_indices()
            self.trans[f] = left_transversal(hom.target, self.image[f])
            self.cross[f] = {hom.images[i]: back.images[i] for i in range(len(hom.source))}
        self.path_to = {v: tree_path(g, gog.tree, self.base, v) for v in g.vertices}
        self._nf_cache: dict = {}

    # -- path words -----------------------------------------------------
    # A path word is (elts, edges): elts[i] is an element index in the
    # group of the i-th vertex along the path, which starts at the base;
    # vertex i+1 is head(edges[i]).

    def _vertex_at(self, i: int, edges: list[str]) -> str:
        return self.base if i == 0 else self.graph.head[edges[i - 1]]

    def _ident_path(self, edges: Iterable[str]) -> tuple[list[int], list[str]]:
        edges = list(edges)
        elts = [self.vgrp[self._vertex_at(i, edges)].id_index for i in range(len(edges) + 1)]
        return elts, edges

    def expand(self, w: GroupWord) -> tuple[list[int], list[str]]:
        """Expand a word into a based loop: each vertex letter becomes a
        tree detour to its vertex, each stable letter t_f the loop
        through f (tree letters need no special case; their loops pinch
        away)."""
        elts = [self.vgrp[self.base].id_index]
        edges: list[str] = []
        for letter in w.letters:
            if isinstance(letter, VertexLetter):
                le, lf = self._letter_path_vertex(letter)
            else:
                le, lf = self._letter_path_edge(letter)
            elts = elts[:-1] + [self._mul_at(len(edges), edges, elts[-1], le[0])] + le[1:]
            edges = edges + lf
        return elts, edges

    def _mul_at(self, i: int, edges: list[str], a: int, b: int) -> int:
        return self.vgrp[self._vertex_at(i, edges)].mul(a, b)

    def _letter_path_vertex(self, letter: VertexLetter):
        v = letter.vertex
        go = self.path_to[v]
        back = [self.graph.bar[f] for f in reversed(go)]
        elts, edges = self._ident_path(go + back)
        elts[len(go)] = self.vgrp[v].index[letter.element]
        return elts, edges

    def _letter_path_edge(self, letter: EdgeLetter):
        f = letter.edge if letter.exponent == 1 else self.graph.bar[letter.edge]
        go = self.path_to[self.graph.tail[f]]
        back = [self.graph.bar[x] for x in reversed(self.path_to[self.graph.head[f]])]
        return self._ident_path(go + [f] + back)

    def _reduce(self, elts: list[int], edges: list[str]):
        """Remove every pinch f . x . bar(f) with x in the head-side edge
        subgroup, carrying x across to the tail side.  Stack-based, so a
        single left-to-right pass suffices."""
        out_e = [elts[0]]
        out_f: list[str] = []
        for f, g in zip(edges, elts[1:]):
            out_f.append(f)
            out_e.append(g)
            while (
                len(out_f) >= 2
                and out_f[-1] == self.graph.bar[out_f[-2]]
                and out_e[-2] in self.image[out_f[-2]]
            ):
                f2 = out_f[-2]
                carried = self.cross[f2][out_e[-2]]
                grp = self.vgrp[self.graph.tail[f2]]
                merged = grp.mul(grp.mul(out_e[-3], carried), out_e[-1])
                del out_f[-2:]
                del out_e[-2:]
                out_e[-1] = merged
        return out_e, out_f

    def _canonicalize(self, elts: list[int], edges: list[str], final: Optional[str]):
        """Left-to-right transversal sweep.  Every element before the
        last becomes its left-coset representative, residues are pushed
        across the next edge;  ``final`` names an edge of A whose
        sigma-image canonicalizes the very last element (None leaves it
        untouched, "drop" kills it, for vertex cosets)."""
        elts = list(elts)
        for i, f in enumerate(edges):
            fb = self.graph.bar[f]
            grp = self.vgrp[self.graph.tail[f]]
            rep = self.trans[fb].rep_of[elts[i]]
            residue = grp.mul(grp.inv(rep), elts[i])
            elts[i] = rep
            pushed = self.cross[fb][residue]
            head_grp = self.vgrp[self.graph.head[f]]
            elts[i + 1] = head_grp.mul(pushed, elts[i + 1])
        if final == "drop":
            elts[-1] = self.vgrp[self._vertex_at(len(edges), edges)].id_index
        elif final is not None:
            elts[-1] = self.trans[final].rep_of[elts[-1]]
        return elts, edges

    # -- normal forms ----------------------------------------------------
    def normal_form(self, w: GroupWord) -> NormalForm:
        key = tuple(w.letters)
        hit = self._nf_cache.get(key)
        if hit is not None:
            return hit
        elts, edges = self._reduce(*self.expand(w))
        elts, edges = self._canonicalize(elts, edges, final=None)
        is_id = not edges and elts[0] == self.vgrp[self.base].id_index
        nf = NormalForm(self._emit(elts, edges), is_id)
        self._nf_cache[key] = nf
        return nf

    def _emit(self, elts: list[int], edges: list[str]) -> GroupWord:
        letters: list[Letter] = []
        for i in range(len(elts)):
            v = self._vertex_at(i, edges)
            if elts[i] != self.vgrp[v].id_index:
                letters.append(VertexLetter(v, self.vgrp[v].labels[elts[i]]))
            if i < len(edges):
                f = edges[i]
                if f not in self.gog.tree:
                    if f in self.gog.orientation:
                        letters.append(EdgeLetter(f, 1))
                    else:
                        letters.append(EdgeLetter(self.graph.bar[f], -1))
        return GroupWord(tuple(letters))

    def is_identity(self, w: GroupWord) -> bool:
        return self.normal_form(w).is_identity

    def equal(self, w1: GroupWord, w2: GroupWord) -> bool:
        return self.is_identity(w1 * w2.inverse(self.gog))

    # -- cosets ----------------------------------------------------------
    def _coset_path(self, vc: VertexCoset, residual: Optional[str] = None):
        """Path word from the base realizing a coset address (with an
        optional final element)."""
        elts: list[int] = []
        edges: list[str] = []
        for rep, f in vc.steps:
            v = self._vertex_at(len(edges), edges)
            elts.append(self.vgrp[v].index[rep])
            edges.append(f)
        end = self._vertex_at(len(edges), edges)
        elts.append(self.vgrp[end].index[residual] if residual else self.vgrp[end].id_index)
        return elts, edges

    def _steps_of(self, elts: list[int], edges: list[str]) -> tuple[tuple[str, str], ...]:
        steps = []
        for i, f in enumerate(edges):
            v = self._vertex_at(i, edges)
            steps.append((self.vgrp[v].labels[elts[i]], f))
        return tuple(steps)

    def _concat(self, a, b):
        """Concatenate path words; the first must end at the base, where
        the second starts."""
        ae, af = a
        be, bf = b
        end = self._vertex_at(len(af), af)
        assert end == self.base, f"path ends at {end!r}, not at the base"
        grp = self.vgrp[end]
        return ae[:-1] + [grp.mul(ae[-1], be[0])] + be[1:], af + bf

    def vertex_coset(self, w: GroupWord, v: str) -> VertexCoset:
        """Canonical address of w . (base lift of v)."""
        self.graph.check_vertex(v)
        path = self._concat(self.expand(w), self._ident_path(self.path_to[v]))
        elts, edges = self._canonicalize(*self._reduce(*path), final="drop")
        return VertexCoset(v, self._steps_of(elts, edges))

    def base_coset(self) -> VertexCoset:
        return VertexCoset(self.base, ())

    def act_vertex(self, w: GroupWord, vc: VertexCoset) -> VertexCoset:
        path = self._concat(self.expand(w), self._coset_path(vc))
        elts, edges = self._canonicalize(*self._reduce(*path), final="drop")
        return VertexCoset(vc.vtype, self._steps_of(elts, edges))

    def extend_vertex(self, vc: VertexCoset, w: GroupWord, v: str) -> VertexCoset:
        """Canonical address of (element of vc's fiber) . w . (lift of v);
        used by ball construction to step to a neighbor."""
        return self.vertex_coset(self.coset_word(vc) * w, v)

    def edge_coset(self, w: GroupWord, e: str) -> EdgeCoset:
        if e not in self.gog.orientation:
            raise UnknownEdge(f"{e!r} is not in the orientation")
        path = self._concat(self.expand(w), self._ident_path(self.path_to[self.graph.head[e]]))
        elts, edges = self._canonicalize(*self._reduce(*path), final=e)
        head = VertexCoset(self.graph.head[e], self._steps_of(elts, edges))
        grp = self.vgrp[self.graph.head[e]]
        return EdgeCoset(e, head, grp.labels[elts[-1]])

    def act_edge(self, w: GroupWord, ec: EdgeCoset) -> EdgeCoset:
        path = self._concat(self.expand(w), self._coset_path(ec.head, ec.residual))
        elts, edges = self._canonicalize(*self._reduce(*path), final=ec.etype)
        head = VertexCoset(ec.head.vtype, self._steps_of(elts, edges))
        grp = self.vgrp[ec.head.vtype]
        return EdgeCoset(ec.etype, head, grp.labels[elts[-1]])

    def extend_edge(self, vc: VertexCoset, w: GroupWord, e: str) -> EdgeCoset:
        """Canonical address of (element of vc's fiber) . w . G_e."""
        return self.edge_coset(self.coset_word(vc) * w, e)

    def coset_word(self, vc: VertexCoset) -> GroupWord:
        """A word representing some element of the coset's fiber (the
        canonical path itself)."""
        return self._emit(*self._coset_path(vc))


def engine_for(gog: GraphOfGroups) -> Engine:
    eng = getattr(gog, "_engine", None)
    if eng is None:
        eng = Engine(gog)
        object.__setattr__(gog, "_engine", eng)
    return eng


# ---------------------------------------------------------------------------
# presentation emission


@dataclass(frozen=True)
class Presentation:
    """Finite presentation of the fundamental group: one symbol per
    non-identity element of each enumerated vertex group (the identity
    is the empty word) plus one stable letter per edge of A."""

    generators: tuple[str, ...]
    relations: tuple[GroupWord, ...]
    killed: tuple[str, ...]  # stable letters of spanning-tree edges
    symbolic: tuple[tuple[str, str], ...] = ()  # (vertex, attached presentation)


def presentation(gog: GraphOfGroups) -> Presentation:
    """Relations in fixed order: multiplication tables (ascending vertex
    id, ascending element-index pairs), conjugation relations (ascending
    edge id in A, ascending edge-group element), tree killings."""
    g = gog.graph
    gens: list[str] = []
    rels: list[GroupWord] = []
    symbolic: list[tuple[str, str]] = []
    for v in g.vertices:
        ref = gog.vertex_groups[v]
        if not ref.is_enumerated:
            if ref.presentation is None:
                raise MissingPresentation(f"symbolic vertex group at {v!r} has no presentation")
            symbolic.append((v, ref.presentation))
            continue
        grp = ref.group
        gens.extend(f"{v}:{lab}" for i, lab in enumerate(grp.labels) if i != grp.id_index)
    for e in sorted(gog.orientation.chosen):
        gens.append(f"t:{e}")

    def velt(v, grp, idx):
        return [] if idx == grp.id_index else [VertexLetter(v, grp.labels[idx])]

    for v in g.vertices:
        ref = gog.vertex_groups[v]
        if not ref.is_enumerated:
            continue
        grp = ref.group
        for i in range(len(grp)):
            if i == grp.id_index:
                continue
            for j in range(len(grp)):
                if j == grp.id_index:
                    continue
                k = grp.mul(i, j)
                letters = velt(v, grp, i) + velt(v, grp, j) + velt(v, grp, grp.inv(k))
                rels.append(GroupWord(tuple(letters)))
    for e in sorted(gog.orientation.chosen):
        ref = gog.edge_groups[e]
        if not ref.is_enumerated:
            raise MissingPresentation(f"symbolic edge group at {e!r}")
        sig, the = gog.sigma[e], gog.theta(e)
        if not (isinstance(sig, GroupHom) and isinstance(the, GroupHom)):
            raise MissingPresentation(f"edge {e!r} lacks explicit monomorphisms")
        hv, tv = g.head[e], g.tail[e]
        hgrp, tgrp = sig.target, the.target
        for x in range(len(ref.group)):
            if x == ref.group.id_index:
                continue
            letters = (
                [EdgeLetter(e, 1)]
                + velt(hv, hgrp, sig.images[x])
                + [EdgeLetter(e, -1)]
                + velt(tv, tgrp, tgrp.inv(the.images[x]))
            )
            rels.append(GroupWord(tuple(letters)))
    killed = tuple(f"t:{e}" for e in sorted(gog.orientation.chosen) if e in gog.tree)
    for e in sorted(gog.orientation.chosen):
        if e in gog.tree:
            rels.append(GroupWord((EdgeLetter(e, 1),)))
    return Presentation(tuple(gens), tuple(rels), killed, tuple(symbolic))


# ---------------------------------------------------------------------------
# public operations


def britton_reduce(gog: GraphOfGroups, w: GroupWord) -> NormalForm:
    """Canonical normal form; the word is trivial iff is_identity."""
    return engine_for(gog).normal_form(w)


def equals(gog: GraphOfGroups, w1: GroupWord, w2: GroupWord) -> bool:
    return engine_for(gog).equal(w1, w2)
