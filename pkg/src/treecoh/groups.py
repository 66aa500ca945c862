"""Finite groups as fully enumerated multiplication structures.

Groups are stored with a complete element list and total multiplication,
which is what Britton rewriting, transversals and fixed-space
computations downstream need.  The default element cap keeps everything
at desk scale; override with the TREECOH_ELEMENT_CAP environment
variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import CapExceeded, NotASubgroup

DEFAULT_CAP = 5000


def element_cap() -> int:
    return int(os.environ.get("TREECOH_ELEMENT_CAP", DEFAULT_CAP))


Perm = tuple[int, ...]  # images of 0..n-1


def perm_mul(p: Perm, q: Perm) -> Perm:
    """Composition acting left-to-right: (p*q)(x) = q(p(x))."""
    return tuple(q[p[i]] for i in range(len(p)))


def perm_inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def perm_from_oneline(images: list[int], points: int) -> Perm:
    """Parse a 1-based one-line image list, e.g. [2, 1] for a swap."""
    if sorted(images) != list(range(1, points + 1)):
        raise ValueError(f"not a permutation of 1..{points}: {images}")
    return tuple(i - 1 for i in images)


def perm_label(p: Perm) -> str:
    """Cycle-notation label; identity is '1'. Points are printed 1-based."""
    seen = [False] * len(p)
    parts = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = p[j]
        sep = "," if len(p) > 9 else " "
        parts.append("(" + sep.join(str(k + 1) for k in cyc) + ")")
    return "".join(parts) if parts else "1"


class FiniteGroup:
    """Enumerated finite group: labeled elements, total mul, inverses.

    Associativity, identity and inverses are verified at construction.
    For permutation-generated groups associativity is inherited from
    composition; for raw tables it is checked via Light's test against a
    computed generating set (equivalent to the full triple check).
    """

    def __init__(self, labels, table, perms=None, name="G", _assoc_ok=False):
        self.name = name
        self.labels = tuple(labels)
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self.index) != len(self.labels):
            raise ValueError("duplicate element labels")
        self.table = tuple(tuple(row) for row in table)
        self.perms = tuple(perms) if perms is not None else None
        n = len(self.labels)
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise ValueError("multiplication table is not square")
        self.id_index = self._find_identity()
        self.inverse = self._find_inverses()
        if not _assoc_ok:
            self._check_associativity()

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return f"FiniteGroup({self.name}, order {len(self)})"

    def _find_identity(self) -> int:
        n = len(self.labels)
        for e in range(n):
            if all(self.table[e][x] == x and self.table[x][e] == x for x in range(n)):
                return e
        raise ValueError("no identity element")

    def _find_inverses(self):
        n = len(self.labels)
        inv = [None] * n
        for x in range(n):
            for y in range(n):
                if self.table[x][y] == self.id_index and self.table[y][x] == self.id_index:
                    inv[x] = y
                    break
            if inv[x] is None:
                raise ValueError(f"element {self.labels[x]!r} has no inverse")
        return tuple(inv)

    def _check_associativity(self):
        n = len(self.labels)
        if n <= 64:
            for a in range(n):
                for b in range(n):
                    ab = self.table[a][b]
                    for c in range(n):
                        if self.table[ab][c] != self.table[a][self.table[b][c]]:
                            raise ValueError("multiplication table is not associative")
            return
        # Light's test: associativity on all pairs against a generating set.
        gens = self._greedy_generators()
        for s in gens:
            for a in range(n):
                as_ = self.table[a][s]
                for b in range(n):
                    if self.table[self.table[b][a]][s] != self.table[b][as_]:
                        raise ValueError("multiplication table is not associative")

    def _greedy_generators(self) -> list[int]:
        gens: list[int] = []
        closed = {self.id_index}
        for x in range(len(self.labels)):
            if x not in closed:
                gens.append(x)
                closed = _closure_indices(self, closed | {x})
        return gens

    def generating_set(self) -> list[int]:
        """Small generating set, ascending-index greedy (deterministic)."""
        return self._greedy_generators()

    # -- basic arithmetic on indices ------------------------------------
    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        return self.inverse[i]

    def mul_many(self, indices) -> int:
        out = self.id_index
        for i in indices:
            out = self.table[out][i]
        return out

    def order_of(self, i: int) -> int:
        k, x = 1, i
        while x != self.id_index:
            x = self.table[x][i]
            k += 1
        return k


def _closure_indices(g: FiniteGroup, seed) -> set[int]:
    out = set(seed) | {g.id_index}
    frontier = list(out)
    while frontier:
        x = frontier.pop()
        for s in list(out):
            for y in (g.mul(x, s), g.mul(s, x)):
                if y not in out:
                    out.add(y)
                    frontier.append(y)
    return out


def closure(gens: list[Perm], cap: int | None = None, name="G") -> FiniteGroup:
    """Enumerate the permutation group generated by ``gens``.

    Elements are discovered breadth-first (identity first, then products
    in generator order), which fixes the canonical labeling.
    """
    cap = cap if cap is not None else element_cap()
    if cap < 1:
        raise ValueError("cap must be at least 1")
    npoints = len(gens[0]) if gens else 1
    for p in gens:
        if len(p) != npoints:
            raise ValueError("generators act on different point sets")
    ident = tuple(range(npoints))
    elements: list[Perm] = [ident]
    seen = {ident: 0}
    queue = [ident]
    while queue:
        p = queue.pop(0)
        for s in gens:
            q = perm_mul(p, s)
            if q not in seen:
                if len(elements) + 1 > cap:
                    raise CapExceeded(f"group closure exceeded cap {cap}")
                seen[q] = len(elements)
                elements.append(q)
                queue.append(q)
    labels = [perm_label(p) for p in elements]
    if len(set(labels)) != len(labels):  # distinct perms, same cycle string: impossible
        raise ValueError("ambiguous permutation labels")
    table = [[seen[perm_mul(p, q)] for q in elements] for p in elements]
    return FiniteGroup(labels, table, perms=elements, name=name, _assoc_ok=True)


def trivial_group(name="1") -> FiniteGroup:
    return FiniteGroup(("1",), ((0,),), name=name, _assoc_ok=True)


def cyclic_group(n: int, name=None) -> FiniteGroup:
    return closure([tuple(list(range(1, n)) + [0])], name=name or f"Z{n}")


@dataclass(frozen=True)
class HomViolation:
    """First pair witnessing failure of the homomorphism equation."""

    x: str
    y: str
    expected: str
    got: str


@dataclass(frozen=True)
class GroupHom:
    source: FiniteGroup
    target: FiniteGroup
    images: tuple[int, ...]  # source index -> target index

    def __call__(self, i: int) -> int:
        return self.images[i]

    def apply_label(self, lab: str) -> str:
        return self.target.labels[self.images[self.source.index[lab]]]

    @property
    def injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    @property
    def surjective(self) -> bool:
        return len(set(self.images)) == len(self.target)

    def image_indices(self) -> frozenset[int]:
        return frozenset(self.images)

    def preimage(self, j: int) -> int:
        """Preimage of a target index; only valid for injective maps."""
        return self.images.index(j)


def check_hom(mapping: dict[str, str], source: FiniteGroup, target: FiniteGroup):
    """Verify a candidate map on all pairs; return GroupHom or the first
    violating pair as HomViolation (violations are data, not errors)."""
    images = []
    for lab in source.labels:
        if lab not in mapping:
            raise ValueError(f"map not total: missing {lab!r}")
        out = mapping[lab]
        if out not in target.index:
            raise ValueError(f"image {out!r} not in target group")
        images.append(target.index[out])
    images = tuple(images)
    for x in range(len(source)):
        for y in range(len(source)):
            lhs = images[source.mul(x, y)]
            rhs = target.mul(images[x], images[y])
            if lhs != rhs:
                return HomViolation(
                    x=source.labels[x],
                    y=source.labels[y],
                    expected=target.labels[lhs],
                    got=target.labels[rhs],
                )
    return GroupHom(source, target, images)


def identity_hom(g: FiniteGroup) -> GroupHom:
    return GroupHom(g, g, tuple(range(len(g))))


def hom_from_images(source: FiniteGroup, target: FiniteGroup, gen_images: dict[str, str]):
    """Build the full element map from images of a generating set by
    BFS through products; returns check_hom's verdict on the result."""
    mapping = {source.labels[source.id_index]: target.labels[target.id_index]}
    frontier = [source.id_index]
    img = {source.id_index: target.id_index}
    gens = {source.index[k]: target.index[v] for k, v in gen_images.items()}
    while frontier:
        x = frontier.pop(0)
        for s, t in gens.items():
            y = source.mul(x, s)
            if y not in img:
                img[y] = target.mul(img[x], t)
                frontier.append(y)
    if len(img) != len(source):
        raise ValueError("gen_images do not generate the source group")
    return check_hom({source.labels[i]: target.labels[j] for i, j in img.items()}, source, target)


def verify_subgroup(g: FiniteGroup, members: frozenset[int]):
    if g.id_index not in members:
        raise NotASubgroup("identity not in subgroup")
    for x in members:
        if g.inv(x) not in members:
            raise NotASubgroup(f"not closed under inverse at {g.labels[x]!r}")
        for y in members:
            if g.mul(x, y) not in members:
                raise NotASubgroup(
                    f"not closed under product at {g.labels[x]!r}*{g.labels[y]!r}"
                )


@dataclass(frozen=True)
class Transversal:
    """Left-coset (gH) transversal with the smallest-index representative
    of each coset; rep_of is constant on each coset gH."""

    group: FiniteGroup
    subgroup: frozenset[int]
    reps: tuple[int, ...]
    rep_of: tuple[int, ...]  # element index -> representative index

    @property
    def index(self) -> int:
        return len(self.reps)


def left_transversal(g: FiniteGroup, subgroup: frozenset[int]) -> Transversal:
    verify_subgroup(g, subgroup)
    rep_of = [None] * len(g)
    reps = []
    for x in range(len(g)):
        if rep_of[x] is None:
            reps.append(x)
            for h in subgroup:
                rep_of[g.mul(x, h)] = x
    return Transversal(g, subgroup, tuple(reps), tuple(rep_of))


def subgroup_closure(g: FiniteGroup, gens: list[int]) -> frozenset[int]:
    return frozenset(_closure_indices(g, set(gens)))


def subgroup_as_group(g: FiniteGroup, members: frozenset[int], name="H") -> tuple[FiniteGroup, GroupHom]:
    """Package a verified subgroup as its own FiniteGroup together with
    the inclusion hom.  Element labels are inherited from the parent."""
    verify_subgroup(g, members)
    idx = sorted(members)
    pos = {x: i for i, x in enumerate(idx)}
    labels = [g.labels[x] for x in idx]
    table = [[pos[g.mul(x, y)] for y in idx] for x in idx]
    sub = FiniteGroup(labels, table, name=name, _assoc_ok=True)
    incl = GroupHom(sub, g, tuple(idx))
    return sub, incl
