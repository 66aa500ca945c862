"""Fixed-space calculus for boundary representations of large groups of
tree automorphisms.

This module carries the dimension bookkeeping only: for a closed group
acting transitively on the boundary of a (q+1, q'+1)-biregular tree
with one or two vertex orbits, the fixed-space dimensions at a vertex
pair (a, b) and the edge e between them decide every first-cohomology
conclusion through the surjectivity of the two-column map
(constants, weighted constants) -> (functions constant on the two
shadows).  Its determinant is q^{2s} - 1 in the two-orbit case and
q^s - 1 in the one-orbit case (after barycentric subdivision, which the
descriptor pre-encodes).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import BallTooLarge, InvalidDescriptor, WrongClass

TOL = 1e-12

SValue = Union[Fraction, complex, None]


@dataclass(frozen=True)
class RepDescriptor:
    orbit_count: int  # 1 or 2
    q: int  # degree of a is q+1
    rep_class: str  # "trivial" | "spherical" | "special" | "cuspidal"
    q2: Optional[int] = None  # degree of b is q2+1 (defaults to q)
    s: SValue = None  # spherical parameter in ]0,1[ u (1/2 + iR)
    variant: Optional[str] = None  # special only: "unique" | "plus" | "minus"

    @property
    def qb(self) -> int:
        return self.q if self.q2 is None else self.q2


def validate_descriptor(desc: RepDescriptor) -> RepDescriptor:
    if desc.orbit_count not in (1, 2):
        raise InvalidDescriptor("orbit_count must be 1 or 2")
    if desc.q < 1 or desc.qb < 1:
        raise InvalidDescriptor("degrees q+1, q'+1 need q, q' >= 1")
    if desc.rep_class not in ("trivial", "spherical", "special", "cuspidal"):
        raise InvalidDescriptor(f"unknown class {desc.rep_class!r}")
    if desc.rep_class == "special":
        if desc.orbit_count == 2:
            if desc.variant not in (None, "unique"):
                raise InvalidDescriptor("two-orbit special has a unique variant")
        else:
            if desc.variant not in ("plus", "minus"):
                raise InvalidDescriptor("one-orbit special needs variant plus or minus")
    if desc.rep_class == "spherical":
        s = desc.s
        if s is None:
            raise InvalidDescriptor("spherical class needs the parameter s")
        if isinstance(s, Fraction):
            if not (0 < s < 1):
                raise InvalidDescriptor("real s must lie in ]0, 1[")
        elif isinstance(s, complex):
            if abs(s.imag) <= TOL:
                if not (0 < s.real < 1):
                    raise InvalidDescriptor("real s must lie in ]0, 1[")
            elif abs(s.real - 0.5) > TOL:
                raise InvalidDescriptor("complex s must lie on the line 1/2 + iR")
        else:
            raise InvalidDescriptor("s must be a Fraction or complex")
    return desc


def fixed_dims(desc: RepDescriptor) -> tuple[int, int, int]:
    """(dim M^{G_a}, dim M^{G_b}, dim M^{G_e}) for the descriptor."""
    validate_descriptor(desc)
    cls = desc.rep_class
    if cls in ("trivial", "spherical"):
        return (1, 1, 2)
    if cls == "cuspidal":
        return (0, 0, 0)
    if desc.orbit_count == 2:
        return (0, 0, 1)
    return (0, 1, 1) if desc.variant == "plus" else (0, 0, 1)


def _power(q: int, exponent: SValue):
    """q**exponent, exact when the exponent is an integer Fraction."""
    if isinstance(exponent, Fraction) and exponent.denominator == 1:
        return Fraction(q) ** int(exponent), True
    if isinstance(exponent, Fraction):
        exponent = complex(float(exponent))
    return cmath.exp(exponent * cmath.log(q)), False


@dataclass(frozen=True)
class IotaSurjectivity:
    matrix: tuple[tuple[object, object], tuple[object, object]]
    determinant: object
    exact: bool
    surjective: bool


def iota_surjectivity(desc: RepDescriptor) -> IotaSurjectivity:
    """Image of the two fixed lines inside the two-dimensional space of
    shadow-constant functions, in the basis (1 on the a-shadow, 1 on the
    b-shadow): columns (1,1) and (1, q^{2s}) resp. (1, q^s)."""
    validate_descriptor(desc)
    if desc.rep_class not in ("trivial", "spherical"):
        raise WrongClass("iota surjectivity applies to spherical or trivial classes")
    if desc.rep_class == "trivial":
        factor, exact = Fraction(1), True  # s = 0 limit convention
    else:
        exponent = desc.s * 2 if desc.orbit_count == 2 else desc.s
        factor, exact = _power(desc.q, exponent)
    one = Fraction(1) if exact else complex(1.0)
    det = factor - one
    surjective = det != 0 if exact else abs(det) > TOL
    return IotaSurjectivity(((one, one), (one, factor)), det, exact, surjective)


def h1_dim(desc: RepDescriptor) -> int:
    """First-cohomology dimension: 1 exactly for the special class that
    is not spherical for the edge-stabilizer pair, 0 otherwise."""
    validate_descriptor(desc)
    cls = desc.rep_class
    if cls in ("trivial", "cuspidal"):
        return 0
    if cls == "spherical":
        return 0
    if desc.orbit_count == 2:
        return 1  # the unique special representation
    return 0 if desc.variant == "plus" else 1


# ---------------------------------------------------------------------------
# truncated combinatorial shadow model


@dataclass(frozen=True)
class TruncatedReport:
    depth: int
    boundary_size: int
    orbits_stab_a: int
    orbits_stab_e: int
    orbits_stab_b: int
    # (nu_b/nu_a on the b-shadow) / (nu_b/nu_a on the a-shadow); needs
    # depth >= 2 so that both shadows contain genuine cylinders
    ratio: Optional[Fraction]
    ratio_reference: Fraction  # q * q'
    matches_regular_square: Optional[bool]  # ratio == q^2, the q^{2s} base


def truncated_check(q: int, q2: int, depth: int, cap: int = 200000) -> TruncatedReport:
    """Finite shadow model of the boundary: build the biregular ball of
    the given depth around the vertex a (with b its first neighbor),
    partition the boundary sphere into equal-distance-pattern classes
    under the stabilizers of a, e and b, and compute the exact mass
    ratio between the two shadows that the weighted fixed-vector
    relation is built on."""
    if depth < 1:
        raise InvalidDescriptor("depth must be >= 1")
    if q == 1 and q2 == 1:
        raise InvalidDescriptor("degenerate line: no boundary transitivity")
    est = (q + 1) * max(q, q2) ** depth
    if est > cap:
        raise BallTooLarge(f"estimated ball size {est} exceeds cap {cap}")

    # vertices are tuples of child indices from a; () is a, (0,) is b
    def branching(depth_parity: int) -> int:
        return q if depth_parity % 2 == 0 else q2

    def children(node: tuple) -> list[tuple]:
        if node == ():
            return [node + (i,) for i in range(q + 1)]
        return [node + (i,) for i in range(branching(len(node)))]

    levels = [[()]]
    for d in range(depth):
        levels.append([c for nd in levels[-1] for c in children(nd)])
    boundary = levels[depth]
    b = (0,)

    def dist(x: tuple, y: tuple) -> int:
        lcp = 0
        for p, r in zip(x, y):
            if p != r:
                break
            lcp += 1
        return (len(x) - lcp) + (len(y) - lcp)

    da = {x: len(x) for x in boundary}
    db = {x: dist(x, b) for x in boundary}
    orbits_a = len(set(da.values()))
    orbits_e = len(set(zip(da.values(), db.values())))
    orbits_b = len(set(db.values()))

    def mass_from(root: tuple) -> dict[tuple, Fraction]:
        # equal splitting of unit mass at `root` into directions away from it
        masses = {}
        for x in boundary:
            m = Fraction(1)
            # walk the geodesic from root to x, dividing by the number of
            # onward directions at each intermediate vertex
            path = _geodesic_nodes(root, x)
            for i in range(len(path) - 1):
                here = path[i]
                deg = (q + 1) if len(here) % 2 == 0 else (q2 + 1)
                onward = deg if i == 0 else deg - 1
                m /= onward
            masses[x] = m
        return masses

    def _geodesic_nodes(x: tuple, y: tuple) -> list[tuple]:
        lcp = 0
        for p, r in zip(x, y):
            if p != r:
                break
            lcp += 1
        up = [x[:k] for k in range(len(x), lcp - 1, -1)]
        down = [y[:k] for k in range(lcp + 1, len(y) + 1)]
        return up + down

    ratio = None
    if depth >= 2:
        nu_a = mass_from(())
        nu_b = mass_from(b)
        in_b_shadow = {x: (db[x] < da[x]) for x in boundary}
        ratios = {True: set(), False: set()}
        for x in boundary:
            ratios[in_b_shadow[x]].add(nu_b[x] / nu_a[x])
        if len(ratios[True]) != 1 or len(ratios[False]) != 1:
            raise AssertionError("mass ratio is not constant on the shadows")
        ratio = next(iter(ratios[True])) / next(iter(ratios[False]))
    return TruncatedReport(
        depth=depth,
        boundary_size=len(boundary),
        orbits_stab_a=orbits_a,
        orbits_stab_e=orbits_e,
        orbits_stab_b=orbits_b,
        ratio=ratio,
        ratio_reference=Fraction(q * q2),
        matches_regular_square=(ratio == Fraction(q) ** 2) if ratio is not None else None,
    )
