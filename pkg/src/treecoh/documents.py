"""Input documents: one JSON-compatible dict per instance.

Sections: ``groups``, ``graph``, optional ``orientation``,
``spanning_tree``, ``base_vertex``, ``modules``, ``assertions``.  A
``schema_version`` field is required.  Unknown keys are rejected
everywhere.  Rational scalars travel as strings "p/q" (plain integers
are accepted on input).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping

from .errors import DocumentError
from .gog import (
    INFINITE,
    Enumerated,
    Graph,
    GraphOfGroups,
    GroupHom,
    Orientation,
    SpanningTree,
    Symbolic,
    SymbolicEmbedding,
    bar_name,
    make_gog,
    spanning_tree,
)
from .groups import FiniteGroup, check_hom, closure, perm_from_oneline

SCHEMA_VERSION = 1


def parse_rational(x) -> Fraction:
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise DocumentError(f"bad rational {x!r}") from exc
    raise DocumentError(f"bad rational {x!r}")


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def _reject_unknown(section: Mapping, allowed: set[str], where: str):
    unknown = set(section) - allowed
    if unknown:
        raise DocumentError(f"unknown key(s) {sorted(unknown)} in {where}")


def _parse_cardinality(x):
    if x == "infinite":
        return INFINITE
    if isinstance(x, int) and x >= 1:
        return x
    raise DocumentError(f"bad cardinality {x!r}")


def _parse_group(name: str, spec: Mapping) -> tuple[Any, dict]:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise DocumentError(f"group {name!r}: missing kind")
    kind = spec["kind"]
    if kind == "perm":
        _reject_unknown(spec, {"kind", "points", "gens"}, f"group {name!r}")
        points = spec.get("points")
        gens = [perm_from_oneline(g, points) for g in spec.get("gens", [])]
        return Enumerated(closure(gens, name=name)), spec
    if kind == "table":
        _reject_unknown(spec, {"kind", "elements", "mul"}, f"group {name!r}")
        return Enumerated(FiniteGroup(spec["elements"], spec["mul"], name=name)), spec
    if kind == "symbolic":
        _reject_unknown(
            spec, {"kind", "cardinality", "flags", "betti", "presentation"}, f"group {name!r}"
        )
        flags = spec.get("flags", {})
        _reject_unknown(flags, {"beta1_zero", "amenable", "property_t"}, f"group {name!r} flags")
        betti = spec.get("betti")
        table = (
            {int(k): parse_rational(v) for k, v in betti.items()} if betti is not None else None
        )
        return (
            Symbolic(
                name=name,
                cardinality=_parse_cardinality(spec.get("cardinality", "infinite")),
                beta1_zero=bool(flags.get("beta1_zero", False)),
                amenable=bool(flags.get("amenable", False)),
                property_t=bool(flags.get("property_t", False)),
                presentation=spec.get("presentation"),
                betti_table=table,
            ),
            spec,
        )
    raise DocumentError(f"group {name!r}: unknown kind {kind!r}")


def _parse_map(mapspec, source: FiniteGroup, target: FiniteGroup, where: str) -> GroupHom:
    if mapspec == "inclusion":
        mapping = {lab: lab for lab in source.labels}
    elif isinstance(mapspec, dict):
        mapping = dict(mapspec)
    else:
        raise DocumentError(f"{where}: bad map spec {mapspec!r}")
    try:
        got = check_hom(mapping, source, target)
    except ValueError as exc:
        raise DocumentError(f"{where}: {exc}") from exc
    if not isinstance(got, GroupHom):
        raise DocumentError(f"{where}: not a homomorphism at pair ({got.x}, {got.y})")
    return got


@dataclass
class Document:
    gog: GraphOfGroups
    modules: dict[str, dict]  # raw module specs, parsed downstream
    raw: dict  # normalized document


def parse(doc: Mapping) -> Document:
    if not isinstance(doc, dict):
        raise DocumentError("document must be an object")
    _reject_unknown(
        doc,
        {
            "schema_version",
            "groups",
            "graph",
            "orientation",
            "spanning_tree",
            "base_vertex",
            "modules",
            "assertions",
        },
        "document",
    )
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise DocumentError(f"schema_version must be {SCHEMA_VERSION}")
    for required in ("groups", "graph"):
        if required not in doc:
            raise DocumentError(f"missing section {required!r}")

    refs = {}
    for name, spec in doc["groups"].items():
        refs[name], _ = _parse_group(name, spec)

    gsec = doc["graph"]
    _reject_unknown(gsec, {"vertices", "edges"}, "graph")
    vmap = gsec.get("vertices")
    if not isinstance(vmap, dict) or not vmap:
        raise DocumentError("graph.vertices must map vertex ids to group names")
    for v, gname in vmap.items():
        if gname not in refs:
            raise DocumentError(f"vertex {v!r} references unknown group {gname!r}")

    assertions = doc.get("assertions", {})
    _reject_unknown(assertions, {"edge_indices"}, "assertions")
    idx_assert = assertions.get("edge_indices", {})

    pairs = []
    edge_groups = {}
    sigma = {}
    for espec in gsec.get("edges", []):
        _reject_unknown(
            espec, {"id", "tail", "head", "group", "sigma_head", "sigma_tail"}, "edge"
        )
        eid, tv, hv = espec["id"], espec["tail"], espec["head"]
        if tv not in vmap or hv not in vmap:
            raise DocumentError(f"edge {eid!r}: unknown endpoint")
        gname = espec["group"]
        if gname not in refs:
            raise DocumentError(f"edge {eid!r}: unknown group {gname!r}")
        pairs.append((eid, tv, hv))
        ref = refs[gname]
        rid = bar_name(eid)
        edge_groups[eid] = ref
        edge_groups[rid] = ref
        head_ref, tail_ref = refs[vmap[hv]], refs[vmap[tv]]
        ea = idx_assert.get(eid, {})
        _reject_unknown(ea, {"head", "tail"}, f"assertions for edge {eid!r}")

        def eindex(side):
            val = ea.get(side)
            return _parse_cardinality(val) if val is not None else None

        if ref.is_enumerated and head_ref.is_enumerated and "sigma_head" in espec:
            sigma[eid] = _parse_map(
                espec["sigma_head"], ref.group, head_ref.group, f"edge {eid!r} sigma_head"
            )
        else:
            sigma[eid] = SymbolicEmbedding(eindex("head"))
        if ref.is_enumerated and tail_ref.is_enumerated and "sigma_tail" in espec:
            sigma[rid] = _parse_map(
                espec["sigma_tail"], ref.group, tail_ref.group, f"edge {eid!r} sigma_tail"
            )
        else:
            sigma[rid] = SymbolicEmbedding(eindex("tail"))

    graph = Graph.from_pairs(list(vmap), pairs)
    vertex_groups = {v: refs[gname] for v, gname in vmap.items()}

    orientation = None
    if "orientation" in doc:
        orientation = Orientation(tuple(sorted(doc["orientation"])))
    tree = None
    if "spanning_tree" in doc:
        ids = set()
        for e in doc["spanning_tree"]:
            if e not in graph.bar:
                raise DocumentError(f"spanning_tree references unknown edge {e!r}")
            ids.add(e)
            ids.add(graph.bar[e])
        tree = SpanningTree(frozenset(ids))
    base = doc.get("base_vertex")
    if base is not None and base not in graph.vertices:
        raise DocumentError(f"base_vertex {base!r} not in graph")

    gog = make_gog(graph, vertex_groups, edge_groups, sigma, orientation, tree, base)

    modules = doc.get("modules", {})
    if not isinstance(modules, dict):
        raise DocumentError("modules must be an object")

    normalized = dict(doc)
    normalized.setdefault("orientation", sorted(gog.orientation.chosen))
    normalized.setdefault(
        "spanning_tree", sorted(e for e in gog.tree.edge_ids if e in gog.orientation.chosen)
    )
    normalized.setdefault("base_vertex", gog.base_vertex)
    return Document(gog=gog, modules=dict(modules), raw=normalized)


def serialize(document: Document) -> dict:
    return document.raw


def to_document(gog: GraphOfGroups) -> dict:
    """Serialize a graph of groups back into a normalized document.
    Enumerated groups are emitted as tables, symbolic ones with their
    assertions; module sections do not survive this direction."""
    groups: dict[str, dict] = {}
    names: dict[int, str] = {}

    def name_of(ref) -> str:
        if id(ref) in names:
            return names[id(ref)]
        if ref.is_enumerated:
            grp = ref.group
            base = grp.name or "G"
            name = base
            k = 2
            while name in groups:
                name, k = f"{base}{k}", k + 1
            groups[name] = {
                "kind": "table",
                "elements": list(grp.labels),
                "mul": [list(row) for row in grp.table],
            }
        else:
            base = ref.name or "S"
            name = base
            k = 2
            while name in groups:
                name, k = f"{base}{k}", k + 1
            spec: dict = {
                "kind": "symbolic",
                "cardinality": "infinite" if ref.cardinality == INFINITE else int(ref.cardinality),
            }
            flags = {}
            if ref.beta1_zero:
                flags["beta1_zero"] = True
            if ref.amenable:
                flags["amenable"] = True
            if ref.property_t:
                flags["property_t"] = True
            if flags:
                spec["flags"] = flags
            if ref.betti_table:
                spec["betti"] = {str(k): format_rational(v) for k, v in sorted(ref.betti_table.items())}
            if ref.presentation:
                spec["presentation"] = ref.presentation
            groups[name] = spec
        names[id(ref)] = name
        return name

    vertices = {v: name_of(gog.vertex_groups[v]) for v in gog.graph.vertices}
    edges = []
    indices: dict[str, dict] = {}
    for e in sorted(gog.orientation.chosen):
        espec: dict = {
            "id": e,
            "tail": gog.graph.tail[e],
            "head": gog.graph.head[e],
            "group": name_of(gog.edge_groups[e]),
        }
        sig, the = gog.sigma[e], gog.theta(e)
        if isinstance(sig, GroupHom):
            espec["sigma_head"] = {
                sig.source.labels[i]: sig.target.labels[j] for i, j in enumerate(sig.images)
            }
        elif sig.index is not None:
            indices.setdefault(e, {})["head"] = (
                "infinite" if sig.index == INFINITE else int(sig.index)
            )
        if isinstance(the, GroupHom):
            espec["sigma_tail"] = {
                the.source.labels[i]: the.target.labels[j] for i, j in enumerate(the.images)
            }
        elif the.index is not None:
            indices.setdefault(e, {})["tail"] = (
                "infinite" if the.index == INFINITE else int(the.index)
            )
        edges.append(espec)
    doc: dict = {
        "schema_version": SCHEMA_VERSION,
        "groups": groups,
        "graph": {"vertices": vertices, "edges": edges},
        "orientation": sorted(gog.orientation.chosen),
        "spanning_tree": sorted(e for e in gog.tree.edge_ids if e in gog.orientation.chosen),
        "base_vertex": gog.base_vertex,
    }
    if indices:
        doc["assertions"] = {"edge_indices": indices}
    return doc


def loads(text: str) -> Document:
    import json

    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    return parse(data)


def load_path(path: str) -> Document:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise DocumentError(f"cannot read {path!r}: {exc}") from exc
