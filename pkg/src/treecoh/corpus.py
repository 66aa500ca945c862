"""Bundled worked examples, one input document per instance.

Enumerated instances carry a finite-quotient permutation module
(pullback of the left-regular representation of a finite quotient of
the fundamental group); these double as word-problem oracles, since a
word maps to the identity matrix exactly when its quotient image is
trivial.
"""

from __future__ import annotations

from .documents import Document, parse
from .errors import UnknownExample
from .groups import FiniteGroup, closure

EXAMPLE_NAMES = (
    "dihedral",
    "pslz",
    "free2",
    "bs-amalgam",
    "higman-shape",
    "z3-semidirect",
    "theta",
)


def _left_mult_matrix(q: FiniteGroup, lab: str) -> list[list[int]]:
    g = q.index[lab]
    n = len(q)
    m = [[0] * n for _ in range(n)]
    for j in range(n):
        m[q.mul(g, j)][j] = 1
    return m


def _regular_module(q: FiniteGroup, assign_labels: dict[str, str]) -> dict:
    return {
        "dim": len(q),
        "orthogonal": True,
        "assign": {key: _left_mult_matrix(q, lab) for key, lab in assign_labels.items()},
    }


def _s3() -> FiniteGroup:
    return closure([(1, 0, 2), (1, 2, 0)], name="S3")


def _klein() -> FiniteGroup:
    return closure([(1, 0, 2, 3), (0, 1, 3, 2)], name="V4")


def _dihedral() -> dict:
    v4 = _klein()
    return {
        "schema_version": 1,
        "groups": {
            "Z2a": {"kind": "perm", "points": 2, "gens": [[2, 1]]},
            "Z2b": {"kind": "perm", "points": 2, "gens": [[2, 1]]},
            "T": {"kind": "table", "elements": ["1"], "mul": [[0]]},
        },
        "graph": {
            "vertices": {"va": "Z2a", "vb": "Z2b"},
            "edges": [
                {
                    "id": "e1",
                    "tail": "va",
                    "head": "vb",
                    "group": "T",
                    "sigma_head": {"1": "1"},
                    "sigma_tail": {"1": "1"},
                }
            ],
        },
        "modules": {
            "regular": _regular_module(
                v4, {"va:(1 2)": "(1 2)", "vb:(1 2)": "(3 4)", "t:e1": "1"}
            ),
            "trivial": {"dim": 1, "orthogonal": True, "assign": {
                "va:(1 2)": [[1]], "vb:(1 2)": [[1]], "t:e1": [[1]]}},
        },
    }


def _pslz() -> dict:
    s3 = _s3()
    return {
        "schema_version": 1,
        "groups": {
            "Z2": {"kind": "perm", "points": 2, "gens": [[2, 1]]},
            "Z3": {"kind": "perm", "points": 3, "gens": [[2, 3, 1]]},
            "T": {"kind": "table", "elements": ["1"], "mul": [[0]]},
        },
        "graph": {
            "vertices": {"va": "Z2", "vb": "Z3"},
            "edges": [
                {
                    "id": "e1",
                    "tail": "va",
                    "head": "vb",
                    "group": "T",
                    "sigma_head": {"1": "1"},
                    "sigma_tail": {"1": "1"},
                }
            ],
        },
        "modules": {
            "regular": _regular_module(
                s3,
                {
                    "va:(1 2)": "(1 2)",
                    "vb:(1 2 3)": "(1 2 3)",
                    "vb:(1 3 2)": "(1 3 2)",
                    "t:e1": "1",
                },
            )
        },
    }


def _free2() -> dict:
    s3 = _s3()
    return {
        "schema_version": 1,
        "groups": {"T": {"kind": "table", "elements": ["1"], "mul": [[0]]}},
        "graph": {
            "vertices": {"v": "T"},
            "edges": [
                {
                    "id": "e1",
                    "tail": "v",
                    "head": "v",
                    "group": "T",
                    "sigma_head": {"1": "1"},
                    "sigma_tail": {"1": "1"},
                },
                {
                    "id": "e2",
                    "tail": "v",
                    "head": "v",
                    "group": "T",
                    "sigma_head": {"1": "1"},
                    "sigma_tail": {"1": "1"},
                },
            ],
        },
        "modules": {
            "regular": _regular_module(s3, {"t:e1": "(1 2)", "t:e2": "(1 2 3)"}),
            "trivial": {"dim": 1, "orthogonal": True, "assign": {"t:e1": [[1]], "t:e2": [[1]]}},
        },
    }


def _bs_amalgam() -> dict:
    solvable = {
        "kind": "symbolic",
        "cardinality": "infinite",
        "flags": {"beta1_zero": True, "amenable": True},
    }
    return {
        "schema_version": 1,
        "groups": {"BSa": dict(solvable), "BSb": dict(solvable), "Z": dict(solvable)},
        "graph": {
            "vertices": {"va": "BSa", "vb": "BSb"},
            "edges": [{"id": "e1", "tail": "va", "head": "vb", "group": "Z"}],
        },
        "assertions": {"edge_indices": {"e1": {"head": "infinite", "tail": "infinite"}}},
    }


def _higman_shape() -> dict:
    hflags = {
        "kind": "symbolic",
        "cardinality": "infinite",
        "flags": {"beta1_zero": True},
        "betti": {"1": "0", "2": "0", "3": "0", "4": "0"},
    }
    return {
        "schema_version": 1,
        "groups": {
            "Ha": dict(hflags),
            "Hb": dict(hflags),
            "F2": {
                "kind": "symbolic",
                "cardinality": "infinite",
                "betti": {"1": "1", "2": "0", "3": "0"},
            },
        },
        "graph": {
            "vertices": {"va": "Ha", "vb": "Hb"},
            "edges": [{"id": "e1", "tail": "va", "head": "vb", "group": "F2"}],
        },
        "assertions": {"edge_indices": {"e1": {"head": "infinite", "tail": "infinite"}}},
    }


def _z3_semidirect() -> dict:
    s3 = _s3()
    return {
        "schema_version": 1,
        "groups": {
            "Z3": {"kind": "perm", "points": 3, "gens": [[2, 3, 1]]},
            "Z3e": {"kind": "perm", "points": 3, "gens": [[2, 3, 1]]},
        },
        "graph": {
            "vertices": {"v": "Z3"},
            "edges": [
                {
                    "id": "e1",
                    "tail": "v",
                    "head": "v",
                    "group": "Z3e",
                    "sigma_head": "inclusion",
                    "sigma_tail": {
                        "1": "1",
                        "(1 2 3)": "(1 3 2)",
                        "(1 3 2)": "(1 2 3)",
                    },
                }
            ],
        },
        "modules": {
            "regular": _regular_module(
                s3,
                {
                    "v:(1 2 3)": "(1 2 3)",
                    "v:(1 3 2)": "(1 3 2)",
                    "t:e1": "(1 2)",
                },
            )
        },
    }


def _theta() -> dict:
    s3 = _s3()
    edges = [
        {
            "id": eid,
            "tail": "va",
            "head": "vb",
            "group": "T",
            "sigma_head": {"1": "1"},
            "sigma_tail": {"1": "1"},
        }
        for eid in ("e1", "e2", "e3")
    ]
    return {
        "schema_version": 1,
        "groups": {
            "Ta": {"kind": "table", "elements": ["1"], "mul": [[0]]},
            "Tb": {"kind": "table", "elements": ["1"], "mul": [[0]]},
            "T": {"kind": "table", "elements": ["1"], "mul": [[0]]},
        },
        "graph": {"vertices": {"va": "Ta", "vb": "Tb"}, "edges": edges},
        "modules": {
            "regular": _regular_module(
                s3, {"t:e1": "1", "t:e2": "(1 2)", "t:e3": "(1 2 3)"}
            )
        },
    }


_BUILDERS = {
    "dihedral": _dihedral,
    "pslz": _pslz,
    "free2": _free2,
    "bs-amalgam": _bs_amalgam,
    "higman-shape": _higman_shape,
    "z3-semidirect": _z3_semidirect,
    "theta": _theta,
}


def document(name: str) -> dict:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise UnknownExample(f"no bundled example {name!r}; known: {', '.join(EXAMPLE_NAMES)}")


def load(name: str) -> Document:
    return parse(document(name))


ENUMERATED_NAMES = ("dihedral", "pslz", "free2", "z3-semidirect", "theta")
