"""Shared test fixtures: corpus loaders and the random-instance factory.

Random instances are built from a finite quotient Q: vertex groups are
subgroups of Q, edge groups are subgroups of G_head whose q-conjugate
lands in G_tail (with q = 1 on spanning-tree edges), and the module is
the permutation action of Q on the cosets of a subgroup, pulled back
through the resulting quotient homomorphism.  Every instance produced
this way is valid by construction, with an orthogonal exact module.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from treecoh import corpus
from treecoh.cohomology import ModuleSpec
from treecoh.documents import parse
from treecoh.gog import Enumerated, Graph, make_gog, spanning_tree, validate
from treecoh.groups import (
    FiniteGroup,
    GroupHom,
    closure,
    left_transversal,
    subgroup_as_group,
    subgroup_closure,
)


def load(name):
    return corpus.load(name)


@pytest.fixture(scope="session")
def dihedral():
    return load("dihedral")


@pytest.fixture(scope="session")
def pslz():
    return load("pslz")


@pytest.fixture(scope="session")
def free2():
    return load("free2")


@pytest.fixture(scope="session")
def z3sd():
    return load("z3-semidirect")


@pytest.fixture(scope="session")
def theta():
    return load("theta")


def _quotient_pool():
    return [
        closure([(1, 0, 2), (1, 2, 0)], name="S3"),
        closure([(1, 2, 3, 4, 5, 0)], name="Z6"),
        closure([(1, 2, 3, 0), (3, 2, 1, 0)], name="D4"),
        closure([(1, 0, 3, 2), (2, 3, 0, 1)], name="V4"),
        closure([(1, 2, 0, 3), (0, 2, 3, 1)], name="A4"),
    ]


QUOTIENTS = _quotient_pool()


def random_instance(rng: random.Random, max_vertices=4, dim_cap=8, max_extra_edges=2):
    """A valid graph of groups with an orthogonal permutation module.
    Returns (gog, spec, data) where data records the quotient maps."""
    q = rng.choice(QUOTIENTS)
    nv = rng.randint(1, max_vertices)
    vertices = [f"v{i}" for i in range(nv)]
    pairs = []
    eid = 0
    for i in range(1, nv):
        j = rng.randrange(i)
        pairs.append((f"e{eid}", f"v{j}", f"v{i}"))
        eid += 1
    for _ in range(rng.randint(0, max_extra_edges)):
        i, j = rng.randrange(nv), rng.randrange(nv)
        pairs.append((f"e{eid}", f"v{i}", f"v{j}"))
        eid += 1
    graph = Graph.from_pairs(vertices, pairs)
    tree = spanning_tree(graph)

    members = {}
    for v in vertices:
        gens = [rng.randrange(len(q)) for _ in range(rng.randint(0, 2))]
        members[v] = subgroup_closure(q, gens)
    vrefs = {}
    for v in vertices:
        sub, _ = subgroup_as_group(q, members[v], name=f"G{v}")
        vrefs[v] = Enumerated(sub)

    erefs, sigma, qmap = {}, {}, {}
    for eid_, tv, hv in pairs:
        q_e = q.id_index if eid_ in tree.edge_ids else rng.randrange(len(q))
        qmap[eid_] = q_e
        allowed = [
            x for x in sorted(members[hv])
            if q.mul(q.mul(q_e, x), q.inv(q_e)) in members[tv]
        ]
        hgens = [rng.choice(allowed) for _ in range(rng.randint(0, 2))] if allowed else []
        esub_members = subgroup_closure(q, hgens)
        esub, _ = subgroup_as_group(q, esub_members, name=f"H{eid_}")
        ref = Enumerated(esub)
        rid = eid_ + "~"
        erefs[eid_] = ref
        erefs[rid] = ref
        head_grp, tail_grp = vrefs[hv].group, vrefs[tv].group
        sigma[eid_] = GroupHom(
            esub, head_grp, tuple(head_grp.index[esub.labels[i]] for i in range(len(esub)))
        )
        the_images = []
        for i in range(len(esub)):
            x = q.index[esub.labels[i]]
            y = q.mul(q.mul(q_e, x), q.inv(q_e))
            the_images.append(tail_grp.index[q.labels[y]])
        sigma[rid] = GroupHom(esub, tail_grp, tuple(the_images))

    gog = make_gog(graph, vrefs, erefs, sigma, tree=tree)
    assert validate(gog).valid

    # permutation module on the cosets of a random subgroup of Q
    while True:
        kgens = [rng.randrange(len(q)) for _ in range(rng.randint(0, 2))]
        k = subgroup_closure(q, kgens)
        if len(q) // len(k) <= dim_cap:
            break
    trans = left_transversal(q, k)
    pos = {r: i for i, r in enumerate(trans.reps)}
    dim = len(trans.reps)

    def coset_matrix(gidx):
        m = [[Fraction(0)] * dim for _ in range(dim)]
        for j, r in enumerate(trans.reps):
            m[pos[trans.rep_of[q.mul(gidx, r)]]][j] = Fraction(1)
        return m

    assign = {}
    for v in vertices:
        grp = vrefs[v].group
        for i, lab in enumerate(grp.labels):
            if i != grp.id_index:
                assign[f"{v}:{lab}"] = coset_matrix(q.index[lab])
    for eid_, _, _ in pairs:
        assign[f"t:{eid_}"] = coset_matrix(qmap[eid_])
    spec = ModuleSpec(gog, dim, assign, orthogonal=True)
    return gog, spec, {"quotient": q, "qmap": qmap, "coset_dim": dim}


def random_word(rng: random.Random, gog, max_len=8):
    """Random word over vertex elements and stable letters."""
    from treecoh.words import EdgeLetter, GroupWord, VertexLetter

    alphabet = []
    for v in gog.graph.vertices:
        grp = gog.vertex_groups[v].group
        for i, lab in enumerate(grp.labels):
            if i != grp.id_index:
                alphabet.append(VertexLetter(v, lab))
    for e in sorted(gog.orientation.chosen):
        alphabet.append(EdgeLetter(e, 1))
        alphabet.append(EdgeLetter(e, -1))
    length = rng.randint(0, max_len)
    return GroupWord(tuple(rng.choice(alphabet) for _ in range(length)))
