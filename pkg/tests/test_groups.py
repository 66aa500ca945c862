import pytest

from treecoh.errors import CapExceeded, NotASubgroup
from treecoh.groups import (
    FiniteGroup,
    GroupHom,
    HomViolation,
    check_hom,
    closure,
    cyclic_group,
    hom_from_images,
    left_transversal,
    subgroup_as_group,
    subgroup_closure,
    trivial_group,
)


def s3():
    return closure([(1, 0, 2), (1, 2, 0)], name="S3")


def test_closure_orders():
    assert len(closure([(1, 0)])) == 2
    assert len(s3()) == 6
    assert len(cyclic_group(5)) == 5


def test_closure_cap_exceeded():
    with pytest.raises(CapExceeded):
        closure([(1, 2, 3, 4, 0)], cap=3)


def test_closure_labels_deterministic():
    g1, g2 = s3(), s3()
    assert g1.labels == g2.labels
    assert g1.labels[g1.id_index] == "1"


def test_group_axioms_checked():
    with pytest.raises(ValueError):
        FiniteGroup(("1", "x"), ((0, 1), (1, 1)))  # x has no inverse
    # non-associative magma with identity and "inverses"
    with pytest.raises(ValueError):
        FiniteGroup(
            ("e", "a", "b", "c", "d"),
            (
                (0, 1, 2, 3, 4),
                (1, 0, 3, 4, 2),
                (2, 4, 0, 1, 3),
                (3, 2, 4, 0, 1),
                (4, 3, 1, 2, 0),
            ),
        )


def test_check_hom_identity_injective():
    z2 = closure([(1, 0)])
    hom = check_hom({"1": "1", "(1 2)": "(1 2)"}, z2, z2)
    assert isinstance(hom, GroupHom) and hom.injective


def test_check_hom_to_trivial_not_injective():
    z2 = closure([(1, 0)])
    hom = check_hom({"1": "1", "(1 2)": "1"}, z2, trivial_group())
    assert isinstance(hom, GroupHom) and not hom.injective


def test_check_hom_violation_pair():
    z3 = cyclic_group(3)
    gen, gen2 = z3.labels[1], z3.labels[2]
    bad = check_hom({"1": "1", gen: "1", gen2: gen2}, z3, z3)
    assert isinstance(bad, HomViolation)


def test_hom_from_images():
    z3 = cyclic_group(3)
    grp = s3()
    hom = hom_from_images(z3, grp, {z3.labels[1]: "(1 2 3)"})
    assert isinstance(hom, GroupHom) and hom.injective


def test_left_transversal_s3():
    grp = s3()
    h = subgroup_closure(grp, [grp.index["(1 2)"]])
    t = left_transversal(grp, h)
    assert t.index == 3
    # reps partition the group into left cosets
    seen = set()
    for r in t.reps:
        coset = {grp.mul(r, x) for x in h}
        assert not (coset & seen)
        seen |= coset
    assert seen == set(range(6))
    # rep_of constant on each coset gH, idempotent on reps
    for x in range(6):
        for hh in h:
            assert t.rep_of[grp.mul(x, hh)] == t.rep_of[x]
    for r in t.reps:
        assert t.rep_of[r] == r


def test_transversal_extremes():
    grp = s3()
    whole = left_transversal(grp, frozenset(range(6)))
    assert whole.index == 1 and whole.reps == (grp.id_index,)
    triv = left_transversal(grp, frozenset({grp.id_index}))
    assert triv.index == 6


def test_identity_represents_subgroup_coset():
    grp = s3()
    h = subgroup_closure(grp, [grp.index["(1 2 3)"]])
    t = left_transversal(grp, h)
    assert t.rep_of[grp.index["(1 2 3)"]] == grp.id_index


def test_not_a_subgroup():
    grp = s3()
    with pytest.raises(NotASubgroup):
        left_transversal(grp, frozenset({grp.id_index, grp.index["(1 2 3)"]}))


def test_subgroup_as_group_inclusion():
    grp = s3()
    members = subgroup_closure(grp, [grp.index["(1 2 3)"]])
    sub, incl = subgroup_as_group(grp, members)
    assert len(sub) == 3
    assert incl.injective
    for i in range(len(sub)):
        assert grp.labels[incl(i)] == sub.labels[i]


def test_generating_set_generates():
    grp = s3()
    gens = grp.generating_set()
    assert subgroup_closure(grp, gens) == frozenset(range(6))
    assert len(gens) <= 2
