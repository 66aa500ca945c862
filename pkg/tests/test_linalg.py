import random
from fractions import Fraction

from treecoh import linalg


def rand_matrix(rng, rows, cols, den=3):
    return [
        [Fraction(rng.randint(-4, 4), rng.randint(1, den)) for _ in range(cols)]
        for _ in range(rows)
    ]


def test_rref_idempotent_and_pivots():
    rng = random.Random(1)
    for _ in range(25):
        m = rand_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
        red, pivots = linalg.rref(m)
        red2, pivots2 = linalg.rref(red)
        assert red == red2 and pivots == pivots2
        for row, p in zip(red, pivots):
            assert row[p] == 1


def test_rank_matches_rref():
    rng = random.Random(2)
    for _ in range(25):
        m = rand_matrix(rng, rng.randint(1, 7), rng.randint(1, 7))
        red, pivots = linalg.rref(m)
        assert linalg.rank(m) == len(pivots)


def test_nullspace_is_kernel_and_complements_rank():
    rng = random.Random(3)
    for _ in range(25):
        rows, cols = rng.randint(1, 6), rng.randint(1, 6)
        m = rand_matrix(rng, rows, cols)
        basis = linalg.nullspace(m)
        assert len(basis) == cols - linalg.rank(m)
        for v in basis:
            assert linalg.vec_is_zero(linalg.mat_vec(m, v))


def test_solve_particular_solution():
    rng = random.Random(4)
    for _ in range(25):
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        m = rand_matrix(rng, rows, cols)
        x = [Fraction(rng.randint(-3, 3)) for _ in range(cols)]
        rhs = linalg.mat_vec(m, x)
        got = linalg.solve(m, rhs)
        assert got is not None
        assert linalg.mat_vec(m, got) == rhs


def test_solve_inconsistent_returns_none():
    m = [[Fraction(1), Fraction(0)], [Fraction(1), Fraction(0)]]
    assert linalg.solve(m, [Fraction(1), Fraction(2)]) is None


def test_mat_inv_roundtrip():
    rng = random.Random(5)
    hits = 0
    while hits < 10:
        n = rng.randint(1, 4)
        m = rand_matrix(rng, n, n)
        if linalg.rank(m) < n:
            continue
        hits += 1
        assert linalg.mat_eq(linalg.mat_mul(m, linalg.mat_inv(m)), linalg.identity(n))


def test_rowspace_membership_and_rank():
    rng = random.Random(6)
    for _ in range(20):
        cols = rng.randint(1, 6)
        space = linalg.RowSpace(cols)
        vecs = [rand_matrix(rng, 1, cols)[0] for _ in range(rng.randint(1, 6))]
        for v in vecs:
            space.add(v)
        assert space.rank == linalg.rank(vecs)
        coeffs = [Fraction(rng.randint(-2, 2)) for _ in vecs]
        combo = [sum((c * v[i] for c, v in zip(coeffs, vecs)), Fraction(0)) for i in range(cols)]
        assert space.contains(combo)


def test_subspace_comparisons():
    a = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    b = [[Fraction(1), Fraction(1)]]
    assert linalg.subspace_leq(b, a)
    assert not linalg.subspace_leq(a, b)
    assert linalg.same_subspace(a, [[Fraction(2), Fraction(0)], [Fraction(1), Fraction(1)]])


def test_is_orthogonal():
    rot = [[Fraction(3, 5), Fraction(-4, 5)], [Fraction(4, 5), Fraction(3, 5)]]
    assert linalg.is_orthogonal(rot)
    assert not linalg.is_orthogonal([[Fraction(1), Fraction(1)], [Fraction(0), Fraction(1)]])
