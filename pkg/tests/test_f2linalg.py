import random

import pytest

from cobarext.f2linalg import (
    CompositionNonzeroError,
    F2Matrix,
    cohomology_dim,
    echelon_insert,
    reduce_vector,
)


def mat(rows_as_lists, cols=None):
    rows = len(rows_as_lists)
    cols = cols if cols is not None else (len(rows_as_lists[0]) if rows else 0)
    bits = tuple(sum(b << j for j, b in enumerate(row)) for row in rows_as_lists)
    return F2Matrix(rows, cols, bits)


def naive_rank(rows_as_lists, cols):
    """Independent oracle: textbook Gaussian elimination on 0/1 lists."""
    m = [list(r) for r in rows_as_lists]
    rank = 0
    for c in range(cols):
        pivot = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                m[i] = [(x + y) % 2 for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def test_rank_examples():
    assert F2Matrix.zero(0, 0).rank() == 0
    assert F2Matrix.identity(3).rank() == 3
    assert mat([[1, 1], [1, 1]]).rank() == 1


def test_rank_against_naive_oracle():
    rng = random.Random(20260816)
    for _ in range(300):
        rows = rng.randrange(0, 13)
        cols = rng.randrange(0, 13)
        entries = [[rng.randrange(2) for _ in range(cols)] for _ in range(rows)]
        m = mat(entries, cols)
        assert m.rank() == naive_rank(entries, cols)
        assert m.rank() == m.transpose().rank()


def test_kernel_examples():
    assert mat([[1, 1]]).kernel_basis() == [0b11]
    assert F2Matrix.identity(4).kernel_basis() == []
    assert mat([[0, 0]]).kernel_basis() == [0b01, 0b10]


def test_kernel_vectors_annihilated_and_independent():
    rng = random.Random(7)
    for _ in range(200):
        rows = rng.randrange(0, 10)
        cols = rng.randrange(0, 10)
        m = mat([[rng.randrange(2) for _ in range(cols)] for _ in range(rows)], cols)
        basis = m.kernel_basis()
        assert len(basis) == cols - m.rank()
        pivots = {}
        for v in basis:
            assert m.apply(v) == 0
            assert echelon_insert(pivots, v) != 0


def test_cohomology_examples():
    two = cohomology_dim(F2Matrix.zero(2, 0), F2Matrix.zero(0, 2))
    assert two.dim == 2 and len(two.representatives) == 2
    assert cohomology_dim(F2Matrix.identity(3), F2Matrix.zero(0, 3)).dim == 0
    # short exact pattern: inject the diagonal, project onto the difference
    d_in = mat([[1], [1]])
    d_out = mat([[1, 1]])
    assert cohomology_dim(d_in, d_out).dim == 0


def test_composition_checked():
    with pytest.raises(CompositionNonzeroError):
        cohomology_dim(F2Matrix.identity(2), F2Matrix.identity(2))


def test_rank_nullity():
    rng = random.Random(99)
    for _ in range(100):
        rows = rng.randrange(0, 12)
        cols = rng.randrange(0, 12)
        m = mat([[rng.randrange(2) for _ in range(cols)] for _ in range(rows)], cols)
        assert m.rank() + len(m.kernel_basis()) == cols


def test_cohomology_invariant_under_permutation():
    rng = random.Random(4242)
    for _ in range(60):
        a, b, c = (rng.randrange(1, 7) for _ in range(3))
        din_rows = [[rng.randrange(2) for _ in range(a)] for _ in range(b)]
        dout_rows = [[rng.randrange(2) for _ in range(b)] for _ in range(c)]
        d_in, d_out = mat(din_rows, a), mat(dout_rows, b)
        try:
            base = cohomology_dim(d_in, d_out).dim
        except CompositionNonzeroError:
            continue
        perm = list(range(b))
        rng.shuffle(perm)
        din_p = [[din_rows[perm[i]][j] for j in range(a)] for i in range(b)]
        dout_p = [[dout_rows[i][perm.index(j)] for j in range(b)] for i in range(c)]
        assert cohomology_dim(mat(din_p, a), mat(dout_p, b)).dim == base


def test_representatives_reduce_to_zero_against_image_and_kernel():
    rng = random.Random(11)
    for _ in range(80):
        a, b, c = (rng.randrange(1, 8) for _ in range(3))
        d_in = mat([[rng.randrange(2) for _ in range(a)] for _ in range(b)], a)
        d_out_rows = [[0] * b for _ in range(c)]
        d_out = mat(d_out_rows, b)  # zero d_out keeps the pair composable
        res = cohomology_dim(d_in, d_out)
        pivots = {}
        for col in d_in.transpose().row_bits:
            echelon_insert(pivots, col)
        for v in res.representatives:
            assert d_out.apply(v) == 0
            assert reduce_vector(pivots, v) == v  # already fully reduced
            assert v != 0


def test_mul_and_apply_agree():
    rng = random.Random(5)
    for _ in range(50):
        a, b, c = (rng.randrange(1, 8) for _ in range(3))
        m1 = mat([[rng.randrange(2) for _ in range(b)] for _ in range(c)], b)
        m2 = mat([[rng.randrange(2) for _ in range(a)] for _ in range(b)], a)
        prod = m1.mul(m2)
        for j in range(a):
            assert prod.apply(1 << j) == m1.apply(m2.apply(1 << j))
