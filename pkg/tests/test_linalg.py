from hypothesis import given, settings, strategies as st

from exactlab.linalg import Mat, Subspace, mpq, nullspace, q, rank, rref, solve

small = st.integers(min_value=-3, max_value=3)


def mat(rows):
    return Mat.from_rows(rows, len(rows[0]) if rows else 0)


def test_q_parses_fractions():
    assert q("3/6") == mpq(1, 2)
    assert q(2) == mpq(2)


def test_rref_pivots():
    rows, piv = rref([[2, 4, 0], [1, 2, 1]], 3)
    assert piv == [0, 2]
    assert rows[0] == [1, 2, 0]


def test_rank_and_nullspace():
    A = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert rank(A, 3) == 2
    (v,) = nullspace(A, 3)
    assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in A)


def test_solve_inconsistent_returns_none():
    assert solve([[1, 1], [1, 1]], [1, 2], 2) is None
    x = solve([[1, 1], [1, -1]], [3, 1], 2)
    assert x == [2, 1]


def test_inverse_roundtrip():
    A = mat([[2, 1], [1, 1]])
    assert A @ A.inverse() == Mat.identity(2)


def test_subspace_lattice():
    U = Subspace(3, [[1, 0, 0], [0, 1, 0]])
    V = Subspace(3, [[0, 1, 0], [0, 0, 1]])
    assert (U & V).dim == 1
    assert (U + V).dim == 3
    assert U & V <= U
    assert U.contains([2, -1, 0])
    assert not U.contains([0, 0, 1])


def test_subspace_equality_is_by_value():
    assert Subspace(2, [[1, 1]]) == Subspace(2, [[-3, -3]])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4))
def test_rank_nullity(rows):
    assert rank(rows, 3) + len(nullspace(rows, 3)) == 3


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(small, min_size=2, max_size=2), min_size=2, max_size=2),
       st.lists(st.lists(small, min_size=2, max_size=2), min_size=2, max_size=2))
def test_transpose_of_product(a, b):
    A, B = mat(a), mat(b)
    assert (A @ B).T == B.T @ A.T
