import sympy
from hypothesis import given
from hypothesis import strategies as st

from gorlab._rational import to_q
from gorlab.linalg import Echelon, SparseMatrix, kernel_and_image, solve, solve_columns, span_rank

small = st.integers(min_value=-3, max_value=3)


@st.composite
def matrices(draw):
    r = draw(st.integers(1, 5))
    c = draw(st.integers(1, 5))
    return [[draw(small) for _ in range(c)] for _ in range(r)]


def columns_of(dense):
    cols = []
    for j in range(len(dense[0])):
        cols.append({i: to_q(row[j]) for i, row in enumerate(dense) if row[j]})
    return cols


@given(matrices())
def test_rank_matches_sympy(dense):
    assert span_rank(columns_of(dense)) == sympy.Matrix(dense).rank()


@given(matrices())
def test_kernel_vectors_are_killed(dense):
    cols = columns_of(dense)
    ker, img = kernel_and_image(cols)
    assert len(ker) + img.rank == len(cols)
    for k in ker:
        total = {}
        for j, c in k.items():
            for i, v in cols[j].items():
                total[i] = total.get(i, 0) + c * v
        assert not any(total.values())


@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_roundtrip(dense, xs):
    cols = columns_of(dense)
    x = {j: to_q(xs[j]) for j in range(len(cols)) if xs[j]}
    rhs = {}
    for j, c in x.items():
        for i, v in cols[j].items():
            rhs[i] = rhs.get(i, 0) + c * v
    rhs = {i: v for i, v in rhs.items() if v}
    sol = solve_columns(cols, rhs)
    assert sol is not None
    back = {}
    for j, c in sol.items():
        for i, v in cols[j].items():
            back[i] = back.get(i, 0) + c * v
    assert {i: v for i, v in back.items() if v} == rhs


def test_inconsistent_system_has_no_solution():
    m = SparseMatrix.from_dense([[1, 0], [0, 0]])
    assert solve(m, {1: to_q(1)}) is None


def test_tracked_reduction_records_combination():
    e = Echelon(track=True)
    e.add({0: to_q(1), 1: to_q(1)}, {"a": to_q(1)})
    e.add({1: to_q(1)}, {"b": to_q(1)})
    res, tag = e.reduce({0: to_q(2), 1: to_q(3)})
    assert not res
    assert tag == {"a": to_q(-2), "b": to_q(-1)}


def test_explicit_zero_entries_are_ignored():
    e = Echelon()
    assert e.add({0: to_q(0), 1: to_q(2)})
    assert not e.add({0: to_q(0), 1: to_q(1)})
    assert e.rank == 1
