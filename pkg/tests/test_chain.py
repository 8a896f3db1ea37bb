import pytest
from hypothesis import given
from hypothesis import strategies as st

from gorlab._rational import ONE
from gorlab.chain import ChainComplex, GradedDimensionVector, UncertifiedDegree, convolve, induced_rank, is_quasi_iso


def simplex_boundary():
    # cochains of the 2-simplex boundary (a circle): H = {0:1, 1:1}
    verts, edges = ["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")]

    def basis(n):
        return verts if n == 0 else edges if n == 1 else []

    def d(x):
        if x in verts:
            out = {}
            for e in edges:
                if x == e[1]:
                    out[e] = out.get(e, 0) + ONE
                if x == e[0]:
                    out[e] = out.get(e, 0) - ONE
            return out
        return {}

    return ChainComplex(basis, d)


def test_circle_cochains():
    cx = simplex_boundary()
    assert [cx.homology_dim(n) for n in range(-1, 3)] == [0, 1, 1, 0]
    assert all(cx.check_d_squared(n) for n in range(2))


def test_identity_is_quasi_iso():
    cx = simplex_boundary()
    assert is_quasi_iso(cx, cx, lambda l: {l: ONE}, range(0, 2))
    assert induced_rank(cx, cx, lambda l: {}, 1) == 0


def test_vector_window():
    v = GradedDimensionVector({-3: 1}, -4, 10)
    assert v[-3] == 1 and v[5] == 0
    with pytest.raises(UncertifiedDegree):
        v[11]
    assert v.mirror().dims == {3: 1} and (v.mirror().lo, v.mirror().hi) == (-10, 4)
    assert v.to_json() == {"dims": [{"degree": -3, "dim": 1}], "window": [-4, 10], "stable": True}


def test_vector_rejects_out_of_window_data():
    with pytest.raises(ValueError):
        GradedDimensionVector({5: 1}, 0, 3)


dims = st.dictionaries(st.integers(-3, 3), st.integers(0, 3), max_size=4)


@given(dims, dims)
def test_convolution_is_commutative_and_total_multiplicative(a, b):
    va = GradedDimensionVector(a, -3, 3)
    vb = GradedDimensionVector(b, -3, 3)
    ab, ba = convolve(va, vb), convolve(vb, va)
    assert ab == ba
    known = {n: k for n, k in ab.items() if k is not None}
    if len(known) == len(ab):
        assert sum(known.values()) == va.total * vb.total


def test_convolution_marks_unknown_degrees():
    a = GradedDimensionVector({0: 1, 2: 1}, 0, 2)
    b = GradedDimensionVector({0: 1}, -2, 2)
    c = convolve(a, b)
    assert c[0] == 1 and c[2] == 1
    assert c[4] is None
