import pytest
from conftest import random_suite

from gorlab.algebra import free_algebra
from gorlab.invariants import (
    EXAMPLE_FIBER_WARNING,
    HypothesisUnverifiable,
    check_duality,
    cohomology_algebra,
    example_fiber_homology,
    g_invariant,
    gorenstein,
    pd_check,
    pd_check_presentation,
    t_invariant,
    theorem2_report,
    theorem4_report,
)
from gorlab.parser import parse_algebra
from gorlab.presets import preset
from gorlab.sullivan import NotFiniteFiberCohomology

SUITE = ["sphere3", "sphere2", "cp2", "circle", "example", "wedge", "truncated-poly"]


@pytest.mark.parametrize(
    "name, verdict, N, fc",
    [
        ("sphere3", True, 3, "[e]"),
        ("example", True, 6, "[x*y]"),
        ("truncated-poly", True, 4, "[x^2]"),
        ("wedge", False, None, None),
    ],
)
def test_pd_check(name, verdict, N, fc):
    rep = pd_check_presentation(preset(name))
    assert (rep.verdict, rep.formal_dimension, rep.fundamental_class) == (verdict, N, fc)


def test_pd_detects_degenerate_pairing():
    # S^2 v S^4 has a one-dimensional top degree but a degenerate pairing
    R = parse_algebra("gen a : 2\ngen b : 4\nrel a^2\nrel a*b\nrel b^2\n")
    rep = pd_check_presentation(R)
    assert rep.formal_dimension == 4 and not rep.verdict


@pytest.mark.parametrize("R", random_suite(), ids=lambda R: R.name)
def test_pd_implies_symmetric_dims(R):
    H, _ = cohomology_algebra(R)
    rep = pd_check(H)
    if rep.verdict:
        N = rep.formal_dimension
        assert all(H.dim(k) == H.dim(N - k) for k in range(N + 1))


@pytest.mark.parametrize("name, t", [("sphere3", {-3: 1}), ("circle", {-1: 1}), ("sphere2", {-2: 1}), ("example", {-6: 1})])
def test_t_anchors(name, t):
    rep = t_invariant(preset(name))
    assert rep.resolution.dims == t
    assert rep.closure.dims == t
    assert rep.common[1] - rep.common[0] >= 3


@pytest.mark.parametrize("name", SUITE)
def test_g_mirrors_t(name):
    R = preset(name)
    t = t_invariant(R).dims
    g = g_invariant(R)
    lo, hi = check_duality(t, g)
    assert hi >= lo
    assert g.stable


@pytest.mark.parametrize("name", [n for n in SUITE if n != "wedge"])
def test_gorenstein_degree_is_formal_dimension(name):
    R = preset(name)
    rep = gorenstein(R)
    assert rep.gorenstein
    assert rep.degree == pd_check_presentation(R).formal_dimension


def test_wedge_not_gorenstein():
    rep = gorenstein(preset("wedge"))
    assert not rep.gorenstein and rep.degree is None


@pytest.mark.parametrize("name", SUITE)
def test_triple_agreement(name):
    rep = theorem2_report(preset(name))
    assert rep.agree
    assert rep.conditions[0] == (name != "wedge")


def test_window_without_certificate():
    with pytest.raises(HypothesisUnverifiable):
        t_invariant(free_algebra("a:2"))


@pytest.mark.parametrize(
    "name, total, flags",
    [
        ("product-s3-s3", {-6: 1}, (True, True, True)),
        ("circle-sphere", {-4: 1}, (True, True, True)),
        ("twisted-cp2", {-7: 1}, (True, True, True)),
    ],
)
def test_convolution_gorenstein_extensions(name, total, flags):
    rep = theorem4_report(preset(name))
    assert rep.t_total.dims == total
    assert rep.gorenstein == flags
    assert len(rep.checked) >= 8


def test_convolution_non_gorenstein_fiber():
    rep = theorem4_report(preset("sphere-wedge"))
    assert rep.gorenstein == (True, False, False)
    assert rep.t_total.total > 1
    assert rep.t_total.dims[-6] == 2


def test_convolution_needs_finite_fiber_cohomology():
    E = parse_algebra("gen e : 3 block base\ngen a : 2 block fiber\nd e = 0\nd a = 0\n")
    with pytest.raises(NotFiniteFiberCohomology):
        theorem4_report(E)


@pytest.mark.parametrize("L", [0, 1, 2, 3])
def test_example_fiber(L):
    rep = example_fiber_homology(L)
    assert rep.dims.dims == {0: 1, 3: 2 * (L + 1), 5: 1}
    assert rep.dims[6] == 0
    want = ["x", "y"] + [f"{v}*ū" + (f"^{n}" if n > 1 else "") for n in range(1, L + 1) for v in "xy"]
    assert rep.classes[3] == want
    assert rep.classes[5] == ["z"]
    assert rep.warnings == [EXAMPLE_FIBER_WARNING]


def test_example_fiber_rejects_negative_cap():
    with pytest.raises(ValueError):
        example_fiber_homology(-1)
