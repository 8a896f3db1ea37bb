import pytest
from hypothesis import given
from hypothesis import strategies as st

from gorlab._rational import ONE, to_q
from gorlab.chain import is_quasi_iso
from gorlab.invariants import closure_over
from gorlab.modules import (
    DGModule,
    ModuleMorphism,
    check_quasi_iso_vs_tor,
    double_dual_map,
    dual_module,
    ext,
    free_module,
    minimal_semifree_resolution,
    regular_module,
    tor,
    trivial_module,
)
from gorlab.presets import preset


@pytest.fixture(scope="module")
def finite():
    return {n: preset(n).truncate() for n in ("sphere3", "sphere2", "circle", "example", "wedge", "cp2")}


def _span(M):
    return range(M.lo, M.hi + 1)


@pytest.mark.parametrize("name", ["sphere3", "sphere2", "example", "wedge"])
def test_module_axioms(finite, name):
    F = finite[name]
    R = regular_module(F)
    for M in (R, dual_module(R), trivial_module(F), free_module(F, {"v": 0, "w": 3})):
        assert M.check_axioms(_span(M)) == []


@pytest.mark.parametrize("name", ["sphere2", "example"])
def test_dual_has_mirrored_homology(finite, name):
    R = regular_module(finite[name])
    H = R.homology()
    assert dual_module(R).homology().dims == {-n: k for n, k in H.dims.items()}


def test_double_dual_is_iso(finite):
    M = regular_module(finite["example"])
    phi = double_dual_map(M)
    assert phi.check(_span(M)) == []
    assert phi.is_quasi_iso(_span(M))


@pytest.mark.parametrize(
    "name, kind, top",
    [("sphere3", "trivial", 10), ("sphere3", "hom", 10), ("wedge", "hom", 8), ("sphere2", "hom", 10), ("example", "hom", 6)],
)
def test_resolution_is_minimal_and_quasi_iso(finite, name, kind, top):
    F = finite[name]
    M = trivial_module(F) if kind == "trivial" else dual_module(regular_module(F))
    res = minimal_semifree_resolution(M, top)
    degrees = range(res.lo, res.certified_hi + 1)
    assert res.module.is_minimal(degrees)
    assert res.phi.is_quasi_iso(degrees)
    assert res.phi.check(range(res.lo, min(res.certified_hi, res.lo + 3) + 1)) == []


def test_tor_anchors(finite):
    assert tor(dual_module(regular_module(finite["sphere3"])), 11).dims == {-3: 1}
    assert tor(dual_module(regular_module(finite["circle"])), 11).dims == {-1: 1}


def test_tor_of_wedge_is_infinite(finite):
    v = tor(dual_module(regular_module(finite["wedge"])), 11)
    assert v.dims[-3] == 2 and v.total > 1


@pytest.mark.parametrize("name", ["sphere3", "sphere2", "wedge", "cp2"])
def test_ext_into_dual_mirrors_tor(finite, name):
    # Ext_A(Q, Hom M) is the dual of Tor^A(Q, M)
    F = finite[name]
    M = regular_module(F)
    t = tor(M, 11)
    e = ext(trivial_module(F), dual_module(M), 11)
    lo, hi = max(e.lo, -t.hi), min(e.hi, -t.lo)
    assert hi - lo >= 3
    for n in range(lo, hi + 1):
        assert e[n] == t[-n]


# -- H(phi) iso iff Tor(Q, phi) iso -----------------------------------------------------------


@pytest.fixture(scope="module")
def sphere_closure(finite):
    F = finite["sphere3"]
    closure, _ = closure_over(preset("sphere3"), F, 11, 6)
    return F, closure


def _quotient_above(ext, top):
    """``R̄ / R̄^{>top}`` as a finite DG module."""
    F = ext.base
    basis = {n: ext.basis(n) for n in range(0, top + 1)}

    def act(a, x):
        return {l: c for l, c in ext.mul({(a, ()): ONE}, {x: ONE}).items() if ext.degree(l) <= top}

    def diff(x):
        return {l: c for l, c in ext.d_label(x).items() if ext.degree(l) <= top}

    return DGModule(F, basis, act, diff, name="closure")


def test_tor_detects_identity_and_zero(sphere_closure):
    F, closure = sphere_closure
    P = closure.as_semifree()
    M = regular_module(F)
    ident = ModuleMorphism(M, M, lambda m: {m: ONE})
    zero = ModuleMorphism(M, M, lambda m: {})
    assert check_quasi_iso_vs_tor(ident, P, range(-1, 7)).homology_iso
    rep = check_quasi_iso_vs_tor(zero, P, range(-1, 7))
    assert not rep.homology_iso and not rep.tor_iso


def test_tor_detects_closure_augmentation(sphere_closure):
    F, closure = sphere_closure
    top = 9
    src = _quotient_above(closure, top)
    Q = trivial_module(F)
    unit = (F.unit, ())
    eps = ModuleMorphism(src, Q, lambda x: {"1": ONE} if x == unit else {})
    assert eps.check(range(0, top + 1)) == []
    rep = check_quasi_iso_vs_tor(eps, closure.as_semifree(), range(0, top - 2))
    assert rep.homology_iso and rep.tor_iso


entries = st.integers(-1, 1)


@given(st.lists(entries, min_size=4, max_size=4), st.lists(entries, min_size=3, max_size=3))
def test_tor_detects_random_chain_maps(sphere_closure, mat, extra):
    # free module on v1, v2 (degree 0) and w (degree 3); e*v lands in degree 3
    F, closure = sphere_closure
    M = free_module(F, {"v1": 0, "v2": 0, "w": 3})
    e = F.basis(3)[0]
    img = {
        "v1": {(F.unit, "v1"): mat[0], (F.unit, "v2"): mat[1]},
        "v2": {(F.unit, "v1"): mat[2], (F.unit, "v2"): mat[3]},
        "w": {(F.unit, "w"): extra[0], (e, "v1"): extra[1], (e, "v2"): extra[2]},
    }

    def on(m):
        a, v = m
        out = {}
        for (b, u), c in img[v].items():
            if not c:
                continue
            for k, x in F.mul_basis(a, b).items():
                out[(k, u)] = out.get((k, u), 0) + to_q(c) * x
        return {k: x for k, x in out.items() if x}

    phi = ModuleMorphism(M, M, on)
    assert phi.check(_span(M)) == []
    check_quasi_iso_vs_tor(phi, closure.as_semifree(), range(-1, 8))
