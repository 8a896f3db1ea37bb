"""Poincaré duality, the Gorenstein invariants T(R) = Tor^R(Q, Hom R) and
G(R) = Ext_R(Q, R), and executable cross-checks between them.

Every computation runs over a finite quasi-isomorphic model ``R_fin`` of the
input (see :meth:`CdgaPresentation.truncate`); both invariants are
quasi-isomorphism invariants, so nothing is lost.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ._rational import ONE
from .algebra import (
    AlgebraError,
    CdgaPresentation,
    FiniteCdga,
    FiniteGradedAlgebra,
    Generator,
    NotConnected,
    NotFiniteDimensional,
    mono_str,
)
from .chain import ChainComplex, GradedDimensionVector, convolve, induced_rank
from .linalg import Echelon
from .modules import (
    dual_module,
    hom_complex,
    minimal_semifree_resolution,
    regular_module,
    reduce_mod_augmentation,
    tensor_complex,
)
from .sullivan import (
    TATE_LEVEL,
    FreeExtension,
    LambdaExtension,
    NotFiniteFiberCohomology,
    acyclic_closure,
    kill_homology,
)


class RouteMismatch(AssertionError):
    pass


class IdentityViolation(AssertionError):
    pass


class HypothesisUnverifiable(AlgebraError):
    pass


# -- Poincaré duality ------------------------------------------------------------------


@dataclass
class PDReport:
    verdict: bool
    formal_dimension: int | None
    fundamental_class: str | None
    pairing_ranks: list
    dims: dict

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "formal_dimension": self.formal_dimension,
            "fundamental_class": self.fundamental_class,
            "pairing_ranks": [
                {"degree": k, "rank": r, "dim": a, "dual_dim": b} for k, r, a, b in self.pairing_ranks
            ],
        }


def pd_check(H: FiniteCdga, labels: Mapping | None = None) -> PDReport:
    """Poincaré-duality test for a connected finite graded algebra.

    ``labels`` optionally maps basis labels to display text.
    """
    if H.bottom < 0 or H.dim(0) != 1 or H.basis(0) != [H.unit]:
        raise NotConnected("H^0 must be spanned by the unit")
    dims = {n: H.dim(n) for n in H.degrees}
    N = H.top
    top_basis = H.basis(N)
    fundamental = top_basis[0] if len(top_basis) == 1 else None
    ranks = []
    ok = fundamental is not None
    for k in range(0, N + 1):
        a, b = H.dim(k), H.dim(N - k)
        if fundamental is None:
            ranks.append((k, 0, a, b))
            continue
        rows = []
        for x in H.basis(k):
            rows.append({j: H.mul_basis(x, y).get(fundamental) for j, y in enumerate(H.basis(N - k)) if H.mul_basis(x, y).get(fundamental)})
        e = Echelon()
        for r in rows:
            e.add(r)
        ranks.append((k, e.rank, a, b))
        ok &= e.rank == a == b
    fc = None
    if fundamental is not None:
        fc = labels.get(fundamental, str(fundamental)) if labels else str(fundamental)
    return PDReport(ok, N if fundamental is not None else None, fc, ranks, dims)


def cohomology_algebra(R: CdgaPresentation) -> tuple[FiniteGradedAlgebra, dict]:
    """``H(R)`` as a finite graded algebra plus display text for its basis."""
    try:
        H = R.cohomology_ring()
    except NotFiniteDimensional as e:
        raise HypothesisUnverifiable(str(e)) from None
    res = R.cohomology()
    text = {}
    for n, reps in res.reps.items():
        for i, r in enumerate(reps):
            text[f"h{n}_{i}"] = f"[{r}]"
    return H, text


def pd_check_presentation(R: CdgaPresentation) -> PDReport:
    H, text = cohomology_algebra(R)
    return pd_check(H, text)


# -- T and G ------------------------------------------------------------------------------


@dataclass
class InvariantResult:
    dims: GradedDimensionVector
    route: str
    stable: bool = True
    notes: list = field(default_factory=list)


@dataclass
class TReport:
    resolution: GradedDimensionVector
    closure: GradedDimensionVector
    common: tuple
    word_cap: int | None

    @property
    def dims(self) -> GradedDimensionVector:
        return self.resolution


def _finite(R, window: int | None) -> tuple[FiniteCdga, int]:
    if isinstance(R, CdgaPresentation):
        D = R.max_degree if window is None else min(window, R.max_degree)
        try:
            return R.truncate(D), D
        except NotFiniteDimensional as e:
            raise HypothesisUnverifiable(str(e)) from None
    return R, (R.top + 8 if window is None else window)


def closure_over(R, F: FiniteCdga, top: int, word_cap: int) -> tuple[FreeExtension, int | None]:
    """An acyclic closure of ``F`` and the weight level at which to read it.

    Free presentations push their literal closure down to ``F``; quotients get a
    killing closure.
    """
    if isinstance(R, CdgaPresentation) and not R.relations:
        clo = acyclic_closure(R, top=min(top, R.max_degree - 1), word_cap=word_cap)
        src = clo.extension
        keep = set(F.labels())
        ext = src.transport(F, lambda part: _project(R, part, keep), cap=None)
        ext.delay = src.delay
        if not F.has_degree_one:
            ext.cap = None
            return ext, None
        ext.cap = word_cap + 1 + ext.delay
        ext._reset()
        return ext, word_cap
    if not F.has_degree_one:
        ext = FreeExtension(F, None, name="closure")
        kill_homology(ext, top, None)
        return ext, None
    level = min(word_cap, TATE_LEVEL)
    ext = FreeExtension(F, level + 2, name="closure")
    kill_homology(ext, top, ext.cap)
    return ext, level


def _project(R: CdgaPresentation, part: Mapping, keep: set) -> dict:
    out = {}
    for b, c in R.normal_form(dict(part)).items():
        if b in keep:
            out[b] = out.get(b, 0) + c
    return {k: v for k, v in out.items() if v}


def _filtered_ranks(make, n: int, L: int, delay: int) -> tuple[int, int]:
    """Image ranks ``L -> L+delay`` and ``L+1 -> L+1+delay`` of a weight-filtered complex."""
    r0 = induced_rank(make(L), make(L + delay), lambda l: {l: ONE}, n)
    r1 = induced_rank(make(L + 1), make(L + 1 + delay), lambda l: {l: ONE}, n)
    return r0, r1


def t_via_resolution(F: FiniteCdga, D: int, word_cap: int = 6) -> GradedDimensionVector:
    M = dual_module(regular_module(F))
    res = minimal_semifree_resolution(M, D - 1, word_cap)
    cx = reduce_mod_augmentation(res.module)
    lo = -F.top
    dims = {n: cx.homology_dim(n) for n in range(lo, res.certified_hi + 1)}
    return GradedDimensionVector(dims, lo - 1, res.certified_hi)


def t_via_closure(R, F: FiniteCdga, D: int, word_cap: int = 6) -> GradedDimensionVector:
    N = F.top
    top = D - 1
    hi = top - N - 2
    ext, level = closure_over(R, F, top, word_cap)
    HomR = dual_module(regular_module(F))
    lo = -N
    dims, stable = {}, True
    if level is None:
        cx = tensor_complex(HomR, ext.as_semifree(None))
        for n in range(lo, hi + 1):
            dims[n] = cx.homology_dim(n)
    else:
        cache = {}

        def make(L):
            if L not in cache:
                cache[L] = tensor_complex(HomR, ext.as_semifree(L))
            return cache[L]

        for n in range(lo, hi + 1):
            r0, r1 = _filtered_ranks(make, n, level, ext.delay)
            dims[n] = r0
            stable &= r0 == r1
    return GradedDimensionVector(dims, lo - 1, hi, stable)


def t_invariant(R, window: int | None = None, word_cap: int = 6) -> TReport:
    """``T(R)`` by a minimal resolution of ``Hom(R)`` and by ``Hom(R) (x)_R R̄``.

    The two must agree on their common window; otherwise :class:`RouteMismatch`.
    """
    F, D = _finite(R, window)
    b = t_via_resolution(F, D, word_cap)
    a = t_via_closure(R, F, D, word_cap)
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    for n in range(lo, hi + 1):
        if a[n] != b[n]:
            raise RouteMismatch(f"T in degree {n}: closure route {a[n]}, resolution route {b[n]}")
    return TReport(b, a, (lo, hi), word_cap if F.has_degree_one else None)


def g_invariant(R, window: int | None = None, word_cap: int = 6) -> GradedDimensionVector:
    """``G(R) = H(Hom_R(R̄, R))``; with degree-0 closure generators, by restriction ranks."""
    F, D = _finite(R, window)
    N = F.top
    top = D - 1
    hi_t = top - N - 2
    ext, level = closure_over(R, F, top, word_cap)
    Rm = regular_module(F)
    lo, hi = N - hi_t, N
    dims, stable = {}, True
    if level is None:
        cx = hom_complex(ext.as_semifree(None), Rm)
        for n in range(lo, hi + 1):
            dims[n] = cx.homology_dim(n)
    else:
        cache = {}

        def make(L):
            if L not in cache:
                cache[L] = hom_complex(ext.as_semifree(L), Rm)
            return cache[L]

        def restrict_rank(big: int, small: int, n: int) -> int:
            src, tgt = make(big), make(small)
            keep = set(tgt.basis(n))
            return induced_rank(src, tgt, lambda l: ({l: ONE} if l in keep else {}), n)

        s = ext.delay
        for n in range(lo, hi + 1):
            r0 = restrict_rank(level + s, level, n)
            r1 = restrict_rank(level + 1 + s, level + 1, n)
            dims[n] = r0
            stable &= r0 == r1
    return GradedDimensionVector(dims, lo, hi + 1, stable)


@dataclass
class GorensteinReport:
    t: GradedDimensionVector
    g: GradedDimensionVector
    gorenstein: bool
    degree: int | None

    def to_json(self) -> dict:
        return {
            "t": self.t.to_json(),
            "g": self.g.to_json(),
            "gorenstein": self.gorenstein,
            "gorenstein_degree": self.degree,
        }


def check_duality(t: GradedDimensionVector, g: GradedDimensionVector) -> tuple[int, int]:
    """Assert ``dim G^n = dim T^{-n}`` on the common window; return that window."""
    lo, hi = max(g.lo, -t.hi), min(g.hi, -t.lo)
    for n in range(lo, hi + 1):
        if g[n] != t[-n]:
            raise IdentityViolation(f"G^{n} has dim {g[n]} but T^{-n} has dim {t[-n]}")
    return lo, hi


def gorenstein(R, window: int | None = None, word_cap: int = 6) -> GorensteinReport:
    t = t_invariant(R, window, word_cap).dims
    g = g_invariant(R, window, word_cap)
    check_duality(t, g)
    is_g = t.total == 1
    deg = g.support()[0] if is_g and len(g.support()) == 1 else None
    return GorensteinReport(t, g, is_g, deg)


# -- cross-checks -------------------------------------------------------------------------


@dataclass
class TripleAgreementReport:
    t_total: int
    t_cohomology_total: int
    pd: PDReport
    t: GradedDimensionVector
    t_cohomology: GradedDimensionVector

    @property
    def conditions(self) -> tuple[bool, bool, bool]:
        return self.t_total == 1, self.t_cohomology_total == 1, self.pd.verdict

    @property
    def agree(self) -> bool:
        return len(set(self.conditions)) == 1

    def to_json(self) -> dict:
        i, ii, iii = self.conditions
        return {
            "t_total": self.t_total,
            "t_of_cohomology_total": self.t_cohomology_total,
            "gorenstein": i,
            "cohomology_gorenstein": ii,
            "poincare_duality": iii,
            "agree": self.agree,
            "t": self.t.to_json(),
            "t_of_cohomology": self.t_cohomology.to_json(),
            "pd": self.pd.to_json(),
        }


def theorem2_report(R: CdgaPresentation, window: int | None = None, word_cap: int = 6) -> TripleAgreementReport:
    """Gorenstein-ness of ``R``, of ``H(R)`` and Poincaré duality of ``H(R)``, computed separately."""
    H, text = cohomology_algebra(R)
    D = R.max_degree if window is None else window
    t = t_invariant(R, D, word_cap).dims
    th = t_invariant(H, D, word_cap).dims
    pd = pd_check(H, text)
    rep = TripleAgreementReport(t.total, th.total, pd, t, th)
    if not rep.agree:
        raise IdentityViolation(f"conditions disagree: {rep.conditions}")
    return rep


@dataclass
class ConvolutionReport:
    t_base: GradedDimensionVector
    t_fiber: GradedDimensionVector
    t_total: GradedDimensionVector
    checked: tuple
    gorenstein: tuple

    def to_json(self) -> dict:
        b, f, s = self.gorenstein
        return {
            "t_base": self.t_base.to_json(),
            "t_fiber": self.t_fiber.to_json(),
            "t_total": self.t_total.to_json(),
            "convolution_checked": list(self.checked),
            "base_gorenstein": b,
            "fiber_gorenstein": f,
            "total_gorenstein": s,
        }


def theorem4_report(ext: LambdaExtension, window: int | None = None, word_cap: int = 6) -> ConvolutionReport:
    """``T(R (x) ΛZ)`` against the convolution of ``T(R)`` and ``T(ΛZ)``."""
    Z = ext.fiber()
    try:
        Z.certified_top(window)
    except NotFiniteDimensional as e:
        raise NotFiniteFiberCohomology(str(e)) from None
    tR = t_invariant(ext.base, window, word_cap).dims
    tZ = t_invariant(Z, window, word_cap).dims
    tS = t_invariant(ext.total, window, word_cap).dims
    # T vanishes exactly below minus the top degree, so the windows extend downward
    floor = tS.lo - max(tR.hi, tZ.hi) - 1
    conv = convolve(_extend_down(tR, floor), _extend_down(tZ, floor))
    checked = []
    for n in range(tS.lo, tS.hi + 1):
        v = conv.get(n)
        if v is None:
            continue
        if v != tS[n]:
            raise IdentityViolation(f"T(S)^{n} = {tS[n]} but the convolution gives {v}")
        checked.append(n)
    flags = (tR.total == 1, tZ.total == 1, tS.total == 1)
    if flags[2] != (flags[0] and flags[1]):
        raise IdentityViolation(f"Gorenstein flags violate the product rule: {flags}")
    return ConvolutionReport(tR, tZ, tS, tuple(checked), flags)


def _extend_down(v: GradedDimensionVector, lo: int) -> GradedDimensionVector:
    return GradedDimensionVector(v.dims, min(lo, v.lo), v.hi, v.stable)


# -- the fiber of the example ------------------------------------------------------------------


EXAMPLE_FIBER_WARNING = (
    "degree-5 class is z, not y; the classes x*ū^n and y*ū^n occur for every n >= 0"
)


@dataclass
class FiberHomologyReport:
    dims: GradedDimensionVector
    classes: dict
    word_cap: int
    warnings: list

    def to_json(self) -> dict:
        return {
            "dims": self.dims.to_json(),
            "classes": {str(n): cs for n, cs in self.classes.items()},
            "word_cap": self.word_cap,
            "warnings": self.warnings,
        }


def example_fiber_model(word_cap: int) -> FreeExtension:
    """``H(X) (x) Λū`` with ``ū`` in degree 0 and ``dū = u``."""
    from .presets import example_algebra

    E = example_algebra()
    F = E.truncate()
    ext = FreeExtension(F, word_cap + 1, name="example fiber")
    u = ((E.index["u"], 1),)
    ext.add_generator("ū", 0, {(u, ()): ONE})
    ext.display_names = E.names
    return ext


def example_fiber_homology(word_cap: int = 2, window: int = 8) -> FiberHomologyReport:
    """Classes of ``F_L`` that survive into ``F_{L+1}``, ``L`` the ū-word cap."""
    if word_cap < 0:
        raise ValueError("word cap must be non-negative")
    ext = example_fiber_model(word_cap)
    L = word_cap
    src, tgt = ext.complex(L), ext.complex(L + 1)
    names = ext.display_names
    dims, classes = {}, {}
    for n in range(0, window):
        dims[n] = induced_rank(src, tgt, lambda l: {l: ONE}, n)
        tidx = tgt.index(n)
        work = Echelon()
        for r in tgt.boundaries(n).rows.values():
            work.add(r)
        sb = src.basis(n)
        reps = []
        for z in src.cycles(n):
            r = work.reduce({tidx[sb[i]]: c for i, c in z.items()})
            if r:
                work.add(r)
                reps.append(_fiber_text({sb[i]: c for i, c in z.items()}, names, ext))
        if reps:
            classes[n] = reps
    return FiberHomologyReport(GradedDimensionVector(dims, 0, window - 1), classes, L, [EXAMPLE_FIBER_WARNING])


def _fiber_text(x: Mapping, names, ext: FreeExtension) -> str:
    parts = []
    for (b, m), c in x.items():
        bs = mono_str(b, names)
        ms = ext.mono_str(m)
        body = bs if ms == "1" else (ms if bs == "1" else f"{bs}*{ms}")
        parts.append(body if c == 1 else f"{c}*{body}")
    return " + ".join(parts)
