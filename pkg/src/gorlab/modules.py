"""DG modules over finite CDGAs, semifree modules, resolutions, Tor and Ext.

Conventions.  Modules are left modules.  For the dual ``Hom(M)`` the right
action is ``(f.a)(m) = f(a.m)`` and ``a.f = (-1)^{|a||f|} f.a``; its
differential is ``(df)(m) = -(-1)^{|f|} f(dm)``.  For a semifree ``P = A(x)V``,

    N (x)_A P = N (x) V,   d(n(x)v) = dn(x)v + (-1)^{|n|} sum (n.b_i)(x)v_i
    Hom_A(P, N) = maps on V,   (dg)(v) = d g(v) - (-1)^{|g|} g(dv)

where ``dv = sum b_i (x) v_i``, ``n.b = (-1)^{|n||b|} b.n`` and
``g(b(x)v) = (-1)^{|g||b|} b.g(v)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from ._rational import ONE, ZERO
from .chain import ChainComplex, GradedDimensionVector, UncertifiedDegree, induced_rank, is_quasi_iso
from .linalg import Echelon, axpy, kernel_and_image

__all__ = [
    "ModuleError",
    "NotBoundedBelow",
    "DGModule",
    "SemifreeModule",
    "ModuleMorphism",
    "Resolution",
    "regular_module",
    "trivial_module",
    "dual_module",
    "double_dual_map",
    "free_module",
    "minimal_semifree_resolution",
    "reduce_mod_augmentation",
    "tensor_complex",
    "hom_complex",
    "tor",
    "ext",
    "check_quasi_iso_vs_tor",
    "GradedDimensionVector",
]


class ModuleError(ValueError):
    pass


class NotBoundedBelow(ModuleError):
    pass


def _sign(k: int) -> int:
    return -1 if k & 1 else 1


class _Module:
    """Shared behaviour: ``algebra``, ``basis(n)``, ``degree``, ``act``, ``d``."""

    algebra = None
    name = ""

    def act_elem(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for a, ca in x.items():
            for m, cm in y.items():
                axpy(out, ca * cm, self.act(a, m))
        return out

    def d_elem(self, y: Mapping) -> dict:
        out: dict = {}
        for m, c in y.items():
            axpy(out, c, self.d(m))
        return out

    def chain_complex(self) -> ChainComplex:
        return ChainComplex(self.basis, self.d, name=self.name)

    def right_act(self, m, a) -> dict:
        """``m.a = (-1)^{|m||a|} a.m``."""
        s = _sign(self.degree(m) * self.algebra.degree(a))
        return {k: s * v for k, v in self.act(a, m).items()}

    def check_axioms(self, degrees: Iterable[int]) -> list[str]:
        """Unit, associativity, Leibniz and d^2 on basis elements in ``degrees``."""
        A = self.algebra
        problems = []
        labs = [(n, m) for n in degrees for m in self.basis(n)]
        alg_labels = [a for k in range(A.bottom, A.top + 1) for a in A.basis(k)]
        for n, m in labs:
            if self.act(A.unit, m) != {m: ONE}:
                problems.append(f"unit does not act trivially on {m!r}")
            if self.d_elem(self.d(m)):
                problems.append(f"d^2({m!r}) != 0")
            for a in alg_labels:
                lhs = self.d_elem(self.act(a, m))
                rhs = self.act_elem(A.d_label(a), {m: ONE})
                axpy(rhs, _sign(A.degree(a)), self.act_elem({a: ONE}, self.d(m)))
                axpy(lhs, -1, rhs)
                if lhs:
                    problems.append(f"Leibniz fails on ({a!r}, {m!r})")
                for b in alg_labels:
                    l = self.act_elem({a: ONE}, self.act(b, m))
                    r = self.act_elem(A.mul_basis(a, b), {m: ONE})
                    axpy(l, -1, r)
                    if l:
                        problems.append(f"associativity fails on ({a!r}, {b!r}, {m!r})")
        return problems


class DGModule(_Module):
    """A finite DG module: basis per degree, action and differential on labels."""

    def __init__(
        self,
        algebra,
        basis: Mapping[int, Sequence],
        action: Callable[[Hashable, Hashable], Mapping],
        differential: Callable[[Hashable], Mapping],
        name: str = "",
    ):
        self.algebra = algebra
        self._basis = {n: list(b) for n, b in sorted(basis.items()) if b}
        self.deg = {m: n for n, b in self._basis.items() for m in b}
        self._action = action
        self._diff = differential
        self.name = name

    @property
    def lo(self) -> int | None:
        return min(self._basis) if self._basis else None

    @property
    def hi(self) -> int | None:
        return max(self._basis) if self._basis else None

    def is_zero(self) -> bool:
        return not self._basis

    def basis(self, n: int) -> list:
        return self._basis.get(n, [])

    def labels(self) -> list:
        return [m for b in self._basis.values() for m in b]

    def degree(self, m) -> int:
        return self.deg[m]

    def act(self, a, m) -> dict:
        if a == self.algebra.unit:
            return {m: ONE}
        return self._action(a, m)

    def d(self, m) -> dict:
        return self._diff(m)

    def homology(self) -> GradedDimensionVector:
        if self.is_zero():
            return GradedDimensionVector({}, 0, 0)
        cx = self.chain_complex()
        return GradedDimensionVector(
            {n: cx.homology_dim(n) for n in range(self.lo, self.hi + 1)}, self.lo - 1, self.hi + 1
        )

    def __repr__(self) -> str:
        dims = {n: len(b) for n, b in self._basis.items()}
        return f"DGModule({self.name or '?'}: {dims})"


def regular_module(A, name: str = "") -> DGModule:
    basis = {n: A.basis(n) for n in range(A.bottom, A.top + 1)}
    return DGModule(A, basis, A.mul_basis, A.d_label, name=name or f"{A.name or 'A'}")


def trivial_module(A) -> DGModule:
    """The residue field Q in degree 0, acted on through the augmentation."""
    return DGModule(A, {0: ["1"]}, lambda a, m: {}, lambda m: {}, name="Q")


def free_module(A, generators: Mapping[Hashable, int], name: str = "") -> DGModule:
    """``A (x) V`` with ``dV = 0``, as a finite DG module."""
    basis: dict[int, list] = {}
    for v, k in generators.items():
        for n in range(A.bottom, A.top + 1):
            for a in A.basis(n):
                basis.setdefault(n + k, []).append((a, v))

    def act(a, m):
        b, v = m
        return {(c, v): x for c, x in A.mul_basis(a, b).items()}

    def diff(m):
        b, v = m
        return {(c, v): x for c, x in A.d_label(b).items()}

    return DGModule(A, basis, act, diff, name=name)


def dual_module(M: DGModule, name: str = "") -> DGModule:
    """``Hom(M) = Hom_Q(M, Q)``, with labels ``('dual', m)`` in degree ``-|m|``."""
    A = M.algebra
    basis = {-n: [("dual", m) for m in M.basis(n)] for n in range(M.lo, M.hi + 1)} if not M.is_zero() else {}
    coeffs: dict = {}

    def right(f, a):
        m0 = f[1]
        key = (m0, a)
        if key not in coeffs:
            out = {}
            n = M.degree(m0) - A.degree(a)
            for m in M.basis(n):
                c = M.act(a, m).get(m0)
                if c:
                    out[("dual", m)] = c
            coeffs[key] = out
        return coeffs[key]

    def act(a, f):
        s = _sign(A.degree(a) * M.degree(f[1]))
        return {k: s * v for k, v in right(f, a).items()}

    def diff(f):
        m0 = f[1]
        s = -_sign(M.degree(m0))
        out = {}
        for m in M.basis(M.degree(m0) - 1):
            c = M.d(m).get(m0)
            if c:
                out[("dual", m)] = s * c
        return out

    return DGModule(A, basis, act, diff, name=name or f"Hom({M.name})")


@dataclass
class ModuleMorphism:
    """Degree-0 module map given on source basis labels."""

    source: object
    target: object
    on_basis: Callable[[Hashable], Mapping]
    name: str = ""

    def __call__(self, x: Mapping) -> dict:
        out: dict = {}
        for m, c in x.items():
            axpy(out, c, self.on_basis(m))
        return out

    def check(self, degrees: Iterable[int]) -> list[str]:
        """Chain-map and linearity violations on basis elements in ``degrees``."""
        A = self.source.algebra
        problems = []
        alg = [a for k in range(A.bottom, A.top + 1) for a in A.basis(k)]
        for n in degrees:
            for m in self.source.basis(n):
                l = self(self.source.d(m))
                axpy(l, -1, self.target.d_elem(self.on_basis(m)))
                if l:
                    problems.append(f"does not commute with d on {m!r}")
                for a in alg:
                    l = self(self.source.act(a, m))
                    axpy(l, -1, self.target.act_elem({a: ONE}, self.on_basis(m)))
                    if l:
                        problems.append(f"not A-linear on ({a!r}, {m!r})")
        return problems

    def is_quasi_iso(self, degrees: Iterable[int]) -> bool:
        return is_quasi_iso(self.source.chain_complex(), self.target.chain_complex(), self.on_basis, degrees)


def double_dual_map(M: DGModule) -> ModuleMorphism:
    """``m -> (f -> (-1)^{|f||m|} f(m))`` into ``Hom(Hom(M))``."""
    DD = dual_module(dual_module(M))

    def on(m):
        n = M.degree(m)
        return {("dual", ("dual", m)): ONE * _sign(n * n)}

    return ModuleMorphism(M, DD, on, name="double dual")


# -- semifree modules -------------------------------------------------------------


class SemifreeModule(_Module):
    """``A (x) V`` with ``d`` given on generators; labels are ``(a, v)``.

    ``generators(n)`` lists the generators of degree ``n``; the generator set
    may be infinite as long as each degree is finite.
    """

    def __init__(
        self,
        algebra,
        generators: Callable[[int], Sequence],
        gen_degree: Callable[[Hashable], int],
        d_gen: Callable[[Hashable], Mapping],
        name: str = "",
        gen_lo: int = 0,
    ):
        self.algebra = algebra
        self._gens = generators
        self._gdeg = gen_degree
        self._dgen = d_gen
        self.name = name
        self.gen_lo = gen_lo
        self._dcache: dict = {}

    def generators(self, n: int) -> list:
        return list(self._gens(n))

    def gen_degree(self, v) -> int:
        return self._gdeg(v)

    def d_gen(self, v) -> dict:
        return self._dgen(v)

    def basis(self, n: int) -> list:
        A = self.algebra
        out = []
        for k in range(self.gen_lo, n - A.bottom + 1):
            bs = A.basis(n - k)
            if not bs:
                continue
            for v in self._gens(k):
                out.extend((a, v) for a in bs)
        return out

    def degree(self, m) -> int:
        a, v = m
        return self.algebra.degree(a) + self._gdeg(v)

    def act(self, a, m) -> dict:
        b, v = m
        A = self.algebra
        if a == A.unit:
            return {m: ONE}
        return {(c, v): x for c, x in A.mul_basis(a, b).items()}

    def d(self, m) -> dict:
        if m in self._dcache:
            return self._dcache[m]
        b, v = m
        A = self.algebra
        out = {(c, v): x for c, x in A.d_label(b).items()}
        dv = self._dgen(v)
        if dv:
            if b == A.unit:
                axpy(out, 1, dv)
            else:
                axpy(out, _sign(A.degree(b)), self.act_elem({b: ONE}, dv))
        self._dcache[m] = out
        return out

    def is_minimal(self, degrees: Iterable[int]) -> bool:
        """``d(V)`` has no component on ``1 (x) V``."""
        unit = self.algebra.unit
        return not any(a == unit for n in degrees for v in self._gens(n) for (a, _w) in self._dgen(v))


class _GeneratorStore:
    """Mutable generator list backing a resolution under construction."""

    def __init__(self):
        self.by_degree: dict[int, list] = {}
        self.degree: dict = {}
        self.d: dict = {}
        self.stage: dict = {}
        self.phi: dict = {}

    def add(self, name, degree: int, d: Mapping, phi: Mapping):
        self.by_degree.setdefault(degree, []).append(name)
        self.degree[name] = degree
        self.d[name] = dict(d)
        self.stage[name] = 1 + max((self.stage[w] for (_a, w) in d), default=-1) if d else 0
        self.phi[name] = dict(phi)

    def count(self) -> int:
        return len(self.degree)


@dataclass
class Resolution:
    module: SemifreeModule
    phi: ModuleMorphism
    target: DGModule
    stages: dict
    certified_hi: int
    lo: int
    counts: dict = field(default_factory=dict)

    def generator_dims(self) -> GradedDimensionVector:
        dims = {n: c for n, c in self.counts.items() if n <= self.certified_hi}
        return GradedDimensionVector(dims, self.lo - 1, self.certified_hi)


def _phi_vec(P: SemifreeModule, store: _GeneratorStore, M: DGModule, Pcx, Mcx, n: int, vec: Mapping) -> dict:
    basis = Pcx.basis(n)
    img: dict = {}
    for i, c in vec.items():
        a, v = basis[i]
        axpy(img, c, M.act_elem({a: ONE}, store.phi[v]))
    return Mcx.to_vec(n, img)


def minimal_semifree_resolution(M: DGModule, top: int, round_cap: int = 6) -> Resolution:
    """Minimal semifree resolution ``A (x) V -> M`` built degree by degree up to ``top``.

    At degree ``k`` the kernel of ``H^k(phi)`` is killed by generators of
    degree ``k-1`` (repeated while new kernel appears, at most ``round_cap``
    rounds when the algebra has degree-one elements), then ``H^k(phi)`` is
    made surjective by cycle generators of degree ``k``.
    """
    A = M.algebra
    store = _GeneratorStore()
    if M.is_zero():
        P = SemifreeModule(A, lambda n: [], lambda v: 0, lambda v: {}, name="0")
        return Resolution(P, ModuleMorphism(P, M, lambda m: {}), M, {}, top, top, {})
    lo = M.lo
    cx0 = M.chain_complex()
    hlo = next((n for n in range(lo, M.hi + 1) if cx0.homology_dim(n)), None)
    if hlo is None:
        P = SemifreeModule(A, lambda n: [], lambda v: 0, lambda v: {}, name="0")
        return Resolution(P, ModuleMorphism(P, M, lambda m: {}), M, {}, top, lo, {})
    P = SemifreeModule(
        A,
        lambda n: store.by_degree.get(n, []),
        store.degree.__getitem__,
        store.d.__getitem__,
        name=f"P({M.name})",
        gen_lo=hlo - 1,
    )
    Mcx = M.chain_complex()
    limit = round_cap if A.has_degree_one else 64
    certified_hi = top
    counter = 0
    for k in range(hlo, top + 1):
        rounds = 0
        while True:
            P._dcache.clear()
            Pcx = P.chain_complex()
            reps = _kernel_classes(P, store, M, Pcx, Mcx, k)
            if not reps:
                break
            rounds += 1
            if rounds > limit:
                certified_hi = min(certified_hi, k - 2)
                break
            for z, m in reps:
                counter += 1
                store.add(f"v{counter}", k - 1, Pcx.from_vec(k, z), Mcx.from_vec(k - 1, m))
        P._dcache.clear()
        Pcx = P.chain_complex()
        for m in _cokernel_classes(P, store, M, Pcx, Mcx, k):
            counter += 1
            store.add(f"v{counter}", k, {}, Mcx.from_vec(k, m))
    P._dcache.clear()
    certified_hi = min(certified_hi, top - 1)

    def on(m):
        a, v = m
        return M.act_elem({a: ONE}, store.phi[v])

    phi = ModuleMorphism(P, M, on, name="resolution")
    counts = {n: len(vs) for n, vs in store.by_degree.items()}
    return Resolution(P, phi, M, dict(store.stage), certified_hi, hlo, counts)


def _kernel_classes(P, store, M, Pcx, Mcx, k: int) -> list[tuple[dict, dict]]:
    cycles = Pcx.cycles(k)
    if not cycles:
        return []
    bm = Mcx.boundaries(k)
    residues = []
    for z in cycles:
        r, _ = bm.reduce(_phi_vec(P, store, M, Pcx, Mcx, k, z), {})
        residues.append(r)
    kern, _ = kernel_and_image(residues)
    if not kern:
        return []
    work = Echelon()
    for r in Pcx.boundaries(k).rows.values():
        work.add(r)
    out = []
    for comb in kern:
        z: dict = {}
        for i, c in comb.items():
            axpy(z, c, cycles[i])
        r = work.reduce(z)
        if not r:
            continue
        work.add(r)
        img = _phi_vec(P, store, M, Pcx, Mcx, k, r)
        res, tag = bm.reduce(img, {})
        assert not res
        m = {i: -c for i, c in tag.items() if c}
        out.append((r, m))
    return out


def _cokernel_classes(P, store, M, Pcx, Mcx, k: int) -> list[dict]:
    work = Echelon()
    for r in Mcx.boundaries(k).rows.values():
        work.add(r)
    for z in Pcx.cycles(k):
        work.add(_phi_vec(P, store, M, Pcx, Mcx, k, z))
    out = []
    for z in Mcx.cycles(k):
        r = work.reduce(z)
        if r:
            work.add(r)
            out.append(r)
    return out


# -- derived functors ---------------------------------------------------------------


def reduce_mod_augmentation(P: SemifreeModule) -> ChainComplex:
    """``Q (x)_A P``: the complex on ``V`` with the augmented differential."""
    unit = P.algebra.unit

    def d(v):
        return {w: c for (a, w), c in P.d_gen(v).items() if a == unit}

    return ChainComplex(P.generators, d, name=f"Q(x){P.name}")


def tensor_complex(N, P: SemifreeModule, gen_filter: Callable | None = None) -> ChainComplex:
    """``N (x)_A P`` on labels ``(x, v)``; ``gen_filter`` restricts generators."""
    A = P.algebra
    lo, hi = N.lo, N.hi

    def gens(k):
        vs = P.generators(k)
        return [v for v in vs if gen_filter(v)] if gen_filter else vs

    def basis(n):
        if lo is None:
            return []
        out = []
        for j in range(lo, hi + 1):
            xs = N.basis(j)
            if not xs:
                continue
            for v in gens(n - j):
                out.extend((x, v) for x in xs)
        return out

    def d(label):
        x, v = label
        out = {(y, v): c for y, c in N.d(x).items()}
        nx = N.degree(x)
        for (b, w), c in P.d_gen(v).items():
            if gen_filter and not gen_filter(w):
                continue
            if b == A.unit:
                axpy(out, _sign(nx) * c, {(x, w): ONE})
                continue
            s = _sign(nx) * _sign(nx * A.degree(b)) * c
            for y, e in N.act(b, x).items():
                axpy(out, s * e, {(y, w): ONE})
        return out

    return ChainComplex(basis, d, name=f"{N.name}(x){P.name}")


def hom_complex(P: SemifreeModule, N, gens_upto: int | None = None) -> ChainComplex:
    """``Hom_A(P, N)`` on labels ``(v, x)`` meaning ``v -> x``, others to 0."""
    A = P.algebra
    lo, hi = N.lo, N.hi
    users: dict = {}
    scanned: set = set()

    def ensure(k):
        if k in scanned:
            return
        scanned.add(k)
        for v in P.generators(k):
            for (b, w), c in P.d_gen(v).items():
                users.setdefault(w, []).append((v, b, c))

    def basis(n):
        if lo is None:
            return []
        out = []
        for j in range(lo, hi + 1):
            xs = N.basis(j)
            if not xs:
                continue
            for v in P.generators(j - n):
                out.extend((v, x) for x in xs)
        return out

    def d(label):
        v0, x0 = label
        g = N.degree(x0) - P.gen_degree(v0)
        out = {(v0, y): c for y, c in N.d(x0).items()}
        # users of v0 have degree >= |v0| - 1
        for k in range(P.gen_degree(v0) - 1, hi - g):
            ensure(k)
        s = -_sign(g)
        for v, b, c in users.get(v0, ()):
            if b == A.unit:
                axpy(out, s * c, {(v, x0): ONE})
                continue
            t = s * c * _sign(g * A.degree(b))
            for y, e in N.act(b, x0).items():
                axpy(out, t * e, {(v, y): ONE})
        return out

    return ChainComplex(basis, d, name=f"Hom({P.name},{N.name})")


def tor(M: DGModule, top: int, round_cap: int = 6) -> GradedDimensionVector:
    """``Tor^A(Q, M)`` dims from the minimal resolution, certified through ``top - 1``."""
    res = minimal_semifree_resolution(M, top, round_cap)
    return _tor_from_resolution(res)


def _tor_from_resolution(res: Resolution) -> GradedDimensionVector:
    cx = reduce_mod_augmentation(res.module)
    dims = {n: cx.homology_dim(n) for n in range(res.lo, res.certified_hi + 1)}
    return GradedDimensionVector(dims, res.lo - 1, res.certified_hi)


def ext(M: DGModule, N: DGModule, top: int, round_cap: int = 6) -> GradedDimensionVector:
    """``Ext_A(M, N) = H(Hom_A(P, N))`` in the degrees the resolution certifies."""
    res = minimal_semifree_resolution(M, top, round_cap)
    return ext_from_resolution(res, N)


def ext_from_resolution(res: Resolution, N: DGModule) -> GradedDimensionVector:
    if N.is_zero() or not res.counts:
        return GradedDimensionVector({}, 0, 0)
    vhi = res.certified_hi
    lo_n = N.hi - vhi + 1
    hi_n = N.hi - res.lo
    cx = hom_complex(res.module, N)
    dims = {n: cx.homology_dim(n) for n in range(lo_n, hi_n + 1)}
    return GradedDimensionVector(dims, lo_n, hi_n + 1)


@dataclass
class QuasiIsoTorReport:
    homology_iso: bool
    tor_iso: bool
    degrees: tuple

    @property
    def agree(self) -> bool:
        return self.homology_iso == self.tor_iso


def check_quasi_iso_vs_tor(phi: ModuleMorphism, closure: SemifreeModule, degrees: Sequence[int], gen_filter=None) -> QuasiIsoTorReport:
    """Compare ``H(phi)`` with ``H(phi (x)_A closure)``, the map on ``Tor^A(-, Q)``.

    ``closure`` must be a semifree resolution of ``Q``; the result carries both
    verdicts and :attr:`QuasiIsoTorReport.agree` states whether they coincide.
    """
    src, tgt = phi.source, phi.target
    h = is_quasi_iso(src.chain_complex(), tgt.chain_complex(), phi.on_basis, degrees)
    ts = tensor_complex(src, closure, gen_filter)
    tt = tensor_complex(tgt, closure, gen_filter)

    def on(label):
        x, v = label
        return {(y, v): c for y, c in phi.on_basis(x).items()}

    t = is_quasi_iso(ts, tt, on, degrees)
    report = QuasiIsoTorReport(h, t, tuple(degrees))
    if not report.agree:
        raise AssertionError(f"H(phi) iso is {h} but Tor(Q, phi) iso is {t}")
    return report
