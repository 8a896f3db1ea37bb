"""Free graded-commutative algebras over Q, quotients, and finite CDGAs.

Monomials are tuples ``((generator_index, exponent), ...)`` sorted by index;
the empty tuple is the unit.  Odd generators have exponent at most one.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct
from typing import Hashable, Iterable, Mapping, Sequence

from ._rational import Q, ZERO, ONE, to_q, q_str
from .chain import ChainComplex, GradedDimensionVector
from .expr import Term, parse_expression, ParseError
from .linalg import Echelon, axpy, kernel_and_image

Monomial = tuple


class AlgebraError(ValueError):
    pass


class WindowExceeded(AlgebraError):
    pass


class InvalidPresentation(AlgebraError):
    def __init__(self, message: str, generator: str | None = None):
        self.generator = generator
        super().__init__(message)


class MixedAlgebras(AlgebraError):
    pass


class NotFiniteDimensional(AlgebraError):
    pass


class NotConnected(AlgebraError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    stage: int | None = None

    @property
    def parity(self) -> int:
        return self.degree % 2


def mono_mul(a: Monomial, b: Monomial, odd: Sequence[bool]) -> tuple[int, Monomial | None]:
    """Product of two monomials with its Koszul sign; sign 0 when it vanishes."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    res = []
    swaps = 0
    odd_left = sum(1 for g, _ in a if odd[g])
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        ga, ea = a[i]
        gb, eb = b[j]
        if ga < gb:
            res.append(a[i])
            if odd[ga]:
                odd_left -= 1
            i += 1
        elif gb < ga:
            if odd[gb]:
                swaps += odd_left
            res.append(b[j])
            j += 1
        else:
            if odd[ga]:
                return 0, None
            res.append((ga, ea + eb))
            i += 1
            j += 1
    if i < la:
        res.extend(a[i:])
    if j < lb:
        res.extend(b[j:])
    return (-1 if swaps & 1 else 1), tuple(res)


def mono_degree(m: Monomial, degrees: Sequence[int]) -> int:
    return sum(degrees[g] * e for g, e in m)


def mono_length(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_str(m: Monomial, names: Sequence[str]) -> str:
    if not m:
        return "1"
    return "*".join(names[g] if e == 1 else f"{names[g]}^{e}" for g, e in m)


def terms_str(terms: Mapping, names: Sequence[str]) -> str:
    if not terms:
        return "0"
    parts = []
    for m, c in terms.items():
        c = to_q(c)
        mono = mono_str(m, names)
        neg = c < 0
        a = -c if neg else c
        if mono == "1":
            body = q_str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{q_str(a)}*{mono}"
        parts.append(("- " if neg else "+ ") + body)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:] if s.startswith("- ") else s


class Element:
    """A Q-linear combination of normal-form monomials of one presentation."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: "CdgaPresentation", terms: Mapping):
        self.alg = alg
        self.terms = {m: to_q(c) for m, c in terms.items() if c}

    def _check(self, other: "Element"):
        if other.alg is not self.alg:
            raise MixedAlgebras("elements belong to different algebras")

    def _coerce(self, other):
        if isinstance(other, Element):
            self._check(other)
            return other
        return Element(self.alg, {(): to_q(other)} if other else {})

    @property
    def degree(self) -> int | None:
        degs = {mono_degree(m, self.alg.degrees) for m in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None if degs else None

    def is_homogeneous(self) -> bool:
        return len({mono_degree(m, self.alg.degrees) for m in self.terms}) <= 1

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Element):
            return self.alg is other.alg and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        axpy(out, 1, other.terms)
        return Element(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Element):
            self._check(other)
            return Element(self.alg, self.alg.mul_terms(self.terms, other.terms))
        c = to_q(other)
        return Element(self.alg, {m: c * v for m, v in self.terms.items()})

    def __rmul__(self, other):
        c = to_q(other)
        return Element(self.alg, {m: c * v for m, v in self.terms.items()})

    def __pow__(self, k: int):
        out = self.alg.one()
        for _ in range(k):
            out = out * self
        return out

    def d(self) -> "Element":
        return Element(self.alg, self.alg.d_terms(self.terms))

    def word_length_at_least(self, k: int) -> bool:
        return all(mono_length(m) >= k for m in self.terms)

    def __repr__(self) -> str:
        return terms_str(self.terms, self.alg.names)


def _as_terms_from_parsed(alg: "CdgaPresentation", parsed: list[Term], free: bool) -> dict:
    out: dict = {}
    for t in parsed:
        acc = {(): to_q(t.coeff)}
        for name, exp in t.factors:
            g = alg.index[name]
            if alg.odd[g] and exp > 1:
                raise ParseError(f"odd generator {name!r} cannot carry exponent {exp}")
            for _ in range(exp):
                acc = alg.mul_terms(acc, {((g, 1),): ONE}, reduce=not free)
        axpy(out, 1, acc)
    return out


class CdgaPresentation:
    """``(ΛV / I, d)`` with generators of non-negative degree, windowed at ``max_degree``.

    ``word_cap`` bounds the total exponent of degree-0 generators in any
    monomial; positive-degree generators need no cap.
    """

    def __init__(
        self,
        generators: Sequence[Generator],
        differential: Mapping | None = None,
        relations: Sequence = (),
        *,
        max_degree: int = 12,
        word_cap: int = 6,
        name: str = "",
        allow_degree_zero: bool = False,
        validate: bool = True,
    ):
        self.generators = tuple(generators)
        self.names = tuple(g.name for g in self.generators)
        if len(set(self.names)) != len(self.names):
            raise InvalidPresentation("generator names must be unique")
        self.index = {n: i for i, n in enumerate(self.names)}
        self.degrees = tuple(g.degree for g in self.generators)
        self.odd = tuple(bool(d % 2) for d in self.degrees)
        self.max_degree = max_degree
        self.word_cap = word_cap
        self.name = name
        for g in self.generators:
            if g.degree < 0 or (g.degree == 0 and not allow_degree_zero):
                raise InvalidPresentation(f"generator {g.name!r} has degree {g.degree}; input algebras need degree >= 1", g.name)
        self._zero_gens = frozenset(i for i, d in enumerate(self.degrees) if d == 0)
        self._mono_cache: dict[int, list] = {}
        self._mono_index: dict[int, dict] = {}
        self._ideal_cache: dict[int, Echelon] = {}
        self._basis_cache: dict[int, list] = {}
        self._dmono_cache: dict = {}
        self.relations: tuple = ()
        rels = []
        for r in relations:
            rels.append(self._to_terms(r, free=True))
        for r in rels:
            for m in r:
                if any(g in self._zero_gens for g, _ in m):
                    raise InvalidPresentation("relations may not involve degree-0 generators")
            if len({mono_degree(m, self.degrees) for m in r}) > 1:
                raise InvalidPresentation(f"relation {terms_str(r, self.names)} is not homogeneous")
        self.relations = tuple(r for r in rels if r)
        self._raw_d: dict[int, dict] = {}
        for key, val in (differential or {}).items():
            gi = self.index[key] if isinstance(key, str) else key
            self._raw_d[gi] = self._to_terms(val, free=True)
        self._d_gen: dict[int, dict] = {}
        for gi in range(len(self.generators)):
            self._d_gen[gi] = self.normal_form(self._raw_d.get(gi, {}))
        self.stages = self._infer_stages()
        if validate:
            self.validate()

    # -- construction helpers ------------------------------------------------

    def _to_terms(self, val, free: bool = False) -> dict:
        if isinstance(val, Element):
            return dict(val.terms)
        if isinstance(val, str):
            parsed = parse_expression(val, self.index)
            return _as_terms_from_parsed(self, parsed, free)
        if isinstance(val, Mapping):
            return {tuple(m): to_q(c) for m, c in val.items() if c}
        if val == 0 or val is None:
            return {}
        raise TypeError(f"cannot interpret {val!r} as an element")

    def element(self, val) -> Element:
        return Element(self, self.normal_form(self._to_terms(val, free=True)))

    def gen(self, name: str) -> Element:
        return Element(self, self.normal_form({((self.index[name], 1),): ONE}))

    def one(self) -> Element:
        return Element(self, {(): ONE})

    def zero(self) -> Element:
        return Element(self, {})

    def differential_of(self, name: str) -> Element:
        return Element(self, self._d_gen[self.index[name]])

    def raw_differential(self, name: str) -> dict:
        return dict(self._raw_d.get(self.index[name], {}))

    # -- monomials -----------------------------------------------------------

    def mono_degree(self, m: Monomial) -> int:
        return mono_degree(m, self.degrees)

    def zero_length(self, m: Monomial) -> int:
        return sum(e for g, e in m if g in self._zero_gens)

    def monomials(self, n: int) -> list:
        """All free monomials of degree ``n`` (degree-0 length capped)."""
        if n > self.max_degree:
            raise WindowExceeded(f"degree {n} exceeds window {self.max_degree}")
        if n < 0:
            return []
        if n in self._mono_cache:
            return self._mono_cache[n]
        gens = list(range(len(self.generators)))
        out = []

        def rec(k: int, remaining: int, zero_left: int, acc: list):
            if k == len(gens):
                if remaining == 0:
                    out.append(tuple(acc))
                return
            d = self.degrees[k]
            if d == 0:
                top = zero_left
            elif self.odd[k]:
                top = 1 if d <= remaining else 0
            else:
                top = remaining // d
            for e in range(top, -1, -1):
                if e:
                    acc.append((k, e))
                rec(k + 1, remaining - d * e, zero_left - (e if d == 0 else 0), acc)
                if e:
                    acc.pop()

        rec(0, n, self.word_cap, [])
        out.sort(key=lambda m: (mono_length(m), m))
        self._mono_cache[n] = out
        self._mono_index[n] = {m: i for i, m in enumerate(out)}
        return out

    def _ideal(self, n: int) -> Echelon:
        if n in self._ideal_cache:
            return self._ideal_cache[n]
        ech = Echelon()
        if self.relations:
            mons = self.monomials(n)
            idx = self._mono_index[n]
            for r in self.relations:
                k = self.mono_degree(next(iter(r)))
                if k > n:
                    continue
                for m in self.monomials(n - k):
                    vec: dict = {}
                    for rm, c in r.items():
                        s, p = mono_mul(m, rm, self.odd)
                        if s and p in idx:
                            axpy(vec, s * c, {idx[p]: ONE})
                    if vec:
                        ech.add(vec)
        self._ideal_cache[n] = ech
        return ech

    def ideal_dim(self, n: int) -> int:
        return self._ideal(n).rank

    def basis(self, n: int) -> list:
        """Standard monomials of degree ``n``: a basis of the quotient."""
        if n in self._basis_cache:
            return self._basis_cache[n]
        mons = self.monomials(n)
        piv = self._ideal(n).rows
        b = [m for i, m in enumerate(mons) if i not in piv]
        self._basis_cache[n] = b
        return b

    def normal_form(self, terms: Mapping) -> dict:
        if not self.relations:
            return {m: c for m, c in terms.items() if c}
        by_deg: dict[int, dict] = {}
        for m, c in terms.items():
            if c:
                by_deg.setdefault(self.mono_degree(m), {})[m] = c
        out = {}
        for n, part in by_deg.items():
            self.monomials(n)
            idx = self._mono_index[n]
            mons = self._mono_cache[n]
            vec = {}
            for m, c in part.items():
                if m in idx:
                    vec[idx[m]] = vec.get(idx[m], ZERO) + c
            vec = self._ideal(n).reduce({k: v for k, v in vec.items() if v})
            for i, c in vec.items():
                out[mons[i]] = c
        return out

    # -- arithmetic ------------------------------------------------------------

    def mul_terms(self, a: Mapping, b: Mapping, reduce: bool = True) -> dict:
        out: dict = {}
        cap = self.word_cap
        zero = self._zero_gens
        for ma, ca in a.items():
            for mb, cb in b.items():
                s, p = mono_mul(ma, mb, self.odd)
                if not s:
                    continue
                if zero and sum(e for g, e in p if g in zero) > cap:
                    continue
                v = out.get(p, ZERO) + s * ca * cb
                if v:
                    out[p] = v
                else:
                    out.pop(p, None)
        return self.normal_form(out) if reduce else out

    def d_monomial(self, m: Monomial) -> dict:
        """Leibniz expansion of ``d`` on a monomial, in normal form."""
        if m in self._dmono_cache:
            return self._dmono_cache[m]
        out: dict = {}
        prefix: dict = {(): ONE}
        prefix_deg = 0
        factors = []
        for g, e in m:
            factors.extend([g] * e)
        for pos, g in enumerate(factors):
            dg = self._d_gen[g]
            if dg:
                suffix = {}
                rest = []
                for h in factors[pos + 1:]:
                    rest.append(h)
                if rest:
                    sm: Monomial = ()
                    sign = 1
                    for h in rest:
                        s, sm = mono_mul(sm, ((h, 1),), self.odd)
                        sign *= s
                        if not s:
                            break
                    suffix = {sm: to_q(sign)} if sign else {}
                else:
                    suffix = {(): ONE}
                if suffix:
                    term = self.mul_terms(self.mul_terms(prefix, dg, reduce=False), suffix, reduce=False)
                    axpy(out, -1 if prefix_deg % 2 else 1, term)
            prefix = self.mul_terms(prefix, {((g, 1),): ONE}, reduce=False)
            prefix_deg += self.degrees[g]
            if not prefix:
                break
        res = self.normal_form(out)
        self._dmono_cache[m] = res
        return res

    def d_terms(self, terms: Mapping) -> dict:
        out: dict = {}
        for m, c in terms.items():
            axpy(out, c, self.d_monomial(m))
        return self.normal_form(out) if self.relations else out

    # -- validation ----------------------------------------------------------

    def _infer_stages(self) -> tuple:
        n = len(self.generators)
        deps = {}
        for i in range(n):
            deps[i] = sorted({g for m in self._raw_d.get(i, {}) for g, _ in m})
        given = [g.stage for g in self.generators]
        stage: dict[int, int] = {}
        visiting = set()

        def visit(i):
            if i in stage:
                return stage[i]
            if i in visiting:
                raise InvalidPresentation(
                    f"differential of {self.names[i]!r} is not triangular (Sullivan condition fails)", self.names[i]
                )
            visiting.add(i)
            s = 0 if not self._raw_d.get(i) else 1 + max((visit(j) for j in deps[i]), default=-1)
            visiting.discard(i)
            stage[i] = s
            return s

        for i in range(n):
            visit(i)
        out = []
        for i in range(n):
            if given[i] is not None:
                out.append(given[i])
            else:
                out.append(stage[i])
        return tuple(out)

    def check_d_squared(self) -> dict:
        """Report ``{'ok': bool, 'failures': [(name, residue), ...]}``."""
        fails = []
        for i, g in enumerate(self.generators):
            if g.degree + 2 > self.max_degree:
                continue
            dd = self.d_terms(self._d_gen[i])
            if dd:
                fails.append((g.name, Element(self, dd)))
        return {"ok": not fails, "failures": fails}

    def validate(self) -> None:
        for i, g in enumerate(self.generators):
            raw = self._raw_d.get(i, {})
            for m in raw:
                if self.mono_degree(m) != g.degree + 1:
                    raise InvalidPresentation(
                        f"d({g.name}) must have degree {g.degree + 1}, found a term of degree {self.mono_degree(m)}", g.name
                    )
            for m in raw:
                for h, _ in m:
                    if self.stages[h] >= self.stages[i]:
                        raise InvalidPresentation(
                            f"d({g.name}) involves {self.names[h]!r} from a stage that is not strictly earlier", g.name
                        )
        rep = self.check_d_squared()
        if not rep["ok"]:
            name, res = rep["failures"][0]
            raise InvalidPresentation(f"d^2({name}) = {res} is not zero", name)
        if self.relations:
            for n in range(0, self.max_degree):
                ideal = self._ideal(n)
                mons = self._mono_cache.get(n) or self.monomials(n)
                for row in ideal.rows.values():
                    img: dict = {}
                    for i, c in row.items():
                        axpy(img, c, self.d_monomial(mons[i]))
                    if img:
                        raise InvalidPresentation(f"relation ideal is not closed under d in degree {n}")

    # -- cohomology ------------------------------------------------------------

    def chain_complex(self) -> ChainComplex:
        def basis(n):
            if n < 0 or n > self.max_degree:
                return []
            return self.basis(n)

        def d(m):
            if self.mono_degree(m) >= self.max_degree:
                return {}
            return self.d_monomial(m)

        return ChainComplex(basis, d, name=self.name)

    def cohomology(self, window: int | None = None) -> "CohomologyResult":
        D = self.max_degree if window is None else min(window, self.max_degree)
        cx = self.chain_complex()
        dims, reps = {}, {}
        for n in range(0, D):
            rs, _ = cx.homology(n)
            dims[n] = len(rs)
            reps[n] = [Element(self, cx.from_vec(n, r)) for r in rs]
        return CohomologyResult(GradedDimensionVector(dims, 0, D - 1), reps, cx)

    def certified_top(self, window: int | None = None) -> int:
        """Top degree N of a cohomology certified to vanish above N inside the window.

        Exact when ``R`` itself vanishes on a run of degrees as long as its
        largest generator degree: every longer monomial has a factor in the run.
        Otherwise a quotient must have ``H = 0`` on that run, and a free algebra
        on the last two degrees.
        """
        res = self.cohomology(window)
        D = res.dims.hi + 1
        run = max(2, max(self.degrees, default=2))
        span = range(max(D - run, 1), D)
        if not all(not self.basis(n) for n in span):
            check = span if self.relations else range(D - 2, D)
            bad = [n for n in check if res.dims.dims.get(n)]
            if bad:
                raise NotFiniteDimensional(
                    f"{self.name or 'algebra'}: cohomology is nonzero in degree {bad[-1]}, "
                    f"within {D - check[0]} of the window edge {D}; raise the window"
                )
        return max(res.dims.support(), default=0)

    def truncate(self, window: int | None = None) -> "FiniteCdga":
        """Finite quasi-isomorphic quotient ``R/J`` with ``J`` acyclic, top degree = top of H."""
        N = self.certified_top(window)
        return truncate_presentation(self, N)

    def cohomology_ring(self, window: int | None = None) -> "FiniteGradedAlgebra":
        self.certified_top(window)
        res = self.cohomology(window)
        return _ring_from_cohomology(
            res.complex,
            {n: [self_vec(res.complex, n, e.terms) for e in res.reps[n]] for n in res.reps},
            lambda a, b: self.mul_terms(a, b),
            {(): ONE},
            name=f"H({self.name})" if self.name else "H",
        )

    # -- printing ----------------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"# {self.name}"] if self.name else []
        for g, st in zip(self.generators, self.stages):
            lines.append(f"gen {g.name} : {g.degree}" + (f" stage {g.stage}" if g.stage is not None else ""))
        for i, g in enumerate(self.generators):
            lines.append(f"d {g.name} = {terms_str(self._raw_d.get(i, {}), self.names)}")
        for r in self.relations:
            lines.append(f"rel {terms_str(r, self.names)}")
        return "\n".join(lines) + "\n"

    def signature(self) -> tuple:
        return (
            tuple((g.name, g.degree) for g in self.generators),
            tuple(tuple(sorted((m, str(c)) for m, c in self._raw_d.get(i, {}).items())) for i in range(len(self.generators))),
            tuple(tuple(sorted((m, str(c)) for m, c in r.items())) for r in self.relations),
        )

    def __repr__(self) -> str:
        gens = ", ".join(f"{g.name}{g.degree}" for g in self.generators)
        return f"CdgaPresentation({self.name or '?'}: {gens})"


def self_vec(cx: ChainComplex, n: int, terms: Mapping) -> dict:
    return cx.to_vec(n, terms)


@dataclass
class CohomologyResult:
    dims: GradedDimensionVector
    reps: dict
    complex: ChainComplex = field(repr=False)


# -- finite CDGAs -----------------------------------------------------------------


class FiniteCdga:
    """A finite-dimensional CDGA given by structure constants.

    ``basis`` maps degree to a list of labels; ``table[(a, b)]`` is the product
    of basis labels as ``{label: coeff}``; ``diff[a]`` likewise.
    """

    def __init__(self, basis: Mapping[int, Sequence], unit: Hashable, table: Mapping, diff: Mapping | None = None, name: str = ""):
        self._basis = {n: list(b) for n, b in sorted(basis.items()) if b}
        self.unit = unit
        self.table = {k: {l: to_q(c) for l, c in v.items() if c} for k, v in table.items()}
        self.diff = {k: {l: to_q(c) for l, c in v.items() if c} for k, v in (diff or {}).items()}
        self.name = name
        self.deg = {l: n for n, b in self._basis.items() for l in b}
        if unit not in self.deg or self.deg[unit] != 0:
            raise AlgebraError("unit must be a degree-0 basis label")

    @property
    def degrees(self) -> list[int]:
        return list(self._basis)

    @property
    def top(self) -> int:
        return max(self._basis) if self._basis else 0

    @property
    def bottom(self) -> int:
        return min(self._basis) if self._basis else 0

    def basis(self, n: int) -> list:
        return self._basis.get(n, [])

    def labels(self) -> list:
        return [l for b in self._basis.values() for l in b]

    def degree(self, label) -> int:
        return self.deg[label]

    @property
    def has_degree_one(self) -> bool:
        return bool(self.basis(1))

    def dim(self, n: int | None = None) -> int:
        if n is None:
            return len(self.deg)
        return len(self.basis(n))

    def mul_basis(self, a, b) -> dict:
        if a == self.unit:
            return {b: ONE}
        if b == self.unit:
            return {a: ONE}
        return self.table.get((a, b), {})

    def mul(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                axpy(out, ca * cb, self.mul_basis(a, b))
        return out

    def d_label(self, a) -> dict:
        return self.diff.get(a, {})

    def d(self, x: Mapping) -> dict:
        out: dict = {}
        for a, c in x.items():
            axpy(out, c, self.d_label(a))
        return out

    def augmentation(self, x: Mapping):
        return x.get(self.unit, ZERO)

    @property
    def has_zero_differential(self) -> bool:
        return not any(self.diff.values())

    def chain_complex(self) -> ChainComplex:
        return ChainComplex(self.basis, self.d_label, name=self.name)

    def cohomology(self) -> CohomologyResult:
        cx = self.chain_complex()
        lo, hi = self.bottom, self.top
        dims, reps = {}, {}
        for n in range(lo, hi + 1):
            rs, _ = cx.homology(n)
            dims[n] = len(rs)
            reps[n] = [cx.from_vec(n, r) for r in rs]
        return CohomologyResult(GradedDimensionVector(dims, min(lo, 0) - 1, hi + 1), reps, cx)

    def cohomology_ring(self) -> "FiniteGradedAlgebra":
        res = self.cohomology()
        return _ring_from_cohomology(
            res.complex,
            {n: [res.complex.to_vec(n, r) for r in res.reps[n]] for n in res.reps},
            self.mul,
            {self.unit: ONE},
            name=f"H({self.name})" if self.name else "H",
        )

    def is_connected(self) -> bool:
        return self.bottom >= 0 and self.dim(0) == 1

    def check_axioms(self) -> list[str]:
        """Problems found among associativity, commutativity, Leibniz, d^2 = 0."""
        problems = []
        labs = self.labels()
        for a in labs:
            if self.d(self.d_label(a)):
                problems.append(f"d^2({a}) != 0")
            for b in labs:
                ab = self.mul_basis(a, b)
                ba = self.mul_basis(b, a)
                sign = -1 if (self.deg[a] * self.deg[b]) % 2 else 1
                diff = dict(ab)
                axpy(diff, -sign, ba)
                if diff:
                    problems.append(f"{a}*{b} not graded commutative")
                lhs = self.d(ab)
                rhs = self.mul(self.d_label(a), {b: ONE})
                axpy(rhs, -1 if self.deg[a] % 2 else 1, self.mul({a: ONE}, self.d_label(b)))
                axpy(lhs, -1, rhs)
                if lhs:
                    problems.append(f"Leibniz fails on ({a}, {b})")
                for c in labs:
                    l = self.mul(ab, {c: ONE})
                    r = self.mul({a: ONE}, self.mul_basis(b, c))
                    axpy(l, -1, r)
                    if l:
                        problems.append(f"associativity fails on ({a}, {b}, {c})")
        return problems

    def __repr__(self) -> str:
        return f"FiniteCdga({self.name or '?'}: dims {[self.dim(n) for n in range(self.bottom, self.top + 1)]})"


class FiniteGradedAlgebra(FiniteCdga):
    """Finite graded-commutative algebra, viewed as a CDGA with zero differential."""

    def __init__(self, basis, unit, table, name: str = ""):
        super().__init__(basis, unit, table, {}, name)

    def product_labels(self, a, b) -> dict:
        return self.mul_basis(a, b)


def _ring_from_cohomology(cx: ChainComplex, reps: Mapping, mul, unit_terms, name: str) -> FiniteGradedAlgebra:
    labels = {n: [f"h{n}_{i}" for i in range(len(rs))] for n, rs in reps.items() if rs}
    rep_terms = {}
    for n, rs in reps.items():
        for i, r in enumerate(rs):
            rep_terms[f"h{n}_{i}"] = (n, cx.from_vec(n, r))
    solvers = {}

    def coords(n: int, terms: Mapping) -> dict:
        if n not in solvers:
            e = Echelon(track=True)
            for r in cx.boundaries(n).rows.values():
                e.add(r, {})
            for i, r in enumerate(reps.get(n, [])):
                e.add(r, {i: ONE})
            solvers[n] = e
        vec = cx.to_vec(n, terms) if terms else {}
        res, tag = solvers[n].reduce(vec, {})
        if res:
            raise AlgebraError("product of cycles is not a cycle; the differential is not a derivation")
        return {f"h{n}_{i}": -c for i, c in tag.items() if c}

    unit_label = None
    if 0 in labels:
        u = coords(0, unit_terms)
        if len(u) == 1 and next(iter(u.values())) == 1:
            unit_label = next(iter(u))
    if unit_label is None:
        raise NotConnected("the unit does not give a basis class of H^0")
    table = {}
    items = list(rep_terms.items())
    for a, (na, ta) in items:
        for b, (nb, tb) in items:
            n = na + nb
            if n not in labels:
                continue
            table[a, b] = coords(n, mul(ta, tb))
    return FiniteGradedAlgebra(labels, unit_label, table, name=name)


def truncate_presentation(pres: CdgaPresentation, N: int) -> FiniteCdga:
    """``R/J`` where ``J = R^{>N} + (complement of the cycles in R^N)``."""
    basis: dict[int, list] = {}
    for n in range(0, N):
        basis[n] = list(pres.basis(n))
    top = pres.basis(N)
    cx = pres.chain_complex()
    kern = cx.cycles(N)
    ech = Echelon()
    for z in kern:
        ech.add(z)
    basis[N] = [top[p] for p in sorted(ech.rows)]
    keep = {m for b in basis.values() for m in b}

    def proj(terms: Mapping) -> dict:
        return {m: c for m, c in terms.items() if m in keep and c}

    labels = [m for b in basis.values() for m in b]
    table = {}
    for a in labels:
        for b in labels:
            if pres.mono_degree(a) + pres.mono_degree(b) > N:
                continue
            p = proj(pres.mul_terms({a: ONE}, {b: ONE}))
            if p:
                table[a, b] = p
    diff = {}
    for a in labels:
        if pres.mono_degree(a) < N:
            p = proj(pres.d_monomial(a))
            if p:
                diff[a] = p
    return FiniteCdga(basis, (), table, diff, name=pres.name)


def free_algebra(text: str, name: str = "", **kw) -> CdgaPresentation:
    """Shorthand: ``free_algebra('a:2 b:3', d={'b': 'a^2'})``."""
    gens = []
    for tok in text.split():
        nm, dg = tok.split(":")
        gens.append(Generator(nm, int(dg)))
    d = kw.pop("d", None)
    rels = kw.pop("relations", ())
    return CdgaPresentation(gens, d, rels, name=name, **kw)


def monomial_basis(A: CdgaPresentation, degree: int, word_cap: int | None = None) -> list:
    """Standard monomial basis of ``A`` in ``degree``."""
    if degree > A.max_degree:
        raise WindowExceeded(f"degree {degree} exceeds window {A.max_degree}")
    if word_cap is not None and word_cap != A.word_cap:
        B = CdgaPresentation(
            A.generators, {A.names[i]: t for i, t in A._raw_d.items()}, A.relations,
            max_degree=A.max_degree, word_cap=word_cap, name=A.name,
            allow_degree_zero=bool(A._zero_gens), validate=False,
        )
        return B.basis(degree)
    return A.basis(degree)


class PresentationBase:
    """A presentation seen through its standard-monomial basis up to its window.

    Offers the same interface as :class:`FiniteCdga` so module and extension
    code can run over either; products landing above the window are dropped.
    """

    def __init__(self, pres: CdgaPresentation):
        self.pres = pres
        self.unit = ()
        self.name = pres.name
        self.top = pres.max_degree
        self.bottom = 0

    def basis(self, n: int) -> list:
        if n < 0 or n > self.top:
            return []
        return self.pres.basis(n)

    def degree(self, label) -> int:
        return self.pres.mono_degree(label)

    @property
    def has_degree_one(self) -> bool:
        return bool(self.basis(1))

    def mul_basis(self, a, b) -> dict:
        if self.degree(a) + self.degree(b) > self.top:
            return {}
        return self.pres.mul_terms({a: ONE}, {b: ONE})

    def mul(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                axpy(out, ca * cb, self.mul_basis(a, b))
        return out

    def d_label(self, a) -> dict:
        if self.degree(a) + 1 > self.top:
            return {}
        return self.pres.d_monomial(a)

    def d(self, x: Mapping) -> dict:
        out: dict = {}
        for a, c in x.items():
            axpy(out, c, self.d_label(a))
        return out

    def augmentation(self, x: Mapping):
        return x.get((), ZERO)
