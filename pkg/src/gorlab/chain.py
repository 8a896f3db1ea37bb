"""Cochain complexes with finite bases per degree and their homology.

A complex is given by a basis function ``degree -> list of labels`` and a
differential ``label -> {label: coeff}`` raising degree by one.  Everything
downstream (algebras, modules, Hom and tensor complexes) is flattened to
this form before any rank is taken.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping

from .linalg import Echelon, kernel_and_image


class UncertifiedDegree(KeyError):
    """Raised when a dimension is requested outside its validity window."""


@dataclass(frozen=True)
class GradedDimensionVector:
    """Degree -> dimension, trustworthy only on ``[lo, hi]``."""

    dims: Mapping[int, int]
    lo: int
    hi: int
    stable: bool = True

    def __post_init__(self):
        clean = {}
        for n, k in self.dims.items():
            if k < 0:
                raise ValueError("dimensions are non-negative")
            if not self.lo <= n <= self.hi:
                raise ValueError(f"degree {n} outside window [{self.lo}, {self.hi}]")
            if k:
                clean[int(n)] = int(k)
        object.__setattr__(self, "dims", dict(sorted(clean.items())))

    def __getitem__(self, n: int) -> int:
        if not self.lo <= n <= self.hi:
            raise UncertifiedDegree(n)
        return self.dims.get(n, 0)

    def certified(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def support(self) -> list[int]:
        return list(self.dims)

    def mirror(self) -> "GradedDimensionVector":
        return GradedDimensionVector({-n: k for n, k in self.dims.items()}, -self.hi, -self.lo, self.stable)

    def restrict(self, lo: int, hi: int) -> "GradedDimensionVector":
        lo, hi = max(lo, self.lo), min(hi, self.hi)
        return GradedDimensionVector({n: k for n, k in self.dims.items() if lo <= n <= hi}, lo, hi, self.stable)

    def as_pairs(self) -> list[dict]:
        return [{"degree": n, "dim": k} for n, k in self.dims.items()]

    def to_json(self) -> dict:
        return {"dims": self.as_pairs(), "window": [self.lo, self.hi], "stable": self.stable}

    def __repr__(self) -> str:
        return f"GDV({self.dims}, window=[{self.lo}, {self.hi}])"


def convolve(a: GradedDimensionVector, b: GradedDimensionVector) -> dict[int, int | None]:
    """Degreewise convolution; ``None`` marks degrees depending on uncertified data.

    A degree ``n`` is determined when every split ``p + q = n`` with one side
    certified-nonzero has the other side certified.
    """
    out: dict[int, int | None] = {}
    for n in range(a.lo + b.lo, a.hi + b.hi + 1):
        total, ok = 0, True
        for p in range(a.lo, a.hi + 1):
            q = n - p
            ap = a.dims.get(p, 0)
            if not ap:
                continue
            if not b.certified(q):
                ok = False
                break
            total += ap * b.dims.get(q, 0)
        if ok:
            for q in range(b.lo, b.hi + 1):
                if b.dims.get(q, 0) and not a.certified(n - q):
                    ok = False
                    break
        out[n] = total if ok else None
    return out


Label = Hashable


class ChainComplex:
    """Lazily evaluated cochain complex."""

    def __init__(self, basis: Callable[[int], list], d: Callable[[Label], Mapping], name: str = ""):
        self._basis_fn = basis
        self._d_fn = d
        self.name = name
        self._bases: dict[int, list] = {}
        self._index: dict[int, dict] = {}
        self._cols: dict[int, list] = {}
        self._ker: dict[int, tuple] = {}

    def basis(self, n: int) -> list:
        if n not in self._bases:
            b = list(self._basis_fn(n))
            self._bases[n] = b
            self._index[n] = {l: i for i, l in enumerate(b)}
        return self._bases[n]

    def index(self, n: int) -> dict:
        self.basis(n)
        return self._index[n]

    def dim(self, n: int) -> int:
        return len(self.basis(n))

    def d(self, label: Label) -> Mapping:
        return self._d_fn(label)

    def to_vec(self, n: int, element: Mapping) -> dict:
        idx = self.index(n)
        out = {}
        for k, v in element.items():
            if v:
                if k not in idx:
                    raise KeyError(f"{k!r} is not a basis label in degree {n}")
                out[idx[k]] = v
        return out

    def from_vec(self, n: int, vec: Mapping) -> dict:
        b = self.basis(n)
        return {b[i]: x for i, x in vec.items()}

    def columns(self, n: int) -> list:
        """Images of the degree-n basis in degree-(n+1) index coordinates."""
        if n not in self._cols:
            tgt = self.index(n + 1)
            cols = []
            for l in self.basis(n):
                img = self._d_fn(l)
                col = {}
                for k, v in img.items():
                    if v:
                        try:
                            col[tgt[k]] = v
                        except KeyError:
                            raise KeyError(f"d({l!r}) has term {k!r} outside the degree-{n + 1} basis") from None
                cols.append(col)
            self._cols[n] = cols
        return self._cols[n]

    def _kernel_image(self, n: int):
        if n not in self._ker:
            self._ker[n] = kernel_and_image(self.columns(n))
        return self._ker[n]

    def cycles(self, n: int) -> list[dict]:
        return self._kernel_image(n)[0]

    def boundaries(self, n: int) -> Echelon:
        """Echelon of ``d(C^{n-1})`` in degree-n coordinates."""
        return self._kernel_image(n - 1)[1]

    def rank_d(self, n: int) -> int:
        return self._kernel_image(n)[1].rank

    def homology_dim(self, n: int) -> int:
        return self.dim(n) - self.rank_d(n) - self.rank_d(n - 1)

    def homology(self, n: int) -> tuple[list[dict], Echelon]:
        """Representative cycles (index vectors) of a basis of H^n, plus B^n."""
        bnd = self.boundaries(n).copy()
        bnd.track = False
        reps = []
        work = Echelon()
        for r in bnd.rows.values():
            work.add(r)
        for z in self.cycles(n):
            r = work.reduce(z)
            if r:
                work.add(r)
                reps.append(r)
        return reps, self.boundaries(n)

    def check_d_squared(self, n: int) -> bool:
        for col in self.columns(n):
            tgt = self.basis(n + 1)
            img: dict = {}
            for i, c in col.items():
                for k, v in self._d_fn(tgt[i]).items():
                    s = img.get(k, 0) + c * v
                    if s:
                        img[k] = s
                    else:
                        img.pop(k, None)
            if img:
                return False
        return True


def induced_rank(src: ChainComplex, tgt: ChainComplex, f: Callable[[Label], Mapping], n: int) -> int:
    """Rank of ``H^n(f)`` for a chain map ``f: src -> tgt``."""
    tidx = tgt.index(n)
    e = Echelon()
    for r in tgt.boundaries(n).rows.values():
        e.add(r)
    base = e.rank
    sb = src.basis(n)
    for z in src.cycles(n):
        img: dict = {}
        for i, c in z.items():
            for k, v in f(sb[i]).items():
                j = tidx[k]
                s = img.get(j, 0) + c * v
                if s:
                    img[j] = s
                else:
                    img.pop(j, None)
        e.add(img)
    return e.rank - base


def is_quasi_iso(src: ChainComplex, tgt: ChainComplex, f: Callable[[Label], Mapping], degrees: Iterable[int]) -> bool:
    for n in degrees:
        hs, ht = src.homology_dim(n), tgt.homology_dim(n)
        if hs != ht or induced_rank(src, tgt, f, n) != ht:
            return False
    return True
