"""Exact sparse linear algebra over Q.

Vectors are ``dict[int, Q]`` keyed by column index with zeros omitted.  The
index order is the elimination order, so callers control determinism by
how they number their labels.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

from ._rational import Q, ZERO, to_q

Vec = dict


class NotASubspace(ValueError):
    pass


def axpy(y: Vec, c, x: Mapping) -> None:
    """In place ``y += c * x``."""
    for k, v in x.items():
        s = y.get(k, ZERO) + c * v
        if s:
            y[k] = s
        else:
            y.pop(k, None)


def scale(c, x: Mapping) -> Vec:
    if not c:
        return {}
    return {k: c * v for k, v in x.items()}


def vec_add(*vs: Mapping) -> Vec:
    out: Vec = {}
    for v in vs:
        axpy(out, 1, v)
    return out


class Echelon:
    """Row echelon basis of a subspace, optionally tracking combinations.

    Each stored row has pivot coefficient 1 and only columns >= its pivot.
    When ``track`` is on, every row carries the combination of inserted
    vectors' tags that produced it.
    """

    __slots__ = ("rows", "tags", "track")

    def __init__(self, track: bool = False):
        self.rows: dict[int, Vec] = {}
        self.tags: dict[int, Vec] = {}
        self.track = track

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def copy(self) -> "Echelon":
        e = Echelon(self.track)
        e.rows = dict(self.rows)
        e.tags = dict(self.tags)
        return e

    def reduce(self, v: Mapping, tag: Mapping | None = None):
        """Reduce ``v`` against the basis; returns residual (and tag if tracking)."""
        v = {k: x for k, x in v.items() if x}
        t = dict(tag) if tag is not None else ({} if self.track else None)
        rows = self.rows
        heap = [k for k in v if k in rows]
        heapq.heapify(heap)
        seen = set()
        while heap:
            p = heapq.heappop(heap)
            if p in seen:
                continue
            seen.add(p)
            c = v.get(p)
            if not c:
                continue
            row = rows[p]
            for k, x in row.items():
                s = v.get(k, ZERO) - c * x
                if s:
                    if k not in v and k in rows and k not in seen:
                        heapq.heappush(heap, k)
                    v[k] = s
                else:
                    v.pop(k, None)
            if t is not None:
                axpy(t, -c, self.tags[p])
        if self.track:
            return v, t
        return v

    def add(self, v: Mapping, tag: Mapping | None = None) -> bool:
        """Insert ``v``; returns False when it is already in the span."""
        if self.track:
            r, t = self.reduce(v, tag)
        else:
            r, t = self.reduce(v), None
        if not r:
            return False
        p = min(r)
        c = r[p]
        inv = 1 / c
        self.rows[p] = {k: x * inv for k, x in r.items()}
        if self.track:
            self.tags[p] = {k: x * inv for k, x in t.items()}
        return True

    def contains(self, v: Mapping) -> bool:
        r = self.reduce(v)
        if self.track:
            r = r[0]
        return not r

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def rref(self) -> list[Vec]:
        """Fully reduced rows in pivot order."""
        piv = sorted(self.rows)
        out: dict[int, Vec] = {}
        for p in reversed(piv):
            row = dict(self.rows[p])
            for q in [k for k in row if k != p and k in out]:
                c = row.get(q)
                if c:
                    axpy(row, -c, out[q])
            out[p] = row
        return [out[p] for p in piv]


def kernel_and_image(columns: Sequence[Mapping]) -> tuple[list[Vec], Echelon]:
    """Kernel basis (in source coordinates) and image echelon of a linear map.

    ``columns[j]`` is the image of source basis vector ``j``.
    """
    ech = Echelon(track=True)
    kernel: list[Vec] = []
    for j, col in enumerate(columns):
        r, t = ech.reduce(col, {j: Q(1)})
        if not r:
            kernel.append(t)
            continue
        p = min(r)
        inv = 1 / r[p]
        ech.rows[p] = {k: x * inv for k, x in r.items()}
        ech.tags[p] = {k: x * inv for k, x in t.items()}
    return kernel, ech


def rref_of(vectors: Iterable[Mapping]) -> list[Vec]:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e.rref()


def span_rank(vectors: Iterable[Mapping]) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e.rank


def solve_columns(columns: Sequence[Mapping], rhs: Mapping) -> Vec | None:
    """Some ``x`` with ``sum x_j columns[j] == rhs``, or None."""
    _, ech = kernel_and_image(columns)
    r, t = ech.reduce(rhs, {})
    if r:
        return None
    return {k: -v for k, v in t.items() if v}


# -- labelled interface -------------------------------------------------------


@dataclass(frozen=True)
class SparseMatrix:
    """Rows x columns over opaque ordered labels; entries omit zeros."""

    rows: tuple
    cols: tuple
    entries: Mapping = field(default_factory=dict)

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence], rows=None, cols=None) -> "SparseMatrix":
        nr = len(dense)
        nc = len(dense[0]) if nr else 0
        rows = tuple(range(nr)) if rows is None else tuple(rows)
        cols = tuple(range(nc)) if cols is None else tuple(cols)
        ent = {}
        for i, r in enumerate(dense):
            for j, x in enumerate(r):
                x = to_q(x)
                if x:
                    ent[rows[i], cols[j]] = x
        return cls(rows, cols, ent)

    def __post_init__(self):
        rs, cs = set(self.rows), set(self.cols)
        clean = {}
        for (r, c), x in self.entries.items():
            if r not in rs or c not in cs:
                raise KeyError(f"entry ({r!r}, {c!r}) outside declared index sets")
            x = to_q(x)
            if x:
                clean[r, c] = x
        object.__setattr__(self, "entries", clean)

    def columns(self) -> list[Vec]:
        ridx = {r: i for i, r in enumerate(self.rows)}
        cidx = {c: j for j, c in enumerate(self.cols)}
        out: list[Vec] = [{} for _ in self.cols]
        for (r, c), x in self.entries.items():
            out[cidx[c]][ridx[r]] = x
        return out

    def apply(self, x: Mapping) -> dict:
        y: dict = {}
        for (r, c), v in self.entries.items():
            xc = x.get(c)
            if xc:
                s = y.get(r, ZERO) + v * xc
                if s:
                    y[r] = s
                else:
                    y.pop(r, None)
        return y


@dataclass(frozen=True)
class Subspace:
    """Span of vectors over ``labels``, stored in reduced echelon form."""

    labels: tuple
    vectors: tuple = ()

    @classmethod
    def span(cls, labels: Sequence[Hashable], vectors: Iterable[Mapping]) -> "Subspace":
        labels = tuple(labels)
        idx = {l: i for i, l in enumerate(labels)}
        rows = rref_of({idx[k]: to_q(v) for k, v in vec.items() if v} for vec in vectors)
        return cls(labels, tuple({labels[i]: x for i, x in r.items()} for r in rows))

    @classmethod
    def full(cls, labels: Sequence[Hashable]) -> "Subspace":
        return cls.span(labels, ({l: 1} for l in labels))

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def _index(self):
        return {l: i for i, l in enumerate(self.labels)}

    def _echelon(self) -> Echelon:
        idx = self._index()
        e = Echelon()
        for v in self.vectors:
            e.add({idx[k]: x for k, x in v.items()})
        return e

    def contains(self, vec: Mapping) -> bool:
        idx = self._index()
        return self._echelon().contains({idx[k]: to_q(x) for k, x in vec.items() if x})

    def pivots(self) -> list:
        idx = self._index()
        return [min(v, key=idx.__getitem__) for v in self.vectors]


def echelonize(m: SparseMatrix) -> tuple[int, Subspace, Subspace]:
    """Rank, kernel (in column labels) and image (in row labels) of ``m``."""
    kern, ech = kernel_and_image(m.columns())
    kernel = Subspace.span(m.cols, ({m.cols[j]: x for j, x in v.items()} for v in kern))
    image = Subspace.span(m.rows, ({m.rows[i]: x for i, x in r.items()} for r in ech.rows.values()))
    return ech.rank, kernel, image


def solve(m: SparseMatrix, rhs: Mapping) -> dict | None:
    """Exact solution of ``m x = rhs`` keyed by column labels, or None."""
    ridx = {r: i for i, r in enumerate(m.rows)}
    b = {ridx[k]: to_q(v) for k, v in rhs.items() if v}
    x = solve_columns(m.columns(), b)
    if x is None:
        return None
    return {m.cols[j]: v for j, v in x.items()}


def coset_basis(sub: Subspace, ambient: Subspace) -> Subspace:
    """Vectors completing ``sub`` to a basis of ``ambient``."""
    if sub.labels != ambient.labels:
        raise NotASubspace("subspaces live over different label sets")
    amb = ambient._echelon()
    idx = ambient._index()
    for v in sub.vectors:
        if not amb.contains({idx[k]: x for k, x in v.items()}):
            raise NotASubspace("sub is not contained in ambient")
    e = sub._echelon()
    reps = []
    for v in ambient.vectors:
        r = e.reduce({idx[k]: x for k, x in v.items()})
        if r:
            e.add(r)
            reps.append(r)
    rows = rref_of(reps)
    # rows may still carry components along pivots of sub; reduce them away
    base = sub._echelon()
    out = []
    for r in rows:
        r = base.reduce(r)
        out.append({ambient.labels[i]: x for i, x in r.items()})
    return Subspace(ambient.labels, tuple(out))
