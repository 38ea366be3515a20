"""Quadratic forms on GF(q)^d, spheres, and pair counts per distance.

Vectors are tuples of :class:`~fqgraphs.finite_field.FieldElement` at the
API surface.  Internally every vector is a vertex index in ``range(q**d)``
(base-q positional code, coordinate 0 least significant) and the
vectorized helpers on :class:`QuadraticSpace` work on numpy index arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .exceptions import DegenerateForm, DimensionMismatch, FieldMismatch, IndexOutOfRange
from .finite_field import Field, FieldElement

Vector = tuple[FieldElement, ...]


def _codes(field: Field, values) -> list[int]:
    return [field(v).value for v in values]


def determinant(field: Field, matrix: Sequence[Sequence[int]]) -> int:
    """Determinant code of a square matrix of element codes (Gaussian elimination)."""
    sub, mul, inv = field.sub_table, field.mul_table, field.inv_table
    m = [list(row) for row in matrix]
    n = len(m)
    det = 1
    for col in range(n):
        pivot = next((i for i in range(col, n) if m[i][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = int(field.neg_table[det])
        det = int(mul[det, m[col][col]])
        piv_inv = int(inv[m[col][col]])
        for i in range(col + 1, n):
            if m[i][col] == 0:
                continue
            f = int(mul[m[i][col], piv_inv])
            for j in range(col, n):
                m[i][j] = int(sub[m[i][j], mul[f, m[col][j]]])
    return det


class QuadraticForm:
    """``Q(x) = x^T G x`` for a symmetric non-singular gram matrix ``G``.

    Odd characteristic makes this cover every non-degenerate quadratic form.
    """

    def __init__(self, field: Field, gram: Sequence[Sequence]):
        rows = [tuple(_codes(field, row)) for row in gram]
        d = len(rows)
        if d < 1 or any(len(row) != d for row in rows):
            raise DimensionMismatch("gram matrix must be square with d >= 1")
        for i in range(d):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise DegenerateForm("gram matrix is not symmetric")
        if determinant(field, rows) == 0:
            raise DegenerateForm("quadratic form is degenerate (det = 0)")
        self.field = field
        self.dim = d
        self.gram = tuple(rows)

    @classmethod
    def identity(cls, field: Field, d: int) -> QuadraticForm:
        """The dot-product norm ``x_1^2 + ... + x_d^2``."""
        return cls.diagonal(field, [1] * d)

    @classmethod
    def diagonal(cls, field: Field, entries: Sequence) -> QuadraticForm:
        codes = _codes(field, entries)
        d = len(codes)
        return cls(field, [[codes[i] if i == j else 0 for j in range(d)] for i in range(d)])

    @classmethod
    def twisted(cls, field: Field, d: int) -> QuadraticForm:
        """``diag(1, ..., 1, g)`` with ``g`` the smallest non-square."""
        return cls.diagonal(field, [1] * (d - 1) + [field.nonresidue().value])

    @property
    def det(self) -> FieldElement:
        return FieldElement(self.field, determinant(self.field, self.gram))

    def evaluate_codes(self, coords: np.ndarray) -> np.ndarray:
        """Vectorized ``Q`` over an array of coordinate codes, shape ``(..., d)``."""
        add, mul = self.field.add_table, self.field.mul_table
        out = np.zeros(coords.shape[:-1], dtype=np.int64)
        for i in range(self.dim):
            for j in range(self.dim):
                g = self.gram[i][j]
                if g:
                    out = add[out, mul[mul[g, coords[..., i]], coords[..., j]]]
        return out

    def __call__(self, x: Sequence) -> FieldElement:
        return evaluate(self, x)

    def __eq__(self, other) -> bool:
        return isinstance(other, QuadraticForm) and self.field == other.field and self.gram == other.gram

    def __hash__(self) -> int:
        return hash((self.field, self.gram))

    def __repr__(self) -> str:
        return f"QuadraticForm({self.field!r}, gram={[list(r) for r in self.gram]})"

    def to_dict(self) -> dict:
        return {"dim": self.dim,
                "gram": [[self.field.encode(g) for g in row] for row in self.gram]}

    @classmethod
    def from_dict(cls, field: Field, data: dict) -> QuadraticForm:
        gram = [[field.decode(v) for v in row] for row in data["gram"]]
        form = cls(field, gram)
        if "dim" in data and int(data["dim"]) != form.dim:
            raise DimensionMismatch(f"dim {data['dim']} does not match the gram matrix")
        return form


def evaluate(Q: QuadraticForm, x: Sequence) -> FieldElement:
    """Exact ``x^T G x``."""
    if len(x) != Q.dim:
        raise DimensionMismatch(f"vector of length {len(x)} for a form of dimension {Q.dim}")
    for v in x:
        if isinstance(v, FieldElement) and v.field != Q.field:
            raise FieldMismatch(f"{v.field} vs {Q.field}")
    coords = np.array(_codes(Q.field, x), dtype=np.int64)
    return FieldElement(Q.field, int(Q.evaluate_codes(coords)))


@dataclass(frozen=True)
class Sphere:
    """``{x : Q(x) = radius}`` as vertex indices in canonical order."""

    radius: FieldElement
    indices: np.ndarray
    space: QuadraticSpace

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def points(self) -> list[Vector]:
        return [self.space.index_vertex(int(i)) for i in self.indices]

    def to_dict(self) -> dict:
        enc = self.space.field.encode
        return {"radius": enc(self.radius),
                "size": len(self),
                "points": [[enc(c) for c in self.space.coords[i]] for i in self.indices]}


@dataclass(frozen=True)
class PairCount:
    """Ordered pairs ``(x, y)`` with ``Q(x - y) = t``, plus normalizations."""

    t: FieldElement
    count: int
    normalized: float  # count / q^(2d-1)
    normalized_two: float | None  # count / (2 q^(2d-1)), only for d = 2, t = 0

    def to_dict(self) -> dict:
        return {"t": self.t.field.encode(self.t), "count": self.count,
                "normalized": self.normalized, "normalized_two": self.normalized_two}


class VectorSpace:
    """GF(q)^d with the vertex-index bijection and vectorized group operations."""

    def __init__(self, field: Field, d: int):
        if d < 1:
            raise DimensionMismatch("dimension must be >= 1")
        self.field = field
        self.d = d
        self.q = field.q
        self.n = self.q**d
        self._weights = self.q ** np.arange(d, dtype=np.int64)
        idx = np.arange(self.n, dtype=np.int64)
        coords = np.stack([(idx // w) % self.q for w in self._weights], axis=1)
        coords.setflags(write=False)
        self.coords = coords

    # -- index bijection ------------------------------------------------------

    def vertex_index(self, x: Sequence) -> int:
        if len(x) != self.d:
            raise DimensionMismatch(f"vector of length {len(x)} in dimension {self.d}")
        return int(np.dot(_codes(self.field, x), self._weights))

    def index_vertex(self, i: int) -> Vector:
        if not 0 <= i < self.n:
            raise IndexOutOfRange(f"vertex index {i} not in [0, {self.n})")
        return tuple(FieldElement(self.field, int(c)) for c in self.coords[i])

    def encode_index(self, coords: np.ndarray) -> np.ndarray:
        return coords @ self._weights

    # -- vectorized group operations on index arrays ---------------------------

    def add_index(self, u, v) -> np.ndarray:
        """Index of ``u + v`` (broadcasting)."""
        c = self.field.add_table[self.coords[u], self.coords[v]]
        return c @ self._weights

    def sub_index(self, u, v) -> np.ndarray:
        """Index of ``u - v`` (broadcasting)."""
        c = self.field.sub_table[self.coords[u], self.coords[v]]
        return c @ self._weights

    def neg_index(self, u) -> np.ndarray:
        return self.field.neg_table[self.coords[u]] @ self._weights

    def scale_index(self, t: int, u) -> np.ndarray:
        """Index of ``t * u`` for a scalar code ``t``."""
        return self.field.mul_table[t, self.coords[u]] @ self._weights

    def dot_codes(self, u, v) -> np.ndarray:
        """Standard bilinear dot product ``sum u_i v_i`` as element codes."""
        add, mul = self.field.add_table, self.field.mul_table
        cu, cv = self.coords[u], self.coords[v]
        out = mul[cu[..., 0], cv[..., 0]]
        for i in range(1, self.d):
            out = add[out, mul[cu[..., i], cv[..., i]]]
        return out


class QuadraticSpace(VectorSpace):
    """GF(q)^d equipped with a non-degenerate quadratic form.

    Precomputes the coordinate table of all ``q**d`` vertices and the value
    of ``Q`` at each of them.
    """

    def __init__(self, form: QuadraticForm):
        super().__init__(form.field, form.dim)
        self.form = form
        norms = form.evaluate_codes(self.coords)
        norms.setflags(write=False)
        self.norms = norms

    def distance(self, u, v) -> np.ndarray:
        """``Q(u - v)`` as element codes (broadcasting)."""
        return self.norms[self.sub_index(u, v)]

    # -- spheres and counts ---------------------------------------------------

    def sphere(self, a) -> Sphere:
        a = self.field(a)
        idx = np.flatnonzero(self.norms == a.value)
        idx.setflags(write=False)
        return Sphere(a, idx, self)

    @cached_property
    def sphere_sizes(self) -> np.ndarray:
        """``|sphere(a)|`` for every code ``a``."""
        return np.bincount(self.norms, minlength=self.q)

    def pair_count(self, t) -> PairCount:
        t = self.field(t)
        count = self.n * int(self.sphere_sizes[t.value])
        scale = self.q ** (2 * self.d - 1)
        two = count / (2 * scale) if (self.d == 2 and t.value == 0) else None
        return PairCount(t, count, count / scale, two)

    def __repr__(self) -> str:
        return f"QuadraticSpace({self.form!r})"


def sphere(Q: QuadraticForm, a) -> Sphere:
    return QuadraticSpace(Q).sphere(a)


def pair_count(Q: QuadraticForm, t) -> PairCount:
    return QuadraticSpace(Q).pair_count(t)
