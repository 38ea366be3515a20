"""Colored Cayley graphs on GF(q)^d and their spectra.

Every color class (and every F-distance graph) is a Cayley graph of the
additive group GF(q)^d, so the characters ``e_m(x) = chi(x . m)`` are a
common eigenbasis and the eigenvalue at frequency ``m`` is the character
sum of the connection set.  Two independent routes compute the spectrum:

* :func:`full_spectrum` sums characters directly (``method="sum"``) or
  runs a multidimensional FFT over Z_p^(rd) (``method="fft"``).
* :func:`dense_spectrum_oracle` builds the adjacency matrix and calls a
  symmetric eigensolver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .exceptions import DimensionMismatch, NonRealEigenvalue, TooLarge
from .finite_field import Field, FieldElement
from .quadratic_space import QuadraticForm, QuadraticSpace, VectorSpace

IMAG_TOL = 1e-9
RAMANUJAN_SLACK = 1e-6
DENSE_CAP = 1000
_CHUNK = 1 << 21  # max entries in one (frequency x connection-set) block


class ColoredCayleyGraph:
    """``K_{q^d}`` with edge ``{x, y}`` colored by ``Q(x - y)``.

    Pairs at distance zero stay uncolored; color ``a`` induces the Cayley
    graph with connection set ``sphere(Q, a)``.
    """

    def __init__(self, space: QuadraticSpace):
        self.space = space
        self.field = space.field
        self.q = space.q
        self.d = space.d
        self.n = space.n
        self._sets: dict[int, np.ndarray] = {}

    @classmethod
    def build(cls, field: Field, d: int, form: str | QuadraticForm = "identity") -> ColoredCayleyGraph:
        if isinstance(form, str):
            if form == "identity":
                form = QuadraticForm.identity(field, d)
            elif form in ("twisted", "nonresidue"):
                form = QuadraticForm.twisted(field, d)
            else:
                raise ValueError(f"unknown named form {form!r}")
        if form.dim != d:
            raise DimensionMismatch(f"form of dimension {form.dim} for d = {d}")
        return cls(QuadraticSpace(form))

    @property
    def form(self) -> QuadraticForm:
        return self.space.form

    @property
    def colors(self) -> list[FieldElement]:
        return self.field.nonzero()

    def connection_set(self, a) -> np.ndarray:
        code = self.field(a).value
        if code not in self._sets:
            self._sets[code] = self.space.sphere(code).indices
        return self._sets[code]

    def valency(self, a) -> int:
        return len(self.connection_set(a))

    def color(self, u, v) -> np.ndarray:
        """Color code of ``{u, v}``; 0 marks an uncolored pair (incl. u == v)."""
        return self.space.distance(u, v)

    def neighbors(self, u: int, a) -> np.ndarray:
        return self.space.add_index(u, self.connection_set(a))

    def adjacency(self, a) -> np.ndarray:
        """Dense 0/1 adjacency matrix of color class ``a``."""
        a = self.field(a).value
        idx = np.arange(self.n)
        return (self.color(idx[:, None], idx[None, :]) == a).astype(np.int8)

    def __repr__(self) -> str:
        return f"ColoredCayleyGraph({self.form!r})"


# -- character-sum kernels ----------------------------------------------------

def _roots(p: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(p) / p)


def character_sums(space: VectorSpace, conn: np.ndarray, freqs: np.ndarray | None = None) -> np.ndarray:
    """``sum_{x in conn} chi(x . m)`` for each frequency index ``m``.

    The traces are tallied exactly as integers first; each sum is then one
    length-p dot product with the p-th roots of unity.
    """
    field = space.field
    p = field.p
    if freqs is None:
        freqs = np.arange(space.n)
    freqs = np.asarray(freqs, dtype=np.int64)
    out = np.empty(len(freqs), dtype=complex)
    if len(conn) == 0:
        out[:] = 0
        return out
    step = max(1, _CHUNK // len(conn))
    roots = _roots(p)
    for start in range(0, len(freqs), step):
        m = freqs[start:start + step]
        tr = field.trace_table[space.dot_codes(m[:, None], conn[None, :])]
        rows = np.arange(len(m))[:, None]
        tally = np.bincount((rows * p + tr).ravel(), minlength=len(m) * p).reshape(len(m), p)
        out[start:start + step] = tally @ roots
    return out


def _trace_form(field: Field) -> np.ndarray:
    """Gram matrix ``T[j, k] = Tr(alpha^(j+k))`` of the trace pairing on the power basis."""
    basis = [field.p**j for j in range(field.r)]
    return np.array([[field.trace_table[field.mul_table[a, b]] for b in basis] for a in basis])


def character_sums_fft(space: VectorSpace, conn: np.ndarray) -> np.ndarray:
    """All character sums at once via an FFT over Z_p^(rd).

    With coordinates written in the power basis, ``Tr(x . m) = sum_i c(x_i)^T T c(m_i)``,
    so the sum at ``m`` is the inverse DFT of the indicator of ``conn`` at
    frequency ``T c(m)``.
    """
    field = space.field
    p, r, d = field.p, field.r, space.d
    indicator = np.zeros(space.n)
    indicator[conn] = 1.0
    # vertex index = sum of base-p digits, least significant first; C order reverses axes
    grid = indicator.reshape((p,) * (r * d))
    spectrum = np.fft.ifftn(grid) * space.n
    digits = field.digits[space.coords]  # (n, d, r)
    freq_digits = (digits @ _trace_form(field).T) % p
    weights = p ** np.arange(r * d)
    k = freq_digits.reshape(space.n, r * d) @ weights
    return spectrum.ravel()[k]


# -- reports ------------------------------------------------------------------

def ramanujan_bound(q: int, d: int) -> float:
    return 2.0 * q ** ((d - 1) / 2)


@dataclass
class SpectrumReport:
    """Spectrum of one color class.

    ``eigenvalues`` is sorted descending; ``by_frequency[m]`` is the
    eigenvalue of the character ``e_m`` (indexed by vertex index of m).
    """

    q: int
    d: int
    form: dict
    color: FieldElement
    valency: int
    eigenvalues: np.ndarray
    by_frequency: np.ndarray = field(repr=False)
    max_nontrivial: float
    bound: float
    ramanujan_ok: bool
    max_imag_residual: float

    def to_dict(self) -> dict:
        enc = self.color.field.encode
        return {
            "q": self.q,
            "d": self.d,
            "form": self.form,
            "color": enc(self.color),
            "valency": self.valency,
            "eigenvalues": [_clean(v) for v in self.eigenvalues],
            "max_nontrivial": _clean(self.max_nontrivial),
            "bound": self.bound,
            "ramanujan_ok": self.ramanujan_ok,
            "max_imag_residual": self.max_imag_residual,
        }


def _clean(x: float, ndigits: int = 9) -> float:
    # strip float noise so reports are stable across summation orders
    v = round(float(x), ndigits)
    return 0.0 if v == 0 else v


def _real_or_raise(sums: np.ndarray, what: str) -> tuple[np.ndarray, float]:
    resid = float(np.max(np.abs(sums.imag))) if len(sums) else 0.0
    if resid >= IMAG_TOL:
        raise NonRealEigenvalue(f"{what}: imaginary residual {resid:.3g}")
    return sums.real.copy(), resid


def eigenvalue(G: ColoredCayleyGraph, a, m: Sequence) -> float:
    """Eigenvalue of color class ``a`` at the character ``e_m``."""
    a = G.field(a)
    if a.value == 0:
        raise ValueError("color must be nonzero")
    mi = G.space.vertex_index(m)
    sums = character_sums(G.space, G.connection_set(a), np.array([mi]))
    vals, _ = _real_or_raise(sums, f"eigenvalue(color={a.value}, m={mi})")
    return float(vals[0])


def full_spectrum(G: ColoredCayleyGraph, a, method: str = "sum") -> SpectrumReport:
    """All ``q^d`` eigenvalues of color class ``a`` with the Ramanujan verdict.

    ``method="fft"`` uses :func:`character_sums_fft`; the default direct
    summation is the reference path.
    """
    a = G.field(a)
    if a.value == 0:
        raise ValueError("color must be nonzero")
    conn = G.connection_set(a)
    if method == "sum":
        sums = character_sums(G.space, conn)
    elif method == "fft":
        sums = character_sums_fft(G.space, conn)
    else:
        raise ValueError(f"unknown method {method!r}")
    vals, resid = _real_or_raise(sums, f"spectrum(color={a.value})")
    valency = len(conn)
    if abs(vals[0] - valency) >= IMAG_TOL:
        raise AssertionError(f"trivial eigenvalue {vals[0]} != valency {valency}")
    vals[0] = valency
    max_nt = float(np.max(np.abs(vals[1:]))) if G.n > 1 else 0.0
    bound = ramanujan_bound(G.q, G.d)
    return SpectrumReport(
        q=G.q, d=G.d, form=G.form.to_dict(), color=a, valency=valency,
        eigenvalues=np.sort(vals)[::-1], by_frequency=vals,
        max_nontrivial=max_nt, bound=bound,
        ramanujan_ok=bool(max_nt <= bound + RAMANUJAN_SLACK),
        max_imag_residual=resid,
    )


def dense_spectrum_oracle(G: ColoredCayleyGraph, a, cap: int = DENSE_CAP) -> np.ndarray:
    """Eigenvalues of the explicit adjacency matrix, sorted descending."""
    if G.n > cap:
        raise TooLarge(f"{G.n} vertices exceeds the dense oracle cap {cap}")
    A = G.adjacency(a).astype(float)
    return np.sort(np.linalg.eigvalsh(A))[::-1]


# -- F-distance graphs -----------------------------------------------------------

@dataclass
class FDistanceSpec:
    """A function ``F: GF(q)^d -> GF(q)`` as a value table, and a target ``j``.

    The graph joins ``x, y`` when ``F(x - y) = j``.
    """

    field: Field
    d: int
    table: np.ndarray
    j: int

    def __post_init__(self):
        self.table = np.asarray(self.table, dtype=np.int64)
        if self.table.shape != (self.field.q ** self.d,):
            raise DimensionMismatch(f"table must have exactly q^d = {self.field.q ** self.d} entries")
        if np.any((self.table < 0) | (self.table >= self.field.q)):
            raise ValueError("table entries must be field element codes")
        self.j = self.field(self.j).value

    @classmethod
    def from_function(cls, field: Field, d: int, fn: Callable, j) -> FDistanceSpec:
        """Tabulate ``fn`` pointwise; ``fn`` gets a tuple of FieldElements."""
        space = VectorSpace(field, d)
        table = [field(fn(space.index_vertex(i))).value for i in range(space.n)]
        return cls(field, d, np.array(table), j)

    @classmethod
    def named(cls, field: Field, d: int, name: str, j) -> FDistanceSpec:
        if name not in NAMED_EXPRESSIONS:
            raise ValueError(f"unknown expression {name!r}; choose from {sorted(NAMED_EXPRESSIONS)}")
        return cls.from_function(field, d, NAMED_EXPRESSIONS[name], j)

    @cached_property
    def space(self) -> VectorSpace:
        return VectorSpace(self.field, self.d)

    @property
    def connection_set(self) -> np.ndarray:
        return np.flatnonzero(self.table == self.j)


def _sum_of_powers(k: int) -> Callable:
    def fn(x):
        total = x[0].field.zero
        for c in x:
            total = total + c**k
        return total
    return fn


NAMED_EXPRESSIONS: dict[str, Callable] = {
    "norm": _sum_of_powers(2),
    "cubes": _sum_of_powers(3),
    "quartics": _sum_of_powers(4),
}


@dataclass
class FDistanceReport:
    """Spectrum of an F-distance graph and its decay constants.

    ``c1 = max_{m != 0} |lambda_m| / q^((d-1)/2)`` and
    ``c2 = |lambda_0| / q^(d-1)``.  For a directed (asymmetric) connection
    set ``eigenvalues`` holds moduli instead of real values.
    """

    q: int
    d: int
    j: int
    valency: int
    directed: bool
    contains_zero: bool
    eigenvalues: np.ndarray
    by_frequency: np.ndarray = field(repr=False)
    lambda_zero: float
    max_nontrivial: float
    c1: float
    c2: float
    bound: float
    ramanujan_ok: bool
    max_imag_residual: float

    def to_dict(self) -> dict:
        return {
            "q": self.q, "d": self.d, "j": self.j, "valency": self.valency,
            "directed": self.directed, "contains_zero": self.contains_zero,
            "eigenvalues": [_clean(v) for v in self.eigenvalues],
            "lambda_zero": _clean(self.lambda_zero),
            "max_nontrivial": _clean(self.max_nontrivial),
            "c1": _clean(self.c1), "c2": _clean(self.c2),
            "bound": self.bound, "ramanujan_ok": self.ramanujan_ok,
            "max_imag_residual": self.max_imag_residual,
        }


def f_distance_spectrum(spec: FDistanceSpec) -> FDistanceReport:
    """Character-sum spectrum of the F-distance graph ``G_F(q, d, j)``."""
    space = spec.space
    conn = spec.connection_set
    q, d = spec.field.q, spec.d
    directed = not np.array_equal(np.sort(space.neg_index(conn)), conn)
    sums = character_sums(space, conn)
    if directed:
        resid = float(np.max(np.abs(sums.imag))) if len(sums) else 0.0
        vals = np.abs(sums)
    else:
        vals, resid = _real_or_raise(sums, f"F-distance spectrum (j={spec.j})")
    lam0 = float(abs(vals[0]))
    max_nt = float(np.max(np.abs(vals[1:]))) if space.n > 1 else 0.0
    bound = ramanujan_bound(q, d)
    return FDistanceReport(
        q=q, d=d, j=spec.j, valency=len(conn), directed=bool(directed),
        contains_zero=bool(spec.table[0] == spec.j),
        eigenvalues=np.sort(vals)[::-1], by_frequency=vals,
        lambda_zero=lam0, max_nontrivial=max_nt,
        c1=max_nt / q ** ((d - 1) / 2), c2=lam0 / q ** (d - 1),
        bound=bound, ramanujan_ok=bool(max_nt <= bound + RAMANUJAN_SLACK),
        max_imag_residual=resid,
    )
