"""Colored patterns and exact counts of their ordered copies in vertex subsets.

A copy of a pattern ``H`` in ``E`` is an injective map ``f: V(H) -> E`` with
``Q(f(i) - f(j)) = color(i, j)`` for every pattern edge (non-induced:
non-edges of ``H`` impose nothing).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exceptions import ColorZero, PatternTooLarge, SubsetOutOfRange, TooLarge
from .finite_field import Field
from .spectrum import ColoredCayleyGraph

AUT_MAX_K = 10
NAIVE_CAP = 10**7
_CHUNK = 1 << 20


@dataclass(frozen=True)
class ColoredPattern:
    """A small graph on ``range(k)`` with edges ``(i, j, color)``, ``i < j``.

    Colors are field element codes and must be nonzero.
    """

    k: int
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("pattern needs at least one vertex")
        seen = set()
        norm = []
        for i, j, c in self.edges:
            i, j, c = int(i), int(j), int(c)
            if not 0 <= i < j < self.k:
                raise ValueError(f"edge ({i}, {j}) must satisfy 0 <= i < j < k = {self.k}")
            if c == 0:
                raise ColorZero(f"edge ({i}, {j}) has color 0")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))
            norm.append((i, j, c))
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @property
    def n(self) -> int:
        return len(self.edges)

    @property
    def degrees(self) -> list[int]:
        deg = [0] * self.k
        for i, j, _ in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    @property
    def max_degree(self) -> int:
        return max(self.degrees)

    @property
    def colors(self) -> list[int]:
        return sorted({c for _, _, c in self.edges})

    def color_matrix(self) -> list[list[int]]:
        m = [[0] * self.k for _ in range(self.k)]
        for i, j, c in self.edges:
            m[i][j] = m[j][i] = c
        return m

    # -- constructors ----------------------------------------------------------

    @classmethod
    def empty(cls, k: int) -> ColoredPattern:
        return cls(k, ())

    @classmethod
    def edge(cls, color: int) -> ColoredPattern:
        return cls(2, ((0, 1, color),))

    @classmethod
    def path(cls, colors: Sequence[int]) -> ColoredPattern:
        """Path ``0 - 1 - ... - len(colors)`` with the given edge colors."""
        return cls(len(colors) + 1, tuple((i, i + 1, c) for i, c in enumerate(colors)))

    @classmethod
    def triangle(cls, colors: Sequence[int]) -> ColoredPattern:
        a, b, c = colors
        return cls(3, ((0, 1, a), (1, 2, b), (0, 2, c)))

    # -- JSON ------------------------------------------------------------------

    @classmethod
    def from_dict(cls, field: Field, data: dict) -> ColoredPattern:
        edges = tuple((int(i), int(j), field.decode(c).value) for i, j, c in data.get("edges", []))
        return cls(int(data["k"]), edges)

    def to_dict(self, field: Field) -> dict:
        return {"k": self.k, "edges": [[i, j, field.encode(c)] for i, j, c in self.edges]}


def aut_c(H: ColoredPattern) -> int:
    """Number of vertex permutations preserving the colored edge set."""
    if H.k > AUT_MAX_K:
        raise PatternTooLarge(f"k = {H.k} exceeds the automorphism search bound {AUT_MAX_K}")
    col = H.color_matrix()
    deg = H.degrees
    image = [-1] * H.k
    used = [False] * H.k

    def extend(v: int) -> int:
        if v == H.k:
            return 1
        total = 0
        for w in range(H.k):
            if used[w] or deg[w] != deg[v]:
                continue
            if all(col[v][u] == col[w][image[u]] for u in range(v)):
                image[v], used[w] = w, True
                total += extend(v + 1)
                used[w] = False
        return total

    return extend(0)


def _subset_array(G: ColoredCayleyGraph, E: Iterable[int]) -> np.ndarray:
    arr = np.asarray(list(E) if not isinstance(E, np.ndarray) else E, dtype=np.int64)
    if arr.size and (arr.min() < 0 or arr.max() >= G.n):
        raise SubsetOutOfRange(f"subset has indices outside [0, {G.n})")
    if len(np.unique(arr)) != len(arr):
        raise ValueError("subset contains duplicate vertices")
    return np.sort(arr)


def _check_colors(H: ColoredPattern, G: ColoredCayleyGraph) -> None:
    for c in H.colors:
        if not 0 < c < G.q:
            raise ValueError(f"pattern color {c} is not a nonzero element of GF({G.q})")


def embedding_order(H: ColoredPattern) -> list[int]:
    """Greedy most-constrained-first vertex order.

    Start from a maximum-degree vertex; then always take the vertex with the
    most edges back into the ordered prefix (ties: higher degree, lower index).
    """
    col = H.color_matrix()
    deg = H.degrees
    order: list[int] = []
    rest = set(range(H.k))
    while rest:
        v = min(rest, key=lambda u: (-sum(1 for w in order if col[u][w]), -deg[u], u))
        order.append(v)
        rest.remove(v)
    return order


def _backtrack_count(E: np.ndarray, H: ColoredPattern, G: ColoredCayleyGraph, limit: int | None = None) -> int:
    """Level-synchronous backtracking over partial embeddings, chunked.

    Candidates for the next pattern vertex come from the colored
    neighborhood ``f(w) + S_c`` of one embedded neighbor, filtered by the
    membership bitmap of ``E``, the remaining edge colors, and injectivity.
    """
    if H.k > len(E):
        return 0
    order = embedding_order(H)
    col = H.color_matrix()
    member = np.zeros(G.n, dtype=bool)
    member[E] = True
    space = G.space
    # constraints[level] = [(position in prefix, color), ...]
    constraints = [[(pos, col[v][order[pos]]) for pos in range(level) if col[v][order[pos]]]
                   for level, v in enumerate(order)]

    def extend(frontier: np.ndarray, level: int) -> int:
        cons = constraints[level]
        if cons:
            pos0, c0 = cons[0]
            conn = G.connection_set(c0)
            width = len(conn)
        else:
            width = len(E)
        if width == 0:
            return 0
        step = max(1, _CHUNK // width)
        total = 0
        for start in range(0, len(frontier), step):
            block = frontier[start:start + step]
            if cons:
                cand = space.add_index(block[:, pos0, None], conn[None, :])
                mask = member[cand]
                rest = cons[1:]
            else:
                cand = np.broadcast_to(E, (len(block), width))
                mask = np.ones(cand.shape, dtype=bool)
                rest = cons
            for pos, c in rest:
                mask &= space.norms[space.sub_index(cand, block[:, pos, None])] == c
            for pos in range(level):
                mask &= cand != block[:, pos, None]
            if level == H.k - 1:
                total += int(np.count_nonzero(mask))
            else:
                rows, cols = np.nonzero(mask)
                if len(rows):
                    nxt = np.concatenate([block[rows], cand[rows, cols][:, None]], axis=1)
                    total += extend(nxt, level + 1)
            if limit is not None and total >= limit:
                return total
        return total

    return extend(np.zeros((1, 0), dtype=np.int64), 0)


def naive_count_oracle(E: Iterable[int], H: ColoredPattern, G: ColoredCayleyGraph, cap: int = NAIVE_CAP) -> int:
    """Brute force over every k-tuple of ``E``: ground truth for small cases."""
    E = _subset_array(G, E)
    _check_colors(H, G)
    m, k = len(E), H.k
    if m**k > cap:
        raise TooLarge(f"|E|^k = {m**k} exceeds the oracle cap {cap}")
    if m < k:
        return 0
    colors = G.color(E[:, None], E[None, :])
    total = 0
    step = max(1, _CHUNK // k)
    for start in range(0, m**k, step):
        flat = np.arange(start, min(start + step, m**k))
        tup = np.stack(np.unravel_index(flat, (m,) * k), axis=1)
        ok = np.ones(len(tup), dtype=bool)
        for i in range(k):
            for j in range(i + 1, k):
                ok &= tup[:, i] != tup[:, j]
        for i, j, c in H.edges:
            ok &= colors[tup[:, i], tup[:, j]] == c
        total += int(np.count_nonzero(ok))
    return total


def main_threshold(q: int, d: int, k: int, C: float = 1.0) -> float:
    """Subset size ``C q^((d-1)/2 + k - 1)`` required by the counting theorem."""
    return C * q ** ((d - 1) / 2 + k - 1)


@dataclass
class EmbeddingCount:
    """Exact ordered count of ``H`` in ``E`` together with both predictions.

    ``predicted_main = |E|^k q^-n``; ``predicted_tool3 = m^k prod_e (d_e / N)``
    where ``d_e`` is the valency of edge e's color class and ``N = q^d``.
    """

    ordered_count: int
    aut: int
    subset_size: int
    k: int
    n_edges: int
    q: int
    d: int
    predicted_main: float
    predicted_tool3: float
    threshold: float
    threshold_met: bool
    in_theorem_range: bool

    @property
    def unordered_count(self) -> Fraction:
        return Fraction(self.ordered_count, self.aut)

    @property
    def ratio_main(self) -> float:
        return self.ordered_count / self.predicted_main if self.predicted_main else math.nan

    def to_dict(self) -> dict:
        u = self.unordered_count
        return {"ordered_count": self.ordered_count, "aut": self.aut,
                "unordered_count": int(u) if u.denominator == 1 else str(u),
                "subset_size": self.subset_size, "k": self.k, "n_edges": self.n_edges,
                "predicted_main": self.predicted_main,
                "predicted_tool3": self.predicted_tool3,
                "threshold": self.threshold, "threshold_met": self.threshold_met,
                "in_theorem_range": self.in_theorem_range}


def count_embeddings(E: Iterable[int], H: ColoredPattern, G: ColoredCayleyGraph, C: float = 1.0) -> EmbeddingCount:
    """Count ordered copies of ``H`` inside ``E`` and attach the predictions."""
    E = _subset_array(G, E)
    _check_colors(H, G)
    count = _backtrack_count(E, H, G)
    m, k, n = len(E), H.k, H.n
    density = 1.0
    for _, _, c in H.edges:
        density *= G.valency(c) / G.n
    thr = main_threshold(G.q, G.d, k, C)
    return EmbeddingCount(
        ordered_count=count, aut=aut_c(H), subset_size=m, k=k, n_edges=n,
        q=G.q, d=G.d,
        predicted_main=float(m**k) * G.q ** (-n),
        predicted_tool3=float(m**k) * density,
        threshold=thr, threshold_met=bool(m >= thr),
        in_theorem_range=bool(1 <= k - 1 <= n <= G.d),
    )


def contains_pattern(E: Iterable[int], H: ColoredPattern, G: ColoredCayleyGraph) -> bool:
    """Whether ``E`` holds at least one copy of ``H`` (stops at the first)."""
    E = _subset_array(G, E)
    _check_colors(H, G)
    return _backtrack_count(E, H, G, limit=1) > 0


@dataclass
class PredictionReport:
    """Ratios of the exact count to both predictions, plus range flags."""

    ratio_main: float
    ratio_tool3: float
    lam: float
    tool3_requirement: float  # lam * (N / d)^max_degree
    tool3_size_ok: bool
    threshold_met: bool
    in_theorem_range: bool

    def to_dict(self) -> dict:
        return {"ratio_main": self.ratio_main, "ratio_tool3": self.ratio_tool3,
                "lambda": round(self.lam, 9), "tool3_requirement": self.tool3_requirement,
                "tool3_size_ok": self.tool3_size_ok, "threshold_met": self.threshold_met,
                "in_theorem_range": self.in_theorem_range}


def prediction_report(counts: EmbeddingCount, H: ColoredPattern, E: Sequence[int],
                      G: ColoredCayleyGraph, lam: float | None = None) -> PredictionReport:
    """Diagnostics only; acceptance bands are applied by the caller.

    ``lam`` defaults to the certified spectral maximum over the pattern's
    colors (all colors for an edgeless pattern).
    """
    colors = H.colors or [c.value for c in G.colors]
    if lam is None:
        from .pseudorandomness import certify_rc
        lam = certify_rc(G, colors).lambda_max
    d_min = min(G.valency(c) for c in colors)
    need = lam * (G.n / d_min) ** (H.max_degree if H.n else 0)
    m = len(E)
    ratio_tool3 = counts.ordered_count / counts.predicted_tool3 if counts.predicted_tool3 else math.nan
    return PredictionReport(
        ratio_main=counts.ratio_main, ratio_tool3=ratio_tool3, lam=lam,
        tool3_requirement=need, tool3_size_ok=bool(m >= need),
        threshold_met=counts.threshold_met, in_theorem_range=counts.in_theorem_range,
    )
