"""Expander mixing checks, regular-coloring certificates, and the four
kaleidoscopic pseudo-randomness conditions for colored Cayley graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exceptions import IndexOutOfRange
from .rng import SplitMix64
from .spectrum import ColoredCayleyGraph, full_spectrum, ramanujan_bound

MIXING_SLACK = 1e-6
_CHUNK = 1 << 20


def _as_index_set(G: ColoredCayleyGraph, S: Iterable[int], name: str) -> np.ndarray:
    arr = np.unique(np.asarray(list(S) if not isinstance(S, np.ndarray) else S, dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= G.n):
        raise IndexOutOfRange(f"{name} contains indices outside [0, {G.n})")
    return arr


def count_bipartite_edges(G: ColoredCayleyGraph, a, B: Iterable[int], C: Iterable[int]) -> int:
    """Ordered pairs ``(u, v)`` with ``u in B``, ``v in C`` and color ``a``."""
    B = _as_index_set(G, B, "B")
    C = _as_index_set(G, C, "C")
    conn = G.connection_set(a)
    if not len(B) or not len(C) or not len(conn):
        return 0
    member = np.zeros(G.n, dtype=bool)
    member[C] = True
    total = 0
    step = max(1, _CHUNK // len(conn))
    for start in range(0, len(B), step):
        nbrs = G.space.add_index(B[start:start + step, None], conn[None, :])
        total += int(np.count_nonzero(member[nbrs]))
    return total


@dataclass
class MixingCheck:
    """One instance of ``|e(B,C) - (d/n)|B||C|| <= lam * sqrt(|B||C|)``."""

    color: int
    B: tuple[int, ...] = field(repr=False)
    C: tuple[int, ...] = field(repr=False)
    e_BC: int
    predicted: float
    lam: float
    bound: float
    ok: bool

    @property
    def deviation(self) -> float:
        return abs(self.e_BC - self.predicted)

    def to_dict(self) -> dict:
        return {"color": self.color, "B_size": len(self.B), "C_size": len(self.C),
                "e_BC": self.e_BC, "predicted": round(self.predicted, 9),
                "lambda": round(self.lam, 12), "bound": round(self.bound, 9), "ok": self.ok}


def mixing_check(G: ColoredCayleyGraph, a, B: Iterable[int], C: Iterable[int],
                 lam: float, slack: float = MIXING_SLACK) -> MixingCheck:
    """Evaluate the expander mixing inequality for one ``(B, C)`` pair.

    ``lam`` should be a certified bound on the nontrivial eigenvalues; the
    bound is computed with ``lam + slack``.
    """
    B = _as_index_set(G, B, "B")
    C = _as_index_set(G, C, "C")
    e = count_bipartite_edges(G, a, B, C)
    predicted = G.valency(a) / G.n * len(B) * len(C)
    bound = (lam + slack) * math.sqrt(len(B) * len(C))
    return MixingCheck(
        color=G.field(a).value, B=tuple(int(b) for b in B), C=tuple(int(c) for c in C),
        e_BC=e, predicted=predicted, lam=lam, bound=bound,
        ok=bool(abs(e - predicted) <= bound),
    )


def sample_subset_pairs(n: int, count: int, seed: int, size: int | None = None
                        ) -> list[tuple[list[int], list[int]]]:
    """``count`` seeded ``(B, C)`` pairs; sizes uniform in ``[1, n]`` unless fixed."""
    rng = SplitMix64(seed)
    pairs = []
    for _ in range(count):
        sb = size if size is not None else rng.randint(1, n)
        sc = size if size is not None else rng.randint(1, n)
        pairs.append((rng.sample(n, sb), rng.sample(n, sc)))
    return pairs


def run_mixing(G: ColoredCayleyGraph, a, lam: float, samples: int, seed: int,
               size: int | None = None, slack: float = MIXING_SLACK) -> list[MixingCheck]:
    return [mixing_check(G, a, B, C, lam, slack)
            for B, C in sample_subset_pairs(G.n, samples, seed, size)]


@dataclass
class RCCertificate:
    """Per-color ``(valency, max nontrivial |lambda|)`` and the r.c. verdict."""

    n: int
    per_color: dict[int, tuple[int, float]]
    d_min: int
    d_max: int
    lambda_max: float
    regular: bool
    rc_ok: bool

    def to_dict(self) -> dict:
        return {"n": self.n,
                "per_color": [{"color": c, "valency": v, "max_nontrivial": round(l, 9)}
                              for c, (v, l) in sorted(self.per_color.items())],
                "d_min": self.d_min, "d_max": self.d_max,
                "lambda_max": round(self.lambda_max, 9),
                "regular": self.regular, "rc_ok": self.rc_ok}


def certify_rc(G: ColoredCayleyGraph, colors: Sequence | None = None, method: str = "sum") -> RCCertificate:
    """Certify that every color class is an ``(n, d_a, lambda)``-graph.

    Regularity is checked by confirming the connection set is symmetric
    (undirected Cayley graph) and the trivial eigenvalue equals its size.
    """
    colors = G.colors if colors is None else [G.field(c) for c in colors]
    per_color = {}
    regular = True
    for a in colors:
        conn = G.connection_set(a)
        if not np.array_equal(np.sort(G.space.neg_index(conn)), conn):
            regular = False
        rep = full_spectrum(G, a, method=method)
        per_color[a.value] = (rep.valency, rep.max_nontrivial)
    valencies = [v for v, _ in per_color.values()]
    lam = max(l for _, l in per_color.values())
    d_min = min(valencies)
    return RCCertificate(
        n=G.n, per_color=per_color, d_min=d_min, d_max=max(valencies),
        lambda_max=lam, regular=regular, rc_ok=bool(regular and lam < d_min),
    )


@dataclass
class KaleidoReport:
    """Witnesses for the four kaleidoscopic conditions on one graph.

    ``sizes[a]`` is ``|E^a|``, the number of unordered pairs of color ``a``.
    """

    q: int
    d: int
    vertex_count: int
    sizes: dict[int, int]
    uncolored_pairs: int
    ratio_max: float
    completeness_defect: float
    k: int
    n_edges: int
    C: float
    threshold_size: float

    def to_dict(self) -> dict:
        return {"q": self.q, "d": self.d, "vertex_count": self.vertex_count,
                "sizes": {str(c): s for c, s in sorted(self.sizes.items())},
                "uncolored_pairs": self.uncolored_pairs,
                "ratio_max": round(self.ratio_max, 12),
                "completeness_defect": round(self.completeness_defect, 12),
                "k": self.k, "n_edges": self.n_edges, "C": self.C,
                "threshold_size": round(self.threshold_size, 9)}


def threshold_size(vertex_count: int, num_colors: int, k: int, n_edges: int, C: float = 1.0) -> float:
    """Subset order ``C |G|^((k-1)/k) |L|^(n/k)`` above which every pattern must appear."""
    return C * vertex_count ** ((k - 1) / k) * num_colors ** (n_edges / k)


def kaleido_conditions(G: ColoredCayleyGraph, k: int = 2, n_edges: int = 1, C: float = 1.0) -> KaleidoReport:
    if k < 2 or n_edges < k - 1:
        raise ValueError("need k >= 2 and n_edges >= k - 1")
    sphere_sizes = G.space.sphere_sizes
    sizes = {a: G.n * int(sphere_sizes[a]) // 2 for a in range(1, G.q)}
    total = G.n * (G.n - 1) // 2
    uncolored = G.n * (int(sphere_sizes[0]) - 1) // 2
    assert sum(sizes.values()) + uncolored == total
    ratio = max(sizes.values()) / min(sizes.values())
    return KaleidoReport(
        q=G.q, d=G.d, vertex_count=G.n, sizes=sizes, uncolored_pairs=uncolored,
        ratio_max=ratio, completeness_defect=uncolored / total,
        k=k, n_edges=n_edges, C=C,
        threshold_size=threshold_size(G.n, G.q - 1, k, n_edges, C),
    )


def growth_ok(vertex_counts: Sequence[int]) -> bool:
    """Growth condition on a finite grid: vertex counts strictly increase."""
    return all(b > a for a, b in zip(vertex_counts, vertex_counts[1:]))


@dataclass
class ContainmentCheck:
    subset_size: int
    found: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.found.values())

    def to_dict(self) -> dict:
        return {"subset_size": self.subset_size, "found": dict(sorted(self.found.items())),
                "ok": self.ok}


def check_containment(G: ColoredCayleyGraph, patterns: dict, size: int, seed: int) -> ContainmentCheck:
    """Sample a subset of ``size`` vertices and search it for every pattern."""
    from .embeddings import contains_pattern

    size = min(int(math.ceil(size)), G.n)
    E = SplitMix64(seed).sample(G.n, size)
    found = {name: contains_pattern(E, H, G) for name, H in patterns.items()}
    return ContainmentCheck(size, found)


def theoretical_lambda(G: ColoredCayleyGraph) -> float:
    return ramanujan_bound(G.q, G.d)
