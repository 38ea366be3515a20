import itertools
import math

import pytest

from fqgraphs.embeddings import (
    ColoredPattern,
    aut_c,
    contains_pattern,
    count_embeddings,
    embedding_order,
    naive_count_oracle,
    prediction_report,
)
from fqgraphs.exceptions import ColorZero, PatternTooLarge, SubsetOutOfRange, TooLarge
from fqgraphs.finite_field import make_field
from fqgraphs.rng import SplitMix64
from fqgraphs.spectrum import ColoredCayleyGraph


def perm_aut(H):
    """Automorphisms by checking all k! permutations."""
    edges = {(i, j): c for i, j, c in H.edges}
    total = 0
    for perm in itertools.permutations(range(H.k)):
        img = {tuple(sorted((perm[i], perm[j]))): c for (i, j), c in edges.items()}
        total += img == edges
    return total


def random_pattern(rng, kmax=4, nmax=4, colors=4):
    k = rng.randint(1, kmax)
    slots = list(itertools.combinations(range(k), 2))
    n = rng.randint(0, min(nmax, len(slots)))
    chosen = [slots[i] for i in rng.sample(len(slots), n)]
    return ColoredPattern(k, tuple((i, j, rng.randint(1, colors)) for i, j in chosen))


def test_aut_examples():
    assert aut_c(ColoredPattern.triangle([1, 1, 1])) == 6
    assert aut_c(ColoredPattern.path([1, 2])) == 1
    assert aut_c(ColoredPattern.path([1, 1])) == 2
    assert aut_c(ColoredPattern.edge(3)) == 2
    assert aut_c(ColoredPattern.empty(4)) == 24
    with pytest.raises(PatternTooLarge):
        aut_c(ColoredPattern.empty(11))


def test_aut_matches_permutation_oracle():
    rng = SplitMix64(8)
    for _ in range(60):
        H = random_pattern(rng, kmax=6, nmax=7, colors=2)
        a = aut_c(H)
        assert a == perm_aut(H)
        assert math.factorial(H.k) % a == 0


def test_pattern_validation():
    with pytest.raises(ColorZero):
        ColoredPattern(2, ((0, 1, 0),))
    with pytest.raises(ValueError):
        ColoredPattern(2, ((1, 0, 1),))
    with pytest.raises(ValueError):
        ColoredPattern(3, ((0, 1, 1), (0, 1, 2)))
    H = ColoredPattern(4, ((0, 1, 1), (1, 2, 1), (1, 3, 2)))
    assert H.n == 3 and H.max_degree == 3 and H.colors == [1, 2]
    assert embedding_order(H)[0] == 1


def test_single_edge_full_space(g3):
    c = count_embeddings(range(9), ColoredPattern.edge(1), g3)
    assert c.ordered_count == 36 == g3.space.pair_count(1).count
    assert c.unordered_count == 18


def test_edgeless_pattern_is_falling_factorial(g5):
    E = SplitMix64(2).sample(25, 11)
    for k in range(1, 5):
        c = count_embeddings(E, ColoredPattern.empty(k), g5)
        assert c.ordered_count == math.perm(11, k)


def test_two_path_matches_oracle(g5):
    E = SplitMix64(12).sample(25, 12)
    H = ColoredPattern.path([1, 2])
    assert count_embeddings(E, H, g5).ordered_count == naive_count_oracle(E, H, g5)


def test_oracle_edge_cases(g5):
    H = ColoredPattern.edge(1)
    assert naive_count_oracle([], H, g5) == 0
    assert naive_count_oracle([3, 4, 9], ColoredPattern.empty(1), g5) == 3
    assert count_embeddings([], H, g5).ordered_count == 0
    with pytest.raises(TooLarge):
        naive_count_oracle(range(25), ColoredPattern.empty(4), g5, cap=1000)
    with pytest.raises(SubsetOutOfRange):
        count_embeddings([25], H, g5)


def test_random_instances_match_oracle(g5):
    rng = SplitMix64(77)
    for _ in range(40):
        H = random_pattern(rng)
        E = rng.sample(25, rng.randint(0, 25))
        c = count_embeddings(E, H, g5)
        assert c.ordered_count == naive_count_oracle(E, H, g5)
        assert c.ordered_count % c.aut == 0


def test_monotone_in_subset(g5):
    rng = SplitMix64(4)
    H = ColoredPattern.path([1, 1, 2])
    E = rng.sample(25, 20)
    sub = E[:12]
    assert count_embeddings(sub, H, g5).ordered_count <= count_embeddings(E, H, g5).ordered_count


@pytest.mark.parametrize("t", [2, 3, 4])
def test_dilation_equivariance(t):
    # x -> t x maps S_a onto S_{t^2 a}
    F = make_field(7)
    G = ColoredCayleyGraph.build(F, 2)
    E = SplitMix64(t).sample(49, 25)
    tE = [int(i) for i in G.space.scale_index(t, E)]
    H = ColoredPattern.triangle([1, 2, 4])
    t2 = (F(t) * F(t)).value
    H2 = ColoredPattern(3, tuple((i, j, (F(c) * t2).value) for i, j, c in H.edges))
    assert count_embeddings(E, H, G).ordered_count == count_embeddings(tE, H2, G).ordered_count


def test_mono_two_path_closed_form():
    F = make_field(3, 2)
    G = ColoredCayleyGraph.build(F, 2)
    for a in range(1, 9):
        s = G.valency(a)
        c = count_embeddings(range(81), ColoredPattern.path([a, a]), G)
        # z = x only when z - y = -(y - x), which lies in S_a: one collision
        assert c.ordered_count == 81 * s * (s - 1)
        assert c.ratio_main == pytest.approx(81 * s * (s - 1) / 9 ** (3 * 2 - 2))


def test_prediction_fields(g5):
    H = ColoredPattern.edge(1)
    c = count_embeddings(range(25), H, g5, C=1.0)
    assert c.predicted_main == pytest.approx(625 / 5)
    assert c.predicted_tool3 == pytest.approx(625 * 4 / 25)
    assert c.threshold == pytest.approx(5 ** 1.5) and c.threshold_met
    assert c.in_theorem_range
    rep = prediction_report(c, H, range(25), g5)
    assert rep.ratio_main == pytest.approx(4 / 5)
    lo, hi = 1 - 2 * 5 ** -0.5, 1 + 2 * 5 ** -0.5
    assert lo <= rep.ratio_main <= hi
    assert rep.ratio_tool3 == pytest.approx(1.0)
    assert rep.tool3_requirement == pytest.approx(rep.lam * 25 / 4)


def test_edgeless_ratio_tends_to_one():
    G = ColoredCayleyGraph.build(make_field(13), 2)
    ratios = [count_embeddings(range(m), ColoredPattern.empty(3), G).ratio_main for m in (10, 40, 160)]
    assert ratios == sorted(ratios) and ratios[-1] > 0.98
    assert not count_embeddings(range(10), ColoredPattern.empty(3), G).in_theorem_range


def test_contains_pattern(g5):
    assert contains_pattern(range(25), ColoredPattern.path([1, 2, 3]), g5)
    # no equilateral triangles of side 1 in GF(5)^2 with this form
    assert count_embeddings(range(25), ColoredPattern.triangle([1, 1, 1]), g5).ordered_count == 0
    assert not contains_pattern(range(25), ColoredPattern.triangle([1, 1, 1]), g5)


def test_pattern_json(f9):
    H = ColoredPattern.path([1, 3])
    d = H.to_dict(f9)
    assert d == {"k": 3, "edges": [[0, 1, [1, 0]], [1, 2, [0, 1]]]}
    assert ColoredPattern.from_dict(f9, d) == H


def test_characteristic_three_triangles():
    # With Q(y) = a, the third vertex z = y/2 + w needs Q(w) = 3a/4 = 0 on the
    # plane orthogonal to y: 2q - 1 points if that plane is hyperbolic, else 1.
    F = make_field(3, 2)
    G = ColoredCayleyGraph.build(F, 3)
    for a in range(1, 9):
        s = G.valency(a)
        c = count_embeddings(range(G.n), ColoredPattern.triangle([a, a, a]), G).ordered_count
        assert c % (G.n * s) == 0
        assert c // (G.n * s) in (2 * 9 - 1, 1)
