import cmath

import numpy as np
import pytest

from fqgraphs.exceptions import NonRealEigenvalue, TooLarge
from fqgraphs.finite_field import make_field
from fqgraphs.quadratic_space import VectorSpace
from fqgraphs.spectrum import (
    ColoredCayleyGraph,
    FDistanceSpec,
    character_sums,
    dense_spectrum_oracle,
    eigenvalue,
    f_distance_spectrum,
    full_spectrum,
)

W = cmath.exp(2j * cmath.pi / 3)


def test_eigenvalue_examples(g3):
    assert eigenvalue(g3, 1, (0, 0)) == pytest.approx(4)
    # S_1 = {(+-1, 0), (0, +-1)}, m = (1, 0): w + w^2 + 1 + 1
    assert eigenvalue(g3, 1, (1, 0)) == pytest.approx((W + W**2 + 2).real, abs=1e-12)
    total = sum(eigenvalue(g3, 1, g3.space.index_vertex(i)) for i in range(9))
    assert abs(total) < 1e-9


def test_full_spectrum_q3(g3):
    rep = full_spectrum(g3, 1)
    assert np.allclose(rep.eigenvalues, [4, 1, 1, 1, 1, -2, -2, -2, -2], atol=1e-12)
    assert rep.valency == 4 and rep.eigenvalues[0] == 4
    assert rep.max_nontrivial == pytest.approx(2)
    assert rep.bound == pytest.approx(2 * 3**0.5)
    assert rep.ramanujan_ok
    assert rep.max_imag_residual < 1e-9


def test_dense_oracle_q3(g3):
    A = g3.adjacency(1)
    assert (A == A.T).all() and not A.diagonal().any()
    assert (A.sum(axis=1) == 4).all()
    assert np.allclose(dense_spectrum_oracle(g3, 1), full_spectrum(g3, 1).eigenvalues, atol=1e-6)
    with pytest.raises(TooLarge):
        dense_spectrum_oracle(g3, 1, cap=8)


def direct_sum(space, conn, m):
    """Character sum one term at a time with Python complex arithmetic."""
    F = space.field
    mv = space.index_vertex(m)
    total = 0j
    for x in conn:
        xv = space.index_vertex(int(x))
        dot = sum((a * b for a, b in zip(xv, mv)), F.zero)
        total += cmath.exp(2j * cmath.pi * int(F.trace_table[dot.value]) / F.p)
    return total


@pytest.mark.parametrize("p,r,d", [(5, 1, 2), (3, 2, 2), (3, 3, 2), (7, 1, 3)])
def test_character_sums_against_direct(p, r, d):
    G = ColoredCayleyGraph.build(make_field(p, r), d, "twisted")
    conn = G.connection_set(1)
    sums = character_sums(G.space, conn)
    for m in range(0, G.n, max(1, G.n // 40)):
        assert sums[m] == pytest.approx(direct_sum(G.space, conn, m), abs=1e-9)


@pytest.mark.parametrize("p,r,d", [(3, 1, 2), (5, 1, 2), (3, 2, 2), (3, 3, 2), (5, 2, 2),
                                   (3, 1, 3), (5, 1, 3), (3, 2, 3), (3, 1, 4)])
@pytest.mark.parametrize("form", ["identity", "twisted"])
def test_fft_and_dense_agree(p, r, d, form):
    G = ColoredCayleyGraph.build(make_field(p, r), d, form)
    for a in G.colors:
        ref = full_spectrum(G, a)
        fast = full_spectrum(G, a, method="fft")
        assert np.allclose(ref.by_frequency, fast.by_frequency, atol=1e-9)
        if G.n <= 729:
            assert np.allclose(ref.eigenvalues, dense_spectrum_oracle(G, a), atol=1e-6)


@pytest.mark.parametrize("q,d", [(5, 2), (7, 2), (9, 2), (5, 3), (7, 3)])
def test_spectral_moments(q, d):
    p, r = {9: (3, 2)}.get(q, (q, 1))
    G = ColoredCayleyGraph.build(make_field(p, r), d)
    for a in G.colors:
        vals = full_spectrum(G, a).eigenvalues
        k = G.valency(a)
        assert abs(vals.sum()) < 1e-7
        assert (vals**2).sum() == pytest.approx(G.n * k, rel=1e-9)
        assert abs(vals[0] - k) < 1e-9


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
@pytest.mark.parametrize("d", [2, 3])
def test_ramanujan_identity_grid(q, d):
    p, r = {9: (3, 2)}.get(q, (q, 1))
    G = ColoredCayleyGraph.build(make_field(p, r), d)
    assert all(full_spectrum(G, a).ramanujan_ok for a in G.colors)


def test_nonreal_detected():
    # an asymmetric connection set has complex character sums
    space = VectorSpace(make_field(5), 1)
    sums = character_sums(space, np.array([1]))
    assert np.max(np.abs(sums.imag)) > 1e-3
    G = ColoredCayleyGraph.build(make_field(5), 1)
    G._sets[1] = np.array([1])
    with pytest.raises(NonRealEigenvalue):
        full_spectrum(G, 1)


def test_fdist_reproduces_quadratic():
    F = make_field(7)
    G = ColoredCayleyGraph.build(F, 2)
    spec = FDistanceSpec(F, 2, G.space.norms, 3)
    rep = f_distance_spectrum(spec)
    ref = full_spectrum(G, 3)
    assert not rep.directed and not rep.contains_zero
    assert np.array_equal(rep.eigenvalues, ref.eigenvalues)
    assert rep.c1 == pytest.approx(ref.max_nontrivial / 7**0.5)


def test_fdist_named_norm_matches_table():
    F = make_field(5)
    named = FDistanceSpec.named(F, 2, "norm", 1)
    G = ColoredCayleyGraph.build(F, 2)
    assert np.array_equal(named.table, G.space.norms)


def test_fdist_constant():
    F = make_field(5)
    rep = f_distance_spectrum(FDistanceSpec(F, 2, np.full(25, 2), 2))
    assert rep.contains_zero and rep.valency == 25
    assert rep.lambda_zero == pytest.approx(25)
    assert rep.c1 == pytest.approx(0, abs=1e-9)
    assert rep.max_nontrivial < 1e-9


def test_fdist_cubes_f7():
    # x1^3 + x2^3 = 1 over GF(7): cubes are {0, 1, 6}, an odd function so
    # the connection set is not symmetric; compare moduli to direct sums.
    F = make_field(7)
    spec = FDistanceSpec.named(F, 2, "cubes", 1)
    pts = [(x, y) for x in range(7) for y in range(7) if (x**3 + y**3) % 7 == 1]
    assert list(spec.connection_set) == sorted(x + 7 * y for x, y in pts)
    rep = f_distance_spectrum(spec)
    assert rep.directed
    space = spec.space
    direct = [abs(direct_sum(space, spec.connection_set, m)) for m in range(49)]
    assert np.allclose(rep.by_frequency, direct, atol=1e-9)
    assert rep.c2 == pytest.approx(len(pts) / 7)
    assert rep.c1 == pytest.approx(max(direct[1:]) / 7**0.5)


def test_report_to_dict(g3):
    d = full_spectrum(g3, 2).to_dict()
    assert d["color"] == [2] and d["valency"] == 4 and d["ramanujan_ok"] is True
    assert d["eigenvalues"] == [4.0, 1.0, 1.0, 1.0, 1.0, -2.0, -2.0, -2.0, -2.0]
