import itertools
from fractions import Fraction
from math import comb

import pytest
import sympy
from sympy.polys.polyfuncs import symmetrize

from osculate import closed_forms as cf
from osculate.closed_forms import TruncatedPolynomial
from osculate.lattice_polytope import face_volume_data, hull


def cube(a):
    return hull(list(itertools.product((0, a), repeat=3)))


def simplex3(d):
    return hull([(0, 0, 0), (d, 0, 0), (0, d, 0), (0, 0, d)])


def prism(a, b, c):
    return hull([(0, 0, 0), (2 * a, 0, 0), (0, 2, 0), (2 * b, 2, 0), (0, 0, 2), (2 * c, 0, 2)])


# ring arithmetic ----------------------------------------------------------------


def test_truncation_and_integral():
    h1, h2 = (TruncatedPolynomial.gen((2, 3), i) for i in range(2))
    x = (h1 + h2) ** 3
    assert x.integral() == 3  # coefficient of h1 h2^2
    assert (h1 * h1) == 0
    assert (2 * h1 - h1) == h1


def test_p1_cubed_point_class():
    h = cf.chow_ring_generators([1, 1, 1])
    L = h[0] + h[1] + h[2]
    assert (L**3).integral() == 6


# Veronese / Bombieri-Weyl -------------------------------------------------------------


def test_veronese_values():
    assert cf.veronese_gdd(1, 3, 2) == 6
    assert cf.veronese_gdd(2, 3, 2) == 42
    for m in range(1, 4):
        for d in range(1, 5):
            assert cf.veronese_gdd(m, d, d) == d**m


def test_bw_values():
    assert cf.bw_distance_degree(1, 3, 2) == 4
    assert cf.bw_distance_degree(2, 3, 2) == 22
    assert cf.bw_closed_small_m(1, 5, 3) == 9 == cf.bw_distance_degree(1, 5, 3)
    assert cf.bw_closed_small_m(2, 3, 2) == 22
    assert cf.bw_closed_small_m(2, 3, 3) == 9 == cf.bw_distance_degree(2, 3, 3)
    with pytest.raises(ValueError):
        cf.bw_closed_small_m(3, 3, 2)


def test_bw_k1_is_classical_ed_degree():
    # first-order BW distance degree of the Veronese: the number of eigenvectors of a symmetric tensor
    for m in range(1, 4):
        assert cf.bw_distance_degree(m, 1, 1) == 1  # a linear space
        for d in range(2, 6):
            expected = m + 1 if d == 2 else ((d - 1) ** (m + 1) - 1) // (d - 2)
            assert cf.bw_distance_degree(m, d, 1) == expected, (m, d)


def test_bw_projection_degree():
    assert cf.bw_projection_degree(1, 3, 2) == (2, 2)
    assert cf.bw_projection_degree(2, 3, 2) == (1, 22)
    assert cf.bw_projection_degree(1, 4, 2) == (1, 6)


# symmetric powers via Chern roots --------------------------------------------------


def _sym_oracle(rank, k):
    """Coefficients of the total Chern class of Sym^k in c1..c_rank (degree <= rank)."""
    r = sympy.symbols(f"r0:{rank}")
    t = sympy.Symbol("t")
    total = sympy.Integer(1)
    for ms in itertools.combinations_with_replacement(range(rank), k):
        total = sympy.expand(total * (1 + t * sum(r[i] for i in ms)))
        total = sum(total.coeff(t, j) * t**j for j in range(rank + 1))
    out = {}
    s = sympy.symbols(f"s1:{rank + 1}")
    for j in range(1, rank + 1):
        sym, rest, defs = symmetrize(sympy.expand(total.coeff(t, j)), *r, formal=True)
        assert rest == 0
        poly = sympy.Poly(sym.subs({d[0]: si for d, si in zip(defs, s)}), *s)
        for mon, coef in poly.terms():
            out[mon] = Fraction(int(coef.p), int(coef.q))
    return out


@pytest.mark.parametrize("rank", [1, 2, 3])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_sym_power_chern_against_roots(rank, k):
    bounds = (4,) * rank
    gens = [TruncatedPolynomial.gen(bounds, i) for i in range(rank)]
    c = [TruncatedPolynomial.constant(bounds)] + gens
    got = cf.sym_power_chern(c, rank, k)
    want = _sym_oracle(rank, k)
    got_terms = {e: Fraction(v) for e, v in got.coeffs.items() if any(e)}
    assert got_terms == {e: v for e, v in want.items() if v}


# jet bundles ------------------------------------------------------------------------


@pytest.mark.parametrize("m", [1, 2, 3])
def test_jet_chern_equals_veronese(m):
    for d in range(1, 5):
        for k in range(1, d + 1):
            assert cf.jet_chern_gdd([m], [d], k) == cf.veronese_gdd(m, d, k)


def test_jet_chern_curve():
    for d in range(1, 8):
        for k in range(1, d + 1):
            assert cf.jet_chern_gdd([1], [d], k) == (k + 2) * d - k * (k + 1)


def test_jet_chern_p1_cubed():
    for a in range(2, 5):
        assert cf.jet_chern_gdd([1, 1, 1], [a, a, a], 2) == 1056 * a**3 - 2760 * a**2 + 2592 * a - 880


def test_jet_chern_rejects_large_nonsplit():
    with pytest.raises(NotImplementedError, match="unsupported rank"):
        cf.jet_chern_gdd([4], [3], 2)
    # products of lines split, so any number of factors works
    assert cf.jet_chern_gdd([1, 1, 1, 1], [1, 1, 1, 1], 1) > 0


# curve / surface / threefold formulas ----------------------------------------------------


def test_plane_curves_k1():
    for d in range(1, 7):
        # ED degree of a general plane curve of degree d
        assert cf.gdd_curve(d, (3 - d) * d, 1) == d * d


def test_complete_intersection_curves():
    for n, ds in [(2, (2,)), (2, (4,)), (3, (2, 2)), (3, (2, 3)), (4, (2, 2, 2))]:
        L = 1
        for x in ds:
            L *= x
        c1 = (n + 1 - sum(ds)) * L
        for k in range(1, 4):
            assert cf.gdd_curve(L, c1, k) == L * (k + 2 - comb(k + 1, 2) * (n + 1 - sum(ds)))
    assert all(cf.gdd_curve(2, 2, k) == cf.veronese_gdd(1, 2, k) for k in (1, 2))


def test_alpha_beta_tables():
    assert cf.alpha(1) == (7, -3, 0, 1)
    assert cf.alpha(2) == (22, -24, 5, 5)
    assert cf.beta(1) == (15, -7, 0, 3, 0, 0, -1)
    assert cf.beta(2) == (176, -230, 81, 54, -7, -20, -8)


@pytest.mark.parametrize("d", range(1, 6))
def test_surface_formula_on_p2(d):
    for k in range(1, d + 1):
        assert cf.gdd_surface(d * d, 3 * d, 9, 3, k) == cf.veronese_gdd(2, d, k)


@pytest.mark.parametrize("d", range(1, 5))
def test_threefold_formula_on_p3(d):
    data = (d**3, 4 * d * d, 16 * d, 6 * d, 64, 24, 4)
    for k in range(1, d + 1):
        assert cf.gdd_threefold(data, k) == cf.veronese_gdd(3, d, k)


def test_threefold_formula_on_p1_cubed():
    for ds in [(1, 1, 1), (2, 2, 2), (2, 3, 4), (3, 3, 3)]:
        e1, e3 = sum(ds), ds[0] * ds[1] * ds[2]
        e2 = ds[0] * ds[1] + ds[0] * ds[2] + ds[1] * ds[2]
        # c(T) = prod (1 + 2h_i), L = sum d_i h_i
        data = (6 * e3, 4 * e2, 8 * e1, 4 * e1, 48, 24, 8)
        for k in range(1, min(ds) + 1):
            assert cf.gdd_threefold(data, k) == cf.jet_chern_gdd([1, 1, 1], ds, k) == cf.p1r_gdd(ds, k)


def test_p1r_values():
    assert cf.p1r_gdd((2, 2, 2), 2) == 1712
    assert cf.p1r_gdd((2, 2), 2) == 44
    with pytest.raises(cf.NotRegularError, match="not k-regular"):
        cf.p1r_gdd((1, 1, 2), 2)
    for a in range(1, 6):
        for b in range(a, 6):
            for k in range(1, a + 1):
                assert cf.p1r_gdd((a, b), k) == cf.jet_chern_gdd([1, 1], [a, b], k)


# toric polytope formulas -----------------------------------------------------------------


def test_toric_surface_formulas():
    for pts in [[(0, 0), (1, 0), (0, 1), (1, 1)], [(0, 0), (3, 0), (0, 3)], [(1, 0), (2, 0), (0, 1), (2, 1), (0, 2), (1, 2)]]:
        P = hull(pts)
        vol, _, E, V = face_volume_data(P)
        assert cf.toric_surface_gdd(P, 1) == 7 * vol - 3 * E + V
        assert cf.toric_surface_gdd(P, 2) == 22 * vol - 24 * E + 60
    assert cf.toric_surface_gdd(hull([(0, 0), (2, 0), (0, 2), (2, 2)]), 2) == 44
    for d in range(1, 5):
        for k in range(1, d + 1):
            assert cf.toric_surface_gdd(hull([(0, 0), (d, 0), (0, d)]), k) == cf.veronese_gdd(2, d, k)


@pytest.mark.parametrize("a", range(2, 6))
def test_cube_case4(a):
    P = cube(a)
    assert cf.detect_threefold_case(P, 2) == 4
    assert cf.toric_threefold_gdd(P, 2) == 1056 * a**3 - 2760 * a**2 + 2592 * a - 880


def test_cube_case1():
    for a in range(1, 4):
        assert cf.toric_threefold_gdd(cube(a), 1) == cf.jet_chern_gdd([1, 1, 1], [a, a, a], 1)


def test_p3_specials():
    assert cf.toric_threefold_gdd(simplex3(2), 2) == 8
    # the jet-bundle oracle and the Veronese sum both give 372 here
    assert cf.toric_threefold_gdd(simplex3(3), 2) == 372 == cf.jet_chern_gdd([3], [3], 2)
    assert cf.toric_threefold_gdd(simplex3(3), 3) == 27


@pytest.mark.parametrize("abc", [(2, 2, 2), (3, 2, 2), (4, 3, 2), (5, 5, 3)])
def test_projective_bundle_case3(abc):
    P = prism(*abc)
    s = sum(abc)
    assert cf.detect_threefold_case(P, 2) == 3
    vol, F, E, V = face_volume_data(P)
    assert (vol, F, E, V) == (8 * s, 8 * (s + 1), 2 * (s + 6), 6)
    data = (8 * s, 8 * (s + 1), 6 * (s + 4), 2 * (s + 6), 54, 24, 6)
    assert cf.toric_threefold_gdd(P, 2) == 162 * s - 154 == cf.gdd_threefold(data, 2)


def test_unclassified_threefold():
    with pytest.raises(cf.UnclassifiedThreefoldError, match="supply case explicitly"):
        cf.toric_threefold_gdd(cube(3), 3)
    with pytest.raises(cf.UnclassifiedThreefoldError, match="supply case explicitly"):
        cf.toric_threefold_gdd(cube(3), 2, case=3)


# eigenvectors -------------------------------------------------------------------------


def test_eigenvectors():
    for d in range(1, 5):
        for k in range(1, d + 1):
            ok, lam = cf.is_order_k_eigenvector({(d, 0, 0): 1}, (1, 0, 0), k)
            assert ok and lam == 1
    ok, lam = cf.is_order_k_eigenvector({(2, 0): 3, (0, 2): 5}, (1, 0), 1)
    assert ok and lam == 3
    half = Fraction(1, 2)  # x0 x1 = C(2,(1,1)) * 1/2 * x0 x1
    assert cf.is_order_k_eigenvector({(1, 1): half}, (1, 1), 1)[0]
    assert not cf.is_order_k_eigenvector({(1, 1): half}, (1, 0), 1)[0]


def test_eigenvectors_count_matches_bw_on_binary_forms():
    # a binary cubic with 3 distinct real eigen-directions for k=1 (BW(1,3,1) = 3)
    f = {(3, 0): 1, (2, 1): 0, (1, 2): 0, (0, 3): 1}
    # eigenvectors of x^3 + y^3: x^2 y = x y^2, i.e. x y (x - y) = 0
    sols = [(1, 0), (0, 1), (1, 1)]
    assert all(cf.is_order_k_eigenvector(f, v, 1)[0] for v in sols)
    assert not cf.is_order_k_eigenvector(f, (1, 2), 1)[0]
    assert len(sols) == cf.bw_distance_degree(1, 3, 1)
