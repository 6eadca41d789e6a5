"""Closed-form degree formulas and the Chow-ring computations behind them.

Everything here is exact (ints and Fractions). These serve as oracles for the
tropical pipeline and as fast answers where the tropical route is too large.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, factorial, prod
from typing import Mapping, Sequence

from .lattice_polytope import LatticePolytope, face_volume_data, interior_hull

__all__ = [
    "TruncatedPolynomial",
    "chow_ring_generators",
    "veronese_gdd",
    "bw_distance_degree",
    "bw_closed_small_m",
    "bw_projection_degree",
    "sym_power_chern",
    "twist_chern",
    "jet_bundle_chern",
    "jet_chern_gdd",
    "alpha",
    "beta",
    "gdd_curve",
    "gdd_surface",
    "gdd_threefold",
    "toric_surface_gdd",
    "toric_threefold_gdd",
    "detect_threefold_case",
    "p1r_gdd",
    "is_order_k_eigenvector",
    "NotRegularError",
    "UnclassifiedThreefoldError",
]


class NotRegularError(ValueError):
    pass


class UnclassifiedThreefoldError(ValueError):
    pass


class TruncatedPolynomial:
    """Element of Q[h_1..h_r] / <h_i^{e_i}>; coefficients are ints or Fractions."""

    __slots__ = ("bounds", "coeffs")

    def __init__(self, bounds: Sequence[int], coeffs: Mapping[tuple, object] | None = None):
        self.bounds = tuple(bounds)
        self.coeffs: dict[tuple, object] = {}
        for e, c in (coeffs or {}).items():
            if c and all(a < b for a, b in zip(e, self.bounds)):
                self.coeffs[tuple(e)] = c

    @classmethod
    def constant(cls, bounds, c=1):
        return cls(bounds, {(0,) * len(bounds): c})

    @classmethod
    def gen(cls, bounds, i, c=1):
        e = [0] * len(bounds)
        e[i] = 1
        return cls(bounds, {tuple(e): c})

    def _lift(self, other):
        if isinstance(other, TruncatedPolynomial):
            if other.bounds != self.bounds:
                raise ValueError("different rings")
            return other
        return TruncatedPolynomial.constant(self.bounds, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return TruncatedPolynomial(self.bounds, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedPolynomial(self.bounds, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, TruncatedPolynomial):
            return TruncatedPolynomial(self.bounds, {e: c * other for e, c in self.coeffs.items()})
        other = self._lift(other)
        out: dict[tuple, object] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if all(a < b for a, b in zip(e, self.bounds)):
                    out[e] = out.get(e, 0) + c1 * c2
        return TruncatedPolynomial(self.bounds, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = TruncatedPolynomial.constant(self.bounds)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = self._lift(other)
        return {e: c for e, c in self.coeffs.items() if c} == {e: c for e, c in other.coeffs.items() if c}

    def __repr__(self):
        return f"TruncatedPolynomial({self.bounds}, {dict(sorted(self.coeffs.items()))})"

    def coefficient(self, e: Sequence[int]):
        return self.coeffs.get(tuple(e), 0)

    def homogeneous(self, deg: int) -> "TruncatedPolynomial":
        return TruncatedPolynomial(self.bounds, {e: c for e, c in self.coeffs.items() if sum(e) == deg})

    def integral(self):
        """Degree of the top-dimensional part: the coefficient of ∏ h_i^{e_i - 1}."""
        return self.coefficient(tuple(b - 1 for b in self.bounds))


def chow_ring_generators(dims: Sequence[int]) -> list[TruncatedPolynomial]:
    """Hyperplane classes h_i of P^{m_1} x ... x P^{m_r}."""
    bounds = [m + 1 for m in dims]
    return [TruncatedPolynomial.gen(bounds, i) for i in range(len(dims))]


# Veronese and Bombieri-Weyl -------------------------------------------------


def veronese_gdd(m: int, d: int, k: int) -> int:
    if not 1 <= k <= d:
        raise ValueError("need 1 <= k <= d")
    S = comb(m + k, k)
    return sum(comb(S, i) * (d - k) ** i * d ** (m - i) for i in range(m + 1))


def bw_distance_degree(m: int, d: int, k: int) -> int:
    if not 1 <= k <= d:
        raise ValueError("need 1 <= k <= d")
    S = comb(m + k, k)
    bounds = (m + 1, comb(m + d, d))
    h1, h2 = TruncatedPolynomial.gen(bounds, 0), TruncatedPolynomial.gen(bounds, 1)
    X = d * h1 + h2 + k * (d - k) * h1 * h1 + k * h1 * h2
    target = (m, S - m - 1)
    total = 0
    power = TruncatedPolynomial.constant(bounds)
    # every term of X has degree >= 1, so X^j cannot reach the target once j > its degree
    for j in range(sum(target) + 1):
        total += (-1) ** j * power.coefficient(target)
        power = power * X
    return (-1) ** (S - 1) * total


def bw_closed_small_m(m: int, d: int, k: int) -> int:
    if not 1 <= k <= d:
        raise ValueError("need 1 <= k <= d")
    if m == 1:
        return k * (d - k + 1)
    if m == 2:
        S = comb(k + 2, k)
        val = Fraction((d - k) ** 2, 2) * S * S - Fraction((d - k) * (3 * d - 5 * k), 2) * S + (d - 2 * k) ** 2
        assert val.denominator == 1
        return int(val)
    raise ValueError("closed form only for m in {1, 2}")


def bw_projection_degree(m: int, d: int, k: int) -> tuple[int, int]:
    """(deg of the projection from the distance correspondence, deg of the distance locus)."""
    if not 1 <= k <= d:
        raise ValueError("need 1 <= k <= d")
    if (m, k) == (1, d - 1):
        return 2, d - 1
    return 1, bw_distance_degree(m, d, k)


# Chern classes of jet bundles -------------------------------------------------


def _graded(c: TruncatedPolynomial, top: int) -> list[TruncatedPolynomial]:
    return [c.homogeneous(i) for i in range(top + 1)]


def sym_power_chern(c: Sequence[TruncatedPolynomial], rank: int, k: int) -> TruncatedPolynomial:
    """Total Chern class of Sym^k F from c_1..c_rank of F (rank <= 3)."""
    one = c[0]
    c1 = c[1] if rank >= 1 else 0 * one
    if rank == 1:
        return one + k * c1
    c2 = c[2]
    if rank == 2:
        return (
            one
            + comb(k + 1, 2) * c1
            + Fraction(comb(k + 1, 3) * (3 * k + 2), 4) * c1 * c1
            + comb(k + 2, 3) * c2
        )
    if rank == 3:
        c3 = c[3]
        b5 = comb(k + 3, 5)
        return (
            one
            + comb(k + 2, 3) * c1
            + Fraction(comb(k + 3, 3) * comb(k + 1, 3), 2) * c1 * c1
            + comb(k + 3, 4) * c2
            + Fraction(b5 * (5 * k**4 + 20 * k**3 - 5 * k**2 - 50 * k - 12), 54) * c1 * c1 * c1
            + Fraction(b5 * (5 * k**2 + 20 * k + 6), 6) * c1 * c2
            + Fraction(comb(k + 3, 4) * (2 * k + 3), 5) * c3
        )
    raise NotImplementedError("unsupported rank for symmetric-power Chern classes")


def twist_chern(c: Sequence[TruncatedPolynomial], rank: int, L: TruncatedPolynomial, top: int) -> TruncatedPolynomial:
    """Total Chern class of F ⊗ L from the graded pieces c_j of F."""
    out = 0 * L
    for i in range(min(rank, top) + 1):
        for j in range(i + 1):
            if j < len(c):
                out = out + comb(rank - j, i - j) * c[j] * L ** (i - j)
    return out


def _split_sym_power(roots: Sequence[TruncatedPolynomial], k: int) -> TruncatedPolynomial:
    out = TruncatedPolynomial.constant(roots[0].bounds)
    for a in itertools.combinations_with_replacement(range(len(roots)), k):
        out = out * (1 + sum((roots[i] for i in a), 0 * roots[0]))
    return out


def jet_bundle_chern(dims: Sequence[int], degrees: Sequence[int], k: int) -> TruncatedPolynomial:
    """Total Chern class of the k-th jet bundle of O(d_1..d_r) on ∏ P^{m_i}."""
    gens = chow_ring_generators(dims)
    bounds = gens[0].bounds
    m = sum(dims)
    L = sum((d * h for d, h in zip(degrees, gens)), TruncatedPolynomial(bounds))
    one = TruncatedPolynomial.constant(bounds)
    c_omega = one
    for mi, h in zip(dims, gens):
        c_omega = c_omega * (1 - h) ** (mi + 1)
    split = all(mi == 1 for mi in dims)
    if not split and m > 3:
        raise NotImplementedError("unsupported rank for symmetric-power Chern classes")
    P = one + L  # the jet bundle of order 0 is L itself
    for q in range(1, k + 1):
        rank_q = comb(m + q - 1, q)
        if split:
            sym = _split_sym_power([-2 * h for h in gens], q)
        elif q == 1:
            sym = c_omega
        else:
            sym = sym_power_chern(_graded(c_omega, m), m, q)
        P = twist_chern(_graded(sym, m), rank_q, L, m) * P
    for e, c in P.coeffs.items():
        if isinstance(c, Fraction) and c.denominator != 1:
            raise ArithmeticError(f"non-integral Chern coefficient {c} at {e}")
    return P


def jet_chern_gdd(dims: Sequence[int], degrees: Sequence[int], k: int) -> int:
    """Σ_i ∫ c_i(P^k) L^{m-i} for O(d) on ∏ P^{m_i} (the embedding must be k-regular)."""
    gens = chow_ring_generators(dims)
    bounds = gens[0].bounds
    m = sum(dims)
    L = sum((d * h for d, h in zip(degrees, gens)), TruncatedPolynomial(bounds))
    P = jet_bundle_chern(dims, degrees, k)
    total = sum((P.homogeneous(i) * L ** (m - i) for i in range(m + 1)), TruncatedPolynomial(bounds))
    val = total.integral()
    return int(val)


# coefficient tables -------------------------------------------------------------


def alpha(k: int) -> tuple[int, int, int, int]:
    a1 = 1 + comb(k + 2, 2) + 3 * comb(k + 3, 4)
    a2 = -comb(k + 2, 2) * comb(k + 2, 3)
    a3 = Fraction(comb(k + 1, 3) * comb(k + 3, 3), 2)
    a4 = comb(k + 3, 4)
    assert a3.denominator == 1
    return a1, a2, int(a3), a4


def beta(k: int) -> tuple[int, ...]:
    """Coefficients of L³, c1L², c1²L, c2L, c1³, c1c2, c3 for threefolds."""
    p6 = k**6 + 12 * k**5 + 58 * k**4 + 138 * k**3 + 157 * k**2 + 66 * k
    vals = [
        Fraction((k + 4) * (k * k + 2 * k + 3) * (p6 + 216), 1296),
        -comb(k + 3, 4) * Fraction(p6 + 72, 72),
        comb(k + 3, 5) * Fraction(k * (k * k + 6 * k + 11) * (5 * k**3 + 35 * k**2 + 90 * k + 72), 288),
        comb(k + 4, 5) * Fraction(k * (k * k + 6 * k + 11), 6),
        -comb(k + 3, 5)
        * Fraction(5 * k**7 + 65 * k**6 + 355 * k**5 + 931 * k**4 + 816 * k**3 - 1404 * k**2 - 3312 * k - 1152, 3456),
        -comb(k + 4, 6) * Fraction(k**3 + 7 * k**2 + 18 * k + 8, 4),
        -comb(k + 4, 5) * Fraction(k + 2, 3),
    ]
    assert all(v.denominator == 1 for v in vals)
    return tuple(int(v) for v in vals)


def gdd_curve(L: int, c1: int, k: int) -> int:
    return (k + 2) * L - comb(k + 1, 2) * c1


def gdd_surface(L2: int, c1L: int, c1sq: int, c2: int, k: int) -> int:
    a1, a2, a3, a4 = alpha(k)
    return a1 * L2 + a2 * c1L + a3 * c1sq + a4 * c2


def gdd_threefold(degrees: Sequence[int], k: int) -> int:
    if len(degrees) != 7:
        raise ValueError("need the seven degrees L³, c1L², c1²L, c2L, c1³, c1c2, c3")
    return sum(b * x for b, x in zip(beta(k), degrees))


# toric formulas -------------------------------------------------------------------


def toric_surface_gdd(P: LatticePolytope, k: int) -> int:
    if P.dim != 2:
        raise ValueError("need a polygon")
    vol, _, E, V = face_volume_data(P)
    a1, a2, a3, a4 = alpha(k)
    return a1 * vol + a2 * E + (a4 - a3) * V + 12 * a3


def _simplex_scale(P: LatticePolytope) -> int | None:
    if len(P.vertices) != 4 or len(P.edges) != 6:
        return None
    lengths = {e.length for e in P.edges}
    if len(lengths) != 1:
        return None
    d = lengths.pop()
    return d if face_volume_data(P)[0] == d**3 else None


def _prism_lengths(P: LatticePolytope) -> tuple[int, int, int] | None:
    """(a, b, c) if P is the polytope of P(O(a)+O(b)+O(c)) with twice the tautological class."""
    if len(P.vertices) != 6 or len(P.edges) != 9:
        return None
    by_dir: dict = {}
    for e in P.edges:
        d = e.direction
        key = max(d, tuple(-x for x in d))
        by_dir.setdefault(key, []).append(e)
    long = [grp for grp in by_dir.values() if len(grp) == 3]
    if len(long) != 1:
        return None
    rails = long[0]
    if any(e.length % 2 for e in rails):
        return None
    rest = [e for e in P.edges if e not in rails]
    if any(e.length != 2 for e in rest):
        return None
    tri = [f for f in P.facets if len([v for v in f.points if v in P.vertices]) == 3]
    if len(tri) != 2 or any(face_volume_data_2d(f.points) != 4 for f in tri):
        return None
    a, b, c = sorted((e.length // 2 for e in rails), reverse=True)
    return a, b, c


def face_volume_data_2d(points) -> int:
    from .lattice_polytope import normalized_volume

    return normalized_volume(points)


def detect_threefold_case(P: LatticePolytope, k: int) -> int:
    if k == 1:
        return 1
    if _simplex_scale(P) is not None:
        return 2
    if k == 2 and _prism_lengths(P) is not None:
        return 3
    if k == 2:
        return 4
    raise UnclassifiedThreefoldError("unclassified threefold, supply case explicitly")


def toric_threefold_gdd(P: LatticePolytope, k: int = 2, case: int | None = None) -> int:
    """Generic k-th distance degree of a k-regular smooth toric threefold."""
    if P.dim != 3:
        raise ValueError("need a 3-dimensional polytope")
    case = case or detect_threefold_case(P, k)
    vol, F, E, V = face_volume_data(P)
    if case == 1:
        if k != 1:
            raise ValueError("case 1 is the k = 1 formula")
        return 15 * vol - 7 * F + 3 * E - V
    if case == 2:
        d = _simplex_scale(P)
        if d is None or k > d:
            raise UnclassifiedThreefoldError("unclassified threefold, supply case explicitly")
        return veronese_gdd(3, d, k)
    if case == 3:
        abc = _prism_lengths(P)
        if abc is None or k != 2:
            raise UnclassifiedThreefoldError("unclassified threefold, supply case explicitly")
        return 162 * sum(abc) - 154
    if case == 4:
        if k != 2:
            raise ValueError("case 4 is a k = 2 formula")
        _, P1, F1 = interior_hull(P)
        # c1^2 L, c1^3 through the adjoint polytope; c1 c2 = 24 for smooth toric threefolds
        c1sqL = P1 - vol + F1 + 2 * F
        c1cube = 2 * (P1 - vol) + 3 * (F1 + F)
        return gdd_threefold((vol, F, c1sqL, E, c1cube, 24, V), 2)
    raise ValueError(f"unknown case {case}")


def p1r_gdd(d_vec: Sequence[int], k: int) -> int:
    """gDD_k of O(d_1..d_r) on (P^1)^r for r in {2, 3}."""
    r = len(d_vec)
    if k > min(d_vec):
        raise NotRegularError("not k-regular, formula inapplicable")
    if r == 2:
        d1, d2 = d_vec
        val = (
            Fraction((k * k + k + 2) * (k * k + 5 * k + 8), 4) * d1 * d2
            - 2 * comb(k + 2, 3) * comb(k + 2, 2) * (d1 + d2)
            + Fraction(4 * (2 * k * k + 1) * comb(k + 3, 4), 3)
        )
        assert val.denominator == 1
        return int(val)
    if r == 3:
        b = beta(k)
        e1 = sum(d_vec)
        e2 = d_vec[0] * d_vec[1] + d_vec[0] * d_vec[2] + d_vec[1] * d_vec[2]
        e3 = prod(d_vec)
        return 2 * (3 * b[0] * e3 + 2 * b[1] * e2 + 2 * (2 * b[2] + b[3]) * e1 + 24 * b[4] + 12 * b[5] + 4 * b[6])
    raise ValueError("r must be 2 or 3")


# order-k eigenvectors ---------------------------------------------------------------


def _monomials(n: int, d: int) -> list[tuple[int, ...]]:
    return [a for a in itertools.product(range(d + 1), repeat=n) if sum(a) == d]


def is_order_k_eigenvector(f: Mapping[tuple, object], v: Sequence, k: int) -> tuple[bool, Fraction | None]:
    """Rank test on (∇_k f(v) | v^k); f_α are coefficients in the basis C(d,α) x^α.

    Returns (is eigenvector, eigenvalue) where the eigenvalue uses the
    (d-k)!/d! normalization and is None when undefined.
    """
    v = [Fraction(x) for x in v]
    if not any(v):
        raise ValueError("v must be nonzero")
    n = len(v)
    d = sum(next(iter(f)))
    if k > d:
        raise ValueError("k exceeds the degree")
    poly = {}
    for a, c in f.items():
        mult = factorial(d) // prod(factorial(x) for x in a)
        poly[tuple(a)] = Fraction(c) * mult
    col1, col2 = [], []
    for beta_ in _monomials(n, k):
        tot = Fraction(0)
        for a, c in poly.items():
            if any(x < y for x, y in zip(a, beta_)):
                continue
            coef = c
            for x, y in zip(a, beta_):
                for t in range(y):
                    coef *= x - t
            tot += coef * prod(vi ** (x - y) for vi, x, y in zip(v, a, beta_))
        col1.append(tot * Fraction(factorial(d - k), factorial(d)))
        col2.append(prod(vi**y for vi, y in zip(v, beta_)))
    rank_le_1 = all(col1[i] * col2[j] == col1[j] * col2[i] for i in range(len(col1)) for j in range(i + 1, len(col1)))
    lam = None
    if rank_le_1:
        for a, b in zip(col1, col2):
            if b:
                lam = a / b
                break
    return rank_le_1, lam
