"""Toric jet matrices and the fixed-point test for global osculation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, prod
from typing import Sequence

from .exact_linalg import IntegerMatrix, rank, solve_rational
from .lattice_polytope import LatticePolytope, hull, smooth_vertex_basis

__all__ = [
    "ToricEmbedding",
    "OsculationReport",
    "multi_indices",
    "jet_matrix",
    "osculating_dimension",
    "segre_veronese_oscdim",
    "segre_veronese_matrix",
    "vertex_jet_rank",
    "check_global_osculation",
]


@dataclass(frozen=True)
class ToricEmbedding:
    """Monomial map given by the columns of A; row 0 of A is all ones."""

    A: IntegerMatrix

    def __post_init__(self):
        A = self.A if isinstance(self.A, IntegerMatrix) else IntegerMatrix(self.A)
        object.__setattr__(self, "A", A)
        if A.rows < 2 or A.cols < 2:
            raise ValueError("A needs at least two rows and two columns")
        if any(x != 1 for x in A.row(0)):
            raise ValueError("first row of A must be all ones")
        if rank(A) != A.rows:
            raise ValueError("A must have full row rank")
        if len(set(A.columns())) != A.cols:
            raise ValueError("columns of A must be pairwise distinct")

    @classmethod
    def from_exponents(cls, points: Sequence[Sequence[int]]) -> "ToricEmbedding":
        pts = [tuple(int(x) for x in p) for p in points]
        return cls(IntegerMatrix.from_columns([(1,) + p for p in pts]))

    @property
    def m(self) -> int:
        return self.A.rows - 1

    @property
    def n(self) -> int:
        return self.A.cols - 1

    def exponents(self) -> list[tuple[int, ...]]:
        return [c[1:] for c in self.A.columns()]

    def polytope(self) -> LatticePolytope:
        return hull(self.exponents())


@dataclass(frozen=True)
class OsculationReport:
    k: int
    m_k: int
    vertex_ranks: dict
    globally_osculating: bool
    k_regular: bool


def multi_indices(m: int, k: int) -> list[tuple[int, ...]]:
    """|α| ≤ k, graded by degree, lex-descending inside a degree (e_1 before e_2)."""
    out: list[tuple[int, ...]] = []
    for d in range(k + 1):
        level = [a for a in itertools.product(range(d + 1), repeat=m) if sum(a) == d]
        level.sort(reverse=True)
        out.extend(level)
    return out


def _falling(a: int, r: int) -> int:
    p = 1
    for t in range(r):
        p *= a - t
    return p


def jet_matrix(E: ToricEmbedding, k: int) -> IntegerMatrix:
    if k < 1:
        raise ValueError("k must be >= 1")
    exps = E.exponents()
    rows = [[prod(_falling(a[i], al[i]) for i in range(E.m)) for a in exps] for al in multi_indices(E.m, k)]
    return IntegerMatrix(rows, shape=(len(rows), E.n + 1))


def osculating_dimension(E: ToricEmbedding, k: int) -> int:
    return rank(jet_matrix(E, k)) - 1


def segre_veronese_oscdim(m_vec: Sequence[int], d_vec: Sequence[int], k: int) -> int:
    if len(m_vec) != len(d_vec) or any(x <= 0 for x in (*m_vec, *d_vec)) or k < 1:
        raise ValueError("positive entries of equal length and k >= 1 required")
    if k > sum(d_vec):
        return prod(comb(n + d, d) for n, d in zip(m_vec, d_vec)) - 1
    # count monomials of total order between 1 and k, at most d_l in each factor
    total = 0
    for s in itertools.product(*(range(d + 1) for d in d_vec)):
        if 1 <= sum(s) <= k:
            total += prod(comb(n + si - 1, si) for n, si in zip(m_vec, s))
    return total


def segre_veronese_matrix(m_vec: Sequence[int], d_vec: Sequence[int]) -> IntegerMatrix:
    """Exponent matrix of O(d_1,...,d_r) on P^{m_1} x ... x P^{m_r}, in affine charts."""
    blocks = []
    for n, d in zip(m_vec, d_vec):
        blocks.append([a for a in itertools.product(range(d + 1), repeat=n) if sum(a) <= d])
    pts = [sum(ch, ()) for ch in itertools.product(*blocks)]
    return ToricEmbedding.from_exponents(pts).A


def vertex_jet_rank(E: ToricEmbedding, v: Sequence[int], k: int, P: LatticePolytope | None = None) -> int:
    P = P or E.polytope()
    v = tuple(v)
    B = smooth_vertex_basis(P, v)
    Bl = B.tolist()
    seen = set()
    for a in E.exponents():
        sol = solve_rational(Bl, [x - y for x, y in zip(a, v)])
        b = tuple(int(s) for s in sol)  # integral since B is unimodular
        if all(x >= 0 for x in b) and sum(b) <= k:
            seen.add(b)
    return len(seen)


def check_global_osculation(E: ToricEmbedding, k: int) -> OsculationReport:
    P = E.polytope()
    r = osculating_dimension(E, k) + 1
    ranks = {v: vertex_jet_rank(E, v, k, P) for v in P.vertices}
    glob = all(x == r for x in ranks.values())
    return OsculationReport(k, r - 1, ranks, glob, glob and r == comb(E.m + k, k))
