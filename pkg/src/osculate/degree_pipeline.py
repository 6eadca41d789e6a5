"""From a monomial embedding and an order k to multidegrees and polar degrees.

The conormal variety of order k tropicalizes to V(Berg(M_B) x R^{m+1}), where
B spans the kernel of the jet matrix, M_B is the matroid of B's rows and

    V(z, w) = (-A^T w, z + A^T w)    for z in R^{n+1}, w in R^{m+1}.

Multidegrees are degrees of its stable intersection with products of uniform
Bergman fans. The fast route never materializes either fan: for a displacement
(v1, v2), the x-block condition picks a face S1 of the regular triangulation of
A with heights v1, and the y-block condition picks, for every layer of a flag
of flats, a face of that layer's triangulation with heights -v2. Each choice
is an m x m integer linear system; `_kernels.enumerate_intersections` solves
and certifies all of them.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _kernels
from .exact_linalg import IntegerMatrix, kernel_basis, lattice_index, rank, saturate, smith_diagonal, solve_rational
from .fan import Cone, WeightedFan, product_fan
from .jet_osculation import ToricEmbedding, check_global_osculation, jet_matrix
from .matroid_bergman import (
    DEFAULT_BUDGET,
    LinearMatroid,
    bergman_fan,
    bergman_flags,
    column_matroid,
    flag_layers,
    uniform_bergman,
)
from .tropical_cycle import MAX_REDRAWS, NonGenericError, ZeroCycle, displacement, project_fan, stable_intersection

__all__ = [
    "TrivialConormalError",
    "DegreeReport",
    "ConormalData",
    "conormal_data",
    "trop_conormal",
    "multidegrees",
    "multidegree_general",
    "polar_report",
    "critical_valuations",
    "trop_Zu",
    "trop_Zu_lines",
    "report_from_multidegrees",
    "OSCULATION_WARNING",
]

OSCULATION_WARNING = "multidegrees only: global osculation hypothesis not verified"


class TrivialConormalError(ValueError):
    pass


def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if (mask >> i) & 1]


@dataclass
class ConormalData:
    """Everything about W_k that the intersection routines need.

    Hyperplane coordinates y_j that vanish on all of W_k (zero rows of B, i.e.
    loops of M_B) are dropped, so W_k lives in P^n x P^{n'} with n' + 1 = len(live).
    """

    E: ToricEmbedding
    k: int
    B: IntegerMatrix
    m_k: int
    budget: int = DEFAULT_BUDGET

    @property
    def N(self) -> int:
        return self.E.n + 1

    @property
    def m(self) -> int:
        return self.E.m

    @cached_property
    def live(self) -> list[int]:
        return [j for j in range(self.N) if any(self.B.row(j))]

    @property
    def N2(self) -> int:
        return len(self.live)

    @cached_property
    def matroid(self) -> LinearMatroid:
        """Matroid of the nonzero rows of B, on local indices 0..N2-1."""
        return column_matroid(self.B.select_rows(self.live).T)

    @cached_property
    def flag_structure(self):
        comps, flags_per = bergman_flags(self.matroid, self.budget)
        glob = self._to_global
        layers_per = [[[glob(D) for D in flag_layers(c, ch)] for ch in fl] for c, fl in zip(comps, flags_per)]
        return [glob(c) for c in comps], layers_per

    def _to_global(self, mask: int) -> int:
        return sum(1 << self.live[i] for i in _bits(mask))

    @cached_property
    def flags(self) -> list[tuple[int, ...]]:
        """Every maximal cone of Berg(M_B), as its tuple of layer bitmasks (global indices)."""
        _, layers_per = self.flag_structure
        return [tuple(itertools.chain.from_iterable(combo)) for combo in itertools.product(*layers_per)]

    @cached_property
    def comp_start(self) -> np.ndarray:
        _, layers_per = self.flag_structure
        out = []
        for lp in layers_per:
            out += [True] + [False] * (len(lp[0]) - 1)
        return np.array(out, dtype=np.bool_)

    @cached_property
    def V(self) -> IntegerMatrix:
        """(z, w) -> (-A^T w, z + A_live^T w) on R^{N2} x R^{m+1}."""
        A = self.E.A
        N, N2, m1 = self.N, self.N2, self.m + 1
        rows = []
        for j in range(N):
            rows.append([0] * N2 + [-A[t, j] for t in range(m1)])
        for pos, j in enumerate(self.live):
            rows.append([int(i == pos) for i in range(N2)] + [A[t, j] for t in range(m1)])
        return IntegerMatrix(rows, shape=(N + N2, N2 + m1))

    def cone_generators(self, layers: Sequence[int]) -> list[list[int]]:
        """Generators of V(Λ_σ): the source lattice of the cone with these layers."""
        A = self.E.A
        gens = [[0] * self.N + [(D >> j) & 1 for j in self.live] for D in layers]
        for t in range(self.m + 1):
            row = list(A.row(t))
            gens.append([-x for x in row] + [row[j] for j in self.live])
        return gens

    def source_fan(self) -> WeightedFan:
        N2, m1 = self.N2, self.m + 1
        Bl = self.B.select_rows(self.live)
        U = IntegerMatrix(
            [list(Bl.row(j)) + [0] * m1 for j in range(N2)]
            + [[0] * Bl.cols + [int(i == t) for i in range(m1)] for t in range(m1)],
            shape=(N2 + m1, Bl.cols + m1),
        )
        return bergman_fan(column_matroid(U.T), self.budget)


def conormal_data(E: ToricEmbedding, k: int, budget: int = DEFAULT_BUDGET, B: IntegerMatrix | None = None) -> ConormalData:
    Ak = jet_matrix(E, k)
    m_k = rank(Ak) - 1
    if m_k >= E.n:
        raise TrivialConormalError(f"order-{k} conormal variety is trivial: m_k = n = {E.n}")
    if B is None:
        B = kernel_basis(Ak)
    return ConormalData(E, k, B, m_k, budget)


def trop_conormal(E: ToricEmbedding, k: int, budget: int = DEFAULT_BUDGET) -> WeightedFan:
    data = conormal_data(E, k, budget)
    fan = project_fan(data.source_fan(), data.V)
    N, N2 = data.N, data.N2
    lin = list(fan.lineality)
    for v in ((1,) * N + (0,) * N2, (0,) * N + (1,) * N2):
        if rank(lin + [v]) != len(lin):
            raise AssertionError("bi-projective lineality missing")
    fan.meta["data"] = data
    return fan


# regular triangulations --------------------------------------------------


def _lower_faces(elems: Sequence[int], pts: Sequence[Sequence[int]], heights: Sequence[int]) -> list[tuple[int, ...]]:
    """Faces of the regular triangulation (lower hull) of the given points.

    Raises NonGenericError if the heights are not generic.
    """
    elems = list(elems)
    if len(elems) == 1:
        return [(elems[0],)]
    p0 = pts[elems[0]]
    diffs = [[a - b for a, b in zip(pts[e], p0)] for e in elems]
    d = rank(diffs)
    # project to d coordinates on which the affine span is injective
    coords_idx: list[int] = []
    for c in range(len(p0)):
        if rank([[row[j] for j in coords_idx + [c]] for row in diffs]) > len(coords_idx):
            coords_idx.append(c)
        if len(coords_idx) == d:
            break
    P = {e: [pts[e][c] for c in coords_idx] for e in elems}
    maximal = []
    for S in itertools.combinations(elems, d + 1):
        M = [[1] + P[e] for e in S]
        sol = solve_rational(M, [heights[e] for e in S])
        if sol is None:
            continue
        above = True
        for q in elems:
            if q in S:
                continue
            gap = heights[q] - (sol[0] + sum(s * x for s, x in zip(sol[1:], P[q])))
            if gap == 0:
                raise NonGenericError("non-generic heights")
            if gap < 0:
                above = False
                break
        if above:
            maximal.append(S)
    faces = set()
    for S in maximal:
        for size in range(1, len(S) + 1):
            faces.update(itertools.combinations(S, size))
    return sorted(faces, key=lambda f: (len(f), f))


@dataclass
class _Tables:
    flags: np.ndarray
    lay_ptr: np.ndarray
    lay_idx: np.ndarray
    lf_ptr: np.ndarray
    face_ptr: np.ndarray
    face_idx: np.ndarray
    faces: list


def _build_tables(data: ConormalData, v2: Sequence[int]) -> _Tables:
    pts = data.E.exponents()
    neg = [-x for x in v2]
    layer_ids: dict[int, int] = {}
    flag_rows = []
    for fl in data.flags:
        row = []
        for D in fl:
            if D not in layer_ids:
                layer_ids[D] = len(layer_ids)
            row.append(layer_ids[D])
        flag_rows.append(row)
    lay_ptr = [0]
    lay_idx: list[int] = []
    lf_ptr = [0]
    face_ptr = [0]
    face_idx: list[int] = []
    faces = []
    for D in layer_ids:  # insertion order matches ids
        el = _bits(D)
        lay_idx += el
        lay_ptr.append(len(lay_idx))
        for f in _lower_faces(el, pts, neg):
            faces.append(f)
            face_idx += list(f)
            face_ptr.append(len(face_idx))
        lf_ptr.append(len(faces))
    r = len(flag_rows[0]) if flag_rows else 0
    as64 = lambda x: np.asarray(x, dtype=np.int64)  # noqa: E731
    return _Tables(
        np.asarray(flag_rows, dtype=np.int64).reshape(len(flag_rows), r),
        as64(lay_ptr),
        as64(lay_idx),
        as64(lf_ptr),
        as64(face_ptr),
        as64(face_idx),
        faces,
    )


class _WeightCache:
    def __init__(self, data: ConormalData):
        self.data = data
        self.sat: dict[tuple, tuple[list, int]] = {}

    def cone(self, layers: tuple[int, ...]) -> tuple[list, int]:
        got = self.sat.get(layers)
        if got is None:
            gens = self.data.cone_generators(layers)
            sat = saturate(gens)
            got = (sat, lattice_index(sat, gens))
            self.sat[layers] = got
        return got

    def weight(self, layers: tuple[int, ...], S1: Sequence[int], S2: Sequence[int]) -> int:
        sat, m_sigma = self.cone(layers)
        N = self.data.N
        pos = {j: p for p, j in enumerate(self.data.live)}
        rows = [[g[j] for j in S1] + [g[N + pos[j]] for j in S2] for g in sat]
        rows.append([1] * len(S1) + [0] * len(S2))
        rows.append([0] * len(S1) + [1] * len(S2))
        diag = smith_diagonal(rows)
        if len(diag) != len(S1) + len(S2):
            raise AssertionError("intersection is not transversal")
        idx = 1
        for d in diag:
            idx *= d
        return m_sigma * idx


def _delta_fast(data: ConormalData, i: int, seed: int, weights: _WeightCache) -> tuple[int, list]:
    N, m = data.N, data.m
    pts = data.E.exponents()
    pts_arr = np.asarray(pts, dtype=np.int64).reshape(N, m)
    for attempt in range(MAX_REDRAWS):
        v = displacement(seed, attempt, 2 * N)
        v1, v2 = v[:N], v[N:]
        try:
            s1 = [f for f in _lower_faces(range(N), pts, [-x for x in v1]) if len(f) == i + 1]
            tables = _build_tables(data, v2)
        except NonGenericError:
            continue
        if not s1:
            return 0, []
        s1_arr = np.asarray(s1, dtype=np.int64)
        live_arr = np.zeros(N, dtype=np.bool_)
        live_arr[data.live] = True
        cap = 1024
        while True:
            out = np.zeros((cap, 2 + tables.flags.shape[1]), dtype=np.int64)
            cnt = _kernels.enumerate_intersections(
                pts_arr,
                np.asarray(v1, dtype=np.int64),
                np.asarray(v2, dtype=np.int64),
                s1_arr,
                tables.flags,
                data.comp_start,
                live_arr,
                tables.lay_ptr,
                tables.lay_idx,
                tables.lf_ptr,
                tables.face_ptr,
                tables.face_idx,
                m - i,
                out,
            )
            if cnt > cap:
                cap *= 8
                continue
            break
        if cnt == _kernels.NONGENERIC:
            continue
        total = 0
        hits = []
        for row in out[:cnt]:
            layers = data.flags[int(row[0])]
            S1 = s1[int(row[1])]
            S2 = sorted(j for g in row[2:] for j in tables.faces[int(g)])
            w = weights.weight(layers, S1, S2)
            hits.append((layers, S1, tuple(S2), w))
            total += w
        return total, hits
    raise NonGenericError(f"no generic displacement found in {MAX_REDRAWS} draws")


def multidegrees(
    E: ToricEmbedding,
    k: int,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    B: IntegerMatrix | None = None,
) -> list[int]:
    """δ_{k,i} for i = 0 .. n - m_k + m - 1."""
    data = conormal_data(E, k, budget, B)
    cache = _WeightCache(data)
    out = []
    for i in range(E.n - data.m_k + E.m):
        if i > E.m:
            out.append(0)  # S1 would need i + 1 > m + 1 affinely independent exponents
            continue
        out.append(_delta_fast(data, i, seed, cache)[0])
    return out


def multidegree_general(E: ToricEmbedding, k: int, i: int, seed: int = 0) -> int:
    """δ_{k,i} from materialized fans and the generic stable intersection."""
    data = conormal_data(E, k)
    c = E.n - data.m_k + E.m - 1 - i  # power of h'
    if i > E.n or c >= data.N2:
        return 0
    W = trop_conormal(E, k)
    U = product_fan(uniform_bergman(E.n - i + 1, data.N), uniform_bergman(data.N2 - c, data.N2))
    return stable_intersection(W, U, seed=seed).degree()


# reports -------------------------------------------------------------------


@dataclass
class DegreeReport:
    k: int
    m: int
    m_k: int
    multidegrees: list[int]
    polar_degrees: list[int]
    gdd: int | None
    polar_sum: int
    defect: int
    codim: int
    dual_degree: int
    degree: int
    globally_osculating: bool
    k_regular: bool
    warnings: list[str] = field(default_factory=list)
    seed: int = 0

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "m_k": self.m_k,
            "multidegrees": list(self.multidegrees),
            "polar_degrees": list(self.polar_degrees),
            "gdd": self.gdd,
            "dual": {"defect": self.defect, "codim": self.codim, "degree": self.dual_degree},
            "degree": self.degree,
            "globally_osculating": self.globally_osculating,
            "warnings": list(self.warnings),
            "seed": self.seed,
        }


def report_from_multidegrees(k: int, m: int, m_k: int, delta: Sequence[int], osc: bool, k_regular: bool, seed: int = 0) -> DegreeReport:
    delta = list(delta) + [0] * max(0, m + 1 - len(delta))
    mu = [delta[m - j] for j in range(m + 1)]
    defect = 0
    for x in reversed(mu):
        if x:
            break
        defect += 1
    warn = [] if osc else [OSCULATION_WARNING]
    return DegreeReport(
        k=k,
        m=m,
        m_k=m_k,
        multidegrees=list(delta),
        polar_degrees=mu,
        gdd=sum(mu) if osc else None,
        polar_sum=sum(mu),
        defect=defect,
        codim=m_k - m + defect + 1,
        dual_degree=mu[m - defect] if defect <= m else 0,
        degree=mu[0],
        globally_osculating=osc,
        k_regular=k_regular,
        warnings=warn,
        seed=seed,
    )


def polar_report(E: ToricEmbedding, k: int, seed: int = 0, budget: int = DEFAULT_BUDGET) -> DegreeReport:
    from .lattice_polytope import SingularVertexError

    try:
        osc = check_global_osculation(E, k)
        glob, kreg = osc.globally_osculating, osc.k_regular
    except SingularVertexError:
        glob = kreg = False
    delta = multidegrees(E, k, seed=seed, budget=budget)
    data_mk = rank(jet_matrix(E, k)) - 1
    rep = report_from_multidegrees(k, E.m, data_mk, delta, glob, kreg, seed)
    if not glob:
        warnings.warn(OSCULATION_WARNING, stacklevel=2)
    return rep


# tropical critical points ----------------------------------------------------


def trop_Zu(u: Sequence[int], budget: int = DEFAULT_BUDGET) -> WeightedFan:
    """Tropicalization of {x + y = u} for u of zero valuation, as a pointed fan in R^{2N}.

    Built from the Bergman fan of the homogenized linear space
    {(x, y, s) : x + y = s u}, sliced at s = 0.
    """
    N = len(u)
    if any(x == 0 for x in u):
        raise ValueError("u must have nonzero entries")
    C = [[int(i == j) for j in range(N)] + [int(i == j) for j in range(N)] + [-u[i]] for i in range(N)]
    K = kernel_basis(IntegerMatrix(C, shape=(N, 2 * N + 1)))
    M = column_matroid(K.T)
    if M.loops() or len(M.components()) != 1:
        raise ValueError("u is not generic: the homogenized matroid degenerates")
    full = bergman_fan(M, budget)
    s = 2 * N
    cones = []
    for c in full.cones:
        gens = tuple(tuple(x - g[s] for x in g[:s]) for g in c.gens)
        cones.append(Cone(gens, c.weight))
    return WeightedFan(2 * N, (), cones)


def trop_Zu_lines(nu: Sequence[int]) -> WeightedFan:
    """Trop{x + y = u} as a product of tropical lines with vertices (ν_j, ν_j).

    Works for any valuation vector ν of u; for ν = 0 its support agrees with
    `trop_Zu`, which uses the coarser-to-build homogenized Bergman fan.
    """
    N = len(nu)
    rays = []
    for j in range(N):
        ex, ey = [0] * (2 * N), [0] * (2 * N)
        ex[j], ey[N + j] = 1, 1
        both = [0] * (2 * N)
        both[j] = both[N + j] = -1
        rays.append((tuple(ex), tuple(ey), tuple(both)))
    apex = tuple(nu) + tuple(nu)
    cones = [Cone(tuple(choice), 1, apex) for choice in itertools.product(*rays)]
    return WeightedFan(2 * N, (), cones)


def critical_valuations(
    E: ToricEmbedding,
    u: Sequence[int] | None = None,
    nu: Sequence[int] | None = None,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> list[tuple[tuple[Fraction, ...], tuple[Fraction, ...], int]]:
    """Points of Trop W_1 ∩_st Trop Z_u with multiplicities.

    u is the residue vector (generic nonzero integers) used for the
    zero-valuation construction; nu, if given and nonzero, switches to the
    valuated construction. Each entry is (x-block, full point, multiplicity).
    """
    if E.n == E.m:
        raise TrivialConormalError("no critical points to compute for a coordinate point")
    N = E.n + 1
    W = trop_conormal(E, 1, budget)
    if nu is not None and any(nu):
        if len(nu) != N:
            raise ValueError(f"valuation vector needs {N} entries")
        Z = trop_Zu_lines(nu)
    else:
        if u is None:
            u = [3 + 2 * j for j in range(N)]
        if len(u) != N:
            raise ValueError(f"u needs {N} entries")
        Z = trop_Zu(u, budget)
    cyc: ZeroCycle = stable_intersection(W, Z, seed=seed)
    return [(pt[:N], pt, w) for pt, w in cyc.points]
