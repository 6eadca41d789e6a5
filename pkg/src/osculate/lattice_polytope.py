"""Small lattice polytopes: exact hull, edges, facets and lattice volumes.

Hulls are computed by brute force over point subsets, which is fine for the
few dozen points that occur here and is easy to audit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

from .exact_linalg import IntegerMatrix, det, kernel_basis, rank, saturate, solve_rational

__all__ = [
    "Edge",
    "Facet",
    "LatticePolytope",
    "DegeneratePolytopeError",
    "SingularVertexError",
    "hull",
    "smooth_vertex_basis",
    "face_volume_data",
    "interior_hull",
    "normalized_volume",
]

Point = tuple[int, ...]


class DegeneratePolytopeError(ValueError):
    """Points do not affinely span their ambient space."""

    def __init__(self, dim: int, ambient: int):
        super().__init__(f"degenerate point configuration: affine dimension {dim} in ambient dimension {ambient}")
        self.dim = dim
        self.ambient = ambient


class SingularVertexError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    ends: tuple[Point, Point]
    direction: Point  # primitive, from ends[0] to ends[1]
    length: int  # lattice length


@dataclass(frozen=True)
class Facet:
    normal: Point  # primitive; normal . x <= offset on the polytope
    offset: int
    points: tuple[Point, ...]


@dataclass(frozen=True)
class LatticePolytope:
    dim: int
    points: tuple[Point, ...]
    vertices: tuple[Point, ...]
    edges: tuple[Edge, ...]
    facets: tuple[Facet, ...]
    _extra: dict = field(default_factory=dict, compare=False, repr=False)

    def contains(self, x: Sequence[int]) -> bool:
        return all(sum(a * b for a, b in zip(f.normal, x)) <= f.offset for f in self.facets)

    def is_interior(self, x: Sequence[int]) -> bool:
        return all(sum(a * b for a, b in zip(f.normal, x)) < f.offset for f in self.facets)

    def lattice_points(self) -> list[Point]:
        lo = [min(v[i] for v in self.vertices) for i in range(self.dim)]
        hi = [max(v[i] for v in self.vertices) for i in range(self.dim)]
        return [p for p in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))) if self.contains(p)]


def _affine_dim(pts: Sequence[Point]) -> int:
    if len(pts) <= 1:
        return 0
    p0 = pts[0]
    return rank([[a - b for a, b in zip(p, p0)] for p in pts[1:]])


def hull(points: Sequence[Sequence[int]]) -> LatticePolytope:
    """Exact convex hull of full-dimensional integer points."""
    pts = tuple(sorted(set(tuple(int(x) for x in p) for p in points)))
    if not pts:
        raise ValueError("empty point set")
    m = len(pts[0])
    d = _affine_dim(pts)
    if d != m or m == 0:
        raise DegeneratePolytopeError(d, m)
    if m == 1:
        lo, hi = pts[0], pts[-1]
        facets = (
            Facet((-1,), -lo[0], (lo,)),
            Facet((1,), hi[0], (hi,)),
        )
        return LatticePolytope(1, pts, (lo, hi), (Edge((lo, hi), (1,), hi[0] - lo[0]),), facets)

    facets: dict[tuple, Facet] = {}
    for sub in itertools.combinations(range(len(pts)), m):
        base = pts[sub[0]]
        diffs = [[a - b for a, b in zip(pts[i], base)] for i in sub[1:]]
        K = kernel_basis(IntegerMatrix(diffs, shape=(m - 1, m)))
        if K.cols != 1:
            continue
        nrm = K.column(0)
        vals = [sum(a * b for a, b in zip(nrm, p)) for p in pts]
        c = sum(a * b for a, b in zip(nrm, base))
        if all(v <= c for v in vals):
            key = (nrm, c)
        elif all(v >= c for v in vals):
            nrm = tuple(-x for x in nrm)
            c = -c
            key = (nrm, c)
        else:
            continue
        if key not in facets:
            on = tuple(p for p, v in zip(pts, vals) if abs(v) == abs(c) and sum(a * b for a, b in zip(nrm, p)) == c)
            facets[key] = Facet(nrm, c, on)
    facet_list = tuple(sorted(facets.values(), key=lambda f: (f.normal, f.offset)))

    def tight(p):
        return [f for f in facet_list if sum(a * b for a, b in zip(f.normal, p)) == f.offset]

    vertices = tuple(p for p in pts if rank([f.normal for f in tight(p)]) == m)
    edges = []
    for u, w in itertools.combinations(vertices, 2):
        common = [f for f in facet_list if u in f.points and w in f.points]
        if rank([f.normal for f in common]) != m - 1:
            continue
        # no other vertex may lie on the supporting line between u and w
        diff = [b - a for a, b in zip(u, w)]
        g = 0
        for x in diff:
            g = gcd(g, x)
        edges.append(Edge((u, w), tuple(x // g for x in diff), g))
    return LatticePolytope(m, pts, vertices, tuple(edges), facet_list)


def _lattice_coordinates(pts: Sequence[Point]) -> list[Point]:
    """Coordinates of points in a basis of the affine lattice they span."""
    p0 = pts[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in pts]
    basis = saturate(diffs)
    k = len(basis)
    if k == 0:
        return [()] * len(pts)
    # solve basis^T c = diff using a k x k nonsingular minor
    cols = None
    for cand in itertools.combinations(range(len(p0)), k):
        if det([[b[j] for b in basis] for j in cand]) != 0:
            cols = cand
            break
    M = [[b[j] for b in basis] for j in cols]
    out = []
    for dv in diffs:
        sol = solve_rational(M, [dv[j] for j in cols])
        assert all(s.denominator == 1 for s in sol)
        out.append(tuple(int(s) for s in sol))
    return out


def normalized_volume(points: Sequence[Sequence[int]]) -> int:
    """dim! times the volume, measured in the affine lattice of the points."""
    pts = list({tuple(p) for p in points})
    if len(pts) <= 1:
        return 1 if pts else 0
    coords = _lattice_coordinates(pts)
    k = len(coords[0])
    if k == 0:
        return 1
    return _normvol_full(coords)


def _normvol_full(coords: Sequence[Point]) -> int:
    P = hull(coords)
    if P.dim == 1:
        return P.vertices[1][0] - P.vertices[0][0]
    v0 = P.vertices[0]
    total = 0
    for f in P.facets:
        h = f.offset - sum(a * b for a, b in zip(f.normal, v0))
        if h == 0:
            continue
        total += h * normalized_volume(f.points)
    return total


def smooth_vertex_basis(P: LatticePolytope, v: Sequence[int]) -> IntegerMatrix:
    """Primitive edge directions at v as columns, in reverse lex order (e_1 first).

    Raises SingularVertexError unless exactly dim edges meet at v and they form
    a lattice basis.
    """
    v = tuple(v)
    if v not in P.vertices:
        raise ValueError(f"{v} is not a vertex")
    dirs = []
    for e in P.edges:
        if e.ends[0] == v:
            dirs.append(e.direction)
        elif e.ends[1] == v:
            dirs.append(tuple(-x for x in e.direction))
    if P.dim == 1:
        dirs = [(1,)] if v == P.vertices[0] else [(-1,)]
    dirs.sort(reverse=True)
    if len(dirs) != P.dim or abs(det([list(d) for d in dirs])) != 1:
        raise SingularVertexError(f"singular vertex {v}")
    return IntegerMatrix.from_columns(dirs)


def face_volume_data(P: LatticePolytope) -> tuple[int, int, int, int]:
    """(𝒫, ℱ, ℰ, 𝒱): normalized volume, facet volumes, edge lengths, vertex count.

    ℱ is reported as 0 for polygons and segments, where facets are edges or
    points and the sum has no role.
    """
    vol = _normvol_full(P.points)
    F = sum(normalized_volume(f.points) for f in P.facets) if P.dim == 3 else 0
    E = sum(e.length for e in P.edges)
    return vol, F, E, len(P.vertices)


def interior_hull(P: LatticePolytope) -> tuple[LatticePolytope | None, int, int]:
    """Hull of the interior lattice points, with its (𝒫₁, ℱ₁).

    Lower-dimensional interiors give 𝒫₁ = 0; a flat polygon counts as a
    two-sided facet so that ℱ₁ = 2·area.
    """
    inner = [p for p in P.lattice_points() if P.is_interior(p)]
    if not inner:
        return None, 0, 0
    d = _affine_dim(inner)
    if d == P.dim:
        Q = hull(inner)
        vol, F, _, _ = face_volume_data(Q)
        return Q, vol, F
    F1 = 2 * normalized_volume(inner) if (P.dim == 3 and d == 2) else 0
    return None, 0, F1
