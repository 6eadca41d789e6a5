"""Push-forward and stable intersection of weighted fans."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact_linalg import IntegerMatrix, kernel_basis, lattice_index, rank, saturate, smith_diagonal, solve_rational
from .fan import Cone, WeightedFan

__all__ = [
    "NonGenericError",
    "ZeroCycle",
    "SplitMix64",
    "displacement",
    "project_fan",
    "stable_intersection",
    "degree",
    "MAX_REDRAWS",
]

MAX_REDRAWS = 32
MASK64 = (1 << 64) - 1


class NonGenericError(RuntimeError):
    """Every displacement drawn met some cone pair non-transversally."""


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def integers(self, n: int, bits: int = 20) -> list[int]:
        half = 1 << bits
        return [int(self.next() % (2 * half + 1)) - half for _ in range(n)]


def displacement(seed: int, attempt: int, n: int, bits: int = 20) -> list[int]:
    """Deterministic integer displacement for a (seed, attempt) pair."""
    return SplitMix64(seed * 1_000_003 + attempt).integers(n, bits)


@dataclass
class ZeroCycle:
    """Points (modulo a lineality space) with positive integer weights."""

    ambient: int
    lineality: tuple
    points: list[tuple[tuple[Fraction, ...], int]]
    displacement: tuple = ()

    def degree(self) -> int:
        return sum(w for _, w in self.points)


def degree(C) -> int:
    if isinstance(C, ZeroCycle):
        return C.degree()
    if isinstance(C, WeightedFan):
        if not C.cones:
            return 0
        if C.dim != 0:
            raise ValueError(f"degree needs a zero-dimensional cycle, got dimension {C.dim}")
        return sum(c.weight for c in C.cones)
    raise TypeError(type(C).__name__)


def _apply(V: IntegerMatrix, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in V.tolist())


def project_fan(F: WeightedFan, V: IntegerMatrix) -> WeightedFan:
    """Image fan under V, weights scaled by lattice indices.

    Cones whose image drops dimension are discarded. Images of distinct cones
    are assumed not to overlap in their interiors, which holds whenever V is
    injective; coinciding images have their weights added.
    """
    if V.cols != F.ambient:
        raise ValueError("V must have one column per ambient coordinate")
    lin_img = [_apply(V, v) for v in F.lineality]
    if lin_img and rank(lin_img) < len(lin_img):
        raise ValueError("V collapses the lineality space")
    lin_basis = tuple(tuple(r) for r in saturate(lin_img)) if lin_img else ()
    acc: dict[tuple, int] = {}
    d = F.dim
    for c in F.cones:
        src = list(c.gens) + list(F.lineality)
        img = [_apply(V, g) for g in src]
        if rank(img) < d:
            continue
        L_src = saturate(src) if src else []
        img_lat = [_apply(V, g) for g in L_src]
        idx = lattice_index(saturate(img_lat), img_lat) if img_lat else 1
        key = tuple(sorted(_apply(V, g) for g in c.gens))
        acc[key] = acc.get(key, 0) + c.weight * idx
    return WeightedFan(V.rows, lin_basis, [Cone(k, w) for k, w in sorted(acc.items())])


def _complement_in(base: list, extra: list) -> list:
    """Vectors of extra that extend base to a basis of span(base ∪ extra)."""
    chosen = list(base)
    out = []
    r = rank(chosen) if chosen else 0
    for v in extra:
        if rank(chosen + [v]) > r:
            chosen.append(v)
            out.append(v)
            r += 1
    return out


def _common_lineality(L1: Sequence, L2: Sequence, n: int) -> list:
    if not L1 or not L2:
        return []
    # span(L1) ∩ span(L2) via the kernel of [L1^T | -L2^T]
    M = IntegerMatrix([[v[i] for v in L1] + [-w[i] for w in L2] for i in range(n)], shape=(n, len(L1) + len(L2)))
    K = kernel_basis(M)
    out = []
    for col in K.columns():
        vec = [sum(col[j] * L1[j][i] for j in range(len(L1))) for i in range(n)]
        out.append(vec)
    return saturate(out) if out else []


def stable_intersection(
    F1: WeightedFan,
    F2: WeightedFan,
    seed: int = 0,
    max_redraws: int = MAX_REDRAWS,
) -> ZeroCycle:
    """Stable intersection by the fan displacement rule.

    Only intersections that are zero-dimensional modulo the common lineality
    are supported. Cones may carry an apex (translated cones), in which case
    the inputs are polyhedral complexes. Displacements are infinitesimal
    (eps*v with eps symbolic); points are reported at eps = 0, so for two fans
    every point sits at the origin modulo lineality.
    """
    n = F1.ambient
    if F2.ambient != n:
        raise ValueError("fans live in different spaces")
    common = _common_lineality(list(F1.lineality), list(F2.lineality), n)
    if not F1.cones or not F2.cones:
        return ZeroCycle(n, tuple(map(tuple, common)), [])
    expected = F1.dim + F2.dim - n
    if expected < len(common):
        return ZeroCycle(n, tuple(map(tuple, common)), [])
    if expected > len(common):
        raise NotImplementedError("only zero-dimensional stable intersections are supported")
    lin2 = _complement_in(common, list(F2.lineality))
    sat1 = {}
    sat2 = {}
    zero = (0,) * n
    for attempt in range(max_redraws):
        v = displacement(seed, attempt, n)
        pts: list[tuple[tuple[Fraction, ...], int]] = []
        ok = True
        for c1 in F1.cones:
            s1 = list(c1.gens) + list(F1.lineality)
            a1 = c1.apex or zero
            for c2 in F2.cones:
                cols = s1 + list(c2.gens) + lin2
                if len(cols) != n:
                    raise AssertionError("dimension bookkeeping")
                M = [[c[i] for c in cols] for i in range(n)]
                # solve for x in sigma with x = (tau point) + eps*v; coefficients are c0 + eps*c1
                sol1 = solve_rational(M, v)
                if sol1 is None:
                    continue
                a2 = c2.apex or zero
                sol0 = solve_rational(M, [q - p for p, q in zip(a1, a2)]) if a1 != a2 else [Fraction(0)] * n
                ray_idx = list(range(len(c1.gens))) + list(range(len(s1), len(s1) + len(c2.gens)))
                signs = []
                for j in ray_idx:
                    flip = -1 if j >= len(s1) else 1  # tau coefficients enter negated
                    c0, e1 = flip * sol0[j], flip * sol1[j]
                    signs.append((c0 > 0) - (c0 < 0) if c0 else (e1 > 0) - (e1 < 0))
                if 0 in signs:
                    ok = False
                    break
                if all(t > 0 for t in signs):
                    k1 = id(c1)
                    if k1 not in sat1:
                        sat1[k1] = saturate(s1)
                    k2 = id(c2)
                    if k2 not in sat2:
                        sat2[k2] = saturate(list(c2.gens) + list(F2.lineality))
                    idx = 1
                    for dgl in smith_diagonal(sat1[k1] + sat2[k2]):
                        idx *= dgl
                    # limit point as eps -> 0
                    x = [a1[i] + sum(sol0[j] * cols[j][i] for j in range(len(s1))) for i in range(n)]
                    pts.append((tuple(Fraction(t) for t in x), c1.weight * c2.weight * idx))
            if not ok:
                break
        if ok:
            return ZeroCycle(n, tuple(map(tuple, common)), pts, tuple(v))
    raise NonGenericError(f"no generic displacement found in {max_redraws} draws")
