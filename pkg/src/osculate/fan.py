"""Weighted simplicial fans with lineality, plus the text dump format."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .exact_linalg import lattice_index, rank, saturate, solve_rational

__all__ = ["Cone", "WeightedFan", "parse_fan_dump", "in_cone", "product_fan"]

Vec = tuple[int, ...]


@dataclass(frozen=True)
class Cone:
    gens: tuple[Vec, ...]
    weight: int = 1
    apex: Vec | None = None  # only for translated cones of polyhedral complexes


def _independent_columns(rows: Sequence[Sequence[int]]) -> list[int]:
    """Indices of a maximal set of coordinates on which the rows are independent."""
    chosen: list[int] = []
    cur = 0
    n = len(rows[0]) if rows else 0
    for j in range(n):
        if rank([[r[c] for c in chosen + [j]] for r in rows]) > cur:
            chosen.append(j)
            cur += 1
            if cur == len(rows):
                break
    return chosen


def in_cone(x: Sequence, gens: Sequence[Vec], lineality: Sequence[Vec]) -> bool:
    """Exact membership of x in cone(gens) + span(lineality); gens ∪ lineality independent."""
    cols = list(gens) + list(lineality)
    if not cols:
        return all(v == 0 for v in x)
    if rank(cols + [tuple(x)]) != len(cols):
        return False
    idx = _independent_columns(cols)
    M = [[c[j] for c in cols] for j in idx]
    sol = solve_rational(M, [x[j] for j in idx])
    return all(s >= 0 for s in sol[: len(gens)])


@dataclass
class WeightedFan:
    ambient: int
    lineality: tuple[Vec, ...]
    cones: list[Cone]
    meta: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.lineality = tuple(tuple(int(x) for x in v) for v in self.lineality)
        if self.lineality and rank(self.lineality) != len(self.lineality):
            raise ValueError("lineality generators must be independent")

    @property
    def dim(self) -> int:
        if not self.cones:
            return -1
        return len(self.cones[0].gens) + len(self.lineality)

    def validate(self) -> None:
        d = self.dim
        for c in self.cones:
            if c.weight <= 0:
                raise ValueError("weights must be positive")
            if rank(list(c.gens) + list(self.lineality)) != d or len(c.gens) + len(self.lineality) != d:
                raise ValueError("fan is not pure or a cone is not simplicial")

    def contains(self, x: Sequence) -> bool:
        return any(in_cone(x, c.gens, self.lineality) for c in self.cones)

    def interior_point(self, cone: Cone, rng: random.Random, scale: int = 7) -> tuple[int, ...]:
        pt = [0] * self.ambient
        for g in cone.gens:
            c = rng.randint(1, scale)
            pt = [a + c * b for a, b in zip(pt, g)]
        for g in self.lineality:
            c = rng.randint(-scale, scale)
            pt = [a + c * b for a, b in zip(pt, g)]
        return tuple(pt)

    # balancing -----------------------------------------------------------
    def walls(self) -> dict[frozenset, list[tuple[int, Vec]]]:
        out: dict[frozenset, list[tuple[int, Vec]]] = {}
        for i, c in enumerate(self.cones):
            for g in c.gens:
                key = frozenset(h for h in c.gens if h != g)
                out.setdefault(key, []).append((i, g))
        return out

    def wall_is_balanced(self, wall: frozenset, adjacent: list[tuple[int, Vec]]) -> bool:
        """True iff the weighted primitive normals around the wall sum into its span."""
        base = list(wall) + list(self.lineality)
        L_tau = saturate(base) if base else []
        total = [Fraction(0)] * self.ambient
        for idx, g in adjacent:
            L_sigma = saturate(base + [g])
            c = lattice_index(L_sigma, L_tau + [list(g)])
            w = Fraction(self.cones[idx].weight, c)
            total = [t + w * x for t, x in zip(total, g)]
        den = lcm(*(t.denominator for t in total)) if total else 1
        tot = [int(t * den) for t in total]
        r0 = rank(base) if base else 0
        return rank(base + [tot]) == r0

    def check_balancing(self, sample: int | None = None, seed: int = 0) -> list[frozenset]:
        """Walls that fail the balancing condition (empty list when balanced)."""
        walls = sorted(self.walls().items(), key=lambda kv: sorted(kv[0]))
        if sample is not None and len(walls) > sample:
            walls = random.Random(seed).sample(walls, sample)
        return [w for w, adj in walls if not self.wall_is_balanced(w, adj)]

    # text format ---------------------------------------------------------
    def dump(self) -> str:
        lines = ["LINEALITY"]
        lines += [" ".join(map(str, v)) for v in self.lineality]
        for c in sorted(self.cones, key=lambda c: (sorted(c.gens), c.weight)):
            lines.append(f"CONE w={c.weight}")
            lines += [" ".join(map(str, v)) for v in sorted(c.gens)]
        return "\n".join(lines) + "\n"


def parse_fan_dump(text: str, ambient: int | None = None) -> WeightedFan:
    lin: list[Vec] = []
    cones: list[Cone] = []
    cur: list[Vec] | None = None
    weight = 1
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line == "LINEALITY":
            section = "lin"
            continue
        if line.startswith("CONE"):
            if cur is not None:
                cones.append(Cone(tuple(cur), weight))
            weight = int(line.split("w=")[1])
            cur = []
            section = "cone"
            continue
        vec = tuple(int(x) for x in line.split())
        if section == "lin":
            lin.append(vec)
        elif section == "cone":
            cur.append(vec)
        else:
            raise ValueError("fan dump must start with LINEALITY")
    if cur is not None:
        cones.append(Cone(tuple(cur), weight))
    if ambient is None:
        vecs = lin + [g for c in cones for g in c.gens]
        if not vecs:
            raise ValueError("cannot infer ambient dimension")
        ambient = len(vecs[0])
    return WeightedFan(ambient, tuple(lin), cones)


def product_fan(F1: WeightedFan, F2: WeightedFan) -> WeightedFan:
    z1, z2 = (0,) * F1.ambient, (0,) * F2.ambient
    lin = tuple(v + z2 for v in F1.lineality) + tuple(z1 + v for v in F2.lineality)
    cones = [
        Cone(tuple(g + z2 for g in a.gens) + tuple(z1 + g for g in b.gens), a.weight * b.weight)
        for a in F1.cones
        for b in F2.cones
    ]
    return WeightedFan(F1.ambient + F2.ambient, lin, cones)

