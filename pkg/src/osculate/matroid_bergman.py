"""Linear matroids, their flats, and Bergman fans in the fine (flag) structure.

Subsets of the ground set are bitmasks throughout. Bergman fans use the min
convention: the cone of a flag F_1 < ... < F_{r-1} is spanned by the indicator
vectors e_{F_i}, and R·1 is the lineality. A disconnected matroid gets the
product of the fans of its connected components; in particular coloops only
add lineality.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

from .exact_linalg import IntegerMatrix, rank
from .fan import Cone, WeightedFan, product_fan

__all__ = [
    "BudgetExceeded",
    "LinearMatroid",
    "column_matroid",
    "flats",
    "bergman_flags",
    "bergman_fan",
    "uniform_bergman",
    "uniform_product_bergman",
    "tropical_circuit_test",
]

DEFAULT_BUDGET = 2_000_000


class BudgetExceeded(RuntimeError):
    pass


def _bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def _indicator(mask: int, n: int) -> tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(n))


class LinearMatroid:
    """Matroid of the columns of an integer matrix, with a memoized rank oracle."""

    def __init__(self, M: IntegerMatrix):
        self.matrix = M if isinstance(M, IntegerMatrix) else IntegerMatrix(M)
        self.N = self.matrix.cols
        self._cols = self.matrix.columns()
        self._rank: dict[int, int] = {0: 0}
        self.full = (1 << self.N) - 1

    def rank_of(self, mask: int) -> int:
        r = self._rank.get(mask)
        if r is None:
            r = rank([self._cols[i] for i in _bits(mask)])
            self._rank[mask] = r
        return r

    @property
    def rank(self) -> int:
        return self.rank_of(self.full)

    def closure(self, mask: int, within: int | None = None) -> int:
        within = self.full if within is None else within
        r = self.rank_of(mask)
        out = mask
        for e in _bits(within & ~mask):
            if self.rank_of(mask | (1 << e)) == r:
                out |= 1 << e
        return out

    def loops(self) -> list[int]:
        return [i for i, c in enumerate(self._cols) if not any(c)]

    def parallel_classes(self) -> list[list[int]]:
        seen: dict[int, list[int]] = {}
        for i in range(self.N):
            if i in self.loops():
                continue
            key = self.closure(1 << i)
            seen.setdefault(key, []).append(i)
        return sorted(seen.values())

    def basis(self) -> int:
        b = 0
        for e in range(self.N):
            if self.rank_of(b | (1 << e)) > self.rank_of(b):
                b |= 1 << e
        return b

    def components(self) -> list[int]:
        """Connected components as bitmasks, via fundamental circuits."""
        B = self.basis()
        parent = list(range(self.N))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        rB = self.rank_of(B)
        for e in _bits(self.full & ~B):
            if not any(self._cols[e]):
                continue
            for b in _bits(B):
                if self.rank_of((B & ~(1 << b)) | (1 << e)) == rB:
                    parent[find(b)] = find(e)
        comps: dict[int, int] = {}
        for i in range(self.N):
            comps[find(i)] = comps.get(find(i), 0) | (1 << i)
        return sorted(comps.values(), key=lambda m: (m & -m))

    def circuits(self) -> list[int]:
        """All circuits by brute force; meant for small ground sets."""
        out = []
        for size in range(1, self.rank + 2):
            for sub in itertools.combinations(range(self.N), size):
                mask = sum(1 << i for i in sub)
                if self.rank_of(mask) == size - 1 and all(self.rank_of(mask & ~(1 << i)) == size - 1 for i in sub):
                    out.append(mask)
        return out


def column_matroid(M) -> LinearMatroid:
    return LinearMatroid(M)


def flats(M: LinearMatroid, budget: int = DEFAULT_BUDGET, within: int | None = None) -> list[list[int]]:
    """Flats stratified by rank, optionally of the restriction to a separator."""
    ground = M.full if within is None else within
    top = M.rank_of(ground)
    levels = [[M.closure(0, ground)]]
    count = 1
    for _ in range(top):
        nxt = set()
        for F in levels[-1]:
            for e in _bits(ground & ~F):
                nxt.add(M.closure(F | (1 << e), ground))
                if len(nxt) + count > budget:
                    raise BudgetExceeded(f"more than {budget} flats")
        count += len(nxt)
        levels.append(sorted(nxt))
    return levels


def _component_flags(M: LinearMatroid, comp: int, budget: int) -> list[tuple[int, ...]]:
    """Complete flags of proper nonempty flats of the restriction to comp."""
    r = M.rank_of(comp)
    if r <= 1:
        return [()]
    covers: dict[int, list[int]] = {}

    def up(F: int) -> list[int]:
        got = covers.get(F)
        if got is None:
            got = sorted({M.closure(F | (1 << e), comp) for e in _bits(comp & ~F)})
            covers[F] = got
        return got

    out: list[tuple[int, ...]] = []
    stack: list[tuple[int, ...]] = [()]
    while stack:
        chain = stack.pop()
        if len(chain) == r - 1:
            out.append(chain)
            if len(out) > budget:
                raise BudgetExceeded(f"more than {budget} flags")
            continue
        F = chain[-1] if chain else 0
        for G in reversed(up(F)):
            stack.append(chain + (G,))
    return out


def bergman_flags(M: LinearMatroid, budget: int = DEFAULT_BUDGET) -> tuple[list[int], list[list[tuple[int, ...]]]]:
    """Components and, per component, its complete flags (chains of flat bitmasks)."""
    if M.loops():
        raise ValueError(f"matroid has loops {M.loops()}; its Bergman fan is empty")
    comps = M.components()
    flags_per = [_component_flags(M, c, budget) for c in comps]
    total = 1
    for f in flags_per:
        total *= len(f)
    if total > budget:
        raise BudgetExceeded(f"{total} maximal cones exceed the budget {budget}")
    return comps, flags_per


def flag_layers(comp: int, chain: Sequence[int]) -> list[int]:
    """Layers F_1, F_2 minus F_1, ..., comp minus F_{r-1} of one component flag."""
    out = []
    prev = 0
    for F in list(chain) + [comp]:
        out.append(F & ~prev)
        prev = F
    return out


def bergman_fan(M: LinearMatroid, budget: int = DEFAULT_BUDGET) -> WeightedFan:
    comps, flags_per = bergman_flags(M, budget)
    N = M.N
    lin = tuple(_indicator(c, N) for c in comps)
    cones = []
    for combo in itertools.product(*flags_per):
        gens = tuple(_indicator(F, N) for chain in combo for F in chain)
        cones.append(Cone(gens, 1))
    fan = WeightedFan(N, lin, cones)
    fan.meta["components"] = comps
    fan.meta["flags"] = flags_per
    return fan


def uniform_bergman(h: int, N: int) -> WeightedFan:
    """Bergman fan of U_{h,N} without building a matrix: chains of subsets."""
    if not 1 <= h <= N:
        raise ValueError("need 1 <= h <= N")
    if h == N:
        return WeightedFan(N, tuple(_indicator(1 << i, N) for i in range(N)), [Cone((), 1)])
    cones = []
    for perm in itertools.permutations(range(N), h - 1):
        gens = []
        mask = 0
        for e in perm:
            mask |= 1 << e
            gens.append(_indicator(mask, N))
        cones.append(Cone(tuple(gens), 1))
    return WeightedFan(N, ((1,) * N,), cones)


def uniform_product_bergman(h1: int, h2: int, N: int) -> WeightedFan:
    return product_fan(uniform_bergman(h1, N), uniform_bergman(h2, N))


def tropical_circuit_test(M: LinearMatroid, x: Sequence, circuits: list[int] | None = None) -> bool:
    """Min-convention membership of x in the Bergman fan: min over each circuit attained twice."""
    for C in circuits if circuits is not None else M.circuits():
        vals = [x[i] for i in _bits(C)]
        lo = min(vals)
        if vals.count(lo) < 2:
            return False
    return True
