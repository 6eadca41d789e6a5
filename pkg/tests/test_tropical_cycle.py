import pytest

from osculate.exact_linalg import IntegerMatrix
from osculate.fan import Cone, WeightedFan, parse_fan_dump, product_fan
from osculate.matroid_bergman import uniform_bergman
from osculate.tropical_cycle import (
    NonGenericError,
    SplitMix64,
    ZeroCycle,
    degree,
    displacement,
    project_fan,
    stable_intersection,
)


def line(direction):
    return WeightedFan(len(direction), (tuple(direction),), [Cone((), 1)])


def test_splitmix_reference_values():
    # reference stream of the splitmix64 generator seeded with 0
    g = SplitMix64(0)
    assert [g.next() for _ in range(3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]
    assert displacement(3, 1, 5) == displacement(3, 1, 5)
    assert displacement(3, 1, 5) != displacement(3, 2, 5)


def test_degree():
    assert degree(ZeroCycle(2, (), [])) == 0
    assert degree(ZeroCycle(2, (), [((0, 0), 3)])) == 3
    assert degree(ZeroCycle(2, (), [((0, 0), 1), ((1, 0), 2), ((0, 1), 3)])) == 6
    with pytest.raises(ValueError):
        degree(uniform_bergman(2, 3))


def test_complementary_subspaces():
    F1 = WeightedFan(3, ((1, 0, 0), (0, 1, 0)), [Cone((), 1)])
    F2 = line((0, 0, 1))
    C = stable_intersection(F1, F2)
    assert C.degree() == 1


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("direction,expected", [((0, 1, 2, 3), 3), ((0, 1, 2, 5), 5), ((0, 3, 1, 2), 3)])
def test_line_against_u34(direction, expected, seed):
    C = stable_intersection(line(direction), uniform_bergman(3, 4), seed=seed)
    assert C.degree() == expected
    assert all(all(x == 0 for x in p) for p, _ in C.points)


def test_line_in_lineality():
    assert stable_intersection(line((1, 1, 1, 1)), uniform_bergman(3, 4)).degree() == 0


def test_project_index():
    F = line((1, 0))
    G = project_fan(F, IntegerMatrix([[2, 0], [0, 2]]))
    assert G.lineality == ((1, 0),)
    assert G.cones[0].weight == 2


def test_project_unimodular_lineality_fan():
    F = WeightedFan(3, ((1, 0, 0), (0, 1, 1)), [Cone((), 1)])
    G = project_fan(F, IntegerMatrix([[1, 1, 0], [0, 1, 0], [0, 0, 1], [1, 0, 1]]))
    assert G.cones[0].weight == 1 and len(G.lineality) == 2


def test_apex_shifts_points():
    F1 = WeightedFan(2, (), [Cone(((1, 0),), 1, (0, 5)), Cone(((-1, 0),), 1, (0, 5))])
    F2 = WeightedFan(2, (), [Cone(((0, 1),), 1, (3, 0)), Cone(((0, -1),), 1, (3, 0))])
    C = stable_intersection(F1, F2)
    assert C.degree() == 1 and C.points[0][0] == (3, 5)


def test_nongeneric_raises(monkeypatch):
    import osculate.tropical_cycle as tc

    # a displacement parallel to one ray leaves that ray's coefficient at zero
    monkeypatch.setattr(tc, "displacement", lambda seed, attempt, n: [1, 0])
    F1 = WeightedFan(2, (), [Cone(((1, 0),), 1)])
    F2 = WeightedFan(2, (), [Cone(((0, 1),), 1)])
    with pytest.raises(NonGenericError):
        stable_intersection(F1, F2, max_redraws=3)
    monkeypatch.setattr(tc, "displacement", lambda seed, attempt, n: [1, -1])
    assert stable_intersection(F1, F2).degree() == 1


def test_dump_roundtrip():
    F = product_fan(uniform_bergman(2, 3), uniform_bergman(3, 3))
    text = F.dump()
    assert text.startswith("LINEALITY\n")
    G = parse_fan_dump(text)
    assert G.dump() == text


def test_unbalanced_fan_detected():
    F = WeightedFan(2, (), [Cone(((1, 0),), 1), Cone(((0, 1),), 1), Cone(((1, 1),), 1)])
    assert F.check_balancing() != []
    G = WeightedFan(2, (), [Cone(((1, 0),), 1), Cone(((0, 1),), 1), Cone(((-1, -1),), 1)])
    assert G.check_balancing() == []
