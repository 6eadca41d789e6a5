import os
import subprocess
import sys
import warnings

import pytest

from osculate.degree_pipeline import (
    OSCULATION_WARNING,
    TrivialConormalError,
    conormal_data,
    critical_valuations,
    multidegree_general,
    multidegrees,
    polar_report,
    report_from_multidegrees,
    trop_conormal,
    trop_Zu,
    trop_Zu_lines,
)
from osculate.exact_linalg import IntegerMatrix, rank
from osculate.fan import parse_fan_dump
from osculate.jet_osculation import ToricEmbedding
from osculate.tropical_cycle import NonGenericError
from instances import CUSP_CURVE, hexagon, segment, twisted_cubic


def in_span(v, basis):
    return rank(list(basis) + [v]) == rank(list(basis))


def test_conormal_fan_k1():
    F = trop_conormal(twisted_cubic(), 1)
    assert F.dim == 4 and F.ambient == 8
    assert in_span((0, 1, 2, 3, 0, -1, -2, -3), F.lineality)
    assert in_span((1, 1, 1, 1, 0, 0, 0, 0), F.lineality)
    assert in_span((0, 0, 0, 0, 1, 1, 1, 1), F.lineality)
    F.validate()


def test_conormal_fan_k2_dump_roundtrip():
    F = trop_conormal(twisted_cubic(), 2)
    assert F.dim == 3
    assert parse_fan_dump(F.dump()).dump() == F.dump()


def test_hexagon_k2_drops_zero_row():
    data = conormal_data(hexagon(), 2)
    assert data.m_k == 5
    assert data.N2 == 6  # the interior point's kernel row vanishes
    assert 3 not in data.live


def test_trivial_conormal():
    with pytest.raises(TrivialConormalError):
        trop_conormal(segment(3), 3)
    with pytest.raises(TrivialConormalError):
        critical_valuations(ToricEmbedding(IntegerMatrix([[1, 1], [0, 1]])))


def test_multidegree_values():
    assert multidegrees(twisted_cubic(), 2) == [3, 3]
    assert multidegrees(twisted_cubic(), 1) == [4, 3, 0]
    d = multidegrees(hexagon(), 1)
    assert d[0] == 12
    assert multidegrees(hexagon(), 2)[0] == 6


@pytest.mark.parametrize("k,i", [(1, 0), (1, 1), (2, 0), (2, 1)])
def test_general_route_agrees(k, i):
    fast = multidegrees(twisted_cubic(), k)
    for seed in range(3):
        assert multidegree_general(twisted_cubic(), k, i, seed=seed) == fast[i]


def test_report_fields():
    r = polar_report(twisted_cubic(), 1)
    assert r.polar_degrees == [3, 4] and r.gdd == 7 and r.degree == 3
    assert r.defect == 0 and r.codim == 1 and r.dual_degree == 4
    d = r.as_dict()
    assert set(d) >= {"k", "m_k", "multidegrees", "polar_degrees", "gdd", "dual", "globally_osculating", "warnings", "seed"}


def test_report_defect():
    r = report_from_multidegrees(1, 2, 2, [0, 5, 7], True, True)
    assert r.polar_degrees == [7, 5, 0] and r.defect == 1 and r.dual_degree == 5 and r.codim == 2


def test_unverified_osculation_warns():
    E = ToricEmbedding(CUSP_CURVE)
    with pytest.warns(UserWarning, match="global osculation hypothesis not verified"):
        r = polar_report(E, 1)
    assert r.gdd is None and r.polar_sum == 9 and r.warnings == [OSCULATION_WARNING]


def test_nongeneric_exhaustion(monkeypatch):
    import osculate.degree_pipeline as dp

    monkeypatch.setattr(dp, "displacement", lambda seed, attempt, n: [0] * n)
    with pytest.raises(NonGenericError):
        multidegrees(twisted_cubic(), 2)


def test_zu_constructions():
    Z = trop_Zu([3, 5, 7, 9])
    assert Z.ambient == 8 and Z.dim == 4
    assert Z.check_balancing(sample=100) == []
    L = trop_Zu_lines([0, 0, 0, 0])
    assert len(L.cones) == 81
    with pytest.raises(ValueError):
        trop_Zu([1, 0, 2, 3])


def test_critical_valuations_total():
    E = ToricEmbedding(CUSP_CURVE)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        polar_sum = polar_report(E, 1).polar_sum
    pts = critical_valuations(E)
    assert sum(w for *_, w in pts) == polar_sum == 9
    pts = critical_valuations(E, nu=(0, 2, 3, 4))
    assert sum(w for *_, w in pts) == 9
    assert any(tuple(x) == (0, 2, 3, 4) for x, _, _ in pts)


def test_fallback_matches_compiled():
    code = (
        "from osculate._kernels import HAVE_NUMBA; from osculate import ToricEmbedding, multidegrees;"
        "E = ToricEmbedding.from_exponents([(1,0),(2,0),(0,1),(1,1),(2,1),(0,2),(1,2)]);"
        "print(HAVE_NUMBA, multidegrees(E, 1), multidegrees(E, 2))"
    )
    env = dict(os.environ, OSCULATE_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout
    assert out.strip() == f"False {multidegrees(hexagon(), 1)} {multidegrees(hexagon(), 2)}"
