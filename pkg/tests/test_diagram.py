import itertools
import math
import random

import pytest

from conftest import GOLDEN, brute_bottleneck, witness_cost
from mmpersist.diagram import (
    DIAGONAL,
    bottleneck,
    bottleneck_distance,
    death_histogram,
    normalize,
    parse_pd,
    read_pd,
    serialize_pd,
    write_pd,
)
from mmpersist.errors import DivisorTooSmall, MalformedInput, ScaleMismatch
from mmpersist.persistence import INFINITE, PersistenceDiagram

WIDTH_PD = PersistenceDiagram(tuple((1, 0, d) for d in (8, 14, 22, 28, 41, 61)))


def pd1(*pts, scale=1):
    return PersistenceDiagram(tuple((1, b, d) for b, d in pts), scale)


def random_pd(rng, n, essential=0.0):
    pts = []
    for _ in range(n):
        b = rng.randint(0, 8)
        d = INFINITE if rng.random() < essential else b + rng.randint(1, 8)
        pts.append((b, d))
    return pd1(*pts)


def test_fixed_distances():
    assert bottleneck_distance(pd1((0, 1)), pd1(), 1) == 0.5
    assert bottleneck_distance(pd1((0, 2)), pd1((0, 4)), 1) == 2.0
    assert bottleneck_distance(pd1(), pd1(), 1) == 0
    assert bottleneck_distance(WIDTH_PD, WIDTH_PD, 1) == 0


def test_essential_points():
    a, b = pd1((0, INFINITE), (1, 2)), pd1((3, INFINITE))
    assert bottleneck_distance(a, b, 1) == 3
    assert bottleneck_distance(a, pd1((1, 2)), 1) == INFINITE


def test_matches_brute_force_with_essential_points():
    rng = random.Random(3)
    for _ in range(150):
        a, b = random_pd(rng, rng.randint(0, 5), 0.2), random_pd(rng, rng.randint(0, 5), 0.2)
        res = bottleneck(a, b, 1)
        assert res.distance == brute_bottleneck(a.in_dim(1), b.in_dim(1))
        if math.isfinite(res.distance):
            assert witness_cost(a.in_dim(1), b.in_dim(1), res.witness) == res.distance


def _lexmin_assignment(a, b, eps):
    """Smallest assignment of a's points (b indices ascending, diagonal last) within eps."""
    choices = list(range(len(b))) + [DIAGONAL]
    key = lambda j: len(b) if j == DIAGONAL else j
    for combo in sorted(itertools.product(choices, repeat=len(a)),
                        key=lambda c: [key(j) for j in c]):
        used = [j for j in combo if j != DIAGONAL]
        if len(set(used)) != len(used):
            continue
        pairs = list(enumerate(combo)) + [(DIAGONAL, j) for j in range(len(b)) if j not in used]
        if witness_cost(a, b, pairs) <= eps:
            return list(combo)
    return None


def test_witness_is_lexicographically_smallest():
    rng = random.Random(8)
    for _ in range(150):
        a, b = random_pd(rng, rng.randint(0, 4)), random_pd(rng, rng.randint(0, 4))
        res = bottleneck(a, b, 1)
        A, B = a.in_dim(1), b.in_dim(1)
        got = [j for i, j in res.witness if i != DIAGONAL]
        assert [i for i, _ in res.witness[:len(A)]] == list(range(len(A)))
        assert got == _lexmin_assignment(A, B, res.distance)


def test_metric_axioms():
    rng = random.Random(4)
    for _ in range(100):
        a, b, c = (random_pd(rng, rng.randint(0, 5)) for _ in range(3))
        ab = bottleneck_distance(a, b, 1)
        assert ab == bottleneck_distance(b, a, 1)
        assert bottleneck_distance(a, a, 1) == 0
        assert ab <= bottleneck_distance(a, c, 1) + bottleneck_distance(c, b, 1) + 1e-12


def test_normalization_scales_distance():
    rng = random.Random(6)
    for _ in range(50):
        a, b = random_pd(rng, 4), random_pd(rng, 4)
        d = bottleneck_distance(a, b, 1)
        nd = bottleneck_distance(normalize(a, 20), normalize(b, 20), 1)
        assert abs(nd - d / 20) < 1e-12


def test_only_requested_dimension_counts():
    a = PersistenceDiagram(((0, 0, 9), (1, 0, 1)))
    assert bottleneck_distance(a, pd1((0, 1)), 1) == 0
    assert bottleneck_distance(a, pd1((0, 1)), 0) == 4.5


def test_normalize():
    pd = PersistenceDiagram(((0, 0, INFINITE), (1, 2, 5), (1, 10, INFINITE)))
    n = normalize(pd, 10)
    assert n.intervals == ((0, 0.0, 1.0), (1, 0.2, 0.5)) and n.scale == 10
    with pytest.raises(DivisorTooSmall):
        normalize(pd, 4)
    with pytest.raises(ScaleMismatch):
        bottleneck_distance(n, pd, 1)


def test_histogram_of_width_diagram():
    h = death_histogram(WIDTH_PD, 1, bin_width=10)
    assert h.counts == [1, 1, 2, 0, 1, 0, 1]
    assert [e for e, _ in h.bins] == [0, 10, 20, 30, 40, 50, 60]
    assert death_histogram(PersistenceDiagram(), 1).bins == ()
    ess = death_histogram(pd1((0, INFINITE), (0, 3)), 1)
    assert ess.overflow == 1 and ess.counts == [1]
    with pytest.raises(MalformedInput):
        death_histogram(WIDTH_PD, 1, bin_width=0)


def test_serialization(tmp_path):
    golden = (GOLDEN / "nested_pd.json").read_bytes()
    assert serialize_pd(parse_pd(golden)) == golden
    assert serialize_pd(PersistenceDiagram()) == b'{\n  "scale": 1,\n  "intervals": []\n}\n'
    n = normalize(read_pd(GOLDEN / "nested_pd.json"), 5)
    write_pd(n, tmp_path / "n.json")
    assert read_pd(tmp_path / "n.json") == n


@pytest.mark.parametrize("doc", [
    b"not json",
    b"[]",
    b'{"intervals": [{"dim": 2, "birth": 0, "death": 1}]}',
    b'{"intervals": [{"dim": 0, "birth": "inf", "death": "inf"}]}',
    b'{"intervals": [{"dim": 0, "birth": 3, "death": 1}]}',
    b'{"intervals": [{"dim": 0, "birth": 0}]}',
])
def test_parse_errors(doc):
    with pytest.raises(MalformedInput):
        parse_pd(doc)
