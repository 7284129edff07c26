import math

import numpy as np
import pytest

from conftest import NESTED_PD, GOLDEN, random_nested_grid
from mmpersist.cubical import betti_oracle, build_complex
from mmpersist.errors import MalformedInput
from mmpersist.filtration import NEVER, EntryTimeGrid, from_nested_sequence
from mmpersist.persistence import (
    INFINITE,
    PersistenceDiagram,
    betti_at,
    compute_persistence,
    reduce_boundary_matrix,
)

METHODS = ("union-find", "reduction", "reduction-clearing")


@pytest.mark.parametrize("method", METHODS)
def test_nested_sequence_diagram(nested_images, method):
    grid = from_nested_sequence(nested_images, [1, 2, 3, 4])
    pd = compute_persistence(build_complex(grid), method, validate=True)
    assert {q: pd.in_dim(q) for q in (0, 1)} == NESTED_PD


def test_golden_grid_round_trip():
    grid = EntryTimeGrid.read(GOLDEN / "nested_grid.csv")
    pd = compute_persistence(build_complex(grid))
    assert {q: pd.in_dim(q) for q in (0, 1)} == NESTED_PD


def test_empty_and_single():
    empty = build_complex(EntryTimeGrid([[NEVER]], 0))
    assert compute_persistence(empty) == PersistenceDiagram()
    one = compute_persistence(build_complex(EntryTimeGrid([[2]], 2)))
    assert one.intervals == ((0, 2, INFINITE),)


def test_ring_closed_by_later_pixel():
    grid = EntryTimeGrid([[0, 0, 0], [0, 3, 0], [0, 0, 0]], 3)
    pd = compute_persistence(build_complex(grid))
    assert pd.intervals == ((0, 0, INFINITE), (1, 0, 3))


def test_elder_rule_merge():
    # two components born at 0 and 2 merge at 5: the younger one dies
    grid = EntryTimeGrid([[0, 5, 2]], 5)
    assert compute_persistence(build_complex(grid)).in_dim(0) == [(0, INFINITE), (2, 5)]


def test_engines_agree_on_random_grids():
    rng = np.random.default_rng(99)
    for _ in range(300):
        cx = build_complex(random_nested_grid(rng, max_side=8))
        pds = [compute_persistence(cx, m) for m in METHODS]
        assert pds[0] == pds[1] == pds[2]


def test_clearing_does_not_change_pairs():
    rng = np.random.default_rng(5)
    cx = build_complex(random_nested_grid(rng, max_side=9))
    assert reduce_boundary_matrix(cx) == reduce_boundary_matrix(cx, clearing=True)


def test_betti_at_matches_oracle():
    rng = np.random.default_rng(17)
    for _ in range(100):
        grid = random_nested_grid(rng)
        pd = compute_persistence(build_complex(grid))
        for t in range(grid.max_level + 1):
            assert (betti_at(pd, t, 0), betti_at(pd, t, 1)) == betti_oracle(grid.level_set(t))


def test_unknown_method():
    with pytest.raises(MalformedInput):
        compute_persistence(build_complex(EntryTimeGrid([[0]], 0)), "magic")


def test_diagram_validation_and_order():
    pd = PersistenceDiagram(((1, 2, 3), (0, 1, INFINITE), (0, 0, 4)))
    assert pd.intervals == ((0, 0, 4), (0, 1, INFINITE), (1, 2, 3))
    for bad in [((2, 0, 1),), ((0, 3, 3),), ((0, INFINITE, INFINITE),), ((0, 1),)]:
        with pytest.raises(MalformedInput):
            PersistenceDiagram(bad)
    with pytest.raises(MalformedInput):
        PersistenceDiagram((), scale=0)


def test_close_essential():
    pd = PersistenceDiagram(((0, 0, INFINITE), (1, 1, INFINITE), (1, 4, INFINITE), (1, 0, 2)))
    closed = pd.close_essential(4)
    assert closed.intervals == ((0, 0, INFINITE), (1, 0, 2), (1, 1, 4))
    assert closed.essential() == [(0, 0, math.inf)]
    assert pd.max_finite_value() == 4
