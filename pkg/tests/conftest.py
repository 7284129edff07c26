import itertools
import math
from pathlib import Path

import numpy as np
import pytest

from mmpersist.filtration import NEVER, EntryTimeGrid
from mmpersist.image import BinaryImage

GOLDEN = Path(__file__).parent / "golden"

# Five-by-five four-step nested sequence: two components and one loop at
# level 1, the loop splits into four small ones at 2, two close at 3, all
# black at 4.
NESTED_ROWS = [
    ["00011", "01011", "00011", "11111", "11110"],
    ["00000", "01010", "00000", "01010", "00000"],
    ["00000", "01000", "00000", "00010", "00000"],
    ["00000"] * 5,
]
NESTED_PD = {
    0: [(1, 2), (1, math.inf)],
    1: [(1, 4), (2, 3), (2, 3), (2, 4)],
}


def rows_image(rows) -> BinaryImage:
    return BinaryImage([[int(c) for c in r] for r in rows])


@pytest.fixture
def nested_images():
    return [rows_image(r) for r in NESTED_ROWS]


def random_nested_grid(rng, max_side=12, max_levels=6) -> EntryTimeGrid:
    """Entry times of a random sequence built by blackening pixels level by level."""
    h, w = (int(v) for v in rng.integers(1, max_side + 1, 2))
    levels = int(rng.integers(1, max_levels + 1))
    times = np.full((h, w), NEVER, dtype=np.int64)
    for t in range(levels):
        fresh = (times == NEVER) & (rng.random((h, w)) < rng.uniform(0.1, 0.6))
        times[fresh] = t
    return EntryTimeGrid(times, levels - 1)


def _cost(p, q):
    if math.isinf(p[1]) and math.isinf(q[1]):
        return abs(p[0] - q[0])
    if math.isinf(p[1]) or math.isinf(q[1]):
        return math.inf
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def brute_bottleneck(a, b):
    """Minimum over every partial matching, by enumeration."""
    best = math.inf
    na, nb = len(a), len(b)
    half = lambda p: (p[1] - p[0]) / 2
    for k in range(min(na, nb) + 1):
        for sa in itertools.combinations(range(na), k):
            rest_a = max((half(a[i]) for i in range(na) if i not in sa), default=0)
            for sb in itertools.permutations(range(nb), k):
                cost = max((_cost(a[i], b[j]) for i, j in zip(sa, sb)), default=0)
                rest_b = max((half(b[j]) for j in range(nb) if j not in sb), default=0)
                best = min(best, max(cost, rest_a, rest_b))
    return best


def witness_cost(a, b, witness, diagonal=-1):
    out = 0.0
    for i, j in witness:
        if i == diagonal:
            c = (b[j][1] - b[j][0]) / 2
        elif j == diagonal:
            c = (a[i][1] - a[i][0]) / 2
        else:
            c = _cost(a[i], b[j])
        out = max(out, c)
    return out
