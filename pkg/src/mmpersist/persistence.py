"""Persistent homology of filtered cubical complexes over the field F2.

Two interchangeable engines compute the same pairing of cells:

``reduction``
    The textbook left-to-right column reduction of the boundary matrix, with
    optional clearing.  Quadratic in the worst case; used as the reference.
``union-find``
    Dimension 0 by the elder rule on the 1-skeleton, and dimension 1 by the
    elder rule on the dual graph (pixels plus the unbounded outside) swept in
    reverse filtration order.  In the plane this reproduces the reduction's
    pairs exactly and runs in near-linear time, so it is the default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .cubical import FilteredCubicalComplex
from .errors import MalformedComplex, MalformedInput

__all__ = [
    "INFINITE",
    "PersistenceDiagram",
    "compute_persistence",
    "reduce_boundary_matrix",
    "persistence_pairs",
    "betti_at",
]

INFINITE = math.inf


def _sort_key(iv):
    return iv


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of ``(dim, birth, death)`` intervals with ``birth < death``.

    ``death`` may be :data:`INFINITE`.  ``scale`` is the divisor applied by
    normalisation (1 for raw diagrams).  Intervals are kept in canonical
    ``(dim, birth, death)`` order, so equality is multiset equality.
    """

    intervals: tuple = ()
    scale: float = 1

    def __post_init__(self):
        cleaned = []
        for iv in self.intervals:
            try:
                dim, birth, death = iv
            except (TypeError, ValueError):
                raise MalformedInput(f"interval {iv!r} is not a (dim, birth, death) triple") from None
            if dim not in (0, 1):
                raise MalformedInput(f"interval dimension must be 0 or 1, got {dim}")
            if not birth < death:
                raise MalformedInput(f"interval ({birth}, {death}) does not have birth < death")
            if math.isinf(birth) or math.isnan(birth) or math.isnan(death):
                raise MalformedInput(f"invalid birth/death in ({birth}, {death})")
            cleaned.append((int(dim), birth, death))
        cleaned.sort(key=_sort_key)
        object.__setattr__(self, "intervals", tuple(cleaned))
        if not self.scale > 0:
            raise MalformedInput(f"scale must be positive, got {self.scale}")

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def in_dim(self, dim: int) -> list[tuple]:
        """``(birth, death)`` pairs of one dimension, in canonical order."""
        return [(b, d) for q, b, d in self.intervals if q == dim]

    def restrict(self, dims: Iterable[int]) -> "PersistenceDiagram":
        dims = set(dims)
        return PersistenceDiagram(tuple(iv for iv in self.intervals if iv[0] in dims), self.scale)

    def essential(self, dim: int | None = None) -> list[tuple]:
        return [iv for iv in self.intervals
                if math.isinf(iv[2]) and (dim is None or iv[0] == dim)]

    def max_finite_value(self):
        vals = [iv[1] for iv in self.intervals]
        vals += [iv[2] for iv in self.intervals if not math.isinf(iv[2])]
        return max(vals) if vals else 0

    def close_essential(self, level, dims: Iterable[int] = (1,)) -> "PersistenceDiagram":
        """Give infinite intervals of ``dims`` the finite death ``level``.

        Used for filtrations that end at the input image rather than at an
        all-black cap; intervals born at ``level`` itself vanish.
        """
        dims = set(dims)
        out = []
        for q, b, d in self.intervals:
            if math.isinf(d) and q in dims:
                if b >= level:
                    continue
                d = level
            out.append((q, b, d))
        return PersistenceDiagram(tuple(out), self.scale)


def reduce_boundary_matrix(cx: FilteredCubicalComplex, clearing: bool = False):
    """Standard column reduction over F2.

    Returns ``(pairs, essential)`` where ``pairs`` lists ``(creator, killer)``
    cell positions and ``essential`` the creators never killed.  With
    ``clearing`` the columns are reduced from the top dimension down and a
    column known to be a creator is skipped.
    """
    n = len(cx)
    low_owner = {}
    reduced = [None] * n
    pivot_of = {}
    order = range(n)
    if clearing:
        order = sorted(order, key=lambda j: (-int(cx.dims[j]), j))
    cleared = set()
    for j in order:
        if j in cleared:
            reduced[j] = set()
            continue
        col = set(cx.boundary(j))
        while col:
            low = max(col)
            owner = low_owner.get(low)
            if owner is None:
                break
            col ^= reduced[owner]
        reduced[j] = col
        if col:
            low = max(col)
            low_owner[low] = j
            pivot_of[j] = low
            if clearing:
                cleared.add(low)
    pairs = sorted((low, j) for j, low in pivot_of.items())
    killed = set(low_owner)
    essential = [j for j in range(n) if not reduced[j] and j not in killed]
    return pairs, essential


class _DisjointSets:
    """Union-find whose roots remember the elder (birth key) of their set."""

    def __init__(self, size):
        self.parent = list(range(size))
        self.birth = [None] * size

    def find(self, i):
        parent = self.parent
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i


def _pairs_dim0(cx: FilteredCubicalComplex):
    dims = cx.dims.tolist()
    faces = cx.faces[:, :2].tolist()
    ds = _DisjointSets(len(dims))
    pairs = []
    for j, d in enumerate(dims):
        if d == 0:
            ds.birth[j] = j
        elif d == 1:
            ru, rv = ds.find(faces[j][0]), ds.find(faces[j][1])
            if ru == rv:
                continue
            if ds.birth[ru] > ds.birth[rv]:
                ru, rv = rv, ru
            # rv holds the younger component, which dies here
            pairs.append((ds.birth[rv], j))
            ds.parent[rv] = ru
    killed = {p[0] for p in pairs}
    essential = [j for j, d in enumerate(dims) if d == 0 and j not in killed]
    return pairs, essential


def _pairs_dim1(cx: FilteredCubicalComplex):
    """Edge/square pairs via the dual graph swept in reverse order.

    Absent lattice cells are appended after the finite ones (edges before
    squares, then by lattice id), which is exactly the order a reduction of
    the full lattice would see.  A creator edge killed by an absent square is
    essential in the finite complex.
    """
    lat = cx.lattice
    w, h = lat.width, lat.height
    n = len(cx)
    lo = lat.hedge_base
    ids = np.arange(lo, lat.n_cells)
    pos = cx.position[lo:]
    absent = pos < 0
    key = pos.copy()
    key[absent] = n + np.arange(int(absent.sum()))
    sweep = ids[np.argsort(-key, kind="stable")]

    outside = lat.n_squares
    ds = _DisjointSets(lat.n_squares + 1)
    big = n + lat.n_cells + 1
    ds.birth[outside] = big
    square_base, vedge_base = lat.square_base, lat.vedge_base
    key_of = dict(zip(ids.tolist(), key.tolist()))

    pairs = []
    for cid in sweep.tolist():
        if cid >= square_base:
            ds.birth[cid - square_base] = key_of[cid]
            continue
        if cid >= vedge_base:
            y, x = divmod(cid - vedge_base, w + 1)
            a = y * w + x - 1 if x > 0 else outside
            b = y * w + x if x < w else outside
        else:
            y, x = divmod(cid - lo, w)
            a = (y - 1) * w + x if y > 0 else outside
            b = y * w + x if y < h else outside
        ra, rb = ds.find(a), ds.find(b)
        if ra == rb:
            continue
        if ds.birth[ra] < ds.birth[rb]:
            ra, rb = rb, ra
        # rb was born later in the reverse sweep, i.e. its square enters first
        pairs.append((key_of[cid], ds.birth[rb]))
        ds.parent[rb] = ra
    return pairs, n


def persistence_pairs(cx: FilteredCubicalComplex, method: str = "union-find"):
    """``(pairs, essential)`` in cell positions.

    For the union-find engine, a dimension-1 pair whose killer is an absent
    square appears in ``essential`` instead.
    """
    if method == "reduction":
        return reduce_boundary_matrix(cx)
    if method == "reduction-clearing":
        return reduce_boundary_matrix(cx, clearing=True)
    if method != "union-find":
        raise MalformedInput(f"unknown persistence method {method!r}")
    pairs0, essential0 = _pairs_dim0(cx)
    pairs1, n = _pairs_dim1(cx)
    pairs = list(pairs0)
    essential = list(essential0)
    for e, s in pairs1:
        if e >= n:
            continue
        if s >= n:
            essential.append(e)
        else:
            pairs.append((e, s))
    return sorted(pairs), sorted(essential)


def compute_persistence(cx: FilteredCubicalComplex, method: str = "union-find",
                        validate: bool = False) -> PersistenceDiagram:
    """Persistence diagram (dimensions 0 and 1) of a filtered cubical complex.

    Zero-length intervals are dropped.  ``method`` selects the engine; all
    engines give the same diagram.
    """
    if validate:
        cx.check()
    if len(cx) == 0:
        return PersistenceDiagram()
    pairs, essential = persistence_pairs(cx, method)
    values = cx.values.tolist()
    dims = cx.dims.tolist()
    intervals = []
    for creator, killer in pairs:
        b, d = values[creator], values[killer]
        if b > d:
            raise MalformedComplex("cell order is not a filtration order")
        if b < d:
            intervals.append((dims[creator], b, d))
    for creator in essential:
        if dims[creator] == 2:
            raise MalformedComplex("a planar cubical complex cannot carry 2-cycles")
        intervals.append((dims[creator], values[creator], INFINITE))
    return PersistenceDiagram(tuple(intervals))


def betti_at(pd: PersistenceDiagram, t, dim: int) -> int:
    """Number of ``dim``-intervals alive at ``t`` (``birth <= t < death``)."""
    return sum(1 for q, b, d in pd.intervals if q == dim and b <= t < d)
