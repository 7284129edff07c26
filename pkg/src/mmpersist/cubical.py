"""Filtered cubical complexes generated by black pixels.

Every black pixel is a closed unit square; its four edges and four corners
exist from the moment the pixel does, so an edge or vertex enters at the
minimum entry time of its incident pixels.  Black pixels touching only at a
corner are therefore connected (8-adjacency for black, 4 for white).

Lattice cells of a ``width x height`` image are numbered canonically:

* vertex ``(x, y)`` for ``0 <= x <= width``, ``0 <= y <= height``:
  ``y * (width + 1) + x``
* horizontal edge ``(x, y)-(x+1, y)``: ``NV + y * width + x``
* vertical edge ``(x, y)-(x, y+1)``: ``NV + NH + y * (width + 1) + x``
* square of pixel ``(x, y)``: ``NV + NH + NVE + y * width + x``

Cells are ordered by (value, dimension, lattice id); since lattice ids are
grouped by dimension, this is simply (value, lattice id).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .filtration import NEVER, EntryTimeGrid
from .image import BinaryImage

__all__ = ["Lattice", "FilteredCubicalComplex", "build_complex", "betti_oracle", "cell_counts"]


@dataclass(frozen=True)
class Lattice:
    width: int
    height: int

    @property
    def n_vertices(self) -> int:
        return (self.width + 1) * (self.height + 1)

    @property
    def n_hedges(self) -> int:
        return self.width * (self.height + 1)

    @property
    def n_vedges(self) -> int:
        return (self.width + 1) * self.height

    @property
    def n_squares(self) -> int:
        return self.width * self.height

    @property
    def hedge_base(self) -> int:
        return self.n_vertices

    @property
    def vedge_base(self) -> int:
        return self.n_vertices + self.n_hedges

    @property
    def square_base(self) -> int:
        return self.vedge_base + self.n_vedges

    @property
    def n_cells(self) -> int:
        return self.square_base + self.n_squares

    def dims(self) -> np.ndarray:
        d = np.zeros(self.n_cells, dtype=np.int8)
        d[self.hedge_base:self.square_base] = 1
        d[self.square_base:] = 2
        return d

    def cell_values(self, times: np.ndarray) -> np.ndarray:
        """Entry value of every lattice cell (``NEVER`` if absent), by lattice id."""
        h, w = self.height, self.width
        p = np.full((h + 2, w + 2), NEVER, dtype=np.int64)
        p[1:h + 1, 1:w + 1] = times
        verts = np.minimum(
            np.minimum(p[0:h + 1, 0:w + 1], p[0:h + 1, 1:w + 2]),
            np.minimum(p[1:h + 2, 0:w + 1], p[1:h + 2, 1:w + 2]),
        )
        hedges = np.minimum(p[0:h + 1, 1:w + 1], p[1:h + 2, 1:w + 1])
        vedges = np.minimum(p[1:h + 1, 0:w + 1], p[1:h + 1, 1:w + 2])
        return np.concatenate([verts.ravel(), hedges.ravel(), vedges.ravel(), times.ravel()])

    def faces(self) -> np.ndarray:
        """``(n_cells, 4)`` lattice ids of each cell's facets, padded with -1."""
        w, h = self.width, self.height
        out = np.full((self.n_cells, 4), -1, dtype=np.int64)

        y, x = np.divmod(np.arange(self.n_hedges), w)
        v = y * (w + 1) + x
        out[self.hedge_base:self.vedge_base, 0] = v
        out[self.hedge_base:self.vedge_base, 1] = v + 1

        y, x = np.divmod(np.arange(self.n_vedges), w + 1)
        v = y * (w + 1) + x
        out[self.vedge_base:self.square_base, 0] = v
        out[self.vedge_base:self.square_base, 1] = v + (w + 1)

        y, x = np.divmod(np.arange(self.n_squares), w)
        out[self.square_base:, 0] = self.hedge_base + y * w + x
        out[self.square_base:, 1] = self.hedge_base + (y + 1) * w + x
        out[self.square_base:, 2] = self.vedge_base + y * (w + 1) + x
        out[self.square_base:, 3] = self.vedge_base + y * (w + 1) + x + 1
        return out


@dataclass(frozen=True, eq=False)
class FilteredCubicalComplex:
    """Cells in filtration order.

    ``dims``, ``values`` and ``lattice_ids`` are parallel arrays; ``faces``
    holds, per cell, the positions (in this ordering) of its facets padded
    with -1.  Positions of absent lattice cells are -1 in ``position``.
    """

    lattice: Lattice
    dims: np.ndarray
    values: np.ndarray
    lattice_ids: np.ndarray
    faces: np.ndarray
    position: np.ndarray

    def __len__(self):
        return len(self.values)

    def boundary(self, i: int) -> list[int]:
        return [int(j) for j in self.faces[i] if j >= 0]

    def counts(self) -> tuple[int, int, int]:
        """Number of vertices, edges and squares."""
        c = np.bincount(self.dims, minlength=3)
        return int(c[0]), int(c[1]), int(c[2])

    def check(self) -> None:
        """Assert the ordering invariants; raises MalformedComplex."""
        from .errors import MalformedComplex

        arity = (self.faces >= 0).sum(axis=1)
        if np.any(arity != np.array([0, 2, 4])[self.dims]):
            raise MalformedComplex("cell with the wrong number of facets")
        rows, cols = np.nonzero(self.faces >= 0)
        facet = self.faces[rows, cols]
        if np.any(facet >= rows):
            raise MalformedComplex("a facet does not precede its coface")
        if np.any(self.values[facet] > self.values[rows]):
            raise MalformedComplex("a facet enters after its coface")
        if np.any(self.dims[facet] != self.dims[rows] - 1):
            raise MalformedComplex("facet of the wrong dimension")

    def dump(self) -> str:
        """One line per cell: ``dim value boundary-positions``."""
        lines = []
        for i in range(len(self)):
            faces = " ".join(str(j) for j in self.boundary(i))
            lines.append(f"{self.dims[i]} {self.values[i]} {faces}".rstrip())
        return "\n".join(lines) + ("\n" if lines else "")


def build_complex(grid: EntryTimeGrid) -> FilteredCubicalComplex:
    """Cubical complex of the closed squares of all pixels with finite entry time."""
    lat = Lattice(grid.width, grid.height)
    values = lat.cell_values(grid.times)
    present = np.flatnonzero(values != NEVER)
    order = present[np.argsort(values[present], kind="stable")]

    position = np.full(lat.n_cells, -1, dtype=np.int64)
    position[order] = np.arange(len(order))
    lattice_faces = lat.faces()[order]
    faces = np.where(lattice_faces >= 0, position[np.maximum(lattice_faces, 0)], -1)
    return FilteredCubicalComplex(
        lattice=lat,
        dims=lat.dims()[order],
        values=values[order],
        lattice_ids=order,
        faces=faces,
        position=position,
    )


def cell_counts(b: BinaryImage) -> tuple[int, int, int]:
    """``(V, E, F)`` of the complex spanned by the black pixels of ``b``."""
    verts, edges, squares = _cells_of(b)
    return len(verts), len(edges), len(squares)


def _cells_of(b: BinaryImage):
    verts, edges = set(), set()
    squares = [(int(x), int(y)) for y, x in np.argwhere(np.asarray(b.pixels) == 0)]
    for x, y in squares:
        corners = ((x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1))
        verts.update(corners)
        edges.update((
            ((x, y), (x + 1, y)),
            ((x, y + 1), (x + 1, y + 1)),
            ((x, y), (x, y + 1)),
            ((x + 1, y), (x + 1, y + 1)),
        ))
    return verts, edges, squares


def betti_oracle(b: BinaryImage) -> tuple[int, int]:
    """``(beta_0, beta_1)`` of the black set, by union-find and Euler characteristic.

    Deliberately independent of the persistence code: components come from a
    union-find over the complex's 1-skeleton and
    ``beta_1 = beta_0 - (V - E + F)`` because a planar 2-complex has no
    second homology.
    """
    verts, edges, squares = _cells_of(b)
    parent = {v: v for v in verts}

    def find(v):
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    components = len(verts)
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            components -= 1
    euler = len(verts) - len(edges) + len(squares)
    return components, components - euler
