"""Entry-time grids: the common representation of every image filtration.

A filtration of binary images ``X_0 ⊆ X_1 ⊆ ...`` (black sets growing) is
stored as the first filtration value at which each pixel turns black.  The
builders here cover morphological filtrations of a binary image, the
sublevel-set filtration of a grayscale image and arbitrary nested sequences.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import morphology as mm
from .errors import (
    DimensionMismatch,
    EmptyImage,
    InvalidThresholds,
    LengthMismatch,
    MalformedInput,
    NonMonotoneSequence,
    NonNestedSEs,
)
from .image import BinaryImage, GrayscaleImage, threshold
from .morphology import StructuringElement, square_se

__all__ = [
    "NEVER",
    "EntryTimeGrid",
    "FilterKind",
    "FiltrationSpec",
    "from_nested_sequence",
    "mm_sequence",
    "mm_filtration",
    "sublevel_filtration",
    "build_filtration",
    "ArrowCheck",
    "BifiltrationReport",
    "verify_bifiltration_square",
]

#: Entry time of a pixel that is white at every level.
NEVER = np.iinfo(np.int64).max


@dataclass(frozen=True, eq=False)
class EntryTimeGrid:
    """Per-pixel first filtration value at which the pixel is black.

    ``times`` is a ``(height, width)`` int64 array using :data:`NEVER` for
    pixels that never turn black.  ``origin_offset`` is the level at which
    the unmodified input image sits.
    """

    times: np.ndarray
    max_level: int
    origin_offset: int = 0

    def __post_init__(self):
        times = np.array(self.times, dtype=np.int64, copy=True)
        if times.ndim != 2 or times.size == 0:
            raise EmptyImage("entry-time grid must be a nonempty 2D array")
        finite = times[times != NEVER]
        if finite.size and finite.min() < 0:
            raise MalformedInput("entry times must be nonnegative")
        if finite.size and finite.max() > self.max_level:
            raise MalformedInput(f"entry time {finite.max()} exceeds max_level {self.max_level}")
        times.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "max_level", int(self.max_level))
        object.__setattr__(self, "origin_offset", int(self.origin_offset))

    @property
    def height(self) -> int:
        return self.times.shape[0]

    @property
    def width(self) -> int:
        return self.times.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.times.shape

    def level_mask(self, t: int) -> np.ndarray:
        """Boolean mask of pixels black at level ``t``."""
        return self.times <= t

    def level_set(self, t: int) -> BinaryImage:
        return BinaryImage.from_black_mask(self.level_mask(t))

    def levels(self) -> list[int]:
        """Distinct finite entry times, ascending."""
        return sorted(set(np.unique(self.times[self.times != NEVER]).tolist()))

    def __eq__(self, other):
        if not isinstance(other, EntryTimeGrid):
            return NotImplemented
        return (
            self.max_level == other.max_level
            and self.origin_offset == other.origin_offset
            and np.array_equal(self.times, other.times)
        )

    def to_csv(self) -> bytes:
        header = f"# max_level={self.max_level} origin_offset={self.origin_offset}\n"
        rows = (
            ",".join("inf" if v == NEVER else str(v) for v in row)
            for row in self.times.tolist()
        )
        return (header + "".join(r + "\n" for r in rows)).encode("ascii")

    @classmethod
    def from_csv(cls, data: bytes) -> "EntryTimeGrid":
        """Parse a grid written by :meth:`to_csv` (the comment header is optional)."""
        text = data.decode("ascii", errors="strict")
        max_level = origin = None
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for item in line[1:].split():
                    key, _, value = item.partition("=")
                    if key == "max_level":
                        max_level = int(value)
                    elif key == "origin_offset":
                        origin = int(value)
                continue
            try:
                rows.append([NEVER if c.strip() == "inf" else int(c) for c in line.split(",")])
            except ValueError:
                raise MalformedInput(f"bad entry-time row {line!r}") from None
        if not rows:
            raise EmptyImage("entry-time CSV has no rows")
        if any(len(r) != len(rows[0]) for r in rows):
            raise MalformedInput("entry-time rows have unequal lengths")
        times = np.array(rows, dtype=np.int64)
        if max_level is None:
            finite = times[times != NEVER]
            max_level = int(finite.max()) if finite.size else 0
        return cls(times, max_level, origin or 0)

    def write(self, path) -> None:
        Path(path).write_bytes(self.to_csv())

    @classmethod
    def read(cls, path) -> "EntryTimeGrid":
        return cls.from_csv(Path(path).read_bytes())


class FilterKind(enum.Enum):
    EROSION = "erosion"
    DILATION = "dilation"
    OPENING = "opening"
    CLOSING = "closing"
    COMBINED_ED = "combined-ed"
    COMBINED_OC = "combined-oc"
    SUBLEVEL = "sublevel"
    EXPLICIT = "explicit"

    @property
    def is_morphological(self) -> bool:
        return self not in (FilterKind.SUBLEVEL, FilterKind.EXPLICIT)


_CAP_BY_DEFAULT = {
    FilterKind.EROSION: True,
    FilterKind.OPENING: True,
    FilterKind.COMBINED_ED: True,
    FilterKind.COMBINED_OC: True,
    FilterKind.DILATION: False,
    FilterKind.CLOSING: False,
}


@dataclass(frozen=True)
class FiltrationSpec:
    """Which morphological filtration to build and with which SEs.

    ``ses`` holds the nested family ``B_1 ⊆ ... ⊆ B_n``.  ``cap_all_black``
    appends a totally black level after the last one; ``None`` picks the
    default for the kind (on for erosion, opening and combined filtrations,
    off for dilation and closing).
    """

    kind: FilterKind
    ses: tuple = ()
    cap_all_black: bool | None = None
    se_indices: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", FilterKind(self.kind))
        object.__setattr__(self, "ses", tuple(self.ses))
        if self.se_indices:
            idx = list(self.se_indices)
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise NonNestedSEs(f"SE indices must be strictly increasing, got {idx}")
        if self.cap_all_black is None and self.kind in _CAP_BY_DEFAULT:
            object.__setattr__(self, "cap_all_black", _CAP_BY_DEFAULT[self.kind])

    @classmethod
    def squares(cls, kind, indices: Sequence[int], cap_all_black: bool | None = None) -> "FiltrationSpec":
        """Spec using the square SEs ``S_i`` for ``i`` in ``indices``."""
        indices = tuple(int(i) for i in indices)
        return cls(kind, tuple(square_se(i) for i in indices), cap_all_black, indices)

    @classmethod
    def square_range(cls, kind, se_max: int, se_min: int = 2,
                     cap_all_black: bool | None = None) -> "FiltrationSpec":
        """Squares ``S_{se_min}, ..., S_{se_max}``; filtration value ``i`` uses the i-th of them."""
        if se_max < se_min:
            raise NonNestedSEs(f"se_max {se_max} is smaller than se_min {se_min}")
        return cls.squares(kind, range(se_min, se_max + 1), cap_all_black)

    @property
    def n(self) -> int:
        return len(self.ses)

    @property
    def top_level(self) -> int:
        """Largest level before the optional cap."""
        if self.kind in (FilterKind.COMBINED_ED, FilterKind.COMBINED_OC):
            return 2 * self.n
        return self.n

    @property
    def normalization_divisor(self) -> int:
        """``n + 1`` for one-sided filtrations, ``2n + 1`` for combined ones."""
        return self.top_level + 1


def _first_violation(inner: np.ndarray, outer: np.ndarray):
    """First (x, y) black in ``inner`` but not in ``outer`` (row-major), or None."""
    bad = np.argwhere(inner & ~outer)
    if bad.size == 0:
        return None
    y, x = bad[0]
    return int(x), int(y)


def from_nested_sequence(images: Sequence[BinaryImage], values: Sequence[int],
                         origin_offset: int | None = None) -> EntryTimeGrid:
    """Entry-time grid of a nested sequence of binary images.

    The black set of ``images[i]`` must be contained in that of
    ``images[i + 1]``; ``values`` are the strictly increasing filtration values
    of the images.  Pixels never black get :data:`NEVER`.
    """
    images = list(images)
    values = [int(v) for v in values]
    if len(images) != len(values):
        raise LengthMismatch(f"{len(images)} images but {len(values)} values")
    if not images:
        raise LengthMismatch("a filtration needs at least one image")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise NonMonotoneSequence(f"filtration values must be strictly increasing, got {values}")
    if values[0] < 0:
        raise MalformedInput("filtration values must be nonnegative")
    shape = images[0].shape
    for img in images[1:]:
        if img.shape != shape:
            raise DimensionMismatch(f"image of shape {img.shape} in a sequence of shape {shape}")

    times = np.full(shape, NEVER, dtype=np.int64)
    prev = None
    for i, (img, v) in enumerate(zip(images, values)):
        black = np.asarray(img.pixels) == 0
        if prev is not None:
            pixel = _first_violation(prev, black)
            if pixel is not None:
                raise NonMonotoneSequence(
                    f"image {i} loses black pixel {pixel} present in image {i - 1}",
                    index=i - 1, pixel=pixel)
        times[black & (times == NEVER)] = v
        prev = black
    return EntryTimeGrid(times, values[-1], values[0] if origin_offset is None else origin_offset)


def _check_nested(ses: Sequence[StructuringElement]):
    if not ses:
        raise NonNestedSEs("a morphological filtration needs at least one SE")
    for i, (a, b) in enumerate(zip(ses, ses[1:])):
        if not a.issubset(b):
            raise NonNestedSEs(f"SE {i + 1} is not contained in SE {i + 2}")


def mm_sequence(f: BinaryImage, spec: FiltrationSpec) -> tuple[list[BinaryImage], list[int], int]:
    """The nested images, their values and the origin offset for ``spec``.

    The optional all-black cap is not included.
    """
    kind = spec.kind
    if not kind.is_morphological:
        raise MalformedInput(f"{kind.value} is not a morphological filtration")
    _check_nested(spec.ses)
    n = spec.n
    ops = {
        FilterKind.EROSION: (mm.erode, None),
        FilterKind.OPENING: (mm.opening, None),
        FilterKind.DILATION: (None, mm.dilate),
        FilterKind.CLOSING: (None, mm.closing),
        FilterKind.COMBINED_ED: (mm.erode, mm.dilate),
        FilterKind.COMBINED_OC: (mm.opening, mm.closing),
    }
    grow, shrink = ops[kind]
    before = [shrink(f, se) for se in reversed(spec.ses)] if shrink else []
    after = [grow(f, se) for se in spec.ses] if grow else []
    images = before + [f] + after
    return images, list(range(len(images))), len(before)


def mm_filtration(f: BinaryImage, spec: FiltrationSpec) -> EntryTimeGrid:
    """Filtration of ``f`` by morphological operators with nested SEs.

    Erosion and opening put ``f`` at level 0 followed by the operator applied
    with ``B_1, ..., B_n``; dilation and closing run the reversed chain
    ``B_n, ..., B_1`` and end with ``f`` at level ``n``; combined filtrations
    chain both sides over levels ``0..2n``.  Nesting is checked pixel by pixel,
    which is where a non-monotone opening/closing family is caught.
    """
    images, values, origin = mm_sequence(f, spec)
    if spec.cap_all_black:
        images.append(BinaryImage(np.zeros(f.shape, dtype=np.int64)))
        values.append(values[-1] + 1)
    return from_nested_sequence(images, values, origin_offset=origin)


def sublevel_filtration(f: GrayscaleImage) -> EntryTimeGrid:
    """Each pixel enters at its own value, i.e. thresholding at every level."""
    return EntryTimeGrid(f.pixels, f.max_value, 0)


def build_filtration(source, spec: FiltrationSpec | FilterKind) -> EntryTimeGrid:
    """Dispatch on the filtration kind."""
    kind = spec.kind if isinstance(spec, FiltrationSpec) else FilterKind(spec)
    if kind is FilterKind.SUBLEVEL:
        return sublevel_filtration(source)
    if kind is FilterKind.EXPLICIT:
        return from_nested_sequence(source, range(1, len(source) + 1))
    return mm_filtration(source, spec)


@dataclass(frozen=True)
class ArrowCheck:
    """One ``source <= target`` relation of a commutative square."""

    name: str
    holds: bool
    first_violation: tuple | None = None


@dataclass(frozen=True)
class BifiltrationReport:
    family: str
    arrows: tuple

    @property
    def ok(self) -> bool:
        return all(a.holds for a in self.arrows)


def _leq_check(name: str, f: GrayscaleImage, g: GrayscaleImage) -> ArrowCheck:
    bad = np.argwhere(f.pixels > g.pixels)
    if bad.size == 0:
        return ArrowCheck(name, True)
    y, x = bad[0]
    return ArrowCheck(name, False, (int(x), int(y)))


def verify_bifiltration_square(f: GrayscaleImage, t1: int, t2: int,
                               b1: StructuringElement, b2: StructuringElement,
                               family: FilterKind | str) -> BifiltrationReport:
    """Check the 2x2 square of thresholded-and-filtered images.

    Horizontal arrows go from threshold ``t2`` to ``t1`` under the same SE.
    Vertical arrows go from ``b2`` up to ``b1`` for erosion and opening and
    from ``b1`` down to ``b2`` for dilation and closing.
    """
    family = FilterKind(family)
    if t1 >= t2:
        raise InvalidThresholds(f"need t1 < t2, got t1={t1}, t2={t2}")
    if not b1.issubset(b2):
        raise NonNestedSEs("B1 must be contained in B2")
    op = {
        FilterKind.EROSION: mm.erode,
        FilterKind.OPENING: mm.opening,
        FilterKind.DILATION: mm.dilate,
        FilterKind.CLOSING: mm.closing,
    }.get(family)
    if op is None:
        raise MalformedInput(f"no bifiltration square for {family.value}")
    lo, hi = threshold(f, t1), threshold(f, t2)
    top_left, top_right = op(hi, b1), op(lo, b1)
    bottom_left, bottom_right = op(hi, b2), op(lo, b2)
    arrows = [
        _leq_check("top: B1,t2 -> B1,t1", top_left, top_right),
        _leq_check("bottom: B2,t2 -> B2,t1", bottom_left, bottom_right),
    ]
    if family in (FilterKind.EROSION, FilterKind.OPENING):
        arrows += [
            _leq_check("left: B2,t2 -> B1,t2", bottom_left, top_left),
            _leq_check("right: B2,t1 -> B1,t1", bottom_right, top_right),
        ]
    else:
        arrows += [
            _leq_check("left: B1,t2 -> B2,t2", top_left, bottom_left),
            _leq_check("right: B1,t1 -> B2,t1", top_right, bottom_right),
        ]
    return BifiltrationReport(family.value, tuple(arrows))
