"""Flat morphology on rectangular image domains.

Erosion and dilation take the min/max over the structuring-element offsets
that land inside the image; no padding value is ever introduced.  Operators
work on grayscale and binary images alike and return the input's type.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import InvalidIndex, MalformedInput
from .image import GrayscaleImage

__all__ = [
    "StructuringElement",
    "square_se",
    "parse_se",
    "erode",
    "dilate",
    "opening",
    "closing",
    "apply_op",
    "erode_reference",
    "dilate_reference",
]


@dataclass(frozen=True)
class StructuringElement:
    """A finite set of integer ``(dx, dy)`` offsets containing the origin."""

    offsets: frozenset

    def __init__(self, offsets: Iterable[tuple[int, int]]):
        items = [tuple(int(c) for c in o) for o in offsets]
        if not items:
            raise MalformedInput("structuring element must be nonempty")
        if any(len(o) != 2 for o in items):
            raise MalformedInput("offsets must be (dx, dy) pairs")
        if len(set(items)) != len(items):
            raise MalformedInput("structuring element has duplicate offsets")
        if (0, 0) not in items:
            raise MalformedInput("structuring element must contain the origin (0, 0)")
        object.__setattr__(self, "offsets", frozenset(items))

    def __len__(self):
        return len(self.offsets)

    def __iter__(self):
        return iter(sorted(self.offsets, key=lambda o: (o[1], o[0])))

    def __le__(self, other: "StructuringElement") -> bool:
        return self.offsets <= other.offsets

    def __lt__(self, other: "StructuringElement") -> bool:
        return self.offsets < other.offsets

    def issubset(self, other: "StructuringElement") -> bool:
        return self.offsets <= other.offsets

    @property
    def bounds(self) -> tuple[int, int, int, int]:
        """``(min_dx, max_dx, min_dy, max_dy)``."""
        xs = [o[0] for o in self.offsets]
        ys = [o[1] for o in self.offsets]
        return min(xs), max(xs), min(ys), max(ys)

    @property
    def is_rectangle(self) -> bool:
        x0, x1, y0, y1 = self.bounds
        return len(self.offsets) == (x1 - x0 + 1) * (y1 - y0 + 1)

    def reflected(self) -> "StructuringElement":
        return StructuringElement((-dx, -dy) for dx, dy in self.offsets)

    def spec_string(self) -> str:
        return ";".join(f"({dx},{dy})" for dx, dy in self)

    def __repr__(self):
        return f"StructuringElement({self.spec_string()})"


@lru_cache(maxsize=None)
def _square_offsets(n: int) -> frozenset:
    if n == 1:
        return frozenset({(0, 0)})
    prev = _square_offsets(n - 1)
    sign = 1 if n % 2 == 0 else -1
    shifts = [(0, 0), (sign, 0), (0, sign), (sign, sign)]
    return frozenset((dx + sx, dy + sy) for dx, dy in prev for sx, sy in shifts)


def square_se(n: int) -> StructuringElement:
    """Square SE ``S_n`` of side ``n``.

    ``S_1`` is the origin; each even step grows the square towards +x/+y and
    each odd step towards -x/-y, so ``S_n`` covers
    ``[-(n-1)//2, n//2]`` on both axes and ``S_n`` is contained in ``S_{n+1}``.
    """
    if int(n) != n or n < 1:
        raise InvalidIndex(f"square SE index must be a positive integer, got {n}")
    return StructuringElement(_square_offsets(int(n)))


_OFFSET = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")


def parse_se(text: str) -> StructuringElement:
    """Parse ``square:N``, ``offsets:(dx,dy);...`` or a bare offset list."""
    text = text.strip()
    if text.startswith("square:"):
        try:
            n = int(text.split(":", 1)[1])
        except ValueError:
            raise MalformedInput(f"bad square SE {text!r}") from None
        return square_se(n)
    if text.startswith("offsets:"):
        text = text.split(":", 1)[1]
    parts = [p for p in text.split(";") if p.strip()]
    offsets = []
    for part in parts:
        m = _OFFSET.fullmatch(part.strip())
        if m is None:
            raise MalformedInput(f"bad offset {part!r}; expected (dx,dy)")
        offsets.append((int(m.group(1)), int(m.group(2))))
    return StructuringElement(offsets)


def _shifted_extreme(arr: np.ndarray, offsets, reducer) -> np.ndarray:
    """``out[y, x] = reducer(arr[y + dy, x + dx])`` over in-domain offsets."""
    h, w = arr.shape
    out = arr.copy()
    for dx, dy in offsets:
        if abs(dx) >= w or abs(dy) >= h:
            continue
        ys_dst = slice(max(0, -dy), h - max(0, dy))
        xs_dst = slice(max(0, -dx), w - max(0, dx))
        ys_src = slice(max(0, dy), h + min(0, dy))
        xs_src = slice(max(0, dx), w + min(0, dx))
        reducer(out[ys_dst, xs_dst], arr[ys_src, xs_src], out=out[ys_dst, xs_dst])
    return out


def _separable_extreme(arr: np.ndarray, bounds, reducer) -> np.ndarray:
    # a rectangle containing the origin is a product of two 1D windows, and
    # border clipping factorises the same way
    x0, x1, y0, y1 = bounds
    rows = _shifted_extreme(arr, [(dx, 0) for dx in range(x0, x1 + 1)], reducer)
    return _shifted_extreme(rows, [(0, dy) for dy in range(y0, y1 + 1)], reducer)


def _extreme(arr, se: StructuringElement, reducer, fast: bool):
    if fast and se.is_rectangle:
        return _separable_extreme(arr, se.bounds, reducer)
    return _shifted_extreme(arr, se.offsets, reducer)


def erode(f: GrayscaleImage, se: StructuringElement, *, fast: bool = True) -> GrayscaleImage:
    """Minimum of ``f(x + b)`` over ``b`` in ``se`` with ``x + b`` in the domain.

    On a binary image this grows the black (0) region.
    """
    return f.with_pixels(_extreme(f.pixels, se, np.minimum, fast))


def dilate(f: GrayscaleImage, se: StructuringElement, *, fast: bool = True) -> GrayscaleImage:
    """Maximum of ``f(x - b)`` over ``b`` in ``se`` with ``x - b`` in the domain."""
    return f.with_pixels(_extreme(f.pixels, se.reflected(), np.maximum, fast))


def erode_reference(f: GrayscaleImage, se: StructuringElement) -> GrayscaleImage:
    """Pixel-by-pixel evaluation, kept as the oracle for the vectorised paths."""
    h, w = f.shape
    src = f.pixels
    out = np.empty_like(src)
    for y in range(h):
        for x in range(w):
            out[y, x] = min(src[y + dy, x + dx] for dx, dy in se.offsets
                            if 0 <= x + dx < w and 0 <= y + dy < h)
    return f.with_pixels(out)


def dilate_reference(f: GrayscaleImage, se: StructuringElement) -> GrayscaleImage:
    h, w = f.shape
    src = f.pixels
    out = np.empty_like(src)
    for y in range(h):
        for x in range(w):
            out[y, x] = max(src[y - dy, x - dx] for dx, dy in se.offsets
                            if 0 <= x - dx < w and 0 <= y - dy < h)
    return f.with_pixels(out)


def opening(f: GrayscaleImage, se: StructuringElement, *, fast: bool = True) -> GrayscaleImage:
    """Dilation of the erosion; removes small bright (white) structures."""
    return dilate(erode(f, se, fast=fast), se, fast=fast)


def closing(f: GrayscaleImage, se: StructuringElement, *, fast: bool = True) -> GrayscaleImage:
    """Erosion of the dilation; removes small dark (black) structures."""
    return erode(dilate(f, se, fast=fast), se, fast=fast)


_OPS = {
    "erode": erode,
    "dilate": dilate,
    "open": opening,
    "close": closing,
}


def apply_op(name: str, f: GrayscaleImage, se: StructuringElement) -> GrayscaleImage:
    try:
        op = _OPS[name]
    except KeyError:
        raise MalformedInput(f"unknown morphological operation {name!r}") from None
    return op(f, se)
