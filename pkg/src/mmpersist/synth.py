"""Synthetic test images for the demos and experiments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MalformedInput
from .image import BinaryImage, GrayscaleImage


@dataclass(frozen=True)
class Rect:
    x: int
    y: int
    width: int
    height: int

    @property
    def slices(self):
        return slice(self.y, self.y + self.height), slice(self.x, self.x + self.width)


def rect_holes_image(widths, size: int = 200, gap: int = 10) -> tuple[BinaryImage, list[Rect]]:
    """Black field with one white rectangular hole per width.

    Holes are ``w`` wide and ``2w`` tall, laid out left to right with ``gap``
    black pixels between them and around the border, so each hole's
    narrow side is its width.  The field grows beyond ``size`` if needed.
    """
    widths = [int(w) for w in widths]
    if not widths or min(widths) < 1:
        raise MalformedInput("hole widths must be positive integers")
    need_w = sum(widths) + gap * (len(widths) + 1)
    need_h = 2 * max(widths) + 2 * gap
    width, height = max(size, need_w), max(size, need_h)
    pixels = np.zeros((height, width), dtype=np.int64)
    rects = []
    x = gap
    for w in widths:
        h = 2 * w
        rect = Rect(x, (height - h) // 2, w, h)
        pixels[rect.slices] = 1
        rects.append(rect)
        x += w + gap
    return BinaryImage(pixels), rects


def gradient_blobs_image(size: int = 200, max_value: int = 255) -> GrayscaleImage:
    """Smooth diagonal ramp with five dark Gaussian dips.

    Values run from about 80 to 230 along the diagonal; blob centres go down
    to about 20, so thresholds between 50 and 150 cut out blobs of several
    sizes.
    """
    y, x = np.mgrid[0:size, 0:size].astype(float)
    ramp = 80.0 + 150.0 * (x + y) / (2.0 * (size - 1))
    img = ramp.copy()
    blobs = [(0.25, 0.25, 0.09), (0.72, 0.30, 0.07), (0.30, 0.70, 0.08),
             (0.70, 0.75, 0.10), (0.50, 0.50, 0.05)]
    for cx, cy, sigma in blobs:
        r2 = (x - cx * size) ** 2 + (y - cy * size) ** 2
        dip = np.exp(-r2 / (2.0 * (sigma * size) ** 2))
        img = img - (img - 20.0) * dip
    img = np.clip(np.rint(img), 0, max_value).astype(np.int64)
    return GrayscaleImage(img, max_value)


def two_holes_disk(size: int = 120, radius: int = 50, hole: int = 7,
                   near_gap: int = 3) -> tuple[BinaryImage, Rect, Rect]:
    """Black disk with two congruent square holes.

    The first hole sits ``near_gap`` pixels inside the disk's left edge; the
    second is centred in the disk.  Returns ``(image, near_hole, far_hole)``.
    """
    c = size // 2
    y, x = np.mgrid[0:size, 0:size]
    disk = (x - c) ** 2 + (y - c) ** 2 <= radius ** 2
    pixels = np.where(disk, 0, 1).astype(np.int64)
    near = Rect(c - radius + near_gap, c - hole // 2, hole, hole)
    far = Rect(c - hole // 2 + radius // 3, c - hole // 2, hole, hole)
    pixels[near.slices] = 1
    pixels[far.slices] = 1
    return BinaryImage(pixels), near, far
