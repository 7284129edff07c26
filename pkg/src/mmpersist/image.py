"""Image data model, PGM/CSV input and output, thresholding and salt noise.

Images are stored as ``(height, width)`` integer arrays indexed ``[y, x]``
with the origin at the top-left corner, matching PGM raster order.  In a
binary image the value 0 is black, and black pixels are the foreground whose
topology is studied.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .errors import DimensionMismatch, EmptyImage, MalformedInput, ValueOutOfRange

__all__ = [
    "GrayscaleImage",
    "BinaryImage",
    "ImageFormat",
    "load_image",
    "serialize_image",
    "read_image",
    "write_image",
    "as_binary",
    "threshold",
    "add_salt_noise",
    "complement",
    "image_leq",
]


def _frozen_array(values, dtype=np.int64) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GrayscaleImage:
    """Integer-valued image with values in ``[0, max_value]``."""

    pixels: np.ndarray
    max_value: int = 255

    def __post_init__(self):
        try:
            raw = np.asarray(self.pixels)
        except ValueError:
            raise MalformedInput("image rows have different lengths") from None
        if raw.ndim != 2 or raw.shape[0] == 0 or raw.shape[1] == 0:
            raise EmptyImage(f"image must be a nonempty 2D grid, got shape {raw.shape}")
        if raw.dtype.kind not in "iub":
            if raw.dtype.kind == "f" and np.all(np.mod(raw, 1) == 0):
                raw = raw.astype(np.int64)
            else:
                raise MalformedInput("pixel values must be integers")
        if int(self.max_value) < 1:
            raise ValueOutOfRange(f"max_value must be positive, got {self.max_value}")
        if raw.min() < 0 or raw.max() > self.max_value:
            raise ValueOutOfRange(
                f"pixel values must lie in [0, {self.max_value}], "
                f"found range [{raw.min()}, {raw.max()}]"
            )
        object.__setattr__(self, "pixels", _frozen_array(raw))
        object.__setattr__(self, "max_value", int(self.max_value))

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    @property
    def values(self) -> list[int]:
        """Row-major pixel values."""
        return self.pixels.ravel().tolist()

    def with_pixels(self, pixels) -> "GrayscaleImage":
        return GrayscaleImage(pixels, self.max_value)

    def __eq__(self, other):
        if not isinstance(other, GrayscaleImage) or isinstance(other, BinaryImage) != isinstance(self, BinaryImage):
            return NotImplemented
        return self.max_value == other.max_value and np.array_equal(self.pixels, other.pixels)

    def __hash__(self):
        return hash((self.max_value, self.pixels.shape, self.pixels.tobytes()))

    def __repr__(self):
        return f"{type(self).__name__}({self.width}x{self.height}, max_value={self.max_value})"


@dataclass(frozen=True, eq=False)
class BinaryImage(GrayscaleImage):
    """A {0, 1}-valued image; 0 (black) marks the foreground."""

    max_value: int = 1

    def __post_init__(self):
        if self.max_value != 1:
            raise ValueOutOfRange("binary images have max_value 1")
        super().__post_init__()

    @property
    def bits(self) -> np.ndarray:
        return self.pixels

    @property
    def black(self) -> np.ndarray:
        """Boolean mask of black pixels."""
        return self.pixels == 0

    def with_pixels(self, pixels) -> "BinaryImage":
        return BinaryImage(pixels)

    @classmethod
    def from_black_mask(cls, mask) -> "BinaryImage":
        return cls(np.where(np.asarray(mask, dtype=bool), 0, 1))


AnyImage = Union[GrayscaleImage, BinaryImage]


class ImageFormat(enum.Enum):
    PGM_ASCII = "P2"
    PGM_BINARY = "P5"
    CSV_GRID = "csv"


_PGM_TOKEN = re.compile(rb"#[^\n]*|\S+")


def _pgm_header(data: bytes, count: int):
    """Return the first ``count`` header tokens and the offset just past them."""
    tokens = []
    pos = 0
    for match in _PGM_TOKEN.finditer(data):
        tok = match.group()
        if tok.startswith(b"#"):
            continue
        tokens.append(tok)
        pos = match.end()
        if len(tokens) == count:
            break
    if len(tokens) < count:
        raise MalformedInput("truncated PGM header")
    return tokens, pos


def _parse_pgm(data: bytes) -> GrayscaleImage:
    tokens, pos = _pgm_header(data, 4)
    magic = tokens[0]
    if magic not in (b"P2", b"P5"):
        raise MalformedInput(f"unsupported PGM magic {magic!r}")
    try:
        width, height, max_value = (int(t) for t in tokens[1:4])
    except ValueError:
        raise MalformedInput("non-integer PGM header field") from None
    if width <= 0 or height <= 0:
        raise EmptyImage(f"PGM declares a {width}x{height} image")
    if not 0 < max_value < 65536:
        raise MalformedInput(f"PGM max value {max_value} out of range")

    n = width * height
    if magic == b"P2":
        body = [t for t in _PGM_TOKEN.findall(data[pos:]) if not t.startswith(b"#")]
        if len(body) != n:
            raise MalformedInput(f"expected {n} pixel values, found {len(body)}")
        try:
            values = np.array([int(t) for t in body], dtype=np.int64)
        except ValueError:
            raise MalformedInput("non-integer pixel value in PGM body") from None
    else:
        # exactly one whitespace byte separates the header from the raster
        raster = data[pos + 1:]
        dtype = np.dtype(np.uint8) if max_value < 256 else np.dtype(">u2")
        if len(raster) != n * dtype.itemsize:
            raise MalformedInput(f"expected {n * dtype.itemsize} raster bytes, found {len(raster)}")
        values = np.frombuffer(raster, dtype=dtype).astype(np.int64)
    if values.min() < 0 or values.max() > max_value:
        raise ValueOutOfRange(f"pixel value {values.max()} exceeds declared max {max_value}")
    return GrayscaleImage(values.reshape(height, width), max_value)


def _parse_csv_grid(data: bytes) -> GrayscaleImage:
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError:
        raise MalformedInput("CSV grid must be ASCII") from None
    rows = [line.strip() for line in text.splitlines()]
    rows = [r for r in rows if r]
    if not rows:
        raise EmptyImage("CSV grid has no rows")
    try:
        grid = [[int(cell) for cell in row.split(",")] for row in rows]
    except ValueError:
        raise MalformedInput("CSV grid cells must be integers") from None
    width = len(grid[0])
    if any(len(row) != width for row in grid):
        raise MalformedInput("CSV grid rows have unequal lengths")
    arr = np.array(grid, dtype=np.int64)
    if arr.min() < 0 or arr.max() > 255:
        raise ValueOutOfRange("CSV grid values must lie in [0, 255]")
    return GrayscaleImage(arr, 255)


def load_image(data: bytes, fmt: ImageFormat) -> GrayscaleImage:
    """Parse ``data`` in the declared format.

    PGM headers supply ``max_value``; CSV grids default to 255.
    """
    fmt = ImageFormat(fmt)
    if fmt is ImageFormat.CSV_GRID:
        return _parse_csv_grid(data)
    img = _parse_pgm(data)
    expected = b"P2" if fmt is ImageFormat.PGM_ASCII else b"P5"
    if not data.lstrip().startswith(expected):
        raise MalformedInput(f"data is not in {fmt.name} format")
    return img


def serialize_image(img: GrayscaleImage, fmt: ImageFormat) -> bytes:
    """Canonical bytes: single-space separators and a trailing newline."""
    fmt = ImageFormat(fmt)
    rows = img.pixels.tolist()
    if fmt is ImageFormat.CSV_GRID:
        return "".join(",".join(map(str, row)) + "\n" for row in rows).encode("ascii")
    header = f"{fmt.value}\n{img.width} {img.height}\n{img.max_value}\n".encode("ascii")
    if fmt is ImageFormat.PGM_ASCII:
        return header + "".join(" ".join(map(str, row)) + "\n" for row in rows).encode("ascii")
    dtype = np.uint8 if img.max_value < 256 else np.dtype(">u2")
    return header + img.pixels.astype(dtype).tobytes()


def _format_for_path(path: Path, data: bytes | None = None) -> ImageFormat:
    suffix = path.suffix.lower()
    if suffix == ".csv":
        return ImageFormat.CSV_GRID
    if suffix in (".pgm", ".pnm"):
        if data is None:
            return ImageFormat.PGM_ASCII
        return ImageFormat.PGM_BINARY if data.lstrip().startswith(b"P5") else ImageFormat.PGM_ASCII
    raise MalformedInput(f"cannot infer image format from extension {path.suffix!r}")


def read_image(path) -> GrayscaleImage:
    path = Path(path)
    data = path.read_bytes()
    return load_image(data, _format_for_path(path, data))


def write_image(img: GrayscaleImage, path, fmt: ImageFormat | None = None) -> None:
    path = Path(path)
    if fmt is None:
        fmt = _format_for_path(path)
        if fmt is ImageFormat.PGM_ASCII and not isinstance(img, BinaryImage) and img.max_value == 255:
            fmt = ImageFormat.PGM_BINARY
    path.write_bytes(serialize_image(img, fmt))


def as_binary(img: GrayscaleImage) -> BinaryImage:
    """Reinterpret a {0, 1}-valued image as a :class:`BinaryImage`."""
    if isinstance(img, BinaryImage):
        return img
    if img.pixels.max() > 1:
        raise ValueOutOfRange("image is not binary; threshold it first")
    return BinaryImage(img.pixels)


def threshold(f: GrayscaleImage, t: int) -> BinaryImage:
    """Black (0) where ``f(x) <= t``, white (1) elsewhere."""
    return BinaryImage((f.pixels > t).astype(np.int64))


def add_salt_noise(f: GrayscaleImage, fraction: float, seed: int) -> GrayscaleImage:
    """Set ``floor(fraction * width * height)`` distinct pixels to ``max_value``.

    Positions are drawn without replacement from numpy's PCG64 generator
    seeded with ``seed``, so a given (image, fraction, seed) always yields the
    same result.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValueOutOfRange(f"noise fraction must lie in [0, 1], got {fraction}")
    n = f.width * f.height
    # round first so that e.g. 0.29 * 100 counts 29 pixels, not 28
    count = math.floor(round(fraction * n, 9))
    if count == 0:
        return f
    rng = np.random.Generator(np.random.PCG64(seed))
    positions = rng.choice(n, size=count, replace=False)
    out = f.pixels.ravel().copy()
    out[positions] = f.max_value
    return f.with_pixels(out.reshape(f.shape))


def complement(b: BinaryImage) -> BinaryImage:
    return BinaryImage(1 - b.pixels)


def image_leq(f: GrayscaleImage, g: GrayscaleImage) -> bool:
    """Pointwise partial order: ``f(x) <= g(x)`` for every pixel."""
    if f.shape != g.shape:
        raise DimensionMismatch(f"cannot compare {f.shape} with {g.shape}")
    return bool(np.all(f.pixels <= g.pixels))
