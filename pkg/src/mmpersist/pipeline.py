"""Multi-threshold pipeline for grayscale images.

Each threshold turns the image into a binary one, a morphological filtration
of that binary image gives a persistence diagram, and the diagrams of all
thresholds, in threshold order, form the feature sequence of the image.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .cubical import build_complex
from .diagram import bottleneck_distance, normalize
from .errors import InvalidThresholds, MalformedInput
from .filtration import FilterKind, FiltrationSpec, mm_filtration, sublevel_filtration
from .image import BinaryImage, GrayscaleImage, threshold
from .persistence import PersistenceDiagram, compute_persistence

__all__ = [
    "PipelineConfig",
    "mm_persistence",
    "sublevel_persistence",
    "pipeline_grayscale",
    "compare_sequences",
    "summary_rows",
    "summary_csv",
]


@dataclass(frozen=True)
class PipelineConfig:
    """Thresholds ``t_1 < ... < t_m``, the filtration and the normalisation.

    ``divisor=None`` means automatic: ``n + 1`` for a one-sided filtration
    with ``n`` SEs (``2n + 1`` for combined ones), i.e. the all-black level.
    """

    thresholds: tuple
    spec: FiltrationSpec
    divisor: float | None = None
    dims: tuple = (0, 1)

    def __post_init__(self):
        object.__setattr__(self, "thresholds", tuple(int(t) for t in self.thresholds))
        object.__setattr__(self, "dims", tuple(sorted(set(self.dims))))
        ts = self.thresholds
        if not ts:
            raise InvalidThresholds("at least one threshold is required")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise InvalidThresholds(f"thresholds must be strictly increasing, got {list(ts)}")
        if ts[0] < 0:
            raise InvalidThresholds("thresholds must be nonnegative")
        if not set(self.dims) <= {0, 1}:
            raise MalformedInput(f"dims must be a subset of {{0, 1}}, got {self.dims}")
        if not self.spec.kind.is_morphological:
            raise MalformedInput("the pipeline needs a morphological filtration kind")
        if self.divisor is not None and not self.divisor > 0:
            raise MalformedInput("divisor must be positive")

    def check_image(self, f: GrayscaleImage) -> None:
        if self.thresholds[-1] > f.max_value:
            raise InvalidThresholds(
                f"threshold {self.thresholds[-1]} exceeds the image maximum {f.max_value}")

    @property
    def effective_divisor(self):
        return self.spec.normalization_divisor if self.divisor is None else self.divisor


def mm_persistence(f: BinaryImage, spec: FiltrationSpec) -> PersistenceDiagram:
    """Raw diagram of the morphological filtration of ``f``.

    Without the all-black cap the filtration ends at an image that may still
    enclose loops; those 1-dimensional classes are given the final level as
    their death instead of an infinite one.
    """
    grid = mm_filtration(f, spec)
    pd = compute_persistence(build_complex(grid))
    if not spec.cap_all_black:
        pd = pd.close_essential(grid.max_level, dims=(1,))
    return pd


def sublevel_persistence(f: GrayscaleImage, normalized: bool = True) -> PersistenceDiagram:
    """Diagram of the sublevel-set filtration, optionally scaled by ``max_value``."""
    pd = compute_persistence(build_complex(sublevel_filtration(f)))
    return normalize(pd, f.max_value) if normalized else pd


def _one_threshold(f: GrayscaleImage, t: int, cfg: PipelineConfig) -> PersistenceDiagram:
    pd = mm_persistence(threshold(f, t), cfg.spec)
    return normalize(pd, cfg.effective_divisor).restrict(cfg.dims)


def pipeline_grayscale(f: GrayscaleImage, cfg: PipelineConfig,
                       workers: int | None = None) -> list[tuple[int, PersistenceDiagram]]:
    """Normalised diagram per threshold, in threshold order.

    Thresholds are independent; with ``workers`` they run on a thread pool
    and the result is identical to the sequential one.
    """
    cfg.check_image(f)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pds = list(pool.map(lambda t: _one_threshold(f, t, cfg), cfg.thresholds))
    else:
        pds = [_one_threshold(f, t, cfg) for t in cfg.thresholds]
    return list(zip(cfg.thresholds, pds))


def compare_sequences(first, second, dim: int = 1) -> list[tuple[int, float]]:
    """Per-threshold bottleneck distances between two pipeline outputs."""
    if [t for t, _ in first] != [t for t, _ in second]:
        raise InvalidThresholds("the two sequences use different thresholds")
    return [(t, bottleneck_distance(a, b, dim)) for (t, a), (_, b) in zip(first, second)]


def summary_rows(results, distances=None) -> list[dict]:
    """One row per (threshold, dim): interval count and longest finite lifespan."""
    dist = dict(distances or [])
    rows = []
    for t, pd in results:
        dims = sorted({q for q, _, _ in pd.intervals} | {0, 1})
        for q in dims:
            pts = pd.in_dim(q)
            finite = [d - b for b, d in pts if d != float("inf")]
            row = {
                "threshold": t,
                "dim": q,
                "count": len(pts),
                "max_lifespan": max(finite) if finite else 0,
            }
            if distances is not None:
                row["distance"] = dist.get(t, "") if q == 1 else ""
            rows.append(row)
    return rows


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def summary_csv(results, distances=None) -> bytes:
    rows = summary_rows(results, distances)
    fields = ["threshold", "dim", "count", "max_lifespan"]
    if distances is not None:
        fields.append("distance")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([_fmt(row[k]) for k in fields])
    return buf.getvalue().encode("ascii")


def kind_from_name(name: str) -> FilterKind:
    try:
        return FilterKind(name)
    except ValueError:
        raise MalformedInput(f"unknown filtration kind {name!r}") from None
