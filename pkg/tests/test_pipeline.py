import numpy as np
import pytest

from mmpersist.cubical import build_complex
from mmpersist.diagram import normalize
from mmpersist.errors import InvalidThresholds, MalformedInput
from mmpersist.filtration import FilterKind, FiltrationSpec, mm_filtration, sublevel_filtration
from mmpersist.image import GrayscaleImage, threshold
from mmpersist.persistence import compute_persistence
from mmpersist.pipeline import (
    PipelineConfig,
    compare_sequences,
    kind_from_name,
    mm_persistence,
    pipeline_grayscale,
    sublevel_persistence,
    summary_csv,
)
from mmpersist.synth import gradient_blobs_image, rect_holes_image, two_holes_disk


@pytest.fixture(scope="module")
def blobs():
    return gradient_blobs_image(60)


def test_single_threshold_equals_manual_composition(blobs):
    spec = FiltrationSpec.square_range(FilterKind.OPENING, 6)
    cfg = PipelineConfig((100,), spec)
    manual = normalize(compute_persistence(build_complex(mm_filtration(threshold(blobs, 100), spec))),
                       spec.n + 1)
    assert pipeline_grayscale(blobs, cfg) == [(100, manual)]


def test_threads_give_same_sequence(blobs):
    cfg = PipelineConfig((40, 80, 120, 160), FiltrationSpec.square_range(FilterKind.EROSION, 5))
    assert pipeline_grayscale(blobs, cfg, workers=4) == pipeline_grayscale(blobs, cfg)


def test_results_are_normalized(blobs):
    cfg = PipelineConfig((60, 120), FiltrationSpec.square_range(FilterKind.COMBINED_OC, 4))
    for _, pd in pipeline_grayscale(blobs, cfg):
        assert pd.scale == 7
        assert all(0 <= b < d <= 1 for _, b, d in pd.intervals)


def test_config_validation(blobs):
    spec = FiltrationSpec.square_range(FilterKind.EROSION, 4)
    for ts in [(), (5, 5), (9, 3), (-1, 4)]:
        with pytest.raises(InvalidThresholds):
            PipelineConfig(ts, spec)
    with pytest.raises(MalformedInput):
        PipelineConfig((1,), FiltrationSpec(FilterKind.SUBLEVEL))
    with pytest.raises(MalformedInput):
        PipelineConfig((1,), spec, dims=(2,))
    with pytest.raises(InvalidThresholds):
        pipeline_grayscale(blobs, PipelineConfig((300,), spec))


def test_uncapped_dilation_closes_loops_at_last_level():
    img, near, far = two_holes_disk(size=40, radius=16, hole=3, near_gap=2)
    spec = FiltrationSpec.square_range(FilterKind.DILATION, 8)
    pd = mm_persistence(img, spec)
    assert pd.essential(1) == []
    assert all(d == spec.n for _, d in pd.in_dim(1))


def test_rect_holes_die_at_their_width():
    img, _ = rect_holes_image([3, 5, 8], size=40, gap=4)
    pd = mm_persistence(img, FiltrationSpec.square_range(FilterKind.EROSION, 10))
    assert pd.in_dim(1) == [(0, 3), (0, 5), (0, 8)]


def test_sublevel_persistence(blobs):
    raw = sublevel_persistence(blobs, normalized=False)
    assert raw == compute_persistence(build_complex(sublevel_filtration(blobs)))
    assert sublevel_persistence(blobs) == normalize(raw, 255)


def test_compare_and_summary(blobs):
    cfg = PipelineConfig((50, 150), FiltrationSpec.square_range(FilterKind.OPENING, 4))
    first = pipeline_grayscale(blobs, cfg)
    dists = compare_sequences(first, first)
    assert dists == [(50, 0), (150, 0)]
    text = summary_csv(first, dists).decode()
    lines = text.splitlines()
    assert lines[0] == "threshold,dim,count,max_lifespan,distance"
    assert len(lines) == 1 + 2 * 2
    with pytest.raises(InvalidThresholds):
        compare_sequences(first, first[:1])


def test_kind_from_name():
    assert kind_from_name("combined-ed") is FilterKind.COMBINED_ED
    with pytest.raises(MalformedInput):
        kind_from_name("median")


def test_gradient_image_shape():
    f = gradient_blobs_image(200)
    assert f.shape == (200, 200) and f.max_value == 255
    assert 10 <= int(f.pixels.min()) < 50 and int(f.pixels.max()) > 200
    assert isinstance(f, GrayscaleImage) and np.unique(f.pixels).size > 100
