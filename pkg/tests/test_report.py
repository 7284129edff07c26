from mmpersist.diagram import death_histogram
from mmpersist.filtration import FilterKind, FiltrationSpec
from mmpersist.pipeline import PipelineConfig, compare_sequences, mm_persistence, pipeline_grayscale
from mmpersist.report import holes_figure, pipeline_figure
from mmpersist.synth import gradient_blobs_image, rect_holes_image


def test_pipeline_figure_is_deterministic(tmp_path):
    f = gradient_blobs_image(40)
    cfg = PipelineConfig((60, 120), FiltrationSpec.square_range(FilterKind.OPENING, 4))
    res = pipeline_grayscale(f, cfg)
    dists = compare_sequences(res, res)
    for name in ("a.png", "b.png"):
        pipeline_figure(tmp_path / name, res, res, dists)
    a = (tmp_path / "a.png").read_bytes()
    assert a[:4] == b"\x89PNG" and a == (tmp_path / "b.png").read_bytes()


def test_holes_figure(tmp_path):
    img, _ = rect_holes_image([3, 6], size=30, gap=4)
    pd = mm_persistence(img, FiltrationSpec.square_range(FilterKind.EROSION, 8))
    holes_figure(tmp_path / "h.png", img, pd, death_histogram(pd, 1))
    assert (tmp_path / "h.png").stat().st_size > 1000
