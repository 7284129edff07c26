import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mmpersist.errors import InvalidIndex, MalformedInput
from mmpersist.image import BinaryImage, GrayscaleImage, complement
from mmpersist.morphology import (
    StructuringElement,
    apply_op,
    closing,
    dilate,
    dilate_reference,
    erode,
    erode_reference,
    opening,
    parse_se,
    square_se,
)

images = arrays(np.int64, st.tuples(st.integers(1, 9), st.integers(1, 9)),
                elements=st.integers(0, 255)).map(GrayscaleImage)
binaries = arrays(np.int64, st.tuples(st.integers(1, 9), st.integers(1, 9)),
                  elements=st.integers(0, 1)).map(BinaryImage)
offset = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
ses = st.frozensets(offset, max_size=7).map(lambda s: StructuringElement(s | {(0, 0)}))
squares = st.integers(1, 7).map(square_se)


def test_square_recursion():
    assert square_se(1).offsets == {(0, 0)}
    assert square_se(2).offsets == {(0, 0), (1, 0), (0, 1), (1, 1)}
    for n in range(1, 12):
        lo, hi = -((n - 1) // 2), n // 2
        assert square_se(n).bounds == (lo, hi, lo, hi)
        assert len(square_se(n)) == n * n
        assert square_se(n) <= square_se(n + 1)
    with pytest.raises(InvalidIndex):
        square_se(0)


def test_se_validation():
    with pytest.raises(MalformedInput):
        StructuringElement([])
    with pytest.raises(MalformedInput):
        StructuringElement([(1, 0)])
    with pytest.raises(MalformedInput):
        StructuringElement([(0, 0), (0, 0)])


def test_parse_se():
    assert parse_se("square:3") == square_se(3)
    se = parse_se("offsets:(0,0);(1,0);(-1, 2)")
    assert se.offsets == {(0, 0), (1, 0), (-1, 2)}
    assert parse_se(se.spec_string()) == se
    for bad in ("square:x", "offsets:(0,0);(1)", "offsets:(1,1)"):
        with pytest.raises(MalformedInput):
            parse_se(bad)


def test_hand_computed_erosion():
    # black = 0; erosion takes the minimum, so black spreads along the SE
    f = BinaryImage([[1, 1, 1], [1, 0, 1], [1, 1, 1]])
    se = StructuringElement([(0, 0), (1, 0)])
    # pixel (x, y) looks at (x+1, y): the pixel left of the black one turns black
    assert erode(f, se).pixels.tolist() == [[1, 1, 1], [0, 0, 1], [1, 1, 1]]
    assert dilate(f, se).pixels.tolist() == [[1, 1, 1], [1, 1, 1], [1, 1, 1]]


def test_row_examples():
    row = BinaryImage([[0, 1, 0]])
    assert erode(row, square_se(3)).values == [0, 0, 0]
    assert dilate(row, square_se(3)).values == [1, 1, 1]
    assert opening(row, square_se(3)).values == [0, 0, 0]


def test_isolated_structures_removed():
    field = np.zeros((5, 5), dtype=np.int64)
    field[2, 2] = 1
    assert opening(BinaryImage(field), square_se(3)).values == [0] * 25
    assert closing(BinaryImage(1 - field), square_se(3)).values == [1] * 25


def test_domain_clipping():
    # offsets falling outside the image are ignored, not padded
    f = GrayscaleImage([[5, 9]])
    se = StructuringElement([(0, 0), (0, 1), (0, -1)])
    assert erode(f, se) == f and dilate(f, se) == f


@settings(max_examples=80, deadline=None)
@given(images, ses)
def test_fast_paths_match_reference(f, se):
    assert erode(f, se) == erode_reference(f, se)
    assert dilate(f, se) == dilate_reference(f, se)
    assert erode(f, se, fast=False) == erode(f, se)


@settings(max_examples=60, deadline=None)
@given(images, squares)
def test_separable_rectangles_match_reference(f, se):
    assert se.is_rectangle
    assert erode(f, se) == erode_reference(f, se)
    assert dilate(f, se) == dilate_reference(f, se)


@settings(max_examples=60, deadline=None)
@given(images, ses)
def test_opening_closing_idempotent(f, se):
    o = opening(f, se)
    c = closing(f, se)
    assert opening(o, se) == o
    assert closing(c, se) == c


@settings(max_examples=60, deadline=None)
@given(binaries, ses)
def test_complement_duality(b, se):
    # dilation reads f(x - b), so the dual of dilating by B is eroding by -B
    r = se.reflected()
    assert erode(complement(b), r) == complement(dilate(b, se))
    assert dilate(complement(b), se) == complement(erode(b, r))
    assert opening(complement(b), r) == complement(closing(b, se))


@settings(max_examples=60, deadline=None)
@given(images, ses, ses)
def test_nested_ses_order_erosion_and_dilation(f, b1, extra):
    b2 = StructuringElement(b1.offsets | extra.offsets)
    assert (erode(f, b2).pixels <= erode(f, b1).pixels).all()
    assert (dilate(f, b1).pixels <= dilate(f, b2).pixels).all()


def test_nested_ses_do_not_order_openings():
    # containment alone does not make openings monotone; pinned counterexample
    f = BinaryImage([[0, 1, 1, 0, 1], [0, 0, 1, 0, 1], [0, 0, 0, 1, 0]])
    b1 = StructuringElement([(0, 0), (1, -1)])
    b2 = StructuringElement([(0, 0), (1, -1), (1, 1)])
    assert b1 <= b2
    assert not (opening(f, b2).pixels <= opening(f, b1).pixels).all()


def test_apply_op_names():
    f = GrayscaleImage([[3, 1, 2]])
    se = square_se(2)
    assert apply_op("open", f, se) == opening(f, se)
    with pytest.raises(MalformedInput):
        apply_op("thin", f, se)
