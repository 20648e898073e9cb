import pytest
from hypothesis import given, settings, strategies as st

from blossom.annotation_io import (BoundingBox, Category, Detection, FrameAnnotations, Mode,
                                   detect_mode, format_number, parse_label_file, parse_label_line,
                                   parse_names, read_label_dir, serialize_label_file, write_label_dir)
from blossom.errors import MalformedLine, OutOfRange

UNOPENED = Category(0, "unopened")
OPENED = Category(1, "opened")


def test_parse_ground_truth_line():
    det = parse_label_line("0 0.5 0.5 0.1 0.2", Mode.GROUND_TRUTH)
    assert det == Detection(UNOPENED, BoundingBox(0.5, 0.5, 0.1, 0.2), None)


def test_parse_prediction_line():
    det = parse_label_line("1 0.25 0.75 0.05 0.05 0.90", "prediction")
    assert det.category == OPENED
    assert det.box == BoundingBox(0.25, 0.75, 0.05, 0.05)
    assert det.confidence == 0.90


@pytest.mark.parametrize("line, mode, err, field", [
    ("0 0.5 0.5 0.1", Mode.GROUND_TRUTH, MalformedLine, None),
    ("0 0.5 0.5 0.1 0.2 0.9", Mode.GROUND_TRUTH, MalformedLine, None),
    ("0 0.5 0.5 0.1 0.2", Mode.PREDICTION, MalformedLine, None),
    ("a 0.5 0.5 0.1 0.2", Mode.GROUND_TRUTH, MalformedLine, 1),
    ("0.0 0.5 0.5 0.1 0.2", Mode.GROUND_TRUTH, MalformedLine, 1),
    ("0 0.5 x 0.1 0.2", Mode.GROUND_TRUTH, MalformedLine, 3),
    ("0 nan 0.5 0.1 0.2", Mode.GROUND_TRUTH, MalformedLine, 2),
    ("0 1_0 0.5 0.1 0.2", Mode.GROUND_TRUTH, MalformedLine, 2),
    ("0 1.5 0.5 0.1 0.2", Mode.GROUND_TRUTH, OutOfRange, 2),
    ("0 0.5 -0.1 0.1 0.2", Mode.GROUND_TRUTH, OutOfRange, 3),
    ("0 0.5 0.5 0 0.2", Mode.GROUND_TRUTH, OutOfRange, 4),
    ("0 0.5 0.5 0.1 1.2", Mode.GROUND_TRUTH, OutOfRange, 5),
    ("0 0.5 0.5 0.1 0.2 1.5", Mode.PREDICTION, OutOfRange, 6),
    ("2 0.5 0.5 0.1 0.2", Mode.GROUND_TRUTH, OutOfRange, 1),
])
def test_parse_errors_carry_line_and_position(line, mode, err, field):
    with pytest.raises(err) as info:
        parse_label_line(line, mode)
    assert info.value.line == line
    assert info.value.field == field


def test_parse_accepts_scientific_and_edge_values():
    det = parse_label_line("1 0 1 1e-3 1.0", Mode.GROUND_TRUTH)
    assert det.box == BoundingBox(0.0, 1.0, 0.001, 1.0)


def test_parse_file_keeps_line_order_and_skips_blanks():
    frame = parse_label_file("0 0.1 0.1 0.1 0.1\n\n   \n1 0.2 0.2 0.1 0.1\n", "f", Mode.GROUND_TRUTH)
    assert [d.category.index for d in frame.detections] == [0, 1]
    assert frame.frame_id == "f"


def test_parse_empty_file():
    assert parse_label_file("", "empty", Mode.GROUND_TRUTH).detections == ()


def test_parse_file_error_cites_line_number():
    with pytest.raises(MalformedLine) as info:
        parse_label_file("0 0.5 0.5 0.1 0.2\n0 0.5 0.5 0.1\n", "f", Mode.GROUND_TRUTH, source_path="f.txt")
    assert info.value.lineno == 2
    assert "f.txt:line 2" in str(info.value)


def test_serialize_canonical_form():
    frame = FrameAnnotations("f", (Detection(UNOPENED, BoundingBox(0.5, 0.5, 0.1, 0.2)),))
    assert serialize_label_file(frame, Mode.GROUND_TRUTH) == "0 0.500000 0.500000 0.100000 0.200000\n"
    assert serialize_label_file(FrameAnnotations("e"), Mode.GROUND_TRUTH) == ""


def test_serialize_prediction_carries_confidence():
    frame = FrameAnnotations("f", (Detection(OPENED, BoundingBox(0.25, 0.75, 0.05, 0.05), 0.9),))
    assert serialize_label_file(frame, Mode.PREDICTION) == "1 0.250000 0.750000 0.050000 0.050000 0.900000\n"


def test_two_line_round_trip():
    text = "0 0.5 0.5 0.1 0.2\n1 0.123456 0.9 0.05 0.3\n"
    first = parse_label_file(text, "f", Mode.GROUND_TRUTH)
    again = parse_label_file(serialize_label_file(first, Mode.GROUND_TRUTH), "f", Mode.GROUND_TRUTH)
    assert again.detections == first.detections


def test_format_number_widens_when_six_digits_lose_value():
    assert format_number(0.5) == "0.500000"
    assert float(format_number(0.1234567)) == 0.1234567
    assert float(format_number(1e-9)) == 1e-9


unit = st.floats(0.0, 1.0, allow_nan=False)
size = st.floats(1e-9, 1.0, allow_nan=False)
detections = st.builds(
    Detection,
    st.sampled_from([UNOPENED, OPENED]),
    st.builds(BoundingBox, unit, unit, size, size),
    unit,
)


@given(st.lists(detections, max_size=20))
@settings(max_examples=200)
def test_round_trip_property(dets):
    frame = FrameAnnotations("f", tuple(dets))
    for mode in Mode:
        text = serialize_label_file(frame, mode)
        parsed = parse_label_file(text, "f", mode)
        assert [d.box for d in parsed.detections] == [d.box for d in dets]
        assert [d.category for d in parsed.detections] == [d.category for d in dets]
        if mode is Mode.PREDICTION:
            assert [d.confidence for d in parsed.detections] == [d.confidence for d in dets]
        assert serialize_label_file(parsed, mode) == text


@given(st.text(max_size=200))
@settings(max_examples=300)
def test_parser_is_total(text):
    for mode in Mode:
        try:
            frame = parse_label_file(text, "f", mode)
        except (MalformedLine, OutOfRange):
            continue
        assert len(frame.detections) == sum(1 for line in text.splitlines() if line.strip())


def test_names_file_and_custom_taxonomy():
    names = parse_names("bud\nflower\nking\n")
    det = parse_label_line("2 0.5 0.5 0.1 0.1", Mode.GROUND_TRUTH, names)
    assert det.category == Category(2, "king")


def test_detect_mode():
    assert detect_mode("\n0 0.5 0.5 0.1 0.1 0.3\n") is Mode.PREDICTION
    assert detect_mode("0 0.5 0.5 0.1 0.1\n") is Mode.GROUND_TRUTH
    assert detect_mode("") is Mode.GROUND_TRUTH


def test_label_dir_round_trip(tmp_path):
    frames = [
        FrameAnnotations("b", (Detection(OPENED, BoundingBox(0.1, 0.2, 0.3, 0.4)),)),
        FrameAnnotations("a", ()),
    ]
    write_label_dir(frames, tmp_path, Mode.GROUND_TRUTH)
    (tmp_path / "classes.txt").write_text("unopened\nopened\n")
    read, names = read_label_dir(tmp_path, Mode.GROUND_TRUTH)
    assert [f.frame_id for f in read] == ["a", "b"]
    assert read[1].detections == frames[0].detections
    assert names == ("unopened", "opened")
