import re
import xml.etree.ElementTree as ET

import pytest
from hypothesis import given, settings, strategies as st

from blossom.annotation_io import BoundingBox, Category, Detection, FrameAnnotations
from blossom.errors import FrameError
from blossom.pipeline import PipelineConfig, process_frame, render_overlay, run_sequence
from blossom.synth import SceneSpec, generate_scene

U, O = Category(0, "unopened"), Category(1, "opened")
SVG = "{http://www.w3.org/2000/svg}"


def four_box_frame():
    boxes = [(0.1, 0.1, U), (0.1, 0.2, O), (0.8, 0.1, U), (0.8, 0.2, U)]
    return FrameAnnotations("four", tuple(Detection(c, BoundingBox(x, y, 0.05, 0.05)) for x, y, c in boxes))


def test_four_box_frame():
    report = process_frame(four_box_frame(), PipelineConfig(k_max=3))
    assert report.chosen_k == 2
    a, b = report.clusters
    assert (a.id, b.id) == (0, 1)
    assert a.centroid == pytest.approx((0.1, 0.15), abs=1e-15)
    assert b.centroid == pytest.approx((0.8, 0.15), abs=1e-15)
    assert a.member_indices == (0, 1)
    assert a.category_counts == {"unopened": 1, "opened": 1}
    assert b.category_counts == {"unopened": 2, "opened": 0}
    assert set(report.sweep_scores) == {2, 3}


def test_single_detection():
    frame = FrameAnnotations("one", (Detection(U, BoundingBox(0.3, 0.6, 0.1, 0.1)),))
    report = process_frame(frame)
    assert report.chosen_k == 1
    assert report.clusters[0].centroid == (0.3, 0.6)


def test_empty_frame():
    report = process_frame(FrameAnnotations("none"))
    assert report.chosen_k == 0
    assert report.clusters == ()


def test_category_filter():
    report = process_frame(four_box_frame(), PipelineConfig(k_max=3, category_filter={1}))
    assert report.chosen_k == 1
    assert report.clusters[0].member_indices == (1,)
    assert process_frame(four_box_frame(), PipelineConfig(category_filter=set())).chosen_k == 0


def test_max_items_warning():
    report = process_frame(four_box_frame(), PipelineConfig(k_max=3, max_items_warning=1))
    assert all(len(c.warnings) == 1 for c in report.clusters)
    assert process_frame(four_box_frame(), PipelineConfig(k_max=3, max_items_warning=2)).clusters[0].warnings == ()


def scenes(n, seed=0):
    return [generate_scene(SceneSpec(1 + i % 4, (2, 6), 0.01, 0.2, seed=seed + i), f"f{i}").frame
            for i in range(n)]


def test_run_sequence_order_and_independence():
    frames = scenes(6)
    assert run_sequence([]) == []
    forward = run_sequence(frames)
    assert [r.frame_id for r in forward] == [f.frame_id for f in frames]
    backward = run_sequence(frames[::-1])
    assert backward == forward[::-1]
    assert run_sequence(frames, jobs=4) == forward


def test_run_sequence_names_failing_frame(monkeypatch):
    import blossom.pipeline as pipeline

    def boom(points, *args, **kwargs):
        raise ValueError("broken")
    monkeypatch.setattr(pipeline, "select_k", boom)
    with pytest.raises(FrameError) as info:
        run_sequence(scenes(2))
    assert info.value.frame_id == "f0"


@given(st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_report_invariants(seed):
    frame = generate_scene(SceneSpec(3, (1, 5), 0.03, 0.2, opened_fraction=0.4, seed=seed)).frame
    report = process_frame(frame, PipelineConfig(k_max=8))
    members = [i for c in report.clusters for i in c.member_indices]
    assert sorted(members) == list(range(len(frame.detections)))
    xs = [(c.centroid.x, c.centroid.y) for c in report.clusters]
    assert xs == sorted(xs)
    assert [c.id for c in report.clusters] == list(range(report.chosen_k))
    for name in ("unopened", "opened"):
        total = sum(c.category_counts[name] for c in report.clusters)
        assert total == sum(d.category.name == name for d in frame.detections)


def test_overlay_empty_frame():
    svg = render_overlay(FrameAnnotations("e"), process_frame(FrameAnnotations("e")), 320, 240)
    root = ET.fromstring(svg)
    rects = root.findall(f"{SVG}rect")
    assert [r.get("class") for r in rects] == ["background"]
    assert root.findall(f"{SVG}path") == []


def test_overlay_single_detection():
    frame = FrameAnnotations("one", (Detection(O, BoundingBox(0.5, 0.25, 0.1, 0.1)),))
    root = ET.fromstring(render_overlay(frame, process_frame(frame), 200, 100))
    dets = [r for r in root.findall(f"{SVG}rect") if "detection" in r.get("class")]
    assert len(dets) == 1
    assert dets[0].get("stroke") == "#8b0000"
    assert (dets[0].get("x"), dets[0].get("y"), dets[0].get("width")) == ("90.00", "20.00", "20.00")
    (plus,) = root.findall(f"{SVG}path")
    assert "M 100.00 " in plus.get("d") and "V " in plus.get("d")


def test_overlay_four_box_frame():
    frame = four_box_frame()
    svg = render_overlay(frame, process_frame(frame, PipelineConfig(k_max=3)), 1000, 1000)
    root = ET.fromstring(svg)
    assert len([r for r in root.findall(f"{SVG}rect") if "detection" in r.get("class")]) == 4
    centers = []
    for path in root.findall(f"{SVG}path"):
        d = path.get("d")
        x = float(re.search(r"M \S+ \S+ H \S+ M (\S+)", d).group(1))
        y = float(re.search(r"M \S+ (\S+) H", d).group(1))
        centers.append((x, y))
    assert centers == [(100.0, 150.0), (800.0, 150.0)]
    assert [t.text for t in root.findall(f"{SVG}text")] == ["0", "1"]
    assert svg == render_overlay(frame, process_frame(frame, PipelineConfig(k_max=3)), 1000, 1000)


def test_overlay_clips_edge_boxes():
    frame = FrameAnnotations("edge", (Detection(U, BoundingBox(0.0, 1.0, 0.2, 0.2)),))
    root = ET.fromstring(render_overlay(frame, None, 100, 100))
    rect = root.findall(f"{SVG}rect")[1]
    assert (rect.get("x"), rect.get("y"), rect.get("width"), rect.get("height")) == ("0.00", "90.00", "10.00", "10.00")


def test_overlay_rejects_bad_canvas():
    with pytest.raises(ValueError):
        render_overlay(FrameAnnotations("e"), None, 0, 10)
