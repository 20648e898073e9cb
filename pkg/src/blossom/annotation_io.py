"""YOLO label files: parsing, validation and canonical serialization.

One object per line, ``class cx cy w h`` for ground truth and
``class cx cy w h confidence`` for model predictions. Coordinates are
normalized to the image size.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .errors import AnnotationError, MalformedLine, OutOfRange

DEFAULT_NAMES: tuple[str, ...] = ("unopened", "opened")
NAMES_FILES = ("names", "classes.txt")
_DECIMAL = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?", re.ASCII)


class Mode(str, Enum):
    GROUND_TRUTH = "ground_truth"
    PREDICTION = "prediction"


@dataclass(frozen=True, order=True)
class Category:
    index: int
    name: str


@dataclass(frozen=True)
class BoundingBox:
    cx: float
    cy: float
    w: float
    h: float

    def __post_init__(self):
        problem = box_problem(self.cx, self.cy, self.w, self.h)
        if problem is not None:
            raise OutOfRange(problem[1], field=problem[0])

    @property
    def extents(self) -> tuple[float, float, float, float]:
        """(x0, y0, x1, y1) edges; these may lie outside the unit square."""
        hw, hh = self.w / 2.0, self.h / 2.0
        return self.cx - hw, self.cy - hh, self.cx + hw, self.cy + hh


@dataclass(frozen=True)
class Detection:
    category: Category
    box: BoundingBox
    confidence: float | None = None


@dataclass(frozen=True)
class FrameAnnotations:
    frame_id: str
    detections: tuple[Detection, ...] = ()
    source_path: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "detections", tuple(self.detections))


def box_problem(cx: float, cy: float, w: float, h: float) -> tuple[int, str] | None:
    """Return (field position, message) for the first invalid coordinate."""
    for pos, (name, value) in enumerate((("cx", cx), ("cy", cy)), start=2):
        if not 0.0 <= value <= 1.0:
            return pos, f"{name}={value!r} outside [0, 1]"
    for pos, (name, value) in enumerate((("w", w), ("h", h)), start=4):
        if not 0.0 < value <= 1.0:
            return pos, f"{name}={value!r} outside (0, 1]"
    return None


def make_categories(names: Sequence[str] = DEFAULT_NAMES) -> tuple[Category, ...]:
    return tuple(Category(i, n) for i, n in enumerate(names))


def parse_names(content: str) -> tuple[str, ...]:
    """Names file: one category name per line, line number is the index."""
    names = tuple(line.strip() for line in content.splitlines() if line.strip())
    if not names:
        raise AnnotationError("names file declares no categories")
    return names


def _mode(mode: Mode | str) -> Mode:
    return mode if isinstance(mode, Mode) else Mode(mode)


def parse_label_line(line: str, mode: Mode | str,
                     names: Sequence[str] = DEFAULT_NAMES) -> Detection:
    mode = _mode(mode)
    text = line.strip()
    tokens = text.split()
    expected = 6 if mode is Mode.PREDICTION else 5
    if not tokens:
        raise MalformedLine("empty line", line=line)
    if len(tokens) != expected:
        raise MalformedLine(f"expected {expected} fields for {mode.value}, got {len(tokens)}",
                            line=text)
    if not (tokens[0].isascii() and tokens[0].isdigit()):
        raise MalformedLine(f"class index {tokens[0]!r} is not an integer", line=text, field=1)
    index = int(tokens[0])
    if not 0 <= index < len(names):
        raise OutOfRange(f"class index {index} not in taxonomy of {len(names)} categories",
                         line=text, field=1)
    values = []
    for pos, token in enumerate(tokens[1:], start=2):
        if not _DECIMAL.fullmatch(token):
            raise MalformedLine(f"{token!r} is not a decimal number", line=text, field=pos)
        values.append(float(token))
    problem = box_problem(*values[:4])
    if problem is not None:
        raise OutOfRange(problem[1], line=text, field=problem[0])
    confidence = None
    if mode is Mode.PREDICTION:
        confidence = values[4]
        if not 0.0 <= confidence <= 1.0:
            raise OutOfRange(f"confidence={confidence!r} outside [0, 1]", line=text, field=6)
    return Detection(Category(index, names[index]), BoundingBox(*values[:4]), confidence)


def parse_label_file(content: str, frame_id: str, mode: Mode | str,
                     names: Sequence[str] = DEFAULT_NAMES,
                     source_path: str | None = None) -> FrameAnnotations:
    detections = []
    for lineno, line in enumerate(content.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            detections.append(parse_label_line(line, mode, names))
        except AnnotationError as err:
            raise err.with_location(lineno=lineno, path=source_path) from None
    return FrameAnnotations(frame_id, tuple(detections), source_path)


def format_number(value: float) -> str:
    """Six fractional digits, widened to ``repr`` when six would not round-trip."""
    text = f"{value:.6f}"
    if float(text) == value:
        return text
    return repr(float(value))


def serialize_label_file(frame: FrameAnnotations, mode: Mode | str) -> str:
    mode = _mode(mode)
    lines = []
    for det in frame.detections:
        b = det.box
        fields = [str(det.category.index)] + [format_number(v) for v in (b.cx, b.cy, b.w, b.h)]
        if mode is Mode.PREDICTION:
            if det.confidence is None:
                raise AnnotationError(f"frame {frame.frame_id}: prediction without confidence")
            fields.append(format_number(det.confidence))
        lines.append(" ".join(fields))
    return "".join(line + "\n" for line in lines)


def detect_mode(content: str) -> Mode:
    """Guess the parse mode from the first non-blank line's field count."""
    for line in content.splitlines():
        if line.strip():
            return Mode.PREDICTION if len(line.split()) == 6 else Mode.GROUND_TRUTH
    return Mode.GROUND_TRUTH


def read_label_file(path: str | Path, mode: Mode | str | None,
                    names: Sequence[str] = DEFAULT_NAMES) -> FrameAnnotations:
    path = Path(path)
    content = path.read_text(encoding="utf-8")
    if mode is None:
        mode = detect_mode(content)
    return parse_label_file(content, path.stem, mode, names, source_path=str(path))


def find_names_file(directory: str | Path) -> Path | None:
    for candidate in NAMES_FILES:
        p = Path(directory) / candidate
        if p.is_file():
            return p
    return None


def label_paths(directory: str | Path) -> list[Path]:
    """Label files of a directory in frame order (sorted by file name)."""
    directory = Path(directory)
    return sorted(p for p in directory.glob("*.txt") if p.is_file() and p.name not in NAMES_FILES)


def read_label_dir(directory: str | Path, mode: Mode | str | None,
                   names: Sequence[str] | None = None) -> tuple[list[FrameAnnotations], tuple[str, ...]]:
    """Read every label file of a directory. ``mode=None`` detects it per file."""
    directory = Path(directory)
    if not directory.is_dir():
        raise AnnotationError(f"{directory}: not a directory")
    if names is None:
        names_path = find_names_file(directory)
        names = parse_names(names_path.read_text(encoding="utf-8")) if names_path else DEFAULT_NAMES
    names = tuple(names)
    frames = [read_label_file(p, mode, names) for p in label_paths(directory)]
    return frames, names


def write_label_dir(frames: Iterable[FrameAnnotations], directory: str | Path, mode: Mode | str) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for frame in frames:
        path = directory / f"{frame.frame_id}.txt"
        path.write_text(serialize_label_file(frame, mode), encoding="utf-8")
        written.append(path)
    return written

