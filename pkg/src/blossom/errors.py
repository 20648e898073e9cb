"""Exception types raised by blossom."""
from __future__ import annotations


class BlossomError(Exception):
    """Base class for every error raised by this package."""


class AnnotationError(BlossomError, ValueError):
    """A label line or file could not be turned into detections."""

    def __init__(self, message: str, line: str | None = None, lineno: int | None = None,
                 field: int | None = None, path: str | None = None):
        self.message = message
        self.line = line
        self.lineno = lineno
        self.field = field
        self.path = path
        super().__init__(str(self))

    def with_location(self, lineno: int | None = None, path: str | None = None) -> "AnnotationError":
        err = type(self)(self.message, self.line, lineno if lineno is not None else self.lineno,
                         self.field, path if path is not None else self.path)
        return err

    def __str__(self) -> str:
        where = []
        if self.path is not None:
            where.append(self.path)
        if self.lineno is not None:
            where.append(f"line {self.lineno}")
        if self.field is not None:
            where.append(f"field {self.field}")
        prefix = ":".join(where)
        text = f"{prefix}: {self.message}" if prefix else self.message
        if self.line is not None:
            text += f" [{self.line!r}]"
        return text


class MalformedLine(AnnotationError):
    """Wrong field count for the parse mode, or a token that is not a number."""


class OutOfRange(AnnotationError):
    """A parsed value violates the bounding-box or confidence invariants."""


class ClusteringError(BlossomError, ValueError):
    pass


class InvalidK(ClusteringError):
    pass


class EmptyInput(ClusteringError):
    pass


class SingleCluster(ClusteringError):
    """Silhouette is undefined when every point shares one cluster."""


class EvaluationError(BlossomError, ValueError):
    pass


class MissingConfidence(EvaluationError):
    pass


class NoCategories(EvaluationError):
    pass


class FrameIdMismatch(EvaluationError):
    pass


class InfeasibleSpec(BlossomError, ValueError):
    """Cluster centers could not be placed at the requested separation."""


class FrameError(BlossomError):
    """Processing of one frame failed; ``frame_id`` names it."""

    def __init__(self, frame_id: str, cause: Exception):
        self.frame_id = frame_id
        self.cause = cause
        super().__init__(f"frame {frame_id!r}: {cause}")
