"""Core domain records: code fragments, clone pairs, and labels."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import UnsupportedLanguage

SUPPORTED_LANGUAGES = frozenset({"java"})


class Label(str, Enum):
    TRUE_POSITIVE = "TP"
    FALSE_POSITIVE = "FP"
    UNLABELED = "UNLABELED"

    @classmethod
    def parse(cls, value: str) -> "Label":
        normalized = value.strip().upper()
        aliases = {
            "TP": cls.TRUE_POSITIVE,
            "TRUE": cls.TRUE_POSITIVE,
            "TRUE_POSITIVE": cls.TRUE_POSITIVE,
            "TRUEPOSITIVE": cls.TRUE_POSITIVE,
            "FP": cls.FALSE_POSITIVE,
            "FALSE": cls.FALSE_POSITIVE,
            "FALSE_POSITIVE": cls.FALSE_POSITIVE,
            "FALSEPOSITIVE": cls.FALSE_POSITIVE,
            "UNLABELED": cls.UNLABELED,
        }
        if normalized not in aliases:
            raise ValueError(f"not a clone label: {value!r}")
        return aliases[normalized]


@dataclass(frozen=True)
class CodeFragment:
    """One code region under judgment, with optional file provenance."""

    source_text: str
    file_path: str | None = None
    start_line: int = 1
    end_line: int | None = None
    language: str = "Java"

    def __post_init__(self):
        if self.end_line is None:
            lines = max(1, self.source_text.count("\n") + 1)
            object.__setattr__(self, "end_line", self.start_line + lines - 1)
        if self.end_line < self.start_line:
            raise ValueError("end_line must be >= start_line")

    def require_supported_language(self) -> None:
        if self.language.lower() not in SUPPORTED_LANGUAGES:
            raise UnsupportedLanguage(self.language)

    @property
    def line_count(self) -> int:
        """Raw (pre-normalization) line count of the fragment text."""
        return len(self.source_text.splitlines()) if self.source_text else 0


@dataclass(frozen=True)
class ClonePair:
    """A detector-reported pair of fragments, possibly human-labeled."""

    id: str
    fragment1: CodeFragment
    fragment2: CodeFragment
    detector: str | None = None
    label: Label = Label.UNLABELED
    labeler: str | None = None
    labeled_at: str | None = None

    def __post_init__(self):
        if self.fragment1.language.lower() != self.fragment2.language.lower():
            raise ValueError("both fragments of a pair must share one language")
        if self.label is not Label.UNLABELED and self.labeler is None:
            raise ValueError("a labeled pair must carry its labeler")
        if self.label is Label.UNLABELED and self.labeler is not None:
            raise ValueError("an unlabeled pair cannot carry a labeler")

    def with_label(self, label: Label, labeler: str, labeled_at: str | None = None) -> "ClonePair":
        return ClonePair(
            id=self.id,
            fragment1=self.fragment1,
            fragment2=self.fragment2,
            detector=self.detector,
            label=label,
            labeler=labeler,
            labeled_at=labeled_at,
        )
