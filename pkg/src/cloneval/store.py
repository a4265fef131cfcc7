"""File-backed clone-pair store with label history and training-set assembly.

One newline-delimited JSON document per record; every mutation appends the
full updated record, and loading replays the file last-write-wins. A single
lock serializes writers; readers work from the in-memory index.
"""

from __future__ import annotations

import csv
import hashlib
import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Sequence

from .errors import MissingSourceFile, UnknownPair
from .features import FeatureVector, extract_features
from .fragments import ClonePair, CodeFragment, Label
from .models import TrainingSet

GENERIC_HEADER = ["file1", "start1", "end1", "file2", "start2", "end2", "detector", "lang"]
INLINE_HEADER = ["code1", "code2", "detector", "lang"]

SOURCE_DETECTOR = "detector-import"
SOURCE_BENCH = "mutation-bench"
SOURCE_FEEDBACK = "api-feedback"


def _iso_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass(frozen=True)
class LabelEvent:
    labeler: str
    label: Label
    at: str


@dataclass
class StoreRecord:
    pair_id: str
    fragment1: CodeFragment
    fragment2: CodeFragment
    detector: str | None
    source: str
    created_at: str
    history: list[LabelEvent] = field(default_factory=list)

    @property
    def current_label(self) -> Label:
        return self.history[-1].label if self.history else Label.UNLABELED

    @property
    def current_labeler(self) -> str | None:
        return self.history[-1].labeler if self.history else None

    def to_pair(self) -> ClonePair:
        label = self.current_label
        return ClonePair(
            id=self.pair_id,
            fragment1=self.fragment1,
            fragment2=self.fragment2,
            detector=self.detector,
            label=label,
            labeler=self.current_labeler if label is not Label.UNLABELED else None,
            labeled_at=self.history[-1].at if self.history else None,
        )

    def to_json(self) -> dict:
        def frag(f: CodeFragment) -> dict:
            return {
                "text": f.source_text,
                "path": f.file_path,
                "start": f.start_line,
                "end": f.end_line,
                "lang": f.language,
            }

        return {
            "id": self.pair_id,
            "created_at": self.created_at,
            "source": self.source,
            "detector": self.detector,
            "frag1": frag(self.fragment1),
            "frag2": frag(self.fragment2),
            "history": [[e.labeler, e.label.value, e.at] for e in self.history],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "StoreRecord":
        def frag(payload: dict) -> CodeFragment:
            return CodeFragment(
                source_text=payload["text"],
                file_path=payload.get("path"),
                start_line=payload.get("start", 1),
                end_line=payload.get("end"),
                language=payload.get("lang", "Java"),
            )

        return cls(
            pair_id=doc["id"],
            fragment1=frag(doc["frag1"]),
            fragment2=frag(doc["frag2"]),
            detector=doc.get("detector"),
            source=doc.get("source", SOURCE_DETECTOR),
            created_at=doc.get("created_at", ""),
            history=[
                LabelEvent(labeler, Label.parse(label), at)
                for labeler, label, at in doc.get("history", [])
            ],
        )


@dataclass(frozen=True)
class ImportSpec:
    format: str  # "generic-csv" | "pairs-directory"
    path: str
    detector: str | None = None
    lang: str = "Java"


@dataclass
class ImportReport:
    imported: int = 0
    deduplicated: int = 0
    malformed: int = 0
    messages: list[str] = field(default_factory=list)


def _dedup_key(f1: CodeFragment, f2: CodeFragment) -> tuple:
    if f1.file_path and f2.file_path:
        return (f1.file_path, f1.start_line, f1.end_line, f2.file_path, f2.start_line, f2.end_line)
    digest1 = hashlib.sha256(f1.source_text.encode("utf-8")).hexdigest()
    digest2 = hashlib.sha256(f2.source_text.encode("utf-8")).hexdigest()
    return (digest1, digest2)


class CloneStore:
    """Single-writer, multi-reader clone-pair database."""

    def __init__(self, path: str | Path, clock: Callable[[], str] = _iso_now):
        self.path = Path(path)
        self._clock = clock
        self._lock = threading.Lock()
        self._records: dict[str, StoreRecord] = {}
        self._keys: dict[tuple, str] = {}
        self._feature_cache: dict[tuple, FeatureVector] = {}
        if self.path.exists():
            self._load()

    def _load(self) -> None:
        with open(self.path, "r", encoding="utf-8") as stream:
            for line in stream:
                line = line.strip()
                if not line:
                    continue
                record = StoreRecord.from_json(json.loads(line))
                self._records[record.pair_id] = record
        for record in self._records.values():
            self._keys[_dedup_key(record.fragment1, record.fragment2)] = record.pair_id

    def _append(self, record: StoreRecord) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as stream:
            stream.write(json.dumps(record.to_json()) + "\n")

    # -- writes ---------------------------------------------------------------

    def add_pair(self, pair: ClonePair, source: str = SOURCE_DETECTOR) -> tuple[StoreRecord, bool]:
        """Insert a pair unless an identical provenance tuple already exists.

        Returns (record, was_new). A labeled incoming pair lands with one
        history entry.
        """
        with self._lock:
            key = _dedup_key(pair.fragment1, pair.fragment2)
            existing_id = self._keys.get(key)
            if existing_id is not None:
                return self._records[existing_id], False
            history = []
            if pair.label is not Label.UNLABELED:
                history.append(LabelEvent(pair.labeler, pair.label, pair.labeled_at or self._clock()))
            record = StoreRecord(
                pair_id=pair.id,
                fragment1=pair.fragment1,
                fragment2=pair.fragment2,
                detector=pair.detector,
                source=source,
                created_at=self._clock(),
                history=history,
            )
            self._records[record.pair_id] = record
            self._keys[key] = record.pair_id
            self._append(record)
            return record, True

    def record_label(self, pair_id: str, labeler: str, label: Label) -> StoreRecord:
        """Append a label event; identical consecutive entries are no-ops."""
        if label is Label.UNLABELED:
            raise ValueError("cannot record an UNLABELED label")
        with self._lock:
            record = self._records.get(pair_id)
            if record is None:
                raise UnknownPair(pair_id)
            if record.history:
                last = record.history[-1]
                if last.labeler == labeler and last.label == label:
                    return record
            record.history.append(LabelEvent(labeler, label, self._clock()))
            self._append(record)
            return record

    # -- reads ----------------------------------------------------------------

    def __len__(self) -> int:
        return len(self._records)

    def get(self, pair_id: str) -> StoreRecord:
        record = self._records.get(pair_id)
        if record is None:
            raise UnknownPair(pair_id)
        return record

    def records(self) -> list[StoreRecord]:
        return list(self._records.values())

    def unlabeled(self) -> list[StoreRecord]:
        return [r for r in self._records.values() if r.current_label is Label.UNLABELED]

    def labeled(
        self,
        labelers: Sequence[str] | None = None,
        detectors: Sequence[str] | None = None,
        sources: Sequence[str] | None = None,
    ) -> list[StoreRecord]:
        out = []
        for record in self._records.values():
            if record.current_label is Label.UNLABELED:
                continue
            if labelers and record.current_labeler not in labelers:
                continue
            if detectors and record.detector not in detectors:
                continue
            if sources and record.source not in sources:
                continue
            out.append(record)
        return out

    def partitions(self) -> tuple[list[str], list[str], list[str]]:
        """Disjoint (true, false, unlabeled) pair-id partitions of the store."""
        kt, kf, rest = [], [], []
        for record in self._records.values():
            label = record.current_label
            if label is Label.TRUE_POSITIVE:
                kt.append(record.pair_id)
            elif label is Label.FALSE_POSITIVE:
                kf.append(record.pair_id)
            else:
                rest.append(record.pair_id)
        return kt, kf, rest

    # -- feature assembly -------------------------------------------------------

    def features_for(self, record: StoreRecord, include_extras: bool = False) -> FeatureVector:
        key = (
            hashlib.sha256(record.fragment1.source_text.encode("utf-8")).hexdigest(),
            hashlib.sha256(record.fragment2.source_text.encode("utf-8")).hexdigest(),
            include_extras,
        )
        cached = self._feature_cache.get(key)
        if cached is None:
            cached = extract_features(record.to_pair(), include_extras=include_extras)
            self._feature_cache[key] = cached
        return cached

    def assemble_training_set(
        self,
        labelers: Sequence[str] | None = None,
        detectors: Sequence[str] | None = None,
        sources: Sequence[str] | None = None,
        include_extras: bool = False,
    ) -> TrainingSet | None:
        """Labeled records matching the filter, in stable id order.

        Returns None when nothing matches (an empty store is not an error).
        """
        matched = sorted(self.labeled(labelers, detectors, sources), key=lambda r: r.pair_id)
        if not matched:
            return None
        rows = [
            (r.pair_id, self.features_for(r, include_extras), r.current_label) for r in matched
        ]
        return TrainingSet.from_feature_rows(rows)

    # -- imports ------------------------------------------------------------------

    def import_pairs(self, spec: ImportSpec) -> ImportReport:
        if spec.format == "generic-csv":
            return self._import_generic_csv(spec)
        if spec.format == "pairs-directory":
            return self._import_pairs_directory(spec)
        raise ValueError(f"unknown import format {spec.format!r}")

    def _next_import_id(self, prefix: str) -> str:
        index = len(self._records)
        while f"{prefix}-{index:05d}" in self._records:
            index += 1
        return f"{prefix}-{index:05d}"

    def _import_generic_csv(self, spec: ImportSpec) -> ImportReport:
        report = ImportReport()
        csv_path = Path(spec.path)
        with open(csv_path, "r", encoding="utf-8", newline="") as stream:
            reader = csv.reader(stream)
            header = next(reader, None)
            if header == GENERIC_HEADER:
                inline = False
            elif header == INLINE_HEADER:
                inline = True
            else:
                raise ValueError(f"unrecognized CSV header: {header}")
            for row_number, row in enumerate(reader, start=2):
                if not row:
                    continue
                try:
                    if inline:
                        code1, code2, detector, lang = row
                        f1 = CodeFragment(code1, language=lang or spec.lang)
                        f2 = CodeFragment(code2, language=lang or spec.lang)
                    else:
                        file1, start1, end1, file2, start2, end2, detector, lang = row
                        f1 = self._materialize(csv_path.parent, file1, int(start1), int(end1), lang or spec.lang)
                        f2 = self._materialize(csv_path.parent, file2, int(start2), int(end2), lang or spec.lang)
                except MissingSourceFile:
                    raise
                except (ValueError, IndexError) as exc:
                    report.malformed += 1
                    report.messages.append(f"row {row_number}: {exc}")
                    continue
                pair = ClonePair(
                    id=self._next_import_id("imp"),
                    fragment1=f1,
                    fragment2=f2,
                    detector=detector or spec.detector,
                )
                _, was_new = self.add_pair(pair, source=SOURCE_DETECTOR)
                if was_new:
                    report.imported += 1
                else:
                    report.deduplicated += 1
        return report

    @staticmethod
    def _materialize(base: Path, file_path: str, start: int, end: int, lang: str) -> CodeFragment:
        candidate = Path(file_path)
        if not candidate.is_absolute():
            candidate = base / candidate
        if not candidate.exists():
            raise MissingSourceFile(f"source file not found: {file_path}")
        all_lines = candidate.read_text(encoding="utf-8").splitlines()
        if not 1 <= start <= end <= len(all_lines):
            raise ValueError(f"line range {start}-{end} outside {file_path}")
        text = "\n".join(all_lines[start - 1 : end])
        return CodeFragment(text, file_path=file_path, start_line=start, end_line=end, language=lang)

    def _import_pairs_directory(self, spec: ImportSpec) -> ImportReport:
        from .mutation import BENCH_LABELER  # local import to avoid a cycle

        report = ImportReport()
        root = Path(spec.path)
        manifest_path = root / "manifest.csv"
        if not manifest_path.exists():
            raise MissingSourceFile(f"no manifest.csv under {root}")
        with open(manifest_path, "r", encoding="utf-8", newline="") as stream:
            reader = csv.DictReader(stream)
            for row in reader:
                pair_id = row.get("id", "")
                pair_dir = root / "pairs" / pair_id
                try:
                    text_a = (pair_dir / "a.java").read_text(encoding="utf-8")
                    text_b = (pair_dir / "b.java").read_text(encoding="utf-8")
                    label = Label.parse(row["label"])
                except (OSError, KeyError, ValueError) as exc:
                    report.malformed += 1
                    report.messages.append(f"pair {pair_id}: {exc}")
                    continue
                pair = ClonePair(
                    id=pair_id,
                    fragment1=CodeFragment(text_a, file_path=str(pair_dir / "a.java"), language=spec.lang),
                    fragment2=CodeFragment(text_b, file_path=str(pair_dir / "b.java"), language=spec.lang),
                    detector=spec.detector or BENCH_LABELER,
                    label=label if label is not Label.UNLABELED else Label.UNLABELED,
                    labeler=BENCH_LABELER if label is not Label.UNLABELED else None,
                )
                _, was_new = self.add_pair(pair, source=SOURCE_BENCH)
                if was_new:
                    report.imported += 1
                else:
                    report.deduplicated += 1
        return report

    # -- exports ---------------------------------------------------------------

    def export_pairs_csv(self, stream) -> None:
        """Re-emit the store as a generic CSV (file variant when possible)."""
        records = self.records()
        file_based = all(
            r.fragment1.file_path and r.fragment2.file_path for r in records
        ) and bool(records)
        writer = csv.writer(stream, lineterminator="\n")
        if file_based:
            writer.writerow(GENERIC_HEADER)
            for r in records:
                writer.writerow(
                    [
                        r.fragment1.file_path,
                        r.fragment1.start_line,
                        r.fragment1.end_line,
                        r.fragment2.file_path,
                        r.fragment2.start_line,
                        r.fragment2.end_line,
                        r.detector or "",
                        r.fragment1.language,
                    ]
                )
        else:
            writer.writerow(INLINE_HEADER)
            for r in records:
                writer.writerow(
                    [
                        r.fragment1.source_text,
                        r.fragment2.source_text,
                        r.detector or "",
                        r.fragment1.language,
                    ]
                )
