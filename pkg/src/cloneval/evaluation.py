"""Cross-validation, classification metrics, ROC/PR curves, feature scoring.

All reports are plain dataclasses with text/CSV renderers; floating-point
output is fixed at six decimal places so identical runs are byte-identical.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InsufficientData, LengthMismatch, SingleClassLabels
from .features import FeatureVector
from .fragments import Label
from .models import Prediction, TrainingSet, decide, make_classifier

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MetricsReport:
    tp: int
    fp: int
    tn: int
    fn: int
    accuracy: float
    precision: float
    recall: float
    f1: float
    tp_rate: float
    fp_rate: float
    gamma: float
    undefined: tuple[str, ...] = ()  # metrics whose denominator was zero

    METRIC_FIELDS = ("accuracy", "precision", "recall", "f1", "tp_rate", "fp_rate")

    def to_text(self) -> str:
        parts = [f"confusion TP={self.tp} FP={self.fp} TN={self.tn} FN={self.fn}"]
        for name in self.METRIC_FIELDS:
            parts.append(f"{name}={getattr(self, name):.6f}")
        if self.undefined:
            parts.append(f"undefined={','.join(self.undefined)}")
        return " ".join(parts)


def compute_metrics(
    predictions: Sequence[Prediction], labels: Sequence[Label], gamma: float = 0.5
) -> MetricsReport:
    """Confusion counts and derived metrics at the given decision threshold.

    Zero-denominator metrics come back as 0.0 and are named in `undefined`.
    """
    if len(predictions) != len(labels):
        raise LengthMismatch(f"{len(predictions)} predictions vs {len(labels)} labels")
    tp = fp = tn = fn = 0
    for prediction, label in zip(predictions, labels):
        decision = decide(prediction, gamma)
        if decision is Label.TRUE_POSITIVE:
            if label is Label.TRUE_POSITIVE:
                tp += 1
            else:
                fp += 1
        else:
            if label is Label.TRUE_POSITIVE:
                fn += 1
            else:
                tn += 1

    undefined = []

    def ratio(num: int, den: int, name: str) -> float:
        if den == 0:
            undefined.append(name)
            return 0.0
        return num / den

    total = tp + fp + tn + fn
    accuracy = ratio(tp + tn, total, "accuracy")
    precision = ratio(tp, tp + fp, "precision")
    recall = ratio(tp, tp + fn, "recall")
    if precision + recall == 0.0:
        undefined.append("f1")
        f1 = 0.0
    else:
        f1 = 2 * precision * recall / (precision + recall)
    tp_rate = ratio(tp, tp + fn, "tp_rate")
    fp_rate = ratio(fp, fp + tn, "fp_rate")
    return MetricsReport(
        tp, fp, tn, fn, accuracy, precision, recall, f1, tp_rate, fp_rate, gamma,
        tuple(dict.fromkeys(undefined)),
    )


# ---------------------------------------------------------------------------
# Threshold-swept curves


@dataclass(frozen=True)
class CurvePoint:
    threshold: float
    x: float  # ROC: fp_rate, PR: recall
    y: float  # ROC: tp_rate, PR: precision


@dataclass(frozen=True)
class CurveReport:
    kind: str  # "roc" | "pr"
    points: tuple[CurvePoint, ...]
    auc: float

    def write_csv(self, stream) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        x_name, y_name = ("fp_rate", "tp_rate") if self.kind == "roc" else ("recall", "precision")
        writer.writerow(["threshold", x_name, y_name])
        for point in self.points:
            writer.writerow([f"{point.threshold:.6f}", f"{point.x:.6f}", f"{point.y:.6f}"])


def _sweep_thresholds(scores: list[float]) -> list[float]:
    distinct = sorted(set(scores) | {0.0, 1.0}, reverse=True)
    if max(scores) >= 1.0:
        # need one threshold above every score so the sweep reaches (0, 0)
        distinct.insert(0, math.inf)
    return distinct


def curve_and_auc(
    predictions: Sequence[Prediction], labels: Sequence[Label], kind: str = "roc"
) -> CurveReport:
    """Threshold-swept ROC or PR curve with trapezoidal AUC.

    Sweeps every distinct score plus {0, 1}; raises SingleClassLabels unless
    both labels are present.
    """
    if kind not in ("roc", "pr"):
        raise ValueError(f"curve kind must be 'roc' or 'pr', got {kind!r}")
    if len(predictions) != len(labels):
        raise LengthMismatch(f"{len(predictions)} predictions vs {len(labels)} labels")
    scores = [p.prob_true for p in predictions]
    positive = [label is Label.TRUE_POSITIVE for label in labels]
    n_pos = sum(positive)
    n_neg = len(positive) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClassLabels("curves need both TP and FP ground-truth labels")

    points: list[CurvePoint] = []
    for threshold in _sweep_thresholds(scores):
        tp = sum(1 for s, pos in zip(scores, positive) if pos and s >= threshold)
        fp = sum(1 for s, pos in zip(scores, positive) if not pos and s >= threshold)
        if kind == "roc":
            points.append(CurvePoint(threshold, fp / n_neg, tp / n_pos))
        else:
            precision = tp / (tp + fp) if tp + fp else 1.0
            points.append(CurvePoint(threshold, tp / n_pos, precision))

    auc = 0.0
    for a, b in zip(points, points[1:]):
        auc += (b.x - a.x) * (a.y + b.y) / 2.0
    return CurveReport(kind, tuple(points), auc)


def recommend_gamma(roc: CurveReport) -> float:
    """The threshold maximizing Youden's J (tp_rate - fp_rate).

    The optimal J is generally attained on a plateau of thresholds; ties
    break toward 0.5: return 0.5 when it lies strictly inside the optimal
    plateau, otherwise the midpoint of the plateau interval nearest 0.5.
    """
    if roc.kind != "roc":
        raise ValueError("recommend_gamma needs a ROC curve")
    # Points are threshold-descending. Threshold t_i governs gammas in
    # (t_below, t_i]; the lowest swept threshold governs [0, t_m].
    best_j = max(p.y - p.x for p in roc.points)
    intervals: list[tuple[float, float]] = []
    pts = list(roc.points)
    for idx, point in enumerate(pts):
        if point.y - point.x < best_j - 1e-12:
            continue
        hi = min(point.threshold, 1.0)
        lo = pts[idx + 1].threshold if idx + 1 < len(pts) else 0.0
        if lo >= hi:
            continue  # degenerate: no gamma of its own
        intervals.append((lo, hi))
    merged: list[list[float]] = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1] + 1e-15:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    if not merged:
        return 0.5
    for lo, hi in merged:
        if lo < 0.5 < hi:
            return 0.5
    lo, hi = min(merged, key=lambda iv: abs((iv[0] + iv[1]) / 2.0 - 0.5))
    return (lo + hi) / 2.0


# ---------------------------------------------------------------------------
# k-fold cross-validation


@dataclass(frozen=True)
class CVReport:
    k: int
    seed: int
    fold_metrics: tuple[MetricsReport, ...]
    means: dict
    stds: dict
    epoch_accuracy_trace: tuple[float, ...]  # averaged over folds; empty for non-NN

    @property
    def mean_accuracy(self) -> float:
        return self.means["accuracy"]

    def to_text(self) -> str:
        out = io.StringIO()
        out.write(f"{self.k}-fold cross-validation (seed {self.seed})\n")
        for idx, metrics in enumerate(self.fold_metrics):
            out.write(f"fold {idx}: {metrics.to_text()}\n")
        for name in MetricsReport.METRIC_FIELDS:
            out.write(f"mean {name}={self.means[name]:.6f} std={self.stds[name]:.6f}\n")
        return out.getvalue()


def stratified_folds(labels: Sequence[Label], k: int, seed: int) -> list[list[int]]:
    """Seeded, stratified fold assignment with globally balanced sizes.

    A single round-robin pointer runs across both classes, so fold sizes
    differ by at most one overall, not just per class.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    folds: list[list[int]] = [[] for _ in range(k)]
    pointer = 0
    for wanted in (Label.TRUE_POSITIVE, Label.FALSE_POSITIVE):
        indices = [i for i, label in enumerate(labels) if label is wanted]
        indices = [indices[j] for j in rng.permutation(len(indices))]
        for idx in indices:
            folds[pointer % k].append(idx)
            pointer += 1
    return folds


def k_fold_cross_validate(
    ts: TrainingSet,
    k: int = 10,
    model_config: dict | None = None,
    seed: int = 0,
    gamma: float = 0.5,
) -> CVReport:
    """Train/test over stratified folds; per-fold models seed as seed+fold."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if len(ts) < k:
        raise InsufficientData(f"dataset of {len(ts)} rows cannot split into {k} folds")
    ts.require_both_classes()
    model_config = dict(model_config or {"model": "nn"})

    folds = stratified_folds(ts.labels(), k, seed)
    fold_reports: list[MetricsReport] = []
    traces: list[list[float]] = []
    for fold_index, test_idx in enumerate(folds):
        train_idx = [i for i in range(len(ts)) if i not in set(test_idx)]
        train_ts = ts.subset(train_idx)
        test_ts = ts.subset(test_idx)
        config = dict(model_config)
        config["seed"] = seed + fold_index
        model = make_classifier(config)
        model.fit(train_ts, eval_set=test_ts)
        probs = model.predict_proba(test_ts.X)
        predictions = [Prediction(float(p[0]), float(p[1])) for p in probs]
        test_labels = test_ts.labels()
        if len(set(test_labels)) < 2:
            log.warning("fold %d holds a single class; precision may be undefined", fold_index)
        fold_reports.append(compute_metrics(predictions, test_labels, gamma))
        trace = getattr(model, "eval_accuracy_trace_", None)
        if trace:
            traces.append(trace)

    means = {}
    stds = {}
    for name in MetricsReport.METRIC_FIELDS:
        values = np.array([getattr(r, name) for r in fold_reports])
        means[name] = float(values.mean())
        stds[name] = float(values.std())

    averaged_trace: tuple[float, ...] = ()
    if traces:
        longest = max(len(t) for t in traces)
        averaged = []
        for epoch in range(longest):
            at_epoch = [t[epoch] for t in traces if epoch < len(t)]
            averaged.append(sum(at_epoch) / len(at_epoch))
        averaged_trace = tuple(averaged)

    return CVReport(k, seed, tuple(fold_reports), means, stds, averaged_trace)


# ---------------------------------------------------------------------------
# Chi-squared feature scores


def _merge_empty_bins(counts: np.ndarray) -> np.ndarray:
    """Drop all-empty bins; merging a zero column into a neighbor is a no-op
    for the statistic, so this is the empty-bin merge."""
    totals = counts.sum(axis=0)
    keep = [i for i in range(counts.shape[1]) if totals[i] > 0]
    if not keep:
        return counts[:, :1]
    return counts[:, keep].copy()


def chi_squared_feature_scores(ts: TrainingSet, bins: int = 10) -> list[tuple[str, float]]:
    """Per-feature chi-squared association with the class, scaled to [0, 1].

    Features are discretized into equal-width bins over their observed range
    (empty bins dropped, which is equivalent to merging them into a
    neighbor for the statistic). Constant features score 0.
    """
    ts.require_both_classes()
    labels = np.array([1 if row[0] == 1 else 0 for row in ts.y])
    raw_scores: list[float] = []
    for col in range(ts.n_features):
        values = ts.X[:, col]
        lo, hi = float(values.min()), float(values.max())
        if hi <= lo:
            raw_scores.append(0.0)
            continue
        width = (hi - lo) / bins
        bin_index = np.minimum(((values - lo) / width).astype(int), bins - 1)
        counts = np.zeros((2, bins))
        for b, is_tp in zip(bin_index, labels):
            counts[is_tp, b] += 1
        counts = _merge_empty_bins(counts)
        total = counts.sum()
        row_totals = counts.sum(axis=1, keepdims=True)
        col_totals = counts.sum(axis=0, keepdims=True)
        expected = row_totals @ col_totals / total
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(expected > 0, (counts - expected) ** 2 / expected, 0.0)
        raw_scores.append(float(terms.sum()))
    top = max(raw_scores)
    if top == 0.0:
        return list(zip(ts.feature_names, raw_scores))
    return [(name, score / top) for name, score in zip(ts.feature_names, raw_scores)]


# ---------------------------------------------------------------------------
# Per-clone-type result export


def export_type_space(
    features: Sequence[FeatureVector],
    predictions: Sequence[Prediction],
    labels: Sequence[Label],
    gamma: float = 0.5,
) -> list[tuple[float, float, float, str, bool]]:
    """(lineSimT1, lineSimT2, lineSimT3, decision, correct) per pair."""
    if not (len(features) == len(predictions) == len(labels)):
        raise LengthMismatch("features, predictions and labels must align")
    rows = []
    for fv, prediction, label in zip(features, predictions, labels):
        decision = decide(prediction, gamma)
        rows.append(
            (
                fv["line_sim_t1"],
                fv["line_sim_t2"],
                fv["line_sim_t3"],
                decision.value,
                decision is label,
            )
        )
    return rows


def write_type_space_csv(rows, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["line_sim_t1", "line_sim_t2", "line_sim_t3", "decision", "correct"])
    for t1, t2, t3, decision, correct in rows:
        writer.writerow([f"{t1:.6f}", f"{t2:.6f}", f"{t3:.6f}", decision, str(correct).lower()])
