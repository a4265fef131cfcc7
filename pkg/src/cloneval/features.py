"""Feature extraction for clone pairs and the class-distribution report.

The default vector holds the eight selected features, in this fixed order:

    line_sim_t1, line_sim_t2, line_sim_t3,
    token_sim_t2, token_sim_t1, token_sim_t3,
    functions_intersected, unmatched_braces

Two optional extras (avg_size, size_diff over raw line counts) can be
appended; they are off by default because their class distributions overlap
almost completely.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass

from .diffs import fragment_similarity
from .errors import EmptyFragment, InsufficientClasses
from .fragments import ClonePair, CodeFragment, Label
from .normalize import NormalizationLevel, normalize
from .tokens import Token, TokenKind, tokenize

log = logging.getLogger(__name__)

FEATURE_NAMES: tuple[str, ...] = (
    "line_sim_t1",
    "line_sim_t2",
    "line_sim_t3",
    "token_sim_t2",
    "token_sim_t1",
    "token_sim_t3",
    "functions_intersected",
    "unmatched_braces",
)
EXTRA_FEATURE_NAMES: tuple[str, ...] = ("avg_size", "size_diff")


@dataclass(frozen=True)
class FeatureVector:
    names: tuple[str, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.names) != len(self.values):
            raise ValueError("feature names and values must align")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, name: str) -> float:
        return self.values[self.names.index(name)]

    def as_list(self) -> list[float]:
        return list(self.values)


def feature_names(include_extras: bool = False) -> tuple[str, ...]:
    return FEATURE_NAMES + EXTRA_FEATURE_NAMES if include_extras else FEATURE_NAMES


def _similarity_or_zero(n1, n2, granularity) -> float:
    try:
        return fragment_similarity(n1, n2, granularity).value
    except EmptyFragment:
        log.warning(
            "degenerate fragment pair at level %s / %s granularity, scoring 0.0",
            n1.level.name,
            granularity,
        )
        return 0.0


def extract_features(pair: ClonePair, include_extras: bool = False) -> FeatureVector:
    """Build the classifier input vector for one clone pair.

    Raises EmptyFragment when either fragment has empty source text; a
    fragment that merely normalizes to nothing at some level scores 0.0 for
    that level with a warning.
    """
    if not pair.fragment1.source_text or not pair.fragment2.source_text:
        raise EmptyFragment(f"pair {pair.id} carries an empty fragment")

    norms1 = {level: normalize(pair.fragment1, level) for level in NormalizationLevel}
    norms2 = {level: normalize(pair.fragment2, level) for level in NormalizationLevel}

    t1, t2, t3 = NormalizationLevel.TYPE1, NormalizationLevel.TYPE2, NormalizationLevel.TYPE3
    values = [
        _similarity_or_zero(norms1[t1], norms2[t1], "line"),
        _similarity_or_zero(norms1[t2], norms2[t2], "line"),
        _similarity_or_zero(norms1[t3], norms2[t3], "line"),
        _similarity_or_zero(norms1[t2], norms2[t2], "token"),
        _similarity_or_zero(norms1[t1], norms2[t1], "token"),
        _similarity_or_zero(norms1[t3], norms2[t3], "token"),
        float(functions_intersected(pair)),
        float(count_unmatched_braces(pair.fragment1, pair.fragment2)),
    ]
    names = FEATURE_NAMES
    if include_extras:
        alpha = pair.fragment1.line_count
        beta = pair.fragment2.line_count
        values += [(alpha + beta) / 2.0, float(abs(alpha - beta))]
        names = FEATURE_NAMES + EXTRA_FEATURE_NAMES
    return FeatureVector(names, tuple(values))


def _brace_scan(fragment: CodeFragment) -> tuple[int, int]:
    """(opens without a close, closes without an open) over code tokens."""
    depth = 0
    unmatched_close = 0
    for token in tokenize(fragment.source_text):
        if not token.is_code():
            continue
        if token.text == "{":
            depth += 1
        elif token.text == "}":
            if depth > 0:
                depth -= 1
            else:
                unmatched_close += 1
    return depth, unmatched_close


def count_unmatched_braces(f1: CodeFragment, f2: CodeFragment) -> int:
    """Unbalanced braces summed over both fragments, literals/comments excluded."""
    total = 0
    for fragment in (f1, f2):
        opens, closes = _brace_scan(fragment)
        total += opens + closes
    return total


def _method_headers(code: list[Token]) -> list[tuple[int, int]]:
    """(index of the body's '{', depth before it) for each method-like header.

    Header shape: identifier '(' ... ')' [throws clause] '{'. Keyword-led
    parenthesized statements (if/for/while/switch/catch/synchronized) never
    match because their lead token is a keyword.
    """
    headers = []
    depth = 0
    i = 0
    n = len(code)
    while i < n:
        token = code[i]
        if token.kind == TokenKind.IDENTIFIER and i + 1 < n and code[i + 1].text == "(":
            j = i + 1
            paren_depth = 0
            while j < n:
                if code[j].text == "(":
                    paren_depth += 1
                elif code[j].text == ")":
                    paren_depth -= 1
                    if paren_depth == 0:
                        break
                j += 1
            if j < n:
                k = j + 1
                if k < n and code[k].kind == TokenKind.KEYWORD and code[k].text == "throws":
                    k += 1
                    while k < n and (
                        code[k].kind == TokenKind.IDENTIFIER or code[k].text in (".", ",")
                    ):
                        k += 1
                if k < n and code[k].text == "{":
                    headers.append((k, depth))
        if token.text == "{":
            depth += 1
        elif token.text == "}":
            depth -= 1
        i += 1
    return headers


def _functions_cut(fragment: CodeFragment) -> int:
    """Functions whose body is cut by this fragment's start or end boundary."""
    code = [t for t in tokenize(fragment.source_text) if t.is_code()]
    if not code:
        return 0

    # Brace matching over the fragment; depth may go negative when the
    # fragment starts inside a scope opened before it.
    depth = 0
    min_depth = 0
    unclosed_opens: set[int] = set()
    has_unmatched_close = False
    stack: list[int] = []
    for idx, token in enumerate(code):
        if token.text == "{":
            stack.append(idx)
            depth += 1
        elif token.text == "}":
            if stack:
                stack.pop()
            else:
                has_unmatched_close = True
            depth -= 1
            min_depth = min(min_depth, depth)
    unclosed_opens = set(stack)

    count = 0
    for open_idx, open_depth in _method_headers(code):
        if open_depth == min_depth and open_idx in unclosed_opens:
            count += 1
    if has_unmatched_close:
        count += 1  # the fragment begins inside some enclosing body
    return count


def functions_intersected(pair: ClonePair) -> int:
    """Total function bodies partially overlapped by the two fragments."""
    return _functions_cut(pair.fragment1) + _functions_cut(pair.fragment2)


# ---------------------------------------------------------------------------
# Distribution report


@dataclass(frozen=True)
class FeatureDistribution:
    name: str
    bin_edges: tuple[float, ...]
    tp_histogram: tuple[float, ...]  # normalized, sums to 1
    fp_histogram: tuple[float, ...]
    tp_mean: float
    fp_mean: float

    @property
    def delta_mu(self) -> float:
        return abs(self.tp_mean - self.fp_mean)


@dataclass(frozen=True)
class DistributionReport:
    features: tuple[FeatureDistribution, ...]

    def ranking(self) -> list[tuple[str, float]]:
        """Feature names with delta-mu, best separator first."""
        ranked = sorted(self.features, key=lambda f: -f.delta_mu)
        return [(f.name, f.delta_mu) for f in ranked]

    def to_text(self) -> str:
        out = io.StringIO()
        out.write("feature ranking by delta-mu (|mean_TP - mean_FP|):\n")
        for name, delta in self.ranking():
            out.write(f"  {name:<24} {delta:.6f}\n")
        return out.getvalue()


def _histogram(values: list[float], edges: list[float]) -> tuple[float, ...]:
    counts = [0] * (len(edges) - 1)
    lo, hi = edges[0], edges[-1]
    width = (hi - lo) / (len(edges) - 1) if hi > lo else 1.0
    for v in values:
        idx = int((v - lo) / width)
        idx = min(max(idx, 0), len(counts) - 1)
        counts[idx] += 1
    total = len(values)
    return tuple(c / total for c in counts)


def feature_distribution_report(
    dataset: list[tuple[FeatureVector, Label]], bins: int = 20
) -> DistributionReport:
    """Per-feature, per-class histograms and the delta-mu separability rank.

    Raises InsufficientClasses unless both labels appear in the dataset.
    """
    tp_rows = [fv for fv, label in dataset if label is Label.TRUE_POSITIVE]
    fp_rows = [fv for fv, label in dataset if label is Label.FALSE_POSITIVE]
    if not tp_rows or not fp_rows:
        raise InsufficientClasses("distribution report needs both TP and FP examples")

    names = dataset[0][0].names
    dists = []
    for idx, name in enumerate(names):
        tp_vals = [fv.values[idx] for fv in tp_rows]
        fp_vals = [fv.values[idx] for fv in fp_rows]
        all_vals = tp_vals + fp_vals
        lo, hi = min(all_vals), max(all_vals)
        if hi <= lo:
            hi = lo + 1.0
        edges = [lo + (hi - lo) * k / bins for k in range(bins + 1)]
        dists.append(
            FeatureDistribution(
                name=name,
                bin_edges=tuple(edges),
                tp_histogram=_histogram(tp_vals, edges),
                fp_histogram=_histogram(fp_vals, edges),
                tp_mean=sum(tp_vals) / len(tp_vals),
                fp_mean=sum(fp_vals) / len(fp_vals),
            )
        )
    return DistributionReport(tuple(dists))


# ---------------------------------------------------------------------------
# CSV export / import of feature rows


def write_features_csv(rows: list[tuple[str, FeatureVector, Label]], stream) -> None:
    """Header (id, feature names, label), then one row per pair."""
    writer = csv.writer(stream, lineterminator="\n")
    if rows:
        names = rows[0][1].names
    else:
        names = FEATURE_NAMES
    writer.writerow(["id", *names, "label"])
    for pair_id, fv, label in rows:
        # repr keeps full precision so a re-read training set is bit-identical
        writer.writerow([pair_id, *[repr(v) for v in fv.values], label.value])


def read_features_csv(stream) -> list[tuple[str, FeatureVector, Label]]:
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or header[0] != "id" or header[-1] != "label":
        raise ValueError("not a feature CSV: bad header")
    names = tuple(header[1:-1])
    rows = []
    for record in reader:
        if not record:
            continue
        pair_id, *values, label = record
        fv = FeatureVector(names, tuple(float(v) for v in values))
        rows.append((pair_id, fv, Label.parse(label)))
    return rows
