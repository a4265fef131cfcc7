"""Minimal insert/delete edit scripts and the fragment similarity measure.

The edit script is LCS-optimal: its operation count equals
``len(a) + len(b) - 2 * lcs(a, b)``. Similarity between two normalized
fragments is ``1 - max(deletions/|f1|, insertions/|f2|)``, in [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Literal, Sequence

from .errors import EmptyFragment
from .normalize import NormalizedFragment

Granularity = Literal["line", "token"]


@dataclass(frozen=True)
class EditScript:
    """An ordered op list converting sequence A into sequence B."""

    ops: tuple[tuple[str, int, object], ...]  # ("keep"|"del", a_index, item) / ("ins", b_index, item)
    deleted_positions: tuple[int, ...]  # 1-based positions in A
    inserted_positions: tuple[int, ...]  # 1-based positions in B
    hunks: tuple[str, ...]  # classic diff notation, e.g. "4c4,5"

    @property
    def deletion_count(self) -> int:
        return len(self.deleted_positions)

    @property
    def insertion_count(self) -> int:
        return len(self.inserted_positions)

    @property
    def total_operations(self) -> int:
        return self.deletion_count + self.insertion_count

    def apply(self, a: Sequence) -> list:
        """Replay the script against A, yielding exactly B."""
        if list(a) != [item for op, _, item in self.ops if op in ("keep", "del")]:
            raise ValueError("script does not belong to this sequence")
        return [item for op, _, item in self.ops if op in ("keep", "ins")]


def _lcs_table(a: Sequence[Hashable], b: Sequence[Hashable]) -> list[list[int]]:
    n, m = len(a), len(b)
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        row = table[i]
        nxt = table[i + 1]
        ai = a[i]
        for j in range(m - 1, -1, -1):
            if ai == b[j]:
                row[j] = nxt[j + 1] + 1
            else:
                down = nxt[j]
                right = row[j + 1]
                row[j] = down if down >= right else right
    return table


def edit_script(a: Sequence[Hashable], b: Sequence[Hashable]) -> EditScript:
    """Compute a minimal edit script from A to B.

    Deterministic: on ties the walk prefers deleting from A before inserting
    from B, which matches the hunk shapes of a conventional line diff.
    """
    table = _lcs_table(a, b)
    ops: list[tuple[str, int, object]] = []
    i = j = 0
    n, m = len(a), len(b)
    while i < n and j < m:
        if a[i] == b[j]:
            ops.append(("keep", i, a[i]))
            i += 1
            j += 1
        elif table[i + 1][j] >= table[i][j + 1]:
            ops.append(("del", i, a[i]))
            i += 1
        else:
            ops.append(("ins", j, b[j]))
            j += 1
    for k in range(i, n):
        ops.append(("del", k, a[k]))
    for k in range(j, m):
        ops.append(("ins", k, b[k]))

    deleted = tuple(idx + 1 for op, idx, _ in ops if op == "del")
    inserted = tuple(idx + 1 for op, idx, _ in ops if op == "ins")
    return EditScript(tuple(ops), deleted, inserted, tuple(_build_hunks(ops)))


def _format_range(lo: int, hi: int) -> str:
    return str(lo) if lo == hi else f"{lo},{hi}"


def _build_hunks(ops: list[tuple[str, int, object]]) -> list[str]:
    hunks: list[str] = []
    a_line = 0  # last A line consumed
    b_line = 0  # last B line emitted
    idx = 0
    while idx < len(ops):
        op = ops[idx][0]
        if op == "keep":
            a_line += 1
            b_line += 1
            idx += 1
            continue
        dels = 0
        ins = 0
        while idx < len(ops) and ops[idx][0] != "keep":
            if ops[idx][0] == "del":
                dels += 1
            else:
                ins += 1
            idx += 1
        if dels and ins:
            hunks.append(
                f"{_format_range(a_line + 1, a_line + dels)}c{_format_range(b_line + 1, b_line + ins)}"
            )
        elif dels:
            hunks.append(f"{_format_range(a_line + 1, a_line + dels)}d{b_line}")
        else:
            hunks.append(f"{a_line}a{_format_range(b_line + 1, b_line + ins)}")
        a_line += dels
        b_line += ins
    return hunks


@dataclass(frozen=True)
class SimilarityScore:
    value: float
    granularity: Granularity
    level: object  # NormalizationLevel of the inputs

    def __float__(self) -> float:
        return self.value


def _comparable_units(fragment: NormalizedFragment, granularity: Granularity) -> list:
    if granularity == "line":
        return list(fragment.lines)
    if granularity == "token":
        # Layout tokens never reach NormalizedFragment.tokens, so this is a
        # pure (kind, text) comparison.
        return [(t.kind, t.text) for t in fragment.tokens]
    raise ValueError(f"unknown granularity: {granularity!r}")


def fragment_similarity(
    f1: NormalizedFragment, f2: NormalizedFragment, granularity: Granularity = "line"
) -> SimilarityScore:
    """Similarity in [0, 1]; 1 iff the unit sequences are equal.

    Raises EmptyFragment when either side has no units at this granularity.
    """
    a = _comparable_units(f1, granularity)
    b = _comparable_units(f2, granularity)
    if not a or not b:
        raise EmptyFragment(
            f"fragment has no {granularity} units at level {f1.level} / {f2.level}"
        )
    script = edit_script(a, b)
    value = 1.0 - max(script.deletion_count / len(a), script.insertion_count / len(b))
    return SimilarityScore(value, granularity, f1.level)
