"""Artificial clone-pair benchmark built from nine mutation operators.

Each operator applies exactly one seeded random edit and maps to the clone
type it produces: layout/comment edits give Type-1 clones, identifier and
literal edits give Type-2, statement-level edits give Type-3. Negative
pairs come from distinct corpus files and are rejected while their
level-1 line similarity exceeds 0.5.
"""

from __future__ import annotations

import csv
import random
import string
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

from .diffs import fragment_similarity
from .errors import CorpusTooSmall, EmptyFragment, ExhaustedResampling, NoMutableSite
from .fragments import ClonePair, CodeFragment, Label
from .normalize import NormalizationLevel, normalize
from .tokens import JAVA_KEYWORDS, Token, TokenKind, tokenize

BENCH_LABELER = "mutation-bench"


class CloneType(Enum):
    TYPE1 = 1
    TYPE2 = 2
    TYPE3 = 3


class MutationOperator(Enum):
    WS_ADD_REMOVE = "WS_ADD_REMOVE"
    COMMENT_CHANGE = "COMMENT_CHANGE"
    NEWLINE_ADD_REMOVE = "NEWLINE_ADD_REMOVE"
    RENAME_SYSTEMATIC = "RENAME_SYSTEMATIC"
    RENAME_ARBITRARY = "RENAME_ARBITRARY"
    LITERAL_VALUE_CHANGE = "LITERAL_VALUE_CHANGE"
    INTRALINE_INSERT_DELETE = "INTRALINE_INSERT_DELETE"
    LINE_INSERT_DELETE = "LINE_INSERT_DELETE"
    LINE_MODIFY = "LINE_MODIFY"

    @property
    def clone_type(self) -> CloneType:
        order = list(MutationOperator)
        return CloneType(order.index(self) // 3 + 1)


_INSERT_TEMPLATES = (
    "int extra{n} = 0;",
    "extra{n} = extra{n};",
    "count{n} = count{n} + 1;",
    'System.out.println("trace{n}");',
)


def _spans(text: str) -> list[tuple[Token, int, int]]:
    """Tokens with their character ranges (scan is lossless, so cumulative)."""
    spans = []
    pos = 0
    for token in tokenize(text):
        spans.append((token, pos, pos + len(token.text)))
        pos += len(token.text)
    return spans


def _splice(text: str, start: int, end: int, replacement: str) -> str:
    return text[:start] + replacement + text[end:]


def _multiline_comment_lines(spans) -> set[int]:
    covered = set()
    for token, _, _ in spans:
        if token.kind == TokenKind.COMMENT and "\n" in token.text:
            extra = token.text.count("\n")
            covered.update(range(token.line, token.line + extra + 1))
    return covered


def _code_tokens_by_line(spans) -> dict[int, list[tuple[Token, int, int]]]:
    by_line: dict[int, list[tuple[Token, int, int]]] = {}
    for token, start, end in spans:
        if token.is_code():
            by_line.setdefault(token.line, []).append((token, start, end))
    return by_line


def _line_offsets(text: str) -> list[tuple[int, int]]:
    """(start, end_without_newline) per physical line."""
    offsets = []
    start = 0
    for line in text.split("\n"):
        offsets.append((start, start + len(line)))
        start += len(line) + 1
    return offsets


def _fresh_identifier(rng: random.Random, taken: set[str]) -> str:
    for _ in range(1000):
        name = "ren" + "".join(rng.choice(string.ascii_lowercase) for _ in range(4))
        if name not in taken and name not in JAVA_KEYWORDS:
            return name
    raise NoMutableSite("could not find a fresh identifier name")


def _mutate_whitespace(text: str, rng: random.Random) -> str:
    spans = _spans(text)
    options = []
    for idx, (token, start, end) in enumerate(spans):
        if token.kind == TokenKind.WHITESPACE:
            options.append(("shrink" if end - start > 1 else "extend", start, end))
        if (
            idx + 1 < len(spans)
            and token.is_code()
            and spans[idx + 1][0].is_code()
            and spans[idx + 1][0].line == token.line
        ):
            options.append(("insert", end, end))
    if not options:
        raise NoMutableSite("no whitespace site")
    action, start, end = options[rng.randrange(len(options))]
    if action == "shrink":
        return _splice(text, start, end, " ")
    if action == "extend":
        return _splice(text, start, end, text[start:end] + " ")
    return _splice(text, start, end, " ")


def _comment_only_line_range(text: str, spans, comment: Token, start: int, end: int):
    """Char range of the comment's whole physical lines, if it owns them."""
    lines = _line_offsets(text)
    first = comment.line - 1
    last = first + comment.text.count("\n")
    if last >= len(lines):
        return None
    lo, _ = lines[first]
    _, hi = lines[last]
    outside = text[lo:start] + text[end:hi]
    if outside.strip():
        return None  # code shares these lines
    cut_hi = hi + 1 if hi < len(text) and text[hi] == "\n" else hi
    return lo, cut_hi


def _mutate_comments(text: str, rng: random.Random) -> str:
    spans = _spans(text)
    tag = rng.randrange(10000)
    lines = _line_offsets(text)
    code_lines = _code_tokens_by_line(spans)
    covered = _multiline_comment_lines(spans)
    options: list[tuple] = []
    for token, start, end in spans:
        if token.kind != TokenKind.COMMENT:
            continue
        options.append(("change", token, start, end))
        # stripping just the token is layout-invisible only when code shares
        # the line; comment-only lines must disappear whole instead
        if "\n" not in token.text and token.line in code_lines:
            options.append(("strip", token, start, end))
        full_range = _comment_only_line_range(text, spans, token, start, end)
        if full_range is not None:
            options.append(("drop_lines", token, *full_range))
    for lineno, (_, line_end) in enumerate(lines, start=1):
        if lineno in code_lines and lineno not in covered:
            options.append(("append_eol", None, line_end, line_end))
    options.append(("new_line", None, len(text), len(text)))

    action, token, start, end = options[rng.randrange(len(options))]
    if action == "change":
        inner_newlines = token.text.count("\n")
        if token.text.startswith("//"):
            replacement = f"// mut{tag}"
        else:
            replacement = "/* mut" + str(tag) + "\n" * inner_newlines + " */"
        if replacement == token.text:
            replacement = replacement.replace("mut", "alt")
        return _splice(text, start, end, replacement)
    if action == "strip":
        return _splice(text, start, end, "")
    if action == "drop_lines":
        return _splice(text, start, end, "")
    if action == "append_eol":
        return _splice(text, start, end, f" // mut{tag}")
    return text + ("\n" if text and not text.endswith("\n") else "") + f"// mut{tag}\n"


def _all_structural(tokens: Sequence[Token]) -> bool:
    """Lines of only braces/semicolons vanish at level 3, so layout edits
    must not move tokens across that boundary."""
    return bool(tokens) and all(t.text in ("{", "}", ";") for t in tokens)


def _mutate_newlines(text: str, rng: random.Random) -> str:
    spans = _spans(text)
    covered = _multiline_comment_lines(spans)
    code_by_line = _code_tokens_by_line(spans)
    raw_lines = text.split("\n")
    options: list[tuple] = []
    # blank-line insertion/removal at line granularity
    for idx in range(len(raw_lines) + 1):
        if idx not in covered and idx + 1 not in covered:
            options.append(("blank_insert", idx))
    for idx, line in enumerate(raw_lines):
        if line == "" and (idx + 1) not in covered:
            options.append(("blank_remove", idx))
    # split between two code tokens sharing a line, unless a half would
    # become a brace-only line
    for lineno, tokens in code_by_line.items():
        for k in range(len(tokens) - 1):
            left = [t for t, _, _ in tokens[: k + 1]]
            right = [t for t, _, _ in tokens[k + 1 :]]
            if _all_structural(left) or _all_structural(right):
                continue
            options.append(("split", tokens[k][2]))
    # join a line with its successor when no line comment can swallow it and
    # neither side is a brace-only line
    line_has_linecomment = {
        t.line for t, _, _ in spans if t.kind == TokenKind.COMMENT and t.text.startswith("//")
    }
    for idx in range(len(raw_lines) - 1):
        lineno = idx + 1
        if lineno in line_has_linecomment or lineno in covered or (lineno + 1) in covered:
            continue
        if _all_structural([t for t, _, _ in code_by_line.get(lineno, [])]):
            continue
        if _all_structural([t for t, _, _ in code_by_line.get(lineno + 1, [])]):
            continue
        options.append(("join", idx))
    if not options:
        raise NoMutableSite("no newline site")

    action, arg = options[rng.randrange(len(options))]
    if action == "blank_insert":
        new_lines = raw_lines[:arg] + [""] + raw_lines[arg:]
        return "\n".join(new_lines)
    if action == "blank_remove":
        new_lines = raw_lines[:arg] + raw_lines[arg + 1 :]
        return "\n".join(new_lines)
    if action == "split":
        return _splice(text, arg, arg, "\n")
    joined = raw_lines[arg].rstrip() + " " + raw_lines[arg + 1].lstrip()
    new_lines = raw_lines[:arg] + [joined] + raw_lines[arg + 2 :]
    return "\n".join(new_lines)


def _identifier_spans(spans):
    return [(t, s, e) for t, s, e in spans if t.kind == TokenKind.IDENTIFIER]


def _mutate_rename(text: str, rng: random.Random, systematic: bool) -> str:
    spans = _spans(text)
    idents = _identifier_spans(spans)
    if not idents:
        raise NoMutableSite("no identifiers to rename")
    taken = {t.text for t, _, _ in idents}
    fresh = _fresh_identifier(rng, taken)
    if systematic:
        target = sorted(taken)[rng.randrange(len(taken))]
        out = []
        pos = 0
        for token, start, end in spans:
            out.append(text[pos:start])
            if token.kind == TokenKind.IDENTIFIER and token.text == target:
                out.append(fresh)
            else:
                out.append(text[start:end])
            pos = end
        out.append(text[pos:])
        return "".join(out)
    token, start, end = idents[rng.randrange(len(idents))]
    return _splice(text, start, end, fresh)


def _mutate_literal(text: str, rng: random.Random) -> str:
    spans = _spans(text)
    literals = [
        (t, s, e)
        for t, s, e in spans
        if t.kind in (TokenKind.STRING, TokenKind.CHAR, TokenKind.NUMBER)
    ]
    if not literals:
        raise NoMutableSite("no literals to change")
    token, start, end = literals[rng.randrange(len(literals))]
    if token.kind == TokenKind.STRING:
        replacement = f'"lit{rng.randrange(10000)}"'
        while replacement == token.text:
            replacement = f'"lit{rng.randrange(10000)}"'
    elif token.kind == TokenKind.CHAR:
        choices = [c for c in string.ascii_lowercase if f"'{c}'" != token.text]
        replacement = f"'{rng.choice(choices)}'"
    else:
        replacement = str(rng.randrange(1, 1000))
        while replacement == token.text:
            replacement = str(rng.randrange(1, 1000))
    return _splice(text, start, end, replacement)


def _mutate_intraline(text: str, rng: random.Random) -> str:
    spans = _spans(text)
    by_line = _code_tokens_by_line(spans)
    options: list[tuple] = []
    for lineno, tokens in by_line.items():
        if len(tokens) >= 2:
            for token, start, end in tokens:
                if token.text not in ("{", "}"):
                    options.append(("delete", start, end))
            for left, right in zip(tokens, tokens[1:]):
                options.append(("insert", left[2], left[2]))
    if not options:
        raise NoMutableSite("no intraline site")
    action, start, end = options[rng.randrange(len(options))]
    if action == "delete":
        return _splice(text, start, end, " ")
    return _splice(text, start, end, f" ins{rng.randrange(1000)} ")


def _statement_line_numbers(text: str) -> list[int]:
    """1-based physical lines safe for whole-line edits: code-bearing,
    brace-free, and not crossing a multi-line comment."""
    spans = _spans(text)
    by_line = _code_tokens_by_line(spans)
    covered = _multiline_comment_lines(spans)
    safe = []
    for lineno, tokens in sorted(by_line.items()):
        if lineno in covered:
            continue
        if any(t.text in ("{", "}") for t, _, _ in tokens):
            continue
        safe.append(lineno)
    return safe


def _indent_of(line: str) -> str:
    return line[: len(line) - len(line.lstrip())]


def _mutate_lines(text: str, rng: random.Random, modify: bool) -> str:
    raw_lines = text.split("\n")
    spans = _spans(text)
    covered = _multiline_comment_lines(spans)
    candidates = _statement_line_numbers(text)
    template = _INSERT_TEMPLATES[rng.randrange(len(_INSERT_TEMPLATES))].format(
        n=rng.randrange(1000)
    )

    if modify:
        if not candidates:
            raise NoMutableSite("no whole line to modify")
        lineno = candidates[rng.randrange(len(candidates))]
        original = raw_lines[lineno - 1]
        replacement = _indent_of(original) + template
        while replacement == original:
            replacement = _indent_of(original) + template + " "
        raw_lines[lineno - 1] = replacement
        return "\n".join(raw_lines)

    actions = ["insert"]
    if candidates:
        actions.append("delete")
    action = actions[rng.randrange(len(actions))]
    if action == "delete":
        lineno = candidates[rng.randrange(len(candidates))]
        del raw_lines[lineno - 1]
        return "\n".join(raw_lines)
    boundaries = [
        idx for idx in range(len(raw_lines) + 1) if idx not in covered and idx + 1 not in covered
    ]
    idx = boundaries[rng.randrange(len(boundaries))]
    anchor = raw_lines[idx] if idx < len(raw_lines) else (raw_lines[-1] if raw_lines else "")
    new_line = _indent_of(anchor) + template
    return "\n".join(raw_lines[:idx] + [new_line] + raw_lines[idx:])


_MUTATORS = {
    MutationOperator.WS_ADD_REMOVE: lambda text, rng: _mutate_whitespace(text, rng),
    MutationOperator.COMMENT_CHANGE: lambda text, rng: _mutate_comments(text, rng),
    MutationOperator.NEWLINE_ADD_REMOVE: lambda text, rng: _mutate_newlines(text, rng),
    MutationOperator.RENAME_SYSTEMATIC: lambda text, rng: _mutate_rename(text, rng, True),
    MutationOperator.RENAME_ARBITRARY: lambda text, rng: _mutate_rename(text, rng, False),
    MutationOperator.LITERAL_VALUE_CHANGE: lambda text, rng: _mutate_literal(text, rng),
    MutationOperator.INTRALINE_INSERT_DELETE: lambda text, rng: _mutate_intraline(text, rng),
    MutationOperator.LINE_INSERT_DELETE: lambda text, rng: _mutate_lines(text, rng, False),
    MutationOperator.LINE_MODIFY: lambda text, rng: _mutate_lines(text, rng, True),
}


def mutate_fragment(
    fragment: CodeFragment, op: MutationOperator, seed: int | str
) -> CodeFragment:
    """Apply one operator at a seeded random site.

    The output always differs from the input and still tokenizes. Raises
    NoMutableSite when the fragment offers nowhere to apply the operator.
    """
    fragment.require_supported_language()
    if not fragment.source_text:
        raise NoMutableSite("empty fragment")
    rng = random.Random(seed)
    mutated = _MUTATORS[op](fragment.source_text, rng)
    if mutated == fragment.source_text:
        raise NoMutableSite(f"{op.value} produced no change")
    return CodeFragment(
        source_text=mutated,
        file_path=fragment.file_path,
        start_line=fragment.start_line,
        language=fragment.language,
    )


# ---------------------------------------------------------------------------
# Benchmark generation


@dataclass(frozen=True)
class ManifestRow:
    pair_id: str
    operator: str  # operator name or "negative"
    clone_type: str  # TYPE1/TYPE2/TYPE3 or "-"
    label: Label
    seed: str


@dataclass(frozen=True)
class BenchmarkManifest:
    seed: int
    corpus_ids: tuple[str, ...]
    rows: tuple[ManifestRow, ...]

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {"TP": 0, "FP": 0}
        for row in self.rows:
            out[row.label.value] = out.get(row.label.value, 0) + 1
            if row.clone_type != "-":
                out[row.clone_type] = out.get(row.clone_type, 0) + 1
        return out

    def write_csv(self, stream) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["id", "operator", "clone_type", "label", "seed"])
        for row in self.rows:
            writer.writerow([row.pair_id, row.operator, row.clone_type, row.label.value, row.seed])


def _line_sim_t1(a: CodeFragment, b: CodeFragment) -> float:
    try:
        na = normalize(a, NormalizationLevel.TYPE1)
        nb = normalize(b, NormalizationLevel.TYPE1)
        return fragment_similarity(na, nb, "line").value
    except EmptyFragment:
        return 0.0


def generate_benchmark(
    corpus: Sequence[CodeFragment],
    true_count: int,
    false_count: int,
    operator_mix: dict[MutationOperator, float] | None = None,
    seed: int = 0,
) -> tuple[list[ClonePair], BenchmarkManifest]:
    """Labeled pairs: mutants as true positives, cross-file draws as negatives.

    Fully reproducible from (corpus, counts, mix, seed). Negative draws with
    level-1 line similarity above 0.5 are rejected and resampled, at most
    100 times each, to guard against accidental real clones.
    """
    if len(corpus) < 2:
        raise CorpusTooSmall(f"need at least 2 corpus fragments, got {len(corpus)}")
    operators = list(MutationOperator)
    if operator_mix:
        weights = [float(operator_mix.get(op, 0.0)) for op in operators]
        if sum(weights) <= 0:
            raise ValueError("operator mix has no positive weight")
    else:
        weights = [1.0] * len(operators)

    pairs: list[ClonePair] = []
    rows: list[ManifestRow] = []

    for index in range(true_count):
        pair_seed = f"{seed}:tp:{index}"
        rng = random.Random(pair_seed)
        produced = None
        for attempt in range(64):
            fragment = corpus[rng.randrange(len(corpus))]
            op = rng.choices(operators, weights=weights, k=1)[0]
            try:
                mutant = mutate_fragment(fragment, op, f"{pair_seed}:{attempt}")
            except NoMutableSite:
                continue
            produced = (fragment, mutant, op)
            break
        if produced is None:
            raise NoMutableSite(f"no operator applied after 64 attempts (pair {index})")
        fragment, mutant, op = produced
        pair_id = f"tp-{index:04d}"
        pairs.append(
            ClonePair(
                id=pair_id,
                fragment1=fragment,
                fragment2=mutant,
                detector=BENCH_LABELER,
                label=Label.TRUE_POSITIVE,
                labeler=BENCH_LABELER,
            )
        )
        rows.append(
            ManifestRow(pair_id, op.value, op.clone_type.name, Label.TRUE_POSITIVE, pair_seed)
        )

    for index in range(false_count):
        pair_seed = f"{seed}:fp:{index}"
        rng = random.Random(pair_seed)
        chosen = None
        for _ in range(100):
            a = corpus[rng.randrange(len(corpus))]
            b = corpus[rng.randrange(len(corpus))]
            if a is b or a.file_path == b.file_path:
                continue
            if _line_sim_t1(a, b) > 0.5:
                continue
            chosen = (a, b)
            break
        if chosen is None:
            raise ExhaustedResampling(f"100 rejected negative draws (pair {index})")
        a, b = chosen
        pair_id = f"fp-{index:04d}"
        pairs.append(
            ClonePair(
                id=pair_id,
                fragment1=a,
                fragment2=b,
                detector=BENCH_LABELER,
                label=Label.FALSE_POSITIVE,
                labeler=BENCH_LABELER,
            )
        )
        rows.append(ManifestRow(pair_id, "negative", "-", Label.FALSE_POSITIVE, pair_seed))

    corpus_ids = tuple(f.file_path or f"fragment-{i}" for i, f in enumerate(corpus))
    return pairs, BenchmarkManifest(seed, corpus_ids, tuple(rows))


def export_benchmark(pairs: Sequence[ClonePair], manifest: BenchmarkManifest, out_dir) -> None:
    """pairs/<id>/a.java + b.java plus manifest.csv, ready for store import."""
    out = Path(out_dir)
    pairs_dir = out / "pairs"
    pairs_dir.mkdir(parents=True, exist_ok=True)
    for pair in pairs:
        pair_dir = pairs_dir / pair.id
        pair_dir.mkdir(parents=True, exist_ok=True)
        for name, fragment in (("a.java", pair.fragment1), ("b.java", pair.fragment2)):
            text = fragment.source_text
            if text and not text.endswith("\n"):
                text += "\n"
            (pair_dir / name).write_text(text, encoding="utf-8")
    with open(out / "manifest.csv", "w", encoding="utf-8", newline="") as stream:
        manifest.write_csv(stream)


# ---------------------------------------------------------------------------
# Synthetic corpus (stand-in for a real fragment source at desk scale)

_TYPES = ("int", "long", "double", "boolean", "String")
_NOUNS = (
    "count", "total", "index", "value", "buffer", "result", "limit", "offset",
    "sum", "size", "flag", "item", "cursor", "weight", "depth", "span",
    "width", "height", "score", "budget", "quota", "level", "step", "delta",
)
_VERBS = (
    "compute", "resolve", "merge", "scan", "collect", "filter", "reduce",
    "locate", "expand", "pack", "rotate", "sample", "trim", "blend",
)
_WORDS = (
    "alpha", "beta", "gamma", "delta", "omega", "stream", "branch", "bucket",
    "window", "record", "ticket", "marker", "signal", "anchor",
)


def synthesize_corpus(count: int, seed: int = 0) -> list[CodeFragment]:
    """Deterministic Java-ish method fragments with diverse bodies.

    Every fragment carries identifiers, numeric and string literals, plain
    statement lines, and its own file path, so all nine operators apply and
    cross-file draws make plausible negatives.
    """
    fragments = []
    for index in range(count):
        rng = random.Random(f"{seed}:frag:{index}")
        names = rng.sample(_NOUNS, 6)
        verb = rng.choice(_VERBS)
        word = rng.choice(_WORDS)
        method = f"{verb}{word.capitalize()}{index}"
        ret = rng.choice(_TYPES[:3])
        body: list[str] = []
        body.append(f"static {ret} {method}(int {names[0]}, int {names[1]}) {{")
        body.append(f"    int {names[2]} = {rng.randrange(1, 100)};")
        body.append(f'    String {names[3]} = "{word}-{rng.randrange(1000)}";')
        if rng.random() < 0.5:
            body.append(f"    // prepare {names[2]} before the loop")
        body.append(f"    for (int {names[4]} = 0; {names[4]} < {names[0]}; {names[4]}++) {{")
        body.append(f"        {names[2]} = {names[2]} + {names[4]} * {rng.randrange(2, 9)};")
        if rng.random() < 0.6:
            body.append(f"        if ({names[2]} > {names[1]}) {{")
            body.append(f"            {names[2]} = {names[2]} - {names[1]};")
            body.append("        }")
        body.append("    }")
        if rng.random() < 0.4:
            body.append("")
        body.append(f"    if ({names[2]} == {rng.randrange(100, 200)}) {{")
        body.append(f"        System.out.println({names[3]});")
        body.append("    }")
        extra = rng.randrange(0, 3)
        for k in range(extra):
            left = rng.choice(names)
            body.append(f"    {left} = {left} {rng.choice(('+', '-', '*'))} {rng.randrange(1, 50)};")
        body.append(f"    return {names[2]};")
        body.append("}")
        fragments.append(
            CodeFragment(
                source_text="\n".join(body),
                file_path=f"synth/{method}.java",
                start_line=1,
                language="Java",
            )
        )
    return fragments
