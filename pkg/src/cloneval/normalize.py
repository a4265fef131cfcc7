"""Source normalization levels used before similarity measurement.

Level 1 strips comments and re-renders every line from its token sequence
with canonical spacing, keeping the source's own line structure (blank lines
survive, comment-only lines are dropped). Level 2 additionally blind-renames
every identifier to ``X`` and collapses literals (strings to ``"string"``,
chars to ``'string'``, numbers to ``0``). Level 3 then drops blank lines,
brace/semicolon-only lines, and import/package lines.

Keeping the original line breaks (rather than re-flowing one statement per
line) is what makes line-granularity similarity sensitive to layout edits
inside statements, matching the behavior of a plain line diff over
transformed sources.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .fragments import CodeFragment
from .tokens import Token, TokenKind, scan


class NormalizationLevel(Enum):
    TYPE1 = 1
    TYPE2 = 2
    TYPE3 = 3

    @classmethod
    def parse(cls, value: "str | int | NormalizationLevel") -> "NormalizationLevel":
        if isinstance(value, NormalizationLevel):
            return value
        if isinstance(value, int):
            return cls(value)
        text = value.strip().lower().replace("-", "").replace("_", "")
        for level in cls:
            if text in (f"type{level.value}", f"t{level.value}", str(level.value)):
                return level
        raise ValueError(f"not a normalization level: {value!r}")


@dataclass(frozen=True)
class NormalizedFragment:
    lines: tuple[str, ...]
    tokens: tuple[Token, ...]
    level: NormalizationLevel

    @property
    def line_count(self) -> int:
        return len(self.lines)

    @property
    def text(self) -> str:
        # newline-terminated so trailing blank lines survive a re-parse
        return "\n".join(self.lines) + "\n" if self.lines else ""


_NO_SPACE_BEFORE = frozenset({")", "]", ";", ",", ".", "::"})
_OPEN_GROUPERS = frozenset({"(", "[", "@", "::"})
_UNARY_PREFIX = frozenset({"!", "~"})
_CALL_LIKE_PREV = frozenset({")", "]"})


def _needs_space(prev: Token, cur: Token) -> bool:
    pt, ct = prev.text, cur.text
    if pt == ".":
        # ". 0" must not fuse into the float token ".0" on re-scan.
        return cur.kind == TokenKind.NUMBER
    if pt in _OPEN_GROUPERS:
        return False
    if pt in _UNARY_PREFIX:
        return cur.kind == TokenKind.OPERATOR
    if ct in _NO_SPACE_BEFORE:
        return False
    if ct == "(":
        return not (prev.kind == TokenKind.IDENTIFIER or pt in _CALL_LIKE_PREV)
    if ct == "[":
        return not (
            prev.kind in (TokenKind.IDENTIFIER, TokenKind.KEYWORD) or pt in _CALL_LIKE_PREV
        )
    return True


def render_tokens(tokens: list[Token] | tuple[Token, ...]) -> str:
    """Render a token sequence as one canonical line of text.

    The result depends only on the (kind, text) sequence, and re-scanning it
    yields that same sequence back, so rendering is stable under repeated
    normalization.
    """
    parts: list[str] = []
    prev: Token | None = None
    for token in tokens:
        if prev is not None and _needs_space(prev, token):
            parts.append(" ")
        parts.append(token.text)
        prev = token
    return "".join(parts)


def _transform_token(token: Token) -> Token:
    if token.kind == TokenKind.IDENTIFIER:
        return Token(token.kind, "X", token.line)
    if token.kind == TokenKind.STRING:
        return Token(token.kind, '"string"', token.line)
    if token.kind == TokenKind.CHAR:
        return Token(token.kind, "'string'", token.line)
    if token.kind == TokenKind.NUMBER:
        return Token(token.kind, "0", token.line)
    return token


def _brace_or_semicolon_only(tokens: list[Token]) -> bool:
    return all(t.text in ("{", "}", ";") for t in tokens)


def _import_or_package(tokens: list[Token]) -> bool:
    return tokens[0].kind == TokenKind.KEYWORD and tokens[0].text in ("import", "package")


def normalize(fragment: CodeFragment, level: NormalizationLevel | str | int) -> NormalizedFragment:
    """Apply the requested normalization level to a fragment.

    Raises UnsupportedLanguage for non-Java fragments; lex errors inside the
    fragment degrade per the scanner contract and never abort.
    """
    level = NormalizationLevel.parse(level)
    fragment.require_supported_language()

    source_lines = fragment.source_text.splitlines()
    result = scan(fragment.source_text)

    code_by_line: dict[int, list[Token]] = {}
    comment_covered: set[int] = set()
    for token in result.tokens:
        if token.kind == TokenKind.COMMENT:
            span = token.text.count("\n")
            comment_covered.update(range(token.line, token.line + span + 1))
        elif token.is_code():
            code_by_line.setdefault(token.line, []).append(token)

    lines: list[str] = []
    kept_tokens: list[Token] = []
    for lineno in range(1, len(source_lines) + 1):
        tokens = code_by_line.get(lineno, [])
        if not tokens:
            if lineno in comment_covered:
                continue  # comment-only line: removed entirely
            lines.append("")  # blank line: kept at levels 1 and 2
            continue
        if level in (NormalizationLevel.TYPE2, NormalizationLevel.TYPE3):
            tokens = [_transform_token(t) for t in tokens]
        if level == NormalizationLevel.TYPE3:
            if _brace_or_semicolon_only(tokens) or _import_or_package(tokens):
                continue
        lines.append(render_tokens(tokens))
        kept_tokens.extend(tokens)

    if level == NormalizationLevel.TYPE3:
        lines = [line for line in lines if line != ""]

    return NormalizedFragment(tuple(lines), tuple(kept_tokens), level)


def normalize_all_levels(fragment: CodeFragment) -> dict[NormalizationLevel, NormalizedFragment]:
    """Normalize once per level; levels are cumulative by construction."""
    return {level: normalize(fragment, level) for level in NormalizationLevel}


def tokenize_fragment(fragment: CodeFragment) -> list[Token]:
    """Lex a whole fragment behind the language gate (lossless scan)."""
    fragment.require_supported_language()
    return list(scan(fragment.source_text).tokens)
