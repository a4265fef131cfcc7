"""Lexer for Java-like source fragments.

The scanner is lossless: concatenating the token texts in order reproduces
the input byte for byte. It never raises on malformed input; unterminated
literals and comments are recovered as best-effort tokens and reported as
lex errors alongside the token list.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class TokenKind(str, Enum):
    KEYWORD = "keyword"
    IDENTIFIER = "identifier"
    STRING = "literal-string"
    CHAR = "literal-char"
    NUMBER = "literal-number"
    OPERATOR = "operator"
    PUNCTUATION = "punctuation"
    COMMENT = "comment"
    WHITESPACE = "whitespace-run"
    NEWLINE = "newline"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int  # 1-based line where the token starts

    def is_code(self) -> bool:
        """True for tokens that carry program content (not layout, not comments)."""
        return self.kind not in (TokenKind.WHITESPACE, TokenKind.NEWLINE, TokenKind.COMMENT)


@dataclass(frozen=True)
class LexError:
    message: str
    line: int


@dataclass(frozen=True)
class ScanResult:
    tokens: tuple[Token, ...]
    errors: tuple[LexError, ...]


# Classic Java keyword set. null/true/false are kept here on purpose: blind
# identifier renaming must leave them verbatim.
JAVA_KEYWORDS = frozenset(
    """
    abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while
    null true false
    """.split()
)

# Longest-first so that e.g. ">>>=" wins over ">>".
_OPERATORS = sorted(
    [
        ">>>=", ">>>", "<<=", ">>=", "==", "!=", "<=", ">=", "&&", "||",
        "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
        "<<", ">>", "->", "::", "+", "-", "*", "/", "%", "=", "<", ">",
        "!", "~", "&", "|", "^", "?",
    ],
    key=len,
    reverse=True,
)

_PUNCTUATION = frozenset("()[]{};,.@:")

_IDENT_START = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
_DIGITS = frozenset("0123456789")
_IDENT_PART = _IDENT_START | _DIGITS
_HORIZONTAL_WS = frozenset(" \t\f\x0b")


def scan(text: str) -> ScanResult:
    """Tokenize source text, recovering from malformed literals and comments."""
    tokens: list[Token] = []
    errors: list[LexError] = []
    i = 0
    line = 1
    n = len(text)

    def emit(kind: TokenKind, start: int, end: int, start_line: int) -> None:
        tokens.append(Token(kind, text[start:end], start_line))

    while i < n:
        c = text[i]
        start = i
        start_line = line

        if c == "\n" or c == "\r":
            if c == "\r" and i + 1 < n and text[i + 1] == "\n":
                i += 2
            else:
                i += 1
            emit(TokenKind.NEWLINE, start, i, start_line)
            line += 1
            continue

        if c in _HORIZONTAL_WS:
            while i < n and text[i] in _HORIZONTAL_WS:
                i += 1
            emit(TokenKind.WHITESPACE, start, i, start_line)
            continue

        if c == "/" and i + 1 < n and text[i + 1] == "/":
            while i < n and text[i] not in "\r\n":
                i += 1
            emit(TokenKind.COMMENT, start, i, start_line)
            continue

        if c == "/" and i + 1 < n and text[i + 1] == "*":
            end = text.find("*/", i + 2)
            if end == -1:
                errors.append(LexError("unterminated block comment", start_line))
                i = n
            else:
                i = end + 2
            line += text.count("\n", start, i)
            emit(TokenKind.COMMENT, start, i, start_line)
            continue

        if c == '"' or c == "'":
            quote = c
            i += 1
            closed = False
            while i < n and text[i] not in "\r\n":
                if text[i] == "\\" and i + 1 < n:
                    i += 2
                    continue
                if text[i] == quote:
                    i += 1
                    closed = True
                    break
                i += 1
            if not closed:
                # Recover: rest of the line stands in for the literal.
                errors.append(LexError(f"unterminated {quote} literal", start_line))
            kind = TokenKind.STRING if quote == '"' else TokenKind.CHAR
            emit(kind, start, i, start_line)
            continue

        if c in _DIGITS or (c == "." and i + 1 < n and text[i + 1] in _DIGITS):
            i = _scan_number(text, i)
            emit(TokenKind.NUMBER, start, i, start_line)
            continue

        if c in _IDENT_START:
            while i < n and text[i] in _IDENT_PART:
                i += 1
            word = text[start:i]
            kind = TokenKind.KEYWORD if word in JAVA_KEYWORDS else TokenKind.IDENTIFIER
            emit(kind, start, i, start_line)
            continue

        op = _match_operator(text, i)
        if op is not None:
            i += len(op)
            emit(TokenKind.OPERATOR, start, i, start_line)
            continue

        if c in _PUNCTUATION:
            i += 1
            emit(TokenKind.PUNCTUATION, start, i, start_line)
            continue

        # Unknown byte: degrade to a single-character raw token so the scan
        # stays lossless and never aborts.
        errors.append(LexError(f"unexpected character {c!r}", start_line))
        i += 1
        emit(TokenKind.PUNCTUATION, start, i, start_line)

    return ScanResult(tuple(tokens), tuple(errors))


def _scan_number(text: str, i: int) -> int:
    n = len(text)
    if text.startswith(("0x", "0X"), i):
        i += 2
        while i < n and (text[i] in _DIGITS or text[i] in "abcdefABCDEF_"):
            i += 1
    else:
        seen_dot = False
        while i < n:
            c = text[i]
            if c in _DIGITS or c == "_":
                i += 1
            elif c == "." and not seen_dot and i + 1 < n and text[i + 1] in _DIGITS:
                seen_dot = True
                i += 1
            elif c in "eE" and i + 1 < n and (text[i + 1] in _DIGITS or text[i + 1] in "+-"):
                i += 2
            else:
                break
    if i < n and text[i] in "lLfFdD":
        i += 1
    return i


def _match_operator(text: str, i: int) -> str | None:
    for op in _OPERATORS:
        if text.startswith(op, i):
            return op
    return None


def tokenize(text: str) -> list[Token]:
    """Scan and return tokens only, swallowing recoverable lex errors."""
    return list(scan(text).tokens)
