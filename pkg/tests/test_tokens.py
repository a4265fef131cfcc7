import random

import pytest

from cloneval.errors import UnsupportedLanguage
from cloneval.fragments import CodeFragment
from cloneval.normalize import normalize, tokenize_fragment
from cloneval.tokens import TokenKind, scan, tokenize


def kinds_and_texts(text):
    return [(t.kind, t.text) for t in tokenize(text) if t.is_code()]


def test_simple_statement():
    assert kinds_and_texts("int x = 0;") == [
        (TokenKind.KEYWORD, "int"),
        (TokenKind.IDENTIFIER, "x"),
        (TokenKind.OPERATOR, "="),
        (TokenKind.NUMBER, "0"),
        (TokenKind.PUNCTUATION, ";"),
    ]


def test_empty_input():
    assert tokenize("") == []


def test_block_comment_kept_as_single_token():
    assert kinds_and_texts("/*c*/x") == [(TokenKind.IDENTIFIER, "x")]
    tokens = tokenize("/*c*/x")
    assert tokens[0].kind == TokenKind.COMMENT and tokens[0].text == "/*c*/"


def test_losslessness_on_sample():
    text = 'class A { // greet\n  String s = "a\\"b";\n  char c = \'\\n\';\n  double d = 1.5e3; }'
    assert "".join(t.text for t in tokenize(text)) == text


def test_line_numbers():
    tokens = tokenize("a\nb\n  c")
    idents = [t for t in tokens if t.kind == TokenKind.IDENTIFIER]
    assert [t.line for t in idents] == [1, 2, 3]


def test_multiline_comment_line_tracking():
    tokens = tokenize("/* a\nb */ x")
    ident = [t for t in tokens if t.kind == TokenKind.IDENTIFIER][0]
    assert ident.line == 2


def test_unterminated_string_recovers():
    result = scan('x = "oops\ny = 1;')
    assert result.errors and "unterminated" in result.errors[0].message
    assert "".join(t.text for t in result.tokens) == 'x = "oops\ny = 1;'
    # the next line still tokenizes as code
    assert (TokenKind.IDENTIFIER, "y") in [(t.kind, t.text) for t in result.tokens]


def test_unterminated_block_comment_recovers():
    result = scan("x /* never closed\nmore")
    assert result.errors
    assert "".join(t.text for t in result.tokens) == "x /* never closed\nmore"


def test_operators_longest_match():
    assert kinds_and_texts("a >>>= b >> c >= d") == [
        (TokenKind.IDENTIFIER, "a"),
        (TokenKind.OPERATOR, ">>>="),
        (TokenKind.IDENTIFIER, "b"),
        (TokenKind.OPERATOR, ">>"),
        (TokenKind.IDENTIFIER, "c"),
        (TokenKind.OPERATOR, ">="),
        (TokenKind.IDENTIFIER, "d"),
    ]


def test_null_true_false_are_keywords():
    for word in ("null", "true", "false"):
        assert kinds_and_texts(word) == [(TokenKind.KEYWORD, word)]


def test_number_forms():
    for text in ("0", "42L", "0x1F", "1.5", "2e10", ".5", "3.14f", "1_000"):
        tokens = kinds_and_texts(text)
        assert tokens == [(TokenKind.NUMBER, text)], text


def test_fuzz_losslessness():
    rng = random.Random(99)
    pieces = [
        "int ", "x", " = ", "0", ";", "\n", "\t", "// note\n", "/* b */", '"s"',
        "'c'", "{", "}", "(", ")", "foo", ".", "bar", "==", "+", " ", "1.5", "\r\n",
    ]
    for _ in range(300):
        text = "".join(rng.choice(pieces) for _ in range(rng.randrange(0, 40)))
        assert "".join(t.text for t in tokenize(text)) == text


def test_unsupported_language_raises():
    fragment = CodeFragment("x = 1", language="Python")
    with pytest.raises(UnsupportedLanguage):
        normalize(fragment, "type1")
    with pytest.raises(UnsupportedLanguage):
        tokenize_fragment(fragment)


def test_tokenize_fragment_is_lossless():
    fragment = CodeFragment("int a = 1; // x\nuse(a);")
    tokens = tokenize_fragment(fragment)
    assert "".join(t.text for t in tokens) == fragment.source_text
