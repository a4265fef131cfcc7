import random

import pytest

from cloneval.fragments import CodeFragment
from cloneval.normalize import NormalizationLevel, normalize
from cloneval.tokens import TokenKind

from conftest import TRANSFORMED_1_LINES, TRANSFORMED_2_LINES


def test_worked_example_level2_lines(fragment_pair):
    f1, f2 = fragment_pair
    assert list(normalize(f1, "type2").lines) == TRANSFORMED_1_LINES
    assert list(normalize(f2, "type2").lines) == TRANSFORMED_2_LINES


def test_identifier_and_literal_replacement():
    fragment = CodeFragment("String associator = args[0];")
    assert normalize(fragment, "type2").lines == ("X X = X[0];",)
    literal = CodeFragment('s = "The first argument must be the class name of a kernel";')
    assert normalize(literal, "type2").lines == ('X = "string";',)


def test_char_and_number_normalization():
    fragment = CodeFragment("char c = 'q'; int n = 42;")
    assert normalize(fragment, "type2").lines == ("char X = 'string'; int X = 0;",)


def test_type1_keeps_names_strips_comments():
    fragment = CodeFragment("int  x =  1; // trailing\n/* whole line */\nint y = 2;")
    normalized = normalize(fragment, "type1")
    assert normalized.lines == ("int x = 1;", "int y = 2;")
    assert all(t.kind != TokenKind.COMMENT for t in normalized.tokens)


def test_blank_lines_survive_level1_and_2_but_not_3():
    fragment = CodeFragment("int a = 1;\n\nint b = 2;\n")
    assert normalize(fragment, "type1").lines == ("int a = 1;", "", "int b = 2;")
    assert normalize(fragment, "type2").lines == ("int X = 0;", "", "int X = 0;")
    assert normalize(fragment, "type3").lines == ("int X = 0;", "int X = 0;")


def test_type3_drops_brace_only_and_import_lines():
    fragment = CodeFragment(
        "import java.util.List;\npackage demo;\nif (x) {\n{\n}\n;\nint y = 1;\n"
    )
    assert normalize(fragment, "type3").lines == ("if (X) {", "int X = 0;")


def test_idempotence_at_every_level():
    source = (
        "import a.b.C;\n/* header */\nvoid run(int n) { // main\n"
        '  String s = "hi";\n  for (int i = 0; i < n; i++) {\n    s = s + i;\n  }\n}\n\n'
    )
    for level in NormalizationLevel:
        first = normalize(CodeFragment(source), level)
        again = normalize(CodeFragment(first.text), level)
        assert again.lines == first.lines
        assert [(t.kind, t.text) for t in again.tokens] == [
            (t.kind, t.text) for t in first.tokens
        ]


def test_cumulativity_kind_sequence():
    fragment = CodeFragment('if (count > 9) { emit("x", count); }')
    t1 = normalize(fragment, "type1")
    t2 = normalize(fragment, "type2")
    assert [t.kind for t in t1.tokens] == [t.kind for t in t2.tokens]
    t3 = normalize(fragment, "type3")
    assert set(t3.lines) <= set(t2.lines)


def test_comment_and_whitespace_edits_invisible_at_type1():
    base = CodeFragment("int total = 1;")
    variant = CodeFragment("int   total=1 ;  // changed")
    assert normalize(base, "type1").lines == normalize(variant, "type1").lines


def test_rename_and_literal_edits_invisible_at_type2():
    left = CodeFragment('int total = 5; String s = "abc";')
    right = CodeFragment('int sum = 9; String txt = "zz";')
    assert normalize(left, "type2").lines == normalize(right, "type2").lines
    assert normalize(left, "type1").lines != normalize(right, "type1").lines


def test_fuzzed_idempotence():
    rng = random.Random(5)
    statements = [
        "int v{0} = {1};",
        's{0} = "lit{1}";',
        "if (v{0} > {1}) {{",
        "}}",
        "// comment {1}",
        "",
        "call{0}(v{0}, {1});",
    ]
    for _ in range(120):
        lines = [
            rng.choice(statements).format(rng.randrange(5), rng.randrange(100))
            for _ in range(rng.randrange(1, 12))
        ]
        fragment = CodeFragment("\n".join(lines) + "\n")
        for level in NormalizationLevel:
            first = normalize(fragment, level)
            again = normalize(CodeFragment(first.text), level)
            assert again.lines == first.lines


def test_empty_fragment_normalizes_to_nothing():
    fragment = CodeFragment("", end_line=1)
    assert normalize(fragment, "type1").lines == ()
    assert normalize(fragment, "type1").tokens == ()


def test_level_parsing_aliases():
    assert NormalizationLevel.parse("Type1") is NormalizationLevel.TYPE1
    assert NormalizationLevel.parse("t2") is NormalizationLevel.TYPE2
    assert NormalizationLevel.parse(3) is NormalizationLevel.TYPE3
    with pytest.raises(ValueError):
        NormalizationLevel.parse("type9")
