"""Shared fixtures: the worked-example fragment pair and small corpora."""

import pytest

from cloneval.fragments import CodeFragment

# The two Weka-derived fragments used throughout as the worked example.
# Fragment 1 carries three trailing blank lines (its detector-reported line
# range included them; the reference line diff proves the 12-line length).
FRAGMENT_1_LINES = [
    "try {",
    "    if (args.length == 0) {",
    "\tthrow new Exception(",
    '\t    "The first argument must be the class name of a kernel");',
    "    }",
    "    String associator = args[0];",
    '    args[0] = ">";',
    "    System.out.println(evaluate(associator, args));",
    "}",
    "",
    "",
    "",
]

FRAGMENT_2_LINES = [
    "try {",
    "    if (args.length == 0) {",
    "\tthrow new Exception(",
    '\t"The first argument must be the name of a " ',
    '\t+ "clusterer");',
    "    }",
    '    args[0] = "?";',
    "    Clusterer newClusterer = AbstractClusterer.forName(ClustererString, null);"
    "//object from abstract clusterer",
    "    System.out.println(evaluateClusterer(newClusterer, args));",
    "}",
]

# Their expected level-2 transforms (canonical rendering, no indentation).
TRANSFORMED_1_LINES = [
    "try {",
    "if (X.X == 0) {",
    "throw new X(",
    '"string");',
    "}",
    "X X = X[0];",
    'X[0] = "string";',
    "X.X.X(X(X, X));",
    "}",
    "",
    "",
    "",
]

TRANSFORMED_2_LINES = [
    "try {",
    "if (X.X == 0) {",
    "throw new X(",
    '"string"',
    '+ "string");',
    "}",
    'X[0] = "string";',
    "X X = X.X(X, null);",
    "X.X.X(X(X, X));",
    "}",
]


def as_fragment(lines, path=None) -> CodeFragment:
    return CodeFragment("\n".join(lines) + "\n", file_path=path, language="Java")


@pytest.fixture
def fragment_pair():
    return as_fragment(FRAGMENT_1_LINES, "weka/RunKernel.java"), as_fragment(
        FRAGMENT_2_LINES, "weka/RunClusterer.java"
    )
