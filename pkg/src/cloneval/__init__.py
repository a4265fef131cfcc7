"""cloneval: automatic validation of detector-reported code clone pairs.

Pipeline: tokenize and normalize both fragments at three levels, measure
edit-script similarities plus structural counts, feed the vector to a
trained classifier, and threshold the true-positive probability at gamma.
"""

from .diffs import EditScript, SimilarityScore, edit_script, fragment_similarity
from .errors import CloneValError
from .features import (
    EXTRA_FEATURE_NAMES,
    FEATURE_NAMES,
    FeatureVector,
    extract_features,
    feature_distribution_report,
)
from .fragments import ClonePair, CodeFragment, Label
from .models import (
    NaiveBayesKdeClassifier,
    NeuralNetClassifier,
    Prediction,
    TfIdfCloneScorer,
    TrainingSet,
    decide,
    dump_model,
    load_model,
    make_classifier,
    update_with_feedback,
)
from .normalize import NormalizationLevel, NormalizedFragment, normalize, tokenize_fragment
from .tokens import Token, TokenKind, tokenize

__version__ = "0.1.0"

__all__ = [
    "CloneValError",
    "CodeFragment",
    "ClonePair",
    "Label",
    "Token",
    "TokenKind",
    "tokenize",
    "NormalizationLevel",
    "NormalizedFragment",
    "normalize",
    "tokenize_fragment",
    "EditScript",
    "SimilarityScore",
    "edit_script",
    "fragment_similarity",
    "FeatureVector",
    "FEATURE_NAMES",
    "EXTRA_FEATURE_NAMES",
    "extract_features",
    "feature_distribution_report",
    "Prediction",
    "TrainingSet",
    "decide",
    "NeuralNetClassifier",
    "NaiveBayesKdeClassifier",
    "TfIdfCloneScorer",
    "make_classifier",
    "update_with_feedback",
    "dump_model",
    "load_model",
    "__version__",
]
