"""Exception types shared across the toolkit."""


class CloneValError(Exception):
    """Base class for all cloneval errors."""


class UnsupportedLanguage(CloneValError):
    def __init__(self, language: str):
        super().__init__(f"unsupported language: {language!r} (only Java is supported)")
        self.language = language


class EmptyFragment(CloneValError):
    """A fragment has no comparable units at the requested granularity."""


class SingleClassTrainingSet(CloneValError):
    """Training requires at least one row of each class."""


class DivergedLoss(CloneValError):
    """Training loss became non-finite; the learning rate is likely too large."""


class DimensionMismatch(CloneValError):
    """Input vector dimensionality does not match the model."""


class EmptyPartition(CloneValError):
    """A baseline-model partition (true or false set) has no documents."""


class MalformedDocument(CloneValError):
    """A serialized model document cannot be parsed."""


class VersionMismatch(CloneValError):
    """A serialized model document was written by an incompatible version."""


class FeatureOrderMismatch(CloneValError):
    """A serialized model was trained on a different feature ordering."""


class InsufficientClasses(CloneValError):
    """A report needs examples of every class label."""


class InsufficientData(CloneValError):
    """Not enough rows for the requested split."""


class SingleClassLabels(CloneValError):
    """An evaluation needs both class labels present."""


class LengthMismatch(CloneValError):
    """Parallel sequences have different lengths."""


class NoMutableSite(CloneValError):
    """The fragment offers no site where the chosen mutation operator applies."""


class CorpusTooSmall(CloneValError):
    """Benchmark generation needs a larger fragment corpus."""


class ExhaustedResampling(CloneValError):
    """Could not draw an acceptable negative pair within the retry budget."""


class UnknownPair(CloneValError):
    def __init__(self, pair_id: str):
        super().__init__(f"no pair with id {pair_id!r} in the store")
        self.pair_id = pair_id


class MissingSourceFile(CloneValError):
    """An import row references a source file that cannot be read."""
