"""Token-trigram TF-IDF baseline scorer.

Each labeled pair becomes one document: the n-gram multiset over its two
fragments' level-1-normalized token texts, concatenated with a separator so
no n-gram bridges the fragments. A candidate is scored against the true and
false partitions by weight-averaged cosine similarity of TF-IDF vectors.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Sequence

from ..errors import EmptyPartition
from ..fragments import ClonePair, Label
from ..normalize import NormalizationLevel, normalize
from .common import Prediction

_SEPARATOR = "\x1f"


def term_frequency(term: tuple, doc: Counter) -> float:
    """Occurrences of the n-gram over the document's n-gram count."""
    total = sum(doc.values())
    return doc.get(term, 0) / total if total else 0.0


def inverse_document_frequency(term: tuple, docs: Sequence[Counter]) -> float:
    """log(|D| / (1 + |{d : term in d}|)); unseen terms get log(|D|)."""
    containing = sum(1 for d in docs if term in d)
    return math.log(len(docs) / (1 + containing))


def _ngrams(texts: list[str], order: int) -> Counter:
    return Counter(tuple(texts[i : i + order]) for i in range(len(texts) - order + 1))


class TfIdfCloneScorer:
    """Cosine-similarity scorer over labeled clone-pair documents."""

    kind = "tfidf-baseline"

    def __init__(self, ngram_order: int = 3):
        if ngram_order < 1:
            raise ValueError("ngram_order must be >= 1")
        self.ngram_order = ngram_order

    def get_params(self) -> dict:
        return {"ngram_order": self.ngram_order}

    def document(self, pair: ClonePair) -> Counter:
        texts = [t.text for t in normalize(pair.fragment1, NormalizationLevel.TYPE1).tokens]
        texts.append(_SEPARATOR)
        texts.extend(t.text for t in normalize(pair.fragment2, NormalizationLevel.TYPE1).tokens)
        return _ngrams(texts, self.ngram_order)

    def fit(
        self, pairs: Sequence[ClonePair], weights: dict[str, float] | None = None
    ) -> "TfIdfCloneScorer":
        """Partition labeled pairs into the true/false document sets.

        Raises EmptyPartition unless both partitions receive a document.
        Weights default to 1.0 per document (boolean marking).
        """
        self.true_docs_: list[tuple[Counter, float]] = []
        self.false_docs_: list[tuple[Counter, float]] = []
        for pair in pairs:
            if pair.label is Label.UNLABELED:
                continue
            weight = 1.0 if weights is None else weights.get(pair.id, 1.0)
            doc = self.document(pair)
            if pair.label is Label.TRUE_POSITIVE:
                self.true_docs_.append((doc, weight))
            else:
                self.false_docs_.append((doc, weight))
        if not self.true_docs_ or not self.false_docs_:
            raise EmptyPartition("both true and false partitions need at least one document")
        self.all_docs_ = [d for d, _ in self.true_docs_] + [d for d, _ in self.false_docs_]
        self._idf_cache: dict[tuple, float] = {}
        return self

    def _idf(self, term: tuple) -> float:
        cached = self._idf_cache.get(term)
        if cached is None:
            cached = inverse_document_frequency(term, self.all_docs_)
            self._idf_cache[term] = cached
        return cached

    def _vector(self, doc: Counter) -> dict[tuple, float]:
        total = sum(doc.values())
        if not total:
            return {}
        return {term: (count / total) * self._idf(term) for term, count in doc.items()}

    @staticmethod
    def _cosine(a: dict[tuple, float], b: dict[tuple, float]) -> float:
        norm_a = math.sqrt(sum(v * v for v in a.values()))
        norm_b = math.sqrt(sum(v * v for v in b.values()))
        if norm_a == 0.0 or norm_b == 0.0:
            return 0.0
        if len(a) > len(b):
            a, b = b, a
        dot = sum(v * b.get(term, 0.0) for term, v in a.items())
        return dot / (norm_a * norm_b)

    def partition_score(self, candidate_vector: dict, docs: list[tuple[Counter, float]]) -> float:
        weight_total = sum(w for _, w in docs)
        if weight_total == 0.0:
            return 0.0
        acc = sum(self._cosine(candidate_vector, self._vector(doc)) * w for doc, w in docs)
        return acc / weight_total

    def score(self, candidate: ClonePair) -> Prediction:
        """Renormalized (P_true, P_false) membership scores for a pair."""
        if not self.true_docs_ or not self.false_docs_:
            raise EmptyPartition("scorer was not fitted with both partitions")
        vector = self._vector(self.document(candidate))
        p_true = self.partition_score(vector, self.true_docs_)
        p_false = self.partition_score(vector, self.false_docs_)
        total = p_true + p_false
        if total <= 0.0:
            return Prediction(0.5, 0.5)
        return Prediction(p_true / total, p_false / total)
