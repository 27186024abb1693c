"""Feature-scoring summarizer.

Every sentence gets eight length-normalized features and the additive score
:math:`W(s_i) = \\sum_j c_j p_{ij}`.
Sentences are then picked greedily by decreasing score, skipping sentences
whose token length lies outside the interquartile range of the corpus
sentence lengths and sentences too similar, in the latent semantic space, to
those already picked.
The summary lists the picked sentences in temporal order.
"""
import dataclasses
import logging
import re
import typing as t

import numpy as np
import numpy.typing as npt

from .constants import FEATURE_NAMES
from .constants import MAX_SENTENCES
from .constants import MULTI_STRATEGIES
from .constants import NUM_FEATURES
from .constants import REDUNDANCY_AGGREGATES
from .constants import STOPWORD_POLICIES
from .constants import THRESHOLDS
from .corpus import Corpus
from .corpus import Document
from .corpus import IS_LATIN_SCRIPT
from .corpus import IS_PARENTHESIS
from .corpus import IS_PERCENT_SIGN
from .corpus import IS_PRONOUN
from .corpus import IS_PROPER_NOUN
from .corpus import IS_QUOTE_MARK
from .corpus import IS_STOPWORD
from .corpus import Lexicons
from .corpus import Sentence
from .corpus import SentenceRef
from .corpus import tokenize
from .corpus import Topic
from .exceptions import ConfigError
from .exceptions import DataError
from .vectorize import cosine
from .vectorize import lsa_vectors
from .vectorize import LsaModel

logger = logging.getLogger(__name__)

Item = t.Union[Document, Topic]

_AGGREGATES: t.Dict[str, t.Callable[[npt.NDArray[np.float64]], t.Any]] = {
    "min": np.min,
    "median": np.median,
    "max": np.max,
}

_LINE_BREAK_RE = re.compile("[\n\r\x0b\x0c\x1c-\x1e\x85\u2028\u2029]")


@dataclasses.dataclass(frozen=True)
class Summary:
    """Sentences extracted from a document or a topic, in temporal order.

    ``source_size`` is the number of sentences of the summarized item.
    """

    system: str
    item_id: str
    sentences: t.Tuple[Sentence, ...]
    source_size: int
    parameters: t.Mapping[str, t.Any] = dataclasses.field(default_factory=dict)

    @property
    def references(self) -> t.List[SentenceRef]:
        """(document id, position) of every sentence in its source file."""
        return [s.origin for s in self.sentences]

    @property
    def compression_ratio(self) -> float:
        """Realized compression ratio."""
        if self.source_size == 0:
            return 0.0
        return len(self.sentences) / self.source_size

    def lines(self) -> t.List[str]:
        """Sentence texts with line breaks replaced by spaces."""
        return [_LINE_BREAK_RE.sub(" ", s.text) for s in self.sentences]

    def __len__(self) -> int:
        """Number of sentences."""
        return len(self.sentences)


@dataclasses.dataclass(frozen=True)
class FeatureVector:
    """The eight sentence features, each normalized by the sentence length."""

    title_words: float
    reciprocal_length: float
    proper_nouns: float
    latin_words: float
    quote_marks: float
    non_pronouns: float
    percent_signs: float
    non_parentheses: float

    def as_array(self) -> npt.NDArray[np.float64]:
        """Features in weight order."""
        return np.array([getattr(self, name) for name in FEATURE_NAMES])


@dataclasses.dataclass(frozen=True)
class ScoreConfig:
    """Parameters of the feature-scoring summarizer.

    Parameters
    ----------
    weights: tuple of float
        Feature weights :math:`c_1, \\dots, c_8`.

    cosine_threshold: float
        A sentence whose aggregated cosine to the selected sentences exceeds
        this value is skipped.

    max_sentences: int
        Summary length.

    redundancy: str
        Aggregate of the cosines to the selected sentences: ``"min"``,
        ``"median"`` or ``"max"``.

    multi_strategy: str
        ``"concatenate"`` summarizes the concatenated topic documents,
        ``"resummarize"`` summarizes the concatenation of the per-document
        summaries.

    lsa_stopwords: str
        Stop-word policy of the latent vectors.

    Raises
    ------
    ConfigError
        If a value is out of range.
    """

    weights: t.Tuple[float, ...] = (1.0,) * NUM_FEATURES
    cosine_threshold: float = THRESHOLDS[0]
    max_sentences: int = MAX_SENTENCES
    redundancy: str = "min"
    multi_strategy: str = "concatenate"
    lsa_stopwords: str = "remove"

    def __post_init__(self) -> None:
        """Validate the parameters."""
        if len(self.weights) != NUM_FEATURES:
            raise ConfigError(
                f"expected {NUM_FEATURES} feature weights (got {len(self.weights)})"
            )
        if not 0.0 <= self.cosine_threshold <= 1.0:
            raise ConfigError(
                f"cosine threshold must be in [0, 1] (got {self.cosine_threshold})"
            )
        if self.max_sentences < 1:
            raise ConfigError(
                f"max_sentences must be positive (got {self.max_sentences})"
            )
        if self.redundancy not in REDUNDANCY_AGGREGATES:
            raise ConfigError(f"unknown redundancy aggregate '{self.redundancy}'")
        if self.multi_strategy not in MULTI_STRATEGIES:
            raise ConfigError(
                f"unknown multi-document strategy '{self.multi_strategy}'"
            )
        if self.lsa_stopwords not in STOPWORD_POLICIES:
            raise ConfigError(f"unknown stop-word policy '{self.lsa_stopwords}'")

    @property
    def system_id(self) -> str:
        """System identifier, e.g. ``parsumist-t0.1``."""
        return f"parsumist-t{self.cosine_threshold:g}"

    def snapshot(self) -> t.Dict[str, t.Any]:
        """Parameters as a JSON-compatible dictionary."""
        return {
            "weights": list(self.weights),
            "cosine_threshold": self.cosine_threshold,
            "max_sentences": self.max_sentences,
            "redundancy": self.redundancy,
            "multi_strategy": self.multi_strategy,
            "lsa_stopwords": self.lsa_stopwords,
        }


def title_words(document: Document) -> t.FrozenSet[str]:
    """Word surfaces of a document title, stop words excluded."""
    return frozenset(
        tok.surface
        for tok in document.title_tokens
        if tok.is_word and not tok.has(IS_STOPWORD)
    )


def extract_features(
    sentence: Sentence,
    document: Document,
    title: t.Optional[t.AbstractSet[str]] = None,
) -> FeatureVector:
    """Compute the features of a sentence.

    Parameters
    ----------
    sentence: Sentence
        Tokenized sentence with token flags.

    document: Document
        Document holding the sentence.

    title: set of str, optional
        Title words; computed from ``document`` when omitted.

    Returns
    -------
    FeatureVector
        Sentence features.

    Raises
    ------
    DataError
        If the sentence has no token.
    """
    length = sentence.length
    if length == 0:
        raise DataError(
            f"sentence {sentence.doc_position} of '{document.id}' has no token"
        )
    if title is None:
        title = title_words(document)

    def share(predicate: t.Callable[..., bool]) -> float:
        return sum(1 for tok in sentence.tokens if predicate(tok)) / length

    return FeatureVector(
        title_words=share(lambda tok: tok.is_word and tok.surface in title),
        reciprocal_length=1.0 / length,
        proper_nouns=share(lambda tok: tok.has(IS_PROPER_NOUN)),
        latin_words=share(lambda tok: tok.is_word and tok.has(IS_LATIN_SCRIPT)),
        quote_marks=share(lambda tok: tok.has(IS_QUOTE_MARK)),
        non_pronouns=share(lambda tok: not tok.has(IS_PRONOUN)),
        percent_signs=share(lambda tok: tok.has(IS_PERCENT_SIGN)),
        non_parentheses=share(lambda tok: not tok.has(IS_PARENTHESIS)),
    )


def score_sentence(features: FeatureVector, config: ScoreConfig) -> float:
    """Weighted sum of the features."""
    return float(np.dot(np.asarray(config.weights, dtype=float), features.as_array()))


def length_bounds(
    lengths: t.Union[Corpus, t.Sequence[int]]
) -> t.Tuple[float, float]:
    """First and third quartiles of sentence token lengths.

    Quartiles are interpolated linearly between order statistics.

    Raises
    ------
    DataError
        If there is no sentence.
    """
    if isinstance(lengths, Corpus):
        lengths = lengths.sentence_lengths()
    if len(lengths) == 0:
        raise DataError("cannot compute quartiles without sentences")
    q1, q3 = np.percentile(np.asarray(lengths, dtype=float), [25.0, 75.0])
    return float(q1), float(q3)


def select_sentences(
    document: Document,
    scores: t.Sequence[float],
    vectors: npt.NDArray[np.float64],
    config: ScoreConfig,
    bounds: t.Tuple[float, float],
) -> Summary:
    """Pick sentences greedily.

    Candidates are visited by decreasing score, earlier sentences first on
    ties.
    A candidate is skipped when its token length is outside ``bounds`` or
    when the aggregate of its cosines to the sentences already picked exceeds
    the cosine threshold; the first admitted candidate is always picked.
    The pass stops once ``config.max_sentences`` sentences are picked.

    Parameters
    ----------
    document: Document
        Candidate sentences.

    scores: sequence of float
        One score per sentence.

    vectors: array
        One latent vector (row) per sentence.

    config: ScoreConfig
        Summarizer parameters.

    bounds: tuple of float
        Inclusive token length bounds (Q1, Q3).

    Returns
    -------
    Summary
        Picked sentences, in temporal order.
    """
    n = len(document.sentences)
    if len(scores) != n or len(vectors) != n:
        raise DataError(
            f"expected {n} scores and vectors (got {len(scores)} and {len(vectors)})"
        )
    aggregate = _AGGREGATES[config.redundancy]
    q1, q3 = bounds
    selected: t.List[int] = []
    for i in sorted(range(n), key=lambda i: (-scores[i], i)):
        if len(selected) >= config.max_sentences:
            break
        if not q1 <= document.sentences[i].length <= q3:
            continue
        if selected:
            sims = np.array([cosine(vectors[i], vectors[j]) for j in selected])
            if float(aggregate(sims)) > config.cosine_threshold:
                logger.debug(
                    "'%s' sentence %d too close to the selection", document.id, i
                )
                continue
        selected.append(i)

    parameters = config.snapshot()
    parameters.update(q1=q1, q3=q3)
    return Summary(
        system=config.system_id,
        item_id=document.id,
        sentences=tuple(document.sentences[i] for i in sorted(selected)),
        source_size=n,
        parameters=parameters,
    )


def synthetic_document(
    doc_id: str,
    title: str,
    sentences: t.Iterable[Sentence],
    lexicons: t.Optional[Lexicons] = None,
) -> Document:
    """Assemble a document from sentences of other documents.

    Sentences are re-numbered and keep their origin.
    """
    return Document(
        id=doc_id,
        title=title,
        sentences=tuple(
            dataclasses.replace(s, doc_position=i) for i, s in enumerate(sentences)
        ),
        source_topic=doc_id,
        title_tokens=tuple(tokenize(title, lexicons)),
    )


def concat_topic(topic: Topic, lexicons: t.Optional[Lexicons] = None) -> Document:
    """Concatenate the documents of a topic, in ingestion order.

    Raises
    ------
    DataError
        If the topic has no document.
    """
    if not topic.documents:
        raise DataError(f"topic '{topic.id}' has no document")
    return synthetic_document(
        topic.id,
        topic.title,
        (s for doc in topic.documents for s in doc.sentences),
        lexicons,
    )


def _summarize_document(
    document: Document,
    model: LsaModel,
    bounds: t.Tuple[float, float],
    config: ScoreConfig,
) -> Summary:
    title = title_words(document)
    scores = [
        score_sentence(extract_features(s, document, title), config)
        for s in document.sentences
    ]
    vectors = lsa_vectors(model, document.sentences, config.lsa_stopwords)
    return select_sentences(document, scores, vectors, config, bounds)


def summarize_parsumist(
    item: Item,
    model: LsaModel,
    bounds: t.Tuple[float, float],
    config: t.Optional[ScoreConfig] = None,
    lexicons: t.Optional[Lexicons] = None,
) -> Summary:
    """Summarize a document or a topic with the feature-scoring summarizer.

    Parameters
    ----------
    item: Document or Topic
        Item to summarize.

    model: LsaModel
        Latent semantic model used for the redundancy check.

    bounds: tuple of float
        Sentence length bounds, see :func:`length_bounds`.

    config: ScoreConfig, optional
        Summarizer parameters.

    lexicons: Lexicons, optional
        Word lists used to flag topic titles.

    Returns
    -------
    Summary
        The summary, in temporal order.
    """
    if config is None:
        config = ScoreConfig()
    if isinstance(item, Document):
        return _summarize_document(item, model, bounds, config)

    if config.multi_strategy == "concatenate":
        document = concat_topic(item, lexicons)
    else:
        if not item.documents:
            raise DataError(f"topic '{item.id}' has no document")
        partial = [
            _summarize_document(doc, model, bounds, config) for doc in item.documents
        ]
        document = synthetic_document(
            item.id, item.title, (s for p in partial for s in p.sentences), lexicons
        )
    summary = _summarize_document(document, model, bounds, config)
    return dataclasses.replace(
        summary, source_size=sum(len(doc.sentences) for doc in item.documents)
    )
