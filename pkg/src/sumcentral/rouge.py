"""ROUGE-N scoring of peer summaries against model summaries.

Matches are clipped n-gram counts, pooled over all model summaries:

.. math::

   R_n = \\frac{\\sum_{S} \\sum_{g \\in S} \\min(c_{peer}(g), c_S(g))}
              {\\sum_{S} \\sum_{g \\in S} c_S(g)}

Precision pools the peer n-gram count once per model summary, and F is the
harmonic mean of recall and precision.

Summaries are scored sentence by sentence: n-grams never span a sentence
boundary. Peer summaries hold one sentence per line.

Gold (model) summaries of an item are the ``*.txt`` files of the
``<gold>/<item-id>/`` directory.
"""
import collections
import dataclasses
import logging
import typing as t
from pathlib import Path

import pandas as pd

from .corpus import normalize_text
from .corpus import split_sentences
from .corpus import tokenize
from .exceptions import ConfigError
from .exceptions import DataError
from .exceptions import NoScorableOutputError

logger = logging.getLogger(__name__)

REPORT_COLUMNS = [
    "system",
    "item",
    "n",
    "recall",
    "precision",
    "f",
    "matched",
    "peer_total",
    "model_total",
]
"""Columns of a ROUGE report."""

ALL_ITEMS = "ALL"
"""Item label of the per-system aggregate rows."""

Ngram = t.Tuple[str, ...]
Sentences = t.Sequence[t.Sequence[str]]


@dataclasses.dataclass(frozen=True)
class NgramProfile:
    """Multiset of the n-grams of a token sequence."""

    n: int
    counts: t.Mapping[Ngram, int]

    @property
    def total(self) -> int:
        """Number of n-grams, with multiplicity."""
        return sum(self.counts.values())


@dataclasses.dataclass(frozen=True)
class RougeScore:
    """ROUGE-N scores of a peer summary.

    ``peer_total`` is the peer n-gram count times the number of model
    summaries, so that ``precision == matched / peer_total``.
    ``degenerate`` tells that every model summary was empty.
    """

    n: int
    recall: float
    precision: float
    f: float
    matched: int
    peer_total: int
    model_total: int
    degenerate: bool = False


def ngram_profile(tokens: t.Sequence[str], n: int) -> NgramProfile:
    """Count the n-grams of a token sequence.

    Raises
    ------
    ConfigError
        If ``n`` is smaller than 1.
    """
    if n < 1:
        raise ConfigError(f"n-gram order must be positive (got {n})")
    counts = collections.Counter(
        tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)
    )
    return NgramProfile(n=n, counts=counts)


def sentence_profile(sentences: Sentences, n: int) -> NgramProfile:
    """Count the n-grams of a sequence of sentences.

    Every sentence is windowed on its own, so that no n-gram spans two
    sentences.

    Raises
    ------
    ConfigError
        If ``n`` is smaller than 1.
    """
    if n < 1:
        raise ConfigError(f"n-gram order must be positive (got {n})")
    counts: t.Counter[Ngram] = collections.Counter()
    for sentence in sentences:
        counts.update(ngram_profile(sentence, n).counts)
    return NgramProfile(n=n, counts=counts)


def f_score(recall: float, precision: float) -> float:
    """Harmonic mean of recall and precision, 0 when either is 0."""
    if recall <= 0.0 or precision <= 0.0:
        return 0.0
    return 2.0 * recall * precision / (recall + precision)


def _score(
    peer: NgramProfile, models: t.Sequence[NgramProfile], n: int
) -> RougeScore:
    if not models:
        raise DataError("ROUGE needs at least one model summary")
    peer_counts = collections.Counter(peer.counts)
    matched = 0
    model_total = 0
    for model in models:
        counts = collections.Counter(model.counts)
        matched += sum((peer_counts & counts).values())
        model_total += sum(counts.values())
    peer_total = sum(peer_counts.values()) * len(models)

    degenerate = model_total == 0
    if degenerate:
        logger.warning("every model summary is empty at n = %d; recall is 0", n)
    recall = matched / model_total if model_total else 0.0
    precision = matched / peer_total if peer_total else 0.0
    return RougeScore(
        n=n,
        recall=recall,
        precision=precision,
        f=f_score(recall, precision),
        matched=matched,
        peer_total=peer_total,
        model_total=model_total,
        degenerate=degenerate,
    )


def rouge_n(
    peer: t.Sequence[str], models: t.Sequence[t.Sequence[str]], n: int
) -> RougeScore:
    """Score a peer summary against model summaries.

    Parameters
    ----------
    peer: sequence of str
        Peer summary tokens.

    models: sequence of sequences of str
        Tokens of every model summary.

    n: int
        N-gram order.

    Returns
    -------
    RougeScore
        Recall, precision and F scores.

    Raises
    ------
    DataError
        If there is no model summary.
    """
    return _score(
        ngram_profile(peer, n), [ngram_profile(model, n) for model in models], n
    )


def rouge_n_sentences(
    peer: Sentences, models: t.Sequence[Sentences], n: int
) -> RougeScore:
    """Score a sentence-segmented peer summary against model summaries.

    Same as :func:`rouge_n`, with n-grams counted within sentences.
    Adding whole sentences to the peer, at any position, never lowers recall.

    Raises
    ------
    DataError
        If there is no model summary.
    """
    return _score(
        sentence_profile(peer, n), [sentence_profile(model, n) for model in models], n
    )


def scoring_tokens(text: str) -> t.List[str]:
    """Word tokens of a text, punctuation excluded."""
    return [tok.surface for tok in tokenize(normalize_text(text)) if tok.is_word]


def scoring_sentences(text: str) -> t.List[t.List[str]]:
    """Word tokens of every sentence of a text.

    Lines are split into sentences; sentences without words are dropped.
    """
    sentences = []
    for line in normalize_text(text).split("\n"):
        for sentence in split_sentences(line):
            tokens = [tok.surface for tok in tokenize(sentence) if tok.is_word]
            if tokens:
                sentences.append(tokens)
    return sentences


def load_gold(
    gold_root: t.Union[str, Path], item_id: str
) -> t.List[t.List[t.List[str]]]:
    """Sentence tokens of the model summaries of an item.

    Empty when the item has no gold directory.

    Raises
    ------
    DataError
        If a model summary file cannot be read.
    """
    directory = Path(gold_root) / item_id
    if not directory.is_dir():
        return []
    models = []
    for path in sorted(directory.glob("*.txt")):
        try:
            models.append(scoring_sentences(path.read_text(encoding="utf-8")))
        except (OSError, UnicodeDecodeError) as e:
            raise DataError(f"cannot read gold summary '{path}': {e}") from e
    return models


def evaluate_run(
    peers: t.Mapping[str, t.Mapping[str, str]],
    gold_root: t.Union[str, Path],
    ns: t.Sequence[int] = (1, 2, 3),
) -> pd.DataFrame:
    """Score every peer summary of a run.

    Parameters
    ----------
    peers: mapping
        Summary texts, by system then by item id.

    gold_root: path-like
        Gold summaries root directory.

    ns: sequence of int
        N-gram orders.

    Returns
    -------
    DataFrame
        One row per (system, item, n), then one ``ALL`` row per (system, n)
        holding the mean recall, precision and F over items and the summed
        counts.

    Raises
    ------
    NoScorableOutputError
        If no item has a gold summary.
    """
    gold_root = Path(gold_root)
    if not gold_root.is_dir():
        raise DataError(f"gold directory '{gold_root}' does not exist")
    gold: t.Dict[str, t.List[t.List[t.List[str]]]] = {}
    rows = []
    for system in sorted(peers):
        for item in sorted(peers[system]):
            if item not in gold:
                gold[item] = load_gold(gold_root, item)
                if not gold[item]:
                    logger.warning("no gold summary for item '%s'; skipping", item)
            if not gold[item]:
                continue
            peer = scoring_sentences(peers[system][item])
            for n in ns:
                score = rouge_n_sentences(peer, gold[item], n)
                rows.append(
                    {
                        "system": system,
                        "item": item,
                        **{
                            k: v
                            for k, v in dataclasses.asdict(score).items()
                            if k != "degenerate"
                        },
                    }
                )
    if not rows:
        raise NoScorableOutputError("no summary could be scored")

    items = pd.DataFrame(rows, columns=REPORT_COLUMNS)
    aggregates = (
        items.groupby(["system", "n"], sort=True)
        .agg(
            recall=("recall", "mean"),
            precision=("precision", "mean"),
            f=("f", "mean"),
            matched=("matched", "sum"),
            peer_total=("peer_total", "sum"),
            model_total=("model_total", "sum"),
        )
        .reset_index()
        .assign(item=ALL_ITEMS)
    )
    report = pd.concat([items, aggregates[REPORT_COLUMNS]], ignore_index=True)
    report["_all"] = report["item"] == ALL_ITEMS
    report = report.sort_values(
        ["system", "_all", "item", "n"], kind="mergesort"
    ).drop(columns="_all")
    return report.reset_index(drop=True)


def write_report(report: pd.DataFrame, path: t.Union[str, Path]) -> None:
    """Write a ROUGE report as a tab-separated file."""
    report.to_csv(
        path,
        sep="\t",
        index=False,
        float_format="%.6f",
        encoding="utf-8",
        lineterminator="\n",
    )
