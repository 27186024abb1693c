"""Sentence-graph centrality summarizers.

A document (or the concatenation of the documents of a topic) is turned into
a complete undirected graph whose nodes are sentences and whose edge weights
are the cosine similarities of the sentence vectors.
Sentences are ranked by a centrality measure and the top
:math:`k = \\max(1, \\lfloor r n + 1/2 \\rfloor)` of them, :math:`r` being the
compression ratio, are returned in temporal order.

Measures
--------
* ``Str``: strength (weighted degree).
* ``Clu``: weighted local clustering coefficient (Barrat).
* ``Div``: structural diversity index (normalized entropy of the incident
  weights), ranked in ascending order.
* ``Pag``: weighted PageRank.
* ``Bet``: weighted betweenness.
* ``Clo``: weighted closeness.
* ``Eig``: eigenvector centrality.

Zero-weight edges are absent for ``Clu``, ``Div``, ``Bet`` and ``Clo``.
``Bet`` and ``Clo`` read edge weights as lengths, or ``1 - weight`` as
lengths when distances are inverted. Inverted lengths are floored at
:data:`~sumcentral.constants.MIN_DISTANCE`, so a pair of identical sentences
is joined by a short edge rather than a zero-length one.
"""
import dataclasses
import datetime
import logging
import math
import typing as t

import networkx as nx
import numpy as np
import numpy.typing as npt
import xarray as xr

from ._version import _version
from .constants import ASCENDING_MEASURES
from .constants import BASELINES
from .constants import DAMPING
from .constants import MEASURES
from .constants import MIN_DISTANCE
from .constants import POWER_MAX_ITER
from .constants import POWER_TOL
from .constants import TIE_DECIMALS
from .constants import VECTOR_SPACES
from .corpus import Document
from .corpus import Lexicons
from .corpus import Sentence
from .exceptions import ConfigError
from .exceptions import DataError
from .parsumist import concat_topic
from .parsumist import Item
from .parsumist import Summary
from .vectorize import check_scheme
from .vectorize import cosine_matrix
from .vectorize import IdfTable
from .vectorize import lsa_vectors
from .vectorize import LsaModel
from .vectorize import sentence_matrix

logger = logging.getLogger(__name__)

Array = npt.NDArray[np.float64]


@dataclasses.dataclass(frozen=True)
class VectorConfig:
    """Sentence vector configuration of a graph."""

    scheme: str = "tf"
    stopword_policy: str = "keep"
    space: str = "term"

    def __post_init__(self) -> None:
        """Validate the configuration."""
        check_scheme(self.scheme, self.stopword_policy)
        if self.space not in VECTOR_SPACES:
            raise ConfigError(f"unknown vector space '{self.space}'")

    @property
    def tag(self) -> str:
        """Short label, e.g. ``tfidf-remove`` or ``tf-remove-lsa``."""
        tag = f"{self.scheme}-{self.stopword_policy}"
        return tag if self.space == "term" else f"{tag}-lsa"


@dataclasses.dataclass(frozen=True)
class SentenceGraph:
    """Complete weighted sentence graph.

    ``weights`` is symmetric, with a zero diagonal and entries in [0, 1].
    """

    sentences: t.Tuple[Sentence, ...]
    weights: Array
    config: VectorConfig = VectorConfig()

    @property
    def n(self) -> int:
        """Number of nodes."""
        return len(self.sentences)

    @property
    def edge_count(self) -> int:
        """Number of edges of the complete graph."""
        return self.n * (self.n - 1) // 2


@dataclasses.dataclass(frozen=True)
class CentralityScores:
    """Scores of one centrality measure, one per node."""

    measure: str
    scores: Array

    @property
    def ascending(self) -> bool:
        """``True`` when low scores mark central nodes."""
        return self.measure in ASCENDING_MEASURES


def build_sentence_graph(
    sentences: t.Sequence[Sentence],
    config: t.Optional[VectorConfig] = None,
    model: t.Optional[LsaModel] = None,
    idf: t.Optional[IdfTable] = None,
) -> SentenceGraph:
    """Build the complete cosine-similarity graph of sentences.

    Parameters
    ----------
    sentences: sequence of Sentence
        Nodes, in temporal order.

    config: VectorConfig, optional
        Sentence vector configuration.

    model: LsaModel, optional
        Latent semantic model, required in the ``lsa`` space.

    idf: IdfTable, optional
        Idf table of the tfidf scheme; when omitted, the sentences are taken
        as the documents.

    Returns
    -------
    SentenceGraph
        The graph. Sentences with a zero vector get zero weights. Negative
        cosines, which only occur in the ``lsa`` space, are clipped to 0 so
        that the two sentences are not linked.

    Raises
    ------
    ConfigError
        If the ``lsa`` space is requested without a model.

    DataError
        If there is no sentence.
    """
    if config is None:
        config = VectorConfig()
    if not sentences:
        raise DataError("cannot build a graph without sentences")
    if config.space == "lsa":
        if model is None:
            raise ConfigError("the lsa vector space requires a latent model")
        rows: t.Any = lsa_vectors(
            model, sentences, config.stopword_policy, config.scheme, idf
        )
    else:
        rows, _ = sentence_matrix(
            sentences, None, config.scheme, config.stopword_policy, idf
        )
    weights = np.clip(cosine_matrix(rows), 0.0, 1.0)
    np.fill_diagonal(weights, 0.0)
    return SentenceGraph(tuple(sentences), weights, config)


def _strength(w: Array) -> Array:
    return np.asarray(w.sum(axis=1), dtype=np.float64)


def _clustering(w: Array) -> Array:
    a = (w > 0).astype(np.float64)
    kappa = a.sum(axis=1)
    s = w.sum(axis=1)
    numerator = (w * (a @ a)).sum(axis=1)
    denominator = s * (kappa - 1.0)
    scores = np.zeros(len(w))
    ok = (kappa >= 2) & (denominator > 0)
    scores[ok] = numerator[ok] / denominator[ok]
    return scores


def _diversity(w: Array) -> Array:
    scores = np.zeros(len(w))
    for i, row in enumerate(w):
        positive = row[row > 0]
        if len(positive) < 2:
            continue
        p = positive / positive.sum()
        scores[i] = float(-(p * np.log(p)).sum() / math.log(len(positive)))
    return np.clip(scores, 0.0, 1.0)


def _power_iteration(step: t.Callable[[Array], Array], x: Array, measure: str) -> Array:
    for _ in range(POWER_MAX_ITER):
        nxt = step(x)
        if np.abs(nxt - x).sum() < POWER_TOL:
            return nxt
        x = nxt
    logger.warning(
        "%s power iteration stopped after %d iterations", measure, POWER_MAX_ITER
    )
    return x


def _pagerank(w: Array, damping: float = DAMPING) -> Array:
    n = len(w)
    s = w.sum(axis=1)
    transition = np.full((n, n), 1.0 / n)
    dangling = s == 0
    transition[~dangling] = w[~dangling] / s[~dangling, np.newaxis]
    teleport = (1.0 - damping) / n

    def step(x: Array) -> Array:
        return np.asarray(teleport + damping * (x @ transition), dtype=np.float64)

    x = _power_iteration(step, np.full(n, 1.0 / n), "Pag")
    return np.asarray(x / x.sum(), dtype=np.float64)


def _eigenvector(w: Array) -> Array:
    shifted = w + np.eye(len(w))

    def step(x: Array) -> Array:
        y = shifted @ x
        return np.asarray(y / y.max(), dtype=np.float64)

    return _power_iteration(step, np.ones(len(w)), "Eig")


def distance_graph(w: Array, invert_distances: bool = False) -> nx.Graph:
    """Graph of the positive-weight edges, with a ``distance`` attribute.

    Inverted lengths ``1 - weight`` are at least
    :data:`~sumcentral.constants.MIN_DISTANCE`.
    """
    graph = nx.Graph()
    graph.add_nodes_from(range(len(w)))
    rows, cols = np.nonzero(np.triu(w, k=1))
    for i, j in zip(rows.tolist(), cols.tolist()):
        length = float(w[i, j])
        if invert_distances:
            length = max(1.0 - length, MIN_DISTANCE)
        graph.add_edge(i, j, distance=length)
    return graph


def _betweenness(w: Array, invert_distances: bool) -> Array:
    graph = distance_graph(w, invert_distances)
    bet = nx.betweenness_centrality(graph, weight="distance", normalized=False)
    return np.array([bet[i] for i in range(len(w))], dtype=np.float64)


def _closeness(w: Array, invert_distances: bool) -> Array:
    n = len(w)
    graph = distance_graph(w, invert_distances)
    scores = np.zeros(n)
    if graph.number_of_edges() == 0:
        return scores
    max_edge = max(d for _, _, d in graph.edges(data="distance"))
    unreachable = n * max_edge
    for i, lengths in nx.all_pairs_dijkstra_path_length(graph, weight="distance"):
        if graph.degree(i) == 0:
            continue
        total = sum(lengths.get(j, unreachable) for j in range(n) if j != i)
        if total > 0:
            scores[i] = 1.0 / total
    return scores


def centrality(
    graph: SentenceGraph, measure: str, invert_distances: bool = False
) -> CentralityScores:
    """Compute a centrality measure on every node of a sentence graph.

    Parameters
    ----------
    graph: SentenceGraph
        Sentence graph.

    measure: str
        Measure code, one of :data:`~sumcentral.constants.MEASURES`.

    invert_distances: bool, default False
        If ``True``, ``Bet`` and ``Clo`` use ``1 - weight`` as edge length,
        floored at :data:`~sumcentral.constants.MIN_DISTANCE`.

    Returns
    -------
    CentralityScores
        One score per node. On a single node graph every measure is 0, except
        PageRank which is 1.

    Raises
    ------
    ConfigError
        If the measure is unknown.
    """
    if measure not in MEASURES:
        raise ConfigError(f"unknown centrality measure '{measure}'")
    w = graph.weights
    if graph.n == 1:
        return CentralityScores(measure, np.array([1.0 if measure == "Pag" else 0.0]))

    if measure == "Str":
        scores = _strength(w)
    elif measure == "Clu":
        scores = _clustering(w)
    elif measure == "Div":
        scores = _diversity(w)
    elif measure == "Pag":
        scores = _pagerank(w)
    elif measure == "Bet":
        scores = _betweenness(w, invert_distances)
    elif measure == "Clo":
        scores = _closeness(w, invert_distances)
    else:
        scores = _eigenvector(w)
    return CentralityScores(measure, scores)


def rank_nodes(scores: CentralityScores) -> t.List[int]:
    """Order nodes from most to least central.

    Scores equal to :data:`~sumcentral.constants.TIE_DECIMALS` decimals tie,
    and ties keep temporal order.
    """
    keys = np.round(scores.scores, TIE_DECIMALS)
    if not scores.ascending:
        keys = -keys
    return [int(i) for i in np.argsort(keys, kind="stable")]


def summary_size(ratio: float, n: int) -> int:
    """Number of sentences kept at a compression ratio.

    Raises
    ------
    ConfigError
        If the ratio is not in (0, 1].
    """
    if not 0.0 < ratio <= 1.0:
        raise ConfigError(f"compression ratio must be in (0, 1] (got {ratio})")
    return max(1, math.floor(ratio * n + 0.5))


def _as_document(item: Item, lexicons: t.Optional[Lexicons]) -> Document:
    if isinstance(item, Document):
        return item
    return concat_topic(item, lexicons)


def summarize_centrality(
    item: Item,
    measure: str,
    ratio: float,
    config: t.Optional[VectorConfig] = None,
    model: t.Optional[LsaModel] = None,
    idf: t.Optional[IdfTable] = None,
    invert_distances: bool = False,
    lexicons: t.Optional[Lexicons] = None,
) -> Summary:
    """Summarize a document or a topic with a centrality measure.

    Parameters
    ----------
    item: Document or Topic
        Item to summarize; topics are concatenated first.

    measure: str
        Centrality measure code.

    ratio: float
        Compression ratio, in (0, 1].

    config: VectorConfig, optional
        Sentence vector configuration.

    model: LsaModel, optional
        Latent semantic model, required in the ``lsa`` space.

    idf: IdfTable, optional
        Idf table of the tfidf scheme.

    invert_distances: bool, default False
        Edge length convention of ``Bet`` and ``Clo``.

    lexicons: Lexicons, optional
        Word lists used to flag topic titles.

    Returns
    -------
    Summary
        The top k sentences, in temporal order.
    """
    if config is None:
        config = VectorConfig()
    document = _as_document(item, lexicons)
    k = summary_size(ratio, len(document.sentences))
    graph = build_sentence_graph(document.sentences, config, model, idf)
    order = rank_nodes(centrality(graph, measure, invert_distances))
    return Summary(
        system=f"centrality-{measure}-{config.tag}",
        item_id=document.id,
        sentences=tuple(document.sentences[i] for i in sorted(order[:k])),
        source_size=graph.n,
        parameters={
            "measure": measure,
            "scheme": config.scheme,
            "stopword_policy": config.stopword_policy,
            "space": config.space,
            "ratio": ratio,
            "invert_distances": invert_distances,
        },
    )


def baseline_summary(
    item: Item,
    kind: str,
    ratio: float,
    seed: t.Optional[int] = None,
    lexicons: t.Optional[Lexicons] = None,
) -> Summary:
    """First, last or random k sentences of a document or a topic.

    Raises
    ------
    ConfigError
        If the kind is unknown, or ``seed`` is missing for ``Ran``.
    """
    if kind not in BASELINES:
        raise ConfigError(f"unknown baseline '{kind}'")
    if kind == "Ran" and seed is None:
        raise ConfigError("the random baseline requires a seed")
    document = _as_document(item, lexicons)
    n = len(document.sentences)
    k = summary_size(ratio, n)
    if kind == "Fir":
        picked = list(range(k))
    elif kind == "Las":
        picked = list(range(n - k, n))
    else:
        # draws are nested across ratios
        order = np.random.default_rng(seed).permutation(n)
        picked = sorted(int(i) for i in order[:k])
    parameters: t.Dict[str, t.Any] = {"baseline": kind, "ratio": ratio}
    if kind == "Ran":
        parameters["seed"] = seed
    return Summary(
        system=f"baseline-{kind}",
        item_id=document.id,
        sentences=tuple(document.sentences[i] for i in picked),
        source_size=n,
        parameters=parameters,
    )


def graph_dataset(
    graph: SentenceGraph, item_id: str, invert_distances: bool = False
) -> xr.Dataset:  # type: ignore
    """Weights and centralities of a sentence graph as a data set.

    Parameters
    ----------
    graph: SentenceGraph
        Sentence graph.

    item_id: str
        Identifier of the summarized item.

    invert_distances: bool, default False
        Edge length convention of ``Bet`` and ``Clo``.

    Returns
    -------
    Dataset
        Data set with the weight matrix (``node``, ``node_other``) and the
        centrality scores (``measure``, ``node``).
    """
    scores = np.stack([centrality(graph, m, invert_distances).scores for m in MEASURES])
    nodes = np.arange(graph.n)
    data_vars = {
        "weight": (
            ("node", "node_other"),
            graph.weights,
            {"long_name": "edge weight", "units": "dimensionless"},
        ),
        "centrality": (
            ("measure", "node"),
            scores,
            {"long_name": "centrality score", "units": "dimensionless"},
        ),
        "document": (
            "node",
            np.array([s.origin.document_id for s in graph.sentences], dtype=object),
            {"long_name": "source document"},
        ),
        "position": (
            "node",
            np.array([s.origin.position for s in graph.sentences]),
            {"long_name": "position in source document"},
        ),
    }
    coords = {
        "node": ("node", nodes, {"long_name": "sentence index"}),
        "node_other": ("node_other", nodes, {"long_name": "sentence index"}),
        "measure": ("measure", list(MEASURES), {"long_name": "centrality measure"}),
    }
    attrs = {
        "title": f"Sentence graph of '{item_id}'",
        "item": item_id,
        "vectors": graph.config.tag,
        "invert_distances": int(invert_distances),
        "history": (
            f"{datetime.datetime.utcnow().strftime('%Y-%m-%d %H:%M:%S')}"
            f" - data set creation - sumcentral, version {_version}"
        ),
        "source": f"sumcentral, version {_version}",
    }
    return xr.Dataset(data_vars, coords, attrs)  # type: ignore
