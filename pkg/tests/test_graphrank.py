"""Test cases for the graphrank module."""
import itertools
import typing as t

import numpy as np
import numpy.typing as npt
import pytest

from sumcentral import graphrank
from sumcentral.constants import MEASURES
from sumcentral.constants import MIN_DISTANCE
from sumcentral.corpus import Corpus
from sumcentral.corpus import Document
from sumcentral.corpus import Lexicons
from sumcentral.corpus import make_document
from sumcentral.corpus import SentenceRef
from sumcentral.corpus import Topic
from sumcentral.exceptions import ConfigError
from sumcentral.exceptions import DataError
from sumcentral.graphrank import baseline_summary
from sumcentral.graphrank import build_sentence_graph
from sumcentral.graphrank import centrality
from sumcentral.graphrank import CentralityScores
from sumcentral.graphrank import graph_dataset
from sumcentral.graphrank import rank_nodes
from sumcentral.graphrank import SentenceGraph
from sumcentral.graphrank import summarize_centrality
from sumcentral.graphrank import summary_size
from sumcentral.graphrank import VectorConfig
from sumcentral.parsumist import Summary
from sumcentral.rouge import rouge_n
from sumcentral.rouge import scoring_tokens
from sumcentral.vectorize import build_term_doc_matrix
from sumcentral.vectorize import truncated_svd

Array = npt.NDArray[np.float64]


def graph_of(w: t.Sequence[t.Sequence[float]]) -> SentenceGraph:
    """Sentence graph with the given weights."""
    w = np.asarray(w, dtype=np.float64)
    doc = make_document("g", "", " ".join(f"s{i}." for i in range(len(w))))
    return SentenceGraph(doc.sentences, w)


def random_weights(rng: np.random.Generator, zeros: float) -> Array:
    """Random symmetric weights in (0.05, 0.95), some of them zero."""
    n = int(rng.integers(2, 9))
    w = np.triu(rng.uniform(0.05, 0.95, size=(n, n)), k=1)
    w[rng.uniform(size=(n, n)) < zeros] = 0.0
    w = np.triu(w, k=1)
    return np.asarray(w + w.T, dtype=np.float64)


def shortest_paths(
    distance: Array,
) -> t.Dict[t.Tuple[int, int], t.Tuple[float, t.List[t.List[int]]]]:
    """Length and node lists of the shortest paths of every connected pair.

    Enumerates every simple path; a zero distance means no edge.
    """
    n = len(distance)
    found: t.Dict[t.Tuple[int, int], t.List[t.Tuple[float, t.List[int]]]] = {}

    def walk(path: t.List[int], length: float) -> None:
        head = path[-1]
        if len(path) > 1 and path[0] < head:
            found.setdefault((path[0], head), []).append((length, list(path)))
        for nxt in range(n):
            if distance[head, nxt] > 0.0 and nxt not in path:
                path.append(nxt)
                walk(path, length + distance[head, nxt])
                path.pop()

    for source in range(n):
        walk([source], 0.0)

    result = {}
    for pair, paths in found.items():
        best = min(length for length, _ in paths)
        result[pair] = (
            best,
            [p for length, p in paths if length <= best * (1.0 + 1e-12)],
        )
    return result


def betweenness_oracle(distance: Array) -> Array:
    """Share of the shortest paths through each node, over all pairs."""
    scores = np.zeros(len(distance))
    for _, paths in shortest_paths(distance).values():
        for path in paths:
            for node in path[1:-1]:
                scores[node] += 1.0 / len(paths)
    return scores


def closeness_oracle(distance: Array) -> Array:
    """Inverse total distance, with a surrogate for unreachable nodes."""
    n = len(distance)
    scores = np.zeros(n)
    if not np.any(distance):
        return scores
    paths = shortest_paths(distance)
    unreachable = n * distance.max()
    for i in range(n):
        if not np.any(distance[i]):
            continue
        total = 0.0
        for j in range(n):
            if j != i:
                pair = (min(i, j), max(i, j))
                total += paths[pair][0] if pair in paths else unreachable
        scores[i] = 1.0 / total
    return scores


def pagerank_oracle(w: Array, damping: float = 0.85) -> Array:
    """Stationary distribution of the damped random walk, by a linear solve."""
    n = len(w)
    p = np.full((n, n), 1.0 / n)
    for i in range(n):
        if w[i].sum() > 0:
            p[i] = w[i] / w[i].sum()
    x = np.linalg.solve(np.eye(n) - damping * p.T, np.full(n, (1.0 - damping) / n))
    return np.asarray(x / x.sum(), dtype=np.float64)


def clustering_oracle(w: Array) -> Array:
    """Weighted clustering coefficient, by direct summation."""
    n = len(w)
    a = w > 0
    scores = np.zeros(n)
    for i in range(n):
        kappa = a[i].sum()
        if kappa < 2:
            continue
        total = 0.0
        for j, h in itertools.permutations(range(n), 2):
            if a[i, j] and a[i, h] and a[j, h]:
                total += (w[i, j] + w[i, h]) / 2.0
        scores[i] = total / (w[i].sum() * (kappa - 1))
    return scores


def diversity_oracle(w: Array) -> Array:
    """Normalized entropy of the incident weights, by direct summation."""
    scores = np.zeros(len(w))
    for i, row in enumerate(w):
        weights = [x for x in row if x > 0]
        if len(weights) < 2:
            continue
        total = sum(weights)
        entropy = -sum(x / total * np.log(x / total) for x in weights)
        scores[i] = entropy / np.log(len(weights))
    return scores


def test_build_sentence_graph_identical() -> None:
    """Gives weight 1 between identical sentences."""
    doc = make_document("d", "", "a b. a b. a b.")
    graph = build_sentence_graph(doc.sentences)
    assert np.allclose(graph.weights, np.ones((3, 3)) - np.eye(3))
    assert graph.n == 3
    assert graph.edge_count == 3


def test_build_sentence_graph_disjoint() -> None:
    """Gives weight 0 between term-disjoint sentences."""
    doc = make_document("d", "", "a b! c d? e f")
    graph = build_sentence_graph(doc.sentences)
    assert not np.any(graph.weights)


def test_build_sentence_graph_properties(corpus: Corpus) -> None:
    """Has symmetric weights in [0, 1] with a zero diagonal."""
    sentences = corpus.sentences
    for scheme in ("tf", "tfidf", "binary"):
        for policy in ("keep", "remove"):
            w = build_sentence_graph(sentences, VectorConfig(scheme, policy)).weights
            assert np.allclose(w, w.T)
            assert np.all((w >= 0.0) & (w <= 1.0))
            assert not np.any(np.diag(w))
    assert graph_of(np.zeros((5, 5))).edge_count == 10


def test_build_sentence_graph_stopword_sentence(lexicons: Lexicons) -> None:
    """Isolates sentences made of stop words only."""
    doc = make_document("d", "", "the dam. the of. the dam", lexicons)
    w = build_sentence_graph(doc.sentences, VectorConfig("tf", "remove")).weights
    assert not np.any(w[1])
    assert w[0, 2] == pytest.approx(1.0)


def test_build_sentence_graph_lsa(corpus: Corpus) -> None:
    """Uses latent vectors in the lsa space."""
    model = truncated_svd(build_term_doc_matrix(corpus, stopword_policy="remove"))
    config = VectorConfig("tf", "remove", "lsa")
    graph = build_sentence_graph(corpus.documents[0].sentences, config, model)
    assert graph.weights.shape == (6, 6)
    assert np.all((graph.weights >= 0.0) & (graph.weights <= 1.0))
    with pytest.raises(ConfigError):
        build_sentence_graph(corpus.documents[0].sentences, config)


def test_build_sentence_graph_lsa_negative(
    corpus: Corpus, monkeypatch: pytest.MonkeyPatch
) -> None:
    """Clips negative latent cosines to 0."""
    model = truncated_svd(build_term_doc_matrix(corpus, stopword_policy="remove"))
    rows = np.array([[1.0, 0.0], [-1.0, 0.0], [1.0, 1.0]])
    monkeypatch.setattr(graphrank, "lsa_vectors", lambda *args: rows)
    config = VectorConfig("tf", "remove", "lsa")
    graph = build_sentence_graph(corpus.documents[0].sentences[:3], config, model)
    expected = np.zeros((3, 3))
    expected[0, 2] = expected[2, 0] = 1.0 / np.sqrt(2.0)
    np.testing.assert_allclose(graph.weights, expected, atol=1e-12)


def test_build_sentence_graph_empty() -> None:
    """Raises without sentences."""
    with pytest.raises(DataError):
        build_sentence_graph([])


def test_vector_config() -> None:
    """Validates and labels the vector configuration."""
    assert VectorConfig().tag == "tf-keep"
    assert VectorConfig("tfidf", "remove").tag == "tfidf-remove"
    assert VectorConfig("tf", "remove", "lsa").tag == "tf-remove-lsa"
    with pytest.raises(ConfigError):
        VectorConfig(space="embedding")
    with pytest.raises(ConfigError):
        VectorConfig(scheme="bm25")


def test_centrality_triangle() -> None:
    """Gives strength 1 on a triangle of 0.5 weights."""
    w = np.full((3, 3), 0.5) - 0.5 * np.eye(3)
    assert np.allclose(centrality(graph_of(w), "Str").scores, 1.0)


def test_centrality_equal_weights() -> None:
    """Gives equal scores on a graph of equal weights."""
    w = np.full((4, 4), 0.3) - 0.3 * np.eye(4)
    graph = graph_of(w)
    assert np.allclose(centrality(graph, "Pag").scores, 0.25)
    assert np.allclose(centrality(graph, "Div").scores, 1.0)
    for measure in ("Str", "Pag", "Eig", "Clo", "Div", "Clu"):
        scores = centrality(graph, measure).scores
        assert np.allclose(scores, scores[0])
        assert rank_nodes(CentralityScores(measure, scores)) == [0, 1, 2, 3]


def test_centrality_path() -> None:
    """Scores the middle of a path."""
    graph = graph_of([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    assert np.allclose(centrality(graph, "Bet").scores, [0.0, 1.0, 0.0])
    assert np.allclose(centrality(graph, "Clo").scores, [1 / 3, 1 / 2, 1 / 3])


def test_centrality_invert_distances() -> None:
    """Reads one minus the weight as the edge length on request."""
    w = np.array([[0, 0.9, 0.2], [0.9, 0, 0.9], [0.2, 0.9, 0]])
    graph = graph_of(w)
    # direct lengths: a-c (0.2) beats a-b-c (1.8)
    assert np.allclose(centrality(graph, "Bet").scores, 0.0)
    # inverted lengths: a-b-c (0.2) beats a-c (0.8)
    inverted = centrality(graph, "Bet", invert_distances=True).scores
    assert np.allclose(inverted, [0.0, 1.0, 0.0])


def test_centrality_invert_identical() -> None:
    """Joins identical sentences by a short edge when distances are inverted."""
    graph = graph_of(np.ones((3, 3)) - np.eye(3))
    clo = centrality(graph, "Clo", invert_distances=True).scores
    assert np.all(clo > 0.0)
    assert np.allclose(clo, clo[0])
    w = np.array([[0, 1.0, 0.5], [1.0, 0, 0.5], [0.5, 0.5, 0]])
    clo = centrality(graph_of(w), "Clo", invert_distances=True).scores
    assert clo[0] == pytest.approx(1.0 / (0.5 + MIN_DISTANCE))
    assert clo[1] == pytest.approx(clo[0])
    assert clo[2] == pytest.approx(1.0)
    bet = centrality(graph_of(w), "Bet", invert_distances=True).scores
    assert np.allclose(bet, 0.0)


def test_centrality_single_node() -> None:
    """Scores a single node 0, or 1 for PageRank."""
    graph = graph_of([[0.0]])
    for measure in MEASURES:
        expected = 1.0 if measure == "Pag" else 0.0
        assert centrality(graph, measure).scores.tolist() == [expected]


def test_centrality_unknown() -> None:
    """Raises on an unknown measure."""
    with pytest.raises(ConfigError):
        centrality(graph_of(np.zeros((2, 2))), "Katz")


def test_centrality_isolated_nodes() -> None:
    """Scores isolated nodes 0 on path-based measures."""
    w = np.zeros((4, 4))
    w[0, 1] = w[1, 0] = 0.5
    graph = graph_of(w)
    for measure in ("Bet", "Clo", "Clu", "Div", "Str"):
        assert centrality(graph, measure).scores[2:].tolist() == [0.0, 0.0]
    pag = centrality(graph, "Pag").scores
    assert pag.sum() == pytest.approx(1.0, abs=1e-9)
    assert np.all(pag > 0.0)


@pytest.mark.parametrize("invert_distances", [False, True])
def test_centrality_path_oracles(invert_distances: bool) -> None:
    """Matches brute-force betweenness and closeness on random graphs."""
    rng = np.random.default_rng(16)
    for _ in range(100):
        w = random_weights(rng, zeros=0.4)
        graph = graph_of(w)
        distance = np.where(w > 0, 1.0 - w, 0.0) if invert_distances else w
        bet = centrality(graph, "Bet", invert_distances).scores
        clo = centrality(graph, "Clo", invert_distances).scores
        assert np.allclose(bet, betweenness_oracle(distance), rtol=0.0, atol=1e-9)
        assert np.allclose(clo, closeness_oracle(distance), rtol=0.0, atol=1e-9)


def test_centrality_pagerank_oracle() -> None:
    """Matches the stationary distribution of the damped walk."""
    rng = np.random.default_rng(17)
    for _ in range(100):
        w = random_weights(rng, zeros=0.4)
        scores = centrality(graph_of(w), "Pag").scores
        assert np.allclose(scores, pagerank_oracle(w), rtol=0.0, atol=1e-8)
        assert scores.sum() == pytest.approx(1.0, abs=1e-9)
        assert np.all(scores > 0.0)


def test_centrality_eigenvector_oracle() -> None:
    """Matches the dominant eigenvector of the weights."""
    rng = np.random.default_rng(18)
    for _ in range(100):
        w = random_weights(rng, zeros=0.0)
        scores = centrality(graph_of(w), "Eig").scores
        _, vectors = np.linalg.eigh(w)
        dominant = np.abs(vectors[:, -1])
        assert np.allclose(scores, dominant / dominant.max(), rtol=0.0, atol=1e-8)
        assert scores.max() == pytest.approx(1.0)
        assert np.all(scores >= 0.0)


def test_centrality_local_oracles() -> None:
    """Matches direct summation for strength, clustering and diversity."""
    rng = np.random.default_rng(19)
    for _ in range(100):
        w = random_weights(rng, zeros=0.3)
        graph = graph_of(w)
        assert np.allclose(centrality(graph, "Str").scores, w.sum(axis=1))
        assert np.allclose(centrality(graph, "Clu").scores, clustering_oracle(w))
        div = centrality(graph, "Div").scores
        assert np.allclose(div, diversity_oracle(w))
        assert np.all((div >= 0.0) & (div <= 1.0))


def test_centrality_scaling() -> None:
    """Keeps the strength and eigenvector rankings under weight scaling."""
    rng = np.random.default_rng(21)
    for _ in range(20):
        w = random_weights(rng, zeros=0.0)
        for measure in ("Str", "Eig"):
            ranks = [
                rank_nodes(centrality(graph_of(c * w), measure)) for c in (1.0, 0.5)
            ]
            assert ranks[0] == ranks[1]


@pytest.mark.parametrize(
    "measure, scores, expected",
    [
        ("Str", [3.0, 1.0, 2.0], [0, 2, 1]),
        ("Div", [0.9, 0.1], [1, 0]),
        ("Pag", [0.2, 0.2, 0.2], [0, 1, 2]),
        ("Str", [1.0, 2.0, 2.0 + 1e-12], [1, 2, 0]),
    ],
)
def test_rank_nodes(measure: str, scores: list, expected: list) -> None:
    """Sorts in the measure direction, ties in temporal order."""
    assert rank_nodes(CentralityScores(measure, np.array(scores))) == expected


@pytest.mark.parametrize(
    "ratio, n, expected",
    [(0.5, 4, 2), (0.25, 6, 2), (0.25, 5, 1), (0.75, 6, 5), (1.0, 7, 7), (0.1, 3, 1)],
)
def test_summary_size(ratio: float, n: int, expected: int) -> None:
    """Rounds half up, keeping at least one sentence."""
    assert summary_size(ratio, n) == expected


@pytest.mark.parametrize("ratio", [0.0, -0.5, 1.5])
def test_summary_size_invalid(ratio: float) -> None:
    """Raises on ratios outside (0, 1]."""
    with pytest.raises(ConfigError):
        summary_size(ratio, 4)


def test_summarize_centrality_identity(document: Document) -> None:
    """Returns every sentence at ratio 1."""
    summary = summarize_centrality(document, "Pag", 1.0)
    assert summary.sentences == document.sentences
    assert summary.system == "centrality-Pag-tf-keep"


def test_summarize_centrality_ties() -> None:
    """Picks the first of identical sentences."""
    doc = make_document("d", "", "a b. a b. a b.")
    summary = summarize_centrality(doc, "Str", 1 / 3)
    assert [s.doc_position for s in summary.sentences] == [0]


def test_summarize_centrality_sizes(corpus: Corpus) -> None:
    """Has k sentences in temporal order for every measure and ratio."""
    for doc in corpus.documents:
        for measure in MEASURES:
            for ratio in (0.25, 0.5, 0.75, 1.0):
                summary = summarize_centrality(
                    doc, measure, ratio, VectorConfig("tfidf", "remove")
                )
                positions = [s.doc_position for s in summary.sentences]
                assert len(positions) == summary_size(ratio, len(doc.sentences))
                assert positions == sorted(set(positions))
                assert summary.system == f"centrality-{measure}-tfidf-remove"


def test_summarize_centrality_topic(corpus: Corpus) -> None:
    """Concatenates the documents of a topic."""
    summary = summarize_centrality(corpus.topics[0], "Str", 0.5)
    assert summary.item_id == "t1"
    assert summary.source_size == 10
    assert len(summary) == 5
    assert summary.references == sorted(summary.references)


def test_summarize_centrality_lsa(corpus: Corpus) -> None:
    """Ranks sentences on the latent-space graph."""
    model = truncated_svd(build_term_doc_matrix(corpus, stopword_policy="remove"))
    config = VectorConfig("tf", "remove", "lsa")
    summary = summarize_centrality(corpus.documents[0], "Str", 0.5, config, model)
    assert summary.system == "centrality-Str-tf-remove-lsa"
    assert len(summary) == 3


@pytest.mark.parametrize("kind, expected", [("Fir", [0, 1]), ("Las", [2, 3])])
def test_baseline_summary(kind: str, expected: list) -> None:
    """Takes the first or last sentences."""
    doc = make_document("d", "", "A. B. C. D.")
    summary = baseline_summary(doc, kind, 0.5)
    assert [s.doc_position for s in summary.sentences] == expected
    assert summary.system == f"baseline-{kind}"


def test_baseline_summary_random(document: Document) -> None:
    """Draws a seeded subset in temporal order."""
    first = baseline_summary(document, "Ran", 0.5, seed=3)
    assert first == baseline_summary(document, "Ran", 0.5, seed=3)
    positions = [s.doc_position for s in first.sentences]
    assert len(positions) == 3
    assert positions == sorted(set(positions))
    assert first.parameters["seed"] == 3
    draws = {
        tuple(baseline_summary(document, "Ran", 0.5, seed).references)
        for seed in range(20)
    }
    assert len(draws) > 1


def test_baseline_summary_random_nested(document: Document) -> None:
    """Keeps the sentences drawn at smaller ratios."""
    for seed in range(10):
        previous: t.Set[int] = set()
        for ratio in (0.25, 0.5, 0.75, 1.0):
            summary = baseline_summary(document, "Ran", ratio, seed=seed)
            positions = {s.doc_position for s in summary.sentences}
            assert previous <= positions
            previous = positions
    assert previous == set(range(len(document.sentences)))


def test_baseline_summary_invalid(document: Document) -> None:
    """Raises on unknown kinds and unseeded random draws."""
    with pytest.raises(ConfigError):
        baseline_summary(document, "Mid", 0.5)
    with pytest.raises(ConfigError):
        baseline_summary(document, "Ran", 0.5)


def test_baseline_summary_topic(topic: Topic) -> None:
    """Takes the last sentences of the concatenated topic."""
    summary = baseline_summary(topic, "Las", 0.25)
    assert summary.references == [SentenceRef("d2", i) for i in (1, 2, 3)]
    assert summary.source_size == 10


def test_graph_dataset(document: Document) -> None:
    """Holds weights, centralities and sentence origins."""
    graph = build_sentence_graph(document.sentences)
    ds = graph_dataset(graph, "d1")
    assert ds["weight"].shape == (6, 6)
    assert ds["centrality"].shape == (len(MEASURES), 6)
    assert list(ds["measure"].values) == list(MEASURES)
    assert list(ds["document"].values) == ["d1"] * 6
    assert list(ds["position"].values) == list(range(6))
    assert ds.attrs["item"] == "d1"
    assert ds.attrs["vectors"] == "tf-keep"
    assert all(name in ds.attrs for name in ("title", "history", "source"))
    assert np.allclose(
        ds["centrality"].sel(measure="Str").values, graph.weights.sum(axis=1)
    )


def planted_document(rng: np.random.Generator, d: int) -> t.Tuple[Document, str]:
    """Document with three sentences on a shared theme, and its gold summary.

    The nine other sentences hold one theme word each and unrelated words.
    """
    theme = [f"theme{d}x{i}" for i in range(5)]
    noise = (f"noise{d}x{j}" for j in itertools.count())
    central = [theme + [next(noise), next(noise)] for _ in range(3)]
    peripheral = [
        [theme[int(rng.integers(5))]] + [next(noise) for _ in range(6)]
        for _ in range(9)
    ]
    sentences = central + peripheral
    order = rng.permutation(len(sentences))
    body = " ".join(" ".join(sentences[i]) + "." for i in order)
    gold = "\n".join(" ".join(words) + "." for words in central)
    return make_document(f"doc{d}", "", body), gold


def recall(summary: Summary, gold: str) -> float:
    """ROUGE-1 recall of a summary."""
    peer = scoring_tokens("\n".join(summary.lines()))
    return rouge_n(peer, [scoring_tokens(gold)], 1).recall


def test_centrality_beats_random_baseline() -> None:
    """Finds the planted central sentences more often than chance."""
    rng = np.random.default_rng(42)
    wins = {"Str": 0, "Pag": 0, "Eig": 0}
    for d in range(20):
        doc, gold = planted_document(rng, d)
        chance = np.mean(
            [
                recall(baseline_summary(doc, "Ran", 0.25, seed), gold)
                for seed in range(50)
            ]
        )
        for measure in wins:
            if recall(summarize_centrality(doc, measure, 0.25), gold) > chance:
                wins[measure] += 1
    assert all(count >= 16 for count in wins.values())
