"""Test cases for the vectorize module."""
import logging
import math
import typing as t
from pathlib import Path

import numpy as np
import numpy.typing as npt
import pytest
import scipy.sparse as sp
from hypothesis import given
from hypothesis import strategies as st

from sumcentral.corpus import Corpus
from sumcentral.corpus import Lexicons
from sumcentral.exceptions import ConfigError
from sumcentral.exceptions import DataError
from sumcentral.vectorize import build_term_doc_matrix
from sumcentral.vectorize import check_scheme
from sumcentral.vectorize import compute_idf
from sumcentral.vectorize import cosine
from sumcentral.vectorize import cosine_matrix
from sumcentral.vectorize import load_idf_table
from sumcentral.vectorize import load_lsa_model
from sumcentral.vectorize import lsa_vectors
from sumcentral.vectorize import project_sentence
from sumcentral.vectorize import save_lsa_model
from sumcentral.vectorize import sentence_matrix
from sumcentral.vectorize import SentenceVector
from sumcentral.vectorize import term_vector
from sumcentral.vectorize import truncated_svd
from sumcentral.vectorize import Vocabulary
from .factories import make_corpus

vectors = st.lists(
    st.floats(min_value=-1e3, max_value=1e3, allow_nan=False), min_size=3, max_size=3
).map(np.array)


def column(corpus: Corpus, scheme: str, j: int = 0) -> dict:
    """Non-zero entries of a term-document matrix column, by term."""
    tdm = build_term_doc_matrix(corpus, scheme=scheme)
    values = tdm.matrix.toarray()[:, j]
    return {
        term: pytest.approx(values[i])
        for i, term in enumerate(tdm.vocabulary.terms)
        if values[i] != 0.0
    }


def random_matrices(count: int) -> t.Iterator[npt.NDArray[np.float64]]:
    """Seeded random matrices of at most 30 rows and columns."""
    rng = np.random.default_rng(20)
    for _ in range(count):
        m, n = rng.integers(1, 31, size=2)
        yield rng.standard_normal((m, n))


def test_vocabulary() -> None:
    """Orders terms lexicographically."""
    vocabulary = Vocabulary.from_words(["b", "a", "c", "a"])
    assert vocabulary.terms == ("a", "b", "c")
    assert vocabulary.size == len(vocabulary) == 3
    assert vocabulary.index("c") == 2
    assert vocabulary.index("z") is None
    assert "a" in vocabulary
    assert "z" not in vocabulary


def test_check_scheme() -> None:
    """Raises on unknown schemes and policies."""
    check_scheme("tfidf", "remove")
    with pytest.raises(ConfigError):
        check_scheme("bm25", "keep")
    with pytest.raises(ConfigError):
        check_scheme("tf", "drop")


def test_build_term_doc_matrix_tf() -> None:
    """Counts terms."""
    assert column(make_corpus(["a a b."]), "tf") == {"a": 2.0, "b": 1.0}


def test_build_term_doc_matrix_binary() -> None:
    """Records presence."""
    assert column(make_corpus(["a a b."]), "binary") == {"a": 1.0, "b": 1.0}


def test_build_term_doc_matrix_tfidf() -> None:
    """Weighs counts by ln(N / df)."""
    corpus = make_corpus(["a b.", "a."])
    assert column(corpus, "tfidf", 0) == {"b": math.log(2.0)}
    assert column(corpus, "tfidf", 1) == {}


def test_build_term_doc_matrix_stopwords(corpus: Corpus) -> None:
    """Leaves stop words out on request."""
    kept = build_term_doc_matrix(corpus, stopword_policy="keep")
    removed = build_term_doc_matrix(corpus, stopword_policy="remove")
    assert "the" in kept.vocabulary
    assert "the" not in removed.vocabulary
    assert removed.shape == (removed.vocabulary.size, 3)
    assert removed.column_ids == ("d1", "d2", "d3")
    assert removed.stopword_policy == "remove"


@pytest.mark.parametrize("scheme", ["tf", "binary", "tfidf"])
def test_build_term_doc_matrix_non_negative(corpus: Corpus, scheme: str) -> None:
    """Has non-negative entries, integers for tf, 0 or 1 for binary."""
    x = build_term_doc_matrix(corpus, scheme=scheme).matrix.toarray()
    assert np.all(x >= 0.0)
    if scheme == "tf":
        assert np.all(x == np.round(x))
    if scheme == "binary":
        assert set(np.unique(x)) <= {0.0, 1.0}


def test_build_term_doc_matrix_empty() -> None:
    """Raises on an empty corpus."""
    with pytest.raises(DataError):
        build_term_doc_matrix(Corpus(topics=()))


def test_compute_idf() -> None:
    """Computes ln(N / df) and ln N out of vocabulary."""
    idf = compute_idf(make_corpus(["a b."] + ["a."] * 9))
    assert idf["a"] == 0.0
    assert idf["b"] == pytest.approx(math.log(10.0))
    assert idf["zzz"] == pytest.approx(math.log(10.0))
    assert compute_idf(make_corpus(["a b.", "a."]))["b"] == pytest.approx(0.6931, 1e-4)


def test_compute_idf_remove_stopwords(lexicons: Lexicons) -> None:
    """Leaves stop words out of the table."""
    corpus = make_corpus(["the dam.", "the city."], lexicons)
    assert "the" in compute_idf(corpus, "keep").values
    assert "the" not in compute_idf(corpus, "remove").values


def test_compute_idf_empty() -> None:
    """Raises on a corpus without documents."""
    with pytest.raises(DataError):
        compute_idf(Corpus(topics=()))


def test_load_idf_table(tmp_path: Path) -> None:
    """Reads a term/idf table; unknown terms get the largest idf."""
    path = tmp_path / "idf.tsv"
    path.write_text("آب\t0.5\n\"dam\t2.0\nnull\t1.0\n", "utf-8")
    idf = load_idf_table(path)
    assert idf["آب"] == 0.5
    assert idf['"dam'] == 2.0
    assert idf["null"] == 1.0
    assert idf["unknown"] == 2.0


def test_load_idf_table_invalid(tmp_path: Path) -> None:
    """Raises on missing or malformed tables."""
    with pytest.raises(DataError):
        load_idf_table(tmp_path / "missing.tsv")
    path = tmp_path / "idf.tsv"
    path.write_text("dam\tlarge\n", "utf-8")
    with pytest.raises(DataError):
        load_idf_table(path)


def test_truncated_svd_identity() -> None:
    """Has unit singular values on the identity."""
    model = truncated_svd(np.eye(3), k=3)
    assert np.allclose(model.sigma, [1.0, 1.0, 1.0])
    assert model.k == 3


def test_truncated_svd_rank_deficient() -> None:
    """Drops zero singular values."""
    model = truncated_svd(np.ones((2, 2)), k=2)
    assert model.k == 1
    assert model.sigma == pytest.approx([2.0])


def test_truncated_svd_rank_one() -> None:
    """Recovers a rank-one matrix exactly."""
    x = np.outer([1.0, 2.0, 3.0], [4.0, 0.5])
    model = truncated_svd(x, k=1)
    assert np.linalg.norm(x - model.reconstruct()) < 1e-10


def test_truncated_svd_clamps_rank(caplog: pytest.LogCaptureFixture) -> None:
    """Clamps k to min(M, N) and warns."""
    with caplog.at_level(logging.WARNING):
        model = truncated_svd(np.arange(1.0, 7.0).reshape(3, 2), k=200)
    assert model.k == 2
    assert "clamping" in caplog.text


def test_truncated_svd_invalid() -> None:
    """Raises on a non-positive rank or a zero matrix."""
    with pytest.raises(ConfigError):
        truncated_svd(np.eye(2), k=0)
    with pytest.raises(DataError):
        truncated_svd(np.zeros((3, 2)), k=1)
    with pytest.raises(DataError):
        truncated_svd(sp.csc_matrix((3, 2)), k=1)


def test_truncated_svd_gram_eigenvalues() -> None:
    """Matches the square roots of the Gram matrix eigenvalues."""
    for x in random_matrices(50):
        model = truncated_svd(x, k=min(x.shape))
        gram = x.T @ x if x.shape[1] <= x.shape[0] else x @ x.T
        eigenvalues = np.linalg.eigvalsh(gram)
        expected = np.sqrt(np.clip(eigenvalues[::-1], 0.0, None))
        assert np.allclose(model.sigma, expected[: model.k], rtol=0.0, atol=1e-8)


def test_truncated_svd_orthonormal() -> None:
    """Has orthonormal singular vectors and non-increasing positive values."""
    for x in random_matrices(20):
        k = max(1, min(x.shape) // 2)
        model = truncated_svd(x, k=k)
        identity = np.eye(model.k)
        assert np.max(np.abs(model.u.T @ model.u - identity)) < 1e-8
        assert np.max(np.abs(model.v.T @ model.v - identity)) < 1e-8
        assert np.all(model.sigma > 0.0)
        assert np.all(np.diff(model.sigma) <= 0.0)


def test_truncated_svd_sign_convention() -> None:
    """Makes the largest entry of every left singular vector positive."""
    for x in random_matrices(20):
        model = truncated_svd(x, k=min(x.shape))
        rows = np.argmax(np.abs(model.u), axis=0)
        assert np.all(model.u[rows, np.arange(model.k)] > 0.0)
        flipped = truncated_svd(-x, k=min(x.shape))
        assert np.allclose(flipped.u, model.u)
        assert np.allclose(flipped.v, -model.v)


def test_truncated_svd_frobenius_error() -> None:
    """Has a reconstruction error non-increasing in k."""
    x = np.random.default_rng(3).standard_normal((12, 9))
    errors = [
        np.linalg.norm(x - truncated_svd(x, k=k).reconstruct()) for k in range(1, 10)
    ]
    assert all(b <= a + 1e-12 for a, b in zip(errors, errors[1:]))
    assert errors[-1] < 1e-10


def test_truncated_svd_large_sparse() -> None:
    """Agrees with the dense decomposition above the dense size limit."""
    x = sp.random(600, 560, density=0.02, random_state=4, format="csc")
    model = truncated_svd(x, k=5, seed=1)
    expected = np.linalg.svd(x.toarray(), compute_uv=False)[:5]
    assert np.allclose(model.sigma, expected, rtol=1e-6)
    again = truncated_svd(x, k=5, seed=1)
    assert np.allclose(model.u, again.u)


def test_truncated_svd_term_doc_matrix(corpus: Corpus) -> None:
    """Takes the vocabulary from a term-document matrix."""
    tdm = build_term_doc_matrix(corpus)
    model = truncated_svd(tdm, k=2)
    assert model.vocabulary == tdm.vocabulary
    assert model.u.shape == (tdm.vocabulary.size, 2)
    assert model.v.shape == (3, 2)


def test_project_sentence_training_column() -> None:
    """Maps a training column to the matching row of V."""
    x = np.random.default_rng(5).uniform(0.0, 3.0, size=(7, 4))
    model = truncated_svd(x, k=4)
    for j in range(4):
        projected = project_sentence(model, SentenceVector(x[:, j]))
        assert projected.space == "lsa"
        assert np.allclose(projected.values, model.v[j], atol=1e-8)


def test_project_sentence_linear() -> None:
    """Is linear and maps zero to zero."""
    x = np.random.default_rng(6).uniform(0.0, 1.0, size=(5, 3))
    model = truncated_svd(x, k=2)
    s = np.array([1.0, 0.0, 2.0, 0.0, 1.0])
    assert not np.any(project_sentence(model, SentenceVector(np.zeros(5))).values)
    assert np.allclose(
        project_sentence(model, SentenceVector(3.0 * s)).values,
        3.0 * project_sentence(model, SentenceVector(s)).values,
    )


def test_project_sentence_dimension_mismatch() -> None:
    """Raises when the vector does not fit the vocabulary."""
    model = truncated_svd(np.eye(3), k=2)
    with pytest.raises(DataError):
        project_sentence(model, SentenceVector(np.ones(4)))


def test_term_vector() -> None:
    """Drops out-of-vocabulary words."""
    vocabulary = Vocabulary(("a", "b"))
    vector = term_vector(["a", "z", "a"], vocabulary)
    assert np.array_equal(vector.values, [2.0, 0.0])
    binary = term_vector(["a", "a"], vocabulary, scheme="binary")
    assert np.array_equal(binary.values, [1.0, 0.0])


def test_sentence_matrix(corpus: Corpus) -> None:
    """Has one row per sentence over the sentence vocabulary."""
    sentences = corpus.documents[2].sentences
    rows, vocabulary = sentence_matrix(sentences, stopword_policy="remove")
    assert rows.shape == (3, vocabulary.size)
    assert "league" in vocabulary
    assert "The" not in vocabulary
    assert rows[0, vocabulary.index("league")] == 1.0


def test_sentence_matrix_tfidf(corpus: Corpus) -> None:
    """Takes sentences as documents without an idf table."""
    sentences = corpus.documents[2].sentences
    rows, vocabulary = sentence_matrix(sentences, scheme="tfidf")
    assert rows[0, vocabulary.index("league")] == pytest.approx(math.log(1.5))
    assert rows[2, vocabulary.index("online")] == pytest.approx(math.log(3.0))


def test_lsa_vectors(corpus: Corpus) -> None:
    """Projects every sentence like project_sentence."""
    model = truncated_svd(build_term_doc_matrix(corpus, stopword_policy="remove"))
    sentences = corpus.documents[0].sentences
    latent = lsa_vectors(model, sentences)
    assert latent.shape == (len(sentences), model.k)
    for row, sentence in zip(latent, sentences):
        vector = term_vector(sentence.words(True), model.vocabulary)
        assert np.allclose(row, project_sentence(model, vector).values)


@pytest.mark.parametrize(
    "u, v, expected",
    [
        ([1.0, 2.0], [1.0, 2.0], 1.0),
        ([1.0, 0.0], [0.0, 3.0], 0.0),
        ([1.0, 0.0], [1.0, 1.0], 1.0 / math.sqrt(2.0)),
        ([0.0, 0.0], [1.0, 1.0], 0.0),
        ([1.0, 0.0], [-2.0, 0.0], -1.0),
    ],
)
def test_cosine(u: list, v: list, expected: float) -> None:
    """Computes the cosine, 0 for a zero vector."""
    assert cosine(np.array(u), np.array(v)) == pytest.approx(expected)
    assert cosine(SentenceVector(np.array(u)), SentenceVector(np.array(v))) == (
        pytest.approx(expected)
    )


def test_cosine_dimension_mismatch() -> None:
    """Raises on vectors of different dimensions."""
    with pytest.raises(DataError):
        cosine(np.ones(2), np.ones(3))


@given(
    vectors,
    vectors,
    st.floats(min_value=1e-3, max_value=1e3),
    st.floats(min_value=1e-3, max_value=1e3),
)
def test_cosine_properties(
    u: npt.NDArray[np.float64], v: npt.NDArray[np.float64], a: float, b: float
) -> None:
    """Is bounded, symmetric and scale invariant."""
    c = cosine(u, v)
    assert -1.0 <= c <= 1.0
    assert cosine(v, u) == pytest.approx(c)
    if np.linalg.norm(u) > 1e-3 and np.linalg.norm(v) > 1e-3:
        assert cosine(a * u, b * v) == pytest.approx(c, abs=1e-9)
    if np.all(u >= 0.0) and np.all(v >= 0.0):
        assert c >= 0.0


def test_cosine_matrix() -> None:
    """Has unit diagonal for non-zero rows and zeros for zero rows."""
    rows = np.array([[1.0, 0.0], [1.0, 1.0], [0.0, 0.0]])
    sims = cosine_matrix(rows)
    assert np.allclose(np.diag(sims), [1.0, 1.0, 0.0])
    assert sims[0, 1] == pytest.approx(1.0 / math.sqrt(2.0))
    assert np.array_equal(sims, sims.T)
    assert np.allclose(cosine_matrix(sp.csr_matrix(rows)), sims)


def test_save_load_lsa_model(corpus: Corpus, tmp_path: Path) -> None:
    """Reads back the model it writes."""
    model = truncated_svd(build_term_doc_matrix(corpus), k=2)
    path = tmp_path / "model.nc"
    save_lsa_model(model, path)
    loaded = load_lsa_model(path)
    assert loaded.vocabulary == model.vocabulary
    assert np.allclose(loaded.u, model.u)
    assert np.allclose(loaded.sigma, model.sigma)
    assert np.allclose(loaded.v, model.v)


def test_load_lsa_model_missing(tmp_path: Path) -> None:
    """Raises when the model file does not exist."""
    with pytest.raises(DataError):
        load_lsa_model(tmp_path / "missing.nc")
