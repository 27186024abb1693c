"""Term-document matrices, sentence vectors and latent semantic analysis.

The latent semantic model factors a term-document matrix
:math:`X \\approx U_k \\Sigma_k V_k^T` with a truncated singular value
decomposition, and maps a term vector :math:`s` to the rank-:math:`k` vector
:math:`s_k = \\Sigma_k^{-1} U_k^T s`.
"""
import collections
import dataclasses
import datetime
import logging
import math
import typing as t
from pathlib import Path

import numpy as np
import numpy.typing as npt
import pandas as pd
import scipy.linalg
import scipy.sparse as sp
import xarray as xr
from scipy.sparse.linalg import svds

from ._version import _version
from .constants import DENSE_SVD_LIMIT
from .constants import LSA_K
from .constants import SCHEMES
from .constants import STOPWORD_POLICIES
from .constants import SVD_TOL
from .corpus import Corpus
from .corpus import Sentence
from .exceptions import ConfigError
from .exceptions import DataError

logger = logging.getLogger(__name__)

Array = npt.NDArray[np.float64]


def check_scheme(scheme: str, stopword_policy: str) -> None:
    """Raise when the weighting scheme or the stop-word policy is unknown."""
    if scheme not in SCHEMES:
        raise ConfigError(f"unknown weighting scheme '{scheme}'")
    if stopword_policy not in STOPWORD_POLICIES:
        raise ConfigError(f"unknown stop-word policy '{stopword_policy}'")


@dataclasses.dataclass(frozen=True)
class Vocabulary:
    """Lexicographically ordered terms and their indices."""

    terms: t.Tuple[str, ...]

    def __post_init__(self) -> None:
        """Build the term index."""
        object.__setattr__(
            self, "_index", {term: i for i, term in enumerate(self.terms)}
        )

    @classmethod
    def from_words(cls, words: t.Iterable[str]) -> "Vocabulary":
        """Collect the unique words of an iterable."""
        return cls(tuple(sorted(set(words))))

    @property
    def size(self) -> int:
        """Number of terms (M)."""
        return len(self.terms)

    def index(self, term: str) -> t.Optional[int]:
        """Index of ``term``, ``None`` when out of vocabulary."""
        index: t.Dict[str, int] = getattr(self, "_index")
        return index.get(term)

    def __contains__(self, term: object) -> bool:
        """Tell whether ``term`` is in the vocabulary."""
        return isinstance(term, str) and self.index(term) is not None

    def __len__(self) -> int:
        """Number of terms."""
        return len(self.terms)


@dataclasses.dataclass(frozen=True)
class IdfTable:
    """Inverse document frequencies.

    Out-of-vocabulary terms get ``oov``, which is :math:`\\ln N` for tables
    computed on a corpus of :math:`N` documents.
    """

    values: t.Mapping[str, float]
    oov: float

    def __getitem__(self, term: str) -> float:
        """Idf of ``term``."""
        return self.values.get(term, self.oov)


@dataclasses.dataclass(frozen=True)
class TermDocMatrix:
    """Weighted term-document matrix: rows are terms, columns documents."""

    matrix: sp.csc_matrix
    scheme: str
    stopword_policy: str
    vocabulary: Vocabulary
    column_ids: t.Tuple[str, ...]

    @property
    def shape(self) -> t.Tuple[int, int]:
        """(M, N)."""
        return t.cast(t.Tuple[int, int], self.matrix.shape)


@dataclasses.dataclass(frozen=True)
class LsaModel:
    """Truncated singular value decomposition of a term-document matrix.

    ``u`` is M×k, ``sigma`` has k positive non-increasing values, ``v`` is N×k.
    """

    u: Array
    sigma: Array
    v: Array
    vocabulary: Vocabulary

    @property
    def k(self) -> int:
        """Effective rank."""
        return int(self.sigma.shape[0])

    def reconstruct(self) -> Array:
        """Rank-k approximation :math:`X_k = U_k \\Sigma_k V_k^T`."""
        return np.array((self.u * self.sigma) @ self.v.T, dtype=np.float64)


@dataclasses.dataclass(frozen=True)
class SentenceVector:
    """A term-space or latent-space sentence vector."""

    values: Array
    space: str = "term"
    scheme: str = "tf"
    stopword_policy: str = "keep"

    def __len__(self) -> int:
        """Dimension."""
        return int(self.values.shape[0])


def _counts_matrix(
    word_lists: t.Sequence[t.Sequence[str]], vocabulary: Vocabulary
) -> sp.csc_matrix:
    """Term counts, one column per word list; out-of-vocabulary words dropped."""
    rows, cols, data = [], [], []
    for j, words in enumerate(word_lists):
        counts = collections.Counter(words)
        for term in sorted(counts):
            i = vocabulary.index(term)
            if i is not None:
                rows.append(i)
                cols.append(j)
                data.append(float(counts[term]))
    return sp.csc_matrix(
        (data, (rows, cols)),
        shape=(vocabulary.size, len(word_lists)),
        dtype=np.float64,
    )


def _weigh(
    counts: sp.csc_matrix,
    scheme: str,
    vocabulary: Vocabulary,
    idf: t.Optional[IdfTable],
) -> sp.csc_matrix:
    """Turn term counts into tf, tfidf or binary weights."""
    if scheme == "tf":
        return counts
    if scheme == "binary":
        binary = counts.copy()
        binary.data = np.ones_like(binary.data)
        return binary
    if idf is None:
        raise ConfigError("the tfidf scheme requires an idf table")
    weights = np.array([idf[term] for term in vocabulary.terms], dtype=np.float64)
    return sp.csc_matrix(sp.diags(weights) @ counts)


def _idf(word_lists: t.Sequence[t.Sequence[str]]) -> IdfTable:
    n = max(len(word_lists), 1)
    df: t.Counter[str] = collections.Counter()
    for words in word_lists:
        df.update(set(words))
    return IdfTable(
        values={term: math.log(n / count) for term, count in df.items()},
        oov=math.log(n),
    )


def compute_idf(corpus: Corpus, stopword_policy: str = "keep") -> IdfTable:
    """Compute :math:`\\ln(N / df)` over the documents of a corpus.

    Parameters
    ----------
    corpus: Corpus
        Corpus with at least one document.

    stopword_policy: str, default "keep"
        ``"remove"`` leaves stop words out of the table; they are then looked
        up as out-of-vocabulary terms.

    Returns
    -------
    IdfTable
        Idf table; out-of-vocabulary terms get :math:`\\ln N`.

    Raises
    ------
    DataError
        If the corpus has no document.
    """
    check_scheme("tf", stopword_policy)
    documents = corpus.documents
    if not documents:
        raise DataError("cannot compute idf on a corpus without documents")
    remove = stopword_policy == "remove"
    return _idf([doc.words(remove) for doc in documents])


def load_idf_table(path: t.Union[str, Path]) -> IdfTable:
    """Read an idf table from a ``term<TAB>idf`` file.

    Out-of-vocabulary terms get the largest idf of the table.

    Raises
    ------
    DataError
        If the file is unreadable or holds no valid row.
    """
    try:
        frame = pd.read_csv(
            path,
            sep="\t",
            header=None,
            names=["term", "idf"],
            dtype={"term": str, "idf": float},
            quoting=3,
            keep_default_na=False,
            encoding="utf-8",
        )
    except (OSError, ValueError) as e:
        raise DataError(f"cannot read idf table '{path}': {e}") from e
    if frame.empty:
        raise DataError(f"idf table '{path}' is empty")
    return IdfTable(
        values=dict(zip(frame["term"], frame["idf"].astype(float))),
        oov=float(frame["idf"].max()),
    )


def build_term_doc_matrix(
    corpus: Corpus,
    scheme: str = "tf",
    stopword_policy: str = "keep",
    idf: t.Optional[IdfTable] = None,
) -> TermDocMatrix:
    """Build the term-document matrix of a corpus.

    Parameters
    ----------
    corpus: Corpus
        Loaded corpus.

    scheme: str, default "tf"
        ``"tf"`` (term counts), ``"tfidf"`` (counts times idf) or ``"binary"``
        (presence).

    stopword_policy: str, default "keep"
        ``"remove"`` leaves stop words out.

    idf: IdfTable, optional
        Idf table for the tfidf scheme; computed on ``corpus`` when omitted.

    Returns
    -------
    TermDocMatrix
        M×N matrix with one column per document.

    Raises
    ------
    DataError
        If the corpus holds no term.
    """
    check_scheme(scheme, stopword_policy)
    documents = corpus.documents
    remove = stopword_policy == "remove"
    word_lists = [doc.words(remove) for doc in documents]
    vocabulary = Vocabulary.from_words(w for words in word_lists for w in words)
    if not documents or vocabulary.size == 0:
        raise DataError("cannot build a term-document matrix on an empty corpus")
    if scheme == "tfidf" and idf is None:
        idf = compute_idf(corpus, stopword_policy)
    counts = _counts_matrix(word_lists, vocabulary)
    return TermDocMatrix(
        matrix=_weigh(counts, scheme, vocabulary, idf),
        scheme=scheme,
        stopword_policy=stopword_policy,
        vocabulary=vocabulary,
        column_ids=tuple(doc.id for doc in documents),
    )


def truncated_svd(
    x: t.Union[TermDocMatrix, Array, sp.spmatrix],
    k: int = LSA_K,
    seed: int = 0,
    vocabulary: t.Optional[Vocabulary] = None,
) -> LsaModel:
    """Compute the top-k singular triplets of a matrix.

    Matrices whose smaller dimension is at most
    :data:`~sumcentral.constants.DENSE_SVD_LIMIT` are decomposed exactly with
    LAPACK; larger ones with ARPACK, started from a vector drawn from a
    generator seeded with ``seed``.
    Singular values that are zero up to round-off are dropped, which lowers
    the effective rank.
    The entry of largest magnitude of every column of :math:`U_k` is made
    positive.

    Parameters
    ----------
    x: TermDocMatrix or array or sparse matrix
        Matrix to decompose.

    k: int, default 200
        Requested rank, clamped to ``min(M, N)``.

    seed: int, default 0
        Seed of the iterative solver.

    vocabulary: Vocabulary, optional
        Row terms, taken from ``x`` when it is a :class:`TermDocMatrix`.

    Returns
    -------
    LsaModel
        The truncated decomposition.

    Raises
    ------
    ConfigError
        If ``k`` is smaller than 1.

    DataError
        If the matrix is zero.
    """
    if isinstance(x, TermDocMatrix):
        vocabulary = x.vocabulary
        matrix: t.Union[Array, sp.spmatrix] = x.matrix
    else:
        matrix = x
    m, n = matrix.shape
    if vocabulary is None:
        vocabulary = Vocabulary(tuple(str(i) for i in range(m)))
    if k < 1:
        raise ConfigError(f"rank k must be positive (got {k})")
    if k > min(m, n):
        logger.warning("rank %d exceeds min(M, N) = %d; clamping", k, min(m, n))
        k = min(m, n)

    if sp.issparse(matrix):
        is_zero = matrix.count_nonzero() == 0
    else:
        is_zero = not np.any(matrix)
    if is_zero:
        raise DataError("cannot decompose a zero matrix")

    if min(m, n) <= DENSE_SVD_LIMIT or k >= min(m, n):
        dense = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix)
        u, s, vt = scipy.linalg.svd(dense.astype(np.float64), full_matrices=False)
        u, s, vt = u[:, :k], s[:k], vt[:k]
    else:
        v0 = np.random.default_rng(seed).uniform(-1.0, 1.0, size=min(m, n))
        u, s, vt = svds(
            sp.csc_matrix(matrix, dtype=np.float64), k=k, tol=SVD_TOL, v0=v0
        )
        order = np.argsort(s)[::-1]
        u, s, vt = u[:, order], s[order], vt[order]

    keep = s > s[0] * max(m, n) * np.finfo(np.float64).eps
    u, s, vt = u[:, keep], s[keep], vt[keep]

    # sign convention
    rows = np.argmax(np.abs(u), axis=0)
    signs = np.sign(u[rows, np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    u = u * signs
    vt = vt * signs[:, np.newaxis]

    return LsaModel(
        u=np.ascontiguousarray(u, dtype=np.float64),
        sigma=np.array(s, dtype=np.float64),
        v=np.ascontiguousarray(vt.T, dtype=np.float64),
        vocabulary=vocabulary,
    )


def term_vector(
    words: t.Sequence[str],
    vocabulary: Vocabulary,
    scheme: str = "tf",
    idf: t.Optional[IdfTable] = None,
    stopword_policy: str = "keep",
) -> SentenceVector:
    """Weighted term vector of a word sequence; unknown words are dropped."""
    check_scheme(scheme, stopword_policy)
    counts = _counts_matrix([words], vocabulary)
    column = _weigh(counts, scheme, vocabulary, idf).toarray()[:, 0]
    return SentenceVector(
        values=np.asarray(column, dtype=np.float64),
        space="term",
        scheme=scheme,
        stopword_policy=stopword_policy,
    )


def project_sentence(model: LsaModel, vector: SentenceVector) -> SentenceVector:
    """Map a term vector to the latent space: :math:`\\Sigma_k^{-1} U_k^T s`.

    Raises
    ------
    DataError
        If the term vector dimension differs from the vocabulary size.
    """
    if len(vector) != model.u.shape[0]:
        raise DataError(
            f"term vector has dimension {len(vector)}, model vocabulary has "
            f"{model.u.shape[0]} terms"
        )
    values = (model.u.T @ vector.values) / model.sigma
    return SentenceVector(
        values=np.asarray(values, dtype=np.float64),
        space="lsa",
        scheme=vector.scheme,
        stopword_policy=vector.stopword_policy,
    )


def sentence_matrix(
    sentences: t.Sequence[Sentence],
    vocabulary: t.Optional[Vocabulary] = None,
    scheme: str = "tf",
    stopword_policy: str = "keep",
    idf: t.Optional[IdfTable] = None,
) -> t.Tuple[sp.csr_matrix, Vocabulary]:
    """Weighted term vectors of sentences, one row per sentence.

    Parameters
    ----------
    sentences: sequence of Sentence
        Tokenized sentences.

    vocabulary: Vocabulary, optional
        Column terms; the words of ``sentences`` when omitted.

    scheme: str, default "tf"
        Weighting scheme.

    stopword_policy: str, default "keep"
        ``"remove"`` leaves stop words out.

    idf: IdfTable, optional
        Idf table of the tfidf scheme; when omitted, the sentences are taken
        as the documents.

    Returns
    -------
    tuple
        Sparse n×M matrix and its vocabulary.
    """
    check_scheme(scheme, stopword_policy)
    remove = stopword_policy == "remove"
    word_lists = [s.words(remove) for s in sentences]
    if vocabulary is None:
        vocabulary = Vocabulary.from_words(w for words in word_lists for w in words)
    if scheme == "tfidf" and idf is None:
        idf = _idf(word_lists)
    counts = _counts_matrix(word_lists, vocabulary)
    weighted = _weigh(counts, scheme, vocabulary, idf)
    return sp.csr_matrix(weighted.T), vocabulary


def lsa_vectors(
    model: LsaModel,
    sentences: t.Sequence[Sentence],
    stopword_policy: str = "remove",
    scheme: str = "tf",
    idf: t.Optional[IdfTable] = None,
) -> Array:
    """Latent vectors (one row per sentence) of weighted term vectors."""
    rows, _ = sentence_matrix(sentences, model.vocabulary, scheme, stopword_policy, idf)
    values = (rows @ model.u) / model.sigma
    return np.asarray(values, dtype=np.float64).reshape(len(sentences), model.k)


def cosine(
    u: t.Union[SentenceVector, Array], v: t.Union[SentenceVector, Array]
) -> float:
    """Cosine of two vectors, 0 when either is the zero vector.

    Raises
    ------
    DataError
        If the dimensions differ.
    """
    a = np.asarray(u.values if isinstance(u, SentenceVector) else u, dtype=float)
    b = np.asarray(v.values if isinstance(v, SentenceVector) else v, dtype=float)
    if a.shape != b.shape:
        raise DataError(f"dimension mismatch: {a.shape} and {b.shape}")
    norm = float(np.linalg.norm(a) * np.linalg.norm(b))
    if norm == 0.0:
        return 0.0
    return float(np.clip(np.dot(a, b) / norm, -1.0, 1.0))


def cosine_matrix(rows: t.Union[Array, sp.spmatrix]) -> Array:
    """Pairwise cosines of the rows of a matrix; zero rows get 0 everywhere."""
    if sp.issparse(rows):
        dense = rows.toarray()
    else:
        dense = np.asarray(rows, dtype=np.float64)
    norms = np.linalg.norm(dense, axis=1)
    safe = np.where(norms > 0.0, norms, 1.0)
    unit = dense / safe[:, np.newaxis]
    sims = unit @ unit.T
    return np.array(np.clip(sims, -1.0, 1.0), dtype=np.float64)


def save_lsa_model(model: LsaModel, path: t.Union[str, Path]) -> None:
    """Write a latent semantic model to a netCDF file."""
    ds = xr.Dataset(
        data_vars={
            "u": (("term", "rank"), model.u, {"long_name": "left singular vectors"}),
            "sigma": ("rank", model.sigma, {"long_name": "singular values"}),
            "v": (
                ("column", "rank"),
                model.v,
                {"long_name": "right singular vectors"},
            ),
        },
        coords={"term": ("term", np.array(model.vocabulary.terms, dtype=object))},
        attrs={
            "title": "Latent semantic model",
            "history": (
                f"{datetime.datetime.utcnow().strftime('%Y-%m-%d %H:%M:%S')}"
                f" - model creation - sumcentral, version {_version}"
            ),
            "source": f"sumcentral, version {_version}",
        },
    )
    ds.to_netcdf(path)


def load_lsa_model(path: t.Union[str, Path]) -> LsaModel:
    """Read a latent semantic model written by :func:`save_lsa_model`.

    Raises
    ------
    DataError
        If the file cannot be read or misses a variable.
    """
    try:
        with xr.open_dataset(path) as ds:
            ds.load()
            terms = tuple(str(term) for term in ds["term"].values)
            model = LsaModel(
                u=np.asarray(ds["u"].values, dtype=np.float64),
                sigma=np.asarray(ds["sigma"].values, dtype=np.float64),
                v=np.asarray(ds["v"].values, dtype=np.float64),
                vocabulary=Vocabulary(terms),
            )
    except (OSError, KeyError, ValueError) as e:
        raise DataError(f"cannot read model '{path}': {e}") from e
    if list(model.vocabulary.terms) != sorted(model.vocabulary.terms):
        raise DataError(f"model '{path}' vocabulary is not sorted")
    return model
