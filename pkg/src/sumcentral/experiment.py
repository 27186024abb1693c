"""Summarization runs.

A run summarizes every item of a corpus (documents in ``single`` mode,
topics in ``multi`` mode) with every system of a grid and writes

* ``<out>/<label>/<item-id>.txt``: one summary sentence per line,
* ``<out>/<label>/<item-id>.json``: system, parameters and the
  (document id, position) of every line,
* ``<out>/manifest.json``: configuration digest, corpus checksum, seed and
  the list of written summaries.

The label of a system is its id, suffixed with ``-r<ratio>`` for systems
taking a compression ratio.
Identical configurations and corpora give byte-identical outputs.
"""
import dataclasses
import functools
import hashlib
import json
import logging
import typing as t
from pathlib import Path

from ._version import _version
from .constants import BASELINES
from .constants import GOLD_DIR
from .constants import LSA_K
from .constants import LSA_MEASURES
from .constants import MAX_SENTENCES
from .constants import MEASURES
from .constants import MULTI_STRATEGIES
from .constants import RATIOS
from .constants import REDUNDANCY_AGGREGATES
from .constants import SCHEMES
from .constants import STOPWORD_POLICIES
from .constants import THRESHOLDS
from .constants import TOPIC_FILE
from .constants import VECTOR_SPACES
from .corpus import Corpus
from .corpus import default_lexicons
from .corpus import Document
from .corpus import Lexicon
from .corpus import Lexicons
from .corpus import load_corpus
from .corpus import load_lexicon
from .exceptions import ConfigError
from .exceptions import DataError
from .exceptions import SumcentralError
from .graphrank import baseline_summary
from .graphrank import build_sentence_graph
from .graphrank import SentenceGraph
from .graphrank import summarize_centrality
from .graphrank import VectorConfig
from .parsumist import concat_topic
from .parsumist import Item
from .parsumist import length_bounds
from .parsumist import ScoreConfig
from .parsumist import Summary
from .parsumist import summarize_parsumist
from .vectorize import build_term_doc_matrix
from .vectorize import compute_idf
from .vectorize import IdfTable
from .vectorize import load_idf_table
from .vectorize import load_lsa_model
from .vectorize import LsaModel
from .vectorize import truncated_svd

logger = logging.getLogger(__name__)

MODES = ("single", "multi")
"""Run modes: documents or topics as items."""

PARSUMIST = "parsumist"
"""System code of the feature-scoring summarizer."""

SYSTEM_CODES = (PARSUMIST,) + MEASURES + BASELINES
"""System codes accepted in a grid."""

MANIFEST = "manifest.json"
"""Manifest file name."""

LSA_GRAPH = VectorConfig("tf", "remove", "lsa")
"""Latent graph of the trained model's own term vectors."""

_OUTPUT_FIELDS = ("out",)
_SEQUENCE_FIELDS = (
    "systems",
    "thresholds",
    "schemes",
    "stopword_policies",
    "spaces",
    "ratios",
    "lsa_measures",
)


def _tuple(value: t.Any) -> t.Tuple[t.Any, ...]:
    if isinstance(value, (list, tuple)):
        return tuple(value)
    return (value,)


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Configuration of a summarization run.

    Raises
    ------
    ConfigError
        If a value is invalid.
    """

    corpus: str = ""
    out: str = "runs"
    mode: str = "single"
    systems: t.Tuple[str, ...] = SYSTEM_CODES
    thresholds: t.Tuple[float, ...] = THRESHOLDS
    schemes: t.Tuple[str, ...] = SCHEMES
    stopword_policies: t.Tuple[str, ...] = STOPWORD_POLICIES
    spaces: t.Tuple[str, ...] = ("term",)
    lsa_measures: t.Tuple[str, ...] = LSA_MEASURES
    ratios: t.Tuple[float, ...] = RATIOS
    lsa_k: int = LSA_K
    seed: t.Optional[int] = 0
    max_sentences: int = MAX_SENTENCES
    redundancy: str = "min"
    multi_strategy: str = "concatenate"
    invert_distances: bool = False
    decode_ncr: bool = False
    idf_table: t.Optional[str] = None
    lsa_model: t.Optional[str] = None
    stopwords: t.Optional[str] = None
    pronouns: t.Optional[str] = None
    proper_nouns: t.Optional[str] = None

    def __post_init__(self) -> None:
        """Normalize sequences and validate every field."""
        for name in _SEQUENCE_FIELDS:
            object.__setattr__(self, name, _tuple(getattr(self, name)))

        def check(name: str, values: t.Iterable[t.Any], allowed: t.Any) -> None:
            for value in values:
                if value not in allowed:
                    raise ConfigError(f"invalid {name} '{value}'")

        check("mode", [self.mode], MODES)
        check("system", self.systems, SYSTEM_CODES)
        check("scheme", self.schemes, SCHEMES)
        check("stop-word policy", self.stopword_policies, STOPWORD_POLICIES)
        check("vector space", self.spaces, VECTOR_SPACES)
        check("latent graph measure", self.lsa_measures, MEASURES)
        check("redundancy aggregate", [self.redundancy], REDUNDANCY_AGGREGATES)
        check("multi-document strategy", [self.multi_strategy], MULTI_STRATEGIES)
        if not self.systems:
            raise ConfigError("the system grid is empty")
        for ratio in self.ratios:
            if not 0.0 < float(ratio) <= 1.0:
                raise ConfigError(f"compression ratio must be in (0, 1] (got {ratio})")
        for threshold in self.thresholds:
            if not 0.0 <= float(threshold) <= 1.0:
                raise ConfigError(f"threshold must be in [0, 1] (got {threshold})")
        if self.lsa_k < 1:
            raise ConfigError(f"lsa_k must be positive (got {self.lsa_k})")
        if self.max_sentences < 1:
            raise ConfigError(
                f"max_sentences must be positive (got {self.max_sentences})"
            )
        if "Ran" in self.systems and self.seed is None:
            raise ConfigError("the random baseline requires a seed")

    @classmethod
    def from_file(cls, path: t.Union[str, Path]) -> "RunConfig":
        """Read a JSON configuration file.

        Raises
        ------
        ConfigError
            If the file is unreadable, is not a JSON object or has unknown
            keys.
        """
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, ValueError) as e:
            raise ConfigError(f"cannot read configuration '{path}': {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"configuration '{path}' is not a JSON object")
        return cls().updated(data)

    def updated(self, values: t.Mapping[str, t.Any]) -> "RunConfig":
        """Copy with the given values; ``None`` values are ignored.

        Raises
        ------
        ConfigError
            If a key is not a configuration field.
        """
        names = {f.name for f in dataclasses.fields(self)}
        unknown = sorted(set(values) - names)
        if unknown:
            raise ConfigError(f"unknown configuration key(s) {', '.join(unknown)}")
        changes = {k: v for k, v in values.items() if v is not None}
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> t.Dict[str, t.Any]:
        """JSON-compatible description of the run, output directory excluded."""
        data = dataclasses.asdict(self)
        for name in _OUTPUT_FIELDS:
            data.pop(name)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in data.items()}

    def digest(self) -> str:
        """SHA-256 of the canonical JSON description."""
        text = json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclasses.dataclass(frozen=True)
class Cell:
    """A system of the grid, with its parameters."""

    kind: str
    code: str
    ratio: t.Optional[float] = None
    threshold: t.Optional[float] = None
    vectors: t.Optional[VectorConfig] = None

    @property
    def system(self) -> str:
        """System id."""
        if self.kind == PARSUMIST:
            return f"parsumist-t{self.threshold:g}"
        if self.kind == "centrality":
            assert self.vectors is not None  # noqa: S101
            return f"centrality-{self.code}-{self.vectors.tag}"
        return f"baseline-{self.code}"

    @property
    def label(self) -> str:
        """Output directory name."""
        if self.ratio is None:
            return self.system
        return f"{self.system}-r{self.ratio:g}"


def grid(config: RunConfig) -> t.List[Cell]:
    """Expand the system grid of a configuration, in a fixed order.

    Measures of ``lsa_measures`` also run on :data:`LSA_GRAPH` when the
    vector configurations do not include it.
    """
    cells = []
    for code in config.systems:
        if code == PARSUMIST:
            cells += [Cell(PARSUMIST, code, threshold=th) for th in config.thresholds]
        elif code in MEASURES:
            configs = vector_configs(config)
            if code in config.lsa_measures and LSA_GRAPH not in configs:
                configs.append(LSA_GRAPH)
            cells += [
                Cell("centrality", code, ratio=ratio, vectors=vectors)
                for vectors in configs
                for ratio in config.ratios
            ]
        else:
            cells += [Cell("baseline", code, ratio=ratio) for ratio in config.ratios]
    return cells


def vector_configs(config: RunConfig) -> t.List[VectorConfig]:
    """Sentence vector configurations of the grid."""
    return [
        VectorConfig(scheme, policy, space)
        for space in config.spaces
        for scheme in config.schemes
        for policy in config.stopword_policies
    ]


def corpus_checksum(root: t.Union[str, Path]) -> str:
    """SHA-256 of the relative paths and contents of the corpus files."""
    root = Path(root)
    digest = hashlib.sha256()
    files = sorted(
        p
        for p in root.rglob("*")
        if p.is_file()
        and (p.suffix == ".txt" or p.name == TOPIC_FILE)
        and GOLD_DIR not in p.relative_to(root).parts[:1]
    )
    for path in files:
        digest.update(path.relative_to(root).as_posix().encode("utf-8"))
        digest.update(b"\0")
        digest.update(path.read_bytes())
    return digest.hexdigest()


def load_run_lexicons(config: RunConfig) -> Lexicons:
    """Configured word lists; shipped lists stand in for missing paths."""
    defaults = default_lexicons()
    return Lexicons(
        stopword=load_lexicon(config.stopwords, "stopword")
        if config.stopwords
        else defaults.stopword,
        pronoun=load_lexicon(config.pronouns, "pronoun")
        if config.pronouns
        else defaults.pronoun,
        proper_noun=load_lexicon(config.proper_nouns, "proper_noun")
        if config.proper_nouns
        else Lexicon("proper_noun"),
    )


class Experiment:
    """Corpus, models and systems of a run."""

    def __init__(self, config: RunConfig) -> None:
        """Bind a configuration; nothing is loaded before it is needed."""
        if not config.corpus:
            raise ConfigError("no corpus given")
        self.config = config
        self._idf: t.Dict[str, IdfTable] = {}

    @functools.cached_property
    def lexicons(self) -> Lexicons:
        """Word lists."""
        return load_run_lexicons(self.config)

    @functools.cached_property
    def corpus(self) -> Corpus:
        """Loaded corpus."""
        return load_corpus(self.config.corpus, self.lexicons, self.config.decode_ncr)

    @property
    def items(self) -> t.List[Item]:
        """Documents in ``single`` mode, topics in ``multi`` mode."""
        if self.config.mode == "single":
            return list(self.corpus.documents)
        return list(self.corpus.topics)

    @functools.cached_property
    def bounds(self) -> t.Tuple[float, float]:
        """Corpus sentence length quartiles."""
        return length_bounds(self.corpus)

    @functools.cached_property
    def model(self) -> LsaModel:
        """Latent semantic model, loaded or trained on the corpus."""
        if self.config.lsa_model:
            return load_lsa_model(self.config.lsa_model)
        matrix = build_term_doc_matrix(
            self.corpus, LSA_GRAPH.scheme, LSA_GRAPH.stopword_policy
        )
        logger.info(
            "training a rank %d model on a %dx%d matrix",
            self.config.lsa_k,
            *matrix.shape,
        )
        return truncated_svd(matrix, self.config.lsa_k, self.config.seed or 0)

    @functools.cached_property
    def _external_idf(self) -> t.Optional[IdfTable]:
        if self.config.idf_table:
            return load_idf_table(self.config.idf_table)
        return None

    def idf(self, stopword_policy: str) -> IdfTable:
        """Idf table of the tfidf scheme."""
        if self._external_idf is not None:
            return self._external_idf
        if stopword_policy not in self._idf:
            self._idf[stopword_policy] = compute_idf(self.corpus, stopword_policy)
        return self._idf[stopword_policy]

    def summarize(self, item: Item, cell: Cell) -> Summary:
        """Summarize an item with a system of the grid."""
        config = self.config
        if cell.kind == PARSUMIST:
            assert cell.threshold is not None  # noqa: S101
            score_config = ScoreConfig(
                cosine_threshold=float(cell.threshold),
                max_sentences=config.max_sentences,
                redundancy=config.redundancy,
                multi_strategy=config.multi_strategy,
            )
            return summarize_parsumist(
                item, self.model, self.bounds, score_config, self.lexicons
            )
        assert cell.ratio is not None  # noqa: S101
        if cell.kind == "baseline":
            return baseline_summary(
                item, cell.code, float(cell.ratio), config.seed, self.lexicons
            )
        assert cell.vectors is not None  # noqa: S101
        return summarize_centrality(
            item,
            cell.code,
            float(cell.ratio),
            cell.vectors,
            model=self.model if cell.vectors.space == "lsa" else None,
            idf=self.idf(cell.vectors.stopword_policy)
            if cell.vectors.scheme == "tfidf"
            else None,
            invert_distances=config.invert_distances,
            lexicons=self.lexicons,
        )

    def graphs(self, item: Item) -> t.Iterator[t.Tuple[VectorConfig, SentenceGraph]]:
        """Sentence graph of an item under every vector configuration."""
        if isinstance(item, Document):
            document = item
        else:
            document = concat_topic(item, self.lexicons)
        for vectors in vector_configs(self.config):
            yield vectors, build_sentence_graph(
                document.sentences,
                vectors,
                model=self.model if vectors.space == "lsa" else None,
                idf=self.idf(vectors.stopword_policy)
                if vectors.scheme == "tfidf"
                else None,
            )

    def run(self) -> t.Dict[str, t.Any]:
        """Summarize every item with every system and write the outputs.

        Failures on a single (system, item) pair are logged and recorded in
        the manifest; the run goes on.

        Returns
        -------
        dict
            The manifest.
        """
        cells = grid(self.config)
        writer = SummaryWriter(self.config.out)
        failures = []
        for item in self.items:
            for cell in cells:
                try:
                    summary = self.summarize(item, cell)
                except SumcentralError as e:
                    logger.warning("%s failed on '%s': %s", cell.label, item.id, e)
                    failures.append(
                        {"label": cell.label, "item": item.id, "error": str(e)}
                    )
                    continue
                writer.write(cell.label, summary)
        manifest = {
            "version": _version,
            "config": self.config.to_dict(),
            "config_digest": self.config.digest(),
            "corpus_checksum": corpus_checksum(self.config.corpus),
            "seed": self.config.seed,
            "mode": self.config.mode,
            "summaries": writer.entries,
            "failures": failures,
        }
        writer.write_manifest(manifest)
        return manifest


class SummaryWriter:
    """Writes summary files and collects the manifest entries."""

    def __init__(self, out: t.Union[str, Path]) -> None:
        """Create the output directory."""
        self.out = Path(out)
        try:
            self.out.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise DataError(f"cannot create output directory '{out}': {e}") from e
        self.entries: t.List[t.Dict[str, t.Any]] = []

    def write(self, label: str, summary: Summary) -> Path:
        """Write a summary and its sidecar record."""
        directory = self.out / label
        directory.mkdir(exist_ok=True)
        path = directory / f"{summary.item_id}.txt"
        lines = summary.lines()
        path.write_text(
            "".join(f"{line}\n" for line in lines), encoding="utf-8", newline="\n"
        )
        record = {
            "label": label,
            "system": summary.system,
            "item": summary.item_id,
            "parameters": dict(summary.parameters),
            "source_size": summary.source_size,
            "compression_ratio": summary.compression_ratio,
            "lines": [
                {"document": ref.document_id, "position": ref.position}
                for ref in summary.references
            ],
        }
        _dump_json(record, directory / f"{summary.item_id}.json")
        self.entries.append(
            {
                "label": label,
                "system": summary.system,
                "item": summary.item_id,
                "file": path.relative_to(self.out).as_posix(),
                "parameters": dict(summary.parameters),
            }
        )
        return path

    def write_manifest(self, manifest: t.Mapping[str, t.Any]) -> Path:
        """Write the run manifest."""
        path = self.out / MANIFEST
        _dump_json(manifest, path)
        return path


def _dump_json(data: t.Any, path: Path) -> None:
    text = json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False)
    path.write_text(text + "\n", encoding="utf-8", newline="\n")


def read_run(directory: t.Union[str, Path]) -> t.Dict[str, t.Dict[str, str]]:
    """Summary texts of a run directory, by label then by item id.

    Raises
    ------
    DataError
        If the directory does not exist.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise DataError(f"summaries directory '{directory}' does not exist")
    peers: t.Dict[str, t.Dict[str, str]] = {}
    for label_dir in sorted(p for p in directory.iterdir() if p.is_dir()):
        texts = {
            path.stem: path.read_text(encoding="utf-8")
            for path in sorted(label_dir.glob("*.txt"))
        }
        if texts:
            peers[label_dir.name] = texts
    return peers


def document_counts(corpus: Corpus) -> t.Dict[str, int]:
    """Number of documents of every topic."""
    return {topic.id: len(topic.documents) for topic in corpus.topics}
