"""Text collections: decoding, normalization, segmentation and tokenization.

A corpus is a directory tree ``<root>/<topic-id>/<doc-id>.txt``.
The first line of each document file is the document title, the remaining
lines are its body.
Bodies are segmented into sentences by a deterministic rule set:
a sentence is a maximal run of text ending with one or more terminators
(see :data:`~sumcentral.constants.SENTENCE_TERMINATORS`) or with a blank line.
Sentences are tokenized into maximal runs of letters, digits, combining marks
and zero-width non-joiners; every other non-space character is a token of its
own.

All objects defined here are immutable once loaded.
"""
import dataclasses
import logging
import re
import typing as t
import unicodedata
from pathlib import Path

from .constants import GOLD_DIR
from .constants import LEXICON_KINDS
from .constants import PARENTHESES
from .constants import PERCENT_SIGNS
from .constants import PERSIAN_LETTER_MAP
from .constants import QUOTE_MARKS
from .constants import SENTENCE_TERMINATORS
from .constants import TOPIC_FILE
from .exceptions import DataError

logger = logging.getLogger(__name__)

PathLike = t.Union[str, Path]

IS_STOPWORD = "is_stopword"
IS_LATIN_SCRIPT = "is_latin_script"
IS_PRONOUN = "is_pronoun"
IS_PROPER_NOUN = "is_proper_noun"
IS_QUOTE_MARK = "is_quote_mark"
IS_PERCENT_SIGN = "is_percent_sign"
IS_PARENTHESIS = "is_parenthesis"

_NCR = re.compile(r"&#(?:[xX]([0-9a-fA-F]+)|([0-9]+));")

# letters and digits, Arabic-script combining marks, and ZWNJ
_WORD = (
    r"(?:[^\W_]|[\u200c\u0610-\u061a\u064b-\u065f\u0670"
    r"\u06d6-\u06dc\u06df-\u06e4\u06e7\u06e8\u06ea-\u06ed])+"
)
_WORD_RE = re.compile(_WORD)
_TOKEN_RE = re.compile(rf"{_WORD}|\S")

_TERMINATORS = "".join(re.escape(c) for c in sorted(SENTENCE_TERMINATORS))
_SENTENCE_RE = re.compile(rf"[^{_TERMINATORS}]*[{_TERMINATORS}]+|[^{_TERMINATORS}]+")
_BLANK_LINE_RE = re.compile(r"\n[^\S\n]*\n")


class SentenceRef(t.NamedTuple):
    """Position of a sentence in the document it was read from."""

    document_id: str
    position: int


@dataclasses.dataclass(frozen=True)
class Token:
    """A word or a single punctuation character of a sentence."""

    surface: str
    char_span: t.Tuple[int, int]
    flags: t.FrozenSet[str] = frozenset()

    @property
    def is_word(self) -> bool:
        """``True`` for letter/digit runs, ``False`` for punctuation."""
        return _WORD_RE.fullmatch(self.surface) is not None

    def has(self, flag: str) -> bool:
        """Tell whether the token carries ``flag``."""
        return flag in self.flags


@dataclasses.dataclass(frozen=True)
class Sentence:
    """A tokenized sentence.

    ``doc_position`` is the index of the sentence in the document holding it,
    ``origin`` locates the sentence in the document file it was read from.
    The two differ only for synthetic documents (concatenated topics).
    """

    text: str
    tokens: t.Tuple[Token, ...]
    doc_position: int
    origin: SentenceRef

    @property
    def length(self) -> int:
        """Number of tokens."""
        return len(self.tokens)

    def words(self, remove_stopwords: bool = False) -> t.List[str]:
        """Surfaces of the word tokens, optionally without stop words."""
        return [
            tok.surface
            for tok in self.tokens
            if tok.is_word and not (remove_stopwords and tok.has(IS_STOPWORD))
        ]


@dataclasses.dataclass(frozen=True)
class Document:
    """A titled, ordered sequence of sentences."""

    id: str
    title: str
    sentences: t.Tuple[Sentence, ...]
    source_topic: t.Optional[str] = None
    title_tokens: t.Tuple[Token, ...] = ()

    def words(self, remove_stopwords: bool = False) -> t.List[str]:
        """Word surfaces of the body, in reading order."""
        return [w for s in self.sentences for w in s.words(remove_stopwords)]


@dataclasses.dataclass(frozen=True)
class Topic:
    """A group of documents on one subject, in ingestion order."""

    id: str
    title: str
    description: str
    documents: t.Tuple[Document, ...]


@dataclasses.dataclass(frozen=True)
class Lexicon:
    """A set of normalized word forms of one kind."""

    kind: str
    entries: t.FrozenSet[str] = frozenset()

    def __post_init__(self) -> None:
        """Check the lexicon kind."""
        if self.kind not in LEXICON_KINDS:
            raise ValueError(f"unknown lexicon kind '{self.kind}'")

    def __contains__(self, word: object) -> bool:
        """Exact-match lookup."""
        return word in self.entries

    def __len__(self) -> int:
        """Number of entries."""
        return len(self.entries)


@dataclasses.dataclass(frozen=True)
class Lexicons:
    """The word lists consulted when flagging tokens."""

    stopword: Lexicon = Lexicon("stopword")
    pronoun: Lexicon = Lexicon("pronoun")
    proper_noun: Lexicon = Lexicon("proper_noun")
    taboo: Lexicon = Lexicon("taboo")


@dataclasses.dataclass(frozen=True)
class Corpus:
    """Topics of a text collection, fully segmented and tokenized."""

    topics: t.Tuple[Topic, ...]
    lexicons: Lexicons = Lexicons()

    @property
    def documents(self) -> t.List[Document]:
        """All documents, topic by topic, in ingestion order."""
        return [doc for topic in self.topics for doc in topic.documents]

    @property
    def sentences(self) -> t.List[Sentence]:
        """All sentences, in ingestion and temporal order."""
        return [s for doc in self.documents for s in doc.sentences]

    def sentence_lengths(self) -> t.List[int]:
        """Token lengths of all sentences."""
        return [s.length for s in self.sentences]


def decode_ncr(text: str) -> t.Tuple[str, t.List[str]]:
    """Replace numeric character references by the characters they denote.

    Parameters
    ----------
    text: str
        Text possibly holding ``&#DDDD;`` or ``&#xHHHH;`` references.

    Returns
    -------
    tuple of str and list of str
        Decoded text and one warning per reference that denotes no Unicode
        scalar value (surrogates, or above U+10FFFF); such references are left
        verbatim.
    """
    warnings: t.List[str] = []

    def replace(match: "re.Match[str]") -> str:
        hexa, decimal = match.groups()
        code = int(hexa, 16) if hexa is not None else int(decimal)
        if code > 0x10FFFF or 0xD800 <= code <= 0xDFFF:
            warnings.append(
                f"invalid character reference '{match.group()}' at offset "
                f"{match.start()}"
            )
            return match.group()
        return chr(code)

    decoded = _NCR.sub(replace, text)
    for warning in warnings:
        logger.warning(warning)
    return decoded, warnings


def normalize_text(
    text: str, letter_map: t.Optional[t.Mapping[str, str]] = None
) -> str:
    """Normalize decoded text.

    Applies canonical composition (NFC), turns carriage returns into line
    feeds and maps letter variants to canonical Persian letters.
    Zero-width non-joiners are kept.

    Parameters
    ----------
    text: str
        Decoded text.

    letter_map: mapping, optional
        Character replacement table.
        Defaults to :data:`~sumcentral.constants.PERSIAN_LETTER_MAP`.

    Returns
    -------
    str
        Normalized text.
    """
    if letter_map is None:
        letter_map = PERSIAN_LETTER_MAP
    text = unicodedata.normalize("NFC", text)
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    return text.translate(str.maketrans(dict(letter_map)))


def split_sentences(text: str) -> t.List[str]:
    """Segment normalized text into sentence texts.

    Terminators stay attached to their sentence, runs of terminators
    (``"..."``) end a single sentence, surrounding whitespace is discarded and
    empty segments are dropped.

    Parameters
    ----------
    text: str
        Normalized text.

    Returns
    -------
    list of str
        Sentence texts in reading order.
    """
    sentences = []
    for paragraph in _BLANK_LINE_RE.split(text):
        for match in _SENTENCE_RE.finditer(paragraph):
            sentence = match.group().strip()
            if sentence:
                sentences.append(sentence)
    return sentences


def token_flags(surface: str, lexicons: Lexicons) -> t.FrozenSet[str]:
    """Compute the flags of a token surface."""
    flags = set()
    if surface in lexicons.stopword:
        flags.add(IS_STOPWORD)
    if surface in lexicons.pronoun:
        flags.add(IS_PRONOUN)
    if surface in lexicons.proper_noun:
        flags.add(IS_PROPER_NOUN)
    letters = [c for c in surface if c.isalpha()]
    if letters and all(ord(c) <= 0xFF for c in letters):
        flags.add(IS_LATIN_SCRIPT)
    if surface in QUOTE_MARKS:
        flags.add(IS_QUOTE_MARK)
    if surface in PERCENT_SIGNS:
        flags.add(IS_PERCENT_SIGN)
    if surface in PARENTHESES:
        flags.add(IS_PARENTHESIS)
    return frozenset(flags)


def tokenize(
    sentence_text: str, lexicons: t.Optional[Lexicons] = None
) -> t.List[Token]:
    """Tokenize a sentence.

    Parameters
    ----------
    sentence_text: str
        Text of a single sentence.

    lexicons: Lexicons, optional
        Word lists used to flag tokens. Defaults to empty lists.

    Returns
    -------
    list of Token
        Tokens in reading order, with non-overlapping increasing spans.
    """
    if lexicons is None:
        lexicons = Lexicons()
    return [
        Token(
            surface=match.group(),
            char_span=match.span(),
            flags=token_flags(match.group(), lexicons),
        )
        for match in _TOKEN_RE.finditer(sentence_text)
    ]


def make_document(
    doc_id: str,
    title: str,
    body: str,
    lexicons: t.Optional[Lexicons] = None,
    source_topic: t.Optional[str] = None,
) -> Document:
    """Build a document from normalized title and body texts."""
    if lexicons is None:
        lexicons = Lexicons()
    sentences = tuple(
        Sentence(
            text=text,
            tokens=tuple(tokenize(text, lexicons)),
            doc_position=i,
            origin=SentenceRef(doc_id, i),
        )
        for i, text in enumerate(split_sentences(body))
    )
    return Document(
        id=doc_id,
        title=title,
        sentences=sentences,
        source_topic=source_topic,
        title_tokens=tuple(tokenize(title, lexicons)),
    )


def parse_document(
    doc_id: str,
    raw: str,
    lexicons: t.Optional[Lexicons] = None,
    source_topic: t.Optional[str] = None,
    letter_map: t.Optional[t.Mapping[str, str]] = None,
) -> Document:
    """Build a document from the normalized-on-the-fly content of a file.

    The first line is the title, the remaining lines are the body.
    """
    text = normalize_text(raw, letter_map)
    title, _, body = text.partition("\n")
    return make_document(doc_id, title.strip(), body, lexicons, source_topic)


def load_lexicon(path: PathLike, kind: str) -> Lexicon:
    """Read a word list.

    Parameters
    ----------
    path: path-like
        UTF-8 file, one entry per line; ``#`` starts a comment.

    kind: str
        Lexicon kind, one of :data:`~sumcentral.constants.LEXICON_KINDS`.

    Returns
    -------
    Lexicon
        Lexicon with normalized entries.

    Raises
    ------
    DataError
        If the file cannot be read.
    """
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except (OSError, UnicodeDecodeError) as e:
        raise DataError(f"cannot read lexicon file '{path}': {e}") from e
    entries = set()
    for line in lines:
        entry = normalize_text(line.split("#", 1)[0]).strip()
        if entry:
            entries.add(entry)
    return Lexicon(kind=kind, entries=frozenset(entries))


def load_lexicons(
    stopword: t.Optional[PathLike] = None,
    pronoun: t.Optional[PathLike] = None,
    proper_noun: t.Optional[PathLike] = None,
    taboo: t.Optional[PathLike] = None,
) -> Lexicons:
    """Read the word lists that are given; the others are empty."""
    paths = dict(
        stopword=stopword, pronoun=pronoun, proper_noun=proper_noun, taboo=taboo
    )
    return Lexicons(
        **{
            kind: load_lexicon(path, kind) if path is not None else Lexicon(kind)
            for kind, path in paths.items()
        }
    )


def default_lexicons() -> Lexicons:
    """Persian stop-word and pronoun lists shipped with the package."""
    data = Path(__file__).with_name("data")
    return load_lexicons(
        stopword=data / "stopwords.txt", pronoun=data / "pronouns.txt"
    )


def _read(path: Path, ncr: bool) -> str:
    try:
        raw = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise DataError(f"cannot read '{path}': {e}") from e
    if ncr:
        raw, warnings = decode_ncr(raw)
        if warnings:
            raise DataError(
                f"malformed character reference in '{path}': {warnings[0]}"
            )
    return raw


def load_corpus(
    root: PathLike,
    lexicons: t.Optional[Lexicons] = None,
    ncr: bool = False,
    letter_map: t.Optional[t.Mapping[str, str]] = None,
) -> Corpus:
    """Load a text collection.

    Topic directories are read in lexicographic order, and so are the
    ``*.txt`` document files within a topic.
    A topic directory may hold a ``TOPIC`` file giving the topic title (first
    line) and description; the topic id is the title otherwise.
    The ``gold`` directory and hidden directories are skipped.

    Parameters
    ----------
    root: path-like
        Corpus root directory.

    lexicons: Lexicons, optional
        Word lists used to flag tokens. Defaults to empty lists.

    ncr: bool, default False
        If ``True``, decode numeric character references first.

    letter_map: mapping, optional
        Letter normalization table, see :func:`normalize_text`.

    Returns
    -------
    Corpus
        The loaded corpus.

    Raises
    ------
    DataError
        If the root is missing, a file is unreadable or holds an invalid
        character reference, document ids collide, or no document is left.
    """
    root = Path(root)
    if not root.is_dir():
        raise DataError(f"corpus root '{root}' does not exist")
    if lexicons is None:
        lexicons = Lexicons()

    topics = []
    seen: t.Dict[str, Path] = {}
    topic_dirs = sorted(
        p
        for p in root.iterdir()
        if p.is_dir() and p.name != GOLD_DIR and not p.name.startswith(".")
    )
    for topic_dir in topic_dirs:
        title, description = topic_dir.name, ""
        topic_file = topic_dir / TOPIC_FILE
        if topic_file.is_file():
            text = normalize_text(_read(topic_file, ncr), letter_map)
            first, _, rest = text.partition("\n")
            title, description = first.strip() or title, rest.strip()

        documents = []
        for path in sorted(topic_dir.glob("*.txt")):
            doc_id = path.stem
            if doc_id in seen:
                raise DataError(
                    f"document id '{doc_id}' is not unique: '{seen[doc_id]}' "
                    f"and '{path}'"
                )
            seen[doc_id] = path
            doc = parse_document(
                doc_id, _read(path, ncr), lexicons, topic_dir.name, letter_map
            )
            if not doc.sentences:
                logger.warning("skipping empty document '%s'", path)
                continue
            documents.append(doc)

        if not documents:
            logger.warning("skipping topic '%s' without documents", topic_dir)
            continue
        topics.append(
            Topic(
                id=topic_dir.name,
                title=title,
                description=description,
                documents=tuple(documents),
            )
        )

    if not topics:
        raise DataError(f"empty corpus: no document found under '{root}'")
    logger.debug(
        "loaded %d topics, %d documents from '%s'",
        len(topics),
        sum(len(topic.documents) for topic in topics),
        root,
    )
    return Corpus(topics=tuple(topics), lexicons=lexicons)
