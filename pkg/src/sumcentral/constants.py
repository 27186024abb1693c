"""Constants module.

Fixed characters, defaults and tolerances shared by the summarizers, the
evaluators and the command-line interface.

Notes
-----
Character sets are given as code points where the glyphs are easily confused
(Arabic and Persian letter variants, zero-width characters).
"""
import typing as t

ZWNJ = "\u200c"
"""Zero-width non-joiner, word-internal in Persian orthography."""

SENTENCE_TERMINATORS = frozenset([".", "!", "?", "؟", "؛"])
"""Sentence terminators: full stop, exclamation and question marks, Persian
question mark and Arabic semicolon."""

QUOTE_MARKS = frozenset(
    [
        '"',
        "“",  # left double quotation mark
        "”",  # right double quotation mark
        "„",  # double low-9 quotation mark
        "«",  # left-pointing guillemet
        "»",  # right-pointing guillemet
        "'",
        "‘",  # left single quotation mark
        "’",  # right single quotation mark
        "‚",  # single low-9 quotation mark
        "‹",  # single left-pointing angle quotation mark
        "›",  # single right-pointing angle quotation mark
    ]
)
"""Characters counted as quotation marks."""

PERCENT_SIGNS = frozenset(["%", "٪"])
"""Percent sign and Arabic percent sign."""

PARENTHESES = frozenset(["(", ")"])
"""Characters counted as parentheses."""

PERSIAN_LETTER_MAP: t.Dict[str, str] = {
    "ك": "ک",  # Arabic kaf -> keheh
    "ي": "ی",  # Arabic yeh -> Farsi yeh
    "ى": "ی",  # alef maksura -> Farsi yeh
    "ۀ": "هٔ",  # heh with yeh above -> heh + hamza above
    "ﮎ": "ک",  # keheh isolated form
    "ﮏ": "ک",  # keheh final form
    "ﮐ": "ک",  # keheh initial form
    "ﮑ": "ک",  # keheh medial form
    "ﯼ": "ی",  # Farsi yeh isolated form
    "ﯽ": "ی",  # Farsi yeh final form
    "ﯾ": "ی",  # Farsi yeh initial form
    "ﯿ": "ی",  # Farsi yeh medial form
    "ﻙ": "ک",  # kaf isolated form
    "ﻚ": "ک",  # kaf final form
    "ﻛ": "ک",  # kaf initial form
    "ﻜ": "ک",  # kaf medial form
    "ﻱ": "ی",  # yeh isolated form
    "ﻲ": "ی",  # yeh final form
    "ﻳ": "ی",  # yeh initial form
    "ﻴ": "ی",  # yeh medial form
    "ﻯ": "ی",  # alef maksura isolated form
    "ﻰ": "ی",  # alef maksura final form
}
"""Default mapping of Arabic and presentation-form letters to the canonical
Persian letters."""

LEXICON_KINDS = ("stopword", "pronoun", "proper_noun", "taboo")
"""Kinds of word lists understood by the corpus loader."""

TOPIC_FILE = "TOPIC"
"""Optional file in a topic directory holding the topic title (first line)
and description (remaining lines)."""

GOLD_DIR = "gold"
"""Directory name, under the corpus root, skipped by the corpus loader."""

# ---------------------------------------------------------------------------
# Vector spaces
# ---------------------------------------------------------------------------

SCHEMES = ("tf", "tfidf", "binary")
"""Term weighting schemes."""

STOPWORD_POLICIES = ("keep", "remove")
"""Stop-word policies for content vectors."""

VECTOR_SPACES = ("term", "lsa")
"""Vector spaces for sentence graphs."""

LSA_K = 200
"""Default rank of the truncated SVD."""

DENSE_SVD_LIMIT = 512
"""Largest ``min(M, N)`` handled by the dense SVD; larger matrices use the
iterative solver."""

SVD_TOL = 1e-10
"""Relative convergence tolerance of the iterative SVD."""

# ---------------------------------------------------------------------------
# Feature-scoring summarizer
# ---------------------------------------------------------------------------

NUM_FEATURES = 8
"""Number of sentence features in the additive score."""

FEATURE_NAMES = (
    "title_words",
    "reciprocal_length",
    "proper_nouns",
    "latin_words",
    "quote_marks",
    "non_pronouns",
    "percent_signs",
    "non_parentheses",
)
"""Feature names, in weight order."""

THRESHOLDS = (0.1, 0.2)
"""Cosine thresholds of the two feature-scoring systems."""

MAX_SENTENCES = 10
"""Default summary length of the feature-scoring systems."""

REDUNDANCY_AGGREGATES = ("min", "median", "max")
"""Aggregates of the cosines to the already selected sentences."""

MULTI_STRATEGIES = ("concatenate", "resummarize")
"""Multi-document strategies of the feature-scoring summarizer."""

# ---------------------------------------------------------------------------
# Graph summarizers
# ---------------------------------------------------------------------------

MEASURES = ("Str", "Clu", "Div", "Pag", "Bet", "Clo", "Eig")
"""Centrality measure codes."""

ASCENDING_MEASURES = frozenset(["Div"])
"""Measures whose low values mark central sentences."""

LSA_MEASURES = ("Pag", "Str")
"""Measures also ranked on the latent semantic graph by default."""

BASELINES = ("Fir", "Las", "Ran")
"""Baseline codes: first, last and random k sentences."""

RATIOS = (0.25, 0.5, 0.75, 1.0)
"""Default compression ratios."""

DAMPING = 0.85
"""PageRank damping factor."""

POWER_TOL = 1e-12
"""L1 residual at which power iterations stop."""

POWER_MAX_ITER = 100000
"""Iteration cap of the power iterations."""

TIE_DECIMALS = 10
"""Decimals kept when comparing centrality scores for ranking."""

MIN_DISTANCE = 1e-6
"""Shortest inverted edge length, given to edges of similarity 1."""

# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

ROUGE_N = (1, 2, 3)
"""Supported ROUGE n-gram orders."""

LIKERT_MIN = 1
"""Lowest rating on the Likert scale."""

LIKERT_MAX = 7
"""Highest rating on the Likert scale."""

LIKERT_MIDPOINT = 4
"""Midpoint of the Likert scale."""

ALPHA = 0.05
"""Significance level."""

AGREEMENT_METHODS = ("cosine", "pearson", "spearman", "kendall")
"""Agreement measures between two rating vectors."""

# ---------------------------------------------------------------------------
# Command-line interface
# ---------------------------------------------------------------------------

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_NO_OUTPUT = 3
"""Exit codes: success, usage/config error, data error, nothing scorable."""
