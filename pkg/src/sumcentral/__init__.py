"""Sumcentral."""
from ._version import _version as __version__
from .corpus import load_corpus
from .experiment import Experiment
from .experiment import RunConfig
from .graphrank import baseline_summary
from .graphrank import summarize_centrality
from .parsumist import summarize_parsumist
from .rouge import evaluate_run
from .rouge import rouge_n

__all__ = [
    "Experiment",
    "RunConfig",
    "baseline_summary",
    "evaluate_run",
    "load_corpus",
    "rouge_n",
    "summarize_centrality",
    "summarize_parsumist",
    "__version__",
]
