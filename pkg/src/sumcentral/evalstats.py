"""Statistics of human ratings of summaries.

Ratings are integers on a 1 to 7 Likert scale given by judges to
(topic, system) items.
Each judge's ratings are standardized with :math:`z = (x - \\mu) / \\sigma`
(sample standard deviation) to remove individual bias.
The module measures the agreement between judges, compares judges and
systems with repeated-measures ANOVA and paired t-tests, and ranks topics by
summarizability: the mean, over systems, of the judge-averaged z-scores.
"""
import dataclasses
import itertools
import logging
import math
import typing as t
from pathlib import Path

import numpy as np
import numpy.typing as npt
import pandas as pd
import xarray as xr
from scipy import stats

from .constants import AGREEMENT_METHODS
from .constants import ALPHA
from .constants import LIKERT_MAX
from .constants import LIKERT_MIDPOINT
from .constants import LIKERT_MIN
from .exceptions import ConfigError
from .exceptions import DataError
from .vectorize import cosine

logger = logging.getLogger(__name__)

Array = npt.NDArray[np.float64]
ArrayLike = t.Union[t.Sequence[float], Array]

RATING_COLUMNS = ["judge", "topic", "system", "rating"]
"""Columns of a ratings file."""


@dataclasses.dataclass(frozen=True)
class RatingMatrix:
    """Complete judges × items rating matrix.

    ``ratings`` has dimensions ``("judge", "item")`` and ``topic`` and
    ``system`` coordinates along ``item``.
    """

    ratings: xr.DataArray  # type: ignore
    source: t.Optional[str] = None

    @property
    def judges(self) -> t.List[str]:
        """Judge ids."""
        return [str(j) for j in self.ratings["judge"].values]

    @property
    def items(self) -> t.List[t.Tuple[str, str]]:
        """(topic, system) pairs."""
        return list(
            zip(
                (str(x) for x in self.ratings["topic"].values),
                (str(x) for x in self.ratings["system"].values),
            )
        )

    @property
    def systems(self) -> t.List[str]:
        """Sorted system ids."""
        return sorted(set(str(s) for s in self.ratings["system"].values))

    @property
    def topics(self) -> t.List[str]:
        """Sorted topic ids."""
        return sorted(set(str(s) for s in self.ratings["topic"].values))


@dataclasses.dataclass(frozen=True)
class JudgeStats:
    """Mean and sample standard deviation of a judge's ratings."""

    judge: str
    mean: float
    sd: float

    def standardize(self, rating: float) -> float:
        """z-score of a rating by this judge."""
        return (rating - self.mean) / self.sd


@dataclasses.dataclass(frozen=True)
class StatResult:
    """Outcome of a statistic and its test.

    ``significant`` compares ``p_value`` with ``alpha``; statistics without a
    p-value are never significant.
    """

    test: str
    statistic: float
    p_value: t.Optional[float] = None
    tails: str = "two"
    df: t.Tuple[float, ...] = ()
    alpha: float = ALPHA
    exact_separation: bool = False
    direction: str = ""

    @property
    def significant(self) -> bool:
        """``True`` when ``p_value < alpha``."""
        return self.p_value is not None and self.p_value < self.alpha

    @property
    def significant_at_95(self) -> bool:
        """``True`` when ``p_value < 0.05``."""
        return self.p_value is not None and self.p_value < ALPHA


def rating_matrix(frame: pd.DataFrame, source: t.Optional[str] = None) -> RatingMatrix:
    """Build a rating matrix from a long-format table.

    Parameters
    ----------
    frame: DataFrame
        Table with ``judge``, ``topic``, ``system`` and ``rating`` columns.

    source: str, optional
        Provenance of the table.

    Returns
    -------
    RatingMatrix
        Judges and items in lexicographic order.

    Raises
    ------
    DataError
        If a column is missing, a rating is not an integer from 1 to 7, a cell
        is rated twice or a cell is missing.
    """
    where = f" in '{source}'" if source else ""
    missing = [c for c in RATING_COLUMNS if c not in frame.columns]
    if missing:
        raise DataError(f"missing column(s) {', '.join(missing)}{where}")
    frame = frame[RATING_COLUMNS].astype({"judge": str, "topic": str, "system": str})
    if frame.empty:
        raise DataError(f"no rating{where}")

    values = pd.to_numeric(frame["rating"], errors="coerce")
    bad = values.isna() | (values != values.round())
    bad |= (values < LIKERT_MIN) | (values > LIKERT_MAX)
    if bad.any():
        row = frame[bad].iloc[0]
        raise DataError(
            f"rating '{row['rating']}' of judge '{row['judge']}' on "
            f"({row['topic']}, {row['system']}) is not an integer from "
            f"{LIKERT_MIN} to {LIKERT_MAX}{where}"
        )
    frame = frame.assign(rating=values.astype(int))

    keys = ["judge", "topic", "system"]
    duplicated = frame.duplicated(keys)
    if duplicated.any():
        row = frame[duplicated].iloc[0]
        raise DataError(
            f"judge '{row['judge']}' rates ({row['topic']}, {row['system']}) "
            f"more than once{where}"
        )

    full = pd.MultiIndex.from_product(
        [sorted(frame[k].unique()) for k in keys], names=keys
    )
    series = frame.set_index(keys)["rating"].reindex(full)
    holes = series[series.isna()]
    if len(holes) > 0:
        cells = ", ".join(f"{j}/{tp}/{sy}" for j, tp, sy in holes.index[:5])
        raise DataError(
            f"incomplete rating matrix{where}: {len(holes)} missing cell(s) "
            f"(judge/topic/system) {cells}"
        )
    table = series.unstack(["topic", "system"]).sort_index(axis=0).sort_index(axis=1)

    ratings = xr.DataArray(
        table.to_numpy(dtype=np.int64),
        dims=("judge", "item"),
        coords={
            "judge": ("judge", [str(j) for j in table.index]),
            "topic": ("item", [str(tp) for tp, _ in table.columns]),
            "system": ("item", [str(sy) for _, sy in table.columns]),
        },
        attrs={"long_name": "rating", "units": "Likert"},
    )
    return RatingMatrix(ratings=ratings, source=source)


def load_ratings(path: t.Union[str, Path]) -> RatingMatrix:
    """Read a ratings file (tab-separated, with a header).

    Raises
    ------
    DataError
        If the file cannot be read or the matrix is invalid.
    """
    try:
        frame = pd.read_csv(
            path, sep="\t", dtype=str, keep_default_na=False, encoding="utf-8"
        )
    except (OSError, ValueError) as e:
        raise DataError(f"cannot read ratings file '{path}': {e}") from e
    return rating_matrix(frame, str(path))


def judge_stats(matrix: RatingMatrix) -> t.List[JudgeStats]:
    """Mean and sample standard deviation of every judge."""
    values = matrix.ratings.astype(float)
    means = values.mean("item")
    sds = values.std("item", ddof=1)
    return [
        JudgeStats(judge=j, mean=float(m), sd=float(s))
        for j, m, s in zip(matrix.judges, means.values, sds.values)
    ]


def zscore_standardize(
    matrix: RatingMatrix,
) -> t.Tuple[xr.DataArray, t.List[JudgeStats]]:  # type: ignore
    """Standardize every judge's ratings.

    Returns
    -------
    tuple
        z-scores, with the dimensions and coordinates of the ratings, and the
        judge statistics.

    Raises
    ------
    DataError
        If a judge gives the same rating to every item.
    """
    judges = judge_stats(matrix)
    for js in judges:
        if not js.sd > 0.0:
            raise DataError(f"judge '{js.judge}' gives a constant rating")
    mu = xr.DataArray([js.mean for js in judges], dims="judge")
    sd = xr.DataArray([js.sd for js in judges], dims="judge")
    z = (matrix.ratings.astype(float) - mu) / sd
    z.attrs = {"long_name": "standardized rating", "units": "dimensionless"}
    return z, judges


def _check_pair(u: ArrayLike, v: ArrayLike, minimum: int) -> t.Tuple[Array, Array]:
    a = np.asarray(u, dtype=float)
    b = np.asarray(v, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise DataError(f"vectors differ in shape: {a.shape} and {b.shape}")
    if len(a) < minimum:
        raise DataError(f"at least {minimum} observations are needed (got {len(a)})")
    return a, b


def correlation_p_value(r: float, n: int) -> float:
    """Two-tailed p-value of a correlation coefficient.

    Uses :math:`t = r \\sqrt{(n - 2) / (1 - r^2)}` with :math:`n - 2` degrees
    of freedom.
    """
    if abs(r) >= 1.0:
        return 0.0
    statistic = r * math.sqrt((n - 2) / (1.0 - r * r))
    return float(min(1.0, 2.0 * stats.t.sf(abs(statistic), n - 2)))


def agreement(u: ArrayLike, v: ArrayLike, method: str = "pearson") -> StatResult:
    """Agreement between two rating vectors.

    Parameters
    ----------
    u, v: array-like
        Rating vectors of equal length, at least 3.

    method: str, default "pearson"
        ``"cosine"`` (no p-value), ``"pearson"``, ``"spearman"`` (Pearson on
        average ranks) or ``"kendall"`` (tau-b, normal approximation).

    Returns
    -------
    StatResult
        The coefficient and its two-tailed p-value.

    Raises
    ------
    ConfigError
        If the method is unknown.

    DataError
        If the vectors are too short, differ in length, or a correlation
        method gets a constant vector.
    """
    if method not in AGREEMENT_METHODS:
        raise ConfigError(f"unknown agreement method '{method}'")
    a, b = _check_pair(u, v, 3)
    n = len(a)
    if method == "cosine":
        return StatResult(test="cosine", statistic=cosine(a, b))
    if np.ptp(a) == 0.0 or np.ptp(b) == 0.0:
        raise DataError(f"{method} correlation is undefined for a constant vector")

    if method == "kendall":
        result = stats.kendalltau(a, b, variant="b", method="asymptotic")
        return StatResult(
            test="kendall",
            statistic=float(result[0]),
            p_value=float(result[1]),
            df=(),
        )
    if method == "spearman":
        a, b = stats.rankdata(a), stats.rankdata(b)
    r = float(np.clip(stats.pearsonr(a, b)[0], -1.0, 1.0))
    return StatResult(
        test=method,
        statistic=r,
        p_value=correlation_p_value(r, n),
        df=(n - 2,),
    )


def rm_anova(data: t.Union[ArrayLike, t.Sequence[t.Sequence[float]]]) -> StatResult:
    """One-way repeated-measures ANOVA.

    Parameters
    ----------
    data: array-like
        Conditions × subjects matrix.

    Returns
    -------
    StatResult
        :math:`F = MS_{conditions} / MS_{error}` with
        :math:`(k - 1, (k - 1)(s - 1))` degrees of freedom.

    Raises
    ------
    DataError
        If there are fewer than 2 conditions or subjects, or a value is
        missing.
    """
    x = np.asarray(data, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2 or x.shape[1] < 2:
        raise DataError(
            f"repeated-measures ANOVA needs at least 2 conditions and 2 subjects "
            f"(got shape {x.shape})"
        )
    if not np.all(np.isfinite(x)):
        raise DataError("repeated-measures ANOVA needs a complete matrix")
    k, s = x.shape
    grand = x.mean()
    ss_total = float(((x - grand) ** 2).sum())
    ss_cond = float(s * ((x.mean(axis=1) - grand) ** 2).sum())
    ss_subj = float(k * ((x.mean(axis=0) - grand) ** 2).sum())
    ss_err = max(ss_total - ss_cond - ss_subj, 0.0)
    df1, df2 = k - 1, (k - 1) * (s - 1)
    scale = max(ss_total, 1.0) * 1e-12

    if ss_cond <= scale:
        f, p = 0.0, 1.0
    elif ss_err <= scale:
        f, p = math.inf, 0.0
    else:
        f = (ss_cond / df1) / (ss_err / df2)
        p = float(stats.f.sf(f, df1, df2))
    return StatResult(test="rm_anova", statistic=f, p_value=p, df=(df1, df2))


def paired_ttest(
    x: ArrayLike, y: ArrayLike, tails: str = "one", family_size: int = 1
) -> StatResult:
    """Paired t-test with Bonferroni-adjusted significance.

    The one-tailed alternative is that the sample with the higher mean is
    larger; ``direction`` records which (``"x>y"`` or ``"y>x"``).

    Parameters
    ----------
    x, y: array-like
        Paired samples of equal length, at least 2.

    tails: str, default "one"
        ``"one"`` or ``"two"``.

    family_size: int, default 1
        Number of comparisons; the significance level is
        ``0.05 / family_size``.

    Returns
    -------
    StatResult
        :math:`t = \\bar d / (s_d / \\sqrt n)` with :math:`n - 1` degrees of
        freedom. Differences that are all zero give :math:`t = 0`; a nonzero
        constant difference gives :math:`p = 0` and ``exact_separation``.

    Raises
    ------
    ConfigError
        If ``tails`` or ``family_size`` is invalid.
    """
    if tails not in ("one", "two"):
        raise ConfigError(f"tails must be 'one' or 'two' (got '{tails}')")
    if family_size < 1:
        raise ConfigError(f"family size must be positive (got {family_size})")
    a, b = _check_pair(x, y, 2)
    n = len(a)
    d = a - b
    direction = "x>y" if a.mean() >= b.mean() else "y>x"
    alpha = ALPHA / family_size
    mean = float(d.mean())
    sd = float(d.std(ddof=1))

    exact = False
    if not np.any(d):
        statistic = 0.0
        p = 0.5 if tails == "one" else 1.0
    elif sd == 0.0:
        statistic = math.copysign(math.inf, mean)
        p = 0.0
        exact = True
    else:
        statistic = mean / (sd / math.sqrt(n))
        p = float(stats.t.sf(abs(statistic), n - 1))
        if tails == "two":
            p = min(1.0, 2.0 * p)
    return StatResult(
        test="paired_t",
        statistic=statistic,
        p_value=p,
        tails=tails,
        df=(n - 1,),
        alpha=alpha,
        exact_separation=exact,
        direction=direction,
    )


def topic_system_table(z: xr.DataArray) -> pd.DataFrame:  # type: ignore
    """Judge-averaged z-scores as a topics × systems table.

    Raises
    ------
    DataError
        If a (topic, system) cell is missing.
    """
    averaged = z.mean("judge").set_index(item=["topic", "system"]).unstack("item")
    table = averaged.transpose("topic", "system").to_pandas()
    table = table.sort_index(axis=0).sort_index(axis=1)
    if table.isna().to_numpy().any():
        raise DataError("incomplete topic × system table")
    table.index.name, table.columns.name = "topic", "system"
    return table


@dataclasses.dataclass(frozen=True)
class Summarizability:
    """Summarizability of topics and the system comparisons it relies on.

    ``scores`` is sorted in descending order.
    """

    scores: pd.Series
    classes: pd.Series
    system_means: pd.Series
    system_vectors: pd.DataFrame
    system_cosines: pd.DataFrame


def summarizability_classes(scores: pd.Series) -> pd.Series:
    """Label topics whose score is one standard deviation off the mean.

    Labels are ``highly_summarizable``, ``highly_unsummarizable`` and
    ``agnostic``.
    """
    mean = float(scores.mean())
    sd = float(scores.std(ddof=1)) if len(scores) > 1 else 0.0
    labels = np.where(
        scores >= mean + sd,
        "highly_summarizable",
        np.where(scores <= mean - sd, "highly_unsummarizable", "agnostic"),
    )
    if sd == 0.0:
        labels[:] = "agnostic"
    return pd.Series(labels, index=scores.index, name="class")


def cosine_table(vectors: pd.DataFrame) -> pd.DataFrame:
    """Pairwise cosines of the columns of a table."""
    names = list(vectors.columns)
    values = [
        [cosine(vectors[a].to_numpy(), vectors[b].to_numpy()) for b in names]
        for a in names
    ]
    return pd.DataFrame(values, index=names, columns=names)


def summarizability(z: xr.DataArray) -> Summarizability:  # type: ignore
    """Rank topics by summarizability.

    Parameters
    ----------
    z: DataArray
        z-scores with dimensions ``("judge", "item")`` and ``topic`` and
        ``system`` coordinates along ``item``.

    Returns
    -------
    Summarizability
        Topic scores (mean over systems of the judge-averaged z-scores) in
        descending order, their classes, per-system means, per-system topic
        vectors and the cosines between those vectors.

    Raises
    ------
    DataError
        If a (topic, system) cell is missing.
    """
    table = topic_system_table(z)
    scores = table.mean(axis=1).rename("summarizability")
    scores = scores.iloc[np.argsort(-scores.to_numpy(), kind="stable")]
    return Summarizability(
        scores=scores,
        classes=summarizability_classes(scores),
        system_means=table.mean(axis=0).rename("mean"),
        system_vectors=table,
        system_cosines=cosine_table(table),
    )


def prototype_cosines(
    system_vectors: pd.DataFrame, groups: t.Mapping[str, t.Sequence[str]]
) -> pd.DataFrame:
    """Cosines between the mean topic vectors of groups of systems.

    Raises
    ------
    ConfigError
        If a group is empty or names an unknown system.
    """
    prototypes = {}
    for name, members in groups.items():
        unknown = [m for m in members if m not in system_vectors.columns]
        if not members or unknown:
            raise ConfigError(f"invalid system group '{name}': {', '.join(unknown)}")
        prototypes[name] = system_vectors[list(members)].mean(axis=1)
    return cosine_table(pd.DataFrame(prototypes))


def central_tendency(matrix: RatingMatrix) -> pd.DataFrame:
    """Per-judge mean, deviation and closeness to the scale midpoint."""
    values = matrix.ratings.to_numpy()
    middle = np.abs(values - LIKERT_MIDPOINT) <= 1
    rows = [
        {
            "judge": js.judge,
            "mean": js.mean,
            "sd": js.sd,
            "midpoint_distance": abs(js.mean - LIKERT_MIDPOINT),
            "middle_share": float(middle[i].mean()),
        }
        for i, js in enumerate(judge_stats(matrix))
    ]
    return pd.DataFrame(rows).set_index("judge")


def agreement_table(
    ratings: xr.DataArray, method: str  # type: ignore
) -> t.Tuple[pd.DataFrame, pd.DataFrame]:
    """Pairwise agreement of the judges' rating vectors.

    Returns
    -------
    tuple
        Coefficients and p-values, as judges × judges tables.
    """
    judges = [str(j) for j in ratings["judge"].values]
    stat = pd.DataFrame(np.nan, index=judges, columns=judges)
    pval = pd.DataFrame(np.nan, index=judges, columns=judges)
    for i, a in enumerate(judges):
        for b in judges[i:]:
            result = agreement(
                ratings.sel(judge=a).to_numpy(),
                ratings.sel(judge=b).to_numpy(),
                method,
            )
            stat.loc[a, b] = stat.loc[b, a] = result.statistic
            if result.p_value is not None:
                pval.loc[a, b] = pval.loc[b, a] = result.p_value
    return stat, pval


def system_ttests(system_vectors: pd.DataFrame, tails: str = "one") -> pd.DataFrame:
    """Paired t-tests between all pairs of systems, Bonferroni-adjusted."""
    pairs = list(itertools.combinations(system_vectors.columns, 2))
    rows = []
    for a, b in pairs:
        result = paired_ttest(
            system_vectors[a].to_numpy(),
            system_vectors[b].to_numpy(),
            tails=tails,
            family_size=len(pairs),
        )
        better, worse = (a, b) if result.direction == "x>y" else (b, a)
        rows.append(
            {
                "system_a": a,
                "system_b": b,
                "t": result.statistic,
                "df": result.df[0],
                "p": result.p_value,
                "alpha": result.alpha,
                "significant": result.significant,
                "higher": better,
                "lower": worse,
                "exact_separation": result.exact_separation,
            }
        )
    return pd.DataFrame(rows)


def document_count_correlation(
    scores: pd.Series, counts: t.Mapping[str, int]
) -> StatResult:
    """Pearson correlation between summarizability and topic sizes.

    Raises
    ------
    DataError
        If a topic has no document count.
    """
    missing = [tp for tp in scores.index if tp not in counts]
    if missing:
        raise DataError(f"no document count for topic(s) {', '.join(missing)}")
    sizes = [float(counts[tp]) for tp in scores.index]
    return agreement(scores.to_numpy(), sizes, "pearson")


def stats_report(
    matrix: RatingMatrix,
    groups: t.Optional[t.Mapping[str, t.Sequence[str]]] = None,
    document_counts: t.Optional[t.Mapping[str, int]] = None,
) -> t.List[t.Tuple[str, pd.DataFrame]]:
    """Every statistic of a rating matrix, as named tables.

    Parameters
    ----------
    matrix: RatingMatrix
        Ratings.

    groups: mapping, optional
        Named groups of systems whose prototypes are compared.

    document_counts: mapping, optional
        Number of documents of every topic.

    Returns
    -------
    list of tuple
        (block name, table) pairs, in report order.
    """
    blocks: t.List[t.Tuple[str, pd.DataFrame]] = []
    for method in AGREEMENT_METHODS:
        stat, pval = agreement_table(matrix.ratings, method)
        blocks.append((f"agreement_{method}", stat))
        if method != "cosine":
            blocks.append((f"agreement_{method}_p", pval))

    z, _ = zscore_standardize(matrix)
    blocks.append(("judges", central_tendency(matrix)))
    judges_anova = rm_anova(matrix.ratings.to_numpy())
    blocks.append(("anova_judges", _result_frame(judges_anova)))

    result = summarizability(z)
    blocks.append(("system_means", result.system_means.to_frame()))
    systems_anova = rm_anova(result.system_vectors.to_numpy().T)
    blocks.append(("anova_systems", _result_frame(systems_anova)))
    if len(result.system_vectors.columns) >= 2:
        blocks.append(("system_ttests", system_ttests(result.system_vectors)))
    blocks.append(("system_cosines", result.system_cosines))
    if groups:
        blocks.append(
            ("prototype_cosines", prototype_cosines(result.system_vectors, groups))
        )
    blocks.append(
        ("summarizability", pd.concat([result.scores, result.classes], axis=1))
    )
    if document_counts is not None:
        correlation = document_count_correlation(result.scores, document_counts)
        blocks.append(("document_count_correlation", _result_frame(correlation)))
    return blocks


def _result_frame(result: StatResult) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "test": result.test,
                "statistic": result.statistic,
                "df": ",".join(f"{d:g}" for d in result.df),
                "p": result.p_value,
                "significant": result.significant,
            }
        ]
    )


def write_report(
    blocks: t.Sequence[t.Tuple[str, pd.DataFrame]], path: t.Union[str, Path]
) -> None:
    """Write named tables as tab-separated blocks headed by ``# <name>``."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_report(blocks))


def format_report(blocks: t.Sequence[t.Tuple[str, pd.DataFrame]]) -> str:
    """Render named tables as tab-separated blocks headed by ``# <name>``."""
    parts = []
    for name, table in blocks:
        index = table.index.name is not None or not isinstance(
            table.index, pd.RangeIndex
        )
        body = table.to_csv(
            sep="\t", index=index, float_format="%.6f", lineterminator="\n"
        )
        parts.append(f"# {name}\n{body}")
    return "\n".join(parts)
