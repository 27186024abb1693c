"""Command-line interface."""
import logging
import typing as t
from pathlib import Path

import click

from .constants import ASCENDING_MEASURES
from .constants import EXIT_CONFIG
from .constants import EXIT_DATA
from .constants import EXIT_NO_OUTPUT
from .constants import LSA_K
from .constants import MULTI_STRATEGIES
from .constants import REDUNDANCY_AGGREGATES
from .constants import ROUGE_N
from .constants import SCHEMES
from .constants import STOPWORD_POLICIES
from .constants import VECTOR_SPACES
from .corpus import load_corpus
from .evalstats import format_report
from .evalstats import load_ratings
from .evalstats import stats_report
from .exceptions import ConfigError
from .exceptions import NoScorableOutputError
from .exceptions import SumcentralError
from .experiment import document_counts
from .experiment import Experiment
from .experiment import MODES
from .experiment import read_run
from .experiment import RunConfig
from .graphrank import graph_dataset
from .rouge import evaluate_run
from .rouge import write_report

F = t.TypeVar("F", bound=t.Callable[..., t.Any])


class Command(click.Command):
    """Command whose usage errors exit with the configuration error code."""

    def make_context(self, *args: t.Any, **kwargs: t.Any) -> click.Context:
        """Parse the arguments."""
        try:
            return super().make_context(*args, **kwargs)
        except click.UsageError as e:
            e.exit_code = EXIT_CONFIG
            raise


class Group(Command, click.Group):
    """Group of :class:`Command`."""

    command_class = Command


def _fail(ctx: click.Context, error: SumcentralError) -> None:
    """Print an error and exit with the matching status code."""
    click.echo(f"Error: {error}", err=True)
    if isinstance(error, ConfigError):
        ctx.exit(EXIT_CONFIG)
    elif isinstance(error, NoScorableOutputError):
        ctx.exit(EXIT_NO_OUTPUT)
    ctx.exit(EXIT_DATA)


def _split(ctx: click.Context, param: click.Parameter, value: t.Any) -> t.Any:
    """Turn ``a,b,c`` into ``("a", "b", "c")``."""
    if value is None:
        return None
    return tuple(v.strip() for v in value.split(",") if v.strip())


def _multiple(value: t.Tuple[t.Any, ...]) -> t.Optional[t.Tuple[t.Any, ...]]:
    return value if value else None


def run_options(f: F) -> F:
    """Options shared by the commands reading a corpus."""
    options = [
        click.option(
            "--config",
            "config_file",
            help="JSON configuration file; command-line options override it",
            type=click.Path(exists=True, dir_okay=False),
        ),
        click.option(
            "--corpus",
            "-c",
            help="Corpus root directory",
            type=click.Path(file_okay=False),
        ),
        click.option(
            "--mode",
            help="Summarize documents (single) or topics (multi)  [default: single]",
            type=click.Choice(MODES),
        ),
        click.option(
            "--scheme",
            help="Term weighting scheme (repeatable)  [default: all]",
            type=click.Choice(SCHEMES),
            multiple=True,
        ),
        click.option(
            "--stopwords",
            help="Stop-word policy (repeatable)  [default: all]",
            type=click.Choice(STOPWORD_POLICIES),
            multiple=True,
        ),
        click.option(
            "--space",
            help="Sentence vector space (repeatable)  [default: term]",
            type=click.Choice(VECTOR_SPACES),
            multiple=True,
        ),
        click.option(
            "--lsa-k",
            help=f"Rank of the latent semantic model  [default: {LSA_K}]",
            type=click.IntRange(min=1),
        ),
        click.option(
            "--lsa-model",
            help="Latent semantic model (netCDF) used instead of training one",
            type=click.Path(exists=True, dir_okay=False),
        ),
        click.option("--seed", help="Random seed  [default: 0]", type=int),
        click.option(
            "--decode-ncr/--no-decode-ncr",
            default=None,
            help="Decode numeric character references in corpus files",
        ),
        click.option(
            "--idf-table",
            help="Idf table (term<TAB>idf) used instead of corpus idf",
            type=click.Path(exists=True, dir_okay=False),
        ),
        click.option(
            "--invert-distances/--no-invert-distances",
            default=None,
            help="Use 1 - similarity as edge length for Bet and Clo",
        ),
        click.option(
            "--stopword-list",
            help="Stop-word list  [default: shipped Persian list]",
            type=click.Path(exists=True, dir_okay=False),
        ),
        click.option(
            "--pronoun-list",
            help="Pronoun list  [default: shipped Persian list]",
            type=click.Path(exists=True, dir_okay=False),
        ),
        click.option(
            "--proper-noun-list",
            help="Proper noun list",
            type=click.Path(exists=True, dir_okay=False),
        ),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _run_config(config_file: t.Optional[str], **values: t.Any) -> RunConfig:
    """Merge built-in defaults, the configuration file and the options."""
    config = RunConfig.from_file(config_file) if config_file else RunConfig()
    return config.updated(values)


def _common(kwargs: t.Dict[str, t.Any]) -> t.Dict[str, t.Any]:
    """Configuration values of the shared options."""
    return dict(
        corpus=kwargs["corpus"],
        mode=kwargs["mode"],
        schemes=_multiple(kwargs["scheme"]),
        stopword_policies=_multiple(kwargs["stopwords"]),
        spaces=_multiple(kwargs["space"]),
        lsa_k=kwargs["lsa_k"],
        lsa_model=kwargs["lsa_model"],
        seed=kwargs["seed"],
        decode_ncr=kwargs["decode_ncr"],
        idf_table=kwargs["idf_table"],
        invert_distances=kwargs["invert_distances"],
        stopwords=kwargs["stopword_list"],
        pronouns=kwargs["pronoun_list"],
        proper_nouns=kwargs["proper_noun_list"],
    )


@click.group(cls=Group)
@click.option("--verbose", "-v", is_flag=True, help="Log debugging messages")
@click.version_option()
def main(verbose: bool) -> None:
    """Extractive summarization with feature scoring and graph centrality."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )


@main.command()
@run_options
@click.option(
    "--systems",
    help="Comma-separated system codes: parsumist, Str, Clu, Div, Pag, Bet, "
    "Clo, Eig, Fir, Las, Ran  [default: all]",
    callback=_split,
)
@click.option(
    "--lsa-measures",
    help="Comma-separated measures also ranked on the latent graph of tf "
    "vectors without stop words; empty for none  [default: Pag,Str]",
    callback=_split,
)
@click.option(
    "--threshold",
    help="Cosine threshold of the parsumist systems (repeatable)  "
    "[default: 0.1, 0.2]",
    type=click.FloatRange(0.0, 1.0),
    multiple=True,
)
@click.option(
    "--ratio",
    help="Compression ratio (repeatable)  [default: 0.25, 0.5, 0.75, 1.0]",
    type=click.FloatRange(0.0, 1.0, min_open=True),
    multiple=True,
)
@click.option(
    "--max-sentences",
    help="Length of the parsumist summaries  [default: 10]",
    type=click.IntRange(min=1),
)
@click.option(
    "--redundancy",
    help="Aggregate of the cosines to the selected sentences  [default: min]",
    type=click.Choice(REDUNDANCY_AGGREGATES),
)
@click.option(
    "--multi-strategy",
    help="Multi-document strategy of parsumist  [default: concatenate]",
    type=click.Choice(MULTI_STRATEGIES),
)
@click.option(
    "--out",
    "-o",
    help="Output directory  [default: runs]",
    type=click.Path(file_okay=False, writable=True),
)
@click.pass_context
def summarize(
    ctx: click.Context, config_file: t.Optional[str], **kwargs: t.Any
) -> None:
    """Summarize every item of a corpus with every system of the grid."""
    try:
        config = _run_config(
            config_file,
            systems=kwargs["systems"],
            lsa_measures=kwargs["lsa_measures"],
            thresholds=_multiple(kwargs["threshold"]),
            ratios=_multiple(kwargs["ratio"]),
            max_sentences=kwargs["max_sentences"],
            redundancy=kwargs["redundancy"],
            multi_strategy=kwargs["multi_strategy"],
            out=kwargs["out"],
            **_common(kwargs),
        )
        experiment = Experiment(config)
        click.echo(f"Summarizing '{config.corpus}' ({config.mode} mode)")
        manifest = experiment.run()
    except SumcentralError as e:
        _fail(ctx, e)
        return
    click.echo(
        f"Wrote {len(manifest['summaries'])} summaries in {config.out} "
        f"({len(manifest['failures'])} failure(s))"
    )


@main.command()
@click.option(
    "--summaries",
    "-s",
    help="Run directory written by 'summarize'",
    required=True,
    type=click.Path(file_okay=False),
)
@click.option(
    "--gold",
    "-g",
    help="Gold summaries root: <gold>/<item-id>/*.txt",
    required=True,
    type=click.Path(file_okay=False),
)
@click.option(
    "--rouge-n",
    "-n",
    "ns",
    help="ROUGE n-gram order (repeatable)",
    type=click.Choice([str(n) for n in ROUGE_N]),
    multiple=True,
    default=[str(n) for n in ROUGE_N],
    show_default=True,
)
@click.option(
    "--out",
    "-o",
    help="Report file; printed when omitted",
    type=click.Path(dir_okay=False, writable=True),
)
@click.pass_context
def evaluate(
    ctx: click.Context,
    summaries: str,
    gold: str,
    ns: t.Tuple[str, ...],
    out: t.Optional[str],
) -> None:
    """Score a run against gold summaries with ROUGE-N."""
    try:
        report = evaluate_run(
            read_run(summaries), gold, sorted(int(n) for n in set(ns))
        )
    except SumcentralError as e:
        _fail(ctx, e)
        return
    if out:
        write_report(report, out)
        click.echo(f"Writing report in {out}")
    else:
        click.echo(
            report.to_csv(
                sep="\t", index=False, float_format="%.6f", lineterminator="\n"
            ),
            nl=False,
        )


def _groups(
    ctx: click.Context, param: click.Parameter, values: t.Tuple[str, ...]
) -> t.Dict[str, t.Tuple[str, ...]]:
    """Parse ``NAME=SYS1,SYS2`` group definitions."""
    groups = {}
    for value in values:
        name, sep, members = value.partition("=")
        if not sep or not name.strip():
            raise click.BadParameter(f"expected NAME=SYS1,SYS2 (got '{value}')")
        groups[name.strip()] = tuple(
            m.strip() for m in members.split(",") if m.strip()
        )
    return groups


@main.command()
@click.option(
    "--ratings",
    "-r",
    help="Ratings file with columns judge, topic, system, rating",
    required=True,
    type=click.Path(exists=True, dir_okay=False),
)
@click.option(
    "--group",
    "groups",
    help="System group NAME=SYS1,SYS2 whose prototype is compared (repeatable)",
    multiple=True,
    callback=_groups,
)
@click.option(
    "--corpus",
    "-c",
    help="Corpus whose topic sizes are correlated with summarizability",
    type=click.Path(file_okay=False),
)
@click.option(
    "--decode-ncr/--no-decode-ncr",
    default=False,
    help="Decode numeric character references in corpus files",
)
@click.option(
    "--out",
    "-o",
    help="Report file; printed when omitted",
    type=click.Path(dir_okay=False, writable=True),
)
@click.pass_context
def stats(
    ctx: click.Context,
    ratings: str,
    groups: t.Dict[str, t.Tuple[str, ...]],
    corpus: t.Optional[str],
    decode_ncr: bool,
    out: t.Optional[str],
) -> None:
    """Agreement, bias, ANOVA, t-tests and summarizability of ratings."""
    try:
        matrix = load_ratings(ratings)
        counts = None
        if corpus:
            counts = document_counts(load_corpus(corpus, ncr=decode_ncr))
        text = format_report(stats_report(matrix, groups or None, counts))
    except SumcentralError as e:
        _fail(ctx, e)
        return
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
        click.echo(f"Writing report in {out}")
    else:
        click.echo(text, nl=False)


@main.command()
@run_options
@click.option(
    "--item",
    "item_ids",
    help="Item id to inspect (repeatable)  [default: all]",
    multiple=True,
)
@click.option(
    "--out",
    "-o",
    help="Directory of the netCDF data sets; a digest is printed when omitted",
    type=click.Path(file_okay=False, writable=True),
)
@click.pass_context
def inspect(
    ctx: click.Context,
    config_file: t.Optional[str],
    item_ids: t.Tuple[str, ...],
    out: t.Optional[str],
    **kwargs: t.Any,
) -> None:
    """Dump sentence graph weights and centralities of corpus items."""
    try:
        config = _run_config(config_file, **_common(kwargs))
        experiment = Experiment(config)
        items = [i for i in experiment.items if not item_ids or i.id in item_ids]
        if item_ids and not items:
            raise ConfigError(f"no item named {', '.join(item_ids)}")
        if out:
            Path(out).mkdir(parents=True, exist_ok=True)
        for item in items:
            for vectors, graph in experiment.graphs(item):
                ds = graph_dataset(graph, item.id, config.invert_distances)
                if out:
                    filename = Path(out) / f"{item.id}.{vectors.tag}.nc"
                    click.echo(f"Writing {filename}")
                    ds.to_netcdf(filename)
                    continue
                top = {}
                for m in ds.measure.values:
                    scores = ds.centrality.sel(measure=m)
                    if m in ASCENDING_MEASURES:
                        top[str(m)] = int(scores.argmin(dim="node"))
                    else:
                        top[str(m)] = int(scores.argmax(dim="node"))
                click.echo(
                    f"{item.id}\t{vectors.tag}\tnodes={graph.n}\t"
                    + " ".join(f"{m}:{i}" for m, i in top.items())
                )
    except SumcentralError as e:
        _fail(ctx, e)


if __name__ == "__main__":
    main(prog_name="sumcentral")  # pragma: no cover
