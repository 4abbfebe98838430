"""Command-line front end.

Subcommands cover the whole workflow: ``clean`` dirty markup, ``segment``
into sentences, ``annotate`` into VRT, ``encode`` into an indexed corpus,
then ``query``/``freq``/``keywords``/``subcorpus`` against the registry,
or ``serve`` the HTTP API. Exit codes: 0 success, 1 usage or query
errors, 2 operational failures (missing corpus, unreadable input).
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import analytics, plots
from .index import (
    CorpusAlreadyRegistered,
    CorpusNotFound,
    CorpusReader,
    CorruptIndex,
    MissingAttribute,
    Registry,
    UnknownAttribute,
    build_postings,
    encode,
)
from .model import Corpus, TextUnit
from .pipeline import (
    DEFAULT_ABBREVIATIONS,
    ExternalAnnotator,
    LexiconAnnotator,
    SegmenterConfig,
    annotate,
    clean_markup,
    segment_sentences,
    tokenize,
)
from .pipeline.annotate import (
    AnnotatorLaunchFailure,
    AnnotatorProtocolViolation,
    load_lexicon_file,
)
from .query import (
    QueryError,
    QuerySettings,
    QueryTimeout,
    UnknownStructuralAttribute,
    concordance,
    count_matches,
    evaluate,
    parse_query,
)
from .service import ServiceConfig, serve as run_service
from .vrt import VrtError, write_vrt

__all__ = ["cli", "entry", "main"]


class QueryFailure(click.ClickException):
    exit_code = 1


class OperationalError(click.ClickException):
    exit_code = 2


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OperationalError(f"cannot read {path}: {exc}") from exc


def _write_output(path: str | None, content: str) -> None:
    if path is None or path == "-":
        click.echo(content, nl=False)
    else:
        Path(path).write_text(content, encoding="utf-8")


def _open_reader(corpus: str, registry_dir: str) -> CorpusReader:
    try:
        return CorpusReader.open(corpus, registry_dir)
    except (CorpusNotFound, CorruptIndex) as exc:
        raise OperationalError(str(exc)) from exc


def _load_scope(reader: CorpusReader, name: str | None) -> analytics.Subcorpus | None:
    if name is None:
        return None
    try:
        return analytics.load_subcorpus(reader, name)
    except KeyError as exc:
        raise OperationalError(str(exc)) from exc


registry_option = click.option(
    "--registry", "-R", "registry_dir", envvar="CONCORD_REGISTRY", required=True,
    type=click.Path(file_okay=False), help="Registry directory of encoded corpora.",
)


@click.group()
@click.version_option(package_name="concord")
def cli() -> None:
    """Corpus workbench: encode annotated text, query it, analyze it."""


# -- pipeline ------------------------------------------------------------------


@cli.command()
@click.argument("input_path", metavar="INPUT")
@click.option("-o", "--output", "output_path", help="Output file (default: stdout).")
@click.option("--strict", is_flag=True, help="Fail on unbalanced markup instead of recovering.")
def clean(input_path: str, output_path: str | None, strict: bool) -> None:
    """Strip markup from INPUT, keeping plain text."""
    from .pipeline.cleanup import UnbalancedMarkup

    raw = _read_input(input_path)
    try:
        text, report = clean_markup(raw, mode="strict" if strict else "lenient")
    except UnbalancedMarkup as exc:
        raise OperationalError(str(exc)) from exc
    for warning in report.warnings:
        click.echo(f"warning: byte {warning.offset}: {warning.kind}: {warning.snippet!r}",
                   err=True)
    _write_output(output_path, text + ("\n" if text and not text.endswith("\n") else ""))


@cli.command()
@click.argument("input_path", metavar="INPUT")
@click.option("-o", "--output", "output_path", help="Output file (default: stdout).")
@click.option("--abbrev-file", type=click.Path(exists=True, dir_okay=False),
              help="Abbreviation list, one entry per line (default: builtin Portuguese set).")
@click.option("--max-tokens", default=1000, show_default=True,
              help="Hard sentence split after this many tokens.")
def segment(input_path: str, output_path: str | None, abbrev_file: str | None,
            max_tokens: int) -> None:
    """Split plain text into one sentence per line."""
    abbreviations = DEFAULT_ABBREVIATIONS
    if abbrev_file:
        entries = [
            line.strip() for line in Path(abbrev_file).read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
        abbreviations = frozenset(entries)
    try:
        config = SegmenterConfig(abbreviations=abbreviations, max_sentence_tokens=max_tokens)
    except ValueError as exc:
        raise OperationalError(str(exc)) from exc
    sentences = segment_sentences(_read_input(input_path), config)
    _write_output(output_path, "".join(s.replace("\n", " ") + "\n" for s in sentences))


@cli.command(name="annotate")
@click.argument("input_path", metavar="INPUT")
@click.option("-o", "--output", "output_path", help="Output VRT file (default: stdout).")
@click.option("--lexicon", "lexicon_path", type=click.Path(exists=True, dir_okay=False),
              help="Builtin annotator lexicon (word<TAB>pos<TAB>lemma per line).")
@click.option("--command", "command_template",
              help="External annotator command with {input} and {output} placeholders.")
@click.option("--default-pos", default="NOM", show_default=True,
              help="Tag for words missing from the lexicon.")
@click.option("--text-id", help="Text id for the VRT header (default: input file stem).")
@click.option("--meta", "meta_pairs", multiple=True, metavar="KEY=VALUE",
              help="Text metadata attribute (repeatable).")
def annotate_command(input_path: str, output_path: str | None, lexicon_path: str | None,
                     command_template: str | None, default_pos: str,
                     text_id: str | None, meta_pairs: tuple[str, ...]) -> None:
    """Tokenize and annotate segmented text (one sentence per line) into VRT."""
    if command_template and lexicon_path:
        raise click.UsageError("use either --lexicon or --command, not both")
    if command_template:
        try:
            annotator = ExternalAnnotator(command_template)
        except ValueError as exc:
            raise click.UsageError(str(exc)) from exc
    elif lexicon_path:
        try:
            annotator = load_lexicon_file(lexicon_path, default_pos)
        except ValueError as exc:
            raise OperationalError(str(exc)) from exc
    else:
        annotator = LexiconAnnotator(default_pos=default_pos)

    metadata: dict[str, str] = {}
    for pair in meta_pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise click.UsageError(f"--meta expects KEY=VALUE, got {pair!r}")
        metadata[key] = value

    raw_sentences = [line for line in _read_input(input_path).splitlines() if line.strip()]
    tokenized = [tokenize(s) for s in raw_sentences]
    try:
        sentences = annotate(tokenized, annotator)
    except (AnnotatorProtocolViolation, AnnotatorLaunchFailure) as exc:
        raise OperationalError(str(exc)) from exc
    if text_id is None:
        text_id = Path(input_path).stem if input_path != "-" else "text1"
    try:
        corpus = Corpus(texts=(TextUnit(text_id, metadata, tuple(sentences)),))
    except ValueError as exc:
        raise OperationalError(str(exc)) from exc
    _write_output(output_path, write_vrt(corpus))


# -- encoding ------------------------------------------------------------------


@cli.command(name="encode")
@click.argument("vrt_path", metavar="VRT")
@click.option("-d", "--data-dir", required=True, type=click.Path(file_okay=False),
              help="Directory for the binary index files.")
@registry_option
@click.option("-P", "positional", multiple=True, metavar="ATTR",
              help="Positional attribute to index (pos, lemma); repeatable.")
@click.option("-S", "structural", multiple=True, metavar="ATTR",
              help="Structural attribute to index (s); repeatable.")
@click.option("--name", help="Corpus name (default: uppercased VRT file stem).")
@click.option("--force", is_flag=True, help="Overwrite an already-registered corpus.")
@click.option("--lenient", is_flag=True, help="Skip unknown structural tags with a warning.")
def encode_command(vrt_path: str, data_dir: str, registry_dir: str,
                   positional: tuple[str, ...], structural: tuple[str, ...],
                   name: str | None, force: bool, lenient: bool) -> None:
    """Encode a VRT file and build its postings indexes."""
    if not Path(vrt_path).is_file():
        raise OperationalError(f"VRT file {vrt_path} does not exist")
    try:
        corpus_name = encode(
            vrt_path,
            data_dir=data_dir,
            registry_dir=registry_dir,
            positional_attrs=positional,
            structural_attrs=structural,
            name=name,
            force=force,
            lenient=lenient,
        )
        build_postings(corpus_name, registry_dir=registry_dir)
    except (VrtError, MissingAttribute, CorpusAlreadyRegistered, CorruptIndex, OSError,
            ValueError) as exc:
        raise OperationalError(str(exc)) from exc
    reader = _open_reader(corpus_name, registry_dir)
    click.echo(f"{corpus_name}: {reader.size} tokens")
    for attr in reader.positional_attrs:
        click.echo(f"  {attr}: {len(reader.lexicon(attr))} distinct values")


# -- querying ------------------------------------------------------------------


@cli.command(name="query")
@click.argument("corpus")
@click.argument("query_text", metavar="QUERY")
@registry_option
@click.option("--context", default=8, show_default=True,
              help="Context tokens on each side of a match.")
@click.option("--max", "max_hits", default=10000, show_default=True,
              help="Stop after this many matches (0 = unlimited).")
@click.option("--count-only", is_flag=True, help="Print only the number of matches.")
@click.option("--subcorpus", help="Restrict matching to a named subcorpus.")
@click.option("--group-by", "group_key", metavar="KEY",
              help="Print match counts per text metadata value instead of lines.")
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False),
              help="With --group-by: also render the distribution to this image file.")
def query_command(corpus: str, query_text: str, registry_dir: str, context: int,
                  max_hits: int, count_only: bool, subcorpus: str | None,
                  group_key: str | None, plot_path: str | None) -> None:
    """Run a token-pattern query and print KWIC lines.

    Lines are TAB-separated: text id, left context, [match], right context.
    """
    settings = QuerySettings(
        context_size=context,
        max_hits=None if max_hits == 0 or count_only or group_key else max_hits,
    )
    try:
        query = parse_query(query_text, settings)
    except QueryError as exc:
        raise QueryFailure(str(exc)) from exc
    reader = _open_reader(corpus, registry_dir)
    scope = _load_scope(reader, subcorpus)
    try:
        if count_only:
            click.echo(str(count_matches(query, reader, scope=scope)))
            return
        if group_key:
            result = evaluate(query, reader, scope=scope, settings=settings)
            categories = analytics.distribution(result.matches, reader, group_key)
            for category, count in sorted(categories.items()):
                click.echo(f"{category}\t{count}")
            if plot_path:
                plots.distribution_figure(categories, plot_path, key=group_key)
                click.echo(f"figure written to {plot_path}", err=True)
            return
        result, lines = concordance(reader, query, scope=scope, settings=settings)
    except UnknownStructuralAttribute as exc:
        raise QueryFailure(str(exc)) from exc
    for line in lines:
        left = " ".join(line.left)
        focus = " ".join(line.focus)
        right = " ".join(line.right)
        click.echo(f"{line.text_id}\t{left}\t[{focus}]\t{right}")
    if result.truncated:
        click.echo(f"(truncated at {settings.max_hits} matches)", err=True)


@cli.command(name="freq")
@click.argument("corpus")
@registry_option
@click.option("--attr", default="word", show_default=True,
              help="Attribute to count (word, pos, lemma).")
@click.option("--top", type=int, help="Keep only the most frequent values.")
@click.option("--subcorpus", help="Count within a named subcorpus.")
@click.option("-o", "--output", "output_path", help="Write the TSV here (default: stdout).")
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False),
              help="Also render a bar chart to this image file.")
def freq_command(corpus: str, registry_dir: str, attr: str, top: int | None,
                 subcorpus: str | None, output_path: str | None,
                 plot_path: str | None) -> None:
    """Frequency list as a TSV table (columns: value, count)."""
    reader = _open_reader(corpus, registry_dir)
    scope = _load_scope(reader, subcorpus)
    try:
        freq = analytics.frequency_list(reader, attr, scope=scope, top_k=top)
    except UnknownAttribute as exc:
        raise OperationalError(str(exc)) from exc
    _write_output(output_path, analytics.format_frequency_tsv(freq))
    if plot_path:
        plots.frequency_figure(freq, plot_path)
        click.echo(f"figure written to {plot_path}", err=True)


@cli.command(name="keywords")
@click.argument("corpus")
@registry_option
@click.option("--target", help="Target subcorpus (default: whole corpus).")
@click.option("--reference", help="Reference subcorpus (default: whole corpus).")
@click.option("--attr", default="word", show_default=True)
@click.option("--min-count", default=3, show_default=True,
              help="Minimum target count for a value to be scored.")
@click.option("-o", "--output", "output_path", help="Write the TSV here (default: stdout).")
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False),
              help="Also render a G2 chart to this image file.")
def keywords_command(corpus: str, registry_dir: str, target: str | None,
                     reference: str | None, attr: str, min_count: int,
                     output_path: str | None, plot_path: str | None) -> None:
    """Keyword table ranked by log-likelihood (TSV)."""
    reader = _open_reader(corpus, registry_dir)
    target_scope = _load_scope(reader, target)
    reference_scope = _load_scope(reader, reference)
    try:
        rows = analytics.keywords(reader, attr, target=target_scope,
                                  reference=reference_scope, min_count=min_count)
    except (UnknownAttribute, analytics.EmptyScope) as exc:
        raise OperationalError(str(exc)) from exc
    _write_output(output_path, analytics.format_keywords_tsv(rows))
    if plot_path:
        plots.keywords_figure(rows, plot_path)
        click.echo(f"figure written to {plot_path}", err=True)


# -- subcorpora ---------------------------------------------------------------


@cli.group()
def subcorpus() -> None:
    """Create, list, and delete named subcorpora."""


@subcorpus.command(name="create")
@click.argument("corpus")
@click.argument("name")
@registry_option
@click.option("--where", "where_pairs", multiple=True, metavar="KEY=VALUE",
              help="Metadata equality test; repeatable (conjunctive).")
@click.option("--texts", "texts_csv", metavar="ID[,ID...]",
              help="Explicit comma-separated text id list instead of --where.")
def subcorpus_create(corpus: str, name: str, registry_dir: str,
                     where_pairs: tuple[str, ...], texts_csv: str | None) -> None:
    """Define a subcorpus from text metadata."""
    reader = _open_reader(corpus, registry_dir)
    where: dict[str, str] | None = None
    text_ids: list[str] | None = None
    if where_pairs and texts_csv:
        raise click.UsageError("use either --where or --texts, not both")
    if where_pairs:
        where = {}
        for pair in where_pairs:
            key, sep, value = pair.partition("=")
            if not sep or not key:
                raise click.UsageError(f"--where expects KEY=VALUE, got {pair!r}")
            where[key] = value
    elif texts_csv:
        text_ids = [t for t in texts_csv.split(",") if t]
    else:
        raise click.UsageError("one of --where or --texts is required")
    try:
        sub = analytics.define_subcorpus(reader, name, where=where, text_ids=text_ids)
    except (analytics.DuplicateName, analytics.UnknownMetadataKey, ValueError) as exc:
        raise OperationalError(str(exc)) from exc
    click.echo(f"{sub.name}: {sub.size} tokens in {len(sub.spans)} spans")


@subcorpus.command(name="list")
@click.argument("corpus")
@registry_option
def subcorpus_list(corpus: str, registry_dir: str) -> None:
    """List subcorpora of a corpus."""
    reader = _open_reader(corpus, registry_dir)
    for sub in analytics.list_subcorpora(reader):
        click.echo(f"{sub.name}\t{sub.size}\t{sub.predicate}")


@subcorpus.command(name="delete")
@click.argument("corpus")
@click.argument("name")
@registry_option
def subcorpus_delete(corpus: str, name: str, registry_dir: str) -> None:
    """Delete a subcorpus descriptor."""
    reader = _open_reader(corpus, registry_dir)
    try:
        analytics.delete_subcorpus(reader, name)
    except KeyError as exc:
        raise OperationalError(str(exc)) from exc
    click.echo(f"deleted {name}")


# -- service --------------------------------------------------------------------


@cli.command(name="serve")
@registry_option
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8787, show_default=True)
@click.option("--max-queries", default=4, show_default=True,
              help="Concurrent query limit (503 above it).")
@click.option("--timeout", default=30.0, show_default=True,
              help="Per-query timeout in seconds (408 on expiry).")
def serve_command(registry_dir: str, host: str, port: int, max_queries: int,
                  timeout: float) -> None:
    """Serve the HTTP/JSON API over the registry."""
    config = ServiceConfig(
        registry_dir=Path(registry_dir),
        host=host,
        port=port,
        max_concurrent_queries=max_queries,
        query_timeout=timeout,
    )
    run_service(config)


def main(argv: list[str] | None = None) -> int:
    """Entry point with exit-code mapping (0 ok, 1 usage/query, 2 failure)."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 130
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
