"""Batch command-line front end.

Subcommands: ``debias`` (transform an embedding file), ``eval`` (print bias
metrics), ``table1`` (compare subspace identification methods), and ``serve``
(run the HTTP session service).  Word sets are passed inline as
comma-separated tokens or as ``@file`` with one token per line; pairs use
``a:b``.  Exit codes: 0 ok, 1 runtime/data error, 2 usage error.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import click

from . import bundled, wordlists as wl
from .metrics import WeatSets, ect, metric_report, weat
from .store import (
    EmbeddingError,
    PairedWordSet,
    UnknownTokenError,
    WordSet,
    export_embedding,
    load_embedding,
)
from .subspace import (
    IterativeConfig,
    SubspaceError,
    identify_classifier_normal,
    identify_iterative,
    identify_pca,
    identify_two_means,
)
from .transforms import (
    DebiasJob,
    JobValidationError,
    MetricConfig,
    TransformError,
    linear_projection,
)
from .views import ViewError, build_trace, trace_to_dict

FORMAT_NAMES = {"glove": "glove_text", "word2vec": "word2vec_text"}
SUBSPACE_NAMES = {
    "pca": "pca",
    "paired-pca": "paired_pca",
    "two-means": "two_means",
    "classifier": "classifier_normal",
    "iterative": "iterative",
}

_DATA_ERRORS = (
    EmbeddingError,
    SubspaceError,
    TransformError,
    ViewError,
    OSError,
)


class DataError(click.ClickException):
    """Runtime/data failure: exit code 1 with a category-coded message."""

    def __init__(self, category: str, message: str):
        super().__init__(f"error[{category}]: {message}")


def parse_tokens(value: str | None) -> tuple[str, ...] | None:
    if value is None:
        return None
    if value.startswith("@"):
        lines = Path(value[1:]).read_text(encoding="utf-8").splitlines()
        return tuple(t.strip() for t in lines if t.strip())
    return tuple(t.strip() for t in value.split(",") if t.strip())


def parse_pairs(value: str | None) -> PairedWordSet | None:
    if value is None:
        return None
    if value.startswith("@"):
        items = [
            ln.strip()
            for ln in Path(value[1:]).read_text(encoding="utf-8").splitlines()
            if ln.strip()
        ]
    else:
        items = [p.strip() for p in value.split(",") if p.strip()]
    pairs = []
    for item in items:
        a, sep, b = item.partition(":")
        if not sep or not a or not b:
            raise click.UsageError(f"pair {item!r} is not of the form a:b")
        pairs.append((a.strip(), b.strip()))
    return PairedWordSet(tuple(pairs))


def _load_snapshot(path: str, fmt: str):
    try:
        with open(path, "rb") as fh:
            return load_embedding(fh, FORMAT_NAMES[fmt])
    except _DATA_ERRORS as exc:
        raise DataError("data", str(exc)) from exc


def _print_json(payload: dict):
    click.echo(json.dumps(payload, sort_keys=True, indent=2))


def _default_embedding_path() -> str:
    return str(bundled.load_registry()[bundled.DEFAULT_NAME].path)


@click.group()
@click.version_option(package_name="debiaskit", prog_name="debiaskit")
def main():
    """Debiasing engine for vector embeddings."""


@main.command()
@click.option("--embedding", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(sorted(FORMAT_NAMES)), default="glove")
@click.option("--method", type=click.Choice(["lp", "hd", "inlp", "oscar"]), required=True)
@click.option("--subspace", type=click.Choice(sorted(SUBSPACE_NAMES)), required=True)
@click.option("--seeds-f", help="female/positive seed tokens")
@click.option("--seeds-m", help="male/negative seed tokens")
@click.option("--pairs", help="seed pairs a:b (paired-pca)")
@click.option("--equalize", help="equalize pairs a:b (hd)")
@click.option("--second-seeds", help="second-subspace seed tokens (oscar)")
@click.option("--eval", "evaluation", required=True, help="evaluation tokens")
@click.option("--label", default="concept")
@click.option("--scope", type=click.Choice(["all", "sets"]), default="all",
              help="hd projection scope")
@click.option("--inlp-max-iters", default=35, show_default=True)
@click.option("--inlp-accuracy-floor", default=0.55, show_default=True)
@click.option("--iterative-rounds", default=2, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--trace", "trace_path", type=click.Path(dir_okay=False))
@click.option("--metrics", "with_metrics", is_flag=True,
              help="print WEAT/ECT before and after")
@click.option("--weat-x", help="metric override: WEAT target set X")
@click.option("--weat-y", help="metric override: WEAT target set Y")
@click.option("--weat-a", help="metric override: WEAT attribute set A")
@click.option("--weat-b", help="metric override: WEAT attribute set B")
@click.option("--ect-attrs", help="metric override: ECT attribute set")
def debias(embedding, fmt, method, subspace, seeds_f, seeds_m, pairs, equalize,
           second_seeds, evaluation, label, scope, inlp_max_iters,
           inlp_accuracy_floor, iterative_rounds, out, trace_path,
           with_metrics, weat_x, weat_y, weat_a, weat_b, ect_attrs):
    """Debias an embedding file and write the transformed embedding."""
    snapshot = _load_snapshot(embedding, fmt)
    metric_cfg = None
    if with_metrics:
        metric_cfg = MetricConfig(
            weat_sets=WeatSets(
                x=WordSet("X", parse_tokens(weat_x) or wl.WEAT_MALE.tokens),
                y=WordSet("Y", parse_tokens(weat_y) or wl.WEAT_FEMALE.tokens),
                a=WordSet("A", parse_tokens(weat_a) or wl.OCCUPATIONS_MALE.tokens),
                b=WordSet("B", parse_tokens(weat_b) or wl.OCCUPATIONS_FEMALE.tokens),
            ),
            ect_attributes=WordSet(
                "attributes", parse_tokens(ect_attrs) or wl.OCCUPATIONS_ALL.tokens
            ),
        )
    try:
        job = DebiasJob(
            method=method,
            subspace_method=SUBSPACE_NAMES[subspace],
            evaluation=WordSet("Evaluation", parse_tokens(evaluation)),
            seeds_f=WordSet("Female seed", parse_tokens(seeds_f)) if seeds_f else None,
            seeds_m=WordSet("Male seed", parse_tokens(seeds_m)) if seeds_m else None,
            seed_pairs=parse_pairs(pairs),
            equalize=parse_pairs(equalize),
            second_seeds=WordSet("Second seed", parse_tokens(second_seeds))
            if second_seeds else None,
            label=label,
            inlp_max_iters=inlp_max_iters,
            inlp_accuracy_floor=inlp_accuracy_floor,
            iterative_weat=wl.DEFAULT_WEAT
            if SUBSPACE_NAMES[subspace] == "iterative" else None,
            iterative_rounds=iterative_rounds,
            hd_scope_all=scope == "all",
            metrics=metric_cfg,
        )
    except JobValidationError as exc:
        raise click.UsageError(str(exc)) from exc
    try:
        trace = build_trace(snapshot, job)
        Path(out).write_bytes(export_embedding(trace.output, FORMAT_NAMES[fmt]))
        if trace_path:
            blob = json.dumps(trace_to_dict(trace), sort_keys=True)
            Path(trace_path).write_text(blob + "\n", encoding="utf-8")
    except UnknownTokenError as exc:
        raise DataError("tokens", str(exc)) from exc
    except _DATA_ERRORS as exc:
        raise DataError("data", str(exc)) from exc
    if with_metrics:
        _print_json(
            {
                "before": trace.metrics_before.to_dict(),
                "after": trace.metrics_after.to_dict(),
            }
        )


@main.command("eval")
@click.option("--embedding", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(sorted(FORMAT_NAMES)), default="glove")
@click.option("--weat-x", help="WEAT target set X")
@click.option("--weat-y", help="WEAT target set Y")
@click.option("--weat-a", help="WEAT attribute set A")
@click.option("--weat-b", help="WEAT attribute set B")
@click.option("--ect-attrs", help="ECT attribute set")
def eval_cmd(embedding, fmt, weat_x, weat_y, weat_a, weat_b, ect_attrs):
    """Print a WEAT/ECT metric report for an embedding file."""
    snapshot = _load_snapshot(embedding, fmt)
    try:
        sets = WeatSets(
            x=WordSet("X", parse_tokens(weat_x) or wl.WEAT_MALE.tokens),
            y=WordSet("Y", parse_tokens(weat_y) or wl.WEAT_FEMALE.tokens),
            a=WordSet("A", parse_tokens(weat_a) or wl.OCCUPATIONS_MALE.tokens),
            b=WordSet("B", parse_tokens(weat_b) or wl.OCCUPATIONS_FEMALE.tokens),
        )
        attrs = WordSet("attributes", parse_tokens(ect_attrs) or wl.OCCUPATIONS_ALL.tokens)
        report = metric_report(snapshot, sets, attrs)
    except UnknownTokenError as exc:
        raise DataError("tokens", str(exc)) from exc
    except (ValueError,) as exc:
        raise DataError("data", str(exc)) from exc
    _print_json(report.to_dict())


@main.command()
@click.option("--embedding", type=click.Path(exists=True, dir_okay=False),
              help="embedding file (defaults to the bundled corpus)")
@click.option("--format", "fmt", type=click.Choice(sorted(FORMAT_NAMES)), default="glove")
@click.option("--names-f", type=click.Path(exists=True, dir_okay=False),
              help="file with one female name per line")
@click.option("--names-m", type=click.Path(exists=True, dir_okay=False),
              help="file with one male name per line")
@click.option("--rounds", default=2, show_default=True)
def table1(embedding, fmt, names_f, names_m, rounds):
    """Compare subspace methods: ECT and adjective WEAT after projection."""
    path = embedding or _default_embedding_path()
    snapshot = _load_snapshot(path, fmt)
    f_names = WordSet("Female names", parse_tokens("@" + names_f) if names_f else wl.NAMES_FEMALE.tokens)
    m_names = WordSet("Male names", parse_tokens("@" + names_m) if names_m else wl.NAMES_MALE.tokens)

    def scores(snap):
        e = ect(snap, wl.WEAT_MALE, wl.WEAT_FEMALE, wl.OCCUPATIONS_ALL)
        w = weat(snap, wl.ADJECTIVE_WEAT)
        return e, w

    try:
        rows = [("Baseline",) + scores(snapshot)]
        methods = [
            ("PCA", lambda: identify_pca(snapshot, m_names.tokens + f_names.tokens)),
            ("2-means", lambda: identify_two_means(snapshot, f_names, m_names)),
            ("Classification (1 step)",
             lambda: identify_classifier_normal(snapshot, f_names, m_names)),
            ("Iterative Subspace",
             lambda: identify_iterative(
                 snapshot, f_names, m_names,
                 IterativeConfig(weat_sets=wl.DEFAULT_WEAT, rounds=rounds))),
        ]
        for name, make in methods:
            direction = make()
            debiased = linear_projection(snapshot, direction).output
            rows.append((name,) + scores(debiased))
    except UnknownTokenError as exc:
        raise DataError("tokens", str(exc)) from exc
    except _DATA_ERRORS as exc:
        raise DataError("data", str(exc)) from exc

    width = max(len(r[0]) for r in rows)
    click.echo(f"{'Method':<{width}}  {'ECT':>7}  {'WEAT (adj)':>10}")
    for name, e, w in rows:
        click.echo(f"{name:<{width}}  {e:7.3f}  {w:10.3f}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=None, type=int,
              help="port (default: DEBIASKIT_PORT or 8000)")
@click.option("--registry", "registry_path", type=click.Path(exists=True, dir_okay=False),
              help="embedding registry JSON (default: bundled registry or "
                   "DEBIASKIT_REGISTRY)")
def serve(host, port, registry_path):
    """Run the HTTP session service."""
    import uvicorn

    from .service import create_app

    if port is None:
        port = int(os.environ.get("DEBIASKIT_PORT", "8000"))
    app = create_app(registry_path)
    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
