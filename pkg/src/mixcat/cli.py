"""Command-line interface: train, classify, eval, clusters, counts.

Every run is deterministic: identical inputs and configuration produce
byte-identical outputs, and each output file starts with ``#`` header
lines echoing the full effective configuration (never a timestamp).

Configuration precedence is command-line flags, then a JSON config
file (``--config`` or the ``MIXCAT_CONFIG`` environment variable),
then built-in defaults.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from contextlib import contextmanager

from mixcat.clustering import rank_clusters, soft_clusters
from mixcat.corpus import complement_corpus, parse_corpus
from mixcat.counts import count_frequencies, count_pools
from mixcat.estimation import EmConfig
from mixcat.evaluation import break_even, default_epsilon_grid, sweep
from mixcat.models import (
    classify_document,
    load_model,
    save_model,
    train_cos,
    train_fmm,
    train_hcm,
    train_wbm,
)

METHODS = ("wbm", "hcm", "fmm", "cos")
POOL_RULES = ("positive", "both")


class CliError(Exception):
    def __init__(self, stage: str, message: str):
        super().__init__(message)
        self.stage = stage


@contextmanager
def _stage(name: str):
    """Tag any failure inside the block with the pipeline stage."""
    try:
        yield
    except CliError:
        raise
    except (ValueError, OSError, KeyError) as err:
        raise CliError(name, str(err)) from err


def _invalid(message: str) -> CliError:
    return CliError("validating the configuration", message)


# per-command configuration schema: key -> (coerce, default).  argparse
# leaves every flag at None so that the precedence merge can tell "not
# given" from any real value.
def _float(v):
    return float(v)


def _int(v):
    return int(v)


def _str(v):
    return str(v)


_COMMON_TRAIN_KEYS = {
    "method": (_str, None),
    "category": (_str, None),
    "gamma": (_float, None),
    "top_l": (_int, None),
    "top_m": (_int, None),
    "eta": (_float, 1.0),
    "iters": (_int, 100),
    "tol": (_float, 1e-8),
    "multilabel": (_str, "positive"),
}

SCHEMAS = {
    "train": {
        "train": (_str, None),
        "model": (_str, None),
        "trace": (_str, None),
        **_COMMON_TRAIN_KEYS,
    },
    "classify": {
        "model": (_str, None),
        "input": (_str, None),
        "output": (_str, None),
        "epsilon": (_float, 0.0),
    },
    "eval": {
        "train": (_str, None),
        "test": (_str, None),
        "output": (_str, None),
        "eps_max": (_float, 0.5),
        "eps_step": (_float, 0.005),
        **_COMMON_TRAIN_KEYS,
    },
    "clusters": {
        "train": (_str, None),
        "output": (_str, None),
        "category": (_str, None),
        "gamma": (_float, None),
        "top_l": (_int, None),
        "top_m": (_int, None),
        "multilabel": (_str, "positive"),
    },
    "counts": {
        "train": (_str, None),
        "output": (_str, None),
    },
}


def _effective_config(args: argparse.Namespace, command: str) -> dict:
    schema = SCHEMAS[command]
    config_path = args.config or os.environ.get("MIXCAT_CONFIG")
    file_values = {}
    if config_path:
        with _stage("reading the config file"):
            with open(config_path, encoding="utf-8") as handle:
                file_values = json.load(handle)
            if not isinstance(file_values, dict):
                raise ValueError("config file must hold a JSON object")
            unknown = sorted(set(file_values) - set(schema))
            if unknown:
                raise ValueError(
                    f"unknown config keys for {command}: {', '.join(unknown)}"
                )
    effective = {}
    for key, (coerce, default) in schema.items():
        flag_value = getattr(args, key)
        if flag_value is not None:
            effective[key] = flag_value
        elif key in file_values and file_values[key] is not None:
            with _stage("reading the config file"):
                effective[key] = coerce(file_values[key])
        else:
            effective[key] = default
    return effective


def _require(cfg: dict, command: str, *keys: str) -> None:
    for key in keys:
        if cfg[key] is None:
            raise _invalid(f"{command} needs --{key.replace('_', '-')}")


def _validate_training(cfg: dict) -> EmConfig | None:
    """Shared flag-combination checks for train and eval.

    Returns the EM configuration when the method needs one.
    """
    method = cfg["method"]
    if method not in METHODS:
        raise _invalid(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    if cfg["multilabel"] not in POOL_RULES:
        raise _invalid("multilabel must be 'positive' or 'both'")
    has_gamma = cfg["gamma"] is not None
    has_rank = cfg["top_l"] is not None or cfg["top_m"] is not None
    if method in ("wbm", "cos"):
        if has_gamma or has_rank:
            raise _invalid(f"clustering options do not apply to method {method!r}")
        return None
    if method == "hcm":
        if has_gamma == has_rank:
            raise _invalid("hcm needs exactly one scheme: --gamma, or --top-l with --top-m")
        if has_rank and (cfg["top_l"] is None or cfg["top_m"] is None):
            raise _invalid("the rank scheme needs both --top-l and --top-m")
        if has_gamma and cfg["gamma"] < 0.5:
            raise _invalid(
                f"gamma={cfg['gamma']} would allow overlapping clusters; "
                "hcm needs gamma >= 0.5"
            )
        return None
    if has_rank:
        raise _invalid("fmm clusters by threshold; --top-l/--top-m do not apply")
    if not has_gamma:
        raise _invalid("fmm needs --gamma")
    if not 0.0 <= cfg["gamma"] < 1.0:
        raise _invalid(f"gamma must be in [0, 1), got {cfg['gamma']}")
    try:
        return EmConfig(eta=cfg["eta"], max_iterations=cfg["iters"], tolerance=cfg["tol"])
    except ValueError as err:
        raise _invalid(str(err)) from err


def _header(command: str, cfg: dict) -> str:
    encoded = json.dumps(cfg, sort_keys=True)
    return f"# mixcat {command}\n# config {encoded}\n"


def _read_corpus(path: str, stage_name: str, require_labels: bool = True):
    with _stage(stage_name):
        with open(path, encoding="utf-8") as handle:
            return parse_corpus(handle, require_labels=require_labels)


def _write_text(path: str | None, text: str) -> None:
    with _stage("writing the output"):
        if path is None:
            sys.stdout.write(text)
        else:
            with open(path, "w", encoding="utf-8") as handle:
                handle.write(text)


def _train_one(method, corpus, category, cfg, em_config, trace=None):
    positive_only = cfg["multilabel"] == "positive"
    if method == "wbm":
        return train_wbm(corpus, category, positive_only)
    if method == "cos":
        return train_cos(corpus, category, positive_only)
    if method == "hcm":
        return train_hcm(
            corpus,
            category,
            gamma=cfg["gamma"],
            top_l=cfg["top_l"],
            top_m=cfg["top_m"],
            positive_only=positive_only,
        )
    return train_fmm(
        corpus,
        category,
        cfg["gamma"],
        em_config,
        positive_only=positive_only,
        trace=trace,
    )


def cmd_train(cfg: dict) -> int:
    _require(cfg, "train", "train", "model", "method", "category")
    em_config = _validate_training(cfg)
    if cfg["trace"] is not None and cfg["method"] != "fmm":
        raise _invalid("--trace records mixture-weight fitting; it needs --method fmm")
    corpus = _read_corpus(cfg["train"], "reading the training corpus")
    trace: dict | None = {} if cfg["trace"] is not None else None
    with _stage("training the model"):
        if cfg["category"] not in corpus.categories:
            raise ValueError(
                f"category {cfg['category']!r} does not occur in the training corpus"
            )
        model = _train_one(cfg["method"], corpus, cfg["category"], cfg, em_config, trace)
    with _stage("writing the model"):
        save_model(model, cfg["model"])
        with open(cfg["model"], encoding="utf-8") as handle:
            body = handle.read()
        with open(cfg["model"], "w", encoding="utf-8") as handle:
            handle.write(_header("train", cfg) + body)
    if trace is not None:
        buffer = io.StringIO()
        buffer.write(_header("train", cfg))
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["side", "evaluation", "log_likelihood"])
        for side in ("positive", "negative"):
            for evaluation, loglik in trace[side]:
                writer.writerow([side, evaluation, repr(loglik)])
        with _stage("writing the trace"):
            with open(cfg["trace"], "w", encoding="utf-8") as handle:
                handle.write(buffer.getvalue())
    return 0


def cmd_classify(cfg: dict) -> int:
    _require(cfg, "classify", "model", "input")
    if cfg["epsilon"] < 0:
        raise _invalid("epsilon must be nonnegative")
    with _stage("loading the model"):
        model = load_model(cfg["model"])
    corpus = _read_corpus(cfg["input"], "reading the input documents", require_labels=False)
    lines = [_header("classify", cfg).rstrip("\n")]
    with _stage("classifying"):
        for number, document in enumerate(corpus.documents, start=1):
            decision = classify_document(model, document.tokens, cfg["epsilon"])
            score = "NA" if decision.score is None else repr(decision.score)
            lines.append(f"{number}\t{decision.outcome}\t{score}")
    _write_text(cfg["output"], "\n".join(lines) + "\n")
    return 0


def cmd_eval(cfg: dict) -> int:
    _require(cfg, "eval", "train", "test", "method")
    em_config = _validate_training(cfg)
    if cfg["category"] is not None:
        raise _invalid("eval always covers every category; --category does not apply")
    with _stage("validating the configuration"):
        grid = default_epsilon_grid(cfg["eps_max"], cfg["eps_step"])
    train_corpus = _read_corpus(cfg["train"], "reading the training corpus")
    test_corpus = _read_corpus(cfg["test"], "reading the test corpus")
    with _stage("training the models"):
        models = [
            _train_one(cfg["method"], train_corpus, category, cfg, em_config)
            for category in train_corpus.categories
        ]
    with _stage("evaluating"):
        curve = sweep(models, test_corpus, grid)
        point = break_even(curve)
    buffer = io.StringIO()
    buffer.write(_header("eval", cfg))
    buffer.write(f"# break_even_kind {point.kind}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["epsilon", "precision", "recall"])
    for row in curve.points:
        writer.writerow([repr(row.epsilon), repr(row.precision), repr(row.recall)])
    _write_text(cfg["output"], buffer.getvalue())
    print(f"break_even={point.value!r}")
    return 0


def cmd_clusters(cfg: dict) -> int:
    _require(cfg, "clusters", "train")
    if cfg["multilabel"] not in POOL_RULES:
        raise _invalid("multilabel must be 'positive' or 'both'")
    has_gamma = cfg["gamma"] is not None
    has_rank = cfg["top_l"] is not None or cfg["top_m"] is not None
    if has_gamma == has_rank:
        raise _invalid("choose exactly one scheme: --gamma, or --top-l with --top-m")
    if has_rank and (cfg["top_l"] is None or cfg["top_m"] is None):
        raise _invalid("the rank scheme needs both --top-l and --top-m")
    corpus = _read_corpus(cfg["train"], "reading the training corpus")
    with _stage("clustering"):
        if cfg["category"] is not None:
            if cfg["category"] not in corpus.categories:
                raise ValueError(
                    f"category {cfg['category']!r} does not occur in the training corpus"
                )
            positive, negative = complement_corpus(
                corpus, cfg["category"], cfg["multilabel"] == "positive"
            )
            table = count_pools(
                [(cfg["category"], positive), ("~" + cfg["category"], negative)]
            )
        else:
            table = count_frequencies(corpus)
        if has_gamma:
            clustering = soft_clusters(table, cfg["gamma"])
        else:
            clustering = rank_clusters(table, cfg["top_l"], cfg["top_m"])
    lines = [_header("clusters", cfg).rstrip("\n")]
    for j, members in enumerate(clustering.clusters):
        label = f"k{j + 1}"
        if clustering.related_categories is not None:
            label += f" ({clustering.related_categories[j]})"
        ordered = [w for w in clustering.vocabulary if w in members]
        lines.append(f"{label}: {', '.join(ordered)}")
    discarded = [w for w in clustering.vocabulary if w in clustering.discarded]
    lines.append(f"discarded: {', '.join(discarded)}")
    _write_text(cfg["output"], "\n".join(lines) + "\n")
    return 0


def cmd_counts(cfg: dict) -> int:
    _require(cfg, "counts", "train")
    corpus = _read_corpus(cfg["train"], "reading the training corpus")
    with _stage("counting"):
        table = count_frequencies(corpus)
    buffer = io.StringIO()
    buffer.write(_header("counts", cfg))
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["category", "word", "count"])
    for category in table.categories:
        for word in table.vocabulary:
            writer.writerow([category, word, table.count(category, word)])
    _write_text(cfg["output"], buffer.getvalue())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixcat",
        description="Probabilistic text categorization: mixture, cluster, "
        "word, and cosine models.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (or set MIXCAT_CONFIG)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_training_options(p):
        p.add_argument("--method", help="wbm | hcm | fmm | cos")
        p.add_argument("--gamma", type=float, help="share threshold for clustering")
        p.add_argument("--top-l", type=int, dest="top_l", help="rank cutoff, own side")
        p.add_argument("--top-m", type=int, dest="top_m", help="rank cutoff, other side")
        p.add_argument("--eta", type=float, help="weight-fitting step size in (0, 1]")
        p.add_argument("--iters", type=int, help="weight-fitting iteration cap")
        p.add_argument("--tol", type=float, help="weight-fitting stop tolerance")
        p.add_argument(
            "--multilabel",
            choices=POOL_RULES,
            help="where multi-label documents go: their category's pool only "
            "(positive) or the complement pool too (both)",
        )

    p_train = sub.add_parser(
        "train", parents=[common], help="train one category-vs-complement model"
    )
    p_train.add_argument("--train", help="training corpus file")
    p_train.add_argument("--model", help="where to write the model")
    p_train.add_argument("--category", help="target category")
    p_train.add_argument("--trace", help="write the weight-fitting trace CSV here")
    add_training_options(p_train)
    p_train.set_defaults(func=cmd_train, command="train")

    p_classify = sub.add_parser(
        "classify", parents=[common], help="classify documents with a saved model"
    )
    p_classify.add_argument("--model", help="model file from train")
    p_classify.add_argument(
        "--input",
        help="documents to classify (corpus format; the label field may be empty)",
    )
    p_classify.add_argument("--output", help="decision TSV (default: stdout)")
    p_classify.add_argument("--epsilon", type=float, help="rejection threshold")
    p_classify.set_defaults(func=cmd_classify, command="classify")

    p_eval = sub.add_parser(
        "eval",
        parents=[common],
        help="train on every category, sweep epsilon, report the curve",
    )
    p_eval.add_argument("--train", help="training corpus file")
    p_eval.add_argument("--test", help="labeled test corpus file")
    p_eval.add_argument("--output", help="curve CSV (default: stdout)")
    p_eval.add_argument("--category", help=argparse.SUPPRESS)
    p_eval.add_argument("--eps-max", type=float, dest="eps_max", help="sweep upper end")
    p_eval.add_argument("--eps-step", type=float, dest="eps_step", help="sweep step")
    add_training_options(p_eval)
    p_eval.set_defaults(func=cmd_eval, command="eval")

    p_clusters = sub.add_parser(
        "clusters", parents=[common], help="show cluster membership for a corpus"
    )
    p_clusters.add_argument("--train", help="training corpus file")
    p_clusters.add_argument("--output", help="dump file (default: stdout)")
    p_clusters.add_argument(
        "--category", help="cluster category-vs-complement instead of all categories"
    )
    p_clusters.add_argument("--gamma", type=float, help="share threshold")
    p_clusters.add_argument("--top-l", type=int, dest="top_l")
    p_clusters.add_argument("--top-m", type=int, dest="top_m")
    p_clusters.add_argument("--multilabel", choices=POOL_RULES)
    p_clusters.set_defaults(func=cmd_clusters, command="clusters")

    p_counts = sub.add_parser(
        "counts", parents=[common], help="dump the word-frequency table as CSV"
    )
    p_counts.add_argument("--train", help="training corpus file")
    p_counts.add_argument("--output", help="CSV file (default: stdout)")
    p_counts.set_defaults(func=cmd_counts, command="counts")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _effective_config(args, args.command)
        return args.func(cfg)
    except CliError as err:
        print(f"mixcat: error while {err.stage}: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
