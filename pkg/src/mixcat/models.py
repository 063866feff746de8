"""The four binary classifiers and the rejection-threshold decision rule.

Every model is trained for one target category against its complement:
the positive side holds the category's documents, the negative side
everything else.  Three of the methods are likelihood models over
token sequences:

* word model: per-side smoothed word histograms, likelihood is the
  product of per-token word probabilities;
* hard-cluster model: disjoint word clusters, likelihood is the
  product of per-token *cluster* probabilities (the within-cluster
  word choice is category-independent and drops out of the ratio);
* mixture model: overlapping clusters with fixed per-cluster word
  distributions and per-side fitted weights, likelihood is the product
  of mixture probabilities.

The cosine model is a non-probabilistic baseline over raw frequency
vectors.  Decisions compare the two sides' scores against a rejection
threshold epsilon; documents inside the band stay unclassified.

Constructors validate nothing so that models can be assembled directly
from externally specified parameters; the training and load paths are
where well-formedness is enforced.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from mixcat._kernels import weighted_log_mixture
from mixcat.clustering import (
    Clustering,
    distribute_frequencies,
    from_member_sets,
    rank_clusters,
    soft_clusters,
)
from mixcat.corpus import LabeledCorpus, complement_corpus
from mixcat.counts import cluster_frequencies, count_pools
from mixcat.estimation import (
    EmConfig,
    ele_distribution,
    em_fit,
    mle_word_distribution,
)

# guards mixture probabilities that fitted weights drove to numerical
# zero; applied at scoring time only, never stored in a model
PROB_FLOOR = 1e-12


class TrainingError(ValueError):
    """Raised when a corpus cannot support the requested model."""


@dataclass(frozen=True)
class WordModel:
    """Per-side smoothed word distributions over a shared vocabulary."""

    category: str
    positive: Mapping[str, float]
    negative: Mapping[str, float]


@dataclass(frozen=True)
class HardClusterModel:
    """Disjoint clusters with per-side cluster distributions."""

    category: str
    clustering: Clustering
    positive: tuple[float, ...]
    negative: tuple[float, ...]
    settings: Mapping[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class MixtureModel:
    """Shared cluster word distributions, per-side mixture weights."""

    category: str
    clustering: Clustering
    cluster_words: tuple[Mapping[str, float], ...]
    positive_theta: tuple[float, ...]
    negative_theta: tuple[float, ...]
    settings: Mapping[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class CosineModel:
    """Raw per-side word-frequency vectors."""

    category: str
    vocabulary: tuple[str, ...]
    positive: tuple[float, ...]
    negative: tuple[float, ...]


@dataclass(frozen=True)
class Decision:
    """Outcome of one document against one category.

    ``score`` is the per-token-normalized log-likelihood difference
    (similarity difference for the cosine model); None when the
    document offered no usable evidence.
    """

    outcome: str  # "positive" | "negative" | "unclassified"
    score: float | None


_COMPLEMENT_PREFIX = "~"


def _pools(corpus: LabeledCorpus, category: str, positive_only: bool):
    positive, negative = complement_corpus(corpus, category, positive_only)
    if not positive:
        raise TrainingError(f"category {category!r} has no training tokens")
    if not negative:
        raise TrainingError(
            f"the complement of category {category!r} has no training tokens"
        )
    names = (category, _COMPLEMENT_PREFIX + category)
    return names, count_pools([(names[0], positive), (names[1], negative)])


def train_wbm(
    corpus: LabeledCorpus, category: str, positive_only: bool = True
) -> WordModel:
    """Smoothed word histograms for the category and its complement.

    Smoothing runs over the union vocabulary of both sides, so every
    training word has positive probability on both sides.
    """
    (pos_name, neg_name), table = _pools(corpus, category, positive_only)
    vocab = table.vocabulary
    positive = ele_distribution({w: table.count(pos_name, w) for w in vocab})
    negative = ele_distribution({w: table.count(neg_name, w) for w in vocab})
    return WordModel(category, positive, negative)


def train_hcm(
    corpus: LabeledCorpus,
    category: str,
    gamma: float | None = None,
    top_l: int | None = None,
    top_m: int | None = None,
    positive_only: bool = True,
) -> HardClusterModel:
    """Hard-cluster model under one of two clustering schemes.

    Either ``gamma`` (share threshold, at least 0.5 so clusters cannot
    overlap) or both rank cutoffs ``top_l``/``top_m``.  Cluster
    distributions are smoothed over the clusters, with the category
    total taken as the summed cluster frequencies, so words discarded
    by the threshold contribute nothing.
    """
    by_gamma = gamma is not None
    by_rank = top_l is not None or top_m is not None
    if by_gamma == by_rank:
        raise TrainingError("choose exactly one scheme: gamma, or top_l with top_m")
    if by_rank and (top_l is None or top_m is None):
        raise TrainingError("the rank scheme needs both top_l and top_m")
    if by_gamma and gamma < 0.5:
        raise TrainingError(
            f"gamma={gamma} would allow overlapping clusters; "
            "hard clustering needs gamma >= 0.5"
        )
    names, table = _pools(corpus, category, positive_only)
    if by_gamma:
        clustering = soft_clusters(table, gamma)
        settings = {"scheme": "threshold", "gamma": gamma}
    else:
        clustering = rank_clusters(table, top_l, top_m)
        settings = {"scheme": "rank", "top_l": top_l, "top_m": top_m}
    if not clustering.is_hard():
        raise TrainingError(
            "clustering produced overlapping clusters; "
            "pick cutoffs that keep them disjoint"
        )
    freqs = cluster_frequencies(table, clustering)
    sides = []
    for name in names:
        counts = {j: freqs[name, j] for j in range(clustering.m)}
        dist = ele_distribution(counts)
        sides.append(tuple(dist[j] for j in range(clustering.m)))
    return HardClusterModel(category, clustering, sides[0], sides[1], settings)


def train_fmm(
    corpus: LabeledCorpus,
    category: str,
    gamma: float,
    em_config: EmConfig | None = None,
    positive_only: bool = True,
    trace: dict | None = None,
) -> MixtureModel:
    """Mixture model: threshold clusters, exact within-cluster word
    distributions, and per-side weights fitted to that side's tokens.

    Words outside every cluster are dropped from the fitting pools; a
    side left with nothing raises a training error naming the side.
    When ``trace`` is a dict, per-side fitting traces are stored under
    "positive" and "negative".
    """
    cfg = em_config or EmConfig()
    names, table = _pools(corpus, category, positive_only)
    clustering = soft_clusters(table, gamma)
    distributed = distribute_frequencies(table, clustering)
    cluster_words = []
    for j, related in enumerate(clustering.related_categories):
        try:
            exact = mle_word_distribution(distributed, j)
        except ValueError as err:
            raise TrainingError(
                f"cluster related to {related!r} is empty at gamma={gamma}"
            ) from err
        cluster_words.append({w: float(p) for w, p in exact.items()})
    thetas = []
    for side, name in zip(("positive", "negative"), names):
        pool = [
            w
            for w in table.vocabulary
            for _ in range(table.count(name, w))
            if w in clustering.assignments
        ]
        if not pool:
            raise TrainingError(
                f"the {side} side ({name!r}) has no usable tokens "
                "after dropping unclustered words"
            )
        side_trace = [] if trace is not None else None
        result = em_fit(cluster_words, pool, cfg, trace=side_trace)
        if trace is not None:
            trace[side] = side_trace
        thetas.append(result.theta)
    settings = {
        "gamma": gamma,
        "eta": cfg.eta,
        "max_iterations": cfg.max_iterations,
        "tolerance": cfg.tolerance,
    }
    return MixtureModel(
        category, clustering, tuple(cluster_words), thetas[0], thetas[1], settings
    )


def train_cos(
    corpus: LabeledCorpus, category: str, positive_only: bool = True
) -> CosineModel:
    """Raw frequency vectors for the category and its complement."""
    (pos_name, neg_name), table = _pools(corpus, category, positive_only)
    vocab = table.vocabulary
    positive = tuple(float(table.count(pos_name, w)) for w in vocab)
    negative = tuple(float(table.count(neg_name, w)) for w in vocab)
    return CosineModel(category, vocab, positive, negative)


def _packed_loglik(counts, rows, theta):
    return weighted_log_mixture(
        np.ascontiguousarray(counts, dtype=np.float64),
        np.ascontiguousarray(rows, dtype=np.float64),
        np.ascontiguousarray(theta, dtype=np.float64),
        PROB_FLOOR,
    )


def doc_log_likelihood(model, tokens: Iterable[str]) -> tuple[float, float, int]:
    """Log likelihood of a token sequence under both sides of a model.

    Returns ``(log L positive, log L negative, N')`` with natural
    logs, where N' counts the tokens actually scored: out-of-vocabulary
    tokens are skipped by every method, and the clustered methods also
    skip words that clustering discarded.  ``N' = 0`` means the
    document offered no evidence (both log likelihoods are returned as
    0.0 and the caller must treat the document as unclassifiable).
    Per-token probabilities are floored at PROB_FLOOR before the log.
    """
    if isinstance(model, WordModel):
        counter = Counter(t for t in tokens if t in model.positive)
        if not counter:
            return 0.0, 0.0, 0
        words = list(counter)
        counts = [counter[w] for w in words]
        one = (1.0,)
        pos = _packed_loglik(counts, [[model.positive[w] for w in words]], one)
        neg = _packed_loglik(counts, [[model.negative[w] for w in words]], one)
        return pos, neg, sum(counts)
    if isinstance(model, HardClusterModel):
        assignments = model.clustering.assignments
        counter = Counter(
            assignments[t][0] for t in tokens if t in assignments
        )
        if not counter:
            return 0.0, 0.0, 0
        ids = list(counter)
        counts = [counter[j] for j in ids]
        one = (1.0,)
        pos = _packed_loglik(counts, [[model.positive[j] for j in ids]], one)
        neg = _packed_loglik(counts, [[model.negative[j] for j in ids]], one)
        return pos, neg, sum(counts)
    if isinstance(model, MixtureModel):
        assignments = model.clustering.assignments
        counter = Counter(t for t in tokens if t in assignments)
        if not counter:
            return 0.0, 0.0, 0
        words = list(counter)
        counts = [counter[w] for w in words]
        rows = [[dist.get(w, 0.0) for w in words] for dist in model.cluster_words]
        pos = _packed_loglik(counts, rows, model.positive_theta)
        neg = _packed_loglik(counts, rows, model.negative_theta)
        return pos, neg, sum(counts)
    raise TypeError(f"not a likelihood model: {type(model).__name__}")


def decide(
    logl_pos: float, logl_neg: float, n_eff: int, epsilon: float
) -> Decision:
    """Apply the rejection-threshold rule to a pair of log likelihoods.

    The normalized score is ``(logl_pos - logl_neg) / n_eff``.  The
    document is positive when the score exceeds epsilon, negative when
    the negated score reaches epsilon (ties therefore fall to the
    negative side), and unclassified otherwise.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    if n_eff < 1:
        raise ValueError("decision needs at least one scored token")
    score = (logl_pos - logl_neg) / n_eff
    if score > epsilon:
        return Decision("positive", score)
    if -score >= epsilon:
        return Decision("negative", score)
    return Decision("unclassified", score)


def cosine_decide(model: CosineModel, tokens: Iterable[str], epsilon: float) -> Decision:
    """Threshold the difference of cosine similarities.

    The score is ``cos(d, positive) - cos(d, negative)`` with no size
    normalization (cosine is already scale-free), thresholded exactly
    like the likelihood rule.  A document sharing no words with the
    training vocabulary has a zero vector and stays unclassified.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    counter = Counter(tokens)
    doc = np.array([counter.get(w, 0) for w in model.vocabulary], dtype=np.float64)
    norm = float(np.linalg.norm(doc))
    if norm == 0.0:
        return Decision("unclassified", None)
    score = 0.0
    for sign, side in ((1.0, model.positive), (-1.0, model.negative)):
        vec = np.asarray(side, dtype=np.float64)
        score += sign * float(doc @ vec) / (norm * float(np.linalg.norm(vec)))
    if score > epsilon:
        return Decision("positive", score)
    if -score >= epsilon:
        return Decision("negative", score)
    return Decision("unclassified", score)


def classify_document(model, tokens: Sequence[str], epsilon: float) -> Decision:
    """Decide one document under any of the four model kinds."""
    if isinstance(model, CosineModel):
        return cosine_decide(model, tokens, epsilon)
    logl_pos, logl_neg, n_eff = doc_log_likelihood(model, tokens)
    if n_eff == 0:
        return Decision("unclassified", None)
    return decide(logl_pos, logl_neg, n_eff, epsilon)


def method_of(model) -> str:
    """Short method tag used by the CLI and the persistence format."""
    tags = {
        WordModel: "wbm",
        HardClusterModel: "hcm",
        MixtureModel: "fmm",
        CosineModel: "cos",
    }
    try:
        return tags[type(model)]
    except KeyError:
        raise TypeError(f"unknown model type: {type(model).__name__}") from None


_SCHEMA_VERSION = 1


def _clustering_payload(clustering: Clustering) -> dict:
    return {
        "vocabulary": list(clustering.vocabulary),
        "related_categories": (
            list(clustering.related_categories)
            if clustering.related_categories is not None
            else None
        ),
        "clusters": [
            [w for w in clustering.vocabulary if w in members]
            for members in clustering.clusters
        ],
    }


def _clustering_from_payload(payload: dict) -> Clustering:
    return from_member_sets(
        [set(members) for members in payload["clusters"]],
        tuple(payload["vocabulary"]),
        payload["related_categories"],
    )


def save_model(model, path) -> None:
    """Write a model as a JSON document.

    Floats are serialized at full round-trip precision, so a reloaded
    model reproduces the original's decisions bit for bit.
    """
    method = method_of(model)
    payload: dict = {
        "schema_version": _SCHEMA_VERSION,
        "method": method,
        "category": model.category,
    }
    if method == "wbm":
        vocab = list(model.positive)
        payload["vocabulary"] = vocab
        payload["positive"] = [model.positive[w] for w in vocab]
        payload["negative"] = [model.negative[w] for w in vocab]
        payload["settings"] = {}
    elif method == "hcm":
        payload["settings"] = dict(model.settings)
        payload["clustering"] = _clustering_payload(model.clustering)
        payload["positive"] = list(model.positive)
        payload["negative"] = list(model.negative)
    elif method == "fmm":
        payload["settings"] = dict(model.settings)
        payload["clustering"] = _clustering_payload(model.clustering)
        payload["cluster_words"] = [
            {w: dist[w] for w in model.clustering.vocabulary if w in dist}
            for dist in model.cluster_words
        ]
        payload["positive_theta"] = list(model.positive_theta)
        payload["negative_theta"] = list(model.negative_theta)
    else:
        payload["vocabulary"] = list(model.vocabulary)
        payload["positive"] = list(model.positive)
        payload["negative"] = list(model.negative)
        payload["settings"] = {}
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")


def _check_simplex(values, what: str) -> None:
    if any(not math.isfinite(v) or v < 0 for v in values):
        raise ValueError(f"{what} has negative or non-finite entries")
    if abs(sum(values) - 1.0) > 1e-9:
        raise ValueError(f"{what} does not sum to 1")


def load_model(path):
    """Read a model written by ``save_model``, validating its shape.

    Lines starting with ``#`` (the CLI's configuration header) are
    ignored.
    """
    with open(path, encoding="utf-8") as handle:
        text = "".join(
            line for line in handle if not line.startswith("#")
        )
    payload = json.loads(text)
    version = payload.get("schema_version")
    if version != _SCHEMA_VERSION:
        raise ValueError(f"unsupported model schema version: {version!r}")
    method = payload.get("method")
    category = payload["category"]
    if method == "wbm":
        vocab = payload["vocabulary"]
        positive = dict(zip(vocab, payload["positive"]))
        negative = dict(zip(vocab, payload["negative"]))
        _check_simplex(positive.values(), "positive word distribution")
        _check_simplex(negative.values(), "negative word distribution")
        return WordModel(category, positive, negative)
    if method == "hcm":
        clustering = _clustering_from_payload(payload["clustering"])
        positive = tuple(payload["positive"])
        negative = tuple(payload["negative"])
        _check_simplex(positive, "positive cluster distribution")
        _check_simplex(negative, "negative cluster distribution")
        return HardClusterModel(
            category, clustering, positive, negative, payload.get("settings", {})
        )
    if method == "fmm":
        clustering = _clustering_from_payload(payload["clustering"])
        cluster_words = tuple(dict(d) for d in payload["cluster_words"])
        for j, dist in enumerate(cluster_words):
            _check_simplex(dist.values(), f"word distribution of cluster {j + 1}")
        positive_theta = tuple(payload["positive_theta"])
        negative_theta = tuple(payload["negative_theta"])
        _check_simplex(positive_theta, "positive mixture weights")
        _check_simplex(negative_theta, "negative mixture weights")
        return MixtureModel(
            category,
            clustering,
            cluster_words,
            positive_theta,
            negative_theta,
            payload.get("settings", {}),
        )
    if method == "cos":
        vocab = tuple(payload["vocabulary"])
        positive = tuple(float(v) for v in payload["positive"])
        negative = tuple(float(v) for v in payload["negative"])
        for name, side in (("positive", positive), ("negative", negative)):
            if any(v < 0 or not math.isfinite(v) for v in side):
                raise ValueError(f"{name} frequency vector has invalid entries")
            if not any(side):
                raise ValueError(f"{name} frequency vector is all zero")
        return CosineModel(category, vocab, positive, negative)
    raise ValueError(f"unknown model method: {method!r}")
