"""Tag-based categorization harness for comparing raw and enriched tag sets.

Videos become tf-idf vectors over their tag sets, a one-vs-rest logistic
regression is trained per category, and ranked test videos are scored with
average precision. The interesting number is MAP(enriched) - MAP(raw): does
adding recommended tags help a downstream classifier.
"""

from __future__ import annotations

import hashlib
import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .corpus import Video, fold
from .recommend import Recommendation, enriched_tags

log = logging.getLogger(__name__)

TAG_SOURCES = ("raw", "enriched")
DEFAULT_EPOCHS = 300
DEFAULT_LEARNING_RATE = 0.5
TRAIN_FRACTION = 0.7


@dataclass(frozen=True, eq=False)
class Vocabulary:
    """Terms with their index positions and smoothed idf weights."""

    terms: tuple[str, ...]
    index: dict[str, int]
    idf: np.ndarray

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class FeatureVector:
    video_id: str
    weights: tuple[tuple[int, float], ...]
    label: int | None = None


@dataclass(frozen=True, eq=False)
class LinearModel:
    classes: tuple[int, ...]
    weights: np.ndarray
    biases: np.ndarray


def tags_for(video: Video, recommendation: Recommendation | None, source: str) -> list[str]:
    """The folded tag list a video contributes under a tag source."""
    if source == "raw":
        return [fold(tag) for tag in video.raw_tags]
    if source == "enriched":
        if recommendation is None:
            return [fold(tag) for tag in video.raw_tags]
        return enriched_tags(video, recommendation)
    raise ValueError(f"unknown tag source '{source}'")


def build_vocabulary(tag_lists: Sequence[Sequence[str]]) -> Vocabulary:
    """Vocabulary and idf from training tag lists only.

    idf(t) = ln((N + 1) / (df(t) + 1)) + 1 with df counting lists containing
    the term at least once.
    """
    document_frequency: Counter[str] = Counter()
    for tags in tag_lists:
        document_frequency.update(set(tags))
    terms = tuple(sorted(document_frequency))
    total = len(tag_lists)
    idf = np.array(
        [math.log((total + 1) / (document_frequency[t] + 1)) + 1.0 for t in terms]
    )
    return Vocabulary(terms, {term: i for i, term in enumerate(terms)}, idf)


def vectorize(
    videos: Sequence[Video],
    source: str,
    vocabulary: Vocabulary,
    recommendations: Mapping[str, Recommendation] | None = None,
    categories: Sequence[str] | None = None,
    normalize: bool = True,
) -> list[FeatureVector]:
    """tf-idf vectors over the chosen tag source.

    Out-of-vocabulary tags are dropped; a video whose tags all fall outside
    the vocabulary keeps an all-zero vector. With ``normalize`` the nonzero
    vectors are scaled to unit L2 length.
    """
    label_of = {name: i for i, name in enumerate(categories)} if categories else None
    features = []
    for video in videos:
        recommendation = recommendations.get(video.id) if recommendations else None
        counts = Counter(tags_for(video, recommendation, source))
        weights = {
            vocabulary.index[tag]: tf * float(vocabulary.idf[vocabulary.index[tag]])
            for tag, tf in counts.items()
            if tag in vocabulary.index
        }
        if normalize and weights:
            norm = math.sqrt(sum(w * w for w in weights.values()))
            weights = {i: w / norm for i, w in weights.items()}
        label = None
        if label_of is not None and video.category is not None:
            label = label_of[video.category]
        features.append(
            FeatureVector(video.id, tuple(sorted(weights.items())), label)
        )
    return features


def to_matrix(features: Sequence[FeatureVector], dim: int) -> np.ndarray:
    dense = np.zeros((len(features), dim))
    for row, feature in enumerate(features):
        for column, weight in feature.weights:
            dense[row, column] = weight
    return dense


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    positive = z >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-z[positive]))
    expz = np.exp(z[~positive])
    out[~positive] = expz / (1.0 + expz)
    return out


def logistic_loss(weights: np.ndarray, bias: float, X: np.ndarray, y: np.ndarray) -> float:
    """Mean binary cross-entropy of the linear scores X @ weights + bias."""
    z = X @ weights + bias
    return float(np.mean(np.logaddexp(0.0, z) - y * z))


def logistic_gradient(
    weights: np.ndarray, bias: float, X: np.ndarray, y: np.ndarray
) -> tuple[np.ndarray, float]:
    """Gradient of ``logistic_loss`` in (weights, bias)."""
    error = _sigmoid(X @ weights + bias) - y
    return X.T @ error / len(y), float(np.mean(error))


def train(
    features: Sequence[FeatureVector],
    labels: Sequence[int],
    epochs: int = DEFAULT_EPOCHS,
    learning_rate: float = DEFAULT_LEARNING_RATE,
) -> LinearModel:
    """One-vs-rest logistic regression by full-batch gradient descent.

    Weights start at zero and the data order is fixed, so training is
    deterministic. Requires at least two distinct labels.
    """
    if len(features) != len(labels):
        raise ValueError("features and labels differ in length")
    classes = tuple(sorted(set(labels)))
    if len(classes) < 2:
        raise ValueError("at least 2 categories required")
    dim = 1 + max(
        (column for feature in features for column, _ in feature.weights), default=-1
    )
    X = to_matrix(features, dim)
    y = np.asarray(labels)
    all_weights = np.zeros((len(classes), dim))
    all_biases = np.zeros(len(classes))
    for row, cls in enumerate(classes):
        target = (y == cls).astype(np.float64)
        weights = np.zeros(dim)
        bias = 0.0
        for _ in range(epochs):
            grad_w, grad_b = logistic_gradient(weights, bias, X, target)
            weights = weights - learning_rate * grad_w
            bias = bias - learning_rate * grad_b
        all_weights[row] = weights
        all_biases[row] = bias
    return LinearModel(classes, all_weights, all_biases)


def predict(model: LinearModel, feature: FeatureVector) -> np.ndarray:
    """Per-category linear scores, aligned with ``model.classes``."""
    x = np.zeros(model.weights.shape[1])
    for column, weight in feature.weights:
        if column < len(x):
            x[column] = weight
    return model.weights @ x + model.biases


def average_precision(ranking: Sequence[str], relevant: set[str]) -> float | None:
    """Mean of precision-at-rank over the relevant items, None if none exist."""
    hits = 0
    precisions = []
    for position, video_id in enumerate(ranking, 1):
        if video_id in relevant:
            hits += 1
            precisions.append(hits / position)
    if not precisions:
        return None
    return sum(precisions) / len(precisions)


def mean_average_precision(
    rankings: Mapping[str, Sequence[str]], truth: Mapping[str, set[str]]
) -> float:
    """Unweighted mean AP over categories with at least one relevant item."""
    scores = []
    for category, ranking in rankings.items():
        ap = average_precision(ranking, truth.get(category, set()))
        if ap is None:
            log.info("category '%s' has no relevant items, skipped", category)
            continue
        scores.append(ap)
    if not scores:
        raise ValueError("no category has relevant items")
    return sum(scores) / len(scores)


def split_videos(videos: Sequence[Video]) -> tuple[list[Video], list[Video]]:
    """Deterministic 70/30 train/test split keyed on a stable id hash."""
    train_split, test_split = [], []
    for video in videos:
        digest = hashlib.sha256(video.id.encode("utf-8")).hexdigest()
        bucket = int(digest, 16) % 100
        if bucket < TRAIN_FRACTION * 100:
            train_split.append(video)
        else:
            test_split.append(video)
    return train_split, test_split


def evaluate_source(
    videos_train: Sequence[Video],
    videos_test: Sequence[Video],
    source: str,
    recommendations: Mapping[str, Recommendation],
    categories: Sequence[str],
    epochs: int = DEFAULT_EPOCHS,
    learning_rate: float = DEFAULT_LEARNING_RATE,
) -> dict:
    """Train on the train split, rank the test split, report AP per category."""
    recs = recommendations
    train_tags = [tags_for(v, recs.get(v.id), source) for v in videos_train]
    vocabulary = build_vocabulary(train_tags)
    train_features = vectorize(videos_train, source, vocabulary, recs, categories)
    test_features = vectorize(videos_test, source, vocabulary, recs, categories)
    labels = [f.label for f in train_features]
    model = train(train_features, labels, epochs, learning_rate)

    class_row = {cls: row for row, cls in enumerate(model.classes)}
    scores = {f.video_id: predict(model, f) for f in test_features}
    rankings: dict[str, list[str]] = {}
    truth: dict[str, set[str]] = {}
    for label, category in enumerate(categories):
        if label not in class_row:
            continue
        row = class_row[label]
        ordered = sorted(
            (f.video_id for f in test_features),
            key=lambda vid: (-scores[vid][row], vid),
        )
        rankings[category] = ordered
        truth[category] = {v.id for v in videos_test if v.category == category}

    per_category = {}
    skipped = []
    for category, ranking in rankings.items():
        ap = average_precision(ranking, truth[category])
        if ap is None:
            skipped.append(category)
        else:
            per_category[category] = ap
    if not per_category:
        raise ValueError("no category has relevant items")
    map_score = sum(per_category.values()) / len(per_category)
    return {"map": map_score, "average_precision": per_category, "skipped": skipped}
