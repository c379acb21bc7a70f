"""Final tag recommendation from entity significance scores."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .corpus import Gazetteer, Lexicon, Video, fold
from .entity import extract_from_text
from .graph import CooccurrenceGraph, ScoreVector
from .query import Query

DEFAULT_K = 10


@dataclass(frozen=True)
class Recommendation:
    video_id: str
    items: tuple[tuple[str, float], ...]
    k_requested: int


def recommend(
    scores: ScoreVector | None,
    graph: CooccurrenceGraph,
    video: Video,
    k: int = DEFAULT_K,
    gazetteer: Gazetteer | None = None,
    lexicon: Lexicon | None = None,
    query: Query | None = None,
    exclude_query_entities: bool = True,
) -> Recommendation:
    """Rank graph vertices by score and keep the first ``k`` new ones.

    New means not a raw tag, not an entity of the raw tag stream (extracted
    when a gazetteer and lexicon are supplied) and, unless switched off, not
    a query entity. Ties in score fall back to lexicographic folded form.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if graph.n == 0:
        return Recommendation(video.id, (), k)
    if scores is None or len(scores.scores) != graph.n:
        raise ValueError("scores do not match the graph")

    excluded = {fold(tag) for tag in video.raw_tags}
    if gazetteer is not None and lexicon is not None:
        tag_stream = extract_from_text(" ".join(video.raw_tags), gazetteer, lexicon)
        excluded.update(entity.folded for entity in tag_stream)
    if query is not None and exclude_query_entities:
        excluded.update(entity.folded for entity in query.entities)

    ranked = sorted(
        zip(graph.vertices, scores.scores), key=lambda pair: (-pair[1], pair[0])
    )
    items = tuple(
        (vertex, float(score)) for vertex, score in ranked if vertex not in excluded
    )[:k]
    return Recommendation(video.id, items, k)


def enriched_tags(video: Video, recommendation: Recommendation) -> list[str]:
    """Folded raw tags plus recommended forms, the eval harness's enriched set."""
    return [fold(tag) for tag in video.raw_tags] + [form for form, _ in recommendation.items]


def save_recommendations(recommendations: Iterable[Recommendation], path: str | Path) -> None:
    """Write one JSON line per video: id, (form, score) items, requested k."""
    lines = [
        json.dumps(
            {
                "video_id": rec.video_id,
                "items": [[form, score] for form, score in rec.items],
                "k": rec.k_requested,
            },
            ensure_ascii=False,
        )
        for rec in recommendations
    ]
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def load_recommendations(path: str | Path) -> list[Recommendation]:
    recommendations = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        items = tuple((form, float(score)) for form, score in record["items"])
        recommendations.append(Recommendation(record["video_id"], items, int(record["k"])))
    return recommendations
