"""Bundled desk-scale fixtures.

Ships the shared lexicon and gazetteer, three end-to-end scenario bundles
(video, crafted document corpus, expected query and expected recommendation
superset) and a seeded generator for the synthetic labeled corpus the eval
harness trains on. Scenario data lives next to this module in the documented
line formats, so the same files also serve as CLI demo inputs.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..corpus import (
    CATEGORIES,
    Gazetteer,
    Lexicon,
    Video,
    WebDocument,
    load_documents,
    load_gazetteer,
    load_lexicon,
    load_videos,
    save_videos,
)
from ..recommend import Recommendation, save_recommendations

SCENARIOS = ("dogrescue", "minicooper", "pope")

EVAL_SEED = 20090412
EVAL_NOISE_TAGS = 30
EVAL_SIGNAL_TAGS = 8


def fixture_path(*parts: str) -> Path:
    """Absolute path of a bundled fixture file or directory."""
    node = resources.files(__package__)
    for part in parts:
        node = node.joinpath(part)
    return Path(str(node))


def load_fixture_lexicon() -> Lexicon:
    return load_lexicon(fixture_path("lexicon.txt"))


def load_fixture_gazetteer() -> Gazetteer:
    return load_gazetteer(fixture_path("gazetteer.txt"))


@dataclass(frozen=True)
class Scenario:
    name: str
    video: Video
    corpus_docs: tuple[WebDocument, ...]
    expected_query: tuple[str, ...]
    expected_recommendation_superset: frozenset[str]


def load_scenario(name: str) -> Scenario:
    if name not in SCENARIOS:
        raise ValueError(f"unknown scenario '{name}'; available: {', '.join(SCENARIOS)}")
    root = fixture_path(name)
    video = load_videos(root / "video.jsonl")[0]
    docs = load_documents(root / "docs.jsonl")
    expected = json.loads((root / "expected.json").read_text(encoding="utf-8"))
    return Scenario(
        name=name,
        video=video,
        corpus_docs=tuple(docs),
        expected_query=tuple(expected["query"]),
        expected_recommendation_superset=frozenset(expected["recommendation_superset"]),
    )


def _slug(name: str) -> str:
    return re.sub(r"[^a-z]+", "-", name.lower()).strip("-")


def build_eval_fixture(
    n_videos: int = 240, n_categories: int = 6, seed: int = EVAL_SEED
) -> tuple[list[Video], list[Recommendation]]:
    """Synthetic labeled videos plus planted recommendations.

    Raw tags mix shared noise with an occasional category signal tag (and
    sometimes a misleading one from another category); the planted
    recommendations add three fresh signal tags from the video's own
    category, so the enriched tag set correlates with the label much more
    strongly than the raw one. Fully deterministic for a given seed.
    """
    if not 2 <= n_categories <= len(CATEGORIES):
        raise ValueError("n_categories out of range")
    rng = random.Random(seed)
    categories = CATEGORIES[:n_categories]
    noise = [f"noise-{i:02d}" for i in range(EVAL_NOISE_TAGS)]
    signal = {
        category: [f"{_slug(category)}-topic-{i}" for i in range(EVAL_SIGNAL_TAGS)]
        for category in categories
    }
    videos: list[Video] = []
    recommendations: list[Recommendation] = []
    for serial in range(n_videos):
        category = categories[serial % n_categories]
        tags = rng.sample(noise, 3)
        if rng.random() < 0.6:
            tags.append(rng.choice(signal[category]))
        if rng.random() < 0.3:
            other = rng.choice([c for c in categories if c != category])
            tags.append(rng.choice(signal[other]))
        video = Video(
            id=f"synth-{serial:04d}",
            title=f"synthetic video {serial}",
            raw_tags=tuple(tags),
            related_ids=(),
            category=category,
        )
        fresh = [t for t in signal[category] if t not in tags]
        planted = rng.sample(fresh, 3)
        items = tuple((tag, round(0.5 - 0.1 * rank, 6)) for rank, tag in enumerate(planted))
        videos.append(video)
        recommendations.append(Recommendation(video.id, items, k_requested=10))
    return videos, recommendations


def write_eval_fixture(directory: str | Path, **kwargs) -> tuple[Path, Path]:
    """Write the synthetic corpus as videos.jsonl and recommendations.jsonl."""
    videos, recommendations = build_eval_fixture(**kwargs)
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    videos_path = directory / "videos.jsonl"
    recommendations_path = directory / "recommendations.jsonl"
    save_videos(videos, videos_path)
    save_recommendations(recommendations, recommendations_path)
    return videos_path, recommendations_path
