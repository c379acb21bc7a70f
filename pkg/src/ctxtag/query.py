"""Context query construction from a video's tags, title and related videos."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import Gazetteer, Lexicon, Video
from .entity import TagEntity, extract_from_text

log = logging.getLogger(__name__)

DEFAULT_MIN_ENTITIES = 3


class QueryError(ValueError):
    """Raised when a video offers nothing to build a query from."""


@dataclass(frozen=True)
class Query:
    video_id: str
    entities: tuple[TagEntity, ...]

    def folded_forms(self) -> tuple[str, ...]:
        return tuple(entity.folded for entity in self.entities)


def query_text(query: Query) -> str:
    """Flatten a query into the whitespace-joined search string."""
    return " ".join(query.folded_forms())


def _priority(entity: TagEntity) -> int:
    # 0: carries a real named-entity label, 1: noun, 2: everything else.
    if entity.ne != frozenset({"other"}):
        return 0
    if "noun" in entity.pos:
        return 1
    return 2


def _classes(entities: Iterable[TagEntity]) -> list[list[TagEntity]]:
    pools: list[list[TagEntity]] = [[], [], []]
    for entity in entities:
        pools[_priority(entity)].append(entity)
    return pools


def construct_query(
    video: Video,
    related: Sequence[Video],
    gazetteer: Gazetteer,
    lexicon: Lexicon,
    min_entities: int = DEFAULT_MIN_ENTITIES,
) -> Query:
    """Pick the tag entities that will stand in for the video's context.

    Entities come from the tag stream first and the title stream second, in
    priority order: named-entity bearing, then nouns, then the rest. Whole
    priority classes are appended until at least ``min_entities`` entities
    are collected or the streams run out. Videos still short of the minimum
    borrow the most frequent tag-entity forms of their related videos
    (ties broken lexicographically). Duplicate folded forms are skipped.

    Raises QueryError when no source yields a single entity.
    """
    if min_entities < 1:
        raise ValueError("min_entities must be at least 1")
    chosen: list[TagEntity] = []
    seen: set[str] = set()

    tag_entities = extract_from_text(" ".join(video.raw_tags), gazetteer, lexicon)
    title_entities = extract_from_text(video.title, gazetteer, lexicon)
    for pool in _classes(tag_entities) + _classes(title_entities):
        if len(chosen) >= min_entities:
            break
        for entity in pool:
            if entity.folded not in seen:
                seen.add(entity.folded)
                chosen.append(entity)

    if len(chosen) < min_entities and related:
        counts: Counter[str] = Counter()
        first_seen: dict[str, TagEntity] = {}
        for neighbor in related:
            for entity in extract_from_text(" ".join(neighbor.raw_tags), gazetteer, lexicon):
                counts[entity.folded] += 1
                first_seen.setdefault(entity.folded, entity)
        for form, _count in sorted(counts.items(), key=lambda item: (-item[1], item[0])):
            if len(chosen) >= min_entities:
                break
            if form not in seen:
                seen.add(form)
                chosen.append(first_seen[form])

    if not chosen:
        raise QueryError("no query material")
    log.debug("video=%s query=%s", video.id, ",".join(e.folded for e in chosen))
    return Query(video.id, tuple(chosen))
