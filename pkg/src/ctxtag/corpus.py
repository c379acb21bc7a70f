"""Data model and persistence for videos, web documents, lexicon and gazetteer.

All on-disk formats are line-oriented UTF-8:

* videos: one JSON object per line with ``id``, ``title``, ``tags``,
  ``related_ids`` and an optional ``category``
* web documents: one JSON object per line with ``url``, ``title``, ``abstract``
* lexicon: ``word|pos1,pos2|ne1,ne2`` per line; an empty segment means an
  empty label set; repeated words union their label sets
* gazetteer: one surface form per line

Matching everywhere in the pipeline happens on lowercased text, so loaders
fold keys once and lookups stay case-insensitive. Surface forms keep their
original casing for display.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable
from urllib.parse import urlsplit

log = logging.getLogger(__name__)

POS_LABELS = frozenset({"noun", "verb", "adjective", "other"})
NE_LABELS = frozenset({"person", "location", "organization", "other"})

# Closed set of video category labels used by the eval harness.
CATEGORIES = (
    "Autos & Vehicles",
    "Comedy",
    "Education",
    "Entertainment",
    "Film & Animation",
    "Gaming",
    "Howto & Style",
    "Music",
    "News & Politics",
    "Nonprofits & Activism",
    "People & Blogs",
    "Pets & Animals",
    "Science & Technology",
    "Sports",
    "Travel & Events",
)

# Gazetteer entries longer than this never match; bounds the scan window.
MAX_ENTRY_TOKENS = 6


class FormatError(ValueError):
    """Raised when an input file violates its documented line format."""


def fold(text: str) -> str:
    """Case-fold text for matching (simple lowercase)."""
    return text.lower()


@dataclass(frozen=True)
class Video:
    id: str
    title: str
    raw_tags: tuple[str, ...]
    related_ids: tuple[str, ...] = ()
    category: str | None = None


@dataclass(frozen=True)
class WebDocument:
    url: str
    title: str
    abstract: str
    source_rank: int = 1


@dataclass(frozen=True)
class Lexicon:
    """Case-insensitive word to POS-label-set and NE-label-set maps."""

    pos_map: dict[str, frozenset[str]] = field(default_factory=dict)
    ne_map: dict[str, frozenset[str]] = field(default_factory=dict)

    def pos(self, word: str) -> frozenset[str]:
        return self.pos_map.get(fold(word), frozenset())

    def ne(self, word: str) -> frozenset[str]:
        return self.ne_map.get(fold(word), frozenset())

    def __len__(self) -> int:
        return len(self.pos_map.keys() | self.ne_map.keys())


@dataclass(frozen=True)
class Gazetteer:
    """Known surface forms stored as folded token tuples for longest-match scans."""

    entries: frozenset[tuple[str, ...]] = frozenset()

    def __post_init__(self) -> None:
        longest = max(map(len, self.entries), default=0)
        object.__setattr__(self, "_longest", longest)

    @classmethod
    def from_phrases(cls, phrases: Iterable[str]) -> "Gazetteer":
        kept = set()
        for phrase in phrases:
            words = tuple(fold(phrase).split())
            if words and len(words) <= MAX_ENTRY_TOKENS:
                kept.add(words)
        return cls(frozenset(kept))

    def longest_match(self, folded: list[str], start: int) -> int:
        """Length of the longest entry matching at ``start``, or 0."""
        limit = min(self._longest, len(folded) - start)
        for length in range(limit, 0, -1):
            if tuple(folded[start : start + length]) in self.entries:
                return length
        return 0

    def __len__(self) -> int:
        return len(self.entries)


def _read_lines(path: str | Path) -> list[str]:
    return Path(path).read_text(encoding="utf-8").splitlines()


def _parse_json_line(line: str, lineno: int) -> dict:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {lineno}: invalid record: {exc.msg}") from exc
    if not isinstance(record, dict):
        raise FormatError(f"line {lineno}: invalid record: expected an object")
    return record


def _string_list(record: dict, key: str, lineno: int) -> list[str]:
    value = record.get(key, [])
    if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
        raise FormatError(f"line {lineno}: {key} must be a list of strings")
    return value


def load_videos(path: str | Path) -> list[Video]:
    """Load videos from a JSON-lines file.

    Raises FormatError naming the offending line for malformed records,
    missing or empty ids, duplicate ids, duplicate tags after case-folding,
    and categories outside the closed label set.
    """
    videos: list[Video] = []
    seen_ids: set[str] = set()
    for lineno, line in enumerate(_read_lines(path), 1):
        if not line.strip():
            continue
        record = _parse_json_line(line, lineno)
        if "id" not in record or record["id"] is None:
            raise FormatError(f"line {lineno}: missing id")
        video_id = record["id"]
        if not isinstance(video_id, str):
            raise FormatError(f"line {lineno}: id must be a string")
        if not video_id:
            raise FormatError(f"line {lineno}: empty id")
        if video_id in seen_ids:
            raise FormatError(f"line {lineno}: duplicate id '{video_id}'")
        seen_ids.add(video_id)
        title = record.get("title", "")
        if not isinstance(title, str):
            raise FormatError(f"line {lineno}: title must be a string")
        tags = _string_list(record, "tags", lineno)
        folded_tags = set()
        for tag in tags:
            folded_tag = fold(tag)
            if folded_tag in folded_tags:
                raise FormatError(f"line {lineno}: duplicate tag '{tag}'")
            folded_tags.add(folded_tag)
        related = _string_list(record, "related_ids", lineno)
        category = record.get("category")
        if category is not None:
            if not isinstance(category, str) or category not in CATEGORIES:
                raise FormatError(f"line {lineno}: unknown category '{category}'")
        videos.append(Video(video_id, title, tuple(tags), tuple(related), category))
    log.info("loaded %d videos from %s", len(videos), path)
    return videos


def save_videos(videos: Iterable[Video], path: str | Path) -> None:
    lines = []
    for video in videos:
        record = {
            "id": video.id,
            "title": video.title,
            "tags": list(video.raw_tags),
            "related_ids": list(video.related_ids),
        }
        if video.category is not None:
            record["category"] = video.category
        lines.append(json.dumps(record, ensure_ascii=False))
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def load_documents(path: str | Path) -> list[WebDocument]:
    """Load web documents from a JSON-lines file (url, title, abstract)."""
    documents: list[WebDocument] = []
    for lineno, line in enumerate(_read_lines(path), 1):
        if not line.strip():
            continue
        record = _parse_json_line(line, lineno)
        url = record.get("url")
        if not url or not isinstance(url, str):
            raise FormatError(f"line {lineno}: missing url")
        parts = urlsplit(url)
        if not parts.scheme or not parts.netloc:
            raise FormatError(f"line {lineno}: url is not absolute: '{url}'")
        title = record.get("title", "")
        abstract = record.get("abstract", "")
        if not isinstance(title, str) or not isinstance(abstract, str):
            raise FormatError(f"line {lineno}: title and abstract must be strings")
        if not title and not abstract:
            raise FormatError(f"line {lineno}: title and abstract both empty")
        documents.append(WebDocument(url, title, abstract))
    log.info("loaded %d documents from %s", len(documents), path)
    return documents


def save_documents(documents: Iterable[WebDocument], path: str | Path) -> None:
    lines = [
        json.dumps(
            {"url": doc.url, "title": doc.title, "abstract": doc.abstract},
            ensure_ascii=False,
        )
        for doc in documents
    ]
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def _parse_labels(segment: str, valid: frozenset[str], kind: str, lineno: int) -> frozenset[str]:
    labels = set()
    for raw in segment.split(","):
        label = raw.strip()
        if not label:
            continue
        if label not in valid:
            raise FormatError(f"line {lineno}: unknown {kind} label '{label}'")
        labels.add(label)
    return frozenset(labels)


def load_lexicon(path: str | Path) -> Lexicon:
    """Load a ``word|pos|ne`` lexicon; repeated words union their labels."""
    pos_map: dict[str, frozenset[str]] = {}
    ne_map: dict[str, frozenset[str]] = {}
    for lineno, line in enumerate(_read_lines(path), 1):
        if not line.strip():
            continue
        segments = line.split("|")
        if len(segments) != 3:
            raise FormatError(f"line {lineno}: expected 'word|pos|ne'")
        word = fold(segments[0].strip())
        if not word:
            raise FormatError(f"line {lineno}: empty word")
        pos = _parse_labels(segments[1], POS_LABELS, "pos", lineno)
        ne = _parse_labels(segments[2], NE_LABELS, "ne", lineno)
        if pos:
            pos_map[word] = pos_map.get(word, frozenset()) | pos
        if ne:
            ne_map[word] = ne_map.get(word, frozenset()) | ne
    lexicon = Lexicon(pos_map, ne_map)
    log.info("loaded %d lexicon words from %s", len(lexicon), path)
    return lexicon


def save_lexicon(lexicon: Lexicon, path: str | Path) -> None:
    lines = []
    for word in sorted(lexicon.pos_map.keys() | lexicon.ne_map.keys()):
        pos = ",".join(sorted(lexicon.pos_map.get(word, ())))
        ne = ",".join(sorted(lexicon.ne_map.get(word, ())))
        lines.append(f"{word}|{pos}|{ne}")
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def load_gazetteer(path: str | Path) -> Gazetteer:
    """Load a one-surface-form-per-line gazetteer (deduplicated after folding)."""
    gazetteer = Gazetteer.from_phrases(
        line for line in _read_lines(path) if line.strip()
    )
    log.info("loaded %d gazetteer entries from %s", len(gazetteer), path)
    return gazetteer


def save_gazetteer(gazetteer: Gazetteer, path: str | Path) -> None:
    lines = sorted(" ".join(entry) for entry in gazetteer.entries)
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
