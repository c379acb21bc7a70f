"""Document search and same-context filtering.

The default backend is an offline inverted index over a document corpus file,
scoring candidates with tf-idf. A resource survives the same-context filter
only when every query entity occurs verbatim (as a contiguous token run) in
its title or abstract, which is what separates documents about the video's
event from documents that merely share vocabulary with it.
"""

from __future__ import annotations

import abc
import json
import logging
import math
import urllib.request
from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Sequence
from urllib.parse import quote, urlsplit

from .corpus import WebDocument, fold
from .entity import tokenize
from .query import Query, query_text

log = logging.getLogger(__name__)

DEFAULT_TOP_RESULTS = 10


class MediaForm(str, Enum):
    VIDEOS = "Videos"
    NEWS_ARTICLES = "NewsArticles"
    BLOGS_BBS = "BlogsBBS"
    MUSIC_RADIO = "MusicRadio"
    IMAGES = "Images"
    UNCLASSIFIED = "Unclassified"


# Checked in order against host+path; the first matching rule wins.
_FORM_RULES: tuple[tuple[MediaForm, tuple[str, ...]], ...] = (
    (MediaForm.VIDEOS, ("watch", "/video", "video.")),
    (MediaForm.NEWS_ARTICLES, ("/news", "news.")),
    (MediaForm.BLOGS_BBS, ("blog", "forum", "/bbs")),
    (MediaForm.MUSIC_RADIO, ("music", "radio")),
    (MediaForm.IMAGES, ("/photo", "image", "/img")),
)


def classify_media_form(url: str) -> MediaForm:
    """Classify a hyperlink into a media form by URL substring rules."""
    try:
        parts = urlsplit(fold(url))
    except ValueError:
        return MediaForm.UNCLASSIFIED
    haystack = parts.netloc + parts.path
    for form, needles in _FORM_RULES:
        if any(needle in haystack for needle in needles):
            return form
    return MediaForm.UNCLASSIFIED


@dataclass(frozen=True)
class SameContextResource:
    doc: WebDocument
    form: MediaForm


class SearchBackend(abc.ABC):
    """Anything that can turn a query string into ranked web documents."""

    @abc.abstractmethod
    def search(self, query: str, k: int) -> list[WebDocument]:
        """Return the top ``k`` documents for ``query``, ranks 1..n assigned."""


class OfflineIndex(SearchBackend):
    """Inverted index with tf-idf scoring over an in-memory document store.

    idf(w) = ln((N + 1) / (df(w) + 1)) + 1 and a document scores the sum of
    tf * idf over the distinct query words it contains. Ties are broken by
    document id (store position) ascending.
    """

    def __init__(
        self,
        documents: Sequence[WebDocument],
        postings: dict[str, tuple[tuple[int, int], ...]],
    ) -> None:
        self._documents = tuple(documents)
        self._postings = postings

    @property
    def documents(self) -> tuple[WebDocument, ...]:
        return self._documents

    def __len__(self) -> int:
        return len(self._documents)

    def search(self, query: str, k: int) -> list[WebDocument]:
        if k < 1:
            raise ValueError("k must be at least 1")
        words = sorted({token.folded for token in tokenize(query)})
        total = len(self._documents)
        scores: dict[int, float] = {}
        for word in words:
            postings = self._postings.get(word)
            if not postings:
                continue
            idf = math.log((total + 1) / (len(postings) + 1)) + 1.0
            for doc_id, tf in postings:
                scores[doc_id] = scores.get(doc_id, 0.0) + tf * idf
        ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))[:k]
        return [
            replace(self._documents[doc_id], source_rank=rank)
            for rank, (doc_id, _score) in enumerate(ranked, 1)
        ]

    def save(self, path: str | Path) -> None:
        """Write the index as canonical JSON (same input, same bytes)."""
        payload = {
            "documents": [
                {"url": doc.url, "title": doc.title, "abstract": doc.abstract}
                for doc in self._documents
            ],
            "postings": {
                term: [list(entry) for entry in entries]
                for term, entries in self._postings.items()
            },
        }
        text = json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
        Path(path).write_text(text + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "OfflineIndex":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        documents = [
            WebDocument(entry["url"], entry["title"], entry["abstract"])
            for entry in payload["documents"]
        ]
        postings = {
            term: tuple((int(doc_id), int(tf)) for doc_id, tf in entries)
            for term, entries in payload["postings"].items()
        }
        return cls(documents, postings)


def index_documents(documents: Sequence[WebDocument]) -> OfflineIndex:
    """Build an OfflineIndex; document ids are store positions."""
    seen: set[str] = set()
    for doc in documents:
        if doc.url in seen:
            raise ValueError(f"duplicate url '{doc.url}'")
        seen.add(doc.url)
    postings: dict[str, list[tuple[int, int]]] = {}
    for doc_id, doc in enumerate(documents):
        counts = Counter(token.folded for token in tokenize(doc.title + " " + doc.abstract))
        for word, tf in counts.items():
            postings.setdefault(word, []).append((doc_id, tf))
    frozen = {term: tuple(entries) for term, entries in postings.items()}
    log.info("indexed %d documents, %d terms", len(documents), len(frozen))
    return OfflineIndex(documents, frozen)


def search(backend: SearchBackend, query: Query, k: int = DEFAULT_TOP_RESULTS) -> list[WebDocument]:
    """Run a constructed query against any backend."""
    return backend.search(query_text(query), k)


def _contains_run(haystack: list[str], needle: list[str]) -> bool:
    if not needle:
        return True
    for start in range(len(haystack) - len(needle) + 1):
        if haystack[start : start + len(needle)] == needle:
            return True
    return False


def same_context_filter(results: Sequence[WebDocument], query: Query) -> list[SameContextResource]:
    """Keep documents whose title+abstract contains every query entity.

    Each entity's folded surface must occur as a contiguous token run; adding
    entities to the query can only shrink the surviving set. Input order
    (and therefore rank order) is preserved.
    """
    kept: list[SameContextResource] = []
    needles = [entity.folded.split() for entity in query.entities]
    for doc in results:
        tokens = [token.folded for token in tokenize(doc.title + " " + doc.abstract)]
        if all(_contains_run(tokens, needle) for needle in needles):
            kept.append(SameContextResource(doc, classify_media_form(doc.url)))
    return kept


class RemoteBackend(SearchBackend):
    """HTTP search backend, disabled by default and never used in CI.

    Expects ``GET {base_url}?q={query}&k={k}`` to return a JSON array of
    objects with ``url``, ``title`` and ``abstract`` fields.
    """

    def __init__(self, base_url: str, timeout: float = 10.0) -> None:
        self.base_url = base_url
        self.timeout = timeout

    def search(self, query: str, k: int) -> list[WebDocument]:
        if k < 1:
            raise ValueError("k must be at least 1")
        url = f"{self.base_url}?q={quote(query)}&k={k}"
        with urllib.request.urlopen(url, timeout=self.timeout) as response:
            payload = json.loads(response.read().decode("utf-8"))
        if not isinstance(payload, list):
            raise RuntimeError("remote backend returned a non-array payload")
        results = []
        for rank, entry in enumerate(payload[:k], 1):
            try:
                results.append(
                    WebDocument(entry["url"], entry["title"], entry["abstract"], rank)
                )
            except (KeyError, TypeError) as exc:
                raise RuntimeError(f"remote backend result {rank} is malformed") from exc
        return results
