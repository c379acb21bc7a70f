"""Shared builders for the test suite.

Most tests construct tiny in-memory lexicons and gazetteers instead of
touching the shipped fixture files; these helpers keep that terse.
"""

import pytest

from ctxtag.corpus import Gazetteer, Lexicon, Video
from ctxtag.entity import TagEntity
from ctxtag.query import Query


def make_lexicon(entries):
    """Build a Lexicon from {"word": ("noun,verb", "person")} style pairs.

    Either half of the pair may be an empty string, meaning the word has no
    recorded labels on that side.
    """
    pos_map = {}
    ne_map = {}
    for word, (pos, ne) in entries.items():
        key = word.lower()
        if pos:
            pos_map[key] = frozenset(pos.split(","))
        if ne:
            ne_map[key] = frozenset(ne.split(","))
    return Lexicon(pos_map=pos_map, ne_map=ne_map)


def make_gazetteer(phrases):
    return Gazetteer.from_phrases(phrases)


def make_video(video_id="v1", title="", tags=(), related=(), category=None):
    return Video(
        id=video_id,
        title=title,
        raw_tags=tuple(tags),
        related_ids=tuple(related),
        category=category,
    )


def make_query(*forms, video_id="v1"):
    """Build a Query whose entities carry the given folded forms.

    Attribute sets and spans are placeholders; tests that depend on them
    build entities by hand instead.
    """
    entities = []
    position = 0
    for form in forms:
        width = len(form.split())
        entities.append(
            TagEntity(
                surface=form,
                folded=form,
                pos=frozenset({"noun"}),
                ne=frozenset({"other"}),
                span=(position, position + width - 1),
            )
        )
        position += width
    return Query(video_id=video_id, entities=tuple(entities))


@pytest.fixture
def plain_lexicon():
    """Lexicon used by several retrieval and graph tests."""
    return make_lexicon(
        {
            "pope": ("noun", "person"),
            "benedict": ("noun", "person"),
            "christmas": ("noun", ""),
            "mass": ("noun", ""),
            "woman": ("noun", ""),
            "attacked": ("verb", ""),
            "knocked": ("verb", ""),
            "calm": ("adjective", ""),
        }
    )
