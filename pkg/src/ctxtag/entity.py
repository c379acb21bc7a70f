"""Tokenization and tag entity extraction.

A tag entity is either a gazetteer surface form found in the token stream or
a single word that no gazetteer entry covers. Extraction scans left to right
and always prefers the longest gazetteer match at the current position, so a
stream tagged ``Pope Benedict`` with both ``pope`` and ``pope benedict`` in
the gazetteer yields the two-word entity.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, replace

from .corpus import Gazetteer, Lexicon, fold

_SURROUNDING = string.punctuation


@dataclass(frozen=True)
class Token:
    surface: str
    folded: str
    position: int


@dataclass(frozen=True)
class TagEntity:
    surface: str
    folded: str
    pos: frozenset[str]
    ne: frozenset[str]
    # Inclusive token positions (start, end) in the source stream.
    span: tuple[int, int]


def tokenize(text: str) -> list[Token]:
    """Split on whitespace, strip surrounding punctuation, drop empties.

    Positions are consecutive from 0 after empties are dropped. Internal
    punctuation (hyphens, apostrophes) is kept.
    """
    tokens: list[Token] = []
    for chunk in text.split():
        word = chunk.strip(_SURROUNDING)
        if word:
            tokens.append(Token(word, fold(word), len(tokens)))
    return tokens


def entity_attributes(entity: TagEntity, lexicon: Lexicon) -> TagEntity:
    """Attach POS and NE label sets, unioned over the entity's words.

    A word absent from the lexicon contributes {other} to both sets.
    """
    pos: set[str] = set()
    ne: set[str] = set()
    for word in entity.folded.split():
        pos.update(lexicon.pos(word) or {"other"})
        ne.update(lexicon.ne(word) or {"other"})
    return replace(entity, pos=frozenset(pos), ne=frozenset(ne))


def extract_entities(
    tokens: list[Token], gazetteer: Gazetteer, lexicon: Lexicon
) -> list[TagEntity]:
    """Greedy longest-match segmentation of a token stream into entities.

    At each position the longest gazetteer entry matching the folded tokens
    is emitted and the scan resumes past it; positions no entry covers become
    single-word entities. The emitted spans partition the stream.
    """
    folded = [token.folded for token in tokens]
    entities: list[TagEntity] = []
    i = 0
    while i < len(tokens):
        length = gazetteer.longest_match(folded, i) or 1
        window = tokens[i : i + length]
        entity = TagEntity(
            surface=" ".join(t.surface for t in window),
            folded=" ".join(t.folded for t in window),
            pos=frozenset(),
            ne=frozenset(),
            span=(i, i + length - 1),
        )
        entities.append(entity_attributes(entity, lexicon))
        i += length
    return entities


def extract_from_text(text: str, gazetteer: Gazetteer, lexicon: Lexicon) -> list[TagEntity]:
    """Tokenize ``text`` and extract its entities in one step."""
    return extract_entities(tokenize(text), gazetteer, lexicon)
