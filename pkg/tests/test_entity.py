"""Tokenization and greedy longest-match entity extraction.

The random-case tests compare the extractor against an independent
reference scanner written directly from the matching rule, so a shared
bug in the production code cannot hide.
"""

import random

from conftest import make_gazetteer, make_lexicon

from ctxtag.entity import (
    Token,
    entity_attributes,
    extract_entities,
    extract_from_text,
    tokenize,
)


def reference_scan(folded_tokens, phrase_set):
    """Left-to-right longest-match segmentation, written independently.

    Returns (span, folded_form) pairs. phrase_set is a set of token tuples.
    """
    out = []
    i = 0
    n = len(folded_tokens)
    while i < n:
        best = 1
        for phrase in phrase_set:
            width = len(phrase)
            if width > best and tuple(folded_tokens[i:i + width]) == phrase:
                best = width
        out.append(((i, i + best - 1), " ".join(folded_tokens[i:i + best])))
        i += best
    return out


# ---------------------------------------------------------------- tokenize


def test_tokenize_folds_and_strips_punctuation():
    tokens = tokenize("Pope, attacked!")
    assert [t.surface for t in tokens] == ["Pope", "attacked"]
    assert [t.folded for t in tokens] == ["pope", "attacked"]
    assert [t.position for t in tokens] == [0, 1]


def test_tokenize_drops_pure_punctuation_tokens():
    tokens = tokenize("dog - rescue ...")
    assert [t.folded for t in tokens] == ["dog", "rescue"]
    assert [t.position for t in tokens] == [0, 1]


def test_tokenize_keeps_internal_punctuation():
    tokens = tokenize("the dog's day")
    assert [t.folded for t in tokens] == ["the", "dog's", "day"]


def test_tokenize_empty_text():
    assert tokenize("") == []
    assert tokenize("  \t ") == []


# ---------------------------------------------------------------- extraction


def test_longest_match_wins_over_shorter_prefix():
    gaz = make_gazetteer(["pope", "pope benedict"])
    lex = make_lexicon({"pope": ("noun", "person"), "benedict": ("noun", "person")})
    entities = extract_entities(tokenize("Pope Benedict waved"), gaz, lex)
    assert [e.folded for e in entities] == ["pope benedict", "waved"]
    assert entities[0].span == (0, 1)
    assert entities[0].surface == "Pope Benedict"
    assert entities[1].span == (2, 2)


def test_greedy_scan_is_left_to_right():
    # "a b" is taken first, so the overlapping "b c" can never match.
    gaz = make_gazetteer(["a b", "b c"])
    lex = make_lexicon({})
    entities = extract_entities(tokenize("a b c"), gaz, lex)
    assert [e.folded for e in entities] == ["a b", "c"]


def test_uncovered_tokens_become_single_word_entities():
    gaz = make_gazetteer([])
    lex = make_lexicon({})
    entities = extract_entities(tokenize("three plain words"), gaz, lex)
    assert [e.folded for e in entities] == ["three", "plain", "words"]
    assert [e.span for e in entities] == [(0, 0), (1, 1), (2, 2)]


def test_unknown_word_attributes_default_to_other():
    gaz = make_gazetteer([])
    lex = make_lexicon({})
    entities = extract_entities(tokenize("mystery"), gaz, lex)
    assert entities[0].pos == frozenset({"other"})
    assert entities[0].ne == frozenset({"other"})


def test_attributes_union_over_constituent_words():
    lex = make_lexicon(
        {
            "pope": ("noun", "person"),
            "benedict": ("noun", "person"),
            "new": ("adjective", ""),
            "york": ("noun", "location"),
        }
    )
    gaz = make_gazetteer(["pope benedict", "new york"])

    pope = extract_entities(tokenize("pope benedict"), gaz, lex)[0]
    assert pope.pos == frozenset({"noun"})
    assert pope.ne == frozenset({"person"})

    york = extract_entities(tokenize("new york"), gaz, lex)[0]
    assert york.pos == frozenset({"adjective", "noun"})
    # "new" has no ne labels, so it contributes {other}
    assert york.ne == frozenset({"location", "other"})


def test_entity_attributes_direct():
    lex = make_lexicon({"pope": ("noun", "person")})
    entity = extract_from_text("pope stuff", make_gazetteer([]), lex)[0]
    relabeled = entity_attributes(entity, lex)
    assert relabeled.pos == frozenset({"noun"})
    assert relabeled.ne == frozenset({"person"})
    assert relabeled.span == entity.span


def test_extract_from_text_convenience():
    gaz = make_gazetteer(["pope benedict"])
    lex = make_lexicon({})
    entities = extract_from_text("Pope Benedict XVI", gaz, lex)
    assert [e.folded for e in entities] == ["pope benedict", "xvi"]


# ------------------------------------------------------- random properties


def random_case(rng):
    alphabet = ["a", "b", "c", "d", "e"]
    phrases = set()
    for _ in range(rng.randrange(0, 9)):
        width = rng.randrange(1, 5)
        phrases.add(tuple(rng.choice(alphabet) for _ in range(width)))
    stream = [rng.choice(alphabet) for _ in range(rng.randrange(1, 16))]
    return stream, phrases


def test_extraction_matches_reference_scanner():
    rng = random.Random(9120)
    lex = make_lexicon({})
    for _ in range(300):
        stream, phrases = random_case(rng)
        gaz = make_gazetteer([" ".join(p) for p in phrases])
        tokens = [Token(surface=w, folded=w, position=i) for i, w in enumerate(stream)]
        got = [(e.span, e.folded) for e in extract_entities(tokens, gaz, lex)]
        assert got == reference_scan(stream, phrases)


def test_extraction_spans_partition_the_stream():
    rng = random.Random(7007)
    lex = make_lexicon({})
    for _ in range(200):
        stream, phrases = random_case(rng)
        gaz = make_gazetteer([" ".join(p) for p in phrases])
        tokens = [Token(surface=w, folded=w, position=i) for i, w in enumerate(stream)]
        entities = extract_entities(tokens, gaz, lex)
        expected_start = 0
        for entity in entities:
            start, end = entity.span
            assert start == expected_start
            assert end >= start
            expected_start = end + 1
        assert expected_start == len(stream)


def test_no_longer_gazetteer_entry_fits_at_any_emitted_start():
    rng = random.Random(5150)
    lex = make_lexicon({})
    for _ in range(200):
        stream, phrases = random_case(rng)
        gaz = make_gazetteer([" ".join(p) for p in phrases])
        tokens = [Token(surface=w, folded=w, position=i) for i, w in enumerate(stream)]
        for entity in extract_entities(tokens, gaz, lex):
            start, end = entity.span
            taken = end - start + 1
            for phrase in phrases:
                if len(phrase) > taken:
                    assert tuple(stream[start:start + len(phrase)]) != phrase


def test_extraction_is_deterministic():
    rng = random.Random(42)
    lex = make_lexicon({})
    stream, phrases = random_case(rng)
    gaz = make_gazetteer([" ".join(p) for p in phrases])
    tokens = [Token(surface=w, folded=w, position=i) for i, w in enumerate(stream)]
    assert extract_entities(tokens, gaz, lex) == extract_entities(tokens, gaz, lex)
