import pytest
from hypothesis import given
from hypothesis import strategies as st

from ingroup_index.tagger import (
    Lexicon,
    LexiconError,
    Person,
    PersonCounts,
    Source,
    TaggingOptions,
    TokenKind,
    count_persons,
    default_lexicon,
    normalize,
    tag_text,
    tokenize,
)

IRREGULAR = {"ser", "estar", "haber", "ir", "tener", "hacer", "decir", "poder", "querer", "saber", "dar", "ver", "venir", "poner"}
TENSES = {"present", "preterite", "imperfect", "future", "conditional"}
PRONOUN_CLASSES = {"subject", "clitic", "prepositional", "polite"}


def _tuple(c: PersonCounts):
    return c.first, c.second, c.third, c.ambiguous


def test_golden_sentences(golden):
    misses = [(s, exp, _tuple(count_persons(s))) for s, exp, _ in golden if _tuple(count_persons(s)) != exp]
    assert not misses


def test_golden_coverage(golden):
    covers = {c for _, _, cs in golden for c in cs}
    assert len(golden) >= 50
    assert PRONOUN_CLASSES <= covers
    assert TENSES <= covers
    assert len(IRREGULAR & covers) >= 10


def test_tags_and_sources():
    tags = {tok.normalized: tag for tok, tag in tag_text("Nosotros ganamos y ellos pierden")}
    assert tags["nosotros"].person is Person.FIRST and tags["nosotros"].source is Source.PRONOUN
    assert tags["ganamos"].person is Person.FIRST and tags["ganamos"].source is Source.VERB
    assert tags["pierden"].person is Person.THIRD
    assert tags["y"].person is Person.NONE


def test_accent_distinctions():
    assert _tuple(count_persons("el dia")) == (0, 0, 0, 0)
    assert _tuple(count_persons("él día")) == (0, 0, 1, 0)
    assert _tuple(count_persons("tu casa")) == (0, 0, 0, 0)
    assert _tuple(count_persons("tú")) == (0, 1, 0, 0)


def test_ambiguity_policies():
    text = "yo cantaba"
    assert _tuple(count_persons(text)) == (1, 0, 0, 1)
    assert _tuple(count_persons(text, options=TaggingOptions(ambiguity="third"))) == (1, 0, 1, 1)


def test_polite_policy():
    assert count_persons("usted").second == 1
    c = count_persons("ustedes", options=TaggingOptions(polite="third"))
    assert (c.second, c.third) == (0, 1)


def test_bad_options():
    with pytest.raises(ValueError):
        TaggingOptions(ambiguity="first")
    with pytest.raises(ValueError):
        TaggingOptions(polite="formal")


def test_tweet_entities_not_tagged():
    toks = tokenize("ellos ganan https://x.co/nos @nosotros #yo")
    kinds = [t.kind for t in toks]
    assert kinds == [TokenKind.WORD, TokenKind.WORD, TokenKind.URL, TokenKind.MENTION, TokenKind.HASHTAG]
    assert _tuple(count_persons("ellos ganan https://x.co/nos @nosotros #yo")) == (0, 0, 2, 0)


def test_byte_spans():
    text = "Él comió pan"
    for tok in tokenize(text):
        s, e = tok.span
        assert text.encode("utf-8")[s:e].decode("utf-8") == tok.surface


def test_normalize():
    assert normalize("GRACIAAAAS") == "graciaas"
    assert normalize("nosotros") == "nosotros"
    # decomposed accent composes to the same form
    assert normalize("él") == "él"
    assert _tuple(count_persons("él")) == (0, 0, 1, 0)


def test_min_stem_blocks_short_words():
    lex = Lexicon.parse("[meta]\nversion\tx\nmin_stem\t2\n[suffix]\nan\tpresent\tthird\n")
    assert lex.match_suffix("pan") is None
    assert lex.match_suffix("cantan") == ("an", "present", "third")
    assert _tuple(count_persons("mesa pan")) == (0, 0, 0, 0)


def test_longest_suffix_wins():
    lex = default_lexicon()
    assert lex.match_suffix("cantábamos")[2] == "first"
    assert lex.match_suffix("cantaríamos")[0] == "ríamos"


def test_lexicon_parse_errors():
    with pytest.raises(LexiconError, match="version"):
        Lexicon.parse("[pronoun]\nyo\tfirst\n")
    with pytest.raises(LexiconError, match="unknown class"):
        Lexicon.parse("[meta]\nversion\tx\n[pronoun]\nyo\tfourth\n")
    with pytest.raises(LexiconError, match="conflicting"):
        Lexicon.parse("[meta]\nversion\tx\n[pronoun]\nyo\tfirst\nyo\tthird\n")
    with pytest.raises(LexiconError, match="section"):
        Lexicon.parse("[meta]\nversion\tx\n[adverb]\n")


def test_custom_lexicon():
    lex = Lexicon.parse("[meta]\nversion\ttiny\n[pronoun]\nyo\tfirst\n[suffix]\nzz\tpresent\tthird\n")
    assert lex.version == "tiny"
    assert _tuple(count_persons("yo cazz mazz", lex)) == (1, 0, 2, 0)


words = st.sampled_from(["yo", "tú", "él", "nosotros", "ganamos", "pierden", "cantaba", "mesa", "usted", "dijo", "la", "casa"])


@given(st.lists(words, max_size=15))
def test_counts_additive(ws):
    whole = count_persons(" ".join(ws))
    parts = PersonCounts(0, 0, 0, 0)
    for w in ws:
        parts = parts + count_persons(w)
    assert whole == parts


@given(st.text(max_size=80))
def test_tokenize_total(text):
    # never crashes, spans are increasing and in range
    toks = tokenize(text)
    end = 0
    for t in toks:
        assert t.span[0] >= end
        end = t.span[1]
    assert end <= len(text.encode("utf-8"))
    c = count_persons(text)
    assert min(c.first, c.second, c.third, c.ambiguous) >= 0
