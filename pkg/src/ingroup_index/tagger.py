"""Rule-based grammatical-person tagging for Spanish tweets.

Pronouns come from a closed table, finite verbs from a table of listed
(mostly irregular) forms and, failing that, from conjugation-suffix rules.
Forms syncretic between first and third person singular (imperfect,
conditional, subjunctives) are tagged ambiguous and kept out of the person
tallies unless the caller asks otherwise.
"""

from __future__ import annotations

import enum
import re
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable


class LexiconError(ValueError):
    pass


class Person(str, enum.Enum):
    FIRST = "first"
    SECOND = "second"
    THIRD = "third"
    AMBIGUOUS = "first|third"
    NONE = "none"


class Source(str, enum.Enum):
    PRONOUN = "pronoun"
    VERB = "verb"


@dataclass(frozen=True)
class PersonTag:
    person: Person
    source: Source | None = None

    def __post_init__(self):
        if self.person is Person.AMBIGUOUS and self.source is not Source.VERB:
            raise ValueError("ambiguous first/third tags come from verbs only")
        if self.person is Person.NONE and self.source is not None:
            raise ValueError("non-person tags carry no source")


NON_PERSON = PersonTag(Person.NONE)


class TokenKind(str, enum.Enum):
    WORD = "word"
    URL = "url"
    MENTION = "mention"
    HASHTAG = "hashtag"


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    span: tuple[int, int]  # UTF-8 byte offsets, end exclusive
    kind: TokenKind = TokenKind.WORD

    @property
    def person_eligible(self) -> bool:
        return self.kind is TokenKind.WORD


@dataclass(frozen=True)
class PersonCounts:
    first: int = 0
    second: int = 0
    third: int = 0
    ambiguous: int = 0

    @property
    def total(self) -> int:
        """Unambiguous person tags, the percentage denominator."""
        return self.first + self.second + self.third

    def __add__(self, other: "PersonCounts") -> "PersonCounts":
        return PersonCounts(
            self.first + other.first,
            self.second + other.second,
            self.third + other.third,
            self.ambiguous + other.ambiguous,
        )


@dataclass(frozen=True)
class TaggingOptions:
    """Policies that change counts.

    ``ambiguity``: ``"exclude"`` drops first/third-syncretic verb forms from
    the person tallies, ``"third"`` counts them as third person.
    ``polite``: ``"second"`` tags usted/ustedes as addressee, ``"third"``
    follows their verb agreement instead.
    """

    ambiguity: str = "exclude"
    polite: str = "second"

    def __post_init__(self):
        if self.ambiguity not in ("exclude", "third"):
            raise ValueError(f"ambiguity policy must be 'exclude' or 'third', got {self.ambiguity!r}")
        if self.polite not in ("second", "third"):
            raise ValueError(f"polite policy must be 'second' or 'third', got {self.polite!r}")


_CLASSES = {"first", "second", "third", "first|third", "polite", "none"}
_UNAMBIGUOUS = {"first", "second", "third"}


@dataclass(frozen=True)
class Lexicon:
    version: str
    pronouns: dict[str, str]
    verbs: dict[str, str]
    suffixes: dict[str, tuple[str, str]]  # suffix -> (tense, class)
    min_stem: int = 2
    _suffix_lengths: tuple[int, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        for table_name, table in (("pronoun", self.pronouns), ("verb", self.verbs)):
            for form, cls in table.items():
                if cls not in _CLASSES:
                    raise LexiconError(f"{table_name} {form!r}: unknown class {cls!r}")
        for suffix, (_, cls) in self.suffixes.items():
            if cls not in _CLASSES - {"polite"}:
                raise LexiconError(f"suffix {suffix!r}: unknown class {cls!r}")
        for form in self.pronouns.keys() & self.verbs.keys():
            a, b = self.pronouns[form], self.verbs[form]
            if a in _UNAMBIGUOUS and b in _UNAMBIGUOUS and a != b:
                raise LexiconError(f"{form!r} is both {a} (pronoun) and {b} (verb)")
        lengths = tuple(sorted({len(s) for s in self.suffixes}, reverse=True))
        object.__setattr__(self, "_suffix_lengths", lengths)

    @classmethod
    def parse(cls, text: str, origin: str = "<string>") -> "Lexicon":
        sections: dict[str, dict] = {"meta": {}, "pronoun": {}, "verb": {}, "suffix": {}}
        current = None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("[") and line.endswith("]"):
                current = line[1:-1].strip()
                if current not in sections:
                    raise LexiconError(f"{origin}:{lineno}: unknown section [{current}]")
                continue
            if current is None:
                raise LexiconError(f"{origin}:{lineno}: entry outside any section")
            cols = [c.strip() for c in raw.rstrip("\r\n").split("\t")]
            want = 3 if current == "suffix" else 2
            if len(cols) != want:
                raise LexiconError(f"{origin}:{lineno}: expected {want} tab-separated columns")
            key = normalize(cols[0]) if current != "meta" else cols[0]
            value = (cols[1], cols[2]) if current == "suffix" else cols[1]
            table = sections[current]
            if key in table and table[key] != value:
                raise LexiconError(f"{origin}:{lineno}: conflicting entries for {key!r}")
            table[key] = value
        meta = sections["meta"]
        if "version" not in meta:
            raise LexiconError(f"{origin}: [meta] must define a version")
        return cls(
            version=meta["version"],
            pronouns=sections["pronoun"],
            verbs=sections["verb"],
            suffixes=sections["suffix"],
            min_stem=int(meta.get("min_stem", 2)),
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "Lexicon":
        path = Path(path)
        return cls.parse(path.read_text(encoding="utf-8"), str(path))

    def match_suffix(self, form: str) -> tuple[str, str, str] | None:
        """Longest suffix rule matching ``form``: ``(suffix, tense, class)``."""
        for n in self._suffix_lengths:
            if len(form) - n < self.min_stem:
                continue
            hit = self.suffixes.get(form[-n:])
            if hit is not None:
                return form[-n:], hit[0], hit[1]
        return None


@lru_cache(maxsize=1)
def default_lexicon() -> Lexicon:
    text = resources.files("ingroup_index").joinpath("data/lexicon_es.tsv").read_text(encoding="utf-8")
    return Lexicon.parse(text, "lexicon_es.tsv")


# ---------------------------------------------------------------------------
# tokenization

_TOKEN_RE = re.compile(
    r"(?P<url>(?:https?://|www\.)\S+)"
    r"|(?P<mention>@\w+)"
    r"|(?P<hashtag>#\w+)"
    r"|(?P<word>(?:[^\W_]|[\u0300-\u036f])+)",
    re.UNICODE,
)
_ELONGATION_RE = re.compile(r"(.)\1{2,}")


def normalize(surface: str) -> str:
    """NFC, lowercase, runs of three or more identical characters cut to two."""
    s = unicodedata.normalize("NFC", surface).lower()
    return _ELONGATION_RE.sub(r"\1\1", s)


def tokenize(text: str) -> list[Token]:
    tokens = []
    byte_pos = 0
    char_pos = 0
    for m in _TOKEN_RE.finditer(text):
        start = byte_pos + len(text[char_pos : m.start()].encode("utf-8"))
        end = start + len(m.group().encode("utf-8"))
        byte_pos, char_pos = end, m.end()
        kind = TokenKind(m.lastgroup)
        tokens.append(Token(m.group(), normalize(m.group()), (start, end), kind))
    return tokens


# ---------------------------------------------------------------------------
# tagging

_PERSON_BY_CLASS = {
    "first": Person.FIRST,
    "second": Person.SECOND,
    "third": Person.THIRD,
    "first|third": Person.AMBIGUOUS,
}


def tag_person(token: Token, lexicon: Lexicon | None = None, options: TaggingOptions | None = None) -> PersonTag:
    """Pronoun table, then listed verb forms, then suffix rules."""
    if not token.person_eligible:
        return NON_PERSON
    lexicon = lexicon or default_lexicon()
    options = options or TaggingOptions()
    form = token.normalized

    cls = lexicon.pronouns.get(form)
    if cls is not None:
        if cls == "polite":
            return PersonTag(Person.SECOND if options.polite == "second" else Person.THIRD, Source.PRONOUN)
        if cls == "none":
            return NON_PERSON
        return PersonTag(_PERSON_BY_CLASS[cls], Source.PRONOUN)

    cls = lexicon.verbs.get(form)
    if cls is None and form.isalpha():
        hit = lexicon.match_suffix(form)
        if hit is not None:
            cls = hit[2]
    if cls is None or cls in ("none", "polite"):
        return NON_PERSON
    return PersonTag(_PERSON_BY_CLASS[cls], Source.VERB)


def tag_text(text: str, lexicon: Lexicon | None = None, options: TaggingOptions | None = None) -> list[tuple[Token, PersonTag]]:
    lexicon = lexicon or default_lexicon()
    return [(tok, tag_person(tok, lexicon, options)) for tok in tokenize(text)]


def tally(tags: Iterable[PersonTag], options: TaggingOptions | None = None) -> PersonCounts:
    options = options or TaggingOptions()
    first = second = third = ambiguous = 0
    for tag in tags:
        p = tag.person
        if p is Person.FIRST:
            first += 1
        elif p is Person.SECOND:
            second += 1
        elif p is Person.THIRD:
            third += 1
        elif p is Person.AMBIGUOUS:
            ambiguous += 1
            if options.ambiguity == "third":
                third += 1
    return PersonCounts(first, second, third, ambiguous)


def count_persons(text: str, lexicon: Lexicon | None = None, options: TaggingOptions | None = None) -> PersonCounts:
    return tally((tag for _, tag in tag_text(text, lexicon, options)), options)
