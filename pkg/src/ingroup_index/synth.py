"""Synthetic Spanish tweet corpora with a controlled first/third-person mix.

Each tweet is drawn from one of three template pools: first-person
leaning (speaker or own group), third-person (others) and neutral (no
person tags). Templates avoid articles that double as clitic pronouns (la, los,
las) so their tag counts are known in advance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .corpus import Corpus, CorpusKind, Tweet, UserFeed

FIRST_TEMPLATES = (
    "Nosotros defendemos {obj} cada día",
    "Yo creo en {obj} y seguiremos trabajando",
    "Hoy vamos a luchar por {obj}",
    "Estoy orgulloso de {obj}",
    "Queremos {obj} para todos",
    "Trabajamos sin descanso por {obj}",
    "Siempre he defendido {obj} y nunca me rendiré",
    "Nuestro compromiso con {obj} es firme y cumpliremos",
    "Mañana presentaremos un plan para {obj}",
    "Gracias por acompañarnos, juntos ganamos {obj}",
)

THIRD_TEMPLATES = (
    "Ellos destruyen {obj} sin pudor",
    "Ellos mienten sobre {obj}",
    "Ellas nunca hablaron de {obj}",
    "Él dijo que {obj} no importa",
    "Quieren acabar con {obj} y ocultan sus planes",
    "Ellos recortaron {obj} y ahora fingen sorpresa",
    "Nunca respetaron {obj}",
    "Ellos siempre atacan {obj}",
    "Ellos votaron contra {obj} otra vez",
    "Prometieron {obj} y mintieron",
)

NEUTRAL_TEMPLATES = (
    "Buenos días desde Valencia",
    "Gran jornada en el parlamento",
    "Hoy debate sobre {obj}",
    "Última hora: nueva encuesta sobre {obj}",
    "Feliz fin de semana a todos",
    "Entrevista completa en https://example.org/entrevista",
)

OBJECTS = (
    "el empleo",
    "el campo",
    "el futuro",
    "educación pública",
    "sanidad pública",
    "nuestras familias",
    "nuestros barrios",
    "España",
    "el medio ambiente",
    "pensiones dignas",
)


@dataclass(frozen=True)
class TweetMix:
    """Probabilities for one group: a tweet is neutral with ``p_neutral``,
    otherwise third-person with ``p_third`` and first-person otherwise."""

    p_third: float = 0.5
    p_neutral: float = 0.2


def synth_tweet(rng: random.Random, mix: TweetMix) -> str:
    if rng.random() < mix.p_neutral:
        pool = NEUTRAL_TEMPLATES
    elif rng.random() < mix.p_third:
        pool = THIRD_TEMPLATES
    else:
        pool = FIRST_TEMPLATES
    return rng.choice(pool).format(obj=rng.choice(OBJECTS))


def _feed(rng, author, n_tweets, mix, label=None):
    tweets = tuple(
        Tweet(id=f"{author}-{i}", author_id=author, text=synth_tweet(rng, mix), label=label)
        for i in range(n_tweets)
    )
    return tweets


def synth_author_corpus(
    n_a: int = 100,
    n_b: int = 100,
    mix_a: TweetMix = TweetMix(p_third=0.6),
    mix_b: TweetMix = TweetMix(p_third=0.4),
    tweets_per_user: tuple[int, int] = (20, 30),
    seed: int = 0,
) -> Corpus:
    """Per-author corpus: ``n_a`` users labeled 1 drawing from ``mix_a``,
    then ``n_b`` users labeled 0 drawing from ``mix_b``."""
    rng = random.Random(seed)
    feeds = []
    for i in range(n_a + n_b):
        label, mix = (1, mix_a) if i < n_a else (0, mix_b)
        author = f"u{i:04d}"
        n = rng.randint(*tweets_per_user)
        feeds.append(UserFeed(author, _feed(rng, author, n, mix), label))
    return Corpus(CorpusKind.PER_AUTHOR, tuple(feeds), f"synthetic:authors:seed={seed}", "memory")


def synth_null_corpus(
    n_a: int = 100,
    n_b: int = 100,
    mix: TweetMix = TweetMix(p_third=0.5),
    tweets_per_user: tuple[int, int] = (20, 30),
    seed: int = 0,
) -> Corpus:
    """Every feed drawn from the same mix; labels then assigned by a seeded
    random split into groups of ``n_a`` (label 1) and ``n_b`` (label 0)."""
    rng = random.Random(seed)
    total = n_a + n_b
    labels = [1] * n_a + [0] * n_b
    rng.shuffle(labels)
    feeds = []
    for i in range(total):
        author = f"u{i:04d}"
        n = rng.randint(*tweets_per_user)
        feeds.append(UserFeed(author, _feed(rng, author, n, mix), labels[i]))
    return Corpus(CorpusKind.PER_AUTHOR, tuple(feeds), f"synthetic:null:seed={seed}", "memory")


def synth_tweet_corpus(
    n_authors: int = 60,
    mix_label1: TweetMix = TweetMix(p_third=0.6),
    mix_label0: TweetMix = TweetMix(p_third=0.4),
    tweets_per_label: tuple[int, int] = (5, 15),
    single_class_fraction: float = 0.1,
    seed: int = 0,
) -> Corpus:
    """Per-tweet labeled corpus. Most authors post under both labels; a
    ``single_class_fraction`` of them only under label 0, so they drop out
    of matched splits."""
    rng = random.Random(seed)
    feeds = []
    for i in range(n_authors):
        author = f"p{i:04d}"
        n0 = rng.randint(*tweets_per_label)
        n1 = 0 if rng.random() < single_class_fraction else rng.randint(*tweets_per_label)
        labels = [0] * n0 + [1] * n1
        rng.shuffle(labels)
        tweets = []
        for j, lab in enumerate(labels):
            mix = mix_label1 if lab == 1 else mix_label0
            tweets.append(Tweet(id=f"{author}-{j}", author_id=author, text=synth_tweet(rng, mix), label=lab))
        feeds.append(UserFeed(author, tuple(tweets)))
    return Corpus(CorpusKind.PER_TWEET, tuple(feeds), f"synthetic:tweets:seed={seed}", "memory")
