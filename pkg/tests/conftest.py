import random

import pytest
from hypothesis import strategies as st

from fpgroups.presentations import Presentation, parse_presentation
from fpgroups.words import Word

HIGMAN_TEXT = "<a,b,c,d | a*b*a^-1 = b^2, b*c*b^-1 = c^2, c*d*c^-1 = d^2, d*a*d^-1 = a^2>"
GENUS2_TEXT = "<a,b,c,d | [a,b]*[c,d]>"
A4_TEXT = "<a,b | a^2, b^3, (a*b)^3>"


def letters(names):
    return st.tuples(st.sampled_from(names), st.sampled_from((1, -1)))


def raw_words(names, max_size=12):
    return st.lists(letters(names), max_size=max_size)


def words(names, max_size=12):
    return raw_words(names, max_size).map(Word)


def random_word(rng: random.Random, names, length) -> Word:
    return Word([(rng.choice(names), rng.choice((1, -1))) for _ in range(length)])


def random_presentation(rng: random.Random, max_gens=4, max_rels=4, max_len=10) -> Presentation:
    pool = ["a", "b", "c", "d", "x", "y", "t", "nu", "g1", "g2", "h_1"]
    gens = tuple(rng.sample(pool, rng.randint(1, max_gens)))
    rels = []
    for _ in range(rng.randint(0, max_rels)):
        w = random_word(rng, gens, rng.randint(1, max_len))
        if w:
            rels.append(w)
    return Presentation(gens, tuple(rels))


@pytest.fixture(scope="session")
def higman_p():
    return parse_presentation(HIGMAN_TEXT)


@pytest.fixture(scope="session")
def higman_rips(higman_p):
    from fpgroups.rips import rips_wise

    return rips_wise(higman_p)
