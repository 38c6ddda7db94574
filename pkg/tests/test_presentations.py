import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import HIGMAN_TEXT, random_presentation
from fpgroups.homology import h1
from fpgroups.presentations import (
    MarkedSubgroup,
    Presentation,
    digest,
    direct_product,
    format_presentation,
    least_rotation,
    load_presentation,
    parse_presentation,
    presentation_from_json,
    presentation_to_json,
    quotient_by,
    relator_set,
    tietze_simplify,
)
from fpgroups.words import AlphabetError, ParseError, Word, parse_word, rotate


@given(st.lists(st.integers(0, 3), max_size=12))
def test_least_rotation_matches_brute_force(seq):
    if not seq:
        return
    k = least_rotation(seq)
    rotations = [seq[i:] + seq[:i] for i in range(len(seq))]
    assert seq[k:] + seq[:k] == min(rotations)


@given(st.integers(0, 10**6))
@settings(max_examples=60)
def test_text_round_trip(seed):
    p = random_presentation(random.Random(seed))
    text = format_presentation(p)
    q = parse_presentation(text)
    assert q == p
    assert format_presentation(q) == text
    assert presentation_from_json(json.loads(json.dumps(presentation_to_json(p)))) == p


@given(st.integers(0, 10**6), st.integers(0, 20), st.booleans())
@settings(max_examples=60)
def test_canonical_form_ignores_rotation_inversion_order(seed, k, invert):
    rng = random.Random(seed)
    p = random_presentation(rng)
    rels = [rotate(r, k) for r in p.relators]
    if invert:
        rels = [r.inverse() for r in rels]
    rng.shuffle(rels)
    q = Presentation(p.generators, tuple(rels))
    assert digest(q) == digest(p)
    assert relator_set(q) == relator_set(p)


def test_digest_distinguishes():
    assert digest(parse_presentation("<a|a^2>")) != digest(parse_presentation("<a|a^3>"))
    assert digest(parse_presentation("<a,b|a>")) != digest(parse_presentation("<a,b|b>"))
    assert digest(parse_presentation("<a|a^2>")).startswith("sha256:")


def test_relations_become_relators():
    p = parse_presentation(HIGMAN_TEXT)
    assert p.rank == 4 and len(p.relators) == 4
    assert p.relators[0] == parse_word("a*b*a^-1*b^-2")


def test_relators_are_cyclically_reduced_and_nonempty():
    p = parse_presentation("<a,b | b*a*b^-1, a*a^-1, 1>")
    assert p.relators == (parse_word("a"),)


@pytest.mark.parametrize(
    "text",
    ["<a,b | a^2", "<a,a | a>", "<a | b>", "a | a>", "<a | a^>", "<a | a = >", "<a | a > x", "<1 | a>"],
)
def test_malformed_presentations(text):
    with pytest.raises(ParseError) as info:
        parse_presentation(text)
    assert info.value.line >= 1 and info.value.column >= 1


def test_parse_error_position_multiline():
    with pytest.raises(ParseError) as info:
        parse_presentation("<a, b |\n  a^2,\n  b^ >")
    assert (info.value.line, info.value.column) == (3, 6)


def test_load_presentation_accepts_json_and_embedded():
    p = parse_presentation(HIGMAN_TEXT)
    obj = presentation_to_json(p)
    assert load_presentation(json.dumps(obj)) == p
    assert load_presentation(json.dumps({"gamma": obj})) == p


def test_tietze_eliminates_and_preserves_h1():
    p = parse_presentation("<a,b,c | c*a*b^-1, a^3, b^2*c^-1*a^-1>")
    s = tietze_simplify(p)
    assert s.rank < p.rank
    assert h1(s) == h1(p)


@given(st.integers(0, 10**6))
@settings(max_examples=50, deadline=None)
def test_tietze_preserves_h1_randomly(seed):
    p = random_presentation(random.Random(seed))
    assert h1(tietze_simplify(p)) == h1(p)


def test_tietze_trivial_group():
    s = tietze_simplify(parse_presentation("<a | a>"))
    assert s.generators == () and s.relators == ()
    assert not s.metadata["incomplete"]


def test_tietze_budget_and_protect():
    p = parse_presentation("<a,b,c | a*b^-1, b*c^-1>")
    s0 = tietze_simplify(p, max_moves=0)
    assert s0.rank == 3 and s0.metadata["incomplete"]
    s1 = tietze_simplify(p, max_moves=1)
    assert s1.rank == 2
    kept = tietze_simplify(p, protect=("a", "b", "c"))
    assert kept.rank == 3


def test_tietze_keeps_higman():
    p = parse_presentation(HIGMAN_TEXT)
    s = tietze_simplify(p)
    assert s.rank == 4 and relator_set(s) == relator_set(p)


def test_quotient_by():
    p = parse_presentation("<a,b | [a,b]>")
    q = quotient_by(p, [parse_word("b")])
    assert q.generators == ("a",) and q.relators == ()


def test_direct_product_counts_and_renaming():
    p = parse_presentation("<a,b | a^2>")
    q = parse_presentation("<a,t | t^3>")
    g = direct_product(p, q)
    assert g.generators == ("a", "b", "a_2", "t")
    assert len(g.relators) == 1 + 1 + 2 * 2
    assert g.metadata["renamed"] == {"a": "a_2"}
    assert str(h1(g)) == "Z/6 + Z + Z"


def test_marked_subgroup_checks_alphabet():
    p = parse_presentation("<a,b | a^2>")
    MarkedSubgroup(p, (parse_word("a*b"),), "H")
    with pytest.raises(AlphabetError):
        MarkedSubgroup(p, (Word.gen("z"),))


def test_metadata_does_not_affect_equality():
    p = parse_presentation("<a | a^2>")
    q = Presentation(p.generators, p.relators, {"note": 1})
    assert p == q and hash(p) == hash(q)
