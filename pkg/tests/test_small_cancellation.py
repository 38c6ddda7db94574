import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import A4_TEXT, GENUS2_TEXT, HIGMAN_TEXT, random_word
from fpgroups.presentations import Presentation, parse_presentation
from fpgroups.small_cancellation import (
    CancellationReport,
    DehnSolver,
    SymmetrizedRelatorSet,
    check_witness,
    dehn_reduce,
    sc_verify,
)
from fpgroups.words import Word, cyclic_reduce, parse_word
from oracles import brute_force_lambda


def oracle_lambda(p):
    return brute_force_lambda([p.codes(r) for r in p.relators], lambda c: c ^ 1)


@pytest.mark.parametrize(
    "text,expected,passes",
    [
        (GENUS2_TEXT, Fraction(1, 8), True),
        ("<a,b | (a*b)^3>", Fraction(5, 6), False),
        (A4_TEXT, Fraction(5, 6), False),
        (HIGMAN_TEXT, Fraction(1, 5), False),
        ("<a,b | a>", Fraction(0), True),
        ("<a,b,c,d,e,f | [a,b]*[c,d]*[e,f]>", Fraction(1, 12), True),
    ],
)
def test_known_lambdas(text, expected, passes):
    p = parse_presentation(text)
    rep = sc_verify(p)
    assert rep.lambda_ == expected
    assert rep.passes == passes == rep.passes_sixth
    assert check_witness(p, rep)
    assert rep.lambda_ == oracle_lambda(p)


def test_proper_power_is_reported():
    rep = sc_verify(parse_presentation("<a,b | (a*b)^3>"))
    assert rep.proper_powers and rep.proper_powers[0]["exponent"] == 3
    assert rep.max_piece_length == 5


@given(st.integers(0, 10**6))
@settings(max_examples=120, deadline=None)
def test_lambda_matches_brute_force(seed):
    rng = random.Random(seed)
    gens = ("a", "b", "c")[: rng.randint(1, 3)]
    rels = []
    for _ in range(rng.randint(1, 3)):
        w, _ = cyclic_reduce(random_word(rng, gens, rng.randint(1, 9)))
        if w:
            rels.append(w)
    if not rels:
        return
    p = Presentation(gens, tuple(rels))
    rep = sc_verify(p)
    assert rep.lambda_ == oracle_lambda(p)
    assert check_witness(p, rep)


def test_backends_agree():
    from fpgroups.kernels import available_backends

    p = parse_presentation(HIGMAN_TEXT)
    reports = [sc_verify(p, backend=b).to_json() for b in available_backends()]
    assert all(r == reports[0] for r in reports)


def test_lambda_target_threshold():
    p = parse_presentation(GENUS2_TEXT)
    assert sc_verify(p, Fraction(1, 8)).passes is False
    assert sc_verify(p, "1/7").passes is True


def test_tampered_witness_fails():
    p = parse_presentation(HIGMAN_TEXT)
    rep = sc_verify(p)
    bad = CancellationReport.from_json(rep.to_json())
    bad.witness = dict(bad.witness, piece_length=bad.witness["piece_length"] + 1)
    assert not check_witness(p, bad)


def test_symmetrized_set_size():
    sym = SymmetrizedRelatorSet.build(parse_presentation(GENUS2_TEXT))
    assert len(sym) == 16
    assert len(set(sym.elements())) == 16


def test_report_json_round_trip():
    rep = sc_verify(parse_presentation(GENUS2_TEXT))
    assert CancellationReport.from_json(rep.to_json()) == rep


# ---------------------------------------------------------------- Dehn


def trivial_word(rng, p, count):
    w = Word()
    for _ in range(count):
        c = random_word(rng, p.generators, rng.randint(0, 8))
        r = rng.choice(p.relators)
        if rng.random() < 0.5:
            r = r.inverse()
        w = w * c * r * c.inverse()
    return w


def test_dehn_genus_two_trivial_words():
    p = parse_presentation(GENUS2_TEXT)
    solver = DehnSolver(p)
    rng = random.Random(11)
    for _ in range(100):
        w = trivial_word(rng, p, rng.randint(1, 3))
        red, lengths = solver.reduce(w)
        assert not red
        assert all(a > b for a, b in zip(lengths, lengths[1:]))


def test_dehn_keeps_nontrivial_words():
    p = parse_presentation(GENUS2_TEXT)
    for text in ("a", "a*b*a", "[a,b]", "a^5*c^-2"):
        assert dehn_reduce(parse_word(text), p)


def test_dehn_replaces_long_relator_pieces():
    p = parse_presentation(GENUS2_TEXT)
    # five letters of the eight-letter relator become the inverse of the other three
    w = parse_word("a^-1*b^-1*a*b*c^-1")
    assert dehn_reduce(w, p) == parse_word("d^-1*c^-1*d")


def test_dehn_output_is_irreducible():
    p = parse_presentation(GENUS2_TEXT)
    solver = DehnSolver(p)
    rng = random.Random(5)
    for _ in range(50):
        w = random_word(rng, p.generators, 30)
        red, _ = solver.reduce(w)
        assert solver.find(p.codes(red)) is None


def test_dehn_refuses_non_sixth():
    with pytest.raises(ValueError):
        DehnSolver(parse_presentation(HIGMAN_TEXT))


def test_dehn_on_rips_output(higman_rips):
    g = higman_rips.gamma
    solver = DehnSolver(g, higman_rips.sc_report)
    rng = random.Random(2)
    for _ in range(10):
        red, lengths = solver.reduce(trivial_word(rng, g, rng.randint(1, 3)))
        assert not red
        assert all(a > b for a, b in zip(lengths, lengths[1:]))
    assert solver.reduce(parse_word("a*nu1", g.generators))[0]
