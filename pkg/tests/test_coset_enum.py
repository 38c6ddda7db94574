import random

import pytest

from conftest import A4_TEXT, HIGMAN_TEXT
from fpgroups.certificates import CERTIFIED, REFUTED, UNKNOWN
from fpgroups.coset_enum import (
    CosetTable,
    EnumerationLimits,
    ResourceExhausted,
    certify_no_finite_quotients,
    check_coset_table,
    low_index_subgroups,
    standardize,
    todd_coxeter,
)
from fpgroups.presentations import Presentation, parse_presentation
from fpgroups.words import parse_word
from oracles import transitive_action_counts

INDEX_CASES = [
    (A4_TEXT, [], 12),
    (A4_TEXT, ["a"], 6),
    (A4_TEXT, ["b"], 4),
    ("<a | a^5>", [], 5),
    ("<a,b | a^2, b^3, (a*b)^5>", [], 60),
    ("<a,b | a^2, b^3, (a*b)^5>", ["a", "b"], 1),
    ("<a,b | a^2, b^3, (a*b)^5>", ["a"], 30),
    ("<a,b | a^2, b^2, (a*b)^3>", [], 6),
    ("<a,b | a^4, a^2*b^-2, b^-1*a*b*a>", [], 8),
    ("<a,b | [a,b], a^3, b^4>", [], 12),
    ("<a,b | [a,b], a^3, b^4>", ["a*b"], 1),
    ("<a,b | a^2, b^3, a*b>", [], 1),
    ("<x | >", ["x^3"], 3),
]


@pytest.mark.parametrize("strategy", ["hlt", "felsch"])
@pytest.mark.parametrize("text,subgroup,index", INDEX_CASES)
def test_index_and_independent_check(text, subgroup, index, strategy):
    p = parse_presentation(text)
    h = [parse_word(s, p.generators) for s in subgroup]
    ct = todd_coxeter(p, h, strategy=strategy)
    assert ct.complete
    assert ct.index == index
    assert check_coset_table(p, ct, h) == []


def test_strategies_give_identical_standard_tables():
    p = parse_presentation("<a,b | a^2, b^3, (a*b)^5>")
    h = [parse_word("a*b")]
    assert todd_coxeter(p, h).table == todd_coxeter(p, h, strategy="felsch").table


def test_relator_order_does_not_matter():
    p = parse_presentation(A4_TEXT)
    q = Presentation(p.generators, tuple(reversed(p.relators)))
    assert todd_coxeter(p).table == todd_coxeter(q).table


def test_infinite_index_exhausts():
    p = parse_presentation("<a,b | [a,b]>")
    with pytest.raises(ResourceExhausted) as info:
        todd_coxeter(p, [parse_word("a")], EnumerationLimits(max_cosets=500))
    assert info.value.size > 0


def test_time_limit():
    p = parse_presentation("<a,b | [a,b]>")
    with pytest.raises(ResourceExhausted):
        todd_coxeter(p, [], EnumerationLimits(max_cosets=10**7, max_time=0.05))


def test_checker_rejects_bad_tables():
    p = parse_presentation("<a | a^3>")
    good = todd_coxeter(p)
    assert check_coset_table(p, good) == []
    wrong = CosetTable(("a",), [[1, 1], [0, 0]])
    assert check_coset_table(p, wrong)  # a^3 does not close on 2 points
    broken = CosetTable(("a",), [[1, 2], [2, 0], [0, 0]])
    assert check_coset_table(p, broken)
    assert check_coset_table(p, good, [parse_word("a")])  # a does not fix coset 0


def test_table_json_is_one_based():
    ct = todd_coxeter(parse_presentation("<a | a^2>"))
    obj = ct.to_json()
    assert obj["table"] == [[2, 2], [1, 1]]
    assert obj["columns"] == ["a", "a^-1"]


def test_standardize_is_canonical():
    table = [[2, 1], [0, 2], [1, 0]]  # a 3-cycle in a non-standard labelling
    assert standardize(table) == [[1, 2], [2, 0], [0, 1]]


ORACLE_CASES = [
    ("<a,b | >", 3),
    (A4_TEXT, 4),
    (HIGMAN_TEXT, 3),
    ("<a | a>", 3),
    ("<a,b | a^2, b^2>", 4),
    ("<a,b | a^2, b^2, (a*b)^3>", 4),
    ("<a,b | [a,b]>", 4),
]


@pytest.mark.parametrize("text,max_index", ORACLE_CASES)
def test_low_index_matches_transitive_action_count(text, max_index):
    p = parse_presentation(text)
    tables = low_index_subgroups(p, max_index)
    rels = [r.letters for r in p.relators]
    for n in range(2, max_index + 1):
        found = sum(1 for t in tables if t.index == n)
        assert found == transitive_action_counts(p.generators, rels, n), n
    for t in tables:
        assert check_coset_table(p, t) == []


def test_low_index_known_counts():
    assert len(low_index_subgroups(parse_presentation("<a,b | >"), 2)) == 3
    assert len(low_index_subgroups(parse_presentation("<a,b | >"), 3)) == 16
    a4 = low_index_subgroups(parse_presentation(A4_TEXT), 4)
    assert [t.index for t in a4] == [3, 4, 4, 4, 4]
    assert [t.conjugacy_class for t in a4] == [0, 1, 1, 1, 1]
    assert a4[1].metadata["conjugates"] == 4
    assert low_index_subgroups(parse_presentation(HIGMAN_TEXT), 6) == []


def test_low_index_monotone_in_bound():
    p = parse_presentation("<a,b | a^2, b^3>")
    small = {tuple(t.flat()) for t in low_index_subgroups(p, 4)}
    large = {tuple(t.flat()) for t in low_index_subgroups(p, 5)}
    assert small <= large
    assert all(len(t) // 4 <= 4 for t in small)


def test_low_index_stable_under_relator_permutation():
    rng = random.Random(3)
    p = parse_presentation("<a,b | a^2, b^3, (a*b)^4>")
    rels = list(p.relators)
    base = [t.table for t in low_index_subgroups(p, 6)]
    for _ in range(3):
        rng.shuffle(rels)
        q = Presentation(p.generators, tuple(rels))
        assert [t.table for t in low_index_subgroups(q, 6)] == base


def test_certify_higman():
    cert = certify_no_finite_quotients(parse_presentation(HIGMAN_TEXT), 6)
    assert cert.status == CERTIFIED
    assert cert.bound == 6
    assert cert.input_digest.startswith("sha256:")


def test_certify_refutes_with_checkable_witness():
    p = parse_presentation("<a | >")
    cert = certify_no_finite_quotients(p, 2)
    assert cert.status == REFUTED
    w = cert.evidence["witness"]
    table = [[x - 1 for x in row] for row in w["table"]]
    assert check_coset_table(p, CosetTable(p.generators, table)) == []
    assert w["index"] == 2


def test_certify_unknown_on_node_limit():
    cert = certify_no_finite_quotients(parse_presentation(HIGMAN_TEXT), 6, EnumerationLimits(max_nodes=10))
    assert cert.status == UNKNOWN


def test_certify_trivial_group():
    assert certify_no_finite_quotients(parse_presentation("<a | a>"), 5).status == CERTIFIED
