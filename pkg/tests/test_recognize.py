"""Bounded recognition for schema-free grammars."""

from __future__ import annotations

from itertools import product

import pytest

from mcfgkit import (
    Grammar,
    Instance,
    InvalidGrammarError,
    Rule,
    SchemaPresentError,
    bounded_language,
    check_derivation,
    make_grammar,
    recognize_bounded,
    term,
    var,
)

from wordgen import abcd_oracle


def abcd_word(j: int) -> tuple[str, ...]:
    return ("a",) * j + ("b",) * j + ("c",) * j + ("d",) * j


def test_recognizes_counted_quads(abcd_grammar):
    for j in range(4):
        accepted, witness = recognize_bounded(abcd_grammar, abcd_word(j))
        assert accepted
        final = check_derivation(abcd_grammar, witness)
        assert final == Instance("S", (abcd_word(j),))


@pytest.mark.parametrize(
    "word",
    ["abc", "abcdabcd", "aabbccd", "dcba", "aabcd", "ab"],
)
def test_rejects_near_misses(abcd_grammar, word):
    accepted, witness = recognize_bounded(abcd_grammar, tuple(word))
    assert not accepted
    assert witness is None


def test_agrees_with_oracle_on_short_strings(abcd_grammar):
    for length in range(7):
        for chars in product("abcd", repeat=length):
            accepted, _ = recognize_bounded(abcd_grammar, chars)
            assert accepted == abcd_oracle(chars), chars


def test_bounded_language_enumerates_start_words(abcd_grammar):
    assert bounded_language(abcd_grammar, 8) == {abcd_word(0), abcd_word(1), abcd_word(2)}
    assert bounded_language(abcd_grammar, 3) == {abcd_word(0)}


def test_rejects_grammars_with_schemas():
    with pytest.raises(SchemaPresentError):
        recognize_bounded(make_grammar(1), ("a1", "A1"))
    with pytest.raises(SchemaPresentError):
        bounded_language(make_grammar(1), 4)


def test_rejects_invalid_grammars():
    broken = Grammar((), (("S", 2),), "S", ())
    with pytest.raises(InvalidGrammarError):
        recognize_bounded(broken, ())


def test_witness_is_deterministic(abcd_grammar):
    w = abcd_word(2)
    first = recognize_bounded(abcd_grammar, w)
    second = recognize_bounded(abcd_grammar, w)
    assert first == second


def test_witness_prefers_smallest_rule_index():
    g = Grammar(
        terminals=("a",),
        nonterminals=(("S", 1), ("A", 1)),
        start="S",
        rules=(
            Rule("S", ((var("x"),),), (("A", ("x",)),)),
            Rule("S", ((var("x"),),), (("A", ("x",)),)),
            Rule("A", ((term("a"),),)),
        ),
    )
    accepted, witness = recognize_bounded(g, ("a",))
    assert accepted
    assert witness.steps[-1].rule_index == 0


def test_copying_rules_are_recognized():
    # S(x a) <- A(x); A derives "b"; language is exactly {ba}
    g = Grammar(
        terminals=("a", "b"),
        nonterminals=(("S", 1), ("A", 1)),
        start="S",
        rules=(
            Rule("A", ((term("b"),),)),
            Rule("S", ((var("x"), term("a")),), (("A", ("x",)),)),
        ),
    )
    assert recognize_bounded(g, ("b", "a"))[0]
    assert not recognize_bounded(g, ("a", "b"))[0]
    assert bounded_language(g, 5) == {("b", "a")}


def test_empty_word_handling(abcd_grammar):
    accepted, witness = recognize_bounded(abcd_grammar, ())
    assert accepted
    assert check_derivation(abcd_grammar, witness) == Instance("S", ((),))
