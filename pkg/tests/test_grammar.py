import pytest

from stagedtrees.errors import ParseError, SymbolRepeat
from stagedtrees.grammar import parse_factorization, parse_polynomial
from stagedtrees.polynomial import (
    Poly,
    expand,
    factorization_to_text,
    to_text,
)


def test_parse_flat_polynomial():
    p = parse_polynomial("a + b*c + c*d")
    assert p == Poly([frozenset({"a"}), frozenset({"b", "c"}),
                      frozenset({"c", "d"})])


def test_parse_nested_polynomial_expands():
    p = parse_polynomial("a*(b + c) + d")
    assert p == parse_polynomial("a*b + a*c + d")


def test_parse_factorization_roundtrip():
    text = "th1 + th4*(th2 + th3*(th6 + th7 + th8)) + th5*(th2 + th3)"
    f = parse_factorization(text)
    assert factorization_to_text(f) == text
    assert to_text(expand(f)) == (
        "th1 + th2*th4 + th2*th5 + th3*th5 + th3*th4*th6 + th3*th4*th7 "
        "+ th3*th4*th8"
    )


def test_composite_labels_in_terms():
    f = parse_factorization("a*b + a*c*(d + e)")
    keys = sorted(label.key() for label, _ in f.entries)
    assert keys == ["a*b", "a*c"]


def test_whitespace_and_newlines_tolerated():
    assert parse_polynomial(" a +\n b * c ") == parse_polynomial("a+b*c")


def test_parse_errors_carry_location():
    with pytest.raises(ParseError) as exc:
        parse_polynomial("a + + b")
    assert exc.value.line == 1
    with pytest.raises(ParseError):
        parse_polynomial("a + (b")
    with pytest.raises(ParseError):
        parse_polynomial("")
    with pytest.raises(ParseError):
        parse_polynomial("a + b$c")
    with pytest.raises(ParseError):
        parse_factorization("a + b*()")


def test_single_entry_bracket_rejected_in_factorization():
    # every sum in a tree-compatible bracketing has >= 2 entries
    with pytest.raises((ParseError, Exception)):
        parse_factorization("a*(b)")


def test_symbol_repeat_detected():
    with pytest.raises((ParseError, SymbolRepeat)):
        parse_polynomial("a*(a + b)")
