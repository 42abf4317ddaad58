from fractions import Fraction

import pytest

from stagedtrees import load_fixture
from stagedtrees.errors import (
    MissingSymbol,
    NodeTooSmall,
    NormalizationViolation,
    SymbolRepeat,
)
from stagedtrees.polynomial import (
    Factorization,
    Poly,
    atom_probabilities,
    atomic_monomial,
    evaluate,
    expand,
    factorization_to_text,
    interpolating_polynomial,
    nested_factorization,
    poly_equal,
    to_text,
)
from stagedtrees.trees import Label, StagedTree, paths


def test_poly_merges_and_compares():
    p = Poly([frozenset({"a"}), frozenset({"a"}), frozenset({"a"}),
              frozenset({"b", "c"})])
    assert p.coeffs[frozenset({"a"})] == 3
    q = Poly({frozenset({"b", "c"}): 1, frozenset({"a"}): 3})
    assert p == q and hash(p) == hash(q)
    assert to_text(q) == "3*a + b*c"
    assert Poly({frozenset({"a"}): 0}) == Poly([])  # zero terms drop


def test_atomic_monomial_and_square_detection():
    t = load_fixture("fig1")
    first = paths(t)[0]
    assert atomic_monomial(t, first) == frozenset({"se_pp", "le_high_b"})
    bad = StagedTree(
        "r",
        [("r", "a", Label.of("p")), ("r", "b", Label.of("q")),
         ("a", "c", Label.of("p")), ("a", "d", Label.of("q"))],
    )
    with pytest.raises(SymbolRepeat):
        atomic_monomial(bad, paths(bad)[0])


def test_interpolating_polynomial_fig1():
    p = interpolating_polynomial(load_fixture("fig1"))
    assert len(p.coeffs) == 8
    assert all(v == 1 for v in p.coeffs.values())
    assert frozenset({"se_mm", "le_low_g"}) in p.coeffs


def test_factorization_invariants():
    with pytest.raises(NodeTooSmall):
        Factorization.of((Label.of("a"), None))
    with pytest.raises(ValueError):
        Factorization.of((Label.of("a"), None), (Label.of("a"), None))
    f = Factorization.of((Label.of("b"), None), (Label.of("a"), None))
    g = Factorization.of((Label.of("a"), None), (Label.of("b"), None))
    assert f == g  # entry order is irrelevant


def test_nested_factorization_expands_back():
    for name in ("fig1", "fig2a", "fig2b", "chds_a", "chds_b"):
        t = load_fixture(name)
        f = nested_factorization(t)
        assert expand(f) == interpolating_polynomial(t), name


def test_factorization_text_shape():
    f = nested_factorization(load_fixture("fig2b"))
    assert factorization_to_text(f) == (
        "th1 + th4*(th2 + th3*(th6 + th7 + th8)) + th5*(th2 + th3)"
    )


def test_poly_equal_is_formal():
    a = interpolating_polynomial(load_fixture("fig2a"))
    b = interpolating_polynomial(load_fixture("fig2b"))
    assert poly_equal(a, b)
    assert not poly_equal(a, interpolating_polynomial(load_fixture("fig1")))


def test_evaluate_indicator_and_dict_coefficients():
    t = load_fixture("fig1")
    theta = {
        "se_pp": Fraction(1, 4), "se_pm": Fraction(1, 4),
        "se_mp": Fraction(1, 4), "se_mm": Fraction(1, 4),
        "le_high_b": Fraction(1, 2), "le_low_b": Fraction(1, 2),
        "le_high_g": Fraction(1, 3), "le_low_g": Fraction(2, 3),
    }
    assert evaluate(t, 1, theta, normalized=True) == 1
    # indicator of the event "blue high life events"
    event = [frozenset({"se_pp", "le_high_b"}), frozenset({"se_pm", "le_high_b"})]
    assert evaluate(t, event, theta) == Fraction(1, 4)
    weights = {frozenset({"se_mm", "le_low_g"}): 3}
    assert evaluate(t, weights, theta) == 3 * Fraction(1, 4) * Fraction(2, 3)
    assert evaluate(t, lambda m: 2, theta) == 2


def test_evaluate_checks():
    t = load_fixture("fig1")
    with pytest.raises(MissingSymbol):
        evaluate(t, 1, {"se_pp": 0.5})
    skew = {
        "se_pp": 0.5, "se_pm": 0.5, "se_mp": 0.5, "se_mm": 0.5,
        "le_high_b": 0.5, "le_low_b": 0.5, "le_high_g": 0.5, "le_low_g": 0.5,
    }
    with pytest.raises(NormalizationViolation):
        evaluate(t, 1, skew, normalized=True)
    assert evaluate(t, 1, skew) == 2.0  # unnormalized evaluation is fine


def test_atom_probabilities_sum_to_one():
    t = load_fixture("chds_b")
    theta = {}
    for v in t.non_leaves():
        floret = t.floret(v)
        for lab in floret:
            theta.setdefault(lab.key(), Fraction(1, len(floret)))
    # composite labels are assigned directly by key
    probs = atom_probabilities(t, theta)
    assert len(probs) == 24
    assert sum(probs.values()) == 1
