import itertools
import random

from conftest import oracle_tree_compatible, random_staged_tree

from stagedtrees.compat import (
    CompatSearchConfig,
    find_factorizations,
    is_tree_compatible,
    tree_from_factorization,
)
from stagedtrees.grammar import parse_polynomial
from stagedtrees.polynomial import (
    Poly,
    expand,
    interpolating_polynomial,
    nested_factorization,
)
from stagedtrees.trees import validate


def test_three_cycle_is_proven_incompatible():
    verdict = is_tree_compatible(parse_polynomial("a*b + b*c + c*a"))
    assert verdict.status == "no"
    assert oracle_tree_compatible(
        frozenset({frozenset("ab"), frozenset("bc"), frozenset("ca")})
    ) is False


def test_simple_positive_cases():
    for text in ("a + b", "a + b*c + b*d", "x*(p + q) + y*(p + q)"):
        verdict = is_tree_compatible(parse_polynomial(text))
        assert verdict.status == "yes", text
        assert expand(verdict.witness) == parse_polynomial(text)


def test_single_term_incompatible():
    assert is_tree_compatible(parse_polynomial("a*b*c")).status == "no"


def test_find_factorizations_fig2_exactly_two():
    p = parse_polynomial(
        "th1 + th2*th4 + th2*th5 + th3*th5 + th3*th4*th6 + th3*th4*th7 "
        "+ th3*th4*th8"
    )
    found = find_factorizations(p, CompatSearchConfig(max_results=64))
    assert len(found) == 2
    assert all(expand(f) == p for f in found)


def test_tree_from_factorization_roundtrip():
    rng = random.Random(7)
    for _ in range(30):
        t = random_staged_tree(rng)
        f = nested_factorization(t)
        rebuilt = tree_from_factorization(f)
        assert rebuilt.canonical_equal(t)
        assert validate(rebuilt) == []


def test_require_staged_filter():
    # a*(x+y) + b*(x+z): overlapping but unequal child florets, so no staged
    # tree carries this bracketing
    p = parse_polynomial("a*x + a*y + b*x + b*z")
    all_f = find_factorizations(p, CompatSearchConfig(max_results=64))
    staged = find_factorizations(
        p, CompatSearchConfig(max_results=64, require_staged=True)
    )
    assert len(all_f) >= 1
    assert staged == []


def _random_square_free_poly(rng: random.Random) -> frozenset:
    symbols = "abcdef"[: rng.randint(2, 6)]
    n_terms = rng.randint(1, 10)
    terms = set()
    for _ in range(n_terms):
        size = rng.randint(1, len(symbols))
        terms.add(frozenset(rng.sample(symbols, size)))
    return frozenset(terms)


def test_oracle_agreement_random():
    rng = random.Random(2024)
    checked = positives = 0
    while checked < 400:
        terms = _random_square_free_poly(rng)
        poly = Poly(list(terms))
        verdict = is_tree_compatible(poly)
        expected = oracle_tree_compatible(terms)
        assert verdict.status in ("yes", "no")
        assert (verdict.status == "yes") == expected, sorted(map(sorted, terms))
        if expected:
            positives += 1
            assert expand(verdict.witness) == poly
        checked += 1
    assert positives >= 5  # the sample exercises both outcomes


def test_oracle_agreement_tree_generated():
    # polynomials that certainly are compatible: read off random trees
    rng = random.Random(99)
    for _ in range(120):
        t = random_staged_tree(rng, max_depth=3, max_branch=3)
        p = interpolating_polynomial(t)
        if len(p.symbols()) > 6 or len(p.coeffs) > 10:
            continue
        assert is_tree_compatible(p).status == "yes"
        assert oracle_tree_compatible(frozenset(p.coeffs))


def test_exhaustive_two_and_three_symbol_polys():
    # every non-empty antichain-free set of subsets over {a,b[,c]}
    for symbols in ("ab", "abc"):
        subsets = [
            frozenset(c)
            for r in range(1, len(symbols) + 1)
            for c in itertools.combinations(symbols, r)
        ]
        for r in range(1, len(subsets) + 1):
            for combo in itertools.combinations(subsets, r):
                terms = frozenset(combo)
                poly = Poly(list(terms))
                got = is_tree_compatible(poly).status == "yes"
                assert got == oracle_tree_compatible(terms), sorted(
                    map(sorted, terms)
                )
