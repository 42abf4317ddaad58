"""Atomic monomials, interpolating polynomials, nested factorizations and
numeric evaluation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    MissingSymbol,
    NodeTooSmall,
    NormalizationViolation,
    SymbolRepeat,
)
from .trees import Label, StagedTree, paths

# A monomial is a square-free product of primitive symbols; set semantics
# encode the square-freeness.
Monomial = frozenset


class Poly:
    """A formal sum of square-free monomials with exact rational
    coefficients. No cancellation happens implicitly; equal monomials are
    merged by coefficient addition at construction."""

    def __init__(self, terms):
        """terms: iterable of monomials, or mapping monomial -> coefficient."""
        coeffs: dict[Monomial, Fraction] = {}
        if isinstance(terms, dict):
            items = terms.items()
        else:
            items = ((t, 1) for t in terms)
        for mono, c in items:
            mono = frozenset(mono)
            if not mono:
                raise ValueError("monomials are non-empty")
            coeffs[mono] = coeffs.get(mono, Fraction(0)) + Fraction(c)
        self.coeffs = {m: c for m, c in coeffs.items() if c != 0}

    def monomials(self) -> list[Monomial]:
        return sorted(self.coeffs, key=lambda m: (len(m), sorted(m)))

    def symbols(self) -> frozenset[str]:
        out: set[str] = set()
        for m in self.coeffs:
            out |= m
        return frozenset(out)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        return f"Poly({to_text(self)})"


@dataclass(frozen=True)
class Factorization:
    """A tree-compatible bracketing: a sum of (label, optional subfactor)
    entries. An entry without a child is a path terminating at that label."""

    entries: tuple[tuple[Label, "Factorization | None"], ...]

    def __post_init__(self):
        if len(self.entries) < 2:
            raise NodeTooSmall(
                f"a factorization node needs >= 2 entries, got {len(self.entries)}"
            )
        labels = [label for label, _ in self.entries]
        if len(set(labels)) != len(labels):
            raise ValueError("labels within a factorization node must be distinct")

    @classmethod
    def of(cls, *entries) -> "Factorization":
        norm = []
        for e in entries:
            if isinstance(e, tuple):
                label, child = e
            else:
                label, child = e, None
            if isinstance(label, str):
                label = Label.of(label)
            norm.append((label, child))
        return cls(tuple(norm))

    def canonical_key(self) -> str:
        parts = sorted(
            label.key() + (child.canonical_key() if child else "")
            for label, child in self.entries
        )
        return "(" + "+".join(parts) + ")"

    def __eq__(self, other):
        return (
            isinstance(other, Factorization)
            and self.canonical_key() == other.canonical_key()
        )

    def __hash__(self):
        return hash(self.canonical_key())

    def __repr__(self):
        return f"Factorization({factorization_to_text(self)})"


def atomic_monomial(tree: StagedTree, path) -> Monomial:
    """Union of the primitive symbols along a root-to-leaf path."""
    symbols: set[str] = set()
    for u, v in path:
        for s in tree.edge_label(u, v).symbols:
            if s in symbols:
                raise SymbolRepeat(
                    f"symbol {s} repeats along the path through {v}"
                )
            symbols.add(s)
    return frozenset(symbols)


def interpolating_polynomial(tree: StagedTree) -> Poly:
    """The formal sum of all atomic monomials of the tree."""
    return Poly([atomic_monomial(tree, p) for p in paths(tree)])


def nested_factorization(tree: StagedTree, v: str | None = None) -> Factorization:
    """The tree-compatible bracketing read off the tree structure."""
    if v is None:
        v = tree.root
    entries = []
    for label, c in tree.out_edges(v):
        child = None if tree.is_leaf(c) else nested_factorization(tree, c)
        entries.append((label, child))
    return Factorization(tuple(entries))


def expand(f: Factorization) -> Poly:
    """Distribute all products of a factorization into a flat polynomial."""

    def monos(node: Factorization) -> list[frozenset[str]]:
        out = []
        for label, child in node.entries:
            if child is None:
                out.append(frozenset(label.symbols))
                continue
            for sub in monos(child):
                if label.symbols & sub:
                    clash = sorted(label.symbols & sub)
                    raise SymbolRepeat(f"symbol {clash[0]} repeats in a product")
                out.append(frozenset(label.symbols) | sub)
        return out

    return Poly(monos(f))


def poly_equal(p: Poly, q: Poly) -> bool:
    """Formal coincidence: multiset equality of monomials and coefficients."""
    return p == q


# -- numeric evaluation ----------------------------------------------------


def label_value(label: Label, assignment) -> float | Fraction:
    """A label's value: looked up by its full key if present, otherwise the
    product of its constituent symbols' values."""
    if label.key() in assignment:
        return assignment[label.key()]
    value = None
    for s in sorted(label.symbols):
        if s not in assignment:
            raise MissingSymbol(f"no value for symbol {s}")
        value = assignment[s] if value is None else value * assignment[s]
    return value


def check_normalized(tree: StagedTree, assignment, tol=1e-9) -> None:
    """Verify every floret of the tree sums to one under the assignment."""
    for v in tree.non_leaves():
        total = sum(label_value(label, assignment) for label in tree.floret(v))
        if isinstance(total, Fraction):
            bad = total != 1
        else:
            bad = abs(total - 1.0) > tol
        if bad:
            raise NormalizationViolation(
                f"floret at {v} sums to {float(total)}, not 1"
            )


def evaluate(tree: StagedTree, g, assignment, normalized: bool = False):
    """The network polynomial sum(g(atom) * product of edge values).

    g may be a callable on atomic monomials, a mapping monomial ->
    coefficient, a collection of monomials (indicator), or the number 1 for
    the interpolating polynomial.
    """
    if normalized:
        check_normalized(tree, assignment)
    if g == 1:
        weight = lambda m: 1
    elif callable(g):
        weight = g
    elif isinstance(g, dict):
        weight = lambda m: g.get(m, 0)
    else:
        indicator = set(g)
        weight = lambda m: 1 if m in indicator else 0
    total = 0
    for p in paths(tree):
        w = weight(atomic_monomial(tree, p))
        if w == 0:
            continue
        prod = w
        for u, v in p:
            prod = prod * label_value(tree.edge_label(u, v), assignment)
        total += prod
    return total


def atom_probabilities(tree: StagedTree, assignment) -> dict[Monomial, object]:
    """Numeric probability of every atom, keyed by its monomial."""
    out = {}
    for p in paths(tree):
        key = atomic_monomial(tree, p)
        prod = 1
        for u, v in p:
            prod = prod * label_value(tree.edge_label(u, v), assignment)
        out[key] = prod
    return out


# -- text forms (grammar lives in grammar.py; serializers here) ------------


def to_text(p: Poly) -> str:
    parts = []
    for m in p.monomials():
        c = p.coeffs[m]
        term = "*".join(sorted(m))
        parts.append(term if c == 1 else f"{c}*{term}")
    return " + ".join(parts) if parts else "0"


def factorization_to_text(f: Factorization) -> str:
    parts = []
    for label, child in sorted(f.entries, key=lambda e: e[0].key()):
        text = "*".join(sorted(label.symbols))
        if child is not None:
            text += "*(" + factorization_to_text(child) + ")"
        parts.append(text)
    return " + ".join(parts)
