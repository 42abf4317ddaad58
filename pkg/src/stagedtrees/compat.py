"""Tree compatibility: factorization search over a square-free multilinear
polynomial and the invertible correspondence between factorizations and
labeled trees."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import BudgetExceeded, NodeTooSmall
from .polynomial import Factorization, Poly
from .trees import Label, StagedTree, validate


@dataclass
class CompatSearchConfig:
    max_results: int = 64
    max_depth: int = 64
    require_staged: bool = False

    def __post_init__(self):
        if self.max_results < 1:
            raise ValueError("max_results must be >= 1")


@dataclass(frozen=True)
class CompatVerdict:
    status: str  # 'yes' | 'no' | 'unknown'
    witness: Factorization | None = None


def tree_from_factorization(f: Factorization, prefix: str = "v") -> StagedTree:
    """Build the labeled event tree whose nested factorization is f."""
    if not isinstance(f, Factorization):
        raise TypeError("expected a Factorization")
    counter = itertools.count()
    edges = []

    def build(node: Factorization, parent: str):
        if len(node.entries) < 2:
            raise NodeTooSmall("every sum needs at least two elements")
        for label, child in node.entries:
            v = f"{prefix}{next(counter) + 1}"
            edges.append((parent, v, label))
            if child is not None:
                build(child, v)

    root = f"{prefix}0"
    build(f, root)
    return StagedTree(root, edges)


def _candidate_root_sets(terms: tuple[frozenset, ...]):
    """All symbol sets A, |A| >= 2, such that every term contains exactly one
    element of A. Formulated as an exact cover of the term set by the
    per-symbol term covers."""
    n = len(terms)
    cover: dict[str, frozenset[int]] = {}
    for i, t in enumerate(terms):
        for s in t:
            cover[s] = cover.get(s, frozenset()) | {i}
    all_terms = frozenset(range(n))
    results = []

    def rec(uncovered: frozenset[int], chosen: tuple[str, ...]):
        if not uncovered:
            if len(chosen) >= 2:
                results.append(frozenset(chosen))
            return
        # branch on the uncovered term with the fewest usable symbols
        best, best_opts = None, None
        for i in sorted(uncovered):
            opts = [s for s in sorted(terms[i]) if cover[s] <= uncovered]
            if best_opts is None or len(opts) < len(best_opts):
                best, best_opts = i, opts
                if not opts:
                    break
        for s in best_opts:
            rec(uncovered - cover[s], chosen + (s,))

    rec(all_terms, ())
    return results


class _Budget:
    def __init__(self, cfg: CompatSearchConfig):
        self.cfg = cfg
        self.truncated = False


def _search(terms: tuple[frozenset, ...], depth: int, budget: _Budget):
    """All factorizations of the term set, as Factorization values."""
    if depth > budget.cfg.max_depth:
        budget.truncated = True
        return []
    results = []
    for root_set in _candidate_root_sets(terms):
        options = []
        ok = True
        for s in sorted(root_set):
            group = tuple(t - {s} for t in terms if s in t)
            if any(not t for t in group):
                # the bare-label term: legal only as a lone leaf child
                if len(group) != 1:
                    ok = False
                    break
                options.append([None])
            elif len(group) == 1:
                # a non-leaf child would need >= 2 paths below it
                ok = False
                break
            else:
                subs = _search(group, depth + 1, budget)
                if not subs:
                    ok = False
                    break
                options.append(subs)
        if not ok:
            continue
        labels = [Label.of(s) for s in sorted(root_set)]
        for combo in itertools.product(*options):
            results.append(Factorization(tuple(zip(labels, combo))))
    return results


def find_factorizations(p: Poly, cfg: CompatSearchConfig | None = None):
    """All tree-compatible factorizations of p, deduplicated by canonical
    tree form. Raises BudgetExceeded when a truncated search found nothing,
    to distinguish it from a proven-empty answer."""
    cfg = cfg or CompatSearchConfig()
    terms = tuple(p.monomials())
    # interpolating polynomials have unit coefficients
    if len(terms) < 2 or any(c != 1 for c in p.coeffs.values()):
        return []
    budget = _Budget(cfg)
    raw = _search(terms, 1, budget)
    seen = {}
    for f in raw:
        tree = tree_from_factorization(f)
        if cfg.require_staged and validate(tree):
            continue
        seen.setdefault(tree.canonical_key(), f)
        if len(seen) >= cfg.max_results:
            break
    results = [seen[k] for k in sorted(seen)]
    if not results and budget.truncated:
        raise BudgetExceeded("factorization search truncated before any result")
    return results


def is_tree_compatible(p: Poly, cfg: CompatSearchConfig | None = None) -> CompatVerdict:
    """Decide whether p admits a probability tree representation."""
    cfg = cfg or CompatSearchConfig()
    terms = tuple(p.monomials())
    if len(terms) < 2 or any(c != 1 for c in p.coeffs.values()):
        return CompatVerdict("no")
    budget = _Budget(cfg)
    raw = _search(terms, 1, budget)
    if raw:
        return CompatVerdict("yes", raw[0])
    if budget.truncated:
        return CompatVerdict("unknown")
    return CompatVerdict("no")
