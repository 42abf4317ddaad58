"""Shared test helpers: a random staged-tree generator and an independent
brute-force oracle for tree compatibility."""

import itertools
import random

from stagedtrees.errors import TwinNotFound
from stagedtrees.transform import apply_naive_swap, find_twins
from stagedtrees.trees import Label, StagedTree


def swap_reverses(original: StagedTree, twin, once: StagedTree) -> bool:
    """True iff some twin at the same site of `once` swaps back to
    `original`. Candidate twins whose swap would duplicate a label are
    skipped; the genuine reverse twin never clashes."""
    for bt in find_twins(once):
        if bt.root != twin.root:
            continue
        try:
            if apply_naive_swap(once, bt).canonical_equal(original):
                return True
        except TwinNotFound:
            continue
    return False


def random_staged_tree(
    rng: random.Random, max_depth: int = 4, max_branch: int = 4
) -> StagedTree:
    """A random valid, square-free staged tree.

    Shape first: every non-leaf gets 2..max_branch children, leaves appear
    with increasing probability by depth. Staging second: vertices of equal
    depth and out-degree are randomly grouped, each group sharing a fresh
    label vector. Keeping stages within one level guarantees both
    square-freeness and pairwise equal-or-disjoint florets.
    """
    counter = itertools.count()
    by_level: dict[tuple[int, int], list[str]] = {}

    def grow(depth: int) -> str:
        v = f"v{next(counter)}"
        if depth >= max_depth or (depth > 0 and rng.random() < 0.3 * depth):
            return v
        deg = rng.randint(2, max_branch)
        by_level.setdefault((depth, deg), []).append(v)
        children[v] = [grow(depth + 1) for _ in range(deg)]
        return v

    children: dict[str, list[str]] = {}
    root = grow(0)
    if root not in children:  # ensure at least one floret
        deg = rng.randint(2, max_branch)
        by_level[(0, deg)] = [root]
        children[root] = [f"v{next(counter)}" for _ in range(deg)]

    edges = []
    sym = itertools.count()
    for (_, deg), group in sorted(by_level.items()):
        rng.shuffle(group)
        while group:
            take = rng.randint(1, len(group))
            stage, group = group[:take], group[take:]
            labels = [Label.of(f"t{next(sym)}") for _ in range(deg)]
            for v in stage:
                for label, c in zip(labels, children[v]):
                    edges.append((v, c, label))
    return StagedTree(root, edges)


def oracle_tree_compatible(terms: frozenset) -> bool:
    """Brute-force subset recursion straight from the definition: a
    square-free sum of monomials is tree-compatible iff some set A of at
    least two symbols hits every term exactly once and every residual group
    is a single bare label (a leaf) or recursively compatible."""
    symbols = sorted(set().union(*terms))
    for r in range(2, len(symbols) + 1):
        for combo in itertools.combinations(symbols, r):
            a_set = set(combo)
            groups: dict[str, list[frozenset]] = {}
            ok = True
            for t in terms:
                hit = t & a_set
                if len(hit) != 1:
                    ok = False
                    break
                groups.setdefault(next(iter(hit)), []).append(t)
            if not ok or len(groups) != len(combo):
                continue
            for a, group in groups.items():
                rest = [t - {a} for t in group]
                if any(not t for t in rest):
                    if len(rest) != 1:
                        ok = False
                        break
                elif len(rest) == 1:
                    ok = False
                    break
                elif not oracle_tree_compatible(frozenset(rest)):
                    ok = False
                    break
            if ok:
                return True
    return False
