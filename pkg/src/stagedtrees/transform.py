"""Twins, swap operators, resize sites and resize operators."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

from .compat import tree_from_factorization
from .errors import (
    FactorizationMismatch,
    InvalidSite,
    NotStaged,
    SymbolRepeat,
    TwinNotFound,
)
from .polynomial import (
    Factorization,
    Poly,
    expand,
    interpolating_polynomial,
)
from .trees import Label, StagedTree, stages, validate


@dataclass(frozen=True)
class Twin:
    """A located swap opportunity: a vertex and a set of its children that
    all lie in one stage not containing the vertex itself."""

    root: str
    members: frozenset[str]
    stage_labels: frozenset[Label]

    @property
    def size(self) -> int:
        return len(self.members)

    def sort_key(self):
        return (self.root, len(self.members), tuple(sorted(self.members)))


@dataclass(frozen=True)
class Subgraph:
    """A rooted set of whole florets: the floret of every internal vertex is
    included; children of internals outside the set are the grafting points."""

    root: str
    internal: frozenset[str]


@dataclass(frozen=True)
class ResizeSite:
    kind: str  # 'saturated' (condition a) | 'equivalent' (condition b)
    subgraphs: tuple[Subgraph, ...]

    def sort_key(self):
        return (self.kind, tuple(sorted(s.root for s in self.subgraphs)))


# -- twins and swaps ---------------------------------------------------------


def _twin_groups(tree: StagedTree):
    """(vertex, floret-key) -> same-stage non-leaf children, on any labeled
    tree (intermediates of naive swaps included)."""
    for w in tree.non_leaves():
        by_floret: dict[frozenset[Label], list[str]] = {}
        for c in tree.children(w):
            if tree.is_leaf(c):
                continue
            by_floret.setdefault(tree.floret_key(c), []).append(c)
        for fk, members in sorted(by_floret.items(), key=lambda kv: kv[1]):
            if len(members) >= 2 and fk != tree.floret_key(w):
                yield w, fk, members


def find_twins(tree: StagedTree, min_size: int = 2) -> list[Twin]:
    """All twins, one per member subset of size >= min_size; subsets beyond
    the pairs are reported as well (their size flags them)."""
    twins = []
    for w, fk, members in _twin_groups(tree):
        for k in range(min_size, len(members) + 1):
            for combo in itertools.combinations(sorted(members), k):
                twins.append(Twin(w, frozenset(combo), fk))
    return sorted(twins, key=Twin.sort_key)


def _locate(tree: StagedTree, twin: Twin) -> None:
    if twin.root not in tree.vertices or tree.is_leaf(twin.root):
        raise TwinNotFound(f"no floret at {twin.root}")
    children = set(tree.children(twin.root))
    if not twin.members <= children or len(twin.members) < 2:
        raise TwinNotFound(f"{sorted(twin.members)} are not children of {twin.root}")
    florets = {tree.floret_key(c) for c in twin.members}
    if len(florets) != 1 or frozenset() in florets:
        raise TwinNotFound("twin members are not in a single stage")
    fk = florets.pop()
    if fk != twin.stage_labels:
        raise TwinNotFound("stage labels do not match the twin members")
    if fk == tree.floret_key(twin.root):
        raise TwinNotFound("the twin root lies in the members' stage")


def _fresh_ids(tree: StagedTree, count: int, prefix: str = "s") -> list[str]:
    ids, i = [], 0
    while len(ids) < count:
        name = f"{prefix}{i}"
        if name not in tree.vertices:
            ids.append(name)
        i += 1
    return ids


def apply_naive_swap(tree: StagedTree, twin: Twin) -> StagedTree:
    """Exchange the two edge levels inside the twin; the subtree below the
    old path (a, b) reattaches below the new path (b, a). The result is a
    labeled event tree with the same expanded polynomial; it need not be
    well-staged."""
    _locate(tree, twin)
    w = twin.root
    member_of = {}  # first-level label -> member vertex
    outside = []  # w's edges left untouched
    for label, c in tree.out_edges(w):
        if c in twin.members:
            member_of[label] = c
        else:
            outside.append((label, c))
    stage_vector = tree.floret(next(iter(twin.members)))
    clash = {lab for lab, _ in outside} & set(stage_vector)
    if clash:
        raise TwinNotFound(
            f"swap would duplicate label {sorted(clash)[0].key()} at {w}"
        )
    fresh = _fresh_ids(tree, len(stage_vector))
    new_edges = []
    drop = set(twin.members)
    for u in tree.topological_order():
        if u == w:
            continue
        if u in drop:
            continue
        for label, c in tree.out_edges(u):
            new_edges.append((u, c, label))
    for label, c in outside:
        new_edges.append((w, c, label))
    for b_label, n in zip(stage_vector, fresh):
        new_edges.append((w, n, b_label))
        for a_label, c in member_of.items():
            # the subtree below old path (a_label, b_label)
            target = None
            for lab, d in tree.out_edges(c):
                if lab == b_label:
                    target = d
                    break
            new_edges.append((n, target, a_label))
    return StagedTree(tree.root, new_edges)


def apply_swap(tree: StagedTree, twin: Twin) -> StagedTree:
    """A naive swap whose result passes the staged-tree validation."""
    result = apply_naive_swap(tree, twin)
    violations = validate(result)
    if violations:
        raise NotStaged(violations)
    return result


def _labels_at_depth(tree: StagedTree) -> list[set[Label]]:
    levels: dict[int, set[Label]] = {}
    for v in tree.topological_order():
        p = tree.parent(v)
        if p is None:
            continue
        d = tree.depth(v)
        levels.setdefault(d, set()).add(tree.edge_label(p, v))
    return [levels[d] for d in sorted(levels)]


def classify_composition(before: StagedTree, after: StagedTree) -> dict[str, bool]:
    """Flags for a composition of naive swaps taking `before` to `after`.

    floret_swap: the multiset of floret label sets is unchanged.
    level_swap: the labels of two adjacent whole levels are exchanged and all
    other levels are untouched.
    """
    floret_swap = Counter(
        before.floret_key(v) for v in before.non_leaves()
    ) == Counter(after.floret_key(v) for v in after.non_leaves())
    if before.canonical_equal(after):
        return {"floret_swap": floret_swap, "level_swap": True}
    lb, la = _labels_at_depth(before), _labels_at_depth(after)
    level_swap = False
    if len(lb) == len(la):
        for k in range(len(lb) - 1):
            swapped = la[k] == lb[k + 1] and la[k + 1] == lb[k] and la[k] != lb[k]
            others = all(la[d] == lb[d] for d in range(len(lb)) if d not in (k, k + 1))
            if swapped and others:
                level_swap = True
                break
    return {"floret_swap": floret_swap, "level_swap": level_swap}


# -- resize sites and resizes ------------------------------------------------


def _stage_blocks(tree: StagedTree) -> dict[str, frozenset[str]]:
    part = stages(tree)
    return {v: part.block_of(v) for v in tree.non_leaves()}


def _saturated_site_from(tree: StagedTree, r: str, singles: set[str]) -> Subgraph:
    internal = {r}
    frontier = [r]
    while frontier:
        v = frontier.pop()
        for c in tree.children(v):
            if not tree.is_leaf(c) and c in singles and c not in internal:
                internal.add(c)
                frontier.append(c)
    return Subgraph(r, frozenset(internal))


def _full_subgraph(tree: StagedTree, r: str) -> Subgraph:
    internal = {
        v for v in tree.topological_order() if not tree.is_leaf(v) and _is_descendant(tree, r, v)
    }
    return Subgraph(r, frozenset(internal))


def _is_descendant(tree: StagedTree, anc: str, v: str) -> bool:
    while v is not None:
        if v == anc:
            return True
        v = tree.parent(v)
    return False


def find_resize_sites(tree: StagedTree) -> list[ResizeSite]:
    """Maximal saturated (condition a) sites plus all families of pairwise
    polynomially equivalent sibling-rooted subtrees (condition b)."""
    block_of = _stage_blocks(tree)
    singles = {v for v, b in block_of.items() if len(b) == 1}
    sites = []
    # condition (a): grow from every stage-singleton vertex, keep maximal
    # sites spanning at least two florets
    candidates = [
        _saturated_site_from(tree, r, singles) for r in sorted(singles)
    ]
    for sub in candidates:
        if len(sub.internal) < 2:
            continue
        if any(
            other.internal > sub.internal for other in candidates if other != sub
        ):
            continue
        sites.append(ResizeSite("saturated", (sub,)))
    # condition (b): sibling-rooted full subtrees, grouped by interpolating
    # polynomial, with no internal vertex staged outside the family
    for w in tree.non_leaves():
        groups: dict[Poly, list[str]] = {}
        for c in tree.children(w):
            if tree.is_leaf(c):
                continue
            poly = interpolating_polynomial(_subtree(tree, c))
            groups.setdefault(poly, []).append(c)
        for roots in groups.values():
            if len(roots) < 2:
                continue
            subs = tuple(_full_subgraph(tree, r) for r in sorted(roots))
            inside = set().union(*(s.internal for s in subs))
            leaking = any(
                block_of[v] - inside for s in subs for v in s.internal
            )
            if leaking:
                continue
            sites.append(ResizeSite("equivalent", subs))
    return sorted(sites, key=ResizeSite.sort_key)


def _subtree(tree: StagedTree, r: str) -> StagedTree:
    edges = []
    stack = [r]
    while stack:
        v = stack.pop()
        for label, c in tree.out_edges(v):
            edges.append((v, c, label))
            stack.append(c)
    return StagedTree(r, edges)


def _subgraph_paths(tree: StagedTree, sub: Subgraph):
    """(composite label, boundary vertex) per root-to-boundary path of the
    subgraph. Boundary vertices are children of internals outside the
    internal set."""
    out = []

    def walk(v, symbols):
        for label, c in tree.out_edges(v):
            merged = symbols | label.symbols
            if len(merged) != len(symbols) + len(label.symbols):
                raise SymbolRepeat(
                    f"subgraph path through {c} repeats a symbol"
                )
            if c in sub.internal:
                walk(c, merged)
            else:
                out.append((Label(frozenset(merged)), c))

    walk(sub.root, frozenset())
    return out


def _validate_site(tree: StagedTree, site: ResizeSite) -> None:
    block_of = _stage_blocks(tree)
    for sub in site.subgraphs:
        if sub.root not in sub.internal:
            raise InvalidSite(f"subgraph root {sub.root} not among its internals")
        for v in sub.internal:
            if tree.is_leaf(v):
                raise InvalidSite(f"internal vertex {v} is a leaf")
            if v != sub.root and not (
                tree.parent(v) in sub.internal and _is_descendant(tree, sub.root, v)
            ):
                raise InvalidSite(f"internal vertex {v} is disconnected from {sub.root}")
    if site.kind == "saturated":
        if len(site.subgraphs) != 1:
            raise InvalidSite("a saturated site holds exactly one subgraph")
        sub = site.subgraphs[0]
        for v in sub.internal:
            if len(block_of[v]) > 1:
                raise InvalidSite(
                    f"stage leakage: internal vertex {v} is staged with "
                    f"{sorted(block_of[v] - {v})}"
                )
    elif site.kind == "equivalent":
        if len(site.subgraphs) < 2:
            raise InvalidSite("an equivalent-family site needs >= 2 subgraphs")
        inside = set().union(*(s.internal for s in site.subgraphs))
        polys = set()
        for sub in site.subgraphs:
            boundary = {
                c
                for v in sub.internal
                for c in tree.children(v)
                if c not in sub.internal
            }
            if any(not tree.is_leaf(b) for b in boundary):
                raise InvalidSite(
                    f"subgraph at {sub.root} is not a full subtree"
                )
            for v in sub.internal:
                if block_of[v] - inside:
                    raise InvalidSite(
                        f"stage leakage: internal vertex {v} is staged with "
                        f"{sorted(block_of[v] - inside)}"
                    )
            polys.add(interpolating_polynomial(_subtree(tree, sub.root)))
        if len(polys) != 1:
            raise InvalidSite("subgraphs are not polynomially equivalent")
    else:
        raise InvalidSite(f"unknown site kind {site.kind!r}")


def apply_resize(tree: StagedTree, site: ResizeSite) -> StagedTree:
    """Contract each subgraph of the site into a floret of composite labels
    (one per subgraph root-to-boundary path). Atomic probabilities are
    invariant for every assignment."""
    _validate_site(tree, site)
    removed = set()
    replacement: dict[str, list[tuple[Label, str]]] = {}
    for sub in site.subgraphs:
        removed |= sub.internal - {sub.root}
        replacement[sub.root] = _subgraph_paths(tree, sub)
    edges = []
    for u in tree.topological_order():
        if u in removed:
            continue
        if u in replacement:
            for label, c in replacement[u]:
                edges.append((u, c, label))
            continue
        for label, c in tree.out_edges(u):
            edges.append((u, c, label))
    # keep only the part reachable from the root
    out: dict[str, list[tuple[str, Label]]] = {}
    for u, c, label in edges:
        out.setdefault(u, []).append((c, label))
    rebuilt = []
    stack, seen = [tree.root], set()
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        for c, label in out.get(u, []):
            rebuilt.append((u, c, label))
            stack.append(c)
    result = StagedTree(tree.root, rebuilt)
    violations = validate(result)
    if violations:
        raise InvalidSite("resize broke stage structure: " + "; ".join(violations))
    return result


def apply_inverse_resize(
    tree: StagedTree, floret_center: str, f: Factorization
) -> StagedTree:
    """Expand the floret at floret_center into the subtree corresponding to
    the factorization f; resizing the result at that site returns the
    input."""
    if floret_center not in tree.vertices or tree.is_leaf(floret_center):
        raise FactorizationMismatch(f"no floret at {floret_center}")
    floret_poly = Poly(
        [frozenset(label.symbols) for label in tree.floret(floret_center)]
    )
    expanded = expand(f)
    if expanded != floret_poly:
        raise FactorizationMismatch(
            "factorization does not expand to the floret's label monomials"
        )
    grafts = {
        frozenset(label.symbols): child
        for label, child in tree.out_edges(floret_center)
    }
    new_subtree = tree_from_factorization(f, prefix="x")
    # each leaf of the expansion maps back to the original child by monomial
    name_map = {new_subtree.root: floret_center}
    fresh = iter(_fresh_ids(tree, len(new_subtree.vertices), "x"))
    edges = []
    for u in tree.topological_order():
        if u == floret_center:
            continue
        edges.extend((u, c, label) for label, c in tree.out_edges(u))

    def build(v, acc_symbols):
        for label, c in new_subtree.out_edges(v):
            symbols = acc_symbols | label.symbols
            if new_subtree.is_leaf(c):
                target = grafts[frozenset(symbols)]
                edges.append((name_map[v], target, label))
            else:
                name_map[c] = next(fresh)
                edges.append((name_map[v], name_map[c], label))
                build(c, symbols)

    build(new_subtree.root, frozenset())
    # drop everything no longer reachable (the old direct edges of the floret)
    out: dict[str, list[tuple[str, Label]]] = {}
    for u, c, label in edges:
        out.setdefault(u, []).append((c, label))
    rebuilt, stack, seen = [], [tree.root], set()
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        for c, label in out.get(u, []):
            rebuilt.append((u, c, label))
            stack.append(c)
    return StagedTree(tree.root, rebuilt)
