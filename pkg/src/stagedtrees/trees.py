"""Event trees, staged trees, florets, stages and structural validation."""

from __future__ import annotations

import re
from dataclasses import dataclass

SYMBOL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Label:
    """An edge label: one primitive symbol, or a square-free product of
    several (a composite label created by a resize)."""

    symbols: frozenset[str]

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("a label needs at least one symbol")
        for s in self.symbols:
            if not SYMBOL_RE.match(s):
                raise ValueError(f"bad symbol {s!r}")
        object.__setattr__(self, "symbols", frozenset(self.symbols))

    @classmethod
    def of(cls, *symbols: str) -> "Label":
        return cls(frozenset(symbols))

    @property
    def is_composite(self) -> bool:
        return len(self.symbols) > 1

    def key(self) -> str:
        return "*".join(sorted(self.symbols))

    def __lt__(self, other):
        return self.key() < other.key()

    def __repr__(self):
        return f"Label({self.key()})"


class StagedTree:
    """A labeled event tree.

    The class stores any rooted labeled tree, including intermediate results
    of naive swaps that are not well-staged; `validate` reports violations of
    the staged-tree invariants as data. Instances are immutable.
    """

    def __init__(self, root: str, edges, atoms: dict[str, str] | None = None):
        """edges: iterable of (parent, child, Label) triples."""
        out: dict[str, list[tuple[Label, str]]] = {}
        parent: dict[str, str] = {}
        vertices = {root}
        for u, v, label in edges:
            if not isinstance(label, Label):
                raise TypeError("edge labels must be Label instances")
            if v in parent or v == root:
                raise ValueError(f"vertex {v} has more than one parent")
            parent[v] = u
            out.setdefault(u, []).append((label, v))
            vertices.add(u)
            vertices.add(v)
        self.root = root
        self._out = {u: tuple(es) for u, es in out.items()}
        self._parent = parent
        self._vertices = frozenset(vertices)
        self.atoms = dict(atoms) if atoms else None
        self._canonical: str | None = None

    # -- basic structure ---------------------------------------------------

    @property
    def vertices(self) -> frozenset[str]:
        return self._vertices

    def out_edges(self, v: str) -> tuple[tuple[Label, str], ...]:
        return self._out.get(v, ())

    def children(self, v: str) -> tuple[str, ...]:
        return tuple(c for _, c in self.out_edges(v))

    def parent(self, v: str) -> str | None:
        return self._parent.get(v)

    def is_leaf(self, v: str) -> bool:
        return v not in self._out

    def leaves(self) -> list[str]:
        return [v for v in self.topological_order() if self.is_leaf(v)]

    def non_leaves(self) -> list[str]:
        return [v for v in self.topological_order() if not self.is_leaf(v)]

    def edge_label(self, u: str, v: str) -> Label:
        for label, c in self.out_edges(u):
            if c == v:
                return label
        raise KeyError((u, v))

    def topological_order(self) -> list[str]:
        """Vertices in depth-first order from the root (deterministic)."""
        order, stack = [], [self.root]
        seen = set()
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            order.append(v)
            stack.extend(c for _, c in reversed(self.out_edges(v)))
        return order

    def depth(self, v: str) -> int:
        d = 0
        while v != self.root:
            v = self._parent[v]
            d += 1
        return d

    # -- florets and stages ------------------------------------------------

    def floret(self, v: str) -> tuple[Label, ...]:
        return tuple(label for label, _ in self.out_edges(v))

    def floret_key(self, v: str) -> frozenset[Label]:
        """The floret's label set; valid florets carry pairwise distinct
        labels, so a frozenset loses nothing."""
        return frozenset(self.floret(v))

    def label_path(self, v: str) -> tuple[str, ...]:
        """Label keys along the root-to-v path; addresses v independently of
        vertex ids."""
        keys = []
        while v != self.root:
            p = self._parent[v]
            keys.append(self.edge_label(p, v).key())
            v = p
        return tuple(reversed(keys))

    def resolve_label_path(self, keys) -> str:
        v = self.root
        for k in keys:
            for label, c in self.out_edges(v):
                if label.key() == k:
                    v = c
                    break
            else:
                raise KeyError(f"no edge labeled {k} below {v}")
        return v

    # -- canonical form ----------------------------------------------------

    def canonical_key(self, v: str | None = None) -> str:
        """Canonical serialization, invariant under child reordering and
        vertex renaming."""
        if v is None:
            if self._canonical is None:
                self._canonical = self.canonical_key(self.root)
            return self._canonical
        if self.is_leaf(v):
            return ""
        parts = sorted(
            label.key() + self.canonical_key(c) for label, c in self.out_edges(v)
        )
        return "(" + "+".join(parts) + ")"

    def canonical_equal(self, other: "StagedTree") -> bool:
        return self.canonical_key() == other.canonical_key()

    def relabel_fresh(self, prefix: str = "v") -> "StagedTree":
        """Copy with deterministic vertex ids assigned in depth-first order."""
        order = self.topological_order()
        names = {v: f"{prefix}{i}" for i, v in enumerate(order)}
        edges = [
            (names[u], names[c], label)
            for u in order
            for label, c in self.out_edges(u)
        ]
        atoms = None
        if self.atoms:
            atoms = {a: names[leaf] for a, leaf in self.atoms.items()}
        return StagedTree(names[self.root], edges, atoms)


@dataclass(frozen=True)
class StagePartition:
    """Partition of the non-leaf vertices into stages (equal floret label
    sets)."""

    blocks: tuple[frozenset[str], ...]

    def block_of(self, v: str) -> frozenset[str]:
        for b in self.blocks:
            if v in b:
                return b
        raise KeyError(v)

    def as_sets(self) -> set[frozenset[str]]:
        return set(self.blocks)


def validate(tree: StagedTree) -> list[str]:
    """All violated staged-tree invariants, with locations. Empty iff valid."""
    violations = []
    reachable = set(tree.topological_order())
    for v in sorted(tree.vertices - reachable):
        violations.append(f"vertex {v} not reachable from root {tree.root}")
    for v in sorted(reachable):
        deg = len(tree.out_edges(v))
        if deg == 1:
            violations.append(f"non-leaf {v} has out-degree < 2")
        labels = [label for label, _ in tree.out_edges(v)]
        if len(set(labels)) != len(labels):
            violations.append(f"floret at {v} repeats an edge label")
    # WELL-STAGED: floret label sets pairwise equal or disjoint.
    florets = {v: tree.floret_key(v) for v in reachable if not tree.is_leaf(v)}
    items = sorted(florets.items())
    for i, (v, fv) in enumerate(items):
        for w, fw in items[i + 1 :]:
            if fv != fw and fv & fw:
                violations.append(
                    f"florets at {v} and {w} share labels without being equal"
                )
    if tree.atoms is not None:
        leaves = set(tree.leaves())
        mapped = list(tree.atoms.values())
        if len(set(mapped)) != len(mapped) or set(mapped) != leaves:
            violations.append("atom map is not a bijection onto the leaves")
    return violations


def stages(tree: StagedTree) -> StagePartition:
    """Group non-leaf vertices by equal floret label sets."""
    groups: dict[frozenset[Label], list[str]] = {}
    for v in tree.non_leaves():
        groups.setdefault(tree.floret_key(v), []).append(v)
    blocks = sorted(
        (frozenset(vs) for vs in groups.values()),
        key=lambda b: sorted(b),
    )
    return StagePartition(tuple(blocks))


def paths(tree: StagedTree) -> list[tuple[tuple[str, str], ...]]:
    """All root-to-leaf paths as edge sequences, in depth-first order."""
    result = []

    def walk(v, acc):
        if tree.is_leaf(v):
            result.append(tuple(acc))
            return
        for _, c in tree.out_edges(v):
            walk(c, acc + [(v, c)])

    walk(tree.root, [])
    return result


def vertex_event(tree: StagedTree, v: str) -> list[tuple[tuple[str, str], ...]]:
    """All root-to-leaf paths passing through v."""
    if v not in tree.vertices:
        raise KeyError(f"unknown vertex {v}")
    if v == tree.root:
        return paths(tree)
    return [p for p in paths(tree) if any(e[1] == v for e in p)]


def path_symbols(tree: StagedTree, path) -> list[str]:
    """Primitive symbols along a path, in edge order (with repeats)."""
    out = []
    for u, v in path:
        out.extend(sorted(tree.edge_label(u, v).symbols))
    return out


def is_square_free(tree: StagedTree) -> bool:
    """True iff no atomic monomial repeats a primitive symbol; equivalently
    no two same-stage vertices lie on a common root-to-leaf path."""
    for p in paths(tree):
        syms = path_symbols(tree, p)
        if len(set(syms)) != len(syms):
            return False
    return True
