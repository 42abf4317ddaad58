"""Polynomial and statistical equivalence: naive-swap closure, distribution
membership, and the combined swap/resize search."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .compat import CompatSearchConfig, find_factorizations
from .errors import TwinNotFound
from .grammar import parse_factorization
from .polynomial import (
    Factorization,
    Poly,
    atom_probabilities,
    atomic_monomial,
    factorization_to_text,
    interpolating_polynomial,
)
from .transform import (
    ResizeSite,
    Subgraph,
    Twin,
    apply_inverse_resize,
    apply_naive_swap,
    apply_resize,
    find_resize_sites,
    find_twins,
)
from .trees import StagedTree, is_square_free, paths, validate


@dataclass
class ClassReport:
    """Result of a naive-swap closure around a seed tree."""

    staged_members: list[StagedTree]
    naive_count: int  # 2^(#size-2 twins of the seed); a heuristic indicator
    explored_states: int
    valid_single_swaps: int
    status: str  # 'complete' | 'budget_exceeded'


@dataclass
class MembershipResult:
    status: str  # 'accept' | 'reject'
    params: dict | None = None
    reason: str | None = None


@dataclass
class EquivVerdict:
    status: str  # 'equivalent' | 'not_equivalent' | 'unknown'
    path: list | None = None
    certificate: dict | None = None


def polynomially_equivalent(t1: StagedTree, t2: StagedTree) -> bool:
    """Same edge-label alphabet and formally equal interpolating
    polynomials."""
    labels1 = {lab for v in t1.non_leaves() for lab in t1.floret(v)}
    labels2 = {lab for v in t2.non_leaves() for lab in t2.floret(v)}
    if labels1 != labels2:
        return False
    return interpolating_polynomial(t1) == interpolating_polynomial(t2)


# -- naive-swap closure ------------------------------------------------------


def _swap_step(tree: StagedTree, twin: Twin) -> dict:
    return {
        "op": "swap",
        "vertex": list(tree.label_path(twin.root)),
        "members": sorted(
            tree.edge_label(twin.root, c).key() for c in twin.members
        ),
    }


def _resolve_twin(tree: StagedTree, step: dict) -> Twin:
    w = tree.resolve_label_path(step["vertex"])
    members = set()
    for key in step["members"]:
        for label, c in tree.out_edges(w):
            if label.key() == key:
                members.add(c)
                break
        else:
            raise TwinNotFound(f"no edge labeled {key} at {w}")
    stage = tree.floret_key(next(iter(members)))
    return Twin(w, frozenset(members), stage)


def _swap_closure(seed: StagedTree, budget: int):
    """Breadth-first closure over naive swaps with a visited set of canonical
    forms; non-staged intermediates are traversed."""
    start = seed.canonical_key()
    states: dict[str, tuple[StagedTree, list]] = {start: (seed, [])}
    queue = deque([start])
    complete = True
    explored = 0
    while queue:
        key = queue.popleft()
        tree, path = states[key]
        explored += 1
        for twin in find_twins(tree):
            try:
                nxt = apply_naive_swap(tree, twin)
            except TwinNotFound:
                continue  # label clash: the naive swap is not applicable
            nk = nxt.canonical_key()
            if nk in states:
                continue
            if len(states) >= budget:
                complete = False
                continue
            states[nk] = (nxt, path + [_swap_step(tree, twin)])
            queue.append(nk)
    return states, complete, explored


def enumerate_class(seed: StagedTree, budget: int = 20000) -> ClassReport:
    """Explore the naive-swap closure of the seed; report the staged members
    of its polynomial equivalence class."""
    violations = validate(seed)
    if violations:
        raise ValueError("seed is not a valid staged tree: " + "; ".join(violations))
    if not is_square_free(seed):
        raise ValueError("seed must be square-free")
    states, complete, explored = _swap_closure(seed, budget)
    staged = sorted(
        (tree for tree, _ in states.values() if not validate(tree)),
        key=lambda t: t.canonical_key(),
    )
    seed_twins = find_twins(seed)
    pairs = sum(1 for t in seed_twins if t.size == 2)
    valid_single = 0
    for twin in seed_twins:
        try:
            if not validate(apply_naive_swap(seed, twin)):
                valid_single += 1
        except TwinNotFound:
            pass
    return ClassReport(
        staged_members=staged,
        naive_count=2**pairs,
        explored_states=explored,
        valid_single_swaps=valid_single,
        status="complete" if complete else "budget_exceeded",
    )


# -- distribution membership -------------------------------------------------


def _is_exact(values) -> bool:
    return all(isinstance(v, (Fraction, int)) for v in values)


def distribution_membership(
    tree: StagedTree, p: dict, tol: float = 1e-9
) -> MembershipResult:
    """Decide whether the strictly positive distribution p (keyed by atomic
    monomials) lies in the tree's model.

    Edge parameters are forced as conditional path-mass ratios; the tree
    accepts p iff every stage-equality constraint holds and the forced
    products reconstruct p.
    """
    p = {
        frozenset(k.split("*")) if isinstance(k, str) else frozenset(k): v
        for k, v in p.items()
    }
    all_paths = paths(tree)
    keys = [atomic_monomial(tree, path) for path in all_paths]
    if set(keys) != set(p) or len(keys) != len(p):
        raise ValueError("distribution keys do not biject with the tree's atoms")
    if any(v <= 0 for v in p.values()):
        raise ValueError("distribution must be strictly positive")
    exact = _is_exact(p.values())
    total = sum(p.values())
    if (total != 1) if exact else abs(total - 1) > tol:
        raise ValueError(f"distribution sums to {float(total)}, not 1")

    # mass through each vertex
    mass = {v: 0 for v in tree.vertices}
    mass[tree.root] = total
    for path, key in zip(all_paths, keys):
        for _, v in path:
            mass[v] += p[key]

    def close(a, b):
        if exact:
            return a == b
        return abs(a - b) <= tol * max(abs(a), abs(b), 1e-300)

    forced: dict[str, object] = {}  # label key -> forced value
    for u in tree.non_leaves():
        for label, c in tree.out_edges(u):
            value = Fraction(mass[c], mass[u]) if exact else mass[c] / mass[u]
            key = label.key()
            if key in forced:
                if not close(forced[key], value):
                    return MembershipResult(
                        "reject",
                        reason=(
                            f"stage violation: label {key} is forced to both "
                            f"{float(forced[key])} and {float(value)}"
                        ),
                    )
            else:
                forced[key] = value
    for path, key in zip(all_paths, keys):
        prod = total
        for u, v in path:
            prod = prod * forced[tree.edge_label(u, v).key()]
        if not close(prod, p[key]):
            return MembershipResult(
                "reject",
                reason=(
                    f"product mismatch on atom {'*'.join(sorted(key))}: "
                    f"{float(prod)} vs {float(p[key])}"
                ),
            )
    return MembershipResult("accept", params=forced)


# -- normalized sampling -----------------------------------------------------


def _simplex(rng: random.Random, n: int, exact: bool):
    if exact:
        weights = [Fraction(rng.randint(1, 1000)) for _ in range(n)]
    else:
        weights = [rng.random() + 1e-3 for _ in range(n)]
    total = sum(weights)
    return [w / total for w in weights]


def random_normalized(
    tree: StagedTree, rng: random.Random, exact: bool = False
) -> dict:
    """A parameter assignment under which every floret of the tree sums to 1.

    Florets of composite labels are handled by sampling along one
    tree-compatible factorization of their label monomials, so the composite
    products themselves land on the simplex.
    """
    assignment: dict[str, object] = {}

    def sample_node(f: Factorization):
        weights = _simplex(rng, len(f.entries), exact)
        for (label, child), w in zip(f.entries, weights):
            (symbol,) = label.symbols
            if symbol in assignment:
                raise ValueError(f"symbol {symbol} constrained twice")
            assignment[symbol] = w
            if child is not None:
                sample_node(child)

    done: set[frozenset[Label]] = set()
    for v in tree.non_leaves():
        fk = tree.floret_key(v)
        if fk in done:
            continue
        done.add(fk)
        floret = tree.floret(v)
        if all(not label.is_composite for label in floret):
            weights = _simplex(rng, len(floret), exact)
            for label, w in zip(floret, weights):
                (symbol,) = label.symbols
                if symbol not in assignment:
                    assignment[symbol] = w
            continue
        poly = Poly([frozenset(label.symbols) for label in floret])
        witnesses = find_factorizations(poly, CompatSearchConfig(max_results=1))
        if not witnesses:
            raise ValueError(
                f"floret at {v} admits no factorization; cannot normalize"
            )
        sample_node(witnesses[0])
    return assignment


# -- statistical equivalence -------------------------------------------------


def _contract_all(tree: StagedTree):
    """Apply saturated resizes until none is left. Returns the normal form,
    the forward steps, and the inverse steps that rebuild the input."""
    steps: list[dict] = []
    inverse: list[dict] = []
    cur = tree
    while True:
        sites = [s for s in find_resize_sites(cur) if s.kind == "saturated"]
        if not sites:
            break
        site = sites[0]
        sub = site.subgraphs[0]
        steps.append(
            {
                "op": "resize",
                "kind": "saturated",
                "subgraphs": [
                    {
                        "root": list(cur.label_path(sub.root)),
                        "internal": sorted(
                            [list(cur.label_path(v)) for v in sub.internal]
                        ),
                    }
                ],
            }
        )
        fact = _subgraph_factorization(cur, sub)
        inverse.insert(
            0,
            {
                "op": "inverse_resize",
                "vertex": list(cur.label_path(sub.root)),
                "factorization": factorization_to_text(fact),
            },
        )
        cur = apply_resize(cur, site)
    return cur, steps, inverse


def _subgraph_factorization(tree: StagedTree, sub: Subgraph) -> Factorization:
    def build(v) -> Factorization:
        entries = []
        for label, c in tree.out_edges(v):
            child = build(c) if c in sub.internal else None
            entries.append((label, child))
        return Factorization(tuple(entries))

    return build(sub.root)


def replay_path(tree: StagedTree, path: list) -> StagedTree:
    """Apply a serialized transformation path step by step."""
    cur = tree
    for step in path:
        op = step["op"]
        if op == "swap":
            cur = apply_naive_swap(cur, _resolve_twin(cur, step))
        elif op == "resize":
            subgraphs = tuple(
                Subgraph(
                    cur.resolve_label_path(sg["root"]),
                    frozenset(
                        cur.resolve_label_path(lp) for lp in sg["internal"]
                    ),
                )
                for sg in step["subgraphs"]
            )
            cur = apply_resize(cur, ResizeSite(step["kind"], subgraphs))
        elif op == "inverse_resize":
            center = cur.resolve_label_path(step["vertex"])
            fact = parse_factorization(step["factorization"])
            cur = apply_inverse_resize(cur, center, fact)
        else:
            raise ValueError(f"unknown step {op!r}")
    return cur


def _atom_keys(tree: StagedTree) -> set[frozenset]:
    return {atomic_monomial(tree, p) for p in paths(tree)}


def statistically_equivalent(
    t1: StagedTree,
    t2: StagedTree,
    budget: int = 20000,
    seed: int = 0,
    atom_map: dict | None = None,
    probes: int = 3,
) -> EquivVerdict:
    """Bounded search for a swap/resize path from t1 to t2, with a numeric
    membership probe as refutation.

    atom_map: optional bijection t1-atom-key -> t2-atom-key; required for
    probing when the two trees use disjoint alphabets.
    """
    for name, t in (("t1", t1), ("t2", t2)):
        violations = validate(t)
        if violations:
            raise ValueError(f"{name} is not a valid staged tree")
    if t1.canonical_equal(t2):
        return EquivVerdict("equivalent", path=[])
    atoms1, atoms2 = _atom_keys(t1), _atom_keys(t2)
    if len(atoms1) != len(atoms2):
        return EquivVerdict(
            "not_equivalent",
            certificate={
                "reason": "atom count mismatch",
                "atoms": [len(atoms1), len(atoms2)],
            },
        )
    # swap-only route (polynomial equivalence)
    if polynomially_equivalent(t1, t2):
        states, complete, _ = _swap_closure(t1, budget)
        hit = states.get(t2.canonical_key())
        if hit is not None:
            return EquivVerdict("equivalent", path=hit[1])
        if not complete:
            return EquivVerdict("unknown", certificate={"reason": "budget"})
    # resize route: contract both to their saturated normal forms
    n1, steps1, _ = _contract_all(t1)
    n2, _, inverse2 = _contract_all(t2)
    if n1.canonical_equal(n2):
        return EquivVerdict("equivalent", path=steps1 + inverse2)
    if polynomially_equivalent(n1, n2):
        states, complete, _ = _swap_closure(n1, budget)
        hit = states.get(n2.canonical_key())
        if hit is not None:
            return EquivVerdict("equivalent", path=steps1 + hit[1] + inverse2)
        if not complete:
            return EquivVerdict("unknown", certificate={"reason": "budget"})
    # refutation probe: a distribution in one model rejected by the other
    rng = random.Random(seed)
    if atom_map is None and atoms1 == atoms2:
        atom_map = {k: k for k in atoms1}
    if atom_map is not None:
        def as_mono(k):
            return frozenset(k.split("*")) if isinstance(k, str) else frozenset(k)

        forward = {as_mono(k): as_mono(v) for k, v in atom_map.items()}
        backward = {v: k for k, v in forward.items()}
        directions = [(t1, t2, forward, "t1->t2"), (t2, t1, backward, "t2->t1")]
        for src, dst, mapper, direction in directions:
            for _ in range(probes):
                assignment = random_normalized(src, rng, exact=True)
                probs = atom_probabilities(src, assignment)
                mapped = {mapper[k]: v for k, v in probs.items()}
                result = distribution_membership(dst, mapped)
                if result.status == "reject":
                    return EquivVerdict(
                        "not_equivalent",
                        certificate={
                            "reason": result.reason,
                            "direction": direction,
                            "distribution": {
                                "*".join(sorted(k)): str(v)
                                for k, v in mapped.items()
                            },
                        },
                    )
    return EquivVerdict("unknown", certificate={"reason": "budget"})


def replay_certificate(
    certificate: dict, t1: StagedTree, t2: StagedTree
) -> MembershipResult:
    """Re-run the membership probe recorded in a not_equivalent certificate;
    the rejection is deterministic."""
    target = t2 if certificate["direction"] == "t1->t2" else t1
    p = {
        frozenset(key.split("*")): Fraction(value)
        for key, value in certificate["distribution"].items()
    }
    return distribution_membership(target, p)
