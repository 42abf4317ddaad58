"""Command-line interface for inspecting and rewriting staged trees.

Exit codes: 0 success, 1 domain error (invalid tree, missing twin, budget
exhausted, ...), 2 parse or usage error.
"""

import argparse
import json
import random
import sys
from fractions import Fraction

from . import equivalence, transform, treeio, trees
from .errors import ParseError, StagedTreeError
from .fixtures import FIXTURE_NAMES, load_fixture
from .grammar import parse_factorization
from .polynomial import (
    atom_probabilities,
    evaluate,
    factorization_to_text,
    interpolating_polynomial,
    nested_factorization,
    to_text,
)


def _load(path: str) -> trees.StagedTree:
    if path.startswith("fixture:"):
        name = path.split(":", 1)[1]
        if name not in FIXTURE_NAMES:
            raise ParseError(f"unknown fixture {name!r}")
        return load_fixture(name)
    return treeio.read_tree_file(path)


def _emit_tree(tree: trees.StagedTree, fmt: str) -> None:
    if fmt == "dot":
        sys.stdout.write(treeio.export_dot(tree))
    else:
        sys.stdout.write(treeio.write_tree(tree))


def _cmd_validate(args) -> int:
    tree = _load(args.tree)
    problems = trees.validate(tree)
    if problems:
        for p in problems:
            print(f"invalid: {p}")
        return 1
    print(f"ok: {len(list(tree.non_leaves()))} florets, "
          f"{len(tree.leaves())} leaves, {len(trees.stages(tree).blocks)} stages")
    return 0


def _cmd_poly(args) -> int:
    tree = _load(args.tree)
    print(to_text(interpolating_polynomial(tree)))
    return 0


def _cmd_factorize(args) -> int:
    tree = _load(args.tree)
    print(factorization_to_text(nested_factorization(tree)))
    return 0


def _cmd_compat(args) -> int:
    from .compat import CompatSearchConfig, find_factorizations
    from .grammar import parse_polynomial

    text = args.polynomial
    if text == "-":
        text = sys.stdin.read()
    poly = parse_polynomial(text)
    cfg = CompatSearchConfig(max_results=args.budget, require_staged=args.staged)
    found = find_factorizations(poly, cfg)
    for f in found:
        print(factorization_to_text(f))
    if not found:
        print("no tree-compatible factorization found")
        return 1
    return 0


def _cmd_twins(args) -> int:
    tree = _load(args.tree)
    for i, twin in enumerate(transform.find_twins(tree)):
        members = ",".join(sorted(twin.members))
        labels = ",".join(lab.key() for lab in sorted(twin.stage_labels))
        print(f"[{i}] root={twin.root} members={{{members}}} labels={{{labels}}}")
    return 0


def _cmd_swap(args) -> int:
    tree = _load(args.tree)
    twins = transform.find_twins(tree)
    if not 0 <= args.twin < len(twins):
        raise StagedTreeError(f"twin index {args.twin} out of range (0..{len(twins) - 1})")
    result = (transform.apply_naive_swap if args.naive else transform.apply_swap)(
        tree, twins[args.twin]
    )
    _emit_tree(result, args.format)
    return 0


def _cmd_sites(args) -> int:
    tree = _load(args.tree)
    for i, site in enumerate(transform.find_resize_sites(tree)):
        parts = ", ".join(
            f"root={s.root} internal={{{','.join(sorted(s.internal))}}}"
            for s in site.subgraphs
        )
        print(f"[{i}] kind={site.kind} {parts}")
    return 0


def _cmd_resize(args) -> int:
    tree = _load(args.tree)
    sites = transform.find_resize_sites(tree)
    if not 0 <= args.site < len(sites):
        raise StagedTreeError(f"site index {args.site} out of range (0..{len(sites) - 1})")
    result = transform.apply_resize(tree, sites[args.site])
    _emit_tree(result, args.format)
    return 0


def _cmd_expand_floret(args) -> int:
    tree = _load(args.tree)
    f = parse_factorization(args.factorization)
    result = transform.apply_inverse_resize(tree, args.vertex, f)
    _emit_tree(result, args.format)
    return 0


def _cmd_enumerate(args) -> int:
    tree = _load(args.tree)
    report = equivalence.enumerate_class(tree, budget=args.budget)
    print(f"status: {report.status}")
    print(f"staged members: {len(report.staged_members)}")
    print(f"naive count: {report.naive_count}")
    print(f"valid single swaps: {report.valid_single_swaps}")
    print(f"explored states: {report.explored_states}")
    return 0


def _cmd_equiv(args) -> int:
    t1 = _load(args.tree)
    t2 = _load(args.other)
    verdict = equivalence.statistically_equivalent(
        t1, t2, budget=args.budget, seed=args.seed
    )
    print(f"status: {verdict.status}")
    if verdict.path is not None:
        print(json.dumps(verdict.path, indent=2))
    if verdict.certificate is not None:
        print(json.dumps(verdict.certificate, indent=2))
    return 0


def _cmd_prob(args) -> int:
    tree = _load(args.tree)
    if args.assignment:
        with open(args.assignment, encoding="utf-8") as fh:
            raw = json.load(fh)
        assignment = {k: Fraction(v) if isinstance(v, str) else v
                      for k, v in raw.items()}
    else:
        assignment = equivalence.random_normalized(
            tree, random.Random(args.seed), exact=True
        )
    total = evaluate(tree, 1, assignment, normalized=True)
    print(f"total mass: {total}")
    for mono, value in sorted(
        atom_probabilities(tree, assignment).items(),
        key=lambda kv: sorted(kv[0]),
    ):
        print(f"{'*'.join(sorted(mono))}: {value}")
    return 0


def _cmd_export_dot(args) -> int:
    tree = _load(args.tree)
    sys.stdout.write(treeio.export_dot(tree))
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="stagedtrees",
        description="Inspect, rewrite, and compare staged-tree models. "
        "Tree arguments are file paths or fixture:NAME "
        f"(names: {', '.join(FIXTURE_NAMES)}).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        return p

    p = add("validate", _cmd_validate, "check tree structure and staging")
    p.add_argument("tree")

    p = add("poly", _cmd_poly, "print the interpolating polynomial")
    p.add_argument("tree")

    p = add("factorize", _cmd_factorize, "print the nested factorization")
    p.add_argument("tree")

    p = add("compat", _cmd_compat, "find tree-compatible factorizations of a polynomial")
    p.add_argument("polynomial", help="polynomial text, or - for stdin")
    p.add_argument("--budget", type=int, default=64)
    p.add_argument("--staged", action="store_true",
                   help="only factorizations whose tree is staged")

    p = add("twins", _cmd_twins, "list swappable twins")
    p.add_argument("tree")

    p = add("swap", _cmd_swap, "apply a swap at a twin")
    p.add_argument("tree")
    p.add_argument("--twin", type=int, required=True, help="index from `twins`")
    p.add_argument("--naive", action="store_true",
                   help="skip the staging check on the result")
    p.add_argument("--format", choices=("tree", "dot"), default="tree")

    p = add("sites", _cmd_sites, "list resize sites")
    p.add_argument("tree")

    p = add("resize", _cmd_resize, "contract a resize site to florets")
    p.add_argument("tree")
    p.add_argument("--site", type=int, required=True, help="index from `sites`")
    p.add_argument("--format", choices=("tree", "dot"), default="tree")

    p = add("expand-floret", _cmd_expand_floret,
            "inverse resize: expand a floret along a factorization")
    p.add_argument("tree")
    p.add_argument("vertex")
    p.add_argument("factorization")
    p.add_argument("--format", choices=("tree", "dot"), default="tree")

    p = add("enumerate", _cmd_enumerate, "enumerate the swap equivalence class")
    p.add_argument("tree")
    p.add_argument("--budget", type=int, default=20000)

    p = add("equiv", _cmd_equiv, "decide statistical equivalence of two trees")
    p.add_argument("tree")
    p.add_argument("other")
    p.add_argument("--budget", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)

    p = add("prob", _cmd_prob, "atom probabilities under an assignment")
    p.add_argument("tree")
    p.add_argument("--assignment", help="JSON file of symbol -> value")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for a random normalized assignment")

    p = add("export-dot", _cmd_export_dot, "emit Graphviz DOT with stage colors")
    p.add_argument("tree")

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (StagedTreeError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
