"""Tree file format (JSON-structured text) and DOT export."""

from __future__ import annotations

import json

from .errors import ParseError
from .trees import Label, StagedTree, stages

# deterministic palette, assigned to stage blocks in canonical order
PALETTE = [
    "lightblue",
    "lightgreen",
    "salmon",
    "gold",
    "plum",
    "lightcyan",
    "wheat",
    "palegreen",
    "lightpink",
    "khaki",
]


def _parse_label(raw) -> Label:
    if isinstance(raw, str):
        return Label.of(raw)
    if isinstance(raw, list) and raw and all(isinstance(s, str) for s in raw):
        return Label.of(*raw)
    raise ParseError(f"label must be a symbol or a list of symbols, got {raw!r}")


def read_tree(text: str) -> StagedTree:
    """Parse the tree file format. A declared `stages` partition, when
    present, is validated against the derived one."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(doc, dict) or "root" not in doc or "edges" not in doc:
        raise ParseError("tree file needs 'root' and 'edges'")
    try:
        edges = [
            (e["from"], e["to"], _parse_label(e["label"])) for e in doc["edges"]
        ]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed edge entry: {exc}") from exc
    try:
        tree = StagedTree(doc["root"], edges, doc.get("atoms"))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    if "stages" in doc:
        declared = {frozenset(block) for block in doc["stages"]}
        derived = stages(tree).as_sets()
        if declared != derived:
            raise ParseError(
                "declared stage partition disagrees with the derived one"
            )
    return tree


def read_tree_file(path) -> StagedTree:
    with open(path, encoding="utf-8") as fh:
        return read_tree(fh.read())


def _label_json(label: Label):
    if label.is_composite:
        return sorted(label.symbols)
    (s,) = label.symbols
    return s


def write_tree(tree: StagedTree) -> str:
    """Serialize a tree; deterministic for a given tree."""
    doc = {
        "root": tree.root,
        "edges": [
            {"from": u, "to": c, "label": _label_json(label)}
            for u in tree.topological_order()
            for label, c in tree.out_edges(u)
        ],
    }
    if tree.atoms:
        doc["atoms"] = dict(sorted(tree.atoms.items()))
    blocks = [sorted(b) for b in stages(tree).blocks]
    doc["stages"] = blocks
    return json.dumps(doc, indent=2) + "\n"


def _canonical_relabel(tree: StagedTree) -> StagedTree:
    """Fresh ids in canonical child order, so canonically equal trees
    serialize identically."""
    counter = [0]
    edges = []

    def walk(v, name):
        ordered = sorted(
            tree.out_edges(v), key=lambda e: (e[0].key(), tree.canonical_key(e[1]))
        )
        for label, c in ordered:
            counter[0] += 1
            cname = f"n{counter[0]}"
            edges.append((name, cname, label))
            walk(c, cname)

    walk(tree.root, "n0")
    return StagedTree("n0", edges)


def export_dot(tree: StagedTree) -> str:
    """Deterministic DOT text: vertices filled by stage block, edges
    annotated with their labels. Byte-identical for canonically equal
    trees."""
    tree = _canonical_relabel(tree)
    part = stages(tree)
    color_of: dict[str, str] = {}
    colored = [b for b in part.blocks if len(b) >= 2]
    for i, block in enumerate(colored):
        for v in block:
            color_of[v] = PALETTE[i % len(PALETTE)]
    lines = ["digraph staged_tree {", "  rankdir=LR;"]
    for v in tree.topological_order():
        if tree.is_leaf(v):
            lines.append(f'  "{v}" [shape=point];')
        else:
            fill = color_of.get(v, "white")
            lines.append(
                f'  "{v}" [shape=circle, style=filled, fillcolor="{fill}"];'
            )
    for u in tree.topological_order():
        for label, c in tree.out_edges(u):
            lines.append(f'  "{u}" -> "{c}" [label="{label.key()}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
