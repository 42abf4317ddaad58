"""Bundled fixture trees encoding the worked examples.

Symbol naming convention: figure edges carry outcome names (+/-, yes/no);
fixtures use outcome-derived symbols instead, suffixed by stage where a
floret vector is shared. For example `le_high_b` is the "high life events"
parameter of the blue stage, `se_pp` the "++ socio-economic background"
root parameter, and `adm_yes_p` the hospital-admission parameter of the
unstaged (poor background) vertex.
"""

from importlib import resources

from .treeio import read_tree
from .trees import StagedTree

FIXTURE_NAMES = (
    "fig1",
    "fig2a",
    "fig2b",
    "fig3a_section3",
    "fig3b_section3",
    "chds_a",
    "chds_b",
)


def fixture_text(name: str) -> str:
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {FIXTURE_NAMES}")
    return (
        resources.files("stagedtrees")
        .joinpath("data", f"{name}.tree")
        .read_text(encoding="utf-8")
    )


def load_fixture(name: str) -> StagedTree:
    return read_tree(fixture_text(name))
