"""Symbolic toolkit for staged-tree probability models: interpolating
polynomials, nested factorizations, swap and resize rewrites, and
equivalence-class enumeration."""

from .compat import (
    CompatSearchConfig,
    CompatVerdict,
    find_factorizations,
    is_tree_compatible,
    tree_from_factorization,
)
from .equivalence import (
    ClassReport,
    EquivVerdict,
    MembershipResult,
    distribution_membership,
    enumerate_class,
    polynomially_equivalent,
    random_normalized,
    replay_certificate,
    replay_path,
    statistically_equivalent,
)
from .errors import (
    BudgetExceeded,
    FactorizationMismatch,
    InvalidSite,
    MissingSymbol,
    NodeTooSmall,
    NormalizationViolation,
    NotStaged,
    ParseError,
    StagedTreeError,
    SymbolRepeat,
    TwinNotFound,
)
from .fixtures import FIXTURE_NAMES, load_fixture
from .grammar import parse_factorization, parse_polynomial
from .polynomial import (
    Factorization,
    Poly,
    atom_probabilities,
    atomic_monomial,
    evaluate,
    expand,
    factorization_to_text,
    interpolating_polynomial,
    nested_factorization,
    poly_equal,
    to_text,
)
from .transform import (
    ResizeSite,
    Subgraph,
    Twin,
    apply_inverse_resize,
    apply_naive_swap,
    apply_resize,
    apply_swap,
    classify_composition,
    find_resize_sites,
    find_twins,
)
from .treeio import export_dot, read_tree, read_tree_file, write_tree
from .trees import (
    Label,
    StagePartition,
    StagedTree,
    is_square_free,
    paths,
    stages,
    validate,
    vertex_event,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
