"""(n,k)-star interconnection networks: construction, structural
decompositions, h-super vertex cuts, and exact connectivity oracles."""

from .cuts import (
    Budget,
    CutCertificate,
    ProjectionAnalysis,
    SearchResult,
    colex_rank,
    colex_unrank,
    construct_cut,
    cut_projection,
    default_cut,
    kappa_super_exact,
    kappa_super_upper,
    theorem_value,
)
from .errors import DomainError, InternalInconsistencyError
from .graphs import (
    CutDiagnostic,
    GraphView,
    components,
    is_h_cut,
    shortest_cycle_through_edge,
    vertex_connectivity,
    vertex_connectivity_exhaustive,
)
from .harness import (
    VerificationReport,
    grid_run,
    render_summary,
    verify_structure,
    verify_theorem,
)
from .perms import (
    all_perms,
    count,
    iter_perms,
    parse_perm,
    perm_text,
    rank,
    unrank,
    validate_perm,
)
from .stargraph import (
    UNSWAP,
    StarGraph,
    all_cliques,
    build,
    clique_members,
    clique_of,
    cross_edges,
    dot_lines,
    edgelist_lines,
    iso_to_reference,
    iter_neighbor_perms,
    kind_text,
    reference_star,
    subgraph_projection,
    subgraph_vertices,
)

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "CutCertificate",
    "CutDiagnostic",
    "DomainError",
    "GraphView",
    "InternalInconsistencyError",
    "ProjectionAnalysis",
    "SearchResult",
    "StarGraph",
    "UNSWAP",
    "VerificationReport",
    "all_cliques",
    "all_perms",
    "build",
    "clique_members",
    "clique_of",
    "colex_rank",
    "colex_unrank",
    "components",
    "construct_cut",
    "count",
    "cross_edges",
    "cut_projection",
    "default_cut",
    "dot_lines",
    "edgelist_lines",
    "grid_run",
    "is_h_cut",
    "iso_to_reference",
    "iter_neighbor_perms",
    "iter_perms",
    "kappa_super_exact",
    "kappa_super_upper",
    "kind_text",
    "parse_perm",
    "perm_text",
    "rank",
    "reference_star",
    "render_summary",
    "shortest_cycle_through_edge",
    "subgraph_projection",
    "subgraph_vertices",
    "theorem_value",
    "unrank",
    "validate_perm",
    "verify_structure",
    "verify_theorem",
    "vertex_connectivity",
    "vertex_connectivity_exhaustive",
    "__version__",
]
