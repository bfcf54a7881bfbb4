"""(n,k)-star graph construction and its structural decompositions.

Vertices are the k-permutations of {1..n}; vertex IDs are lexicographic
ranks.  A vertex p1..pk is adjacent to

* the permutation obtained by swapping p1 with pi, for each position
  i in 2..k (a *swap-edge*, tagged with the position i), and
* every permutation a,p2..pk where the symbol a occurs nowhere in p
  (an *unswap-edge*).

So every vertex has k-1 swap-neighbors and n-k unswap-neighbors: the graph
is (n-1)-regular.  Vertices sharing the suffix p2..pk form a clique of order
n-k+1 (all mutual unswap-edges); fixing the value of the t-th symbol splits
the graph into n blocks, each a relabeled copy of the (n-1,k-1)-star graph.
"""

from __future__ import annotations

from typing import Iterator

from .errors import DomainError, InternalInconsistencyError
from .perms import KPerm, all_perms, perm_text, validate_perm

# Edge-kind encoding: swap-edges carry their swap position (2..k), and 0
# marks unswap-edges.
UNSWAP = 0


def kind_text(kind: int) -> str:
    return "unswap" if kind == UNSWAP else f"swap:{kind}"


def iter_neighbor_perms(n: int, k: int, p: KPerm) -> Iterator[tuple[KPerm, int]]:
    """Yield (neighbor permutation, edge kind) pairs without building a graph.

    Lazy counterpart of the materialized adjacency, for order-only scans.
    """
    validate_perm(n, p)
    if len(p) != k:
        raise DomainError(f"expected a {k}-permutation, got {p}")
    for i in range(1, k):
        q = list(p)
        q[0], q[i] = q[i], q[0]
        yield tuple(q), i + 1  # swap position is 1-based
    present = set(p)
    for a in range(1, n + 1):
        if a not in present:
            yield (a,) + p[1:], UNSWAP


class StarGraph:
    """Materialized (n,k)-star graph with edge kinds and bitset adjacency.

    Immutable after construction; safe for concurrent readers.  Use
    :func:`build` (1 <= k <= n-1) or :func:`reference_star` (k = n, the
    classical star graph on full permutations) instead of instantiating
    directly.
    """

    __slots__ = ("n", "k", "verts", "index", "order", "nbrs", "rows")

    def __init__(self, n: int, k: int):
        self.n = n
        self.k = k
        self.verts: list[KPerm] = all_perms(n, k)
        self.index: dict[KPerm, int] = {p: i for i, p in enumerate(self.verts)}
        self.order = len(self.verts)
        nbrs: list[tuple[tuple[int, int], ...]] = []
        rows: list[int] = []
        for p in self.verts:
            here = []
            mask = 0
            for q, kind in iter_neighbor_perms(n, k, p):
                j = self.index[q]
                here.append((j, kind))
                mask |= 1 << j
            here.sort()
            nbrs.append(tuple(here))
            rows.append(mask)
        self.nbrs = tuple(nbrs)
        self.rows = tuple(rows)

    def vertex(self, v: int) -> KPerm:
        return self.verts[v]

    def id_of(self, p: KPerm) -> int:
        try:
            return self.index[tuple(p)]
        except KeyError:
            raise DomainError(f"{perm_text(p)} is not a vertex of this graph") from None

    def neighbors(self, v: int) -> tuple[tuple[int, int], ...]:
        """(neighbor ID, edge kind) pairs, sorted by neighbor ID."""
        return self.nbrs[v]

    def degree(self, v: int) -> int:
        return len(self.nbrs[v])

    def edge_kind(self, u: int, v: int) -> int:
        for j, kind in self.nbrs[u]:
            if j == v:
                return kind
        raise DomainError(f"no edge between vertex {u} and vertex {v}")

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """All edges once, as (u, v, kind) with u < v, sorted."""
        for u in range(self.order):
            for v, kind in self.nbrs[u]:
                if u < v:
                    yield u, v, kind

    @property
    def num_edges(self) -> int:
        return self.order * (self.n - 1) // 2

    def __repr__(self) -> str:
        return f"StarGraph(n={self.n}, k={self.k}, order={self.order})"


def build(n: int, k: int) -> StarGraph:
    """Construct the (n,k)-star graph; requires 1 <= k <= n-1."""
    if not 1 <= k <= n - 1:
        raise DomainError(f"need 1 <= k <= n-1, got n={n}, k={k}")
    return StarGraph(n, k)


def reference_star(n: int) -> StarGraph:
    """The classical star graph on all n! full permutations (n >= 2).

    Adjacency is swap-only: exchange the first symbol with the i-th, for
    every position i in 2..n.
    """
    if n < 2:
        raise DomainError(f"reference star graph needs n >= 2, got n={n}")
    return StarGraph(n, n)


def iso_to_reference(g: StarGraph) -> tuple[StarGraph, list[int]]:
    """Isomorphism from the (n,n-1)-star graph onto the classical star graph.

    Maps each (n-1)-permutation to the full permutation obtained by appending
    its unique missing symbol.  Returns (reference graph, mapping by vertex
    ID) after verifying the map is an adjacency-preserving bijection.
    """
    n = g.n
    if g.k != n - 1:
        raise DomainError(f"isomorphism applies to k = n-1 only, got k={g.k}, n={n}")
    ref = reference_star(n)
    full_set = set(range(1, n + 1))
    mapping = []
    for p in g.verts:
        (missing,) = full_set - set(p)
        mapping.append(ref.index[p + (missing,)])
    if len(set(mapping)) != g.order or g.order != ref.order:
        raise InternalInconsistencyError("completion map is not a bijection")
    for u in range(g.order):
        mapped = {mapping[v] for v, _ in g.nbrs[u]}
        if mapped != {v for v, _ in ref.nbrs[mapping[u]]}:
            raise InternalInconsistencyError(
                f"completion map breaks adjacency at {perm_text(g.verts[u])}"
            )
    return ref, mapping


# ---------------------------------------------------------------------------
# Clique structure: vertices sharing the suffix p2..pk


def clique_of(g: StarGraph, v: int) -> KPerm:
    """The suffix p2..pk identifying the unique clique containing v."""
    return g.verts[v][1:]


def clique_members(g: StarGraph, alpha: KPerm) -> list[int]:
    """Vertex IDs of the clique with suffix ``alpha``, sorted.

    For k >= 2 this is the set of n-k+1 vertices s,alpha over symbols s not
    used in alpha; for k = 1 the suffix is empty and the single clique is the
    whole vertex set.
    """
    alpha = tuple(alpha)
    if len(alpha) != g.k - 1:
        raise DomainError(f"clique suffix must have length k-1={g.k - 1}, got {alpha}")
    if alpha:
        validate_perm(g.n, alpha)
    present = set(alpha)
    return sorted(
        g.index[(s,) + alpha] for s in range(1, g.n + 1) if s not in present
    )


def all_cliques(g: StarGraph) -> list[KPerm]:
    """All clique suffixes in lexicographic order."""
    if g.k == 1:
        return [()]
    return all_perms(g.n, g.k - 1)


# ---------------------------------------------------------------------------
# Recursive decomposition: blocks with a fixed t-th symbol


def _check_block_args(g: StarGraph, t: int, i: int) -> None:
    if g.k < 2:
        raise DomainError("decomposition needs k >= 2")
    if not 2 <= t <= g.k:
        raise DomainError(f"position t must be in 2..{g.k}, got {t}")
    if not 1 <= i <= g.n:
        raise DomainError(f"symbol i must be in 1..{g.n}, got {i}")


def subgraph_vertices(g: StarGraph, t: int, i: int) -> list[int]:
    """IDs of all vertices whose t-th symbol equals i, sorted."""
    _check_block_args(g, t, i)
    return [v for v, p in enumerate(g.verts) if p[t - 1] == i]


def subgraph_projection(g: StarGraph, t: int, i: int) -> list[tuple[int, KPerm]]:
    """Relabel the block {p : p_t = i} into (n-1,k-1)-star vertices.

    Deletes position t and renames the remaining symbols {1..n} minus {i}
    order-preservingly onto {1..n-1}.  Returns (vertex ID, relabeled
    permutation) pairs; the relabeling realizes the isomorphism of the block
    onto the (n-1,k-1)-star graph.
    """
    _check_block_args(g, t, i)
    out = []
    for v in subgraph_vertices(g, t, i):
        p = g.verts[v]
        q = tuple(s - 1 if s > i else s for idx, s in enumerate(p) if idx != t - 1)
        out.append((v, q))
    return out


def cross_edges(g: StarGraph, t: int, i: int, j: int) -> list[tuple[int, int, int]]:
    """All edges between the blocks {p_t = i} and {p_t = j}, i != j.

    Returned as (u, v, kind) with u in the i-block; scans the adjacency
    directly rather than assuming anything about which edges can cross.
    """
    _check_block_args(g, t, i)
    _check_block_args(g, t, j)
    if i == j:
        raise DomainError("cross edges need two distinct blocks")
    other = set(subgraph_vertices(g, t, j))
    out = []
    for u in subgraph_vertices(g, t, i):
        for v, kind in g.nbrs[u]:
            if v in other:
                out.append((u, v, kind))
    return out


# ---------------------------------------------------------------------------
# Exports


def edgelist_lines(g: StarGraph) -> list[str]:
    """One line per edge: "u<TAB>v<TAB>kind", sorted by (u, v) vertex rank."""
    return [
        f"{perm_text(g.verts[u])}\t{perm_text(g.verts[v])}\t{kind_text(kind)}"
        for u, v, kind in g.edges()
    ]


def dot_lines(g: StarGraph) -> list[str]:
    """DOT rendering: undirected, vertex names are textual permutations."""
    lines = [f'graph "star_{g.n}_{g.k}" {{']
    for u, v, kind in g.edges():
        lines.append(
            f'  "{perm_text(g.verts[u])}" -- "{perm_text(g.verts[v])}"'
            f' [kind="{kind_text(kind)}"];'
        )
    lines.append("}")
    return lines
