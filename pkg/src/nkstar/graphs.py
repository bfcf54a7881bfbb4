"""Bitset-backed undirected-graph primitives for the cut machinery.

Adjacency is a tuple of Python-int bitmask rows; vertex sets are bitmasks.
Reachability works on whole frontiers at once, so one connectivity probe
costs O(order^2 / word size).  For graphs up to a few hundred vertices a
precomputed block-OR closure table collapses the probe further to a handful
of table lookups per expansion round; the subset-enumeration oracle leans on
that table for its inner loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .errors import DomainError

# Closure-table tuning: chunk width in bits, and the largest order for which
# the table's memory (chunks * 2^width entries) is worth paying.
_CHUNK_BITS = 15
_TABLE_ORDER_LIMIT = 192


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits_of(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class GraphView:
    """Immutable adjacency view with an optional removed-vertex overlay."""

    __slots__ = ("rows", "order", "removed_mask", "_tables")

    def __init__(self, rows: Sequence[int], removed: Iterable[int] = ()):
        self.rows = tuple(rows)
        self.order = len(self.rows)
        removed_mask = mask_of(removed)
        if removed_mask >> self.order:
            raise DomainError("removed set contains out-of-range vertex IDs")
        self.removed_mask = removed_mask
        self._tables: list[list[int]] | None = None

    @property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    @property
    def alive_mask(self) -> int:
        return self.full_mask & ~self.removed_mask

    def with_removed(self, extra: Iterable[int]) -> "GraphView":
        view = GraphView(self.rows)
        view.removed_mask = self.removed_mask | mask_of(extra)
        if view.removed_mask >> self.order:
            raise DomainError("removed set contains out-of-range vertex IDs")
        view._tables = self._tables
        return view

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.order:
            raise DomainError(f"vertex {v} outside 0..{self.order - 1}")

    def alive_degree(self, v: int) -> int:
        return (self.rows[v] & self.alive_mask).bit_count()

    def closure_tables(self) -> list[list[int]] | None:
        """Block-OR tables: table[c][bits] = union of rows for those bits.

        Built lazily, shared by every overlay derived from the same rows;
        ``None`` when the graph is too large for the table to pay off.
        """
        if self._tables is None and self.order <= _TABLE_ORDER_LIMIT:
            self._tables = build_closure_tables(self.rows)
        return self._tables


def build_closure_tables(rows: Sequence[int]) -> list[list[int]]:
    order = len(rows)
    tables = []
    for base in range(0, order, _CHUNK_BITS):
        width = min(_CHUNK_BITS, order - base)
        tab = [0] * (1 << width)
        for m in range(1, len(tab)):
            low = m & -m
            tab[m] = tab[m ^ low] | rows[base + low.bit_length() - 1]
        tables.append(tab)
    return tables


def neighborhood_mask(rows: Sequence[int], tables: list[list[int]] | None, mask: int) -> int:
    """Union of adjacency rows over the vertices in ``mask``."""
    if tables is not None:
        out = 0
        chunk_full = (1 << _CHUNK_BITS) - 1
        for tab in tables:
            out |= tab[mask & chunk_full]
            mask >>= _CHUNK_BITS
        return out
    out = 0
    while mask:
        low = mask & -mask
        out |= rows[low.bit_length() - 1]
        mask ^= low
    return out


def reach_mask(rows: Sequence[int], tables: list[list[int]] | None, alive: int, seed: int) -> int:
    """Vertices reachable from ``seed`` while staying inside ``alive``."""
    seen = seed & alive
    if tables is not None:
        while True:
            grown = (seen | neighborhood_mask(rows, tables, seen)) & alive
            if grown == seen:
                return seen
            seen = grown
    frontier = seen
    while frontier:
        grow = 0
        for v in bits_of(frontier):
            grow |= rows[v]
        frontier = grow & alive & ~seen
        seen |= frontier
    return seen


def connected_within(rows: Sequence[int], tables: list[list[int]] | None, alive: int) -> bool:
    """True when the vertices of ``alive`` induce a connected (or empty/singleton) graph."""
    if alive == 0:
        return True
    return reach_mask(rows, tables, alive, alive & -alive) == alive


def components(view: GraphView, removed: Iterable[int] = ()) -> list[list[int]]:
    """Connected components of the graph minus ``removed`` (and the overlay).

    Components are listed by their smallest member, each sorted ascending.
    """
    extra = mask_of(removed)
    if extra >> view.order:
        raise DomainError("removed set contains out-of-range vertex IDs")
    alive = view.alive_mask & ~extra
    tables = view.closure_tables()
    out = []
    rest = alive
    while rest:
        comp = reach_mask(view.rows, tables, alive, rest & -rest)
        out.append(list(bits_of(comp)))
        rest &= ~comp
    return out


@dataclass(frozen=True)
class CutDiagnostic:
    """Outcome of an h-cut test, with the failing condition spelled out."""

    is_h_cut: bool
    h: int
    component_count: int
    min_alive_degree: int | None
    reason: str | None = None  # "low-degree" or "connected" when not a cut
    offender: int | None = None  # a vertex of too-small degree, if that failed

    def __bool__(self) -> bool:
        return self.is_h_cut


def is_h_cut(view: GraphView, cut: Iterable[int], h: int) -> CutDiagnostic:
    """Test whether removing ``cut`` disconnects the graph and leaves minimum degree >= h."""
    if h < 0:
        raise DomainError(f"h must be >= 0, got {h}")
    cut_mask = mask_of(cut)
    if cut_mask >> view.order:
        raise DomainError("cut contains out-of-range vertex IDs")
    alive = view.alive_mask & ~cut_mask
    rows = view.rows
    tables = view.closure_tables()

    min_degree: int | None = None
    offender: int | None = None
    for v in bits_of(alive):
        d = (rows[v] & alive).bit_count()
        if min_degree is None or d < min_degree:
            min_degree = d
            offender = v

    ncomp = 0
    rest = alive
    while rest:
        ncomp += 1
        rest &= ~reach_mask(rows, tables, alive, rest & -rest)

    if min_degree is not None and min_degree < h:
        return CutDiagnostic(False, h, ncomp, min_degree, "low-degree", offender)
    if ncomp < 2:
        return CutDiagnostic(False, h, ncomp, min_degree, "connected")
    return CutDiagnostic(True, h, ncomp, min_degree)


def induced_rows(view: GraphView, vertices: Sequence[int]) -> list[int]:
    """Adjacency rows of the induced subgraph, relabeled to 0..len(vertices)-1."""
    local = {v: i for i, v in enumerate(vertices)}
    if len(local) != len(vertices):
        raise DomainError("induced vertex list contains duplicates")
    rows = []
    for v in vertices:
        view.check_vertex(v)
        m = 0
        for u in bits_of(view.rows[v]):
            j = local.get(u)
            if j is not None:
                m |= 1 << j
        rows.append(m)
    return rows


# ---------------------------------------------------------------------------
# Classical vertex connectivity


def _alive_adjacency(view: GraphView) -> tuple[list[int], list[list[int]]]:
    alive_list = list(bits_of(view.alive_mask))
    local = {v: i for i, v in enumerate(alive_list)}
    adj = []
    alive = view.alive_mask
    for v in alive_list:
        adj.append([local[u] for u in bits_of(view.rows[v] & alive)])
    return alive_list, adj


def vertex_connectivity(view: GraphView) -> int:
    """Minimum number of vertices whose removal disconnects the graph.

    Realized through internally vertex-disjoint path counts: every vertex is
    split into an in-half and an out-half joined by a unit-capacity arc, and
    the max flow between the out-half of a source and the in-half of a sink
    counts disjoint paths.  One endpoint is pinned to a minimum-degree
    vertex; its non-neighbors, plus non-adjacent pairs of its neighbors,
    cover some minimum cut.  Complete graphs have no vertex cut and report
    order-1 by convention.
    """
    alive_list, adj = _alive_adjacency(view)
    order = len(alive_list)
    if order < 2:
        raise DomainError("vertex connectivity needs at least 2 vertices")
    degrees = [len(a) for a in adj]
    if all(d == order - 1 for d in degrees):
        return order - 1

    # Split-vertex flow network: node v is the in-half, node v+order the
    # out-half; connection arcs get capacity ``order`` (effectively infinite).
    rows_ix, cols_ix, caps = [], [], []
    for v in range(order):
        rows_ix.append(v)
        cols_ix.append(v + order)
        caps.append(1)
        for u in adj[v]:
            rows_ix.append(v + order)
            cols_ix.append(u)
            caps.append(order)
    network = csr_matrix(
        (np.asarray(caps, dtype=np.int32), (rows_ix, cols_ix)),
        shape=(2 * order, 2 * order),
    )

    source = min(range(order), key=lambda v: degrees[v])
    neighbor_set = set(adj[source])
    best = degrees[source]
    for target in range(order):
        if target != source and target not in neighbor_set:
            best = min(best, maximum_flow(network, source + order, target).flow_value)
            if best == 0:
                return 0
    nbrs = sorted(neighbor_set)
    for a_ix, a in enumerate(nbrs):
        for b in nbrs[a_ix + 1:]:
            if b not in adj[a]:
                best = min(best, maximum_flow(network, a + order, b).flow_value)
    return best


def vertex_connectivity_exhaustive(view: GraphView) -> int:
    """Connectivity by direct subset enumeration; exact but only desk-scale.

    Tries every removal set of each size in turn and returns the first size
    that disconnects; complete graphs report order-1 by convention.
    """
    from itertools import combinations

    alive_list = list(bits_of(view.alive_mask))
    order = len(alive_list)
    if order < 2:
        raise DomainError("vertex connectivity needs at least 2 vertices")
    rows = view.rows
    tables = view.closure_tables()
    alive = view.alive_mask
    if not connected_within(rows, tables, alive):
        return 0
    for m in range(1, order - 1):
        for combo in combinations(alive_list, m):
            if not connected_within(rows, tables, alive & ~mask_of(combo)):
                return m
    return order - 1


# ---------------------------------------------------------------------------
# Cycles through a prescribed edge


def shortest_cycle_through_edge(view: GraphView, u: int, v: int) -> int | None:
    """Length of the shortest cycle containing edge (u, v), or None.

    Computed as 1 + the distance between the endpoints once the edge itself
    is deleted; ``None`` means no cycle passes through the edge.
    """
    view.check_vertex(u)
    view.check_vertex(v)
    alive = view.alive_mask
    if not (alive >> u) & 1 or not (alive >> v) & 1 or not (view.rows[u] >> v) & 1:
        raise DomainError(f"({u}, {v}) is not an edge of the (alive) graph")
    rows = list(view.rows)
    rows[u] &= ~(1 << v)
    rows[v] &= ~(1 << u)
    seen = 1 << u
    frontier = seen
    dist = 0
    target = 1 << v
    while frontier:
        if frontier & target:
            return 1 + dist
        grow = 0
        for w in bits_of(frontier):
            grow |= rows[w]
        frontier = grow & alive & ~seen
        seen |= frontier
        dist += 1
    return None
