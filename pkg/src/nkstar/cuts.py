"""h-super vertex cuts: explicit constructions, the exact search oracle, and
the closed-form connectivity value.

An *h-cut* is a vertex set whose removal disconnects the graph while every
surviving vertex keeps degree at least h; the h-super connectivity is the
minimum size of such a set.  For the (n,k)-star graph with 2 <= k <= n-1 and
0 <= h <= n-k that minimum equals n + h(k-2) - 1; this module builds the
matching cut explicitly (an (h+1)-subset of one clique plus the swap
neighborhood around it) and certifies minimality by exhaustive subset
enumeration in colexicographic order.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DomainError, InternalInconsistencyError
from .graphs import (
    GraphView,
    bits_of,
    build_closure_tables,
    components,
    connected_within,
    induced_rows,
    is_h_cut,
    mask_of,
    neighborhood_mask,
    reach_mask,
)
from .stargraph import UNSWAP, StarGraph, clique_members, subgraph_vertices

_BATCH = 4096  # candidates between deadline checks in the scan loop
_CHUNK_BITS = 15
_CHUNK_FULL = (1 << _CHUNK_BITS) - 1


def theorem_value(n: int, k: int, h: int) -> int:
    """The closed-form h-super connectivity n + h(k-2) - 1 of the (n,k)-star.

    Only defined for 2 <= k <= n-1 and 0 <= h <= n-k; anything else raises
    rather than extrapolating.
    """
    if not 2 <= k <= n - 1:
        raise DomainError(f"closed form needs 2 <= k <= n-1, got n={n}, k={k}")
    if not 0 <= h <= n - k:
        raise DomainError(f"closed form needs 0 <= h <= n-k, got h={h}, n-k={n - k}")
    return n + h * (k - 2) - 1


@dataclass(frozen=True)
class CutCertificate:
    """A concrete h-cut together with the component it pinches off."""

    cut: tuple[int, ...]
    witness: tuple[int, ...]
    h: int
    valid: bool

    @property
    def size(self) -> int:
        return len(self.cut)


@dataclass(frozen=True)
class Budget:
    """Resource limits for the search oracle; ``None`` means unlimited."""

    seconds: float | None = None
    candidates: int | None = None


@dataclass(frozen=True)
class SearchResult:
    """Outcome of the exact h-super connectivity search.

    ``value`` is None when no h-cut was found (either none exists below the
    searched frontier, or the budget ran out first -- see ``budget_hit``).
    ``exhaustive_below`` is the size below which every candidate set was
    ruled out, so a present ``value`` always equals it: that is the
    minimality proof.  ``candidates_checked`` counts the colexicographic
    prefix examined by this call, and ``checkpoint`` = (size, next index)
    marks where a budget-interrupted scan can resume.
    """

    h: int
    value: int | None
    certificate: CutCertificate | None
    exhaustive_below: int
    elapsed_ms: float
    budget_hit: bool
    candidates_checked: int
    checkpoint: tuple[int, int] | None = None


# ---------------------------------------------------------------------------
# Colexicographic combination indexing


def colex_rank(combo: Sequence[int]) -> int:
    """Position of a sorted ID tuple in the colex order of same-size subsets."""
    return sum(math.comb(c, i + 1) for i, c in enumerate(sorted(combo)))


def colex_unrank(r: int, m: int) -> list[int]:
    """Inverse of :func:`colex_rank`, as a sorted list of m IDs."""
    if r < 0 or m < 0:
        raise DomainError("colex rank and size must be nonnegative")
    out = []
    for i in range(m, 0, -1):
        c = i - 1
        while math.comb(c + 1, i) <= r:
            c += 1
        out.append(c)
        r -= math.comb(c, i)
    out.reverse()
    return out


def _next_colex_mask(s: int) -> int:
    # Gosper's hack: next same-popcount mask in increasing numeric order,
    # which is exactly colex order on the underlying subsets.
    c = s & -s
    r = s + c
    return (((r ^ s) >> 2) // c) | r


# ---------------------------------------------------------------------------
# The scan kernel


def _scan_colex(rows, tables, full, weak, h, m, start_mask, count, deadline):
    """Scan ``count`` consecutive colex m-subsets for an h-cut.

    Returns (status, offset, hit_mask, scanned) where status is "hit",
    "done", or "deadline"; ``offset`` is the hit's position relative to
    ``start_mask``.  Candidates are rejected connectivity-first: almost every
    removal leaves the graph connected, so the degree scan only runs on the
    rare disconnected survivors.
    """
    s = start_mask
    scanned = 0
    next_check = _BATCH
    while scanned < count:
        alive = full ^ s
        if not weak & alive:
            # reachability closure from the lowest alive vertex
            seen = alive & -alive
            if tables is None:
                while True:
                    grown = seen
                    f = seen
                    while f:
                        low = f & -f
                        grown |= rows[low.bit_length() - 1]
                        f ^= low
                    grown &= alive
                    if grown == seen:
                        break
                    seen = grown
            else:
                while True:
                    grown = seen
                    f = seen
                    for tab in tables:
                        grown |= tab[f & _CHUNK_FULL]
                        f >>= _CHUNK_BITS
                    grown &= alive
                    if grown == seen:
                        break
                    seen = grown
            if seen != alive:
                # disconnected: now the degree condition, over the only
                # vertices whose degree can have dropped
                exposed = neighborhood_mask(rows, tables, s) & alive
                for v in bits_of(exposed):
                    if (rows[v] & alive).bit_count() < h:
                        break
                else:
                    return "hit", scanned, s, scanned + 1
        scanned += 1
        if scanned >= next_check:
            next_check += _BATCH
            if deadline is not None and time.monotonic() > deadline:
                return "deadline", None, 0, scanned
        s = _next_colex_mask(s)
    return "done", None, 0, scanned


_WORKER_STATE: dict = {}


def _worker_init(rows, order):
    _WORKER_STATE["rows"] = rows
    _WORKER_STATE["tables"] = build_closure_tables(rows) if order <= 192 else None
    _WORKER_STATE["full"] = (1 << order) - 1


def _worker_scan(h, m, start_idx, count):
    rows = _WORKER_STATE["rows"]
    weak = 0
    for v, row in enumerate(rows):
        if row.bit_count() < h:
            weak |= 1 << v
    start_mask = mask_of(colex_unrank(start_idx, m))
    status, offset, hit_mask, _ = _scan_colex(
        rows, _WORKER_STATE["tables"], _WORKER_STATE["full"], weak,
        h, m, start_mask, count, None,
    )
    return (start_idx + offset, hit_mask) if status == "hit" else None


# ---------------------------------------------------------------------------
# The exact oracle


def _certificate_from_mask(rows, tables, full, hit_mask, h, to_global) -> CutCertificate:
    alive = full ^ hit_mask
    comps = []
    rest = alive
    while rest:
        comp = reach_mask(rows, tables, alive, rest & -rest)
        comps.append(list(bits_of(comp)))
        rest &= ~comp
    witness = min(comps, key=lambda c: (len(c), c[0]))
    cut = list(bits_of(hit_mask))
    if to_global is not None:
        cut = [to_global[v] for v in cut]
        witness = [to_global[v] for v in witness]
    return CutCertificate(tuple(cut), tuple(witness), h, True)


def kappa_super_exact(
    view: GraphView,
    h: int,
    *,
    upper_hint: CutCertificate | None = None,
    budget: Budget | None = None,
    known_connectivity: int | None = None,
    workers: int = 1,
    resume: tuple[int, int] | None = None,
) -> SearchResult:
    """Exact h-super connectivity by certified exhaustive subset search.

    Enumerates candidate removal sets of each size in colexicographic order,
    smallest size first, and reports the first h-cut found.  ``upper_hint``
    (a validated h-cut, e.g. from :func:`construct_cut`) caps the search:
    once every smaller size is ruled out, the hint's size and certificate
    are returned.  ``known_connectivity`` may pass a trusted classical
    connectivity value to skip sizes no vertex cut can reach.  When the
    budget runs out the result carries partial bounds and a resume
    checkpoint instead of a value.

    With ``workers`` > 1 the per-size index space is split into chunks
    handled by separate processes; chunk results are reduced in colex order,
    so the reported certificate is the globally first hit regardless of
    scheduling.
    """
    t_start = time.monotonic()
    if h < 0:
        raise DomainError(f"h must be >= 0, got {h}")
    if workers < 1:
        raise DomainError(f"workers must be >= 1, got {workers}")

    if view.removed_mask:
        to_global = list(bits_of(view.alive_mask))
        rows = tuple(induced_rows(view, to_global))
    else:
        to_global = None
        rows = view.rows
    order = len(rows)
    full = (1 << order) - 1
    tables = build_closure_tables(rows) if order <= 192 else None
    if order < 2 or not connected_within(rows, tables, full):
        raise DomainError("h-cut search is defined on connected graphs of order >= 2")

    weak = 0
    for v, row in enumerate(rows):
        if row.bit_count() < h:
            weak |= 1 << v

    if upper_hint is not None:
        if upper_hint.h != h:
            raise DomainError(f"hint certifies h={upper_hint.h}, search wants h={h}")
        if not is_h_cut(view, upper_hint.cut, h):
            raise DomainError("upper_hint does not validate as an h-cut")

    lower = max(1, known_connectivity or 1)
    # removals beyond this size leave fewer than two components of >= h+1
    # vertices each, so no h-cut exists there
    cap = order - 2 * (h + 1)
    top = cap if upper_hint is None else min(cap, upper_hint.size - 1)

    # a checkpoint asserts that everything before (size, index) was already
    # ruled out by the interrupted run
    start_size, start_idx = resume if resume is not None else (lower, 0)

    deadline = t_start + budget.seconds if budget and budget.seconds is not None else None
    candidate_cap = budget.candidates if budget and budget.candidates is not None else None
    checked = 0

    def finish(value, cert, exhaustive_below, budget_hit, checkpoint=None):
        return SearchResult(
            h=h,
            value=value,
            certificate=cert,
            exhaustive_below=exhaustive_below,
            elapsed_ms=(time.monotonic() - t_start) * 1000.0,
            budget_hit=budget_hit,
            candidates_checked=checked,
            checkpoint=checkpoint,
        )

    pool = None
    try:
        for m in range(start_size, top + 1):
            total = math.comb(order, m)
            idx = start_idx if m == start_size else 0
            while idx < total:
                count = total - idx
                if candidate_cap is not None:
                    count = min(count, candidate_cap - checked)
                if count <= 0 or (deadline is not None and time.monotonic() > deadline):
                    return finish(None, None, m, True, (m, idx))
                if workers == 1 or count < 2 * _BATCH:
                    start_mask = mask_of(colex_unrank(idx, m))
                    status, offset, hit_mask, scanned = _scan_colex(
                        rows, tables, full, weak, h, m, start_mask, count, deadline,
                    )
                    if status == "hit":
                        checked += offset + 1
                        cert = _certificate_from_mask(rows, tables, full, hit_mask, h, to_global)
                        return finish(m, cert, m, False)
                    checked += scanned
                    idx += scanned
                    if status == "deadline":
                        return finish(None, None, m, True, (m, idx))
                    if candidate_cap is not None and checked >= candidate_cap and idx < total:
                        return finish(None, None, m, True, (m, idx))
                else:
                    if pool is None:
                        pool = ProcessPoolExecutor(
                            max_workers=workers,
                            initializer=_worker_init,
                            initargs=(rows, order),
                        )
                    chunk = max(_BATCH, min(200_000, count // (workers * 8) + 1))
                    futures = []
                    at = idx
                    while at < idx + count:
                        step = min(chunk, idx + count - at)
                        futures.append((at, step, pool.submit(_worker_scan, h, m, at, step)))
                        at += step
                    hit = None
                    completed = 0
                    for chunk_start, step, fut in futures:
                        if hit is not None or (deadline is not None and time.monotonic() > deadline):
                            fut.cancel()
                            continue
                        res = fut.result()
                        completed += step
                        if res is not None:
                            hit = res
                    if hit is not None:
                        hit_idx, hit_mask = hit
                        checked += hit_idx - idx + 1
                        cert = _certificate_from_mask(rows, tables, full, hit_mask, h, to_global)
                        return finish(m, cert, m, False)
                    checked += completed
                    idx += completed
                    if completed < count:  # deadline interrupted the chunk walk
                        return finish(None, None, m, True, (m, idx))
                    if candidate_cap is not None and checked >= candidate_cap and idx < total:
                        return finish(None, None, m, True, (m, idx))
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)

    if upper_hint is not None:
        return finish(upper_hint.size, upper_hint, upper_hint.size, False)
    # every size up to the counting cap was ruled out, and sizes past the cap
    # cannot host an h-cut at all: report nonexistence with the full frontier
    return finish(None, None, order, False)


# ---------------------------------------------------------------------------
# Constructive upper bound


def construct_cut(
    g: StarGraph, alpha: Sequence[int], x_vertices: Sequence[int], h: int
) -> CutCertificate:
    """Build the explicit h-cut around an (h+1)-subset X of one clique.

    The cut is the rest of X's clique plus all swap-neighbors of X; its size
    is exactly n + h(k-2) - 1, and X survives as a connected component.  The
    certificate is re-validated before being returned; a validation failure
    is an internal bug, not a usage error.
    """
    n, k = g.n, g.k
    if not 2 <= k <= n - 1:
        raise DomainError(f"construction needs 2 <= k <= n-1, got n={n}, k={k}")
    if not 0 <= h <= n - k:
        raise DomainError(f"construction needs 0 <= h <= n-k, got h={h}, n-k={n - k}")
    members = clique_members(g, tuple(alpha))
    x = sorted(set(x_vertices))
    if len(x) != len(list(x_vertices)):
        raise DomainError("X contains duplicate vertices")
    if len(x) != h + 1:
        raise DomainError(f"X must have exactly h+1={h + 1} vertices, got {len(x)}")
    member_set = set(members)
    for v in x:
        if v not in member_set:
            raise DomainError(f"vertex {v} is not in the clique with suffix {tuple(alpha)}")

    swap_nbrs: list[int] = []
    for v in x:
        for u, kind in g.nbrs[v]:
            if kind != UNSWAP:
                swap_nbrs.append(u)
    if len(set(swap_nbrs)) != len(swap_nbrs):
        raise InternalInconsistencyError("swap-neighbors of X collide")

    cut = sorted((member_set - set(x)) | set(swap_nbrs))
    if len(cut) != theorem_value(n, k, h):
        raise InternalInconsistencyError(
            f"constructed cut has size {len(cut)}, expected {theorem_value(n, k, h)}"
        )
    view = GraphView(g.rows)
    diag = is_h_cut(view, cut, h)
    if not diag:
        raise InternalInconsistencyError(f"constructed cut failed validation: {diag.reason}")
    alive = view.full_mask & ~mask_of(cut)
    comp = reach_mask(g.rows, view.closure_tables(), alive, 1 << x[0])
    if comp != mask_of(x):
        raise InternalInconsistencyError("X is not a connected component of the residue")
    return CutCertificate(tuple(cut), tuple(x), h, True)


def default_cut(g: StarGraph, h: int) -> CutCertificate:
    """The construction applied to the lexicographically first clique and its
    first h+1 members."""
    alpha = tuple(range(1, g.k))
    members = clique_members(g, alpha)
    return construct_cut(g, alpha, members[: h + 1], h)


# ---------------------------------------------------------------------------
# Fragment upper-bound heuristic


def _connected_subsets(rows, alive, max_size):
    """Yield every connected vertex set of size <= max_size exactly once.

    Sets are rooted at their minimum vertex; a branch either includes the
    next frontier vertex or bans it from the whole subtree.
    """
    def grow(s, frontier, banned):
        yield s
        if s.bit_count() >= max_size:
            return
        f = frontier
        b = banned
        while f:
            low = f & -f
            f ^= low
            v = low.bit_length() - 1
            nxt = s | low
            new_frontier = (f | (rows[v] & above & ~b)) & ~nxt
            yield from grow(nxt, new_frontier, b)
            b |= low

    for root in bits_of(alive):
        above = alive & ~((1 << (root + 1)) - 1)
        yield from grow(1 << root, rows[root] & above, 0)


def kappa_super_upper(view: GraphView, h: int, max_fragment: int) -> int | None:
    """Upper bound on the h-super connectivity from small-fragment neighborhoods.

    Enumerates connected sets X of at most ``max_fragment`` vertices whose
    induced minimum degree is at least h, and tests each neighborhood N(X) as
    an h-cut.  Returns the smallest validating |N(X)|, or None when no
    fragment works.  This is an upper bound only: a minimum h-cut need not be
    the neighborhood of any component, so it never certifies minimality.
    """
    if max_fragment < h + 1:
        raise DomainError(f"max_fragment must be >= h+1={h + 1}, got {max_fragment}")
    rows = view.rows
    tables = view.closure_tables()
    alive = view.alive_mask
    best: int | None = None
    for x_mask in _connected_subsets(rows, alive, max_fragment):
        ok = True
        for v in bits_of(x_mask):
            if (rows[v] & x_mask).bit_count() < h:
                ok = False
                break
        if not ok:
            continue
        nb = neighborhood_mask(rows, tables, x_mask) & alive & ~x_mask
        size = nb.bit_count()
        if best is not None and size >= best:
            continue
        if is_h_cut(view, bits_of(nb), h):
            best = size
    return best


# ---------------------------------------------------------------------------
# Projection of a minimum cut onto the recursive decomposition


@dataclass(frozen=True)
class ProjectionAnalysis:
    """How a minimum h-cut distributes over the blocks with fixed t-th symbol.

    The analyzed component is the smallest one left by the cut (ties broken
    toward the smallest vertex ID); ``note`` records that choice.  For every
    block holding both component and non-component survivors, the cut's part
    must itself be an (h-1)-cut of that block, and the cut size must be at
    least the number of such blocks times the closed-form value one level
    down.
    """

    t: int
    h: int
    witness: tuple[int, ...]
    witness_parts: dict[int, tuple[int, ...]] = field(repr=False)
    rest_parts: dict[int, tuple[int, ...]] = field(repr=False)
    cut_parts: dict[int, tuple[int, ...]] = field(repr=False)
    witness_blocks: frozenset[int] = frozenset()
    rest_blocks: frozenset[int] = frozenset()
    shared_blocks: frozenset[int] = frozenset()
    cover_ok: bool = False
    block_cut_checks: dict[int, bool] = field(default_factory=dict)
    size_lower_bound: int = 0
    size_ok: bool = False
    note: str = ""

    @property
    def all_ok(self) -> bool:
        return self.cover_ok and self.size_ok and all(self.block_cut_checks.values())


def cut_projection(
    g: StarGraph, cert: CutCertificate, t: int, proved_minimum: int
) -> ProjectionAnalysis:
    """Project a proved-minimum h-cut onto the blocks with fixed t-th symbol.

    ``proved_minimum`` must be the exhaustively certified h-super
    connectivity (e.g. ``SearchResult.value``); it guards against analyzing a
    non-minimum cut, for which none of the checked claims are guaranteed.
    """
    n, k = g.n, g.k
    if not 3 <= k <= n - 1:
        raise DomainError(f"projection needs 3 <= k <= n-1, got n={n}, k={k}")
    h = cert.h
    if not 1 <= h <= n - k:
        raise DomainError(f"projection needs 1 <= h <= n-k, got h={h}, n-k={n - k}")
    if not 2 <= t <= k:
        raise DomainError(f"position t must be in 2..{k}, got {t}")
    if cert.size != proved_minimum:
        raise DomainError(
            f"certificate size {cert.size} differs from the proved minimum {proved_minimum}"
        )
    view = GraphView(g.rows)
    if not is_h_cut(view, cert.cut, h):
        raise DomainError("certificate does not validate as an h-cut")

    comps = components(view, cert.cut)
    witness = min(comps, key=lambda c: (len(c), c[0]))
    cut_set = set(cert.cut)
    witness_set = set(witness)

    witness_parts: dict[int, list[int]] = {i: [] for i in range(1, n + 1)}
    rest_parts: dict[int, list[int]] = {i: [] for i in range(1, n + 1)}
    cut_parts: dict[int, list[int]] = {i: [] for i in range(1, n + 1)}
    for v, p in enumerate(g.verts):
        i = p[t - 1]
        if v in cut_set:
            cut_parts[i].append(v)
        elif v in witness_set:
            witness_parts[i].append(v)
        else:
            rest_parts[i].append(v)

    witness_blocks = frozenset(i for i, part in witness_parts.items() if part)
    rest_blocks = frozenset(i for i, part in rest_parts.items() if part)
    shared_blocks = witness_blocks & rest_blocks
    cover_ok = witness_blocks | rest_blocks == set(range(1, n + 1))

    block_cut_checks: dict[int, bool] = {}
    for i in sorted(shared_blocks):
        block = subgraph_vertices(g, t, i)
        local = {v: j for j, v in enumerate(block)}
        block_view = GraphView(induced_rows(view, block))
        block_cut_checks[i] = bool(
            is_h_cut(block_view, [local[v] for v in cut_parts[i]], h - 1)
        )

    size_lower_bound = len(shared_blocks) * theorem_value(n - 1, k - 1, h - 1)
    return ProjectionAnalysis(
        t=t,
        h=h,
        witness=tuple(witness),
        witness_parts={i: tuple(p) for i, p in witness_parts.items()},
        rest_parts={i: tuple(p) for i, p in rest_parts.items()},
        cut_parts={i: tuple(p) for i, p in cut_parts.items()},
        witness_blocks=witness_blocks,
        rest_blocks=rest_blocks,
        shared_blocks=shared_blocks,
        cover_ok=cover_ok,
        block_cut_checks=block_cut_checks,
        size_lower_bound=size_lower_bound,
        size_ok=cert.size >= size_lower_bound,
        note="analyzed component = smallest component of the residual graph",
    )
