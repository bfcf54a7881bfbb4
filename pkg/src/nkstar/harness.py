"""Batch suites that re-verify the structural facts and the closed-form
h-super connectivity value across parameter grids.

Every suite is exhaustive at its scale and reports the first counterexample
it meets (switch ``count_all`` on to keep going and count them all).  The
theorem cells call the exact search oracle and therefore honor a resource
budget; the structure suites are cheap and exempt from it.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .cuts import (
    Budget,
    CutCertificate,
    SearchResult,
    default_cut,
    kappa_super_exact,
    theorem_value,
)
from .errors import DomainError
from .graphs import GraphView, shortest_cycle_through_edge
from .perms import count as perm_count
from .perms import perm_text
from .stargraph import (
    UNSWAP,
    StarGraph,
    all_cliques,
    build,
    clique_members,
    cross_edges,
    kind_text,
    subgraph_projection,
    subgraph_vertices,
)


@dataclass
class VerificationReport:
    """Machine-readable outcome of one suite run."""

    target: str
    parameters: dict
    status: str  # "pass" | "fail" | "skipped-budget"
    details: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "pass"


class _Suite:
    """Collects violations; first one stops the scan unless count_all."""

    def __init__(self, count_all: bool):
        self.count_all = count_all
        self.violations = 0
        self.first: dict | None = None

    def flag(self, **counterexample) -> bool:
        """Record a violation; returns True when scanning should stop."""
        self.violations += 1
        if self.first is None:
            self.first = counterexample
        return not self.count_all

    def wrap(self, target: str, parameters: dict, details: dict, t0: float) -> VerificationReport:
        if self.violations:
            details = dict(details)
            details["violations"] = self.violations
            details["counterexample"] = self.first
            status = "fail"
        else:
            status = "pass"
        return VerificationReport(
            target, parameters, status, details, (time.monotonic() - t0) * 1000.0
        )


def _clique_partition_suite(g: StarGraph, count_all: bool) -> VerificationReport:
    """Cliques of common-suffix vertices partition the graph, each complete
    of order n-k+1 with unswap internal edges."""
    t0 = time.monotonic()
    suite = _Suite(count_all)
    expected_order = g.n - g.k + 1
    suffixes = all_cliques(g)
    covered = 0
    done = False
    for alpha in suffixes:
        members = clique_members(g, alpha)
        covered += len(members)
        if len(members) != expected_order:
            if suite.flag(clique=perm_text(alpha), size=len(members), expected=expected_order):
                done = True
                break
        for a_ix, u in enumerate(members):
            for v in members[a_ix + 1:]:
                kinds = [kind for w, kind in g.nbrs[u] if w == v]
                if kinds != [UNSWAP]:
                    if suite.flag(
                        clique=perm_text(alpha),
                        pair=[perm_text(g.verts[u]), perm_text(g.verts[v])],
                        problem="missing or non-unswap clique edge",
                    ):
                        done = True
                        break
            if done:
                break
        if done:
            break
    if not done and covered != g.order:
        suite.flag(problem="cliques do not cover every vertex", covered=covered)
    details = {
        "cliques": len(suffixes),
        "expected_cliques": perm_count(g.n, g.k - 1) if g.k >= 2 else 1,
        "clique_order": expected_order,
    }
    return suite.wrap("clique-partition", {"n": g.n, "k": g.k}, details, t0)


def _inter_clique_suite(g: StarGraph, count_all: bool) -> VerificationReport:
    """Between two distinct cliques there is at most one edge, always a swap-edge."""
    t0 = time.monotonic()
    suite = _Suite(count_all)
    seen: dict[tuple, tuple[int, int]] = {}
    linked_pairs = 0
    for u, v, kind in g.edges():
        a, b = g.verts[u][1:], g.verts[v][1:]
        if a == b:
            continue
        if kind == UNSWAP:
            if suite.flag(
                edge=[perm_text(g.verts[u]), perm_text(g.verts[v])],
                problem="unswap edge crosses cliques",
            ):
                break
        key = (a, b) if a < b else (b, a)
        if key in seen:
            pu, pv = seen[key]
            if suite.flag(
                cliques=[perm_text(key[0]), perm_text(key[1])],
                edges=[
                    [perm_text(g.verts[pu]), perm_text(g.verts[pv])],
                    [perm_text(g.verts[u]), perm_text(g.verts[v])],
                ],
                problem="two edges between one clique pair",
            ):
                break
        else:
            seen[key] = (u, v)
            linked_pairs += 1
    details = {"linked_clique_pairs": linked_pairs}
    return suite.wrap("inter-clique-edges", {"n": g.n, "k": g.k}, details, t0)


def _projected_kind(kind: int, t: int) -> int:
    if kind == UNSWAP:
        return UNSWAP
    return kind if kind < t else kind - 1


def _decomposition_suite(g: StarGraph, count_all: bool) -> VerificationReport:
    """Fixing the t-th symbol splits the graph into n relabeled copies of the
    (n-1,k-1)-star, joined pairwise by (n-2)!/(n-k)! disjoint swap-edges."""
    t0 = time.monotonic()
    suite = _Suite(count_all)
    n, k = g.n, g.k
    small = build(n - 1, k - 1)
    small_edges = {(u, v, kind) for u, v, kind in small.edges()}
    expected_cross = math.factorial(n - 2) // math.factorial(n - k)
    stats = {"blocks_checked": 0, "cross_pairs_checked": 0}

    def scan() -> None:
        for t in range(2, k + 1):
            covered: list[int] = []
            for i in range(1, n + 1):
                pairs = subgraph_projection(g, t, i)
                covered.extend(v for v, _ in pairs)
                mapping = {v: small.index.get(q) for v, q in pairs}
                if None in mapping.values() or len(mapping) != small.order \
                        or len(set(mapping.values())) != small.order:
                    if suite.flag(t=t, block=i, problem="relabeling is not a bijection"):
                        return
                    continue
                block_set = set(mapping)
                projected = set()
                for v in mapping:
                    outside = [(w, kind) for w, kind in g.nbrs[v] if w not in block_set]
                    if len(outside) != 1 or outside[0][1] != t:
                        if suite.flag(
                            t=t, block=i, vertex=perm_text(g.verts[v]),
                            outside=[kind_text(kind) for _, kind in outside],
                            problem="vertex must leave its block through exactly one t-swap",
                        ):
                            return
                    for w, kind in g.nbrs[v]:
                        if w in block_set and v < w:
                            a, b = mapping[v], mapping[w]
                            projected.add((min(a, b), max(a, b), _projected_kind(kind, t)))
                if projected != small_edges:
                    sample = sorted(projected ^ small_edges)[:3]
                    if suite.flag(
                        t=t, block=i, problem="relabeled adjacency differs from the smaller star",
                        edge_difference_sample=[list(e) for e in sample],
                    ):
                        return
                stats["blocks_checked"] += 1
            if sorted(covered) != list(range(g.order)):
                if suite.flag(t=t, problem="blocks do not partition the vertex set"):
                    return
            for i in range(1, n + 1):
                for j in range(i + 1, n + 1):
                    edges = cross_edges(g, t, i, j)
                    stats["cross_pairs_checked"] += 1
                    if len(edges) != expected_cross:
                        if suite.flag(
                            t=t, blocks=[i, j], got=len(edges), expected=expected_cross,
                            problem="cross-edge count mismatch",
                        ):
                            return
                    ends: set[int] = set()
                    for u, v, kind in edges:
                        if kind != t or u in ends or v in ends:
                            if suite.flag(
                                t=t, blocks=[i, j],
                                edge=[perm_text(g.verts[u]), perm_text(g.verts[v])],
                                kind=kind_text(kind),
                                problem="cross edges must be endpoint-disjoint t-swaps",
                            ):
                                return
                        ends.add(u)
                        ends.add(v)

    scan()
    details = {
        "positions": list(range(2, k + 1)),
        "expected_cross_count": expected_cross,
        **stats,
    }
    return suite.wrap("block-decomposition", {"n": g.n, "k": g.k}, details, t0)


def _swap_girth_suite(g: StarGraph, count_all: bool) -> VerificationReport:
    """Every cycle through a swap-edge has length at least six."""
    t0 = time.monotonic()
    suite = _Suite(count_all)
    view = GraphView(g.rows)
    scanned = 0
    shortest: int | None = None
    for u, v, kind in g.edges():
        if kind == UNSWAP:
            continue
        scanned += 1
        length = shortest_cycle_through_edge(view, u, v)
        if length is not None and (shortest is None or length < shortest):
            shortest = length
        if length is not None and length < 6:
            if suite.flag(
                edge=[perm_text(g.verts[u]), perm_text(g.verts[v])],
                cycle_length=length,
            ):
                break
    details = {"swap_edges_scanned": scanned, "shortest_cycle_seen": shortest}
    return suite.wrap("swap-edge-girth", {"n": g.n, "k": g.k}, details, t0)


def verify_structure(n: int, k: int, count_all: bool = False) -> list[VerificationReport]:
    """Run all four structural suites exhaustively on the (n,k)-star graph."""
    if not 2 <= k <= n - 1:
        raise DomainError(f"structure suites need 2 <= k <= n-1, got n={n}, k={k}")
    g = build(n, k)
    return [
        _clique_partition_suite(g, count_all),
        _inter_clique_suite(g, count_all),
        _decomposition_suite(g, count_all),
        _swap_girth_suite(g, count_all),
    ]


# signature: search_fn(g, view, h, hint, budget, workers) -> SearchResult;
# injectable so a caller can slot in caching around the oracle
SearchFn = Callable[..., SearchResult]


def _run_search(g: StarGraph, view: GraphView, h: int, hint: CutCertificate | None,
                budget: Budget | None, workers: int) -> SearchResult:
    return kappa_super_exact(view, h, upper_hint=hint, budget=budget, workers=workers)


def _certificate_details(g: StarGraph, cert: CutCertificate | None) -> dict | None:
    if cert is None:
        return None
    return {
        "cut": [perm_text(g.verts[v]) for v in cert.cut],
        "witness": [perm_text(g.verts[v]) for v in cert.witness],
        "h": cert.h,
        "size": cert.size,
        "valid": cert.valid,
    }


def verify_theorem(
    n: int,
    k: int,
    h: int,
    budget: Budget | None = None,
    *,
    use_hint: bool = True,
    workers: int = 1,
    search_fn: SearchFn = _run_search,
) -> VerificationReport:
    """Check the closed-form value n + h(k-2) - 1 by exhaustive search.

    Builds the constructive cut as an upper hint (unless ``use_hint`` is
    off), runs the oracle, and compares.  Budget exhaustion yields status
    "skipped-budget" with the partial bounds attached instead of failing.
    """
    t0 = time.monotonic()
    expected = theorem_value(n, k, h)
    g = build(n, k)
    view = GraphView(g.rows)
    hint = default_cut(g, h) if use_hint else None
    result = search_fn(g, view, h, hint, budget, workers)
    params = {"n": n, "k": k, "h": h}
    details: dict = {
        "expected": expected,
        "exhaustive_below": result.exhaustive_below,
        "candidates_checked": result.candidates_checked,
        "hint_size": hint.size if hint else None,
    }
    if result.budget_hit:
        details["upper_bound"] = hint.size if hint else None
        details["checkpoint"] = list(result.checkpoint) if result.checkpoint else None
        status = "skipped-budget"
    else:
        details["value"] = result.value if result.value is not None else "none-found"
        details["certificate"] = _certificate_details(g, result.certificate)
        if result.value == expected:
            status = "pass"
        else:
            status = "fail"
            details["counterexample"] = details["certificate"] or {
                "problem": "no cut found below the expected value"
            }
    return VerificationReport(
        "super-connectivity-value", params, status, details,
        (time.monotonic() - t0) * 1000.0,
    )


def grid_run(
    n_values: Sequence[int],
    k_values: Sequence[int] | None = None,
    h_values: Sequence[int] | None = None,
    budget: Budget | None = None,
    *,
    workers: int = 1,
    extra_cells: Sequence[tuple[int, int, int]] = (),
    search_fn: SearchFn = _run_search,
) -> tuple[list[VerificationReport], str]:
    """Run structure and theorem suites over a parameter grid.

    Defaults cover every valid k for each n and every in-domain h for each
    (n, k).  ``extra_cells`` may add out-of-theorem-domain (n, k, h) cells:
    those run the oracle and report its value without a pass/fail target.
    A failing structure suite aborts the theorem cells of its (n, k).
    """
    reports: list[VerificationReport] = []
    for n in sorted(set(n_values)):
        ks = [k for k in (k_values or range(2, n))] if k_values is not None else list(range(2, n))
        for k in sorted(set(ks)):
            if not 2 <= k <= n - 1:
                continue
            structure = verify_structure(n, k)
            reports.extend(structure)
            structure_ok = all(r.passed for r in structure)
            hs = [h for h in (h_values if h_values is not None else range(0, n - k + 1))
                  if 0 <= h <= n - k]
            for h in sorted(set(hs)):
                if not structure_ok:
                    reports.append(VerificationReport(
                        "super-connectivity-value", {"n": n, "k": k, "h": h}, "fail",
                        {"aborted": "structure suites failed for this graph"},
                    ))
                    continue
                reports.append(verify_theorem(
                    n, k, h, budget, workers=workers, search_fn=search_fn,
                ))
    for n, k, h in extra_cells:
        g = build(n, k)
        view = GraphView(g.rows)
        try:
            hint = default_cut(g, h)
        except DomainError:
            hint = None
        result = search_fn(g, view, h, hint, budget, workers)
        params = {"n": n, "k": k, "h": h}
        details = {
            "label": "out-of-theorem-domain",
            "exhaustive_below": result.exhaustive_below,
            "candidates_checked": result.candidates_checked,
        }
        if result.budget_hit:
            status = "skipped-budget"
            details["checkpoint"] = list(result.checkpoint) if result.checkpoint else None
        else:
            status = "pass"
            details["value"] = result.value if result.value is not None else "none-found"
            details["certificate"] = _certificate_details(g, result.certificate)
        reports.append(VerificationReport(
            "super-connectivity-value", params, status, details,
        ))
    return reports, render_summary(reports)


def render_summary(reports: Sequence[VerificationReport]) -> str:
    """Aligned plain-text table, one row per report, in deterministic order."""
    header = ("n", "k", "h", "target", "status", "value", "expected")
    rows = [header]
    for r in reports:
        value = r.details.get("value", "")
        expected = r.details.get("expected", "")
        rows.append((
            str(r.parameters.get("n", "")),
            str(r.parameters.get("k", "")),
            str(r.parameters.get("h", "")),
            r.target,
            r.status,
            str(value),
            str(expected),
        ))
    widths = [max(len(row[c]) for row in rows) for c in range(len(header))]
    lines = ["  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row)).rstrip()
             for row in rows]
    return "\n".join(lines)
