"""Verification of the non-leaving-face property.

Two independent routes are run and compared:

* geodesic route: every interior vertex of every geodesic between ``v`` and
  ``w`` must contain the common variables of ``v`` and ``w``;
* projection route: every face admits a map satisfying the projection
  axioms, built from Bongartz completions.

A pair on which the routes disagree is itself reported.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from clusternlf.bongartz import Projection, projection
from clusternlf.graph import ExchangeGraph, bfs_distances, geodesics

DEFAULT_PAIR_BUDGET = 1_000_000
DEFAULT_PATH_BUDGET = 10_000


@dataclass
class PairResult:
    v: int
    w: int
    U: frozenset
    geodesics: int
    length: int
    truncated: bool
    violations: list[dict]


def check_pair(g: ExchangeGraph, v: int, w: int, paths: Sequence[Sequence[int]]) -> list[dict]:
    """Violations of face containment by the given ``v``-``w`` paths."""
    U = g.vertices[v].as_set() & g.vertices[w].as_set()
    bad = []
    for path in paths:
        for u in path[1:-1]:
            if not U <= g.vertices[u].as_set():
                bad.append(
                    {
                        "v": v,
                        "w": w,
                        "geodesic": list(path),
                        "leaving_vertex": u,
                        "U": sorted(str(x) for x in U),
                    }
                )
                break
    return bad


def _run_pair(g: ExchangeGraph, v: int, w: int, path_budget: int) -> PairResult:
    geo = geodesics(g, v, w, path_budget)
    U = g.vertices[v].as_set() & g.vertices[w].as_set()
    length = len(geo.paths[0]) - 1 if geo.paths else -1
    return PairResult(v, w, U, len(geo.paths), length, geo.truncated, check_pair(g, v, w, geo.paths))


def _run_chunk(args) -> list[PairResult]:
    g, pairs, path_budget = args
    return [_run_pair(g, v, w, path_budget) for v, w in pairs]


def select_pairs(n_vertices: int, pair_budget: int) -> tuple[list[tuple[int, int]], bool]:
    """All unordered pairs, or a fixed-stride subsample if over budget."""
    pairs = list(combinations(range(n_vertices), 2))
    if len(pairs) <= pair_budget:
        return pairs, True
    stride = -(-len(pairs) // pair_budget)
    return pairs[::stride], False


@dataclass
class NlfReport:
    vertices: int
    edges: int
    rank: int
    exhaustive: bool = True
    pairs_checked: int = 0
    geodesics_checked: int = 0
    truncated_pairs: list[list[int]] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)
    projections: list[Projection] = field(default_factory=list)
    disagreements: list[dict] = field(default_factory=list)
    length_mismatches: list[list[int]] = field(default_factory=list)

    @property
    def faces_audited(self) -> int:
        return len(self.projections)

    @property
    def projection_failures(self) -> list[Projection]:
        return [p for p in self.projections if not p.ok]

    @property
    def ok(self) -> bool:
        return not (
            self.violations
            or self.projection_failures
            or self.disagreements
            or self.length_mismatches
        )

    def to_json(self) -> dict:
        return {
            "graph": {"vertices": self.vertices, "edges": self.edges, "rank": self.rank},
            "exhaustive": self.exhaustive,
            "pairs_checked": self.pairs_checked,
            "geodesics_checked": self.geodesics_checked,
            "truncated_pairs": self.truncated_pairs,
            "violations": self.violations,
            "faces_audited": self.faces_audited,
            "projection_audit": [p.to_json() for p in self.projections],
            "route_disagreements": self.disagreements,
            "length_mismatches": self.length_mismatches,
            "ok": self.ok,
        }

    def summary(self) -> str:
        lines = [
            f"graph: {self.vertices} vertices, {self.edges} edges, rank {self.rank}",
            f"pairs checked: {self.pairs_checked}{'' if self.exhaustive else ' (subsampled)'}",
            f"geodesics checked: {self.geodesics_checked}",
            f"geodesic violations: {len(self.violations)}",
            f"faces audited: {self.faces_audited}, projection failures: {len(self.projection_failures)}",
            f"route disagreements: {len(self.disagreements)}",
            "non-leaving-face property: " + ("HOLDS" if self.ok else "VIOLATED"),
        ]
        return "\n".join(lines)


def verify_nlf(
    g: ExchangeGraph,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
    path_budget: int = DEFAULT_PATH_BUDGET,
    workers: int = 1,
    audit_projections: bool = True,
) -> NlfReport:
    g.require_complete()
    report = NlfReport(len(g), len(g.edges), g.n)
    pairs, report.exhaustive = select_pairs(len(g), pair_budget)

    if workers > 1 and len(pairs) > 1:
        size = -(-len(pairs) // (4 * workers))
        chunks = [(g, pairs[i : i + size], path_budget) for i in range(0, len(pairs), size)]
        with ProcessPoolExecutor(workers) as pool:
            results = [r for chunk in pool.map(_run_chunk, chunks) for r in chunk]
    else:
        results = [_run_pair(g, v, w, path_budget) for v, w in pairs]
    results.sort(key=lambda r: (r.v, r.w))

    dist = {}
    for r in results:
        report.pairs_checked += 1
        report.geodesics_checked += r.geodesics
        if r.truncated:
            report.truncated_pairs.append([r.v, r.w])
        report.violations.extend(r.violations)
        if r.v not in dist:
            dist[r.v] = bfs_distances(g, r.v)
        if r.length != dist[r.v][r.w]:
            report.length_mismatches.append([r.v, r.w])

    if audit_projections:
        by_face: dict[frozenset, Projection] = {}
        for U in g.sub_clusters():
            by_face[U] = projection(g, U)
        report.projections = list(by_face.values())
        for r in results:
            geodesic_ok = not r.violations
            if r.U and len(r.U) < g.n:
                projection_ok = by_face[r.U].ok
            else:
                projection_ok = True  # whole graph or single vertex
            if geodesic_ok != projection_ok:
                report.disagreements.append(
                    {
                        "v": r.v,
                        "w": r.w,
                        "geodesic_route": geodesic_ok,
                        "projection_route": projection_ok,
                    }
                )
    return report
