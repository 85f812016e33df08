"""Exchange graph enumeration, faces, minimal faces and geodesics.

Vertices are unlabeled clusters identified by their canonical sorted form,
so identification is exact and independent of mutation history.
"""

from __future__ import annotations

import logging
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

from clusternlf.errors import BudgetExceeded, NotAFace
from clusternlf.laurent import LaurentPoly
from clusternlf.seed import (
    ExchangeMatrix,
    LabeledSeed,
    Word,
    initial_seed,
    mutate_seed,
    replay,
    reduced_words,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_VERTICES = 100_000
DEFAULT_MAX_DEPTH = 64


@dataclass(frozen=True)
class Cluster:
    variables: tuple[LaurentPoly, ...]

    @classmethod
    def of(cls, variables: Iterable[LaurentPoly]) -> Cluster:
        vs = tuple(sorted(set(variables), key=LaurentPoly.sort_key))
        return cls(vs)

    def __post_init__(self):
        keys = [v.sort_key() for v in self.variables]
        if keys != sorted(set(keys)):
            raise ValueError("cluster variables must be distinct and canonically sorted")

    def __contains__(self, x: LaurentPoly) -> bool:
        return x in self.variables

    def __len__(self) -> int:
        return len(self.variables)

    def __iter__(self):
        return iter(self.variables)

    def as_set(self) -> frozenset[LaurentPoly]:
        return frozenset(self.variables)

    def strings(self) -> list[str]:
        return [str(v) for v in self.variables]


@dataclass
class ExchangeGraph:
    matrix: ExchangeMatrix
    vertices: list[Cluster]
    seeds: list[LabeledSeed]
    edges: list[tuple[int, int]]
    complete: bool
    index: dict[Cluster, int] = field(default_factory=dict)
    adjacency: list[list[int]] = field(default_factory=list)
    registry: dict[str, frozenset[int]] = field(default_factory=dict)

    def __post_init__(self):
        self.edges = sorted({(min(e), max(e)) for e in self.edges})
        self.index = {c: i for i, c in enumerate(self.vertices)}
        adj: list[set[int]] = [set() for _ in self.vertices]
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        self.adjacency = [sorted(s) for s in adj]
        reg: dict[str, set[int]] = {}
        for i, c in enumerate(self.vertices):
            for v in c:
                reg.setdefault(str(v), set()).add(i)
        self.registry = {k: frozenset(v) for k, v in reg.items()}

    @property
    def n(self) -> int:
        return self.matrix.n

    def __len__(self) -> int:
        return len(self.vertices)

    def witness(self, v: int) -> Word:
        return self.seeds[v].path

    def variables(self) -> list[LaurentPoly]:
        seen = {x for c in self.vertices for x in c}
        return sorted(seen, key=LaurentPoly.sort_key)

    def require_complete(self) -> None:
        if not self.complete:
            raise BudgetExceeded("operation requires a completely enumerated exchange graph")

    def locate(self, word: Word) -> int:
        """Vertex index of the cluster at tree vertex ``word``."""
        seed = replay(initial_seed(self.matrix), word)
        return self.index[Cluster.of(seed.variables)]

    def sub_clusters(self, sizes: Iterable[int] | None = None) -> list[frozenset[LaurentPoly]]:
        """Distinct subsets of clusters with the given sizes, deterministic order."""
        sizes = list(range(1, self.n)) if sizes is None else list(sizes)
        seen: dict[frozenset, None] = {}
        for size in sizes:
            for c in self.vertices:
                for sub in combinations(c.variables, size):
                    seen.setdefault(frozenset(sub), None)
        return list(seen)

    def to_json(self) -> dict:
        return {
            "complete": self.complete,
            "B": self.matrix.tolist(),
            "symmetrizer": list(self.matrix.symmetrizer),
            "vertices": [
                {"id": i, "cluster": c.strings(), "witness_path": list(self.witness(i))}
                for i, c in enumerate(self.vertices)
            ],
            "edges": [list(e) for e in self.edges],
        }

    @classmethod
    def from_json(cls, data: dict) -> ExchangeGraph:
        """Rebuild a graph from :meth:`to_json` output.

        Seeds are replayed from the witness paths and must reproduce the
        stored clusters; edges are taken verbatim from the file.
        """
        B = ExchangeMatrix.from_rows(data["B"], data.get("symmetrizer"))
        start = initial_seed(B)
        vertices, seeds = [], []
        for pos_, rec in enumerate(data["vertices"]):
            if rec.get("id", pos_) != pos_:
                raise ValueError("vertex ids must be 0..V-1 in order")
            seed = replay(start, rec["witness_path"])
            cluster = Cluster.of(seed.variables)
            stored = Cluster.of(LaurentPoly.parse(s, B.n) for s in rec["cluster"])
            if stored != cluster:
                raise ValueError(f"vertex {pos_}: witness path does not reach the stored cluster")
            vertices.append(cluster)
            seeds.append(seed)
        edges = [tuple(e) for e in data["edges"]]
        return cls(B, vertices, seeds, edges, bool(data["complete"]))


def _expand(seed: LabeledSeed) -> list[LabeledSeed]:
    return [mutate_seed(seed, k) for k in range(1, seed.n + 1)]


def enumerate_graph(
    initial: LabeledSeed,
    max_vertices: int = DEFAULT_MAX_VERTICES,
    max_depth: int = DEFAULT_MAX_DEPTH,
    workers: int = 1,
) -> ExchangeGraph:
    """Breadth-first closure of ``initial`` under all mutations.

    Each BFS level is expanded (optionally across worker processes) and then
    deduplicated serially in (parent index, direction) order, so the result
    does not depend on ``workers``.  When a budget prevents adding a new
    cluster, the returned graph is flagged incomplete.
    """
    if max_vertices < 1 or max_depth < 0:
        raise ValueError("budgets must be positive")
    n = initial.n
    vertices = [Cluster.of(initial.variables)]
    seeds = [initial]
    index = {vertices[0]: 0}
    edges: set[tuple[int, int]] = set()
    complete = True
    level = [0]
    depth = 0
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        while level:
            batch = [seeds[v] for v in level]
            if pool is not None:
                expanded = list(pool.map(_expand, batch, chunksize=max(1, len(batch) // (4 * workers))))
            else:
                expanded = [_expand(s) for s in batch]
            nxt = []
            for v, children in zip(level, expanded):
                for child in children:
                    c = Cluster.of(child.variables)
                    if len(c) != n:
                        raise ValueError(f"mutation produced a repeated variable at {child.path}")
                    w = index.get(c)
                    if w is None:
                        if depth + 1 > max_depth or len(vertices) >= max_vertices:
                            complete = False
                            continue
                        w = len(vertices)
                        index[c] = w
                        vertices.append(c)
                        seeds.append(child)
                        nxt.append(w)
                    if w != v:
                        edges.add((min(v, w), max(v, w)))
            level = nxt
            depth += 1
    finally:
        if pool is not None:
            pool.shutdown()
    if not complete:
        log.info("enumeration stopped at %d vertices (incomplete)", len(vertices))
    return ExchangeGraph(initial.matrix, vertices, seeds, sorted(edges), complete)


def enumerate_matrix(rows, symmetrizer=None, **budgets) -> ExchangeGraph:
    return enumerate_graph(initial_seed(ExchangeMatrix.from_rows(rows, symmetrizer)), **budgets)


@dataclass(frozen=True)
class Face:
    U: frozenset[LaurentPoly]
    vertices: frozenset[int]
    edges: tuple[tuple[int, int], ...]

    def __contains__(self, v: int) -> bool:
        return v in self.vertices

    def __le__(self, other: Face) -> bool:
        """Face order: F_U <= F_V iff V is a subset of U."""
        return other.U <= self.U

    def label(self) -> list[str]:
        return sorted(str(x) for x in self.U)


def face_of(g: ExchangeGraph, U: Iterable[LaurentPoly]) -> Face:
    U = frozenset(U)
    verts = frozenset(i for i, c in enumerate(g.vertices) if U <= c.as_set())
    if not verts:
        raise NotAFace(f"no cluster contains {sorted(str(x) for x in U)}")
    edges = tuple(e for e in g.edges if e[0] in verts and e[1] in verts)
    return Face(U, verts, edges)


def minimal_face(g: ExchangeGraph, v: int, w: int) -> Face:
    """Smallest face containing both ``v`` and ``w``: F_U with U the common variables."""
    g.require_complete()
    return face_of(g, g.vertices[v].as_set() & g.vertices[w].as_set())


def bfs_distances(g: ExchangeGraph, source: int) -> list[int]:
    dist = [-1] * len(g)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for x in g.adjacency[u]:
            if dist[x] < 0:
                dist[x] = dist[u] + 1
                queue.append(x)
    return dist


class Geodesics(NamedTuple):
    paths: list[list[int]]
    truncated: bool


def geodesics(g: ExchangeGraph, v: int, w: int, max_paths: int = 10_000) -> Geodesics:
    """All shortest ``v``-``w`` paths, neighbours visited in ascending order."""
    dist = bfs_distances(g, w)
    if dist[v] < 0:
        return Geodesics([], False)
    paths: list[list[int]] = []
    truncated = False
    stack: list[tuple[int, list[int]]] = [(v, [v])]
    while stack:
        u, path = stack.pop()
        if u == w:
            if len(paths) >= max_paths:
                truncated = True
                break
            paths.append(path)
            continue
        nbrs = [x for x in g.adjacency[u] if dist[x] == dist[u] - 1]
        for x in reversed(nbrs):
            stack.append((x, path + [x]))
    return Geodesics(paths, truncated)


# -- post hoc structural checks ------------------------------------------


def check_axioms(g: ExchangeGraph) -> list[str]:
    """Structural invariants of a complete enumeration; returns problems found."""
    problems = []
    n = g.n
    for v, nbrs in enumerate(g.adjacency):
        if len(nbrs) != n:
            problems.append(f"vertex {v} has degree {len(nbrs)} != {n}")
    by_intersection = set()
    sets = [c.as_set() for c in g.vertices]
    for a, b in combinations(range(len(g)), 2):
        if len(sets[a] & sets[b]) == n - 1:
            by_intersection.add((a, b))
    if by_intersection != set(g.edges):
        problems.append("mutation adjacency differs from (n-1)-intersection adjacency")
    # each (n-1)-subset of a cluster lies in exactly two clusters
    for sub in g.sub_clusters([n - 1]):
        count = sum(1 for s in sets if sub <= s)
        if count != 2:
            problems.append(f"{sorted(map(str, sub))} lies in {count} clusters")
    if any(d < 0 for d in bfs_distances(g, 0)):
        problems.append("graph is not connected")
    return problems


def tree_vertices(g: ExchangeGraph, max_depth: int) -> list[tuple[Word, int]]:
    """(reduced word, vertex index) for every tree vertex up to ``max_depth``."""
    out = []
    seeds = {(): initial_seed(g.matrix)}
    for word in reduced_words(g.n, max_depth):
        if word:
            seeds[word] = mutate_seed(seeds[word[:-1]], word[-1])
        out.append((word, g.index[Cluster.of(seeds[word].variables)]))
    return out


def to_dot(g: ExchangeGraph, U: Iterable[LaurentPoly] | None = None) -> str:
    highlight = face_of(g, U).vertices if U is not None else frozenset()
    lines = ["graph exchange {", "  node [shape=box, fontsize=10];"]
    for i, c in enumerate(g.vertices):
        label = '"' + "\\n".join(c.strings()) + '"'
        style = ", style=filled, fillcolor=lightblue" if i in highlight else ""
        lines.append(f"  v{i} [label={label}{style}];")
    for a, b in g.edges:
        bold = " [penwidth=2]" if a in highlight and b in highlight else ""
        lines.append(f"  v{a} -- v{b}{bold};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def shortest_path_lengths(g: ExchangeGraph) -> list[list[int]]:
    return [bfs_distances(g, v) for v in range(len(g))]


def path_is_walk(g: ExchangeGraph, path: Sequence[int]) -> bool:
    return all(b in g.adjacency[a] for a, b in zip(path, path[1:]))
