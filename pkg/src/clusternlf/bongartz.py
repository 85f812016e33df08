"""Bongartz completions and the face projection built from them.

``B_U(t)`` is the unique cluster containing ``U`` whose c-vectors (taken
relative to tree vertex ``t``) are nonnegative at every position not in
``U``.  The normative algorithm scans every vertex of the face ``F_U``; a
directed search that mutates at red non-``U`` positions is available as an
accelerator and is always comparable against the scan.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from clusternlf.errors import FalsificationEvent, MultipleCompletions, NoCompletion
from clusternlf.graph import Cluster, ExchangeGraph, Face, face_of
from clusternlf.laurent import LaurentPoly
from clusternlf.seed import Word, cmatrix, extend_word, initial_seed, mutate_seed, replay


@dataclass(frozen=True)
class CompletionQuery:
    U: frozenset[LaurentPoly]
    root: Word = ()


@dataclass(frozen=True)
class CompletionResult:
    cluster: Cluster
    vertex: int
    witness: Word
    certificate: tuple[tuple[int, tuple[int, ...]], ...]

    def to_json(self, query: CompletionQuery) -> dict:
        return {
            "U": sorted(str(x) for x in query.U),
            "root_path": list(query.root),
            "completion": self.cluster.strings(),
            "vertex": self.vertex,
            "witness_path": list(self.witness),
            "certificate": [{"position": i, "c_vector": list(c)} for i, c in self.certificate],
        }


def _certificate(g: ExchangeGraph, U: frozenset, root: Word, word: Word, variables) -> tuple[bool, tuple]:
    C = cmatrix(g.matrix, root, word)
    cert = tuple(
        (i, C.column(i)) for i, x in enumerate(variables, start=1) if x not in U
    )
    return all(min(c) >= 0 for _, c in cert), cert


def completion_candidates(g: ExchangeGraph, q: CompletionQuery, face: Face | None = None):
    """``(vertex, passed, certificate)`` for every vertex of ``F_U``."""
    face = face or face_of(g, q.U)
    out = []
    for v in sorted(face.vertices):
        seed = g.seeds[v]
        ok, cert = _certificate(g, q.U, q.root, seed.path, seed.variables)
        out.append((v, ok, cert))
    return out


def bongartz_completion(g: ExchangeGraph, q: CompletionQuery, face: Face | None = None) -> CompletionResult:
    g.require_complete()
    passing = [(v, cert) for v, ok, cert in completion_candidates(g, q, face) if ok]
    label = sorted(str(x) for x in q.U)
    if not passing:
        raise NoCompletion(f"no completion of {label} w.r.t. {list(q.root)}")
    if len(passing) > 1:
        raise MultipleCompletions(
            f"{len(passing)} completions of {label} w.r.t. {list(q.root)}: {[v for v, _ in passing]}"
        )
    v, cert = passing[0]
    return CompletionResult(g.vertices[v], v, g.witness(v), cert)


def directed_completion(g: ExchangeGraph, q: CompletionQuery, max_steps: int = 10_000) -> CompletionResult:
    """Walk inside ``F_U`` by mutating at the first non-``U`` position whose
    c-vector is negative until none is left."""
    g.require_complete()
    face = face_of(g, q.U)
    seed = g.seeds[min(face.vertices)]
    for _ in range(max_steps):
        ok, cert = _certificate(g, q.U, q.root, seed.path, seed.variables)
        if ok:
            v = g.index[Cluster.of(seed.variables)]
            return CompletionResult(g.vertices[v], v, seed.path, cert)
        k = next(i for i, c in cert if max(c) <= 0)
        seed = mutate_seed(seed, k)
    raise NoCompletion(f"directed search did not terminate in {max_steps} steps")


# -- projection ----------------------------------------------------------


@dataclass
class Projection:
    face: Face
    image: list[int]
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "U": self.face.label(),
            "face_vertices": sorted(self.face.vertices),
            "image": self.image,
            "violations": self.violations,
        }


def audit_projection(g: ExchangeGraph, face: Face, image: list[int]) -> list[dict]:
    """Check a vertex map against the four projection axioms."""
    bad = []
    face_edges = set(face.edges)
    for v, p in enumerate(image):
        if p not in face:
            bad.append({"axiom": "P1", "vertex": v, "image": p})
        if v in face and p != v:
            bad.append({"axiom": "P2", "vertex": v, "image": p})
    for a, b in g.edges:
        pa, pb = image[a], image[b]
        if pa != pb and (min(pa, pb), max(pa, pb)) not in face_edges:
            bad.append({"axiom": "P3", "edge": [a, b], "image": [pa, pb]})
        if (a in face) != (b in face) and pa != pb:
            bad.append({"axiom": "P4", "edge": [a, b], "image": [pa, pb]})
    return bad


def projection(g: ExchangeGraph, U: Iterable[LaurentPoly]) -> Projection:
    """P_U(v) = B_U(witness(v)) for every vertex, audited against P1-P4.

    A failed completion is recorded as a violation rather than raised so the
    audit of the remaining vertices still runs.
    """
    g.require_complete()
    face = face_of(g, U)
    image, violations = [], []
    for v in range(len(g)):
        try:
            image.append(bongartz_completion(g, CompletionQuery(face.U, g.witness(v)), face).vertex)
        except FalsificationEvent as exc:
            violations.append({"axiom": "completion", "vertex": v, "error": str(exc)})
            image.append(-1)
    if not violations:
        violations = audit_projection(g, face, image)
    return Projection(face, image, violations)


# -- lemma checks ----------------------------------------------------------


@dataclass
class LemmaReport:
    name: str
    checked: int = 0
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"lemma": self.name, "checked": self.checked, "violations": self.violations}


def _subsets(cluster: Cluster, sizes: Iterable[int]):
    for size in sizes:
        for sub in combinations(cluster.variables, size):
            yield frozenset(sub)


def _completion_vertex(g, U, root, report, context) -> int | None:
    try:
        return bongartz_completion(g, CompletionQuery(U, root)).vertex
    except FalsificationEvent as exc:
        report.violations.append({**context, "error": str(exc)})
        return None


def verify_lemma_case1(g: ExchangeGraph, roots: Iterable[tuple[Word, int]]) -> LemmaReport:
    """U inside the root's own cluster completes to that cluster."""
    report = LemmaReport("case-1")
    for word, v in roots:
        for U in _subsets(g.vertices[v], range(g.n + 1)):
            report.checked += 1
            got = _completion_vertex(g, U, word, report, {"root_path": list(word)})
            if got is not None and got != v:
                report.violations.append(
                    {"root_path": list(word), "U": sorted(map(str, U)), "expected": v, "got": got}
                )
    return report


def verify_lemma_case2(g: ExchangeGraph, roots: Iterable[tuple[Word, int]]) -> LemmaReport:
    """Across a root edge s --k-- s' with x_{k;s} in U, the completion
    w.r.t. s' is still the cluster at s."""
    report = LemmaReport("case-2")
    for word, v in roots:
        seed_vars = _seed_at(g, word)
        for k in range(1, g.n + 1):
            xk = seed_vars[k - 1]
            for U in _subsets(g.vertices[v], range(1, g.n + 1)):
                if xk not in U:
                    continue
                report.checked += 1
                nbr = extend_word(word, k)
                ctx = {"root_path": list(word), "k": k, "U": sorted(map(str, U))}
                got = _completion_vertex(g, U, nbr, report, ctx)
                if got is not None and got != v:
                    report.violations.append({**ctx, "expected": v, "got": got})
    return report


def verify_lemma_case3(
    g: ExchangeGraph,
    U: Iterable[LaurentPoly],
    edges: Iterable[tuple[Word, int]] | None = None,
) -> LemmaReport:
    """Completions at the two ends of any tree edge are equal or adjacent.

    ``edges`` is a list of ``(word, k)``; by default every witness word and
    each of its ``n`` tree neighbours.
    """
    U = frozenset(U)
    report = LemmaReport("case-3")
    if edges is None:
        edges = [(g.witness(v), k) for v in range(len(g)) for k in range(1, g.n + 1)]
    sets = [c.as_set() for c in g.vertices]
    for word, k in edges:
        other = extend_word(word, k)
        ctx = {"U": sorted(map(str, U)), "t": list(word), "t_prime": list(other)}
        a = _completion_vertex(g, U, word, report, ctx)
        b = _completion_vertex(g, U, other, report, ctx)
        report.checked += 1
        if a is None or b is None:
            continue
        common = len(sets[a] & sets[b])
        if common not in (g.n, g.n - 1):
            report.violations.append({**ctx, "completions": [a, b], "intersection": common})
    return report


def root_independence(g: ExchangeGraph, U: Iterable[LaurentPoly], words: Iterable[tuple[Word, int]]) -> list[dict]:
    """Tree vertices realising the same cluster must project identically."""
    U = frozenset(U)
    first: dict[int, tuple[Word, int]] = {}
    bad = []
    for word, v in words:
        img = bongartz_completion(g, CompletionQuery(U, word)).vertex
        if v not in first:
            first[v] = (word, img)
        elif first[v][1] != img:
            bad.append(
                {"vertex": v, "paths": [list(first[v][0]), list(word)], "images": [first[v][1], img]}
            )
    return bad


def _seed_at(g: ExchangeGraph, word: Word) -> tuple[LaurentPoly, ...]:
    return replay(initial_seed(g.matrix), word).variables
