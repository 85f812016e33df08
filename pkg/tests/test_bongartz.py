import pytest

import clusternlf.bongartz as bz
from clusternlf.bongartz import (
    CompletionQuery,
    audit_projection,
    bongartz_completion,
    completion_candidates,
    directed_completion,
    projection,
    root_independence,
    verify_lemma_case1,
    verify_lemma_case2,
    verify_lemma_case3,
)
from clusternlf.errors import MultipleCompletions, NoCompletion
from clusternlf.graph import Cluster, face_of, tree_vertices
from clusternlf.laurent import LaurentPoly
from clusternlf.seed import CMatrix, ExchangeMatrix, pattern_matrix

P = lambda s: LaurentPoly.parse(s, 2)  # noqa: E731
X1, X2 = P("x1"), P("x2")
Y1 = P("x1^-1 + x1^-1*x2")  # (1+x2)/x1
Y2 = P("x2^-1 + x1*x2^-1")  # (1+x1)/x2
Z = P("x1^-1*x2^-1 + x1^-1 + x2^-1")  # (1+x1+x2)/(x1x2)


def vid(g, *xs):
    return g.index[Cluster.of(xs)]


def recurrence(rows, steps):
    """Plain-list c-vector recurrence, written out independently for the tests."""
    n = len(rows)
    B = [list(r) for r in rows]
    C = [[int(i == j) for j in range(n)] for i in range(n)]
    for k in steps:
        k -= 1
        ck = [C[i][k] for i in range(n)]
        newC = [row[:] for row in C]
        for j in range(n):
            for i in range(n):
                if j == k:
                    newC[i][j] = -ck[i]
                else:
                    b = B[k][j]
                    newC[i][j] = C[i][j] + max(b, 0) * ck[i] + b * max(-ck[i], 0)
        newB = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if k in (i, j):
                    newB[i][j] = -B[i][j]
                else:
                    newB[i][j] = B[i][j] + max(B[i][k], 0) * B[k][j] + B[i][k] * max(-B[k][j], 0)
        B, C = newB, newC
    return C


def test_case1_initial_root(a2, a3):
    for g in (a2, a3):
        for U in g.sub_clusters(range(g.n + 1)):
            if U <= g.vertices[0].as_set():
                res = bongartz_completion(g, CompletionQuery(U, ()))
                assert res.vertex == 0
                for i, c in res.certificate:
                    assert c == CMatrix.identity(g.n).column(i)


def test_a2_completion_of_y1(a2):
    q = CompletionQuery(frozenset([Y1]), ())
    res = bongartz_completion(a2, q)
    assert res.cluster == Cluster.of([Y1, X2])
    assert res.certificate == ((2, (1, 1)),)
    cands = {v: (ok, cert) for v, ok, cert in completion_candidates(a2, q)}
    other = vid(a2, Y1, Z)
    assert cands[other][0] is False
    # position 2 of the seed reached by [1, 2] holds Z with c-vector -(1, 1)
    col = [row[1] for row in recurrence([[0, 1], [-1, 0]], [1, 2])]
    assert cands[other][1] == ((2, tuple(col)),) and col == [-1, -1]


def test_case2_root_edge(a2, a3):
    for g in (a2, a3):
        for k in range(1, g.n + 1):
            xk = g.seeds[0].variables[k - 1]
            for U in g.sub_clusters(range(1, g.n + 1)):
                if xk in U and U <= g.vertices[0].as_set():
                    assert bongartz_completion(g, CompletionQuery(U, (k,))).vertex == 0


def test_directed_matches_brute_force(graphs):
    for g in graphs.values():
        depth = max(len(g.witness(v)) for v in range(len(g))) + 1
        for U in g.sub_clusters(range(g.n + 1)):
            for word, _ in tree_vertices(g, depth):
                q = CompletionQuery(U, word)
                assert directed_completion(g, q).vertex == bongartz_completion(g, q).vertex


def test_completion_result_json(a2):
    q = CompletionQuery(frozenset([Y1]), ())
    rec = bongartz_completion(a2, q).to_json(q)
    assert rec["U"] == ["x1^-1 + x1^-1*x2"]
    assert rec["root_path"] == []
    assert sorted(rec["completion"]) == sorted(["x1^-1 + x1^-1*x2", "x2"])
    assert rec["certificate"] == [{"position": 2, "c_vector": [1, 1]}]


def test_falsification_events_are_raised(a2, monkeypatch):
    q = CompletionQuery(frozenset([X2]), ())
    monkeypatch.setattr(bz, "cmatrix", lambda *a: CMatrix.identity(2))
    with pytest.raises(MultipleCompletions):
        bongartz_completion(a2, q)
    monkeypatch.setattr(bz, "cmatrix", lambda *a: CMatrix(((-1, 0), (0, -1))))
    with pytest.raises(NoCompletion):
        bongartz_completion(a2, q)
    # projection records rather than raises
    P_ = projection(a2, [X2])
    assert not P_.ok and P_.violations[0]["axiom"] == "completion"


# -- projection ----------------------------------------------------------------


def test_projection_a2_examples(a2):
    P_ = projection(a2, [X2])
    assert P_.ok
    for v in P_.face.vertices:
        assert P_.image[v] == v
    assert P_.image[vid(a2, Y1, Z)] == vid(a2, Y1, X2)


def test_projection_a2_far_vertex_by_oracle(a2):
    v = vid(a2, Z, Y2)
    root = a2.witness(v)
    face = face_of(a2, [X2])
    passing = []
    for u in sorted(face.vertices):
        # tree path from root to u's witness; root has no common prefix with u here
        word = a2.witness(u)
        common = 0
        while common < min(len(root), len(word)) and root[common] == word[common]:
            common += 1
        steps = list(reversed(root[common:])) + list(word[common:])
        B_root = pattern_matrix(ExchangeMatrix.from_rows([[0, 1], [-1, 0]]), root).tolist()
        C = recurrence(B_root, steps)
        pos = [i for i, x in enumerate(a2.seeds[u].variables) if x != X2]
        if all(min(C[r][i] for r in range(2)) >= 0 for i in pos):
            passing.append(u)
    assert len(passing) == 1
    assert projection(a2, [X2]).image[v] == passing[0]


def test_projection_axioms_all_faces(graphs):
    for g in graphs.values():
        for U in g.sub_clusters():
            assert projection(g, U).violations == []


def test_audit_detects_each_axiom(a2):
    face = face_of(a2, [X2])
    good = projection(a2, [X2]).image
    inside = sorted(face.vertices)
    outside = [v for v in range(5) if v not in face]

    bad = list(good)
    bad[outside[0]] = outside[1]
    assert "P1" in {x["axiom"] for x in audit_projection(a2, face, bad)}

    bad = list(good)
    bad[inside[0]] = inside[1]
    assert "P2" in {x["axiom"] for x in audit_projection(a2, face, bad)}

    # swap the images of the outside vertices to break P4 on boundary edges
    bad = list(good)
    for v in outside:
        bad[v] = inside[0] if good[v] == inside[1] else inside[1]
    axioms = {x["axiom"] for x in audit_projection(a2, face, bad)}
    assert "P4" in axioms


def test_audit_detects_p3(a3):
    U = next(U for U in a3.sub_clusters([1]))
    face = face_of(a3, U)
    image = list(projection(a3, U).image)
    # send one outside vertex to a face vertex not adjacent to its neighbours' images
    outside = [v for v in range(len(a3)) if v not in face]
    v = outside[0]
    nbr_images = {image[w] for w in a3.adjacency[v]}
    far = next(
        u for u in sorted(face.vertices)
        if all(u != p and (min(u, p), max(u, p)) not in set(face.edges) for p in nbr_images)
    )
    image[v] = far
    assert "P3" in {x["axiom"] for x in audit_projection(a3, face, image)}


# -- lemmas --------------------------------------------------------------------


def test_lemma_reports_clean(graphs):
    for g in graphs.values():
        roots = tree_vertices(g, 3)
        assert verify_lemma_case1(g, roots).violations == []
        assert verify_lemma_case2(g, roots).violations == []
        for U in g.sub_clusters():
            assert verify_lemma_case3(g, U).violations == []


def test_case3_a2_edge_example(a2):
    rep = verify_lemma_case3(a2, [X2], edges=[((), 2)])
    assert rep.checked == 1 and rep.ok
    a = bongartz_completion(a2, CompletionQuery(frozenset([X2]), ())).vertex
    b = bongartz_completion(a2, CompletionQuery(frozenset([X2]), (2,))).vertex
    face = face_of(a2, [X2])
    assert a == b or (min(a, b), max(a, b)) in face.edges


def test_root_independence(a3):
    words = tree_vertices(a3, 5)
    for U in a3.sub_clusters():
        assert root_independence(a3, U, words) == []
