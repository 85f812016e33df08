"""Labeled seeds, matrix and seed mutation, c-vectors and C-matrices.

Directions ``k`` are 1-based throughout the public API.  A vertex of the
n-regular tree is named by its reduced word of directions from the global
root (the initial seed); C-matrices relative to other tree vertices are
recomputed by walking the tree path between the two words.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Sequence

from clusternlf.errors import (
    DirectionOutOfRange,
    NotSkewSymmetrizable,
    SignCoherenceViolated,
)
from clusternlf.laurent import LaurentPoly, lp_exact_div

Word = tuple[int, ...]
IntMatrix = tuple[tuple[int, ...], ...]


def pos(b: int) -> int:
    return b if b > 0 else 0


def _as_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    return tuple(tuple(int(v) for v in row) for row in rows)


def check_symmetrizer(rows: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Smallest positive integer ``s`` with ``s_i b_ij = -s_j b_ji``.

    Ratios are propagated along connected components of the nonzero pattern
    and each component is scaled to coprime integers.
    """
    B = _as_matrix(rows)
    n = len(B)
    if n == 0 or any(len(r) != n for r in B):
        raise NotSkewSymmetrizable("matrix must be square and nonempty")
    for i in range(n):
        if B[i][i]:
            raise NotSkewSymmetrizable(f"diagonal entry b_{i+1}{i+1} is nonzero")
        for j in range(n):
            if (B[i][j] == 0) != (B[j][i] == 0) or B[i][j] * B[j][i] > 0:
                raise NotSkewSymmetrizable(
                    f"sign pattern violated at ({i+1},{j+1}): {B[i][j]}, {B[j][i]}"
                )
    s: list[Fraction | None] = [None] * n
    for start in range(n):
        if s[start] is not None:
            continue
        s[start] = Fraction(1)
        component, stack = [start], [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if not B[i][j]:
                    continue
                want = s[i] * B[i][j] / -B[j][i]
                if s[j] is None:
                    s[j] = want
                    component.append(j)
                    stack.append(j)
                elif s[j] != want:
                    raise NotSkewSymmetrizable(f"inconsistent symmetrizer ratio at ({i+1},{j+1})")
        scale = lcm(*(s[i].denominator for i in component))
        ints = [int(s[i] * scale) for i in component]
        g = gcd(*ints)
        for i, v in zip(component, ints):
            s[i] = Fraction(v // g)
    return tuple(int(v) for v in s)


@dataclass(frozen=True)
class ExchangeMatrix:
    entries: IntMatrix
    symmetrizer: tuple[int, ...]

    def __post_init__(self):
        n = len(self.entries)
        if len(self.symmetrizer) != n or any(d <= 0 for d in self.symmetrizer):
            raise NotSkewSymmetrizable("symmetrizer must have n positive entries")
        for i in range(n):
            for j in range(n):
                if self.symmetrizer[i] * self.entries[i][j] != -self.symmetrizer[j] * self.entries[j][i]:
                    raise NotSkewSymmetrizable(
                        f"S*B is not skew-symmetric at ({i+1},{j+1})"
                    )

    @classmethod
    def from_rows(cls, rows, symmetrizer=None) -> ExchangeMatrix:
        entries = _as_matrix(rows)
        if symmetrizer is None:
            symmetrizer = check_symmetrizer(entries)
        else:
            check_symmetrizer(entries)
        return cls(entries, tuple(int(d) for d in symmetrizer))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def __neg__(self) -> ExchangeMatrix:
        return ExchangeMatrix(tuple(tuple(-v for v in r) for r in self.entries), self.symmetrizer)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def _check_direction(k: int, n: int) -> None:
    if not (isinstance(k, int) and 1 <= k <= n):
        raise DirectionOutOfRange(f"direction {k} out of range 1..{n}")


def mutate_matrix(B: ExchangeMatrix, k: int) -> ExchangeMatrix:
    n = B.n
    _check_direction(k, n)
    k -= 1
    b = B.entries
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == k or j == k:
                row.append(-b[i][j])
            else:
                row.append(b[i][j] + pos(b[i][k]) * b[k][j] + b[i][k] * pos(-b[k][j]))
        rows.append(tuple(row))
    # the old symmetrizer must still work; __post_init__ asserts it
    return ExchangeMatrix(tuple(rows), B.symmetrizer)


@dataclass(frozen=True)
class CMatrix:
    """Integer matrix whose columns are the c-vectors."""

    rows: IntMatrix

    @classmethod
    def identity(cls, n: int) -> CMatrix:
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> CMatrix:
        return cls(tuple(zip(*columns)))

    @property
    def n(self) -> int:
        return len(self.rows)

    def column(self, j: int) -> tuple[int, ...]:
        """The ``j``-th c-vector (1-based)."""
        return tuple(r[j - 1] for r in self.rows)

    @property
    def columns(self) -> tuple[tuple[int, ...], ...]:
        return tuple(zip(*self.rows))

    def det(self) -> int:
        return det(self.rows)

    def is_sign_coherent(self) -> bool:
        return all(is_sign_coherent(c) for c in self.columns)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __matmul__(self, other: CMatrix) -> CMatrix:
        return CMatrix(matmul(self.rows, other.rows))


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def det(m: IntMatrix) -> int:
    """Exact integer determinant by fraction-free Bareiss elimination."""
    a = [list(r) for r in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def is_sign_coherent(vec: Sequence[int]) -> bool:
    """Nonzero with all entries >= 0 or all <= 0."""
    return any(vec) and (all(v >= 0 for v in vec) or all(v <= 0 for v in vec))


def epsilon_k(C: CMatrix, k: int) -> int:
    """Sign of the ``k``-th c-vector; raises if it is mixed or zero."""
    _check_direction(k, C.n)
    col = C.column(k)
    if not any(col):
        raise SignCoherenceViolated(f"c-vector {k} is zero")
    if all(v >= 0 for v in col):
        return 1
    if all(v <= 0 for v in col):
        return -1
    raise SignCoherenceViolated(f"c-vector {k} = {col} has mixed signs")


def cvector_step(C: CMatrix, B: ExchangeMatrix, k: int) -> CMatrix:
    """One step of the c-vector recurrence across an edge labeled ``k``.

    ``B`` is the exchange matrix at the edge endpoint we walk away from.
    """
    n = C.n
    _check_direction(k, n)
    ck = C.column(k)
    neg_ck = tuple(pos(-v) for v in ck)
    cols = []
    for j in range(1, n + 1):
        cj = C.column(j)
        if j == k:
            cols.append(tuple(-v for v in cj))
        else:
            b = B[k - 1, j - 1]
            cols.append(tuple(c + pos(b) * a + b * m for c, a, m in zip(cj, ck, neg_ck)))
    return CMatrix.from_columns(cols)


def extend_word(word: Word, k: int) -> Word:
    """Append ``k`` to a reduced word, cancelling an immediate repeat."""
    if word and word[-1] == k:
        return word[:-1]
    return word + (k,)


def reduce_word(steps: Iterable[int]) -> Word:
    word: Word = ()
    for k in steps:
        word = extend_word(word, k)
    return word


def tree_path(source: Word, target: Word) -> Word:
    """Directions walking from tree vertex ``source`` to ``target``."""
    common = 0
    for a, b in zip(source, target):
        if a != b:
            break
        common += 1
    return tuple(reversed(source[common:])) + target[common:]


@lru_cache(maxsize=1 << 18)
def cmatrix_along(B_start: ExchangeMatrix, steps: Word) -> CMatrix:
    """C-matrix at the end of ``steps`` w.r.t. the start vertex carrying ``B_start``."""
    if not steps:
        return CMatrix.identity(B_start.n)
    prefix = steps[:-1]
    return cvector_step(cmatrix_along(B_start, prefix), pattern_matrix(B_start, prefix), steps[-1])


@lru_cache(maxsize=1 << 18)
def pattern_matrix(B0: ExchangeMatrix, word: Word) -> ExchangeMatrix:
    """Exchange matrix at tree vertex ``word`` of the pattern rooted at ``B0``."""
    if not word:
        return B0
    return mutate_matrix(pattern_matrix(B0, word[:-1]), word[-1])


def cmatrix(B0: ExchangeMatrix, root: Word, target: Word) -> CMatrix:
    """``C_target`` with respect to tree vertex ``root`` (pattern rooted at ``B0``)."""
    return cmatrix_along(pattern_matrix(B0, root), tree_path(root, target))


def transition_cmatrix(B0: ExchangeMatrix, root: Word, k: int, target: Word) -> CMatrix:
    """C-matrix at ``target`` w.r.t. the neighbour ``root --k-- root'``, obtained
    from the C-matrix w.r.t. ``root`` by the J_k + [.]_+ row-k correction."""
    n = B0.n
    _check_direction(k, n)
    B_s = pattern_matrix(B0, root)
    B_t = pattern_matrix(B0, target)
    C_t = cmatrix_along(B_s, tree_path(root, target))
    C_back = cmatrix_along(-B_t, tree_path(target, root))
    eps = epsilon_k(C_back, k)
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    rows[k - 1] = [pos(-eps * B_s[k - 1, j]) for j in range(n)]
    rows[k - 1][k - 1] = -1 + pos(-eps * B_s[k - 1, k - 1])
    return CMatrix(_as_matrix(rows)) @ C_t


@dataclass(frozen=True)
class LabeledSeed:
    variables: tuple[LaurentPoly, ...]
    matrix: ExchangeMatrix
    cmatrix: CMatrix
    path: Word = ()

    @property
    def n(self) -> int:
        return self.matrix.n

    def to_json(self) -> dict:
        return {
            "B": self.matrix.tolist(),
            "symmetrizer": list(self.matrix.symmetrizer),
            "variables": [str(x) for x in self.variables],
            "C": self.cmatrix.tolist(),
            "path": list(self.path),
        }


def initial_seed(B: ExchangeMatrix) -> LabeledSeed:
    n = B.n
    return LabeledSeed(
        tuple(LaurentPoly.variable(n, i) for i in range(1, n + 1)),
        B,
        CMatrix.identity(n),
        (),
    )


def exchange_polynomial(variables: Sequence[LaurentPoly], B: ExchangeMatrix, k: int) -> LaurentPoly:
    n = B.n
    one = LaurentPoly.one(n)
    plus, minus = one, one
    for i in range(n):
        b = B[i, k - 1]
        if b > 0:
            plus = plus * variables[i] ** b
        elif b < 0:
            minus = minus * variables[i] ** -b
    return plus + minus


def mutate_seed(seed: LabeledSeed, k: int) -> LabeledSeed:
    _check_direction(k, seed.n)
    new_var = lp_exact_div(exchange_polynomial(seed.variables, seed.matrix, k), seed.variables[k - 1])
    variables = seed.variables[: k - 1] + (new_var,) + seed.variables[k:]
    return LabeledSeed(
        variables,
        mutate_matrix(seed.matrix, k),
        cvector_step(seed.cmatrix, seed.matrix, k),
        extend_word(seed.path, k),
    )


def replay(seed: LabeledSeed, steps: Iterable[int]) -> LabeledSeed:
    for k in steps:
        seed = mutate_seed(seed, k)
    return seed


def reduced_words(n: int, max_depth: int) -> list[Word]:
    """All reduced words of length <= max_depth, breadth-first, directions ascending."""
    words: list[Word] = [()]
    level: list[Word] = [()]
    for _ in range(max_depth):
        level = [w + (k,) for w in level for k in range(1, n + 1) if not w or w[-1] != k]
        words.extend(level)
    return words
