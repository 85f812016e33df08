"""Exact multivariate Laurent polynomials over the integers.

A polynomial of rank ``n`` lives in ``Z[x1^±1, ..., xn^±1]``.  Terms are kept
in a canonical form (descending lexicographic exponent order, no zero
coefficients), which makes equality, hashing and ordering purely structural.
"""

from __future__ import annotations

import re
from operator import add, sub
from typing import Iterable, Mapping

from clusternlf.errors import DivisionNotExact, RankMismatch

MAX_RANK = 32

Exponent = tuple[int, ...]


class LaurentPoly:
    """Immutable Laurent polynomial in ``rank`` variables."""

    __slots__ = ("rank", "terms", "_hash")

    def __init__(self, rank: int, terms: Mapping[Exponent, int] | None = None):
        if not 0 < rank <= MAX_RANK:
            raise ValueError(f"rank must be in 1..{MAX_RANK}, got {rank}")
        clean = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != rank:
                raise RankMismatch(f"exponent {exp} does not have length {rank}")
            if coeff:
                clean[exp] = clean.get(exp, 0) + int(coeff)
        self.rank = rank
        self.terms: tuple[tuple[Exponent, int], ...] = tuple(
            sorted(((e, c) for e, c in clean.items() if c), reverse=True)
        )
        self._hash = hash((rank, self.terms))

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, rank: int) -> LaurentPoly:
        return cls(rank)

    @classmethod
    def constant(cls, rank: int, value: int) -> LaurentPoly:
        return cls(rank, {(0,) * rank: value})

    @classmethod
    def one(cls, rank: int) -> LaurentPoly:
        return cls.constant(rank, 1)

    @classmethod
    def variable(cls, rank: int, i: int) -> LaurentPoly:
        """The initial variable ``x_i`` (1-based)."""
        if not 1 <= i <= rank:
            raise IndexError(f"variable index {i} out of range 1..{rank}")
        exp = [0] * rank
        exp[i - 1] = 1
        return cls(rank, {tuple(exp): 1})

    @classmethod
    def monomial(cls, exponent: Iterable[int], coeff: int = 1) -> LaurentPoly:
        exp = tuple(exponent)
        return cls(len(exp), {exp: coeff})

    @classmethod
    def parse(cls, text: str, rank: int) -> LaurentPoly:
        """Inverse of ``str()``; accepts ``x1^-1 + 2*x1^-1*x2 - 3`` style input."""
        return _parse(text, rank)

    # -- structure ----------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def as_dict(self) -> dict[Exponent, int]:
        return dict(self.terms)

    def sort_key(self) -> tuple:
        """Key whose natural order coincides with :func:`lp_cmp`."""
        return self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def split_monomial(self) -> tuple[Exponent, LaurentPoly]:
        """Factor as ``x^m * p`` where ``p`` is an ordinary polynomial no
        variable divides.  Returns ``(m, p)``; the zero polynomial gives
        ``(0, 0)``."""
        if not self.terms:
            return (0,) * self.rank, self
        low = tuple(min(exp[i] for exp, _ in self.terms) for i in range(self.rank))
        return low, self.shift(tuple(-e for e in low))

    def shift(self, exponent: Exponent) -> LaurentPoly:
        """Multiply by the monomial ``x^exponent``."""
        if len(exponent) != self.rank:
            raise RankMismatch("shift exponent has wrong length")
        return LaurentPoly(
            self.rank,
            {tuple(map(add, exp, exponent)): c for exp, c in self.terms},
        )

    def denominator(self) -> Exponent:
        """Exponents of the monomial denominator (nonnegative entries)."""
        low, _ = self.split_monomial()
        return tuple(max(-e, 0) for e in low)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        return lp_add(self, other)

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return lp_add(self, -other)

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly(self.rank, {e: -c for e, c in self.terms})

    def __mul__(self, other: LaurentPoly) -> LaurentPoly:
        return lp_mul(self, other)

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            raise ValueError("negative powers are only defined for monomials")
        result = LaurentPoly.one(self.rank)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __floordiv__(self, other: LaurentPoly) -> LaurentPoly:
        return lp_exact_div(self, other)

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: LaurentPoly) -> bool:
        return lp_cmp(self, other) < 0

    def __le__(self, other: LaurentPoly) -> bool:
        return lp_cmp(self, other) <= 0

    def __gt__(self, other: LaurentPoly) -> bool:
        return lp_cmp(self, other) > 0

    def __ge__(self, other: LaurentPoly) -> bool:
        return lp_cmp(self, other) >= 0

    # -- rendering ----------------------------------------------------------

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({render(self)!r}, rank={self.rank})"

    def __reduce__(self):
        return (LaurentPoly, (self.rank, dict(self.terms)))


def _check_rank(a: LaurentPoly, b: LaurentPoly) -> None:
    if a.rank != b.rank:
        raise RankMismatch(f"rank {a.rank} != rank {b.rank}")


def lp_add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    _check_rank(a, b)
    acc = dict(a.terms)
    for exp, c in b.terms:
        acc[exp] = acc.get(exp, 0) + c
    return LaurentPoly(a.rank, acc)


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    _check_rank(a, b)
    acc: dict[Exponent, int] = {}
    get = acc.get
    for ea, ca in a.terms:
        for eb, cb in b.terms:
            exp = tuple(map(add, ea, eb))
            acc[exp] = get(exp, 0) + ca * cb
    return LaurentPoly(a.rank, acc)


def _grlex(exp: Exponent) -> tuple:
    return (sum(exp), exp)


def _poly_divide(num: dict[Exponent, int], den: dict[Exponent, int]) -> dict[Exponent, int]:
    """Long division of ordinary polynomials; raises unless the remainder is 0."""
    lead = max(den, key=_grlex)
    lead_c = den[lead]
    rem = dict(num)
    quot: dict[Exponent, int] = {}
    while rem:
        top = max(rem, key=_grlex)
        shift = tuple(map(sub, top, lead))
        if min(shift) < 0 or rem[top] % lead_c:
            raise DivisionNotExact(f"leading term {top} not divisible by {lead}")
        c = rem[top] // lead_c
        quot[shift] = c
        for exp, dc in den.items():
            key = tuple(map(add, shift, exp))
            v = rem.get(key, 0) - c * dc
            if v:
                rem[key] = v
            else:
                rem.pop(key, None)
    return quot


def lp_exact_div(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Exact quotient ``num / den`` in the Laurent ring.

    Both operands are factored as monomial times polynomial; the polynomial
    parts are divided by graded-lex long division and the remainder must
    vanish, otherwise :class:`DivisionNotExact` is raised.
    """
    _check_rank(num, den)
    if not den:
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if not num:
        return num
    m_num, p_num = num.split_monomial()
    m_den, p_den = den.split_monomial()
    quot = _poly_divide(p_num.as_dict(), p_den.as_dict())
    shift = tuple(a - b for a, b in zip(m_num, m_den))
    return LaurentPoly(num.rank, quot).shift(shift)


def lp_cmp(a: LaurentPoly, b: LaurentPoly) -> int:
    """Total order on canonical term lists: -1, 0 or 1."""
    _check_rank(a, b)
    if a.terms == b.terms:
        return 0
    return -1 if a.terms < b.terms else 1


# -- text form --------------------------------------------------------------


def _render_monomial(exp: Exponent) -> str:
    parts = []
    for i, e in enumerate(exp, start=1):
        if e == 1:
            parts.append(f"x{i}")
        elif e:
            parts.append(f"x{i}^{e}")
    return "*".join(parts)


def render(p: LaurentPoly) -> str:
    """Stable text key, e.g. ``x1^-1 + x1^-1*x2``.

    Terms are listed by ascending total degree, ties broken by the canonical
    (descending lex) order, so constants come first.
    """
    if not p.terms:
        return "0"
    ordered = sorted(p.terms, key=lambda t: (sum(t[0]), tuple(-e for e in t[0])))
    out = []
    for idx, (exp, c) in enumerate(ordered):
        mono = _render_monomial(exp)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if idx == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


_FACTOR = re.compile(r"^x(\d+)(?:\^(-?\d+))?$")


def _split_terms(text: str) -> list[str]:
    # split on +/- that are not exponent signs
    terms, cur, prev = [], "", ""
    for ch in text:
        if ch in "+-" and prev != "^" and cur.strip():
            terms.append(cur)
            cur = ch
        else:
            cur += ch
        if not ch.isspace():
            prev = ch
    if cur.strip():
        terms.append(cur)
    return terms


def _parse(text: str, rank: int) -> LaurentPoly:
    text = text.strip()
    if text == "0":
        return LaurentPoly.zero(rank)
    acc: dict[Exponent, int] = {}
    for raw in _split_terms(text):
        raw = raw.replace(" ", "")
        sign = 1
        while raw[:1] in ("+", "-"):
            if raw[0] == "-":
                sign = -sign
            raw = raw[1:]
        if not raw:
            raise ValueError(f"empty term in {text!r}")
        coeff = 1
        exp = [0] * rank
        for factor in raw.split("*"):
            if factor.isdigit():
                coeff *= int(factor)
                continue
            m = _FACTOR.match(factor)
            if not m:
                raise ValueError(f"cannot parse factor {factor!r} in {text!r}")
            i = int(m.group(1))
            if not 1 <= i <= rank:
                raise RankMismatch(f"variable x{i} outside rank {rank}")
            exp[i - 1] += int(m.group(2)) if m.group(2) else 1
        key = tuple(exp)
        acc[key] = acc.get(key, 0) + sign * coeff
    return LaurentPoly(rank, acc)
