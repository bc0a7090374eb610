"""Graded Euler characteristics and the Burau matrices they produce.

The class of ``P_i{k}`` is ``q^k e_i``.  Tensoring a complex of bimodules with
``P_j`` gives a complex of projective left modules, so a bimodule complex acts
on K_0 by the matrix whose ``j``-th column is the Euler characteristic of
``C (x) P_j``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .bimod import DIAG
from .braid import BraidWord
from .complex import ChainComplex
from .zigzag import ZigzagRing, build_ring

__all__ = ["LaurentPoly", "LaurentMatrix", "k_class", "generator_matrix", "burau", "graded_rank"]


class LaurentPoly:
    """Element of Z[q, q^-1] as ``{exponent: coefficient}``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        self.coeffs = {int(e): int(c) for e, c in (coeffs or {}).items() if c}

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def q(cls, e: int = 1, c: int = 1) -> "LaurentPoly":
        return cls({e: c})

    def __add__(self, other) -> "LaurentPoly":
        other = _lift(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-_lift(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return _lift(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        other = _lift(other)
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def at(self, q) -> object:
        """Evaluate at a number, exactly for integers and fractions (``q = 1`` gives an int)."""
        if isinstance(q, int):
            q = Fraction(q)
        total = sum((c * q ** e for e, c in self.coeffs.items()), Fraction(0))
        if isinstance(total, Fraction) and total.denominator == 1:
            return int(total)
        return total

    def pairs(self) -> list[list[int]]:
        return [[e, c] for e, c in sorted(self.coeffs.items())]

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for e, c in sorted(self.coeffs.items()):
            terms.append(f"{c}" if e == 0 else f"{c}*q^{e}")
        return " + ".join(terms)


def _lift(x) -> LaurentPoly:
    return x if isinstance(x, LaurentPoly) else LaurentPoly.const(int(x))


class LaurentMatrix:
    """Square matrix over Z[q, q^-1]."""

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = [[_lift(x) for x in r] for r in rows]
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise ValueError("LaurentMatrix must be square")

    @property
    def size(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> "LaurentMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __mul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        n = self.size
        if other.size != n:
            raise ValueError("size mismatch")
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = LaurentPoly()
                for k in range(n):
                    a, b = self.rows[i][k], other.rows[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return LaurentMatrix(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentMatrix) and self.rows == other.rows

    def det(self) -> LaurentPoly:
        """Determinant by cofactor expansion along the first row."""
        return _det([list(r) for r in self.rows])

    def at(self, q) -> list[list]:
        return [[x.at(q) for x in r] for r in self.rows]

    def to_json(self) -> str:
        return json.dumps([[x.pairs() for x in r] for r in self.rows])

    def __repr__(self) -> str:
        return "LaurentMatrix(" + repr(self.rows) + ")"


def _det(m: list[list[LaurentPoly]]) -> LaurentPoly:
    n = len(m)
    if n == 0:
        return LaurentPoly.const(1)
    if n == 1:
        return m[0][0]
    total = LaurentPoly()
    for j, a in enumerate(m[0]):
        if not a:
            continue
        minor = [r[:j] + r[j + 1:] for r in m[1:]]
        term = a * _det(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


def graded_rank(ring: ZigzagRing, i: int, j: int) -> LaurentPoly:
    """Graded rank of ``(i)A_n(j)``."""
    out: dict[int, int] = {}
    for p in ring.paths_between(i, j):
        out[p.degree] = out.get(p.degree, 0) + 1
    return LaurentPoly(out)


def k_class(c: ChainComplex) -> LaurentMatrix:
    """Matrix of the action of ``c`` on the Grothendieck group of graded projectives."""
    ring = c.ring
    n = ring.n
    cols = [[LaurentPoly() for _ in range(n)] for _ in range(n)]  # cols[j][i]
    for t, summands in c.terms.items():
        sign = -1 if t % 2 else 1
        for s in summands:
            qk = LaurentPoly.q(s.shift, sign)
            for j in range(1, n + 1):
                if s.kind == DIAG:
                    cols[j - 1][j - 1] = cols[j - 1][j - 1] + qk
                else:
                    r = graded_rank(ring, s.j, j)
                    if r:
                        cols[j - 1][s.i - 1] = cols[j - 1][s.i - 1] + qk * r
    return LaurentMatrix([[cols[j][i] for j in range(n)] for i in range(n)])


def generator_matrix(n: int, letter: int) -> LaurentMatrix:
    """Matrix of ``sigma_i^{+-1}`` on ``K_0`` of graded projective ``A_n``-modules.

    ``sigma_i`` sends ``e_i`` to ``-q^2 e_i``, ``e_j`` to ``e_j - q e_i`` when
    ``|i - j| = 1`` and fixes the other ``e_j``; ``sigma_i^-1`` sends ``e_i`` to
    ``-q^-2 e_i`` and ``e_j`` to ``e_j - q^-1 e_i`` for neighbours.
    """
    i = abs(letter)
    if not 1 <= i <= n:
        raise ValueError(f"generator {i} out of range for n={n}")
    e = 1 if letter > 0 else -1
    rows = [[LaurentPoly.const(1 if a == b else 0) for b in range(n)] for a in range(n)]
    rows[i - 1][i - 1] = LaurentPoly.q(2 * e, -1)
    for j in (i - 1, i + 1):
        if 1 <= j <= n:
            rows[i - 1][j - 1] = LaurentPoly.q(e, -1)
    return LaurentMatrix(rows)


def burau(w: BraidWord) -> LaurentMatrix:
    """Product of generator matrices, first letter leftmost."""
    n = w.strands - 1
    out = LaurentMatrix.identity(n)
    for x in w.letters:
        out = out * generator_matrix(n, x)
    return out
