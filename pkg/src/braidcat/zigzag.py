"""The graded zigzag rings A_n over Z.

Paths are written as vertex tuples and multiplied by concatenation read left
to right, ``(a|b)(b|c) = (a|b|c)``.  Every product of two basis paths is either
zero or a single basis path, which keeps the multiplication table tiny.
"""

from __future__ import annotations

import json
from functools import lru_cache
from typing import Iterable, Mapping

__all__ = ["BasisPath", "AlgebraElement", "ZigzagRing", "build_ring", "multiply", "center_basis"]


class BasisPath(tuple):
    """A canonical basis path of A_n, stored as its tuple of vertices."""

    __slots__ = ()

    def __new__(cls, vertices: Iterable[int]):
        return super().__new__(cls, tuple(vertices))

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(self)

    @property
    def degree(self) -> int:
        return len(self) - 1

    @property
    def source(self) -> int:
        return self[0]

    @property
    def target(self) -> int:
        return self[-1]

    def __str__(self) -> str:
        return "(" + "|".join(map(str, self)) + ")"

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str) -> "BasisPath":
        body = text.strip()
        if not (body.startswith("(") and body.endswith(")")):
            raise ValueError(f"malformed path {text!r}")
        return cls(int(v) for v in body[1:-1].split("|"))


def loop(i: int) -> BasisPath:
    """The degree-2 loop X_i in canonical form."""
    return BasisPath((1, 2, 1)) if i == 1 else BasisPath((i, i - 1, i))


class AlgebraElement:
    """Integer combination of basis paths; zero coefficients are never stored."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[BasisPath, int] | None = None):
        self.coeffs = {BasisPath(p): c for p, c in (coeffs or {}).items() if c}

    @classmethod
    def basis(cls, path) -> "AlgebraElement":
        return cls({BasisPath(path): 1})

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = dict(self.coeffs)
        for p, c in other.coeffs.items():
            out[p] = out.get(p, 0) + c
        return AlgebraElement(out)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement({p: -c for p, c in self.coeffs.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __rmul__(self, k: int) -> "AlgebraElement":
        return AlgebraElement({p: k * c for p, c in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        return isinstance(other, AlgebraElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def degrees(self) -> set[int]:
        return {p.degree for p in self.coeffs}

    def homogeneous_part(self, degree: int) -> "AlgebraElement":
        return AlgebraElement({p: c for p, c in self.coeffs.items() if p.degree == degree})

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*{p}" for p, c in sorted(self.coeffs.items(), key=_path_key))


def _path_key(item):
    p = item[0] if isinstance(item, tuple) and isinstance(item[0], tuple) else item
    return (len(p), tuple(p))


class ZigzagRing:
    """The ring A_n with its canonical basis B(A_n) and multiplication table.

    Instances are immutable and cached per ``n`` by :func:`build_ring`.
    """

    def __init__(self, n: int):
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"A_n needs n >= 1, got {n!r}")
        self.n = n
        basis = [BasisPath((i,)) for i in range(1, n + 1)]
        for i in range(1, n + 1):
            for j in (i - 1, i + 1):
                if 1 <= j <= n:
                    basis.append(BasisPath((i, j)))
        basis += [loop(i) for i in range(1, n + 1)]
        self.basis: tuple[BasisPath, ...] = tuple(basis)
        self.index = {p: k for k, p in enumerate(self.basis)}
        self.idempotents = self.basis[:n]
        self.arrows = tuple(p for p in self.basis if len(p) == 2)
        # generators of A_n as a ring: idempotents and arrows (A_1 has no
        # arrows, so its loop is needed)
        self.generators = self.idempotents + (self.arrows if n > 1 else (loop(1),))
        self.table: dict[tuple[BasisPath, BasisPath], BasisPath | None] = {
            (a, b): self._concat(a, b) for a in self.basis for b in self.basis
        }

    @property
    def rank(self) -> int:
        return len(self.basis)

    def _concat(self, a: BasisPath, b: BasisPath) -> BasisPath | None:
        if self.n == 1:
            # Z[X_1]/(X_1^2); X_1 is written (1|2|1) by convention
            d = a.degree + b.degree
            return {0: BasisPath((1,)), 2: loop(1)}.get(d)
        if a[-1] != b[0]:
            return None
        path = tuple(a) + tuple(b[1:])
        if len(path) <= 2:
            return BasisPath(path)
        if len(path) == 3:
            u, _, w = path
            return loop(u) if u == w else None
        return None

    def mul_path(self, a: BasisPath, b: BasisPath) -> BasisPath | None:
        return self.table[(a, b)]

    def one(self) -> AlgebraElement:
        return AlgebraElement({e: 1 for e in self.idempotents})

    def X(self, i: int) -> AlgebraElement:
        """X_i, or zero when ``i`` is 0 or n+1 (missing neighbours are omitted)."""
        if 1 <= i <= self.n:
            return AlgebraElement({loop(i): 1})
        return AlgebraElement()

    def element(self, coeffs: Mapping) -> AlgebraElement:
        out = AlgebraElement(coeffs)
        for p in out.coeffs:
            if p not in self.index:
                raise ValueError(f"{p} is not a basis path of A_{self.n}")
        return out

    def paths_between(self, i: int, j: int) -> list[BasisPath]:
        """Basis of (i)A_n(j): paths starting at i and ending at j, by degree."""
        return sorted((p for p in self.basis if p[0] == i and p[-1] == j), key=lambda p: (p.degree, tuple(p)))

    def paths_ending_at(self, i: int) -> list[BasisPath]:
        return [p for p in self.basis if p[-1] == i]

    def paths_starting_at(self, i: int) -> list[BasisPath]:
        return [p for p in self.basis if p[0] == i]

    def to_json(self) -> str:
        names = [str(p) for p in self.basis]
        table = [
            [None if self.table[(a, b)] is None else str(self.table[(a, b)]) for b in self.basis]
            for a in self.basis
        ]
        return json.dumps({"n": self.n, "basis": names, "table": table}, indent=1)

    def __repr__(self) -> str:
        return f"ZigzagRing(n={self.n})"


@lru_cache(maxsize=None)
def build_ring(n: int) -> ZigzagRing:
    return ZigzagRing(n)


def multiply(r: ZigzagRing, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    out: dict[BasisPath, int] = {}
    table = r.table
    for p, c in a.coeffs.items():
        for q, d in b.coeffs.items():
            pq = table[(p, q)]
            if pq is not None:
                out[pq] = out.get(pq, 0) + c * d
    return AlgebraElement(out)


def center_basis(r: ZigzagRing) -> list[AlgebraElement]:
    """The Z-basis 1, X_1, ..., X_n of the center, each checked to be central."""
    elems = [r.one()] + [r.X(i) for i in range(1, r.n + 1)]
    for z in elems:
        for p in r.basis:
            b = AlgebraElement.basis(p)
            if multiply(r, z, b) != multiply(r, b, z):
                raise AssertionError(f"{z} does not commute with {p}")
    return elems


def is_central(r: ZigzagRing, a: AlgebraElement) -> bool:
    return all(
        multiply(r, a, AlgebraElement.basis(g)) == multiply(r, AlgebraElement.basis(g), a)
        for g in r.generators
    )
