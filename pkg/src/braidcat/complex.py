"""Bounded chain complexes of projective A_n-bimodules.

Differentials raise cohomological degree by one.  Tensor products use the
sign rule ``d(x (x) y) = dx (x) y + (-1)^s x (x) dy`` for ``x`` in degree ``s``.

Complexes built by :func:`tensor` from single-letter complexes carry
provenance labels: for every summand, the summand chosen in each factor plus
the middle paths that split the tensor products of projectives.  Labels do
not depend on bracketing, which is what :func:`reassociate` uses to build the
structural isomorphisms between differently bracketed products.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import bimod, zlinalg
from .bimod import (
    DIAG,
    TENS,
    BimoduleMorphism,
    Summand,
    add_into,
    apply_entry,
    compose,
    generator,
    hom_basis,
    identity,
    scale,
)
from .zigzag import AlgebraElement, BasisPath, ZigzagRing, is_central

__all__ = [
    "ChainComplex",
    "ChainMap",
    "Homotopy",
    "Simplification",
    "build_Ri",
    "build_Ri_prime",
    "unit_complex",
    "tensor",
    "tensor_maps",
    "reassociate",
    "cone",
    "shift",
    "simplify",
    "is_null_homotopic",
    "is_homotopy_equivalent",
    "left_mult",
    "right_mult",
    "beta",
    "gamma",
    "delta",
]


class ChainComplex:
    """Terms are tuples of summands indexed by cohomological degree.

    ``diffs[t]`` is the morphism from ``terms[t]`` to ``terms[t + 1]``.
    """

    def __init__(self, ring: ZigzagRing, terms: dict, diffs: dict | None = None,
                 labels: dict | None = None, check: bool = True):
        self.ring = ring
        self.terms = {t: tuple(v) for t, v in terms.items() if v}
        self.diffs = {}
        for t, m in (diffs or {}).items():
            if m.entries:
                if m.source != self.term(t) or m.target != self.term(t + 1):
                    raise ValueError(f"differential in degree {t} has the wrong shape")
                self.diffs[t] = m
        self.labels = labels
        if check:
            self.check()

    def term(self, t: int) -> tuple:
        return self.terms.get(t, ())

    def d(self, t: int) -> BimoduleMorphism:
        m = self.diffs.get(t)
        if m is None:
            return BimoduleMorphism(self.ring, self.term(t), self.term(t + 1), 0)
        return m

    @property
    def degrees(self) -> list[int]:
        return sorted(self.terms)

    def check(self) -> None:
        for t, m in self.diffs.items():
            if m.degree != 0:
                raise ValueError("differentials must have internal degree 0")
            nxt = self.diffs.get(t + 1)
            if nxt is not None and not compose(nxt, m).is_zero():
                raise ValueError(f"d o d is nonzero in degree {t}")

    def is_zero(self) -> bool:
        return not self.terms

    def size(self) -> int:
        return sum(len(v) for v in self.terms.values())

    def term_multiset(self) -> dict:
        """Graded term multiplicities ``{(t, summand): count}``."""
        out: dict = {}
        for t, summands in self.terms.items():
            for s in summands:
                out[(t, s)] = out.get((t, s), 0) + 1
        return out

    def same_shape(self, other: "ChainComplex") -> bool:
        return self.terms == other.terms

    def __repr__(self) -> str:
        parts = [f"{t}: " + " + ".join(map(str, self.terms[t])) for t in self.degrees]
        return "ChainComplex(" + "; ".join(parts) + ")"

    # serialization --------------------------------------------------------
    def to_dict(self) -> dict:
        terms = {str(t): [[s.kind, s.i, s.j, s.shift] for s in v] for t, v in sorted(self.terms.items())}
        diffs = {}
        for t, m in sorted(self.diffs.items()):
            diffs[str(t)] = [
                [r, c, sorted([_key_str(k), v] for k, v in img.items())]
                for (r, c), img in sorted(m.entries.items())
            ]
        return {"n": self.ring.n, "terms": terms, "differentials": diffs}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict, ring: ZigzagRing | None = None) -> "ChainComplex":
        from .zigzag import build_ring

        ring = ring or build_ring(int(data["n"]))
        terms = {int(t): tuple(Summand(k, i, j, s) for k, i, j, s in v) for t, v in data["terms"].items()}
        diffs = {}
        for t, rows in data.get("differentials", {}).items():
            t = int(t)
            entries = {(r, c): {_parse_key(k): v for k, v in img} for r, c, img in rows}
            diffs[t] = BimoduleMorphism(ring, terms.get(t, ()), terms.get(t + 1, ()), 0, entries)
        return cls(ring, terms, diffs)


def _key_str(k) -> str:
    if isinstance(k, BasisPath):
        return str(k)
    return f"{k[0]}(x){k[1]}"


def _parse_key(text: str):
    if "(x)" in text:
        a, b = text.split("(x)")
        return (BasisPath.parse(a), BasisPath.parse(b))
    return BasisPath.parse(text)


# ---------------------------------------------------------------------------
# chain maps and homotopies


class ChainMap:
    """Degreewise bimodule maps ``components[t]: source_t -> target_{t + shift}``."""

    def __init__(self, source: ChainComplex, target: ChainComplex, components: dict | None = None,
                 degree: int = 0, shift: int = 0, check: bool = False):
        self.source = source
        self.target = target
        self.degree = degree
        self.shift = shift
        self.components = {}
        for t, m in (components or {}).items():
            if m.entries:
                if m.source != source.term(t) or m.target != target.term(t + shift):
                    raise ValueError(f"component {t} has the wrong shape")
                if m.degree != degree:
                    raise ValueError(f"component {t} has internal degree {m.degree}, expected {degree}")
                self.components[t] = m
        if check and not self.is_chain_map():
            raise ValueError("components do not commute with the differentials")

    @property
    def ring(self) -> ZigzagRing:
        return self.source.ring

    def component(self, t: int) -> BimoduleMorphism:
        m = self.components.get(t)
        if m is None:
            return BimoduleMorphism(self.ring, self.source.term(t), self.target.term(t + self.shift), self.degree)
        return m

    def is_chain_map(self) -> bool:
        sign = -1 if self.shift % 2 else 1
        degs = set(self.source.terms) | {t - self.shift for t in self.target.terms}
        for t in degs:
            lhs = compose(self.target.d(t + self.shift), self.component(t))
            rhs = compose(self.component(t + 1), self.source.d(t))
            if not (lhs - rhs.scaled(sign)).is_zero():
                return False
        return True

    def is_zero(self) -> bool:
        return not self.components

    def _like(self, components: dict) -> "ChainMap":
        return ChainMap(self.source, self.target, components, self.degree, self.shift)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if (other.source is not self.source and not other.source.same_shape(self.source)) or \
                other.shift != self.shift or other.degree != self.degree:
            raise ValueError("cannot add chain maps of different shapes")
        comps = dict(self.components)
        for t, m in other.components.items():
            comps[t] = comps[t] + m if t in comps else m
        return ChainMap(self.source, self.target, comps, self.degree, self.shift)

    def __neg__(self) -> "ChainMap":
        return self.scaled(-1)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return self + (-other)

    def scaled(self, c: int) -> "ChainMap":
        return self._like({t: m.scaled(c) for t, m in self.components.items()})

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        return compose_maps(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        if not (self.source.same_shape(other.source) and self.target.same_shape(other.target)):
            return False
        if self.shift != other.shift:
            return False
        keys = set(self.components) | set(other.components)
        return all(self.component(t) == other.component(t) for t in keys)

    def __repr__(self) -> str:
        return f"ChainMap(degree={self.degree}, shift={self.shift}, {len(self.components)} components)"


def compose_maps(g: ChainMap, f: ChainMap) -> ChainMap:
    """``g o f``."""
    if not f.target.same_shape(g.source):
        raise ValueError("composition of chain maps with mismatched complexes")
    comps = {}
    for t, m in f.components.items():
        gm = g.components.get(t + f.shift)
        if gm is not None:
            c = compose(gm, m)
            if c.entries:
                comps[t] = c
    return ChainMap(f.source, g.target, comps, f.degree + g.degree, f.shift + g.shift)


def identity_map(c: ChainComplex) -> ChainMap:
    return ChainMap(c, c, {t: identity(c.ring, v) for t, v in c.terms.items()})


def zero_map(source: ChainComplex, target: ChainComplex, degree: int = 0) -> ChainMap:
    return ChainMap(source, target, {}, degree)


class Homotopy:
    """``components[t]: source_t -> target_{t-1}`` with ``d h + h d == f``."""

    def __init__(self, f: ChainMap, components: dict, check: bool = True):
        self.map = f
        self.degree = f.degree
        self.components = {t: m for t, m in components.items() if m.entries}
        if check and not self.verify():
            raise ValueError("homotopy does not satisfy d h + h d = f")

    def component(self, t: int) -> BimoduleMorphism:
        f = self.map
        m = self.components.get(t)
        if m is None:
            return BimoduleMorphism(f.ring, f.source.term(t), f.target.term(t - 1), self.degree)
        return m

    def boundary(self) -> ChainMap:
        """The chain map ``d h + h d``."""
        f = self.map
        comps = {}
        for t in set(f.source.terms):
            val = compose(f.target.d(t - 1), self.component(t)) + compose(self.component(t + 1), f.source.d(t))
            if val.entries:
                comps[t] = val
        return ChainMap(f.source, f.target, comps, self.degree)

    def verify(self) -> bool:
        f = self.map
        b = self.boundary()
        keys = set(f.components) | set(b.components)
        return all(b.component(t) == f.component(t) for t in keys)

    def size(self) -> int:
        return sum(len(m.entries) for m in self.components.values())


# ---------------------------------------------------------------------------
# elementary complexes


def beta(ring: ZigzagRing, i: int) -> BimoduleMorphism:
    """Multiplication ``P_i (x) _iP -> A_n``."""
    src, tgt = (bimod.tensor_summand(i, i),), (bimod.diagonal(),)
    return BimoduleMorphism(ring, src, tgt, 0, {(0, 0): {BasisPath((i,)): 1}})


def gamma_image(ring: ZigzagRing, i: int) -> dict:
    """``gamma_i(1)``: the sum of ``a1 (x) a2`` over basis paths with ``a2 a1 = X_i``."""
    x = ring.X(i)
    (xi,) = x.coeffs
    out = {}
    for a1 in ring.paths_ending_at(i):
        for a2 in ring.paths_starting_at(i):
            if ring.table[(a2, a1)] == xi:
                out[(a1, a2)] = 1
    return out


def gamma(ring: ZigzagRing, i: int) -> BimoduleMorphism:
    src, tgt = (bimod.diagonal(),), (bimod.tensor_summand(i, i, -2),)
    return BimoduleMorphism(ring, src, tgt, 0, {(0, 0): gamma_image(ring, i)})


def delta_element(ring: ZigzagRing, i: int) -> AlgebraElement:
    """``X_{i-1} - X_{i+1}``, omitting indices outside 1..n."""
    return ring.X(i - 1) - ring.X(i + 1)


def delta(ring: ZigzagRing, i: int) -> BimoduleMorphism:
    """Multiplication by ``X_{i-1} - X_{i+1}`` on ``A_n``, a map of internal degree 2."""
    A = (bimod.diagonal(),)
    return BimoduleMorphism(ring, A, A, 2, {(0, 0): dict(delta_element(ring, i).coeffs)})


def _check_index(ring: ZigzagRing, i: int) -> None:
    if not 1 <= i <= ring.n:
        raise ValueError(f"index {i} outside 1..{ring.n}")


def _leaf_labels(terms: dict) -> dict:
    return {t: tuple((((t, k),), ()) for k in range(len(v))) for t, v in terms.items()}


def unit_complex(ring: ZigzagRing) -> ChainComplex:
    """``A_n`` in degree 0, the unit for :func:`tensor`."""
    return ChainComplex(ring, {0: (bimod.diagonal(),)}, {}, labels={0: (((), ()),)})


def build_Ri(ring: ZigzagRing, i: int) -> ChainComplex:
    """``P_i (x) _iP -> A_n`` with ``A_n`` in degree 0."""
    _check_index(ring, i)
    terms = {-1: (bimod.tensor_summand(i, i),), 0: (bimod.diagonal(),)}
    return ChainComplex(ring, terms, {-1: beta(ring, i)}, labels=_leaf_labels(terms))


def build_Ri_prime(ring: ZigzagRing, i: int) -> ChainComplex:
    """``A_n -> P_i (x) _iP{-2}`` with ``A_n`` in degree 0."""
    _check_index(ring, i)
    terms = {0: (bimod.diagonal(),), 1: (bimod.tensor_summand(i, i, -2),)}
    return ChainComplex(ring, terms, {0: gamma(ring, i)}, labels=_leaf_labels(terms))


# ---------------------------------------------------------------------------
# tensor products


@dataclass
class _Block:
    s: int
    t: int
    offset: int
    layout: bimod.TensorLayout


def _tensor_blocks(c1: ChainComplex, c2: ChainComplex) -> dict[int, list[_Block]]:
    blocks: dict[int, list[_Block]] = {}
    for s in c1.degrees:
        for t in c2.degrees:
            layout = bimod.tensor_objects(c1.ring, c1.term(s), c2.term(t))
            if not layout.summands:
                continue
            lst = blocks.setdefault(s + t, [])
            off = lst[-1].offset + len(lst[-1].layout.summands) if lst else 0
            lst.append(_Block(s, t, off, layout))
    return blocks


def _embed(acc: dict, m: BimoduleMorphism, row_off: int, col_off: int, sign: int = 1) -> None:
    for (r, c), img in m.entries.items():
        add_into(acc.setdefault((r + row_off, c + col_off), {}), img, sign)


def tensor(c1: ChainComplex, c2: ChainComplex) -> ChainComplex:
    """Total complex of ``c1 (x)_{A_n} c2``; blocks ordered by the first degree."""
    ring = c1.ring
    blocks = _tensor_blocks(c1, c2)
    terms = {k: tuple(s for b in lst for s in b.layout.summands) for k, lst in blocks.items()}
    diffs = {}
    for k, lst in blocks.items():
        nxt = {(b.s, b.t): b for b in blocks.get(k + 1, ())}
        acc: dict = {}
        for b in lst:
            tgt = nxt.get((b.s + 1, b.t))
            if tgt is not None and b.s in c1.diffs:
                m = bimod.tensor_morphisms(c1.d(b.s), identity(ring, c2.term(b.t)), b.layout, tgt.layout)
                _embed(acc, m, tgt.offset, b.offset)
            tgt = nxt.get((b.s, b.t + 1))
            if tgt is not None and b.t in c2.diffs:
                m = bimod.tensor_morphisms(identity(ring, c1.term(b.s)), c2.d(b.t), b.layout, tgt.layout)
                _embed(acc, m, tgt.offset, b.offset, -1 if b.s % 2 else 1)
        acc = {key: v for key, v in acc.items() if v}
        if acc:
            diffs[k] = BimoduleMorphism(ring, terms[k], terms.get(k + 1, ()), 0, acc)
    labels = None
    if c1.labels is not None and c2.labels is not None:
        labels = {}
        for k, lst in blocks.items():
            out = []
            for b in lst:
                for a, bb, m in b.layout.provenance:
                    la, lb = c1.labels[b.s][a], c2.labels[b.t][bb]
                    mid = la[1] + ((m,) if m is not None else ()) + lb[1]
                    out.append((la[0] + lb[0], mid))
            labels[k] = tuple(out)
    return ChainComplex(ring, terms, diffs, labels=labels, check=False)


def tensor_maps(f: ChainMap, g: ChainMap, source: ChainComplex | None = None,
                target: ChainComplex | None = None) -> ChainMap:
    """``f (x) g`` for maps of cohomological shift 0 (no sign is needed)."""
    if f.shift or g.shift:
        raise ValueError("tensor_maps supports cohomological shift 0 only")
    ring = f.ring
    source = source or tensor(f.source, g.source)
    target = target or tensor(f.target, g.target)
    sblocks = _tensor_blocks(f.source, g.source)
    tblocks = {(b.s, b.t): b for lst in _tensor_blocks(f.target, g.target).values() for b in lst}
    comps = {}
    for k, lst in sblocks.items():
        acc: dict = {}
        for b in lst:
            fc, gc = f.components.get(b.s), g.components.get(b.t)
            if fc is None or gc is None:
                continue
            tb = tblocks.get((b.s, b.t))
            if tb is None:
                continue
            m = bimod.tensor_morphisms(fc, gc, b.layout, tb.layout)
            _embed(acc, m, tb.offset, b.offset)
        acc = {key: v for key, v in acc.items() if v}
        if acc:
            comps[k] = BimoduleMorphism(ring, source.term(k), target.term(k), f.degree + g.degree, acc)
    return ChainMap(source, target, comps, f.degree + g.degree)


def reassociate(c_from: ChainComplex, c_to: ChainComplex) -> ChainMap:
    """The structural isomorphism between two bracketings of one tensor product.

    Summands are matched by provenance label; every entry sends generator to
    generator.
    """
    if c_from.labels is None or c_to.labels is None:
        raise ValueError("reassociate needs labelled complexes")
    ring = c_from.ring
    comps = {}
    for t, summands in c_from.terms.items():
        where = {lab: k for k, lab in enumerate(c_to.labels.get(t, ()))}
        if len(where) != len(summands) or set(where) != set(c_from.labels[t]):
            raise ValueError(f"label sets differ in degree {t}")
        entries = {}
        for k, lab in enumerate(c_from.labels[t]):
            r = where[lab]
            if c_to.terms[t][r] != summands[k]:
                raise ValueError("matched summands differ")
            entries[(r, k)] = generator(ring, summands[k])
        comps[t] = BimoduleMorphism(ring, summands, c_to.terms[t], 0, entries)
    return ChainMap(c_from, c_to, comps)


# ---------------------------------------------------------------------------
# cones and shifts


def shift(c: ChainComplex, s: int, k: int = 0) -> ChainComplex:
    """``c[s]{k}``: degree ``t`` holds ``c_{t+s}`` with every summand shifted by ``k``.

    Differentials are negated when ``s`` is odd.
    """
    sign = -1 if s % 2 else 1
    terms = {t - s: tuple(x.shifted(k) for x in v) for t, v in c.terms.items()}
    diffs = {t - s: BimoduleMorphism(c.ring, terms[t - s], terms.get(t - s + 1, ()), 0,
                                     {key: scale(img, sign) for key, img in m.entries.items()})
             for t, m in c.diffs.items()}
    labels = None if c.labels is None else {t - s: v for t, v in c.labels.items()}
    return ChainComplex(c.ring, terms, diffs, labels=labels, check=False)


def cone(f: ChainMap) -> ChainComplex:
    """``cone(f)_t = source_{t+1} (+) target_t`` with ``d = [[-d, 0], [f, d]]``."""
    if f.shift or f.degree:
        raise ValueError("cone needs a chain map of internal degree 0 and shift 0")
    ring = f.ring
    C, D = f.source, f.target
    degs = {t - 1 for t in C.terms} | set(D.terms)
    terms = {t: C.term(t + 1) + D.term(t) for t in degs}
    diffs = {}
    for t in degs:
        nc = len(C.term(t + 1))
        acc: dict = {}
        _embed(acc, C.d(t + 1), 0, 0, -1)
        _embed(acc, f.component(t + 1), len(C.term(t + 2)), 0)
        _embed(acc, D.d(t), len(C.term(t + 2)), nc)
        acc = {key: v for key, v in acc.items() if v}
        if acc:
            diffs[t] = BimoduleMorphism(ring, terms[t], terms.get(t + 1, ()), 0, acc)
    return ChainComplex(ring, terms, diffs)


# ---------------------------------------------------------------------------
# central multiplications


def _as_element(ring: ZigzagRing, a) -> AlgebraElement:
    if isinstance(a, int):
        return AlgebraElement({e: a for e in ring.idempotents})
    return a if isinstance(a, AlgebraElement) else AlgebraElement(a)


def _central_degree(ring: ZigzagRing, a: AlgebraElement) -> int:
    if not is_central(ring, a):
        raise ValueError(f"{a} is not central")
    degs = a.degrees()
    if len(degs) > 1:
        raise ValueError(f"{a} is not homogeneous")
    return degs.pop() if degs else 0


def _central_map(c: ChainComplex, a, side: str) -> ChainMap:
    ring = c.ring
    a = _as_element(ring, a)
    deg = _central_degree(ring, a)
    comps = {}
    for t, summands in c.terms.items():
        entries = {}
        for k, s in enumerate(summands):
            if s.kind == DIAG:
                img = dict(a.coeffs)
            elif side == "left":
                img = bimod.left_act_element(ring, a.coeffs, generator(ring, s))
            else:
                img = bimod.right_act_element(ring, generator(ring, s), a.coeffs)
            if img:
                entries[(k, k)] = img
        if entries:
            comps[t] = BimoduleMorphism(ring, summands, summands, deg, entries)
    return ChainMap(c, c, comps, deg)


def left_mult(c: ChainComplex, a) -> ChainMap:
    """Left multiplication by a homogeneous central element ``a``."""
    return _central_map(c, a, "left")


def right_mult(c: ChainComplex, a) -> ChainMap:
    """Right multiplication by a homogeneous central element ``a``."""
    return _central_map(c, a, "right")


# ---------------------------------------------------------------------------
# Gaussian elimination


@dataclass
class Simplification:
    """Result of :func:`simplify`.

    ``inclusion: complex -> original`` and ``projection: original -> complex``
    satisfy ``projection o inclusion == id``; ``homotopy`` (when requested)
    witnesses ``inclusion o projection - id == d H + H d``.
    """

    complex: ChainComplex
    inclusion: ChainMap
    projection: ChainMap
    homotopy: Homotopy | None = None

    def __iter__(self):
        return iter((self.complex, self.inclusion, self.projection))


def simplify(c: ChainComplex, with_homotopy: bool = False) -> Simplification:
    """Cancel every ``+-id`` differential entry by Gaussian elimination."""
    return _Eliminator(c, with_homotopy).run()


class _Eliminator:
    def __init__(self, c: ChainComplex, with_homotopy: bool):
        self.c = c
        self.ring = c.ring
        self.with_homotopy = with_homotopy
        # current summands: id -> (degree, summand); ids follow original order
        self.summand = {}
        self.ids = {}
        self.orig_index = {}
        for t, v in c.terms.items():
            lst = []
            for k, s in enumerate(v):
                sid = (t, k)
                self.summand[sid] = s
                lst.append(sid)
            self.ids[t] = lst
        # d[t]: rows[y][x] = image, cols[x] = set(y)
        self.rows: dict = {}
        self.cols: dict = {}
        for t, m in c.diffs.items():
            for (r, s), img in m.entries.items():
                y, x = (t + 1, r), (t, s)
                self.rows.setdefault(y, {})[x] = dict(img)
                self.cols.setdefault(x, set()).add(y)
        # projection rows: psi[cur][orig] = image ; inclusion cols: phi[cur][orig] = image
        self.psi = {sid: {sid: generator(self.ring, s)} for sid, s in self.summand.items()}
        self.phi = {sid: {sid: generator(self.ring, s)} for sid, s in self.summand.items()}
        self.H: dict = {}  # H[(orig_row, orig_col)] = image, orig_col in degree t, row in t-1

    def _get(self, y, x):
        return self.rows.get(y, {}).get(x)

    def _set(self, y, x, img):
        if img:
            self.rows.setdefault(y, {})[x] = img
            self.cols.setdefault(x, set()).add(y)
        else:
            r = self.rows.get(y)
            if r is not None and x in r:
                del r[x]
                self.cols[x].discard(y)

    def _remove(self, sid):
        for x in list(self.rows.get(sid, {})):
            self.cols[x].discard(sid)
        self.rows.pop(sid, None)
        for y in list(self.cols.get(sid, ())):
            del self.rows[y][sid]
        self.cols.pop(sid, None)
        del self.summand[sid]
        self.ids[sid[0]].remove(sid)

    def _find(self):
        for t in sorted(self.ids):
            for x in self.ids[t]:
                for y in sorted(self.cols.get(x, ())):
                    eps = self._unit(x, y)
                    if eps:
                        return x, y, eps
        return None

    def _unit(self, x, y) -> int:
        sx, sy = self.summand[x], self.summand[y]
        if sx != sy:
            return 0
        img = self.rows[y][x]
        gen = generator(self.ring, sx)
        if img == gen:
            return 1
        if img == scale(gen, -1):
            return -1
        return 0

    def run(self) -> Simplification:
        while True:
            hit = self._find()
            if hit is None:
                break
            self._eliminate(*hit)
        return self._result()

    def _eliminate(self, a, b, eps):
        ring = self.ring
        sa = self.summand[a]
        delta_row = {x: img for x, img in self.rows.get(b, {}).items() if x != a}
        gamma_col = {y: self.rows[y][a] for y in self.cols.get(a, ()) if y != b}
        # homotopy update uses the old inclusion and projection
        if self.with_homotopy:
            for o, img in self.psi.get(b, {}).items():
                moved = scale(img, -eps)
                for r, pimg in self.phi[a].items():
                    val = apply_entry(ring, sa, pimg, moved)
                    if val:
                        add_into(self.H.setdefault((r, o), {}), val)
        # differential: eps_yx -= gamma_y o phi^{-1} o delta_x
        for y, gimg in gamma_col.items():
            for x, dimg in delta_row.items():
                val = apply_entry(ring, sa, gimg, dimg)
                if val:
                    cur = dict(self._get(y, x) or {})
                    add_into(cur, val, -eps)
                    self._set(y, x, cur)
        # inclusion: column x gains -eps * phi[a] o delta_x
        for x, dimg in delta_row.items():
            col = self.phi[x]
            for r, pimg in self.phi[a].items():
                val = apply_entry(ring, sa, pimg, dimg)
                if val:
                    add_into(col.setdefault(r, {}), val, -eps)
                    if not col[r]:
                        del col[r]
        # projection: row y gains -eps * gamma_y o psi[b]
        for y, gimg in gamma_col.items():
            row = self.psi[y]
            for o, pimg in self.psi[b].items():
                val = apply_entry(ring, sa, gimg, pimg)
                if val:
                    add_into(row.setdefault(o, {}), val, -eps)
                    if not row[o]:
                        del row[o]
        for sid in (a, b):
            self._remove(sid)
            self.psi.pop(sid, None)
            self.phi.pop(sid, None)

    def _result(self) -> Simplification:
        ring, c = self.ring, self.c
        terms = {t: tuple(self.summand[s] for s in v) for t, v in self.ids.items() if v}
        pos = {sid: k for t, v in self.ids.items() for k, sid in enumerate(v)}
        diffs = {}
        for t in terms:
            entries = {}
            for y in self.ids.get(t + 1, ()):
                for x, img in self.rows.get(y, {}).items():
                    if img:
                        entries[(pos[y], pos[x])] = img
            if entries:
                diffs[t] = BimoduleMorphism(ring, terms[t], terms[t + 1], 0, entries)
        small = ChainComplex(ring, terms, diffs, check=False)
        inc, proj = {}, {}
        for t in set(terms) | set(c.terms):
            ie, pe = {}, {}
            for sid in self.ids.get(t, ()):
                for (ot, ok), img in self.phi[sid].items():
                    ie[(ok, pos[sid])] = img
                for (ot, ok), img in self.psi[sid].items():
                    pe[(pos[sid], ok)] = img
            if ie:
                inc[t] = BimoduleMorphism(ring, terms.get(t, ()), c.term(t), 0, ie)
            if pe:
                proj[t] = BimoduleMorphism(ring, c.term(t), terms.get(t, ()), 0, pe)
        inclusion = ChainMap(small, c, inc)
        projection = ChainMap(c, small, proj)
        homotopy = None
        if self.with_homotopy:
            f = compose_maps(inclusion, projection) - identity_map(c)
            hc: dict = {}
            for ((rt, rk), (ot, ok)), img in self.H.items():
                if img:
                    hc.setdefault(ot, {})[(rk, ok)] = img
            comps = {t: BimoduleMorphism(ring, c.term(t), c.term(t - 1), 0, e) for t, e in hc.items()}
            homotopy = Homotopy(f, comps, check=False)
        return Simplification(small, inclusion, projection, homotopy)


# ---------------------------------------------------------------------------
# null-homotopies


def is_null_homotopic(f: ChainMap, constraints: Sequence[ChainMap] = ()) -> Homotopy | None:
    """Find ``h`` with ``d h + h d == f`` over Z, or return ``None``.

    Each chain map ``g`` in ``constraints`` (with source ``f.target``) adds the
    linear condition ``g o h == 0`` on the homotopy.
    """
    if f.shift:
        raise ValueError("null-homotopy test needs cohomological shift 0")
    ring = f.ring
    C, D = f.source, f.target
    deg = f.degree
    columns, unknowns = [], []
    for t in C.degrees:
        tgt = D.term(t - 1)
        if not tgt:
            continue
        for s, ss in enumerate(C.term(t)):
            for v, sv in enumerate(tgt):
                hb = hom_basis(ring, ss, sv, deg)
                for k, b in enumerate(hb.basis):
                    columns.append(_homotopy_column(f, t, s, v, b, constraints))
                    unknowns.append((t, s, v, b))
    rhs = {}
    for t, m in f.components.items():
        for (u, s), img in m.entries.items():
            for key, val in img.items():
                rhs[("f", t, u, s, key)] = val
    if not rhs:
        return Homotopy(f, {}, check=True)
    if not columns:
        return None
    sol = zlinalg.solve_integer(columns, rhs)
    if sol is None:
        return None
    comps: dict = {}
    for c, (t, s, v, b) in zip(sol, unknowns):
        if c:
            add_into(comps.setdefault(t, {}).setdefault((v, s), {}), b, c)
    hcomps = {t: BimoduleMorphism(ring, C.term(t), D.term(t - 1), deg, {k: v for k, v in e.items() if v})
              for t, e in comps.items()}
    return Homotopy(f, hcomps, check=True)


def _homotopy_column(f: ChainMap, t: int, s: int, v: int, b: dict, constraints) -> dict:
    ring = f.ring
    C, D = f.source, f.target
    sv = D.term(t - 1)[v]
    ss = C.term(t)[s]
    col: dict = {}
    # d_D o h at degree t: entries (u, s) of D_t
    dD = D.diffs.get(t - 1)
    if dD is not None:
        for (u, vv), img in dD.entries.items():
            if vv == v:
                val = apply_entry(ring, sv, img, b)
                for key, x in val.items():
                    col[("f", t, u, s, key)] = col.get(("f", t, u, s, key), 0) + x
    # h o d_C at degree t-1: entries (v, w) with w in C_{t-1}
    dC = C.diffs.get(t - 1)
    if dC is not None:
        for (ss_, w), img in dC.entries.items():
            if ss_ == s:
                val = apply_entry(ring, ss, b, img)
                for key, x in val.items():
                    col[("f", t - 1, v, w, key)] = col.get(("f", t - 1, v, w, key), 0) + x
    for ci, g in enumerate(constraints):
        gm = g.components.get(t - 1)
        if gm is None:
            continue
        for (e, vv), img in gm.entries.items():
            if vv == v:
                val = apply_entry(ring, sv, img, b)
                for key, x in val.items():
                    col[("c", ci, t, e, s, key)] = col.get(("c", ci, t, e, s, key), 0) + x
    return {k: x for k, x in col.items() if x}


# ---------------------------------------------------------------------------
# homotopy equivalence


def chain_map_lattice(C: ChainComplex, D: ChainComplex, degree: int = 0):
    """Z-basis of the degree-``degree`` chain maps ``C -> D`` (cohomological shift 0).

    Returns ``(unknowns, basis)`` where each basis vector lists integer
    coefficients for the Hom-basis elements in ``unknowns``.
    """
    ring = C.ring
    unknowns, columns = [], []
    for t in C.degrees:
        for s, ss in enumerate(C.term(t)):
            for u, su in enumerate(D.term(t)):
                for b in hom_basis(ring, ss, su, degree).basis:
                    col: dict = {}
                    for (w, uu), img in D.d(t).entries.items():
                        if uu == u:
                            for key, x in apply_entry(ring, su, img, b).items():
                                col[(t, w, s, key)] = col.get((t, w, s, key), 0) + x
                    for (ss_, r), img in C.d(t - 1).entries.items():
                        if ss_ == s:
                            for key, x in apply_entry(ring, ss, b, img).items():
                                col[(t - 1, u, r, key)] = col.get((t - 1, u, r, key), 0) - x
                    columns.append({k: x for k, x in col.items() if x})
                    unknowns.append((t, u, s, b))
    ech = zlinalg.ColumnEchelon(columns)
    basis = []
    for kc in ech.kernel_columns:
        v = [0] * len(columns)
        for k, x in kc.items():
            v[k] = x
        basis.append(v)
    return unknowns, basis


def _assemble(C, D, unknowns, coeffs, degree=0) -> ChainMap:
    comps: dict = {}
    for c, (t, u, s, b) in zip(coeffs, unknowns):
        if c:
            add_into(comps.setdefault(t, {}).setdefault((u, s), {}), b, c)
    return ChainMap(C, D, {t: BimoduleMorphism(C.ring, C.term(t), D.term(t), degree,
                                               {k: v for k, v in e.items() if v})
                           for t, e in comps.items()}, degree)


def _scalar_blocks(C: ChainComplex, D: ChainComplex):
    """Index the pairs of equal summands; the coefficient of the generator there."""
    blocks: dict = {}
    for t in C.degrees:
        for s, ss in enumerate(C.term(t)):
            for u, su in enumerate(D.term(t)):
                if ss == su:
                    blocks.setdefault((t, ss), []).append((u, s))
    return blocks


def _generator_coefficient(ring, s: Summand, img: dict) -> int:
    if s.kind == TENS:
        return img.get((BasisPath((s.i,)), BasisPath((s.j,))), 0)
    return img.get(BasisPath((1,)), 0)


def _det(m: list[list[int]]) -> int:
    """Exact determinant by fraction-free elimination (Bareiss)."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def find_isomorphism(M1: ChainComplex, M2: ChainComplex, search_limit: int = 8) -> ChainMap | None:
    """A degree-0 chain isomorphism between complexes with no unit entries."""
    if M1.term_multiset() != M2.term_multiset():
        return None
    ring = M1.ring
    unknowns, basis = chain_map_lattice(M1, M2)
    blocks = _scalar_blocks(M1, M2)
    # image of each lattice vector in the scalar blocks
    where = {}
    for key, pairs in blocks.items():
        for u, s in pairs:
            where[(key[0], u, s)] = key
    proj_cols = []
    for vec in basis:
        col = {}
        for c, (t, u, s, b) in zip(vec, unknowns):
            if c and (t, u, s) in where:
                g = _generator_coefficient(ring, M1.term(t)[s], b)
                if g:
                    col[(t, u, s)] = col.get((t, u, s), 0) + c * g
        proj_cols.append({k: v for k, v in col.items() if v})
    ech = zlinalg.ColumnEchelon(proj_cols)
    piv_cols = [ech.pivots[r] for r in sorted(ech.pivots)]
    if len(piv_cols) > search_limit:
        piv_cols = piv_cols[:search_limit]
    combos = [ech.U[p] for p in piv_cols]
    images = [ech.cols[p] for p in piv_cols]
    row_keys = ech.row_keys
    block_list = [(key, pairs) for key, pairs in sorted(blocks.items(), key=lambda kv: (kv[0][0], str(kv[0][1])))]

    def is_iso(img: dict) -> bool:
        for key, pairs in block_list:
            us = sorted({u for u, _ in pairs})
            ss = sorted({s for _, s in pairs})
            mat = [[img.get((key[0], u, s), 0) for s in ss] for u in us]
            if abs(_det(mat)) != 1:
                return False
        return True

    for coeffs in itertools.product((0, 1, -1), repeat=len(piv_cols)):
        if not any(coeffs):
            continue
        img: dict = {}
        for c, im in zip(coeffs, images):
            if c:
                for r, v in im.items():
                    k = row_keys[r]
                    img[k] = img.get(k, 0) + c * v
        if is_iso(img):
            total = [0] * len(basis)
            for c, u in zip(coeffs, combos):
                for k, v in u.items():
                    total[k] += c * v
            vec = [0] * len(unknowns)
            for w, x in zip(total, basis):
                if w:
                    for k, v in enumerate(x):
                        vec[k] += w * v
            return _assemble(M1, M2, unknowns, vec)
    return None


def invert_isomorphism(f: ChainMap) -> ChainMap:
    """Degreewise inverse of a chain isomorphism of degree 0."""
    ring = f.ring
    C, D = f.source, f.target
    comps = {}
    for t in D.degrees:
        fm = f.component(t)
        unknowns, columns = [], []
        for s, sd in enumerate(D.term(t)):
            for r, sc in enumerate(C.term(t)):
                for b in hom_basis(ring, sd, sc, 0).basis:
                    g = BimoduleMorphism(ring, D.term(t), C.term(t), 0, {(r, s): b})
                    gf = compose(g, fm)
                    col = {}
                    for key, img in gf.entries.items():
                        for k, v in img.items():
                            col[(key, k)] = v
                    unknowns.append((r, s, b))
                    columns.append(col)
        rhs = {}
        for k, sc in enumerate(C.term(t)):
            for key, v in generator(ring, sc).items():
                rhs[((k, k), key)] = v
        sol = zlinalg.solve_integer(columns, rhs)
        if sol is None:
            raise ValueError(f"map is not invertible in degree {t}")
        entries: dict = {}
        for c, (r, s, b) in zip(sol, unknowns):
            if c:
                add_into(entries.setdefault((r, s), {}), b, c)
        comps[t] = BimoduleMorphism(ring, D.term(t), C.term(t), 0, {k: v for k, v in entries.items() if v})
    g = ChainMap(D, C, comps)
    return g


def is_homotopy_equivalent(c1: ChainComplex, c2: ChainComplex):
    """Return ``(F, G)`` with ``G o F ~ id`` and ``F o G ~ id``, or ``None``.

    Both sides are reduced by :func:`simplify`; an isomorphism of the
    reduced complexes is then searched for among degree-0 chain maps whose
    scalar parts are invertible.  ``None`` is definite when the reduced term
    multisets differ; otherwise it means no isomorphism was found by the
    bounded search, which is a semi-decision.
    """
    s1, s2 = simplify(c1), simplify(c2)
    f = find_isomorphism(s1.complex, s2.complex)
    if f is None:
        return None
    g = invert_isomorphism(f)
    F = compose_maps(s2.inclusion, compose_maps(f, s1.projection))
    G = compose_maps(s1.inclusion, compose_maps(g, s2.projection))
    return F, G
