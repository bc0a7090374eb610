"""Graded projective A_n-bimodules and the maps between them.

An indecomposable summand is either the diagonal bimodule ``A_n{k}`` or
``P_i (x) _jP {k} = A_n(i) (x)_Z (j)A_n {k}``.  Both are cyclic: the diagonal
bimodule is generated by ``1`` and the tensor bimodule by ``(i) (x) (j)``.  A
bimodule map out of a summand is therefore stored as the image of the
generator, an element of the target's underlying lattice.  Lattice elements
are plain dicts from basis keys to integers: a key is a path for the diagonal
bimodule and a pair of paths for a tensor bimodule.

Shifts follow the convention that an element of degree ``e`` in ``M`` has
degree ``e + k`` in ``M{k}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from . import zlinalg
from .zigzag import BasisPath, ZigzagRing

__all__ = [
    "Summand",
    "diagonal",
    "tensor_summand",
    "BimoduleMorphism",
    "HomSpaceBasis",
    "hom_basis",
    "underlying_lattice",
    "tensor_objects",
    "tensor_morphisms",
    "compose",
    "identity",
    "generator",
    "apply_entry",
]

DIAG = "A"
TENS = "P"


class Summand(NamedTuple):
    kind: str  # "A" for the diagonal bimodule, "P" for P_i (x) _jP
    i: int = 0
    j: int = 0
    shift: int = 0

    def shifted(self, k: int) -> "Summand":
        return self._replace(shift=self.shift + k)

    def unshifted(self) -> "Summand":
        return self._replace(shift=0)

    def __str__(self) -> str:
        body = "A" if self.kind == DIAG else f"P{self.i}(x){self.j}P"
        return body + (f"{{{self.shift}}}" if self.shift else "")


def diagonal(shift: int = 0) -> Summand:
    return Summand(DIAG, 0, 0, shift)


def tensor_summand(i: int, j: int, shift: int = 0) -> Summand:
    return Summand(TENS, i, j, shift)


# ---------------------------------------------------------------------------
# lattices and actions


def lattice_keys(ring: ZigzagRing, s: Summand) -> list:
    if s.kind == DIAG:
        return list(ring.basis)
    return [(p, q) for p in ring.paths_ending_at(s.i) for q in ring.paths_starting_at(s.j)]


def key_degree(key) -> int:
    """Unshifted degree of a lattice key."""
    if isinstance(key, BasisPath):
        return key.degree
    return key[0].degree + key[1].degree


@dataclass(frozen=True)
class Lattice:
    summand: Summand
    keys: tuple
    degrees: tuple

    @property
    def rank(self) -> int:
        return len(self.keys)

    def graded_rank(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return out


def underlying_lattice(ring: ZigzagRing, s: Summand) -> Lattice:
    """The graded free abelian group underlying a summand (shift applied)."""
    keys = tuple(lattice_keys(ring, s))
    return Lattice(s, keys, tuple(key_degree(k) + s.shift for k in keys))


def generator(ring: ZigzagRing, s: Summand) -> dict:
    if s.kind == DIAG:
        return {e: 1 for e in ring.idempotents}
    return {(BasisPath((s.i,)), BasisPath((s.j,))): 1}


def left_act(ring: ZigzagRing, a: BasisPath, elem: dict) -> dict:
    table = ring.table
    out: dict = {}
    for k, c in elem.items():
        if isinstance(k, BasisPath):
            nk = table[(a, k)]
        else:
            p = table[(a, k[0])]
            nk = None if p is None else (p, k[1])
        if nk is not None:
            out[nk] = out.get(nk, 0) + c
    return {k: c for k, c in out.items() if c}


def right_act(ring: ZigzagRing, elem: dict, b: BasisPath) -> dict:
    table = ring.table
    out: dict = {}
    for k, c in elem.items():
        if isinstance(k, BasisPath):
            nk = table[(k, b)]
        else:
            q = table[(k[1], b)]
            nk = None if q is None else (k[0], q)
        if nk is not None:
            out[nk] = out.get(nk, 0) + c
    return {k: c for k, c in out.items() if c}


def _sandwich(ring: ZigzagRing, p: BasisPath, z: dict, q: BasisPath | None, acc: dict, coeff: int) -> None:
    """acc += coeff * (p . z . q)."""
    table = ring.table
    for k, c in z.items():
        if isinstance(k, BasisPath):
            m = table[(p, k)]
            if m is not None and q is not None:
                m = table[(m, q)]
            if m is None:
                continue
            nk = m
        else:
            l = table[(p, k[0])]
            if l is None:
                continue
            r = k[1] if q is None else table[(k[1], q)]
            if r is None:
                continue
            nk = (l, r)
        v = acc.get(nk, 0) + coeff * c
        if v:
            acc[nk] = v
        else:
            acc.pop(nk, None)


def apply_entry(ring: ZigzagRing, src: Summand, image: dict, elem: dict) -> dict:
    """Evaluate the bimodule map ``generator(src) -> image`` on ``elem``."""
    out: dict = {}
    if not image or not elem:
        return out
    if src.kind == DIAG:
        for x, c in elem.items():
            _sandwich(ring, x, image, None, out, c)
    else:
        for (p, q), c in elem.items():
            _sandwich(ring, p, image, q, out, c)
    return out


def add_into(acc: dict, elem: dict, coeff: int = 1) -> None:
    for k, c in elem.items():
        v = acc.get(k, 0) + coeff * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)


def scale(elem: dict, c: int) -> dict:
    return {k: c * v for k, v in elem.items()} if c else {}


def is_bimodule_image(ring: ZigzagRing, src: Summand, image: dict) -> bool:
    """Whether ``generator(src) -> image`` extends to a bimodule map."""
    if src.kind == TENS:
        ei, ej = BasisPath((src.i,)), BasisPath((src.j,))
        return right_act(ring, left_act(ring, ei, image), ej) == image
    return all(left_act(ring, g, image) == right_act(ring, image, g) for g in ring.generators)


# ---------------------------------------------------------------------------
# Hom spaces


@dataclass(frozen=True)
class HomSpaceBasis:
    """Z-basis of the degree-``degree`` bimodule maps ``source -> target``.

    Each basis element is the image of the source generator.  The basis is in
    Hermite normal form with respect to the target's lattice key order.
    """

    source: Summand
    target: Summand
    degree: int
    keys: tuple
    basis: tuple
    _pivots: tuple = field(default=(), repr=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, image: dict) -> list[int] | None:
        """Coordinates of ``image`` in this basis, ``None`` if outside the span."""
        res = dict(image)
        coords = []
        for b, piv in zip(self.basis, self._pivots):
            c, r = divmod(res.get(piv, 0), b[piv])
            if r:
                return None
            coords.append(c)
            if c:
                add_into(res, b, -c)
        return None if res else coords


_HOM_CACHE: dict = {}


def hom_basis(ring: ZigzagRing, a: Summand, b: Summand, degree: int) -> HomSpaceBasis:
    """Basis of Hom^degree(a, b) obtained as a nullspace over Z."""
    intrinsic = degree + a.shift - b.shift
    ckey = (ring.n, a.unshifted(), b.unshifted(), intrinsic)
    hit = _HOM_CACHE.get(ckey)
    if hit is None:
        hit = _compute_hom(ring, a.unshifted(), b.unshifted(), intrinsic)
        _HOM_CACHE[ckey] = hit
    keys, basis, pivots = hit
    return HomSpaceBasis(a, b, degree, keys, basis, pivots)


def _compute_hom(ring: ZigzagRing, a: Summand, b: Summand, e: int):
    keys = tuple(k for k in lattice_keys(ring, b) if key_degree(k) == e)
    if a.kind == TENS:
        # maps out of P_i (x) _jP are the elements of (i) b (j)
        ei, ej = BasisPath((a.i,)), BasisPath((a.j,))
        cand = [k for k in keys if right_act(ring, left_act(ring, ei, {k: 1}), ej) == {k: 1}]
        vectors = [[1 if k == c else 0 for k in keys] for c in cand]
    else:
        # central elements: a z - z a = 0 for every generator a
        columns = []
        for k in keys:
            col = {}
            for gi, g in enumerate(ring.generators):
                diff = dict(left_act(ring, g, {k: 1}))
                add_into(diff, right_act(ring, {k: 1}, g), -1)
                for kk, v in diff.items():
                    col[(gi, kk)] = v
            columns.append(col)
        vectors = zlinalg.integer_kernel(columns)
    vectors = zlinalg.hermite_normal_form(vectors)
    basis, pivots = [], []
    for v in vectors:
        elem = {k: c for k, c in zip(keys, v) if c}
        basis.append(elem)
        pivots.append(next(k for k, c in zip(keys, v) if c))
    return keys, tuple(basis), tuple(pivots)


# ---------------------------------------------------------------------------
# morphisms


class BimoduleMorphism:
    """Matrix of bimodule maps between formal direct sums of summands.

    ``entries[(t, s)]`` is the image of the generator of ``source[s]`` in the
    lattice of ``target[t]``; missing entries are zero.  ``degree`` is the
    internal degree of the whole map.
    """

    __slots__ = ("ring", "source", "target", "degree", "entries")

    def __init__(self, ring: ZigzagRing, source: Sequence[Summand], target: Sequence[Summand],
                 degree: int = 0, entries: dict | None = None, check: bool = False):
        self.ring = ring
        self.source = tuple(source)
        self.target = tuple(target)
        self.degree = degree
        self.entries = {k: v for k, v in (entries or {}).items() if v}
        if check:
            self.validate()

    def validate(self) -> None:
        for (t, s), img in self.entries.items():
            src, tgt = self.source[s], self.target[t]
            want = self.degree + src.shift - tgt.shift
            for k in img:
                if key_degree(k) != want:
                    raise ValueError(f"entry ({t},{s}) has a term of the wrong degree")
            if tgt.kind == TENS:
                ei, ej = BasisPath((tgt.i,)), BasisPath((tgt.j,))
                if right_act(self.ring, left_act(self.ring, ei, img), ej) != img:
                    raise ValueError(f"entry ({t},{s}) leaves the target lattice")
            if not is_bimodule_image(self.ring, src, img):
                raise ValueError(f"entry ({t},{s}) is not a bimodule map")

    # arithmetic -----------------------------------------------------------
    def _same_shape(self, other: "BimoduleMorphism") -> None:
        if self.source != other.source or self.target != other.target:
            raise ValueError("morphisms between different objects")

    def __add__(self, other: "BimoduleMorphism") -> "BimoduleMorphism":
        self._same_shape(other)
        if not other.entries:
            return self
        if not self.entries:
            return other
        if self.degree != other.degree:
            raise ValueError("cannot add maps of different degrees")
        out = {k: dict(v) for k, v in self.entries.items()}
        for k, v in other.entries.items():
            add_into(out.setdefault(k, {}), v)
        return BimoduleMorphism(self.ring, self.source, self.target, self.degree, out)

    def __neg__(self) -> "BimoduleMorphism":
        return self.scaled(-1)

    def __sub__(self, other: "BimoduleMorphism") -> "BimoduleMorphism":
        return self + (-other)

    def scaled(self, c: int) -> "BimoduleMorphism":
        return BimoduleMorphism(self.ring, self.source, self.target, self.degree,
                                {k: scale(v, c) for k, v in self.entries.items()})

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        if not isinstance(other, BimoduleMorphism):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        if self.entries != other.entries:
            return False
        return not self.entries or self.degree == other.degree

    def __matmul__(self, other: "BimoduleMorphism") -> "BimoduleMorphism":
        return compose(self, other)

    def entry(self, t: int, s: int) -> dict:
        return self.entries.get((t, s), {})

    def coordinates(self) -> dict:
        """Entries expressed in the cached Hom-space bases."""
        out = {}
        for (t, s), img in sorted(self.entries.items()):
            hb = hom_basis(self.ring, self.source[s], self.target[t], self.degree)
            out[(t, s)] = hb.coordinates(img)
        return out

    def dump(self) -> str:
        """Debug rendering: one line per nonzero entry with its Hom coordinates."""
        lines = [f"degree {self.degree}: {len(self.source)} -> {len(self.target)} summands"]
        for (t, s), c in self.coordinates().items():
            lines.append(f"  [{t},{s}] {self.source[s]} -> {self.target[t]}: {c}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"BimoduleMorphism({len(self.source)}->{len(self.target)}, degree={self.degree}, {len(self.entries)} entries)"


def zero_morphism(ring, source, target, degree: int = 0) -> BimoduleMorphism:
    return BimoduleMorphism(ring, source, target, degree, {})


def identity(ring: ZigzagRing, obj: Sequence[Summand]) -> BimoduleMorphism:
    return BimoduleMorphism(ring, obj, obj, 0, {(k, k): generator(ring, s) for k, s in enumerate(obj)})


def compose(g: BimoduleMorphism, f: BimoduleMorphism) -> BimoduleMorphism:
    """``g o f``; the target of ``f`` must equal the source of ``g``."""
    if f.target != g.source:
        raise ValueError("composition of morphisms with mismatched objects")
    ring = f.ring
    by_source: dict[int, list] = {}
    for (u, t), img in g.entries.items():
        by_source.setdefault(t, []).append((u, img))
    out: dict = {}
    for (t, s), fimg in f.entries.items():
        src_t = f.target[t]
        for u, gimg in by_source.get(t, ()):
            val = apply_entry(ring, src_t, gimg, fimg)
            if val:
                add_into(out.setdefault((u, s), {}), val)
    return BimoduleMorphism(ring, f.source, g.target, f.degree + g.degree, out)


# ---------------------------------------------------------------------------
# tensor products over A_n


@dataclass
class TensorLayout:
    """How ``M (x) N`` decomposes: ``pieces[(a, b)]`` lists ``(index, middle)``.

    ``middle`` is the basis path of ``(j)A_n(p)`` used for the summand when
    both factors are tensor bimodules, otherwise ``None``.
    """

    left: tuple
    right: tuple
    summands: tuple
    pieces: dict
    provenance: tuple  # per output summand: (a, b, middle)


def tensor_objects(ring: ZigzagRing, M: Sequence[Summand], N: Sequence[Summand]) -> TensorLayout:
    """Decompose ``M (x)_{A_n} N`` into indecomposables, recording the identification."""
    out, pieces, prov = [], {}, []
    for a, x in enumerate(M):
        for b, y in enumerate(N):
            lst = []
            if x.kind == DIAG:
                lst.append((len(out), None))
                out.append(y.shifted(x.shift))
                prov.append((a, b, None))
            elif y.kind == DIAG:
                lst.append((len(out), None))
                out.append(x.shifted(y.shift))
                prov.append((a, b, None))
            else:
                for m in ring.paths_between(x.j, y.i):
                    lst.append((len(out), m))
                    out.append(tensor_summand(x.i, y.j, x.shift + y.shift + m.degree))
                    prov.append((a, b, m))
            pieces[(a, b)] = lst
    return TensorLayout(tuple(M), tuple(N), tuple(out), pieces, tuple(prov))


def tensor_element(ring: ZigzagRing, layout: TensorLayout, a: int, b: int, x: dict, y: dict,
                   acc: dict, coeff: int = 1) -> None:
    """acc[out_index] += coeff * (x (x) y) for x in M[a], y in N[b]."""
    X, Y = layout.left[a], layout.right[b]
    table = ring.table
    lst = layout.pieces[(a, b)]
    if X.kind == DIAG and Y.kind == DIAG:
        idx = lst[0][0]
        for kx, cx in x.items():
            for ky, cy in y.items():
                m = table[(kx, ky)]
                if m is not None:
                    add_into(acc.setdefault(idx, {}), {m: cx * cy}, coeff)
    elif X.kind == DIAG:
        idx = lst[0][0]
        for kx, cx in x.items():
            for (p, q), cy in y.items():
                m = table[(kx, p)]
                if m is not None:
                    add_into(acc.setdefault(idx, {}), {(m, q): cx * cy}, coeff)
    elif Y.kind == DIAG:
        idx = lst[0][0]
        for (p, q), cx in x.items():
            for ky, cy in y.items():
                m = table[(q, ky)]
                if m is not None:
                    add_into(acc.setdefault(idx, {}), {(p, m): cx * cy}, coeff)
    else:
        where = {m: idx for idx, m in lst}
        for (p1, q1), cx in x.items():
            for (p2, q2), cy in y.items():
                m = table[(q1, p2)]
                if m is not None:
                    add_into(acc.setdefault(where[m], {}), {(p1, q2): cx * cy}, coeff)


def component_generator(ring: ZigzagRing, layout: TensorLayout, idx: int) -> tuple[dict, dict]:
    """Elements ``x, y`` with ``x (x) y`` the generator of output summand ``idx``."""
    a, b, m = layout.provenance[idx]
    X, Y = layout.left[a], layout.right[b]
    if m is None:
        return generator(ring, X), generator(ring, Y)
    return {(BasisPath((X.i,)), m): 1}, generator(ring, Y)


def _apply_morphism(u: BimoduleMorphism, s: int, x: dict) -> dict[int, dict]:
    out = {}
    for (t, ss), img in u.entries.items():
        if ss == s:
            v = apply_entry(u.ring, u.source[s], img, x)
            if v:
                out[t] = v
    return out


def tensor_morphisms(u: BimoduleMorphism, v: BimoduleMorphism,
                     src_layout: TensorLayout | None = None,
                     tgt_layout: TensorLayout | None = None) -> BimoduleMorphism:
    """``u (x) v`` between the decomposed tensor objects (no Koszul sign)."""
    ring = u.ring
    src_layout = src_layout or tensor_objects(ring, u.source, v.source)
    tgt_layout = tgt_layout or tensor_objects(ring, u.target, v.target)
    entries: dict = {}
    for idx in range(len(src_layout.summands)):
        a, b, _ = src_layout.provenance[idx]
        x, y = component_generator(ring, src_layout, idx)
        ux = _apply_morphism(u, a, x)
        if not ux:
            continue
        vy = _apply_morphism(v, b, y)
        if not vy:
            continue
        acc: dict = {}
        for ta, ex in ux.items():
            for tb, ey in vy.items():
                tensor_element(ring, tgt_layout, ta, tb, ex, ey, acc)
        for t, img in acc.items():
            if img:
                entries[(t, idx)] = img
    return BimoduleMorphism(ring, src_layout.summands, tgt_layout.summands, u.degree + v.degree, entries)


def left_act_element(ring: ZigzagRing, a: dict, elem: dict) -> dict:
    """``a . elem`` for an algebra element ``a`` given as ``{path: coeff}``."""
    out: dict = {}
    for p, c in a.items():
        add_into(out, left_act(ring, p, elem), c)
    return out


def right_act_element(ring: ZigzagRing, elem: dict, a: dict) -> dict:
    out: dict = {}
    for p, c in a.items():
        add_into(out, right_act(ring, elem, p), c)
    return out
