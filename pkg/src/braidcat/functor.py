"""From braid words to complexes and from braid movies to chain maps.

``R(w)`` is the left-bracketed tensor product of the letter complexes, never
simplified.  A movie step acting on the subword ``u`` of ``w = t1 u t2`` is
sent to ``id (x) e (x) id`` where ``e: R(u) -> R(u')`` is the local map,
conjugated by the bracketing isomorphisms.  Local maps for Reidemeister
steps come from simplifying both sides and matching the reduced complexes;
they are normalised so that the component between the ``A_n`` summands is
``+1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import bimod
from .bimod import BimoduleMorphism, generator
from .braid import BraidMovie, BraidWord, MovieError, MovieStep, polarity
from .complex import (
    ChainComplex,
    ChainMap,
    Homotopy,
    build_Ri,
    build_Ri_prime,
    compose_maps,
    delta_element,
    find_isomorphism,
    identity_map,
    is_null_homotopic,
    reassociate,
    simplify,
    tensor,
    tensor_maps,
    unit_complex,
)
from .zigzag import ZigzagRing, build_ring

__all__ = [
    "ring_for",
    "build_R",
    "type2_map",
    "local_map",
    "reidemeister_iso",
    "step_map",
    "CobordismInvariant",
    "invariant",
    "Verdict",
    "verify_move",
    "diagonal_coefficient",
    "is_positive_nonvanishing",
]


def ring_for(strands: int) -> ZigzagRing:
    """``A_n`` with ``n = strands - 1``."""
    if strands < 2:
        raise ValueError("braids on fewer than 2 strands have no A_n")
    return build_ring(strands - 1)


def _check_ring(strands: int, ring: ZigzagRing | None) -> ZigzagRing:
    if ring is None:
        return ring_for(strands)
    if ring.n != strands - 1:
        raise ValueError(f"{strands}-strand braids act on A_{strands - 1}, not A_{ring.n}")
    return ring


@lru_cache(maxsize=None)
def _build(n: int, letters: tuple) -> ChainComplex:
    ring = build_ring(n)
    if not letters:
        return unit_complex(ring)
    out = _letter(n, letters[0])
    for x in letters[1:]:
        out = tensor(out, _letter(n, x))
    return out


@lru_cache(maxsize=None)
def _letter(n: int, x: int) -> ChainComplex:
    ring = build_ring(n)
    return build_Ri(ring, x) if x > 0 else build_Ri_prime(ring, -x)


def build_R(w: BraidWord, ring: ZigzagRing | None = None) -> ChainComplex:
    """``R(w)``: the unit complex for the empty word, else ``(..(R_1 (x) R_2) ..) (x) R_k``."""
    ring = _check_ring(w.strands, ring)
    return _build(ring.n, tuple(w.letters))


def _diag_index(c: ChainComplex) -> int:
    idx = [k for k, s in enumerate(c.term(0)) if s == bimod.diagonal()]
    if len(idx) != 1:
        raise ValueError("expected exactly one unshifted A_n summand in degree 0")
    return idx[0]


def type2_map(ring: ZigzagRing, variant: str, i: int) -> ChainMap:
    """The branch-point maps.

    ``w1: A_n -> R_i`` and ``w2: R_i' -> A_n`` are the identity on ``A_n``;
    ``w3: R_i -> A_n`` and ``w4: A_n -> R_i'`` are multiplication by
    ``X_{i-1} - X_{i+1}`` there.
    """
    unit = unit_complex(ring)
    d = dict(delta_element(ring, i).coeffs)
    one = generator(ring, bimod.diagonal())
    if variant in ("w1", "w4"):
        tgt = build_Ri(ring, i) if variant == "w1" else build_Ri_prime(ring, i)
        img, deg = (one, 0) if variant == "w1" else (d, 2)
        comp = BimoduleMorphism(ring, unit.term(0), tgt.term(0), deg, {(_diag_index(tgt), 0): img})
        return ChainMap(unit, tgt, {0: comp}, deg, check=True)
    if variant in ("w2", "w3"):
        src = build_Ri_prime(ring, i) if variant == "w2" else build_Ri(ring, i)
        img, deg = (one, 0) if variant == "w2" else (d, 2)
        comp = BimoduleMorphism(ring, src.term(0), unit.term(0), deg, {(0, _diag_index(src)): img})
        return ChainMap(src, unit, {0: comp}, deg, check=True)
    raise ValueError(f"unknown branch-point map {variant!r}")


def _type2_variant(step: MovieStep, before: BraidWord) -> tuple[str, int]:
    if step.op == "birth":
        return ("w1" if step.sign > 0 else "w4"), step.gen
    x = before.letters[step.pos]
    return ("w3" if x > 0 else "w2"), abs(x)


@lru_cache(maxsize=None)
def _reidemeister_local(n: int, u: tuple, v: tuple) -> ChainMap:
    ring = build_ring(n)
    Ru, Rv = _build(n, u), _build(n, v)
    su, sv = simplify(Ru), simplify(Rv)
    iso = find_isomorphism(su.complex, sv.complex)
    if iso is None:
        raise RuntimeError(f"no equivalence found between R{u} and R{v}")
    a, b = _diag_index(su.complex), _diag_index(sv.complex)
    coeff = iso.component(0).entry(b, a).get(next(iter(ring.idempotents)), 0)
    if coeff not in (1, -1):
        raise RuntimeError("local equivalence is not +-1 on A_n")
    if coeff < 0:
        iso = iso.scaled(-1)
    return compose_maps(sv.inclusion, compose_maps(iso, su.projection))


def _local_words(step: MovieStep, before: BraidWord) -> tuple[int, int, tuple]:
    """``(start, length, new_subword)`` of the part of the word a step touches."""
    L = before.letters
    after = step.apply(before).letters
    p = step.pos
    if step.op == "birth":
        return p, 0, (after[p],)
    if step.op == "death":
        return p, 1, ()
    if step.op == "r1":
        if step.dir == "insert":
            return p, 0, after[p:p + 2]
        return p, 2, ()
    if step.op == "r2":
        return p, 2, after[p:p + 2]
    return p, 3, after[p:p + 3]


def local_map(step: MovieStep, before: BraidWord, ring: ZigzagRing | None = None) -> ChainMap:
    """``e: R(u) -> R(u')`` for the subword ``u`` the step rewrites."""
    ring = _check_ring(before.strands, ring)
    p, length, new = _local_words(step, before)
    old = before.letters[p:p + length]
    if step.op in ("birth", "death"):
        variant, i = _type2_variant(step, before)
        return type2_map(ring, variant, i)
    return _reidemeister_local(ring.n, tuple(old), tuple(new))


def _embed_local(ring: ZigzagRing, before: BraidWord, after: BraidWord, p: int, length: int,
                 e: ChainMap) -> ChainMap:
    n = ring.n
    L = before.letters
    t1, u, t2 = L[:p], L[p:p + length], L[p + length:]
    v = after.letters[p:len(after) - len(t2)]
    src, tgt = _build(n, tuple(L)), _build(n, tuple(after.letters))
    R1, R2 = _build(n, tuple(t1)), _build(n, tuple(t2))
    f = e
    if t1:
        f = tensor_maps(identity_map(R1), f)
    if t2:
        f = tensor_maps(f, identity_map(R2))
    out = f
    if not f.source.same_shape(src) or f.source.labels != src.labels:
        out = compose_maps(out, reassociate(src, f.source))
    if not f.target.same_shape(tgt) or f.target.labels != tgt.labels:
        out = compose_maps(reassociate(f.target, tgt), out)
    return ChainMap(src, tgt, out.components, out.degree)


def step_map(step: MovieStep, before: BraidWord, ring: ZigzagRing | None = None) -> ChainMap:
    """The chain map ``R(before) -> R(after)`` assigned to one movie step."""
    ring = _check_ring(before.strands, ring)
    after = step.apply(before)
    p, length, _ = _local_words(step, before)
    return _embed_local(ring, before, after, p, length, local_map(step, before, ring))


def reidemeister_iso(step: MovieStep, before: BraidWord, ring: ZigzagRing | None = None) -> ChainMap:
    if step.op not in ("r1", "r2", "r3"):
        raise MovieError(f"{step.op} is not a Reidemeister step")
    return step_map(step, before, ring)


@dataclass
class CobordismInvariant:
    movie: BraidMovie
    source: ChainComplex
    target: ChainComplex
    map: ChainMap
    p_plus: int
    p_minus: int

    @property
    def degree(self) -> int:
        return self.map.degree


def invariant(m: BraidMovie, ring: ZigzagRing | None = None) -> CobordismInvariant:
    """``F(S)``: the composite of the step maps, exact at chain level."""
    ring = _check_ring(m.strands, ring)
    f = identity_map(build_R(m.start, ring))
    for step, before in zip(m.steps, m.frames):
        f = compose_maps(step_map(step, before, ring), f)
    pp, pm = polarity(m)
    return CobordismInvariant(m, build_R(m.start, ring), build_R(m.end, ring), f, pp, pm)


@dataclass
class Verdict:
    """Outcome of comparing two movies with common boundary.

    ``sign`` is +1 or -1 when ``F(S2) ~ sign * F(S1)``, else ``None`` with
    ``status == "inequivalent"``.  ``null`` records that both maps are
    themselves null-homotopic, in which case either sign holds.
    """

    status: str
    sign: int | None
    homotopy: Homotopy | None
    degree: int
    null: bool = False

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "sign": self.sign,
            "degree": self.degree,
            "both_null": self.null,
            "witness_entries": None if self.homotopy is None else self.homotopy.size(),
        }


def _reduce(f: ChainMap) -> ChainMap:
    sa, sb = simplify(f.source), simplify(f.target)
    return compose_maps(sb.projection, compose_maps(f, sa.inclusion))


def verify_move(m1: BraidMovie, m2: BraidMovie, ring: ZigzagRing | None = None) -> Verdict:
    """Decide whether ``F(m2)`` is homotopic to ``+F(m1)`` or ``-F(m1)``.

    Both maps are pulled back to the reduced complexes of the boundary words
    through the equivalences returned by ``simplify``, which leaves the
    homotopy classes unchanged.
    """
    if m1.start != m2.start or m1.end != m2.end:
        raise MovieError("movies do not share their boundary words")
    ring = _check_ring(m1.strands, ring)
    F1, F2 = invariant(m1, ring).map, invariant(m2, ring).map
    if F1.degree != F2.degree:
        if not (F1.is_zero() and F2.is_zero()):
            return Verdict("inequivalent", None, None, F2.degree)
    G1, G2 = _reduce(F1), _reduce(F2)
    if G1.is_zero() and not G2.is_zero():
        G1 = ChainMap(G1.source, G1.target, {}, G2.degree)
    if G2.is_zero() and not G1.is_zero():
        G2 = ChainMap(G2.source, G2.target, {}, G1.degree)
    h = is_null_homotopic(G2 - G1)
    if h is not None:
        null = is_null_homotopic(G1) is not None
        return Verdict("equal", 1, h, G1.degree, null)
    h = is_null_homotopic(G2 + G1)
    if h is not None:
        return Verdict("equal", -1, h, G1.degree)
    return Verdict("inequivalent", None, None, G1.degree)


def diagonal_coefficient(f: ChainMap) -> int:
    """Coefficient of ``1`` in the image of the unshifted ``A_n`` summand in degree 0."""
    src, tgt = _diag_index(f.source), _diag_index(f.target)
    img = f.component(0).entry(tgt, src)
    ring = f.ring
    vals = {img.get(e, 0) for e in ring.idempotents}
    if len(vals) != 1:
        raise ValueError("degree-0 part of the A_n component is not a scalar")
    return vals.pop()


def is_positive_nonvanishing(m: BraidMovie, ring: ZigzagRing | None = None) -> tuple[bool, int]:
    """Certificate that ``F(m)`` is not null-homotopic for a positive movie.

    Returns ``(certified, coefficient)``.  A null-homotopic map has zero
    coefficient here, because in internal degree 0 the identity of ``A_n``
    does not factor through any ``P_i (x) _jP{k}``.
    """
    if polarity(m)[1]:
        raise ValueError("movie has negative branch points")
    coeff = diagonal_coefficient(invariant(m, ring).map)
    return coeff in (1, -1), coeff
