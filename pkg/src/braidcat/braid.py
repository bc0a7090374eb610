"""Braid words and braid movies (combinatorial braid cobordisms).

A word on ``strands`` strands is a tuple of nonzero integers: ``+i`` for
sigma_i and ``-i`` for its inverse.  A movie is a start word plus a list of
steps, each of which rewrites the current word at an explicit position:

* ``r1``: insert (``dir="insert"``, with ``gen`` and ``sign``) or cancel
  (``dir="cancel"``) an adjacent pair ``sigma_i^s sigma_i^-s``;
* ``r2``: swap two adjacent letters whose generators are at least 2 apart;
* ``r3``: rewrite ``j^a k^b j^c`` as ``k^c j^b k^a`` with ``|j - k| = 1``;
* ``birth``: insert one letter ``sigma_gen^sign``;
* ``death``: delete one letter, whose sign must match ``sign``.

The end word of a movie is always derived by replaying it.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "BraidWord",
    "MovieStep",
    "BraidMovie",
    "MovieError",
    "parse_word",
    "parse_movie",
    "polarity",
    "compose_movies",
    "parallel",
    "reverse_movie",
    "r3_allowed",
    "random_movie",
]


class MovieError(ValueError):
    """Malformed word, step or movie."""


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple = ()

    def __post_init__(self):
        if self.strands < 2 and self.letters:
            raise MovieError("a nonempty braid word needs at least 2 strands")
        if self.strands < 1:
            raise MovieError("strand count must be positive")
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        for x in self.letters:
            if x == 0 or abs(x) >= self.strands:
                raise MovieError(f"letter {x} out of range for {self.strands} strands")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return f"n={self.strands}; " + " ".join(map(str, self.letters))

    def writhe(self) -> int:
        return sum(1 if x > 0 else -1 for x in self.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-x for x in reversed(self.letters)))

    def __add__(self, other: "BraidWord") -> "BraidWord":
        if other.strands != self.strands:
            raise MovieError("cannot concatenate words on different strand counts")
        return BraidWord(self.strands, self.letters + other.letters)


_WORD_RE = re.compile(r"^\s*n\s*=\s*(\d+)\s*;(.*)$")


def parse_word(text: str) -> BraidWord:
    """Parse ``"n=3; 1 2 -1"``."""
    m = _WORD_RE.match(text)
    if not m:
        raise MovieError(f"malformed word {text!r}: expected 'n=<strands>; <letters>'")
    try:
        letters = tuple(int(tok) for tok in m.group(2).split())
    except ValueError as exc:
        raise MovieError(f"malformed letter in {text!r}") from exc
    return BraidWord(int(m.group(1)), letters)


def r3_allowed(a: int, b: int, c: int) -> bool:
    """Sign patterns for which ``j^a k^b j^c = k^c j^b k^a`` holds in the braid group."""
    return not (a == c and a != b)


_OPS = ("r1", "r2", "r3", "birth", "death")


@dataclass(frozen=True)
class MovieStep:
    op: str
    pos: int
    gen: int | None = None
    sign: int | None = None
    dir: str | None = None
    variant: tuple | None = None

    def to_dict(self) -> dict:
        out = {"op": self.op, "pos": self.pos}
        for k in ("gen", "sign", "dir"):
            v = getattr(self, k)
            if v is not None:
                out[k] = v
        if self.variant is not None:
            out["variant"] = list(self.variant)
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "MovieStep":
        if d.get("op") not in _OPS:
            raise MovieError(f"unknown op {d.get('op')!r}")
        unknown = set(d) - {"op", "pos", "gen", "sign", "dir", "variant"}
        if unknown:
            raise MovieError(f"unknown step fields {sorted(unknown)}")
        variant = d.get("variant")
        return cls(d["op"], int(d["pos"]), d.get("gen"), d.get("sign"), d.get("dir"),
                   None if variant is None else tuple(variant))

    def apply(self, word: BraidWord) -> BraidWord:
        """The word after this step, or :class:`MovieError`."""
        L = list(word.letters)
        p = self.pos
        op = self.op
        if op == "birth" or (op == "r1" and self.dir == "insert"):
            if not 0 <= p <= len(L):
                raise MovieError(f"{op}: position {p} outside 0..{len(L)}")
            if self.gen is None or self.sign not in (1, -1):
                raise MovieError(f"{op}: needs gen and sign +-1")
            x = self.sign * self.gen
            new = [x] if op == "birth" else [x, -x]
            return BraidWord(word.strands, tuple(L[:p] + new + L[p:]))
        if op == "r1":
            if self.dir != "cancel":
                raise MovieError("r1: dir must be 'insert' or 'cancel'")
            if not 0 <= p <= len(L) - 2 or L[p] != -L[p + 1]:
                raise MovieError(f"r1 cancel: no inverse pair at position {p} of {word}")
            if self.gen is not None and abs(L[p]) != self.gen:
                raise MovieError("r1 cancel: generator does not match")
            if self.sign is not None and (L[p] > 0) != (self.sign > 0):
                raise MovieError("r1 cancel: sign does not match")
            return BraidWord(word.strands, tuple(L[:p] + L[p + 2:]))
        if op == "r2":
            if not 0 <= p <= len(L) - 2 or abs(abs(L[p]) - abs(L[p + 1])) < 2:
                raise MovieError(f"r2: letters at {p} of {word} are not distant")
            L[p], L[p + 1] = L[p + 1], L[p]
            return BraidWord(word.strands, tuple(L))
        if op == "r3":
            if not 0 <= p <= len(L) - 3:
                raise MovieError(f"r3: position {p} outside the word {word}")
            x, y, z = L[p:p + 3]
            j, k = abs(x), abs(y)
            sa, sb, sc = (1 if v > 0 else -1 for v in (x, y, z))
            if abs(z) != j or abs(j - k) != 1:
                raise MovieError(f"r3: letters {x} {y} {z} do not match j k j with |j-k|=1")
            if not r3_allowed(sa, sb, sc):
                raise MovieError(f"r3: sign pattern {sa} {sb} {sc} is not a braid relation")
            if self.variant is not None and tuple(self.variant) != (sa, sb, sc):
                raise MovieError(f"r3: variant {self.variant} does not match letters {x} {y} {z}")
            L[p:p + 3] = [sc * k, sb * j, sa * k]
            return BraidWord(word.strands, tuple(L))
        if op == "death":
            if not 0 <= p < len(L):
                raise MovieError(f"death: position {p} outside the word {word}")
            if self.sign not in (1, -1) or (L[p] > 0) != (self.sign > 0):
                raise MovieError(f"death: sign does not match letter {L[p]}")
            if self.gen is not None and abs(L[p]) != self.gen:
                raise MovieError("death: generator does not match")
            return BraidWord(word.strands, tuple(L[:p] + L[p + 1:]))
        raise MovieError(f"unknown op {op!r}")

    def polarity(self) -> int:
        """+1 for a positive branch point, -1 for a negative one, 0 for type I."""
        if self.op == "birth":
            return 1 if self.sign > 0 else -1
        if self.op == "death":
            return -1 if self.sign > 0 else 1
        return 0

    def inverse(self, before: BraidWord) -> "MovieStep":
        """The step undoing this one, given the word it was applied to."""
        if self.op == "birth":
            return MovieStep("death", self.pos, self.gen, self.sign)
        if self.op == "death":
            x = before.letters[self.pos]
            return MovieStep("birth", self.pos, abs(x), 1 if x > 0 else -1)
        if self.op == "r1":
            if self.dir == "insert":
                return MovieStep("r1", self.pos, dir="cancel")
            x = before.letters[self.pos]
            return MovieStep("r1", self.pos, abs(x), 1 if x > 0 else -1, dir="insert")
        if self.op == "r3":
            return MovieStep("r3", self.pos)
        return MovieStep(self.op, self.pos)

    def shifted(self, pos_offset: int, gen_offset: int) -> "MovieStep":
        gen = None if self.gen is None else self.gen + gen_offset
        return MovieStep(self.op, self.pos + pos_offset, gen, self.sign, self.dir, self.variant)


@dataclass(frozen=True)
class BraidMovie:
    start: BraidWord
    steps: tuple = ()
    frames: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        frames = [self.start]
        for k, st in enumerate(self.steps):
            try:
                frames.append(st.apply(frames[-1]))
            except MovieError as exc:
                raise MovieError(f"step {k} ({st.op}): {exc}") from None
        object.__setattr__(self, "frames", tuple(frames))

    @property
    def strands(self) -> int:
        return self.start.strands

    @property
    def end(self) -> BraidWord:
        return self.frames[-1]

    def to_dict(self) -> dict:
        return {"n": self.strands, "start": list(self.start.letters), "steps": [s.to_dict() for s in self.steps]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "BraidMovie":
        try:
            start = BraidWord(int(d["n"]), tuple(d.get("start", ())))
        except KeyError as exc:
            raise MovieError(f"movie is missing field {exc}") from None
        steps = []
        for k, sd in enumerate(d.get("steps", ())):
            try:
                steps.append(MovieStep.from_dict(sd))
            except (MovieError, KeyError, TypeError, ValueError) as exc:
                raise MovieError(f"step {k}: {exc}") from None
        return cls(start, tuple(steps))

    @classmethod
    def identity(cls, word: BraidWord) -> "BraidMovie":
        return cls(word, ())


def parse_movie(text: str) -> BraidMovie:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MovieError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return BraidMovie.from_dict(data)


def polarity(m: BraidMovie) -> tuple[int, int]:
    """``(p_plus, p_minus)``: numbers of positive and negative branch points."""
    signs = [s.polarity() for s in m.steps]
    return signs.count(1), signs.count(-1)


def compose_movies(m1: BraidMovie, m2: BraidMovie) -> BraidMovie:
    """Run ``m1`` then ``m2``."""
    if m1.end != m2.start:
        raise MovieError(f"boundary mismatch: {m1.end} vs {m2.start}")
    return BraidMovie(m1.start, m1.steps + m2.steps)


def parallel(m1: BraidMovie, m2: BraidMovie) -> BraidMovie:
    """Side by side: ``m2`` acts on extra strands to the right of ``m1``'s.

    Generators of ``m2`` are offset by ``m1.strands``, so the result lives on
    ``m1.strands + m2.strands`` strands.  The steps of ``m1`` run first,
    followed by those of ``m2`` placed after ``m1``'s end word.
    """
    n1 = m1.strands
    n = n1 + m2.strands
    s2 = tuple(x + (n1 if x > 0 else -n1) for x in m2.start.letters)
    start = BraidWord(n, m1.start.letters + s2)
    off = len(m1.end)
    steps = m1.steps + tuple(s.shifted(off, n1) for s in m2.steps)
    return BraidMovie(start, steps)


def reverse_movie(m: BraidMovie) -> BraidMovie:
    """The movie read backwards."""
    steps = tuple(st.inverse(before) for st, before in zip(reversed(m.steps), reversed(m.frames[:-1])))
    return BraidMovie(m.end, steps)


def _legal_steps(word: BraidWord, positive_only: bool) -> list[MovieStep]:
    L = word.letters
    gens = range(1, word.strands)
    out = []
    for p in range(len(L) + 1):
        for g in gens:
            out.append(MovieStep("birth", p, g, 1))
            if not positive_only:
                out.append(MovieStep("birth", p, g, -1))
            for s in (1, -1):
                out.append(MovieStep("r1", p, g, s, dir="insert"))
    for p, x in enumerate(L):
        if x < 0 or not positive_only:
            out.append(MovieStep("death", p, sign=1 if x > 0 else -1))
    for p in range(len(L) - 1):
        if L[p] == -L[p + 1]:
            out.append(MovieStep("r1", p, dir="cancel"))
        if abs(abs(L[p]) - abs(L[p + 1])) >= 2:
            out.append(MovieStep("r2", p))
    for p in range(len(L) - 2):
        x, y, z = L[p:p + 3]
        if abs(x) == abs(z) and abs(abs(x) - abs(y)) == 1:
            sg = [1 if v > 0 else -1 for v in (x, y, z)]
            if r3_allowed(*sg):
                out.append(MovieStep("r3", p))
    return out


def random_movie(rng: random.Random, strands: int, steps: int, max_len: int = 4,
                 start: Sequence[int] = (), positive_only: bool = False) -> BraidMovie:
    """A random valid movie whose frames stay at most ``max_len`` letters long."""
    word = BraidWord(strands, tuple(start))
    out = []
    for _ in range(steps):
        cands = []
        for st in _legal_steps(word, positive_only):
            nw = st.apply(word)
            if len(nw) <= max_len:
                cands.append((st, nw))
        if not cands:
            break
        st, word = rng.choice(cands)
        out.append(st)
    return BraidMovie(BraidWord(strands, tuple(start)), tuple(out))
