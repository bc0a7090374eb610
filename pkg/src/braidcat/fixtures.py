"""The shipped catalogue of movie-move pairs.

Each fixture is a pair of movies with the same start and end word.  Moves
11-15 follow their textual descriptions (a distant birth, the birth that a
Reidemeister move can absorb, dragging a branch point across a crossing, the
same with an idle extra letter, and locality).  Moves 1-10 have no branch
points and are encoded as small Reidemeister loops; their labels are only
approximate, since for invertible movies every pair is a valid relation.

``generate()`` is deterministic and ``data/movie_moves.json`` is its output.
"""

from __future__ import annotations

import json
from collections import deque
from importlib import resources
from pathlib import Path

from .braid import BraidMovie, BraidWord, MovieError, MovieStep, reverse_movie

__all__ = [
    "Fixture",
    "generate",
    "load_fixtures",
    "shipped_path",
    "fixture_to_dict",
    "fixture_from_dict",
    "write_shipped",
]


class Fixture:
    __slots__ = ("name", "move", "movie1", "movie2", "expected_sign")

    def __init__(self, name: str, move: int, movie1: BraidMovie, movie2: BraidMovie,
                 expected_sign: int | None = None):
        if movie1.start != movie2.start or movie1.end != movie2.end:
            raise MovieError(f"fixture {name}: movies do not share boundary words")
        self.name = name
        self.move = move
        self.movie1 = movie1
        self.movie2 = movie2
        self.expected_sign = expected_sign

    def reversed(self) -> "Fixture":
        """Both movies read backwards.  The sign is not inherited: it can flip."""
        return Fixture(self.name + "-rev", self.move, reverse_movie(self.movie1), reverse_movie(self.movie2))

    def __repr__(self) -> str:
        return f"Fixture({self.name!r}, move {self.move}, {self.movie1.start} -> {self.movie1.end})"


def fixture_to_dict(f: Fixture) -> dict:
    out = {"name": f.name, "move": f.move, "movie1": f.movie1.to_dict(), "movie2": f.movie2.to_dict()}
    if f.expected_sign is not None:
        out["expected_sign"] = f.expected_sign
    return out


def fixture_from_dict(d: dict) -> Fixture:
    return Fixture(d["name"], int(d["move"]), BraidMovie.from_dict(d["movie1"]),
                   BraidMovie.from_dict(d["movie2"]), d.get("expected_sign"))


def _m(n: int, start, *steps) -> BraidMovie:
    out = []
    for st in steps:
        op, pos, *rest = st
        kw = {}
        if op in ("birth", "death"):
            kw = {"gen": rest[0], "sign": rest[1]}
        elif op == "r1":
            kw = {"dir": rest[0]}
            if rest[0] == "insert":
                kw.update(gen=rest[1], sign=rest[2])
        out.append(MovieStep(op, pos, **kw))
    return BraidMovie(BraidWord(n, tuple(start)), tuple(out))


def _prefixed(m: BraidMovie, letters: tuple) -> BraidMovie:
    """Same movie with idle letters in front of every frame."""
    start = BraidWord(m.strands, tuple(letters) + m.start.letters)
    return BraidMovie(start, tuple(s.shifted(len(letters), 0) for s in m.steps))


def _r3_neighbours(word: tuple):
    for p in range(len(word) - 1):
        a, b = word[p], word[p + 1]
        if abs(a - b) >= 2:
            yield MovieStep("r2", p), word[:p] + (b, a) + word[p + 2:]
    for p in range(len(word) - 2):
        a, b, c = word[p:p + 3]
        if a == c and abs(a - b) == 1:
            yield MovieStep("r3", p), word[:p] + (b, a, b) + word[p + 3:]


def _paths(start: tuple, goal: tuple, reverse_order: bool) -> list[MovieStep]:
    prev = {start: None}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        if w == goal:
            break
        nbrs = list(_r3_neighbours(w))
        if reverse_order:
            nbrs.reverse()
        for st, v in nbrs:
            if v not in prev:
                prev[v] = (w, st)
                queue.append(v)
    steps = []
    w = goal
    while prev[w] is not None:
        w, st = prev[w]
        steps.append(st)
    return steps[::-1]


def _zamolodchikov() -> tuple[BraidMovie, BraidMovie]:
    """Two routes between reduced words of the longest element on 4 strands."""
    start, goal = (1, 2, 1, 3, 2, 1), (3, 2, 3, 1, 2, 3)
    a = _paths(start, goal, False)
    b = _paths(start, goal, True)
    w = BraidWord(4, start)
    return BraidMovie(w, tuple(a)), BraidMovie(w, tuple(b))


def _move13(n: int, top: tuple, s: int) -> tuple[BraidMovie, BraidMovie]:
    """Birth of ``j^s`` after ``top = (x, y)`` versus birth of ``k^s`` before it plus R3."""
    x, y = top
    j, k = abs(x), abs(y)
    m1 = _m(n, top, ("birth", 2, j, s))
    m2 = _m(n, top, ("birth", 0, k, s), ("r3", 0))
    return m1, m2


def generate(include_reversed: bool = True) -> list[Fixture]:
    out: list[Fixture] = []

    def add(name, move, m1, m2, expected=None):
        out.append(Fixture(name, move, m1, m2, expected))

    # moves 1-10: Reidemeister loops
    for i, other in ((1, 2), (2, 1)):
        add(f"move01-insert-cancel-{i}", 1,
            _m(3, (other,), ("r1", 0, "insert", i, 1), ("r1", 0, "cancel")), _m(3, (other,)))
    add("move02-r3-there-and-back", 2, _m(3, (1, 2, 1), ("r3", 0), ("r3", 0)), _m(3, (1, 2, 1)))
    add("move02-r3-there-and-back-neg", 2, _m(3, (-2, -1, -2), ("r3", 0), ("r3", 0)), _m(3, (-2, -1, -2)))
    add("move03-r2-twice", 3, _m(4, (1, 3), ("r2", 0), ("r2", 0)), _m(4, (1, 3)))
    add("move03-r2-twice-mixed", 3, _m(4, (-3, 1), ("r2", 0), ("r2", 0)), _m(4, (-3, 1)))
    for i in (1, 2):
        add(f"move04-two-cancellations-{i}", 4, _m(3, (i, -i, i), ("r1", 0, "cancel")),
            _m(3, (i, -i, i), ("r1", 1, "cancel")))
    add("move05-slide-then-cancel", 5, _m(4, (3, 1, -1), ("r1", 1, "cancel")),
        _m(4, (3, 1, -1), ("r2", 0), ("r2", 1), ("r1", 0, "cancel")))
    add("move06-r3-mixed-then-cancel", 6, _m(3, (1, 2, 1, -1), ("r1", 2, "cancel")),
        _m(3, (1, 2, 1, -1), ("r3", 0), ("r3", 1), ("r1", 0, "cancel")))
    add("move07-disjoint-orders", 7, _m(3, (1, -1, 1, 2, 1), ("r1", 0, "cancel"), ("r3", 0)),
        _m(3, (1, -1, 1, 2, 1), ("r3", 2), ("r1", 0, "cancel")))
    z1, z2 = _zamolodchikov()
    add("move08-zamolodchikov", 8, z1, z2)
    add("move09-pair-through-r3", 9,
        _m(3, (1, 2), ("r1", 2, "insert", 1, 1), ("r3", 0), ("r3", 1), ("r1", 0, "cancel")), _m(3, (1, 2)))
    add("move10-mixed-r3-loop", 10, _m(3, (-1, 2, 1), ("r3", 0)),
        _m(3, (-1, 2, 1), ("r3", 0), ("r3", 0), ("r3", 0)))

    # move 11: a branch point passes a distant crossing
    for s in (1, -1):
        for first in (1, -1):
            add(f"move11-distant-birth-{'p' if s > 0 else 'n'}{'p' if first > 0 else 'n'}", 11,
                _m(4, (first,), ("birth", 1, 3, s), ("r2", 0)), _m(4, (first,), ("birth", 0, 3, s)))

    # move 12: a birth absorbed by a Reidemeister move
    for n, i in ((3, 1), (3, 2), (4, 2)):
        expected = 1 if (n, i) == (3, 1) else None
        add(f"move12-negative-n{n}-i{i}", 12,
            _m(n, (), ("r1", 0, "insert", i, -1), ("death", 1, i, 1)), _m(n, (), ("birth", 0, i, -1)), expected)
        add(f"move12-positive-n{n}-i{i}", 12,
            _m(n, (), ("r1", 0, "insert", i, 1), ("death", 1, i, -1)), _m(n, (), ("birth", 0, i, 1)))

    # move 13: dragging a branch point across a crossing
    tops = {"nn12": (-1, -2), "pp12": (1, 2), "pp21": (2, 1), "nn21": (-2, -1)}
    for label, top in tops.items():
        for s in (-1, 1):
            m1, m2 = _move13(3, top, s)
            expected = -1 if (label == "nn12" and s == -1) else None
            add(f"move13-{label}-{'neg' if s < 0 else 'pos'}", 13, m1, m2, expected)
    m1, m2 = _move13(4, (-2, -3), -1)
    add("move13-nn23-neg-n4", 13, m1, m2)

    # move 14: move 13 next to an idle letter
    for label, top, idle in (("nn12", (-1, -2), (-1,)), ("pp12", (1, 2), (1,)), ("nn12-far", (-1, -2), (3,))):
        n = 4 if 3 in idle else 3
        for s in (-1, 1):
            m1, m2 = _move13(n, top, s)
            add(f"move14-{label}-{'neg' if s < 0 else 'pos'}", 14, _prefixed(m1, idle), _prefixed(m2, idle))

    # move 15: locality
    for s in (1, -1):
        tag = "p" if s > 0 else "n"
        add(f"move15-birth-and-r3-{tag}", 15,
            _m(4, (1, 2, 1), ("birth", 0, 3, s), ("r3", 1)), _m(4, (1, 2, 1), ("r3", 0), ("birth", 0, 3, s)))
        add(f"move15-cancel-and-death-{tag}", 15,
            _m(3, (1, -1, 2 * s), ("r1", 0, "cancel"), ("death", 0, 2, s)),
            _m(3, (1, -1, 2 * s), ("death", 2, 2, s), ("r1", 0, "cancel")))

    if include_reversed:
        out += [f.reversed() for f in out if f.move >= 11]
    return out


def shipped_path() -> Path:
    return Path(str(resources.files("braidcat") / "data" / "movie_moves.json"))


def load_fixtures(path: str | Path | None = None) -> list[Fixture]:
    """Fixtures from a JSON file, a directory of JSON files, or the shipped set."""
    path = Path(path) if path is not None else shipped_path()
    files = sorted(path.glob("*.json")) if path.is_dir() else [path]
    out = []
    for f in files:
        data = json.loads(f.read_text())
        items = data["fixtures"] if isinstance(data, dict) else data
        out += [fixture_from_dict(d) for d in items]
    return out


def write_shipped(path: str | Path | None = None) -> Path:
    path = Path(path) if path is not None else shipped_path()
    body = {"format": 1, "fixtures": [fixture_to_dict(f) for f in generate()]}
    path.write_text(json.dumps(body, indent=1) + "\n")
    return path
