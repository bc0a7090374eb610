"""Command-line interface: batch verifications that print a report.

Every subcommand produces a report (validated against
``schemas/report.schema.json``) made of named checks.  The exit status is 0
exactly when every check passed, 1 when some check failed and 2 on bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

import jsonschema

from . import __version__
from .braid import BraidMovie, BraidWord, MovieError, parse_movie, parse_word, polarity, random_movie
from .complex import (
    ChainComplex,
    compose_maps,
    identity_map,
    is_homotopy_equivalent,
    is_null_homotopic,
    simplify,
)
from .decat import burau, k_class
from .fixtures import fixture_from_dict
from .functor import build_R, diagonal_coefficient, invariant, verify_move

# bumped whenever a change alters the meaning of cached complexes
CACHE_CONVENTION = "1"
CACHE_ENV = "BRAIDCAT_CACHE_DIR"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# schemas and reports


def load_schema(name: str) -> dict:
    text = (resources.files("braidcat") / "schemas" / f"{name}.schema.json").read_text()
    schema = json.loads(text)
    if name == "fixtures":
        # inline the movie schema so validation never has to resolve files
        movie = load_schema("movie")
        for key in ("$schema", "$id"):
            movie.pop(key)
        movie["properties"]["steps"]["items"] = movie.pop("$defs")["step"]
        items = schema["properties"]["fixtures"]["items"]["properties"]
        items["movie1"] = items["movie2"] = movie
    return schema


def digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()[:16]


class Report:
    def __init__(self, command: str, seed: int | None, timings: bool):
        self.command = command
        self.seed = seed
        self.timings = timings
        self.checks: list[dict] = []

    def add(self, name: str, inputs, ok: bool, sign=None, witness: dict | None = None,
            seconds: float | None = None) -> None:
        rec = {"name": name, "inputs_digest": digest(inputs), "verdict": "pass" if ok else "fail"}
        if sign is not None:
            rec["sign"] = sign
        if witness is not None:
            rec["witness"] = witness
        if self.timings and seconds is not None:
            rec["seconds"] = round(seconds, 4)
        self.checks.append(rec)

    @property
    def passed(self) -> bool:
        return all(c["verdict"] == "pass" for c in self.checks)

    def to_dict(self) -> dict:
        return {"tool": "braidcat", "version": __version__, "command": self.command, "seed": self.seed,
                "passed": self.passed, "checks": self.checks}

    def render(self, as_json: bool) -> str:
        data = self.to_dict()
        jsonschema.validate(data, load_schema("report"))
        if as_json:
            return json.dumps(data, indent=2, sort_keys=True)
        lines = []
        for c in self.checks:
            extra = "" if c.get("sign") is None else f"  sign {c['sign']:+d}"
            if "seconds" in c:
                extra += f"  ({c['seconds']:.2f}s)"
            lines.append(f"{c['verdict'].upper():4}  {c['name']}{extra}")
        good = sum(c["verdict"] == "pass" for c in self.checks)
        lines.append(f"{good}/{len(self.checks)} checks passed")
        return "\n".join(lines)


def _run(func, items: list, jobs: int) -> list:
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(func, items))
    return [func(x) for x in items]


# ---------------------------------------------------------------------------
# the on-disk cache of reduced complexes


def reduced_complex(w: BraidWord) -> ChainComplex:
    """``simplify(R(w))``, read from or written to ``$BRAIDCAT_CACHE_DIR`` when set."""
    root = os.environ.get(CACHE_ENV)
    path = None
    if root:
        path = Path(root) / f"v{CACHE_CONVENTION}-{digest(str(w))}.json"
        if path.exists():
            try:
                return ChainComplex.from_dict(json.loads(path.read_text()))
            except (ValueError, KeyError):
                pass
    c = simplify(build_R(w)).complex
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(c.to_json())
        tmp.replace(path)
    return c


def _shape(c: ChainComplex) -> dict:
    return {str(t): [str(s) for s in c.terms[t]] for t in c.degrees}


# ---------------------------------------------------------------------------
# verify-braid-relations


def _equivalence_job(pair: tuple) -> dict:
    """Find and round-trip an equivalence ``R(a) ~ R(b)``."""
    a, b = (BraidWord(s, tuple(x)) for s, x in pair)
    t0 = time.perf_counter()
    Ra, Rb = build_R(a), build_R(b)
    res = is_homotopy_equivalent(Ra, Rb)
    out = {"a": str(a), "b": str(b), "found": res is not None, "round_trip": False}
    if res is not None:
        F, G = res
        back = is_null_homotopic(compose_maps(G, F) - identity_map(Ra)) is not None
        forth = is_null_homotopic(compose_maps(F, G) - identity_map(Rb)) is not None
        out["round_trip"] = back and forth
    out["reduced"] = _shape(reduced_complex(a))
    out["seconds"] = time.perf_counter() - t0
    return out


def _relation_pairs(n: int) -> list[tuple[str, tuple, tuple]]:
    strands = n + 1
    out = []
    for i in range(1, n + 1):
        out.append((f"inverse R{i} R{i}'", (i, -i), ()))
        out.append((f"inverse R{i}' R{i}", (-i, i), ()))
    for i in range(1, n):
        out.append((f"braid R{i} R{i + 1} R{i}", (i, i + 1, i), (i + 1, i, i + 1)))
    for i in range(1, n + 1):
        for j in range(i + 2, n + 1):
            out.append((f"commute R{i} R{j}", (i, j), (j, i)))
    return [(name, (strands, a), (strands, b)) for name, a, b in out]


def _random_pairs(n: int, max_len: int, samples: int, rng: random.Random) -> list[tuple[str, tuple, tuple]]:
    strands = n + 1
    rels = []
    for i in range(1, n + 1):
        rels.append(((i, -i), ()))
        rels.append(((-i, i), ()))
    for i in range(1, n):
        for s in (1, -1):
            rels.append(((s * i, s * (i + 1), s * i), (s * (i + 1), s * i, s * (i + 1))))
    for i in range(1, n + 1):
        for j in range(i + 2, n + 1):
            rels.append(((i, j), (j, i)))
    rels = [(u, v) for u, v in rels if max(len(u), len(v)) <= max_len]
    if not rels:
        raise UsageError(f"--max-word-len {max_len} is shorter than every relation")
    out = []
    for k in range(samples):
        u, v = rels[rng.randrange(len(rels))]
        room = max_len - max(len(u), len(v))
        g = [rng.choice((1, -1)) * rng.randint(1, n) for _ in range(rng.randint(0, room))]
        p = rng.randint(0, len(g))
        a, b = tuple(g[:p]) + u + tuple(g[p:]), tuple(g[:p]) + v + tuple(g[p:])
        out.append((f"random pair {k}", (strands, a), (strands, b)))
    return out


def cmd_verify_braid_relations(args, report: Report) -> None:
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    rng = random.Random(args.seed)
    cases = _relation_pairs(args.n)
    if args.max_word_len:
        cases += _random_pairs(args.n, args.max_word_len, args.samples, rng)
    results = _run(_equivalence_job, [(a, b) for _, a, b in cases], args.jobs)
    for (name, a, b), res in zip(cases, results):
        secs = res.pop("seconds")
        report.add(name, [a, b], res["found"] and res["round_trip"], witness=res, seconds=secs)


# ---------------------------------------------------------------------------
# invariant


def _load_movie(path: str) -> BraidMovie:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read movie file: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    try:
        jsonschema.validate(data, load_schema("movie"))
    except jsonschema.ValidationError as exc:
        where = "/".join(map(str, exc.absolute_path)) or "<root>"
        raise UsageError(f"{path}: {where}: {exc.message}") from None
    try:
        return parse_movie(text)
    except MovieError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _serialize_map(f) -> dict:
    out = {}
    for t in sorted(f.components):
        m = f.components[t]
        out[str(t)] = [[r, s, c] for (r, s), c in sorted(m.coordinates().items())]
    return out


def cmd_invariant(args, report: Report) -> None:
    m = _load_movie(args.movie)
    t0 = time.perf_counter()
    inv = invariant(m)
    pp, pm = polarity(m)
    f = inv.map
    witness = {
        "start": str(m.start),
        "end": str(m.end),
        "degree": f.degree,
        "p_plus": pp,
        "p_minus": pm,
        "components": _serialize_map(f),
    }
    report.add("chain map", m.to_dict(), f.is_chain_map(), witness=witness, seconds=time.perf_counter() - t0)
    report.add("internal degree is 2 p_minus", m.to_dict(), f.is_zero() or f.degree == 2 * pm,
               witness={"degree": f.degree, "p_minus": pm})
    if pm == 0:
        coeff = diagonal_coefficient(f)
        report.add("nonzero in the homotopy category", m.to_dict(), coeff in (1, -1),
                   witness={"diagonal_coefficient": coeff})
    else:
        h = is_null_homotopic(f)
        report.add("null-homotopy search", m.to_dict(), True,
                   witness={"null_homotopic": h is not None, "homotopy_entries": None if h is None else h.size()})
    if args.apply_to_module is not None:
        j = args.apply_to_module
        n = m.strands - 1
        if not 1 <= j <= n:
            raise UsageError(f"--apply-to-module must be between 1 and {n}")
        # classes of C (x) P_j for source and target, against the Burau columns
        cols = {}
        ok = True
        for side, c, w in (("source", f.source, m.start), ("target", f.target, m.end)):
            col = [k_class(c)[i, j - 1] for i in range(n)]
            ok = ok and col == [burau(w)[i, j - 1] for i in range(n)]
            cols[side] = [x.pairs() for x in col]
        report.add(f"action on P_{j} matches Burau", {"movie": m.to_dict(), "module": j}, ok, witness=cols)


# ---------------------------------------------------------------------------
# movie-moves


def _fixture_job(d: dict) -> dict:
    fx = fixture_from_dict(d)
    t0 = time.perf_counter()
    v = verify_move(fx.movie1, fx.movie2)
    out = v.to_dict()
    out.update(move=fx.move, start=str(fx.movie1.start), end=str(fx.movie1.end), expected_sign=fx.expected_sign,
               seconds=time.perf_counter() - t0)
    return out


def _fixture_files(path: Path) -> list[Path]:
    if path.is_dir():
        files = sorted(path.glob("*.json"))
        if not files:
            raise UsageError(f"no .json fixture files in {path}")
        return files
    if not path.exists():
        raise UsageError(f"no such fixture path: {path}")
    return [path]


def cmd_movie_moves(args, report: Report) -> None:
    from .fixtures import shipped_path

    path = Path(args.fixtures) if args.fixtures else shipped_path()
    schema = load_schema("fixtures")
    items = []
    for f in _fixture_files(path):
        try:
            data = json.loads(f.read_text())
            jsonschema.validate(data, schema)
        except (json.JSONDecodeError, jsonschema.ValidationError) as exc:
            raise UsageError(f"{f}: {getattr(exc, 'message', exc)}") from None
        items += data["fixtures"]
    try:
        for d in items:
            fixture_from_dict(d)
    except MovieError as exc:
        raise UsageError(str(exc)) from None
    results = _run(_fixture_job, items, args.jobs)
    for d, res in zip(items, results):
        secs = res.pop("seconds")
        ok = res["status"] == "equal" and res["expected_sign"] in (None, res["sign"])
        report.add(d["name"], d, ok, sign=res["sign"], witness=res, seconds=secs)


# ---------------------------------------------------------------------------
# burau


def cmd_burau(args, report: Report) -> None:
    try:
        w = parse_word(args.word)
    except (ValueError, MovieError) as exc:
        raise UsageError(f"bad word {args.word!r}: {exc}") from None
    B = burau(w)
    witness = {"word": str(w), "matrix": [[x.pairs() for x in row] for row in B.rows]}
    ok = True
    if args.check_k_class:
        ok = k_class(build_R(w)) == B
        witness["k_class_agrees"] = ok
    report.add("burau matrix", str(w), ok, witness=witness)


# ---------------------------------------------------------------------------
# rouquier


def cmd_rouquier(args, report: Report) -> None:
    from . import rouquier as rq

    D = args.degree
    if D < 2:
        raise UsageError("--degree must be at least 2")
    t0 = time.perf_counter()
    for cert in rq.verify_rouquier_relations(D):
        report.add(cert.name, [cert.name, D], cert.ok, witness=cert.to_dict(), seconds=time.perf_counter() - t0)
        t0 = time.perf_counter()
    R = rq.poly_ring(3)
    for x in (1, -1, 2, -2):
        got = rq.k_class_on_A(3, x, D)
        want = {d: -len(R.monomials(d - (1 if x > 0 else -1))) for d in got}
        report.add(f"Euler characteristic of R{abs(x)}{'' if x > 0 else chr(39)} is -q^{1 if x > 0 else -1} [A]",
                   [x, D], got == want, witness={"by_degree": {str(d): v for d, v in got.items()}})
    U = rq.r_unit(3)
    for i in (1, 2):
        Rp = rq.build_rouquier(3, i)[1]
        zero = not rq.chain_map_basis(U, Rp)
        shifted = rq.chain_map_basis(U, rq.r_shift(Rp, 1))
        null = all(rq.is_null_homotopic(f) for f in shifted)
        report.add(f"maps from A to R{i}' vanish up to homotopy", [i], zero and null,
                   witness={"chain_maps_degree_0": 0 if zero else "nonzero", "shifted_maps": len(shifted),
                            "all_null_homotopic": null})
    rng = random.Random(args.seed)
    for k in range(args.movies):
        m = random_movie(rng, 3, 4, max_len=3, positive_only=(k % 2 == 0))
        f = rq.semitrivial_invariant(m)
        pp, pm = polarity(m)
        witness = {"start": str(m.start), "end": str(m.end), "p_plus": pp, "p_minus": pm, "zero": f.is_zero()}
        ok = f.is_zero() == (pm > 0)
        if pm == 0:
            witness["a_coefficient"] = rq.a_coefficient(f)
            witness["null_homotopic"] = rq.is_null_homotopic(f)
            ok = ok and f.is_chain_map()
        report.add(f"semi-trivial invariant of random movie {k}", m.to_dict(), ok, witness=witness)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for independent checks")
    common.add_argument("--timings", action="store_true", help="record wall-clock seconds per check")
    common.add_argument("--seed", type=int, default=0, help="seed for randomly generated cases")

    p = argparse.ArgumentParser(prog="braidcat", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"braidcat {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify-braid-relations", parents=[common],
                       help="equivalences R(g) ~ R(h) for words related by a braid relation")
    s.add_argument("--n", type=int, required=True, help="rank of the zigzag ring (n+1 strands)")
    s.add_argument("--max-word-len", type=int, default=0, help="also test random pairs up to this length")
    s.add_argument("--samples", type=int, default=5, help="number of random pairs")
    s.set_defaults(func=cmd_verify_braid_relations)

    s = sub.add_parser("invariant", parents=[common], help="the chain map of a braid movie")
    s.add_argument("--movie", required=True, help="movie JSON file")
    s.add_argument("--apply-to-module", type=int, metavar="J",
                   help="also report the classes of source and target applied to P_J")
    s.set_defaults(func=cmd_invariant)

    s = sub.add_parser("movie-moves", parents=[common], help="check movie-move fixture pairs")
    s.add_argument("--fixtures", help="fixture file or directory (default: the shipped set)")
    s.set_defaults(func=cmd_movie_moves)

    s = sub.add_parser("burau", parents=[common], help="Burau matrix of a braid word")
    s.add_argument("--word", required=True, help='braid word, e.g. "n=3; 1 -2"')
    s.add_argument("--check-k-class", action="store_true",
                   help="also compare with the Euler characteristic of R(word)")
    s.set_defaults(func=cmd_burau)

    s = sub.add_parser("rouquier", parents=[common], help="degreewise Rouquier-complex certificates")
    s.add_argument("--degree", type=int, default=6, help="internal degree bound")
    s.add_argument("--movies", type=int, default=6, help="random movies for the semi-trivial invariant")
    s.set_defaults(func=cmd_rouquier)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        print("braidcat: --jobs must be positive", file=sys.stderr)
        return 2
    report = Report(args.command, args.seed, args.timings)
    try:
        args.func(args, report)
    except UsageError as exc:
        print(f"braidcat: {exc}", file=sys.stderr)
        return 2
    print(report.render(args.json))
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
