"""The shipped movie-move catalogue."""

import json

import jsonschema
import pytest

from braidcat.braid import MovieError
from braidcat.cli import load_schema
from braidcat.fixtures import (
    Fixture,
    fixture_from_dict,
    fixture_to_dict,
    generate,
    load_fixtures,
    shipped_path,
    write_shipped,
)


def test_shipped_file_is_the_generator_output(tmp_path):
    fresh = write_shipped(tmp_path / "fresh.json")
    assert json.loads(fresh.read_text()) == json.loads(shipped_path().read_text())


def test_shipped_file_matches_schema():
    jsonschema.validate(json.loads(shipped_path().read_text()), load_schema("fixtures"))


def test_every_move_is_represented():
    moves = {f.move for f in generate()}
    assert moves == set(range(1, 16))


def test_fixtures_stay_small():
    for f in generate():
        assert f.movie1.strands <= 4
        assert f.movie1.start == f.movie2.start and f.movie1.end == f.movie2.end


def test_names_are_unique():
    names = [f.name for f in generate()]
    assert len(names) == len(set(names))


def test_displayed_instances_carry_their_signs():
    signs = {f.name: f.expected_sign for f in generate() if f.expected_sign is not None}
    assert signs == {"move12-negative-n3-i1": 1, "move13-nn12-neg": -1}


def test_reversal_drops_the_sign():
    f = next(f for f in generate(False) if f.expected_sign == -1)
    r = f.reversed()
    assert r.expected_sign is None
    assert r.movie1.start == f.movie1.end


def test_dict_round_trip():
    for f in generate():
        g = fixture_from_dict(fixture_to_dict(f))
        assert (g.name, g.move, g.expected_sign) == (f.name, f.move, f.expected_sign)
        assert g.movie1 == f.movie1 and g.movie2 == f.movie2


def test_mismatched_boundaries_rejected():
    a, b = generate(False)[:2]
    with pytest.raises(MovieError):
        Fixture("bad", 1, a.movie1, b.movie1 if b.movie1.end != a.movie1.end else b.movie2)


def test_load_from_directory(tmp_path):
    write_shipped(tmp_path / "a.json")
    (tmp_path / "b.json").write_text(json.dumps([fixture_to_dict(generate(False)[0])]))
    loaded = load_fixtures(tmp_path)
    assert len(loaded) == len(generate()) + 1
    assert len(load_fixtures()) == len(generate())
