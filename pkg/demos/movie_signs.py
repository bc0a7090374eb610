"""Evaluate the cobordism functor on the two sides of a few movie moves."""

from braidcat.fixtures import load_fixtures
from braidcat.functor import invariant, verify_move

wanted = ("move12-negative-n3-i1", "move13-nn12-neg", "move08-zamolodchikov")
for f in load_fixtures():
    if f.name in wanted:
        v = verify_move(f.movie1, f.movie2)
        deg = invariant(f.movie1).degree
        print(f"{f.name:26s} sign {v.sign:+d}  internal degree {deg}")
