"""Reduce the letter complexes of a braid relation and exhibit the equivalence."""

from braidcat.braid import BraidWord
from braidcat.complex import compose_maps, identity_map, is_homotopy_equivalent, is_null_homotopic, simplify
from braidcat.functor import build_R

left, right = BraidWord(3, (1, 2, 1)), BraidWord(3, (2, 1, 2))
c1, c2 = build_R(left), build_R(right)
print("R(1 2 1) before reduction:", c1.term_multiset())
print("after reduction:          ", simplify(c1).complex.term_multiset())

F, G = is_homotopy_equivalent(c1, c2)
h = is_null_homotopic(compose_maps(G, F) - identity_map(c1))
print("G F - id null-homotopic, witness verified:", h.verify())

inverse = simplify(build_R(BraidWord(3, (1, -1)))).complex
print("R1 R1' reduces to:", inverse.term_multiset())
