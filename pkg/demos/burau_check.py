"""Compare the Grothendieck-group class of a braid complex with its Burau matrix."""

import random

from braidcat.braid import BraidWord
from braidcat.decat import burau, k_class
from braidcat.functor import build_R

rng = random.Random(1)
for _ in range(5):
    word = BraidWord(4, tuple(rng.choice((1, -1)) * rng.randint(1, 3) for _ in range(4)))
    same = k_class(build_R(word)) == burau(word)
    print(word.letters, "class equals Burau matrix:", same)

print("Burau(sigma_1) at q = 2:", burau(BraidWord(3, (1,))).at(2))
