"""Braid cobordisms acting on complexes of zigzag bimodules.

The main entry points:

* :func:`braidcat.functor.build_R` turns a braid word into a complex of
  ``A_n``-bimodules, and :func:`braidcat.functor.invariant` turns a braid
  movie into a chain map between such complexes.
* :func:`braidcat.functor.verify_move` compares the maps of two movies that
  differ by a movie move, up to homotopy and sign.
* :mod:`braidcat.decat` recovers the Burau representation from Euler
  characteristics.
* :mod:`braidcat.rouquier` is the polynomial-ring counterpart, checked
  degree by degree.
"""

from .braid import BraidMovie, BraidWord, MovieStep, parse_movie, parse_word
from .decat import burau, k_class
from .functor import build_R, invariant, verify_move
from .zigzag import build_ring

__version__ = "0.1.0"

__all__ = [
    "BraidMovie",
    "BraidWord",
    "MovieStep",
    "parse_movie",
    "parse_word",
    "burau",
    "k_class",
    "build_R",
    "invariant",
    "verify_move",
    "build_ring",
    "__version__",
]
