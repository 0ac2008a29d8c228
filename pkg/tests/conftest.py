import random
from fractions import Fraction

from ncvanish.poly import NcPoly, Word


def random_word(rng: random.Random, d: int, max_len: int) -> Word:
    length = rng.randint(0, max_len)
    return tuple(rng.randint(1, d) for _ in range(length))


def random_poly(
    rng: random.Random, d: int, max_len: int, terms: int = 3, coeff_bound: int = 3
) -> NcPoly:
    """Random polynomial with small integer coefficients; may be zero."""
    out: dict = {}
    for _ in range(terms):
        w = random_word(rng, d, max_len)
        c = rng.randint(-coeff_bound, coeff_bound)
        if c:
            out[w] = out.get(w, Fraction(0)) + c
    return NcPoly(d, out)


def random_nonzero_poly(rng: random.Random, d: int, max_len: int, terms: int = 3) -> NcPoly:
    while True:
        p = random_poly(rng, d, max_len, terms)
        if not p.is_zero():
            return p
