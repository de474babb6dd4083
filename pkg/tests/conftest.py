import random
from fractions import Fraction

import pytest

from localring import kernel as K
from localring import order as O


def rand_poly(rng: random.Random, n: int, max_terms: int = 5, max_exp: int = 4,
              max_coef: int = 4, min_order: int = 0) -> K.PrecisionSeries:
    """Random nonzero exact polynomial with small integer coefficients."""
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            e = tuple(rng.randint(0, max_exp) for _ in range(n))
            if sum(e) < min_order:
                continue
            c = rng.choice([c for c in range(-max_coef, max_coef + 1) if c])
            terms[e] = terms.get(e, 0) + c
        f = K.series(n, terms)
        if f.terms:
            return f


def rand_form(rng: random.Random, n: int) -> O.LinearForm:
    choices = [Fraction(1), Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3)]
    return O.LinearForm(tuple(rng.choice(choices) for _ in range(n)))


@pytest.fixture
def rng():
    return random.Random(0)
