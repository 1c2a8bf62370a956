"""Shared helpers: deterministic random rationals and vectors."""

import random
from fractions import Fraction

import pytest


def random_fraction(rng: random.Random, span: int = 6, max_den: int = 4) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, max_den))


def random_vec(rng: random.Random, n: int, span: int = 6, max_den: int = 4):
    return tuple(random_fraction(rng, span, max_den) for _ in range(n))


@pytest.fixture
def rng():
    return random.Random(20240817)
