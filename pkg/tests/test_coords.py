"""First-kind ↔ second-kind coordinate conversion and lattice closure.

Oracle key: frozen literals are [DERIVED] by hand from the class-2 closed
form exp(a e1)exp(b e2)exp(c e3) = exp(a e1 + b e2 + (c + ab/2) e3).
"""

import random
from fractions import Fraction

import pytest

from nilflat import catalog
from nilflat.algebra import NilAlgebra, basis_vec, vec, vec_scale, vec_zero
from nilflat.bch import bch_product
from nilflat.coords import (
    MalcevWord,
    first_to_second,
    lattice_closed,
    second_to_first,
    word_multiply,
)
from nilflat.errors import BasisNotAdapted
from conftest import random_vec

H3 = catalog.heisenberg3()
N4 = catalog.n4()


# [DERIVED] h3 frozen conversions.
def test_h3_frozen():
    word = first_to_second(H3, vec([1, 1, 0]))
    assert word.exponents == vec([1, 1, Fraction(-1, 2)])
    v = second_to_first(H3, MalcevWord(vec([1, 1, 1])))
    assert v == vec([1, 1, Fraction(3, 2)])


# [TRIVIAL] zero maps to zero both ways.
def test_zero():
    for algebra in (H3, N4, catalog.point()):
        n = algebra.dim
        assert first_to_second(algebra, vec_zero(n)).exponents == vec_zero(n)
        assert second_to_first(algebra, MalcevWord(vec_zero(n))) == vec_zero(n)


# [DERIVED] round-trip identity on random rational points, both directions.
def test_round_trip(rng):
    for algebra in (H3, N4, catalog.filiform(5), catalog.heisenberg5(),
                    catalog.h3_times_z()):
        n = algebra.dim
        for _ in range(20):
            v = random_vec(rng, n)
            assert second_to_first(algebra, first_to_second(algebra, v)) == v
            word = MalcevWord(random_vec(rng, n))
            assert first_to_second(algebra, second_to_first(algebra, word)) == word


# [DERIVED] central elements have identical coordinates of both kinds.
def test_central_coords_agree():
    for a in (Fraction(3), Fraction(-5, 7)):
        v = vec_scale(a, basis_vec(3, 2))
        assert first_to_second(H3, v).exponents == v


# [TRIVIAL] conversion demands an adapted basis.
def test_requires_adapted():
    bad = NilAlgebra.from_brackets(3, 2, {(1, 2): {1: 1}})
    with pytest.raises(BasisNotAdapted):
        first_to_second(bad, vec_zero(3))
    with pytest.raises(BasisNotAdapted):
        second_to_first(bad, MalcevWord(vec_zero(3)))


# [DERIVED] closure verdicts for class <= 2: integer structure constants
# close; the half-integral Heisenberg fails with a 1/2-denominator exponent
# at the descending product e2·e1.
def test_lattice_closed():
    for algebra in (H3, catalog.heisenberg5(), catalog.h3_times_z(),
                    catalog.abelian(3), catalog.point()):
        assert lattice_closed(algebra).ok
    report = lattice_closed(catalog.heisenberg3_scaled())
    assert not report.ok
    assert report.witness == (2, 1)
    assert any(a.denominator == 2 for a in report.defect)


# [DERIVED] class >= 3 reality check: collection denominators appear even
# with integer structure constants — exp(e2)exp(e1) in the filiform algebra
# has top second-kind exponent 1/2 (verified independently against a matrix
# representation), so the certificate reports exactly that product.
def test_lattice_closed_filiform_denominators():
    v = bch_product(N4, basis_vec(4, 1), basis_vec(4, 0))
    word = first_to_second(N4, v)
    assert word.exponents == vec([1, 1, -1, Fraction(1, 2)])
    report = lattice_closed(N4)
    assert not report.ok
    assert report.witness == (2, 1)


# [DERIVED] fuzz: products of random generator words stay integral for
# class <= 2 (closure beyond the pairwise certificate).
def test_lattice_fuzz():
    rng = random.Random(7)
    for algebra in (H3, catalog.heisenberg5(), catalog.h3_times_z()):
        n = algebra.dim
        for _ in range(25):
            v = vec_zero(n)
            for _ in range(rng.randint(1, 6)):
                g = vec_scale(rng.choice([1, -1]), basis_vec(n, rng.randrange(n)))
                v = bch_product(algebra, v, g)
            assert first_to_second(algebra, v).is_lattice


# [DERIVED] group law in second-kind coordinates agrees with BCH.
def test_word_multiply(rng):
    for _ in range(10):
        a = MalcevWord(random_vec(rng, 3))
        b = MalcevWord(random_vec(rng, 3))
        va, vb = second_to_first(H3, a), second_to_first(H3, b)
        prod = word_multiply(H3, a, b)
        assert second_to_first(H3, prod) == bch_product(H3, va, vb)
