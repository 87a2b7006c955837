# Copyright (c) strata-rings contributors. All rights reserved.
# Licensed under the MIT License.
"""
Tests for the graded polynomial layer.
"""
import pytest
import poly_core as pc
import strata_combinatorics as comb
import strata_utils as utils
from hamcrest import assert_that, calling, equal_to, has_length, is_, raises
from sympy import Symbol
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyRing

from .strata_test_client import utils as test_utils


def _random_poly(alphabet, rng, terms=3, max_exp=2):
    result = alphabet.ring.zero
    for _ in range(terms):
        monom = tuple(rng.randint(0, max_exp) for _ in range(alphabet.size))
        coeff = pc.rational(rng.randint(-5, 5), rng.randint(1, 3))
        result += pc.polynomial(alphabet, {monom: coeff})
    return result


def test_alphabet_is_shared_per_family_and_size():
    first = pc.alphabet_for(comb.REAL, 3)
    second = pc.alphabet_for(comb.REAL, comb.standard_ground(3))
    assert_that(first is second, is_(True))
    assert_that(first.size, is_(10))
    assert_that(first.weights, equal_to((1,) * 4 + (2,) * 6))


def test_gen_rejects_foreign_generator():
    alphabet = pc.alphabet_for(comb.COMPLEX, 4)
    foreign = pc.alphabet_for(comb.COMPLEX, 5).generators[0]
    assert_that(
        calling(alphabet.gen).with_args(foreign), raises(utils.AlphabetMismatchError)
    )


@pytest.mark.parametrize(
    "family, ell, degree, expected",
    [
        (comb.REAL, 3, 2, 16),
        (comb.REAL, 3, 1, 4),
        (comb.COMPLEX, 4, 4, 6),
        (comb.COMPLEX, 4, 3, 0),
        (comb.COMPLEX, 5, 0, 1),
    ],
)
def test_monomials_of_degree_counts(family, ell, degree, expected):
    alphabet = pc.alphabet_for(family, ell)
    monomials = pc.monomials_of_degree(alphabet, degree)
    assert_that(monomials, has_length(expected))
    assert_that(
        all(pc.weighted_degree(alphabet, m) == degree for m in monomials), is_(True)
    )
    assert_that(len(set(monomials)), is_(expected))


def test_monomials_of_degree_rejects_negative_degree():
    alphabet = pc.alphabet_for(comb.REAL, 2)
    assert_that(
        calling(pc.monomials_of_degree).with_args(alphabet, -1),
        raises(utils.InvalidArgumentError),
    )


def test_render_uses_generator_names():
    alphabet = pc.alphabet_for(comb.COMPLEX, 4)
    a, b, c = alphabet.ring.gens
    assert_that(
        [g.name for g in alphabet.generators],
        equal_to(["D{12|34}", "D{13|24}", "D{14|23}"]),
    )
    assert_that(pc.render(2 * a * b - c**2), is_("2*D{12|34}*D{13|24} - D{14|23}^2"))
    assert_that(pc.render(pc.rational(1, 2) * a), is_("1/2*D{12|34}"))
    assert_that(pc.render(-a), is_("-D{12|34}"))
    assert_that(pc.render(alphabet.ring.zero), is_("0"))
    assert_that(pc.render(alphabet.ring.one), is_("1"))


def test_homogeneous_degree():
    alphabet = pc.alphabet_for(comb.REAL, 3)
    e = alphabet.ring.gens[0]
    d = alphabet.ring.gens[-1]
    assert_that(pc.homogeneous_degree(e * e + d), is_(2))
    assert_that(pc.homogeneous_degree(alphabet.ring.zero), is_(None))
    assert_that(
        calling(pc.homogeneous_degree).with_args(e + d),
        raises(utils.InvalidArgumentError),
    )


def test_arithmetic_rejects_mixed_alphabets():
    p = pc.alphabet_for(comb.COMPLEX, 4).ring.gens[0]
    q = pc.alphabet_for(comb.COMPLEX, 5).ring.gens[0]
    for operation in (pc.add, pc.sub, pc.mul):
        assert_that(
            calling(operation).with_args(p, q), raises(utils.AlphabetMismatchError)
        )


def test_polynomial_checks_monomial_length():
    alphabet = pc.alphabet_for(comb.COMPLEX, 4)
    assert_that(
        calling(pc.polynomial).with_args(alphabet, {(1, 0): 1}),
        raises(utils.AlphabetMismatchError),
    )


def test_alphabet_of_unknown_ring():
    ring = PolyRing([Symbol("stray")], QQ)
    assert_that(
        calling(pc.alphabet_of).with_args(ring.gens[0]),
        raises(utils.AlphabetMismatchError),
    )


def test_ring_axioms_on_random_polynomials():
    alphabet = pc.alphabet_for(comb.COMPLEX, 5)

    def _triple(rng):
        return tuple(_random_poly(alphabet, rng) for _ in range(3))

    for p, q, r in test_utils.random_cases(20240601, 500, _triple):
        assert_that(pc.add(p, q), equal_to(pc.add(q, p)))
        assert_that(pc.mul(p, q), equal_to(pc.mul(q, p)))
        assert_that(pc.mul(pc.mul(p, q), r), equal_to(pc.mul(p, pc.mul(q, r))))
        assert_that(
            pc.mul(p, pc.add(q, r)), equal_to(pc.add(pc.mul(p, q), pc.mul(p, r)))
        )
        assert_that(pc.sub(p, p), equal_to(alphabet.ring.zero))


def test_substitute_is_a_ring_homomorphism():
    source = pc.alphabet_for(comb.COMPLEX, 4)
    target = pc.alphabet_for(comb.REAL, 3)
    x = target.ring.gens
    images = [x[0] * x[1], x[4] - x[2] ** 2, pc.rational(3, 2) * x[9]]

    def _pair(rng):
        return _random_poly(source, rng), _random_poly(source, rng)

    for p, q in test_utils.random_cases(7, 500, _pair):
        assert_that(
            pc.substitute(p * q, images, target),
            equal_to(pc.substitute(p, images, target) * pc.substitute(q, images, target)),
        )
        assert_that(
            pc.substitute(p + q, images, target),
            equal_to(pc.substitute(p, images, target) + pc.substitute(q, images, target)),
        )


def test_substitute_identity_and_arity():
    alphabet = pc.alphabet_for(comb.REAL, 2)
    p = alphabet.ring.gens[0] ** 2 - 3 * alphabet.ring.gens[1]
    assert_that(pc.substitute(p, alphabet.ring.gens, alphabet), equal_to(p))
    assert_that(
        calling(pc.substitute).with_args(p, alphabet.ring.gens[:1], alphabet),
        raises(utils.AlphabetMismatchError),
    )


def test_total_sums_within_one_alphabet():
    alphabet = pc.alphabet_for(comb.REAL, 2)
    a, b = alphabet.ring.gens
    assert_that(pc.total(alphabet, [a, b, -a]), equal_to(b))
    other = pc.alphabet_for(comb.REAL, 3).ring.gens[0]
    assert_that(
        calling(pc.total).with_args(alphabet, [a, other]),
        raises(utils.AlphabetMismatchError),
    )
