# Copyright (c) strata-rings contributors. All rights reserved.
# Licensed under the MIT License.
"""Sparse exact-rational polynomials over a graded alphabet of boundary generators.

Polynomials are sympy ``PolyElement`` values of the alphabet's ring (domain QQ,
graded-lexicographic order). Monomials are exponent tuples in generator order.
"""
from __future__ import annotations

import functools
import itertools
import math
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import attrs
import strata_combinatorics as comb
import strata_utils as utils
from sympy import Symbol
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

Monomial = Tuple[int, ...]
Polynomial = PolyElement

_SERIAL = itertools.count()
_ALPHABETS: Dict[PolyRing, "Alphabet"] = {}


@attrs.frozen(eq=False)
class Alphabet:
    """Ordered generator list together with the polynomial ring it spans."""

    family: str
    ground: comb.GroundSet
    generators: Tuple[comb.GeneratorId, ...]
    ring: PolyRing
    index: Dict[comb.GeneratorId, int]
    weights: Tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.generators)

    def gen(self, g: comb.GeneratorId) -> Polynomial:
        """Returns the ring variable of a generator."""
        if g not in self.index:
            raise utils.AlphabetMismatchError(f"{g.name} is not a generator of this alphabet.")
        return self.ring.gens[self.index[g]]

    def name(self, position: int) -> str:
        return self.generators[position].name


def _build_alphabet(
    family: str, ground: comb.GroundSet, generators: Tuple[comb.GeneratorId, ...]
) -> Alphabet:
    serial = next(_SERIAL)
    symbols = [Symbol(f"g{serial}_{i}") for i in range(len(generators))]
    ring = PolyRing(symbols, QQ, grlex)
    alphabet = Alphabet(
        family=family,
        ground=ground,
        generators=generators,
        ring=ring,
        index={g: i for i, g in enumerate(generators)},
        weights=tuple(g.degree for g in generators),
    )
    _ALPHABETS[ring] = alphabet
    utils.log_to_output(
        f"Alphabet {family} on {ground}: {len(generators)} generators."
    )
    return alphabet


def _as_ground(ground: Union[int, comb.GroundSet]) -> comb.GroundSet:
    return comb.standard_ground(ground) if isinstance(ground, int) else ground


@functools.lru_cache(maxsize=None)
def _alphabet_for(family: str, ground: comb.GroundSet) -> Alphabet:
    return _build_alphabet(family, ground, comb.enumerate_generators(family, ground))


def alphabet_for(family: str, ground: Union[int, comb.GroundSet]) -> Alphabet:
    """Returns the full generator alphabet of a family on a ground set (or on [ℓ])."""
    return _alphabet_for(comb.check_family(family), _as_ground(ground))


@functools.lru_cache(maxsize=None)
def custom_alphabet(
    family: str, ground: comb.GroundSet, generators: Tuple[comb.GeneratorId, ...]
) -> Alphabet:
    """Returns an alphabet over an explicit generator list, kept in the given order."""
    return _build_alphabet(comb.check_family(family), ground, tuple(generators))


def alphabet_of(p: Polynomial) -> Alphabet:
    """Returns the alphabet a polynomial is formed over."""
    try:
        return _ALPHABETS[p.ring]
    except KeyError:
        raise utils.AlphabetMismatchError("Polynomial is not over a known alphabet.") from None


# **********************************************************
# Construction and arithmetic.
# **********************************************************
def rational(numerator: int, denominator: int = 1):
    """Returns an exact rational in lowest terms."""
    return QQ(numerator, denominator)


def polynomial(alphabet: Alphabet, terms: Mapping[Monomial, object]) -> Polynomial:
    """Builds a polynomial from a monomial to coefficient mapping, dropping zeros."""
    for monom in terms:
        if len(monom) != alphabet.size:
            raise utils.AlphabetMismatchError(
                f"Monomial {monom} has {len(monom)} exponents, expected {alphabet.size}."
            )
    return alphabet.ring.from_dict(dict(terms))


def _check_same(p: Polynomial, q: Polynomial) -> None:
    if p.ring is not q.ring:
        raise utils.AlphabetMismatchError("Polynomials are formed over different alphabets.")


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_same(p, q)
    return p + q


def sub(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_same(p, q)
    return p - q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_same(p, q)
    return p * q


def total(alphabet: Alphabet, polys: Iterable[Polynomial]) -> Polynomial:
    """Sums polynomials of one alphabet."""
    result = alphabet.ring.zero
    for p in polys:
        if p.ring is not alphabet.ring:
            raise utils.AlphabetMismatchError("Summand is formed over a different alphabet.")
        result += p
    return result


def monomial_poly(alphabet: Alphabet, monom: Monomial) -> Polynomial:
    return polynomial(alphabet, {monom: 1})


# **********************************************************
# Grading.
# **********************************************************
def weighted_degree(alphabet: Alphabet, monom: Monomial) -> int:
    """Σ exponent·generator-degree."""
    return sum(e * w for e, w in zip(monom, alphabet.weights))


def homogeneous_degree(p: Polynomial) -> Optional[int]:
    """Returns the common degree of all terms, or None for the zero polynomial."""
    alphabet = alphabet_of(p)
    degrees = {weighted_degree(alphabet, monom) for monom in p.keys()}
    if not degrees:
        return None
    if len(degrees) > 1:
        raise utils.InvalidArgumentError(
            f"Polynomial is not homogeneous: degrees {sorted(degrees)}."
        )
    return degrees.pop()


def _weighted_exponents(weights: Tuple[int, ...], degree: int) -> List[Monomial]:
    n = len(weights)
    suffix_gcd = [0] * (n + 1)
    for i in reversed(range(n)):
        suffix_gcd[i] = math.gcd(weights[i], suffix_gcd[i + 1])
    found: List[Monomial] = []
    current = [0] * n

    def _fill(i: int, remaining: int) -> None:
        if remaining == 0:
            found.append(tuple(current))
            return
        if i == n or remaining % suffix_gcd[i]:
            return
        for e in range(remaining // weights[i], -1, -1):
            current[i] = e
            _fill(i + 1, remaining - e * weights[i])
        current[i] = 0

    _fill(0, degree)
    return found


@functools.lru_cache(maxsize=256)
def _monomials_of_degree(weights: Tuple[int, ...], degree: int) -> Tuple[Monomial, ...]:
    return tuple(sorted(_weighted_exponents(weights, degree), key=grlex, reverse=True))


def monomials_of_degree(alphabet: Alphabet, degree: int) -> Tuple[Monomial, ...]:
    """All monomials of weighted degree `degree`, in descending graded-lex order."""
    if degree < 0:
        raise utils.InvalidArgumentError(f"Degree must be non-negative, got {degree}.")
    return _monomials_of_degree(alphabet.weights, degree)


def multiply_monomials(m: Monomial, n: Monomial) -> Monomial:
    return tuple(a + b for a, b in zip(m, n))


# **********************************************************
# Ring homomorphisms.
# **********************************************************
def substitute(
    p: Polynomial, images: Sequence[Polynomial], target: Alphabet
) -> Polynomial:
    """Applies the ring homomorphism sending generator i to images[i]."""
    source = alphabet_of(p)
    if len(images) != source.size:
        raise utils.AlphabetMismatchError(
            f"Expected {source.size} images, got {len(images)}."
        )
    for image in images:
        if image.ring is not target.ring:
            raise utils.AlphabetMismatchError("Image is formed over a different alphabet.")

    powers: Dict[Tuple[int, int], Polynomial] = {}

    def _power(i: int, e: int) -> Polynomial:
        if (i, e) not in powers:
            powers[(i, e)] = images[i] ** e
        return powers[(i, e)]

    result = target.ring.zero
    for monom, coeff in p.items():
        term = target.ring.ground_new(coeff)
        for i, e in enumerate(monom):
            if e and term:
                term = term * _power(i, e)
        result += term
    return result


# **********************************************************
# Text rendering.
# **********************************************************
def _render_rational(value) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def render_monomial(alphabet: Alphabet, monom: Monomial) -> str:
    factors = []
    for i, e in enumerate(monom):
        if e == 1:
            factors.append(alphabet.name(i))
        elif e > 1:
            factors.append(f"{alphabet.name(i)}^{e}")
    return "*".join(factors) if factors else "1"


def render(p: Polynomial) -> str:
    """Renders terms as ``c*name^e*...`` joined by `` + `` and `` - ``."""
    alphabet = alphabet_of(p)
    if not p:
        return "0"
    pieces: List[str] = []
    for monom, coeff in p.terms():
        negative = coeff < 0
        magnitude = -coeff if negative else coeff
        body = render_monomial(alphabet, monom)
        if any(monom):
            if magnitude != 1:
                body = f"{_render_rational(magnitude)}*{body}"
        else:
            body = _render_rational(magnitude)
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)
