# Copyright (c) strata-rings contributors. All rights reserved.
# Licensed under the MIT License.
"""Generators of the boundary relation ideals of the complex and real families."""
from __future__ import annotations

import functools
import hashlib
import itertools
import json
from typing import Any, Dict, List, Sequence, Tuple, Union

import attrs
import poly_core as pc
import strata_combinatorics as comb
import strata_utils as utils

E1A = "e1a"
E1B = "e1b"
E1C = "e1c"
E2 = "e2"
E2A = "e2a"
E2B = "e2b"
TAGS = (E1A, E1B, E1C, E2, E2A, E2B)

Ground = Union[int, comb.GroundSet]
Label = comb.Label


@attrs.frozen(eq=False)
class TaggedGenerator:
    """One ideal generator with the relation family and index data that produced it.

    Product relations carry the generator ids of their factors, linear relations
    carry the marks (a,b,c[,d]) they were instantiated at, and e2a carries nothing.
    """

    tag: str
    indices: Tuple[Any, ...]
    poly: pc.Polynomial

    @property
    def degree(self) -> int:
        return pc.homogeneous_degree(self.poly)


@attrs.frozen(eq=False)
class IdealPresentation:
    family: str
    ground: comb.GroundSet
    alphabet: pc.Alphabet
    generators: Tuple[TaggedGenerator, ...]

    @property
    def polys(self) -> Tuple[pc.Polynomial, ...]:
        return tuple(g.poly for g in self.generators)

    def tagged(self, tag: str) -> Tuple[TaggedGenerator, ...]:
        """Returns the generators of one relation family."""
        return tuple(g for g in self.generators if g.tag == tag)


def _ground_of(family: str, ground: Ground) -> comb.GroundSet:
    if isinstance(ground, int):
        minimum = comb.minimum_size(family)
        if ground < minimum:
            raise utils.InvalidArgumentError(
                f"The {family} ideal needs ℓ ≥ {minimum}, got {ground}."
            )
        return comb.standard_ground(ground)
    if ground.size < comb.minimum_size(family):
        raise utils.InvalidArgumentError(
            f"The {family} ideal needs at least {comb.minimum_size(family)} marks."
        )
    return ground


def _require_marks(ground: comb.GroundSet, marks: Sequence[Label]) -> List[int]:
    return [ground.bit(mark) for mark in marks]


def _product(alphabet: pc.Alphabet, *gens: comb.GeneratorId) -> pc.Polynomial:
    result = alphabet.ring.one
    for g in gens:
        result = result * alphabet.gen(g)
    return result


def _dedupe(found: List[TaggedGenerator]) -> List[TaggedGenerator]:
    seen = set()
    result = []
    for generator in found:
        key = frozenset(generator.poly.items())
        if not key or key in seen:
            continue
        seen.add(key)
        result.append(generator)
    return result


# **********************************************************
# Complex family.
# **********************************************************
def complex_e2_element(
    ground: Ground, a: Label, b: Label, c: Label, d: Label
) -> pc.Polynomial:
    """Σ over classes with a,b | c,d minus Σ over classes with a,c | b,d."""
    ground = _ground_of(comb.COMPLEX, ground)
    if a == b or c == d:
        raise utils.InvalidArgumentError(
            f"Relation needs a ≠ b and c ≠ d, got ({a},{b},{c},{d})."
        )
    bit_a, bit_b, bit_c, bit_d = _require_marks(ground, (a, b, c, d))
    alphabet = pc.alphabet_for(comb.COMPLEX, ground)
    result = alphabet.ring.zero
    for p in comb.bullet_pairs(ground):
        in_a, in_b, in_c, in_d = (bool(bit & p.J) for bit in (bit_a, bit_b, bit_c, bit_d))
        if in_a == in_b and in_c == in_d != in_a:
            result += alphabet.gen(comb.complex_generator(p))
        if in_a == in_c and in_b == in_d != in_a:
            result -= alphabet.gen(comb.complex_generator(p))
    return result


@functools.lru_cache(maxsize=None)
def _complex_ideal(ground: comb.GroundSet) -> IdealPresentation:
    alphabet = pc.alphabet_for(comb.COMPLEX, ground)
    found: List[TaggedGenerator] = []
    for g, h in itertools.combinations(alphabet.generators, 2):
        if comb.notcap_pair(g.pair, h.pair):
            found.append(TaggedGenerator(E1A, (g, h), _product(alphabet, g, h)))
    # Every ordered quadruple of distinct marks; zero and repeated elements drop below.
    for quad in itertools.permutations(ground.labels, 4):
        found.append(TaggedGenerator(E2, quad, complex_e2_element(ground, *quad)))
    generators = tuple(_dedupe(found))
    utils.log_to_output(
        f"Complex ideal on {ground}: {len(generators)} generators."
    )
    return IdealPresentation(comb.COMPLEX, ground, alphabet, generators)


def complex_ideal(ground: Ground) -> IdealPresentation:
    """Returns the generators of ℐ_ℓ on [ℓ] (or on any ground set of at least 3 marks)."""
    return _complex_ideal(_ground_of(comb.COMPLEX, ground))


# **********************************************************
# Real family.
# **********************************************************
def _real_d_sum(alphabet: pc.Alphabet, select) -> pc.Polynomial:
    """Σ ε·D over triples, `select(t)` returning the designated part or None."""
    result = alphabet.ring.zero
    for t in comb.bullet_triples(alphabet.ground):
        designated = select(t)
        if designated is None:
            continue
        other = t.K if designated == t.J else t.J
        sign = comb.epsilon_masks(designated, other)
        result += sign * alphabet.gen(comb.real_d_generator(t))
    return result


def _part_holding(t: comb.TriplePartition, bit: int):
    if bit & t.J:
        return t.J
    if bit & t.K:
        return t.K
    return None


def real_e2b_element(ground: Ground, a: Label, b: Label, c: Label) -> pc.Polynomial:
    """The signed linear relation among D classes attached to distinct marks a, b, c."""
    ground = _ground_of(comb.REAL, ground)
    if len({a, b, c}) != 3:
        raise utils.InvalidArgumentError(f"Relation needs distinct marks, got ({a},{b},{c}).")
    bit_a, bit_b, bit_c = _require_marks(ground, (a, b, c))
    alphabet = pc.alphabet_for(comb.REAL, ground)

    def _ab_c(t):
        part = _part_holding(t, bit_a)
        return part if part is not None and bit_b & part and bit_c & t.I else None

    def _ac_b(t):
        part = _part_holding(t, bit_a)
        return part if part is not None and bit_c & part and bit_b & t.I else None

    def _a_b_c(t):
        part = _part_holding(t, bit_b)
        if not bit_a & t.I or part is None or bit_c & (part | t.I):
            return None
        return part

    return (
        _real_d_sum(alphabet, _ab_c)
        - _real_d_sum(alphabet, _ac_b)
        - _real_d_sum(alphabet, _a_b_c)
    )


def real_e2b2_element(ground: Ground, a: Label, b: Label, c: Label) -> pc.Polynomial:
    """The four-loop relation: D classes with a in the designated part, split by b and c.

    Not an ideal generator; it lies in the ideal and is built for membership checks.
    """
    ground = _ground_of(comb.REAL, ground)
    if a in (b, c):
        raise utils.InvalidArgumentError(f"Relation needs a ≠ b and a ≠ c, got ({a},{b},{c}).")
    bit_a, bit_b, bit_c = _require_marks(ground, (a, b, c))
    alphabet = pc.alphabet_for(comb.REAL, ground)

    def _c_inside(t):
        if bit_c & t.I and not bit_b & t.I:
            return _part_holding(t, bit_a)
        return None

    def _b_inside(t):
        if bit_b & t.I and not bit_c & t.I:
            return _part_holding(t, bit_a)
        return None

    return _real_d_sum(alphabet, _c_inside) - _real_d_sum(alphabet, _b_inside)


def real_e2a_element(ground: Ground) -> pc.Polynomial:
    """Σ of all E classes, each unordered splitting once."""
    ground = _ground_of(comb.REAL, ground)
    alphabet = pc.alphabet_for(comb.REAL, ground)
    return pc.total(
        alphabet,
        (alphabet.gen(comb.real_e_generator(p)) for p in comb.partition_pairs(ground)),
    )


@functools.lru_cache(maxsize=None)
def _real_ideal(ground: comb.GroundSet) -> IdealPresentation:
    alphabet = pc.alphabet_for(comb.REAL, ground)
    e_gens = [g for g in alphabet.generators if g.kind is comb.GeneratorKind.REAL_E]
    d_gens = [g for g in alphabet.generators if g.kind is comb.GeneratorKind.REAL_D]
    found: List[TaggedGenerator] = []
    for g, h in itertools.combinations_with_replacement(e_gens, 2):
        found.append(TaggedGenerator(E1A, (g, h), _product(alphabet, g, h)))
    for g in e_gens:
        for h in d_gens:
            if not comb.preceq(h.triple, g.pair):
                found.append(TaggedGenerator(E1B, (g, h), _product(alphabet, g, h)))
    for g, h in itertools.combinations(d_gens, 2):
        if comb.notcap_triple(g.triple, h.triple) or comb.notcap_triple(h.triple, g.triple):
            found.append(TaggedGenerator(E1C, (g, h), _product(alphabet, g, h)))
    found.append(TaggedGenerator(E2A, (), real_e2a_element(ground)))
    for triple in itertools.permutations(ground.labels, 3):
        found.append(TaggedGenerator(E2B, triple, real_e2b_element(ground, *triple)))
    generators = tuple(_dedupe(found))
    utils.log_to_output(f"Real ideal on {ground}: {len(generators)} generators.")
    return IdealPresentation(comb.REAL, ground, alphabet, generators)


def real_ideal(ground: Ground) -> IdealPresentation:
    """Returns the generators of ℐ_{0,ℓ} on [ℓ] or on any ground set of at least 2 marks."""
    return _real_ideal(_ground_of(comb.REAL, ground))


def ideal_for(family: str, ground: Ground) -> IdealPresentation:
    if comb.check_family(family) == comb.COMPLEX:
        return complex_ideal(ground)
    return real_ideal(ground)


# **********************************************************
# The worked three-mark presentation.
# **********************************************************
WORKED = "worked"


@functools.lru_cache(maxsize=None)
def worked_presentation_m03() -> IdealPresentation:
    """Six-variable presentation x_i = E_{i|rest}, y_i = D_{i;rest|∅} on [3]."""
    ground = comb.standard_ground(3)
    xs, ys = [], []
    for i in (1, 2, 3):
        rest = [j for j in (1, 2, 3) if j != i]
        xs.append(comb.real_e_generator(comb.canonical_pair(ground, [i], rest)))
        ys.append(comb.real_d_generator(comb.canonical_triple(ground, [i], rest, [])))
    alphabet = pc.custom_alphabet(comb.REAL, ground, tuple(xs + ys))
    found: List[TaggedGenerator] = []
    for tag, factors in ((E1A, xs), (E1C, ys)):
        for i, j in itertools.combinations_with_replacement(range(3), 2):
            g, h = factors[i], factors[j]
            found.append(TaggedGenerator(tag, (g, h), _product(alphabet, g, h)))
    for i, j in itertools.permutations(range(3), 2):
        g, h = xs[i], ys[j]
        found.append(TaggedGenerator(E1B, (g, h), _product(alphabet, g, h)))
    x1y1 = _product(alphabet, xs[0], ys[0])
    for i in (1, 2):
        found.append(
            TaggedGenerator(WORKED, (i + 1,), x1y1 - _product(alphabet, xs[i], ys[i]))
        )
    return IdealPresentation(comb.REAL, ground, alphabet, tuple(found))


# **********************************************************
# Provenance, hashing and documents.
# **********************************************************
def rebuild_generator(
    presentation: IdealPresentation, tag: str, indices: Sequence[Any]
) -> pc.Polynomial:
    """Rebuilds a generator from its tag and index data."""
    alphabet = presentation.alphabet
    if tag in (E1A, E1B, E1C):
        return _product(alphabet, *indices)
    if tag == E2:
        return complex_e2_element(presentation.ground, *indices)
    if tag == E2A:
        return real_e2a_element(presentation.ground)
    if tag == E2B:
        return real_e2b_element(presentation.ground, *indices)
    if tag == WORKED:
        (i,) = indices
        x, y = alphabet.ring.gens[0], alphabet.ring.gens[3]
        return x * y - alphabet.ring.gens[i - 1] * alphabet.ring.gens[i + 2]
    raise utils.InvalidArgumentError(f"Unknown relation tag {tag!r}.")


def indices_document(indices: Sequence[Any]) -> List[Any]:
    return [
        index.name if isinstance(index, comb.GeneratorId) else index for index in indices
    ]


def presentation_document(presentation: IdealPresentation) -> Dict[str, Any]:
    """Returns a JSON-ready description of the alphabet and tagged generators."""
    alphabet = presentation.alphabet
    return {
        "family": presentation.family,
        "ell": presentation.ground.size,
        "ground": str(presentation.ground),
        "alphabet": [
            {"name": g.name, "degree": g.degree} for g in alphabet.generators
        ],
        "generators": [
            {
                "tag": g.tag,
                "indices": indices_document(g.indices),
                "degree": g.degree,
                "polynomial": pc.render(g.poly),
            }
            for g in presentation.generators
        ],
    }


def presentation_hash(presentation: IdealPresentation) -> str:
    """Hex sha256 over the rendered alphabet and generators."""
    document = presentation_document(presentation)
    payload = json.dumps(document, sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()
