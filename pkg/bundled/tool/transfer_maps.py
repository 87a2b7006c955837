# Copyright (c) strata-rings contributors. All rights reserved.
# Licensed under the MIT License.
"""Transfer homomorphisms from ℓ to ℓ+1 marks and machine checks of their properties.

Tensor elements are lists of (first factor, second factor) polynomial pairs.
"""
from __future__ import annotations

import functools
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import attrs
import boundary_ideals as bi
import cattrs
import graded_dimension as gd
import poly_core as pc
import strata_combinatorics as comb
import strata_utils as utils
from cattrs.gen import make_dict_unstructure_fn, override

Tensor = Sequence[Tuple[pc.Polynomial, pc.Polynomial]]


@attrs.frozen
class LiftedGenerator:
    """Image of one generator under F as a signed sum of generators at ℓ+1."""

    source: comb.GeneratorId
    images: Tuple[Tuple[comb.GeneratorId, int], ...]


# **********************************************************
# Label plumbing between ground sets.
# **********************************************************
def _standard(ell: int) -> comb.GroundSet:
    return comb.standard_ground(ell)


def _subground(ground: comb.GroundSet, mask: int) -> comb.GroundSet:
    """{nd} ⊔ the labels of `mask`."""
    return comb.node_ground(ground.subset(mask))


def _node_part_first(sub: comb.GroundSet, first: int, second: int) -> Tuple[int, int]:
    node = sub.bit(comb.NODE)
    return (first, second) if first & node else (second, first)


def _carry(sub: comb.GroundSet, mask: int, ground: comb.GroundSet) -> int:
    """Moves a subset without the node mark onto `ground`."""
    return ground.mask(label for label in sub.subset(mask) if label != comb.NODE)


def _check_ring(p: pc.Polynomial, alphabet: pc.Alphabet) -> None:
    if p.ring is not alphabet.ring:
        raise utils.AlphabetMismatchError(
            f"Expected a polynomial over the {alphabet.family} alphabet on {alphabet.ground}."
        )


def _check_level(family: str, ell: int) -> None:
    gd.check_ell(comb.check_family(family), ell)


# **********************************************************
# Lifted classes at ℓ+1.
# **********************************************************
def complex_tilde(pair: comb.PartitionPair) -> Dict[str, comb.GeneratorId]:
    """D̃⁺ = D_{J∪{ℓ+1},K} and D̃⁰ = D_{J,K∪{ℓ+1}} for a canonical pair on [ℓ]."""
    target = _standard(pair.ground.size + 1)
    J = target.mask(pair.ground.subset(pair.J))
    K = target.mask(pair.ground.subset(pair.K))
    new = target.bit(target.size)
    return {
        "+": comb.complex_generator(comb.canonical_pair(target, J | new, K)),
        "0": comb.complex_generator(comb.canonical_pair(target, J, K | new)),
    }


def real_e_tilde(pair: comb.PartitionPair) -> Dict[str, comb.GeneratorId]:
    """ℝẼ⁺, ℝẼ⁰ = ℝD_{{ℓ+1};J,K} and ℝẼ⁻ for a canonical pair on [ℓ]."""
    target = _standard(pair.ground.size + 1)
    J = target.mask(pair.ground.subset(pair.J))
    K = target.mask(pair.ground.subset(pair.K))
    new = target.bit(target.size)
    return {
        "+": comb.real_e_generator(comb.canonical_pair(target, J | new, K)),
        "0": comb.real_d_generator(comb.canonical_triple(target, new, J, K)),
        "-": comb.real_e_generator(comb.canonical_pair(target, J, K | new)),
    }


def real_d_tilde(triple: comb.TriplePartition) -> Dict[str, comb.GeneratorId]:
    """ℝD̃⁺, ℝD̃⁰ and ℝD̃⁻; the first two swap on whether 1 lies in I or J."""
    ground = triple.ground
    target = _standard(ground.size + 1)
    I, J, K = (target.mask(ground.subset(m)) for m in (triple.I, triple.J, triple.K))
    new = target.bit(target.size)
    grown_inner = comb.real_d_generator(comb.canonical_triple(target, I | new, J, K))
    grown_part = comb.real_d_generator(comb.canonical_triple(target, I, J | new, K))
    if triple.I & ground.bit(1):
        plus, zero = grown_inner, grown_part
    else:
        plus, zero = grown_part, grown_inner
    return {
        "+": plus,
        "0": zero,
        "-": comb.real_d_generator(comb.canonical_triple(target, I, J, K | new)),
    }


def leading_class(family: str, ell: int) -> comb.GeneratorId:
    """D_{{1,ℓ+1},[ℓ]−{1}} (complex) or ℝD_{[ℓ]−{1};{1,ℓ+1},∅} (real)."""
    _check_level(family, ell)
    target = _standard(ell + 1)
    first = target.mask([1, ell + 1])
    rest = target.mask(range(2, ell + 1))
    if family == comb.COMPLEX:
        return comb.complex_generator(comb.canonical_pair(target, first, rest))
    return comb.real_d_generator(comb.canonical_triple(target, rest, first, 0))


def lift_generator(family: str, g: comb.GeneratorId) -> LiftedGenerator:
    """Returns F on one generator."""
    comb.check_family(family)
    if (family == comb.COMPLEX) != (g.kind is comb.GeneratorKind.COMPLEX_D):
        raise utils.InvalidArgumentError(f"{g.name} is not a {family} generator.")
    if g.kind is comb.GeneratorKind.COMPLEX_D:
        tilde = complex_tilde(g.pair)
        names = ("+", "0")
    elif g.kind is comb.GeneratorKind.REAL_E:
        tilde = real_e_tilde(g.pair)
        names = ("+", "-")
    else:
        tilde = real_d_tilde(g.triple)
        names = ("+", "0", "-")
    return LiftedGenerator(g, tuple((tilde[name], 1) for name in names))


# **********************************************************
# F and the subcurve maps.
# **********************************************************
@functools.lru_cache(maxsize=None)
def _f_images(family: str, ell: int) -> Tuple[pc.Polynomial, ...]:
    source = pc.alphabet_for(family, ell)
    target = pc.alphabet_for(family, ell + 1)
    images = []
    for g in source.generators:
        lifted = lift_generator(family, g)
        images.append(
            pc.total(target, (sign * target.gen(h) for h, sign in lifted.images))
        )
    return tuple(images)


def f_map(family: str, ell: int, p: pc.Polynomial) -> pc.Polynomial:
    """The ring homomorphism F from the ℓ-alphabet to the (ℓ+1)-alphabet."""
    _check_level(family, ell)
    _check_ring(p, pc.alphabet_for(family, ell))
    return pc.substitute(p, _f_images(family, ell), pc.alphabet_for(family, ell + 1))


def _check_pair(ell: int, pair: comb.PartitionPair) -> None:
    if pair.ground != _standard(ell):
        raise utils.InvalidArgumentError(f"{pair} is not a splitting of [{ell}].")


@functools.lru_cache(maxsize=None)
def _complex_side(
    pair: comb.PartitionPair, side: int
) -> Tuple[pc.Alphabet, Tuple[pc.Polynomial, ...]]:
    ground = pair.ground
    other = ground.full ^ side
    sub = _subground(ground, side)
    source = pc.alphabet_for(comb.COMPLEX, sub)
    target = pc.alphabet_for(comb.COMPLEX, ground)
    images = []
    for g in source.generators:
        with_node, without = _node_part_first(sub, g.J, g.K)
        grown = _carry(sub, with_node, ground) | other
        images.append(
            target.gen(
                comb.complex_generator(
                    comb.canonical_pair(ground, grown, _carry(sub, without, ground))
                )
            )
        )
    return source, tuple(images)


def fjk_complex(
    ell: int, pair: comb.PartitionPair, side: comb.Subset, q: pc.Polynomial
) -> pc.Polynomial:
    """Maps a polynomial on {nd} ⊔ side into the ℓ-alphabet, nd standing for the other part."""
    _check_pair(ell, pair)
    side = pair.ground.mask(side)
    if side not in (pair.J, pair.K):
        raise utils.InvalidArgumentError(f"{pair.ground.subset(side)} is not a part of {pair}.")
    source, images = _complex_side(pair, side)
    _check_ring(q, source)
    return pc.substitute(q, images, pc.alphabet_for(comb.COMPLEX, ell))


def fjk_complex_tensor(ell: int, pair: comb.PartitionPair, tensor: Tensor) -> pc.Polynomial:
    """F_{J,K} on Σ a⊗b with a over {nd}⊔J and b over {nd}⊔K."""
    target = pc.alphabet_for(comb.COMPLEX, ell)
    return pc.total(
        target,
        (
            fjk_complex(ell, pair, pair.J, a) * fjk_complex(ell, pair, pair.K, b)
            for a, b in tensor
        ),
    )


def _signed_d(
    ground: comb.GroundSet, pair_J: int, pair_K: int, inner: int, without: int
) -> Tuple[int, comb.GeneratorId]:
    """(−1)^{|K|} ε_{J∩B,K∩B} and ℝD_{inner;J∩B,K∩B} for the node-free part B."""
    sign = -1 if comb.popcount(pair_K) % 2 else 1
    sign *= comb.epsilon_masks(pair_J & without, pair_K & without)
    triple = comb.canonical_triple(ground, inner, pair_J & without, pair_K & without)
    return sign, comb.real_d_generator(triple)


@functools.lru_cache(maxsize=None)
def _real_pair_images(
    pair: comb.PartitionPair,
) -> Tuple[pc.Alphabet, Tuple[pc.Polynomial, ...]]:
    ground = pair.ground
    sub = _subground(ground, ground.full)
    source = pc.alphabet_for(comb.COMPLEX, sub)
    target = pc.alphabet_for(comb.REAL, ground)
    images = []
    for g in source.generators:
        with_node, without = _node_part_first(sub, g.J, g.K)
        sign, d = _signed_d(
            ground,
            pair.J,
            pair.K,
            _carry(sub, with_node, ground),
            _carry(sub, without, ground),
        )
        images.append(sign * target.gen(d))
    return source, tuple(images)


def fjk_real(ell: int, pair: comb.PartitionPair, q: pc.Polynomial) -> pc.Polynomial:
    """Signed map from the complex alphabet on {nd} ⊔ [ℓ] into the real ℓ-alphabet."""
    _check_pair(ell, pair)
    source, images = _real_pair_images(pair)
    _check_ring(q, source)
    return pc.substitute(q, images, pc.alphabet_for(comb.REAL, ell))


@functools.lru_cache(maxsize=None)
def _real_first_factor(
    triple: comb.TriplePartition,
) -> Tuple[pc.Alphabet, Tuple[pc.Polynomial, ...]]:
    ground = triple.ground
    J, K = triple.J, triple.K
    sub = _subground(ground, triple.I)
    source = pc.alphabet_for(comb.REAL, sub)
    target = pc.alphabet_for(comb.REAL, ground)
    node = sub.bit(comb.NODE)
    images = []
    for g in source.generators:
        if g.kind is comb.GeneratorKind.REAL_E:
            with_node, without = _node_part_first(sub, g.J, g.K)
            image = comb.real_e_generator(
                comb.canonical_pair(
                    ground,
                    J | _carry(sub, with_node, ground),
                    K | _carry(sub, without, ground),
                )
            )
        elif g.I & node:
            image = comb.real_d_generator(
                comb.canonical_triple(
                    ground,
                    _carry(sub, g.I, ground) | J | K,
                    _carry(sub, g.J, ground),
                    _carry(sub, g.K, ground),
                )
            )
        else:
            with_node, without = _node_part_first(sub, g.J, g.K)
            image = comb.real_d_generator(
                comb.canonical_triple(
                    ground,
                    _carry(sub, g.I, ground),
                    J | _carry(sub, with_node, ground),
                    K | _carry(sub, without, ground),
                )
            )
        images.append(target.gen(image))
    return source, tuple(images)


@functools.lru_cache(maxsize=None)
def _real_second_factor(
    triple: comb.TriplePartition,
) -> Tuple[pc.Alphabet, Tuple[pc.Polynomial, ...]]:
    ground = triple.ground
    sub = _subground(ground, triple.J | triple.K)
    source = pc.alphabet_for(comb.COMPLEX, sub)
    target = pc.alphabet_for(comb.REAL, ground)
    images = []
    for g in source.generators:
        with_node, without = _node_part_first(sub, g.J, g.K)
        sign, d = _signed_d(
            ground,
            triple.J,
            triple.K,
            triple.I | _carry(sub, with_node, ground),
            _carry(sub, without, ground),
        )
        images.append(sign * target.gen(d))
    return source, tuple(images)


def _check_triple(ell: int, triple: comb.TriplePartition) -> None:
    if triple.ground != _standard(ell):
        raise utils.InvalidArgumentError(f"{triple} is not a splitting of [{ell}].")


def fijk_real(ell: int, triple: comb.TriplePartition, tensor: Tensor) -> pc.Polynomial:
    """F_{I;J,K} on Σ a⊗b, a real over {nd}⊔I and b complex over {nd}⊔(J∪K)."""
    _check_triple(ell, triple)
    first, first_images = _real_first_factor(triple)
    second, second_images = _real_second_factor(triple)
    target = pc.alphabet_for(comb.REAL, ell)
    result = target.ring.zero
    for a, b in tensor:
        _check_ring(a, first)
        _check_ring(b, second)
        result += pc.substitute(a, first_images, target) * pc.substitute(
            b, second_images, target
        )
    return result


# **********************************************************
# Φ.
# **********************************************************
@attrs.frozen(eq=False)
class PhiInput:
    """One element of the domain of Φ.

    Complex: `pair_terms` maps pairs of 𝒫_•(ℓ) to tensors. Real: `pair_terms` maps pairs
    of 𝒫(ℓ) to (κ, κ′) polynomials over {nd}⊔[ℓ] and `triple_terms` maps triples to
    (κ, κ′) tensors.
    """

    family: str
    ell: int
    kappa0: Optional[pc.Polynomial] = None
    kappa: Optional[pc.Polynomial] = None
    pair_terms: Dict[comb.PartitionPair, object] = attrs.Factory(dict)
    triple_terms: Dict[comb.TriplePartition, Tuple[Tensor, Tensor]] = attrs.Factory(dict)


def phi(value: PhiInput) -> pc.Polynomial:
    """Image of a domain element under Φ in the (ℓ+1)-alphabet."""
    family, ell = value.family, value.ell
    _check_level(family, ell)
    target = pc.alphabet_for(family, ell + 1)
    result = target.ring.zero
    if value.kappa0 is not None:
        result += target.gen(leading_class(family, ell)) * f_map(family, ell, value.kappa0)
    if value.kappa is not None:
        result += f_map(family, ell, value.kappa)

    if family == comb.COMPLEX:
        if value.triple_terms:
            raise utils.InvalidArgumentError("The complex domain has no triple summands.")
        for pair, tensor in value.pair_terms.items():
            lifted = f_map(family, ell, fjk_complex_tensor(ell, pair, tensor))
            result += target.gen(complex_tilde(pair)["0"]) * lifted
        return result

    for pair, (kappa, kappa_prime) in value.pair_terms.items():
        tilde = real_e_tilde(pair)
        result += target.gen(tilde["0"]) * f_map(family, ell, fjk_real(ell, pair, kappa))
        result += target.gen(tilde["-"]) * f_map(
            family, ell, fjk_real(ell, pair, kappa_prime)
        )
    for triple, (kappa, kappa_prime) in value.triple_terms.items():
        tilde = real_d_tilde(triple)
        result += target.gen(tilde["0"]) * f_map(family, ell, fijk_real(ell, triple, kappa))
        result += target.gen(tilde["-"]) * f_map(
            family, ell, fijk_real(ell, triple, kappa_prime)
        )
    return result


# **********************************************************
# Verification reports.
# **********************************************************
@attrs.frozen
class CheckResult:
    check: str
    indices: Tuple[str, ...]
    degree: Optional[int]
    passed: bool
    witness: Dict[str, int] = attrs.Factory(dict)


@attrs.frozen
class WelldefReport:
    family: str
    ell: int
    degree_bound: int
    checks: Tuple[CheckResult, ...]
    complete: bool = True

    @property
    def passed(self) -> bool:
        return self.complete and all(c.passed for c in self.checks)

    @property
    def failures(self) -> Tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.passed)


REPORT_CONVERTER = cattrs.Converter()
REPORT_CONVERTER.register_unstructure_hook(
    CheckResult,
    make_dict_unstructure_fn(
        CheckResult, REPORT_CONVERTER, passed=override(rename="pass")
    ),
)


def report_document(report: WelldefReport) -> Dict[str, object]:
    """JSON-ready form of a report; check results carry a `pass` key."""
    document = REPORT_CONVERTER.unstructure(report)
    document["passed"] = report.passed
    return document


def _membership(
    check: str,
    indices: Iterable[str],
    target: bi.IdealPresentation,
    p: pc.Polynomial,
) -> CheckResult:
    degree = pc.homogeneous_degree(p)
    if degree is None:
        return CheckResult(check, tuple(indices), None, True, {"terms": 0})
    step = gd.eliminator(target, degree)
    residue = step.reduce(step.vector_of(p))
    return CheckResult(
        check,
        tuple(indices),
        degree,
        not residue,
        {"terms": len(p), "residue_terms": len(residue), "columns": len(step.columns)},
    )


def _monomials_up_to(alphabet: pc.Alphabet, bound: int) -> Iterator[pc.Polynomial]:
    for degree in range(bound + 1):
        for monom in pc.monomials_of_degree(alphabet, degree):
            yield pc.monomial_poly(alphabet, monom)


def f_ideal_transport(family: str, ell: int) -> List[CheckResult]:
    """Checks F(g) ∈ ideal at ℓ+1 for every ideal generator g at ℓ."""
    _check_level(family, ell)
    target = bi.ideal_for(family, ell + 1)
    return [
        _membership(
            "f-ideal",
            _generator_label(g),
            target,
            f_map(family, ell, g.poly),
        )
        for g in bi.ideal_for(family, ell).generators
    ]


def _generator_label(g: bi.TaggedGenerator) -> Tuple[str, ...]:
    return (g.tag, *map(str, bi.indices_document(g.indices)))


def _welldef_checks(family: str, ell: int, bound: int) -> Iterator[CheckResult]:
    target = bi.ideal_for(family, ell + 1)
    leading = pc.alphabet_for(family, ell + 1).gen(leading_class(family, ell))
    domain = pc.alphabet_for(family, ell)
    for g in bi.ideal_for(family, ell).generators:
        for m in _monomials_up_to(domain, bound):
            image = f_map(family, ell, g.poly * m)
            yield _membership("kappa", _generator_label(g), target, image)
            yield _membership("kappa0", _generator_label(g), target, leading * image)

    target_alphabet = pc.alphabet_for(family, ell + 1)
    ground = _standard(ell)
    if family == comb.COMPLEX:
        for pair in comb.bullet_pairs(ground):
            tilde = target_alphabet.gen(complex_tilde(pair)["0"])
            first = pc.alphabet_for(comb.COMPLEX, _subground(ground, pair.J))
            second = pc.alphabet_for(comb.COMPLEX, _subground(ground, pair.K))
            for ideal_side, other, place in ((first, second, 0), (second, first, 1)):
                for g in bi.complex_ideal(ideal_side.ground).generators:
                    for m in _monomials_up_to(other, bound):
                        factors = (g.poly, m) if place == 0 else (m, g.poly)
                        image = f_map(family, ell, fjk_complex_tensor(ell, pair, [factors]))
                        yield _membership(
                            f"pair{'-left' if place == 0 else '-right'}",
                            (str(pair), *_generator_label(g)),
                            target,
                            tilde * image,
                        )
        return

    subcurve = pc.alphabet_for(comb.COMPLEX, _subground(ground, ground.full))
    for pair in comb.partition_pairs(ground):
        tilde = real_e_tilde(pair)
        for g in bi.complex_ideal(subcurve.ground).generators:
            for m in _monomials_up_to(subcurve, bound):
                image = f_map(family, ell, fjk_real(ell, pair, g.poly * m))
                for which in ("0", "-"):
                    yield _membership(
                        f"pair-{which}",
                        (str(pair), *_generator_label(g)),
                        target,
                        target_alphabet.gen(tilde[which]) * image,
                    )
    for triple in comb.bullet_triples(ground):
        tilde = real_d_tilde(triple)
        first = pc.alphabet_for(comb.REAL, _subground(ground, triple.I))
        second = pc.alphabet_for(comb.COMPLEX, _subground(ground, triple.J | triple.K))
        sides = (
            (bi.real_ideal(first.ground), second, 0),
            (bi.complex_ideal(second.ground), first, 1),
        )
        for ideal, other, place in sides:
            for g in ideal.generators:
                for m in _monomials_up_to(other, bound):
                    factors = (g.poly, m) if place == 0 else (m, g.poly)
                    image = f_map(family, ell, fijk_real(ell, triple, [factors]))
                    for which in ("0", "-"):
                        yield _membership(
                            f"triple-{'left' if place == 0 else 'right'}-{which}",
                            (str(triple), *_generator_label(g)),
                            target,
                            target_alphabet.gen(tilde[which]) * image,
                        )


def verify_phi_well_defined(
    family: str, ell: int, degree_bound: Optional[int] = None
) -> WelldefReport:
    """Checks that Φ sends every relation of every domain summand into the target ideal."""
    _check_level(family, ell)
    if degree_bound is None:
        degree_bound = utils.get_settings()["verifyDegreeBound"] or 0
    checks: List[CheckResult] = []
    complete = True
    try:
        for result in _welldef_checks(family, ell, degree_bound):
            if not result.passed:
                utils.log_warning(f"Well-definedness check failed: {result}")
            checks.append(result)
    except utils.ResourceLimitError as err:
        utils.log_error(f"Well-definedness report is incomplete: {err}")
        complete = False
    return WelldefReport(family, ell, degree_bound, tuple(checks), complete)


def _domain_images(family: str, ell: int, degree: int) -> Iterator[pc.Polynomial]:
    """Φ-images of the monomial spanning set of the domain in one degree."""
    domain = pc.alphabet_for(family, ell)
    target = pc.alphabet_for(family, ell + 1)
    ground = _standard(ell)
    for monom in pc.monomials_of_degree(domain, degree):
        yield f_map(family, ell, pc.monomial_poly(domain, monom))
    if degree >= 2:
        leading = target.gen(leading_class(family, ell))
        for monom in pc.monomials_of_degree(domain, degree - 2):
            yield leading * f_map(family, ell, pc.monomial_poly(domain, monom))

    def _tensor_monomials(first: pc.Alphabet, second: pc.Alphabet, total_degree: int):
        for split in range(total_degree + 1):
            for a in pc.monomials_of_degree(first, split):
                for b in pc.monomials_of_degree(second, total_degree - split):
                    yield pc.monomial_poly(first, a), pc.monomial_poly(second, b)

    if family == comb.COMPLEX:
        if degree < 2:
            return
        for pair in comb.bullet_pairs(ground):
            tilde = target.gen(complex_tilde(pair)["0"])
            first = pc.alphabet_for(comb.COMPLEX, _subground(ground, pair.J))
            second = pc.alphabet_for(comb.COMPLEX, _subground(ground, pair.K))
            for factors in _tensor_monomials(first, second, degree - 2):
                yield tilde * f_map(family, ell, fjk_complex_tensor(ell, pair, [factors]))
        return

    subcurve = pc.alphabet_for(comb.COMPLEX, _subground(ground, ground.full))
    for pair in comb.partition_pairs(ground):
        tilde = real_e_tilde(pair)
        for which, shift in (("0", 2), ("-", 1)):
            if degree < shift:
                continue
            for monom in pc.monomials_of_degree(subcurve, degree - shift):
                q = pc.monomial_poly(subcurve, monom)
                yield target.gen(tilde[which]) * f_map(family, ell, fjk_real(ell, pair, q))
    if degree < 2:
        return
    for triple in comb.bullet_triples(ground):
        tilde = real_d_tilde(triple)
        first = pc.alphabet_for(comb.REAL, _subground(ground, triple.I))
        second = pc.alphabet_for(comb.COMPLEX, _subground(ground, triple.J | triple.K))
        for factors in _tensor_monomials(first, second, degree - 2):
            image = f_map(family, ell, fijk_real(ell, triple, [factors]))
            for which in ("0", "-"):
                yield target.gen(tilde[which]) * image


def verify_phi_surjective(family: str, ell: int, degree: int) -> bool:
    """True iff Φ-images and the target ideal span the whole degree slice at ℓ+1."""
    _check_level(family, ell)
    top = gd.top_degree(family, ell + 1)
    if not 0 <= degree <= top:
        raise utils.InvalidArgumentError(
            f"Degree {degree} is outside 0..{top} at ℓ+1 = {ell + 1}."
        )
    step = gd.eliminator(bi.ideal_for(family, ell + 1), degree).copy()
    full = len(step.columns)
    rank = step.rank()
    for image in _domain_images(family, ell, degree):
        if rank == full:
            break
        if image and step.extend(step.vector_of(image)):
            rank += 1
    utils.log_to_output(
        f"Surjectivity {family} ℓ={ell} degree {degree}: rank {rank} of {full}."
    )
    return rank == full


# **********************************************************
# Dimension bookkeeping and the transport lemma.
# **********************************************************
def _convolved(first: Sequence[int], second: Sequence[int], total: int) -> int:
    def _at(dims, p):
        return dims[p] if 0 <= p < len(dims) else 0

    return sum(_at(first, q) * _at(second, total - q) for q in range(total + 1))


def phi_domain_dims(
    family: str, ell: int, dims_of: Callable[[str, int], Sequence[int]]
) -> Tuple[int, ...]:
    """Per-degree dimension of the domain of Φ, with summands shifted by their multipliers.

    `dims_of(family, size)` supplies the Betti numbers of each factor ring.
    """
    _check_level(family, ell)
    ground = _standard(ell)
    base = dims_of(family, ell)
    result = []
    for p in range(gd.top_degree(family, ell + 1) + 1):
        value = _convolved(base, (1,), p) + _convolved(base, (1,), p - 2)
        if family == comb.COMPLEX:
            for pair in comb.bullet_pairs(ground):
                value += _convolved(
                    dims_of(comb.COMPLEX, comb.popcount(pair.J) + 1),
                    dims_of(comb.COMPLEX, comb.popcount(pair.K) + 1),
                    p - 2,
                )
        else:
            whole = dims_of(comb.COMPLEX, ell + 1)
            pairs = len(comb.partition_pairs(ground))
            value += pairs * (
                _convolved(whole, (1,), p - 2) + _convolved(whole, (1,), p - 1)
            )
            for triple in comb.bullet_triples(ground):
                value += 2 * _convolved(
                    dims_of(comb.REAL, comb.popcount(triple.I) + 1),
                    dims_of(comb.COMPLEX, comb.popcount(triple.J | triple.K) + 1),
                    p - 2,
                )
        result.append(value)
    return tuple(result)


def _complex_lemma(ell: int, crossing: bool) -> Iterator[CheckResult]:
    ground = _standard(ell)
    domain = pc.alphabet_for(comb.COMPLEX, ell)
    target = pc.alphabet_for(comb.COMPLEX, ell + 1)
    ideal = bi.complex_ideal(ell + 1) if crossing else None
    for pair in comb.bullet_pairs(ground):
        tilde = target.gen(complex_tilde(pair)["0"])
        for other in comb.bullet_pairs(ground):
            if other == pair:
                continue
            if comb.notcap_pair(pair, other):
                if not crossing:
                    continue
                image = tilde * f_map(
                    comb.COMPLEX, ell, domain.gen(comb.complex_generator(other))
                )
                yield _membership("lemma-crossing", (str(pair), str(other)), ideal, image)
                continue
            inner, outer = next(
                (small, big)
                for small in (other.J, other.K)
                for big in (pair.J, pair.K)
                if comb.is_subset(small, big) and small != big
            )
            sub = _subground(ground, outer)
            small = sub.mask(ground.subset(inner))
            subclass = comb.complex_generator(
                comb.canonical_pair(sub, small, sub.full ^ small)
            )
            q = pc.alphabet_for(comb.COMPLEX, sub).gen(subclass)
            rest = pc.alphabet_for(comb.COMPLEX, _subground(ground, ground.full ^ outer))
            factors = (q, rest.ring.one) if outer == pair.J else (rest.ring.one, q)
            image = fjk_complex_tensor(ell, pair, [factors])
            expected = domain.gen(comb.complex_generator(other))
            yield CheckResult(
                "lemma-nested",
                (str(pair), str(other)),
                2,
                image == expected,
            )


LIFT_SUPERSCRIPTS = ("0", "-")


def _oriented(mask: int, first: int, second: int) -> Tuple[int, int]:
    """Orders two parts so that the first one contains `mask`."""
    return (first, second) if comb.is_subset(mask, first) else (second, first)


def _pair_nested(ell: int, pair: comb.PartitionPair, g: comb.GeneratorId) -> CheckResult:
    """Nested D case: ℝD_{I′;J′,K′} as ±F_{J,K} of a subcurve divisor."""
    ground = pair.ground
    subcurve_ground = _subground(ground, ground.full)
    subcurve = pc.alphabet_for(comb.COMPLEX, subcurve_ground)
    # The part of {J′,K′} inside J is designated.
    split = g.J | g.K
    inner = subcurve_ground.mask(ground.subset(g.I)) | subcurve_ground.bit(comb.NODE)
    subclass = comb.complex_generator(
        comb.canonical_pair(subcurve_ground, inner, subcurve_ground.full ^ inner)
    )
    sign = -1 if comb.popcount(pair.K) % 2 else 1
    sign *= comb.epsilon_masks(pair.J & split, pair.K & split)
    image = sign * fjk_real(ell, pair, subcurve.gen(subclass))
    domain = pc.alphabet_for(comb.REAL, ell)
    return CheckResult("lemma-nested", (str(pair), g.name), g.degree, image == domain.gen(g))


def _triple_preimage(
    triple: comb.TriplePartition, g: comb.GeneratorId
) -> Tuple[int, pc.Polynomial, pc.Polynomial]:
    """(sign, a, b) with g = sign · F_{I;J,K}(a ⊗ b) for a class nested with the triple."""
    ground = triple.ground
    first_ground = _subground(ground, triple.I)
    second_ground = _subground(ground, triple.J | triple.K)
    first = pc.alphabet_for(comb.REAL, first_ground)
    second = pc.alphabet_for(comb.COMPLEX, second_ground)
    first_node = first_ground.bit(comb.NODE)

    def on_first(mask: int) -> int:
        return first_ground.mask(ground.subset(mask))

    if g.kind is comb.GeneratorKind.REAL_E:
        outer, other = _oriented(triple.J, g.J, g.K)
        a = comb.real_e_generator(
            comb.canonical_pair(
                first_ground,
                first_node | on_first(triple.I & outer),
                on_first(triple.I & other),
            )
        )
        return 1, first.gen(a), second.ring.one

    nested = g.triple
    if comb.preceq(nested, triple):
        # {J′,K′} inside {J,K}: the class comes from the complex factor.
        split = nested.J | nested.K
        inner = second_ground.bit(comb.NODE) | second_ground.mask(
            ground.subset(nested.I & ~triple.I)
        )
        b = comb.complex_generator(
            comb.canonical_pair(second_ground, inner, second_ground.full ^ inner)
        )
        sign = -1 if comb.popcount(triple.K) % 2 else 1
        sign *= comb.epsilon_masks(triple.J & split, triple.K & split)
        return sign, first.ring.one, second.gen(b)
    if comb.preceq(triple, nested):
        outer, other = _oriented(triple.J, nested.J, nested.K)
        a = comb.real_d_generator(
            comb.canonical_triple(
                first_ground,
                on_first(nested.I),
                first_node | on_first(outer & ~triple.J),
                on_first(other & ~triple.K),
            )
        )
        return 1, first.gen(a), second.ring.one
    # J′ ⊔ K′ lies inside I.
    a = comb.real_d_generator(
        comb.canonical_triple(
            first_ground,
            first_node | on_first(triple.I & nested.I),
            on_first(nested.J),
            on_first(nested.K),
        )
    )
    return 1, first.gen(a), second.ring.one


def _real_lemma(ell: int, crossing: bool) -> Iterator[CheckResult]:
    ground = _standard(ell)
    domain = pc.alphabet_for(comb.REAL, ell)
    target = pc.alphabet_for(comb.REAL, ell + 1)
    ideal = bi.real_ideal(ell + 1) if crossing else None
    for pair in comb.partition_pairs(ground):
        tilde = real_e_tilde(pair)
        for g in domain.generators:
            if g.kind is comb.GeneratorKind.REAL_E:
                if g.pair == pair:
                    continue
            elif comb.preceq(g.triple, pair):
                yield _pair_nested(ell, pair, g)
                continue
            if not crossing:
                continue
            image = f_map(comb.REAL, ell, domain.gen(g))
            for lift in LIFT_SUPERSCRIPTS:
                yield _membership(
                    "lemma-crossing",
                    (str(pair), lift, g.name),
                    ideal,
                    target.gen(tilde[lift]) * image,
                )

    for triple in comb.bullet_triples(ground):
        tilde = real_d_tilde(triple)
        for g in domain.generators:
            if g.kind is comb.GeneratorKind.REAL_E:
                crosses = not comb.preceq(triple, g.pair)
            elif g.triple == triple:
                continue
            else:
                crosses = comb.notcap_triple(triple, g.triple) or comb.notcap_triple(
                    g.triple, triple
                )
            if crosses:
                if not crossing:
                    continue
                image = f_map(comb.REAL, ell, domain.gen(g))
                for lift in LIFT_SUPERSCRIPTS:
                    yield _membership(
                        "lemma-triple-crossing",
                        (str(triple), lift, g.name),
                        ideal,
                        target.gen(tilde[lift]) * image,
                    )
                continue
            sign, a, b = _triple_preimage(triple, g)
            image = sign * fijk_real(ell, triple, [(a, b)])
            yield CheckResult(
                "lemma-triple-nested",
                (str(triple), g.name),
                g.degree,
                image == domain.gen(g),
            )


def lemma_transport(family: str, ell: int, crossing: bool = True) -> List[CheckResult]:
    """Products of the lifted classes with F-images reduce to images of subcurve classes.

    Complex: D̃⁰_{J,K} for every {J,K}. Real: ℝẼ and ℝD̃ lifts for ∘ = 0, −.
    With `crossing` false only the nested identities are evaluated, so the ideal at ℓ+1 is
    never built.
    """
    _check_level(family, ell)
    if family == comb.COMPLEX:
        return list(_complex_lemma(ell, crossing))
    return list(_real_lemma(ell, crossing))
