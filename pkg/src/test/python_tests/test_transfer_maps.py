# Copyright (c) strata-rings contributors. All rights reserved.
# Licensed under the MIT License.
"""
Tests for the transfer maps from ℓ to ℓ+1 marks.
"""
import json

import betti_recursion as br
import boundary_ideals as bi
import graded_dimension as gd
import poly_core as pc
import pytest
import strata_combinatorics as comb
import strata_utils as utils
import transfer_maps as tm
from hamcrest import (
    assert_that,
    calling,
    equal_to,
    has_entries,
    has_key,
    has_length,
    is_,
    not_,
    raises,
)

from .strata_test_client import constants
from .strata_test_client import utils as test_utils


def _random_poly(alphabet, rng, terms=3, max_exp=2):
    result = alphabet.ring.zero
    for _ in range(terms):
        monom = tuple(rng.randint(0, max_exp) for _ in range(alphabet.size))
        result += pc.polynomial(alphabet, {monom: rng.randint(-4, 4)})
    return result


def _dims_of(family, size):
    return br.betti(family, size).dims


def test_complex_lift_of_one_generator():
    ground = comb.standard_ground(4)
    pair = comb.canonical_pair(ground, [1, 2], [3, 4])
    tilde = tm.complex_tilde(pair)
    assert_that(tilde["+"].name, is_("D{125|34}"))
    assert_that(tilde["0"].name, is_("D{12|345}"))
    lifted = tm.lift_generator(comb.COMPLEX, comb.complex_generator(pair))
    assert_that([(g.name, sign) for g, sign in lifted.images], equal_to(
        [("D{125|34}", 1), ("D{12|345}", 1)]
    ))


def test_real_lifts():
    ground = comb.standard_ground(2)
    pair = comb.canonical_pair(ground, [1], [2])
    tilde = tm.real_e_tilde(pair)
    assert_that(
        {key: g.name for key, g in tilde.items()},
        equal_to({"+": "E{13|2}", "0": "D{3;1|2}", "-": "E{1|23}"}),
    )
    lifted = tm.lift_generator(comb.REAL, comb.real_e_generator(pair))
    assert_that([g.name for g, _ in lifted.images], equal_to(["E{13|2}", "E{1|23}"]))

    triple = comb.canonical_triple(comb.standard_ground(3), [3], [1], [2])
    tilde = tm.real_d_tilde(triple)
    # 1 lies in J, so the grown inner part is the zero class.
    assert_that(tilde["0"].name, is_("D{34;1|2}"))
    assert_that(tilde["+"].name, is_("D{3;14|2}"))
    assert_that(tilde["-"].name, is_("D{3;1|24}"))
    lifted = tm.lift_generator(comb.REAL, comb.real_d_generator(triple))
    assert_that(lifted.images, has_length(3))


def test_leading_classes():
    assert_that(tm.leading_class(comb.COMPLEX, 4).name, is_("D{15|234}"))
    assert_that(tm.leading_class(comb.REAL, 3).name, is_("D{23;14|}"))
    assert_that(
        calling(tm.leading_class).with_args(comb.COMPLEX, 2),
        raises(utils.InvalidArgumentError),
    )


def test_lift_generator_rejects_other_family():
    g = pc.alphabet_for(comb.COMPLEX, 4).generators[0]
    assert_that(
        calling(tm.lift_generator).with_args(comb.REAL, g),
        raises(utils.InvalidArgumentError),
    )
    e = pc.alphabet_for(comb.REAL, 3).generators[0]
    assert_that(
        calling(tm.lift_generator).with_args(comb.COMPLEX, e),
        raises(utils.InvalidArgumentError),
    )


@pytest.mark.parametrize("family, ell", [(comb.COMPLEX, 5), (comb.REAL, 3)])
def test_f_is_multiplicative(family, ell):
    alphabet = pc.alphabet_for(family, ell)

    def _pair(rng):
        return _random_poly(alphabet, rng), _random_poly(alphabet, rng)

    for p, q in test_utils.random_cases(1789 + ell, 500, _pair):
        assert_that(
            tm.f_map(family, ell, p * q),
            equal_to(tm.f_map(family, ell, p) * tm.f_map(family, ell, q)),
        )
        assert_that(
            tm.f_map(family, ell, p - q),
            equal_to(tm.f_map(family, ell, p) - tm.f_map(family, ell, q)),
        )


def test_f_map_rejects_foreign_polynomial():
    stray = pc.alphabet_for(comb.COMPLEX, 5).ring.gens[0]
    assert_that(
        calling(tm.f_map).with_args(comb.COMPLEX, 4, stray),
        raises(utils.AlphabetMismatchError),
    )


def test_fjk_complex_on_one_side():
    ground = comb.standard_ground(5)
    pair = comb.canonical_pair(ground, [1, 2, 3], [4, 5])
    sub = comb.node_ground([1, 2, 3])
    source = pc.alphabet_for(comb.COMPLEX, sub)
    q = source.gen(comb.complex_generator(comb.canonical_pair(sub, [1, 2], [3, comb.NODE])))
    expected = pc.alphabet_for(comb.COMPLEX, 5).gen(
        comb.complex_generator(comb.canonical_pair(ground, [1, 2], [3, 4, 5]))
    )
    assert_that(tm.fjk_complex(5, pair, [1, 2, 3], q), equal_to(expected))
    other = pc.alphabet_for(comb.COMPLEX, comb.node_ground([4, 5])).ring.one
    assert_that(tm.fjk_complex_tensor(5, pair, [(q, other)]), equal_to(expected))


def test_fjk_complex_rejects_bad_sides():
    ground = comb.standard_ground(5)
    pair = comb.canonical_pair(ground, [1, 2, 3], [4, 5])
    one = pc.alphabet_for(comb.COMPLEX, comb.node_ground([1, 2, 3])).ring.one
    assert_that(
        calling(tm.fjk_complex).with_args(5, pair, [1, 2], one),
        raises(utils.InvalidArgumentError),
    )
    assert_that(
        calling(tm.fjk_complex).with_args(6, pair, [1, 2, 3], one),
        raises(utils.InvalidArgumentError),
    )
    wrong_side = pc.alphabet_for(comb.COMPLEX, comb.node_ground([4, 5])).ring.one
    assert_that(
        calling(tm.fjk_complex).with_args(5, pair, [1, 2, 3], wrong_side),
        raises(utils.AlphabetMismatchError),
    )


def test_fjk_real_carries_a_sign():
    ground = comb.standard_ground(3)
    pair = comb.canonical_pair(ground, [1, 2], [3])
    sub = comb.node_ground([1, 2, 3])
    q = pc.alphabet_for(comb.COMPLEX, sub).gen(
        comb.complex_generator(comb.canonical_pair(sub, [1, 2], [3, comb.NODE]))
    )
    expected = pc.alphabet_for(comb.REAL, 3).gen(
        comb.real_d_generator(comb.canonical_triple(ground, [3], [1, 2], []))
    )
    assert_that(tm.fjk_real(3, pair, q), equal_to(-expected))


def test_fijk_real_on_units_is_one():
    ground = comb.standard_ground(4)
    triple = comb.canonical_triple(ground, [4], [1, 2], [3])
    first = pc.alphabet_for(comb.REAL, comb.node_ground([4])).ring.one
    second = pc.alphabet_for(comb.COMPLEX, comb.node_ground([1, 2, 3])).ring.one
    image = tm.fijk_real(4, triple, [(first, second), (first, second)])
    assert_that(image, equal_to(2 * pc.alphabet_for(comb.REAL, 4).ring.one))
    assert_that(
        calling(tm.fijk_real).with_args(4, triple, [(second, first)]),
        raises(utils.AlphabetMismatchError),
    )


@pytest.mark.parametrize(
    "family, ell",
    [
        (comb.COMPLEX, 3),
        (comb.COMPLEX, 4),
        (comb.COMPLEX, 5),
        (comb.REAL, 2),
        pytest.param(comb.REAL, 3, marks=pytest.mark.slow),
    ],
)
def test_f_sends_relations_into_the_next_ideal(family, ell):
    results = tm.f_ideal_transport(family, ell)
    assert_that(len(results), is_(len(bi.ideal_for(family, ell).generators)))
    assert_that([r for r in results if not r.passed], equal_to([]))


def test_phi_on_relations_lands_in_the_ideal():
    presentation = bi.complex_ideal(4)
    target = bi.complex_ideal(5)
    for g in presentation.generators:
        image = tm.phi(tm.PhiInput(comb.COMPLEX, 4, kappa=g.poly))
        assert_that(gd.ideal_contains(target, image), is_(True))
        image = tm.phi(tm.PhiInput(comb.COMPLEX, 4, kappa0=g.poly))
        assert_that(gd.ideal_contains(target, image), is_(True))


def test_phi_of_units_reproduces_lifted_classes():
    alphabet = pc.alphabet_for(comb.COMPLEX, 4)
    target = pc.alphabet_for(comb.COMPLEX, 5)
    ground = comb.standard_ground(4)
    pair = comb.canonical_pair(ground, [1, 2], [3, 4])
    units = (
        pc.alphabet_for(comb.COMPLEX, comb.node_ground([1, 2])).ring.one,
        pc.alphabet_for(comb.COMPLEX, comb.node_ground([3, 4])).ring.one,
    )
    value = tm.PhiInput(
        comb.COMPLEX,
        4,
        kappa0=alphabet.ring.one,
        kappa=alphabet.ring.one,
        pair_terms={pair: [units]},
    )
    expected = (
        target.gen(tm.leading_class(comb.COMPLEX, 4))
        + target.ring.one
        + target.gen(tm.complex_tilde(pair)["0"])
    )
    assert_that(tm.phi(value), equal_to(expected))


def test_phi_complex_has_no_triple_terms():
    ground = comb.standard_ground(4)
    triple = comb.canonical_triple(ground, [4], [1, 2], [3])
    value = tm.PhiInput(comb.COMPLEX, 4, triple_terms={triple: ([], [])})
    assert_that(calling(tm.phi).with_args(value), raises(utils.InvalidArgumentError))


def test_phi_real_pair_terms():
    ground = comb.standard_ground(2)
    pair = comb.canonical_pair(ground, [1], [2])
    unit = pc.alphabet_for(comb.COMPLEX, comb.node_ground([1, 2])).ring.one
    target = pc.alphabet_for(comb.REAL, 3)
    tilde = tm.real_e_tilde(pair)
    image = tm.phi(tm.PhiInput(comb.REAL, 2, pair_terms={pair: (unit, unit)}))
    assert_that(image, equal_to(target.gen(tilde["0"]) + target.gen(tilde["-"])))


@pytest.mark.parametrize("family, ell", [(comb.COMPLEX, 3), (comb.COMPLEX, 4), (comb.REAL, 2)])
def test_phi_is_well_defined(family, ell):
    report = tm.verify_phi_well_defined(family, ell, degree_bound=1)
    assert_that(report.complete, is_(True))
    assert_that(report.failures, equal_to(()))
    assert_that(report.passed, is_(True))
    assert_that(report.degree_bound, is_(1))


@pytest.mark.slow
def test_phi_is_well_defined_real_three_marks():
    report = tm.verify_phi_well_defined(comb.REAL, 3, degree_bound=0)
    assert_that(report.passed, is_(True))
    assert_that(report.checks, not_(has_length(0)))


def test_well_defined_reads_degree_bound_setting():
    with utils.settings_override(verifyDegreeBound=0):
        report = tm.verify_phi_well_defined(comb.COMPLEX, 4)
    assert_that(report.degree_bound, is_(0))


def test_well_defined_report_is_incomplete_past_the_ceiling():
    with utils.settings_override(columnCeiling=1):
        report = tm.verify_phi_well_defined(comb.COMPLEX, 4, degree_bound=0)
    assert_that(report.complete, is_(False))
    assert_that(report.passed, is_(False))


def test_report_document():
    report = tm.verify_phi_well_defined(comb.COMPLEX, 4, degree_bound=0)
    document = tm.report_document(report)
    assert_that(document, has_entries(family="complex", ell=4, passed=True, complete=True))
    first = document["checks"][0]
    assert_that(first, has_key("pass"))
    assert_that(first, not_(has_key("passed")))
    assert_that(json.loads(json.dumps(document))["checks"][0]["pass"], is_(True))


@pytest.mark.parametrize("family, ell", [(comb.COMPLEX, 3), (comb.COMPLEX, 4), (comb.REAL, 2)])
def test_phi_is_surjective_in_every_degree(family, ell):
    for degree in range(gd.top_degree(family, ell + 1) + 1):
        assert_that(tm.verify_phi_surjective(family, ell, degree), is_(True))


@pytest.mark.parametrize("degree", [0, 1, 2])
def test_phi_is_surjective_real_three_marks_low_degrees(degree):
    assert_that(tm.verify_phi_surjective(comb.REAL, 3, degree), is_(True))


@pytest.mark.slow
@pytest.mark.parametrize("degree", [3, 4, 5])
def test_phi_is_surjective_real_three_marks_high_degrees(degree):
    assert_that(tm.verify_phi_surjective(comb.REAL, 3, degree), is_(True))


def test_surjectivity_degree_range():
    assert_that(
        calling(tm.verify_phi_surjective).with_args(comb.REAL, 2, 4),
        raises(utils.InvalidArgumentError),
    )
    assert_that(
        calling(tm.verify_phi_surjective).with_args(comb.COMPLEX, 4, -1),
        raises(utils.InvalidArgumentError),
    )


@pytest.mark.parametrize(
    "family, ell, expected",
    [
        (comb.COMPLEX, 3, (1, 0, 1)),
        (comb.COMPLEX, 4, (1, 0, 5, 0, 1)),
        (comb.REAL, 2, constants.REAL_BETTI[3]),
        (comb.REAL, 3, constants.REAL_BETTI[4]),
    ],
)
def test_domain_dims_match_the_next_level(family, ell, expected):
    assert_that(tm.phi_domain_dims(family, ell, _dims_of), equal_to(expected))
    assert_that(br.betti(family, ell + 1).dims, equal_to(expected))


@pytest.mark.parametrize("family, ell", [(comb.COMPLEX, 4), (comb.COMPLEX, 5), (comb.REAL, 2)])
def test_transport_lemma(family, ell):
    results = tm.lemma_transport(family, ell)
    assert_that(results, not_(has_length(0)))
    assert_that([r for r in results if not r.passed], equal_to([]))


def test_transport_lemma_real_covers_both_lifts():
    results = tm.lemma_transport(comb.REAL, 2)
    crossing = [r for r in results if r.check == "lemma-crossing"]
    assert_that({r.indices[1] for r in crossing}, equal_to({"0", "-"}))
    # Two E classes on [2], each crossing the other once per lift.
    assert_that(crossing, has_length(4))


@pytest.mark.slow
def test_transport_lemma_real_three_marks():
    results = tm.lemma_transport(comb.REAL, 3)
    assert_that(
        {r.check for r in results},
        equal_to(
            {
                "lemma-crossing",
                "lemma-nested",
                "lemma-triple-crossing",
                "lemma-triple-nested",
            }
        ),
    )
    triple_lifts = {r.indices[1] for r in results if r.check == "lemma-triple-crossing"}
    assert_that(triple_lifts, equal_to({"0", "-"}))
    assert_that([r for r in results if not r.passed], equal_to([]))


def test_transport_lemma_nested_identities_real_four_marks():
    results = tm.lemma_transport(comb.REAL, 4, crossing=False)
    assert_that({r.check for r in results}, equal_to({"lemma-nested", "lemma-triple-nested"}))
    assert_that([r for r in results if not r.passed], equal_to([]))
    nested = {r.indices for r in results if r.check == "lemma-triple-nested"}
    # {J′,K′} inside {J,K}, {J,K} inside {J′,K′}, J′⊔K′ inside I, and an E class.
    assert_that(("{1;2|34}", "D{13;2|4}") in nested, is_(True))
    assert_that(("{13;2|4}", "D{1;2|34}") in nested, is_(True))
    assert_that(("{12;3|4}", "D{34;1|2}") in nested, is_(True))
    assert_that(("{1;2|34}", "E{12|34}") in nested, is_(True))


def test_transport_lemma_nested_identities_complex_five_marks():
    results = tm.lemma_transport(comb.COMPLEX, 5, crossing=False)
    assert_that({r.check for r in results}, equal_to({"lemma-nested"}))
    assert_that([r for r in results if not r.passed], equal_to([]))
