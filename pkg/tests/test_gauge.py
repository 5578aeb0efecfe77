"""Deformation validation, gauge action, and Maurer-Cartan elements."""

from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from shleibniz import fixtures as shipped
from shleibniz.coalgebra import (
    CoderivationSpec,
    TensorElement,
    TensorPairElement,
    comultiply,
    comultiply_tensor,
    evaluate_coderivation,
    evaluate_on_tensor,
)
from shleibniz.errors import MalformedInputError, MCRejectionError, PreconditionError
from shleibniz.gauge import (
    GaugeFamily,
    McElement,
    adjoint_op,
    build_xi,
    check_deformation,
    check_gauge_equivalence,
    exp_on_tensor,
    exp_xi,
    gauge_transform,
    mc_to_deformation,
)
from shleibniz.graded import Element
from shleibniz.multiop import DgLeibnizAlgebra, MultiOp, commutator, n_i_d


def test_check_deformation_passes_on_fixtures(docs, family_names):
    for name in family_names:
        assert check_deformation(docs[name].to_family()) == [], name


def test_check_deformation_rejects_every_perturbed_fixture(docs, family_names):
    for name in family_names:
        tweak = shipped.perturbation(name)
        bad = shipped.perturbed_family(docs[name], tweak)
        violations = check_deformation(bad)
        assert violations, name
        squares = [v for v in violations if v.check == "deformation-square"]
        assert squares, name
        assert any(v.site[0] == 2 * tweak.order or v.site[0] >= tweak.order
                   for v in squares), name


def test_check_deformation_flags_non_derivation():
    doc = shipped.load_fixture("heis3w")
    fam = doc.to_family()
    basis = fam.basis
    from shleibniz.derived import DeformationFamily

    bump = MultiOp(basis, 1, 1, {(basis.index("g1"),): basis.vector("w")})
    bad = DeformationFamily(fam.bracket, (fam.delta(0) + bump,) + fam.deltas[1:])
    checks = {v.check for v in check_deformation(bad)}
    assert "deformation-derivation" in checks


def test_gauge_family_validation():
    doc = shipped.load_fixture("endo2")
    bracket = doc.to_bracket()
    basis = bracket.basis
    not_der = MultiOp(basis, 1, 0, {(basis.index("E00"),): basis.vector("E11")})
    with pytest.raises(PreconditionError):
        GaugeFamily(bracket, (not_der,))
    wrong_degree = MultiOp(basis, 1, 1, {(basis.index("E00"),): basis.vector("E10")})
    with pytest.raises(MalformedInputError):
        GaugeFamily(bracket, (wrong_degree,))
    gauge = doc.to_gauge()
    with pytest.raises(MalformedInputError):
        gauge.xi(0)
    assert gauge.xi(gauge.order + 1).is_zero()


def test_gauge_transform_first_orders_by_hand():
    # delta'_1 = delta_1 + [delta_0, xi_1]
    # delta'_2 = delta_2 + [delta_1, xi_1] + [delta_0, xi_2]
    #          + (1/2) [[delta_0, xi_1], xi_1]
    doc = shipped.load_fixture("endo2")
    fam = doc.to_family()
    gauge = doc.to_gauge()
    out = gauge_transform(fam, gauge)
    xi1, xi2 = gauge.xi(1), gauge.xi(2)
    d0, d1, d2 = fam.delta(0), fam.delta(1), fam.delta(2)
    assert out.delta(0) == d0
    assert out.delta(1) == d1 + commutator(d0, xi1)
    want2 = (
        d2
        + commutator(d1, xi1)
        + commutator(d0, xi2)
        + commutator(commutator(d0, xi1), xi1).scale(Fraction(1, 2))
    )
    assert out.delta(2) == want2


def test_gauge_transform_preserves_validity(docs, family_names):
    for name in family_names:
        doc = docs[name]
        gauge = doc.to_gauge()
        if gauge is None:
            continue
        out = gauge_transform(doc.to_family(), gauge)
        assert check_deformation(out) == [], name


def test_gauge_transform_round_trip_is_exact():
    doc = shipped.load_fixture("endo2")
    fam = doc.to_family()
    gauge = doc.to_gauge()
    assert gauge_transform(gauge_transform(fam, gauge), gauge.negated()) == fam


def test_empty_gauge_acts_trivially():
    fam = shipped.load_fixture("heisab").to_family()
    identity = GaugeFamily(fam.bracket, ())
    assert gauge_transform(fam, identity) == fam


def test_gauge_transform_preconditions():
    fam = shipped.load_fixture("heisab").to_family()
    foreign = shipped.load_fixture("endo2").to_gauge()
    with pytest.raises(MalformedInputError):
        gauge_transform(fam, foreign)
    gauge = shipped.load_fixture("heisab").to_gauge()
    with pytest.raises(MalformedInputError):
        gauge_transform(fam, gauge, order=fam.order - 1)


def test_exp_xi_matches_manual_series_on_three_letters():
    doc = shipped.load_fixture("endo2")
    gauge = doc.to_gauge()
    spec = build_xi(gauge)
    basis = gauge.basis
    word = tuple(basis.index(n) for n in ("E10", "E01", "E00"))
    base = TensorElement.from_word(basis, word)
    once = evaluate_coderivation(spec, word)
    twice = evaluate_on_tensor(spec, once)
    # Xi shortens words, so on three letters the series stops after Xi^2
    assert evaluate_on_tensor(spec, twice).is_zero()
    manual = base + once + twice.scale(Fraction(1, 2))
    assert exp_xi(spec, word) == manual


def test_exp_xi_inverse_on_all_short_words():
    doc = shipped.load_fixture("endo2")
    gauge = doc.to_gauge()
    spec = build_xi(gauge)
    neg = CoderivationSpec(
        spec.basis, spec.degree, {a: -op for a, op in spec.components.items()}
    )
    basis = gauge.basis
    for length in (1, 2, 3):
        for word in itertools.product(range(len(basis)), repeat=length):
            round_trip = exp_on_tensor(neg, exp_xi(spec, word))
            assert round_trip == TensorElement.from_word(basis, word), word


def test_exp_xi_rejects_arity_one_components():
    fam = shipped.load_fixture("endo2").to_family()
    spec = CoderivationSpec(fam.basis, 1, {1: fam.delta(0)})
    with pytest.raises(PreconditionError):
        exp_xi(spec, (0,))


def test_exp_of_odd_coderivation_is_not_comultiplicative():
    # the sign-free group-like rule holds for the degree-0 gauge lifts but
    # must fail for an odd-degree coderivation once words reach length 3
    fam = shipped.load_fixture("endo2").to_family()
    basis = fam.basis
    p2 = n_i_d(fam.bracket, fam.delta(1), 2)
    spec = CoderivationSpec(basis, 1, {2: p2})

    def morphism_residual(word):
        grouped = comultiply_tensor(exp_xi(spec, word))
        acc: dict = {}
        for (w1, w2), c in comultiply(basis, word).terms.items():
            for w1p, c1 in exp_xi(spec, w1).terms.items():
                for w2p, c2 in exp_xi(spec, w2).terms.items():
                    key = (w1p, w2p)
                    acc[key] = acc.get(key, Fraction(0)) + c * c1 * c2
        return grouped - TensorPairElement(basis, acc)

    assert all(
        morphism_residual(w).is_zero()
        for w in itertools.product(range(len(basis)), repeat=2)
    )
    failures = [
        w
        for w in itertools.product(range(len(basis)), repeat=3)
        if not morphism_residual(w).is_zero()
    ]
    assert len(failures) == 24


def test_check_gauge_equivalence_on_fixture_pairs(docs, family_names):
    for name in family_names:
        doc = docs[name]
        gauge = doc.to_gauge()
        if gauge is None:
            continue
        verdict = check_gauge_equivalence(doc.to_family(), gauge, max_len=3)
        assert verdict.passed, name


def test_check_gauge_equivalence_rejects_tiny_scope():
    doc = shipped.load_fixture("endo2")
    with pytest.raises(MalformedInputError):
        check_gauge_equivalence(doc.to_family(), doc.to_gauge(), max_len=0)


def test_adjoint_op_values_and_validation():
    doc = shipped.load_fixture("quartic")
    bracket = doc.to_bracket()
    basis = bracket.basis
    ad_v = adjoint_op(bracket, basis.vector("v"), 1)
    assert ad_v.apply_indices((basis.index("v"),)) == basis.vector("w")
    assert ad_v.apply_indices((basis.index("u"),)) == basis.vector("v").scale(-1)
    with pytest.raises(MalformedInputError):
        adjoint_op(bracket, basis.vector("v"), 2)


def test_mc_element_validation():
    basis = shipped.load_fixture("quartic").to_basis()
    with pytest.raises(MalformedInputError):
        McElement(())
    with pytest.raises(MalformedInputError):
        McElement((basis.vector("u"),))
    mc = McElement((basis.vector("v"),))
    assert mc.order == 1
    assert mc.theta(1) == basis.vector("v")
    assert mc.theta(2) is None


def test_mc_accepted_on_endo2_and_family_is_valid():
    doc = shipped.load_fixture("endo2")
    fam = doc.to_family()
    algebra = DgLeibnizAlgebra(doc.to_basis(), fam.bracket, fam.delta(0))
    induced = mc_to_deformation(algebra, shipped.mc_element("endo2"))
    assert induced.order == 1
    assert check_deformation(induced) == []
    theta = shipped.mc_element("endo2").theta(1)
    assert induced.delta(1) == adjoint_op(fam.bracket, theta, 1)


def test_mc_rejected_on_quartic_at_second_order():
    # theta_1 = v satisfies the linear term, but (1/2){v, v} = w/2 shows up
    # exactly at order 2, inside the doubled truncation window
    doc = shipped.load_fixture("quartic")
    bracket = doc.to_bracket()
    basis = bracket.basis
    algebra = DgLeibnizAlgebra(basis, bracket, MultiOp.zero(basis, 1, 1))
    with pytest.raises(MCRejectionError) as excinfo:
        mc_to_deformation(algebra, shipped.mc_element("quartic"))
    assert excinfo.value.order == 2
    assert excinfo.value.residual == basis.vector("w").scale(Fraction(1, 2))


def test_mc_requires_skewsymmetric_bracket():
    doc = shipped.load_fixture("l2b")
    fam = doc.to_family()
    algebra_args = (doc.to_basis(), fam.bracket, fam.delta(0))
    algebra = DgLeibnizAlgebra(*algebra_args)
    theta = McElement((fam.basis.vector("b"),))
    with pytest.raises(PreconditionError):
        mc_to_deformation(algebra, theta)
