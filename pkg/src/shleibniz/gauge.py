"""Deformation validation, Maurer-Cartan elements, and gauge equivalence.

A gauge family is a collection xi_1, ..., xi_m of degree-0 derivations; it acts
on a deformation family delta_t order by order through the terminating series

    delta'_n = delta_n + sum_{i+j=n} [delta_i, xi_j]
             + (1/2!) sum_{i+j+k=n} [[delta_i, xi_j], xi_k] + ...

(every xi carries order >= 1, so only finitely many terms reach order n).  On
the tensor coalgebra the same data exponentiates: with

    Xi = sum_j N_{j+1}(xi_j (x) 1^j)   lifted as a coderivation,

the transformed codifferential is the conjugate partial' = e^{-Xi} partial e^{Xi},
the exponential e^{Xi} is comultiplicative, and expanding exp([-, Xi]) order by
order reproduces delta'_n component-wise.  All three formulations are checked
exactly on finite scopes.

A Maurer-Cartan element theta_t = t theta_1 + ... + t^m theta_m of a dg Lie
algebra (delta_0 theta_n + (1/2) sum_{p+q=n} {theta_p, theta_q} = 0 for
n <= m) induces the family delta_n = {theta_n, -}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .coalgebra import (
    CoderivationSpec,
    TensorElement,
    Word,
    comultiply,
    comultiply_tensor,
    evaluate_coderivation,
    evaluate_on_tensor,
    hom_bracket,
    TensorPairElement,
)
from .derived import DeformationFamily, build_codifferential
from .errors import MalformedInputError, MCRejectionError, PreconditionError
from .graded import Element, GradedBasis
from .multiop import (
    DgLeibnizAlgebra,
    MultiOp,
    check_derivation,
    check_skewsymmetry,
    commutator,
    compose_unary,
    n_i_d,
)
from .results import Verdict, Violation


@dataclass(frozen=True)
class GaugeFamily:
    """xi_1, ..., xi_m: degree-0 derivations of the bracket, orders 1 and up."""

    bracket: MultiOp
    xis: tuple[MultiOp, ...]

    def __post_init__(self) -> None:
        for k, xi in enumerate(self.xis):
            order = k + 1
            if xi.basis != self.bracket.basis:
                raise MalformedInputError(f"xi_{order} lives over a foreign basis")
            if xi.arity != 1 or xi.degree != 0:
                raise MalformedInputError(f"xi_{order} must have arity 1 and degree 0")
            if check_derivation(xi, self.bracket):
                raise PreconditionError(f"xi_{order} is not a derivation of the bracket")

    @property
    def basis(self) -> GradedBasis:
        return self.bracket.basis

    @property
    def order(self) -> int:
        return len(self.xis)

    def xi(self, n: int) -> MultiOp:
        """xi_n for n >= 1, zero beyond the stored order."""
        if n < 1:
            raise MalformedInputError("gauge orders start at 1")
        if n <= self.order:
            return self.xis[n - 1]
        return MultiOp.zero(self.basis, 1, 0)

    def negated(self) -> "GaugeFamily":
        return GaugeFamily(self.bracket, tuple(-xi for xi in self.xis))


@dataclass(frozen=True)
class McElement:
    """theta_1, ..., theta_m: the orders of a candidate Maurer-Cartan element."""

    thetas: tuple[Element, ...]

    def __post_init__(self) -> None:
        if not self.thetas:
            raise MalformedInputError("a Maurer-Cartan element needs at least theta_1")
        for k, theta in enumerate(self.thetas):
            deg = theta.homogeneous_degree()
            if deg is not None and deg != 1:
                raise MalformedInputError(f"theta_{k + 1} must be homogeneous of degree 1")

    @property
    def order(self) -> int:
        return len(self.thetas)

    def theta(self, n: int) -> Element | None:
        """Order-n component, None beyond the truncation (meaning zero)."""
        if 1 <= n <= len(self.thetas):
            return self.thetas[n - 1]
        return None


def check_deformation(fam: DeformationFamily) -> list[Violation]:
    """Derivation rule for every delta_i and the square-zero residual for n <= m.

    The residual at order n is sum_{i+j=n} delta_i delta_j applied to each
    basis vector.  Orders beyond m are outside the truncation contract and are
    not checked here.
    """
    violations: list[Violation] = []
    for i, delta in enumerate(fam.deltas):
        for v in check_derivation(delta, fam.bracket):
            violations.append(Violation("deformation-derivation", (i,) + v.site, v.residual))
    for n in range(fam.order + 1):
        residual_op = MultiOp.zero(fam.basis, 1, 2)
        for i in range(n + 1):
            if i <= fam.order and n - i <= fam.order:
                residual_op = residual_op + compose_unary(fam.deltas[i], fam.deltas[n - i])
        for b in range(len(fam.basis)):
            r = residual_op.apply_indices((b,))
            if not r.is_zero():
                violations.append(
                    Violation("deformation-square", (n, fam.basis.names[b]), r)
                )
    return violations


def adjoint_op(bracket: MultiOp, elt: Element, degree: int) -> MultiOp:
    """{elt, -} as an arity-1 operation; degree must match elt when nonzero."""
    got = elt.homogeneous_degree()
    if got is not None and got != degree:
        raise MalformedInputError(f"element has degree {got}, expected {degree}")
    basis = bracket.basis
    return MultiOp.from_function(
        basis, 1, degree, lambda key: bracket.apply([elt, basis.vector(key[0])])
    )


def mc_to_deformation(algebra: DgLeibnizAlgebra, mc: McElement) -> DeformationFamily:
    """delta_n = {theta_n, -} after validating the Maurer-Cartan equation.

    Preconditions: the bracket is graded skewsymmetric (a dg Lie algebra) and
    delta_0 theta_n + (1/2) sum_{p+q=n} {theta_p, theta_q} vanishes at every
    order.  A truncated element has theta_n = 0 beyond its last component,
    so the quadratic terms still contribute up to twice the truncation order
    and the equation is vacuous after that; the first failing order raises
    MCRejectionError.
    """
    bracket = algebra.bracket
    if not check_skewsymmetry(bracket).passed:
        raise PreconditionError("bracket is not graded skewsymmetric (need a dg Lie algebra)")
    half = Fraction(1, 2)
    for n in range(1, 2 * mc.order + 1):
        theta_n = mc.theta(n)
        residual = (
            algebra.differential.apply([theta_n])
            if theta_n is not None
            else Element(algebra.basis, {})
        )
        for p in range(1, n):
            left, right = mc.theta(p), mc.theta(n - p)
            if left is None or right is None:
                continue
            residual = residual + bracket.apply([left, right]).scale(half)
        if not residual.is_zero():
            raise MCRejectionError(n, residual)
    deltas = [algebra.differential]
    deltas += [adjoint_op(bracket, theta, 1) for theta in mc.thetas]
    return DeformationFamily(bracket, tuple(deltas))


def gauge_transform(
    fam: DeformationFamily, gauge: GaugeFamily, order: int | None = None
) -> DeformationFamily:
    """Apply the nested-commutator series, truncated at the target order.

    order defaults to order(fam); the series in p terminates on its own since
    the p-th term carries order >= p.
    """
    if gauge.bracket != fam.bracket:
        raise MalformedInputError("gauge and family belong to different brackets")
    target = fam.order if order is None else order
    if target < fam.order:
        raise MalformedInputError("cannot transform below the family order")
    zero = MultiOp.zero(fam.basis, 1, 1)
    current: list[MultiOp] = [fam.delta(n) for n in range(target + 1)]
    total: list[MultiOp] = list(current)
    for p in range(1, target + 1):
        nxt: list[MultiOp] = [zero] * (target + 1)
        for n in range(target + 1):
            acc = zero
            for b in range(1, n + 1):
                if b <= gauge.order and not current[n - b].is_zero():
                    acc = acc + commutator(current[n - b], gauge.xis[b - 1])
            nxt[n] = acc
        current = nxt
        coeff = Fraction(1, math.factorial(p))
        total = [t + c.scale(coeff) for t, c in zip(total, current)]
        if all(c.is_zero() for c in current):
            break
    return DeformationFamily(fam.bracket, tuple(total))


def build_xi(gauge: GaugeFamily) -> CoderivationSpec:
    """Xi = sum_j N_{j+1}(xi_j (x) 1^j) as a degree-0 coderivation spec."""
    components = {
        j + 1: n_i_d(gauge.bracket, gauge.xis[j - 1], j + 1)
        for j in range(1, gauge.order + 1)
    }
    return CoderivationSpec(gauge.basis, 0, components)


def _negate_spec(spec: CoderivationSpec) -> CoderivationSpec:
    return CoderivationSpec(
        spec.basis, spec.degree, {a: -op for a, op in spec.components.items()}
    )


def exp_xi(spec: CoderivationSpec, word: Word) -> TensorElement:
    """e^(spec) applied to one word; finite because every component shortens words.

    Requires every component arity >= 2 (an arity-1 component would make the
    exponential an infinite series).
    """
    low = spec.min_arity()
    if low is not None and low < 2:
        raise PreconditionError("exponential needs all component arities >= 2")
    total = TensorElement.from_word(spec.basis, word)
    term = total
    p = 0
    while not term.is_zero():
        p += 1
        term = evaluate_on_tensor(spec, term).scale(Fraction(1, p))
        total = total + term
    return total


def exp_on_tensor(spec: CoderivationSpec, te: TensorElement) -> TensorElement:
    out = TensorElement.zero(te.basis)
    for word, c in te.terms.items():
        out = out + exp_xi(spec, word).scale(c)
    return out


def _hom_commutator_step(
    components: dict[int, MultiOp], xi_spec: CoderivationSpec, max_arity: int
) -> dict[int, MultiOp]:
    """One application of [-, Xi] to an arity-indexed operator family."""
    out: dict[int, MultiOp] = {}
    for a, f in components.items():
        for b, x in xi_spec.components.items():
            r = a + b - 1
            if r > max_arity or f.is_zero():
                continue
            term = hom_bracket(f, x)
            out[r] = out[r] + term if r in out else term
    return out


def check_gauge_equivalence(
    fam: DeformationFamily,
    gauge: GaugeFamily,
    max_len: int = 4,
    first_violation: bool = False,
) -> Verdict:
    """Three formulations of the gauge action, compared exactly.

    The family is first extended by zero deltas to order max_len - 1 so that
    every transformed order acting on words of length <= max_len is present;
    components of arity a only touch words of length >= a, which makes the
    finite comparison exact.  Sub-checks:

    * conjugation: partial' = e^{-Xi} partial e^{Xi} on words of length <= max_len;
    * comultiplicativity: Delta e^{Xi} = (e^{Xi} (x) e^{Xi}) Delta on the same words;
    * order expansion: exp([-, Xi]) applied to partial reproduces the
      nested-commutator series component by component in arity;
    * invertibility: e^{Xi} e^{-Xi} is the identity on the same words.
    """
    if max_len < 1:
        raise MalformedInputError("max_len must be >= 1")
    fam_x = fam.extended(max(fam.order, max_len - 1))
    transformed = gauge_transform(fam_x, gauge)
    partial = build_codifferential(fam_x)
    partial_prime = build_codifferential(transformed)
    xi_spec = build_xi(gauge)
    neg_xi = _negate_spec(xi_spec)
    basis = fam.basis
    violations: list[Violation] = []

    def bail() -> bool:
        return first_violation and bool(violations)

    for length in range(1, max_len + 1):
        for word in basis.index_tuples(length):
            names = tuple(basis.names[i] for i in word)
            lhs = evaluate_coderivation(partial_prime, word)
            rhs = exp_on_tensor(
                neg_xi, evaluate_on_tensor(partial, exp_xi(xi_spec, word))
            )
            if lhs != rhs:
                violations.append(Violation("gauge-conjugation", names, lhs - rhs))
                if bail():
                    return Verdict(False, violations)
            # Delta e^Xi versus (e^Xi (x) e^Xi) Delta; Xi has degree 0, no signs
            grouped = comultiply_tensor(exp_xi(xi_spec, word))
            acc: dict[tuple[Word, Word], Fraction] = {}
            for (w1, w2), c in comultiply(basis, word).terms.items():
                for w1p, c1 in exp_xi(xi_spec, w1).terms.items():
                    for w2p, c2 in exp_xi(xi_spec, w2).terms.items():
                        key = (w1p, w2p)
                        acc[key] = acc.get(key, Fraction(0)) + c * c1 * c2
            residual = grouped - TensorPairElement(basis, acc)
            if not residual.is_zero():
                violations.append(Violation("gauge-comultiplicative", names, residual))
                if bail():
                    return Verdict(False, violations)
            round_trip = exp_on_tensor(neg_xi, exp_xi(xi_spec, word))
            identity = TensorElement.from_word(basis, word)
            if round_trip != identity:
                violations.append(
                    Violation("gauge-exp-inverse", names, round_trip - identity)
                )
                if bail():
                    return Verdict(False, violations)

    # exp([-, Xi]) on the codifferential, arity by arity
    max_arity = fam_x.order + 1
    expanded: dict[int, MultiOp] = dict(partial.components)
    current: dict[int, MultiOp] = dict(partial.components)
    p = 0
    while current:
        p += 1
        current = _hom_commutator_step(current, xi_spec, max_arity)
        coeff = Fraction(1, math.factorial(p))
        for a, op in current.items():
            scaled = op.scale(coeff)
            expanded[a] = expanded[a] + scaled if a in expanded else scaled
    for a in range(1, max_arity + 1):
        zero = MultiOp.zero(basis, a, 1)
        got = expanded.get(a, zero)
        want = partial_prime.components.get(a, zero)
        if got != want:
            violations.append(
                Violation(
                    "gauge-order-expansion",
                    (a,),
                    None,
                    f"arity-{a} component of exp([-, Xi]) partial "
                    "differs from the transformed codifferential",
                )
            )
            if bail():
                return Verdict(False, violations)
    return Verdict.from_violations(violations)
