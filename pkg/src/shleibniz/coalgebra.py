"""The cofree dual-Leibniz coalgebra on a graded basis and coderivation lifts.

Words are nonempty tuples of basis letters spanning T(V) = V + V^(x)2 + ...
The comultiplication takes unshuffles of all but the last letter,

    Delta(x_1, ..., x_{n+1}) =
        sum_{i=1}^{n} sum_{sigma in (i, n-i)-unshuffles of S_n} eps(sigma)
            (x_sigma(1), ..., x_sigma(i)) (x) (x_sigma(i+1), ..., x_sigma(n), x_{n+1}),

with Delta = 0 on single letters, and satisfies the dual Leibniz axiom

    (1 (x) Delta) Delta = (Delta (x) 1) Delta + ((12) (x) 1) (Delta (x) 1) Delta,

where (12) swaps tensor factors with the Koszul sign.

An arity-i operation f lifts to the coderivation f^c characterised by
Delta f^c = (f^c (x) 1) Delta + (1 (x) f^c) Delta together with corestriction
f; on a word of length n it acts by

    f^c(x_1, ..., x_n) = sum_{k=i}^{n} sum_{sigma in (k-i, i-1)-unshuffles of S_{k-1}}
        eps(sigma) (-1)^(|f|(|x_sigma(1)|+...+|x_sigma(k-i)|))
        (x_sigma(1), ..., x_sigma(k-i), f(x_sigma(k-i+1), ..., x_sigma(k-1), x_k),
         x_{k+1}, ..., x_n),

so the letter x_k feeding the last slot of f is never permuted and every word
produced by a k < n term still ends in x_n.  The bracket of operations is

    (f, g) = f . g^c - (-1)^(|f||g|) g . f^c,

computed by corestricting the composite; on words of length at most four a
cross-check path lifts both arguments and commutes the coderivations instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Mapping

from .errors import MalformedInputError
from .graded import Element, GradedBasis, koszul_sign, unshuffles
from .multiop import MultiOp
from .results import Verdict, Violation

Word = tuple[int, ...]


def word_degree(basis: GradedBasis, word: Word) -> int:
    return sum(basis.degree(i) for i in word)


def format_word(basis: GradedBasis, word: Word) -> str:
    return "(" + ",".join(basis.names[i] for i in word) + ")"


class TensorElement:
    """Sparse element of T(V): map from words to Fraction coefficients."""

    __slots__ = ("basis", "terms")

    def __init__(self, basis: GradedBasis, terms: Mapping[Word, Fraction | int] | None = None):
        clean: dict[Word, Fraction] = {}
        if terms:
            for word, c in terms.items():
                if len(word) < 1:
                    raise MalformedInputError("words must have at least one letter")
                if any(not 0 <= i < len(basis) for i in word):
                    raise MalformedInputError(f"word {word} has a letter out of range")
                c = Fraction(c)
                if c:
                    clean[tuple(word)] = c
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("TensorElement is immutable")

    @staticmethod
    def zero(basis: GradedBasis) -> "TensorElement":
        return TensorElement(basis, None)

    @staticmethod
    def from_word(basis: GradedBasis, word: Word) -> "TensorElement":
        return TensorElement(basis, {tuple(word): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def items(self) -> list[tuple[Word, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.basis == other.basis and self.terms == other.terms

    def __add__(self, other: "TensorElement") -> "TensorElement":
        if self.basis != other.basis:
            raise MalformedInputError("tensor elements live over different bases")
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, Fraction(0)) + c
        return TensorElement(self.basis, out)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + other.scale(-1)

    def scale(self, scalar: Fraction | int) -> "TensorElement":
        scalar = Fraction(scalar)
        return TensorElement(self.basis, {w: scalar * c for w, c in self.terms.items()})

    def __repr__(self) -> str:
        return f"TensorElement({format_tensor_element(self)})"


def format_tensor_element(te: TensorElement) -> str:
    items = te.items()
    if not items:
        return "0"
    parts: list[str] = []
    for pos, (word, c) in enumerate(items):
        body = format_word(te.basis, word)
        if abs(c) != 1:
            body = f"{abs(c)} {body}"
        if pos == 0:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


class TensorPairElement:
    """Sparse element of T(V) (x) T(V)."""

    __slots__ = ("basis", "terms")

    def __init__(
        self,
        basis: GradedBasis,
        terms: Mapping[tuple[Word, Word], Fraction | int] | None = None,
    ):
        clean: dict[tuple[Word, Word], Fraction] = {}
        if terms:
            for (left, right), c in terms.items():
                if len(left) < 1 or len(right) < 1:
                    raise MalformedInputError("pair factors must be nonempty words")
                c = Fraction(c)
                if c:
                    clean[(tuple(left), tuple(right))] = c
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("TensorPairElement is immutable")

    @staticmethod
    def zero(basis: GradedBasis) -> "TensorPairElement":
        return TensorPairElement(basis, None)

    def is_zero(self) -> bool:
        return not self.terms

    def items(self) -> list[tuple[tuple[Word, Word], Fraction]]:
        return sorted(
            self.terms.items(),
            key=lambda kv: (len(kv[0][0]), len(kv[0][1]), kv[0]),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorPairElement):
            return NotImplemented
        return self.basis == other.basis and self.terms == other.terms

    def __add__(self, other: "TensorPairElement") -> "TensorPairElement":
        if self.basis != other.basis:
            raise MalformedInputError("pair elements live over different bases")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return TensorPairElement(self.basis, out)

    def __sub__(self, other: "TensorPairElement") -> "TensorPairElement":
        return self + other.scale(-1)

    def scale(self, scalar: Fraction | int) -> "TensorPairElement":
        scalar = Fraction(scalar)
        return TensorPairElement(self.basis, {k: scalar * c for k, c in self.terms.items()})

    def __repr__(self) -> str:
        items = self.items()
        if not items:
            return "TensorPairElement(0)"
        parts = [
            f"{c} {format_word(self.basis, l)}(x){format_word(self.basis, r)}"
            for (l, r), c in items
        ]
        return "TensorPairElement(" + " + ".join(parts) + ")"


def comultiply(basis: GradedBasis, word: Word) -> TensorPairElement:
    """Comultiplication of one word; zero on single letters."""
    n = len(word) - 1
    if n < 0:
        raise MalformedInputError("cannot comultiply the empty word")
    degs = [basis.degree(i) for i in word[:n]]
    acc: dict[tuple[Word, Word], Fraction] = {}
    for i in range(1, n + 1):
        for sigma in unshuffles(i, n - i):
            eps = koszul_sign(sigma, degs)
            left = tuple(word[sigma(a) - 1] for a in range(1, i + 1))
            right = tuple(word[sigma(a) - 1] for a in range(i + 1, n + 1)) + (word[n],)
            key = (left, right)
            acc[key] = acc.get(key, Fraction(0)) + eps
    return TensorPairElement(basis, acc)


def comultiply_tensor(te: TensorElement) -> TensorPairElement:
    out = TensorPairElement.zero(te.basis)
    for word, c in te.terms.items():
        out = out + comultiply(te.basis, word).scale(c)
    return out


def check_dual_leibniz(basis: GradedBasis, max_len: int) -> Verdict:
    """Dual Leibniz coassociativity on every word of length <= max_len."""
    violations: list[Violation] = []
    for length in range(1, max_len + 1):
        for word in basis.index_tuples(length):
            lhs: dict[tuple[Word, Word, Word], Fraction] = {}
            for (w1, w2), c in comultiply(basis, word).terms.items():
                for (w21, w22), c2 in comultiply(basis, w2).terms.items():
                    key = (w1, w21, w22)
                    lhs[key] = lhs.get(key, Fraction(0)) + c * c2
            rhs: dict[tuple[Word, Word, Word], Fraction] = {}
            for (w1, w2), c in comultiply(basis, word).terms.items():
                for (w11, w12), c1 in comultiply(basis, w1).terms.items():
                    # (Delta (x) 1) Delta, then the same with factors swapped
                    key = (w11, w12, w2)
                    rhs[key] = rhs.get(key, Fraction(0)) + c * c1
                    swap = -1 if (word_degree(basis, w11) * word_degree(basis, w12)) % 2 else 1
                    skey = (w12, w11, w2)
                    rhs[skey] = rhs.get(skey, Fraction(0)) + swap * c * c1
            diff = dict(lhs)
            for k, c in rhs.items():
                diff[k] = diff.get(k, Fraction(0)) - c
            diff = {k: c for k, c in diff.items() if c}
            if diff:
                witness = next(iter(sorted(diff)))
                violations.append(
                    Violation(
                        "dual-leibniz",
                        tuple(basis.names[i] for i in word),
                        None,
                        f"first mismatched triple {witness}: {diff[witness]}",
                    )
                )
    return Verdict.from_violations(violations)


@dataclass(frozen=True)
class CoderivationSpec:
    """A coderivation of T(V) described by its corestriction components.

    components[i] is the arity-i operation whose lift contributes; all
    components share one degree.  The induced map on a word of length n sums
    the lifts of every component of arity <= n.
    """

    basis: GradedBasis
    degree: int
    components: Mapping[int, MultiOp]

    def __post_init__(self) -> None:
        frozen: dict[int, MultiOp] = {}
        for arity, op in self.components.items():
            if op.arity != arity:
                raise MalformedInputError(f"component at key {arity} has arity {op.arity}")
            if op.degree != self.degree:
                raise MalformedInputError(
                    f"component of arity {arity} has degree {op.degree}, spec says {self.degree}"
                )
            if op.basis != self.basis:
                raise MalformedInputError("component lives over a foreign basis")
            if not op.is_zero():
                frozen[arity] = op
        object.__setattr__(self, "components", frozen)

    def arities(self) -> list[int]:
        return sorted(self.components)

    def min_arity(self) -> int | None:
        return min(self.components) if self.components else None


def lift_coderivation(op: MultiOp) -> CoderivationSpec:
    """The unique coderivation extending a single operation."""
    return CoderivationSpec(op.basis, op.degree, {op.arity: op})


def _lift_terms(
    op: MultiOp, word: Word, degs: list[int], k: int
) -> Iterator[tuple[Word, Fraction]]:
    """Terms of the k-th summand of op's lift on one word."""
    i = op.arity
    n = len(word)
    suffix = word[k:]
    for sigma in unshuffles(k - i, i - 1):
        eps = koszul_sign(sigma, degs[: k - 1])
        prefix_positions = [sigma(a) for a in range(1, k - i + 1)]
        inner_positions = [sigma(a) for a in range(k - i + 1, k)]
        prefix = tuple(word[p - 1] for p in prefix_positions)
        inner = tuple(word[p - 1] for p in inner_positions) + (word[k - 1],)
        jumped = sum(degs[p - 1] for p in prefix_positions)
        sign = eps * (-1 if (op.degree * jumped) % 2 else 1)
        image = op.apply_indices(inner)
        for letter, c in image.coeffs.items():
            yield prefix + (letter,) + suffix, sign * c


def decompose_k(op: MultiOp, k: int, basis: GradedBasis, word: Word) -> TensorElement:
    """The k-th summand of the lift of op applied to one word.

    Nonzero only for arity(op) <= k <= len(word); the summands over all k add
    up to the full lift.
    """
    n = len(word)
    if k < op.arity or k > n:
        return TensorElement.zero(basis)
    degs = [basis.degree(i) for i in word]
    acc: dict[Word, Fraction] = {}
    for w, c in _lift_terms(op, word, degs, k):
        acc[w] = acc.get(w, Fraction(0)) + c
    return TensorElement(basis, acc)


def evaluate_coderivation(spec: CoderivationSpec, word: Word) -> TensorElement:
    """Apply the coderivation described by spec to one word."""
    n = len(word)
    basis = spec.basis
    degs = [basis.degree(i) for i in word]
    acc: dict[Word, Fraction] = {}
    for i, op in spec.components.items():
        if i > n:
            continue
        for k in range(i, n + 1):
            for w, c in _lift_terms(op, word, degs, k):
                acc[w] = acc.get(w, Fraction(0)) + c
    return TensorElement(basis, acc)


def evaluate_on_tensor(spec: CoderivationSpec, te: TensorElement) -> TensorElement:
    out = TensorElement.zero(te.basis)
    for word, c in te.terms.items():
        out = out + evaluate_coderivation(spec, word).scale(c)
    return out


def corestriction(te: TensorElement) -> Element:
    """Project onto the single-letter words."""
    coeffs = {w[0]: c for w, c in te.terms.items() if len(w) == 1}
    return Element(te.basis, coeffs)


def check_coderivation_axiom(
    spec: CoderivationSpec,
    max_len: int,
    evaluate: Callable[[Word], TensorElement] | None = None,
) -> Verdict:
    """Delta D = (D (x) 1) Delta + (1 (x) D) Delta on words of length <= max_len.

    evaluate overrides the map being tested (defaults to the lift of spec);
    the override is how deliberately corrupted lifts are exercised.
    """
    basis = spec.basis
    if evaluate is None:
        evaluate = lambda word: evaluate_coderivation(spec, word)
    violations: list[Violation] = []
    for length in range(1, max_len + 1):
        for word in basis.index_tuples(length):
            lhs = comultiply_tensor(evaluate(word))
            acc: dict[tuple[Word, Word], Fraction] = {}
            for (w1, w2), c in comultiply(basis, word).terms.items():
                for w1p, c1 in evaluate(w1).terms.items():
                    key = (w1p, w2)
                    acc[key] = acc.get(key, Fraction(0)) + c * c1
                jump = -1 if (spec.degree * word_degree(basis, w1)) % 2 else 1
                for w2p, c2 in evaluate(w2).terms.items():
                    key = (w1, w2p)
                    acc[key] = acc.get(key, Fraction(0)) + jump * c * c2
            residual = lhs - TensorPairElement(basis, acc)
            if not residual.is_zero():
                violations.append(
                    Violation(
                        "coderivation-axiom",
                        tuple(basis.names[i] for i in word),
                        residual,
                    )
                )
    return Verdict.from_violations(violations)


def apply_to_words(op: MultiOp, te: TensorElement) -> Element:
    """Corestrict op along a tensor element whose words all have op's arity."""
    out: dict[int, Fraction] = {}
    for word, c in te.terms.items():
        if len(word) != op.arity:
            raise MalformedInputError(
                f"word of length {len(word)} fed to an arity-{op.arity} operation"
            )
        image = op.apply_indices(word)
        for i, ci in image.coeffs.items():
            out[i] = out.get(i, Fraction(0)) + c * ci
    return Element(op.basis, out)


def hom_bracket(f: MultiOp, g: MultiOp) -> MultiOp:
    """(f, g) = f . g^c - (-1)^(|f||g|) g . f^c, an operation of arity i+j-1."""
    if f.basis != g.basis:
        raise MalformedInputError("operations live over different bases")
    basis = f.basis
    arity = f.arity + g.arity - 1
    degree = f.degree + g.degree
    f_lift = lift_coderivation(f)
    g_lift = lift_coderivation(g)
    sign = -1 if (f.degree * g.degree) % 2 else 1

    def fn(key: tuple[int, ...]) -> Element:
        first = apply_to_words(f, evaluate_coderivation(g_lift, key))
        second = apply_to_words(g, evaluate_coderivation(f_lift, key))
        return first - second.scale(sign)

    return MultiOp.from_function(basis, arity, degree, fn)


def check_hom_bracket_lift_agreement(f: MultiOp, g: MultiOp, max_len: int = 4) -> Verdict:
    """Cross-check: the lift of (f, g) equals the commutator of the lifts.

    [f^c, g^c] = f^c g^c - (-1)^(|f||g|) g^c f^c, compared word by word for
    lengths <= max_len.
    """
    basis = f.basis
    bracket_lift = lift_coderivation(hom_bracket(f, g))
    f_lift = lift_coderivation(f)
    g_lift = lift_coderivation(g)
    sign = -1 if (f.degree * g.degree) % 2 else 1
    violations: list[Violation] = []
    for length in range(1, max_len + 1):
        for word in basis.index_tuples(length):
            lhs = evaluate_coderivation(bracket_lift, word)
            rhs = evaluate_on_tensor(f_lift, evaluate_coderivation(g_lift, word)) - (
                evaluate_on_tensor(g_lift, evaluate_coderivation(f_lift, word)).scale(sign)
            )
            residual = lhs - rhs
            if not residual.is_zero():
                violations.append(
                    Violation(
                        "hom-bracket-lift",
                        tuple(basis.names[i] for i in word),
                        residual,
                    )
                )
    return Verdict.from_violations(violations)
