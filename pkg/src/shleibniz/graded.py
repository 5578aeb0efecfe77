"""Graded vector spaces over the rationals: bases, Koszul signs, unshuffles.

Everything downstream works with a finite homogeneous basis of an integer-graded
vector space V = (+) V_n and exact rational coefficients.  The sign conventions
are fixed once here and consumed everywhere else:

* Koszul rule for moving graded symbols past each other: exchanging adjacent
  symbols of degrees p and q costs (-1)^(p*q).  The Koszul sign eps(sigma) of a
  permutation acting on symbols of given degrees is the product of these costs
  over the inversions of sigma.
* The anti-Koszul sign chi(sigma) = sgn(sigma) * eps(sigma).
* Applying a tensor product of homogeneous operators to homogeneous arguments,
  (A_1 (x) ... (x) A_n)(v_1 (x) ... (x) v_n) picks up
  (-1)^(sum_j |A_j| * (|v_1| + ... + |v_{j-1}|)); see ``layer_sign``.

The formal suspension s raises every degree by one; its tensor powers are
ordinary operator layers under the rule above, so s(i) and s^{-1}(i) need no
special casing and s^{-1}(i) s(i) = (-1)^(i(i-1)/2) falls out of ``layer_sign``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import MalformedInputError

Scalar = Fraction


@dataclass(frozen=True)
class GradedBasis:
    """Ordered homogeneous basis with integer degrees."""

    names: tuple[str, ...]
    degrees: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.names) != len(self.degrees):
            raise MalformedInputError(
                f"basis has {len(self.names)} names but {len(self.degrees)} degrees"
            )
        if len(set(self.names)) != len(self.names):
            raise MalformedInputError("basis names must be distinct")

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise MalformedInputError(f"unknown basis name {name!r}") from None

    def degree(self, index: int) -> int:
        return self.degrees[index]

    def vector(self, key: int | str) -> "Element":
        index = self.index(key) if isinstance(key, str) else key
        return Element(self, {index: Fraction(1)})

    def vectors(self) -> Iterator["Element"]:
        for i in range(len(self)):
            yield self.vector(i)

    def index_tuples(self, length: int) -> Iterator[tuple[int, ...]]:
        """All tuples of basis indices of the given length, lexicographic."""
        return itertools.product(range(len(self)), repeat=length)


class Shift(Enum):
    """Formal degree shift: RAISE is the suspension s, LOWER its inverse."""

    RAISE = 1
    LOWER = -1


def shifted_degrees(basis: GradedBasis, shift: Shift) -> GradedBasis:
    """Same names, every degree moved by +1 (RAISE) or -1 (LOWER)."""
    return GradedBasis(basis.names, tuple(d + shift.value for d in basis.degrees))


class Element:
    """Sparse vector over a GradedBasis with Fraction coefficients.

    Immutable by convention; all operations return fresh elements.  Zero
    coefficients are never stored.
    """

    __slots__ = ("basis", "coeffs")

    def __init__(self, basis: GradedBasis, coeffs: Mapping[int, Fraction | int] | None = None):
        clean: dict[int, Fraction] = {}
        if coeffs:
            for i, c in coeffs.items():
                if not 0 <= i < len(basis):
                    raise MalformedInputError(f"basis index {i} out of range")
                c = Fraction(c)
                if c:
                    clean[i] = c
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Element is immutable")

    @staticmethod
    def zero(basis: GradedBasis) -> "Element":
        return Element(basis, None)

    def is_zero(self) -> bool:
        return not self.coeffs

    def items(self) -> list[tuple[int, Fraction]]:
        return sorted(self.coeffs.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.basis == other.basis and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.basis, tuple(self.items())))

    def _require_same_basis(self, other: "Element") -> None:
        if self.basis != other.basis:
            raise MalformedInputError("elements live over different bases")

    def __add__(self, other: "Element") -> "Element":
        self._require_same_basis(other)
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, Fraction(0)) + c
        return Element(self.basis, out)

    def __sub__(self, other: "Element") -> "Element":
        self._require_same_basis(other)
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, Fraction(0)) - c
        return Element(self.basis, out)

    def __neg__(self) -> "Element":
        return Element(self.basis, {i: -c for i, c in self.coeffs.items()})

    def scale(self, scalar: Fraction | int) -> "Element":
        scalar = Fraction(scalar)
        return Element(self.basis, {i: scalar * c for i, c in self.coeffs.items()})

    def __rmul__(self, scalar: Fraction | int) -> "Element":
        return self.scale(scalar)

    def homogeneous_degree(self) -> int | None:
        """Common degree of the support, None for zero, error if mixed."""
        degs = {self.basis.degree(i) for i in self.coeffs}
        if not degs:
            return None
        if len(degs) > 1:
            raise MalformedInputError(f"element is not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def reshape(self, basis: GradedBasis) -> "Element":
        """Same coefficients viewed over another basis of equal length.

        Used for the suspension: names are preserved, degrees move.
        """
        if len(basis) != len(self.basis):
            raise MalformedInputError("reshape target has different dimension")
        return Element(basis, dict(self.coeffs))

    def __repr__(self) -> str:
        return f"Element({format_element(self)})"


def format_element(elt: Element) -> str:
    """Render deterministically, e.g. '1/2 g1 + h - 2 w'; zero renders as '0'."""
    items = elt.items()
    if not items:
        return "0"
    parts: list[str] = []
    for pos, (i, c) in enumerate(items):
        name = elt.basis.names[i]
        mag = abs(c)
        body = name if mag == 1 else f"{mag} {name}"
        if pos == 0:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


@dataclass(frozen=True)
class Permutation:
    """Permutation of {1, ..., n} stored as the tuple (sigma(1), ..., sigma(n))."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise MalformedInputError(f"not a permutation of 1..{n}: {self.images}")

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(1, n + 1)))

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self . other)(i) = self(other(i))."""
        if self.size != other.size:
            raise MalformedInputError("cannot compose permutations of different sizes")
        return Permutation(tuple(self(other(i)) for i in range(1, self.size + 1)))

    def inversions(self) -> list[tuple[int, int]]:
        """Pairs (a, b) with a < b and sigma(a) > sigma(b), positions 1-based."""
        n = self.size
        return [
            (a, b)
            for a in range(1, n + 1)
            for b in range(a + 1, n + 1)
            if self(a) > self(b)
        ]

    def apply_to(self, items: Sequence) -> tuple:
        """(x_1, ..., x_n) |-> (x_sigma(1), ..., x_sigma(n))."""
        if len(items) != self.size:
            raise MalformedInputError("permutation size does not match tuple length")
        return tuple(items[self(i) - 1] for i in range(1, self.size + 1))


def sign_of_permutation(perm: Permutation) -> int:
    return -1 if len(perm.inversions()) % 2 else 1


def koszul_sign(perm: Permutation, degrees: Sequence[int]) -> int:
    """Koszul sign eps(sigma) for symbols x_1..x_n of the given degrees.

    degrees[i-1] is the degree of x_i in the unpermuted order; each inversion
    (a, b) of sigma contributes (-1)^(|x_sigma(a)| * |x_sigma(b)|).
    """
    if len(degrees) != perm.size:
        raise MalformedInputError("degree list does not match permutation size")
    exponent = 0
    for a, b in perm.inversions():
        exponent += degrees[perm(a) - 1] * degrees[perm(b) - 1]
    return -1 if exponent % 2 else 1


def anti_koszul_sign(perm: Permutation, degrees: Sequence[int]) -> int:
    """chi(sigma) = sgn(sigma) * eps(sigma)."""
    return sign_of_permutation(perm) * koszul_sign(perm, degrees)


def unshuffles(p: int, q: int) -> list[Permutation]:
    """All (p, q)-unshuffles of S_{p+q}: sigma(1)<...<sigma(p), sigma(p+1)<...<sigma(p+q).

    Returned in lexicographic order of the first block; there are C(p+q, p).
    """
    if p < 0 or q < 0:
        raise MalformedInputError("unshuffle block sizes must be nonnegative")
    n = p + q
    out: list[Permutation] = []
    universe = range(1, n + 1)
    for first in itertools.combinations(universe, p):
        rest = tuple(i for i in universe if i not in first)
        out.append(Permutation(first + rest))
    return out


# A layer factor is (degree, fn); fn None means the identity.  fn must be a
# linear map homogeneous of exactly that degree for the sign to be meaningful.
LayerFactor = tuple[int, Callable[[Element], Element] | None]


def layer_sign(op_degrees: Sequence[int], arg_degrees: Sequence[int]) -> int:
    """Koszul sign of (A_1 (x) ... (x) A_n) hitting homogeneous v_1 (x) ... (x) v_n.

    Each A_j must jump over v_1..v_{j-1}: sign (-1)^(sum_j |A_j|*(d_1+...+d_{j-1})).
    """
    if len(op_degrees) != len(arg_degrees):
        raise MalformedInputError("operator layer and argument tuple differ in length")
    exponent = 0
    prefix = 0
    for opdeg, argdeg in zip(op_degrees, arg_degrees):
        exponent += opdeg * prefix
        prefix += argdeg
    return -1 if exponent % 2 else 1


def apply_layer(
    factors: Sequence[LayerFactor], args: Sequence[tuple[Element, int]]
) -> tuple[int, list[tuple[Element, int]]]:
    """Apply one tensor layer to a tuple of homogeneous slots.

    Each slot is (element, formal degree); the formal degree is tracked even
    when the element is zero so later layers still see consistent signs.
    Returns (sign, new slots).
    """
    if len(factors) != len(args):
        raise MalformedInputError("layer width does not match argument count")
    sign = layer_sign([d for d, _ in factors], [deg for _, deg in args])
    out: list[tuple[Element, int]] = []
    for (fdeg, fn), (elt, deg) in zip(factors, args):
        out.append((fn(elt) if fn is not None else elt, deg + fdeg))
    return sign, out


def suspension_factor(src: GradedBasis, shift: Shift) -> LayerFactor:
    """The shift s (or s^{-1}) as a layer factor from the given source basis."""
    target = shifted_degrees(src, shift)
    return (shift.value, lambda e: e.reshape(target))


def all_degree_tuples(values: Iterable[int], length: int) -> Iterator[tuple[int, ...]]:
    """Cartesian power, used by exhaustive sign tests."""
    return itertools.product(tuple(values), repeat=length)
